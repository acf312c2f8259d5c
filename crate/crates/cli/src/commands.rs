// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.


//! One handler per verb. Each returns a report with everything except the
//! timing fields filled in.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use plb_algebra::closure::transitive_closure;
use plb_algebra::matching::{find_perfect_matching, has_perfect_matching_k};
use plb_algebra::pagerank::pagerank;
use plb_algebra::partition::{heuristic_k, plb_k};
use plb_algebra::{PrimeField, SchurFactorization, SparseMatrix};
use plb_core::counting::{
    count_triangles, count_triangles_hybrid, count_triangles_per_vertex, max_clique, select_delta,
};
use plb_core::generator::{
    erased_configuration, erased_configuration_directed, power_law_degrees, GenSidecar,
};
use plb_core::plb::{check_plb, fit_c2, fit_plb, plot_rows, write_plot_csv, FitOptions};
use plb_core::{DegreeHistogram, DegreeSide, Graph, PlbParams};
use serde_json::{json, Value};

use crate::args::*;
use crate::bench::{self, BenchConfig};
use crate::error::{CliError, Result};
use crate::matrix::{pattern_matrix, random_vector};
use crate::report::{path_string, InputInfo, RunReport};

pub fn execute(cmd: Command) -> Result<RunReport> {
    match cmd {
        Command::Fit(a) => fit(a),
        Command::Check(a) => check(a),
        Command::C2(a) => c2(a),
        Command::Gen(a) => gen(a),
        Command::Triangles(a) => triangles(a),
        Command::Clique(a) => clique(a),
        Command::Tc(a) => tc(a),
        Command::Det(a) => det(a),
        Command::Solve(a) => solve(a),
        Command::Inverse(a) => inverse(a),
        Command::Matching(a) => matching(a),
        Command::Pagerank(a) => pagerank_cmd(a),
        Command::Bench(a) => bench_cmd(a),
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::file(path, e))
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::file(path, e))
}

fn finish(mut w: BufWriter<File>, path: &Path) -> Result<()> {
    w.flush().map_err(|e| CliError::file(path, e))
}

fn load_graph(input: &GraphInput, default: Mode) -> Result<(Graph, InputInfo)> {
    let mode = input.mode.unwrap_or(default);
    let g = Graph::load_edge_list(open(&input.input)?, mode.into())?;
    let info = InputInfo {
        path: path_string(&input.input),
        format: "edges".into(),
        n: g.n(),
        m: g.m(),
        directed: g.is_directed(),
    };
    Ok((g, info))
}

/// `degree count` pairs, `#` comments allowed.
fn read_histogram(path: &Path) -> Result<(DegreeHistogram, InputInfo)> {
    let mut pairs = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| CliError::file(path, e))?;
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let bad = || plb_core::Error::Parse {
            line: i + 1,
            msg: format!("expected `degree count`, got {s:?}"),
        };
        let mut it = s.split_whitespace();
        let k: usize = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let c: usize = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        pairs.push((k, c));
    }
    let h = DegreeHistogram::from_counts(pairs);
    let info = InputInfo {
        path: path_string(path),
        format: "histogram".into(),
        n: h.n(),
        m: h.iter().map(|(k, c)| k * c).sum::<usize>() / 2,
        directed: false,
    };
    Ok((h, info))
}

fn given_params(a: &PlbArgs) -> Result<Option<PlbParams>> {
    match a.alpha {
        Some(alpha) => Ok(Some(PlbParams::new(a.c1, alpha, a.t)?)),
        None => Ok(None),
    }
}

fn fitted_params(g: &Graph) -> Result<PlbParams> {
    let h = g.degree_histogram(DegreeSide::Total)?;
    Ok(fit_plb(&h, FitOptions::default())?.params)
}

/// Threshold for the block partition: explicit, from PLB parameters, or
/// the average-degree heuristic.
fn choose_k(
    explicit: Option<usize>,
    p: Option<&PlbParams>,
    n: usize,
    m: usize,
    rule: KRule,
) -> (usize, &'static str) {
    if let Some(k) = explicit {
        return (k, "explicit");
    }
    match (p, rule) {
        (Some(p), KRule::Threshold(omega)) => bench::threshold_k(n, p, omega),
        (Some(p), KRule::Plb) => (plb_k(n, p.alpha), "n^(1/alpha)"),
        (None, _) => (heuristic_k(n, m), "sqrt(2m/n)"),
    }
}

fn check_omega(omega: f64) -> Result<()> {
    if (2.0..=3.0).contains(&omega) {
        Ok(())
    } else {
        Err(plb_core::Error::Domain(format!("omega must lie in [2, 3], got {omega}")).into())
    }
}

#[derive(Clone, Copy)]
enum KRule {
    Threshold(f64),
    Plb,
}

fn original_ids(g: &Graph, vs: &[usize]) -> Vec<u64> {
    vs.iter().map(|&v| g.original_id(v)).collect()
}

fn fit(a: FitArgs) -> Result<RunReport> {
    let mut r = RunReport::new("fit");
    let (h, info, graph) = if a.histogram {
        if a.with_c2 {
            return Err(CliError::Usage("--with-c2 needs an edge list".into()));
        }
        let (h, info) = read_histogram(&a.graph.input)?;
        (h, info, None)
    } else {
        let (g, info) = load_graph(&a.graph, Mode::Undirected)?;
        (g.degree_histogram(a.side.into())?, info, Some(g))
    };
    let opts = FitOptions {
        c1_max: a.c1_max,
        objective: a.objective.into(),
        ..FitOptions::default()
    };
    r.param("c1_max", a.c1_max);
    r.param("objective", opts.objective);
    r.param("side", format!("{:?}", a.side).to_lowercase());
    let fitted = fit_plb(&h, opts)?;
    let mut result = json!({
        "feasible": fitted.feasible,
        "score": fitted.score,
        "n": h.n(),
        "max_degree": h.max_degree(),
    });
    if let Some(g) = graph.filter(|_| a.with_c2) {
        let c = fit_c2(&g, &fitted.params)?;
        result["c2"] = json!(c.c2);
        result["c2_witness"] = json!(c.witness.map(|v| g.original_id(v)));
    }
    if let Some(path) = &a.plot {
        let mut w = create(path)?;
        write_plot_csv(&plot_rows(&h, &fitted.params), &mut w)?;
        finish(w, path)?;
        result["plot"] = json!(path_string(path));
    }
    r.input = Some(info);
    r.plb_params = Some(fitted.params);
    r.result = result;
    Ok(r)
}

fn check(a: CheckArgs) -> Result<RunReport> {
    let mut r = RunReport::new("check");
    let alpha = a
        .plb
        .alpha
        .ok_or_else(|| CliError::Usage("check needs --alpha".into()))?;
    let p = PlbParams::new(a.plb.c1, alpha, a.plb.t)?;
    let (h, info) = if a.histogram {
        read_histogram(&a.graph.input)?
    } else {
        let (g, info) = load_graph(&a.graph, Mode::Undirected)?;
        (g.degree_histogram(a.side.into())?, info)
    };
    r.param("side", format!("{:?}", a.side).to_lowercase());
    let rep = check_plb(&h, &p);
    let violations = rep.buckets.iter().filter(|b| b.slack < 0.0).count();
    let mut result = json!({
        "satisfied": rep.satisfied,
        "violations": violations,
        "worst": rep.worst.map(|i| &rep.buckets[i]),
        "buckets": rep.buckets,
    });
    if let Some(path) = &a.plot {
        let mut w = create(path)?;
        write_plot_csv(&plot_rows(&h, &p), &mut w)?;
        finish(w, path)?;
        result["plot"] = json!(path_string(path));
    }
    r.input = Some(info);
    r.plb_params = Some(p);
    r.result = result;
    Ok(r)
}

fn c2(a: C2Args) -> Result<RunReport> {
    let mut r = RunReport::new("c2");
    let given = given_params(&a.plb)?;
    let (g, info) = load_graph(&a.graph, Mode::Undirected)?;
    let (p, source) = match given {
        Some(p) => (p, "given"),
        None => (fitted_params(&g)?, "fitted"),
    };
    r.param("plb_source", source);
    let c = fit_c2(&g, &p)?;
    r.input = Some(info);
    r.plb_params = Some(p);
    r.result = json!({
        "c2": c.c2,
        "witness": c.witness.map(|v| g.original_id(v)),
    });
    Ok(r)
}

fn gen(a: GenArgs) -> Result<RunReport> {
    let mut r = RunReport::new("gen");
    r.param("n", a.n);
    r.param("alpha", a.alpha);
    r.param("seed", a.seed);
    r.param("directed", a.directed);
    let d = power_law_degrees(a.n, a.alpha)?;
    let generated = if a.directed {
        erased_configuration_directed(&d, a.seed)?
    } else {
        erased_configuration(&d, a.seed)?
    };
    let g = &generated.graph;
    let mut w = create(&a.output)?;
    g.write_edge_list(&mut w)?;
    finish(w, &a.output)?;

    let sidecar = GenSidecar {
        n_requested: a.n,
        n_realized: g.n(),
        m: g.m(),
        alpha: a.alpha,
        seed: a.seed,
        directed: a.directed,
        erased_edges: generated.erased_edges,
    };
    let sidecar_path = a.sidecar.clone().unwrap_or_else(|| {
        let mut s = a.output.clone().into_os_string();
        s.push(".json");
        PathBuf::from(s)
    });
    let mut w = create(&sidecar_path)?;
    serde_json::to_writer_pretty(&mut w, &sidecar)?;
    finish(w, &sidecar_path)?;

    let mut result = serde_json::to_value(&sidecar)?;
    result["output"] = json!(path_string(&a.output));
    result["sidecar"] = json!(path_string(&sidecar_path));
    r.result = result;
    Ok(r)
}

fn triangles(a: TrianglesArgs) -> Result<RunReport> {
    let mut r = RunReport::new("triangles");
    let given = given_params(&a.plb)?;
    let (g, info) = load_graph(&a.graph, Mode::Undirected)?;
    let hybrid = a.hybrid || a.delta.is_some();
    let result = if hybrid {
        let omega = a.omega.unwrap_or(match a.strategy {
            Strategy::Classical => 3.0,
            Strategy::Strassen => 7f64.log2(),
        });
        check_omega(omega)?;
        r.param("omega", omega);
        r.param("strategy", format!("{:?}", a.strategy).to_lowercase());
        let delta = match a.delta {
            Some(d) => {
                r.param("delta_source", "explicit");
                d
            }
            None => {
                let p = match given {
                    Some(p) => p,
                    None => fitted_params(&g)?,
                };
                r.plb_params = Some(p);
                r.param("neighborhoods", a.neighborhoods);
                if p.alpha >= 3.0 && !a.neighborhoods {
                    // every vertex stays on the combinatorial side
                    r.param("delta_source", "max degree (alpha >= 3)");
                    g.max_degree().max(1)
                } else {
                    r.param("delta_source", "formula");
                    select_delta(g.n(), &p, omega, a.neighborhoods)?
                }
            }
        };
        r.param("delta", delta);
        let h = count_triangles_hybrid(&g, delta, a.strategy.into())?;
        json!({
            "count": h.total,
            "method": "hybrid",
            "low": h.low,
            "high": h.high,
            "n_high": h.n_high,
        })
    } else {
        json!({ "count": count_triangles(&g)?.total, "method": "ordered" })
    };
    let mut result = result;
    if let Some(path) = &a.per_vertex {
        let per = count_triangles_per_vertex(&g)?.per_vertex.unwrap_or_default();
        let mut w = create(path)?;
        let io = |e| CliError::file(path, e);
        writeln!(w, "vertex,triangles").map_err(io)?;
        for (v, t) in per.iter().enumerate() {
            writeln!(w, "{},{}", g.original_id(v), t).map_err(io)?;
        }
        finish(w, path)?;
        result["per_vertex"] = json!(path_string(path));
    }
    r.input = Some(info);
    r.result = result;
    Ok(r)
}

fn clique(a: CliqueArgs) -> Result<RunReport> {
    let mut r = RunReport::new("clique");
    r.param("cap", a.cap);
    let (g, info) = load_graph(&a.graph, Mode::Undirected)?;
    let c = max_clique(&g, a.cap)?;
    r.input = Some(info);
    r.result = json!({ "size": c.size, "witness": original_ids(&g, &c.witness) });
    Ok(r)
}

fn tc(a: TcArgs) -> Result<RunReport> {
    let mut r = RunReport::new("tc");
    let given = given_params(&a.plb)?;
    let (g, info) = load_graph(&a.graph, Mode::Directed)?;
    let (k, source) = choose_k(a.k, given.as_ref(), g.n(), g.m(), KRule::Plb);
    r.param("k", k);
    r.param("k_source", source);
    let (closure, stats) = transitive_closure(&g, k)?;
    let mut result = json!({
        "pairs": closure.pair_count(),
        "cyclic_vertices": closure.cyclic_vertices().len(),
        "k": stats.k,
        "n_k": stats.n_k,
        "m_cd": stats.m_cd,
    });
    if let Some(path) = &a.output {
        let mut w = create(path)?;
        let io = |e| CliError::file(path, e);
        for u in 0..closure.n() {
            for v in closure.reachable(u) {
                writeln!(w, "{} {}", g.original_id(u), g.original_id(v)).map_err(io)?;
            }
        }
        finish(w, path)?;
        result["output"] = json!(path_string(path));
    }
    r.input = Some(info);
    r.plb_params = given;
    r.result = result;
    Ok(r)
}

/// Matrix values are drawn from a stream separate from the algorithm's.
fn value_seed(seed: u64) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15).wrapping_add(1)
}

struct LoadedMatrix {
    field: PrimeField,
    m: SparseMatrix,
    info: InputInfo,
}

fn is_matrix_market(path: &Path) -> Result<bool> {
    let mut first = String::new();
    open(path)?
        .read_line(&mut first)
        .map_err(|e| CliError::file(path, e))?;
    Ok(first.starts_with("%%MatrixMarket"))
}

fn load_matrix(a: &MatrixArgs) -> Result<LoadedMatrix> {
    let field = PrimeField::new(a.field_p)?;
    if is_matrix_market(&a.input)? {
        let (m, field) = SparseMatrix::read_matrix_market(open(&a.input)?, &field)?;
        let info = InputInfo {
            path: path_string(&a.input),
            format: "matrix-market".into(),
            n: m.rows(),
            m: m.nnz(),
            directed: false,
        };
        Ok(LoadedMatrix { field, m, info })
    } else {
        let mode = a.mode.unwrap_or(Mode::Undirected);
        let g = Graph::load_edge_list(open(&a.input)?, mode.into())?;
        let m = pattern_matrix(&field, &g, value_seed(a.seed))?;
        let info = InputInfo {
            path: path_string(&a.input),
            format: "edges".into(),
            n: g.n(),
            m: g.m(),
            directed: g.is_directed(),
        };
        Ok(LoadedMatrix { field, m, info })
    }
}

fn factor(a: &MatrixArgs, r: &mut RunReport) -> Result<(LoadedMatrix, SchurFactorization)> {
    check_omega(a.omega)?;
    let given = given_params(&a.plb)?;
    let lm = load_matrix(a)?;
    let n = lm.m.rows();
    let (k, source) = choose_k(a.k, given.as_ref(), n, lm.m.nnz() / 2, KRule::Threshold(a.omega));
    r.param("k", k);
    r.param("k_source", source);
    r.param("seed", a.seed);
    r.param("p", lm.field.modulus());
    r.param("omega", a.omega);
    r.param("pipeline", format!("{:?}", a.pipeline).to_lowercase());
    let s = match a.pipeline {
        PipelineChoice::Auto => SchurFactorization::new(&lm.field, &lm.m, k, a.seed)?,
        PipelineChoice::Symmetric => SchurFactorization::symmetric(&lm.field, &lm.m, k, a.seed)?,
        PipelineChoice::General => SchurFactorization::general(&lm.field, &lm.m, k, a.seed)?,
    };
    r.plb_params = given;
    Ok((lm, s))
}

fn stats_value(s: &SchurFactorization) -> Result<Value> {
    Ok(serde_json::to_value(s.stats())?)
}

fn det(a: MatrixArgs) -> Result<RunReport> {
    let mut r = RunReport::new("det");
    let (lm, s) = factor(&a, &mut r)?;
    let mut result = stats_value(&s)?;
    result["det"] = json!(s.det());
    r.input = Some(lm.info);
    r.result = result;
    Ok(r)
}

fn read_vector(path: &Path, f: &PrimeField) -> Result<Vec<u64>> {
    let mut v = Vec::new();
    for (i, line) in open(path)?.lines().enumerate() {
        let line = line.map_err(|e| CliError::file(path, e))?;
        let s = line.trim();
        if s.is_empty() || s.starts_with('#') || s.starts_with('%') {
            continue;
        }
        let x: i64 = s.parse().map_err(|_| plb_core::Error::Parse {
            line: i + 1,
            msg: format!("expected an integer, got {s:?}"),
        })?;
        v.push(f.from_i64(x));
    }
    Ok(v)
}

fn solve(a: SolveArgs) -> Result<RunReport> {
    let mut r = RunReport::new("solve");
    let (lm, s) = factor(&a.matrix, &mut r)?;
    let n = lm.m.rows();
    let rhs = match &a.rhs {
        Some(path) => {
            r.param("rhs", path_string(path));
            read_vector(path, &lm.field)?
        }
        None => {
            r.param("rhs", "random");
            random_vector(&lm.field, n, value_seed(a.matrix.seed.wrapping_add(1)))
        }
    };
    if rhs.len() != n {
        return Err(CliError::Usage(format!(
            "right-hand side has {} entries, matrix has {n} rows",
            rhs.len()
        )));
    }
    let x = s.solve(&rhs)?;
    let mut w = create(&a.output)?;
    let io = |e| CliError::file(&a.output, e);
    for xi in &x {
        writeln!(w, "{xi}").map_err(io)?;
    }
    finish(w, &a.output)?;
    let mut result = stats_value(&s)?;
    result["output"] = json!(path_string(&a.output));
    result["residual_zero"] = json!(true);
    r.input = Some(lm.info);
    r.result = result;
    Ok(r)
}

fn inverse(a: InverseArgs) -> Result<RunReport> {
    let mut r = RunReport::new("inverse");
    let (lm, s) = factor(&a.matrix, &mut r)?;
    let inv = SparseMatrix::from_dense(&s.inverse()?);
    let mut w = create(&a.output)?;
    inv.write_matrix_market(&lm.field, &mut w)?;
    finish(w, &a.output)?;
    let mut result = stats_value(&s)?;
    result["output"] = json!(path_string(&a.output));
    result["nnz"] = json!(inv.nnz());
    r.input = Some(lm.info);
    r.result = result;
    Ok(r)
}

fn matching(a: MatchingArgs) -> Result<RunReport> {
    let mut r = RunReport::new("matching");
    check_omega(a.omega)?;
    let given = given_params(&a.plb)?;
    let f = PrimeField::new(a.field_p)?;
    let (g, info) = load_graph(&a.graph, Mode::Undirected)?;
    let (k, source) = choose_k(a.k, given.as_ref(), g.n(), g.m(), KRule::Threshold(a.omega));
    r.param("k", k);
    r.param("k_source", source);
    r.param("seed", a.seed);
    r.param("p", f.modulus());
    let test = has_perfect_matching_k(&f, &g, k, a.seed)?;
    let mut result = json!({
        "exists": test.exists,
        "stats": test.stats,
    });
    if a.find || a.output.is_some() {
        let out = find_perfect_matching(&f, &g, k, a.seed)?;
        result["attempts"] = json!(out.attempts);
        result["dense_edges"] = json!(out.dense_edges);
        result["found"] = json!(out.matching.is_some());
        if let Some(edges) = &out.matching {
            result["matching_size"] = json!(edges.len());
            if let Some(path) = &a.output {
                let mut w = create(path)?;
                let io = |e| CliError::file(path, e);
                for &(u, v) in edges {
                    writeln!(w, "{} {}", g.original_id(u), g.original_id(v)).map_err(io)?;
                }
                finish(w, path)?;
                result["output"] = json!(path_string(path));
            }
        }
    }
    r.input = Some(info);
    r.plb_params = given;
    r.result = result;
    Ok(r)
}

fn pagerank_cmd(a: PagerankArgs) -> Result<RunReport> {
    let mut r = RunReport::new("pagerank");
    let given = given_params(&a.plb)?;
    let (g, info) = load_graph(&a.graph, Mode::Directed)?;
    let (k, source) = choose_k(a.k, given.as_ref(), g.n(), g.m(), KRule::Plb);
    r.param("k", k);
    r.param("k_source", source);
    r.param("c", a.c);
    r.param("tol", a.tol);
    let pr = pagerank(&g, a.c, k, a.tol)?;

    let mut w = create(&a.output)?;
    let io = |e| CliError::file(&a.output, e);
    match a.format {
        Format::Csv => {
            writeln!(w, "vertex,score").map_err(io)?;
            for (v, s) in pr.scores.iter().enumerate() {
                writeln!(w, "{},{}", g.original_id(v), s).map_err(io)?;
            }
        }
        Format::Json => {
            let rows: Vec<Value> = pr
                .scores
                .iter()
                .enumerate()
                .map(|(v, s)| json!({ "vertex": g.original_id(v), "score": s }))
                .collect();
            serde_json::to_writer(&mut w, &rows)?;
            writeln!(w).map_err(io)?;
        }
    }
    finish(w, &a.output)?;

    let top = (0..pr.scores.len()).max_by(|&x, &y| pr.scores[x].total_cmp(&pr.scores[y]).then(y.cmp(&x)));
    r.input = Some(info);
    r.plb_params = given;
    r.result = json!({
        "output": path_string(&a.output),
        "residual": pr.residual,
        "iterations": pr.iterations,
        "k": pr.k,
        "n_k": pr.n_k,
        "sum": pr.scores.iter().sum::<f64>(),
        "top_vertex": top.map(|v| g.original_id(v)),
    });
    Ok(r)
}

fn bench_cmd(a: BenchArgs) -> Result<RunReport> {
    let mut r = RunReport::new("bench");
    let cfg = BenchConfig {
        suite: a.suite,
        sizes: if a.n.is_empty() {
            a.suite.default_sizes()
        } else {
            a.n.clone()
        },
        alphas: a.alpha.clone(),
        seeds: a.seeds.clone(),
        reps: a.reps,
    };
    r.param("suite", a.suite);
    r.param("sizes", &cfg.sizes);
    r.param("alphas", &cfg.alphas);
    r.param("seeds", &cfg.seeds);
    r.param("reps", cfg.reps);
    let rows = bench::run_bench(&cfg);
    let slopes = bench::fit_slopes(&rows);
    let failures = rows.iter().filter(|x| x.status != "ok").count();
    let mut result = json!({
        "points": rows.len(),
        "failures": failures,
        "slopes": slopes,
    });
    if let Some(path) = &a.output {
        let mut w = create(path)?;
        match a.format {
            Format::Csv => bench::write_rows_csv(&rows, &mut w).map_err(|e| CliError::file(path, e))?,
            Format::Json => serde_json::to_writer_pretty(&mut w, &rows)?,
        }
        finish(w, path)?;
        result["output"] = json!(path_string(path));
    } else {
        result["rows"] = serde_json::to_value(&rows)?;
    }
    if let Some(path) = &a.slopes {
        let mut w = create(path)?;
        bench::write_slopes_csv(&slopes, &mut w).map_err(|e| CliError::file(path, e))?;
        finish(w, path)?;
        result["slopes_output"] = json!(path_string(path));
    }
    r.result = result;
    Ok(r)
}
