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


//! Scaling benchmark: generated graphs, median-of-reps timings and log-log
//! slope fits.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::Instant;

use clap::ValueEnum;
use plb_algebra::partition::{default_k, plb_k};
use plb_algebra::{pagerank, schur, PrimeField, MERSENNE_61};
use plb_core::counting::{count_triangles_sequential, max_clique, DEFAULT_CLIQUE_CAP};
use plb_core::generator::{erased_configuration, erased_configuration_directed, power_law_degrees};
use plb_core::{Graph, PlbParams};
use serde::Serialize;

use crate::matrix::pattern_matrix;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Triangles,
    Clique,
    Pagerank,
    Det,
}

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Triangles => "triangles",
            Suite::Clique => "clique",
            Suite::Pagerank => "pagerank",
            Suite::Det => "det",
        }
    }

    /// Sizes used when none are given. The determinant keeps dense
    /// Lanczos state, so it stays small.
    pub fn default_sizes(self) -> Vec<usize> {
        let exps = match self {
            Suite::Triangles | Suite::Clique => 13..=17,
            Suite::Pagerank => 12..=16,
            Suite::Det => 8..=11,
        };
        exps.map(|e| 1usize << e).collect()
    }
}

#[derive(Debug, Clone)]
pub struct BenchConfig {
    pub suite: Suite,
    pub sizes: Vec<usize>,
    pub alphas: Vec<f64>,
    pub seeds: Vec<u64>,
    pub reps: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub algorithm: String,
    pub n: usize,
    pub n_realized: usize,
    pub m: usize,
    pub alpha: f64,
    pub seed: u64,
    /// Median over the timed repetitions; absent when the run failed.
    pub wall_time_ms: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SlopeRow {
    pub algorithm: String,
    pub alpha: f64,
    pub slope: f64,
    pub intercept: f64,
    /// Distinct sizes in the fit.
    pub sizes: usize,
    pub points: usize,
}

fn generate(suite: Suite, n: usize, alpha: f64, seed: u64) -> plb_core::Result<Graph> {
    let d = power_law_degrees(n, alpha)?;
    let g = match suite {
        Suite::Pagerank => erased_configuration_directed(&d, seed)?,
        _ => erased_configuration(&d, seed)?,
    };
    Ok(g.graph)
}

/// A prepared workload: everything except the timed call is done up front.
type Workload = Box<dyn FnMut() -> Result<(), String>>;

fn prepare(suite: Suite, g: Graph, alpha: f64, seed: u64) -> Result<Workload, String> {
    let n = g.n();
    match suite {
        Suite::Triangles => Ok(Box::new(move || {
            count_triangles_sequential(&g).map(|_| ()).map_err(|e| e.to_string())
        })),
        Suite::Clique => Ok(Box::new(move || {
            max_clique(&g, DEFAULT_CLIQUE_CAP).map(|_| ()).map_err(|e| e.to_string())
        })),
        Suite::Pagerank => {
            let k = plb_k(n, alpha);
            Ok(Box::new(move || {
                pagerank::pagerank(&g, pagerank::DEFAULT_DAMPING, k, pagerank::DEFAULT_TOL)
                    .map(|_| ())
                    .map_err(|e| e.to_string())
            }))
        }
        Suite::Det => {
            let f = PrimeField::new(MERSENNE_61).map_err(|e| e.to_string())?;
            let m = pattern_matrix(&f, &g, seed).map_err(|e| e.to_string())?;
            let p = PlbParams::new(1.0, alpha, 0.0).map_err(|e| e.to_string())?;
            let (k, _) = threshold_k(n, &p, 3.0);
            Ok(Box::new(move || {
                schur::det_symmetric(&f, &m, k, seed).map(|_| ()).map_err(|e| e.to_string())
            }))
        }
    }
}

/// `default_k` where it is defined, otherwise `ceil(n^(1/alpha))`.
pub fn threshold_k(n: usize, p: &PlbParams, omega: f64) -> (usize, &'static str) {
    match default_k(n, p, omega) {
        Ok(k) => (k, "default_k"),
        Err(_) => (plb_k(n, p.alpha), "n^(1/alpha)"),
    }
}

fn median(xs: &mut [f64]) -> f64 {
    xs.sort_by(|a, b| a.total_cmp(b));
    let h = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[h]
    } else {
        0.5 * (xs[h - 1] + xs[h])
    }
}

fn run_point(cfg: &BenchConfig, n: usize, alpha: f64, seed: u64) -> BenchRow {
    let mut row = BenchRow {
        algorithm: cfg.suite.name().to_string(),
        n,
        n_realized: 0,
        m: 0,
        alpha,
        seed,
        wall_time_ms: None,
        status: "ok".to_string(),
    };
    let g = match generate(cfg.suite, n, alpha, seed) {
        Ok(g) => g,
        Err(e) => {
            row.status = format!("error: {e}");
            return row;
        }
    };
    row.n_realized = g.n();
    row.m = g.m();
    let mut work = match prepare(cfg.suite, g, alpha, seed) {
        Ok(w) => w,
        Err(e) => {
            row.status = format!("error: {e}");
            return row;
        }
    };
    if let Err(e) = work() {
        row.status = format!("error: {e}");
        return row;
    }
    let mut times = Vec::with_capacity(cfg.reps);
    for _ in 0..cfg.reps.max(1) {
        let start = Instant::now();
        if let Err(e) = work() {
            row.status = format!("error: {e}");
            return row;
        }
        times.push(start.elapsed().as_secs_f64() * 1e3);
    }
    row.wall_time_ms = Some(median(&mut times));
    row
}

/// Runs every (alpha, n, seed) point in order. Failures become rows with an
/// error status.
pub fn run_bench(cfg: &BenchConfig) -> Vec<BenchRow> {
    let mut rows = Vec::new();
    for &alpha in &cfg.alphas {
        for &n in &cfg.sizes {
            for &seed in &cfg.seeds {
                rows.push(run_point(cfg, n, alpha, seed));
            }
        }
    }
    rows
}

/// Least-squares slope of `ln t` against `ln n` per (algorithm, alpha).
/// Groups with fewer than two distinct sizes get no row.
pub fn fit_slopes(rows: &[BenchRow]) -> Vec<SlopeRow> {
    let mut groups: BTreeMap<(String, u64), Vec<(f64, f64)>> = BTreeMap::new();
    for r in rows {
        if let Some(t) = r.wall_time_ms {
            if t > 0.0 && r.n > 0 {
                groups
                    .entry((r.algorithm.clone(), r.alpha.to_bits()))
                    .or_default()
                    .push(((r.n as f64).ln(), t.ln()));
            }
        }
    }
    let mut out = Vec::new();
    for ((algorithm, bits), pts) in groups {
        let mut xs: Vec<u64> = pts.iter().map(|p| p.0.to_bits()).collect();
        xs.sort_unstable();
        xs.dedup();
        if xs.len() < 2 {
            continue;
        }
        let k = pts.len() as f64;
        let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
        let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
        let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
        let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
        let slope = sxy / sxx;
        out.push(SlopeRow {
            algorithm,
            alpha: f64::from_bits(bits),
            slope,
            intercept: my - slope * mx,
            sizes: xs.len(),
            points: pts.len(),
        });
    }
    out
}

pub fn write_rows_csv<W: Write>(rows: &[BenchRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "algorithm,n,n_realized,m,alpha,seed,wall_time_ms,status")?;
    for r in rows {
        let t = r.wall_time_ms.map(|t| format!("{t:.4}")).unwrap_or_default();
        writeln!(
            w,
            "{},{},{},{},{},{},{},{}",
            r.algorithm,
            r.n,
            r.n_realized,
            r.m,
            r.alpha,
            r.seed,
            t,
            csv_field(&r.status)
        )?;
    }
    Ok(())
}

pub fn write_slopes_csv<W: Write>(slopes: &[SlopeRow], mut w: W) -> std::io::Result<()> {
    writeln!(w, "algorithm,alpha,slope,intercept,sizes,points")?;
    for s in slopes {
        writeln!(
            w,
            "{},{},{:.6},{:.6},{},{}",
            s.algorithm, s.alpha, s.slope, s.intercept, s.sizes, s.points
        )?;
    }
    Ok(())
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(n: usize, t: Option<f64>) -> BenchRow {
        BenchRow {
            algorithm: "triangles".into(),
            n,
            n_realized: n,
            m: 0,
            alpha: 2.5,
            seed: 1,
            wall_time_ms: t,
            status: "ok".into(),
        }
    }

    #[test]
    fn slope_of_exact_power() {
        let rows: Vec<BenchRow> = [1024usize, 2048, 4096, 8192]
            .iter()
            .map(|&n| row(n, Some(3e-4 * (n as f64).powf(1.3))))
            .collect();
        let s = fit_slopes(&rows);
        assert_eq!(s.len(), 1);
        assert!((s[0].slope - 1.3).abs() < 1e-9);
    }

    #[test]
    fn single_size_has_no_slope() {
        let rows = vec![row(1024, Some(1.0)), row(1024, Some(1.1))];
        assert!(fit_slopes(&rows).is_empty());
    }

    #[test]
    fn failed_rows_are_ignored() {
        let rows = vec![row(1024, Some(1.0)), row(2048, None)];
        assert!(fit_slopes(&rows).is_empty());
    }

    #[test]
    fn median_even_and_odd() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }
}
