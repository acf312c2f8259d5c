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

//! Power-law-bounded degree distributions.
//!
//! A graph on `n` vertices is PLB with parameters `(c1, alpha, t)` when, for
//! every `d >= 0`, the number of vertices with degree in `[2^d, 2^(d+1))` is
//! at most `c1 * n * (t+1)^(alpha-1) * sum_{i=2^d}^{2^(d+1)-1} (i+t)^(-alpha)`.
//! It has PLB neighborhoods (constant `c2`, requires `alpha > 2`) when every
//! vertex of degree `k` has at most
//! `c2 * max(log2 n, (t+1)^(alpha-2) * k * sum_{i=k}^{n-1} i (i+t)^(-alpha))`
//! neighbors of degree at least `k`.
//!
//! The `*_bound` functions return the shape of the corresponding asymptotic
//! bound with the hidden constant set to one; callers scale by `c1`.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{DegreeHistogram, Graph};

/// Smallest `c1` reported by the fit when no bucket constrains it.
pub const C1_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlbParams {
    pub c1: f64,
    pub alpha: f64,
    pub t: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c2: Option<f64>,
}

impl PlbParams {
    pub fn new(c1: f64, alpha: f64, t: f64) -> Result<PlbParams> {
        let p = PlbParams {
            c1,
            alpha,
            t,
            c2: None,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn with_c2(mut self, c2: f64) -> Result<PlbParams> {
        self.c2 = Some(c2);
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.c1 > 0.0 && self.c1.is_finite()) {
            return Err(Error::Domain(format!("c1 must be > 0, got {}", self.c1)));
        }
        if !(self.alpha > 1.0 && self.alpha.is_finite()) {
            return Err(Error::Domain(format!(
                "alpha must satisfy alpha > 1 in the PLB definition, got {}",
                self.alpha
            )));
        }
        if !(self.t >= 0.0 && self.t.is_finite()) {
            return Err(Error::Domain(format!("t must be >= 0, got {}", self.t)));
        }
        if let Some(c2) = self.c2 {
            if !(c2 > 0.0 && c2.is_finite()) {
                return Err(Error::Domain(format!("c2 must be > 0, got {c2}")));
            }
        }
        Ok(())
    }
}

/// Summation strategy for bucket sums.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Summation {
    /// Plain double-precision accumulation, smallest term first.
    #[default]
    Plain,
    /// Kahan–Babuška (Neumaier) compensated accumulation, smallest first.
    Compensated,
}

fn bucket_range(d: u32) -> Option<(usize, usize)> {
    let lo = 1usize.checked_shl(d)?;
    Some((lo, lo.checked_mul(2)? - 1))
}

/// `sum_{i=2^d}^{2^(d+1)-1} (i+t)^(-alpha)`.
pub fn bucket_sum(alpha: f64, t: f64, d: u32, summation: Summation) -> f64 {
    let Some((lo, hi)) = bucket_range(d) else {
        return 0.0;
    };
    // terms decrease in i; walking down adds the largest term last
    let terms = (lo..=hi).rev().map(|i| (i as f64 + t).powf(-alpha));
    match summation {
        Summation::Plain => terms.sum(),
        Summation::Compensated => neumaier_sum(terms),
    }
}

fn neumaier_sum<I: Iterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for x in terms {
        let s = sum + x;
        if sum.abs() >= x.abs() {
            comp += (sum - s) + x;
        } else {
            comp += (x - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// Upper bound on the number of vertices in bucket `[2^d, 2^(d+1))`.
pub fn bucket_bound(n: usize, p: &PlbParams, d: u32) -> f64 {
    bucket_bound_with(n, p, d, Summation::Plain)
}

pub fn bucket_bound_with(n: usize, p: &PlbParams, d: u32, summation: Summation) -> f64 {
    p.c1 * n as f64 * (p.t + 1.0).powf(p.alpha - 1.0) * bucket_sum(p.alpha, p.t, d, summation)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketRecord {
    pub d: u32,
    pub actual: usize,
    pub bound: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub satisfied: bool,
    pub buckets: Vec<BucketRecord>,
    /// Index into `buckets` of the smallest slack.
    pub worst: Option<usize>,
}

/// Checks every bucket with `2^d <= max_degree` against [`bucket_bound`].
pub fn check_plb(h: &DegreeHistogram, p: &PlbParams) -> CheckReport {
    let n = h.n();
    let buckets: Vec<BucketRecord> = h
        .bucket_counts()
        .into_iter()
        .enumerate()
        .map(|(d, actual)| {
            let bound = bucket_bound(n, p, d as u32);
            BucketRecord {
                d: d as u32,
                actual,
                bound,
                slack: bound - actual as f64,
            }
        })
        .collect();
    let worst = buckets
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.slack.total_cmp(&b.1.slack))
        .map(|(i, _)| i);
    CheckReport {
        satisfied: buckets.iter().all(|b| b.slack >= 0.0),
        buckets,
        worst,
    }
}

/// How [`fit_plb`] ranks the feasible grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitObjective {
    /// Smallest vertex-weighted mean of `ln^2(bound / actual)` over the
    /// nonempty buckets; larger alpha breaks ties.
    #[default]
    Tightest,
    /// Largest alpha, then smallest `c1`.
    MaxAlpha,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitOptions {
    pub c1_max: f64,
    pub summation: Summation,
    pub objective: FitObjective,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            c1_max: 5.0,
            summation: Summation::Plain,
            objective: FitObjective::Tightest,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PlbFit {
    pub params: PlbParams,
    /// False when no grid point reached `c1 <= c1_max`; `params` then holds
    /// the best fit at the smallest grid alpha.
    pub feasible: bool,
    /// Value of the tightness score at the returned grid point.
    pub score: f64,
}

const ALPHA_GRID_LO_MILLI: u32 = 1010;
const ALPHA_GRID_HI_MILLI: u32 = 8000;
const ALPHA_GRID_STEP_MILLI: u32 = 5;

fn alpha_grid() -> Vec<f64> {
    (ALPHA_GRID_LO_MILLI..=ALPHA_GRID_HI_MILLI)
        .step_by(ALPHA_GRID_STEP_MILLI as usize)
        .map(|m| m as f64 / 1000.0)
        .collect()
}

/// `{0} ∪ {0.1 * 1.1^j <= 200}`.
pub fn t_grid() -> Vec<f64> {
    let mut ts = vec![0.0];
    let mut t = 0.1f64;
    while t <= 200.0 {
        ts.push(t);
        t *= 1.1;
    }
    ts
}

#[derive(Debug, Clone, Copy)]
struct GridPoint {
    alpha: f64,
    t: f64,
    c1: f64,
    score: f64,
}

impl GridPoint {
    /// `Less` means `self` is preferred.
    fn rank(&self, other: &GridPoint, objective: FitObjective) -> std::cmp::Ordering {
        let by_alpha = other.alpha.total_cmp(&self.alpha);
        let by_c1 = self.c1.total_cmp(&other.c1);
        let by_t = self.t.total_cmp(&other.t);
        match objective {
            FitObjective::Tightest => self.score.total_cmp(&other.score).then(by_alpha),
            FitObjective::MaxAlpha => by_alpha,
        }
        .then(by_c1)
        .then(by_t)
    }
}

struct Bucket {
    d: u32,
    actual: f64,
    lo: usize,
    hi: usize,
}

/// Scans the alpha grid from the top for one fixed `t`, keeping the terms
/// `(i+t)^(-alpha)` of every nonempty bucket up to date by multiplication.
/// Returns the preferred feasible point and the point at the lowest alpha.
fn scan_shift(
    buckets: &[Bucket],
    n: usize,
    t: f64,
    grid: &[f64],
    opts: &FitOptions,
) -> (Option<GridPoint>, GridPoint) {
    let step = ALPHA_GRID_STEP_MILLI as f64 / 1000.0;
    let top = *grid.last().expect("alpha grid is nonempty");
    let idx = || buckets.iter().flat_map(|b| b.lo..=b.hi);
    let mut terms: Vec<f64> = idx().map(|i| (i as f64 + t).powf(-top)).collect();
    let ratios: Vec<f64> = idx().map(|i| (i as f64 + t).powf(step)).collect();
    let weight: f64 = buckets.iter().map(|b| b.actual).sum();
    let mut ratio_buf = vec![0.0f64; buckets.len()];
    let mut best: Option<GridPoint> = None;
    let mut last = None;
    for (step_idx, &alpha) in grid.iter().rev().enumerate() {
        if step_idx > 0 {
            for (x, r) in terms.iter_mut().zip(&ratios) {
                *x *= r;
            }
        }
        let scale = n as f64 * (t + 1.0).powf(alpha - 1.0);
        let mut offset = 0;
        let mut c1 = 0.0f64;
        for (b, r) in buckets.iter().zip(ratio_buf.iter_mut()) {
            let len = b.hi - b.lo + 1;
            let s: f64 = terms[offset..offset + len].iter().rev().sum();
            offset += len;
            *r = b.actual / (scale * s);
            c1 = c1.max(*r);
        }
        let score = buckets
            .iter()
            .zip(&ratio_buf)
            .map(|(b, &r)| b.actual * (c1 / r).ln().powi(2))
            .sum::<f64>()
            / weight;
        let point = GridPoint { alpha, t, c1, score };
        last = Some(point);
        if c1 > opts.c1_max {
            continue;
        }
        if best.is_none_or(|b| point.rank(&b, opts.objective).is_lt()) {
            best = Some(point);
        }
        if opts.objective == FitObjective::MaxAlpha {
            break;
        }
    }
    (best, last.expect("alpha grid is nonempty"))
}

/// Fits `(c1, alpha, t)` on the grid of alpha in `[1.01, 8]` (step 0.005)
/// and `t` in [`t_grid`], subject to `c1 <= c1_max`.
///
/// For a fixed `(alpha, t)` the least admissible `c1` is the largest ratio of
/// actual bucket count to bucket shape, so no inner search is needed. The
/// returned parameters always pass [`check_plb`].
pub fn fit_plb(h: &DegreeHistogram, opts: FitOptions) -> Result<PlbFit> {
    if h.n() == 0 {
        return Err(Error::Precondition("fit needs at least one vertex".into()));
    }
    if !(opts.c1_max > 0.0) {
        return Err(Error::Domain("c1_max must be > 0".into()));
    }
    let n = h.n();
    let grid = alpha_grid();
    let buckets: Vec<Bucket> = h
        .bucket_counts()
        .into_iter()
        .enumerate()
        .filter(|&(_, a)| a > 0)
        .filter_map(|(d, a)| {
            bucket_range(d as u32).map(|(lo, hi)| Bucket {
                d: d as u32,
                actual: a as f64,
                lo,
                hi,
            })
        })
        .collect();

    if buckets.is_empty() {
        let params = PlbParams::new(C1_FLOOR, *grid.last().unwrap(), 0.0)?;
        return Ok(PlbFit {
            params,
            feasible: C1_FLOOR <= opts.c1_max,
            score: 0.0,
        });
    }

    let scans: Vec<(Option<GridPoint>, GridPoint)> = t_grid()
        .into_par_iter()
        .map(|t| scan_shift(&buckets, n, t, &grid, &opts))
        .collect();
    let pick = |points: &mut dyn Iterator<Item = GridPoint>, objective| {
        points.reduce(|a, b| if b.rank(&a, objective).is_lt() { b } else { a })
    };
    let chosen = pick(&mut scans.iter().filter_map(|s| s.0), opts.objective);
    let (point, feasible) = match chosen {
        Some(p) => (p, true),
        None => {
            let lowest = pick(&mut scans.iter().map(|s| s.1), FitObjective::MaxAlpha);
            (lowest.expect("t grid is nonempty"), false)
        }
    };

    // recompute c1 along the exact bucket-bound path so that check_plb
    // accepts the result bit-for-bit
    let unit = PlbParams::new(1.0, point.alpha, point.t)?;
    let mut c1 = buckets
        .iter()
        .map(|b| b.actual / bucket_bound_with(n, &unit, b.d, opts.summation))
        .fold(0.0f64, f64::max)
        .max(C1_FLOOR);
    loop {
        let p = PlbParams::new(c1, point.alpha, point.t)?;
        if check_plb(h, &p).satisfied {
            break;
        }
        c1 = c1.next_up();
    }
    let feasible = feasible && c1 <= opts.c1_max * (1.0 + 1e-9);
    Ok(PlbFit {
        params: PlbParams::new(c1, point.alpha, point.t)?,
        feasible,
        score: point.score,
    })
}

/// Result of [`fit_c2`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct C2Fit {
    pub c2: f64,
    /// Vertex attaining the maximum ratio, if any vertex has a neighbor of
    /// equal or larger degree.
    pub witness: Option<usize>,
}

struct NeighborhoodTerms {
    log_n: f64,
    prefactor: f64,
    /// `suffix[k] = sum_{i=k}^{n-1} i (i+t)^(-alpha)`.
    suffix: Vec<f64>,
}

impl NeighborhoodTerms {
    fn new(n: usize, p: &PlbParams) -> NeighborhoodTerms {
        let mut suffix = vec![0.0f64; n + 1];
        for i in (1..n).rev() {
            let fi = i as f64;
            suffix[i] = suffix[i + 1] + fi * (fi + p.t).powf(-p.alpha);
        }
        NeighborhoodTerms {
            log_n: (n as f64).log2(),
            prefactor: (p.t + 1.0).powf(p.alpha - 2.0),
            suffix,
        }
    }

    fn denominator(&self, k: usize) -> f64 {
        let tail = self.suffix.get(k).copied().unwrap_or(0.0);
        self.log_n.max(self.prefactor * k as f64 * tail)
    }
}

fn neighborhood_counts(g: &Graph) -> Vec<(usize, usize, usize)> {
    (0..g.n())
        .filter_map(|v| {
            let k = g.degree(v);
            (k > 0).then(|| {
                let heavy = g.neighbors(v).iter().filter(|&&w| g.degree(w) >= k).count();
                (v, k, heavy)
            })
        })
        .collect()
}

fn require_neighborhood_domain(p: &PlbParams) -> Result<()> {
    p.validate()?;
    if p.alpha <= 2.0 {
        return Err(Error::Domain(format!(
            "PLB neighborhoods need alpha > 2, got {}",
            p.alpha
        )));
    }
    Ok(())
}

/// Smallest `c2` for which `g` has PLB neighborhoods under `p`.
///
/// Directed graphs are evaluated on their undirected view.
pub fn fit_c2(g: &Graph, p: &PlbParams) -> Result<C2Fit> {
    require_neighborhood_domain(p)?;
    if g.is_directed() {
        return fit_c2(&g.to_undirected(), p);
    }
    let terms = NeighborhoodTerms::new(g.n(), p);
    let mut best = C2Fit {
        c2: 0.0,
        witness: None,
    };
    for (v, k, heavy) in neighborhood_counts(g) {
        if heavy == 0 {
            continue;
        }
        let den = terms.denominator(k);
        let mut ratio = heavy as f64 / den;
        // smallest float passing the check as it is evaluated
        while (heavy as f64) > ratio * den {
            ratio = ratio.next_up();
        }
        while (heavy as f64) <= ratio.next_down() * den {
            ratio = ratio.next_down();
        }
        if ratio > best.c2 {
            best = C2Fit {
                c2: ratio,
                witness: Some(v),
            };
        }
    }
    Ok(best)
}

/// Whether every vertex satisfies the neighborhood bound with constant `c2`.
pub fn has_plb_neighborhoods(g: &Graph, p: &PlbParams, c2: f64) -> Result<bool> {
    require_neighborhood_domain(p)?;
    if g.is_directed() {
        return has_plb_neighborhoods(&g.to_undirected(), p, c2);
    }
    let terms = NeighborhoodTerms::new(g.n(), p);
    Ok(neighborhood_counts(g)
        .into_iter()
        .all(|(_, k, heavy)| heavy as f64 <= c2 * terms.denominator(k)))
}

/// Neighbor-count bound for a single vertex `v`, i.e. the right-hand side of
/// the neighborhood condition without `c2`.
pub fn neighborhood_denominator(n: usize, p: &PlbParams, k: usize) -> f64 {
    NeighborhoodTerms::new(n, p).denominator(k)
}

/// `n (t+1)^(alpha-1) (k+t)^(1-alpha)`: shape of the bound on `d_{>=k}`.
pub fn tail_bound(n: usize, p: &PlbParams, k: usize) -> Result<f64> {
    p.validate()?;
    if k == 0 {
        return Err(Error::Domain("tail bound needs k >= 1".into()));
    }
    Ok(n as f64 * (p.t + 1.0).powf(p.alpha - 1.0) * (k as f64 + p.t).powf(1.0 - p.alpha))
}

/// `n^(1/alpha) (t+1)^(1-1/alpha)`: the degree beyond which the second,
/// steeper power law applies when `1 < alpha < 2`.
pub fn critical_degree(n: usize, p: &PlbParams) -> f64 {
    (n as f64).powf(1.0 / p.alpha) * (p.t + 1.0).powf(1.0 - 1.0 / p.alpha)
}

/// `n^(3-alpha) (t+1)^((alpha-1)(3-alpha)) k^(alpha^2-3alpha+1)`: shape of the
/// bound on vertices with degree in `[k, 2k)` (and on `d_{>=k}`) for
/// `1 < alpha < 2` and `k >= n^(1/alpha) (t+1)^(1-1/alpha)`.
pub fn double_pl_bound(n: usize, p: &PlbParams, k: f64) -> Result<f64> {
    p.validate()?;
    if p.alpha >= 2.0 {
        return Err(Error::Domain(format!(
            "double power law needs 1 < alpha < 2, got {}",
            p.alpha
        )));
    }
    let kmin = critical_degree(n, p);
    if k < kmin * (1.0 - 1e-12) {
        return Err(Error::Domain(format!(
            "double power law needs k >= n^(1/alpha)(t+1)^(1-1/alpha) = {kmin}, got {k}"
        )));
    }
    let a = p.alpha;
    Ok((n as f64).powf(3.0 - a)
        * (p.t + 1.0).powf((a - 1.0) * (3.0 - a))
        * k.powf(a * a - 3.0 * a + 1.0))
}

/// Shape of the edge-count bound: `n^(3-alpha)(t+1)^(alpha-1)` for
/// `alpha < 2`, `n log2 n (t+1)` for `alpha = 2`, `n (t+1)` for `alpha > 2`.
pub fn edge_bound(n: usize, p: &PlbParams) -> Result<f64> {
    p.validate()?;
    let nf = n as f64;
    let a = p.alpha;
    Ok(if (a - 2.0).abs() < 1e-12 {
        nf * nf.log2() * (p.t + 1.0)
    } else if a < 2.0 {
        nf.powf(3.0 - a) * (p.t + 1.0).powf(a - 1.0)
    } else {
        nf * (p.t + 1.0)
    })
}

/// `n^(2/alpha) (t+1)^(2-2/alpha)`: the sharper edge bound for simple graphs
/// with `1 < alpha < 2`.
pub fn edge_bound_simple(n: usize, p: &PlbParams) -> Result<f64> {
    p.validate()?;
    if p.alpha >= 2.0 {
        return Err(Error::Domain(format!(
            "simple-graph edge bound needs 1 < alpha < 2, got {}",
            p.alpha
        )));
    }
    let a = p.alpha;
    Ok((n as f64).powf(2.0 / a) * (p.t + 1.0).powf(2.0 - 2.0 / a))
}

/// `n (t+1)^(alpha-1) k^(2-alpha)`: edges touching a vertex of degree at
/// most `k`, for `alpha < 2`.
pub fn low_degree_edge_bound(n: usize, p: &PlbParams, k: usize) -> Result<f64> {
    p.validate()?;
    if p.alpha >= 2.0 {
        return Err(Error::Domain(format!(
            "low-degree edge bound needs 1 < alpha < 2, got {}",
            p.alpha
        )));
    }
    Ok(n as f64 * (p.t + 1.0).powf(p.alpha - 1.0) * (k as f64).powf(2.0 - p.alpha))
}

/// One row of the plot-data CSV.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotRow {
    pub x: usize,
    /// Vertices with degree in `[x, 2x)`.
    pub observed: usize,
    pub bound_def31: f64,
    /// Double-power-law bound, where it applies.
    pub bound_corollary: Option<f64>,
}

/// Observed counts and bounds over the windows `[k, 2k)` for
/// `k = 1..=max_degree`.
pub fn plot_rows(h: &DegreeHistogram, p: &PlbParams) -> Vec<PlotRow> {
    let n = h.n();
    let kmax = h.max_degree().max(1);
    let top = 2 * kmax;
    // prefix[i] = sum_{j=1}^{i} (j+t)^(-alpha)
    let mut prefix = vec![0.0f64; top + 1];
    for i in 1..=top {
        prefix[i] = prefix[i - 1] + (i as f64 + p.t).powf(-p.alpha);
    }
    let scale = p.c1 * n as f64 * (p.t + 1.0).powf(p.alpha - 1.0);
    (1..=kmax)
        .map(|k| {
            let hi = (2 * k - 1).min(top);
            let window = if hi >= k {
                prefix[hi] - prefix[k - 1]
            } else {
                0.0
            };
            PlotRow {
                x: k,
                observed: h.range_count(k, 2 * k),
                bound_def31: scale * window,
                bound_corollary: double_pl_bound(n, p, k as f64).ok().map(|b| p.c1 * b),
            }
        })
        .collect()
}

/// Writes `x,observed,bound_def31,bound_corollary` rows.
pub fn write_plot_csv<W: Write>(rows: &[PlotRow], mut w: W) -> Result<()> {
    writeln!(w, "x,observed,bound_def31,bound_corollary")?;
    for r in rows {
        match r.bound_corollary {
            Some(b) => writeln!(w, "{},{},{},{}", r.x, r.observed, r.bound_def31, b)?,
            None => writeln!(w, "{},{},{},", r.x, r.observed, r.bound_def31)?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(c1: f64, alpha: f64, t: f64) -> PlbParams {
        PlbParams::new(c1, alpha, t).unwrap()
    }

    fn regular(n: usize, k: usize) -> DegreeHistogram {
        DegreeHistogram::from_counts([(k, n)])
    }

    #[test]
    fn bucket_bound_exact_cases() {
        assert_eq!(bucket_bound(100, &params(1.0, 2.0, 0.0), 0), 100.0);
        let b = bucket_bound(36, &params(1.0, 2.0, 0.0), 1);
        assert!((b - 13.0).abs() < 1e-12, "{b}");
    }

    #[test]
    fn bucket_bound_covers_the_whole_bucket() {
        let b = bucket_bound(3, &params(1.0, 2.0, 0.0), 1);
        assert!((b - 3.0 * (1.0 / 4.0 + 1.0 / 9.0)).abs() < 1e-15);
        assert_eq!(bucket_bound(0, &params(1.0, 2.0, 0.0), 0), 0.0);
    }

    #[test]
    fn compensated_agrees_with_plain() {
        let p = params(1.0, 2.3, 1.7);
        for d in 0..14 {
            let a = bucket_bound_with(1 << 15, &p, d, Summation::Plain);
            let b = bucket_bound_with(1 << 15, &p, d, Summation::Compensated);
            assert!((a - b).abs() <= 1e-12 * a.abs());
        }
    }

    #[test]
    fn regular_graph_violates_tight_bound() {
        let n = 1000;
        let r = check_plb(&regular(n, 4), &params(5.0, 2.0, 0.0));
        assert!(!r.satisfied);
        let bucket = &r.buckets[2];
        let expected = 5.0 * n as f64 * (1.0 / 16.0 + 1.0 / 25.0 + 1.0 / 36.0 + 1.0 / 49.0);
        assert!((bucket.bound - expected).abs() < 1e-9);
        assert_eq!(r.worst, Some(2));
    }

    #[test]
    fn star_satisfies() {
        for n in [32usize, 100, 1000] {
            let h = DegreeHistogram::from_counts([(1, n - 1), (n - 1, 1)]);
            assert!(check_plb(&h, &params(5.0, 2.0, 0.0)).satisfied, "n = {n}");
        }
    }

    #[test]
    fn empty_graph_satisfies_anything() {
        let h = DegreeHistogram::from_degrees(std::iter::empty());
        assert!(check_plb(&h, &params(0.001, 7.0, 0.0)).satisfied);
        let isolated = DegreeHistogram::from_counts([(0, 10)]);
        let r = check_plb(&isolated, &params(0.001, 7.0, 0.0));
        assert!(r.satisfied && r.buckets.is_empty());
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(matches!(
            PlbParams::new(1.0, 1.0, 0.0),
            Err(Error::Domain(_))
        ));
        assert!(PlbParams::new(0.0, 2.0, 0.0).is_err());
        assert!(PlbParams::new(1.0, 2.0, -0.5).is_err());
        assert!(params(1.0, 2.0, 0.0).with_c2(0.0).is_err());
    }

    #[test]
    fn fit_on_vacuous_histogram() {
        let h = DegreeHistogram::from_counts([(0, 1)]);
        let fit = fit_plb(&h, FitOptions::default()).unwrap();
        assert!(fit.feasible);
        assert_eq!(fit.params.alpha, 8.0);
        assert_eq!(fit.params.c1, C1_FLOOR);
    }

    #[test]
    fn fit_on_inverse_square_histogram() {
        let n = 100_000usize;
        let h = DegreeHistogram::from_counts((1..=316).map(|k| (k, n / (k * k))));
        let fit = fit_plb(&h, FitOptions::default()).unwrap();
        assert!(fit.feasible);
        assert!(fit.params.c1 <= 5.0);
        assert!((1.8..=2.2).contains(&fit.params.alpha), "{:?}", fit.params);
        assert!(check_plb(&h, &fit.params).satisfied);
    }

    #[test]
    fn max_alpha_objective_never_picks_a_smaller_alpha() {
        let n = 100_000usize;
        let h = DegreeHistogram::from_counts((1..=316).map(|k| (k, n / (k * k))));
        let tight = fit_plb(&h, FitOptions::default()).unwrap();
        let opts = FitOptions {
            objective: FitObjective::MaxAlpha,
            ..Default::default()
        };
        let greedy = fit_plb(&h, opts).unwrap();
        assert!(greedy.feasible && greedy.params.c1 <= 5.0);
        assert!(greedy.params.alpha >= tight.params.alpha);
        assert!(greedy.score >= tight.score);
        assert!(check_plb(&h, &greedy.params).satisfied);
    }

    #[test]
    fn infeasible_fit_is_flagged() {
        // a regular graph concentrates all vertices in one high bucket
        let h = regular(50, 40);
        let fit = fit_plb(
            &h,
            FitOptions {
                c1_max: 0.5,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(!fit.feasible);
        assert_eq!(fit.params.alpha, 1.01);
        assert!(check_plb(&h, &fit.params).satisfied);
    }

    #[test]
    fn c2_on_star_and_clique() {
        let n = 16;
        let star = Graph::undirected(n, (1..n).map(|i| (0, i)));
        let fit = fit_c2(&star, &params(1.0, 3.0, 0.0)).unwrap();
        assert!((fit.c2 - 1.0 / (n as f64).log2()).abs() < 1e-12);
        assert_ne!(fit.witness, Some(0));

        let k8 = Graph::undirected(8, (0..8).flat_map(|i| (i + 1..8).map(move |j| (i, j))));
        let fit = fit_c2(&k8, &params(1.0, 3.0, 0.0)).unwrap();
        assert!((fit.c2 - 7.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn c2_is_tight_at_witness() {
        let g = Graph::undirected(
            9,
            [
                (0, 1),
                (0, 2),
                (1, 2),
                (2, 3),
                (3, 4),
                (4, 5),
                (5, 6),
                (6, 7),
                (7, 8),
                (2, 8),
            ],
        );
        let p = params(1.0, 2.5, 0.5);
        let fit = fit_c2(&g, &p).unwrap();
        assert!(has_plb_neighborhoods(&g, &p, fit.c2).unwrap());
        assert!(!has_plb_neighborhoods(&g, &p, fit.c2.next_down()).unwrap());
    }

    #[test]
    fn c2_requires_alpha_above_two() {
        let g = Graph::undirected(2, [(0, 1)]);
        assert!(matches!(
            fit_c2(&g, &params(1.0, 2.0, 0.0)),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn structural_bounds() {
        let t = tail_bound(10_000, &params(1.0, 2.0, 0.0), 100).unwrap();
        assert!((t - 100.0).abs() < 1e-9);
        assert!(tail_bound(10, &params(1.0, 2.0, 0.0), 0).is_err());

        let p = params(1.0, 1.5, 0.0);
        let n = 1_000_000;
        let k = (n as f64).powf(2.0 / 3.0);
        let b = double_pl_bound(n, &p, k).unwrap();
        assert!((b - 1e4).abs() < 1e-6 * 1e4, "{b}");
        assert!(double_pl_bound(n, &p, k / 2.0).is_err());
        assert!(double_pl_bound(n, &params(1.0, 2.5, 0.0), k).is_err());

        assert_eq!(edge_bound(1000, &params(1.0, 3.0, 0.0)).unwrap(), 1000.0);
        let e2 = edge_bound(1024, &params(1.0, 2.0, 0.0)).unwrap();
        assert!((e2 - 10240.0).abs() < 1e-9);
        let e15 = edge_bound(10_000, &p).unwrap();
        assert!((e15 - 1e6).abs() < 1e-3);
        let es = edge_bound_simple(1_000_000, &p).unwrap();
        assert!((es - 1e8).abs() < 1e-2);
        let lo = low_degree_edge_bound(10_000, &p, 100).unwrap();
        assert!((lo - 1e5).abs() < 1e-6);
    }

    #[test]
    fn plot_rows_match_direct_sums() {
        let h = DegreeHistogram::from_counts([(1, 50), (2, 10), (3, 4), (6, 1)]);
        let p = params(2.0, 1.5, 0.5);
        let rows = plot_rows(&h, &p);
        assert_eq!(rows.len(), 6);
        assert_eq!(rows[1].observed, 14);
        let direct: f64 = (2..=3).map(|i| (i as f64 + 0.5).powf(-1.5)).sum::<f64>()
            * 2.0
            * 65.0
            * 1.5f64.powf(0.5);
        assert!((rows[1].bound_def31 - direct).abs() < 1e-9);
        let mut buf = Vec::new();
        write_plot_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("x,observed,bound_def31,bound_corollary\n"));
        assert_eq!(text.lines().count(), 7);
    }
}
