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

//! Bound evaluations checked against arbitrary-precision values computed by
//! `tests/oracles/plb_bounds.py`.

mod common;

use plb_core::counting::{delta_formula, select_delta};
use plb_core::generator::{erased_configuration, power_law_degrees};
use plb_core::plb::*;
use plb_core::{DegreeHistogram, DegreeSide, Error, Graph};

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

#[test]
fn bucket_bound_matches_high_precision_sum() {
    let p = PlbParams::new(1.2166, 1.8863, 3.8008).unwrap();
    let got = bucket_bound(100_000, &p, 3);
    assert!(rel(got, 24_252.492_245_971_59) < 1e-9, "{got}");

    let p = PlbParams::new(2.5, 2.2674, 3.4682).unwrap();
    for s in [Summation::Plain, Summation::Compensated] {
        let got = bucket_bound_with(100_000, &p, 10, s);
        assert!(rel(got, 117.069_426_331_326_43) < 1e-9, "{got}");
    }
}

#[test]
fn delta_matches_high_precision_exponents() {
    let p = PlbParams::new(1.0, 2.2, 0.0).unwrap();
    let x = delta_formula(1_000_000, &p, 2.38, true).unwrap();
    assert!(rel(x, 349.138_340_237_771_16) < 1e-12, "{x}");
    assert_eq!(select_delta(1_000_000, &p, 2.38, true).unwrap(), 350);

    let p = PlbParams::new(1.0, 2.5, 3.5).unwrap();
    let x = delta_formula(100_000, &p, 2.38, false).unwrap();
    assert!(rel(x, 106.550_442_791_021_41) < 1e-12, "{x}");
    assert_eq!(select_delta(100_000, &p, 2.38, false).unwrap(), 107);
}

#[test]
fn t_zero_drops_the_shift_factor() {
    let p = PlbParams::new(1.0, 2.1, 0.0).unwrap();
    let n = 50_000usize;
    let plain = delta_formula(n, &p, 2.5, false).unwrap();
    let direct = (n as f64).powf(1.5 / (3.0 - 2.1 - 2.5 + 2.1 * 2.5));
    assert!(rel(plain, direct) < 1e-14);
    let neigh = delta_formula(n, &p, 2.5, true).unwrap();
    let direct = (n as f64).powf(1.5 / (7.0 - 2.5 - 0.5 * 2.1));
    assert!(rel(neigh, direct) < 1e-14);
}

#[test]
fn four_regular_bucket_is_violated() {
    // 4-regular circulant on 200 vertices: i ~ i±1, i±2
    let n = 200;
    let g = Graph::undirected(n, (0..n).flat_map(|i| [(i, (i + 1) % n), (i, (i + 2) % n)]));
    let h = g.degree_histogram(DegreeSide::Total).unwrap();
    let r = check_plb(&h, &PlbParams::new(5.0, 2.0, 0.0).unwrap());
    assert!(!r.satisfied);
    let b = r.buckets.iter().find(|b| b.d == 2).unwrap();
    let direct: f64 = 5.0 * n as f64 * (4..=7).map(|i| 1.0 / (i * i) as f64).sum::<f64>();
    assert!(rel(b.bound, direct) < 1e-14);
    assert!((b.bound / n as f64 - 0.7536).abs() < 5e-4);
}

#[test]
fn star_buckets_hold() {
    for n in [32usize, 33, 64, 500] {
        let g = Graph::undirected(n, (1..n).map(|i| (0, i)));
        let h = g.degree_histogram(DegreeSide::Total).unwrap();
        let r = check_plb(&h, &PlbParams::new(5.0, 2.0, 0.0).unwrap());
        assert!(r.satisfied, "n = {n}");
        for b in r.buckets.iter().filter(|b| b.actual > 0) {
            assert!(b.bound >= 1.0);
        }
    }
}

#[test]
fn fit_recovers_inverse_square_histogram() {
    let n = 100_000usize;
    let h = DegreeHistogram::from_counts((1..=316).map(|k| (k, n / (k * k))));
    let fit = fit_plb(&h, FitOptions::default()).unwrap();
    assert!(fit.feasible);
    assert!((1.8..=2.2).contains(&fit.params.alpha));
    assert!(fit.params.c1 <= 5.0);
    assert!(check_plb(&h, &fit.params).satisfied);
}

#[test]
fn power_law_sequence_is_plb_with_unit_constant() {
    // floor(n / k^alpha) <= n k^-alpha, and the padded vertex count only grows n
    for (n, alpha) in [(1usize, 2.0), (10, 2.0), (1000, 1.5), (100_000, 2.5), (54_321, 3.3)] {
        let d = power_law_degrees(n, alpha).unwrap();
        let h = DegreeHistogram::from_degrees(d.degrees.iter().copied());
        let p = PlbParams::new(1.0, alpha, 0.0).unwrap();
        assert!(check_plb(&h, &p).satisfied, "n = {n}, alpha = {alpha}");
    }
}

#[test]
fn c2_examples() {
    for n in [4usize, 16, 100] {
        let star = Graph::undirected(n, (1..n).map(|i| (0, i)));
        let fit = fit_c2(&star, &PlbParams::new(1.0, 2.5, 1.0).unwrap()).unwrap();
        assert!(rel(fit.c2, 1.0 / (n as f64).log2()) < 1e-12);
    }
    let k8 = common::complete(8);
    let fit = fit_c2(&k8, &PlbParams::new(3.0, 3.0, 0.0).unwrap()).unwrap();
    assert!(rel(fit.c2, 7.0 / 3.0) < 1e-15);
    let err = fit_c2(&k8, &PlbParams::new(3.0, 1.9, 0.0).unwrap()).unwrap_err();
    assert!(matches!(err, Error::Domain(ref m) if m.contains("alpha > 2")));
}

#[test]
fn c2_of_erased_configuration_graph_is_small() {
    let d = power_law_degrees(100_000, 2.5).unwrap();
    let p = PlbParams::new(1.0, 2.5, 0.0).unwrap();
    let g = erased_configuration(&d, 11).unwrap().graph;
    let fit = fit_c2(&g, &p).unwrap();
    assert!(fit.c2 <= 10.0, "{}", fit.c2);
    assert!(has_plb_neighborhoods(&g, &p, fit.c2).unwrap());
}

#[test]
fn double_power_law_exponent() {
    let p = PlbParams::new(1.0, 1.5, 0.0).unwrap();
    let n = 1_000_000usize;
    let k = 10_000.0;
    let b = double_pl_bound(n, &p, k).unwrap();
    // alpha^2 - 3 alpha + 1 = -1.25 at alpha = 1.5
    assert!(rel(b, 1e9 * 1e-5) < 1e-12);
    let err = double_pl_bound(n, &p, 9_000.0).unwrap_err();
    assert!(matches!(err, Error::Domain(ref m) if m.contains("k >=")));
}
