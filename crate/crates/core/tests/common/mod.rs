//! Helpers shared by the integration and acceptance suites.
#![allow(dead_code)]

use num_complex::Complex64;

use dptlab_core::models::{LaserConfig, KerrConfig};

pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Lexicographic (re, im) order; stable for lists that differ by a uniform
/// real shift.
pub fn sort_lex(values: &mut [Complex64]) {
    values.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap()
            .then(a.im.partial_cmp(&b.im).unwrap())
    });
}

/// Greedy nearest-neighbor matching distance between two eigenvalue
/// multisets. Robust against ordering ambiguities of near-degenerate pairs.
pub fn multiset_match_distance(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len(), "multisets must have equal size");
    let mut used = vec![false; b.len()];
    let mut worst: f64 = 0.0;
    for &x in a {
        let mut best_idx = usize::MAX;
        let mut best_dist = f64::INFINITY;
        for (i, &y) in b.iter().enumerate() {
            if used[i] {
                continue;
            }
            let d = (x - y).norm();
            if d < best_dist {
                best_dist = d;
                best_idx = i;
            }
        }
        used[best_idx] = true;
        worst = worst.max(best_dist);
    }
    worst
}

/// Least-squares slope of y over x.
pub fn fit_slope(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len());
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}

pub fn laser_config(gain: f64, scale: f64, dephasing: f64, cutoff: usize) -> LaserConfig {
    LaserConfig {
        gain,
        saturation: 0.1,
        omega: 0.0,
        dephasing,
        scale,
        cutoff,
    }
}

pub fn kerr_config(drive: f64, scale: f64, parity_jump: f64, cutoff: usize) -> KerrConfig {
    KerrConfig {
        detuning: 10.0,
        drive,
        kerr: 10.0,
        parity_jump,
        scale,
        cutoff,
    }
}
