//! Estimation checks against independent routes: exact integer binomial
//! coefficients, finite-difference curvature of the expected log-likelihood,
//! and a golden-section maximizer.

use std::f64::consts::PI;

use kerr_mzi_core::analytics::{
    conditional_probs_a, inferred_phase, naive_postselection_prob, standard_probs_b,
};
use kerr_mzi_core::estimation::{
    crb_phase_uncertainty, fisher_at_optimum, fisher_information, likelihood, log_likelihood,
    mean_runs_per_postselection, snr, ClickSample,
};
use kerr_mzi_core::state::{evolve, Arm, CircuitParams, Interferometer};
use proptest::prelude::*;

fn pascal_row(n: usize) -> Vec<f64> {
    let mut row = vec![1.0f64];
    for _ in 0..n {
        let mut next = vec![1.0; row.len() + 1];
        for k in 1..row.len() {
            next[k] = row[k - 1] + row[k];
        }
        row = next;
    }
    row
}

#[test]
fn likelihood_matches_pascal_binomial() {
    for n in [1usize, 2, 5, 20, 60] {
        let row = pascal_row(n);
        for (k, binom) in row.iter().enumerate() {
            let s = ClickSample::new(n as u64, k as u64).unwrap();
            for p in [0.01f64, 0.2, 0.5, 0.77, 0.99] {
                let expected = binom * p.powi(k as i32) * (1.0 - p).powi((n - k) as i32);
                let got = likelihood(&s, p).unwrap();
                assert!(
                    ((got - expected) / expected).abs() < 1e-11,
                    "n={n} k={k} p={p}: {got} vs {expected}"
                );
            }
        }
    }
}

#[test]
fn likelihood_sums_to_one() {
    for n in [1u64, 7, 50, 1500] {
        for p in [0.03, 0.5, 0.9] {
            let total: f64 = (0..=n)
                .map(|k| likelihood(&ClickSample::new(n, k).unwrap(), p).unwrap())
                .sum();
            assert!((total - 1.0).abs() < 1e-10, "n={n} p={p}");
        }
    }
}

/// `E_{N ~ Bin(n, p)}[ l(N | q) ]` summed over every outcome.
fn expected_log_likelihood(n: u64, p: f64, q: f64) -> f64 {
    (0..=n)
        .map(|k| {
            let s = ClickSample::new(n, k).unwrap();
            likelihood(&s, p).unwrap() * log_likelihood(&s, q).unwrap()
        })
        .sum()
}

#[test]
fn fisher_matches_expected_curvature() {
    let h = 1e-5;
    for n in [1u64, 10, 100, 1000] {
        for p in [0.05, 0.1, 0.3, 0.5, 0.7, 0.9] {
            let curvature = -(expected_log_likelihood(n, p, p + h) - 2.0 * expected_log_likelihood(n, p, p)
                + expected_log_likelihood(n, p, p - h))
                / (h * h);
            let analytic = fisher_information(n, p).unwrap();
            assert!(
                ((curvature - analytic) / analytic).abs() < 1e-4,
                "n={n} p={p}: {curvature} vs {analytic}"
            );
        }
    }
}

fn golden_section_max(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let ratio = (5.0f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - ratio * (hi - lo);
    let mut b = lo + ratio * (hi - lo);
    let (mut fa, mut fb) = (f(a), f(b));
    while hi - lo > tol {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + ratio * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - ratio * (hi - lo);
            fa = f(a);
        }
    }
    0.5 * (lo + hi)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn ml_estimate_maximizes_log_likelihood(n in 2u64..5000, frac in 0.01..0.99f64) {
        let n_y = ((n as f64 * frac).round() as u64).clamp(1, n - 1);
        let s = ClickSample::new(n, n_y).unwrap();
        let argmax = golden_section_max(|p| log_likelihood(&s, p).unwrap(), 1e-12, 1.0 - 1e-12, 1e-10);
        prop_assert!((argmax - n_y as f64 / n as f64).abs() < 1e-8);
    }
}

#[test]
fn conservation_of_information() {
    for chi in [0.01f64, 0.05, 0.1, 0.5, 1.0] {
        let theta_g = chi / 2.0;
        for n in [1u64, 10, 1000] {
            let runs = mean_runs_per_postselection(chi, PI + theta_g).unwrap();
            let ratio = fisher_at_optimum(n, chi).unwrap() / (n as f64 * runs);
            let q = (chi / 4.0).cos();
            assert!((ratio - 1.0 / (q * q)).abs() < 1e-12, "chi={chi}");
        }
    }
    let runs = mean_runs_per_postselection(0.1, PI + 0.05).unwrap();
    let ratio = fisher_at_optimum(1, 0.1).unwrap() / runs;
    assert!((ratio - 1.0).abs() < 1e-3);
}

#[test]
fn fisher_at_optimum_equals_binomial_fisher() {
    for chi in [0.05, 0.1, 0.5, 1.0, 2.0, 3.0] {
        for n in [1u64, 17, 1000] {
            let (_, p_ay) = conditional_probs_a(PI + chi / 2.0, chi).unwrap();
            let a = fisher_at_optimum(n, chi).unwrap();
            let b = fisher_information(n, p_ay).unwrap();
            assert!(((a - b) / a).abs() < 1e-9, "chi={chi} n={n}");
        }
    }
}

#[test]
fn crb_chain_small_chi() {
    for chi in [0.01f64, 0.05, 0.1, 0.25, 0.5] {
        for n in [1u64, 100, 10_000] {
            let exact = crb_phase_uncertainty(fisher_at_optimum(n, chi).unwrap()).unwrap();
            let q = chi / 4.0;
            assert!((exact - q.sin() * q.cos() / (n as f64).sqrt()).abs() < 1e-15);
            let approx = q / (n as f64).sqrt();
            assert!(((exact - approx) / approx).abs() <= chi * chi / 8.0);
        }
    }
}

#[test]
fn snr_peaks_out_of_phase() {
    for chi in [0.05, 0.1, 0.5] {
        let (best, _) = (0..720)
            .map(|k| k as f64 * 2.0 * PI / 720.0)
            .filter_map(|d| snr(1, d + chi / 2.0, chi).ok().map(|v| (d, v)))
            .fold((f64::NAN, f64::NEG_INFINITY), |acc, (d, v)| if v > acc.1 { (d, v) } else { acc });
        assert!((best - PI).abs() < 1e-12, "chi={chi}: peak at {best}");
    }
}

#[test]
fn naive_probability_is_zero_coupling_limit() {
    for k in 0..100 {
        let v = k as f64 * 2.0 * PI / 100.0;
        assert!((naive_postselection_prob(v) - standard_probs_b(v, 0.0).p_y).abs() < 1e-12);
    }
}

#[test]
fn conditional_probability_is_even_in_detuning() {
    for chi in [0.05, 0.1, 0.5, 1.0, 2.0, PI] {
        for k in 1..200 {
            let d = k as f64 * PI / 200.0;
            let (_, plus) = conditional_probs_a(chi / 2.0 + d, chi).unwrap();
            let (_, minus) = conditional_probs_a(chi / 2.0 - d, chi).unwrap();
            assert!((plus - minus).abs() < 1e-12, "chi={chi} d={d}");
        }
    }
}

#[test]
fn conditional_formula_agrees_with_engine_away_from_zero() {
    for chi in [0.05, 0.1, 1.0] {
        for k in 0..360 {
            let vartheta = k as f64 * PI / 180.0;
            let cond = evolve(&CircuitParams::new(0.0, vartheta, chi))
                .postselect(Interferometer::B, Arm::Y)
                .unwrap();
            let (px, py) = conditional_probs_a(vartheta, chi).unwrap();
            let (ex, ey) = cond.probabilities();
            assert!((px - ex).abs() < 1e-12 && (py - ey).abs() < 1e-12);
        }
    }
}

#[test]
fn inferred_phase_never_fails_where_postselection_is_possible() {
    for chi in [0.0, 0.05, 0.1, 0.5, 1.0, PI / 2.0, PI] {
        for i in 0..=50 {
            for j in 0..=50 {
                let p = CircuitParams::new(i as f64 * PI / 25.0, j as f64 * PI / 25.0, chi);
                let (_, p_by) = evolve(&p).marginal_probabilities(Interferometer::B);
                if p_by > 1e-12 {
                    let theta = inferred_phase(&p).unwrap();
                    assert!((0.0..=PI).contains(&theta));
                }
            }
        }
    }
}
