use std::f64::consts::{PI, TAU};

use tangleforge::analytic::{alpha_i, alpha_ii, one_tangle_sigma, tau_j, tau_sigma, tau_x, Thresholds};
use tangleforge::measures::{concurrence_two_qubit, one_tangle_pure, pi_residual, three_tangle_pure};
use tangleforge::qstate::{named_pure, partial_trace, sigma_family, Family, StateLabel};
use tangleforge::roof::{reference_decomposition, ReferenceName, PATTERN_A};

#[test]
fn j_family_matches_its_closed_form() {
    for i in 0..20 {
        for j in 0..20 {
            let (t1, t2) = (TAU * i as f64 / 20.0, TAU * j as f64 / 20.0);
            let numeric = three_tangle_pure(&named_pure(StateLabel::J { theta1: t1, theta2: t2 }).unwrap()).unwrap();
            assert!((numeric - tau_j(t1, t2)).abs() < 1e-10, "({t1}, {t2})");
        }
    }
}

#[test]
fn x_family_matches_its_closed_form() {
    for i in 0..10 {
        let x = i as f64 / 9.0;
        for a in 0..8 {
            for b in 0..8 {
                for c in 0..8 {
                    let phi = [TAU * a as f64 / 8.0, TAU * b as f64 / 8.0, TAU * c as f64 / 8.0];
                    let numeric = three_tangle_pure(&named_pure(StateLabel::X { x, phi }).unwrap()).unwrap();
                    assert!((numeric - tau_x(x, phi).unwrap()).abs() < 1e-10, "x = {x}, phi = {phi:?}");
                }
            }
        }
    }
}

#[test]
fn zero_tangle_patterns_agree() {
    for i in 0..=50 {
        let x = i as f64 / 50.0;
        let first = tau_x(x, PATTERN_A[0]).unwrap();
        for phi in &PATTERN_A[1..] {
            assert!((tau_x(x, *phi).unwrap() - first).abs() < 1e-12);
        }
    }
}

fn second_difference(f: impl Fn(f64) -> f64, x: f64, h: f64) -> f64 {
    f(x + h) - 2.0 * f(x) + f(x - h)
}

#[test]
fn alpha_i_loses_convexity_once_near_x_star() {
    let h = 1e-4;
    let xs: Vec<f64> = (0..=200).map(|i| 0.95 + 0.02 * i as f64 / 200.0).collect();
    let d2: Vec<f64> = xs.iter().map(|&x| second_difference(|t| alpha_i(t).unwrap(), x, h)).collect();
    let changes: Vec<usize> = (1..d2.len()).filter(|&k| d2[k - 1].signum() != d2[k].signum()).collect();
    assert_eq!(changes.len(), 1, "sign changes at {changes:?}");
    let x_star = Thresholds::default().x_star;
    assert!(xs[changes[0] - 1] <= x_star && x_star <= xs[changes[0]]);
}

#[test]
fn x1_is_the_tangent_point() {
    let x1 = Thresholds::default().x1;
    let h = 1e-5;
    let slope = |c: f64| alpha_ii(0.99, c).unwrap();
    let derivative = (slope(x1 + h) - slope(x1 - h)) / (2.0 * h);
    assert!(derivative.abs() < 1e-6, "{derivative}");
}

#[test]
fn tau_sigma_is_convex_and_continuous() {
    let n = 1000;
    let h = 1.0 / (n - 1) as f64;
    let v: Vec<f64> = (0..n).map(|i| tau_sigma(i as f64 * h).unwrap()).collect();
    for k in 1..n - 1 {
        assert!(v[k + 1] - 2.0 * v[k] + v[k - 1] >= -1e-8, "k = {k}");
    }
    let t = Thresholds::default();
    for b in [t.x0, t.x1] {
        let (l, r) = (tau_sigma(b - 1e-12).unwrap(), tau_sigma(b + 1e-12).unwrap());
        assert!((l - r).abs() < 1e-10);
    }
}

#[test]
fn monogamy_of_sigma() {
    for i in 0..=1000 {
        let x = i as f64 / 1000.0;
        assert!(tau_sigma(x).unwrap() <= one_tangle_sigma(x).unwrap() + 1e-10, "x = {x}");
    }
    for i in 0..=20 {
        let x = i as f64 / 20.0;
        let rho = sigma_family(Family::Sigma { x }).unwrap();
        for pair in [[0, 1], [0, 2], [1, 2]] {
            assert!(concurrence_two_qubit(&partial_trace(&rho, &pair).unwrap()).unwrap() < 1e-10);
        }
    }
}

#[test]
fn pattern_b_realizes_the_one_tangle_formula() {
    for i in 0..=20 {
        let x = i as f64 / 20.0;
        let e = reference_decomposition(ReferenceName::PatternBSigma(x)).unwrap();
        assert!(e.density().max_abs_diff(&sigma_family(Family::Sigma { x }).unwrap()) < 1e-12);
        let avg = e.try_average(|s| one_tangle_pure(s, 0)).unwrap();
        assert!((avg - one_tangle_sigma(x).unwrap()).abs() < 1e-10);
    }
}

#[test]
fn pi_residuals_respect_qubit_symmetry() {
    let w = named_pure(StateLabel::W).unwrap().projector();
    let ghz = named_pure(StateLabel::Ghz).unwrap().projector();
    for rho in [w, ghz] {
        let r: Vec<f64> = (0..3).map(|q| pi_residual(&rho, q).unwrap()).collect();
        assert!((r[0] - r[1]).abs() < 1e-12 && (r[1] - r[2]).abs() < 1e-12);
    }
    // equal weights on |GHZ,2+⟩ and |GHZ,3+⟩ make J symmetric under B ↔ C
    let j = named_pure(StateLabel::J { theta1: PI, theta2: 0.3 }).unwrap().projector();
    assert!((pi_residual(&j, 1).unwrap() - pi_residual(&j, 2).unwrap()).abs() < 1e-12);
}

#[test]
fn partial_traces_compose() {
    let psi = named_pure(StateLabel::X { x: 0.3, phi: [0.1, 1.2, 2.3] }).unwrap().projector();
    let direct = partial_trace(&psi, &[0]).unwrap();
    let stepwise = partial_trace(&partial_trace(&psi, &[0, 1]).unwrap(), &[0]).unwrap();
    assert!(direct.max_abs_diff(&stepwise) < 1e-12);
}
