//! Acceptance run: one PASS or FAIL line per criterion, nonzero exit on any
//! failure.

use std::time::Instant;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tangleforge::analytic::{
    alpha_i, alpha_ii, j_zero_angles, one_tangle_sigma, rank8_upper_bound, tau_j, tau_sigma, Thresholds,
};
use tangleforge::bloch::{bloch_vector, lift_ghz_subspace, polyhedron_membership, Polyhedron};
use tangleforge::cli::{cmd_measures, resolve, RunConfig};
use tangleforge::measures::{concurrence_two_qubit, e_ms, one_tangle_pure, pi_tangle, three_tangle_pure};
use tangleforge::qstate::{named_pure, partial_trace, sigma_family, DensityMatrix, Family, StateLabel};
use tangleforge::roof::{
    characteristic_min_curve, lower_convex_envelope, reference_decomposition, roof_minimize, CurvePoint, ReferenceName,
    RoofMeasure, RoofProblem,
};
use tangleforge::{Result, C64};

type Outcome = Result<(bool, String)>;
type Criterion = (&'static str, fn() -> Outcome);

fn grid(n: usize) -> Vec<f64> {
    (0..n).map(|i| i as f64 / (n - 1) as f64).collect()
}

fn roof_tau3(rho: &DensityMatrix, restarts: usize) -> Result<f64> {
    Ok(roof_minimize(&RoofProblem::new(rho.clone(), RoofMeasure::Tau3).restarts(restarts))?.value)
}

fn pure_tangles() -> Outcome {
    let ghz = three_tangle_pure(&named_pure(StateLabel::Ghz)?)?;
    let w = three_tangle_pure(&named_pure(StateLabel::W)?)?;
    Ok(((ghz - 1.0).abs() < 1e-12 && w.abs() < 1e-12, format!("GHZ {ghz:e}, W {w:e}")))
}

fn j_family() -> Outcome {
    let mut worst: f64 = 0.0;
    for i in 0..20 {
        for j in 0..20 {
            let (t1, t2) = (std::f64::consts::TAU * i as f64 / 20.0, std::f64::consts::TAU * j as f64 / 20.0);
            let numeric = three_tangle_pure(&named_pure(StateLabel::J { theta1: t1, theta2: t2 })?)?;
            worst = worst.max((numeric - tau_j(t1, t2)).abs());
        }
    }
    let mut zero: f64 = 0.0;
    for (t1, t2) in j_zero_angles() {
        zero = zero.max(three_tangle_pure(&named_pure(StateLabel::J { theta1: t1, theta2: t2 })?)?);
    }
    Ok((worst < 1e-10 && zero < 1e-12, format!("grid deviation {worst:e}, largest zero {zero:e}")))
}

fn pi_ghz_roof() -> Outcome {
    let pi = sigma_family(Family::PiGhz)?;
    let roof = roof_tau3(&pi, RoofProblem::DEFAULT_RESTARTS)?;
    let reference = reference_decomposition(ReferenceName::JPiGhz)?.try_average(three_tangle_pure)?;
    Ok((roof <= 1e-6 && reference <= 1e-12, format!("roof {roof:e}, J ensemble {reference:e}")))
}

fn pi_tangles() -> Outcome {
    let pi = pi_tangle(&sigma_family(Family::PiGhz)?)?;
    let w = pi_tangle(&named_pure(StateLabel::W)?.projector())?;
    let w_want = 4.0 * (5f64.sqrt() - 1.0) / 9.0;
    Ok(((pi - 1.0 / 9.0).abs() < 1e-10 && (w - w_want).abs() < 1e-10, format!("Π_GHZ {pi}, W {w}")))
}

fn one_tangle_formula() -> Outcome {
    let (a, b) = (one_tangle_sigma(0.0)?, one_tangle_sigma(0.75)?);
    let mut worst: f64 = 0.0;
    for x in grid(21) {
        let avg = reference_decomposition(ReferenceName::PatternBSigma(x))?.try_average(|s| one_tangle_pure(s, 0))?;
        worst = worst.max((avg - one_tangle_sigma(x)?).abs());
    }
    let ok = (a - 5.0 / 9.0).abs() < 1e-12 && (b - 5.0 / 9.0).abs() < 1e-12 && worst < 1e-10;
    Ok((ok, format!("x=0: {a}, x=3/4: {b}, pattern B deviation {worst:e}")))
}

fn thresholds() -> Outcome {
    let t = Thresholds::default();
    let h = 1e-5;
    let derivative = (alpha_ii(0.99, t.x1 + h)? - alpha_ii(0.99, t.x1 - h)?) / (2.0 * h);
    let xs: Vec<f64> = (0..=200).map(|i| 0.95 + 0.02 * i as f64 / 200.0).collect();
    let d2: Vec<f64> =
        xs.iter().map(|&x| Ok(alpha_i(x + 1e-4)? - 2.0 * alpha_i(x)? + alpha_i(x - 1e-4)?)).collect::<Result<_>>()?;
    let changes: Vec<usize> = (1..d2.len()).filter(|&k| d2[k - 1].signum() != d2[k].signum()).collect();
    let brackets = changes.len() == 1 && xs[changes[0] - 1] <= t.x_star && t.x_star <= xs[changes[0]];
    Ok((derivative.abs() < 1e-6 && brackets, format!("dα_II/dx₁ {derivative:e}, sign changes {}", changes.len())))
}

fn sigma_roof() -> Outcome {
    let t = Thresholds::default();
    let mut jump: f64 = 0.0;
    for b in [t.x0, t.x1] {
        jump = jump.max((tau_sigma(b - 1e-12)? - tau_sigma(b + 1e-12)?).abs());
    }
    let mut ok = jump < 1e-10;
    let mut worst: f64 = 0.0;
    for x in [0.0, 0.25, 0.5, 0.8, 0.9, 0.95, 1.0] {
        let want = tau_sigma(x)?;
        let roof = roof_tau3(&sigma_family(Family::Sigma { x })?, 8)?;
        ok &= roof >= want - 1e-9 && roof <= want + 1e-3;
        worst = worst.max(roof - want);
    }
    Ok((ok, format!("jump {jump:e}, largest roof excess {worst:e}")))
}

fn characteristic_curves() -> Outcome {
    let xs = grid(101);
    let min_curve = characteristic_min_curve(&xs, 24)?;
    let env = lower_convex_envelope(&min_curve)?;
    let mut worst: f64 = 0.0;
    for CurvePoint { x, value } in env {
        worst = worst.max((value - tau_sigma(x)?).abs());
    }
    Ok((worst <= 5e-3, format!("max deviation {worst:e}")))
}

fn monogamy() -> Outcome {
    let mut slack = f64::INFINITY;
    for x in grid(1001) {
        slack = slack.min(one_tangle_sigma(x)? - tau_sigma(x)?);
    }
    let mut pair: f64 = 0.0;
    for x in grid(1001) {
        let rho = sigma_family(Family::Sigma { x })?;
        for keep in [[0, 1], [0, 2], [1, 2]] {
            pair = pair.max(concurrence_two_qubit(&partial_trace(&rho, &keep)?)?);
        }
    }
    Ok((slack >= -1e-9 && pair < 1e-10, format!("min slack {slack:e}, max concurrence {pair:e}")))
}

fn e_ms_values() -> Outcome {
    let psi5 = e_ms(&named_pure(StateLabel::Psi5)?)?;
    let ghz = e_ms(&named_pure(StateLabel::Ghz)?)?;
    let w = e_ms(&named_pure(StateLabel::W)?)?;
    let ok = (psi5 - 43.0 / 45.0).abs() < 1e-10 && (ghz - 1.0).abs() < 1e-10 && w.abs() < 1e-10;
    Ok((ok, format!("Ψ₅ {psi5}, GHZ {ghz}, W {w:e}")))
}

fn random_density4(rng: &mut ChaCha8Rng) -> Result<DensityMatrix> {
    let g = DMatrix::from_fn(4, 4, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let m = &g * g.adjoint();
    let t = m.trace();
    DensityMatrix::new(m / t)
}

fn bloch_layer() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut law: f64 = 0.0;
    for _ in 0..100 {
        let rho = random_density4(&mut rng)?;
        let n = bloch_vector(&rho)?.norm();
        law = law.max((rho.purity() - (0.25 + 0.75 * n * n)).abs());
    }
    let sigma = tangleforge::bloch::embed_ghz_subspace(&sigma_family(Family::Sigma { x: 0.75 })?)?;
    let weights = polyhedron_membership(&sigma, 1e-8)?;
    let uniform = weights.is_some_and(|w| w.iter().all(|v| (v - 0.25).abs() < 1e-8));
    let pi = tangleforge::bloch::embed_ghz_subspace(&sigma_family(Family::PiGhz)?)?;
    let rejects = polyhedron_membership(&pi, 1e-8)?.is_none();
    let poly = Polyhedron::zero_tangle()?;
    let mut hull: f64 = 0.0;
    for _ in 0..100 {
        let e: [f64; 4] = std::array::from_fn(|_| -rng.gen_range(f64::EPSILON..1.0f64).ln());
        let s: f64 = e.iter().sum();
        let rho = lift_ghz_subspace(&poly.combine(e.map(|v| v / s))?)?;
        hull = hull.max(roof_tau3(&rho, 8)?);
    }
    let ok = law < 1e-10 && uniform && rejects && hull < 1e-4;
    Ok((ok, format!("purity law {law:e}, σ(3/4) weights {weights:?}, Π_GHZ rejected {rejects}, hull roof {hull:e}")))
}

fn lu_equivalence() -> Outcome {
    let z = DMatrix::from_fn(8, 8, |i, j| C64::new(if i != j { 0.0 } else if i < 4 { 1.0 } else { -1.0 }, 0.0));
    let mut exact: f64 = 0.0;
    let mut roofs: f64 = 0.0;
    for y in [0.2, 0.9] {
        let tilde = sigma_family(Family::SigmaTilde { y })?;
        let sigma = sigma_family(Family::Sigma { x: y })?;
        exact = exact.max(tilde.max_abs_diff(&sigma.conjugate_by(&z)?));
        roofs = roofs.max((roof_tau3(&tilde, 8)? - roof_tau3(&sigma, 8)?).abs());
    }
    let refuses = rank8_upper_bound(0.5, 0.9, 0.8).is_err();
    Ok((exact < 1e-15 && roofs < 2e-3 && refuses, format!("conjugation {exact:e}, roof gap {roofs:e}, refuses y>3/4 {refuses}")))
}

fn discrepancy() -> Outcome {
    let doc = cmd_measures(&resolve("pi-ghz")?, &RunConfig::default())?.document;
    let closed = doc["one_tangle_closed_form"].as_f64().unwrap_or(f64::NAN);
    let roof = doc["one_tangle_roof_upper"].as_f64().unwrap_or(f64::NAN);
    let flag = doc["discrepancy"].as_bool() == Some(true);
    let ok = (closed - 5.0 / 9.0).abs() < 1e-9 && roof <= 1.0 / 3.0 + 1e-6 && flag;
    Ok((ok, format!("closed form {closed}, roof upper {roof}, flag {flag}")))
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("pure three-tangles of GHZ and W", pure_tangles),
        ("J family closed form and zeros", j_family),
        ("roof of the rank-3 GHZ mixture vanishes", pi_ghz_roof),
        ("π-tangles of Π_GHZ and W", pi_tangles),
        ("one-tangle formula of σ(x)", one_tangle_formula),
        ("thresholds x₁ and x*", thresholds),
        ("piecewise τ₃(σ) and its roof", sigma_roof),
        ("characteristic-curve envelope", characteristic_curves),
        ("monogamy of σ(x)", monogamy),
        ("E_ms values", e_ms_values),
        ("Bloch layer and zero-tangle simplex", bloch_layer),
        ("LU equivalence of σ and σ̃", lu_equivalence),
        ("one-tangle discrepancy on Π_GHZ", discrepancy),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let (ok, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        let secs = start.elapsed().as_secs_f64();
        println!("{} {:>2} {name}: {detail} ({secs:.1}s)", if ok { "PASS" } else { "FAIL" }, k + 1);
        failed += usize::from(!ok);
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
