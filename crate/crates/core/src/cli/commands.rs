//! One function per subcommand, each producing a [`Report`].

use serde_json::{json, Value};

use super::input::Input;
use super::{Report, RunConfig, Table};
use crate::analytic::{alpha_i, one_tangle_sigma, rank8_upper_bound, tau_sigma};
use crate::bloch::{bloch_vector, embed_ghz_subspace, polyhedron_membership};
use crate::measures::{concurrence_two_qubit, e_ms, full_report, linear_entropy_tangle, three_tangle_pure};
use crate::qstate::{partial_trace, sigma_family, DensityMatrix, Family};
use crate::roof::{characteristic_min_curve, lower_convex_envelope, reference_decomposition, roof_minimize, CurvePoint, ReferenceName, RoofMeasure, RoofResult};
use crate::{Error, Result};

/// A roof value below an analytic reference by more than this is flagged.
pub const DISCREPANCY_TOLERANCE: f64 = 1e-6;
pub const MONOGAMY_TOLERANCE: f64 = 1e-9;
pub const PAIR_TANGLE_TOLERANCE: f64 = 1e-10;
pub const CHAR_CURVE_TOLERANCE: f64 = 5e-3;
pub const MEMBERSHIP_TOLERANCE: f64 = 1e-8;
pub const RECONSTRUCTION_TOLERANCE: f64 = 1e-8;

/// Mixing parameter of the families whose tangles are known in closed form.
fn sigma_parameter(family: Option<Family>) -> Option<f64> {
    match family? {
        Family::PiGhz => Some(0.0),
        Family::Sigma { x } => Some(x),
        Family::SigmaTilde { y } => Some(y),
        Family::Rho { .. } => None,
    }
}

fn run_roof(cfg: &RunConfig, rho: &DensityMatrix, measure: RoofMeasure) -> Result<RoofResult> {
    roof_minimize(&cfg.roof_problem(rho.clone(), measure))
}

pub fn cmd_measures(input: &Input, cfg: &RunConfig) -> Result<Report> {
    let rho = input.density();
    if rho.dim() != 8 {
        return Err(Error::WrongSize { expected: 8, got: rho.dim() });
    }
    let (tau3, tau3_source, upper_bound) = match input {
        Input::Pure { state, .. } => (three_tangle_pure(state)?, "exact", false),
        Input::Mixed { family, .. } => match (sigma_parameter(*family), family) {
            (Some(p), _) => (tau_sigma(p)?, "closed_form", false),
            (None, Some(Family::Rho { xi, x, y })) => {
                let searched = run_roof(cfg, &rho, RoofMeasure::Tau3)?.value;
                let bound = rank8_upper_bound(*xi, *x, *y).unwrap_or(f64::INFINITY);
                (searched.min(bound), "roof_search", true)
            }
            _ => (run_roof(cfg, &rho, RoofMeasure::Tau3)?.value, "roof_search", true),
        },
    };
    let report = full_report(&rho, tau3)?;

    let (closed_form, roof_upper, roof_source) = match input {
        Input::Pure { .. } => (None, report.one_tangle_A, "exact"),
        Input::Mixed { family, .. } => {
            let p = sigma_parameter(*family);
            let searched = run_roof(cfg, &rho, RoofMeasure::OneTangleA)?.value;
            let mut references = Vec::new();
            match family {
                Some(Family::PiGhz) => references.push(ReferenceName::ProductPiGhz),
                Some(Family::Sigma { x }) => references.push(ReferenceName::PatternBSigma(*x)),
                _ => {}
            }
            let mut best = (searched, "roof_search");
            for r in references {
                let v = reference_decomposition(r)?.try_average(|s| RoofMeasure::OneTangleA.pure(s))?;
                if v < best.0 {
                    best = (v, "reference_ensemble");
                }
            }
            (p.map(one_tangle_sigma).transpose()?, best.0, best.1)
        }
    };
    let discrepancy = closed_form.is_some_and(|c| roof_upper < c - DISCREPANCY_TOLERANCE);

    let doc = json!({
        "command": "measures",
        "state": input.spec(),
        "n_qubits": 3,
        "pure": input.is_pure(),
        "tau3": report.tau3,
        "tau3_source": tau3_source,
        "upper_bound": upper_bound,
        "one_tangle_A": report.one_tangle_A,
        "concurrence_AB": report.concurrence_AB,
        "concurrence_AC": report.concurrence_AC,
        "negativity_A_BC": report.negativity_A_BC,
        "pi_tangle": report.pi_tangle,
        "one_tangle_closed_form": closed_form,
        "one_tangle_roof_upper": roof_upper,
        "one_tangle_roof_source": roof_source,
        "discrepancy": discrepancy,
        "roof_settings": cfg.roof_settings(),
    });
    Ok(Report::document("measures", doc))
}

fn pair_concurrence_max(rho: &DensityMatrix) -> Result<f64> {
    let mut worst = 0.0f64;
    for pair in [[0, 1], [0, 2], [1, 2]] {
        worst = worst.max(concurrence_two_qubit(&partial_trace(rho, &pair)?)?);
    }
    Ok(worst)
}

pub fn cmd_sigma_curve(cfg: &RunConfig, with_roof: bool) -> Result<Report> {
    let mut columns = vec!["x", "tau3_analytic", "alpha_I", "one_tangle_closed_form", "monogamy_slack", "pair_concurrence_max"];
    if with_roof {
        columns.push("tau3_roof");
    }
    let mut rows = Vec::new();
    let (mut min_slack, mut max_pair, mut roof_gap) = (f64::INFINITY, 0.0f64, f64::NEG_INFINITY);
    let mut roof_discrepancy = false;
    for x in cfg.x_grid() {
        let tau = tau_sigma(x)?;
        let one = one_tangle_sigma(x)?;
        let slack = one - tau;
        let rho = sigma_family(Family::Sigma { x })?;
        let pair = pair_concurrence_max(&rho)?;
        min_slack = min_slack.min(slack);
        max_pair = max_pair.max(pair);
        let mut row = vec![json!(x), json!(tau), json!(alpha_i(x)?), json!(one), json!(slack), json!(pair)];
        if with_roof {
            let v = run_roof(cfg, &rho, RoofMeasure::Tau3)?.value;
            roof_gap = roof_gap.max(v - tau);
            roof_discrepancy |= v < tau - DISCREPANCY_TOLERANCE;
            row.push(json!(v));
        }
        rows.push(row);
    }
    let mut failures = Vec::new();
    if min_slack < -MONOGAMY_TOLERANCE {
        failures.push(format!("monogamy slack {min_slack:e} below -{MONOGAMY_TOLERANCE:e}"));
    }
    if max_pair > PAIR_TANGLE_TOLERANCE {
        failures.push(format!("pairwise concurrence {max_pair:e} above {PAIR_TANGLE_TOLERANCE:e}"));
    }
    let mut summary = vec![("min_monogamy_slack".to_string(), json!(min_slack)), ("max_pair_concurrence".to_string(), json!(max_pair))];
    if with_roof {
        summary.push(("max_roof_minus_analytic".into(), json!(roof_gap)));
        summary.push(("discrepancy".into(), json!(roof_discrepancy)));
    }
    let mut extra = vec![
        ("x_min".to_string(), json!(cfg.x_min)),
        ("x_max".to_string(), json!(cfg.x_max)),
        ("steps".to_string(), json!(cfg.steps)),
    ];
    if with_roof {
        extra.push(("roof_settings".into(), cfg.roof_settings()));
    }
    Ok(Report::table("sigma-curve", Table::new(&columns, rows, summary), extra, failures))
}

pub fn cmd_char_curves(cfg: &RunConfig) -> Result<Report> {
    let xs = cfg.x_grid();
    let min_curve = characteristic_min_curve(&xs, cfg.phi_grid)?;
    let envelope = lower_convex_envelope(&min_curve)?;
    let mut rows = Vec::new();
    let mut max_diff = 0.0f64;
    let mut above = 0usize;
    for (m, e) in min_curve.iter().zip(&envelope) {
        let CurvePoint { x, value } = *m;
        let analytic = tau_sigma(x)?;
        let diff = (e.value - analytic).abs();
        max_diff = max_diff.max(diff);
        if e.value > value {
            above += 1;
        }
        rows.push(vec![json!(x), json!(value), json!(e.value), json!(analytic), json!(diff)]);
    }
    let mut failures = Vec::new();
    if max_diff > CHAR_CURVE_TOLERANCE {
        failures.push(format!("envelope deviates from the closed form by {max_diff:e}"));
    }
    if above > 0 {
        failures.push(format!("envelope above the minimum curve on {above} rows"));
    }
    let columns = ["x", "min_curve", "envelope", "tau_sigma_analytic", "abs_diff"];
    let summary = vec![("max_abs_diff".to_string(), json!(max_diff))];
    let extra = vec![
        ("x_min".to_string(), json!(cfg.x_min)),
        ("x_max".to_string(), json!(cfg.x_max)),
        ("steps".to_string(), json!(cfg.steps)),
        ("phi_grid".to_string(), json!(cfg.phi_grid)),
        ("tolerance".to_string(), json!(CHAR_CURVE_TOLERANCE)),
    ];
    Ok(Report::table("char-curves", Table::new(&columns, rows, summary), extra, failures))
}

pub fn cmd_roof(input: &Input, measure: RoofMeasure, cfg: &RunConfig) -> Result<Report> {
    let rho = input.density();
    let problem = cfg.roof_problem(rho.clone(), measure);
    let (rank, m) = (problem.rank(), problem.resolved_ensemble_size());
    let result = roof_minimize(&problem)?;
    let residual = result.ensemble.density().max_abs_diff(&rho);
    let analytic = match input {
        Input::Pure { state, .. } => Some(measure.pure(state)?),
        Input::Mixed { family, .. } => match (sigma_parameter(*family), measure) {
            (Some(p), RoofMeasure::Tau3) => Some(tau_sigma(p)?),
            (Some(p), RoofMeasure::OneTangleA) => Some(one_tangle_sigma(p)?),
            (None, _) => None,
        },
    };
    let discrepancy = analytic.is_some_and(|a| result.value < a - DISCREPANCY_TOLERANCE);
    let members: Vec<Value> = result
        .ensemble
        .members()
        .iter()
        .map(|(w, s)| json!({"weight": w, "amplitudes": s.amplitudes().iter().map(|a| [a.re, a.im]).collect::<Vec<_>>()}))
        .collect();
    let mut failures = Vec::new();
    if residual > RECONSTRUCTION_TOLERANCE {
        failures.push(format!("ensemble reproduces the target only to {residual:e}"));
    }
    let doc = json!({
        "command": "roof",
        "state": input.spec(),
        "measure": measure.name(),
        "value": result.value,
        "converged": result.converged,
        "iterations": result.iterations,
        "best_run": result.best_run,
        "run_values": result.run_values,
        "rank": rank,
        "ensemble_size": m,
        "ensemble": members,
        "reconstruction_residual": residual,
        "analytic": analytic,
        "discrepancy": discrepancy,
        "roof_settings": cfg.roof_settings(),
    });
    let mut report = Report::document("roof", doc);
    report.failures = failures;
    Ok(report)
}

pub fn cmd_polyhedron(input: &Input) -> Result<Report> {
    let rho = input.density();
    let rho4 = match rho.dim() {
        4 => rho,
        8 => embed_ghz_subspace(&rho)?,
        d => return Err(Error::WrongSize { expected: 4, got: d }),
    };
    let weights = polyhedron_membership(&rho4, MEMBERSHIP_TOLERANCE)?;
    let n = bloch_vector(&rho4)?;
    let doc = json!({
        "command": "polyhedron",
        "state": input.spec(),
        "dim": input.dim(),
        "member": weights.is_some(),
        "weights": weights,
        "tolerance": MEMBERSHIP_TOLERANCE,
        "bloch_vector": n.components(),
        "bloch_norm": n.norm(),
        "purity": rho4.purity(),
    });
    Ok(Report::document("polyhedron", doc))
}

pub fn cmd_ems(input: &Input) -> Result<Report> {
    let Input::Pure { state, .. } = input else {
        return Err(Error::param("ems needs a pure state"));
    };
    let value = e_ms(state)?;
    let rho = state.projector();
    let tangles = (0..state.n_qubits()).map(|q| linear_entropy_tangle(&partial_trace(&rho, &[q])?)).collect::<Result<Vec<_>>>()?;
    let doc = json!({
        "command": "ems",
        "state": input.spec(),
        "n_qubits": state.n_qubits(),
        "e_ms": value,
        "one_tangles": tangles,
    });
    Ok(Report::document("ems", doc))
}

pub fn cmd_bound(xi: f64, x: f64, y: f64) -> Result<Report> {
    let bound = rank8_upper_bound(xi, x, y)?;
    let doc = json!({
        "command": "bound",
        "xi": xi,
        "x": x,
        "y": y,
        "tau3_sigma_x": tau_sigma(x)?,
        "bound": bound,
    });
    Ok(Report::document("bound", doc))
}
