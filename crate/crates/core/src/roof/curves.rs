//! Characteristic curves of the X family and lower convex envelopes.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::Serialize;

use crate::analytic::{tau_x, x_polynomial};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurvePoint {
    pub x: f64,
    pub value: f64,
}

const REFINE_FLOOR: f64 = 1e-14;
const REFINE_ITERATIONS: usize = 200;
const MAX_DAMPING: f64 = 1e8;
const REFINE_STARTS: usize = 16;
/// Side of the staggered coarse lattice of extra starting points.
const SPREAD: usize = 6;

fn tau_x_unchecked(x: f64, phi: [f64; 3]) -> f64 {
    tau_x(x, phi).expect("x validated by caller")
}

/// Levenberg-Marquardt descent on `(Re P, Im P)` from `start`, where `|P|`
/// is the X-family three-tangle.
///
/// The zero set of `P` is a curve in the phase cube; minimum-norm steps run
/// along its narrow valley where coordinate moves stall.
fn refine(x: f64, start: [f64; 3]) -> f64 {
    let eval = |p: [f64; 3]| x_polynomial(x, p).expect("x validated by caller");
    let mut phi = start;
    let (mut p, mut grad) = eval(phi);
    let mut damping = 1e-3;
    for _ in 0..REFINE_ITERATIONS {
        if p.norm() < REFINE_FLOOR || damping > MAX_DAMPING {
            break;
        }
        // J J^T + μI for the 2×3 Jacobian with rows Re ∇P and Im ∇P
        let (re, im) = (grad.map(|g| g.re), grad.map(|g| g.im));
        let dot = |u: [f64; 3], v: [f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        let (a, b, c) = (dot(re, re) + damping, dot(re, im), dot(im, im) + damping);
        let det = a * c - b * b;
        let u = (c * p.re - b * p.im) / det;
        let v = (a * p.im - b * p.re) / det;
        let trial = [0, 1, 2].map(|j| phi[j] - (re[j] * u + im[j] * v));
        let (tp, tg) = eval(trial);
        if tp.norm() < p.norm() {
            (phi, p, grad) = (trial, tp, tg);
            damping = (damping / 3.0).max(1e-12);
        } else {
            damping *= 4.0;
        }
    }
    p.norm()
}

/// Pointwise minimum over the phases of the X-family three-tangle.
///
/// The phase cube `[0, 2π)³` is sampled on a `density³` lattice and the
/// best lattice points, together with a staggered coarse lattice, are
/// polished by Levenberg-Marquardt descent.
pub fn characteristic_min_curve(x_grid: &[f64], density: usize) -> Result<Vec<CurvePoint>> {
    if density < 4 {
        return Err(Error::param(format!("phase grid density {density} below 4")));
    }
    if let Some(x) = x_grid.iter().find(|x| !(0.0..=1.0).contains(*x)) {
        return Err(Error::param(format!("x = {x} outside [0, 1]")));
    }
    let h = TAU / density as f64;
    Ok(x_grid
        .par_iter()
        .map(|&x| {
            let mut lattice = Vec::with_capacity(density.pow(3));
            for a in 0..density {
                for b in 0..density {
                    for c in 0..density {
                        let phi = [a as f64 * h, b as f64 * h, c as f64 * h];
                        lattice.push((tau_x_unchecked(x, phi), phi));
                    }
                }
            }
            let keep = REFINE_STARTS.min(lattice.len());
            lattice.select_nth_unstable_by(keep - 1, |a, b| a.0.total_cmp(&b.0));
            lattice.truncate(keep);
            let g = TAU / SPREAD as f64;
            for a in 0..SPREAD {
                for b in 0..SPREAD {
                    for c in 0..SPREAD {
                        let phi = [(a as f64 + 0.5) * g, (b as f64 + 0.5) * g, (c as f64 + 0.5) * g];
                        lattice.push((tau_x_unchecked(x, phi), phi));
                    }
                }
            }
            let value = lattice.iter().map(|&(v, phi)| refine(x, phi).min(v)).fold(f64::INFINITY, f64::min);
            CurvePoint { x, value }
        })
        .collect())
}

fn cross(o: &CurvePoint, a: &CurvePoint, b: &CurvePoint) -> f64 {
    (a.x - o.x) * (b.value - o.value) - (a.value - o.value) * (b.x - o.x)
}

/// Largest convex function below the points, sampled at their abscissae.
pub fn lower_convex_envelope(points: &[CurvePoint]) -> Result<Vec<CurvePoint>> {
    if points.len() < 2 {
        return Err(Error::TooFewPoints);
    }
    if points.windows(2).any(|w| !(w[1].x > w[0].x)) {
        return Err(Error::param("points must be sorted by strictly increasing x"));
    }
    if points.iter().any(|p| !p.value.is_finite()) {
        return Err(Error::param("curve values must be finite"));
    }
    let mut hull: Vec<CurvePoint> = Vec::with_capacity(points.len());
    for p in points {
        while hull.len() >= 2 && cross(&hull[hull.len() - 2], &hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(*p);
    }
    let mut seg = 0;
    Ok(points
        .iter()
        .map(|p| {
            while seg + 1 < hull.len() - 1 && hull[seg + 1].x < p.x {
                seg += 1;
            }
            let (a, b) = (hull[seg], hull[seg + 1]);
            let t = (p.x - a.x) / (b.x - a.x);
            let value = if p.x == a.x {
                a.value
            } else if p.x == b.x {
                b.value
            } else {
                a.value + t * (b.value - a.value)
            };
            CurvePoint { x: p.x, value: value.min(p.value) }
        })
        .collect())
}
