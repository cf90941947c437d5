//! Critical points of the `C_θ` family and the tangency of the full gradient
//! to the family modulo rotations.

use std::f64::consts::TAU;

use serde::{Deserialize, Serialize};

use super::{gradient_norm, hessian_spectrum, riemannian_gradient};
use crate::constructions::{c_theta_at, c_theta_velocity, ThetaParam};
use crate::energy::{energy_theta_closed, energy_theta_derivative};
use crate::error::Result;
use crate::par;
use crate::potentials::Potential;

pub const CRITICAL_SAMPLES: usize = 10_000;
pub const CRITICAL_THETA_TOL: f64 = 1e-10;
/// Relative eigenvalue threshold for counting zero modes.
pub const CRITICAL_ZERO_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalPoint {
    pub theta: f64,
    pub energy: f64,
    pub negative_count: usize,
    pub zero_count: usize,
    /// Norm of the full `4N`-dimensional Riemannian gradient.
    pub gradient_norm: f64,
    /// `dE/dθ` changes from negative to positive here.
    pub family_minimum: bool,
    pub eigenvalues: Vec<f64>,
}

fn bisect_derivative(f: &Potential, mut lo: f64, mut hi: f64, dlo: f64) -> Option<f64> {
    let lo_neg = dlo < 0.0;
    while hi - lo > CRITICAL_THETA_TOL {
        let mid = 0.5 * (lo + hi);
        let d = energy_theta_derivative(mid, f).ok()?;
        if d == 0.0 {
            return Some(mid);
        }
        if (d < 0.0) == lo_neg {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Zeros of `dE/dθ` on `[0, 2π)` with their full-configuration Hessian data.
///
/// Sign changes across a pole of the derivative (near degenerate θ under a
/// singular potential) are discarded by requiring the derivative to be
/// small at the bracketed point.
pub fn theta_critical_points(f: &Potential) -> Result<Vec<CriticalPoint>> {
    let step = TAU / CRITICAL_SAMPLES as f64;
    let samples: Vec<Option<f64>> = par::map_range(0..CRITICAL_SAMPLES + 1, |i| {
        let th = i as f64 * step;
        ThetaParam::new(th)
            .ok()
            .and_then(|_| energy_theta_derivative(th, f).ok())
    });
    let mut roots = Vec::new();
    for i in 0..CRITICAL_SAMPLES {
        let (Some(a), Some(b)) = (samples[i], samples[i + 1]) else {
            continue;
        };
        if a == 0.0 || (a < 0.0) != (b < 0.0) {
            let (lo, hi) = (i as f64 * step, (i + 1) as f64 * step);
            let Some(th) = (if a == 0.0 {
                Some(lo)
            } else {
                bisect_derivative(f, lo, hi, a)
            }) else {
                continue;
            };
            let th = th.rem_euclid(TAU);
            if ThetaParam::new(th).is_err() {
                continue;
            }
            let (Ok(e), Ok(d)) = (energy_theta_closed(th, f), energy_theta_derivative(th, f))
            else {
                continue;
            };
            let scale = a.abs().max(b.abs()).max(1.0);
            if d.abs() > 1e-6 * scale.max(e.abs()) {
                continue;
            }
            roots.push((th, e, a < 0.0 && b >= 0.0));
        }
    }
    let points = par::map_slice(
        &roots,
        |&(theta, energy, family_minimum)| -> Result<CriticalPoint> {
            let code = c_theta_at(theta)?;
            let s = hessian_spectrum(&code, f, CRITICAL_ZERO_TOL)?;
            Ok(CriticalPoint {
                theta,
                energy,
                negative_count: s.negative_count,
                zero_count: s.zero_count,
                gradient_norm: gradient_norm(&riemannian_gradient(&code, f)?),
                family_minimum,
                eigenvalues: s.eigenvalues,
            })
        },
    );
    points.into_iter().collect()
}

/// Below this gradient norm the residual is reported as 0.
pub const RESIDUAL_GRADIENT_FLOOR: f64 = 1e-6;

/// Relative part of the full gradient at `C_θ` outside the span of the
/// family velocity and the six infinitesimal rotations.
pub fn family_gradient_residual(theta: f64, f: &Potential) -> Result<f64> {
    let code = c_theta_at(theta)?;
    let g: Vec<f64> = riemannian_gradient(&code, f)?
        .into_iter()
        .flatten()
        .collect();
    let gn = g.iter().map(|x| x * x).sum::<f64>().sqrt();
    if gn < RESIDUAL_GRADIENT_FLOOR {
        return Ok(0.0);
    }
    let mut fields: Vec<Vec<f64>> = vec![c_theta_velocity(theta).into_iter().flatten().collect()];
    for a in 0..4 {
        for b in a + 1..4 {
            // (E_ab − E_ba)·x at every point
            fields.push(
                code.points
                    .iter()
                    .flat_map(|p| {
                        let mut v = [0.0; 4];
                        v[a] = p.0[b];
                        v[b] = -p.0[a];
                        v
                    })
                    .collect(),
            );
        }
    }
    let mut ortho: Vec<Vec<f64>> = Vec::new();
    for mut v in fields {
        for _ in 0..2 {
            for q in &ortho {
                let d: f64 = v.iter().zip(q).map(|(x, y)| x * y).sum();
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= d * y);
            }
        }
        let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            ortho.push(v.into_iter().map(|x| x / n).collect());
        }
    }
    let mut r = g;
    for q in &ortho {
        let d: f64 = r.iter().zip(q).map(|(x, y)| x * y).sum();
        r.iter_mut().zip(q).for_each(|(x, y)| *x -= d * y);
    }
    Ok(r.iter().map(|x| x * x).sum::<f64>().sqrt() / gn)
}
