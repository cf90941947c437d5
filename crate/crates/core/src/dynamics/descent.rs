//! Projected gradient descent on `(S³)^N` and basin-of-attraction statistics.

use std::collections::BTreeMap;

use rand::SeedableRng;
use serde::{Deserialize, Serialize};

use super::{gradient_norm, riemannian_gradient, theta_critical_points};
use crate::constructions::{c_theta_at, d4};
use crate::energy::energy;
use crate::error::{Error, Result};
use crate::geometry::{dot, random_code, spectrum_distance, Code, UnitVec4};
use crate::par;
use crate::potentials::Potential;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DescentOptions {
    /// Stop once the gradient norm falls below this.
    pub grad_tol: f64,
    pub max_iters: usize,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Step shrink factor on rejection.
    pub backtrack: f64,
    /// First trial step; by default the largest point moves by 0.1.
    pub initial_step: Option<f64>,
    /// Reuse a fixed trial step every iteration instead of Barzilai–Borwein.
    pub fixed_step: bool,
    /// Cap on the displacement of any single point per step.
    pub max_move: f64,
    pub record_trace: bool,
}

impl Default for DescentOptions {
    fn default() -> Self {
        Self {
            grad_tol: 1e-10,
            max_iters: 20_000,
            armijo: 1e-4,
            backtrack: 0.5,
            initial_step: None,
            fixed_step: false,
            max_move: 0.5,
            record_trace: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DescentResult {
    pub code: Code,
    pub energy: f64,
    pub iterations: usize,
    pub grad_norm: f64,
    pub converged: bool,
    /// Step size underflowed before convergence.
    pub stalled: bool,
    pub label: Option<String>,
    /// Energy after each accepted step, tracked by accumulating exact
    /// per-step differences (starts with the initial energy).
    pub energy_trace: Vec<f64>,
}

const MIN_STEP: f64 = 1e-30;

/// Trial points `(x_i − α g_i)·|x_i|/|x_i − α g_i|` and the energy change, summed
/// from per-pair increments so that tiny decreases are resolved accurately.
fn trial_step(
    x: &[[f64; 4]],
    g: &[[f64; 4]],
    alpha: f64,
    f: &Potential,
) -> Result<(Vec<[f64; 4]>, f64)> {
    let n = x.len();
    let mut d = Vec::with_capacity(n);
    let mut y = Vec::with_capacity(n);
    for (xi, gi) in x.iter().zip(g) {
        let xx = dot(xi, xi);
        // rescale to the current norm so rounding in |x| never enters ΔE
        let n2m1 = (alpha * alpha * dot(gi, gi) - 2.0 * alpha * dot(xi, gi)) / xx;
        let norm = (1.0 + n2m1).sqrt();
        let nm1 = n2m1 / (norm + 1.0);
        let di: [f64; 4] = std::array::from_fn(|c| (-alpha * gi[c] - xi[c] * nm1) / norm);
        y.push(std::array::from_fn(|c| (xi[c] - alpha * gi[c]) / norm));
        d.push(di);
    }
    let mut delta = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            let t = dot(&x[i], &x[j]);
            let dt = dot(&x[i], &d[j]) + dot(&d[i], &x[j]) + dot(&d[i], &d[j]);
            delta += 2.0 * f.increment(t, dt)?;
        }
    }
    Ok((y, delta))
}

fn to_code(label: &str, x: &[[f64; 4]]) -> Code {
    Code::new(label, x.iter().map(|p| UnitVec4(*p)).collect())
}

/// Riemannian gradient descent with retraction by renormalization and
/// Armijo backtracking; the energy never increases across accepted steps.
pub fn descend(start: &Code, f: &Potential, opts: &DescentOptions) -> Result<DescentResult> {
    if start.len() < 2 {
        return Err(Error::InvalidArgument(
            "descent needs at least two points".into(),
        ));
    }
    let mut x: Vec<[f64; 4]> = start.points.iter().map(|p| p.0).collect();
    let mut e = energy(start, f)?;
    let mut g = riemannian_gradient(start, f)?;
    let mut gn = gradient_norm(&g);
    let mut trace = if opts.record_trace {
        vec![e]
    } else {
        Vec::new()
    };
    let gmax = |g: &[[f64; 4]]| g.iter().map(|v| dot(v, v).sqrt()).fold(0.0, f64::max);
    let base_step = opts
        .initial_step
        .unwrap_or_else(|| 0.1 / gmax(&g).max(f64::MIN_POSITIVE));
    let mut alpha = base_step;
    let (mut iterations, mut stalled) = (0, false);
    while gn >= opts.grad_tol && iterations < opts.max_iters {
        alpha = alpha.min(opts.max_move / gmax(&g).max(f64::MIN_POSITIVE));
        let accepted = loop {
            match trial_step(&x, &g, alpha, f) {
                Ok((y, de)) if de <= -opts.armijo * alpha * gn * gn => break Some((y, de)),
                _ => {
                    alpha *= opts.backtrack;
                    if alpha < MIN_STEP {
                        break None;
                    }
                }
            }
        };
        let Some((y, de)) = accepted else {
            stalled = true;
            break;
        };
        iterations += 1;
        e += de;
        if opts.record_trace {
            trace.push(e);
        }
        let code = to_code(&start.label, &y);
        let g_new = riemannian_gradient(&code, f)?;
        if opts.fixed_step {
            alpha = base_step;
        } else {
            // Barzilai–Borwein: |s|² / ⟨s, Δg⟩ with ambient differences
            let (mut ss, mut sy) = (0.0, 0.0);
            for i in 0..x.len() {
                for c in 0..4 {
                    let s = y[i][c] - x[i][c];
                    ss += s * s;
                    sy += s * (g_new[i][c] - g[i][c]);
                }
            }
            alpha = if sy > 0.0 && ss > 0.0 {
                ss / sy
            } else {
                2.0 * alpha
            };
        }
        x = y;
        g = g_new;
        gn = gradient_norm(&g);
    }
    let code = to_code(&start.label, &x);
    Ok(DescentResult {
        energy: energy(&code, f)?,
        code,
        iterations,
        grad_norm: gn,
        converged: gn < opts.grad_tol,
        stalled,
        label: None,
        energy_trace: trace,
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReferenceCode {
    pub label: String,
    pub code: Code,
}

pub const CLASSIFY_TOL: f64 = 1e-3;

/// Label of the first reference whose Gram spectrum is within `tol`, else `"other"`.
pub fn classify(code: &Code, refs: &[ReferenceCode], tol: f64) -> String {
    refs.iter()
        .find(|r| spectrum_distance(code, &r.code).is_ok_and(|d| d < tol))
        .map_or_else(|| "other".to_string(), |r| r.label.clone())
}

/// The 24-cell plus every `C_θ` critical code of `f`; the lowest family
/// minimum is labelled `C_θ-like`, the rest `C_θ critical`.
pub fn basin_references(f: &Potential) -> Result<Vec<ReferenceCode>> {
    let mut refs = vec![ReferenceCode {
        label: "D4".into(),
        code: d4(),
    }];
    let mut crit = theta_critical_points(f)?;
    crit.sort_by(|a, b| {
        b.family_minimum
            .cmp(&a.family_minimum)
            .then(a.energy.total_cmp(&b.energy))
    });
    let mut first = true;
    let mut seen: Vec<f64> = Vec::new();
    for cp in crit {
        // each critical code can recur at several θ
        if seen
            .iter()
            .any(|e| (e - cp.energy).abs() < 1e-6 * e.abs().max(1.0))
        {
            continue;
        }
        seen.push(cp.energy);
        let label = if std::mem::take(&mut first) && cp.family_minimum {
            format!("C_θ-like ({:.3})", cp.energy)
        } else {
            format!("C_θ critical ({:.3})", cp.energy)
        };
        refs.push(ReferenceCode {
            label,
            code: c_theta_at(cp.theta)?,
        });
    }
    Ok(refs)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasinStats {
    pub trials: usize,
    pub seed: u64,
    pub counts: BTreeMap<String, usize>,
    pub fractions: BTreeMap<String, f64>,
    /// `(bin lower edge, count)` over final energies.
    pub energy_histogram: Vec<(f64, usize)>,
    pub final_energies: Vec<f64>,
    pub labels: Vec<String>,
    pub not_converged: usize,
}

impl BasinStats {
    pub fn fraction(&self, label_prefix: &str) -> f64 {
        self.fractions
            .iter()
            .filter(|(k, _)| k.starts_with(label_prefix))
            .map(|(_, v)| v)
            .sum()
    }
}

/// Seed of trial `i`, independent of scheduling.
pub fn trial_seed(seed: u64, trial: usize) -> u64 {
    use rand::RngCore;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial as u64 + 1);
    rng.next_u64()
}

const HISTOGRAM_BIN: f64 = 0.01;

/// Descends from `trials` random 24-point codes and tallies the outcomes.
pub fn basin_experiment(
    f: &Potential,
    trials: usize,
    seed: u64,
    opts: &DescentOptions,
) -> Result<BasinStats> {
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let refs = basin_references(f)?;
    let outcomes = par::map_range(0..trials, |i| -> Result<(f64, String, bool)> {
        let start = random_code(24, trial_seed(seed, i))?;
        let r = descend(&start, f, opts)?;
        Ok((
            r.energy,
            classify(&r.code, &refs, CLASSIFY_TOL),
            r.converged,
        ))
    });
    let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
    let mut counts = BTreeMap::new();
    let mut bins: BTreeMap<i64, usize> = BTreeMap::new();
    for (e, label, _) in &outcomes {
        *counts.entry(label.clone()).or_insert(0) += 1;
        *bins.entry((e / HISTOGRAM_BIN).floor() as i64).or_insert(0) += 1;
    }
    let fractions = counts
        .iter()
        .map(|(k, v)| (k.clone(), *v as f64 / trials as f64))
        .collect();
    Ok(BasinStats {
        trials,
        seed,
        counts,
        fractions,
        energy_histogram: bins
            .into_iter()
            .map(|(b, c)| (b as f64 * HISTOGRAM_BIN, c))
            .collect(),
        final_energies: outcomes.iter().map(|o| o.0).collect(),
        labels: outcomes.iter().map(|o| o.1.clone()).collect(),
        not_converged: outcomes.iter().filter(|o| !o.2).count(),
    })
}
