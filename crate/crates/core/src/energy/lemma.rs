//! The six-term sum `Σ_j (1 + cos(θ + jπ/3)/√3)^k` that controls hexagon-pair
//! energies, and a coefficient-level check of its generating function.

use std::f64::consts::{FRAC_PI_3, FRAC_PI_6};

use serde::{Deserialize, Serialize};

use super::golden_section;
use crate::constructions::HEX_U;
use crate::potentials::ipow;

fn lambdas(theta: f64) -> [f64; 6] {
    std::array::from_fn(|j| 1.0 + HEX_U * (theta + j as f64 * FRAC_PI_3).cos())
}

pub fn lemma_sum(k: u32, theta: f64) -> f64 {
    lambdas(theta).iter().map(|&l| ipow(l, k)).sum()
}

/// `d/dθ lemma_sum(k, θ)`.
fn lemma_sum_derivative(k: u32, theta: f64) -> f64 {
    if k == 0 {
        return 0.0;
    }
    (0..6)
        .map(|j| {
            let a = theta + j as f64 * FRAC_PI_3;
            k as f64 * ipow(1.0 + HEX_U * a.cos(), k - 1) * (-HEX_U * a.sin())
        })
        .sum()
}

/// Power-series coefficients of order `0..=max_order` of both sides of the
/// generating-function identity.
///
/// The left side has coefficients `lemma_sum(n, θ) − lemma_sum(n, π/6)`; the right side is
/// `y⁶·cos²θ·(4cos²θ − 3)²/216 · (1/(1−y) + 2/(2−y) + 2/(2−3y)) · Π_j 1/(1 − λ_j y)`
/// with `λ_j = 1 + cos(θ + jπ/3)/√3`, expanded by convolution.
pub fn lemma_genfun_coefficients(theta: f64, max_order: usize) -> (Vec<f64>, Vec<f64>) {
    let lhs: Vec<f64> = (0..=max_order)
        .map(|n| lemma_sum(n as u32, theta) - lemma_sum(n as u32, FRAC_PI_6))
        .collect();

    // Π 1/(1 − λ y): multiply by each geometric factor in turn.
    let mut prod = vec![0.0; max_order + 1];
    prod[0] = 1.0;
    for l in lambdas(theta) {
        for n in 1..=max_order {
            prod[n] += l * prod[n - 1];
        }
    }
    let sum_series: Vec<f64> = (0..=max_order)
        .map(|n| 1.0 + ipow(0.5, n as u32) + ipow(1.5, n as u32))
        .collect();
    let c2 = theta.cos().powi(2);
    let prefactor = c2 * (4.0 * c2 - 3.0).powi(2) / 216.0;
    let rhs = (0..=max_order)
        .map(|n| {
            if n < 6 {
                0.0
            } else {
                let m = n - 6;
                prefactor * (0..=m).map(|i| sum_series[i] * prod[m - i]).sum::<f64>()
            }
        })
        .collect();
    (lhs, rhs)
}

/// Largest absolute difference between the two coefficient lists.
pub fn lemma_genfun_check(theta: f64, max_order: usize) -> f64 {
    let (lhs, rhs) = lemma_genfun_coefficients(theta, max_order.max(6));
    lhs.iter()
        .zip(&rhs)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct LemmaMinimum {
    pub k: u32,
    pub theta: f64,
    pub value: f64,
    /// Smallest grid value outside the two cells adjacent to the minimizer.
    pub runner_up: f64,
    /// `max − min` of the grid values (zero up to rounding when constant).
    pub spread: f64,
}

/// Minimizes `lemma_sum(k, ·)` over `[0, π/3]`: grid search, then bisection on
/// the analytic derivative (golden-section when no sign change is bracketed).
pub fn lemma_minimum(k: u32, grid_points: usize) -> LemmaMinimum {
    let n = grid_points.max(3);
    let step = FRAC_PI_3 / (n - 1) as f64;
    let vals: Vec<f64> = (0..n).map(|i| lemma_sum(k, i as f64 * step)).collect();
    let (best, &min) = vals
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty");
    let max = vals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let runner_up = vals
        .iter()
        .enumerate()
        .filter(|(i, _)| i.abs_diff(best) > 1)
        .map(|(_, &v)| v)
        .fold(f64::INFINITY, f64::min);
    let lo = (best.saturating_sub(1)) as f64 * step;
    let hi = ((best + 1).min(n - 1)) as f64 * step;
    let d = |t: f64| lemma_sum_derivative(k, t);
    let theta = if d(lo) < 0.0 && d(hi) > 0.0 {
        let (mut a, mut b) = (lo, hi);
        for _ in 0..200 {
            let m = 0.5 * (a + b);
            if m <= a || m >= b {
                break;
            }
            if d(m) < 0.0 {
                a = m;
            } else {
                b = m;
            }
        }
        0.5 * (a + b)
    } else {
        golden_section(|t| lemma_sum(k, t), lo, hi, 1e-12).0
    };
    LemmaMinimum {
        k,
        theta,
        value: lemma_sum(k, theta),
        runner_up,
        spread: max - min,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_sum_is_seven() {
        for i in 0..100 {
            assert!((lemma_sum(2, i as f64 * 0.0634) - 7.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sixth_power_at_pi_over_6() {
        // 2(3/2)^6 + 2(1/2)^6 + 2
        assert!((lemma_sum(6, FRAC_PI_6) - 24.8125).abs() < 1e-12);
    }

    #[test]
    fn genfun_low_orders_vanish() {
        let (lhs, _) = lemma_genfun_coefficients(1.0, 20);
        assert!(lhs[..6].iter().all(|c| c.abs() < 1e-12));
        let (lhs, rhs) = lemma_genfun_coefficients(FRAC_PI_6, 20);
        assert!(lhs.iter().all(|&c| c == 0.0));
        assert!(rhs.iter().all(|c| c.abs() < 1e-12));
    }

    #[test]
    fn genfun_identity_holds() {
        assert!(lemma_genfun_check(1.0, 20) < 1e-10);
    }

    #[test]
    fn unique_minimum_at_pi_over_6() {
        let m = lemma_minimum(6, 1001);
        assert!((m.theta - FRAC_PI_6).abs() < 1e-8, "{}", m.theta);
        assert!(m.runner_up > m.value);
    }
}
