//! Spherical t-design checks on S³ through Gegenbauer kernel sums.
//!
//! For S³ the Gegenbauer polynomials with parameter 1 are the Chebyshev
//! polynomials of the second kind, and
//! `defect_k(C) = N⁻² Σ_{x,y ∈ C} U_k(⟨x, y⟩)` (diagonal included) is the squared
//! norm of the degree-k harmonic component of the code's counting measure.

use serde::{Deserialize, Serialize};

use crate::geometry::Code;

pub const DEFAULT_DESIGN_TOL: f64 = 1e-8;

/// `U_k(t)` via `U_0 = 1`, `U_1 = 2t`, `U_{k+1} = 2t·U_k − U_{k−1}`.
pub fn gegenbauer_s3(k: u32, t: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * t);
    if k == 0 {
        return prev;
    }
    for _ in 1..k {
        let next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// All of `U_1(t) .. U_kmax(t)` in one pass.
fn gegenbauer_all(k_max: u32, t: f64, out: &mut [f64]) {
    let (mut prev, mut cur) = (1.0, 2.0 * t);
    for k in 1..=k_max as usize {
        out[k - 1] = cur;
        let next = 2.0 * t * cur - prev;
        prev = cur;
        cur = next;
    }
}

fn defects(code: &Code, k_max: u32) -> Vec<f64> {
    let n = code.len();
    let mut sums = vec![0.0; k_max as usize];
    let mut buf = vec![0.0; k_max as usize];
    for i in 0..n {
        // diagonal: U_k(1) = k + 1
        for (k, s) in sums.iter_mut().enumerate() {
            *s += (k + 2) as f64;
        }
        for j in i + 1..n {
            gegenbauer_all(k_max, code.points[i].dot(&code.points[j]), &mut buf);
            for (s, b) in sums.iter_mut().zip(&buf) {
                *s += 2.0 * b;
            }
        }
    }
    let nn = (n * n) as f64;
    sums.into_iter().map(|s| s / nn).collect()
}

pub fn design_defect(code: &Code, k: u32) -> f64 {
    if k == 0 {
        return 1.0;
    }
    defects(code, k)[k as usize - 1]
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegreeDefect {
    pub k: u32,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DesignReport {
    pub defects: Vec<DegreeDefect>,
    pub strength: u32,
    pub tol: f64,
}

/// Defects for `k = 1..=k_max`; strength is the largest `t` with every defect
/// up to degree `t` at most `tol`.
pub fn design_strength(code: &Code, k_max: u32, tol: f64) -> DesignReport {
    let d = defects(code, k_max.max(1));
    let strength = d.iter().take_while(|&&x| x <= tol).count() as u32;
    DesignReport {
        defects: d
            .into_iter()
            .enumerate()
            .map(|(i, defect)| DegreeDefect {
                k: i as u32 + 1,
                defect,
            })
            .collect(),
        strength,
        tol,
    }
}

/// `6 + 18(sin³θ + cos³θ)`: the sum of the invariant cubic `Re(w1³) + Re(w2³)` over `C_θ`.
pub fn c_theta_cubic_invariant(theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    6.0 + 18.0 * (s.powi(3) + c.powi(3))
}

/// `Σ_{c ∈ code} Re(w1³) + Re(w2³)`, evaluated point by point.
pub fn cubic_invariant_sum(code: &Code) -> f64 {
    code.points
        .iter()
        .map(|p| p.w1().powu(3).re + p.w2().powu(3).re)
        .sum()
}
