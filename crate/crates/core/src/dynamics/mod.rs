//! Riemannian gradients and Hessians of pair energies on `(S³)^N`, descent
//! dynamics, and critical-point analysis of the `C_θ` family.

mod critical;
mod descent;
pub mod eigen;

pub use critical::{
    family_gradient_residual, theta_critical_points, CriticalPoint, CRITICAL_ZERO_TOL,
};
pub use descent::{
    basin_experiment, basin_references, classify, descend, BasinStats, DescentOptions,
    DescentResult, ReferenceCode, CLASSIFY_TOL,
};
pub use eigen::{jacobi_eigen, symmetric_eigenvalues, SymMatrix};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{dot, Code};
use crate::potentials::Potential;

/// Three orthonormal tangent vectors at every point of a code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TangentBasis {
    pub vectors: Vec<[[f64; 4]; 3]>,
}

fn tangent_frame(x: &[f64; 4]) -> [[f64; 4]; 3] {
    // the three coordinate axes least aligned with x
    let mut axes = [0usize, 1, 2, 3];
    axes.sort_by(|&a, &b| x[a].abs().total_cmp(&x[b].abs()));
    let mut out = [[0.0; 4]; 3];
    for (slot, &k) in axes[..3].iter().enumerate() {
        let mut e = [0.0; 4];
        e[k] = 1.0;
        // two passes of Gram–Schmidt for full orthogonality
        for _ in 0..2 {
            let px = dot(&e, x);
            for c in 0..4 {
                e[c] -= px * x[c];
            }
            for prev in &out[..slot] {
                let pp = dot(&e, prev);
                for c in 0..4 {
                    e[c] -= pp * prev[c];
                }
            }
        }
        let n = dot(&e, &e).sqrt();
        out[slot] = e.map(|c| c / n);
    }
    out
}

impl TangentBasis {
    pub fn new(code: &Code) -> Self {
        Self {
            vectors: code.points.iter().map(|p| tangent_frame(&p.0)).collect(),
        }
    }

    /// Largest deviation from orthonormality and tangency.
    pub fn defect(&self, code: &Code) -> f64 {
        let mut worst: f64 = 0.0;
        for (frame, p) in self.vectors.iter().zip(&code.points) {
            for (a, ea) in frame.iter().enumerate() {
                worst = worst.max(dot(ea, &p.0).abs());
                for (b, eb) in frame.iter().enumerate() {
                    let want = if a == b { 1.0 } else { 0.0 };
                    worst = worst.max((dot(ea, eb) - want).abs());
                }
            }
        }
        worst
    }

    /// Ambient tangent vectors from coordinates `ξ` (length `3N`).
    pub fn to_ambient(&self, xi: &[f64]) -> Vec<[f64; 4]> {
        self.vectors
            .iter()
            .enumerate()
            .map(|(i, frame)| {
                let mut v = [0.0; 4];
                for (a, e) in frame.iter().enumerate() {
                    for c in 0..4 {
                        v[c] += xi[3 * i + a] * e[c];
                    }
                }
                v
            })
            .collect()
    }

    /// Coordinates of ambient tangent vectors.
    pub fn to_coords(&self, v: &[[f64; 4]]) -> Vec<f64> {
        self.vectors
            .iter()
            .zip(v)
            .flat_map(|(frame, vi)| frame.iter().map(|e| dot(e, vi)))
            .collect()
    }
}

/// Ambient Euclidean gradient of `E = Σ_{i≠j} f(⟨x_i,x_j⟩)` with respect to each point.
fn ambient_gradient(code: &Code, f: &Potential) -> Result<Vec<[f64; 4]>> {
    let n = code.len();
    let mut g = vec![[0.0; 4]; n];
    for i in 0..n {
        for j in i + 1..n {
            let (xi, xj) = (&code.points[i].0, &code.points[j].0);
            let d = 2.0 * f.d1(dot(xi, xj))?;
            for c in 0..4 {
                g[i][c] += d * xj[c];
                g[j][c] += d * xi[c];
            }
        }
    }
    Ok(g)
}

/// Removes the component along `x`; the second pass brings `⟨x, v⟩` down to
/// rounding relative to the tangent part rather than to `v`.
pub(crate) fn project_tangent(x: &[f64; 4], v: &[f64; 4]) -> [f64; 4] {
    let xx = dot(x, x);
    let mut out = *v;
    for _ in 0..2 {
        let p = dot(x, &out) / xx;
        out = std::array::from_fn(|c| out[c] - p * x[c]);
    }
    out
}

/// Tangential part of `2·Σ_j f′(⟨x_i,x_j⟩)·x_j` at each point.
pub fn riemannian_gradient(code: &Code, f: &Potential) -> Result<Vec<[f64; 4]>> {
    let g = ambient_gradient(code, f)?;
    Ok(code
        .points
        .iter()
        .zip(&g)
        .map(|(p, gi)| project_tangent(&p.0, gi))
        .collect())
}

pub fn gradient_norm(g: &[[f64; 4]]) -> f64 {
    g.iter().map(|v| dot(v, v)).sum::<f64>().sqrt()
}

/// Second derivative of the energy along product geodesics, in the
/// coordinates of `basis`; a symmetric `3N × 3N` matrix.
pub fn riemannian_hessian(code: &Code, f: &Potential, basis: &TangentBasis) -> Result<SymMatrix> {
    let n = code.len();
    if basis.vectors.len() != n {
        return Err(Error::SizeMismatch(basis.vectors.len(), n));
    }
    let mut h = SymMatrix::zeros(3 * n);
    for i in 0..n {
        for j in i + 1..n {
            let (xi, xj) = (&code.points[i].0, &code.points[j].0);
            let t = dot(xi, xj);
            let (f1, f2) = (f.d1(t)?, f.d2(t)?);
            let (ei, ej) = (&basis.vectors[i], &basis.vectors[j]);
            let ei_xj = ei.map(|e| dot(&e, xj));
            let ej_xi = ej.map(|e| dot(&e, xi));
            for a in 0..3 {
                for b in 0..3 {
                    let v = 2.0 * (f2 * ei_xj[a] * ej_xi[b] + f1 * dot(&ei[a], &ej[b]));
                    h.set(3 * i + a, 3 * j + b, v);
                    h.set(3 * j + b, 3 * i + a, v);
                }
                for b in a..3 {
                    let diag = if a == b { t * f1 } else { 0.0 };
                    for (k, w) in [(i, &ei_xj), (j, &ej_xi)] {
                        let v = 2.0 * (f2 * w[a] * w[b] - diag);
                        h.add(3 * k + a, 3 * k + b, v);
                        if a != b {
                            h.add(3 * k + b, 3 * k + a, v);
                        }
                    }
                }
            }
        }
    }
    Ok(h)
}

/// Sorted eigenvalues with a clustered view and sign counts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HessianSpectrum {
    pub eigenvalues: Vec<f64>,
    /// Absolute threshold: `rel_zero_tol` times the spectral radius.
    pub zero_tol: f64,
    pub clusters: Vec<(f64, usize)>,
    pub negative_count: usize,
    pub zero_count: usize,
    pub positive_count: usize,
}

impl HessianSpectrum {
    pub fn from_eigenvalues(mut eigenvalues: Vec<f64>, rel_zero_tol: f64) -> Self {
        eigenvalues.sort_by(f64::total_cmp);
        let radius = eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let zero_tol = rel_zero_tol * radius;
        let negative_count = eigenvalues.iter().filter(|&&x| x < -zero_tol).count();
        let zero_count = eigenvalues.iter().filter(|&&x| x.abs() <= zero_tol).count();
        let positive_count = eigenvalues.len() - negative_count - zero_count;
        // gap clustering at the same relative scale; zeros snap to 0
        let cluster_tol = zero_tol.max(f64::MIN_POSITIVE);
        let mut clusters: Vec<(f64, usize, f64)> = Vec::new();
        for &x in &eigenvalues {
            let x = if x.abs() <= zero_tol { 0.0 } else { x };
            match clusters.last_mut() {
                Some((mean, count, last)) if (x - *last).abs() <= cluster_tol => {
                    *mean = (*mean * *count as f64 + x) / (*count + 1) as f64;
                    *count += 1;
                    *last = x;
                }
                _ => clusters.push((x, 1, x)),
            }
        }
        Self {
            eigenvalues,
            zero_tol,
            clusters: clusters.into_iter().map(|(m, c, _)| (m, c)).collect(),
            negative_count,
            zero_count,
            positive_count,
        }
    }

    pub fn spectral_radius(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0f64, |m, x| m.max(x.abs()))
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("eigenvalue\n");
        for x in &self.eigenvalues {
            s.push_str(&format!("{x}\n"));
        }
        s
    }
}

pub const DEFAULT_ZERO_TOL: f64 = 1e-6;

/// Hessian spectrum in the deterministic tangent basis of `code`.
pub fn hessian_spectrum(code: &Code, f: &Potential, rel_zero_tol: f64) -> Result<HessianSpectrum> {
    let h = riemannian_hessian(code, f, &TangentBasis::new(code))?;
    Ok(HessianSpectrum::from_eigenvalues(
        symmetric_eigenvalues(&h),
        rel_zero_tol,
    ))
}

/// Multiplicities of the closed-form 24-cell Hessian eigenvalues, in the
/// order returned by [`d4_hessian_closed_form`].
pub const D4_HESSIAN_MULTIPLICITIES: [usize; 8] = [6, 9, 16, 8, 12, 4, 9, 8];

/// The 24-cell Hessian eigenvalues as `(value, multiplicity)`: zero for the
/// rotations, then seven combinations of `f′`, `f″` at `1/2, 0, −1/2, −1`.
pub fn d4_hessian_closed_form(f: &Potential) -> Result<Vec<(f64, usize)>> {
    let (a, b, c) = (f.d2(0.5)?, f.d2(0.0)?, f.d2(-0.5)?);
    let (p, q, r, s) = (f.d1(0.5)?, f.d1(0.0)?, f.d1(-0.5)?, f.d1(-1.0)?);
    let vals = [
        0.0,
        2.0 * a + 8.0 * b + 2.0 * c - 12.0 * p + 12.0 * r,
        2.0 * a + 4.0 * b + 6.0 * c - 8.0 * p - 4.0 * q + 8.0 * r + 4.0 * s,
        5.0 * a + 4.0 * b + 3.0 * c - 14.0 * p + 8.0 * q + 2.0 * r + 4.0 * s,
        6.0 * a + 6.0 * c - 12.0 * p + 12.0 * r,
        2.0 * a + 4.0 * b + 6.0 * c + 4.0 * p + 8.0 * q + 20.0 * r + 4.0 * s,
        6.0 * a + 8.0 * b + 6.0 * c - 4.0 * p + 4.0 * r,
        8.0 * a + 4.0 * b - 8.0 * p - 4.0 * q + 8.0 * r + 4.0 * s,
    ];
    Ok(vals.into_iter().zip(D4_HESSIAN_MULTIPLICITIES).collect())
}

/// The closed-form values expanded by multiplicity and sorted.
pub fn d4_closed_form_spectrum(f: &Potential) -> Result<Vec<f64>> {
    let mut v: Vec<f64> = d4_hessian_closed_form(f)?
        .into_iter()
        .flat_map(|(x, m)| std::iter::repeat(x).take(m))
        .collect();
    v.sort_by(f64::total_cmp);
    Ok(v)
}

/// Moves each point along the great circle through its tangent vector `v_i` by `|s·v_i|`.
pub fn exp_map(code: &Code, v: &[[f64; 4]], s: f64) -> Code {
    let pts = code
        .points
        .iter()
        .zip(v)
        .map(|(p, vi)| {
            let n = dot(vi, vi).sqrt();
            if n == 0.0 {
                return *p;
            }
            let (sn, cs) = (s * n).sin_cos();
            crate::geometry::UnitVec4(std::array::from_fn(|c| cs * p.0[c] + sn * vi[c] / n))
        })
        .collect();
    Code::new(code.label.clone(), pts)
}
