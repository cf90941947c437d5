//! Energy of the rotating-hexagon designs, split into hexagon-internal and
//! hexagon-pair contributions.

use std::f64::consts::{FRAC_PI_3, PI};

use serde::{Deserialize, Serialize};

use super::golden_section;
use crate::constructions::{HexFamilyAngles, HEX_U};
use crate::error::{Error, Result};
use crate::par;
use crate::potentials::Potential;

/// Ordered-pair energy inside one hexagon: `6·(2f(1/2) + 2f(−1/2) + f(−1))`.
pub fn within_hexagon_energy(f: &Potential) -> Result<f64> {
    Ok(6.0 * (2.0 * f.f(0.5)? + 2.0 * f.f(-0.5)? + f.f(-1.0)?))
}

fn angle_of(m: usize, a: &HexFamilyAngles) -> f64 {
    match m {
        1 => a.theta,
        2 => a.phi,
        _ => a.psi,
    }
}

/// Ordered-pair energy between hexagons `a_m·H_m` and `a_{m′}·H_{m′}`.
///
/// The 36 cross inner products take the six values `(1/√3)·cos(δ + jπ/3)`,
/// each six times, with `δ` the angle of the non-`H0` hexagon for pairs with
/// `H0`, and `δ = 3π/2 + δ_m − δ_{m′}` otherwise.
pub fn hexpair_energy(m: usize, mprime: usize, a: &HexFamilyAngles, f: &Potential) -> Result<f64> {
    if m > 3 || mprime > 3 {
        return Err(Error::InvalidArgument(format!(
            "hexagon index out of range: ({m}, {mprime})"
        )));
    }
    if m == mprime {
        return Err(Error::InvalidArgument(
            "hexpair_energy needs distinct hexagons".into(),
        ));
    }
    let (lo, hi) = (m.min(mprime), m.max(mprime));
    let delta = if lo == 0 {
        angle_of(hi, a)
    } else {
        1.5 * PI + angle_of(lo, a) - angle_of(hi, a)
    };
    let mut sum = 0.0;
    for j in 0..6 {
        sum += f.f(HEX_U * (delta + j as f64 * FRAC_PI_3).cos())?;
    }
    Ok(12.0 * sum)
}

/// `4·within_hexagon_energy + Σ_{m < m′} hexpair_energy(m, m′)`.
pub fn hex_design_energy(a: &HexFamilyAngles, f: &Potential) -> Result<f64> {
    let mut total = 4.0 * within_hexagon_energy(f)?;
    for m in 0..4 {
        for mp in m + 1..4 {
            total += hexpair_energy(m, mp, a, f)?;
        }
    }
    Ok(total)
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct HexGridMinimum {
    pub angles: HexFamilyAngles,
    pub energy: f64,
    /// Best energy on the raw grid before refinement.
    pub grid_energy: f64,
}

/// Grid search over `[0, π/3)³` with `n` points per axis, followed by cyclic
/// coordinate-wise golden-section refinement around the best grid point.
pub fn hex_family_grid_min(f: &Potential, n: usize, refine_tol: f64) -> Result<HexGridMinimum> {
    if n < 2 {
        return Err(Error::InvalidArgument(
            "grid needs at least 2 points per axis".into(),
        ));
    }
    let step = FRAC_PI_3 / n as f64;
    let at = |i: usize| i as f64 * step;
    let slabs: Vec<Result<(f64, [f64; 3])>> = par::map_range(0..n, |i| {
        let mut best = (f64::INFINITY, [0.0; 3]);
        for j in 0..n {
            for k in 0..n {
                let x = [at(i), at(j), at(k)];
                let e = hex_design_energy(&HexFamilyAngles::new(x[0], x[1], x[2]), f)?;
                if e < best.0 {
                    best = (e, x);
                }
            }
        }
        Ok(best)
    });
    let mut best = (f64::INFINITY, [0.0; 3]);
    for s in slabs {
        let s = s?;
        if s.0 < best.0 {
            best = s;
        }
    }
    let grid_energy = best.0;
    let mut x = best.1;
    let eval = |x: &[f64; 3]| {
        hex_design_energy(&HexFamilyAngles::new(x[0], x[1], x[2]), f).unwrap_or(f64::INFINITY)
    };
    let mut current = grid_energy;
    for _ in 0..50 {
        let before = current;
        for axis in 0..3 {
            let g = |v: f64| {
                let mut y = x;
                y[axis] = v;
                eval(&y)
            };
            let (v, e) = golden_section(g, x[axis] - step, x[axis] + step, refine_tol);
            if e <= current {
                x[axis] = v;
                current = e;
            }
        }
        if before - current <= 1e-15 * before.abs() {
            break;
        }
    }
    Ok(HexGridMinimum {
        angles: HexFamilyAngles::new(x[0], x[1], x[2]),
        energy: current,
        grid_energy,
    })
}
