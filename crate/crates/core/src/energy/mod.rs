//! Potential energy of codes: the brute-force pair sum, the closed forms for
//! the 24-cell and `C_θ`, and scans over the `C_θ` family.

mod hexfamily;
mod lemma;

pub use hexfamily::{
    hex_design_energy, hex_family_grid_min, hexpair_energy, within_hexagon_energy, HexGridMinimum,
};
pub use lemma::{
    lemma_genfun_check, lemma_genfun_coefficients, lemma_minimum, lemma_sum, LemmaMinimum,
};

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constructions::{c_theta_inner_product_derivatives, c_theta_inner_products, ThetaParam};
use crate::error::{Error, Result};
use crate::geometry::{Code, COLLISION_TOL};
use crate::par;
use crate::potentials::Potential;

/// `E_f(C) = Σ_{c ≠ c′} f(⟨c, c′⟩)` over ordered pairs.
pub fn energy(code: &Code, f: &Potential) -> Result<f64> {
    if matches!(f, Potential::Riesz(_)) {
        if let Some((i, j)) = code.find_collision(COLLISION_TOL) {
            let t = code.points[i].dot(&code.points[j]);
            return Err(Error::Domain {
                potential: f.to_string(),
                t,
            });
        }
    }
    let n = code.len();
    let mut total = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            total += f.f(code.points[i].dot(&code.points[j]))?;
        }
    }
    Ok(2.0 * total)
}

/// `24 f(−1) + 192 (f(1/2) + f(−1/2)) + 144 f(0)`.
pub fn energy_d4_closed(f: &Potential) -> Result<f64> {
    Ok(24.0 * f.f(-1.0)? + 192.0 * (f.f(0.5)? + f.f(-0.5)?) + 144.0 * f.f(0.0)?)
}

/// The eleven-term closed form for `E_f(C_θ)`.
pub fn energy_theta_closed(theta: f64, f: &Potential) -> Result<f64> {
    c_theta_inner_products(theta)
        .iter()
        .try_fold(0.0, |acc, &(t, m)| Ok(acc + m as f64 * f.f(t)?))
}

/// `d/dθ E_f(C_θ)`, differentiated term by term.
pub fn energy_theta_derivative(theta: f64, f: &Potential) -> Result<f64> {
    let vals = c_theta_inner_products(theta);
    let ders = c_theta_inner_product_derivatives(theta);
    vals.iter().zip(ders).try_fold(0.0, |acc, (&(t, m), dt)| {
        if dt == 0.0 {
            Ok(acc)
        } else {
            Ok(acc + m as f64 * f.d1(t)? * dt)
        }
    })
}

/// Golden-section search for a minimum of `g` on `[a, b]`.
pub(crate) fn golden_section<F: Fn(f64) -> f64>(
    g: F,
    mut a: f64,
    mut b: f64,
    tol: f64,
) -> (f64, f64) {
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    while (b - a).abs() > tol {
        if gc <= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - inv_phi * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + inv_phi * (b - a);
            gd = g(d);
        }
    }
    let x = 0.5 * (a + b);
    (x, g(x))
}

/// Root of `dE/dθ` on `[lo, hi]` by bisection, when the derivative goes from
/// negative to positive across the interval.
pub(crate) fn derivative_root(f: &Potential, lo: f64, hi: f64) -> Option<f64> {
    let d = |t: f64| {
        ThetaParam::new(t).ok()?;
        energy_theta_derivative(t, f).ok().filter(|v| v.is_finite())
    };
    let (dl, dh) = (d(lo)?, d(hi)?);
    if !(dl < 0.0 && dh > 0.0) {
        return None;
    }
    let (mut a, mut b) = (lo, hi);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        if d(m)? < 0.0 {
            a = m;
        } else {
            b = m;
        }
    }
    Some(0.5 * (a + b))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaMinimum {
    pub theta: f64,
    pub energy: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThetaScanResult {
    /// `(θ, E_f(C_θ))` at every valid grid angle.
    pub samples: Vec<(f64, f64)>,
    /// Refined local minima, θ in `[0, 2π)`, sorted by energy.
    pub minima: Vec<ThetaMinimum>,
}

impl ThetaScanResult {
    pub fn global_minimum(&self) -> Option<ThetaMinimum> {
        self.minima.first().copied()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("theta,energy\n");
        for (t, e) in &self.samples {
            s.push_str(&format!("{t:?},{e:?}\n"));
        }
        s
    }
}

/// Relative energy gap below which two minima count as symmetric copies.
const TIE_REL_TOL: f64 = 1e-12;

/// Sorts by energy; minima tied with the lowest one are ordered by angle so
/// the reported global minimum does not depend on rounding.
fn sort_minima(minima: &mut [ThetaMinimum]) {
    minima.sort_by(|a, b| a.energy.total_cmp(&b.energy));
    if let Some(first) = minima.first() {
        let cut = first.energy + TIE_REL_TOL * first.energy.abs().max(1.0);
        let tied = minima.iter().take_while(|m| m.energy <= cut).count();
        minima[..tied].sort_by(|a, b| a.theta.total_cmp(&b.theta));
    }
}

fn energy_if_valid(theta: f64, f: &Potential) -> Option<f64> {
    ThetaParam::new(theta).ok()?;
    energy_theta_closed(theta, f).ok().filter(|e| e.is_finite())
}

/// Scans `E_f(C_θ)` over a uniform grid on `[0, 2π)`, skipping degenerate
/// angles, and refines every grid local minimum by golden-section search.
pub fn scan_theta(f: &Potential, grid_points: usize, refine_tol: f64) -> Result<ThetaScanResult> {
    if grid_points < 100 {
        return Err(Error::InvalidArgument(
            "scan_theta needs at least 100 grid points".into(),
        ));
    }
    if !(refine_tol > 0.0) {
        return Err(Error::InvalidArgument("refine_tol must be positive".into()));
    }
    let step = 2.0 * PI / grid_points as f64;
    let grid: Vec<Option<f64>> =
        par::map_range(0..grid_points, |i| energy_if_valid(i as f64 * step, f));
    let samples = grid
        .iter()
        .enumerate()
        .filter_map(|(i, e)| e.map(|e| (i as f64 * step, e)))
        .collect();

    let candidates: Vec<usize> = (0..grid_points)
        .filter(|&i| {
            let prev = grid[(i + grid_points - 1) % grid_points];
            let next = grid[(i + 1) % grid_points];
            match (prev, grid[i], next) {
                (Some(p), Some(e), Some(n)) => e < p && e <= n,
                _ => false,
            }
        })
        .collect();
    let mut minima: Vec<ThetaMinimum> = par::map_slice(&candidates, |&i| {
        let center = i as f64 * step;
        let g = |th: f64| energy_if_valid(th, f).unwrap_or(f64::INFINITY);
        let (lo, hi) = (center - step, center + step);
        let (mut theta, mut energy) = golden_section(g, lo, hi, refine_tol);
        // Golden-section is limited by rounding in E near a flat minimum;
        // bisecting the analytic derivative pins the angle further.
        if let Some(t) = derivative_root(f, lo, hi) {
            let e = g(t);
            if e <= energy + 1e-12 * energy.abs() {
                theta = t;
                energy = e;
            }
        }
        ThetaMinimum {
            theta: theta.rem_euclid(2.0 * PI),
            energy,
        }
    });
    sort_minima(&mut minima);
    Ok(ThetaScanResult { samples, minima })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BestTheta {
    pub theta: f64,
    pub energy: f64,
    /// `E_f(D4) − min_θ E_f(C_θ)`; positive means some `C_θ` beats the 24-cell.
    pub margin: f64,
}

pub const DEFAULT_SCAN_POINTS: usize = 10_000;
pub const DEFAULT_REFINE_TOL: f64 = 1e-9;

pub fn best_theta_vs_d4(f: &Potential) -> Result<BestTheta> {
    let scan = scan_theta(f, DEFAULT_SCAN_POINTS, DEFAULT_REFINE_TOL)?;
    let best = scan
        .global_minimum()
        .ok_or_else(|| Error::InvalidArgument(format!("no interior minimum for {f}")))?;
    Ok(BestTheta {
        theta: best.theta,
        energy: best.energy,
        margin: energy_d4_closed(f)? - best.energy,
    })
}

/// `t_max(C_θ)` from the closed-form inner products.
pub fn c_theta_t_max(theta: f64) -> f64 {
    c_theta_inner_products(theta)
        .iter()
        .map(|e| e.0)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Local minima of `θ ↦ t_max(C_θ)` on `[0, 2π)`, refined by golden-section
/// search and sorted by value.
pub fn scan_theta_t_max(grid_points: usize, refine_tol: f64) -> Vec<ThetaMinimum> {
    let step = 2.0 * PI / grid_points as f64;
    let vals: Vec<f64> = (0..grid_points)
        .map(|i| c_theta_t_max(i as f64 * step))
        .collect();
    let mut out: Vec<ThetaMinimum> = (0..grid_points)
        .filter(|&i| {
            let p = vals[(i + grid_points - 1) % grid_points];
            let n = vals[(i + 1) % grid_points];
            vals[i] < p && vals[i] <= n
        })
        .map(|i| {
            let c = i as f64 * step;
            let (theta, energy) = golden_section(c_theta_t_max, c - step, c + step, refine_tol);
            ThetaMinimum {
                theta: theta.rem_euclid(2.0 * PI),
                energy,
            }
        })
        .collect();
    sort_minima(&mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{c_theta_at, d4};
    use crate::geometry::Code;

    #[test]
    fn d4_energies() {
        let d = d4();
        assert!((energy(&d, &Potential::Riesz(1.0)).unwrap() - 668.0).abs() < 1e-9);
        assert!((energy(&d, &Potential::PowPlus(8)).unwrap() - 5065.5).abs() < 1e-9);
        assert!((energy_d4_closed(&Potential::Riesz(1.0)).unwrap() - 668.0).abs() < 1e-12);
        assert_eq!(
            energy_d4_closed(&Potential::poly_from_ints(&[1])).unwrap(),
            552.0
        );
        // brute-force oracle for (1+t)^3
        let brute = energy(&d, &Potential::PowPlus(3)).unwrap();
        assert!((brute - 816.0).abs() < 1e-9);
        assert_eq!(energy_d4_closed(&Potential::PowPlus(3)).unwrap(), 816.0);
    }

    #[test]
    fn single_point_energy_is_zero() {
        let c = Code::from_coords("", &[[1.0, 0.0, 0.0, 0.0]]).unwrap();
        assert_eq!(energy(&c, &Potential::Riesz(1.0)).unwrap(), 0.0);
    }

    #[test]
    fn coincident_points_are_a_domain_error_for_riesz() {
        let c = Code::from_coords("", &[[1.0, 0.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0]]).unwrap();
        assert!(matches!(
            energy(&c, &Potential::Riesz(1.0)),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn closed_form_matches_brute_force() {
        let fams = [
            Potential::PowPlus(8),
            Potential::Riesz(1.0),
            Potential::Exp(6.0),
            "poly:1,2,-1/3,1/5".parse().unwrap(),
        ];
        for i in 0..20 {
            let th = 0.1 + 0.31 * i as f64;
            let Ok(code) = c_theta_at(th) else { continue };
            for f in &fams {
                let a = energy_theta_closed(th, f).unwrap();
                let b = energy(&code, f).unwrap();
                assert!(
                    (a - b).abs() <= 1e-8 * (1.0 + a.abs()),
                    "{f} at {th}: {a} vs {b}"
                );
            }
        }
        assert_eq!(
            energy_theta_closed(0.3, &Potential::poly_from_ints(&[1])).unwrap(),
            552.0
        );
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let f = Potential::Riesz(1.0);
        let h = 1e-6;
        for th in [0.5, 2.5, 4.2] {
            let fd = (energy_theta_closed(th + h, &f).unwrap()
                - energy_theta_closed(th - h, &f).unwrap())
                / (2.0 * h);
            let d = energy_theta_derivative(th, &f).unwrap();
            assert!((fd - d).abs() < 1e-5 * (1.0 + d.abs()));
        }
    }

    #[test]
    fn golden_section_finds_parabola_minimum() {
        let (x, y) = golden_section(|x| (x - 0.3).powi(2) + 1.0, -1.0, 2.0, 1e-10);
        // flatness near the minimum limits golden-section to about sqrt(eps)
        assert!((x - 0.3).abs() < 1e-7);
        assert!((y - 1.0).abs() < 1e-14);
    }

    #[test]
    fn scan_rejects_small_grids() {
        assert!(scan_theta(&Potential::PowPlus(8), 50, 1e-9).is_err());
    }

    #[test]
    fn quadratic_potential_is_flat_over_the_family() {
        let scan = scan_theta(&Potential::PowPlus(2), 1000, 1e-6).unwrap();
        let (lo, hi) = scan
            .samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(_, e)| {
                (lo.min(e), hi.max(e))
            });
        assert!(hi - lo < 1e-9);
    }
}
