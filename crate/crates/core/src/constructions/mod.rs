//! Builders for the code families: the D4 root system, `C_θ`, the four
//! hexagons `H0..H3` and the rotating-hexagon designs `D(a0, a1, a2, a3)`.

mod symmetry;

pub use symmetry::{
    automorphisms, disjoint_hexagon_claim, eisenstein_partitions, enumerate_hexagons,
    is_regular_hexagon, Automorphism, DisjointPair, HexPartition, HexagonClaimReport,
};

use std::f64::consts::{FRAC_PI_3, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Code, UnitVec4, COLLISION_TOL};

/// `1/√3`, the modulus of the first coordinate of `H1..H3`.
pub const HEX_U: f64 = 0.577_350_269_189_625_8;
/// `√(2/3)`
pub const HEX_T: f64 = 0.816_496_580_927_726;

/// Multiplicities of the eleven inner products of `C_θ`, in the order used by
/// [`c_theta_inner_products`].
pub const C_THETA_MULTIPLICITIES: [usize; 11] = [18, 18, 36, 36, 36, 36, 72, 72, 72, 72, 84];

/// A mixing angle `θ` for which `C_θ` has 24 distinct points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThetaParam {
    theta: f64,
}

impl ThetaParam {
    pub fn new(theta: f64) -> Result<Self> {
        if !theta.is_finite() {
            return Err(Error::DegenerateTheta(theta));
        }
        let theta = theta.rem_euclid(2.0 * PI);
        let worst = c_theta_inner_products(theta)
            .iter()
            .map(|e| e.0)
            .fold(f64::NEG_INFINITY, f64::max);
        if worst > 1.0 - COLLISION_TOL {
            return Err(Error::DegenerateTheta(theta));
        }
        Ok(Self { theta })
    }

    /// The angle reduced into `[0, 2π)`.
    pub fn theta(&self) -> f64 {
        self.theta
    }
}

/// The eleven `(value, multiplicity)` pairs of ordered-pair inner products of `C_θ`.
pub fn c_theta_inner_products(theta: f64) -> [(f64, usize); 11] {
    let (s, c) = theta.sin_cos();
    let s2 = 2.0 * s * c;
    let vals = [
        0.0,
        s2,
        s,
        c,
        s * s - 0.5 * c * c,
        c * c - 0.5 * s * s,
        -s / 2.0,
        -c / 2.0,
        s2 / 4.0,
        -s2 / 2.0,
        -0.5,
    ];
    std::array::from_fn(|i| (vals[i], C_THETA_MULTIPLICITIES[i]))
}

/// θ-derivatives of the values returned by [`c_theta_inner_products`].
pub fn c_theta_inner_product_derivatives(theta: f64) -> [f64; 11] {
    let (s, c) = theta.sin_cos();
    let c2 = c * c - s * s;
    [
        0.0,
        2.0 * c2,
        c,
        -s,
        3.0 * s * c,
        -3.0 * s * c,
        -c / 2.0,
        s / 2.0,
        c2 / 2.0,
        -c2,
        0.0,
    ]
}

fn root_of_unity(n: u32, k: u32) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n as f64)
}

fn point(w1: Complex64, w2: Complex64) -> UnitVec4 {
    UnitVec4([w1.re, w1.im, w2.re, w2.im])
}

/// `C_θ = {(z,0), (0,w), (z sinθ, w cosθ), (z cosθ, w sinθ) : z³ = w³ = 1}`.
///
/// Point order: the three `(z,0)`, the three `(0,w)`, then the nine
/// `(z sinθ, w cosθ)` and the nine `(z cosθ, w sinθ)`, each block with `z`
/// as the outer index.
pub fn c_theta(p: ThetaParam) -> Code {
    let (s, c) = p.theta().sin_cos();
    let zero = Complex64::new(0.0, 0.0);
    let mut pts = Vec::with_capacity(24);
    for k in 0..3 {
        pts.push(point(root_of_unity(3, k), zero));
    }
    for k in 0..3 {
        pts.push(point(zero, root_of_unity(3, k)));
    }
    for (a, b) in [(s, c), (c, s)] {
        for i in 0..3 {
            for j in 0..3 {
                pts.push(point(root_of_unity(3, i) * a, root_of_unity(3, j) * b));
            }
        }
    }
    Code::new(format!("ctheta:{}", p.theta()), pts)
}

/// Validating wrapper around [`c_theta`].
pub fn c_theta_at(theta: f64) -> Result<Code> {
    Ok(c_theta(ThetaParam::new(theta)?))
}

/// Velocity field `d/dθ` of the points of [`c_theta`], in the same order.
pub fn c_theta_velocity(theta: f64) -> Vec<[f64; 4]> {
    let (s, c) = theta.sin_cos();
    let mut v = vec![[0.0; 4]; 6];
    for (a, b) in [(c, -s), (-s, c)] {
        for i in 0..3 {
            for j in 0..3 {
                v.push(point(root_of_unity(3, i) * a, root_of_unity(3, j) * b).0);
            }
        }
    }
    v
}

/// Angles `(θ, φ, ψ)` of the hexagon family with `a0 = 1` and
/// `a_m = i·e^{i·angle_m}`, stored modulo `π/3` in `[0, π/3)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HexFamilyAngles {
    pub theta: f64,
    pub phi: f64,
    pub psi: f64,
}

impl HexFamilyAngles {
    pub fn new(theta: f64, phi: f64, psi: f64) -> Self {
        let canon = |x: f64| {
            let r = x.rem_euclid(FRAC_PI_3);
            if r >= FRAC_PI_3 {
                0.0
            } else {
                r
            }
        };
        Self {
            theta: canon(theta),
            phi: canon(phi),
            psi: canon(psi),
        }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.theta, self.phi, self.psi]
    }

    /// The unit scalars `(a0, a1, a2, a3)`.
    pub fn units(&self) -> [Complex64; 4] {
        let i = Complex64::i();
        [
            Complex64::new(1.0, 0.0),
            i * Complex64::from_polar(1.0, self.theta),
            i * Complex64::from_polar(1.0, self.phi),
            i * Complex64::from_polar(1.0, self.psi),
        ]
    }
}

/// A μ6-orbit of six points in a complex line, stored in cyclic order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Hexagon {
    pub points: [UnitVec4; 6],
}

impl Hexagon {
    pub fn scaled(&self, a: Complex64) -> Result<Self> {
        let mut points = self.points;
        for p in points.iter_mut() {
            *p = p.scale_complex(a)?;
        }
        Ok(Self { points })
    }
}

/// The hexagons `H0 = {(w,0)}`, `H1 = {(u·i·w, t·i·w)}`, `H2 = {(u·i·w, r·t·i·w)}`,
/// `H3 = {(u·i·w, r̄·t·i·w)}` for `w ∈ μ6`, `r = e^{2πi/3}`.
pub fn hexagons() -> [Hexagon; 4] {
    let i = Complex64::i();
    let r = root_of_unity(3, 1);
    let second = [
        Complex64::new(0.0, 0.0),
        HEX_T * i,
        r * HEX_T * i,
        r.conj() * HEX_T * i,
    ];
    let first = [Complex64::new(1.0, 0.0), HEX_U * i, HEX_U * i, HEX_U * i];
    std::array::from_fn(|m| Hexagon {
        points: std::array::from_fn(|j| {
            let w = root_of_unity(6, j as u32);
            point(first[m] * w, second[m] * w)
        }),
    })
}

/// `D(a0, a1, a2, a3) = a0·H0 ∪ a1·H1 ∪ a2·H2 ∪ a3·H3`; each `a_m` must have modulus 1.
pub fn hex_design_units(a: [Complex64; 4]) -> Result<Code> {
    for am in &a {
        if (am.norm() - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnit(format!("{am}")));
        }
    }
    let mut pts = Vec::with_capacity(24);
    for (h, am) in hexagons().iter().zip(a) {
        pts.extend(h.scaled(am)?.points);
    }
    Ok(Code::new("hex-design", pts))
}

pub fn hex_design(a: HexFamilyAngles) -> Code {
    let mut code = hex_design_units(a.units()).expect("family scalars have unit modulus");
    code.label = format!("hex:{},{},{}", a.theta, a.phi, a.psi);
    code
}

/// The 24-cell as `D(1, 1, 1, 1)`; points 6m..6m+5 form hexagon `H_m`.
pub fn d4() -> Code {
    let one = Complex64::new(1.0, 0.0);
    let mut code = hex_design_units([one; 4]).expect("unit scalars");
    code.label = "d4".into();
    code
}

/// The conventional unit-quaternion 24-cell `{±e_i} ∪ {(±1,±1,±1,±1)/2}`.
pub fn standard_24_cell() -> Code {
    let mut rows = Vec::with_capacity(24);
    for i in 0..4 {
        for s in [1.0, -1.0] {
            let mut v = [0.0; 4];
            v[i] = s;
            rows.push(v);
        }
    }
    for mask in 0..16u32 {
        rows.push(std::array::from_fn(|k| {
            if mask >> k & 1 == 1 {
                -0.5
            } else {
                0.5
            }
        }));
    }
    Code::from_coords("24-cell", &rows).expect("nonzero rows")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{inner_product_multiset, spectrum_distance, t_max, CLUSTER_TOL};

    #[test]
    fn d4_spectrum() {
        let s = inner_product_multiset(&d4(), CLUSTER_TOL).unwrap();
        let want = [(-1.0, 24), (-0.5, 192), (0.0, 144), (0.5, 192)];
        assert_eq!(s.entries.len(), 4);
        for ((v, m), (wv, wm)) in s.entries.iter().zip(want) {
            assert!((v - wv).abs() < 1e-12);
            assert_eq!(*m, wm);
        }
        assert!((t_max(&d4()).unwrap() - 0.5).abs() < 1e-12);
        assert!(d4().max_norm_defect() < 1e-12);
    }

    #[test]
    fn d4_is_the_standard_24_cell() {
        assert!(spectrum_distance(&d4(), &standard_24_cell()).unwrap() < 1e-9);
    }

    #[test]
    fn c_theta_rejects_degenerate_angles() {
        for th in [PI / 4.0, 0.0, PI / 2.0, PI, 5.0 * PI / 4.0] {
            assert!(
                matches!(c_theta_at(th), Err(Error::DegenerateTheta(_))),
                "{th}"
            );
        }
    }

    #[test]
    fn c_theta_spectrum_matches_closed_form() {
        for th in [1.0, 2.3, 4.0, 5.9] {
            let code = c_theta_at(th).unwrap();
            assert!(code.max_norm_defect() < 1e-12);
            let s = inner_product_multiset(&code, CLUSTER_TOL).unwrap();
            assert_eq!(s.entries.len(), 11, "theta {th}");
            let mut want = c_theta_inner_products(th).to_vec();
            want.sort_by(|a, b| a.0.total_cmp(&b.0));
            for ((v, m), (wv, wm)) in s.entries.iter().zip(want) {
                assert!((v - wv).abs() < 1e-9);
                assert_eq!(*m, wm);
            }
            let mut mults = s.multiplicities();
            mults.sort();
            assert_eq!(mults, vec![18, 18, 36, 36, 36, 36, 72, 72, 72, 72, 84]);
        }
    }

    #[test]
    fn c_theta_velocity_matches_finite_difference() {
        let (th, h) = (1.3, 1e-6);
        let a = c_theta_at(th + h).unwrap();
        let b = c_theta_at(th - h).unwrap();
        for (k, v) in c_theta_velocity(th).iter().enumerate() {
            for d in 0..4 {
                let fd = (a.points[k].0[d] - b.points[k].0[d]) / (2.0 * h);
                assert!((fd - v[d]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn inner_product_derivatives() {
        let (th, h) = (0.7, 1e-6);
        let d = c_theta_inner_product_derivatives(th);
        let (p, m) = (
            c_theta_inner_products(th + h),
            c_theta_inner_products(th - h),
        );
        for i in 0..11 {
            assert!(((p[i].0 - m[i].0) / (2.0 * h) - d[i]).abs() < 1e-8);
        }
    }

    #[test]
    fn hexagons_cover_d4() {
        let hs = hexagons();
        let d = d4();
        for (m, h) in hs.iter().enumerate() {
            for (j, p) in h.points.iter().enumerate() {
                assert!(p
                    .coords()
                    .iter()
                    .zip(d.points[6 * m + j].coords())
                    .all(|(a, b)| (a - b).abs() < 1e-15));
                let ips: Vec<f64> = h.points.iter().map(|q| p.dot(q)).collect();
                let count = |v: f64| ips.iter().filter(|x| (**x - v).abs() < 1e-12).count();
                assert_eq!(
                    (count(0.5), count(-0.5), count(-1.0), count(1.0)),
                    (2, 2, 1, 1)
                );
            }
        }
        for p in &hs[0].points {
            for q in &hs[1].points {
                assert!(p.dot(q).abs() <= HEX_U + 1e-12);
            }
        }
    }

    #[test]
    fn hex_design_special_cases() {
        let one = Complex64::new(1.0, 0.0);
        assert_eq!(hex_design_units([one; 4]).unwrap().points, d4().points);
        let sixth = PI / 6.0;
        let h = hex_design(HexFamilyAngles::new(sixth, sixth, sixth));
        assert!(spectrum_distance(&h, &d4()).unwrap() < 1e-9);
        let bad = Complex64::new(1.1, 0.0);
        assert!(matches!(
            hex_design_units([one, bad, one, one]),
            Err(Error::NonUnit(_))
        ));
    }

    #[test]
    fn hex_angles_are_canonical() {
        let a = HexFamilyAngles::new(-0.1, 1.2, 7.0);
        for x in a.as_array() {
            assert!((0.0..FRAC_PI_3).contains(&x));
        }
        assert!((a.theta - (FRAC_PI_3 - 0.1)).abs() < 1e-15);
    }

    #[test]
    fn hex_designs_project_to_a_tetrahedron() {
        use crate::geometry::{hopf_image, hopf_project};
        let base = hopf_project(&d4());
        for (th, ph, ps) in [(0.0, 0.0, 0.0), (0.11, 0.57, 0.93), (1.3, 2.2, 0.4)] {
            let code = hex_design(HexFamilyAngles::new(th, ph, ps));
            let img = hopf_image(&code, 1e-9);
            assert!(img.is_regular_tetrahedron(1e-9), "{img:?}");
            assert!(img.points.iter().all(|(_, n)| *n == 6));
            for (p, q) in hopf_project(&code).iter().zip(&base) {
                assert!((0..3).all(|c| (p.0[c] - q.0[c]).abs() < 1e-12));
            }
        }
        assert!(!hopf_image(&c_theta_at(1.0).unwrap(), 1e-9).is_regular_tetrahedron(1e-9));
    }
}
