//! Exact comparison of the 24-cell against the `C_θ` family for the
//! potentials `(1+t)^k`.
//!
//! Under `sin θ = 2u/(1+u²)`, `cos θ = (1−u²)/(1+u²)` every inner product
//! `a` of `C_θ` satisfies `1 + a = N(u) / (1+u²)^d` with `d ≤ 2`, so the
//! energy difference is a polynomial over `(1+u²)^{2k}`. The substitution
//! misses only `θ = π`, where `sin 2θ = 0` and the code degenerates anyway.

use std::time::Instant;

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{int, rat, RatFn, RatPoly};
use super::q7::Q7;
use super::sturm::{attains_positive, refine_root, sturm_real_roots};
use crate::constructions::C_THETA_MULTIPLICITIES;
use crate::error::{Error, Result};
use crate::par;

/// `u⁶ − 6u⁴ − 12u³ + 3u² − 2`.
pub fn three_design_sextic() -> RatPoly {
    RatPoly::from_ints(&[-2, 0, 3, -12, -6, 0, 1])
}

fn one_plus_u2() -> RatPoly {
    RatPoly::from_ints(&[1, 0, 1])
}

/// `(N, d)` with `1 + a = N / (1+u²)^d` for each inner product `a`, in the
/// order of [`C_THETA_MULTIPLICITIES`].
fn shifted_inner_products() -> [(RatPoly, u32); 11] {
    let d = one_plus_u2();
    let d2 = d.pow(2);
    let s = RatPoly::from_ints(&[0, 2]);
    let c = RatPoly::from_ints(&[1, 0, -1]);
    let sc = &s * &c;
    let half = rat(1, 2);
    let deg2 = |p: RatPoly| (&d2 + &p, 2);
    let deg1 = |p: RatPoly| (&d + &p, 1);
    [
        (RatPoly::one(), 0),
        deg2(sc.scale(&int(2))),
        deg1(s.clone()),
        deg1(c.clone()),
        deg2(&(&s * &s) - &(&c * &c).scale(&half)),
        deg2(&(&c * &c) - &(&s * &s).scale(&half)),
        deg1(s.scale(&-&half)),
        deg1(c.scale(&-&half)),
        deg2(sc.scale(&half)),
        deg2(-&sc),
        (RatPoly::constant(half), 0),
    ]
}

/// `E_f(24-cell)` for `f(t) = (1+t)^k`, as an exact rational.
pub fn d4_energy_rational(k: u32) -> BigRational {
    let p = |x: BigRational| num_traits::pow(x, k as usize);
    int(24) * p(int(0)) + int(192) * (p(rat(3, 2)) + p(rat(1, 2))) + int(144)
}

/// Numerator of `E(24-cell) − E(C_θ)` over `(1+u²)^{2k}`, before cancellation.
fn raw_numerator(k: u32) -> RatPoly {
    let d = one_plus_u2();
    let mut acc = d.pow(2 * k).scale(&d4_energy_rational(k));
    for ((n, deg), m) in shifted_inner_products()
        .into_iter()
        .zip(C_THETA_MULTIPLICITIES)
    {
        let term = &n.pow(k) * &d.pow((2 - deg) * k);
        acc = &acc - &term.scale(&int(m as i64));
    }
    acc
}

/// `E_f(24-cell) − E_f(C_θ)` for `f(t) = (1+t)^k` as a rational function of `u = tan(θ/2)`.
pub fn energy_diff_rational(k: u32) -> RatFn {
    RatFn::over_irreducible_power(raw_numerator(k), &one_plus_u2(), 2 * k)
        .expect("1+u² is a non-constant divisor")
}

/// True iff some `θ` gives `E(C_θ) < E(24-cell)` for `(1+t)^k`.
///
/// The denominator is a positive power of `1+u²`, so only the numerator's
/// sign matters. Excluded parameters form a finite set and positivity is an
/// open condition, so they need no special treatment.
pub fn proposition_check(k: u32) -> bool {
    attains_positive(&energy_diff_rational(k).num)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PropositionRow {
    pub k: u32,
    pub attains_positive: bool,
    pub wall_time_ms: f64,
    pub numerator_degree: Option<usize>,
}

pub fn proposition_row(k: u32) -> PropositionRow {
    let start = Instant::now();
    let diff = energy_diff_rational(k);
    let positive = attains_positive(&diff.num);
    PropositionRow {
        k,
        attains_positive: positive,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
        numerator_degree: diff.num.degree(),
    }
}

/// Rows for `k_min..=k_max`, computed in parallel and returned in order of `k`.
pub fn proposition_table(k_min: u32, k_max: u32) -> Result<Vec<PropositionRow>> {
    if k_min > k_max {
        return Err(Error::InvalidArgument(format!(
            "k_min {k_min} exceeds k_max {k_max}"
        )));
    }
    // largest k first keeps the slowest cases from starting last
    let mut rows = par::map_range(0..(k_max - k_min + 1) as usize, |i| {
        proposition_row(k_max - i as u32)
    });
    rows.reverse();
    Ok(rows)
}

/// `(2+√7)/3 = 1 + (√7−1)/3`, the shifted minimal-distance inner product.
fn tail_ratio() -> Q7 {
    Q7::new(rat(2, 3), rat(1, 3))
}

/// Whether `18·((2+√7)/3)^k > 192·((3/2)^k + (1/2)^k) + 144`, decided exactly.
///
/// The left side bounds `E(C_θ)` from below at the `θ` minimizing the
/// largest inner product, and the right side is `E(24-cell)` for `k ≥ 1`.
pub fn tail_criterion(k: u32) -> Result<bool> {
    if k == 0 {
        return Err(Error::InvalidArgument("tail criterion needs k >= 1".into()));
    }
    let lhs = tail_ratio().pow(k).scale(&int(18));
    Ok((&lhs - &Q7::rational(d4_energy_rational(k))).is_positive())
}

/// Smallest `k ≥ 1` at which [`tail_criterion`] holds, searching up to `k_max`.
pub fn tail_first_k(k_max: u32) -> Option<u32> {
    (1..=k_max).find(|&k| tail_criterion(k).unwrap_or(false))
}

/// The exact inequality behind the induction from `k` to `k+1`:
/// `(2+√7)/3 > 3/2`, while each term on the right grows by at most `3/2`.
pub fn tail_induction_step_holds() -> bool {
    (&tail_ratio() - &Q7::rational(rat(3, 2))).is_positive()
}

pub const TAIL_INDUCTION_NOTE: &str = "if the criterion holds at k it holds at k+1: the left side is multiplied by \
(2+sqrt7)/3 > 3/2, and the right-side terms 192*(3/2)^k, 192*(1/2)^k and 144 each grow by a factor of at most 3/2";

impl Q7 {
    fn scale(&self, c: &BigRational) -> Q7 {
        Q7::new(&self.a * c, &self.b * c)
    }
}

/// `−18·s(u)² / (1+u²)⁶` for a sextic `s`.
pub fn k3_closed_form(sextic: &RatPoly) -> RatFn {
    RatFn::over_irreducible_power((sextic * sextic).scale(&int(-18)), &one_plus_u2(), 6)
        .expect("1+u² is a non-constant divisor")
}

/// Exact check of `E(24-cell) − E(C_θ) = −18·s(u)²/(1+u²)⁶` for `(1+t)³`.
pub fn verify_k3_identity_with(sextic: &RatPoly) -> bool {
    energy_diff_rational(3).equals(&k3_closed_form(sextic))
}

pub fn verify_k3_identity() -> bool {
    verify_k3_identity_with(&three_design_sextic())
}

/// The parameter values where `C_θ` is a spherical 3-design.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ThreeDesignData {
    /// Real roots of the sextic, increasing.
    pub roots: Vec<f64>,
    /// `(sin θ, cos θ)` at each root.
    pub sin_cos: Vec<(f64, f64)>,
    pub thetas: Vec<f64>,
    /// `sin³θ + cos³θ` at each root.
    pub cube_sums: Vec<f64>,
    /// Whether all roots induce the same unordered pair `{sin θ, cos θ}`.
    pub same_code: bool,
    /// Root of `3y³ − 9y − 2` in `[−1, 0]`, which equals `sin θ + cos θ`.
    pub cubic_root: f64,
}

pub const ROOT_TOL: f64 = 1e-13;

pub fn three_design_roots() -> Result<ThreeDesignData> {
    let sextic = three_design_sextic();
    let iso = sturm_real_roots(&sextic)?;
    let roots = iso
        .intervals
        .iter()
        .map(|iv| refine_root(&sextic, &iv.lo, &iv.hi, ROOT_TOL))
        .collect::<Result<Vec<_>>>()?;
    let sin_cos: Vec<(f64, f64)> = roots
        .iter()
        .map(|&u| {
            let d = 1.0 + u * u;
            (2.0 * u / d, (1.0 - u * u) / d)
        })
        .collect();
    let thetas = sin_cos
        .iter()
        .map(|&(s, c)| s.atan2(c).rem_euclid(std::f64::consts::TAU))
        .collect();
    let cube_sums = sin_cos
        .iter()
        .map(|&(s, c)| s.powi(3) + c.powi(3))
        .collect();
    let sorted = |&(s, c): &(f64, f64)| if s <= c { (s, c) } else { (c, s) };
    let same_code = sin_cos.windows(2).all(|w| {
        let (a, b) = (sorted(&w[0]), sorted(&w[1]));
        (a.0 - b.0).abs() < 1e-9 && (a.1 - b.1).abs() < 1e-9
    });
    let cubic = RatPoly::from_ints(&[-2, -9, 0, 3]);
    let cubic_root = refine_root(&cubic, &int(-1), &BigRational::zero(), ROOT_TOL)?;
    Ok(ThreeDesignData {
        roots,
        sin_cos,
        thetas,
        cube_sums,
        same_code,
        cubic_root,
    })
}

/// `E(24-cell) − E(C_θ)` evaluated at `u = tan(θ/2)` in floating point.
pub fn energy_diff_at_theta(diff: &RatFn, theta: f64) -> f64 {
    diff.eval_f64((theta / 2.0).tan())
}

/// Exact value at a rational `u` of the two closed forms composed with the
/// parametrization, computed without polynomial arithmetic.
pub fn energy_diff_direct(k: u32, u: &BigRational) -> BigRational {
    let d = BigRational::one() + u * u;
    let s = int(2) * u / &d;
    let c = (BigRational::one() - u * u) / &d;
    let sc = &s * &c;
    let h = rat(1, 2);
    let vals = [
        BigRational::zero(),
        int(2) * &sc,
        s.clone(),
        c.clone(),
        &s * &s - &h * &c * &c,
        &c * &c - &h * &s * &s,
        -&h * &s,
        -&h * &c,
        &h * &sc,
        -&sc,
        -h.clone(),
    ];
    let e_theta = vals
        .iter()
        .zip(C_THETA_MULTIPLICITIES)
        .fold(BigRational::zero(), |acc, (a, m)| {
            acc + int(m as i64) * num_traits::pow(BigRational::one() + a, k as usize)
        });
    d4_energy_rational(k) - e_theta
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::energy::{energy_d4_closed, energy_theta_closed};
    use crate::Potential;
    use rand::{Rng, SeedableRng};

    #[test]
    fn low_orders_vanish() {
        for k in 0..=2 {
            assert!(energy_diff_rational(k).is_zero(), "k={k}");
        }
    }

    #[test]
    fn k3_identity() {
        assert!(verify_k3_identity());
        let mut c = three_design_sextic().coeffs().to_vec();
        c[2] += int(1);
        assert!(!verify_k3_identity_with(&RatPoly::new(c)));
    }

    #[test]
    fn k3_sides_agree_at_two() {
        let u = int(2);
        let lhs = energy_diff_direct(3, &u);
        let s = three_design_sextic().eval(&u);
        let rhs = int(-18) * &s * &s / num_traits::pow(int(5), 6);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn rational_function_matches_direct_evaluation() {
        for k in [3, 4, 7, 9] {
            let diff = energy_diff_rational(k);
            for u in [int(0), rat(1, 3), int(-2)] {
                assert_eq!(diff.eval(&u).unwrap(), energy_diff_direct(k, &u), "k={k}");
            }
        }
    }

    #[test]
    fn rational_function_matches_floating_closed_forms() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for k in [4u32, 8, 13] {
            let diff = energy_diff_rational(k);
            let f = Potential::PowPlus(k);
            for _ in 0..10 {
                let theta: f64 = rng.gen_range(0.1..3.0);
                let want = energy_d4_closed(&f).unwrap() - energy_theta_closed(theta, &f).unwrap();
                let got = energy_diff_at_theta(&diff, theta);
                assert!(
                    (got - want).abs() < 1e-6 * (1.0 + want.abs()),
                    "k={k} θ={theta}: {got} vs {want}"
                );
            }
        }
    }

    #[test]
    fn small_k_decisions() {
        for k in 0..=13 {
            assert_eq!(proposition_check(k), (8..=13).contains(&k), "k={k}");
        }
    }

    #[test]
    fn denominators_are_powers_of_one_plus_u2() {
        let d = energy_diff_rational(5).den;
        let mut p = d.clone();
        while p.degree().unwrap() > 0 {
            let (q, r) = p.div_rem(&one_plus_u2()).unwrap();
            assert!(r.is_zero());
            p = q;
        }
    }

    #[test]
    fn tail() {
        assert!(tail_criterion(75).unwrap());
        assert!(!tail_criterion(10).unwrap());
        assert!(!tail_criterion(74).unwrap());
        assert_eq!(tail_first_k(200), Some(75));
        assert!(tail_induction_step_holds());
        assert!(tail_criterion(0).is_err());
    }

    #[test]
    fn tail_matches_float_away_from_threshold() {
        for k in [1u32, 5, 20, 60, 90, 150] {
            let lhs = 18.0 * ((2.0 + 7f64.sqrt()) / 3.0).powi(k as i32);
            let rhs = 192.0 * (1.5f64.powi(k as i32) + 0.5f64.powi(k as i32)) + 144.0;
            assert_eq!(tail_criterion(k).unwrap(), lhs > rhs, "k={k}");
        }
    }

    #[test]
    fn three_design_data() {
        let d = three_design_roots().unwrap();
        assert_eq!(d.roots.len(), 2);
        assert!((d.roots[0] + 0.51171).abs() < 1e-4);
        assert!((d.roots[1] - 3.09594).abs() < 1e-4);
        assert!(d.same_code);
        for &(s, c) in &d.sin_cos {
            let (lo, hi) = if s < c { (s, c) } else { (c, s) };
            assert!((lo + 0.81105).abs() < 1e-4 && (hi - 0.58498).abs() < 1e-4);
        }
        for x in &d.cube_sums {
            assert!((x + 1.0 / 3.0).abs() < 1e-8);
        }
        let y = d.cubic_root;
        assert!(((3.0 * y - y.powi(3)) / 2.0 + 1.0 / 3.0).abs() < 1e-8);
        let (s, c) = d.sin_cos[0];
        assert!((s + c - y).abs() < 1e-9);
    }
}
