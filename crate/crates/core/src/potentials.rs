//! Potential functions `f: [-1, 1) → ℝ` with closed-form first and second derivatives.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Inner products may overshoot ±1 by rounding noise; this much is tolerated.
const RANGE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub enum Potential {
    /// `(1 + t)^k`
    PowPlus(u32),
    /// `(1 − t)^(−s)`, `s > 0`
    Riesz(f64),
    /// `e^(c·t)`
    Exp(f64),
    /// `Σ coeffs[j]·t^j` with exact rational coefficients.
    Poly(Vec<BigRational>),
}

/// `x^k` by repeated squaring.
pub(crate) fn ipow(mut x: f64, mut k: u32) -> f64 {
    let mut acc = 1.0;
    while k > 0 {
        if k & 1 == 1 {
            acc *= x;
        }
        x *= x;
        k >>= 1;
    }
    acc
}

impl Potential {
    pub fn poly_from_ints(coeffs: &[i64]) -> Self {
        Potential::Poly(
            coeffs
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect(),
        )
    }

    /// Degree if the potential is a polynomial (including `PowPlus`).
    pub fn polynomial_degree(&self) -> Option<usize> {
        match self {
            Potential::PowPlus(k) => Some(*k as usize),
            Potential::Poly(c) => Some(c.iter().rposition(|x| !x.is_zero()).unwrap_or(0)),
            _ => None,
        }
    }

    /// Members of the families that are absolutely monotonic on `[-1, 1)`.
    pub fn is_absolutely_monotonic(&self) -> bool {
        match self {
            Potential::PowPlus(_) => true,
            Potential::Riesz(s) => *s > 0.0,
            Potential::Exp(c) => *c >= 0.0,
            Potential::Poly(c) => c.iter().all(|x| *x >= BigRational::zero()),
        }
    }

    fn domain_error(&self, t: f64) -> Error {
        Error::Domain {
            potential: self.to_string(),
            t,
        }
    }

    /// `f(t)`, `f′(t)` or `f″(t)` for `order` 0, 1 or 2.
    pub fn eval(&self, t: f64, order: u8) -> Result<f64> {
        if order > 2 {
            return Err(Error::Order(order));
        }
        if !t.is_finite() || t < -1.0 - RANGE_SLACK || t > 1.0 + RANGE_SLACK {
            return Err(self.domain_error(t));
        }
        match self {
            Potential::PowPlus(k) => {
                let k = *k;
                let x = 1.0 + t;
                Ok(match order {
                    0 => ipow(x, k),
                    1 if k == 0 => 0.0,
                    1 => k as f64 * ipow(x, k - 1),
                    _ if k < 2 => 0.0,
                    _ => (k as f64) * ((k - 1) as f64) * ipow(x, k - 2),
                })
            }
            Potential::Riesz(s) => {
                if t >= 1.0 {
                    return Err(self.domain_error(t));
                }
                let x = 1.0 - t;
                Ok(match order {
                    0 => x.powf(-s),
                    1 => s * x.powf(-s - 1.0),
                    _ => s * (s + 1.0) * x.powf(-s - 2.0),
                })
            }
            Potential::Exp(c) => Ok(c.powi(order as i32) * (c * t).exp()),
            Potential::Poly(coeffs) => {
                let c: Vec<f64> = coeffs
                    .iter()
                    .map(|x| x.to_f64().unwrap_or(f64::NAN))
                    .collect();
                let mut acc = 0.0;
                for (j, cj) in c.iter().enumerate().rev() {
                    if j < order as usize {
                        break;
                    }
                    let falling: f64 = (0..order as usize).map(|m| (j - m) as f64).product();
                    acc = acc * t + cj * falling;
                }
                Ok(acc)
            }
        }
    }

    /// `f(t + dt) − f(t)` without the cancellation of subtracting two values.
    pub fn increment(&self, t: f64, dt: f64) -> Result<f64> {
        let u = t + dt;
        if !u.is_finite() || u < -1.0 - RANGE_SLACK || u > 1.0 + RANGE_SLACK {
            return Err(self.domain_error(u));
        }
        match self {
            Potential::PowPlus(k) => {
                let x = 1.0 + t;
                if x > 0.0 && dt.abs() < 0.5 * x {
                    Ok(ipow(x, *k) * (*k as f64 * (dt / x).ln_1p()).exp_m1())
                } else {
                    Ok(ipow(x + dt, *k) - ipow(x, *k))
                }
            }
            Potential::Riesz(s) => {
                let x = 1.0 - t;
                if u >= 1.0 || x <= 0.0 {
                    return Err(self.domain_error(u));
                }
                if dt.abs() < 0.5 * x {
                    Ok(x.powf(-s) * (-s * (-dt / x).ln_1p()).exp_m1())
                } else {
                    Ok((x - dt).powf(-s) - x.powf(-s))
                }
            }
            Potential::Exp(c) => Ok((c * t).exp() * (c * dt).exp_m1()),
            Potential::Poly(coeffs) => {
                // ((t+dt)^j − t^j)/dt = Σ_{m<j} (t+dt)^m t^(j−1−m), accumulated by Horner
                let mut q = 0.0;
                let mut acc_p = 0.0;
                for cj in coeffs.iter().rev() {
                    q = q * u + acc_p;
                    acc_p = acc_p * t + cj.to_f64().unwrap_or(f64::NAN);
                }
                Ok(q * dt)
            }
        }
    }

    pub fn f(&self, t: f64) -> Result<f64> {
        self.eval(t, 0)
    }

    pub fn d1(&self, t: f64) -> Result<f64> {
        self.eval(t, 1)
    }

    pub fn d2(&self, t: f64) -> Result<f64> {
        self.eval(t, 2)
    }
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Potential::PowPlus(k) => write!(f, "pow1:{k}"),
            Potential::Riesz(s) => write!(f, "riesz:{s}"),
            Potential::Exp(c) => write!(f, "exp:{c}"),
            Potential::Poly(c) => {
                let parts: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                write!(f, "poly:{}", parts.join(","))
            }
        }
    }
}

/// Parses `"3"`, `"-1/2"` or `"0.125"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational number: {s:?}"));
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| bad())?;
        let d: BigInt = d.trim().parse().map_err(|_| bad())?;
        if d.is_zero() {
            return Err(bad());
        }
        return Ok(BigRational::new(n, d));
    }
    if let Some((int, frac)) = s.split_once('.') {
        let neg = int.starts_with('-');
        let digits = format!("{}{}", int.trim_start_matches(['-', '+']), frac);
        let n: BigInt = digits.parse().map_err(|_| bad())?;
        let d = num_traits::pow(BigInt::from(10), frac.len());
        let r = BigRational::new(n, d);
        return Ok(if neg { -r } else { r });
    }
    Ok(BigRational::from_integer(s.parse().map_err(|_| bad())?))
}

impl FromStr for Potential {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("potential {s:?} lacks ':'")))?;
        let num = |a: &str| -> Result<f64> {
            a.trim()
                .parse::<f64>()
                .map_err(|_| Error::Parse(format!("bad number {a:?}")))
        };
        match kind {
            "pow1" => arg
                .trim()
                .parse::<u32>()
                .map(Potential::PowPlus)
                .map_err(|_| Error::Parse(format!("bad exponent {arg:?}"))),
            "riesz" => {
                let s = num(arg)?;
                if s > 0.0 {
                    Ok(Potential::Riesz(s))
                } else {
                    Err(Error::Parse("riesz exponent must be positive".into()))
                }
            }
            "exp" => Ok(Potential::Exp(num(arg)?)),
            "poly" => {
                let coeffs = arg
                    .split(',')
                    .map(parse_rational)
                    .collect::<Result<Vec<_>>>()?;
                Ok(Potential::Poly(coeffs))
            }
            _ => Err(Error::Parse(format!("unknown potential family {kind:?}"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn families() -> Vec<Potential> {
        vec![
            Potential::PowPlus(0),
            Potential::PowPlus(1),
            Potential::PowPlus(8),
            Potential::PowPlus(13),
            Potential::Riesz(1.0),
            Potential::Riesz(2.5),
            Potential::Exp(6.0),
            Potential::Exp(-1.5),
            "poly:1,-2,1/2,3,0,1/7".parse().unwrap(),
        ]
    }

    #[test]
    fn spot_values() {
        assert_eq!(Potential::Riesz(1.0).f(-1.0).unwrap(), 0.5);
        assert_eq!(Potential::PowPlus(8).f(0.5).unwrap(), 25.62890625);
        assert_eq!(Potential::Exp(6.0).d1(0.0).unwrap(), 6.0);
        assert_eq!(Potential::PowPlus(0).f(-1.0).unwrap(), 1.0);
        assert_eq!(Potential::poly_from_ints(&[1]).f(0.3).unwrap(), 1.0);
    }

    #[test]
    fn errors() {
        assert!(matches!(
            Potential::Riesz(1.0).f(1.0),
            Err(Error::Domain { .. })
        ));
        assert!(matches!(
            Potential::PowPlus(2).eval(0.0, 3),
            Err(Error::Order(3))
        ));
        assert!(matches!(
            Potential::Exp(1.0).f(1.5),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn finite_differences() {
        let h = 1e-5;
        let mut state = 12345u64;
        for f in families() {
            for _ in 0..20 {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let t = -0.9 + 1.8 * ((state >> 11) as f64 / (1u64 << 53) as f64);
                for order in 0..2u8 {
                    let fd =
                        (f.eval(t + h, order).unwrap() - f.eval(t - h, order).unwrap()) / (2.0 * h);
                    let exact = f.eval(t, order + 1).unwrap();
                    // 1e-6 absolute, scaled for the steeper families
                    let scale = 1.0 + exact.abs();
                    assert!(
                        (fd - exact).abs() <= 1e-6 * scale,
                        "{f} order {order} at {t}: {fd} vs {exact}"
                    );
                }
            }
        }
    }

    #[test]
    fn absolute_monotonicity_grid() {
        for f in [
            Potential::PowPlus(5),
            Potential::Riesz(1.0),
            Potential::Exp(6.0),
        ] {
            for i in 0..100 {
                let t = -1.0 + 1.99 * i as f64 / 99.0;
                for order in 0..=2 {
                    assert!(f.eval(t, order).unwrap() >= 0.0);
                }
            }
        }
    }

    #[test]
    fn parse_roundtrip() {
        for s in ["pow1:8", "riesz:1", "exp:6", "poly:1,-1/2,3"] {
            let p: Potential = s.parse().unwrap();
            assert_eq!(p.to_string(), s);
        }
        let p: Potential = "poly:0.125".parse().unwrap();
        assert_eq!(
            p,
            Potential::Poly(vec![BigRational::new(1.into(), 8.into())])
        );
        assert!("riesz:-1".parse::<Potential>().is_err());
        assert!("cosh:1".parse::<Potential>().is_err());
    }

    #[test]
    fn increments_match_differences() {
        let fs = [
            Potential::PowPlus(7),
            Potential::PowPlus(0),
            Potential::Riesz(1.5),
            Potential::Exp(-2.0),
            Potential::poly_from_ints(&[3, -1, 0, 2, 5]),
        ];
        for f in &fs {
            for &(t, dt) in &[
                (0.3, 0.2),
                (-0.9, 1e-3),
                (0.1, -0.6),
                (-1.0, 0.5),
                (0.5, 1e-9),
            ] {
                let want = f.f(t + dt).unwrap() - f.f(t).unwrap();
                let got = f.increment(t, dt).unwrap();
                assert!(
                    (got - want).abs() < 1e-12 * (1.0 + want.abs() + f.f(t).unwrap().abs()),
                    "{f} {t} {dt}"
                );
            }
            // tiny steps keep full relative accuracy
            let (t, dt) = (0.2, 1e-13);
            let got = f.increment(t, dt).unwrap();
            let want = f.d1(t).unwrap() * dt;
            assert!((got - want).abs() < 1e-6 * want.abs().max(1e-30), "{f}");
        }
        assert!(Potential::Riesz(1.0).increment(0.5, 0.5).is_err());
    }
}
