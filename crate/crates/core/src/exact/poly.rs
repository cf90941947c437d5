//! Univariate polynomials and rational functions over ℚ.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type BigRat = BigRational;

pub fn rat(n: i64, d: i64) -> BigRat {
    BigRat::new(n.into(), d.into())
}

pub fn int(n: i64) -> BigRat {
    BigRat::from_integer(n.into())
}

/// Dense polynomial, lowest degree first, no trailing zero coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct RatPoly {
    coeffs: Vec<BigRat>,
}

impl RatPoly {
    pub fn new(mut coeffs: Vec<BigRat>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&x| int(x)).collect())
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    pub fn constant(c: BigRat) -> Self {
        Self::new(vec![c])
    }

    /// The variable `u`.
    pub fn x() -> Self {
        Self::from_ints(&[0, 1])
    }

    pub fn coeffs(&self) -> &[BigRat] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&BigRat> {
        self.coeffs.last()
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect())
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * int(i as i64))
                .collect(),
        )
    }

    pub fn monic(&self) -> Self {
        match self.lead() {
            Some(l) => self.scale(&l.recip()),
            None => Self::zero(),
        }
    }

    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        let dl = d.lead().ok_or(Error::ZeroDivisor)?.clone();
        let dd = d.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Ok((Self::zero(), self.clone()));
        }
        let mut q = vec![BigRat::zero(); r.len() - dd];
        for i in (0..q.len()).rev() {
            let c = &r[i + dd] / &dl;
            if !c.is_zero() {
                for (j, dj) in d.coeffs.iter().enumerate() {
                    r[i + j] -= &c * dj;
                }
            }
            q[i] = c;
        }
        r.truncate(dd);
        Ok((Self::new(q), Self::new(r)))
    }

    /// Monic greatest common divisor (zero only when both inputs are zero).
    pub fn gcd(a: &Self, b: &Self) -> Self {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let r = x.div_rem(&y).expect("nonzero divisor").1;
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    /// `p / gcd(p, p′)`, monic.
    pub fn square_free_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = Self::gcd(self, &self.derivative());
        self.div_rem(&g).expect("gcd is nonzero").0.monic()
    }

    pub fn eval(&self, x: &BigRat) -> BigRat {
        self.coeffs
            .iter()
            .rev()
            .fold(BigRat::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.coeffs
            .iter()
            .rev()
            .fold(0.0, |acc, c| acc * x + c.to_f64().unwrap_or(f64::NAN))
    }

    /// Positive rational multiple with coprime integer coefficients
    /// (sign of the polynomial preserved).
    pub fn primitive_integer(&self) -> Vec<BigInt> {
        let l = self
            .coeffs
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        let ints: Vec<BigInt> = self
            .coeffs
            .iter()
            .map(|c| (c * BigRat::from_integer(l.clone())).to_integer())
            .collect();
        super::sturm::make_primitive(ints)
    }

    pub fn from_integer_coeffs(c: &[BigInt]) -> Self {
        Self::new(c.iter().cloned().map(BigRat::from_integer).collect())
    }

    /// Coefficients as decimal strings `"p"` or `"p/q"`, lowest degree first.
    pub fn to_strings(&self) -> Vec<String> {
        self.coeffs.iter().map(|c| c.to_string()).collect()
    }
}

impl Serialize for RatPoly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for RatPoly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let c = v
            .iter()
            .map(|s| crate::potentials::parse_rational(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Self::new(c))
    }
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() {
                "-"
            } else if first {
                ""
            } else {
                "+"
            };
            let a = c.abs();
            let mag = if a.is_one() && i > 0 {
                String::new()
            } else {
                a.to_string()
            };
            let var = match i {
                0 => String::new(),
                1 => "u".into(),
                _ => format!("u^{i}"),
            };
            let sep = if !mag.is_empty() && !var.is_empty() {
                "*"
            } else {
                ""
            };
            if first {
                write!(f, "{sign}{mag}{sep}{var}")?;
            } else {
                write!(f, " {sign} {mag}{sep}{var}")?;
            }
            first = false;
        }
        Ok(())
    }
}

impl Add for &RatPoly {
    type Output = RatPoly;
    fn add(self, o: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = BigRat::zero();
        RatPoly::new(
            (0..n)
                .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
                .collect(),
        )
    }
}

impl Sub for &RatPoly {
    type Output = RatPoly;
    fn sub(self, o: &RatPoly) -> RatPoly {
        self + &(-o)
    }
}

impl Neg for &RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl Mul for &RatPoly {
    type Output = RatPoly;
    fn mul(self, o: &RatPoly) -> RatPoly {
        if self.is_zero() || o.is_zero() {
            return RatPoly::zero();
        }
        let mut out = vec![BigRat::zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        RatPoly::new(out)
    }
}

/// `num / den` with common factors removed and `den` monic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatFn {
    pub num: RatPoly,
    pub den: RatPoly,
}

impl RatFn {
    pub fn new(num: RatPoly, den: RatPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ZeroDivisor);
        }
        if num.is_zero() {
            return Ok(Self {
                num,
                den: RatPoly::one(),
            });
        }
        let g = RatPoly::gcd(&num, &den);
        let num = num.div_rem(&g)?.0;
        let den = den.div_rem(&g)?.0;
        Ok(Self::normalized(num, den))
    }

    /// `num / base^exp` for an irreducible `base`: cancels powers of `base`
    /// from `num` by trial division, which removes every common factor.
    pub fn over_irreducible_power(mut num: RatPoly, base: &RatPoly, mut exp: u32) -> Result<Self> {
        if base.degree().unwrap_or(0) == 0 {
            return Err(Error::InvalidArgument("base must be non-constant".into()));
        }
        if num.is_zero() {
            return Ok(Self {
                num,
                den: RatPoly::one(),
            });
        }
        while exp > 0 {
            let (q, r) = num.div_rem(base)?;
            if !r.is_zero() {
                break;
            }
            num = q;
            exp -= 1;
        }
        Ok(Self::normalized(num, base.pow(exp)))
    }

    fn normalized(num: RatPoly, den: RatPoly) -> Self {
        let l = den.lead().expect("nonzero denominator").recip();
        Self {
            num: num.scale(&l),
            den: den.scale(&l),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Exact equality as functions (cross-multiplication).
    pub fn equals(&self, other: &RatFn) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }

    pub fn eval(&self, x: &BigRat) -> Option<BigRat> {
        let d = self.den.eval(x);
        (!d.is_zero()).then(|| self.num.eval(x) / d)
    }

    pub fn eval_f64(&self, x: f64) -> f64 {
        self.num.eval_f64(x) / self.den.eval_f64(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn gcd_of_quadratics() {
        let a = RatPoly::from_ints(&[-1, 0, 1]);
        let b = RatPoly::from_ints(&[1, -2, 1]);
        assert_eq!(RatPoly::gcd(&a, &b), RatPoly::from_ints(&[-1, 1]));
    }

    #[test]
    fn square_free_removes_multiplicity() {
        let p = &RatPoly::from_ints(&[-2, 1]).pow(3) * &RatPoly::from_ints(&[1, 1]);
        let want = (&RatPoly::from_ints(&[-2, 1]) * &RatPoly::from_ints(&[1, 1])).monic();
        assert_eq!(p.square_free_part(), want);
    }

    #[test]
    fn sextic_derivative() {
        let p = RatPoly::from_ints(&[-2, 0, 3, -12, -6, 0, 1]);
        assert_eq!(p.derivative(), RatPoly::from_ints(&[0, 6, -36, -24, 0, 6]));
    }

    #[test]
    fn division_by_zero() {
        assert_eq!(
            RatPoly::x().div_rem(&RatPoly::zero()),
            Err(Error::ZeroDivisor)
        );
    }

    #[test]
    fn ratfn_reduces() {
        let num = &RatPoly::from_ints(&[1, 1]) * &RatPoly::from_ints(&[2, 0, 1]);
        let den = &RatPoly::from_ints(&[1, 1]) * &RatPoly::from_ints(&[0, 3]);
        let f = RatFn::new(num, den).unwrap();
        assert_eq!(f.den, RatPoly::x());
        assert_eq!(f.num, RatPoly::new(vec![rat(2, 3), int(0), rat(1, 3)]));
        let base = RatPoly::from_ints(&[1, 0, 1]);
        let g = RatFn::over_irreducible_power(&base * &RatPoly::x(), &base, 3).unwrap();
        assert_eq!(g.den, base.pow(2));
    }

    #[test]
    fn display() {
        assert_eq!(
            RatPoly::from_ints(&[-2, 0, 3, -12, -6, 0, 1]).to_string(),
            "u^6 - 6*u^4 - 12*u^3 + 3*u^2 - 2"
        );
    }

    fn small_poly() -> impl Strategy<Value = RatPoly> {
        prop::collection::vec(-9i64..=9, 0..6).prop_map(|c| RatPoly::from_ints(&c))
    }

    proptest! {
        #[test]
        fn division_identity(a in small_poly(), b in small_poly()) {
            prop_assume!(!b.is_zero());
            let (q, r) = a.div_rem(&b).unwrap();
            prop_assert_eq!(&(&q * &b) + &r, a);
            prop_assert!(r.degree().map_or(true, |d| d < b.degree().unwrap()) || b.degree() == Some(0) && r.is_zero());
        }

        #[test]
        fn eval_is_a_ring_map(a in small_poly(), b in small_poly(), x in -20i64..20) {
            let x = rat(x, 3);
            prop_assert_eq!((&a * &b).eval(&x), a.eval(&x) * b.eval(&x));
            prop_assert_eq!((&a + &b).eval(&x), a.eval(&x) + b.eval(&x));
        }
    }
}
