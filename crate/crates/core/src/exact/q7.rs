//! Exact arithmetic in ℚ(√7).

use std::cmp::Ordering;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// `a + b·√7` with rational `a`, `b`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Q7 {
    pub a: BigRational,
    pub b: BigRational,
}

impl Q7 {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        Self { a, b }
    }

    pub fn rational(a: BigRational) -> Self {
        Self {
            a,
            b: BigRational::zero(),
        }
    }

    pub fn one() -> Self {
        Self::rational(BigRational::one())
    }

    /// Sign without forming √7: compare `a²` against `7b²` when the parts disagree.
    pub fn sign(&self) -> Ordering {
        let zero = BigRational::zero();
        let sa = self.a.cmp(&zero);
        let sb = self.b.cmp(&zero);
        match (sa, sb) {
            (Ordering::Equal, s) | (s, Ordering::Equal) => s,
            (x, y) if x == y => x,
            (sa, _) => {
                let a2 = &self.a * &self.a;
                let b2 = &self.b * &self.b * BigRational::from_integer(7.into());
                match a2.cmp(&b2) {
                    Ordering::Greater => sa,
                    Ordering::Less => sa.reverse(),
                    Ordering::Equal => Ordering::Equal,
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() == Ordering::Greater
    }

    pub fn pow(&self, mut k: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64().unwrap_or(f64::NAN) + self.b.to_f64().unwrap_or(f64::NAN) * 7f64.sqrt()
    }
}

impl Add for &Q7 {
    type Output = Q7;
    fn add(self, o: &Q7) -> Q7 {
        Q7::new(&self.a + &o.a, &self.b + &o.b)
    }
}

impl Sub for &Q7 {
    type Output = Q7;
    fn sub(self, o: &Q7) -> Q7 {
        Q7::new(&self.a - &o.a, &self.b - &o.b)
    }
}

impl Neg for &Q7 {
    type Output = Q7;
    fn neg(self) -> Q7 {
        Q7::new(-&self.a, -&self.b)
    }
}

impl Mul for &Q7 {
    type Output = Q7;
    fn mul(self, o: &Q7) -> Q7 {
        let seven = BigRational::from_integer(7.into());
        Q7::new(
            &self.a * &o.a + seven * &self.b * &o.b,
            &self.a * &o.b + &self.b * &o.a,
        )
    }
}
