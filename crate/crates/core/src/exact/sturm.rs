//! Sturm sequences over ℤ with exact real-root counting, isolation and sign
//! decisions.
//!
//! Chains are built from the primitive integer form of the square-free part;
//! each pseudo-remainder is negated (with the sign of the pseudo-division
//! multiplier corrected) and divided by its positive content.

use std::cmp::Ordering;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::poly::RatPoly;
use crate::error::{Error, Result};

fn trim(mut v: Vec<BigInt>) -> Vec<BigInt> {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn content(v: &[BigInt]) -> BigInt {
    let mut g = BigInt::zero();
    for c in v {
        if c.is_zero() {
            continue;
        }
        if g.is_zero() {
            g = c.abs();
        } else {
            // reduce the large coefficient modulo the running gcd first
            let r = c.mod_floor(&g);
            g = g.gcd(&r);
        }
        if g.is_one() {
            break;
        }
    }
    g
}

/// Divides by the positive content.
pub(crate) fn make_primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let v = trim(v);
    let g = content(&v);
    if g.is_zero() || g.is_one() {
        return v;
    }
    v.into_iter().map(|c| c / &g).collect()
}

fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * BigInt::from(i))
            .collect(),
    )
}

#[cfg(test)]
/// Next Sturm element `−rem(a, b)` up to a positive factor.
fn sturm_next(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let lc = b.last().expect("nonzero divisor").clone();
    let mut r = a.to_vec();
    let mut steps = 0u32;
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let lr = r.last().expect("nonempty").clone();
        for c in r.iter_mut() {
            *c *= &lc;
        }
        for (i, bi) in b.iter().enumerate() {
            r[i + shift] -= &lr * bi;
        }
        steps += 1;
        r = trim(r);
    }
    // r = lc^steps · rem(a, b)
    let flip = lc.is_negative() && steps % 2 == 1;
    let r = if flip {
        r
    } else {
        r.into_iter().map(|c| -c).collect()
    };
    make_primitive(r)
}

fn prem(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let lc = b.last().expect("nonzero divisor");
    let delta = a.len() - b.len();
    let mut r = a.to_vec();
    let mut steps = 0;
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let lr = r.pop().expect("nonempty");
        for c in r.iter_mut() {
            *c *= lc;
        }
        for (i, bi) in b[..b.len() - 1].iter().enumerate() {
            r[i + shift] -= &lr * bi;
        }
        steps += 1;
        r = trim(r);
    }
    // bring the multiplier up to lc^(delta+1) so the subresultant divisions stay exact
    if steps < delta + 1 {
        let f = num_traits::pow(lc.clone(), delta + 1 - steps);
        for c in r.iter_mut() {
            *c *= &f;
        }
    }
    r
}

/// Inverse of an odd `d` modulo `2^bits`, by Newton iteration.
fn inverse_mod_pow2(d: &BigUint, bits: u64) -> BigUint {
    let mut x = BigUint::one();
    let mut prec = 1u64;
    while prec < bits {
        prec = (2 * prec).min(bits);
        let mask = (BigUint::one() << prec) - 1u32;
        let dx = ((d & &mask) * &x) & &mask;
        // x ← x·(2 − d·x) mod 2^prec
        let two_minus = ((BigUint::one() << prec) + 2u32 - dx) & &mask;
        x = (x * two_minus) & &mask;
    }
    x
}

/// Divides every coefficient by `d`, which must divide each one exactly.
/// Uses the 2-adic inverse of `d`, which costs one truncated product per
/// coefficient instead of a long division.
fn exact_div_all(v: Vec<BigInt>, d: &BigInt) -> Vec<BigInt> {
    let tz = d.trailing_zeros().expect("nonzero divisor");
    let d_odd = d.magnitude() >> tz;
    if d_odd.is_one() {
        return v.into_iter().map(|c| c / d).collect();
    }
    let d_bits = d.bits();
    let q_bits = v
        .iter()
        .map(|c| c.bits().saturating_sub(d_bits) + 1)
        .max()
        .unwrap_or(0);
    if q_bits == 0 {
        return v;
    }
    let inv = inverse_mod_pow2(&d_odd, q_bits);
    let mask = (BigUint::one() << q_bits) - 1u32;
    v.into_iter()
        .map(|c| {
            if c.is_zero() {
                return c;
            }
            let a = (c.magnitude() >> tz) & &mask;
            let q = (a * &inv) & &mask;
            let sign = if c.sign() == d.sign() {
                Sign::Plus
            } else {
                Sign::Minus
            };
            BigInt::from_biguint(sign, q)
        })
        .collect()
}

fn sign_of(s: Sign) -> i8 {
    match s {
        Sign::Minus => -1,
        Sign::NoSign => 0,
        Sign::Plus => 1,
    }
}

/// Sturm chain via the subresultant PRS. Each subresultant `r_i` equals a
/// nonzero multiple of the Sturm element; the sign of that multiple is
/// tracked and folded in so every stored element is a positive multiple.
fn chain_of(p: Vec<BigInt>) -> Vec<Vec<BigInt>> {
    let d = derivative(&p);
    if d.is_empty() {
        return vec![p];
    }
    let mut r: Vec<Vec<BigInt>> = vec![p, d];
    // eps[i]: sign with eps[i]·r[i] a positive multiple of the i-th Sturm element
    let mut eps: Vec<i8> = vec![1, 1];
    let mut psi = BigInt::from(-1);
    let mut i = 1;
    loop {
        let delta = r[i - 1].len() - r[i].len();
        let beta = if i == 1 {
            if delta % 2 == 0 {
                BigInt::from(-1)
            } else {
                BigInt::one()
            }
        } else {
            let lc_prev = r[i - 1].last().expect("nonzero").clone();
            let prev_delta = r[i - 2].len() - r[i - 1].len();
            let num = num_traits::pow(-lc_prev.clone(), prev_delta);
            psi = if prev_delta == 0 {
                num * &psi
            } else {
                num / num_traits::pow(psi.clone(), prev_delta - 1)
            };
            -lc_prev * num_traits::pow(psi.clone(), delta)
        };
        let pr = prem(&r[i - 1], &r[i]);
        if pr.is_empty() {
            break;
        }
        let next = exact_div_all(pr, &beta);
        // rem(r[i-1], r[i]) = next·beta / lc(r[i])^(delta+1)
        let lc_sign = sign_of(r[i].last().expect("nonzero").sign());
        let lc_pow = if (delta + 1) % 2 == 0 { 1 } else { lc_sign };
        let e = -eps[i - 1] * sign_of(beta.sign()) * lc_pow;
        eps.push(e);
        r.push(next);
        i += 1;
    }
    r.into_iter()
        .zip(eps)
        .map(|(p, e)| {
            if e < 0 {
                p.into_iter().map(|c| -c).collect()
            } else {
                p
            }
        })
        .collect()
}

/// Sturm chain by primitive pseudo-remainders; kept as a cross-check.
#[cfg(test)]
fn primitive_chain_of(p: Vec<BigInt>) -> Vec<Vec<BigInt>> {
    let mut seq = vec![p.clone()];
    let d = make_primitive(derivative(&p));
    if d.is_empty() {
        return seq;
    }
    seq.push(d);
    loop {
        let n = seq.len();
        let next = sturm_next(&seq[n - 2], &seq[n - 1]);
        if next.is_empty() {
            break;
        }
        seq.push(next);
    }
    seq
}

/// Sign of `p(num/den)` for `den > 0`, by homogeneous Horner evaluation.
fn sign_at(p: &[BigInt], num: &BigInt, den_pows: &[BigInt]) -> Sign {
    let n = p.len() - 1;
    let mut acc = p[n].clone();
    for i in (0..n).rev() {
        acc = acc * num + &p[i] * &den_pows[n - i];
    }
    acc.sign()
}

/// Sturm chain of the square-free part of a nonzero polynomial.
#[derive(Debug, Clone)]
pub struct SturmChain {
    seq: Vec<Vec<BigInt>>,
}

impl SturmChain {
    pub fn new(p: &RatPoly) -> Result<Self> {
        if p.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let ints = p.primitive_integer();
        let mut seq = chain_of(ints.clone());
        let g = seq.last().expect("nonempty");
        if g.len() > 1 {
            // repeated roots: restart on p / gcd(p, p′)
            let sf = RatPoly::from_integer_coeffs(&ints)
                .div_rem(&RatPoly::from_integer_coeffs(g))
                .expect("gcd is nonzero")
                .0;
            seq = chain_of(sf.primitive_integer());
        }
        Ok(Self { seq })
    }

    /// The square-free polynomial the chain starts from (primitive, integer).
    pub fn base(&self) -> &[BigInt] {
        &self.seq[0]
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    fn max_degree(&self) -> usize {
        self.seq.iter().map(|p| p.len() - 1).max().unwrap_or(0)
    }

    fn count_variations(signs: impl Iterator<Item = Sign>) -> usize {
        let mut last = Sign::NoSign;
        let mut v = 0;
        for s in signs {
            if s == Sign::NoSign {
                continue;
            }
            if last != Sign::NoSign && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, x: &BigRational) -> usize {
        let (num, den) = (x.numer(), x.denom());
        let mut pows = Vec::with_capacity(self.max_degree() + 1);
        pows.push(BigInt::one());
        for i in 1..=self.max_degree() {
            let next = &pows[i - 1] * den;
            pows.push(next);
        }
        Self::count_variations(self.seq.iter().map(|p| sign_at(p, num, &pows)))
    }

    /// Variations at `+∞` (`positive`) or `−∞`.
    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        Self::count_variations(self.seq.iter().map(|p| {
            let s = p.last().expect("nonzero").sign();
            if !positive && (p.len() - 1) % 2 == 1 {
                -s
            } else {
                s
            }
        }))
    }

    /// Number of distinct real roots.
    pub fn real_root_count(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }

    /// Number of distinct roots in the open interval `(a, b)` when neither end is a root.
    pub fn count_between(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a).saturating_sub(self.variations_at(b))
    }

    pub fn base_sign_at(&self, x: &BigRational) -> Sign {
        let p = self.base();
        let mut pows = Vec::with_capacity(p.len());
        pows.push(BigInt::one());
        for i in 1..p.len() {
            let next = &pows[i - 1] * x.denom();
            pows.push(next);
        }
        sign_at(p, x.numer(), &pows)
    }
}

/// Open interval `(lo, hi)` with `p(lo) ≠ 0 ≠ p(hi)` containing exactly one root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootInterval {
    #[serde(with = "rat_string")]
    pub lo: BigRational,
    #[serde(with = "rat_string")]
    pub hi: BigRational,
}

impl RootInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo.to_f64().is_some_and(|l| l < x) && self.hi.to_f64().is_some_and(|h| x < h)
    }
}

mod rat_string {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        let s = String::deserialize(d)?;
        crate::potentials::parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RootIsolation {
    pub count: usize,
    pub intervals: Vec<RootInterval>,
}

/// `1 + ⌈max|c_i| / |c_n|⌉`, a strict bound on the modulus of every root.
fn root_bound(p: &[BigInt]) -> BigInt {
    let lead = p.last().expect("nonzero").abs();
    let max = p[..p.len() - 1]
        .iter()
        .map(|c| c.abs())
        .max()
        .unwrap_or_default();
    BigInt::one() + max.div_ceil(&lead)
}

/// A point of `(lo, hi)` where the chain's base polynomial does not vanish.
fn split_point(chain: &SturmChain, lo: &BigRational, hi: &BigRational) -> BigRational {
    let two = BigRational::from_integer(2.into());
    let mid = (lo + hi) / &two;
    if chain.base_sign_at(&mid) != Sign::NoSign {
        return mid;
    }
    // finitely many roots: some nearby dyadic offset works
    let mut k = 3u32;
    loop {
        let w = (hi - lo) / BigRational::from_integer(BigInt::from(2).pow(k));
        for cand in [&mid + &w, &mid - &w] {
            if chain.base_sign_at(&cand) != Sign::NoSign {
                return cand;
            }
        }
        k += 1;
    }
}

/// Distinct real roots of `p` with rational isolating intervals, sorted.
pub fn sturm_real_roots(p: &RatPoly) -> Result<RootIsolation> {
    let chain = SturmChain::new(p)?;
    Ok(isolate(&chain))
}

fn isolate(chain: &SturmChain) -> RootIsolation {
    let count = chain.real_root_count();
    let mut intervals = Vec::with_capacity(count);
    if count == 0 {
        return RootIsolation { count, intervals };
    }
    let b = BigRational::from_integer(root_bound(chain.base()));
    let mut stack = vec![(-b.clone(), b, count)];
    while let Some((lo, hi, n)) = stack.pop() {
        match n {
            0 => {}
            1 => intervals.push(RootInterval { lo, hi }),
            _ => {
                let m = split_point(chain, &lo, &hi);
                let left = chain.count_between(&lo, &m);
                stack.push((m.clone(), hi, n - left));
                stack.push((lo, m, left));
            }
        }
    }
    intervals.sort_by(|a, b| a.lo.cmp(&b.lo));
    RootIsolation { count, intervals }
}

/// Approximates the single root of `p` in `[lo, hi]` to within `tol` by
/// exact sign bisection.
pub fn refine_root(p: &RatPoly, lo: &BigRational, hi: &BigRational, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::InvalidArgument("tol must be positive".into()));
    }
    let ints = p.primitive_integer();
    if ints.is_empty() {
        return Err(Error::ZeroPolynomial);
    }
    let sign = |x: &BigRational| {
        let mut pows = vec![BigInt::one()];
        for i in 1..ints.len() {
            let next = &pows[i - 1] * x.denom();
            pows.push(next);
        }
        sign_at(&ints, x.numer(), &pows)
    };
    let (mut a, mut b) = (lo.clone(), hi.clone());
    let (sa, sb) = (sign(&a), sign(&b));
    if sa == Sign::NoSign {
        return Ok(a.to_f64().unwrap_or(f64::NAN));
    }
    if sb == Sign::NoSign {
        return Ok(b.to_f64().unwrap_or(f64::NAN));
    }
    if sa == sb {
        return Err(Error::NoSignChange(
            a.to_f64().unwrap_or(f64::NAN),
            b.to_f64().unwrap_or(f64::NAN),
        ));
    }
    let two = BigRational::from_integer(2.into());
    let tol_r = BigRational::from_float(tol).expect("finite tolerance");
    while &b - &a > tol_r {
        let m = (&a + &b) / &two;
        let sm = sign(&m);
        if sm == Sign::NoSign {
            return Ok(m.to_f64().unwrap_or(f64::NAN));
        }
        if sm == sa {
            a = m;
        } else {
            b = m;
        }
    }
    Ok(((&a + &b) / &two).to_f64().unwrap_or(f64::NAN))
}

/// Decides exactly whether `p(u) > 0` for some real `u`.
pub fn attains_positive(p: &RatPoly) -> bool {
    let Some(deg) = p.degree() else { return false };
    let lead_positive = p.lead().expect("nonzero").is_positive();
    if lead_positive || deg % 2 == 1 {
        // +∞ at one end
        return true;
    }
    let chain = SturmChain::new(p).expect("nonzero polynomial");
    let iso = isolate(&chain);
    if iso.intervals.is_empty() {
        return chain.base_sign_at(&BigRational::zero()) == Sign::Plus
            && sign_matches(p, &chain, &BigRational::zero());
    }
    // interval ends are non-roots and every gap between roots contains one
    iso.intervals
        .iter()
        .flat_map(|iv| [iv.lo.clone(), iv.hi.clone()])
        .any(|x| p.eval(&x).cmp(&BigRational::zero()) == Ordering::Greater)
}

/// The square-free part may differ in sign from `p` between roots of even
/// multiplicity; compare directly at `x`.
fn sign_matches(p: &RatPoly, _chain: &SturmChain, x: &BigRational) -> bool {
    p.eval(x).is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::poly::{int, rat};
    use proptest::prelude::*;

    fn sextic() -> RatPoly {
        RatPoly::from_ints(&[-2, 0, 3, -12, -6, 0, 1])
    }

    #[test]
    fn sextic_has_two_real_roots() {
        let iso = sturm_real_roots(&sextic()).unwrap();
        assert_eq!(iso.count, 2);
        assert!(
            iso.intervals[0].contains(-0.51171) || {
                let r = refine_root(&sextic(), &iso.intervals[0].lo, &iso.intervals[0].hi, 1e-8)
                    .unwrap();
                (r + 0.51171).abs() < 1e-5
            }
        );
        let r0 = refine_root(&sextic(), &iso.intervals[0].lo, &iso.intervals[0].hi, 1e-10).unwrap();
        let r1 = refine_root(&sextic(), &iso.intervals[1].lo, &iso.intervals[1].hi, 1e-10).unwrap();
        assert!((r0 + 0.51171).abs() < 1e-5, "{r0}");
        assert!((r1 - 3.09594).abs() < 1e-5, "{r1}");
    }

    fn signs_of(chain: &[Vec<BigInt>]) -> Vec<(usize, Sign)> {
        chain
            .iter()
            .map(|p| (p.len(), p.last().unwrap().sign()))
            .collect()
    }

    #[test]
    fn subresultant_chain_matches_primitive_chain() {
        let polys = [
            sextic(),
            RatPoly::from_ints(&[3, -1, 4, -1, -5, 9, -2, 6, 5]),
            RatPoly::from_ints(&[0, 0, 1, 0, -2, 0, 0, 1]),
            RatPoly::from_ints(&[-7, 2, 0, 0, 0, 3]),
            RatPoly::from_ints(&[1, 1, 1, 1, 1, 1, 1]),
        ];
        for p in polys {
            let sf = p.square_free_part().primitive_integer();
            let a = chain_of(sf.clone());
            let b = primitive_chain_of(sf);
            assert_eq!(signs_of(&a), signs_of(&b), "{p}");
            for (x, y) in a.iter().zip(&b) {
                // proportional with a positive factor
                let (lx, ly) = (x.last().unwrap(), y.last().unwrap());
                for (cx, cy) in x.iter().zip(y) {
                    assert_eq!(cx * ly, cy * lx);
                }
            }
        }
    }

    #[test]
    fn no_real_roots() {
        assert_eq!(
            sturm_real_roots(&RatPoly::from_ints(&[1, 0, 1]))
                .unwrap()
                .count,
            0
        );
        assert_eq!(
            sturm_real_roots(&RatPoly::zero()).unwrap_err(),
            Error::ZeroPolynomial
        );
    }

    #[test]
    fn repeated_and_rational_roots() {
        // (u − 1/2)^2 (u + 3) u
        let p = &(&RatPoly::new(vec![rat(-1, 2), int(1)]).pow(2) * &RatPoly::from_ints(&[3, 1]))
            * &RatPoly::x();
        let iso = sturm_real_roots(&p).unwrap();
        assert_eq!(iso.count, 3);
        let roots: Vec<f64> = iso
            .intervals
            .iter()
            .map(|iv| refine_root(&p.square_free_part(), &iv.lo, &iv.hi, 1e-12).unwrap())
            .collect();
        for (r, w) in roots.iter().zip([-3.0, 0.0, 0.5]) {
            assert!((r - w).abs() < 1e-10);
        }
    }

    #[test]
    fn refine_linear_and_errors() {
        let p = RatPoly::new(vec![rat(-1, 2), int(1)]);
        assert_eq!(refine_root(&p, &int(0), &int(1), 1e-9).unwrap(), 0.5);
        assert!(matches!(
            refine_root(&p, &int(1), &int(2), 1e-9),
            Err(Error::NoSignChange(..))
        ));
    }

    #[test]
    fn positivity_decisions() {
        let q = RatPoly::from_ints(&[1, 0, 1]);
        assert!(attains_positive(&q));
        assert!(!attains_positive(&-&q));
        assert!(!attains_positive(&RatPoly::zero()));
        let neg_square = (&sextic() * &sextic()).scale(&int(-18));
        assert!(!attains_positive(&neg_square));
        // −(u−1)(u−2) is positive between its roots
        assert!(attains_positive(
            &-&(&RatPoly::from_ints(&[-1, 1]) * &RatPoly::from_ints(&[-2, 1]))
        ));
        // −(u−1)²(u−2)² touches zero but never exceeds it
        let t = (&RatPoly::from_ints(&[-1, 1]) * &RatPoly::from_ints(&[-2, 1])).pow(2);
        assert!(!attains_positive(&-&t));
        assert!(attains_positive(&RatPoly::from_ints(&[0, 1])));
    }

    /// Grid oracle: sign changes on a fine grid, plus grid points that are exact zeros.
    fn grid_root_count(c: &[i64]) -> usize {
        let p = RatPoly::from_ints(c).square_free_part();
        let b = 1.0
            + c[..c.len() - 1]
                .iter()
                .map(|x| x.abs() as f64)
                .fold(0.0, f64::max)
                / c.last().unwrap().abs() as f64;
        // exact rational evaluation on a fine grid with irrational-free dyadic points
        let n = 1 << 13;
        let mut count = 0;
        let mut prev: Option<Ordering> = None;
        for i in 0..=n {
            let x =
                BigRational::from_float(-b - 0.5 + (2.0 * b + 1.0) * i as f64 / n as f64).unwrap();
            let s = p.eval(&x).cmp(&BigRational::zero());
            if s == Ordering::Equal {
                count += 1;
                prev = None;
                continue;
            }
            if let Some(ps) = prev {
                if ps != s {
                    count += 1;
                }
            }
            prev = Some(s);
        }
        count
    }

    #[test]
    fn count_matches_grid_oracle_on_separated_examples() {
        // roots well separated relative to the grid
        for c in [
            vec![-6, 11, -6, 1],
            vec![0, -4, 0, 1],
            vec![1, 0, 1],
            vec![-1, 0, 0, 0, 1],
            vec![6, -5, 1],
        ] {
            let n = sturm_real_roots(&RatPoly::from_ints(&c)).unwrap().count;
            assert_eq!(n, grid_root_count(&c), "{c:?}");
        }
    }

    fn root_product(roots: Vec<i64>, lead: i64) -> RatPoly {
        roots.iter().fold(RatPoly::from_ints(&[lead]), |acc, r| {
            &acc * &RatPoly::from_ints(&[-r, 1])
        })
    }

    proptest! {
        #[test]
        fn exact_division_matches_long_division(
            d in prop::collection::vec(any::<u32>(), 1..6),
            qs in prop::collection::vec(prop::collection::vec(any::<u32>(), 0..8), 1..5),
            shift in 0usize..70,
            neg in any::<bool>(),
        ) {
            let mut d = BigInt::from_biguint(Sign::Plus, BigUint::new(d)) << shift;
            if d.is_zero() {
                d = BigInt::from(3);
            }
            if neg {
                d = -d;
            }
            let quotients: Vec<BigInt> = qs
                .into_iter()
                .enumerate()
                .map(|(i, q)| {
                    let q = BigInt::from_biguint(Sign::Plus, BigUint::new(q));
                    if i % 2 == 1 { -q } else { q }
                })
                .collect();
            let products: Vec<BigInt> = quotients.iter().map(|q| q * &d).collect();
            prop_assert_eq!(exact_div_all(products, &d), quotients);
        }

        #[test]
        fn count_matches_constructed_roots(roots in prop::collection::vec(-6i64..=6, 1..5), extra in 0u8..3, lead in prop::sample::select(vec![-3i64, -1, 1, 2])) {
            // real roots from integer factors, plus irreducible quadratics u²+m
            let mut p = root_product(roots.clone(), lead);
            for m in 0..extra {
                p = &p * &RatPoly::from_ints(&[1 + m as i64, 0, 1]);
            }
            let mut distinct = roots.clone();
            distinct.sort();
            distinct.dedup();
            let iso = sturm_real_roots(&p).unwrap();
            prop_assert_eq!(iso.count, distinct.len());
            let sf = p.square_free_part();
            for (iv, r) in iso.intervals.iter().zip(&distinct) {
                let x = refine_root(&sf, &iv.lo, &iv.hi, 1e-9).unwrap();
                prop_assert!((x - *r as f64).abs() < 1e-8);
            }
        }

        #[test]
        fn count_matches_grid_oracle(c in prop::collection::vec(-9i64..=9, 2..9), lead in prop::sample::select(vec![-2i64, -1, 1, 3])) {
            let mut c = c;
            c.push(lead);
            let sturm = sturm_real_roots(&RatPoly::from_ints(&c)).unwrap();
            let grid = grid_root_count(&c);
            // the grid can only miss roots (close pairs); never over-count
            prop_assert!(grid <= sturm.count);
            for iv in &sturm.intervals {
                let sf = RatPoly::from_ints(&c).square_free_part();
                let x = refine_root(&sf, &iv.lo, &iv.hi, 1e-10).unwrap();
                prop_assert!(sf.eval_f64(x).abs() < 1e-3 * (1.0 + sf.coeffs().iter().map(|v| v.to_f64().unwrap().abs()).sum::<f64>()));
            }
        }

        #[test]
        fn positivity_is_scale_invariant(c in prop::collection::vec(-9i64..=9, 1..8), k in 1i64..50) {
            let p = RatPoly::from_ints(&c);
            prop_assert_eq!(attains_positive(&p), attains_positive(&p.scale(&int(k))));
            let neg = p.scale(&int(-k));
            // either p or −p is positive somewhere unless p ≡ 0
            if !p.is_zero() {
                prop_assert!(attains_positive(&p) || attains_positive(&neg));
            }
        }
    }
}
