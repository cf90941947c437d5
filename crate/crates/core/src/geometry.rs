//! Points on S³, codes, Gram data and the Hopf projection to S².
//!
//! R⁴ is identified with ℂ² through `(x0, x1, x2, x3) ↔ (x0 + i·x1, x2 + i·x3)`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default collision tolerance: two points collide when their inner product
/// exceeds `1 - COLLISION_TOL`.
pub const COLLISION_TOL: f64 = 1e-9;

/// Default absolute tolerance used to cluster inner products.
pub const CLUSTER_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct UnitVec4(pub [f64; 4]);

impl UnitVec4 {
    /// Normalizes `v`; fails on the zero vector.
    pub fn new(v: [f64; 4]) -> Result<Self> {
        let n = norm(&v);
        if !(n > 0.0) || !n.is_finite() {
            return Err(Error::InvalidArgument(format!("cannot normalize {v:?}")));
        }
        Ok(Self(v.map(|x| x / n)))
    }

    pub fn from_complex(w1: Complex64, w2: Complex64) -> Result<Self> {
        Self::new([w1.re, w1.im, w2.re, w2.im])
    }

    pub fn w1(&self) -> Complex64 {
        Complex64::new(self.0[0], self.0[1])
    }

    pub fn w2(&self) -> Complex64 {
        Complex64::new(self.0[2], self.0[3])
    }

    pub fn dot(&self, other: &Self) -> f64 {
        dot(&self.0, &other.0)
    }

    pub fn coords(&self) -> [f64; 4] {
        self.0
    }

    /// Multiplies both complex coordinates by `a`.
    pub fn scale_complex(&self, a: Complex64) -> Result<Self> {
        Self::from_complex(a * self.w1(), a * self.w2())
    }
}

pub(crate) fn dot(a: &[f64; 4], b: &[f64; 4]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + a[3] * b[3]
}

pub(crate) fn norm(a: &[f64; 4]) -> f64 {
    dot(a, a).sqrt()
}

/// An ordered list of points on S³.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Code {
    #[serde(default)]
    pub label: String,
    pub points: Vec<UnitVec4>,
}

impl Code {
    pub fn new(label: impl Into<String>, points: Vec<UnitVec4>) -> Self {
        Self {
            label: label.into(),
            points,
        }
    }

    /// Builds a code from raw coordinates, normalizing each row.
    pub fn from_coords(label: impl Into<String>, rows: &[[f64; 4]]) -> Result<Self> {
        let points = rows
            .iter()
            .map(|r| UnitVec4::new(*r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(label, points))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Largest norm defect `| |x| - 1 |` over all points.
    pub fn max_norm_defect(&self) -> f64 {
        self.points
            .iter()
            .map(|p| (norm(&p.0) - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// True when no two points have inner product above `1 - collision_tol`.
    pub fn is_valid(&self, collision_tol: f64) -> bool {
        self.find_collision(collision_tol).is_none()
    }

    pub fn find_collision(&self, collision_tol: f64) -> Option<(usize, usize)> {
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.points[i].dot(&self.points[j]) > 1.0 - collision_tol {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Applies a 4×4 matrix (row-major) to every point.
    pub fn transform(&self, m: &[[f64; 4]; 4]) -> Result<Self> {
        let points = self
            .points
            .iter()
            .map(|p| UnitVec4::new(mat_vec(m, &p.0)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::new(self.label.clone(), points))
    }

    /// Off-diagonal inner products over ordered pairs, sorted ascending.
    pub fn sorted_inner_products(&self) -> Vec<f64> {
        let n = self.len();
        let mut v = Vec::with_capacity(n * n.saturating_sub(1));
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    v.push(self.points[i].dot(&self.points[j]));
                }
            }
        }
        v.sort_by(f64::total_cmp);
        v
    }
}

pub(crate) fn mat_vec(m: &[[f64; 4]; 4], v: &[f64; 4]) -> [f64; 4] {
    let mut out = [0.0; 4];
    for (o, row) in out.iter_mut().zip(m) {
        *o = dot(row, v);
    }
    out
}

pub fn gram_matrix(code: &Code) -> Vec<Vec<f64>> {
    code.points
        .iter()
        .map(|p| code.points.iter().map(|q| p.dot(q)).collect())
        .collect()
}

/// Cosine of the minimal angular distance: the largest inner product between distinct points.
pub fn t_max(code: &Code) -> Result<f64> {
    if code.len() < 2 {
        return Err(Error::DegenerateCode(format!("{} point(s)", code.len())));
    }
    let mut best = f64::NEG_INFINITY;
    for i in 0..code.len() {
        for j in i + 1..code.len() {
            best = best.max(code.points[i].dot(&code.points[j]));
        }
    }
    Ok(best)
}

/// Clustered multiset of off-diagonal inner products.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GramSpectrum {
    pub entries: Vec<(f64, usize)>,
    pub cluster_tol: f64,
    /// Set when two cluster means lie within `2 * cluster_tol` of each other.
    pub ambiguous: bool,
}

impl GramSpectrum {
    pub fn total(&self) -> usize {
        self.entries.iter().map(|e| e.1).sum()
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.0).collect()
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.entries.iter().map(|e| e.1).collect()
    }

    /// CSV rows `value,multiplicity`, one cluster per line.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("value,multiplicity\n");
        for (v, m) in &self.entries {
            s.push_str(&format!("{v:?},{m}\n"));
        }
        s
    }
}

pub fn inner_product_multiset(code: &Code, cluster_tol: f64) -> Result<GramSpectrum> {
    if !(cluster_tol > 0.0) {
        return Err(Error::InvalidArgument(
            "cluster_tol must be positive".into(),
        ));
    }
    let values = code.sorted_inner_products();
    let mut clusters: Vec<(f64, usize)> = Vec::new();
    let mut sum = 0.0;
    let mut count = 0usize;
    let mut last = f64::NAN;
    for v in values {
        if count > 0 && v - last > cluster_tol {
            clusters.push((sum / count as f64, count));
            sum = 0.0;
            count = 0;
        }
        sum += v;
        count += 1;
        last = v;
    }
    if count > 0 {
        clusters.push((sum / count as f64, count));
    }
    let ambiguous = clusters
        .windows(2)
        .any(|w| w[1].0 - w[0].0 < 2.0 * cluster_tol);
    Ok(GramSpectrum {
        entries: clusters,
        cluster_tol,
        ambiguous,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpherePoint3(pub [f64; 3]);

/// Hopf projection S³ → S²: the ratio `w1 / w2` pushed through stereographic
/// projection onto the unit sphere, with `∞` sent to the north pole.
///
/// Evaluated as `(2·Re(w1·w̄2), 2·Im(w1·w̄2), |w1|² − |w2|²)`, which equals the
/// ratio form on S³ and needs no special case at `w2 = 0`.
pub fn hopf_project(code: &Code) -> Vec<SpherePoint3> {
    code.points
        .iter()
        .map(|p| {
            let (w1, w2) = (p.w1(), p.w2());
            let z = w1 * w2.conj();
            let r = w1.norm_sqr() + w2.norm_sqr();
            SpherePoint3([
                2.0 * z.re / r,
                2.0 * z.im / r,
                (w1.norm_sqr() - w2.norm_sqr()) / r,
            ])
        })
        .collect()
}

/// Distinct Hopf images of a code (within `tol`) with how often each occurs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HopfImage {
    pub points: Vec<(SpherePoint3, usize)>,
    /// Pairwise inner products of the distinct images.
    pub inner_products: Vec<f64>,
}

impl HopfImage {
    /// Whether the images are four points of a regular tetrahedron, each hit equally often.
    pub fn is_regular_tetrahedron(&self, tol: f64) -> bool {
        self.points.len() == 4
            && self.points.windows(2).all(|w| w[0].1 == w[1].1)
            && self
                .inner_products
                .iter()
                .all(|t| (t + 1.0 / 3.0).abs() < tol)
    }
}

pub fn hopf_image(code: &Code, tol: f64) -> HopfImage {
    let mut points: Vec<(SpherePoint3, usize)> = Vec::new();
    for q in hopf_project(code) {
        match points
            .iter_mut()
            .find(|(p, _)| (0..3).all(|c| (p.0[c] - q.0[c]).abs() < tol))
        {
            Some((_, n)) => *n += 1,
            None => points.push((q, 1)),
        }
    }
    let mut inner_products = Vec::new();
    for i in 0..points.len() {
        for j in i + 1..points.len() {
            inner_products.push((0..3).map(|c| points[i].0 .0[c] * points[j].0 .0[c]).sum());
        }
    }
    HopfImage {
        points,
        inner_products,
    }
}

/// `n` independent uniform points on S³, deterministic in `seed`.
pub fn random_code(n: usize, seed: u64) -> Result<Code> {
    if n == 0 {
        return Err(Error::InvalidArgument("random_code needs n >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = Vec::with_capacity(n);
    while points.len() < n {
        let v: [f64; 4] = std::array::from_fn(|_| StandardNormal.sample(&mut rng));
        if let Ok(p) = UnitVec4::new(v) {
            points.push(p);
        }
    }
    Ok(Code::new(format!("random:{n}:{seed}"), points))
}

/// Random orthogonal 4×4 matrix (Gram–Schmidt on a Gaussian matrix).
pub fn random_orthogonal(seed: u64) -> [[f64; 4]; 4] {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let mut rows: [[f64; 4]; 4] =
            std::array::from_fn(|_| std::array::from_fn(|_| StandardNormal.sample(&mut rng)));
        let mut ok = true;
        for i in 0..4 {
            for j in 0..i {
                let d = dot(&rows[i], &rows[j]);
                let rj = rows[j];
                for (x, y) in rows[i].iter_mut().zip(rj) {
                    *x -= d * y;
                }
            }
            let n = norm(&rows[i]);
            if n < 1e-8 {
                ok = false;
                break;
            }
            rows[i] = rows[i].map(|x| x / n);
        }
        if ok {
            return rows;
        }
    }
}

/// L∞ distance between the sorted off-diagonal inner-product lists of two codes.
pub fn spectrum_distance(a: &Code, b: &Code) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::SizeMismatch(a.len(), b.len()));
    }
    let (x, y) = (a.sorted_inner_products(), b.sorted_inner_products());
    Ok(x.iter()
        .zip(&y)
        .map(|(p, q)| (p - q).abs())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(i: usize) -> [f64; 4] {
        let mut v = [0.0; 4];
        v[i] = 1.0;
        v
    }

    #[test]
    fn two_orthogonal_points() {
        let c = Code::from_coords("pair", &[e(0), e(1)]).unwrap();
        let g = gram_matrix(&c);
        assert_eq!(g[0][1], 0.0);
        assert_eq!(g[0][0], 1.0);
        let s = inner_product_multiset(&c, CLUSTER_TOL).unwrap();
        assert_eq!(s.entries, vec![(0.0, 2)]);
    }

    #[test]
    fn antipodal_t_max() {
        let c = Code::from_coords("", &[e(0), [-1.0, 0.0, 0.0, 0.0]]).unwrap();
        assert_eq!(t_max(&c).unwrap(), -1.0);
        let one = Code::from_coords("", &[e(0)]).unwrap();
        assert!(matches!(t_max(&one), Err(Error::DegenerateCode(_))));
    }

    #[test]
    fn random_code_is_deterministic_and_unit() {
        let a = random_code(24, 7).unwrap();
        let b = random_code(24, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.max_norm_defect() < 1e-12);
        assert_ne!(a, random_code(24, 8).unwrap());
    }

    #[test]
    fn random_code_mean_is_small() {
        // CLT: each coordinate of the mean has sd 1/sqrt(4n) = 0.005
        let c = random_code(10_000, 1).unwrap();
        let mut m = [0.0; 4];
        for p in &c.points {
            for k in 0..4 {
                m[k] += p.0[k] / c.len() as f64;
            }
        }
        assert!(norm(&m) < 0.05);
    }

    #[test]
    fn spectrum_distance_mismatch() {
        let a = random_code(3, 1).unwrap();
        let b = random_code(4, 1).unwrap();
        assert_eq!(spectrum_distance(&a, &b), Err(Error::SizeMismatch(3, 4)));
        assert_eq!(spectrum_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn hopf_of_first_coordinate_axis_is_north_pole() {
        let c = Code::from_coords("", &[e(0), e(1)]).unwrap();
        for p in hopf_project(&c) {
            assert_eq!(p.0, [0.0, 0.0, 1.0]);
        }
    }

    #[test]
    fn code_json_roundtrip() {
        let c = random_code(5, 3).unwrap();
        let s = serde_json::to_string(&c).unwrap();
        assert!(s.starts_with("{\"label\""));
        let back: Code = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
    }
}
