//! Automorphism search, hexagon enumeration and Eisenstein partitions of the 24-cell.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{mat_vec, Code, UnitVec4};
use crate::linalg::{det4, inverse4, max_abs_diff4, mul4, transpose4, Mat4, IDENTITY4};
use crate::par;

const MATCH_TOL: f64 = 1e-9;

/// An orthogonal map of R⁴ that permutes the points of a code.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Automorphism {
    /// `perm[i]` is the index of the image of point `i`.
    pub perm: Vec<usize>,
    pub matrix: Mat4,
}

impl Automorphism {
    pub fn is_orthogonal(&self, tol: f64) -> bool {
        max_abs_diff4(&mul4(&transpose4(&self.matrix), &self.matrix), &IDENTITY4) <= tol
    }

    pub fn compose_perm(&self, other: &Automorphism) -> Vec<usize> {
        // self ∘ other
        other.perm.iter().map(|&i| self.perm[i]).collect()
    }

    /// Order of the permutation.
    pub fn order(&self) -> usize {
        let id: Vec<usize> = (0..self.perm.len()).collect();
        let mut p = self.perm.clone();
        let mut k = 1;
        while p != id {
            p = p.iter().map(|&i| self.perm[i]).collect();
            k += 1;
        }
        k
    }
}

/// Index of the code point within `tol` of `v`, if any.
fn locate(code: &Code, v: &[f64; 4], tol: f64) -> Option<usize> {
    code.points
        .iter()
        .position(|p| p.0.iter().zip(v).all(|(a, b)| (a - b).abs() <= tol))
}

/// Greedy choice of four linearly independent points.
fn independent_subset(code: &Code) -> Option<[usize; 4]> {
    let mut chosen: Vec<usize> = Vec::new();
    let mut basis: Vec<[f64; 4]> = Vec::new();
    for (i, p) in code.points.iter().enumerate() {
        let mut r = p.0;
        for b in &basis {
            let d: f64 = (0..4).map(|k| r[k] * b[k]).sum();
            for k in 0..4 {
                r[k] -= d * b[k];
            }
        }
        let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-6 {
            basis.push(r.map(|x| x / n));
            chosen.push(i);
            if chosen.len() == 4 {
                return Some([chosen[0], chosen[1], chosen[2], chosen[3]]);
            }
        }
    }
    None
}

/// All orthogonal transformations mapping `code` onto itself.
///
/// Candidates are seeded from the images of an independent 4-subset, pruned
/// level by level by Gram compatibility, then verified on every point.
pub fn automorphisms(code: &Code) -> Result<Vec<Automorphism>> {
    let base = independent_subset(code).ok_or(Error::DegenerateSpan)?;
    let n = code.len();
    let pts = &code.points;
    let gram = |a: usize, b: usize| pts[a].dot(&pts[b]);
    let x_cols: Mat4 = std::array::from_fn(|r| std::array::from_fn(|c| pts[base[c]].0[r]));
    let x_inv = inverse4(&x_cols).ok_or(Error::DegenerateSpan)?;

    let per_first = par::map_range(0..n, |j0| {
        let mut found = Vec::new();
        let compatible = |img: &[usize], j: usize| {
            let level = img.len();
            img.iter()
                .enumerate()
                .all(|(a, &ja)| (gram(ja, j) - gram(base[a], base[level])).abs() <= MATCH_TOL)
        };
        let mut stack: Vec<Vec<usize>> = vec![vec![j0]];
        while let Some(img) = stack.pop() {
            if img.len() == 4 {
                if let Some(a) = verify_candidate(code, &img, &x_inv) {
                    found.push(a);
                }
                continue;
            }
            for j in (0..n).rev() {
                if compatible(&img, j) {
                    let mut next = img.clone();
                    next.push(j);
                    stack.push(next);
                }
            }
        }
        found
    });
    let mut all: Vec<Automorphism> = per_first.into_iter().flatten().collect();
    all.sort_by(|a, b| a.perm.cmp(&b.perm));
    all.dedup_by(|a, b| a.perm == b.perm);
    Ok(all)
}

fn verify_candidate(code: &Code, img: &[usize], x_inv: &Mat4) -> Option<Automorphism> {
    let y_cols: Mat4 = std::array::from_fn(|r| std::array::from_fn(|c| code.points[img[c]].0[r]));
    let m = mul4(&y_cols, x_inv);
    let mut perm = Vec::with_capacity(code.len());
    let mut used = vec![false; code.len()];
    for p in &code.points {
        let j = locate(code, &mat_vec(&m, &p.0), 1e-7)?;
        if used[j] {
            return None;
        }
        used[j] = true;
        perm.push(j);
    }
    let a = Automorphism { perm, matrix: m };
    a.is_orthogonal(1e-9).then_some(a)
}

/// True when the six points are closed under negation, span a plane, and
/// each sees the others at inner products `{1/2, 1/2, −1/2, −1/2, −1}`.
pub fn is_regular_hexagon(points: &[UnitVec4]) -> bool {
    if points.len() != 6 {
        return false;
    }
    for p in points {
        let mut ips: Vec<f64> = points
            .iter()
            .filter(|q| *q != p)
            .map(|q| p.dot(q))
            .collect();
        if ips.len() != 5 {
            return false;
        }
        ips.sort_by(f64::total_cmp);
        let want = [-1.0, -0.5, -0.5, 0.5, 0.5];
        if ips.iter().zip(want).any(|(a, b)| (a - b).abs() > MATCH_TOL) {
            return false;
        }
    }
    true
}

/// Every regular hexagon contained in `code`, as sorted index lists.
///
/// Seeded from each pair at inner product 1/2: the plane they span meets the
/// hexagon in `x, y, y−x, −x, −y, x−y`.
pub fn enumerate_hexagons(code: &Code) -> Vec<[usize; 6]> {
    let mut found = BTreeSet::new();
    let n = code.len();
    for i in 0..n {
        for j in 0..n {
            if i == j || (code.points[i].dot(&code.points[j]) - 0.5).abs() > MATCH_TOL {
                continue;
            }
            let (x, y) = (code.points[i].0, code.points[j].0);
            let cand: [[f64; 4]; 6] = [
                x,
                y,
                std::array::from_fn(|k| y[k] - x[k]),
                x.map(|v| -v),
                y.map(|v| -v),
                std::array::from_fn(|k| x[k] - y[k]),
            ];
            let idx: Option<Vec<usize>> = cand.iter().map(|v| locate(code, v, 1e-7)).collect();
            if let Some(mut idx) = idx {
                let hex: Vec<UnitVec4> = idx.iter().map(|&k| code.points[k]).collect();
                if is_regular_hexagon(&hex) {
                    idx.sort();
                    found.insert([idx[0], idx[1], idx[2], idx[3], idx[4], idx[5]]);
                }
            }
        }
    }
    found.into_iter().collect()
}

/// A partition of the 24 points into four hexagons (index lists, sorted).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct HexPartition {
    pub hexagons: Vec<[usize; 6]>,
}

impl HexPartition {
    pub fn contains(&self, h: &[usize; 6]) -> bool {
        self.hexagons.contains(h)
    }
}

/// Partitions of the 24-cell induced by Eisenstein structures: for each
/// order-3 automorphism `g` without eigenvalue 1, the orbits of `⟨−I, g⟩`.
pub fn eisenstein_partitions(d4: &Code) -> Result<Vec<HexPartition>> {
    let auts = automorphisms(d4)?;
    let neg: Vec<usize> = (0..d4.len())
        .map(|i| locate(d4, &d4.points[i].0.map(|v| -v), 1e-9))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::InvalidArgument("code is not antipodal".into()))?;
    let mut parts = BTreeSet::new();
    for g in &auts {
        if g.order() != 3 {
            continue;
        }
        let shifted: Mat4 =
            std::array::from_fn(|i| std::array::from_fn(|j| g.matrix[i][j] - IDENTITY4[i][j]));
        if det4(&shifted).abs() <= 1e-9 {
            continue;
        }
        let mut seen = vec![false; d4.len()];
        let mut hexes = Vec::new();
        for start in 0..d4.len() {
            if seen[start] {
                continue;
            }
            let a = start;
            let b = g.perm[a];
            let c = g.perm[b];
            let mut orbit = [a, b, c, neg[a], neg[b], neg[c]];
            for &k in &orbit {
                seen[k] = true;
            }
            orbit.sort();
            hexes.push(orbit);
        }
        let valid = hexes.iter().all(|h| {
            let pts: Vec<UnitVec4> = h.iter().map(|&k| d4.points[k]).collect();
            is_regular_hexagon(&pts)
        });
        if valid && hexes.len() == 4 {
            hexes.sort();
            parts.insert(HexPartition { hexagons: hexes });
        }
    }
    Ok(parts.into_iter().collect())
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DisjointPair {
    pub first: [usize; 6],
    pub second: [usize; 6],
    /// Index into `partitions` of a partition containing both hexagons.
    pub witness: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HexagonClaimReport {
    pub holds: bool,
    pub hexagons: Vec<[usize; 6]>,
    pub partitions: Vec<HexPartition>,
    pub disjoint_pairs: Vec<DisjointPair>,
}

/// Checks that every pair of disjoint hexagons of the 24-cell lies in a common
/// Eisenstein partition.
pub fn disjoint_hexagon_claim(d4: &Code) -> Result<HexagonClaimReport> {
    let hexagons = enumerate_hexagons(d4);
    let partitions = eisenstein_partitions(d4)?;
    let mut disjoint_pairs = Vec::new();
    for (i, a) in hexagons.iter().enumerate() {
        for b in &hexagons[i + 1..] {
            if a.iter().any(|x| b.contains(x)) {
                continue;
            }
            let witness = partitions
                .iter()
                .position(|p| p.contains(a) && p.contains(b));
            disjoint_pairs.push(DisjointPair {
                first: *a,
                second: *b,
                witness,
            });
        }
    }
    let holds = disjoint_pairs.iter().all(|p| p.witness.is_some());
    Ok(HexagonClaimReport {
        holds,
        hexagons,
        partitions,
        disjoint_pairs,
    })
}
