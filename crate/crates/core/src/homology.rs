//! Simplicial homology over prime fields: boundary matrices, Betti
//! numbers, hole counting and the hole-based rank lower bound.

use std::collections::HashSet;

use crate::combinat::k_subsets;
use crate::error::{Error, Result};
use crate::{SimplicialComplex, VertexSet};

/// Dense matrix over GF(q), q prime. Rank over GF(2) runs on packed bit
/// rows; other small primes use plain modular elimination.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldMatrix {
    q: u32,
    rows: usize,
    cols: usize,
    entries: Vec<u32>, // row-major, reduced mod q
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    (2..).take_while(|d| d * d <= q).all(|d| q % d != 0)
}

impl FieldMatrix {
    pub fn zero(rows: usize, cols: usize, q: u32) -> Result<Self> {
        if !is_prime(q) {
            return Err(Error::NotPrime(q));
        }
        Ok(FieldMatrix { q, rows, cols, entries: vec![0; rows * cols] })
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> u32 {
        self.entries[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        let q = self.q as i64;
        self.entries[r * self.cols + c] = v.rem_euclid(q) as u32;
    }

    pub fn multiply(&self, other: &FieldMatrix) -> Result<FieldMatrix> {
        if self.cols != other.rows || self.q != other.q {
            return Err(Error::InvalidParameter("matrix shape/field mismatch".into()));
        }
        let mut out = FieldMatrix::zero(self.rows, other.cols, self.q)?;
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k) as u64;
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.get(i, j) as u64;
                    out.entries[i * other.cols + j] =
                        ((cur + a * other.get(k, j) as u64) % self.q as u64) as u32;
                }
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn rank(&self) -> usize {
        if self.rows == 0 || self.cols == 0 {
            return 0;
        }
        if self.q == 2 {
            self.rank_gf2()
        } else {
            self.rank_modp()
        }
    }

    fn rank_gf2(&self) -> usize {
        let words = (self.cols + 63) / 64;
        let mut rows: Vec<Vec<u64>> = (0..self.rows)
            .map(|r| {
                let mut w = vec![0u64; words];
                for c in 0..self.cols {
                    if self.get(r, c) & 1 == 1 {
                        w[c / 64] |= 1 << (c % 64);
                    }
                }
                w
            })
            .collect();
        let mut rank = 0;
        for col in 0..self.cols {
            let (wi, bi) = (col / 64, col % 64);
            let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][wi] >> bi & 1 == 1) else {
                continue;
            };
            rows.swap(rank, pivot);
            let pivot_row = rows[rank].clone();
            for r in rank + 1..rows.len() {
                if rows[r][wi] >> bi & 1 == 1 {
                    for w in 0..words {
                        rows[r][w] ^= pivot_row[w];
                    }
                }
            }
            rank += 1;
            if rank == rows.len() {
                break;
            }
        }
        rank
    }

    fn rank_modp(&self) -> usize {
        let q = self.q as u64;
        let mut m: Vec<u64> = self.entries.iter().map(|&e| e as u64).collect();
        let cols = self.cols;
        let inv = |a: u64| -> u64 {
            // Fermat inverse; q is prime and tiny
            let mut acc = 1u64;
            let mut base = a % q;
            let mut e = q - 2;
            while e > 0 {
                if e & 1 == 1 {
                    acc = acc * base % q;
                }
                base = base * base % q;
                e >>= 1;
            }
            acc
        };
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..self.rows).find(|&r| m[r * cols + col] % q != 0) else {
                continue;
            };
            for c in 0..cols {
                m.swap(rank * cols + c, pivot * cols + c);
            }
            let pinv = inv(m[rank * cols + col]);
            for r in rank + 1..self.rows {
                let factor = m[r * cols + col] * pinv % q;
                if factor != 0 {
                    for c in col..cols {
                        let sub = factor * m[rank * cols + c] % q;
                        m[r * cols + c] = (m[r * cols + c] + q - sub) % q;
                    }
                }
            }
            rank += 1;
            if rank == self.rows {
                break;
            }
        }
        rank
    }
}

/// Betti numbers over GF(q), dimension-indexed from 0.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BettiProfile {
    pub q: u32,
    pub betti: Vec<u64>,
    pub reduced: bool,
}

impl BettiProfile {
    pub fn get(&self, k: usize) -> u64 {
        self.betti.get(k).copied().unwrap_or(0)
    }

    /// `Σ_k (−1)^k β_k`; equals the f-vector Euler characteristic for the
    /// unreduced profile of any complex.
    pub fn euler_characteristic(&self) -> i64 {
        self.betti
            .iter()
            .enumerate()
            .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
            .sum()
    }
}

/// Matrix of the boundary operator from k-dimensional faces (size k+1) to
/// (k−1)-dimensional faces (size k), with alternating signs `(−1)^i` on
/// the i-th vertex deletion in ascending order. Over GF(2) the signs
/// vanish and this is the unsigned subset boundary.
pub fn boundary_matrix(complex: &SimplicialComplex, k: usize, q: u32) -> Result<FieldMatrix> {
    boundary_matrix_between(&complex.faces_of_size(k), &complex.faces_of_size(k + 1), q)
}

fn boundary_matrix_between(
    rows_faces: &[VertexSet],
    cols_faces: &[VertexSet],
    q: u32,
) -> Result<FieldMatrix> {
    let mut m = FieldMatrix::zero(rows_faces.len(), cols_faces.len(), q)?;
    if rows_faces.is_empty() || cols_faces.is_empty() {
        return Ok(m);
    }
    let index: std::collections::HashMap<&VertexSet, usize> =
        rows_faces.iter().enumerate().map(|(i, f)| (f, i)).collect();
    for (cj, face) in cols_faces.iter().enumerate() {
        for (i, v) in face.iter().enumerate() {
            let mut sub = face.clone();
            sub.remove(v);
            let ri = index[&sub];
            m.set(ri, cj, if i % 2 == 0 { 1 } else { -1 });
        }
    }
    Ok(m)
}

const DEFAULT_MATRIX_BUDGET: u64 = 200_000_000;

/// Unreduced Betti numbers `β_k = f_{k+1} − rank ∂_k − rank ∂_{k+1}`.
pub fn betti_numbers(complex: &SimplicialComplex, q: u32) -> Result<BettiProfile> {
    betti_numbers_budgeted(complex, q, DEFAULT_MATRIX_BUDGET)
}

/// As [`betti_numbers`] but with an explicit entry-count budget; exceeding
/// it is an explicit resource error, never a silent truncation.
pub fn betti_numbers_budgeted(
    complex: &SimplicialComplex,
    q: u32,
    budget: u64,
) -> Result<BettiProfile> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let top = complex.max_face_size();
    let mut betti = Vec::with_capacity(top);
    let mut layers: Vec<Vec<VertexSet>> = Vec::with_capacity(top + 1);
    for size in 1..=top {
        layers.push(complex.faces_of_size(size));
    }
    let mut rank_below = 0usize; // rank of ∂_k, zero map for k = 0
    for k in 0..top {
        let cols = layers[k].len() as u64;
        let rows_next = cols;
        let cols_next = layers.get(k + 1).map_or(0, |l| l.len()) as u64;
        if rows_next.saturating_mul(cols_next) > budget {
            return Err(Error::ResourceBudget(format!(
                "boundary matrix {rows_next}x{cols_next} exceeds entry budget {budget}"
            )));
        }
        let rank_above = if cols_next == 0 {
            0
        } else {
            let empty = Vec::new();
            let upper = layers.get(k + 1).unwrap_or(&empty);
            boundary_matrix_between(&layers[k], upper, q)?.rank()
        };
        betti.push(cols - rank_below as u64 - rank_above as u64);
        rank_below = rank_above;
    }
    Ok(BettiProfile { q, betti, reduced: false })
}

/// One Betti number `β_k = f_{k+1} − rank ∂_k − rank ∂_{k+1}` without
/// computing the rest of the profile.
pub fn betti_number(complex: &SimplicialComplex, k: usize, q: u32) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let here = complex.faces_of_size(k + 1);
    let below = complex.faces_of_size(k);
    let above = complex.faces_of_size(k + 2);
    let rank_down = if k == 0 {
        0
    } else {
        boundary_matrix_between(&below, &here, q)?.rank()
    };
    let rank_up = boundary_matrix_between(&here, &above, q)?.rank();
    Ok(here.len() as u64 - rank_down as u64 - rank_up as u64)
}

/// Reduced Betti numbers: `β̃_0 = β_0 − 1` for complexes with at least one
/// face, everything else unchanged.
pub fn reduced_betti_numbers(complex: &SimplicialComplex, q: u32) -> Result<BettiProfile> {
    let mut profile = betti_numbers(complex, q)?;
    if !profile.betti.is_empty() {
        profile.betti[0] -= 1;
    }
    profile.reduced = true;
    Ok(profile)
}

pub fn euler_from_betti(profile: &BettiProfile) -> i64 {
    profile.euler_characteristic()
}

/// The hole census of one complex at one size: `s`-sets that are not faces
/// but have every (s−1)-subset present.
#[derive(Clone, Debug)]
pub struct HoleCertificate {
    pub s: usize,
    /// Total number of holes.
    pub x: u64,
    /// Holes sharing an (s−1)-subset with another hole.
    pub y: u64,
    pub witnesses: Vec<VertexSet>,
}

impl HoleCertificate {
    pub fn lower_bound(&self) -> i64 {
        self.x as i64 - self.y as i64
    }
}

/// Counts holes of size `s`, optionally restricted to a candidate list
/// (the uniform model's `G` of all-free-boundary sets).
pub fn count_holes(
    complex: &SimplicialComplex,
    s: usize,
    candidates: Option<&[VertexSet]>,
) -> Result<HoleCertificate> {
    if s < 2 || s > complex.n() {
        return Err(Error::InvalidParameter(format!(
            "hole size s={s} outside 2..=n={}",
            complex.n()
        )));
    }
    let faces_s: HashSet<VertexSet> = complex.faces_of_size(s).into_iter().collect();
    let faces_below: HashSet<VertexSet> = complex.faces_of_size(s - 1).into_iter().collect();
    let scan_all;
    let scan: &[VertexSet] = match candidates {
        Some(c) => c,
        None => {
            scan_all = k_subsets(complex.n(), s);
            &scan_all
        }
    };
    let mut witnesses: Vec<VertexSet> = Vec::new();
    for x in scan {
        if faces_s.contains(x) {
            continue;
        }
        let all_present = x.iter().all(|v| {
            let mut sub = x.clone();
            sub.remove(v);
            faces_below.contains(&sub)
        });
        if all_present {
            witnesses.push(x.clone());
        }
    }
    let shared = witnesses
        .iter()
        .filter(|x| {
            witnesses
                .iter()
                .any(|y| *x != y && x.intersection_len(y) == s - 1)
        })
        .count() as u64;
    Ok(HoleCertificate { s, x: witnesses.len() as u64, y: shared, witnesses })
}

/// A chain over GF(q): faces with coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chain {
    pub q: u32,
    pub terms: std::collections::BTreeMap<VertexSet, u32>,
}

impl Chain {
    pub fn zero(q: u32) -> Self {
        Chain { q, terms: Default::default() }
    }

    fn add(&mut self, face: VertexSet, coeff: i64) {
        let q = self.q as i64;
        let cur = self.terms.get(&face).copied().unwrap_or(0) as i64;
        let v = (cur + coeff).rem_euclid(q) as u32;
        if v == 0 {
            self.terms.remove(&face);
        } else {
            self.terms.insert(face, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Simplicial boundary with the same sign convention as
    /// [`boundary_matrix`].
    pub fn boundary(&self) -> Chain {
        let mut out = Chain::zero(self.q);
        for (face, &coeff) in &self.terms {
            for (i, v) in face.iter().enumerate() {
                let mut sub = face.clone();
                sub.remove(v);
                if sub.is_empty() {
                    continue;
                }
                let sign = if i % 2 == 0 { 1 } else { -1 };
                out.add(sub, sign * coeff as i64);
            }
        }
        out
    }
}

/// The chain `v_x = Σ_{i∈x} ±(x∖{i})` naturally identified with a hole
/// `x`; a cycle whenever `x` is a hole.
pub fn hole_chain(x: &VertexSet, q: u32) -> Result<Chain> {
    if x.len() < 2 {
        return Err(Error::InvalidParameter("hole chains need |x| >= 2".into()));
    }
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    let mut chain = Chain::zero(q);
    for (i, v) in x.iter().enumerate() {
        let mut sub = x.clone();
        sub.remove(v);
        chain.add(sub, if i % 2 == 0 { 1 } else { -1 });
    }
    Ok(chain)
}

/// Outcome of checking `β_{s−2} ≥ X − Y` on one complex.
#[derive(Clone, Debug)]
pub struct LowerBoundReport {
    pub s: usize,
    pub betti: u64,
    pub x: u64,
    pub y: u64,
    pub holds: bool,
}

/// Computes the Betti number and the hole certificate and checks the
/// theorem-backed inequality. When no face of size `s` exists the bound is
/// unconditional; a violation in that regime is a bug signal.
pub fn verify_lower_bound(
    complex: &SimplicialComplex,
    s: usize,
    q: u32,
    candidates: Option<&[VertexSet]>,
) -> Result<LowerBoundReport> {
    let cert = count_holes(complex, s, candidates)?;
    let profile = betti_numbers(complex, q)?;
    let betti = profile.get(s - 2);
    let holds = (betti as i64) >= cert.lower_bound();
    if !holds && complex.count_faces_of_size(s) == 0 {
        return Err(Error::Internal(format!(
            "hole lower bound violated with no size-{s} faces: beta={} X={} Y={}",
            betti, cert.x, cert.y
        )));
    }
    Ok(LowerBoundReport { s, betti, x: cert.x, y: cert.y, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::down_closure;
    use crate::vset;

    fn hollow_triangle() -> SimplicialComplex {
        down_closure(&[vset![1, 2], vset![1, 3], vset![2, 3]], 3).unwrap()
    }

    fn tetra_boundary() -> SimplicialComplex {
        down_closure(&crate::combinat::k_subsets(4, 3), 4).unwrap()
    }

    #[test]
    fn boundary_matrix_examples() {
        let m = boundary_matrix(&hollow_triangle(), 1, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 3));
        assert_eq!(m.rank(), 2);

        let full3 = SimplicialComplex::full_simplex(3);
        let m = boundary_matrix(&full3, 2, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (3, 1));
        assert_eq!(m.rank(), 1);

        // signed chain-complex law over GF(3)
        let c = tetra_boundary();
        let d2 = boundary_matrix(&c, 2, 3).unwrap();
        let d1 = boundary_matrix(&c, 1, 3).unwrap();
        assert!(d1.multiply(&d2).unwrap().is_zero());
    }

    #[test]
    fn composite_field_rejected() {
        assert!(boundary_matrix(&hollow_triangle(), 1, 4).is_err());
        assert!(betti_numbers(&hollow_triangle(), 6).is_err());
    }

    #[test]
    fn betti_examples() {
        let p = betti_numbers(&hollow_triangle(), 2).unwrap();
        assert_eq!((p.get(0), p.get(1)), (1, 1));

        let p = betti_numbers(&tetra_boundary(), 2).unwrap();
        assert_eq!((p.get(0), p.get(1), p.get(2)), (1, 0, 1));

        let two_edges = down_closure(&[vset![1, 2], vset![3, 4]], 4).unwrap();
        assert_eq!(betti_numbers(&two_edges, 2).unwrap().get(0), 2);
    }

    #[test]
    fn betti_budget_guard() {
        let big = SimplicialComplex::full_simplex(14);
        let err = betti_numbers_budgeted(&big, 2, 100).unwrap_err();
        assert!(matches!(err, Error::ResourceBudget(_)));
    }

    #[test]
    fn hole_examples() {
        let cert = count_holes(&hollow_triangle(), 3, None).unwrap();
        assert_eq!((cert.x, cert.y), (1, 0));
        assert_eq!(cert.witnesses, vec![vset![1, 2, 3]]);

        // K4 graph complex: every triple is a hole and every pair of
        // triples shares an edge
        let k4 = down_closure(&crate::combinat::k_subsets(4, 2), 4).unwrap();
        let cert = count_holes(&k4, 3, None).unwrap();
        assert_eq!((cert.x, cert.y), (4, 4));

        let full = SimplicialComplex::full_simplex(5);
        for s in 2..=5 {
            assert_eq!(count_holes(&full, s, None).unwrap().x, 0);
        }
    }

    #[test]
    fn hole_chain_examples() {
        let chain = hole_chain(&vset![1, 2, 3], 3).unwrap();
        assert_eq!(chain.terms.len(), 3);
        assert!(chain.boundary().is_zero());

        // signed coefficients: +{2,3}, -{1,3}, +{1,2}
        assert_eq!(chain.terms[&vset![2, 3]], 1);
        assert_eq!(chain.terms[&vset![1, 3]], 2); // -1 mod 3
        assert_eq!(chain.terms[&vset![1, 2]], 1);
    }

    #[test]
    fn disjoint_holes_have_disjoint_chain_supports() {
        let a = hole_chain(&vset![1, 2, 3], 2).unwrap();
        let b = hole_chain(&vset![4, 5, 6], 2).unwrap();
        for face in a.terms.keys() {
            assert!(!b.terms.contains_key(face));
        }
    }

    #[test]
    fn lower_bound_examples() {
        let report = verify_lower_bound(&hollow_triangle(), 3, 2, None).unwrap();
        assert!(report.holds);
        assert_eq!(report.betti, 1);
        assert_eq!(report.x as i64 - report.y as i64, 1);
    }

    #[test]
    fn euler_from_betti_examples() {
        let p = betti_numbers(&hollow_triangle(), 2).unwrap();
        assert_eq!(euler_from_betti(&p), 0);
        let p = betti_numbers(&tetra_boundary(), 2).unwrap();
        assert_eq!(euler_from_betti(&p), 2);
    }

    #[test]
    fn rank_modp_basics() {
        let mut m = FieldMatrix::zero(2, 2, 5).unwrap();
        m.set(0, 0, 1);
        m.set(0, 1, 2);
        m.set(1, 0, 2);
        m.set(1, 1, 4);
        assert_eq!(m.rank(), 1);
        m.set(1, 1, 3);
        assert_eq!(m.rank(), 2);
    }
}
