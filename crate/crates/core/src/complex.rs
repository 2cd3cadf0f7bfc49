//! Face-level data model: simplicial complexes as facet antichains, with
//! f-vectors, skeleta, links, Alexander duality and induced-copy counting.

use std::collections::HashSet;

use crate::combinat::{k_subsets, BinomTable};
use crate::error::{Error, Result};
use crate::VertexSet;

/// A simplicial complex on ground set `{1..n}`, stored as its facet
/// antichain. Immutable after construction.
///
/// Externally a complex is a downward-closed family of nonempty subsets.
/// Internally we also track whether the empty set belongs to the underlying
/// down-set: `down_closure` always includes it, so the distinction only
/// shows up at the degenerate bottom, where the *empty* complex (faces
/// `{∅}`) differs from the *void* complex (no faces at all). Alexander
/// duality is an involution only at this down-set level.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SimplicialComplex {
    n: usize,
    facets: Vec<VertexSet>,
    empty_face: bool,
}

/// Face counts by size: `f(i)` is the number of faces of cardinality `i`,
/// for `1 <= i <= n`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FVector {
    counts: Vec<u64>, // counts[i] = f_i, index 0 unused (external convention)
}

impl FVector {
    pub fn get(&self, i: usize) -> u64 {
        self.counts.get(i).copied().unwrap_or(0)
    }

    pub fn n(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total_faces(&self) -> u64 {
        self.counts[1..].iter().sum()
    }

    pub fn max_face_size(&self) -> usize {
        (1..self.counts.len())
            .rev()
            .find(|&i| self.counts[i] > 0)
            .unwrap_or(0)
    }

    /// `Σ_{i>=1} (−1)^{i−1} f_i`, the Euler characteristic of the
    /// geometric realization.
    pub fn euler_characteristic(&self) -> i64 {
        self.counts[1..]
            .iter()
            .enumerate()
            .map(|(idx, &f)| if idx % 2 == 0 { f as i64 } else { -(f as i64) })
            .sum()
    }
}

/// Builds the complex generated by the listed sets: faces are exactly the
/// nonempty subsets of the listed sets, facets the maximal listed sets.
pub fn down_closure(generators: &[VertexSet], n: usize) -> Result<SimplicialComplex> {
    for g in generators {
        if g.is_empty() {
            return Err(Error::EmptyGenerator);
        }
        if let Some(m) = g.max_vertex() {
            if m as usize > n {
                return Err(Error::VertexOutOfRange(m, n));
            }
        }
    }
    Ok(SimplicialComplex::from_generators_unchecked(generators, n))
}

impl SimplicialComplex {
    /// Antichain reduction of a generator list; callers must have validated
    /// ranges. The empty face is always present.
    pub(crate) fn from_generators_unchecked(generators: &[VertexSet], n: usize) -> Self {
        let mut sorted: Vec<VertexSet> = generators.to_vec();
        sorted.sort_by_key(|s| std::cmp::Reverse(s.len()));
        let mut facets: Vec<VertexSet> = Vec::with_capacity(sorted.len());
        let mut seen: HashSet<VertexSet> = HashSet::with_capacity(sorted.len());
        for g in sorted {
            if seen.contains(&g) {
                continue;
            }
            if facets.iter().any(|f| g.is_subset(f)) {
                continue;
            }
            seen.insert(g.clone());
            facets.push(g);
        }
        facets.sort();
        SimplicialComplex { n, facets, empty_face: true }
    }

    /// The facets of a pure-layer sample are already an antichain; this
    /// constructor skips the reduction but asserts it in debug builds.
    pub(crate) fn from_antichain_unchecked(mut facets: Vec<VertexSet>, n: usize) -> Self {
        facets.sort();
        debug_assert!(facets.windows(2).all(|w| w[0] != w[1]));
        SimplicialComplex { n, facets, empty_face: true }
    }

    /// The void complex: not even the empty set is a face.
    pub fn void(n: usize) -> Self {
        SimplicialComplex { n, facets: Vec::new(), empty_face: false }
    }

    /// The empty complex: `{∅}` internally, no external faces.
    pub fn empty(n: usize) -> Self {
        SimplicialComplex { n, facets: Vec::new(), empty_face: true }
    }

    pub fn full_simplex(n: usize) -> Self {
        let top = VertexSet::from_vertices(1..=n as u32);
        SimplicialComplex { n, facets: vec![top], empty_face: true }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn facets(&self) -> &[VertexSet] {
        &self.facets
    }

    pub fn is_void(&self) -> bool {
        self.facets.is_empty() && !self.empty_face
    }

    pub fn has_empty_face(&self) -> bool {
        self.empty_face
    }

    /// Size of the largest facet; 0 for the empty and void complexes.
    pub fn max_face_size(&self) -> usize {
        self.facets.iter().map(|f| f.len()).max().unwrap_or(0)
    }

    /// Dimension of the complex, `max_face_size - 1`; -1 for empty, and
    /// meaningless for void.
    pub fn dim(&self) -> i64 {
        self.max_face_size() as i64 - 1
    }

    /// Facet size if the complex is pure (all facets the same size).
    pub fn pure_facet_size(&self) -> Result<usize> {
        let mut sizes = self.facets.iter().map(|f| f.len());
        let first = sizes.next().unwrap_or(0);
        for s in sizes {
            if s != first {
                return Err(Error::NotPure(first, s));
            }
        }
        Ok(first)
    }

    /// Membership test for a nonempty candidate face.
    pub fn is_face(&self, x: &VertexSet) -> bool {
        if x.is_empty() {
            return self.empty_face;
        }
        self.facets.iter().any(|f| x.is_subset(f))
    }

    /// All nonempty faces. Exponential in facet sizes; guarded by `budget`
    /// (maximum number of faces materialized).
    pub fn faces_budgeted(&self, budget: usize) -> Result<Vec<VertexSet>> {
        let mut seen: HashSet<VertexSet> = HashSet::new();
        for facet in &self.facets {
            let verts = facet.vertices();
            if verts.len() >= 48 {
                return Err(Error::ResourceBudget(format!(
                    "facet of size {} too large for face enumeration",
                    verts.len()
                )));
            }
            for mask in 1u64..(1u64 << verts.len()) {
                let face: VertexSet = verts
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .map(|(_, &v)| v)
                    .collect();
                seen.insert(face);
                if seen.len() > budget {
                    return Err(Error::ResourceBudget(format!(
                        "face enumeration exceeded budget of {budget}"
                    )));
                }
            }
        }
        let mut out: Vec<VertexSet> = seen.into_iter().collect();
        out.sort();
        Ok(out)
    }

    pub fn faces(&self) -> Vec<VertexSet> {
        self.faces_budgeted(1 << 26).expect("face enumeration budget")
    }

    /// Faces of one fixed size, sorted.
    pub fn faces_of_size(&self, k: usize) -> Vec<VertexSet> {
        if k == 0 {
            return Vec::new();
        }
        let mut seen: HashSet<VertexSet> = HashSet::new();
        for facet in &self.facets {
            if facet.len() < k {
                continue;
            }
            for sub in crate::combinat::k_subsets_of(facet, k) {
                seen.insert(sub);
            }
        }
        let mut out: Vec<VertexSet> = seen.into_iter().collect();
        out.sort();
        out
    }

    /// Exact face counts by size. Deduplication per size uses a colex-rank
    /// bit table when `binom(n, i)` is small enough, and a hash set
    /// otherwise; facet families at desk scale stay well inside the fast
    /// path.
    pub fn f_vector(&self) -> FVector {
        let mut counts = vec![0u64; self.n + 1];
        for i in 1..=self.max_face_size() {
            counts[i] = self.count_faces_of_size(i);
        }
        FVector { counts }
    }

    /// Number of distinct faces of size exactly `i`.
    pub fn count_faces_of_size(&self, i: usize) -> u64 {
        if i == 0 || i > self.n {
            return 0;
        }
        const BIT_BUDGET: u64 = 1 << 28;
        let table = BinomTable::new(self.n, i);
        let total = table.get(self.n, i);
        if total <= BIT_BUDGET {
            self.count_faces_ranked(i, total, &table)
        } else {
            self.faces_of_size(i).len() as u64
        }
    }

    fn count_faces_ranked(&self, i: usize, total: u64, table: &BinomTable) -> u64 {
        let mut bits = vec![0u64; (total as usize + 63) / 64];
        let mut count = 0u64;
        let mut sub0: Vec<usize> = Vec::new();
        for facet in &self.facets {
            let s = facet.len();
            if s < i {
                continue;
            }
            let verts0: Vec<usize> = facet.iter().map(|v| v as usize - 1).collect();
            // iterate i-subsets of the facet's vertex list by index mask
            let mut idx: Vec<usize> = (0..i).collect();
            loop {
                sub0.clear();
                sub0.extend(idx.iter().map(|&j| verts0[j]));
                let r = table.rank(&sub0) as usize;
                if bits[r / 64] >> (r % 64) & 1 == 0 {
                    bits[r / 64] |= 1 << (r % 64);
                    count += 1;
                }
                // next index combination
                let mut pos = i;
                loop {
                    if pos == 0 {
                        break;
                    }
                    pos -= 1;
                    if idx[pos] < s - i + pos {
                        idx[pos] += 1;
                        for j in pos + 1..i {
                            idx[j] = idx[j - 1] + 1;
                        }
                        pos = usize::MAX;
                        break;
                    }
                }
                if pos != usize::MAX {
                    break;
                }
            }
        }
        count
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector().euler_characteristic()
    }

    /// True iff every subset of `[n]` of size at most `k` is a face. By
    /// down-closure this reduces to the single comparison
    /// `f_k = binom(n, k)`: a complete top layer forces every layer below
    /// it. (The layerwise equivalence is property-tested.)
    pub fn has_complete_skeleton(&self, k: usize) -> bool {
        if k == 0 {
            return true;
        }
        if k > self.n {
            return false;
        }
        let table = BinomTable::new(self.n, k);
        self.count_faces_of_size(k) == table.get(self.n, k)
    }

    /// The link `{y : x ∪ y ∈ Δ, x ∩ y = ∅}` as a complex on the ground set
    /// `[n]` (vertices of `x` simply never occur).
    pub fn link(&self, x: &VertexSet) -> Result<SimplicialComplex> {
        if !self.is_face(x) {
            return Err(Error::NotAFace(x.clone()));
        }
        if x.is_empty() {
            return Ok(self.clone());
        }
        let gens: Vec<VertexSet> = self
            .facets
            .iter()
            .filter(|f| x.is_subset(f))
            .map(|f| f.difference(x))
            .filter(|g| !g.is_empty())
            .collect();
        Ok(SimplicialComplex::from_generators_unchecked(&gens, self.n))
    }

    /// Alexander dual: `x` is a face of the dual iff `[n]∖x` is not a face
    /// of `self`, taken at the down-set level (empty set included) so that
    /// the map is an involution. Exponential in `n`; desk scale only.
    pub fn alexander_dual(&self) -> Result<SimplicialComplex> {
        if self.n > 24 {
            return Err(Error::ResourceBudget(format!(
                "alexander_dual enumerates all 2^{} subsets",
                self.n
            )));
        }
        let mut dual_faces: Vec<VertexSet> = Vec::new();
        let mut dual_empty = false;
        for sub in all_subsets(self.n) {
            let comp = sub.complement(self.n);
            let comp_in = if comp.is_empty() { self.empty_face } else { self.is_face(&comp) };
            if !comp_in {
                if sub.is_empty() {
                    dual_empty = true;
                } else {
                    dual_faces.push(sub);
                }
            }
        }
        if dual_faces.is_empty() {
            return Ok(if dual_empty {
                SimplicialComplex::empty(self.n)
            } else {
                SimplicialComplex::void(self.n)
            });
        }
        // maximal elements of the dual face family
        let mut c = SimplicialComplex::from_generators_unchecked(&dual_faces, self.n);
        c.empty_face = dual_empty;
        debug_assert!(c.empty_face, "a nonempty down-set contains the empty set");
        Ok(c)
    }

    /// Induced subcomplex on the vertex set `w`, relabeled to `{1..|w|}` by
    /// the ascending order of `w`.
    pub fn induced_on(&self, w: &VertexSet) -> SimplicialComplex {
        let verts = w.vertices();
        let relabel = |face: &VertexSet| -> VertexSet {
            face.iter()
                .map(|v| verts.iter().position(|&u| u == v).unwrap() as u32 + 1)
                .collect()
        };
        let gens: Vec<VertexSet> = self
            .facets
            .iter()
            .map(|f| f.intersection(w))
            .filter(|g| !g.is_empty())
            .map(|g| relabel(&g))
            .collect();
        SimplicialComplex::from_generators_unchecked(&gens, verts.len())
    }

    /// Number of `m`-subsets `W` of `[n]` whose induced subcomplex is
    /// simplicially isomorphic to `target` (which lives on `{1..m}`).
    /// Returns 0 when `m > n`.
    pub fn count_induced_copies(&self, target: &SimplicialComplex) -> u64 {
        let m = target.n();
        if m > self.n {
            return 0;
        }
        let target_f = target.f_vector();
        let target_faces: HashSet<VertexSet> = target.faces().into_iter().collect();
        let mut count = 0u64;
        for w in k_subsets(self.n, m) {
            let ind = self.induced_on(&w);
            if ind.f_vector() != target_f {
                continue;
            }
            if is_isomorphic(&ind, target, &target_faces) {
                count += 1;
            }
        }
        count
    }
}

/// All subsets of `{1..n}` including the empty set, in mask order.
pub fn all_subsets(n: usize) -> impl Iterator<Item = VertexSet> {
    assert!(n <= 30);
    (0u64..1 << n).map(move |mask| {
        (1..=n as u32).filter(|v| mask >> (v - 1) & 1 == 1).collect()
    })
}

/// Exhaustive bijection search over vertex maps, with a per-vertex
/// face-degree pruning pass. Both complexes live on `{1..m}`.
fn is_isomorphic(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
    b_faces: &HashSet<VertexSet>,
) -> bool {
    let m = a.n();
    debug_assert_eq!(m, b.n());
    let a_faces = a.faces();
    if a_faces.len() != b_faces.len() {
        return false;
    }
    // degree signature: for each vertex, number of faces of each size containing it
    let sig = |faces: &[VertexSet], m: usize| -> Vec<Vec<u64>> {
        let mut s = vec![vec![0u64; m + 1]; m + 1];
        for f in faces {
            for v in f.iter() {
                s[v as usize][f.len()] += 1;
            }
        }
        s
    };
    let sa = sig(&a_faces, m);
    let b_face_vec: Vec<VertexSet> = b_faces.iter().cloned().collect();
    let sb = sig(&b_face_vec, m);
    {
        let mut ka = sa[1..].to_vec();
        let mut kb = sb[1..].to_vec();
        ka.sort();
        kb.sort();
        if ka != kb {
            return false;
        }
    }
    // backtracking over images of vertices 1..m
    let mut image = vec![0u32; m + 1];
    let mut used = vec![false; m + 1];
    fn assign(
        v: usize,
        m: usize,
        sa: &[Vec<u64>],
        sb: &[Vec<u64>],
        image: &mut [u32],
        used: &mut [bool],
        a_faces: &[VertexSet],
        b_faces: &HashSet<VertexSet>,
    ) -> bool {
        if v > m {
            return a_faces.iter().all(|f| {
                let mapped: VertexSet = f.iter().map(|x| image[x as usize]).collect();
                b_faces.contains(&mapped)
            });
        }
        for u in 1..=m {
            if used[u] || sa[v] != sb[u] {
                continue;
            }
            image[v] = u as u32;
            used[u] = true;
            if assign(v + 1, m, sa, sb, image, used, a_faces, b_faces) {
                return true;
            }
            used[u] = false;
        }
        false
    }
    assign(1, m, &sa, &sb, &mut image, &mut used, &a_faces, b_faces)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vset;

    pub(crate) fn hollow_triangle() -> SimplicialComplex {
        down_closure(&[vset![1, 2], vset![1, 3], vset![2, 3]], 3).unwrap()
    }

    #[test]
    fn down_closure_examples() {
        let full = down_closure(&[vset![1, 2, 3]], 3).unwrap();
        assert_eq!(full.faces().len(), 7);
        assert_eq!(full.facets(), &[vset![1, 2, 3]]);

        let empty = down_closure(&[], 4).unwrap();
        assert_eq!(empty.faces().len(), 0);
        assert!(empty.has_empty_face());
        assert!(!empty.is_void());

        let c = down_closure(&[vset![1, 2], vset![2, 3], vset![2]], 3).unwrap();
        assert_eq!(c.facets(), &[vset![1, 2], vset![2, 3]]);
        assert_eq!(c.faces().len(), 5);
    }

    #[test]
    fn down_closure_rejects_bad_input() {
        assert!(down_closure(&[VertexSet::empty()], 3).is_err());
        assert!(down_closure(&[vset![1, 5]], 4).is_err());
    }

    #[test]
    fn f_vector_examples() {
        let full = SimplicialComplex::full_simplex(3);
        let f = full.f_vector();
        assert_eq!((f.get(1), f.get(2), f.get(3)), (3, 3, 1));

        let empty = SimplicialComplex::empty(4);
        assert_eq!(empty.f_vector().total_faces(), 0);

        let f = hollow_triangle().f_vector();
        assert_eq!((f.get(1), f.get(2), f.get(3)), (3, 3, 0));
    }

    #[test]
    fn euler_examples() {
        for n in 1..=6 {
            assert_eq!(SimplicialComplex::full_simplex(n).euler_characteristic(), 1);
        }
        assert_eq!(hollow_triangle().euler_characteristic(), 0);
        let sphere = down_closure(&crate::combinat::k_subsets(4, 3), 4).unwrap();
        assert_eq!(sphere.euler_characteristic(), 2);
    }

    #[test]
    fn skeleton_examples() {
        assert!(SimplicialComplex::full_simplex(4).has_complete_skeleton(4));
        assert!(hollow_triangle().has_complete_skeleton(2));
        assert!(!hollow_triangle().has_complete_skeleton(3));
        assert!(!SimplicialComplex::empty(1).has_complete_skeleton(1));
    }

    #[test]
    fn link_examples() {
        let full3 = SimplicialComplex::full_simplex(3);
        let lk = full3.link(&vset![1]).unwrap();
        assert_eq!(lk.facets(), &[vset![2, 3]]);

        let lk = hollow_triangle().link(&vset![1]).unwrap();
        assert_eq!(lk.facets(), &[vset![2], vset![3]]);

        let c = down_closure(&[vset![1, 2, 3], vset![1, 4, 5]], 5).unwrap();
        let lk = c.link(&vset![1]).unwrap();
        assert_eq!(lk.facets(), &[vset![2, 3], vset![4, 5]]);

        assert!(hollow_triangle().link(&vset![1, 2, 3]).is_err());
    }

    #[test]
    fn dual_boundary_case() {
        // all nonempty subsets of [3] except [3] itself
        let c = down_closure(&crate::combinat::k_subsets(3, 2), 3).unwrap();
        let d = c.alexander_dual().unwrap();
        assert_eq!(d.faces().len(), 0);
        assert!(d.has_empty_face());

        let full = SimplicialComplex::full_simplex(3);
        assert!(full.alexander_dual().unwrap().is_void());
    }

    #[test]
    fn dual_involution_on_hollow_triangle() {
        let c = hollow_triangle();
        assert_eq!(c.alexander_dual().unwrap().alexander_dual().unwrap(), c);
    }

    #[test]
    fn induced_copy_examples() {
        // K4 graph complex: all six edges of [4]
        let k4 = down_closure(&crate::combinat::k_subsets(4, 2), 4).unwrap();
        let tri = hollow_triangle();
        assert_eq!(k4.count_induced_copies(&tri), 4);

        let full4 = SimplicialComplex::full_simplex(4);
        assert_eq!(full4.count_induced_copies(&tri), 0);

        let c = down_closure(&[vset![1, 2], vset![1, 3], vset![2, 3], vset![4, 5]], 5).unwrap();
        let edge = down_closure(&[vset![1, 2]], 2).unwrap();
        assert_eq!(c.count_induced_copies(&edge), 4);
        // brute-force cross-check over all 2-subsets
        let mut brute = 0;
        for w in crate::combinat::k_subsets(5, 2) {
            let verts = w.vertices();
            if c.is_face(&vset![verts[0], verts[1]]) {
                brute += 1;
            }
        }
        assert_eq!(brute, 4);
    }

    #[test]
    fn count_induced_rejects_oversized_target() {
        let tri = hollow_triangle();
        let big = SimplicialComplex::full_simplex(5);
        assert_eq!(tri.count_induced_copies(&big), 0);
    }

    #[test]
    fn link_of_full_simplex_face_is_full_simplex() {
        let full = SimplicialComplex::full_simplex(5);
        for x in crate::combinat::k_subsets(5, 2) {
            let lk = full.link(&x).unwrap();
            assert_eq!(lk.facets().len(), 1);
            assert_eq!(lk.facets()[0].len(), 3);
        }
    }
}
