//! Shellability: the x-intersection-graph obstruction, exact budgeted
//! shelling search, h-vectors and the Reisner Cohen–Macaulay check.

use std::collections::HashSet;

use crate::combinat::{binomial_f64, k_subsets_of};
use crate::error::{Error, Result};
use crate::generators::decompose_bundles;
use crate::homology::reduced_betti_numbers;
use crate::{SimplicialComplex, VertexSet};

/// The graph on facets containing a fixed (t−2)-set `x`, with edges
/// between facets intersecting in t−1 elements.
#[derive(Clone, Debug)]
pub struct IntersectionGraph {
    pub base: VertexSet,
    pub facets: Vec<VertexSet>,
    pub edges: Vec<(usize, usize)>,
}

impl IntersectionGraph {
    /// Connectivity; a graph with no vertices counts as connected.
    pub fn is_connected(&self) -> bool {
        if self.facets.len() <= 1 {
            return true;
        }
        let mut adj = vec![Vec::new(); self.facets.len()];
        for &(a, b) in &self.edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        let mut seen = vec![false; self.facets.len()];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    stack.push(w);
                }
            }
        }
        count == self.facets.len()
    }
}

/// Builds the x-intersection graph of a pure complex with facet size t,
/// for a base set of size t−2.
pub fn x_intersection_graph(
    complex: &SimplicialComplex,
    x: &VertexSet,
) -> Result<IntersectionGraph> {
    let t = complex.pure_facet_size()?;
    if x.len() + 2 != t {
        return Err(Error::InvalidParameter(format!(
            "base set size {} must be facet size {t} minus 2",
            x.len()
        )));
    }
    let facets: Vec<VertexSet> = complex
        .facets()
        .iter()
        .filter(|f| x.is_subset(f))
        .cloned()
        .collect();
    let mut edges = Vec::new();
    for i in 0..facets.len() {
        for j in i + 1..facets.len() {
            if facets[i].intersection_len(&facets[j]) == t - 1 {
                edges.push((i, j));
            }
        }
    }
    Ok(IntersectionGraph { base: x.clone(), facets, edges })
}

/// Scans all (t−2)-subsets of facets for a disconnected x-intersection
/// graph. A returned certificate is a sound not-shellable proof; `None`
/// proves nothing.
pub fn shelling_obstruction(complex: &SimplicialComplex) -> Result<Option<VertexSet>> {
    let t = complex.pure_facet_size()?;
    if t < 2 || complex.facets().len() < 2 {
        return Ok(None);
    }
    let mut bases: HashSet<VertexSet> = HashSet::new();
    for f in complex.facets() {
        for sub in k_subsets_of(f, t - 2) {
            bases.insert(sub);
        }
    }
    let mut ordered: Vec<VertexSet> = bases.into_iter().collect();
    ordered.sort();
    for x in ordered {
        let g = x_intersection_graph(complex, &x)?;
        if !g.is_connected() {
            return Ok(Some(x));
        }
    }
    Ok(None)
}

/// Verdict of the exact shelling search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShellingVerdict {
    Shellable,
    NotShellable,
    BudgetExceeded,
}

#[derive(Clone, Debug)]
pub struct ShellingResult {
    pub verdict: ShellingVerdict,
    /// A facet order passing the shelling condition, when shellable.
    pub witness: Option<Vec<VertexSet>>,
    pub nodes_explored: u64,
}

/// The shelling condition for placing `next` after `placed`: the meet
/// with the earlier facets must be a nonempty union of codimension-1
/// faces of `next`, i.e. some earlier intersection has codimension 1 and
/// every earlier intersection extends to one.
fn can_place(facets: &[VertexSet], placed: &[usize], next: usize) -> bool {
    if placed.is_empty() {
        return true;
    }
    let fj = &facets[next];
    let mut met_codim_one = false;
    for &i in placed {
        let inter = facets[i].intersection(fj);
        if inter.len() == fj.len() - 1 {
            met_codim_one = true;
        }
        if inter.is_empty() {
            continue;
        }
        let ok = placed.iter().any(|&k| {
            let ik = facets[k].intersection(fj);
            ik.len() == fj.len() - 1 && inter.is_subset(&ik)
        });
        if !ok {
            return false;
        }
    }
    met_codim_one
}

/// Independent re-check of a complete facet order against the shelling
/// condition; used to validate returned witnesses.
pub fn verify_shelling(order: &[VertexSet]) -> bool {
    for j in 1..order.len() {
        let mut met_codim_one = false;
        for i in 0..j {
            let inter = order[i].intersection(&order[j]);
            if inter.len() == order[j].len() - 1 {
                met_codim_one = true;
            }
            if inter.is_empty() {
                continue;
            }
            let ok = (0..j).any(|k| {
                let ik = order[k].intersection(&order[j]);
                ik.len() == order[j].len() - 1 && inter.is_subset(&ik)
            });
            if !ok {
                return false;
            }
        }
        if !met_codim_one {
            return false;
        }
    }
    true
}

/// Exact backtracking shelling search over facet orderings, memoized on
/// the placed-facet set (whether an extension exists depends only on the
/// set, not the order). Accepts non-pure complexes; the verdict is sound
/// and complete within the node budget.
pub fn is_shellable(complex: &SimplicialComplex, node_budget: u64) -> ShellingResult {
    let facets = complex.facets();
    let m = facets.len();
    if m <= 1 {
        return ShellingResult {
            verdict: ShellingVerdict::Shellable,
            witness: Some(facets.to_vec()),
            nodes_explored: 1,
        };
    }
    if m > 63 {
        return ShellingResult {
            verdict: ShellingVerdict::BudgetExceeded,
            witness: None,
            nodes_explored: 0,
        };
    }
    struct Search<'a> {
        facets: &'a [VertexSet],
        dead: HashSet<u64>,
        nodes: u64,
        budget: u64,
    }
    impl Search<'_> {
        fn dfs(&mut self, mask: u64, placed: &mut Vec<usize>) -> Option<bool> {
            self.nodes += 1;
            if self.nodes > self.budget {
                return None;
            }
            if placed.len() == self.facets.len() {
                return Some(true);
            }
            if self.dead.contains(&mask) {
                return Some(false);
            }
            for j in 0..self.facets.len() {
                if mask >> j & 1 == 1 {
                    continue;
                }
                if !can_place(self.facets, placed, j) {
                    continue;
                }
                placed.push(j);
                let res = self.dfs(mask | 1 << j, placed)?;
                placed.pop();
                if res {
                    return Some(true);
                }
            }
            self.dead.insert(mask);
            Some(false)
        }
    }
    let mut search = Search { facets, dead: HashSet::new(), nodes: 0, budget: node_budget };
    let mut placed = Vec::with_capacity(m);
    match search.dfs(0, &mut placed) {
        None => ShellingResult {
            verdict: ShellingVerdict::BudgetExceeded,
            witness: None,
            nodes_explored: search.nodes,
        },
        Some(true) => {
            // rebuild a witness order deterministically
            let witness = rebuild_witness(facets);
            debug_assert!(witness.as_deref().is_some_and(verify_shelling));
            ShellingResult {
                verdict: ShellingVerdict::Shellable,
                witness,
                nodes_explored: search.nodes,
            }
        }
        Some(false) => ShellingResult {
            verdict: ShellingVerdict::NotShellable,
            witness: None,
            nodes_explored: search.nodes,
        },
    }
}

fn rebuild_witness(facets: &[VertexSet]) -> Option<Vec<VertexSet>> {
    fn dfs(facets: &[VertexSet], mask: u64, placed: &mut Vec<usize>) -> bool {
        if placed.len() == facets.len() {
            return true;
        }
        for j in 0..facets.len() {
            if mask >> j & 1 == 1 || !can_place(facets, placed, j) {
                continue;
            }
            placed.push(j);
            if dfs(facets, mask | 1 << j, placed) {
                return true;
            }
            placed.pop();
        }
        false
    }
    let mut placed = Vec::new();
    dfs(facets, 0, &mut placed)
        .then(|| placed.iter().map(|&i| facets[i].clone()).collect())
}

/// The h-vector of a pure complex with facet size t:
/// `h_k = Σ_{i=0}^k (−1)^{k−i} binom(t−i, k−i) f_i`, with `f_0 = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HVector {
    pub t: usize,
    pub h: Vec<i128>,
}

impl HVector {
    pub fn get(&self, k: usize) -> i128 {
        self.h.get(k).copied().unwrap_or(0)
    }

    pub fn h_top(&self) -> i128 {
        self.h[self.t]
    }

    pub fn sum(&self) -> i128 {
        self.h.iter().sum()
    }

    pub fn nonnegative(&self) -> bool {
        self.h.iter().all(|&v| v >= 0)
    }
}

pub fn h_vector(complex: &SimplicialComplex) -> Result<HVector> {
    let t = complex.pure_facet_size()?;
    let fvec = complex.f_vector();
    let mut f = vec![0i128; t + 1];
    f[0] = 1; // empty face
    for (i, slot) in f.iter_mut().enumerate().skip(1) {
        *slot = fvec.get(i) as i128;
    }
    let binom = |n: i128, k: i128| -> i128 {
        if k < 0 || k > n {
            0
        } else {
            binomial_f64(n as u64, k as u64).round() as i128
        }
    };
    let mut h = vec![0i128; t + 1];
    for k in 0..=t {
        let mut acc = 0i128;
        for i in 0..=k {
            let term = binom((t - i) as i128, (k - i) as i128) * f[i];
            acc += if (k - i) % 2 == 0 { term } else { -term };
        }
        h[k] = acc;
    }
    // cross-check: h_t = (−1)^t Σ_{i=0}^t (−1)^i f_i
    let alt: i128 = (0..=t)
        .map(|i| if i % 2 == 0 { f[i] } else { -f[i] })
        .sum();
    let alt = if t % 2 == 0 { alt } else { -alt };
    debug_assert_eq!(h[t], alt, "two h_t routes disagree");
    Ok(HVector { t, h })
}

/// Top h-entry alone, skipping the rest of the transform; used by scans
/// on large pure samples.
pub fn h_top(complex: &SimplicialComplex) -> Result<i128> {
    let t = complex.pure_facet_size()?;
    let fvec = complex.f_vector();
    let mut acc = 1i128; // f_0 with sign (+1)
    for i in 1..=t {
        let term = fvec.get(i) as i128;
        acc += if i % 2 == 0 { term } else { -term };
    }
    Ok(if t % 2 == 0 { acc } else { -acc })
}

/// Reisner criterion: reduced homology of every link (the empty face
/// included) vanishes below the link's dimension. Desk scale only.
#[derive(Clone, Debug)]
pub struct CmReport {
    pub cm: bool,
    /// First failing (face, homology degree), if any.
    pub failure: Option<(VertexSet, usize)>,
}

pub fn is_cohen_macaulay(complex: &SimplicialComplex, q: u32) -> Result<CmReport> {
    let mut faces = vec![VertexSet::empty()];
    faces.extend(complex.faces_budgeted(1 << 20)?);
    for x in faces {
        let link = complex.link(&x)?;
        let top = link.max_face_size();
        if top == 0 {
            continue; // link dimension -1 or 0 vertices: nothing below
        }
        let dim = top - 1;
        if dim == 0 {
            continue;
        }
        let reduced = reduced_betti_numbers(&link, q)?;
        for i in 0..dim {
            if reduced.get(i) != 0 {
                return Ok(CmReport { cm: false, failure: Some((x, i)) });
            }
        }
    }
    Ok(CmReport { cm: true, failure: None })
}

/// The uniform-model obstruction: two or more bundles among the facets of
/// size `layer` force non-shellability.
pub fn layer_bundle_obstruction(complex: &SimplicialComplex, layer: usize) -> Result<bool> {
    let layer_facets: Vec<VertexSet> = complex
        .facets()
        .iter()
        .filter(|f| f.len() == layer)
        .cloned()
        .collect();
    Ok(decompose_bundles(&layer_facets)?.len() >= 2)
}

/// Enumerates all pure complexes with facet size `t`, at most
/// `max_facets` facets, on ground set `{1..n}`; the exhaustive corpus for
/// soundness cross-checks.
pub fn pure_complex_corpus(n: usize, t: usize, max_facets: usize) -> Vec<SimplicialComplex> {
    let all = crate::combinat::k_subsets(n, t);
    let mut out = Vec::new();
    let mut choose = |count: usize| {
        let mut idx: Vec<usize> = (0..count).collect();
        loop {
            let facets: Vec<VertexSet> = idx.iter().map(|&i| all[i].clone()).collect();
            out.push(SimplicialComplex::from_antichain_unchecked(facets, n));
            let mut pos = count;
            loop {
                if pos == 0 {
                    return;
                }
                pos -= 1;
                if idx[pos] < all.len() - count + pos {
                    idx[pos] += 1;
                    for j in pos + 1..count {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
                if pos == 0 {
                    return;
                }
            }
        }
    };
    for count in 1..=max_facets.min(all.len()) {
        choose(count);
    }
    out
}

#[derive(Clone, Debug)]
pub struct ShellingCheckBudgets {
    pub node_budget: u64,
}

impl Default for ShellingCheckBudgets {
    fn default() -> Self {
        ShellingCheckBudgets { node_budget: 5_000_000 }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::down_closure;
    use crate::vset;

    fn tetra_boundary() -> SimplicialComplex {
        down_closure(&crate::combinat::k_subsets(4, 3), 4).unwrap()
    }

    #[test]
    fn intersection_graph_examples() {
        let c = down_closure(&[vset![1, 2, 3], vset![1, 2, 4]], 4).unwrap();
        let g = x_intersection_graph(&c, &vset![1]).unwrap();
        assert_eq!(g.facets.len(), 2);
        assert_eq!(g.edges.len(), 1);
        assert!(g.is_connected());

        let c = down_closure(&[vset![1, 2, 3], vset![1, 4, 5]], 5).unwrap();
        let g = x_intersection_graph(&c, &vset![1]).unwrap();
        assert_eq!(g.facets.len(), 2);
        assert!(g.edges.is_empty());
        assert!(!g.is_connected());

        let c = down_closure(&[vset![1, 2, 3]], 3).unwrap();
        let g = x_intersection_graph(&c, &vset![2]).unwrap();
        assert_eq!(g.facets.len(), 1);
        assert!(g.is_connected());
    }

    #[test]
    fn non_pure_rejected_by_graph() {
        let c = down_closure(&[vset![1, 2, 3], vset![4, 5]], 5).unwrap();
        assert!(x_intersection_graph(&c, &vset![1]).is_err());
    }

    #[test]
    fn obstruction_examples() {
        let c = down_closure(&[vset![1, 2, 3], vset![1, 4, 5]], 5).unwrap();
        assert_eq!(shelling_obstruction(&c).unwrap(), Some(vset![1]));

        assert!(shelling_obstruction(&SimplicialComplex::full_simplex(4)).unwrap().is_none());
        assert!(shelling_obstruction(&tetra_boundary()).unwrap().is_none());
    }

    #[test]
    fn shellable_examples() {
        let r = is_shellable(&SimplicialComplex::full_simplex(4), 1000);
        assert_eq!(r.verdict, ShellingVerdict::Shellable);

        let r = is_shellable(&tetra_boundary(), 100_000);
        assert_eq!(r.verdict, ShellingVerdict::Shellable);
        assert!(verify_shelling(&r.witness.unwrap()));

        let c = down_closure(&[vset![1, 2, 3], vset![1, 4, 5]], 5).unwrap();
        let r = is_shellable(&c, 100_000);
        assert_eq!(r.verdict, ShellingVerdict::NotShellable);

        // disjoint facets never meet in a codimension-1 face
        let c = down_closure(&[vset![1, 2, 3], vset![4, 5, 6]], 6).unwrap();
        let r = is_shellable(&c, 100_000);
        assert_eq!(r.verdict, ShellingVerdict::NotShellable);
        assert!(!verify_shelling(&[vset![1, 2, 3], vset![4, 5, 6]]));
    }

    #[test]
    fn budget_exceeded_is_reported() {
        let c = tetra_boundary();
        let r = is_shellable(&c, 1);
        assert_eq!(r.verdict, ShellingVerdict::BudgetExceeded);
    }

    #[test]
    fn h_vector_examples() {
        let tri = down_closure(&[vset![1, 2], vset![1, 3], vset![2, 3]], 3).unwrap();
        assert_eq!(h_vector(&tri).unwrap().h, vec![1, 1, 1]);

        for t in 1..=5 {
            let full = SimplicialComplex::full_simplex(t);
            let h = h_vector(&full).unwrap();
            assert_eq!(h.h[0], 1);
            assert!(h.h[1..].iter().all(|&v| v == 0));
            assert_eq!(h.sum(), 1);
        }

        let h = h_vector(&tetra_boundary()).unwrap();
        assert_eq!(h.h, vec![1, 1, 1, 1]);
        assert_eq!(h.sum(), 4);
        assert_eq!(h.h_top(), h_top(&tetra_boundary()).unwrap());
    }

    #[test]
    fn h_vector_rejects_non_pure() {
        let c = down_closure(&[vset![1, 2, 3], vset![4, 5]], 5).unwrap();
        assert!(h_vector(&c).is_err());
    }

    #[test]
    fn cm_examples() {
        assert!(is_cohen_macaulay(&SimplicialComplex::full_simplex(4), 2).unwrap().cm);

        let c = down_closure(&[vset![1, 2, 3], vset![1, 4, 5]], 5).unwrap();
        let report = is_cohen_macaulay(&c, 2).unwrap();
        assert!(!report.cm);
        let (face, degree) = report.failure.unwrap();
        assert_eq!((face, degree), (vset![1], 0));

        let tri = down_closure(&[vset![1, 2], vset![1, 3], vset![2, 3]], 3).unwrap();
        assert!(is_cohen_macaulay(&tri, 2).unwrap().cm);
    }

    #[test]
    fn bundle_obstruction() {
        let c = down_closure(&[vset![1, 2, 3, 4], vset![5, 6, 7, 8], vset![1, 2, 5]], 8).unwrap();
        assert!(layer_bundle_obstruction(&c, 4).unwrap());
        let c = down_closure(&[vset![1, 2, 3, 4], vset![1, 2, 3, 5]], 5).unwrap();
        assert!(!layer_bundle_obstruction(&c, 4).unwrap());
    }

    #[test]
    fn corpus_counts() {
        // choose up to 2 of the 4 triples of [4]: 4 + 6 complexes
        assert_eq!(pure_complex_corpus(4, 3, 2).len(), 10);
    }
}
