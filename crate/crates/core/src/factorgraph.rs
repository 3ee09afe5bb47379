//! Truncations of the free factor graph.
//!
//! The truncation with parameters `(N, k, L)` has one vertex for each proper
//! free factor of rank at most `k` admitting a basis of total length at most
//! `L`, and an edge for every proper containment. Distances measured in a
//! truncation are upper bounds for distances in the full graph.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aut::check_rank;
use crate::error::{Error, Result};
use crate::subgroups::{CoreGraph, FactorKey};
use crate::whitehead::is_partial_basis;
use crate::word::{shortlex_cmp_lists, Word};

/// Default cap on the number of vertices of a truncation.
pub const DEFAULT_VERTEX_CAP: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorVertex {
    pub key: FactorKey,
    pub rank: usize,
    /// Shortlex-least basis found by the enumeration.
    pub basis: Vec<Word>,
    pub graph: CoreGraph,
}

impl FactorVertex {
    /// The vertex for the subgroup generated by `basis`, which must be a
    /// partial basis of `F_N`.
    pub fn from_basis(rank_n: usize, basis: &[Word]) -> Result<FactorVertex> {
        if basis.is_empty() || !is_partial_basis(rank_n, basis)? {
            return Err(Error::NotABasis(rank_n));
        }
        let graph = CoreGraph::fold(rank_n, basis)?;
        Ok(FactorVertex { key: graph.key().clone(), rank: basis.len(), basis: basis.to_vec(), graph })
    }

    /// `self ⊊ other`.
    pub fn properly_contained_in(&self, other: &FactorVertex) -> bool {
        self.rank < other.rank && self.basis.iter().all(|w| other.graph.member(w))
    }

    pub fn adjacent(&self, other: &FactorVertex) -> bool {
        self.properly_contained_in(other) || other.properly_contained_in(self)
    }

    pub fn label(&self) -> String {
        let b: Vec<String> = self.basis.iter().map(Word::to_string).collect();
        format!("<{}>", b.join(","))
    }
}

/// Whether `<a, b>` is a free factor of rank `rank(a) + rank(b)`.
pub fn antipodal(rank_n: usize, a: &FactorVertex, b: &FactorVertex) -> Result<bool> {
    if a.rank + b.rank > rank_n {
        return Ok(false);
    }
    let mut all = a.basis.clone();
    all.extend(b.basis.iter().cloned());
    is_partial_basis(rank_n, &all)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    pub rank: usize,
    pub k: usize,
    pub len: usize,
}

#[derive(Debug, Clone)]
pub struct FactorGraph {
    params: Params,
    vertices: Vec<FactorVertex>,
    adjacency: Vec<Vec<usize>>,
    index: HashMap<FactorKey, usize>,
}

/// Rank-1 vertices `<u>` with `u` primitive and `|u| <= len`.
pub fn enumerate_primitives(rank: usize, len: usize) -> Result<Vec<FactorVertex>> {
    Ok(enumerate_factors(rank, 1, len)?.vertices)
}

/// The truncation `(rank, k, len)`.
pub fn enumerate_factors(rank: usize, k: usize, len: usize) -> Result<FactorGraph> {
    enumerate_factors_capped(rank, k, len, DEFAULT_VERTEX_CAP)
}

/// Canonical candidate tuples: each entry shortlex-below its inverse,
/// entries strictly increasing, ordered by total length then shortlex.
fn candidate_tuples(rank: usize, r: usize, len: usize) -> Vec<Vec<Word>> {
    let words: Vec<Word> = Word::all_up_to(rank, len.saturating_sub(r - 1))
        .into_iter()
        .filter(|w| !w.is_empty() && w.shortlex_cmp(&w.inverse()).is_lt())
        .collect();
    let mut out = Vec::new();
    let mut stack: Vec<usize> = Vec::new();
    fn go(words: &[Word], r: usize, budget: usize, start: usize, stack: &mut Vec<usize>, out: &mut Vec<Vec<Word>>) {
        if stack.len() == r {
            out.push(stack.iter().map(|&i| words[i].clone()).collect());
            return;
        }
        for i in start..words.len() {
            let l = words[i].len();
            if l + (r - stack.len() - 1) > budget {
                continue;
            }
            stack.push(i);
            go(words, r, budget - l, i + 1, stack, out);
            stack.pop();
        }
    }
    go(&words, r, len, 0, &mut stack, &mut out);
    out.sort_by(|a, b| {
        let la: usize = a.iter().map(Word::len).sum();
        let lb: usize = b.iter().map(Word::len).sum();
        la.cmp(&lb).then_with(|| shortlex_cmp_lists(a, b))
    });
    out
}

pub fn enumerate_factors_capped(rank: usize, k: usize, len: usize, cap: usize) -> Result<FactorGraph> {
    check_rank(rank)?;
    if k == 0 || k >= rank {
        return Err(Error::KOutOfRange { k, rank });
    }
    let mut vertices: Vec<FactorVertex> = Vec::new();
    for r in 1..=k {
        if r > len {
            break;
        }
        let tuples = candidate_tuples(rank, r, len);
        let folded: Vec<Option<CoreGraph>> = tuples
            .par_iter()
            .map(|t| CoreGraph::fold(rank, t).ok().filter(|g| g.rank() == r))
            .collect();
        // first tuple per key, in candidate order
        let mut first: BTreeMap<usize, (Vec<Word>, CoreGraph)> = BTreeMap::new();
        let mut seen: HashMap<FactorKey, ()> = HashMap::new();
        for (i, g) in folded.into_iter().enumerate() {
            if let Some(g) = g {
                if seen.insert(g.key().clone(), ()).is_none() {
                    first.insert(i, (tuples[i].clone(), g));
                }
            }
        }
        let verdicts: Vec<Result<bool>> = first.par_iter().map(|(_, (t, _))| is_partial_basis(rank, t)).collect();
        for ((_, (basis, graph)), verdict) in first.into_iter().zip(verdicts) {
            if verdict? {
                vertices.push(FactorVertex { key: graph.key().clone(), rank: r, basis, graph });
                if vertices.len() > cap {
                    return Err(Error::BudgetExceeded { context: "free factor enumeration", budget: cap });
                }
            }
        }
    }
    Ok(FactorGraph::from_vertices(Params { rank, k, len }, vertices))
}

impl FactorGraph {
    /// Builds the containment graph on the given vertices, sorted by rank
    /// then basis.
    pub fn from_vertices(params: Params, mut vertices: Vec<FactorVertex>) -> FactorGraph {
        vertices.sort_by(|a, b| a.rank.cmp(&b.rank).then_with(|| shortlex_cmp_lists(&a.basis, &b.basis)));
        let n = vertices.len();
        let rows: Vec<Vec<usize>> = (0..n)
            .into_par_iter()
            .map(|i| (0..n).filter(|&j| j != i && vertices[i].adjacent(&vertices[j])).collect())
            .collect();
        let index = vertices.iter().enumerate().map(|(i, v)| (v.key.clone(), i)).collect();
        FactorGraph { params, vertices, adjacency: rows, index }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn vertices(&self) -> &[FactorVertex] {
        &self.vertices
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }

    /// Edges `(i, j)` with `i < j`, sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for (i, row) in self.adjacency.iter().enumerate() {
            e.extend(row.iter().filter(|&&j| j > i).map(|&j| (i, j)));
        }
        e
    }

    pub fn index_of(&self, key: &FactorKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Index of the factor generated by `basis`, if present.
    pub fn find(&self, basis: &[Word]) -> Result<usize> {
        let g = CoreGraph::fold(self.params.rank, basis)?;
        self.index_of(g.key()).ok_or(Error::VertexAbsent)
    }

    /// Shortest-path length inside the truncation (an upper bound for the
    /// full graph); `None` when unreachable.
    pub fn distance(&self, a: usize, b: usize) -> Result<Option<usize>> {
        let n = self.vertices.len();
        if a >= n || b >= n {
            return Err(Error::VertexAbsent);
        }
        let mut dist = vec![usize::MAX; n];
        dist[a] = 0;
        let mut queue = VecDeque::from([a]);
        while let Some(v) = queue.pop_front() {
            if v == b {
                return Ok(Some(dist[v]));
            }
            for &w in &self.adjacency[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        Ok(None)
    }

    /// The full subgraph spanned by the neighbours of `v`.
    pub fn link(&self, v: usize) -> Result<FactorGraph> {
        if v >= self.vertices.len() {
            return Err(Error::VertexAbsent);
        }
        let verts = self.adjacency[v].iter().map(|&i| self.vertices[i].clone()).collect();
        Ok(FactorGraph::from_vertices(self.params, verts))
    }

    pub fn antipodal(&self, a: usize, b: usize) -> Result<bool> {
        antipodal(self.params.rank, &self.vertices[a], &self.vertices[b])
    }

    /// Distinct rank-2 pairs whose intersection has rank above 1.
    pub fn noncyclic_intersections(&self) -> Result<Vec<(usize, usize)>> {
        let twos: Vec<usize> = (0..self.vertices.len()).filter(|&i| self.vertices[i].rank == 2).collect();
        let pairs: Vec<(usize, usize)> =
            twos.iter().enumerate().flat_map(|(n, &i)| twos[n + 1..].iter().map(move |&j| (i, j))).collect();
        let bad: Vec<Result<Option<(usize, usize)>>> = pairs
            .par_iter()
            .map(|&(i, j)| {
                let r = self.vertices[i].graph.intersect(&self.vertices[j].graph)?.rank();
                Ok((r > 1).then_some((i, j)))
            })
            .collect();
        bad.into_iter().filter_map(|r| r.transpose()).collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "params": self.params,
            "vertices": self.vertices.iter().map(|v| serde_json::json!({
                "key": v.key.digest,
                "rank": v.rank,
                "basis": v.basis,
            })).collect::<Vec<_>>(),
            "edges": self.edges().into_iter().map(|(i, j)| [i, j]).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self) -> String {
        const COLORS: [&str; 6] = ["black", "red", "blue", "darkgreen", "orange", "purple"];
        let mut s = String::from("graph F {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let color = COLORS[v.rank.min(COLORS.len() - 1)];
            s.push_str(&format!("  v{i} [label=\"{}\", color={color}];\n", v.label()));
        }
        for (i, j) in self.edges() {
            s.push_str(&format!("  v{i} -- v{j};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// One unresolved instance of the distance check around an antipodal pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TruncationShortfall {
    pub a: String,
    pub b: String,
    pub c: String,
    pub note: &'static str,
}

/// For each rank-2 vertex `A` of `small` antipodal to a rank-1 vertex `C`,
/// checks that every `B` in the link of `A` is within distance 2 of `C` in
/// `large`. Pairs that cannot be confirmed are returned as shortfalls of the
/// truncation rather than counterexamples.
pub fn antipodal_link_distances(small: &FactorGraph, large: &FactorGraph) -> Result<(usize, Vec<TruncationShortfall>)> {
    let n = small.params.rank;
    let mut checked = 0;
    let mut short = Vec::new();
    for (ai, a) in small.vertices.iter().enumerate().filter(|(_, v)| v.rank == 2) {
        for c in small.vertices.iter().filter(|v| v.rank == 1) {
            if !antipodal(n, a, c)? {
                continue;
            }
            for &bi in small.neighbors(ai) {
                let b = &small.vertices[bi];
                checked += 1;
                let d = match (large.index_of(&b.key), large.index_of(&c.key)) {
                    (Some(x), Some(y)) => large.distance(x, y)?,
                    _ => None,
                };
                if !d.is_some_and(|d| d <= 2) {
                    short.push(TruncationShortfall { a: a.label(), b: b.label(), c: c.label(), note: "insufficient truncation" });
                }
            }
        }
    }
    Ok((checked, short))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn ws(s: &str) -> Vec<Word> {
        Word::parse_list(s).unwrap()
    }

    #[test]
    fn primitives_rank_two() {
        let p = enumerate_primitives(2, 1).unwrap();
        assert_eq!(p.len(), 2);
        let p = enumerate_primitives(2, 2).unwrap();
        let keys: Vec<&FactorKey> = p.iter().map(|v| &v.key).collect();
        for u in ["ab", "aB"] {
            assert!(keys.contains(&CoreGraph::fold(2, &[w(u)]).unwrap().key()));
        }
        assert!(!keys.contains(&CoreGraph::fold(2, &[w("aa")]).unwrap().key()));
        // <x1>, <x2>, <ab>, <aB>, <ba>, <bA>
        assert_eq!(p.len(), 6);
    }

    #[test]
    fn primitive_count_matches_oracle() {
        let lib = enumerate_primitives(3, 3).unwrap();
        let oracle = crate::oracle::primitives_up_to(3, 3, crate::oracle::DEFAULT_SLACK);
        let mut keys: Vec<FactorKey> = oracle.iter().map(|u| CoreGraph::fold(3, std::slice::from_ref(u)).unwrap().key().clone()).collect();
        keys.sort();
        keys.dedup();
        assert_eq!(lib.len(), keys.len());
        // 3 letters, 12 classes of length 2, and the 72 length-3 classes other than cubes
        assert_eq!(lib.len(), 87);
    }

    #[test]
    fn standard_hexagon_in_small_truncation() {
        let g = enumerate_factors(3, 2, 2).unwrap();
        for b in ["a", "b", "c", "a,b", "a,c", "b,c"] {
            g.find(&ws(b)).unwrap();
        }
        let ab = g.find(&ws("a,b")).unwrap();
        let a = g.find(&ws("a")).unwrap();
        let c = g.find(&ws("c")).unwrap();
        assert_eq!(g.distance(a, ab).unwrap(), Some(1));
        assert_eq!(g.distance(a, c).unwrap(), Some(2));
        assert!(g.antipodal(a, g.find(&ws("b,c")).unwrap()).unwrap());
        assert!(!g.antipodal(a, ab).unwrap());
    }

    #[test]
    fn rank_one_truncation_is_edgeless() {
        let g = enumerate_factors(2, 1, 3).unwrap();
        assert!(g.edges().is_empty());
        assert!(g.vertex_count() > 2);
    }

    #[test]
    fn links() {
        let g = enumerate_factors(3, 2, 3).unwrap();
        let ab = g.find(&ws("a,b")).unwrap();
        let link = g.link(ab).unwrap();
        for b in ["a", "b", "ab"] {
            link.find(&ws(b)).unwrap();
        }
        let a = g.find(&ws("a")).unwrap();
        assert!(g.link(a).unwrap().vertices().iter().all(|v| v.rank == 2));
        let ac = g.find(&ws("a,c")).unwrap();
        let keys = |i| g.link(i).unwrap().vertices().iter().map(|v| v.key.clone()).collect::<Vec<_>>();
        assert_ne!(keys(ab), keys(ac));
        assert!(matches!(g.distance(0, 10_000), Err(Error::VertexAbsent)));
    }

    #[test]
    fn antipodal_pair_at_distance_three() {
        // ranks alternate along paths, so a rank-1 and a rank-2 vertex are at odd distance
        let g = enumerate_factors(3, 2, 2).unwrap();
        let c = g.find(&ws("c")).unwrap();
        let ab = g.find(&ws("a,b")).unwrap();
        assert!(g.antipodal(c, ab).unwrap());
        assert_eq!(g.distance(c, ab).unwrap(), Some(3));
    }

    #[test]
    fn mixed_antipodal_example() {
        let n = 3;
        let a = FactorVertex::from_basis(n, &ws("ab")).unwrap();
        let b = FactorVertex::from_basis(n, &ws("bc")).unwrap();
        assert!(antipodal(n, &a, &b).unwrap());
        let c = FactorVertex::from_basis(n, &ws("b,c")).unwrap();
        assert!(antipodal(n, &a, &c).unwrap());
        assert!(FactorVertex::from_basis(n, &ws("aa")).is_err());
    }

    #[test]
    fn permutation_invariance() {
        use crate::aut::FreeAut;
        let g = enumerate_factors(3, 2, 3).unwrap();
        let sigma = FreeAut::transposition(3, 1, 3);
        for v in g.vertices() {
            let img = sigma.apply_all(&v.basis);
            g.find(&img).unwrap();
        }
    }

    #[test]
    fn cyclic_intersections_small() {
        let g = enumerate_factors(3, 2, 3).unwrap();
        assert!(g.noncyclic_intersections().unwrap().is_empty());
    }

    #[test]
    fn link_distance_check() {
        let small = enumerate_factors(3, 2, 2).unwrap();
        let large = enumerate_factors(3, 2, 4).unwrap();
        let (checked, short) = antipodal_link_distances(&small, &large).unwrap();
        assert!(checked > 0);
        assert!(short.is_empty(), "{short:?}");
    }

    #[test]
    fn json_and_dot_are_stable() {
        let g1 = enumerate_factors(3, 2, 2).unwrap();
        let g2 = enumerate_factors(3, 2, 2).unwrap();
        assert_eq!(g1.to_json().to_string(), g2.to_json().to_string());
        assert_eq!(g1.to_dot(), g2.to_dot());
        assert!(matches!(enumerate_factors_capped(3, 2, 3, 5), Err(Error::BudgetExceeded { .. })));
    }
}
