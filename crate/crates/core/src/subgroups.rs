//! Finitely generated subgroups of `F_N` as folded core graphs.
//!
//! A [`CoreGraph`] is the Stallings core of `<generators>` based at the
//! identity: petals are glued at the basepoint, folded until no vertex has two
//! outgoing (or two incoming) edges with the same label, and then hairs not
//! ending at the basepoint are pruned. Vertices are relabelled by a
//! breadth-first traversal from the basepoint so that equal subgroups give
//! byte-identical [`FactorKey`]s. Subgroups are not taken up to conjugacy.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::aut::check_rank;
use crate::error::{Error, Result};
use crate::whitehead;
use crate::word::{Letter, Word};

/// Canonical identity of a subgroup: the canonical edge list and its digest.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FactorKey {
    pub digest: String,
    pub edges: String,
}

impl FactorKey {
    fn from_edges(vertex_count: usize, edges: &[(usize, usize, usize)]) -> FactorKey {
        let mut text = format!("v{vertex_count}");
        for (from, label, to) in edges {
            text.push_str(&format!(";{from}-{label}-{to}"));
        }
        let digest = Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect();
        FactorKey { digest, edges: text }
    }

    /// First 12 hex digits of the digest.
    pub fn short(&self) -> &str {
        &self.digest[..12]
    }
}

impl fmt::Display for FactorKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.digest)
    }
}

/// Folded, cored, canonically numbered subgroup graph; vertex 0 is the
/// basepoint.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoreGraph {
    rank: usize,
    out: Vec<Vec<Option<usize>>>,
    inc: Vec<Vec<Option<usize>>>,
    key: FactorKey,
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, mut x: usize) -> usize {
        while self.0[x] != x {
            self.0[x] = self.0[self.0[x]];
            x = self.0[x];
        }
        x
    }
}

impl CoreGraph {
    /// The core graph of `<generators>`.
    pub fn fold(rank: usize, generators: &[Word]) -> Result<CoreGraph> {
        check_rank(rank)?;
        let mut vertex_count = 1;
        let mut edges = Vec::new();
        for g in generators {
            if !g.fits_rank(rank) {
                return Err(Error::LetterOutOfRange { index: g.max_index(), rank });
            }
            if g.is_empty() {
                continue;
            }
            let mut prev = 0;
            for (pos, &l) in g.letters().iter().enumerate() {
                let next = if pos + 1 == g.len() {
                    0
                } else {
                    vertex_count += 1;
                    vertex_count - 1
                };
                edges.push(directed(prev, l, next));
                prev = next;
            }
        }
        Ok(CoreGraph::from_raw(rank, vertex_count, 0, edges))
    }

    /// Folds, cores and canonicalises an arbitrary labelled graph.
    fn from_raw(rank: usize, vertex_count: usize, base: usize, mut edges: Vec<(usize, usize, usize)>) -> CoreGraph {
        let mut uf = UnionFind((0..vertex_count).collect());
        loop {
            let mut changed = false;
            let mut seen: HashMap<(usize, usize, bool), usize> = HashMap::new();
            for &(from, label, to) in &edges {
                let (f, t) = (uf.find(from), uf.find(to));
                for (key, other) in [((f, label, true), t), ((t, label, false), f)] {
                    match seen.get(&key) {
                        Some(&x) => {
                            let (a, b) = (uf.find(x), uf.find(other));
                            if a != b {
                                uf.0[a.max(b)] = a.min(b);
                                changed = true;
                            }
                        }
                        None => {
                            seen.insert(key, other);
                        }
                    }
                }
            }
            if !changed {
                break;
            }
        }
        for e in edges.iter_mut() {
            *e = (uf.find(e.0), e.1, uf.find(e.2));
        }
        edges.sort_unstable();
        edges.dedup();
        let base = uf.find(base);

        // prune hairs away from the basepoint
        loop {
            let mut degree: HashMap<usize, usize> = HashMap::new();
            for &(f, _, t) in &edges {
                *degree.entry(f).or_default() += 1;
                *degree.entry(t).or_default() += 1;
            }
            let before = edges.len();
            edges.retain(|&(f, _, t)| (f == base || degree[&f] > 1) && (t == base || degree[&t] > 1));
            if edges.len() == before {
                break;
            }
        }

        // canonical numbering
        let mut out_of: HashMap<(usize, usize), usize> = HashMap::new();
        let mut in_of: HashMap<(usize, usize), usize> = HashMap::new();
        for &(f, l, t) in &edges {
            out_of.insert((f, l), t);
            in_of.insert((t, l), f);
        }
        let mut number: HashMap<usize, usize> = HashMap::from([(base, 0)]);
        let mut order = vec![base];
        let mut queue = VecDeque::from([base]);
        while let Some(v) = queue.pop_front() {
            for label in 1..=rank {
                for w in [out_of.get(&(v, label)), in_of.get(&(v, label))].into_iter().flatten() {
                    if !number.contains_key(w) {
                        number.insert(*w, order.len());
                        order.push(*w);
                        queue.push_back(*w);
                    }
                }
            }
        }
        let n = order.len();
        let mut out = vec![vec![None; rank]; n];
        let mut inc = vec![vec![None; rank]; n];
        let mut canon: Vec<(usize, usize, usize)> = Vec::with_capacity(edges.len());
        for &(f, l, t) in &edges {
            if let (Some(&f), Some(&t)) = (number.get(&f), number.get(&t)) {
                out[f][l - 1] = Some(t);
                inc[t][l - 1] = Some(f);
                canon.push((f, l, t));
            }
        }
        canon.sort_unstable();
        let key = FactorKey::from_edges(n, &canon);
        CoreGraph { rank, out, inc, key }
    }

    pub fn rank_n(&self) -> usize {
        self.rank
    }

    pub fn key(&self) -> &FactorKey {
        &self.key
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    /// Edges `(from, label index, to)` in canonical order.
    pub fn edges(&self) -> Vec<(usize, usize, usize)> {
        let mut e = Vec::new();
        for (v, row) in self.out.iter().enumerate() {
            for (l, t) in row.iter().enumerate() {
                if let Some(t) = t {
                    e.push((v, l + 1, *t));
                }
            }
        }
        e
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().flatten().filter(|t| t.is_some()).count()
    }

    /// Rank of the subgroup, `|E| - |V| + 1`.
    pub fn rank(&self) -> usize {
        self.edge_count() + 1 - self.vertex_count()
    }

    pub fn is_trivial(&self) -> bool {
        self.edge_count() == 0
    }

    fn step(&self, v: usize, l: Letter) -> Option<usize> {
        if l.index() > self.rank {
            return None;
        }
        if l.is_inverse() {
            self.inc[v][l.index() - 1]
        } else {
            self.out[v][l.index() - 1]
        }
    }

    /// Whether `w` labels a closed path at the basepoint.
    pub fn member(&self, w: &Word) -> bool {
        let mut v = 0;
        for &l in w.letters() {
            match self.step(v, l) {
                Some(t) => v = t,
                None => return false,
            }
        }
        v == 0
    }

    /// A free basis read off a breadth-first spanning tree.
    pub fn basis(&self) -> Vec<Word> {
        let n = self.vertex_count();
        let mut prefix: Vec<Option<Word>> = vec![None; n];
        prefix[0] = Some(Word::identity());
        let mut tree: Vec<(usize, usize, usize)> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(v) = queue.pop_front() {
            let pv = prefix[v].clone().expect("visited");
            for label in 1..=self.rank {
                for l in [Letter::x(label), Letter::xbar(label)] {
                    if let Some(t) = self.step(v, l) {
                        if prefix[t].is_none() {
                            prefix[t] = Some(pv.mul(&Word::letter(l)));
                            tree.push(if l.is_inverse() { (t, label, v) } else { (v, label, t) });
                            queue.push_back(t);
                        }
                    }
                }
            }
        }
        self.edges()
            .into_iter()
            .filter(|e| !tree.contains(e))
            .map(|(f, l, t)| {
                let pf = prefix[f].as_ref().expect("connected");
                let pt = prefix[t].as_ref().expect("connected");
                Word::product([pf, &Word::letter(Letter::x(l)), &pt.inverse()])
            })
            .collect()
    }

    /// `other ≤ self`.
    pub fn contains(&self, other: &CoreGraph) -> bool {
        other.basis().iter().all(|w| self.member(w))
    }

    pub fn equals(&self, other: &CoreGraph) -> bool {
        self.key == other.key
    }

    /// The core graph of the intersection, from the product graph at the
    /// pair of basepoints.
    pub fn intersect(&self, other: &CoreGraph) -> Result<CoreGraph> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: other.rank });
        }
        let mut number: HashMap<(usize, usize), usize> = HashMap::from([((0, 0), 0)]);
        let mut queue = VecDeque::from([(0usize, 0usize)]);
        let mut edges = Vec::new();
        while let Some((a, b)) = queue.pop_front() {
            let here = number[&(a, b)];
            for l in 0..self.rank {
                if let (Some(x), Some(y)) = (self.out[a][l], other.out[b][l]) {
                    let next = number.len();
                    let id = *number.entry((x, y)).or_insert_with(|| {
                        queue.push_back((x, y));
                        next
                    });
                    edges.push((here, l + 1, id));
                }
                if let (Some(x), Some(y)) = (self.inc[a][l], other.inc[b][l]) {
                    let next = number.len();
                    let id = *number.entry((x, y)).or_insert_with(|| {
                        queue.push_back((x, y));
                        next
                    });
                    edges.push((id, l + 1, here));
                }
            }
        }
        Ok(CoreGraph::from_raw(self.rank, number.len(), 0, edges))
    }

    /// The conjugate subgroup `w H w^-1`.
    pub fn conjugate(&self, w: &Word) -> Result<CoreGraph> {
        let gens: Vec<Word> = self.basis().iter().map(|b| b.conjugate_by(w)).collect();
        CoreGraph::fold(self.rank, &gens)
    }

    /// Whether the subgroup is a nontrivial free factor of `F_N`.
    pub fn is_free_factor(&self) -> Result<bool> {
        if self.is_trivial() {
            return Ok(false);
        }
        whitehead::is_partial_basis(self.rank, &self.basis())
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph S {\n  0 [shape=doublecircle];\n");
        for v in 1..self.vertex_count() {
            s.push_str(&format!("  {v};\n"));
        }
        for (f, l, t) in self.edges() {
            s.push_str(&format!("  {f} -> {t} [label=\"{}\"];\n", Letter::x(l)));
        }
        s.push_str("}\n");
        s
    }
}

fn directed(from: usize, l: Letter, to: usize) -> (usize, usize, usize) {
    if l.is_inverse() {
        (to, l.index(), from)
    } else {
        (from, l.index(), to)
    }
}

#[derive(Serialize, Deserialize)]
struct EdgeRepr {
    from: usize,
    to: usize,
    label: String,
}

#[derive(Serialize, Deserialize)]
struct CoreGraphRepr {
    rank: usize,
    basepoint: usize,
    vertices: Vec<usize>,
    edges: Vec<EdgeRepr>,
    key: FactorKey,
}

impl Serialize for CoreGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CoreGraphRepr {
            rank: self.rank,
            basepoint: 0,
            vertices: (0..self.vertex_count()).collect(),
            edges: self.edges().into_iter().map(|(from, l, to)| EdgeRepr { from, to, label: Letter::x(l).to_string() }).collect(),
            key: self.key.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CoreGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let r = CoreGraphRepr::deserialize(d)?;
        check_rank(r.rank).map_err(D::Error::custom)?;
        let mut edges = Vec::with_capacity(r.edges.len());
        for e in r.edges {
            let w: Word = e.label.parse().map_err(D::Error::custom)?;
            let l = match w.letters() {
                [l] if !l.is_inverse() && l.index() <= r.rank => *l,
                _ => return Err(D::Error::custom(format!("bad edge label {}", e.label))),
            };
            if e.from >= r.vertices.len() || e.to >= r.vertices.len() {
                return Err(D::Error::custom("edge endpoint out of range"));
            }
            edges.push((e.from, l.index(), e.to));
        }
        Ok(CoreGraph::from_raw(r.rank, r.vertices.len().max(1), r.basepoint, edges))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    fn fold(rank: usize, gens: &[&str]) -> CoreGraph {
        CoreGraph::fold(rank, &gens.iter().map(|g| w(g)).collect::<Vec<_>>()).unwrap()
    }

    #[test]
    fn single_loop() {
        let g = fold(2, &["a"]);
        assert_eq!(g.vertex_count(), 1);
        assert_eq!(g.edges(), vec![(0, 1, 0)]);
        assert_eq!(g.rank(), 1);
    }

    #[test]
    fn nielsen_equivalent_generators() {
        assert_eq!(fold(2, &["a", "ab"]).key(), fold(2, &["a", "b"]).key());
        assert_eq!(fold(2, &["ab", "a", "b", "1"]).key(), fold(2, &["b", "a"]).key());
    }

    #[test]
    fn square_and_conjugate() {
        let g = fold(2, &["aa", "baB"]);
        assert_eq!(g.rank(), 2);
        assert!(!g.member(&w("a")));
        assert!(g.member(&w("aabaB")));
        assert!(g.member(&w("baaB")));
    }

    #[test]
    fn membership() {
        assert!(fold(2, &["a"]).member(&w("aaa")));
        assert!(fold(2, &["a"]).member(&Word::identity()));
        assert!(!fold(2, &["a"]).member(&w("b")));
        assert!(!fold(2, &["aa", "b"]).member(&w("a")));
    }

    #[test]
    fn containment() {
        assert!(fold(3, &["a", "b"]).contains(&fold(3, &["a"])));
        assert!(!fold(3, &["a"]).contains(&fold(3, &["a", "b"])));
        assert!(!fold(3, &["a"]).contains(&fold(3, &["b"])));
        assert!(!fold(3, &["b"]).contains(&fold(3, &["a"])));
        assert!(fold(3, &["ab", "c"]).contains(&fold(3, &["ab"])));
    }

    #[test]
    fn intersections() {
        let i = fold(3, &["a", "b"]).intersect(&fold(3, &["b", "c"])).unwrap();
        assert_eq!(i.key(), fold(3, &["b"]).key());
        let g = fold(3, &["ab", "cA"]);
        assert_eq!(g.intersect(&g).unwrap().key(), g.key());
        let t = fold(3, &["a"]).intersect(&fold(3, &["b"])).unwrap();
        assert!(t.is_trivial());
        assert_eq!(t.rank(), 0);
        assert_eq!(t.key(), fold(3, &[]).key());
    }

    #[test]
    fn ranks() {
        assert_eq!(fold(2, &[]).rank(), 0);
        assert_eq!(fold(2, &["a"]).rank(), 1);
        assert_eq!(fold(2, &["a", "b"]).rank(), 2);
        assert_eq!(fold(2, &["aa", "aaa"]).rank(), 1);
    }

    #[test]
    fn free_factors() {
        assert!(fold(2, &["ab"]).is_free_factor().unwrap());
        assert!(!fold(2, &["aa"]).is_free_factor().unwrap());
        assert!(fold(3, &["abA", "c"]).is_free_factor().unwrap());
        assert!(!fold(3, &[]).is_free_factor().unwrap());
        assert!(!fold(2, &["abAB"]).is_free_factor().unwrap());
    }

    #[test]
    fn not_up_to_conjugacy() {
        let g = fold(2, &["a"]);
        let h = g.conjugate(&w("b")).unwrap();
        assert_ne!(g.key(), h.key());
        assert!(h.member(&w("baB")));
        assert_eq!(h.rank(), 1);
    }

    #[test]
    fn json_roundtrip() {
        let g = fold(3, &["abA", "cc", "bcB"]);
        let text = serde_json::to_string(&g).unwrap();
        let back: CoreGraph = serde_json::from_str(&text).unwrap();
        assert_eq!(back, g);
    }

    mod props {
        use super::*;
        use crate::testutil::arb_word;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn fold_is_order_independent(gens in prop::collection::vec(arb_word(3, 6), 0..4)) {
                let g = CoreGraph::fold(3, &gens).unwrap();
                let mut rev = gens.clone();
                rev.reverse();
                let mut extra = gens.clone();
                if gens.len() >= 2 {
                    extra.push(gens[0].mul(&gens[1]));
                }
                prop_assert_eq!(CoreGraph::fold(3, &rev).unwrap().key().clone(), g.key().clone());
                prop_assert_eq!(CoreGraph::fold(3, &extra).unwrap().key().clone(), g.key().clone());
            }

            #[test]
            fn products_are_members(gens in prop::collection::vec(arb_word(3, 5), 1..4), picks in prop::collection::vec((0usize..4, any::<bool>()), 0..8)) {
                let g = CoreGraph::fold(3, &gens).unwrap();
                let mut prod = Word::identity();
                for (i, inv) in picks {
                    let x = &gens[i % gens.len()];
                    prod = prod.mul(&if inv { x.inverse() } else { x.clone() });
                }
                prop_assert!(g.member(&prod));
            }

            #[test]
            fn basis_regenerates(gens in prop::collection::vec(arb_word(3, 6), 0..4)) {
                let g = CoreGraph::fold(3, &gens).unwrap();
                let b = g.basis();
                prop_assert_eq!(b.len(), g.rank());
                prop_assert_eq!(CoreGraph::fold(3, &b).unwrap().key().clone(), g.key().clone());
            }

            #[test]
            fn intersect_is_commutative(a in prop::collection::vec(arb_word(3, 4), 1..3), b in prop::collection::vec(arb_word(3, 4), 1..3)) {
                let g = CoreGraph::fold(3, &a).unwrap();
                let h = CoreGraph::fold(3, &b).unwrap();
                let gh = g.intersect(&h).unwrap();
                prop_assert_eq!(gh.key().clone(), h.intersect(&g).unwrap().key().clone());
                prop_assert!(g.contains(&gh) && h.contains(&gh));
            }
        }
    }
}
