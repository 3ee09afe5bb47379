//! Standard apartments, putative apartments and crawling chains.
//!
//! The standard apartment of a basis `b_1, ..., b_k` of a free factor `A` is
//! the full subgraph of the free factor graph on the `2^k - 2` factors
//! spanned by nonempty proper subsets of the basis. A putative apartment is
//! any graph of factors with the same rank-preserving shape.

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::aut::FreeAut;
use crate::error::{Error, Result};
use crate::factorgraph::FactorVertex;
use crate::subgroups::{CoreGraph, FactorKey};
use crate::whitehead::{basis_extension, is_partial_basis, DEFAULT_LEVEL_BUDGET};
use crate::word::{Letter, Word};

/// A standard apartment, stored by its basis; vertex `i` is spanned by the
/// basis elements in `subsets[i]` (bitmask), ordered by size then mask.
#[derive(Debug, Clone)]
pub struct Apartment {
    rank_n: usize,
    basis: Vec<Word>,
    subsets: Vec<u32>,
    vertices: Vec<FactorVertex>,
}

fn subset_words(basis: &[Word], mask: u32) -> Vec<Word> {
    basis.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, w)| w.clone()).collect()
}

fn proper_subsets(k: usize) -> Vec<u32> {
    let mut masks: Vec<u32> = (1..(1u32 << k) - 1).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
}

/// Keys of the subset factors of a basis, without checking that the basis
/// is a partial basis.
pub fn subset_keys(rank_n: usize, basis: &[Word]) -> Result<HashSet<FactorKey>> {
    proper_subsets(basis.len())
        .into_iter()
        .map(|m| CoreGraph::fold(rank_n, &subset_words(basis, m)).map(|g| g.key().clone()))
        .collect()
}

pub fn standard_apartment(rank_n: usize, basis: &[Word]) -> Result<Apartment> {
    let k = basis.len();
    if k < 2 {
        return Err(Error::Precondition(format!("an apartment needs at least 2 basis elements, got {k}")));
    }
    if !is_partial_basis(rank_n, basis)? {
        return Err(Error::NotABasis(rank_n));
    }
    let subsets = proper_subsets(k);
    let vertices = subsets
        .iter()
        .map(|&m| {
            let b = subset_words(basis, m);
            let graph = CoreGraph::fold(rank_n, &b)?;
            Ok(FactorVertex { key: graph.key().clone(), rank: b.len(), basis: b, graph })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Apartment { rank_n, basis: basis.to_vec(), subsets, vertices })
}

impl Apartment {
    pub fn rank_n(&self) -> usize {
        self.rank_n
    }

    pub fn k(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn vertices(&self) -> &[FactorVertex] {
        &self.vertices
    }

    pub fn subsets(&self) -> &[u32] {
        &self.subsets
    }

    /// Pairs of strictly nested subsets.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut e = Vec::new();
        for i in 0..self.subsets.len() {
            for j in i + 1..self.subsets.len() {
                let (a, b) = (self.subsets[i], self.subsets[j]);
                if a & b == a || a & b == b {
                    e.push((i, j));
                }
            }
        }
        e
    }

    pub fn keys(&self) -> HashSet<FactorKey> {
        self.vertices.iter().map(|v| v.key.clone()).collect()
    }

    /// Index of the vertex opposite to `i` (complementary subset).
    pub fn opposite(&self, i: usize) -> usize {
        let full = (1u32 << self.k()) - 1;
        let target = full & !self.subsets[i];
        self.subsets.iter().position(|&m| m == target).expect("complement is proper")
    }

    pub fn to_putative(&self) -> PutativeApartment {
        PutativeApartment { rank_n: self.rank_n, vertices: self.vertices.clone(), edges: self.edges() }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "rank": self.rank_n,
            "basis": self.basis,
            "vertices": self.vertices.iter().map(|v| serde_json::json!({
                "key": v.key.digest,
                "rank": v.rank,
                "basis": v.basis,
            })).collect::<Vec<_>>(),
            "edges": self.edges().into_iter().map(|(i, j)| [i, j]).collect::<Vec<_>>(),
        })
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph A {\n");
        for (i, v) in self.vertices.iter().enumerate() {
            let color = if v.rank == 1 { "red" } else { "blue" };
            s.push_str(&format!("  v{i} [label=\"{}\", color={color}];\n", v.label()));
        }
        for (i, j) in self.edges() {
            s.push_str(&format!("  v{i} -- v{j};\n"));
        }
        s.push_str("}\n");
        s
    }
}

/// A finite graph of free factors, candidate for being an apartment.
#[derive(Debug, Clone)]
pub struct PutativeApartment {
    pub rank_n: usize,
    pub vertices: Vec<FactorVertex>,
    pub edges: Vec<(usize, usize)>,
}

impl PutativeApartment {
    /// The full subgraph of the free factor graph on the given factors.
    pub fn from_factors(rank_n: usize, vertices: Vec<FactorVertex>) -> PutativeApartment {
        let mut edges = Vec::new();
        for i in 0..vertices.len() {
            for j in i + 1..vertices.len() {
                if vertices[i].adjacent(&vertices[j]) {
                    edges.push((i, j));
                }
            }
        }
        PutativeApartment { rank_n, vertices, edges }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.vertices.iter().map(|v| v.rank).collect()
    }

    pub fn is_putative(&self) -> bool {
        check_putative(&self.ranks(), &self.edges)
    }
}

/// Whether the ranked graph is isomorphic, preserving ranks, to the
/// proper-subset poset of a `k`-element set (`k` = number of rank-1
/// vertices) with adjacency given by strict inclusion.
pub fn check_putative(ranks: &[usize], edges: &[(usize, usize)]) -> bool {
    let n = ranks.len();
    let ones: Vec<usize> = (0..n).filter(|&v| ranks[v] == 1).collect();
    let k = ones.len();
    if !(2..=20).contains(&k) || n != (1usize << k) - 2 {
        return false;
    }
    let mut adj = vec![HashSet::new(); n];
    for &(a, b) in edges {
        if a >= n || b >= n || a == b || !adj[a].insert(b) || !adj[b].insert(a) {
            return false;
        }
    }
    let bit: HashMap<usize, u32> = ones.iter().enumerate().map(|(i, &v)| (v, 1u32 << i)).collect();
    let sets: Vec<u32> = (0..n)
        .map(|v| if ranks[v] == 1 { bit[&v] } else { adj[v].iter().filter_map(|w| bit.get(w)).fold(0, |a, b| a | b) })
        .collect();
    let full = (1u32 << k) - 1;
    let mut used = HashSet::new();
    for v in 0..n {
        let s = sets[v];
        if s == 0 || s == full || s.count_ones() as usize != ranks[v] || !used.insert(s) {
            return false;
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            let nested = sets[a] & sets[b] == sets[a] || sets[a] & sets[b] == sets[b];
            if nested != adj[a].contains(&b) {
                return false;
            }
        }
    }
    true
}

/// Decides whether a putative apartment with at least three rank-1 vertices
/// is standard: for each rank-1 `<u>` and each vertex `A` of rank at least 2,
/// either `u ∈ A` or `<A, u>` is a free factor of rank `rank(A) + 1`. When the
/// answer is yes, the apartment is rebuilt from the rank-1 generators and
/// compared vertex by vertex.
pub fn characterize_standard(lambda: &PutativeApartment) -> Result<bool> {
    let n = lambda.rank_n;
    let ones: Vec<&FactorVertex> = lambda.vertices.iter().filter(|v| v.rank == 1).collect();
    if ones.len() < 3 {
        return Err(Error::Hypothesis(format!("need at least 3 rank-1 vertices, found {}", ones.len())));
    }
    if !lambda.is_putative() {
        return Err(Error::Hypothesis("the graph is not a putative apartment".into()));
    }
    let containment = PutativeApartment::from_factors(n, lambda.vertices.clone());
    let normalize = |es: &[(usize, usize)]| {
        let mut v: Vec<(usize, usize)> = es.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        v.sort_unstable();
        v
    };
    if normalize(&containment.edges) != normalize(&lambda.edges) {
        return Err(Error::Hypothesis("adjacency disagrees with containment of the factors".into()));
    }
    for u in &ones {
        let u = &u.basis[0];
        for a in lambda.vertices.iter().filter(|v| v.rank >= 2) {
            if a.graph.member(u) {
                continue;
            }
            let mut all = a.basis.clone();
            all.push(u.clone());
            if !is_partial_basis(n, &all)? {
                return Ok(false);
            }
        }
    }
    let gens: Vec<Word> = ones.iter().map(|v| v.basis[0].clone()).collect();
    let rebuilt = standard_apartment(n, &gens).map_err(|e| Error::Inconsistent(format!("rebuilding from rank-1 vertices: {e}")))?;
    let keys: HashSet<FactorKey> = lambda.vertices.iter().map(|v| v.key.clone()).collect();
    if keys != rebuilt.keys() {
        return Err(Error::Inconsistent("rebuilt apartment has different vertices".into()));
    }
    Ok(true)
}

/// A hexagon built from a basis `(a, b, c)` with the third rank-1 vertex
/// replaced by `<c a c>`: rank-1 `<a>, <b>, <cac>`, rank-2 `<a,b>, <b,cac>,
/// <a,c>`. Its shape is that of an apartment but it is not standard.
pub fn corrupted_hexagon(rank_n: usize, basis: &[Word]) -> Result<PutativeApartment> {
    let [a, b, c] = basis else {
        return Err(Error::Precondition("a corrupted hexagon needs three basis elements".into()));
    };
    let v = Word::product([c, a, c]);
    let sets: [Vec<Word>; 6] =
        [vec![a.clone()], vec![b.clone()], vec![v.clone()], vec![a.clone(), b.clone()], vec![b.clone(), v], vec![a.clone(), c.clone()]];
    let vertices = sets
        .into_iter()
        .map(|b| {
            let graph = CoreGraph::fold(rank_n, &b)?;
            Ok(FactorVertex { key: graph.key().clone(), rank: b.len(), basis: b, graph })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PutativeApartment::from_factors(rank_n, vertices))
}

/// Generators used to factor basis changes of `A = <x_1, ..., x_k>`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Generator {
    /// `x_i -> x_i^-1`.
    Invert(usize),
    /// `x_i -> x_i x_j`.
    RightNielsen(usize, usize),
}

impl Generator {
    pub fn automorphism(self, rank: usize) -> FreeAut {
        match self {
            Generator::Invert(i) => FreeAut::inversion(rank, i),
            Generator::RightNielsen(i, j) => FreeAut::rho(rank, i, j),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Invert(i) => write!(f, "iota{i}"),
            Generator::RightNielsen(i, j) => write!(f, "rho{i}{j}"),
        }
    }
}

/// An elementary Nielsen operation on a tuple; as automorphisms these are
/// `rho_ij`, `rho_ij^-1`, `lambda_ij`, `lambda_ij^-1` and `iota_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum TupleOp {
    Right(usize, usize),
    RightInv(usize, usize),
    Left(usize, usize),
    LeftInv(usize, usize),
    Invert(usize),
}

impl TupleOp {
    fn apply(self, t: &mut [Word]) {
        match self {
            TupleOp::Right(i, j) => t[i - 1] = t[i - 1].mul(&t[j - 1]),
            TupleOp::RightInv(i, j) => t[i - 1] = t[i - 1].mul(&t[j - 1].inverse()),
            TupleOp::Left(i, j) => t[i - 1] = t[j - 1].mul(&t[i - 1]),
            TupleOp::LeftInv(i, j) => t[i - 1] = t[j - 1].inverse().mul(&t[i - 1]),
            TupleOp::Invert(i) => t[i - 1] = t[i - 1].inverse(),
        }
    }

    /// The inverse automorphism as a product of generators, leftmost first.
    fn inverse_in_generators(self) -> Vec<Generator> {
        use Generator::{Invert as I, RightNielsen as R};
        match self {
            TupleOp::Right(i, j) => vec![I(j), R(i, j), I(j)],
            TupleOp::RightInv(i, j) => vec![R(i, j)],
            TupleOp::Left(i, j) => vec![I(i), R(i, j), I(i)],
            TupleOp::LeftInv(i, j) => vec![I(i), I(j), R(i, j), I(j), I(i)],
            TupleOp::Invert(i) => vec![I(i)],
        }
    }
}

fn nielsen_ops(k: usize) -> Vec<TupleOp> {
    let mut ops = Vec::new();
    for i in 1..=k {
        for j in 1..=k {
            if i != j {
                ops.extend([TupleOp::Right(i, j), TupleOp::RightInv(i, j), TupleOp::Left(i, j), TupleOp::LeftInv(i, j)]);
            }
        }
    }
    ops
}

fn tuple_len(t: &[Word]) -> usize {
    t.iter().map(Word::len).sum()
}

/// Nielsen-reduces a basis of `F_k` to the standard basis. Returns the
/// operations applied, in order.
fn nielsen_reduce(mut t: Vec<Word>, budget: usize) -> Result<Vec<TupleOp>> {
    let k = t.len();
    let ops = nielsen_ops(k);
    let mut done = Vec::new();
    while tuple_len(&t) > k {
        let len = tuple_len(&t);
        let step = ops.iter().copied().find(|op| {
            let mut s = t.clone();
            op.apply(&mut s);
            tuple_len(&s) < len
        });
        if let Some(op) = step {
            op.apply(&mut t);
            done.push(op);
            continue;
        }
        // breadth-first search of the level set for a state that reduces
        let mut parent: HashMap<Vec<Word>, Option<(Vec<Word>, TupleOp)>> = HashMap::from([(t.clone(), None)]);
        let mut queue = std::collections::VecDeque::from([t.clone()]);
        let mut found = None;
        'search: while let Some(s) = queue.pop_front() {
            for &op in &ops {
                let mut next = s.clone();
                op.apply(&mut next);
                let l = tuple_len(&next);
                if l > len || parent.contains_key(&next) {
                    continue;
                }
                parent.insert(next.clone(), Some((s.clone(), op)));
                if l < len {
                    found = Some(next);
                    break 'search;
                }
                if parent.len() > budget {
                    return Err(Error::BudgetExceeded { context: "crawl factorization", budget });
                }
                queue.push_back(next);
            }
        }
        let Some(mut cur) = found else {
            return Err(Error::Inconsistent("the tuple is not a basis".into()));
        };
        let mut path = Vec::new();
        while let Some(Some((prev, op))) = parent.get(&cur) {
            path.push(*op);
            cur = prev.clone();
        }
        for op in path.into_iter().rev() {
            op.apply(&mut t);
            done.push(op);
        }
    }
    // signed permutation -> identity
    for i in 1..=k {
        if t[i - 1].letters()[0].is_inverse() {
            TupleOp::Invert(i).apply(&mut t);
            done.push(TupleOp::Invert(i));
        }
    }
    for i in 1..=k {
        let want = Word::letter(Letter::x(i));
        if t[i - 1] == want {
            continue;
        }
        let j = (1..=k).find(|&j| t[j - 1] == want).ok_or_else(|| Error::Inconsistent("not a signed permutation".into()))?;
        for op in [TupleOp::Right(i, j), TupleOp::RightInv(j, i), TupleOp::Left(i, j), TupleOp::Invert(j)] {
            op.apply(&mut t);
            done.push(op);
        }
    }
    Ok(done)
}

/// Writes an automorphism of `F_k` as a product of inversions and right
/// Nielsen moves, leftmost factor first.
pub fn factor_automorphism(gamma: &FreeAut, budget: usize) -> Result<Vec<Generator>> {
    let ops = nielsen_reduce(gamma.images().to_vec(), budget)?;
    let mut gens: Vec<Generator> = Vec::new();
    for op in ops.into_iter().rev() {
        for g in op.inverse_in_generators() {
            match (gens.last(), g) {
                (Some(&Generator::Invert(a)), Generator::Invert(b)) if a == b => {
                    gens.pop();
                }
                _ => gens.push(g),
            }
        }
    }
    let rebuilt = compose_generators(gamma.rank(), &gens);
    if &rebuilt != gamma {
        return Err(Error::Inconsistent("factorization does not recompose".into()));
    }
    Ok(gens)
}

pub fn compose_generators(rank: usize, gens: &[Generator]) -> FreeAut {
    gens.iter().fold(FreeAut::identity(rank), |acc, g| acc.compose(&g.automorphism(rank)).expect("rank"))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SharedPair {
    /// Basis of the rank `k - 1` vertex.
    pub b: Vec<Word>,
    pub u: Word,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrawlChain {
    pub rank: usize,
    pub factor: FactorKey,
    /// Bases of `Δ_0, ..., Δ_n`.
    pub apartments: Vec<Vec<Word>>,
    /// `shared[i]` lies in `Δ_i ∩ Δ_{i+1}`.
    pub shared: Vec<SharedPair>,
    /// Change of basis in the coordinates of the first basis, as a product
    /// of generators.
    pub factorization: Vec<Generator>,
    /// `gamma(x_i)` for `i <= k`, with `to[i] = beta(gamma(x_i))`.
    pub gamma: FreeAut,
}

impl CrawlChain {
    pub fn len(&self) -> usize {
        self.shared.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shared.is_empty()
    }
}

pub fn crawl(rank_n: usize, from: &[Word], to: &[Word]) -> Result<CrawlChain> {
    crawl_with_budget(rank_n, from, to, DEFAULT_LEVEL_BUDGET)
}

/// A chain of standard apartments from the apartment of `from` to that of
/// `to`, both bases of the same factor `A` of rank at least 3, with
/// consecutive apartments sharing an antipodal pair that generates `A`.
pub fn crawl_with_budget(rank_n: usize, from: &[Word], to: &[Word], budget: usize) -> Result<CrawlChain> {
    let k = from.len();
    if k < 3 || to.len() != k {
        return Err(Error::Precondition(format!("need two bases of the same rank >= 3, got {} and {}", k, to.len())));
    }
    let a = CoreGraph::fold(rank_n, from)?;
    if a.key() != CoreGraph::fold(rank_n, to)?.key() {
        return Err(Error::BasisMismatch);
    }
    let beta = basis_extension(rank_n, from, budget)?.ok_or(Error::NotABasis(rank_n))?;
    let gamma_images: Vec<Word> = to.iter().map(|w| beta.apply_inverse(w)).collect();
    if gamma_images.iter().any(|w| !w.only_uses(|i| i <= k)) {
        return Err(Error::Inconsistent("target basis leaves the factor".into()));
    }
    let gamma = FreeAut::from_images(gamma_images)?;
    let factorization = factor_automorphism(&gamma, budget)?;

    let embed = |p: &FreeAut, w: &Word| beta.apply(&p.apply(w));
    let mut p = FreeAut::identity(k);
    let mut apartments = vec![from.to_vec()];
    let mut shared = Vec::new();
    for &g in &factorization {
        if let Generator::RightNielsen(i, j) = g {
            let l = (1..=k).find(|&l| l != i && l != j).expect("k >= 3");
            let b = (1..=k).filter(|&m| m != l).map(|m| embed(&p, &Word::letter(Letter::x(m)))).collect();
            let u = embed(&p, &Word::letter(Letter::x(l)));
            shared.push(SharedPair { b, u });
        }
        p = p.compose(&g.automorphism(k))?;
        if matches!(g, Generator::RightNielsen(..)) {
            apartments.push((1..=k).map(|m| embed(&p, &Word::letter(Letter::x(m)))).collect());
        }
    }
    // trailing inversions change the basis but not the apartment
    if !shared.is_empty() {
        *apartments.last_mut().expect("nonempty") = to.to_vec();
    }
    Ok(CrawlChain { rank: rank_n, factor: a.key().clone(), apartments, shared, factorization, gamma })
}

/// Checks a chain against its defining properties, independently of how it
/// was built. Returns the list of violations.
pub fn validate_chain(chain: &CrawlChain, from: &[Word], to: &[Word]) -> Result<Vec<String>> {
    let n = chain.rank;
    let mut bad = Vec::new();
    let a = CoreGraph::fold(n, from)?;
    if a.key() != &chain.factor || CoreGraph::fold(n, to)?.key() != &chain.factor {
        bad.push("endpoint bases do not generate the chain's factor".to_string());
    }
    if chain.apartments.first().map(Vec::as_slice) != Some(from) {
        bad.push("chain does not start at the source basis".to_string());
    }
    let last = chain.apartments.last().expect("nonempty");
    if subset_keys(n, last)? != subset_keys(n, to)? {
        bad.push("chain does not end at the target apartment".to_string());
    }
    if chain.apartments.len() != chain.shared.len() + 1 {
        bad.push("apartment and shared-pair counts disagree".to_string());
    }
    for (i, pair) in chain.shared.iter().enumerate() {
        let kb = CoreGraph::fold(n, &pair.b)?.key().clone();
        let ku = CoreGraph::fold(n, std::slice::from_ref(&pair.u))?.key().clone();
        for d in [&chain.apartments[i], &chain.apartments[i + 1]] {
            let keys = subset_keys(n, d)?;
            if !keys.contains(&kb) || !keys.contains(&ku) {
                bad.push(format!("step {i}: shared pair is not in both apartments"));
            }
        }
        let mut joint = pair.b.clone();
        joint.push(pair.u.clone());
        if !is_partial_basis(n, &joint)? {
            bad.push(format!("step {i}: shared pair is not antipodal"));
        }
        if CoreGraph::fold(n, &joint)?.key() != &chain.factor {
            bad.push(format!("step {i}: shared pair does not generate the factor"));
        }
    }
    let k = from.len();
    if compose_generators(k, &chain.factorization) != chain.gamma {
        bad.push("factorization does not recompose to the change of basis".to_string());
    }
    if let Some(beta) = basis_extension(n, from, DEFAULT_LEVEL_BUDGET)? {
        let mapped: Vec<Word> = to.iter().map(|w| beta.apply_inverse(w)).collect();
        if mapped != chain.gamma.images() {
            bad.push("change of basis does not carry the source basis to the target".to_string());
        }
    }
    Ok(bad)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ws(s: &str) -> Vec<Word> {
        Word::parse_list(s).unwrap()
    }

    #[test]
    fn standard_hexagon() {
        let a = standard_apartment(3, &ws("a,b,c")).unwrap();
        assert_eq!(a.vertices().len(), 6);
        let labels: Vec<String> = a.vertices().iter().map(FactorVertex::label).collect();
        assert_eq!(labels, ["<a>", "<b>", "<c>", "<a,b>", "<a,c>", "<b,c>"]);
        assert_eq!(a.edges().len(), 6);
        assert!(a.to_putative().is_putative());
        for i in 0..6 {
            let o = a.opposite(i);
            assert!(crate::factorgraph::antipodal(3, &a.vertices()[i], &a.vertices()[o]).unwrap());
        }
    }

    #[test]
    fn rank_two_apartment() {
        let a = standard_apartment(3, &ws("a,b")).unwrap();
        assert_eq!(a.vertices().len(), 2);
        assert!(a.edges().is_empty());
        assert!(matches!(standard_apartment(3, &ws("a,aa")), Err(Error::NotABasis(3))));
    }

    #[test]
    fn skewed_apartment_in_rank_four() {
        let a = standard_apartment(4, &ws("ab,c,d")).unwrap();
        assert_eq!(a.vertices().len(), 6);
        for i in 0..6 {
            assert!(crate::factorgraph::antipodal(4, &a.vertices()[i], &a.vertices()[a.opposite(i)]).unwrap());
        }
    }

    #[test]
    fn putative_shapes() {
        let ranks = [1, 1, 1, 2, 2, 2];
        let hex = [(0, 3), (1, 3), (0, 4), (2, 4), (1, 5), (2, 5)];
        assert!(check_putative(&ranks, &hex));
        assert!(!check_putative(&[1, 2, 1, 2, 2, 1], &hex));
        assert!(!check_putative(&ranks, &hex[..5]));
        assert!(!check_putative(&[1, 1], &[(0, 1)]));
        assert!(check_putative(&[1, 1], &[]));
    }

    #[test]
    fn forward_characterization() {
        let a = standard_apartment(3, &ws("a,b,c")).unwrap();
        assert!(characterize_standard(&a.to_putative()).unwrap());
        let a = standard_apartment(4, &ws("ab,c,dA,b")).unwrap();
        assert_eq!(a.vertices().len(), 14);
        assert!(characterize_standard(&a.to_putative()).unwrap());
    }

    #[test]
    fn corrupted_hexagon_is_rejected() {
        let h = corrupted_hexagon(3, &ws("a,b,c")).unwrap();
        assert!(h.is_putative());
        assert!(!characterize_standard(&h).unwrap());
    }

    #[test]
    fn hypothesis_violations() {
        let a = standard_apartment(3, &ws("a,b")).unwrap();
        assert!(matches!(characterize_standard(&a.to_putative()), Err(Error::Hypothesis(_))));
        let mut p = standard_apartment(3, &ws("a,b,c")).unwrap().to_putative();
        p.edges.pop();
        assert!(matches!(characterize_standard(&p), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn factorization_recomposes() {
        let gamma = FreeAut::rho(3, 1, 2)
            .compose(&FreeAut::lambda_inv(3, 3, 1))
            .unwrap()
            .compose(&FreeAut::rho(3, 2, 3).pow(2))
            .unwrap();
        let gens = factor_automorphism(&gamma, 10_000).unwrap();
        assert_eq!(compose_generators(3, &gens), gamma);
        let perm = FreeAut::signed_permutation(&[Letter::xbar(3), Letter::x(1), Letter::x(2)]).unwrap();
        assert_eq!(compose_generators(3, &factor_automorphism(&perm, 10_000).unwrap()), perm);
        assert!(factor_automorphism(&FreeAut::identity(3), 10).unwrap().is_empty());
    }

    #[test]
    fn trivial_crawl() {
        let b = ws("a,b,c");
        let chain = crawl(4, &b, &b).unwrap();
        assert!(chain.is_empty());
        assert!(validate_chain(&chain, &b, &b).unwrap().is_empty());
    }

    #[test]
    fn single_nielsen_crawl() {
        let from = ws("a,bd,c");
        // rho12 in the coordinates of `from`
        let to = vec![from[0].mul(&from[1]), from[1].clone(), from[2].clone()];
        let chain = crawl(4, &from, &to).unwrap();
        assert_eq!(chain.len(), 1);
        assert_eq!(chain.shared[0], SharedPair { b: ws("a,bd"), u: from[2].clone() });
        assert!(validate_chain(&chain, &from, &to).unwrap().is_empty());
    }

    #[test]
    fn crawl_rejects_different_factors() {
        assert!(matches!(crawl(4, &ws("a,b,c"), &ws("a,b,d")), Err(Error::BasisMismatch)));
    }

    #[test]
    fn validation_catches_tampering() {
        let from = ws("a,b,c");
        let to = ws("ab,b,c");
        let mut chain = crawl(4, &from, &to).unwrap();
        chain.shared[0].u = ws("d")[0].clone();
        assert!(!validate_chain(&chain, &from, &to).unwrap().is_empty());
    }
}
