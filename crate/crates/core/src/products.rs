//! Standard direct products of free groups in `Aut(F_N)` and bounded
//! centralizer searches.
//!
//! For a basis `a1, a2, x1, ..., x_{N-2}` the standard product has `2N - 3`
//! factors: `L_i` (`x_i -> w x_i`), `R_i` (`x_i -> x_i w`) and `I` (`ad_w`),
//! each with `w` ranging over `<a1, a2>`. Each factor is represented here by
//! its two generators `w = a1` and `w = a2`.

use std::collections::{HashMap, HashSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aut::{check_rank, FreeAut};
use crate::error::{Error, Result};
use crate::random::nielsen_generators;
use crate::whitehead::{basis_extension, DEFAULT_LEVEL_BUDGET};
use crate::word::{shortlex_cmp_lists, Letter, Word};

/// Default state budget for centralizer searches.
pub const DEFAULT_SEARCH_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProductFactor {
    pub name: String,
    pub generators: Vec<FreeAut>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StandardProduct {
    pub rank: usize,
    pub basis: Vec<Word>,
    pub factors: Vec<ProductFactor>,
}

/// Which subgroup of `<a1, a2>` the factor parameters `w` are drawn from.
fn factor_family(rank: usize, ws: &[Word], beta: &FreeAut) -> Vec<ProductFactor> {
    let conj = |phi: FreeAut| beta.compose(&phi).and_then(|p| p.compose(&beta.inverse())).expect("rank");
    let mut factors = Vec::new();
    for i in 1..=rank - 2 {
        let x = Letter::x(i + 2);
        let image = |left: bool, w: &Word| {
            let mut images: Vec<Word> = (1..=rank).map(|j| Word::letter(Letter::x(j))).collect();
            let xw = Word::letter(x);
            images[i + 1] = if left { w.mul(&xw) } else { xw.mul(w) };
            conj(FreeAut::from_images(images).expect("transvection"))
        };
        factors.push(ProductFactor { name: format!("L{i}"), generators: ws.iter().map(|w| image(true, w)).collect() });
        factors.push(ProductFactor { name: format!("R{i}"), generators: ws.iter().map(|w| image(false, w)).collect() });
    }
    factors.push(ProductFactor { name: "I".into(), generators: ws.iter().map(|w| conj(FreeAut::inner(w, rank))).collect() });
    factors
}

fn coordinates(rank: usize, basis: &[Word]) -> Result<FreeAut> {
    check_rank(rank)?;
    if rank < 3 {
        return Err(Error::BadRank(rank));
    }
    if basis.len() != rank {
        return Err(Error::RankMismatch { expected: rank, found: basis.len() });
    }
    basis_extension(rank, basis, DEFAULT_LEVEL_BUDGET)?.ok_or(Error::NotABasis(rank))
}

/// The standard product for the basis `a1, a2, x1, ..., x_{N-2}`.
pub fn standard_product(rank: usize, basis: &[Word]) -> Result<StandardProduct> {
    let beta = coordinates(rank, basis)?;
    let ws = [Word::letter(Letter::x(1)), Word::letter(Letter::x(2))];
    Ok(StandardProduct { rank, basis: basis.to_vec(), factors: factor_family(rank, &ws, &beta) })
}

pub fn standard_basis(rank: usize) -> Vec<Word> {
    (1..=rank).map(|i| Word::letter(Letter::x(i))).collect()
}

/// `tau: a1 -> a1 a2`, in the coordinates of `basis`.
pub fn tau(rank: usize, basis: &[Word]) -> Result<FreeAut> {
    let beta = coordinates(rank, basis)?;
    beta.compose(&FreeAut::rho(rank, 1, 2))?.compose(&beta.inverse())
}

/// Candidate parameters for the twisted factors, kept only if `tau` fixes
/// them; the report notes that this is a filtered sample of `Fix(tau)`.
pub fn tau_fixed_candidates() -> Vec<Word> {
    let tau = FreeAut::rho(2, 1, 2);
    ["b", "abA", "bab", "Aba"]
        .iter()
        .map(|s| s.parse::<Word>().expect("literal"))
        .filter(|w| tau.apply(w) == *w)
        .collect()
}

/// The sub-product commuting with `tau`: factor parameters drawn from the
/// `tau`-fixed candidates.
pub fn twisted_product(rank: usize, basis: &[Word]) -> Result<StandardProduct> {
    let beta = coordinates(rank, basis)?;
    let ws = tau_fixed_candidates();
    if ws.len() < 2 {
        return Err(Error::Inconsistent("fewer than two tau-fixed parameters".into()));
    }
    let ws: Vec<Word> = ws.into_iter().take(2).collect();
    Ok(StandardProduct { rank, basis: basis.to_vec(), factors: factor_family(rank, &ws, &beta) })
}

impl StandardProduct {
    pub fn generators(&self) -> Vec<FreeAut> {
        self.factors.iter().flat_map(|f| f.generators.iter().cloned()).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, ok: bool, witness: Option<String>) {
        self.checks.push(Check { name: name.into(), status: if ok { Status::Pass } else { Status::Fail }, witness });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail).collect()
    }
}

/// Reduced words in two letters `g, G, h, H` of length `1..=max_len`,
/// evaluated as automorphisms; returns the first that is the identity.
fn first_relation(pair: &[FreeAut], max_len: usize) -> Option<String> {
    let gens: Vec<(char, FreeAut)> = vec![
        ('g', pair[0].clone()),
        ('G', pair[0].inverse()),
        ('h', pair[1].clone()),
        ('H', pair[1].inverse()),
    ];
    let inverse_of = |c: char| if c.is_ascii_lowercase() { c.to_ascii_uppercase() } else { c.to_ascii_lowercase() };
    let rank = pair[0].rank();
    let mut frontier: Vec<(String, FreeAut)> = vec![(String::new(), FreeAut::identity(rank))];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for (word, phi) in &frontier {
            for (c, g) in &gens {
                if word.ends_with(inverse_of(*c)) {
                    continue;
                }
                let psi = phi.compose(g).expect("rank");
                let w = format!("{word}{c}");
                if psi.is_identity() {
                    return Some(w);
                }
                next.push((w, psi));
            }
        }
        frontier = next;
    }
    None
}

/// Cross-factor commutation and, within each factor, absence of relations
/// among generator words of length up to `relation_bound`.
pub fn verify_direct_product(p: &StandardProduct, relation_bound: usize) -> Report {
    let mut report = Report::default();
    for (a, fa) in p.factors.iter().enumerate() {
        for fb in &p.factors[a + 1..] {
            let mut witness = None;
            for (i, g) in fa.generators.iter().enumerate() {
                for (j, h) in fb.generators.iter().enumerate() {
                    if witness.is_none() && !g.commutes_with(h) {
                        witness = Some(format!("{}[{i}] and {}[{j}] do not commute", fa.name, fb.name));
                    }
                }
            }
            report.push(format!("commute {} {}", fa.name, fb.name), witness.is_none(), witness);
        }
    }
    for f in &p.factors {
        let rel = first_relation(&f.generators, relation_bound);
        let witness = rel.map(|r| format!("relation {r} (g, h = generators of {})", f.name));
        report.push(format!("free {} up to length {relation_bound}", f.name), witness.is_none(), witness);
    }
    report
}

/// The generators of the search ball: Nielsen moves and their inverses,
/// inversions and adjacent transpositions.
pub fn search_generators(rank: usize) -> Vec<FreeAut> {
    let mut gens: Vec<FreeAut> = Vec::new();
    for g in nielsen_generators(rank) {
        let inv = g.inverse();
        if inv != g {
            gens.push(inv);
        }
        gens.push(g);
    }
    let mut seen = HashSet::new();
    gens.retain(|g| seen.insert(g.images().to_vec()));
    gens
}

/// All automorphisms reachable by at most `depth` search generators that
/// commute with every element of `gens`, sorted by their images.
pub fn centralizer_search(gens: &[FreeAut], depth: usize, budget: usize) -> Result<Vec<FreeAut>> {
    let rank = gens.first().map(FreeAut::rank).ok_or_else(|| Error::Precondition("empty generator list".into()))?;
    let steps = search_generators(rank);
    let mut seen: HashMap<Vec<Word>, ()> = HashMap::new();
    seen.insert(FreeAut::identity(rank).images().to_vec(), ());
    let mut ball = vec![FreeAut::identity(rank)];
    let mut frontier = ball.clone();
    for _ in 0..depth {
        let candidates: Vec<FreeAut> = frontier
            .par_iter()
            .flat_map_iter(|phi| steps.iter().map(move |s| s.compose(phi).expect("rank")))
            .collect();
        let mut next = Vec::new();
        for c in candidates {
            if seen.insert(c.images().to_vec(), ()).is_none() {
                next.push(c);
                if seen.len() > budget {
                    return Err(Error::BudgetExceeded { context: "centralizer search", budget });
                }
            }
        }
        ball.extend(next.iter().cloned());
        frontier = next;
    }
    let mut hits: Vec<FreeAut> =
        ball.into_par_iter().filter(|phi| gens.iter().all(|g| phi.commutes_with(g))).collect();
    hits.sort_by(|a, b| shortlex_cmp_lists(a.images(), b.images()));
    Ok(hits)
}

/// Whether `phi` is `tau^n` for some `|n| <= bound`.
pub fn is_power_of(phi: &FreeAut, tau: &FreeAut, bound: i64) -> bool {
    (-bound..=bound).any(|n| tau.pow(n) == *phi)
}

/// `{ad_{x_i}^2 : i = 1..N}`.
pub fn inner_squares(rank: usize) -> Vec<FreeAut> {
    (1..=rank).map(|i| FreeAut::inner(&Word::letter(Letter::x(i)), rank).pow(2)).collect()
}

/// For every `w ∈ <a1, a2>` with `|w| <= bound`: the `L_1` element of `w` is
/// in the Torelli group exactly when `w` abelianises to zero, and `ad_w` is
/// always in it.
pub fn torelli_factor_check(rank: usize, bound: usize) -> Result<Report> {
    let basis = standard_basis(rank);
    let beta = coordinates(rank, &basis)?;
    let mut report = Report::default();
    let mut l_bad = None;
    let mut i_bad = None;
    let mut count = 0;
    for w in Word::all_up_to(2, bound) {
        count += 1;
        let abelian_zero = w.abelianization(2).iter().all(|&c| c == 0);
        let l1 = &factor_family(rank, std::slice::from_ref(&w), &beta)[0].generators[0];
        if l1.is_torelli() != abelian_zero && l_bad.is_none() {
            l_bad = Some(format!("w = {w}"));
        }
        if !FreeAut::inner(&w, rank).is_torelli() && i_bad.is_none() {
            i_bad = Some(format!("w = {w}"));
        }
    }
    report.push(format!("L1 torelli iff abelian zero ({count} words)"), l_bad.is_none(), l_bad);
    report.push(format!("inner automorphisms torelli ({count} words)"), i_bad.is_none(), i_bad);
    Ok(report)
}

/// The full product report: standard and twisted products, the
/// centralizer searches and the Torelli checks.
pub fn products_report(rank: usize, depth: usize, budget: usize) -> Result<Report> {
    let basis = standard_basis(rank);
    let p = standard_product(rank, &basis)?;
    let mut report = verify_direct_product(&p, 4);
    report.push(format!("factor count 2N-3 = {}", 2 * rank - 3), p.factors.len() == 2 * rank - 3, None);

    let c = centralizer_search(&p.generators(), depth, budget)?;
    let only_id = c.len() == 1 && c[0].is_identity();
    report.push(format!("centralizer of standard product to depth {depth} is trivial"), only_id, (!only_id).then(|| format!("{} elements", c.len())));

    let t = tau(rank, &basis)?;
    let tp = twisted_product(rank, &basis)?;
    let commute = tp.generators().iter().all(|g| g.commutes_with(&t));
    report.push("tau commutes with the twisted product", commute, Some(format!("parameters {:?} (filtered tau-fixed sample)", tau_fixed_candidates().iter().map(Word::to_string).collect::<Vec<_>>())));
    let tc = centralizer_search(&tp.generators(), depth, budget)?;
    let powers = tc.iter().all(|phi| is_power_of(phi, &t, depth as i64));
    report.push(format!("centralizer of twisted product to depth {depth} lies in <tau>"), powers, Some(format!("{} elements", tc.len())));

    let sq = centralizer_search(&inner_squares(rank), depth, budget)?;
    let only_id = sq.len() == 1 && sq[0].is_identity();
    report.push(format!("centralizer of squares of inner generators to depth {depth} is trivial"), only_id, (!only_id).then(|| format!("{} elements", sq.len())));

    report.checks.extend(torelli_factor_check(rank, 6)?.checks);
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_three_shape() {
        let p = standard_product(3, &standard_basis(3)).unwrap();
        assert_eq!(p.factors.len(), 3);
        assert_eq!(p.generators().len(), 6);
        let names: Vec<&str> = p.factors.iter().map(|f| f.name.as_str()).collect();
        assert_eq!(names, ["L1", "R1", "I"]);
        // L1 with w = a1 is lambda_31
        assert_eq!(p.factors[0].generators[0], FreeAut::lambda(3, 3, 1));
        assert_eq!(p.factors[1].generators[1], FreeAut::rho(3, 3, 2));
    }

    #[test]
    fn commutation_examples() {
        let p = standard_product(3, &standard_basis(3)).unwrap();
        let (l, r, i) = (&p.factors[0], &p.factors[1], &p.factors[2]);
        assert!(l.generators[0].commutes_with(&r.generators[1]));
        assert!(l.generators[0].commutes_with(&i.generators[1]));
        assert!(!l.generators[0].commutes_with(&l.generators[1]));
    }

    #[test]
    fn direct_product_reports() {
        for rank in [3, 4] {
            let p = standard_product(rank, &standard_basis(rank)).unwrap();
            assert_eq!(p.factors.len(), 2 * rank - 3);
            let r = verify_direct_product(&p, 4);
            assert!(r.passed(), "{:?}", r.failures());
        }
    }

    #[test]
    fn skewed_basis_product() {
        let basis = Word::parse_list("ab,b,cA").unwrap();
        let p = standard_product(3, &basis).unwrap();
        assert!(verify_direct_product(&p, 3).passed());
        assert!(standard_product(3, &Word::parse_list("a,b,cc").unwrap()).is_err());
    }

    #[test]
    fn corrupted_generator_is_reported() {
        let mut p = standard_product(3, &standard_basis(3)).unwrap();
        p.factors[1].generators[0] = FreeAut::rho(3, 1, 3);
        let r = verify_direct_product(&p, 3);
        let fails = r.failures();
        assert!(!fails.is_empty());
        assert!(fails.iter().any(|c| c.name.contains("R1")));
        assert!(fails[0].witness.as_ref().unwrap().contains("R1[0]"));
    }

    #[test]
    fn relation_detection() {
        let g = FreeAut::rho(3, 1, 2);
        assert_eq!(first_relation(&[g.clone(), g.clone()], 2).as_deref(), Some("gH"));
        let h = FreeAut::inversion(3, 1);
        assert_eq!(first_relation(&[h.clone(), FreeAut::rho(3, 2, 3)], 3).as_deref(), Some("gg"));
    }

    #[test]
    fn tau_fixed_parameters() {
        let c = tau_fixed_candidates();
        assert!(c.len() >= 2);
        assert!(c.contains(&"b".parse().unwrap()));
        assert!(c.contains(&"abA".parse().unwrap()));
    }

    #[test]
    fn lemma_squares_have_trivial_centralizer() {
        let c = centralizer_search(&inner_squares(3), 2, DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(c, vec![FreeAut::identity(3)]);
    }

    #[test]
    fn tau_is_found_in_twisted_centralizer() {
        let basis = standard_basis(3);
        let t = tau(3, &basis).unwrap();
        let c = centralizer_search(&twisted_product(3, &basis).unwrap().generators(), 2, DEFAULT_SEARCH_BUDGET).unwrap();
        assert!(c.contains(&t));
        assert!(c.iter().all(|phi| is_power_of(phi, &t, 2)));
    }

    #[test]
    fn torelli_examples() {
        let beta = FreeAut::identity(3);
        let comm: Word = "abAB".parse().unwrap();
        let l = &factor_family(3, &[comm], &beta)[0].generators[0];
        assert!(l.is_torelli());
        let l = &factor_family(3, &["a".parse().unwrap()], &beta)[0].generators[0];
        assert!(!l.is_torelli());
        assert!(torelli_factor_check(3, 4).unwrap().passed());
    }

    #[test]
    fn budget_is_enforced() {
        assert!(matches!(centralizer_search(&inner_squares(3), 3, 100), Err(Error::BudgetExceeded { .. })));
    }
}
