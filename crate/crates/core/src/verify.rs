//! Executable acceptance checks. Each check returns a [`CriterionReport`]
//! with its own pass/fail verdict, which includes the time limit.

use std::time::{Duration, Instant};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::aut::FreeAut;
use crate::factorgraph::enumerate_factors;
use crate::oracle;
use crate::products::{self, centralizer_search, inner_squares, standard_basis, standard_product, DEFAULT_SEARCH_BUDGET};
use crate::random;
use crate::rigidity::{characterize_standard, corrupted_hexagon, crawl, standard_apartment, validate_chain};
use crate::whitehead::{
    antipode_witness_word, component_moves, graded_antipode, has_full_support, is_partial_basis, is_primitive,
    reducing_letters, GalVerdict, Vertex, WhiteheadGraph,
};
use crate::word::{Letter, Word};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub seed: u64,
    pub budget: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { seed: 0, budget: DEFAULT_SEARCH_BUDGET }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriterionReport {
    pub id: usize,
    pub name: String,
    pub checked: usize,
    pub violations: usize,
    pub elapsed_ms: f64,
    /// `None` when the criterion has no time limit.
    pub limit_ms: Option<f64>,
    pub passed: bool,
    pub detail: String,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        let limit = self.limit_ms.map(|l| format!(" (limit {l:.0} ms)")).unwrap_or_default();
        format!(
            "criterion {:>2} {}: {} checked, {} violations, {:.1} ms{} -- {}{}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.checked,
            self.violations,
            self.elapsed_ms,
            limit,
            self.name,
            if self.detail.is_empty() { String::new() } else { format!(" [{}]", self.detail) }
        )
    }
}

struct Tally {
    checked: usize,
    violations: usize,
    first: Option<String>,
}

impl Tally {
    fn new() -> Tally {
        Tally { checked: 0, violations: 0, first: None }
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.violations += 1;
            if self.first.is_none() {
                self.first = Some(what());
            }
        }
    }

    fn error(&mut self, e: crate::error::Error) {
        self.record(false, || format!("error: {e}"));
    }
}

fn finish(id: usize, name: &str, t: Tally, elapsed: Duration, limit: Option<Duration>, detail: String) -> CriterionReport {
    let elapsed_ms = elapsed.as_secs_f64() * 1e3;
    let limit_ms = limit.map(|l| l.as_secs_f64() * 1e3);
    let in_time = limit_ms.is_none_or(|l| elapsed_ms <= l);
    let detail = match t.first {
        Some(f) if detail.is_empty() => format!("first violation: {f}"),
        Some(f) => format!("{detail}; first violation: {f}"),
        None => detail,
    };
    CriterionReport {
        id,
        name: name.to_string(),
        checked: t.checked,
        violations: t.violations,
        elapsed_ms,
        limit_ms,
        passed: t.violations == 0 && t.checked > 0 && in_time,
        detail,
    }
}

fn lv(s: &str) -> Vertex {
    Vertex::Letter(s.parse::<Word>().expect("literal").letters()[0])
}

/// Whitehead graph of `abcb` has exactly the expected edge multiset.
pub fn criterion_1() -> CriterionReport {
    let u: Word = "abcb".parse().expect("literal");
    let start = Instant::now();
    let g = WhiteheadGraph::of_word(3, &u);
    let elapsed = start.elapsed();
    let mut t = Tally::new();
    let norm = |e: &[(Vertex, Vertex)]| {
        let mut v: Vec<(Vertex, Vertex)> = e.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        v.sort();
        v
    };
    let expected = norm(&[
        (lv("a"), lv("B")),
        (lv("b"), lv("C")),
        (lv("c"), lv("B")),
        (Vertex::Base, lv("A")),
        (Vertex::Base, lv("b")),
    ]);
    match g {
        Ok(g) => {
            let got = norm(g.edges());
            t.record(got == expected, || format!("edges {:?}", g.edge_names()));
        }
        Err(e) => t.error(e),
    }
    finish(1, "Whitehead graph of abcb", t, elapsed, Some(Duration::from_millis(1)), String::new())
}

/// Valences of `x` and `x̄` agree on random words.
pub fn criterion_2(cfg: &VerifyConfig) -> CriterionReport {
    let mut rng = random::rng(cfg.seed);
    let words: Vec<(usize, Word)> = (0..10_000)
        .map(|_| {
            let rank = rng.gen_range(2..=4);
            let len = rng.gen_range(1..=20);
            (rank, random::reduced_word(&mut rng, rank, len))
        })
        .collect();
    let start = Instant::now();
    let mut t = Tally::new();
    for (rank, u) in &words {
        match WhiteheadGraph::of_word(*rank, u) {
            Ok(g) => {
                let ok = Letter::all(*rank).all(|l| g.valence(Vertex::Letter(l)) == g.valence(Vertex::Letter(l.inverse())));
                t.record(ok, || format!("{u} in rank {rank}"));
            }
            Err(e) => t.error(e),
        }
    }
    finish(2, "valence symmetry on 10,000 random words", t, start.elapsed(), Some(Duration::from_secs(5)), String::new())
}

/// `|u| - |φ(u)|` equals the number of edges from `a` to `C` for component
/// moves.
pub fn criterion_3(cfg: &VerifyConfig) -> CriterionReport {
    let mut rng = random::rng(cfg.seed.wrapping_add(3));
    let start = Instant::now();
    let mut t = Tally::new();
    let mut positive = 0;
    while t.checked < 1000 {
        let rank = rng.gen_range(2..=4);
        let len = rng.gen_range(1..=20);
        let u = random::reduced_word(&mut rng, rank, len);
        let g = match WhiteheadGraph::of_word(rank, &u) {
            Ok(g) => g,
            Err(e) => {
                t.error(e);
                continue;
            }
        };
        let moves = component_moves(&g);
        if moves.is_empty() {
            continue;
        }
        let (m, _) = moves[rng.gen_range(0..moves.len())];
        let a = Vertex::Letter(m.acting());
        let c = m.side().without(a);
        // count from the raw edge list rather than the adjacency counts
        let edges = g.edges().iter().filter(|&&(x, y)| (x == a && c.contains(y)) || (y == a && c.contains(x))).count() as i64;
        let drop = u.len() as i64 - m.apply(&u).len() as i64;
        if drop > 0 {
            positive += 1;
        }
        t.record(drop == edges, || format!("{u} under {m}: drop {drop}, edges {edges}"));
    }
    finish(3, "length drop equals edge count on 1,000 component moves", t, start.elapsed(), Some(Duration::from_secs(5)), format!("{positive} strictly reducing"))
}

fn primitivity_sweep() -> Vec<(usize, usize)> {
    vec![(2, 6), (3, 5)]
}

/// `is_primitive` agrees with the orbit oracle on every short word.
pub fn criterion_4() -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut primitives = 0;
    for (rank, len) in primitivity_sweep() {
        let truth = oracle::primitives_up_to(rank, len, oracle::DEFAULT_SLACK);
        for u in Word::all_up_to(rank, len) {
            match is_primitive(rank, &u) {
                Ok(p) => {
                    primitives += usize::from(p);
                    t.record(p == truth.contains(&u), || format!("{u} in rank {rank}: library {p}"));
                }
                Err(e) => t.error(e),
            }
        }
    }
    finish(4, "primitivity agrees with the orbit oracle", t, start.elapsed(), Some(Duration::from_secs(60)), format!("{primitives} primitive words"))
}

/// Every primitive word longer than a letter has a reducing letter.
pub fn criterion_5() -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    for (rank, len) in primitivity_sweep() {
        for u in oracle::primitives_up_to(rank, len, oracle::DEFAULT_SLACK) {
            if u.len() <= 1 {
                continue;
            }
            match reducing_letters(rank, &u) {
                Ok(r) => t.record(!r.is_empty(), || format!("{u} in rank {rank}")),
                Err(e) => t.error(e),
            }
        }
    }
    finish(5, "non-letter primitives have reducing letters", t, start.elapsed(), None, String::new())
}

/// The witness word is primitive and is the image of `x2` under the product
/// of Nielsen powers, read as function composition.
pub fn criterion_6() -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut orders = Vec::new();
    for k in 2..=4 {
        let rank = k + 1;
        let p = antipode_witness_word(k);
        match is_primitive(rank, &p) {
            Ok(ok) => t.record(ok, || format!("{p} not primitive in rank {rank}")),
            Err(e) => t.error(e),
        }
        let mut factors: Vec<FreeAut> = (2..=k).map(|j| FreeAut::rho(rank, 1, j).pow(2)).collect();
        factors.push(FreeAut::lambda(rank, 2, 1).pow(2));
        let x2 = Word::letter(Letter::x(2));
        let functional = factors.iter().rev().fold(FreeAut::identity(rank), |acc, f| f.compose(&acc).expect("rank"));
        let sequential = factors.iter().fold(FreeAut::identity(rank), |acc, f| f.compose(&acc).expect("rank"));
        let hit_f = functional.apply(&x2) == p;
        let hit_s = sequential.apply(&x2) == p;
        orders.push(format!("k={k}: {}", if hit_f { "function composition" } else if hit_s { "left-to-right" } else { "neither" }));
        t.record(hit_f || hit_s, || format!("k = {k}: image of x2 is {}", functional.apply(&x2)));
    }
    finish(6, "antipode witness p is primitive and equals the image of x2", t, start.elapsed(), Some(Duration::from_secs(1)), orders.join(", "))
}

/// Exactly one verdict of the trichotomy holds, and witnesses have full
/// support.
pub fn criterion_7() -> CriterionReport {
    let (rank, k) = (3, 2);
    let start = Instant::now();
    let mut t = Tally::new();
    let mut prims: Vec<Word> = oracle::primitives_up_to(rank, 6, oracle::DEFAULT_SLACK).into_iter().collect();
    prims.sort_by(Word::shortlex_cmp);
    let a_basis: Vec<Word> = (1..=k).map(|i| Word::letter(Letter::x(i))).collect();
    let mut counts = [0usize; 3];
    for u in &prims {
        let in_a = u.only_uses(|i| i <= k);
        let mut tuple = a_basis.clone();
        tuple.push(u.clone());
        let carrier_holds = match is_partial_basis(rank, &tuple) {
            Ok(b) => !in_a && b,
            Err(e) => {
                t.error(e);
                continue;
            }
        };
        let verdict = match graded_antipode(rank, k, u) {
            Ok(v) => v,
            Err(e) => {
                t.error(e);
                continue;
            }
        };
        let ok = match &verdict {
            GalVerdict::InA => {
                counts[0] += 1;
                in_a && !carrier_holds
            }
            GalVerdict::Carrier { phi } => {
                counts[1] += 1;
                !in_a
                    && carrier_holds
                    && a_basis.iter().all(|x| phi.apply(x) == *x)
                    && phi.apply(u) == Word::letter(Letter::x(k + 1))
            }
            GalVerdict::Witness(w) => {
                counts[2] += 1;
                let shape = w.w == Word::product([&w.p, u, &w.p.inverse(), u, &w.p]);
                let p_ok = w.p.only_uses(|i| i <= k) && is_primitive(rank, &w.p).unwrap_or(false);
                let support = has_full_support(rank, &w.w).unwrap_or(false);
                !in_a && !carrier_holds && shape && p_ok && support && w.full_support
            }
        };
        t.record(ok, || format!("{u}: {}", verdict.name()));
    }
    let detail = format!("in A {}, carrier {}, witness {}", counts[0], counts[1], counts[2]);
    finish(7, "graded antipode trichotomy on primitives of length <= 6", t, start.elapsed(), Some(Duration::from_secs(600)), detail)
}

/// Distinct rank-2 factors in the `(3, 2, 4)` truncation meet in rank <= 1.
pub fn criterion_8() -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut detail = String::new();
    match enumerate_factors(3, 2, 4) {
        Ok(g) => {
            let twos = g.vertices().iter().filter(|v| v.rank == 2).count();
            detail = format!("{} vertices, {} of rank 2", g.vertex_count(), twos);
            match g.noncyclic_intersections() {
                Ok(bad) => {
                    let pairs = twos * twos.saturating_sub(1) / 2;
                    t.checked = pairs;
                    t.violations = bad.len();
                    if let Some(&(i, j)) = bad.first() {
                        t.first = Some(format!("{} and {}", g.vertices()[i].label(), g.vertices()[j].label()));
                    }
                }
                Err(e) => t.error(e),
            }
        }
        Err(e) => t.error(e),
    }
    finish(8, "cyclic intersections in the (3, 2, 4) truncation", t, start.elapsed(), Some(Duration::from_secs(120)), detail)
}

fn random_basis<R: Rng>(rng: &mut R, rank: usize, k: usize, steps: usize) -> (FreeAut, Vec<Word>) {
    let phi = random::automorphism(rng, rank, steps);
    let basis = (1..=k).map(|i| phi.apply(&Word::letter(Letter::x(i)))).collect();
    (phi, basis)
}

/// Standard apartments are recognised and rebuilt; corrupted hexagons are
/// rejected.
pub fn criterion_9(cfg: &VerifyConfig) -> CriterionReport {
    let mut rng = random::rng(cfg.seed.wrapping_add(9));
    let start = Instant::now();
    let mut t = Tally::new();
    for i in 0..100 {
        let rank = if i % 2 == 0 { 3 } else { 4 };
        let steps = rng.gen_range(2..=6);
        let (_, basis) = random_basis(&mut rng, rank, 3, steps);
        let verdict = standard_apartment(rank, &basis).and_then(|a| characterize_standard(&a.to_putative()));
        match verdict {
            Ok(v) => t.record(v, || format!("standard apartment of {basis:?} rejected")),
            Err(e) => t.error(e),
        }
    }
    for i in 0..100 {
        let rank = if i % 2 == 0 { 3 } else { 4 };
        let steps = rng.gen_range(2..=6);
        let (_, basis) = random_basis(&mut rng, rank, 3, steps);
        match corrupted_hexagon(rank, &basis).and_then(|h| characterize_standard(&h)) {
            Ok(v) => t.record(!v, || format!("corrupted hexagon of {basis:?} accepted")),
            Err(e) => t.error(e),
        }
    }
    finish(9, "standard apartments accepted, corrupted hexagons rejected", t, start.elapsed(), Some(Duration::from_secs(60)), String::new())
}

/// Crawling chains between random bases of a rank-3 factor of `F_4`.
pub fn criterion_10(cfg: &VerifyConfig) -> CriterionReport {
    let mut rng = random::rng(cfg.seed.wrapping_add(10));
    let start = Instant::now();
    let mut t = Tally::new();
    let mut total_len = 0;
    let gens = random::nielsen_generators(3);
    for _ in 0..50 {
        let steps = rng.gen_range(2..=5);
        let (phi, from) = random_basis(&mut rng, 4, 3, steps);
        let applications = rng.gen_range(1..=5);
        let mut g = FreeAut::identity(3);
        for _ in 0..applications {
            let s = &gens[rng.gen_range(0..gens.len())];
            let s = if rng.gen_bool(0.5) { s.inverse() } else { s.clone() };
            g = g.compose(&s).expect("rank");
        }
        let to: Vec<Word> = g.images().iter().map(|w| phi.apply(w)).collect();
        match crawl(4, &from, &to).and_then(|c| validate_chain(&c, &from, &to).map(|bad| (c, bad))) {
            Ok((c, bad)) => {
                total_len += c.len();
                t.record(bad.is_empty(), || format!("{from:?} -> {to:?}: {}", bad.join("; ")));
            }
            Err(e) => t.error(e),
        }
    }
    finish(10, "crawling chains for 50 basis pairs", t, start.elapsed(), Some(Duration::from_secs(120)), format!("total chain length {total_len}"))
}

/// Centralizer balls of depth 3 for the standard product and for the
/// squares of the inner generators contain only the identity.
pub fn criterion_11(cfg: &VerifyConfig) -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    let mut sizes = Vec::new();
    let sets = [
        ("standard product", standard_product(3, &standard_basis(3)).map(|p| p.generators())),
        ("squares of inner generators", Ok(inner_squares(3))),
    ];
    for (name, gens) in sets {
        match gens.and_then(|g| centralizer_search(&g, 3, cfg.budget)) {
            Ok(c) => {
                sizes.push(format!("{name}: {}", c.len()));
                t.record(c.len() == 1 && c[0].is_identity(), || format!("{name}: {} elements", c.len()));
            }
            Err(e) => t.error(e),
        }
    }
    finish(11, "centralizers of depth 3 are trivial", t, start.elapsed(), Some(Duration::from_secs(300)), sizes.join(", "))
}

/// Torelli membership of `L_1` elements and inner automorphisms.
pub fn criterion_12() -> CriterionReport {
    let start = Instant::now();
    let mut t = Tally::new();
    match products::torelli_factor_check(3, 6) {
        Ok(r) => {
            for c in r.checks {
                t.record(c.status == products::Status::Pass, || format!("{}: {:?}", c.name, c.witness));
            }
        }
        Err(e) => t.error(e),
    }
    for u in Word::all_up_to(3, 4) {
        t.record(FreeAut::inner(&u, 3).is_torelli(), || format!("ad_{u}"));
    }
    finish(12, "Torelli membership of L1 elements and inner automorphisms", t, start.elapsed(), Some(Duration::from_secs(30)), String::new())
}

pub fn run_criterion(id: usize, cfg: &VerifyConfig) -> Option<CriterionReport> {
    Some(match id {
        1 => criterion_1(),
        2 => criterion_2(cfg),
        3 => criterion_3(cfg),
        4 => criterion_4(),
        5 => criterion_5(),
        6 => criterion_6(),
        7 => criterion_7(),
        8 => criterion_8(),
        9 => criterion_9(cfg),
        10 => criterion_10(cfg),
        11 => criterion_11(cfg),
        12 => criterion_12(),
        _ => return None,
    })
}

pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionReport> {
    (1..=12).filter_map(|id| run_criterion(id, cfg)).collect()
}

pub fn all_passed(reports: &[CriterionReport]) -> bool {
    reports.iter().all(|r| r.passed)
}
