//! Cross-checks of the Whitehead and Stallings machinery against brute force.

use std::collections::{HashSet, VecDeque};

use proptest::prelude::*;
use rand::Rng;

use whlab::oracle::{is_cut_vertex_brute, partial_basis_witness};
use whlab::random::{self, nielsen_generators};
use whlab::whitehead::{graded_antipode, has_full_support, is_partial_basis, minimize, straightening_aut, GalVerdict};
use whlab::{CoreGraph, FreeAut, Letter, Vertex, WhiteheadGraph, Word};

fn word_strategy(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    proptest::collection::vec((1..=rank, any::<bool>()), 1..=max_len)
        .prop_map(|ls| Word::from_letters(ls.into_iter().map(|(i, inv)| Letter::new(i, inv))))
        .prop_filter("nonempty", |w| !w.is_empty())
}

fn adjacency(g: &WhiteheadGraph) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); 2 * g.rank() + 1];
    for &(a, b) in g.edges() {
        adj[a.id()].push(b.id());
        adj[b.id()].push(a.id());
    }
    adj
}

/// Words in the Nielsen orbit of `u` reachable without exceeding `cap`.
fn orbit(rank: usize, u: &Word, cap: usize) -> HashSet<Word> {
    let gens = nielsen_generators(rank);
    let mut seen = HashSet::from([u.clone()]);
    let mut queue = VecDeque::from([u.clone()]);
    while let Some(x) = queue.pop_front() {
        for g in &gens {
            let y = g.apply(&x);
            if y.len() <= cap && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    seen
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn cut_vertices_match_brute_force(rank in 2usize..=4, u in word_strategy(4, 16)) {
        prop_assume!(u.fits_rank(rank));
        let core = u.cyclic_reduce().1;
        let mut graphs = vec![WhiteheadGraph::of_word(rank, &u).unwrap()];
        if !core.is_empty() {
            graphs.push(WhiteheadGraph::cyclic(rank, &core).unwrap());
        }
        for g in graphs {
            let adj = adjacency(&g);
            for id in 0..adj.len() {
                let v = Vertex::from_id(id);
                if g.vertices().any(|x| x == v) {
                    prop_assert_eq!(g.is_cut_vertex(v), is_cut_vertex_brute(&adj, id), "{} at {}", u, v);
                }
            }
        }
    }

    #[test]
    fn minimum_is_an_image_and_beats_bounded_search(u in word_strategy(2, 7)) {
        let (m, phi) = minimize(2, &u).unwrap();
        prop_assert_eq!(phi.apply(&u), m.clone());
        let best = orbit(2, &u, u.len() + 2).iter().map(Word::len).min().unwrap();
        prop_assert!(m.len() <= best, "{} minimised to {} but the orbit reaches length {}", u, m, best);
    }

    #[test]
    fn folded_subgroups_contain_their_products(gens in proptest::collection::vec(word_strategy(3, 5), 1..4), picks in proptest::collection::vec((0usize..4, any::<bool>()), 0..6)) {
        let g = CoreGraph::fold(3, &gens).unwrap();
        let mut x = Word::identity();
        for (i, inv) in picks {
            let h = &gens[i % gens.len()];
            x = x.mul(&if inv { h.inverse() } else { h.clone() });
        }
        prop_assert!(g.member(&x));
        for b in g.basis() {
            prop_assert!(g.member(&b));
        }
        prop_assert!(CoreGraph::fold(3, &g.basis()).unwrap().equals(&g));
    }

    #[test]
    fn automorphic_images_of_factors_are_factors(seed in any::<u64>(), k in 1usize..=2) {
        let mut rng = random::rng(seed);
        let phi = random::automorphism(&mut rng, 3, 5);
        let basis: Vec<Word> = (1..=k).map(|i| phi.apply(&Word::letter(Letter::x(i)))).collect();
        prop_assert!(is_partial_basis(3, &basis).unwrap());
        let st = straightening_aut(3, &basis, 100_000).unwrap().unwrap();
        for (i, b) in basis.iter().enumerate() {
            prop_assert_eq!(st.apply(b), Word::letter(Letter::x(i + 1)));
        }
        prop_assert!(CoreGraph::fold(3, &basis).unwrap().is_free_factor().unwrap());
    }

    #[test]
    fn antipode_verdicts_are_consistent(seed in any::<u64>()) {
        let mut rng = random::rng(seed);
        let steps = rng.gen_range(1..6);
        let phi = random::automorphism(&mut rng, 3, steps);
        let u = phi.apply(&Word::letter(Letter::x(rng.gen_range(1..=3))));
        prop_assume!(u.len() <= 14);
        match graded_antipode(3, 2, &u).unwrap() {
            GalVerdict::InA => prop_assert!(u.only_uses(|i| i <= 2)),
            GalVerdict::Carrier { phi } => {
                prop_assert_eq!(phi.apply(&u), Word::letter(Letter::x(3)));
                prop_assert_eq!(phi.apply(&Word::letter(Letter::x(1))), Word::letter(Letter::x(1)));
                prop_assert_eq!(phi.apply(&Word::letter(Letter::x(2))), Word::letter(Letter::x(2)));
            }
            GalVerdict::Witness(w) => {
                prop_assert!(!is_partial_basis(3, &[Word::letter(Letter::x(1)), Word::letter(Letter::x(2)), u.clone()]).unwrap());
                prop_assert!(has_full_support(3, &w.w).unwrap());
            }
        }
    }
}

#[test]
fn partial_bases_agree_with_orbit_search() {
    // every pair found by the oracle is accepted; every accepted pair is
    // certified by an explicit straightening automorphism
    let words: Vec<Word> = Word::all_up_to(2, 3).into_iter().filter(|w| !w.is_empty()).collect();
    let mut accepted = 0;
    for (i, a) in words.iter().enumerate() {
        for b in &words[i + 1..] {
            let pair = vec![a.clone(), b.clone()];
            let lib = is_partial_basis(2, &pair).unwrap();
            if partial_basis_witness(2, &pair, 8).is_some() {
                assert!(lib, "{a}, {b}");
            }
            if lib {
                accepted += 1;
                let st = straightening_aut(2, &pair, 100_000).unwrap().unwrap();
                assert_eq!(st.apply_all(&pair), vec![Word::letter(Letter::x(1)), Word::letter(Letter::x(2))]);
            }
        }
    }
    assert!(accepted > 0);
}

#[test]
fn full_support_agrees_with_orbit_search_in_rank_two() {
    // in rank 2 a proper factor is cyclic, so u lacks full support exactly
    // when some image is conjugate into a single letter
    for u in Word::all_up_to(2, 5) {
        if u.is_empty() {
            continue;
        }
        let in_factor = orbit(2, &u, u.len() + 4).iter().any(|x| {
            let core = x.cyclic_reduce().1;
            let first = core.letters()[0].index();
            core.only_uses(|i| i == first)
        });
        assert_eq!(has_full_support(2, &u).unwrap(), !in_factor, "{u}");
    }
}

#[test]
fn inverse_moves_are_inverse() {
    for rank in 2..=3 {
        for m in whlab::whitehead::all_moves(rank) {
            let id: FreeAut = m.automorphism().compose(&m.inverse_move().automorphism()).unwrap();
            assert!(id.is_identity(), "{m}");
        }
    }
}
