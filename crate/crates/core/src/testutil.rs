use proptest::prelude::*;

use crate::aut::FreeAut;
use crate::random;
use crate::word::{Letter, Word};

pub fn arb_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec(0..2 * rank, 0..=max_len).prop_map(|slots| Word::from_letters(slots.into_iter().map(Letter::from_slot)))
}

pub fn arb_nonempty_word(rank: usize, max_len: usize) -> impl Strategy<Value = Word> {
    arb_word(rank, max_len).prop_filter("nonempty", |w| !w.is_empty())
}

pub fn arb_aut(rank: usize, steps: usize) -> impl Strategy<Value = FreeAut> {
    any::<u64>().prop_map(move |seed| random::automorphism(&mut random::rng(seed), rank, steps))
}
