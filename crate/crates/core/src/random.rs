//! Seeded sampling of words and automorphisms.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::aut::FreeAut;
use crate::word::{Letter, Word};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A uniformly random reduced word of exactly `len` letters.
pub fn reduced_word<R: Rng>(rng: &mut R, rank: usize, len: usize) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len {
        let l = Letter::from_slot(rng.gen_range(0..2 * rank));
        if out.last() != Some(&l.inverse()) {
            out.push(l);
        }
    }
    Word::from_letters(out)
}

/// The Nielsen generators `rho_ij`, `lambda_ij`, inversions and
/// transpositions of rank `rank`.
pub fn nielsen_generators(rank: usize) -> Vec<FreeAut> {
    let mut gens = Vec::new();
    for i in 1..=rank {
        for j in 1..=rank {
            if i != j {
                gens.push(FreeAut::rho(rank, i, j));
                gens.push(FreeAut::lambda(rank, i, j));
            }
        }
    }
    for i in 1..=rank {
        gens.push(FreeAut::inversion(rank, i));
    }
    for i in 1..rank {
        gens.push(FreeAut::transposition(rank, i, i + 1));
    }
    gens
}

/// A product of `steps` random Nielsen generators and their inverses.
pub fn automorphism<R: Rng>(rng: &mut R, rank: usize, steps: usize) -> FreeAut {
    let gens = nielsen_generators(rank);
    let mut phi = FreeAut::identity(rank);
    for _ in 0..steps {
        let g = gens.choose(rng).expect("nonempty");
        let g = if rng.gen_bool(0.5) { g.inverse() } else { g.clone() };
        phi = g.compose(&phi).expect("same rank");
    }
    phi
}
