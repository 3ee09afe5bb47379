//! Brute-force reference computations that share no code with the Whitehead
//! machinery: orbit searches under Nielsen generators with a length cap.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::aut::FreeAut;
use crate::random::nielsen_generators;
use crate::word::{Letter, Word};

/// Extra length allowed above the target bound during orbit searches.
pub const DEFAULT_SLACK: usize = 4;

/// All primitive words of length at most `max_len`, found by breadth-first
/// search from the basis letters under Nielsen generators, visiting only
/// words of length at most `max_len + slack`.
pub fn primitives_up_to(rank: usize, max_len: usize, slack: usize) -> HashSet<Word> {
    let gens = nielsen_generators(rank);
    let cap = max_len + slack;
    let mut seen: HashSet<Word> = Letter::all(rank).map(Word::letter).collect();
    let mut queue: VecDeque<Word> = seen.iter().cloned().collect();
    while let Some(u) = queue.pop_front() {
        for g in &gens {
            let v = g.apply(&u);
            if v.len() <= cap && seen.insert(v.clone()) {
                queue.push_back(v);
            }
        }
    }
    seen.retain(|w| w.len() <= max_len);
    seen
}

/// Breadth-first search for a product of Nielsen generators carrying the
/// tuple to distinct basis letters, with every intermediate tuple of total
/// length at most `cap`. Returns the automorphism found.
pub fn partial_basis_witness(rank: usize, words: &[Word], cap: usize) -> Option<FreeAut> {
    let gens = nielsen_generators(rank);
    let done = |ws: &[Word]| {
        let mut idx: Vec<usize> = ws.iter().filter(|w| w.len() == 1).map(|w| w.letters()[0].index()).collect();
        idx.sort_unstable();
        idx.dedup();
        idx.len() == ws.len()
    };
    let start = words.to_vec();
    let mut parent: HashMap<Vec<Word>, Option<(Vec<Word>, usize)>> = HashMap::from([(start.clone(), None)]);
    let mut queue = VecDeque::from([start]);
    while let Some(ws) = queue.pop_front() {
        if done(&ws) {
            let mut phi = FreeAut::identity(rank);
            let mut cur = ws;
            while let Some(Some((prev, g))) = parent.get(&cur) {
                phi = phi.compose(&gens[*g]).expect("rank");
                cur = prev.clone();
            }
            return Some(phi);
        }
        for (gi, g) in gens.iter().enumerate() {
            let next = g.apply_all(&ws);
            if next.iter().map(Word::len).sum::<usize>() <= cap && !parent.contains_key(&next) {
                parent.insert(next.clone(), Some((ws.clone(), gi)));
                queue.push_back(next);
            }
        }
    }
    None
}

/// Whether `v` disconnects its component, by deleting it and counting.
pub fn is_cut_vertex_brute(adjacency: &[Vec<usize>], v: usize) -> bool {
    let n = adjacency.len();
    let reach = |skip: Option<usize>, from: usize| {
        let mut seen = vec![false; n];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(x) = stack.pop() {
            for &y in &adjacency[x] {
                if Some(y) != skip && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        seen
    };
    let comp = reach(None, v);
    let others: Vec<usize> = (0..n).filter(|&x| x != v && comp[x]).collect();
    match others.first() {
        None => false,
        Some(&start) => {
            let r = reach(Some(v), start);
            others.iter().any(|&x| !r[x])
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_primitive_counts() {
        // rank 2: the 4 letters, and the 8 words x^±1 y^±1 of length 2 with distinct indices
        let p = primitives_up_to(2, 2, DEFAULT_SLACK);
        assert_eq!(p.len(), 12);
        assert!(p.contains(&"ab".parse().unwrap()));
        assert!(!p.contains(&"aa".parse().unwrap()));
    }

    #[test]
    fn slack_is_stable() {
        for (rank, len) in [(2, 5), (3, 4)] {
            assert_eq!(primitives_up_to(rank, len, 2), primitives_up_to(rank, len, 4));
        }
    }

    #[test]
    fn witness_for_conjugated_pair() {
        let ws: Vec<Word> = vec!["abA".parse().unwrap(), "c".parse().unwrap()];
        let phi = partial_basis_witness(3, &ws, 8).unwrap();
        let imgs = phi.apply_all(&ws);
        assert!(imgs.iter().all(|w| w.len() == 1));
        assert!(partial_basis_witness(2, &["aa".parse().unwrap()], 6).is_none());
    }

    #[test]
    fn brute_cut_vertex() {
        // path 0 - 1 - 2 and isolated 3
        let adj = vec![vec![1], vec![0, 2], vec![1], vec![]];
        assert!(is_cut_vertex_brute(&adj, 1));
        assert!(!is_cut_vertex_brute(&adj, 0));
        assert!(!is_cut_vertex_brute(&adj, 3));
    }
}
