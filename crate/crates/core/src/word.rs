//! Letters and freely reduced words over a finite signed alphabet.
//!
//! A word is always stored freely reduced. The text syntax uses `a`..`z` for
//! `x1`..`x26` and upper case for inverses; `x27`/`X27` is the numeric form
//! and `1` is the identity.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A basis letter `x_i` or its inverse.
///
/// Stored as a signed index: `+i` is `x_i`, `-i` is `x_i^-1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter(i32);

impl Letter {
    pub fn new(index: usize, inverse: bool) -> Letter {
        assert!(index >= 1 && index <= i32::MAX as usize, "letter index must be positive");
        let i = index as i32;
        Letter(if inverse { -i } else { i })
    }

    /// The positive letter `x_index`.
    pub fn x(index: usize) -> Letter {
        Letter::new(index, false)
    }

    /// The inverse letter `x_index^-1`.
    pub fn xbar(index: usize) -> Letter {
        Letter::new(index, true)
    }

    pub fn from_signed(value: i32) -> Option<Letter> {
        (value != 0).then_some(Letter(value))
    }

    pub fn signed(self) -> i32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0.unsigned_abs() as usize
    }

    pub fn is_inverse(self) -> bool {
        self.0 < 0
    }

    pub fn inverse(self) -> Letter {
        Letter(-self.0)
    }

    /// Dense position in `0..2N`: `x1, X1, x2, X2, ...`.
    pub fn slot(self) -> usize {
        2 * (self.index() - 1) + usize::from(self.is_inverse())
    }

    pub fn from_slot(slot: usize) -> Letter {
        Letter::new(slot / 2 + 1, slot % 2 == 1)
    }

    /// All `2N` letters of rank `rank` in slot order.
    pub fn all(rank: usize) -> impl Iterator<Item = Letter> + Clone {
        (0..2 * rank).map(Letter::from_slot)
    }

    fn write_alpha(self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let base = if self.is_inverse() { b'A' } else { b'a' };
        write!(f, "{}", (base + (self.index() - 1) as u8) as char)
    }

    fn write_numeric(self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head = if self.is_inverse() { 'X' } else { 'x' };
        write!(f, "{head}{}", self.index())
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.index() <= 26 {
            self.write_alpha(f)
        } else {
            self.write_numeric(f)
        }
    }
}

/// A freely reduced word; the empty word is the identity.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    /// Freely reduces an arbitrary letter sequence. No rank check.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Freely reduces `letters`, rejecting indices outside `1..=rank`.
    pub fn reduce<I: IntoIterator<Item = Letter>>(rank: usize, letters: I) -> Result<Word> {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if l.index() > rank {
                return Err(Error::LetterOutOfRange { index: l.index(), rank });
            }
            if out.last() == Some(&l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Ok(Word(out))
    }

    /// Convenience constructor from signed indices, e.g. `[1, 2, -1]`.
    pub fn from_signed(values: &[i32]) -> Word {
        Word::from_letters(values.iter().map(|&v| Letter::from_signed(v).expect("zero is not a letter")))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// Largest letter index occurring in the word (0 for the identity).
    pub fn max_index(&self) -> usize {
        self.0.iter().map(|l| l.index()).max().unwrap_or(0)
    }

    pub fn fits_rank(&self, rank: usize) -> bool {
        self.max_index() <= rank
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn mul(&self, other: &Word) -> Word {
        let mut out = self.0.clone();
        let mut rest = other.0.as_slice();
        while let (Some(&a), Some(&b)) = (out.last(), rest.first()) {
            if a != b.inverse() {
                break;
            }
            out.pop();
            rest = &rest[1..];
        }
        out.extend_from_slice(rest);
        Word(out)
    }

    /// Product of a sequence of words.
    pub fn product<'a, I: IntoIterator<Item = &'a Word>>(words: I) -> Word {
        words.into_iter().fold(Word::identity(), |acc, w| acc.mul(w))
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// `self * other * self^-1`.
    pub fn conjugate_by(&self, other: &Word) -> Word {
        other.mul(self).mul(&other.inverse())
    }

    /// Splits `u = c * core * c^-1` with `core` cyclically reduced.
    pub fn cyclic_reduce(&self) -> (Word, Word) {
        let n = self.0.len();
        let mut k = 0;
        while 2 * k + 1 < n && self.0[k] == self.0[n - 1 - k].inverse() {
            k += 1;
        }
        (Word(self.0[..k].to_vec()), Word(self.0[k..n - k].to_vec()))
    }

    pub fn is_cyclically_reduced(&self) -> bool {
        match (self.first(), self.last()) {
            (Some(a), Some(b)) => self.len() == 1 || a != b.inverse(),
            _ => true,
        }
    }

    /// Exponent sum of each generator, indexed `0..rank`.
    pub fn abelianization(&self, rank: usize) -> Vec<i64> {
        let mut v = vec![0i64; rank];
        for l in &self.0 {
            v[l.index() - 1] += if l.is_inverse() { -1 } else { 1 };
        }
        v
    }

    /// Whether every letter has index in `indices` (given as a predicate).
    pub fn only_uses(&self, mut allowed: impl FnMut(usize) -> bool) -> bool {
        self.0.iter().all(|l| allowed(l.index()))
    }

    /// Shortlex comparison on the printed form: shorter first, then by text.
    pub fn shortlex_cmp(&self, other: &Word) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }

    /// All freely reduced words of exactly `len` letters in rank `rank`, in
    /// slot order.
    pub fn all_of_length(rank: usize, len: usize) -> Vec<Word> {
        let mut out = vec![Word::identity()];
        for _ in 0..len {
            let mut next = Vec::with_capacity(out.len() * (2 * rank).saturating_sub(1).max(1));
            for w in &out {
                for l in Letter::all(rank) {
                    if w.last() != Some(l.inverse()) {
                        let mut v = w.0.clone();
                        v.push(l);
                        next.push(Word(v));
                    }
                }
            }
            out = next;
        }
        out
    }

    /// All freely reduced words with `1 <= |w| <= max_len`.
    pub fn all_up_to(rank: usize, max_len: usize) -> Vec<Word> {
        (1..=max_len).flat_map(|n| Word::all_of_length(rank, n)).collect()
    }

    /// Parses a comma separated list of words, e.g. `"ab,c,B"`.
    pub fn parse_list(text: &str) -> Result<Vec<Word>> {
        text.split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(Word::from_str)
            .collect()
    }
}

impl From<Letter> for Word {
    fn from(l: Letter) -> Word {
        Word::letter(l)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let numeric = self.max_index() > 26;
        for l in &self.0 {
            if numeric {
                l.write_numeric(f)?;
            } else {
                l.write_alpha(f)?;
            }
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let text: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(Error::Parse(format!("empty word text {s:?} (use `1` for the identity)")));
        }
        if text == ['1'] {
            return Ok(Word::identity());
        }
        let mut letters = Vec::new();
        let mut i = 0;
        while i < text.len() {
            let c = text[i];
            if (c == 'x' || c == 'X') && text.get(i + 1).is_some_and(|d| d.is_ascii_digit()) {
                let mut j = i + 1;
                while j < text.len() && text[j].is_ascii_digit() {
                    j += 1;
                }
                let digits: String = text[i + 1..j].iter().collect();
                let index: usize = digits
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad letter index in {s:?}")))?;
                if index == 0 {
                    return Err(Error::Parse(format!("letter index 0 in {s:?}")));
                }
                letters.push(Letter::new(index, c == 'X'));
                i = j;
            } else if c.is_ascii_lowercase() {
                letters.push(Letter::x((c as u8 - b'a') as usize + 1));
                i += 1;
            } else if c.is_ascii_uppercase() {
                letters.push(Letter::xbar((c as u8 - b'A') as usize + 1));
                i += 1;
            } else {
                return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
            }
        }
        Ok(Word::from_letters(letters))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Word, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Shortlex order on lists of words: total length first, then word by word.
pub fn shortlex_cmp_lists(a: &[Word], b: &[Word]) -> Ordering {
    let total = |ws: &[Word]| ws.iter().map(Word::len).sum::<usize>();
    total(a).cmp(&total(b)).then_with(|| {
        for (x, y) in a.iter().zip(b) {
            let c = x.shortlex_cmp(y);
            if c != Ordering::Equal {
                return c;
            }
        }
        a.len().cmp(&b.len())
    })
}
