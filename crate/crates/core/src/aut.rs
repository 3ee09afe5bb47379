//! Automorphisms of `F_N` given by the images of the basis letters.
//!
//! Composition follows function composition: `phi.compose(&psi)` applies
//! `psi` first, then `phi`. Inner automorphisms are `x -> w x w^-1`, and
//! homology matrices act on column vectors (column `j` is the abelianised
//! image of `x_j`).

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::whitehead;
use crate::word::{Letter, Word};

pub const MAX_RANK: usize = 31;

pub(crate) fn check_rank(rank: usize) -> Result<()> {
    if (2..=MAX_RANK).contains(&rank) {
        Ok(())
    } else {
        Err(Error::BadRank(rank))
    }
}

/// An automorphism of `F_N` with its inverse cached.
#[derive(Debug, Clone, Eq)]
pub struct FreeAut {
    rank: usize,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

impl PartialEq for FreeAut {
    fn eq(&self, other: &FreeAut) -> bool {
        self.rank == other.rank && self.images == other.images
    }
}

impl std::hash::Hash for FreeAut {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.rank.hash(state);
        self.images.hash(state);
    }
}

impl FreeAut {
    pub fn identity(rank: usize) -> FreeAut {
        let images: Vec<Word> = (1..=rank).map(|i| Word::letter(Letter::x(i))).collect();
        FreeAut { rank, inverse_images: images.clone(), images }
    }

    /// Builds an automorphism from images and inverse images, checking that
    /// the two maps really are mutually inverse on the basis.
    pub fn from_parts(images: Vec<Word>, inverse_images: Vec<Word>) -> Result<FreeAut> {
        let rank = images.len();
        check_rank(rank)?;
        if inverse_images.len() != rank {
            return Err(Error::RankMismatch { expected: rank, found: inverse_images.len() });
        }
        for w in images.iter().chain(&inverse_images) {
            if !w.fits_rank(rank) {
                return Err(Error::LetterOutOfRange { index: w.max_index(), rank });
            }
        }
        let aut = FreeAut { rank, images, inverse_images };
        for i in 1..=rank {
            let x = Word::letter(Letter::x(i));
            if aut.apply(&aut.apply_inverse(&x)) != x || aut.apply_inverse(&aut.apply(&x)) != x {
                return Err(Error::NotABasis(rank));
            }
        }
        Ok(aut)
    }

    /// Builds an automorphism from the images alone. The inverse is found by
    /// Whitehead minimisation of the image tuple; fails if the images are not
    /// a basis.
    pub fn from_images(images: Vec<Word>) -> Result<FreeAut> {
        let rank = images.len();
        check_rank(rank)?;
        for w in &images {
            if !w.fits_rank(rank) {
                return Err(Error::LetterOutOfRange { index: w.max_index(), rank });
            }
        }
        let (mins, psi) = whitehead::minimize_tuple(rank, &images)?;
        // psi(images[i]) = mins[i]; these must be a signed permutation.
        let mut sigma_inv = vec![Word::identity(); rank];
        for (i, m) in mins.iter().enumerate() {
            if m.len() != 1 {
                return Err(Error::NotABasis(rank));
            }
            let l = m.letters()[0];
            if !sigma_inv[l.index() - 1].is_empty() {
                return Err(Error::NotABasis(rank));
            }
            sigma_inv[l.index() - 1] = Word::letter(Letter::new(i + 1, l.is_inverse()));
        }
        let sigma_inv = FreeAut::from_parts(sigma_inv, mins)?;
        let inv = sigma_inv.compose(&psi)?;
        FreeAut::from_parts(images, inv.images)
    }

    /// The signed permutation automorphism `x_i -> letters[i]`.
    pub fn signed_permutation(letters: &[Letter]) -> Result<FreeAut> {
        let rank = letters.len();
        let mut inverse = vec![Word::identity(); rank];
        for (i, l) in letters.iter().enumerate() {
            if l.index() > rank || !inverse[l.index() - 1].is_empty() {
                return Err(Error::NotABasis(rank));
            }
            inverse[l.index() - 1] = Word::letter(Letter::new(i + 1, l.is_inverse()));
        }
        FreeAut::from_parts(letters.iter().map(|&l| Word::letter(l)).collect(), inverse)
    }

    /// Right Nielsen automorphism `rho_ij: x_i -> x_i x_j`.
    pub fn rho(rank: usize, i: usize, j: usize) -> FreeAut {
        Self::elementary(rank, i, j, false, false)
    }

    /// Left Nielsen automorphism `lambda_ij: x_i -> x_j x_i`.
    pub fn lambda(rank: usize, i: usize, j: usize) -> FreeAut {
        Self::elementary(rank, i, j, true, false)
    }

    /// `x_i -> x_i x_j^-1`, the inverse of `rho_ij`.
    pub fn rho_inv(rank: usize, i: usize, j: usize) -> FreeAut {
        Self::elementary(rank, i, j, false, true)
    }

    /// `x_i -> x_j^-1 x_i`, the inverse of `lambda_ij`.
    pub fn lambda_inv(rank: usize, i: usize, j: usize) -> FreeAut {
        Self::elementary(rank, i, j, true, true)
    }

    fn elementary(rank: usize, i: usize, j: usize, left: bool, inverse: bool) -> FreeAut {
        assert!(i != j && i >= 1 && j >= 1 && i <= rank && j <= rank);
        let mut id = FreeAut::identity(rank);
        let xi = Word::letter(Letter::x(i));
        let xj = Word::letter(Letter::new(j, inverse));
        let xj_inv = xj.inverse();
        let (img, inv) = if left {
            (xj.mul(&xi), xj_inv.mul(&xi))
        } else {
            (xi.mul(&xj), xi.mul(&xj_inv))
        };
        id.images[i - 1] = img;
        id.inverse_images[i - 1] = inv;
        id
    }

    /// `x_i -> x_i^-1`.
    pub fn inversion(rank: usize, i: usize) -> FreeAut {
        let mut id = FreeAut::identity(rank);
        id.images[i - 1] = Word::letter(Letter::xbar(i));
        id.inverse_images[i - 1] = Word::letter(Letter::xbar(i));
        id
    }

    /// Swaps `x_i` and `x_j`.
    pub fn transposition(rank: usize, i: usize, j: usize) -> FreeAut {
        let mut id = FreeAut::identity(rank);
        id.images.swap(i - 1, j - 1);
        id.inverse_images.swap(i - 1, j - 1);
        id
    }

    /// The inner automorphism `x -> w x w^-1`.
    pub fn inner(w: &Word, rank: usize) -> FreeAut {
        let conj = |v: &Word| (1..=rank).map(|i| Word::letter(Letter::x(i)).conjugate_by(v)).collect();
        FreeAut { rank, images: conj(w), inverse_images: conj(&w.inverse()) }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[Word] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[Word] {
        &self.inverse_images
    }

    pub fn image_of(&self, l: Letter) -> Word {
        let w = &self.images[l.index() - 1];
        if l.is_inverse() {
            w.inverse()
        } else {
            w.clone()
        }
    }

    fn substitute(table: &[Word], u: &Word) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(u.len() * 2);
        for &l in u.letters() {
            let img = &table[l.index() - 1];
            if l.is_inverse() {
                out.extend(img.letters().iter().rev().map(|x| x.inverse()));
            } else {
                out.extend_from_slice(img.letters());
            }
        }
        Word::from_letters(out)
    }

    /// Image of `u`. Panics if `u` uses letters outside the rank.
    pub fn apply(&self, u: &Word) -> Word {
        assert!(u.fits_rank(self.rank), "word {u} does not fit rank {}", self.rank);
        Self::substitute(&self.images, u)
    }

    pub fn try_apply(&self, u: &Word) -> Result<Word> {
        if !u.fits_rank(self.rank) {
            return Err(Error::RankMismatch { expected: self.rank, found: u.max_index() });
        }
        Ok(Self::substitute(&self.images, u))
    }

    pub fn apply_inverse(&self, u: &Word) -> Word {
        assert!(u.fits_rank(self.rank), "word {u} does not fit rank {}", self.rank);
        Self::substitute(&self.inverse_images, u)
    }

    pub fn apply_all(&self, words: &[Word]) -> Vec<Word> {
        words.iter().map(|w| self.apply(w)).collect()
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &FreeAut) -> Result<FreeAut> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { expected: self.rank, found: other.rank });
        }
        Ok(FreeAut {
            rank: self.rank,
            images: other.images.iter().map(|w| self.apply(w)).collect(),
            inverse_images: self.inverse_images.iter().map(|w| other.apply_inverse(w)).collect(),
        })
    }

    pub fn inverse(&self) -> FreeAut {
        FreeAut { rank: self.rank, images: self.inverse_images.clone(), inverse_images: self.images.clone() }
    }

    pub fn pow(&self, n: i64) -> FreeAut {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeAut::identity(self.rank);
        for _ in 0..n.unsigned_abs() {
            out = out.compose(&base).expect("same rank");
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, w)| w.len() == 1 && w.letters()[0] == Letter::x(i + 1))
    }

    pub fn commutes_with(&self, other: &FreeAut) -> bool {
        self.rank == other.rank
            && (0..self.rank).all(|i| self.apply(&other.images[i]) == other.apply(&self.images[i]))
    }

    /// `[self, other] = self other self^-1 other^-1`.
    pub fn commutator(&self, other: &FreeAut) -> Result<FreeAut> {
        self.compose(other)?.compose(&self.inverse())?.compose(&other.inverse())
    }

    /// Sum of image lengths.
    pub fn size(&self) -> usize {
        self.images.iter().map(Word::len).sum()
    }

    pub fn homology_matrix(&self) -> HomologyMatrix {
        let cols: Vec<Vec<i64>> = self.images.iter().map(|w| w.abelianization(self.rank)).collect();
        let n = self.rank;
        HomologyMatrix((0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect())
    }

    /// Whether the automorphism acts trivially on `H_1(F_N)`.
    pub fn is_torelli(&self) -> bool {
        self.homology_matrix().is_identity()
    }
}

impl fmt::Display for FreeAut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, w) in self.images.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} -> {}", Letter::x(i + 1), w)?;
        }
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct FreeAutRepr {
    rank: usize,
    images: Vec<Word>,
    inverse_images: Vec<Word>,
}

impl Serialize for FreeAut {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        FreeAutRepr {
            rank: self.rank,
            images: self.images.clone(),
            inverse_images: self.inverse_images.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for FreeAut {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<FreeAut, D::Error> {
        let r = FreeAutRepr::deserialize(d)?;
        if r.images.len() != r.rank {
            return Err(serde::de::Error::custom("image count differs from rank"));
        }
        FreeAut::from_parts(r.images, r.inverse_images).map_err(serde::de::Error::custom)
    }
}

/// Integer matrix of the induced action on `H_1(F_N) = Z^N`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct HomologyMatrix(pub Vec<Vec<i64>>);

impl HomologyMatrix {
    pub fn identity(n: usize) -> HomologyMatrix {
        HomologyMatrix((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_identity(&self) -> bool {
        *self == HomologyMatrix::identity(self.dim())
    }

    /// Fraction-free (Bareiss) determinant.
    pub fn determinant(&self) -> i64 {
        let n = self.dim();
        let mut m: Vec<Vec<i128>> = self.0.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n {
            if m[k][k] == 0 {
                match (k + 1..n).find(|&r| m[r][k] != 0) {
                    Some(r) => {
                        m.swap(k, r);
                        sign = -sign;
                    }
                    None => return 0,
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
                }
            }
            prev = m[k][k];
        }
        if n == 0 {
            1
        } else {
            (sign * m[n - 1][n - 1]) as i64
        }
    }
}

impl Mul for &HomologyMatrix {
    type Output = HomologyMatrix;

    fn mul(self, rhs: &HomologyMatrix) -> HomologyMatrix {
        let n = self.dim();
        HomologyMatrix(
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| self.0[i][k] * rhs.0[k][j]).sum()).collect())
                .collect(),
        )
    }
}
