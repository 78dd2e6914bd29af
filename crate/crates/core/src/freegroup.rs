//! Reduced words and automorphisms of finitely generated free groups.
//!
//! A letter is a nonzero `i32`: `k` stands for generator `k` (1-based) and `-k`
//! for its inverse. Words are reduced eagerly, so two words are equal as group
//! elements exactly when their letter vectors are equal.

use std::fmt;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FreeWord {
    rank: usize,
    letters: Vec<i32>,
}

/// Appends `letter` to an already reduced buffer, cancelling if possible.
#[inline]
fn push_reduced(buf: &mut Vec<i32>, letter: i32) {
    if buf.last() == Some(&-letter) {
        buf.pop();
    } else {
        buf.push(letter);
    }
}

impl FreeWord {
    /// Freely reduces `raw`, checking every index against `rank`.
    pub fn reduce(rank: usize, raw: &[i32]) -> Result<Self> {
        let mut letters = Vec::with_capacity(raw.len());
        for &l in raw {
            if l == 0 || l.unsigned_abs() as usize > rank {
                return Err(Error::IndexOutOfRange { index: l as i64, rank });
            }
            push_reduced(&mut letters, l);
        }
        Ok(FreeWord { rank, letters })
    }

    pub fn identity(rank: usize) -> Self {
        FreeWord { rank, letters: Vec::new() }
    }

    /// The word consisting of generator `k` (1-based).
    pub fn generator(rank: usize, k: usize) -> Self {
        assert!(k >= 1 && k <= rank, "generator {k} out of range for rank {rank}");
        FreeWord { rank, letters: vec![k as i32] }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[i32] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Self {
        FreeWord { rank: self.rank, letters: self.letters.iter().rev().map(|l| -l).collect() }
    }

    /// Product `self · other` (left to right).
    pub fn mul(&self, other: &FreeWord) -> Self {
        assert_eq!(self.rank, other.rank, "free word rank mismatch");
        let mut letters = self.letters.clone();
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        FreeWord { rank: self.rank, letters }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeWord::identity(self.rank);
        for _ in 0..n.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// Exponent sum of generator `k` (1-based).
    pub fn exponent_sum(&self, k: usize) -> i64 {
        self.letters
            .iter()
            .map(|&l| if l as usize == k { 1 } else if (-l) as usize == k { -1 } else { 0 })
            .sum()
    }

    /// Exponent sums of all generators.
    pub fn abelianize(&self) -> Vec<i64> {
        let mut v = vec![0i64; self.rank];
        for &l in &self.letters {
            v[l.unsigned_abs() as usize - 1] += l.signum() as i64;
        }
        v
    }

    /// Substitutes `images[k-1]` for generator `k`, reducing as it goes.
    pub fn substitute(&self, images: &[FreeWord]) -> FreeWord {
        let target_rank = images.first().map_or(self.rank, |w| w.rank);
        let mut letters = Vec::new();
        for &l in &self.letters {
            let img = &images[l.unsigned_abs() as usize - 1];
            if l > 0 {
                for &x in &img.letters {
                    push_reduced(&mut letters, x);
                }
            } else {
                for &x in img.letters.iter().rev() {
                    push_reduced(&mut letters, -x);
                }
            }
        }
        FreeWord { rank: target_rank, letters }
    }

    /// Renames generators through `map` (old 0-based index to new 0-based index)
    /// into a free group of rank `new_rank`.
    pub fn relabel(&self, new_rank: usize, map: &[usize]) -> FreeWord {
        let letters = self
            .letters
            .iter()
            .map(|&l| {
                let k = map[l.unsigned_abs() as usize - 1] as i32 + 1;
                if l > 0 {
                    k
                } else {
                    -k
                }
            })
            .collect();
        FreeWord { rank: new_rank, letters }
    }

    /// Renders the word with the given generator names; `^-1` marks inverses and
    /// repeated letters are collapsed into powers.
    pub fn render(&self, names: &[String]) -> String {
        if self.letters.is_empty() {
            return "1".to_string();
        }
        let mut parts = Vec::new();
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut j = i;
            while j < self.letters.len() && self.letters[j] == l {
                j += 1;
            }
            let name = &names[l.unsigned_abs() as usize - 1];
            let e = (j - i) as i64 * l.signum() as i64;
            parts.push(if e == 1 { name.clone() } else { format!("{name}^{e}") });
            i = j;
        }
        parts.join(" ")
    }

    /// Parses a whitespace-separated word of `NAME` or `NAME^INT` tokens; `1`
    /// or the empty string denote the identity.
    pub fn parse(text: &str, names: &[String]) -> Result<FreeWord> {
        let rank = names.len();
        let mut raw = Vec::new();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, exp) = match token.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad exponent in `{token}`")))?;
                    (n, e)
                }
                None => (token, 1),
            };
            let k = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::Parse(format!("unknown generator `{name}`")))?;
            let letter = if exp > 0 { k as i32 + 1 } else { -(k as i32 + 1) };
            raw.extend(std::iter::repeat_n(letter, exp.unsigned_abs() as usize));
        }
        FreeWord::reduce(rank, &raw)
    }
}

impl fmt::Debug for FreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.letters)
    }
}

/// An automorphism of the free group of rank `rank`, stored as the images of
/// the generators together with the images under its inverse.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FreeAutomorphism {
    rank: usize,
    images: Vec<FreeWord>,
    inverse_images: Vec<FreeWord>,
}

impl FreeAutomorphism {
    /// Validates that the two substitutions are mutually inverse before
    /// accepting them.
    pub fn new(images: Vec<FreeWord>, inverse_images: Vec<FreeWord>) -> Result<Self> {
        let rank = images.len();
        if inverse_images.len() != rank {
            return Err(Error::RankMismatch { left: rank, right: inverse_images.len() });
        }
        if let Some(w) = images.iter().chain(&inverse_images).find(|w| w.rank != rank) {
            return Err(Error::RankMismatch { left: rank, right: w.rank });
        }
        let aut = FreeAutomorphism { rank, images, inverse_images };
        for k in 1..=rank {
            let g = FreeWord::generator(rank, k);
            if aut.apply(&aut.apply_inverse(&g)) != g || aut.apply_inverse(&aut.apply(&g)) != g {
                return Err(Error::InvalidAutomorphism(format!(
                    "images and inverse images do not compose to the identity at generator {k}"
                )));
            }
        }
        Ok(aut)
    }

    pub(crate) fn new_unchecked(images: Vec<FreeWord>, inverse_images: Vec<FreeWord>) -> Self {
        let rank = images.len();
        debug_assert_eq!(rank, inverse_images.len());
        FreeAutomorphism { rank, images, inverse_images }
    }

    pub fn identity(rank: usize) -> Self {
        let gens: Vec<FreeWord> = (1..=rank).map(|k| FreeWord::generator(rank, k)).collect();
        FreeAutomorphism { rank, images: gens.clone(), inverse_images: gens }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn inverse_images(&self) -> &[FreeWord] {
        &self.inverse_images
    }

    pub fn apply(&self, w: &FreeWord) -> FreeWord {
        w.substitute(&self.images)
    }

    pub fn apply_inverse(&self, w: &FreeWord) -> FreeWord {
        w.substitute(&self.inverse_images)
    }

    pub fn inverse(&self) -> Self {
        FreeAutomorphism {
            rank: self.rank,
            images: self.inverse_images.clone(),
            inverse_images: self.images.clone(),
        }
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &FreeAutomorphism) -> Result<Self> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(self.compose_unchecked(other))
    }

    pub(crate) fn compose_unchecked(&self, other: &FreeAutomorphism) -> Self {
        let images = other.images.iter().map(|w| self.apply(w)).collect();
        let inverse_images = self.inverse_images.iter().map(|w| other.apply_inverse(w)).collect();
        FreeAutomorphism { rank: self.rank, images, inverse_images }
    }

    pub fn pow(&self, n: i64) -> Self {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = FreeAutomorphism::identity(self.rank);
        for _ in 0..n.unsigned_abs() {
            out = base.compose_unchecked(&out);
        }
        out
    }

    /// Generator-wise equality of reduced images.
    pub fn equal(&self, other: &FreeAutomorphism) -> Result<bool> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        Ok(self.images == other.images)
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, w)| w.letters == [i as i32 + 1])
    }

    /// Entry `(i, j)` is the exponent sum of generator `i` in the image of `x_j`.
    pub fn abelianize(&self) -> IntMatrix {
        let mut m = IntMatrix::zeros(self.rank, self.rank);
        for (j, w) in self.images.iter().enumerate() {
            for (i, e) in w.abelianize().into_iter().enumerate() {
                m[(i, j)] = e;
            }
        }
        m
    }

    /// Canonical serialisation of the forward images, usable as a hash key.
    pub fn canonical_key(&self) -> Vec<i32> {
        let mut key = Vec::with_capacity(self.images.iter().map(|w| w.len() + 1).sum());
        for w in &self.images {
            key.extend_from_slice(&w.letters);
            key.push(0);
        }
        key
    }

    /// Embeds into a free group of rank `new_rank` along `map` (old 0-based to
    /// new 0-based index). Generators outside the image of `map` are fixed.
    pub fn embed(&self, new_rank: usize, map: &[usize]) -> Self {
        let mut images: Vec<FreeWord> =
            (1..=new_rank).map(|k| FreeWord::generator(new_rank, k)).collect();
        let mut inverse_images = images.clone();
        for (old, &new) in map.iter().enumerate() {
            images[new] = self.images[old].relabel(new_rank, map);
            inverse_images[new] = self.inverse_images[old].relabel(new_rank, map);
        }
        FreeAutomorphism { rank: new_rank, images, inverse_images }
    }

    /// Total length of all forward images.
    pub fn size(&self) -> usize {
        self.images.iter().map(FreeWord::len).sum()
    }
}

impl fmt::Debug for FreeAutomorphism {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FreeAutomorphism").field("images", &self.images).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(rank: usize, raw: &[i32]) -> FreeWord {
        FreeWord::reduce(rank, raw).unwrap()
    }

    #[test]
    fn cancellation() {
        assert!(w(2, &[1, -1]).is_empty());
        assert_eq!(w(2, &[1, 2, -2, 1]).letters(), &[1, 1]);
        assert_eq!(w(3, &[1, 2, 3, -3, -2, 2]).letters(), &[1, 2]);
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(FreeWord::reduce(2, &[3]), Err(Error::IndexOutOfRange { .. })));
        assert!(matches!(FreeWord::reduce(2, &[0]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn parse_and_render() {
        let names: Vec<String> = ["x1", "y1"].iter().map(|s| s.to_string()).collect();
        let v = FreeWord::parse("x1 y1^-2 x1 x1", &names).unwrap();
        assert_eq!(v.letters(), &[1, -2, -2, 1, 1]);
        assert_eq!(v.render(&names), "x1 y1^-2 x1^2");
        assert!(FreeWord::parse("q", &names).is_err());
        assert!(FreeWord::parse("1", &names).unwrap().is_empty());
    }

    #[test]
    fn automorphism_rejects_non_inverse() {
        let a = vec![w(2, &[1]), w(2, &[1, 2])];
        let bad = vec![w(2, &[1]), w(2, &[2])];
        assert!(FreeAutomorphism::new(a.clone(), bad).is_err());
        let good = vec![w(2, &[1]), w(2, &[-1, 2])];
        let f = FreeAutomorphism::new(a, good).unwrap();
        assert!(f.compose(&f.inverse()).unwrap().is_identity());
        assert_eq!(f.abelianize().determinant(), 1);
    }

    #[test]
    fn rank_mismatch() {
        let f = FreeAutomorphism::identity(2);
        let g = FreeAutomorphism::identity(3);
        assert!(matches!(f.compose(&g), Err(Error::RankMismatch { .. })));
        assert!(matches!(f.equal(&g), Err(Error::RankMismatch { .. })));
    }

    #[test]
    fn embed_fixes_new_generators() {
        let a = FreeAutomorphism::new(
            vec![w(2, &[1]), w(2, &[1, 2])],
            vec![w(2, &[1]), w(2, &[-1, 2])],
        )
        .unwrap();
        let e = a.embed(4, &[0, 2]);
        assert_eq!(e.images()[2].letters(), &[1, 3]);
        assert_eq!(e.images()[1].letters(), &[2]);
        assert_eq!(e.images()[3].letters(), &[4]);
    }
}
