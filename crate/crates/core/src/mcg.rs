//! Twist words, mapping classes and relation rewriting.
//!
//! Words are written left to right and composed as functions: the rightmost
//! letter acts first, so `"a b"` is `τ_a ∘ τ_b`.

use std::fmt;

use crate::error::{Error, Result};
use crate::freegroup::FreeAutomorphism;
use crate::homology::LinearTwistData;
use crate::matrix::IntMatrix;
use crate::surface::Surface;

/// A product of twist powers with adjacent equal names merged and zero
/// exponents dropped.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TwistWord {
    entries: Vec<(String, i64)>,
}

impl TwistWord {
    pub fn new() -> Self {
        TwistWord::default()
    }

    pub fn from_entries<S: Into<String>>(entries: impl IntoIterator<Item = (S, i64)>) -> Self {
        let mut w = TwistWord::new();
        for (name, e) in entries {
            w.push(name, e);
        }
        w
    }

    /// Appends `name^e`, merging with the last entry when the names agree.
    pub fn push(&mut self, name: impl Into<String>, e: i64) {
        let name = name.into();
        if e == 0 {
            return;
        }
        if let Some(last) = self.entries.last_mut() {
            if last.0 == name {
                last.1 += e;
                if last.1 == 0 {
                    self.entries.pop();
                }
                return;
            }
        }
        self.entries.push((name, e));
    }

    pub fn concat(&self, other: &TwistWord) -> TwistWord {
        let mut w = self.clone();
        for (n, e) in &other.entries {
            w.push(n.clone(), *e);
        }
        w
    }

    pub fn entries(&self) -> &[(String, i64)] {
        &self.entries
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Total number of twists, `Σ |eᵢ|`.
    pub fn length(&self) -> usize {
        self.entries.iter().map(|(_, e)| e.unsigned_abs() as usize).sum()
    }

    pub fn is_positive(&self) -> bool {
        self.entries.iter().all(|&(_, e)| e > 0)
    }

    pub fn inverse(&self) -> TwistWord {
        TwistWord::from_entries(self.entries.iter().rev().map(|(n, e)| (n.clone(), -e)))
    }

    /// Words before and after the `s`-th twist (counted with multiplicity).
    pub fn split_at(&self, s: usize) -> (TwistWord, TwistWord) {
        let letters = LetterWord::from(self);
        let (l, r) = letters.letters.split_at(s.min(letters.len()));
        (
            LetterWord { letters: l.to_vec() }.to_twist_word(),
            LetterWord { letters: r.to_vec() }.to_twist_word(),
        )
    }

    pub fn rename(&self, map: &std::collections::BTreeMap<String, String>) -> TwistWord {
        TwistWord::from_entries(
            self.entries.iter().map(|(n, e)| (map.get(n).cloned().unwrap_or_else(|| n.clone()), *e)),
        )
    }

    /// Parses `NAME` / `NAME^INT` tokens separated by whitespace. An empty
    /// string or `1` is the empty word.
    pub fn parse(text: &str) -> Result<TwistWord> {
        let mut w = TwistWord::new();
        for token in text.split_whitespace() {
            if token == "1" {
                continue;
            }
            let (name, e) = match token.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| Error::Parse(format!("bad exponent in `{token}`")))?;
                    if e == 0 {
                        return Err(Error::Parse(format!("zero exponent in `{token}`")));
                    }
                    (n, e)
                }
                None => (token, 1),
            };
            if name.is_empty() {
                return Err(Error::Parse(format!("missing curve name in `{token}`")));
            }
            w.push(name, e);
        }
        Ok(w)
    }

    /// Parses and checks every name against the catalog.
    pub fn parse_on(surface: &Surface, text: &str) -> Result<TwistWord> {
        let w = TwistWord::parse(text)?;
        w.check_names(surface)?;
        Ok(w)
    }

    pub fn check_names(&self, surface: &Surface) -> Result<()> {
        for (n, _) in &self.entries {
            surface.curve(n)?;
        }
        Ok(())
    }
}

impl fmt::Display for TwistWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .entries
            .iter()
            .map(|(n, e)| if *e == 1 { n.clone() } else { format!("{n}^{e}") })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// A single twist `τ_name^{±1}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub name: String,
    /// `+1` or `−1`.
    pub sign: i64,
}

impl Letter {
    pub fn new(name: impl Into<String>, sign: i64) -> Self {
        debug_assert!(sign == 1 || sign == -1);
        Letter { name: name.into(), sign }
    }

    pub fn inverse(&self) -> Letter {
        Letter { name: self.name.clone(), sign: -self.sign }
    }
}

/// An unmerged sequence of single twists. Relation moves operate here so that
/// inserted cancelling pairs survive until they are removed again.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct LetterWord {
    pub letters: Vec<Letter>,
}

impl LetterWord {
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn to_twist_word(&self) -> TwistWord {
        TwistWord::from_entries(self.letters.iter().map(|l| (l.name.clone(), l.sign)))
    }
}

impl From<&TwistWord> for LetterWord {
    fn from(w: &TwistWord) -> Self {
        let mut letters = Vec::with_capacity(w.length());
        for (n, e) in w.entries() {
            for _ in 0..e.unsigned_abs() {
                letters.push(Letter::new(n.clone(), e.signum()));
            }
        }
        LetterWord { letters }
    }
}

impl fmt::Display for LetterWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .letters
            .iter()
            .map(|l| if l.sign == 1 { l.name.clone() } else { format!("{}^-1", l.name) })
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// An exact mapping class (when every curve had an automorphism) together
/// with its homology actions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MappingClass {
    pub exact: Option<FreeAutomorphism>,
    pub linear: LinearTwistData,
}

impl MappingClass {
    pub fn identity(surface: &Surface) -> Self {
        MappingClass {
            exact: Some(FreeAutomorphism::identity(surface.spec.ext_rank())),
            linear: LinearTwistData::identity(surface.spec.rank()),
        }
    }

    pub fn is_linear_only(&self) -> bool {
        self.exact.is_none()
    }

    pub fn m(&self) -> &IntMatrix {
        &self.linear.m
    }

    pub fn r(&self) -> &IntMatrix {
        &self.linear.r
    }

    pub fn d(&self) -> &IntMatrix {
        &self.linear.d
    }

    /// `self ∘ other`: `other` acts first.
    pub fn compose(&self, other: &MappingClass) -> Result<MappingClass> {
        let exact = match (&self.exact, &other.exact) {
            (Some(a), Some(b)) => Some(a.compose(b).map_err(|_| Error::SurfaceMismatch)?),
            _ => None,
        };
        let linear = self.linear.then_after(&other.linear).map_err(|_| Error::SurfaceMismatch)?;
        Ok(MappingClass { exact, linear })
    }

    pub fn inverse(&self) -> MappingClass {
        let m_inv = integer_inverse(&self.linear.m);
        let r_inv = integer_inverse(&self.linear.r);
        // φ∘φ⁻¹ = id gives D·R⁻¹ + D' = 0.
        let d_inv = self.linear.d.mul(&r_inv).scale(-1);
        MappingClass {
            exact: self.exact.as_ref().map(FreeAutomorphism::inverse),
            linear: LinearTwistData { m: m_inv, r: r_inv, d: d_inv },
        }
    }
}

/// Inverse of a unimodular matrix via the adjugate.
fn integer_inverse(a: &IntMatrix) -> IntMatrix {
    let n = a.rows();
    let det = a.determinant();
    assert!(det == 1 || det == -1, "matrix is not unimodular");
    let mut inv = IntMatrix::zeros(n, n);
    let idx: Vec<usize> = (0..n).collect();
    for i in 0..n {
        for j in 0..n {
            let rows: Vec<usize> = idx.iter().copied().filter(|&r| r != j).collect();
            let cols: Vec<usize> = idx.iter().copied().filter(|&c| c != i).collect();
            let minor = a.select(&rows, &cols).determinant();
            let sign = if (i + j) % 2 == 0 { 1 } else { -1 };
            inv[(i, j)] = sign * minor * det;
        }
    }
    inv
}

/// Exact and linear data of `τ_name^e`.
pub fn twist_class(surface: &Surface, name: &str, e: i64) -> Result<MappingClass> {
    let c = surface.curve(name)?;
    Ok(MappingClass {
        exact: c.aut.as_ref().map(|a| a.pow(e)),
        linear: LinearTwistData::for_curve(&surface.spec, c, e),
    })
}

/// Evaluates a word; curves without an automorphism make the result
/// linear-only.
pub fn evaluate(surface: &Surface, word: &TwistWord) -> Result<MappingClass> {
    let mut exact = Some(FreeAutomorphism::identity(surface.spec.ext_rank()));
    let mut linear = LinearTwistData::identity(surface.spec.rank());
    for (name, e) in word.entries() {
        let c = surface.curve(name)?;
        exact = match (exact, &c.aut) {
            (Some(acc), Some(a)) => Some(acc.compose_unchecked(&a.pow(*e))),
            _ => None,
        };
        linear = linear.then_after(&LinearTwistData::for_curve(&surface.spec, c, *e))?;
    }
    Ok(MappingClass { exact, linear })
}

/// Like `evaluate`, but fails when a curve lacks an automorphism.
pub fn evaluate_exact(surface: &Surface, word: &TwistWord) -> Result<MappingClass> {
    for (name, _) in word.entries() {
        surface.curve(name)?.aut()?;
    }
    evaluate(surface, word)
}

pub fn equal_classes(a: &MappingClass, b: &MappingClass) -> Result<bool> {
    match (&a.exact, &b.exact) {
        (Some(x), Some(y)) => x.equal(y).map_err(|_| Error::SurfaceMismatch),
        _ => Err(Error::LinearOnly),
    }
}

/// Signed number of twists about the ∂ᵢ-parallel curves minus the same count
/// for ∂ⱼ.
pub fn boundary_exponent_delta(surface: &Surface, word: &TwistWord, i: usize, j: usize) -> Result<i64> {
    Ok(boundary_count(surface, word, i)? - boundary_count(surface, word, j)?)
}

/// Signed exponent sum of twists about curves parallel to ∂ₖ.
pub fn boundary_count(surface: &Surface, word: &TwistWord, k: usize) -> Result<i64> {
    surface.boundary_curve(k)?;
    let mut total = 0;
    for (name, e) in word.entries() {
        if surface.curve(name)?.boundary_parallel_to == Some(k) {
            total += e;
        }
    }
    Ok(total)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    Braid,
    Commute,
    Chain,
    Lantern,
    InsertCancel,
}

impl MoveKind {
    pub fn parse(s: &str) -> Result<MoveKind> {
        match s {
            "braid" => Ok(MoveKind::Braid),
            "commute" => Ok(MoveKind::Commute),
            "chain" => Ok(MoveKind::Chain),
            "lantern" => Ok(MoveKind::Lantern),
            "insert_cancel" => Ok(MoveKind::InsertCancel),
            _ => Err(Error::Parse(format!("unknown move `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Direction {
    Forward,
    Backward,
}

/// A rewriting rule `lhs ↔ rhs` between two words with the same class.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationPattern {
    pub kind: MoveKind,
    pub lhs: Vec<Letter>,
    pub rhs: Vec<Letter>,
}

fn letters(names: &[&str], sign: i64) -> Vec<Letter> {
    names.iter().map(|n| Letter::new(*n, sign)).collect()
}

fn inverse_letters(ls: &[Letter]) -> Vec<Letter> {
    ls.iter().rev().map(Letter::inverse).collect()
}

fn distinct_orderings(items: &[String]) -> Vec<Vec<String>> {
    if items.is_empty() {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    let mut used = std::collections::BTreeSet::new();
    for (i, x) in items.iter().enumerate() {
        if !used.insert(x.clone()) {
            continue;
        }
        let mut rest = items.to_vec();
        rest.remove(i);
        for mut tail in distinct_orderings(&rest) {
            tail.insert(0, x.clone());
            out.push(tail);
        }
    }
    out
}

/// The rewriting rules generated by a catalog's relation tables.
///
/// Lantern rules use every ordering of the boundary side (those twists
/// commute) and every cyclic rotation of the interior side, which requires
/// the interior curves to commute with the product of the boundary side.
pub fn relation_patterns(surface: &Surface) -> Vec<RelationPattern> {
    let rel = &surface.relations;
    let mut out = Vec::new();
    fn both(out: &mut Vec<RelationPattern>, kind: MoveKind, lhs: Vec<Letter>, rhs: Vec<Letter>) {
        let (il, ir) = (inverse_letters(&lhs), inverse_letters(&rhs));
        out.push(RelationPattern { kind, lhs, rhs });
        out.push(RelationPattern { kind, lhs: il, rhs: ir });
    }
    for [a, b] in &rel.braid {
        both(&mut out, MoveKind::Braid, letters(&[a, b, a], 1), letters(&[b, a, b], 1));
    }
    for [a, b] in &rel.commute {
        for (s, t) in [(1, 1), (1, -1), (-1, 1), (-1, -1)] {
            let lhs = vec![Letter::new(a.clone(), s), Letter::new(b.clone(), t)];
            let rhs = vec![Letter::new(b.clone(), t), Letter::new(a.clone(), s)];
            out.push(RelationPattern { kind: MoveKind::Commute, lhs, rhs });
        }
    }
    for ch in &rel.chain {
        let d = vec![Letter::new(ch.boundary.clone(), 1)];
        let ab: Vec<&str> = [ch.a.as_str(), ch.b.as_str()].repeat(6);
        let ba: Vec<&str> = [ch.b.as_str(), ch.a.as_str()].repeat(6);
        both(&mut out, MoveKind::Chain, letters(&ab, 1), d.clone());
        both(&mut out, MoveKind::Chain, letters(&ba, 1), d);
    }
    for l in &rel.lantern {
        let n = l.rhs.len();
        for order in distinct_orderings(&l.lhs) {
            for rot in 0..n {
                let rhs: Vec<&str> = (0..n).map(|i| l.rhs[(i + rot) % n].as_str()).collect();
                let lhs: Vec<&str> = order.iter().map(String::as_str).collect();
                both(&mut out, MoveKind::Lantern, letters(&lhs, 1), letters(&rhs, 1));
            }
        }
    }
    out
}

/// A place where a pattern applies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoveSite {
    pub pattern: usize,
    pub position: usize,
    pub direction: Direction,
}

fn matches_at(word: &[Letter], pattern: &[Letter], position: usize) -> bool {
    position + pattern.len() <= word.len() && word[position..position + pattern.len()] == *pattern
}

/// Every (pattern, position, direction) that matches `word`.
pub fn applicable_moves(patterns: &[RelationPattern], word: &LetterWord) -> Vec<MoveSite> {
    let mut out = Vec::new();
    for (pi, p) in patterns.iter().enumerate() {
        for pos in 0..word.len() {
            if matches_at(&word.letters, &p.lhs, pos) {
                out.push(MoveSite { pattern: pi, position: pos, direction: Direction::Forward });
            }
            if matches_at(&word.letters, &p.rhs, pos) {
                out.push(MoveSite { pattern: pi, position: pos, direction: Direction::Backward });
            }
        }
    }
    out
}

/// Rewrites `word` at a site found by `applicable_moves`.
pub fn rewrite(patterns: &[RelationPattern], word: &LetterWord, site: &MoveSite) -> Result<LetterWord> {
    let p = patterns
        .get(site.pattern)
        .ok_or_else(|| Error::PatternMismatch(format!("no pattern {}", site.pattern)))?;
    let (from, to) = match site.direction {
        Direction::Forward => (&p.lhs, &p.rhs),
        Direction::Backward => (&p.rhs, &p.lhs),
    };
    if !matches_at(&word.letters, from, site.position) {
        return Err(Error::PatternMismatch(format!("pattern does not match at position {}", site.position)));
    }
    let mut letters = word.letters[..site.position].to_vec();
    letters.extend_from_slice(to);
    letters.extend_from_slice(&word.letters[site.position + from.len()..]);
    Ok(LetterWord { letters })
}

/// Inserts `c c⁻¹` (forward) or removes a cancelling pair (backward) at
/// `position`.
pub fn insert_cancel(
    surface: &Surface,
    word: &LetterWord,
    curve: &str,
    position: usize,
    direction: Direction,
) -> Result<LetterWord> {
    surface.curve(curve)?;
    let mut letters = word.letters.clone();
    match direction {
        Direction::Forward => {
            if position > letters.len() {
                return Err(Error::PatternMismatch(format!("position {position} past end of word")));
            }
            letters.splice(position..position, [Letter::new(curve, 1), Letter::new(curve, -1)]);
        }
        Direction::Backward => {
            let ok = position + 1 < letters.len()
                && letters[position].name == curve
                && letters[position + 1] == letters[position].inverse();
            if !ok {
                return Err(Error::PatternMismatch(format!("no cancelling `{curve}` pair at position {position}")));
            }
            letters.drain(position..position + 2);
        }
    }
    Ok(LetterWord { letters })
}

/// Applies a relation of the given kind at `position`, using the first
/// pattern of that kind (in table order) that matches.
pub fn apply_relation(
    surface: &Surface,
    word: &LetterWord,
    kind: MoveKind,
    position: usize,
    direction: Direction,
    curve: Option<&str>,
) -> Result<LetterWord> {
    if kind == MoveKind::InsertCancel {
        let c = match (curve, direction) {
            (Some(c), _) => c.to_string(),
            (None, Direction::Backward) => word
                .letters
                .get(position)
                .map(|l| l.name.clone())
                .ok_or_else(|| Error::PatternMismatch(format!("position {position} past end of word")))?,
            (None, Direction::Forward) => {
                return Err(Error::PatternMismatch("insert_cancel needs a curve".into()));
            }
        };
        return insert_cancel(surface, word, &c, position, direction);
    }
    let patterns = relation_patterns(surface);
    for (i, p) in patterns.iter().enumerate() {
        if p.kind != kind {
            continue;
        }
        let from = if direction == Direction::Forward { &p.lhs } else { &p.rhs };
        if matches_at(&word.letters, from, position) {
            return rewrite(&patterns, word, &MoveSite { pattern: i, position, direction });
        }
    }
    Err(Error::PatternMismatch(format!("no {kind:?} pattern matches at position {position}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merging() {
        let w = TwistWord::parse("a a^2 b b^-1 c").unwrap();
        assert_eq!(w.to_string(), "a^3 c");
        assert_eq!(TwistWord::parse("").unwrap().to_string(), "1");
        assert!(TwistWord::parse("a^0").is_err());
        assert!(TwistWord::parse("a^x").is_err());
    }

    #[test]
    fn split_and_length() {
        let w = TwistWord::parse("a^2 b^-3 c").unwrap();
        assert_eq!(w.length(), 6);
        let (l, r) = w.split_at(3);
        assert_eq!(l.to_string(), "a^2 b^-1");
        assert_eq!(r.to_string(), "b^-2 c");
    }

    #[test]
    fn orderings() {
        let items: Vec<String> = ["d1", "d2", "e", "e"].iter().map(|s| s.to_string()).collect();
        assert_eq!(distinct_orderings(&items).len(), 12);
    }
}
