//! Bounded search for positive factorisations over a finite curve alphabet.
//!
//! For each length `ℓ = 0, 1, …, L` the search looks for the lexicographically
//! least positive word of length `ℓ` (letters ordered as in the alphabet)
//! whose class equals the target. A word is split as `u · v`: prefixes `u` are
//! expanded layer by layer, and suffixes `v` of length up to `⌈L/2⌉` are looked
//! up in a table mapping each exact class to its least suffix. Prefixes are
//! pruned by boundary-twist counting, by linear reachability of the residual
//! class, and by discarding prefixes whose class already appeared earlier in
//! the same layer.

use std::collections::{HashMap, HashSet};
use std::fmt;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::freegroup::FreeAutomorphism;
use crate::homology::LinearTwistData;
use crate::mcg::{boundary_exponent_delta, equal_classes, evaluate, MappingClass, TwistWord};
use crate::surface::Surface;

/// Necessary conditions on boundary-twist counts of any positive
/// factorisation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BoundaryConstraint {
    /// `(k, c)`: at least `c` twists about curves parallel to ∂ₖ.
    pub min_counts: Vec<(usize, i64)>,
    /// `(i, j, δ)`: the ∂ᵢ count minus the ∂ⱼ count equals `δ`.
    pub balance: Option<(usize, usize, i64)>,
}

impl BoundaryConstraint {
    fn is_empty(&self) -> bool {
        self.min_counts.iter().all(|&(_, c)| c <= 0) && self.balance.is_none()
    }

    /// Whether `r` more letters can satisfy the constraint, given the current
    /// counts (`counts[k]` for ∂ₖ) and which boundaries have a letter.
    fn feasible(&self, counts: &[i64], r: i64, available: &[bool]) -> bool {
        let deficit = |k: usize| -> i64 {
            let need = self.min_counts.iter().filter(|&&(b, _)| b == k).map(|&(_, c)| c).max().unwrap_or(0);
            (need - counts[k]).max(0)
        };
        let n = counts.len();
        match self.balance {
            None => {
                let mut total = 0;
                for k in 1..n {
                    let d = deficit(k);
                    if d > 0 && !available[k] {
                        return false;
                    }
                    total += d;
                }
                total <= r
            }
            Some((i, j, delta)) => {
                let mut others = 0;
                for k in (1..n).filter(|&k| k != i && k != j) {
                    let d = deficit(k);
                    if d > 0 && !available[k] {
                        return false;
                    }
                    others += d;
                }
                let diff = delta - (counts[i] - counts[j]);
                (0..=r).any(|nj| {
                    let ni = nj + diff;
                    ni >= 0
                        && ni >= deficit(i)
                        && nj >= deficit(j)
                        && (ni == 0 || available[i])
                        && (nj == 0 || available[j])
                        && ni + nj + others <= r
                })
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SearchProblem {
    pub surface: Surface,
    pub target: MappingClass,
    pub alphabet: Vec<String>,
    pub max_length: usize,
    pub constraint: BoundaryConstraint,
}

impl SearchProblem {
    pub fn new(surface: Surface, target: MappingClass, alphabet: Vec<String>, max_length: usize) -> Self {
        SearchProblem { surface, target, alphabet, max_length, constraint: BoundaryConstraint::default() }
    }

    /// Targets the class of `word`, with boundary constraints from
    /// `peel_boundary` when the surface has two boundary components.
    pub fn from_word(surface: &Surface, word: &TwistWord, alphabet: Vec<String>, max_length: usize) -> Result<Self> {
        let target = evaluate(surface, word)?;
        let constraint = if surface.spec.boundary_count() == 2 && surface.spec.genus() == 1 {
            peel_boundary(surface, word)?.constraint
        } else {
            BoundaryConstraint::default()
        };
        Ok(SearchProblem { surface: surface.clone(), target, alphabet, max_length, constraint })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    pub prune_boundary: bool,
    pub prune_linear: bool,
    /// Longest remaining length for which linear reachability is tabulated.
    pub linear_depth: usize,
    pub memo: bool,
    pub suffix_table: bool,
    pub parallel: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            prune_boundary: true,
            prune_linear: true,
            linear_depth: 3,
            memo: true,
            suffix_table: true,
            parallel: false,
        }
    }
}

impl SearchOptions {
    /// Plain enumeration of every word, with no pruning or tables.
    pub fn naive() -> Self {
        SearchOptions {
            prune_boundary: false,
            prune_linear: false,
            linear_depth: 0,
            memo: false,
            suffix_table: false,
            parallel: false,
        }
    }
}

/// Statistics of a finished search, in a fixed field order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub result: String,
    pub alphabet: Vec<String>,
    pub max_length: usize,
    pub lengths_searched: usize,
    pub nodes: u64,
    pub pruned_boundary: u64,
    pub pruned_linear: u64,
    pub pruned_memo: u64,
    pub suffix_table_entries: u64,
    pub note: String,
}

impl Certificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialises") + "\n"
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "result: {}", self.result)?;
        writeln!(f, "alphabet: {}", self.alphabet.join(" "))?;
        writeln!(f, "max_length: {}", self.max_length)?;
        writeln!(f, "lengths_searched: {}", self.lengths_searched)?;
        writeln!(f, "nodes: {}", self.nodes)?;
        writeln!(f, "pruned_boundary: {}", self.pruned_boundary)?;
        writeln!(f, "pruned_linear: {}", self.pruned_linear)?;
        writeln!(f, "pruned_memo: {}", self.pruned_memo)?;
        writeln!(f, "suffix_table_entries: {}", self.suffix_table_entries)?;
        writeln!(f, "note: {}", self.note)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    Found { word: TwistWord, certificate: Certificate },
    Exhausted(Certificate),
}

impl SearchOutcome {
    pub fn certificate(&self) -> &Certificate {
        match self {
            SearchOutcome::Found { certificate, .. } => certificate,
            SearchOutcome::Exhausted(c) => c,
        }
    }

    pub fn word(&self) -> Option<&TwistWord> {
        match self {
            SearchOutcome::Found { word, .. } => Some(word),
            SearchOutcome::Exhausted(_) => None,
        }
    }
}

/// Result of splitting off the boundary twists every positive factorisation
/// must contain.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Peeled {
    pub residual_word: TwistWord,
    pub delta: i64,
    /// Mandatory twist counts about ∂₂ and ∂₁, in that order.
    pub mandatory: (i64, i64),
    pub constraint: BoundaryConstraint,
}

/// With `b = |∂₂|_w − |∂₁|_w`, a positive factorisation needs at least
/// `max(b, 0)` twists about ∂₂ and `max(−b, 0)` about ∂₁; boundary twists are
/// central, so the residual is `w` with those twists removed.
pub fn peel_boundary(surface: &Surface, word: &TwistWord) -> Result<Peeled> {
    let delta = boundary_exponent_delta(surface, word, 2, 1)?;
    let (m2, m1) = (delta.max(0), (-delta).max(0));
    let d2 = surface.boundary_curve(2)?.name.clone();
    let d1 = surface.boundary_curve(1)?.name.clone();
    let mut residual = word.clone();
    residual.push(d2, -m2);
    residual.push(d1, -m1);
    Ok(Peeled {
        residual_word: residual,
        delta,
        mandatory: (m2, m1),
        constraint: BoundaryConstraint { min_counts: vec![(2, m2), (1, m1)], balance: Some((2, 1, delta)) },
    })
}

/// True iff `word` is positive and evaluates exactly to `target`.
pub fn verify_factorisation(surface: &Surface, word: &TwistWord, target: &MappingClass) -> bool {
    word.is_positive()
        && evaluate(surface, word).and_then(|c| equal_classes(&c, target)).unwrap_or(false)
}

struct Letter {
    name: String,
    aut: FreeAutomorphism,
    inverse: FreeAutomorphism,
    inv_linear: LinearTwistData,
    boundary: Option<usize>,
}

#[derive(Clone)]
struct Node {
    word: Vec<u8>,
    residual: FreeAutomorphism,
    linear: LinearTwistData,
    counts: Vec<i64>,
}

enum Child {
    Kept(Node),
    PrunedBoundary,
    PrunedLinear,
}

#[derive(Default)]
struct Stats {
    nodes: u64,
    pruned_boundary: u64,
    pruned_linear: u64,
    pruned_memo: u64,
}

fn linear_key(l: &LinearTwistData) -> Vec<i64> {
    let mut k = Vec::new();
    for mat in [&l.m, &l.d] {
        for row in mat.to_rows() {
            k.extend(row);
        }
    }
    k
}

struct Searcher<'a> {
    problem: &'a SearchProblem,
    options: &'a SearchOptions,
    letters: Vec<Letter>,
    available: Vec<bool>,
    linear_reach: Vec<HashSet<Vec<i64>>>,
    suffix: Vec<HashMap<Vec<i32>, Vec<u8>>>,
}

impl<'a> Searcher<'a> {
    fn new(problem: &'a SearchProblem, options: &'a SearchOptions) -> Result<Self> {
        let surface = &problem.surface;
        if problem.alphabet.len() > u8::MAX as usize {
            return Err(Error::InvalidSurgery("alphabet too large".into()));
        }
        let mut letters = Vec::new();
        let mut available = vec![false; surface.spec.boundary_count() + 1];
        for name in &problem.alphabet {
            let c = surface.curve(name)?;
            let aut = c.aut()?.clone();
            if let Some(k) = c.boundary_parallel_to {
                available[k] = true;
            }
            letters.push(Letter {
                name: name.clone(),
                inverse: aut.inverse(),
                aut,
                inv_linear: LinearTwistData::for_curve(&surface.spec, c, -1),
                boundary: c.boundary_parallel_to,
            });
        }
        let mut s = Searcher { problem, options, letters, available, linear_reach: Vec::new(), suffix: Vec::new() };
        if options.prune_linear {
            s.build_linear_reach();
        }
        if options.suffix_table {
            s.build_suffix_tables();
        }
        Ok(s)
    }

    fn half(&self) -> usize {
        if self.options.suffix_table {
            self.problem.max_length.div_ceil(2)
        } else {
            0
        }
    }

    fn build_linear_reach(&mut self) {
        let spec = &self.problem.surface.spec;
        let depth = self.options.linear_depth.min(self.problem.max_length);
        let forward: Vec<LinearTwistData> = self
            .problem
            .alphabet
            .iter()
            .map(|n| LinearTwistData::for_curve(spec, self.problem.surface.curve(n).expect("checked"), 1))
            .collect();
        let mut layer = vec![LinearTwistData::identity(spec.rank())];
        let mut reach = vec![layer.iter().map(linear_key).collect::<HashSet<_>>()];
        for _ in 0..depth {
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for x in &layer {
                for f in &forward {
                    let y = f.then_after(x).expect("same rank");
                    if seen.insert(linear_key(&y)) {
                        next.push(y);
                    }
                }
            }
            reach.push(seen);
            layer = next;
        }
        self.linear_reach = reach;
    }

    fn build_suffix_tables(&mut self) {
        let ext = self.problem.surface.spec.ext_rank();
        let half = self.half();
        let mut prev: Vec<(Vec<u8>, FreeAutomorphism)> = vec![(Vec::new(), FreeAutomorphism::identity(ext))];
        let mut tables = vec![HashMap::from([(FreeAutomorphism::identity(ext).canonical_key(), Vec::new())])];
        for _ in 1..=half {
            let mut table = HashMap::new();
            let mut next = Vec::new();
            for (ci, letter) in self.letters.iter().enumerate() {
                for (w, class) in &prev {
                    let cls = letter.aut.compose_unchecked(class);
                    let key = cls.canonical_key();
                    if table.contains_key(&key) {
                        continue;
                    }
                    let mut word = Vec::with_capacity(w.len() + 1);
                    word.push(ci as u8);
                    word.extend_from_slice(w);
                    table.insert(key, word.clone());
                    next.push((word, cls));
                }
            }
            tables.push(table);
            prev = next;
        }
        self.suffix = tables;
    }

    fn root(&self) -> Node {
        Node {
            word: Vec::new(),
            residual: self.problem.target.exact.clone().expect("checked exact"),
            linear: self.problem.target.linear.clone(),
            counts: vec![0; self.available.len()],
        }
    }

    fn admissible(&self, counts: &[i64], linear: &LinearTwistData, remaining: usize) -> Option<Child> {
        if self.options.prune_boundary
            && !self.problem.constraint.is_empty()
            && !self.problem.constraint.feasible(counts, remaining as i64, &self.available)
        {
            return Some(Child::PrunedBoundary);
        }
        if self.options.prune_linear
            && remaining < self.linear_reach.len()
            && !self.linear_reach[remaining].contains(&linear_key(linear))
        {
            return Some(Child::PrunedLinear);
        }
        None
    }

    fn children(&self, node: &Node, remaining_after: usize) -> Vec<Child> {
        self.letters
            .iter()
            .enumerate()
            .map(|(ci, letter)| {
                let mut counts = node.counts.clone();
                if let Some(k) = letter.boundary {
                    counts[k] += 1;
                }
                let linear = letter.inv_linear.then_after(&node.linear).expect("same rank");
                if let Some(p) = self.admissible(&counts, &linear, remaining_after) {
                    return p;
                }
                let mut word = node.word.clone();
                word.push(ci as u8);
                let residual = letter.inverse.compose_unchecked(&node.residual);
                Child::Kept(Node { word, residual, linear, counts })
            })
            .collect()
    }

    fn lookup(&self, node: &Node, s: usize) -> Option<Vec<u8>> {
        if s == 0 {
            return node.residual.is_identity().then(|| node.word.clone());
        }
        let suffix = self.suffix[s].get(&node.residual.canonical_key())?;
        let mut w = node.word.clone();
        w.extend_from_slice(suffix);
        Some(w)
    }

    /// Least word of length exactly `len`, or `None`.
    fn search_length(&self, len: usize, stats: &mut Stats) -> Option<Vec<u8>> {
        let s = len.min(self.half());
        let t = len - s;
        let root = self.root();
        stats.nodes += 1;
        match self.admissible(&root.counts, &root.linear, len) {
            Some(Child::PrunedBoundary) => {
                stats.pruned_boundary += 1;
                return None;
            }
            Some(Child::PrunedLinear) => {
                stats.pruned_linear += 1;
                return None;
            }
            _ => {}
        }
        let mut layer = vec![root];
        for depth in 0..t {
            let remaining_after = len - depth - 1;
            let expanded: Vec<Vec<Child>> = if self.options.parallel {
                layer.par_iter().map(|n| self.children(n, remaining_after)).collect()
            } else {
                layer.iter().map(|n| self.children(n, remaining_after)).collect()
            };
            let mut seen = HashSet::new();
            let mut next = Vec::new();
            for child in expanded.into_iter().flatten() {
                match child {
                    Child::PrunedBoundary => stats.pruned_boundary += 1,
                    Child::PrunedLinear => stats.pruned_linear += 1,
                    Child::Kept(node) => {
                        stats.nodes += 1;
                        if self.options.memo && !seen.insert(node.residual.canonical_key()) {
                            stats.pruned_memo += 1;
                            continue;
                        }
                        next.push(node);
                    }
                }
            }
            layer = next;
            if layer.is_empty() {
                return None;
            }
        }
        layer.iter().find_map(|n| self.lookup(n, s))
    }
}

/// Iterative-deepening search for the shortest, then lexicographically
/// least, positive factorisation of the target over the alphabet.
pub fn search_positive(problem: &SearchProblem, options: &SearchOptions) -> Result<SearchOutcome> {
    if problem.target.exact.is_none() {
        return Err(Error::LinearOnly);
    }
    let searcher = Searcher::new(problem, options)?;
    let mut stats = Stats::default();
    let mut found = None;
    let mut lengths = 0;
    for len in 0..=problem.max_length {
        lengths += 1;
        if let Some(w) = searcher.search_length(len, &mut stats) {
            found = Some(w);
            break;
        }
    }
    let suffix_entries = searcher.suffix.iter().map(|t| t.len() as u64).sum();
    let mut certificate = Certificate {
        result: String::new(),
        alphabet: problem.alphabet.clone(),
        max_length: problem.max_length,
        lengths_searched: lengths,
        nodes: stats.nodes,
        pruned_boundary: stats.pruned_boundary,
        pruned_linear: stats.pruned_linear,
        pruned_memo: stats.pruned_memo,
        suffix_table_entries: suffix_entries,
        note: String::new(),
    };
    match found {
        Some(letters) => {
            let word =
                TwistWord::from_entries(letters.iter().map(|&i| (searcher.letters[i as usize].name.clone(), 1)));
            certificate.result = "found".into();
            certificate.note = format!("shortest positive factorisation has length {}", letters.len());
            Ok(SearchOutcome::Found { word, certificate })
        }
        None => {
            certificate.result = "exhausted".into();
            certificate.note = format!(
                "no positive factorisation over this alphabet of length <= {}; bounded evidence, not a proof",
                problem.max_length
            );
            Ok(SearchOutcome::Exhausted(certificate))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constraint_feasibility() {
        let c = BoundaryConstraint { min_counts: vec![(2, 2), (1, 0)], balance: Some((2, 1, 2)) };
        let avail = [false, true, true];
        assert!(c.feasible(&[0, 0, 0], 2, &avail));
        assert!(!c.feasible(&[0, 0, 0], 1, &avail));
        assert!(c.feasible(&[0, 1, 1], 2, &avail));
        assert!(!c.feasible(&[0, 1, 1], 1, &avail));
        let no_d1 = [false, false, true];
        assert!(c.feasible(&[0, 0, 1], 1, &no_d1));
        assert!(!c.feasible(&[0, 1, 0], 5, &[false, true, false]));
        let zero = BoundaryConstraint { min_counts: vec![], balance: Some((2, 1, 0)) };
        assert!(zero.feasible(&[0, 1, 0], 1, &avail));
        assert!(!zero.feasible(&[0, 1, 0], 0, &avail));
        assert!(!zero.feasible(&[0, 1, 0], 3, &[false, true, false]));
    }
}
