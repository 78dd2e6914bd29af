//! Rational surgery presentations at the level of linking data.

use std::fmt;

use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::homology::AbelianGroup;
use crate::matrix::IntMatrix;
use crate::surgery::{neg_continued_fraction, Rational};

/// Components with rational surgery coefficients and pairwise linking
/// numbers. The diagonal of `lk` is unused and kept at zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FramedLinkPresentation {
    labels: Vec<String>,
    coeffs: Vec<Rational>,
    lk: IntMatrix,
}

impl FramedLinkPresentation {
    pub fn new(labels: Vec<String>, coeffs: Vec<Rational>, lk: IntMatrix) -> Result<Self> {
        let n = labels.len();
        if coeffs.len() != n || lk.rows() != n || lk.cols() != n {
            return Err(Error::InvalidPresentation(format!(
                "{n} labels, {} coefficients, {}x{} linking matrix",
                coeffs.len(),
                lk.rows(),
                lk.cols()
            )));
        }
        for i in 0..n {
            if lk[(i, i)] != 0 {
                return Err(Error::InvalidPresentation("linking matrix must have zero diagonal".into()));
            }
            for j in 0..n {
                if lk[(i, j)] != lk[(j, i)] {
                    return Err(Error::InvalidPresentation(format!(
                        "linking matrix is not symmetric at ({}, {})",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        let mut seen = std::collections::BTreeSet::new();
        if let Some(dup) = labels.iter().find(|l| !seen.insert(l.as_str())) {
            return Err(Error::InvalidPresentation(format!("duplicate label `{dup}`")));
        }
        Ok(FramedLinkPresentation { labels, coeffs, lk })
    }

    /// Components labelled `1`, …, `n` with no linking.
    pub fn unlinked(coeffs: Vec<Rational>) -> Self {
        let n = coeffs.len();
        let labels = (1..=n).map(|i| i.to_string()).collect();
        FramedLinkPresentation { labels, coeffs, lk: IntMatrix::zeros(n, n) }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn linking(&self, i: usize, j: usize) -> i64 {
        self.lk[(i, j)]
    }

    pub fn set_linking(&mut self, i: usize, j: usize, v: i64) -> Result<()> {
        if i == j {
            return Err(Error::InvalidPresentation("a component does not link itself".into()));
        }
        self.lk[(i, j)] = v;
        self.lk[(j, i)] = v;
        Ok(())
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::InvalidPresentation(format!("no component labelled `{label}`")))
    }

    /// `A_ii = p_i`, `A_ij = q_i lk_ij`.
    pub fn presentation_matrix(&self) -> IntMatrix {
        let n = self.len();
        let mut a = IntMatrix::zeros(n, n);
        for i in 0..n {
            let (p, q) = (self.coeffs[i].numer(), self.coeffs[i].denom());
            for j in 0..n {
                a[(i, j)] = if i == j { p } else { q * self.lk[(i, j)] };
            }
        }
        a
    }

    /// Parses a comma-separated coefficient list and `i-j:lk` linking pairs
    /// (1-based component indices).
    pub fn parse(coeffs: &str, links: &[&str]) -> Result<Self> {
        let coeffs: Vec<Rational> = coeffs
            .split(',')
            .map(str::trim)
            .filter(|s| !s.is_empty())
            .map(str::parse)
            .collect::<Result<_>>()?;
        let mut link = FramedLinkPresentation::unlinked(coeffs);
        for spec in links {
            let bad = || Error::Parse(format!("bad linking pair `{spec}` (expected i-j:lk)"));
            let (pair, v) = spec.split_once(':').ok_or_else(bad)?;
            let (i, j) = pair.split_once('-').ok_or_else(bad)?;
            let i: usize = i.trim().parse().map_err(|_| bad())?;
            let j: usize = j.trim().parse().map_err(|_| bad())?;
            let v: i64 = v.trim().parse().map_err(|_| bad())?;
            let n = link.len();
            if i == 0 || j == 0 || i > n || j > n {
                return Err(Error::InvalidPresentation(format!("component index out of range in `{spec}`")));
            }
            link.set_linking(i - 1, j - 1, v)?;
        }
        Ok(link)
    }
}

impl fmt::Display for FramedLinkPresentation {
    /// One line per component (`label: coefficient`), then one line per
    /// nonzero linking number, in label-sorted order.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut order: Vec<usize> = (0..self.len()).collect();
        order.sort_by(|&a, &b| self.labels[a].cmp(&self.labels[b]));
        for &i in &order {
            writeln!(f, "{}: {}", self.labels[i], self.coeffs[i])?;
        }
        for (x, &i) in order.iter().enumerate() {
            for &j in &order[x + 1..] {
                if self.lk[(i, j)] != 0 {
                    writeln!(f, "lk {}-{}: {}", self.labels[i], self.labels[j], self.lk[(i, j)])?;
                }
            }
        }
        Ok(())
    }
}

pub fn h1_of_link(link: &FramedLinkPresentation) -> AbelianGroup {
    AbelianGroup::cokernel(&link.presentation_matrix())
}

/// `M(e₀; r₁, r₂, r₃)` with each `rᵢ ∈ (0, 1]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeifertData {
    pub e0: i64,
    pub r: [Rational; 3],
}

impl SeifertData {
    pub fn new(e0: i64, r: [Rational; 3]) -> Result<Self> {
        for x in &r {
            if x.numer() <= 0 || x.ratio() > Ratio::from_integer(1) {
                return Err(Error::InvalidPresentation(format!("Seifert invariant {x} is not in (0, 1]")));
            }
        }
        Ok(SeifertData { e0, r })
    }

    /// `|e₀ Π pᵢ + Σ qᵢ Π_{j≠i} pⱼ|` with `rᵢ = qᵢ/pᵢ`; zero means infinite H₁.
    pub fn h1_order(&self) -> i64 {
        let p: Vec<i64> = self.r.iter().map(Rational::denom).collect();
        let q: Vec<i64> = self.r.iter().map(Rational::numer).collect();
        let mut total = self.e0 * p.iter().product::<i64>();
        for (i, qi) in q.iter().enumerate() {
            total += qi * (0..3).filter(|&j| j != i).map(|j| p[j]).product::<i64>();
        }
        total.abs()
    }
}

/// Central unknot with coefficient `e₀` and three mutually unlinked meridians
/// with coefficients `−1/rᵢ`, each linking the central component once.
pub fn seifert_presentation(s: &SeifertData) -> FramedLinkPresentation {
    let labels = ["c", "m1", "m2", "m3"].iter().map(|s| s.to_string()).collect();
    let mut coeffs = vec![Rational::integer(s.e0)];
    for r in &s.r {
        coeffs.push(Rational::from(-r.ratio().recip()));
    }
    let mut lk = IntMatrix::zeros(4, 4);
    for i in 1..4 {
        lk[(0, i)] = 1;
        lk[(i, 0)] = 1;
    }
    FramedLinkPresentation { labels, coeffs, lk }
}

/// Blows down component `c`, which must have coefficient `±1`.
pub fn blow_down(link: &FramedLinkPresentation, c: usize) -> Result<FramedLinkPresentation> {
    if c >= link.len() {
        return Err(Error::InvalidPresentation(format!("no component {}", c + 1)));
    }
    let coeff = link.coeffs[c];
    if !coeff.is_integer() || coeff.numer().abs() != 1 {
        return Err(Error::InvalidPresentation(format!(
            "can only blow down a component with coefficient +1 or -1, got {coeff}"
        )));
    }
    let eps = coeff.numer();
    let keep: Vec<usize> = (0..link.len()).filter(|&i| i != c).collect();
    let labels = keep.iter().map(|&i| link.labels[i].clone()).collect();
    let coeffs = keep
        .iter()
        .map(|&i| {
            let (p, q) = (link.coeffs[i].numer(), link.coeffs[i].denom());
            let l = link.lk[(i, c)];
            Rational::new(p - eps * q * l * l, q)
        })
        .collect::<Result<_>>()?;
    let mut lk = IntMatrix::zeros(keep.len(), keep.len());
    for (a, &i) in keep.iter().enumerate() {
        for (b, &j) in keep.iter().enumerate() {
            if a != b {
                lk[(a, b)] = link.lk[(i, j)] - eps * link.lk[(i, c)] * link.lk[(j, c)];
            }
        }
    }
    Ok(FramedLinkPresentation { labels, coeffs, lk })
}

/// The integer coefficients of the linear chain equivalent to a single
/// `r`-surgered component, `r < −1`.
pub fn rational_to_chain(r: Rational) -> Result<Vec<i64>> {
    Ok(neg_continued_fraction(r)?.entries().to_vec())
}

/// A linear chain of unknots with the given integer coefficients, each
/// linking its neighbours once.
pub fn chain_presentation(coeffs: &[i64]) -> FramedLinkPresentation {
    let mut link = FramedLinkPresentation::unlinked(coeffs.iter().map(|&c| Rational::integer(c)).collect());
    for i in 1..coeffs.len() {
        link.lk[(i - 1, i)] = 1;
        link.lk[(i, i - 1)] = 1;
    }
    link
}

/// Replaces component `c` (coefficient `< −1`) by its slam-dunk chain: the
/// component keeps its linking numbers and takes the first chain entry, and
/// the remaining entries become a chain of meridians hanging off it.
pub fn substitute_chain(link: &FramedLinkPresentation, c: usize) -> Result<FramedLinkPresentation> {
    if c >= link.len() {
        return Err(Error::InvalidPresentation(format!("no component {}", c + 1)));
    }
    let chain = rational_to_chain(link.coeffs[c])?;
    let n = link.len();
    let extra = chain.len() - 1;
    let mut labels = link.labels.clone();
    for k in 1..=extra {
        let mut l = format!("{}.{k}", link.labels[c]);
        while labels.contains(&l) {
            l.push('\'');
        }
        labels.push(l);
    }
    let mut coeffs = link.coeffs.clone();
    coeffs[c] = Rational::integer(chain[0]);
    coeffs.extend(chain[1..].iter().map(|&x| Rational::integer(x)));
    let mut lk = IntMatrix::zeros(n + extra, n + extra);
    for i in 0..n {
        for j in 0..n {
            lk[(i, j)] = link.lk[(i, j)];
        }
    }
    let mut prev = c;
    for k in 0..extra {
        let cur = n + k;
        lk[(prev, cur)] = 1;
        lk[(cur, prev)] = 1;
        prev = cur;
    }
    FramedLinkPresentation::new(labels, coeffs, lk)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn single_components() {
        assert_eq!(h1_of_link(&FramedLinkPresentation::unlinked(vec![q("-5")])).to_string(), "Z/5");
        assert_eq!(h1_of_link(&FramedLinkPresentation::unlinked(vec![q("5")])).to_string(), "Z/5");
        assert_eq!(h1_of_link(&FramedLinkPresentation::unlinked(vec![q("0")])).to_string(), "Z");
    }

    #[test]
    fn seifert_example() {
        let s = SeifertData::new(-1, [q("1/2"), q("1/3"), q("1/4")]).unwrap();
        let link = seifert_presentation(&s);
        assert_eq!(link.len(), 4);
        assert_eq!(s.h1_order(), 2);
        assert_eq!(h1_of_link(&link).to_string(), "Z/2");
        let ones = seifert_presentation(&SeifertData::new(0, [q("1"), q("1"), q("1")]).unwrap());
        assert!(ones.coeffs()[1..].iter().all(|c| c.numer().abs() == 1 && c.denom() == 1));
    }

    #[test]
    fn blow_down_examples() {
        let one = FramedLinkPresentation::unlinked(vec![q("1")]);
        assert!(blow_down(&one, 0).unwrap().is_empty());
        let link = FramedLinkPresentation::parse("-1, 3", &["1-2:1"]).unwrap();
        let down = blow_down(&link, 0).unwrap();
        assert_eq!(down.coeffs(), &[q("4")]);
        assert!(blow_down(&link, 1).is_err());
    }

    #[test]
    fn chains() {
        assert_eq!(rational_to_chain(q("-5/4")).unwrap(), vec![-2, -2, -2, -2]);
        assert_eq!(rational_to_chain(q("-2")).unwrap(), vec![-2]);
        assert!(rational_to_chain(q("-1/2")).is_err());
        let c = chain_presentation(&[-2, -2, -2, -2]);
        assert_eq!(h1_of_link(&c).to_string(), "Z/5");
    }

    #[test]
    fn parse_and_render() {
        let link = FramedLinkPresentation::parse("-1, 2, 3/2", &["1-2:1", "1-3:2"]).unwrap();
        assert_eq!(link.to_string(), "1: -1\n2: 2\n3: 3/2\nlk 1-2: 1\nlk 1-3: 2\n");
        assert!(FramedLinkPresentation::parse("1, 2", &["1-1:1"]).is_err());
        assert!(FramedLinkPresentation::parse("1, 2", &["1-3:1"]).is_err());
        assert!(FramedLinkPresentation::parse("1, x", &[]).is_err());
    }
}
