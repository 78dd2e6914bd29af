//! Negative continued fractions and the transverse surgery compiler.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use num_rational::Ratio;

use crate::error::{Error, Result};
use crate::homology::{h1_of_word, AbelianGroup};
use crate::mcg::TwistWord;
use crate::surface::Surface;

/// A reduced fraction `p/q` with `q > 0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Rational(Ratio<i64>);

impl Rational {
    pub fn new(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Parse("zero denominator".into()));
        }
        Ok(Rational(Ratio::new(p, q)))
    }

    pub fn integer(p: i64) -> Self {
        Rational(Ratio::from_integer(p))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn ratio(&self) -> Ratio<i64> {
        self.0
    }

    pub fn floor(&self) -> i64 {
        Integer::div_floor(&self.numer(), &self.denom())
    }
}

impl From<Ratio<i64>> for Rational {
    fn from(r: Ratio<i64>) -> Self {
        Rational(r)
    }
}

impl FromStr for Rational {
    type Err = Error;

    /// Accepts `p/q` or `p`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad rational `{s}` (expected p/q or p)"));
        let s = s.trim();
        match s.split_once('/') {
            Some((p, q)) => Rational::new(p.trim().parse().map_err(|_| bad())?, q.trim().parse().map_err(|_| bad())?),
            None => Ok(Rational::integer(s.parse().map_err(|_| bad())?)),
        }
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_integer() {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

/// `c₁ − 1/(c₂ − 1/(⋯ − 1/c_k))` with every `cᵢ ≤ −2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegCF {
    entries: Vec<i64>,
}

impl NegCF {
    pub fn entries(&self) -> &[i64] {
        &self.entries
    }

    /// The surgery recipe's coefficients: `a₁ = c₁ − 1`, `aᵢ = cᵢ` after.
    pub fn display_entries(&self) -> Vec<i64> {
        let mut a = self.entries.clone();
        a[0] -= 1;
        a
    }

    pub fn value(&self) -> Rational {
        let mut v = Ratio::from_integer(*self.entries.last().expect("nonempty"));
        for &c in self.entries.iter().rev().skip(1) {
            v = Ratio::from_integer(c) - v.recip();
        }
        Rational(v)
    }
}

impl fmt::Display for NegCF {
    /// Renders as `[a₁+1, a₂, …]^-`, e.g. `[-3+1, -2, -2, -2]^-`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let a = self.display_entries();
        let mut parts = vec![format!("{}+1", a[0])];
        parts.extend(a[1..].iter().map(|x| x.to_string()));
        write!(f, "[{}]^-", parts.join(", "))
    }
}

pub fn neg_continued_fraction(r: Rational) -> Result<NegCF> {
    if r.ratio() >= Ratio::from_integer(-1) {
        return Err(Error::Unrepresentable(format!(
            "{r} is unrepresentable with entries <= -2; choose a different n"
        )));
    }
    let mut entries = Vec::new();
    let mut v = r.ratio();
    loop {
        let c = v.floor();
        entries.push(*c.numer());
        let rest = v - c;
        if rest == Ratio::from_integer(0) {
            break;
        }
        v = -rest.recip();
    }
    Ok(NegCF { entries })
}

/// Smallest positive `n` with `1/n < r`.
pub fn default_n(r: Rational) -> Result<i64> {
    if r.numer() <= 0 {
        return Err(Error::InvalidSurgery(format!("inadmissible surgery needs r > 0, got {r}")));
    }
    Ok(Integer::div_floor(&r.denom(), &r.numer()) + 1)
}

/// A page, a monodromy word and one label per binding component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OpenBook {
    pub surface: Surface,
    pub word: TwistWord,
    /// `bindings[k - 1]` labels boundary component `k`.
    pub bindings: Vec<String>,
}

impl OpenBook {
    /// Uses the boundary indices `"1"`, …, `"n"` as labels.
    pub fn new(surface: Surface, word: TwistWord) -> Result<Self> {
        word.check_names(&surface)?;
        let bindings = (1..=surface.spec.boundary_count()).map(|k| k.to_string()).collect();
        Ok(OpenBook { surface, word, bindings })
    }

    /// Boundary index of the binding component called `label`.
    pub fn binding_index(&self, label: &str) -> Result<usize> {
        self.bindings
            .iter()
            .position(|b| b == label)
            .map(|i| i + 1)
            .ok_or_else(|| Error::InvalidSurgery(format!("no binding component labelled `{label}`")))
    }

    pub fn h1(&self) -> Result<AbelianGroup> {
        h1_of_word(&self.surface, &self.word)
    }

    /// Positive stabilisation at binding component `label`: adds a handle and
    /// appends the stabilisation twist. The label stays with the component.
    pub fn stabilize(&self, label: &str) -> Result<OpenBook> {
        let k = self.binding_index(label)?;
        let st = self.surface.stabilize(k)?;
        let mut word = self.word.rename(&st.renames);
        word.push(st.stabilisation_curve.clone(), 1);
        let mut bindings = self.bindings.clone();
        let fresh = fresh_label(&bindings);
        bindings[k - 1] = fresh;
        bindings.push(label.to_string());
        debug_assert_eq!(bindings.len(), st.new_k);
        Ok(OpenBook { surface: st.surface, word, bindings })
    }

    /// Name of the curve parallel to binding component `label`.
    pub fn binding_curve(&self, label: &str) -> Result<String> {
        let k = self.binding_index(label)?;
        Ok(self.surface.boundary_curve(k)?.name.clone())
    }
}

fn fresh_label(taken: &[String]) -> String {
    (1..).map(|i: usize| i.to_string()).find(|l| !taken.contains(l)).expect("unbounded")
}

/// Admissible transverse `r`-surgery on the binding component `label`: for
/// each coefficient `aᵢ` of the expansion, stabilise `|aᵢ + 2|` times and then
/// add one positive twist about the component.
pub fn admissible_surgery(ob: &OpenBook, label: &str, r: Rational) -> Result<OpenBook> {
    let cf = neg_continued_fraction(r)?;
    ob.binding_index(label)?;
    let mut cur = ob.clone();
    for a in cf.display_entries() {
        for _ in 0..(a + 2).unsigned_abs() {
            cur = cur.stabilize(label)?;
        }
        let c = cur.binding_curve(label)?;
        cur.word.push(c, 1);
    }
    Ok(cur)
}

/// Inadmissible transverse `r`-surgery: `n` negative twists about the
/// component, then admissible surgery with `r' = p/(q − np)`.
pub fn inadmissible_surgery(ob: &OpenBook, label: &str, r: Rational, n: Option<i64>) -> Result<OpenBook> {
    let n = match n {
        Some(n) => n,
        None => default_n(r)?,
    };
    let (p, q) = (r.numer(), r.denom());
    if p <= 0 {
        return Err(Error::InvalidSurgery(format!("inadmissible surgery needs r > 0, got {r}")));
    }
    if n <= 0 || n * p <= q {
        return Err(Error::InvalidSurgery(format!("need a positive n with 1/n < r = {r}, got n = {n}")));
    }
    let r_prime = Rational::new(p, q - n * p)?;
    neg_continued_fraction(r_prime).map_err(|_| {
        Error::Unrepresentable(format!(
            "r' = {r_prime} is unrepresentable with entries <= -2; choose a different n"
        ))
    })?;
    let mut cur = ob.clone();
    let c = cur.binding_curve(label)?;
    cur.word.push(c, -n);
    admissible_surgery(&cur, label, r_prime)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn expansions() {
        let cf = neg_continued_fraction(q("-5/4")).unwrap();
        assert_eq!(cf.entries(), &[-2, -2, -2, -2]);
        assert_eq!(cf.to_string(), "[-3+1, -2, -2, -2]^-");
        assert_eq!(neg_continued_fraction(q("-2")).unwrap().to_string(), "[-3+1]^-");
        assert_eq!(neg_continued_fraction(q("-7/2")).unwrap().entries(), &[-4, -2]);
        assert!(neg_continued_fraction(q("-1")).is_err());
        assert!(neg_continued_fraction(q("3/2")).is_err());
    }

    #[test]
    fn default_n_examples() {
        assert_eq!(default_n(q("5")).unwrap(), 1);
        assert_eq!(default_n(q("1/2")).unwrap(), 3);
        assert_eq!(default_n(q("1")).unwrap(), 2);
        assert!(default_n(q("-1")).is_err());
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(q("6/4"), Rational::new(3, 2).unwrap());
        assert_eq!(q("-4").to_string(), "-4");
        assert_eq!(q("3/-6").to_string(), "-1/2");
        assert!("1/0".parse::<Rational>().is_err());
        assert!("x".parse::<Rational>().is_err());
    }
}
