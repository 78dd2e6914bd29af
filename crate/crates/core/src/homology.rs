//! Linear twist actions, Smith normal form and first homology.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::IntMatrix;
use crate::mcg::TwistWord;
use crate::surface::{CurveConfig, Surface, SurfaceSpec};

/// The action of `τ_c^ε` on absolute homology (`m`), on relative homology
/// (`r`), and the deviation `d` from relative to absolute classes, so that
/// `φ_*(x) − x = d·(relative class of x)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearTwistData {
    pub m: IntMatrix,
    pub r: IntMatrix,
    pub d: IntMatrix,
}

impl LinearTwistData {
    pub fn identity(rank: usize) -> Self {
        LinearTwistData { m: IntMatrix::identity(rank), r: IntMatrix::identity(rank), d: IntMatrix::zeros(rank, rank) }
    }

    /// `M = I + ε h qᵀ`, `R = I + ε (J h) pᵀ`, `D = ε h pᵀ`.
    pub fn for_curve(spec: &SurfaceSpec, curve: &CurveConfig, exponent: i64) -> Self {
        let n = spec.rank();
        let jh = spec.j_matrix().mul_vec(&curve.h);
        let id = IntMatrix::identity(n);
        LinearTwistData {
            m: id.add(&IntMatrix::outer(&curve.h, &curve.q).scale(exponent)),
            r: id.add(&IntMatrix::outer(&jh, &curve.p).scale(exponent)),
            d: IntMatrix::outer(&curve.h, &curve.p).scale(exponent),
        }
    }

    pub fn rank(&self) -> usize {
        self.m.rows()
    }

    /// `self ∘ other`, where `other` acts first.
    pub fn then_after(&self, other: &LinearTwistData) -> Result<LinearTwistData> {
        if self.rank() != other.rank() {
            return Err(Error::DimensionMismatch(format!("{} vs {}", self.rank(), other.rank())));
        }
        Ok(LinearTwistData {
            m: self.m.mul(&other.m),
            r: self.r.mul(&other.r),
            d: self.d.mul(&other.r).add(&other.d),
        })
    }
}

/// Folds a word's linear data left to right; the rightmost item acts first.
pub fn compose_linear(items: &[LinearTwistData]) -> Result<LinearTwistData> {
    let Some(first) = items.first() else {
        return Err(Error::DimensionMismatch("empty sequence has no dimension".into()));
    };
    let mut acc = LinearTwistData::identity(first.rank());
    for item in items {
        acc = acc.then_after(item)?;
    }
    Ok(acc)
}

/// Smith normal form of an integer matrix: the nonzero diagonal entries
/// `d₁ | d₂ | …` (all positive) and their number, the rank.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    pub divisors: Vec<i64>,
    pub rank: usize,
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m: Vec<Vec<i128>> = (0..rows).map(|i| a.row(i).iter().map(|&x| x as i128).collect()).collect();
    let mut divisors = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        // Smallest nonzero entry of the remaining block becomes the pivot.
        let pivot = (t..rows)
            .flat_map(|i| (t..cols).map(move |j| (i, j)))
            .filter(|&(i, j)| m[i][j] != 0)
            .min_by_key(|&(i, j)| m[i][j].abs());
        let Some((pi, pj)) = pivot else { break };
        m.swap(t, pi);
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        loop {
            let p = m[t][t];
            let mut dirty = false;
            for i in t + 1..rows {
                let f = m[i][t] / p;
                if f != 0 {
                    for j in t..cols {
                        m[i][j] -= f * m[t][j];
                    }
                }
                dirty |= m[i][t] != 0;
            }
            for j in t + 1..cols {
                let f = m[t][j] / p;
                if f != 0 {
                    for row in m.iter_mut().skip(t) {
                        row[j] -= f * row[t];
                    }
                }
                dirty |= m[t][j] != 0;
            }
            if !dirty {
                // Pivot must divide the rest of the block; otherwise fold the
                // offending row in and reduce again.
                let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| m[i][j] % p != 0));
                match bad {
                    Some(i) => {
                        for j in t..cols {
                            m[t][j] += m[i][j];
                        }
                    }
                    None => break,
                }
            }
            // Move the smallest nonzero entry of row t / column t to the pivot.
            let best_row = (t..rows).filter(|&i| m[i][t] != 0).min_by_key(|&i| m[i][t].abs());
            let best_col = (t..cols).filter(|&j| m[t][j] != 0).min_by_key(|&j| m[t][j].abs());
            match (best_row, best_col) {
                (Some(i), Some(j)) if m[i][t].abs() <= m[t][j].abs() => m.swap(t, i),
                (_, Some(j)) => {
                    for row in m.iter_mut() {
                        row.swap(t, j);
                    }
                }
                (Some(i), None) => m.swap(t, i),
                (None, None) => unreachable!("pivot is nonzero"),
            }
        }
        divisors.push(i64::try_from(m[t][t].abs()).expect("divisor fits in i64"));
        t += 1;
    }
    SmithForm { rank: divisors.len(), divisors }
}

/// A finitely generated abelian group `Z^r ⊕ Z/d₁ ⊕ ⋯ ⊕ Z/d_k` with
/// `d₁ | ⋯ | d_k` and every `dᵢ ≥ 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct AbelianGroup {
    pub free_rank: usize,
    pub torsion: Vec<i64>,
}

impl AbelianGroup {
    pub fn trivial() -> Self {
        AbelianGroup { free_rank: 0, torsion: Vec::new() }
    }

    pub fn cyclic(order: i64) -> Self {
        match order.abs() {
            0 => AbelianGroup { free_rank: 1, torsion: vec![] },
            1 => AbelianGroup::trivial(),
            n => AbelianGroup { free_rank: 0, torsion: vec![n] },
        }
    }

    /// Cokernel of `a`, viewed as a map into `Z^{rows}`.
    pub fn cokernel(a: &IntMatrix) -> Self {
        let snf = smith_normal_form(a);
        AbelianGroup {
            free_rank: a.rows() - snf.rank,
            torsion: snf.divisors.into_iter().filter(|&d| d > 1).collect(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Group order, or `None` when infinite.
    pub fn order(&self) -> Option<i64> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = vec!["Z".to_string(); self.free_rank];
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        write!(f, "{}", parts.join(" + "))
    }
}

/// Deviation matrix of a word, composed from pairing data only.
pub fn word_linear_data(surface: &Surface, word: &TwistWord) -> Result<LinearTwistData> {
    let mut acc = LinearTwistData::identity(surface.spec.rank());
    for (name, e) in word.entries() {
        let c = surface.curve(name)?;
        acc = acc.then_after(&LinearTwistData::for_curve(&surface.spec, c, *e))?;
    }
    Ok(acc)
}

/// First homology of the closed 3-manifold of the open book with page
/// `surface` and monodromy `word`: the cokernel of the composed deviation
/// matrix.
pub fn h1_of_word(surface: &Surface, word: &TwistWord) -> Result<AbelianGroup> {
    Ok(AbelianGroup::cokernel(&word_linear_data(surface, word)?.d))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn snf_examples() {
        assert_eq!(smith_normal_form(&IntMatrix::from_rows(&[vec![5]])).divisors, vec![5]);
        let s = smith_normal_form(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.divisors, vec![1, 6]);
        let z = IntMatrix::zeros(2, 2);
        assert_eq!(smith_normal_form(&z).rank, 0);
        assert_eq!(AbelianGroup::cokernel(&z).to_string(), "Z + Z");
    }

    #[test]
    fn rendering() {
        assert_eq!(AbelianGroup::trivial().to_string(), "0");
        assert_eq!(AbelianGroup::cyclic(0).to_string(), "Z");
        assert_eq!(AbelianGroup::cyclic(-5).to_string(), "Z/5");
        let g = AbelianGroup { free_rank: 1, torsion: vec![2, 6] };
        assert_eq!(g.to_string(), "Z + Z/2 + Z/6");
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        // diag(4, 6) is not in normal form; the answer is (2, 12).
        let s = smith_normal_form(&IntMatrix::from_rows(&[vec![4, 0], vec![0, 6]]));
        assert_eq!(s.divisors, vec![2, 12]);
    }

    #[test]
    fn compose_linear_single_item() {
        let d = LinearTwistData {
            m: IntMatrix::identity(2),
            r: IntMatrix::identity(2),
            d: IntMatrix::from_rows(&[vec![1, 2], vec![3, 4]]),
        };
        assert_eq!(compose_linear(std::slice::from_ref(&d)).unwrap(), d);
        let other = LinearTwistData::identity(3);
        assert!(compose_linear(&[d, other]).is_err());
    }
}
