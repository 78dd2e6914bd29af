//! Surfaces with boundary, curve catalogs and stabilisation.
//!
//! # Generators
//!
//! Mapping classes act on the free group generated by the loop letters
//! `x1, y1, …, xg, yg, z2, …, zn` and one arc letter `a2, …, an` per boundary
//! component other than the first. The loop letters generate π₁ of the page
//! with basepoint `p` on ∂₁; `z_k` is the loop around ∂_k and `a_k` is an arc
//! from `p` to a basepoint on ∂_k. Keeping the arcs makes the action faithful
//! even when there are several boundary components (the twist about ∂₂, for
//! instance, moves `a2` but fixes every loop).
//!
//! Homological data (`h`, `q`, `p` on a `CurveConfig`) lives in rank
//! `m = 2g + n − 1`: the absolute basis is `x1, y1, …, zn` and the relative
//! basis is `j(x1), …, j(yg), A2, …, An`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::builtin;
use crate::error::{Error, Result};
use crate::freegroup::{FreeAutomorphism, FreeWord};
use crate::homology::LinearTwistData;
use crate::matrix::IntMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceSpec {
    genus: usize,
    boundary: usize,
    /// Loop around ∂₁ at the basepoint, as a word in the loop letters.
    boundary_one: FreeWord,
}

impl SurfaceSpec {
    /// The standard layout, where the loop around ∂₁ is
    /// `Π [x_i y_i⁻¹ x_i⁻¹ y_i] · z2⁻¹ ⋯ zn⁻¹`.
    pub fn standard(genus: usize, boundary: usize) -> Result<Self> {
        if boundary == 0 {
            return Err(Error::InvalidBoundary { index: 0, count: 0 });
        }
        let ext = 2 * genus + 2 * (boundary - 1);
        let mut raw = Vec::new();
        for i in 0..genus as i32 {
            let (x, y) = (2 * i + 1, 2 * i + 2);
            raw.extend_from_slice(&[x, -y, -x, y]);
        }
        for k in 2..=boundary {
            raw.push(-((2 * genus + k - 1) as i32));
        }
        Ok(SurfaceSpec { genus, boundary, boundary_one: FreeWord::reduce(ext, &raw)? })
    }

    pub fn with_boundary_word(genus: usize, boundary: usize, word: FreeWord) -> Result<Self> {
        let spec = SurfaceSpec::standard(genus, boundary)?;
        if word.rank() != spec.ext_rank() {
            return Err(Error::RankMismatch { left: spec.ext_rank(), right: word.rank() });
        }
        let loops = spec.rank();
        if word.letters().iter().any(|l| l.unsigned_abs() as usize > loops) {
            return Err(Error::InvalidCatalog("boundary word uses arc letters".into()));
        }
        Ok(SurfaceSpec { boundary_one: word, ..spec })
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary
    }

    /// Rank of H₁ of the page, `2g + n − 1`.
    pub fn rank(&self) -> usize {
        2 * self.genus + self.boundary - 1
    }

    /// Number of free generators the exact action uses, `2g + 2(n − 1)`.
    pub fn ext_rank(&self) -> usize {
        2 * self.genus + 2 * (self.boundary - 1)
    }

    /// 0-based letter index of `z_k`, `k ≥ 2`.
    pub fn z_letter(&self, k: usize) -> usize {
        2 * self.genus + k - 2
    }

    /// 0-based letter index of `a_k`, `k ≥ 2`.
    pub fn arc_letter(&self, k: usize) -> usize {
        self.rank() + k - 2
    }

    pub fn letter_names(&self) -> Vec<String> {
        let mut names = self.absolute_labels();
        names.extend((2..=self.boundary).map(|k| format!("a{k}")));
        names
    }

    pub fn absolute_labels(&self) -> Vec<String> {
        let mut names = Vec::new();
        for i in 1..=self.genus {
            names.push(format!("x{i}"));
            names.push(format!("y{i}"));
        }
        names.extend((2..=self.boundary).map(|k| format!("z{k}")));
        names
    }

    pub fn relative_labels(&self) -> Vec<String> {
        let mut names = Vec::new();
        for i in 1..=self.genus {
            names.push(format!("j(x{i})"));
            names.push(format!("j(y{i})"));
        }
        names.extend((2..=self.boundary).map(|k| format!("A{k}")));
        names
    }

    pub fn boundary_one_word(&self) -> &FreeWord {
        &self.boundary_one
    }

    /// The word fixed by every mapping class for boundary component `k`
    /// (1-based): the loop itself for ∂₁, `a_k⁻¹ z_k a_k` otherwise.
    pub fn boundary_word(&self, k: usize) -> Result<FreeWord> {
        self.check_boundary(k)?;
        if k == 1 {
            return Ok(self.boundary_one.clone());
        }
        let (z, a) = (self.z_letter(k) as i32 + 1, self.arc_letter(k) as i32 + 1);
        FreeWord::reduce(self.ext_rank(), &[-a, z, a])
    }

    pub fn boundary_words(&self) -> Vec<FreeWord> {
        (1..=self.boundary).map(|k| self.boundary_word(k).expect("index in range")).collect()
    }

    /// Absolute class of ∂_k: `z_k` for `k ≥ 2`, `−(z2 + ⋯ + zn)` for ∂₁.
    pub fn boundary_class(&self, k: usize) -> Result<Vec<i64>> {
        self.check_boundary(k)?;
        let mut h = vec![0; self.rank()];
        if k == 1 {
            for j in 2..=self.boundary {
                h[self.z_letter(j)] = -1;
            }
        } else {
            h[self.z_letter(k)] = 1;
        }
        Ok(h)
    }

    /// Relative pairing covector of the ∂_k-parallel curve. The arc `A_k` sits
    /// at the same position in the relative basis as `z_k` in the absolute one.
    pub fn boundary_pairing(&self, k: usize) -> Result<Vec<i64>> {
        self.check_boundary(k)?;
        let mut p = vec![0; self.rank()];
        if k == 1 {
            for j in 2..=self.boundary {
                p[self.z_letter(j)] = 1;
            }
        } else {
            p[self.z_letter(k)] = -1;
        }
        Ok(p)
    }

    pub fn check_boundary(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.boundary {
            return Err(Error::InvalidBoundary { index: k, count: self.boundary });
        }
        Ok(())
    }

    /// `J = diag(1, …, 1, 0, …, 0)`, the map from absolute to relative homology.
    pub fn j_matrix(&self) -> IntMatrix {
        let mut d = vec![0; self.rank()];
        d[..2 * self.genus].fill(1);
        IntMatrix::diagonal(&d)
    }

    /// Exponent-sum matrix of the exact action determined by linear data:
    /// `M` on the loop letters, the arc columns of `D` above the arc letters,
    /// and the identity below.
    pub fn ext_abelianization(&self, lin: &LinearTwistData) -> IntMatrix {
        let m = self.rank();
        let g2 = 2 * self.genus;
        let mut e = IntMatrix::identity(self.ext_rank());
        for i in 0..m {
            for j in 0..m {
                e[(i, j)] = lin.m[(i, j)];
            }
            for j in g2..m {
                e[(i, j + m - g2)] = lin.d[(i, j)];
            }
        }
        e
    }

    fn default_name(&self) -> String {
        if self.genus < 10 && self.boundary < 10 {
            format!("sigma{}{}", self.genus, self.boundary)
        } else {
            format!("sigma{}_{}", self.genus, self.boundary)
        }
    }
}

/// A named simple closed curve with its homological data and, when known,
/// the exact automorphism of its positive twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurveConfig {
    pub name: String,
    /// Absolute class `[c]`.
    pub h: Vec<i64>,
    /// `q_k = ⟨x_k, c⟩` against the absolute basis.
    pub q: Vec<i64>,
    /// `p_k = ⟨r_k, c⟩` against the relative basis.
    pub p: Vec<i64>,
    pub boundary_parallel_to: Option<usize>,
    pub aut: Option<FreeAutomorphism>,
}

impl CurveConfig {
    /// Algebraic intersection `⟨c, other⟩`.
    pub fn pairing(&self, other: &CurveConfig) -> i64 {
        self.h.iter().zip(&other.q).map(|(a, b)| a * b).sum()
    }

    pub fn aut(&self) -> Result<&FreeAutomorphism> {
        self.aut.as_ref().ok_or_else(|| Error::MissingAutomorphism(self.name.clone()))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChainRelation {
    pub a: String,
    pub b: String,
    pub boundary: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LanternRelation {
    pub lhs: Vec<String>,
    pub rhs: Vec<String>,
}

/// Relation tables shipped with a catalog, used both for validation and as
/// rewriting patterns.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relations {
    #[serde(default)]
    pub braid: Vec<[String; 2]>,
    #[serde(default)]
    pub commute: Vec<[String; 2]>,
    #[serde(default)]
    pub chain: Vec<ChainRelation>,
    #[serde(default)]
    pub lantern: Vec<LanternRelation>,
}

impl Relations {
    fn renamed(&self, map: &BTreeMap<String, String>) -> Relations {
        let r = |s: &String| map.get(s).cloned().unwrap_or_else(|| s.clone());
        Relations {
            braid: self.braid.iter().map(|[a, b]| [r(a), r(b)]).collect(),
            commute: self.commute.iter().map(|[a, b]| [r(a), r(b)]).collect(),
            chain: self
                .chain
                .iter()
                .map(|c| ChainRelation { a: r(&c.a), b: r(&c.b), boundary: r(&c.boundary) })
                .collect(),
            lantern: self
                .lantern
                .iter()
                .map(|l| LanternRelation {
                    lhs: l.lhs.iter().map(r).collect(),
                    rhs: l.rhs.iter().map(r).collect(),
                })
                .collect(),
        }
    }

    pub fn names(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        for [a, b] in self.braid.iter().chain(&self.commute) {
            out.insert(a.as_str());
            out.insert(b.as_str());
        }
        for c in &self.chain {
            out.extend([c.a.as_str(), c.b.as_str(), c.boundary.as_str()]);
        }
        for l in &self.lantern {
            out.extend(l.lhs.iter().chain(&l.rhs).map(String::as_str));
        }
        out
    }
}

/// A surface together with its curve catalog.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surface {
    pub name: String,
    pub spec: SurfaceSpec,
    pub curves: Vec<CurveConfig>,
    pub relations: Relations,
}

/// Outcome of a check in `validate_catalog`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<CheckResult>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.checks.iter().find(|c| !c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "ok  " } else { "FAIL" };
            out.push_str(&format!("{status} {}", c.name));
            if !c.detail.is_empty() {
                out.push_str(&format!(" ({})", c.detail));
            }
            out.push('\n');
        }
        out
    }
}

/// Result of stabilising a surface at boundary component `K`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stabilization {
    pub surface: Surface,
    /// Old curve name to new curve name, for the curves that were renamed.
    pub renames: BTreeMap<String, String>,
    /// The boundary-parallel curve whose positive twist is the stabilisation.
    pub stabilisation_curve: String,
    /// Boundary index that the stabilised component `K` now refers to.
    pub new_k: usize,
    /// Curve parallel to the new `K`.
    pub k_curve: String,
}

/// Exact automorphism and linear data of the twist about the curve parallel
/// to boundary component `k`.
pub fn boundary_twist(spec: &SurfaceSpec, k: usize, name: &str) -> Result<CurveConfig> {
    spec.check_boundary(k)?;
    let ext = spec.ext_rank();
    let loops = spec.rank();
    let gens: Vec<FreeWord> = (1..=ext).map(|i| FreeWord::generator(ext, i)).collect();
    let mut images = gens.clone();
    let mut inverse_images = gens.clone();
    if k == 1 {
        let w = spec.boundary_one_word();
        let wi = w.inverse();
        for i in 0..ext {
            if i < loops {
                images[i] = w.mul(&gens[i]).mul(&wi);
                inverse_images[i] = wi.mul(&gens[i]).mul(w);
            } else {
                images[i] = w.mul(&gens[i]);
                inverse_images[i] = wi.mul(&gens[i]);
            }
        }
    } else {
        let z = &gens[spec.z_letter(k)];
        let a = spec.arc_letter(k);
        images[a] = z.inverse().mul(&gens[a]);
        inverse_images[a] = z.mul(&gens[a]);
    }
    Ok(CurveConfig {
        name: name.to_string(),
        h: spec.boundary_class(k)?,
        q: vec![0; loops],
        p: spec.boundary_pairing(k)?,
        boundary_parallel_to: Some(k),
        aut: Some(FreeAutomorphism::new(images, inverse_images)?),
    })
}

impl Surface {
    /// Assembles a surface after structural checks (vector lengths, ranks,
    /// unique names, relation names resolving). Relation and geometric checks
    /// are left to `validate_catalog`.
    pub fn new(
        name: impl Into<String>,
        spec: SurfaceSpec,
        curves: Vec<CurveConfig>,
        relations: Relations,
    ) -> Result<Self> {
        let m = spec.rank();
        let mut seen = BTreeSet::new();
        for c in &curves {
            if c.name.is_empty() || c.name.contains(char::is_whitespace) || c.name.contains('^') {
                return Err(Error::InvalidCatalog(format!("bad curve name `{}`", c.name)));
            }
            if !seen.insert(c.name.as_str()) {
                return Err(Error::InvalidCatalog(format!("duplicate curve `{}`", c.name)));
            }
            for (label, v) in [("h", &c.h), ("q", &c.q), ("p", &c.p)] {
                if v.len() != m {
                    return Err(Error::DimensionMismatch(format!(
                        "curve `{}`: {label} has length {}, expected {m}",
                        c.name,
                        v.len()
                    )));
                }
            }
            if let Some(k) = c.boundary_parallel_to {
                spec.check_boundary(k)?;
            }
            if let Some(aut) = &c.aut {
                if aut.rank() != spec.ext_rank() {
                    return Err(Error::RankMismatch { left: spec.ext_rank(), right: aut.rank() });
                }
            }
        }
        for n in relations.names() {
            if !seen.contains(n) {
                return Err(Error::UnknownCurve(n.to_string()));
            }
        }
        Ok(Surface { name: name.into(), spec, curves, relations })
    }

    pub fn load_builtin(name: &str) -> Result<Self> {
        match name {
            "sigma11" => Ok(builtin::sigma11()),
            "sigma12" => Ok(builtin::sigma12()),
            _ => Err(Error::UnknownSurface(name.to_string())),
        }
    }

    pub fn spec(&self) -> &SurfaceSpec {
        &self.spec
    }

    pub fn curve(&self, name: &str) -> Result<&CurveConfig> {
        self.curves
            .iter()
            .find(|c| c.name == name)
            .ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    pub fn curve_index(&self, name: &str) -> Result<usize> {
        self.curves
            .iter()
            .position(|c| c.name == name)
            .ok_or_else(|| Error::UnknownCurve(name.to_string()))
    }

    pub fn curve_names(&self) -> Vec<&str> {
        self.curves.iter().map(|c| c.name.as_str()).collect()
    }

    /// The first catalog curve parallel to boundary component `k`.
    pub fn boundary_curve(&self, k: usize) -> Result<&CurveConfig> {
        self.spec.check_boundary(k)?;
        self.curves
            .iter()
            .find(|c| c.boundary_parallel_to == Some(k))
            .ok_or(Error::MissingBoundaryCurve(k))
    }

    /// Runs the relation, boundary and linear-consistency checks.
    pub fn validate_catalog(&self) -> Result<ValidationReport> {
        let mut checks = Vec::new();
        for c in &self.curves {
            c.aut()?;
        }
        let twist = |n: &str, e: i64| -> Result<FreeAutomorphism> { Ok(self.curve(n)?.aut()?.pow(e)) };
        let product = |names: &[&str]| -> Result<FreeAutomorphism> {
            let mut acc = FreeAutomorphism::identity(self.spec.ext_rank());
            for n in names {
                acc = acc.compose_unchecked(self.curve(n)?.aut()?);
            }
            Ok(acc)
        };

        for c in &self.curves {
            checks.push(self.curve_invariant_check(c));
        }
        for c in &self.curves {
            let aut = c.aut()?;
            let bad: Vec<usize> = self
                .spec
                .boundary_words()
                .iter()
                .enumerate()
                .filter(|(_, w)| aut.apply(w) != **w)
                .map(|(i, _)| i + 1)
                .collect();
            checks.push(CheckResult {
                name: format!("boundary {}", c.name),
                passed: bad.is_empty(),
                detail: if bad.is_empty() { String::new() } else { format!("moves boundary {bad:?}") },
            });
        }
        for c in &self.curves {
            let expected = self.expected_abelianization(c);
            let actual = c.aut()?.abelianize();
            checks.push(CheckResult {
                name: format!("transvection {}", c.name),
                passed: actual == expected,
                detail: if actual == expected {
                    String::new()
                } else {
                    format!("abelianization {actual:?}, expected {expected:?}")
                },
            });
        }
        for [a, b] in &self.relations.braid {
            let i = self.curve(a)?.pairing(self.curve(b)?);
            let lhs = product(&[a, b, a])?;
            let rhs = product(&[b, a, b])?;
            checks.push(CheckResult {
                name: format!("braid {a} {b}"),
                passed: i.abs() == 1 && lhs == rhs,
                detail: format!("intersection {i}"),
            });
        }
        for [a, b] in &self.relations.commute {
            let i = self.curve(a)?.pairing(self.curve(b)?);
            let lhs = product(&[a, b])?;
            let rhs = product(&[b, a])?;
            checks.push(CheckResult {
                name: format!("commute {a} {b}"),
                passed: i == 0 && lhs == rhs,
                detail: format!("intersection {i}"),
            });
        }
        for ch in &self.relations.chain {
            let ab = product(&[&ch.a, &ch.b])?;
            let lhs = ab.pow(6);
            let rhs = twist(&ch.boundary, 1)?;
            checks.push(CheckResult {
                name: format!("chain ({} {})^6 = {}", ch.a, ch.b, ch.boundary),
                passed: lhs == rhs,
                detail: String::new(),
            });
        }
        for l in &self.relations.lantern {
            let lhs: Vec<&str> = l.lhs.iter().map(String::as_str).collect();
            let rhs: Vec<&str> = l.rhs.iter().map(String::as_str).collect();
            checks.push(CheckResult {
                name: format!("lantern {} = {}", l.lhs.join(" "), l.rhs.join(" ")),
                passed: product(&lhs)? == product(&rhs)?,
                detail: String::new(),
            });
        }
        Ok(ValidationReport { checks })
    }

    fn curve_invariant_check(&self, c: &CurveConfig) -> CheckResult {
        let g2 = 2 * self.spec.genus();
        let mut problems = Vec::new();
        if c.h.iter().all(|&x| x == 0) && c.q.iter().any(|&x| x != 0) {
            problems.push("null-homologous curve with nonzero q".to_string());
        }
        if c.q[..g2] != c.p[..g2] {
            problems.push("genus part of p differs from q".to_string());
        }
        if c.q[g2..].iter().any(|&x| x != 0) {
            problems.push("q pairs nontrivially with a boundary class".to_string());
        }
        if let Some(k) = c.boundary_parallel_to {
            if Ok(c.h.clone()) != self.spec.boundary_class(k) {
                problems.push(format!("h is not the class of boundary {k}"));
            }
            if c.q.iter().any(|&x| x != 0) {
                problems.push("boundary-parallel curve with nonzero q".to_string());
            }
            if Ok(c.p.clone()) != self.spec.boundary_pairing(k) {
                problems.push(format!("p is not the arc covector of boundary {k}"));
            }
        }
        CheckResult { name: format!("invariants {}", c.name), passed: problems.is_empty(), detail: problems.join("; ") }
    }

    /// Exponent-sum matrix an exact twist about `c` must have: the
    /// transvection `I + h qᵀ` on loop letters and `h p_arcᵀ` in the arc
    /// columns.
    pub fn expected_abelianization(&self, c: &CurveConfig) -> IntMatrix {
        self.spec.ext_abelianization(&LinearTwistData::for_curve(&self.spec, c, 1))
    }

    /// Adds a 1-handle next to boundary component `k` and returns the new
    /// surface. Component `k` continues as the new boundary circle `n + 1`;
    /// the curve parallel to the other new circle (the modified `k`) carries
    /// the stabilisation twist.
    pub fn stabilize(&self, k: usize) -> Result<Stabilization> {
        self.spec.check_boundary(k)?;
        if k == 1 && *self == builtin::sigma11() {
            return Ok(Stabilization {
                surface: builtin::sigma12(),
                renames: BTreeMap::from([("d".to_string(), "g".to_string())]),
                stabilisation_curve: "d1".into(),
                new_k: 2,
                k_curve: "d2".into(),
            });
        }
        let old = &self.spec;
        let (g, n, m, ext) = (old.genus(), old.boundary_count(), old.rank(), old.ext_rank());
        let new_ext = ext + 2;
        let letter_map: Vec<usize> = (0..ext).map(|i| if i < m { i } else { i + 1 }).collect();
        let z_new = m;
        let a_new = new_ext - 1;
        let gen = |i: usize| FreeWord::generator(new_ext, i + 1);

        // Change of basis for k >= 2 so that z_k stays the loop around the
        // modified boundary k.
        let rebase = if k >= 2 {
            let zk = old.z_letter(k);
            let mut c_img: Vec<FreeWord> = (0..new_ext).map(gen).collect();
            let mut b_img = c_img.clone();
            c_img[zk] = gen(z_new).mul(&gen(zk));
            b_img[zk] = gen(z_new).inverse().mul(&gen(zk));
            Some((
                FreeAutomorphism::new_unchecked(c_img.clone(), b_img.clone()),
                FreeAutomorphism::new_unchecked(b_img, c_img),
            ))
        } else {
            None
        };

        let w1 = old.boundary_one_word().relabel(new_ext, &letter_map);
        let w1 = match &rebase {
            Some((c, _)) => c.apply(&w1),
            None => w1.mul(&gen(z_new).inverse()),
        };
        let spec = SurfaceSpec::with_boundary_word(g, n + 1, w1)?;

        let old_k_curve = self.curves.iter().find(|c| c.boundary_parallel_to == Some(k)).map(|c| c.name.clone());
        let mut renames = BTreeMap::new();
        let mut taken: BTreeSet<String> = self.curves.iter().map(|c| c.name.clone()).collect();
        if let Some(name) = &old_k_curve {
            taken.remove(name);
            let fresh = unique_name(&format!("g{}", n + 1), &taken);
            taken.insert(fresh.clone());
            renames.insert(name.clone(), fresh);
        }
        let stab_name = unique_name(&format!("d{k}"), &taken);
        taken.insert(stab_name.clone());
        let hole_name = unique_name(&format!("d{}", n + 1), &taken);

        let arc_k = if k >= 2 { Some(old.arc_letter(k) as i32 + 1) } else { None };
        let mut curves = Vec::with_capacity(self.curves.len() + 2);
        for c in &self.curves {
            let aut = match &c.aut {
                Some(phi) => {
                    let ext_aut = extend_automorphism(phi, arc_k, new_ext, &letter_map, z_new, a_new)?;
                    Some(match &rebase {
                        Some((cmap, bmap)) => cmap.compose_unchecked(&ext_aut).compose_unchecked(bmap),
                        None => ext_aut,
                    })
                }
                None => None,
            };
            let mut h = c.h.clone();
            let mut q = c.q.clone();
            let mut p = c.p.clone();
            if k >= 2 {
                h.push(c.h[old.z_letter(k)]);
                p.push(c.p[old.z_letter(k)]);
            } else {
                h.push(0);
                p.push(0);
            }
            q.push(0);
            let name = renames.get(&c.name).cloned().unwrap_or_else(|| c.name.clone());
            let bpt = if Some(&c.name) == old_k_curve.as_ref() { None } else { c.boundary_parallel_to };
            curves.push(CurveConfig { name, h, q, p, boundary_parallel_to: bpt, aut });
        }
        curves.push(boundary_twist(&spec, k, &stab_name)?);
        curves.push(boundary_twist(&spec, n + 1, &hole_name)?);

        let mut relations = self.relations.renamed(&renames);
        let others: Vec<String> = curves.iter().map(|c| c.name.clone()).collect();
        for new in [&stab_name, &hole_name] {
            for other in &others {
                if other != new && !(new == &hole_name && other == &stab_name) {
                    relations.commute.push([new.clone(), other.clone()]);
                }
            }
        }
        let name = spec.default_name();
        let surface = Surface::new(name, spec, curves, relations)?;
        Ok(Stabilization { surface, renames, stabilisation_curve: stab_name, new_k: n + 1, k_curve: hole_name })
    }

    pub fn to_json(&self) -> String {
        let names = self.spec.letter_names();
        let standard = SurfaceSpec::standard(self.spec.genus(), self.spec.boundary_count()).expect("valid spec");
        let file = CatalogFile {
            name: self.name.clone(),
            genus: self.spec.genus(),
            boundary: self.spec.boundary_count(),
            boundary_word: (standard != self.spec).then(|| self.spec.boundary_one_word().render(&names)),
            curves: self
                .curves
                .iter()
                .map(|c| CurveFile {
                    name: c.name.clone(),
                    h: c.h.clone(),
                    q: c.q.clone(),
                    p: c.p.clone(),
                    boundary_parallel_to: c.boundary_parallel_to,
                    aut: c.aut.as_ref().map(|a| AutFile {
                        images: a.images().iter().map(|w| w.render(&names)).collect(),
                        inverse_images: a.inverse_images().iter().map(|w| w.render(&names)).collect(),
                    }),
                })
                .collect(),
            relations: self.relations.clone(),
        };
        serde_json::to_string_pretty(&file).expect("catalog serialises") + "\n"
    }

    /// Parses the JSON catalog schema. Only structural checks run here; call
    /// `validate_catalog` for the relation checks.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: CatalogFile = serde_json::from_str(text)
            .map_err(|e| Error::Parse(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        let base = SurfaceSpec::standard(file.genus, file.boundary)?;
        let names = base.letter_names();
        let spec = match &file.boundary_word {
            Some(w) => SurfaceSpec::with_boundary_word(file.genus, file.boundary, FreeWord::parse(w, &names)?)?,
            None => base,
        };
        let mut curves = Vec::new();
        for c in file.curves {
            let aut = match c.aut {
                Some(a) => {
                    let parse = |ws: &[String]| -> Result<Vec<FreeWord>> {
                        ws.iter().map(|w| FreeWord::parse(w, &names)).collect()
                    };
                    let images = parse(&a.images)?;
                    let inverse_images = parse(&a.inverse_images)?;
                    if images.len() != spec.ext_rank() || inverse_images.len() != spec.ext_rank() {
                        return Err(Error::DimensionMismatch(format!(
                            "curve `{}`: automorphism needs {} images",
                            c.name,
                            spec.ext_rank()
                        )));
                    }
                    let aut = FreeAutomorphism::new(images, inverse_images)
                        .map_err(|e| Error::InvalidAutomorphism(format!("curve `{}`: {e}", c.name)))?;
                    let det = aut.abelianize().determinant();
                    if det.abs() != 1 {
                        return Err(Error::InvalidAutomorphism(format!(
                            "curve `{}`: abelianization has determinant {det}",
                            c.name
                        )));
                    }
                    Some(aut)
                }
                None => None,
            };
            curves.push(CurveConfig {
                name: c.name,
                h: c.h,
                q: c.q,
                p: c.p,
                boundary_parallel_to: c.boundary_parallel_to,
                aut,
            });
        }
        Surface::new(file.name, spec, curves, file.relations)
    }
}

/// Extends `phi` across a new handle attached at boundary `k`. `arc_k` is the
/// 1-based arc letter of `k` before the handle (absent for ∂₁). The new loop
/// and arc follow the old arc: `z' ↦ w z' w⁻¹`, `a' ↦ w a'` with
/// `w = φ(a_k) a_k⁻¹`.
fn extend_automorphism(
    phi: &FreeAutomorphism,
    arc_k: Option<i32>,
    new_ext: usize,
    letter_map: &[usize],
    z_new: usize,
    a_new: usize,
) -> Result<FreeAutomorphism> {
    let old_ext = phi.rank();
    let tail = |images: &[FreeWord]| -> FreeWord {
        match arc_k {
            Some(a) => {
                let a_word = FreeWord::generator(old_ext, a as usize);
                images[a as usize - 1].mul(&a_word.inverse()).relabel(new_ext, letter_map)
            }
            None => FreeWord::identity(new_ext),
        }
    };
    let build = |images: &[FreeWord]| -> Vec<FreeWord> {
        let w = tail(images);
        let mut out: Vec<FreeWord> = (1..=new_ext).map(|i| FreeWord::generator(new_ext, i)).collect();
        for (i, img) in images.iter().enumerate() {
            out[letter_map[i]] = img.relabel(new_ext, letter_map);
        }
        out[z_new] = w.mul(&out[z_new]).mul(&w.inverse());
        out[a_new] = w.mul(&out[a_new]);
        out
    };
    FreeAutomorphism::new(build(phi.images()), build(phi.inverse_images()))
}

fn unique_name(base: &str, taken: &BTreeSet<String>) -> String {
    let mut name = base.to_string();
    while taken.contains(&name) {
        name.push('\'');
    }
    name
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogFile {
    name: String,
    genus: usize,
    boundary: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boundary_word: Option<String>,
    curves: Vec<CurveFile>,
    #[serde(default)]
    relations: Relations,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CurveFile {
    name: String,
    h: Vec<i64>,
    q: Vec<i64>,
    p: Vec<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    boundary_parallel_to: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    aut: Option<AutFile>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct AutFile {
    images: Vec<String>,
    inverse_images: Vec<String>,
}
