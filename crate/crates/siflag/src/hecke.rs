//! The affine Hecke algebra in its standard basis.
//!
//! Elements are finite sums `Σ c_x · H_x` with `x` ranging over the
//! extended affine Weyl group and `c_x ∈ Z[v, v⁻¹]`. The generators
//! satisfy the quadratic relation `H_s² = 1 + (v⁻¹ − v) H_s`, so
//! `H_s⁻¹ = H_s + (v − v⁻¹)`, and length-zero elements multiply by
//! relabeling. On top of the standard basis sit the Bernstein elements
//! `θ_λ` (products of a dominant translation and the inverse of another)
//! and the Wakimoto elements `θ_λ · H_w`.
//!
//! All constructions here decompose elements against the length-zero
//! subgroup `Ω`, so they require a semisimple root datum.

use std::collections::BTreeMap;
use std::fmt;

use crate::extweyl::{
    element_text, length, omega_decompose, s_aff, saff_reduced_word, ExtAffineElement,
};
use crate::rootdatum::RootDatum;
use crate::Result;

// ---------------------------------------------------------------------------
// Laurent polynomials in v
// ---------------------------------------------------------------------------

/// An element of `Z[v, v⁻¹]`. Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LaurentPolynomial {
    coeffs: BTreeMap<i32, i64>,
}

impl LaurentPolynomial {
    pub fn zero() -> Self {
        LaurentPolynomial::default()
    }

    pub fn one() -> Self {
        LaurentPolynomial::monomial(0, 1)
    }

    pub fn monomial(exp: i32, coeff: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if coeff != 0 {
            coeffs.insert(exp, coeff);
        }
        LaurentPolynomial { coeffs }
    }

    /// `v⁻¹ − v`, the coefficient in the quadratic relation.
    pub fn quadratic() -> Self {
        let mut p = LaurentPolynomial::monomial(-1, 1);
        p.add_assign_scaled(&LaurentPolynomial::monomial(1, -1), 1);
        p
    }

    /// `v − v⁻¹`, the correction term of `H_s⁻¹`.
    pub fn quadratic_neg() -> Self {
        let mut p = LaurentPolynomial::monomial(1, 1);
        p.add_assign_scaled(&LaurentPolynomial::monomial(-1, -1), 1);
        p
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i32) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn add_assign_scaled(&mut self, other: &LaurentPolynomial, scale: i64) {
        if scale == 0 {
            return;
        }
        for (&e, &c) in &other.coeffs {
            let entry = self.coeffs.entry(e).or_insert(0);
            *entry += c * scale;
            if *entry == 0 {
                self.coeffs.remove(&e);
            }
        }
    }

    pub fn mul(&self, other: &LaurentPolynomial) -> LaurentPolynomial {
        let mut out = LaurentPolynomial::zero();
        for (&ea, &ca) in &self.coeffs {
            for (&eb, &cb) in &other.coeffs {
                out.add_assign_scaled(&LaurentPolynomial::monomial(ea + eb, 1), ca * cb);
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    /// True when the polynomial is a single term with positive
    /// coefficient (used to decide whether printing needs parentheses).
    fn is_single_positive(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.values().next().copied().unwrap_or(0) > 0
    }

    /// JSON form: `{"v^-1": 1, "v^2": -3, …}` in exponent order.
    pub fn to_json_map(&self) -> BTreeMap<String, i64> {
        self.coeffs
            .iter()
            .map(|(&e, &c)| (format!("v^{e}"), c))
            .collect()
    }
}

impl fmt::Display for LaurentPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&e, &c) in &self.coeffs {
            let mag = c.abs();
            if first {
                if c < 0 {
                    write!(f, "-")?;
                }
                first = false;
            } else if c < 0 {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            match (e, mag) {
                (0, m) => write!(f, "{m}")?,
                (1, 1) => write!(f, "v")?,
                (1, m) => write!(f, "{m}*v")?,
                (e, 1) => write!(f, "v^{e}")?,
                (e, m) => write!(f, "{m}*v^{e}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Hecke algebra elements
// ---------------------------------------------------------------------------

/// A finite `Z[v, v⁻¹]`-combination of standard basis elements `H_x`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HeckeElement {
    terms: BTreeMap<ExtAffineElement, LaurentPolynomial>,
}

impl HeckeElement {
    pub fn zero() -> Self {
        HeckeElement::default()
    }

    /// The unit `H_e`.
    pub fn one(datum: &RootDatum) -> Self {
        HeckeElement::std_basis(ExtAffineElement::identity(datum))
    }

    /// The standard basis element `H_x`.
    pub fn std_basis(x: ExtAffineElement) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(x, LaurentPolynomial::one());
        HeckeElement { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, x: &ExtAffineElement) -> LaurentPolynomial {
        self.terms.get(x).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExtAffineElement, &LaurentPolynomial)> {
        self.terms.iter()
    }

    pub fn add_assign_scaled(&mut self, other: &HeckeElement, scale: &LaurentPolynomial) {
        for (x, c) in &other.terms {
            let scaled = c.mul(scale);
            match self.terms.get_mut(x) {
                Some(entry) => {
                    entry.add_assign_scaled(&scaled, 1);
                    if entry.is_zero() {
                        self.terms.remove(x);
                    }
                }
                None => {
                    if !scaled.is_zero() {
                        self.terms.insert(x.clone(), scaled);
                    }
                }
            }
        }
    }

    /// Relabel every term `H_x ↦ H_{x·g}`; valid as a multiplication by
    /// `H_g` only when `g` has length zero.
    fn relabel_right(&self, g: &ExtAffineElement) -> HeckeElement {
        HeckeElement {
            terms: self
                .terms
                .iter()
                .map(|(x, c)| (x.compose(g), c.clone()))
                .collect(),
        }
    }
}

/// Right multiplication by a generator: `h · H_s`, using
/// `H_x H_s = H_{xs}` when the length goes up and
/// `H_x H_s = H_{xs} + (v⁻¹ − v) H_x` when it goes down.
fn mul_basis_right(datum: &RootDatum, h: &HeckeElement, s: &ExtAffineElement) -> HeckeElement {
    let q = LaurentPolynomial::quadratic();
    let mut out = HeckeElement::zero();
    for (x, c) in &h.terms {
        let xs = x.compose(s);
        let single = HeckeElement::std_basis(xs.clone());
        out.add_assign_scaled(&single, c);
        if length(datum, &xs) < length(datum, x) {
            let back = HeckeElement::std_basis(x.clone());
            out.add_assign_scaled(&back, &c.mul(&q));
        }
    }
    out
}

/// Product in the Hecke algebra. Each standard term of `b` is factored
/// as a length-zero element times a reduced word, and applied to `a`
/// letter by letter.
pub fn hecke_mul(datum: &RootDatum, a: &HeckeElement, b: &HeckeElement) -> Result<HeckeElement> {
    let gens = s_aff(datum);
    let mut total = HeckeElement::zero();
    for (y, c) in &b.terms {
        let (omega, u) = omega_decompose(datum, y)?;
        let word = saff_reduced_word(datum, &u)?;
        let mut acc = a.relabel_right(&omega);
        for i in word {
            acc = mul_basis_right(datum, &acc, &gens[i]);
        }
        total.add_assign_scaled(&acc, c);
    }
    Ok(total)
}

/// The inverse of a standard basis element:
/// `H_x⁻¹ = H_{s_k}⁻¹ ⋯ H_{s_1}⁻¹ H_{ω⁻¹}` for `x = ω s_1 ⋯ s_k`,
/// with `H_s⁻¹ = H_s + (v − v⁻¹)`.
pub fn std_inverse(datum: &RootDatum, x: &ExtAffineElement) -> Result<HeckeElement> {
    let gens = s_aff(datum);
    let (omega, u) = omega_decompose(datum, x)?;
    let word = saff_reduced_word(datum, &u)?;
    let correction = LaurentPolynomial::quadratic_neg();
    let mut acc = HeckeElement::one(datum);
    for &i in word.iter().rev() {
        let mut next = mul_basis_right(datum, &acc, &gens[i]);
        next.add_assign_scaled(&acc, &correction);
        acc = next;
    }
    Ok(acc.relabel_right(&omega.inverse()))
}

/// Smallest `N ≥ 0` with `λ + N·2ρ∨` dominant.
fn dominant_scale(datum: &RootDatum, lambda: &[i64]) -> i64 {
    let mut need = 0i64;
    for alpha in datum.simple_roots() {
        let p = datum.pair(lambda, alpha);
        if p < 0 {
            need = need.max((-p + 1) / 2);
        }
    }
    need
}

/// The Bernstein element `θ_λ = H_{t_μ}⁻¹ · H_{t_{λ+μ}}` for any
/// dominant `μ` with `λ + μ` dominant; the result does not depend on the
/// choice, and `θ_λ = H_{t_λ}` when `λ` is already dominant. The shift
/// used here is the minimal multiple of `2ρ∨`.
pub fn bernstein(datum: &RootDatum, lambda: &[i64]) -> Result<HeckeElement> {
    datum.check_rank(lambda)?;
    let n = dominant_scale(datum, lambda);
    let mu: Vec<i64> = datum.two_rho_check().iter().map(|c| c * n).collect();
    bernstein_via(datum, lambda, &mu)
}

/// [`bernstein`] with an explicit dominant presentation shift `μ`
/// (requires both `μ` and `λ + μ` dominant). Exposed so tests can verify
/// independence of the presentation.
pub fn bernstein_via(datum: &RootDatum, lambda: &[i64], mu: &[i64]) -> Result<HeckeElement> {
    if !datum.is_dominant(mu) {
        return Err(crate::Error::NotDominant("Bernstein presentation shift"));
    }
    let shifted: Vec<i64> = lambda.iter().zip(mu).map(|(a, b)| a + b).collect();
    if !datum.is_dominant(&shifted) {
        return Err(crate::Error::NotDominant(
            "Bernstein presentation endpoint",
        ));
    }
    let t_mu = ExtAffineElement::translation(datum, mu);
    let t_shift = ExtAffineElement::translation(datum, &shifted);
    let inv = std_inverse(datum, &t_mu)?;
    hecke_mul(datum, &inv, &HeckeElement::std_basis(t_shift))
}

/// The Wakimoto element `θ_λ · H_w` attached to `x = t_λ w`.
pub fn wakimoto(datum: &RootDatum, x: &ExtAffineElement) -> Result<HeckeElement> {
    let theta = bernstein(datum, x.trans())?;
    let fin = ExtAffineElement::from_finite(datum, x.fin().clone());
    hecke_mul(datum, &theta, &HeckeElement::std_basis(fin))
}

// ---------------------------------------------------------------------------
// Relation checks
// ---------------------------------------------------------------------------

/// Which commutation pattern a pairing `⟨λ, α_i⟩` selects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BernsteinCase {
    /// `⟨λ, α_i⟩ = 0`: `H_{s_i} θ_λ = θ_λ H_{s_i}`.
    Orthogonal,
    /// `⟨λ, α_i⟩ = 1`: `H_{s_i} θ_{s_i(λ)} H_{s_i} = θ_λ`.
    Conjugates,
    /// `⟨λ, α_i⟩ = −1`: `H_{s_i} θ_λ H_{s_i} = θ_{s_i(λ)}`.
    ConjugatesMirrored,
    /// `|⟨λ, α_i⟩| > 1`: no two-sided relation of this shape applies.
    NotApplicable,
}

impl fmt::Display for BernsteinCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            BernsteinCase::Orthogonal => "orthogonal",
            BernsteinCase::Conjugates => "conjugates",
            BernsteinCase::ConjugatesMirrored => "conjugates-mirrored",
            BernsteinCase::NotApplicable => "n/a",
        };
        write!(f, "{s}")
    }
}

/// Check the commutation relation between `H_{s_i}` and the Bernstein
/// element of `λ` (0-based simple index). Returns the selected case and
/// whether the identity held.
pub fn check_bernstein_relation(
    datum: &RootDatum,
    lambda: &[i64],
    i: usize,
) -> Result<(BernsteinCase, bool)> {
    datum.check_rank(lambda)?;
    let s = ExtAffineElement::from_finite(datum, datum.simple_reflection(i));
    let h_s = HeckeElement::std_basis(s.clone());
    let pairing = datum.pair(lambda, &datum.simple_roots()[i]);
    let s_lambda = datum.simple_reflection(i).act(lambda);
    match pairing {
        0 => {
            let theta = bernstein(datum, lambda)?;
            let lhs = hecke_mul(datum, &h_s, &theta)?;
            let rhs = hecke_mul(datum, &theta, &h_s)?;
            Ok((BernsteinCase::Orthogonal, lhs == rhs))
        }
        1 => {
            let theta_s = bernstein(datum, &s_lambda)?;
            let lhs = hecke_mul(datum, &hecke_mul(datum, &h_s, &theta_s)?, &h_s)?;
            let rhs = bernstein(datum, lambda)?;
            Ok((BernsteinCase::Conjugates, lhs == rhs))
        }
        -1 => {
            let theta = bernstein(datum, lambda)?;
            let lhs = hecke_mul(datum, &hecke_mul(datum, &h_s, &theta)?, &h_s)?;
            let rhs = bernstein(datum, &s_lambda)?;
            Ok((BernsteinCase::ConjugatesMirrored, lhs == rhs))
        }
        _ => Ok((BernsteinCase::NotApplicable, true)),
    }
}

/// Result of verifying the braid relations among the affine generators.
#[derive(Debug, Default)]
pub struct BraidReport {
    /// Pairs whose product has finite order (each verified).
    pub pairs_checked: usize,
    /// Pairs whose product order exceeds the probe cap (skipped: the
    /// braid relation is vacuous for infinite order).
    pub infinite_pairs: usize,
    pub failures: Vec<String>,
}

/// Verify `H_a H_b H_a ⋯ = H_b H_a H_b ⋯` (m factors each) for every
/// pair of simple affine generators whose product has order `m ≤ 12`.
pub fn check_braid_relations(datum: &RootDatum) -> Result<BraidReport> {
    let gens = s_aff(datum);
    let mut report = BraidReport::default();
    for i in 0..gens.len() {
        for j in i + 1..gens.len() {
            let g = gens[i].compose(&gens[j]);
            let mut power = g.clone();
            let mut order = 1usize;
            while !power.is_identity() && order <= 12 {
                power = power.compose(&g);
                order += 1;
            }
            if !power.is_identity() {
                report.infinite_pairs += 1;
                continue;
            }
            let mut lhs = HeckeElement::one(datum);
            let mut rhs = HeckeElement::one(datum);
            for k in 0..order {
                let (a, b) = if k % 2 == 0 { (i, j) } else { (j, i) };
                lhs = hecke_mul(datum, &lhs, &HeckeElement::std_basis(gens[a].clone()))?;
                rhs = hecke_mul(datum, &rhs, &HeckeElement::std_basis(gens[b].clone()))?;
            }
            report.pairs_checked += 1;
            if lhs != rhs {
                report
                    .failures
                    .push(format!("braid relation failed for generators {i} and {j}"));
            }
        }
    }
    Ok(report)
}

// ---------------------------------------------------------------------------
// Printing
// ---------------------------------------------------------------------------

/// Canonical text form: terms sorted by descending length then element
/// text; `H[<element>]` with the coefficient appended as `*(…)` unless
/// it is 1; the identity term prints as a bare coefficient.
pub fn hecke_text(datum: &RootDatum, h: &HeckeElement) -> String {
    if h.is_zero() {
        return "0".to_string();
    }
    let mut entries: Vec<(usize, String, &LaurentPolynomial)> = h
        .terms
        .iter()
        .map(|(x, c)| (length(datum, x), element_text(datum, x), c))
        .collect();
    entries.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
    let one = LaurentPolynomial::one();
    let parts: Vec<String> = entries
        .into_iter()
        .map(|(_, text, c)| {
            if text == "e" {
                if c.is_single_positive() || *c == one {
                    format!("{c}")
                } else {
                    format!("({c})")
                }
            } else if *c == one {
                format!("H[{text}]")
            } else {
                format!("H[{text}]*({c})")
            }
        })
        .collect();
    parts.join(" + ")
}

/// JSON form: element text mapped to the coefficient's exponent map.
pub fn hecke_json(datum: &RootDatum, h: &HeckeElement) -> BTreeMap<String, BTreeMap<String, i64>> {
    h.terms
        .iter()
        .map(|(x, c)| (element_text(datum, x), c.to_json_map()))
        .collect()
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
