//! Kostant partition numerics on the coroot lattice.
//!
//! The graded partition function `𝒫(ν, q)` counts expressions of `ν` as
//! sums of positive coroots, weighted by `q^(number of parts)`. On top of
//! it sit the Kostant weight-multiplicity formula, stalk and costalk
//! numerics for the dominant family `M_λ` and for the global (Gaitsgory)
//! sheaf, and the stabilization scan that locates where the `M_λ` stalks
//! become independent of `λ`.
//!
//! Weight multiplicities are cross-checked against an independent
//! Freudenthal implementation ([`freudenthal_weight_multiplicities`]),
//! which recurses on norms rather than partitions; the two must agree
//! everywhere.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::{OnceLock, RwLock};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

use crate::rootdatum::RootDatum;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Polynomials in q
// ---------------------------------------------------------------------------

/// Polynomial in `q` with integer coefficients and nonnegative exponents.
/// Zero coefficients are never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QPolynomial {
    coeffs: BTreeMap<u32, i64>,
}

impl QPolynomial {
    pub fn zero() -> Self {
        QPolynomial::default()
    }

    pub fn one() -> Self {
        QPolynomial::monomial(0, 1)
    }

    pub fn monomial(exp: u32, coeff: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        if coeff != 0 {
            coeffs.insert(exp, coeff);
        }
        QPolynomial { coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: u32) -> i64 {
        self.coeffs.get(&exp).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> Option<u32> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn eval_at_one(&self) -> i64 {
        self.coeffs.values().sum()
    }

    pub fn add_assign_scaled(&mut self, other: &QPolynomial, scale: i64) {
        for (&e, &c) in &other.coeffs {
            let entry = self.coeffs.entry(e).or_insert(0);
            *entry += c * scale;
            if *entry == 0 {
                self.coeffs.remove(&e);
            }
        }
    }

    /// Multiply by `q^k`.
    pub fn shift_exponents(&self, k: u32) -> QPolynomial {
        QPolynomial {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e + k, c)).collect(),
        }
    }

    /// Substitute `q ↦ q^k`.
    pub fn scale_exponents(&self, k: u32) -> QPolynomial {
        QPolynomial {
            coeffs: self.coeffs.iter().map(|(&e, &c)| (e * k, c)).collect(),
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, i64)> + '_ {
        self.coeffs.iter().map(|(&e, &c)| (e, c))
    }

    /// JSON form: `{"q^0": c0, "q^2": c2, …}` in exponent order.
    pub fn to_json_map(&self) -> BTreeMap<String, i64> {
        self.coeffs
            .iter()
            .map(|(&e, &c)| (format!("q^{e}"), c))
            .collect()
    }
}

impl fmt::Display for QPolynomial {
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
                (1, 1) => write!(f, "q")?,
                (1, m) => write!(f, "{m}*q")?,
                (e, 1) => write!(f, "q^{e}")?,
                (e, m) => write!(f, "{m}*q^{e}")?,
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// The graded partition function
// ---------------------------------------------------------------------------

type MemoKey = (u128, u32, Vec<i64>);

fn partition_memo() -> &'static RwLock<HashMap<MemoKey, QPolynomial>> {
    static MEMO: OnceLock<RwLock<HashMap<MemoKey, QPolynomial>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

/// The graded Kostant partition function:
/// `𝒫(ν, q) = Σ q^(number of parts)` over expressions of `ν` as an
/// unordered sum of positive coroots. `𝒫(0, q) = 1`; vectors outside
/// the nonnegative coroot cone give the zero polynomial.
pub fn kostant_partition(datum: &RootDatum, nu: &[i64]) -> QPolynomial {
    let Some(target) = datum.coroot_expansion(nu) else {
        return QPolynomial::zero();
    };
    if target.iter().any(|&c| c < 0) {
        return QPolynomial::zero();
    }
    partition_rec(datum, 0, &target)
}

fn partition_rec(datum: &RootDatum, i: u32, t: &[i64]) -> QPolynomial {
    if t.iter().all(|&c| c == 0) {
        return QPolynomial::one();
    }
    let exps = datum.pos_coroot_expansions();
    if i as usize >= exps.len() {
        return QPolynomial::zero();
    }
    let key: MemoKey = (datum.fingerprint(), i, t.to_vec());
    if let Some(p) = partition_memo().read().unwrap().get(&key) {
        return p.clone();
    }
    // Either coroot i is unused, or it is used at least once.
    let mut result = partition_rec(datum, i + 1, t);
    let step = &exps[i as usize];
    let reduced: Vec<i64> = t.iter().zip(step).map(|(a, b)| a - b).collect();
    if reduced.iter().all(|&c| c >= 0) {
        let with_i = partition_rec(datum, i, &reduced).shift_exponents(1);
        result.add_assign_scaled(&with_i, 1);
    }
    let mut memo = partition_memo().write().unwrap();
    if memo.len() >= 3_000_000 {
        memo.clear();
    }
    memo.insert(key, result.clone());
    result
}

/// Dump the partition memo entries belonging to one datum (used by the
/// on-disk cache).
pub(crate) fn partition_memo_snapshot(fingerprint: u128) -> Vec<((u32, Vec<i64>), Vec<(u32, i64)>)> {
    partition_memo()
        .read()
        .unwrap()
        .iter()
        .filter(|((fp, _, _), _)| *fp == fingerprint)
        .map(|((_, i, t), p)| ((*i, t.clone()), p.iter().collect()))
        .collect()
}

/// Seed the partition memo from previously saved entries.
pub(crate) fn partition_memo_load(
    fingerprint: u128,
    entries: Vec<((u32, Vec<i64>), Vec<(u32, i64)>)>,
) {
    let mut memo = partition_memo().write().unwrap();
    for ((i, t), coeffs) in entries {
        let mut p = QPolynomial::zero();
        for (e, c) in coeffs {
            p.add_assign_scaled(&QPolynomial::monomial(e, c), 1);
        }
        memo.insert((fingerprint, i, t), p);
    }
}

// ---------------------------------------------------------------------------
// Weight multiplicities
// ---------------------------------------------------------------------------

/// Kostant's weight multiplicity formula:
/// `m_λ(μ) = Σ_{w ∈ W_f} (−1)^{ℓ(w)} 𝒫(w(λ) + (w(ρ∨) − ρ∨) − μ)`
/// evaluated at `q = 1`. Requires `λ` dominant.
pub fn kostant_weight_multiplicity(datum: &RootDatum, lambda: &[i64], mu: &[i64]) -> Result<i64> {
    if !datum.is_dominant(lambda) {
        return Err(Error::NotDominant("weight multiplicity highest coweight"));
    }
    datum.check_rank(lambda)?;
    datum.check_rank(mu)?;
    let mut total = 0i64;
    for w in datum.finite_weyl_elements()?.iter() {
        let shift = datum.rho_check_shift(w)?;
        let moved = w.act(lambda);
        let arg: Vec<i64> = (0..datum.rank())
            .map(|k| moved[k] + shift[k] - mu[k])
            .collect();
        let p = kostant_partition(datum, &arg).eval_at_one();
        if datum.length_f(w) % 2 == 0 {
            total += p;
        } else {
            total -= p;
        }
    }
    Ok(total)
}

/// Stalk rank of the dominant family at offset `ν`:
/// the multiplicity of the coweight `λ + ν` in the dual-side highest
/// weight module of highest coweight `λ`.
pub fn m_stalk_rank(datum: &RootDatum, lambda: &[i64], nu: &[i64]) -> Result<i64> {
    let mu: Vec<i64> = lambda.iter().zip(nu).map(|(a, b)| a + b).collect();
    kostant_weight_multiplicity(datum, lambda, &mu)
}

/// Graded costalk of the dominant family at offset `ν`: the alternating
/// sum of partition polynomials, with doubled exponents. Only proven —
/// and only computed — when `λ + ν` is itself dominant.
pub fn m_costalk_poly(datum: &RootDatum, lambda: &[i64], nu: &[i64]) -> Result<QPolynomial> {
    if !datum.is_dominant(lambda) {
        return Err(Error::NotDominant("costalk highest coweight"));
    }
    let mu: Vec<i64> = lambda.iter().zip(nu).map(|(a, b)| a + b).collect();
    if !datum.is_dominant(&mu) {
        return Err(Error::OutOfProvenRange(
            "costalk requires λ + ν dominant".into(),
        ));
    }
    let mut total = QPolynomial::zero();
    for w in datum.finite_weyl_elements()?.iter() {
        let shift = datum.rho_check_shift(w)?;
        let moved = w.act(lambda);
        let arg: Vec<i64> = (0..datum.rank())
            .map(|k| moved[k] + shift[k] - mu[k])
            .collect();
        let sign = if datum.length_f(w) % 2 == 0 { 1 } else { -1 };
        total.add_assign_scaled(&kostant_partition(datum, &arg), sign);
    }
    Ok(total.scale_exponents(2))
}

/// Stalk rank of the global sheaf at `ν`: `𝒫(−ν, 1)`.
pub fn gaitsgory_stalk_rank(datum: &RootDatum, nu: &[i64]) -> i64 {
    let neg: Vec<i64> = nu.iter().map(|c| -c).collect();
    kostant_partition(datum, &neg).eval_at_one()
}

/// Graded costalk of the global sheaf at `ν`: `𝒫(−ν, q²)`.
pub fn gaitsgory_costalk_poly(datum: &RootDatum, nu: &[i64]) -> QPolynomial {
    let neg: Vec<i64> = nu.iter().map(|c| -c).collect();
    kostant_partition(datum, &neg).scale_exponents(2)
}

// ---------------------------------------------------------------------------
// Weyl dimension and the Freudenthal oracle
// ---------------------------------------------------------------------------

/// Dimension of the dual-side highest weight module with highest
/// coweight `λ`:
/// `Π_{α > 0} (⟨λ, α⟩ + ht(α)) / ht(α)`.
pub fn weyl_dimension(datum: &RootDatum, lambda: &[i64]) -> Result<u64> {
    if !datum.is_dominant(lambda) {
        return Err(Error::NotDominant("dimension highest coweight"));
    }
    let mut num = BigUint::from(1u32);
    let mut den = BigUint::from(1u32);
    for (alpha, &ht) in datum.pos_roots().iter().zip(datum.root_heights()) {
        num *= BigUint::from((datum.pair(lambda, alpha) + ht) as u64);
        den *= BigUint::from(ht as u64);
    }
    if (&num % &den) != BigUint::zero() {
        return Err(Error::Internal("Weyl dimension was not integral".into()));
    }
    (num / den)
        .to_u64()
        .ok_or_else(|| Error::TooLarge("representation dimension exceeds u64".into()))
}

/// The `W_f`-invariant positive form
/// `(x, y) = Σ_{α > 0} ⟨x, α⟩ ⟨y, α⟩` on coweights.
fn invariant_form(datum: &RootDatum, x: &[i64], y: &[i64]) -> i64 {
    datum
        .pos_roots()
        .iter()
        .map(|a| datum.pair(x, a) * datum.pair(y, a))
        .sum()
}

/// Multiplicities of all dominant coweights of the dual-side module with
/// highest coweight `λ`, computed by Freudenthal's recursion (norms and
/// root strings — no partition functions). Zero multiplicities are
/// omitted.
pub fn freudenthal_weight_multiplicities(
    datum: &RootDatum,
    lambda: &[i64],
) -> Result<BTreeMap<Vec<i64>, i64>> {
    if !datum.is_dominant(lambda) {
        return Err(Error::NotDominant("Freudenthal highest coweight"));
    }
    let n = datum.num_simple();
    // Any dominant coweight of the module is λ − Σ c_i α∨_i with
    // 2·Σ c_i ≤ ⟨λ − μ, 2ρ⟩ ≤ ⟨λ, 2ρ⟩, bounding the enumeration.
    let budget = datum.pair(lambda, datum.two_rho()) / 2;
    let mut candidates: Vec<(i64, Vec<i64>, Vec<i64>)> = Vec::new(); // (deficit, c, μ)
    let mut c = vec![0i64; n];
    loop {
        let total: i64 = c.iter().sum();
        if total <= budget {
            let mut mu = lambda.to_vec();
            for (i, &ci) in c.iter().enumerate() {
                for k in 0..datum.rank() {
                    mu[k] -= ci * datum.simple_coroots()[i][k];
                }
            }
            if datum.is_dominant(&mu) {
                candidates.push((total, c.clone(), mu));
            }
        }
        // Odometer over the simplex Σ c_i ≤ budget.
        let mut pos = 0;
        loop {
            if pos == n {
                break;
            }
            c[pos] += 1;
            if c.iter().sum::<i64>() <= budget {
                break;
            }
            c[pos] = 0;
            pos += 1;
        }
        if pos == n {
            break;
        }
    }
    candidates.sort();

    let mut table: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    let mut deficits: BTreeMap<Vec<i64>, Vec<i64>> = BTreeMap::new();
    for (deficit, cvec, mu) in candidates {
        deficits.insert(mu.clone(), cvec.clone());
        if deficit == 0 {
            table.insert(mu, 1);
            continue;
        }
        let diff: Vec<i64> = lambda.iter().zip(&mu).map(|(a, b)| a - b).collect();
        let denom = invariant_form(datum, lambda, lambda) - invariant_form(datum, &mu, &mu)
            + invariant_form(datum, &diff, datum.two_rho_check());
        if denom <= 0 {
            return Err(Error::Internal(
                "Freudenthal denominator is not positive".into(),
            ));
        }
        let mut num = 0i64;
        for (b_idx, beta_check) in datum.pos_coroots().iter().enumerate() {
            let beta_exp = &datum.pos_coroot_expansions()[b_idx];
            // ξ = μ + k β∨ stays under λ only while the deficit vector
            // stays nonnegative.
            let kmax = cvec
                .iter()
                .zip(beta_exp)
                .filter(|(_, &e)| e > 0)
                .map(|(&d, &e)| d / e)
                .min()
                .unwrap_or(0);
            for k in 1..=kmax {
                let xi: Vec<i64> = mu
                    .iter()
                    .zip(beta_check)
                    .map(|(a, b)| a + k * b)
                    .collect();
                let (xi_dom, _) = datum.make_dominant(&xi);
                let m = table.get(&xi_dom).copied().unwrap_or(0);
                if m != 0 {
                    num += m * invariant_form(datum, &xi, beta_check);
                }
            }
        }
        num *= 2;
        if num % denom != 0 {
            return Err(Error::Internal(
                "Freudenthal recursion produced a non-integer".into(),
            ));
        }
        let m = num / denom;
        if m != 0 {
            table.insert(mu, m);
        }
    }
    Ok(table)
}

/// Multiplicity of an arbitrary coweight `μ`, by conjugating into the
/// dominant chamber and consulting [`freudenthal_weight_multiplicities`].
pub fn freudenthal_multiplicity(datum: &RootDatum, lambda: &[i64], mu: &[i64]) -> Result<i64> {
    let table = freudenthal_weight_multiplicities(datum, lambda)?;
    let (dom, _) = datum.make_dominant(mu);
    Ok(table.get(&dom).copied().unwrap_or(0))
}

/// The full `W_f`-orbit of a coweight, sorted.
pub fn weyl_orbit(datum: &RootDatum, v: &[i64]) -> Vec<Vec<i64>> {
    let mut seen: HashSet<Vec<i64>> = HashSet::new();
    let mut queue: VecDeque<Vec<i64>> = VecDeque::new();
    seen.insert(v.to_vec());
    queue.push_back(v.to_vec());
    while let Some(cur) = queue.pop_front() {
        for i in 0..datum.num_simple() {
            let moved = datum.simple_reflection(i).act(&cur);
            if seen.insert(moved.clone()) {
                queue.push_back(moved);
            }
        }
    }
    let mut out: Vec<Vec<i64>> = seen.into_iter().collect();
    out.sort();
    out
}

// ---------------------------------------------------------------------------
// Stabilization
// ---------------------------------------------------------------------------

/// Scan the dominant box `{λ : 0 ≤ λ_i ≤ bound} ∩ dominant`, in the
/// linear extension (coroot height, then lex), for the first `λ` from
/// which the stalk rank at offset `ν` has stabilized:
/// every `λ′` in the box with `λ ⊴ λ′` satisfies
/// `m_stalk_rank(λ′, ν) = 𝒫(−ν, 1)`.
///
/// Returns `None` when no point of the box has a fully stable up-set.
pub fn stabilization_check(
    datum: &RootDatum,
    nu: &[i64],
    bound: i64,
) -> Result<Option<Vec<i64>>> {
    if bound < 0 {
        return Err(Error::EmptyRange("stabilization box bound is negative"));
    }
    datum.check_rank(nu)?;
    let target = gaitsgory_stalk_rank(datum, nu);
    let rank = datum.rank();
    let mut box_points: Vec<Vec<i64>> = Vec::new();
    let mut coords = vec![0i64; rank];
    loop {
        if datum.is_dominant(&coords) {
            box_points.push(coords.clone());
        }
        let mut pos = 0;
        loop {
            if pos == rank {
                break;
            }
            coords[pos] += 1;
            if coords[pos] <= bound {
                break;
            }
            coords[pos] = 0;
            pos += 1;
        }
        if pos == rank {
            break;
        }
    }
    // Height-then-lex linear extension of the dominance order.
    box_points.sort_by(|a, b| {
        let ha = datum.rational_coroot_height(a).unwrap_or((0, 1));
        let hb = datum.rational_coroot_height(b).unwrap_or((0, 1));
        (ha.0 * hb.1).cmp(&(hb.0 * ha.1)).then(a.cmp(b))
    });
    let values: Vec<i64> = box_points
        .iter()
        .map(|lam| m_stalk_rank(datum, lam, nu))
        .collect::<Result<_>>()?;
    for (idx, lam) in box_points.iter().enumerate() {
        let stable = box_points
            .iter()
            .zip(&values)
            .all(|(other, &val)| !datum.dominance_leq(lam, other) || val == target);
        if stable {
            let _ = idx;
            return Ok(Some(lam.clone()));
        }
    }
    Ok(None)
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
