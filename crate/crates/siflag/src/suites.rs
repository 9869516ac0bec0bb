//! Named verification suites.
//!
//! Each suite bundles the invariants of one area into a pass/fail run
//! against a chosen root datum, sized to finish quickly from the command
//! line. The heavyweight exhaustive versions of the same statements live
//! in the integration tests; these runs are the day-to-day smoke check.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::extweyl::{
    ball, bruhat_leq, length, length_inversions, omega_class, parse_element, s_aff,
    semiinfinite_leq, semiinfinite_leq_shifted, ExtAffineElement,
};
use crate::hecke::{
    bernstein, bernstein_via, check_bernstein_relation, check_braid_relations, hecke_mul,
    std_inverse, HeckeElement, LaurentPolynomial,
};
use crate::kostant::{
    freudenthal_weight_multiplicities, gaitsgory_costalk_poly, gaitsgory_stalk_rank,
    kostant_weight_multiplicity, m_stalk_rank, stabilization_check, weyl_dimension, weyl_orbit,
};
use crate::rootdatum::RootDatum;
use crate::stalkcheck::{
    closure_box, iwahori_orbit_dimension, verify_periodic_example,
    verify_periodic_example_injected,
};
use crate::{Error, Result};

/// All suite names, in the order `all` runs them.
pub const SUITE_NAMES: &[&str] = &[
    "pgl2-ground-truth",
    "length-oracle",
    "orbit-dimension",
    "semiinfinite-shift",
    "kostant-freudenthal",
    "stalk-normalization",
    "gaitsgory",
    "stabilization",
    "hecke-identities",
    "periodic-kl",
    "order-axioms",
];

/// The result of one suite run.
#[derive(Debug)]
pub struct SuiteOutcome {
    pub name: String,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteOutcome {
    fn new(name: &str) -> Self {
        SuiteOutcome {
            name: name.to_string(),
            checked: 0,
            failures: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failures.push(msg());
        }
    }

    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Run one named suite against `datum`. Unknown names are a usage error.
pub fn run_suite(datum: &RootDatum, name: &str) -> Result<SuiteOutcome> {
    match name {
        "pgl2-ground-truth" => pgl2_ground_truth(),
        "length-oracle" => length_oracle(datum),
        "orbit-dimension" => orbit_dimension(datum),
        "semiinfinite-shift" => semiinfinite_shift(datum),
        "kostant-freudenthal" => kostant_freudenthal(datum),
        "stalk-normalization" => stalk_normalization(datum),
        "gaitsgory" => gaitsgory(datum),
        "stabilization" => stabilization(datum),
        "hecke-identities" => hecke_identities(datum),
        "periodic-kl" => periodic_kl(datum),
        "order-axioms" => order_axioms(datum),
        other => Err(Error::Parse(format!(
            "unknown suite '{other}' (expected one of: {}, all)",
            SUITE_NAMES.join(", ")
        ))),
    }
}

/// Run a list of suites; the single name `all` expands to every suite.
pub fn run_suites(datum: &RootDatum, names: &[String]) -> Result<Vec<SuiteOutcome>> {
    let expanded: Vec<String> = if names.len() == 1 && names[0] == "all" {
        SUITE_NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        names.to_vec()
    };
    if expanded.is_empty() {
        return Err(Error::Parse("no suites selected".to_string()));
    }
    expanded.iter().map(|n| run_suite(datum, n)).collect()
}

// ---------------------------------------------------------------------------
// Shared enumeration helpers
// ---------------------------------------------------------------------------

/// Coordinate box `{lo..=hi}^n`.
fn coordinate_box(n: usize, lo: i64, hi: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut v = vec![lo; n];
    loop {
        out.push(v.clone());
        let mut i = 0;
        loop {
            if i == n {
                return out;
            }
            if v[i] < hi {
                v[i] += 1;
                break;
            }
            v[i] = lo;
            i += 1;
        }
    }
}

fn dominant_box(datum: &RootDatum, cap: i64) -> Vec<Vec<i64>> {
    coordinate_box(datum.rank(), 0, cap)
        .into_iter()
        .filter(|v| datum.is_dominant(v))
        .collect()
}

// ---------------------------------------------------------------------------
// The suites
// ---------------------------------------------------------------------------

/// Rank-one adjoint ground truths; runs on the fixed datum regardless of
/// the one selected, since the statements are specific to it.
fn pgl2_ground_truth() -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("pgl2-ground-truth");
    let d = RootDatum::from_alias("a1-adj")?;
    let st1 = parse_element(&d, "s1*t[1]")?;
    out.check(length(&d, &st1) == 0, || {
        format!("ℓ(s·t_1) = {}, expected 0", length(&d, &st1))
    });
    let gens = s_aff(&d);
    let expected = [parse_element(&d, "s1")?, parse_element(&d, "s1*t[2]")?];
    out.check(gens.len() == 2, || format!("|S_aff| = {}", gens.len()));
    for g in &expected {
        out.check(gens.contains(g), || {
            format!("missing affine generator {g:?}")
        });
    }
    out.check(length(&d, &parse_element(&d, "t[1]")?) == 1, || {
        "ℓ(t_1) ≠ 1".to_string()
    });
    out.check(length(&d, &parse_element(&d, "t[-1]")?) == 1, || {
        "ℓ(t_{-1}) ≠ 1".to_string()
    });
    out.check(
        crate::extweyl::omega_elements(&d)?.len() == 2,
        || "|Ω| ≠ 2".to_string(),
    );
    Ok(out)
}

/// Closed length formula vs the affine inversion count, plus symmetry
/// under inversion, on a ball.
fn length_oracle(datum: &RootDatum) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("length-oracle");
    for x in ball(datum, 6)? {
        let closed = length(datum, &x);
        let counted = length_inversions(datum, &x);
        out.check(closed == counted, || {
            format!(
                "length mismatch at {}: closed {closed}, inversions {counted}",
                crate::extweyl::element_text(datum, &x)
            )
        });
        out.check(closed == length(datum, &x.inverse()), || {
            format!(
                "ℓ(x) ≠ ℓ(x⁻¹) at {}",
                crate::extweyl::element_text(datum, &x)
            )
        });
    }
    Ok(out)
}

/// Iwahori orbit dimension equals length for dominant translation parts.
fn orbit_dimension(datum: &RootDatum) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("orbit-dimension");
    let finite = datum.finite_weyl_elements()?;
    for mu in coordinate_box(datum.rank(), 0, 3) {
        if !datum.is_dominant(&mu) {
            continue;
        }
        for w in finite.iter() {
            let x = ExtAffineElement::from_parts(mu.clone(), w.clone());
            let dim = iwahori_orbit_dimension(datum, &x)?;
            out.check(dim == length(datum, &x) as i64, || {
                format!(
                    "orbit dimension {dim} ≠ length {} at {}",
                    length(datum, &x),
                    crate::extweyl::element_text(datum, &x)
                )
            });
        }
    }
    Ok(out)
}

/// The semi-infinite comparison must not depend on the dominant shift.
fn semiinfinite_shift(datum: &RootDatum) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("semiinfinite-shift");
    let b = ball(datum, 4)?;
    let two_rho_check = datum.two_rho_check().to_vec();
    let doubled: Vec<i64> = two_rho_check.iter().map(|c| 2 * c).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x51f1a6);
    for _ in 0..200 {
        let x = &b[rng.gen_range(0..b.len())];
        let y = &b[rng.gen_range(0..b.len())];
        let plain = semiinfinite_leq(datum, x, y)?;
        let shift_a = semiinfinite_leq_shifted(datum, x, y, &two_rho_check)?;
        let shift_b = semiinfinite_leq_shifted(datum, x, y, &doubled)?;
        out.check(plain == shift_a && plain == shift_b, || {
            format!(
                "shift-dependent comparison at ({}, {})",
                crate::extweyl::element_text(datum, x),
                crate::extweyl::element_text(datum, y)
            )
        });
    }
    Ok(out)
}

/// Kostant alternating sums agree with the Freudenthal recursion, and
/// multiplicities add up to the Weyl dimension.
fn kostant_freudenthal(datum: &RootDatum) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("kostant-freudenthal");
    for lam in dominant_box(datum, 2) {
        let dim = match weyl_dimension(datum, &lam) {
            Ok(d) if d <= 300 => d,
            _ => continue,
        };
        let table = freudenthal_weight_multiplicities(datum, &lam)?;
        let mut total = 0i64;
        for (mu, &mult) in &table {
            // The table holds dominant weights; each stands for its orbit.
            total += mult * weyl_orbit(datum, mu).len() as i64;
            let kostant = kostant_weight_multiplicity(datum, &lam, mu)?;
            out.check(kostant == mult, || {
                format!("multiplicity of {mu:?} in {lam:?}: kostant {kostant}, freudenthal {mult}")
            });
        }
        out.check(total == dim as i64, || {
            format!("multiplicities of {lam:?} sum to {total}, dimension is {dim}")
        });
    }
    Ok(out)
}

/// The normalized stalk at the open point is one-dimensional.
fn stalk_normalization(datum: &RootDatum) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("stalk-normalization");
    let zero = vec![0i64; datum.rank()];
    for lam in dominant_box(datum, 3) {
        let rank = m_stalk_rank(datum, &lam, &zero)?;
        out.check(rank == 1, || {
            format!("stalk rank at the top of {lam:?} is {rank}, expected 1")
        });
    }
    Ok(out)
}

/// Parity, normalization, and total-rank consistency of the sheaf
/// stalk/costalk family on the semi-infinite orbit closure.
fn gaitsgory(datum: &RootDatum) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("gaitsgory");
    let zero = vec![0i64; datum.rank()];
    for nu in closure_box(datum, &zero, 5)? {
        let costalk = gaitsgory_costalk_poly(datum, &nu);
        let stalk = gaitsgory_stalk_rank(datum, &nu);
        out.check(costalk.iter().all(|(e, _)| e % 2 == 0), || {
            format!("odd exponent in costalk at {nu:?}: {costalk}")
        });
        out.check(costalk.coeff(1) == 0, || {
            format!("q-coefficient nonzero at {nu:?}")
        });
        let expected0 = i64::from(nu == zero);
        out.check(costalk.coeff(0) == expected0, || {
            format!(
                "constant coefficient at {nu:?} is {}, expected {expected0}",
                costalk.coeff(0)
            )
        });
        out.check(costalk.eval_at_one() == stalk, || {
            format!(
                "costalk({nu:?}) at q=1 is {}, stalk rank {stalk}",
                costalk.eval_at_one()
            )
        });
    }
    Ok(out)
}

/// Deep in the dominant cone the stalk ranks become the plain partition
/// count; a threshold must exist inside the search box.
fn stabilization(datum: &RootDatum) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("stabilization");
    let zero = vec![0i64; datum.rank()];
    for nu in closure_box(datum, &zero, 3)? {
        let threshold = stabilization_check(datum, &nu, 8)?;
        out.check(threshold.is_some(), || {
            format!("no stabilization threshold for {nu:?} in the coordinate-8 box")
        });
    }
    Ok(out)
}

/// Quadratic relation, inverses, braid relations, and the Bernstein
/// commutation identities.
fn hecke_identities(datum: &RootDatum) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("hecke-identities");
    let quadratic = LaurentPolynomial::quadratic();
    for s in s_aff(datum) {
        let hs = HeckeElement::std_basis(s.clone());
        let sq = hecke_mul(datum, &hs, &hs)?;
        let mut expected = HeckeElement::one(datum);
        expected.add_assign_scaled(&hs, &quadratic);
        out.check(sq == expected, || format!("quadratic relation at {s:?}"));
    }
    for x in ball(datum, 4)? {
        let prod = hecke_mul(datum, &HeckeElement::std_basis(x.clone()), &std_inverse(datum, &x)?)?;
        out.check(prod == HeckeElement::one(datum), || {
            format!(
                "H_x·H_x⁻¹ ≠ 1 at {}",
                crate::extweyl::element_text(datum, &x)
            )
        });
    }
    let braid = check_braid_relations(datum)?;
    out.checked += braid.pairs_checked;
    out.failures.extend(braid.failures);
    let cap = if datum.rank() > 1 { 1 } else { 2 };
    for lam in coordinate_box(datum.rank(), -cap, cap) {
        for i in 0..datum.num_simple() {
            let (case, ok) = check_bernstein_relation(datum, &lam, i)?;
            out.check(ok, || format!("Bernstein relation ({case}) failed at λ={lam:?}, i={i}"));
        }
        // Additivity against the opposite coweight.
        let neg: Vec<i64> = lam.iter().map(|c| -c).collect();
        let prod = hecke_mul(datum, &bernstein(datum, &lam)?, &bernstein(datum, &neg)?)?;
        out.check(prod == HeckeElement::one(datum), || {
            format!("θ_λ·θ_{{−λ}} ≠ 1 at λ={lam:?}")
        });
    }
    // Presentation independence at one non-dominant coweight.
    let mut lam = vec![0i64; datum.rank()];
    if !lam.is_empty() {
        lam[0] = -1;
    }
    let base = bernstein(datum, &lam)?;
    for extra in 1..=2i64 {
        let mu: Vec<i64> = datum
            .two_rho_check()
            .iter()
            .map(|c| c * (extra + 1))
            .collect();
        let alt = bernstein_via(datum, &lam, &mu)?;
        out.check(alt == base, || {
            format!("presentation dependence at λ={lam:?}, shift {mu:?}")
        });
    }
    Ok(out)
}

/// Two-sided verification of the closed periodic polynomials, with the
/// injected-failure negative control.
fn periodic_kl(datum: &RootDatum) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("periodic-kl");
    for lam in dominant_box(datum, 2) {
        let report = verify_periodic_example(datum, &lam)?;
        out.check(report.pass(), || {
            let bad: Vec<_> = report.rows.iter().filter(|r| !r.pass).collect();
            format!("periodic example failed at λ={lam:?}: {bad:?}")
        });
    }
    let zero = vec![0i64; datum.rank()];
    let injected = verify_periodic_example_injected(datum, &zero)?;
    out.check(!injected.pass(), || {
        "injected degree shift was not detected".to_string()
    });
    Ok(out)
}

/// Reflexivity, antisymmetry, transitivity, and the minimum element of
/// both orders, sampled on a ball.
fn order_axioms(datum: &RootDatum) -> Result<SuiteOutcome> {
    let mut out = SuiteOutcome::new("order-axioms");
    let b = ball(datum, 5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(0x0ada_51f1);
    for x in &b {
        out.check(bruhat_leq(datum, x, x)?, || {
            format!("Bruhat not reflexive at {}", crate::extweyl::element_text(datum, x))
        });
        out.check(semiinfinite_leq(datum, x, x)?, || {
            format!(
                "semi-infinite not reflexive at {}",
                crate::extweyl::element_text(datum, x)
            )
        });
        let omega = omega_class(datum, x)?;
        out.check(bruhat_leq(datum, &omega, x)?, || {
            format!(
                "length-zero class representative not below {}",
                crate::extweyl::element_text(datum, x)
            )
        });
    }
    for _ in 0..1500 {
        let x = &b[rng.gen_range(0..b.len())];
        let y = &b[rng.gen_range(0..b.len())];
        let z = &b[rng.gen_range(0..b.len())];
        for (name, leq) in [
            (
                "bruhat",
                &(|a: &ExtAffineElement, c: &ExtAffineElement| bruhat_leq(datum, a, c))
                    as &dyn Fn(&ExtAffineElement, &ExtAffineElement) -> Result<bool>,
            ),
            (
                "semi-infinite",
                &(|a: &ExtAffineElement, c: &ExtAffineElement| semiinfinite_leq(datum, a, c)),
            ),
        ] {
            let xy = leq(x, y)?;
            let yx = leq(y, x)?;
            out.check(!(xy && yx) || x == y, || {
                format!("{name} antisymmetry violated")
            });
            if xy && leq(y, z)? {
                out.check(leq(x, z)?, || format!("{name} transitivity violated"));
            } else {
                out.checked += 1;
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[track_caller]
    fn datum(alias: &str) -> RootDatum {
        RootDatum::from_alias(alias).unwrap()
    }

    #[test]
    fn every_suite_passes_on_the_rank_one_adjoint_datum() {
        let d = datum("a1-adj");
        for outcome in run_suites(&d, &["all".to_string()]).unwrap() {
            assert!(
                outcome.pass(),
                "suite {} failed: {:?}",
                outcome.name,
                outcome.failures
            );
            assert!(outcome.checked > 0, "suite {} checked nothing", outcome.name);
        }
    }

    #[test]
    fn spot_suites_pass_on_rank_two_data() {
        let a2 = datum("a2-adj");
        for name in ["length-oracle", "orbit-dimension", "gaitsgory", "periodic-kl"] {
            let outcome = run_suite(&a2, name).unwrap();
            assert!(outcome.pass(), "{name}: {:?}", outcome.failures);
        }
        let b2 = datum("b2");
        for name in ["stalk-normalization", "semiinfinite-shift"] {
            let outcome = run_suite(&b2, name).unwrap();
            assert!(outcome.pass(), "{name}: {:?}", outcome.failures);
        }
    }

    #[test]
    fn unknown_suites_are_rejected() {
        let d = datum("a1-adj");
        assert!(matches!(run_suite(&d, "none"), Err(Error::Parse(_))));
        assert!(matches!(
            run_suites(&d, &[]),
            Err(Error::Parse(_))
        ));
    }
}
