//! Acceptance gate: one test per criterion, each printing a single
//! `criterion N (<name>): PASS — <measured>` line (visible with
//! `cargo test --test acceptance -- --nocapture`).

use std::collections::BTreeMap;
use std::panic::AssertUnwindSafe;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use siflag::extweyl::{
    ball, bruhat_leq, length, length_inversions, omega_class, parse_element, s_aff,
    semiinfinite_leq, semiinfinite_leq_shifted, ExtAffineElement,
};
use siflag::hecke::{
    bernstein, bernstein_via, check_bernstein_relation, check_braid_relations, hecke_mul,
    std_inverse, BernsteinCase, HeckeElement,
};
use siflag::kostant::{
    freudenthal_weight_multiplicities, gaitsgory_costalk_poly, gaitsgory_stalk_rank,
    kostant_weight_multiplicity, m_stalk_rank, stabilization_check, weyl_dimension, weyl_orbit,
};
use siflag::stalkcheck::{
    closure_box, iwahori_orbit_dimension, verify_periodic_example,
    verify_periodic_example_injected,
};
use siflag::RootDatum;

const FIVE: [&str; 5] = ["a1-adj", "a1-sc", "a2-adj", "b2", "g2"];

#[track_caller]
fn datum(alias: &str) -> RootDatum {
    RootDatum::from_alias(alias).unwrap()
}

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

fn dominant_box(d: &RootDatum, cap: i64) -> Vec<Vec<i64>> {
    coordinate_box(d.rank(), 0, cap)
        .into_iter()
        .filter(|v| d.is_dominant(v))
        .collect()
}

/// Run a criterion body, print the mandated line, and re-raise failures.
fn criterion<F>(n: u32, name: &str, budget: Duration, body: F)
where
    F: FnOnce() -> String,
{
    let start = Instant::now();
    match std::panic::catch_unwind(AssertUnwindSafe(body)) {
        Ok(measured) => {
            let elapsed = start.elapsed();
            println!(
                "criterion {n} ({name}): PASS — {measured} in {:.2}s",
                elapsed.as_secs_f64()
            );
            assert!(
                elapsed < budget,
                "criterion {n} exceeded its {budget:?} budget: {elapsed:?}"
            );
        }
        Err(e) => {
            println!("criterion {n} ({name}): FAIL");
            std::panic::resume_unwind(e);
        }
    }
}

#[test]
fn criterion_01_pgl2_ground_truth() {
    criterion(1, "pgl2-ground-truth", Duration::from_secs(1), || {
        let d = datum("a1-adj");
        let st1 = parse_element(&d, "s1*t[1]").unwrap();
        assert_eq!(length(&d, &st1), 0, "ℓ(s·t_1)");
        let gens = s_aff(&d);
        let s = parse_element(&d, "s1").unwrap();
        let st2 = parse_element(&d, "s1*t[2]").unwrap();
        assert_eq!(gens.len(), 2);
        assert!(gens.contains(&s) && gens.contains(&st2), "S_aff = {{s, st_2}}");
        "ℓ(s·t_1) = 0 and S_aff = {s1, s1*t[2]}".to_string()
    });
}

#[test]
fn criterion_02_length_oracle() {
    criterion(2, "length-oracle", Duration::from_secs(60), || {
        let mut total = 0usize;
        let check_ball = |alias: &str, radius: usize| {
            let d = datum(alias);
            let b = ball(&d, radius).unwrap();
            for x in &b {
                assert_eq!(
                    length(&d, x),
                    length_inversions(&d, x),
                    "length oracle disagreement in {alias}"
                );
            }
            b.len()
        };
        for alias in FIVE {
            total += check_ball(alias, 8);
        }
        // The stated radius-8 census is small; widen one rank-two datum
        // until the cumulative element count clears 10⁴.
        let mut radius = 12;
        while total < 10_000 {
            total += check_ball("a2-adj", radius);
            radius += 6;
        }
        format!("{total} elements agreed across the five test data")
    });
}

#[test]
fn criterion_03_orbit_dimension() {
    criterion(3, "orbit-dimension", Duration::from_secs(60), || {
        let mut checked = 0usize;
        for alias in FIVE {
            let d = datum(alias);
            let finite = d.finite_weyl_elements().unwrap();
            for mu in coordinate_box(d.rank(), 0, 4) {
                if !d.is_dominant(&mu) {
                    continue;
                }
                for w in finite.iter() {
                    let x = ExtAffineElement::from_parts(mu.clone(), w.clone());
                    assert_eq!(
                        iwahori_orbit_dimension(&d, &x).unwrap(),
                        length(&d, &x) as i64,
                        "factor count vs length in {alias} at {mu:?}"
                    );
                    checked += 1;
                }
            }
        }
        format!("{checked} dominant-box elements matched")
    });
}

#[test]
fn criterion_04_semiinfinite_shift_independence() {
    criterion(4, "semiinfinite-shift", Duration::from_secs(120), || {
        let mut checked = 0usize;
        for alias in FIVE {
            let d = datum(alias);
            let b = ball(&d, 4).unwrap();
            let shift_a = d.two_rho_check().to_vec();
            let shift_b: Vec<i64> = shift_a.iter().map(|c| 3 * c).collect();
            let mut rng = ChaCha8Rng::seed_from_u64(0xc41_7e57);
            for _ in 0..200 {
                let x = &b[rng.gen_range(0..b.len())];
                let y = &b[rng.gen_range(0..b.len())];
                let plain = semiinfinite_leq(&d, x, y).unwrap();
                assert_eq!(
                    plain,
                    semiinfinite_leq_shifted(&d, x, y, &shift_a).unwrap(),
                    "{alias} shift 2ρ∨"
                );
                assert_eq!(
                    plain,
                    semiinfinite_leq_shifted(&d, x, y, &shift_b).unwrap(),
                    "{alias} shift 6ρ∨"
                );
                checked += 1;
            }
        }
        format!("{checked} pairs agreed under two distinct shifts")
    });
}

#[test]
fn criterion_05_kostant_equals_freudenthal() {
    criterion(5, "kostant-freudenthal", Duration::from_secs(120), || {
        let mut modules = 0usize;
        let mut weights = 0usize;
        for alias in FIVE {
            let d = datum(alias);
            let cap = if d.rank() == 1 { 200 } else { 20 };
            for lam in coordinate_box(d.rank(), 0, cap) {
                if !d.is_dominant(&lam) {
                    continue;
                }
                let dim = match weyl_dimension(&d, &lam) {
                    Ok(dim) if dim <= 200 => dim,
                    _ => continue,
                };
                let table = freudenthal_weight_multiplicities(&d, &lam).unwrap();
                let mut total = 0i64;
                for (mu, &mult) in &table {
                    assert_eq!(
                        kostant_weight_multiplicity(&d, &lam, mu).unwrap(),
                        mult,
                        "{alias}: multiplicity of {mu:?} in {lam:?}"
                    );
                    total += mult * weyl_orbit(&d, mu).len() as i64;
                    weights += 1;
                }
                assert_eq!(total, dim as i64, "{alias}: dimension of {lam:?}");
                modules += 1;
            }
        }
        format!("{modules} modules, {weights} dominant weights, all multiplicity tables agreed")
    });
}

#[test]
fn criterion_06_stalk_normalization() {
    criterion(6, "stalk-normalization", Duration::from_secs(60), || {
        let mut checked = 0usize;
        for alias in FIVE {
            let d = datum(alias);
            let zero = vec![0i64; d.rank()];
            for lam in dominant_box(&d, 4) {
                assert_eq!(
                    m_stalk_rank(&d, &lam, &zero).unwrap(),
                    1,
                    "{alias}: top stalk of {lam:?}"
                );
                checked += 1;
            }
        }
        format!("{checked} dominant coweights all have top stalk rank 1")
    });
}

#[test]
fn criterion_07_gaitsgory_consistency() {
    criterion(7, "gaitsgory", Duration::from_secs(60), || {
        let mut checked = 0usize;
        for alias in FIVE {
            let d = datum(alias);
            let zero = vec![0i64; d.rank()];
            for nu in closure_box(&d, &zero, 6).unwrap() {
                let costalk = gaitsgory_costalk_poly(&d, &nu);
                assert!(
                    costalk.iter().all(|(e, _)| e % 2 == 0),
                    "{alias}: odd exponent at {nu:?}"
                );
                assert_eq!(costalk.coeff(1), 0, "{alias}: q-coefficient at {nu:?}");
                assert_eq!(
                    costalk.coeff(0),
                    i64::from(nu == zero),
                    "{alias}: constant coefficient at {nu:?}"
                );
                assert_eq!(
                    costalk.eval_at_one(),
                    gaitsgory_stalk_rank(&d, &nu),
                    "{alias}: total rank at {nu:?}"
                );
                checked += 1;
            }
        }
        format!("{checked} closure points consistent across all five data")
    });
}

#[test]
fn criterion_08_stabilization() {
    criterion(8, "stabilization", Duration::from_secs(120), || {
        let mut checked = 0usize;
        for alias in FIVE {
            let d = datum(alias);
            let zero = vec![0i64; d.rank()];
            for nu in closure_box(&d, &zero, 4).unwrap() {
                let threshold = stabilization_check(&d, &nu, 8).unwrap();
                assert!(
                    threshold.is_some(),
                    "{alias}: no stabilization threshold for {nu:?} in the coordinate-8 box"
                );
                checked += 1;
            }
        }
        format!("{checked} offsets stabilized inside the coordinate-8 box")
    });
}

#[test]
fn criterion_09_hecke_identities() {
    criterion(9, "hecke-identities", Duration::from_secs(120), || {
        let mut products = 0usize;
        let mut relations = 0usize;
        for alias in ["a1-adj", "a1-sc", "a2-adj", "b2"] {
            let d = datum(alias);
            let rank = d.rank();
            let mut thetas: BTreeMap<Vec<i64>, HeckeElement> = BTreeMap::new();
            let theta = |lam: &[i64], thetas: &mut BTreeMap<Vec<i64>, HeckeElement>| {
                thetas
                    .entry(lam.to_vec())
                    .or_insert_with(|| bernstein(&d, lam).unwrap())
                    .clone()
            };

            // Additivity θ_λ θ_μ = θ_{λ+μ}: exhaustive on a small box…
            let cap = if rank == 1 { 3 } else { 1 };
            let small = coordinate_box(rank, -cap, cap);
            let mut pairs: Vec<(Vec<i64>, Vec<i64>)> = Vec::new();
            for a in &small {
                for b in &small {
                    pairs.push((a.clone(), b.clone()));
                }
            }
            // …plus seeded samples from a wider one.
            let wide = coordinate_box(rank, -2, 2);
            let mut rng = ChaCha8Rng::seed_from_u64(0xbe57_e1a);
            for _ in 0..64 {
                pairs.push((
                    wide[rng.gen_range(0..wide.len())].clone(),
                    wide[rng.gen_range(0..wide.len())].clone(),
                ));
            }
            for (a, b) in pairs {
                let sum: Vec<i64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                let ta = theta(&a, &mut thetas);
                let tb = theta(&b, &mut thetas);
                let prod = hecke_mul(&d, &ta, &tb).unwrap();
                assert_eq!(prod, theta(&sum, &mut thetas), "{alias}: θ_{a:?}·θ_{b:?}");
                products += 1;
            }

            // Presentation independence over the wide box.
            for lam in &wide {
                let base = theta(lam, &mut thetas);
                for extra in 1..=2i64 {
                    let n0 = d
                        .simple_roots()
                        .iter()
                        .map(|alpha| {
                            let p = d.pair(lam, alpha);
                            if p < 0 {
                                (-p + 1) / 2
                            } else {
                                0
                            }
                        })
                        .max()
                        .unwrap_or(0);
                    let mu: Vec<i64> = d
                        .two_rho_check()
                        .iter()
                        .map(|c| c * (n0 + extra))
                        .collect();
                    assert_eq!(
                        bernstein_via(&d, lam, &mu).unwrap(),
                        base,
                        "{alias}: presentation of θ_{lam:?} via {mu:?}"
                    );
                    relations += 1;
                }
            }

            // Standard-basis inverses up to length 6.
            for x in ball(&d, 6).unwrap() {
                let prod = hecke_mul(
                    &d,
                    &HeckeElement::std_basis(x.clone()),
                    &std_inverse(&d, &x).unwrap(),
                )
                .unwrap();
                assert_eq!(prod, HeckeElement::one(&d), "{alias}: H_x·H_x⁻¹");
                relations += 1;
            }

            // Braid relations for every finite-order generator pair.
            let braid = check_braid_relations(&d).unwrap();
            assert!(braid.failures.is_empty(), "{alias}: {:?}", braid.failures);
            relations += braid.pairs_checked;

            // Bernstein commutation for all applicable (λ, i) in the box.
            for lam in &wide {
                for i in 0..d.num_simple() {
                    let (case, ok) = check_bernstein_relation(&d, lam, i).unwrap();
                    if case == BernsteinCase::NotApplicable {
                        continue;
                    }
                    assert!(ok, "{alias}: Bernstein relation ({case}) at λ={lam:?}, i={i}");
                    relations += 1;
                }
            }
        }
        format!("{products} Bernstein products and {relations} identities, all exact")
    });
}

#[test]
fn criterion_10_periodic_kl_example() {
    criterion(10, "periodic-kl", Duration::from_secs(120), || {
        let mut rows = 0usize;
        for alias in ["a1-adj", "a1-sc", "a2-adj", "b2"] {
            let d = datum(alias);
            for lam in coordinate_box(d.rank(), 0, 3) {
                if !d.is_dominant(&lam) {
                    continue;
                }
                let report = verify_periodic_example(&d, &lam).unwrap();
                assert!(
                    report.pass(),
                    "{alias} λ={lam:?}: {:?}",
                    report
                        .rows
                        .iter()
                        .filter(|r| !r.pass)
                        .collect::<Vec<_>>()
                );
                assert!(report.off_family > 0, "{alias}: off-family band empty");
                rows += report.rows.len();
            }
            // Negative control: a shifted degree must be caught.
            let zero = vec![0i64; d.rank()];
            assert!(
                !verify_periodic_example_injected(&d, &zero).unwrap().pass(),
                "{alias}: injected failure went undetected"
            );
        }
        format!("{rows} two-sided comparisons, including off-family zeros and negative controls")
    });
}

#[test]
fn criterion_11_order_axioms() {
    criterion(11, "order-axioms", Duration::from_secs(300), || {
        let mut summary = Vec::new();
        for alias in ["a1-adj", "a2-adj", "b2"] {
            let d = datum(alias);
            let mut radius = 6;
            let mut b = ball(&d, radius).unwrap();
            while b.len() < 300 {
                radius += if d.rank() == 1 { 25 } else { 2 };
                b = ball(&d, radius).unwrap();
            }
            let n = b.len();
            let words = n.div_ceil(64);
            let relate = |leq: &dyn Fn(
                &ExtAffineElement,
                &ExtAffineElement,
            ) -> bool,
                              name: &str| {
                let mut bits = vec![vec![0u64; words]; n];
                for (i, x) in b.iter().enumerate() {
                    for (j, y) in b.iter().enumerate() {
                        if leq(x, y) {
                            bits[i][j / 64] |= 1 << (j % 64);
                        }
                    }
                }
                for (i, x) in b.iter().enumerate() {
                    assert!(
                        bits[i][i / 64] >> (i % 64) & 1 == 1,
                        "{alias}: {name} not reflexive at {x:?}"
                    );
                    for (j, y) in b.iter().enumerate() {
                        let ij = bits[i][j / 64] >> (j % 64) & 1 == 1;
                        let ji = bits[j][i / 64] >> (i % 64) & 1 == 1;
                        assert!(
                            !(ij && ji) || i == j,
                            "{alias}: {name} antisymmetry fails at ({x:?}, {y:?})"
                        );
                        if ij {
                            // Transitivity: row(y) ⊆ row(x).
                            for w in 0..words {
                                assert_eq!(
                                    bits[j][w] & !bits[i][w],
                                    0,
                                    "{alias}: {name} transitivity fails below ({i}, {j})"
                                );
                            }
                        }
                    }
                }
            };
            relate(&|x, y| bruhat_leq(&d, x, y).unwrap(), "bruhat");
            relate(&|x, y| semiinfinite_leq(&d, x, y).unwrap(), "semi-infinite");
            // The length-zero representative is the Bruhat minimum of its class.
            for x in &b {
                let omega = omega_class(&d, x).unwrap();
                assert!(
                    bruhat_leq(&d, &omega, x).unwrap(),
                    "{alias}: class minimum fails at {x:?}"
                );
            }
            summary.push(format!("{alias}: {n} elements"));
        }
        format!("both orders are partial orders with class minima ({})", summary.join(", "))
    });
}
