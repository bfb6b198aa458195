//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its measurements (run with `--nocapture` to see them).
//!
//! Tolerances and bounds are pinned here, in code:
//!   1. group laws, >= 10^4 triples over >= 25 curves (p <= 97), < 60 s
//!   2. enumeration order == P(1) on >= 30 curves (p <= 61), < 60 s
//!   3. structure theorem: chain, n2 | p - 1, <= 4 factors, ranks <= 4
//!   4. exhaustive ed1 residue sweep, odd ell <= 31, both branches, < 120 s
//!   5. exhaustive c2 residue sweep, ell <= 31
//!   6. closed-form P and R regression on the two reference instances
//!   7. embedding degree vs naive repeated multiplication, 10^3 cases
//!   8. Sylow generator search success rate within 0.05 of 1 - 1/ell
//!   9. Weil validity and root moduli sqrt(p) within 1e-9
//!  10. norm gate on the reference instances and their perturbations

use g2jac::{
    factorize, frobenius_char_poly, frobenius_norm, group, is_prime_u64, remainder_int,
    CMField, Curve, FieldCtx, FrobeniusElement, MumfordDivisor,
};
use g2jac_cli::pipelines::{self, SweepConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;
use std::time::Instant;

/// Shared enumerated corpus: 30 random curves with p <= 61.
fn corpus() -> &'static Vec<(Curve, Vec<MumfordDivisor>, g2jac::WeilPoly)> {
    static CORPUS: OnceLock<Vec<(Curve, Vec<MumfordDivisor>, g2jac::WeilPoly)>> = OnceLock::new();
    CORPUS.get_or_init(|| {
        let primes: Vec<u64> = (5..=61).filter(|&q| is_prime_u64(q)).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
        (0..30)
            .map(|i| {
                let p = primes[rng.random_range(0..primes.len())];
                let curve = pipelines::random_corpus_curve(&mut rng, p, i % 4 == 3);
                let els = curve.enumerate().expect("p <= 61");
                let poly = curve.char_poly().expect("counts in bounds");
                (curve, els, poly)
            })
            .collect()
    })
}

#[test]
fn acceptance_01_group_laws() {
    let start = Instant::now();
    let primes: Vec<u64> = (5..=97).filter(|&q| is_prime_u64(q)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE01);
    let curves: Vec<Curve> = (0..25)
        .map(|_| {
            let p = primes[rng.random_range(0..primes.len())];
            pipelines::random_corpus_curve(&mut rng, p, false)
        })
        .collect();
    let mut triples = 0u64;
    for c in &curves {
        for _ in 0..400 {
            let a = c.random_divisor(&mut rng);
            let b = c.random_divisor(&mut rng);
            let d = c.random_divisor(&mut rng);
            let ab = c.add(&a, &b).unwrap();
            assert_eq!(ab, c.add(&b, &a).unwrap(), "commutativity on p = {}", c.p());
            assert_eq!(
                c.add(&ab, &d).unwrap(),
                c.add(&a, &c.add(&b, &d).unwrap()).unwrap(),
                "associativity on p = {}",
                c.p()
            );
            assert_eq!(c.add(&a, &MumfordDivisor::identity()).unwrap(), a);
            assert!(c.add(&a, &c.neg(&a).unwrap()).unwrap().is_identity());
            triples += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(triples >= 10_000);
    assert!(secs < 60.0, "group-law suite took {secs:.1} s");
    println!(
        "acceptance 01 group-laws: PASS ({} curves, {triples} triples, {secs:.2} s)",
        curves.len()
    );
}

#[test]
fn acceptance_02_dual_path_order() {
    let start = Instant::now();
    let corpus = corpus();
    assert!(corpus.len() >= 30);
    for (curve, els, poly) in corpus {
        assert_eq!(
            els.len() as u64,
            poly.order(),
            "enumeration vs P(1) on p = {}, f = {:?}",
            curve.p(),
            curve.f().coeffs()
        );
    }
    let secs = start.elapsed().as_secs_f64();
    assert!(secs < 60.0, "dual-path suite took {secs:.1} s");
    println!(
        "acceptance 02 dual-path-order: PASS ({} curves, {secs:.2} s)",
        corpus.len()
    );
}

#[test]
fn acceptance_03_structure_theorem() {
    let mut checked_ells = 0u64;
    for (curve, els, _) in corpus() {
        let p = curve.p();
        let s = group::structure_from_enumeration(curve, els).unwrap();
        assert!(s.chain_holds(), "divisibility chain on p = {p}");
        assert!(s.nontrivial().len() <= 4);
        assert_eq!(s.order(), els.len() as u64);
        assert_eq!((p - 1) % s.n2(), 0, "n2 | p - 1 on p = {p}: {:?}", s.factors());
        for (ell, _) in factorize(els.len() as u64) {
            let rep = group::sylow_rank_from_elements(curve, els, ell).unwrap();
            assert!(rep.rank <= 4, "rank at ell = {ell} on p = {p}");
            checked_ells += 1;
        }
    }
    println!(
        "acceptance 03 structure-theorem: PASS ({} curves, {checked_ells} prime parts, 0 violations)",
        corpus().len()
    );
}

#[test]
fn acceptance_04_ed1_exhaustive() {
    let start = Instant::now();
    let summary = pipelines::verify_ed1(31);
    let secs = start.elapsed().as_secs_f64();
    assert_eq!(summary.violations, 0, "{:?}", summary.notes);
    assert!(summary.passed, "witness per (ell, branch): {:?}", summary.notes);
    assert!(secs < 120.0, "ed1 sweep took {secs:.1} s");
    println!(
        "acceptance 04 ed1-exhaustive: PASS ({} tuples, {} witnesses, 0 counterexamples, {secs:.2} s)",
        summary.checked, summary.witnesses
    );
}

#[test]
fn acceptance_05_c2_exhaustive() {
    let summary = pipelines::verify_c2(31);
    assert_eq!(summary.violations, 0);
    assert!(summary.passed);
    println!(
        "acceptance 05 c2-exhaustive: PASS ({} pairs, {} with P(1) = 0, 0 violations)",
        summary.checked, summary.witnesses
    );
}

#[test]
fn acceptance_06_closed_form_regression() {
    let field_a = CMField::new(2, 2, 1).unwrap();
    let omega_a = FrobeniusElement::new(1, -1, 0, 1);
    let pa = frobenius_norm(&field_a, &omega_a).unwrap();
    assert_eq!(pa, 7);
    let poly_a = frobenius_char_poly(&field_a, &omega_a, pa).unwrap();
    assert_eq!(poly_a.coeffs_desc(), [1, -4, 10, -28, 49]);
    assert_eq!(remainder_int(&poly_a), (-16, 44));
    let f13 = FieldCtx::new(13).unwrap();
    assert_eq!(g2jac::remainder_mod_sq(&poly_a, &f13), (10, 5));

    let field_b = CMField::new(5, 2, 1).unwrap();
    let omega_b = FrobeniusElement::new(-2, 2, 0, 1);
    let pb = frobenius_norm(&field_b, &omega_b).unwrap();
    assert_eq!(pb, 11);
    let poly_b = frobenius_char_poly(&field_b, &omega_b, pb).unwrap();
    assert_eq!(poly_b.coeffs_desc(), [1, 4, 6, 44, 121]);
    assert_eq!(remainder_int(&poly_b), (72, 104));
    println!("acceptance 06 closed-form-regression: PASS (both reference instances exact)");
}

#[test]
fn acceptance_07_embedding_degree_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xACCE07);
    let odd_primes: Vec<u64> = (3..10_000).filter(|&l| is_prime_u64(l)).collect();
    let mut cases = 0u64;
    while cases < 1000 {
        let ell = odd_primes[rng.random_range(0..odd_primes.len())];
        let p = loop {
            let cand = rng.random_range(2..1_000_000u64);
            if is_prime_u64(cand) && cand != ell {
                break cand;
            }
        };
        let k = group::embedding_degree(p, ell).unwrap().k;
        // Naive oracle: repeated multiplication.
        let mut acc = 1u64;
        let mut naive = 0u64;
        for i in 1..ell {
            acc = (acc as u128 * (p % ell) as u128 % ell as u128) as u64;
            if acc == 1 {
                naive = i;
                break;
            }
        }
        assert_eq!(k, naive, "p = {p}, ell = {ell}");
        assert_eq!((ell - 1) % k, 0);
        cases += 1;
    }
    println!("acceptance 07 embedding-degree: PASS ({cases} random (p, ell) pairs, exact)");
}

#[test]
fn acceptance_08_sylow_generator_rate() {
    let summary = pipelines::verify_sylow_gen(2000, 61, 0xACCE08);
    assert!(summary.passed, "{:?}", summary.notes);
    assert!(summary.witnesses >= 1);
    println!(
        "acceptance 08 sylow-generator-rate: PASS ({} instances within 0.05 of 1 - 1/ell)",
        summary.witnesses
    );
    for n in &summary.notes {
        println!("  {n}");
    }
}

#[test]
fn acceptance_09_weil_validity() {
    let mut polys: Vec<g2jac::WeilPoly> = corpus().iter().map(|(_, _, w)| *w).collect();
    let sweep = pipelines::sweep_cm_params(&SweepConfig {
        d_max: 5,
        ab_max: 2,
        c_max: 2,
        p_max: 500,
        seed: 0,
        threads: 1,
    });
    assert!(!sweep.records.is_empty());
    for r in &sweep.records {
        polys.push(g2jac::WeilPoly {
            p: r.p,
            a1: -r.weil_poly[1],
            a2: r.weil_poly[2],
        });
    }
    let total = polys.len();
    for w in polys {
        assert!(w.is_weil_valid(), "{w:?}");
        let target = (w.p as f64).sqrt();
        for (re, im) in w.complex_roots() {
            let modulus = (re * re + im * im).sqrt();
            assert!(
                (modulus - target).abs() < 1e-9,
                "|root| = {modulus} vs sqrt(p) = {target} for {w:?}"
            );
        }
    }
    println!(
        "acceptance 09 weil-validity: PASS ({total} polynomials, root moduli within 1e-9)"
    );
}

#[test]
fn acceptance_10_norm_gate() {
    let field_a = CMField::new(2, 2, 1).unwrap();
    let omega_a = [1i64, -1, 0, 1];
    assert_eq!(
        frobenius_norm(&field_a, &FrobeniusElement::new(1, -1, 0, 1)).unwrap(),
        7
    );
    let field_b = CMField::new(5, 2, 1).unwrap();
    assert_eq!(
        frobenius_norm(&field_b, &FrobeniusElement::new(-2, 2, 0, 1)).unwrap(),
        11
    );
    let mut rejected = 0;
    for i in 0..4 {
        let mut c = omega_a;
        c[i] += 1;
        match frobenius_norm(&field_a, &FrobeniusElement::new(c[0], c[1], c[2], c[3])) {
            Ok(p) => assert_ne!(p, 7, "perturbed c{} silently accepted", i + 1),
            Err(_) => rejected += 1,
        }
    }
    println!(
        "acceptance 10 norm-gate: PASS (reference norms 7 and 11; {rejected}/4 perturbations rejected, none silently kept p)"
    );
}
