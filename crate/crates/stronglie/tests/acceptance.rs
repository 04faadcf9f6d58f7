//! End-to-end acceptance gate. One test per criterion; each prints a
//! [PASS] line (visible with --nocapture) and enforces its runtime
//! budget, so the suite doubles as a regression clock.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use stronglie::asym::{build_sigma_matrix, replay_appendix, sigma_reduce, SigmaOperator};
use stronglie::conjecture::{check_variant_i, check_variant_ii};
use stronglie::freealg::{default_names, parse_poly, poly_to_string, words_of_multiweight, Poly, Word};
use stronglie::gf::ext_field_gf;
use stronglie::liering::{free_nilpotent_class3, heisenberg, Quantification};
use stronglie::nilquot::{ideal_basis, verify_certificate, MembershipOracle};
use stronglie::relations::{parse_relation_set, standard_relation_set, RelationChoice};

fn budget(name: &str, start: Instant, limit: Duration) {
    let took = start.elapsed();
    assert!(
        took <= limit,
        "{name}: took {took:?}, budget {limit:?}"
    );
}

#[test]
fn criterion_01_k2_single_relation_span() {
    let start = Instant::now();
    for p in [2u64, 3, 5, 7] {
        let rs = standard_relation_set(2, p, RelationChoice::All).unwrap();
        let report = check_variant_i(&rs, true).unwrap();
        assert!(report.all_members(), "p={p}: power identity not a member");
        // at multiweight (1,1) the ideal is exactly the line through ab+ba
        let basis = ideal_basis(&rs, &[1, 1]).unwrap();
        assert_eq!(basis.rank(), 1, "p={p}");
        assert_eq!(basis.words().len(), 2, "p={p}");
        let names = default_names(2).unwrap();
        let gen = parse_poly("a*b + b*a", &names, p).unwrap();
        let mut oracle = MembershipOracle::new(rs.clone());
        assert!(oracle.is_member(&gen, false).unwrap().member);
        let lone = parse_poly("a*b", &names, p).unwrap();
        assert!(!oracle.is_member(&lone, false).unwrap().member);
    }
    budget("criterion 1", start, Duration::from_millis(100));
    println!("[PASS] criterion 1: k=2 identity holds for p in {{2,3,5,7}}, (1,1) ideal is span{{ab+ba}}");
}

#[test]
fn criterion_02_k3_identities() {
    let start = Instant::now();
    let names = default_names(2).unwrap();
    for p in [3u64, 5, 7] {
        let rs = standard_relation_set(3, p, RelationChoice::All).unwrap();
        let report = check_variant_ii(&rs, false).unwrap();
        assert!(report.all_members(), "p={p}");
        assert_eq!(report.results.len(), 3, "p={p}: (2,2) has three swap orbits");
        let mut oracle = MembershipOracle::new(rs.clone());
        for text in [
            "a^2*b^2 - b^2*a^2",
            "a*b^2*a - b*a^2*b",
            "a*b*a*b - b*a*b*a",
        ] {
            let f = parse_poly(text, &names, p).unwrap();
            assert!(oracle.is_member(&f, false).unwrap().member, "p={p}: {text}");
        }
    }
    budget("criterion 2", start, Duration::from_secs(1));
    println!("[PASS] criterion 2: k=3 swap identities are ideal members for p in {{3,5,7}}");
}

#[test]
fn criterion_03_k4_main_orbit_sweep() {
    let start = Instant::now();
    for p in [2u64, 3, 5, 7] {
        let per_p = Instant::now();
        let rs = standard_relation_set(4, p, RelationChoice::All).unwrap();
        let report = check_variant_ii(&rs, false).unwrap();
        assert_eq!(report.results.len(), 10, "p={p}: (3,3) has ten swap orbits");
        assert!(report.all_members(), "p={p}");
        budget(&format!("criterion 3 p={p}"), per_p, Duration::from_secs(5));
    }
    let _ = start;
    println!("[PASS] criterion 3: k=4 orbit sweep passes with short+long relations for p in {{2,3,5,7}}");
}

#[test]
fn criterion_04_k4_characteristic_split() {
    let start = Instant::now();
    for p in [3u64, 5, 7] {
        let rs = standard_relation_set(4, p, RelationChoice::Short).unwrap();
        assert!(
            check_variant_i(&rs, false).unwrap().all_members(),
            "p={p}: short set should suffice at odd p"
        );
    }
    let short2 = standard_relation_set(4, 2, RelationChoice::Short).unwrap();
    assert!(
        !check_variant_i(&short2, false).unwrap().all_members(),
        "p=2: short set must NOT suffice"
    );
    let all2 = standard_relation_set(4, 2, RelationChoice::All).unwrap();
    assert!(
        check_variant_i(&all2, false).unwrap().all_members(),
        "p=2: adding long relations must rescue the identity"
    );
    budget("criterion 4", start, Duration::from_secs(5));
    println!("[PASS] criterion 4: short relations suffice iff p is odd; long ones close the p=2 gap");
}

#[test]
fn criterion_05_k5_full_collapse() {
    let names = default_names(2).unwrap();
    for p in [2u64, 3, 5, 7] {
        let per_p = Instant::now();
        let rs = standard_relation_set(5, p, RelationChoice::All).unwrap();
        let basis = ideal_basis(&rs, &[4, 4]).unwrap();
        assert_eq!(basis.words().len(), 70, "p={p}");
        assert_eq!(basis.rank(), 70, "p={p}: quotient dim at (4,4) must be 0");
        let mut oracle = MembershipOracle::new(rs.clone());
        let a4b4 = parse_poly("a^4*b^4", &names, p).unwrap();
        assert!(oracle.is_member(&a4b4, false).unwrap().member, "p={p}");
        budget(&format!("criterion 5 p={p}"), per_p, Duration::from_secs(30));
    }
    println!("[PASS] criterion 5: k=5 quotient at (4,4) is zero for p in {{2,3,5,7}}, a^4b^4 included");
}

#[test]
fn criterion_06_golden_file_regression() {
    let start = Instant::now();
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let names = default_names(2).unwrap();
    let cases = [
        ("k2.rel", 2u32, RelationChoice::All),
        ("k3.rel", 3, RelationChoice::All),
        ("k4_short.rel", 4, RelationChoice::Short),
        ("k4_long.rel", 4, RelationChoice::Long),
        ("k5_short.rel", 5, RelationChoice::Short),
        ("k5_long.rel", 5, RelationChoice::Long),
    ];
    for (file, k, which) in cases {
        let text = std::fs::read_to_string(dir.join(file)).unwrap();
        let golden = parse_relation_set(&text, file).unwrap();
        let ours = standard_relation_set(k, 3, which).unwrap();
        assert_eq!(golden.len(), ours.len(), "{file}");
        for g in golden.relations() {
            let mine = ours
                .relation(g.label())
                .unwrap_or_else(|| panic!("{file}: label {} missing", g.label()));
            assert_eq!(
                poly_to_string(mine.poly(), &names),
                poly_to_string(g.poly(), &names),
                "{file} {}",
                g.label()
            );
        }
    }
    budget("criterion 6", start, Duration::from_millis(100));
    println!("[PASS] criterion 6: canned families match the golden transcriptions term for term");
}

#[test]
fn criterion_07_derivation_replay() {
    let start = Instant::now();
    for p in [3u64, 5, 7] {
        let log = replay_appendix(p).unwrap();
        assert_eq!(log.failure_count, 0, "p={p}");
        assert_eq!(log.derived_equation_count, 16, "p={p}: 10 products + 6 combinations");
        assert_eq!(log.final_facts.len(), 10, "p={p}");
        assert!(log.steps.iter().all(|s| s.verified), "p={p}");
        assert_eq!(
            log.axioms_used,
            ["L1", "S1", "S2", "S3", "S4", "S5", "S6"],
            "p={p}: nothing beyond the seven axioms may be consumed"
        );
    }
    budget("criterion 7", start, Duration::from_secs(5));
    println!("[PASS] criterion 7: replay derives all facts from L1,S1..S6 with verified certificates");
}

#[test]
fn criterion_08_certificate_soundness() {
    let start = Instant::now();
    let p = 3u64;
    let rs = standard_relation_set(4, p, RelationChoice::All).unwrap();
    let mut oracle = MembershipOracle::new(rs.clone());
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);

    let random_word = |rng: &mut ChaCha8Rng, max_len: usize| {
        let len = rng.gen_range(0..=max_len);
        let letters: Vec<u8> = (0..len).map(|_| rng.gen_range(0..2u8)).collect();
        Word::from_indices(&letters)
    };

    // members by construction: sums of coeff * u * relation * v
    for i in 0..1000 {
        let terms = rng.gen_range(1..=3);
        let mut f = Poly::zero(p, 2).unwrap();
        for _ in 0..terms {
            let rel = &rs.relations()[rng.gen_range(0..rs.len())];
            let u = random_word(&mut rng, 2);
            let v = random_word(&mut rng, 2);
            let c = rng.gen_range(1..p) as i64;
            let piece = rel.poly().mul_words(&u, &v).scale(c);
            f = f.add(&piece).unwrap();
        }
        let outcome = oracle.is_member(&f, true).unwrap();
        assert!(outcome.member, "constructed member #{i} rejected");
        let cert = outcome.certificate.expect("certificate requested");
        assert!(
            verify_certificate(&cert, &f, &rs).unwrap(),
            "certificate #{i} does not re-expand to its input"
        );
    }

    // non-members: random (3,3) polynomials with nonzero normal form
    let words = words_of_multiweight(&[3, 3]);
    let mut rejected = 0;
    while rejected < 1000 {
        let mut f = Poly::zero(p, 2).unwrap();
        for w in &words {
            let c = rng.gen_range(0..p) as i64;
            if c != 0 {
                f = f.add(&Poly::monomial(w.clone(), c, p, 2).unwrap()).unwrap();
            }
        }
        let outcome = oracle.is_member(&f, true).unwrap();
        if outcome.member {
            continue;
        }
        assert!(
            outcome.certificate.is_none(),
            "non-member was handed a certificate"
        );
        rejected += 1;
    }
    budget("criterion 8", start, Duration::from_secs(10));
    println!("[PASS] criterion 8: 1000 member certificates verified, 1000 non-members uncertified");
}

#[test]
fn criterion_09_lie_ring_concordance() {
    let start = Instant::now();

    let h = heisenberg(3).unwrap();
    let strong = h.is_k_strong(2).unwrap();
    assert!(strong.holds);
    assert_eq!(strong.quantification, Quantification::Exhaustive { count: 27 });
    let ident = h.check_identity_i_on_ring(2).unwrap();
    assert!(ident.holds);
    assert_eq!(
        ident.quantification,
        Quantification::Exhaustive { count: 729 },
        "all 27^2 ad pairs must be enumerated"
    );

    let l3 = free_nilpotent_class3(3).unwrap();
    let strong3 = l3.is_k_strong(3).unwrap();
    assert!(strong3.holds);
    assert!(matches!(
        strong3.quantification,
        Quantification::Exhaustive { .. }
    ));
    let ident3 = l3.check_identity_i_on_ring(3).unwrap();
    assert!(ident3.holds);
    assert!(matches!(
        ident3.quantification,
        Quantification::Exhaustive { .. }
    ));

    // scalar extension to F_9 = F_3[t]/(t^2+1): construction re-validates
    // alternation and Jacobi, so Ok(...) already certifies both
    let f9 = ext_field_gf(3, 2, &[1, 0, 1]).unwrap();
    let ext = h.extend_scalars(&f9).unwrap();
    assert_eq!(ext.dim(), 6);
    assert!(ext.is_k_strong(2).unwrap().holds);

    budget("criterion 9", start, Duration::from_secs(10));
    println!("[PASS] criterion 9: ring oracles agree: Heisenberg 2-strong, class-3 3-strong, F_9 extension stays 2-strong");
}

#[test]
fn criterion_10_sigma_agrees_with_orbit_sweep() {
    let start = Instant::now();
    for p in [3u64, 5, 7] {
        let rs = standard_relation_set(4, p, RelationChoice::All).unwrap();
        let matrix = build_sigma_matrix(&rs, &[3, 3], SigmaOperator::SwapNegate).unwrap();
        let reduction = sigma_reduce(&matrix);
        assert!(reduction.triangularized, "p={p}");
        let sweep = check_variant_ii(&rs, false).unwrap();
        assert_eq!(
            reduction.triangularized,
            sweep.all_members(),
            "p={p}: operator verdict must agree with the orbit sweep"
        );
        assert_eq!(matrix.columns().len(), sweep.results.len(), "p={p}");
    }
    budget("criterion 10", start, Duration::from_secs(5));
    println!("[PASS] criterion 10: sigma triangularization and the k=4 orbit sweep give the same verdict");
}
