//! Runs the packaged identity checks across strongness parameters and
//! characteristics, including the one split where the short relations
//! stop being enough.

use stronglie::conjecture::{check_variant_i, check_variant_ii};
use stronglie::relations::{standard_relation_set, RelationChoice};

fn main() {
    // the orbit sweep: one identity per swap orbit of (k-1, k-1) words
    for k in [2, 3, 4] {
        for p in [3, 5, 7] {
            let rs = standard_relation_set(k, p, RelationChoice::All).expect("canned set");
            let report = check_variant_ii(&rs, false).expect("check");
            let members = report.results.iter().filter(|r| r.member).count();
            println!(
                "k={} p={}: {}/{} orbit identities in the ideal",
                k,
                p,
                members,
                report.results.len()
            );
        }
    }

    // k=5 also tracks whether each monomial vanishes on its own
    let rs = standard_relation_set(5, 7, RelationChoice::All).expect("canned set");
    let report = check_variant_ii(&rs, false).expect("check");
    let zeros = report
        .results
        .iter()
        .filter(|r| r.reduces_to_zero == Some(true))
        .count();
    println!(
        "k=5 p=7: {}/{} orbits, every monomial itself zero: {}",
        report.results.iter().filter(|r| r.member).count(),
        report.results.len(),
        zeros == report.results.len()
    );

    // characteristic 2 is the odd one out at k=4: the short relations
    // leave the power identity outside, the long ones pull it back in
    println!();
    for which in [RelationChoice::Short, RelationChoice::All] {
        let rs = standard_relation_set(4, 2, which).expect("canned set");
        let report = check_variant_i(&rs, false).expect("check");
        println!(
            "k=4 p=2 [{}]: {} -> member: {}",
            rs.name(),
            report.results[0].identity,
            report.results[0].member
        );
    }

    // machine-readable form, stable field order, no timings attached
    println!();
    let rs = standard_relation_set(4, 3, RelationChoice::All).expect("canned set");
    let report = check_variant_i(&rs, false).expect("check");
    println!("{}", report.to_json());
}
