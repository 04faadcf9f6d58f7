//! Decides membership in the two-sided ideal generated by a relation
//! family, at a fixed multiweight, and replays the returned certificate
//! to confirm it reproduces the input exactly.

use stronglie::freealg::{default_names, parse_poly, poly_to_string};
use stronglie::nilquot::{ideal_basis, is_member, reduce, verify_certificate};
use stronglie::relations::{standard_relation_set, RelationChoice};

fn main() {
    let p = 3;
    let names = default_names(2).expect("two generators");
    let rs = standard_relation_set(4, p, RelationChoice::All).expect("canned set");

    // the central claim at k=4: a^3 b^3 = -b^3 a^3 modulo the ideal
    let target = parse_poly("a^3*b^3 + b^3*a^3", &names, p).expect("parse");
    let outcome = is_member(&target, &rs, true).expect("membership decision");
    println!("member: {}", outcome.member);
    let cert = outcome.certificate.expect("requested certificate");
    println!(
        "certificate with {} terms, each coeff * left * relation * right:",
        cert.len()
    );
    println!("  {}", cert.to_json(&names));
    assert!(verify_certificate(&cert, &target, &rs).expect("replay"));
    println!("certificate re-expands to the target exactly");

    // reduction gives a canonical representative; non-members keep a
    // nonzero normal form and never get a certificate
    let basis = ideal_basis(&rs, &[3, 3]).expect("row reduction");
    println!(
        "\nmultiweight (3,3): {} monomials, ideal rank {}, quotient dim {}",
        basis.words().len(),
        basis.rank(),
        basis.words().len() - basis.rank()
    );
    let stray = parse_poly("a^3*b^3", &names, p).expect("parse");
    let nf = reduce(&stray, &basis).expect("reduction");
    println!(
        "normal form of a^3*b^3: {}",
        poly_to_string(&nf, &names)
    );
    let rejected = is_member(&stray, &rs, true).expect("membership decision");
    assert!(!rejected.member && rejected.certificate.is_none());
    println!("a^3*b^3 alone is not a member (no certificate issued)");
}
