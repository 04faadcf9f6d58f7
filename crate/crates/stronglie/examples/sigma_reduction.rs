//! Rewrites the relation rows at one multiweight as a module over
//! F_p\[s\], where s acts by an order-two word symmetry, and tries to
//! triangularize with (1 - s) down the diagonal: success re-proves every
//! orbit identity at once.

use stronglie::asym::{build_sigma_matrix, sigma_reduce, SigmaOperator};
use stronglie::freealg::{default_names, poly_to_string, Poly};
use stronglie::relations::{standard_relation_set, RelationChoice};

fn main() {
    let names = default_names(2).expect("two generators");

    for p in [3, 5, 7] {
        let rs = standard_relation_set(4, p, RelationChoice::All).expect("canned set");
        let m = build_sigma_matrix(&rs, &[3, 3], SigmaOperator::SwapNegate).expect("closure");
        let r = sigma_reduce(&m);
        println!(
            "k=4 p={} swap_negate on (3,3): {} columns, {} rows, triangularized: {}",
            p,
            m.columns().len(),
            m.rows().len(),
            r.triangularized
        );
    }

    // the triangle itself, at p=3: entry (c0, c1) means c0 + c1 s; the
    // diagonal is 1 - s, i.e. (1, 2) mod 3
    let rs = standard_relation_set(4, 3, RelationChoice::All).expect("canned set");
    let m = build_sigma_matrix(&rs, &[3, 3], SigmaOperator::SwapNegate).expect("closure");
    println!("\ncolumns (swap-orbit representatives):");
    for w in m.columns() {
        let mono = Poly::monomial(w.clone(), 1, 3, 2).expect("monomial");
        print!("  {}", poly_to_string(&mono, &names));
    }
    println!();
    let r = sigma_reduce(&m);
    for row in &r.transformed {
        let cells: Vec<String> = row.iter().map(|(c0, c1)| format!("{c0}+{c1}s")).collect();
        println!("  [{}]", cells.join(" "));
    }

    // word reversal works at k=5 where the swap would not close; six
    // palindromic representatives are fixed by the operator
    let rs = standard_relation_set(5, 3, RelationChoice::All).expect("canned set");
    let m = build_sigma_matrix(&rs, &[4, 4], SigmaOperator::Mirror).expect("closure");
    let fixed = m.fixed().iter().filter(|&&b| b).count();
    let r = sigma_reduce(&m);
    println!(
        "\nk=5 p=3 mirror on (4,4): {} columns ({} fixed), triangularized: {}",
        m.columns().len(),
        fixed,
        r.triangularized
    );
}
