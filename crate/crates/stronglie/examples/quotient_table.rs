//! Tabulates quotient dimensions of the free algebra modulo a relation
//! family, one cell per multiweight. The (k-1, k-1) cell is the one the
//! identity checks live in; at k=5 it collapses to zero.

use stronglie::freealg::words_of_multiweight;
use stronglie::nilquot::ideal_basis;
use stronglie::relations::{generate_strong_relations, standard_relation_set, RelationChoice};
use stronglie::freealg::Word;

fn main() {
    for (k, max) in [(4u32, 7u32), (5, 8)] {
        let rs = standard_relation_set(k, 3, RelationChoice::All).expect("canned set");
        println!("k={} p=3, quotient dims (rows a-degree, cols b-degree):", k);
        print!("    ");
        for j in 0..=max {
            print!("{j:>4}");
        }
        println!();
        for i in 0..=max {
            print!("{i:>3} ");
            for j in 0..=(max - i) {
                let words = words_of_multiweight(&[i, j]).len();
                let rank = ideal_basis(&rs, &[i, j]).expect("row reduction").rank();
                print!("{:>4}", words - rank);
            }
            println!();
        }
        let c = (k - 1, k - 1);
        let words = words_of_multiweight(&[c.0, c.1]).len();
        let rank = ideal_basis(&rs, &[c.0, c.1]).expect("row reduction").rank();
        println!(
            "cell ({},{}): {} monomials, rank {}, dim {}\n",
            c.0,
            c.1,
            words,
            rank,
            words - rank
        );
    }

    // the canned families sit inside a generated universe: every slot sum
    // over a separator pool, deduplicated up to scalar
    let pool = vec![Word::empty(), Word::from_indices(&[0]), Word::from_indices(&[1])];
    let gen = generate_strong_relations(4, &pool, 6, 3).expect("generation");
    println!(
        "generated family over pool {{empty, a, b}} up to degree 6: {} relations",
        gen.len()
    );
}
