//! Builds the canned relation families and shows where they come from:
//! placement sums of one generator across slots, and the tagged
//! expansion whose Vandermonde extraction justifies them.

use stronglie::freealg::{default_names, poly_to_string, Word};
use stronglie::relations::{
    serialize_relation_set, slot_sum, standard_relation_set, tagged_expansion,
    vandermonde_extract, RelationChoice,
};

fn main() {
    let p = 3;
    let names = default_names(2).expect("two generators");

    for k in 2..=5 {
        let rs = standard_relation_set(k, p, RelationChoice::All).expect("canned set");
        println!("k={}: {} relations in {}", k, rs.len(), rs.name());
    }

    println!();
    let k3 = standard_relation_set(3, p, RelationChoice::All).expect("canned set");
    print!("{}", serialize_relation_set(&k3));

    // S1 for k=4 is the sum of one b over four slots with empty separators
    let s1 = slot_sum(4, 1, &[], p).expect("slot sum");
    println!("\nslot_sum(4, 1, []) = {}", poly_to_string(&s1, &names));

    // the same relation falls out of expanding (a + tb)^n and reading off
    // the degree-1 component in the tag t across distinct tag values
    let seps = vec![Word::empty(), Word::empty(), Word::empty()];
    let expansion = tagged_expansion(4, &seps, p).expect("expansion");
    let split = vandermonde_extract(&expansion, 4).expect("extraction");
    println!(
        "tagged expansion splits into {} homogeneous components (needs >= {} scalars); degree 1:",
        split.components.len(),
        split.field_size_proviso
    );
    println!("  {}", poly_to_string(&split.components[0], &names));
    assert_eq!(split.components[0], s1);
}
