//! Brute-force side: structure-constant Lie rings over F_p, their
//! principal ideals, the strongness and Engel predicates, and scalar
//! extension to a small field extension.

use stronglie::gf::ext_field_gf;
use stronglie::liering::{
    free_nilpotent_class3, heisenberg, parse_lie_ring, serialize_lie_ring,
};

fn main() {
    let h = heisenberg(3).expect("valid ring");
    println!("heisenberg over F_3, dim {}:", h.dim());
    print!("{}", serialize_lie_ring(&h));

    let e1 = h.basis_vector(0);
    let i1 = h.principal_ideal(&e1).expect("ideal");
    println!(
        "ideal generated by e1 has dim {} and is abelian: {}",
        i1.dim(),
        h.is_abelian_subspace(&i1)
    );
    println!(
        "every element generates an abelian ideal: {:?}",
        h.every_element_toastie().expect("sweep")
    );
    println!("2-strong: {:?}", h.is_k_strong(2).expect("sweep"));
    println!("2-Engel:  {:?}", h.is_n_engel(2).expect("sweep"));
    println!(
        "adjoint identity at k=2: {:?}",
        h.check_identity_i_on_ring(2).expect("sweep")
    );

    // the class-3 ring is 3-strong but not 2-strong: e1's ideal is not
    // abelian, it contains [e1, e3] = -e4
    let l = free_nilpotent_class3(3).expect("valid ring");
    println!("\nfree nilpotent class 3 over F_3, dim {}:", l.dim());
    println!("2-strong: {:?}", l.is_k_strong(2).expect("sweep"));
    println!("3-strong: {:?}", l.is_k_strong(3).expect("sweep"));
    println!("e1 generates an abelian ideal: {}", l.is_toastie(&l.basis_vector(0)).expect("ideal"));

    // scalar extension through F_9 = F_3[t]/(t^2 + 1) doubles the
    // dimension and preserves 2-strongness
    let f9 = ext_field_gf(3, 2, &[1, 0, 1]).expect("irreducible");
    let ext = h.extend_scalars(&f9).expect("valid extension");
    println!(
        "\nheisenberg tensor F_9: dim {}, 2-strong: {:?}",
        ext.dim(),
        ext.is_k_strong(2).expect("sweep")
    );

    // rings round-trip through the text format
    let text = "p=5 dim=4 names=x,y,z,w\nx,y -> 1*z\nx,z -> 2*w\n";
    let custom = parse_lie_ring(text).expect("valid file");
    println!(
        "\nparsed custom ring: dim {}, 2-strong: {:?}",
        custom.dim(),
        custom.is_k_strong(2).expect("sweep")
    );
}
