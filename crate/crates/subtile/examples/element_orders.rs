//! Element orders, order spectra and the spectrum obstruction for the
//! rotation groups G(p,q).
//!
//!     cargo run --example element_orders

use subtile::gpq::{
    c_equivalence_obstruction, normal_form, order, order_spectrum, presentation, GWord,
};

fn main() {
    for (p, q) in [(3u64, 5u64), (6, 4), (10, 4), (8, 4)] {
        let pres = presentation(p, q).unwrap();
        println!(
            "G({p},{q}) — normalized generator orders ({}, {}), relators: {}",
            pres.alpha_order,
            pres.beta_order,
            pres.relator_strings().join(", ")
        );
        let spectrum: Vec<u64> = order_spectrum(p, q).unwrap().into_iter().collect();
        println!("  finite-order spectrum: {spectrum:?}");
        for text in ["a", "b", "a b", "a^2 b", "b a^2"] {
            let w = GWord::parse(text).unwrap();
            let mapped = pres.map_input_word(&w);
            println!(
                "  |{text}| = {}   (normal form {})",
                order(&mapped, &pres),
                normal_form(&mapped, &pres)
            );
        }
        println!();
    }

    let ob = c_equivalence_obstruction((6, 4), (10, 4)).unwrap();
    println!(
        "G(6,4) vs G(10,4): spectra {:?} vs {:?}",
        ob.left_spectrum, ob.right_spectrum
    );
    println!(
        "witnesses: {:?} only on the left, {:?} only on the right — the groups are not c-equivalent",
        ob.left_only_min, ob.right_only_min
    );
}
