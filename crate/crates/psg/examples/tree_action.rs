//! The free group on its Cayley tree: distances, Gromov products,
//! energy basepoints, and the direction-separating reduction partition.
//!
//! ```bash
//! cargo run --example tree_action
//! ```

use psg::tree::{
    distance, energy_basepoint, gromov_product, median, reduction_partition,
    stable_translation_length, ActionConstants,
};
use psg::word::{GroupWord, WordSet};
use psg::DefiningGraph;

fn main() {
    println!("F2 acting on its Cayley tree");
    println!("============================\n");

    let f2 = DefiningGraph::free(2);
    let w = |s: &str| GroupWord::parse(&f2, s).unwrap();

    // Distances and Gromov products are exact.
    let e = w("");
    let x = w("a b");
    let y = w("a a");
    println!("d(e, ab) = {}", distance(&e, &x));
    println!("(ab, aa)_e = {}  — the geodesics share the prefix `a`", gromov_product(&x, &y, &e));
    println!("median(e, ab, aa) = {}\n", median(&x, &y, &e));

    // Stable translation length = cyclically reduced core length.
    for s in ["a b", "a b a^-1", "a b a^-1 b^-1"] {
        let g = w(s);
        println!(
            "τ({s}) = {}   (|g^10| = {})",
            stable_translation_length(&g).unwrap(),
            g.pow(10).len()
        );
    }

    // The ℓ¹-energy basepoint is an exact 1-median of the orbit map.
    let g = w("a b");
    let u = WordSet::new(
        &f2,
        [
            w("a").conjugate_by(&g).unwrap(),
            w("b").conjugate_by(&g).unwrap(),
        ],
    );
    let rep = energy_basepoint(&u).unwrap();
    println!(
        "\nU = {{gag^-1, gbg^-1}} with g = ab: basepoint {}, E(U) = {}, λ₀ = {}",
        rep.basepoint, rep.energy, rep.displacement
    );

    // The reduction partition splits a high-displacement set into two
    // direction-separated halves.
    let a = w("a");
    let long = a.pow(40);
    let u = WordSet::new(
        &f2,
        [
            long.clone(),
            long.multiply(&w("b")).unwrap(),
            long.inverse(),
            w("b").multiply(&long.inverse()).unwrap(),
        ],
    );
    let constants = ActionConstants::for_tree(4, 40).unwrap();
    let (outcome, report) = reduction_partition(&u, &constants).unwrap();
    println!("\nReduction partition on {{a^40, a^40 b, a^-40, b a^-40}} (r = 4, k = 40):");
    println!("  outcome: {outcome:?}");
    if let Some(p) = report {
        println!(
            "  |U0| = {}, |U1| = {}, Gromov maxima {} and {} (both ≤ 4)",
            p.u0.len(),
            p.u1.len(),
            p.max_gromov_inv0_1,
            p.max_gromov_0_inv1
        );
        println!("  U0 = {:?}", p.u0.iter().map(|w| w.to_string()).collect::<Vec<_>>());
        println!("  U1 = {:?}", p.u1.iter().map(|w| w.to_string()).collect::<Vec<_>>());
    }
}
