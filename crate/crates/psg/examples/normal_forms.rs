//! Canonical normal forms in right-angled Artin groups.
//!
//! ```bash
//! cargo run --example normal_forms
//! ```

use psg::graph::{self, parse_graph};
use psg::word::GroupWord;
use std::sync::Arc;

fn main() {
    println!("Normal forms in A(Γ)");
    println!("====================\n");

    // The defining graph fixes which generators commute.
    let c4 = graph::c4();
    println!("Γ = C4: {}\n", c4.to_string().replace('\n', "; "));

    // Adjacent vertices commute, so `b a` and `a b` are the same element;
    // the canonical form is the lexicographically least reduced word.
    for raw in ["b a", "a c a^-1", "d c b a", "a b b^-1 a"] {
        let w = GroupWord::parse(&c4, raw).unwrap();
        println!("  [{raw:>10}]  =  {w}   (length {})", w.len());
    }

    // Cyclic reduction peels conjugation layers.
    println!("\nCyclic reduction:");
    for raw in ["a c a^-1", "b a d a^-1 b^-1"] {
        let w = GroupWord::parse(&c4, raw).unwrap();
        let dec = w.cyclic_reduce();
        println!(
            "  {w}  =  ({h}) · ({core}) · ({h})^-1",
            h = dec.conjugator,
            core = dec.core
        );
    }

    // Primitive roots: the maximal root of an element.
    println!("\nPrimitive roots (free group F2):");
    let f2 = psg::DefiningGraph::free(2);
    for raw in ["a b a b", "a b b a^-1", "a"] {
        let w = GroupWord::parse(&f2, raw).unwrap();
        let (root, exp) = w.primitive_root().unwrap();
        println!("  {w}  =  ({root})^{exp}");
    }

    // Graphs also load from files.
    let text = std::fs::read_to_string(format!("{}/data/p4.g", env!("CARGO_MANIFEST_DIR")))
        .expect("data file present");
    let p4 = Arc::new(parse_graph(&text).unwrap());
    let w = GroupWord::parse(&p4, "a c d").unwrap();
    println!("\nIn A(P4): support of `{w}` is {}", w.support().display(&p4));
}
