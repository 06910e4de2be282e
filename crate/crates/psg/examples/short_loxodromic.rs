//! Finding loxodromic elements in bounded powers of a generating set.
//!
//! ```bash
//! cargo run --example short_loxodromic
//! ```

use num_rational::BigRational;
use num_traits::One;
use psg::bounds::parse_rational;
use psg::graph;
use psg::growth::{EnumerationCaps, ExponentMode, GrowthParams};
use psg::lox::{classify_subset, minimal_support_set, short_loxodromic, ShortLoxOutcome};
use psg::word::{GroupWord, WordSet};

fn main() {
    println!("Short loxodromic search");
    println!("=======================\n");
    let caps = EnumerationCaps::default();

    // Conjugated generators: the minimal supporting vertex set V_U is
    // found by undoing the conjugation.
    let f3 = psg::DefiningGraph::free(3);
    let g = GroupWord::parse(&f3, "a").unwrap();
    let u = WordSet::new(
        &f3,
        [
            GroupWord::parse(&f3, "b").unwrap().conjugate_by(&g).unwrap(),
            GroupWord::parse(&f3, "c").unwrap().conjugate_by(&g).unwrap(),
        ],
    );
    let sup = minimal_support_set(&u, 2).unwrap();
    println!(
        "U = {{aba^-1, aca^-1}} in F3: conjugator {}, V_U = {}, certified: {}",
        sup.conjugator,
        sup.v_u_set().display(&f3),
        sup.certified
    );

    // Full generators of A(P4): a loxodromic appears in U².
    let p4 = graph::p4();
    let gens = WordSet::new(
        &p4,
        (0..4).map(|v| GroupWord::generator(&p4, v, true)),
    )
    .symmetric_closure();
    match short_loxodromic(&gens, 4, 2, &caps).unwrap() {
        ShortLoxOutcome::Found { n, witness } => {
            println!("\nA(P4) generators: loxodromic `{witness}` in U^{n}");
        }
        other => println!("\nA(P4) generators: {other:?}"),
    }

    // A(P3) = Z × F2 is a join: no loxodromic can ever appear.
    let p3 = graph::p3();
    let gens3 = WordSet::new(
        &p3,
        (0..3).map(|v| GroupWord::generator(&p3, v, true)),
    )
    .symmetric_closure();
    match short_loxodromic(&gens3, 4, 2, &caps).unwrap() {
        ShortLoxOutcome::NotApplicable { reason } => {
            println!("A(P3) generators: not applicable — {reason}");
        }
        other => println!("A(P3) generators: {other:?}"),
    }

    // The full classification report gathers every certified flag.
    let params = GrowthParams::new(
        parse_rational("1/372").unwrap(),
        BigRational::one(),
        ExponentMode::HalfFloor,
    );
    let report = classify_subset(&gens, &params, 3, 2, &caps).unwrap();
    println!("\nClassification of the A(P4) generators:");
    println!("  V_U:        {:?}", report.v_u.v_u);
    println!("  connected:  {}", report.induced_connected);
    println!("  join:       {}", report.join);
    println!("  cyclic:     {}", report.cyclic);
    println!("  obstruction: {}", report.obstruction.is_some());
    println!("  short lox:  {:?}", report.short_lox);
    println!(
        "  growth verdicts: {:?}",
        report
            .growth_verdicts
            .iter()
            .map(|v| v.holds)
            .collect::<Vec<_>>()
    );
}
