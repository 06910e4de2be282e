//! Why direct products with a Z factor fail uniform product set growth:
//! the constructive counterexample family in F2 × Z.
//!
//! ```bash
//! cargo run --example counterexample
//! ```

use num_traits::One;
use psg::growth::{
    counterexample_graph, counterexample_search, counterexample_set, growth_table,
    EnumerationCaps, ExponentMode, GrowthParams,
};

fn main() {
    println!("Counterexamples in F2 × Z");
    println!("=========================\n");

    // U_k = {x·c^i : x ∈ {e, a, a^-1, b, b^-1}, |i| ≤ k}: inflating the
    // central (non-exponential) direction grows |U| without growing
    // |U^n| fast enough.
    let graph = counterexample_graph();
    let caps = EnumerationCaps {
        max_len: 256,
        max_elements: 5_000_000,
    };
    println!("  k | |U_k| | |U_k^2| | |U_k|^2");
    for k in [1, 4, 10] {
        let u = counterexample_set(&graph, k);
        let t = growth_table(&u, 2, false, &caps).unwrap();
        println!(
            "  {k:>2} | {:>5} | {:>7} | {:>7}",
            t.size(1),
            t.size(2),
            t.size(1) * t.size(1)
        );
    }
    println!("  (|U^2| = 17·(4k+1) stays quadratically below |U|^2 = 25(2k+1)^2)\n");

    // The search scans k downward and n upward and returns the first
    // violation with exact enumerated sizes.
    let params = GrowthParams::new(
        num_rational::BigRational::one(),
        num_rational::BigRational::one(),
        ExponentMode::Linear,
    );
    match counterexample_search(&params, 10, 4).unwrap() {
        Some(hit) => println!(
            "α = β = 1: U_{} (|U| = {}) violates at n = {}: |U^2| = {} < {}",
            hit.k,
            hit.set_size,
            hit.n,
            hit.sizes[1],
            hit.set_size * hit.set_size
        ),
        None => println!("α = β = 1: no violation found (unexpected)"),
    }

    // With a tiny α the right-hand side never exceeds 1 and no
    // counterexample exists in the family.
    let tiny = GrowthParams::new(
        psg::bounds::parse_rational("1/1000000").unwrap(),
        num_rational::BigRational::one(),
        ExponentMode::Linear,
    );
    match counterexample_search(&tiny, 10, 3).unwrap() {
        Some(_) => println!("α = 10^-6: unexpected violation"),
        None => println!("α = 10^-6: absent — the right-hand side stays ≤ 1"),
    }
}
