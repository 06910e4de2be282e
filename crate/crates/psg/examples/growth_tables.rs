//! Product sets, balls, and growth inequality verdicts.
//!
//! ```bash
//! cargo run --example growth_tables
//! ```

use num_rational::BigRational;
use num_traits::One;
use psg::bounds::parse_rational;
use psg::growth::{
    check_inequality, growth_table, tripling_check, EnumerationCaps, ExponentMode, GrowthParams,
};
use psg::word::{GroupWord, WordSet};
use psg::DefiningGraph;

fn main() {
    println!("Growth tables in F2");
    println!("===================\n");

    let f2 = DefiningGraph::free(2);
    let gens = WordSet::new(
        &f2,
        [
            GroupWord::generator(&f2, 0, true),
            GroupWord::generator(&f2, 0, false),
            GroupWord::generator(&f2, 1, true),
            GroupWord::generator(&f2, 1, false),
        ],
    );
    let caps = EnumerationCaps::default();
    let table = growth_table(&gens, 5, true, &caps).unwrap();
    println!("U = {{a, a^-1, b, b^-1}}");
    println!("  n | |U^n|  | |B(n)| | |B(n)|^(1/n)");
    for n in 1..=5 {
        println!(
            "  {n} | {:>6} | {:>6} | {:.4}",
            table.size(n),
            table.ball_sizes.as_ref().unwrap()[n - 1],
            table.ball_rate(n).unwrap()
        );
    }
    println!("  (the ball sizes follow 2·3^n − 1; the rate tends to 3)\n");

    // The free-group growth inequality with α = 1/372 in the half-floor
    // exponent regime: no violations can occur unless ⟨U⟩ is cyclic.
    let params = GrowthParams::new(
        parse_rational("1/372").unwrap(),
        BigRational::one(),
        ExponentMode::HalfFloor,
    );
    let verdicts = check_inequality(&table, &params);
    println!("Inequality |U^n| ≥ (|U|/372)^⌊(n+1)/2⌋:");
    for v in &verdicts {
        println!("  n = {}: size {} vs rhs {:.4} → {}", v.n, v.size, v.rhs, v.holds);
    }

    // Small tripling controls all higher powers.
    let rep = tripling_check(&table);
    println!("\nTripling: K = |U³|/|U| = {:.4}", rep.k);
    for r in &rep.rows {
        println!(
            "  n = {}: |U^n| = {} ≤ (8K³)^(n−2)|U| = {:.1} → {}",
            r.n, r.size, r.bound, r.holds
        );
    }
}
