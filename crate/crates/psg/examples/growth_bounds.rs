//! The derived-constant calculators.
//!
//! ```bash
//! cargo run --example growth_bounds
//! ```

use psg::bounds::{bound_calculator, parse_rational, BoundRequest};

fn show(label: &str, request: BoundRequest) {
    let result = bound_calculator(&request).unwrap();
    let rendered: Vec<String> = result
        .values
        .iter()
        .map(|(name, value)| format!("{name} = {value}"))
        .collect();
    println!("  {label:<28} {}", rendered.join(", "));
}

fn main() {
    println!("Constant calculators");
    println!("====================\n");
    let r = |s: &str| parse_rational(s).unwrap();

    println!("Quasi-tree displacement-gap constants:");
    show(
        "kchoice(Δ=1, κ₀=1, N₀=1)",
        BoundRequest::KChoice {
            delta: r("1"),
            kappa0: r("1"),
            n0: r("1"),
        },
    );

    println!("\nPassing growth through structure:");
    show(
        "factors(α=1/2, β=1, m=2)",
        BoundRequest::Factors {
            alpha: r("1/2"),
            beta: r("1"),
            m: 2,
        },
    );
    show(
        "bounded_to_one(α=1/2, k=3)",
        BoundRequest::BoundedToOne {
            alpha: r("1/2"),
            k: r("3"),
        },
    );
    show(
        "supergroup(α=1, β=1, d=1)",
        BoundRequest::Supergroup {
            alpha: r("1"),
            beta: r("1"),
            d: 1,
        },
    );
    show(
        "shortlox(α=1/5, β=1/2, k=4)",
        BoundRequest::ShortLox {
            alpha: r("1/5"),
            beta: r("1/2"),
            k: 4,
        },
    );

    println!("\nConsequences of product set growth:");
    show(
        "approx(k=1, α=1, β=2)",
        BoundRequest::ApproxBound {
            k: r("1"),
            alpha: r("1"),
            beta: r("2"),
        },
    );
    show(
        "ueg_rate(α=1, β=2, |S|=1)",
        BoundRequest::UegRate {
            alpha: r("1"),
            beta: r("2"),
            size: r("1"),
        },
    );
    show(
        "helfgott(α=8, β=3, |U|=4)",
        BoundRequest::Helfgott {
            alpha: r("8"),
            beta: r("3"),
            size: r("4"),
        },
    );
}
