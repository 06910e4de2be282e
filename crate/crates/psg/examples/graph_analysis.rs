//! Defining-graph analysis: joins, stars, cliques, subjoins, components.
//!
//! ```bash
//! cargo run --example graph_analysis
//! ```

use psg::graph::{self, parse_graph, DefiningGraph};

fn describe(name: &str, g: &DefiningGraph) {
    println!("{name}:");
    println!("  connected:  {}", g.is_connected());
    println!(
        "  components: {}",
        g.connected_components()
            .iter()
            .map(|c| format!("{}", c.display(g)))
            .collect::<Vec<_>>()
            .join(" ")
    );
    match g.join_factors() {
        Some((a, b)) => println!("  join:       {} * {}", a.display(g), b.display(g)),
        None => println!("  join:       none (complement is connected)"),
    }
    println!("  max clique: {}", g.max_clique_size().unwrap());
    let subjoins = g.enumerate_subjoins(12).unwrap();
    println!(
        "  subjoins:   {} {}",
        subjoins.len(),
        subjoins
            .iter()
            .take(4)
            .map(|s| format!("{}", s.display(g)))
            .collect::<Vec<_>>()
            .join(" ")
    );
    println!();
}

fn main() {
    println!("Defining graphs and their splittings");
    println!("====================================\n");

    // C4 splits as a join: A(C4) = F2 × F2.
    describe("C4 (a-b-c-d-a)", &graph::c4());

    // P4 does not split and has no dominating star: A(P4) has loxodromic
    // elements on its extension graph.
    describe("P4 (a-b-c-d)", &graph::p4());

    // P3 = {b} ∗ {a, c}: every element is elliptic.
    describe("P3 (a-b-c)", &graph::p3());

    // Stars and links.
    let p4 = graph::p4();
    for v in 0..4 {
        println!(
            "star({}) = {}   link({}) = {}",
            p4.vertex_name(v),
            p4.star(v).unwrap().display(&p4),
            p4.vertex_name(v),
            p4.link(v).unwrap().display(&p4),
        );
    }

    // The parser rejects malformed files with line numbers.
    println!();
    for bad in ["vertices: a a", "vertices: a b\nedge: a a", "edge: a b"] {
        println!("parse {:?} → {}", bad, parse_graph(bad).unwrap_err());
    }
}
