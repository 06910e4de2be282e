//! The loxodromic criterion on extension graphs and Bass–Serre trees.
//!
//! ```bash
//! cargo run --example loxodromic
//! ```

use psg::graph::{self, VertexSet};
use psg::lox::{is_loxodromic, support_in_subjoin, SubjoinMode};
use psg::word::GroupWord;

fn main() {
    println!("Loxodromic detection in A(P4)");
    println!("=============================\n");

    let p4 = graph::p4();
    println!("Γ = P4 (a - b - c - d), connected, not a join.\n");

    // A cyclically reduced element is elliptic exactly when its support
    // sits inside a subjoin: an induced join, or a star of a vertex.
    for raw in ["a d", "a c", "b", "a c a^-1", "a b c d", ""] {
        let w = GroupWord::parse(&p4, raw).unwrap();
        let verdict = is_loxodromic(&w);
        println!(
            "  {:<10} → {:<14} {}",
            format!("{w}"),
            verdict.status_str(),
            serde_json::to_string(&verdict).unwrap()
        );
    }

    // The two-case disjunction versus the exhaustive subjoin oracle.
    println!("\nSubjoin criterion (fast vs oracle) on P4 supports:");
    for names in [vec![0usize, 2], vec![0, 3], vec![1]] {
        let s = VertexSet::new(names);
        let fast = support_in_subjoin(&p4, &s, SubjoinMode::Fast).unwrap();
        let oracle = support_in_subjoin(&p4, &s, SubjoinMode::Oracle { cap: 12 }).unwrap();
        println!(
            "  support {:<8} fast: {:<5} oracle: {:<5}",
            format!("{}", s.display(&p4)),
            fast.is_some(),
            oracle.is_some()
        );
    }

    // On a disconnected graph the Bass–Serre tree of the free-product
    // splitting carries the action: elements meeting two components are
    // loxodromic.
    println!("\nF2 = Z ∗ Z (edgeless graph):");
    let f2 = psg::DefiningGraph::free(2);
    for raw in ["a", "a b", "a b a^-1"] {
        let w = GroupWord::parse(&f2, raw).unwrap();
        println!("  {:<10} → {}", format!("{w}"), is_loxodromic(&w).status_str());
    }
}
