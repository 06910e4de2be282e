//! Independent brute-force oracles backing the test suites.
//!
//! Everything here deliberately avoids the production code paths it is
//! used to check: rewriting works on raw letter sequences with single
//! swap/cancel moves, ball enumeration is a plain BFS, and the energy
//! search walks a metric ball vertex by vertex.

use std::collections::{BTreeSet, VecDeque};
use std::sync::Arc;

use crate::graph::DefiningGraph;
use crate::word::{GroupWord, Letter, WordSet};

/// All words reachable from `raw` by single adjacent commuting swaps and
/// single adjacent inverse-pair cancellations, by breadth-first search.
/// The rewriting-equivalence class of the input.
pub fn rewriting_class(g: &DefiningGraph, raw: &[Letter]) -> BTreeSet<Vec<Letter>> {
    let mut seen: BTreeSet<Vec<Letter>> = BTreeSet::new();
    let mut queue: VecDeque<Vec<Letter>> = VecDeque::new();
    seen.insert(raw.to_vec());
    queue.push_back(raw.to_vec());
    while let Some(w) = queue.pop_front() {
        for i in 0..w.len().saturating_sub(1) {
            let (x, y) = (w[i], w[i + 1]);
            if y == x.inverse() {
                let mut next = w.clone();
                next.drain(i..=i + 1);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
            if x.vertex() != y.vertex() && g.adjacent(x.vertex(), y.vertex()) {
                let mut next = w.clone();
                next.swap(i, i + 1);
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    seen
}

/// The canonical representative the rewriting class agrees on: the
/// lexicographically least word of minimal length. Letters order by their
/// packed value, which is (vertex, sign with + before -).
pub fn rewriting_normal_form(g: &DefiningGraph, raw: &[Letter]) -> Vec<Letter> {
    let class = rewriting_class(g, raw);
    let min_len = class.iter().map(Vec::len).min().expect("nonempty class");
    class
        .into_iter()
        .filter(|w| w.len() == min_len)
        .min()
        .expect("nonempty class")
}

/// Is `s` contained in some subjoin of `g`? Checked against the exhaustive
/// subjoin list.
pub fn support_in_subjoin_brute(g: &DefiningGraph, s_mask: u64, cap: usize) -> bool {
    g.enumerate_subjoins(cap)
        .expect("within oracle cap")
        .iter()
        .any(|w| s_mask & !w.mask() == 0)
}

/// Ball sizes `|B(1)|, ..., |B(n)|` around the identity of the Cayley
/// graph of `A(Γ)` with respect to the standard generators, by BFS.
pub fn cayley_ball_sizes(graph: &Arc<DefiningGraph>, n: usize) -> Vec<usize> {
    let gens: Vec<GroupWord> = (0..graph.len())
        .flat_map(|v| {
            [
                GroupWord::generator(graph, v, true),
                GroupWord::generator(graph, v, false),
            ]
        })
        .collect();
    let mut ball: BTreeSet<GroupWord> = BTreeSet::new();
    ball.insert(GroupWord::identity(graph));
    let mut frontier: Vec<GroupWord> = ball.iter().cloned().collect();
    let mut sizes = Vec::with_capacity(n);
    for _ in 0..n {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let p = w.multiply(g).expect("same graph");
                if ball.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        sizes.push(ball.len());
        frontier = next;
    }
    sizes
}

/// Exhaustive 1-median search: minimizes `Σ_u d(x, u·x)` over every tree
/// vertex within `radius` of the identity, in the free-group Cayley tree.
/// Returns (best vertex, doubled nothing — plain sum).
pub fn energy_brute(u: &WordSet, radius: usize) -> (GroupWord, usize) {
    let graph = u.graph();
    assert_eq!(graph.edge_count(), 0, "free-group oracle");
    let gens: Vec<GroupWord> = (0..graph.len())
        .flat_map(|v| {
            [
                GroupWord::generator(graph, v, true),
                GroupWord::generator(graph, v, false),
            ]
        })
        .collect();
    let sum_at = |x: &GroupWord| -> usize {
        u.iter()
            .map(|w| {
                x.inverse()
                    .multiply(w)
                    .and_then(|p| p.multiply(x))
                    .expect("same graph")
                    .len()
            })
            .sum()
    };
    let mut ball: BTreeSet<GroupWord> = BTreeSet::new();
    let e = GroupWord::identity(graph);
    ball.insert(e.clone());
    let mut frontier = vec![e.clone()];
    for _ in 0..radius {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let p = w.multiply(g).expect("same graph");
                if ball.insert(p.clone()) {
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    let mut best = (e.clone(), sum_at(&e));
    for x in &ball {
        let s = sum_at(x);
        if s < best.1 || (s == best.1 && *x < best.0) {
            best = (x.clone(), s);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;

    #[test]
    fn rewriting_class_of_free_cancellation() {
        let f2 = DefiningGraph::free(2);
        let w = GroupWord::parse(&f2, "a b b^-1 a").unwrap();
        // Raw sequence before reduction:
        let raw = [
            Letter::new(0, true),
            Letter::new(1, true),
            Letter::new(1, false),
            Letter::new(0, true),
        ];
        let nf = rewriting_normal_form(&f2, &raw);
        assert_eq!(nf, w.letters());
    }

    #[test]
    fn rewriting_agrees_with_canonical_on_c4() {
        let c4 = graph::c4();
        let raw = [
            Letter::new(1, true), // b
            Letter::new(0, true), // a
        ];
        let nf = rewriting_normal_form(&c4, &raw);
        let expect = GroupWord::parse(&c4, "a b").unwrap();
        assert_eq!(nf, expect.letters());
    }

    #[test]
    fn f2_ball_sizes() {
        let f2 = DefiningGraph::free(2);
        assert_eq!(cayley_ball_sizes(&f2, 3), vec![5, 17, 53]);
    }
}
