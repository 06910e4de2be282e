//! Finite simple graphs: the defining graphs of right-angled Artin groups.
//!
//! Vertices are kept in file order, which fixes the canonical generator
//! order used by word normal forms. Adjacency is stored as one bitmask row
//! per vertex, so all set operations on vertex subsets are cheap; this
//! caps supported graphs at 64 vertices, far beyond the exhaustive
//! enumeration scales used here.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// Hard ceiling imposed by the bitmask adjacency rows.
pub const MAX_VERTICES: usize = 64;

/// Default cap for [`DefiningGraph::enumerate_subjoins`], which walks all
/// `2^|V|` vertex subsets.
pub const DEFAULT_SUBJOIN_CAP: usize = 12;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("graph has {vertices} vertices, subjoin oracle cap is {cap}")]
    OracleCapExceeded { vertices: usize, cap: usize },
}

/// A finite simple graph `Γ = (V, E)` with named vertices.
///
/// No self-loops; the adjacency relation is symmetric. Immutable after
/// construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefiningGraph {
    names: Vec<String>,
    adj: Vec<u64>,
}

/// Sorted, duplicate-free set of vertex indices of a parent graph.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexSet {
    indices: Vec<usize>,
}

impl VertexSet {
    pub fn new(mut indices: Vec<usize>) -> Self {
        indices.sort_unstable();
        indices.dedup();
        VertexSet { indices }
    }

    pub fn from_mask(mut mask: u64) -> Self {
        let mut indices = Vec::new();
        while mask != 0 {
            let i = mask.trailing_zeros() as usize;
            indices.push(i);
            mask &= mask - 1;
        }
        VertexSet { indices }
    }

    pub fn mask(&self) -> u64 {
        self.indices.iter().fold(0u64, |m, &i| m | (1u64 << i))
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.indices.binary_search(&v).is_ok()
    }

    pub fn is_subset_of(&self, other: &VertexSet) -> bool {
        self.mask() & !other.mask() == 0
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.indices.iter().copied()
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    /// Renders the set with vertex names from its parent graph.
    pub fn display<'a>(&'a self, graph: &'a DefiningGraph) -> VertexSetDisplay<'a> {
        VertexSetDisplay { set: self, graph }
    }
}

pub struct VertexSetDisplay<'a> {
    set: &'a VertexSet,
    graph: &'a DefiningGraph,
}

impl fmt::Display for VertexSetDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.set.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.graph.vertex_name(i))?;
        }
        write!(f, "}}")
    }
}

impl DefiningGraph {
    /// Builds a graph from vertex names (in canonical order) and edges given
    /// as index pairs. Rejects duplicates names, out-of-range endpoints and
    /// self-loops.
    pub fn new<S: Into<String>>(
        names: Vec<S>,
        edges: &[(usize, usize)],
    ) -> Result<Self, GraphError> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_VERTICES {
            return Err(GraphError::Parse {
                line: 0,
                msg: format!("too many vertices ({} > {MAX_VERTICES})", names.len()),
            });
        }
        for (k, n) in names.iter().enumerate() {
            if names[..k].contains(n) {
                return Err(GraphError::Parse {
                    line: 0,
                    msg: format!("duplicate vertex `{n}`"),
                });
            }
        }
        let mut g = DefiningGraph {
            adj: vec![0; names.len()],
            names,
        };
        for &(i, j) in edges {
            if i >= g.len() || j >= g.len() {
                return Err(GraphError::Parse {
                    line: 0,
                    msg: format!("edge endpoint out of range: ({i}, {j})"),
                });
            }
            if i == j {
                return Err(GraphError::Parse {
                    line: 0,
                    msg: format!("self-loop at vertex `{}`", g.names[i]),
                });
            }
            g.adj[i] |= 1 << j;
            g.adj[j] |= 1 << i;
        }
        Ok(g)
    }

    /// Edgeless graph on `n` vertices named `a`, `b`, ... (free group rank `n`).
    pub fn free(rank: usize) -> Arc<Self> {
        assert!(rank <= 26, "free() supports at most 26 default names");
        let names: Vec<String> = (0..rank)
            .map(|i| ((b'a' + i as u8) as char).to_string())
            .collect();
        Arc::new(DefiningGraph::new(names, &[]).expect("valid free graph"))
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn vertex_name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn vertex_names(&self) -> &[String] {
        &self.names
    }

    pub fn vertex_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i] & (1 << j) != 0
    }

    /// Bitmask of neighbours of `v`.
    pub fn neighbor_mask(&self, v: usize) -> u64 {
        self.adj[v]
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if self.adjacent(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn full_mask(&self) -> u64 {
        if self.len() == 64 {
            u64::MAX
        } else {
            (1u64 << self.len()) - 1
        }
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::new((0..self.len()).collect())
    }

    /// `link(v)`: the set of vertices adjacent to `v`.
    pub fn link(&self, v: usize) -> Result<VertexSet, GraphError> {
        if v >= self.len() {
            return Err(GraphError::UnknownVertex(format!("#{v}")));
        }
        Ok(VertexSet::from_mask(self.adj[v]))
    }

    /// `star(v) = {v} ∪ link(v)`, the 1-neighbourhood of `v`.
    pub fn star(&self, v: usize) -> Result<VertexSet, GraphError> {
        if v >= self.len() {
            return Err(GraphError::UnknownVertex(format!("#{v}")));
        }
        Ok(VertexSet::from_mask(self.adj[v] | (1 << v)))
    }

    pub fn star_mask(&self, v: usize) -> u64 {
        self.adj[v] | (1 << v)
    }

    /// Complement graph on the same vertices.
    pub fn complement(&self) -> DefiningGraph {
        let full = self.full_mask();
        let adj = (0..self.len())
            .map(|i| full & !self.adj[i] & !(1u64 << i))
            .collect();
        DefiningGraph {
            names: self.names.clone(),
            adj,
        }
    }

    /// Induced subgraph on `w`; vertices keep their relative order and names.
    pub fn induced(&self, w: &VertexSet) -> DefiningGraph {
        let names: Vec<String> = w.iter().map(|i| self.names[i].clone()).collect();
        let idx: Vec<usize> = w.iter().collect();
        let mut adj = vec![0u64; idx.len()];
        for (a, &i) in idx.iter().enumerate() {
            for (b, &j) in idx.iter().enumerate() {
                if a != b && self.adjacent(i, j) {
                    adj[a] |= 1 << b;
                }
            }
        }
        DefiningGraph { names, adj }
    }

    /// Connected components restricted to the vertices in `mask`, each
    /// returned as a bitmask, ordered by least member.
    fn components_in_mask(&self, mask: u64) -> Vec<u64> {
        let mut out = Vec::new();
        let mut seen = 0u64;
        for v in 0..self.len() {
            let bit = 1u64 << v;
            if mask & bit == 0 || seen & bit != 0 {
                continue;
            }
            let mut comp = bit;
            let mut frontier = bit;
            while frontier != 0 {
                let mut next = 0u64;
                let mut f = frontier;
                while f != 0 {
                    let u = f.trailing_zeros() as usize;
                    f &= f - 1;
                    next |= self.adj[u] & mask & !comp;
                }
                comp |= next;
                frontier = next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    /// Partition of `V` into maximal connected pieces, sorted by least vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        self.components_in_mask(self.full_mask())
            .into_iter()
            .map(VertexSet::from_mask)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.len() <= 1 || self.components_in_mask(self.full_mask()).len() == 1
    }

    /// Splits `Γ = Γ₁ ∗ Γ₂` as a nontrivial join if possible.
    ///
    /// A graph is a join exactly when its complement is disconnected; the
    /// returned bipartition is (first complement component, rest). `None`
    /// when the complement is connected or the graph has at most one vertex.
    pub fn join_factors(&self) -> Option<(VertexSet, VertexSet)> {
        if self.len() < 2 {
            return None;
        }
        let comps = self.complement().components_in_mask(self.full_mask());
        if comps.len() < 2 {
            return None;
        }
        let first = comps[0];
        let rest = self.full_mask() & !first;
        Some((VertexSet::from_mask(first), VertexSet::from_mask(rest)))
    }

    /// Maximal join decomposition: the connected components of the
    /// complement, i.e. `Γ = Γ(W₁) ∗ ⋯ ∗ Γ(W_m)` with every `Γ(Wᵢ)`
    /// join-irreducible.
    pub fn join_decomposition(&self) -> Vec<VertexSet> {
        self.complement()
            .components_in_mask(self.full_mask())
            .into_iter()
            .map(VertexSet::from_mask)
            .collect()
    }

    /// Exact maximum clique cardinality, by branch and bound.
    pub fn max_clique_size(&self) -> Result<usize, GraphError> {
        if self.is_empty() {
            return Err(GraphError::EmptyGraph);
        }
        fn grow(g: &DefiningGraph, current: usize, candidates: u64, best: &mut usize) {
            if current + candidates.count_ones() as usize <= *best {
                return;
            }
            if candidates == 0 {
                *best = (*best).max(current);
                return;
            }
            let mut c = candidates;
            while c != 0 {
                let v = c.trailing_zeros() as usize;
                c &= c - 1;
                if current + 1 + c.count_ones() as usize <= *best {
                    break;
                }
                grow(g, current + 1, c & g.adj[v], best);
            }
        }
        let mut best = 0;
        grow(self, 0, self.full_mask(), &mut best);
        Ok(best)
    }

    /// Every `W ⊆ V` with `|W| ≥ 2` whose induced subgraph splits as a
    /// nontrivial join. Exhaustive over all subsets, gated by `cap`.
    pub fn enumerate_subjoins(&self, cap: usize) -> Result<Vec<VertexSet>, GraphError> {
        if self.len() > cap {
            return Err(GraphError::OracleCapExceeded {
                vertices: self.len(),
                cap,
            });
        }
        let mut out = Vec::new();
        for mask in 1..=self.full_mask() {
            if mask.count_ones() < 2 {
                continue;
            }
            if self.mask_induces_join(mask) {
                out.push(VertexSet::from_mask(mask));
            }
        }
        Ok(out)
    }

    /// Does the subgraph induced by `mask` split as a nontrivial join?
    pub fn mask_induces_join(&self, mask: u64) -> bool {
        if mask.count_ones() < 2 {
            return false;
        }
        // Complement components within mask: BFS over non-adjacency.
        let first = 1u64 << mask.trailing_zeros();
        let mut comp = first;
        let mut frontier = first;
        while frontier != 0 {
            let mut next = 0u64;
            let mut f = frontier;
            while f != 0 {
                let u = f.trailing_zeros() as usize;
                f &= f - 1;
                next |= mask & !self.adj[u] & !(1u64 << u) & !comp;
            }
            comp |= next;
            frontier = next;
        }
        comp != mask
    }
}

impl fmt::Display for DefiningGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices: {}", self.names.join(" "))?;
        for (i, j) in self.edges() {
            write!(f, "\nedge: {} {}", self.names[i], self.names[j])?;
        }
        Ok(())
    }
}

fn valid_name(tok: &str) -> bool {
    !tok.is_empty()
        && tok
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Parses the line-based graph file format.
///
/// `#` starts a comment line; exactly one `vertices: n1 n2 ...` line; zero
/// or more `edge: ni nj` lines. Duplicate edges are tolerated, self-loops
/// rejected.
pub fn parse_graph(text: &str) -> Result<DefiningGraph, GraphError> {
    let mut names: Option<(usize, Vec<String>)> = None;
    let mut edges: Vec<(usize, String, String)> = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        let lineno = lineno + 1;
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix("vertices:") {
            if names.is_some() {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: "second `vertices:` line".into(),
                });
            }
            let toks: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
            if toks.is_empty() {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: "`vertices:` line lists no vertices".into(),
                });
            }
            for t in &toks {
                if !valid_name(t) {
                    return Err(GraphError::Parse {
                        line: lineno,
                        msg: format!("invalid vertex name `{t}`"),
                    });
                }
            }
            names = Some((lineno, toks));
        } else if let Some(rest) = line.strip_prefix("edge:") {
            let toks: Vec<&str> = rest.split_whitespace().collect();
            if toks.len() != 2 {
                return Err(GraphError::Parse {
                    line: lineno,
                    msg: format!("expected `edge: u v`, got {} tokens", toks.len()),
                });
            }
            edges.push((lineno, toks[0].to_owned(), toks[1].to_owned()));
        } else {
            return Err(GraphError::Parse {
                line: lineno,
                msg: format!("unrecognised line `{line}`"),
            });
        }
    }
    let (vline, names) = names.ok_or(GraphError::Parse {
        line: 0,
        msg: "missing `vertices:` line".into(),
    })?;
    for (k, n) in names.iter().enumerate() {
        if names[..k].contains(n) {
            return Err(GraphError::Parse {
                line: vline,
                msg: format!("duplicate vertex `{n}`"),
            });
        }
    }
    let mut index_edges = Vec::new();
    for (lineno, a, b) in edges {
        let i = names.iter().position(|n| *n == a).ok_or(GraphError::Parse {
            line: lineno,
            msg: format!("unknown edge endpoint `{a}`"),
        })?;
        let j = names.iter().position(|n| *n == b).ok_or(GraphError::Parse {
            line: lineno,
            msg: format!("unknown edge endpoint `{b}`"),
        })?;
        if i == j {
            return Err(GraphError::Parse {
                line: lineno,
                msg: format!("self-loop at `{a}`"),
            });
        }
        index_edges.push((i, j));
    }
    DefiningGraph::new(names, &index_edges).map_err(|e| match e {
        GraphError::Parse { msg, .. } => GraphError::Parse { line: vline, msg },
        other => other,
    })
}

/// The path `a - b - c - d`.
pub fn p4() -> Arc<DefiningGraph> {
    Arc::new(
        DefiningGraph::new(vec!["a", "b", "c", "d"], &[(0, 1), (1, 2), (2, 3)]).expect("valid P4"),
    )
}

/// The cycle `a - b - c - d - a`.
pub fn c4() -> Arc<DefiningGraph> {
    Arc::new(
        DefiningGraph::new(vec!["a", "b", "c", "d"], &[(0, 1), (1, 2), (2, 3), (3, 0)])
            .expect("valid C4"),
    )
}

/// The path `a - b - c`.
pub fn p3() -> Arc<DefiningGraph> {
    Arc::new(DefiningGraph::new(vec!["a", "b", "c"], &[(0, 1), (1, 2)]).expect("valid P3"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vs(g: &DefiningGraph, names: &[&str]) -> VertexSet {
        VertexSet::new(
            names
                .iter()
                .map(|n| g.vertex_index(n).expect("known vertex"))
                .collect(),
        )
    }

    #[test]
    fn parse_single_edge() {
        let g = parse_graph("vertices: a b\nedge: a b").unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.adjacent(0, 1));
    }

    #[test]
    fn parse_p4() {
        let g = parse_graph("vertices: a b c d\nedge: a b\nedge: b c\nedge: c d").unwrap();
        assert_eq!(g, *p4());
    }

    #[test]
    fn parse_rejects_duplicate_vertex() {
        let err = parse_graph("vertices: a a").unwrap_err();
        assert!(matches!(err, GraphError::Parse { .. }), "{err}");
    }

    #[test]
    fn parse_rejects_self_loop_and_unknown_endpoint() {
        assert!(parse_graph("vertices: a b\nedge: a a").is_err());
        assert!(parse_graph("vertices: a b\nedge: a c").is_err());
        assert!(parse_graph("edge: a b").is_err());
    }

    #[test]
    fn parse_tolerates_comments_and_duplicate_edges() {
        let g = parse_graph("# a square\nvertices: a b\n\nedge: a b\nedge: b a").unwrap();
        assert_eq!(g.edge_count(), 1);
    }

    #[test]
    fn join_factors_c4() {
        let g = c4();
        let (p, q) = g.join_factors().unwrap();
        assert_eq!(p, vs(&g, &["a", "c"]));
        assert_eq!(q, vs(&g, &["b", "d"]));
    }

    #[test]
    fn join_factors_absent_for_p4_and_singleton() {
        assert!(p4().join_factors().is_none());
        let single = DefiningGraph::new(vec!["a"], &[]).unwrap();
        assert!(single.join_factors().is_none());
    }

    #[test]
    fn star_examples() {
        let g = p4();
        let b = g.vertex_index("b").unwrap();
        assert_eq!(g.star(b).unwrap(), vs(&g, &["a", "b", "c"]));
        let a = g.vertex_index("a").unwrap();
        assert_eq!(g.star(a).unwrap(), vs(&g, &["a", "b"]));
        let e2 = DefiningGraph::new(vec!["x", "y"], &[]).unwrap();
        assert_eq!(e2.star(0).unwrap(), VertexSet::new(vec![0]));
    }

    #[test]
    fn clique_sizes() {
        let tri = DefiningGraph::new(vec!["a", "b", "c"], &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(tri.max_clique_size().unwrap(), 3);
        assert_eq!(c4().max_clique_size().unwrap(), 2);
        let e3 = DefiningGraph::new(vec!["a", "b", "c"], &[]).unwrap();
        assert_eq!(e3.max_clique_size().unwrap(), 1);
        let empty = DefiningGraph::new(Vec::<String>::new(), &[]).unwrap();
        assert_eq!(empty.max_clique_size(), Err(GraphError::EmptyGraph));
    }

    #[test]
    fn subjoin_enumeration_examples() {
        let edge = DefiningGraph::new(vec!["a", "b"], &[(0, 1)]).unwrap();
        assert_eq!(
            edge.enumerate_subjoins(12).unwrap(),
            vec![VertexSet::new(vec![0, 1])]
        );
        let e2 = DefiningGraph::new(vec!["x", "y"], &[]).unwrap();
        assert!(e2.enumerate_subjoins(12).unwrap().is_empty());
        let g = p3();
        let subs = g.enumerate_subjoins(12).unwrap();
        assert!(subs.contains(&vs(&g, &["a", "b", "c"])));
        assert!(subs.contains(&vs(&g, &["a", "b"])));
        assert!(subs.contains(&vs(&g, &["b", "c"])));
        assert_eq!(subs.len(), 3);
    }

    #[test]
    fn subjoin_cap_is_hard() {
        let g = DefiningGraph::new((0..13).map(|i| format!("v{i}")).collect::<Vec<_>>(), &[])
            .unwrap();
        assert_eq!(
            g.enumerate_subjoins(12),
            Err(GraphError::OracleCapExceeded {
                vertices: 13,
                cap: 12
            })
        );
    }

    #[test]
    fn components() {
        assert_eq!(p4().connected_components().len(), 1);
        let e2 = DefiningGraph::new(vec!["x", "y"], &[]).unwrap();
        assert_eq!(
            e2.connected_components(),
            vec![VertexSet::new(vec![0]), VertexSet::new(vec![1])]
        );
        let g = DefiningGraph::new(vec!["a", "b", "c", "e"], &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            g.connected_components(),
            vec![VertexSet::new(vec![0, 1, 2]), VertexSet::new(vec![3])]
        );
    }

    #[test]
    fn join_parts_partition_and_cross_adjacent() {
        for g in [c4(), p3()] {
            if let Some((p, q)) = g.join_factors() {
                assert_eq!(p.mask() & q.mask(), 0);
                assert_eq!(p.mask() | q.mask(), g.full_mask());
                for i in p.iter() {
                    for j in q.iter() {
                        assert!(g.adjacent(i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn oracle_self_consistency_small() {
        // W ∈ enumerate_subjoins(g) ⇔ join_factors(induced(g, W)) present.
        let g = p4();
        let subs = g.enumerate_subjoins(12).unwrap();
        for mask in 1..=g.full_mask() {
            let w = VertexSet::from_mask(mask);
            let listed = subs.contains(&w);
            let induced_join = w.len() >= 2 && g.induced(&w).join_factors().is_some();
            assert_eq!(listed, induced_join, "W = {:?}", w);
        }
    }

    #[test]
    fn complement_involution() {
        for g in [p4(), c4(), p3()] {
            assert_eq!(g.complement().complement(), *g);
        }
    }
}
