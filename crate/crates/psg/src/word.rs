//! Elements of `A(Γ)` as canonical normal-form words.
//!
//! A word is stored reduced (no generator can be cancelled against its
//! inverse after commuting swaps) and canonical: the lexicographically
//! least reduced word among all representatives reachable by swapping
//! adjacent commuting letters. The letter order is (vertex index
//! ascending, positive before negative), matching the graph's canonical
//! vertex order.
//!
//! Reduction is incremental: letters are appended to a reduced buffer, and
//! each new letter either cancels the nearest reachable inverse or is
//! appended. Canonicalization then takes the least available letter of the
//! trace poset until the word is exhausted (heap-of-pieces greedy
//! linearization).

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::graph::{DefiningGraph, VertexSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unknown vertex letter `{0}`")]
    UnknownVertex(String),
    #[error("words belong to different defining graphs")]
    GraphMismatch,
    #[error("operation undefined on the identity")]
    IdentityInput,
    #[error("word set is not symmetric")]
    NotSymmetric,
}

/// One signed generator occurrence, packed as `vertex << 1 | sign`.
///
/// The natural `u16` order is exactly the canonical letter order:
/// vertex index ascending, `+` before `-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter(u16);

impl Letter {
    pub fn new(vertex: usize, positive: bool) -> Self {
        debug_assert!(vertex < (1 << 15));
        Letter(((vertex as u16) << 1) | u16::from(!positive))
    }

    pub fn vertex(self) -> usize {
        (self.0 >> 1) as usize
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn inverse(self) -> Letter {
        Letter(self.0 ^ 1)
    }
}

/// Bitmask of vertices that may not be swapped past `v`: `v` itself plus
/// every non-neighbour.
fn dep_mask(g: &DefiningGraph, v: usize) -> u64 {
    g.full_mask() & !g.neighbor_mask(v)
}

/// Appends one letter to a reduced buffer, cancelling the nearest
/// reachable inverse if there is one. Keeps the buffer reduced.
fn push_reduced(g: &DefiningGraph, buf: &mut Vec<Letter>, l: Letter) {
    let dep = dep_mask(g, l.vertex());
    for j in (0..buf.len()).rev() {
        let other = buf[j];
        if dep & (1u64 << other.vertex()) == 0 {
            continue; // commuting neighbour, scan past it
        }
        if other == l.inverse() {
            buf.remove(j);
            return;
        }
        break; // blocked by a dependent letter
    }
    buf.push(l);
}

#[derive(Default)]
struct LinearizeBuffers {
    preds: Vec<u32>,
    succ_off: Vec<u32>,
    succ_fill: Vec<u32>,
    succ: Vec<u32>,
    last: Vec<u32>,
    avail: Vec<(Letter, u32)>,
}

thread_local! {
    static LINEARIZE_BUFFERS: std::cell::RefCell<LinearizeBuffers> =
        std::cell::RefCell::new(LinearizeBuffers::default());
}

/// Lexicographically least linearization of the reduced trace.
///
/// The trace poset is thinned to one edge per (occurrence, dependent
/// vertex): each occurrence waits on the last preceding occurrence of
/// every vertex it cannot swap past (including its own). Scratch space is
/// thread-local; this runs once per group multiplication.
fn lex_least_linearization(g: &DefiningGraph, letters: &[Letter]) -> Vec<Letter> {
    if g.edge_count() == 0 || letters.len() < 2 {
        return letters.to_vec(); // no commuting swaps available
    }
    LINEARIZE_BUFFERS.with(|cell| {
        let bufs = &mut *cell.borrow_mut();
        let n = letters.len();
        const NONE: u32 = u32::MAX;
        bufs.preds.clear();
        bufs.preds.resize(n, 0);
        bufs.succ_off.clear();
        bufs.succ_off.resize(n + 1, 0);
        bufs.last.clear();
        bufs.last.resize(g.len(), NONE);
        // Count edges per source, then fill a CSR adjacency.
        for (i, l) in letters.iter().enumerate() {
            let mut dep = dep_mask(g, l.vertex());
            while dep != 0 {
                let u = dep.trailing_zeros() as usize;
                dep &= dep - 1;
                if u < g.len() && bufs.last[u] != NONE {
                    bufs.succ_off[bufs.last[u] as usize + 1] += 1;
                    bufs.preds[i] += 1;
                }
            }
            bufs.last[l.vertex()] = i as u32;
        }
        for i in 0..n {
            bufs.succ_off[i + 1] += bufs.succ_off[i];
        }
        let total = bufs.succ_off[n] as usize;
        bufs.succ.clear();
        bufs.succ.resize(total, 0);
        bufs.succ_fill.clear();
        bufs.succ_fill.extend_from_slice(&bufs.succ_off[..n]);
        bufs.last.clear();
        bufs.last.resize(g.len(), NONE);
        for (i, l) in letters.iter().enumerate() {
            let mut dep = dep_mask(g, l.vertex());
            while dep != 0 {
                let u = dep.trailing_zeros() as usize;
                dep &= dep - 1;
                if u < g.len() && bufs.last[u] != NONE {
                    let src = bufs.last[u] as usize;
                    bufs.succ[bufs.succ_fill[src] as usize] = i as u32;
                    bufs.succ_fill[src] += 1;
                }
            }
            bufs.last[l.vertex()] = i as u32;
        }
        // Greedy: repeatedly emit the least available occurrence. At most
        // one occurrence per vertex is available at a time, so the pool
        // stays small and a linear scan finds the minimum.
        bufs.avail.clear();
        for (i, &l) in letters.iter().enumerate() {
            if bufs.preds[i] == 0 {
                bufs.avail.push((l, i as u32));
            }
        }
        let mut out = Vec::with_capacity(n);
        while !bufs.avail.is_empty() {
            let mut best = 0;
            for k in 1..bufs.avail.len() {
                if bufs.avail[k] < bufs.avail[best] {
                    best = k;
                }
            }
            let (l, i) = bufs.avail.swap_remove(best);
            out.push(l);
            let (lo, hi) = (
                bufs.succ_off[i as usize] as usize,
                bufs.succ_off[i as usize + 1] as usize,
            );
            for k in lo..hi {
                let s = bufs.succ[k] as usize;
                bufs.preds[s] -= 1;
                if bufs.preds[s] == 0 {
                    bufs.avail.push((letters[s], s as u32));
                }
            }
        }
        debug_assert_eq!(out.len(), n);
        out
    })
}

fn canonicalize(g: &DefiningGraph, raw: impl IntoIterator<Item = Letter>) -> Vec<Letter> {
    let mut buf = Vec::new();
    for l in raw {
        push_reduced(g, &mut buf, l);
    }
    lex_least_linearization(g, &buf)
}

/// Occurrences with no dependent predecessor (movable to the front), as a
/// list of positions.
fn minimal_occurrences(g: &DefiningGraph, letters: &[Letter]) -> Vec<usize> {
    let mut seen = 0u64;
    let mut out = Vec::new();
    for (i, l) in letters.iter().enumerate() {
        if dep_mask(g, l.vertex()) & seen == 0 {
            out.push(i);
        }
        seen |= 1u64 << l.vertex();
    }
    out
}

/// Occurrences with no dependent successor (movable to the back).
fn maximal_occurrences(g: &DefiningGraph, letters: &[Letter]) -> Vec<usize> {
    let mut seen = 0u64;
    let mut out = Vec::new();
    for (i, l) in letters.iter().enumerate().rev() {
        if dep_mask(g, l.vertex()) & seen == 0 {
            out.push(i);
        }
        seen |= 1u64 << l.vertex();
    }
    out.reverse();
    out
}

/// An element of `A(Γ)` in canonical normal form.
#[derive(Debug, Clone)]
pub struct GroupWord {
    graph: Arc<DefiningGraph>,
    letters: Box<[Letter]>,
}

impl PartialEq for GroupWord {
    fn eq(&self, other: &Self) -> bool {
        self.letters == other.letters
    }
}
impl Eq for GroupWord {}

impl PartialOrd for GroupWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Shortlex on canonical forms: length first, then letters.
impl Ord for GroupWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.letters
            .len()
            .cmp(&other.letters.len())
            .then_with(|| self.letters.cmp(&other.letters))
    }
}

impl std::hash::Hash for GroupWord {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.letters.hash(state);
    }
}

impl GroupWord {
    /// Canonical reduced representative of the raw letter sequence.
    pub fn normal_form(graph: &Arc<DefiningGraph>, raw: &[Letter]) -> GroupWord {
        for l in raw {
            assert!(l.vertex() < graph.len(), "letter vertex out of range");
        }
        GroupWord {
            graph: Arc::clone(graph),
            letters: canonicalize(graph, raw.iter().copied()).into_boxed_slice(),
        }
    }

    pub fn identity(graph: &Arc<DefiningGraph>) -> GroupWord {
        GroupWord {
            graph: Arc::clone(graph),
            letters: Box::new([]),
        }
    }

    /// Single-generator word `v` or `v^{-1}`.
    pub fn generator(graph: &Arc<DefiningGraph>, vertex: usize, positive: bool) -> GroupWord {
        assert!(vertex < graph.len());
        GroupWord {
            graph: Arc::clone(graph),
            letters: Box::new([Letter::new(vertex, positive)]),
        }
    }

    pub fn graph(&self) -> &Arc<DefiningGraph> {
        &self.graph
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    /// Word length of the element (canonical forms are geodesic).
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    /// Same as [`GroupWord::is_identity`].
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    fn same_graph(&self, other: &GroupWord) -> bool {
        Arc::ptr_eq(&self.graph, &other.graph) || *self.graph == *other.graph
    }

    pub fn multiply(&self, other: &GroupWord) -> Result<GroupWord, WordError> {
        if !self.same_graph(other) {
            return Err(WordError::GraphMismatch);
        }
        let raw = self.letters.iter().chain(other.letters.iter()).copied();
        Ok(GroupWord {
            graph: Arc::clone(&self.graph),
            letters: canonicalize(&self.graph, raw).into_boxed_slice(),
        })
    }

    pub fn inverse(&self) -> GroupWord {
        let raw = self.letters.iter().rev().map(|l| l.inverse());
        GroupWord {
            graph: Arc::clone(&self.graph),
            letters: canonicalize(&self.graph, raw).into_boxed_slice(),
        }
    }

    pub fn pow(&self, n: u32) -> GroupWord {
        let mut raw = Vec::with_capacity(self.len() * n as usize);
        for _ in 0..n {
            raw.extend_from_slice(&self.letters);
        }
        GroupWord {
            graph: Arc::clone(&self.graph),
            letters: canonicalize(&self.graph, raw).into_boxed_slice(),
        }
    }

    /// `h · self · h⁻¹`.
    pub fn conjugate_by(&self, h: &GroupWord) -> Result<GroupWord, WordError> {
        h.multiply(self)?.multiply(&h.inverse())
    }

    /// Set of vertices appearing in the canonical form; empty iff identity.
    pub fn support(&self) -> VertexSet {
        VertexSet::new(self.letters.iter().map(|l| l.vertex()).collect())
    }

    pub fn support_mask(&self) -> u64 {
        self.letters
            .iter()
            .fold(0u64, |m, l| m | (1u64 << l.vertex()))
    }

    pub fn commutes_with(&self, other: &GroupWord) -> Result<bool, WordError> {
        Ok(self.multiply(other)? == other.multiply(self)?)
    }

    /// Peels conjugation layers greedily: while some `x^ε` can be brought to
    /// the front and `x^{-ε}` to the back, strip both into the conjugator.
    /// The core is cyclically reduced, of minimal length in the conjugacy
    /// class, and `conjugator · core · conjugator⁻¹ = self`.
    pub fn cyclic_reduce(&self) -> CyclicDecomposition {
        let g = &*self.graph;
        let mut conjugator: Vec<Letter> = Vec::new();
        let mut core = self.letters.to_vec();
        loop {
            let mins = minimal_occurrences(g, &core);
            let maxs = maximal_occurrences(g, &core);
            let mut strip: Option<(usize, usize)> = None;
            for &i in &mins {
                for &j in &maxs {
                    if i != j && core[j] == core[i].inverse() {
                        match strip {
                            Some((bi, _)) if core[bi] <= core[i] => {}
                            _ => strip = Some((i, j)),
                        }
                    }
                }
            }
            match strip {
                Some((i, j)) => {
                    conjugator.push(core[i]);
                    let (lo, hi) = (i.min(j), i.max(j));
                    core.remove(hi);
                    core.remove(lo);
                }
                None => break,
            }
        }
        CyclicDecomposition {
            conjugator: GroupWord::normal_form(&self.graph, &conjugator),
            core: GroupWord {
                graph: Arc::clone(&self.graph),
                letters: lex_least_linearization(g, &core).into_boxed_slice(),
            },
        }
    }

    /// Is every cyclic permutation of the canonical form reduced?
    pub fn is_cyclically_reduced(&self) -> bool {
        self.cyclic_reduce().core.len() == self.len()
    }

    /// Maximal root: `root^exponent = self` with the exponent as large as
    /// possible. Extraction runs on the cyclically reduced core by
    /// exhaustive divisor-length prefix search, then conjugates back.
    pub fn primitive_root(&self) -> Result<(GroupWord, u32), WordError> {
        if self.is_identity() {
            return Err(WordError::IdentityInput);
        }
        let dec = self.cyclic_reduce();
        let core = &dec.core;
        let len = core.len();
        let mut best: (GroupWord, u32) = (core.clone(), 1);
        for k in (2..=len as u32).rev() {
            if !(len as u32).is_multiple_of(k) || !core.counts_divisible(k) {
                continue;
            }
            if let Some(root) = core.find_power_root(len / k as usize, k) {
                best = (root, k);
                break;
            }
        }
        let (root, exp) = best;
        let conjugated = root.conjugate_by(&dec.conjugator).expect("same graph");
        Ok((conjugated, exp))
    }

    /// Per-vertex letter counts (total and signed) all divisible by `k`?
    fn counts_divisible(&self, k: u32) -> bool {
        let mut totals = vec![0i64; self.graph.len()];
        let mut signed = vec![0i64; self.graph.len()];
        for l in self.letters.iter() {
            totals[l.vertex()] += 1;
            signed[l.vertex()] += if l.is_positive() { 1 } else { -1 };
        }
        totals
            .iter()
            .zip(&signed)
            .all(|(t, s)| t % i64::from(k) == 0 && s % i64::from(k) == 0)
    }

    /// Searches the downward-closed subtraces of size `d` for a word `r`
    /// with `r^k = self`. Complete because any such root embeds as a
    /// downward-closed occurrence set of the trace; bounded by a generous
    /// state cap, far beyond the desk scales used here.
    fn find_power_root(&self, d: usize, k: u32) -> Option<GroupWord> {
        let g = &*self.graph;
        let n = self.letters.len();
        debug_assert!(n <= 64);
        let mut seen: BTreeSet<u64> = BTreeSet::new();
        let mut stack: Vec<u64> = vec![0u64];
        let mut tried: BTreeSet<Vec<Letter>> = BTreeSet::new();
        const STATE_CAP: usize = 1 << 20;
        while let Some(state) = stack.pop() {
            if state.count_ones() as usize == d {
                let prefix = (0..n)
                    .filter(|i| state & (1 << i) != 0)
                    .map(|i| self.letters[i]);
                let candidate = canonicalize(g, prefix);
                if candidate.len() != d || !tried.insert(candidate.clone()) {
                    continue;
                }
                let root = GroupWord {
                    graph: Arc::clone(&self.graph),
                    letters: candidate.into_boxed_slice(),
                };
                if root.pow(k) == *self {
                    return Some(root);
                }
                continue;
            }
            let mut blocked = 0u64; // vertices with an unemitted earlier occurrence
            for i in 0..n {
                let bit = 1u64 << i;
                let v = self.letters[i].vertex();
                if state & bit != 0 {
                    continue;
                }
                if dep_mask(g, v) & blocked == 0 {
                    let next = state | bit;
                    if seen.insert(next) {
                        if seen.len() > STATE_CAP {
                            return None;
                        }
                        stack.push(next);
                    }
                }
                blocked |= 1u64 << v;
            }
        }
        None
    }

    /// Parses the word syntax: whitespace-separated tokens, each a vertex
    /// name optionally suffixed `^-1`. An empty string is the identity.
    pub fn parse(graph: &Arc<DefiningGraph>, text: &str) -> Result<GroupWord, WordError> {
        let mut raw = Vec::new();
        for tok in text.split_whitespace() {
            let (name, positive) = match tok.strip_suffix("^-1") {
                Some(base) => (base, false),
                None => (tok, true),
            };
            let v = graph
                .vertex_index(name)
                .ok_or_else(|| WordError::UnknownVertex(name.to_owned()))?;
            raw.push(Letter::new(v, positive));
        }
        Ok(GroupWord::normal_form(graph, &raw))
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_identity() {
            return write!(f, "e");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", self.graph.vertex_name(l.vertex()))?;
            if !l.is_positive() {
                write!(f, "^-1")?;
            }
        }
        Ok(())
    }
}

impl serde::Serialize for GroupWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Conjugacy factorization `u = h · core · h⁻¹` with the core cyclically
/// reduced, i.e. of minimal length in the conjugacy class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CyclicDecomposition {
    pub conjugator: GroupWord,
    pub core: GroupWord,
}

/// Deduplicated finite subset of `A(Γ)`.
///
/// Elements are kept in canonical order (shortlex on normal forms), which
/// makes iteration and every derived report deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordSet {
    graph: Arc<DefiningGraph>,
    words: BTreeSet<GroupWord>,
    symmetric: bool,
}

impl WordSet {
    pub fn new(graph: &Arc<DefiningGraph>, words: impl IntoIterator<Item = GroupWord>) -> WordSet {
        let words: BTreeSet<GroupWord> = words.into_iter().collect();
        let symmetric = words.iter().all(|w| words.contains(&w.inverse()));
        WordSet {
            graph: Arc::clone(graph),
            words,
            symmetric,
        }
    }

    pub fn empty(graph: &Arc<DefiningGraph>) -> WordSet {
        WordSet {
            graph: Arc::clone(graph),
            words: BTreeSet::new(),
            symmetric: true,
        }
    }

    pub fn graph(&self) -> &Arc<DefiningGraph> {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn contains(&self, w: &GroupWord) -> bool {
        self.words.contains(w)
    }

    /// True iff the set is closed under inversion (computed on construction).
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn iter(&self) -> impl Iterator<Item = &GroupWord> {
        self.words.iter()
    }

    /// `s ∪ s⁻¹`.
    pub fn symmetric_closure(&self) -> WordSet {
        let mut words = self.words.clone();
        for w in &self.words {
            words.insert(w.inverse());
        }
        WordSet {
            graph: Arc::clone(&self.graph),
            words,
            symmetric: true,
        }
    }

    /// Union of the supports of all elements.
    pub fn support_union(&self) -> VertexSet {
        let mut vs: Vec<usize> = Vec::new();
        for w in &self.words {
            vs.extend(w.support().iter());
        }
        VertexSet::new(vs)
    }

    pub fn total_length(&self) -> usize {
        self.words.iter().map(GroupWord::len).sum()
    }

    pub fn max_length(&self) -> usize {
        self.words.iter().map(GroupWord::len).max().unwrap_or(0)
    }

    /// Parses a set file: one word per line, `#` comments, and an optional
    /// leading `symmetric: true` line requesting closure on load. A blank
    /// interior line denotes the identity.
    pub fn parse(graph: &Arc<DefiningGraph>, text: &str) -> Result<WordSet, WordError> {
        let mut words = Vec::new();
        let mut close = false;
        let mut first_content = true;
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.starts_with('#') {
                continue;
            }
            if first_content {
                first_content = false;
                if let Some(rest) = line.strip_prefix("symmetric:") {
                    match rest.trim() {
                        "true" => close = true,
                        "false" => {}
                        other => {
                            return Err(WordError::Parse {
                                line: lineno + 1,
                                msg: format!("expected `symmetric: true|false`, got `{other}`"),
                            })
                        }
                    }
                    continue;
                }
            }
            words.push(GroupWord::parse(graph, line)?);
        }
        let set = WordSet::new(graph, words);
        Ok(if close { set.symmetric_closure() } else { set })
    }
}

impl fmt::Display for WordSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, w) in self.words.iter().enumerate() {
            if k > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, "}}")
    }
}
