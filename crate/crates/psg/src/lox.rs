//! Loxodromic detection and the short-loxodromic search.
//!
//! Elements of `A(Γ)` act on the extension graph of `Γ` when `Γ` is
//! connected, and on the Bass–Serre tree of the free-product splitting
//! when it is not. In the connected case a cyclically reduced element is
//! elliptic exactly when its support lies in a subjoin of `Γ`; the fast
//! criterion decides this via the two-case disjunction (induced join, or
//! containment in a star), and an exhaustive subjoin oracle double-checks
//! it at small sizes.

use serde::Serialize;
use thiserror::Error;

use crate::graph::{DefiningGraph, GraphError, VertexSet};
use crate::growth::{product_set, EnumerationCaps, GrowthError, GrowthParams, InequalityVerdict};
use crate::word::{GroupWord, Letter, WordError, WordSet};
use std::sync::Arc;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LoxError {
    #[error("word set is empty")]
    EmptySet,
    #[error("word set is not symmetric")]
    NotSymmetric,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Growth(#[from] GrowthError),
    #[error(transparent)]
    Word(#[from] WordError),
}

/// How a support set sits inside a subjoin.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SubjoinWitness {
    /// The set itself induces a nontrivial join.
    InducedJoin { part1: Vec<usize>, part2: Vec<usize> },
    /// The set lies in `star(vertex)`, a subjoin since the vertex has a
    /// neighbour.
    Star { vertex: usize },
    /// Oracle mode: an explicit subjoin containing the set.
    Subjoin { vertices: Vec<usize> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubjoinMode {
    /// Induced-join-or-star disjunction.
    Fast,
    /// Exhaustive scan of all subjoins, gated by the oracle cap.
    Oracle { cap: usize },
}

/// Is `s` contained in some subjoin of `g`? Returns the witness if so.
pub fn support_in_subjoin(
    g: &DefiningGraph,
    s: &VertexSet,
    mode: SubjoinMode,
) -> Result<Option<SubjoinWitness>, GraphError> {
    assert!(!s.is_empty(), "support set must be nonempty");
    match mode {
        SubjoinMode::Fast => {
            if s.len() >= 2 {
                if let Some((p1, p2)) = g.induced(s).join_factors() {
                    let back = |local: &VertexSet| -> Vec<usize> {
                        local.iter().map(|i| s.indices()[i]).collect()
                    };
                    return Ok(Some(SubjoinWitness::InducedJoin {
                        part1: back(&p1),
                        part2: back(&p2),
                    }));
                }
            }
            let s_mask = s.mask();
            for v in 0..g.len() {
                if g.neighbor_mask(v) != 0 && s_mask & !g.star_mask(v) == 0 {
                    return Ok(Some(SubjoinWitness::Star { vertex: v }));
                }
            }
            Ok(None)
        }
        SubjoinMode::Oracle { cap } => {
            let s_mask = s.mask();
            for w in g.enumerate_subjoins(cap)? {
                if s_mask & !w.mask() == 0 {
                    return Ok(Some(SubjoinWitness::Subjoin {
                        vertices: w.indices().to_vec(),
                    }));
                }
            }
            Ok(None)
        }
    }
}

/// Verdict of the loxodromic test, with its certificate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum LoxVerdict {
    Identity,
    NotApplicable { reason: String },
    Elliptic { witness: EllipticWitness },
    Loxodromic { witness: LoxWitness },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EllipticWitness {
    /// Connected branch: the core support sits in a subjoin.
    InSubjoin { witness: SubjoinWitness },
    /// Bass–Serre branch: the core support stays in one component.
    SingleComponent { component: Vec<usize> },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LoxWitness {
    /// Connected branch: no subjoin contains the core support.
    SupportNotInSubjoin { support: Vec<usize> },
    /// Bass–Serre branch: the core support meets at least two components
    /// of the disconnected defining graph.
    MeetsComponents { components: Vec<Vec<usize>> },
}

impl LoxVerdict {
    pub fn is_loxodromic(&self) -> bool {
        matches!(self, LoxVerdict::Loxodromic { .. })
    }

    pub fn status_str(&self) -> &'static str {
        match self {
            LoxVerdict::Identity => "identity",
            LoxVerdict::NotApplicable { .. } => "not_applicable",
            LoxVerdict::Elliptic { .. } => "elliptic",
            LoxVerdict::Loxodromic { .. } => "loxodromic",
        }
    }
}

/// Classifies the action of `u` on the extension graph (connected `Γ`)
/// or the Bass–Serre tree of the free-product splitting (disconnected
/// `Γ`). Cyclically reduces first, so the verdict is conjugation
/// invariant.
pub fn is_loxodromic(u: &GroupWord) -> LoxVerdict {
    let core = u.cyclic_reduce().core;
    if core.is_identity() {
        return LoxVerdict::Identity;
    }
    let g = u.graph();
    if g.len() <= 1 {
        return LoxVerdict::NotApplicable {
            reason: "single-vertex graph: the group is cyclic".into(),
        };
    }
    let supp = core.support();
    if g.is_connected() {
        match support_in_subjoin(g, &supp, SubjoinMode::Fast).expect("fast mode cannot fail") {
            Some(witness) => LoxVerdict::Elliptic {
                witness: EllipticWitness::InSubjoin { witness },
            },
            None => LoxVerdict::Loxodromic {
                witness: LoxWitness::SupportNotInSubjoin {
                    support: supp.indices().to_vec(),
                },
            },
        }
    } else {
        let supp_mask = supp.mask();
        let met: Vec<VertexSet> = g
            .connected_components()
            .into_iter()
            .filter(|c| c.mask() & supp_mask != 0)
            .collect();
        if met.len() >= 2 {
            LoxVerdict::Loxodromic {
                witness: LoxWitness::MeetsComponents {
                    components: met.iter().map(|c| c.indices().to_vec()).collect(),
                },
            }
        } else {
            LoxVerdict::Elliptic {
                witness: EllipticWitness::SingleComponent {
                    component: met[0].indices().to_vec(),
                },
            }
        }
    }
}

/// A conjugation taking `U` into `A(Γ(V_U))`: `conjugator⁻¹ · U ·
/// conjugator` is supported in `v_u`, mirroring the `u = h·core·h⁻¹`
/// convention of cyclic reduction.
#[derive(Debug, Clone, Serialize)]
pub struct SupportResult {
    pub conjugator: GroupWord,
    pub v_u: Vec<usize>,
    /// True when the bounded-exhaustive phase verified that no conjugator
    /// within the depth budget shrinks the support further.
    pub certified: bool,
    #[serde(skip)]
    pub conjugated: WordSet,
}

impl SupportResult {
    pub fn v_u_set(&self) -> VertexSet {
        VertexSet::new(self.v_u.clone())
    }
}

fn set_measure(s: &WordSet) -> (usize, usize) {
    (s.support_union().len(), s.total_length())
}

fn conjugate_set(s: &WordSet, c: &GroupWord) -> WordSet {
    // c⁻¹ · s · c
    let ci = c.inverse();
    WordSet::new(
        s.graph(),
        s.iter().map(|w| w.conjugate_by(&ci).expect("same graph")),
    )
}

/// All nontrivial canonical words of length at most `depth`.
fn conjugator_candidates(graph: &Arc<DefiningGraph>, depth: u32) -> Vec<GroupWord> {
    let mut all = std::collections::BTreeSet::new();
    let mut frontier = vec![GroupWord::identity(graph)];
    for _ in 0..depth {
        let mut next = Vec::new();
        for w in &frontier {
            for v in 0..graph.len() {
                for positive in [true, false] {
                    let ext = w
                        .multiply(&GroupWord::generator(graph, v, positive))
                        .expect("same graph");
                    if !ext.is_identity() && all.insert(ext.clone()) {
                        next.push(ext);
                    }
                }
            }
        }
        frontier = next;
    }
    all.into_iter().collect()
}

/// Maximum support-union size for which the exhaustive phase runs.
const EXHAUSTIVE_SUPPORT_LIMIT: usize = 8;

/// Conjugates `u` towards a minimal supporting vertex set `V_U`.
///
/// Greedy phase: single-letter conjugations that lexicographically shrink
/// (support union, total length), to a fixpoint. Exhaustive phase (support
/// ≤ 8 and depth ≥ 1): scan every conjugator of length ≤ depth for a
/// strictly smaller support union, repeating until none improves;
/// `certified` records whether that verification completed.
pub fn minimal_support_set(u: &WordSet, depth: u32) -> Result<SupportResult, LoxError> {
    if u.is_empty() {
        return Err(LoxError::EmptySet);
    }
    let graph = u.graph();
    let mut h = GroupWord::identity(graph);
    let mut current = u.clone();

    let greedy = |start: WordSet, h: &mut GroupWord| -> WordSet {
        let mut cur = start;
        loop {
            let mut improved = false;
            for v in 0..graph.len() {
                for positive in [true, false] {
                    let step = GroupWord::generator(graph, v, positive);
                    let cand = conjugate_set(&cur, &step);
                    if set_measure(&cand) < set_measure(&cur) {
                        *h = h.multiply(&step).expect("same graph");
                        cur = cand;
                        improved = true;
                    }
                }
            }
            if !improved {
                return cur;
            }
        }
    };

    current = greedy(current, &mut h);
    let mut certified = false;
    if depth >= 1 && current.support_union().len() <= EXHAUSTIVE_SUPPORT_LIMIT {
        loop {
            let mut found = None;
            for cand in conjugator_candidates(graph, depth) {
                let conj = conjugate_set(&current, &cand);
                if conj.support_union().len() < current.support_union().len() {
                    found = Some((cand, conj));
                    break;
                }
            }
            match found {
                Some((cand, conj)) => {
                    h = h.multiply(&cand).expect("same graph");
                    current = greedy(conj, &mut h);
                }
                None => {
                    certified = true;
                    break;
                }
            }
        }
    }
    Ok(SupportResult {
        conjugator: h,
        v_u: current.support_union().indices().to_vec(),
        certified,
        conjugated: current,
    })
}

/// Outcome of the short-loxodromic search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum ShortLoxOutcome {
    /// Least witness at the smallest power: `witness ∈ U^n` is loxodromic
    /// on the action associated with `Γ(V_U)`.
    Found { n: u32, witness: GroupWord },
    /// `Γ(V_U)` is a join or a single vertex; no loxodromic can exist.
    NotApplicable { reason: String },
    /// No loxodromic found up to the cap.
    Exhausted { n_cap: u32 },
}

/// Restricts a word supported in `v_u` to the induced subgraph.
fn restrict_word(w: &GroupWord, v_u: &VertexSet, induced: &Arc<DefiningGraph>) -> GroupWord {
    let letters: Vec<Letter> = w
        .letters()
        .iter()
        .map(|l| {
            let local = v_u
                .indices()
                .binary_search(&l.vertex())
                .expect("letter inside v_u");
            Letter::new(local, l.is_positive())
        })
        .collect();
    GroupWord::normal_form(induced, &letters)
}

/// Maps a word over the induced subgraph back to the parent graph.
fn unrestrict_word(w: &GroupWord, v_u: &VertexSet, parent: &Arc<DefiningGraph>) -> GroupWord {
    let letters: Vec<Letter> = w
        .letters()
        .iter()
        .map(|l| Letter::new(v_u.indices()[l.vertex()], l.is_positive()))
        .collect();
    GroupWord::normal_form(parent, &letters)
}

/// Scans `U, U², …` (over the conjugated set inside `A(Γ(V_U))`) for the
/// first loxodromic element, in canonical order. Deterministic: smallest
/// `n`, then least witness.
pub fn short_loxodromic(
    u: &WordSet,
    n_cap: u32,
    depth: u32,
    caps: &EnumerationCaps,
) -> Result<ShortLoxOutcome, LoxError> {
    if u.is_empty() {
        return Err(LoxError::EmptySet);
    }
    if !u.is_symmetric() {
        return Err(LoxError::NotSymmetric);
    }
    let support = minimal_support_set(u, depth)?;
    let v_u = support.v_u_set();
    let parent = u.graph();
    let induced = Arc::new(parent.induced(&v_u));
    if induced.len() <= 1 {
        return Ok(ShortLoxOutcome::NotApplicable {
            reason: "V_U is a single vertex: the subgroup is cyclic".into(),
        });
    }
    if induced.join_factors().is_some() {
        return Ok(ShortLoxOutcome::NotApplicable {
            reason: "Γ(V_U) is a nontrivial join: the group splits as a direct product".into(),
        });
    }
    let local = WordSet::new(
        &induced,
        support
            .conjugated
            .iter()
            .map(|w| restrict_word(w, &v_u, &induced)),
    );
    for n in 1..=n_cap {
        let power = product_set(&local, n, caps)?;
        for w in power.iter() {
            if is_loxodromic(w).is_loxodromic() {
                return Ok(ShortLoxOutcome::Found {
                    n,
                    witness: unrestrict_word(w, &v_u, parent),
                });
            }
        }
    }
    Ok(ShortLoxOutcome::Exhausted { n_cap })
}

/// A certified splitting of the conjugated letters of `U` into two
/// nonempty mutually commuting parts.
#[derive(Debug, Clone, Serialize)]
pub struct ObstructionPartition {
    pub part1: Vec<GroupWord>,
    pub part2: Vec<GroupWord>,
}

/// Writes each element as `g·s₁⋯s_r·g⁻¹`, collects the conjugated letters
/// `g·s_j·g⁻¹`, and looks for a bipartition of them into two nonempty
/// mutually commuting classes (complement components of their commutation
/// graph). Such a partition certifies that `⟨U⟩` embeds in a direct
/// product with both projections nontrivial.
pub fn direct_product_obstruction(u: &WordSet) -> Result<Option<ObstructionPartition>, LoxError> {
    if u.is_empty() {
        return Err(LoxError::EmptySet);
    }
    let mut letters: std::collections::BTreeSet<GroupWord> = std::collections::BTreeSet::new();
    for w in u.iter() {
        if w.is_identity() {
            continue;
        }
        let dec = w.cyclic_reduce();
        for l in dec.core.letters() {
            let single = GroupWord::generator(u.graph(), l.vertex(), l.is_positive());
            letters.insert(single.conjugate_by(&dec.conjugator)?);
        }
    }
    let nodes: Vec<GroupWord> = letters.into_iter().collect();
    if nodes.len() < 2 {
        return Ok(None);
    }
    let n = nodes.len();
    let mut commute = vec![vec![false; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let c = nodes[i].commutes_with(&nodes[j])?;
            commute[i][j] = c;
            commute[j][i] = c;
        }
    }
    // Components of the complement of the commutation graph.
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for start in 0..n {
        if comp[start] != usize::MAX {
            continue;
        }
        let mut stack = vec![start];
        comp[start] = count;
        while let Some(i) = stack.pop() {
            for j in 0..n {
                if comp[j] == usize::MAX && !commute[i][j] && i != j {
                    comp[j] = count;
                    stack.push(j);
                }
            }
        }
        count += 1;
    }
    if count < 2 {
        return Ok(None);
    }
    let part1: Vec<GroupWord> = (0..n).filter(|&i| comp[i] == 0).map(|i| nodes[i].clone()).collect();
    let part2: Vec<GroupWord> = (0..n).filter(|&i| comp[i] != 0).map(|i| nodes[i].clone()).collect();
    debug_assert!(part1
        .iter()
        .all(|a| part2.iter().all(|b| a.commutes_with(b).unwrap())));
    Ok(Some(ObstructionPartition { part1, part2 }))
}

/// Everything the empirical dichotomy analyzer can certify about one
/// symmetric subset. Each flag carries its own witness; no claim beyond
/// the certified sufficient conditions is made.
#[derive(Debug, Clone, Serialize)]
pub struct ClassificationReport {
    pub v_u: SupportResult,
    pub induced_connected: bool,
    pub join: bool,
    pub cyclic: bool,
    pub cyclic_root: Option<GroupWord>,
    pub obstruction: Option<ObstructionPartition>,
    pub short_lox: ShortLoxOutcome,
    pub growth_sizes: Vec<usize>,
    pub growth_verdicts: Vec<InequalityVerdict>,
}

/// Do all non-identity elements share one primitive root, up to
/// inversion? Returns the root if so.
pub fn common_primitive_root(u: &WordSet) -> Result<Option<GroupWord>, LoxError> {
    let mut root: Option<GroupWord> = None;
    for w in u.iter() {
        if w.is_identity() {
            continue;
        }
        let (r, _) = w.primitive_root()?;
        match &root {
            None => root = Some(r),
            Some(r0) => {
                if r != *r0 && r != r0.inverse() {
                    return Ok(None);
                }
            }
        }
    }
    Ok(root.or_else(|| Some(GroupWord::identity(u.graph()))))
}

/// Runs the full battery of certified flags on a symmetric subset.
pub fn classify_subset(
    u: &WordSet,
    params: &GrowthParams,
    n_cap: u32,
    depth: u32,
    caps: &EnumerationCaps,
) -> Result<ClassificationReport, LoxError> {
    if u.is_empty() {
        return Err(LoxError::EmptySet);
    }
    if !u.is_symmetric() {
        return Err(LoxError::NotSymmetric);
    }
    let support = minimal_support_set(u, depth)?;
    let induced = u.graph().induced(&support.v_u_set());
    let induced_connected = induced.is_connected();
    let join = induced.join_factors().is_some();
    let cyclic_root = common_primitive_root(u)?;
    let cyclic = cyclic_root.is_some();
    let obstruction = direct_product_obstruction(u)?;
    let short_lox = short_loxodromic(u, n_cap, depth, caps)?;
    let table = crate::growth::growth_table(u, n_cap, false, caps)?;
    let growth_verdicts = crate::growth::check_inequality(&table, params);
    Ok(ClassificationReport {
        v_u: support,
        induced_connected,
        join,
        cyclic,
        cyclic_root: cyclic_root.filter(|_| cyclic),
        obstruction,
        short_lox,
        growth_sizes: table.sizes,
        growth_verdicts,
    })
}
