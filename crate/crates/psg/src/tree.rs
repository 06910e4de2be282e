//! The free group acting on its Cayley tree.
//!
//! Vertices are reduced words, `d(x, y) = |x⁻¹y|`, and every quantity of
//! interest — Gromov products, the ℓ¹-energy basepoint, displacement,
//! stable translation lengths, and the direction-separating reduction partition — is
//! computed exactly in integer (or half-integer) arithmetic. The tree is
//! a quasi-tree with bottleneck constant 0, so tree approximation is the
//! identity and basepoints can be exact 1-medians (no δ-slack needed).

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::word::{GroupWord, Letter, WordSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("tree actions require an edgeless defining graph (a free group)")]
    NotFreeGraph,
    #[error("word set is empty")]
    EmptySet,
    #[error("invalid action constants: {0}")]
    BadConstants(String),
    #[error(
        "only {displaced} of {size} elements have displacement ≥ {threshold}; need at least 3/4"
    )]
    PreconditionViolated {
        displaced: usize,
        size: usize,
        threshold: usize,
    },
}

fn require_free(w: &GroupWord) -> Result<(), TreeError> {
    if w.graph().edge_count() == 0 {
        Ok(())
    } else {
        Err(TreeError::NotFreeGraph)
    }
}

/// `d(x, y) = |x⁻¹y|` between tree vertices (reduced words).
pub fn distance(x: &GroupWord, y: &GroupWord) -> usize {
    x.inverse().multiply(y).expect("same graph").len()
}

/// Twice the Gromov product `(x, y)_base`, always a nonnegative integer.
pub fn gromov_product_x2(x: &GroupWord, y: &GroupWord, base: &GroupWord) -> usize {
    distance(base, x) + distance(base, y) - distance(x, y)
}

/// `(x, y)_base = ½(d(base,x) + d(base,y) − d(x,y))`; a half-integer,
/// exact in floating point. Equals the overlap of the geodesics from
/// `base` towards `x` and `y`.
pub fn gromov_product(x: &GroupWord, y: &GroupWord, base: &GroupWord) -> f64 {
    gromov_product_x2(x, y, base) as f64 / 2.0
}

/// The median of `{b, x, y}`: the unique vertex on all three geodesics,
/// at distance `(x,y)_b` from `b`. Computed by prefix logic.
pub fn median(x: &GroupWord, y: &GroupWord, b: &GroupWord) -> GroupWord {
    let bx = b.inverse().multiply(x).expect("same graph");
    let by = b.inverse().multiply(y).expect("same graph");
    let common: Vec<Letter> = bx
        .letters()
        .iter()
        .zip(by.letters())
        .take_while(|(p, q)| p == q)
        .map(|(p, _)| *p)
        .collect();
    b.multiply(&GroupWord::normal_form(b.graph(), &common))
        .expect("same graph")
}

/// `w ← ℓ⁻¹ · w · ℓ` on a reduced deque; returns the length change.
fn conjugate_step(w: &mut VecDeque<Letter>, l: Letter) -> i64 {
    let mut delta = 0i64;
    if w.front() == Some(&l) {
        w.pop_front();
        delta -= 1;
    } else {
        w.push_front(l.inverse());
        delta += 1;
    }
    if w.back() == Some(&l.inverse()) {
        w.pop_back();
        delta -= 1;
    } else {
        w.push_back(l);
        delta += 1;
    }
    delta
}

/// Energy and displacement of a set at its exact 1-median basepoint.
#[derive(Debug, Clone, Serialize)]
pub struct EnergyReport {
    pub basepoint: GroupWord,
    /// `Σ_u d(x₀, u·x₀)`.
    pub total_displacement: usize,
    pub set_size: usize,
    /// `E(U) = total / |U|`, exact as a fraction, reported as a float.
    pub energy: f64,
    /// `λ₀(U) = max_u d(x₀, u·x₀)`.
    pub displacement: usize,
}

/// Finds a vertex minimizing `Σ_u d(x, u·x)` exactly.
///
/// The search runs over the convex hull of `{e} ∪ U·e` (all prefixes of
/// the canonical forms), which contains a minimizer: each orbit geodesic
/// `[e, u·e]` enters the axis of `u` inside the hull, so stepping from any
/// outside vertex towards the hull never increases any distance-to-axis.
/// Ties break to the least canonical vertex.
pub fn energy_basepoint(u: &WordSet) -> Result<EnergyReport, TreeError> {
    if u.is_empty() {
        return Err(TreeError::EmptySet);
    }
    let graph = u.graph();
    for w in u.iter() {
        require_free(w)?;
    }

    // Prefix trie of the hull.
    #[derive(Default)]
    struct Node {
        children: BTreeMap<Letter, usize>,
    }
    let mut nodes: Vec<Node> = vec![Node::default()];
    for w in u.iter() {
        let mut at = 0usize;
        for &l in w.letters() {
            let next_id = nodes.len();
            let entry = *nodes[at].children.entry(l).or_insert(next_id);
            if entry == next_id {
                nodes.push(Node::default());
            }
            at = entry;
        }
    }

    let mut deques: Vec<VecDeque<Letter>> = u
        .iter()
        .map(|w| w.letters().iter().copied().collect())
        .collect();
    let mut total: i64 = deques.iter().map(|d| d.len() as i64).sum();

    struct Best {
        sum: i64,
        path: Vec<Letter>,
    }
    let mut best = Best {
        sum: total,
        path: Vec::new(),
    };

    fn shorter_lex(a: &[Letter], b: &[Letter]) -> bool {
        (a.len(), a) < (b.len(), b)
    }

    fn dfs(
        at: usize,
        nodes: &[Node],
        deques: &mut Vec<VecDeque<Letter>>,
        total: &mut i64,
        path: &mut Vec<Letter>,
        best: &mut Best,
    ) {
        if *total < best.sum || (*total == best.sum && shorter_lex(path, &best.path)) {
            *best = Best {
                sum: *total,
                path: path.clone(),
            };
        }
        let children: Vec<(Letter, usize)> =
            nodes[at].children.iter().map(|(l, n)| (*l, *n)).collect();
        for (l, next) in children {
            for d in deques.iter_mut() {
                *total += conjugate_step(d, l);
            }
            path.push(l);
            dfs(next, nodes, deques, total, path, best);
            path.pop();
            for d in deques.iter_mut() {
                *total += conjugate_step(d, l.inverse());
            }
        }
    }

    let mut path = Vec::new();
    dfs(0, &nodes, &mut deques, &mut total, &mut path, &mut best);

    let basepoint = GroupWord::normal_form(graph, &best.path);
    let bp_inv = basepoint.inverse();
    let mut max_disp = 0usize;
    let mut sum = 0usize;
    for w in u.iter() {
        let moved = bp_inv
            .multiply(w)
            .and_then(|p| p.multiply(&basepoint))
            .expect("same graph")
            .len();
        sum += moved;
        max_disp = max_disp.max(moved);
    }
    debug_assert_eq!(sum as i64, best.sum);
    Ok(EnergyReport {
        basepoint,
        total_displacement: sum,
        set_size: u.len(),
        energy: sum as f64 / u.len() as f64,
        displacement: max_disp,
    })
}

/// `λ₀(U)` at the energy basepoint.
pub fn displacement(u: &WordSet) -> Result<usize, TreeError> {
    Ok(energy_basepoint(u)?.displacement)
}

/// `τ(g) = lim d(e, gⁿe)/n`: in a tree this is the length of the
/// cyclically reduced core.
pub fn stable_translation_length(g: &GroupWord) -> Result<usize, TreeError> {
    require_free(g)?;
    Ok(g.cyclic_reduce().core.len())
}

/// `d(e, gⁿ·e)`, for convergence checks of the translation length.
pub fn orbit_distance(g: &GroupWord, n: u32) -> Result<usize, TreeError> {
    require_free(g)?;
    Ok(g.pow(n).len())
}

/// Constants of the acylindrical action. For the free action on the
/// Cayley tree the coarse stabilizers are trivial: `(κ₀, N₀) = (1, 1)`
/// and `ν = 1`; the proof-scale radii are replaced by the parameters
/// `sphere_radius` and `disp_threshold` with the guard
/// `disp_threshold ≥ 10·sphere_radius ≥ 10`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionConstants {
    pub delta: f64,
    pub bottleneck: f64,
    pub kappa0: f64,
    pub n0: u32,
    pub nu: f64,
    pub sphere_radius: usize,
    pub disp_threshold: usize,
}

impl ActionConstants {
    /// Free-action constants with the given sphere radius and
    /// displacement threshold.
    pub fn for_tree(sphere_radius: usize, disp_threshold: usize) -> Result<Self, TreeError> {
        let c = ActionConstants {
            delta: 0.0,
            bottleneck: 0.0,
            kappa0: 1.0,
            n0: 1,
            nu: 1.0,
            sphere_radius,
            disp_threshold,
        };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<(), TreeError> {
        if self.kappa0 < self.delta {
            return Err(TreeError::BadConstants("kappa0 must be ≥ delta".into()));
        }
        if self.n0 < 1 {
            return Err(TreeError::BadConstants("N0 must be ≥ 1".into()));
        }
        if self.sphere_radius < 1 {
            return Err(TreeError::BadConstants("sphere radius must be ≥ 1".into()));
        }
        if self.disp_threshold < 10 * self.sphere_radius {
            return Err(TreeError::BadConstants(
                "displacement threshold must be ≥ 10 × sphere radius".into(),
            ));
        }
        Ok(())
    }
}

/// The reduction partition output: two subsets translating the basepoint in
/// separated directions, with all conclusions re-verified from raw
/// distances.
#[derive(Debug, Clone, Serialize)]
pub struct PartitionReport {
    pub basepoint: GroupWord,
    pub u0: Vec<GroupWord>,
    pub u1: Vec<GroupWord>,
    /// `max (U₀⁻¹x₀, U₁x₀)_{x₀}` over all pairs.
    pub max_gromov_inv0_1: f64,
    /// `max (U₀x₀, U₁⁻¹x₀)_{x₀}` over all pairs.
    pub max_gromov_0_inv1: f64,
    pub min_displacement: usize,
    pub cardinality_fraction_0: f64,
    pub cardinality_fraction_1: f64,
}

/// Why the sweep finished without a usable partition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum PartitionOutcome {
    Found,
    NotFound { reason: String },
}

fn prefix_vertex(direction: &GroupWord, r: usize) -> Vec<Letter> {
    direction.letters()[..r].to_vec()
}

/// Runs the reduction construction on the Cayley tree.
///
/// For each element with displacement at least the threshold, record the
/// crossing vertex of `[x₀, u·x₀]` with the sphere `S(x₀, r)` and
/// likewise for `u⁻¹`; sweep the sphere points one at a time, watching
/// the `1/100·|U|` thresholds; finish with the median split, ordering
/// `U₀` below `U₁` by displacement. All conclusions are checked from raw
/// distances before the report is returned.
pub fn reduction_partition(
    u: &WordSet,
    constants: &ActionConstants,
) -> Result<(PartitionOutcome, Option<PartitionReport>), TreeError> {
    constants.validate()?;
    if u.is_empty() {
        return Err(TreeError::EmptySet);
    }
    let r = constants.sphere_radius;
    let k_disp = constants.disp_threshold;
    let base = energy_basepoint(u)?;
    let x0 = &base.basepoint;
    let x0_inv = x0.inverse();

    // Directions from the basepoint: x₀⁻¹ u x₀ and its inverse.
    struct Displaced {
        word: GroupWord,
        forward: GroupWord,
        backward: GroupWord,
        moved: usize,
    }
    let mut displaced: Vec<Displaced> = Vec::new();
    for w in u.iter() {
        let forward = x0_inv
            .multiply(w)
            .and_then(|p| p.multiply(x0))
            .expect("same graph");
        let moved = forward.len();
        if moved >= k_disp {
            displaced.push(Displaced {
                word: w.clone(),
                backward: forward.inverse(),
                forward,
                moved,
            });
        }
    }
    if 4 * displaced.len() < 3 * u.len() {
        return Err(TreeError::PreconditionViolated {
            displaced: displaced.len(),
            size: u.len(),
            threshold: k_disp,
        });
    }

    // Sphere crossing points, as length-r prefixes of the directions.
    let points: BTreeSet<Vec<Letter>> = displaced
        .iter()
        .flat_map(|d| {
            [
                prefix_vertex(&d.forward, r),
                prefix_vertex(&d.backward, r),
            ]
        })
        .collect();
    let points: Vec<Vec<Letter>> = points.into_iter().collect();
    let threshold = |count: usize| 100 * count > u.len();

    // Sweep: Q grows one sphere point at a time.
    let mut outcome: Option<(Vec<usize>, Vec<usize>)> = None;
    for n in 1..=points.len() {
        let in_q = |p: &[Letter]| {
            points[..n].iter().any(|q| q == p)
        };
        let mut pq = Vec::new(); // p ∈ P, q ∈ Q
        let mut qp = Vec::new();
        let mut qq = Vec::new();
        let mut pp = Vec::new();
        for (i, d) in displaced.iter().enumerate() {
            let p_in_q = in_q(&prefix_vertex(&d.forward, r));
            let q_in_q = in_q(&prefix_vertex(&d.backward, r));
            match (p_in_q, q_in_q) {
                (false, true) => pq.push(i),
                (true, false) => qp.push(i),
                (true, true) => qq.push(i),
                (false, false) => pp.push(i),
            }
        }
        if threshold(pq.len()) {
            outcome = Some((pq.clone(), pq));
            break;
        }
        if threshold(qp.len()) {
            outcome = Some((qp.clone(), qp));
            break;
        }
        if threshold(qq.len()) {
            if threshold(pp.len()) {
                outcome = Some((pp, qq));
            } else {
                return Ok((
                    PartitionOutcome::NotFound {
                        reason: format!(
                            "sweep step {n}: |U_QQ| crossed 1/100 but |U_PP| = {} did not",
                            pp.len()
                        ),
                    },
                    None,
                ));
            }
            break;
        }
    }
    let (side0, side1) = match outcome {
        Some(s) => s,
        None => {
            return Ok((
                PartitionOutcome::NotFound {
                    reason: "sweep exhausted the sphere without crossing any threshold".into(),
                },
                None,
            ));
        }
    };

    // Median split: keep the low half of one side, the high half of the
    // other, ordering U₀ below U₁.
    let lower_median = |idx: &[usize]| -> usize {
        let mut ds: Vec<usize> = idx.iter().map(|&i| displaced[i].moved).collect();
        ds.sort_unstable();
        ds[(ds.len() - 1) / 2]
    };
    let m0 = lower_median(&side0);
    let m1 = lower_median(&side1);
    let (low_side, low_m, high_side, high_m) = if m0 <= m1 {
        (&side0, m0, &side1, m1)
    } else {
        (&side1, m1, &side0, m0)
    };
    let u0: Vec<&Displaced> = low_side
        .iter()
        .map(|&i| &displaced[i])
        .filter(|d| d.moved <= low_m)
        .collect();
    let u1: Vec<&Displaced> = high_side
        .iter()
        .map(|&i| &displaced[i])
        .filter(|d| d.moved >= high_m)
        .collect();

    // Conclusion checks, from raw distances.
    let mut max_inv0_1 = 0usize; // doubled Gromov products
    let mut max_0_inv1 = 0usize;
    for a in &u0 {
        for b in &u1 {
            let a_fwd = x0.multiply(&a.forward).expect("same graph");
            let a_bwd = x0.multiply(&a.backward).expect("same graph");
            let b_fwd = x0.multiply(&b.forward).expect("same graph");
            let b_bwd = x0.multiply(&b.backward).expect("same graph");
            max_inv0_1 = max_inv0_1.max(gromov_product_x2(&a_bwd, &b_fwd, x0));
            max_0_inv1 = max_0_inv1.max(gromov_product_x2(&a_fwd, &b_bwd, x0));
        }
    }
    let mut failures = Vec::new();
    if max_inv0_1 > 2 * r {
        failures.push(format!(
            "(U0^-1 x0, U1 x0) reaches {}, above r = {r}",
            max_inv0_1 as f64 / 2.0
        ));
    }
    if max_0_inv1 > 2 * r {
        failures.push(format!(
            "(U0 x0, U1^-1 x0) reaches {}, above r = {r}",
            max_0_inv1 as f64 / 2.0
        ));
    }
    if 200 * u0.len() < u.len() || 200 * u1.len() < u.len() {
        failures.push(format!(
            "cardinalities {} and {} fall below |U|/200",
            u0.len(),
            u1.len()
        ));
    }
    let max0 = u0.iter().map(|d| d.moved).max().unwrap_or(0);
    let min1 = u1.iter().map(|d| d.moved).min().unwrap_or(usize::MAX);
    if max0 > min1 {
        failures.push("displacement ordering violated".into());
    }
    if !failures.is_empty() {
        return Ok((
            PartitionOutcome::NotFound {
                reason: failures.join("; "),
            },
            None,
        ));
    }
    let min_disp = u0
        .iter()
        .chain(&u1)
        .map(|d| d.moved)
        .min()
        .unwrap_or(0);
    Ok((
        PartitionOutcome::Found,
        Some(PartitionReport {
            basepoint: x0.clone(),
            u0: u0.iter().map(|d| d.word.clone()).collect(),
            u1: u1.iter().map(|d| d.word.clone()).collect(),
            max_gromov_inv0_1: max_inv0_1 as f64 / 2.0,
            max_gromov_0_inv1: max_0_inv1 as f64 / 2.0,
            min_displacement: min_disp,
            cardinality_fraction_0: u0.len() as f64 / u.len() as f64,
            cardinality_fraction_1: u1.len() as f64 / u.len() as f64,
        }),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::DefiningGraph;
    use crate::word::WordSet;
    use std::sync::Arc;

    fn w(g: &Arc<DefiningGraph>, s: &str) -> GroupWord {
        GroupWord::parse(g, s).unwrap()
    }

    #[test]
    fn gromov_product_examples() {
        let f2 = DefiningGraph::free(2);
        let e = GroupWord::identity(&f2);
        let x = w(&f2, "a b");
        let y = w(&f2, "a a");
        assert_eq!(gromov_product(&x, &y, &e), 1.0);
        assert_eq!(gromov_product(&x, &x, &e), 2.0);
        assert_eq!(gromov_product(&w(&f2, "a"), &w(&f2, "b"), &e), 0.0);
    }

    #[test]
    fn gromov_equals_distance_to_median() {
        let f2 = DefiningGraph::free(2);
        let words = ["", "a", "b a", "a b a", "b^-1 a b", "a a a"];
        for x in words {
            for y in words {
                for b in words {
                    let (x, y, b) = (w(&f2, x), w(&f2, y), w(&f2, b));
                    let m = median(&x, &y, &b);
                    assert_eq!(
                        gromov_product_x2(&x, &y, &b),
                        2 * distance(&b, &m),
                        "x={x} y={y} b={b}"
                    );
                    assert_eq!(
                        distance(&b, &x),
                        distance(&b, &m) + distance(&m, &x)
                    );
                }
            }
        }
    }

    #[test]
    fn energy_symmetric_pair() {
        let f2 = DefiningGraph::free(2);
        let u = WordSet::new(&f2, [w(&f2, "a"), w(&f2, "a^-1")]);
        let rep = energy_basepoint(&u).unwrap();
        assert!(rep.basepoint.is_identity());
        assert_eq!(rep.energy, 1.0);
        assert_eq!(rep.displacement, 1);
    }

    #[test]
    fn energy_conjugated_generators() {
        let f2 = DefiningGraph::free(2);
        let g = w(&f2, "a b");
        let u = WordSet::new(
            &f2,
            [
                w(&f2, "a").conjugate_by(&g).unwrap(),
                w(&f2, "b").conjugate_by(&g).unwrap(),
            ],
        );
        let rep = energy_basepoint(&u).unwrap();
        assert_eq!(rep.basepoint, g);
        assert_eq!(rep.energy, 1.0);
        assert_eq!(rep.displacement, 1);
    }

    #[test]
    fn energy_identity_set() {
        let f2 = DefiningGraph::free(2);
        let u = WordSet::new(&f2, [GroupWord::identity(&f2)]);
        let rep = energy_basepoint(&u).unwrap();
        assert!(rep.basepoint.is_identity());
        assert_eq!(rep.energy, 0.0);
        assert_eq!(rep.displacement, 0);
    }

    #[test]
    fn displacement_examples() {
        let f2 = DefiningGraph::free(2);
        let u = WordSet::new(&f2, [w(&f2, "a"), w(&f2, "b")]);
        assert_eq!(displacement(&u).unwrap(), 1);
        let a10 = w(&f2, "a").pow(10);
        let u = WordSet::new(&f2, [a10, w(&f2, "b")]);
        assert_eq!(displacement(&u).unwrap(), 10);
    }

    #[test]
    fn translation_length_examples() {
        let f2 = DefiningGraph::free(2);
        assert_eq!(stable_translation_length(&w(&f2, "a b a^-1")).unwrap(), 1);
        assert_eq!(stable_translation_length(&w(&f2, "a b")).unwrap(), 2);
        assert_eq!(stable_translation_length(&w(&f2, "")).unwrap(), 0);
    }

    #[test]
    fn translation_length_scales_on_powers() {
        let f2 = DefiningGraph::free(2);
        for s in ["a b", "a b a^-1 b^-1", "b b a"] {
            let g = w(&f2, s);
            let t = stable_translation_length(&g).unwrap();
            for n in 1..=10 {
                assert_eq!(stable_translation_length(&g.pow(n)).unwrap(), n as usize * t);
            }
        }
    }

    #[test]
    fn non_free_graphs_rejected() {
        let c4 = crate::graph::c4();
        let u = WordSet::new(&c4, [w(&c4, "a")]);
        assert!(matches!(energy_basepoint(&u), Err(TreeError::NotFreeGraph)));
    }

    #[test]
    fn partition_four_directions() {
        let f2 = DefiningGraph::free(2);
        let a10 = w(&f2, "a").pow(10);
        let u = WordSet::new(
            &f2,
            [
                a10.clone(),
                a10.multiply(&w(&f2, "b")).unwrap(),
                a10.inverse(),
                w(&f2, "b").multiply(&a10.inverse()).unwrap(),
            ],
        );
        let constants = ActionConstants::for_tree(1, 10).unwrap();
        let (outcome, report) = reduction_partition(&u, &constants).unwrap();
        assert_eq!(outcome, PartitionOutcome::Found);
        let rep = report.unwrap();
        assert!(rep.max_gromov_inv0_1 <= 1.0);
        assert!(rep.max_gromov_0_inv1 <= 1.0);
        assert!(!rep.u0.is_empty() && !rep.u1.is_empty());
        assert!(rep.min_displacement >= 10);
    }

    #[test]
    fn partition_long_powers_wide_sphere() {
        let f2 = DefiningGraph::free(2);
        let a25 = w(&f2, "a").pow(25);
        let u = WordSet::new(
            &f2,
            [
                a25.clone(),
                a25.multiply(&w(&f2, "b")).unwrap(),
                a25.inverse(),
                w(&f2, "b").multiply(&a25.inverse()).unwrap(),
            ],
        );
        let constants = ActionConstants::for_tree(2, 20).unwrap();
        let (outcome, report) = reduction_partition(&u, &constants).unwrap();
        assert_eq!(outcome, PartitionOutcome::Found);
        let rep = report.unwrap();
        assert!(rep.max_gromov_inv0_1 <= 2.0);
        assert!(rep.max_gromov_0_inv1 <= 2.0);
    }

    #[test]
    fn partition_precondition_is_typed_error() {
        let f2 = DefiningGraph::free(2);
        let u = WordSet::new(&f2, [w(&f2, "a"), w(&f2, "b"), w(&f2, "a b")]);
        let constants = ActionConstants::for_tree(2, 20).unwrap();
        assert!(matches!(
            reduction_partition(&u, &constants),
            Err(TreeError::PreconditionViolated { .. })
        ));
    }

    #[test]
    fn constants_guard() {
        assert!(ActionConstants::for_tree(2, 19).is_err());
        assert!(ActionConstants::for_tree(0, 10).is_err());
        assert!(ActionConstants::for_tree(1, 10).is_ok());
    }
}
