//! Product-set enumeration and growth inequality verdicts.
//!
//! The central objects are `U^n = {u₁⋯uₙ : uᵢ ∈ U}` computed by exact
//! canonical-form enumeration, the growth table of their sizes, and the
//! checks `|U^n| ≥ (α|U|)^{e(n)}` in both the linear-exponent and the
//! half-floor exponent regimes. Enumeration is gated by explicit caps and
//! fails hard rather than truncating.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;
use thiserror::Error;

use crate::graph::{DefiningGraph, VertexSet};
use crate::word::{GroupWord, WordError, WordSet};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GrowthError {
    #[error("canonical length {len} exceeds cap {cap}")]
    LengthCapExceeded { len: usize, cap: usize },
    #[error("enumeration would store {count} elements, cap is {cap}")]
    ElementCapExceeded { count: usize, cap: usize },
    #[error("word set is not symmetric")]
    NotSymmetric,
    #[error("defining graph does not split as a direct product")]
    NotAProduct,
    #[error(transparent)]
    Word(#[from] WordError),
}

/// Hard limits for product-set enumeration. Exceeding either is an error,
/// never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationCaps {
    pub max_len: usize,
    pub max_elements: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps {
            max_len: 64,
            max_elements: 5_000_000,
        }
    }
}

/// Thread count for the partitioned product step: `PSG_THREADS` if set,
/// otherwise the available parallelism, capped at 8.
fn thread_count() -> usize {
    if let Ok(v) = std::env::var("PSG_THREADS") {
        if let Ok(n) = v.trim().parse::<usize>() {
            return n.max(1);
        }
    }
    std::thread::available_parallelism()
        .map(|n| n.get().min(8))
        .unwrap_or(1)
}

/// One multiplication step: `frontier · u`, deduplicated.
///
/// The outer factor is partitioned across threads; per-partition sets are
/// merged afterwards, so the result does not depend on the thread count.
fn product_step(
    frontier: &WordSet,
    u: &WordSet,
    caps: &EnumerationCaps,
) -> Result<WordSet, GrowthError> {
    let graph = frontier.graph();
    let work = frontier.len().saturating_mul(u.len());
    let threads = if work >= 1 << 16 { thread_count() } else { 1 };

    let multiply_into =
        |lhs: &[&GroupWord]| -> Result<std::collections::BTreeSet<GroupWord>, GrowthError> {
            let mut out = std::collections::BTreeSet::new();
            for a in lhs {
                for b in u.iter() {
                    let p = a.multiply(b)?;
                    if p.len() > caps.max_len {
                        return Err(GrowthError::LengthCapExceeded {
                            len: p.len(),
                            cap: caps.max_len,
                        });
                    }
                    out.insert(p);
                }
            }
            Ok(out)
        };

    let lhs: Vec<&GroupWord> = frontier.iter().collect();
    let merged = if threads <= 1 || lhs.len() < 2 * threads {
        multiply_into(&lhs)?
    } else {
        let chunk = lhs.len().div_ceil(threads);
        let results: Vec<Result<_, GrowthError>> = std::thread::scope(|scope| {
            let handles: Vec<_> = lhs
                .chunks(chunk)
                .map(|part| scope.spawn(|| multiply_into(part)))
                .collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("product worker does not panic"))
                .collect()
        });
        let mut merged = std::collections::BTreeSet::new();
        for r in results {
            merged.extend(r?);
        }
        merged
    };

    if merged.len() > caps.max_elements {
        return Err(GrowthError::ElementCapExceeded {
            count: merged.len(),
            cap: caps.max_elements,
        });
    }
    Ok(WordSet::new(graph, merged))
}

/// Exactly `U^n`, deduplicated by canonical form.
pub fn product_set(u: &WordSet, n: u32, caps: &EnumerationCaps) -> Result<WordSet, GrowthError> {
    assert!(n >= 1, "product_set needs n >= 1");
    let mut current = u.clone();
    for _ in 1..n {
        current = product_step(&current, u, caps)?;
    }
    Ok(current)
}

/// The sequence `|U^1|, …, |U^N|`, optionally with the ball sizes
/// `|{e} ∪ U ∪ … ∪ U^n|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GrowthTable {
    pub base_size: usize,
    pub sizes: Vec<usize>,
    pub ball_sizes: Option<Vec<usize>>,
}

impl GrowthTable {
    pub fn n_max(&self) -> usize {
        self.sizes.len()
    }

    /// `|U^n|` for 1-based `n`.
    pub fn size(&self, n: usize) -> usize {
        self.sizes[n - 1]
    }

    /// Finite-n growth rate estimate `|B(n)|^{1/n}`, when balls were kept.
    pub fn ball_rate(&self, n: usize) -> Option<f64> {
        let b = self.ball_sizes.as_ref()?;
        Some((b[n - 1] as f64).powf(1.0 / n as f64))
    }
}

/// Enumerates `U^n` for `n = 1..=n_max` and records the sizes.
pub fn growth_table(
    u: &WordSet,
    n_max: u32,
    with_balls: bool,
    caps: &EnumerationCaps,
) -> Result<GrowthTable, GrowthError> {
    assert!(n_max >= 1);
    let mut sizes = Vec::with_capacity(n_max as usize);
    let mut ball: Option<std::collections::BTreeSet<GroupWord>> = if with_balls {
        let mut b = std::collections::BTreeSet::new();
        b.insert(GroupWord::identity(u.graph()));
        Some(b)
    } else {
        None
    };
    let mut ball_sizes = Vec::new();
    let mut current = u.clone();
    for n in 1..=n_max {
        if n > 1 {
            current = product_step(&current, u, caps)?;
        }
        sizes.push(current.len());
        if let Some(b) = ball.as_mut() {
            b.extend(current.iter().cloned());
            if b.len() > caps.max_elements {
                return Err(GrowthError::ElementCapExceeded {
                    count: b.len(),
                    cap: caps.max_elements,
                });
            }
            ball_sizes.push(b.len());
        }
    }
    Ok(GrowthTable {
        base_size: u.len(),
        sizes,
        ball_sizes: ball.map(|_| ball_sizes),
    })
}

/// Exponent regime for the growth inequality.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ExponentMode {
    /// `e(n) = β·n`.
    Linear,
    /// `e(n) = ⌊(n+1)/2⌋`; `β` is ignored.
    HalfFloor,
}

/// Parameters of the inequality `|U^n| ≥ (α|U|)^{e(n)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthParams {
    pub alpha: BigRational,
    pub beta: BigRational,
    pub mode: ExponentMode,
}

impl GrowthParams {
    pub fn new(alpha: BigRational, beta: BigRational, mode: ExponentMode) -> Self {
        assert!(alpha.is_positive() && beta.is_positive());
        GrowthParams { alpha, beta, mode }
    }

    /// Exponent `e(n)` as an exact rational.
    pub fn exponent(&self, n: u32) -> BigRational {
        match self.mode {
            ExponentMode::Linear => &self.beta * BigRational::from_integer(BigInt::from(n)),
            ExponentMode::HalfFloor => BigRational::from_integer(BigInt::from(n.div_ceil(2))),
        }
    }
}

/// Per-n verdict of the growth inequality.
#[derive(Debug, Clone, Serialize)]
pub struct InequalityVerdict {
    pub n: u32,
    pub size: usize,
    /// `(α|U|)^{e(n)}` as a float, for reporting.
    pub rhs: f64,
    pub holds: bool,
}

const LOG_REL_TOL: f64 = 1e-9;

/// Compares `size ≥ base^exponent` in the log domain with relative
/// tolerance `1e-9`. When `base ≤ 1` the inequality holds outright, with
/// no floating arithmetic; integer exponents of moderate size are compared
/// exactly.
fn holds_geq(size: usize, base: &BigRational, exponent: &BigRational) -> bool {
    if *base <= BigRational::one() {
        return true;
    }
    if size == 0 {
        return false;
    }
    if exponent.is_integer() {
        if let Some(e) = exponent.to_integer().to_u32() {
            if e <= 4096 {
                let rhs = pow_rational(base, e);
                return BigRational::from_integer(BigInt::from(size)) >= rhs;
            }
        }
    }
    let lhs = (size as f64).ln();
    let rhs =
        exponent.to_f64().unwrap_or(f64::INFINITY) * base.to_f64().unwrap_or(f64::INFINITY).ln();
    let tol = LOG_REL_TOL * lhs.abs().max(rhs.abs()).max(1.0);
    lhs >= rhs - tol
}

pub(crate) fn pow_rational(base: &BigRational, e: u32) -> BigRational {
    let mut acc = BigRational::one();
    for _ in 0..e {
        acc *= base;
    }
    acc
}

/// Checks `|U^n| ≥ (α|U|)^{e(n)}` for every row of the table.
pub fn check_inequality(table: &GrowthTable, params: &GrowthParams) -> Vec<InequalityVerdict> {
    let alpha_u = &params.alpha * BigRational::from_integer(BigInt::from(table.base_size));
    (1..=table.n_max() as u32)
        .map(|n| {
            let e = params.exponent(n);
            let size = table.size(n as usize);
            let rhs = alpha_u
                .to_f64()
                .map(|b| b.powf(e.to_f64().unwrap_or(f64::NAN)))
                .unwrap_or(f64::NAN);
            InequalityVerdict {
                n,
                size,
                rhs,
                holds: holds_geq(size, &alpha_u, &e),
            }
        })
        .collect()
}

/// One row of the small-tripling propagation check.
#[derive(Debug, Clone, Serialize)]
pub struct TriplingRow {
    pub n: u32,
    pub size: usize,
    /// `(8K³)^{n-2}|U|` as a float, for reporting.
    pub bound: f64,
    /// `bound / size`; at least 1 whenever the row holds.
    pub margin: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TriplingReport {
    /// `K = |U³| / |U|`.
    pub k: f64,
    pub rows: Vec<TriplingRow>,
    pub all_hold: bool,
}

/// With `K := |U³|/|U|`, asserts `|U^n| ≤ (8K³)^{n−2}|U|` for
/// `3 ≤ n ≤ n_max`, by exact rational comparison.
pub fn tripling_check(table: &GrowthTable) -> TriplingReport {
    assert!(table.n_max() >= 3, "tripling check needs n_max >= 3");
    let u1 = BigRational::from_integer(BigInt::from(table.size(1)));
    let u3 = BigRational::from_integer(BigInt::from(table.size(3)));
    let k = &u3 / &u1;
    let factor = BigRational::from_integer(BigInt::from(8)) * pow_rational(&k, 3);
    let mut rows = Vec::new();
    let mut all_hold = true;
    for n in 3..=table.n_max() as u32 {
        let bound = pow_rational(&factor, n - 2) * &u1;
        let size = table.size(n as usize);
        let holds = BigRational::from_integer(BigInt::from(size)) <= bound;
        all_hold &= holds;
        rows.push(TriplingRow {
            n,
            size,
            bound: bound.to_f64().unwrap_or(f64::INFINITY),
            margin: (&bound / BigRational::from_integer(BigInt::from(size.max(1))))
                .to_f64()
                .unwrap_or(f64::INFINITY),
            holds,
        });
    }
    TriplingReport {
        k: k.to_f64().unwrap_or(f64::NAN),
        rows,
        all_hold,
    }
}

/// Is `U² ⊆ XU`? Both sides enumerated with canonical deduplication.
/// `u` must be symmetric.
pub fn approx_witness_check(
    u: &WordSet,
    x: &WordSet,
    caps: &EnumerationCaps,
) -> Result<bool, GrowthError> {
    if !u.is_symmetric() {
        return Err(GrowthError::NotSymmetric);
    }
    let u2 = product_set(u, 2, caps)?;
    let xu = product_step(x, u, caps)?;
    let contained = u2.iter().all(|w| xu.contains(w));
    Ok(contained)
}

/// Projections of `U` to the maximal direct-product factors of `A(Γ)`.
#[derive(Debug, Clone, Serialize)]
pub struct ProjectionReport {
    pub factors: Vec<Vec<String>>,
    #[serde(skip)]
    pub factor_sets: Vec<VertexSet>,
    #[serde(skip)]
    pub projections: Vec<WordSet>,
    pub projection_sizes: Vec<usize>,
    pub max_size: usize,
    /// `max|Uᵢ| ≥ |U|^{1/m}`, checked exactly as `maxᵐ ≥ |U|`.
    pub holds: bool,
}

/// Deletes every letter outside `factor`; a homomorphism onto the factor
/// when the graph splits as a join.
pub fn project_word(w: &GroupWord, factor: &VertexSet) -> GroupWord {
    let mask = factor.mask();
    let letters: Vec<_> = w
        .letters()
        .iter()
        .copied()
        .filter(|l| mask & (1u64 << l.vertex()) != 0)
        .collect();
    GroupWord::normal_form(w.graph(), &letters)
}

/// Splits `A(Γ) = A(Γ₁) × ⋯ × A(Γ_m)` along the maximal join
/// decomposition and projects `U` to every factor. Errors when the
/// complement of `Γ` is connected (no direct-product splitting).
pub fn projection_analysis(u: &WordSet) -> Result<ProjectionReport, GrowthError> {
    let graph = u.graph();
    let factors = graph.join_decomposition();
    if factors.len() < 2 {
        return Err(GrowthError::NotAProduct);
    }
    let projections: Vec<WordSet> = factors
        .iter()
        .map(|f| WordSet::new(graph, u.iter().map(|w| project_word(w, f))))
        .collect();
    let sizes: Vec<usize> = projections.iter().map(WordSet::len).collect();
    let max_size = sizes.iter().copied().max().unwrap_or(0);
    let holds = BigInt::from(max_size).pow(factors.len() as u32) >= BigInt::from(u.len());
    Ok(ProjectionReport {
        factors: factors
            .iter()
            .map(|f| f.iter().map(|v| graph.vertex_name(v).to_owned()).collect())
            .collect(),
        factor_sets: factors,
        projection_sizes: sizes,
        projections,
        max_size,
        holds,
    })
}

/// Result of the constructive counterexample search in `F₂ × Z`.
#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub k: u32,
    pub n: u32,
    pub set_size: usize,
    pub sizes: Vec<usize>,
    #[serde(skip)]
    pub set: WordSet,
}

/// The ambient group of the counterexample family: `A(Γ)` for `Γ` the
/// path with centre `c`, so `A(Γ) = F₂(a,b) × Z(c)`.
pub fn counterexample_graph() -> Arc<DefiningGraph> {
    Arc::new(
        DefiningGraph::new(vec!["a", "b", "c"], &[(0, 2), (1, 2)]).expect("valid defining graph"),
    )
}

/// The generating set `U_k = {x·cⁱ : x ∈ {e,a,a⁻¹,b,b⁻¹}, |i| ≤ k}` of
/// `F₂ × Z`: a ball inflated in the non-exponential direction.
pub fn counterexample_set(graph: &Arc<DefiningGraph>, k: u32) -> WordSet {
    let a = GroupWord::generator(graph, 0, true);
    let b = GroupWord::generator(graph, 1, true);
    let c = GroupWord::generator(graph, 2, true);
    let xs = [
        GroupWord::identity(graph),
        a.clone(),
        a.inverse(),
        b.clone(),
        b.inverse(),
    ];
    let mut words = Vec::new();
    for x in &xs {
        for i in -(k as i64)..=k as i64 {
            let ci = if i >= 0 {
                c.pow(i as u32)
            } else {
                c.inverse().pow((-i) as u32)
            };
            words.push(x.multiply(&ci).expect("same graph"));
        }
    }
    WordSet::new(graph, words)
}

/// Searches the family `U_k` for a violation `|U^n| < (α|U|)^{e(n)}`,
/// taking `k` from `k_max` downward (the construction inflates the
/// non-exponential direction as far as allowed) and `n` upward. Returns
/// the first hit with its exact enumerated sizes, or `None` when every
/// candidate within the caps satisfies the inequality.
pub fn counterexample_search(
    params: &GrowthParams,
    k_max: u32,
    n_max: u32,
) -> Result<Option<Counterexample>, GrowthError> {
    let graph = counterexample_graph();
    let caps = EnumerationCaps {
        max_len: ((k_max as usize + 1) * n_max as usize + 8).max(64),
        max_elements: 5_000_000,
    };
    for k in (1..=k_max).rev() {
        let u = counterexample_set(&graph, k);
        let alpha_u = &params.alpha * BigRational::from_integer(BigInt::from(u.len()));
        if alpha_u <= BigRational::one() {
            continue; // the right-hand side never exceeds 1
        }
        let mut sizes = Vec::new();
        let mut current = u.clone();
        for n in 1..=n_max {
            if n > 1 {
                current = product_step(&current, &u, &caps)?;
            }
            sizes.push(current.len());
            let e = params.exponent(n);
            if !holds_geq(current.len(), &alpha_u, &e) {
                return Ok(Some(Counterexample {
                    k,
                    n,
                    set_size: u.len(),
                    sizes,
                    set: u,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;
    use crate::oracle;

    fn f2_gens() -> (Arc<DefiningGraph>, WordSet) {
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
        (f2, gens)
    }

    #[test]
    fn f2_generator_products() {
        let (_, gens) = f2_gens();
        let caps = EnumerationCaps::default();
        assert_eq!(product_set(&gens, 2, &caps).unwrap().len(), 13);
        assert_eq!(product_set(&gens, 3, &caps).unwrap().len(), 40);
    }

    #[test]
    fn identity_products_stay_trivial() {
        let f2 = DefiningGraph::free(2);
        let u = WordSet::new(&f2, [GroupWord::identity(&f2)]);
        let caps = EnumerationCaps::default();
        for n in 1..=4 {
            assert_eq!(product_set(&u, n, &caps).unwrap().len(), 1);
        }
    }

    #[test]
    fn ball_growth_matches_bfs_oracle() {
        let (f2, gens) = f2_gens();
        let caps = EnumerationCaps::default();
        let ball = WordSet::new(&f2, gens.iter().cloned().chain([GroupWord::identity(&f2)]));
        let t = growth_table(&ball, 3, true, &caps).unwrap();
        // For U = B(1), U^n = B(n): 2·3^n − 1.
        assert_eq!(t.ball_sizes.as_ref().unwrap(), &vec![5, 17, 53]);
        assert_eq!(t.sizes, vec![5, 17, 53]);
        assert_eq!(oracle::cayley_ball_sizes(&f2, 3), vec![5, 17, 53]);
    }

    #[test]
    fn plain_generators_table() {
        let (_, gens) = f2_gens();
        let caps = EnumerationCaps::default();
        let t = growth_table(&gens, 3, true, &caps).unwrap();
        assert_eq!(t.sizes, vec![4, 13, 40]);
        assert_eq!(t.ball_sizes.as_ref().unwrap(), &vec![5, 17, 53]);
    }

    #[test]
    fn caps_are_hard_errors() {
        let (_, gens) = f2_gens();
        let caps = EnumerationCaps {
            max_len: 2,
            max_elements: 5_000_000,
        };
        assert!(matches!(
            product_set(&gens, 3, &caps),
            Err(GrowthError::LengthCapExceeded { .. })
        ));
        let caps = EnumerationCaps {
            max_len: 64,
            max_elements: 10,
        };
        assert!(matches!(
            product_set(&gens, 2, &caps),
            Err(GrowthError::ElementCapExceeded { .. })
        ));
    }

    #[test]
    fn safin_rhs_below_one_always_holds() {
        let t = GrowthTable {
            base_size: 4,
            sizes: vec![4, 13, 40],
            ball_sizes: None,
        };
        let p = GrowthParams::new(
            BigRational::new(BigInt::from(1), BigInt::from(372)),
            BigRational::one(),
            ExponentMode::HalfFloor,
        );
        assert!(check_inequality(&t, &p).iter().all(|v| v.holds));
    }

    #[test]
    fn counterexample_sizes_fail_linear_inequality() {
        let t = GrowthTable {
            base_size: 105,
            sizes: vec![105, 697],
            ball_sizes: None,
        };
        let p = GrowthParams::new(BigRational::one(), BigRational::one(), ExponentMode::Linear);
        let v = check_inequality(&t, &p);
        assert!(v[0].holds);
        assert!(!v[1].holds, "697 < 105^2");
    }

    #[test]
    fn tripling_on_z_interval() {
        // U = {a^i : |i| ≤ 5} in Z: |U^n| = 10n + 1.
        let z = DefiningGraph::free(1);
        let a = GroupWord::generator(&z, 0, true);
        let mut words = vec![GroupWord::identity(&z)];
        for i in 1..=5 {
            words.push(a.pow(i));
            words.push(a.inverse().pow(i));
        }
        let u = WordSet::new(&z, words);
        let caps = EnumerationCaps::default();
        let t = growth_table(&u, 5, false, &caps).unwrap();
        assert_eq!(t.sizes, vec![11, 21, 31, 41, 51]);
        let rep = tripling_check(&t);
        assert!(rep.all_hold);
        assert!((rep.k - 31.0 / 11.0).abs() < 1e-12);
    }

    #[test]
    fn tripling_on_identity_set() {
        let t = GrowthTable {
            base_size: 1,
            sizes: vec![1, 1, 1, 1],
            ball_sizes: None,
        };
        let rep = tripling_check(&t);
        assert!(rep.all_hold);
        assert_eq!(rep.k, 1.0);
    }

    #[test]
    fn approx_witness_examples() {
        let z = DefiningGraph::free(1);
        let a = GroupWord::generator(&z, 0, true);
        let u = WordSet::new(&z, [a.inverse(), GroupWord::identity(&z), a.clone()]);
        let caps = EnumerationCaps::default();
        assert!(approx_witness_check(&u, &u, &caps).unwrap());
        let x = WordSet::new(&z, [GroupWord::identity(&z)]);
        assert!(!approx_witness_check(&u, &x, &caps).unwrap());

        let (f2, gens) = f2_gens();
        assert!(approx_witness_check(&gens, &gens, &caps).unwrap());
        let asym = WordSet::new(&f2, [GroupWord::generator(&f2, 0, true)]);
        assert_eq!(
            approx_witness_check(&asym, &gens, &caps),
            Err(GrowthError::NotSymmetric)
        );
    }

    #[test]
    fn projection_on_c4() {
        let c4 = graph::c4();
        let u = WordSet::new(
            &c4,
            [
                GroupWord::parse(&c4, "a b").unwrap(),
                GroupWord::parse(&c4, "c b").unwrap(),
                GroupWord::parse(&c4, "a d").unwrap(),
            ],
        );
        let rep = projection_analysis(&u).unwrap();
        assert_eq!(rep.projection_sizes, vec![2, 2]);
        assert_eq!(rep.max_size, 2);
        assert!(rep.holds, "2 ≥ sqrt(3)");

        let single = WordSet::new(&c4, [GroupWord::parse(&c4, "a b").unwrap()]);
        let rep = projection_analysis(&single).unwrap();
        assert_eq!(rep.max_size, 1);
        assert!(rep.holds);

        let p4 = graph::p4();
        let u = WordSet::new(&p4, [GroupWord::parse(&p4, "a").unwrap()]);
        assert!(matches!(
            projection_analysis(&u),
            Err(GrowthError::NotAProduct)
        ));
    }

    #[test]
    fn projection_is_homomorphism() {
        let c4 = graph::c4();
        let (factor, _) = c4.join_factors().unwrap();
        let words = ["a b c", "d a^-1 b", "c c b^-1"];
        for x in words {
            for y in words {
                let u = GroupWord::parse(&c4, x).unwrap();
                let v = GroupWord::parse(&c4, y).unwrap();
                let lhs = project_word(&u.multiply(&v).unwrap(), &factor);
                let rhs = project_word(&u, &factor)
                    .multiply(&project_word(&v, &factor))
                    .unwrap();
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn counterexample_family_sizes() {
        let g = counterexample_graph();
        let u10 = counterexample_set(&g, 10);
        assert_eq!(u10.len(), 105);
        let caps = EnumerationCaps {
            max_len: 64,
            max_elements: 5_000_000,
        };
        let sq = product_set(&u10, 2, &caps).unwrap();
        assert_eq!(sq.len(), 697);
    }

    #[test]
    fn counterexample_search_alpha_one() {
        let p = GrowthParams::new(BigRational::one(), BigRational::one(), ExponentMode::Linear);
        let hit = counterexample_search(&p, 10, 4).unwrap().unwrap();
        assert_eq!((hit.k, hit.n, hit.set_size), (10, 2, 105));
        assert_eq!(hit.sizes, vec![105, 697]);
    }

    #[test]
    fn counterexample_search_absent_for_tiny_alpha() {
        let p = GrowthParams::new(
            BigRational::new(BigInt::from(1), BigInt::from(1_000_000)),
            BigRational::one(),
            ExponentMode::Linear,
        );
        assert!(counterexample_search(&p, 10, 3).unwrap().is_none());
    }

    #[test]
    fn submultiplicative_sizes() {
        let (_, gens) = f2_gens();
        let caps = EnumerationCaps::default();
        let t = growth_table(&gens, 5, false, &caps).unwrap();
        for m in 1..=4usize {
            for n in 1..=(5 - m) {
                assert!(t.size(m + n) <= t.size(m) * t.size(n));
            }
        }
    }

    #[test]
    fn products_monotone_when_identity_present() {
        let g = counterexample_graph();
        let u = counterexample_set(&g, 2); // contains e
        let caps = EnumerationCaps::default();
        let mut prev = product_set(&u, 1, &caps).unwrap();
        for n in 2..=3 {
            let next = product_set(&u, n, &caps).unwrap();
            assert!(prev.iter().all(|w| next.contains(w)));
            prev = next;
        }
    }
}
