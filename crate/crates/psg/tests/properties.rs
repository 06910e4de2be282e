//! Property tests: structural invariants on random inputs.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

use psg::graph::{DefiningGraph, VertexSet};
use psg::growth::{
    counterexample_search, growth_table, product_set, project_word, tripling_check,
    EnumerationCaps, ExponentMode, GrowthParams,
};
use psg::oracle;
use psg::tree;
use psg::word::{GroupWord, Letter, WordSet};

/// Random simple graph on 1..=6 vertices, as (vertex count, edge bits).
fn graph_strategy() -> impl Strategy<Value = Arc<DefiningGraph>> {
    (1usize..=6, any::<u32>()).prop_map(|(nv, bits)| {
        let pairs: Vec<(usize, usize)> = (0..nv)
            .flat_map(|i| ((i + 1)..nv).map(move |j| (i, j)))
            .collect();
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(k, _)| bits >> k & 1 == 1)
            .map(|(_, &p)| p)
            .collect();
        let names: Vec<String> = (0..nv).map(|i| format!("v{i}")).collect();
        Arc::new(DefiningGraph::new(names, &edges).expect("valid graph"))
    })
}

fn raw_word(nv: usize, max_len: usize) -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec(((0..nv), any::<bool>()), 0..=max_len)
}

fn to_letters(raw: &[(usize, bool)]) -> Vec<Letter> {
    raw.iter().map(|&(v, s)| Letter::new(v, s)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn complement_is_an_involution(g in graph_strategy()) {
        prop_assert_eq!(g.complement().complement(), (*g).clone());
    }

    #[test]
    fn clique_size_monotone_under_induced(g in graph_strategy(), mask in any::<u64>()) {
        let mask = mask & g.full_mask();
        prop_assume!(mask != 0);
        let sub = g.induced(&VertexSet::from_mask(mask));
        prop_assert!(g.max_clique_size().unwrap() >= sub.max_clique_size().unwrap());
    }

    #[test]
    fn normal_form_matches_rewriting_oracle(
        g in graph_strategy(),
        raw in raw_word(6, 7),
    ) {
        let raw: Vec<Letter> = raw.iter().map(|&(v, s)| Letter::new(v % g.len(), s)).collect();
        let fast = GroupWord::normal_form(&g, &raw);
        let brute = oracle::rewriting_normal_form(&g, &raw);
        prop_assert_eq!(fast.letters(), brute.as_slice());
        // Idempotence on the canonical form.
        prop_assert_eq!(GroupWord::normal_form(&g, fast.letters()), fast);
    }

    #[test]
    fn inverse_roundtrip_and_support(
        g in graph_strategy(),
        raw in raw_word(6, 8),
    ) {
        let raw: Vec<Letter> = raw.iter().map(|&(v, s)| Letter::new(v % g.len(), s)).collect();
        let w = GroupWord::normal_form(&g, &raw);
        prop_assert!(w.multiply(&w.inverse()).unwrap().is_identity());
        prop_assert_eq!(w.support(), w.inverse().support());
    }

    #[test]
    fn cyclic_core_is_idempotent_and_conjugate(
        g in graph_strategy(),
        raw in raw_word(6, 8),
    ) {
        let raw: Vec<Letter> = raw.iter().map(|&(v, s)| Letter::new(v % g.len(), s)).collect();
        let w = GroupWord::normal_form(&g, &raw);
        let dec = w.cyclic_reduce();
        prop_assert_eq!(dec.core.conjugate_by(&dec.conjugator).unwrap(), w);
        prop_assert_eq!(dec.core.cyclic_reduce().core.len(), dec.core.len());
    }

    #[test]
    fn free_group_parity(a in raw_word(2, 8), b in raw_word(2, 8)) {
        let f2 = DefiningGraph::free(2);
        let u = GroupWord::normal_form(&f2, &to_letters(&a));
        let v = GroupWord::normal_form(&f2, &to_letters(&b));
        let p = u.multiply(&v).unwrap();
        prop_assert_eq!((u.len() + v.len()) % 2, p.len() % 2);
    }

    #[test]
    fn product_sizes_submultiplicative(words in prop::collection::vec(raw_word(2, 3), 1..=4)) {
        let f2 = DefiningGraph::free(2);
        let u = WordSet::new(&f2, words.iter().map(|r| GroupWord::normal_form(&f2, &to_letters(r))));
        let caps = EnumerationCaps::default();
        let t = growth_table(&u, 4, false, &caps).unwrap();
        for m in 1..=3usize {
            for n in 1..=(4 - m) {
                prop_assert!(t.size(m + n) <= t.size(m) * t.size(n));
            }
        }
    }

    #[test]
    fn tripling_bound_always_holds(words in prop::collection::vec(raw_word(2, 3), 1..=5)) {
        let f2 = DefiningGraph::free(2);
        let u = WordSet::new(&f2, words.iter().map(|r| GroupWord::normal_form(&f2, &to_letters(r))));
        let caps = EnumerationCaps::default();
        let t = growth_table(&u, 5, false, &caps).unwrap();
        prop_assert!(tripling_check(&t).all_hold);
    }

    #[test]
    fn projection_is_homomorphism_on_c4(a in raw_word(4, 6), b in raw_word(4, 6)) {
        let c4 = psg::graph::c4();
        let (factor, _) = c4.join_factors().unwrap();
        let u = GroupWord::normal_form(&c4, &to_letters(&a));
        let v = GroupWord::normal_form(&c4, &to_letters(&b));
        let lhs = project_word(&u.multiply(&v).unwrap(), &factor);
        let rhs = project_word(&u, &factor).multiply(&project_word(&v, &factor)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn translation_length_is_homogeneous(raw in raw_word(2, 6), n in 1u32..=10) {
        let f2 = DefiningGraph::free(2);
        let g = GroupWord::normal_form(&f2, &to_letters(&raw));
        let tau = tree::stable_translation_length(&g).unwrap();
        prop_assert_eq!(tree::stable_translation_length(&g.pow(n)).unwrap(), n as usize * tau);
    }

    #[test]
    fn gromov_product_is_distance_to_median(
        x in raw_word(2, 5),
        y in raw_word(2, 5),
        b in raw_word(2, 5),
    ) {
        let f2 = DefiningGraph::free(2);
        let x = GroupWord::normal_form(&f2, &to_letters(&x));
        let y = GroupWord::normal_form(&f2, &to_letters(&y));
        let b = GroupWord::normal_form(&f2, &to_letters(&b));
        let m = tree::median(&x, &y, &b);
        prop_assert_eq!(tree::gromov_product_x2(&x, &y, &b), 2 * tree::distance(&b, &m));
    }

    #[test]
    fn loxodromic_verdict_is_conjugation_invariant(
        raw in raw_word(4, 6),
        h in raw_word(4, 4),
    ) {
        let p4 = psg::graph::p4();
        let u = GroupWord::normal_form(&p4, &to_letters(&raw));
        let h = GroupWord::normal_form(&p4, &to_letters(&h));
        let conj = u.conjugate_by(&h).unwrap();
        prop_assert_eq!(
            psg::lox::is_loxodromic(&u).status_str(),
            psg::lox::is_loxodromic(&conj).status_str()
        );
    }
}

#[test]
fn gromov_median_identity_exhaustive_short() {
    // Exhaustive over all triples of words of length ≤ 3 in F2.
    let f2 = DefiningGraph::free(2);
    let mut ball = vec![GroupWord::identity(&f2)];
    let gens: Vec<GroupWord> = (0..2)
        .flat_map(|v| {
            [
                GroupWord::generator(&f2, v, true),
                GroupWord::generator(&f2, v, false),
            ]
        })
        .collect();
    let mut frontier = ball.clone();
    for _ in 0..3 {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let p = w.multiply(g).unwrap();
                if !ball.contains(&p) {
                    ball.push(p.clone());
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    assert_eq!(ball.len(), 53);
    for x in &ball {
        for y in &ball {
            for b in &ball {
                let m = tree::median(x, y, b);
                assert_eq!(tree::gromov_product_x2(x, y, b), 2 * tree::distance(b, &m));
            }
        }
    }
}

#[test]
fn ball_sizes_match_closed_form_and_bfs() {
    // |B(n)| = 1 + Σ_{i=1..n} 2k(2k−1)^{i−1} in the free group F_k.
    for (k, n_max) in [(2usize, 6u32), (3, 5)] {
        let graph = DefiningGraph::free(k);
        let ball1 = WordSet::new(
            &graph,
            (0..k)
                .flat_map(|v| {
                    [
                        GroupWord::generator(&graph, v, true),
                        GroupWord::generator(&graph, v, false),
                    ]
                })
                .chain([GroupWord::identity(&graph)]),
        );
        let caps = EnumerationCaps::default();
        let table = growth_table(&ball1, n_max, true, &caps).unwrap();
        let bfs = oracle::cayley_ball_sizes(&graph, n_max as usize);
        for n in 1..=n_max as usize {
            let formula: usize = 1 + (1..=n)
                .map(|i| 2 * k * (2 * k - 1).pow(i as u32 - 1))
                .sum::<usize>();
            assert_eq!(table.ball_sizes.as_ref().unwrap()[n - 1], formula);
            assert_eq!(bfs[n - 1], formula);
        }
    }
}

#[test]
fn normal_form_constant_on_rewriting_classes() {
    // Every member of a rewriting-equivalence class canonicalizes to the
    // same word.
    let p4 = psg::graph::p4();
    for raw_text in ["d c b a", "a c a^-1 b", "b a d a^-1 c", "a b b^-1 d c"] {
        let w = GroupWord::parse(&p4, raw_text).unwrap();
        let class = oracle::rewriting_class(&p4, w.letters());
        for member in class.iter() {
            assert_eq!(
                GroupWord::normal_form(&p4, member),
                w,
                "member {member:?} of the class of {raw_text}"
            );
        }
    }
}

#[test]
fn counterexample_sizes_survive_reenumeration() {
    // Post-hoc re-enumeration of the returned sizes with a fresh run.
    let params = GrowthParams::new(BigRational::one(), BigRational::one(), ExponentMode::Linear);
    let hit = counterexample_search(&params, 6, 3).unwrap().expect("violation exists");
    let caps = EnumerationCaps {
        max_len: 256,
        max_elements: 5_000_000,
    };
    for n in 1..=hit.n {
        let fresh = product_set(&hit.set, n, &caps).unwrap();
        assert_eq!(fresh.len(), hit.sizes[n as usize - 1]);
    }
}

#[test]
fn energy_basepoint_matches_ball_exhaustive_oracle() {
    // Seeded small sets with total length ≤ 30: the hull-restricted
    // minimizer achieves the global ball minimum.
    use rand::{Rng, SeedableRng};
    let f2 = DefiningGraph::free(2);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..12 {
        let n_words = rng.random_range(1..=5);
        let words: Vec<GroupWord> = (0..n_words)
            .map(|_| {
                let len = rng.random_range(1..=6);
                let letters: Vec<Letter> = (0..len)
                    .map(|_| Letter::new(rng.random_range(0..2), rng.random_bool(0.5)))
                    .collect();
                GroupWord::normal_form(&f2, &letters)
            })
            .collect();
        let u = WordSet::new(&f2, words);
        if u.total_length() > 30 {
            continue;
        }
        let radius = u.max_length();
        let report = tree::energy_basepoint(&u).unwrap();
        let (_, brute_sum) = oracle::energy_brute(&u, radius);
        assert_eq!(
            report.total_displacement, brute_sum,
            "hull minimizer must match the ball-exhaustive minimum"
        );
    }
}

#[test]
fn safin_holds_on_small_noncyclic_free_sets() {
    use rand::{Rng, SeedableRng};
    let params = GrowthParams::new(
        BigRational::new(1.into(), 372.into()),
        BigRational::one(),
        ExponentMode::HalfFloor,
    );
    let f2 = DefiningGraph::free(2);
    let caps = EnumerationCaps::default();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let mut tested = 0;
    while tested < 25 {
        let n_words = rng.random_range(1..=3);
        let words: Vec<GroupWord> = (0..n_words)
            .map(|_| {
                let len = rng.random_range(1..=3);
                let letters: Vec<Letter> = (0..len)
                    .map(|_| Letter::new(rng.random_range(0..2), rng.random_bool(0.5)))
                    .collect();
                GroupWord::normal_form(&f2, &letters)
            })
            .collect();
        let u = WordSet::new(&f2, words).symmetric_closure();
        if u.is_empty() || psg::lox::common_primitive_root(&u).unwrap().is_some() {
            continue;
        }
        let t = growth_table(&u, 5, false, &caps).unwrap();
        assert!(psg::growth::check_inequality(&t, &params)
            .iter()
            .all(|v| v.holds));
        tested += 1;
    }
}
