//! Product set growth experiments in right-angled Artin groups.
//!
//! For a finite subset `U` of a group, the n-th product set is
//! `U^n = {u₁⋯uₙ : uᵢ ∈ U}`. This crate implements the combinatorics
//! needed to study lower bounds of the form `|U^n| ≥ (α|U|)^{βn}` in
//! right-angled Artin groups `A(Γ)`, free groups, and free actions on
//! Cayley trees:
//!
//! - defining graphs with join/star/clique analysis ([`graph`]),
//! - canonical normal forms, cyclic reduction and primitive roots
//!   ([`word`]),
//! - product-set enumeration, growth tables, inequality verdicts,
//!   projections and a constructive counterexample family ([`growth`]),
//! - the derived-constant calculators for growth bound propagation
//!   ([`bounds`]),
//! - loxodromic detection on extension graphs and Bass–Serre trees, with
//!   the short-loxodromic search and subset classification ([`lox`]),
//! - tree geometry: Gromov products, energy basepoints, displacement,
//!   translation lengths and the direction-separating reduction partition ([`tree`]).
//!
//! The `psg` binary exposes everything as subcommands; `suite` runs the
//! full seeded verification battery ([`suite`]). Each capability also has
//! a runnable walkthrough under `examples/`.

pub mod bounds;
pub mod cli;
pub mod graph;
pub mod growth;
pub mod lox;
pub mod oracle;
pub mod suite;
pub mod tree;
pub mod word;

pub use graph::{parse_graph, DefiningGraph, VertexSet};
pub use word::{GroupWord, Letter, WordSet};
