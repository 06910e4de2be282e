//! The `psg` command line: every operation as a subcommand over files.
//!
//! Inputs are graph files and word-set files; outputs are text, CSV, or
//! JSON reports that embed the input hashes and the resolved flag set, so
//! every number in a report can be recomputed from the report alone.
//!
//! Exit codes: 0 success; 1 a checker's verdict is false; 2 usage or
//! parse errors; 3 an enumeration cap was exceeded.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use num_rational::BigRational;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::bounds::{bound_calculator, parse_rational, BoundRequest, BoundsError};
use crate::graph::{parse_graph, DefiningGraph, GraphError, DEFAULT_SUBJOIN_CAP};
use crate::growth::{
    approx_witness_check, check_inequality, counterexample_search, growth_table,
    projection_analysis, tripling_check, EnumerationCaps, ExponentMode, GrowthError, GrowthParams,
};
use crate::lox::{classify_subset, is_loxodromic, short_loxodromic, LoxError, ShortLoxOutcome};
use crate::suite::{run_battery, DEFAULT_SEED};
use crate::tree::{energy_basepoint, reduction_partition, ActionConstants, PartitionOutcome, TreeError};
use crate::word::{GroupWord, WordError, WordSet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERDICT_FALSE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAP_EXCEEDED: i32 = 3;

const USAGE: &str = "\
psg — product set growth in right-angled Artin groups

Usage: psg <subcommand> [flags]

Subcommands:
  graph          --graph FILE [--oracle-cap N]        graph analysis
  reduce         --graph FILE --word W                canonical normal form
  loxo           --graph FILE --word W                loxodromic verdict
  shortlox       --graph FILE --set FILE --ncap N     short loxodromic search
  classify       --graph FILE --set FILE [...]        full subset report (JSON)
  growth         --graph FILE --set FILE --nmax N --alpha A --beta B --mode M
  tripling       --graph FILE --set FILE --nmax N     small-tripling check
  bounds         TAG [--alpha --beta --k --m --d --size --delta --kappa0 --n0]
  approx         --graph FILE --set FILE --witness FILE
  project        --graph FILE --set FILE              factor projections
  counterexample --alpha A --beta B --kmax K --nmax N
  treeaction     --set FILE [--graph FILE --r R --kdisp K]
  suite          [--seed N]                           verification battery

Common flags: --format text|json|csv, --max-len N, --max-elements N.
Rationals accept p/q or decimals (e.g. --alpha 1/372).
Exit codes: 0 ok, 1 verdict false, 2 usage/parse error, 3 cap exceeded.
";

/// One finished invocation: what to print and how to exit.
#[derive(Debug, Clone)]
pub struct Invocation {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Invocation {
    fn ok(stdout: String) -> Self {
        Invocation {
            exit: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn verdict(stdout: String, all_hold: bool) -> Self {
        Invocation {
            exit: if all_hold { EXIT_OK } else { EXIT_VERDICT_FALSE },
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Debug)]
struct CliError {
    exit: i32,
    message: String,
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError {
            exit: EXIT_USAGE,
            message: msg.into(),
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        let exit = match e {
            GraphError::OracleCapExceeded { .. } => EXIT_CAP_EXCEEDED,
            _ => EXIT_USAGE,
        };
        CliError {
            exit,
            message: e.to_string(),
        }
    }
}

impl From<WordError> for CliError {
    fn from(e: WordError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<GrowthError> for CliError {
    fn from(e: GrowthError) -> Self {
        let exit = match e {
            GrowthError::LengthCapExceeded { .. } | GrowthError::ElementCapExceeded { .. } => {
                EXIT_CAP_EXCEEDED
            }
            _ => EXIT_USAGE,
        };
        CliError {
            exit,
            message: e.to_string(),
        }
    }
}

impl From<LoxError> for CliError {
    fn from(e: LoxError) -> Self {
        match e {
            LoxError::Growth(g) => g.into(),
            LoxError::Graph(g) => g.into(),
            other => CliError::usage(other.to_string()),
        }
    }
}

impl From<TreeError> for CliError {
    fn from(e: TreeError) -> Self {
        CliError::usage(e.to_string())
    }
}

impl From<BoundsError> for CliError {
    fn from(e: BoundsError) -> Self {
        CliError::usage(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Serialize)]
struct InputHash {
    role: &'static str,
    path: String,
    sha256: String,
}

/// Parsed flag set. Values are kept as strings; the resolved set is
/// echoed into every report.
struct Args {
    positional: Vec<String>,
    options: BTreeMap<String, String>,
    resolved: BTreeMap<String, String>,
}

impl Args {
    fn parse(args: &[String]) -> Result<Args, CliError> {
        let mut positional = Vec::new();
        let mut options = BTreeMap::new();
        let mut i = 0;
        while i < args.len() {
            let a = &args[i];
            if let Some(name) = a.strip_prefix("--") {
                if name.is_empty() {
                    return Err(CliError::usage("stray `--`"));
                }
                if name == "balls" {
                    options.insert(name.to_owned(), "true".to_owned());
                    i += 1;
                    continue;
                }
                let value = args
                    .get(i + 1)
                    .ok_or_else(|| CliError::usage(format!("flag --{name} needs a value")))?;
                options.insert(name.to_owned(), value.clone());
                i += 2;
            } else {
                positional.push(a.clone());
                i += 1;
            }
        }
        Ok(Args {
            positional,
            options,
            resolved: BTreeMap::new(),
        })
    }

    fn take(&mut self, name: &str) -> Option<String> {
        let v = self.options.remove(name);
        if let Some(v) = &v {
            self.resolved.insert(name.to_owned(), v.clone());
        }
        v
    }

    fn require(&mut self, name: &str) -> Result<String, CliError> {
        self.take(name)
            .ok_or_else(|| CliError::usage(format!("missing required flag --{name}")))
    }

    fn take_or(&mut self, name: &str, default: &str) -> String {
        let v = self.take(name).unwrap_or_else(|| default.to_owned());
        self.resolved.insert(name.to_owned(), v.clone());
        v
    }

    fn int(&mut self, name: &str) -> Result<u32, CliError> {
        let v = self.require(name)?;
        v.parse()
            .map_err(|_| CliError::usage(format!("--{name} expects an integer, got `{v}`")))
    }

    fn int_or(&mut self, name: &str, default: u32) -> Result<u32, CliError> {
        let v = self.take_or(name, &default.to_string());
        v.parse()
            .map_err(|_| CliError::usage(format!("--{name} expects an integer, got `{v}`")))
    }

    fn rational(&mut self, name: &str) -> Result<BigRational, CliError> {
        let v = self.require(name)?;
        Ok(parse_rational(&v)?)
    }

    fn rational_or(&mut self, name: &str, default: &str) -> Result<BigRational, CliError> {
        let v = self.take_or(name, default);
        Ok(parse_rational(&v)?)
    }

    fn format(&mut self, default: Format) -> Result<Format, CliError> {
        let d = match default {
            Format::Text => "text",
            Format::Json => "json",
            Format::Csv => "csv",
        };
        match self.take_or("format", d).as_str() {
            "text" => Ok(Format::Text),
            "json" => Ok(Format::Json),
            "csv" => Ok(Format::Csv),
            other => Err(CliError::usage(format!(
                "--format expects text|json|csv, got `{other}`"
            ))),
        }
    }

    fn caps(&mut self) -> Result<EnumerationCaps, CliError> {
        let d = EnumerationCaps::default();
        let max_len: usize = self
            .take_or("max-len", &d.max_len.to_string())
            .parse()
            .map_err(|_| CliError::usage("--max-len expects an integer"))?;
        let max_elements: usize = self
            .take_or("max-elements", &d.max_elements.to_string())
            .parse()
            .map_err(|_| CliError::usage("--max-elements expects an integer"))?;
        Ok(EnumerationCaps {
            max_len,
            max_elements,
        })
    }

    fn mode_or(&mut self, default: &str) -> Result<ExponentMode, CliError> {
        match self.take_or("mode", default).as_str() {
            "linear" => Ok(ExponentMode::Linear),
            "halffloor" | "half-floor" => Ok(ExponentMode::HalfFloor),
            other => Err(CliError::usage(format!(
                "--mode expects linear|halffloor, got `{other}`"
            ))),
        }
    }

    fn finish(&self) -> Result<(), CliError> {
        if let Some((name, _)) = self.options.iter().next() {
            return Err(CliError::usage(format!("unknown flag --{name}")));
        }
        Ok(())
    }
}

fn sha256_hex(bytes: &[u8]) -> String {
    let mut h = Sha256::new();
    h.update(bytes);
    let digest = h.finalize();
    let mut out = String::with_capacity(64);
    for b in digest {
        write!(out, "{b:02x}").expect("writing to string");
    }
    out
}

fn read_input(role: &'static str, path: &str) -> Result<(String, InputHash), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::usage(format!("cannot read {role} file `{path}`: {e}")))?;
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::usage(format!("{role} file `{path}` is not UTF-8")))?;
    let hash = InputHash {
        role,
        path: path.to_owned(),
        sha256: sha256_hex(text.as_bytes()),
    };
    Ok((text, hash))
}

fn load_graph(args: &mut Args) -> Result<(Arc<DefiningGraph>, InputHash), CliError> {
    let path = args.require("graph")?;
    let (text, hash) = read_input("graph", &path)?;
    Ok((Arc::new(parse_graph(&text)?), hash))
}

fn load_set(
    args: &mut Args,
    flag: &'static str,
    graph: &Arc<DefiningGraph>,
) -> Result<(WordSet, InputHash), CliError> {
    let path = args.require(flag)?;
    let (text, hash) = read_input(flag, &path)?;
    Ok((WordSet::parse(graph, &text)?, hash))
}

/// Free graph inferred from a set file: vertices in order of first
/// appearance, no edges.
fn infer_free_graph(text: &str) -> Result<Arc<DefiningGraph>, CliError> {
    let mut names: Vec<String> = Vec::new();
    let mut first = true;
    for raw in text.lines() {
        let line = raw.trim();
        if line.starts_with('#') {
            continue;
        }
        if first {
            first = false;
            if line.strip_prefix("symmetric:").is_some() {
                continue;
            }
        }
        for tok in line.split_whitespace() {
            let name = tok.strip_suffix("^-1").unwrap_or(tok);
            if !names.iter().any(|n| n == name) {
                names.push(name.to_owned());
            }
        }
    }
    if names.is_empty() {
        return Err(CliError::usage("set file names no generators"));
    }
    Ok(Arc::new(DefiningGraph::new(names, &[])?))
}

#[derive(Serialize)]
struct Envelope<T: Serialize> {
    schema: u32,
    command: String,
    inputs: Vec<InputHash>,
    flags: BTreeMap<String, String>,
    result: T,
}

fn json_report<T: Serialize>(
    command: &str,
    inputs: Vec<InputHash>,
    flags: &BTreeMap<String, String>,
    result: T,
) -> String {
    let envelope = Envelope {
        schema: 1,
        command: command.to_owned(),
        inputs,
        flags: flags.clone(),
        result,
    };
    let mut s = serde_json::to_string_pretty(&envelope).expect("serializable report");
    s.push('\n');
    s
}

fn text_header(out: &mut String, inputs: &[InputHash], flags: &BTreeMap<String, String>) {
    let _ = writeln!(out, "# schema: 1");
    for i in inputs {
        let _ = writeln!(out, "# {}: {} sha256={}", i.role, i.path, i.sha256);
    }
    for (k, v) in flags {
        let _ = writeln!(out, "# flag {k}: {v}");
    }
}

/// Parses argv (without the program name) and runs one subcommand.
pub fn execute(args: &[String]) -> Invocation {
    match dispatch(args) {
        Ok(inv) => inv,
        Err(e) => Invocation {
            exit: e.exit,
            stdout: String::new(),
            stderr: format!("error: {}\n", e.message),
        },
    }
}

/// Runs and prints; returns the exit code.
pub fn run(args: Vec<String>) -> i32 {
    let inv = execute(&args);
    print!("{}", inv.stdout);
    eprint!("{}", inv.stderr);
    inv.exit
}

fn dispatch(args: &[String]) -> Result<Invocation, CliError> {
    let Some(sub) = args.first() else {
        return Err(CliError::usage(USAGE));
    };
    let mut rest = Args::parse(&args[1..])?;
    let inv = match sub.as_str() {
        "graph" => cmd_graph(&mut rest)?,
        "reduce" => cmd_reduce(&mut rest)?,
        "loxo" => cmd_loxo(&mut rest)?,
        "shortlox" => cmd_shortlox(&mut rest)?,
        "classify" => cmd_classify(&mut rest)?,
        "growth" => cmd_growth(&mut rest)?,
        "tripling" => cmd_tripling(&mut rest)?,
        "bounds" => cmd_bounds(&mut rest)?,
        "approx" => cmd_approx(&mut rest)?,
        "project" => cmd_project(&mut rest)?,
        "counterexample" => cmd_counterexample(&mut rest)?,
        "treeaction" => cmd_treeaction(&mut rest)?,
        "suite" => cmd_suite(&mut rest)?,
        "help" | "--help" | "-h" => Invocation::ok(USAGE.to_owned()),
        other => {
            return Err(CliError::usage(format!(
                "unknown subcommand `{other}`\n\n{USAGE}"
            )))
        }
    };
    Ok(inv)
}

#[derive(Serialize)]
struct GraphReport {
    vertices: Vec<String>,
    edges: Vec<(String, String)>,
    connected: bool,
    components: Vec<Vec<String>>,
    join_factors: Option<(Vec<String>, Vec<String>)>,
    max_clique_size: usize,
    subjoin_count: Option<usize>,
}

fn cmd_graph(args: &mut Args) -> Result<Invocation, CliError> {
    let (g, hash) = load_graph(args)?;
    let oracle_cap: usize = args
        .take_or("oracle-cap", &DEFAULT_SUBJOIN_CAP.to_string())
        .parse()
        .map_err(|_| CliError::usage("--oracle-cap expects an integer"))?;
    let format = args.format(Format::Text)?;
    args.finish()?;
    let names = |vs: &crate::graph::VertexSet| -> Vec<String> {
        vs.iter().map(|i| g.vertex_name(i).to_owned()).collect()
    };
    let report = GraphReport {
        vertices: g.vertex_names().to_vec(),
        edges: g
            .edges()
            .iter()
            .map(|&(i, j)| (g.vertex_name(i).to_owned(), g.vertex_name(j).to_owned()))
            .collect(),
        connected: g.is_connected(),
        components: g.connected_components().iter().map(&names).collect(),
        join_factors: g.join_factors().map(|(a, b)| (names(&a), names(&b))),
        max_clique_size: g.max_clique_size()?,
        subjoin_count: if g.len() <= oracle_cap {
            Some(g.enumerate_subjoins(oracle_cap)?.len())
        } else {
            None
        },
    };
    let out = match format {
        Format::Json => json_report("graph", vec![hash], &args.resolved, report),
        _ => {
            let mut out = String::new();
            text_header(&mut out, &[hash], &args.resolved);
            let _ = writeln!(out, "vertices: {}", report.vertices.join(" "));
            let _ = writeln!(out, "edges: {}", report.edges.len());
            let _ = writeln!(out, "connected: {}", report.connected);
            let _ = writeln!(out, "components: {}", report.components.len());
            match &report.join_factors {
                Some((a, b)) => {
                    let _ = writeln!(out, "join: {{{}}} * {{{}}}", a.join(" "), b.join(" "));
                }
                None => {
                    let _ = writeln!(out, "join: none");
                }
            }
            let _ = writeln!(out, "max clique: {}", report.max_clique_size);
            match report.subjoin_count {
                Some(c) => {
                    let _ = writeln!(out, "subjoins: {c}");
                }
                None => {
                    let _ = writeln!(out, "subjoins: skipped (above oracle cap)");
                }
            }
            out
        }
    };
    Ok(Invocation::ok(out))
}

#[derive(Serialize)]
struct ReduceReport {
    canonical: GroupWord,
    length: usize,
    support: Vec<String>,
    conjugator: GroupWord,
    cyclic_core: GroupWord,
}

fn cmd_reduce(args: &mut Args) -> Result<Invocation, CliError> {
    let (g, hash) = load_graph(args)?;
    let word_text = args.require("word")?;
    let format = args.format(Format::Text)?;
    args.finish()?;
    let w = GroupWord::parse(&g, &word_text)?;
    let dec = w.cyclic_reduce();
    let report = ReduceReport {
        length: w.len(),
        support: w
            .support()
            .iter()
            .map(|i| g.vertex_name(i).to_owned())
            .collect(),
        canonical: w,
        conjugator: dec.conjugator,
        cyclic_core: dec.core,
    };
    let out = match format {
        Format::Json => json_report("reduce", vec![hash], &args.resolved, report),
        _ => {
            let mut out = String::new();
            text_header(&mut out, &[hash], &args.resolved);
            let _ = writeln!(out, "canonical: {}", report.canonical);
            let _ = writeln!(out, "length: {}", report.length);
            let _ = writeln!(out, "support: {{{}}}", report.support.join(" "));
            let _ = writeln!(out, "conjugator: {}", report.conjugator);
            let _ = writeln!(out, "cyclic core: {}", report.cyclic_core);
            out
        }
    };
    Ok(Invocation::ok(out))
}

fn cmd_loxo(args: &mut Args) -> Result<Invocation, CliError> {
    let (g, hash) = load_graph(args)?;
    let word_text = args.require("word")?;
    let format = args.format(Format::Text)?;
    args.finish()?;
    let w = GroupWord::parse(&g, &word_text)?;
    let verdict = is_loxodromic(&w);
    let out = match format {
        Format::Json => json_report("loxo", vec![hash], &args.resolved, &verdict),
        _ => {
            let mut out = String::new();
            text_header(&mut out, &[hash], &args.resolved);
            let _ = writeln!(out, "{}", verdict.status_str());
            let _ = writeln!(
                out,
                "witness: {}",
                serde_json::to_string(&verdict).expect("serializable verdict")
            );
            out
        }
    };
    Ok(Invocation::ok(out))
}

fn cmd_shortlox(args: &mut Args) -> Result<Invocation, CliError> {
    let (g, hash_g) = load_graph(args)?;
    let (set, hash_s) = load_set(args, "set", &g)?;
    let n_cap = args.int("ncap")?;
    let depth = args.int_or("depth", 2)?;
    let caps = args.caps()?;
    let format = args.format(Format::Text)?;
    args.finish()?;
    let outcome = short_loxodromic(&set, n_cap, depth, &caps)?;
    let out = match format {
        Format::Json => json_report(
            "shortlox",
            vec![hash_g, hash_s],
            &args.resolved,
            &outcome,
        ),
        _ => {
            let mut out = String::new();
            text_header(&mut out, &[hash_g, hash_s], &args.resolved);
            match &outcome {
                ShortLoxOutcome::Found { n, witness } => {
                    let _ = writeln!(out, "loxodromic at n = {n}: {witness}");
                }
                ShortLoxOutcome::NotApplicable { reason } => {
                    let _ = writeln!(out, "not_applicable: {reason}");
                }
                ShortLoxOutcome::Exhausted { n_cap } => {
                    let _ = writeln!(out, "none found for n ≤ {n_cap}");
                }
            }
            out
        }
    };
    Ok(Invocation::ok(out))
}

fn cmd_classify(args: &mut Args) -> Result<Invocation, CliError> {
    let (g, hash_g) = load_graph(args)?;
    let (set, hash_s) = load_set(args, "set", &g)?;
    let alpha = args.rational_or("alpha", "1/372")?;
    let beta = args.rational_or("beta", "1")?;
    let mode = args.mode_or("halffloor")?;
    let n_cap = args.int_or("ncap", 4)?;
    let depth = args.int_or("depth", 2)?;
    let caps = args.caps()?;
    args.take_or("format", "json");
    args.finish()?;
    let params = GrowthParams::new(alpha, beta, mode);
    let report = classify_subset(&set, &params, n_cap, depth, &caps)?;
    Ok(Invocation::ok(json_report(
        "classify",
        vec![hash_g, hash_s],
        &args.resolved,
        report,
    )))
}

fn cmd_growth(args: &mut Args) -> Result<Invocation, CliError> {
    let (g, hash_g) = load_graph(args)?;
    let (set, hash_s) = load_set(args, "set", &g)?;
    let n_max = args.int("nmax")?;
    let alpha = args.rational("alpha")?;
    let beta = args.rational_or("beta", "1")?;
    let mode = args.mode_or("linear")?;
    let with_balls = args.take("balls").is_some();
    if with_balls {
        args.resolved.insert("balls".into(), "true".into());
    }
    let caps = args.caps()?;
    let format = args.format(Format::Csv)?;
    args.finish()?;
    if set.is_empty() {
        return Err(CliError::usage("set file is empty"));
    }
    let params = GrowthParams::new(alpha, beta, mode);
    let table = growth_table(&set, n_max, with_balls, &caps)?;
    let verdicts = check_inequality(&table, &params);
    let all_hold = verdicts.iter().all(|v| v.holds);

    #[derive(Serialize)]
    struct GrowthReport<'a> {
        table: &'a crate::growth::GrowthTable,
        verdicts: &'a [crate::growth::InequalityVerdict],
        ball_rates: Vec<Option<f64>>,
        all_hold: bool,
    }
    let report = GrowthReport {
        table: &table,
        verdicts: &verdicts,
        ball_rates: (1..=table.n_max()).map(|n| table.ball_rate(n)).collect(),
        all_hold,
    };
    let out = match format {
        Format::Json => json_report("growth", vec![hash_g, hash_s], &args.resolved, report),
        _ => {
            let mut out = String::new();
            text_header(&mut out, &[hash_g, hash_s], &args.resolved);
            let _ = writeln!(out, "n,size,ball_size,rhs,verdict");
            for v in &verdicts {
                let ball = table
                    .ball_sizes
                    .as_ref()
                    .map(|b| b[v.n as usize - 1].to_string())
                    .unwrap_or_default();
                let _ = writeln!(out, "{},{},{},{},{}", v.n, v.size, ball, v.rhs, v.holds);
            }
            out
        }
    };
    Ok(Invocation::verdict(out, all_hold))
}

fn cmd_tripling(args: &mut Args) -> Result<Invocation, CliError> {
    let (g, hash_g) = load_graph(args)?;
    let (set, hash_s) = load_set(args, "set", &g)?;
    let n_max = args.int_or("nmax", 3)?;
    let caps = args.caps()?;
    let format = args.format(Format::Csv)?;
    args.finish()?;
    if n_max < 3 {
        return Err(CliError::usage("--nmax must be at least 3"));
    }
    if set.is_empty() {
        return Err(CliError::usage("set file is empty"));
    }
    let table = growth_table(&set, n_max, false, &caps)?;
    let report = tripling_check(&table);
    let all_hold = report.all_hold;
    let out = match format {
        Format::Json => json_report("tripling", vec![hash_g, hash_s], &args.resolved, &report),
        _ => {
            let mut out = String::new();
            text_header(&mut out, &[hash_g, hash_s], &args.resolved);
            let _ = writeln!(out, "# K = {}", report.k);
            let _ = writeln!(out, "n,size,bound,margin,verdict");
            for r in &report.rows {
                let _ = writeln!(out, "{},{},{},{},{}", r.n, r.size, r.bound, r.margin, r.holds);
            }
            out
        }
    };
    Ok(Invocation::verdict(out, all_hold))
}

fn cmd_bounds(args: &mut Args) -> Result<Invocation, CliError> {
    let tag = args
        .positional
        .first()
        .cloned()
        .ok_or_else(|| CliError::usage("bounds needs a calculator tag"))?;
    let request = match tag.as_str() {
        "helfgott" => BoundRequest::Helfgott {
            alpha: args.rational("alpha")?,
            beta: args.rational("beta")?,
            size: args.rational("size")?,
        },
        "approx" | "approx_bound" => BoundRequest::ApproxBound {
            k: args.rational("k")?,
            alpha: args.rational("alpha")?,
            beta: args.rational("beta")?,
        },
        "ueg" | "ueg_rate" => BoundRequest::UegRate {
            alpha: args.rational("alpha")?,
            beta: args.rational("beta")?,
            size: args.rational("size")?,
        },
        "factors" => BoundRequest::Factors {
            alpha: args.rational("alpha")?,
            beta: args.rational("beta")?,
            m: args.int("m")?,
        },
        "boundedtoone" | "bounded_to_one" => BoundRequest::BoundedToOne {
            alpha: args.rational("alpha")?,
            k: args.rational("k")?,
        },
        "supergroup" => BoundRequest::Supergroup {
            alpha: args.rational("alpha")?,
            beta: args.rational("beta")?,
            d: args.int("d")?,
        },
        "kchoice" => BoundRequest::KChoice {
            delta: args.rational("delta")?,
            kappa0: args.rational("kappa0")?,
            n0: args.rational("n0")?,
        },
        "shortlox" => BoundRequest::ShortLox {
            alpha: args.rational("alpha")?,
            beta: args.rational("beta")?,
            k: args.int("k")?,
        },
        other => {
            return Err(CliError::usage(format!(
                "unknown bounds tag `{other}`; expected one of helfgott, approx, ueg, factors, boundedtoone, supergroup, kchoice, shortlox"
            )))
        }
    };
    let format = args.format(Format::Text)?;
    args.finish()?;
    let result = bound_calculator(&request)?;
    let out = match format {
        Format::Json => json_report("bounds", Vec::new(), &args.resolved, &result),
        _ => {
            let mut out = String::new();
            text_header(&mut out, &[], &args.resolved);
            for (name, value) in &result.values {
                let _ = writeln!(out, "{name} = {value}");
            }
            out
        }
    };
    Ok(Invocation::ok(out))
}

fn cmd_approx(args: &mut Args) -> Result<Invocation, CliError> {
    let (g, hash_g) = load_graph(args)?;
    let (set, hash_s) = load_set(args, "set", &g)?;
    let (witness, hash_w) = load_set(args, "witness", &g)?;
    let caps = args.caps()?;
    let format = args.format(Format::Text)?;
    args.finish()?;
    let holds = approx_witness_check(&set, &witness, &caps)?;
    #[derive(Serialize)]
    struct ApproxReport {
        witness_size: usize,
        contained: bool,
    }
    let report = ApproxReport {
        witness_size: witness.len(),
        contained: holds,
    };
    let out = match format {
        Format::Json => json_report(
            "approx",
            vec![hash_g, hash_s, hash_w],
            &args.resolved,
            report,
        ),
        _ => {
            let mut out = String::new();
            text_header(&mut out, &[hash_g, hash_s, hash_w], &args.resolved);
            let _ = writeln!(out, "U^2 ⊆ XU: {holds}");
            out
        }
    };
    Ok(Invocation::verdict(out, holds))
}

fn cmd_project(args: &mut Args) -> Result<Invocation, CliError> {
    let (g, hash_g) = load_graph(args)?;
    let (set, hash_s) = load_set(args, "set", &g)?;
    let format = args.format(Format::Text)?;
    args.finish()?;
    if set.is_empty() {
        return Err(CliError::usage("set file is empty"));
    }
    let report = projection_analysis(&set)?;
    let holds = report.holds;
    let out = match format {
        Format::Json => json_report("project", vec![hash_g, hash_s], &args.resolved, &report),
        _ => {
            let mut out = String::new();
            text_header(&mut out, &[hash_g, hash_s], &args.resolved);
            for (f, size) in report.factors.iter().zip(&report.projection_sizes) {
                let _ = writeln!(out, "factor {{{}}}: projection size {size}", f.join(" "));
            }
            let _ = writeln!(
                out,
                "max projection {} vs |U|^(1/{}) with |U| = {}: {}",
                report.max_size,
                report.factors.len(),
                set.len(),
                report.holds
            );
            out
        }
    };
    Ok(Invocation::verdict(out, holds))
}

fn cmd_counterexample(args: &mut Args) -> Result<Invocation, CliError> {
    let alpha = args.rational("alpha")?;
    let beta = args.rational_or("beta", "1")?;
    let mode = args.mode_or("linear")?;
    let k_max = args.int("kmax")?;
    let n_max = args.int("nmax")?;
    let format = args.format(Format::Text)?;
    args.finish()?;
    let params = GrowthParams::new(alpha, beta, mode);
    let hit = counterexample_search(&params, k_max, n_max)?;
    let out = match format {
        Format::Json => json_report("counterexample", Vec::new(), &args.resolved, &hit),
        _ => {
            let mut out = String::new();
            text_header(&mut out, &[], &args.resolved);
            match &hit {
                Some(h) => {
                    let _ = writeln!(
                        out,
                        "violation: U_{} (|U| = {}) at n = {}; sizes {:?}",
                        h.k, h.set_size, h.n, h.sizes
                    );
                }
                None => {
                    let _ = writeln!(
                        out,
                        "no violation for k ≤ {k_max}, n ≤ {n_max} (right-hand side ≤ 1 or inequality holds)"
                    );
                }
            }
            out
        }
    };
    Ok(Invocation::ok(out))
}

fn cmd_treeaction(args: &mut Args) -> Result<Invocation, CliError> {
    let set_path = args.require("set")?;
    let (set_text, hash_s) = read_input("set", &set_path)?;
    let mut inputs = vec![hash_s];
    let graph = match args.take("graph") {
        Some(path) => {
            let (text, hash) = read_input("graph", &path)?;
            inputs.insert(0, hash);
            Arc::new(parse_graph(&text)?)
        }
        None => infer_free_graph(&set_text)?,
    };
    let set = WordSet::parse(&graph, &set_text)?;
    let r = args.int_or("r", 4)? as usize;
    let k_disp = args.int_or("kdisp", 40)? as usize;
    let format = args.format(Format::Json)?;
    args.finish()?;
    if set.is_empty() {
        return Err(CliError::usage("set file is empty"));
    }
    let constants = ActionConstants::for_tree(r, k_disp)?;
    let energy = energy_basepoint(&set)?;
    #[derive(Serialize)]
    struct TreeReport {
        energy: crate::tree::EnergyReport,
        constants: ActionConstants,
        partition: Option<crate::tree::PartitionReport>,
        partition_status: String,
    }
    let (partition, status) = match reduction_partition(&set, &constants) {
        Ok((PartitionOutcome::Found, rep)) => (rep, "found".to_owned()),
        Ok((PartitionOutcome::NotFound { reason }, _)) => (None, format!("not found: {reason}")),
        Err(TreeError::PreconditionViolated {
            displaced,
            size,
            threshold,
        }) => (
            None,
            format!(
                "precondition violated: {displaced}/{size} elements displaced ≥ {threshold}, need 3/4"
            ),
        ),
        Err(e) => return Err(e.into()),
    };
    let report = TreeReport {
        energy,
        constants,
        partition,
        partition_status: status,
    };
    let out = match format {
        Format::Text => {
            let mut out = String::new();
            text_header(&mut out, &inputs, &args.resolved);
            let _ = writeln!(out, "basepoint: {}", report.energy.basepoint);
            let _ = writeln!(
                out,
                "energy: {}/{} = {}",
                report.energy.total_displacement, report.energy.set_size, report.energy.energy
            );
            let _ = writeln!(out, "displacement: {}", report.energy.displacement);
            let _ = writeln!(out, "partition: {}", report.partition_status);
            if let Some(p) = &report.partition {
                let _ = writeln!(
                    out,
                    "|U0| = {}, |U1| = {}, gromov maxima {} and {}",
                    p.u0.len(),
                    p.u1.len(),
                    p.max_gromov_inv0_1,
                    p.max_gromov_0_inv1
                );
            }
            out
        }
        _ => json_report("treeaction", inputs, &args.resolved, report),
    };
    Ok(Invocation::ok(out))
}

fn cmd_suite(args: &mut Args) -> Result<Invocation, CliError> {
    let seed: u64 = args
        .take_or("seed", &DEFAULT_SEED.to_string())
        .parse()
        .map_err(|_| CliError::usage("--seed expects an integer"))?;
    let format = args.format(Format::Text)?;
    args.finish()?;
    let outcomes = run_battery(seed);
    let all_passed = outcomes.iter().all(|c| c.passed);
    #[derive(Serialize)]
    struct SuiteReport {
        seed: u64,
        criteria: Vec<crate::suite::CriterionOutcome>,
        passed: usize,
        total: usize,
        all_passed: bool,
    }
    let report = SuiteReport {
        seed,
        passed: outcomes.iter().filter(|c| c.passed).count(),
        total: outcomes.len(),
        all_passed,
        criteria: outcomes,
    };
    let out = match format {
        Format::Json => json_report("suite", Vec::new(), &args.resolved, &report),
        _ => {
            let mut out = String::new();
            text_header(&mut out, &[], &args.resolved);
            for c in &report.criteria {
                let _ = writeln!(
                    out,
                    "criterion {:>2} {:<34} {}  {}",
                    c.id,
                    c.name,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.detail
                );
            }
            let _ = writeln!(
                out,
                "criterion 12 determinism: fixed seed ⇒ byte-identical output; run this command twice to compare"
            );
            let _ = writeln!(out, "{}/{} criteria passed", report.passed, report.total);
            out
        }
    };
    Ok(Invocation::verdict(out, all_passed))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn argv(s: &[&str]) -> Vec<String> {
        s.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn usage_errors_exit_2() {
        let inv = execute(&argv(&["nope"]));
        assert_eq!(inv.exit, EXIT_USAGE);
        let inv = execute(&argv(&[]));
        assert_eq!(inv.exit, EXIT_USAGE);
        let inv = execute(&argv(&["growth", "--graph", "/nonexistent.g"]));
        assert_eq!(inv.exit, EXIT_USAGE);
    }

    #[test]
    fn bounds_kchoice_text() {
        let inv = execute(&argv(&[
            "bounds", "kchoice", "--delta", "1", "--kappa0", "1", "--n0", "1",
        ]));
        assert_eq!(inv.exit, EXIT_OK, "{}", inv.stderr);
        assert!(inv.stdout.contains("alpha = 1/10000000000000000000000000000000000000000000000000000"));
        assert!(inv.stdout.contains("K = 100000000000000"));
    }

    #[test]
    fn bounds_rejects_bad_domain() {
        let inv = execute(&argv(&[
            "bounds", "kchoice", "--delta", "2", "--kappa0", "1", "--n0", "1",
        ]));
        assert_eq!(inv.exit, EXIT_USAGE);
    }

    #[test]
    fn counterexample_text_output() {
        let inv = execute(&argv(&[
            "counterexample",
            "--alpha",
            "1",
            "--beta",
            "1",
            "--kmax",
            "3",
            "--nmax",
            "2",
        ]));
        assert_eq!(inv.exit, EXIT_OK, "{}", inv.stderr);
        assert!(inv.stdout.contains("U_3"), "{}", inv.stdout);
    }
}
