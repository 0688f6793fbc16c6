use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use bhdpc_core::dpc3::{build_3dpc_with, compute_profile, Dpc3Error, Subcase, TerminalSpec};
use bhdpc_core::pathengine::PathEngine;
use bhdpc_core::tables::{load_tables, parse_tables, summarize, validate_rows, RowStatus, TableError};
use bhdpc_core::topology::{BalancedHypercube, Color, NodeId, Partition};
use bhdpc_core::verify::{oracle_exists_3dpc, oracle_find_t3, verify_kdpc, OracleAnswer, OracleError};
use clap::{Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

mod dot;

/// Construct, verify and export paired 3-disjoint path covers of balanced hypercubes.
#[derive(Parser)]
#[command(name = "bhdpc", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a verified paired 3-DPC of BH_n (n >= 3).
    Construct {
        #[arg(long)]
        n: usize,
        /// Pairs as "s1:t1,s2:t2,s3:t3" with black sources and white sinks.
        #[arg(long)]
        pairs: String,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Check a cover document against the adjacency rule.
    Verify {
        #[arg(long)]
        cover: PathBuf,
    },
    /// Exhaustive search on BH_2.
    Oracle {
        #[arg(long)]
        n: usize,
        /// Three pairs, or the two fixed pairs with --find-t3.
        #[arg(long)]
        pairs: String,
        /// List every white t3 completing the pairs to a solvable instance.
        #[arg(long, requires = "s3")]
        find_t3: bool,
        #[arg(long)]
        s3: Option<String>,
    },
    /// Verify the bundled BH_2 tables, repairing broken rows.
    ValidateTables {
        /// Read rows from this file instead of the bundled tables.
        #[arg(long)]
        file: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Write BH_n or a cover in DOT format.
    Export {
        #[arg(long, conflicts_with = "cover")]
        n: Option<usize>,
        #[arg(long)]
        cover: Option<PathBuf>,
        #[arg(long)]
        dot: bool,
        /// Group vertices by subcube along this dimension.
        #[arg(long, requires = "n")]
        partition: Option<usize>,
    },
    /// Construct and verify covers for random terminal sets.
    Selftest {
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

enum Failure {
    Verification(String),
    Usage(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Usage(_) => 2,
            Failure::Internal(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Verification(m) | Failure::Usage(m) | Failure::Internal(m) => m,
        }
    }
}

type Outcome = Result<(), Failure>;

/// The JSON document printed by `construct` and read by `verify` and `export`.
#[derive(Serialize, Deserialize)]
struct CoverDoc {
    n: usize,
    pairs: Vec<(NodeId, NodeId)>,
    paths: Vec<Vec<NodeId>>,
    #[serde(default)]
    verified: bool,
}

fn engine() -> Result<PathEngine, Failure> {
    match std::env::var("BHDPC_BUDGET") {
        Ok(text) => text
            .trim()
            .parse()
            .map(PathEngine::with_budget)
            .map_err(|_| Failure::Usage(format!("BHDPC_BUDGET={text:?} is not a node count"))),
        Err(_) => Ok(PathEngine::new()),
    }
}

/// Splits "s:t,s:t" at the commas outside parentheses.
fn parse_pairs(text: &str, n: usize) -> Result<Vec<(NodeId, NodeId)>, Failure> {
    let mut items = Vec::new();
    let (mut depth, mut start) = (0i32, 0);
    for (i, c) in text.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => {
                items.push(&text[start..i]);
                start = i + 1;
            }
            _ => {}
        }
        if depth < 0 {
            return Err(Failure::Usage(format!("unbalanced parentheses in {text:?}")));
        }
    }
    items.push(&text[start..]);
    items
        .into_iter()
        .map(|item| {
            let (s, t) = item
                .split_once(':')
                .ok_or_else(|| Failure::Usage(format!("pair {item:?} is not of the form s:t")))?;
            Ok((parse_node(s, n)?, parse_node(t, n)?))
        })
        .collect()
}

fn parse_node(text: &str, n: usize) -> Result<NodeId, Failure> {
    let u: NodeId = text.trim().parse().map_err(|e| Failure::Usage(format!("{e}")))?;
    if u.dim() != n {
        return Err(Failure::Usage(format!("{u} is not a vertex of BH_{n}")));
    }
    Ok(u)
}

fn read_cover(path: &Path) -> Result<CoverDoc, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn construct(n: usize, pairs: &str, format: Format) -> Outcome {
    if n < 3 {
        return Err(Failure::Usage(Dpc3Error::DimensionTooSmall(n).to_string()));
    }
    let pairs = parse_pairs(pairs, n)?;
    let spec = TerminalSpec::from_pairs(&pairs).map_err(|e| Failure::Usage(e.to_string()))?;
    let cover = match build_3dpc_with(&spec, &engine()?) {
        Ok(cover) => cover,
        Err(e @ Dpc3Error::Verification(_)) => return Err(Failure::Verification(e.to_string())),
        Err(e @ (Dpc3Error::InvalidSpec(_) | Dpc3Error::DimensionTooSmall(_))) => {
            return Err(Failure::Usage(e.to_string()))
        }
        Err(e) => {
            let profile = compute_profile(&spec);
            return Err(Failure::Internal(format!(
                "{e} (spec {spec}, split l = {}, subcase {}, beta {:?})",
                profile.l,
                profile.subcase(),
                profile.beta
            )));
        }
    };
    let paths = cover.raw_paths();
    let report = verify_kdpc(n, &pairs, &paths);
    if !report.passed() {
        return Err(Failure::Verification(report.problems().join("\n")));
    }
    match format {
        Format::Json => {
            let doc = CoverDoc { n, pairs, paths, verified: true };
            println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        }
        Format::Text => {
            for (j, p) in paths.iter().enumerate() {
                let shown: Vec<String> = p.iter().map(ToString::to_string).collect();
                println!("P{}: {}", j + 1, shown.join(" "));
            }
            println!("verified: {} vertices", report.covered);
        }
    }
    Ok(())
}

fn verify(cover: &Path) -> Outcome {
    let doc = read_cover(cover)?;
    let report = verify_kdpc(doc.n, &doc.pairs, &doc.paths);
    println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} problems", report.problems().len())))
    }
}

fn oracle(n: usize, pairs: &str, find_t3: bool, s3: Option<&str>) -> Outcome {
    if n != 2 {
        return Err(Failure::Usage(OracleError::OutOfScope(n).to_string()));
    }
    let pairs = parse_pairs(pairs, n)?;
    if find_t3 {
        let [(s1, t1), (s2, t2)] = &pairs[..] else {
            return Err(Failure::Usage("--find-t3 takes exactly two pairs".into()));
        };
        let s3 = parse_node(s3.expect("required by clap"), n)?;
        let found = oracle_find_t3(&[s1.clone(), s2.clone(), s3], t1, t2).map_err(|e| Failure::Usage(e.to_string()))?;
        let shown: Vec<String> = found.iter().map(ToString::to_string).collect();
        println!("valid t3: {}", if shown.is_empty() { "none".to_string() } else { shown.join(" ") });
        return Ok(());
    }
    let triple: [(NodeId, NodeId); 3] =
        pairs.try_into().map_err(|_| Failure::Usage("the oracle takes exactly three pairs".into()))?;
    match oracle_exists_3dpc(n, &triple).map_err(|e| Failure::Usage(e.to_string()))? {
        OracleAnswer::Yes(paths) => {
            println!("YES");
            for (j, p) in paths.iter().enumerate() {
                let shown: Vec<String> = p.nodes().iter().map(ToString::to_string).collect();
                println!("P{}: {}", j + 1, shown.join(" "));
            }
        }
        OracleAnswer::No => println!("NO paired 3-DPC exists"),
    }
    Ok(())
}

fn validate_tables(file: Option<&Path>, json: bool) -> Outcome {
    let decode = |e: TableError| Failure::Usage(e.to_string());
    let rows = match file {
        Some(path) => {
            let text =
                fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            parse_tables(&text).map_err(decode)?
        }
        None => load_tables().map_err(decode)?,
    };
    let verdicts = validate_rows(&rows).map_err(|e| Failure::Verification(e.to_string()))?;
    let summary = summarize(&verdicts);
    if json {
        let doc = serde_json::json!({ "summary": summary, "unrepairable": 0, "rows": verdicts });
        println!("{}", serde_json::to_string_pretty(&doc).expect("serializable"));
        return Ok(());
    }
    for v in verdicts.iter().filter(|v| v.status == RowStatus::Corrupted) {
        let fix = v.replacement.as_ref().expect("corrupted rows are repaired or rejected");
        let kept = if fix.same_t3 { "same t3" } else { "new t3" };
        println!("line {} {}: corrupted, repaired with t3 = {} ({kept})", v.line, v.label, fix.t3);
    }
    println!(
        "rows {}, valid {}, corrupted {}, repaired {}, unrepairable 0",
        summary.rows, summary.valid, summary.corrupted, summary.repaired
    );
    Ok(())
}

fn export(n: Option<usize>, cover: Option<&Path>, as_dot: bool, partition: Option<usize>) -> Outcome {
    if !as_dot {
        return Err(Failure::Usage("only DOT output is supported; pass --dot".into()));
    }
    let text = match (n, cover) {
        (Some(n), None) => {
            if !(1..=dot::MAX_EXPORT_DIM).contains(&n) {
                return Err(Failure::Usage(format!("export covers BH_1 to BH_{}", dot::MAX_EXPORT_DIM)));
            }
            let cube = BalancedHypercube::new(n).map_err(|e| Failure::Usage(e.to_string()))?;
            let part = partition
                .map(|l| Partition::new(n, l).map_err(|e| Failure::Usage(e.to_string())))
                .transpose()?;
            dot::graph(&cube, part.as_ref())
        }
        (None, Some(path)) => {
            let doc = read_cover(path)?;
            if !(1..=dot::MAX_EXPORT_DIM).contains(&doc.n) {
                return Err(Failure::Usage(format!("export covers BH_1 to BH_{}", dot::MAX_EXPORT_DIM)));
            }
            let cube = BalancedHypercube::new(doc.n).map_err(|e| Failure::Usage(e.to_string()))?;
            dot::cover(&cube, &doc.paths)
        }
        _ => return Err(Failure::Usage("pass either --n or --cover".into())),
    };
    print!("{text}");
    Ok(())
}

fn random_spec(rng: &mut ChaCha8Rng, cube: &BalancedHypercube) -> TerminalSpec {
    let mut blacks: Vec<NodeId> = cube.nodes_of_color(Color::Black).collect();
    let mut whites: Vec<NodeId> = cube.nodes_of_color(Color::White).collect();
    let (s, _) = blacks.partial_shuffle(rng, 3);
    let sources = [s[0].clone(), s[1].clone(), s[2].clone()];
    let (t, _) = whites.partial_shuffle(rng, 3);
    let sinks = [t[0].clone(), t[1].clone(), t[2].clone()];
    TerminalSpec::new(sources, sinks).expect("distinct terminals of both colors")
}

fn selftest(n: usize, samples: usize, seed: u64) -> Outcome {
    if n < 3 {
        return Err(Failure::Usage(Dpc3Error::DimensionTooSmall(n).to_string()));
    }
    let cube = BalancedHypercube::new(n).map_err(|e| Failure::Usage(e.to_string()))?;
    let engine = engine()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let specs: Vec<TerminalSpec> = (0..samples).map(|_| random_spec(&mut rng, &cube)).collect();
    let results: Vec<(Subcase, Result<(), String>)> = specs
        .par_iter()
        .map(|spec| {
            let outcome = build_3dpc_with(spec, &engine).map_err(|e| e.to_string()).and_then(|cover| {
                let report = verify_kdpc(n, &spec.pairs(), &cover.raw_paths());
                if report.passed() {
                    Ok(())
                } else {
                    Err(report.problems().join("; "))
                }
            });
            (compute_profile(spec).subcase(), outcome.map_err(|e| format!("{spec}: {e}")))
        })
        .collect();
    let mut per_case: BTreeMap<Subcase, (usize, usize)> = BTreeMap::new();
    for (case, outcome) in &results {
        let entry = per_case.entry(*case).or_default();
        entry.0 += 1;
        entry.1 += usize::from(outcome.is_ok());
    }
    for (case, (seen, ok)) in &per_case {
        println!("subcase {case}: {ok}/{seen} verified");
    }
    let failures: Vec<&String> = results.iter().filter_map(|(_, r)| r.as_ref().err()).collect();
    for f in &failures {
        eprintln!("failed: {f}");
    }
    println!("BH_{n}: {}/{samples} verified (seed {seed})", samples - failures.len());
    if failures.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} of {samples} samples failed", failures.len())))
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Construct { n, pairs, format } => construct(n, &pairs, format),
        Command::Verify { cover } => verify(&cover),
        Command::Oracle { n, pairs, find_t3, s3 } => oracle(n, &pairs, find_t3, s3.as_deref()),
        Command::ValidateTables { file, json } => validate_tables(file.as_deref(), json),
        Command::Export { n, cover, dot, partition } => export(n, cover.as_deref(), dot, partition),
        Command::Selftest { n, samples, seed } => selftest(n, samples, seed),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            ExitCode::from(failure.code())
        }
    }
}
