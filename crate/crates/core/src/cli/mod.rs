//! Command-line front end. `run` returns the process exit code: 0 when every
//! requested check passes, 1 when a certificate fails, 2 when the input is
//! rejected.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinat::{dominates, dominating_pairs, RankSet};
use crate::complex::{find_shelling, Face, SimplicialComplex, Vertex};
use crate::faceposet::{explore_order_complex, tree_report, TreeReport};
use crate::geomlat::{Matroid, MatroidJson};
use crate::pipeline::{verify_artifact, DecompositionReport, Instance};
use crate::report::{Artifact, StoredArtifact};
use crate::Error;

/// Complexes with at most this many facets may omit `--shelling`.
pub const SHELLING_SEARCH_LIMIT: usize = 8;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "earcomb", version, about = "Convex-ear decompositions of rank-selected posets")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decompose the rank-selected Boolean lattice B_d.
    Boolean {
        #[arg(long)]
        d: usize,
        /// Rank set such as `1,3`, or `all`.
        #[arg(long = "S")]
        s: String,
    },
    /// Decompose the rank-selected lattice of flats of a simple matroid.
    Geometric {
        /// Matroid JSON: {"ground": n, "bases": [[...], ...]}.
        input: Option<PathBuf>,
        /// Use the uniform matroid U_{r,n} instead of a file.
        #[arg(long, num_args = 2, value_names = ["R", "N"], conflicts_with_all = ["input", "complete_graph"])]
        uniform: Option<Vec<usize>>,
        /// Use the graphic matroid of K_m instead of a file.
        #[arg(long, value_name = "M", conflicts_with = "input")]
        complete_graph: Option<usize>,
        #[arg(long = "S")]
        s: String,
    },
    /// Decompose the rank-selected face poset of a shellable complex.
    Faceposet {
        /// Complex JSON: {"vertices": [...], "facets": [[...], ...]}.
        input: PathBuf,
        /// Shelling order as 0-based indices into the file's facet list.
        #[arg(long)]
        shelling: Option<String>,
        /// Rank set over face sizes 1..d, or `all`.
        #[arg(long = "S")]
        s: String,
        /// Allow the facet rank d in S; computes the order complex and
        /// reports whether it is a tree, without a decomposition.
        #[arg(long)]
        allow_explore: bool,
    },
    /// Decide whether S dominates T.
    Dominance {
        #[arg(long)]
        d: usize,
        #[arg(long = "T", required_unless_present = "table")]
        t: Option<String>,
        #[arg(long = "S", required_unless_present = "table")]
        s: Option<String>,
        /// List every dominating pair for this d.
        #[arg(long)]
        table: bool,
    },
    /// Re-check the ears stored in a report written by `--out`.
    Verify { artifact: PathBuf },
}

/// A failure with the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_certificate_failure() { EXIT_FAILED } else { EXIT_INVALID };
        Failure { code, message: e.to_string() }
    }
}

fn invalid(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_INVALID, message: message.into() }
}

#[derive(Serialize)]
struct Diagnostic<'a> {
    error: &'a str,
    exit_code: i32,
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let _ = write!(err, "{e}");
            if e.use_stderr() {
                EXIT_INVALID
            } else {
                let _ = write!(out, "{e}");
                EXIT_PASS
            }
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Boolean { d, s } => Instance::boolean(*d).map_err(Failure::from).and_then(|i| decompose(&i, s, out)),
        Command::Geometric { input, uniform, complete_graph, s } => {
            load_matroid(input.as_deref(), uniform.as_deref(), *complete_graph)
                .and_then(|m| Instance::geometric(&m).map_err(Failure::from))
                .and_then(|i| decompose(&i, s, out))
        }
        Command::Faceposet { input, shelling, s, allow_explore } => {
            faceposet(input, shelling.as_deref(), s, *allow_explore, out)
        }
        Command::Dominance { d, t, s, table } => dominance(*d, t.as_deref(), s.as_deref(), *table, out),
        Command::Verify { artifact } => verify(artifact, out),
    };
    let (code, json) = match result {
        Ok((code, json)) => (code, json),
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            let diag = Diagnostic { error: &f.message, exit_code: f.code };
            (f.code, serde_json::to_value(&diag).expect("serializable"))
        }
    };
    if let Some(path) = &cli.out {
        let text = serde_json::to_string_pretty(&json).expect("serializable") + "\n";
        if let Err(e) = std::fs::write(path, text) {
            let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
            return EXIT_INVALID;
        }
    }
    code
}

type Outcome = Result<(i32, serde_json::Value), Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| invalid(format!("cannot read {}: {e}", path.display())))
}

fn parse_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).map_err(|e| invalid(format!("{}: {e}", path.display())))
}

fn load_matroid(
    input: Option<&Path>,
    uniform: Option<&[usize]>,
    complete_graph: Option<usize>,
) -> Result<Matroid, Failure> {
    match (input, uniform, complete_graph) {
        (Some(path), None, None) => Ok(Matroid::from_json(&parse_json::<MatroidJson>(path)?).map_err(Error::from)?),
        (None, Some(&[r, n]), None) if r <= n && n <= crate::geomlat::MAX_GROUND => Ok(Matroid::uniform(r, n)),
        (None, Some(_), None) => Err(invalid("--uniform R N needs R ≤ N ≤ 16")),
        (None, None, Some(m)) if (2..=6).contains(&m) => Ok(Matroid::complete_graph(m)),
        (None, None, Some(_)) => Err(invalid("--complete-graph M needs 2 ≤ M ≤ 6")),
        _ => Err(invalid("give a matroid file, --uniform R N or --complete-graph M")),
    }
}

fn rank_sets(instance: &Instance, text: &str) -> Result<Vec<RankSet>, Failure> {
    if text.trim() == "all" {
        return Ok(instance.nonempty_rank_sets());
    }
    let s = RankSet::parse(instance.d(), text).map_err(Error::from)?;
    if s.is_empty() {
        return Err(invalid("S must be nonempty"));
    }
    Ok(vec![s])
}

fn summarize(r: &DecompositionReport, out: &mut dyn Write) {
    let facets: usize = r.decomposition.ears.iter().map(|e| e.facets.len()).sum();
    let status = if r.passed() { "PASS".to_string() } else { format!("FAIL ({})", r.failed_checks().join(", ")) };
    let _ = writeln!(out, "S={}: ears={} facets={} h={:?} {}", r.s, r.ears(), facets, r.h_vector, status);
    for row in &r.inequalities.rows {
        let _ = writeln!(out, "  {row}");
    }
    let mark = if r.inequalities.g_is_m_vector { "✓" } else { "✗" };
    let _ = writeln!(out, "  g={:?} M-vector {mark}", r.inequalities.g);
    for f in &r.ced.failures {
        let _ = writeln!(out, "  {:?} ear={:?} witness={:?}: {}", f.property, f.ear, f.witness, f.detail);
    }
}

fn decompose(instance: &Instance, s: &str, out: &mut dyn Write) -> Outcome {
    let sets = rank_sets(instance, s)?;
    let runs: Vec<DecompositionReport> =
        sets.par_iter().map(|s| instance.decompose(s)).collect::<Result<_, _>>().map_err(Failure::from)?;
    let p = &instance.prechecks;
    let _ = writeln!(out, "d={} pieces={} prechecks={}", p.d, p.pieces, if p.passed() { "PASS" } else { "FAIL" });
    for r in &runs {
        summarize(r, out);
    }
    let artifact = Artifact::new(instance.source.clone(), p.clone(), runs);
    let code = if artifact.passed { EXIT_PASS } else { EXIT_FAILED };
    Ok((code, serde_json::to_value(&artifact).expect("serializable")))
}

/// The complex file format, keeping the facet order of the file.
#[derive(Deserialize)]
struct ComplexFile {
    vertices: Vec<Vertex>,
    facets: Vec<Vec<Vertex>>,
}

fn load_complex(path: &Path) -> Result<(SimplicialComplex, Vec<Face>), Failure> {
    let file: ComplexFile = parse_json(path)?;
    let facets: Vec<Face> = file
        .facets
        .into_iter()
        .map(|mut f| {
            f.sort_unstable();
            f
        })
        .collect();
    let k = SimplicialComplex::with_vertices(file.vertices, facets.iter().cloned()).map_err(Error::from)?;
    if k.facet_count() != facets.len() || !facets.iter().all(|f| k.facets().contains(f)) {
        return Err(invalid("facet list has repeated or non-maximal entries"));
    }
    Ok((k, facets))
}

fn shelling_order(k: &SimplicialComplex, facets: &[Face], shelling: Option<&str>) -> Result<Vec<Face>, Failure> {
    let Some(text) = shelling else {
        if facets.len() > SHELLING_SEARCH_LIMIT {
            return Err(invalid(format!("--shelling is required above {SHELLING_SEARCH_LIMIT} facets")));
        }
        return find_shelling(k, SHELLING_SEARCH_LIMIT).ok_or_else(|| invalid("complex has no shelling order"));
    };
    text.split(',')
        .map(|part| {
            let i: usize = part.trim().parse().map_err(|_| invalid(format!("bad facet index {part:?}")))?;
            facets.get(i).cloned().ok_or_else(|| invalid(format!("facet index {i} out of range")))
        })
        .collect()
}

#[derive(Serialize)]
struct ExploreReport {
    s: RankSet,
    facets: usize,
    tree: TreeReport,
}

fn faceposet(input: &Path, shelling: Option<&str>, s: &str, allow_explore: bool, out: &mut dyn Write) -> Outcome {
    let (k, facets) = load_complex(input)?;
    let d = k.max_facet_size().filter(|&d| d > 0).ok_or_else(|| invalid("complex has no nonempty faces"))?;
    if s.trim() != "all" {
        let over_d = RankSet::parse(d + 1, s).map_err(Error::from)?;
        if over_d.contains(d) {
            if !allow_explore {
                return Err(invalid(format!(
                    "S contains the facet rank {d}; no decomposition is constructed in that case \
                     (whether one exists is open). Pass --allow-explore to inspect the order complex"
                )));
            }
            let complex = explore_order_complex(&k, &over_d).map_err(Error::from)?;
            let tree = tree_report(&complex).map_err(Error::from)?;
            let _ =
                writeln!(out, "S={over_d}: order complex with {} facets, dim {:?}", complex.facet_count(), tree.dim);
            let _ = writeln!(out, "tree: {}", tree.tree);
            let report = ExploreReport { s: over_d, facets: complex.facet_count(), tree };
            return Ok((EXIT_PASS, serde_json::to_value(&report).expect("serializable")));
        }
    }
    let order = shelling_order(&k, &facets, shelling)?;
    let instance = Instance::faceposet(&k, &order)?;
    let s = if s.trim() == "all" {
        s.to_string()
    } else {
        RankSet::parse(d + 1, s)
            .map_err(Error::from)?
            .members()
            .iter()
            .map(ToString::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    decompose(&instance, &s, out)
}

#[derive(Serialize)]
struct DominanceReport {
    d: usize,
    t: RankSet,
    s: RankSet,
    dominates: bool,
    witness: Option<Vec<(String, String)>>,
}

#[derive(Serialize)]
struct DominanceTable {
    d: usize,
    pairs: Vec<(RankSet, RankSet)>,
}

fn dominance(d: usize, t: Option<&str>, s: Option<&str>, table: bool, out: &mut dyn Write) -> Outcome {
    if d == 0 || d > 7 {
        return Err(invalid("dominance needs 1 ≤ d ≤ 7"));
    }
    if table {
        let pairs = dominating_pairs(d);
        let _ = writeln!(out, "dominating pairs (T, S) for d={d}: {}", pairs.len());
        for (t, s) in &pairs {
            let _ = writeln!(out, "  {s} dominates {t}");
        }
        return Ok((EXIT_PASS, serde_json::to_value(DominanceTable { d, pairs }).expect("serializable")));
    }
    let (Some(t), Some(s)) = (t, s) else {
        return Err(invalid("--T and --S are required without --table"));
    };
    let t = RankSet::parse(d, t).map_err(Error::from)?;
    let s = RankSet::parse(d, s).map_err(Error::from)?;
    let result = dominates(&t, &s).map_err(Error::from)?;
    let _ = writeln!(out, "dominates: {}", result.dominates);
    let witness = result.witness.map(|w| {
        w.into_iter()
            .map(|(a, b)| {
                let _ = writeln!(out, "  {a} -> {b}");
                (a.to_string(), b.to_string())
            })
            .collect()
    });
    let report = DominanceReport { d, t, s, dominates: result.dominates, witness };
    Ok((EXIT_PASS, serde_json::to_value(&report).expect("serializable")))
}

#[derive(Serialize)]
struct VerifyReport {
    runs: Vec<crate::ced::CedReport>,
    passed: bool,
}

fn verify(path: &Path, out: &mut dyn Write) -> Outcome {
    let stored: StoredArtifact = parse_json(path)?;
    let mut runs = Vec::new();
    for (s, report) in verify_artifact(stored)? {
        let _ = writeln!(out, "S={s}: ears={} {}", report.ears, if report.passed() { "PASS" } else { "FAIL" });
        for f in &report.failures {
            let _ = writeln!(out, "  {:?} ear={:?} witness={:?}: {}", f.property, f.ear, f.witness, f.detail);
        }
        runs.push(report);
    }
    let passed = runs.iter().all(|r| r.passed());
    let code = if passed { EXIT_PASS } else { EXIT_FAILED };
    Ok((code, serde_json::to_value(VerifyReport { runs, passed }).expect("serializable")))
}
