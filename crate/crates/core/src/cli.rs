//! Command-line front end. Every command prints one JSON document on
//! standard output; diagnostics go to standard error.
//!
//! Exit codes: 0 solved (an infeasible answer included), 2 usage error,
//! 3 unreadable or invalid input, 4 overflow, cap or internal failure.

use std::collections::BTreeSet;
use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::apps::{domset_to_sco, msc_target, msc_to_sco, solve_wsm, MscInstance, WsmInstance, WsmSet, WsmSolution};
use crate::catalog::Predicate;
use crate::explicit::{
    brute_force_tuples, solve_auto, solve_concave, solve_enum, solve_vertex, ExplicitInstance, SolveResult,
};
use crate::pipeline::{ab_coloring, min_parts_witness, partition_solve, Direction};
use crate::shift::{sco_objective, CostMatrix};
use crate::treewidth::Graph;

/// Largest `r` for which solved columns are written out.
const COLUMN_CAP: u64 = 4096;

#[derive(Debug, Parser)]
#[command(name = "sco", version, about = "Shifted combinatorial optimization solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve an explicit instance {"n","r","S","c"}.
    SolveExplicit {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
    },
    /// Partition the vertices into `parts` sets satisfying a predicate.
    SolvePartition {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, value_enum)]
        predicate: PredicateArg,
        #[arg(long)]
        parts: u64,
    },
    /// Chromatic number with an optimal colouring.
    Chromatic {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Domatic number with a partition into dominating sets.
    Domatic {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Give every vertex `b` of `a` colours, adjacent vertices disjoint.
    AbColor {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        a: u64,
        #[arg(long)]
        b: u64,
    },
    /// Explicit instance whose optimum is n iff a dominating set of size r exists.
    GenDomset {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        r: u64,
    },
    /// Explicit instance for a multiset cover instance {"n","r","demands","family"}.
    GenMsc {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Weighted set multicover {"k","demands","sets"}.
    SolveWsm {
        #[arg(long)]
        instance: PathBuf,
    },
    /// Compare a solver with the tuple brute force.
    Verify {
        #[arg(long, conflicts_with = "random", required_unless_present = "random")]
        instance: Option<PathBuf>,
        /// Number of random instances to check.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Algo::Auto)]
        algo: Algo,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Algo {
    Auto,
    Enum,
    Concave,
    Vertex,
    Brute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PredicateArg {
    Indep,
    Domset,
    Vcover,
}

impl From<PredicateArg> for Predicate {
    fn from(p: PredicateArg) -> Self {
        match p {
            PredicateArg::Indep => Predicate::IndependentSet,
            PredicateArg::Domset => Predicate::DominatingSet,
            PredicateArg::Vcover => Predicate::VertexCover,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphFile {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExplicitFile {
    pub n: usize,
    pub r: u64,
    #[serde(rename = "S")]
    pub s: Vec<Vec<i64>>,
    pub c: Vec<Vec<i64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MscFile {
    pub n: usize,
    pub r: u64,
    pub demands: Vec<Vec<u64>>,
    pub family: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WsmSetFile {
    pub members: Vec<usize>,
    pub cum_weights: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WsmFile {
    pub k: usize,
    pub demands: Vec<u64>,
    pub sets: Vec<WsmSetFile>,
}

impl GraphFile {
    pub fn to_graph(&self) -> crate::Result<Graph> {
        let edges: Vec<(usize, usize)> = self.edges.iter().map(|&[u, v]| (u, v)).collect();
        Graph::new(self.n, &edges)
    }
}

impl ExplicitFile {
    pub fn to_instance(&self) -> crate::Result<ExplicitInstance> {
        use crate::Error;
        if self.c.len() != self.n {
            return Err(Error::DimensionMismatch(format!("c has {} rows, n is {}", self.c.len(), self.n)));
        }
        if let Some(i) = self.c.iter().position(|row| row.len() as u64 != self.r) {
            return Err(Error::DimensionMismatch(format!("row {i} of c does not have r = {} entries", self.r)));
        }
        let cost = if self.n == 0 { CostMatrix::empty(self.r)? } else { CostMatrix::from_rows(self.c.clone())? };
        ExplicitInstance::new(self.s.clone(), cost)
    }

    pub fn from_instance(inst: &ExplicitInstance) -> crate::Result<Self> {
        Ok(Self {
            n: inst.n(),
            r: inst.r(),
            s: inst.vectors().to_vec(),
            c: inst.cost().explicit_rows(COLUMN_CAP)?,
        })
    }
}

impl MscFile {
    pub fn to_instance(&self) -> crate::Result<MscInstance> {
        let demands = self.demands.iter().map(|d| d.iter().copied().collect::<BTreeSet<u64>>()).collect();
        MscInstance::new(self.n, demands, self.family.clone(), self.r)
    }
}

impl WsmFile {
    pub fn to_instance(&self) -> crate::Result<WsmInstance> {
        let sets = self
            .sets
            .iter()
            .map(|s| WsmSet { members: s.members.clone(), cum_weights: s.cum_weights.clone() })
            .collect();
        WsmInstance::new(self.k, self.demands.clone(), sets)
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

enum Failure {
    Usage(String),
    Input(String),
    Fatal(String),
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        use crate::Error as E;
        match e {
            E::Overflow(_) | E::CapExceeded { .. } | E::Internal(_) | E::OracleViolation(_) => {
                Failure::Fatal(e.to_string())
            }
            E::DecomposabilityViolated { .. } | E::SupportTooLarge { .. } => Failure::Fatal(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

/// Parses `argv` (program name first) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let result = match Cli::try_parse_from(argv) {
        Ok(cli) => execute(cli.command),
        Err(e) if !e.use_stderr() => {
            return Outcome { code: 0, stdout: e.to_string(), stderr: String::new() };
        }
        Err(e) => Err(Failure::Usage(e.to_string())),
    };
    match result {
        Ok((doc, ok)) => Outcome {
            code: if ok { 0 } else { 4 },
            stdout: format!("{doc}\n"),
            stderr: String::new(),
        },
        Err(Failure::Usage(m)) => Outcome { code: 2, stdout: String::new(), stderr: m },
        Err(Failure::Input(m)) => Outcome { code: 3, stdout: String::new(), stderr: format!("error: {m}\n") },
        Err(Failure::Fatal(m)) => Outcome { code: 4, stdout: String::new(), stderr: format!("error: {m}\n") },
    }
}

fn read<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(read::<GraphFile>(path)?.to_graph()?)
}

fn canonical(mut parts: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
    for p in &mut parts {
        p.sort_unstable();
    }
    parts.sort();
    parts
}

fn solve_with(inst: &ExplicitInstance, algo: Algo) -> crate::Result<SolveResult> {
    match algo {
        Algo::Auto => solve_auto(inst),
        Algo::Enum => solve_enum(inst),
        Algo::Concave => solve_concave(inst),
        Algo::Vertex => solve_vertex(inst),
        Algo::Brute => brute_force_tuples(inst),
    }
}

fn explicit_document(inst: &ExplicitInstance, res: &SolveResult) -> Result<Value, Failure> {
    Ok(match res {
        SolveResult::Infeasible => json!({ "status": "infeasible" }),
        SolveResult::Unbounded => json!({ "status": "unbounded" }),
        SolveResult::Optimal { objective, witness } => {
            let mut doc = json!({
                "status": "optimal",
                "objective": objective,
                "composition": witness.parts(),
            });
            if inst.r() <= COLUMN_CAP {
                let x = inst.materialize(witness, COLUMN_CAP)?;
                if sco_objective(inst.cost(), &x)? != *objective {
                    return Err(Failure::Fatal("objective disagrees with its columns".into()));
                }
                doc["columns"] = json!(x.columns());
            }
            doc
        }
    })
}

fn partition_document(found: Option<(u64, Vec<Vec<usize>>)>) -> Value {
    match found {
        Some((value, parts)) => json!({ "status": "optimal", "objective": value, "parts": canonical(parts) }),
        None => json!({ "status": "infeasible" }),
    }
}

fn random_instance(rng: &mut ChaCha8Rng) -> crate::Result<ExplicitInstance> {
    let n = rng.gen_range(1..=6usize);
    let m = rng.gen_range(1..=5usize);
    let r = rng.gen_range(1..=4u64);
    let mut members = BTreeSet::new();
    for _ in 0..m {
        members.insert((0..n).map(|_| rng.gen_range(-5..=5i64)).collect::<Vec<_>>());
    }
    let c = (0..n).map(|_| (0..r).map(|_| rng.gen_range(-5..=5i64)).collect()).collect();
    ExplicitInstance::new(members.into_iter().collect(), CostMatrix::from_rows(c)?)
}

fn compare(inst: &ExplicitInstance, algo: Algo) -> crate::Result<(Option<i64>, Option<i64>)> {
    let oracle = brute_force_tuples(inst)?.objective();
    let got = match solve_with(inst, algo) {
        // solvers that need a shape fall back to enumeration elsewhere
        Err(crate::Error::NotShifted | crate::Error::NotAntiShifted) => solve_enum(inst)?,
        other => other?,
    };
    Ok((got.objective(), oracle))
}

/// Returns the document and whether the command succeeded.
fn execute(cmd: Command) -> Result<(Value, bool), Failure> {
    match cmd {
        Command::SolveExplicit { instance, algo } => {
            let inst = read::<ExplicitFile>(&instance)?.to_instance()?;
            let res = solve_with(&inst, algo)?;
            Ok((explicit_document(&inst, &res)?, true))
        }
        Command::SolvePartition { graph, predicate, parts } => {
            let g = read_graph(&graph)?;
            if parts == 0 {
                return Err(Failure::Usage("--parts must be positive".into()));
            }
            let found = partition_solve(predicate.into(), &g, parts)?.map(|p| (g.n() as u64, p));
            Ok((partition_document(found), true))
        }
        Command::Chromatic { graph } => {
            let g = read_graph(&graph)?;
            let found = min_parts_witness(Predicate::IndependentSet, &g, Direction::Min)?;
            Ok((partition_document(found.or((g.n() == 0).then(|| (0, Vec::new())))), true))
        }
        Command::Domatic { graph } => {
            let g = read_graph(&graph)?;
            let found = min_parts_witness(Predicate::DominatingSet, &g, Direction::Max)?;
            Ok((partition_document(found.or((g.n() == 0).then(|| (0, Vec::new())))), true))
        }
        Command::AbColor { graph, a, b } => {
            let g = read_graph(&graph)?;
            if b == 0 || b > a {
                return Err(Failure::Usage(format!("need 1 <= b <= a, got a={a}, b={b}")));
            }
            let doc = match ab_coloring(&g, a, b)? {
                None => json!({ "status": "infeasible" }),
                Some(colors) => {
                    let mut classes = vec![Vec::new(); a as usize];
                    for (v, cs) in colors.iter().enumerate() {
                        for &c in cs {
                            classes[c as usize].push(v);
                        }
                    }
                    json!({
                        "status": "optimal",
                        "objective": b * g.n() as u64,
                        "parts": canonical(classes),
                        "colors": colors,
                    })
                }
            };
            Ok((doc, true))
        }
        Command::GenDomset { graph, r } => {
            let g = read_graph(&graph)?;
            let inst = domset_to_sco(&g, r)?;
            Ok((json!(ExplicitFile::from_instance(&inst)?), true))
        }
        Command::GenMsc { instance } => {
            let msc = read::<MscFile>(&instance)?.to_instance()?;
            let inst = msc_to_sco(&msc)?;
            let mut doc = json!(ExplicitFile::from_instance(&inst)?);
            doc["target"] = json!(msc_target(&msc));
            Ok((doc, true))
        }
        Command::SolveWsm { instance } => {
            let inst = read::<WsmFile>(&instance)?.to_instance()?;
            let doc = match solve_wsm(&inst)? {
                WsmSolution::Infeasible => json!({ "status": "infeasible" }),
                WsmSolution::Optimal { weight, multiplicities } => {
                    json!({ "status": "optimal", "objective": weight, "multiplicities": multiplicities })
                }
            };
            Ok((doc, true))
        }
        Command::Verify { instance: Some(path), algo, .. } => {
            let inst = read::<ExplicitFile>(&path)?.to_instance()?;
            let (got, oracle) = compare(&inst, algo)?;
            let agree = got == oracle;
            Ok((json!({ "status": "verified", "agree": agree, "objective": got, "oracle": oracle }), agree))
        }
        Command::Verify { instance: None, random, seed, algo } => {
            let count = random.unwrap_or(0);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut disagreements = Vec::new();
            for idx in 0..count {
                let inst = random_instance(&mut rng)?;
                let (got, oracle) = compare(&inst, algo)?;
                if got != oracle {
                    disagreements.push(json!({
                        "index": idx,
                        "instance": ExplicitFile::from_instance(&inst)?,
                        "objective": got,
                        "oracle": oracle,
                    }));
                }
            }
            let agree = disagreements.is_empty();
            let doc = json!({
                "status": "verified",
                "agree": agree,
                "instances": count,
                "seed": seed,
                "disagreements": disagreements,
            });
            Ok((doc, agree))
        }
    }
}
