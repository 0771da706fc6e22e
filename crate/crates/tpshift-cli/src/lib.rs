//! Command-line front end: solve, verify, generate and enumerate.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use tpshift_core::budgeted::{
    self, mode_respected, BudgetedSolution, SolverConfig, DEFAULT_STATE_LIMIT,
};
use tpshift_core::instances::{gen_mcis_delay_gadget, gen_random, parse_mcis};
use tpshift_core::switch::{
    enumerate_spts, enumerate_svss_limited, is_valid_svs, tree_reach_mask, DEFAULT_SVS_LIMIT,
};
use tpshift_core::unbounded::solve_mrpt;
use tpshift_core::{
    parse_instance, write_instance, Exec, Label, Mode, ShiftOperation, Switch, SwitchPathTree,
    SwitchVertexSet, TemporalKPathGraph, VertexId,
};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Parse(String),
    #[error("invalid instance: {0}")]
    Invalid(String),
    #[error("resource limit: {0}")]
    Resource(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) => 2,
            CliError::Invalid(_) => 3,
            CliError::Resource(_) => 4,
            CliError::Failed(_) => 1,
        }
    }
}

impl From<tpshift_core::Error> for CliError {
    fn from(e: tpshift_core::Error) -> Self {
        use tpshift_core::Error as E;
        match e {
            E::Parse { .. } => CliError::Parse(e.to_string()),
            E::ResourceLimit { .. } => CliError::Resource(e.to_string()),
            E::InvalidInstance(_)
            | E::Addressing { .. }
            | E::UnknownVertex(_)
            | E::NotOnPath { .. } => CliError::Invalid(e.to_string()),
            E::Parameter(_) | E::Ordering { .. } | E::InvalidSwitch { .. } => {
                CliError::Usage(e.to_string())
            }
            E::Overflow { .. } | E::Contract(_) => CliError::Failed(e.to_string()),
        }
    }
}

type CliResult<T> = Result<T, CliError>;

#[derive(Parser, Debug)]
#[command(
    name = "tpshift",
    version,
    about = "Reachability maximization in temporal k-path graphs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Solve an instance and print a solution document
    Solve(SolveArgs),
    /// Replay a solution document against its instance
    Verify(VerifyArgs),
    /// Generate an instance
    #[command(subcommand)]
    Gen(GenCommand),
    /// Count or list trees and switch-vertex-sets
    #[command(subcommand)]
    Enum(EnumCommand),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algo {
    Unbounded,
    XpB,
    XpK,
    FptDelay,
    FptGeneral,
    FixedSpt,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Delay,
    Advance,
    Shift,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Delay => Mode::Delay,
            ModeArg::Advance => Mode::Advance,
            ModeArg::Shift => Mode::Shift,
        }
    }
}

#[derive(Args, Debug)]
pub struct SolveArgs {
    #[arg(long, value_enum)]
    pub algo: Algo,
    #[arg(long, value_enum, default_value = "shift")]
    pub mode: ModeArg,
    #[arg(long, default_value_t = 0)]
    pub budget: u64,
    /// Accepted for a uniform command line; every solver is deterministic
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long, env = "TPSHIFT_LIMIT_STATES", default_value_t = DEFAULT_STATE_LIMIT)]
    pub limit_states: u128,
    /// Tree for fixed-spt as `child:parent` pairs of path ids, e.g. `1:0,2:1`
    #[arg(long)]
    pub spt: Option<String>,
    #[arg(long)]
    pub output: Option<PathBuf>,
    pub instance: PathBuf,
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    pub instance: PathBuf,
    pub solution: PathBuf,
}

#[derive(Subcommand, Debug)]
pub enum GenCommand {
    /// Seeded random k-path graph
    Random {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        n: usize,
        /// Labels are drawn from 0..lifetime; defaults to 2n
        #[arg(long)]
        lifetime: Option<i64>,
        #[arg(long, default_value_t = 0.5)]
        share: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Delay gadget for a multicolored independent set instance
    McisDelay {
        #[arg(long)]
        omega: Option<i64>,
        #[arg(long)]
        output: Option<PathBuf>,
        colors: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
pub enum EnumCommand {
    /// Switch-path-trees on k paths rooted at path 0
    Spt {
        #[arg(long)]
        k: usize,
        /// Also count trees on proper subsets of the paths
        #[arg(long)]
        partial: bool,
        #[arg(long)]
        list: bool,
    },
    /// Switch-vertex-sets of an instance
    Svs {
        #[arg(long)]
        list: bool,
        instance: PathBuf,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SwitchDoc {
    pub vertex: String,
    pub from: usize,
    pub to: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolutionDocument {
    pub instance_hash: String,
    pub algo: Algo,
    pub mode: Mode,
    /// Absent for the unbounded solver.
    pub budget: Option<u64>,
    pub ops: Vec<ShiftOperation>,
    pub cost: u64,
    pub reached: Vec<String>,
    pub witness_svs: Option<Vec<SwitchDoc>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spt: Option<Vec<Option<usize>>>,
    pub wall_time_ms: f64,
}

/// Verification outcome for one invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

impl std::fmt::Display for Check {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.pass {
            write!(f, "PASS {}", self.name)
        } else {
            write!(f, "FAIL {}: {}", self.name, self.detail)
        }
    }
}

pub fn instance_hash(g: &TemporalKPathGraph) -> String {
    hex::encode(Sha256::digest(write_instance(g).as_bytes()))
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str, out: &mut dyn Write) -> CliResult<()> {
    match output {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Failed(e.to_string())),
    }
}

/// Normalized, validated working graph for an instance and budget.
pub fn prepare(raw: &TemporalKPathGraph, budget: u64) -> CliResult<TemporalKPathGraph> {
    let g = raw.normalize_source(raw.source(), budget)?;
    let violations = g.validate();
    if !violations.is_empty() {
        let msg: Vec<String> = violations.iter().map(|v| v.to_string()).collect();
        return Err(CliError::Invalid(msg.join("; ")));
    }
    Ok(g)
}

pub fn parse_spt(text: &str, k: usize, root: usize) -> CliResult<SwitchPathTree> {
    let mut parent = vec![None; k];
    for pair in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let bad = || CliError::Usage(format!("bad tree edge '{pair}', expected child:parent"));
        let (c, p) = pair.split_once(':').ok_or_else(bad)?;
        let c: usize = c.trim().parse().map_err(|_| bad())?;
        let p: usize = p.trim().parse().map_err(|_| bad())?;
        if c >= k || p >= k {
            return Err(CliError::Usage(format!(
                "tree edge '{pair}' names a path outside 0..{k}"
            )));
        }
        parent[c] = Some(p);
    }
    Ok(SwitchPathTree::from_parents(root, parent)?)
}

/// Delays the first edge of each path far enough, then advances edges back
/// to front, so that the labels become exactly `target`.
pub fn relabel_ops(g: &TemporalKPathGraph, target: &[Vec<Label>]) -> Vec<ShiftOperation> {
    let mut ops = Vec::new();
    for (p, want) in target.iter().enumerate() {
        let have = g.path(p).labels();
        let lift = want
            .iter()
            .enumerate()
            .map(|(i, &l)| l - have[0] - i as i64)
            .max()
            .unwrap_or(0)
            .max(0);
        let mut cur = have.to_vec();
        if lift > 0 {
            ops.push(ShiftOperation::new(p, 0, lift));
            for (i, c) in cur.iter_mut().enumerate() {
                *c = (*c).max(have[0] + lift + i as i64);
            }
        }
        for i in (0..want.len()).rev() {
            let d = want[i] - cur[i];
            if d != 0 {
                ops.push(ShiftOperation::new(p, i, d));
                for (j, c) in cur.iter_mut().enumerate().take(i + 1) {
                    *c = (*c).min(want[i] - (i - j) as i64);
                }
            }
        }
    }
    ops
}

fn switch_docs(g: &TemporalKPathGraph, svs: &SwitchVertexSet) -> Vec<SwitchDoc> {
    svs.switches()
        .iter()
        .map(|s| SwitchDoc {
            vertex: g.name(s.vertex).to_string(),
            from: s.from,
            to: s.to,
        })
        .collect()
}

fn names(g: &TemporalKPathGraph, set: impl IntoIterator<Item = VertexId>) -> Vec<String> {
    let mut out: Vec<String> = set.into_iter().map(|v| g.name(v).to_string()).collect();
    out.sort();
    out
}

/// Runs one solver on instance text and builds its solution document.
pub fn solve_text(text: &str, args: &SolveArgs) -> CliResult<SolutionDocument> {
    let raw = parse_instance(text)?;
    let hash = instance_hash(&raw);
    let budget = if args.algo == Algo::Unbounded {
        0
    } else {
        args.budget
    };
    let g = prepare(&raw, budget)?;
    let s = g.source();
    let mode = Mode::from(args.mode);
    let cfg = SolverConfig {
        exec: Exec::default(),
        limit_states: args.limit_states,
        limit_svs: DEFAULT_SVS_LIMIT,
    };
    let start = Instant::now();
    let run = || -> CliResult<SolutionDocument> {
        let mut spt_doc = None;
        let (algo_mode, doc_budget, sol): (Mode, Option<u64>, BudgetedSolution) = match args.algo {
            Algo::Unbounded => {
                let t = solve_mrpt(&g, s);
                let ops = relabel_ops(&g, &t.labels);
                let cost = tpshift_core::graph::total_cost(&ops);
                (
                    Mode::Shift,
                    None,
                    BudgetedSolution {
                        ops,
                        cost,
                        reached: t.reached,
                        witness_svs: Some(t.svs),
                    },
                )
            }
            Algo::XpB => (
                mode,
                Some(args.budget),
                budgeted::solve_xp_by_b_with(&g, s, args.budget, mode, &cfg)?,
            ),
            Algo::XpK => (
                mode,
                Some(args.budget),
                budgeted::solve_xp_by_k_with(&g, s, args.budget, mode, &cfg)?,
            ),
            Algo::FptDelay => {
                if mode != Mode::Delay {
                    return Err(CliError::Usage("fpt-delay requires --mode delay".into()));
                }
                (
                    mode,
                    Some(args.budget),
                    budgeted::solve_fpt_delay_with(&g, s, args.budget, &cfg)?,
                )
            }
            Algo::FptGeneral => (
                mode,
                Some(args.budget),
                budgeted::solve_fpt_general_with(&g, s, args.budget, mode, &cfg)?,
            ),
            Algo::FixedSpt => {
                let text = args
                    .spt
                    .as_deref()
                    .ok_or_else(|| CliError::Usage("fixed-spt requires --spt".into()))?;
                let tree = parse_spt(text, g.k(), g.source_path())?;
                spt_doc = Some(tree.parents().to_vec());
                (
                    mode,
                    Some(args.budget),
                    budgeted::solve_fixed_spt_with(&g, s, args.budget, mode, &tree, &cfg)?,
                )
            }
        };
        Ok(SolutionDocument {
            instance_hash: hash.clone(),
            algo: args.algo,
            mode: algo_mode,
            budget: doc_budget,
            cost: sol.cost,
            reached: names(&g, sol.reached.iter().copied()),
            witness_svs: sol.witness_svs.as_ref().map(|w| switch_docs(&g, w)),
            ops: sol.ops,
            spt: spt_doc,
            wall_time_ms: 0.0,
        })
    };
    let mut doc = match args.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?
            .install(run)?,
        None => run()?,
    };
    doc.wall_time_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(doc)
}

/// Replays a document against instance text; one check per invariant.
pub fn verify_text(text: &str, doc: &SolutionDocument) -> CliResult<Vec<Check>> {
    let raw = parse_instance(text)?;
    let mut checks = Vec::new();
    let mut check =
        |name: &'static str, pass: bool, detail: String| checks.push(Check { name, pass, detail });

    let hash = instance_hash(&raw);
    check(
        "instance hash",
        hash == doc.instance_hash,
        format!("expected {}, document has {}", hash, doc.instance_hash),
    );
    let g = prepare(&raw, doc.budget.unwrap_or(0))?;
    check(
        "mode respected",
        mode_respected(&doc.ops, doc.mode),
        format!("an operation has the wrong sign for {}", doc.mode),
    );

    let (shifted, cost) = match g.apply_sequence(&doc.ops) {
        Ok(x) => x,
        Err(e) => {
            check("ops apply", false, e.to_string());
            return Ok(checks);
        }
    };
    check(
        "cost mismatch",
        cost == doc.cost,
        format!("replayed cost {cost}, document says {}", doc.cost),
    );
    if let Some(b) = doc.budget {
        check(
            "cost within budget",
            cost <= b,
            format!("cost {cost} exceeds budget {b}"),
        );
    }
    let reached = match (&doc.spt, doc.algo) {
        (Some(parents), Algo::FixedSpt) => {
            let tree = SwitchPathTree::from_parents(g.source_path(), parents.clone())?;
            let mask = tree_reach_mask(&shifted, &tree);
            names(
                &shifted,
                (0..mask.len())
                    .filter(|&i| mask[i])
                    .map(|i| VertexId(i as u32)),
            )
        }
        (None, Algo::FixedSpt) => {
            check(
                "reach matches",
                false,
                "fixed-spt document lacks its tree".into(),
            );
            return Ok(checks);
        }
        _ => names(&shifted, shifted.reach_set(g.source())?),
    };
    let mut claimed = doc.reached.clone();
    claimed.sort();
    check(
        "reach matches",
        reached == claimed,
        format!(
            "replay reaches {} vertices, document lists {}",
            reached.len(),
            claimed.len()
        ),
    );

    if let Some(w) = &doc.witness_svs {
        let switches: Option<Vec<Switch>> = w
            .iter()
            .map(|s| {
                g.vertex_by_name(&s.vertex)
                    .map(|v| Switch::new(v, s.from, s.to))
            })
            .collect();
        let ok = switches.is_some_and(|sw| {
            let svs = SwitchVertexSet::new(sw);
            is_valid_svs(&shifted, &svs) && svs.is_temporal(&shifted).unwrap_or(false)
        });
        check(
            "witness temporal",
            ok,
            "witness is not a valid temporal switch-vertex-set after the ops".into(),
        );
    }
    Ok(checks)
}

fn cmd_solve(args: &SolveArgs, out: &mut dyn Write) -> CliResult<()> {
    let doc = solve_text(&read(&args.instance)?, args)?;
    let json =
        serde_json::to_string_pretty(&doc).map_err(|e| CliError::Failed(e.to_string()))? + "\n";
    emit(args.output.as_deref(), &json, out)
}

fn cmd_verify(args: &VerifyArgs, out: &mut dyn Write) -> CliResult<()> {
    let text = read(&args.instance)?;
    let doc: SolutionDocument = serde_json::from_str(&read(&args.solution)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", args.solution.display())))?;
    let checks = verify_text(&text, &doc)?;
    let mut report = String::new();
    for c in &checks {
        report.push_str(&format!("{c}\n"));
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    report.push_str(if failed == 0 { "PASS\n" } else { "FAIL\n" });
    emit(None, &report, out)?;
    if failed > 0 {
        return Err(CliError::Failed(format!("{failed} check(s) failed")));
    }
    Ok(())
}

fn cmd_gen(cmd: &GenCommand, out: &mut dyn Write, err: &mut dyn Write) -> CliResult<()> {
    match cmd {
        GenCommand::Random {
            k,
            n,
            lifetime,
            share,
            seed,
            output,
        } => {
            let g = gen_random(*k, *n, lifetime.unwrap_or(2 * *n as i64), *share, *seed)?;
            emit(output.as_deref(), &write_instance(&g), out)
        }
        GenCommand::McisDelay {
            omega,
            output,
            colors,
        } => {
            let mcis = parse_mcis(&read(colors)?)?;
            let gadget = gen_mcis_delay_gadget(&mcis, *omega)?;
            emit(output.as_deref(), &write_instance(&gadget.graph), out)?;
            writeln!(err, "b={}", gadget.budget).map_err(|e| CliError::Failed(e.to_string()))
        }
    }
}

fn cmd_enum(cmd: &EnumCommand, out: &mut dyn Write) -> CliResult<()> {
    let mut text = String::new();
    match cmd {
        EnumCommand::Spt { k, partial, list } => {
            if *k == 0 {
                return Err(CliError::Usage("k must be at least 1".into()));
            }
            let trees: Vec<SwitchPathTree> = enumerate_spts(*k, 0, *partial).collect();
            text.push_str(&format!("{}\n", trees.len()));
            if *list {
                for t in &trees {
                    let edges: Vec<String> = (0..*k)
                        .filter_map(|c| t.parent(c).map(|p| format!("{c}:{p}")))
                        .collect();
                    text.push_str(&format!("{}\n", edges.join(",")));
                }
            }
        }
        EnumCommand::Svs { list, instance } => {
            let raw = parse_instance(&read(instance)?)?;
            let g = prepare(&raw, 0)?;
            let all = enumerate_svss_limited(&g, DEFAULT_SVS_LIMIT)?;
            text.push_str(&format!("{}\n", all.len()));
            if *list {
                for svs in &all {
                    let parts: Vec<String> = switch_docs(&g, svs)
                        .iter()
                        .map(|s| format!("{}@{}->{}", s.vertex, s.from, s.to))
                        .collect();
                    text.push_str(&format!("{{{}}}\n", parts.join(", ")));
                }
            }
        }
    }
    emit(None, &text, out)
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return 2;
            }
            let _ = write!(out, "{}", e.render());
            return 0;
        }
    };
    let result = match &cli.command {
        Command::Solve(a) => cmd_solve(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Gen(g) => cmd_gen(g, out, err),
        Command::Enum(e) => cmd_enum(e, out),
    };
    match result {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
