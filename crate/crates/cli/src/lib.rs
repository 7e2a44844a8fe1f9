//! Command-line front end for the `upcover` solvers.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use upcover::generate::{GenConfig, Generator, Range, Shape};
use upcover::io::{parse_instance, write_instance, write_solution};
use upcover::model::{normalize_with_report, validate};
use upcover::oracle::{self, GridSpec, DEFAULT_WORK_BOUND};
use upcover::path::PathLayout;
use upcover::reductions::{knapsack_to_path, knapsack_to_star, parse_knapsack};
use upcover::{path, star, tree, Instance, Solution};

pub const WORK_BOUND_VAR: &str = "UPCOVER_WORK_BOUND";

#[derive(Debug, Parser)]
#[command(
    name = "upcover",
    version,
    about = "Exact solvers for covering location with edge upgrades"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve an instance and write the solution.
    Solve(SolveArgs),
    /// Decide whether some solution reaches a threshold.
    Decide(DecideArgs),
    /// Generate a random instance.
    Gen(GenArgs),
    /// Build a covering instance from a knapsack instance.
    Reduce(ReduceArgs),
    /// Time solvers over instances and emit CSV.
    Bench(BenchArgs),
    /// Validate an instance and report what normalization would change.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, ValueEnum)]
pub enum Algo {
    Auto,
    Star,
    Path,
    Tree,
    Brute,
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Algo::Auto => "auto",
            Algo::Star => "star",
            Algo::Path => "path",
            Algo::Tree => "tree",
            Algo::Brute => "brute",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    pub algo: Algo,
    /// Grid step for the exhaustive solver, e.g. `1`, `1/2`, `0.25`.
    #[arg(long, default_value = "1")]
    pub step: GridSpec,
    /// Output file, `-` for standard output.
    #[arg(long, short, default_value = "-")]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct DecideArgs {
    pub instance: PathBuf,
    #[arg(long)]
    pub threshold: f64,
    #[arg(long, value_enum, default_value_t = Algo::Auto)]
    pub algo: Algo,
    #[arg(long, default_value = "1")]
    pub step: GridSpec,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ShapeArg {
    Star,
    Path,
    Tree,
}

impl From<ShapeArg> for Shape {
    fn from(s: ShapeArg) -> Shape {
        match s {
            ShapeArg::Star => Shape::Star,
            ShapeArg::Path => Shape::Path,
            ShapeArg::Tree => Shape::Tree,
        }
    }
}

/// Inclusive range written `lo:hi`, or a single value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangeArg(pub Range);

impl FromStr for RangeArg {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let num = |t: &str| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| format!("bad range '{s}'"))
        };
        match s.split_once(':') {
            Some((lo, hi)) => Ok(RangeArg((num(lo)?, num(hi)?))),
            None => {
                let v = num(s)?;
                Ok(RangeArg((v, v)))
            }
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct GenParams {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value = "1:5")]
    pub length: RangeArg,
    #[arg(long, default_value = "0:4")]
    pub bound: RangeArg,
    #[arg(long, default_value = "1:3")]
    pub cost: RangeArg,
    #[arg(long, default_value = "1:5")]
    pub weight: RangeArg,
    #[arg(long, default_value = "1:4")]
    pub radius: RangeArg,
    #[arg(long, default_value = "0:5")]
    pub budget: RangeArg,
    #[arg(long, short = 'p', default_value_t = 1)]
    pub facilities: usize,
    #[arg(long)]
    pub uniform_weights: bool,
}

impl GenParams {
    pub fn config(&self, shape: ShapeArg, n: usize) -> GenConfig {
        GenConfig {
            shape: shape.into(),
            n,
            length: self.length.0,
            bound: self.bound.0,
            cost: self.cost.0,
            weight: self.weight.0,
            radius: self.radius.0,
            budget: self.budget.0,
            facilities: self.facilities,
            uniform_weights: self.uniform_weights,
        }
    }
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long, value_enum)]
    pub shape: ShapeArg,
    #[arg(long)]
    pub n: usize,
    #[command(flatten)]
    pub params: GenParams,
    #[arg(long, short, default_value = "-")]
    pub output: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReduceSource {
    Knapsack,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GadgetArg {
    Star,
    Path,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = ReduceSource::Knapsack)]
    pub from: ReduceSource,
    #[arg(long, value_enum)]
    pub to: GadgetArg,
    #[arg(long, short, default_value = "-")]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Instance files.
    pub instances: Vec<PathBuf>,
    /// Solvers to run on every instance; repeatable.
    #[arg(long, value_enum, default_values_t = vec![Algo::Auto])]
    pub algo: Vec<Algo>,
    /// Also generate instances of these sizes (needs `--shape`).
    #[arg(long, value_delimiter = ',')]
    pub sizes: Vec<usize>,
    #[arg(long, value_enum)]
    pub shape: Option<ShapeArg>,
    #[command(flatten)]
    pub gen: GenParams,
    /// Compare each value with the exhaustive solver where it is tractable.
    #[arg(long)]
    pub verify: bool,
    #[arg(long, short, default_value = "-")]
    pub output: String,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub instance: PathBuf,
}

/// Structural class of a network, most specific first.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Topology {
    Star,
    Path,
    Tree,
    General,
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Topology::Star => "star",
            Topology::Path => "path",
            Topology::Tree => "tree",
            Topology::General => "general",
        };
        f.write_str(s)
    }
}

pub fn detect_topology(instance: &Instance) -> Topology {
    if !instance.is_tree() {
        Topology::General
    } else if star::decompose_star(instance).is_ok() {
        Topology::Star
    } else if PathLayout::from_instance(instance).is_ok() {
        Topology::Path
    } else {
        Topology::Tree
    }
}

/// The solver `auto` picks: the most specific one whose preconditions hold.
pub fn auto_algo(instance: &Instance) -> Algo {
    let topo = detect_topology(instance);
    let single = instance.facilities == 1;
    if topo == Topology::Star && instance.has_uniform_weights() {
        Algo::Star
    } else if matches!(topo, Topology::Star | Topology::Path)
        && single
        && PathLayout::from_instance(instance).is_ok()
    {
        Algo::Path
    } else if topo != Topology::General
        && single
        && instance.integer
        && instance.has_integer_values()
    {
        Algo::Tree
    } else {
        Algo::Brute
    }
}

/// Oracle work bound from the environment, or the default.
pub fn work_bound() -> anyhow::Result<u128> {
    match std::env::var(WORK_BOUND_VAR) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{WORK_BOUND_VAR}: not a number: '{v}'")),
        Err(_) => Ok(DEFAULT_WORK_BOUND),
    }
}

/// Runs one solver; returns the solution and the solver actually used.
pub fn run_solver(
    instance: &Instance,
    algo: Algo,
    step: GridSpec,
    bound: u128,
) -> upcover::Result<(Solution, Algo)> {
    let algo = match algo {
        Algo::Auto => auto_algo(instance),
        a => a,
    };
    let sol = match algo {
        Algo::Star => star::solve_star_uniform_p(instance, instance.facilities)?,
        Algo::Path => path::solve_path_1(instance)?,
        Algo::Tree => tree::solve_tree_1(instance)?,
        Algo::Brute | Algo::Auto => {
            oracle::solve_exact_bounded(instance, instance.facilities, step, bound)?
        }
    };
    Ok((sol, algo))
}

fn read_instance(path: &Path) -> anyhow::Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let inst = parse_instance(&text).with_context(|| format!("parsing {}", path.display()))?;
    let violations = validate(&inst);
    if !violations.is_empty() {
        return Err(upcover::Error::InvalidInstance(violations))
            .with_context(|| format!("validating {}", path.display()));
    }
    Ok(inst)
}

fn emit(output: &str, text: &str) -> anyhow::Result<()> {
    if output == "-" {
        let mut out = std::io::stdout().lock();
        out.write_all(text.as_bytes())?;
        out.flush()?;
    } else {
        fs::write(output, text).with_context(|| format!("writing {output}"))?;
    }
    Ok(())
}

fn cmd_solve(args: &SolveArgs) -> anyhow::Result<()> {
    let inst = read_instance(&args.instance)?;
    let (sol, _) = run_solver(&inst, args.algo, args.step, work_bound()?)?;
    emit(&args.output, &write_solution(&sol, &inst))
}

fn cmd_decide(args: &DecideArgs) -> anyhow::Result<()> {
    let inst = read_instance(&args.instance)?;
    let (sol, _) = run_solver(&inst, args.algo, args.step, work_bound()?)?;
    println!("{}", sol.value >= args.threshold);
    Ok(())
}

fn cmd_gen(args: &GenArgs) -> anyhow::Result<()> {
    let inst =
        Generator::new(args.params.seed).instance(&args.params.config(args.shape, args.n))?;
    emit(&args.output, &write_instance(&inst))
}

fn cmd_reduce(args: &ReduceArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&args.input)
        .with_context(|| format!("reading {}", args.input.display()))?;
    let ReduceSource::Knapsack = args.from;
    let ks = parse_knapsack(&text)?;
    let gadget = match args.to {
        GadgetArg::Star => knapsack_to_star(&ks)?,
        GadgetArg::Path => knapsack_to_path(&ks)?,
    };
    let body = format!(
        "# threshold {}\n{}",
        upcover::io::format_number(gadget.threshold),
        write_instance(&gadget.instance)
    );
    emit(&args.output, &body)
}

/// One row of benchmark output.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub instance: String,
    pub algo: Algo,
    pub n: usize,
    pub m: usize,
    pub p: usize,
    pub radius: f64,
    pub budget: f64,
    /// `None` when the solver failed.
    pub value: Option<f64>,
    pub micros: Option<u128>,
    /// `None` when the oracle did not run.
    pub verified: Option<bool>,
}

pub const CSV_HEADER: &str = "instance,algo,n,m,p,R,B,value,usec,verified";

impl RunRecord {
    pub fn csv_row(&self) -> String {
        let na = || "NA".to_string();
        let f = upcover::io::format_number;
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.instance,
            self.algo,
            self.n,
            self.m,
            self.p,
            f(self.radius),
            f(self.budget),
            self.value.map_or_else(na, f),
            self.micros.map_or_else(na, |u| u.to_string()),
            self.verified.map_or_else(na, |v| v.to_string()),
        )
    }
}

pub fn bench_one(id: &str, inst: &Instance, algo: Algo, verify: bool, bound: u128) -> RunRecord {
    let start = Instant::now();
    let result = run_solver(inst, algo, GridSpec::UNIT, bound);
    let micros = start.elapsed().as_micros();
    let value = result.as_ref().ok().map(|(s, _)| s.value);
    let verified = match value {
        Some(v) if verify => {
            oracle::solve_exact_bounded(inst, inst.facilities, GridSpec::UNIT, bound)
                .ok()
                .map(|o| o.value == v)
        }
        _ => None,
    };
    RunRecord {
        instance: id.to_string(),
        algo,
        n: inst.n(),
        m: inst.m(),
        p: inst.facilities,
        radius: inst.radius,
        budget: inst.budget,
        value,
        micros: value.map(|_| micros),
        verified,
    }
}

pub fn bench_csv(records: &mut [RunRecord]) -> String {
    records.sort_by_cached_key(|r| (r.instance.clone(), r.algo.to_string()));
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in records.iter() {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

fn cmd_bench(args: &BenchArgs) -> anyhow::Result<()> {
    let bound = work_bound()?;
    let mut inputs: Vec<(String, Instance)> = Vec::new();
    for p in &args.instances {
        inputs.push((p.display().to_string(), read_instance(p)?));
    }
    if !args.sizes.is_empty() {
        let shape = args.shape.ok_or_else(|| anyhow!("--sizes needs --shape"))?;
        let seed = args.gen.seed;
        for &n in &args.sizes {
            let inst = Generator::new(seed).instance(&args.gen.config(shape, n))?;
            let name = format!("{shape:?}").to_lowercase();
            inputs.push((format!("{name}-n{n:07}-s{seed}"), inst));
        }
    }
    let mut records = Vec::new();
    for (id, inst) in &inputs {
        for &algo in &args.algo {
            records.push(bench_one(id, inst, algo, args.verify, bound));
        }
    }
    emit(&args.output, &bench_csv(&mut records))
}

fn cmd_check(args: &CheckArgs) -> anyhow::Result<()> {
    let text = fs::read_to_string(&args.instance)
        .with_context(|| format!("reading {}", args.instance.display()))?;
    let inst = parse_instance(&text)?;
    let violations = validate(&inst);
    if !violations.is_empty() {
        for v in &violations {
            println!("violation: {v}");
        }
        bail!("{} violation(s)", violations.len());
    }
    let (_, report) = normalize_with_report(&inst)?;
    println!("valid: n={} m={} p={}", inst.n(), inst.m(), inst.facilities);
    println!("topology: {}", detect_topology(&inst));
    println!("auto solver: {}", auto_algo(&inst));
    for (e, old, new) in &report.capped {
        println!("capped: edge {e} bound {old} -> {new}");
    }
    for e in &report.uncrossable {
        println!("uncrossable: edge {e}");
    }
    Ok(())
}

pub fn execute(cli: &Cli) -> anyhow::Result<()> {
    match &cli.command {
        Command::Solve(a) => cmd_solve(a),
        Command::Decide(a) => cmd_decide(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Reduce(a) => cmd_reduce(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Check(a) => cmd_check(a),
    }
}

/// Exit status for an error: 2 when a solver does not apply, 1 otherwise.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<upcover::Error>() {
        Some(e) if e.is_applicability() => 2,
        _ => 1,
    }
}
