//! The `capsteiner` command line.
//!
//! Exit codes: 0 solved or feasible, 1 infeasible (or a failed check),
//! 2 usage, parse or precondition error, 3 hard leaf refused.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::classify::{classify_instance_with, Algorithm, CaseLabel, ClassifyConfig};
use crate::dispatch::{run_algorithm, solve_auto, Outcome, SolveOptions};
use crate::error::{Error, Result};
use crate::io::{parse_dimacs, parse_stp, solution_from_json, solution_to_dot, solution_to_json, write_bench_csv, write_stp, BenchRow, RunStats};
use crate::model::instance::{GraphKind, Instance};
use crate::model::solution::{check_feasible_tree, Mode, SteinerSolution};
use crate::oracle::OracleLimits;
use crate::reductions::{gen_from_3sat3, gen_from_sat, gen_from_vdp, gen_from_vdp_squared, gen_from_vdp_uniform, random_vdp_instance};
use crate::suite::rng;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_REFUSED: i32 = 3;

/// Caps the worker pool (rayon threads).
pub const THREADS_ENV: &str = "CAPSTEINER_THREADS";

#[derive(Parser, Debug)]
#[command(name = "capsteiner", version, about = "Capacitated rooted Steiner trees")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Solve an instance.
    Solve(SolveArgs),
    /// Check a JSON solution against an instance.
    Check { file: PathBuf, solution: PathBuf },
    /// Print the case an instance falls in.
    Classify {
        file: PathBuf,
        #[arg(long)]
        kappa: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Write an instance built by a reduction gadget.
    Gen {
        #[command(subcommand)]
        gadget: Gadget,
        /// Output file; standard output if absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Exhaustive optimum of a small instance.
    Oracle {
        file: PathBuf,
        #[arg(long, default_value_t = 12)]
        max_n: usize,
        #[arg(long, default_value_t = 24)]
        max_m: usize,
        #[arg(long)]
        json: bool,
    },
    /// Classify and solve every `.stp` file of a directory.
    Bench {
        dir: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Optimize)]
        mode: ModeArg,
        /// Run the oracle on hard leaves instead of refusing them.
        #[arg(long)]
        oracle_hard: bool,
    },
}

#[derive(Args, Debug)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long, value_enum, default_value_t = AlgoArg::Auto)]
    algo: AlgoArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Optimize)]
    mode: ModeArg,
    #[arg(long)]
    kappa: Option<usize>,
    #[arg(long)]
    json: bool,
    /// Also write a Graphviz drawing here.
    #[arg(long)]
    dot: Option<PathBuf>,
    /// Oracle vertex limit.
    #[arg(long, default_value_t = 12)]
    max_n: usize,
    /// Leave `elapsed_ms` at 0, for reproducible output.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Subcommand, Debug)]
enum Gadget {
    /// Disjoint paths to capacitated tree, optimum preserving.
    Vdp(VdpArgs),
    /// Two pairs, uniform capacity `c`, `K` terminals.
    VdpUniform {
        #[command(flatten)]
        base: VdpArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        c: u32,
    },
    /// `p` pairs, `p²` terminals, uniform capacity `p`.
    VdpSquared(VdpArgs),
    /// CNF formula to a zero-length instance, feasible iff satisfiable.
    Sat {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        cmin: u32,
        #[arg(long)]
        cmax: u32,
    },
    /// 3-SAT with at most three occurrences per variable, uniform capacity.
    #[command(name = "3sat3")]
    ThreeSat3 {
        #[arg(long)]
        cnf: PathBuf,
        #[arg(long, default_value_t = 2)]
        c: u32,
        #[arg(long, value_enum, default_value_t = KindArg::Dag)]
        kind: KindArg,
    },
}

#[derive(Args, Debug)]
struct VdpArgs {
    #[arg(long, value_enum, default_value_t = KindArg::Dag)]
    kind: KindArg,
    #[arg(long, default_value_t = 6)]
    n: usize,
    #[arg(long, default_value_t = 2)]
    pairs: usize,
    #[arg(long, default_value_t = 0.45)]
    density: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgoArg {
    Auto,
    UnitCap,
    DagFixedK,
    UniformFixedK,
    UniformKappa,
    DagLargeCap,
    CminK1Fixed,
    CminK1,
    Oracle,
}

impl AlgoArg {
    fn algorithm(self) -> Option<Algorithm> {
        Some(match self {
            AlgoArg::Auto => return None,
            AlgoArg::UnitCap => Algorithm::UnitCap,
            AlgoArg::DagFixedK => Algorithm::DagFixedK,
            AlgoArg::UniformFixedK => Algorithm::UniformFixedK,
            AlgoArg::UniformKappa => Algorithm::UniformKappa,
            AlgoArg::DagLargeCap => Algorithm::DagLargeCap,
            AlgoArg::CminK1Fixed => Algorithm::CminK1Fixed,
            AlgoArg::CminK1 => Algorithm::CminK1,
            AlgoArg::Oracle => Algorithm::Oracle,
        })
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Decision,
    Optimize,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Decision => Mode::Decision,
            ModeArg::Optimize => Mode::Optimize,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum KindArg {
    Digraph,
    Dag,
    Undirected,
}

impl From<KindArg> for GraphKind {
    fn from(k: KindArg) -> GraphKind {
        match k {
            KindArg::Digraph => GraphKind::Digraph,
            KindArg::Dag => GraphKind::Dag,
            KindArg::Undirected => GraphKind::Undirected,
        }
    }
}

/// Parses `argv` (program name first), runs, prints, returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    init_threads();
    match execute(cli.cmd) {
        Ok(code) => code,
        Err(Error::HardLeaf { leaf, kind }) => {
            eprintln!("refused: leaf {leaf} ({kind}) is NP-hard; rerun with --algo oracle to search exhaustively");
            EXIT_REFUSED
        }
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_USAGE
        }
    }
}

fn init_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

fn in_file<T>(path: &Path, r: Result<T>) -> Result<T> {
    r.map_err(|e| Error::InFile { path: path.display().to_string(), source: Box::new(e) })
}

fn read_text(path: &Path) -> Result<String> {
    in_file(path, fs::read_to_string(path).map_err(Error::from))
}

fn read_instance(path: &Path) -> Result<Instance> {
    in_file(path, parse_stp(&read_text(path)?))
}

fn execute(cmd: Cmd) -> Result<i32> {
    match cmd {
        Cmd::Solve(a) => solve(a),
        Cmd::Check { file, solution } => check(&file, &solution),
        Cmd::Classify { file, kappa, json } => {
            let label = classify_instance_with(&read_instance(&file)?, kappa, &ClassifyConfig::default());
            if json {
                println!("{}", serde_json::to_string_pretty(&label)?);
            } else {
                print_label(&label);
            }
            Ok(EXIT_OK)
        }
        Cmd::Gen { gadget, out } => {
            let text = write_stp(&generate(gadget)?);
            match out {
                Some(p) => fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(EXIT_OK)
        }
        Cmd::Oracle { file, max_n, max_m, json } => {
            let inst = read_instance(&file)?;
            let opts = SolveOptions { oracle: OracleLimits::new(max_n, max_m), ..SolveOptions::default() };
            let label = classify_instance_with(&inst, None, &opts.classify);
            let start = Instant::now();
            let out = run_algorithm(&inst, Algorithm::Oracle, &opts)?;
            report(&inst, &label, &out, elapsed(start), json, None)
        }
        Cmd::Bench { dir, out, mode, oracle_hard } => bench(&dir, &out, mode.into(), oracle_hard),
    }
}

fn elapsed(start: Instant) -> u64 {
    start.elapsed().as_millis() as u64
}

fn solve(a: SolveArgs) -> Result<i32> {
    let inst = read_instance(&a.file)?;
    let opts = SolveOptions {
        mode: a.mode.into(),
        kappa: a.kappa,
        oracle: OracleLimits::new(a.max_n, 4 * a.max_n),
        classify: ClassifyConfig::default(),
    };
    let start = Instant::now();
    let (label, out) = match a.algo.algorithm() {
        None => solve_auto(&inst, &opts)?,
        Some(algo) => {
            let label = classify_instance_with(&inst, a.kappa, &opts.classify);
            (label, run_algorithm(&inst, algo, &opts)?)
        }
    };
    let ms = if a.no_timing { 0 } else { elapsed(start) };
    report(&inst, &label, &out, ms, a.json, a.dot.as_deref())
}

fn report(inst: &Instance, label: &CaseLabel, out: &Outcome, ms: u64, json: bool, dot: Option<&Path>) -> Result<i32> {
    let stats = RunStats { algorithm: out.algorithm.operation().into(), guarantee: out.guarantee, elapsed_ms: ms };
    if let Some(p) = dot {
        fs::write(p, solution_to_dot(inst, out.solution.as_ref()))?;
    }
    if json {
        print!("{}", solution_to_json(out.solution.as_ref(), label, &stats));
    } else {
        println!("leaf {} ({}), solved by {}", label.leaf_id, label.verdict, stats.algorithm);
        match &out.solution {
            Some(s) => {
                println!("feasible, total length {}", s.total_length);
                let arcs: Vec<String> = s.arcs.iter().map(|(u, v)| format!("{u}->{v}")).collect();
                println!("arcs {}", arcs.join(" "));
                if let Some(g) = out.guarantee {
                    println!("guarantee {g}");
                }
            }
            None => println!("infeasible"),
        }
    }
    Ok(if out.solution.is_some() { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn print_label(label: &CaseLabel) {
    let p = &label.params;
    println!("leaf {}", label.leaf_id);
    println!("kind {}", label.graph_kind);
    println!("verdict {}", label.verdict);
    println!("algorithm {}", label.chosen_algorithm());
    println!("K {} (fixed: {})", p.k, p.k_fixed);
    println!("capacities {}..{}{}", p.c_min, p.c_max, if p.uniform_capacity { " uniform" } else { "" });
    if let Some(k) = p.kappa {
        println!("kappa {k}");
    }
}

fn check(file: &Path, solution: &Path) -> Result<i32> {
    let inst = read_instance(file)?;
    let js = in_file(solution, solution_from_json(&read_text(solution)?))?;
    if !js.feasible {
        println!("solution claims infeasibility; nothing to check");
        return Ok(EXIT_INFEASIBLE);
    }
    let sol = match SteinerSolution::from_arcs(&inst, js.arcs.iter().copied()) {
        Ok(s) => s,
        Err(e) => {
            println!("violation: {e}");
            return Ok(EXIT_INFEASIBLE);
        }
    };
    let rep = check_feasible_tree(&inst, &sol);
    for v in &rep.violations {
        println!("violation: {v}");
    }
    if let Some(claimed) = &js.total_length {
        if *claimed != sol.total_length.to_string() {
            println!("violation: claimed length {claimed}, actual {}", sol.total_length);
            return Ok(EXIT_INFEASIBLE);
        }
    }
    if rep.ok {
        println!("ok, total length {}", sol.total_length);
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_INFEASIBLE)
    }
}

fn read_cnf(path: &Path) -> Result<crate::reductions::CnfFormula> {
    in_file(path, parse_dimacs(&read_text(path)?))
}

fn generate(g: Gadget) -> Result<Instance> {
    let vdp = |a: &VdpArgs| random_vdp_instance(a.kind.into(), a.n, a.pairs, a.density, &mut rng(a.seed));
    match g {
        Gadget::Vdp(a) => gen_from_vdp(&vdp(&a)),
        Gadget::VdpUniform { base, k, c } => gen_from_vdp_uniform(&vdp(&base), k, c),
        Gadget::VdpSquared(a) => gen_from_vdp_squared(&vdp(&a)),
        Gadget::Sat { cnf, k, cmin, cmax } => gen_from_sat(&read_cnf(&cnf)?, k, cmin, cmax),
        Gadget::ThreeSat3 { cnf, c, kind } => gen_from_3sat3(&read_cnf(&cnf)?, c, kind.into()),
    }
}

fn bench(dir: &Path, out: &Path, mode: Mode, oracle_hard: bool) -> Result<i32> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "stp"))
        .collect();
    files.sort();
    let opts = SolveOptions { mode, ..SolveOptions::default() };
    let mut rows = Vec::new();
    for f in &files {
        let name = f.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let inst = match read_instance(f) {
            Ok(i) => i,
            Err(e) => {
                eprintln!("{name}: {e}");
                continue;
            }
        };
        let label = classify_instance_with(&inst, None, &opts.classify);
        let mut row = BenchRow {
            file: name,
            kind: inst.kind.as_str().into(),
            n: inst.n,
            m: inst.edges.len(),
            k: inst.k(),
            case_leaf: label.leaf_id,
            algorithm: label.chosen_algorithm().into(),
            mode: mode.as_str().into(),
            status: "refused".into(),
            total_length: None,
            guarantee: None,
            elapsed_ms: 0,
        };
        let algo = label.algorithm.or(oracle_hard.then_some(Algorithm::Oracle));
        if let Some(algo) = algo {
            let start = Instant::now();
            let res = run_algorithm(&inst, algo, &SolveOptions { kappa: label.params.kappa, ..opts.clone() });
            row.elapsed_ms = elapsed(start);
            row.algorithm = algo.operation().into();
            match res {
                Ok(o) => {
                    row.status = if o.solution.is_some() { "solved" } else { "infeasible" }.into();
                    row.total_length = o.solution.map(|s| s.total_length.to_string());
                    row.guarantee = o.guarantee.map(|g| g.to_string());
                }
                Err(e) => {
                    eprintln!("{}: {e}", row.file);
                    row.status = "error".into();
                }
            }
        }
        rows.push(row);
    }
    write_bench_csv(&rows, fs::File::create(out)?)?;
    println!("{} instances written to {}", rows.len(), out.display());
    Ok(EXIT_OK)
}
