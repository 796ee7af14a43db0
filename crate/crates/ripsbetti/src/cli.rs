//! Command-line front end: builders, homology, constructions, checkers and
//! the experiment harness behind reproducible flags.
//!
//! Exit codes: 0 success or check passed, 1 check failed, 2 input error,
//! 3 budget or margin error. Identical invocations produce byte-identical
//! output; wall-clock timings only appear under `--timings`.

use std::ffi::OsString;
use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::bounds::{
    check_crossing_cone, check_k23_condition, check_link_inequality, check_perp_disjunction,
    estimate_packing_constant, scaling_experiment, write_records_csv, write_records_json,
    ExperimentConfig, Family,
};
use crate::complexes::{build_rips_with_budget, set_face_budget, write_complex_json};
use crate::constructions::{
    ap3_free_set, bipartite_basis_cycles, construct_even_p, construct_s2, construct_s2km1,
    quasi_rips_from_matchings, rs_matching_family, Ap3Method, ConstructionParams,

};
use crate::cycles::{h1_cycle_basis, h1_class_rank, refine_epsilon_simple};
use crate::error::{Error, Result};
use crate::geometry::{
    read_cloud_path, write_cloud_csv, write_cloud_json, PointCloud, ThresholdPolicy,
};
use crate::homology::{betti_numbers, FieldSpec};

#[derive(Parser)]
#[command(name = "ripsbetti", version, about = "Rips complexes, Betti numbers, and extremal constructions", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Build the Rips complex of a point cloud and print its Betti numbers.
    Betti(BettiArgs),
    /// Generate one of the extremal configurations.
    Construct(ConstructArgs),
    /// Run a lemma checker; exits 0 on pass, 1 on failure.
    Check(CheckArgs),
    /// Print a normalized H1 cycle basis for a cloud's Rips complex.
    CycleBasis(CycleBasisArgs),
    /// Run a scaling experiment over a family of constructions.
    Experiment(ExperimentArgs),
    /// Estimate the unit-ball packing constant in a given dimension.
    Packing(PackingArgs),
}

#[derive(Args)]
struct BettiArgs {
    /// Point cloud file (CSV, or JSON with a .json extension).
    #[arg(long)]
    cloud: PathBuf,
    /// Largest homology degree to report.
    #[arg(long, default_value_t = 1)]
    pmax: usize,
    #[arg(long, default_value_t = 1.0)]
    threshold: f64,
    /// Field characteristic (a prime).
    #[arg(long, default_value_t = 2)]
    field: u32,
    /// Face enumeration cap; defaults to pmax + 1.
    #[arg(long)]
    dim_cap: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConstructArgs {
    /// One of: s2, s2km1, even-p, quasi-rs.
    family: String,
    /// Grid/copy parameter (s2, s2km1).
    #[arg(long)]
    k: Option<usize>,
    /// Vertex budget (s2km1, even-p) or N (quasi-rs).
    #[arg(long)]
    n: Option<usize>,
    /// Homology degree for even-p (even, at least 4).
    #[arg(long)]
    p: Option<usize>,
    /// Trimming cap for quasi-rs; defaults to 3N (no trimming).
    #[arg(long)]
    cap_third: Option<usize>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the quasi-rs matching family as JSON.
    #[arg(long)]
    family_out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    #[command(subcommand)]
    checker: Checker,
}

#[derive(Subcommand)]
enum Checker {
    /// beta_p(R(S)) <= beta_p(R(S-v)) + beta_{p-1}(lk(v)).
    LinkInequality {
        #[arg(long)]
        cloud: PathBuf,
        #[arg(long)]
        vertex: usize,
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long, default_value_t = 2)]
        field: u32,
    },
    /// Two crossing edges in the plane force a cone (cloud = u1,v1,u2,v2).
    Crossing {
        #[arg(long)]
        cloud: PathBuf,
    },
    /// No two left-part vertices share three common neighbors.
    K23 {
        /// Bipartite graph JSON {"U": n, "V": m, "edges": [[u, v], ...]}.
        #[arg(long)]
        graph: PathBuf,
    },
    /// Cluster-pair monotonicity/perpendicularity disjunction.
    Perp {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: PathBuf,
        #[arg(long, default_value_t = 0.01)]
        eps: f64,
        #[arg(long, default_value_t = 0.25)]
        alpha_threshold: f64,
    },
    /// Random two-clique gadgets: beta_1(X(G)) = max(0, q-1) plus the
    /// quadrilateral basis.
    Bipartite {
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 8)]
        max_part: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct CycleBasisArgs {
    #[arg(long)]
    cloud: PathBuf,
    /// Cube side for the epsilon-simple refinement; omitted = no refinement.
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// One of: s2, s2km1, even-p, quasi-rips-rs.
    #[arg(long)]
    family: String,
    /// Comma-separated size list, e.g. 12,27,48.
    #[arg(long)]
    sizes: String,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    field: u32,
    /// Copies parameter for the s2km1 family.
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long, default_value_t = 1)]
    jobs: usize,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
    /// Include measured wall times (output is no longer byte-reproducible).
    #[arg(long)]
    timings: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PackingArgs {
    #[arg(long)]
    dim: usize,
    #[arg(long, default_value_t = 40)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the CLI on the given argv (including the program name) and returns
/// the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.exit_code() == 0 { 0 } else { 2 };
            let _ = e.print();
            return code;
        }
    };
    if let Ok(budget) = std::env::var("RIPS_BUDGET") {
        match budget.parse::<usize>() {
            Ok(b) => set_face_budget(b),
            Err(_) => {
                eprintln!("error: InvalidInput: RIPS_BUDGET must be an integer");
                return 2;
            }
        }
    }
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}: {}", e.kind(), e);
            e.exit_code()
        }
    }
}

fn dispatch(cli: Cli) -> Result<i32> {
    match cli.command {
        Command::Betti(args) => cmd_betti(args),
        Command::Construct(args) => cmd_construct(args),
        Command::Check(args) => cmd_check(args.checker),
        Command::CycleBasis(args) => cmd_cycle_basis(args),
        Command::Experiment(args) => cmd_experiment(args),
        Command::Packing(args) => cmd_packing(args),
    }
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    match path {
        Some(p) => Ok(Box::new(std::io::BufWriter::new(File::create(p)?))),
        None => Ok(Box::new(std::io::BufWriter::new(std::io::stdout().lock()))),
    }
}

fn parse_field(p: u32) -> Result<FieldSpec> {
    FieldSpec::new(p)
}

fn cmd_betti(args: BettiArgs) -> Result<i32> {
    let cloud = read_cloud_path(&args.cloud)?;
    let field = parse_field(args.field)?;
    let dim_cap = args.dim_cap.unwrap_or(args.pmax + 1);
    if dim_cap < args.pmax + 1 {
        return Err(Error::InvalidInput(format!(
            "--dim-cap {dim_cap} is too small for --pmax {}",
            args.pmax
        )));
    }
    let policy = ThresholdPolicy::with_threshold(args.threshold);
    let complex = build_rips_with_budget(&cloud, &policy, dim_cap, crate::complexes::current_face_budget())?;
    let betti = betti_numbers(&complex, args.pmax, field)?;
    #[derive(Serialize)]
    struct Out {
        version: u32,
        field: u32,
        threshold: f64,
        face_counts: Vec<usize>,
        betti: Vec<usize>,
    }
    let out = Out {
        version: 1,
        field: args.field,
        threshold: args.threshold,
        face_counts: complex.face_counts(),
        betti: betti.betti,
    };
    let mut w = open_out(&args.out)?;
    serde_json::to_writer(&mut w, &out)?;
    writeln!(w)?;
    w.flush()?;
    Ok(0)
}

fn write_cloud(cloud: &PointCloud, format: OutputFormat, out: &Option<PathBuf>) -> Result<()> {
    let mut w = open_out(out)?;
    match format {
        OutputFormat::Csv => write_cloud_csv(cloud, &mut w)?,
        OutputFormat::Json => {
            write_cloud_json(cloud, &mut w)?;
            writeln!(w)?;
            w.flush()?;
        }
    }
    Ok(())
}

fn cmd_construct(args: ConstructArgs) -> Result<i32> {
    let params = ConstructionParams::default();
    match args.family.as_str() {
        "s2" => {
            let k = args.k.ok_or_else(|| Error::InvalidInput("s2 needs --k".into()))?;
            let cloud = construct_s2(k, &params)?;
            write_cloud(&cloud, args.format, &args.out)?;
        }
        "s2km1" => {
            let n = args.n.ok_or_else(|| Error::InvalidInput("s2km1 needs --n".into()))?;
            let k = args.k.unwrap_or(1);
            let cloud = construct_s2km1(n, k, &params)?;
            write_cloud(&cloud, args.format, &args.out)?;
        }
        "even-p" => {
            let n = args.n.ok_or_else(|| Error::InvalidInput("even-p needs --n".into()))?;
            let p = args.p.ok_or_else(|| Error::InvalidInput("even-p needs --p".into()))?;
            let even = construct_even_p(n, p, &params)?;
            write_cloud(&even.cloud, args.format, &args.out)?;
        }
        "quasi-rs" => {
            let n = args.n.ok_or_else(|| Error::InvalidInput("quasi-rs needs --n".into()))?;
            let set = ap3_free_set(n as u64, Ap3Method::Greedy);
            let family = rs_matching_family(&set, n as u64)?;
            if let Some(path) = &args.family_out {
                let file = File::create(path)?;
                crate::constructions::write_matching_family_json(&family, file)?;
            }
            let cap = args.cap_third.unwrap_or(3 * n);
            let bound = quasi_rips_from_matchings(&family, cap, 3)?;
            let mut w = open_out(&args.out)?;
            write_complex_json(&bound.complex, true, &mut w)?;
            writeln!(w)?;
            w.flush()?;
        }
        other => {
            return Err(Error::InvalidInput(format!(
                "unknown construction '{other}' (expected s2, s2km1, even-p, quasi-rs)"
            )))
        }
    }
    Ok(0)
}

fn cmd_check(checker: Checker) -> Result<i32> {
    let policy = ThresholdPolicy::default();
    match checker {
        Checker::LinkInequality { cloud, vertex, p, field } => {
            let cloud = read_cloud_path(&cloud)?;
            let report = check_link_inequality(&cloud, vertex, p, parse_field(field)?, &policy)?;
            println!("{}", serde_json::to_string(&report)?);
            Ok(if report.holds { 0 } else { 1 })
        }
        Checker::Crossing { cloud } => {
            let cloud = read_cloud_path(&cloud)?;
            if cloud.len() != 4 || cloud.dim() != 2 {
                return Err(Error::InvalidInput(
                    "crossing check needs exactly 4 planar points (u1, v1, u2, v2)".into(),
                ));
            }
            let pt = |i: usize| [cloud.point(i)[0], cloud.point(i)[1]];
            let is_cone = check_crossing_cone(pt(0), pt(1), pt(2), pt(3), &policy)?;
            println!("{{\"version\":1,\"cone\":{is_cone}}}");
            Ok(if is_cone { 0 } else { 1 })
        }
        Checker::K23 { graph } => {
            #[derive(serde::Deserialize)]
            struct GraphJson {
                #[serde(rename = "U")]
                u: usize,
                #[serde(rename = "V")]
                v: usize,
                edges: Vec<(u32, u32)>,
            }
            let data: GraphJson = serde_json::from_reader(File::open(graph)?)?;
            let report = check_k23_condition(data.u, data.v, &data.edges)?;
            println!("{}", serde_json::to_string(&report)?);
            Ok(if report.condition_holds { 0 } else { 1 })
        }
        Checker::Perp { u, v, eps, alpha_threshold } => {
            let u = read_cloud_path(&u)?;
            let v = read_cloud_path(&v)?;
            let report = check_perp_disjunction(&u, &v, eps, alpha_threshold)?;
            println!("{}", serde_json::to_string(&report)?);
            Ok(if report.flagged_pairs == 0 { 0 } else { 1 })
        }
        Checker::Bipartite { count, max_part, seed } => {
            let field = FieldSpec::default();
            for index in 0..count {
                let gadget = crate::bounds::campaign::random_gadget(seed, index, max_part);
                let complex = crate::complexes::flag_skeleton(&gadget.graph, 2)?;
                let beta1 = betti_numbers(&complex, 1, field)?.betti[1];
                let q = gadget.residual.component_count();
                if beta1 != q.saturating_sub(1) {
                    println!("{{\"version\":1,\"failed_index\":{index},\"beta1\":{beta1},\"q\":{q}}}");
                    return Ok(1);
                }
                let cycles = bipartite_basis_cycles(&gadget);
                let rank = h1_class_rank(&complex, &cycles, field)?;
                if rank != cycles.len() || rank != beta1 {
                    println!("{{\"version\":1,\"failed_index\":{index},\"basis_rank\":{rank}}}");
                    return Ok(1);
                }
            }
            println!("{{\"version\":1,\"checked\":{count},\"failures\":0}}");
            Ok(0)
        }
    }
}

fn cmd_cycle_basis(args: CycleBasisArgs) -> Result<i32> {
    let cloud = read_cloud_path(&args.cloud)?;
    let complex = crate::complexes::build_rips(&cloud, &ThresholdPolicy::default(), 2)?;
    let basis = h1_cycle_basis(&complex)?;
    #[derive(Serialize)]
    struct Out {
        version: u32,
        beta1: usize,
        cycles: Vec<crate::cycles::CycleRep>,
        #[serde(skip_serializing_if = "Option::is_none")]
        non_epsilon_simple: Option<usize>,
    }
    let out = match args.epsilon {
        Some(eps) => {
            let refined = refine_epsilon_simple(&basis, &cloud, eps)?;
            Out {
                version: 1,
                beta1: refined.basis.len(),
                cycles: refined.basis.cycles,
                non_epsilon_simple: Some(refined.non_epsilon_simple),
            }
        }
        None => Out {
            version: 1,
            beta1: basis.len(),
            cycles: basis.cycles,
            non_epsilon_simple: None,
        },
    };
    let mut w = open_out(&args.out)?;
    serde_json::to_writer(&mut w, &out)?;
    writeln!(w)?;
    w.flush()?;
    Ok(0)
}

fn cmd_experiment(args: ExperimentArgs) -> Result<i32> {
    let sizes: Result<Vec<usize>> = args
        .sizes
        .split(',')
        .map(|s| {
            s.trim()
                .parse::<usize>()
                .map_err(|_| Error::InvalidInput(format!("bad size '{s}' in --sizes")))
        })
        .collect();
    let config = ExperimentConfig {
        family: Family::parse(&args.family)?,
        sizes: sizes?,
        p: args.p,
        field: parse_field(args.field)?,
        seed: args.seed,
        k: args.k,
        jobs: args.jobs.max(1),
    };
    let (records, summary) = scaling_experiment(&config)?;
    let mut w = open_out(&args.out)?;
    match args.format {
        OutputFormat::Csv => {
            write_records_csv(&records, args.timings, &mut w)?;
            writeln!(w, "{}", serde_json::to_string(&summary)?)?;
        }
        OutputFormat::Json => {
            write_records_json(&records, &summary, args.timings, &mut w)?;
            writeln!(w)?;
        }
    }
    w.flush()?;
    Ok(0)
}

fn cmd_packing(args: PackingArgs) -> Result<i32> {
    let est = estimate_packing_constant(args.dim, args.trials, args.seed)?;
    let mut w = open_out(&args.out)?;
    #[derive(Serialize)]
    struct Out {
        version: u32,
        dim: usize,
        c_lower: usize,
        witness: Vec<Vec<f64>>,
    }
    serde_json::to_writer(
        &mut w,
        &Out { version: 1, dim: est.dim, c_lower: est.c_lower, witness: est.witness },
    )?;
    writeln!(w)?;
    w.flush()?;
    Ok(0)
}

/// Convenience for tests: run against a path-free argv slice.
pub fn run_args(args: &[&str]) -> i32 {
    run(std::iter::once("ripsbetti").chain(args.iter().copied()))
}
