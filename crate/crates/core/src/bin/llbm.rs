//! Command-line front end: runs the verification procedures on instance
//! files or inline flags and emits machine-readable reports.
//!
//! Exit codes: 0 when every verdict passes, 1 when a violation is found
//! (including internal self-check failures), 2 on input errors.

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use llbm_core::deficit::{
    cube_case, deficit, derivative_terms, dim1_case, fd_sweep, monotonicity_check, peel_chain,
    zonoid_sweep, GeneratorGrid, SweepConfig,
};
use llbm_core::engine::{
    covariance_check, mixed_volume, mixed_volume_exact, oracle_mixed_volume,
    projection_identity_check, rational_to_f64, zonotope_volume, zonotope_volume_exact,
    MixedVolumeQuery,
};
use llbm_core::geometry::{LinearMap, Segment, TestFunction, Vector, Zonotope};
use llbm_core::instance::{
    ChainSpec, CovarianceCheckSpec, CubeCaseSpec, DeficitSpec, DerivativeSmoothSpec,
    DerivativeSpec, Dim1Spec, EqualityScanSpec, Experiment, InstanceFile, MixedVolumeSpec,
    MonotonicitySpec, OracleCompareSpec, ProjectionCheckSpec, SlotSpec, SmoothDeficitSpec,
    SweepSpec, VolumeSpec,
};
use llbm_core::report::{fmt17, sweep_csv, verdicts_csv, Relation, ReportRecord, RunReport, Verdict};
use llbm_core::smooth::{
    equality_scan, smooth_deficit, smooth_derivative_check, QuadratureGrid, SmoothBody,
    SmoothSupport as _,
};
use llbm_core::tolerances;
use llbm_core::{LlbmError, Result};

const DEFAULT_FD_STEPS: [f64; 3] = [1e-2, 5e-3, 2.5e-3];
const DEFAULT_SWEEP_SEED: u64 = 2026;

/// Verifies mixed-volume identities and the deficit inequality for
/// origin-symmetric bodies: an exact combinatorial path for zonotopes and a
/// spherical-quadrature path for smooth bodies.
#[derive(Parser)]
#[command(name = "llbm", version)]
struct Cli {
    /// Instance file with named bodies, functions, and experiments.
    #[arg(long, global = true, value_name = "PATH")]
    input: Option<PathBuf>,

    /// Write the machine-readable report to this path.
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,

    /// Machine-report format.  For the `sweep` subcommand, csv emits one
    /// row per trial; everywhere else, one row per verdict.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Master seed for randomized commands.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Trials per sweep cell (sweep only; default 100).
    #[arg(long, global = true)]
    trials: Option<usize>,

    /// Sweep dimensions, comma-separated (default 2,3,4,5).
    #[arg(long, global = true, value_delimiter = ',')]
    dims: Option<Vec<usize>>,

    /// Sweep generator counts, absolute, comma-separated (default: n, n+2,
    /// n+4 above each dimension).
    #[arg(long, global = true, value_delimiter = ',')]
    gens: Option<Vec<usize>>,

    /// Override the default bound of every discrepancy verdict and deficit
    /// floor of the command (convergence-order floors are not affected).
    #[arg(long, global = true)]
    tol: Option<f64>,

    /// Worker threads (default: LLBM_THREADS, then all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,

    /// Use exact rational arithmetic where available and judge the float
    /// path against it.
    #[arg(long, global = true)]
    exact: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Volume of a named body.
    Volume {
        /// Body name; defaults to the only body in the file.
        #[arg(long)]
        body: Option<String>,
    },
    /// Mixed volume of named bodies with multiplicities.
    MixedVolume {
        /// Slot list, e.g. cube:2,j (count 1 may be omitted).
        #[arg(long, value_name = "NAME[:COUNT],...")]
        slots: String,
    },
    /// The deficit quadratic form at a zonotope and an even function.
    Deficit {
        /// Body name; defaults to the only full-dimensional zonotope.
        #[arg(long)]
        body: Option<String>,
        #[arg(long)]
        function: String,
    },
    /// Deficit profile along t -> (K - I) + t I with the shifted function.
    Monotonicity {
        #[arg(long)]
        body: String,
        #[arg(long)]
        segment: String,
        #[arg(long)]
        function: String,
        /// Grid points on [0, 1].
        #[arg(long, default_value_t = 11)]
        points: usize,
    },
    /// Peel segments off base + I_1 + ... + I_m, renormalizing per station.
    Chain {
        #[arg(long)]
        base: String,
        #[arg(long, value_delimiter = ',')]
        segments: Vec<String>,
        #[arg(long)]
        function: String,
    },
    /// Randomized deficit-nonnegativity sweep over (dim, generators) cells.
    Sweep,
    /// Closed-form constants of the cube with an axis segment.
    CubeCase {
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        function: String,
    },
    /// One-dimensional deficit (always zero).
    Dim1 {
        /// Half-length of [-a, a].
        #[arg(long)]
        a: f64,
        /// Value of the function at both poles.
        #[arg(long)]
        fvals: Option<f64>,
        /// Named function (alternative to --fvals).
        #[arg(long)]
        function: Option<String>,
    },
    /// Closed-form derivative terms vs central finite differences.
    Derivative {
        #[arg(long)]
        body: String,
        #[arg(long)]
        segment: String,
        #[arg(long)]
        function: String,
        /// Strictly decreasing central-difference steps.
        #[arg(long, value_delimiter = ',')]
        steps: Option<Vec<f64>>,
    },
    /// Quadrature deficit of a smooth body with a refinement estimate.
    SmoothDeficit {
        #[arg(long)]
        body: String,
        #[arg(long)]
        function: String,
    },
    /// One-sided derivative identity on the quadrature path (dimension 3).
    DerivativeSmooth {
        #[arg(long)]
        body: String,
        #[arg(long)]
        segment: String,
        #[arg(long)]
        function: String,
        /// Strictly decreasing forward-difference steps.
        #[arg(long, value_delimiter = ',')]
        steps: Option<Vec<f64>>,
    },
    /// Equality scan: dilates give zero deficit, distant candidates do not.
    EqualityScan {
        #[arg(long)]
        body: String,
        #[arg(long, value_delimiter = ',')]
        candidates: Vec<String>,
    },
    /// Determinant engine vs the interpolation oracle.
    OracleCompare {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
        /// Copies of the first body (default n-1).
        #[arg(long)]
        first_count: Option<usize>,
        /// Copies of the second body (default the remainder).
        #[arg(long)]
        second_count: Option<usize>,
    },
    /// Projection identity for a segment slot.
    ProjectionCheck {
        #[arg(long)]
        segment: String,
        /// Exactly n-1 body names.
        #[arg(long, value_delimiter = ',')]
        bodies: Vec<String>,
    },
    /// Linear-image covariance of mixed volumes.
    CovarianceCheck {
        /// Row-major matrix, rows separated by ';', e.g. "2,0;1,1".
        #[arg(long, value_name = "A,B;C,D")]
        matrix: String,
        #[arg(long, value_name = "NAME[:COUNT],...")]
        slots: String,
    },
    /// Execute every experiment in the instance file.
    Run,
}

struct RunOptions {
    tol: Option<f64>,
    seed: Option<u64>,
    exact: bool,
    collect_trials: bool,
}

impl RunOptions {
    /// Upper bound for a discrepancy verdict.
    fn upper(&self, default: f64) -> f64 {
        self.tol.map(f64::abs).unwrap_or(default)
    }

    /// Lower bound (a small negative floor) for a nonnegativity verdict.
    fn floor(&self, default: f64) -> f64 {
        self.tol.map(|t| -t.abs()).unwrap_or(default)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                LlbmError::SelfCheck(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

fn run(cli: Cli) -> Result<bool> {
    configure_threads(cli.threads)?;
    let file = match &cli.input {
        Some(path) => InstanceFile::from_path(path)?,
        None => InstanceFile::empty(),
    };
    let opts = RunOptions {
        tol: cli.tol,
        seed: cli.seed,
        exact: cli.exact,
        collect_trials: cli.format == Format::Csv && matches!(cli.command, Command::Sweep),
    };
    let experiments = build_experiments(&cli, &file)?;

    let mut records = Vec::new();
    let mut sweep_rows: Vec<String> = Vec::new();
    for (index, e) in experiments.iter().enumerate() {
        let (record, rows) = execute(e, &file, &opts, index)?;
        print_human(&record);
        if let Some(rows) = rows {
            sweep_rows.push(rows);
        }
        records.push(record);
    }
    let report = RunReport::new(records);
    println!(
        "overall: {} ({} experiment{}, {} verdict{})",
        if report.pass { "PASS" } else { "FAIL" },
        report.records.len(),
        plural(report.records.len()),
        report.records.iter().map(|r| r.verdicts.len()).sum::<usize>(),
        plural(report.records.iter().map(|r| r.verdicts.len()).sum::<usize>()),
    );

    if let Some(path) = &cli.output {
        let text = match cli.format {
            Format::Json => serde_json::to_string_pretty(&report)? + "\n",
            Format::Csv => {
                if sweep_rows.len() == 1 && report.records.len() == 1 {
                    sweep_rows.pop().expect("length checked")
                } else {
                    verdicts_csv(&report.records)
                }
            }
        };
        std::fs::write(path, text)?;
        println!("report written to {}", path.display());
    }
    Ok(report.pass)
}

fn plural(n: usize) -> &'static str {
    if n == 1 {
        ""
    } else {
        "s"
    }
}

fn configure_threads(cli_threads: Option<usize>) -> Result<()> {
    let n = match cli_threads {
        Some(n) => Some(n),
        None => match std::env::var("LLBM_THREADS") {
            Ok(s) => Some(s.trim().parse::<usize>().map_err(|_| {
                LlbmError::InvalidInput(format!("LLBM_THREADS must be a thread count, got '{s}'"))
            })?),
            Err(std::env::VarError::NotPresent) => None,
            Err(e) => return Err(LlbmError::InvalidInput(format!("LLBM_THREADS: {e}"))),
        },
    };
    if let Some(n) = n {
        if n == 0 {
            return Err(LlbmError::InvalidInput("--threads must be at least 1".into()));
        }
        // A second build_global in the same process (tests) is harmless.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    Ok(())
}

/// Lowers the parsed command line to experiment records; `run` takes the
/// file's own list.
fn build_experiments(cli: &Cli, file: &InstanceFile) -> Result<Vec<Experiment>> {
    let needs_input = !matches!(
        cli.command,
        Command::Sweep | Command::Dim1 { function: None, .. }
    );
    if needs_input && cli.input.is_none() {
        return Err(LlbmError::InvalidInput(
            "this command reads named bodies/functions; pass --input FILE".into(),
        ));
    }
    let list = match &cli.command {
        Command::Run => file.experiments.clone(),
        Command::Volume { body } => {
            let body = match body {
                Some(b) => b.clone(),
                None => only_body(file)?,
            };
            vec![Experiment::Volume(VolumeSpec { id: None, body, exact: cli.exact })]
        }
        Command::MixedVolume { slots } => vec![Experiment::MixedVolume(MixedVolumeSpec {
            id: None,
            slots: parse_slots(slots)?,
            exact: cli.exact,
        })],
        Command::Deficit { body, function } => vec![Experiment::Deficit(DeficitSpec {
            id: None,
            body: body.clone(),
            function: function.clone(),
        })],
        Command::Monotonicity { body, segment, function, points } => {
            vec![Experiment::Monotonicity(MonotonicitySpec {
                id: None,
                body: body.clone(),
                segment: segment.clone(),
                function: function.clone(),
                points: *points,
            })]
        }
        Command::Chain { base, segments, function } => vec![Experiment::Chain(ChainSpec {
            id: None,
            base: base.clone(),
            segments: segments.clone(),
            function: function.clone(),
        })],
        Command::Sweep => vec![Experiment::Sweep(SweepSpec {
            id: None,
            dims: cli.dims.clone().unwrap_or_else(|| vec![2, 3, 4, 5]),
            gens: cli.gens.clone(),
            trials: cli.trials.unwrap_or(100),
            seed: cli.seed,
            collect_trials: false,
        })],
        Command::CubeCase { dim, function } => vec![Experiment::CubeCase(CubeCaseSpec {
            id: None,
            dim: *dim,
            function: function.clone(),
        })],
        Command::Dim1 { a, fvals, function } => vec![Experiment::Dim1(Dim1Spec {
            id: None,
            a: *a,
            fvals: *fvals,
            function: function.clone(),
        })],
        Command::Derivative { body, segment, function, steps } => {
            vec![Experiment::Derivative(DerivativeSpec {
                id: None,
                body: body.clone(),
                segment: segment.clone(),
                function: function.clone(),
                steps: steps.clone(),
            })]
        }
        Command::SmoothDeficit { body, function } => {
            vec![Experiment::SmoothDeficit(SmoothDeficitSpec {
                id: None,
                body: body.clone(),
                function: function.clone(),
                tol: cli.tol,
            })]
        }
        Command::DerivativeSmooth { body, segment, function, steps } => {
            vec![Experiment::DerivativeSmooth(DerivativeSmoothSpec {
                id: None,
                body: body.clone(),
                segment: segment.clone(),
                function: function.clone(),
                steps: steps.clone(),
            })]
        }
        Command::EqualityScan { body, candidates } => {
            vec![Experiment::EqualityScan(EqualityScanSpec {
                id: None,
                body: body.clone(),
                candidates: candidates.clone(),
            })]
        }
        Command::OracleCompare { first, second, first_count, second_count } => {
            vec![Experiment::OracleCompare(OracleCompareSpec {
                id: None,
                first: first.clone(),
                second: second.clone(),
                first_count: *first_count,
                second_count: *second_count,
            })]
        }
        Command::ProjectionCheck { segment, bodies } => {
            vec![Experiment::ProjectionCheck(ProjectionCheckSpec {
                id: None,
                segment: segment.clone(),
                bodies: bodies.clone(),
            })]
        }
        Command::CovarianceCheck { matrix, slots } => {
            vec![Experiment::CovarianceCheck(CovarianceCheckSpec {
                id: None,
                matrix: parse_matrix(matrix)?,
                slots: parse_slots(slots)?,
            })]
        }
    };
    Ok(list)
}

fn only_body(file: &InstanceFile) -> Result<String> {
    let mut names = file.bodies.keys();
    match (names.next(), names.next()) {
        (Some(one), None) => Ok(one.clone()),
        (None, _) => Err(LlbmError::InvalidInput("the file defines no bodies".into())),
        (Some(_), Some(_)) => Err(LlbmError::InvalidInput(format!(
            "several bodies are defined ({}); pass --body",
            file.bodies.keys().cloned().collect::<Vec<_>>().join(", ")
        ))),
    }
}

fn parse_slots(text: &str) -> Result<Vec<SlotSpec>> {
    text.split(',')
        .map(|part| {
            let part = part.trim();
            if part.is_empty() {
                return Err(LlbmError::InvalidInput("empty slot entry".into()));
            }
            match part.split_once(':') {
                Some((name, count)) => Ok(SlotSpec {
                    body: name.trim().to_string(),
                    count: count.trim().parse().map_err(|_| {
                        LlbmError::InvalidInput(format!("bad slot count in '{part}'"))
                    })?,
                }),
                None => Ok(SlotSpec { body: part.to_string(), count: 1 }),
            }
        })
        .collect()
}

fn parse_matrix(text: &str) -> Result<Vec<Vec<f64>>> {
    text.split(';')
        .map(|row| {
            row.split(',')
                .map(|x| {
                    x.trim().parse::<f64>().map_err(|_| {
                        LlbmError::InvalidInput(format!("bad matrix entry '{}'", x.trim()))
                    })
                })
                .collect()
        })
        .collect()
}

fn print_human(r: &ReportRecord) {
    println!(
        "{} {} ({})  [{:.3}s]",
        if r.pass { "PASS" } else { "FAIL" },
        r.id,
        r.command,
        r.elapsed_secs
    );
    if !r.summary.is_empty() {
        println!("     {}", r.summary);
    }
    for v in &r.verdicts {
        println!(
            "     {} {}: {} {} {}",
            if v.pass { "ok  " } else { "FAIL" },
            v.name,
            fmt17(v.value),
            match v.relation {
                Relation::AtMost => "<=",
                Relation::AtLeast => ">=",
            },
            fmt17(v.bound)
        );
    }
}

/// Runs one experiment; the optional string is the per-trial CSV of a
/// sweep that collected rows.
fn execute(
    exp: &Experiment,
    file: &InstanceFile,
    opts: &RunOptions,
    index: usize,
) -> Result<(ReportRecord, Option<String>)> {
    let start = Instant::now();
    let id = exp
        .id()
        .map(str::to_owned)
        .unwrap_or_else(|| format!("{}-{index}", exp.command()));
    let mut rec = ReportRecord::new(id, exp.command(), serde_json::to_value(exp)?);
    let mut csv = None;
    match exp {
        Experiment::Volume(s) => exec_volume(s, file, opts, &mut rec)?,
        Experiment::MixedVolume(s) => exec_mixed_volume(s, file, opts, &mut rec)?,
        Experiment::Deficit(s) => exec_deficit(s, file, opts, &mut rec)?,
        Experiment::Monotonicity(s) => exec_monotonicity(s, file, opts, &mut rec)?,
        Experiment::Chain(s) => exec_chain(s, file, opts, &mut rec)?,
        Experiment::Sweep(s) => csv = exec_sweep(s, opts, &mut rec)?,
        Experiment::CubeCase(s) => exec_cube_case(s, file, opts, &mut rec)?,
        Experiment::Dim1(s) => exec_dim1(s, file, opts, &mut rec)?,
        Experiment::Derivative(s) => exec_derivative(s, file, opts, &mut rec)?,
        Experiment::SmoothDeficit(s) => exec_smooth_deficit(s, file, opts, &mut rec)?,
        Experiment::DerivativeSmooth(s) => exec_derivative_smooth(s, file, opts, &mut rec)?,
        Experiment::EqualityScan(s) => exec_equality_scan(s, file, opts, &mut rec)?,
        Experiment::OracleCompare(s) => exec_oracle_compare(s, file, opts, &mut rec)?,
        Experiment::ProjectionCheck(s) => exec_projection_check(s, file, opts, &mut rec)?,
        Experiment::CovarianceCheck(s) => exec_covariance_check(s, file, opts, &mut rec)?,
    }
    rec.elapsed_secs = start.elapsed().as_secs_f64();
    Ok((rec, csv))
}

fn exec_volume(
    s: &VolumeSpec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let z = file.zonotope(&s.body)?;
    let v = zonotope_volume(&z);
    let mut outputs = json!({ "volume": v });
    if s.exact || opts.exact {
        let exact = zonotope_volume_exact(&z)?;
        let as_float = rational_to_f64(&exact);
        outputs["exact"] = json!({
            "numer": exact.numer().to_string(),
            "denom": exact.denom().to_string(),
            "value": as_float,
        });
        rec.judge(Verdict::at_most(
            "float_vs_exact",
            (v - as_float).abs(),
            opts.upper(1e-12) * (1.0 + as_float.abs()),
        ));
    }
    rec.summary = format!("volume = {}", fmt17(v));
    rec.outputs = outputs;
    Ok(())
}

fn resolve_query(file: &InstanceFile, slots: &[SlotSpec]) -> Result<MixedVolumeQuery> {
    if slots.is_empty() {
        return Err(LlbmError::InvalidInput("the slot list is empty".into()));
    }
    let mut groups = Vec::with_capacity(slots.len());
    let mut dim = 0;
    for slot in slots {
        let z = file.zonotope(&slot.body)?;
        dim = z.dim();
        groups.push((z, slot.count));
    }
    MixedVolumeQuery::from_groups(dim, groups)
}

fn exec_mixed_volume(
    s: &MixedVolumeSpec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let q = resolve_query(file, &s.slots)?;
    let v = mixed_volume(&q);
    let mut outputs = json!({ "mixed_volume": v });
    if s.exact || opts.exact {
        let exact = mixed_volume_exact(&q)?;
        let as_float = rational_to_f64(&exact);
        outputs["exact"] = json!({
            "numer": exact.numer().to_string(),
            "denom": exact.denom().to_string(),
            "value": as_float,
        });
        rec.judge(Verdict::at_most(
            "float_vs_exact",
            (v - as_float).abs(),
            opts.upper(1e-12) * (1.0 + as_float.abs()),
        ));
    }
    rec.summary = format!("mixed volume = {}", fmt17(v));
    rec.outputs = outputs;
    Ok(())
}

fn exec_deficit(
    s: &DeficitSpec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let name = match &s.body {
        Some(b) => b.clone(),
        None => file.default_deficit_body()?,
    };
    let k = file.zonotope(&name)?;
    let f = file.test_function(&s.function)?;
    let r = deficit(&k, &f)?;
    rec.judge(Verdict::at_least(
        "deficit_floor",
        r.deficit,
        opts.floor(tolerances::DEFICIT_FLOOR) * r.scale(),
    ));
    rec.summary = format!(
        "deficit = {} (normalized {})",
        fmt17(r.deficit),
        fmt17(r.normalized())
    );
    rec.outputs = json!({
        "body": name,
        "report": r,
        "scale": r.scale(),
        "normalized": r.normalized(),
    });
    Ok(())
}

fn exec_monotonicity(
    s: &MonotonicitySpec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let k = file.zonotope(&s.body)?;
    let seg = file.segment(&s.segment)?;
    let f = file.test_function(&s.function)?;
    let r = monotonicity_check(&k, &seg, &f, s.points)?;
    rec.judge(Verdict::at_most(
        "max_backslide",
        r.max_backslide,
        opts.upper(tolerances::MONOTONE_SLACK),
    ));
    let min_station = r
        .deficits
        .iter()
        .zip(&r.scales)
        .map(|(d, s)| d / s)
        .fold(f64::INFINITY, f64::min);
    rec.judge(Verdict::at_least(
        "min_station_normalized",
        min_station,
        opts.floor(tolerances::DEFICIT_FLOOR),
    ));
    rec.summary = format!(
        "constant = {}, {} stations, max backslide = {}",
        fmt17(r.constant),
        r.ts.len(),
        fmt17(r.max_backslide)
    );
    rec.outputs = serde_json::to_value(&r)?;
    Ok(())
}

fn exec_chain(
    s: &ChainSpec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let base = file.zonotope(&s.base)?;
    let segments: Vec<Segment> =
        s.segments.iter().map(|n| file.segment(n)).collect::<Result<_>>()?;
    let f = file.test_function(&s.function)?;
    let r = peel_chain(&base, &segments, &f)?;
    rec.judge(Verdict::at_most(
        "max_station_climb",
        r.max_climb,
        opts.upper(tolerances::MONOTONE_SLACK),
    ));
    rec.judge(Verdict::at_least(
        "final_normalized",
        r.final_normalized,
        opts.floor(tolerances::DEFICIT_FLOOR),
    ));
    rec.summary = format!(
        "{} stations, final normalized deficit = {}",
        r.stations.len(),
        fmt17(r.final_normalized)
    );
    rec.outputs = serde_json::to_value(&r)?;
    Ok(())
}

fn exec_sweep(
    s: &SweepSpec,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<Option<String>> {
    let seed = s.seed.or(opts.seed).unwrap_or(DEFAULT_SWEEP_SEED);
    let cfg = SweepConfig {
        dims: s.dims.clone(),
        gens: match &s.gens {
            Some(counts) => GeneratorGrid::Counts(counts.clone()),
            None => GeneratorGrid::Offsets(vec![0, 2, 4]),
        },
        trials: s.trials,
        seed,
        collect_trials: s.collect_trials || opts.collect_trials,
    };
    let r = zonoid_sweep(&cfg)?;
    rec.seed = Some(seed);
    let min_norm = r.cells.iter().map(|c| c.min_normalized).fold(f64::INFINITY, f64::min);
    let max_planted = r.cells.iter().map(|c| c.planted_normalized).fold(0.0, f64::max);
    rec.judge(Verdict::at_least(
        "min_normalized",
        min_norm,
        opts.floor(tolerances::DEFICIT_FLOOR),
    ));
    rec.judge(Verdict::at_most(
        "max_planted_normalized",
        max_planted,
        opts.upper(tolerances::PLANTED_ZERO),
    ));
    rec.judge(Verdict::at_most("violations", r.violations as f64, 0.0));
    rec.summary = format!(
        "{} cells, {} trials, {} violations, min normalized deficit = {}",
        r.cells.len(),
        r.total_trials,
        r.violations,
        fmt17(min_norm)
    );
    let csv = if cfg.collect_trials { Some(sweep_csv(&r)) } else { None };
    rec.outputs = serde_json::to_value(&r)?;
    Ok(csv)
}

fn exec_cube_case(
    s: &CubeCaseSpec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let f = file.test_function(&s.function)?;
    let r = cube_case(s.dim, &f)?;
    rec.judge(Verdict::at_most(
        "slab_segment_exact",
        (r.v_slab_seg - r.v_slab_seg_expected).abs(),
        opts.upper(0.0),
    ));
    rec.judge(Verdict::at_most(
        "slab_function_match",
        (r.v_slab_f - r.v_slab_f_expected).abs(),
        opts.upper(1e-12) * (1.0 + r.v_slab_f_expected.abs()),
    ));
    let ctol = opts.upper(tolerances::CUBE_C) * (1.0 + r.constant_expected.abs());
    rec.judge(Verdict::at_most(
        "constant_match",
        (r.constant - r.constant_expected).abs(),
        ctol,
    ));
    let (p, q) = r.normalized_pole_values;
    rec.judge(Verdict::at_most("shifted_pole_values", p.abs().max(q.abs()), ctol));
    rec.judge(Verdict::at_least(
        "deficit_floor",
        r.deficit.deficit,
        opts.floor(tolerances::CUBE_DEFICIT_FLOOR) * r.deficit.scale(),
    ));
    rec.summary = format!(
        "constant = {}, deficit = {}",
        fmt17(r.constant),
        fmt17(r.deficit.deficit)
    );
    rec.outputs = serde_json::to_value(&r)?;
    Ok(())
}

/// `f(u) = v |u|` in dimension one, as a support difference.
fn pole_function(v: f64) -> Result<TestFunction> {
    if !v.is_finite() {
        return Err(LlbmError::InvalidInput(format!("fvals must be finite, got {v}")));
    }
    let origin = Zonotope::new(1, vec![])?;
    if v == 0.0 {
        return TestFunction::support_diff(origin.clone(), origin);
    }
    let z = Zonotope::new(1, vec![Vector::new(vec![v.abs()])?])?;
    if v > 0.0 {
        TestFunction::support_diff(z, origin)
    } else {
        TestFunction::support_diff(origin, z)
    }
}

fn exec_dim1(
    s: &Dim1Spec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let f = match (&s.fvals, &s.function) {
        (Some(v), None) => pole_function(*v)?,
        (None, Some(name)) => file.test_function(name)?,
        (Some(_), Some(_)) => {
            return Err(LlbmError::InvalidInput(
                "pass either fvals or a function name, not both".into(),
            ))
        }
        (None, None) => {
            return Err(LlbmError::InvalidInput(
                "dim1 needs fvals or a function name".into(),
            ))
        }
    };
    let d = dim1_case(s.a, &f)?;
    let f1 = f.eval(&Vector::new(vec![1.0])?);
    rec.judge(Verdict::at_most(
        "deficit_zero",
        d.abs(),
        opts.upper(tolerances::DIM1_ZERO) * (f1 * f1 / s.a),
    ));
    rec.summary = format!("deficit = {} (f at the pole = {})", fmt17(d), fmt17(f1));
    rec.outputs = json!({ "deficit": d, "f_at_pole": f1 });
    Ok(())
}

fn exec_derivative(
    s: &DerivativeSpec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let k = file.zonotope(&s.body)?;
    let seg = file.segment(&s.segment)?;
    let f = file.test_function(&s.function)?;
    let terms = derivative_terms(&k, &seg, &f)?;
    let steps = s.steps.clone().unwrap_or_else(|| DEFAULT_FD_STEPS.to_vec());
    let sweep = fd_sweep(&k, &seg, &f, &steps, terms.rhs_total)?;
    let scale = terms.scale();
    rec.judge(Verdict::at_most(
        "fd_terminal_error",
        sweep.terminal_error(),
        opts.upper(tolerances::FD_MATCH) * scale,
    ));
    if let Some(order) = sweep.min_informative_order(tolerances::FD_ORDER_NOISE * scale) {
        rec.judge(Verdict::at_least("fd_order", order, tolerances::FD_ORDER_MIN));
    }
    rec.summary = format!(
        "rhs = {}, terminal fd error = {}",
        fmt17(terms.rhs_total),
        fmt17(sweep.terminal_error())
    );
    rec.outputs = json!({ "terms": terms, "fd": sweep });
    Ok(())
}

fn exec_smooth_deficit(
    s: &SmoothDeficitSpec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let k = file.smooth_body(&s.body)?;
    let f = file.smooth_function(&s.function)?;
    let grid = QuadratureGrid::standard(k.dim())?;
    let tol = s.tol.or(opts.tol).unwrap_or(1e-6).abs();
    let r = smooth_deficit(&k, &f, &grid, tol)?;
    rec.judge(Verdict::at_most("refinement_delta", r.refinement_delta, tol));
    rec.judge(Verdict::at_least(
        "deficit_floor",
        r.report.deficit,
        tolerances::SMOOTH_DEFICIT_FLOOR * r.report.scale(),
    ));
    rec.summary = format!(
        "deficit = {} (refined {})",
        fmt17(r.report.deficit),
        fmt17(r.refined_deficit)
    );
    rec.outputs = serde_json::to_value(&r)?;
    Ok(())
}

fn exec_derivative_smooth(
    s: &DerivativeSmoothSpec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let k = file.smooth_body(&s.body)?;
    let seg = file.segment(&s.segment)?;
    let f = file.smooth_function(&s.function)?;
    let grid = QuadratureGrid::standard(3)?;
    let steps = s.steps.clone().unwrap_or_else(|| DEFAULT_FD_STEPS.to_vec());
    let r = smooth_derivative_check(&k, seg.generator(), &f, &steps, &grid)?;
    let scale = r.term_projected.abs() + r.term_positive.abs() + r.term_square.abs() + 1.0;
    rec.judge(Verdict::at_most(
        "fd_vs_closed_form",
        r.deviation,
        opts.upper(tolerances::SMOOTH_FD_MATCH) * scale,
    ));
    rec.summary = format!(
        "rhs = {}, extrapolated fd = {}",
        fmt17(r.rhs_total),
        fmt17(r.extrapolated)
    );
    rec.outputs = serde_json::to_value(&r)?;
    Ok(())
}

fn exec_equality_scan(
    s: &EqualityScanSpec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let k = file.smooth_body(&s.body)?;
    let candidates: Vec<SmoothBody> =
        s.candidates.iter().map(|n| file.smooth_body(n)).collect::<Result<_>>()?;
    let grid = QuadratureGrid::standard(k.dim())?;
    let r = equality_scan(&k, &candidates, &grid)?;
    let max_dilate = r.dilate_deficits.iter().map(|(_, d)| d.abs()).fold(0.0, f64::max);
    rec.judge(Verdict::at_most(
        "max_dilate_normalized",
        max_dilate,
        opts.upper(tolerances::DILATE_CEILING),
    ));
    let distant_min = r
        .candidates
        .iter()
        .filter(|c| c.distance >= 0.1)
        .map(|c| c.deficit)
        .fold(f64::INFINITY, f64::min);
    if distant_min.is_finite() {
        rec.judge(Verdict::at_least(
            "min_distant_deficit",
            distant_min,
            opts.tol.map(f64::abs).unwrap_or(tolerances::EQUALITY_MARGIN),
        ));
    }
    rec.summary = format!(
        "{} dilates, {} candidates, max |dilate deficit| = {}",
        r.dilate_deficits.len(),
        r.candidates.len(),
        fmt17(max_dilate)
    );
    rec.outputs = serde_json::to_value(&r)?;
    Ok(())
}

fn exec_oracle_compare(
    s: &OracleCompareSpec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let z1 = file.zonotope(&s.first)?;
    let z2 = file.zonotope(&s.second)?;
    let n = z1.dim();
    let k1 = s.first_count.unwrap_or(n.saturating_sub(1));
    if k1 > n {
        return Err(LlbmError::InvalidInput(format!(
            "first_count {k1} exceeds the dimension {n}"
        )));
    }
    let k2 = s.second_count.unwrap_or(n - k1);
    let engine =
        mixed_volume(&MixedVolumeQuery::from_groups(n, vec![(z1.clone(), k1), (z2.clone(), k2)])?);
    let oracle = oracle_mixed_volume(&z1, &z2, k1, k2)?;
    let rel = (engine - oracle).abs() / (1.0 + engine.abs().max(oracle.abs()));
    rec.judge(Verdict::at_most(
        "oracle_relative_error",
        rel,
        opts.upper(tolerances::ORACLE_REL),
    ));
    rec.summary = format!("engine = {}, oracle = {}", fmt17(engine), fmt17(oracle));
    rec.outputs = json!({
        "engine": engine,
        "oracle": oracle,
        "relative_error": rel,
        "first_count": k1,
        "second_count": k2,
    });
    Ok(())
}

fn exec_projection_check(
    s: &ProjectionCheckSpec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let seg = file.segment(&s.segment)?;
    let bodies: Vec<Zonotope> =
        s.bodies.iter().map(|n| file.zonotope(n)).collect::<Result<_>>()?;
    let refs: Vec<&Zonotope> = bodies.iter().collect();
    let (lhs, rhs) = projection_identity_check(&seg, &refs)?;
    let rel = (lhs - rhs).abs() / (1.0 + lhs.abs().max(rhs.abs()));
    rec.judge(Verdict::at_most(
        "projection_identity",
        rel,
        opts.upper(tolerances::IDENTITY_REL),
    ));
    rec.summary = format!("lhs = {}, rhs = {}", fmt17(lhs), fmt17(rhs));
    rec.outputs = json!({ "lhs": lhs, "rhs": rhs, "relative_error": rel });
    Ok(())
}

fn exec_covariance_check(
    s: &CovarianceCheckSpec,
    file: &InstanceFile,
    opts: &RunOptions,
    rec: &mut ReportRecord,
) -> Result<()> {
    let map = LinearMap::new(s.matrix.clone())?;
    let q = resolve_query(file, &s.slots)?;
    let (lhs, rhs) = covariance_check(&map, &q)?;
    let rel = (lhs - rhs).abs() / (1.0 + lhs.abs().max(rhs.abs()));
    rec.judge(Verdict::at_most(
        "covariance_identity",
        rel,
        opts.upper(tolerances::IDENTITY_REL),
    ));
    rec.summary = format!("lhs = {}, rhs = {}", fmt17(lhs), fmt17(rhs));
    rec.outputs = json!({ "lhs": lhs, "rhs": rhs, "relative_error": rel });
    Ok(())
}
