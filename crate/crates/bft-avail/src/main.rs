//! Command-line front end for the availability pipeline.
//!
//! Exit codes: 0 on success, 2 on usage or validation errors, 3 on numerical
//! failures (solver or simulation).

use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bft_avail::availability::{availability, sweep_n, sweep_ratio, SweepOptions, SweepTable};
use bft_avail::dist::{LocationRounding, Preset};
use bft_avail::error::{Error, Result};
use bft_avail::generator::build_generator;
use bft_avail::model::{build_scenario, SystemConfig};
use bft_avail::report::{format_sig, parse_csv, plot_script, write_atomic, RunManifest};
use bft_avail::sim::{simulate, SimConfig};
use bft_avail::solver::{solve, solve_replaced_equation, solve_svd, SolverKind};

#[derive(Parser)]
#[command(
    name = "bft-avail",
    version,
    about = "Steady-state availability of Byzantine fault-tolerant clusters"
)]
struct Cli {
    /// Worker threads for sweep cells and simulation replications
    /// (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one (N, f) scenario and print its availability.
    Solve(SolveArgs),
    /// Sweep cluster sizes for one or more fault distributions; write CSV.
    Sweep(SweepArgs),
    /// Sweep cluster sizes for several breakdown/repair ratios; write CSV.
    RatioSweep(RatioSweepArgs),
    /// Estimate availability of one scenario by stochastic simulation.
    Simulate(SimulateArgs),
    /// Turn a sweep CSV into a self-contained gnuplot script.
    Plot(PlotArgs),
}

#[derive(Args)]
struct RateArgs {
    /// Breakdown/repair ratio; shorthand for --xi <ratio> --eta 1.
    #[arg(long, conflicts_with_all = ["xi", "eta"])]
    ratio: Option<f64>,

    /// Per-server breakdown rate.
    #[arg(long, requires = "eta")]
    xi: Option<f64>,

    /// Per-facility repair rate.
    #[arg(long, requires = "xi")]
    eta: Option<f64>,
}

impl RateArgs {
    fn resolve(&self) -> Result<(f64, f64)> {
        match (self.ratio, self.xi, self.eta) {
            (Some(r), None, None) => Ok((r, 1.0)),
            (None, Some(xi), Some(eta)) => Ok((xi, eta)),
            _ => Err(Error::InvalidConfig(
                "provide --ratio, or both --xi and --eta".into(),
            )),
        }
    }
}

#[derive(Args)]
struct SolveArgs {
    /// Cluster size N.
    #[arg(long)]
    n: u32,

    /// Byzantine server count f.
    #[arg(long)]
    f: u32,

    #[command(flatten)]
    rates: RateArgs,

    #[arg(long, value_enum, default_value_t = SolveRoute::Auto)]
    solver: SolveRoute,

    /// Also write the result as a one-row CSV.
    #[arg(long)]
    out: Option<PathBuf>,

    /// Skip rate validation (debugging aid; zero rates make the balance
    /// equations singular and demonstrate the numerical-failure exit path).
    #[arg(long, hide = true)]
    allow_zero_rates: bool,
}

#[derive(Args)]
struct SweepArgs {
    /// Smallest cluster size.
    #[arg(long)]
    n_min: u32,

    /// Largest cluster size.
    #[arg(long)]
    n_max: u32,

    /// Breakdown/repair ratio (repair rate is pinned to 1).
    #[arg(long)]
    ratio: f64,

    /// Comma-separated distribution presets, e.g.
    /// fig3_uniform,fig3_poisson,fig3_binomial,fig3_degenerate.
    #[arg(long, value_delimiter = ',', value_parser = parse_preset, required = true)]
    dists: Vec<Preset>,

    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,

    #[arg(long, value_enum, default_value_t = SweepRoute::Replaced)]
    solver: SweepRoute,

    /// How presets with a fractional degenerate location round it.
    #[arg(long, value_enum, default_value_t = Rounding::Floor)]
    degenerate_rounding: Rounding,
}

#[derive(Args)]
struct RatioSweepArgs {
    /// Smallest cluster size.
    #[arg(long)]
    n_min: u32,

    /// Largest cluster size.
    #[arg(long)]
    n_max: u32,

    /// Comma-separated breakdown/repair ratios, e.g. 0.01,0.015,0.02.
    #[arg(long, value_delimiter = ',', required = true)]
    ratios: Vec<f64>,

    /// Distribution preset applied at every cluster size.
    #[arg(long, value_parser = parse_preset)]
    dist: Preset,

    /// Output CSV path.
    #[arg(long)]
    out: PathBuf,

    #[arg(long, value_enum, default_value_t = SweepRoute::Replaced)]
    solver: SweepRoute,

    /// How presets with a fractional degenerate location round it.
    #[arg(long, value_enum, default_value_t = Rounding::Floor)]
    degenerate_rounding: Rounding,
}

#[derive(Args)]
struct SimulateArgs {
    /// Cluster size N.
    #[arg(long)]
    n: u32,

    /// Byzantine server count f.
    #[arg(long)]
    f: u32,

    #[command(flatten)]
    rates: RateArgs,

    /// Simulated time per replication.
    #[arg(long, default_value_t = 100_000.0)]
    horizon: f64,

    /// Warmup time excluded from the average (default: 1% of the horizon).
    #[arg(long)]
    warmup: Option<f64>,

    /// Independent replications.
    #[arg(long, default_value_t = 16)]
    reps: u32,

    /// Random seed; a fixed seed reproduces the estimate exactly.
    #[arg(long, default_value_t = 1)]
    seed: u64,

    /// Also write one CSV row per replication.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Input CSV as written by sweep or ratio-sweep.
    #[arg(long)]
    csv: PathBuf,

    /// Output gnuplot script path.
    #[arg(long)]
    out: PathBuf,

    /// Plot title (default: the CSV file stem).
    #[arg(long)]
    title: Option<String>,

    /// Upper bound of the availability axis.
    #[arg(long, default_value_t = 1.0)]
    ymax: f64,
}

#[derive(ValueEnum, Clone, Copy)]
enum SolveRoute {
    Auto,
    Svd,
    Replaced,
    /// Run both routes and print their difference.
    Both,
}

#[derive(ValueEnum, Clone, Copy)]
enum SweepRoute {
    Auto,
    Svd,
    Replaced,
}

impl From<SweepRoute> for SolverKind {
    fn from(r: SweepRoute) -> Self {
        match r {
            SweepRoute::Auto => SolverKind::Auto,
            SweepRoute::Svd => SolverKind::Svd,
            SweepRoute::Replaced => SolverKind::ReplacedEquation,
        }
    }
}

#[derive(ValueEnum, Clone, Copy)]
enum Rounding {
    Floor,
    Nearest,
}

impl From<Rounding> for LocationRounding {
    fn from(r: Rounding) -> Self {
        match r {
            Rounding::Floor => LocationRounding::Floor,
            Rounding::Nearest => LocationRounding::Nearest,
        }
    }
}

fn parse_preset(s: &str) -> Result<Preset> {
    s.parse()
}

fn main() {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs).build_global() {
            eprintln!("warning: could not size the worker pool: {e}");
        }
    }
    if let Err(e) = run(cli.command) {
        eprintln!("error: {e}");
        let mut source = std::error::Error::source(&e);
        while let Some(s) = source {
            eprintln!("  caused by: {s}");
            source = s.source();
        }
        std::process::exit(if e.is_validation() { 2 } else { 3 });
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::RatioSweep(args) => cmd_ratio_sweep(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Plot(args) => cmd_plot(args),
    }
}

fn warn_if_unstable(config: &SystemConfig) {
    if let Some(w) = config.stability_warning() {
        eprintln!("warning: {w}");
    }
}

fn cmd_solve(args: SolveArgs) -> Result<()> {
    let started = Instant::now();
    let (xi, eta) = args.rates.resolve()?;
    let config = if args.allow_zero_rates {
        SystemConfig::new_unchecked(args.n, xi, eta)
    } else {
        SystemConfig::new(args.n, xi, eta)?
    };
    warn_if_unstable(&config);
    let scenario = build_scenario(&config, args.f)?;
    let generator = build_generator(&scenario);

    let value = match args.solver {
        SolveRoute::Both => {
            let via_svd = availability(&solve_svd(&generator)?).availability;
            let via_lu = availability(&solve_replaced_equation(&generator)?).availability;
            println!("availability[svd] = {}", format_sig(via_svd));
            println!("availability[replaced] = {}", format_sig(via_lu));
            println!("difference = {:.3e}", (via_svd - via_lu).abs());
            via_svd
        }
        route => {
            let kind = match route {
                SolveRoute::Auto => SolverKind::Auto,
                SolveRoute::Svd => SolverKind::Svd,
                SolveRoute::Replaced => SolverKind::ReplacedEquation,
                SolveRoute::Both => unreachable!(),
            };
            let result = availability(&solve(&generator, kind)?);
            println!("availability = {}", format_sig(result.availability));
            result.availability
        }
    };

    if let Some(out) = &args.out {
        let csv = format!("N,f,availability\n{},{},{}\n", args.n, args.f, format_sig(value));
        write_atomic(out, &csv)?;
        RunManifest::new("solve")
            .param("n", args.n)
            .param("f", args.f)
            .param("xi", xi)
            .param("eta", eta)
            .output(out)
            .duration(started.elapsed().as_secs_f64())
            .write_beside(out)?;
    }
    Ok(())
}

fn write_table(
    table: &SweepTable,
    out: &Path,
    manifest: RunManifest,
    started: Instant,
) -> Result<()> {
    write_atomic(out, &table.csv_string())?;
    manifest.output(out).duration(started.elapsed().as_secs_f64()).write_beside(out)?;
    println!("wrote {} rows to {}", table.n_values().len(), out.display());
    Ok(())
}

fn cmd_sweep(args: SweepArgs) -> Result<()> {
    let started = Instant::now();
    if args.ratio >= 1.0 {
        warn_if_unstable(&SystemConfig::new(args.n_min.max(4), args.ratio, 1.0)?);
    }
    let opts = SweepOptions {
        solver: args.solver.into(),
        rounding: args.degenerate_rounding.into(),
    };
    let table = sweep_n(args.n_min..=args.n_max, args.ratio, &args.dists, &opts)?;
    let names: Vec<&str> = args.dists.iter().map(|p| p.name()).collect();
    let manifest = RunManifest::new("sweep")
        .param("n_min", args.n_min)
        .param("n_max", args.n_max)
        .param("ratio", args.ratio)
        .param("dists", names.join(","));
    write_table(&table, &args.out, manifest, started)
}

fn cmd_ratio_sweep(args: RatioSweepArgs) -> Result<()> {
    let started = Instant::now();
    let opts = SweepOptions {
        solver: args.solver.into(),
        rounding: args.degenerate_rounding.into(),
    };
    let table = sweep_ratio(args.n_min..=args.n_max, &args.ratios, args.dist, &opts)?;
    let ratios: Vec<String> = args.ratios.iter().map(|r| r.to_string()).collect();
    let manifest = RunManifest::new("ratio-sweep")
        .param("n_min", args.n_min)
        .param("n_max", args.n_max)
        .param("ratios", ratios.join(","))
        .param("dist", args.dist.name());
    write_table(&table, &args.out, manifest, started)
}

fn cmd_simulate(args: SimulateArgs) -> Result<()> {
    let started = Instant::now();
    let (xi, eta) = args.rates.resolve()?;
    let config = SystemConfig::new(args.n, xi, eta)?;
    warn_if_unstable(&config);
    let scenario = build_scenario(&config, args.f)?;
    let sim_config = match args.warmup {
        Some(w) => SimConfig::with_warmup(scenario, args.horizon, w, args.seed, args.reps)?,
        None => SimConfig::new(scenario, args.horizon, args.seed, args.reps)?,
    };

    let estimate = simulate(&sim_config)?;
    let analytic = availability(&solve(&build_generator(&scenario), SolverKind::Auto)?);

    println!("estimate = {}", format_sig(estimate.mean_availability));
    println!("standard_error = {:.3e}", estimate.standard_error);
    println!("analytic = {}", format_sig(analytic.availability));
    if estimate.standard_error > 0.0 {
        let z = (estimate.mean_availability - analytic.availability) / estimate.standard_error;
        println!("z = {z:.2}");
    } else {
        println!("z = n/a (single replication)");
    }

    if let Some(out) = &args.out {
        let mut csv = String::from("rep,availability\n");
        for (i, v) in estimate.replication_means.iter().enumerate() {
            csv.push_str(&format!("{i},{}\n", format_sig(*v)));
        }
        write_atomic(out, &csv)?;
        RunManifest::new("simulate")
            .param("n", args.n)
            .param("f", args.f)
            .param("xi", xi)
            .param("eta", eta)
            .param("horizon", sim_config.horizon())
            .param("warmup", sim_config.warmup())
            .param("reps", args.reps)
            .param("seed", args.seed)
            .output(out)
            .duration(started.elapsed().as_secs_f64())
            .write_beside(out)?;
    }
    Ok(())
}

fn cmd_plot(args: PlotArgs) -> Result<()> {
    let started = Instant::now();
    let text = std::fs::read_to_string(&args.csv)?;
    let (header, rows) = parse_csv(&text)?;
    let title = match &args.title {
        Some(t) => t.clone(),
        None => args.csv.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
    };
    let script = plot_script(&header, &rows, &title, args.ymax);
    write_atomic(&args.out, &script)?;
    RunManifest::new("plot")
        .param("csv", args.csv.display())
        .param("title", &title)
        .param("ymax", args.ymax)
        .output(&args.out)
        .duration(started.elapsed().as_secs_f64())
        .write_beside(&args.out)?;
    println!("wrote plot script to {}", args.out.display());
    Ok(())
}
