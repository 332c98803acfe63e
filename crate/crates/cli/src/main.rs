//! Command-line front end: named experiments, bound calculators,
//! deterministic simulation runs, and a small SVG plotter.
//!
//! Exit codes: 0 success, 1 numeric failure (eigensolver non-convergence,
//! I/O), 2 validation failure.

mod svg;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use randprod::error::Error as CoreError;
use randprod::experiments::{self, ExperimentConfig};
use randprod::formulas::SeededRng;
use randprod::hamiltonian::Hamiltonian;
use randprod::metrics;

#[derive(Parser)]
#[command(
    name = "randprod",
    version,
    about = "Randomized product formulas: qDRIFT and Suzuki simulation, exact error metrics, \
             concentration-bound experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[allow(clippy::large_enum_variant)]
enum Command {
    /// Build one product-formula plan and report its exact errors.
    Simulate(SimulateArgs),
    /// Print gate-count and tail bounds for given parameters.
    Bounds(BoundsArgs),
    /// Run a named experiment, emitting CSV rows and a JSON summary.
    Experiment(ExperimentArgs),
    /// Render a result CSV as an SVG line plot.
    Plot(PlotArgs),
}

#[derive(Args)]
struct SimulateArgs {
    /// Model name (heisenberg | single-site-z | all-z) or a Hamiltonian
    /// JSON file path.
    #[arg(long, default_value = "heisenberg")]
    model: String,
    #[arg(long, default_value_t = 4)]
    n: u32,
    #[arg(long, default_value_t = 2.0)]
    t: f64,
    /// qdrift | first-order | suzuki2p | permuted-suzuki
    #[arg(long, default_value = "qdrift")]
    method: String,
    /// Step count N (qdrift / first-order).
    #[arg(long, default_value_t = 160)]
    gates: u64,
    /// Suzuki order parameter p.
    #[arg(long, default_value_t = 1)]
    order: u32,
    /// Suzuki block count r.
    #[arg(long, default_value_t = 1)]
    blocks: u64,
    /// Coefficient scale (single-site-z) / weight (all-z).
    #[arg(long)]
    scale: Option<f64>,
    /// Sign pattern for the all-z model: plus | random.
    #[arg(long, default_value = "plus")]
    signs: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output JSON path (config echo + plan + error report).
    #[arg(long)]
    out: PathBuf,
    /// Optional standalone plan JSON path.
    #[arg(long)]
    plan_out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[arg(long, default_value_t = 2.0)]
    t: f64,
    #[arg(long, default_value_t = 3.0)]
    lambda: f64,
    #[arg(long, default_value_t = 4)]
    n: u32,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    #[arg(long, default_value_t = 0.1)]
    delta: f64,
    /// Gate count at which the tail bounds are evaluated.
    #[arg(long, default_value_t = 160)]
    gates: u64,
}

#[derive(Args)]
struct ExperimentArgs {
    /// fig3-gatecount | fig3-systemsize | ghz | diagonal-union | tails |
    /// saturation-single | saturation-many | suzuki
    name: String,
    /// JSON config file; CLI flags override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    model: Option<String>,
    #[arg(long)]
    n: Option<u32>,
    /// Comma-separated n grid, e.g. 4,5,6.
    #[arg(long)]
    n_grid: Option<String>,
    /// Shorthand for --n-grid nmin..=nmax.
    #[arg(long)]
    nmin: Option<u32>,
    #[arg(long)]
    nmax: Option<u32>,
    #[arg(long)]
    t: Option<f64>,
    #[arg(long)]
    gates: Option<u64>,
    /// Comma-separated gate-count grid, e.g. 40,80,160.
    #[arg(long)]
    gate_grid: Option<String>,
    #[arg(long)]
    reps: Option<u64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    order: Option<u32>,
    #[arg(long)]
    blocks: Option<u64>,
    #[arg(long)]
    scale: Option<f64>,
    #[arg(long)]
    signs: Option<String>,
    #[arg(long)]
    epsilon: Option<f64>,
    #[arg(long)]
    step_ratio: Option<f64>,
    /// Comma-separated metric list, e.g. worst_case,fixed_input_l2.
    #[arg(long)]
    metrics: Option<String>,
    /// Parallel repetition workers (output is identical for any value).
    #[arg(long)]
    workers: Option<usize>,
    /// CSV output path; stdout when omitted.
    #[arg(long)]
    out_csv: Option<PathBuf>,
    /// Summary JSON output path; stdout when omitted.
    #[arg(long)]
    out_summary: Option<PathBuf>,
}

#[derive(Args)]
struct PlotArgs {
    /// Input CSV (schema experiment,model,n,N,rep,seed,metric,value).
    #[arg(long)]
    csv: PathBuf,
    /// SVG output path.
    #[arg(long)]
    out: PathBuf,
    /// X column: N (gate count) or n (system size).
    #[arg(long, default_value = "N")]
    x: String,
    #[arg(long)]
    logx: bool,
    #[arg(long)]
    logy: bool,
    #[arg(long, default_value = "")]
    xlabel: String,
    #[arg(long, default_value = "")]
    ylabel: String,
    #[arg(long, default_value = "")]
    title: String,
    /// Only plot these comma-separated metrics.
    #[arg(long)]
    metrics: Option<String>,
    /// Add a reference curve: inv-sqrt (c/sqrt(x)) or sqrt (c sqrt(x)),
    /// anchored at the first point of the first series.
    #[arg(long)]
    reference: Option<String>,
}

enum CliError {
    Core(CoreError),
    Io(String),
    Validation(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_numeric() => 1,
            CliError::Core(_) => 2,
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            // Name the offending flag where the library names a parameter.
            CliError::Core(CoreError::InvalidParameter { name, reason }) => {
                format!("--{name}: {reason}")
            }
            CliError::Core(CoreError::NotMultipleOfTerms { n, l }) => {
                format!("--gates: N = {n} is not a multiple of the term count L = {l}")
            }
            CliError::Core(e) => e.to_string(),
            CliError::Io(e) => e.clone(),
            CliError::Validation(e) => e.clone(),
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::Io(format!("writing {path:?}: {e}")))
}

fn read_file(path: &PathBuf) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::Io(format!("reading {path:?}: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Simulate(args) => simulate(args),
        Command::Bounds(args) => bounds(args),
        Command::Experiment(args) => experiment(args),
        Command::Plot(args) => plot(args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {}", error.message());
            ExitCode::from(error.exit_code())
        }
    }
}

fn load_model(
    model: &str,
    n: u32,
    scale: Option<f64>,
    signs: &str,
    seed: u64,
) -> Result<Hamiltonian, CliError> {
    if model.ends_with(".json") {
        let text = read_file(&PathBuf::from(model))?;
        return Ok(Hamiltonian::from_json(&text)?);
    }
    let mut config = ExperimentConfig::named("adhoc");
    config.model = model.to_string();
    config.scale = scale;
    config.signs = signs.to_string();
    config.seed = seed;
    Ok(experiments::build_model(&config, n)?)
}

fn simulate(args: SimulateArgs) -> Result<(), CliError> {
    if args.gates == 0 {
        return Err(CliError::Validation("--gates must be at least 1".into()));
    }
    let hamiltonian = load_model(&args.model, args.n, args.scale, &args.signs, args.seed)?;
    let mut rng = SeededRng::new(args.seed);
    let plan = experiments::build_plan(
        &hamiltonian,
        &args.method,
        args.t,
        args.gates,
        args.order,
        args.blocks,
        &mut rng,
    )?;
    // Deterministic Suzuki plans fix their own length; use it as the step
    // count for the mean-product reference.
    let steps = match args.method.as_str() {
        "qdrift" | "first-order" => args.gates,
        _ => plan.len() as u64,
    };
    let report = metrics::error_decomposition(&hamiltonian, args.t, steps, &plan)?;
    let plan_json: serde_json::Value =
        serde_json::from_str(&plan.to_json()?).expect("plan wire form is valid JSON");
    let document = json!({
        "config": {
            "model": args.model,
            "n": args.n,
            "t": args.t,
            "method": args.method,
            "gates": args.gates,
            "order": args.order,
            "blocks": args.blocks,
            "scale": args.scale,
            "signs": args.signs,
            "seed": args.seed,
            "lambda": hamiltonian.lambda(),
            "artifact_version": env!("CARGO_PKG_VERSION"),
        },
        "plan": plan_json,
        "report": report,
    });
    write_file(&args.out, &format!("{:#}\n", document))?;
    if let Some(plan_out) = &args.plan_out {
        write_file(plan_out, &plan.to_json()?)?;
    }
    println!(
        "total {:.6} = bias {:.6} (+) fluctuation {:.6} -> {:?}",
        report.total, report.bias, report.fluctuation, args.out
    );
    Ok(())
}

fn bounds(args: BoundsArgs) -> Result<(), CliError> {
    let counts = metrics::gate_counts(args.epsilon, args.delta, args.t, args.lambda, args.n)?;
    let document = json!({
        "inputs": {
            "t": args.t,
            "lambda": args.lambda,
            "n": args.n,
            "epsilon": args.epsilon,
            "delta": args.delta,
            "gates": args.gates,
        },
        "gate_counts": counts,
        "bias_bound": metrics::bias_bound(args.t, args.lambda, args.gates),
        "step_bias_bound": metrics::step_bias_bound(args.t, args.lambda, args.gates),
        "step_radius_bound": metrics::step_radius_bound(args.t, args.lambda, args.gates),
        "tails_at_epsilon": {
            "freedman": metrics::freedman_tail(args.epsilon, args.t, args.lambda, args.gates, args.n),
            "freedman_simplified": metrics::freedman_tail_simplified(
                args.epsilon, args.t, args.lambda, args.gates, args.n),
            "vector_l2": metrics::vector_tail_l2(args.epsilon, args.t, args.lambda, args.gates),
            "vector_trace": metrics::vector_tail_trace(args.epsilon, args.t, args.lambda, args.gates),
            "vector_l2_valid_from": metrics::vector_tail_l2_valid_from(args.t, args.lambda, args.gates),
            "vector_trace_valid_from": metrics::vector_tail_trace_valid_from(args.t, args.lambda, args.gates),
        },
    });
    println!("{:#}", document);
    Ok(())
}

fn parse_grid<T: std::str::FromStr>(text: &str, flag: &str) -> Result<Vec<T>, CliError> {
    text.split(',')
        .map(|part| {
            part.trim()
                .parse::<T>()
                .map_err(|_| CliError::Validation(format!("{flag}: cannot parse '{part}'")))
        })
        .collect()
}

fn experiment(args: ExperimentArgs) -> Result<(), CliError> {
    let mut config = match &args.config {
        Some(path) => {
            let mut loaded = ExperimentConfig::from_json(&read_file(path)?)?;
            // The positional name wins over the file's experiment field.
            loaded.experiment = args.name.clone();
            loaded
        }
        None => ExperimentConfig::named(&args.name),
    };
    if let Some(model) = args.model {
        config.model = model;
    }
    if args.n.is_some() {
        config.n = args.n;
    }
    if let Some(grid) = &args.n_grid {
        config.n_grid = Some(parse_grid(grid, "--n-grid")?);
    }
    if args.nmin.is_some() || args.nmax.is_some() {
        let lo = args.nmin.unwrap_or(4);
        let hi = args.nmax.unwrap_or(8);
        if lo > hi {
            return Err(CliError::Validation("--nmin exceeds --nmax".into()));
        }
        config.n_grid = Some((lo..=hi).collect());
    }
    if args.t.is_some() {
        config.t = args.t;
    }
    if args.gates.is_some() {
        config.gates = args.gates;
    }
    if let Some(grid) = &args.gate_grid {
        config.gate_grid = Some(parse_grid(grid, "--gate-grid")?);
    }
    if args.reps.is_some() {
        config.reps = args.reps;
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(method) = args.method {
        config.method = method;
    }
    if let Some(order) = args.order {
        config.order = order;
    }
    if let Some(blocks) = args.blocks {
        config.blocks = blocks;
    }
    if args.scale.is_some() {
        config.scale = args.scale;
    }
    if let Some(signs) = args.signs {
        config.signs = signs;
    }
    if args.epsilon.is_some() {
        config.epsilon = args.epsilon;
    }
    if args.step_ratio.is_some() {
        config.step_ratio = args.step_ratio;
    }
    if let Some(metrics) = &args.metrics {
        config.metrics = parse_grid(metrics, "--metrics")?;
    }
    if let Some(workers) = args.workers {
        config.workers = workers;
    }

    let output = experiments::run(&config)?;
    let csv = output.table.to_csv();
    let summary = format!("{:#}\n", output.summary_json(&config));
    match &args.out_csv {
        Some(path) => write_file(path, &csv)?,
        None => print!("{csv}"),
    }
    match &args.out_summary {
        Some(path) => write_file(path, &summary)?,
        None => {
            if args.out_csv.is_some() {
                print!("{summary}");
            }
        }
    }
    Ok(())
}

fn plot(args: PlotArgs) -> Result<(), CliError> {
    let text = read_file(&args.csv)?;
    let mut lines = text.lines();
    let Some(header) = lines.next() else {
        return Err(CliError::Validation(format!(
            "--csv: {:?} is empty",
            args.csv
        )));
    };
    if header.trim() != "experiment,model,n,N,rep,seed,metric,value" {
        return Err(CliError::Validation(format!(
            "--csv: unexpected header '{header}'"
        )));
    }
    let mut rows = Vec::new();
    for (index, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 8 {
            return Err(CliError::Validation(format!(
                "--csv: line {} has {} fields, expected 8",
                index + 2,
                fields.len()
            )));
        }
        let parse_err =
            |what: &str| CliError::Validation(format!("--csv: line {}: bad {what}", index + 2));
        rows.push((
            fields[2].parse::<u32>().map_err(|_| parse_err("n"))?,
            fields[3].parse::<u64>().map_err(|_| parse_err("N"))?,
            fields[6].to_string(),
            fields[7].parse::<f64>().map_err(|_| parse_err("value"))?,
        ));
    }
    if rows.is_empty() {
        return Err(CliError::Validation(format!(
            "--csv: {:?} has no data rows",
            args.csv
        )));
    }
    let x_is_n = match args.x.as_str() {
        "n" => true,
        "N" => false,
        other => {
            return Err(CliError::Validation(format!(
                "--x must be 'n' or 'N', got '{other}'"
            )))
        }
    };
    let metric_filter: Option<Vec<String>> = match &args.metrics {
        Some(raw) => Some(parse_grid(raw, "--metrics")?),
        None => None,
    };
    let mut series = svg::series_from_rows(&rows, x_is_n, metric_filter.as_deref());
    if series.is_empty() {
        return Err(CliError::Validation(
            "--metrics: nothing matched the CSV".into(),
        ));
    }
    if let Some(reference) = &args.reference {
        let anchor = series[0].points.first().copied();
        if let Some((x0, y0)) = anchor {
            let shape: fn(f64) -> f64 = match reference.as_str() {
                "inv-sqrt" => |x| 1.0 / x.sqrt(),
                "sqrt" => f64::sqrt,
                other => {
                    return Err(CliError::Validation(format!(
                        "--reference must be 'inv-sqrt' or 'sqrt', got '{other}'"
                    )))
                }
            };
            let scale = y0 / shape(x0);
            let points = series[0]
                .points
                .iter()
                .map(|(x, _)| (*x, scale * shape(*x)))
                .collect();
            series.push(svg::Series {
                name: format!("reference {reference}"),
                points,
                dashed: true,
            });
        }
    }
    let spec = svg::PlotSpec {
        log_x: args.logx,
        log_y: args.logy,
        x_label: if args.xlabel.is_empty() {
            args.x.clone()
        } else {
            args.xlabel.clone()
        },
        y_label: if args.ylabel.is_empty() {
            "value".into()
        } else {
            args.ylabel.clone()
        },
        title: args.title.clone(),
    };
    let Some(svg_text) = svg::render(&spec, &series) else {
        return Err(CliError::Validation(
            "no plottable points (log scale with nonpositive values?)".into(),
        ));
    };
    write_file(&args.out, &svg_text)?;
    Ok(())
}
