//! `bdc`: capacities, convergence tables, spectra, figure data, and
//! teleportation-simulation diagnostics for bosonic dephasing channels.
//!
//! Every run is single-threaded and byte-deterministic for a fixed
//! invocation: floats print with 12 significant digits, rows come out in
//! sorted order, and randomness enters only through an explicit seed.
//! Exit codes: 0 on success, 2 for configuration problems, 3 for numeric
//! failures, with a one-line JSON record on stderr.

mod density;
mod errors;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use bdc_core::capacity::{
    capacity_von_mises, capacity_wrapped_cauchy, capacity_wrapped_normal, convergence_report,
    CapacityReport,
};
use bdc_core::channelsim::{
    apply_dephasing, apply_tele_sim, tele_sim_coeff, trace_distance, DensityMatrix, SIM_DIM_CAP,
};
use bdc_core::toeplitz::build_truncation;

use density::build_density;
use errors::CliError;
use output::{csv_document, fmt_float, json_document, write_output};

#[derive(Parser)]
#[command(
    name = "bdc",
    version,
    about = "Capacities and simulation diagnostics for bosonic dephasing channels"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exact capacity of a channel, with optional finite-size brackets.
    Capacity(CapacityCmd),
    /// Table of finite-size functionals converging to the capacity.
    Converge(ConvergeCmd),
    /// Teleportation-simulation diagnostics at one truncation level.
    Simulate(SimulateCmd),
    /// Eigenvalues of the truncated channel matrix.
    Spectrum(SpectrumCmd),
    /// Capacity curves over parameter grids, one row per point.
    Figure(FigureCmd),
}

#[derive(Args)]
struct DensityArgs {
    /// Density family: wrapped-normal, von-mises, wrapped-cauchy, uniform,
    /// or tabulated.
    #[arg(long)]
    family: String,

    /// Family parameter; repeat (up to 3 times) for a product of
    /// same-family modes.
    #[arg(long = "param", value_name = "VALUE", allow_negative_numbers = true)]
    params: Vec<f64>,

    /// CSV tabulating the density as `phi,value` rows on a uniform grid
    /// over [-pi, pi).
    #[arg(long, value_name = "PATH")]
    tab_file: Option<PathBuf>,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format; defaults to json for capacity and simulate, csv
    /// otherwise.
    #[arg(long, value_enum)]
    format: Option<OutFormat>,

    /// Write the report to this file instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct CapacityCmd {
    #[command(flatten)]
    density: DensityArgs,

    /// Truncation levels for the finite-size brackets, e.g. 2,4,8.
    #[arg(long, value_delimiter = ',', value_name = "D,...")]
    d_grid: Vec<usize>,

    /// Renyi orders (each > 1) to track alongside, e.g. 1.5,2.
    #[arg(long, value_delimiter = ',', value_name = "ALPHA,...", allow_negative_numbers = true)]
    alpha_grid: Vec<f64>,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct ConvergeCmd {
    #[command(flatten)]
    density: DensityArgs,

    /// Truncation levels; defaults to 2,4,8,...,128.
    #[arg(long, value_delimiter = ',', value_name = "D,...")]
    d_grid: Vec<usize>,

    /// Renyi orders (each > 1); defaults to 2.
    #[arg(long, value_delimiter = ',', value_name = "ALPHA,...", allow_negative_numbers = true)]
    alpha_grid: Vec<f64>,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SimulateCmd {
    #[command(flatten)]
    density: DensityArgs,

    /// Truncation level; exactly one value.
    #[arg(long, value_delimiter = ',', value_name = "D")]
    d_grid: Vec<usize>,

    /// Input state: plus, maxmixed, random, or a density-matrix CSV path.
    #[arg(long, default_value = "plus")]
    input: String,

    /// RNG seed, used only by --input random (default 0).
    #[arg(long)]
    seed: Option<u64>,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct SpectrumCmd {
    #[command(flatten)]
    density: DensityArgs,

    /// Truncation level per mode; exactly one value.
    #[arg(long, value_delimiter = ',', value_name = "D")]
    d_grid: Vec<usize>,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct FigureCmd {
    /// Family to sweep, or `all` for the three parametric families.
    #[arg(long, default_value = "all")]
    family: String,

    /// Parameter grid as start:stop:count; geometric spacing for
    /// wrapped-normal and wrapped-cauchy, linear for von-mises.
    #[arg(long, value_parser = parse_grid_spec)]
    grid: Option<GridSpec>,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Copy)]
struct GridSpec {
    start: f64,
    stop: f64,
    count: usize,
}

impl GridSpec {
    fn points(&self, geometric: bool) -> Vec<f64> {
        let n = self.count;
        (0..n)
            .map(|j| {
                if j == n - 1 {
                    self.stop
                } else {
                    let t = j as f64 / (n - 1) as f64;
                    if geometric {
                        self.start * (self.stop / self.start).powf(t)
                    } else {
                        self.start + (self.stop - self.start) * t
                    }
                }
            })
            .collect()
    }
}

fn parse_grid_spec(text: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err("grid must be start:stop:count".into());
    }
    let start: f64 = parts[0]
        .parse()
        .map_err(|_| format!("grid start `{}` is not a number", parts[0]))?;
    let stop: f64 = parts[1]
        .parse()
        .map_err(|_| format!("grid stop `{}` is not a number", parts[1]))?;
    let count: usize = parts[2]
        .parse()
        .map_err(|_| format!("grid count `{}` is not an integer", parts[2]))?;
    if !start.is_finite() || start <= 0.0 {
        return Err("grid start must be positive".into());
    }
    if !stop.is_finite() || stop <= start {
        return Err("grid stop must exceed start".into());
    }
    if count < 2 {
        return Err("grid count must be at least 2".into());
    }
    Ok(GridSpec { start, stop, count })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.record());
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Capacity(cmd) => cmd_capacity(cmd),
        Command::Converge(cmd) => cmd_converge(cmd),
        Command::Simulate(cmd) => cmd_simulate(cmd),
        Command::Spectrum(cmd) => cmd_spectrum(cmd),
        Command::Figure(cmd) => cmd_figure(cmd),
    }
}

fn sorted_alphas(alpha_grid: &[f64]) -> Vec<f64> {
    let mut alphas = alpha_grid.to_vec();
    alphas.sort_by(|a, b| a.total_cmp(b));
    alphas.dedup();
    alphas
}

fn single_d(d_grid: &[usize], command: &str) -> Result<usize, CliError> {
    match d_grid {
        [d] => Ok(*d),
        _ => Err(CliError::config(format!(
            "{command} needs --d-grid with exactly one level, got {}",
            d_grid.len()
        ))),
    }
}

fn cmd_capacity(cmd: CapacityCmd) -> Result<(), CliError> {
    let density = build_density(
        &cmd.density.family,
        &cmd.density.params,
        cmd.density.tab_file.as_deref(),
    )?;
    let report = convergence_report(&density, &cmd.d_grid, &sorted_alphas(&cmd.alpha_grid))?;
    let text = match cmd.output.format.unwrap_or(OutFormat::Json) {
        OutFormat::Json => report_json(&report),
        OutFormat::Csv => capacity_csv(&report),
    };
    write_output(cmd.output.out.as_deref(), &text)
}

fn cmd_converge(cmd: ConvergeCmd) -> Result<(), CliError> {
    let density = build_density(
        &cmd.density.family,
        &cmd.density.params,
        cmd.density.tab_file.as_deref(),
    )?;
    let d_grid = if cmd.d_grid.is_empty() {
        vec![2, 4, 8, 16, 32, 64, 128]
    } else {
        cmd.d_grid.clone()
    };
    let alphas = if cmd.alpha_grid.is_empty() {
        vec![2.0]
    } else {
        sorted_alphas(&cmd.alpha_grid)
    };
    let report = convergence_report(&density, &d_grid, &alphas)?;
    let text = match cmd.output.format.unwrap_or(OutFormat::Csv) {
        OutFormat::Json => report_json(&report),
        OutFormat::Csv => converge_csv(&report),
    };
    write_output(cmd.output.out.as_deref(), &text)
}

fn cmd_simulate(cmd: SimulateCmd) -> Result<(), CliError> {
    if cmd.output.format == Some(OutFormat::Csv) {
        return Err(CliError::config("simulate emits JSON; drop --format csv"));
    }
    let density = build_density(
        &cmd.density.family,
        &cmd.density.params,
        cmd.density.tab_file.as_deref(),
    )?;
    let d = single_d(&cmd.d_grid, "simulate")?;
    if d > SIM_DIM_CAP {
        return Err(CliError::config(format!(
            "dimension {d} exceeds the simulator cap {SIM_DIM_CAP}"
        )));
    }
    if cmd.seed.is_some() && cmd.input != "random" {
        return Err(CliError::config("--seed only applies to --input random"));
    }

    let state = match cmd.input.as_str() {
        "plus" => DensityMatrix::plus_state(d)?,
        "maxmixed" => DensityMatrix::max_mixed(d)?,
        "random" => DensityMatrix::random_pure(d, cmd.seed.unwrap_or(0))?,
        path => {
            let state = DensityMatrix::read_csv(std::path::Path::new(path))?;
            if state.dim() != d {
                return Err(CliError::config(format!(
                    "input state has dimension {}, but --d-grid says {d}",
                    state.dim()
                )));
            }
            state
        }
    };

    let exact = apply_dephasing(&state, &density)?;
    let simulated = apply_tele_sim(&state, &density)?;
    let distance = trace_distance(&exact, &simulated)?;

    let trunc = build_truncation(&density, &[d])?;
    let symbol = tele_sim_coeff(&density, d)?;
    let mut violation = f64::NEG_INFINITY;
    for h in 0..d {
        for k in 0..d {
            let gap = (trunc.entry(h, k) - symbol[h * d + k]).norm();
            let bound = 2.0 * (h as f64 - k as f64).abs() / d as f64;
            violation = violation.max(gap - bound);
        }
    }
    if violation > 1e-12 {
        return Err(CliError::numeric(format!(
            "simulated symbol breaks its entrywise bound by {violation:e}"
        )));
    }

    let mut doc = serde_json::Map::new();
    doc.insert("d".into(), d.into());
    doc.insert("family".into(), density.family_name().into());
    doc.insert("params".into(), serde_json::json!(density.params()));
    doc.insert("input".into(), cmd.input.clone().into());
    if cmd.input == "random" {
        doc.insert("seed".into(), cmd.seed.unwrap_or(0).into());
    }
    doc.insert(
        "entrywise_max_violation".into(),
        serde_json::json!(violation),
    );
    doc.insert(
        "bound_max".into(),
        serde_json::json!(2.0 * (d as f64 - 1.0) / d as f64),
    );
    doc.insert("trace_distance".into(), serde_json::json!(distance));

    let text = json_document(serde_json::Value::Object(doc));
    write_output(cmd.output.out.as_deref(), &text)
}

fn cmd_spectrum(cmd: SpectrumCmd) -> Result<(), CliError> {
    let density = build_density(
        &cmd.density.family,
        &cmd.density.params,
        cmd.density.tab_file.as_deref(),
    )?;
    let d = single_d(&cmd.d_grid, "spectrum")?;
    let dims = vec![d; density.modes()];
    let trunc = build_truncation(&density, &dims)?;
    let spectrum = trunc.spectrum()?;
    let trace: f64 = spectrum.eigenvalues.iter().sum();
    let max_eig = *spectrum.eigenvalues.last().expect("non-empty spectrum");

    let text = match cmd.output.format.unwrap_or(OutFormat::Csv) {
        OutFormat::Csv => {
            let mut rows = vec![vec!["eigenvalue".to_string()]];
            rows.extend(
                spectrum
                    .eigenvalues
                    .iter()
                    .map(|&v| vec![fmt_float(v)]),
            );
            rows.push(vec!["min".into(), "max".into(), "trace".into()]);
            rows.push(vec![
                fmt_float(spectrum.min_eig),
                fmt_float(max_eig),
                fmt_float(trace),
            ]);
            csv_document(&rows)
        }
        OutFormat::Json => {
            let mut doc = serde_json::Map::new();
            doc.insert("d".into(), d.into());
            doc.insert("total_dim".into(), trunc.total_dim().into());
            doc.insert("family".into(), density.family_name().into());
            doc.insert("params".into(), serde_json::json!(density.params()));
            doc.insert(
                "eigenvalues".into(),
                serde_json::json!(spectrum.eigenvalues),
            );
            doc.insert("min".into(), serde_json::json!(spectrum.min_eig));
            doc.insert("max".into(), serde_json::json!(max_eig));
            doc.insert("trace".into(), serde_json::json!(trace));
            json_document(serde_json::Value::Object(doc))
        }
    };
    write_output(cmd.output.out.as_deref(), &text)
}

fn cmd_figure(cmd: FigureCmd) -> Result<(), CliError> {
    let families: Vec<&str> = match cmd.family.as_str() {
        "all" => density::PARAMETRIC_FAMILIES.to_vec(),
        f if density::PARAMETRIC_FAMILIES.contains(&f) => vec![f],
        "uniform" | "tabulated" | "product" => {
            return Err(CliError::config(format!(
                "family {} has no parameter axis to sweep",
                cmd.family
            )));
        }
        other => {
            return Err(CliError::config(format!(
                "unknown family {other}; expected wrapped-normal, von-mises, wrapped-cauchy, or all"
            )));
        }
    };

    let mut points = Vec::new();
    for family in families {
        let geometric = family != "von-mises";
        let spec = cmd.grid.unwrap_or_else(|| default_figure_grid(family));
        for param in spec.points(geometric) {
            let bits = match family {
                "wrapped-normal" => capacity_wrapped_normal(param)?,
                "von-mises" => capacity_von_mises(param)?,
                _ => capacity_wrapped_cauchy(param)?,
            };
            points.push((family, param, bits));
        }
    }

    let text = match cmd.output.format.unwrap_or(OutFormat::Csv) {
        OutFormat::Csv => {
            let mut rows = vec![vec![
                "family".to_string(),
                "param".to_string(),
                "capacity_bits".to_string(),
            ]];
            rows.extend(points.iter().map(|&(family, param, bits)| {
                vec![family.to_string(), fmt_float(param), fmt_float(bits)]
            }));
            csv_document(&rows)
        }
        OutFormat::Json => {
            let items: Vec<serde_json::Value> = points
                .iter()
                .map(|&(family, param, bits)| {
                    serde_json::json!({
                        "family": family,
                        "param": param,
                        "capacity_bits": bits,
                    })
                })
                .collect();
            json_document(serde_json::Value::Array(items))
        }
    };
    write_output(cmd.output.out.as_deref(), &text)
}

fn default_figure_grid(family: &str) -> GridSpec {
    match family {
        "wrapped-normal" => GridSpec {
            start: 0.1,
            stop: 5.0,
            count: 50,
        },
        "von-mises" => GridSpec {
            start: 0.2,
            stop: 5.0,
            count: 50,
        },
        _ => GridSpec {
            start: 0.05,
            stop: 5.0,
            count: 50,
        },
    }
}

fn report_json(report: &CapacityReport) -> String {
    json_document(serde_json::to_value(report).expect("report serialises"))
}

fn capacity_csv(report: &CapacityReport) -> String {
    let mut rows = vec![vec![
        "kind".to_string(),
        "alpha".to_string(),
        "d".to_string(),
        "value_bits".to_string(),
    ]];
    rows.push(vec![
        "exact".into(),
        String::new(),
        String::new(),
        fmt_float(report.exact_bits),
    ]);
    if let Some(closed) = report.closed_form_bits {
        rows.push(vec![
            "closed_form".into(),
            String::new(),
            String::new(),
            fmt_float(closed),
        ]);
    }
    for &(d, rate) in &report.lower {
        rows.push(vec![
            "lower".into(),
            String::new(),
            d.to_string(),
            fmt_float(rate),
        ]);
    }
    for track in &report.renyi {
        rows.push(vec![
            "renyi_limit".into(),
            fmt_float(track.alpha),
            String::new(),
            fmt_float(track.limit),
        ]);
        for &(d, value) in &track.series {
            rows.push(vec![
                "renyi".into(),
                fmt_float(track.alpha),
                d.to_string(),
                fmt_float(value),
            ]);
        }
    }
    csv_document(&rows)
}

fn converge_csv(report: &CapacityReport) -> String {
    let mut rows = vec![vec![
        "d".to_string(),
        "lower_bits".to_string(),
        "alpha".to_string(),
        "renyi_bits".to_string(),
        "exact_bits".to_string(),
        "gap".to_string(),
    ]];
    for (index, &(d, lower)) in report.lower.iter().enumerate() {
        let gap = report.exact_bits - lower;
        if report.renyi.is_empty() {
            rows.push(vec![
                d.to_string(),
                fmt_float(lower),
                String::new(),
                String::new(),
                fmt_float(report.exact_bits),
                fmt_float(gap),
            ]);
        } else {
            for track in &report.renyi {
                let (series_d, renyi_bits) = track.series[index];
                debug_assert_eq!(series_d, d);
                rows.push(vec![
                    d.to_string(),
                    fmt_float(lower),
                    fmt_float(track.alpha),
                    fmt_float(renyi_bits),
                    fmt_float(report.exact_bits),
                    fmt_float(gap),
                ]);
            }
        }
    }
    csv_document(&rows)
}
