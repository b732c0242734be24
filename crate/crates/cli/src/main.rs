//! Command-line front end for the gamowkit resonance toolkit.
//!
//! One command per physics pipeline: pole searches, survival curves, the
//! semibounded/exponential comparison, decay laws, the Born-limit sweep,
//! Lindblad evolution, and the dual-route spectral expansion.  Every
//! output starts with a provenance header that echoes the parsed
//! configuration (no timestamps unless `--stamp` opts in), so identical
//! invocations produce byte-identical files and every artifact records
//! how it was made.
//!
//! Exit status is zero on success; any toolkit error is printed verbatim
//! to stderr and the process exits non-zero.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Deserialize;
use serde_json::{json, Map, Value};

use gamowkit::evolution::khalfin_comparison;
use gamowkit::goldenrule::{decay_curve, decay_rate, fermi_golden_rule, BornState, DecayModel};
use gamowkit::openquantum::{
    lindblad_evolve, seeded_generator, DensityMatrix, LiouvillianGenerator,
};
use gamowkit::scattering::{find_poles, PoleSearchRegion, SMatrixModel};
use gamowkit::spectral::{
    complex_basis_reconstruct, dirac_reconstruct, EnergyWavefunction, ResonanceParameters, Support,
};
use gamowkit::{ComplexEnergy, Result, ToolkitError};

/// Default quadrature order when neither `--quad-order` nor the
/// `GAMOWKIT_QUAD_ORDER` environment variable overrides it.
const DEFAULT_QUAD_ORDER: usize = 64;

/// Margin keeping pole-search regions off the real axis when the
/// `--region` shorthand gives only one imaginary bound.
const REGION_AXIS_MARGIN: f64 = 1e-4;

#[derive(Parser)]
#[command(
    name = "gamowkit",
    version,
    about = "Resonance toolkit: poles, survival laws, decay rates, Lindblad evolution"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Find S-matrix poles in a rectangle of the complex energy plane.
    ///
    /// CSV columns: re, im, residue_re, residue_im (one row per pole,
    /// sorted by real part).
    Poles {
        /// S-matrix model JSON (rational pole list or delta-shell).
        #[arg(long)]
        model: PathBuf,
        /// Search rectangle "a,b,c": real part in [a, b]; imaginary part
        /// in [c, -1e-4] when c < 0 (decaying poles) or [1e-4, c] when
        /// c > 0 (their mirrors).
        #[arg(long)]
        region: String,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Survival probability of a Breit-Wigner state on a time grid.
    ///
    /// CSV columns: t, p.
    Survival {
        /// Resonance JSON {"er": ..., "gamma": ...}.
        #[arg(long)]
        model: PathBuf,
        /// Energy support the state is normalized on.
        #[arg(long, value_enum, default_value_t = SupportArg::Semibounded)]
        support: SupportArg,
        #[command(flatten)]
        time: TimeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Semibounded survival against the pure exponential law.
    ///
    /// CSV columns: t, p_semibounded, exponential, ratio.
    Khalfin {
        /// Resonance JSON {"er": ..., "gamma": ...} with er/gamma >= 2.
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        time: TimeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Decay probability and rate of a normalized decay model.
    ///
    /// CSV columns: t, p, rate, survival.
    Decay {
        /// Decay-model JSON (resonance, channels, form factor).
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        time: TimeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Born-limit sweep: exact initial rate versus the golden-rule value
    /// as the width shrinks through er/10, er/100, er/1000.
    ///
    /// CSV columns: gamma, exact_rate, fermi_rate, rel_error.
    BornLimit {
        /// Decay-model JSON; its width sets nothing, the sweep replaces it.
        #[arg(long)]
        model: PathBuf,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evolve a density matrix under a GKSL generator.
    ///
    /// CSV columns: t, trace, purity, min_eigenvalue, then the density
    /// matrix entries row by row as rho_i_j_re, rho_i_j_im.
    Lindblad {
        /// Generator JSON {"dim", "h", "jumps"?, "initial"?}; the initial
        /// state defaults to the maximally mixed state.
        #[arg(long, conflicts_with = "seed")]
        model: Option<PathBuf>,
        /// Generate a seeded random generator/state pair instead of
        /// reading a model (test-corpus reproduction).
        #[arg(long)]
        seed: Option<u64>,
        /// Hilbert-space dimension for --seed.
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[command(flatten)]
        time: TimeArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Dual-route spectral expansion of a wavefunction against a
    /// rational S-matrix model on a real energy grid.
    ///
    /// CSV columns: e, dirac_re, dirac_im, basis_re, basis_im, deviation.
    Expansion {
        /// Combined JSON {"model": ..., "wavefunction": {"poles": [
        /// {"location": [re, im], "residue": [re, im]}, ...]},
        /// "grid": [e1, ...]}.
        #[arg(long)]
        model: PathBuf,
        /// Quadrature order (overrides GAMOWKIT_QUAD_ORDER and the
        /// built-in default of 64).
        #[arg(long)]
        quad_order: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Record the invocation time in the provenance header (off by
    /// default so identical configs yield byte-identical output).
    #[arg(long)]
    stamp: bool,
}

#[derive(Args)]
struct TimeArgs {
    /// End of the uniform time grid [0, t-max].
    #[arg(long, default_value_t = 10.0)]
    t_max: f64,
    /// Number of grid intervals (steps + 1 samples).
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// Evaluate at this single time instead of a grid.
    #[arg(long, allow_negative_numbers = true)]
    t: Option<f64>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SupportArg {
    /// Unbounded spectrum (pure exponential law).
    Full,
    /// Spectrum bounded below at zero.
    Semibounded,
}

impl SupportArg {
    fn to_support(self) -> Support {
        match self {
            SupportArg::Full => Support::FullLine,
            SupportArg::Semibounded => Support::SemiBounded,
        }
    }

    fn label(self) -> &'static str {
        match self {
            SupportArg::Full => "full",
            SupportArg::Semibounded => "semibounded",
        }
    }
}

/// A computed table plus the provenance lines that describe how it was
/// produced.  The CSV and JSON emitters are thin views over this.
struct Table {
    command: &'static str,
    config: Vec<(String, ConfigValue)>,
    columns: Vec<String>,
    rows: Vec<Vec<f64>>,
}

enum ConfigValue {
    Text(String),
    Model(Value),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Poles {
            model,
            region,
            output,
        } => {
            let table = run_poles(&model, &region)?;
            emit(table, &output)
        }
        Command::Survival {
            model,
            support,
            time,
            output,
        } => {
            let table = run_survival(&model, support, &time)?;
            emit(table, &output)
        }
        Command::Khalfin {
            model,
            time,
            output,
        } => {
            let table = run_khalfin(&model, &time)?;
            emit(table, &output)
        }
        Command::Decay {
            model,
            time,
            output,
        } => {
            let table = run_decay(&model, &time)?;
            emit(table, &output)
        }
        Command::BornLimit { model, output } => {
            let table = run_born_limit(&model)?;
            emit(table, &output)
        }
        Command::Lindblad {
            model,
            seed,
            dim,
            time,
            output,
        } => {
            let table = run_lindblad(model.as_deref(), seed, dim, &time)?;
            emit(table, &output)
        }
        Command::Expansion {
            model,
            quad_order,
            output,
        } => {
            let table = run_expansion(&model, quad_order)?;
            emit(table, &output)
        }
    }
}

// ---------------------------------------------------------------------
// Command implementations
// ---------------------------------------------------------------------

fn run_poles(path: &Path, region_text: &str) -> Result<Table> {
    let (text, echo) = read_model(path)?;
    let model = SMatrixModel::from_json(&text)?;
    let region = parse_region(region_text)?;
    let poles = find_poles(&model, &region)?;
    let rows = poles
        .iter()
        .map(|p| vec![p.z_r().re, p.z_r().im, p.residue().re, p.residue().im])
        .collect();
    Ok(Table {
        command: "poles",
        config: vec![
            model_path_entry(path),
            ("model".into(), ConfigValue::Model(echo)),
            ("region".into(), ConfigValue::Text(region_text.to_string())),
        ],
        columns: str_columns(&["re", "im", "residue_re", "residue_im"]),
        rows,
    })
}

fn run_survival(path: &Path, support: SupportArg, time: &TimeArgs) -> Result<Table> {
    let (text, echo) = read_model(path)?;
    let params = parse_resonance(&text)?;
    let phi = EnergyWavefunction::breit_wigner(&params, support.to_support())?;
    let times = semigroup_grid(time)?;
    let rows = times
        .iter()
        .map(|&t| {
            let p = gamowkit::evolution::survival_probability(&phi, t, support.to_support())?;
            Ok(vec![t, p])
        })
        .collect::<Result<_>>()?;
    let mut config = vec![
        model_path_entry(path),
        ("model".into(), ConfigValue::Model(echo)),
        (
            "support".into(),
            ConfigValue::Text(support.label().to_string()),
        ),
    ];
    config.extend(time_entries(time));
    Ok(Table {
        command: "survival",
        config,
        columns: str_columns(&["t", "p"]),
        rows,
    })
}

fn run_khalfin(path: &Path, time: &TimeArgs) -> Result<Table> {
    let (text, echo) = read_model(path)?;
    let params = parse_resonance(&text)?;
    let times = semigroup_grid(time)?;
    let table = khalfin_comparison(&params, &times)?;
    let rows = table
        .iter()
        .map(|row| vec![row.t, row.p_semibounded, row.exponential, row.ratio])
        .collect();
    let mut config = vec![
        model_path_entry(path),
        ("model".into(), ConfigValue::Model(echo)),
    ];
    config.extend(time_entries(time));
    Ok(Table {
        command: "khalfin",
        config,
        columns: str_columns(&["t", "p_semibounded", "exponential", "ratio"]),
        rows,
    })
}

fn run_decay(path: &Path, time: &TimeArgs) -> Result<Table> {
    let (text, echo) = read_model(path)?;
    let model = DecayModel::from_json(&text)?;
    let times = semigroup_grid(time)?;
    let curve = decay_curve(&model, &times)?;
    let rows = curve
        .times()
        .iter()
        .zip(curve.p_values())
        .zip(curve.rate_values())
        .map(|((&t, &p), &rate)| vec![t, p, rate, 1.0 - p])
        .collect();
    let mut config = vec![
        model_path_entry(path),
        ("model".into(), ConfigValue::Model(echo)),
    ];
    config.extend(time_entries(time));
    Ok(Table {
        command: "decay",
        config,
        columns: str_columns(&["t", "p", "rate", "survival"]),
        rows,
    })
}

fn run_born_limit(path: &Path) -> Result<Table> {
    let (text, echo) = read_model(path)?;
    let template = DecayModel::from_json(&text)?;
    let e_r = template.params().e_r();
    let mut rows = Vec::new();
    for divisor in [10.0, 100.0, 1000.0] {
        let gamma = e_r / divisor;
        let params = ResonanceParameters::new(e_r, gamma)?;
        let model = DecayModel::new(
            params,
            template.channels().clone(),
            template.form_factor().clone(),
        )?;
        let exact = decay_rate(&model, 0.0)?;
        let born = BornState::new(e_r, model.form_factor().clone())?;
        let fermi = fermi_golden_rule(&born, model.channels())?;
        let rel_error = (fermi - exact).abs() / exact;
        rows.push(vec![gamma, exact, fermi, rel_error]);
    }
    Ok(Table {
        command: "born-limit",
        config: vec![
            model_path_entry(path),
            ("model".into(), ConfigValue::Model(echo)),
        ],
        columns: str_columns(&["gamma", "exact_rate", "fermi_rate", "rel_error"]),
        rows,
    })
}

/// Wrapper around the generator JSON that optionally carries an initial
/// state; absent, the maximally mixed state is used.
#[derive(Deserialize)]
struct LindbladInput {
    #[serde(default)]
    initial: Option<Vec<Vec<[f64; 2]>>>,
}

fn run_lindblad(
    path: Option<&Path>,
    seed: Option<u64>,
    dim: usize,
    time: &TimeArgs,
) -> Result<Table> {
    let mut config = Vec::new();
    let (generator, rho0) = match (path, seed) {
        (Some(path), None) => {
            let (text, echo) = read_model(path)?;
            let generator = LiouvillianGenerator::from_json(&text)?;
            let input: LindbladInput = serde_json::from_str(&text).map_err(|e| {
                ToolkitError::invalid_model("malformed generator JSON").with("cause", e)
            })?;
            let rho0 = match input.initial {
                Some(rows) => DensityMatrix::new(parse_state(&rows, generator.dim())?)?,
                None => DensityMatrix::maximally_mixed(generator.dim())?,
            };
            config.push(model_path_entry(path));
            config.push(("model".into(), ConfigValue::Model(echo)));
            (generator, rho0)
        }
        (None, Some(seed)) => {
            let pair = seeded_generator(dim, seed)?;
            config.push(("seed".into(), ConfigValue::Text(seed.to_string())));
            config.push(("dim".into(), ConfigValue::Text(dim.to_string())));
            pair
        }
        _ => {
            return Err(ToolkitError::invalid_model(
                "lindblad needs exactly one of --model or --seed",
            ));
        }
    };
    config.extend(time_entries(time));

    let times = time_grid(time)?;
    let n = generator.dim();
    let mut columns = vec![
        "t".to_string(),
        "trace".to_string(),
        "purity".to_string(),
        "min_eigenvalue".to_string(),
    ];
    for i in 0..n {
        for j in 0..n {
            columns.push(format!("rho_{i}_{j}_re"));
            columns.push(format!("rho_{i}_{j}_im"));
        }
    }
    let mut rows = Vec::with_capacity(times.len());
    for &t in &times {
        let rho = lindblad_evolve(&generator, &rho0, t)?;
        let mut row = vec![
            t,
            rho.entries().trace().re,
            rho.purity(),
            rho.min_eigenvalue(),
        ];
        for i in 0..n {
            for j in 0..n {
                let v = rho.entries()[(i, j)];
                row.push(v.re);
                row.push(v.im);
            }
        }
        rows.push(row);
    }
    Ok(Table {
        command: "lindblad",
        config,
        columns,
        rows,
    })
}

/// Combined input for the expansion command: the S-matrix model, the
/// wavefunction's pole/residue list, and the evaluation grid.
#[derive(Deserialize)]
struct ExpansionInput {
    model: Value,
    wavefunction: WavefunctionSpec,
    grid: Vec<f64>,
}

#[derive(Deserialize)]
struct WavefunctionSpec {
    poles: Vec<PoleSpec>,
}

#[derive(Deserialize)]
struct PoleSpec {
    location: [f64; 2],
    residue: [f64; 2],
}

fn run_expansion(path: &Path, quad_order: Option<usize>) -> Result<Table> {
    let (text, echo) = read_model(path)?;
    let input: ExpansionInput = serde_json::from_str(&text)
        .map_err(|e| ToolkitError::invalid_model("malformed expansion JSON").with("cause", e))?;
    let model = SMatrixModel::from_json(&input.model.to_string())?;
    let poles = input
        .wavefunction
        .poles
        .iter()
        .map(|p| {
            Ok((
                ComplexEnergy::new(p.location[0], p.location[1])?,
                Complex64::new(p.residue[0], p.residue[1]),
            ))
        })
        .collect::<Result<Vec<_>>>()?;
    let phi = EnergyWavefunction::new(poles, Support::SemiBounded, "cli wavefunction")?;
    let order = resolve_quad_order(quad_order)?;

    let direct = dirac_reconstruct(&phi, &model, &input.grid, order)?;
    let deformed = complex_basis_reconstruct(&phi, &model, &input.grid, order)?;
    let rows = input
        .grid
        .iter()
        .zip(direct.iter().zip(deformed.reconstruction()))
        .map(|(&e, (d, c))| vec![e, d.re, d.im, c.re, c.im, (d - c).norm()])
        .collect();
    Ok(Table {
        command: "expansion",
        config: vec![
            model_path_entry(path),
            ("model".into(), ConfigValue::Model(echo)),
            ("quad_order".into(), ConfigValue::Text(order.to_string())),
        ],
        columns: str_columns(&[
            "e",
            "dirac_re",
            "dirac_im",
            "basis_re",
            "basis_im",
            "deviation",
        ]),
        rows,
    })
}

// ---------------------------------------------------------------------
// Shared plumbing
// ---------------------------------------------------------------------

fn read_model(path: &Path) -> Result<(String, Value)> {
    let text = std::fs::read_to_string(path).map_err(|e| {
        ToolkitError::io("failed to read model file")
            .with("path", path.display())
            .with("cause", e)
    })?;
    let echo: Value = serde_json::from_str(&text).map_err(|e| {
        ToolkitError::invalid_model("model file is not valid JSON")
            .with("path", path.display())
            .with("cause", e)
    })?;
    Ok((text, echo))
}

fn model_path_entry(path: &Path) -> (String, ConfigValue) {
    (
        "model_path".into(),
        ConfigValue::Text(path.display().to_string()),
    )
}

fn parse_resonance(text: &str) -> Result<ResonanceParameters> {
    let params: ResonanceParameters = serde_json::from_str(text).map_err(|e| {
        ToolkitError::invalid_model("malformed resonance JSON (expected {\"er\", \"gamma\"})")
            .with("cause", e)
    })?;
    params.validated()
}

fn parse_region(text: &str) -> Result<PoleSearchRegion> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|e| {
            ToolkitError::invalid_model("region must be three comma-separated numbers a,b,c")
                .with("region", text)
                .with("cause", e)
        })?;
    if parts.len() != 3 {
        return Err(ToolkitError::invalid_model(
            "region must be three comma-separated numbers a,b,c",
        )
        .with("region", text));
    }
    let (a, b, c) = (parts[0], parts[1], parts[2]);
    if c < 0.0 {
        PoleSearchRegion::new(a, b, c, -REGION_AXIS_MARGIN)
    } else if c > 0.0 {
        PoleSearchRegion::new(a, b, REGION_AXIS_MARGIN, c)
    } else {
        Err(
            ToolkitError::invalid_model("region imaginary bound must be nonzero")
                .with("region", text),
        )
    }
}

fn parse_state(rows: &[Vec<[f64; 2]>], dim: usize) -> Result<DMatrix<Complex64>> {
    if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
        return Err(ToolkitError::invalid_model(
            "initial state shape must match the generator dimension",
        )
        .with("dim", dim));
    }
    Ok(DMatrix::from_fn(dim, dim, |i, j| {
        Complex64::new(rows[i][j][0], rows[i][j][1])
    }))
}

/// Builds the evaluation grid from `--t` / `--t-max` / `--steps`.
fn time_grid(time: &TimeArgs) -> Result<Vec<f64>> {
    if let Some(t) = time.t {
        if !t.is_finite() {
            return Err(ToolkitError::invalid_model("time must be finite").with("t", t));
        }
        return Ok(vec![t]);
    }
    if !time.t_max.is_finite() || time.t_max <= 0.0 {
        return Err(
            ToolkitError::invalid_model("t-max must be positive and finite")
                .with("t_max", time.t_max),
        );
    }
    if time.steps == 0 {
        return Err(ToolkitError::invalid_model("steps must be at least 1"));
    }
    Ok((0..=time.steps)
        .map(|k| time.t_max * k as f64 / time.steps as f64)
        .collect())
}

/// Time grid for forward-only commands: negative times are a domain
/// error, not a request to extrapolate backwards.
fn semigroup_grid(time: &TimeArgs) -> Result<Vec<f64>> {
    let times = time_grid(time)?;
    for &t in &times {
        if t < 0.0 {
            return Err(ToolkitError::semigroup_domain(
                "this command evolves a decay semigroup, defined for t >= 0 only",
            )
            .with("t", t));
        }
    }
    Ok(times)
}

fn time_entries(time: &TimeArgs) -> Vec<(String, ConfigValue)> {
    match time.t {
        Some(t) => vec![("t".into(), ConfigValue::Text(format!("{t:?}")))],
        None => vec![
            (
                "t_max".into(),
                ConfigValue::Text(format!("{:?}", time.t_max)),
            ),
            ("steps".into(), ConfigValue::Text(time.steps.to_string())),
        ],
    }
}

fn resolve_quad_order(flag: Option<usize>) -> Result<usize> {
    if let Some(order) = flag {
        return Ok(order);
    }
    match std::env::var("GAMOWKIT_QUAD_ORDER") {
        Ok(text) => text.trim().parse::<usize>().map_err(|_| {
            ToolkitError::invalid_model("GAMOWKIT_QUAD_ORDER must be a positive integer")
                .with("value", text.clone())
        }),
        Err(_) => Ok(DEFAULT_QUAD_ORDER),
    }
}

fn str_columns(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

// ---------------------------------------------------------------------
// Emission
// ---------------------------------------------------------------------

fn emit(mut table: Table, output: &OutputArgs) -> Result<()> {
    if output.stamp {
        let stamp = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs().to_string())
            .unwrap_or_else(|_| "0".to_string());
        table
            .config
            .push(("stamp_unix".into(), ConfigValue::Text(stamp)));
    }
    let rendered = match output.format {
        Format::Csv => render_csv(&table),
        Format::Json => render_json(&table),
    };
    match &output.out {
        Some(path) => std::fs::write(path, rendered).map_err(|e| {
            ToolkitError::io("failed to write output file")
                .with("path", path.display())
                .with("cause", e)
        }),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn render_csv(table: &Table) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "# command={}", table.command);
    for (key, value) in &table.config {
        match value {
            ConfigValue::Text(text) => {
                let _ = writeln!(out, "# {key}={text}");
            }
            ConfigValue::Model(value) => {
                let _ = writeln!(out, "# {key}={value}");
            }
        }
    }
    let _ = writeln!(out, "{}", table.columns.join(","));
    for row in &table.rows {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:?}")).collect();
        let _ = writeln!(out, "{}", cells.join(","));
    }
    out
}

fn render_json(table: &Table) -> String {
    let mut config = Map::new();
    for (key, value) in &table.config {
        let v = match value {
            ConfigValue::Text(text) => Value::String(text.clone()),
            ConfigValue::Model(value) => value.clone(),
        };
        config.insert(key.clone(), v);
    }
    let rows: Vec<Value> = table
        .rows
        .iter()
        .map(|row| {
            let mut obj = Map::new();
            for (name, &v) in table.columns.iter().zip(row) {
                obj.insert(name.clone(), json!(v));
            }
            Value::Object(obj)
        })
        .collect();
    let doc = json!({
        "command": table.command,
        "config": Value::Object(config),
        "columns": table.columns,
        "rows": rows,
    });
    let mut text = serde_json::to_string_pretty(&doc).expect("tables serialize to JSON");
    text.push('\n');
    text
}
