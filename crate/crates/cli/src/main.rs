//! `asymshrink` command-line tool.
//!
//! Exit codes: 0 on success, 1 when a computation or input file fails,
//! 2 for invalid flags.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use asymshrink::numeric::sample_sd;
use asymshrink::risk::{linspace, risk_grid, RiskConfig};
use asymshrink::shrinkage::{denoise_detailed, HalfSupport, PolicyConfig, ShrinkageRule};
use asymshrink::sim::{run_experiment, Method, Scenario, TestFunction};
use asymshrink::{AsymmetricPrior, MixturePrior, Signal, WaveletBasis};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "asymshrink",
    version,
    about = "Wavelet shrinkage under asymmetric mixture priors"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Denoise a single-column CSV series.
    Denoise(DenoiseArgs),
    /// Run a Monte Carlo comparison of shrinkage and thresholding methods.
    Simulate(SimulateArgs),
    /// Tabulate a rule's shrinkage, squared bias, variance and risk.
    Riskgrid(RiskgridArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum PriorKind {
    Beta,
    Kumaraswamy,
    Triangular,
    SkewNormal,
}

#[derive(Args)]
struct PriorArgs {
    #[arg(long, value_enum, default_value = "beta")]
    prior: PriorKind,
    /// First shape parameter; the mode for the triangular prior.
    #[arg(long, allow_hyphen_values = true)]
    a: Option<f64>,
    /// Second shape parameter (beta, Kumaraswamy).
    #[arg(long)]
    b: Option<f64>,
    /// Half-support of a bounded prior.
    #[arg(long)]
    m: Option<f64>,
    /// Skew-normal scale.
    #[arg(long)]
    tau: Option<f64>,
    /// Skew-normal skewness.
    #[arg(long, allow_hyphen_values = true)]
    gamma: Option<f64>,
}

impl PriorArgs {
    /// Prior with the given half-support standing in when `--m` is absent.
    fn build(&self, default_m: f64) -> Result<AsymmetricPrior, Failure> {
        let m = self.m.unwrap_or(default_m);
        let unused = |flag: &str, set: bool| {
            if set {
                Err(Failure::usage(format!(
                    "--{flag} does not apply to the {} prior",
                    self.name()
                )))
            } else {
                Ok(())
            }
        };
        let prior = match self.prior {
            PriorKind::Beta => {
                unused("tau", self.tau.is_some())?;
                unused("gamma", self.gamma.is_some())?;
                AsymmetricPrior::beta(self.a.unwrap_or(5.0), self.b.unwrap_or(1.0), m)
            }
            PriorKind::Kumaraswamy => {
                unused("tau", self.tau.is_some())?;
                unused("gamma", self.gamma.is_some())?;
                AsymmetricPrior::kumaraswamy(self.a.unwrap_or(7.0), self.b.unwrap_or(2.0), m)
            }
            PriorKind::Triangular => {
                unused("b", self.b.is_some())?;
                unused("tau", self.tau.is_some())?;
                unused("gamma", self.gamma.is_some())?;
                let mode = self.a.unwrap_or(8.0);
                if self.m.is_some() {
                    AsymmetricPrior::triangular(mode, m)
                } else {
                    // the half-support is set level by level; keep the mode as given
                    Ok(AsymmetricPrior::Triangular {
                        mode,
                        m: 2.0 * mode.abs().max(1.0),
                    })
                }
            }
            PriorKind::SkewNormal => {
                unused("a", self.a.is_some())?;
                unused("b", self.b.is_some())?;
                unused("m", self.m.is_some())?;
                AsymmetricPrior::skew_normal(self.tau.unwrap_or(8.0), self.gamma.unwrap_or(4.0))
            }
        };
        prior.map_err(Failure::usage)
    }

    fn name(&self) -> &'static str {
        match self.prior {
            PriorKind::Beta => "beta",
            PriorKind::Kumaraswamy => "kumaraswamy",
            PriorKind::Triangular => "triangular",
            PriorKind::SkewNormal => "skew-normal",
        }
    }
}

#[derive(Args)]
struct DenoiseArgs {
    /// Input CSV: one value per row, optional header.
    #[arg(long, short)]
    input: PathBuf,
    /// Output CSV; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    prior: PriorArgs,
    /// Exponent of the level-dependent mixture weight.
    #[arg(long, default_value_t = 2.0)]
    alpha_beta_exponent: f64,
    #[arg(long, default_value = "db10")]
    basis: String,
    #[arg(long, default_value_t = 3)]
    j0: usize,
    /// Reflect-pad to the next power of two and truncate afterwards.
    #[arg(long)]
    pad: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScenarioName {
    Study1Weak,
    Study1Strong,
}

#[derive(Clone, Copy, ValueEnum)]
enum FunctionName {
    Bumps,
    Blocks,
    Doppler,
    Heavisine,
}

#[derive(Clone, Copy, ValueEnum)]
enum SimFormat {
    Json,
    Table,
    Csv,
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long, value_enum, conflicts_with = "function", required_unless_present = "function")]
    scenario: Option<ScenarioName>,
    #[arg(long, value_enum)]
    function: Option<FunctionName>,
    #[arg(long, default_value_t = 512)]
    n: usize,
    #[arg(long, default_value_t = 3.0)]
    snr: f64,
    #[arg(long, default_value_t = 50)]
    replications: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, default_value_t = 3)]
    j0: usize,
    #[arg(long, default_value = "db10")]
    basis: String,
    /// Comma-separated subset of CV, SURE, BETASYM, BETAASYM, KUM, TRI, SN.
    #[arg(long, value_delimiter = ',', value_parser = parse_method)]
    methods: Option<Vec<Method>>,
    /// `csv` writes the per-replication errors.
    #[arg(long, value_enum, default_value = "table")]
    format: SimFormat,
    #[arg(long, short)]
    output: Option<PathBuf>,
    /// Also write per-replication errors to this CSV.
    #[arg(long)]
    raw: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum GridFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct RiskgridArgs {
    #[command(flatten)]
    prior: PriorArgs,
    #[arg(long, default_value_t = 0.9)]
    alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    sigma: f64,
    #[arg(long, default_value_t = -6.0, allow_hyphen_values = true)]
    theta_min: f64,
    #[arg(long, default_value_t = 6.0, allow_hyphen_values = true)]
    theta_max: f64,
    #[arg(long, default_value_t = 121)]
    points: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: GridFormat,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

fn parse_method(s: &str) -> Result<Method, String> {
    s.parse().map_err(|e: asymshrink::ShrinkError| e.to_string())
}

/// An error together with its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(e: impl ToString) -> Self {
        Self {
            code: 2,
            message: e.to_string(),
        }
    }

    fn compute(e: impl ToString) -> Self {
        Self {
            code: 1,
            message: e.to_string(),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Denoise(args) => cmd_denoise(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Riskgrid(args) => cmd_riskgrid(&args),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn parse_basis(name: &str) -> Result<WaveletBasis, Failure> {
    name.parse().map_err(Failure::usage)
}

fn open_output(path: Option<&Path>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| Failure::compute(format!("cannot create {}: {e}", p.display()))),
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn write_failed(e: io::Error) -> Failure {
    Failure::compute(format!("write failed: {e}"))
}

/// Values and the header line, if the first row was not numeric.
fn read_series(path: &Path) -> Result<(Vec<f64>, Option<String>), Failure> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| Failure::compute(format!("cannot read {}: {e}", path.display())))?;
    let mut values = Vec::new();
    let mut header = None;
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Failure::compute(format!("row {row}: {e}")))?;
        if record.iter().all(str::is_empty) {
            continue;
        }
        if record.len() != 1 {
            return Err(Failure::compute(format!(
                "row {row}: expected one value, found {} fields",
                record.len()
            )));
        }
        let field = &record[0];
        match field.parse::<f64>() {
            Ok(v) if v.is_finite() => values.push(v),
            Ok(_) => return Err(Failure::compute(format!("row {row}: value `{field}` is not finite"))),
            Err(_) if row == 1 => header = Some(field.to_string()),
            Err(_) => return Err(Failure::compute(format!("row {row}: `{field}` is not a number"))),
        }
    }
    Ok((values, header))
}

/// Symmetric reflection `x0 .. x_{n-1} x_{n-1} .. x0 x0 ..` up to a power of two.
fn reflect_pad(values: &[f64]) -> Vec<f64> {
    let target = values.len().next_power_of_two();
    let mut out = values.to_vec();
    let period: Vec<f64> = values.iter().chain(values.iter().rev()).copied().collect();
    out.extend(period.iter().cycle().skip(values.len()).take(target - values.len()));
    out
}

fn cmd_denoise(args: &DenoiseArgs) -> Result<(), Failure> {
    let basis = parse_basis(&args.basis)?;
    if !(args.alpha_beta_exponent > 0.0 && args.alpha_beta_exponent.is_finite()) {
        return Err(Failure::usage("--alpha-beta-exponent must be positive"));
    }
    let family = args.prior.build(1.0)?;
    let policy = PolicyConfig {
        beta_exponent: args.alpha_beta_exponent,
        half_support: match args.prior.m {
            Some(m) => HalfSupport::Fixed(m),
            None => HalfSupport::LevelMax,
        },
        ..PolicyConfig::default().with_j0(args.j0)
    };

    let (values, header) = read_series(&args.input)?;
    let n = values.len();
    if n == 0 {
        return Err(Failure::compute("input contains no values"));
    }
    let padded = if args.pad {
        reflect_pad(&values)
    } else if n.is_power_of_two() {
        values
    } else {
        return Err(Failure::compute(format!(
            "input has {n} rows, not a power of two (use --pad)"
        )));
    };
    let signal = Signal::new(padded).map_err(Failure::compute)?;
    let fit = denoise_detailed(&signal, &basis, &family, &policy).map_err(Failure::compute)?;
    let estimate = &fit.estimate.as_slice()[..n];

    let mut out = open_output(args.output.as_deref())?;
    if let Some(h) = header {
        writeln!(out, "{h}").map_err(write_failed)?;
    }
    for v in estimate {
        writeln!(out, "{v}").map_err(write_failed)?;
    }
    out.flush().map_err(write_failed)?;
    drop(out);

    let snr = sample_sd(estimate) / fit.sigma;
    let summary = format!("sigma_hat = {}\nestimated SNR = {}", fit.sigma, snr);
    if args.output.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<(), Failure> {
    let basis = parse_basis(&args.basis)?;
    let scenario = match (args.scenario, args.function) {
        (Some(ScenarioName::Study1Weak), _) => Scenario::study1_weak(args.n, args.snr, args.replications, args.seed),
        (Some(ScenarioName::Study1Strong), _) => {
            Scenario::study1_strong(args.n, args.snr, args.replications, args.seed)
        }
        (None, Some(f)) => {
            let function = match f {
                FunctionName::Bumps => TestFunction::Bumps,
                FunctionName::Blocks => TestFunction::Blocks,
                FunctionName::Doppler => TestFunction::Doppler,
                FunctionName::Heavisine => TestFunction::Heavisine,
            };
            Scenario::test_function(function, args.n, args.snr, args.replications, args.seed)
        }
        (None, None) => unreachable!("clap requires one of --scenario or --function"),
    }
    .and_then(|s| s.with_j0(args.j0))
    .map_err(Failure::usage)?
    .with_basis(basis);

    let methods = args.methods.clone().unwrap_or_else(|| Method::ALL.to_vec());
    if methods.is_empty() {
        return Err(Failure::usage("--methods is empty"));
    }
    let report = run_experiment(&scenario, &methods).map_err(Failure::compute)?;

    let mut out = open_output(args.output.as_deref())?;
    match args.format {
        SimFormat::Json => writeln!(out, "{}", report.to_json()).map_err(write_failed)?,
        SimFormat::Table => report.write_table(&mut out).map_err(write_failed)?,
        SimFormat::Csv => report.write_raw_csv(&mut out).map_err(write_failed)?,
    }
    out.flush().map_err(write_failed)?;
    if let Some(path) = &args.raw {
        let mut raw = open_output(Some(path))?;
        report.write_raw_csv(&mut raw).map_err(write_failed)?;
        raw.flush().map_err(write_failed)?;
    }
    Ok(())
}

fn cmd_riskgrid(args: &RiskgridArgs) -> Result<(), Failure> {
    if args.points == 0 {
        return Err(Failure::usage("--points must be at least 1"));
    }
    if !(args.theta_min.is_finite() && args.theta_max.is_finite() && args.theta_min <= args.theta_max) {
        return Err(Failure::usage("need finite --theta-min <= --theta-max"));
    }
    let g = args.prior.build(3.0)?;
    let mixture = MixturePrior::new(args.alpha, g).map_err(Failure::usage)?;
    let rule = ShrinkageRule::new(mixture, args.sigma).map_err(Failure::usage)?;
    let thetas = linspace(args.theta_min, args.theta_max, args.points);
    let grid = risk_grid(&rule, &thetas, &RiskConfig::default()).map_err(Failure::compute)?;

    let mut out = open_output(args.output.as_deref())?;
    match args.format {
        GridFormat::Csv => grid.write_csv(&mut out).map_err(write_failed)?,
        GridFormat::Json => writeln!(out, "{}", grid.to_json()).map_err(write_failed)?,
    }
    out.flush().map_err(write_failed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reflect_pad_mirrors() {
        assert_eq!(reflect_pad(&[1.0, 2.0, 3.0]), vec![1.0, 2.0, 3.0, 3.0]);
        assert_eq!(
            reflect_pad(&[1.0, 2.0, 3.0, 4.0, 5.0]),
            vec![1.0, 2.0, 3.0, 4.0, 5.0, 5.0, 4.0, 3.0]
        );
        assert_eq!(reflect_pad(&[1.0, 2.0]), vec![1.0, 2.0]);
        assert_eq!(reflect_pad(&[7.0]), vec![7.0]);
    }

    #[test]
    fn clap_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
