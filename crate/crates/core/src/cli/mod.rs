//! Command-line front end and the end-to-end certification pipeline.

pub mod certificate;
pub mod parse;

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::error::Error;
use crate::exact_arith::{format_rational, parse_rational, Rational};
use crate::farfield::{self, certify_farfield, recentre, search_alpha, FarFieldCertificate};
use crate::geometry::Point2;
use crate::gridcert::{self, scale_instance, scan_grid_with, GridCertificate, ScanOptions};
use crate::instance::{Instance, Weights};
use crate::ordering::{
    self, classify_all, search_witness, Ordering, WitnessBudget, WitnessVerdict,
};

pub use certificate::{CertificateBundle, CertificateFile, FORMAT_VERSION};
pub use parse::{parse_instance, parse_lenient, ParsedInstance};

pub const EXIT_VALID: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
/// Command-line usage errors (reported by clap).
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_SIZE_GUARD: i32 = 4;
pub const EXIT_STAGE: i32 = 5;

/// Smallest scale tried when `--scale` is not given; the default is the
/// least multiple of the coordinate denominators' lcm that reaches it.
pub const DEFAULT_MIN_SCALE: u64 = 100;
pub const DEFAULT_PRECISION_DIGITS: u32 = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Config,
    Recentre,
    FarField,
    Scale,
    Grid,
    Orderings,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stage::Config => "config",
            Stage::Recentre => "recentre",
            Stage::FarField => "farfield",
            Stage::Scale => "scale",
            Stage::Grid => "grid",
            Stage::Orderings => "orderings",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("[{stage}] {source}")]
pub struct StageError {
    pub stage: Stage,
    #[source]
    pub source: Error,
}

trait AtStage<T> {
    fn at(self, stage: Stage) -> Result<T, StageError>;
}

impl<T> AtStage<T> for Result<T, Error> {
    fn at(self, stage: Stage) -> Result<T, StageError> {
        self.map_err(|source| StageError { stage, source })
    }
}

/// Pipeline settings; `None` fields use the documented defaults.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub alpha: Option<Rational>,
    pub scale: Option<BigInt>,
    pub half_width: Option<u64>,
    /// Radius over-estimates are accurate to `10^-precision_digits`.
    pub precision_digits: u32,
    pub workers: Option<usize>,
    pub progress: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha: None,
            scale: None,
            half_width: None,
            precision_digits: DEFAULT_PRECISION_DIGITS,
            workers: None,
            progress: false,
        }
    }
}

impl RunConfig {
    pub fn precision_denominator(&self) -> BigInt {
        num_traits::pow(BigInt::from(10u32), self.precision_digits as usize)
    }

    /// Checks overrides before any work starts.
    pub fn validate(&self, inst: &Instance, weights: &Weights) -> Result<(), StageError> {
        if let Some(alpha) = &self.alpha {
            if alpha <= &Rational::one() {
                return Err(Error::AlphaOutOfRange(format_rational(alpha))).at(Stage::Config);
            }
        }
        if let Some(s) = &self.scale {
            scale_instance(inst, weights, s).at(Stage::Config)?;
        }
        Ok(())
    }
}

/// Least multiple of the coordinates' common denominator that is at least
/// [`DEFAULT_MIN_SCALE`].
pub fn default_scale(inst: &Instance) -> BigInt {
    let lcm = inst
        .all_points()
        .iter()
        .flat_map(|p| [p.x.denom().clone(), p.y.denom().clone()])
        .fold(BigInt::one(), |acc, d| acc.lcm(&d));
    let k = Integer::div_ceil(&BigInt::from(DEFAULT_MIN_SCALE), &lcm).max(BigInt::one());
    lcm * k
}

fn far_field_stage(
    inst: &Instance,
    config: &RunConfig,
) -> Result<(Instance, Point2, FarFieldCertificate), StageError> {
    inst.require_secondaries().at(Stage::Recentre)?;
    let centred = recentre(inst).at(Stage::Recentre)?;
    let translation = &centred.primaries()[0] - &inst.primaries()[0];
    let alpha = match &config.alpha {
        Some(a) => a.clone(),
        None => search_alpha(&centred, farfield::DEFAULT_ALPHA_ITERATIONS).at(Stage::FarField)?,
    };
    let ff =
        certify_farfield(&centred, &alpha, &config.precision_denominator()).at(Stage::FarField)?;
    Ok((centred, translation, ff))
}

/// Far field, scaling and grid scan, without the ordering table.
fn certify_geometry(
    inst: &Instance,
    weights: &Weights,
    config: &RunConfig,
) -> Result<CertificateBundle, StageError> {
    config.validate(inst, weights)?;
    let (centred, translation, ff) = far_field_stage(inst, config)?;

    let scale = config.scale.clone().unwrap_or_else(|| default_scale(inst));
    let si = scale_instance(&centred, weights, &scale).at(Stage::Scale)?;

    let half_width = match config.half_width {
        Some(h) => h,
        None => {
            let h = gridcert::default_half_width(&scale, &ff.rho);
            h.to_u64()
                .ok_or_else(|| Error::GridTooLarge(h.to_string()))
                .at(Stage::Grid)?
        }
    };
    let grid = run_grid(&si, half_width, config);

    Ok(CertificateBundle {
        instance: inst.clone(),
        weights: weights.clone(),
        translation,
        precision_denominator: config.precision_denominator(),
        farfield: ff,
        scale,
        grid,
        classification: None,
    })
}

/// Runs the full pipeline: recentre, far field, scaling, grid scan and
/// (for at most ten points) ordering classification.
pub fn run_certify(
    inst: &Instance,
    weights: &Weights,
    config: &RunConfig,
) -> Result<CertificateBundle, StageError> {
    let mut bundle = certify_geometry(inst, weights, config)?;
    if inst.len() <= ordering::MAX_ORDERING_POINTS {
        let certified = bundle.is_valid();
        bundle.classification =
            Some(classify_all(inst, Some(weights), certified).at(Stage::Orderings)?);
    }
    Ok(bundle)
}

fn run_grid(si: &gridcert::ScaledInstance, half_width: u64, config: &RunConfig) -> GridCertificate {
    let last = AtomicU64::new(0);
    let report = |done: u64, total: u64| {
        let step = done * 20 / total;
        if step > last.fetch_max(step, AtomicOrdering::Relaxed) {
            eprintln!("grid: {:>3}% ({done}/{total} rows)", step * 5);
        }
    };
    let opts = ScanOptions {
        workers: config.workers,
        progress: config
            .progress
            .then_some(&report as &(dyn Fn(u64, u64) + Sync)),
    };
    scan_grid_with(si, half_width, &opts)
}

fn approx(x: &Rational) -> String {
    format!("{:.6}", x.to_f64().unwrap_or(f64::NAN))
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAILED"
    }
}

pub fn render_farfield(ff: &FarFieldCertificate) -> String {
    let f = &ff.form;
    format!(
        "far field: alpha = {} (~{})\n  q(x,y) = ({})x^2 + 2({})xy + ({})y^2, psd: {}\n  R <= {}, R' <= {}, rho = {} (~{})\n",
        format_rational(&ff.alpha),
        approx(&ff.alpha),
        format_rational(&f.a),
        format_rational(&f.b),
        format_rational(&f.c),
        yes_no(ff.psd),
        format_rational(&ff.r_hat),
        format_rational(&ff.rp_hat),
        format_rational(&ff.rho),
        approx(&ff.rho),
    )
}

pub fn render_grid(grid: &GridCertificate, scale: &BigInt) -> String {
    format!(
        "grid: S = {scale}, H = {}, min f~ = {} at ({}, {}), L = {}\n  margin 2*min^2 > L^2: {}\n",
        grid.half_width,
        grid.min_value,
        grid.argmin.x,
        grid.argmin.y,
        grid.lipschitz,
        yes_no(grid.margin_ok),
    )
}

pub fn render_report(bundle: &CertificateBundle) -> String {
    let mut out = format!(
        "instance: {} primary, {} secondary points; weights {}, {}\n",
        bundle.instance.n(),
        bundle.instance.m(),
        format_rational(&bundle.weights.primary),
        format_rational(&bundle.weights.secondary),
    );
    if !bundle.translation.is_origin() {
        out += &format!("recentred by {}\n", bundle.translation);
    }
    out += &render_farfield(&bundle.farfield);
    out += &render_grid(&bundle.grid, &bundle.scale);
    let covered = bundle.grid.covered_radius(&bundle.scale);
    out += &format!(
        "  covers |v| <= {} (~{}) >= rho: {}\n",
        format_rational(&covered),
        approx(&covered),
        yes_no(bundle.coverage_ok())
    );
    if let Some(table) = &bundle.classification {
        let headline: Vec<String> = table.headline().map(|r| r.ordering.to_string()).collect();
        let qualifier = if table.certified {
            ""
        } else {
            " (conditional)"
        };
        out += &format!(
            "orderings: {} protrusive, {} of them excluded{qualifier}\n",
            table.rows.iter().filter(|r| r.protrusive).count(),
            headline.len()
        );
        for h in headline {
            out += &format!("  {h}\n");
        }
    }
    out += &format!(
        "overall: {}\n",
        if bundle.is_valid() {
            "VALID"
        } else {
            "INVALID"
        }
    );
    out
}

/// One table row per ordering.
pub fn run_orderings(
    parsed: &ParsedInstance,
    config: &RunConfig,
    budget: &WitnessBudget,
    protrusive_only: bool,
) -> Result<String, StageError> {
    let inst = &parsed.instance;
    let (weights, certified) = if inst.m() == 0 {
        (None, false)
    } else {
        let w = parsed.weights().at(Stage::Config)?;
        let certified = match certify_geometry(inst, &w, config) {
            Ok(bundle) => bundle.is_valid(),
            Err(e) => {
                eprintln!("certification failed, exclusions are conditional: {e}");
                false
            }
        };
        (Some(w), certified)
    };
    let table = classify_all(inst, weights.as_ref(), certified).at(Stage::Orderings)?;

    let rows: Vec<_> = table
        .rows
        .iter()
        .filter(|r| r.protrusive || !protrusive_only)
        .collect();
    let width = rows
        .iter()
        .map(|r| r.ordering.to_string().len())
        .max()
        .unwrap_or(8)
        .max(8);
    let mut out = format!(
        "{:<width$} | {:<14} | {:<22} | witness\n",
        "ordering", "protrusive", "exclusion"
    );
    for row in rows {
        let exclusion = match row.excluded {
            None => "",
            Some(true) if table.certified => "EXCLUDED",
            Some(true) => "EXCLUDED (conditional)",
            Some(false) => "not excluded",
        };
        let skip_search = !row.protrusive || (table.certified && row.excluded == Some(true));
        let witness = if skip_search || budget.restarts == 0 {
            "UNKNOWN".to_string()
        } else {
            let attempt = search_witness(inst, &row.ordering, budget).at(Stage::Orderings)?;
            match attempt.verdict {
                WitnessVerdict::Witnessed => {
                    format!("WITNESSED by {}", render_multiset(&attempt.multiset))
                }
                _ => "UNKNOWN".to_string(),
            }
        };
        out += &format!(
            "{:<width$} | {:<14} | {:<22} | {}\n",
            row.ordering.to_string(),
            if row.protrusive {
                "protrusive"
            } else {
                "not protrusive"
            },
            exclusion,
            witness
        );
    }
    Ok(out)
}

fn render_multiset(v: &[Point2]) -> String {
    let parts: Vec<String> = v
        .iter()
        .map(|p| {
            format!(
                "({:.6}, {:.6})",
                p.x.to_f64().unwrap_or(f64::NAN),
                p.y.to_f64().unwrap_or(f64::NAN)
            )
        })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

// ---------------------------------------------------------------------------
// argument parsing

fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}

#[derive(Parser, Debug)]
#[command(
    name = "distcert",
    version,
    about = "Certify mean-distance inequalities in the plane and classify the orderings they exclude",
    after_help = "EXAMPLES:\n  distcert certify data/paper.inst --alpha 200/121 --scale 100 --half-width 600 --out cert.json\n  distcert orderings data/paper.inst --protrusive-only\n  distcert witness data/paper.inst --ordering \"c3,c1',c2,c1,c2'\""
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct CertArgs {
    /// Instance file (`primary x y`, `secondary x y`, optional `weights l l'`)
    pub instance: PathBuf,
    /// Use this alpha instead of searching for the largest feasible one
    #[arg(long, value_parser = rational_arg)]
    pub alpha: Option<Rational>,
    /// Grid scale S (default: least multiple of the coordinate denominators >= 100)
    #[arg(long)]
    pub scale: Option<BigInt>,
    /// Grid half-width H in scaled units (default: ceil(S * rho))
    #[arg(long = "half-width")]
    pub half_width: Option<u64>,
    /// Radius over-estimates are accurate to 10^-N
    #[arg(long, default_value_t = DEFAULT_PRECISION_DIGITS)]
    pub precision: u32,
    /// Worker threads for the grid scan (default: available parallelism)
    #[arg(long)]
    pub workers: Option<usize>,
    /// Write the JSON certificate here (default: stdout, with the report on stderr)
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Suppress progress output
    #[arg(long)]
    pub quiet: bool,
}

impl CertArgs {
    fn config(&self) -> RunConfig {
        RunConfig {
            alpha: self.alpha.clone(),
            scale: self.scale.clone(),
            half_width: self.half_width,
            precision_digits: self.precision,
            workers: self.workers,
            progress: !self.quiet,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct WitnessArgs {
    /// Random restarts per ordering (0 disables the search)
    #[arg(long = "witness-budget", default_value_t = 100)]
    pub witness_budget: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Decimal digits for verifying a candidate witness
    #[arg(long = "witness-digits", default_value_t = ordering::DEFAULT_WITNESS_DIGITS)]
    pub witness_digits: u32,
    /// Largest multiset size tried
    #[arg(long = "max-multiset", default_value_t = 3)]
    pub max_multiset: usize,
}

impl WitnessArgs {
    fn budget(&self) -> WitnessBudget {
        WitnessBudget {
            restarts: self.witness_budget,
            seed: self.seed,
            digits: self.witness_digits,
            max_multiset_size: self.max_multiset,
            ..WitnessBudget::default()
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Far field, grid and ordering classification; exit 0 iff VALID
    Certify(CertArgs),
    /// Far-field certificate only
    Farfield(CertArgs),
    /// Grid certificate, checked against the far-field radius
    Grid(CertArgs),
    /// Classify every ordering as protrusive and/or excluded
    Orderings {
        #[command(flatten)]
        cert: CertArgs,
        #[command(flatten)]
        witness: WitnessArgs,
        /// Only list protrusive orderings
        #[arg(long)]
        protrusive_only: bool,
    },
    /// Search for a multiset realizing one ordering
    Witness {
        instance: PathBuf,
        /// Comma-separated labels, e.g. "c1,c2,c1',c3,c2'"
        #[arg(long)]
        ordering: String,
        #[command(flatten)]
        witness: WitnessArgs,
    },
}

enum Failure {
    Input(String),
    Stage(StageError),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Input(_) => EXIT_INPUT,
            Failure::Stage(e) if matches!(e.source, Error::SizeGuard { .. }) => EXIT_SIZE_GUARD,
            Failure::Stage(_) => EXIT_STAGE,
        }
    }
}

impl From<StageError> for Failure {
    fn from(e: StageError) -> Self {
        Failure::Stage(e)
    }
}

fn read_parsed(path: &Path) -> Result<ParsedInstance, Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_lenient(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_strict(path: &Path) -> Result<(Instance, Weights), Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write_out(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(value: &T) -> String {
    let mut json = serde_json::to_string_pretty(value).expect("certificate serializes");
    json.push('\n');
    json
}

/// With `--out`, the report goes to stdout and the JSON to the file;
/// otherwise the JSON goes to stdout and the report to stderr.
fn emit(report: &str, json: &str, out: Option<&Path>) -> Result<(), Failure> {
    match out {
        Some(path) => {
            write_out(path, json)?;
            print!("{report}");
            println!("certificate written to {}", path.display());
        }
        None => {
            eprint!("{report}");
            print!("{json}");
        }
    }
    Ok(())
}

fn dispatch(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Certify(args) => {
            let (inst, w) = read_strict(&args.instance)?;
            let bundle = run_certify(&inst, &w, &args.config())?;
            emit(
                &render_report(&bundle),
                &bundle.to_json(),
                args.out.as_deref(),
            )?;
            Ok(if bundle.is_valid() {
                EXIT_VALID
            } else {
                EXIT_INVALID
            })
        }
        Command::Farfield(args) => {
            let (inst, w) = read_strict(&args.instance)?;
            let config = args.config();
            config.validate(&inst, &w)?;
            let (_, _, ff) = far_field_stage(&inst, &config)?;
            let echo =
                certificate::FarFieldEcho::from_certificate(&ff, &config.precision_denominator());
            emit(&render_farfield(&ff), &to_json(&echo), args.out.as_deref())?;
            Ok(if ff.psd { EXIT_VALID } else { EXIT_INVALID })
        }
        Command::Grid(args) => {
            let (inst, w) = read_strict(&args.instance)?;
            let bundle = certify_geometry(&inst, &w, &args.config())?;
            let echo = bundle.to_file().grid;
            let report = format!(
                "{}  covers |v| <= {} >= rho = {}: {}\n",
                render_grid(&bundle.grid, &bundle.scale),
                echo.covered_radius,
                format_rational(&bundle.farfield.rho),
                yes_no(echo.coverage_ok)
            );
            emit(&report, &to_json(&echo), args.out.as_deref())?;
            Ok(if echo.margin_ok && echo.coverage_ok {
                EXIT_VALID
            } else {
                EXIT_INVALID
            })
        }
        Command::Orderings {
            cert,
            witness,
            protrusive_only,
        } => {
            let parsed = read_parsed(&cert.instance)?;
            let mut config = cert.config();
            config.progress = false;
            print!(
                "{}",
                run_orderings(&parsed, &config, &witness.budget(), protrusive_only)?
            );
            Ok(EXIT_VALID)
        }
        Command::Witness {
            instance,
            ordering: text,
            witness,
        } => {
            let parsed = read_parsed(&instance)?;
            let inst = &parsed.instance;
            let ord = Ordering::parse(inst, &text).map_err(|e| Failure::Input(e.to_string()))?;
            let attempt = search_witness(inst, &ord, &witness.budget()).at(Stage::Orderings)?;
            println!("ordering: {ord}");
            println!("verdict: {}", attempt.verdict.as_str());
            if attempt.verdict == WitnessVerdict::Witnessed {
                println!("multiset: {}", render_multiset(&attempt.multiset));
                for (label, sum) in ord.labels().iter().zip(&attempt.distance_sums) {
                    println!(
                        "  D_V({label}) ~ {:.15}",
                        sum.lower().to_f64().unwrap_or(f64::NAN)
                    );
                }
            }
            Ok(EXIT_VALID)
        }
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { 0 };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            match &failure {
                Failure::Input(msg) => eprintln!("error: {msg}"),
                Failure::Stage(e) => eprintln!("error: {e}"),
            }
            failure.exit_code()
        }
    }
}
