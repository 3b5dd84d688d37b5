//! The `milnor` command line: argument handling, dispatch, and text and
//! JSON rendering of the reports.
//!
//! Exit codes: 0 success, 1 usage or internal error, 2 gate refusal
//! (degenerate input, or no χ value under the chosen convention), 3 parse
//! error, 4 constant input, 5 calibration failure.

pub mod dto;
pub mod text;

use std::ffi::OsString;

use clap::{Args, Parser, Subcommand, ValueEnum};

use milnor_core::cone::{self, ChiConvention};
use milnor_core::nondegeneracy;
use milnor_core::pipeline::{self, AnalyzeOptions, PipelineError, DEFAULT_SEED};
use milnor_core::{newton_polytope_at_infinity, LaurentPoly, PolytopeError};

use dto::{
    CheckReportJson, ChiJson, ChiReportJson, ChiRowJson, JsonReport, PolytopeReportJson,
    SCHEMA_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_GATE: i32 = 2;
pub const EXIT_PARSE: i32 = 3;
pub const EXIT_CONSTANT: i32 = 4;
pub const EXIT_CALIBRATION: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "milnor",
    version,
    about = "Motivic Milnor fibre and spectrum at infinity of Laurent polynomials"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Full analysis: faces, χ, certificates, S_{f,∞}, spectrum, checks.
    Analyze(AnalyzeArgs),
    /// Newton polyhedron at infinity and its face lattice.
    Polytope(InputArgs),
    /// Euler characteristics of the normal cones of the faces not containing 0.
    Chi(ChiArgs),
    /// Non-degeneracy certificates.
    Check(SeededArgs),
    /// Run the calibration fixtures.
    Calibrate(CalibrateArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Laurent,
    Affine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ConventionArg {
    CommodeOnly,
    ConeChi,
    Calibrated,
}

impl From<ConventionArg> for ChiConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::CommodeOnly => ChiConvention::CommodeOnly,
            ConventionArg::ConeChi => ChiConvention::ConeChi,
            ConventionArg::Calibrated => ChiConvention::Calibrated,
        }
    }
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// The polynomial, e.g. "x + y + x^-1*y^-1".
    pub polynomial: String,
    /// Comma-separated variable names. The order fixes the coordinates.
    #[arg(long, value_delimiter = ',', required = true)]
    pub vars: Vec<String>,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

#[derive(Debug, Args)]
pub struct SeededArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Seed for randomized non-degeneracy tests.
    #[arg(long, env = "MILNOR_SEED")]
    pub seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ChiArgs {
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "cone-chi")]
    pub chi_convention: ConventionArg,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub seeded: SeededArgs,
    #[arg(long, value_enum, default_value = "laurent")]
    pub mode: ModeArg,
    #[arg(long, value_enum, default_value = "cone-chi")]
    pub chi_convention: ConventionArg,
    /// Proceed past degenerate faces (recorded in the report).
    #[arg(long)]
    pub assume_nondegenerate: bool,
}

#[derive(Debug, Args)]
pub struct CalibrateArgs {
    #[arg(long, value_enum, default_value = "cone-chi")]
    pub chi_convention: ConventionArg,
    #[arg(long, value_enum, default_value = "text")]
    pub format: Format,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    fn ok(code: i32, stdout: String) -> Self {
        Outcome {
            code,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        Outcome {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn parse(input: &InputArgs) -> Result<LaurentPoly, Outcome> {
    let vars: Vec<&str> = input.vars.iter().map(|v| v.trim()).collect();
    LaurentPoly::parse(&input.polynomial, &vars)
        .map_err(|e| Outcome::fail(EXIT_PARSE, format!("error: {e}\n")))
}

fn pipeline_failure(e: PipelineError) -> Outcome {
    match e {
        PipelineError::Parse(e) => Outcome::fail(EXIT_PARSE, format!("error: {e}\n")),
        PipelineError::NegativeExponent(_) => Outcome::fail(EXIT_PARSE, format!("error: {e}\n")),
        PipelineError::Constant | PipelineError::Polytope(PolytopeError::ConstantInput) => {
            Outcome::fail(EXIT_CONSTANT, "error: input is constant\n".into())
        }
        other => Outcome::fail(EXIT_USAGE, format!("internal error: {other}\n")),
    }
}

fn constant_input() -> Outcome {
    Outcome::fail(EXIT_CONSTANT, "error: input is constant\n".into())
}

fn cmd_analyze(args: &AnalyzeArgs) -> Outcome {
    let f = match parse(&args.seeded.input) {
        Ok(f) => f,
        Err(o) => return o,
    };
    let options = AnalyzeOptions {
        chi_convention: args.chi_convention.into(),
        assume_nondegenerate: args.assume_nondegenerate,
        seed: args.seeded.seed.unwrap_or(DEFAULT_SEED),
    };
    let result = match args.mode {
        ModeArg::Laurent => pipeline::analyze_laurent(&f, &options),
        ModeArg::Affine => pipeline::analyze_affine(&f, &options),
    };
    let report = match result {
        Ok(r) => r,
        Err(e) => return pipeline_failure(e),
    };
    let stdout = match args.seeded.input.format {
        Format::Json => json(&JsonReport::from(&report)),
        Format::Text => text::analysis(&report),
    };
    if report.gate.is_refused() {
        Outcome {
            code: EXIT_GATE,
            stdout,
            stderr: format!(
                "refused: {}\n",
                report.gate.reason().unwrap_or("hypotheses not satisfied")
            ),
        }
    } else {
        Outcome::ok(EXIT_OK, stdout)
    }
}

fn cmd_polytope(args: &InputArgs) -> Outcome {
    let f = match parse(args) {
        Ok(f) => f,
        Err(o) => return o,
    };
    if f.is_constant() {
        return constant_input();
    }
    let poly = match newton_polytope_at_infinity(&f) {
        Ok(p) => p,
        Err(e) => return pipeline_failure(e.into()),
    };
    let lattice = poly.face_lattice();
    let report = PolytopeReportJson::new(f.to_string(), f.variables().to_vec(), &poly, &lattice);
    Outcome::ok(
        EXIT_OK,
        match args.format {
            Format::Json => json(&report),
            Format::Text => text::polytope(&report),
        },
    )
}

fn cmd_chi(args: &ChiArgs) -> Outcome {
    let f = match parse(&args.input) {
        Ok(f) => f,
        Err(o) => return o,
    };
    if f.is_constant() {
        return constant_input();
    }
    let convention: ChiConvention = args.chi_convention.into();
    let run = || -> Result<ChiReportJson, PipelineError> {
        let poly = newton_polytope_at_infinity(&f)?;
        let lattice = poly.face_lattice();
        let mut rows = Vec::new();
        for face in lattice.faces_gamma() {
            let chi = cone::chi(face, &poly, convention)?;
            rows.push(ChiRowJson {
                dim: face.dim,
                vertices: face.vertices.iter().map(|v| v.to_vec()).collect(),
                in_coordinate_hyperplane: face.in_coordinate_hyperplane,
                chi: ChiJson::from(&chi),
            });
        }
        Ok(ChiReportJson {
            schema_version: SCHEMA_VERSION,
            input: f.to_string(),
            variables: f.variables().to_vec(),
            commode: poly.is_commode(),
            convention: convention.tag().into(),
            rows,
        })
    };
    match run() {
        Ok(report) => Outcome::ok(
            EXIT_OK,
            match args.input.format {
                Format::Json => json(&report),
                Format::Text => text::chi(&report),
            },
        ),
        Err(e) => pipeline_failure(e),
    }
}

fn cmd_check(args: &SeededArgs) -> Outcome {
    let f = match parse(&args.input) {
        Ok(f) => f,
        Err(o) => return o,
    };
    if f.is_constant() {
        return constant_input();
    }
    let seed = args.seed.unwrap_or(DEFAULT_SEED);
    let run = || -> Result<CheckReportJson, PipelineError> {
        let poly = newton_polytope_at_infinity(&f)?;
        let lattice = poly.face_lattice();
        let report = nondegeneracy::check_all(&f, &poly, &lattice, seed)?;
        Ok(CheckReportJson::new(
            f.to_string(),
            f.variables().to_vec(),
            seed,
            &report,
        ))
    };
    match run() {
        Ok(report) => Outcome::ok(
            EXIT_OK,
            match args.input.format {
                Format::Json => json(&report),
                Format::Text => text::certificates(&report),
            },
        ),
        Err(e) => pipeline_failure(e),
    }
}

fn cmd_calibrate(args: &CalibrateArgs) -> Outcome {
    let report = pipeline::calibration_suite(args.chi_convention.into());
    let dto = dto::CalibrationReportJson::from(&report);
    let stdout = match args.format {
        Format::Json => json(&dto),
        Format::Text => text::calibration(&dto),
    };
    if report.all_pass() {
        Outcome::ok(EXIT_OK, stdout)
    } else {
        Outcome {
            code: EXIT_CALIBRATION,
            stdout,
            stderr: "calibration failed\n".into(),
        }
    }
}

pub fn execute(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a),
        Command::Polytope(a) => cmd_polytope(a),
        Command::Chi(a) => cmd_chi(a),
        Command::Check(a) => cmd_check(a),
        Command::Calibrate(a) => cmd_calibrate(a),
    }
}

/// Parses `args` (program name first) and runs the command.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                Outcome::fail(EXIT_USAGE, rendered)
            } else {
                Outcome::ok(EXIT_OK, rendered)
            }
        }
    }
}
