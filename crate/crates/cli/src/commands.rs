//! Argument parsing and the four subcommands.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lqss_core::krein::schur::EigenOrdering;
use lqss_core::lqss::DEFAULT_TOL;
use lqss_core::{
    cascade_general, cascade_passive, decompose_static, feedback_general, feedback_passive, reck_decompose,
    verify_equivalence, EquivalenceReport, FreeParams, FrequencySpec, SystemKind,
};
use nalgebra::Complex;

use crate::error::{CliError, EXIT_OK, EXIT_PARSE};
use crate::files::{
    read, to_text, DecompositionFile, LoadedSystem, MatrixData, NetlistFile, RunReport, StaticFile, SystemFile,
    TransferFile, TransferSample, FORMAT_VERSION,
};

#[derive(Debug, Parser)]
#[command(name = "lqss-synth", version, about = "Realize linear quantum systems as cavity networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a cascade or feedback netlist from a system file.
    Synthesize(SynthesizeArgs),
    /// Check that a netlist reproduces a system's transfer function.
    Verify(VerifyArgs),
    /// Evaluate the transfer function G(s) of a system.
    Transfer(TransferArgs),
    /// Decompose a static network into elementary devices.
    DecomposeStatic(DecomposeArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Cascade,
    Feedback,
}

#[derive(Debug, Clone, Args)]
pub struct FreqArgs {
    /// Smallest nonzero sample frequency.
    #[arg(long, default_value_t = 1e-2)]
    pub freq_min: f64,
    /// Largest sample frequency.
    #[arg(long, default_value_t = 1e3)]
    pub freq_max: f64,
    /// Number of log-spaced nonzero frequencies.
    #[arg(long, default_value_t = 20)]
    pub freq_count: usize,
    /// Leave out the sample at zero frequency.
    #[arg(long)]
    pub no_zero: bool,
}

impl FreqArgs {
    fn spec(&self) -> FrequencySpec {
        FrequencySpec {
            min: self.freq_min,
            max: self.freq_max,
            count: self.freq_count,
            include_zero: !self.no_zero,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct CheckArgs {
    /// Relative transfer-function tolerance for verification.
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Tolerance for the structural checks on input systems.
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub validate_tol: f64,
    #[command(flatten)]
    pub freq: FreqArgs,
    /// Write a machine-readable run report to this path.
    #[arg(long)]
    pub json_report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SynthesizeArgs {
    pub input: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Cascade)]
    pub method: Method,
    /// Eigenvalue placement for cascades: descending-real, ascending-real,
    /// descending-imag, ascending-imag or explicit.
    #[arg(long, default_value = "descending-real")]
    pub ordering: String,
    /// Target eigenvalue `re,im` for the explicit ordering, top first.
    #[arg(long = "ordering-target", value_parser = parse_complex, allow_hyphen_values = true)]
    pub ordering_targets: Vec<Complex<f64>>,
    /// Feedback cavity detunings; one value is used for every cavity.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub detuning: Vec<f64>,
    /// Feedback interconnection coupling rates; one value is used for every cavity.
    #[arg(long, value_delimiter = ',')]
    pub interconnect_coupling: Vec<f64>,
    /// Store static networks as beam splitter, phase and squeezer lists.
    #[arg(long)]
    pub decompose_static: bool,
    /// Netlist path; standard output if absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    pub system: PathBuf,
    pub netlist: PathBuf,
    #[command(flatten)]
    pub check: CheckArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TransferArgs {
    pub system: PathBuf,
    /// Sample point `re,im`; repeat for several. Defaults to the `i w` grid.
    #[arg(long = "s", value_parser = parse_complex, allow_hyphen_values = true)]
    pub s_values: Vec<Complex<f64>>,
    #[command(flatten)]
    pub freq: FreqArgs,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub validate_tol: f64,
    /// Output path; standard output if absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub json_report: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct DecomposeArgs {
    pub input: PathBuf,
    /// Output path; standard output if absent.
    #[arg(long)]
    pub output: Option<PathBuf>,
    #[arg(long)]
    pub json_report: Option<PathBuf>,
}

fn parse_complex(text: &str) -> Result<Complex<f64>, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("'{s}': {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex::new(num(re)?, num(im)?)),
        _ => Err(format!("expected 're,im', got '{text}'")),
    }
}

/// Result of a successful command: a human summary and, where the command
/// compares transfer functions, the equivalence report.
struct Outcome {
    message: String,
    report: Option<EquivalenceReport>,
}

/// Failure together with any report produced before it.
struct Failure {
    error: CliError,
    report: Option<Box<EquivalenceReport>>,
}

impl From<CliError> for Failure {
    fn from(error: CliError) -> Self {
        Failure { error, report: None }
    }
}

impl From<lqss_core::Error> for Failure {
    fn from(e: lqss_core::Error) -> Self {
        Failure {
            error: e.into(),
            report: None,
        }
    }
}

/// Parses `args` (program name first), runs the command and returns the
/// process exit code.
pub fn run_from<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_PARSE
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn run(cli: &Cli) -> i32 {
    let (name, json_report, to_stdout) = match &cli.command {
        Command::Synthesize(a) => ("synthesize", &a.check.json_report, a.output.is_none()),
        Command::Verify(a) => ("verify", &a.check.json_report, false),
        Command::Transfer(a) => ("transfer", &a.json_report, a.output.is_none()),
        Command::DecomposeStatic(a) => ("decompose-static", &a.json_report, a.output.is_none()),
    };
    let result = match &cli.command {
        Command::Synthesize(a) => synthesize(a),
        Command::Verify(a) => verify(a),
        Command::Transfer(a) => transfer(a),
        Command::DecomposeStatic(a) => decompose(a),
    };
    let (code, message, report) = match result {
        Ok(o) => {
            // Keep standard output clean when it carries the document.
            if to_stdout {
                eprintln!("{}", o.message);
            } else {
                println!("{}", o.message);
            }
            (EXIT_OK, o.message, o.report)
        }
        Err(f) => {
            eprintln!("error: {}", f.error);
            (f.error.exit_code(), f.error.to_string(), f.report.map(|r| *r))
        }
    };
    if let Some(path) = json_report {
        let doc = RunReport {
            format_version: FORMAT_VERSION,
            command: name.into(),
            exit_code: code,
            message,
            report,
        };
        if let Err(e) = write_doc(Some(path), &to_text(&doc)) {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    }
    code
}

fn write_doc(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_system(path: &Path, validate_tol: f64) -> Result<LoadedSystem, CliError> {
    let sys = read::<SystemFile>(path, "system file")?.to_system()?;
    let report = match &sys {
        LoadedSystem::Passive(p) => p.validate(validate_tol),
        LoadedSystem::General(g) => g.validate(validate_tol),
    };
    if !report.is_valid() {
        return Err(CliError::Validation(format!("{}: {report}", path.display())));
    }
    Ok(sys)
}

/// Per-cavity values from a flag: empty gives `default`, one value is
/// repeated, otherwise exactly `n` values are required.
fn per_cavity(values: &[f64], n: usize, default: f64, flag: &str) -> Result<Vec<f64>, CliError> {
    match values.len() {
        0 => Ok(vec![default; n]),
        1 => Ok(vec![values[0]; n]),
        k if k == n => Ok(values.to_vec()),
        k => Err(CliError::Parse(format!("--{flag} takes 1 or {n} values, got {k}"))),
    }
}

fn verdict_line(r: &EquivalenceReport) -> String {
    format!(
        "max_rel_error {:.3e} at tolerance {:.1e} over {} samples: {}",
        r.max_rel_error,
        r.tolerance,
        r.frequencies.len(),
        if r.passed() { "PASS" } else { "FAIL" }
    )
}

fn synthesize(a: &SynthesizeArgs) -> Result<Outcome, Failure> {
    let sys = load_system(&a.input, a.check.validate_tol)?;
    let n = sys.n_modes();
    let mut netlist = match a.method {
        Method::Cascade => {
            let ordering = EigenOrdering::from_name(&a.ordering, a.ordering_targets.clone()).map_err(CliError::Parse)?;
            let r = match &sys {
                LoadedSystem::Passive(p) => cascade_passive(p, &ordering)?,
                LoadedSystem::General(g) => cascade_general(g, &ordering)?,
            };
            NetlistFile::from_cascade(&r, a.decompose_static)?
        }
        Method::Feedback => {
            let params = FreeParams {
                detunings: per_cavity(&a.detuning, n, 0.0, "detuning")?,
                interconnect_couplings: per_cavity(&a.interconnect_coupling, n, 1.0, "interconnect-coupling")?,
            };
            let r = match &sys {
                LoadedSystem::Passive(p) => feedback_passive(p, &params)?,
                LoadedSystem::General(g) => feedback_general(g, &params)?,
            };
            NetlistFile::from_feedback(&r, a.decompose_static)?
        }
    };
    // Verify what is written, including any element lists.
    let realized = netlist.to_realization()?.assemble()?;
    let report = verify_equivalence(&sys.general(), &realized, &a.check.freq.spec(), a.check.tol)?;
    netlist.report = Some(report.clone());
    write_doc(a.output.as_deref(), &to_text(&netlist))?;
    let detunings: Vec<String> = netlist.cavities.iter().map(|c| format!("{:.4}", c.spec.detuning)).collect();
    let message = format!(
        "{:?} netlist with {} cavities (detunings {}); {}",
        netlist.kind,
        netlist.cavities.len(),
        detunings.join(", "),
        verdict_line(&report)
    )
    .to_lowercase();
    if !report.passed() {
        return Err(Failure {
            error: CliError::Verification(message),
            report: Some(Box::new(report)),
        });
    }
    Ok(Outcome {
        message,
        report: Some(report),
    })
}

fn verify(a: &VerifyArgs) -> Result<Outcome, Failure> {
    let sys = load_system(&a.system, a.check.validate_tol)?;
    let netlist = read::<NetlistFile>(&a.netlist, "netlist")?;
    if netlist.n_io != sys.n_io() || netlist.mode != sys.kind() {
        return Err(CliError::Verification(format!(
            "netlist is a {:?} network on {} channels, the system is {:?} on {}",
            netlist.mode,
            netlist.n_io,
            sys.kind(),
            sys.n_io()
        ))
        .into());
    }
    let realized = netlist.to_realization()?.assemble()?;
    let report = verify_equivalence(&sys.general(), &realized, &a.check.freq.spec(), a.check.tol)?;
    let message = verdict_line(&report);
    if !report.passed() {
        return Err(Failure {
            error: CliError::Verification(message),
            report: Some(Box::new(report)),
        });
    }
    Ok(Outcome {
        message,
        report: Some(report),
    })
}

fn transfer(a: &TransferArgs) -> Result<Outcome, Failure> {
    let sys = load_system(&a.system, a.validate_tol)?;
    let points: Vec<Complex<f64>> = if a.s_values.is_empty() {
        a.freq.spec().omegas()?.into_iter().map(|w| Complex::new(0.0, w)).collect()
    } else {
        a.s_values.clone()
    };
    let samples = points
        .iter()
        .map(|&s| {
            let g = match &sys {
                LoadedSystem::Passive(p) => p.transfer_function(s)?,
                LoadedSystem::General(g) => g.transfer_function(s)?,
            };
            Ok(TransferSample {
                s: [s.re, s.im],
                g: MatrixData::from_matrix(&g),
            })
        })
        .collect::<Result<Vec<_>, lqss_core::Error>>()?;
    let doc = TransferFile {
        format_version: FORMAT_VERSION,
        mode: sys.kind(),
        n_io: sys.n_io(),
        samples,
    };
    write_doc(a.output.as_deref(), &to_text(&doc))?;
    Ok(Outcome {
        message: format!("evaluated G(s) at {} points", doc.samples.len()),
        report: None,
    })
}

fn decompose(a: &DecomposeArgs) -> Result<Outcome, Failure> {
    let file = read::<StaticFile>(&a.input, "static file")?;
    let matrix = file.to_matrix()?;
    let result = match file.mode {
        SystemKind::Passive => reck_decompose(&matrix),
        SystemKind::General => decompose_static(&matrix),
    };
    let decomposition = result.map_err(|e| match e {
        lqss_core::Error::Structure(m) => CliError::Validation(m),
        other => other.into(),
    })?;
    let message = format!(
        "{} beam splitters, {} squeezers, {} elements in total",
        decomposition.beam_splitter_count(),
        decomposition.squeezer_count(),
        decomposition.elements.len()
    );
    let doc = DecompositionFile {
        format_version: FORMAT_VERSION,
        decomposition,
    };
    write_doc(a.output.as_deref(), &to_text(&doc))?;
    Ok(Outcome { message, report: None })
}
