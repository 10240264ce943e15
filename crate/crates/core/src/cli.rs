//! The `ncps` command line: entropy, spectrum, figure and verify.

use std::io::{IsTerminal, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::ParamOverrides;
use crate::entropy::{
    entanglement, parse_order, renyi_numeric, tsallis_numeric, von_neumann_numeric, EntropyKind, EntropyResult,
};
use crate::error::{Error, Result};
use crate::figures::{format_number, generate, FigureSpec};
use crate::moments::Subsystem;
use crate::params::{derive, ModelParams, NEAR_SINGULAR_BAND};
use crate::verify::{run as run_verify, VerifyOptions};
use crate::wigner::{energy, reduced_ground_state, MAX_INDEX};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_INVALID_PARAMS: i32 = 2;
pub const EXIT_UNSUPPORTED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "ncps",
    version,
    about = "Oscillator entanglement on noncommutative phase space"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Entanglement entropy of the ground state (one JSON object)
    Entropy(EntropyArgs),
    /// Energy levels E_ij as CSV
    Spectrum(SpectrumArgs),
    /// Regenerate the data behind one figure as CSV
    Figure(FigureArgs),
    /// Run the invariant suite and print a JSON report
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub hbar: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub omega: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub nu: Option<f64>,
    /// TOML parameter file; flags override its values
    #[arg(long)]
    pub config: Option<PathBuf>,
}

impl ParamArgs {
    pub fn resolve(&self) -> Result<ModelParams> {
        let file = match &self.config {
            Some(path) => ParamOverrides::load(path)?,
            None => ParamOverrides::default(),
        };
        let flags = ParamOverrides {
            hbar: self.hbar,
            mass: self.mass,
            omega: self.omega,
            mu: self.mu,
            nu: self.nu,
        };
        file.merged(flags).resolve()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    Renyi,
    Tsallis,
    VonNeumann,
}

impl From<KindArg> for EntropyKind {
    fn from(k: KindArg) -> Self {
        match k {
            KindArg::Renyi => EntropyKind::Renyi,
            KindArg::Tsallis => EntropyKind::Tsallis,
            KindArg::VonNeumann => EntropyKind::VonNeumann,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Closed,
    Numeric,
}

#[derive(Debug, Clone, Args)]
pub struct EntropyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, value_enum, default_value = "von-neumann")]
    pub kind: KindArg,
    /// Order α (Rényi) or q (Tsallis); integers only. Defaults to 1 for
    /// von-neumann and 2 otherwise.
    #[arg(long)]
    pub order: Option<String>,
    #[arg(long, value_enum, default_value = "closed")]
    pub method: MethodArg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Units {
    /// Energies divided by ħω
    Natural,
    /// Energies in the units of the supplied ħ and ω
    Si,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[arg(long, default_value_t = 2)]
    pub i_max: u32,
    #[arg(long, default_value_t = 2)]
    pub j_max: u32,
    #[arg(long, value_enum, default_value = "natural")]
    pub units: Units,
    /// Sort rows by ascending energy
    #[arg(long)]
    pub sort: bool,
}

#[derive(Debug, Clone, Args)]
pub struct FigureArgs {
    /// Figure id, 1-5
    #[arg(long)]
    pub figure: u8,
    /// Output file; standard output when omitted
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Points per axis
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    /// Relative shift of every eigenvalue in the genvalue check (negative control)
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub perturb_energy: f64,
}

/// Maps an error to the documented exit code.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::InvalidParameters(_) | Error::Config(_) => EXIT_INVALID_PARAMS,
        Error::UnsupportedOrder(_) | Error::Unsupported(_) | Error::OutOfRange(_) => EXIT_UNSUPPORTED,
        Error::Domain(_) | Error::Consistency(_) | Error::Io(_) => EXIT_VERIFY_FAILED,
    }
}

fn warn(stderr: &mut dyn Write, message: &str) {
    let color = std::env::var_os("NO_COLOR").is_none() && std::io::stderr().is_terminal();
    let _ = if color {
        writeln!(stderr, "\x1b[33mwarning:\x1b[0m {message}")
    } else {
        writeln!(stderr, "warning: {message}")
    };
}

fn params_checked(args: &ParamArgs, stderr: &mut dyn Write) -> Result<ModelParams> {
    let p = args.resolve()?;
    if p.near_singular() {
        warn(
            stderr,
            &format!(
                "mu*nu = {} is within a relative {NEAR_SINGULAR_BAND:e} of hbar^2; results are ill-conditioned",
                p.mu * p.nu
            ),
        );
    }
    Ok(p)
}

fn cmd_entropy(args: &EntropyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let kind = EntropyKind::from(args.kind);
    let order = match &args.order {
        Some(text) => {
            let x: f64 = text
                .trim()
                .parse()
                .map_err(|_| Error::UnsupportedOrder(format!("unsupported order {text:?}: not a number")))?;
            parse_order(x)?
        }
        None if kind == EntropyKind::VonNeumann => 1,
        None => 2,
    };
    let p = params_checked(&args.params, stderr)?;
    let lambda = derive(&p)?.lambda;
    let result: EntropyResult = match args.method {
        MethodArg::Closed => entanglement(kind, order, lambda)?,
        MethodArg::Numeric => {
            let closed = entanglement(kind, order, lambda)?;
            let reduced = reduced_ground_state(&p, Subsystem::One)?;
            let r = match (kind, order) {
                (EntropyKind::Renyi, 1) | (EntropyKind::VonNeumann, _) => von_neumann_numeric(&reduced)?,
                (EntropyKind::Renyi, a) => renyi_numeric(&reduced, a)?,
                (EntropyKind::Tsallis, q) => tsallis_numeric(&reduced, q)?,
            };
            EntropyResult { kind: closed.kind, ..r }
        }
    };
    let json = serde_json::to_string(&result).map_err(|e| Error::Consistency(e.to_string()))?;
    writeln!(stdout, "{json}").map_err(io_err)?;
    Ok(EXIT_OK)
}

fn io_err(e: std::io::Error) -> Error {
    Error::Io(e.to_string())
}

fn cmd_spectrum(args: &SpectrumArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    if args.i_max > MAX_INDEX || args.j_max > MAX_INDEX {
        return Err(Error::OutOfRange(format!(
            "i-max and j-max must be <= {MAX_INDEX}, got {} and {}",
            args.i_max, args.j_max
        )));
    }
    let p = params_checked(&args.params, stderr)?;
    let scale = match args.units {
        Units::Natural => 1.0 / (p.hbar * p.omega),
        Units::Si => 1.0,
    };
    let mut rows = Vec::new();
    for i in 0..=args.i_max {
        for j in 0..=args.j_max {
            rows.push((i, j, energy(i, j, &p)? * scale));
        }
    }
    if args.sort {
        rows.sort_by(|a, b| a.2.total_cmp(&b.2).then((a.0, a.1).cmp(&(b.0, b.1))));
    }
    let mut out = String::from("i,j,energy\n");
    for (i, j, e) in rows {
        out.push_str(&format!("{i},{j},{}\n", format_number(e)));
    }
    stdout.write_all(out.as_bytes()).map_err(io_err)?;
    Ok(EXIT_OK)
}

fn cmd_figure(args: &FigureArgs, stdout: &mut dyn Write) -> Result<i32> {
    let mut spec = FigureSpec::default_for(args.figure)?;
    if let Some(g) = args.grid {
        spec = spec.with_grid(g)?;
    }
    let csv = generate(&spec)?;
    match &args.out {
        Some(path) => std::fs::write(path, csv).map_err(io_err)?,
        None => stdout.write_all(csv.as_bytes()).map_err(io_err)?,
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    let p = params_checked(&args.params, stderr)?;
    let report = run_verify(
        &p,
        VerifyOptions {
            perturb_energy: args.perturb_energy,
        },
    )?;
    let json = serde_json::to_string_pretty(&report).map_err(|e| Error::Consistency(e.to_string()))?;
    writeln!(stdout, "{json}").map_err(io_err)?;
    Ok(if report.passed { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

/// Runs a parsed command, writing errors to `stderr`; returns the exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::Entropy(a) => cmd_entropy(a, stdout, stderr),
        Command::Spectrum(a) => cmd_spectrum(a, stdout, stderr),
        Command::Figure(a) => cmd_figure(a, stdout),
        Command::Verify(a) => cmd_verify(a, stdout, stderr),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            exit_code(&e)
        }
    }
}

/// Parses `argv` and runs it. Usage errors exit with 3; `--help` and
/// `--version` exit with 0.
pub fn run_from<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => execute(&cli, stdout, stderr),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_UNSUPPORTED } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                stderr.write_all(text.as_bytes())
            } else {
                stdout.write_all(text.as_bytes())
            };
            code
        }
    }
}
