use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use iontrap::dynamics::Method;
use iontrap::matching::PhaseFamily;
use iontrap::physical::PhysicalRates;

mod commands;
mod report;

use commands::{CliError, Outcome};
use report::{emit, Format};

/// Exact pulse sequences for trapped-ion gates beyond the Lamb-Dicke limit.
#[derive(Debug, Parser)]
#[command(name = "iontrap", version)]
struct Cli {
    /// Output format; numbers are rendered identically in both.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the matching conditions for one branch.
    Solve {
        #[arg(long, required_unless_present = "table")]
        p: Option<u32>,
        #[arg(long, required_unless_present = "table")]
        q: Option<u32>,
        /// Carrier branch p′ (needs --qq).
        #[arg(long, requires = "qq")]
        pp: Option<u32>,
        /// Carrier branch q′ (needs --pp).
        #[arg(long, requires = "pp")]
        qq: Option<u32>,
        #[arg(long, default_value = "pi/2", value_parser = parse_family)]
        family: PhaseFamily,
        /// Regenerate the reference table instead.
        #[arg(long)]
        table: bool,
    },
    /// Build a gate sequence and compare it with the ideal gate.
    Verify {
        #[command(flatten)]
        gate: GateArgs,
        /// Largest accepted deviation.
        #[arg(long, default_value_t = 1e-6)]
        threshold: f64,
        #[command(flatten)]
        rates: RateArgs,
    },
    /// Run a pulse program file from a basis state.
    Simulate {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = MethodArg::ClosedForm)]
        method: MethodArg,
        /// Initial phonon number.
        #[arg(long, default_value_t = 0)]
        phonon: usize,
        /// Initial spins, one `g` or `e` per ion (default all `g`).
        #[arg(long)]
        spins: Option<String>,
        /// Amplitudes at or below this magnitude are not listed.
        #[arg(long, default_value_t = 1e-12)]
        amplitude_floor: f64,
    },
    /// Regenerate the reference parameter table and flag suspect rows.
    Table,
    /// Convert pulse durations to seconds.
    Physical {
        #[command(flatten)]
        rates: RequiredRates,
        /// Pulse program file to convert.
        #[arg(long, conflicts_with = "gate")]
        program: Option<PathBuf>,
        /// Gate to convert; without it and without --program, reports the
        /// shortest ion-bus CN among consistent reference rows.
        #[arg(long, value_enum)]
        gate: Option<GateKind>,
        #[command(flatten)]
        params: GateParams,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GateKind {
    #[value(name = "cz_cb")]
    CzCb,
    #[value(name = "cz_cb2")]
    CzCb2,
    #[value(name = "cn_cb")]
    CnCb,
    #[value(name = "cz_ii")]
    CzIi,
    #[value(name = "cn_ii")]
    CnIi,
    #[value(name = "hadamard")]
    Hadamard,
    #[value(name = "uniform")]
    Uniform,
}

impl GateKind {
    fn name(self) -> &'static str {
        match self {
            GateKind::CzCb => "cz_cb",
            GateKind::CzCb2 => "cz_cb2",
            GateKind::CnCb => "cn_cb",
            GateKind::CzIi => "cz_ii",
            GateKind::CnIi => "cn_ii",
            GateKind::Hadamard => "hadamard",
            GateKind::Uniform => "uniform",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    ClosedForm,
    Oracle,
}

#[derive(Debug, Clone, Args)]
struct GateParams {
    /// Sideband branch p (sets η).
    #[arg(long, default_value_t = 2)]
    p: u32,
    /// Sideband branch q (sets η).
    #[arg(long, default_value_t = 2)]
    q: u32,
    /// Take η from the branch (p, q); same as --p P --q Q.
    #[arg(long, num_args = 2, value_names = ["P", "Q"])]
    eta_from: Option<Vec<u32>>,
    /// Carrier branch p′.
    #[arg(long, default_value_t = 5)]
    pp: u32,
    /// Carrier branch q′.
    #[arg(long, default_value_t = 1)]
    qq: u32,
    #[arg(long, default_value = "pi/2", value_parser = parse_family)]
    family: PhaseFamily,
    /// Ion-ion branch k.
    #[arg(long, default_value_t = 1)]
    kk: u32,
    /// Ion-ion branch k′.
    #[arg(long, default_value_t = 1)]
    kkp: u32,
    /// Target-sandwich branch (p, p′).
    #[arg(long, num_args = 2, value_names = ["P", "PP"], default_values_t = [1, 1])]
    sandwich: Vec<u32>,
    /// Phase of the red-sideband pulses where it is free.
    #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2, allow_hyphen_values = true)]
    phase: f64,
    /// Largest p′ searched for the two-pulse CZ.
    #[arg(long, default_value_t = 20)]
    max_index: u32,
    /// Ion count (default: 1, 2 for ion-ion gates, 3 for uniform).
    #[arg(long)]
    ions: Option<usize>,
    #[arg(long, default_value_t = 4)]
    cutoff: usize,
    /// Round every Ωt/π to four decimals before simulating.
    #[arg(long)]
    use_table_digits: bool,
}

#[derive(Debug, Clone, Args)]
struct GateArgs {
    #[arg(value_enum)]
    gate: GateKind,
    #[command(flatten)]
    params: GateParams,
}

impl std::ops::Deref for GateArgs {
    type Target = GateParams;

    fn deref(&self) -> &GateParams {
        &self.params
    }
}

impl GateParams {
    fn sideband(&self) -> (u32, u32) {
        match self.eta_from.as_deref() {
            Some(&[p, q]) => (p, q),
            _ => (self.p, self.q),
        }
    }
}

/// Optional laboratory rates for reporting seconds.
#[derive(Debug, Clone, Args)]
struct RateArgs {
    /// Resonant Rabi frequency Ω/2π in Hz.
    #[arg(long, requires = "sideband_hz")]
    resonant_hz: Option<f64>,
    /// Sideband Rabi frequency ηΩ/2π in Hz.
    #[arg(long, requires = "resonant_hz")]
    sideband_hz: Option<f64>,
}

#[derive(Debug, Clone, Args)]
struct RequiredRates {
    /// Resonant Rabi frequency Ω/2π in Hz.
    #[arg(long)]
    resonant_hz: f64,
    /// Sideband Rabi frequency ηΩ/2π in Hz.
    #[arg(long)]
    sideband_hz: f64,
}

fn parse_family(s: &str) -> Result<PhaseFamily, String> {
    s.parse()
}

/// Custom text layout for commands whose records read better as a table.
type TextRenderer = fn(&[report::ReportRecord]) -> String;

fn run(cli: Cli) -> Result<(String, bool), CliError> {
    let (outcome, text_override): (Outcome, Option<TextRenderer>) = match cli.command {
        Command::Solve { table: true, .. } | Command::Table => {
            (commands::table()?, Some(commands::table_text))
        }
        Command::Solve { p, q, pp, qq, family, .. } => {
            let (Some(p), Some(q)) = (p, q) else {
                return Err(CliError::Usage("--p and --q are required".into()));
            };
            (commands::solve(p, q, pp.zip(qq), family)?, None)
        }
        Command::Verify { gate, threshold, rates } => {
            let rates = match (rates.resonant_hz, rates.sideband_hz) {
                (Some(r), Some(s)) => Some(PhysicalRates::from_hz(r, s)?),
                _ => None,
            };
            (commands::verify(&gate, threshold, rates)?, None)
        }
        Command::Simulate { file, method, phonon, spins, amplitude_floor } => {
            let method = match method {
                MethodArg::ClosedForm => Method::ClosedForm,
                MethodArg::Oracle => Method::Oracle,
            };
            (commands::simulate(&file, method, phonon, spins.as_deref(), amplitude_floor)?, None)
        }
        Command::Physical { rates, program, gate, params } => {
            let rates = PhysicalRates::from_hz(rates.resonant_hz, rates.sideband_hz)?;
            let gate = gate.map(|gate| GateArgs { gate, params });
            (commands::physical(rates, gate.as_ref(), program.as_deref())?, None)
        }
    };
    let text = match (cli.format, text_override) {
        (Format::Text, Some(render)) => render(&outcome.records),
        _ => emit(&outcome.records, cli.format),
    };
    Ok((text, outcome.ok))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok((text, ok)) => {
            print!("{text}");
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
