use std::f64::consts::PI;
use std::path::Path;

use iontrap::coupling::LambDicke;
use iontrap::dynamics::{evolve, evolve_tracked, leakage, Method};
use iontrap::gates::{
    project_and_compare_with, seq_cn_cb, seq_cn_ion_ion, seq_cz_cb, seq_cz_cb_two_pulse, seq_cz_ion_ion,
    seq_hadamard, GateSpec, PulseProgram,
};
use iontrap::matching::{
    reference_rows, solve_carrier_durations, solve_ion_ion_durations, solve_target_sandwich, PhaseFamily,
    SidebandMatch,
};
use iontrap::physical::PhysicalRates;
use iontrap::program::{parse_program, DurationUnit, PulseProgramFile};
use iontrap::register::{PulseSpec, RegisterConfig, RegisterState, Spin};
use num_complex::Complex64;

use crate::report::ReportRecord;
use crate::{GateArgs, GateKind};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Domain(#[from] iontrap::error::Error),
    #[error(transparent)]
    Parse(#[from] iontrap::program::ParseError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
}

/// Records to print and whether verification held.
pub struct Outcome {
    pub records: Vec<ReportRecord>,
    pub ok: bool,
}

impl Outcome {
    fn ok(records: Vec<ReportRecord>) -> Self {
        Self { records, ok: true }
    }
}

type CliResult<T> = Result<T, CliError>;

pub fn solve(p: u32, q: u32, carrier: Option<(u32, u32)>, family: PhaseFamily) -> CliResult<Outcome> {
    let m = SidebandMatch::solve(p, q)?;
    let mut r = ReportRecord::new(format!("sideband match (p, q) = ({p}, {q})"));
    r.push("p", p).push("q", q).push("eta", m.eta.value()).push("tau2", m.tau2);
    if let Some((pp, qq)) = carrier {
        let c = solve_carrier_durations(m.eta, pp, qq, family)?;
        r.push("pp", pp)
            .push("qq", qq)
            .push("family", family.label())
            .push("tau1", c.tau1)
            .push("tau3", c.tau3);
    }
    Ok(Outcome::ok(vec![r]))
}

pub fn table() -> CliResult<Outcome> {
    let mut records = Vec::new();
    for row in reference_rows() {
        let (p, q, pp, qq) = row.branch();
        let m = SidebandMatch::solve(p, q)?;
        let c = solve_carrier_durations(m.eta, pp, qq, PhaseFamily::HalfPi)?;
        let mut r = ReportRecord::new(format!("({p}, {q}, {pp}, {qq})"));
        r.push("p", p)
            .push("q", q)
            .push("eta", m.eta.value())
            .push("tau2", m.tau2)
            .push("pp", pp)
            .push("qq", qq)
            .push("tau1", c.tau1)
            .push("tau3", c.tau3)
            .push("printed_eta", row.printed_eta)
            .push("printed_tau2", row.printed_sideband.2)
            .push("printed_tau1", row.printed_carrier.2)
            .push("printed_tau3", row.printed_carrier.3)
            .push("printed_cos01", row.check.cos01)
            .push("printed_cos12", row.check.cos12)
            .push("status", if row.check.consistent { "ok" } else { "suspect" });
        records.push(r);
    }
    Ok(Outcome::ok(records))
}

/// Fixed-width rendering of the table rows, four decimals like the
/// published table.
pub fn table_text(records: &[ReportRecord]) -> String {
    let num = |r: &ReportRecord, k: &str| match r.get(k) {
        Some(crate::report::Value::Num(x)) => *x,
        _ => f64::NAN,
    };
    let int = |r: &ReportRecord, k: &str| r.get(k).map(|v| v.render()).unwrap_or_default();
    let mut out = format!(
        "{:>3} {:>3} {:>8} {:>9} {:>3} {:>3} {:>9} {:>9}  {:>13}  {:>13}  status\n",
        "p", "q", "eta", "t2/pi", "p'", "q'", "t1/pi", "t3/pi", "printed t2/pi", "printed cos12"
    );
    for r in records {
        out += &format!(
            "{:>3} {:>3} {:>8.4} {:>9.4} {:>3} {:>3} {:>9.4} {:>9.4}  {:>13.4}  {:>13.4}  {}\n",
            int(r, "p"),
            int(r, "q"),
            num(r, "eta"),
            num(r, "tau2"),
            int(r, "pp"),
            int(r, "qq"),
            num(r, "tau1"),
            num(r, "tau3"),
            num(r, "printed_tau2"),
            num(r, "printed_cos12"),
            int(r, "status"),
        );
    }
    out
}

fn round4(x: f64) -> f64 {
    (x * 1e4).round() / 1e4
}

struct Built {
    program: PulseProgram,
    gate: Option<GateSpec>,
    params: Vec<(&'static str, crate::report::Value)>,
}

fn default_ions(kind: GateKind) -> usize {
    match kind {
        GateKind::CzIi | GateKind::CnIi => 2,
        GateKind::Uniform => 3,
        _ => 1,
    }
}

fn build(args: &GateArgs) -> CliResult<Built> {
    let (p, q) = args.sideband();
    let m = SidebandMatch::solve(p, q)?;
    let n_ions = args.ions.unwrap_or_else(|| default_ions(args.gate));
    let config = RegisterConfig::dimensionless(n_ions, m.eta)?.with_cutoff(args.cutoff)?;
    let mut params: Vec<(&'static str, crate::report::Value)> =
        vec![("p", p.into()), ("q", q.into()), ("eta", m.eta.value().into()), ("ions", n_ions.into())];
    let (program, gate) = match args.gate {
        GateKind::CzCb => {
            params.push(("tau2", m.tau2.into()));
            (seq_cz_cb(&config, &m, 0, args.phase)?, Some(GateSpec::cz_cb(0)))
        }
        GateKind::CzCb2 => {
            let (prog, tp) = seq_cz_cb_two_pulse(&config, 0, args.max_index)?;
            params.push(("pp", tp.p_prime.into()));
            params.push(("r", tp.r.into()));
            params.push(("tau", tp.tau.into()));
            (prog, Some(GateSpec::cz_cb(0)))
        }
        GateKind::CnCb => {
            let c = solve_carrier_durations(m.eta, args.pp, args.qq, args.family)?;
            params.push(("pp", args.pp.into()));
            params.push(("qq", args.qq.into()));
            params.push(("family", args.family.label().into()));
            (seq_cn_cb(&config, &m, &c, 0)?, Some(GateSpec::cn_cb(0)))
        }
        GateKind::CzIi | GateKind::CnIi => {
            if n_ions < 2 {
                return Err(CliError::Usage("ion-ion gates need --ions >= 2".into()));
            }
            let ii = solve_ion_ion_durations(m.eta, args.kk, args.kkp)?;
            params.push(("kk", args.kk.into()));
            params.push(("kkp", args.kkp.into()));
            if args.gate == GateKind::CzIi {
                (seq_cz_ion_ion(&config, &m, &ii, 0, 1, args.phase)?, Some(GateSpec::cz_ii(0, 1)))
            } else {
                let [sp, spp] = [args.sandwich[0], args.sandwich[1]];
                let s = solve_target_sandwich(m.eta, sp, spp, args.family)?;
                params.push(("sandwich_p", sp.into()));
                params.push(("sandwich_pp", spp.into()));
                params.push(("family", args.family.label().into()));
                (seq_cn_ion_ion(&config, &m, &ii, &s, 0, 1)?, Some(GateSpec::cn_ii(0, 1)))
            }
        }
        GateKind::Hadamard => {
            params.push(("family", args.family.label().into()));
            (seq_hadamard(&config, 0, args.family)?, Some(GateSpec::hadamard(0, args.family)))
        }
        GateKind::Uniform => {
            params.push(("family", args.family.label().into()));
            let pulses = (0..n_ions)
                .map(|ion| {
                    PulseSpec::carrier(
                        ion,
                        args.family.phase(),
                        iontrap::gates::quarter_rotation_duration(&config),
                    )
                })
                .collect();
            (PulseProgram::new(config, pulses)?, None)
        }
    };
    let program = if args.use_table_digits {
        let pulses = program
            .pulses()
            .iter()
            .map(|p| PulseSpec { duration: round4(p.duration / PI) * PI, ..*p })
            .collect();
        PulseProgram::new(*program.config(), pulses)?
    } else {
        program
    };
    Ok(Built { program, gate, params })
}

fn push_durations(r: &mut ReportRecord, program: &PulseProgram, rates: Option<PhysicalRates>) {
    for (i, p) in program.pulses().iter().enumerate() {
        r.push(format!("pulse{i}_k"), p.sideband.0);
        r.push(format!("pulse{i}_tau"), p.duration / PI);
    }
    if let Some(rates) = rates {
        let secs = rates.program_pulse_seconds(program);
        for (i, s) in secs.iter().enumerate() {
            r.push(format!("pulse{i}_seconds"), *s);
        }
        r.push("total_seconds", secs.iter().fold(0.0, |a, s| a + s));
    }
}

/// Largest amplitude error of the uniform state against `±2^{-N/2}`.
fn uniform_deviation(state: &RegisterState, config: &RegisterConfig, family: PhaseFamily) -> f64 {
    let n = config.n_ions;
    let mag = 2f64.powf(-(n as f64) / 2.0);
    (0..config.dim())
        .map(|i| {
            let want = if i < config.spin_dim() {
                let sign = match family {
                    PhaseFamily::HalfPi if (i.count_ones() % 2) == 1 => -1.0,
                    _ => 1.0,
                };
                Complex64::new(sign * mag, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            (state.amplitudes()[i] - want).norm()
        })
        .fold(0.0, f64::max)
}

pub fn verify(args: &GateArgs, threshold: f64, rates: Option<PhysicalRates>) -> CliResult<Outcome> {
    let built = build(args)?;
    let mut r = ReportRecord::new(format!("verify {}", args.gate.name()));
    r.push("gate", args.gate.name());
    for (k, v) in built.params {
        r.push(k, v);
    }
    r.push("table_digits", args.use_table_digits);

    let ok = match &built.gate {
        Some(gate) => {
            let closed = project_and_compare_with(&built.program, gate, Method::ClosedForm)?;
            let oracle = project_and_compare_with(&built.program, gate, Method::Oracle)?;
            r.push("deviation", closed.deviation.max(oracle.deviation))
                .push("deviation_closed_form", closed.deviation)
                .push("deviation_oracle", oracle.deviation)
                .push("phase_deviation", closed.phase_deviation)
                .push("global_phase", closed.global_phase)
                .push("trace_fidelity", closed.trace_fidelity)
                .push("leakage", closed.leakage)
                .push("bus_restored", closed.bus_restored);
            closed.deviation.max(oracle.deviation) <= threshold
        }
        None => {
            let config = built.program.config();
            let ground = RegisterState::ground(config);
            let closed = built.program.run(&ground, Method::ClosedForm)?;
            let oracle = built.program.run(&ground, Method::Oracle)?;
            let dc = uniform_deviation(&closed, config, args.family);
            let dor = uniform_deviation(&oracle, config, args.family);
            let leak = leakage(&closed, 0);
            r.push("deviation", dc.max(dor))
                .push("deviation_closed_form", dc)
                .push("deviation_oracle", dor)
                .push("leakage", leak)
                .push("bus_restored", leak <= iontrap::gates::BUS_TOL);
            dc.max(dor) <= threshold
        }
    };
    r.push("threshold", threshold).push("pass", ok);
    push_durations(&mut r, &built.program, rates);
    Ok(Outcome { records: vec![r], ok })
}

fn read(path: &Path) -> CliResult<PulseProgramFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    Ok(parse_program(&text)?)
}

fn parse_spins(s: &str, n: usize) -> CliResult<Vec<Spin>> {
    let spins: Vec<Spin> = s
        .chars()
        .map(|c| match c {
            'g' => Ok(Spin::Ground),
            'e' => Ok(Spin::Excited),
            other => Err(CliError::Usage(format!("spin label {other:?} is not g or e"))),
        })
        .collect::<CliResult<_>>()?;
    if spins.len() != n {
        return Err(CliError::Usage(format!("--spins needs {n} labels, got {}", spins.len())));
    }
    Ok(spins)
}

fn spin_label(config: &RegisterConfig, index: usize) -> String {
    (0..config.n_ions)
        .map(|ion| match config.spin_of(index, ion) {
            Spin::Ground => 'g',
            Spin::Excited => 'e',
        })
        .collect()
}

pub fn simulate(
    path: &Path,
    method: Method,
    phonon: usize,
    spins: Option<&str>,
    cutoff_amp: f64,
) -> CliResult<Outcome> {
    let file = read(path)?;
    let config = file.config()?;
    let spins = match spins {
        Some(s) => parse_spins(s, config.n_ions)?,
        None => vec![Spin::Ground; config.n_ions],
    };
    let mut state = RegisterState::basis(&config, phonon, &spins)?;
    let mut touched = false;
    for pulse in file.pulse_specs() {
        state = match method {
            Method::ClosedForm => {
                let (next, t) = evolve_tracked(&state, &config, &pulse)?;
                touched |= t;
                next
            }
            Method::Oracle => evolve(&state, &config, &pulse, method)?,
        };
    }

    let mut r = ReportRecord::new(format!("simulate {}", path.display()));
    let total = file.pulse_specs().iter().fold(0.0, |acc, p| acc + p.duration);
    r.push("ions", config.n_ions)
        .push("eta", config.eta.value())
        .push("cutoff", config.fock_cutoff)
        .push("pulses", file.pulses.len())
        .push("method", if method == Method::Oracle { "oracle" } else { "closed_form" })
        .push("total_tau", total / PI);
    if let Some(w) = file.header.omega_rad_s {
        r.push("total_seconds", total / w);
    }
    r.push("norm", state.norm())
        .push("leakage_above_1", leakage(&state, 1))
        .push("truncation_touched", touched);
    for (i, a) in state.amplitudes().iter().enumerate() {
        if a.norm() > cutoff_amp {
            let key = format!("amp_{}_{}", config.phonon_of(i), spin_label(&config, i));
            r.push(key, format!("{:?}{:+?}i", a.re, a.im));
        }
    }
    Ok(Outcome::ok(vec![r]))
}

pub fn physical(rates: PhysicalRates, gate: Option<&GateArgs>, program: Option<&Path>) -> CliResult<Outcome> {
    let mut r = ReportRecord::new("physical durations");
    r.push("resonant_rad_s", rates.resonant).push("sideband_rad_s", rates.sideband);
    if let Some(path) = program {
        let file = read(path)?;
        let eta = LambDicke::new(file.header.eta)?.value();
        r.push("program", path.display().to_string()).push("pulses", file.pulses.len());
        let mut total = 0.0;
        for (i, p) in file.pulses.iter().enumerate() {
            let s = match p.unit {
                DurationUnit::Seconds => p.duration,
                DurationUnit::PerOmega => rates.pulse_seconds(p.k as usize, p.duration, eta),
            };
            r.push(format!("pulse{i}_seconds"), s);
            total += s;
        }
        r.push("total_seconds", total);
    } else if let Some(args) = gate {
        let built = build(args)?;
        r.push("gate", args.gate.name());
        for (k, v) in built.params {
            r.push(k, v);
        }
        push_durations(&mut r, &built.program, Some(rates));
    } else {
        let best = rates.shortest_cn_cb()?;
        let (p, q, pp, qq) = best.branch;
        r.push("gate", "cn_cb")
            .push("search", "shortest_consistent_row")
            .push("p", p)
            .push("q", q)
            .push("pp", pp)
            .push("qq", qq)
            .push("total_seconds", best.seconds);
    }
    Ok(Outcome::ok(vec![r]))
}
