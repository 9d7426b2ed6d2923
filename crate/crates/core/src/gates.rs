//! Pulse sequences for the gate set and their verification against ideal
//! matrices.
//!
//! A [`GateSpec`] pairs an explicit ideal matrix with the basis states it is
//! defined on. [`project_and_compare`] composes a program's unitary, reads
//! off that block and compares entry by entry. No global phase is removed
//! from the primary deviation.
//!
//! Subspace orderings:
//!
//! * ion-bus gates: `|0g>, |0e>, |1g>, |1e>` (bus phonon, addressed ion);
//! * ion-ion gates: `|g_i g_j>, |g_i e_j>, |e_i g_j>, |e_i e_j>` with the bus
//!   in `|0>` (`i` is the control);
//! * single-ion rotations: `|g>, |e>` with the bus in `|0>`.
//!
//! Ions outside the subspace are held in `|g>`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::coupling::{rabi_frequency, LambDicke, SidebandIndex};
use crate::dynamics::{evolve, sequence_unitary, Method};
use crate::error::{Error, Result};
use crate::matching::{
    solve_two_pulse, CarrierMatch, IonIonMatch, PhaseFamily, SidebandMatch, TargetSandwich, TwoPulseMatch,
};
use crate::operator::{max_abs_diff, OperatorMatrix};
use crate::register::{PulseSpec, RegisterConfig, RegisterState, Spin};

/// Weight above the reference phonon level tolerated by `bus_restored`.
pub const BUS_TOL: f64 = 1e-9;

/// Ordered pulses on a fixed register.
#[derive(Debug, Clone, PartialEq)]
pub struct PulseProgram {
    config: RegisterConfig,
    pulses: Vec<PulseSpec>,
}

impl PulseProgram {
    pub fn new(config: RegisterConfig, pulses: Vec<PulseSpec>) -> Result<Self> {
        if pulses.is_empty() {
            return Err(Error::InvalidPulse("a program needs at least one pulse".into()));
        }
        for p in &pulses {
            config.check_pulse(p)?;
        }
        Ok(Self { config, pulses })
    }

    pub fn config(&self) -> &RegisterConfig {
        &self.config
    }

    pub fn pulses(&self) -> &[PulseSpec] {
        &self.pulses
    }

    pub fn len(&self) -> usize {
        self.pulses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pulses.is_empty()
    }

    /// Appends `next`'s pulses after this program's.
    pub fn followed_by(mut self, next: &PulseProgram) -> Result<Self> {
        if next.config != self.config {
            return Err(Error::InvalidRegister("programs use different registers".into()));
        }
        self.pulses.extend_from_slice(&next.pulses);
        Ok(self)
    }

    pub fn unitary(&self, method: Method) -> Result<OperatorMatrix> {
        sequence_unitary(&self.config, &self.pulses, method)
    }

    pub fn run(&self, state: &RegisterState, method: Method) -> Result<RegisterState> {
        self.pulses.iter().try_fold(state.clone(), |s, p| evolve(&s, &self.config, p, method))
    }
}

/// Labeled computational subspace a gate acts on.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subspace {
    /// Bus qubit `{|0>, |1>}` and one ion.
    IonBus { ion: usize },
    /// Two ions with the bus in `|0>`.
    IonPair { control: usize, target: usize },
    /// One ion with the bus in `|0>`.
    Ion { ion: usize },
}

impl Subspace {
    /// Highest phonon number inside the subspace.
    pub fn phonon_ceiling(self) -> usize {
        match self {
            Subspace::IonBus { .. } => 1,
            _ => 0,
        }
    }

    pub fn dim(self) -> usize {
        match self {
            Subspace::Ion { .. } => 2,
            _ => 4,
        }
    }

    /// Register basis indices in the labeled order.
    pub fn indices(self, config: &RegisterConfig) -> Result<Vec<usize>> {
        let check = |ion: usize| {
            if ion < config.n_ions {
                Ok(())
            } else {
                Err(Error::InvalidRegister(format!(
                    "subspace ion {ion} out of range for {} ions",
                    config.n_ions
                )))
            }
        };
        let mut spins = vec![Spin::Ground; config.n_ions];
        let mut out = Vec::with_capacity(self.dim());
        match self {
            Subspace::IonBus { ion } => {
                check(ion)?;
                for m in 0..2 {
                    for s in [Spin::Ground, Spin::Excited] {
                        spins[ion] = s;
                        out.push(config.index(m, &spins)?);
                    }
                }
            }
            Subspace::IonPair { control, target } => {
                check(control)?;
                check(target)?;
                if control == target {
                    return Err(Error::InvalidPulse("control and target must differ".into()));
                }
                for sc in [Spin::Ground, Spin::Excited] {
                    for st in [Spin::Ground, Spin::Excited] {
                        spins[control] = sc;
                        spins[target] = st;
                        out.push(config.index(0, &spins)?);
                    }
                }
            }
            Subspace::Ion { ion } => {
                check(ion)?;
                for s in [Spin::Ground, Spin::Excited] {
                    spins[ion] = s;
                    out.push(config.index(0, &spins)?);
                }
            }
        }
        Ok(out)
    }
}

/// An ideal gate on a labeled subspace.
#[derive(Debug, Clone, PartialEq)]
pub struct GateSpec {
    pub name: &'static str,
    pub ideal: DMatrix<Complex64>,
    pub subspace: Subspace,
}

fn real_matrix<const N: usize>(rows: [[f64; N]; N]) -> DMatrix<Complex64> {
    DMatrix::from_fn(N, N, |r, c| Complex64::new(rows[r][c], 0.0))
}

impl GateSpec {
    /// `diag(1, 1, 1, −1)` on `|0g>, |0e>, |1g>, |1e>`.
    pub fn cz_cb(ion: usize) -> Self {
        Self {
            name: "cz_cb",
            ideal: real_matrix([
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, -1.0],
            ]),
            subspace: Subspace::IonBus { ion },
        }
    }

    /// Bus-controlled NOT on the ion.
    pub fn cn_cb(ion: usize) -> Self {
        Self {
            name: "cn_cb",
            ideal: real_matrix([
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, 0.0, 1.0, 0.0],
            ]),
            subspace: Subspace::IonBus { ion },
        }
    }

    pub fn cz_ii(control: usize, target: usize) -> Self {
        Self {
            name: "cz_ii",
            ideal: real_matrix([
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 1.0, 0.0],
                [0.0, 0.0, 0.0, -1.0],
            ]),
            subspace: Subspace::IonPair { control, target },
        }
    }

    pub fn cn_ii(control: usize, target: usize) -> Self {
        Self {
            name: "cn_ii",
            ideal: real_matrix([
                [1.0, 0.0, 0.0, 0.0],
                [0.0, 1.0, 0.0, 0.0],
                [0.0, 0.0, 0.0, 1.0],
                [0.0, 0.0, 1.0, 0.0],
            ]),
            subspace: Subspace::IonPair { control, target },
        }
    }

    /// `(1/√2)[[1, 1], [−1, 1]]` for π/2, `(1/√2)[[1, −1], [1, 1]]` for 3π/2.
    pub fn hadamard(ion: usize, family: PhaseFamily) -> Self {
        let h = FRAC_1_SQRT_2;
        let ideal = match family {
            PhaseFamily::HalfPi => real_matrix([[h, h], [-h, h]]),
            PhaseFamily::ThreeHalvesPi => real_matrix([[h, -h], [h, h]]),
        };
        Self { name: "hadamard", ideal, subspace: Subspace::Ion { ion } }
    }
}

/// Outcome of comparing a program with an ideal gate.
#[derive(Debug, Clone, PartialEq)]
pub struct GateReport {
    /// Projected block of the composed unitary.
    pub achieved: DMatrix<Complex64>,
    /// `max |achieved − ideal|`, no phase freedom.
    pub deviation: f64,
    /// Phase of `tr(ideal† achieved)`.
    pub global_phase: f64,
    /// `max |achieved − e^{iθ} ideal|` at that phase.
    pub phase_deviation: f64,
    /// `|tr(ideal† achieved)| / d`
    pub trace_fidelity: f64,
    /// Largest weight any subspace input leaves outside the subspace.
    pub leakage: f64,
    /// Every input ends with weight ≤ [`BUS_TOL`] above the subspace's
    /// phonon ceiling.
    pub bus_restored: bool,
}

pub fn project_and_compare(program: &PulseProgram, gate: &GateSpec) -> Result<GateReport> {
    project_and_compare_with(program, gate, Method::ClosedForm)
}

pub fn project_and_compare_with(
    program: &PulseProgram,
    gate: &GateSpec,
    method: Method,
) -> Result<GateReport> {
    let config = program.config();
    let idx = gate.subspace.indices(config)?;
    if idx.len() != gate.ideal.nrows() || !gate.ideal.is_square() {
        return Err(Error::DimensionMismatch { expected: idx.len(), got: gate.ideal.nrows() });
    }
    let u = program.unitary(method)?;
    let d = idx.len();
    let achieved = DMatrix::from_fn(d, d, |r, c| u.entry(idx[r], idx[c]));

    let deviation = max_abs_diff(&achieved, &gate.ideal);
    let overlap = (gate.ideal.adjoint() * &achieved).trace();
    let global_phase = overlap.arg();
    let phased = gate.ideal.map(|x| x * Complex64::from_polar(1.0, global_phase));
    let phase_deviation = max_abs_diff(&achieved, &phased);
    let trace_fidelity = overlap.norm() / d as f64;

    let ceiling = gate.subspace.phonon_ceiling();
    let mut leakage: f64 = 0.0;
    let mut above: f64 = 0.0;
    for &col in &idx {
        let inside: f64 = idx.iter().map(|&r| u.entry(r, col).norm_sqr()).sum();
        leakage = leakage.max((1.0 - inside).max(0.0));
        let high: f64 = (0..config.dim())
            .filter(|&r| config.phonon_of(r) > ceiling)
            .map(|r| u.entry(r, col).norm_sqr())
            .sum();
        above = above.max(high);
    }

    Ok(GateReport {
        achieved,
        deviation,
        global_phase,
        phase_deviation,
        trace_fidelity,
        leakage,
        bus_restored: above <= BUS_TOL,
    })
}

fn check_eta(config: &RegisterConfig, eta: LambDicke, what: &str) -> Result<()> {
    if (config.eta.value() - eta.value()).abs() > 1e-12 {
        return Err(Error::Infeasible(format!(
            "{what} was solved for eta = {} but the register has eta = {}",
            eta.value(),
            config.eta.value()
        )));
    }
    Ok(())
}

/// `Ωt` of the quarter rotation `Ω_{0,0}t = π/4`.
pub fn quarter_rotation_duration(config: &RegisterConfig) -> f64 {
    let r00 = rabi_frequency(0, SidebandIndex::CARRIER, config.eta, config.omega)
        .expect("ground carrier is in range");
    FRAC_PI_4 * config.omega.value() / r00
}

/// One resonant pulse; `duration` is `Ωt`.
pub fn seq_rotation(
    config: &RegisterConfig,
    target: usize,
    phase: f64,
    duration: f64,
) -> Result<PulseProgram> {
    PulseProgram::new(*config, vec![PulseSpec::carrier(target, phase, duration)])
}

/// Walsh-Hadamard-type rotation on the bus-vacuum block.
pub fn seq_hadamard(config: &RegisterConfig, target: usize, family: PhaseFamily) -> Result<PulseProgram> {
    seq_rotation(config, target, family.phase(), quarter_rotation_duration(config))
}

/// Ion-bus CZ: one red-sideband pulse of `Ωt₂`; the phase is free.
pub fn seq_cz_cb(
    config: &RegisterConfig,
    m: &SidebandMatch,
    target: usize,
    phase: f64,
) -> Result<PulseProgram> {
    check_eta(config, m.eta, "sideband match")?;
    PulseProgram::new(*config, vec![PulseSpec::red(target, phase, m.tau2 * PI)])
}

/// Ion-bus CZ from two equal red-sideband pulses, `|1e> → −|2g> → −|1e>`.
pub fn seq_cz_cb_two_pulse(
    config: &RegisterConfig,
    target: usize,
    max_index: u32,
) -> Result<(PulseProgram, TwoPulseMatch)> {
    let m = solve_two_pulse(config.eta, max_index)?;
    let pulse = PulseSpec::red(target, FRAC_PI_2, m.tau * PI);
    Ok((PulseProgram::new(*config, vec![pulse, pulse])?, m))
}

/// Ion-bus CN with both resonant phases taken from the carrier family.
pub fn seq_cn_cb(
    config: &RegisterConfig,
    m: &SidebandMatch,
    carrier: &CarrierMatch,
    target: usize,
) -> Result<PulseProgram> {
    seq_cn_cb_with_phases(config, m, carrier, target, carrier.phase(), carrier.phase())
}

/// Resonant `t₁` (phase `phase1`), red `t₂`, resonant `t₃` (phase `phase3`).
/// Only `phase3 = phase1 (mod 2π)` yields CN.
pub fn seq_cn_cb_with_phases(
    config: &RegisterConfig,
    m: &SidebandMatch,
    carrier: &CarrierMatch,
    target: usize,
    phase1: f64,
    phase3: f64,
) -> Result<PulseProgram> {
    check_eta(config, m.eta, "sideband match")?;
    check_eta(config, carrier.eta, "carrier match")?;
    PulseProgram::new(
        *config,
        vec![
            PulseSpec::carrier(target, phase1, carrier.tau1 * PI),
            PulseSpec::red(target, FRAC_PI_2, m.tau2 * PI),
            PulseSpec::carrier(target, phase3, carrier.tau3 * PI),
        ],
    )
}

/// Ion-ion CZ: red pulses on control (`t′₁`), target (`t₂`), control (`t′₃`);
/// the two control pulses share `phase`.
pub fn seq_cz_ion_ion(
    config: &RegisterConfig,
    m: &SidebandMatch,
    ii: &IonIonMatch,
    control: usize,
    target: usize,
    phase: f64,
) -> Result<PulseProgram> {
    if control == target {
        return Err(Error::InvalidPulse("control and target must differ".into()));
    }
    check_eta(config, m.eta, "sideband match")?;
    check_eta(config, ii.eta, "ion-ion match")?;
    PulseProgram::new(
        *config,
        vec![
            PulseSpec::red(control, phase, ii.tau1 * PI),
            PulseSpec::red(target, phase, m.tau2 * PI),
            PulseSpec::red(control, phase, ii.tau3 * PI),
        ],
    )
}

/// Ion-ion CN: resonant `t″₁` on the target, the ion-ion CZ, resonant `t″₃`.
pub fn seq_cn_ion_ion(
    config: &RegisterConfig,
    m: &SidebandMatch,
    ii: &IonIonMatch,
    sandwich: &TargetSandwich,
    control: usize,
    target: usize,
) -> Result<PulseProgram> {
    check_eta(config, sandwich.eta, "target sandwich")?;
    let cz = seq_cz_ion_ion(config, m, ii, control, target, FRAC_PI_2)?;
    let mut pulses = Vec::with_capacity(5);
    pulses.push(PulseSpec::carrier(target, sandwich.phase(), sandwich.tau1 * PI));
    pulses.extend_from_slice(cz.pulses());
    pulses.push(PulseSpec::carrier(target, sandwich.phase(), sandwich.tau3 * PI));
    PulseProgram::new(*config, pulses)
}

/// Quarter rotation on every ion from `|0; g…g>`: `2^N` amplitudes of equal
/// magnitude and sign `±1`.
pub fn prepare_uniform(config: &RegisterConfig, family: PhaseFamily) -> Result<RegisterState> {
    let duration = quarter_rotation_duration(config);
    let pulses = (0..config.n_ions).map(|ion| PulseSpec::carrier(ion, family.phase(), duration)).collect();
    PulseProgram::new(*config, pulses)?.run(&RegisterState::ground(config), Method::ClosedForm)
}
