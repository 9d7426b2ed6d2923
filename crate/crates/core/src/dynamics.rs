//! Pulse propagators on the truncated phonon ⊗ spins space.
//!
//! Two independent routes are provided. [`pulse_propagator_closed_form`]
//! writes down the exact 2×2 rotations between `|m, e>` and `|m+k, g>` of the
//! addressed ion. [`pulse_propagator_oracle`] builds the interaction-picture
//! Hamiltonian and exponentiates it through a Hermitian eigendecomposition,
//! without using the block structure.
//!
//! Durations are the dimensionless `Ωt`. The Hamiltonian carries the
//! register's Ω, and both propagators evolve for the physical time `Ωt / Ω`,
//! so the rotation angles do not depend on the choice of Ω.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::coupling::rabi_frequency;
use crate::error::{Error, Result};
use crate::operator::{OperatorMatrix, OperatorRole};
use crate::register::{PulseSpec, RegisterConfig, RegisterState, Spin};

/// Which propagator [`evolve`] should apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    ClosedForm,
    Oracle,
}

/// Closed-form propagator plus the rows left as identity by the cutoff.
#[derive(Debug, Clone, PartialEq)]
pub struct Propagator {
    pub operator: OperatorMatrix,
    /// Basis indices `|m, e_target>` with `m + k > n_max`; their partner
    /// state lies above the cutoff, so they were kept as identity.
    pub truncated_rows: Vec<usize>,
}

impl Propagator {
    pub fn truncation_touched(&self) -> bool {
        !self.truncated_rows.is_empty()
    }
}

/// `i^n` for a possibly negative integer exponent.
fn i_pow(n: i64) -> Complex64 {
    match n.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

pub fn pulse_propagator_closed_form(config: &RegisterConfig, pulse: &PulseSpec) -> Result<Propagator> {
    config.check_pulse(pulse)?;
    let dim = config.dim();
    let k = pulse.sideband.order();
    let spin_dim = config.spin_dim();
    let mask = config.ion_mask(pulse.target);
    let t = pulse.duration / config.omega.value();

    // |m,g> -> ... + i^{k-1} e^{-iφ} sin |m-k,e>
    let lower = i_pow(k as i64 - 1) * Complex64::from_polar(1.0, -pulse.phase);
    // |m,e> -> ... - (-i)^{k-1} e^{iφ} sin |m+k,g>
    let upper = -i_pow(k as i64 - 1).conj() * Complex64::from_polar(1.0, pulse.phase);

    let mut u = DMatrix::<Complex64>::identity(dim, dim);
    let mut truncated_rows = Vec::new();
    for excited in (0..dim).filter(|&idx| idx & mask != 0) {
        let m = config.phonon_of(excited);
        if m + k > config.fock_cutoff {
            truncated_rows.push(excited);
            continue;
        }
        let ground = (excited & !mask) + k * spin_dim;
        let rate = rabi_frequency(m, pulse.sideband, config.eta, config.omega)?;
        let (s, c) = (rate * t).sin_cos();
        u[(excited, excited)] = Complex64::new(c, 0.0);
        u[(ground, ground)] = Complex64::new(c, 0.0);
        u[(ground, excited)] = upper * s;
        u[(excited, ground)] = lower * s;
    }
    Ok(Propagator { operator: OperatorMatrix::from_parts(u, OperatorRole::Unitary), truncated_rows })
}

/// `H/ħ` for one addressed pulse: `<m-k, e|H|m, g> = i^k e^{-iφ} Ω_{m-k,m}`,
/// with spectator spins untouched.
pub fn hamiltonian_matrix(config: &RegisterConfig, pulse: &PulseSpec) -> Result<OperatorMatrix> {
    config.check_pulse(pulse)?;
    let dim = config.dim();
    let k = pulse.sideband.order();
    let mask = config.ion_mask(pulse.target);
    let coupling = i_pow(k as i64) * Complex64::from_polar(1.0, -pulse.phase);

    let mut h = DMatrix::<Complex64>::zeros(dim, dim);
    for col in 0..dim {
        if config.spin_of(col, pulse.target) != Spin::Ground {
            continue;
        }
        let m = config.phonon_of(col);
        if m < k {
            continue;
        }
        let row = (col | mask) - k * config.spin_dim();
        let element = coupling * rabi_frequency(m - k, pulse.sideband, config.eta, config.omega)?;
        h[(row, col)] = element;
        h[(col, row)] = element.conj();
    }
    Ok(OperatorMatrix::from_parts(h, OperatorRole::Hermitian))
}

/// `exp(-iHt)` through the spectral decomposition of `H`, with
/// `t = duration / Ω`.
pub fn pulse_propagator_oracle(config: &RegisterConfig, pulse: &PulseSpec) -> Result<OperatorMatrix> {
    let h = hamiltonian_matrix(config, pulse)?.into_matrix();
    let dim = h.nrows();
    let t = pulse.duration / config.omega.value();
    let eig = SymmetricEigen::try_new(h, 1e-15, 10_000).ok_or(Error::Decomposition(dim))?;
    let phases = DVector::from_iterator(
        dim,
        eig.eigenvalues.iter().map(|&lambda| Complex64::from_polar(1.0, -lambda * t)),
    );
    let v = &eig.eigenvectors;
    let u = v * DMatrix::from_diagonal(&phases) * v.adjoint();
    Ok(OperatorMatrix::from_parts(u, OperatorRole::Unitary))
}

pub fn propagator(config: &RegisterConfig, pulse: &PulseSpec, method: Method) -> Result<OperatorMatrix> {
    match method {
        Method::ClosedForm => Ok(pulse_propagator_closed_form(config, pulse)?.operator),
        Method::Oracle => pulse_propagator_oracle(config, pulse),
    }
}

/// Product `U_n ⋯ U_1` of a pulse sequence applied in order.
pub fn sequence_unitary(
    config: &RegisterConfig,
    pulses: &[PulseSpec],
    method: Method,
) -> Result<OperatorMatrix> {
    pulses.iter().try_fold(OperatorMatrix::identity(config.dim()), |acc, p| {
        Ok(acc.then(&propagator(config, p, method)?))
    })
}

fn check_state(state: &RegisterState, config: &RegisterConfig) -> Result<()> {
    if state.dim() != config.dim() || state.n_ions() != config.n_ions {
        return Err(Error::DimensionMismatch { expected: config.dim(), got: state.dim() });
    }
    Ok(())
}

/// Applies one pulse. No renormalization is performed.
pub fn evolve(
    state: &RegisterState,
    config: &RegisterConfig,
    pulse: &PulseSpec,
    method: Method,
) -> Result<RegisterState> {
    check_state(state, config)?;
    let u = propagator(config, pulse, method)?;
    RegisterState::from_amplitudes(config.n_ions, u.matrix() * state.amplitudes())
}

/// Closed-form evolution that also reports whether the state had weight on
/// a row the cutoff kept as identity.
pub fn evolve_tracked(
    state: &RegisterState,
    config: &RegisterConfig,
    pulse: &PulseSpec,
) -> Result<(RegisterState, bool)> {
    check_state(state, config)?;
    let prop = pulse_propagator_closed_form(config, pulse)?;
    let touched = prop.truncated_rows.iter().any(|&r| state.probability(r) > 1e-24);
    let next = RegisterState::from_amplitudes(config.n_ions, prop.operator.matrix() * state.amplitudes())?;
    Ok((next, touched))
}

/// Total probability on phonon numbers above `phonon_limit`.
pub fn leakage(state: &RegisterState, phonon_limit: usize) -> f64 {
    let spin_dim = 1usize << state.n_ions();
    state
        .amplitudes()
        .iter()
        .enumerate()
        .filter(|(idx, _)| idx / spin_dim > phonon_limit)
        .map(|(_, a)| a.norm_sqr())
        .sum()
}
