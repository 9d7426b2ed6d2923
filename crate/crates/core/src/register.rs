//! Register layout: one shared phonon mode times `N` two-level ions.
//!
//! Basis index of `|m; s_0 … s_{N-1}>` is `m·2^N + Σ_j s_j·2^(N-1-j)` with
//! `g = 0`, `e = 1`. For a single ion the first four states are
//! `|0g>, |0e>, |1g>, |1e>`.

use nalgebra::DVector;
use num_complex::Complex64;

use crate::coupling::{LambDicke, RabiBase, SidebandIndex};
use crate::error::{Error, Result};

pub const MAX_IONS: usize = 8;

/// Internal level of one ion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Spin {
    Ground,
    Excited,
}

impl Spin {
    pub fn bit(self) -> usize {
        match self {
            Spin::Ground => 0,
            Spin::Excited => 1,
        }
    }

    pub fn from_bit(bit: usize) -> Self {
        if bit & 1 == 0 {
            Spin::Ground
        } else {
            Spin::Excited
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegisterConfig {
    pub n_ions: usize,
    pub eta: LambDicke,
    pub omega: RabiBase,
    /// Highest retained phonon number.
    pub fock_cutoff: usize,
}

impl RegisterConfig {
    pub fn new(n_ions: usize, eta: LambDicke, omega: RabiBase, fock_cutoff: usize) -> Result<Self> {
        if !(1..=MAX_IONS).contains(&n_ions) {
            return Err(Error::InvalidRegister(format!("ion count {n_ions} outside 1..={MAX_IONS}")));
        }
        if fock_cutoff < 2 {
            return Err(Error::InvalidRegister(format!("fock cutoff {fock_cutoff} below 2")));
        }
        Ok(Self { n_ions, eta, omega, fock_cutoff })
    }

    /// Dimensionless register (Ω = 1) with the default cutoff of 4.
    pub fn dimensionless(n_ions: usize, eta: LambDicke) -> Result<Self> {
        Self::new(n_ions, eta, RabiBase::dimensionless(), 4)
    }

    pub fn with_cutoff(self, fock_cutoff: usize) -> Result<Self> {
        Self::new(self.n_ions, self.eta, self.omega, fock_cutoff)
    }

    pub fn spin_dim(&self) -> usize {
        1 << self.n_ions
    }

    pub fn dim(&self) -> usize {
        (self.fock_cutoff + 1) * self.spin_dim()
    }

    pub fn index(&self, phonon: usize, spins: &[Spin]) -> Result<usize> {
        if spins.len() != self.n_ions {
            return Err(Error::DimensionMismatch { expected: self.n_ions, got: spins.len() });
        }
        if phonon > self.fock_cutoff {
            return Err(Error::InvalidRegister(format!("phonon {phonon} above cutoff {}", self.fock_cutoff)));
        }
        let bits = spins.iter().fold(0, |acc, s| (acc << 1) | s.bit());
        Ok(phonon * self.spin_dim() + bits)
    }

    pub fn phonon_of(&self, index: usize) -> usize {
        index / self.spin_dim()
    }

    /// Bit mask of ion `ion` inside the spin part of an index.
    pub fn ion_mask(&self, ion: usize) -> usize {
        1 << (self.n_ions - 1 - ion)
    }

    pub fn spin_of(&self, index: usize, ion: usize) -> Spin {
        Spin::from_bit(usize::from(index & self.ion_mask(ion) != 0))
    }

    pub(crate) fn check_pulse(&self, pulse: &PulseSpec) -> Result<()> {
        if pulse.target >= self.n_ions {
            return Err(Error::InvalidPulse(format!(
                "target ion {} out of range for {} ions",
                pulse.target, self.n_ions
            )));
        }
        if !pulse.phase.is_finite() {
            return Err(Error::InvalidPulse(format!("non-finite phase {}", pulse.phase)));
        }
        if !pulse.duration.is_finite() || pulse.duration < 0.0 {
            return Err(Error::InvalidPulse(format!("bad duration {}", pulse.duration)));
        }
        if pulse.sideband.order() > self.fock_cutoff {
            return Err(Error::InvalidPulse(format!(
                "sideband k = {} exceeds fock cutoff {}",
                pulse.sideband.0, self.fock_cutoff
            )));
        }
        Ok(())
    }
}

/// One addressed square pulse. `duration` is the dimensionless Ωt.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PulseSpec {
    pub target: usize,
    pub sideband: SidebandIndex,
    pub phase: f64,
    pub duration: f64,
}

impl PulseSpec {
    pub fn carrier(target: usize, phase: f64, duration: f64) -> Self {
        Self { target, sideband: SidebandIndex::CARRIER, phase, duration }
    }

    pub fn red(target: usize, phase: f64, duration: f64) -> Self {
        Self { target, sideband: SidebandIndex::RED, phase, duration }
    }
}

/// Amplitudes over the phonon ⊗ spins basis.
#[derive(Debug, Clone, PartialEq)]
pub struct RegisterState {
    n_ions: usize,
    amplitudes: DVector<Complex64>,
}

impl RegisterState {
    pub fn basis(config: &RegisterConfig, phonon: usize, spins: &[Spin]) -> Result<Self> {
        let mut amplitudes = DVector::zeros(config.dim());
        amplitudes[config.index(phonon, spins)?] = Complex64::new(1.0, 0.0);
        Ok(Self { n_ions: config.n_ions, amplitudes })
    }

    /// Phonon vacuum with every ion in `|g>`.
    pub fn ground(config: &RegisterConfig) -> Self {
        let mut amplitudes = DVector::zeros(config.dim());
        amplitudes[0] = Complex64::new(1.0, 0.0);
        Self { n_ions: config.n_ions, amplitudes }
    }

    /// Wraps raw amplitudes; the length must be `(n_max+1)·2^N` for some `n_max`.
    pub fn from_amplitudes(n_ions: usize, amplitudes: DVector<Complex64>) -> Result<Self> {
        let spin_dim = 1usize << n_ions;
        if amplitudes.is_empty() || !amplitudes.len().is_multiple_of(spin_dim) {
            return Err(Error::DimensionMismatch {
                expected: spin_dim * (amplitudes.len() / spin_dim).max(1),
                got: amplitudes.len(),
            });
        }
        Ok(Self { n_ions, amplitudes })
    }

    pub fn n_ions(&self) -> usize {
        self.n_ions
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> DVector<Complex64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn probability(&self, index: usize) -> f64 {
        self.amplitudes[index].norm_sqr()
    }

    pub fn fock_cutoff(&self) -> usize {
        self.dim() / (1 << self.n_ions) - 1
    }
}
