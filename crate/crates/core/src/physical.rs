//! Conversion of dimensionless pulse programs into laboratory seconds.
//!
//! Experiments quote the resonant rate `Ω` and the sideband rate `ηΩ`
//! separately, so both are taken as inputs. A pulse of dimensionless length
//! `Ωt` lasts `Ωt / Ω` seconds on the carrier and `Ωt · η / (ηΩ)` on a
//! sideband, where `η` is the register's Lamb-Dicke parameter.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};
use crate::gates::PulseProgram;
use crate::matching::{reference_rows, solve_carrier_durations, PhaseFamily, SidebandMatch};

/// Angular Rabi rates in rad/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalRates {
    pub resonant: f64,
    pub sideband: f64,
}

impl PhysicalRates {
    pub fn new(resonant: f64, sideband: f64) -> Result<Self> {
        for v in [resonant, sideband] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidRabiBase(v));
            }
        }
        Ok(Self { resonant, sideband })
    }

    /// Rates given as ordinary frequencies, `Ω = 2π·f`.
    pub fn from_hz(resonant_hz: f64, sideband_hz: f64) -> Result<Self> {
        Self::new(TAU * resonant_hz, TAU * sideband_hz)
    }

    /// Seconds for one pulse of dimensionless length `duration` (= Ωt).
    pub fn pulse_seconds(&self, sideband_order: usize, duration: f64, eta: f64) -> f64 {
        if sideband_order == 0 {
            duration / self.resonant
        } else {
            duration * eta / self.sideband
        }
    }

    /// Per-pulse durations of a program in seconds.
    pub fn program_pulse_seconds(&self, program: &PulseProgram) -> Vec<f64> {
        let eta = program.config().eta.value();
        program.pulses().iter().map(|p| self.pulse_seconds(p.sideband.order(), p.duration, eta)).collect()
    }

    pub fn program_seconds(&self, program: &PulseProgram) -> f64 {
        self.program_pulse_seconds(program).iter().sum()
    }

    /// Total time of the ion-bus CN for one parameter set, from `Ωt/π` values.
    pub fn cn_cb_seconds(&self, m: &SidebandMatch, tau1: f64, tau3: f64) -> f64 {
        let eta = m.eta.value();
        self.pulse_seconds(0, (tau1 + tau3) * PI, eta) + self.pulse_seconds(1, m.tau2 * PI, eta)
    }

    /// Shortest exact CN_cb among the consistent reference parameter sets.
    pub fn shortest_cn_cb(&self) -> Result<ShortestCn> {
        let mut best: Option<ShortestCn> = None;
        for row in reference_rows().into_iter().filter(|r| r.check.consistent) {
            let (p, q, pp, qq) = row.branch();
            let m = SidebandMatch::solve(p, q)?;
            let c = solve_carrier_durations(m.eta, pp, qq, PhaseFamily::HalfPi)?;
            let seconds = self.cn_cb_seconds(&m, c.tau1, c.tau3);
            if best.as_ref().is_none_or(|b| seconds < b.seconds) {
                best = Some(ShortestCn { branch: (p, q, pp, qq), seconds });
            }
        }
        best.ok_or_else(|| Error::Infeasible("no consistent reference rows".into()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortestCn {
    /// `(p, q, p′, q′)`
    pub branch: (u32, u32, u32, u32),
    pub seconds: f64,
}
