//! Sideband Rabi frequencies of the generalized Jaynes-Cummings coupling.
//!
//! For a laser tuned to the `k`-th red sideband, the states `|m, g>` and
//! `|m - k, e>` are coupled at the rate
//!
//! ```text
//! Ω_{m-k,m} = (Ω η^k e^{-η²/2} / 2) · sqrt(m! / (m-k)!) · Σ_{n=0}^{m-k} (iη)^{2n} / (k+n)! · C(m-k, n)
//! ```
//!
//! Everything here is expressed in terms of the lower phonon number
//! `m_lower = m - k`. The value is real (`(iη)^{2n} = (-η²)^n`) and signed.
//! [`rabi_frequency_laguerre`] evaluates the same quantity through the
//! associated Laguerre polynomial and serves as an independent cross-check.

use crate::error::{Error, Result};

/// Largest `m_lower + k` accepted by the coupling formulas.
pub const MAX_PHONON: usize = 32;

/// Lamb-Dicke parameter, strictly inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct LambDicke(f64);

impl LambDicke {
    pub fn new(eta: f64) -> Result<Self> {
        if eta.is_finite() && eta > 0.0 && eta < 1.0 {
            Ok(Self(eta))
        } else {
            Err(Error::InvalidLambDicke(eta))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Base Rabi frequency Ω in rad per unit time.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct RabiBase(f64);

impl RabiBase {
    pub fn new(omega: f64) -> Result<Self> {
        if omega.is_finite() && omega > 0.0 {
            Ok(Self(omega))
        } else {
            Err(Error::InvalidRabiBase(omega))
        }
    }

    /// Ω = 1, so that durations are measured as Ωt.
    pub fn dimensionless() -> Self {
        Self(1.0)
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl Default for RabiBase {
    fn default() -> Self {
        Self::dimensionless()
    }
}

/// Sideband order: 0 is the carrier, 1 the first red sideband.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SidebandIndex(pub u32);

impl SidebandIndex {
    pub const CARRIER: Self = Self(0);
    pub const RED: Self = Self(1);

    pub fn order(self) -> usize {
        self.0 as usize
    }
}

fn check_range(m_lower: usize, k: SidebandIndex) -> Result<()> {
    let top = m_lower.saturating_add(k.order());
    if top > MAX_PHONON {
        Err(Error::PhononRange(top))
    } else {
        Ok(())
    }
}

fn prefactor(k: SidebandIndex, eta: LambDicke, omega: RabiBase) -> f64 {
    let eta = eta.value();
    omega.value() * eta.powi(k.0 as i32) * (-eta * eta / 2.0).exp() / 2.0
}

/// Signed coupling rate between `|m_lower, e>` and `|m_lower + k, g>`.
///
/// The finite sum is accumulated term by term,
/// `t_{n+1} = t_n · (-η²)(m_lower - n) / ((n+1)(k+n+1))`, starting from
/// `t_0 = 1/k!`, so no factorial is ever formed explicitly.
pub fn rabi_frequency(m_lower: usize, k: SidebandIndex, eta: LambDicke, omega: RabiBase) -> Result<f64> {
    check_range(m_lower, k)?;
    let order = k.order();
    let x = eta.value() * eta.value();

    // sqrt((m_lower + k)! / m_lower!)
    let ladder = (1..=order).map(|j| (m_lower + j) as f64).product::<f64>().sqrt();

    let mut term = 1.0 / (1..=order).map(|j| j as f64).product::<f64>();
    let mut sum = term;
    for n in 0..m_lower {
        term *= -x * (m_lower - n) as f64 / (((n + 1) * (order + n + 1)) as f64);
        sum += term;
    }
    Ok(prefactor(k, eta, omega) * ladder * sum)
}

/// Associated Laguerre polynomial `L^alpha_n(x)` by the three-term recurrence.
pub fn laguerre(n: usize, alpha: usize, x: f64) -> f64 {
    let a = alpha as f64;
    let mut prev = 1.0;
    if n == 0 {
        return prev;
    }
    let mut cur = 1.0 + a - x;
    for j in 1..n {
        let jf = j as f64;
        let next = ((2.0 * jf + 1.0 + a - x) * cur - (jf + a) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Same rate as [`rabi_frequency`], via
/// `(Ω η^k e^{-η²/2}/2) · sqrt(m_lower!/(m_lower+k)!) · L^k_{m_lower}(η²)`.
pub fn rabi_frequency_laguerre(
    m_lower: usize,
    k: SidebandIndex,
    eta: LambDicke,
    omega: RabiBase,
) -> Result<f64> {
    check_range(m_lower, k)?;
    let order = k.order();
    let inv_ladder = (1..=order).map(|j| 1.0 / (m_lower + j) as f64).product::<f64>().sqrt();
    let x = eta.value() * eta.value();
    Ok(prefactor(k, eta, omega) * inv_ladder * laguerre(m_lower, order, x))
}
