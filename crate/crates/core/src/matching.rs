//! Matching conditions: the Lamb-Dicke parameter and pulse durations for
//! which a pulse sequence is an exact logic gate.
//!
//! All durations returned here are in units of `π/Ω`, i.e. the quantity
//! `Ωt/π`. Multiply by `π` to obtain the `Ωt` stored in a
//! [`PulseSpec`](crate::register::PulseSpec).
//!
//! Every solver takes the branch integers from the caller; none of them
//! searches for a "best" branch, so a given parameter set always maps to the
//! same row.

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use crate::coupling::{rabi_frequency, LambDicke, RabiBase, SidebandIndex};
use crate::error::{Error, Result};

/// Rates relative to Ω (`Ω_{a,b}/Ω`) for the four couplings the gates use.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rates {
    pub carrier0: f64,
    pub carrier1: f64,
    pub red01: f64,
    pub red12: f64,
}

impl Rates {
    pub fn of(eta: LambDicke) -> Self {
        let om = RabiBase::dimensionless();
        // m_lower ≤ 1, k ≤ 1 is always in range.
        let r = |m, k| rabi_frequency(m, k, eta, om).expect("low phonon numbers are in range");
        Self {
            carrier0: r(0, SidebandIndex::CARRIER),
            carrier1: r(1, SidebandIndex::CARRIER),
            red01: r(0, SidebandIndex::RED),
            red12: r(1, SidebandIndex::RED),
        }
    }
}

/// Phase family of the resonant pulses that surround a controlled-Z.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum PhaseFamily {
    #[default]
    HalfPi,
    ThreeHalvesPi,
}

impl PhaseFamily {
    pub fn phase(self) -> f64 {
        match self {
            PhaseFamily::HalfPi => PI / 2.0,
            PhaseFamily::ThreeHalvesPi => 3.0 * PI / 2.0,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PhaseFamily::HalfPi => "pi/2",
            PhaseFamily::ThreeHalvesPi => "3pi/2",
        }
    }
}

impl std::str::FromStr for PhaseFamily {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim() {
            "pi/2" | "half" | "1" => Ok(PhaseFamily::HalfPi),
            "3pi/2" | "three-halves" | "3" => Ok(PhaseFamily::ThreeHalvesPi),
            other => Err(format!("unknown phase family {other:?}, expected pi/2 or 3pi/2")),
        }
    }
}

/// Parameters of the single red-sideband pulse that realizes CZ between an
/// ion and the bus: `Ω_{0,1}t₂ = 2pπ`, `Ω_{1,2}t₂ = (2q−1)π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SidebandMatch {
    pub p: u32,
    pub q: u32,
    pub eta: LambDicke,
    /// `Ωt₂/π`
    pub tau2: f64,
}

impl SidebandMatch {
    pub fn solve(p: u32, q: u32) -> Result<Self> {
        let eta = solve_eta(p, q)?;
        Ok(Self { p, q, eta, tau2: solve_tau2(p, eta) })
    }

    /// `(cos Ω_{0,1}t₂, cos Ω_{1,2}t₂)`, ideally `(1, −1)`.
    pub fn residuals(&self) -> (f64, f64) {
        sideband_cosines(self.eta, self.tau2)
    }
}

fn sideband_cosines(eta: LambDicke, tau2: f64) -> (f64, f64) {
    let rates = Rates::of(eta);
    ((rates.red01 * tau2 * PI).cos(), (rates.red12 * tau2 * PI).cos())
}

/// `η = sqrt(2 − √2 (q − ½)/p)`, from `Ω_{1,2}/Ω_{0,1} = (2 − η²)/√2 = (q − ½)/p`.
pub fn solve_eta(p: u32, q: u32) -> Result<LambDicke> {
    if p == 0 || q == 0 {
        return Err(Error::NoPhysicalEta { p, q, ratio: f64::NAN });
    }
    let ratio = (f64::from(q) - 0.5) / f64::from(p);
    if ratio <= FRAC_1_SQRT_2 || ratio >= SQRT_2 {
        return Err(Error::NoPhysicalEta { p, q, ratio });
    }
    LambDicke::new((2.0 - SQRT_2 * ratio).sqrt())
}

/// `Ωt₂/π = 4p e^{η²/2} / η`.
pub fn solve_tau2(p: u32, eta: LambDicke) -> f64 {
    let e = eta.value();
    4.0 * f64::from(p) * (e * e / 2.0).exp() / e
}

/// Durations of the two resonant pulses around the ion-bus CZ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CarrierMatch {
    pub eta: LambDicke,
    pub p_prime: u32,
    pub q_prime: u32,
    pub family: PhaseFamily,
    /// `Ωt₁/π`, first resonant pulse.
    pub tau1: f64,
    /// `Ωt₃/π`, last resonant pulse.
    pub tau3: f64,
}

impl CarrierMatch {
    /// Phase of both resonant pulses.
    pub fn phase(&self) -> f64 {
        self.family.phase()
    }

    /// `(cos Ω_{0,0}(t₁+t₃), sin Ω_{1,1}(t₃−t₁))`, ideally `(1, −1)` for the
    /// π/2 family and `(1, 1)` for 3π/2.
    pub fn conditions(&self) -> (f64, f64) {
        let rates = Rates::of(self.eta);
        (
            (rates.carrier0 * (self.tau1 + self.tau3) * PI).cos(),
            (rates.carrier1 * (self.tau3 - self.tau1) * PI).sin(),
        )
    }
}

/// Solves `Ω_{0,0}(t₁+t₃) = 2p′π`, `Ω_{1,1}(t₁−t₃) = (2q′ − 3/2)π`; the 3π/2
/// family uses the same pair with `t₁` and `t₃` exchanged.
pub fn solve_carrier_durations(
    eta: LambDicke,
    p_prime: u32,
    q_prime: u32,
    family: PhaseFamily,
) -> Result<CarrierMatch> {
    if p_prime == 0 || q_prime == 0 {
        return Err(Error::Infeasible("p' and q' must be positive".into()));
    }
    let rates = Rates::of(eta);
    if rates.carrier1 == 0.0 {
        return Err(Error::Infeasible("Ω_{1,1} vanishes".into()));
    }
    let sum = 2.0 * f64::from(p_prime) / rates.carrier0;
    let diff = (2.0 * f64::from(q_prime) - 1.5) / rates.carrier1;
    let long = (sum + diff) / 2.0;
    let short = (sum - diff) / 2.0;
    if short <= 0.0 {
        return Err(Error::Infeasible(format!(
            "t3 = {short:.6} π/Ω is not positive for (p', q') = ({p_prime}, {q_prime}); increase p'"
        )));
    }
    let (tau1, tau3) = match family {
        PhaseFamily::HalfPi => (long, short),
        PhaseFamily::ThreeHalvesPi => (short, long),
    };
    Ok(CarrierMatch { eta, p_prime, q_prime, family, tau1, tau3 })
}

/// Control-ion red-sideband pulses around the target's ion-bus CZ.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IonIonMatch {
    pub eta: LambDicke,
    pub kk: u32,
    pub kk_prime: u32,
    /// `Ω_{0,1}t′₁/π`
    pub angle1: f64,
    /// `Ω_{0,1}t′₃/π`
    pub angle3: f64,
    /// `Ωt′₁/π`
    pub tau1: f64,
    /// `Ωt′₃/π`
    pub tau3: f64,
}

/// `Ω_{0,1}t′₁ = (k+k′)π − π/2`, `Ω_{0,1}t′₃ = (k−k′)π + π/2`.
pub fn solve_ion_ion_durations(eta: LambDicke, kk: u32, kk_prime: u32) -> Result<IonIonMatch> {
    if kk_prime == 0 || kk < kk_prime {
        return Err(Error::Infeasible(format!("ion-ion branch needs k >= k' >= 1, got ({kk}, {kk_prime})")));
    }
    let angle1 = f64::from(kk + kk_prime) - 0.5;
    let angle3 = f64::from(kk - kk_prime) + 0.5;
    let red01 = Rates::of(eta).red01;
    Ok(IonIonMatch { eta, kk, kk_prime, angle1, angle3, tau1: angle1 / red01, tau3: angle3 / red01 })
}

/// Target-ion resonant pulses that turn an ion-ion CZ into CN.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TargetSandwich {
    pub eta: LambDicke,
    pub pp: u32,
    pub pp_prime: u32,
    pub family: PhaseFamily,
    /// `Ω_{0,0}t″₁/π`
    pub angle1: f64,
    /// `Ω_{0,0}t″₃/π`
    pub angle3: f64,
    /// `Ωt″₁/π`
    pub tau1: f64,
    /// `Ωt″₃/π`
    pub tau3: f64,
}

impl TargetSandwich {
    pub fn phase(&self) -> f64 {
        self.family.phase()
    }
}

/// `Ω_{0,0}t″₁ = (p+p′−¾)π`, `Ω_{0,0}t″₃ = (p−p′+¾)π` for π/2, with `¼` in
/// place of `¾` for 3π/2.
pub fn solve_target_sandwich(
    eta: LambDicke,
    pp: u32,
    pp_prime: u32,
    family: PhaseFamily,
) -> Result<TargetSandwich> {
    if pp == 0 || pp_prime == 0 {
        return Err(Error::Infeasible("p and p' must be positive".into()));
    }
    let offset = match family {
        PhaseFamily::HalfPi => 0.75,
        PhaseFamily::ThreeHalvesPi => 0.25,
    };
    let angle1 = f64::from(pp + pp_prime) - offset;
    let angle3 = f64::from(pp) - f64::from(pp_prime) + offset;
    if angle3 <= 0.0 {
        return Err(Error::Infeasible(format!(
            "t''3 is not positive for (p, p') = ({pp}, {pp_prime}); need p - p' + {offset} > 0"
        )));
    }
    let carrier0 = Rates::of(eta).carrier0;
    Ok(TargetSandwich {
        eta,
        pp,
        pp_prime,
        family,
        angle1,
        angle3,
        tau1: angle1 / carrier0,
        tau3: angle3 / carrier0,
    })
}

/// A single resonant pulse with `Ω_{0,0}t = 2aπ` and `Ω_{1,1}t = (2b+½)π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SinglePulseSolution {
    pub a: u32,
    pub b: u32,
    /// `Ωt/π`
    pub tau: f64,
}

/// Phase tolerance (radians) for [`solve_single_pulse_controlled`].
pub const SINGLE_PULSE_TOL: f64 = 1e-6;

/// Smallest `t` with `a, b ≤ max_index` satisfying both conditions, or `None`.
///
/// An exact solution exists only when `Ω_{0,0}/Ω_{1,1} = 4a/(4b+1)`.
pub fn solve_single_pulse_controlled(eta: LambDicke, max_index: u32) -> Option<SinglePulseSolution> {
    let rates = Rates::of(eta);
    (1..=max_index).find_map(|a| {
        let tau = 2.0 * f64::from(a) / rates.carrier0;
        let phase = rates.carrier1 * tau * PI;
        let b = ((phase / PI - 0.5) / 2.0).round();
        if b < 0.0 || b > f64::from(max_index) {
            return None;
        }
        let miss = (phase - (2.0 * b + 0.5) * PI).abs();
        (miss <= SINGLE_PULSE_TOL).then_some(SinglePulseSolution { a, b: b as u32, tau })
    })
}

/// Two equal red-sideband pulses of `Ωt′/π = tau` each with
/// `Ω_{0,1}t′ = 2p′π` and `Ω_{1,2}t′ = (2r+½)π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPulseMatch {
    pub eta: LambDicke,
    pub p_prime: u32,
    pub r: u32,
    pub tau: f64,
}

/// Phase tolerance (radians) when matching an externally supplied η.
pub const TWO_PULSE_TOL: f64 = 1e-9;

/// `η` for which the two-pulse branch `(p′, r)` is exact:
/// `(2 − η²)/√2 = (4r+1)/(4p′)`.
pub fn two_pulse_eta(p_prime: u32, r: u32) -> Result<LambDicke> {
    let ratio = (4.0 * f64::from(r) + 1.0) / (4.0 * f64::from(p_prime));
    if p_prime == 0 || ratio <= FRAC_1_SQRT_2 || ratio >= SQRT_2 {
        return Err(Error::Infeasible(format!(
            "two-pulse branch (p', r) = ({p_prime}, {r}) has no eta in (0, 1)"
        )));
    }
    LambDicke::new((2.0 - SQRT_2 * ratio).sqrt())
}

/// Smallest `p′ ≤ max_index` whose two-pulse branch is exact for `eta`.
pub fn solve_two_pulse(eta: LambDicke, max_index: u32) -> Result<TwoPulseMatch> {
    let rates = Rates::of(eta);
    (1..=max_index)
        .find_map(|p_prime| {
            let tau = 2.0 * f64::from(p_prime) / rates.red01;
            let phase = rates.red12 * tau * PI;
            let r = ((phase / PI - 0.5) / 2.0).round();
            let miss = (phase - (2.0 * r + 0.5) * PI).abs();
            (r >= 0.0 && miss <= TWO_PULSE_TOL).then_some(TwoPulseMatch { eta, p_prime, r: r as u32, tau })
        })
        .ok_or_else(|| {
            Error::Infeasible(format!(
                "eta = {} admits no two-pulse branch with p' <= {max_index}",
                eta.value()
            ))
        })
}

/// One regenerated table row, columns in the order
/// `p, q, η, Ωt₂/π, p′, q′, Ωt₁/π, Ωt₃/π`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TableRow {
    pub sideband: SidebandMatch,
    pub carrier: CarrierMatch,
}

impl TableRow {
    pub fn solve(p: u32, q: u32, p_prime: u32, q_prime: u32) -> Result<Self> {
        let sideband = SidebandMatch::solve(p, q)?;
        let carrier = solve_carrier_durations(sideband.eta, p_prime, q_prime, PhaseFamily::HalfPi)?;
        Ok(Self { sideband, carrier })
    }

    pub fn columns(&self) -> [f64; 8] {
        [
            f64::from(self.sideband.p),
            f64::from(self.sideband.q),
            self.sideband.eta.value(),
            self.sideband.tau2,
            f64::from(self.carrier.p_prime),
            f64::from(self.carrier.q_prime),
            self.carrier.tau1,
            self.carrier.tau3,
        ]
    }
}

/// Solves each `(p, q, p′, q′)` independently; a failing row does not stop
/// the others.
pub fn regenerate_table(rows: &[(u32, u32, u32, u32)]) -> Vec<Result<TableRow>> {
    rows.iter().map(|&(p, q, pp, qq)| TableRow::solve(p, q, pp, qq)).collect()
}

/// Published sideband entry: `(p, q, Ωt₂/π)`.
pub type PrintedSideband = (u32, u32, f64);
/// Published carrier entry: `(p′, q′, Ωt₁/π, Ωt₃/π)`.
pub type PrintedCarrier = (u32, u32, f64, f64);

/// A block of published parameters sharing one printed η.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceBlock {
    pub eta: f64,
    pub sidebands: &'static [PrintedSideband],
    pub carriers: &'static [PrintedCarrier],
}

/// Published three-pulse CN parameters (π/2 family), 4-decimal digits.
pub const REFERENCE_TABLE: &[ReferenceBlock] = &[
    ReferenceBlock {
        eta: 0.9692,
        sidebands: &[(2, 2, 13.2024), (10, 8, 33.0061)],
        carriers: &[(5, 1, 29.1785, 2.8108), (8, 1, 38.7753, 12.4076), (10, 1, 45.1732, 18.8055)],
    },
    ReferenceBlock {
        eta: 0.4819,
        sidebands: &[(2, 3, 18.6448), (6, 8, 55.9343)],
        carriers: &[(1, 1, 2.9777, 1.5148), (2, 2, 8.1496, 0.8354), (3, 1, 7.4702, 6.0073)],
    },
    ReferenceBlock {
        eta: 0.9064,
        sidebands: &[(3, 3, 19.9648), (9, 8, 59.8943)],
        carriers: &[(2, 1, 10.2554, 1.8081), (3, 1, 13.2713, 4.8239), (8, 2, 45.2453, 3.0088)],
    },
    ReferenceBlock {
        eta: 0.2355,
        sidebands: &[(4, 6, 69.8532)],
        carriers: &[(1, 1, 2.6005, 1.5119), (2, 1, 4.6567, 3.5682), (2, 2, 6.8337, 1.3913)],
    },
    ReferenceBlock {
        eta: 0.1738,
        sidebands: &[(14, 20, 16.3571)],
        carriers: &[(1, 1, 2.5538, 1.5071), (2, 1, 4.5843, 3.5374), (2, 2, 6.6779, 1.4438)],
    },
    ReferenceBlock {
        eta: 0.5919,
        sidebands: &[(3, 4, 24.1611)],
        carriers: &[(1, 1, 3.2991, 1.4661), (2, 1, 5.6817, 3.8487), (2, 2, 9.3477, 0.1827)],
    },
];

/// A printed `(η, Ωt₂/π)` pair counts as consistent when both sideband
/// cosines are within this distance of their targets.
pub const CONSISTENCY_TOL: f64 = 1e-2;

/// Recomputed sideband conditions for a printed `(η, Ωt₂/π)` pair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrintedCheck {
    pub cos01: f64,
    pub cos12: f64,
    pub consistent: bool,
}

pub fn check_printed(eta: f64, tau2: f64) -> Result<PrintedCheck> {
    let (cos01, cos12) = sideband_cosines(LambDicke::new(eta)?, tau2);
    let consistent = (cos01 - 1.0).abs() <= CONSISTENCY_TOL && (cos12 + 1.0).abs() <= CONSISTENCY_TOL;
    Ok(PrintedCheck { cos01, cos12, consistent })
}

/// One published row together with its recomputation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceRow {
    pub printed_eta: f64,
    pub printed_sideband: PrintedSideband,
    pub printed_carrier: PrintedCarrier,
    pub check: PrintedCheck,
}

impl ReferenceRow {
    pub fn branch(&self) -> (u32, u32, u32, u32) {
        let (p, q, _) = self.printed_sideband;
        let (pp, qq, _, _) = self.printed_carrier;
        (p, q, pp, qq)
    }
}

/// Every `(sideband, carrier)` combination of the reference table, each with
/// its consistency check.
pub fn reference_rows() -> Vec<ReferenceRow> {
    REFERENCE_TABLE
        .iter()
        .flat_map(|block| {
            block.sidebands.iter().flat_map(move |&side| {
                let check = check_printed(block.eta, side.2).expect("printed eta is physical");
                block.carriers.iter().map(move |&carrier| ReferenceRow {
                    printed_eta: block.eta,
                    printed_sideband: side,
                    printed_carrier: carrier,
                    check,
                })
            })
        })
        .collect()
}
