//! Exact pulse-level simulation and gate synthesis for trapped ions beyond
//! the Lamb-Dicke limit.
//!
//! Ions share one vibrational mode and are driven by square carrier or
//! red-sideband pulses. Every pulse acts on closed two-state blocks, so its
//! propagator is known in closed form for any Lamb-Dicke parameter. The
//! crate solves the matching conditions that make pulse sequences into
//! exact CZ and CN gates, builds those sequences and checks them against
//! ideal matrices and an independent eigendecomposition oracle.
//!
//! ```
//! use iontrap::gates::{project_and_compare, seq_cz_cb, GateSpec};
//! use iontrap::matching::SidebandMatch;
//! use iontrap::register::RegisterConfig;
//!
//! let m = SidebandMatch::solve(2, 3)?;
//! let config = RegisterConfig::dimensionless(1, m.eta)?;
//! let report = project_and_compare(&seq_cz_cb(&config, &m, 0, 0.0)?, &GateSpec::cz_cb(0))?;
//! assert!(report.deviation < 1e-9);
//! # Ok::<(), iontrap::error::Error>(())
//! ```
//!
//! The guide in `book/` walks through each module; its snippets run as
//! doctests of this crate.

pub mod coupling;
pub mod dynamics;
pub mod error;
pub mod gates;
pub mod matching;
pub mod operator;
pub mod physical;
pub mod program;
pub mod register;

// Book chapters, compiled as doctests so the guide cannot drift from the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/coupling.md")]
    mod coupling {}
    #[doc = include_str!("../../../book/src/dynamics.md")]
    mod dynamics {}
    #[doc = include_str!("../../../book/src/matching.md")]
    mod matching {}
    #[doc = include_str!("../../../book/src/gates.md")]
    mod gates {}
    #[doc = include_str!("../../../book/src/programs.md")]
    mod programs {}
    #[doc = include_str!("../../../book/src/physical.md")]
    mod physical {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
