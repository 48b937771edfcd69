//! High-order flux reconstruction (FR) for conservation laws, built to measure
//! how the choice of stored variables changes the discrete solution.
//!
//! The crate covers:
//!
//! * [`refelem`]: 1D reference-element operators (Gauss–Legendre points,
//!   Lagrange differentiation, interface extrapolation, Radau correction
//!   derivatives that recover nodal DG).
//! * [`alias`]: Legendre projection, aliasing energy, brute-force
//!   interpolation/gradient/interface remainders and the closed-form bounds.
//! * [`gasmodel`]: primitive / conserved / mixed state algebra, inviscid and
//!   viscous fluxes, and the two gradient pathways.
//! * [`frcore`]: the 1D scalar and 3D Navier–Stokes FR residuals with the four
//!   storage schemes A–D.
//! * [`march`]: classical RK44 time stepping with per-step wall-time capture.
//! * [`cases`]: isentropic convecting vortex, Taylor–Green vortex and their
//!   diagnostics.
//! * [`cli`]: configuration parsing and run orchestration behind the
//!   `fr-alias` binary.

pub mod alias;
pub mod cases;
pub mod cli;
pub mod error;
pub mod frcore;
pub mod gasmodel;
pub mod march;
pub mod real;
pub mod refelem;

pub use error::{Error, Result};
pub use real::{Precision, Real};
