//! Flux reconstruction residuals on uniform periodic meshes.
//!
//! The 1D scalar operator in [`scalar`] is the building block; the 3D
//! Navier–Stokes operator in [`navier_stokes`] applies it line by line along
//! each axis of a tensor-product element.

mod field;
mod interface;
mod mesh;
pub mod navier_stokes;
pub mod scalar;

use std::fmt;
use std::str::FromStr;

pub use field::{store, unstore, Residual, SolutionField};
pub use interface::{br1_flux, br1_interface, davis_wave_speed, rusanov_flux};
pub use mesh::Mesh;
pub use navier_stokes::{residual_3d, NavierStokes};
pub use scalar::residual_1d_scalar;

/// Which variable set is stored at the solution points and how the viscous
/// gradients are obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StorageScheme {
    /// Primitives `(ρ, u, v, w, p)` stored and differentiated.
    A,
    /// Conserved variables stored, converted to primitives before differentiation.
    B,
    /// Conserved variables stored and differentiated; product rule for the
    /// primitive gradients.
    C,
    /// Mixed set `(ρ, ρu, ρv, ρw, p)` stored, converted to primitives before
    /// differentiation.
    D,
}

impl StorageScheme {
    pub const ALL: [StorageScheme; 4] = [StorageScheme::A, StorageScheme::B, StorageScheme::C, StorageScheme::D];

    pub fn name(self) -> &'static str {
        match self {
            StorageScheme::A => "A",
            StorageScheme::B => "B",
            StorageScheme::C => "C",
            StorageScheme::D => "D",
        }
    }

    /// Names of the five stored components.
    pub fn components(self) -> [&'static str; 5] {
        match self {
            StorageScheme::A => ["rho", "u", "v", "w", "p"],
            StorageScheme::B | StorageScheme::C => ["rho", "rho_u", "rho_v", "rho_w", "E"],
            StorageScheme::D => ["rho", "rho_u", "rho_v", "rho_w", "p"],
        }
    }
}

impl fmt::Display for StorageScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StorageScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_uppercase().as_str() {
            "A" => Ok(StorageScheme::A),
            "B" => Ok(StorageScheme::B),
            "C" => Ok(StorageScheme::C),
            "D" => Ok(StorageScheme::D),
            _ => Err(format!("unknown scheme `{s}`, expected one of {{A, B, C, D}}")),
        }
    }
}
