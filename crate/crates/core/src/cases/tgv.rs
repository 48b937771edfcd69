//! Taylor–Green vortex on `[-πL, πL]³`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::frcore::{Mesh, SolutionField, StorageScheme};
use crate::gasmodel::{GasModel, PrimitiveState};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct TgvConfig {
    pub re: f64,
    pub ma: f64,
    pub pr: f64,
    pub gamma: f64,
    pub rho0: f64,
    pub u0: f64,
    pub l: f64,
    /// Gas constant; `T0` follows from `Ma`.
    pub r_gas: f64,
    pub elements: usize,
    pub order: usize,
}

impl Default for TgvConfig {
    fn default() -> Self {
        TgvConfig {
            re: 400.0,
            ma: 0.08,
            pr: 0.71,
            gamma: 1.4,
            rho0: 1.0,
            u0: 1.0,
            l: 1.0,
            r_gas: 1.0,
            elements: 4,
            order: 4,
        }
    }
}

impl TgvConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("re", self.re),
            ("ma", self.ma),
            ("pr", self.pr),
            ("rho0", self.rho0),
            ("u0", self.u0),
            ("l", self.l),
            ("R", self.r_gas),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidParameter { name, reason: format!("{v} must be positive") });
            }
        }
        if self.elements == 0 {
            return Err(Error::InvalidParameter { name: "elements", reason: "must be at least 1".into() });
        }
        Ok(())
    }

    /// `T0 = U0² / (γ R Ma²)`.
    pub fn t0(&self) -> f64 {
        self.u0 * self.u0 / (self.gamma * self.r_gas * self.ma * self.ma)
    }

    pub fn p0(&self) -> f64 {
        self.rho0 * self.r_gas * self.t0()
    }

    /// `μ = ρ0 U0 L / Re`.
    pub fn mu(&self) -> f64 {
        self.rho0 * self.u0 * self.l / self.re
    }

    pub fn gas(&self) -> Result<GasModel> {
        GasModel::new(self.gamma, self.r_gas, self.mu(), self.pr)
    }

    pub fn mesh(&self) -> Result<Mesh> {
        Mesh::cube(self.elements, -PI * self.l, PI * self.l)
    }

    /// Convective time `L / U0`.
    pub fn time_scale(&self) -> f64 {
        self.l / self.u0
    }
}

pub fn tgv_primitive(cfg: &TgvConfig, x: [f64; 3]) -> PrimitiveState {
    let (a, b, c) = (x[0] / cfg.l, x[1] / cfg.l, x[2] / cfg.l);
    let p =
        cfg.p0() + cfg.rho0 * cfg.u0 * cfg.u0 / 16.0 * ((2.0 * a).cos() + (2.0 * b).cos()) * ((2.0 * c).cos() + 2.0);
    PrimitiveState {
        rho: p / (cfg.r_gas * cfg.t0()),
        u: cfg.u0 * a.sin() * b.cos() * c.cos(),
        v: -cfg.u0 * a.cos() * b.sin() * c.cos(),
        w: 0.0,
        p,
    }
}

pub fn tgv_init<T: Real>(cfg: &TgvConfig, scheme: StorageScheme) -> Result<SolutionField<T>> {
    cfg.validate()?;
    SolutionField::from_fn(cfg.mesh()?, cfg.order, scheme, &cfg.gas()?, |x| tgv_primitive(cfg, x))
}
