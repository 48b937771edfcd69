//! Isentropic convecting vortex on a periodic box one element thick in `z`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::frcore::{Mesh, SolutionField, StorageScheme};
use crate::gasmodel::{GasModel, PrimitiveState};
use crate::real::Real;

#[derive(Debug, Clone, PartialEq)]
pub struct IcvConfig {
    pub beta: f64,
    pub u0: f64,
    pub v0: f64,
    pub center: [f64; 2],
    pub lower: [f64; 2],
    pub extent: [f64; 2],
    pub elements: [usize; 3],
    pub order: usize,
    pub gamma: f64,
}

impl Default for IcvConfig {
    fn default() -> Self {
        IcvConfig {
            beta: 5.0,
            u0: 1.0,
            v0: 1.0,
            center: [5.0, 5.0],
            lower: [0.0, 0.0],
            extent: [10.0, 10.0],
            elements: [8, 8, 1],
            order: 4,
            gamma: 1.4,
        }
    }
}

impl IcvConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta > 0.0) {
            return Err(Error::InvalidParameter { name: "beta", reason: format!("{} must be positive", self.beta) });
        }
        if !(self.gamma > 1.0) {
            return Err(Error::InvalidParameter { name: "gamma", reason: format!("{} must exceed 1", self.gamma) });
        }
        Ok(())
    }

    /// Thin periodic box; the `z` extent matches one `x` element per `z` element.
    pub fn mesh(&self) -> Result<Mesh> {
        let hz = self.extent[0] / self.elements[0].max(1) as f64;
        Mesh::new(
            self.elements,
            [self.lower[0], self.lower[1], 0.0],
            [self.extent[0], self.extent[1], hz * self.elements[2] as f64],
        )
    }

    pub fn gas(&self) -> Result<GasModel> {
        GasModel::inviscid(self.gamma)
    }

    /// Time for the vortex to return to its starting point, if the advection
    /// velocity is commensurate with the box.
    pub fn period(&self) -> f64 {
        let tx = if self.u0 != 0.0 { self.extent[0] / self.u0.abs() } else { 0.0 };
        let ty = if self.v0 != 0.0 { self.extent[1] / self.v0.abs() } else { 0.0 };
        tx.max(ty)
    }
}

fn wrap(d: f64, len: f64) -> f64 {
    d - len * (d / len).round()
}

/// Closed-form state at `(x, y)` with the vortex centred at `c`.
fn vortex(cfg: &IcvConfig, c: [f64; 2], x: f64, y: f64) -> PrimitiveState {
    let dx = wrap(x - c[0], cfg.extent[0]);
    let dy = wrap(y - c[1], cfg.extent[1]);
    let r2 = dx * dx + dy * dy;
    let g = cfg.gamma;
    let amp = cfg.beta / (2.0 * PI) * (0.5 * (1.0 - r2)).exp();
    let t = 1.0 - (g - 1.0) * cfg.beta * cfg.beta / (8.0 * g * PI * PI) * (1.0 - r2).exp();
    PrimitiveState {
        rho: t.powf(1.0 / (g - 1.0)),
        u: cfg.u0 - amp * dy,
        v: cfg.v0 + amp * dx,
        w: 0.0,
        p: t.powf(g / (g - 1.0)),
    }
}

/// Initial condition at a point.
pub fn icv_primitive(cfg: &IcvConfig, x: [f64; 3]) -> PrimitiveState {
    vortex(cfg, cfg.center, x[0], x[1])
}

/// Exact solution at time `t`: the initial vortex carried by `(u0, v0)`.
pub fn icv_exact(cfg: &IcvConfig, t: f64) -> impl Fn([f64; 3]) -> PrimitiveState + '_ {
    let c = [cfg.center[0] + cfg.u0 * t, cfg.center[1] + cfg.v0 * t];
    move |x| vortex(cfg, c, x[0], x[1])
}

pub fn icv_init<T: Real>(cfg: &IcvConfig, scheme: StorageScheme) -> Result<SolutionField<T>> {
    cfg.validate()?;
    SolutionField::from_fn(cfg.mesh()?, cfg.order, scheme, &cfg.gas()?, |x| icv_primitive(cfg, x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn centre_and_far_field() {
        let cfg = IcvConfig::default();
        let q = icv_primitive(&cfg, [5.0, 5.0, 0.0]);
        assert_eq!((q.u, q.v), (1.0, 1.0));
        let by_hand = (1.0 - 0.4 * 25.0 * 1f64.exp() / (8.0 * 1.4 * PI * PI)).powf(2.5);
        assert!((q.rho - by_hand).abs() < 1e-15);
        assert!((q.rho - 0.4938).abs() < 5e-5);
        let far =
            icv_primitive(&IcvConfig { extent: [60.0, 60.0], center: [30.0, 30.0], ..cfg.clone() }, [0.5, 0.5, 0.0]);
        assert!((far.rho - 1.0).abs() < 1e-12 && (far.p - 1.0).abs() < 1e-12);
    }

    #[test]
    fn isentropic_relation_holds() {
        let cfg = IcvConfig::default();
        for &(x, y) in &[(4.2, 5.7), (6.1, 3.3), (0.5, 9.5)] {
            let q = icv_primitive(&cfg, [x, y, 0.0]);
            assert!((q.p - q.rho.powf(1.4)).abs() < 1e-14);
        }
    }

    #[test]
    fn exact_solution_is_periodic_advection() {
        let cfg = IcvConfig::default();
        let t0 = icv_exact(&cfg, 0.0);
        let t1 = icv_exact(&cfg, cfg.period());
        let half = icv_exact(&cfg, 0.5 * cfg.period());
        for &(x, y) in &[(4.2, 5.7), (6.1, 3.3), (0.5, 9.5), (9.99, 0.01)] {
            let a = t0([x, y, 0.0]);
            assert_eq!(a, icv_primitive(&cfg, [x, y, 0.0]));
            let b = t1([x, y, 0.0]);
            for (p, q) in a.to_array().iter().zip(b.to_array()) {
                assert!((p - q).abs() < 1e-12);
            }
            let c = half([(x + 5.0) % 10.0, (y + 5.0) % 10.0, 0.0]);
            for (p, q) in a.to_array().iter().zip(c.to_array()) {
                assert!((p - q).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn init_builds_thin_box() {
        let cfg = IcvConfig { elements: [4, 4, 1], order: 2, ..Default::default() };
        let f = icv_init::<f64>(&cfg, StorageScheme::D).unwrap();
        assert_eq!(f.mesh.extent[2], 2.5);
        assert_eq!(f.data.len(), 16 * 27 * 5);
        assert!(IcvConfig { beta: 0.0, ..cfg }.validate().is_err());
    }
}
