//! Classical four-stage Runge–Kutta time stepping with fixed `dt`.

use std::time::Instant;

use crate::cases::{DiagnosticsRow, DiagnosticsSeries};
use crate::error::{Error, Result, Site};
use crate::frcore::{SolutionField, StorageScheme};
use crate::gasmodel::{
    cons_to_mixed, cons_to_prim, mixed_to_cons, prim_to_cons, ConservedState, GasModel, MixedState, PrimitiveState,
};
use crate::real::Real;

/// Anything RK44 can advance: a state plus a rate of the same shape.
pub trait RkState: Clone {
    type Rate;

    fn zero_rate(&self) -> Self::Rate;

    /// `self += a * rate`.
    fn axpy(&mut self, a: f64, rate: &Self::Rate) -> Result<()>;
}

impl RkState for f64 {
    type Rate = f64;

    fn zero_rate(&self) -> f64 {
        0.0
    }

    fn axpy(&mut self, a: f64, rate: &f64) -> Result<()> {
        *self += a * rate;
        Ok(())
    }
}

impl RkState for Vec<f64> {
    type Rate = Vec<f64>;

    fn zero_rate(&self) -> Vec<f64> {
        vec![0.0; self.len()]
    }

    fn axpy(&mut self, a: f64, rate: &Vec<f64>) -> Result<()> {
        for (x, r) in self.iter_mut().zip(rate) {
            *x += a * r;
        }
        Ok(())
    }
}

/// The rate is the conserved-variable residual. Schemes storing conserved
/// variables update in place; the others convert each node to conserved
/// form, update, and convert back.
impl<T: Real> RkState for SolutionField<T> {
    type Rate = Vec<T>;

    fn zero_rate(&self) -> Vec<T> {
        vec![T::zero(); self.data.len()]
    }

    fn axpy(&mut self, a: f64, rate: &Vec<T>) -> Result<()> {
        use rayon::prelude::*;
        let a = T::of(a);
        let scheme = self.scheme;
        if matches!(scheme, StorageScheme::B | StorageScheme::C) {
            self.data.par_iter_mut().zip(rate.par_iter()).for_each(|(x, r)| *x = *x + a * *r);
            return Ok(());
        }
        let npe = self.nodes_per_element();
        let gas = self.gas_for_update();
        self.data.par_chunks_mut(5).zip(rate.par_chunks(5)).enumerate().try_for_each(|(i, (x, r))| {
            if r.iter().all(|v| *v == T::zero()) {
                return Ok(());
            }
            let s = [x[0], x[1], x[2], x[3], x[4]];
            let mut c = match scheme {
                StorageScheme::A => prim_to_cons(&PrimitiveState::from_array(s), &gas).to_array(),
                _ => mixed_to_cons(&MixedState::from_array(s), &gas)?.to_array(),
            };
            for k in 0..5 {
                c[k] = c[k] + a * r[k];
            }
            let c = ConservedState::from_array(c);
            let back = match scheme {
                StorageScheme::A => cons_to_prim(&c, &gas).map(|q| q.to_array()),
                _ => cons_to_mixed(&c, &gas).map(|m| m.to_array()),
            }
            .map_err(|e| e.at(Site::Node { element: i / npe, node: i % npe }, scheme))?;
            x.copy_from_slice(&back);
            Ok(())
        })
    }
}

/// Scratch space for RK44 steps, reused across steps.
pub struct Rk44<S: RkState> {
    stage: S,
    acc: S,
    k: S::Rate,
}

impl<S: RkState> Rk44<S> {
    pub fn new(like: &S) -> Self {
        Rk44 { stage: like.clone(), acc: like.clone(), k: like.zero_rate() }
    }

    /// Advance `state` by `dt` in place.
    pub fn step<F>(&mut self, state: &mut S, dt: f64, mut residual: F) -> Result<()>
    where
        F: FnMut(&S, &mut S::Rate) -> Result<()>,
    {
        const C: [f64; 3] = [0.5, 0.5, 1.0];
        const B: [f64; 4] = [1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0];
        self.acc.clone_from(state);
        residual(state, &mut self.k)?;
        self.acc.axpy(B[0] * dt, &self.k)?;
        for s in 0..3 {
            self.stage.clone_from(state);
            self.stage.axpy(C[s] * dt, &self.k)?;
            residual(&self.stage, &mut self.k)?;
            self.acc.axpy(B[s + 1] * dt, &self.k)?;
        }
        std::mem::swap(state, &mut self.acc);
        Ok(())
    }
}

/// One classical RK4 step, allocating its own scratch.
pub fn rk44_step<S, F>(state: &mut S, dt: f64, residual: F) -> Result<()>
where
    S: RkState,
    F: FnMut(&S, &mut S::Rate) -> Result<()>,
{
    Rk44::new(state).step(state, dt, residual)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MarchConfig {
    pub dt: f64,
    pub t_end: f64,
    pub sample_every: usize,
}

impl MarchConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidParameter { name: "dt", reason: format!("{} must be positive", self.dt) });
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "t_end",
                reason: format!("{} must be non-negative", self.t_end),
            });
        }
        if self.sample_every == 0 {
            return Err(Error::InvalidParameter { name: "sample_every", reason: "must be at least 1".into() });
        }
        Ok(())
    }

    /// Step count and the step size that lands exactly on `t_end`.
    pub fn schedule(&self) -> (usize, f64) {
        if self.t_end == 0.0 {
            return (0, self.dt);
        }
        let n = (self.t_end / self.dt * (1.0 - 1e-12)).ceil().max(1.0) as usize;
        (n, self.t_end / n as f64)
    }
}

/// Quantities sampled at one instant.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Sample {
    pub ek: f64,
    pub eps2: f64,
    pub err_rho: Option<f64>,
}

/// Advance `state` to `t_end`, sampling `diagnostics` at step 0 and every
/// `sample_every` steps.
///
/// A non-physical state during a step or a sample stops the run; the
/// returned series is then flagged as diverged and `state` holds the last
/// good solution.
pub fn march<S, F, D>(
    state: &mut S,
    config: &MarchConfig,
    mut residual: F,
    mut diagnostics: D,
) -> Result<DiagnosticsSeries>
where
    S: RkState,
    F: FnMut(&S, &mut S::Rate) -> Result<()>,
    D: FnMut(&S, f64) -> Result<Sample>,
{
    config.validate()?;
    let (steps, dt) = config.schedule();
    let mut series = DiagnosticsSeries::default();
    let mut rk = Rk44::new(state);
    let mut since_sample: Vec<f64> = Vec::new();

    let record = |series: &mut DiagnosticsSeries, s: Sample, t: f64, window: &[f64]| {
        let step_ms = if window.is_empty() { 0.0 } else { window.iter().sum::<f64>() / window.len() as f64 };
        series.rows.push(DiagnosticsRow { t, ek: s.ek, eps1: 0.0, eps2: s.eps2, err_rho: s.err_rho, step_ms });
    };

    match diagnostics(state, 0.0) {
        Ok(s) => record(&mut series, s, 0.0, &[]),
        Err(e) if e.is_nonphysical() => {
            series.mark_diverged(Error::Diverged { step: 0, time: 0.0, source: Box::new(e) });
            return Ok(series);
        }
        Err(e) => return Err(e),
    }

    let mut last_good = state.clone();
    for step in 1..=steps {
        let t = if step == steps { config.t_end } else { step as f64 * dt };
        let start = Instant::now();
        let outcome = rk.step(state, dt, &mut residual);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        if let Err(e) = outcome {
            if !e.is_nonphysical() {
                return Err(e);
            }
            *state = last_good;
            series.mark_diverged(Error::Diverged { step, time: t, source: Box::new(e) });
            series.fill_eps1();
            return Ok(series);
        }
        series.step_ms.push(ms);
        since_sample.push(ms);
        if step % config.sample_every == 0 {
            match diagnostics(state, t) {
                Ok(s) => record(&mut series, s, t, &since_sample),
                Err(e) if e.is_nonphysical() => {
                    series.mark_diverged(Error::Diverged { step, time: t, source: Box::new(e) });
                    series.fill_eps1();
                    return Ok(series);
                }
                Err(e) => return Err(e),
            }
            since_sample.clear();
        }
        last_good.clone_from(state);
    }
    series.fill_eps1();
    Ok(series)
}

/// `cfl · h_min / ((2p + 1) Σ_d (|u_d|_max + a_max))`, the directional
/// speeds summed over the three axes.
pub fn stable_dt<T: Real>(field: &SolutionField<T>, gas: &GasModel<T>, cfl: f64) -> Result<f64> {
    let g = GasModel {
        gamma: gas.gamma.to_f64_lossless(),
        r: gas.r.to_f64_lossless(),
        cv: gas.cv.to_f64_lossless(),
        mu: gas.mu.to_f64_lossless(),
        pr: gas.pr.to_f64_lossless(),
        kappa: gas.kappa.to_f64_lossless(),
    };
    let (mut umax, mut amax) = ([0.0_f64; 3], 0.0_f64);
    for q in field.primitives_f64(gas)? {
        for (m, v) in umax.iter_mut().zip(q.velocity()) {
            *m = m.max(v.abs());
        }
        amax = amax.max(q.sound_speed(&g));
    }
    let speed: f64 = umax.iter().map(|u| u + amax).sum();
    let p = field.order as f64;
    Ok(cfl * field.mesh.min_h() / ((2.0 * p + 1.0) * speed))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_residual_leaves_state_bit_exact() {
        let mut u = vec![1.25, -3.5e-7, 42.0];
        let before = u.clone();
        rk44_step(&mut u, 0.3, |_, k: &mut Vec<f64>| {
            k.iter_mut().for_each(|x| *x = 0.0);
            Ok(())
        })
        .unwrap();
        assert_eq!(u, before);
    }

    #[test]
    fn decay_one_step() {
        let mut u = 1.0;
        rk44_step(&mut u, 0.1, |u: &f64, k: &mut f64| {
            *k = -u;
            Ok(())
        })
        .unwrap();
        // 1 - h + h²/2 - h³/6 + h⁴/24 at h = 0.1
        let by_hand = 1.0 - 0.1 + 0.005 - 0.001 / 6.0 + 0.0001 / 24.0;
        assert!((u - by_hand).abs() < 1e-16);
        assert!((u - 0.9048375).abs() < 1e-7);
    }

    #[test]
    fn schedule_lands_on_t_end() {
        let c = MarchConfig { dt: 0.3, t_end: 1.0, sample_every: 1 };
        let (n, dt) = c.schedule();
        assert_eq!(n, 4);
        assert!((n as f64 * dt - 1.0).abs() < 1e-15);
        let c = MarchConfig { dt: 0.25, t_end: 1.0, sample_every: 1 };
        assert_eq!(c.schedule().0, 4);
        assert_eq!(MarchConfig { dt: 0.1, t_end: 0.0, sample_every: 1 }.schedule().0, 0);
    }

    #[test]
    fn invalid_config_rejected() {
        assert!(MarchConfig { dt: 0.0, t_end: 1.0, sample_every: 1 }.validate().is_err());
        assert!(MarchConfig { dt: 0.1, t_end: -1.0, sample_every: 1 }.validate().is_err());
        assert!(MarchConfig { dt: 0.1, t_end: 1.0, sample_every: 0 }.validate().is_err());
    }

    fn decay_diag(u: &f64, _t: f64) -> Result<Sample> {
        Ok(Sample { ek: 0.5 * u * u, eps2: 0.0, err_rho: None })
    }

    #[test]
    fn zero_horizon_gives_single_sample() {
        let mut u = 1.0;
        let c = MarchConfig { dt: 0.1, t_end: 0.0, sample_every: 3 };
        let s = march(
            &mut u,
            &c,
            |u: &f64, k: &mut f64| {
                *k = -u;
                Ok(())
            },
            decay_diag,
        )
        .unwrap();
        assert_eq!(s.rows.len(), 1);
        assert_eq!(s.rows[0].t, 0.0);
        assert!(!s.diverged);
    }

    #[test]
    fn sample_count_bookkeeping() {
        let mut u = 1.0;
        let c = MarchConfig { dt: 0.01, t_end: 1.0, sample_every: 7 };
        let s = march(
            &mut u,
            &c,
            |u: &f64, k: &mut f64| {
                *k = -u;
                Ok(())
            },
            decay_diag,
        )
        .unwrap();
        assert_eq!(s.step_ms.len(), 100);
        assert_eq!(s.rows.len(), 100 / 7 + 1);
        assert!(s.rows.windows(2).all(|w| w[1].t > w[0].t));
        assert!((u - (-1.0f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn nonphysical_stage_flags_divergence() {
        let mut u = 1.0;
        let c = MarchConfig { dt: 0.1, t_end: 1.0, sample_every: 1 };
        let s = march(
            &mut u,
            &c,
            |u: &f64, k: &mut f64| {
                if *u > 1.3 {
                    return Err(Error::nonphysical(-1.0, 1.0));
                }
                *k = 1.0;
                Ok(())
            },
            decay_diag,
        )
        .unwrap();
        assert!(s.diverged);
        assert!(s.rows.len() >= 2);
        assert!(u <= 1.3 + 1e-12);
        assert!(s.divergence.as_deref().unwrap().contains("diverged at step"));
    }

    #[test]
    fn other_errors_propagate() {
        let mut u = 1.0;
        let c = MarchConfig { dt: 0.1, t_end: 1.0, sample_every: 1 };
        let r = march(&mut u, &c, |_: &f64, _: &mut f64| Err(Error::Config("boom".into())), decay_diag);
        assert!(r.is_err());
    }

    #[test]
    fn fourth_order_in_time() {
        // u' = u cos t, exact residual, no spatial error.
        let err = |n: usize| {
            let dt = 4.0 / n as f64;
            let mut u = vec![1.0, 0.0];
            let mut rk = Rk44::new(&u);
            for _ in 0..n {
                rk.step(&mut u, dt, |s: &Vec<f64>, k: &mut Vec<f64>| {
                    k[0] = s[0] * s[1].cos();
                    k[1] = 1.0;
                    Ok(())
                })
                .unwrap();
            }
            (u[0] - 4f64.sin().exp()).abs()
        };
        let order = (err(80) / err(160)).log2();
        assert!((order - 4.0).abs() < 0.2, "{order}");
    }
}
