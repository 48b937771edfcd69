//! Calorically perfect gas: state conversions, inviscid and viscous fluxes,
//! and the two ways of building the gradients the viscous flux needs.
//!
//! Every function here is pointwise. The storage schemes only differ once
//! these are combined with polynomial interpolation in `frcore`.

use crate::error::{Error, Result};
use crate::real::Real;

/// Gas constants. `R = c_v (γ - 1)` and `κ = μ γ R / (Pr (γ - 1))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GasModel<T = f64> {
    pub gamma: T,
    pub r: T,
    pub cv: T,
    pub mu: T,
    pub pr: T,
    pub kappa: T,
}

impl GasModel<f64> {
    pub fn new(gamma: f64, r: f64, mu: f64, pr: f64) -> Result<Self> {
        if !(gamma > 1.0) {
            return Err(Error::InvalidParameter { name: "gamma", reason: format!("{gamma} must exceed 1") });
        }
        if !(r > 0.0) {
            return Err(Error::InvalidParameter { name: "R", reason: format!("{r} must be positive") });
        }
        if !(mu >= 0.0) {
            return Err(Error::InvalidParameter { name: "mu", reason: format!("{mu} must be non-negative") });
        }
        if !(pr > 0.0) {
            return Err(Error::InvalidParameter { name: "Pr", reason: format!("{pr} must be positive") });
        }
        Ok(GasModel { gamma, r, cv: r / (gamma - 1.0), mu, pr, kappa: mu * gamma * r / (pr * (gamma - 1.0)) })
    }

    /// Inviscid air-like gas with `R = 1`.
    pub fn inviscid(gamma: f64) -> Result<Self> {
        Self::new(gamma, 1.0, 0.0, 0.71)
    }

    pub fn cast<T: Real>(&self) -> GasModel<T> {
        GasModel {
            gamma: T::of(self.gamma),
            r: T::of(self.r),
            cv: T::of(self.cv),
            mu: T::of(self.mu),
            pr: T::of(self.pr),
            kappa: T::of(self.kappa),
        }
    }
}

/// `(ρ, u, v, w, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct PrimitiveState<T = f64> {
    pub rho: T,
    pub u: T,
    pub v: T,
    pub w: T,
    pub p: T,
}

/// `(ρ, ρu, ρv, ρw, E)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ConservedState<T = f64> {
    pub rho: T,
    pub rho_u: T,
    pub rho_v: T,
    pub rho_w: T,
    pub energy: T,
}

/// Conserved momenta with pressure in place of energy: `(ρ, ρu, ρv, ρw, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct MixedState<T = f64> {
    pub rho: T,
    pub rho_u: T,
    pub rho_v: T,
    pub rho_w: T,
    pub p: T,
}

macro_rules! five_component {
    ($ty:ident, $a:ident, $b:ident, $c:ident, $d:ident, $e:ident) => {
        impl<T: Copy> $ty<T> {
            #[inline(always)]
            pub fn from_array(q: [T; 5]) -> Self {
                $ty { $a: q[0], $b: q[1], $c: q[2], $d: q[3], $e: q[4] }
            }

            #[inline(always)]
            pub fn to_array(self) -> [T; 5] {
                [self.$a, self.$b, self.$c, self.$d, self.$e]
            }
        }
    };
}

five_component!(PrimitiveState, rho, u, v, w, p);
five_component!(ConservedState, rho, rho_u, rho_v, rho_w, energy);
five_component!(MixedState, rho, rho_u, rho_v, rho_w, p);

impl<T: Real> PrimitiveState<T> {
    #[inline(always)]
    pub fn velocity(&self) -> [T; 3] {
        [self.u, self.v, self.w]
    }

    pub fn temperature(&self, gas: &GasModel<T>) -> T {
        self.p / (self.rho * gas.r)
    }

    pub fn sound_speed(&self, gas: &GasModel<T>) -> T {
        (gas.gamma * self.p / self.rho).sqrt()
    }

    pub fn cast<U: Real>(&self) -> PrimitiveState<U> {
        PrimitiveState::from_array(self.to_array().map(|x| U::of(x.to_f64_lossless())))
    }
}

impl<T: Real> ConservedState<T> {
    #[inline(always)]
    pub fn momentum(&self) -> [T; 3] {
        [self.rho_u, self.rho_v, self.rho_w]
    }
}

impl<T: Real> MixedState<T> {
    #[inline(always)]
    pub fn momentum(&self) -> [T; 3] {
        [self.rho_u, self.rho_v, self.rho_w]
    }
}

#[inline(always)]
fn physical<T: Real>(rho: T, p: T) -> Result<()> {
    // NaN fails both comparisons, so blown-up states are caught here too.
    if rho > T::zero() && p > T::zero() {
        Ok(())
    } else {
        Err(Error::nonphysical(rho.to_f64_lossless(), p.to_f64_lossless()))
    }
}

#[inline(always)]
fn half<T: Real>() -> T {
    T::of(0.5)
}

#[inline(always)]
fn dot3<T: Real>(a: [T; 3], b: [T; 3]) -> T {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

/// `E = p/(γ-1) + ½ρ|V|²`, momenta `ρV`.
#[inline]
pub fn prim_to_cons<T: Real>(q: &PrimitiveState<T>, gas: &GasModel<T>) -> ConservedState<T> {
    let ke = half::<T>() * q.rho * dot3(q.velocity(), q.velocity());
    ConservedState {
        rho: q.rho,
        rho_u: q.rho * q.u,
        rho_v: q.rho * q.v,
        rho_w: q.rho * q.w,
        energy: q.p / (gas.gamma - T::one()) + ke,
    }
}

#[inline]
pub fn cons_to_prim<T: Real>(q: &ConservedState<T>, gas: &GasModel<T>) -> Result<PrimitiveState<T>> {
    if !(q.rho > T::zero()) {
        return Err(Error::nonphysical(q.rho.to_f64_lossless(), f64::NAN));
    }
    let inv = T::one() / q.rho;
    let (u, v, w) = (q.rho_u * inv, q.rho_v * inv, q.rho_w * inv);
    let p = (gas.gamma - T::one()) * (q.energy - half::<T>() * (q.rho_u * u + q.rho_v * v + q.rho_w * w));
    physical(q.rho, p)?;
    Ok(PrimitiveState { rho: q.rho, u, v, w, p })
}

/// `E = p/(γ-1) + ½|ρV|²/ρ`.
#[inline]
pub fn mixed_to_cons<T: Real>(q: &MixedState<T>, gas: &GasModel<T>) -> Result<ConservedState<T>> {
    physical(q.rho, q.p)?;
    let m = q.momentum();
    Ok(ConservedState {
        rho: q.rho,
        rho_u: q.rho_u,
        rho_v: q.rho_v,
        rho_w: q.rho_w,
        energy: q.p / (gas.gamma - T::one()) + half::<T>() * dot3(m, m) / q.rho,
    })
}

#[inline]
pub fn cons_to_mixed<T: Real>(q: &ConservedState<T>, gas: &GasModel<T>) -> Result<MixedState<T>> {
    if !(q.rho > T::zero()) {
        return Err(Error::nonphysical(q.rho.to_f64_lossless(), f64::NAN));
    }
    let m = q.momentum();
    let p = (gas.gamma - T::one()) * (q.energy - half::<T>() * dot3(m, m) / q.rho);
    physical(q.rho, p)?;
    Ok(MixedState { rho: q.rho, rho_u: q.rho_u, rho_v: q.rho_v, rho_w: q.rho_w, p })
}

#[inline]
pub fn mixed_to_prim<T: Real>(q: &MixedState<T>) -> Result<PrimitiveState<T>> {
    physical(q.rho, q.p)?;
    let inv = T::one() / q.rho;
    Ok(PrimitiveState { rho: q.rho, u: q.rho_u * inv, v: q.rho_v * inv, w: q.rho_w * inv, p: q.p })
}

#[inline]
pub fn prim_to_mixed<T: Real>(q: &PrimitiveState<T>) -> MixedState<T> {
    MixedState { rho: q.rho, rho_u: q.rho * q.u, rho_v: q.rho * q.v, rho_w: q.rho * q.w, p: q.p }
}

/// Inviscid flux columns `(f, g, h)`.
pub type FluxColumns<T> = [[T; 5]; 3];

/// Flux along `axis` from primitives: energy flux `u_n (γp/(γ-1) + ½ρ|V|²)`.
#[inline]
pub fn inviscid_flux_prim_axis<T: Real>(q: &PrimitiveState<T>, axis: usize, gas: &GasModel<T>) -> [T; 5] {
    let vel = q.velocity();
    let un = vel[axis];
    let mass = q.rho * un;
    let mut f = [
        mass,
        mass * vel[0],
        mass * vel[1],
        mass * vel[2],
        un * (gas.gamma * q.p / (gas.gamma - T::one()) + half::<T>() * q.rho * dot3(vel, vel)),
    ];
    f[1 + axis] = f[1 + axis] + q.p;
    f
}

/// Flux along `axis` from conserved variables, in the division-based form:
/// momentum `m_i m_n/ρ + (γ-1)(E - ½|m|²/ρ)δ`, energy `(m_n/ρ)(γE - ½(γ-1)|m|²/ρ)`.
#[inline]
pub fn inviscid_flux_cons_axis<T: Real>(q: &ConservedState<T>, axis: usize, gas: &GasModel<T>) -> Result<[T; 5]> {
    if !(q.rho > T::zero()) {
        return Err(Error::nonphysical(q.rho.to_f64_lossless(), f64::NAN));
    }
    let m = q.momentum();
    let mn = m[axis];
    let ke2 = dot3(m, m) / q.rho; // |m|²/ρ
    let gm1 = gas.gamma - T::one();
    let mut f = [
        mn,
        m[0] * mn / q.rho,
        m[1] * mn / q.rho,
        m[2] * mn / q.rho,
        mn / q.rho * (gas.gamma * q.energy - half::<T>() * gm1 * ke2),
    ];
    f[1 + axis] = f[1 + axis] + gm1 * (q.energy - half::<T>() * ke2);
    Ok(f)
}

/// Flux along `axis` from the mixed set: momentum `m_i m_n/ρ + pδ`, energy
/// `(m_n/ρ)(γp/(γ-1) + ½|m|²/ρ)`.
#[inline]
pub fn inviscid_flux_mixed_axis<T: Real>(q: &MixedState<T>, axis: usize, gas: &GasModel<T>) -> Result<[T; 5]> {
    if !(q.rho > T::zero()) {
        return Err(Error::nonphysical(q.rho.to_f64_lossless(), q.p.to_f64_lossless()));
    }
    let m = q.momentum();
    let mn = m[axis];
    let ke2 = dot3(m, m) / q.rho;
    let mut f = [
        mn,
        m[0] * mn / q.rho,
        m[1] * mn / q.rho,
        m[2] * mn / q.rho,
        mn / q.rho * (gas.gamma * q.p / (gas.gamma - T::one()) + half::<T>() * ke2),
    ];
    f[1 + axis] = f[1 + axis] + q.p;
    Ok(f)
}

pub fn inviscid_flux_prim<T: Real>(q: &PrimitiveState<T>, gas: &GasModel<T>) -> FluxColumns<T> {
    [0, 1, 2].map(|a| inviscid_flux_prim_axis(q, a, gas))
}

pub fn inviscid_flux_cons<T: Real>(q: &ConservedState<T>, gas: &GasModel<T>) -> Result<FluxColumns<T>> {
    Ok([inviscid_flux_cons_axis(q, 0, gas)?, inviscid_flux_cons_axis(q, 1, gas)?, inviscid_flux_cons_axis(q, 2, gas)?])
}

pub fn inviscid_flux_mixed<T: Real>(q: &MixedState<T>, gas: &GasModel<T>) -> Result<FluxColumns<T>> {
    Ok([
        inviscid_flux_mixed_axis(q, 0, gas)?,
        inviscid_flux_mixed_axis(q, 1, gas)?,
        inviscid_flux_mixed_axis(q, 2, gas)?,
    ])
}

/// Physical-space gradients of `(ρ, u, v, w, T)`: `rows[var][direction]`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct GradientBlock<T = f64> {
    pub rows: [[T; 3]; 5],
}

impl<T: Real> GradientBlock<T> {
    pub fn zero() -> Self {
        GradientBlock { rows: [[T::zero(); 3]; 5] }
    }

    /// Velocity gradient `∂u_i/∂x_j`.
    #[inline(always)]
    pub fn velocity_gradient(&self) -> [[T; 3]; 3] {
        [self.rows[1], self.rows[2], self.rows[3]]
    }

    /// `ω = ∇ × V`.
    pub fn vorticity(&self) -> [T; 3] {
        let g = self.velocity_gradient();
        [g[2][1] - g[1][2], g[0][2] - g[2][0], g[1][0] - g[0][1]]
    }

    pub fn is_finite(&self) -> bool {
        self.rows.iter().flatten().all(|x| x.is_finite())
    }
}

/// Viscous stress `τ/μ` for zero bulk viscosity:
/// `τ_ij = ∂u_i/∂x_j + ∂u_j/∂x_i - ⅔ δ_ij ∇·V`.
#[inline]
pub fn stress_over_mu<T: Real>(grads: &GradientBlock<T>) -> [[T; 3]; 3] {
    let g = grads.velocity_gradient();
    let two_thirds_div = T::of(2.0 / 3.0) * (g[0][0] + g[1][1] + g[2][2]);
    let mut tau = [[T::zero(); 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            tau[i][j] = g[i][j] + g[j][i];
        }
        tau[i][i] = tau[i][i] - two_thirds_div;
    }
    tau
}

/// Viscous flux along `axis`: `μ(0, τ_n•, V·τ_n• + (κ/μ) T_n)`.
#[inline]
pub fn viscous_flux_axis<T: Real>(
    q: &PrimitiveState<T>,
    grads: &GradientBlock<T>,
    axis: usize,
    gas: &GasModel<T>,
) -> [T; 5] {
    let tau = stress_over_mu(grads);
    let t = tau[axis];
    let vel = q.velocity();
    [T::zero(), gas.mu * t[0], gas.mu * t[1], gas.mu * t[2], gas.mu * dot3(vel, t) + gas.kappa * grads.rows[4][axis]]
}

pub fn viscous_flux<T: Real>(q: &PrimitiveState<T>, grads: &GradientBlock<T>, gas: &GasModel<T>) -> FluxColumns<T> {
    [0, 1, 2].map(|a| viscous_flux_axis(q, grads, a, gas))
}

/// Pathway B, pointwise: given primitives and the gradients of
/// `(ρ, u, v, w, p)`, return the block with `∇T = (∇p/ρ - p∇ρ/ρ²)/R`.
#[inline]
pub fn gradient_from_primitive<T: Real>(
    q: &PrimitiveState<T>,
    dprim: &[[T; 3]; 5],
    gas: &GasModel<T>,
) -> Result<GradientBlock<T>> {
    physical(q.rho, q.p)?;
    let inv_rho = T::one() / q.rho;
    let inv_r = T::one() / gas.r;
    let mut rows = [dprim[0], dprim[1], dprim[2], dprim[3], [T::zero(); 3]];
    for d in 0..3 {
        rows[4][d] = inv_r * inv_rho * (dprim[4][d] - q.p * inv_rho * dprim[0][d]);
    }
    Ok(GradientBlock { rows })
}

/// Pathway C, pointwise: product rule applied to the gradients of
/// `(ρ, ρu, ρv, ρw, E)`:
/// `u_x = ((ρu)_x - u ρ_x)/ρ`,
/// `T_x = [(E_x - (E/ρ) ρ_x)/ρ - V·V_x] / c_v`.
#[inline]
pub fn gradient_from_conserved<T: Real>(
    q: &ConservedState<T>,
    dcons: &[[T; 3]; 5],
    gas: &GasModel<T>,
) -> Result<GradientBlock<T>> {
    if !(q.rho > T::zero()) {
        return Err(Error::nonphysical(q.rho.to_f64_lossless(), f64::NAN));
    }
    let inv_rho = T::one() / q.rho;
    let vel = [q.rho_u * inv_rho, q.rho_v * inv_rho, q.rho_w * inv_rho];
    let e_over_rho = q.energy * inv_rho;
    let inv_cv = T::one() / gas.cv;
    let mut rows = [dcons[0], [T::zero(); 3], [T::zero(); 3], [T::zero(); 3], [T::zero(); 3]];
    for d in 0..3 {
        let drho = dcons[0][d];
        for i in 0..3 {
            rows[1 + i][d] = (dcons[1 + i][d] - vel[i] * drho) * inv_rho;
        }
        let vdv = vel[0] * rows[1][d] + vel[1] * rows[2][d] + vel[2] * rows[3][d];
        rows[4][d] = ((dcons[4][d] - e_over_rho * drho) * inv_rho - vdv) * inv_cv;
    }
    Ok(GradientBlock { rows })
}

/// Pathway B over nodal data: differentiate the primitives, then form `∇T`.
///
/// `differentiate` maps nodal `(ρ, u, v, w, p)` values to nodal gradients
/// `[var][direction]`.
pub fn grad_path_b<T: Real>(
    prims: &[PrimitiveState<T>],
    differentiate: impl FnOnce(&[[T; 5]]) -> Vec<[[T; 3]; 5]>,
    gas: &GasModel<T>,
) -> Result<Vec<GradientBlock<T>>> {
    let nodal: Vec<[T; 5]> = prims.iter().map(|q| q.to_array()).collect();
    let grads = differentiate(&nodal);
    prims.iter().zip(&grads).map(|(q, g)| gradient_from_primitive(q, g, gas)).collect()
}

/// Pathway C over nodal data: the caller supplies gradients of the conserved
/// variables; the product rule converts them.
pub fn grad_path_c<T: Real>(
    cons: &[ConservedState<T>],
    cons_grads: &[[[T; 3]; 5]],
    gas: &GasModel<T>,
) -> Result<Vec<GradientBlock<T>>> {
    if cons.len() != cons_grads.len() {
        return Err(Error::LengthMismatch { what: "cons_grads", got: cons_grads.len(), expected: cons.len() });
    }
    cons.iter().zip(cons_grads).map(|(q, g)| gradient_from_conserved(q, g, gas)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gas() -> GasModel {
        GasModel::new(1.4, 1.0, 0.01, 0.71).unwrap()
    }

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1.0)
    }

    fn prim_strategy() -> impl Strategy<Value = PrimitiveState> {
        (0.1f64..5.0, -3.0f64..3.0, -3.0f64..3.0, -3.0f64..3.0, 0.1f64..5.0)
            .prop_map(|(rho, u, v, w, p)| PrimitiveState { rho, u, v, w, p })
    }

    #[test]
    fn gas_constants_consistent() {
        let g = GasModel::new(1.4, 287.0, 1.8e-5, 0.71).unwrap();
        assert!((g.r - g.cv * (g.gamma - 1.0)).abs() < 1e-12);
        let pr = g.mu * g.gamma * g.r / (g.kappa * (g.gamma - 1.0));
        assert!((pr - 0.71).abs() < 1e-14);
        assert!(GasModel::new(1.0, 1.0, 0.0, 0.7).is_err());
        assert!(GasModel::new(1.4, 1.0, -1.0, 0.7).is_err());
        assert!(GasModel::new(1.4, 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn prim_to_cons_examples() {
        let g = gas();
        let q = PrimitiveState { rho: 1.0, u: 2.0, v: 0.0, w: 0.0, p: 1.0 };
        let c = prim_to_cons(&q, &g);
        assert_eq!(c.to_array(), [1.0, 2.0, 0.0, 0.0, 4.5]);
        let q = PrimitiveState { rho: 1.0, u: 0.0, v: 0.0, w: 0.0, p: 1.0 };
        assert!((prim_to_cons(&q, &g).energy - 2.5).abs() < 1e-15);
    }

    #[test]
    fn cons_to_prim_examples() {
        let g = gas();
        let c = ConservedState::from_array([1.0, 2.0, 0.0, 0.0, 4.5]);
        let q = cons_to_prim(&c, &g).unwrap();
        assert_eq!((q.rho, q.u), (1.0, 2.0));
        assert!((q.p - 1.0).abs() < 1e-15);
        let c = ConservedState::from_array([1.0, 0.0, 0.0, 0.0, 2.5]);
        assert!((cons_to_prim(&c, &g).unwrap().p - 1.0).abs() < 1e-15);
        let bad = ConservedState::from_array([-0.1, 0.0, 0.0, 0.0, 2.5]);
        assert!(cons_to_prim(&bad, &g).unwrap_err().is_nonphysical());
        let cold = ConservedState::from_array([1.0, 3.0, 0.0, 0.0, 1.0]);
        assert!(cons_to_prim(&cold, &g).is_err());
    }

    #[test]
    fn mixed_examples() {
        let g = gas();
        let m = MixedState { rho: 1.0, rho_u: 2.0, rho_v: 0.0, rho_w: 0.0, p: 1.0 };
        assert!((mixed_to_cons(&m, &g).unwrap().energy - 4.5).abs() < 1e-15);
        let bad = MixedState { rho: 0.0, ..m };
        assert!(mixed_to_cons(&bad, &g).is_err());
    }

    #[test]
    fn flux_examples() {
        let g = gas();
        let q = PrimitiveState { rho: 1.0, u: 2.0, v: 0.0, w: 0.0, p: 1.0 };
        assert_eq!(inviscid_flux_prim(&q, &g)[0], [2.0, 5.0, 0.0, 0.0, 11.0]);
        let c = ConservedState::from_array([1.0, 2.0, 0.0, 0.0, 4.5]);
        let f = inviscid_flux_cons(&c, &g).unwrap()[0];
        for (a, b) in f.iter().zip([2.0, 5.0, 0.0, 0.0, 11.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let m = MixedState { rho: 1.0, rho_u: 2.0, rho_v: 0.0, rho_w: 0.0, p: 1.0 };
        let f = inviscid_flux_mixed(&m, &g).unwrap()[0];
        for (a, b) in f.iter().zip([2.0, 5.0, 0.0, 0.0, 11.0]) {
            assert!((a - b).abs() < 1e-14);
        }
        let rest = PrimitiveState { rho: 1.3, u: 0.0, v: 0.0, w: 0.0, p: 0.8 };
        assert_eq!(inviscid_flux_prim(&rest, &g)[0], [0.0, 0.8, 0.0, 0.0, 0.0]);
        let c = ConservedState::from_array([1.0, 0.0, 0.0, 0.0, 2.5]);
        let f = inviscid_flux_cons(&c, &g).unwrap()[0];
        assert!((f[1] - 1.0).abs() < 1e-15 && f[0] == 0.0 && f[4] == 0.0);
        let m0 = MixedState { rho: 2.0, rho_u: 0.0, rho_v: 0.0, rho_w: 0.0, p: 0.6 };
        assert_eq!(inviscid_flux_mixed(&m0, &g).unwrap()[0], [0.0, 0.6, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn flux_routes_agree_on_random_states() {
        use rand::{Rng, SeedableRng};
        let g = gas();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let mut worst = 0.0_f64;
        for _ in 0..1000 {
            let q = PrimitiveState {
                rho: rng.random_range(0.1..5.0),
                u: rng.random_range(-3.0..3.0),
                v: rng.random_range(-3.0..3.0),
                w: rng.random_range(-3.0..3.0),
                p: rng.random_range(0.1..5.0),
            };
            let fp = inviscid_flux_prim(&q, &g);
            let fc = inviscid_flux_cons(&prim_to_cons(&q, &g), &g).unwrap();
            let fm = inviscid_flux_mixed(&prim_to_mixed(&q), &g).unwrap();
            for a in 0..3 {
                let scale = fp[a].iter().fold(0.0_f64, |m, x| m.max(x.abs()));
                for k in 0..5 {
                    worst = worst.max((fc[a][k] - fp[a][k]).abs() / scale);
                    worst = worst.max((fm[a][k] - fp[a][k]).abs() / scale);
                }
            }
        }
        assert!(worst <= 1e-12, "{worst}");
    }

    proptest! {
        #[test]
        fn conversions_round_trip(q in prim_strategy()) {
            let g = gas();
            let back = cons_to_prim(&prim_to_cons(&q, &g), &g).unwrap();
            for (a, b) in back.to_array().iter().zip(q.to_array()) {
                prop_assert!(rel(*a, b) < 1e-14);
            }
            let c = prim_to_cons(&q, &g);
            let c2 = mixed_to_cons(&cons_to_mixed(&c, &g).unwrap(), &g).unwrap();
            for (a, b) in c2.to_array().iter().zip(c.to_array()) {
                prop_assert!(rel(*a, b) < 1e-14);
            }
            let q2 = mixed_to_prim(&prim_to_mixed(&q)).unwrap();
            for (a, b) in q2.to_array().iter().zip(q.to_array()) {
                prop_assert!(rel(*a, b) < 1e-14);
            }
        }

        #[test]
        fn stress_is_traceless(g in proptest::array::uniform15(-10.0f64..10.0)) {
            let mut rows = [[0.0; 3]; 5];
            for (i, v) in g.iter().enumerate() {
                rows[i / 3][i % 3] = *v;
            }
            let tau = stress_over_mu(&GradientBlock { rows });
            prop_assert!((tau[0][0] + tau[1][1] + tau[2][2]).abs() < 1e-12);
            prop_assert!((tau[0][1] - tau[1][0]).abs() < 1e-15);
        }
    }

    #[test]
    fn viscous_flux_simple_cases() {
        let g = gas();
        let q = PrimitiveState { rho: 1.0, u: 0.3, v: -0.2, w: 0.1, p: 1.0 };
        let zero = viscous_flux(&q, &GradientBlock::zero(), &g);
        assert!(zero.iter().flatten().all(|x| *x == 0.0));
        let mut b = GradientBlock::zero();
        b.rows[1][1] = 1.0; // u_y
        let f = viscous_flux(&q, &b, &g);
        assert!((f[0][2] - g.mu).abs() < 1e-15);
        assert!((f[1][1] - g.mu).abs() < 1e-15);
    }

    #[test]
    fn viscous_flux_shear_field_against_hand_stress() {
        // u = a y + b z, v = c x, w = d x + e y  (divergence free)
        let (a, b, c, d, e) = (0.7, -0.3, 0.4, 1.1, -0.6);
        let g = gas();
        let q = PrimitiveState { rho: 1.2, u: 0.5, v: 0.25, w: -0.75, p: 2.0 };
        let mut blk = GradientBlock::zero();
        blk.rows[1] = [0.0, a, b];
        blk.rows[2] = [c, 0.0, 0.0];
        blk.rows[3] = [d, e, 0.0];
        blk.rows[4] = [0.2, -0.1, 0.3];
        let tau = [[0.0, a + c, b + d], [a + c, 0.0, e], [b + d, e, 0.0]];
        let f = viscous_flux(&q, &blk, &g);
        for axis in 0..3 {
            let t = tau[axis];
            let expect = [
                0.0,
                g.mu * t[0],
                g.mu * t[1],
                g.mu * t[2],
                g.mu * (q.u * t[0] + q.v * t[1] + q.w * t[2]) + g.kappa * blk.rows[4][axis],
            ];
            for k in 0..5 {
                assert!((f[axis][k] - expect[k]).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn pathway_b_linear_pressure() {
        let g = gas();
        let q = PrimitiveState { rho: 1.0, u: 0.0, v: 0.0, w: 0.0, p: 1.0 };
        let mut d = [[0.0; 3]; 5];
        d[4][0] = 0.3;
        let blk = gradient_from_primitive(&q, &d, &g).unwrap();
        assert!((blk.rows[4][0] - 0.3 / g.r).abs() < 1e-15);
        let uniform = gradient_from_primitive(&q, &[[0.0; 3]; 5], &g).unwrap();
        assert_eq!(uniform, GradientBlock::zero());
    }

    /// Analytic field: ρ, u, v, w, p as products of sines and cosines.
    fn field(x: [f64; 3]) -> PrimitiveState {
        let (sx, cy, sz) = (x[0].sin(), x[1].cos(), x[2].sin());
        PrimitiveState {
            rho: 1.0 + 0.3 * sx * cy,
            u: 0.5 * cy * sz,
            v: -0.4 * sx,
            w: 0.2 * (x[0] + x[1]).cos(),
            p: 2.0 + 0.5 * sx * sz,
        }
    }

    fn fd_grad(f: &dyn Fn([f64; 3]) -> [f64; 5], x: [f64; 3]) -> [[f64; 3]; 5] {
        let h = 1e-4;
        let mut out = [[0.0; 3]; 5];
        for d in 0..3 {
            let at = |s: f64| {
                let mut y = x;
                y[d] += s;
                f(y)
            };
            let (p2, p1, m1, m2) = (at(2.0 * h), at(h), at(-h), at(-2.0 * h));
            for k in 0..5 {
                out[k][d] = (-p2[k] + 8.0 * p1[k] - 8.0 * m1[k] + m2[k]) / (12.0 * h);
            }
        }
        out
    }

    #[test]
    fn pathways_agree_on_consistent_pointwise_data() {
        let g = gas();
        for &x in &[[0.3, 1.1, -0.7], [2.0, -0.4, 0.9], [-1.3, 0.2, 2.4]] {
            let q = field(x);
            let dprim = fd_grad(&|y| field(y).to_array(), x);
            let dcons = fd_grad(&|y| prim_to_cons(&field(y), &g).to_array(), x);
            let b = gradient_from_primitive(&q, &dprim, &g).unwrap();
            let c = gradient_from_conserved(&prim_to_cons(&q, &g), &dcons, &g).unwrap();
            // ∇T of the analytic field directly
            let dt = fd_grad(
                &|y| {
                    let s = field(y);
                    [s.temperature(&g), 0.0, 0.0, 0.0, 0.0]
                },
                x,
            )[0];
            for d in 0..3 {
                assert!((b.rows[4][d] - dt[d]).abs() < 1e-9);
                for k in 0..5 {
                    assert!((b.rows[k][d] - c.rows[k][d]).abs() < 1e-9, "k={k} d={d}");
                }
            }
        }
    }

    #[test]
    fn pathways_agree_exactly_with_analytic_gradients() {
        // Linear-in-x data with exact gradients: both pathways are pure algebra
        // so they agree to roundoff.
        let g = gas();
        let q = PrimitiveState { rho: 1.3, u: 0.4, v: -0.2, w: 0.7, p: 1.9 };
        let dprim = [[0.2, -0.1, 0.05], [0.3, 0.0, -0.4], [0.1, 0.6, 0.2], [-0.5, 0.1, 0.0], [0.7, -0.3, 0.2]];
        let c = prim_to_cons(&q, &g);
        let mut dcons = [[0.0; 3]; 5];
        for d in 0..3 {
            let drho = dprim[0][d];
            dcons[0][d] = drho;
            let vel = q.velocity();
            let mut vdv = 0.0;
            for i in 0..3 {
                dcons[1 + i][d] = drho * vel[i] + q.rho * dprim[1 + i][d];
                vdv += vel[i] * dprim[1 + i][d];
            }
            dcons[4][d] = dprim[4][d] / (g.gamma - 1.0)
                + 0.5 * drho * (vel[0] * vel[0] + vel[1] * vel[1] + vel[2] * vel[2])
                + q.rho * vdv;
        }
        let b = gradient_from_primitive(&q, &dprim, &g).unwrap();
        let cc = gradient_from_conserved(&c, &dcons, &g).unwrap();
        for k in 0..5 {
            for d in 0..3 {
                assert!((b.rows[k][d] - cc.rows[k][d]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn pathway_c_constant_pressure_shear() {
        // ρ const, u = s x, p const: T is uniform.
        let g = gas();
        let s = 0.8;
        let q = PrimitiveState { rho: 1.0, u: 0.6, v: 0.0, w: 0.0, p: 1.0 };
        let c = prim_to_cons(&q, &g);
        let mut dcons = [[0.0; 3]; 5];
        dcons[1][0] = q.rho * s;
        dcons[4][0] = q.rho * q.u * s;
        let blk = gradient_from_conserved(&c, &dcons, &g).unwrap();
        assert!((blk.rows[1][0] - s).abs() < 1e-15);
        assert!(blk.rows[4][0].abs() < 1e-15);
        let zero = gradient_from_conserved(&c, &[[0.0; 3]; 5], &g).unwrap();
        assert_eq!(zero, GradientBlock::zero());
    }

    #[test]
    fn nodal_pathways_reject_bad_density() {
        let g = gas();
        let q = [PrimitiveState { rho: -1.0, u: 0.0, v: 0.0, w: 0.0, p: 1.0 }];
        let r = grad_path_b(&q, |d| vec![[[0.0; 3]; 5]; d.len()], &g);
        assert!(r.is_err());
        let c = [ConservedState::from_array([0.0, 0.0, 0.0, 0.0, 1.0])];
        assert!(grad_path_c(&c, &[[[0.0; 3]; 5]], &g).is_err());
    }

    #[test]
    fn vorticity_of_solid_body_rotation() {
        // u = -Ω y, v = Ω x
        let omega: f64 = 1.7;
        let mut blk = GradientBlock::zero();
        blk.rows[1][1] = -omega;
        blk.rows[2][0] = omega;
        let w = blk.vorticity();
        assert!(w[0].abs() < 1e-15 && w[1].abs() < 1e-15);
        assert!((w[2] - 2.0 * omega).abs() < 1e-15);
    }
}
