use crate::error::Result;
use crate::gasmodel::{cons_to_prim, inviscid_flux_cons_axis, ConservedState, GasModel, PrimitiveState};
use crate::real::Real;

/// Davis estimate `max(|u_n| + a)` over both sides.
#[inline]
pub fn davis_wave_speed<T: Real>(
    left: &PrimitiveState<T>,
    right: &PrimitiveState<T>,
    axis: usize,
    gas: &GasModel<T>,
) -> T {
    let sl = left.velocity()[axis].abs() + left.sound_speed(gas);
    let sr = right.velocity()[axis].abs() + right.sound_speed(gas);
    sl.max(sr)
}

/// `½(f_L + f_R) - ½ s (q_R - q_L)` from precomputed pieces.
#[inline(always)]
pub(crate) fn rusanov_combine<T: Real>(fl: &[T; 5], fr: &[T; 5], ql: &[T; 5], qr: &[T; 5], s: T) -> [T; 5] {
    let half = T::of(0.5);
    let mut out = [T::zero(); 5];
    for k in 0..5 {
        out[k] = half * (fl[k] + fr[k]) - half * s * (qr[k] - ql[k]);
    }
    out
}

/// Rusanov flux normal to `axis` between two conserved states.
pub fn rusanov_flux<T: Real>(
    left: &ConservedState<T>,
    right: &ConservedState<T>,
    axis: usize,
    gas: &GasModel<T>,
) -> Result<[T; 5]> {
    let pl = cons_to_prim(left, gas)?;
    let pr = cons_to_prim(right, gas)?;
    let s = davis_wave_speed(&pl, &pr, axis, gas);
    let fl = inviscid_flux_cons_axis(left, axis, gas)?;
    let fr = inviscid_flux_cons_axis(right, axis, gas)?;
    Ok(rusanov_combine(&fl, &fr, &left.to_array(), &right.to_array(), s))
}

/// BR1 common solution: the arithmetic mean of both traces.
#[inline(always)]
pub fn br1_interface<T: Real, const N: usize>(left: [T; N], right: [T; N]) -> [T; N] {
    let half = T::of(0.5);
    let mut out = left;
    for k in 0..N {
        out[k] = half * (left[k] + right[k]);
    }
    out
}

/// BR1 common viscous flux: the arithmetic mean of both sides.
#[inline(always)]
pub fn br1_flux<T: Real, const N: usize>(left: [T; N], right: [T; N]) -> [T; N] {
    br1_interface(left, right)
}
