//! FR residual for a scalar conservation law `u_t + f(u)_x = 0` on a uniform
//! periodic 1D mesh.

use crate::error::{Error, Result};
use crate::refelem::ReferenceOps;

/// `-(2/h) ∂f̂/∂ξ` at every solution point.
///
/// `u` holds `p + 1` nodal values per element, elements in order. The common
/// interface flux is Rusanov with speed `max(|a(u_L)|, |a(u_R)|)`.
pub fn residual_1d_scalar(
    u: &[f64],
    flux: impl Fn(f64) -> f64,
    wave_speed: impl Fn(f64) -> f64,
    ops: &ReferenceOps,
    h: f64,
) -> Result<Vec<f64>> {
    let n = ops.n_points();
    if u.is_empty() || u.len() % n != 0 {
        return Err(Error::LengthMismatch { what: "u", got: u.len(), expected: n * (u.len() / n).max(1) });
    }
    let ne = u.len() / n;
    let f: Vec<f64> = u.iter().map(|&x| flux(x)).collect();

    // Traces of u and of the discontinuous flux polynomial at both ends.
    let mut ut = vec![[0.0; 2]; ne];
    let mut ft = vec![[0.0; 2]; ne];
    for e in 0..ne {
        let (ul, ur) = ops.extrapolate(&u[e * n..(e + 1) * n]);
        let (fl, fr) = ops.extrapolate(&f[e * n..(e + 1) * n]);
        ut[e] = [ul, ur];
        ft[e] = [fl, fr];
    }

    // Common flux at the left face of each element.
    let common: Vec<f64> = (0..ne)
        .map(|e| {
            let l = (e + ne - 1) % ne;
            let (a, b) = (ut[l][1], ut[e][0]);
            let s = wave_speed(a).abs().max(wave_speed(b).abs());
            0.5 * (flux(a) + flux(b)) - 0.5 * s * (b - a)
        })
        .collect();

    let scale = 2.0 / h;
    let mut res = vec![0.0; u.len()];
    for e in 0..ne {
        let fe = &f[e * n..(e + 1) * n];
        let jl = common[e] - ft[e][0];
        let jr = common[(e + 1) % ne] - ft[e][1];
        for i in 0..n {
            let mut d = 0.0;
            for m in 0..n {
                d += ops.diff[i * n + m] * fe[m];
            }
            d += jl * ops.corr_left[i] + jr * ops.corr_right[i];
            res[e * n + i] = -scale * d;
        }
    }
    Ok(res)
}
