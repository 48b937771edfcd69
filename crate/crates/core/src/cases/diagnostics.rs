//! Volume diagnostics. Element sums run in parallel; the final sum is taken
//! in element order in `f64` so results do not depend on the thread count.

use rayon::prelude::*;

use crate::error::Result;
use crate::frcore::SolutionField;
use crate::gasmodel::{GasModel, GradientBlock, PrimitiveState};
use crate::real::Real;
use crate::refelem::gauss_legendre;

/// `Σ_e Σ_nodes w J f(e, node)` over the mesh, in `f64`.
fn integrate<T: Real>(field: &SolutionField<T>, f: impl Fn(usize, usize) -> Result<f64> + Sync) -> Result<f64> {
    let n = field.n_points();
    let w = gauss_legendre(n).1;
    let jac: f64 = field.mesh.jacobian().iter().product();
    let npe = field.nodes_per_element();
    let per_element: Vec<Result<f64>> = (0..field.mesh.n_elements())
        .into_par_iter()
        .map(|e| {
            let mut s = 0.0;
            for node in 0..npe {
                let (i, j, k) = (node % n, (node / n) % n, node / (n * n));
                s += w[i] * w[j] * w[k] * f(e, node)?;
            }
            Ok(s * jac)
        })
        .collect();
    let mut total = 0.0;
    for s in per_element {
        total += s?;
    }
    Ok(total)
}

fn prim64<T: Real>(field: &SolutionField<T>, gas: &GasModel<T>, e: usize, node: usize) -> Result<PrimitiveState> {
    Ok(field.primitive(e, node, gas)?.cast())
}

/// `(1/|Ω|) ∫ ½ ρ |V|² dx / scale`.
pub fn kinetic_energy<T: Real>(field: &SolutionField<T>, gas: &GasModel<T>, scale: f64) -> Result<f64> {
    let total = integrate(field, |e, node| {
        let q = prim64(field, gas, e, node)?;
        Ok(0.5 * q.rho * (q.u * q.u + q.v * q.v + q.w * q.w))
    })?;
    Ok(total / (field.mesh.volume() * scale))
}

/// `μ / (ρ0² U0² |Ω|) ∫ ρ ω·ω dx`, with `blocks` in storage order.
pub fn enstrophy_dissipation<T: Real>(
    field: &SolutionField<T>,
    gas: &GasModel<T>,
    blocks: &[GradientBlock<T>],
    rho0: f64,
    u0: f64,
) -> Result<f64> {
    let npe = field.nodes_per_element();
    let total = integrate(field, |e, node| {
        let q = prim64(field, gas, e, node)?;
        let w = blocks[e * npe + node].vorticity().map(|x| x.to_f64_lossless());
        Ok(q.rho * (w[0] * w[0] + w[1] * w[1] + w[2] * w[2]))
    })?;
    let mu = gas.mu.to_f64_lossless();
    Ok(mu * total / (rho0 * rho0 * u0 * u0 * field.mesh.volume()))
}

/// Mean of `|ρ_i - ρ_exact(x_i)|` over all solution points.
pub fn density_error<T: Real>(
    field: &SolutionField<T>,
    gas: &GasModel<T>,
    exact: impl Fn([f64; 3]) -> PrimitiveState + Sync,
) -> Result<f64> {
    let coords = field.node_coords();
    let npe = field.nodes_per_element();
    let per_element: Vec<Result<f64>> = (0..field.mesh.n_elements())
        .into_par_iter()
        .map(|e| {
            let mut s = 0.0;
            for node in 0..npe {
                let rho = field.primitive(e, node, gas)?.rho.to_f64_lossless();
                s += (rho - exact(coords[e * npe + node]).rho).abs();
            }
            Ok(s)
        })
        .collect();
    let mut total = 0.0;
    for s in per_element {
        total += s?;
    }
    Ok(total / field.n_nodes() as f64)
}

/// `-dE/dt` by central differences on a possibly non-uniform grid, one-sided
/// at the ends.
pub fn dissipation_rate(t: &[f64], ek: &[f64]) -> Vec<f64> {
    let n = t.len().min(ek.len());
    match n {
        0 => Vec::new(),
        1 => vec![0.0],
        _ => (0..n)
            .map(|i| {
                let (a, b) = if i == 0 {
                    (0, 1)
                } else if i == n - 1 {
                    (n - 2, n - 1)
                } else {
                    (i - 1, i + 1)
                };
                -(ek[b] - ek[a]) / (t[b] - t[a])
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frcore::{Mesh, StorageScheme};

    #[test]
    fn quiescent_field_has_no_energy() {
        let gas = GasModel::inviscid(1.4).unwrap();
        let mesh = Mesh::cube(2, 0.0, 1.0).unwrap();
        let f = SolutionField::<f64>::from_fn(mesh, 2, StorageScheme::B, &gas, |_| PrimitiveState {
            rho: 1.0,
            u: 0.0,
            v: 0.0,
            w: 0.0,
            p: 1.0,
        })
        .unwrap();
        assert_eq!(kinetic_energy(&f, &gas, 1.0).unwrap(), 0.0);
        let blocks = vec![GradientBlock::zero(); f.n_nodes()];
        assert_eq!(enstrophy_dissipation(&f, &gas, &blocks, 1.0, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn uniform_flow_energy_and_offset_density_error() {
        let gas = GasModel::inviscid(1.4).unwrap();
        let mesh = Mesh::new([2, 3, 1], [0.0; 3], [2.0, 1.0, 0.5]).unwrap();
        let f = SolutionField::<f64>::from_fn(mesh, 3, StorageScheme::A, &gas, |_| PrimitiveState {
            rho: 2.0,
            u: 1.0,
            v: 2.0,
            w: 0.0,
            p: 1.0,
        })
        .unwrap();
        assert!((kinetic_energy(&f, &gas, 1.0).unwrap() - 5.0).abs() < 1e-13);
        let err = density_error(&f, &gas, |_| PrimitiveState { rho: 1.75, ..Default::default() }).unwrap();
        assert!((err - 0.25).abs() < 1e-15);
    }

    #[test]
    fn central_differences() {
        let t = [0.0, 1.0, 3.0, 4.0];
        let e: Vec<f64> = t.iter().map(|t| 10.0 - 2.0 * t).collect();
        assert!(dissipation_rate(&t, &e).iter().all(|x| (x - 2.0).abs() < 1e-15));
        assert_eq!(dissipation_rate(&[0.0], &[1.0]), vec![0.0]);
    }
}
