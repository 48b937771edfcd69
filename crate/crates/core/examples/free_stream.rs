//! Uniform flow through the 3D Navier-Stokes residual for every storage
//! scheme and both precisions.
use fr_alias::frcore::{Mesh, NavierStokes, SolutionField, StorageScheme};
use fr_alias::gasmodel::{GasModel, PrimitiveState};
use fr_alias::refelem::build_reference_ops;
use fr_alias::Real;

fn worst<T: Real>(scheme: StorageScheme, p: usize, gas: &GasModel) -> fr_alias::Result<f64> {
    let mesh = Mesh::cube(3, 0.0, 1.0)?;
    let ops = build_reference_ops(p)?;
    let q = PrimitiveState { rho: 1.0, u: 0.4, v: 0.1, w: -0.3, p: 1.0 / 1.4 };
    let field = SolutionField::<T>::from_fn(mesh.clone(), p, scheme, gas, |_| q)?;
    let mut op = NavierStokes::<T>::new(mesh, &ops, scheme, gas, true);
    let mut r = vec![T::zero(); field.data.len()];
    op.residual(&field, &mut r)?;
    Ok(r.iter().fold(0.0, |m, x| m.max(x.to_f64_lossless().abs())))
}

fn main() -> fr_alias::Result<()> {
    let gas = GasModel::new(1.4, 1.0, 1e-3, 0.71)?;
    println!("scheme  p  max|R| fp64   max|R| fp32");
    for s in StorageScheme::ALL {
        for p in [2, 4] {
            println!("{:>6} {p:>2}  {:.3e}     {:.3e}", s.name(), worst::<f64>(s, p, &gas)?, worst::<f32>(s, p, &gas)?);
        }
    }
    Ok(())
}
