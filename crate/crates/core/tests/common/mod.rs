//! Oracles shared by the integration tests and the acceptance suite.
#![allow(dead_code)]

use fr_alias::frcore::{Mesh, NavierStokes, SolutionField, StorageScheme};
use fr_alias::gasmodel::{
    gradient_from_primitive, inviscid_flux_prim_axis, prim_to_cons, viscous_flux_axis, GasModel, PrimitiveState,
};
use fr_alias::march::{march, stable_dt, MarchConfig, Sample};
use fr_alias::refelem::build_reference_ops;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

/// Smooth periodic field on `[0, 2π]³` with every component varying in all
/// three directions.
pub fn mms_field(x: [f64; 3]) -> PrimitiveState {
    let (a, b, c) = (x[0], x[1], x[2]);
    PrimitiveState {
        rho: 1.0 + 0.2 * a.sin() * b.cos() + 0.1 * c.sin(),
        u: 0.3 * b.sin() * c.cos() + 0.1,
        v: -0.2 * (a + c).cos(),
        w: 0.25 * a.sin() * b.sin() - 0.05,
        p: 1.0 + 0.15 * (a - b).cos() * c.cos(),
    }
}

/// Sixth-order central difference of a vector function along `axis`.
fn fd6<const N: usize>(f: &dyn Fn([f64; 3]) -> [f64; N], x: [f64; 3], axis: usize, h: f64) -> [f64; N] {
    let at = |s: f64| {
        let mut y = x;
        y[axis] += s * h;
        f(y)
    };
    let (p1, p2, p3) = (at(1.0), at(2.0), at(3.0));
    let (m1, m2, m3) = (at(-1.0), at(-2.0), at(-3.0));
    let mut out = [0.0; N];
    for k in 0..N {
        out[k] = (45.0 * (p1[k] - m1[k]) - 9.0 * (p2[k] - m2[k]) + (p3[k] - m3[k])) / (60.0 * h);
    }
    out
}

fn prim_gradient(x: [f64; 3]) -> [[f64; 3]; 5] {
    let mut g = [[0.0; 3]; 5];
    for d in 0..3 {
        let col = fd6(&|y| mms_field(y).to_array(), x, d, 1e-3);
        for v in 0..5 {
            g[v][d] = col[v];
        }
    }
    g
}

/// Total flux along `axis` at a point, with exact gradients.
fn point_flux(gas: &GasModel, x: [f64; 3], axis: usize, viscous: bool) -> [f64; 5] {
    let q = mms_field(x);
    let mut f = inviscid_flux_prim_axis(&q, axis, gas);
    if viscous {
        let blk = gradient_from_primitive(&q, &prim_gradient(x), gas).unwrap();
        let fv = viscous_flux_axis(&q, &blk, axis, gas);
        for k in 0..5 {
            f[k] -= fv[k];
        }
    }
    f
}

/// `-∇·F` of the manufactured field: the conserved-variable rate an exact
/// spatial operator would return.
pub fn mms_rate(gas: &GasModel, x: [f64; 3], viscous: bool) -> [f64; 5] {
    let mut r = [0.0; 5];
    for axis in 0..3 {
        let d = fd6(&|y| point_flux(gas, y, axis, viscous), x, axis, 2e-3);
        for k in 0..5 {
            r[k] -= d[k];
        }
    }
    r
}

pub fn mms_gas() -> GasModel {
    GasModel::new(1.4, 1.0, 0.05, 0.71).unwrap()
}

/// L∞ error of the conserved residual against [`mms_rate`] on an `n³` mesh.
pub fn mms_error(scheme: StorageScheme, p: usize, n: usize, viscous: bool) -> f64 {
    let gas = mms_gas();
    let mesh = Mesh::cube(n, 0.0, TWO_PI).unwrap();
    let ops = build_reference_ops(p).unwrap();
    let field = SolutionField::<f64>::from_fn(mesh.clone(), p, scheme, &gas, mms_field).unwrap();
    let mut op = NavierStokes::new(mesh, &ops, scheme, &gas, viscous);
    let mut r = vec![0.0; field.data.len()];
    op.conserved_residual(&field, &mut r).unwrap();
    let coords = field.node_coords();
    let mut err = 0.0_f64;
    for (i, x) in coords.iter().enumerate() {
        let exact = mms_rate(&gas, *x, viscous);
        for k in 0..5 {
            err = err.max((r[i * 5 + k] - exact[k]).abs());
        }
    }
    err
}

/// March `q_t = R(q) + S` from the manufactured field, with `S = -mms_rate` so
/// that the field is an exact steady state, and return the L∞ conserved-state
/// error at `t_end`.
pub fn mms_solution_error(scheme: StorageScheme, p: usize, n: usize, t_end: f64) -> f64 {
    let gas = mms_gas();
    let mesh = Mesh::cube(n, 0.0, TWO_PI).unwrap();
    let ops = build_reference_ops(p).unwrap();
    let mut field = SolutionField::<f64>::from_fn(mesh.clone(), p, scheme, &gas, mms_field).unwrap();
    let coords = field.node_coords();
    let source: Vec<f64> = coords.iter().flat_map(|x| mms_rate(&gas, *x, true).map(|v| -v)).collect();
    let exact: Vec<[f64; 5]> = coords.iter().map(|x| prim_to_cons(&mms_field(*x), &gas).to_array()).collect();
    let mut op = NavierStokes::new(mesh, &ops, scheme, &gas, true);
    let dt = stable_dt(&field, &gas, 0.4).unwrap();
    let mc = MarchConfig { dt, t_end, sample_every: usize::MAX / 2 };
    let series = march(
        &mut field,
        &mc,
        |f, r| {
            op.conserved_residual(f, r)?;
            r.iter_mut().zip(&source).for_each(|(a, b)| *a += b);
            Ok(())
        },
        |_, _| Ok(Sample::default()),
    )
    .unwrap();
    assert!(!series.diverged);
    let q = field.primitives_f64(&gas).unwrap();
    q.iter().zip(&exact).fold(0.0_f64, |m, (q, e)| {
        let c = prim_to_cons(q, &gas).to_array();
        (0..5).fold(m, |m, k| m.max((c[k] - e[k]).abs()))
    })
}

/// Random physical primitive field, independent per node.
pub fn random_primitive_field(seed: u64, mesh: &Mesh, p: usize) -> Vec<PrimitiveState> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = mesh.n_elements() * (p + 1).pow(3);
    (0..n)
        .map(|_| PrimitiveState {
            rho: rng.random_range(0.5..2.0),
            u: rng.random_range(-1.0..1.0),
            v: rng.random_range(-1.0..1.0),
            w: rng.random_range(-1.0..1.0),
            p: rng.random_range(0.5..2.0),
        })
        .collect()
}

/// Field in `scheme` storage holding the given nodal primitives.
pub fn field_from_nodes(
    mesh: &Mesh,
    p: usize,
    scheme: StorageScheme,
    gas: &GasModel,
    nodes: &[PrimitiveState],
) -> SolutionField<f64> {
    let coords = fr_alias::frcore::SolutionField::<f64>::from_fn(mesh.clone(), p, scheme, gas, |_| PrimitiveState {
        rho: 1.0,
        u: 0.0,
        v: 0.0,
        w: 0.0,
        p: 1.0,
    })
    .unwrap();
    let mut f = coords;
    for (i, q) in nodes.iter().enumerate() {
        f.data[i * 5..i * 5 + 5].copy_from_slice(&fr_alias::frcore::store(scheme, q, gas));
    }
    f
}

/// Observed orders between successive error levels (refinement ratio 2).
pub fn orders(errs: &[f64]) -> Vec<f64> {
    errs.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}
