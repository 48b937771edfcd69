mod common;

use common::*;
use fr_alias::cases::{icv_init, IcvConfig};
use fr_alias::error::{Error, Site};
use fr_alias::frcore::{Mesh, NavierStokes, SolutionField, StorageScheme};
use fr_alias::gasmodel::{inviscid_flux_prim_axis, GasModel, PrimitiveState};
use fr_alias::march::{march, MarchConfig, RkState, Sample};
use fr_alias::refelem::{build_reference_ops, gauss_legendre};
use fr_alias::Real;

fn uniform() -> PrimitiveState {
    PrimitiveState { rho: 1.2, u: 0.3, v: -0.2, w: 0.5, p: 0.9 }
}

fn free_stream_max<T: Real>(scheme: StorageScheme, p: usize) -> (f64, f64) {
    let gas = mms_gas();
    let mesh = Mesh::cube(3, 0.0, 6.0).unwrap();
    let ops = build_reference_ops(p).unwrap();
    let field = SolutionField::<T>::from_fn(mesh.clone(), p, scheme, &gas, |_| uniform()).unwrap();
    let mut op = NavierStokes::<T>::new(mesh, &ops, scheme, &gas, true);
    let mut r = vec![T::zero(); field.data.len()];
    op.conserved_residual(&field, &mut r).unwrap();
    let worst = r.iter().fold(0.0_f64, |m, x| m.max(x.to_f64_lossless().abs()));
    let scale = (0..3).flat_map(|a| inviscid_flux_prim_axis(&uniform(), a, &gas)).fold(0.0_f64, |m, x| m.max(x.abs()));
    (worst, scale)
}

#[test]
fn free_stream_is_preserved() {
    for s in StorageScheme::ALL {
        for p in [2, 4] {
            let (w, scale) = free_stream_max::<f64>(s, p);
            assert!(w <= 100.0 * f64::EPSILON * scale, "{s} p={p} fp64: {w:e}");
            let (w, scale) = free_stream_max::<f32>(s, p);
            assert!(w <= 100.0 * f32::EPSILON as f64 * scale, "{s} p={p} fp32: {w:e}");
        }
    }
}

#[test]
fn conserved_residual_integrates_to_zero() {
    let gas = mms_gas();
    let p = 3;
    let mesh = Mesh::cube(3, 0.0, TWO_PI).unwrap();
    let ops = build_reference_ops(p).unwrap();
    let w = gauss_legendre(p + 1).1;
    let jac: f64 = mesh.jacobian().iter().product();
    let n = p + 1;
    for s in StorageScheme::ALL {
        let field = SolutionField::<f64>::from_fn(mesh.clone(), p, s, &gas, mms_field).unwrap();
        let mut op = NavierStokes::new(mesh.clone(), &ops, s, &gas, true);
        let mut r = vec![0.0; field.data.len()];
        op.conserved_residual(&field, &mut r).unwrap();
        let mut total = [0.0_f64; 5];
        for (i, chunk) in r.chunks(5).enumerate() {
            let node = i % (n * n * n);
            let wt = w[node % n] * w[(node / n) % n] * w[node / (n * n)] * jac;
            for k in 0..5 {
                total[k] += wt * chunk[k];
            }
        }
        for (k, t) in total.iter().enumerate() {
            assert!(t.abs() <= 1e-11, "{s} component {k}: {t:e}");
        }
    }
}

fn icv_small() -> IcvConfig {
    IcvConfig { elements: [4, 4, 1], order: 3, ..Default::default() }
}

fn advance(scheme: StorageScheme, steps: usize) -> SolutionField<f64> {
    let cfg = icv_small();
    let gas = cfg.gas().unwrap();
    let ops = build_reference_ops(cfg.order).unwrap();
    let mut f = icv_init::<f64>(&cfg, scheme).unwrap();
    let mut op = NavierStokes::new(f.mesh.clone(), &ops, scheme, &gas, false);
    let mc = MarchConfig { dt: 0.01, t_end: 0.01 * steps as f64, sample_every: steps };
    let s = march(&mut f, &mc, |f, k| op.conserved_residual(f, k), |_, _| Ok(Sample::default())).unwrap();
    assert!(!s.diverged);
    f
}

#[test]
fn storage_choice_changes_the_solution() {
    let gas = icv_small().gas().unwrap();
    let a = advance(StorageScheme::A, 20).primitives_f64(&gas).unwrap();
    let b = advance(StorageScheme::B, 20).primitives_f64(&gas).unwrap();
    let diff = a.iter().zip(&b).fold(0.0_f64, |m, (x, y)| m.max((x.rho - y.rho).abs()));
    assert!(diff > 1e-10, "A and B coincide: {diff:e}");
    assert!(diff < 1e-2, "A and B far apart: {diff:e}");
}

#[test]
fn stage_update_is_storage_independent() {
    // The same conserved increment applied to any storage gives the same state.
    let gas = mms_gas();
    let mesh = Mesh::cube(2, 0.0, 1.0).unwrap();
    let nodes = random_primitive_field(5, &mesh, 2);
    let fields: Vec<_> = StorageScheme::ALL.iter().map(|&s| field_from_nodes(&mesh, 2, s, &gas, &nodes)).collect();
    let rate: Vec<f64> = (0..fields[0].data.len()).map(|i| ((i * 37) % 11) as f64 * 0.01 - 0.05).collect();
    let out: Vec<_> = fields
        .into_iter()
        .map(|mut f| {
            f.axpy(0.3, &rate).unwrap();
            f.primitives_f64(&gas).unwrap()
        })
        .collect();
    for other in &out[1..] {
        for (x, y) in out[0].iter().zip(other) {
            for (a, b) in x.to_array().iter().zip(y.to_array()) {
                assert!((a - b).abs() <= 1e-13 * b.abs().max(1.0));
            }
        }
    }
}

#[test]
fn nonphysical_node_is_located() {
    let gas = GasModel::inviscid(1.4).unwrap();
    let cfg = icv_small();
    let ops = build_reference_ops(cfg.order).unwrap();
    for s in StorageScheme::ALL {
        let mut f = icv_init::<f64>(&cfg, s).unwrap();
        let npe = f.nodes_per_element();
        f.data[(3 * npe + 7) * 5] = -1.0;
        let mut op = NavierStokes::new(f.mesh.clone(), &ops, s, &gas, false);
        let mut r = vec![0.0; f.data.len()];
        let e = op.conserved_residual(&f, &mut r).unwrap_err();
        match &e {
            Error::NonPhysical { site: Some(Site::Node { element: 3, node: 7 }), scheme: Some(sc), .. } => {
                assert_eq!(*sc, s)
            }
            other => panic!("{s}: unexpected {other}"),
        }
        let msg = e.to_string();
        assert!(msg.contains("element 3, node 7") && msg.contains(&format!("[scheme {s}]")), "{msg}");
    }
}

#[test]
fn nonphysical_face_trace_is_located() {
    // Gauss-node densities 0.3, 1, 0.3 along x extrapolate below zero.
    let gas = GasModel::inviscid(1.4).unwrap();
    let mesh = Mesh::cube(2, 0.0, 2.0).unwrap();
    let ops = build_reference_ops(2).unwrap();
    for s in StorageScheme::ALL {
        let nodes: Vec<PrimitiveState> = (0..mesh.n_elements() * 27)
            .map(|i| {
                let edge = i % 3 != 1;
                PrimitiveState { rho: if edge { 0.3 } else { 1.0 }, u: 0.0, v: 0.0, w: 0.0, p: 1.0 }
            })
            .collect();
        let f = field_from_nodes(&mesh, 2, s, &gas, &nodes);
        let mut op = NavierStokes::new(mesh.clone(), &ops, s, &gas, false);
        let mut r = vec![0.0; f.data.len()];
        let e = op.conserved_residual(&f, &mut r).unwrap_err();
        assert!(matches!(e, Error::NonPhysical { site: Some(Site::Face { .. }), .. }), "{s}: {e}");
        assert!(e.to_string().contains("face"), "{e}");
    }
}
