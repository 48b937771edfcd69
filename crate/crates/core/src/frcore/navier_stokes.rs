//! Tensor-product FR residual for the compressible Euler and Navier–Stokes
//! equations with interchangeable storage schemes.
//!
//! One evaluation runs in element-parallel sweeps. Each sweep writes only the
//! current element's block and reads neighbour blocks written by an earlier
//! sweep:
//!
//! 1. nodal primitives, gradient variables and inviscid fluxes, plus traces of
//!    the stored variables on all six faces;
//! 2. Rusanov flux and BR1 gradient-variable average on the three lower faces;
//! 3. corrected gradients, gradient blocks, nodal viscous flux and its face
//!    traces (viscous only);
//! 4. BR1 viscous flux average on the lower faces (viscous only);
//! 5. corrected flux divergence, then conversion to stored-variable rates.

use rayon::prelude::*;

use crate::error::{Error, Result, Site};
use crate::gasmodel::{
    gradient_from_conserved, gradient_from_primitive, inviscid_flux_cons_axis, inviscid_flux_mixed_axis,
    inviscid_flux_prim_axis, mixed_to_cons, prim_to_cons, viscous_flux_axis, ConservedState, GasModel, GradientBlock,
    MixedState, PrimitiveState,
};
use crate::real::Real;
use crate::refelem::{LineOps, ReferenceOps};

use super::field::unstore;
use super::interface::{davis_wave_speed, rusanov_combine};
use super::{Mesh, Residual, SolutionField, StorageScheme};

const NV: usize = 5;
const NG: usize = 15;

// Face-buffer sub-blocks, each `6 * n² * NV` long.
const F_STORED: usize = 0;
const F_CONS: usize = 1;
const F_PRIM: usize = 2;
const F_GSIDE: usize = 3;
const F_GDISC: usize = 4;
const F_BLOCKS: usize = 5;

#[derive(Debug, Clone, Copy)]
struct Layout {
    n: usize,
    n2: usize,
    n3: usize,
}

impl Layout {
    fn new(n: usize) -> Self {
        Layout { n, n2: n * n, n3: n * n * n }
    }

    /// First node and stride of the solution-point line through face point `fp`.
    #[inline(always)]
    fn line(&self, axis: usize, fp: usize) -> (usize, usize) {
        let n = self.n;
        match axis {
            0 => (n * fp, 1),
            1 => ((fp % n) + self.n2 * (fp / n), n),
            _ => (fp, self.n2),
        }
    }

    #[inline(always)]
    fn face_len(&self) -> usize {
        self.n2 * NV
    }

    fn nodal_len(&self) -> usize {
        5 * self.n3 * NV
    }

    fn face_block_len(&self) -> usize {
        6 * self.face_len()
    }

    fn iface_len(&self) -> usize {
        2 * 3 * self.face_len()
    }
}

#[inline(always)]
fn read5<T: Copy>(s: &[T], at: usize) -> [T; 5] {
    [s[at], s[at + 1], s[at + 2], s[at + 3], s[at + 4]]
}

#[inline(always)]
fn write5<T: Copy>(s: &mut [T], at: usize, v: &[T; 5]) {
    s[at..at + 5].copy_from_slice(v);
}

/// Evaluate the line interpolant of `src` (`c` components per node) at one
/// end of every line along `axis`.
fn extrapolate<T: Real>(lay: &Layout, w: &[T], src: &[T], c: usize, axis: usize, out: &mut [T]) {
    for fp in 0..lay.n2 {
        let (base, stride) = lay.line(axis, fp);
        let o = &mut out[fp * c..(fp + 1) * c];
        o.iter_mut().for_each(|x| *x = T::zero());
        for (m, &wm) in w.iter().enumerate() {
            let s = &src[(base + m * stride) * c..(base + m * stride + 1) * c];
            for k in 0..c {
                o[k] = o[k] + wm * s[k];
            }
        }
    }
}

/// Corrected derivative along `axis` of `NV`-component nodal data, scaled by
/// `scale` and handed to `sink(node, value)`.
#[inline(always)]
fn corrected_derivative<T: Real>(
    lay: &Layout,
    ops: &LineOps<T>,
    src: &[T],
    axis: usize,
    jump: [&[T]; 2],
    scale: T,
    mut sink: impl FnMut(usize, [T; 5]),
) {
    let n = lay.n;
    for fp in 0..lay.n2 {
        let (base, stride) = lay.line(axis, fp);
        let jl = read5(jump[0], fp * NV);
        let jr = read5(jump[1], fp * NV);
        for i in 0..n {
            let row = &ops.diff[i * n..(i + 1) * n];
            let mut acc = [T::zero(); 5];
            for (m, &d) in row.iter().enumerate() {
                let s = (base + m * stride) * NV;
                for k in 0..NV {
                    acc[k] = acc[k] + d * src[s + k];
                }
            }
            let (cl, cr) = (ops.corr[0][i], ops.corr[1][i]);
            for k in 0..NV {
                acc[k] = scale * (acc[k] + jl[k] * cl + jr[k] * cr);
            }
            sink(base + i * stride, acc);
        }
    }
}

/// Inviscid flux along `axis` from a stored tuple, by the scheme's route.
#[inline(always)]
fn route_flux<T: Real>(scheme: StorageScheme, stored: [T; 5], axis: usize, gas: &GasModel<T>) -> Result<[T; 5]> {
    match scheme {
        StorageScheme::A => Ok(inviscid_flux_prim_axis(&PrimitiveState::from_array(stored), axis, gas)),
        StorageScheme::B | StorageScheme::C => inviscid_flux_cons_axis(&ConservedState::from_array(stored), axis, gas),
        StorageScheme::D => inviscid_flux_mixed_axis(&MixedState::from_array(stored), axis, gas),
    }
}

#[inline(always)]
fn to_conserved<T: Real>(
    scheme: StorageScheme,
    stored: [T; 5],
    prim: &PrimitiveState<T>,
    gas: &GasModel<T>,
) -> Result<[T; 5]> {
    Ok(match scheme {
        StorageScheme::A => prim_to_cons(prim, gas).to_array(),
        StorageScheme::B | StorageScheme::C => stored,
        StorageScheme::D => mixed_to_cons(&MixedState::from_array(stored), gas)?.to_array(),
    })
}

/// Gradient variables: stored conserved for C, primitives otherwise.
#[inline(always)]
fn gradient_vars<T: Real>(scheme: StorageScheme, stored: [T; 5], prim: &PrimitiveState<T>) -> [T; 5] {
    match scheme {
        StorageScheme::C => stored,
        _ => prim.to_array(),
    }
}

/// Rate of the stored variables from the conserved-variable rate `r`.
#[inline(always)]
fn stored_rate<T: Real>(scheme: StorageScheme, r: [T; 5], q: &PrimitiveState<T>, gas: &GasModel<T>) -> [T; 5] {
    let pressure_rate = || {
        let ke = T::of(0.5) * (q.u * q.u + q.v * q.v + q.w * q.w);
        (gas.gamma - T::one()) * (r[4] - q.u * r[1] - q.v * r[2] - q.w * r[3] + ke * r[0])
    };
    match scheme {
        StorageScheme::A => {
            let inv = T::one() / q.rho;
            [r[0], (r[1] - q.u * r[0]) * inv, (r[2] - q.v * r[0]) * inv, (r[3] - q.w * r[0]) * inv, pressure_rate()]
        }
        StorageScheme::B | StorageScheme::C => r,
        StorageScheme::D => [r[0], r[1], r[2], r[3], pressure_rate()],
    }
}

/// Face sub-blocks holding the gradient-variable traces: the stored traces
/// themselves when the gradient variables are the stored ones.
#[inline(always)]
fn gradient_trace_blocks(scheme: StorageScheme) -> (usize, usize) {
    match scheme {
        StorageScheme::A | StorageScheme::C => (F_STORED, F_STORED),
        StorageScheme::B | StorageScheme::D => (F_GSIDE, F_GDISC),
    }
}

fn first_error(results: Vec<Result<()>>) -> Result<()> {
    results.into_iter().collect()
}

/// Reusable FR operator for one mesh, order, scheme and precision.
#[derive(Debug, Clone)]
pub struct NavierStokes<T: Real> {
    pub scheme: StorageScheme,
    pub viscous: bool,
    gas: GasModel<T>,
    ops: LineOps<T>,
    mesh: Mesh,
    lay: Layout,
    scale: [T; 3],
    nodal: Vec<T>,
    face: Vec<T>,
    iface: Vec<T>,
    grad: Vec<T>,
    fv: Vec<T>,
}

impl<T: Real> NavierStokes<T> {
    pub fn new(mesh: Mesh, ops: &ReferenceOps, scheme: StorageScheme, gas: &GasModel, viscous: bool) -> Self {
        let lay = Layout::new(ops.n_points());
        let ne = mesh.n_elements();
        let scale = mesh.h.map(|h| T::of(2.0 / h));
        NavierStokes {
            scheme,
            viscous,
            gas: gas.cast(),
            ops: ops.cast(),
            lay,
            scale,
            nodal: vec![T::zero(); ne * lay.nodal_len()],
            face: vec![T::zero(); ne * F_BLOCKS * lay.face_block_len()],
            iface: vec![T::zero(); ne * lay.iface_len()],
            grad: if viscous { vec![T::zero(); ne * lay.n3 * NG] } else { Vec::new() },
            fv: if viscous { vec![T::zero(); ne * lay.face_block_len()] } else { Vec::new() },
            mesh,
        }
    }

    pub fn mesh(&self) -> &Mesh {
        &self.mesh
    }

    pub fn order(&self) -> usize {
        self.lay.n - 1
    }

    pub fn gas(&self) -> &GasModel<T> {
        &self.gas
    }

    fn check_field(&self, field: &SolutionField<T>) -> Result<()> {
        if field.scheme != self.scheme {
            return Err(Error::InvalidParameter {
                name: "scheme",
                reason: format!("field stores scheme {}, operator built for {}", field.scheme, self.scheme),
            });
        }
        let expected = self.mesh.n_elements() * self.lay.n3 * NV;
        if field.data.len() != expected || field.order + 1 != self.lay.n {
            return Err(Error::LengthMismatch { what: "field data", got: field.data.len(), expected });
        }
        Ok(())
    }

    /// Rate of change of the stored variables.
    pub fn residual(&mut self, field: &SolutionField<T>, out: &mut [T]) -> Result<()> {
        self.evaluate(field, out, false)
    }

    /// Rate of change of the conserved variables, whatever the storage.
    pub fn conserved_residual(&mut self, field: &SolutionField<T>, out: &mut [T]) -> Result<()> {
        self.evaluate(field, out, true)
    }

    /// Physical gradients of `(ρ, u, v, w, T)` at every node, from the
    /// scheme's pathway with BR1 interface values.
    pub fn gradient_blocks(&mut self, field: &SolutionField<T>) -> Result<Vec<GradientBlock<T>>> {
        self.check_field(field)?;
        let viscous = self.viscous;
        if self.grad.is_empty() {
            let ne = self.mesh.n_elements();
            self.grad = vec![T::zero(); ne * self.lay.n3 * NG];
            self.fv = vec![T::zero(); ne * self.lay.face_block_len()];
        }
        self.viscous = true;
        let r = self
            .nodal_sweep(field)
            .and_then(|_| self.interface_sweep())
            .and_then(|_| self.gradient_sweep(field, false));
        self.viscous = viscous;
        r?;
        Ok(self
            .grad
            .chunks_exact(NG)
            .map(|g| {
                let mut rows = [[T::zero(); 3]; 5];
                for v in 0..5 {
                    rows[v] = [g[3 * v], g[3 * v + 1], g[3 * v + 2]];
                }
                GradientBlock { rows }
            })
            .collect())
    }

    fn evaluate(&mut self, field: &SolutionField<T>, out: &mut [T], conserved: bool) -> Result<()> {
        self.check_field(field)?;
        if out.len() != field.data.len() {
            return Err(Error::LengthMismatch { what: "residual", got: out.len(), expected: field.data.len() });
        }
        self.nodal_sweep(field)?;
        self.interface_sweep()?;
        if self.viscous {
            self.gradient_sweep(field, true)?;
            self.viscous_interface_sweep();
        }
        self.divergence_sweep(out, conserved);
        Ok(())
    }

    fn nodal_sweep(&mut self, field: &SolutionField<T>) -> Result<()> {
        let lay = self.lay;
        let (scheme, viscous, gas, ops) = (self.scheme, self.viscous, &self.gas, &self.ops);
        let separate_g = viscous && gradient_trace_blocks(scheme).1 == F_GDISC;
        let fl = lay.face_len();
        let fb = lay.face_block_len();
        let results: Vec<Result<()>> = self
            .nodal
            .par_chunks_mut(lay.nodal_len())
            .zip(self.face.par_chunks_mut(F_BLOCKS * fb))
            .enumerate()
            .map(|(e, (nodal, face))| {
                let stored = &field.data[e * lay.n3 * NV..(e + 1) * lay.n3 * NV];
                let (prim, rest) = nodal.split_at_mut(lay.n3 * NV);
                let (gvar, flux) = rest.split_at_mut(lay.n3 * NV);
                for node in 0..lay.n3 {
                    let s = read5(stored, node * NV);
                    let q = unstore(scheme, s, gas).map_err(|err| err.at(Site::Node { element: e, node }, scheme))?;
                    write5(prim, node * NV, &q.to_array());
                    write5(gvar, node * NV, &gradient_vars(scheme, s, &q));
                    for axis in 0..3 {
                        let f = route_flux(scheme, s, axis, gas)
                            .map_err(|err| err.at(Site::Node { element: e, node }, scheme))?;
                        write5(flux, (axis * lay.n3 + node) * NV, &f);
                    }
                }
                let (st_blk, rest) = face.split_at_mut(fb);
                let (cons_blk, rest) = rest.split_at_mut(fb);
                let (prim_blk, rest) = rest.split_at_mut(fb);
                let (gside_blk, gdisc_blk) = rest.split_at_mut(fb);
                for f in 0..6 {
                    let (axis, side) = (f / 2, f % 2);
                    let st = &mut st_blk[f * fl..(f + 1) * fl];
                    extrapolate(&lay, &ops.extrap[side], stored, NV, axis, st);
                    if separate_g {
                        extrapolate(&lay, &ops.extrap[side], gvar, NV, axis, &mut gdisc_blk[f * fl..(f + 1) * fl]);
                    }
                    for fp in 0..lay.n2 {
                        let s = read5(st, fp * NV);
                        let site = Site::Face { element: e, face: f, point: fp };
                        let q = unstore(scheme, s, gas).map_err(|err| err.at(site, scheme))?;
                        let c = to_conserved(scheme, s, &q, gas).map_err(|err| err.at(site, scheme))?;
                        write5(prim_blk, f * fl + fp * NV, &q.to_array());
                        write5(cons_blk, f * fl + fp * NV, &c);
                        if separate_g {
                            write5(gside_blk, f * fl + fp * NV, &q.to_array());
                        }
                    }
                }
                Ok(())
            })
            .collect();
        first_error(results)
    }

    fn interface_sweep(&mut self) -> Result<()> {
        let lay = self.lay;
        let (scheme, viscous, gas, mesh) = (self.scheme, self.viscous, &self.gas, &self.mesh);
        let face = &self.face;
        let fl = lay.face_len();
        let fb = lay.face_block_len();
        let half = T::of(0.5);
        let results: Vec<Result<()>> = self
            .iface
            .par_chunks_mut(lay.iface_len())
            .enumerate()
            .map(|(e, iface)| {
                let (f_int, g_int) = iface.split_at_mut(3 * fl);
                for axis in 0..3 {
                    let l = mesh.neighbour(e, axis, 0);
                    let (lf, rf) = (2 * axis + 1, 2 * axis);
                    let blk = |el: usize, which: usize, f: usize| {
                        let o = el * F_BLOCKS * fb + which * fb + f * fl;
                        &face[o..o + fl]
                    };
                    let (st_l, st_r) = (blk(l, F_STORED, lf), blk(e, F_STORED, rf));
                    let (c_l, c_r) = (blk(l, F_CONS, lf), blk(e, F_CONS, rf));
                    let (p_l, p_r) = (blk(l, F_PRIM, lf), blk(e, F_PRIM, rf));
                    for fp in 0..lay.n2 {
                        let at = fp * NV;
                        let site = Site::Face { element: e, face: rf, point: fp };
                        let ql = PrimitiveState::from_array(read5(p_l, at));
                        let qr = PrimitiveState::from_array(read5(p_r, at));
                        let s = davis_wave_speed(&ql, &qr, axis, gas);
                        let fl_ = route_flux(scheme, read5(st_l, at), axis, gas).map_err(|x| x.at(site, scheme))?;
                        let fr_ = route_flux(scheme, read5(st_r, at), axis, gas).map_err(|x| x.at(site, scheme))?;
                        let common = rusanov_combine(&fl_, &fr_, &read5(c_l, at), &read5(c_r, at), s);
                        write5(f_int, axis * fl + at, &common);
                        if viscous {
                            let (gs, _) = gradient_trace_blocks(scheme);
                            let (gl, gr) = (blk(l, gs, lf), blk(e, gs, rf));
                            let mut g = [T::zero(); 5];
                            for k in 0..NV {
                                g[k] = half * (gl[at + k] + gr[at + k]);
                            }
                            write5(g_int, axis * fl + at, &g);
                        }
                    }
                }
                Ok(())
            })
            .collect();
        first_error(results)
    }

    fn gradient_sweep(&mut self, field: &SolutionField<T>, with_flux: bool) -> Result<()> {
        let lay = self.lay;
        let (scheme, gas, ops, mesh, scale) = (self.scheme, &self.gas, &self.ops, &self.mesh, self.scale);
        let (face, iface) = (&self.face, &self.iface);
        let fl = lay.face_len();
        let fb = lay.face_block_len();
        let results: Vec<Result<()>> = self
            .nodal
            .par_chunks_mut(lay.nodal_len())
            .zip(self.grad.par_chunks_mut(lay.n3 * NG))
            .zip(self.fv.par_chunks_mut(fb))
            .enumerate()
            .map(|(e, ((nodal, grad), fv))| {
                let stored = &field.data[e * lay.n3 * NV..(e + 1) * lay.n3 * NV];
                let (prim, rest) = nodal.split_at_mut(lay.n3 * NV);
                let (gvar, flux) = rest.split_at_mut(lay.n3 * NV);
                let face_e = &face[e * F_BLOCKS * fb..(e + 1) * F_BLOCKS * fb];
                let mut dg = vec![T::zero(); lay.n3 * NG];
                let mut jl = vec![T::zero(); fl];
                let mut jr = vec![T::zero(); fl];
                for axis in 0..3 {
                    let r = mesh.neighbour(e, axis, 1);
                    let g_own = &iface[e * lay.iface_len() + 3 * fl + axis * fl..][..fl];
                    let g_nbr = &iface[r * lay.iface_len() + 3 * fl + axis * fl..][..fl];
                    let gd = gradient_trace_blocks(scheme).1;
                    let gd_l = &face_e[gd * fb + 2 * axis * fl..][..fl];
                    let gd_r = &face_e[gd * fb + (2 * axis + 1) * fl..][..fl];
                    for k in 0..fl {
                        jl[k] = g_own[k] - gd_l[k];
                        jr[k] = g_nbr[k] - gd_r[k];
                    }
                    corrected_derivative(&lay, ops, gvar, axis, [&jl, &jr], scale[axis], |node, d| {
                        for v in 0..NV {
                            dg[node * NG + 3 * v + axis] = d[v];
                        }
                    });
                }
                for node in 0..lay.n3 {
                    let mut d = [[T::zero(); 3]; 5];
                    for v in 0..NV {
                        let o = node * NG + 3 * v;
                        d[v] = [dg[o], dg[o + 1], dg[o + 2]];
                    }
                    let q = PrimitiveState::from_array(read5(prim, node * NV));
                    let blk = match scheme {
                        StorageScheme::C => {
                            gradient_from_conserved(&ConservedState::from_array(read5(stored, node * NV)), &d, gas)
                        }
                        _ => gradient_from_primitive(&q, &d, gas),
                    }
                    .map_err(|x| x.at(Site::Node { element: e, node }, scheme))?;
                    for v in 0..NV {
                        grad[node * NG + 3 * v..node * NG + 3 * v + 3].copy_from_slice(&blk.rows[v]);
                    }
                    if with_flux {
                        for axis in 0..3 {
                            let fvis = viscous_flux_axis(&q, &blk, axis, gas);
                            let o = (axis * lay.n3 + node) * NV;
                            for k in 0..NV {
                                flux[o + k] = flux[o + k] - fvis[k];
                            }
                        }
                    }
                }
                if with_flux {
                    let mut bt = vec![T::zero(); lay.n2 * NG];
                    for f in 0..6 {
                        let (axis, side) = (f / 2, f % 2);
                        extrapolate(&lay, &ops.extrap[side], grad, NG, axis, &mut bt);
                        let pt = &face_e[F_PRIM * fb + f * fl..][..fl];
                        for fp in 0..lay.n2 {
                            let q = PrimitiveState::from_array(read5(pt, fp * NV));
                            let mut rows = [[T::zero(); 3]; 5];
                            for v in 0..NV {
                                let o = fp * NG + 3 * v;
                                rows[v] = [bt[o], bt[o + 1], bt[o + 2]];
                            }
                            let fvis = viscous_flux_axis(&q, &GradientBlock { rows }, axis, gas);
                            write5(fv, f * fl + fp * NV, &fvis);
                        }
                    }
                }
                Ok(())
            })
            .collect();
        first_error(results)
    }

    fn viscous_interface_sweep(&mut self) {
        let lay = self.lay;
        let (mesh, fv) = (&self.mesh, &self.fv);
        let fl = lay.face_len();
        let fb = lay.face_block_len();
        let half = T::of(0.5);
        self.iface.par_chunks_mut(lay.iface_len()).enumerate().for_each(|(e, iface)| {
            for axis in 0..3 {
                let l = mesh.neighbour(e, axis, 0);
                let a = &fv[l * fb + (2 * axis + 1) * fl..][..fl];
                let b = &fv[e * fb + 2 * axis * fl..][..fl];
                let f_int = &mut iface[axis * fl..(axis + 1) * fl];
                for k in 0..fl {
                    f_int[k] = f_int[k] - half * (a[k] + b[k]);
                }
            }
        });
    }

    fn divergence_sweep(&mut self, out: &mut [T], conserved: bool) {
        let lay = self.lay;
        let (scheme, gas, ops, mesh, scale) = (self.scheme, &self.gas, &self.ops, &self.mesh, self.scale);
        let (nodal, iface) = (&self.nodal, &self.iface);
        let fl = lay.face_len();
        out.par_chunks_mut(lay.n3 * NV).enumerate().for_each(|(e, res)| {
            let nod = &nodal[e * lay.nodal_len()..(e + 1) * lay.nodal_len()];
            let prim = &nod[..lay.n3 * NV];
            let flux = &nod[2 * lay.n3 * NV..];
            res.iter_mut().for_each(|x| *x = T::zero());
            let mut jl = vec![T::zero(); fl];
            let mut jr = vec![T::zero(); fl];
            for axis in 0..3 {
                let fa = &flux[axis * lay.n3 * NV..(axis + 1) * lay.n3 * NV];
                extrapolate(&lay, &ops.extrap[0], fa, NV, axis, &mut jl);
                extrapolate(&lay, &ops.extrap[1], fa, NV, axis, &mut jr);
                let r = mesh.neighbour(e, axis, 1);
                let own = &iface[e * lay.iface_len() + axis * fl..][..fl];
                let nbr = &iface[r * lay.iface_len() + axis * fl..][..fl];
                for k in 0..fl {
                    jl[k] = own[k] - jl[k];
                    jr[k] = nbr[k] - jr[k];
                }
                corrected_derivative(&lay, ops, fa, axis, [&jl, &jr], scale[axis], |node, d| {
                    for k in 0..NV {
                        res[node * NV + k] = res[node * NV + k] - d[k];
                    }
                });
            }
            if !conserved && scheme != StorageScheme::B && scheme != StorageScheme::C {
                for node in 0..lay.n3 {
                    let q = PrimitiveState::from_array(read5(prim, node * NV));
                    let r = stored_rate(scheme, read5(res, node * NV), &q, gas);
                    write5(res, node * NV, &r);
                }
            }
        });
    }
}

/// One-shot residual of the stored variables.
pub fn residual_3d<T: Real>(
    field: &SolutionField<T>,
    gas: &GasModel,
    ops: &ReferenceOps,
    viscous: bool,
) -> Result<Residual<T>> {
    let mut op = NavierStokes::new(field.mesh.clone(), ops, field.scheme, gas, viscous);
    let mut r = Residual::zeros(field.scheme, field.data.len());
    op.residual(field, &mut r.data)?;
    Ok(r)
}
