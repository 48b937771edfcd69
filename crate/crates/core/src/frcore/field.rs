use crate::error::{Error, Result, Site};
use crate::gasmodel::{
    cons_to_prim, mixed_to_prim, prim_to_cons, prim_to_mixed, ConservedState, GasModel, MixedState, PrimitiveState,
};
use crate::real::{Precision, Real};
use crate::refelem::gauss_legendre_rule;

use super::{Mesh, StorageScheme};

/// Nodal solution in the scheme's stored variables.
///
/// `data` is laid out `[element][node][component]` with
/// `node = i + n (j + n k)` and `n = p + 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionField<T = f64> {
    pub scheme: StorageScheme,
    pub order: usize,
    pub mesh: Mesh,
    /// Ratio of specific heats the stored values were converted with.
    pub gamma: f64,
    pub data: Vec<T>,
}

/// Time derivative of the stored variables, same layout as [`SolutionField`].
#[derive(Debug, Clone, PartialEq)]
pub struct Residual<T = f64> {
    pub scheme: StorageScheme,
    pub data: Vec<T>,
}

impl<T: Real> Residual<T> {
    pub fn zeros(scheme: StorageScheme, len: usize) -> Self {
        Residual { scheme, data: vec![T::zero(); len] }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.to_f64_lossless().abs()))
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

/// Convert a primitive state to the scheme's stored set.
#[inline]
pub fn store<T: Real>(scheme: StorageScheme, q: &PrimitiveState<T>, gas: &GasModel<T>) -> [T; 5] {
    match scheme {
        StorageScheme::A => q.to_array(),
        StorageScheme::B | StorageScheme::C => prim_to_cons(q, gas).to_array(),
        StorageScheme::D => prim_to_mixed(q).to_array(),
    }
}

/// Convert a stored tuple back to primitives.
#[inline]
pub fn unstore<T: Real>(scheme: StorageScheme, s: [T; 5], gas: &GasModel<T>) -> Result<PrimitiveState<T>> {
    match scheme {
        StorageScheme::A => {
            let q = PrimitiveState::from_array(s);
            if q.rho > T::zero() && q.p > T::zero() {
                Ok(q)
            } else {
                Err(Error::nonphysical(q.rho.to_f64_lossless(), q.p.to_f64_lossless()))
            }
        }
        StorageScheme::B | StorageScheme::C => cons_to_prim(&ConservedState::from_array(s), gas),
        StorageScheme::D => mixed_to_prim(&MixedState::from_array(s)),
    }
}

impl<T: Real> SolutionField<T> {
    /// Sample `init` at every solution point and store it.
    pub fn from_fn(
        mesh: Mesh,
        order: usize,
        scheme: StorageScheme,
        gas: &GasModel,
        init: impl Fn([f64; 3]) -> PrimitiveState,
    ) -> Result<Self> {
        let rule = gauss_legendre_rule(order)?;
        let n = order + 1;
        let npe = n * n * n;
        let g = gas.cast::<T>();
        let mut data = Vec::with_capacity(mesh.n_elements() * npe * 5);
        for e in 0..mesh.n_elements() {
            let c = mesh.element_coords(e);
            for node in 0..npe {
                let (i, j, k) = (node % n, (node / n) % n, node / (n * n));
                let x = [
                    mesh.map(0, c[0], rule.points[i]),
                    mesh.map(1, c[1], rule.points[j]),
                    mesh.map(2, c[2], rule.points[k]),
                ];
                let q = init(x);
                let qt = PrimitiveState::from_array(q.to_array().map(T::of));
                data.extend_from_slice(&store(scheme, &qt, &g));
            }
        }
        let field = SolutionField { scheme, order, mesh, gamma: gas.gamma, data };
        field.check_physical(&g)?;
        Ok(field)
    }

    /// Enough of a gas model for state conversions.
    pub(crate) fn gas_for_update(&self) -> GasModel<T> {
        let g = T::of(self.gamma);
        GasModel { gamma: g, r: T::one(), cv: T::one() / (g - T::one()), mu: T::zero(), pr: T::one(), kappa: T::zero() }
    }

    pub fn precision(&self) -> Precision {
        T::PRECISION
    }

    pub fn n_points(&self) -> usize {
        self.order + 1
    }

    pub fn nodes_per_element(&self) -> usize {
        self.n_points().pow(3)
    }

    pub fn n_nodes(&self) -> usize {
        self.mesh.n_elements() * self.nodes_per_element()
    }

    #[inline]
    pub fn stored(&self, element: usize, node: usize) -> [T; 5] {
        let o = (element * self.nodes_per_element() + node) * 5;
        [self.data[o], self.data[o + 1], self.data[o + 2], self.data[o + 3], self.data[o + 4]]
    }

    pub fn primitive(&self, element: usize, node: usize, gas: &GasModel<T>) -> Result<PrimitiveState<T>> {
        unstore(self.scheme, self.stored(element, node), gas)
            .map_err(|e| e.at(Site::Node { element, node }, self.scheme))
    }

    /// Physical coordinates of every solution point, in storage order.
    pub fn node_coords(&self) -> Vec<[f64; 3]> {
        node_coords(&self.mesh, self.order)
    }

    /// First non-physical node, if any.
    pub fn check_physical(&self, gas: &GasModel<T>) -> Result<()> {
        let npe = self.nodes_per_element();
        for e in 0..self.mesh.n_elements() {
            for node in 0..npe {
                self.primitive(e, node, gas)?;
            }
        }
        Ok(())
    }

    /// All nodal primitives, in `f64`.
    pub fn primitives_f64(&self, gas: &GasModel<T>) -> Result<Vec<PrimitiveState>> {
        let npe = self.nodes_per_element();
        let mut out = Vec::with_capacity(self.n_nodes());
        for e in 0..self.mesh.n_elements() {
            for node in 0..npe {
                out.push(self.primitive(e, node, gas)?.cast());
            }
        }
        Ok(out)
    }

    /// Same solution in another storage scheme (converted node by node).
    pub fn restore_as(&self, scheme: StorageScheme, gas: &GasModel<T>) -> Result<Self> {
        let npe = self.nodes_per_element();
        let mut data = Vec::with_capacity(self.data.len());
        for e in 0..self.mesh.n_elements() {
            for node in 0..npe {
                data.extend_from_slice(&store(scheme, &self.primitive(e, node, gas)?, gas));
            }
        }
        Ok(SolutionField { scheme, order: self.order, mesh: self.mesh.clone(), gamma: self.gamma, data })
    }
}

pub(crate) fn node_coords(mesh: &Mesh, order: usize) -> Vec<[f64; 3]> {
    let pts = crate::refelem::gauss_legendre(order + 1).0;
    let n = order + 1;
    let mut out = Vec::with_capacity(mesh.n_elements() * n * n * n);
    for e in 0..mesh.n_elements() {
        let c = mesh.element_coords(e);
        for k in 0..n {
            for j in 0..n {
                for i in 0..n {
                    out.push([mesh.map(0, c[0], pts[i]), mesh.map(1, c[1], pts[j]), mesh.map(2, c[2], pts[k])]);
                }
            }
        }
    }
    out
}
