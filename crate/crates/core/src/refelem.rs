//! One-dimensional reference element on `[-1, 1]`.
//!
//! Solution points are the Gauss–Legendre points; the correction functions
//! are the left/right Radau polynomials, which make FR reproduce nodal DG.

use crate::error::{Error, Result};
use crate::real::Real;

/// Highest order the solver accepts. Factorial terms in the remainder bounds
/// stop being representable shortly after this.
pub const MAX_ORDER: usize = 10;

/// Gauss–Legendre points and weights for an order-`p` element (`p + 1` points).
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub points: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Integrate `f` over `[-1, 1]`.
    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

pub fn gauss_legendre_rule(p: usize) -> Result<QuadratureRule> {
    if p > MAX_ORDER {
        return Err(Error::OrderOutOfRange { order: p, max: MAX_ORDER });
    }
    let (points, weights) = gauss_legendre(p + 1);
    Ok(QuadratureRule { order: p, points, weights })
}

/// `n`-point Gauss–Legendre rule with no order cap, ascending points.
///
/// Used for projections and diagnostics where many points are needed.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1, "a quadrature rule needs at least one point");
    let mut points = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let half = n.div_ceil(2);
    for i in 0..half {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (pn, dpn) = legendre_with_deriv(n, x);
            let dx = pn / dpn;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, dpn) = legendre_with_deriv(n, x);
        let w = 2.0 / ((1.0 - x * x) * dpn * dpn);
        // Newton from the cosine guess lands on roots in descending order.
        points[n - 1 - i] = x;
        points[i] = -x;
        weights[n - 1 - i] = w;
        weights[i] = w;
    }
    if n % 2 == 1 {
        points[n / 2] = 0.0;
    }
    (points, weights)
}

/// Legendre polynomial `ψ_n(x)` by the three-term recurrence.
pub fn legendre_eval(n: usize, x: f64) -> f64 {
    legendre_with_deriv(n, x).0
}

/// `(ψ_n(x), ψ_n'(x))`. The derivative uses `ψ'_{k+1} = ψ'_{k-1} + (2k+1) ψ_k`,
/// which is valid at the endpoints too.
pub fn legendre_with_deriv(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p_prev, mut p_cur) = (1.0, x);
    let (mut d_prev, mut d_cur) = (0.0, 1.0);
    for k in 1..n {
        let kf = k as f64;
        let p_next = ((2.0 * kf + 1.0) * x * p_cur - kf * p_prev) / (kf + 1.0);
        let d_next = d_prev + (2.0 * kf + 1.0) * p_cur;
        p_prev = p_cur;
        p_cur = p_next;
        d_prev = d_cur;
        d_cur = d_next;
    }
    (p_cur, d_cur)
}

/// `d^m ψ_n / dξ^m` at `ξ = +1`; the value at `-1` is this times `(-1)^(n-m)`.
///
/// Built from the derivative recurrence
/// `ψ^{(m)}_{k+1} = ψ^{(m)}_{k-1} + (2k+1) ψ^{(m-1)}_k` evaluated at 1.
/// Returns 0 for `m > n`.
pub fn legendre_deriv_edge(n: usize, m: usize) -> f64 {
    if m > n {
        return 0.0;
    }
    // table[k][j] = ψ_k^{(j)}(1)
    let mut table = vec![vec![0.0_f64; m + 1]; n + 1];
    table[0][0] = 1.0;
    if n >= 1 {
        table[1][0] = 1.0;
        if m >= 1 {
            table[1][1] = 1.0;
        }
    }
    for k in 1..n {
        table[k + 1][0] = 1.0;
        for j in 1..=m {
            table[k + 1][j] = table[k - 1][j] + (2 * k + 1) as f64 * table[k][j - 1];
        }
    }
    table[n][m]
}

fn check_distinct(nodes: &[f64]) -> Result<()> {
    for (i, a) in nodes.iter().enumerate() {
        if nodes[..i].contains(a) {
            return Err(Error::DuplicateNode { index: i, value: *a });
        }
    }
    Ok(())
}

/// Value at `x` of the unique polynomial of degree `< nodes.len()` through
/// `(nodes[i], values[i])`.
pub fn lagrange_interp(nodes: &[f64], values: &[f64], x: f64) -> Result<f64> {
    if values.len() != nodes.len() {
        return Err(Error::LengthMismatch { what: "values", got: values.len(), expected: nodes.len() });
    }
    check_distinct(nodes)?;
    Ok(lagrange_basis(nodes, x).iter().zip(values).map(|(l, v)| l * v).sum())
}

/// All Lagrange basis functions `l_i(x)` for distinct `nodes`.
pub fn lagrange_basis(nodes: &[f64], x: f64) -> Vec<f64> {
    let n = nodes.len();
    (0..n).map(|i| (0..n).filter(|&j| j != i).map(|j| (x - nodes[j]) / (nodes[i] - nodes[j])).product()).collect()
}

/// Derivatives `l_i'(x)` of the Lagrange basis.
pub fn lagrange_basis_deriv(nodes: &[f64], x: f64) -> Vec<f64> {
    let n = nodes.len();
    (0..n)
        .map(|i| {
            let mut sum = 0.0;
            for k in (0..n).filter(|&k| k != i) {
                let mut term = 1.0 / (nodes[i] - nodes[k]);
                for j in (0..n).filter(|&j| j != i && j != k) {
                    term *= (x - nodes[j]) / (nodes[i] - nodes[j]);
                }
                sum += term;
            }
            sum
        })
        .collect()
}

/// Nodal differentiation matrix `D[i][j] = l_j'(ξ_i)`, row-major.
///
/// Off-diagonal entries come from barycentric weights; each diagonal is the
/// negative row sum so constants differentiate to zero.
pub fn differentiation_matrix(nodes: &[f64]) -> Vec<f64> {
    let n = nodes.len();
    let bary: Vec<f64> =
        (0..n).map(|j| 1.0 / (0..n).filter(|&k| k != j).map(|k| nodes[j] - nodes[k]).product::<f64>()).collect();
    let mut d = vec![0.0; n * n];
    for i in 0..n {
        let mut row_sum = 0.0;
        for j in (0..n).filter(|&j| j != i) {
            let v = bary[j] / bary[i] / (nodes[i] - nodes[j]);
            d[i * n + j] = v;
            row_sum += v;
        }
        d[i * n + i] = -row_sum;
    }
    d
}

/// Right correction function `h_R = (ψ_{p+1} + ψ_p) / 2` (right Radau).
pub fn correction_right(p: usize, x: f64) -> f64 {
    0.5 * (legendre_eval(p + 1, x) + legendre_eval(p, x))
}

/// Left correction function, the mirror image `h_L(ξ) = h_R(-ξ)`.
pub fn correction_left(p: usize, x: f64) -> f64 {
    correction_right(p, -x)
}

pub fn correction_right_deriv(p: usize, x: f64) -> f64 {
    0.5 * (legendre_with_deriv(p + 1, x).1 + legendre_with_deriv(p, x).1)
}

pub fn correction_left_deriv(p: usize, x: f64) -> f64 {
    -correction_right_deriv(p, -x)
}

/// Everything an order-`p` element needs, in `f64`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceOps {
    pub rule: QuadratureRule,
    /// Row-major `(p+1) x (p+1)` differentiation matrix.
    pub diff: Vec<f64>,
    /// Weights that evaluate the interpolant at `ξ = -1`.
    pub extrap_left: Vec<f64>,
    /// Weights that evaluate the interpolant at `ξ = +1`.
    pub extrap_right: Vec<f64>,
    /// `dh_L/dξ` at the solution points.
    pub corr_left: Vec<f64>,
    /// `dh_R/dξ` at the solution points.
    pub corr_right: Vec<f64>,
}

pub fn build_reference_ops(p: usize) -> Result<ReferenceOps> {
    let rule = gauss_legendre_rule(p)?;
    let x = &rule.points;
    Ok(ReferenceOps {
        diff: differentiation_matrix(x),
        extrap_left: lagrange_basis(x, -1.0),
        extrap_right: lagrange_basis(x, 1.0),
        corr_left: x.iter().map(|&xi| correction_left_deriv(p, xi)).collect(),
        corr_right: x.iter().map(|&xi| correction_right_deriv(p, xi)).collect(),
        rule,
    })
}

impl ReferenceOps {
    pub fn order(&self) -> usize {
        self.rule.order
    }

    /// Points per direction, `p + 1`.
    pub fn n_points(&self) -> usize {
        self.rule.len()
    }

    /// Apply `diff` to nodal samples.
    pub fn differentiate(&self, values: &[f64]) -> Vec<f64> {
        let n = self.n_points();
        (0..n).map(|i| (0..n).map(|j| self.diff[i * n + j] * values[j]).sum()).collect()
    }

    pub fn extrapolate(&self, values: &[f64]) -> (f64, f64) {
        let dot = |w: &[f64]| w.iter().zip(values).map(|(a, b)| a * b).sum::<f64>();
        (dot(&self.extrap_left), dot(&self.extrap_right))
    }

    /// Copy of the operators in working precision.
    pub fn cast<T: Real>(&self) -> LineOps<T> {
        let c = |v: &[f64]| v.iter().map(|&x| T::of(x)).collect::<Vec<T>>();
        LineOps {
            n: self.n_points(),
            diff: c(&self.diff),
            extrap: [c(&self.extrap_left), c(&self.extrap_right)],
            corr: [c(&self.corr_left), c(&self.corr_right)],
            weights: self.rule.weights.clone(),
            points: self.rule.points.clone(),
        }
    }
}

/// [`ReferenceOps`] in working precision, indexed by side (0 = left, 1 = right).
#[derive(Debug, Clone)]
pub struct LineOps<T> {
    pub n: usize,
    pub diff: Vec<T>,
    pub extrap: [Vec<T>; 2],
    pub corr: [Vec<T>; 2],
    /// Quadrature weights and points stay in `f64` (diagnostics only).
    pub weights: Vec<f64>,
    pub points: Vec<f64>,
}
