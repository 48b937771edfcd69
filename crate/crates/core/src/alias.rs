//! Aliasing and interpolation-remainder analysis on `[-1, 1]`.
//!
//! All remainder norms are brute force: the interpolant is built on the
//! given nodes and compared with the function on a dense uniform grid. The
//! closed-form bounds are evaluated exactly for reporting only.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rand::Rng;

use crate::error::{Error, Result};
use crate::refelem::{gauss_legendre, lagrange_basis, lagrange_basis_deriv, legendre_eval};

/// Dense grid size for remainder norms.
pub const DENSE_POINTS: usize = 10_000;

/// Legendre expansion `Σ c_n ψ_n(ξ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct LegendreSeries {
    pub coeffs: Vec<f64>,
}

impl LegendreSeries {
    pub fn new(coeffs: Vec<f64>) -> Self {
        Self { coeffs }
    }

    /// Coefficients uniform in `[-1, 1]`, modes `0..=order`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R, order: usize) -> Self {
        Self::new((0..=order).map(|_| rng.random_range(-1.0..=1.0)).collect())
    }

    /// Unit-magnitude coefficients `±1` with independent random signs.
    pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, order: usize) -> Self {
        Self::new((0..=order).map(|_| if rng.random_bool(0.5) { 1.0 } else { -1.0 }).collect())
    }

    pub fn max_order(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_deriv(x).0
    }

    /// Value and first derivative by running the Legendre recurrences once.
    pub fn eval_with_deriv(&self, x: f64) -> (f64, f64) {
        let Some(&c0) = self.coeffs.first() else {
            return (0.0, 0.0);
        };
        let (mut val, mut der) = (c0, 0.0);
        let (mut p_prev, mut p_cur) = (1.0, x);
        let (mut d_prev, mut d_cur) = (0.0, 1.0);
        for (k, &c) in self.coeffs.iter().enumerate().skip(1) {
            if k > 1 {
                let kf = (k - 1) as f64;
                let p_next = ((2.0 * kf + 1.0) * x * p_cur - kf * p_prev) / (kf + 1.0);
                let d_next = d_prev + (2.0 * kf + 1.0) * p_cur;
                p_prev = p_cur;
                p_cur = p_next;
                d_prev = d_cur;
                d_cur = d_next;
            }
            val += c * p_cur;
            der += c * d_cur;
        }
        (val, der)
    }

    /// Series of the derivative, by mode differentiation:
    /// `b_k = (2k+1) Σ_{n > k, n - k odd} c_n`.
    pub fn derivative(&self) -> LegendreSeries {
        let n = self.coeffs.len();
        if n <= 1 {
            return LegendreSeries::new(vec![0.0]);
        }
        let mut b = vec![0.0; n - 1];
        // Running sums over modes of each parity, from the top down.
        let mut tail = [0.0_f64; 2];
        for k in (0..n - 1).rev() {
            tail[(k + 1) % 2] += self.coeffs[k + 1];
            b[k] = (2 * k + 1) as f64 * tail[(k + 1) % 2];
        }
        LegendreSeries::new(b)
    }

    /// Series with modes `>= from` zeroed out.
    pub fn truncated(&self, from: usize) -> LegendreSeries {
        let mut c = self.coeffs.clone();
        c.iter_mut().skip(from).for_each(|v| *v = 0.0);
        LegendreSeries::new(c)
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }
}

/// Least-squares projection onto `ψ_0..ψ_maxOrder`:
/// `c_n = (2n+1)/2 ∫ f ψ_n dξ` with a `(quad_order + 1)`-point Gauss rule.
pub fn project_legendre(f: impl Fn(f64) -> f64, max_order: usize, quad_order: usize) -> Result<LegendreSeries> {
    if quad_order < max_order {
        return Err(Error::UnderIntegrated { max_order, quad_order });
    }
    let (x, w) = gauss_legendre(quad_order + 1);
    let fx: Vec<f64> = x.iter().map(|&xi| f(xi)).collect();
    let coeffs = (0..=max_order)
        .map(|n| {
            let s: f64 = x.iter().zip(&w).zip(&fx).map(|((&xi, &wi), &fi)| wi * fi * legendre_eval(n, xi)).sum();
            0.5 * (2 * n + 1) as f64 * s
        })
        .collect();
    Ok(LegendreSeries::new(coeffs))
}

/// Energy of the modes an order-`p` space cannot hold:
/// `Σ_{n >= p} 2 (c'_n)^2 / (2n + 1)` for a derivative series `c'`.
pub fn aliasing_energy(derivative: &LegendreSeries, p: usize) -> f64 {
    derivative.coeffs.iter().enumerate().skip(p).map(|(n, c)| 2.0 * c * c / (2 * n + 1) as f64).sum()
}

/// Sup-norms of the interpolation remainder `f - L_p f` and its derivative,
/// plus the remainder at the two interfaces.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RemainderReport {
    pub p: usize,
    pub norm_interp: f64,
    pub norm_grad: f64,
    pub edge_left: f64,
    pub edge_right: f64,
}

impl RemainderReport {
    pub fn edge_max(&self) -> f64 {
        self.edge_left.max(self.edge_right)
    }
}

/// Brute-force remainder norms of interpolating `f` on `nodes`.
///
/// `df` supplies `f'`; without it a fourth-order central difference with
/// step `1e-4` is used, so `f` must be defined slightly outside `[-1, 1]`.
pub fn remainder_report(
    f: impl Fn(f64) -> f64,
    df: Option<&dyn Fn(f64) -> f64>,
    nodes: &[f64],
    dense_n: usize,
) -> Result<RemainderReport> {
    if dense_n < 1000 {
        return Err(Error::InvalidParameter { name: "dense_n", reason: format!("{dense_n} < 1000") });
    }
    if nodes.is_empty() {
        return Err(Error::LengthMismatch { what: "nodes", got: 0, expected: 1 });
    }
    for (i, a) in nodes.iter().enumerate() {
        if nodes[..i].contains(a) {
            return Err(Error::DuplicateNode { index: i, value: *a });
        }
    }
    let fd = |x: f64| {
        let h = 1e-4;
        (-f(x + 2.0 * h) + 8.0 * f(x + h) - 8.0 * f(x - h) + f(x - 2.0 * h)) / (12.0 * h)
    };
    let deriv = |x: f64| match df {
        Some(d) => d(x),
        None => fd(x),
    };
    let fv: Vec<f64> = nodes.iter().map(|&x| f(x)).collect();
    let interp = |x: f64| -> (f64, f64) {
        let l = lagrange_basis(nodes, x);
        let dl = lagrange_basis_deriv(nodes, x);
        let v = l.iter().zip(&fv).map(|(a, b)| a * b).sum();
        let d = dl.iter().zip(&fv).map(|(a, b)| a * b).sum();
        (v, d)
    };
    let mut norm_interp = 0.0_f64;
    let mut norm_grad = 0.0_f64;
    for k in 0..dense_n {
        let x = -1.0 + 2.0 * k as f64 / (dense_n - 1) as f64;
        let (v, d) = interp(x);
        norm_interp = norm_interp.max((f(x) - v).abs());
        norm_grad = norm_grad.max((deriv(x) - d).abs());
    }
    Ok(RemainderReport {
        p: nodes.len() - 1,
        norm_interp,
        norm_grad,
        edge_left: (f(-1.0) - interp(-1.0).0).abs(),
        edge_right: (f(1.0) - interp(1.0).0).abs(),
    })
}

/// The two ways of forming the flux of the squared Burgers problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FluxVariant {
    /// `f = u^2` (store `u^2`, square it once more is not needed).
    F2,
    /// `f = u^4` (store `u`, raise to the fourth power).
    F4,
}

impl FluxVariant {
    pub fn name(self) -> &'static str {
        match self {
            FluxVariant::F2 => "F2",
            FluxVariant::F4 => "F4",
        }
    }
}

/// Remainder report for `u^2` or `u^4` interpolated on `nodes`.
pub fn flux_remainder_study(u: &LegendreSeries, variant: FluxVariant, nodes: &[f64]) -> Result<RemainderReport> {
    let power = match variant {
        FluxVariant::F2 => 2,
        FluxVariant::F4 => 4,
    };
    let f = |x: f64| u.eval(x).powi(power);
    let df = |x: f64| {
        let (v, d) = u.eval_with_deriv(x);
        power as f64 * v.powi(power - 1) * d
    };
    remainder_report(f, Some(&df), nodes, DENSE_POINTS)
}

fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * BigInt::from(k))
}

fn pow2(n: u64) -> BigInt {
    BigInt::one() << n as usize
}

fn check_bound_order(p: usize) -> Result<()> {
    if p == 0 || p > crate::refelem::MAX_ORDER {
        return Err(Error::OrderOutOfRange { order: p, max: crate::refelem::MAX_ORDER });
    }
    Ok(())
}

fn ratio_to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::INFINITY)
}

/// Exact factor `4 (3p+1)! / (2^{2p} p! (2p)! (p+1)!)` of the `u^2` bound.
pub fn bound_r2_factor(p: usize) -> Result<BigRational> {
    check_bound_order(p)?;
    let p = p as u64;
    Ok(BigRational::new(
        BigInt::from(4) * factorial(3 * p + 1),
        pow2(2 * p) * factorial(p) * factorial(2 * p) * factorial(p + 1),
    ))
}

/// Exact factor `4 (5p+1)! / (2^{4p} (3p)! (4p)! (p+1)!)` of the `u^4` bound.
pub fn bound_r4_factor(p: usize) -> Result<BigRational> {
    check_bound_order(p)?;
    let p = p as u64;
    Ok(BigRational::new(
        BigInt::from(4) * factorial(5 * p + 1),
        pow2(4 * p) * factorial(3 * p) * factorial(4 * p) * factorial(p + 1),
    ))
}

/// Closed-form bound on `‖R_p u^2‖∞` for a flux whose largest Legendre
/// coefficient is `max_coeff`.
pub fn bound_r2(p: usize, max_coeff: f64) -> Result<f64> {
    Ok(ratio_to_f64(&bound_r2_factor(p)?) * max_coeff)
}

/// Closed-form bound on `‖R_p u^4‖∞`.
pub fn bound_r4(p: usize, max_coeff: f64) -> Result<f64> {
    Ok(ratio_to_f64(&bound_r4_factor(p)?) * max_coeff)
}

/// Both sides of the claimed ordering
/// `(3p+1)!/(2^{2p} p! (2p)!) <= (5p+1)!/(2^{4p} (3p)! (4p)!)`, evaluated exactly.
#[derive(Debug, Clone, PartialEq)]
pub struct InequalityAudit {
    pub p: usize,
    pub lhs: BigRational,
    pub rhs: BigRational,
}

impl InequalityAudit {
    pub fn holds(&self) -> bool {
        self.lhs <= self.rhs
    }
}

pub fn inequality_audit(p: usize) -> Result<InequalityAudit> {
    check_bound_order(p)?;
    let q = p as u64;
    Ok(InequalityAudit {
        p,
        lhs: BigRational::new(factorial(3 * q + 1), pow2(2 * q) * factorial(q) * factorial(2 * q)),
        rhs: BigRational::new(factorial(5 * q + 1), pow2(4 * q) * factorial(3 * q) * factorial(4 * q)),
    })
}

/// One row of the remainder sweep table.
#[derive(Debug, Clone, PartialEq)]
pub struct RemainderRow {
    pub p: usize,
    pub variant: FluxVariant,
    pub report: RemainderReport,
    pub bound_r2: f64,
    pub bound_r4: f64,
}

/// For each order, draw `samples` random unit-coefficient series of order `p`
/// and report the median remainder of each flux variant on Gauss nodes.
pub fn remainder_sweep<R: Rng + ?Sized>(rng: &mut R, orders: &[usize], samples: usize) -> Result<Vec<RemainderRow>> {
    let mut rows = Vec::new();
    for &p in orders {
        let nodes = crate::refelem::gauss_legendre_rule(p)?.points;
        let mut reports = [Vec::new(), Vec::new()];
        for _ in 0..samples.max(1) {
            let u = LegendreSeries::random_unit(rng, p);
            reports[0].push(flux_remainder_study(&u, FluxVariant::F2, &nodes)?);
            reports[1].push(flux_remainder_study(&u, FluxVariant::F4, &nodes)?);
        }
        for (variant, reps) in [FluxVariant::F2, FluxVariant::F4].into_iter().zip(reports) {
            let med = |sel: fn(&RemainderReport) -> f64| median(reps.iter().map(sel).collect());
            rows.push(RemainderRow {
                p,
                variant,
                report: RemainderReport {
                    p,
                    norm_interp: med(|r| r.norm_interp),
                    norm_grad: med(|r| r.norm_grad),
                    edge_left: med(|r| r.edge_left),
                    edge_right: med(|r| r.edge_right),
                },
                bound_r2: bound_r2(p, 1.0)?,
                bound_r4: bound_r4(p, 1.0)?,
            });
        }
    }
    Ok(rows)
}

pub fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(|a, b| a.total_cmp(b));
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

pub const REMAINDER_CSV_HEADER: &str = "p,variant,normInterp,normGrad,edgeL,edgeR,bound_r2,bound_r4";

pub fn remainder_csv(rows: &[RemainderRow]) -> String {
    let mut out = String::from(REMAINDER_CSV_HEADER);
    out.push('\n');
    for r in rows {
        out.push_str(&format!(
            "{},{},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.p,
            r.variant.name(),
            r.report.norm_interp,
            r.report.norm_grad,
            r.report.edge_left,
            r.report.edge_right,
            r.bound_r2,
            r.bound_r4
        ));
    }
    out
}
