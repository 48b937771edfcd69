//! Gauss-Legendre points, the differentiation matrix and the Radau
//! correction derivatives for one reference element.
use fr_alias::refelem::{build_reference_ops, correction_left, correction_right, legendre_deriv_edge};

fn main() -> fr_alias::Result<()> {
    let p = 3;
    let ops = build_reference_ops(p)?;
    println!("p = {p}, {} solution points", ops.n_points());
    for (x, w) in ops.rule.points.iter().zip(&ops.rule.weights) {
        println!("  xi = {x:+.12}  w = {w:.12}");
    }

    // Exact for polynomials up to degree p.
    let cubic: Vec<f64> = ops.rule.points.iter().map(|x| x * x * x - x).collect();
    let d = ops.differentiate(&cubic);
    let (left, right) = ops.extrapolate(&cubic);
    println!("d/dxi (xi^3 - xi) at nodes: {d:.6?}");
    println!("traces: left {left:+.3e}, right {right:+.3e}");

    println!("correction slopes  left {:.6?}", ops.corr_left);
    println!("                  right {:.6?}", ops.corr_right);
    println!(
        "h_R(-1) = {}, h_R(1) = {}, h_L(-1) = {}",
        correction_right(p, -1.0),
        correction_right(p, 1.0),
        correction_left(p, -1.0)
    );
    for m in 0..=p {
        println!("d^{m} psi_{p}/dxi^{m} at +1 = {}", legendre_deriv_edge(p, m));
    }
    Ok(())
}
