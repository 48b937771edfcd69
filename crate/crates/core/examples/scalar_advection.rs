//! Linear advection of a sine wave with the 1D FR residual and RK44,
//! refined over element counts.
use std::f64::consts::PI;

use fr_alias::frcore::residual_1d_scalar;
use fr_alias::march::rk44_step;
use fr_alias::refelem::build_reference_ops;

fn run(p: usize, ne: usize) -> fr_alias::Result<f64> {
    let ops = build_reference_ops(p)?;
    let h = 2.0 / ne as f64;
    let x: Vec<f64> =
        (0..ne).flat_map(|e| ops.rule.points.iter().map(move |xi| -1.0 + h * (e as f64 + 0.5 * (xi + 1.0)))).collect();
    let mut u: Vec<f64> = x.iter().map(|x| (PI * x).sin()).collect();
    let t_end = 2.0;
    let steps = (t_end / (0.1 * h / (2 * p + 1) as f64)).ceil() as usize;
    let dt = t_end / steps as f64;
    for _ in 0..steps {
        rk44_step(&mut u, dt, |u, r| {
            *r = residual_1d_scalar(u, |v| v, |_| 1.0, &ops, h)?;
            Ok(())
        })?;
    }
    // One full period: the exact solution is the initial condition.
    Ok(u.iter().zip(&x).fold(0.0_f64, |m, (u, x)| m.max((u - (PI * x).sin()).abs())))
}

fn main() -> fr_alias::Result<()> {
    for p in [2, 3, 4] {
        let mut prev: Option<f64> = None;
        for ne in [4, 8, 16] {
            let e = run(p, ne)?;
            let order = prev.map(|q| (q / e).log2());
            println!(
                "p={p} elements={ne:>2} max error {e:.3e} order {}",
                order.map_or("-".into(), |o| format!("{o:.2}"))
            );
            prev = Some(e);
        }
    }
    Ok(())
}
