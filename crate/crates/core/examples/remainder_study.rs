//! Interpolation remainders of the quadratic and quartic fluxes, the printed
//! closed-form bounds and the order-1 inequality audit.
use fr_alias::alias::{
    bound_r2, bound_r4, flux_remainder_study, inequality_audit, remainder_csv, remainder_sweep, FluxVariant,
    LegendreSeries,
};
use fr_alias::refelem::gauss_legendre_rule;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> fr_alias::Result<()> {
    let p = 3;
    let nodes = gauss_legendre_rule(p)?.points;
    let u = LegendreSeries::new(vec![1.0; p + 1]);
    for v in [FluxVariant::F2, FluxVariant::F4] {
        let r = flux_remainder_study(&u, v, &nodes)?;
        println!(
            "{}: interp {:.4e}  grad {:.4e}  edges {:.4e} {:.4e}",
            v.name(),
            r.norm_interp,
            r.norm_grad,
            r.edge_left,
            r.edge_right
        );
    }
    println!("bounds at p={p}: r2 {:.4e}  r4 {:.4e}", bound_r2(p, 1.0)?, bound_r4(p, 1.0)?);

    for q in 1..=4 {
        let a = inequality_audit(q)?;
        println!("p={q}: lhs {} rhs {} holds {}", a.lhs, a.rhs, a.holds());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let rows = remainder_sweep(&mut rng, &[2, 3, 4, 5], 20)?;
    print!("{}", remainder_csv(&rows));
    Ok(())
}
