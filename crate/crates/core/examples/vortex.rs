//! Convect the isentropic vortex for a fraction of a period with every
//! storage scheme and compare density errors against the exact solution.
use fr_alias::cases::{density_error, icv_exact, icv_init, kinetic_energy, IcvConfig};
use fr_alias::frcore::{NavierStokes, StorageScheme};
use fr_alias::march::{march, stable_dt, MarchConfig, Sample};
use fr_alias::refelem::build_reference_ops;

fn main() -> fr_alias::Result<()> {
    let cfg = IcvConfig { elements: [6, 6, 1], order: 3, ..Default::default() };
    let gas = cfg.gas()?;
    let ops = build_reference_ops(cfg.order)?;
    let t_end = 0.25 * cfg.period();
    // Five sample intervals, each a whole number of steps.
    let interval = t_end / 5.0;
    let per = (interval / stable_dt(&icv_init::<f64>(&cfg, StorageScheme::A)?, &gas, 0.4)?).ceil();
    let mc = MarchConfig { dt: interval / per, t_end, sample_every: per as usize };

    for scheme in StorageScheme::ALL {
        let mut field = icv_init::<f64>(&cfg, scheme)?;
        let mut op = NavierStokes::new(field.mesh.clone(), &ops, scheme, &gas, false);
        let series = march(
            &mut field,
            &mc,
            |f, r| op.conserved_residual(f, r),
            |f, t| {
                Ok(Sample {
                    ek: kinetic_energy(f, &gas, 1.0)?,
                    eps2: 0.0,
                    err_rho: Some(density_error(f, &gas, icv_exact(&cfg, t))?),
                })
            },
        )?;
        let last = series.last().expect("at least the initial sample");
        println!(
            "scheme {}: t = {:.2}  density error {:.3e}  Ek {:.10}",
            scheme.name(),
            last.t,
            last.err_rho.unwrap_or(f64::NAN),
            last.ek
        );
    }
    Ok(())
}
