//! Early Taylor-Green vortex decay on a coarse mesh: kinetic energy and
//! enstrophy-based dissipation for conserved and primitive storage.
use fr_alias::cases::{enstrophy_dissipation, kinetic_energy, tgv_init, TgvConfig};
use fr_alias::frcore::{NavierStokes, StorageScheme};
use fr_alias::march::{march, stable_dt, MarchConfig, Sample};
use fr_alias::refelem::build_reference_ops;

fn main() -> fr_alias::Result<()> {
    let cfg = TgvConfig { elements: 3, order: 3, ..Default::default() };
    let gas = cfg.gas()?;
    let ops = build_reference_ops(cfg.order)?;
    let interval = 0.5 * cfg.time_scale();
    let per = (interval / stable_dt(&tgv_init::<f64>(&cfg, StorageScheme::A)?, &gas, 0.4)?).ceil();
    let mc = MarchConfig { dt: interval / per, t_end: 4.0 * interval, sample_every: per as usize };
    let ek_scale = cfg.rho0 * cfg.u0 * cfg.u0;

    for scheme in [StorageScheme::A, StorageScheme::B] {
        let mut field = tgv_init::<f64>(&cfg, scheme)?;
        let mut op = NavierStokes::new(field.mesh.clone(), &ops, scheme, &gas, true);
        let mut grads = NavierStokes::new(field.mesh.clone(), &ops, scheme, &gas, true);
        let series = march(
            &mut field,
            &mc,
            |f, r| op.conserved_residual(f, r),
            |f, _| {
                let blocks = grads.gradient_blocks(f)?;
                Ok(Sample {
                    ek: kinetic_energy(f, &gas, ek_scale)?,
                    eps2: enstrophy_dissipation(f, &gas, &blocks, cfg.rho0, cfg.u0)?,
                    err_rho: None,
                })
            },
        )?;
        println!("scheme {}", scheme.name());
        for row in &series.rows {
            println!("  t = {:5.2}  Ek = {:.6}  eps2 = {:.6e}", row.t, row.ek, row.eps2);
        }
    }
    Ok(())
}
