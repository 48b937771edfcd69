//! One state in primitive, conserved and mixed form, with its fluxes and the
//! two gradient pathways for a linear field.
use fr_alias::gasmodel::{
    cons_to_mixed, cons_to_prim, gradient_from_conserved, gradient_from_primitive, inviscid_flux_cons,
    inviscid_flux_prim, prim_to_cons, prim_to_mixed, GasModel, PrimitiveState,
};

fn main() -> fr_alias::Result<()> {
    let gas = GasModel::new(1.4, 287.0, 1.8e-5, 0.71)?;
    let q = PrimitiveState { rho: 1.2, u: 30.0, v: -5.0, w: 2.0, p: 101_325.0 };
    let c = prim_to_cons(&q, &gas);
    let m = prim_to_mixed(&q);
    println!("primitive {:?}", q.to_array());
    println!("conserved {:?}", c.to_array());
    println!("mixed     {:?}", m.to_array());
    println!("back      {:?}", cons_to_prim(&c, &gas)?.to_array());
    println!("via mixed {:?}", cons_to_mixed(&c, &gas)?.to_array());
    println!("T = {:.3} K, a = {:.3} m/s", q.temperature(&gas), q.sound_speed(&gas));

    let fp = inviscid_flux_prim(&q, &gas);
    let fc = inviscid_flux_cons(&c, &gas)?;
    println!("x-flux from primitives {:?}", fp[0]);
    println!("x-flux from conserved  {:?}", fc[0]);

    // Gradients of the same state from primitive and conserved data.
    let dq = [[0.01, 0.0, 0.0], [1.0, 0.5, 0.0], [0.0, 0.2, 0.0], [0.0, 0.0, 0.1], [50.0, 0.0, 0.0]];
    let from_prim = gradient_from_primitive(&q, &dq, &gas)?;
    let dc = [0, 1, 2].map(|k| {
        let h = 1e-6;
        let shift = |s: f64| {
            let mut a = q.to_array();
            for v in 0..5 {
                a[v] += s * dq[v][k];
            }
            prim_to_cons(&PrimitiveState::from_array(a), &gas).to_array()
        };
        let (hi, lo) = (shift(h), shift(-h));
        [0, 1, 2, 3, 4].map(|v| (hi[v] - lo[v]) / (2.0 * h))
    });
    let dc_by_var = [0, 1, 2, 3, 4].map(|v| [dc[0][v], dc[1][v], dc[2][v]]);
    let from_cons = gradient_from_conserved(&c, &dc_by_var, &gas)?;
    println!("grad T (primitive path) {:?}", from_prim.rows[4]);
    println!("grad T (conserved path) {:?}", from_cons.rows[4]);
    Ok(())
}
