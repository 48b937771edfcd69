//! Load a TOML run description, apply overrides and run it through the same
//! path as the `fr-alias run` command.
use fr_alias::cli::{run, Overrides, RunConfig, RunStatus};

fn main() -> fr_alias::Result<()> {
    let out = std::env::temp_dir().join("fr-alias-run-config");
    let text = r#"
        case = "icv"
        scheme = ["A", "B", "D"]
        p = 3
        elements = [4, 4, 1]
        tend = 2.0
        sample_dt = 0.5
    "#;
    let overrides = Overrides { output: Some(out.clone()), ..Default::default() };
    let cfg = RunConfig::from_toml(text, &overrides)?;
    let report = run(&cfg)?;
    for r in &report.runs {
        let last = r.series.last().expect("sampled");
        println!(
            "{}: dt {:.4e}, final density error {:.3e} -> {}",
            r.scheme.name(),
            r.dt,
            last.err_rho.unwrap_or(f64::NAN),
            r.csv.display()
        );
    }
    assert_eq!(report.status, RunStatus::Completed);
    Ok(())
}
