//! Per-step wall time of the four storage schemes through the run
//! orchestrator's profile mode.
use fr_alias::cli::{run, RunConfig};

fn main() -> fr_alias::Result<()> {
    let out = std::env::temp_dir().join("fr-alias-profile");
    let text = format!(
        "case = \"tgv\"\nscheme = [\"A\", \"B\", \"C\", \"D\"]\np = 3\nelements = [4, 4, 4]\nprofile = true\nprofile_steps = 4\noutput = {:?}\n",
        out.display().to_string()
    );
    let cfg = RunConfig::from_toml(&text, &Default::default())?;
    let report = run(&cfg)?;
    if let Some(t) = report.timing {
        print!("{}", t.to_text());
    }
    println!("artifacts in {}", out.display());
    Ok(())
}
