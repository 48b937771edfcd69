//! Benchmark flows and the quantities sampled from them.

mod diagnostics;
mod icv;
mod series;
mod tgv;

pub use diagnostics::{density_error, dissipation_rate, enstrophy_dissipation, kinetic_energy};
pub use icv::{icv_exact, icv_init, icv_primitive, IcvConfig};
pub use series::{DiagnosticsRow, DiagnosticsSeries, CSV_HEADER};
pub use tgv::{tgv_init, tgv_primitive, TgvConfig};
