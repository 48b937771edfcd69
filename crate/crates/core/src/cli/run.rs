use std::fmt::Write as _;
use std::path::PathBuf;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::alias::{remainder_csv, remainder_sweep};
use crate::cases::{
    density_error, enstrophy_dissipation, icv_exact, icv_init, kinetic_energy, tgv_init, DiagnosticsRow,
    DiagnosticsSeries, IcvConfig, TgvConfig,
};
use crate::error::{Error, Result};
use crate::frcore::{NavierStokes, SolutionField, StorageScheme};
use crate::gasmodel::GasModel;
use crate::march::{march, stable_dt, MarchConfig, Rk44, Sample};
use crate::real::{Precision, Real};
use crate::refelem::build_reference_ops;

use super::config::{Case, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Completed,
    Diverged,
}

impl RunStatus {
    /// 0 completed, 2 diverged. Errors map to 1 in the binary.
    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Completed => 0,
            RunStatus::Diverged => 2,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SchemeRun {
    pub scheme: StorageScheme,
    pub series: DiagnosticsSeries,
    pub dt: f64,
    pub csv: PathBuf,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingRow {
    pub scheme: StorageScheme,
    pub mean_ms: f64,
    /// `(t_A - t_X) / t_A · 100`, when A was timed.
    pub saving_pct: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TimingReport {
    pub rows: Vec<TimingRow>,
}

impl TimingReport {
    fn new(times: &[(StorageScheme, f64)]) -> Self {
        let base = times.iter().find(|(s, _)| *s == StorageScheme::A).map(|t| t.1);
        TimingReport {
            rows: times
                .iter()
                .map(|&(scheme, mean_ms)| TimingRow {
                    scheme,
                    mean_ms,
                    saving_pct: base.map(|b| (b - mean_ms) / b * 100.0),
                })
                .collect(),
        }
    }

    pub fn mean_ms(&self, scheme: StorageScheme) -> Option<f64> {
        self.rows.iter().find(|r| r.scheme == scheme).map(|r| r.mean_ms)
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{:<8}{:>12}{:>12}\n", "scheme", "mean_ms", "saving_pct");
        for r in &self.rows {
            let saving = r.saving_pct.map_or("n/a".to_owned(), |s| format!("{s:.1}"));
            let _ = writeln!(out, "{:<8}{:>12.3}{:>12}", r.scheme.name(), r.mean_ms, saving);
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub status: RunStatus,
    pub runs: Vec<SchemeRun>,
    pub timing: Option<TimingReport>,
    pub artifacts: Vec<PathBuf>,
}

/// Execute `cfg`, writing artifacts under `cfg.output`.
pub fn run(cfg: &RunConfig) -> Result<RunReport> {
    match cfg.threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Config(format!("cannot start {n} worker threads: {e}")))?
            .install(|| dispatch(cfg)),
        None => dispatch(cfg),
    }
}

fn dispatch(cfg: &RunConfig) -> Result<RunReport> {
    std::fs::create_dir_all(&cfg.output)?;
    if cfg.case == Case::Remainder {
        return run_remainder(cfg);
    }
    let flow = Flow::from_config(cfg);
    match (cfg.precision, cfg.profile) {
        (Precision::Fp32, false) => run_flow::<f32>(cfg, &flow),
        (Precision::Fp64, false) => run_flow::<f64>(cfg, &flow),
        (Precision::Fp32, true) => run_profile::<f32>(cfg, &flow),
        (Precision::Fp64, true) => run_profile::<f64>(cfg, &flow),
    }
}

fn run_remainder(cfg: &RunConfig) -> Result<RunReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let rows = remainder_sweep(&mut rng, &cfg.orders, cfg.samples)?;
    let path = cfg.output.join("remainder.csv");
    std::fs::write(&path, remainder_csv(&rows))?;
    Ok(RunReport { status: RunStatus::Completed, runs: Vec::new(), timing: None, artifacts: vec![path] })
}

enum Flow {
    Icv(IcvConfig),
    Tgv(TgvConfig),
}

impl Flow {
    fn from_config(cfg: &RunConfig) -> Self {
        let elements = cfg.elements();
        match cfg.case {
            Case::Icv => Flow::Icv(IcvConfig {
                beta: cfg.beta,
                elements,
                order: cfg.p,
                gamma: cfg.gamma,
                ..IcvConfig::default()
            }),
            _ => Flow::Tgv(TgvConfig {
                re: cfg.re,
                ma: cfg.ma,
                pr: cfg.pr,
                gamma: cfg.gamma,
                elements: elements[0],
                order: cfg.p,
                ..TgvConfig::default()
            }),
        }
    }

    fn gas(&self) -> Result<GasModel> {
        match self {
            Flow::Icv(c) => c.gas(),
            Flow::Tgv(c) => c.gas(),
        }
    }

    fn viscous(&self) -> bool {
        matches!(self, Flow::Tgv(_))
    }

    fn init<T: Real>(&self, scheme: StorageScheme) -> Result<SolutionField<T>> {
        match self {
            Flow::Icv(c) => {
                c.validate()?;
                icv_init(c, scheme)
            }
            Flow::Tgv(c) => tgv_init(c, scheme),
        }
    }

    /// Physical time per reported time unit.
    fn time_scale(&self) -> f64 {
        match self {
            Flow::Icv(_) => 1.0,
            Flow::Tgv(c) => c.time_scale(),
        }
    }

    fn default_t_end(&self) -> f64 {
        match self {
            Flow::Icv(c) => c.period(),
            Flow::Tgv(_) => 20.0,
        }
    }

    fn default_sample_dt(&self) -> f64 {
        match self {
            Flow::Icv(c) => c.period() / 20.0,
            Flow::Tgv(_) => 0.1,
        }
    }
}

/// Shared step size: the CFL estimate on the binary64 initial field, so every
/// scheme and precision marches with the same `dt`.
fn step_size(cfg: &RunConfig, flow: &Flow) -> Result<f64> {
    if let Some(dt) = cfg.dt {
        return Ok(dt * flow.time_scale());
    }
    let probe = flow.init::<f64>(StorageScheme::A)?;
    stable_dt(&probe, &flow.gas()?, cfg.cfl)
}

fn diagnostics<T: Real>(
    flow: &Flow,
    gas: &GasModel<T>,
    grad_op: &mut NavierStokes<T>,
    field: &SolutionField<T>,
    t: f64,
) -> Result<Sample> {
    match flow {
        Flow::Icv(c) => Ok(Sample {
            ek: kinetic_energy(field, gas, 1.0)?,
            eps2: 0.0,
            err_rho: Some(density_error(field, gas, icv_exact(c, t))?),
        }),
        Flow::Tgv(c) => {
            let blocks = grad_op.gradient_blocks(field)?;
            Ok(Sample {
                ek: kinetic_energy(field, gas, c.rho0 * c.u0 * c.u0)?,
                eps2: enstrophy_dissipation(field, gas, &blocks, c.rho0, c.u0)?,
                err_rho: None,
            })
        }
    }
}

fn csv_path(cfg: &RunConfig, scheme: StorageScheme) -> PathBuf {
    cfg.output.join(format!("{}_{}_{}.csv", cfg.case, scheme.name(), cfg.precision.name()))
}

fn run_flow<T: Real>(cfg: &RunConfig, flow: &Flow) -> Result<RunReport> {
    let gas64 = flow.gas()?;
    let gas = gas64.cast::<T>();
    let ops = build_reference_ops(cfg.p)?;
    let scale = flow.time_scale();
    let t_end = cfg.t_end.unwrap_or_else(|| flow.default_t_end()) * scale;
    let dt = step_size(cfg, flow)?;
    // Whole number of sample intervals, each a whole number of steps no
    // longer than the CFL step.
    let sample_dt = cfg.sample_dt.unwrap_or_else(|| flow.default_sample_dt()) * scale;
    let intervals = ((t_end / sample_dt - 1e-9).ceil() as usize).max(1);
    let sample_every = ((t_end / intervals as f64 / dt - 1e-9).ceil() as usize).max(1);
    let steps = intervals * sample_every;
    let dt_used = if t_end > 0.0 { t_end / steps as f64 } else { dt };
    let mc = MarchConfig { dt: dt_used, t_end, sample_every };

    let mut report = RunReport { status: RunStatus::Completed, runs: Vec::new(), timing: None, artifacts: Vec::new() };
    for &scheme in &cfg.schemes {
        let mut field = flow.init::<T>(scheme)?;
        let mut op = NavierStokes::new(field.mesh.clone(), &ops, scheme, &gas64, flow.viscous());
        let mut grad_op = NavierStokes::new(field.mesh.clone(), &ops, scheme, &gas64, true);
        let mut series = march(
            &mut field,
            &mc,
            |f, k| op.conserved_residual(f, k),
            |f, t| diagnostics(flow, &gas, &mut grad_op, f, t),
        )?;
        for row in &mut series.rows {
            row.t /= scale;
        }
        series.fill_eps1();
        let csv = csv_path(cfg, scheme);
        series.write_csv(&csv)?;
        if series.diverged {
            report.status = RunStatus::Diverged;
        }
        report.artifacts.push(csv.clone());
        report.runs.push(SchemeRun { scheme, series, dt: dt_used / scale, csv });
    }
    Ok(report)
}

/// Time full RK44 steps with the schemes interleaved round by round, after one
/// untimed warm-up round.
fn run_profile<T: Real>(cfg: &RunConfig, flow: &Flow) -> Result<RunReport> {
    let gas64 = flow.gas()?;
    let gas = gas64.cast::<T>();
    let ops = build_reference_ops(cfg.p)?;
    let dt = step_size(cfg, flow)?;

    struct Slot<T: Real> {
        scheme: StorageScheme,
        field: SolutionField<T>,
        op: NavierStokes<T>,
        grad_op: NavierStokes<T>,
        rk: Rk44<SolutionField<T>>,
        series: DiagnosticsSeries,
        steps: usize,
    }
    let mut slots = Vec::new();
    for &scheme in &cfg.schemes {
        let field = flow.init::<T>(scheme)?;
        let op = NavierStokes::new(field.mesh.clone(), &ops, scheme, &gas64, flow.viscous());
        let grad_op = NavierStokes::new(field.mesh.clone(), &ops, scheme, &gas64, true);
        let rk = Rk44::new(&field);
        slots.push(Slot { scheme, field, op, grad_op, rk, series: DiagnosticsSeries::default(), steps: 0 });
    }

    let record = |slot: &mut Slot<T>, step_ms: f64| -> Result<()> {
        let t = slot.steps as f64 * dt / flow.time_scale();
        let s = diagnostics(flow, &gas, &mut slot.grad_op, &slot.field, t)?;
        slot.series.rows.push(DiagnosticsRow { t, ek: s.ek, eps1: 0.0, eps2: s.eps2, err_rho: s.err_rho, step_ms });
        Ok(())
    };
    for slot in slots.iter_mut() {
        record(slot, 0.0)?;
    }

    let mut status = RunStatus::Completed;
    'rounds: for round in 0..=cfg.profile_steps {
        for slot in slots.iter_mut() {
            let start = Instant::now();
            let op = &mut slot.op;
            let out = slot.rk.step(&mut slot.field, dt, |f, k| op.conserved_residual(f, k));
            let ms = start.elapsed().as_secs_f64() * 1e3;
            match out {
                Ok(()) => {}
                Err(e) if e.is_nonphysical() => {
                    slot.series.mark_diverged(Error::Diverged {
                        step: slot.steps + 1,
                        time: (slot.steps + 1) as f64 * dt,
                        source: Box::new(e),
                    });
                    status = RunStatus::Diverged;
                    break 'rounds;
                }
                Err(e) => return Err(e),
            }
            slot.steps += 1;
            if round > 0 {
                slot.series.step_ms.push(ms);
            }
        }
    }

    let mut report = RunReport { status, runs: Vec::new(), timing: None, artifacts: Vec::new() };
    let mut times = Vec::new();
    for mut slot in slots {
        let mean = slot.series.mean_step_ms();
        if !slot.series.diverged {
            record(&mut slot, mean)?;
        }
        slot.series.fill_eps1();
        let csv = csv_path(cfg, slot.scheme);
        slot.series.write_csv(&csv)?;
        times.push((slot.scheme, mean));
        report.artifacts.push(csv.clone());
        report.runs.push(SchemeRun { scheme: slot.scheme, series: slot.series, dt, csv });
    }
    let timing = TimingReport::new(&times);
    let path = cfg.output.join("timing.txt");
    std::fs::write(&path, timing.to_text())?;
    report.artifacts.push(path);
    report.timing = Some(timing);
    Ok(report)
}
