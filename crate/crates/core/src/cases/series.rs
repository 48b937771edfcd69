use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "t,Ek,eps1,eps2,err_rho,step_ms";

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRow {
    pub t: f64,
    pub ek: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub err_rho: Option<f64>,
    /// Mean wall time of the steps since the previous row.
    pub step_ms: f64,
}

/// Sampled history of one run.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct DiagnosticsSeries {
    pub rows: Vec<DiagnosticsRow>,
    /// Wall time of every completed step, in milliseconds.
    pub step_ms: Vec<f64>,
    pub diverged: bool,
    pub divergence: Option<String>,
}

impl DiagnosticsSeries {
    pub fn mark_diverged(&mut self, err: Error) {
        self.diverged = true;
        self.divergence = Some(err.to_string());
    }

    /// Recompute `eps1 = -dEk/dt` from the sampled `Ek`.
    pub fn fill_eps1(&mut self) {
        let t: Vec<f64> = self.rows.iter().map(|r| r.t).collect();
        let ek: Vec<f64> = self.rows.iter().map(|r| r.ek).collect();
        for (row, e) in self.rows.iter_mut().zip(super::dissipation_rate(&t, &ek)) {
            row.eps1 = e;
        }
    }

    pub fn mean_step_ms(&self) -> f64 {
        if self.step_ms.is_empty() {
            return 0.0;
        }
        self.step_ms.iter().sum::<f64>() / self.step_ms.len() as f64
    }

    pub fn median_step_ms(&self) -> f64 {
        if self.step_ms.is_empty() {
            return 0.0;
        }
        crate::alias::median(self.step_ms.clone())
    }

    pub fn last(&self) -> Option<&DiagnosticsRow> {
        self.rows.last()
    }

    /// Column values over all rows.
    pub fn column(&self, f: impl Fn(&DiagnosticsRow) -> f64) -> Vec<f64> {
        self.rows.iter().map(f).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::with_capacity(96 * (self.rows.len() + 1));
        s.push_str(CSV_HEADER);
        s.push('\n');
        for r in &self.rows {
            let err = r.err_rho.unwrap_or(f64::NAN);
            let _ = writeln!(
                s,
                "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}",
                r.t, r.ek, r.eps1, r.eps2, err, r.step_ms
            );
        }
        s
    }

    pub fn write_csv(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_csv())?;
        Ok(())
    }

    /// Parse a file written by [`DiagnosticsSeries::to_csv`].
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some(CSV_HEADER) {
            return Err(Error::Config("missing diagnostics CSV header".into()));
        }
        let mut rows = Vec::new();
        for (i, line) in lines.enumerate() {
            let v: Vec<f64> = line
                .split(',')
                .map(|x| x.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Config(format!("row {}: {e}", i + 1)))?;
            if v.len() != 6 {
                return Err(Error::Config(format!("row {} has {} columns", i + 1, v.len())));
            }
            rows.push(DiagnosticsRow {
                t: v[0],
                ek: v[1],
                eps1: v[2],
                eps2: v[3],
                err_rho: if v[4].is_nan() { None } else { Some(v[4]) },
                step_ms: v[5],
            });
        }
        Ok(DiagnosticsSeries { rows, ..Default::default() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_keeps_full_precision() {
        let mut s = DiagnosticsSeries::default();
        for i in 0..4 {
            let t = i as f64 * 0.1;
            s.rows.push(DiagnosticsRow {
                t,
                ek: 1.0 / (1.0 + t) + 1e-17,
                eps1: 0.0,
                eps2: std::f64::consts::PI * t,
                err_rho: if i % 2 == 0 { Some(t / 3.0) } else { None },
                step_ms: 0.25,
            });
        }
        s.fill_eps1();
        let text = s.to_csv();
        assert!(text.starts_with("t,Ek,eps1,eps2,err_rho,step_ms\n"));
        let back = DiagnosticsSeries::from_csv(&text).unwrap();
        assert_eq!(back.rows, s.rows);
    }

    #[test]
    fn timing_summary() {
        let s = DiagnosticsSeries { step_ms: vec![3.0, 1.0, 2.0, 10.0], ..Default::default() };
        assert_eq!(s.mean_step_ms(), 4.0);
        assert_eq!(s.median_step_ms(), 2.5);
    }
}
