use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FromPrimitive};

/// Working precision of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Precision {
    Fp32,
    Fp64,
}

impl Precision {
    pub fn name(self) -> &'static str {
        match self {
            Precision::Fp32 => "fp32",
            Precision::Fp64 => "fp64",
        }
    }

    pub fn epsilon(self) -> f64 {
        match self {
            Precision::Fp32 => f32::EPSILON as f64,
            Precision::Fp64 => f64::EPSILON,
        }
    }
}

impl Display for Precision {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Precision {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "fp32" | "f32" | "single" => Ok(Precision::Fp32),
            "fp64" | "f64" | "double" => Ok(Precision::Fp64),
            other => Err(format!("unknown precision `{other}`, expected one of {{fp32, fp64}}")),
        }
    }
}

/// Scalar type the solver state is stored and computed in.
pub trait Real: Float + FromPrimitive + Default + Debug + Display + Sum + Send + Sync + 'static {
    const PRECISION: Precision;

    /// Lossy conversion from `f64`.
    fn of(x: f64) -> Self;

    fn to_f64_lossless(self) -> f64;
}

impl Real for f32 {
    const PRECISION: Precision = Precision::Fp32;

    #[inline(always)]
    fn of(x: f64) -> Self {
        x as f32
    }

    #[inline(always)]
    fn to_f64_lossless(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    const PRECISION: Precision = Precision::Fp64;

    #[inline(always)]
    fn of(x: f64) -> Self {
        x
    }

    #[inline(always)]
    fn to_f64_lossless(self) -> f64 {
        self
    }
}
