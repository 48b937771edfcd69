use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use toml::{Table, Value};

use crate::error::{Error, Result};
use crate::frcore::StorageScheme;
use crate::real::Precision;
use crate::refelem::MAX_ORDER;

/// Every key a config file may contain.
pub const VALID_KEYS: &[&str] = &[
    "case",
    "scheme",
    "p",
    "elements",
    "re",
    "ma",
    "pr",
    "gamma",
    "beta",
    "precision",
    "tend",
    "dt",
    "cfl",
    "sample_dt",
    "output",
    "profile",
    "profile_steps",
    "seed",
    "threads",
    "orders",
    "samples",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Case {
    Icv,
    Tgv,
    Remainder,
}

impl Case {
    pub fn name(self) -> &'static str {
        match self {
            Case::Icv => "icv",
            Case::Tgv => "tgv",
            Case::Remainder => "remainder",
        }
    }
}

impl fmt::Display for Case {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Case {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "icv" => Ok(Case::Icv),
            "tgv" => Ok(Case::Tgv),
            "remainder" => Ok(Case::Remainder),
            _ => Err(format!("unknown case `{s}`, expected one of {{icv, tgv, remainder}}")),
        }
    }
}

/// A fully validated run description.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub case: Case,
    /// Schemes to run, in order. One CSV is written per scheme.
    pub schemes: Vec<StorageScheme>,
    pub p: usize,
    /// Explicit element counts; `None` picks the case default.
    pub elements: Option<[usize; 3]>,
    pub re: f64,
    pub ma: f64,
    pub pr: f64,
    pub gamma: f64,
    pub beta: f64,
    pub precision: Precision,
    /// Final time in convective units; `None` picks the case default.
    pub t_end: Option<f64>,
    pub dt: Option<f64>,
    pub cfl: f64,
    /// Time between diagnostic samples; `None` picks the case default.
    pub sample_dt: Option<f64>,
    /// Directory receiving CSVs and the timing report.
    pub output: PathBuf,
    pub profile: bool,
    pub profile_steps: usize,
    pub seed: u64,
    pub threads: Option<usize>,
    pub orders: Vec<usize>,
    pub samples: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            case: Case::Tgv,
            schemes: vec![StorageScheme::A],
            p: 4,
            elements: None,
            re: 400.0,
            ma: 0.08,
            pr: 0.71,
            gamma: 1.4,
            beta: 5.0,
            precision: Precision::Fp64,
            t_end: None,
            dt: None,
            cfl: 0.4,
            sample_dt: None,
            output: PathBuf::from("out"),
            profile: false,
            profile_steps: 5,
            seed: 0,
            threads: None,
            orders: vec![2, 3, 4, 5],
            samples: 100,
        }
    }
}

impl RunConfig {
    pub fn elements(&self) -> [usize; 3] {
        self.elements.unwrap_or(match self.case {
            Case::Icv => [8, 8, 1],
            _ => [4, 4, 4],
        })
    }

    /// Parse a TOML document and apply `overrides` on top of it.
    pub fn from_toml(text: &str, overrides: &Overrides) -> Result<Self> {
        let mut table: Table =
            text.parse().map_err(|e: toml::de::Error| Error::Config(format!("malformed config: {}", e.message())))?;
        overrides.apply(&mut table)?;
        Self::from_table(&table)
    }

    pub fn from_file(path: &Path, overrides: &Overrides) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text, overrides)
    }

    pub fn from_table(table: &Table) -> Result<Self> {
        for key in table.keys() {
            if !VALID_KEYS.contains(&key.as_str()) {
                return Err(Error::Config(format!("unknown key `{key}`; valid keys: {}", VALID_KEYS.join(", "))));
            }
        }
        let mut c = RunConfig::default();
        let t = Reader(table);
        if let Some(s) = t.string("case")? {
            c.case = s.parse().map_err(config_err("case"))?;
        }
        if let Some(v) = table.get("scheme") {
            c.schemes = parse_schemes(v)?;
        }
        if let Some(p) = t.int("p")? {
            c.p = in_range("p", p, 0, MAX_ORDER as i64)? as usize;
        }
        if let Some(e) = t.int_list("elements")? {
            if e.len() != 3 {
                return Err(Error::Config(format!("`elements` needs three counts NX,NY,NZ, got {}", e.len())));
            }
            let mut out = [0; 3];
            for (o, v) in out.iter_mut().zip(e) {
                *o = in_range("elements", v, 1, 4096)? as usize;
            }
            c.elements = Some(out);
        }
        for (key, slot, lo) in
            [("re", &mut c.re, 0.0), ("ma", &mut c.ma, 0.0), ("pr", &mut c.pr, 0.0), ("beta", &mut c.beta, 0.0)]
        {
            if let Some(v) = t.float(key)? {
                *slot = positive(key, v, lo)?;
            }
        }
        if let Some(g) = t.float("gamma")? {
            if !(g > 1.0 && g <= 5.0 / 3.0 + 1e-12) {
                return Err(Error::Config(format!("`gamma` = {g} out of range (1, 5/3]")));
            }
            c.gamma = g;
        }
        if let Some(s) = t.string("precision")? {
            c.precision = s.parse().map_err(config_err("precision"))?;
        }
        if let Some(v) = t.float("tend")? {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("`tend` = {v} out of range [0, inf)")));
            }
            c.t_end = Some(v);
        }
        if let Some(v) = t.float("dt")? {
            c.dt = Some(positive("dt", v, 0.0)?);
        }
        if let Some(v) = t.float("cfl")? {
            if !(v > 0.0 && v <= 2.0) {
                return Err(Error::Config(format!("`cfl` = {v} out of range (0, 2]")));
            }
            c.cfl = v;
        }
        if let Some(v) = t.float("sample_dt")? {
            c.sample_dt = Some(positive("sample_dt", v, 0.0)?);
        }
        if let Some(s) = t.string("output")? {
            c.output = PathBuf::from(s);
        }
        if let Some(b) = t.bool("profile")? {
            c.profile = b;
        }
        if let Some(n) = t.int("profile_steps")? {
            c.profile_steps = in_range("profile_steps", n, 1, 100_000)? as usize;
        }
        if let Some(s) = t.int("seed")? {
            c.seed = in_range("seed", s, 0, i64::MAX)? as u64;
        }
        if let Some(n) = t.int("threads")? {
            c.threads = Some(in_range("threads", n, 1, 1024)? as usize);
        }
        if let Some(o) = t.int_list("orders")? {
            if o.is_empty() {
                return Err(Error::Config("`orders` must not be empty".into()));
            }
            c.orders = o
                .into_iter()
                .map(|p| in_range("orders", p, 1, MAX_ORDER as i64).map(|p| p as usize))
                .collect::<Result<_>>()?;
        }
        if let Some(n) = t.int("samples")? {
            c.samples = in_range("samples", n, 1, 1_000_000)? as usize;
        }
        c.check_case()?;
        Ok(c)
    }

    fn check_case(&self) -> Result<()> {
        let e = self.elements();
        match self.case {
            Case::Tgv if !(e[0] == e[1] && e[1] == e[2]) => {
                Err(Error::Config(format!("`elements` must be a cube for tgv, got {},{},{}", e[0], e[1], e[2])))
            }
            Case::Icv if self.profile => Err(Error::Config("`profile` is only available for case tgv".into())),
            _ => Ok(()),
        }
    }
}

fn config_err(key: &'static str) -> impl Fn(String) -> Error {
    move |m| Error::Config(format!("`{key}`: {m}"))
}

fn in_range(key: &str, v: i64, lo: i64, hi: i64) -> Result<i64> {
    if v < lo || v > hi {
        return Err(Error::Config(format!("`{key}` = {v} out of range [{lo}, {hi}]")));
    }
    Ok(v)
}

fn positive(key: &str, v: f64, lo: f64) -> Result<f64> {
    if !(v > lo && v.is_finite()) {
        return Err(Error::Config(format!("`{key}` = {v} out of range ({lo}, inf)")));
    }
    Ok(v)
}

fn parse_schemes(v: &Value) -> Result<Vec<StorageScheme>> {
    let names: Vec<String> = match v {
        Value::String(s) => s.split(',').map(str::to_owned).collect(),
        Value::Array(a) => a
            .iter()
            .map(|x| {
                x.as_str().map(str::to_owned).ok_or_else(|| Error::Config("`scheme` entries must be strings".into()))
            })
            .collect::<Result<_>>()?,
        other => return Err(Error::Config(format!("`scheme` must be a string or list, got {}", other.type_str()))),
    };
    let mut out = Vec::new();
    for n in names {
        let s: StorageScheme = n.parse().map_err(config_err("scheme"))?;
        if !out.contains(&s) {
            out.push(s);
        }
    }
    if out.is_empty() {
        return Err(Error::Config("`scheme` must name at least one scheme".into()));
    }
    Ok(out)
}

struct Reader<'a>(&'a Table);

impl Reader<'_> {
    fn wrong(key: &str, want: &str, v: &Value) -> Error {
        Error::Config(format!("`{key}` must be {want}, got {}", v.type_str()))
    }

    fn string(&self, key: &str) -> Result<Option<String>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::String(s)) => Ok(Some(s.clone())),
            Some(v) => Err(Self::wrong(key, "a string", v)),
        }
    }

    fn int(&self, key: &str) -> Result<Option<i64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Integer(i)) => Ok(Some(*i)),
            Some(v) => Err(Self::wrong(key, "an integer", v)),
        }
    }

    fn float(&self, key: &str) -> Result<Option<f64>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Float(x)) => Ok(Some(*x)),
            Some(Value::Integer(i)) => Ok(Some(*i as f64)),
            Some(v) => Err(Self::wrong(key, "a number", v)),
        }
    }

    fn bool(&self, key: &str) -> Result<Option<bool>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Boolean(b)) => Ok(Some(*b)),
            Some(v) => Err(Self::wrong(key, "a boolean", v)),
        }
    }

    fn int_list(&self, key: &str) -> Result<Option<Vec<i64>>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(Value::Array(a)) => a
                .iter()
                .map(|x| x.as_integer().ok_or_else(|| Self::wrong(key, "a list of integers", x)))
                .collect::<Result<_>>()
                .map(Some),
            Some(v) => Err(Self::wrong(key, "a list of integers", v)),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "fr-alias", version, about = "Flux reconstruction storage-scheme study")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a case described by a config file, with optional overrides.
    Run(RunArgs),
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// TOML config file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: Overrides,
}

impl RunArgs {
    pub fn resolve(&self) -> Result<RunConfig> {
        match &self.config {
            Some(path) => RunConfig::from_file(path, &self.overrides),
            None => RunConfig::from_toml("", &self.overrides),
        }
    }
}

/// Command-line values; each one replaces the matching config key.
#[derive(Debug, Default, Clone, Args)]
pub struct Overrides {
    /// icv, tgv or remainder.
    #[arg(long)]
    pub case: Option<String>,
    /// One scheme or a comma-separated list (A,B,C,D).
    #[arg(long)]
    pub scheme: Option<String>,
    /// Polynomial order.
    #[arg(long, allow_negative_numbers = true)]
    pub p: Option<i64>,
    /// Element counts NX,NY,NZ.
    #[arg(long)]
    pub elements: Option<String>,
    #[arg(long)]
    pub re: Option<f64>,
    #[arg(long)]
    pub ma: Option<f64>,
    /// fp32 or fp64.
    #[arg(long)]
    pub precision: Option<String>,
    /// Final time in convective units.
    #[arg(long, allow_negative_numbers = true)]
    pub tend: Option<f64>,
    #[arg(long)]
    pub cfl: Option<f64>,
    /// Output directory.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Time steps per scheme and write a timing report.
    #[arg(long)]
    pub profile: bool,
    #[arg(long)]
    pub seed: Option<u64>,
}

impl Overrides {
    fn apply(&self, t: &mut Table) -> Result<()> {
        let mut set = |k: &str, v: Value| {
            t.insert(k.to_owned(), v);
        };
        if let Some(v) = &self.case {
            set("case", Value::String(v.clone()));
        }
        if let Some(v) = &self.scheme {
            set("scheme", Value::String(v.clone()));
        }
        if let Some(v) = self.p {
            set("p", Value::Integer(v));
        }
        if let Some(v) = &self.elements {
            let counts = v
                .split(',')
                .map(|x| {
                    x.trim()
                        .parse::<i64>()
                        .map(Value::Integer)
                        .map_err(|_| Error::Config(format!("`elements` expects NX,NY,NZ integers, got `{v}`")))
                })
                .collect::<Result<Vec<_>>>()?;
            set("elements", Value::Array(counts));
        }
        if let Some(v) = self.re {
            set("re", Value::Float(v));
        }
        if let Some(v) = self.ma {
            set("ma", Value::Float(v));
        }
        if let Some(v) = &self.precision {
            set("precision", Value::String(v.clone()));
        }
        if let Some(v) = self.tend {
            set("tend", Value::Float(v));
        }
        if let Some(v) = self.cfl {
            set("cfl", Value::Float(v));
        }
        if let Some(v) = &self.output {
            set("output", Value::String(v.to_string_lossy().into_owned()));
        }
        if self.profile {
            set("profile", Value::Boolean(true));
        }
        if let Some(v) = self.seed {
            let v = i64::try_from(v).map_err(|_| Error::Config(format!("`seed` = {v} too large")))?;
            set("seed", Value::Integer(v));
        }
        Ok(())
    }
}
