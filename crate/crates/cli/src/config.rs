//! JSON experiment configurations, one schema per subcommand.

use serde::de::DeserializeOwned;
use serde::Deserialize;
use splinewidth::nwidth::{FunctionClass, MAX_GRID, MIN_GRID};
use splinewidth::{BreakSequence, ConstraintFamily, MAX_DEGREE};
use std::path::PathBuf;

/// Largest space dimension any cell may build.
pub const MAX_DIM: usize = 600;

#[derive(Debug)]
pub struct ConfigError(pub String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

fn bad(field: &str, msg: impl std::fmt::Display) -> ConfigError {
    ConfigError(format!("field `{field}`: {msg}"))
}

/// Parses `text` as the config of `subcommand`. An optional top-level
/// `"subcommand"` key must match.
pub fn parse<T: DeserializeOwned + Validate>(text: &str, subcommand: &str) -> Result<T, ConfigError> {
    let mut value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| ConfigError(format!("config is not valid JSON: {e}")))?;
    let obj = value.as_object_mut().ok_or_else(|| ConfigError("config must be a JSON object".into()))?;
    if let Some(s) = obj.remove("subcommand") {
        if s.as_str() != Some(subcommand) {
            return Err(bad("subcommand", format!("config is for {s}, not \"{subcommand}\"")));
        }
    }
    let cfg: T = serde_json::from_value(value).map_err(|e| ConfigError(format!("invalid config: {e}")))?;
    cfg.validate()?;
    Ok(cfg)
}

pub trait Validate {
    fn validate(&self) -> Result<(), ConfigError>;
}

fn nonempty<T>(field: &str, v: &[T]) -> Result<(), ConfigError> {
    if v.is_empty() {
        Err(bad(field, "must not be empty"))
    } else {
        Ok(())
    }
}

fn degrees_ok(field: &str, v: &[usize], min: usize) -> Result<(), ConfigError> {
    nonempty(field, v)?;
    match v.iter().find(|&&p| p < min || p > MAX_DEGREE) {
        Some(p) => Err(bad(field, format!("degree {p} outside {min}..={MAX_DEGREE}"))),
        None => Ok(()),
    }
}

fn dim_ok(field: &str, dim: usize) -> Result<(), ConfigError> {
    if dim > MAX_DIM {
        Err(bad(field, format!("space dimension {dim} exceeds the cap {MAX_DIM}")))
    } else {
        Ok(())
    }
}

fn grid_ok(m: usize) -> Result<(), ConfigError> {
    if (MIN_GRID..=MAX_GRID).contains(&m) {
        Ok(())
    } else {
        Err(bad("grid", format!("{m} outside {MIN_GRID}..={MAX_GRID}")))
    }
}

fn unit_interval() -> [f64; 2] {
    [0.0, 1.0]
}

/// Families of knot sequences.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum KnotSpec {
    Uniform {
        intervals: Vec<usize>,
        #[serde(default = "unit_interval")]
        interval: [f64; 2],
    },
    /// Uniform points perturbed by up to `amplitude` times the spacing.
    Random {
        intervals: Vec<usize>,
        amplitude: f64,
        #[serde(default)]
        seed_start: u64,
        seed_count: usize,
        #[serde(default = "unit_interval")]
        interval: [f64; 2],
    },
    Explicit { points: Vec<f64> },
}

impl KnotSpec {
    pub fn validate(&self, field: &str) -> Result<(), ConfigError> {
        match self {
            Self::Uniform { intervals, interval } => {
                nonempty(field, intervals)?;
                check_interval(field, interval)?;
            }
            Self::Random { intervals, amplitude, seed_count, interval, .. } => {
                nonempty(field, intervals)?;
                check_interval(field, interval)?;
                if !(0.0..0.5).contains(amplitude) {
                    return Err(bad(field, format!("amplitude {amplitude} must lie in [0, 0.5)")));
                }
                if *seed_count == 0 {
                    return Err(bad(field, "seed_count must be at least 1"));
                }
            }
            Self::Explicit { points } => {
                BreakSequence::new(points.clone()).map_err(|e| bad(field, e))?;
            }
        }
        if self.max_intervals() == 0 {
            return Err(bad(field, "interval counts must be at least 1"));
        }
        Ok(())
    }

    pub fn max_intervals(&self) -> usize {
        match self {
            Self::Uniform { intervals, .. } | Self::Random { intervals, .. } => intervals.iter().copied().max().unwrap_or(0),
            Self::Explicit { points } => points.len().saturating_sub(1),
        }
    }

    /// Every knot sequence with a short label, in config order.
    pub fn expand(&self) -> Vec<(String, BreakSequence)> {
        match self {
            Self::Uniform { intervals, interval } => intervals
                .iter()
                .map(|&n| (format!("uniform({n})"), BreakSequence::uniform(n, interval[0], interval[1]).unwrap()))
                .collect(),
            Self::Random { intervals, amplitude, seed_start, seed_count, interval } => intervals
                .iter()
                .flat_map(|&n| {
                    (*seed_start..*seed_start + *seed_count as u64).map(move |seed| {
                        let amp = amplitude * (interval[1] - interval[0]) / n as f64;
                        let b = BreakSequence::random_perturbed(n, amp, seed, interval[0], interval[1]).unwrap();
                        (format!("random({n};{seed})"), b)
                    })
                })
                .collect(),
            Self::Explicit { points } => vec![("explicit".into(), BreakSequence::new(points.clone()).unwrap())],
        }
    }
}

fn check_interval(field: &str, iv: &[f64; 2]) -> Result<(), ConfigError> {
    if iv[0].is_finite() && iv[1].is_finite() && iv[0] < iv[1] {
        Ok(())
    } else {
        Err(bad(field, format!("interval [{}, {}] is not increasing", iv[0], iv[1])))
    }
}

/// Family names as accepted in configs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyName {
    Full,
    /// `p` periodicity conditions.
    Periodic,
    EvenZero,
    OddZero,
    Mixed,
    ReducedOdd,
}

impl FamilyName {
    pub fn family(self, p: usize) -> ConstraintFamily {
        match self {
            Self::Full => ConstraintFamily::Full,
            Self::Periodic => ConstraintFamily::Periodic(p),
            Self::EvenZero => ConstraintFamily::EvenZero,
            Self::OddZero => ConstraintFamily::OddZero,
            Self::Mixed => ConstraintFamily::Mixed,
            Self::ReducedOdd => ConstraintFamily::ReducedOdd,
        }
    }
}

fn check_functions(field: &str, names: &[String]) -> Result<(), ConfigError> {
    nonempty(field, names)?;
    for n in names {
        splinewidth::projection::FunctionSpec::by_name(n).map_err(|e| bad(field, e))?;
    }
    Ok(())
}

fn default_families() -> Vec<FamilyName> {
    vec![FamilyName::Full]
}

fn default_true() -> bool {
    true
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectConfig {
    pub out: Option<PathBuf>,
    pub knots: KnotSpec,
    pub degrees: Vec<usize>,
    #[serde(default = "default_families")]
    pub families: Vec<FamilyName>,
    pub functions: Vec<String>,
    /// Orders `r`; all of `1..=p+1` when omitted.
    pub r: Option<Vec<usize>>,
}

impl Validate for ProjectConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        self.knots.validate("knots")?;
        degrees_ok("degrees", &self.degrees, 0)?;
        nonempty("families", &self.families)?;
        check_functions("functions", &self.functions)?;
        if let Some(r) = &self.r {
            nonempty("r", r)?;
        }
        dim_ok("degrees", self.knots.max_intervals() + self.degrees.iter().max().unwrap())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RitzFamily {
    Full,
    Periodic,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RitzConfig {
    pub out: Option<PathBuf>,
    pub knots: KnotSpec,
    pub degrees: Vec<usize>,
    pub families: Vec<RitzFamily>,
    pub functions: Vec<String>,
    pub q: Vec<usize>,
    /// Derivative orders `ℓ` of the error; all admissible when omitted.
    pub l: Option<Vec<usize>>,
    /// All of `q+1..=p+1` when omitted.
    pub r: Option<Vec<usize>>,
    #[serde(default = "default_true")]
    pub cross_check: bool,
}

impl Validate for RitzConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        self.knots.validate("knots")?;
        degrees_ok("degrees", &self.degrees, 1)?;
        nonempty("families", &self.families)?;
        check_functions("functions", &self.functions)?;
        nonempty("q", &self.q)?;
        if self.q.contains(&0) {
            return Err(bad("q", "Ritz orders start at 1"));
        }
        dim_ok("degrees", self.knots.max_intervals() + self.degrees.iter().max().unwrap())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReducedConfig {
    pub out: Option<PathBuf>,
    pub knots: KnotSpec,
    pub degrees: Vec<usize>,
    pub functions: Vec<String>,
}

impl Validate for ReducedConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        self.knots.validate("knots")?;
        degrees_ok("degrees", &self.degrees, 1)?;
        check_functions("functions", &self.functions)?;
        dim_ok("degrees", self.knots.max_intervals() + self.degrees.iter().max().unwrap())
    }
}

fn default_threshold() -> f64 {
    1.0
}

/// `[p, k]` pairs.
fn check_pairs(field: &str, pairs: &[[usize; 2]], n: &[usize], dim: impl Fn(usize, usize, usize) -> usize) -> Result<(), ConfigError> {
    nonempty(field, pairs)?;
    nonempty("n", n)?;
    if n.contains(&0) {
        return Err(bad("n", "interval counts must be at least 1"));
    }
    for &[p, k] in pairs {
        if p == 0 || p > MAX_DEGREE {
            return Err(bad(field, format!("degree {p} outside 1..={MAX_DEGREE}")));
        }
        if k >= p {
            return Err(bad(field, format!("smoothness k = {k} must be below p = {p}")));
        }
        for &ni in n {
            dim_ok(field, dim(ni, p, k))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutliersConfig {
    pub out: Option<PathBuf>,
    pub n: Vec<usize>,
    /// `[p, k]` pairs.
    pub spaces: Vec<[usize; 2]>,
    #[serde(default = "default_threshold")]
    pub threshold: f64,
}

impl Validate for OutliersConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        check_pairs("spaces", &self.spaces, &self.n, |n, p, k| n + p - k - 1)?;
        if !(self.threshold > 0.0) {
            return Err(bad("threshold", "must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BranchesConfig {
    pub out: Option<PathBuf>,
    pub n: Vec<usize>,
    pub spaces: Vec<[usize; 2]>,
}

impl Validate for BranchesConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        check_pairs("spaces", &self.spaces, &self.n, |n, p, k| n * (p - k))
    }
}

fn default_grid() -> usize {
    2000
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NwidthConfig {
    pub out: Option<PathBuf>,
    pub classes: Vec<FunctionClass>,
    /// Used for `a_per` (periodic space) and `a_full` (full space).
    pub knots: Option<KnotSpec>,
    /// Dimensions of the optimal spaces for `a_0`, `a_1`, `a_2`.
    #[serde(default)]
    pub n: Vec<usize>,
    pub degrees: Vec<usize>,
    pub r: Vec<usize>,
    #[serde(default = "default_grid")]
    pub grid: usize,
}

impl Validate for NwidthConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        nonempty("classes", &self.classes)?;
        degrees_ok("degrees", &self.degrees, 0)?;
        nonempty("r", &self.r)?;
        if self.r.contains(&0) {
            return Err(bad("r", "class order must be at least 1"));
        }
        grid_ok(self.grid)?;
        let needs_knots = self.classes.iter().any(|c| matches!(c, FunctionClass::APer | FunctionClass::AFull));
        let needs_n = self.classes.iter().any(|c| matches!(c, FunctionClass::A0 | FunctionClass::A1 | FunctionClass::A2));
        match &self.knots {
            Some(k) => {
                k.validate("knots")?;
                dim_ok("knots", k.max_intervals() + self.degrees.iter().max().unwrap())?;
            }
            None if needs_knots => return Err(bad("knots", "required for the a_per and a_full classes")),
            None => {}
        }
        if needs_n {
            nonempty("n", &self.n)?;
            if self.n.contains(&0) {
                return Err(bad("n", "dimensions must be at least 1"));
            }
            dim_ok("n", *self.n.iter().max().unwrap())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InverseConfig {
    pub out: Option<PathBuf>,
    pub knots: KnotSpec,
    pub degrees: Vec<usize>,
    pub families: Vec<FamilyName>,
}

impl Validate for InverseConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        self.knots.validate("knots")?;
        degrees_ok("degrees", &self.degrees, 1)?;
        nonempty("families", &self.families)?;
        dim_ok("degrees", self.knots.max_intervals() + self.degrees.iter().max().unwrap())
    }
}

fn default_eigconv_tol() -> f64 {
    1e-3
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case", deny_unknown_fields)]
pub enum EigconvConfig {
    /// Laplacian eigenfunctions against the optimal spaces `S_{p,i}`.
    Optimal {
        out: Option<PathBuf>,
        families: Vec<usize>,
        n: Vec<usize>,
        degrees: Vec<usize>,
        #[serde(default = "default_eigconv_tol")]
        tolerance: f64,
    },
    /// Periodic eigenfunctions against `Q_p^q` on uniform periodic spaces.
    Periodic {
        out: Option<PathBuf>,
        n: Vec<usize>,
        #[serde(default)]
        q: usize,
        #[serde(default)]
        l: usize,
        degrees: Vec<usize>,
    },
}

impl EigconvConfig {
    pub fn out(&self) -> Option<&PathBuf> {
        match self {
            Self::Optimal { out, .. } | Self::Periodic { out, .. } => out.as_ref(),
        }
    }
}

impl Validate for EigconvConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        match self {
            Self::Optimal { families, n, degrees, tolerance, .. } => {
                nonempty("families", families)?;
                if let Some(i) = families.iter().find(|&&i| i > 2) {
                    return Err(bad("families", format!("optimal family index {i} must be 0, 1 or 2")));
                }
                nonempty("n", n)?;
                if n.contains(&0) {
                    return Err(bad("n", "dimensions must be at least 1"));
                }
                dim_ok("n", *n.iter().max().unwrap())?;
                degrees_ok("degrees", degrees, 1)?;
                if !(*tolerance > 0.0) {
                    return Err(bad("tolerance", "must be positive"));
                }
            }
            Self::Periodic { n, degrees, .. } => {
                nonempty("n", n)?;
                if n.contains(&0) {
                    return Err(bad("n", "interval counts must be at least 1"));
                }
                dim_ok("n", *n.iter().max().unwrap())?;
                degrees_ok("degrees", degrees, 1)?;
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConjectureConfig {
    pub out: Option<PathBuf>,
    pub m: Vec<usize>,
    #[serde(default)]
    pub q: Vec<usize>,
    pub degrees: Vec<usize>,
}

impl Validate for ConjectureConfig {
    fn validate(&self) -> Result<(), ConfigError> {
        nonempty("m", &self.m)?;
        if self.m.contains(&0) {
            return Err(bad("m", "must be at least 1"));
        }
        dim_ok("m", 2 * self.m.iter().max().unwrap())?;
        degrees_ok("degrees", &self.degrees, 1)
    }
}
