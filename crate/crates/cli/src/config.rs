//! Run configuration: a TOML document with the problem, its data, numerics and outputs.
//!
//! ```toml
//! k = 1
//! m = 0.5
//! alpha = 1.5
//! phi = "zero"
//! psi = { q = 4, coeffs = [1.0] }
//!
//! [numerics]
//! quad = 200
//! modes = 20
//! truncation = 10
//! grid = [21, 21]
//!
//! [output]
//! dir = "out"
//! format = "csv"
//! ```

use degfrac_core::assembly::{BoundaryData, ProblemSpec};
use degfrac_core::greens::MAX_K;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub k: usize,
    pub m: f64,
    pub alpha: f64,
    pub phi: DataConfig,
    pub psi: DataConfig,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub output: OutputConfig,
}

/// `"zero"` or `{ q, coeffs }` for `[y(1-y)]^q sum coeffs[i] y^i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawData", into = "RawData")]
pub enum DataConfig {
    Zero,
    Bump { q: usize, coeffs: Vec<f64> },
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum RawData {
    Name(String),
    Bump {
        q: usize,
        #[serde(default = "unit_poly")]
        coeffs: Vec<f64>,
    },
}

fn unit_poly() -> Vec<f64> {
    vec![1.0]
}

impl TryFrom<RawData> for DataConfig {
    type Error = String;

    fn try_from(raw: RawData) -> std::result::Result<Self, String> {
        match raw {
            RawData::Name(n) if n == "zero" => Ok(DataConfig::Zero),
            RawData::Name(n) => Err(format!("unknown data name `{n}`, expected \"zero\" or {{ q, coeffs }}")),
            RawData::Bump { q, coeffs } => Ok(DataConfig::Bump { q, coeffs }),
        }
    }
}

impl From<DataConfig> for RawData {
    fn from(d: DataConfig) -> Self {
        match d {
            DataConfig::Zero => RawData::Name("zero".into()),
            DataConfig::Bump { q, coeffs } => RawData::Bump { q, coeffs },
        }
    }
}

impl From<&DataConfig> for BoundaryData {
    fn from(d: &DataConfig) -> Self {
        match d {
            DataConfig::Zero => BoundaryData::Zero,
            DataConfig::Bump { q, coeffs } => BoundaryData::Bump { q: *q, coeffs: coeffs.clone() },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Numerics {
    /// Gauss-Legendre nodes.
    pub quad: usize,
    /// Resolved eigenpairs.
    pub modes: usize,
    /// Terms of the series solution.
    pub truncation: usize,
    /// `[NX, NY]`: field on `x = i/NX`, `y = j/NY`, `i, j >= 1`.
    pub grid: [usize; 2],
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics { quad: 200, modes: 20, truncation: 10, grid: [21, 21] }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct OutputConfig {
    pub dir: String,
    pub format: Format,
}

impl Default for OutputConfig {
    fn default() -> Self {
        OutputConfig { dir: "out".into(), format: Format::Csv }
    }
}

/// Parses and validates a configuration document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Syntax(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

/// TOML text that parses back to `cfg`.
pub fn emit_config(cfg: &RunConfig) -> String {
    toml::to_string(cfg).expect("config serializes")
}

fn check_data(field: &str, d: &DataConfig, k: usize) -> Result<()> {
    if let DataConfig::Bump { q, coeffs } = d {
        let min = BoundaryData::min_order(k);
        if *q < min {
            return Err(CliError::constraint(
                &format!("{field}.q"),
                format!("q must satisfy q >= 4k = {min} for admissible data (got {q})"),
            ));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(CliError::constraint(&format!("{field}.coeffs"), "coefficients must be finite"));
        }
    }
    Ok(())
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let k = self.k;
        if k == 0 || k > MAX_K {
            return Err(CliError::constraint("k", format!("k must satisfy 1 <= k <= {MAX_K} (got {k})")));
        }
        let m = self.m;
        if !m.is_finite() || m < 0.0 || m >= k as f64 || (m > 0.0 && m == m.trunc()) {
            return Err(CliError::constraint(
                "m",
                format!("m must satisfy 0 ≤ m < k and m ∉ N (got m = {m}, k = {k})"),
            ));
        }
        if !(self.alpha > 1.0 && self.alpha < 2.0) {
            return Err(CliError::constraint("alpha", format!("1 < alpha < 2 required (got {})", self.alpha)));
        }
        check_data("phi", &self.phi, k)?;
        check_data("psi", &self.psi, k)?;
        let n = &self.numerics;
        if n.quad < 8 {
            return Err(CliError::constraint("numerics.quad", format!("quad must be at least 8 (got {})", n.quad)));
        }
        if n.modes == 0 || n.modes > n.quad / 4 {
            return Err(CliError::constraint(
                "numerics.modes",
                format!("modes must satisfy 1 <= modes <= quad/4 = {} (got {})", n.quad / 4, n.modes),
            ));
        }
        if n.truncation == 0 || n.truncation > n.modes {
            return Err(CliError::constraint(
                "numerics.truncation",
                format!("truncation must satisfy 1 <= truncation <= modes = {} (got {})", n.modes, n.truncation),
            ));
        }
        if n.grid.iter().any(|&g| g == 0) {
            return Err(CliError::constraint("numerics.grid", "grid sizes must be positive"));
        }
        Ok(())
    }

    pub fn problem(&self) -> Result<ProblemSpec> {
        ProblemSpec::new(self.k, self.m, self.alpha, (&self.phi).into(), (&self.psi).into())
            .map_err(|e| CliError::constraint("problem", e.to_string()))
    }
}
