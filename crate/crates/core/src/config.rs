use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which route computes the functional calculus.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Order-theoretic iterations: square roots by the monotone effect
    /// iteration, carriers by powers of `1 - e`.
    #[default]
    Iterative,
    /// Reference values from the Jacobi eigendecomposition.
    Oracle,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Iterative => f.write_str("iterative"),
            Method::Oracle => f.write_str("oracle"),
        }
    }
}

impl std::str::FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "iterative" => Ok(Method::Iterative),
            "oracle" => Ok(Method::Oracle),
            other => Err(Error::InvalidArgument(format!("unknown method {other:?}"))),
        }
    }
}

/// Numeric thresholds and iteration caps shared by every operation.
///
/// All comparisons are relative: a threshold `t` is applied as
/// `t * (1 + ||x||)` where `x` is the quantity being compared.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    /// Hermiticity check for strict construction.
    pub sym: f64,
    /// Slack for Loewner order and positivity tests; also the floor below
    /// which an element is numerically zero.
    pub psd: f64,
    /// Distance to `{0, 1}` accepted for projections.
    pub proj: f64,
    /// Commutator threshold.
    pub comm: f64,
    /// Cauchy-increment threshold for the square-root and inverse iterations.
    pub conv: f64,
    pub max_iter: usize,
    pub bisect_steps: usize,
    pub method: Method,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            sym: 1e-12,
            psd: 1e-9,
            proj: 1e-8,
            comm: 1e-9,
            conv: 1e-11,
            max_iter: 200_000,
            bisect_steps: 80,
            method: Method::Iterative,
        }
    }
}

impl ToleranceConfig {
    pub fn with_method(mut self, method: Method) -> Self {
        self.method = method;
        self
    }

    pub fn oracle() -> Self {
        Self::default().with_method(Method::Oracle)
    }

    pub fn validate(&self) -> Result<()> {
        let thresholds = [
            ("sym", self.sym),
            ("psd", self.psd),
            ("proj", self.proj),
            ("comm", self.comm),
            ("conv", self.conv),
        ];
        for (name, value) in thresholds {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidArgument(format!(
                    "tolerance {name} must be positive and finite, got {value}"
                )));
            }
        }
        if self.max_iter == 0 {
            return Err(Error::InvalidArgument("max_iter must be at least 1".into()));
        }
        if self.bisect_steps == 0 {
            return Err(Error::InvalidArgument("bisect_steps must be at least 1".into()));
        }
        Ok(())
    }

    /// Overrides one threshold by name (`sym`, `psd`, `proj`, `comm`, `conv`).
    pub fn set(&mut self, key: &str, value: f64) -> Result<()> {
        match key {
            "sym" => self.sym = value,
            "psd" => self.psd = value,
            "proj" => self.proj = value,
            "comm" => self.comm = value,
            "conv" => self.conv = value,
            other => {
                return Err(Error::InvalidArgument(format!("unknown tolerance {other:?}")));
            }
        }
        self.validate()
    }
}
