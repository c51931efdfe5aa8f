//! Response transformations of the regression models.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Transformation {
    #[default]
    None,
    /// Fit `sqrt(y)`.
    Sqrt,
    /// Fit `1 / y`.
    Reciprocal,
    /// Fit `ln(y)`.
    Semilog,
    /// Fit `y²`.
    Power,
}

impl Transformation {
    pub const ALL: [Transformation; 5] = [
        Transformation::None,
        Transformation::Sqrt,
        Transformation::Reciprocal,
        Transformation::Semilog,
        Transformation::Power,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Transformation::None => "none",
            Transformation::Sqrt => "sqrt",
            Transformation::Reciprocal => "reciprocal",
            Transformation::Semilog => "semilog",
            Transformation::Power => "power",
        }
    }

    /// Maps a positive cost into the fitting space.
    pub fn apply(self, y: f64) -> f64 {
        match self {
            Transformation::None => y,
            Transformation::Sqrt => y.sqrt(),
            Transformation::Reciprocal => 1.0 / y,
            Transformation::Semilog => y.ln(),
            Transformation::Power => y * y,
        }
    }

    /// Maps a fitted value back to a cost, refusing values outside the
    /// inverse's domain or that would give a non-positive cost.
    pub fn invert(self, z: f64) -> Result<f64> {
        let out = |msg: String| Err(Error::OutOfRange(msg));
        if !z.is_finite() {
            return out(format!("non-finite {} value", self.name()));
        }
        let y = match self {
            Transformation::None => z,
            Transformation::Sqrt if z < 0.0 => return out(format!("square-root model predicts {z:.4} < 0")),
            Transformation::Sqrt => z * z,
            Transformation::Reciprocal if z <= 0.0 => return out(format!("reciprocal model predicts {z:.6e} <= 0")),
            Transformation::Reciprocal => 1.0 / z,
            Transformation::Semilog => z.exp(),
            Transformation::Power if z < 0.0 => return out(format!("power model predicts {z:.4e} < 0")),
            Transformation::Power => z.sqrt(),
        };
        if !(y.is_finite() && y > 0.0) {
            return out(format!("cost {y} is not a positive finite amount"));
        }
        Ok(y)
    }
}

impl fmt::Display for Transformation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Transformation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "none" | "linear" => Ok(Transformation::None),
            "sqrt" | "quadratic" => Ok(Transformation::Sqrt),
            "reciprocal" => Ok(Transformation::Reciprocal),
            "semilog" | "log" | "ln" => Ok(Transformation::Semilog),
            "power" | "square" => Ok(Transformation::Power),
            other => Err(Error::invalid(format!("unknown transformation `{other}`"))),
        }
    }
}
