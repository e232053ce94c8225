//! Coefficient exchange file between `optimize` and `sieve`: decimal strings
//! with enough digits to round-trip doubles exactly.

use anyhow::{anyhow, Result};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoefficientsFile {
    pub degree: usize,
    pub coefficients: Vec<String>,
}

impl CoefficientsFile {
    pub fn from_values(degree: usize, values: &[f64]) -> Self {
        CoefficientsFile {
            degree,
            coefficients: values.iter().map(|v| format!("{:.17e}", v)).collect(),
        }
    }

    pub fn into_values(self) -> Result<(usize, Vec<f64>)> {
        let expected = (self.degree + 1) * (self.degree + 1);
        if self.coefficients.len() != expected {
            return Err(anyhow!(
                "coefficient file has {} entries, degree {} needs {}",
                self.coefficients.len(),
                self.degree,
                expected
            ));
        }
        let values = self
            .coefficients
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|e| anyhow!("bad coefficient `{}`: {}", s, e))
            })
            .collect::<Result<Vec<f64>>>()?;
        Ok((self.degree, values))
    }
}
