//! Empirical-vs-predicted comparison rows shared by the verification sweeps.

use serde::Serialize;

/// One comparison of an exhaustively computed sum against its asymptotic
/// main term. Fields not used by a given sum kind are zero.
#[derive(Debug, Clone, Serialize)]
pub struct SumComparison {
    pub label: String,
    pub m: u64,
    pub a: u64,
    pub d: u64,
    pub k: u32,
    pub x: u64,
    pub empirical: f64,
    pub predicted: f64,
    pub abs_error: f64,
    pub normalized_error: f64,
}

impl SumComparison {
    pub const CSV_HEADER: &'static str =
        "label,m,a,d,k,x,empirical,predicted,abs_error,normalized_error";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.label,
            self.m,
            self.a,
            self.d,
            self.k,
            self.x,
            self.empirical,
            self.predicted,
            self.abs_error,
            self.normalized_error
        )
    }

    pub fn ratio(&self) -> f64 {
        self.empirical / self.predicted
    }
}
