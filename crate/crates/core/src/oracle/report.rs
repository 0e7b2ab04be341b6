use std::fmt::Write as _;

use serde::Serialize;

pub const ORACLE_CSV_HEADER: &str = "lemma,params,samples,max_ratio,violations,worst_case_seed";

/// Outcome of one inequality check configuration.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleReport {
    pub lemma: String,
    /// `key=value` pairs joined by `;`.
    pub params: String,
    pub samples: usize,
    pub max_ratio: f64,
    pub violations: usize,
    pub worst_case_seed: u64,
}

impl OracleReport {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }

    pub fn csv(reports: &[OracleReport]) -> String {
        let mut out = String::from(ORACLE_CSV_HEADER);
        out.push('\n');
        for r in reports {
            let _ = writeln!(
                out,
                "{},{},{},{:e},{},{}",
                r.lemma, r.params, r.samples, r.max_ratio, r.violations, r.worst_case_seed
            );
        }
        out
    }
}
