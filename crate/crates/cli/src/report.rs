//! Line-delimited JSON record shapes. Field names are stable; `weil_poly`
//! is always the five coefficients in descending degree order
//! `[1, -a1, a2, -p*a1, p^2]`.

use g2jac::cm::CongruenceTrace;
use g2jac::{EmbeddingDegreeReport, MumfordDivisor, WeilPoly};
use serde::Serialize;

pub fn weil_coeffs_i64(w: &WeilPoly) -> [i64; 5] {
    let c = w.coeffs_desc();
    [
        c[0] as i64,
        c[1] as i64,
        c[2] as i64,
        c[3] as i64,
        c[4] as i64,
    ]
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceId {
    Curve {
        p: u64,
        f: Vec<u64>,
    },
    Cm {
        #[serde(rename = "D")]
        d: u64,
        a: i64,
        b: i64,
        c: [i64; 4],
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct SylowEntry {
    pub ell: u64,
    pub valuation: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rank: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cyclic: Option<bool>,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerdictEntry {
    pub ell: u64,
    pub theorem: &'static str,
    pub hypotheses_met: bool,
    pub conclusion_holds: bool,
    pub counterexample: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<CongruenceTrace>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Assumptions {
    /// The real subfield's class number is assumed, never computed.
    pub class_number_h1: &'static str,
    pub primitivity_screen: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub instance: InstanceId,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub p: u64,
    pub weil_poly: [i64; 5],
    pub order: u64,
    pub factorization: Vec<(u64, u32)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counts: Option<[u64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumerated_order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<[u64; 4]>,
    pub sylow: Vec<SylowEntry>,
    pub embedding_degree: Vec<EmbeddingDegreeReport>,
    pub verdicts: Vec<VerdictEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_bound: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub assumptions: Option<Assumptions>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepRecord {
    #[serde(rename = "D")]
    pub d: u64,
    pub a: i64,
    pub b: i64,
    pub c: [i64; 4],
    pub p: u64,
    pub weil_poly: [i64; 5],
    pub order: u64,
    pub q_bound: i64,
    pub primitivity: String,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct SkipCounters {
    pub field_invalid: u64,
    pub irrational_norm: u64,
    pub even_norm: u64,
    pub composite_norm: u64,
    pub norm_out_of_range: u64,
    pub p_above_cap: u64,
    pub weil_invalid: u64,
}

impl SkipCounters {
    pub fn total(&self) -> u64 {
        self.field_invalid
            + self.irrational_norm
            + self.even_norm
            + self.composite_norm
            + self.norm_out_of_range
            + self.p_above_cap
            + self.weil_invalid
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteSummary {
    pub suite: &'static str,
    pub checked: u64,
    pub violations: u64,
    pub witnesses: u64,
    pub passed: bool,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct SylowGenRecord {
    pub p: u64,
    pub f: Vec<u64>,
    pub ell: u64,
    pub seed: u64,
    pub outcome: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub order: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub generator: Option<MumfordDivisor>,
}
