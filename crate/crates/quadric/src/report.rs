//! Versioned JSON envelopes around the core reports.

use std::collections::BTreeMap;

use quadric_core::complexes::SpectralSequence;
use serde::Serialize;
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL: &str = "quadric";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Every JSON report has this shape; `report` is command-specific.
#[derive(Debug, Clone, Serialize)]
pub struct Envelope {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    /// Parameters as given, rationals as `"p/q"`.
    pub params: Value,
    /// Truncation bounds actually used (`k_max`, degree ceilings, pages).
    pub bounds: Value,
    pub passed: bool,
    pub warnings: Vec<String>,
    /// Only present with `--timing`, so default output is reproducible.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
    pub report: Value,
}

impl Envelope {
    pub fn new(command: &str, params: Value, bounds: Value, passed: bool, report: Value) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool: TOOL,
            version: VERSION,
            command: command.into(),
            params,
            bounds,
            passed,
            warnings: Vec::new(),
            wall_time_ms: None,
            report,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("envelopes always serialize") + "\n"
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct TermDump {
    pub degree: i64,
    pub level: u32,
    pub dimension: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct DifferentialDump {
    pub source: (i64, u32),
    pub target: (i64, u32),
    pub rank: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct PageDump {
    pub r: u32,
    pub terms: Vec<TermDump>,
    pub differentials: Vec<DifferentialDump>,
    pub totals: BTreeMap<i64, usize>,
}

/// Dimensions and ranks of every page; representatives are left out.
#[derive(Debug, Clone, Serialize)]
pub struct SpectralDump {
    pub min_level: u32,
    pub max_level: u32,
    pub degeneration_page: u32,
    pub rank_consistent: bool,
    pub limit_totals: BTreeMap<i64, usize>,
    pub pages: Vec<PageDump>,
}

impl From<&SpectralSequence> for SpectralDump {
    fn from(ss: &SpectralSequence) -> Self {
        let pages = ss
            .pages
            .iter()
            .map(|p| {
                let terms: Vec<TermDump> = p
                    .terms
                    .iter()
                    .filter(|(_, t)| t.dimension > 0)
                    .map(|(&(degree, level), t)| TermDump { degree, level, dimension: t.dimension })
                    .collect();
                let mut totals = BTreeMap::new();
                for t in &terms {
                    *totals.entry(t.degree).or_insert(0) += t.dimension;
                }
                PageDump {
                    r: p.r,
                    differentials: p
                        .differentials
                        .iter()
                        .filter(|d| d.rank > 0)
                        .map(|d| DifferentialDump { source: d.source, target: d.target, rank: d.rank })
                        .collect(),
                    terms,
                    totals,
                }
            })
            .collect();
        Self {
            min_level: ss.min_level,
            max_level: ss.max_level,
            degeneration_page: ss.degeneration_page,
            rank_consistent: ss.rank_consistent,
            limit_totals: ss.limit_totals(),
            pages,
        }
    }
}
