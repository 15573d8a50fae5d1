use std::collections::HashMap;

use chrono::{Datelike, NaiveDate, NaiveDateTime};
use serde::{Deserialize, Serialize};

/// The 20 style-factor names, in the display order used throughout.
pub const FACTOR_NAMES: [&str; 20] = [
    "Short Term Reversal",
    "Beta",
    "NK225",
    "Size",
    "Residual Volatility",
    "Liquidity",
    "Momentum",
    "Non-Linear Size",
    "Leverage",
    "Value",
    "Macro Sensitivity",
    "Long Term Reversal",
    "Foreign Sensitivity",
    "Sentiment",
    "Earnings Yield",
    "Management",
    "Industry Momentum",
    "Growth",
    "Earnings Quality",
    "Prospect",
];

/// One company's performance narrative from an earnings announcement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerformanceDoc {
    pub company_id: String,
    pub company_name: String,
    /// Announcement timestamp in exchange-local time (naive ISO-8601).
    pub announcement_at: NaiveDateTime,
    pub fiscal_period: String,
    pub text: String,
}

impl PerformanceDoc {
    /// Invariant check used by the loaders.
    pub fn validate(&self) -> Result<(), String> {
        if self.company_id.is_empty() {
            return Err("company_id must be non-empty".into());
        }
        if self.text.is_empty() {
            return Err("text must be non-empty".into());
        }
        Ok(())
    }
}

/// A company's 20 factor exposures as of a month-end date.
///
/// Values are stored positionally in [`FACTOR_NAMES`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct ExposureVector {
    pub company_id: String,
    pub as_of: NaiveDate,
    pub values: [f64; 20],
}

impl ExposureVector {
    pub fn get(&self, factor: &str) -> Option<f64> {
        FACTOR_NAMES
            .iter()
            .position(|f| *f == factor)
            .map(|i| self.values[i])
    }
}

/// One daily simple return for one company.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnRecord {
    pub company_id: String,
    pub date: NaiveDate,
    pub ret: f64,
}

/// One day of factor returns (plus the risk-free rate), all as fractions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FactorRecord {
    pub date: NaiveDate,
    pub mkt_rf: f64,
    pub smb: f64,
    pub hml: f64,
    pub rmw: f64,
    pub cma: f64,
    pub rf: f64,
}

impl FactorRecord {
    pub fn is_finite(&self) -> bool {
        [self.mkt_rf, self.smb, self.hml, self.rmw, self.cma, self.rf]
            .iter()
            .all(|v| v.is_finite())
    }
}

/// Month-end exposure vectors indexed by company, sorted by date.
#[derive(Debug, Default)]
pub struct ExposureStore {
    by_company: HashMap<String, Vec<ExposureVector>>,
    pub n_rows: usize,
}

impl ExposureStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, vector: ExposureVector) {
        let rows = self.by_company.entry(vector.company_id.clone()).or_default();
        let pos = rows.partition_point(|v| v.as_of < vector.as_of);
        rows.insert(pos, vector);
        self.n_rows += 1;
    }

    /// The exposure vector in force at an announcement: the last `as_of`
    /// strictly before the first day of the announcement month.
    ///
    /// A vector dated inside the announcement month is never returned, even
    /// when it predates the announcement timestamp itself.
    pub fn at_announcement(
        &self,
        company_id: &str,
        announcement_at: NaiveDateTime,
    ) -> Option<&ExposureVector> {
        let month_start =
            NaiveDate::from_ymd_opt(announcement_at.year(), announcement_at.month(), 1)?;
        let rows = self.by_company.get(company_id)?;
        let idx = rows.partition_point(|v| v.as_of < month_start);
        if idx == 0 {
            None
        } else {
            Some(&rows[idx - 1])
        }
    }
}
