//! Bias distributions and group-mean factor exposures.
//!
//! Buckets valid bias values into positive/neutral/negative groups, counts
//! the per-model frequency distribution, and averages factor exposures per
//! group with the positive-minus-negative spread per factor.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{ExposureStore, PerformanceDoc, FACTOR_NAMES};
use crate::elicit::BiasRecord;

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("records mix model ids: {first} and {other}")]
    MixedModels { first: String, other: String },
}

/// Sign bucket of a bias value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BiasGroup {
    Positive,
    Neutral,
    Negative,
}

impl BiasGroup {
    pub fn label(&self) -> &'static str {
        match self {
            BiasGroup::Positive => "positive",
            BiasGroup::Neutral => "neutral",
            BiasGroup::Negative => "negative",
        }
    }
}

pub fn classify(beta: i8) -> BiasGroup {
    match beta.cmp(&0) {
        std::cmp::Ordering::Greater => BiasGroup::Positive,
        std::cmp::Ordering::Equal => BiasGroup::Neutral,
        std::cmp::Ordering::Less => BiasGroup::Negative,
    }
}

/// Frequency histogram of bias values for one model.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BiasDistribution {
    pub model_id: String,
    /// counts[i] holds the count for beta = i - 4, i.e. -4..=+4.
    counts: [u64; 9],
    pub excluded: u64,
}

impl BiasDistribution {
    pub fn count(&self, beta: i8) -> u64 {
        assert!((-4..=4).contains(&beta));
        self.counts[(beta + 4) as usize]
    }

    pub fn valid_total(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Counts in display order +4, +3, ..., -4.
    pub fn display_counts(&self) -> [u64; 9] {
        let mut out = [0; 9];
        for (i, v) in self.counts.iter().rev().enumerate() {
            out[i] = *v;
        }
        out
    }
}

/// Histogram over the valid betas of one model's records; invalid pairs are
/// counted as excluded.
pub fn distribution(records: &[BiasRecord]) -> Result<BiasDistribution, AnalyticsError> {
    let model_id = records.first().map(|r| r.model_id.clone()).unwrap_or_default();
    let mut counts = [0u64; 9];
    let mut excluded = 0;
    for record in records {
        if record.model_id != model_id {
            return Err(AnalyticsError::MixedModels {
                first: model_id,
                other: record.model_id.clone(),
            });
        }
        match record.beta {
            Some(beta) => counts[(beta + 4) as usize] += 1,
            None => excluded += 1,
        }
    }
    Ok(BiasDistribution {
        model_id,
        counts,
        excluded,
    })
}

/// Group means and spread for one factor. Means are `None` for empty groups,
/// and the spread is `None` unless both end groups are populated.
#[derive(Debug, Clone, Serialize)]
pub struct FactorSummary {
    pub factor: String,
    pub positive: Option<f64>,
    pub neutral: Option<f64>,
    pub negative: Option<f64>,
    pub spread: Option<f64>,
}

/// Group-mean exposures for one model across the 20 factors.
#[derive(Debug, Clone)]
pub struct ExposureSummary {
    pub model_id: String,
    pub n_positive: usize,
    pub n_neutral: usize,
    pub n_negative: usize,
    /// Valid records with no resolvable exposure vector.
    pub n_dropped: usize,
    pub factors: Vec<FactorSummary>,
}

/// Average the factor exposures per bias group over all resolvable records.
///
/// Each announcement event is one observation; companies announcing in
/// several periods contribute once per record. Records without a valid beta
/// or without an exposure vector as of the prior month-end are dropped.
pub fn exposure_summary(
    records: &[BiasRecord],
    docs: &[PerformanceDoc],
    exposures: &ExposureStore,
) -> Result<ExposureSummary, AnalyticsError> {
    let model_id = records.first().map(|r| r.model_id.clone()).unwrap_or_default();
    let doc_index: std::collections::HashMap<(&str, &str), &PerformanceDoc> = docs
        .iter()
        .map(|d| ((d.company_id.as_str(), d.fiscal_period.as_str()), d))
        .collect();

    let mut sums = [[0.0f64; 20]; 3];
    let mut ns = [0usize; 3];
    let mut n_dropped = 0;
    for record in records {
        if record.model_id != model_id {
            return Err(AnalyticsError::MixedModels {
                first: model_id,
                other: record.model_id.clone(),
            });
        }
        let Some(beta) = record.beta else { continue };
        let doc = doc_index.get(&(record.company_id.as_str(), record.fiscal_period.as_str()));
        let vector = doc.and_then(|d| exposures.at_announcement(&d.company_id, d.announcement_at));
        let Some(vector) = vector else {
            n_dropped += 1;
            continue;
        };
        let g = match classify(beta) {
            BiasGroup::Positive => 0,
            BiasGroup::Neutral => 1,
            BiasGroup::Negative => 2,
        };
        ns[g] += 1;
        for (sum, value) in sums[g].iter_mut().zip(vector.values.iter()) {
            *sum += value;
        }
    }

    let mean = |g: usize, k: usize| -> Option<f64> {
        (ns[g] > 0).then(|| sums[g][k] / ns[g] as f64)
    };
    let factors = FACTOR_NAMES
        .iter()
        .enumerate()
        .map(|(k, name)| {
            let positive = mean(0, k);
            let negative = mean(2, k);
            FactorSummary {
                factor: name.to_string(),
                positive,
                neutral: mean(1, k),
                negative,
                spread: match (positive, negative) {
                    (Some(p), Some(n)) => Some(p - n),
                    _ => None,
                },
            }
        })
        .collect();

    Ok(ExposureSummary {
        model_id,
        n_positive: ns[0],
        n_neutral: ns[1],
        n_negative: ns[2],
        n_dropped,
        factors,
    })
}
