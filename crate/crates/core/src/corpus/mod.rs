//! Input datasets and persistence.
//!
//! Everything the pipeline consumes comes through this module: performance
//! texts (`docs.jsonl`), month-end factor exposures (`exposures.csv`), daily
//! returns and factor series (`returns.csv`, `factors.csv`), the trading-day
//! calendar, and the on-disk cache of raw model responses.

mod cache;
mod calendar;
mod load;
mod types;

pub use cache::{cache_key, ResponseCache};
pub use calendar::TradingCalendar;
pub use load::{load_docs, load_exposures, load_factors, load_returns, FactorStore, ReturnStore};
pub use types::{
    ExposureStore, ExposureVector, FactorRecord, PerformanceDoc, ReturnRecord, FACTOR_NAMES,
};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed record: {message}")]
    Malformed {
        path: String,
        line: usize,
        message: String,
    },
    #[error("duplicate record for ({company_id}, {fiscal_period})")]
    Duplicate {
        company_id: String,
        fiscal_period: String,
    },
    #[error("trading calendar does not cover {date} (calendar spans {first}..{last})")]
    CalendarGap {
        date: chrono::NaiveDate,
        first: chrono::NaiveDate,
        last: chrono::NaiveDate,
    },
    #[error("trading calendar is empty or not strictly increasing at line {line}")]
    BadCalendar { line: usize },
    #[error("cache key {key} already holds a different payload")]
    CacheConflict { key: String },
}
