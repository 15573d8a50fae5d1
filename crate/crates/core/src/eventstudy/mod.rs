//! FF5 event study: estimation-window regressions, abnormal returns, and
//! group-average cumulative abnormal returns with significance tests.
//!
//! Day-count convention: day 0 is the event day and every horizon window
//! includes it, so the "1 day" horizon covers days {0, 1} and the CAR at
//! horizon t sums t+1 daily abnormal returns.

mod car;
mod ols;
mod stats;

pub use car::{
    group_car, ARSeries, EventStudyResult, GroupLabel, HorizonStat, EVENT_WINDOW_DAYS,
};
pub use ols::{abnormal_returns, fit_ff5, ols, FF5Fit, OlsFit, ESTIMATION_WINDOW};
pub use stats::{one_sample_t, star, welch_t};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum EventStudyError {
    #[error("event {event_id}: only {have} usable observations in the estimation window (need {need})")]
    InsufficientObservations {
        event_id: String,
        have: usize,
        need: usize,
    },
    #[error("design matrix is rank-deficient")]
    RankDeficient,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("event {event_id}: day 0 not on the trading calendar")]
    DayZeroOffCalendar { event_id: String },
}
