use chrono::NaiveDate;
use nalgebra::{DMatrix, DVector};

use crate::corpus::{FactorStore, ReturnStore, TradingCalendar};

use super::EventStudyError;

/// Estimation window in trading days relative to day 0, inclusive.
pub const ESTIMATION_WINDOW: (i64, i64) = (-130, -11);

/// Post-event window length: relative days 0..=60.
const POST_WINDOW: usize = 60;

/// Ordinary least squares via SVD with an explicit rank check.
#[derive(Debug, Clone)]
pub struct OlsFit {
    pub coefs: Vec<f64>,
    pub residual_variance: f64,
    pub n_obs: usize,
}

pub fn ols(x: &DMatrix<f64>, y: &DVector<f64>) -> Result<OlsFit, EventStudyError> {
    let (n, k) = x.shape();
    if y.len() != n {
        return Err(EventStudyError::Dimension(format!(
            "{n} rows vs {} responses",
            y.len()
        )));
    }
    if n < k {
        return Err(EventStudyError::RankDeficient);
    }
    let svd = x.clone().svd(true, true);
    let max_singular = svd.singular_values.max();
    let tol = max_singular * (n.max(k) as f64) * f64::EPSILON;
    let rank = svd.singular_values.iter().filter(|s| **s > tol).count();
    if rank < k {
        return Err(EventStudyError::RankDeficient);
    }
    let coefs = svd
        .solve(y, tol)
        .map_err(|_| EventStudyError::RankDeficient)?;
    let residuals = y - x * &coefs;
    let dof = (n - k).max(1) as f64;
    let residual_variance = residuals.norm_squared() / dof;
    Ok(OlsFit {
        coefs: coefs.iter().copied().collect(),
        residual_variance,
        n_obs: n,
    })
}

/// Per-event FF5 regression over the pre-event estimation window.
#[derive(Debug, Clone)]
pub struct FF5Fit {
    pub company_id: String,
    pub event_id: String,
    pub alpha: f64,
    /// Sensitivities to (mkt_rf, smb, hml, rmw, cma).
    pub betas: [f64; 5],
    pub n_obs: usize,
    pub residual_variance: f64,
}

impl FF5Fit {
    /// Model-expected return on one day: rf + alpha + betas . factors.
    pub fn expected_return(&self, f: &crate::corpus::FactorRecord) -> f64 {
        self.rf_excess_expected(f) + f.rf
    }

    fn rf_excess_expected(&self, f: &crate::corpus::FactorRecord) -> f64 {
        self.alpha
            + self.betas[0] * f.mkt_rf
            + self.betas[1] * f.smb
            + self.betas[2] * f.hml
            + self.betas[3] * f.rmw
            + self.betas[4] * f.cma
    }
}

/// Regress the company's excess returns on the five factors over trading
/// days -130..=-11 relative to day 0. Days missing either a return or a
/// factor row are skipped; fewer than `min_obs` usable days rejects the
/// event.
pub fn fit_ff5(
    event_id: &str,
    company_id: &str,
    returns: &ReturnStore,
    factors: &FactorStore,
    calendar: &TradingCalendar,
    day0: NaiveDate,
    min_obs: usize,
) -> Result<FF5Fit, EventStudyError> {
    let day0_idx = calendar
        .index_of(day0)
        .ok_or_else(|| EventStudyError::DayZeroOffCalendar {
            event_id: event_id.to_string(),
        })? as i64;
    let mut rows: Vec<[f64; 6]> = Vec::new();
    let mut ys: Vec<f64> = Vec::new();
    for rel in ESTIMATION_WINDOW.0..=ESTIMATION_WINDOW.1 {
        let idx = day0_idx + rel;
        if idx < 0 {
            continue;
        }
        let Some(date) = calendar.day(idx as usize) else {
            continue;
        };
        let (Some(ret), Some(f)) = (returns.get(company_id, date), factors.get(date)) else {
            continue;
        };
        rows.push([1.0, f.mkt_rf, f.smb, f.hml, f.rmw, f.cma]);
        ys.push(ret - f.rf);
    }
    if rows.len() < min_obs {
        return Err(EventStudyError::InsufficientObservations {
            event_id: event_id.to_string(),
            have: rows.len(),
            need: min_obs,
        });
    }
    let x = DMatrix::from_fn(rows.len(), 6, |i, j| rows[i][j]);
    let y = DVector::from_vec(ys);
    let fit = ols(&x, &y)?;
    Ok(FF5Fit {
        company_id: company_id.to_string(),
        event_id: event_id.to_string(),
        alpha: fit.coefs[0],
        betas: [
            fit.coefs[1],
            fit.coefs[2],
            fit.coefs[3],
            fit.coefs[4],
            fit.coefs[5],
        ],
        n_obs: fit.n_obs,
        residual_variance: fit.residual_variance,
    })
}

/// Abnormal returns over relative days 0..=60. Days with a missing return
/// or factor row stay `None` rather than being zero-filled.
pub fn abnormal_returns(
    fit: &FF5Fit,
    returns: &ReturnStore,
    factors: &FactorStore,
    calendar: &TradingCalendar,
    day0: NaiveDate,
) -> Result<super::ARSeries, EventStudyError> {
    let day0_idx = calendar
        .index_of(day0)
        .ok_or_else(|| EventStudyError::DayZeroOffCalendar {
            event_id: fit.event_id.clone(),
        })?;
    let mut ar = Vec::with_capacity(POST_WINDOW + 1);
    for rel in 0..=POST_WINDOW {
        let value = calendar.day(day0_idx + rel).and_then(|date| {
            let ret = returns.get(&fit.company_id, date)?;
            let f = factors.get(date)?;
            Some(ret - fit.expected_return(f))
        });
        ar.push(value);
    }
    Ok(super::ARSeries {
        event_id: fit.event_id.clone(),
        ar,
    })
}
