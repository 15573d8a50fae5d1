use crate::analytics::BiasGroup;

use super::stats::{one_sample_t, star, welch_t};

/// Relative days 0..=60 are covered by every series.
pub const EVENT_WINDOW_DAYS: usize = 61;

/// Per-day abnormal returns for one event over relative days 0..=60.
/// `None` marks a missing trading day, never a zero fill.
#[derive(Debug, Clone)]
pub struct ARSeries {
    pub event_id: String,
    pub ar: Vec<Option<f64>>,
}

impl ARSeries {
    pub fn is_complete(&self) -> bool {
        self.ar.len() == EVENT_WINDOW_DAYS && self.ar.iter().all(|v| v.is_some())
    }

    /// Cumulative sums over days 0..=t for a complete series.
    fn car_path(&self) -> Vec<f64> {
        let mut path = Vec::with_capacity(EVENT_WINDOW_DAYS);
        let mut acc = 0.0;
        for v in &self.ar {
            acc += v.expect("complete series");
            path.push(acc);
        }
        path
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroupLabel {
    Group(BiasGroup),
    /// Positive minus negative group.
    Spread,
}

impl GroupLabel {
    pub fn label(&self) -> &'static str {
        match self {
            GroupLabel::Group(g) => g.label(),
            GroupLabel::Spread => "spread",
        }
    }
}

/// CAR level and test statistics at one horizon.
#[derive(Debug, Clone)]
pub struct HorizonStat {
    pub horizon: usize,
    pub car: f64,
    pub t: Option<f64>,
    pub p: Option<f64>,
    pub star: &'static str,
}

/// Group-mean CAR path with horizon snapshots.
#[derive(Debug, Clone)]
pub struct EventStudyResult {
    pub model_id: String,
    pub group: GroupLabel,
    /// Mean CAR per relative day 0..=60.
    pub car_path: Vec<f64>,
    pub snapshots: Vec<HorizonStat>,
    pub n_events: usize,
    /// Events excluded for incomplete post-window coverage.
    pub n_dropped: usize,
}

fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

fn group_result(
    model_id: &str,
    group: GroupLabel,
    per_event_paths: &[Vec<f64>],
    n_dropped: usize,
    horizons: &[usize],
) -> EventStudyResult {
    let n = per_event_paths.len();
    let mut car_path = vec![0.0; EVENT_WINDOW_DAYS];
    if n > 0 {
        for path in per_event_paths {
            for (acc, v) in car_path.iter_mut().zip(path.iter()) {
                *acc += v;
            }
        }
        for acc in car_path.iter_mut() {
            *acc /= n as f64;
        }
    }
    let snapshots = horizons
        .iter()
        .filter(|h| **h < EVENT_WINDOW_DAYS)
        .map(|&h| {
            let cars: Vec<f64> = per_event_paths.iter().map(|p| p[h]).collect();
            let (t, p) = match one_sample_t(&cars) {
                Some((t, p)) => (Some(t), Some(p)),
                None => (None, None),
            };
            HorizonStat {
                horizon: h,
                car: if n > 0 { mean(&cars) } else { 0.0 },
                t,
                p,
                star: p.map_or("", star),
            }
        })
        .collect();
    EventStudyResult {
        model_id: model_id.to_string(),
        group,
        car_path,
        snapshots,
        n_events: n,
        n_dropped,
    }
}

/// Aggregate per-event abnormal-return series into group-mean CAR paths.
///
/// Only events with complete 0..=60 coverage enter a group path; incomplete
/// events are counted in `n_dropped` so the telescoping identity
/// `car_path[t] - car_path[t-1] = mean AR_t` holds over a fixed event set.
/// Returns results for the populated sign groups, then a positive-minus-
/// negative spread result when both end groups are populated (Welch test).
pub fn group_car(
    model_id: &str,
    events: &[(ARSeries, BiasGroup)],
    horizons: &[usize],
) -> Vec<EventStudyResult> {
    let mut paths: [Vec<Vec<f64>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
    let mut dropped = [0usize; 3];
    for (series, group) in events {
        let g = match group {
            BiasGroup::Positive => 0,
            BiasGroup::Neutral => 1,
            BiasGroup::Negative => 2,
        };
        if series.is_complete() {
            paths[g].push(series.car_path());
        } else {
            dropped[g] += 1;
        }
    }

    let mut results = Vec::new();
    for (g, group) in [BiasGroup::Positive, BiasGroup::Neutral, BiasGroup::Negative]
        .into_iter()
        .enumerate()
    {
        if paths[g].is_empty() && dropped[g] == 0 {
            continue;
        }
        if paths[g].is_empty() {
            log::warn!(
                "group {} has no complete events ({} dropped)",
                group.label(),
                dropped[g]
            );
            continue;
        }
        results.push(group_result(
            model_id,
            GroupLabel::Group(group),
            &paths[g],
            dropped[g],
            horizons,
        ));
    }

    if !paths[0].is_empty() && !paths[2].is_empty() {
        let pos = &paths[0];
        let neg = &paths[2];
        let mut car_path = vec![0.0; EVENT_WINDOW_DAYS];
        for t in 0..EVENT_WINDOW_DAYS {
            let pmean = mean(&pos.iter().map(|p| p[t]).collect::<Vec<_>>());
            let nmean = mean(&neg.iter().map(|p| p[t]).collect::<Vec<_>>());
            car_path[t] = pmean - nmean;
        }
        let snapshots = horizons
            .iter()
            .filter(|h| **h < EVENT_WINDOW_DAYS)
            .map(|&h| {
                let pcars: Vec<f64> = pos.iter().map(|p| p[h]).collect();
                let ncars: Vec<f64> = neg.iter().map(|p| p[h]).collect();
                let (t, p) = match welch_t(&pcars, &ncars) {
                    Some((t, p)) => (Some(t), Some(p)),
                    None => (None, None),
                };
                HorizonStat {
                    horizon: h,
                    car: mean(&pcars) - mean(&ncars),
                    t,
                    p,
                    star: p.map_or("", star),
                }
            })
            .collect();
        results.push(EventStudyResult {
            model_id: model_id.to_string(),
            group: GroupLabel::Spread,
            car_path,
            snapshots,
            n_events: pos.len() + neg.len(),
            n_dropped: dropped[0] + dropped[2],
        });
    }
    results
}
