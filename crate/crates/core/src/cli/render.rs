use crate::analytics::{BiasDistribution, ExposureSummary};
use crate::eventstudy::EventStudyResult;

/// "0.014 -> 1.40%" percent formatting used by the CAR tables.
pub fn percent(x: f64) -> String {
    format!("{:.2}%", x * 100.0)
}

/// Percent cell with its significance marker, e.g. "-1.15%**".
pub fn percent_starred(x: f64, star: &str) -> String {
    format!("{}{}", percent(x), star)
}

const BETA_HEADER: &str = "+4,+3,+2,+1,0,-1,-2,-3,-4";

/// Bias-distribution table: one row per model, beta columns +4 down to -4,
/// blank cells for zero counts.
pub fn distribution_table(dists: &[BiasDistribution]) -> String {
    let mut out = String::new();
    out.push_str(&format!("model,{BETA_HEADER}\n"));
    for dist in dists {
        let cells: Vec<String> = dist
            .display_counts()
            .iter()
            .map(|c| if *c == 0 { String::new() } else { c.to_string() })
            .collect();
        out.push_str(&format!("{},{}\n", dist.model_id, cells.join(",")));
    }
    out
}

/// Group-mean exposure table for one model; spreads at or above the
/// highlight threshold are wrapped in `**`.
pub fn exposure_table(summary: &ExposureSummary, bold_threshold: f64) -> String {
    let cell = |v: Option<f64>| match v {
        Some(x) => format!("{x:.2}"),
        None => String::new(),
    };
    let mut out = format!(
        "# model {} (n_pos {}, n_neu {}, n_neg {}, dropped {})\n",
        summary.model_id,
        summary.n_positive,
        summary.n_neutral,
        summary.n_negative,
        summary.n_dropped
    );
    out.push_str("factor,positive,neutral,negative,spread\n");
    for row in &summary.factors {
        let spread = match row.spread {
            Some(s) if s.abs() >= bold_threshold => format!("**{s:.2}**"),
            Some(s) => format!("{s:.2}"),
            None => String::new(),
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            row.factor,
            cell(row.positive),
            cell(row.neutral),
            cell(row.negative),
            spread
        ));
    }
    out
}

/// CAR snapshot table: one row per group, percent cells with stars.
pub fn car_table(results: &[EventStudyResult], horizons: &[usize]) -> String {
    let mut out = String::new();
    let header: Vec<String> = horizons.iter().map(|h| format!("{h}day")).collect();
    out.push_str(&format!("group,{}\n", header.join(",")));
    for result in results {
        let cells: Vec<String> = result
            .snapshots
            .iter()
            .map(|s| percent_starred(s.car, s.star))
            .collect();
        out.push_str(&format!("{},{}\n", result.group.label(), cells.join(",")));
    }
    out.push_str("# *: p<.1, **: p<.05\n");
    out
}
