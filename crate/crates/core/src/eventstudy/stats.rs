use statrs::distribution::{ContinuousCDF, StudentsT};

/// Significance marker per the table footnote convention.
pub fn star(p: f64) -> &'static str {
    if p < 0.05 {
        "**"
    } else if p < 0.1 {
        "*"
    } else {
        ""
    }
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var)
}

fn two_sided_p(t: f64, dof: f64) -> f64 {
    let dist = StudentsT::new(0.0, 1.0, dof).expect("valid dof");
    2.0 * (1.0 - dist.cdf(t.abs()))
}

/// Two-sided one-sample t-test of the mean against zero. `None` for n < 2.
///
/// A degenerate zero-variance sample gets p = 1 at mean zero and the
/// smallest positive double (reported as "< machine minimum") otherwise.
pub fn one_sample_t(xs: &[f64]) -> Option<(f64, f64)> {
    if xs.len() < 2 {
        return None;
    }
    let n = xs.len() as f64;
    let (mean, var) = mean_var(xs);
    if var == 0.0 {
        return Some(if mean == 0.0 {
            (0.0, 1.0)
        } else {
            (mean.signum() * f64::INFINITY, f64::MIN_POSITIVE)
        });
    }
    let t = mean / (var / n).sqrt();
    Some((t, two_sided_p(t, n - 1.0)))
}

/// Welch's unequal-variance two-sample t-test, two-sided. `None` unless both
/// samples have n >= 2.
pub fn welch_t(a: &[f64], b: &[f64]) -> Option<(f64, f64)> {
    if a.len() < 2 || b.len() < 2 {
        return None;
    }
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let se2 = va / na + vb / nb;
    if se2 == 0.0 {
        return Some(if ma == mb {
            (0.0, 1.0)
        } else {
            ((ma - mb).signum() * f64::INFINITY, f64::MIN_POSITIVE)
        });
    }
    let t = (ma - mb) / se2.sqrt();
    let dof = se2.powi(2)
        / ((va / na).powi(2) / (na - 1.0) + (vb / nb).powi(2) / (nb - 1.0));
    Some((t, two_sided_p(t, dof)))
}
