//! Acceptance gate: one test per criterion, each printing a PASS line once
//! its assertions hold. Run with `cargo test --test acceptance`.

use std::time::Instant;

use chrono::{NaiveDate, NaiveDateTime};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use sentibias::analytics::{exposure_summary, BiasGroup};
use sentibias::corpus::{
    ExposureStore, ExposureVector, FactorRecord, PerformanceDoc, ResponseCache, ReturnRecord,
    ReturnStore, TradingCalendar, FACTOR_NAMES,
};
use sentibias::corpus::FactorStore;
use sentibias::elicit::{
    parse_score, run_elicitation, BiasRecord, ElicitOptions, GenerationParams, MockBackend,
    ScoreOutcome, TemplateSet,
};
use sentibias::eventstudy::{
    fit_ff5, group_car, one_sample_t, ARSeries, GroupLabel, EVENT_WINDOW_DAYS,
};
use sentibias::marketmodel::{
    closed_form_price, derived_constants, fixed_point_residuals, lag1_autocorrelation,
    one_step_consistency, one_step_consistency_with, simulate_paths, DerivedConstants,
    MarketParams, MarketState, SimulateOptions,
};

fn ts(s: &str) -> NaiveDateTime {
    NaiveDateTime::parse_from_str(s, "%Y-%m-%dT%H:%M:%S").unwrap()
}

fn doc(company_id: &str, name: &str, period: &str, text: &str) -> PerformanceDoc {
    PerformanceDoc {
        company_id: company_id.into(),
        company_name: name.into(),
        announcement_at: ts("2023-05-10T14:00:00"),
        fiscal_period: period.into(),
        text: text.into(),
    }
}

const WORD_POOL: [&str; 15] = [
    "increase", "grew", "profit", "strong", "gain", "decrease", "fell", "loss", "weak",
    "impairment", "sales", "revenue", "quarter", "segment", "yen",
];

#[test]
fn criterion_01_bias_identity_on_randomized_corpus() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(11);
    let docs: Vec<PerformanceDoc> = (0..10_000)
        .map(|i| {
            let words: Vec<&str> = (0..rng.gen_range(3..12))
                .map(|_| WORD_POOL[rng.gen_range(0..WORD_POOL.len())])
                .collect();
            doc(
                &format!("{i:05}"),
                &format!("Company {i:05}"),
                "FY2022",
                &format!("{}.", words.join(" ")),
            )
        })
        .collect();

    let dir = tempfile::tempdir().unwrap();
    let cache = ResponseCache::open(dir.path()).unwrap();
    let backend = MockBackend::new();
    let (records, summary) = run_elicitation(
        &backend,
        &cache,
        &docs,
        &GenerationParams::new("mock-model"),
        &TemplateSet::default(),
        &ElicitOptions::default(),
    )
    .unwrap();

    assert_eq!(records.len(), 10_000);
    assert!(summary.errors.is_empty());
    for record in &records {
        match (&record.s_u, &record.s_b) {
            (ScoreOutcome::Valid(u), ScoreOutcome::Valid(b)) => {
                let beta = record.beta.expect("both scores valid");
                assert_eq!(beta, *b as i8 - *u as i8);
                assert!((-4..=4).contains(&beta));
            }
            _ => assert!(record.beta.is_none()),
        }
    }
    // Mock ground truth: the unnamed score is the keyword score, the named
    // score adds the per-company offset.
    let by_id: std::collections::HashMap<&str, &PerformanceDoc> =
        docs.iter().map(|d| (d.company_id.as_str(), d)).collect();
    for record in &records {
        let d = by_id[record.company_id.as_str()];
        let base = MockBackend::score_text(&d.text);
        let named = (base + MockBackend::company_offset(&d.company_name)).clamp(1, 5);
        assert_eq!(record.s_u.score(), Some(base as u8));
        assert_eq!(record.s_b.score(), Some(named as u8));
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "took {elapsed:?}");
    println!("criterion 1 (bias identity, 10k mock corpus): PASS ({elapsed:?})");
}

#[test]
fn criterion_02_parser_decision_table_and_prefix_property() {
    let table: [(&str, Option<u8>); 22] = [
        ("0", None),
        ("1", Some(1)),
        ("2", Some(2)),
        ("3", Some(3)),
        ("4", Some(4)),
        ("5", Some(5)),
        ("6", None),
        ("7", None),
        ("8", None),
        ("9", None),
        ("I would rate this 2 out of 5", Some(2)),
        ("4 or 5", Some(4)),
        ("between 1 and 3", Some(1)),
        ("3.5", Some(3)),
        ("4.5 stars", Some(4)),
        ("", None),
        ("Cannot determine sentiment.", None),
        ("Score: 7", None),
        ("0 stars", None),
        ("2023", None),
        ("01", None),
        ("rating: 10", None),
    ];
    for (raw, expected) in table {
        assert_eq!(parse_score(raw).score(), expected, "input {raw:?}");
    }

    let mut runner = TestRunner::new(Config::with_cases(512));
    runner
        .run(&("[^0-9]{0,24}", any::<String>()), |(prefix, base)| {
            let with_prefix = format!("{prefix}{base}");
            prop_assert_eq!(parse_score(&with_prefix).score(), parse_score(&base).score());
            Ok(())
        })
        .unwrap();
    println!("criterion 2 (parser decision table + prefix property): PASS");
}

fn run_binary(args: &[&str], cwd: &std::path::Path) -> std::process::Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_sentibias"))
        .args(args)
        .current_dir(cwd)
        .output()
        .unwrap()
}

#[test]
fn criterion_03_end_to_end_determinism_and_warm_cache() {
    let docs_lines = [
        r#"{"company_id":"0001","company_name":"Aozora Denki","announcement_at":"2023-05-10T14:00:00","fiscal_period":"FY2022","text":"Sales grew and profit hit a record."}"#,
        r#"{"company_id":"0002","company_name":"Kita Foods","announcement_at":"2023-05-11T10:00:00","fiscal_period":"FY2022","text":"Revenue fell and the loss widened."}"#,
        r#"{"company_id":"0003","company_name":"Minato Heavy","announcement_at":"2023-05-12T16:00:00","fiscal_period":"FY2022","text":"Operating results were flat."}"#,
    ];

    let run_once = |dir: &std::path::Path| -> (Vec<u8>, Vec<u8>, String) {
        std::fs::write(dir.join("docs.jsonl"), docs_lines.join("\n")).unwrap();
        let out = run_binary(
            &[
                "--cache", "cache", "elicit", "--docs", "docs.jsonl", "--out", "bias.jsonl",
            ],
            dir,
        );
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let report = run_binary(&["report", "bias.jsonl"], dir);
        assert!(report.status.success());
        (
            std::fs::read(dir.join("bias.jsonl")).unwrap(),
            report.stdout,
            String::from_utf8_lossy(&out.stderr).into_owned(),
        )
    };

    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let (bias_a, report_a, stderr_a) = run_once(dir_a.path());
    let (bias_b, report_b, _) = run_once(dir_b.path());
    assert_eq!(bias_a, bias_b, "cold-cache runs must be byte-identical");
    assert_eq!(report_a, report_b);
    assert!(stderr_a.contains("backend_calls=6"), "stderr: {stderr_a}");

    // Warm rerun against the populated cache: zero backend calls.
    let warm = run_binary(
        &[
            "--cache", "cache", "elicit", "--docs", "docs.jsonl", "--out", "bias2.jsonl",
        ],
        dir_a.path(),
    );
    assert!(warm.status.success());
    let warm_err = String::from_utf8_lossy(&warm.stderr);
    assert!(warm_err.contains("backend_calls=0"), "stderr: {warm_err}");
    assert_eq!(
        std::fs::read(dir_a.path().join("bias2.jsonl")).unwrap(),
        bias_a
    );
    println!("criterion 3 (end-to-end determinism + warm cache): PASS");
}

fn bias_record(company: &str, beta: i8) -> BiasRecord {
    BiasRecord::new(
        company,
        "FY2022",
        "mock-model",
        ScoreOutcome::Valid(3),
        ScoreOutcome::Valid((3 + beta) as u8),
    )
}

fn exposure_fixture(
    rng: &mut StdRng,
    n: usize,
) -> (Vec<BiasRecord>, Vec<PerformanceDoc>, ExposureStore, Vec<[f64; 20]>, Vec<i8>) {
    let mut records = Vec::new();
    let mut docs = Vec::new();
    let mut store = ExposureStore::new();
    let mut vectors = Vec::new();
    let mut betas = Vec::new();
    for i in 0..n {
        let company = format!("{i:04}");
        let beta = rng.gen_range(-4..=4i8);
        records.push(bias_record(&company, beta));
        docs.push(doc(&company, &format!("Company {i}"), "FY2022", "Sales rose."));
        let mut values = [0.0; 20];
        for v in values.iter_mut() {
            *v = rng.gen_range(-2.0..2.0);
        }
        store.insert(ExposureVector {
            company_id: company,
            as_of: NaiveDate::from_ymd_opt(2023, 4, 30).unwrap(),
            values,
        });
        vectors.push(values);
        betas.push(beta);
    }
    (records, docs, store, vectors, betas)
}

#[test]
fn criterion_04_exposure_algebra() {
    let mut rng = StdRng::seed_from_u64(4);
    for _ in 0..20 {
        let (records, docs, store, vectors, betas) = exposure_fixture(&mut rng, 60);
        let summary = exposure_summary(&records, &docs, &store).unwrap();

        // Independent group means, accumulated in the same record order.
        for (k, row) in summary.factors.iter().enumerate() {
            let mut sums = [0.0f64; 3];
            let mut ns = [0usize; 3];
            for (values, beta) in vectors.iter().zip(betas.iter()) {
                let g = match *beta {
                    1.. => 0,
                    0 => 1,
                    _ => 2,
                };
                sums[g] += values[k];
                ns[g] += 1;
            }
            let mean = |g: usize| (ns[g] > 0).then(|| sums[g] / ns[g] as f64);
            assert_eq!(row.positive, mean(0));
            assert_eq!(row.neutral, mean(1));
            assert_eq!(row.negative, mean(2));
            match (mean(0), mean(2)) {
                (Some(p), Some(n)) => assert_eq!(row.spread, Some(p - n)),
                _ => assert_eq!(row.spread, None),
            }
        }

        // Constant-shift invariance of every spread.
        let mut shifted = ExposureStore::new();
        for (i, values) in vectors.iter().enumerate() {
            let mut v = *values;
            for x in v.iter_mut() {
                *x += 7.25;
            }
            shifted.insert(ExposureVector {
                company_id: format!("{i:04}"),
                as_of: NaiveDate::from_ymd_opt(2023, 4, 30).unwrap(),
                values: v,
            });
        }
        let shifted_summary = exposure_summary(&records, &docs, &shifted).unwrap();
        for (a, b) in summary.factors.iter().zip(shifted_summary.factors.iter()) {
            match (a.spread, b.spread) {
                (Some(x), Some(y)) => assert!((x - y).abs() < 1e-9, "{}: {x} vs {y}", a.factor),
                (None, None) => {}
                other => panic!("spread presence changed under shift: {other:?}"),
            }
        }
    }

    // Golden row: group means -0.46 and -0.14 give a -0.32 spread.
    let momentum = FACTOR_NAMES.iter().position(|f| *f == "Momentum").unwrap();
    let mut store = ExposureStore::new();
    for (company, value) in [("0001", -0.46), ("0002", -0.14)] {
        let mut values = [0.0; 20];
        values[momentum] = value;
        store.insert(ExposureVector {
            company_id: company.into(),
            as_of: NaiveDate::from_ymd_opt(2023, 4, 30).unwrap(),
            values,
        });
    }
    let records = vec![bias_record("0001", 2), bias_record("0002", -1)];
    let docs = vec![
        doc("0001", "A", "FY2022", "Sales rose."),
        doc("0002", "B", "FY2022", "Sales fell."),
    ];
    let summary = exposure_summary(&records, &docs, &store).unwrap();
    let row = summary.factors.iter().find(|f| f.factor == "Momentum").unwrap();
    assert!((row.spread.unwrap() - (-0.32)).abs() < 1e-12);
    println!("criterion 4 (exposure algebra + golden spread): PASS");
}

/// Normal-equations solve of X'X b = X'y by Gaussian elimination with
/// partial pivoting; deliberately independent of the SVD path under test.
fn normal_equations(rows: &[[f64; 6]], ys: &[f64]) -> [f64; 6] {
    let mut xtx = [[0.0f64; 6]; 6];
    let mut xty = [0.0f64; 6];
    for (row, y) in rows.iter().zip(ys.iter()) {
        for i in 0..6 {
            xty[i] += row[i] * y;
            for j in 0..6 {
                xtx[i][j] += row[i] * row[j];
            }
        }
    }
    let mut a = [[0.0f64; 7]; 6];
    for i in 0..6 {
        a[i][..6].copy_from_slice(&xtx[i]);
        a[i][6] = xty[i];
    }
    for col in 0..6 {
        let pivot = (col..6).max_by(|&p, &q| a[p][col].abs().total_cmp(&a[q][col].abs())).unwrap();
        a.swap(col, pivot);
        for r in col + 1..6 {
            let factor = a[r][col] / a[col][col];
            for c in col..7 {
                a[r][c] -= factor * a[col][c];
            }
        }
    }
    let mut b = [0.0f64; 6];
    for i in (0..6).rev() {
        let mut acc = a[i][6];
        for j in i + 1..6 {
            acc -= a[i][j] * b[j];
        }
        b[i] = acc / a[i][i];
    }
    b
}

fn make_calendar(n: usize) -> TradingCalendar {
    let start = NaiveDate::from_ymd_opt(2022, 1, 3).unwrap();
    TradingCalendar::new((0..n as i64).map(|i| start + chrono::Duration::days(i)).collect())
        .unwrap()
}

#[test]
fn criterion_05_ols_oracle() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(5);
    let calendar = make_calendar(260);
    for instance in 0..200 {
        let mut factors = FactorStore::default();
        let mut returns = ReturnStore::default();
        let coefs: [f64; 6] = std::array::from_fn(|_| rng.gen_range(-1.5..1.5));
        let noise_sd = if instance % 4 == 0 { 0.0 } else { 0.005 };
        let mut truth_rows: Vec<[f64; 6]> = Vec::new();
        let mut truth_ys: Vec<f64> = Vec::new();
        let day0_idx = rng.gen_range(135..180usize);
        for i in 0..calendar.len() {
            let date = calendar.day(i).unwrap();
            let f = FactorRecord {
                date,
                mkt_rf: rng.gen_range(-0.02..0.02),
                smb: rng.gen_range(-0.01..0.01),
                hml: rng.gen_range(-0.01..0.01),
                rmw: rng.gen_range(-0.01..0.01),
                cma: rng.gen_range(-0.01..0.01),
                rf: 0.0001,
            };
            factors.insert(f);
            // Randomly drop some return days to vary n below 120.
            if rng.gen_bool(0.08) {
                continue;
            }
            let row = [1.0, f.mkt_rf, f.smb, f.hml, f.rmw, f.cma];
            let excess: f64 = row.iter().zip(coefs.iter()).map(|(x, c)| x * c).sum::<f64>()
                + noise_sd * rng.gen_range(-1.0..1.0);
            returns.insert(ReturnRecord {
                company_id: "0001".into(),
                date,
                ret: excess + f.rf,
            });
            let rel = i as i64 - day0_idx as i64;
            if (-130..=-11).contains(&rel) {
                truth_rows.push(row);
                truth_ys.push(excess);
            }
        }
        let day0 = calendar.day(day0_idx).unwrap();
        let fit = fit_ff5("e", "0001", &returns, &factors, &calendar, day0, 60).unwrap();
        assert!(fit.n_obs <= 120);
        assert_eq!(fit.n_obs, truth_rows.len());
        let oracle = normal_equations(&truth_rows, &truth_ys);
        assert!((fit.alpha - oracle[0]).abs() < 1e-8, "instance {instance}");
        for (got, want) in fit.betas.iter().zip(oracle[1..].iter()) {
            assert!((got - want).abs() < 1e-8, "instance {instance}");
        }
        if noise_sd == 0.0 {
            // Zero-noise planted recovery.
            for (got, want) in [fit.alpha].iter().chain(fit.betas.iter()).zip(coefs.iter()) {
                assert!((got - want).abs() < 1e-8, "instance {instance}");
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    println!("criterion 5 (OLS vs normal-equations oracle): PASS ({elapsed:?})");
}

fn random_series(rng: &mut StdRng, event_id: &str, scale: f64) -> ARSeries {
    ARSeries {
        event_id: event_id.into(),
        ar: (0..EVENT_WINDOW_DAYS)
            .map(|_| Some(rng.gen_range(-scale..scale)))
            .collect(),
    }
}

#[test]
fn criterion_06_event_study_conservation() {
    let mut rng = StdRng::seed_from_u64(6);
    for _ in 0..20 {
        let mut events = Vec::new();
        let mut raw: [Vec<Vec<f64>>; 3] = [Vec::new(), Vec::new(), Vec::new()];
        for g in 0..3 {
            let group = [BiasGroup::Positive, BiasGroup::Neutral, BiasGroup::Negative][g];
            for e in 0..rng.gen_range(2..8usize) {
                let series = random_series(&mut rng, &format!("{g}-{e}"), 0.02);
                raw[g].push(series.ar.iter().map(|v| v.unwrap()).collect());
                events.push((series, group));
            }
        }
        let results = group_car("m", &events, &[1, 10, 30, 60]);
        let find = |label: &str| results.iter().find(|r| r.group.label() == label).unwrap();

        for (g, label) in ["positive", "neutral", "negative"].iter().enumerate() {
            let result = find(label);
            // Telescoping: successive CAR differences recover the mean AR.
            for t in 0..EVENT_WINDOW_DAYS {
                let mean_ar: f64 =
                    raw[g].iter().map(|ar| ar[t]).sum::<f64>() / raw[g].len() as f64;
                let diff = if t == 0 {
                    result.car_path[0]
                } else {
                    result.car_path[t] - result.car_path[t - 1]
                };
                assert!((diff - mean_ar).abs() < 1e-12);
            }
        }

        // Spread path = positive path - negative path, pointwise.
        let spread = results
            .iter()
            .find(|r| r.group == GroupLabel::Spread)
            .unwrap();
        let (pos, neg) = (find("positive"), find("negative"));
        for t in 0..EVENT_WINDOW_DAYS {
            assert!((spread.car_path[t] - (pos.car_path[t] - neg.car_path[t])).abs() < 1e-12);
        }
    }

    // Zero-AR fixture: everything is exactly zero, nothing is starred.
    let zero = ARSeries {
        event_id: "z".into(),
        ar: vec![Some(0.0); EVENT_WINDOW_DAYS],
    };
    let events = vec![
        (zero.clone(), BiasGroup::Positive),
        (zero.clone(), BiasGroup::Positive),
        (zero.clone(), BiasGroup::Negative),
        (zero, BiasGroup::Negative),
    ];
    for result in group_car("m", &events, &[1, 10, 30, 60]) {
        assert!(result.car_path.iter().all(|c| *c == 0.0));
        for snap in &result.snapshots {
            assert_eq!(snap.car, 0.0);
            assert_eq!(snap.star, "");
        }
    }
    println!("criterion 6 (CAR telescoping + spread identity): PASS");
}

#[test]
fn criterion_07_t_test_calibration() {
    let start = Instant::now();
    let mut rng = StdRng::seed_from_u64(7);
    let normal = rand_distr::Normal::new(0.0, 1.0).unwrap();
    let mut rejections = 0usize;
    for _ in 0..1000 {
        let xs: Vec<f64> = (0..1000).map(|_| rng.sample(normal)).collect();
        let (_, p) = one_sample_t(&xs).unwrap();
        if p < 0.05 {
            rejections += 1;
        }
    }
    let rate = rejections as f64 / 1000.0;
    assert!(
        (0.03..=0.07).contains(&rate),
        "rejection rate {rate} outside 5% +/- 2%"
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("criterion 7 (t-test 5% calibration, rate {rate:.3}): PASS ({elapsed:?})");
}

#[test]
fn criterion_08_theorem_deterministic_grid() {
    let start = Instant::now();
    let state = MarketState {
        beta_t: 0.04,
        sigma2_beta_t: 0.01,
    };
    for mu in [0.0, 0.3, 0.7] {
        for gamma in [0.5, 1.0, 2.0] {
            for theta in [0.2, 0.5, 0.8] {
                for r in [0.01, 0.05, 0.1] {
                    let params = MarketParams {
                        mu,
                        gamma,
                        r,
                        theta,
                        sigma2_eta: 0.0,
                        beta_hat: 0.02,
                    };
                    let report = one_step_consistency(&params, &state, 0, 0).unwrap();
                    assert_eq!(report.standard_error, 0.0);
                    assert!(
                        report.residual < 1e-10,
                        "mu={mu} gamma={gamma} theta={theta} r={r}: {}",
                        report.residual
                    );
                    let constants = derived_constants(&params).unwrap();
                    let (fa, fb) = fixed_point_residuals(&params, &constants);
                    assert!(fa.abs() < 1e-12 && fb.abs() < 1e-12);
                }
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 8 (deterministic theorem grid, 81 points): PASS ({elapsed:?})");
}

#[test]
fn criterion_09_theorem_stochastic_with_negative_control() {
    let start = Instant::now();
    let params = MarketParams {
        mu: 0.5,
        gamma: 1.0,
        r: 0.05,
        theta: 0.5,
        sigma2_eta: 1e-4,
        beta_hat: 0.02,
    };
    let state = MarketState {
        beta_t: 0.04,
        sigma2_beta_t: 0.01,
    };
    let report = one_step_consistency(&params, &state, 1_000_000, 9).unwrap();
    assert!(report.standard_error > 0.0);
    assert!(
        report.residual <= 3.0 * report.standard_error,
        "residual {} vs 3 SE {}",
        report.residual,
        3.0 * report.standard_error
    );

    let constants = derived_constants(&params).unwrap();
    let perturbed = DerivedConstants {
        a: constants.a * 1.1,
        ..constants
    };
    let bad = one_step_consistency_with(&params, &state, 1_000_000, 9, &perturbed).unwrap();
    assert!(
        bad.residual > 3.0 * bad.standard_error,
        "negative control unexpectedly passed: residual {} SE {}",
        bad.residual,
        bad.standard_error
    );
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!("criterion 9 (stochastic consistency + negative control): PASS ({elapsed:?})");
}

#[test]
fn criterion_10_sensitivity_checks() {
    let params = MarketParams {
        mu: 0.5,
        gamma: 1.0,
        r: 0.05,
        theta: 0.8,
        sigma2_eta: 1e-4,
        beta_hat: 0.02,
    };
    // Finite-difference price sensitivity to the bias state.
    let h = 1e-4;
    let at = |beta_t: f64| {
        closed_form_price(
            &params,
            &MarketState {
                beta_t,
                sigma2_beta_t: 0.01,
            },
        )
        .unwrap()
    };
    let fd = (at(0.02 + h) - at(0.02 - h)) / (2.0 * h);
    let analytic = params.mu / (1.0 + params.r);
    assert!((fd - analytic).abs() < 1e-8, "fd {fd} vs {analytic}");

    // Lag-1 autocorrelation of the literal (unclamped) variance process.
    let state0 = MarketState {
        beta_t: 0.02,
        sigma2_beta_t: 0.05,
    };
    let ensemble = simulate_paths(
        &params,
        &state0,
        100_000,
        1,
        10,
        &SimulateOptions {
            clamp_negative_variance: false,
        },
    )
    .unwrap();
    let sigma2: Vec<f64> = ensemble
        .points
        .iter()
        .skip(1)
        .map(|p| p.sigma2_beta_t)
        .collect();
    let rho = lag1_autocorrelation(&sigma2);
    assert!(
        (rho - params.theta).abs() < 0.02,
        "lag-1 autocorrelation {rho} vs theta {}",
        params.theta
    );
    println!("criterion 10 (price sensitivity + variance autocorrelation): PASS");
}
