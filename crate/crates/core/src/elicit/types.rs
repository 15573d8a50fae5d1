use serde::{Deserialize, Serialize};

/// The two prompts built from one performance text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromptPair {
    /// Prompt without the company name.
    pub unnamed: String,
    /// Prompt with the company name spliced into the description line.
    pub named: String,
}

/// Generation settings passed through to the backend.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationParams {
    pub model_id: String,
    /// Output budget in the backend's native token unit.
    pub max_tokens: u32,
    pub temperature: f64,
}

impl GenerationParams {
    pub fn new(model_id: impl Into<String>) -> Self {
        Self {
            model_id: model_id.into(),
            max_tokens: 10,
            temperature: 0.0,
        }
    }
}

/// Outcome of parsing one raw model reply.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScoreOutcome {
    /// A score in 1..=5.
    Valid(u8),
    /// No usable score; the raw reply is kept for diagnostics.
    NoResponse(String),
}

impl ScoreOutcome {
    pub fn score(&self) -> Option<u8> {
        match self {
            ScoreOutcome::Valid(s) => Some(*s),
            ScoreOutcome::NoResponse(_) => None,
        }
    }
}

/// `beta = s_b - s_u`, defined only when both scores are valid.
pub fn compute_bias(s_u: &ScoreOutcome, s_b: &ScoreOutcome) -> Option<i8> {
    match (s_u, s_b) {
        (ScoreOutcome::Valid(u), ScoreOutcome::Valid(b)) => Some(*b as i8 - *u as i8),
        _ => None,
    }
}

/// Paired scores and bias for one document under one model.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasRecord {
    pub company_id: String,
    pub fiscal_period: String,
    pub model_id: String,
    pub s_u: ScoreOutcome,
    pub s_b: ScoreOutcome,
    pub beta: Option<i8>,
}

impl BiasRecord {
    /// Construct with `beta` derived from the scores, never supplied.
    pub fn new(
        company_id: impl Into<String>,
        fiscal_period: impl Into<String>,
        model_id: impl Into<String>,
        s_u: ScoreOutcome,
        s_b: ScoreOutcome,
    ) -> Self {
        let beta = compute_bias(&s_u, &s_b);
        Self {
            company_id: company_id.into(),
            fiscal_period: fiscal_period.into(),
            model_id: model_id.into(),
            s_u,
            s_b,
            beta,
        }
    }
}

/// Wire form for `bias.jsonl`: scores flattened to numbers, beta null when
/// either score was a no-response.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BiasRecordLine {
    pub company_id: String,
    pub fiscal_period: String,
    pub model_id: String,
    pub s_u: Option<u8>,
    pub s_b: Option<u8>,
    pub beta: Option<i8>,
}

impl From<&BiasRecord> for BiasRecordLine {
    fn from(rec: &BiasRecord) -> Self {
        Self {
            company_id: rec.company_id.clone(),
            fiscal_period: rec.fiscal_period.clone(),
            model_id: rec.model_id.clone(),
            s_u: rec.s_u.score(),
            s_b: rec.s_b.score(),
            beta: rec.beta,
        }
    }
}

impl From<BiasRecordLine> for BiasRecord {
    fn from(line: BiasRecordLine) -> Self {
        let outcome = |s: Option<u8>| match s {
            Some(v) => ScoreOutcome::Valid(v),
            None => ScoreOutcome::NoResponse(String::new()),
        };
        // beta is recomputed, not trusted from the file.
        BiasRecord::new(
            line.company_id,
            line.fiscal_period,
            line.model_id,
            outcome(line.s_u),
            outcome(line.s_b),
        )
    }
}
