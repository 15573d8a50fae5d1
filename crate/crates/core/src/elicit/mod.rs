//! Paired-prompt sentiment elicitation.
//!
//! Builds the named/unnamed prompt pair for each performance text, queries a
//! pluggable chat-completion backend (cache-first), parses the 1–5 score out
//! of the raw reply, and records the company-specific bias
//! `beta = s_b - s_u` for every document where both scores are valid.

mod backend;
mod parse;
mod runner;
mod template;
mod types;

pub use backend::{Backend, BackendConfig, FixedBackend, HttpBackend, MockBackend};
pub use parse::{parse_score, parse_score_with};
pub use runner::{elicit_pair, run_elicitation, ElicitOptions, RunSummary};
pub use template::{build_prompts, TemplateSet, NAME_PLACEHOLDER, TEXT_PLACEHOLDER};
pub use types::{compute_bias, BiasRecord, BiasRecordLine, GenerationParams, PromptPair, ScoreOutcome};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ElicitError {
    #[error("template missing placeholder {placeholder}")]
    MissingPlaceholder { placeholder: &'static str },
    #[error("company_name is empty for {company_id}")]
    EmptyCompanyName { company_id: String },
    #[error("backend {backend}: {message} (prompt key {key})")]
    Transport {
        backend: String,
        key: String,
        message: String,
    },
    #[error("backend {backend}: API key environment variable {var} is not set")]
    MissingApiKey { backend: String, var: String },
    #[error(transparent)]
    Cache(#[from] crate::corpus::CorpusError),
    #[error("elicitation failed for {failed} of {total} documents: first error: {first}")]
    Batch {
        failed: usize,
        total: usize,
        first: String,
    },
}
