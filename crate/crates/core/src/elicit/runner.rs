use crate::corpus::{cache_key, PerformanceDoc, ResponseCache};

use super::backend::Backend;
use super::parse::parse_score_with;
use super::template::{build_prompts, text_mentions_company, TemplateSet};
use super::types::{BiasRecord, GenerationParams, ScoreOutcome};
use super::ElicitError;

#[derive(Debug, Clone)]
pub struct ElicitOptions {
    pub scan_past_invalid: bool,
    pub fail_fast: bool,
}

impl Default for ElicitOptions {
    fn default() -> Self {
        Self {
            scan_past_invalid: false,
            fail_fast: false,
        }
    }
}

/// Batch accounting for one elicitation run.
#[derive(Debug, Default, Clone)]
pub struct RunSummary {
    pub docs: usize,
    pub valid_pairs: usize,
    pub excluded: usize,
    pub backend_calls: u64,
    pub cache_hits: u64,
    /// company_ids whose text contains the company name verbatim.
    pub name_in_text: Vec<String>,
    pub errors: Vec<String>,
}

fn fetch(
    backend: &dyn Backend,
    cache: &ResponseCache,
    prompt: &str,
    params: &GenerationParams,
    summary: &mut RunSummary,
) -> Result<String, ElicitError> {
    let key = cache_key(&[
        backend.id(),
        &params.model_id,
        &params.max_tokens.to_string(),
        &format!("{:?}", params.temperature),
        prompt,
    ]);
    if let Some(cached) = cache.get(&key)? {
        summary.cache_hits += 1;
        return Ok(cached);
    }
    let raw = backend.complete(prompt, params)?;
    summary.backend_calls += 1;
    cache.put(&key, &raw)?;
    Ok(raw)
}

/// Issue the two independent requests for one document, cache-first, and
/// parse the outcomes. Raw outputs are persisted before parsing.
pub fn elicit_pair(
    backend: &dyn Backend,
    cache: &ResponseCache,
    doc: &PerformanceDoc,
    params: &GenerationParams,
    templates: &TemplateSet,
    options: &ElicitOptions,
    summary: &mut RunSummary,
) -> Result<(ScoreOutcome, ScoreOutcome), ElicitError> {
    let pair = build_prompts(doc, templates)?;
    let raw_u = fetch(backend, cache, &pair.unnamed, params, summary)?;
    let raw_b = fetch(backend, cache, &pair.named, params, summary)?;
    Ok((
        parse_score_with(&raw_u, options.scan_past_invalid),
        parse_score_with(&raw_b, options.scan_past_invalid),
    ))
}

/// Elicit scores for every document and return one `BiasRecord` each,
/// sorted by `(company_id, fiscal_period)`.
pub fn run_elicitation(
    backend: &dyn Backend,
    cache: &ResponseCache,
    docs: &[PerformanceDoc],
    params: &GenerationParams,
    templates: &TemplateSet,
    options: &ElicitOptions,
) -> Result<(Vec<BiasRecord>, RunSummary), ElicitError> {
    let mut summary = RunSummary {
        docs: docs.len(),
        ..Default::default()
    };
    let mut records = Vec::with_capacity(docs.len());
    for doc in docs {
        if text_mentions_company(doc) {
            log::warn!(
                "{}: performance text contains the company name; unnamed prompt is not name-free",
                doc.company_id
            );
            summary.name_in_text.push(doc.company_id.clone());
        }
        match elicit_pair(backend, cache, doc, params, templates, options, &mut summary) {
            Ok((s_u, s_b)) => {
                let record = BiasRecord::new(
                    doc.company_id.clone(),
                    doc.fiscal_period.clone(),
                    params.model_id.clone(),
                    s_u,
                    s_b,
                );
                if record.beta.is_some() {
                    summary.valid_pairs += 1;
                } else {
                    summary.excluded += 1;
                }
                records.push(record);
            }
            Err(e) if options.fail_fast => return Err(e),
            Err(e) => summary.errors.push(format!("{}: {e}", doc.company_id)),
        }
    }
    records.sort_by(|a, b| {
        (&a.company_id, &a.fiscal_period).cmp(&(&b.company_id, &b.fiscal_period))
    });
    if !summary.errors.is_empty() {
        log::warn!(
            "elicitation finished with {} per-document errors",
            summary.errors.len()
        );
    }
    Ok((records, summary))
}
