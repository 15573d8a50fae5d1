use serde::{Deserialize, Serialize};

use crate::corpus::PerformanceDoc;

use super::types::PromptPair;
use super::ElicitError;

pub const TEXT_PLACEHOLDER: &str = "{text}";
pub const NAME_PLACEHOLDER: &str = "{company_name}";

const DEFAULT_UNNAMED: &str = "You are a financial analyst.\n\
Below is a sentence describing financial performance.\n\
Please rate the sentiment of this sentence on a scale from 1 (bad) to 5 (good).\n\
Please output only the sentiment score.\n\
{text}";

const DEFAULT_NAMED: &str = "You are a financial analyst.\n\
Below is a sentence describing the financial performance of {company_name}.\n\
Please rate the sentiment of this sentence on a scale from 1 (bad) to 5 (good).\n\
Please output only the sentiment score.\n\
{text}";

/// A named/unnamed template pair. The defaults are the English analyst
/// prompts; translated sets can be loaded from a JSON file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TemplateSet {
    pub unnamed: String,
    pub named: String,
}

impl Default for TemplateSet {
    fn default() -> Self {
        Self {
            unnamed: DEFAULT_UNNAMED.to_string(),
            named: DEFAULT_NAMED.to_string(),
        }
    }
}

impl TemplateSet {
    pub fn load(path: &std::path::Path) -> anyhow::Result<Self> {
        let content = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&content)?)
    }

    fn validate(&self) -> Result<(), ElicitError> {
        for (template, placeholder) in [
            (&self.unnamed, TEXT_PLACEHOLDER),
            (&self.named, TEXT_PLACEHOLDER),
            (&self.named, NAME_PLACEHOLDER),
        ] {
            if !template.contains(placeholder) {
                return Err(ElicitError::MissingPlaceholder {
                    placeholder: if placeholder == TEXT_PLACEHOLDER {
                        TEXT_PLACEHOLDER
                    } else {
                        NAME_PLACEHOLDER
                    },
                });
            }
        }
        Ok(())
    }
}

/// Substitute the document into the template pair, verbatim.
pub fn build_prompts(
    doc: &PerformanceDoc,
    templates: &TemplateSet,
) -> Result<PromptPair, ElicitError> {
    templates.validate()?;
    if doc.company_name.is_empty() {
        return Err(ElicitError::EmptyCompanyName {
            company_id: doc.company_id.clone(),
        });
    }
    let unnamed = templates.unnamed.replace(TEXT_PLACEHOLDER, &doc.text);
    let named = templates
        .named
        .replace(NAME_PLACEHOLDER, &doc.company_name)
        .replace(TEXT_PLACEHOLDER, &doc.text);
    Ok(PromptPair { unnamed, named })
}

/// True when the performance text itself mentions the company name, in which
/// case the unnamed prompt is not actually name-free. Such documents are
/// flagged with a warning rather than redacted.
pub fn text_mentions_company(doc: &PerformanceDoc) -> bool {
    !doc.company_name.is_empty() && doc.text.contains(&doc.company_name)
}
