use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::types::GenerationParams;
use super::ElicitError;

/// A chat-completion backend. Implementations must be deterministic given
/// the prompt and params whenever the underlying model is.
pub trait Backend: Send + Sync {
    fn id(&self) -> &str;
    fn complete(&self, prompt: &str, params: &GenerationParams) -> Result<String, ElicitError>;
    /// Requests actually issued (excludes cache hits, counted by the runner).
    fn calls(&self) -> u64;
}

/// Per-backend connection settings from the config file. API keys are only
/// ever referenced by environment-variable name.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BackendConfig {
    pub endpoint: String,
    pub api_key_env: String,
    #[serde(default = "default_rate_limit")]
    pub rate_limit_per_sec: f64,
    #[serde(default = "default_retries")]
    pub retries: u32,
}

fn default_rate_limit() -> f64 {
    2.0
}

fn default_retries() -> u32 {
    3
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: Vec<ChatMessage<'a>>,
    max_tokens: u32,
    temperature: f64,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatChoiceMessage,
}

#[derive(Deserialize)]
struct ChatChoiceMessage {
    content: String,
}

/// HTTPS chat-completion client with bounded exponential backoff and a
/// minimum-interval rate limit.
pub struct HttpBackend {
    id: String,
    config: BackendConfig,
    client: reqwest::blocking::Client,
    calls: AtomicU64,
    last_request: Mutex<Option<Instant>>,
}

impl HttpBackend {
    pub fn new(id: impl Into<String>, config: BackendConfig) -> Self {
        Self {
            id: id.into(),
            config,
            client: reqwest::blocking::Client::new(),
            calls: AtomicU64::new(0),
            last_request: Mutex::new(None),
        }
    }

    fn api_key(&self) -> Result<String, ElicitError> {
        std::env::var(&self.config.api_key_env).map_err(|_| ElicitError::MissingApiKey {
            backend: self.id.clone(),
            var: self.config.api_key_env.clone(),
        })
    }

    fn throttle(&self) {
        if self.config.rate_limit_per_sec <= 0.0 {
            return;
        }
        let min_interval = Duration::from_secs_f64(1.0 / self.config.rate_limit_per_sec);
        let mut last = self.last_request.lock().unwrap();
        if let Some(prev) = *last {
            let elapsed = prev.elapsed();
            if elapsed < min_interval {
                std::thread::sleep(min_interval - elapsed);
            }
        }
        *last = Some(Instant::now());
    }

    fn request_once(
        &self,
        prompt: &str,
        params: &GenerationParams,
        key: &str,
    ) -> Result<String, ElicitError> {
        self.throttle();
        self.calls.fetch_add(1, Ordering::SeqCst);
        let body = ChatRequest {
            model: &params.model_id,
            messages: vec![ChatMessage {
                role: "user",
                content: prompt,
            }],
            max_tokens: params.max_tokens,
            temperature: params.temperature,
        };
        let transport = |message: String| ElicitError::Transport {
            backend: self.id.clone(),
            key: key.to_string(),
            message,
        };
        let response = self
            .client
            .post(&self.config.endpoint)
            .bearer_auth(self.api_key()?)
            .json(&body)
            .send()
            .map_err(|e| transport(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(transport(format!("http status {status}")));
        }
        let parsed: ChatResponse = response.json().map_err(|e| transport(e.to_string()))?;
        parsed
            .choices
            .first()
            .map(|c| c.message.content.clone())
            .ok_or_else(|| transport("response had no choices".into()))
    }
}

impl Backend for HttpBackend {
    fn id(&self) -> &str {
        &self.id
    }

    fn complete(&self, prompt: &str, params: &GenerationParams) -> Result<String, ElicitError> {
        let key = crate::corpus::cache_key(&[&self.id, &params.model_id, prompt]);
        let mut delay = Duration::from_millis(500);
        let mut last_err = None;
        for _ in 0..self.config.retries.max(1) {
            match self.request_once(prompt, params, &key) {
                Ok(content) => return Ok(content),
                Err(e @ ElicitError::MissingApiKey { .. }) => return Err(e),
                Err(e) => {
                    log::warn!("{}: retrying after error: {e}", self.id);
                    last_err = Some(e);
                    std::thread::sleep(delay);
                    delay *= 2;
                }
            }
        }
        Err(last_err.expect("at least one attempt"))
    }

    fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

const NAMED_MARKER: &str = "financial performance of ";
const TEXT_MARKER: &str = "Please output only the sentiment score.\n";

const POSITIVE_WORDS: [&str; 10] = [
    "increase",
    "increased",
    "rose",
    "grew",
    "growth",
    "profit",
    "record",
    "improved",
    "strong",
    "gain",
];

const NEGATIVE_WORDS: [&str; 10] = [
    "decrease",
    "decreased",
    "fell",
    "declined",
    "decline",
    "loss",
    "dropped",
    "weak",
    "impairment",
    "deteriorated",
];

/// Deterministic local scorer implementing the backend wire interface.
///
/// Unnamed prompts score `clamp(3 + positives - negatives, 1, 5)` over the
/// performance text; named prompts add a per-company offset in {-1, 0, +1}
/// hashed from the company name, giving known nonzero ground-truth biases.
#[derive(Debug, Default)]
pub struct MockBackend {
    calls: AtomicU64,
}

impl MockBackend {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn score_text(text: &str) -> i32 {
        let mut score = 3i32;
        for word in text
            .split(|c: char| !c.is_alphanumeric())
            .filter(|w| !w.is_empty())
        {
            let lower = word.to_lowercase();
            if POSITIVE_WORDS.contains(&lower.as_str()) {
                score += 1;
            } else if NEGATIVE_WORDS.contains(&lower.as_str()) {
                score -= 1;
            }
        }
        score.clamp(1, 5)
    }

    pub fn company_offset(name: &str) -> i32 {
        let digest = Sha256::digest(name.as_bytes());
        (digest[0] % 3) as i32 - 1
    }

    fn extract_company(prompt: &str) -> Option<&str> {
        let start = prompt.find(NAMED_MARKER)? + NAMED_MARKER.len();
        let rest = &prompt[start..];
        let end = rest.find(".\n").unwrap_or(rest.len());
        Some(&rest[..end])
    }

    fn extract_text(prompt: &str) -> &str {
        match prompt.find(TEXT_MARKER) {
            Some(idx) => &prompt[idx + TEXT_MARKER.len()..],
            None => prompt,
        }
    }
}

impl Backend for MockBackend {
    fn id(&self) -> &str {
        "mock"
    }

    fn complete(&self, prompt: &str, _params: &GenerationParams) -> Result<String, ElicitError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        let base = Self::score_text(Self::extract_text(prompt));
        let score = match Self::extract_company(prompt) {
            Some(name) => (base + Self::company_offset(name)).clamp(1, 5),
            None => base,
        };
        Ok(score.to_string())
    }

    fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}

/// Test backend that replies with a fixed string.
#[derive(Debug)]
pub struct FixedBackend {
    reply: String,
    calls: AtomicU64,
}

impl FixedBackend {
    pub fn new(reply: impl Into<String>) -> Self {
        Self {
            reply: reply.into(),
            calls: AtomicU64::new(0),
        }
    }
}

impl Backend for FixedBackend {
    fn id(&self) -> &str {
        "fixed"
    }

    fn complete(&self, _prompt: &str, _params: &GenerationParams) -> Result<String, ElicitError> {
        self.calls.fetch_add(1, Ordering::SeqCst);
        Ok(self.reply.clone())
    }

    fn calls(&self) -> u64 {
        self.calls.load(Ordering::SeqCst)
    }
}
