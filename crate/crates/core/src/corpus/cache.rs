use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use super::CorpusError;

/// Deterministic cache key over an ordered list of request components.
///
/// Each part is length-prefixed before hashing so distinct part lists can
/// never collide by concatenation. The digest is stable across platforms.
pub fn cache_key(parts: &[&str]) -> String {
    let mut hasher = Sha256::new();
    for part in parts {
        hasher.update((part.len() as u64).to_be_bytes());
        hasher.update(part.as_bytes());
    }
    hex::encode(hasher.finalize())
}

/// File-per-key store of raw model responses.
///
/// Entries are immutable once written: a second put with a different payload
/// for the same key is an error. Writes go through a temp file and are
/// published with a link-or-fail step, so concurrent readers never observe a
/// torn entry.
#[derive(Debug, Clone)]
pub struct ResponseCache {
    root: PathBuf,
}

#[derive(serde::Serialize, serde::Deserialize)]
struct EntryHeader {
    key: String,
    created_at: String,
}

impl ResponseCache {
    pub fn open(root: impl Into<PathBuf>) -> Result<Self, CorpusError> {
        let root = root.into();
        fs::create_dir_all(&root).map_err(|e| io_err(&root, e))?;
        Ok(Self { root })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    fn entry_path(&self, key: &str) -> PathBuf {
        self.root.join(key)
    }

    pub fn get(&self, key: &str) -> Result<Option<String>, CorpusError> {
        let path = self.entry_path(key);
        match fs::read_to_string(&path) {
            Ok(content) => match content.split_once('\n') {
                Some((_header, payload)) => Ok(Some(payload.to_string())),
                None => Err(CorpusError::Malformed {
                    path: path.display().to_string(),
                    line: 1,
                    message: "cache entry missing metadata header".into(),
                }),
            },
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(None),
            Err(e) => Err(io_err(&path, e)),
        }
    }

    pub fn put(&self, key: &str, raw_output: &str) -> Result<(), CorpusError> {
        let path = self.entry_path(key);
        let header = serde_json::to_string(&EntryHeader {
            key: key.to_string(),
            created_at: chrono::Utc::now().to_rfc3339(),
        })
        .expect("header serializes");
        let mut tmp = tempfile::NamedTempFile::new_in(&self.root).map_err(|e| io_err(&self.root, e))?;
        tmp.write_all(header.as_bytes())
            .and_then(|_| tmp.write_all(b"\n"))
            .and_then(|_| tmp.write_all(raw_output.as_bytes()))
            .map_err(|e| io_err(&path, e))?;
        match tmp.persist_noclobber(&path) {
            Ok(_) => Ok(()),
            Err(e) if e.error.kind() == std::io::ErrorKind::AlreadyExists => {
                match self.get(key)? {
                    Some(existing) if existing == raw_output => Ok(()),
                    _ => Err(CorpusError::CacheConflict {
                        key: key.to_string(),
                    }),
                }
            }
            Err(e) => Err(io_err(&path, e.error)),
        }
    }
}

fn io_err(path: &Path, source: std::io::Error) -> CorpusError {
    CorpusError::Io {
        path: path.display().to_string(),
        source,
    }
}
