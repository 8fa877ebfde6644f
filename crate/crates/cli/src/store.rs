//! One JSON file per document under a data directory. Writes go through a
//! temporary file and an atomic rename, so a crash leaves either the old or
//! the new revision on disk.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use deontix_core::annotation::{AnnotationError, Document};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct StoreRecord {
    pub document: Document,
    pub created_at: DateTime<Utc>,
    pub updated_at: DateTime<Utc>,
    pub revision: u64,
}

#[derive(Debug, Error)]
pub enum StoreError {
    #[error("document `{0}` does not exist")]
    NotFound(String),
    #[error("document `{0}` already exists")]
    Exists(String),
    #[error("document `{id}` is at revision {current}, not {expected}")]
    Stale {
        id: String,
        expected: u64,
        current: u64,
    },
    #[error("`{0}` is not a valid document id (use letters, digits, `-` and `_`)")]
    BadId(String),
    #[error(transparent)]
    Invalid(#[from] AnnotationError),
    #[error("stored file {path} is unreadable: {message}")]
    Corrupt { path: PathBuf, message: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id.len() <= 128
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

pub struct Store {
    dir: PathBuf,
    // Serializes writers; readers see whole files thanks to rename.
    writes: Mutex<()>,
}

impl Store {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        fs::create_dir_all(&dir)?;
        Ok(Store {
            dir,
            writes: Mutex::new(()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path(&self, id: &str) -> Result<PathBuf, StoreError> {
        if !valid_id(id) {
            return Err(StoreError::BadId(id.to_owned()));
        }
        Ok(self.dir.join(format!("{id}.json")))
    }

    fn read(&self, path: &Path) -> Result<StoreRecord, StoreError> {
        let text = fs::read_to_string(path)?;
        serde_json::from_str(&text).map_err(|e| StoreError::Corrupt {
            path: path.to_owned(),
            message: e.to_string(),
        })
    }

    fn write(&self, path: &Path, record: &StoreRecord) -> Result<(), StoreError> {
        let mut tmp = tempfile::NamedTempFile::new_in(&self.dir)?;
        serde_json::to_writer_pretty(&mut tmp, record).map_err(io::Error::from)?;
        tmp.write_all(b"\n")?;
        tmp.as_file().sync_all()?;
        tmp.persist(path).map_err(|e| e.error)?;
        Ok(())
    }

    fn lock(&self) -> std::sync::MutexGuard<'_, ()> {
        self.writes.lock().unwrap_or_else(|p| p.into_inner())
    }

    pub fn get(&self, id: &str) -> Result<StoreRecord, StoreError> {
        let path = self.path(id)?;
        match self.read(&path) {
            Err(StoreError::Io(e)) if e.kind() == io::ErrorKind::NotFound => {
                Err(StoreError::NotFound(id.to_owned()))
            }
            other => other,
        }
    }

    /// All records, ordered by document id.
    pub fn list(&self) -> Result<Vec<StoreRecord>, StoreError> {
        let mut out = Vec::new();
        for entry in fs::read_dir(&self.dir)? {
            let path = entry?.path();
            let is_doc = path.extension().is_some_and(|e| e == "json")
                && path
                    .file_stem()
                    .and_then(|s| s.to_str())
                    .is_some_and(valid_id);
            if is_doc {
                out.push(self.read(&path)?);
            }
        }
        out.sort_by(|a, b| a.document.id.cmp(&b.document.id));
        Ok(out)
    }

    pub fn create(&self, mut document: Document) -> Result<StoreRecord, StoreError> {
        document.normalize()?;
        let path = self.path(&document.id)?;
        let _guard = self.lock();
        if path.exists() {
            return Err(StoreError::Exists(document.id));
        }
        let now = Utc::now();
        let record = StoreRecord {
            document,
            created_at: now,
            updated_at: now,
            revision: 1,
        };
        self.write(&path, &record)?;
        Ok(record)
    }

    /// Replaces the document if `revision` is the current one.
    pub fn update(&self, id: &str, revision: u64, mut document: Document) -> Result<StoreRecord, StoreError> {
        document.normalize()?;
        let path = self.path(id)?;
        let _guard = self.lock();
        let current = self.get(id)?;
        if current.revision != revision {
            return Err(StoreError::Stale {
                id: id.to_owned(),
                expected: revision,
                current: current.revision,
            });
        }
        let record = StoreRecord {
            document,
            created_at: current.created_at,
            updated_at: Utc::now(),
            revision: current.revision + 1,
        };
        self.write(&path, &record)?;
        Ok(record)
    }

    pub fn delete(&self, id: &str) -> Result<(), StoreError> {
        let path = self.path(id)?;
        let _guard = self.lock();
        match fs::remove_file(&path) {
            Err(e) if e.kind() == io::ErrorKind::NotFound => Err(StoreError::NotFound(id.to_owned())),
            other => Ok(other?),
        }
    }
}
