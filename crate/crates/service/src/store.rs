//! One JSON file per session; writes to a session are serialized.

use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, Mutex};

use crate::session::MatchingSession;

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error("no session {0}")]
    NotFound(String),
    #[error("session storage failed at {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("session {id} is unreadable: {message}")]
    Corrupt { id: String, message: String },
}

pub struct SessionStore {
    dir: PathBuf,
    locks: Mutex<HashMap<String, Arc<Mutex<()>>>>,
}

fn io_error(path: &Path) -> impl FnOnce(std::io::Error) -> StoreError + '_ {
    move |source| StoreError::Io {
        path: path.to_path_buf(),
        source,
    }
}

impl SessionStore {
    pub fn open(dir: impl Into<PathBuf>) -> Result<Self, StoreError> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(io_error(&dir))?;
        Ok(Self {
            dir,
            locks: Mutex::new(HashMap::new()),
        })
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    pub fn new_id() -> String {
        uuid::Uuid::new_v4().to_string()
    }

    /// Ids are UUIDs; anything else cannot name a session file.
    fn path(&self, id: &str) -> Result<PathBuf, StoreError> {
        match uuid::Uuid::parse_str(id) {
            Ok(u) if u.hyphenated().to_string() == id => Ok(self.dir.join(format!("{id}.json"))),
            _ => Err(StoreError::NotFound(id.to_string())),
        }
    }

    fn lock(&self, id: &str) -> Arc<Mutex<()>> {
        let mut locks = self.locks.lock().unwrap_or_else(|e| e.into_inner());
        locks.entry(id.to_string()).or_default().clone()
    }

    pub fn load(&self, id: &str) -> Result<MatchingSession, StoreError> {
        let path = self.path(id)?;
        let text = match std::fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Err(StoreError::NotFound(id.to_string())),
            Err(e) => return Err(io_error(&path)(e)),
        };
        serde_json::from_str(&text).map_err(|e| StoreError::Corrupt {
            id: id.to_string(),
            message: e.to_string(),
        })
    }

    /// Writes through a temporary file so readers never see half a session.
    pub fn save(&self, session: &MatchingSession) -> Result<(), StoreError> {
        let path = self.path(&session.id)?;
        let json = serde_json::to_vec_pretty(session).expect("sessions serialize");
        let tmp = self.dir.join(format!(".{}.tmp", uuid::Uuid::new_v4()));
        std::fs::write(&tmp, json).map_err(io_error(&tmp))?;
        std::fs::rename(&tmp, &path).map_err(io_error(&path))
    }

    /// Loads, applies `step`, and stores the result if `step` succeeds. Calls
    /// for the same session run one at a time.
    pub fn update<T, E>(&self, id: &str, step: impl FnOnce(&mut MatchingSession) -> Result<T, E>) -> Result<T, E>
    where
        E: From<StoreError>,
    {
        let lock = self.lock(id);
        let _guard = lock.lock().unwrap_or_else(|e| e.into_inner());
        let mut session = self.load(id)?;
        let out = step(&mut session)?;
        self.save(&session)?;
        Ok(out)
    }
}
