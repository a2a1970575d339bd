use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::sync::{Arc, RwLock};

use rand::RngCore;
use serde::{Deserialize, Serialize};
use tokio::sync::Mutex;

use regconf::{Model, Problem, ProblemFile, Session, TraceEntry};

/// On-disk form of a session; the state is rebuilt by replaying `trace`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Snapshot {
    pub problem_id: String,
    pub problem: ProblemFile,
    pub trace: Vec<TraceEntry>,
}

pub struct SessionEntry {
    pub problem_id: String,
    pub session: Session,
}

/// Restored session ids, and snapshot files skipped with the reason.
pub type Restored = (Vec<String>, Vec<(PathBuf, String)>);

pub type SessionHandle = Arc<Mutex<SessionEntry>>;

/// Problems and sessions by id. The maps are locked only to register or
/// look up ids; each session carries its own mutex.
#[derive(Default)]
pub struct Store {
    problems: RwLock<HashMap<String, Arc<Model>>>,
    sessions: RwLock<HashMap<String, SessionHandle>>,
    snapshot_dir: Option<PathBuf>,
}

/// 128 random bits as 32 lowercase hex digits.
pub fn fresh_id() -> String {
    let mut bytes = [0u8; 16];
    rand::thread_rng().fill_bytes(&mut bytes);
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

impl Store {
    pub fn new() -> Self {
        Self::default()
    }

    /// A store that writes every session to `dir` after each mutation.
    pub fn with_snapshots(dir: impl Into<PathBuf>) -> std::io::Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir)?;
        Ok(Self {
            snapshot_dir: Some(dir),
            ..Self::default()
        })
    }

    pub fn snapshot_dir(&self) -> Option<&Path> {
        self.snapshot_dir.as_deref()
    }

    pub fn add_problem(&self, model: Arc<Model>) -> String {
        let id = fresh_id();
        self.insert_problem(id.clone(), model);
        id
    }

    fn insert_problem(&self, id: String, model: Arc<Model>) {
        self.problems.write().unwrap().insert(id, model);
    }

    pub fn problem(&self, id: &str) -> Option<Arc<Model>> {
        self.problems.read().unwrap().get(id).cloned()
    }

    pub fn add_session(&self, problem_id: &str, session: Session) -> (String, SessionHandle) {
        let id = fresh_id();
        let handle = Arc::new(Mutex::new(SessionEntry {
            problem_id: problem_id.to_string(),
            session,
        }));
        self.sessions.write().unwrap().insert(id.clone(), handle.clone());
        (id, handle)
    }

    pub fn session(&self, id: &str) -> Option<SessionHandle> {
        self.sessions.read().unwrap().get(id).cloned()
    }

    pub fn session_count(&self) -> usize {
        self.sessions.read().unwrap().len()
    }

    /// Writes the session to the snapshot directory, if any.
    pub fn save(&self, id: &str, entry: &SessionEntry) -> std::io::Result<()> {
        let Some(dir) = &self.snapshot_dir else {
            return Ok(());
        };
        let snapshot = Snapshot {
            problem_id: entry.problem_id.clone(),
            problem: entry.session.problem().file().clone(),
            trace: entry.session.trace().to_vec(),
        };
        let path = dir.join(format!("{id}.json"));
        let tmp = dir.join(format!(".{id}.json.tmp"));
        std::fs::write(&tmp, serde_json::to_vec_pretty(&snapshot)?)?;
        std::fs::rename(tmp, path)
    }

    /// Writes every session; used on shutdown.
    pub async fn flush(&self) -> std::io::Result<()> {
        let sessions: Vec<(String, SessionHandle)> = self
            .sessions
            .read()
            .unwrap()
            .iter()
            .map(|(k, v)| (k.clone(), v.clone()))
            .collect();
        for (id, handle) in sessions {
            let entry = handle.lock().await;
            self.save(&id, &entry)?;
        }
        Ok(())
    }

    /// Restores every snapshot in the snapshot directory by rebuilding its
    /// problem and replaying its trace. Returns the ids restored and the
    /// files that could not be.
    pub fn restore(&self) -> std::io::Result<Restored> {
        let Some(dir) = self.snapshot_dir.clone() else {
            return Ok((Vec::new(), Vec::new()));
        };
        let mut restored = Vec::new();
        let mut failed = Vec::new();
        let mut paths: Vec<PathBuf> = std::fs::read_dir(&dir)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "json"))
            .collect();
        paths.sort();
        for path in paths {
            let id = path.file_stem().unwrap().to_string_lossy().into_owned();
            match self.restore_one(&path) {
                Ok((problem_id, session)) => {
                    let handle = Arc::new(Mutex::new(SessionEntry { problem_id, session }));
                    self.sessions.write().unwrap().insert(id.clone(), handle);
                    restored.push(id);
                }
                Err(e) => failed.push((path, e)),
            }
        }
        Ok((restored, failed))
    }

    fn restore_one(&self, path: &Path) -> Result<(String, Session), String> {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        let snapshot: Snapshot = serde_json::from_str(&text).map_err(|e| e.to_string())?;
        let model = match self.problem(&snapshot.problem_id) {
            Some(m) if m.problem().file() == &snapshot.problem => m,
            _ => {
                let problem = Problem::new(snapshot.problem).map_err(|e| e.to_string())?;
                let model = Arc::new(Model::build(Arc::new(problem)).map_err(|e| e.to_string())?);
                self.insert_problem(snapshot.problem_id.clone(), model.clone());
                model
            }
        };
        let mut session = Session::new(model);
        for (i, entry) in snapshot.trace.iter().enumerate() {
            session
                .apply(entry)
                .map_err(|e| format!("replay of action {i} failed: {e}"))?;
        }
        Ok((snapshot.problem_id, session))
    }
}
