use std::fs;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

const CACHE_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    version: u32,
    op: String,
    format: String,
    output: String,
}

/// Content-addressed store of rendered command output. Records are keyed by
/// the canonical operation string plus the output format, so a hit replays
/// the exact bytes of the earlier run.
pub struct Cache {
    dir: PathBuf,
}

impl Cache {
    pub fn new(dir: PathBuf) -> Self {
        Cache { dir }
    }

    fn path_for(&self, op: &str, format: &str) -> PathBuf {
        let mut h = Sha256::new();
        h.update(CACHE_VERSION.to_le_bytes());
        h.update(op.as_bytes());
        h.update([0]);
        h.update(format.as_bytes());
        let key: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
        self.dir.join(format!("{key}.json"))
    }

    /// None on a miss; a present but unreadable record is reported on stderr
    /// and treated as a miss, so the caller recomputes and overwrites it.
    pub fn lookup(&self, op: &str, format: &str) -> Option<String> {
        let path = self.path_for(op, format);
        let bytes = fs::read(&path).ok()?;
        match serde_json::from_slice::<CacheRecord>(&bytes) {
            Ok(rec) if rec.version == CACHE_VERSION && rec.op == op && rec.format == format => {
                Some(rec.output)
            }
            _ => {
                eprintln!(
                    "warning: discarding corrupt cache record {}",
                    path.display()
                );
                None
            }
        }
    }

    pub fn store(&self, op: &str, format: &str, output: &str) -> std::io::Result<()> {
        fs::create_dir_all(&self.dir)?;
        let record = CacheRecord {
            version: CACHE_VERSION,
            op: op.to_string(),
            format: format.to_string(),
            output: output.to_string(),
        };
        let body = serde_json::to_vec_pretty(&record).expect("record always serializes");
        fs::write(self.path_for(op, format), body)
    }
}
