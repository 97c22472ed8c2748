use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::accumulator::AccumulatorState;

/// Crash-safe sweep state, written after every committed chunk.
///
/// Resume refuses to proceed if q, genus, chunk size, or the optional-output
/// configuration differ from the checkpoint: a different chunk partition or
/// accumulator shape would silently change what the counters mean.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Checkpoint {
    pub q: u64,
    pub genus: u32,
    pub chunk_size: u64,
    pub next_chunk_index: u64,
    pub higher_max_k: u32,
    /// Length of the per-prime dump file at commit time, when dumping.
    /// Resume truncates the dump back to this length so rows from an
    /// uncommitted chunk can never survive a crash.
    pub dump_bytes: Option<u64>,
    pub accumulator: AccumulatorState,
}

impl Checkpoint {
    pub fn load(path: &Path) -> Result<Checkpoint> {
        let data = fs::read_to_string(path)?;
        serde_json::from_str(&data).map_err(|e| Error::CheckpointCorrupt {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })
    }

    /// Atomic save: write a sibling temp file, then rename over the target.
    pub fn save(&self, path: &Path) -> Result<()> {
        let tmp: PathBuf = path.with_extension("tmp");
        fs::write(&tmp, serde_json::to_string(self)?)?;
        fs::rename(&tmp, path)?;
        Ok(())
    }

    pub fn validate(
        &self,
        path: &Path,
        q: u64,
        genus: u32,
        chunk_size: u64,
        higher_max_k: u32,
        dumping: bool,
    ) -> Result<()> {
        let mismatch = |field: &'static str, found: String, expected: String| {
            Err(Error::CheckpointMismatch {
                path: path.to_path_buf(),
                field,
                found,
                expected,
            })
        };
        if self.q != q {
            return mismatch("q", self.q.to_string(), q.to_string());
        }
        if self.genus != genus {
            return mismatch("genus", self.genus.to_string(), genus.to_string());
        }
        if self.chunk_size != chunk_size {
            return mismatch(
                "chunk_size",
                self.chunk_size.to_string(),
                chunk_size.to_string(),
            );
        }
        if self.higher_max_k != higher_max_k {
            return mismatch(
                "higher_max_k",
                self.higher_max_k.to_string(),
                higher_max_k.to_string(),
            );
        }
        if self.dump_bytes.is_some() != dumping {
            return mismatch(
                "dump",
                if self.dump_bytes.is_some() {
                    "enabled".into()
                } else {
                    "disabled".into()
                },
                if dumping {
                    "enabled".into()
                } else {
                    "disabled".into()
                },
            );
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::accumulator::MomentAccumulator;

    #[test]
    fn save_load_round_trip_and_validation() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        let acc = MomentAccumulator::new(5, 2, 0);
        let ck = Checkpoint {
            q: 5,
            genus: 2,
            chunk_size: 4096,
            next_chunk_index: 3,
            higher_max_k: 0,
            dump_bytes: None,
            accumulator: acc.to_state(),
        };
        ck.save(&path).unwrap();
        let back = Checkpoint::load(&path).unwrap();
        assert_eq!(back.next_chunk_index, 3);
        back.validate(&path, 5, 2, 4096, 0, false).unwrap();
        // Parameter mismatches refuse to resume.
        assert!(back.validate(&path, 13, 2, 4096, 0, false).is_err());
        assert!(back.validate(&path, 5, 3, 4096, 0, false).is_err());
        assert!(back.validate(&path, 5, 2, 512, 0, false).is_err());
        assert!(back.validate(&path, 5, 2, 4096, 4, false).is_err());
        assert!(back.validate(&path, 5, 2, 4096, 0, true).is_err());
    }

    #[test]
    fn corrupt_checkpoint_is_reported() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ck.json");
        std::fs::write(&path, "{not json").unwrap();
        assert!(matches!(
            Checkpoint::load(&path),
            Err(Error::CheckpointCorrupt { .. })
        ));
    }
}
