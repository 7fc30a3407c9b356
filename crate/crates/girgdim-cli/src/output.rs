//! Atomic file output and the run log.

use girgdim::io::RunRecord;
use girgdim::Result;
use serde::Serialize;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

/// Collects output files for one CLI invocation; everything is written
/// as temp-plus-rename so concurrent runs with distinct directories
/// never interleave.
pub struct OutputDir {
    dir: PathBuf,
    written: Vec<PathBuf>,
    started: Instant,
}

impl OutputDir {
    pub fn create(dir: &Path) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(OutputDir { dir: dir.to_path_buf(), written: Vec::new(), started: Instant::now() })
    }

    pub fn write(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf> {
        let target = self.dir.join(name);
        let tmp = self.dir.join(format!(".tmp.{}.{}", name, std::process::id()));
        fs::write(&tmp, bytes)?;
        fs::rename(&tmp, &target)?;
        self.written.push(target.clone());
        Ok(target)
    }

    /// Writes `run.json`: the deterministic record plus wall time and
    /// output paths. Wall time lives only here so the data artifacts
    /// stay byte-identical across reruns.
    pub fn finish(mut self, record: &RunRecord) -> Result<()> {
        #[derive(Serialize)]
        struct RunLog<'a> {
            record: &'a RunRecord,
            wall_time_ms: u128,
            outputs: Vec<String>,
        }
        let log = RunLog {
            record,
            wall_time_ms: self.started.elapsed().as_millis(),
            outputs: self
                .written
                .iter()
                .map(|p| p.file_name().unwrap().to_string_lossy().into_owned())
                .collect(),
        };
        let bytes = serde_json::to_vec_pretty(&log).expect("serializable");
        self.write("run.json", &bytes)?;
        Ok(())
    }
}
