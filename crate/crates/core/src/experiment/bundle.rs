//! Writes a bundle to disk: `<out>/<experiment>/<file>.csv` plus `<out>/report.txt`.

use std::fs;
use std::path::{Path, PathBuf};

use super::run::Bundle;
use crate::error::Result;

/// Writes `contents` to a sibling temporary file, then renames it over `path`.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("out");
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

impl Bundle {
    /// Returns the paths written, report last.
    pub fn write(&self, out: &Path) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        for o in &self.outcomes {
            let dir = out.join(&o.name);
            fs::create_dir_all(&dir)?;
            for f in &o.files {
                let path = dir.join(&f.name);
                write_atomic(&path, &f.contents)?;
                written.push(path);
            }
        }
        fs::create_dir_all(out)?;
        let report = out.join("report.txt");
        write_atomic(&report, &self.report())?;
        written.push(report);
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::experiment::{run_experiment, ExperimentConfig};

    #[test]
    fn writes_files_and_report() {
        let dir = tempfile::tempdir().unwrap();
        let cfg = ExperimentConfig::parse("[c]\nkind = counterexample\nk_max = 1\n").unwrap();
        let bundle = run_experiment(&cfg).unwrap();
        let paths = bundle.write(dir.path()).unwrap();
        assert!(paths.iter().all(|p| p.exists()));
        assert!(dir.path().join("c/seams.csv").exists());
        let report = fs::read_to_string(dir.path().join("report.txt")).unwrap();
        assert!(report.contains("PASS index-smooth"));
        assert!(fs::read_dir(dir.path().join("c")).unwrap().all(|e| !e
            .unwrap()
            .file_name()
            .to_string_lossy()
            .ends_with(".tmp")));
    }

    #[test]
    fn overwrites_existing_files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.csv");
        write_atomic(&path, "x\n1\n").unwrap();
        write_atomic(&path, "x\n2\n").unwrap();
        assert_eq!(fs::read_to_string(&path).unwrap(), "x\n2\n");
    }
}
