//! On-disk result cache: one CSV shard per computed unit, keyed by the
//! SHA-256 of a canonical description of that unit, plus an append-only
//! manifest. A shard is served only when its recorded key and toolkit
//! version match exactly.

use std::fs::{self, OpenOptions};
use std::io::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone)]
pub struct Cache {
    root: PathBuf,
}

fn hash_key(canonical: &str) -> String {
    let digest = Sha256::digest(canonical.as_bytes());
    hex::encode(&digest[..16])
}

fn stamp(canonical: &str) -> String {
    format!("# key={canonical} version={TOOLKIT_VERSION}")
}

impl Cache {
    pub fn open(root: &Path) -> Result<Self> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(Cache {
            root: root.to_path_buf(),
        })
    }

    fn shard_path(&self, command: &str, hash: &str) -> PathBuf {
        self.root.join(command).join(format!("{hash}.csv"))
    }

    pub fn load(&self, command: &str, canonical: &str) -> Result<Option<Vec<Vec<String>>>> {
        let path = self.shard_path(command, &hash_key(canonical));
        let text = match fs::read_to_string(&path) {
            Ok(t) => t,
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
            Err(e) => return Err(CliError::io(&path, e)),
        };
        let mut lines = text.lines();
        if lines.next() != Some(stamp(canonical).as_str()) {
            return Ok(None);
        }
        Ok(Some(
            lines
                .map(|l| l.split(',').map(str::to_string).collect())
                .collect(),
        ))
    }

    pub fn store(&self, command: &str, canonical: &str, rows: &[Vec<String>]) -> Result<()> {
        let hash = hash_key(canonical);
        let path = self.shard_path(command, &hash);
        let dir = path.parent().expect("shard has a parent");
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let mut body = stamp(canonical);
        body.push('\n');
        for row in rows {
            body.push_str(&row.join(","));
            body.push('\n');
        }
        // Write then rename so an interrupted run never leaves a torn shard.
        let tmp = path.with_extension("csv.tmp");
        fs::write(&tmp, body).map_err(|e| CliError::io(&tmp, e))?;
        fs::rename(&tmp, &path).map_err(|e| CliError::io(&path, e))?;

        let manifest = self.root.join("manifest.csv");
        let mut f = OpenOptions::new()
            .create(true)
            .append(true)
            .open(&manifest)
            .map_err(|e| CliError::io(&manifest, e))?;
        writeln!(f, "{hash},{command},{TOOLKIT_VERSION},{canonical}")
            .map_err(|e| CliError::io(&manifest, e))?;
        Ok(())
    }
}
