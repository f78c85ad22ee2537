//! Artifact writing: 12-significant-digit JSON, checksums and manifests.

use std::path::{Path, PathBuf};

use miqcc_core::format::round12;
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::error::{CliError, Result};

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn to_json(value: &impl Serialize) -> String {
    let mut v = serde_json::to_value(value).expect("report serializes");
    round_floats(&mut v);
    let mut s = serde_json::to_string_pretty(&v).expect("value serializes");
    s.push('\n');
    s
}

fn round_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round12(x))) {
                *n = x;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_floats),
        Value::Object(map) => map.values_mut().for_each(round_floats),
        _ => {}
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> Result<String> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileDigest {
    pub name: String,
    pub sha256: String,
}

/// Writes files into one directory and remembers their checksums.
#[derive(Debug)]
pub struct ArtifactDir {
    dir: PathBuf,
    written: Vec<FileDigest>,
}

impl ArtifactDir {
    pub fn create(dir: &Path) -> Result<Self> {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        Ok(Self {
            dir: dir.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn path(&self) -> &Path {
        &self.dir
    }

    pub fn write(&mut self, name: &str, contents: &str) -> Result<()> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|e| CliError::io(&path, e))?;
        self.written.push(FileDigest {
            name: name.to_string(),
            sha256: sha256_hex(contents.as_bytes()),
        });
        Ok(())
    }

    pub fn written(&self) -> &[FileDigest] {
        &self.written
    }
}
