use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

pub const MANIFEST_SCHEMA: &str = "arrovian.manifest/1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileDigest {
    pub name: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(name: impl Into<String>, bytes: &[u8]) -> Self {
        FileDigest {
            name: name.into(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }
}

/// What ran and what it produced. Rerunning `args` reproduces every digest
/// in `outputs`.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub version: String,
    pub command: String,
    /// Arguments after the program name, without `--manifest`.
    pub args: Vec<String>,
    pub parameters: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub exit_code: u8,
    pub wall_time_ms: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
}

/// Drops `--manifest FILE` and `--manifest=FILE` from an argument list.
pub fn strip_manifest_flag(args: &[String]) -> Vec<String> {
    let mut out = Vec::with_capacity(args.len());
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
        } else if a == "--manifest" {
            skip = true;
        } else if !a.starts_with("--manifest=") {
            out.push(a.clone());
        }
    }
    out
}

pub fn read_manifest(path: &Path) -> anyhow::Result<RunManifest> {
    let text = std::fs::read_to_string(path)?;
    let m: RunManifest = serde_json::from_str(&text)?;
    if m.schema != MANIFEST_SCHEMA {
        anyhow::bail!("unsupported manifest schema `{}`", m.schema);
    }
    Ok(m)
}
