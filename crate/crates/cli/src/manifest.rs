use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// Everything needed to reproduce one run byte for byte.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    /// Command line after the program name, without `--out` and `--manifest`.
    pub argv: Vec<String>,
    /// Parsed parameters of the subcommand.
    pub params: Value,
    /// Environment variables that affect the run.
    pub env: BTreeMap<String, String>,
    /// Standard input consumed by the run, if any.
    pub stdin: Option<String>,
    pub output: OutputDigest,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputDigest {
    pub path: Option<String>,
    pub bytes: usize,
    pub sha256: String,
}

pub fn sha256_hex(data: &[u8]) -> String {
    hex::encode(Sha256::digest(data))
}

impl OutputDigest {
    pub fn of(path: Option<String>, data: &str) -> Self {
        OutputDigest { path, bytes: data.len(), sha256: sha256_hex(data.as_bytes()) }
    }
}

/// Drops the global output flags and their values.
pub fn strip_output_flags(args: &[String]) -> Vec<String> {
    let mut out = Vec::new();
    let mut skip = false;
    for a in args {
        if skip {
            skip = false;
            continue;
        }
        if a == "--out" || a == "--manifest" {
            skip = true;
            continue;
        }
        if a.starts_with("--out=") || a.starts_with("--manifest=") {
            continue;
        }
        out.push(a.clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strips_flags() {
        let args: Vec<String> =
            ["fit", "--out", "x.json", "--kind", "disk", "--manifest=m.json"].iter().map(|s| s.to_string()).collect();
        assert_eq!(strip_output_flags(&args), vec!["fit", "--kind", "disk"]);
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(sha256_hex(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }
}
