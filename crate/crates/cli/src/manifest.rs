// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.
//! Run manifests: what was run, on which inputs, and digests of every output.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::{SecondsFormat, Utc};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

pub fn sha256_file(path: &Path) -> std::io::Result<String> {
    Ok(hex::encode(Sha256::digest(fs::read(path)?)))
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path, shown: String) -> std::io::Result<Self> {
        Ok(FileDigest {
            path: shown,
            sha256: sha256_file(path)?,
        })
    }
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: &'static str,
    pub inputs: Vec<FileDigest>,
    pub params: Value,
    pub seed: Option<u64>,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<FileDigest>,
}

pub fn now() -> String {
    Utc::now().to_rfc3339_opts(SecondsFormat::Millis, true)
}

impl RunManifest {
    pub fn new(command: &str, params: Value, seed: Option<u64>) -> Self {
        RunManifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            inputs: Vec::new(),
            params,
            seed,
            started: now(),
            finished: String::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, path: &Path) -> std::io::Result<()> {
        self.inputs
            .push(FileDigest::of(path, path.display().to_string())?);
        Ok(())
    }

    /// Records an output; `root` is stripped from the displayed path.
    pub fn output(&mut self, path: &Path, root: Option<&Path>) -> std::io::Result<()> {
        let shown = root
            .and_then(|r| path.strip_prefix(r).ok())
            .unwrap_or(path)
            .display()
            .to_string();
        self.outputs.push(FileDigest::of(path, shown)?);
        Ok(())
    }

    pub fn write(mut self, path: &Path) -> std::io::Result<PathBuf> {
        self.finished = now();
        let text = serde_json::to_string_pretty(&self)? + "\n";
        fs::write(path, text)?;
        Ok(path.to_path_buf())
    }
}

/// `<out>.manifest.json` next to a single output file.
pub fn sidecar(out: &Path) -> PathBuf {
    let mut name = out
        .file_name()
        .map(|n| n.to_os_string())
        .unwrap_or_default();
    name.push(".manifest.json");
    out.with_file_name(name)
}

/// Rounds every non-integer number in `value` to 12 significant digits.
pub fn round_floats(value: Value) -> Value {
    match value {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            let rounded: f64 = ldc_core::format::sig12(x)
                .parse()
                .expect("formatted float parses");
            serde_json::Number::from_f64(rounded).map_or(Value::Null, Value::Number)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_floats).collect()),
        Value::Object(map) => {
            Value::Object(map.into_iter().map(|(k, v)| (k, round_floats(v))).collect())
        }
        other => other,
    }
}

/// Pretty JSON with floats rounded, newline-terminated.
pub fn to_json<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let v = round_floats(serde_json::to_value(value)?);
    Ok(serde_json::to_string_pretty(&v)? + "\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn floats_are_rounded_integers_kept() {
        let v = round_floats(json!({"a": 0.1 + 0.2, "b": [1, 2.5, 1.0 / 3.0], "c": null}));
        assert_eq!(
            v,
            json!({"a": 0.3, "b": [1, 2.5, 0.333333333333], "c": null})
        );
    }

    #[test]
    fn sidecar_path() {
        assert_eq!(
            sidecar(Path::new("out/g.csv")),
            Path::new("out/g.csv.manifest.json")
        );
    }
}
