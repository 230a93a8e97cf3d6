use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::AppConfig;
use crate::error::CliError;

pub const SCHEMA_VERSION: u32 = 1;
pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: u64,
}

/// Provenance record written once per run.
#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub command: String,
    pub args: serde_json::Value,
    pub config: AppConfig,
    pub config_hash: String,
    pub seed: u64,
    pub inputs: Vec<InputDigest>,
    pub outputs: Vec<String>,
    pub wall_clock_seconds: f64,
    pub status: String,
    pub error: Option<String>,
}

/// Per-run state: effective config, output directory and the files read
/// and written so far.
pub struct RunContext {
    pub config: AppConfig,
    pub out: PathBuf,
    pub svg: bool,
    inputs: Vec<InputDigest>,
    outputs: Vec<String>,
    started: Instant,
}

impl RunContext {
    pub fn new(config: AppConfig, out: PathBuf, svg: bool) -> Result<Self, CliError> {
        std::fs::create_dir_all(&out)
            .map_err(|e| CliError::Data(format!("cannot create {}: {e}", out.display())))?;
        Ok(Self {
            config,
            out,
            svg,
            inputs: Vec::new(),
            outputs: Vec::new(),
            started: Instant::now(),
        })
    }

    pub fn seed(&self) -> u64 {
        self.config.training.seed
    }

    /// Reads an input file and records its digest.
    pub fn read_input(&mut self, path: &Path) -> Result<Vec<u8>, CliError> {
        let bytes =
            std::fs::read(path).map_err(|e| CliError::Data(format!("cannot read {}: {e}", path.display())))?;
        let digest = InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
            bytes: bytes.len() as u64,
        };
        if !self.inputs.contains(&digest) {
            self.inputs.push(digest);
        }
        Ok(bytes)
    }

    pub fn read_input_text(&mut self, path: &Path) -> Result<String, CliError> {
        String::from_utf8(self.read_input(path)?)
            .map_err(|_| CliError::Data(format!("{} is not valid UTF-8", path.display())))
    }

    /// Writes `name` under the output directory.
    pub fn write_output(&mut self, name: &str, contents: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.out.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| CliError::Data(format!("cannot write {}: {e}", path.display())))?;
        if !self.outputs.iter().any(|o| o == name) {
            self.outputs.push(name.to_string());
        }
        Ok(path)
    }

    pub fn write_json<T: Serialize>(&mut self, name: &str, value: &T) -> Result<PathBuf, CliError> {
        let mut text = serde_json::to_string_pretty(value).map_err(|e| CliError::Data(e.to_string()))?;
        text.push('\n');
        self.write_output(name, text.as_bytes())
    }

    pub fn outputs(&self) -> &[String] {
        &self.outputs
    }

    pub fn write_manifest(
        &mut self,
        command: &str,
        args: serde_json::Value,
        result: &Result<(), CliError>,
    ) -> Result<PathBuf, CliError> {
        let mut outputs = self.outputs.clone();
        outputs.push(MANIFEST_FILE.to_string());
        let manifest = RunManifest {
            schema_version: SCHEMA_VERSION,
            command: command.to_string(),
            args,
            config: self.config.clone(),
            config_hash: self.config.hash(),
            seed: self.seed(),
            inputs: self.inputs.clone(),
            outputs,
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
            status: if result.is_ok() { "ok" } else { "failed" }.to_string(),
            error: result.as_ref().err().map(|e| e.to_string()),
        };
        self.write_json(MANIFEST_FILE, &manifest)
    }
}

/// CSV text from a header and pre-formatted rows.
pub fn csv_text(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(&r)?;
    }
    w.into_inner().map_err(|e| CliError::Data(e.to_string()))
}

/// Shortest round-trip formatting for report files.
pub fn num(v: f64) -> String {
    format!("{v:?}")
}
