use std::path::Path;

use fuzzychip::ga::GaConfig;
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::output::{parse_json, read_text, write_json};
use crate::seeds::SeedGroup;
use crate::track_cmd::TrackConfig;

pub const MANIFEST_NAME: &str = "manifest.json";

/// An input file captured verbatim so a replay does not depend on the
/// file system.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputFile {
    pub path: String,
    pub contents: String,
}

impl InputFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        Ok(Self {
            path: path.display().to_string(),
            contents: read_text(path)?,
        })
    }
}

/// Everything that determines a command's output files.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Job {
    FlcSweep {
        spec: InputFile,
        step: u32,
    },
    Ga {
        function: String,
        config_path: Option<String>,
        config: GaConfig,
        instance: Option<InputFile>,
        seeds: Vec<SeedGroup>,
    },
    Tsp {
        instance: InputFile,
        config_path: Option<String>,
        config: GaConfig,
        seeds: Vec<SeedGroup>,
    },
    Track {
        path: InputFile,
        config_path: Option<String>,
        config: TrackConfig,
        seeds: Vec<u64>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    #[serde(flatten)]
    pub job: Job,
    /// Result files, relative to the output directory.
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new(job: Job, outputs: Vec<String>) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME").to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            job,
            outputs,
        }
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        parse_json(&read_text(path)?, &path.display().to_string())
    }

    pub fn save(&self, dir: &Path) -> Result<(), CliError> {
        write_json(&dir.join(MANIFEST_NAME), self)
    }
}

/// Output stem of run `i`.
pub fn run_stem(prefix: &str, i: usize) -> String {
    format!("{prefix}-{i:03}")
}
