//! Output plumbing: path resolution, 12-significant-digit float fields,
//! CSV and JSON emission. Output bytes depend only on the config, never
//! on timing or worker count.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "ROUGHSUM_OUT_DIR";

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }

    pub fn as_str(self) -> &'static str {
        self.extension()
    }
}

/// Where the data goes: an explicit path, the env-var directory with the
/// default file name, the working directory, or stdout for `-`.
pub fn resolve_out_path(out: Option<&Path>, command: &str, format: Format) -> Option<PathBuf> {
    match out {
        Some(p) if p.as_os_str() == "-" => None,
        Some(p) => Some(p.to_path_buf()),
        None => {
            let file = format!("{command}.{}", format.extension());
            match std::env::var_os(OUT_DIR_ENV) {
                Some(dir) => Some(PathBuf::from(dir).join(file)),
                None => Some(PathBuf::from(file)),
            }
        }
    }
}

/// A float with 12 significant digits, e.g. `1.23456789012e2`.
pub fn sig12(v: f64) -> String {
    format!("{v:.11e}")
}

/// Echo of the parsed configuration; emitted verbatim into JSON outputs
/// so a run can be reproduced from its artifact. Fields are declared in
/// alphabetical order so the emitted object survives a parse/re-serialize
/// round trip through `serde_json::Value` byte-for-byte.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b_exponent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub budget: Option<u64>,
    pub command: String,
    pub format: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    pub limit: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q_max: Option<u64>,
    pub threads: usize,
    pub tolerances: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<String>,
    pub x: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub y: Option<u64>,
}

impl ConfigEcho {
    pub fn new(command: &str, x: u64, limit: u64, threads: usize, format: Format) -> Self {
        Self {
            b_exponent: None,
            budget: None,
            command: command.to_string(),
            format: format.as_str().to_string(),
            function: None,
            limit,
            q_max: None,
            threads,
            tolerances: BTreeMap::new(),
            weight: None,
            x,
            y: None,
        }
    }
}

/// One tabular artifact: a header, rows of preformatted fields, and the
/// config echo for the JSON form.
pub struct Artifact {
    pub config: ConfigEcho,
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Artifact {
    fn to_csv_bytes(&self) -> CliResult<Vec<u8>> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.header)?;
        for row in &self.rows {
            w.write_record(row)?;
        }
        w.flush()?;
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    fn to_json_bytes(&self) -> CliResult<Vec<u8>> {
        #[derive(Serialize)]
        struct JsonDoc<'a> {
            config: &'a ConfigEcho,
            header: &'a [&'static str],
            rows: &'a [Vec<String>],
        }
        let doc = JsonDoc {
            config: &self.config,
            header: &self.header,
            rows: &self.rows,
        };
        let mut bytes = serde_json::to_vec_pretty(&doc)?;
        bytes.push(b'\n');
        Ok(bytes)
    }

    pub fn render(&self, format: Format) -> CliResult<Vec<u8>> {
        match format {
            Format::Csv => self.to_csv_bytes(),
            Format::Json => self.to_json_bytes(),
        }
    }

    /// Write to the resolved destination; `None` means stdout.
    pub fn write(&self, dest: Option<&Path>, format: Format) -> CliResult<String> {
        let bytes = self.render(format)?;
        match dest {
            Some(path) => {
                std::fs::write(path, &bytes)?;
                Ok(path.display().to_string())
            }
            None => {
                std::io::stdout().write_all(&bytes)?;
                Ok("<stdout>".to_string())
            }
        }
    }
}
