use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use vqpe_core::{Result, VqpeError};

/// Resolve the output directory: flag, then VQPE_OUT_DIR, then ./vqpe-out.
pub fn resolve_out_dir(flag: Option<&Path>) -> Result<PathBuf> {
    let dir = flag
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os("VQPE_OUT_DIR").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("vqpe-out"));
    std::fs::create_dir_all(&dir)
        .map_err(|e| VqpeError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", dir.display()))))?;
    Ok(dir)
}

/// Shortest round-trip float formatting keeps CSV bytes deterministic.
pub fn fmt(x: f64) -> String {
    if x.is_nan() {
        String::new()
    } else {
        format!("{x}")
    }
}

pub struct CsvFile {
    path: PathBuf,
    out: BufWriter<File>,
}

impl CsvFile {
    pub fn create(dir: &Path, name: &str, header: &[&str]) -> Result<Self> {
        let path = dir.join(name);
        let file = File::create(&path).map_err(|e| {
            VqpeError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?;
        let mut out = BufWriter::new(file);
        writeln!(out, "{}", header.join(","))?;
        Ok(Self { path, out })
    }

    pub fn row(&mut self, cells: &[String]) -> Result<()> {
        writeln!(self.out, "{}", cells.join(","))?;
        Ok(())
    }

    pub fn finish(mut self) -> Result<PathBuf> {
        self.out.flush()?;
        Ok(self.path)
    }
}

/// Run manifest written next to the CSVs; identical flags and seeds
/// reproduce identical CSV bytes.
#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub config: serde_json::Value,
    pub seeds: Vec<u64>,
    pub version: String,
    pub duration_seconds: f64,
    pub outputs: Vec<String>,
}

pub struct RunContext {
    pub out_dir: PathBuf,
    pub started: Instant,
    pub outputs: Vec<PathBuf>,
}

impl RunContext {
    pub fn new(out_dir: PathBuf) -> Self {
        Self {
            out_dir,
            started: Instant::now(),
            outputs: Vec::new(),
        }
    }

    pub fn record(&mut self, path: PathBuf) {
        self.outputs.push(path);
    }

    pub fn write_manifest(
        &self,
        command: &str,
        config: serde_json::Value,
        seeds: Vec<u64>,
    ) -> Result<PathBuf> {
        let manifest = RunManifest {
            command: command.to_string(),
            argv: std::env::args().collect(),
            config,
            seeds,
            version: env!("CARGO_PKG_VERSION").to_string(),
            duration_seconds: self.started.elapsed().as_secs_f64(),
            outputs: self
                .outputs
                .iter()
                .map(|p| p.display().to_string())
                .collect(),
        };
        let path = self.out_dir.join("manifest.json");
        let text = serde_json::to_string_pretty(&manifest).expect("serializable manifest");
        std::fs::write(&path, text).map_err(|e| {
            VqpeError::Io(std::io::Error::new(e.kind(), format!("{}: {e}", path.display())))
        })?;
        Ok(path)
    }
}

/// Parse a comma-separated list of numbers.
pub fn parse_list<T: std::str::FromStr>(s: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            p.trim()
                .parse::<T>()
                .map_err(|e| VqpeError::InvalidArgument(format!("cannot parse '{p}': {e}")))
        })
        .collect()
}
