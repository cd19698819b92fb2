use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::RunConfig;

pub const TOOL: &str = "relnls";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Header block carried by every artifact.
#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub tool: &'static str,
    pub version: &'static str,
    pub config_sha256: String,
    pub params: serde_json::Value,
}

impl Provenance {
    pub fn new(config: &RunConfig) -> Self {
        let params = serde_json::to_value(config).expect("config serializes");
        let canonical = serde_json::to_string(&params).expect("config serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        let config_sha256 = digest.iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        });
        Self { tool: TOOL, version: VERSION, config_sha256, params }
    }

    fn comment_block(&self) -> String {
        format!(
            "# tool: {}\n# version: {}\n# config_sha256: {}\n# params: {}\n",
            self.tool, self.version, self.config_sha256, self.params
        )
    }
}

/// Writes into one output directory, creating it on first use.
pub struct Sink {
    pub dir: PathBuf,
    pub provenance: Provenance,
    written: Vec<PathBuf>,
}

impl Sink {
    pub fn new(dir: &Path, provenance: Provenance) -> Self {
        Self { dir: dir.to_path_buf(), provenance, written: Vec::new() }
    }

    pub fn written(&self) -> &[PathBuf] {
        &self.written
    }

    fn path(&mut self, name: &str) -> std::io::Result<PathBuf> {
        let p = self.dir.join(name);
        if let Some(parent) = p.parent() {
            fs::create_dir_all(parent)?;
        }
        self.written.push(p.clone());
        Ok(p)
    }

    pub fn csv(&mut self, name: &str, columns: &[&str], rows: &[Vec<f64>]) -> std::io::Result<()> {
        let mut out = self.provenance.comment_block();
        out.push_str(&columns.join(","));
        out.push('\n');
        for row in rows {
            let cells: Vec<String> = row.iter().map(|v| v.to_string()).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        fs::write(self.path(name)?, out)
    }

    /// `{"header": ..., "data": ...}`, pretty-printed.
    pub fn json(&mut self, name: &str, data: &impl Serialize) -> std::io::Result<()> {
        #[derive(Serialize)]
        struct Doc<'a, T: Serialize> {
            header: &'a Provenance,
            data: &'a T,
        }
        let text = serde_json::to_string_pretty(&Doc { header: &self.provenance, data }).expect("report serializes");
        fs::write(self.path(name)?, text + "\n")
    }

    pub fn text(&mut self, name: &str, body: &str) -> std::io::Result<()> {
        let mut out = self.provenance.comment_block();
        out.push_str(body);
        if !body.ends_with('\n') {
            out.push('\n');
        }
        fs::write(self.path(name)?, out)
    }

    /// Gnuplot script drawing `ys` (1-based column numbers) against column `x` of `csv`.
    pub fn gnuplot(&mut self, name: &str, csv: &str, x: usize, ys: &[(usize, &str)], xlabel: &str) -> std::io::Result<()> {
        let mut s = self.provenance.comment_block();
        let stem = csv.trim_end_matches(".csv");
        let _ = writeln!(s, "set datafile separator ','");
        let _ = writeln!(s, "set key autotitle columnhead");
        let _ = writeln!(s, "set terminal pngcairo size 900,600");
        let _ = writeln!(s, "set output '{stem}.png'");
        let _ = writeln!(s, "set xlabel '{xlabel}'");
        let plots: Vec<String> =
            ys.iter().map(|(c, title)| format!("'{csv}' using {x}:{c} with lines title '{title}'")).collect();
        let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
        fs::write(self.path(name)?, s)
    }

    /// Little-endian `f64` pairs `(re, im)`.
    pub fn snapshot(&mut self, name: &str, values: &[Complex64]) -> std::io::Result<()> {
        let mut f = fs::File::create(self.path(name)?)?;
        let mut buf = Vec::with_capacity(16 * values.len());
        for z in values {
            buf.extend_from_slice(&z.re.to_le_bytes());
            buf.extend_from_slice(&z.im.to_le_bytes());
        }
        f.write_all(&buf)
    }
}
