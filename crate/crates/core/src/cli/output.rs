//! Artifact plumbing: output directories, CSV writers and run manifests.

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufWriter, Read, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::corpus::{Corpus, Format};
use crate::error::Result;

/// Round-trip formatting: parsing the text gives back the same `f64`.
pub fn num(v: f64) -> String {
    if v.is_nan() {
        "nan".to_string()
    } else {
        format!("{v}")
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CorpusInfo {
    pub path: PathBuf,
    pub format: Format,
    pub max_position: u64,
    pub sha256: String,
}

impl CorpusInfo {
    pub fn of(corpus: &Corpus) -> Result<Self> {
        Ok(CorpusInfo {
            path: corpus.path().to_path_buf(),
            format: corpus.format(),
            max_position: corpus.max_position(),
            sha256: file_digest(corpus.path())?,
        })
    }
}

pub fn file_digest(path: &Path) -> Result<String> {
    let mut f = File::open(path)?;
    let mut h = Sha256::new();
    let mut buf = vec![0u8; 1 << 20];
    loop {
        let n = f.read(&mut buf)?;
        if n == 0 {
            break;
        }
        h.update(&buf[..n]);
    }
    Ok(hex::encode(h.finalize()))
}

/// What produced a set of artifacts.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command_line: Vec<String>,
    pub corpus: Option<CorpusInfo>,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub outputs: Vec<String>,
    pub wall_time_seconds: f64,
}

/// A directory receiving the artifacts of one command, all tagged with the
/// same manifest.
pub struct OutDir {
    dir: PathBuf,
    manifest_name: String,
    outputs: Vec<String>,
    parameters: BTreeMap<String, serde_json::Value>,
    corpus: Option<CorpusInfo>,
    started: Instant,
}

impl OutDir {
    pub fn create(dir: &Path, command: &str) -> Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(OutDir {
            dir: dir.to_path_buf(),
            manifest_name: format!("{command}.manifest.json"),
            outputs: Vec::new(),
            parameters: BTreeMap::new(),
            corpus: None,
            started: Instant::now(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn param(&mut self, name: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(serde_json::Value::Null);
        self.parameters.insert(name.to_string(), v);
    }

    pub fn set_corpus(&mut self, info: CorpusInfo) {
        self.corpus = Some(info);
    }

    /// Writes a CSV whose first line names the manifest.
    pub fn csv<I>(&mut self, name: &str, header: &[&str], rows: I) -> Result<PathBuf>
    where
        I: IntoIterator<Item = Vec<String>>,
    {
        let path = self.path(name);
        let mut w = BufWriter::new(File::create(&path)?);
        writeln!(w, "# manifest: {}", self.manifest_name)?;
        writeln!(w, "{}", header.join(","))?;
        for row in rows {
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    pub fn json(&mut self, name: &str, value: &impl Serialize) -> Result<PathBuf> {
        let path = self.path(name);
        let mut w = BufWriter::new(File::create(&path)?);
        serde_json::to_writer_pretty(&mut w, value)?;
        writeln!(w)?;
        w.flush()?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    pub fn text(&mut self, name: &str, body: &str) -> Result<PathBuf> {
        let path = self.path(name);
        fs::write(&path, body)?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    /// Writes the manifest last, once the wall time is known.
    pub fn finish(self, command_line: Vec<String>) -> Result<PathBuf> {
        let manifest = RunManifest {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command_line,
            corpus: self.corpus,
            parameters: self.parameters,
            outputs: self.outputs,
            wall_time_seconds: self.started.elapsed().as_secs_f64(),
        };
        let path = self.dir.join(&self.manifest_name);
        let mut w = BufWriter::new(File::create(&path)?);
        serde_json::to_writer_pretty(&mut w, &manifest)?;
        writeln!(w)?;
        w.flush()?;
        Ok(path)
    }
}
