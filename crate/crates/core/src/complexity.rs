//! Compression ratio `CR = C/S` of lines-format prefixes under gzip.
//!
//! `S` is the exact lines serialization (newlines included) and `C` the size
//! of the RFC 1952 gzip member around the DEFLATE stream. The gzip header is
//! written with mtime 0 and no file name, so output bytes depend only on the
//! input and the level.

use std::io::{self, Write};

use flate2::write::GzEncoder;
use flate2::Compression;
use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::corpus::{write_word, CorpusWindow, Format};
use crate::error::{Error, Result};

/// zlib's default level.
pub const DEFAULT_LEVEL: u32 = 6;

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct CompressionReport {
    pub n: u64,
    pub raw_bytes: u64,
    pub compressed_bytes: u64,
    pub ratio: f64,
    pub level: u32,
}

#[derive(Default)]
struct CountingSink(u64);

impl Write for CountingSink {
    fn write(&mut self, buf: &[u8]) -> io::Result<usize> {
        self.0 += buf.len() as u64;
        Ok(buf.len())
    }

    fn flush(&mut self) -> io::Result<()> {
        Ok(())
    }
}

fn check_level(level: u32) -> Result<()> {
    if level > 9 {
        return Err(Error::domain(format!("gzip level {level} not in 0..=9")));
    }
    Ok(())
}

fn encoder(level: u32) -> GzEncoder<CountingSink> {
    flate2::GzBuilder::new()
        .mtime(0)
        .write(CountingSink::default(), Compression::new(level))
}

/// Compressed size of `data` in bytes.
pub fn gzip_size(data: &[u8], level: u32) -> Result<u64> {
    check_level(level)?;
    let mut enc = encoder(level);
    enc.write_all(data)?;
    Ok(enc.finish()?.0)
}

pub fn compression_ratio_bytes(data: &[u8], level: u32) -> Result<CompressionReport> {
    let compressed = gzip_size(data, level)?;
    Ok(CompressionReport {
        n: 0,
        raw_bytes: data.len() as u64,
        compressed_bytes: compressed,
        ratio: compressed as f64 / data.len() as f64,
        level,
    })
}

/// CR of the prefix of `window` ending at each checkpoint, in one pass: every
/// checkpoint has its own encoder fed the same lines until it closes.
pub fn compression_curve(window: &CorpusWindow, checkpoints: &[u64], level: u32) -> Result<Vec<CompressionReport>> {
    check_level(level)?;
    let mut cps = checkpoints.to_vec();
    cps.sort_unstable();
    cps.dedup();
    if let Some(&bad) = cps.iter().find(|&&c| !window.contains_position(c)) {
        return Err(Error::range(format!(
            "checkpoint {bad} outside window [{}, {}]",
            window.start(),
            window.end()
        )));
    }
    let Some(&last) = cps.last() else {
        return Ok(Vec::new());
    };
    let mut open: Vec<(u64, GzEncoder<CountingSink>)> = cps.iter().map(|&c| (c, encoder(level))).collect();
    let mut reports = Vec::with_capacity(cps.len());
    let mut raw = 0u64;
    let mut buf = Vec::with_capacity(1 << 16);
    let mut words = window.sub_window(window.start(), last)?.words()?;
    let mut pos = window.start();
    while !open.is_empty() {
        // Fill a chunk that never crosses the next checkpoint.
        let stop = open[0].0;
        buf.clear();
        while pos <= stop && buf.len() < (1 << 16) {
            let w = words
                .next()
                .ok_or_else(|| Error::format(Some(pos), "window ended early"))??;
            write_word(&mut buf, &w, Format::Lines);
            pos += 1;
        }
        raw += buf.len() as u64;
        for (_, enc) in open.iter_mut() {
            enc.write_all(&buf)?;
        }
        if pos > stop {
            let (n, enc) = open.remove(0);
            let compressed = enc.finish()?.0;
            reports.push(CompressionReport {
                n,
                raw_bytes: raw,
                compressed_bytes: compressed,
                ratio: compressed as f64 / raw as f64,
                level,
            });
        }
    }
    Ok(reports)
}

/// CR of the prefix `[window.start, n]`.
pub fn compression_ratio(window: &CorpusWindow, n: u64, level: u32) -> Result<CompressionReport> {
    Ok(compression_curve(window, &[n], level)?.remove(0))
}

/// CR of `size` uniformly random bytes from a fixed-seed ChaCha8 stream.
pub fn random_control(size: usize, seed: u64, level: u32) -> Result<CompressionReport> {
    let mut data = vec![0u8; size];
    ChaCha8Rng::seed_from_u64(seed).fill_bytes(&mut data);
    compression_ratio_bytes(&data, level)
}

/// CR of `lines` copies of the same line.
pub fn constant_control(lines: usize, line: &str, level: u32) -> Result<CompressionReport> {
    let mut data = Vec::with_capacity(lines * (line.len() + 1));
    for _ in 0..lines {
        data.extend_from_slice(line.as_bytes());
        data.push(b'\n');
    }
    let mut r = compression_ratio_bytes(&data, level)?;
    r.n = lines as u64;
    Ok(r)
}
