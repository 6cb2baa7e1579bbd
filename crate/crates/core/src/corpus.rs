//! Corpus generation and the on-disk formats.
//!
//! Two serializations of positions `1..=N` are supported:
//!
//! * **lines**: one ASCII `1`/`0` word per line, LF-terminated, an empty line
//!   for position 1. No header.
//! * **packed**: a [`CorpusHeader`], then per word a little-endian `u16` bit
//!   length followed by `⌈L/8⌉` bytes holding the symbols MSB-first.
//!
//! Either file may carry an index sidecar (`<path>.idx`): the same header, a
//! `u64` entry count, then the byte offset of every position `1 + j·2¹⁶`.

use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Read, Seek, SeekFrom, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::sieve::{self, SmallPrimes};
use crate::tree::{exponent_word, DyckWord, MAX_WORD_BITS};

pub const MAGIC: &[u8; 6] = b"NATEXT";
pub const FORMAT_VERSION: u16 = 1;
pub const HEADER_LEN: usize = 24;
/// Spacing of index entries, in positions.
pub const INDEX_STRIDE: u64 = 1 << 16;

const GENERATION_SEGMENT: usize = 1 << 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Lines,
    Packed,
}

impl Format {
    fn tag(self) -> u8 {
        match self {
            Format::Lines => 0,
            Format::Packed => 1,
        }
    }

    fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(Format::Lines),
            1 => Ok(Format::Packed),
            t => Err(Error::format(None, format!("unknown format variant {t}"))),
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "lines" => Ok(Format::Lines),
            "packed" => Ok(Format::Packed),
            other => Err(Error::domain(format!("unknown format {other:?} (lines|packed)"))),
        }
    }
}

/// Fixed 24-byte header: magic, version, variant, 7 reserved zero bytes, N.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CorpusHeader {
    pub version: u16,
    pub format: Format,
    pub max_position: u64,
}

impl CorpusHeader {
    pub fn new(format: Format, max_position: u64) -> Self {
        CorpusHeader {
            version: FORMAT_VERSION,
            format,
            max_position,
        }
    }

    pub fn to_bytes(&self) -> [u8; HEADER_LEN] {
        let mut out = [0u8; HEADER_LEN];
        out[..6].copy_from_slice(MAGIC);
        out[6..8].copy_from_slice(&self.version.to_le_bytes());
        out[8] = self.format.tag();
        out[16..24].copy_from_slice(&self.max_position.to_le_bytes());
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        if bytes.len() < HEADER_LEN || &bytes[..6] != MAGIC {
            return Err(Error::format(None, "missing NATEXT header"));
        }
        let version = u16::from_le_bytes([bytes[6], bytes[7]]);
        if version != FORMAT_VERSION {
            return Err(Error::format(None, format!("unsupported version {version}")));
        }
        let format = Format::from_tag(bytes[8])?;
        let max_position = u64::from_le_bytes(bytes[16..24].try_into().unwrap());
        Ok(CorpusHeader {
            version,
            format,
            max_position,
        })
    }
}

/// Produces the words of consecutive positions from a shared small-prime table.
#[derive(Debug, Clone)]
pub struct TextGenerator {
    primes: Arc<SmallPrimes>,
    max_position: u64,
}

impl TextGenerator {
    pub fn new(max_position: u64) -> Result<Self> {
        if max_position == 0 {
            return Err(Error::domain("N must be at least 1"));
        }
        if max_position == u64::MAX {
            return Err(Error::range("N overflows u64"));
        }
        Ok(TextGenerator {
            primes: Arc::new(SmallPrimes::for_max(max_position)),
            max_position,
        })
    }

    pub fn max_position(&self) -> u64 {
        self.max_position
    }

    /// Words for positions `[start, start + len)`.
    pub fn words(&self, start: u64, len: usize) -> Result<Vec<DyckWord>> {
        let mut out = Vec::with_capacity(len);
        self.words_into(start, len, &mut out)?;
        Ok(out)
    }

    pub fn words_into(&self, start: u64, len: usize, out: &mut Vec<DyckWord>) -> Result<()> {
        if start == 0 || start + len as u64 - 1 > self.max_position {
            return Err(Error::range(format!(
                "positions {start}..{} outside 1..={}",
                start + len as u64,
                self.max_position
            )));
        }
        let offset = out.len();
        out.resize(offset + len, DyckWord::EMPTY);
        let slots = &mut out[offset..];
        sieve::factor_segment(start, len, &self.primes, |i, _p, e| {
            slots[i].push_subtree_unchecked(exponent_word(e));
        })
    }
}

/// Serializes one word in the given format.
pub fn write_word(buf: &mut Vec<u8>, word: &DyckWord, format: Format) {
    match format {
        Format::Lines => {
            for up in word.symbols() {
                buf.push(if up { b'1' } else { b'0' });
            }
            buf.push(b'\n');
        }
        Format::Packed => {
            buf.extend_from_slice(&(word.len() as u16).to_le_bytes());
            buf.extend_from_slice(&word.to_msb_bytes());
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenerateOptions {
    pub format: Format,
    pub threads: usize,
    pub segment_len: usize,
    /// Positions at which to record the running distinct-word count.
    pub checkpoints: Vec<u64>,
}

impl Default for GenerateOptions {
    fn default() -> Self {
        GenerateOptions {
            format: Format::Lines,
            threads: 1,
            segment_len: GENERATION_SEGMENT,
            checkpoints: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct GenerationReport {
    pub max_position: u64,
    pub format: Format,
    pub words_written: u64,
    pub bytes_written: u64,
    /// `(n, d_n)` for every requested checkpoint `≤ N`; the empty word is not counted.
    pub distinct_at: Vec<(u64, usize)>,
    /// Byte offsets of positions `1 + j·INDEX_STRIDE`.
    #[serde(skip)]
    pub index: Vec<u64>,
}

struct EncodedSegment {
    bytes: Vec<u8>,
    // (position, offset within `bytes`)
    index_points: Vec<(u64, u64)>,
    // first position of each word new to this segment, in position order
    firsts: Vec<(u64, DyckWord)>,
}

fn encode_segment(gen: &TextGenerator, start: u64, len: usize, format: Format) -> Result<EncodedSegment> {
    let words = gen.words(start, len)?;
    let mut bytes = Vec::with_capacity(len * 8);
    let mut index_points = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut firsts = Vec::new();
    for (i, w) in words.iter().enumerate() {
        let pos = start + i as u64;
        if (pos - 1).is_multiple_of(INDEX_STRIDE) {
            index_points.push((pos, bytes.len() as u64));
        }
        write_word(&mut bytes, w, format);
        if !w.is_empty() && seen.insert(*w) {
            firsts.push((pos, *w));
        }
    }
    Ok(EncodedSegment {
        bytes,
        index_points,
        firsts,
    })
}

/// Streams positions `1..=max_position` into `sink`.
///
/// Segments are encoded on `options.threads` workers in batches and written
/// strictly in position order, so the bytes do not depend on the worker count.
/// For the packed format the header is written first.
pub fn generate<W: Write>(max_position: u64, sink: &mut W, options: &GenerateOptions) -> Result<GenerationReport> {
    let gen = TextGenerator::new(max_position)?;
    let threads = options.threads.max(1);
    let segment_len = options.segment_len.max(1) as u64;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::domain(format!("thread pool: {e}")))?;

    let mut written: u64 = 0;
    if options.format == Format::Packed {
        sink.write_all(&CorpusHeader::new(Format::Packed, max_position).to_bytes())?;
        written += HEADER_LEN as u64;
    }

    let segments: Vec<(u64, usize)> = (0..max_position.div_ceil(segment_len))
        .map(|j| {
            let start = 1 + j * segment_len;
            let len = segment_len.min(max_position - start + 1) as usize;
            (start, len)
        })
        .collect();

    let mut index = Vec::new();
    let mut global_seen = std::collections::HashSet::new();
    let mut first_positions = Vec::new();
    for batch in segments.chunks(threads) {
        let encoded: Vec<Result<EncodedSegment>> = pool.install(|| {
            batch
                .par_iter()
                .map(|&(start, len)| encode_segment(&gen, start, len, options.format))
                .collect()
        });
        for seg in encoded {
            let seg = seg?;
            index.extend(seg.index_points.iter().map(|&(_, off)| written + off));
            for (pos, w) in seg.firsts {
                if global_seen.insert(w) {
                    first_positions.push(pos);
                }
            }
            sink.write_all(&seg.bytes)?;
            written += seg.bytes.len() as u64;
        }
    }
    sink.flush()?;

    let distinct_at = options
        .checkpoints
        .iter()
        .filter(|&&c| c >= 1 && c <= max_position)
        .map(|&c| (c, first_positions.partition_point(|&p| p <= c)))
        .collect();
    Ok(GenerationReport {
        max_position,
        format: options.format,
        words_written: max_position,
        bytes_written: written,
        distinct_at,
        index,
    })
}

pub fn index_path(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".idx");
    PathBuf::from(p)
}

/// Marker left behind when generation aborts.
pub fn partial_path(path: &Path) -> PathBuf {
    let mut p = path.as_os_str().to_owned();
    p.push(".partial");
    PathBuf::from(p)
}

fn write_index(path: &Path, header: &CorpusHeader, index: &[u64]) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    w.write_all(&header.to_bytes())?;
    w.write_all(&(index.len() as u64).to_le_bytes())?;
    for off in index {
        w.write_all(&off.to_le_bytes())?;
    }
    w.flush()?;
    Ok(())
}

/// Generates a corpus file and its index sidecar.
///
/// Data goes to `<path>.partial` first and is renamed on success; on failure
/// the `.partial` file remains as the marker of an aborted run.
pub fn generate_file(max_position: u64, path: &Path, options: &GenerateOptions) -> Result<GenerationReport> {
    let partial = partial_path(path);
    let report = {
        let mut w = BufWriter::with_capacity(1 << 20, File::create(&partial)?);
        let report = generate(max_position, &mut w, options)?;
        w.into_inner().map_err(|e| e.into_error())?.sync_all()?;
        report
    };
    fs::rename(&partial, path)?;
    write_index(
        &index_path(path),
        &CorpusHeader::new(options.format, max_position),
        &report.index,
    )?;
    Ok(report)
}

/// An opened corpus file.
#[derive(Debug, Clone)]
pub struct Corpus {
    path: PathBuf,
    format: Format,
    max_position: u64,
    // absolute byte offsets of positions 1 + j·INDEX_STRIDE
    index: Arc<Vec<u64>>,
}

impl Corpus {
    /// Opens a corpus, detecting the format from the leading bytes. The index
    /// sidecar is used when present and consistent; otherwise the file is
    /// scanned once to rebuild it.
    pub fn open(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let mut f = File::open(&path)?;
        let mut head = [0u8; HEADER_LEN];
        let got = read_up_to(&mut f, &mut head)?;
        let packed_header = if got >= 6 && &head[..6] == MAGIC {
            Some(CorpusHeader::from_bytes(&head[..got])?)
        } else {
            None
        };
        let format = packed_header.map_or(Format::Lines, |h| h.format);
        if format != Format::Packed && packed_header.is_some() {
            return Err(Error::format(None, "header on a non-packed file"));
        }

        if let Some((header, index)) = read_index(&index_path(&path))? {
            let consistent = header.format == format
                && packed_header.is_none_or(|h| h.max_position == header.max_position)
                && index.len() as u64 == header.max_position.div_ceil(INDEX_STRIDE);
            if consistent {
                return Ok(Corpus {
                    path,
                    format,
                    max_position: header.max_position,
                    index: Arc::new(index),
                });
            }
        }

        let (max_position, index) = scan_index(&path, format)?;
        if let Some(h) = packed_header {
            if h.max_position != max_position {
                return Err(Error::format(
                    Some(max_position),
                    format!("header claims {} words, file holds {max_position}", h.max_position),
                ));
            }
        }
        Ok(Corpus {
            path,
            format,
            max_position,
            index: Arc::new(index),
        })
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn format(&self) -> Format {
        self.format
    }

    pub fn max_position(&self) -> u64 {
        self.max_position
    }

    pub fn window(&self, start: u64, end: u64) -> Result<CorpusWindow> {
        check_window(start, end, self.max_position)?;
        Ok(CorpusWindow {
            start,
            end,
            source: Source::File(self.clone()),
        })
    }

    pub fn full(&self) -> CorpusWindow {
        CorpusWindow {
            start: 1,
            end: self.max_position,
            source: Source::File(self.clone()),
        }
    }

    /// Random access to a single position via the index.
    pub fn word_at(&self, position: u64) -> Result<DyckWord> {
        let mut it = self.window(position, position)?.words()?;
        it.next().expect("window of one word")
    }

    fn reader_at(&self, position: u64) -> Result<WordReader> {
        let block = (position - 1) / INDEX_STRIDE;
        let mut f = File::open(&self.path)?;
        f.seek(SeekFrom::Start(self.index[block as usize]))?;
        let mut reader = WordReader {
            inner: BufReader::with_capacity(1 << 16, f),
            format: self.format,
            next_position: 1 + block * INDEX_STRIDE,
            line: Vec::new(),
        };
        while reader.next_position < position {
            reader.read_word()?;
        }
        Ok(reader)
    }
}

fn read_up_to(r: &mut impl Read, buf: &mut [u8]) -> io::Result<usize> {
    let mut got = 0;
    while got < buf.len() {
        match r.read(&mut buf[got..])? {
            0 => break,
            k => got += k,
        }
    }
    Ok(got)
}

fn read_index(path: &Path) -> Result<Option<(CorpusHeader, Vec<u64>)>> {
    let bytes = match fs::read(path) {
        Ok(b) => b,
        Err(e) if e.kind() == io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let Ok(header) = CorpusHeader::from_bytes(&bytes) else {
        return Ok(None);
    };
    let rest = &bytes[HEADER_LEN..];
    if rest.len() < 8 {
        return Ok(None);
    }
    let count = u64::from_le_bytes(rest[..8].try_into().unwrap()) as usize;
    let body = &rest[8..];
    if body.len() != count * 8 {
        return Ok(None);
    }
    let index = body
        .chunks_exact(8)
        .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Ok(Some((header, index)))
}

fn scan_index(path: &Path, format: Format) -> Result<(u64, Vec<u64>)> {
    let mut f = BufReader::with_capacity(1 << 20, File::open(path)?);
    let mut offset = 0u64;
    if format == Format::Packed {
        f.seek(SeekFrom::Start(HEADER_LEN as u64))?;
        offset = HEADER_LEN as u64;
    }
    let mut reader = WordReader {
        inner: f,
        format,
        next_position: 1,
        line: Vec::new(),
    };
    let mut index = Vec::new();
    loop {
        if reader.at_eof()? {
            break;
        }
        if (reader.next_position - 1).is_multiple_of(INDEX_STRIDE) {
            index.push(offset);
        }
        offset += reader.read_word_sized()?.1;
    }
    Ok((reader.next_position - 1, index))
}

fn check_window(start: u64, end: u64, max: u64) -> Result<()> {
    if start < 1 || start > end || end > max {
        return Err(Error::range(format!(
            "window [{start}, {end}] not within [1, {max}]"
        )));
    }
    Ok(())
}

struct WordReader {
    inner: BufReader<File>,
    format: Format,
    next_position: u64,
    line: Vec<u8>,
}

impl WordReader {
    fn at_eof(&mut self) -> Result<bool> {
        Ok(self.inner.fill_buf()?.is_empty())
    }

    fn read_word(&mut self) -> Result<DyckWord> {
        self.read_word_sized().map(|(w, _)| w)
    }

    fn read_word_sized(&mut self) -> Result<(DyckWord, u64)> {
        let pos = self.next_position;
        let bad = |reason: String| Error::format(Some(pos), reason);
        let (word, size) = match self.format {
            Format::Lines => {
                self.line.clear();
                let n = self.inner.read_until(b'\n', &mut self.line)?;
                if n == 0 {
                    return Err(bad("unexpected end of file".into()));
                }
                if self.line.pop() != Some(b'\n') {
                    return Err(bad("last line not LF-terminated".into()));
                }
                if self.line.len() > MAX_WORD_BITS {
                    return Err(bad(format!("line longer than {MAX_WORD_BITS} symbols")));
                }
                let mut bits = 0u128;
                for &c in &self.line {
                    bits = (bits << 1)
                        | match c {
                            b'1' => 1,
                            b'0' => 0,
                            other => return Err(bad(format!("unexpected byte {other:#04x}"))),
                        };
                }
                let w = DyckWord::from_bits(bits, self.line.len()).map_err(|e| bad(e.to_string()))?;
                (w, n as u64)
            }
            Format::Packed => {
                let mut len = [0u8; 2];
                self.inner
                    .read_exact(&mut len)
                    .map_err(|_| bad("truncated length field".into()))?;
                let bits = u16::from_le_bytes(len) as usize;
                if bits > MAX_WORD_BITS || !bits.is_multiple_of(2) {
                    return Err(bad(format!("invalid bit length {bits}")));
                }
                let mut payload = [0u8; MAX_WORD_BITS / 8];
                let nbytes = bits.div_ceil(8);
                self.inner
                    .read_exact(&mut payload[..nbytes])
                    .map_err(|_| bad("truncated word".into()))?;
                let w = DyckWord::from_msb_bytes(bits, &payload[..nbytes]).map_err(|e| bad(e.to_string()))?;
                (w, 2 + nbytes as u64)
            }
        };
        self.next_position += 1;
        Ok((word, size))
    }
}

#[derive(Debug, Clone)]
enum Source {
    File(Corpus),
    Generated(TextGenerator),
}

/// The contiguous slice of the text from position `start` to `end` inclusive.
#[derive(Debug, Clone)]
pub struct CorpusWindow {
    start: u64,
    end: u64,
    source: Source,
}

impl CorpusWindow {
    /// A window computed on the fly from the factorizations, no file involved.
    pub fn generated(start: u64, end: u64) -> Result<Self> {
        if start < 1 || start > end {
            return Err(Error::range(format!("window [{start}, {end}] is empty or starts below 1")));
        }
        Ok(CorpusWindow {
            start,
            end,
            source: Source::Generated(TextGenerator::new(end)?),
        })
    }

    pub fn start(&self) -> u64 {
        self.start
    }

    pub fn end(&self) -> u64 {
        self.end
    }

    pub fn len(&self) -> u64 {
        self.end - self.start + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains_position(&self, position: u64) -> bool {
        (self.start..=self.end).contains(&position)
    }

    /// Narrower window over the same source.
    pub fn sub_window(&self, start: u64, end: u64) -> Result<CorpusWindow> {
        if start < self.start || end > self.end || start > end {
            return Err(Error::range(format!(
                "[{start}, {end}] not within window [{}, {}]",
                self.start, self.end
            )));
        }
        Ok(CorpusWindow {
            start,
            end,
            source: self.source.clone(),
        })
    }

    /// Sequential iteration over the stored words, position `start` first.
    pub fn words(&self) -> Result<WindowWords> {
        let inner = match &self.source {
            Source::File(c) => Inner::File(c.reader_at(self.start)?),
            Source::Generated(g) => Inner::Generated {
                gen: g.clone(),
                buf: Vec::new(),
                cursor: 0,
            },
        };
        Ok(WindowWords {
            inner,
            next: self.start,
            end: self.end,
        })
    }

    /// Materializes the window; convenient for small windows.
    pub fn to_vec(&self) -> Result<Vec<DyckWord>> {
        self.words()?.collect()
    }
}

enum Inner {
    File(WordReader),
    Generated {
        gen: TextGenerator,
        buf: Vec<DyckWord>,
        cursor: usize,
    },
}

pub struct WindowWords {
    inner: Inner,
    next: u64,
    end: u64,
}

const GENERATED_CHUNK: u64 = 1 << 16;

impl Iterator for WindowWords {
    type Item = Result<DyckWord>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.next > self.end {
            return None;
        }
        let item = match &mut self.inner {
            Inner::File(r) => r.read_word(),
            Inner::Generated { gen, buf, cursor } => {
                if *cursor == buf.len() {
                    let len = GENERATED_CHUNK.min(self.end - self.next + 1) as usize;
                    buf.clear();
                    if let Err(e) = gen.words_into(self.next, len, buf) {
                        self.next = self.end + 1;
                        return Some(Err(e));
                    }
                    *cursor = 0;
                }
                *cursor += 1;
                Ok(buf[*cursor - 1])
            }
        };
        match item {
            Ok(_) => self.next += 1,
            // Stop after the first error.
            Err(_) => self.next = self.end + 1,
        }
        Some(item)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = (self.end + 1).saturating_sub(self.next) as usize;
        (rest, Some(rest))
    }
}

/// Opens `[start, end]` of the corpus at `path`.
pub fn open_window(path: impl AsRef<Path>, start: u64, end: u64) -> Result<CorpusWindow> {
    Corpus::open(path)?.window(start, end)
}

/// Lines-format bytes of positions `1..=n`, computed without touching disk.
pub fn lines_bytes(n: u64) -> Result<Vec<u8>> {
    let mut out = Vec::new();
    for w in CorpusWindow::generated(1, n)?.words()? {
        write_word(&mut out, &w?, Format::Lines);
    }
    Ok(out)
}
