use std::fs;

use natext::corpus::{self, Corpus, CorpusWindow, Format, GenerateOptions, INDEX_STRIDE};
use natext::tree;

fn opts(format: Format, threads: usize, segment_len: usize) -> GenerateOptions {
    GenerateOptions {
        format,
        threads,
        segment_len,
        ..GenerateOptions::default()
    }
}

#[test]
fn thread_count_does_not_change_bytes() {
    for format in [Format::Lines, Format::Packed] {
        let mut one = Vec::new();
        let mut eight = Vec::new();
        corpus::generate(100_000, &mut one, &opts(format, 1, 4096)).unwrap();
        corpus::generate(100_000, &mut eight, &opts(format, 8, 4096)).unwrap();
        assert_eq!(one, eight, "{format:?}");
        let mut big_segments = Vec::new();
        corpus::generate(100_000, &mut big_segments, &opts(format, 3, 1 << 20)).unwrap();
        assert_eq!(one, big_segments, "{format:?}");
    }
}

#[test]
fn file_reencodes_to_direct_encoding() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.nt");
    let report = corpus::generate_file(100_000, &path, &opts(Format::Lines, 2, 10_000)).unwrap();
    assert!(!corpus::partial_path(&path).exists());
    assert!(corpus::index_path(&path).exists());
    assert_eq!(report.bytes_written, fs::metadata(&path).unwrap().len());
    let c = Corpus::open(&path).unwrap();
    assert_eq!(c.max_position(), 100_000);
    for (i, w) in c.full().words().unwrap().enumerate() {
        assert_eq!(w.unwrap(), tree::word_of(i as u64 + 1).unwrap());
    }
}

#[test]
fn lines_and_packed_hold_the_same_text() {
    let dir = tempfile::tempdir().unwrap();
    let lines = dir.path().join("a.nt");
    let packed = dir.path().join("a.ntp");
    corpus::generate_file(10_000, &lines, &opts(Format::Lines, 1, 3000)).unwrap();
    corpus::generate_file(10_000, &packed, &opts(Format::Packed, 1, 3000)).unwrap();
    let a = Corpus::open(&lines).unwrap();
    let b = Corpus::open(&packed).unwrap();
    assert_eq!(a.format(), Format::Lines);
    assert_eq!(b.format(), Format::Packed);
    assert_eq!(a.full().to_vec().unwrap(), b.full().to_vec().unwrap());
}

#[test]
fn windows_across_index_blocks() {
    let n = 3 * INDEX_STRIDE + 17;
    let dir = tempfile::tempdir().unwrap();
    for format in [Format::Lines, Format::Packed] {
        let path = dir.path().join(format!("w-{format:?}"));
        corpus::generate_file(n, &path, &opts(format, 2, 50_000)).unwrap();
        let c = Corpus::open(&path).unwrap();
        for (l, r) in [(1, 1), (INDEX_STRIDE, INDEX_STRIDE + 2), (INDEX_STRIDE + 1, 2 * INDEX_STRIDE + 5), (n - 3, n)] {
            let got = c.window(l, r).unwrap().to_vec().unwrap();
            let direct = CorpusWindow::generated(l, r).unwrap().to_vec().unwrap();
            assert_eq!(got, direct, "{format:?} [{l}, {r}]");
        }
        // Without the sidecar the index is rebuilt by a scan.
        fs::remove_file(corpus::index_path(&path)).unwrap();
        let c = Corpus::open(&path).unwrap();
        assert_eq!(c.max_position(), n);
        assert_eq!(c.word_at(2 * INDEX_STRIDE + 1).unwrap(), tree::word_of(2 * INDEX_STRIDE + 1).unwrap());
        assert!(c.window(1, n + 1).is_err());
    }
}

#[test]
fn corrupt_files_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.nt");
    fs::write(&path, b"\n10\n10\n1120\n").unwrap();
    let err = Corpus::open(&path).and_then(|c| c.full().to_vec()).unwrap_err();
    assert!(matches!(err, natext::Error::Format { position: Some(4), .. }), "{err}");

    let packed = dir.path().join("short.ntp");
    corpus::generate_file(100, &packed, &opts(Format::Packed, 1, 100)).unwrap();
    let bytes = fs::read(&packed).unwrap();
    fs::write(&packed, &bytes[..bytes.len() - 1]).unwrap();
    fs::remove_file(corpus::index_path(&packed)).unwrap();
    assert!(Corpus::open(&packed).and_then(|c| c.full().to_vec()).is_err());
}
