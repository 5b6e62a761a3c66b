//! Method corpus files: one JSON object per line,
//! `{"id": ..., "method_text": ..., "imports": [...]}`.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use inspect_core::lexer::LexError;
use inspect_core::taskgen::{analyze, AnalyzedSample, MethodSample};
use rayon::prelude::*;
use sha2::{Digest, Sha256};

use crate::{Error, Result};

pub fn read_corpus(path: &Path) -> Result<Vec<MethodSample>> {
    let file = File::open(path).map_err(Error::io(path))?;
    let mut out = Vec::new();
    let mut ids = HashSet::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(Error::io(path))?;
        if line.trim().is_empty() {
            continue;
        }
        let parse_err = |message: String| Error::Parse { path: path.to_path_buf(), line: i + 1, message };
        let sample: MethodSample = serde_json::from_str(&line).map_err(|e| parse_err(e.to_string()))?;
        if !ids.insert(sample.id.clone()) {
            return Err(parse_err(format!("duplicate id {:?}", sample.id)));
        }
        out.push(sample);
    }
    Ok(out)
}

pub fn write_corpus(path: &Path, samples: &[MethodSample]) -> Result<()> {
    let file = File::create(path).map_err(Error::io(path))?;
    let mut w = BufWriter::new(file);
    for s in samples {
        serde_json::to_writer(&mut w, s).map_err(|e| Error::Invalid(e.to_string()))?;
        w.write_all(b"\n").map_err(Error::io(path))?;
    }
    w.flush().map_err(Error::io(path))
}

/// Hex SHA-256 of a file's bytes.
pub fn file_hash(path: &Path) -> Result<String> {
    let mut file = File::open(path).map_err(Error::io(path))?;
    let mut hasher = Sha256::new();
    let mut buf = vec![0u8; 1 << 16];
    loop {
        let n = file.read(&mut buf).map_err(Error::io(path))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(hex::encode(hasher.finalize()))
}

/// Lexed corpus plus the samples the lexer rejected.
pub struct Analysis {
    pub samples: Vec<AnalyzedSample>,
    pub rejected: Vec<(String, LexError)>,
}

/// Lexes and measures every sample in parallel; output keeps corpus order.
pub fn analyze_corpus(samples: &[MethodSample]) -> Analysis {
    let results: Vec<_> = samples.par_iter().map(|s| (s.id.clone(), analyze(s))).collect();
    let mut out = Analysis { samples: Vec::with_capacity(results.len()), rejected: Vec::new() };
    for (id, r) in results {
        match r {
            Ok(a) => out.samples.push(a),
            Err(e) => out.rejected.push((id, e)),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_and_duplicates() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.jsonl");
        let samples = vec![
            MethodSample { id: "a".into(), source: "void f() { g(); }".into(), imports: vec!["import java.util.List;".into()] },
            MethodSample { id: "b".into(), source: "int h() { return \"\\n\".length(); }".into(), imports: vec![] },
        ];
        write_corpus(&path, &samples).unwrap();
        assert_eq!(read_corpus(&path).unwrap(), samples);
        assert_eq!(file_hash(&path).unwrap().len(), 64);

        std::fs::write(&path, "{\"id\":\"x\",\"method_text\":\"\"}\n{\"id\":\"x\",\"method_text\":\"\"}\n").unwrap();
        assert!(matches!(read_corpus(&path), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn analysis_reports_lex_failures() {
        let samples = vec![
            MethodSample { id: "ok".into(), source: "void f() { }".into(), imports: vec![] },
            MethodSample { id: "bad".into(), source: "void f() { \"open }".into(), imports: vec![] },
        ];
        let a = analyze_corpus(&samples);
        assert_eq!(a.samples.len(), 1);
        assert_eq!(a.rejected[0].0, "bad");
    }
}
