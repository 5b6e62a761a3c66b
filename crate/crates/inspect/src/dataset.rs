//! Dataset files: UTF-8, LF-terminated JSON lines. The first line is a
//! header, every following line one example:
//!
//! ```text
//! {"format":"inspect-dataset","version":1,"task":"CPX","class_count":10,...}
//! {"id":0,"split":"train","label":3,"text":"void f ( ) { ... }","sample_id":"m17"}
//! ```
//!
//! `target_token_index` appears on KTX examples only.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use inspect_core::taskgen::{KtxVocabulary, LabeledExample, LengthBins, TaskDataset};
use inspect_core::Task;
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub const FORMAT: &str = "inspect-dataset";
pub const VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetHeader {
    pub format: String,
    pub version: u32,
    pub task: Task,
    pub class_count: usize,
    pub label_schema: Vec<String>,
    pub seed: u64,
    pub n: usize,
    pub bin_boundaries: Option<LengthBins>,
    pub ktx_vocabulary: Option<KtxVocabulary>,
    /// SHA-256 of the corpus file the dataset was drawn from.
    pub corpus_hash: String,
    pub truncation_rate: f64,
}

impl DatasetHeader {
    pub fn new(dataset: &TaskDataset, corpus_hash: &str) -> Self {
        DatasetHeader {
            format: FORMAT.into(),
            version: VERSION,
            task: dataset.task,
            class_count: dataset.class_count,
            label_schema: dataset.label_schema.clone(),
            seed: dataset.seed,
            n: dataset.n,
            bin_boundaries: dataset.bin_boundaries.clone(),
            ktx_vocabulary: dataset.ktx_vocabulary.clone(),
            corpus_hash: corpus_hash.into(),
            truncation_rate: dataset.truncation_rate,
        }
    }
}

#[derive(Serialize)]
struct ExampleLine<'a> {
    id: u64,
    split: inspect_core::taskgen::Split,
    label: usize,
    text: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    target_token_index: Option<usize>,
    sample_id: &'a str,
}

pub fn write_dataset_to(w: &mut impl Write, dataset: &TaskDataset, corpus_hash: &str) -> std::io::Result<()> {
    serde_json::to_writer(&mut *w, &DatasetHeader::new(dataset, corpus_hash))?;
    w.write_all(b"\n")?;
    for e in &dataset.examples {
        let line = ExampleLine {
            id: e.id,
            split: e.split,
            label: e.label,
            text: &e.text,
            target_token_index: e.target_token_index,
            sample_id: &e.sample_id,
        };
        serde_json::to_writer(&mut *w, &line)?;
        w.write_all(b"\n")?;
    }
    Ok(())
}

pub fn write_dataset(path: &Path, dataset: &TaskDataset, corpus_hash: &str) -> Result<()> {
    let file = File::create(path).map_err(Error::io(path))?;
    let mut w = BufWriter::new(file);
    write_dataset_to(&mut w, dataset, corpus_hash).map_err(Error::io(path))?;
    w.flush().map_err(Error::io(path))
}

pub fn read_dataset(path: &Path) -> Result<(DatasetHeader, TaskDataset)> {
    let file = File::open(path).map_err(Error::io(path))?;
    let mut lines = BufReader::new(file).lines().enumerate();
    let parse_err = |line: usize, message: String| Error::Parse { path: path.to_path_buf(), line: line + 1, message };
    let (_, first) = lines.next().ok_or_else(|| parse_err(0, "empty dataset file".into()))?;
    let header: DatasetHeader =
        serde_json::from_str(&first.map_err(Error::io(path))?).map_err(|e| parse_err(0, e.to_string()))?;
    if header.format != FORMAT || header.version != VERSION {
        return Err(parse_err(0, format!("unsupported format {} v{}", header.format, header.version)));
    }
    let mut examples = Vec::new();
    for (i, line) in lines {
        let line = line.map_err(Error::io(path))?;
        if line.is_empty() {
            continue;
        }
        let e: LabeledExample = serde_json::from_str(&line).map_err(|e| parse_err(i, e.to_string()))?;
        if e.label >= header.class_count {
            return Err(parse_err(i, format!("label {} outside 0..{}", e.label, header.class_count)));
        }
        examples.push(e);
    }
    let dataset = TaskDataset {
        task: header.task,
        class_count: header.class_count,
        label_schema: header.label_schema.clone(),
        seed: header.seed,
        n: header.n,
        bin_boundaries: header.bin_boundaries.clone(),
        ktx_vocabulary: header.ktx_vocabulary.clone(),
        truncation_rate: header.truncation_rate,
        examples,
    };
    Ok((header, dataset))
}
