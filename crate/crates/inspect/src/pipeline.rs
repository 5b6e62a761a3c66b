//! Stage drivers shared by the CLI and the tests.

use std::fs;
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use inspect_core::embedstore::EmbeddingSet;
use inspect_core::probe::{probe_layer, Alignment, LayerReport, TrainConfig};
use inspect_core::taskgen::{build_dataset, label_metric, AnalyzedSample, DatasetConfig, LengthBins, TaskDataset};
use inspect_core::Task;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::{analyze_corpus, file_hash, read_corpus};
use crate::dataset::{read_dataset, write_dataset};
use crate::store::{read_header, read_layer};
use crate::{Error, Result};

/// Environment variable holding the worker thread count.
pub const WORKERS_ENV: &str = "INSPECT_WORKERS";

/// Runs `f` on a pool sized by `INSPECT_WORKERS` (default: all cores).
pub fn with_workers<T: Send>(f: impl FnOnce() -> T + Send) -> Result<T> {
    let threads = match std::env::var(WORKERS_ENV) {
        Ok(v) => v.trim().parse::<usize>().map_err(|_| Error::Invalid(format!("{WORKERS_ENV}={v:?} is not a count")))?,
        Err(_) => 0,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Invalid(e.to_string()))?;
    Ok(pool.install(f))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub task: Task,
    pub file: String,
    pub class_count: usize,
    pub examples: usize,
    pub bin_boundaries: Option<LengthBins>,
    pub truncation_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub seed: u64,
    pub n: usize,
    pub corpus_hash: String,
    pub corpus_samples: usize,
    pub lex_failures: usize,
    pub datasets: Vec<ManifestEntry>,
}

/// Builds the requested datasets, writes `<TASK>.jsonl` for each and a
/// `manifest.json` describing them all.
pub fn build_datasets(corpus: &Path, tasks: &[Task], n: usize, seed: u64, out: &Path) -> Result<Manifest> {
    let samples = read_corpus(corpus)?;
    let hash = file_hash(corpus)?;
    let analysis = analyze_corpus(&samples);
    fs::create_dir_all(out).map_err(Error::io(out))?;
    let config = DatasetConfig::new(n, seed);
    let built: Vec<Result<TaskDataset>> = tasks
        .par_iter()
        .map(|&task| build_dataset(task, &analysis.samples, &config).map_err(|source| Error::Dataset { task, source }))
        .collect();
    let mut manifest = Manifest {
        seed,
        n,
        corpus_hash: hash.clone(),
        corpus_samples: samples.len(),
        lex_failures: analysis.rejected.len(),
        datasets: Vec::new(),
    };
    for dataset in built {
        let dataset = dataset?;
        let file = format!("{}.jsonl", dataset.task.code());
        write_dataset(&out.join(&file), &dataset, &hash)?;
        manifest.datasets.push(ManifestEntry {
            task: dataset.task,
            file,
            class_count: dataset.class_count,
            examples: dataset.examples.len(),
            bin_boundaries: dataset.bin_boundaries.clone(),
            truncation_rate: dataset.truncation_rate,
        });
    }
    let path = out.join("manifest.json");
    let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Invalid(e.to_string()))?;
    fs::write(&path, json + "\n").map_err(Error::io(&path))?;
    Ok(manifest)
}

/// Probes the selected layers (model layer numbers, inclusive) of one
/// embedding file against its dataset. Layers are read from disk one at a
/// time and trained in parallel.
pub fn probe_files(
    dataset: &Path,
    embeddings: &Path,
    layers: Option<RangeInclusive<u32>>,
    config: &TrainConfig,
) -> Result<LayerReport> {
    let (_, dataset) = read_dataset(dataset)?;
    let header = read_header(embeddings)?;
    let first = header.first_layer;
    let last = first + header.layers - 1;
    let range = layers.unwrap_or(first..=last);
    if range.is_empty() || *range.start() < first || *range.end() > last {
        return Err(Error::Invalid(format!(
            "layers {}-{} outside stored range {first}-{last}",
            range.start(),
            range.end()
        )));
    }
    let context = format!("{} on {}", header.model_id, dataset.task);
    let results = range
        .collect::<Vec<u32>>()
        .par_iter()
        .map(|&layer| {
            let index = (layer - first) as usize;
            let (h, ids, matrix) = read_layer(embeddings, index)?;
            let single = EmbeddingSet {
                model_id: h.model_id,
                task_id: h.task_id,
                first_layer: layer,
                layers: 1,
                dim: matrix.cols,
                ids,
                values: matrix.data,
            };
            let probe_err = |source| Error::Probe { context: context.clone(), source };
            let alignment = Alignment::new(&single, &dataset).map_err(probe_err)?;
            probe_layer(&single, &alignment, 0, config).map_err(probe_err)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(LayerReport::new(&header.model_id, dataset.task.code(), dataset.class_count, config, results))
}

/// Corpus health summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub samples: usize,
    pub lexed: usize,
    pub lexability_rate: f64,
    pub excluded_trivial: usize,
    pub exclusion_rate: f64,
    pub structure_failures: usize,
    /// Per metric task: counts per class followed by one bucket for samples
    /// without a label. Each histogram sums to `lexed`.
    pub histograms: Vec<(Task, Vec<usize>)>,
}

pub fn diagnose(samples: usize, analysed: &[AnalyzedSample]) -> Diagnostics {
    let lexed = analysed.len();
    let excluded = analysed.iter().filter(|s| s.excluded).count();
    let rate = |k: usize, of: usize| if of == 0 { 0.0 } else { k as f64 / of as f64 };
    let histograms = [Task::OCU, Task::VCU, Task::CSC, Task::MXN, Task::CPX, Task::NPT]
        .into_iter()
        .map(|task| {
            let mut h = vec![0; task.class_count() + 1];
            for s in analysed {
                let label = s.metrics.as_ref().and_then(|m| label_metric(task, m, None).ok());
                h[label.unwrap_or(task.class_count())] += 1;
            }
            (task, h)
        })
        .collect();
    Diagnostics {
        samples,
        lexed,
        lexability_rate: rate(lexed, samples),
        excluded_trivial: excluded,
        exclusion_rate: rate(excluded, lexed),
        structure_failures: analysed.iter().filter(|s| s.metrics.is_none()).count(),
        histograms,
    }
}

pub fn validate_corpus(corpus: &Path) -> Result<Diagnostics> {
    let samples = read_corpus(corpus)?;
    let analysis = analyze_corpus(&samples);
    Ok(diagnose(samples.len(), &analysis.samples))
}

/// Writes uniform-random embeddings in `[-1, 1)` for every example of a
/// dataset; useful as a chance-level control.
pub fn random_embeddings(dataset: &TaskDataset, layers: usize, dim: usize, seed: u64) -> EmbeddingSet {
    use rand::Rng as _;
    let mut set = EmbeddingSet::new("random", dataset.task.code(), layers, dim);
    let mut rng = inspect_core::rng::derive(seed, "random-embeddings", dataset.task.code());
    let mut v = vec![0f32; layers * dim];
    for e in &dataset.examples {
        v.iter_mut().for_each(|x| *x = rng.random_range(-1.0..1.0));
        set.push(e.id, &v).expect("vector length matches");
    }
    set
}

/// Parses `5-8` or `7` into an inclusive layer range.
pub fn parse_layer_range(s: &str) -> Result<RangeInclusive<u32>> {
    let bad = || Error::Invalid(format!("bad layer range {s:?}; expected N or N-M"));
    let (a, b) = s.split_once('-').unwrap_or((s, s));
    let a: u32 = a.trim().parse().map_err(|_| bad())?;
    let b: u32 = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || a > b {
        return Err(bad());
    }
    Ok(a..=b)
}

pub fn report_path(out: &Path, model: &str, task: &str) -> PathBuf {
    out.join(format!("{}_{}.csv", crate::render::file_stem(model), crate::render::file_stem(task)))
}
