//! Linear probe: multinomial logistic regression on frozen features.
//!
//! Training uses Adam with one example per update, a seeded shuffle each
//! epoch, and early stopping on validation accuracy. All arithmetic is
//! `f64`; features arrive as `f32` and are optionally standardized with
//! train-split statistics.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::embedstore::{EmbeddingSet, Matrix};
use crate::rng::derive;
use crate::taskgen::{Split, TaskDataset};

pub const BATCH_SIZE: usize = 1;
pub const DEFAULT_LAMBDA_GRID: [f64; 6] = [1e-4, 1e-3, 1e-2, 1e-1, 1.0, 10.0];

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ProbeError {
    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(&'static str),
    #[error("sample mismatch: {missing} dataset ids absent from store, {extra} store ids absent from dataset")]
    SampleMismatch { missing: usize, extra: usize },
    #[error("empty l2 grid")]
    EmptyGrid,
    #[error("layer {layer} out of range 0..{layers}")]
    LayerOutOfRange { layer: usize, layers: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainConfig {
    pub max_epochs: usize,
    /// Consecutive non-improving validation epochs tolerated.
    pub tenacity: usize,
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    pub lambda_grid: Vec<f64>,
    pub standardize: bool,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            max_epochs: 20,
            tenacity: 5,
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            lambda_grid: DEFAULT_LAMBDA_GRID.to_vec(),
            standardize: true,
            seed: 0,
        }
    }
}

/// Per-dimension affine map fitted on training features.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub mean: Vec<f64>,
    /// Reciprocal standard deviation; 1 for constant dimensions.
    pub inv_std: Vec<f64>,
}

impl Standardizer {
    pub fn fit(features: &Matrix) -> Standardizer {
        let (n, d) = (features.rows, features.cols);
        let mut mean = vec![0.0f64; d];
        for i in 0..n {
            for (m, &v) in mean.iter_mut().zip(features.row(i)) {
                *m += f64::from(v);
            }
        }
        mean.iter_mut().for_each(|m| *m /= n.max(1) as f64);
        let mut var = vec![0.0f64; d];
        for i in 0..n {
            for ((s, &v), m) in var.iter_mut().zip(features.row(i)).zip(&mean) {
                let c = f64::from(v) - m;
                *s += c * c;
            }
        }
        let inv_std = var
            .iter()
            .map(|s| {
                let sd = libm::sqrt(s / n.max(1) as f64);
                if sd > 1e-12 { 1.0 / sd } else { 1.0 }
            })
            .collect();
        Standardizer { mean, inv_std }
    }

    pub fn apply(&self, row: &[f32], out: &mut [f64]) {
        for (((o, &v), m), s) in out.iter_mut().zip(row).zip(&self.mean).zip(&self.inv_std) {
            *o = (f64::from(v) - m) * s;
        }
    }
}

/// Weights `W` (`dim x classes`, row-major) and bias `b`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub dim: usize,
    pub classes: usize,
    pub weights: Vec<f64>,
    pub bias: Vec<f64>,
}

impl Params {
    pub fn zeros(dim: usize, classes: usize) -> Self {
        Params { dim, classes, weights: vec![0.0; dim * classes], bias: vec![0.0; classes] }
    }

    pub fn logits(&self, x: &[f64], out: &mut [f64]) {
        out.copy_from_slice(&self.bias);
        for (d, &xd) in x.iter().enumerate() {
            if xd != 0.0 {
                let row = &self.weights[d * self.classes..(d + 1) * self.classes];
                for (o, w) in out.iter_mut().zip(row) {
                    *o += xd * w;
                }
            }
        }
    }

    /// Index of the largest logit; ties go to the lowest class.
    pub fn predict(&self, x: &[f64], scratch: &mut [f64]) -> usize {
        self.logits(x, scratch);
        argmax(scratch)
    }

    /// Mean cross-entropy over the rows of `x` plus `lambda * ||W||^2`.
    pub fn objective(&self, x: &[f64], y: &[usize], lambda: f64) -> f64 {
        let mut z = vec![0.0; self.classes];
        let mut total = 0.0;
        for (row, &label) in x.chunks_exact(self.dim).zip(y) {
            self.logits(row, &mut z);
            total += log_sum_exp(&z) - z[label];
        }
        total / y.len().max(1) as f64 + lambda * self.weights.iter().map(|w| w * w).sum::<f64>()
    }

    /// Analytic gradient of [`Params::objective`] as `(dW, db)`.
    pub fn gradient(&self, x: &[f64], y: &[usize], lambda: f64) -> (Vec<f64>, Vec<f64>) {
        let mut gw: Vec<f64> = self.weights.iter().map(|w| 2.0 * lambda * w).collect();
        let mut gb = vec![0.0; self.classes];
        let mut z = vec![0.0; self.classes];
        let scale = 1.0 / y.len().max(1) as f64;
        for (row, &label) in x.chunks_exact(self.dim).zip(y) {
            self.logits(row, &mut z);
            softmax_in_place(&mut z);
            z[label] -= 1.0;
            for (d, &xd) in row.iter().enumerate() {
                for c in 0..self.classes {
                    gw[d * self.classes + c] += scale * xd * z[c];
                }
            }
            for c in 0..self.classes {
                gb[c] += scale * z[c];
            }
        }
        (gw, gb)
    }
}

fn argmax(v: &[f64]) -> usize {
    let mut best = 0;
    for (i, &x) in v.iter().enumerate() {
        if x > v[best] {
            best = i;
        }
    }
    best
}

fn log_sum_exp(z: &[f64]) -> f64 {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + libm::log(z.iter().map(|v| libm::exp(v - m)).sum::<f64>())
}

fn softmax_in_place(z: &mut [f64]) {
    let m = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in z.iter_mut() {
        *v = libm::exp(*v - m);
        sum += *v;
    }
    z.iter_mut().for_each(|v| *v /= sum);
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainMeta {
    pub epochs_run: usize,
    /// 1-based epoch whose parameters were kept.
    pub best_epoch: usize,
    pub val_accuracy: f64,
    /// Training objective after each epoch.
    pub epoch_losses: Vec<f64>,
    pub seed: u64,
    pub learning_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearProbe {
    pub params: Params,
    pub lambda: f64,
    pub standardizer: Option<Standardizer>,
    pub meta: TrainMeta,
}

impl LinearProbe {
    pub fn predict(&self, row: &[f32]) -> usize {
        let mut x = vec![0.0; self.params.dim];
        self.transform(row, &mut x);
        let mut z = vec![0.0; self.params.classes];
        self.params.predict(&x, &mut z)
    }

    fn transform(&self, row: &[f32], out: &mut [f64]) {
        match &self.standardizer {
            Some(s) => s.apply(row, out),
            None => out.iter_mut().zip(row).for_each(|(o, &v)| *o = f64::from(v)),
        }
    }
}

/// Features with one label per row.
#[derive(Debug, Clone, Copy)]
pub struct Labeled<'a> {
    pub features: &'a Matrix,
    pub labels: &'a [usize],
}

impl<'a> Labeled<'a> {
    pub fn new(features: &'a Matrix, labels: &'a [usize]) -> Self {
        Labeled { features, labels }
    }
}

/// Train and validation data in the probe's working representation.
struct Prepared {
    dim: usize,
    classes: usize,
    standardizer: Option<Standardizer>,
    train_x: Vec<f64>,
    train_y: Vec<usize>,
    val_x: Vec<f64>,
    val_y: Vec<usize>,
}

fn check(data: Labeled<'_>, classes: usize) -> Result<(), ProbeError> {
    let m = data.features;
    if m.data.len() != m.rows * m.cols {
        return Err(ProbeError::ShapeMismatch("matrix data length != rows * cols"));
    }
    if m.rows != data.labels.len() {
        return Err(ProbeError::ShapeMismatch("row count != label count"));
    }
    if data.labels.iter().any(|&l| l >= classes) {
        return Err(ProbeError::ShapeMismatch("label outside class range"));
    }
    Ok(())
}

fn prepare(train: Labeled<'_>, val: Labeled<'_>, classes: usize, standardize: bool) -> Result<Prepared, ProbeError> {
    check(train, classes)?;
    check(val, classes)?;
    if train.features.cols != val.features.cols {
        return Err(ProbeError::ShapeMismatch("train and validation widths differ"));
    }
    if classes < 2 || train.labels.len() < classes {
        return Err(ProbeError::DegenerateInput("fewer training rows than classes"));
    }
    let mut seen = vec![false; classes];
    train.labels.iter().for_each(|&l| seen[l] = true);
    if seen.iter().filter(|&&s| s).count() < 2 {
        return Err(ProbeError::DegenerateInput("single-class labels"));
    }
    let f = train.features;
    let first = f.row(0);
    if (1..f.rows).all(|i| f.row(i) == first) {
        return Err(ProbeError::DegenerateInput("constant features"));
    }
    let standardizer = standardize.then(|| Standardizer::fit(f));
    let convert = |m: &Matrix| -> Vec<f64> {
        match &standardizer {
            Some(s) => {
                let mut out = vec![0.0; m.data.len()];
                for (i, chunk) in out.chunks_exact_mut(m.cols.max(1)).enumerate() {
                    s.apply(m.row(i), chunk);
                }
                out
            }
            None => m.data.iter().map(|&v| f64::from(v)).collect(),
        }
    };
    Ok(Prepared {
        dim: f.cols,
        classes,
        train_x: convert(f),
        train_y: train.labels.to_vec(),
        val_x: convert(val.features),
        val_y: val.labels.to_vec(),
        standardizer,
    })
}

fn correct(params: &Params, x: &[f64], y: &[usize]) -> usize {
    let mut z = vec![0.0; params.classes];
    x.chunks_exact(params.dim.max(1)).zip(y).filter(|(row, &label)| params.predict(row, &mut z) == label).count()
}

fn fit(prep: &Prepared, lambda: f64, config: &TrainConfig) -> (LinearProbe, usize) {
    let (dim, classes) = (prep.dim, prep.classes);
    let mut params = Params::zeros(dim, classes);
    let mut m_w = vec![0.0; dim * classes];
    let mut v_w = vec![0.0; dim * classes];
    let mut m_b = vec![0.0; classes];
    let mut v_b = vec![0.0; classes];
    let (b1, b2, lr, eps) = (config.beta1, config.beta2, config.learning_rate, config.epsilon);
    let mut b1t = 1.0;
    let mut b2t = 1.0;

    let mut order: Vec<usize> = (0..prep.train_y.len()).collect();
    let mut rng = derive(config.seed, "probe-order", "");
    let mut z = vec![0.0; classes];

    let mut best = params.clone();
    let mut best_correct = None::<usize>;
    let mut best_epoch = 0;
    let mut stale = 0;
    let mut losses = Vec::new();
    let mut epochs_run = 0;

    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut rng);
        for &i in &order {
            let x = &prep.train_x[i * dim..(i + 1) * dim];
            params.logits(x, &mut z);
            softmax_in_place(&mut z);
            z[prep.train_y[i]] -= 1.0;

            b1t *= b1;
            b2t *= b2;
            let step = lr * libm::sqrt(1.0 - b2t) / (1.0 - b1t);
            let eps_hat = eps * libm::sqrt(1.0 - b2t);
            for (d, &xd) in x.iter().enumerate() {
                let base = d * classes;
                for (c, &zc) in z.iter().enumerate() {
                    let k = base + c;
                    let g = xd * zc + 2.0 * lambda * params.weights[k];
                    m_w[k] = b1 * m_w[k] + (1.0 - b1) * g;
                    v_w[k] = b2 * v_w[k] + (1.0 - b2) * g * g;
                    params.weights[k] -= step * m_w[k] / (libm::sqrt(v_w[k]) + eps_hat);
                }
            }
            for c in 0..classes {
                let g = z[c];
                m_b[c] = b1 * m_b[c] + (1.0 - b1) * g;
                v_b[c] = b2 * v_b[c] + (1.0 - b2) * g * g;
                params.bias[c] -= step * m_b[c] / (libm::sqrt(v_b[c]) + eps_hat);
            }
        }
        epochs_run = epoch;
        losses.push(params.objective(&prep.train_x, &prep.train_y, lambda));
        let val_correct = correct(&params, &prep.val_x, &prep.val_y);
        if best_correct.is_none_or(|b| val_correct > b) {
            best_correct = Some(val_correct);
            best = params.clone();
            best_epoch = epoch;
            stale = 0;
        } else {
            stale += 1;
            if stale >= config.tenacity {
                break;
            }
        }
    }

    let best_correct = best_correct.unwrap_or(0);
    let probe = LinearProbe {
        params: best,
        lambda,
        standardizer: prep.standardizer.clone(),
        meta: TrainMeta {
            epochs_run,
            best_epoch,
            val_accuracy: best_correct as f64 / prep.val_y.len().max(1) as f64,
            epoch_losses: losses,
            seed: config.seed,
            learning_rate: lr,
        },
    };
    (probe, best_correct)
}

/// Trains one probe with a fixed L2 coefficient.
pub fn train_probe(
    train: Labeled<'_>,
    val: Labeled<'_>,
    classes: usize,
    lambda: f64,
    config: &TrainConfig,
) -> Result<LinearProbe, ProbeError> {
    let prep = prepare(train, val, classes, config.standardize)?;
    Ok(fit(&prep, lambda, config).0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tuned {
    pub lambda: f64,
    pub probe: LinearProbe,
    /// `(lambda, validation accuracy)` for every grid point.
    pub scores: Vec<(f64, f64)>,
}

/// Trains one probe per grid value and keeps the best on validation
/// accuracy; ties go to the larger coefficient.
pub fn tune_l2(train: Labeled<'_>, val: Labeled<'_>, classes: usize, config: &TrainConfig) -> Result<Tuned, ProbeError> {
    if config.lambda_grid.is_empty() {
        return Err(ProbeError::EmptyGrid);
    }
    let prep = prepare(train, val, classes, config.standardize)?;
    let mut best: Option<(usize, LinearProbe)> = None;
    let mut scores = Vec::with_capacity(config.lambda_grid.len());
    for &lambda in &config.lambda_grid {
        let (probe, hits) = fit(&prep, lambda, config);
        scores.push((lambda, probe.meta.val_accuracy));
        let better = match &best {
            None => true,
            Some((h, p)) => hits > *h || (hits == *h && lambda > p.lambda),
        };
        if better {
            best = Some((hits, probe));
        }
    }
    let (_, probe) = best.expect("grid is not empty");
    Ok(Tuned { lambda: probe.lambda, probe, scores })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation {
    pub accuracy: f64,
    /// `confusion[true][predicted]`.
    pub confusion: Vec<Vec<u64>>,
}

pub fn evaluate(probe: &LinearProbe, features: &Matrix, labels: &[usize]) -> Result<Evaluation, ProbeError> {
    let classes = probe.params.classes;
    check(Labeled::new(features, labels), classes)?;
    if features.cols != probe.params.dim {
        return Err(ProbeError::ShapeMismatch("feature width != probe input width"));
    }
    let mut confusion = vec![vec![0u64; classes]; classes];
    let mut x = vec![0.0; probe.params.dim];
    let mut z = vec![0.0; classes];
    for (i, &label) in labels.iter().enumerate() {
        probe.transform(features.row(i), &mut x);
        confusion[label][probe.params.predict(&x, &mut z)] += 1;
    }
    let hits: u64 = (0..classes).map(|c| confusion[c][c]).sum();
    let accuracy = if labels.is_empty() { 0.0 } else { hits as f64 / labels.len() as f64 };
    Ok(Evaluation { accuracy, confusion })
}

/// Store rows and labels for each split of a dataset.
#[derive(Debug, Clone, PartialEq)]
pub struct Alignment {
    pub classes: usize,
    pub rows: [Vec<usize>; 3],
    pub labels: [Vec<usize>; 3],
}

impl Alignment {
    /// Matches dataset example ids to store records; the id sets must be
    /// equal.
    pub fn new(store: &EmbeddingSet, dataset: &TaskDataset) -> Result<Alignment, ProbeError> {
        let index: BTreeMap<u64, usize> = store.ids.iter().enumerate().map(|(row, &id)| (id, row)).collect();
        let mut rows: [Vec<usize>; 3] = Default::default();
        let mut labels: [Vec<usize>; 3] = Default::default();
        let mut missing = 0;
        for ex in &dataset.examples {
            match index.get(&ex.id) {
                Some(&row) => {
                    let s = split_index(ex.split);
                    rows[s].push(row);
                    labels[s].push(ex.label);
                }
                None => missing += 1,
            }
        }
        let matched: usize = rows.iter().map(Vec::len).sum();
        let extra = index.len() - matched.min(index.len());
        if missing > 0 || extra > 0 || store.ids.len() != index.len() {
            return Err(ProbeError::SampleMismatch { missing, extra });
        }
        Ok(Alignment { classes: dataset.class_count, rows, labels })
    }

    pub fn gather(&self, store: &EmbeddingSet, layer: usize, split: Split) -> Matrix {
        let rows = &self.rows[split_index(split)];
        let mut data = Vec::with_capacity(rows.len() * store.dim);
        for &r in rows {
            data.extend_from_slice(store.vector(r, layer));
        }
        Matrix { rows: rows.len(), cols: store.dim, data }
    }

    pub fn labels(&self, split: Split) -> &[usize] {
        &self.labels[split_index(split)]
    }
}

fn split_index(split: Split) -> usize {
    match split {
        Split::Train => 0,
        Split::Val => 1,
        Split::Test => 2,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerResult {
    /// Model layer number (1 = first block output).
    pub layer: u32,
    pub accuracy: f64,
    pub lambda: f64,
    pub val_accuracy: f64,
    pub best_epoch: usize,
    pub epochs_run: usize,
    pub confusion: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LayerReport {
    pub model_id: String,
    pub task: String,
    pub class_count: usize,
    pub seed: u64,
    pub learning_rate: f64,
    pub standardized: bool,
    pub layers: Vec<LayerResult>,
    /// Layer number with the highest test accuracy (lowest on ties).
    pub best_layer: u32,
}

impl LayerReport {
    /// Assembles a report; results may arrive in any order.
    pub fn new(model_id: &str, task: &str, class_count: usize, config: &TrainConfig, mut layers: Vec<LayerResult>) -> Self {
        layers.sort_by_key(|r| r.layer);
        let mut best = layers.first().map(|r| (r.layer, r.accuracy));
        for r in &layers {
            if best.is_some_and(|(_, acc)| r.accuracy > acc) {
                best = Some((r.layer, r.accuracy));
            }
        }
        LayerReport {
            model_id: model_id.into(),
            task: task.into(),
            class_count,
            seed: config.seed,
            learning_rate: config.learning_rate,
            standardized: config.standardize,
            layers,
            best_layer: best.map_or(0, |(l, _)| l),
        }
    }

    pub fn best(&self) -> Option<&LayerResult> {
        self.layers.iter().find(|r| r.layer == self.best_layer)
    }
}

/// Tunes, trains and tests a probe on one stored layer (0-based index).
pub fn probe_layer(
    store: &EmbeddingSet,
    alignment: &Alignment,
    layer: usize,
    config: &TrainConfig,
) -> Result<LayerResult, ProbeError> {
    if layer >= store.layers {
        return Err(ProbeError::LayerOutOfRange { layer, layers: store.layers });
    }
    let train = alignment.gather(store, layer, Split::Train);
    let val = alignment.gather(store, layer, Split::Val);
    let test = alignment.gather(store, layer, Split::Test);
    let tuned = tune_l2(
        Labeled::new(&train, alignment.labels(Split::Train)),
        Labeled::new(&val, alignment.labels(Split::Val)),
        alignment.classes,
        config,
    )?;
    let eval = evaluate(&tuned.probe, &test, alignment.labels(Split::Test))?;
    Ok(LayerResult {
        layer: store.first_layer + layer as u32,
        accuracy: eval.accuracy,
        lambda: tuned.lambda,
        val_accuracy: tuned.probe.meta.val_accuracy,
        best_epoch: tuned.probe.meta.best_epoch,
        epochs_run: tuned.probe.meta.epochs_run,
        confusion: eval.confusion,
    })
}

/// Probes every stored layer sequentially.
pub fn probe_all_layers(store: &EmbeddingSet, dataset: &TaskDataset, config: &TrainConfig) -> Result<LayerReport, ProbeError> {
    let alignment = Alignment::new(store, dataset)?;
    let results = (0..store.layers).map(|l| probe_layer(store, &alignment, l, config)).collect::<Result<Vec<_>, _>>()?;
    Ok(LayerReport::new(&store.model_id, dataset.task.code(), dataset.class_count, config, results))
}
