//! Aggregation of per-layer probe results across models and tasks.
//!
//! Accuracies in a [`ResultsTable`] are percentages.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::probe::LayerReport;
use crate::task::Task;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ReportError {
    #[error("baseline model {0:?} not present")]
    MissingBaseline(String),
    #[error("no result for model {model:?} on task {task:?}")]
    Incomplete { model: String, task: String },
    #[error("duplicate result for model {model:?} on task {task:?}")]
    Duplicate { model: String, task: String },
    #[error("reports have differing layer counts")]
    MixedLayerCounts,
    #[error("grid shape does not match model and task lists")]
    Shape,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaskSummary {
    pub task: String,
    pub max: f64,
    /// Population standard deviation over all models except the baseline.
    pub std_dev: f64,
    /// Best accuracy of any model minus the baseline accuracy.
    pub delta: f64,
    pub max_rank: usize,
    pub std_rank: usize,
    pub delta_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSummary {
    pub model: String,
    /// Number of tasks on which the model ranks first, second and third.
    pub podium: [usize; 3],
    pub below_baseline: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultsTable {
    pub baseline: String,
    /// Sorted by model id.
    pub models: Vec<String>,
    pub tasks: Vec<String>,
    /// `accuracy[model][task]`, best layer, percent.
    pub accuracy: Vec<Vec<f64>>,
    /// `model_rank[model][task]`, 1-based; ties broken by model id.
    pub model_rank: Vec<Vec<usize>>,
    pub task_summaries: Vec<TaskSummary>,
    pub model_summaries: Vec<ModelSummary>,
}

fn task_order(code: &str) -> (usize, String) {
    let pos = code.parse::<Task>().map_or(usize::MAX, |t| t as usize);
    (pos, code.to_string())
}

/// Competition ranking ("1224"): one plus the number of strictly better
/// values.
fn competition_ranks(values: &[f64], higher_is_better: bool) -> Vec<usize> {
    values
        .iter()
        .map(|&v| 1 + values.iter().filter(|&&o| if higher_is_better { o > v } else { o < v }).count())
        .collect()
}

/// Snaps to 1e-9 so that float noise (`79.2 - 54.0 = 25.200000000000003`)
/// does not split ties between values that are equal in decimal.
fn snap(x: f64) -> f64 {
    libm::round(x * 1e9) / 1e9
}

impl ResultsTable {
    /// Builds the table from a full `models x tasks` grid of percentages.
    pub fn from_grid(
        models: &[String],
        tasks: &[String],
        grid: &[Vec<f64>],
        baseline: &str,
    ) -> Result<ResultsTable, ReportError> {
        if grid.len() != models.len() || grid.iter().any(|r| r.len() != tasks.len()) {
            return Err(ReportError::Shape);
        }
        let mut cells = BTreeMap::new();
        for (m, row) in models.iter().zip(grid) {
            for (t, &acc) in tasks.iter().zip(row) {
                if cells.insert((m.clone(), t.clone()), acc).is_some() {
                    return Err(ReportError::Duplicate { model: m.clone(), task: t.clone() });
                }
            }
        }
        Self::from_cells(cells, baseline)
    }

    fn from_cells(cells: BTreeMap<(String, String), f64>, baseline: &str) -> Result<ResultsTable, ReportError> {
        let mut models: Vec<String> = cells.keys().map(|(m, _)| m.clone()).collect();
        models.dedup();
        let mut tasks: Vec<String> = cells.keys().map(|(_, t)| t.clone()).collect();
        tasks.sort_by_key(|t| task_order(t));
        tasks.dedup();
        let base = models.iter().position(|m| m == baseline).ok_or_else(|| ReportError::MissingBaseline(baseline.into()))?;

        let mut accuracy = vec![vec![0.0; tasks.len()]; models.len()];
        for (mi, m) in models.iter().enumerate() {
            for (ti, t) in tasks.iter().enumerate() {
                accuracy[mi][ti] = *cells
                    .get(&(m.clone(), t.clone()))
                    .ok_or_else(|| ReportError::Incomplete { model: m.clone(), task: t.clone() })?;
            }
        }

        let mut model_rank = vec![vec![0; tasks.len()]; models.len()];
        let mut maxes = Vec::new();
        let mut stds = Vec::new();
        let mut deltas = Vec::new();
        for ti in 0..tasks.len() {
            let column: Vec<f64> = accuracy.iter().map(|row| row[ti]).collect();
            // Models are already sorted by id, so a stable sort breaks ties by id.
            let mut order: Vec<usize> = (0..models.len()).collect();
            order.sort_by(|&a, &b| column[b].total_cmp(&column[a]));
            for (r, &mi) in order.iter().enumerate() {
                model_rank[mi][ti] = r + 1;
            }
            let max = column.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let others: Vec<f64> = column.iter().enumerate().filter(|&(i, _)| i != base).map(|(_, &v)| v).collect();
            maxes.push(max);
            stds.push(population_std(&others));
            deltas.push(max - column[base]);
        }

        // Ranks compare full-precision values; two tasks that print the same
        // std-dev at one decimal can still rank apart.
        let r = |v: &[f64], hi| competition_ranks(&v.iter().map(|&x| snap(x)).collect::<Vec<_>>(), hi);
        let (max_rank, std_rank, delta_rank) = (r(&maxes, true), r(&stds, false), r(&deltas, true));
        let task_summaries = (0..tasks.len())
            .map(|ti| TaskSummary {
                task: tasks[ti].clone(),
                max: maxes[ti],
                std_dev: stds[ti],
                delta: deltas[ti],
                max_rank: max_rank[ti],
                std_rank: std_rank[ti],
                delta_rank: delta_rank[ti],
            })
            .collect();

        let model_summaries = models
            .iter()
            .enumerate()
            .map(|(mi, m)| {
                let mut podium = [0; 3];
                for &rank in &model_rank[mi] {
                    if rank <= 3 {
                        podium[rank - 1] += 1;
                    }
                }
                let below_baseline = (0..tasks.len()).filter(|&ti| accuracy[mi][ti] < accuracy[base][ti]).count();
                ModelSummary { model: m.clone(), podium, below_baseline }
            })
            .collect();

        Ok(ResultsTable {
            baseline: baseline.into(),
            models,
            tasks,
            accuracy,
            model_rank,
            task_summaries,
            model_summaries,
        })
    }

    pub fn get(&self, model: &str, task: &str) -> Option<f64> {
        let m = self.models.iter().position(|x| x == model)?;
        let t = self.tasks.iter().position(|x| x == task)?;
        Some(self.accuracy[m][t])
    }

    pub fn task(&self, task: &str) -> Option<&TaskSummary> {
        self.task_summaries.iter().find(|s| s.task == task)
    }

    pub fn model(&self, model: &str) -> Option<&ModelSummary> {
        self.model_summaries.iter().find(|s| s.model == model)
    }

    /// Baseline-normalized score of every non-baseline cell.
    pub fn normalized(&self) -> Vec<(String, String, Normalized)> {
        let base = self.models.iter().position(|m| *m == self.baseline).expect("baseline present");
        let mut out = Vec::new();
        for (mi, m) in self.models.iter().enumerate() {
            if mi == base {
                continue;
            }
            for (ti, t) in self.tasks.iter().enumerate() {
                out.push((m.clone(), t.clone(), normalize_vs_baseline(self.accuracy[mi][ti], self.accuracy[base][ti], 100.0)));
            }
        }
        out
    }
}

fn population_std(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    libm::sqrt(values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n)
}

/// Builds the results table from per-layer reports, taking the best layer
/// of each (model, task) pair.
pub fn summarize(reports: &[LayerReport], baseline: &str) -> Result<ResultsTable, ReportError> {
    let mut cells = BTreeMap::new();
    for r in reports {
        let best = r.best().map_or(0.0, |l| l.accuracy * 100.0);
        if cells.insert((r.model_id.clone(), r.task.clone()), best).is_some() {
            return Err(ReportError::Duplicate { model: r.model_id.clone(), task: r.task.clone() });
        }
    }
    ResultsTable::from_cells(cells, baseline)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Normalized {
    /// Share of the gap between baseline and ceiling that was closed, in
    /// percent.
    Score(f64),
    BelowBaseline(f64),
}

impl Normalized {
    pub fn value(self) -> f64 {
        match self {
            Normalized::Score(v) | Normalized::BelowBaseline(v) => v,
        }
    }
}

/// `100 * (accuracy - baseline) / (ceiling - baseline)`; negative scores
/// are flagged.
pub fn normalize_vs_baseline(accuracy: f64, baseline: f64, ceiling: f64) -> Normalized {
    let gap = ceiling - baseline;
    let score = if gap > 0.0 { 100.0 * (accuracy - baseline) / gap } else { 0.0 };
    if accuracy < baseline {
        Normalized::BelowBaseline(score)
    } else {
        Normalized::Score(score)
    }
}

/// Ranks of `values` from 1 (lowest) to `n` (highest); ties share their
/// average rank.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        i = j + 1;
    }
    ranks
}

/// Mean per-layer rank of one model across tasks. Within a task the best
/// layer gets the highest rank, so larger means better.
pub fn layer_rank_profile(reports: &[LayerReport]) -> Result<Vec<f64>, ReportError> {
    let Some(first) = reports.first() else {
        return Ok(Vec::new());
    };
    let layers: Vec<u32> = first.layers.iter().map(|l| l.layer).collect();
    let mut sum = vec![0.0; layers.len()];
    for r in reports {
        if r.layers.iter().map(|l| l.layer).ne(layers.iter().copied()) {
            return Err(ReportError::MixedLayerCounts);
        }
        let acc: Vec<f64> = r.layers.iter().map(|l| l.accuracy).collect();
        for (s, rank) in sum.iter_mut().zip(average_ranks(&acc)) {
            *s += rank;
        }
    }
    Ok(sum.into_iter().map(|s| s / reports.len() as f64).collect())
}

/// Number of colour steps in heatmaps.
pub const HEAT_BUCKETS: usize = 10;

/// Heatmap bucket: 0 at or below the chance floor (reddest),
/// `HEAT_BUCKETS - 1` at the ceiling (greenest).
pub fn heat_bucket(accuracy: f64, floor: f64, ceiling: f64) -> usize {
    if ceiling <= floor {
        return 0;
    }
    let t = ((accuracy - floor) / (ceiling - floor)).clamp(0.0, 1.0);
    let b = libm::floor(t * HEAT_BUCKETS as f64) as usize;
    b.min(HEAT_BUCKETS - 1)
}

/// RGB colour of a bucket on a red-yellow-green scale.
pub fn heat_color(bucket: usize) -> (u8, u8, u8) {
    let t = bucket.min(HEAT_BUCKETS - 1) as f64 / (HEAT_BUCKETS - 1) as f64;
    let (r, g) = if t < 0.5 { (1.0, 2.0 * t) } else { (2.0 * (1.0 - t), 1.0) };
    let to = |c: f64| libm::round(100.0 + 155.0 * c) as u8;
    (to(r), to(g), 100)
}
