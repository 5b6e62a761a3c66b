//! CSV and SVG output for layer reports and result tables.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use inspect_core::probe::LayerReport;
use inspect_core::report::{heat_bucket, heat_color, layer_rank_profile, Normalized, ResultsTable};
use inspect_core::Task;

use crate::{Error, Result};

/// File-name-safe form of a model or task id.
pub fn file_stem(id: &str) -> String {
    id.chars().map(|c| if c.is_ascii_alphanumeric() || "-_.".contains(c) { c } else { '_' }).collect()
}

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> Error + '_ {
    move |e| Error::Parse { path: path.to_path_buf(), line: e.position().map_or(0, |p| p.line() as usize), message: e.to_string() }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(Error::io(dir))
}

fn write_csv(path: &Path, header: &[String], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(header).map_err(csv_err(path))?;
    for r in rows {
        w.write_record(r).map_err(csv_err(path))?;
    }
    w.flush().map_err(Error::io(path))
}

fn strings(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

/// Writes `<model>_<task>.csv`, `<model>_<task>.json` and one confusion
/// matrix per layer under `confusion/`.
pub fn write_layer_report(dir: &Path, report: &LayerReport) -> Result<PathBuf> {
    create_dir(&dir.join("confusion"))?;
    let stem = format!("{}_{}", file_stem(&report.model_id), file_stem(&report.task));
    let rows: Vec<Vec<String>> = report
        .layers
        .iter()
        .map(|l| {
            vec![
                l.layer.to_string(),
                l.accuracy.to_string(),
                l.lambda.to_string(),
                l.best_epoch.to_string(),
                l.epochs_run.to_string(),
                l.val_accuracy.to_string(),
            ]
        })
        .collect();
    let csv_path = dir.join(format!("{stem}.csv"));
    write_csv(
        &csv_path,
        &strings(&["layer", "accuracy", "lambda", "early_stop_epoch", "epochs_run", "val_accuracy"]),
        &rows,
    )?;
    let json_path = dir.join(format!("{stem}.json"));
    let json = serde_json::to_string_pretty(report).map_err(|e| Error::Invalid(e.to_string()))?;
    fs::write(&json_path, json + "\n").map_err(Error::io(&json_path))?;
    for l in &report.layers {
        write_confusion(&dir.join("confusion").join(format!("{stem}_{}.csv", l.layer)), &l.confusion)?;
    }
    Ok(csv_path)
}

/// Rows are true classes, columns predicted classes.
pub fn write_confusion(path: &Path, confusion: &[Vec<u64>]) -> Result<()> {
    let header: Vec<String> =
        std::iter::once("true\\predicted".to_string()).chain((0..confusion.len()).map(|c| c.to_string())).collect();
    let rows: Vec<Vec<String>> = confusion
        .iter()
        .enumerate()
        .map(|(i, r)| std::iter::once(i.to_string()).chain(r.iter().map(u64::to_string)).collect())
        .collect();
    write_csv(path, &header, &rows)
}

pub fn read_layer_reports(dir: &Path) -> Result<Vec<LayerReport>> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .map_err(Error::io(dir))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    paths
        .iter()
        .map(|p| {
            let text = fs::read_to_string(p).map_err(Error::io(p))?;
            serde_json::from_str(&text).map_err(|e| Error::Parse { path: p.clone(), line: e.line(), message: e.to_string() })
        })
        .collect()
}

/// A `model,<task>...` accuracy grid in percent.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    pub models: Vec<String>,
    pub tasks: Vec<String>,
    pub values: Vec<Vec<f64>>,
}

pub fn read_grid(path: &Path) -> Result<Grid> {
    let mut r = csv::Reader::from_path(path).map_err(csv_err(path))?;
    let tasks: Vec<String> = r.headers().map_err(csv_err(path))?.iter().skip(1).map(str::to_string).collect();
    let mut grid = Grid { models: Vec::new(), tasks, values: Vec::new() };
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(csv_err(path))?;
        let bad = |message: String| Error::Parse { path: path.to_path_buf(), line: i + 2, message };
        let model = rec.get(0).ok_or_else(|| bad("missing model column".into()))?;
        let values = rec
            .iter()
            .skip(1)
            .map(|v| v.trim().parse::<f64>().map_err(|e| bad(format!("{v:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if values.len() != grid.tasks.len() {
            return Err(bad("row width differs from header".into()));
        }
        grid.models.push(model.to_string());
        grid.values.push(values);
    }
    Ok(grid)
}

pub fn write_grid(path: &Path, grid: &Grid) -> Result<()> {
    let header: Vec<String> = std::iter::once("model".to_string()).chain(grid.tasks.iter().cloned()).collect();
    let rows: Vec<Vec<String>> = grid
        .models
        .iter()
        .zip(&grid.values)
        .map(|(m, vals)| std::iter::once(m.clone()).chain(vals.iter().map(f64::to_string)).collect())
        .collect();
    write_csv(path, &header, &rows)
}

/// Writes results.csv, deltas.csv, models.csv and normalized.csv.
pub fn write_results(dir: &Path, table: &ResultsTable) -> Result<()> {
    create_dir(dir)?;
    let grid = Grid { models: table.models.clone(), tasks: table.tasks.clone(), values: table.accuracy.clone() };
    write_grid(&dir.join("results.csv"), &grid)?;

    let rows: Vec<Vec<String>> = table
        .task_summaries
        .iter()
        .map(|s| {
            vec![
                s.task.clone(),
                s.max.to_string(),
                s.max_rank.to_string(),
                s.std_dev.to_string(),
                s.std_rank.to_string(),
                s.delta.to_string(),
                s.delta_rank.to_string(),
            ]
        })
        .collect();
    write_csv(
        &dir.join("deltas.csv"),
        &strings(&["task", "max", "max_rank", "std_dev", "std_rank", "delta", "delta_rank"]),
        &rows,
    )?;

    let rows: Vec<Vec<String>> = table
        .model_summaries
        .iter()
        .map(|s| {
            let mut row = vec![s.model.clone()];
            row.extend(s.podium.iter().map(usize::to_string));
            row.push(s.below_baseline.to_string());
            row
        })
        .collect();
    write_csv(
        &dir.join("models.csv"),
        &strings(&["model", "rank_1", "rank_2", "rank_3", "below_baseline"]),
        &rows,
    )?;

    let rows: Vec<Vec<String>> = table
        .normalized()
        .into_iter()
        .map(|(m, t, n)| vec![m, t, n.value().to_string(), matches!(n, Normalized::BelowBaseline(_)).to_string()])
        .collect();
    write_csv(&dir.join("normalized.csv"), &strings(&["model", "task", "normalized", "below_baseline"]), &rows)
}

/// Writes layer_profiles.csv (`model,layer,mean_rank`) for every model.
pub fn write_layer_profiles(dir: &Path, reports: &[LayerReport]) -> Result<()> {
    let mut rows = Vec::new();
    for (model, group) in by_model(reports) {
        let profile = layer_rank_profile(&group)?;
        let layers = group.first().map(|r| r.layers.iter().map(|l| l.layer).collect::<Vec<_>>()).unwrap_or_default();
        for (layer, rank) in layers.iter().zip(profile) {
            rows.push(vec![model.clone(), layer.to_string(), rank.to_string()]);
        }
    }
    write_csv(&dir.join("layer_profiles.csv"), &strings(&["model", "layer", "mean_rank"]), &rows)
}

fn by_model(reports: &[LayerReport]) -> Vec<(String, Vec<LayerReport>)> {
    let mut groups: std::collections::BTreeMap<String, Vec<LayerReport>> = Default::default();
    for r in reports {
        groups.entry(r.model_id.clone()).or_default().push(r.clone());
    }
    groups.into_iter().collect()
}

/// Accuracy floor of a uniform guess for a task code, in percent.
pub fn chance_floor(task: &str) -> f64 {
    task.parse::<Task>().map_or(0.0, |t| t.chance_accuracy())
}

/// Layers-by-tasks heatmap of one model; cells scale from red at the
/// task's chance level to green at 100%.
pub fn heatmap_svg(model: &str, reports: &[LayerReport]) -> String {
    let mut reports: Vec<&LayerReport> = reports.iter().filter(|r| r.model_id == model).collect();
    reports.sort_by_key(|r| (r.task.parse::<Task>().map_or(usize::MAX, |t| t as usize), r.task.clone()));
    let mut layers: Vec<u32> = reports.iter().flat_map(|r| r.layers.iter().map(|l| l.layer)).collect();
    layers.sort_unstable();
    layers.dedup();

    let (cw, ch, left, top) = (56, 22, 64, 40);
    let width = left + cw * reports.len() + 10;
    let height = top + ch * layers.len() + 10;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" font-family="sans-serif" font-size="11">"#
    );
    let _ = writeln!(svg, r#"<text x="4" y="14" font-weight="bold">{}</text>"#, escape(model));
    for (ti, r) in reports.iter().enumerate() {
        let x = left + ti * cw + cw / 2;
        let _ = writeln!(svg, r#"<text x="{x}" y="{}" text-anchor="middle">{}</text>"#, top - 6, escape(&r.task));
    }
    for (li, layer) in layers.iter().enumerate() {
        let y = top + li * ch;
        let _ = writeln!(svg, r#"<text x="{}" y="{}" text-anchor="end">L{layer}</text>"#, left - 6, y + ch / 2 + 4);
        for (ti, r) in reports.iter().enumerate() {
            let Some(cell) = r.layers.iter().find(|l| l.layer == *layer) else { continue };
            let pct = cell.accuracy * 100.0;
            let (red, green, blue) = heat_color(heat_bucket(pct, chance_floor(&r.task), 100.0));
            let x = left + ti * cw;
            let _ = writeln!(
                svg,
                r##"<rect class="cell" x="{x}" y="{y}" width="{cw}" height="{ch}" fill="#{red:02x}{green:02x}{blue:02x}" stroke="white"/><text x="{}" y="{}" text-anchor="middle">{pct:.1}</text>"##,
                x + cw / 2,
                y + ch / 2 + 4
            );
        }
    }
    svg.push_str("</svg>\n");
    svg
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn write_heatmaps(dir: &Path, reports: &[LayerReport]) -> Result<()> {
    let heat = dir.join("heatmaps");
    create_dir(&heat)?;
    for (model, group) in by_model(reports) {
        let path = heat.join(format!("{}.svg", file_stem(&model)));
        fs::write(&path, heatmap_svg(&model, &group)).map_err(Error::io(&path))?;
    }
    Ok(())
}
