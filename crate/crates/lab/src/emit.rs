//! CSV and JSON serialization of datasets.

use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value as Json};

use crate::config::SweepConfig;
use crate::sweep::{Dataset, Value, WignerOutput};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    /// `.json` selects JSON; anything else CSV.
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("json") => Self::Json,
            _ => Self::Csv,
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EmitError {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: io::Error,
    },
    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),
    #[error("Wigner grids in CSV form are written as companion files and need --out")]
    NeedsPath,
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> EmitError + '_ {
    move |source| EmitError::Io { path: path.display().to_string(), source }
}

fn cell(v: &Value) -> String {
    v.to_string()
}

pub fn write_table<W: Write>(dataset: &Dataset, out: W) -> Result<(), EmitError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(dataset.columns())?;
    for r in &dataset.records {
        w.write_record(r.fields.iter().map(|(_, v)| cell(v)))?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

fn json_value(v: &Value) -> Json {
    match v {
        Value::Num(x) => json!(x),
        Value::Text(s) => json!(s),
    }
}

fn wigner_json(w: &WignerOutput) -> Json {
    json!({
        "label": w.label,
        "sweep_value": w.sweep_value,
        "kz": w.kz,
        "axes": [w.grid.axes[0].label(), w.grid.axes[1].label()],
        "x": w.grid.x,
        "y": w.grid.y,
        "values": w.grid.values,
        "covariance": w.grid.covariance,
        "estimated_covariance": w.grid.estimated_covariance(),
        "riemann_sum": w.grid.riemann_sum(),
    })
}

pub fn to_json(dataset: &Dataset) -> Json {
    let records: Vec<Json> = dataset
        .records
        .iter()
        .map(|r| {
            let mut m = Map::new();
            for (k, v) in &r.fields {
                m.insert(k.clone(), json_value(v));
            }
            Json::Object(m)
        })
        .collect();
    json!({
        "meta": {
            "generator": concat!("gausson-lab ", env!("CARGO_PKG_VERSION")),
            "config": dataset.config,
        },
        "columns": dataset.columns(),
        "records": records,
        "wigner": dataset.wigner.iter().map(wigner_json).collect::<Vec<_>>(),
    })
}

/// Reads `meta.config` back from emitted JSON.
pub fn config_from_json(text: &str) -> Result<SweepConfig, serde_json::Error> {
    let doc: Json = serde_json::from_str(text)?;
    serde_json::from_value(doc["meta"]["config"].clone())
}

fn companion(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    path.with_file_name(format!("{stem}.{suffix}.csv"))
}

/// Grid `i` goes to `<stem>.wigner-<i>.csv` as a bare matrix (row per `x`),
/// with its axes in `.x.csv`/`.y.csv` and an index in `<stem>.wigner-index.csv`.
fn write_wigner_files(dataset: &Dataset, path: &Path) -> Result<Vec<PathBuf>, EmitError> {
    if dataset.wigner.is_empty() {
        return Ok(Vec::new());
    }
    let mut written = Vec::new();
    let index_path = companion(path, "wigner-index");
    let mut index = csv::Writer::from_path(&index_path)?;
    index.write_record(["grid", "label", "sweep_value", "kz", "x_axis", "y_axis", "matrix", "x", "y", "riemann_sum"])?;
    for (i, w) in dataset.wigner.iter().enumerate() {
        let matrix = companion(path, &format!("wigner-{i}"));
        let xs = companion(path, &format!("wigner-{i}.x"));
        let ys = companion(path, &format!("wigner-{i}.y"));
        let mut m = csv::WriterBuilder::new().has_headers(false).from_path(&matrix)?;
        for row in &w.grid.values {
            m.write_record(row.iter().map(|v| v.to_string()))?;
        }
        m.flush().map_err(io_err(&matrix))?;
        for (p, label, values) in [(&xs, w.grid.axes[0].label(), &w.grid.x), (&ys, w.grid.axes[1].label(), &w.grid.y)] {
            let mut a = csv::Writer::from_path(p)?;
            a.write_record([label])?;
            for v in values {
                a.write_record([v.to_string()])?;
            }
            a.flush().map_err(io_err(p))?;
        }
        let name = |p: &Path| p.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        index.write_record([
            i.to_string(),
            w.label.clone(),
            w.sweep_value.to_string(),
            w.kz.to_string(),
            w.grid.axes[0].label(),
            w.grid.axes[1].label(),
            name(&matrix),
            name(&xs),
            name(&ys),
            w.grid.riemann_sum().to_string(),
        ])?;
        written.extend([matrix, xs, ys]);
    }
    index.flush().map_err(io_err(&index_path))?;
    written.push(index_path);
    Ok(written)
}

/// Writes the dataset to `path`, or to stdout when `path` is `None`.
/// Returns every file written.
pub fn emit(dataset: &Dataset, format: Format, path: Option<&Path>) -> Result<Vec<PathBuf>, EmitError> {
    match (format, path) {
        (Format::Json, None) => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            serde_json::to_writer_pretty(&mut lock, &to_json(dataset)).map_err(io::Error::from).map_err(io_err(Path::new("<stdout>")))?;
            writeln!(lock).map_err(io_err(Path::new("<stdout>")))?;
            Ok(Vec::new())
        }
        (Format::Json, Some(p)) => {
            let mut f = File::create(p).map_err(io_err(p))?;
            serde_json::to_writer_pretty(&mut f, &to_json(dataset)).map_err(io::Error::from).map_err(io_err(p))?;
            writeln!(f).map_err(io_err(p))?;
            Ok(vec![p.to_path_buf()])
        }
        (Format::Csv, None) => {
            if !dataset.wigner.is_empty() {
                return Err(EmitError::NeedsPath);
            }
            write_table(dataset, io::stdout().lock())?;
            Ok(Vec::new())
        }
        (Format::Csv, Some(p)) => {
            let f = File::create(p).map_err(io_err(p))?;
            write_table(dataset, io::BufWriter::new(f))?;
            let mut written = vec![p.to_path_buf()];
            written.extend(write_wigner_files(dataset, p)?);
            Ok(written)
        }
    }
}
