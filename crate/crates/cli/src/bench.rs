use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use ueds::dp::{run_dp, DpOptions};
use ueds::graph::parse_graph;
use ueds::pipeline::cover_decomposition;

#[derive(Debug, Clone, Default, Serialize)]
pub struct Row {
    pub instance: String,
    pub status: String,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub width: Option<usize>,
    pub gamma_prime: Option<usize>,
    pub max_table: Option<usize>,
    pub parse_ms: Option<f64>,
    pub decomp_ms: Option<f64>,
    pub dp_ms: Option<f64>,
}

fn ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn bench_file(path: &Path, max_width: usize) -> Row {
    let mut row = Row {
        instance: path
            .file_name()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default(),
        ..Row::default()
    };
    let t = Instant::now();
    let g = match fs::read_to_string(path)
        .map_err(|e| e.to_string())
        .and_then(|s| parse_graph(&s).map_err(|e| e.to_string()))
    {
        Ok(g) => g,
        Err(e) => {
            row.status = format!("error: {e}");
            return row;
        }
    };
    row.parse_ms = Some(ms(t));
    row.n = Some(g.n());
    row.m = Some(g.m());

    let t = Instant::now();
    let nd = match cover_decomposition(&g) {
        Ok(nd) => nd,
        Err(e) => {
            row.status = format!("error: {e}");
            return row;
        }
    };
    row.decomp_ms = Some(ms(t));
    row.width = Some(nd.width());
    if nd.width() + 1 > max_width {
        row.status = format!("skipped: bag size {} above cap {max_width}", nd.width() + 1);
        return row;
    }

    let t = Instant::now();
    match run_dp(&g, &nd, DpOptions::default()) {
        Ok(run) => {
            row.dp_ms = Some(ms(t));
            row.gamma_prime = Some(run.gamma_prime);
            row.max_table = Some(run.max_table);
            row.status = "ok".into();
        }
        Err(e) => row.status = format!("error: {e}"),
    }
    row
}

/// One row per `.gr` file, sorted by file name.
pub fn run(dir: &Path, max_width: usize) -> Result<Vec<Row>> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .with_context(|| format!("cannot read directory {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "gr"))
        .collect();
    files.sort();
    Ok(files.par_iter().map(|p| bench_file(p, max_width)).collect())
}

pub fn to_csv(rows: &[Row]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    if rows.is_empty() {
        w.write_record([
            "instance", "status", "n", "m", "width", "gamma_prime", "max_table", "parse_ms",
            "decomp_ms", "dp_ms",
        ])?;
    }
    for r in rows {
        w.serialize(r)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
