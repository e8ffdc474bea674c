//! Readers and writers for the three input formats.
//!
//! * `points_csv`: one row per point, comma separated, `.` decimals. An
//!   optional header row is detected when its first field is not a number;
//!   a header whose last column is `weight` marks that column as weights.
//! * `matrix_txt`: the count `n`, then `n * n` whitespace separated reals.
//! * `edges_txt`: `u v w` lines. `#clients: a b c` lists the client
//!   vertices (all vertices otherwise); other `#` lines are comments.

use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use clap::ValueEnum;
use kz_coreset::metric::GraphMetric;
use kz_coreset::{MetricBackend, PointSet};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Format {
    PointsCsv,
    MatrixTxt,
    EdgesTxt,
}

/// Reads `path` in `format`; Euclidean points use the `p`-norm.
pub fn ingest(path: &Path, format: Format, p: f64) -> Result<PointSet<f64>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse(&text, format, p)
}

pub fn parse(text: &str, format: Format, p: f64) -> Result<PointSet<f64>, CliError> {
    match format {
        Format::PointsCsv => parse_points_csv(text, p),
        Format::MatrixTxt => parse_matrix_txt(text),
        Format::EdgesTxt => parse_edges_txt(text),
    }
}

fn number<T: FromStr>(field: &str, line: u64, what: &str) -> Result<T, CliError> {
    field
        .trim()
        .parse()
        .map_err(|_| CliError::Input(format!("line {line}: cannot parse {what} {:?}", field.trim())))
}

pub fn parse_points_csv(text: &str, p: f64) -> Result<PointSet<f64>, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut coords: Vec<Vec<f64>> = Vec::new();
    let mut weights: Vec<f64> = Vec::new();
    let mut weighted = false;
    let mut width: Option<usize> = None;
    for (row, record) in reader.records().enumerate() {
        let record = record.map_err(|e| CliError::Input(format!("CSV: {e}")))?;
        let line = record.position().map_or(row as u64 + 1, |pos| pos.line());
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        if width.is_none() && coords.is_empty() && record.get(0).is_some_and(|f| f.trim().parse::<f64>().is_err()) {
            weighted = record.iter().next_back().is_some_and(|f| f.trim().eq_ignore_ascii_case("weight"));
            width = Some(record.len());
            continue;
        }
        let expected = *width.get_or_insert(record.len());
        if record.len() != expected {
            return Err(CliError::Input(format!(
                "line {line}: {} fields, expected {expected}",
                record.len()
            )));
        }
        let values = record
            .iter()
            .map(|f| number::<f64>(f, line, "value"))
            .collect::<Result<Vec<_>, _>>()?;
        let (point, weight) = if weighted {
            let (w, point) = values.split_last().expect("header fixes at least one column");
            (point.to_vec(), *w)
        } else {
            (values, 1.0)
        };
        if !(weight > 0.0 && weight.is_finite()) {
            return Err(CliError::Input(format!("line {line}: non-positive weight {weight}")));
        }
        coords.push(point);
        weights.push(weight);
    }
    let backend = Arc::new(MetricBackend::euclidean(&coords, p)?);
    Ok(PointSet::with_weights(backend, weights)?)
}

pub fn parse_matrix_txt(text: &str) -> Result<PointSet<f64>, CliError> {
    let mut tokens = text
        .lines()
        .enumerate()
        .flat_map(|(i, l)| l.split_whitespace().map(move |t| (i as u64 + 1, t)));
    let (line, first) = tokens.next().ok_or_else(|| CliError::Input("empty matrix file".into()))?;
    let n: usize = number(first, line, "matrix size")?;
    let mut data = Vec::with_capacity(n.saturating_mul(n));
    for (line, t) in tokens {
        if data.len() == n * n {
            return Err(CliError::Input(format!("line {line}: more than {n}x{n} entries")));
        }
        data.push(number::<f64>(t, line, "entry")?);
    }
    if data.len() != n * n {
        return Err(CliError::Input(format!("matrix has {} entries, expected {}", data.len(), n * n)));
    }
    let backend = Arc::new(MetricBackend::matrix(n, data)?);
    Ok(PointSet::unweighted(backend)?)
}

pub fn parse_edges_txt(text: &str) -> Result<PointSet<f64>, CliError> {
    let mut edges: Vec<(usize, usize, f64)> = Vec::new();
    let mut clients: Option<Vec<usize>> = None;
    let mut vertex_count = 0usize;
    for (i, raw) in text.lines().enumerate() {
        let line = i as u64 + 1;
        let trimmed = raw.trim();
        if let Some(rest) = trimmed.strip_prefix('#') {
            if let Some(list) = rest.trim_start().strip_prefix("clients:") {
                if clients.is_some() {
                    return Err(CliError::Input(format!("line {line}: repeated #clients: header")));
                }
                let ids = list
                    .split(|c: char| c.is_whitespace() || c == ',')
                    .filter(|t| !t.is_empty())
                    .map(|t| number::<usize>(t, line, "client vertex"))
                    .collect::<Result<Vec<_>, _>>()?;
                if ids.is_empty() {
                    return Err(CliError::Input(format!("line {line}: #clients: header lists no vertices")));
                }
                clients = Some(ids);
            }
            continue;
        }
        if trimmed.is_empty() {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        if fields.len() != 3 {
            return Err(CliError::Input(format!("line {line}: expected `u v w`, got {} fields", fields.len())));
        }
        let u: usize = number(fields[0], line, "vertex")?;
        let v: usize = number(fields[1], line, "vertex")?;
        let w: f64 = number(fields[2], line, "weight")?;
        if !(w > 0.0 && w.is_finite()) {
            return Err(CliError::Input(format!("line {line}: non-positive edge weight {w}")));
        }
        vertex_count = vertex_count.max(u + 1).max(v + 1);
        edges.push((u, v, w));
    }
    if let Some(ids) = &clients {
        vertex_count = vertex_count.max(ids.iter().max().map_or(0, |m| m + 1));
    }
    let backend = Arc::new(MetricBackend::graph(vertex_count, &edges)?);
    let sites = clients.unwrap_or_else(|| (0..vertex_count).collect());
    let weights = vec![1.0; sites.len()];
    Ok(PointSet::new(backend, sites, weights)?)
}

/// Writes `points` in the format matching its backend. Matrix and graph
/// formats carry no weights, so those must be unit.
pub fn serialize(points: &PointSet<f64>) -> Result<(Format, String), CliError> {
    let unit = points.weights().iter().all(|&w| w == 1.0);
    let mut out = String::new();
    match points.backend().as_ref() {
        MetricBackend::Euclidean(e) => {
            if points.sites().iter().enumerate().any(|(i, &s)| i != s) || points.len() != e.len() {
                return Err(CliError::Input("points_csv needs every site as a client, in order".into()));
            }
            let header: Vec<String> = (0..e.dim()).map(|d| format!("x{d}")).chain(Some("weight".into())).collect();
            let _ = writeln!(out, "{}", header.join(","));
            for (i, &w) in points.weights().iter().enumerate() {
                let row: Vec<String> = e.point(i).iter().map(|x| x.to_string()).chain(Some(w.to_string())).collect();
                let _ = writeln!(out, "{}", row.join(","));
            }
            Ok((Format::PointsCsv, out))
        }
        MetricBackend::Matrix(m) => {
            if !unit || points.len() != m.len() {
                return Err(CliError::Input("matrix_txt holds only unit-weight clients on every row".into()));
            }
            let _ = writeln!(out, "{}", m.len());
            for i in 0..m.len() {
                let row: Vec<String> = (0..m.len()).map(|j| m.get(i, j).to_string()).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
            Ok((Format::MatrixTxt, out))
        }
        MetricBackend::Graph(g) => {
            if !unit {
                return Err(CliError::Input("edges_txt holds only unit-weight clients".into()));
            }
            write_graph(&mut out, g, points.sites());
            Ok((Format::EdgesTxt, out))
        }
    }
}

fn write_graph(out: &mut String, g: &GraphMetric<f64>, clients: &[usize]) {
    let ids: Vec<String> = clients.iter().map(|c| c.to_string()).collect();
    let _ = writeln!(out, "#clients: {}", ids.join(" "));
    for u in 0..g.vertex_count() {
        for &(v, w) in g.neighbors(u) {
            if u < v {
                let _ = writeln!(out, "{u} {v} {w}");
            }
        }
    }
}
