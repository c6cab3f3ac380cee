//! Labeled numeric grids: a header row of column labels, then one row per label.

use std::io::BufRead;

use lmp_core::{DenseMatrix, InteractionMatrix, Side, SimilarityMatrix};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixKind {
    Adjacency,
    Similarity(Side),
}

/// Which axis of an adjacency grid holds the drugs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Orientation {
    /// Rows are targets when the row labels look like protein identifiers.
    #[default]
    Auto,
    DrugRows,
    TargetRows,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Labeled {
    Adjacency(InteractionMatrix),
    Similarity(SimilarityMatrix),
}

/// Raw grid before interpretation.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledGrid {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// Row-major values.
    pub values: Vec<f64>,
}

const PROTEIN_PREFIXES: [&str; 2] = ["hsa", "9606."];

pub fn looks_like_protein(id: &str) -> bool {
    let lower = id.to_ascii_lowercase();
    PROTEIN_PREFIXES.iter().any(|p| lower.starts_with(p))
}

fn mostly_proteins(ids: &[String]) -> bool {
    2 * ids.iter().filter(|id| looks_like_protein(id)).count() > ids.len()
}

pub fn read_grid<R: BufRead>(reader: R, source_name: &str) -> Result<LabeledGrid> {
    let mut rows = Vec::new();
    let mut header: Option<Vec<String>> = None;
    let mut values = Vec::new();
    let mut header_line = 0;
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source_name, e))?;
        let line = line.trim_end_matches(['\r', '\n']);
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split('\t').map(str::trim).collect();
        let Some(cols) = &header else {
            let mut labels: Vec<String> = cells.iter().map(|c| c.to_string()).collect();
            if labels.first().is_some_and(|c| c.is_empty()) {
                labels.remove(0);
            }
            while labels.last().is_some_and(|c| c.is_empty()) {
                labels.pop();
            }
            check_unique(&labels, source_name, i + 1, "column")?;
            header = Some(labels);
            header_line = i + 1;
            continue;
        };
        let mut cells = cells;
        while cells.len() > cols.len() + 1 && cells.last() == Some(&"") {
            cells.pop();
        }
        if cells.len() != cols.len() + 1 {
            return Err(Error::parse(
                source_name,
                i + 1,
                format!("expected a label and {} values, found {} fields", cols.len(), cells.len()),
            ));
        }
        let label = cells[0].to_string();
        if label.is_empty() {
            return Err(Error::parse(source_name, i + 1, "empty row label"));
        }
        for (j, cell) in cells[1..].iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| {
                Error::parse(
                    source_name,
                    i + 1,
                    format!("cell ({label}, {}) is not a number: '{cell}'", cols[j]),
                )
            })?;
            if !v.is_finite() {
                return Err(Error::parse(
                    source_name,
                    i + 1,
                    format!("cell ({label}, {}) is not finite: {cell}", cols[j]),
                ));
            }
            values.push(v);
        }
        rows.push(label);
    }
    let col_labels = header.ok_or_else(|| Error::parse(source_name, 0, "empty file, expected a header row"))?;
    if rows.is_empty() || col_labels.is_empty() {
        return Err(Error::parse(source_name, header_line, "grid has no rows or no columns"));
    }
    check_unique(&rows, source_name, header_line, "row")?;
    Ok(LabeledGrid {
        row_labels: rows,
        col_labels,
        values,
    })
}

fn check_unique(labels: &[String], source_name: &str, line: usize, what: &str) -> Result<()> {
    let mut seen = std::collections::HashSet::new();
    for l in labels {
        if !seen.insert(l) {
            return Err(Error::parse(source_name, line, format!("duplicate {what} label '{l}'")));
        }
    }
    Ok(())
}

/// Parses a labeled grid as an adjacency (drugs x targets after orientation)
/// or a square similarity matrix.
pub fn parse_labeled_matrix<R: BufRead>(
    reader: R,
    kind: MatrixKind,
    orientation: Orientation,
    source_name: &str,
) -> Result<Labeled> {
    let g = read_grid(reader, source_name)?;
    let (r, c) = (g.row_labels.len(), g.col_labels.len());
    match kind {
        MatrixKind::Adjacency => {
            if let Some(k) = g.values.iter().position(|&v| v != 0.0 && v != 1.0) {
                return Err(Error::parse(
                    source_name,
                    0,
                    format!(
                        "adjacency cell ({}, {}) is {}, expected 0 or 1",
                        g.row_labels[k / c],
                        g.col_labels[k % c],
                        g.values[k]
                    ),
                ));
            }
            let transpose = match orientation {
                Orientation::DrugRows => false,
                Orientation::TargetRows => true,
                Orientation::Auto => mostly_proteins(&g.row_labels) && !mostly_proteins(&g.col_labels),
            };
            let m = DenseMatrix::from_row_major(r, c, &g.values)?;
            let a = if transpose {
                InteractionMatrix::new(m.transpose(), g.col_labels, g.row_labels)?
            } else {
                InteractionMatrix::new(m, g.row_labels, g.col_labels)?
            };
            Ok(Labeled::Adjacency(a))
        }
        MatrixKind::Similarity(side) => {
            if g.row_labels != g.col_labels {
                return Err(Error::parse(
                    source_name,
                    0,
                    format!("similarity grid must list the same labels on both axes ({r} rows, {c} columns)"),
                ));
            }
            let s = DenseMatrix::from_row_major(r, c, &g.values)?;
            Ok(Labeled::Similarity(SimilarityMatrix::new(s, g.row_labels, side)?))
        }
    }
}

pub fn parse_adjacency<R: BufRead>(reader: R, orientation: Orientation, source_name: &str) -> Result<InteractionMatrix> {
    match parse_labeled_matrix(reader, MatrixKind::Adjacency, orientation, source_name)? {
        Labeled::Adjacency(a) => Ok(a),
        Labeled::Similarity(_) => unreachable!(),
    }
}

pub fn parse_similarity<R: BufRead>(reader: R, side: Side, source_name: &str) -> Result<SimilarityMatrix> {
    match parse_labeled_matrix(reader, MatrixKind::Similarity(side), Orientation::Auto, source_name)? {
        Labeled::Similarity(s) => Ok(s),
        Labeled::Adjacency(_) => unreachable!(),
    }
}
