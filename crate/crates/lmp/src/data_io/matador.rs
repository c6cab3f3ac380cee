//! MATADOR-style tab-separated interaction tables.

use std::collections::BTreeSet;
use std::io::BufRead;

use lmp_core::{build_adjacency, DatasetBundle};

use crate::error::{Error, Result};

const DRUG_COLUMNS: [&str; 2] = ["chemical id", "chemical"];
const TARGET_COLUMNS: [&str; 2] = ["protein id", "protein"];

fn find_column(header: &[String], names: &[&str]) -> Option<usize> {
    names.iter().find_map(|n| header.iter().position(|h| h == n))
}

fn normalize(cell: &str) -> String {
    cell.trim().trim_start_matches('#').trim().to_ascii_lowercase()
}

/// Reads the (chemical, protein) pairs of a MATADOR table.
///
/// The header is the first non-blank line; a leading `#` is ignored and the
/// column names match case-insensitively. Identifiers come out sorted and
/// repeated pairs collapse into one interaction.
pub fn parse_matador<R: BufRead>(reader: R, name: &str, source_name: &str) -> Result<DatasetBundle> {
    let mut lines = reader.lines().enumerate();
    let (header_line, header) = loop {
        match lines.next() {
            None => return Err(Error::parse(source_name, 0, "empty file, expected a header row")),
            Some((i, line)) => {
                let line = line.map_err(|e| Error::io(source_name, e))?;
                if !line.trim().is_empty() {
                    break (i + 1, line);
                }
            }
        }
    };
    let header: Vec<String> = header.trim_end_matches('\r').split('\t').map(normalize).collect();
    let drug_col = find_column(&header, &DRUG_COLUMNS)
        .ok_or_else(|| Error::parse(source_name, header_line, "missing required column 'Chemical ID'"))?;
    let target_col = find_column(&header, &TARGET_COLUMNS)
        .ok_or_else(|| Error::parse(source_name, header_line, "missing required column 'Protein ID'"))?;
    let needed = drug_col.max(target_col) + 1;

    let mut edges = BTreeSet::new();
    for (i, line) in lines {
        let line = line.map_err(|e| Error::io(source_name, e))?;
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let cells: Vec<&str> = line.split('\t').collect();
        if cells.len() < needed {
            return Err(Error::parse(
                source_name,
                i + 1,
                format!("expected at least {needed} tab-separated fields, found {}", cells.len()),
            ));
        }
        let (d, t) = (cells[drug_col].trim(), cells[target_col].trim());
        if d.is_empty() || t.is_empty() {
            return Err(Error::parse(source_name, i + 1, "empty chemical or protein identifier"));
        }
        edges.insert((d.to_string(), t.to_string()));
    }
    if edges.is_empty() {
        return Err(Error::parse(source_name, header_line, "no interactions after the header"));
    }
    let drugs: BTreeSet<&String> = edges.iter().map(|(d, _)| d).collect();
    let targets: BTreeSet<&String> = edges.iter().map(|(_, t)| t).collect();
    let edges: Vec<(String, String)> = edges.iter().cloned().collect();
    let drugs: Vec<String> = drugs.into_iter().cloned().collect();
    let targets: Vec<String> = targets.into_iter().cloned().collect();
    let a = build_adjacency(&edges, &drugs, &targets)?;
    Ok(DatasetBundle::new(name, a, None, None)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_pair() {
        let text = "#chemical\tchemical name\tprotein\n5\taspirin\t9606.P1\n";
        let b = parse_matador(text.as_bytes(), "m", "t").unwrap();
        let a = b.interactions();
        assert_eq!((a.n_drugs(), a.n_targets(), a.n_interactions()), (1, 1, 1));
    }

    #[test]
    fn repeated_pairs_collapse_and_ids_sort() {
        let text = "Chemical ID\tProtein ID\nc2\tp1\nc1\tp2\nc2\tp1\n\n";
        let b = parse_matador(text.as_bytes(), "m", "t").unwrap();
        assert_eq!(b.interactions().n_interactions(), 2);
        assert_eq!(b.interactions().drug_ids(), ["c1", "c2"]);
    }

    #[test]
    fn missing_column_is_named() {
        let err = parse_matador("chemical\tname\nx\ty\n".as_bytes(), "m", "f.tsv").unwrap_err();
        assert!(err.to_string().contains("Protein ID"), "{err}");
    }

    #[test]
    fn short_row_reports_line() {
        let err = parse_matador("chemical\tprotein\na\tb\nc\n".as_bytes(), "m", "f.tsv").unwrap_err();
        assert!(err.to_string().starts_with("f.tsv:3:"), "{err}");
    }
}
