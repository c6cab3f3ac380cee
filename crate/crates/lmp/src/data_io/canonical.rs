//! Canonical interchange directory.
//!
//! ```text
//! interactions.tsv   #dataset<TAB>name
//!                    #counts<TAB>drugs<TAB>targets<TAB>interactions
//!                    drug<TAB>target          one line per interaction, row-major
//!                    drug<TAB>                drugs without interactions
//!                    <TAB>target              targets without interactions
//! drug_sim.tsv       labeled square grid (optional)
//! target_sim.tsv     labeled square grid (optional)
//! ```
//!
//! Identifiers are written in bundle order, which loaders keep sorted; the
//! reader sorts them again, so a sorted bundle round-trips exactly.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader};
use std::path::Path;

use lmp_core::{build_adjacency, DatasetBundle, InteractionMatrix, Side, SimilarityMatrix};

use super::labeled::parse_similarity;
use crate::error::{Error, Result};

pub const INTERACTIONS_FILE: &str = "interactions.tsv";
pub const DRUG_SIM_FILE: &str = "drug_sim.tsv";
pub const TARGET_SIM_FILE: &str = "target_sim.tsv";

pub fn interactions_text(name: &str, a: &InteractionMatrix) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "#dataset\t{name}");
    let _ = writeln!(out, "#counts\t{}\t{}\t{}", a.n_drugs(), a.n_targets(), a.n_interactions());
    let (drug_nbrs, target_nbrs) = a.adjacency_lists();
    for (i, ts) in drug_nbrs.iter().enumerate() {
        for &j in ts {
            let _ = writeln!(out, "{}\t{}", a.drug_ids()[i], a.target_ids()[j]);
        }
    }
    for (i, ts) in drug_nbrs.iter().enumerate() {
        if ts.is_empty() {
            let _ = writeln!(out, "{}\t", a.drug_ids()[i]);
        }
    }
    for (j, ds) in target_nbrs.iter().enumerate() {
        if ds.is_empty() {
            let _ = writeln!(out, "\t{}", a.target_ids()[j]);
        }
    }
    out
}

pub fn similarity_text(s: &SimilarityMatrix) -> String {
    let mut out = String::new();
    for id in s.ids() {
        out.push('\t');
        out.push_str(id);
    }
    out.push('\n');
    let m = s.matrix();
    for (i, id) in s.ids().iter().enumerate() {
        out.push_str(id);
        for j in 0..m.cols() {
            let _ = write!(out, "\t{}", m.get(i, j));
        }
        out.push('\n');
    }
    out
}

pub fn write_canonical(bundle: &DatasetBundle, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let write = |file: &str, text: String| {
        let path = dir.join(file);
        fs::write(&path, text).map_err(|e| Error::io(path, e))
    };
    write(INTERACTIONS_FILE, interactions_text(&bundle.name, bundle.interactions()))?;
    for (side, file) in [(Side::Drug, DRUG_SIM_FILE), (Side::Target, TARGET_SIM_FILE)] {
        let path = dir.join(file);
        match bundle.similarity(side) {
            Some(s) => write(file, similarity_text(s))?,
            None if path.exists() => fs::remove_file(&path).map_err(|e| Error::io(path, e))?,
            None => {}
        }
    }
    Ok(())
}

/// Returns the dataset name and the interaction matrix.
pub fn parse_interactions<R: BufRead>(reader: R, source_name: &str) -> Result<(String, InteractionMatrix)> {
    let mut name = None;
    let mut counts: Option<(usize, usize, usize)> = None;
    let mut edges = BTreeSet::new();
    let mut drugs = BTreeSet::new();
    let mut targets = BTreeSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(source_name, e))?;
        let line = line.trim_end_matches('\r');
        let bad = |msg: &str| Error::parse(source_name, i + 1, msg);
        if let Some(rest) = line.strip_prefix("#dataset\t") {
            name = Some(rest.to_string());
            continue;
        }
        if let Some(rest) = line.strip_prefix("#counts\t") {
            let v: Vec<usize> = rest
                .split('\t')
                .map(|c| c.parse().map_err(|_| bad("malformed #counts line")))
                .collect::<Result<_>>()?;
            let [d, t, n] = v[..] else {
                return Err(bad("#counts needs three fields"));
            };
            counts = Some((d, t, n));
            continue;
        }
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((d, t)) = line.split_once('\t') else {
            return Err(bad("expected two tab-separated fields"));
        };
        if t.contains('\t') {
            return Err(bad("expected two tab-separated fields"));
        }
        match (d.is_empty(), t.is_empty()) {
            (false, false) => {
                drugs.insert(d.to_string());
                targets.insert(t.to_string());
                edges.insert((d.to_string(), t.to_string()));
            }
            (false, true) => {
                drugs.insert(d.to_string());
            }
            (true, false) => {
                targets.insert(t.to_string());
            }
            (true, true) => return Err(bad("empty line content")),
        }
    }
    let name = name.ok_or_else(|| Error::parse(source_name, 1, "missing '#dataset' header"))?;
    let drugs: Vec<String> = drugs.into_iter().collect();
    let targets: Vec<String> = targets.into_iter().collect();
    let edges: Vec<(String, String)> = edges.into_iter().collect();
    let a = build_adjacency(&edges, &drugs, &targets)?;
    if let Some(c) = counts {
        let found = (a.n_drugs(), a.n_targets(), a.n_interactions());
        if c != found {
            return Err(Error::parse(
                source_name,
                2,
                format!("#counts says {c:?} drugs/targets/interactions but the file lists {found:?}"),
            ));
        }
    }
    Ok((name, a))
}

pub fn is_canonical_dir(dir: &Path) -> bool {
    dir.join(INTERACTIONS_FILE).is_file()
}

pub fn read_canonical(dir: &Path) -> Result<DatasetBundle> {
    let open = |file: &str| -> Result<Option<(BufReader<fs::File>, String)>> {
        let path = dir.join(file);
        if !path.exists() {
            return Ok(None);
        }
        let f = fs::File::open(&path).map_err(|e| Error::io(&path, e))?;
        Ok(Some((BufReader::new(f), path.display().to_string())))
    };
    let (r, src) = open(INTERACTIONS_FILE)?
        .ok_or_else(|| Error::io(dir.join(INTERACTIONS_FILE), std::io::ErrorKind::NotFound.into()))?;
    let (name, a) = parse_interactions(r, &src)?;
    let sim = |file: &str, side: Side| -> Result<Option<SimilarityMatrix>> {
        open(file)?.map(|(r, src)| parse_similarity(r, side, &src)).transpose()
    };
    let drug_sim = sim(DRUG_SIM_FILE, Side::Drug)?;
    let target_sim = sim(TARGET_SIM_FILE, Side::Target)?;
    Ok(DatasetBundle::new(name, a, drug_sim, target_sim)?)
}
