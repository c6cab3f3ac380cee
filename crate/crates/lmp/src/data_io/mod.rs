//! Dataset readers and the canonical writer.

mod canonical;
mod labeled;
mod matador;

use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use lmp_core::{AlignmentReport, DatasetBundle, Side};

pub use canonical::{
    interactions_text, is_canonical_dir, parse_interactions, read_canonical, similarity_text, write_canonical,
    DRUG_SIM_FILE, INTERACTIONS_FILE, TARGET_SIM_FILE,
};
pub use labeled::{
    looks_like_protein, parse_adjacency, parse_labeled_matrix, parse_similarity, read_grid, Labeled, LabeledGrid,
    MatrixKind, Orientation,
};
pub use matador::parse_matador;

use crate::error::{Error, Result};

pub const YAMANISHI_ADJACENCY_SUFFIX: &str = "_admat_dgc.txt";
pub const YAMANISHI_DRUG_SIM_SUFFIX: &str = "_simmat_dc.txt";
pub const YAMANISHI_TARGET_SIM_SUFFIX: &str = "_simmat_dg.txt";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputFormat {
    /// Canonical directory, Yamanishi directory/file, or MATADOR table.
    #[default]
    Auto,
    Canonical,
    Yamanishi,
    Matador,
}

#[derive(Debug, Clone, Default)]
pub struct LoadOptions {
    pub format: InputFormat,
    pub orientation: Orientation,
    /// Overrides the dataset name derived from the path.
    pub name: Option<String>,
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path).map(BufReader::new).map_err(|e| Error::io(path, e))
}

/// Yamanishi-style files `{prefix}_admat_dgc.txt`, `{prefix}_simmat_dc.txt`
/// (drugs) and `{prefix}_simmat_dg.txt` (targets). Missing similarity files are
/// skipped; identifiers not shared by all present files are dropped.
pub fn load_yamanishi(
    dir: &Path,
    prefix: &str,
    orientation: Orientation,
) -> Result<(DatasetBundle, AlignmentReport)> {
    let adj_path = dir.join(format!("{prefix}{YAMANISHI_ADJACENCY_SUFFIX}"));
    let a = parse_adjacency(open(&adj_path)?, orientation, &adj_path.display().to_string())?;
    let sim = |suffix: &str, side: Side| -> Result<_> {
        let path = dir.join(format!("{prefix}{suffix}"));
        if !path.exists() {
            return Ok(None);
        }
        parse_similarity(open(&path)?, side, &path.display().to_string()).map(Some)
    };
    let drug_sim = sim(YAMANISHI_DRUG_SIM_SUFFIX, Side::Drug)?;
    let target_sim = sim(YAMANISHI_TARGET_SIM_SUFFIX, Side::Target)?;
    let (bundle, report) = DatasetBundle::aligned(prefix, a, drug_sim, target_sim)?;
    Ok((bundle.canonicalized()?, report))
}

fn yamanishi_prefixes(dir: &Path) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        if let Some(p) = entry.file_name().to_str().and_then(|n| n.strip_suffix(YAMANISHI_ADJACENCY_SUFFIX)) {
            out.push(p.to_string());
        }
    }
    out.sort();
    Ok(out)
}

/// Where a Yamanishi dataset lives: `dir/prefix_admat_dgc.txt`.
fn yamanishi_location(path: &Path) -> Result<Option<(PathBuf, String)>> {
    if path.is_file() {
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or_default();
        return Ok(name.strip_suffix(YAMANISHI_ADJACENCY_SUFFIX).map(|p| {
            let dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
            (dir, p.to_string())
        }));
    }
    if path.is_dir() {
        let prefixes = yamanishi_prefixes(path)?;
        return match prefixes.len() {
            0 => Ok(None),
            1 => Ok(Some((path.to_path_buf(), prefixes[0].clone()))),
            _ => Err(Error::Config(format!(
                "{} holds several Yamanishi datasets ({}); pass one adjacency file instead",
                path.display(),
                prefixes.join(", ")
            ))),
        };
    }
    Ok(None)
}

fn default_name(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("dataset")
        .to_string()
}

/// Loads any supported dataset; identifiers come back sorted.
pub fn load_dataset(path: &Path, opts: &LoadOptions) -> Result<DatasetBundle> {
    if !path.exists() {
        return Err(Error::io(path, std::io::ErrorKind::NotFound.into()));
    }
    let format = match opts.format {
        InputFormat::Auto if path.is_dir() && is_canonical_dir(path) => InputFormat::Canonical,
        InputFormat::Auto if yamanishi_location(path)?.is_some() => InputFormat::Yamanishi,
        InputFormat::Auto if path.is_file() => InputFormat::Matador,
        InputFormat::Auto => {
            return Err(Error::Config(format!(
                "cannot tell the format of {}; pass --format",
                path.display()
            )))
        }
        f => f,
    };
    let mut bundle = match format {
        InputFormat::Canonical => read_canonical(path)?,
        InputFormat::Yamanishi => {
            let (dir, prefix) = yamanishi_location(path)?.ok_or_else(|| {
                Error::Config(format!("no *{YAMANISHI_ADJACENCY_SUFFIX} file at {}", path.display()))
            })?;
            let (bundle, report) = load_yamanishi(&dir, &prefix, opts.orientation)?;
            warn_alignment(&bundle.name, &report);
            bundle
        }
        InputFormat::Matador => parse_matador(open(path)?, &default_name(path), &path.display().to_string())?,
        InputFormat::Auto => unreachable!(),
    };
    if let Some(name) = &opts.name {
        bundle.name = name.clone();
    }
    Ok(bundle)
}

fn warn_alignment(name: &str, r: &AlignmentReport) {
    if !r.is_clean() {
        log::warn!(
            "{name}: kept the identifiers shared with the similarity files; dropped {} drugs and {} targets \
             from the interactions, {} drugs and {} targets from the similarities",
            r.drugs_dropped_from_interactions,
            r.targets_dropped_from_interactions,
            r.drugs_dropped_from_similarity,
            r.targets_dropped_from_similarity
        );
    }
}
