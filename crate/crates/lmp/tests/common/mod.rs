#![allow(dead_code)]

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Clustered drug-target data: pairs inside matching clusters interact with
/// probability `p_in`, others with `p_out`; similarities are high within clusters.
pub struct Synthetic {
    pub drugs: Vec<String>,
    pub targets: Vec<String>,
    /// drugs x targets
    pub adjacency: Vec<Vec<u8>>,
    pub drug_sim: Vec<Vec<f64>>,
    pub target_sim: Vec<Vec<f64>>,
}

impl Synthetic {
    pub fn new(m: usize, n: usize, clusters: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dc: Vec<usize> = (0..m).map(|i| i % clusters).collect();
        let tc: Vec<usize> = (0..n).map(|j| j % clusters).collect();
        let mut adjacency: Vec<Vec<u8>> = (0..m)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let p = if dc[i] == tc[j] { 0.45 } else { 0.02 };
                        rng.random_bool(p) as u8
                    })
                    .collect()
            })
            .collect();
        for (i, row) in adjacency.iter_mut().enumerate() {
            if row.iter().all(|&v| v == 0) {
                let j = (0..n).find(|&j| tc[j] == dc[i]).unwrap();
                row[j] = 1;
            }
        }
        for j in 0..n {
            if (0..m).all(|i| adjacency[i][j] == 0) {
                let i = (0..m).find(|&i| dc[i] == tc[j]).unwrap();
                adjacency[i][j] = 1;
            }
        }
        let mut sim = |labels: &[usize]| -> Vec<Vec<f64>> {
            let k = labels.len();
            let mut s = vec![vec![0.0; k]; k];
            for a in 0..k {
                s[a][a] = 1.0;
                for b in 0..a {
                    let base = if labels[a] == labels[b] { 0.7 } else { 0.1 };
                    let v: f64 = base + 0.2 * rng.random::<f64>();
                    let v = (v * 1000.0).round() / 1000.0;
                    s[a][b] = v;
                    s[b][a] = v;
                }
            }
            s
        };
        let drug_sim = sim(&dc);
        let target_sim = sim(&tc);
        Synthetic {
            drugs: (0..m).map(|i| format!("D{:05}", i)).collect(),
            targets: (0..n).map(|j| format!("hsa{}", 100 + j)).collect(),
            adjacency,
            drug_sim,
            target_sim,
        }
    }

    fn grid<T: std::fmt::Display>(rows: &[String], cols: &[String], cell: impl Fn(usize, usize) -> T) -> String {
        let mut s = String::new();
        for c in cols {
            write!(s, "\t{c}").unwrap();
        }
        s.push('\n');
        for (i, r) in rows.iter().enumerate() {
            s.push_str(r);
            for j in 0..cols.len() {
                write!(s, "\t{}", cell(i, j)).unwrap();
            }
            s.push('\n');
        }
        s
    }

    /// Writes `{prefix}_admat_dgc.txt` (targets as rows) and both similarity grids.
    pub fn write_yamanishi(&self, dir: &Path, prefix: &str) -> PathBuf {
        std::fs::create_dir_all(dir).unwrap();
        let adj = Self::grid(&self.targets, &self.drugs, |j, i| self.adjacency[i][j]);
        std::fs::write(dir.join(format!("{prefix}_admat_dgc.txt")), adj).unwrap();
        let ds = Self::grid(&self.drugs, &self.drugs, |a, b| self.drug_sim[a][b]);
        std::fs::write(dir.join(format!("{prefix}_simmat_dc.txt")), ds).unwrap();
        let ts = Self::grid(&self.targets, &self.targets, |a, b| self.target_sim[a][b]);
        std::fs::write(dir.join(format!("{prefix}_simmat_dg.txt")), ts).unwrap();
        dir.join(format!("{prefix}_admat_dgc.txt"))
    }

    pub fn n_interactions(&self) -> usize {
        self.adjacency.iter().flatten().filter(|&&v| v == 1).count()
    }
}

pub fn lmp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmp"))
        .args(args)
        .output()
        .expect("lmp binary runs")
}

pub fn lmp_ok(args: &[&str]) -> Output {
    let out = lmp(args);
    assert!(
        out.status.success(),
        "lmp {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

pub fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
