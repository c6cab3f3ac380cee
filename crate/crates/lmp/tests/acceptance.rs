//! Acceptance criteria, one PASS/FAIL line each.
//!
//! Criteria that need the benchmark datasets read them from `LMP_DATA_DIR`
//! (default: `data/` at the workspace root):
//! `{nr,gpcr,ic,e}_admat_dgc.txt`, `{..}_simmat_dc.txt`, `{..}_simmat_dg.txt`
//! and `matador.tsv`. Set `LMP_ACCEPT_ONLY=2,3` to run a subset.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use lmp::data_io::{load_dataset, LoadOptions};
use lmp::report::{fmt_g6, sweep_csv, write_file};
use lmp::run::evaluate_folds;
use lmp_core::{
    auc, aupr, l21_prox, similarity_alpha_grid, solve_lrr, svt, CvContext, DatasetBundle, DenseMatrix, EvalResult,
    FoldPlan, HoldoutMode, Method, MethodParams, SolverConfig, SweepRow,
};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;

struct Dataset {
    key: &'static str,
    label: &'static str,
    drugs: usize,
    targets: usize,
    interactions: usize,
    sparsity: f64,
}

const DATASETS: [Dataset; 5] = [
    Dataset { key: "matador", label: "MATADOR", drugs: 801, targets: 2901, interactions: 15843, sparsity: 0.007 },
    Dataset { key: "e", label: "enzyme", drugs: 445, targets: 664, interactions: 2926, sparsity: 0.010 },
    Dataset { key: "ic", label: "ion channel", drugs: 210, targets: 204, interactions: 1476, sparsity: 0.034 },
    Dataset { key: "gpcr", label: "GPCR", drugs: 223, targets: 95, interactions: 635, sparsity: 0.030 },
    Dataset { key: "nr", label: "nuclear receptor", drugs: 54, targets: 26, interactions: 90, sparsity: 0.061 },
];

fn dataset(key: &str) -> &'static Dataset {
    DATASETS.iter().find(|d| d.key == key).expect("known dataset key")
}

fn data_dir() -> PathBuf {
    std::env::var_os("LMP_DATA_DIR")
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
            manifest.parent().and_then(Path::parent).unwrap_or(manifest).join("data")
        })
}

fn dataset_path(key: &str) -> PathBuf {
    if key == "matador" {
        data_dir().join("matador.tsv")
    } else {
        data_dir().join(format!("{key}_admat_dgc.txt"))
    }
}

fn load(key: &str) -> Result<DatasetBundle, String> {
    let path = dataset_path(key);
    if !path.exists() {
        return Err(format!("dataset file {} not found", path.display()));
    }
    let mut b = load_dataset(&path, &LoadOptions::default()).map_err(|e| e.to_string())?;
    b.name = dataset(key).label.to_string();
    Ok(b)
}

fn load_all(keys: &[&str]) -> Result<Vec<DatasetBundle>, String> {
    let mut missing: Vec<String> = keys
        .iter()
        .filter(|k| !dataset_path(k).exists())
        .map(|k| dataset_path(k).file_name().unwrap().to_string_lossy().into_owned())
        .collect();
    missing.sort();
    missing.dedup();
    if !missing.is_empty() {
        return Err(format!("datasets not available in {}: {}", data_dir().display(), missing.join(", ")));
    }
    keys.iter().map(|k| load(k)).collect()
}

fn threads() -> usize {
    std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1)
}

fn cross_validate(bundle: &DatasetBundle, method: Method, mode: HoldoutMode, params: MethodParams) -> Result<EvalResult, String> {
    let plan = FoldPlan {
        mode,
        ..FoldPlan::default()
    };
    let ctx = CvContext::new(bundle, method, plan, params).map_err(|e| e.to_string())?;
    evaluate_folds(&ctx, threads()).map_err(|e| e.to_string())
}

fn within(label: &str, got: f64, want: f64, tol: f64, failures: &mut Vec<String>) -> String {
    let line = format!("{label} {got:.3} (target {want:.3} +/- {tol})");
    if (got - want).abs() > tol {
        failures.push(line.clone());
    }
    line
}

fn verdict(lines: Vec<String>, failures: Vec<String>) -> Check {
    if failures.is_empty() {
        Ok(lines.join("; "))
    } else {
        Err(format!("out of tolerance: {}", failures.join("; ")))
    }
}

fn na(m: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m.get(i, j))
}

fn gaussian(r: usize, c: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    // Box-Muller
    DMatrix::from_fn(r, c, |_, _| {
        let (u1, u2): (f64, f64) = (rng.random::<f64>().max(1e-300), rng.random());
        (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
    })
}

fn criterion_1() -> Check {
    let bundles = load_all(&["nr", "gpcr", "ic", "e", "matador"])?;
    let mut worst = (0.0f64, 0usize);
    for b in &bundles {
        let a = b.interactions().matrix();
        for (orient, input) in [("A", a.clone()), ("A^T", a.transpose())] {
            for alpha in [0.1, 0.25] {
                let cfg = SolverConfig::default().with_alpha(alpha);
                let sol = solve_lrr(&input, &cfg).map_err(|e| e.to_string())?;
                let r = sol.residual_feasibility.max(sol.residual_consistency);
                if !sol.converged || r > 1e-8 || sol.iterations > 1000 {
                    return Err(format!(
                        "{} {orient} alpha {alpha}: converged={} after {} iterations, residuals {:.2e}/{:.2e}",
                        b.name, sol.converged, sol.iterations, sol.residual_feasibility, sol.residual_consistency
                    ));
                }
                worst = (worst.0.max(r), worst.1.max(sol.iterations));
            }
        }
    }
    Ok(format!("max residual {:.2e}, max iterations {}", worst.0, worst.1))
}

fn criterion_2() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for inst in 0..20 {
        let a = gaussian(50, 5, &mut rng) * gaussian(5, 40, &mut rng);
        let dm = DenseMatrix::from_fn(50, 40, |i, j| a[(i, j)]).unwrap();
        let sol = solve_lrr(&dm, &SolverConfig::default().with_alpha(10.0)).map_err(|e| e.to_string())?;
        let svd = a.clone().svd(false, true);
        let vt = svd.v_t.unwrap();
        let mut order: Vec<usize> = (0..svd.singular_values.len()).collect();
        order.sort_by(|&x, &y| svd.singular_values[y].total_cmp(&svd.singular_values[x]));
        let mut proj = DMatrix::<f64>::zeros(40, 40);
        for &k in &order[..5] {
            let v = vt.row(k).transpose();
            proj += &v * v.transpose();
        }
        let err = (na(&sol.x_star) - proj).norm();
        let rank = sol.rank().map_err(|e| e.to_string())?;
        if err > 1e-3 || rank != 5 {
            return Err(format!("instance {inst}: ||X - VV^T||_F = {err:.2e}, rank {rank}"));
        }
        worst = worst.max(err);
    }
    Ok(format!("20 instances, worst ||X - VV^T||_F = {worst:.2e}, rank 5"))
}

fn criterion_3() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (mut worst_svt, mut worst_l21) = (0.0f64, 0.0f64);
    for inst in 0..100 {
        let (r, c) = (rng.random_range(1..12), rng.random_range(1..12));
        let g = gaussian(r, c, &mut rng) * rng.random_range(0.1..4.0);
        let m = DenseMatrix::from_fn(r, c, |i, j| g[(i, j)]).unwrap();
        let tau = rng.random_range(0.0..3.0);

        let svd = g.clone().svd(true, true);
        let shrunk = svd.singular_values.map(|s| (s - tau).max(0.0));
        let oracle = svd.u.unwrap() * DMatrix::from_diagonal(&shrunk) * svd.v_t.unwrap();
        let d = (na(&svt(&m, tau).unwrap()) - oracle).amax();
        worst_svt = worst_svt.max(d);

        let out = na(&l21_prox(&m, tau).unwrap());
        for j in 0..c {
            let col = g.column(j);
            let n = col.norm();
            let want = if n > tau { col * ((n - tau) / n) } else { col * 0.0 };
            worst_l21 = worst_l21.max((out.column(j) - want).amax());
        }
        if worst_svt > 1e-10 || worst_l21 > 1e-12 {
            return Err(format!("instance {inst}: svt diff {worst_svt:.2e}, l21 diff {worst_l21:.2e}"));
        }
    }
    Ok(format!("100 instances, max svt diff {worst_svt:.2e}, max l21 diff {worst_l21:.2e}"))
}

fn auc_pairs(s: &[(f64, bool)]) -> f64 {
    let (mut credit, mut pairs) = (0.0, 0.0);
    for p in s.iter().filter(|x| x.1) {
        for n in s.iter().filter(|x| !x.1) {
            pairs += 1.0;
            credit += if p.0 > n.0 { 1.0 } else if p.0 == n.0 { 0.5 } else { 0.0 };
        }
    }
    credit / pairs
}

fn aupr_thresholds(s: &[(f64, bool)]) -> f64 {
    let mut t: Vec<f64> = s.iter().map(|x| x.0).collect();
    t.sort_by(|a, b| b.total_cmp(a));
    t.dedup();
    let pos = s.iter().filter(|x| x.1).count() as f64;
    let (mut area, mut prev) = (0.0, 0.0);
    for th in t {
        let sel: Vec<_> = s.iter().filter(|x| x.0 >= th).collect();
        let tp = sel.iter().filter(|x| x.1).count() as f64;
        area += (tp / pos - prev) * tp / sel.len() as f64;
        prev = tp / pos;
    }
    area
}

fn criterion_4() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst = 0.0f64;
    for inst in 0..1000 {
        let n = rng.random_range(2..200);
        let coarse = inst % 2 == 0;
        let mut s: Vec<(f64, bool)> = (0..n)
            .map(|_| {
                let v = if coarse { rng.random_range(0..6) as f64 } else { rng.random::<f64>() };
                (v, rng.random_bool(0.3))
            })
            .collect();
        s[0].1 = true;
        s[1].1 = false;
        let d = (auc(&s).unwrap() - auc_pairs(&s)).abs().max((aupr(&s).unwrap() - aupr_thresholds(&s)).abs());
        if d > 1e-12 {
            return Err(format!("instance {inst}: difference {d:.2e}"));
        }
        worst = worst.max(d);
    }
    Ok(format!("1000 instances, max difference {worst:.2e}"))
}

fn criterion_5() -> Check {
    let rows = [("gpcr", 0.853, 0.601), ("ic", 0.941, 0.846), ("e", 0.900, 0.766), ("matador", 0.946, 0.796), ("nr", 0.702, 0.276)];
    let bundles = load_all(&rows.map(|r| r.0))?;
    let (mut lines, mut failures) = (Vec::new(), Vec::new());
    for ((key, auc_ref, aupr_ref), b) in rows.iter().zip(&bundles) {
        let r = cross_validate(b, Method::ZA, HoldoutMode::Pair, MethodParams::default())?;
        let (ta, tp) = if *key == "nr" { (0.08, 0.08) } else { (0.03, 0.05) };
        lines.push(within(&format!("{} AUC", b.name), r.mean_auc, *auc_ref, ta, &mut failures));
        lines.push(within(&format!("{} AUPR", b.name), r.mean_aupr, *aupr_ref, tp, &mut failures));
    }
    verdict(lines, failures)
}

fn criterion_6() -> Check {
    let rows = [("gpcr", 0.950), ("ic", 0.979), ("e", 0.973), ("nr", 0.863)];
    let bundles = load_all(&rows.map(|r| r.0))?;
    let (mut lines, mut failures) = (Vec::new(), Vec::new());
    for ((key, auc_ref), b) in rows.iter().zip(&bundles) {
        let r = cross_validate(b, Method::ZADT, HoldoutMode::Pair, MethodParams::default())?;
        let tol = if *key == "nr" { 0.08 } else { 0.03 };
        lines.push(within(&format!("{} AUC", b.name), r.mean_auc, *auc_ref, tol, &mut failures));
    }
    verdict(lines, failures)
}

fn criterion_7() -> Check {
    let rows = [
        ("e", Method::ZT, HoldoutMode::Target, 0.824),
        ("gpcr", Method::ZT, HoldoutMode::Target, 0.854),
        ("ic", Method::ZD, HoldoutMode::Drug, 0.938),
        ("e", Method::ZD, HoldoutMode::Drug, 0.928),
    ];
    let bundles = load_all(&rows.map(|r| r.0))?;
    let (mut lines, mut failures) = (Vec::new(), Vec::new());
    for ((_, method, mode, auc_ref), b) in rows.iter().zip(&bundles) {
        let r = cross_validate(b, *method, *mode, MethodParams::default())?;
        lines.push(within(&format!("{} {method} {mode:?} AUC", b.name), r.mean_auc, *auc_ref, 0.04, &mut failures));
    }
    verdict(lines, failures)
}

fn criterion_8() -> Check {
    let rows = [("matador", 0.930, 0.933), ("ic", 0.915, 0.920), ("e", 0.910, 0.911)];
    let bundles = load_all(&rows.map(|r| r.0))?;
    let (mut lines, mut failures) = (Vec::new(), Vec::new());
    for ((_, cn_ref, jac_ref), b) in rows.iter().zip(&bundles) {
        for (method, want) in [(Method::CN, cn_ref), (Method::Jaccard, jac_ref)] {
            let r = cross_validate(b, method, HoldoutMode::Pair, MethodParams::default())?;
            lines.push(within(&format!("{} {method} AUC", b.name), r.mean_auc, *want, 0.05, &mut failures));
        }
    }
    verdict(lines, failures)
}

/// Rises to its maximum then falls, ignoring wiggles below `tol`.
fn single_optimum(values: &[f64], tol: f64) -> bool {
    let peak = values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .map(|(i, _)| i)
        .unwrap_or(0);
    values[..=peak].windows(2).all(|w| w[1] >= w[0] - tol) && values[peak..].windows(2).all(|w| w[1] <= w[0] + tol)
}

fn criterion_9() -> Check {
    let keys = ["nr", "gpcr", "ic", "e"];
    let bundles = load_all(&keys)?;
    let out = Path::new(env!("CARGO_TARGET_TMPDIR")).join("acceptance");
    let (mut lines, mut failures) = (Vec::new(), Vec::new());
    for (method, mode, panel) in [(Method::ZD, HoldoutMode::Drug, "new_drug"), (Method::ZT, HoldoutMode::Target, "new_target")] {
        for (key, b) in keys.iter().zip(&bundles) {
            let mut rows = Vec::new();
            for alpha in similarity_alpha_grid() {
                let p = MethodParams::default().with_method_alpha(method, alpha).map_err(|e| e.to_string())?;
                rows.push(SweepRow {
                    alpha,
                    result: cross_validate(b, method, mode, p)?,
                });
            }
            let file = format!("fig2_{panel}_{key}.csv");
            write_file(&out, &file, &sweep_csv(&rows)).map_err(|e| e.to_string())?;
            let curve: Vec<f64> = rows.iter().map(|r| r.result.mean_aupr).collect();
            let line = format!("{file}: AUPR {}..{}", fmt_g6(curve[0]), fmt_g6(*curve.last().unwrap()));
            if !single_optimum(&curve, 0.005) {
                failures.push(format!("{line} has more than one optimum"));
            }
            lines.push(line);
        }
    }
    verdict(lines, failures)
}

fn criterion_10() -> Check {
    let tmp = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = tmp.path().join("data");
    common::Synthetic::new(30, 24, 3, 10).write_yamanishi(&data, "syn");
    let run = |name: &str| -> Result<PathBuf, String> {
        let out = tmp.path().join(name);
        let o = common::lmp(&[
            "cv", "--input", data.to_str().unwrap(), "--method", "ZADT", "--alpha-d", "0.1,0.25", "--alpha-t", "0.15",
            "--alpha-sd", "0.5,1", "--alpha-st", "1", "--folds", "5", "--repetitions", "2", "--output",
            out.to_str().unwrap(),
        ]);
        if !o.status.success() {
            return Err(String::from_utf8_lossy(&o.stderr).into_owned());
        }
        Ok(out)
    };
    let (a, b) = (run("a")?, run("b")?);
    let mut compared = Vec::new();
    for f in ["metrics.csv", "summary.json"] {
        let (x, y) = (std::fs::read(a.join(f)).unwrap(), std::fs::read(b.join(f)).unwrap());
        if x != y {
            return Err(format!("{f} differs between runs"));
        }
        compared.push(format!("{f} ({} bytes)", x.len()));
    }
    Ok(format!("identical: {}", compared.join(", ")))
}

fn criterion_11() -> Check {
    let keys = ["matador", "e", "ic", "gpcr", "nr"];
    let bundles = load_all(&keys)?;
    let (mut lines, mut failures) = (Vec::new(), Vec::new());
    for (key, b) in keys.iter().zip(&bundles) {
        let d = dataset(key);
        let a = b.interactions();
        let got = (a.n_drugs(), a.n_targets(), a.n_interactions());
        let line = format!("{} {}/{}/{} density {:.4}", d.label, got.0, got.1, got.2, a.density());
        if got != (d.drugs, d.targets, d.interactions) {
            failures.push(format!("{line}: expected {}/{}/{}", d.drugs, d.targets, d.interactions));
        }
        if (a.density() - d.sparsity).abs() > 0.001 {
            failures.push(format!("{line}: expected sparsity {} +/- 0.001", d.sparsity));
        }
        lines.push(line);
    }
    verdict(lines, failures)
}

type Criterion = (usize, &'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 11] = [
        (1, "solver feasibility on all datasets", criterion_1),
        (2, "synthetic low-rank recovery", criterion_2),
        (3, "proximal operator oracles", criterion_3),
        (4, "metric oracles", criterion_4),
        (5, "interaction-only ZA reproduction", criterion_5),
        (6, "heterogeneous ZADT reproduction", criterion_6),
        (7, "cold-start ZD/ZT reproduction", criterion_7),
        (8, "CN/Jaccard baselines", criterion_8),
        (9, "alpha sweep curves", criterion_9),
        (10, "byte-identical cv runs", criterion_10),
        (11, "dataset ingestion counts", criterion_11),
    ];
    let only: Option<Vec<usize>> = std::env::var("LMP_ACCEPT_ONLY")
        .ok()
        .map(|s| s.split(',').filter_map(|v| v.trim().parse().ok()).collect());
    let mut failed = 0;
    for (n, title, check) in criteria {
        if only.as_ref().is_some_and(|o| !o.contains(&n)) {
            continue;
        }
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("PASS criterion {n:>2} {title} [{secs:.1}s]: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n:>2} {title} [{secs:.1}s]: {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
