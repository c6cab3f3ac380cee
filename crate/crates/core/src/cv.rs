//! Cross-validation of scoring methods and alpha sweeps.
//!
//! Parameters given as a grid are chosen per fold by nested selection: one
//! inner hold-out split of the fold's training data (same manner as the outer
//! split) is scored for every grid value and the value with the best AUPR
//! wins, ties going to the earlier grid entry. `ZADT` tunes its three parts
//! independently. Similarity projections do not depend on the fold, so they
//! are solved once per alpha when the context is built.

use alloc::vec::Vec;
use core::fmt;

use crate::baselines::{katz_beta_limit, BaselineMethod, BaselineParams, KATZ_BETA_GRID};
use crate::error::{Error, Result};
use crate::folds::{partition, FoldPlan, FoldSpec, HeldOut, HoldoutMode};
use crate::interaction::{DatasetBundle, InteractionMatrix, Side};
use crate::matrix::DenseMatrix;
use crate::metrics::{auc, aupr};
use crate::scoring::{combine_zadt, side_from_projection, za_from_projections, Gammas, Projection, ScoreMatrix};
use crate::solver::{SolveDiagnostics, SolverConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Method {
    ZA,
    ZD,
    ZT,
    ZADT,
    CN,
    Jaccard,
    Katz,
    CJC,
    CRA,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Method {
    pub const ALL: [Method; 9] = [
        Method::ZA,
        Method::ZD,
        Method::ZT,
        Method::ZADT,
        Method::CN,
        Method::Jaccard,
        Method::Katz,
        Method::CJC,
        Method::CRA,
    ];

    fn baseline(self) -> Option<BaselineMethod> {
        Some(match self {
            Method::CN => BaselineMethod::CN,
            Method::Jaccard => BaselineMethod::Jaccard,
            Method::Katz => BaselineMethod::Katz,
            Method::CJC => BaselineMethod::CJC,
            Method::CRA => BaselineMethod::CRA,
            _ => return None,
        })
    }

    pub fn is_baseline(self) -> bool {
        self.baseline().is_some()
    }

    pub fn supports(self, mode: HoldoutMode) -> bool {
        match self {
            Method::ZD => matches!(mode, HoldoutMode::Pair | HoldoutMode::Drug),
            Method::ZT => matches!(mode, HoldoutMode::Pair | HoldoutMode::Target),
            _ => mode == HoldoutMode::Pair,
        }
    }

    /// Checks mode compatibility and that the required similarities are present.
    pub fn check(self, bundle: &DatasetBundle, mode: HoldoutMode) -> Result<()> {
        if !self.supports(mode) {
            return Err(Error::InvalidConfig(alloc::format!(
                "method {self} does not support {mode:?} hold-out"
            )));
        }
        let needs_drug = matches!(self, Method::ZD | Method::ZADT);
        let needs_target = matches!(self, Method::ZT | Method::ZADT);
        for (needed, side) in [(needs_drug, Side::Drug), (needs_target, Side::Target)] {
            if needed && bundle.similarity(side).is_none() {
                return Err(Error::InvalidConfig(alloc::format!(
                    "method {self} needs a {side} similarity matrix, but dataset '{}' has none",
                    bundle.name
                )));
            }
        }
        Ok(())
    }
}

/// A fixed value, or a grid to select from on the training data of each fold.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum ParamChoice {
    Fixed(f64),
    Grid(Vec<f64>),
}

impl ParamChoice {
    pub fn values(&self) -> &[f64] {
        match self {
            ParamChoice::Fixed(v) => core::slice::from_ref(v),
            ParamChoice::Grid(g) => g,
        }
    }

    fn is_tuned(&self) -> bool {
        self.values().len() > 1
    }

    fn validate(&self, what: &str) -> Result<()> {
        let v = self.values();
        if v.is_empty() || v.iter().any(|x| !x.is_finite() || *x <= 0.0) {
            return Err(Error::InvalidConfig(alloc::format!(
                "{what} must be a nonempty list of positive values, got {v:?}"
            )));
        }
        Ok(())
    }
}

/// `0.1, 0.125, ..., 0.25`: the interaction-only alpha range.
pub fn interaction_alpha_grid() -> Vec<f64> {
    (4..=10).map(|i| i as f64 / 40.0).collect()
}

/// `0.1, 0.2, ..., 2.0`: the alpha range with side information.
pub fn similarity_alpha_grid() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 10.0).collect()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MethodParams {
    /// Drug-side solve on the interactions (`ZA`).
    pub alpha_d: ParamChoice,
    /// Target-side solve on the interactions (`ZA`).
    pub alpha_t: ParamChoice,
    /// Solve on the drug similarity (`ZD`).
    pub alpha_sd: ParamChoice,
    /// Solve on the target similarity (`ZT`).
    pub alpha_st: ParamChoice,
    pub gammas: Gammas,
    pub katz_beta: ParamChoice,
    /// Solver settings; its `alpha` is overridden per solve.
    pub solver: SolverConfig,
}

impl Default for MethodParams {
    fn default() -> Self {
        MethodParams {
            alpha_d: ParamChoice::Grid(interaction_alpha_grid()),
            alpha_t: ParamChoice::Grid(interaction_alpha_grid()),
            alpha_sd: ParamChoice::Grid(similarity_alpha_grid()),
            alpha_st: ParamChoice::Grid(similarity_alpha_grid()),
            gammas: Gammas::default(),
            katz_beta: ParamChoice::Grid(KATZ_BETA_GRID.to_vec()),
            solver: SolverConfig::default(),
        }
    }
}

impl MethodParams {
    /// Every parameter fixed: `alpha` for all four solves.
    pub fn fixed(alpha: f64) -> Self {
        MethodParams {
            alpha_d: ParamChoice::Fixed(alpha),
            alpha_t: ParamChoice::Fixed(alpha),
            alpha_sd: ParamChoice::Fixed(alpha),
            alpha_st: ParamChoice::Fixed(alpha),
            katz_beta: ParamChoice::Fixed(0.01),
            ..MethodParams::default()
        }
    }

    fn validate(&self) -> Result<()> {
        self.alpha_d.validate("alpha_d")?;
        self.alpha_t.validate("alpha_t")?;
        self.alpha_sd.validate("alpha_sd")?;
        self.alpha_st.validate("alpha_st")?;
        self.katz_beta.validate("katz_beta")?;
        self.solver.validate()
    }

    /// Copy with the alpha(s) used by `method` fixed to `alpha`.
    pub fn with_method_alpha(&self, method: Method, alpha: f64) -> Result<Self> {
        let mut p = self.clone();
        match method {
            Method::ZA => {
                p.alpha_d = ParamChoice::Fixed(alpha);
                p.alpha_t = ParamChoice::Fixed(alpha);
            }
            Method::ZD => p.alpha_sd = ParamChoice::Fixed(alpha),
            Method::ZT => p.alpha_st = ParamChoice::Fixed(alpha),
            Method::ZADT => {
                p.alpha_sd = ParamChoice::Fixed(alpha);
                p.alpha_st = ParamChoice::Fixed(alpha);
            }
            _ => {
                return Err(Error::InvalidConfig(alloc::format!(
                    "method {method} has no alpha parameter"
                )))
            }
        }
        Ok(p)
    }
}

/// Parameter values actually used for one fold.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SelectedParams {
    pub alpha_d: Option<f64>,
    pub alpha_t: Option<f64>,
    pub alpha_sd: Option<f64>,
    pub alpha_st: Option<f64>,
    pub katz_beta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FoldOutcome {
    pub repetition: usize,
    pub fold: usize,
    pub auc: f64,
    pub aupr: f64,
    pub n_candidates: usize,
    pub n_test_positives: usize,
    pub selected: SelectedParams,
    pub diagnostics: Vec<SolveDiagnostics>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalResult {
    /// Ordered by (repetition, fold).
    pub per_fold: Vec<FoldOutcome>,
    pub mean_auc: f64,
    pub mean_aupr: f64,
    /// Population standard deviations over all folds.
    pub std_auc: f64,
    pub std_aupr: f64,
    pub repetition_mean_auc: Vec<f64>,
    pub repetition_mean_aupr: Vec<f64>,
}

impl EvalResult {
    pub fn from_folds(mut per_fold: Vec<FoldOutcome>) -> Self {
        per_fold.sort_by_key(|f| (f.repetition, f.fold));
        let aucs: Vec<f64> = per_fold.iter().map(|f| f.auc).collect();
        let auprs: Vec<f64> = per_fold.iter().map(|f| f.aupr).collect();
        let (mean_auc, std_auc) = mean_std(&aucs);
        let (mean_aupr, std_aupr) = mean_std(&auprs);
        let reps = per_fold.iter().map(|f| f.repetition + 1).max().unwrap_or(0);
        let rep_mean = |metric: fn(&FoldOutcome) -> f64| -> Vec<f64> {
            (0..reps)
                .map(|r| {
                    let vals: Vec<f64> = per_fold.iter().filter(|f| f.repetition == r).map(metric).collect();
                    mean_std(&vals).0
                })
                .collect()
        };
        EvalResult {
            repetition_mean_auc: rep_mean(|f| f.auc),
            repetition_mean_aupr: rep_mean(|f| f.aupr),
            per_fold,
            mean_auc,
            mean_aupr,
            std_auc,
            std_aupr,
        }
    }
}

pub(crate) fn mean_std(values: &[f64]) -> (f64, f64) {
    if values.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, libm::sqrt(var))
}

/// Validated inputs of a cross-validation run plus fold-independent solves.
pub struct CvContext<'a> {
    bundle: &'a DatasetBundle,
    method: Method,
    plan: FoldPlan,
    params: MethodParams,
    drug_sim: Vec<(f64, Projection)>,
    target_sim: Vec<(f64, Projection)>,
}

impl<'a> CvContext<'a> {
    pub fn new(bundle: &'a DatasetBundle, method: Method, plan: FoldPlan, params: MethodParams) -> Result<Self> {
        plan.validate()?;
        params.validate()?;
        method.check(bundle, plan.mode)?;
        let solve_all = |side: Side, choice: &ParamChoice| -> Result<Vec<(f64, Projection)>> {
            let sim = bundle.similarity(side).expect("checked by Method::check");
            choice
                .values()
                .iter()
                .map(|&alpha| Ok((alpha, Projection::from_similarity(sim, &params.solver.with_alpha(alpha))?)))
                .collect()
        };
        let drug_sim = if matches!(method, Method::ZD | Method::ZADT) {
            solve_all(Side::Drug, &params.alpha_sd)?
        } else {
            Vec::new()
        };
        let target_sim = if matches!(method, Method::ZT | Method::ZADT) {
            solve_all(Side::Target, &params.alpha_st)?
        } else {
            Vec::new()
        };
        Ok(CvContext {
            bundle,
            method,
            plan,
            params,
            drug_sim,
            target_sim,
        })
    }

    pub fn plan(&self) -> &FoldPlan {
        &self.plan
    }

    pub fn method(&self) -> Method {
        self.method
    }

    /// Diagnostics of the fold-independent similarity solves.
    pub fn similarity_diagnostics(&self) -> Vec<SolveDiagnostics> {
        self.drug_sim
            .iter()
            .chain(&self.target_sim)
            .map(|(_, p)| p.diagnostics)
            .collect()
    }

    pub fn fold_specs(&self) -> Result<Vec<FoldSpec>> {
        self.plan.specs(self.bundle.interactions())
    }

    /// Fits on the fold's training data and scores its candidates.
    pub fn evaluate(&self, spec: &FoldSpec) -> Result<FoldOutcome> {
        let full = self.bundle.interactions();
        let train = spec.train(full);
        let candidates = spec.candidates(&train);
        let selected = self.select(&train, spec)?;
        let scores = self.fit(&train, &selected)?;
        let (auc, aupr) = evaluate_candidates(&|i, j| scores.get(i, j), &candidates, full).map_err(|e| match e {
            Error::UndefinedMetric(msg) => Error::UndefinedMetric(alloc::format!(
                "repetition {} fold {}: {msg}",
                spec.repetition, spec.index
            )),
            other => other,
        })?;
        Ok(FoldOutcome {
            repetition: spec.repetition,
            fold: spec.index,
            auc,
            aupr,
            n_candidates: candidates.len(),
            n_test_positives: candidates.iter().filter(|&&(i, j)| full.contains(i, j)).count(),
            selected,
            diagnostics: scores.diagnostics().to_vec(),
        })
    }

    /// Sequential run over every fold of the plan.
    pub fn run(&self) -> Result<EvalResult> {
        let outcomes = self
            .fold_specs()?
            .iter()
            .map(|s| self.evaluate(s))
            .collect::<Result<Vec<_>>>()?;
        Ok(EvalResult::from_folds(outcomes))
    }

    /// Scores for `train` with every parameter pinned by `selected`.
    pub fn fit(&self, train: &InteractionMatrix, selected: &SelectedParams) -> Result<ScoreMatrix> {
        let solver = &self.params.solver;
        let za = |sel: &SelectedParams| -> Result<ScoreMatrix> {
            let d = Projection::from_interactions(train, Side::Drug, &solver.with_alpha(sel.alpha_d.expect("alpha_d selected")))?;
            let t = Projection::from_interactions(train, Side::Target, &solver.with_alpha(sel.alpha_t.expect("alpha_t selected")))?;
            za_from_projections(train, &d, &t)
        };
        let zd = |sel: &SelectedParams| side_from_projection(train, lookup(&self.drug_sim, sel.alpha_sd.expect("alpha_sd selected")));
        let zt = |sel: &SelectedParams| side_from_projection(train, lookup(&self.target_sim, sel.alpha_st.expect("alpha_st selected")));
        match self.method {
            Method::ZA => za(selected),
            Method::ZD => zd(selected),
            Method::ZT => zt(selected),
            Method::ZADT => combine_zadt(&za(selected)?, &zd(selected)?, &zt(selected)?, self.params.gammas),
            m => BaselineParams {
                method: m.baseline().expect("remaining methods are baselines"),
                beta: selected.katz_beta.unwrap_or(0.0),
            }
            .scores(train),
        }
    }

    /// Parameter selection on `train` as a whole, for fitting outside of CV.
    pub fn tune(&self, train: &InteractionMatrix) -> Result<SelectedParams> {
        let held_out = match self.plan.mode {
            HoldoutMode::Pair => HeldOut::Pairs(Vec::new()),
            HoldoutMode::Drug => HeldOut::Entities(Side::Drug, Vec::new()),
            HoldoutMode::Target => HeldOut::Entities(Side::Target, Vec::new()),
        };
        let spec = FoldSpec {
            repetition: 0,
            index: 0,
            held_out,
        };
        self.select(train, &spec)
    }

    fn select(&self, train: &InteractionMatrix, spec: &FoldSpec) -> Result<SelectedParams> {
        let p = &self.params;
        let first = |c: &ParamChoice| Some(c.values()[0]);
        let mut sel = SelectedParams::default();
        let needs_za = matches!(self.method, Method::ZA | Method::ZADT);
        let needs_zd = matches!(self.method, Method::ZD | Method::ZADT);
        let needs_zt = matches!(self.method, Method::ZT | Method::ZADT);
        let katz_grid = if self.method == Method::Katz {
            let limit = katz_beta_limit(train)?;
            let valid: Vec<f64> = p.katz_beta.values().iter().copied().filter(|&b| b < limit).collect();
            if valid.is_empty() {
                return Err(Error::InvalidConfig(alloc::format!(
                    "no Katz decay in {:?} satisfies beta < {limit} on the training data",
                    p.katz_beta.values()
                )));
            }
            valid
        } else {
            Vec::new()
        };
        if needs_za {
            sel.alpha_d = first(&p.alpha_d);
            sel.alpha_t = first(&p.alpha_t);
        }
        if needs_zd {
            sel.alpha_sd = first(&p.alpha_sd);
        }
        if needs_zt {
            sel.alpha_st = first(&p.alpha_st);
        }
        if self.method == Method::Katz {
            sel.katz_beta = Some(katz_grid[0]);
        }

        let tune_za = needs_za && (p.alpha_d.is_tuned() || p.alpha_t.is_tuned());
        let tune_zd = needs_zd && p.alpha_sd.is_tuned();
        let tune_zt = needs_zt && p.alpha_st.is_tuned();
        let tune_katz = katz_grid.len() > 1;
        if !(tune_za || tune_zd || tune_zt || tune_katz) {
            return Ok(sel);
        }

        let inner = self.inner_split(train, spec)?;
        let inner_train = inner.train(train);
        let inner_candidates = inner.candidates(&inner_train);
        let score = |z: &dyn Fn(usize, usize) -> f64| -> Result<f64> {
            Ok(evaluate_candidates(z, &inner_candidates, train)?.1)
        };

        if tune_za {
            let solver = &p.solver;
            let drug: Vec<DenseMatrix> = p
                .alpha_d
                .values()
                .iter()
                .map(|&a| Projection::from_interactions(&inner_train, Side::Drug, &solver.with_alpha(a))?.apply(&inner_train))
                .collect::<Result<_>>()?;
            let target: Vec<DenseMatrix> = p
                .alpha_t
                .values()
                .iter()
                .map(|&a| Projection::from_interactions(&inner_train, Side::Target, &solver.with_alpha(a))?.apply(&inner_train))
                .collect::<Result<_>>()?;
            let mut best = (f64::NEG_INFINITY, 0, 0);
            for (di, zd) in drug.iter().enumerate() {
                for (ti, zt) in target.iter().enumerate() {
                    let s = score(&|i, j| 0.5 * (zd.get(i, j) + zt.get(i, j)))?;
                    if s > best.0 {
                        best = (s, di, ti);
                    }
                }
            }
            sel.alpha_d = Some(p.alpha_d.values()[best.1]);
            sel.alpha_t = Some(p.alpha_t.values()[best.2]);
        }
        let pick_side = |projs: &[(f64, Projection)]| -> Result<f64> {
            let mut best = (f64::NEG_INFINITY, projs[0].0);
            for (alpha, proj) in projs {
                let z = proj.apply(&inner_train)?;
                let s = score(&|i, j| z.get(i, j))?;
                if s > best.0 {
                    best = (s, *alpha);
                }
            }
            Ok(best.1)
        };
        if tune_zd {
            sel.alpha_sd = Some(pick_side(&self.drug_sim)?);
        }
        if tune_zt {
            sel.alpha_st = Some(pick_side(&self.target_sim)?);
        }
        if tune_katz {
            let mut best = (f64::NEG_INFINITY, katz_grid[0]);
            for &beta in &katz_grid {
                let z = crate::baselines::katz_scores(&inner_train, beta)?;
                let s = score(&|i, j| z.get(i, j))?;
                if s > best.0 {
                    best = (s, beta);
                }
            }
            sel.katz_beta = Some(best.1);
        }
        Ok(sel)
    }

    /// First fold of a same-manner split of the training units.
    fn inner_split(&self, train: &InteractionMatrix, spec: &FoldSpec) -> Result<FoldSpec> {
        let seed = self
            .plan
            .seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add((spec.repetition as u64).wrapping_mul(self.plan.k as u64))
            .wrapping_add(spec.index as u64 + 1);
        let held_out = match &spec.held_out {
            HeldOut::Pairs(_) => {
                let units = train.positives();
                let groups = partition(units.len(), self.plan.k, seed, "training interactions")?;
                HeldOut::Pairs(groups[0].iter().map(|&u| units[u]).collect())
            }
            HeldOut::Entities(side, outer) => {
                let count = match side {
                    Side::Drug => train.n_drugs(),
                    Side::Target => train.n_targets(),
                };
                let units: Vec<usize> = (0..count).filter(|e| outer.binary_search(e).is_err()).collect();
                let groups = partition(units.len(), self.plan.k, seed, "training entities")?;
                HeldOut::Entities(*side, groups[0].iter().map(|&u| units[u]).collect())
            }
        };
        Ok(FoldSpec {
            repetition: spec.repetition,
            index: spec.index,
            held_out,
        })
    }
}

fn lookup(projs: &[(f64, Projection)], alpha: f64) -> &Projection {
    &projs
        .iter()
        .find(|(a, _)| *a == alpha)
        .expect("selected alpha comes from the solved grid")
        .1
}

/// AUC and AUPR of `score` over `candidates`, labelled by `labels`.
fn evaluate_candidates(
    score: &dyn Fn(usize, usize) -> f64,
    candidates: &[(usize, usize)],
    labels: &InteractionMatrix,
) -> Result<(f64, f64)> {
    let scored: Vec<(f64, bool)> = candidates
        .iter()
        .map(|&(i, j)| (score(i, j), labels.contains(i, j)))
        .collect();
    Ok((auc(&scored)?, aupr(&scored)?))
}

pub fn run_cv(bundle: &DatasetBundle, method: Method, plan: &FoldPlan, params: &MethodParams) -> Result<EvalResult> {
    CvContext::new(bundle, method, *plan, params.clone())?.run()
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub alpha: f64,
    pub result: EvalResult,
}

/// One cross-validation per alpha; every row shares the plan's partitions.
pub fn sweep_alpha(
    bundle: &DatasetBundle,
    method: Method,
    plan: &FoldPlan,
    params: &MethodParams,
    grid: &[f64],
) -> Result<Vec<SweepRow>> {
    if grid.is_empty() {
        return Err(Error::InvalidInput("alpha grid is empty".into()));
    }
    grid.iter()
        .map(|&alpha| {
            let p = params.with_method_alpha(method, alpha)?;
            Ok(SweepRow {
                alpha,
                result: run_cv(bundle, method, plan, &p)?,
            })
        })
        .collect()
}
