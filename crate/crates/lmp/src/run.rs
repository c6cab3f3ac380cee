//! Fold evaluation across worker threads.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;

use lmp_core::{CvContext, EvalResult, FoldOutcome};

/// Evaluates every fold of `ctx`; results are ordered by (repetition, fold)
/// whatever the thread count.
pub fn evaluate_folds(ctx: &CvContext<'_>, threads: usize) -> lmp_core::Result<EvalResult> {
    let specs = ctx.fold_specs()?;
    let total = specs.len();
    let log_fold = |o: &FoldOutcome| {
        log::info!(
            "repetition {} fold {}: auc {:.4} aupr {:.4}",
            o.repetition, o.fold, o.auc, o.aupr
        );
        for d in o.diagnostics.iter().filter(|d| !d.converged) {
            log::warn!(
                "repetition {} fold {}: solve with alpha {} stopped after {} iterations (residuals {:.3e}, {:.3e})",
                o.repetition, o.fold, d.alpha, d.iterations, d.residual_feasibility, d.residual_consistency
            );
        }
    };
    let outcomes = if threads <= 1 || total <= 1 {
        let mut out = Vec::with_capacity(total);
        for spec in &specs {
            let o = ctx.evaluate(spec)?;
            log_fold(&o);
            out.push(o);
        }
        out
    } else {
        let next = AtomicUsize::new(0);
        let slots: Mutex<Vec<Option<lmp_core::Result<FoldOutcome>>>> = Mutex::new(vec![None; total]);
        thread::scope(|s| {
            for _ in 0..threads.min(total) {
                s.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::Relaxed);
                    if i >= total {
                        break;
                    }
                    let r = ctx.evaluate(&specs[i]);
                    if let Ok(o) = &r {
                        log_fold(o);
                    }
                    slots.lock().expect("no worker panicked")[i] = Some(r);
                });
            }
        });
        slots
            .into_inner()
            .expect("no worker panicked")
            .into_iter()
            .map(|r| r.expect("every fold evaluated"))
            .collect::<lmp_core::Result<Vec<_>>>()?
    };
    Ok(EvalResult::from_folds(outcomes))
}
