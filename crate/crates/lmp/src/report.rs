//! Output files: CSV at six significant digits, JSON at full precision.

use std::fs;
use std::path::Path;

use lmp_core::{EvalResult, RankedPair, SweepRow};
use serde::Serialize;

use crate::error::{Error, Result};

pub const METRICS_FILE: &str = "metrics.csv";
pub const SWEEP_FILE: &str = "sweep.csv";
pub const PREDICTIONS_FILE: &str = "predictions.csv";
pub const SUMMARY_FILE: &str = "summary.json";
pub const TIMING_FILE: &str = "timing.json";

/// `%g` with six significant digits, as printed by C.
pub fn fmt_g6(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf" } else { "-inf" }.into();
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.5e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..6).contains(&exp) {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_fraction(mantissa), exp.abs())
    } else {
        trim_fraction(&format!("{x:.*}", (5 - exp) as usize)).to_string()
    }
}

fn trim_fraction(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(w.into_inner().expect("in-memory writer")).expect("utf-8 fields")
}

fn record<const N: usize>(w: &mut csv::Writer<Vec<u8>>, fields: [String; N]) {
    w.write_record(&fields).expect("in-memory writer");
}

/// `repetition,fold,auc,aupr`, one row per fold.
pub fn metrics_csv(result: &EvalResult) -> String {
    let mut w = csv_writer();
    record(&mut w, ["repetition", "fold", "auc", "aupr"].map(String::from));
    for f in &result.per_fold {
        record(
            &mut w,
            [f.repetition.to_string(), f.fold.to_string(), fmt_g6(f.auc), fmt_g6(f.aupr)],
        );
    }
    finish(w)
}

/// `alpha,mean_auc,mean_aupr,std_auc,std_aupr`, one row per grid point.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut w = csv_writer();
    record(&mut w, ["alpha", "mean_auc", "mean_aupr", "std_auc", "std_aupr"].map(String::from));
    for r in rows {
        let m = &r.result;
        record(
            &mut w,
            [r.alpha, m.mean_auc, m.mean_aupr, m.std_auc, m.std_aupr].map(fmt_g6),
        );
    }
    finish(w)
}

/// `rank,drug_id,target_id,score`; ranks start at 1.
pub fn predictions_csv(ranked: &[RankedPair]) -> String {
    let mut w = csv_writer();
    record(&mut w, ["rank", "drug_id", "target_id", "score"].map(String::from));
    for (k, p) in ranked.iter().enumerate() {
        record(
            &mut w,
            [(k + 1).to_string(), p.drug_id.clone(), p.target_id.clone(), fmt_g6(p.score)],
        );
    }
    finish(w)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable report");
    s.push('\n');
    s
}

pub fn write_file(dir: &Path, file: &str, contents: &str) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = dir.join(file);
    fs::write(&path, contents).map_err(|e| Error::io(path, e))
}

#[derive(Debug, Serialize)]
pub struct Timing {
    pub command: &'static str,
    pub wall_clock_seconds: f64,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g6_matches_printf() {
        let cases = [
            (0.8333333333, "0.833333"),
            (1.0, "1"),
            (0.5, "0.5"),
            (123456.7, "123457"),
            (1234567.0, "1.23457e+06"),
            (0.0001234567, "0.000123457"),
            (0.00001234567, "1.23457e-05"),
            (-2.5e-7, "-2.5e-07"),
            (999999.5, "1e+06"),
            (0.1 + 0.2, "0.3"),
            (100.0, "100"),
            (0.0, "0"),
        ];
        for (x, want) in cases {
            assert_eq!(fmt_g6(x), want, "{x}");
        }
    }
}
