use std::path::Path;

use accentgram_core::ml::{Comparison, RepeatedComparison};
use accentgram_core::stats_mv::{CdaResult, ManovaResult};
use accentgram_core::stats_uni::Table1Report;
use serde_json::{json, Map, Value};

use crate::args::RunConfig;
use crate::error::{CliError, CliResult};
use crate::features::feature_column;

/// Fixed six decimals; negative zero prints as zero.
pub fn csv_num(x: f64) -> String {
    if !x.is_finite() {
        return String::new();
    }
    let s = format!("{x:.6}");
    if s == "-0.000000" {
        "0.000000".into()
    } else {
        s
    }
}

/// JSON number rounded to 9 significant digits; non-finite becomes null.
pub fn json_num(x: f64) -> Value {
    if !x.is_finite() {
        return Value::Null;
    }
    let r: f64 = format!("{x:.8e}").parse().unwrap();
    let r = if r == 0.0 { 0.0 } else { r };
    serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number)
}

fn json_nums(xs: &[f64]) -> Value {
    Value::Array(xs.iter().map(|&x| json_num(x)).collect())
}

/// Writes to a sibling temp file and renames, so readers never see a
/// partial report.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let tmp = path.with_file_name(format!(".{name}.tmp"));
    std::fs::write(&tmp, bytes).map_err(|e| CliError::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| CliError::io(path, e))
}

pub fn write_json(path: &Path, value: &Value) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    write_atomic(path, s.as_bytes())
}

fn csv_string(rows: Vec<Vec<String>>) -> String {
    let mut wtr = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    for r in rows {
        wtr.write_record(&r).unwrap();
    }
    String::from_utf8(wtr.into_inner().unwrap()).unwrap()
}

fn opt(x: Option<f64>) -> String {
    x.map(csv_num).unwrap_or_default()
}

pub fn table1_csv(report: &Table1Report) -> String {
    let Some(first) = report.rows.first() else {
        return String::new();
    };
    let (a, b) = (&first.group_a, &first.group_b);
    let mut rows = vec![[
        "feature".to_string(),
        "label".into(),
        format!("n_{a}"),
        format!("mean_{a}"),
        format!("sd_{a}"),
        format!("n_{b}"),
        format!("mean_{b}"),
        format!("sd_{b}"),
        "test_used".into(),
        "t".into(),
        "df".into(),
        "p_two_sided".into(),
        "p_one_sided".into(),
        "ci_low".into(),
        "ci_high".into(),
        "cohens_d".into(),
        "significant_bonferroni".into(),
    ]
    .to_vec()];
    for r in &report.rows {
        rows.push(vec![
            r.feature.to_string(),
            r.label.clone(),
            r.n_a.to_string(),
            csv_num(r.mean_a),
            csv_num(r.sd_a),
            r.n_b.to_string(),
            csv_num(r.mean_b),
            csv_num(r.sd_b),
            r.test_used.as_str().into(),
            csv_num(r.t),
            csv_num(r.df),
            csv_num(r.p_two_sided),
            csv_num(r.p_one_sided),
            csv_num(r.ci_low),
            csv_num(r.ci_high),
            csv_num(r.cohens_d),
            r.significant_bonferroni.to_string(),
        ]);
    }
    csv_string(rows)
}

pub fn assumptions_csv(report: &Table1Report) -> String {
    let mut rows = vec![[
        "feature",
        "label",
        "group",
        "n",
        "shapiro_w",
        "shapiro_p",
        "ks_d",
        "ks_p",
        "levene_w",
        "levene_p",
        "note",
    ]
    .map(String::from)
    .to_vec()];
    for n in &report.normality {
        let v = &report.variance[n.feature - 1];
        rows.push(vec![
            n.feature.to_string(),
            report.rows[n.feature - 1].label.clone(),
            n.group.clone(),
            n.n.to_string(),
            opt(n.shapiro_w),
            opt(n.shapiro_p),
            opt(n.ks_d),
            opt(n.ks_p),
            csv_num(v.levene_w),
            csv_num(v.levene_p),
            n.note.clone().unwrap_or_default(),
        ]);
    }
    csv_string(rows)
}

pub fn stats_json(report: &Table1Report) -> Value {
    json!({
        "alpha": json_num(report.options.alpha),
        "n_tests": report.rows.len(),
        "bonferroni_alpha": json_num(report.bonferroni_alpha),
        "sidedness": report.options.sidedness,
        "levene_alpha": json_num(report.options.levene_alpha),
        "flagged": report.flagged(),
    })
}

pub fn manova_json(m: &ManovaResult) -> Value {
    json!({
        "pillai_v": json_num(m.pillai_v),
        "f_stat": json_num(m.f_stat),
        "df1": m.df1,
        "df2": m.df2,
        "p": json_num(m.p),
        "partial_eta_sq": json_num(m.partial_eta_sq),
        "box_m": json_num(m.box_m),
        "box_chi2": json_num(m.box_chi2),
        "box_df": m.box_df,
        "box_p": json_num(m.box_p),
    })
}

pub fn cda_json(c: &CdaResult) -> Value {
    let mut centroids = Map::new();
    for (label, v) in &c.centroids {
        centroids.insert(label.clone(), json_num(*v));
    }
    json!({
        "eigenvalue": json_num(c.eigenvalue),
        "canonical_correlation": json_num(c.canonical_correlation),
        "features": (1..=c.raw_coeffs.len()).map(feature_column).collect::<Vec<_>>(),
        "raw_coeffs": json_nums(&c.raw_coeffs),
        "std_coeffs": json_nums(&c.std_coeffs),
        "centroids": centroids,
    })
}

pub fn cda_scores_csv(c: &CdaResult) -> String {
    let mut rows = vec![vec!["speaker_id".to_string(), "group".into(), "score".into()]];
    for s in &c.scores {
        rows.push(vec![s.speaker_id.clone(), s.group.clone(), csv_num(s.score)]);
    }
    csv_string(rows)
}

pub fn config_json(cfg: &RunConfig) -> Value {
    json!({
        "manifest": cfg.manifest,
        "audio_root": cfg.audio_root,
        "out": cfg.out,
        "input": cfg.input,
        "mfcc": {
            "window_ms": json_num(cfg.mfcc.window_ms),
            "hop_ms": json_num(cfg.mfcc.hop_ms),
            "n_mels": cfg.mfcc.n_mels,
            "n_mfcc": cfg.mfcc.n_mfcc,
            "fmin_hz": json_num(cfg.mfcc.fmin_hz),
            "fmax_hz": cfg.mfcc.fmax_hz.map(json_num),
            "log_floor": json_num(cfg.mfcc.log_floor),
            "dynamic_range_db": json_num(cfg.mfcc.dynamic_range_db),
        },
        "alpha": json_num(cfg.alpha),
        "sidedness": cfg.sidedness,
        "seed": cfg.seed,
        "test_fraction": json_num(cfg.test_fraction),
        "reduced_features": cfg.reduced_features,
        "repeats": cfg.repeats,
        "keep_going": cfg.keep_going,
        "forest": {
            "n_trees": cfg.n_trees,
            "max_features": "floor(sqrt(n_features))",
            "min_samples_leaf": 1,
            "max_depth": null,
            "bootstrap": true,
            "seed": cfg.seed,
        },
    })
}

pub fn classify_json(cfg: &RunConfig, cmp: &Comparison, repeated: Option<&RepeatedComparison>) -> Value {
    let eval = |e: &accentgram_core::ml::ClassifierEval| {
        json!({
            "feature_set": e.feature_set,
            "correct": e.correct,
            "n_test": e.n_test,
            "accuracy": json_num(e.accuracy),
            "ci_low": json_num(e.ci_low),
            "ci_high": json_num(e.ci_high),
        })
    };
    let predictions: Vec<Value> = (0..cmp.full.n_test)
        .map(|i| {
            json!({
                "speaker_id": cmp.full.speaker_ids[i],
                "truth": cmp.full.truth[i],
                "full": cmp.full.predictions[i],
                "reduced": cmp.reduced.predictions[i],
            })
        })
        .collect();
    let mut v = json!({
        "config": config_json(cfg),
        "n_train": cmp.n_train,
        "n_test": cmp.n_test,
        "confidence": json_num(0.95),
        "full": eval(&cmp.full),
        "reduced": eval(&cmp.reduced),
        "mcnemar": {
            "model_a": "full",
            "model_b": "reduced",
            "b": cmp.mcnemar.b,
            "c": cmp.mcnemar.c,
            "chi2": json_num(cmp.mcnemar.chi2),
            "p": json_num(cmp.mcnemar.p),
            "method": cmp.mcnemar.method.as_str(),
        },
        "predictions": predictions,
    });
    if let Some(r) = repeated {
        v["repeated"] = json!({
            "repeats": r.split_seeds.len(),
            "split_seeds": r.split_seeds,
            "full_accuracy": json_nums(&r.full_accuracy),
            "reduced_accuracy": json_nums(&r.reduced_accuracy),
            "full_mean": json_num(r.full_mean),
            "full_sd": json_num(r.full_sd),
            "reduced_mean": json_num(r.reduced_mean),
            "reduced_sd": json_num(r.reduced_sd),
        });
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn number_formats() {
        assert_eq!(csv_num(1.0), "1.000000");
        assert_eq!(csv_num(-1e-9), "0.000000");
        assert_eq!(csv_num(-1131.37084989848), "-1131.370850");
        assert_eq!(csv_num(f64::NAN), "");
        assert_eq!(json_num(0.1 + 0.2).to_string(), "0.3");
        assert_eq!(json_num(1.0 / 3.0).to_string(), "0.333333333");
        assert_eq!(json_num(2.0 / 3.0 * 1e-7).to_string(), "6.66666667e-8");
        assert_eq!(json_num(f64::INFINITY), Value::Null);
        assert_eq!(json_num(-0.0).to_string(), "0.0");
    }

    #[test]
    fn atomic_write_leaves_no_temp() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/x.json");
        write_json(&p, &json!({"a": 1})).unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "{\n  \"a\": 1\n}\n");
        let names: Vec<_> = std::fs::read_dir(p.parent().unwrap()).unwrap().collect();
        assert_eq!(names.len(), 1);
    }
}
