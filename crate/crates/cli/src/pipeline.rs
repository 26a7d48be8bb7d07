use std::path::{Path, PathBuf};

use accentgram_core::audio_io::load_wav;
use accentgram_core::dsp::{extract_mfcc, pool_mean, MfccConfig};
use accentgram_core::ml::{compare_models, repeated_compare};
use accentgram_core::stats_mv::{cda, manova};
use accentgram_core::stats_uni::run_table1;
use accentgram_core::{Dataset, SpeakerRecord};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::args::{Command, RunConfig};
use crate::error::{CliError, CliResult};
use crate::features::{feature_column, read_features, write_features};
use crate::manifest::{load_manifest, Manifest, ManifestRow};
use crate::plot::{boxplot_svg, cda_strip_svg};
use crate::report::{self, write_atomic, write_json};

pub const FAILURE_LOG: &str = "extract_failures.log";

fn speaker_features(row: &ManifestRow, cfg: &MfccConfig) -> accentgram_core::Result<SpeakerRecord> {
    let clip = load_wav(&row.path)?;
    let v = pool_mean(&extract_mfcc(&clip, cfg)?)?;
    Ok(SpeakerRecord {
        speaker_id: row.speaker_id.clone(),
        group: row.group.clone(),
        features: v.coeffs,
    })
}

/// Pooled MFCC vectors for every manifest row, computed in parallel and
/// returned in manifest order. Failures are returned alongside successes.
pub fn extract_records(
    manifest: &Manifest,
    cfg: &MfccConfig,
) -> (Vec<SpeakerRecord>, Vec<(ManifestRow, accentgram_core::Error)>) {
    let results: Vec<_> = manifest.rows.par_iter().map(|r| speaker_features(r, cfg)).collect();
    let mut ok = Vec::new();
    let mut failed = Vec::new();
    for (row, res) in manifest.rows.iter().zip(results) {
        match res {
            Ok(r) => ok.push(r),
            Err(e) => failed.push((row.clone(), e)),
        }
    }
    (ok, failed)
}

pub fn cmd_extract(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let manifest_path = cfg
        .manifest
        .as_deref()
        .ok_or_else(|| CliError::Usage("extract needs --manifest PATH".into()))?;
    let manifest = load_manifest(manifest_path, cfg.audio_root.as_deref())?;
    let (records, failed) = extract_records(&manifest, &cfg.mfcc);
    let log = cfg.out.join(FAILURE_LOG);
    let mut outputs = Vec::new();
    if !failed.is_empty() {
        if !cfg.keep_going {
            let (row, e) = failed.into_iter().next().unwrap();
            return Err(with_speaker(e, &row.speaker_id));
        }
        let mut text = String::from("speaker_id\tpath\terror\n");
        for (row, e) in &failed {
            text.push_str(&format!("{}\t{}\t{}\n", row.speaker_id, row.path.display(), e));
        }
        write_atomic(&log, text.as_bytes())?;
        eprintln!(
            "warning: {} of {} files failed; see {}",
            failed.len(),
            manifest.rows.len(),
            log.display()
        );
        outputs.push(log);
    } else if log.exists() {
        std::fs::remove_file(&log).map_err(|e| CliError::io(&log, e))?;
    }
    if records.is_empty() {
        return Err(CliError::input(manifest_path, "no file could be processed"));
    }
    let path = cfg.out.join("features.csv");
    write_features(&path, &records)?;
    println!("features: {} speakers -> {}", records.len(), path.display());
    outputs.insert(0, path);
    Ok(outputs)
}

/// Prefixes the speaker id to messages that do not already carry a path.
fn with_speaker(e: accentgram_core::Error, speaker: &str) -> CliError {
    use accentgram_core::Error as E;
    let msg = |m: String| format!("speaker {speaker}: {m}");
    CliError::Core(match e {
        E::InvalidArgument(m) => E::InvalidArgument(msg(m)),
        E::InvalidData(m) => E::InvalidData(msg(m)),
        E::ZeroVariance(m) => E::ZeroVariance(msg(m)),
        E::Singular(m) => E::Singular(msg(m)),
        E::Numerical(m) => E::Numerical(msg(m)),
        other => other,
    })
}

fn dataset(cfg: &RunConfig) -> CliResult<Dataset> {
    read_features(&cfg.features_path())
}

pub fn cmd_stats(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let ds = dataset(cfg)?;
    let report = run_table1(&ds, cfg.table1_options())?;
    let t1 = cfg.out.join("table1.csv");
    let asm = cfg.out.join("assumptions.csv");
    let js = cfg.out.join("stats.json");
    write_atomic(&t1, report::table1_csv(&report).as_bytes())?;
    write_atomic(&asm, report::assumptions_csv(&report).as_bytes())?;
    write_json(&js, &report::stats_json(&report))?;
    let flagged: Vec<String> = report.flagged().iter().map(|&f| feature_column(f)).collect();
    println!(
        "stats: {} features, Bonferroni alpha {:.6}, flagged [{}]",
        report.rows.len(),
        report.bonferroni_alpha,
        flagged.join(", ")
    );
    Ok(vec![t1, asm, js])
}

pub fn cmd_manova(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let ds = dataset(cfg)?;
    let m = manova(&ds)?;
    let path = cfg.out.join("manova.json");
    write_json(&path, &report::manova_json(&m))?;
    println!(
        "manova: Pillai V = {:.4}, F({}, {}) = {:.3}, p = {:.4e}; Box's M = {:.3}",
        m.pillai_v, m.df1, m.df2, m.f_stat, m.p, m.box_m
    );
    Ok(vec![path])
}

pub fn cmd_cda(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let ds = dataset(cfg)?;
    let c = cda(&ds)?;
    let js = cfg.out.join("cda.json");
    let scores = cfg.out.join("cda_scores.csv");
    write_json(&js, &report::cda_json(&c))?;
    write_atomic(&scores, report::cda_scores_csv(&c).as_bytes())?;
    println!(
        "cda: eigenvalue {:.4}, canonical correlation {:.4}",
        c.eigenvalue, c.canonical_correlation
    );
    Ok(vec![js, scores])
}

pub fn cmd_classify(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let ds = dataset(cfg)?;
    let full: Vec<usize> = (1..=ds.n_features()).collect();
    let (forest, plan) = (cfg.forest(), cfg.split());
    let cmp = compare_models(&ds, &full, &cfg.reduced_features, &forest, &plan)?;
    let repeated = if cfg.repeats > 1 {
        Some(repeated_compare(
            &ds,
            &full,
            &cfg.reduced_features,
            &forest,
            &plan,
            cfg.repeats,
        )?)
    } else {
        None
    };
    let path = cfg.out.join("classify.json");
    write_json(&path, &report::classify_json(cfg, &cmp, repeated.as_ref()))?;
    println!(
        "classify: full {:.2}% [{:.2}, {:.2}], reduced {:.2}% [{:.2}, {:.2}], McNemar b={} c={} p={:.4}",
        100.0 * cmp.full.accuracy,
        100.0 * cmp.full.ci_low,
        100.0 * cmp.full.ci_high,
        100.0 * cmp.reduced.accuracy,
        100.0 * cmp.reduced.ci_low,
        100.0 * cmp.reduced.ci_high,
        cmp.mcnemar.b,
        cmp.mcnemar.c,
        cmp.mcnemar.p
    );
    if let Some(r) = &repeated {
        println!(
            "classify: {} splits, full {:.4} +/- {:.4}, reduced {:.4} +/- {:.4}",
            cfg.repeats, r.full_mean, r.full_sd, r.reduced_mean, r.reduced_sd
        );
    }
    Ok(vec![path])
}

fn read_scores(path: &Path) -> CliResult<Vec<(String, f64)>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::input(path, format!("missing report input ({e}); run `cda` first")))?;
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().map_err(|e| CliError::input(path, e.to_string()))?.clone();
    if header.iter().collect::<Vec<_>>() != ["speaker_id", "group", "score"] {
        return Err(CliError::input(path, "header must be `speaker_id,group,score`"));
    }
    let mut out = Vec::new();
    for (i, rec) in rdr.records().enumerate() {
        let rec = rec.map_err(|e| CliError::input(path, format!("line {}: {e}", i + 2)))?;
        let v: f64 = rec[2]
            .parse()
            .map_err(|e| CliError::input(path, format!("line {}: {e}", i + 2)))?;
        out.push((rec[1].to_string(), v));
    }
    Ok(out)
}

pub fn cmd_plot(cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    let ds = dataset(cfg)?;
    let scores = read_scores(&cfg.out.join("cda_scores.csv"))?;
    let mut outputs = Vec::new();
    for &f in &cfg.reduced_features {
        if f > ds.n_features() {
            return Err(CliError::Usage(format!(
                "--features: index {f} outside 1..={}",
                ds.n_features()
            )));
        }
        let name = feature_column(f);
        let path = cfg.out.join(format!("boxplot_{name}.svg"));
        write_atomic(&path, boxplot_svg(&ds, f, &name.to_uppercase())?.as_bytes())?;
        outputs.push(path);
    }
    let path = cfg.out.join("cda_scores.svg");
    write_atomic(&path, cda_strip_svg(ds.labels(), &scores)?.as_bytes())?;
    outputs.push(path);
    println!("plot: {} figures", outputs.len());
    Ok(outputs)
}

fn stage(cmd: Command, cfg: &RunConfig) -> CliResult<Vec<PathBuf>> {
    match cmd {
        Command::Extract => cmd_extract(cfg),
        Command::Stats => cmd_stats(cfg),
        Command::Manova => cmd_manova(cfg),
        Command::Cda => cmd_cda(cfg),
        Command::Classify => cmd_classify(cfg),
        Command::Plot => cmd_plot(cfg),
        Command::All => unreachable!("all is expanded by the caller"),
    }
}

const ALL_STAGES: [Command; 6] = [
    Command::Extract,
    Command::Stats,
    Command::Manova,
    Command::Cda,
    Command::Classify,
    Command::Plot,
];

/// Runs one command (or every stage for `all`, stopping at the first
/// failure) and writes run.json. Returns the first error, if any.
pub fn execute(cmd: Command, cfg: &RunConfig) -> CliResult<()> {
    let started = chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true);
    let stages: Vec<Command> = if cmd == Command::All {
        ALL_STAGES.to_vec()
    } else {
        vec![cmd]
    };
    let mut log = Vec::new();
    let mut first_err = None;
    for s in stages {
        if first_err.is_some() {
            log.push(json!({"stage": s.name(), "status": "skipped"}));
            continue;
        }
        match stage(s, cfg) {
            Ok(outputs) => log.push(json!({
                "stage": s.name(),
                "status": "ok",
                "outputs": outputs.iter().map(|p| rel(p, &cfg.out)).collect::<Vec<_>>(),
            })),
            Err(e) => {
                log.push(json!({
                    "stage": s.name(),
                    "status": "failed",
                    "error": e.to_string(),
                    "exit_code": e.exit_code(),
                }));
                first_err = Some(e);
            }
        }
    }
    let run: Value = json!({
        "tool": "accentgram",
        "version": env!("CARGO_PKG_VERSION"),
        "command": cmd.name(),
        "timestamp": started,
        "config": report::config_json(cfg),
        "stages": log,
        "exit_code": first_err.as_ref().map_or(0, CliError::exit_code),
    });
    write_json(&cfg.out.join("run.json"), &run)?;
    first_err.map_or(Ok(()), Err)
}

fn rel(p: &Path, base: &Path) -> String {
    p.strip_prefix(base).unwrap_or(p).to_string_lossy().into_owned()
}
