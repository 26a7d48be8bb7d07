use std::path::PathBuf;

use accentgram_core::dsp::MfccConfig;
use accentgram_core::ml::{ForestConfig, SplitPlan};
use accentgram_core::stats_uni::{Sidedness, Table1Options};
use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(
    name = "accentgram",
    version,
    about = "MFCC features, group statistics and accent classification"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Pool MFCCs per speaker into features.csv
    Extract,
    /// Per-feature tests (table1.csv, assumptions.csv)
    Stats,
    /// Pillai's trace and Box's M (manova.json)
    Manova,
    /// Canonical discriminant function (cda.json, cda_scores.csv)
    Cda,
    /// Full vs reduced random forest with McNemar comparison (classify.json)
    Classify,
    /// Boxplot and canonical-score SVGs
    Plot,
    /// Every stage in order, plus run.json
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Extract => "extract",
            Self::Stats => "stats",
            Self::Manova => "manova",
            Self::Cda => "cda",
            Self::Classify => "classify",
            Self::Plot => "plot",
            Self::All => "all",
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct Options {
    /// CSV with header `path,group,speaker_id`
    #[arg(long, global = true, value_name = "PATH")]
    pub manifest: Option<PathBuf>,
    /// Base directory for relative manifest paths (default: the manifest's directory)
    #[arg(long, global = true, value_name = "DIR")]
    pub audio_root: Option<PathBuf>,
    /// Output directory
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Features table to analyse (default: OUT/features.csv)
    #[arg(long, global = true, value_name = "PATH")]
    pub input: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    #[arg(long, global = true, default_value_t = 0.30)]
    pub test_fraction: f64,
    #[arg(long, global = true, default_value_t = 500)]
    pub trees: usize,
    /// Reduced feature set, 1-based MFCC indices
    #[arg(long, global = true, default_value = "1,2,5")]
    pub features: String,
    #[arg(long, global = true, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long, global = true, default_value_t = 25.0)]
    pub window_ms: f64,
    #[arg(long, global = true, default_value_t = 10.0)]
    pub hop_ms: f64,
    #[arg(long, global = true, default_value_t = 128)]
    pub n_mels: usize,
    #[arg(long, global = true, default_value_t = 13)]
    pub n_mfcc: usize,
    /// Number of stratified splits to evaluate
    #[arg(long, global = true, default_value_t = 1)]
    pub repeats: usize,
    /// Log extraction failures to extract_failures.log and continue
    #[arg(long, global = true)]
    pub keep_going: bool,
    /// Use one-sided t-test p-values for the Bonferroni flag
    #[arg(long, global = true)]
    pub one_sided: bool,
}

/// Validated settings for a run; serialized verbatim into run.json and
/// classify.json.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub manifest: Option<PathBuf>,
    pub audio_root: Option<PathBuf>,
    pub out: PathBuf,
    pub input: Option<PathBuf>,
    pub mfcc: MfccConfig,
    pub alpha: f64,
    pub sidedness: Sidedness,
    pub seed: u64,
    pub test_fraction: f64,
    pub n_trees: usize,
    pub reduced_features: Vec<usize>,
    pub repeats: usize,
    pub keep_going: bool,
}

pub fn parse_feature_list(s: &str) -> CliResult<Vec<usize>> {
    let list: Result<Vec<usize>, _> = s.split(',').map(|t| t.trim().parse::<usize>()).collect();
    match list {
        Ok(v) if !v.is_empty() => Ok(v),
        _ => Err(CliError::Usage(format!(
            "--features: expected comma-separated indices, got {s:?}"
        ))),
    }
}

impl RunConfig {
    pub fn from_options(o: &Options) -> CliResult<Self> {
        let out = o
            .out
            .clone()
            .ok_or_else(|| CliError::Usage("--out DIR is required".into()))?;
        let mfcc = MfccConfig {
            window_ms: o.window_ms,
            hop_ms: o.hop_ms,
            n_mels: o.n_mels,
            n_mfcc: o.n_mfcc,
            ..MfccConfig::default()
        };
        mfcc.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        if !(o.alpha > 0.0 && o.alpha < 1.0) {
            return Err(CliError::Usage(format!("--alpha must lie in (0, 1), got {}", o.alpha)));
        }
        if !(o.test_fraction > 0.0 && o.test_fraction < 1.0) {
            return Err(CliError::Usage(format!(
                "--test-fraction must lie in (0, 1), got {}",
                o.test_fraction
            )));
        }
        if o.trees == 0 {
            return Err(CliError::Usage("--trees must be at least 1".into()));
        }
        if o.repeats == 0 {
            return Err(CliError::Usage("--repeats must be at least 1".into()));
        }
        let reduced_features = parse_feature_list(&o.features)?;
        if let Some(&bad) = reduced_features.iter().find(|&&f| f == 0 || f > o.n_mfcc) {
            return Err(CliError::Usage(format!(
                "--features: index {bad} outside 1..={}",
                o.n_mfcc
            )));
        }
        Ok(Self {
            manifest: o.manifest.clone(),
            audio_root: o.audio_root.clone(),
            out,
            input: o.input.clone(),
            mfcc,
            alpha: o.alpha,
            sidedness: if o.one_sided {
                Sidedness::OneSided
            } else {
                Sidedness::TwoSided
            },
            seed: o.seed,
            test_fraction: o.test_fraction,
            n_trees: o.trees,
            reduced_features,
            repeats: o.repeats,
            keep_going: o.keep_going,
        })
    }

    pub fn features_path(&self) -> PathBuf {
        self.input.clone().unwrap_or_else(|| self.out.join("features.csv"))
    }

    pub fn table1_options(&self) -> Table1Options {
        Table1Options {
            alpha: self.alpha,
            sidedness: self.sidedness,
            ..Table1Options::default()
        }
    }

    pub fn forest(&self) -> ForestConfig {
        ForestConfig {
            n_trees: self.n_trees,
            seed: self.seed,
            ..ForestConfig::default()
        }
    }

    pub fn split(&self) -> SplitPlan {
        SplitPlan {
            test_fraction: self.test_fraction,
            seed: self.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts(args: &[&str]) -> Options {
        let mut full = vec!["accentgram", "stats"];
        full.extend_from_slice(args);
        Cli::try_parse_from(full).unwrap().opts
    }

    #[test]
    fn defaults() {
        let cfg = RunConfig::from_options(&opts(&["--out", "x"])).unwrap();
        assert_eq!(cfg.seed, 42);
        assert_eq!(cfg.n_trees, 500);
        assert_eq!(cfg.test_fraction, 0.30);
        assert_eq!(cfg.reduced_features, vec![1, 2, 5]);
        assert_eq!(cfg.mfcc, MfccConfig::default());
        assert_eq!(cfg.repeats, 1);
        assert_eq!(cfg.features_path(), PathBuf::from("x/features.csv"));
    }

    #[test]
    fn flags_after_subcommand_and_before() {
        let c = Cli::try_parse_from(["accentgram", "--seed", "7", "classify", "--trees", "9", "--out", "o"]).unwrap();
        assert_eq!(c.command, Command::Classify);
        assert_eq!((c.opts.seed, c.opts.trees), (7, 9));
    }

    #[test]
    fn invalid_values_are_usage_errors() {
        for args in [
            &["--out", "x", "--alpha", "0"][..],
            &["--out", "x", "--test-fraction", "1.5"],
            &["--out", "x", "--trees", "0"],
            &["--out", "x", "--features", "1,x"],
            &["--out", "x", "--features", "14"],
            &["--out", "x", "--n-mfcc", "0"],
            &["--out", "x", "--repeats", "0"],
            &[],
        ] {
            let e = RunConfig::from_options(&opts(args)).unwrap_err();
            assert_eq!(e.exit_code(), 1, "{args:?}");
        }
    }
}
