//! The per-speaker analysis table: one pooled MFCC vector per speaker.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of cepstral features per speaker (`mfcc_01` .. `mfcc_13`).
pub const N_FEATURES: usize = 13;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpeakerRecord {
    pub speaker_id: String,
    pub group: String,
    /// `features[0]` is `mfcc_01`, the 0th (energy-like) cepstral coefficient.
    pub features: Vec<f64>,
}

/// A validated two-group dataset.
///
/// Group labels are kept in lexicographic order; the smaller label is
/// "group A" for every signed statistic in the crate.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    records: Vec<SpeakerRecord>,
    labels: [String; 2],
    n_features: usize,
}

impl Dataset {
    pub fn new(records: Vec<SpeakerRecord>) -> Result<Self> {
        let mut labels: Vec<&str> = records.iter().map(|r| r.group.as_str()).collect();
        labels.sort_unstable();
        labels.dedup();
        if labels.len() != 2 {
            return Err(Error::data(format!(
                "expected exactly 2 groups, found {}",
                labels.len()
            )));
        }
        let width = records[0].features.len();
        if width == 0 {
            return Err(Error::data("records carry no features"));
        }
        if let Some(r) = records.iter().find(|r| r.features.len() != width) {
            return Err(Error::data(format!(
                "speaker {}: {} features, expected {width}",
                r.speaker_id,
                r.features.len()
            )));
        }
        if let Some(r) = records.iter().find(|r| r.features.iter().any(|v| !v.is_finite())) {
            return Err(Error::data(format!(
                "speaker {}: non-finite feature value",
                r.speaker_id
            )));
        }
        let labels = [labels[0].to_string(), labels[1].to_string()];
        Ok(Self {
            records,
            labels,
            n_features: width,
        })
    }

    pub fn records(&self) -> &[SpeakerRecord] {
        &self.records
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    /// `[group A, group B]`, lexicographically ordered.
    pub fn labels(&self) -> &[String; 2] {
        &self.labels
    }

    /// 0 for group A, 1 for group B.
    pub fn class_of(&self, record: &SpeakerRecord) -> usize {
        usize::from(record.group != self.labels[0])
    }

    pub fn classes(&self) -> Vec<usize> {
        self.records.iter().map(|r| self.class_of(r)).collect()
    }

    pub fn group_sizes(&self) -> [usize; 2] {
        let mut sizes = [0; 2];
        for r in &self.records {
            sizes[self.class_of(r)] += 1;
        }
        sizes
    }

    /// Values of one feature (0-based index) split by group.
    pub fn feature_by_group(&self, feature: usize) -> [Vec<f64>; 2] {
        let mut out = [Vec::new(), Vec::new()];
        for r in &self.records {
            out[self.class_of(r)].push(r.features[feature]);
        }
        out
    }

    /// Feature rows split by group, restricted to the given 0-based columns.
    pub fn rows_by_group(&self, columns: &[usize]) -> [Vec<Vec<f64>>; 2] {
        let mut out = [Vec::new(), Vec::new()];
        for r in &self.records {
            out[self.class_of(r)].push(columns.iter().map(|&c| r.features[c]).collect());
        }
        out
    }

    /// A dataset over a subset of records, keeping this dataset's labels even
    /// if one group ends up empty.
    pub fn subset(&self, indices: &[usize]) -> Dataset {
        Dataset {
            records: indices.iter().map(|&i| self.records[i].clone()).collect(),
            labels: self.labels.clone(),
            n_features: self.n_features,
        }
    }
}
