//! Spike trains, labelled trial datasets, and time windowing.
//!
//! Times are in seconds, measured from stimulus onset.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sorted spike times of a single trial, in seconds.
///
/// Duplicated times are allowed; the train may be empty.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
#[serde(transparent)]
pub struct SpikeTrain {
    times: Vec<f64>,
}

impl SpikeTrain {
    /// Builds a train from times that must already be finite and nondecreasing.
    pub fn new(times: Vec<f64>) -> Result<Self> {
        check_finite(&times)?;
        if let Some(index) = times.windows(2).position(|w| w[0] > w[1]) {
            return Err(Error::UnsortedSpikes {
                index: index + 1,
                prev: times[index],
                next: times[index + 1],
            });
        }
        Ok(Self { times })
    }

    /// Builds a train from finite times in any order. The flag reports
    /// whether a sort was needed.
    pub fn from_unsorted(mut times: Vec<f64>) -> Result<(Self, bool)> {
        check_finite(&times)?;
        let sorted = times.windows(2).all(|w| w[0] <= w[1]);
        if !sorted {
            times.sort_by(f64::total_cmp);
        }
        Ok((Self { times }, !sorted))
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Spikes falling in `window`, re-expressed relative to the window start.
    ///
    /// A spike at `t` is kept when `0 <= t - start < width`, so the output
    /// always lies in `[0, width)`.
    pub fn slice(&self, window: TimeWindow) -> SpikeTrain {
        let times = self
            .times
            .iter()
            .map(|&t| t - window.start)
            .filter(|&r| r >= 0.0 && r < window.width)
            .collect();
        SpikeTrain { times }
    }

    pub fn count_spikes(&self) -> usize {
        self.times.len()
    }

    /// Multiplies every spike time by `factor` (> 0).
    pub fn scaled(&self, factor: f64) -> SpikeTrain {
        SpikeTrain {
            times: self.times.iter().map(|t| t * factor).collect(),
        }
    }
}

impl<'de> Deserialize<'de> for SpikeTrain {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let times = Vec::<f64>::deserialize(d)?;
        SpikeTrain::new(times).map_err(serde::de::Error::custom)
    }
}

fn check_finite(times: &[f64]) -> Result<()> {
    match times.iter().position(|t| !t.is_finite()) {
        Some(index) => Err(Error::NonFiniteSpike {
            index,
            value: times[index],
        }),
        None => Ok(()),
    }
}

/// Number of spikes in a train.
pub fn count_spikes(train: &SpikeTrain) -> usize {
    train.count_spikes()
}

/// Stimulus identity, numbered from 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StimulusLabel(usize);

impl StimulusLabel {
    /// `None` for the invalid id 0.
    pub fn new(id: usize) -> Option<Self> {
        (id >= 1).then_some(Self(id))
    }

    pub fn get(self) -> usize {
        self.0
    }

    /// Zero-based position of the label in `1..=n_s`.
    pub fn index(self) -> usize {
        self.0 - 1
    }
}

/// Half-open interval `[start, start + width)` in seconds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TimeWindow {
    start: f64,
    width: f64,
}

impl TimeWindow {
    pub fn new(start: f64, width: f64) -> Result<Self> {
        if !(width.is_finite() && width > 0.0) {
            return Err(Error::InvalidWindow(width));
        }
        if !start.is_finite() {
            return Err(Error::InvalidParameter {
                name: "window start",
                value: start,
                reason: "must be finite",
            });
        }
        Ok(Self { start, width })
    }

    pub fn start(&self) -> f64 {
        self.start
    }

    pub fn width(&self) -> f64 {
        self.width
    }

    pub fn center(&self) -> f64 {
        self.start + 0.5 * self.width
    }
}

/// A balanced set of labelled trials: every label in `1..=n_s` occurs
/// exactly `n_c` times.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    n_s: usize,
    n_c: usize,
    labels: Vec<StimulusLabel>,
    responses: Vec<SpikeTrain>,
}

impl LabeledDataset {
    pub fn new(n_s: usize, n_c: usize, trials: Vec<(StimulusLabel, SpikeTrain)>) -> Result<Self> {
        let (labels, responses) = trials.into_iter().unzip();
        Self::from_parts(n_s, n_c, labels, responses)
    }

    pub fn from_parts(
        n_s: usize,
        n_c: usize,
        labels: Vec<StimulusLabel>,
        responses: Vec<SpikeTrain>,
    ) -> Result<Self> {
        if n_s < 2 || n_c < 1 {
            return Err(Error::InvalidDesign { n_s, n_c });
        }
        if labels.len() != responses.len() {
            return Err(Error::LabelsLength {
                expected: responses.len(),
                got: labels.len(),
            });
        }
        validate_labels(&labels, n_s, n_c)?;
        Ok(Self {
            n_s,
            n_c,
            labels,
            responses,
        })
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn n_s(&self) -> usize {
        self.n_s
    }

    pub fn n_c(&self) -> usize {
        self.n_c
    }

    pub fn labels(&self) -> &[StimulusLabel] {
        &self.labels
    }

    pub fn responses(&self) -> &[SpikeTrain] {
        &self.responses
    }

    pub fn trials(&self) -> impl Iterator<Item = (StimulusLabel, &SpikeTrain)> {
        self.labels.iter().copied().zip(self.responses.iter())
    }

    /// Same labels and order, each response sliced to `window`.
    pub fn restrict(&self, window: TimeWindow) -> LabeledDataset {
        self.map_responses(|r| r.slice(window))
    }

    /// Applies `f` to every response, keeping labels and order.
    pub fn map_responses(&self, f: impl Fn(&SpikeTrain) -> SpikeTrain) -> LabeledDataset {
        LabeledDataset {
            n_s: self.n_s,
            n_c: self.n_c,
            labels: self.labels.clone(),
            responses: self.responses.iter().map(f).collect(),
        }
    }

    /// Total spike count summed over trials.
    pub fn total_spikes(&self) -> usize {
        self.responses.iter().map(SpikeTrain::count_spikes).sum()
    }

    /// Mean spike count per trial.
    pub fn mean_spikes(&self) -> f64 {
        self.total_spikes() as f64 / self.n() as f64
    }
}

/// Checks that `labels` is a balanced design over `1..=n_s`.
pub fn validate_labels(labels: &[StimulusLabel], n_s: usize, n_c: usize) -> Result<()> {
    let expected = n_s * n_c;
    if labels.len() != expected {
        return Err(Error::TrialCount {
            expected,
            got: labels.len(),
        });
    }
    let mut counts = vec![0usize; n_s];
    for (trial, label) in labels.iter().enumerate() {
        if label.get() > n_s {
            return Err(Error::LabelOutOfRange {
                trial,
                label: label.get(),
                n_s,
            });
        }
        counts[label.index()] += 1;
    }
    if let Some((i, &count)) = counts.iter().enumerate().find(|(_, &c)| c != n_c) {
        return Err(Error::Unbalanced {
            label: i + 1,
            count,
            expected: n_c,
        });
    }
    Ok(())
}

/// Free-function form of [`LabeledDataset::restrict`].
pub fn restrict(dataset: &LabeledDataset, window: TimeWindow) -> LabeledDataset {
    dataset.restrict(window)
}

/// Free-function form of [`SpikeTrain::slice`].
pub fn slice(train: &SpikeTrain, window: TimeWindow) -> SpikeTrain {
    train.slice(window)
}
