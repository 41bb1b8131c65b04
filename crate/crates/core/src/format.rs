//! Native dataset files.
//!
//! JSON:
//!
//! ```json
//! { "n_s": 2, "n_c": 1, "trials": [ { "label": 1, "spikes": [0.01, 0.2] },
//!                                   { "label": 2, "spikes": [] } ] }
//! ```
//!
//! CSV: one `trial_index,label,spike_time` row per spike; a trial without
//! spikes is a single row with an empty time field (`3,2,`). An optional
//! header row is skipped. Trials are ordered by `trial_index`.
//!
//! Spike times are seconds from stimulus onset. Unsorted trains are sorted on
//! load and reported as warnings.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spike::{LabeledDataset, SpikeTrain, StimulusLabel};

/// A parsed dataset plus any non-fatal issues found while reading it.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub dataset: LabeledDataset,
    pub warnings: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct RawDataset {
    n_s: usize,
    n_c: usize,
    trials: Vec<RawTrial>,
}

#[derive(Serialize, Deserialize)]
struct RawTrial {
    label: usize,
    spikes: Vec<f64>,
}

fn build_trial(
    trial: usize,
    label: usize,
    n_s: usize,
    times: Vec<f64>,
    warnings: &mut Vec<String>,
) -> Result<(StimulusLabel, SpikeTrain)> {
    let label = StimulusLabel::new(label).ok_or(Error::LabelOutOfRange { trial, label, n_s })?;
    let (train, resorted) = SpikeTrain::from_unsorted(times).map_err(|e| match e {
        Error::NonFiniteSpike { value, .. } => {
            Error::malformed(Some(trial), format!("non-finite spike time {value}"))
        }
        other => other,
    })?;
    if resorted {
        warnings.push(format!(
            "trial {trial}: spike times were not sorted; sorted on load"
        ));
    }
    Ok((label, train))
}

pub fn parse_json(text: &str) -> Result<Loaded> {
    let raw: RawDataset = serde_json::from_str(text)
        .map_err(|e| Error::malformed(None, format!("invalid dataset JSON: {e}")))?;
    if raw.trials.is_empty() {
        return Err(Error::malformed(None, "dataset has no trials"));
    }
    let mut warnings = Vec::new();
    let trials = raw
        .trials
        .into_iter()
        .enumerate()
        .map(|(i, t)| build_trial(i, t.label, raw.n_s, t.spikes, &mut warnings))
        .collect::<Result<Vec<_>>>()?;
    let dataset = LabeledDataset::new(raw.n_s, raw.n_c, trials)?;
    Ok(Loaded { dataset, warnings })
}

pub fn to_json(dataset: &LabeledDataset) -> String {
    let raw = RawDataset {
        n_s: dataset.n_s(),
        n_c: dataset.n_c(),
        trials: dataset
            .trials()
            .map(|(label, train)| RawTrial {
                label: label.get(),
                spikes: train.times().to_vec(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("finite floats serialize")
}

pub fn parse_csv(text: &str) -> Result<Loaded> {
    let mut rows: BTreeMap<usize, (usize, Vec<f64>)> = BTreeMap::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(Error::malformed(
                None,
                format!(
                    "line {}: expected 3 fields, found {}",
                    lineno + 1,
                    fields.len()
                ),
            ));
        }
        let Ok(trial) = fields[0].parse::<usize>() else {
            if lineno == 0 {
                continue; // header
            }
            return Err(Error::malformed(
                None,
                format!("line {}: bad trial index '{}'", lineno + 1, fields[0]),
            ));
        };
        let label: usize = fields[1].parse().map_err(|_| {
            Error::malformed(
                Some(trial),
                format!("line {}: bad label '{}'", lineno + 1, fields[1]),
            )
        })?;
        let entry = rows.entry(trial).or_insert((label, Vec::new()));
        if entry.0 != label {
            return Err(Error::malformed(
                Some(trial),
                format!(
                    "line {}: label {label} conflicts with {}",
                    lineno + 1,
                    entry.0
                ),
            ));
        }
        if !fields[2].is_empty() {
            let t: f64 = fields[2].parse().map_err(|_| {
                Error::malformed(
                    Some(trial),
                    format!("line {}: bad spike time '{}'", lineno + 1, fields[2]),
                )
            })?;
            entry.1.push(t);
        }
    }
    if rows.is_empty() {
        return Err(Error::malformed(None, "dataset has no trials"));
    }
    let n = rows.len();
    let n_s = rows.values().map(|(l, _)| *l).max().unwrap_or(0);
    let n_c = n.checked_div(n_s).unwrap_or(0);
    let mut warnings = Vec::new();
    let trials = rows
        .into_iter()
        .map(|(trial, (label, times))| build_trial(trial, label, n_s, times, &mut warnings))
        .collect::<Result<Vec<_>>>()?;
    let dataset = LabeledDataset::new(n_s, n_c, trials)?;
    Ok(Loaded { dataset, warnings })
}

pub fn to_csv(dataset: &LabeledDataset) -> String {
    let mut out = String::from("trial_index,label,spike_time\n");
    for (i, (label, train)) in dataset.trials().enumerate() {
        if train.is_empty() {
            writeln!(out, "{i},{},", label.get()).unwrap();
        }
        for t in train.times() {
            writeln!(out, "{i},{},{t}", label.get()).unwrap();
        }
    }
    out
}
