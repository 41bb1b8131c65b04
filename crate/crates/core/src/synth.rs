//! Synthetic labelled spike trains with a known coding structure.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spike::{LabeledDataset, SpikeTrain, StimulusLabel};

/// How responses depend on the label.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Coding {
    /// Homogeneous Poisson trains; `rates[c]` (Hz) is the rate for label `c + 1`.
    Rate { rates: Vec<f64> },
    /// Each label has a template of spike times; every spike is jittered by
    /// independent Gaussian noise of standard deviation `jitter` seconds.
    Timing {
        templates: Vec<Vec<f64>>,
        jitter: f64,
    },
    /// Poisson trains at one shared rate (Hz), independent of the label.
    Null { rate: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub n_s: usize,
    pub n_c: usize,
    /// Trial length in seconds; spikes lie in `[0, duration)`.
    pub duration: f64,
    pub coding: Coding,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn validate(&self) -> Result<()> {
        if self.n_s < 2 || self.n_c < 1 {
            return Err(Error::InvalidDesign {
                n_s: self.n_s,
                n_c: self.n_c,
            });
        }
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(invalid(
                "duration",
                self.duration,
                "must be positive and finite",
            ));
        }
        match &self.coding {
            Coding::Rate { rates } => {
                if rates.len() != self.n_s {
                    return Err(invalid(
                        "rates",
                        rates.len() as f64,
                        "need one rate per label",
                    ));
                }
                rates.iter().try_for_each(|&r| check_rate(r))
            }
            Coding::Timing { templates, jitter } => {
                if !(jitter.is_finite() && *jitter >= 0.0) {
                    return Err(invalid("jitter", *jitter, "must be >= 0"));
                }
                if templates.len() != self.n_s {
                    return Err(invalid(
                        "templates",
                        templates.len() as f64,
                        "need one template per label",
                    ));
                }
                for &t in templates.iter().flatten() {
                    if !(0.0..self.duration).contains(&t) {
                        return Err(Error::SpikeOutsideWindow {
                            time: t,
                            window: self.duration,
                        });
                    }
                }
                Ok(())
            }
            Coding::Null { rate } => check_rate(*rate),
        }
    }
}

fn invalid(name: &'static str, value: f64, reason: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value,
        reason,
    }
}

fn check_rate(rate: f64) -> Result<()> {
    if rate.is_finite() && rate >= 0.0 {
        Ok(())
    } else {
        Err(invalid("rate", rate, "must be finite and >= 0"))
    }
}

/// Draws a balanced dataset. Trials are grouped by label (all trials of
/// label 1 first). The output is a pure function of `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<LabeledDataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut trials = Vec::with_capacity(spec.n_s * spec.n_c);
    for c in 0..spec.n_s {
        let label = StimulusLabel::new(c + 1).expect("labels start at 1");
        for _ in 0..spec.n_c {
            let times = match &spec.coding {
                Coding::Rate { rates } => poisson_times(rates[c], spec.duration, &mut rng),
                Coding::Null { rate } => poisson_times(*rate, spec.duration, &mut rng),
                Coding::Timing { templates, jitter } => {
                    jittered(&templates[c], *jitter, spec.duration, &mut rng)
                }
            };
            let (train, _) = SpikeTrain::from_unsorted(times)?;
            trials.push((label, train));
        }
    }
    LabeledDataset::new(spec.n_s, spec.n_c, trials)
}

fn below(duration: f64) -> f64 {
    f64::from_bits(duration.to_bits() - 1)
}

fn poisson_times(rate: f64, duration: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mean = rate * duration;
    if mean <= 0.0 {
        return Vec::new();
    }
    let count = Poisson::new(mean)
        .expect("positive finite mean")
        .sample(rng) as usize;
    (0..count)
        .map(|_| (rng.random::<f64>() * duration).min(below(duration)))
        .collect()
}

fn jittered(template: &[f64], jitter: f64, duration: f64, rng: &mut ChaCha8Rng) -> Vec<f64> {
    if jitter == 0.0 {
        return template.to_vec();
    }
    let noise = Normal::new(0.0, jitter).expect("finite jitter");
    template
        .iter()
        .map(|&t| reflect(t + noise.sample(rng), duration))
        .collect()
}

/// Folds `x` into `[0, duration)` by reflecting at both ends.
pub fn reflect(x: f64, duration: f64) -> f64 {
    let period = 2.0 * duration;
    let mut y = x.rem_euclid(period);
    if y >= duration {
        y = period - y;
    }
    if y >= duration {
        y = below(duration);
    }
    y
}

/// `n_s` templates of `spikes` uniformly placed, sorted spike times each.
pub fn random_templates(n_s: usize, spikes: usize, duration: f64, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n_s)
        .map(|_| {
            let mut t: Vec<f64> = (0..spikes)
                .map(|_| (rng.random::<f64>() * duration).min(below(duration)))
                .collect();
            t.sort_by(f64::total_cmp);
            t
        })
        .collect()
}

/// Exact mutual information (bits) between a uniformly drawn label and the
/// spike count of a Poisson train with the label's rate.
pub fn poisson_count_information(rates: &[f64], duration: f64) -> f64 {
    let means: Vec<f64> = rates.iter().map(|r| r * duration).collect();
    let top = means.iter().cloned().fold(0.0, f64::max);
    let k_max = (top + 20.0 * top.sqrt() + 50.0).ceil() as usize;
    let weight = 1.0 / rates.len() as f64;
    let mut ln_fact = 0.0;
    let mut info = 0.0;
    for k in 0..=k_max {
        if k > 0 {
            ln_fact += (k as f64).ln();
        }
        let pmf: Vec<f64> = means
            .iter()
            .map(|&m| {
                if m == 0.0 {
                    if k == 0 {
                        1.0
                    } else {
                        0.0
                    }
                } else {
                    (k as f64 * m.ln() - m - ln_fact).exp()
                }
            })
            .collect();
        let marginal: f64 = pmf.iter().sum::<f64>() * weight;
        for &p in &pmf {
            if p > 0.0 {
                info += weight * p * (p / marginal).log2();
            }
        }
    }
    info
}
