#![allow(dead_code)]

use spikemi::synth::{generate, random_templates, Coding, GeneratorSpec};
use spikemi::{LabeledDataset, SpikeTrain};

pub const DURATION: f64 = 1.65;

pub fn spec(n_s: usize, n_c: usize, coding: Coding, seed: u64) -> GeneratorSpec {
    GeneratorSpec {
        n_s,
        n_c,
        duration: DURATION,
        coding,
        seed,
    }
}

/// Trial-by-trial union of two datasets with the same labels.
pub fn superimpose(a: &LabeledDataset, b: &LabeledDataset) -> LabeledDataset {
    assert_eq!(a.labels(), b.labels());
    let responses = a
        .responses()
        .iter()
        .zip(b.responses())
        .map(|(x, y)| {
            let mut t = x.times().to_vec();
            t.extend_from_slice(y.times());
            SpikeTrain::from_unsorted(t).unwrap().0
        })
        .collect();
    LabeledDataset::from_parts(a.n_s(), a.n_c(), a.labels().to_vec(), responses).unwrap()
}

/// 20 × 10 timing-coded responses: per-label templates of `spikes` spikes
/// with Gaussian jitter, over a label-independent Poisson background.
pub fn timing_dataset(spikes: usize, jitter: f64, background: f64, seed: u64) -> LabeledDataset {
    let templates = random_templates(20, spikes, DURATION, 10_000 + seed);
    let timed = generate(&spec(
        20,
        10,
        Coding::Timing { templates, jitter },
        20_000 + seed,
    ))
    .unwrap();
    if background == 0.0 {
        return timed;
    }
    let noise = generate(&spec(
        20,
        10,
        Coding::Null { rate: background },
        30_000 + seed,
    ))
    .unwrap();
    superimpose(&timed, &noise)
}

/// 20 × 10 rate-coded responses with rates spread evenly over `[lo, hi]` Hz.
pub fn rate_dataset(lo: f64, hi: f64, seed: u64) -> LabeledDataset {
    let rates = (0..20).map(|c| lo + (hi - lo) * c as f64 / 19.0).collect();
    generate(&spec(20, 10, Coding::Rate { rates }, 40_000 + seed)).unwrap()
}

fn ranks(x: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&a, &b| x[a].total_cmp(&x[b]));
    let mut r = vec![0.0; x.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && x[idx[j + 1]] == x[idx[i]] {
            j += 1;
        }
        // ties share the average of their ranks
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            r[idx[k]] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation; 0 when either side is constant.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    if vx == 0.0 || vy == 0.0 {
        0.0
    } else {
        cov / (vx * vy).sqrt()
    }
}
