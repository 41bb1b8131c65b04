use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{i0, Estimator};
use crate::error::Result;
use crate::metrics::DistanceMatrix;
use crate::spike::StimulusLabel;

/// I₀ under uniformly permuted labels.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullSample {
    pub values: Vec<f64>,
    pub mean: f64,
    /// Standard error of `mean`; NaN for a single replication.
    pub std_error: f64,
}

impl NullSample {
    fn from_values(values: Vec<f64>) -> Self {
        let reps = values.len() as f64;
        let mean = values.iter().sum::<f64>() / reps;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (reps - 1.0);
        NullSample {
            std_error: (var / reps).sqrt(),
            mean,
            values,
        }
    }
}

impl Estimator {
    /// I₀ at region size `h` for `reps` uniform relabellings.
    ///
    /// Replication `r` draws its permutation from a ChaCha8 stream keyed by
    /// `(seed, r)`, so the sample is identical for any thread count.
    pub fn shuffle_null(&self, h: usize, reps: usize, seed: u64) -> Result<NullSample> {
        self.check_h(h)?;
        let reps = reps.max(1);
        let values = (0..reps)
            .into_par_iter()
            .map_init(
                || self.classes.clone(),
                |classes, rep| {
                    classes.copy_from_slice(&self.classes);
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    rng.set_stream(rep as u64);
                    classes.shuffle(&mut rng);
                    i0(&self.ranking.counts(classes, h), self.n_s())
                },
            )
            .collect();
        Ok(NullSample::from_values(values))
    }
}

/// Free-function form of [`Estimator::shuffle_null`].
pub fn shuffle_null(
    matrix: &DistanceMatrix,
    labels: &[StimulusLabel],
    h: usize,
    reps: usize,
    seed: u64,
) -> Result<NullSample> {
    Estimator::new(matrix, labels)?.shuffle_null(h, reps, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimator::bias;

    fn setup() -> (DistanceMatrix, Vec<StimulusLabel>) {
        let xs: Vec<f64> = (0..12).map(|i| ((i * 7919) % 31) as f64 * 0.37).collect();
        let m = DistanceMatrix::from_rows(
            xs.iter()
                .map(|a| xs.iter().map(|b| (a - b).abs()).collect())
                .collect(),
        )
        .unwrap();
        let labels = (0..12)
            .map(|i| StimulusLabel::new(i % 3 + 1).unwrap())
            .collect();
        (m, labels)
    }

    #[test]
    fn deterministic_for_fixed_seed() {
        let (m, l) = setup();
        let a = shuffle_null(&m, &l, 3, 1, 42).unwrap();
        let b = shuffle_null(&m, &l, 3, 1, 42).unwrap();
        assert_eq!(a.values, b.values);
        assert_eq!(a.values.len(), 1);
        assert!(a.std_error.is_nan());
    }

    #[test]
    fn independent_of_thread_count() {
        let (m, l) = setup();
        let est = Estimator::new(&m, &l).unwrap();
        let single = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| est.shuffle_null(4, 500, 7).unwrap());
        let many = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| est.shuffle_null(4, 500, 7).unwrap());
        assert_eq!(single, many);
    }

    #[test]
    fn mean_tracks_bias() {
        let (m, l) = setup();
        let s = shuffle_null(&m, &l, 4, 20_000, 1).unwrap();
        let b = bias(12, 3, 4, 4).unwrap();
        assert!((s.mean - b).abs() < 4.0 * s.std_error, "{} vs {b}", s.mean);
    }
}
