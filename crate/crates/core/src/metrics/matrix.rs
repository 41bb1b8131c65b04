use std::io::{self, Write};

use rayon::prelude::*;

use super::{count_distance, earth_mover, van_rossum, victor_purpura, MetricSpec};
use crate::error::{Error, Result};
use crate::spike::{LabeledDataset, SpikeTrain};

/// Symmetric `n × n` matrix of pairwise response distances, zero on the
/// diagonal, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Builds a matrix from full rows, checking symmetry, the zero diagonal,
    /// and that every entry is finite and nonnegative.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if let Some(i) = rows.iter().position(|r| r.len() != n) {
            return Err(Error::malformed(
                None,
                format!("row {i} has {} entries, expected {n}", rows[i].len()),
            ));
        }
        let data: Vec<f64> = rows.into_iter().flatten().collect();
        let m = DistanceMatrix { n, data };
        for i in 0..n {
            if m.get(i, i) != 0.0 {
                return Err(Error::malformed(None, format!("nonzero diagonal at {i}")));
            }
            for j in 0..n {
                let d = m.get(i, j);
                if !(d.is_finite() && d >= 0.0) {
                    return Err(Error::malformed(
                        None,
                        format!("entry ({i}, {j}) = {d} is not a finite nonnegative distance"),
                    ));
                }
                if d != m.get(j, i) {
                    return Err(Error::malformed(
                        None,
                        format!("asymmetric entries at ({i}, {j})"),
                    ));
                }
            }
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.n..(i + 1) * self.n]
    }

    /// Applies `f` to every off-diagonal entry. `f` must map nonnegative
    /// finite values to nonnegative finite values.
    pub fn map_off_diagonal(&self, f: impl Fn(f64) -> f64) -> DistanceMatrix {
        let mut data = self.data.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                if i != j {
                    data[i * self.n + j] = f(self.data[i * self.n + j]);
                }
            }
        }
        DistanceMatrix { n: self.n, data }
    }

    /// Reorders rows and columns: entry `(a, b)` of the result is entry
    /// `(perm[a], perm[b])` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> DistanceMatrix {
        assert_eq!(perm.len(), self.n);
        let n = self.n;
        let mut data = vec![0.0; n * n];
        for a in 0..n {
            for b in 0..n {
                data[a * n + b] = self.get(perm[a], perm[b]);
            }
        }
        DistanceMatrix { n, data }
    }

    /// Headerless CSV, full matrix, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        for i in 0..self.n {
            let line: Vec<String> = self.row(i).iter().map(|d| format!("{d:.16e}")).collect();
            writeln!(out, "{}", line.join(","))?;
        }
        Ok(())
    }
}

/// Pairwise distances between the responses of `dataset`.
pub fn distance_matrix(dataset: &LabeledDataset, metric: &MetricSpec) -> Result<DistanceMatrix> {
    distance_matrix_for(dataset.responses(), metric)
}

/// Pairwise distances between arbitrary trains.
///
/// Rows are evaluated in parallel; every entry is a pure function of its two
/// trains, so the result does not depend on scheduling. Entry `(i, j)` is
/// identical to `metric.distance(&trains[i], &trains[j])`.
pub fn distance_matrix_for(trains: &[SpikeTrain], metric: &MetricSpec) -> Result<DistanceMatrix> {
    metric.validate()?;
    let n = trains.len();
    if let MetricSpec::EarthMover { window } = *metric {
        for (i, t) in trains.iter().enumerate() {
            earth_mover::check_inside(t, window).map_err(|e| Error::MetricPair {
                i,
                j: i,
                source: Box::new(e),
            })?;
        }
    }
    let self_kernels: Vec<f64> = match *metric {
        MetricSpec::VanRossum { tau } => trains
            .par_iter()
            .map(|t| van_rossum::kernel(t.times(), t.times(), tau))
            .collect(),
        _ => Vec::new(),
    };

    let pair = |i: usize, j: usize| -> f64 {
        let (u, v) = (trains[i].times(), trains[j].times());
        match *metric {
            MetricSpec::VictorPurpura { q } => victor_purpura::vp_unchecked(u, v, q),
            MetricSpec::VanRossum { tau } => {
                if van_rossum::swapped(u, v) {
                    let k = van_rossum::kernel(v, u, tau);
                    van_rossum::vr_from_kernels(self_kernels[j], self_kernels[i], k)
                } else {
                    let k = van_rossum::kernel(u, v, tau);
                    van_rossum::vr_from_kernels(self_kernels[i], self_kernels[j], k)
                }
            }
            MetricSpec::EarthMover { window } => earth_mover::emd_unchecked(u, v, window),
            MetricSpec::SpikeCount => count_distance(&trains[i], &trains[j]),
        }
    };

    let upper: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| ((i + 1)..n).map(|j| pair(i, j)).collect())
        .collect();

    let mut data = vec![0.0; n * n];
    for (i, row) in upper.iter().enumerate() {
        for (k, &d) in row.iter().enumerate() {
            let j = i + 1 + k;
            data[i * n + j] = d;
            data[j * n + i] = d;
        }
    }
    Ok(DistanceMatrix { n, data })
}
