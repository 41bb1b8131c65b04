//! Nearest-neighbour mutual information between a stimulus label and a
//! response in a metric space.
//!
//! For each trial `i` a small region is grown around the response: the seed
//! itself plus its `h - 1` nearest other trials. Volumes are measured by
//! probability mass, so the region always holds `h / n` of it, and the
//! conditional density at the seed is estimated from how many of the `h`
//! points share the seed's label (`h_i`). Averaging the log ratio gives
//!
//! `I₀ = (1/n) Σ_i log₂(n_s · h_i / h)`,
//!
//! and subtracting the exact value it takes on average under independent
//! labels ([`bias`]) gives the corrected estimate `Ĩ = I₀ - I_b`.
//!
//! Only the neighbour order matters. Ties at equal distance are broken by
//! ascending trial index. Results are in bits.

mod bias;
mod null;

use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::DistanceMatrix;
use crate::spike::{validate_labels, StimulusLabel};

pub use bias::{bias, hypergeometric_pmf};
pub use null::{shuffle_null, NullSample};

/// Per-trial same-label counts for one region size `h`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighborhoodCounts {
    pub h: usize,
    /// `h_i` for every trial, in trial order; each lies in `1..=min(h, n_c)`.
    pub per_trial: Vec<usize>,
}

impl NeighborhoodCounts {
    pub fn n(&self) -> usize {
        self.per_trial.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MIEstimate {
    /// Raw estimate, bits.
    pub i0: f64,
    /// Expected raw estimate under independence, bits.
    pub ib: f64,
    /// `i0 - ib`, bits.
    pub i_tilde: f64,
    pub h: usize,
    pub counts: NeighborhoodCounts,
}

/// One point of the `Ĩ(h)` curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HPoint {
    pub h: usize,
    pub i_tilde: f64,
}

/// Result of maximising `Ĩ(h)` over a grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HSelection {
    pub h_star: usize,
    pub best: MIEstimate,
    /// `Ĩ(h)` for every grid value, ascending in `h`.
    pub curve: Vec<HPoint>,
}

/// How the region size `h` is chosen.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub enum HPolicy {
    Fixed(usize),
    /// `{2, …, 3·n_c}` clipped to `n`.
    #[default]
    Auto,
    Grid(Vec<usize>),
}

impl HPolicy {
    /// The grid this policy searches for a design of `n` trials and `n_c`
    /// trials per label.
    pub fn grid(&self, n: usize, n_c: usize) -> Vec<usize> {
        match self {
            HPolicy::Fixed(h) => vec![*h],
            HPolicy::Auto => (2..=(3 * n_c).min(n)).collect(),
            HPolicy::Grid(g) => g.clone(),
        }
    }
}

impl FromStr for HPolicy {
    type Err = String;

    /// Accepts `auto`, a single integer, or `grid:a..b` (inclusive).
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        if s == "auto" {
            return Ok(HPolicy::Auto);
        }
        if let Some(range) = s.strip_prefix("grid:") {
            let (lo, hi) = range
                .split_once("..")
                .ok_or_else(|| format!("expected grid:a..b, got '{s}'"))?;
            let lo: usize = lo
                .trim()
                .parse()
                .map_err(|_| format!("bad grid start in '{s}'"))?;
            let hi: usize = hi
                .trim()
                .parse()
                .map_err(|_| format!("bad grid end in '{s}'"))?;
            if lo < 1 || hi < lo {
                return Err(format!("empty or invalid grid '{s}'"));
            }
            return Ok(HPolicy::Grid((lo..=hi).collect()));
        }
        match s.parse::<usize>() {
            Ok(h) if h >= 1 => Ok(HPolicy::Fixed(h)),
            _ => Err(format!("expected auto, N >= 1, or grid:a..b, got '{s}'")),
        }
    }
}

/// Trial order by increasing distance from each seed, excluding the seed.
#[derive(Debug, Clone)]
pub struct NeighborRanking {
    order: Vec<Vec<usize>>,
}

impl NeighborRanking {
    pub fn new(matrix: &DistanceMatrix) -> Self {
        let n = matrix.n();
        let order = (0..n)
            .into_par_iter()
            .map(|i| {
                let row = matrix.row(i);
                let mut others: Vec<usize> = (0..n).filter(|&j| j != i).collect();
                others.sort_by(|&a, &b| row[a].total_cmp(&row[b]).then(a.cmp(&b)));
                others
            })
            .collect();
        Self { order }
    }

    pub fn n(&self) -> usize {
        self.order.len()
    }

    /// Other trials ordered nearest-first for seed `i`.
    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.order[i]
    }

    /// `h_i` for each trial, given zero-based class indices per trial.
    pub fn counts(&self, classes: &[usize], h: usize) -> NeighborhoodCounts {
        debug_assert!(h >= 1 && h <= self.n());
        let per_trial = self
            .order
            .iter()
            .enumerate()
            .map(|(i, nbrs)| {
                1 + nbrs[..h - 1]
                    .iter()
                    .filter(|&&j| classes[j] == classes[i])
                    .count()
            })
            .collect();
        NeighborhoodCounts { h, per_trial }
    }
}

/// Balanced design implied by a label vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Design {
    n: usize,
    n_s: usize,
    n_c: usize,
}

impl Design {
    fn from_labels(labels: &[StimulusLabel]) -> Result<Self> {
        let n = labels.len();
        let n_s = labels.iter().map(|l| l.get()).max().unwrap_or(0);
        if n < 2 || n_s < 2 || !n.is_multiple_of(n_s) {
            return Err(Error::InvalidDesign {
                n_s,
                n_c: n.checked_div(n_s).unwrap_or(0),
            });
        }
        let n_c = n / n_s;
        validate_labels(labels, n_s, n_c)?;
        Ok(Self { n, n_s, n_c })
    }
}

/// Raw estimate `(1/n) Σ log₂(n_s · h_i / h)`.
///
/// Trials are grouped by `h_i` before summing, so the value does not depend
/// on trial order.
pub fn i0(counts: &NeighborhoodCounts, n_s: usize) -> f64 {
    let h = counts.h;
    let n = counts.n() as f64;
    let mut hist = vec![0usize; h + 1];
    for &c in &counts.per_trial {
        hist[c] += 1;
    }
    hist.iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(r, &k)| (k as f64 / n) * ((n_s * r) as f64 / h as f64).log2())
        .sum()
}

/// Estimator bound to one distance matrix and label vector, reusing the
/// neighbour ranking across region sizes.
#[derive(Debug, Clone)]
pub struct Estimator {
    ranking: NeighborRanking,
    classes: Vec<usize>,
    design: Design,
}

impl Estimator {
    pub fn new(matrix: &DistanceMatrix, labels: &[StimulusLabel]) -> Result<Self> {
        if labels.len() != matrix.n() {
            return Err(Error::LabelsLength {
                expected: matrix.n(),
                got: labels.len(),
            });
        }
        let design = Design::from_labels(labels)?;
        Ok(Self {
            ranking: NeighborRanking::new(matrix),
            classes: labels.iter().map(|l| l.index()).collect(),
            design,
        })
    }

    pub fn n(&self) -> usize {
        self.design.n
    }

    pub fn n_s(&self) -> usize {
        self.design.n_s
    }

    pub fn n_c(&self) -> usize {
        self.design.n_c
    }

    pub fn ranking(&self) -> &NeighborRanking {
        &self.ranking
    }

    fn check_h(&self, h: usize) -> Result<()> {
        if h < 1 || h > self.n() {
            return Err(Error::HOutOfRange { h, n: self.n() });
        }
        Ok(())
    }

    pub fn counts(&self, h: usize) -> Result<NeighborhoodCounts> {
        self.check_h(h)?;
        Ok(self.ranking.counts(&self.classes, h))
    }

    pub fn estimate(&self, h: usize) -> Result<MIEstimate> {
        let counts = self.counts(h)?;
        let i0 = i0(&counts, self.n_s());
        let ib = bias(self.n(), self.n_s(), self.n_c(), h)?;
        Ok(MIEstimate {
            i0,
            ib,
            i_tilde: i0 - ib,
            h,
            counts,
        })
    }

    /// Maximises `Ĩ(h)` over `grid`; ties go to the smaller `h`.
    pub fn select_h(&self, grid: &[usize]) -> Result<HSelection> {
        let mut grid = grid.to_vec();
        grid.sort_unstable();
        grid.dedup();
        if grid.is_empty() {
            return Err(Error::EmptyGrid);
        }
        for &h in &grid {
            self.check_h(h)?;
        }
        let estimates: Vec<MIEstimate> = grid
            .par_iter()
            .map(|&h| self.estimate(h))
            .collect::<Result<_>>()?;
        let curve = estimates
            .iter()
            .map(|e| HPoint {
                h: e.h,
                i_tilde: e.i_tilde,
            })
            .collect();
        let best = estimates
            .into_iter()
            .reduce(|best, e| if e.i_tilde > best.i_tilde { e } else { best })
            .expect("grid is nonempty");
        Ok(HSelection {
            h_star: best.h,
            best,
            curve,
        })
    }

    pub fn select(&self, policy: &HPolicy) -> Result<HSelection> {
        self.select_h(&policy.grid(self.n(), self.n_c()))
    }
}

/// `h_i` for every trial at region size `h`.
pub fn neighborhood_counts(
    matrix: &DistanceMatrix,
    labels: &[StimulusLabel],
    h: usize,
) -> Result<NeighborhoodCounts> {
    if labels.len() != matrix.n() {
        return Err(Error::LabelsLength {
            expected: matrix.n(),
            got: labels.len(),
        });
    }
    if h < 1 || h > matrix.n() {
        return Err(Error::HOutOfRange { h, n: matrix.n() });
    }
    let classes: Vec<usize> = labels.iter().map(|l| l.index()).collect();
    Ok(NeighborRanking::new(matrix).counts(&classes, h))
}

pub fn estimate(matrix: &DistanceMatrix, labels: &[StimulusLabel], h: usize) -> Result<MIEstimate> {
    Estimator::new(matrix, labels)?.estimate(h)
}

pub fn select_h(
    matrix: &DistanceMatrix,
    labels: &[StimulusLabel],
    grid: &[usize],
) -> Result<HSelection> {
    Estimator::new(matrix, labels)?.select_h(grid)
}
