//! Experiments built on the estimator: comparing metrics, sweeping a metric
//! parameter across a population of recordings, and time-resolved
//! information.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::estimator::{Estimator, HPolicy, HSelection};
use crate::metrics::{distance_matrix, MetricKind, MetricSpec};
use crate::spike::{LabeledDataset, TimeWindow};

/// Length of the analysis window for whole-response runs, seconds (the
/// shortest stimulus in the reference recordings).
pub const DEFAULT_T_MAX: f64 = 1.65;
/// Default VP cost, Hz.
pub const DEFAULT_Q: f64 = 32.5;
/// VP cost used for time-resolved runs, Hz.
pub const DEFAULT_SLICE_Q: f64 = 30.0;
/// Default vR time constant, seconds.
pub const DEFAULT_TAU: f64 = 0.015;
/// Default slice width, seconds.
pub const DEFAULT_SLICE_WIDTH: f64 = 0.1;

/// Distance matrix, then `Ĩ(h)` maximised over the policy's grid.
pub fn mi_for_metric(
    dataset: &LabeledDataset,
    metric: &MetricSpec,
    policy: &HPolicy,
) -> Result<HSelection> {
    let matrix = distance_matrix(dataset, metric)?;
    Estimator::new(&matrix, dataset.labels())?.select(policy)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub param: f64,
    pub mean_i_tilde: f64,
    /// 40th percentile of per-dataset Ĩ.
    pub band_lo: f64,
    /// 60th percentile of per-dataset Ĩ.
    pub band_hi: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub kind: MetricKind,
    /// One row per grid value, ascending.
    pub rows: Vec<SweepRow>,
    /// Grid value maximising the mean curve (smallest on ties).
    pub best_param: f64,
    /// `i_tilde[g][d]`: best Ĩ of dataset `d` at grid value `g`.
    pub i_tilde: Vec<Vec<f64>>,
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

/// Sum taken over sorted values, so the result ignores input order.
fn order_free_mean(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    v.iter().sum::<f64>() / v.len() as f64
}

fn sorted_grid(grid: &[f64]) -> Result<Vec<f64>> {
    let mut grid = grid.to_vec();
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    Ok(grid)
}

/// Best Ĩ of every dataset at every grid value of the metric parameter.
pub fn sweep_metric_parameter(
    datasets: &[LabeledDataset],
    kind: MetricKind,
    grid: &[f64],
    policy: &HPolicy,
) -> Result<SweepResult> {
    if datasets.is_empty() {
        return Err(Error::EmptyCollection);
    }
    let grid = sorted_grid(grid)?;
    let i_tilde: Vec<Vec<f64>> = grid
        .par_iter()
        .map(|&p| {
            let metric = kind.with_parameter(p)?;
            datasets
                .par_iter()
                .map(|ds| mi_for_metric(ds, &metric, policy).map(|s| s.best.i_tilde))
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let rows: Vec<SweepRow> = grid
        .iter()
        .zip(&i_tilde)
        .map(|(&param, values)| {
            let mut sorted = values.clone();
            sorted.sort_by(f64::total_cmp);
            SweepRow {
                param,
                mean_i_tilde: order_free_mean(values),
                band_lo: quantile(&sorted, 0.4),
                band_hi: quantile(&sorted, 0.6),
            }
        })
        .collect();
    let best_param = rows
        .iter()
        .fold(None::<&SweepRow>, |best, r| match best {
            Some(b) if b.mean_i_tilde >= r.mean_i_tilde => Some(b),
            _ => Some(r),
        })
        .map(|r| r.param)
        .expect("grid is nonempty");
    Ok(SweepResult {
        kind,
        rows,
        best_param,
        i_tilde,
    })
}

/// How the metric parameter is chosen when comparing metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ParameterMode {
    /// One value for all datasets: the maximiser of the mean curve.
    #[default]
    Population,
    /// Each dataset uses its own best value.
    PerDataset,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricComparison {
    pub kind: MetricKind,
    /// Parameter used by each dataset (`None` for the spike count).
    pub params: Vec<Option<f64>>,
    pub i_tilde: Vec<f64>,
    pub mean_i_tilde: f64,
}

/// Mean best Ĩ of one metric across datasets, with the parameter tuned over
/// `grid` according to `mode`. The grid is ignored for the spike count.
pub fn compare_metric(
    datasets: &[LabeledDataset],
    kind: MetricKind,
    grid: &[f64],
    policy: &HPolicy,
    mode: ParameterMode,
) -> Result<MetricComparison> {
    let grid = if kind == MetricKind::SpikeCount {
        vec![0.0]
    } else {
        sorted_grid(grid)?
    };
    let sweep = sweep_metric_parameter(datasets, kind, &grid, policy)?;
    let (params, i_tilde): (Vec<f64>, Vec<f64>) = match mode {
        ParameterMode::Population => {
            let g = grid.iter().position(|&p| p == sweep.best_param).unwrap();
            (
                vec![sweep.best_param; datasets.len()],
                sweep.i_tilde[g].clone(),
            )
        }
        ParameterMode::PerDataset => (0..datasets.len())
            .map(|d| {
                (0..grid.len())
                    .map(|g| (grid[g], sweep.i_tilde[g][d]))
                    .fold((f64::NAN, f64::NEG_INFINITY), |best, cur| {
                        if cur.1 > best.1 {
                            cur
                        } else {
                            best
                        }
                    })
            })
            .unzip(),
    };
    let params = params
        .into_iter()
        .map(|p| (kind != MetricKind::SpikeCount).then_some(p))
        .collect();
    Ok(MetricComparison {
        kind,
        params,
        mean_i_tilde: order_free_mean(&i_tilde),
        i_tilde,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceRow {
    pub start: f64,
    pub t_center: f64,
    pub i_tilde: f64,
    pub h_star: usize,
    /// Mean spikes per trial in the window.
    pub mean_spikes: f64,
    /// `i_tilde / mean_spikes`; absent when the window holds no spikes.
    pub bits_per_spike: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SliceResult {
    pub width: f64,
    pub step: f64,
    pub rows: Vec<SliceRow>,
}

/// Windows `[k·step, k·step + width)` for `k = 0, 1, …` that end at or
/// before `t_max`.
pub fn slice_windows(width: f64, step: f64, t_max: f64) -> Result<Vec<TimeWindow>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidParameter {
            name: "step",
            value: step,
            reason: "must be positive and finite",
        });
    }
    TimeWindow::new(0.0, width)?;
    let slack = 1e-9 * t_max.abs().max(1.0);
    let mut windows = Vec::new();
    let mut k = 0usize;
    loop {
        let start = k as f64 * step;
        if start + width > t_max + slack {
            break;
        }
        windows.push(TimeWindow::new(start, width)?);
        k += 1;
    }
    Ok(windows)
}

/// Information in successive windows, with `h` re-selected per window.
/// Earth mover distances use the window width as their analysis interval.
pub fn time_sliced_mi(
    dataset: &LabeledDataset,
    metric: &MetricSpec,
    width: f64,
    step: f64,
    t_max: f64,
    policy: &HPolicy,
) -> Result<SliceResult> {
    let windows = slice_windows(width, step, t_max)?;
    let metric = match metric {
        MetricSpec::EarthMover { .. } => MetricSpec::earth_mover(width)?,
        other => {
            other.validate()?;
            *other
        }
    };
    let rows = windows
        .par_iter()
        .map(|&w| {
            let sliced = dataset.restrict(w);
            let sel = mi_for_metric(&sliced, &metric, policy)?;
            let mean_spikes = sliced.mean_spikes();
            Ok(SliceRow {
                start: w.start(),
                t_center: w.center(),
                i_tilde: sel.best.i_tilde,
                h_star: sel.h_star,
                mean_spikes,
                bits_per_spike: (sliced.total_spikes() > 0).then(|| sel.best.i_tilde / mean_spikes),
            })
        })
        .collect::<Result<_>>()?;
    Ok(SliceResult { width, step, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spike::{SpikeTrain, StimulusLabel};

    fn two_by_two(trains: [&[f64]; 4]) -> LabeledDataset {
        let l = |i| StimulusLabel::new(i).unwrap();
        LabeledDataset::new(
            2,
            2,
            vec![
                (l(1), SpikeTrain::new(trains[0].to_vec()).unwrap()),
                (l(1), SpikeTrain::new(trains[1].to_vec()).unwrap()),
                (l(2), SpikeTrain::new(trains[2].to_vec()).unwrap()),
                (l(2), SpikeTrain::new(trains[3].to_vec()).unwrap()),
            ],
        )
        .unwrap()
    }

    #[test]
    fn window_arithmetic() {
        let w = slice_windows(0.1, 0.1, 1.65).unwrap();
        assert_eq!(w.len(), 16);
        assert!((w[0].center() - 0.05).abs() < 1e-12);
        assert!((w[15].center() - 1.55).abs() < 1e-12);
        assert_eq!(slice_windows(0.5, 0.25, 1.0).unwrap().len(), 3);
        assert!(slice_windows(0.1, 0.0, 1.0).is_err());
        assert!(slice_windows(0.0, 0.1, 1.0).is_err());
        assert!(slice_windows(2.0, 0.1, 1.0).unwrap().is_empty());
    }

    #[test]
    fn quantile_interpolates() {
        let v = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0];
        assert!((quantile(&v, 0.4) - 3.0).abs() < 1e-12);
        assert!((quantile(&v, 0.6) - 4.0).abs() < 1e-12);
        assert_eq!(quantile(&[7.0], 0.4), 7.0);
    }

    #[test]
    fn identical_responses_carry_nothing_at_h_one() {
        let ds = two_by_two([&[0.1], &[0.1], &[0.1], &[0.1]]);
        let s = mi_for_metric(&ds, &MetricSpec::SpikeCount, &HPolicy::Fixed(1)).unwrap();
        assert_eq!(s.best.i_tilde, 0.0);
    }

    #[test]
    fn single_point_sweep() {
        let ds = two_by_two([&[0.1], &[0.12], &[0.5], &[0.52]]);
        let sweep = sweep_metric_parameter(
            std::slice::from_ref(&ds),
            MetricKind::VictorPurpura,
            &[20.0],
            &HPolicy::Auto,
        )
        .unwrap();
        let direct = mi_for_metric(&ds, &MetricSpec::VictorPurpura { q: 20.0 }, &HPolicy::Auto)
            .unwrap()
            .best
            .i_tilde;
        assert_eq!(sweep.rows.len(), 1);
        assert_eq!(sweep.rows[0].mean_i_tilde, direct);
        assert_eq!(sweep.rows[0].band_lo, direct);
        assert_eq!(sweep.rows[0].band_hi, direct);
        assert_eq!(sweep.best_param, 20.0);
    }

    #[test]
    fn sweep_errors() {
        let ds = two_by_two([&[], &[], &[], &[]]);
        assert!(matches!(
            sweep_metric_parameter(&[], MetricKind::VanRossum, &[0.01], &HPolicy::Auto),
            Err(Error::EmptyCollection)
        ));
        assert!(matches!(
            sweep_metric_parameter(&[ds], MetricKind::VanRossum, &[], &HPolicy::Auto),
            Err(Error::EmptyGrid)
        ));
    }

    #[test]
    fn empty_windows_have_no_bits_per_spike() {
        let ds = two_by_two([&[0.01], &[0.02], &[0.05, 0.06], &[0.07, 0.08]]);
        let res = time_sliced_mi(
            &ds,
            &MetricSpec::victor_purpura(30.0).unwrap(),
            0.1,
            0.1,
            0.3,
            &HPolicy::Fixed(1),
        )
        .unwrap();
        assert_eq!(res.rows.len(), 3);
        assert_eq!(res.rows[0].mean_spikes, 1.5);
        assert_eq!(res.rows[0].bits_per_spike, Some(0.0));
        for row in &res.rows[1..] {
            assert_eq!(row.mean_spikes, 0.0);
            assert_eq!(row.bits_per_spike, None);
            assert_eq!(row.i_tilde, 0.0);
        }
    }

    #[test]
    fn emd_slices_use_window_width() {
        let ds = two_by_two([&[0.01, 0.5], &[0.02, 0.9], &[0.3], &[0.35]]);
        // spikes up to 0.9 s would violate a 0.5 s EMD window unless each
        // slice re-bases to its own width
        let res = time_sliced_mi(
            &ds,
            &MetricSpec::earth_mover(0.5).unwrap(),
            0.25,
            0.25,
            1.0,
            &HPolicy::Auto,
        )
        .unwrap();
        assert_eq!(res.rows.len(), 4);
    }
}
