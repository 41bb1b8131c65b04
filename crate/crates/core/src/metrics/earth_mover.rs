use crate::error::{Error, Result};
use crate::spike::SpikeTrain;

/// Earth mover distance between normalised cumulative spike functions on
/// `[0, window)`.
///
/// `F_a(t)` is the fraction of the spikes of `a` at or before `t`; an empty
/// train has `F ≡ 0`. The integral of `|F_u - F_v|` is evaluated exactly as a
/// sum over the merged spike times.
pub fn emd_distance(u: &SpikeTrain, v: &SpikeTrain, window: f64) -> Result<f64> {
    check_window(window)?;
    check_inside(u, window)?;
    check_inside(v, window)?;
    Ok(emd_unchecked(u.times(), v.times(), window))
}

pub(crate) fn check_window(window: f64) -> Result<()> {
    if !(window.is_finite() && window > 0.0) {
        return Err(Error::InvalidParameter {
            name: "emd window",
            value: window,
            reason: "must be positive and finite",
        });
    }
    Ok(())
}

pub(crate) fn check_inside(train: &SpikeTrain, window: f64) -> Result<()> {
    match train.times().iter().find(|&&t| !(0.0..window).contains(&t)) {
        Some(&time) => Err(Error::SpikeOutsideWindow { time, window }),
        None => Ok(()),
    }
}

pub(crate) fn emd_unchecked(u: &[f64], v: &[f64], window: f64) -> f64 {
    let mass = |count: usize, len: usize| {
        if len == 0 {
            0.0
        } else {
            count as f64 / len as f64
        }
    };
    let (mut iu, mut iv) = (0, 0);
    let mut prev = 0.0;
    let mut total = 0.0;
    while iu < u.len() || iv < v.len() {
        let take_u = iv == v.len() || (iu < u.len() && u[iu] <= v[iv]);
        let t = if take_u { u[iu] } else { v[iv] };
        total += (mass(iu, u.len()) - mass(iv, v.len())).abs() * (t - prev);
        prev = t;
        if take_u {
            iu += 1;
        } else {
            iv += 1;
        }
    }
    total + (mass(iu, u.len()) - mass(iv, v.len())).abs() * (window - prev)
}
