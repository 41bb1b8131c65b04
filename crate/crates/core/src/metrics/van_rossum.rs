use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::spike::SpikeTrain;

/// Van Rossum distance with causal exponential kernel of time constant `tau`
/// seconds, normalised so two far-apart single spikes are at distance 1.
///
/// `d² = K(u,u)/2 + K(v,v)/2 - K(u,v)` with
/// `K(a,b) = Σ_ij exp(-|a_i - b_j| / tau)`.
pub fn vr_distance(u: &SpikeTrain, v: &SpikeTrain, tau: f64) -> Result<f64> {
    check_tau(tau)?;
    let (a, b) = if swapped(u.times(), v.times()) {
        (v.times(), u.times())
    } else {
        (u.times(), v.times())
    };
    Ok(vr_from_kernels(
        kernel(a, a, tau),
        kernel(b, b, tau),
        kernel(a, b, tau),
    ))
}

pub(crate) fn check_tau(tau: f64) -> Result<()> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tau",
            value: tau,
            reason: "must be positive and finite",
        });
    }
    Ok(())
}

/// Canonical pair order, so that `d(u, v)` and `d(v, u)` run the same
/// arithmetic.
pub(crate) fn swapped(u: &[f64], v: &[f64]) -> bool {
    let ord = u.len().cmp(&v.len()).then_with(|| {
        u.iter()
            .zip(v)
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(Ordering::Equal)
    });
    ord == Ordering::Greater
}

pub(crate) fn kernel(a: &[f64], b: &[f64], tau: f64) -> f64 {
    a.iter()
        .map(|&x| b.iter().map(|&y| (-(x - y).abs() / tau).exp()).sum::<f64>())
        .sum()
}

/// Arguments must come from a canonically ordered pair `(a, b)`.
pub(crate) fn vr_from_kernels(kaa: f64, kbb: f64, kab: f64) -> f64 {
    let d2 = 0.5 * kaa + 0.5 * kbb - kab;
    d2.max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(x: &[f64]) -> SpikeTrain {
        SpikeTrain::new(x.to_vec()).unwrap()
    }

    #[test]
    fn identical_trains() {
        let u = t(&[0.01, 0.2, 0.2, 0.7]);
        assert_eq!(vr_distance(&u, &u, 0.015).unwrap(), 0.0);
    }

    #[test]
    fn distant_single_spikes() {
        let d = vr_distance(&t(&[0.0]), &t(&[10.0]), 0.015).unwrap();
        assert!((d - 1.0).abs() < 1e-9);
    }

    #[test]
    fn single_spike_closed_form() {
        let tau = 0.02;
        for delta in [0.001, 0.01, 0.03, 0.1] {
            let d = vr_distance(&t(&[0.0]), &t(&[delta]), tau).unwrap();
            let expected = (1.0 - (-delta / tau).exp()).sqrt();
            assert!((d - expected).abs() < 1e-12, "{d} vs {expected}");
        }
    }

    #[test]
    fn empty_train_distance() {
        // K(u,u)/2 for one spike
        let d = vr_distance(&t(&[]), &t(&[0.3]), 0.01).unwrap();
        assert!((d - 0.5f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_tau() {
        for tau in [0.0, -0.1, f64::NAN, f64::INFINITY] {
            assert!(vr_distance(&t(&[]), &t(&[]), tau).is_err());
        }
    }
}
