use crate::error::{Error, Result};
use crate::spike::SpikeTrain;

/// Victor-Purpura edit distance with cost `q` (Hz) per second of spike shift.
///
/// Inserting or deleting a spike costs 1. `q = +inf` is allowed: coincident
/// spikes still match for free and every other pair is left unmatched.
pub fn vp_distance(u: &SpikeTrain, v: &SpikeTrain, q: f64) -> Result<f64> {
    check_q(q)?;
    Ok(vp_unchecked(u.times(), v.times(), q))
}

pub(crate) fn check_q(q: f64) -> Result<()> {
    if q.is_nan() || q < 0.0 {
        return Err(Error::InvalidParameter {
            name: "q",
            value: q,
            reason: "must be >= 0",
        });
    }
    Ok(())
}

#[inline]
fn shift_cost(a: f64, b: f64, q: f64) -> f64 {
    let dt = (a - b).abs();
    // 0 * inf would otherwise poison the table
    if dt == 0.0 {
        0.0
    } else {
        q * dt
    }
}

pub(crate) fn vp_unchecked(u: &[f64], v: &[f64], q: f64) -> f64 {
    if q == 0.0 {
        return u.len().abs_diff(v.len()) as f64;
    }
    let mut prev: Vec<f64> = (0..=v.len()).map(|j| j as f64).collect();
    let mut cur = vec![0.0; v.len() + 1];
    for (i, &a) in u.iter().enumerate() {
        cur[0] = (i + 1) as f64;
        for (j, &b) in v.iter().enumerate() {
            let delete = prev[j + 1] + 1.0;
            let insert = cur[j] + 1.0;
            let shift = prev[j] + shift_cost(a, b, q);
            cur[j + 1] = delete.min(insert).min(shift);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[v.len()]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(x: &[f64]) -> SpikeTrain {
        SpikeTrain::new(x.to_vec()).unwrap()
    }

    #[test]
    fn identical_and_empty() {
        assert_eq!(vp_distance(&t(&[0.3]), &t(&[0.3]), 17.0).unwrap(), 0.0);
        for q in [0.0, 1.0, 1e6] {
            assert_eq!(vp_distance(&t(&[]), &t(&[0.1, 0.4]), q).unwrap(), 2.0);
        }
    }

    #[test]
    fn shift_versus_delete_insert() {
        // shift costs q * 0.5; delete + insert costs 2
        assert_eq!(vp_distance(&t(&[0.0]), &t(&[0.5]), 1.0).unwrap(), 0.5);
        assert_eq!(vp_distance(&t(&[0.0]), &t(&[0.5]), 10.0).unwrap(), 2.0);
    }

    #[test]
    fn infinite_q() {
        let u = t(&[0.1, 0.2, 0.3]);
        let v = t(&[0.2, 0.5]);
        assert_eq!(vp_distance(&u, &v, f64::INFINITY).unwrap(), 3.0);
        assert_eq!(vp_distance(&u, &t(&[0.4]), f64::INFINITY).unwrap(), 4.0);
    }

    #[test]
    fn rejects_negative_q() {
        assert!(vp_distance(&t(&[]), &t(&[]), -1.0).is_err());
        assert!(vp_distance(&t(&[]), &t(&[]), f64::NAN).is_err());
    }
}
