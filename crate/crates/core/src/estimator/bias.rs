use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};

use crate::error::{Error, Result};

fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::ZERO;
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        // exact at every step: acc holds C(n, i) before the update
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// Hypergeometric probability of `k` successes in `m` draws without
/// replacement from `s` successes and `f` failures:
/// `C(s, k) · C(f, m - k) / C(s + f, m)`.
///
/// Evaluated with exact integers and rounded once to `f64`. Values of `k`
/// outside the support give 0.
pub fn hypergeometric_pmf(k: u64, s: u64, m: u64, f: u64) -> Result<f64> {
    let population = s + f;
    if m > population {
        return Err(Error::HypergeometricDomain { m, population });
    }
    if k > s || k > m || m - k > f {
        return Ok(0.0);
    }
    let num = binomial(s, k) * binomial(f, m - k);
    let den = binomial(population, m);
    let ratio = BigRational::new(num.into(), den.into());
    Ok(ratio.to_f64().expect("probability is representable"))
}

/// Exact expectation of I₀ when labels carry no information about the
/// responses.
///
/// Under independence the seed's `h - 1` neighbours are a uniform draw
/// without replacement from the other `n - 1` trials, `n_c - 1` of which
/// share the seed's label, so `h_i - 1` is hypergeometric. Every label class
/// has the same weight `n_c / n` in a balanced design, so the class sum
/// contributes a factor of exactly one:
///
/// `I_b = Σ_{r=1}^{h} u(r - 1; n_c - 1, h - 1, n - n_c) · log₂(n_s · r / h)`.
pub fn bias(n: usize, n_s: usize, n_c: usize, h: usize) -> Result<f64> {
    if n_s < 1 || n_c < 1 || n != n_s * n_c {
        return Err(Error::InvalidDesign { n_s, n_c });
    }
    if h < 1 || h > n {
        return Err(Error::HOutOfRange { h, n });
    }
    let mut total = 0.0;
    for r in 1..=h.min(n_c) {
        let p = hypergeometric_pmf(
            (r - 1) as u64,
            (n_c - 1) as u64,
            (h - 1) as u64,
            (n - n_c) as u64,
        )?;
        if p > 0.0 {
            total += p * ((n_s * r) as f64 / h as f64).log2();
        }
    }
    Ok(total)
}
