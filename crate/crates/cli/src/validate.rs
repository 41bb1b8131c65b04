//! Oracle suite behind `spikemi validate`.
//!
//! Every check compares the library against an independent computation:
//! the bias formula against label shuffles, the metric fast paths against
//! brute force, numerical integration, or quantile transport.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spikemi::estimator::{bias, hypergeometric_pmf};
use spikemi::metrics::{count_distance, emd_distance, vp_distance, vr_distance};
use spikemi::synth::{self, Coding, GeneratorSpec};
use spikemi::{DistanceMatrix, Estimator, MetricSpec, SpikeTrain, StimulusLabel};

use crate::config::{Fault, ValidateArgs};
use crate::exit::Failure;

/// Designs `(n_s, n_c, h)` for the shuffle check.
const BIAS_DESIGNS: [(usize, usize, usize); 3] = [(2, 3, 2), (4, 5, 5), (20, 10, 20)];
const BIAS_SIGMAS: f64 = 3.0;
const VR_REL_TOL: f64 = 1e-3;
const EMD_TOL: f64 = 1e-12;
const TRIANGLE_SLACK: f64 = 1e-12;

struct Check {
    name: String,
    passed: bool,
    detail: String,
}

pub fn run(args: &ValidateArgs) -> Result<(), Failure> {
    if args.reps < 2 {
        return Err(Failure::usage("--reps must be at least 2"));
    }
    let mut checks = Vec::new();
    for (k, &(n_s, n_c, h)) in BIAS_DESIGNS.iter().enumerate() {
        checks.push(check_bias(n_s, n_c, h, args, k as u64));
    }
    checks.push(check_vp(rng(args.seed, 10)));
    checks.push(check_vr(rng(args.seed, 11)));
    checks.push(check_emd(rng(args.seed, 12)));
    checks.push(check_axioms(rng(args.seed, 13)));
    checks.push(check_h_one(args.seed));

    for c in &checks {
        let tag = if c.passed { "PASS" } else { "FAIL" };
        println!("{tag} {}: {}", c.name, c.detail);
    }
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.passed)
        .map(|c| c.name.as_str())
        .collect();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::oracle(format!(
            "oracle check(s) failed: {}",
            failed.join(", ")
        )))
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The bias sum with the log argument taken from `n_c` instead of `n_s`.
fn corrupted_bias(n: usize, n_c: usize, h: usize) -> f64 {
    (1..=h.min(n_c))
        .map(|r| {
            let p = hypergeometric_pmf(
                (r - 1) as u64,
                (n_c - 1) as u64,
                (h - 1) as u64,
                (n - n_c) as u64,
            )
            .expect("valid design");
            if p > 0.0 {
                p * ((n_c * r) as f64 / h as f64).log2()
            } else {
                0.0
            }
        })
        .sum()
}

/// Euclidean distances between uniform points in the unit square.
fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> DistanceMatrix {
    let pts: Vec<(f64, f64)> = (0..n).map(|_| (rng.random(), rng.random())).collect();
    let rows = pts
        .iter()
        .map(|a| pts.iter().map(|b| (a.0 - b.0).hypot(a.1 - b.1)).collect())
        .collect();
    DistanceMatrix::from_rows(rows).expect("valid matrix")
}

fn label_major(n_s: usize, n_c: usize) -> Vec<StimulusLabel> {
    (1..=n_s)
        .flat_map(|l| std::iter::repeat_n(StimulusLabel::new(l).unwrap(), n_c))
        .collect()
}

fn check_bias(n_s: usize, n_c: usize, h: usize, args: &ValidateArgs, stream: u64) -> Check {
    let name = format!("bias n_s={n_s} n_c={n_c} h={h}");
    let n = n_s * n_c;
    let matrix = random_matrix(n, &mut rng(args.seed, stream));
    let expected = match args.inject_fault {
        Some(Fault::Bias) => corrupted_bias(n, n_c, h),
        None => bias(n, n_s, n_c, h).expect("valid design"),
    };
    let null = Estimator::new(&matrix, &label_major(n_s, n_c))
        .and_then(|est| est.shuffle_null(h, args.reps, args.seed ^ stream));
    match null {
        Ok(null) => {
            let z = (null.mean - expected) / null.std_error;
            Check {
                passed: z.abs() <= BIAS_SIGMAS,
                detail: format!(
                    "shuffle mean {:.6} ± {:.6} ({} reps), formula {:.6}, z = {:.2}",
                    null.mean, null.std_error, args.reps, expected, z
                ),
                name,
            }
        }
        Err(e) => Check {
            name,
            passed: false,
            detail: e.to_string(),
        },
    }
}

fn train(mut times: Vec<f64>) -> SpikeTrain {
    times.sort_by(f64::total_cmp);
    SpikeTrain::new(times).expect("finite sorted times")
}

fn random_train(rng: &mut ChaCha8Rng, max_len: usize) -> SpikeTrain {
    let len = rng.random_range(0..=max_len);
    train((0..len).map(|_| rng.random::<f64>()).collect())
}

/// Times on a 1/64 s grid so every cost below is exact in binary.
fn dyadic_train(rng: &mut ChaCha8Rng, max_len: usize) -> SpikeTrain {
    let len = rng.random_range(0..=max_len);
    train(
        (0..len)
            .map(|_| rng.random_range(0..64u32) as f64 / 64.0)
            .collect(),
    )
}

/// Minimum over every partial matching of `u` into `v`: matched pairs pay
/// `q·|Δt|`, unmatched spikes pay 1.
fn vp_brute(u: &[f64], v: &[f64], q: f64) -> f64 {
    fn go(u: &[f64], v: &[f64], q: f64, used: u32) -> f64 {
        let Some((&a, rest)) = u.split_first() else {
            return (v.len() - used.count_ones() as usize) as f64;
        };
        let mut best = 1.0 + go(rest, v, q, used);
        for (j, &b) in v.iter().enumerate() {
            if used & (1 << j) == 0 {
                let shift = if a == b { 0.0 } else { q * (a - b).abs() };
                best = best.min(shift + go(rest, v, q, used | (1 << j)));
            }
        }
        best
    }
    go(u, v, q, 0)
}

fn check_vp(mut rng: ChaCha8Rng) -> Check {
    let qs = [0.0, 0.5, 1.0, 2.0, 4.0, 16.0, 64.0, f64::INFINITY];
    let mut worst = None;
    let mut cases = 0;
    for _ in 0..500 {
        let u = dyadic_train(&mut rng, 5);
        let v = dyadic_train(&mut rng, 5);
        for &q in &qs {
            cases += 1;
            let fast = vp_distance(&u, &v, q).expect("valid q");
            let slow = vp_brute(u.times(), v.times(), q);
            if fast != slow && worst.is_none() {
                worst = Some(format!(
                    "q={q}: {:?} vs {:?} gave {fast}, brute force {slow}",
                    u.times(),
                    v.times()
                ));
            }
        }
    }
    Check {
        name: "victor-purpura vs brute force".into(),
        passed: worst.is_none(),
        detail: worst.unwrap_or_else(|| format!("{cases} cases exact")),
    }
}

/// `d² = (1/τ) ∫ (f_u - f_v)² dt` with `f` the causally filtered train,
/// by composite Simpson between consecutive spikes.
fn vr_integral(u: &[f64], v: &[f64], tau: f64) -> f64 {
    let filtered = |train: &[f64], upto: f64, t: f64| -> f64 {
        train
            .iter()
            .filter(|&&s| s <= upto)
            .map(|&s| (-(t - s) / tau).exp())
            .sum()
    };
    let mut breaks: Vec<f64> = u.iter().chain(v).copied().collect();
    if breaks.is_empty() {
        return 0.0;
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    breaks.push(breaks[breaks.len() - 1] + 40.0 * tau);
    let mut total = 0.0;
    for w in breaks.windows(2) {
        let (a, b) = (w[0], w[1]);
        let g = |t: f64| (filtered(u, a, t) - filtered(v, a, t)).powi(2);
        let m = 2 * (((b - a) / tau * 8.0).ceil() as usize).max(4);
        let step = (b - a) / m as f64;
        let mut s = g(a) + g(b);
        for k in 1..m {
            s += if k % 2 == 1 { 4.0 } else { 2.0 } * g(a + k as f64 * step);
        }
        total += s * step / 3.0;
    }
    total / tau
}

fn check_vr(mut rng: ChaCha8Rng) -> Check {
    let taus = [0.005, 0.015, 0.05, 0.2];
    let mut worst_rel: f64 = 0.0;
    let mut failure = None;
    for _ in 0..100 {
        let u = random_train(&mut rng, 5);
        let v = random_train(&mut rng, 5);
        for &tau in &taus {
            let fast = vr_distance(&u, &v, tau).expect("valid tau");
            let slow = vr_integral(u.times(), v.times(), tau).sqrt();
            let err = (fast - slow).abs();
            if slow > 0.0 {
                worst_rel = worst_rel.max(err / slow);
            }
            if err > VR_REL_TOL * slow + 1e-9 && failure.is_none() {
                failure = Some(format!(
                    "tau={tau}: {:?} vs {:?} gave {fast}, integral {slow}",
                    u.times(),
                    v.times()
                ));
            }
        }
    }
    Check {
        name: "van rossum vs numerical integration".into(),
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| format!("worst relative error {worst_rel:.2e}")),
    }
}

/// Transport cost between the normalised spike distributions as the L¹
/// distance of their quantile functions; an empty train has `F ≡ 0`.
fn emd_transport(u: &[f64], v: &[f64], window: f64) -> f64 {
    let mean = |x: &[f64]| x.iter().sum::<f64>() / x.len() as f64;
    match (u.is_empty(), v.is_empty()) {
        (true, true) => 0.0,
        (false, true) => window - mean(u),
        (true, false) => window - mean(v),
        (false, false) => {
            let (nu, nv) = (u.len(), v.len());
            // quantile pieces end at i/nu and j/nv; compare as i·nv vs j·nu
            let (mut i, mut j) = (1, 1);
            let mut prev = 0.0;
            let mut total = 0.0;
            while i <= nu && j <= nv {
                let (pi, pj) = (i * nv, j * nu);
                let end = pi.min(pj) as f64 / (nu * nv) as f64;
                total += (end - prev) * (u[i - 1] - v[j - 1]).abs();
                prev = end;
                if pi <= pj {
                    i += 1;
                }
                if pj <= pi {
                    j += 1;
                }
            }
            total
        }
    }
}

fn check_emd(mut rng: ChaCha8Rng) -> Check {
    let mut worst: f64 = 0.0;
    let mut failure = None;
    for _ in 0..2000 {
        let u = random_train(&mut rng, 8);
        let v = random_train(&mut rng, 8);
        let fast = emd_distance(&u, &v, 1.0).expect("spikes inside window");
        let slow = emd_transport(u.times(), v.times(), 1.0);
        let err = (fast - slow).abs();
        worst = worst.max(err);
        if err > EMD_TOL && failure.is_none() {
            failure = Some(format!(
                "{:?} vs {:?} gave {fast}, transport {slow}",
                u.times(),
                v.times()
            ));
        }
    }
    Check {
        name: "earth mover vs transport".into(),
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| format!("worst absolute error {worst:.2e}")),
    }
}

type Distance = dyn Fn(&SpikeTrain, &SpikeTrain) -> f64;

fn check_axioms(mut rng: ChaCha8Rng) -> Check {
    let metrics: [(&str, Box<Distance>); 4] = [
        ("vp", Box::new(|u, v| vp_distance(u, v, 32.5).unwrap())),
        ("vr", Box::new(|u, v| vr_distance(u, v, 0.015).unwrap())),
        ("emd", Box::new(|u, v| emd_distance(u, v, 1.0).unwrap())),
        ("count", Box::new(count_distance)),
    ];
    let mut failure = None;
    let triples = 2000;
    'outer: for _ in 0..triples {
        let (a, b, c) = (
            random_train(&mut rng, 6),
            random_train(&mut rng, 6),
            random_train(&mut rng, 6),
        );
        for (name, d) in &metrics {
            let (ab, ba, bc, ac) = (d(&a, &b), d(&b, &a), d(&b, &c), d(&a, &c));
            let problem = if ab.to_bits() != ba.to_bits() {
                Some(format!("{name} asymmetric: {ab} vs {ba}"))
            } else if d(&a, &a) != 0.0 {
                Some(format!("{name}: d(u, u) = {}", d(&a, &a)))
            } else if ab.is_nan() || ab < 0.0 {
                Some(format!("{name}: negative distance {ab}"))
            } else if ac > ab + bc + TRIANGLE_SLACK {
                Some(format!("{name}: triangle {ac} > {ab} + {bc}"))
            } else {
                None
            };
            if problem.is_some() {
                failure = problem;
                break 'outer;
            }
        }
    }
    Check {
        name: "metric axioms".into(),
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| format!("{triples} triples per metric")),
    }
}

fn check_h_one(seed: u64) -> Check {
    let spec = GeneratorSpec {
        n_s: 4,
        n_c: 5,
        duration: 1.0,
        coding: Coding::Null { rate: 10.0 },
        seed,
    };
    let dataset = synth::generate(&spec).expect("valid spec");
    let metrics = [
        MetricSpec::VictorPurpura { q: 32.5 },
        MetricSpec::VanRossum { tau: 0.015 },
        MetricSpec::EarthMover { window: 1.0 },
        MetricSpec::SpikeCount,
    ];
    let mut failure = None;
    for metric in metrics {
        let result = spikemi::metrics::distance_matrix(&dataset, &metric)
            .and_then(|m| Estimator::new(&m, dataset.labels()))
            .and_then(|est| est.estimate(1));
        match result {
            Ok(e) if e.i_tilde.abs() <= 1e-12 => {}
            Ok(e) => {
                failure = Some(format!("{}: Ĩ(1) = {}", metric.kind(), e.i_tilde));
                break;
            }
            Err(e) => {
                failure = Some(e.to_string());
                break;
            }
        }
    }
    Check {
        name: "h = 1 carries no information".into(),
        passed: failure.is_none(),
        detail: failure.unwrap_or_else(|| "Ĩ(1) = 0 for all four metrics".into()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brute_force_matches_hand_values() {
        assert_eq!(vp_brute(&[0.0], &[0.5], 1.0), 0.5);
        assert_eq!(vp_brute(&[0.0], &[0.5], 8.0), 2.0);
        assert_eq!(vp_brute(&[], &[0.25, 0.5], 8.0), 2.0);
    }

    #[test]
    fn transport_of_single_spikes() {
        assert_eq!(emd_transport(&[0.25], &[0.75], 1.0), 0.5);
        assert_eq!(emd_transport(&[0.5], &[], 1.0), 0.5);
        assert!((emd_transport(&[0.5], &[0.25, 0.75], 1.0) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn integral_of_far_apart_spikes_is_one() {
        let d2 = vr_integral(&[0.0], &[10.0], 0.01);
        assert!((d2 - 1.0).abs() < 1e-4, "{d2}");
    }

    #[test]
    fn corrupted_bias_differs_when_designs_are_unequal() {
        let good = bias(6, 2, 3, 2).unwrap();
        assert!((corrupted_bias(6, 3, 2) - good).abs() > 0.1);
    }
}
