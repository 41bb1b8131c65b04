use proptest::prelude::*;
use proptest::strategy::ValueTree;
use spikemi::metrics::{
    count_distance, distance_matrix, distance_matrix_for, emd_distance, vp_distance, vr_distance,
};
use spikemi::{LabeledDataset, MetricSpec, SpikeTrain, StimulusLabel};

fn train(times: &[f64]) -> SpikeTrain {
    SpikeTrain::new(times.to_vec()).unwrap()
}

fn arb_train(max_len: usize) -> impl Strategy<Value = SpikeTrain> {
    prop::collection::vec(0.0..1.0f64, 0..=max_len).prop_map(|mut t| {
        t.sort_by(f64::total_cmp);
        SpikeTrain::new(t).unwrap()
    })
}

/// Trains on a coarse grid so coincident spikes and equal counts are common.
fn arb_grid_train(max_len: usize) -> impl Strategy<Value = SpikeTrain> {
    prop::collection::vec(0u32..8, 0..=max_len).prop_map(|mut t| {
        t.sort_unstable();
        SpikeTrain::new(t.into_iter().map(|k| k as f64 / 8.0).collect()).unwrap()
    })
}

fn all_metrics() -> [MetricSpec; 5] {
    [
        MetricSpec::VictorPurpura { q: 32.5 },
        MetricSpec::VictorPurpura { q: 2.0 },
        MetricSpec::VanRossum { tau: 0.015 },
        MetricSpec::EarthMover { window: 1.0 },
        MetricSpec::SpikeCount,
    ]
}

/// `(1/τ) ∫ (f_u − f_v)² dt` for causal exponential filtering, by midpoint
/// rule on a fine grid.
fn vr_numeric(u: &[f64], v: &[f64], tau: f64) -> f64 {
    let end = u.iter().chain(v).fold(0.0f64, |a, &b| a.max(b)) + 40.0 * tau;
    let steps = 400_000;
    let dt = end / steps as f64;
    let f = |train: &[f64], t: f64| -> f64 {
        train
            .iter()
            .filter(|&&s| s <= t)
            .map(|&s| (-(t - s) / tau).exp())
            .sum()
    };
    (0..steps)
        .map(|k| {
            let t = (k as f64 + 0.5) * dt;
            (f(u, t) - f(v, t)).powi(2)
        })
        .sum::<f64>()
        * dt
        / tau
}

#[test]
fn victor_purpura_hand_values() {
    assert_eq!(
        vp_distance(&train(&[0.3]), &train(&[0.3]), 7.0).unwrap(),
        0.0
    );
    assert_eq!(
        vp_distance(&train(&[]), &train(&[0.1, 0.4]), 100.0).unwrap(),
        2.0
    );
    // shift 0.5 s at 1 Hz beats delete + insert; at 10 Hz it does not
    assert_eq!(
        vp_distance(&train(&[0.0]), &train(&[0.5]), 1.0).unwrap(),
        0.5
    );
    assert_eq!(
        vp_distance(&train(&[0.0]), &train(&[0.5]), 10.0).unwrap(),
        2.0
    );
}

#[test]
fn van_rossum_single_spike_closed_form() {
    let far = vr_distance(&train(&[0.0]), &train(&[10.0]), 0.015).unwrap();
    assert!((far - 1.0).abs() < 1e-9);
    for &(delta, tau) in &[(0.01, 0.015), (0.05, 0.015), (0.2, 0.1), (0.003, 0.02)] {
        let d = vr_distance(&train(&[0.0]), &train(&[delta]), tau).unwrap();
        let closed = (1.0 - (-delta / tau).exp()).sqrt();
        let numeric = vr_numeric(&[0.0], &[delta], tau).sqrt();
        assert!((d - closed).abs() < 1e-12, "{d} vs {closed}");
        assert!((d - numeric).abs() < 1e-3 * numeric, "{d} vs {numeric}");
    }
}

#[test]
fn van_rossum_matches_integration_on_multi_spike_trains() {
    let cases: [(&[f64], &[f64], f64); 3] = [
        (&[0.1, 0.12, 0.5], &[0.11, 0.52], 0.015),
        (&[0.2, 0.3], &[], 0.05),
        (&[0.05, 0.4, 0.41, 0.9], &[0.05, 0.6], 0.01),
    ];
    for (u, v, tau) in cases {
        let d = vr_distance(&train(u), &train(v), tau).unwrap();
        let numeric = vr_numeric(u, v, tau).sqrt();
        assert!((d - numeric).abs() < 1e-3 * numeric, "{d} vs {numeric}");
    }
}

#[test]
fn earth_mover_hand_values() {
    let d = emd_distance(&train(&[0.2]), &train(&[0.7]), 1.0).unwrap();
    assert!((d - 0.5).abs() < 1e-15);
    assert_eq!(emd_distance(&train(&[0.5]), &train(&[]), 1.0).unwrap(), 0.5);
}

#[test]
fn count_distance_hand_values() {
    assert_eq!(count_distance(&train(&[]), &train(&[])), 0.0);
    assert_eq!(count_distance(&train(&[0.1, 0.2]), &train(&[0.3])), 1.0);
}

#[test]
fn matrix_trivial_cases() {
    let one = distance_matrix_for(&[train(&[0.1])], &MetricSpec::VictorPurpura { q: 1.0 }).unwrap();
    assert_eq!(one.n(), 1);
    assert_eq!(one.get(0, 0), 0.0);
    let same = vec![train(&[0.1, 0.4]); 5];
    for metric in all_metrics() {
        let m = distance_matrix_for(&same, &metric).unwrap();
        assert!(
            (0..5).all(|i| m.row(i).iter().all(|&d| d == 0.0)),
            "{metric:?}"
        );
    }
}

#[test]
fn matrix_equals_naive_double_loop() {
    let mut runner = proptest::test_runner::TestRunner::deterministic();
    let trains: Vec<SpikeTrain> = (0..10)
        .map(|_| arb_train(8).new_tree(&mut runner).unwrap().current())
        .collect();
    let labels = (0..10).map(|i| StimulusLabel::new(i % 2 + 1).unwrap());
    let ds = LabeledDataset::new(2, 5, labels.zip(trains.clone()).collect()).unwrap();
    for metric in all_metrics() {
        let m = distance_matrix(&ds, &metric).unwrap();
        for i in 0..10 {
            for j in 0..10 {
                let naive = if i == j {
                    0.0
                } else {
                    metric.distance(&trains[i], &trains[j]).unwrap()
                };
                assert_eq!(
                    m.get(i, j).to_bits(),
                    naive.to_bits(),
                    "{metric:?} ({i}, {j})"
                );
            }
        }
    }
}

#[test]
fn earth_mover_rejects_spikes_outside_window_in_matrix() {
    let trains = [train(&[0.5]), train(&[1.5])];
    assert!(distance_matrix_for(&trains, &MetricSpec::EarthMover { window: 1.0 }).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(2000))]

    #[test]
    fn axioms_hold_for_every_metric(a in arb_train(8), b in arb_train(8), c in arb_train(8)) {
        for metric in all_metrics() {
            let d = |x: &SpikeTrain, y: &SpikeTrain| metric.distance(x, y).unwrap();
            prop_assert_eq!(d(&a, &b).to_bits(), d(&b, &a).to_bits());
            prop_assert_eq!(d(&a, &a), 0.0);
            prop_assert!(d(&a, &b) >= 0.0);
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12, "{:?}", metric);
        }
    }

    #[test]
    fn axioms_hold_with_coincident_spikes(a in arb_grid_train(6), b in arb_grid_train(6), c in arb_grid_train(6)) {
        for metric in all_metrics() {
            let d = |x: &SpikeTrain, y: &SpikeTrain| metric.distance(x, y).unwrap();
            prop_assert_eq!(d(&a, &b).to_bits(), d(&b, &a).to_bits());
            prop_assert_eq!(d(&a, &a), 0.0);
            prop_assert!(d(&a, &c) <= d(&a, &b) + d(&b, &c) + 1e-12, "{:?}", metric);
        }
    }
}

proptest! {
    #[test]
    fn victor_purpura_limits(a in arb_train(8), b in arb_train(8)) {
        let zero = vp_distance(&a, &b, 0.0).unwrap();
        prop_assert_eq!(zero, a.len().abs_diff(b.len()) as f64);
        prop_assert_eq!(zero, count_distance(&a, &b));
        // continuous draws never coincide, so nothing can be shifted for free
        if a.times().iter().all(|t| !b.times().contains(t)) {
            let inf = vp_distance(&a, &b, f64::INFINITY).unwrap();
            prop_assert_eq!(inf, (a.len() + b.len()) as f64);
        }
    }

    #[test]
    fn victor_purpura_is_bounded_by_counts(a in arb_train(8), b in arb_train(8), q in 0.0..500.0f64) {
        let d = vp_distance(&a, &b, q).unwrap();
        prop_assert!(d <= (a.len() + b.len()) as f64);
        prop_assert!(d >= a.len().abs_diff(b.len()) as f64);
    }

    #[test]
    fn earth_mover_equals_sorted_transport_on_equal_counts(
        pairs in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64), 1..10)
    ) {
        let (mut u, mut v): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        u.sort_by(f64::total_cmp);
        v.sort_by(f64::total_cmp);
        let transport = u.iter().zip(&v).map(|(a, b)| (a - b).abs()).sum::<f64>() / u.len() as f64;
        let d = emd_distance(&train(&u), &train(&v), 1.0).unwrap();
        prop_assert!((d - transport).abs() < 1e-12, "{} vs {}", d, transport);
    }

    #[test]
    fn van_rossum_identity_and_bound(a in arb_train(8), tau in 0.001..0.5f64) {
        prop_assert!(vr_distance(&a, &a, tau).unwrap().abs() < 1e-9);
        let empty = train(&[]);
        // d(a, ∅)² = K(a, a) / 2 <= count² / 2
        prop_assert!(vr_distance(&a, &empty, tau).unwrap() <= a.len() as f64 + 1e-12);
    }
}
