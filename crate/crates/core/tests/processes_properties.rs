use proptest::prelude::*;
use spikeinfo::estimators::mi_plugin;
use spikeinfo::measures::transfer_entropy_exact;
use spikeinfo::processes::{
    coupled_binary_pair, coupled_pair_exact_joint, simulate_markov, simulate_poisson,
    MarkovModel, RateProfile, SpikeTrain,
};
use spikeinfo::prob::{sample_stats, VarianceConvention};
use spikeinfo::seeded_rng;

fn subwindow_counts(train: &SpikeTrain, windows: usize) -> Vec<u64> {
    let width = train.duration() / windows as f64;
    let mut counts = vec![0u64; windows];
    for &t in train.times() {
        counts[((t / width) as usize).min(windows - 1)] += 1;
    }
    counts
}

/// Mean and variance of pooled sub-window counts against Poisson(expected),
/// each within 5 standard errors.
fn assert_poisson_counts(counts: &[f64], expected: f64) {
    let n = counts.len() as f64;
    let s = sample_stats(counts, VarianceConvention::Unbiased).unwrap();
    let mean_se = (expected / n).sqrt();
    // var(s²) for Poisson: (μ4 - σ⁴)/n with μ4 = λ(1 + 3λ)
    let var_se = ((expected + 2.0 * expected * expected) / n).sqrt();
    assert!((s.mean - expected).abs() < 5.0 * mean_se, "mean {} vs {expected}", s.mean);
    assert!((s.variance - expected).abs() < 5.0 * var_se, "variance {} vs {expected}", s.variance);
}

#[test]
fn thinning_matches_homogeneous_process() {
    let rate = 20.0;
    let duration = 2.0;
    let windows = 10;
    let expected = rate * duration / windows as f64;
    let flat_piecewise = RateProfile::piecewise(vec![0.0, 0.37, 1.1], vec![rate; 3]).unwrap();
    let constant = RateProfile::constant(rate).unwrap();
    for (offset, profile) in [(0u64, &flat_piecewise), (10_000, &constant)] {
        let counts: Vec<f64> = (0..1000)
            .flat_map(|rep| {
                let train = simulate_poisson(profile, duration, &mut seeded_rng(offset + rep)).unwrap();
                subwindow_counts(&train, windows)
            })
            .map(|c| c as f64)
            .collect();
        assert_poisson_counts(&counts, expected);
    }
}

#[test]
fn piecewise_rates_follow_segments() {
    let profile = RateProfile::piecewise(vec![0.0, 5.0], vec![2.0, 40.0]).unwrap();
    let train = simulate_poisson(&profile, 10.0, &mut seeded_rng(3)).unwrap();
    let early = train.times().iter().filter(|&&t| t < 5.0).count() as f64;
    let late = train.spike_count() as f64 - early;
    assert!((early - 10.0).abs() < 5.0 * 10f64.sqrt());
    assert!((late - 200.0).abs() < 5.0 * 200f64.sqrt());
    assert_eq!(profile.integral(10.0), 210.0);
}

#[test]
fn interarrival_cv_near_one() {
    let rate = 50.0;
    let train = simulate_poisson(&RateProfile::constant(rate).unwrap(), 220.0, &mut seeded_rng(11)).unwrap();
    assert!(train.spike_count() >= 10_000);
    let gaps = train.interarrivals().unwrap();
    let s = sample_stats(&gaps[..10_000], VarianceConvention::Population).unwrap();
    assert!((s.cv - 1.0).abs() < 0.05, "cv {}", s.cv);
    let fano = train.fano_factor(1.0).unwrap();
    assert!((fano - 1.0).abs() < 0.25, "fano {fano}");
}

#[test]
fn order_one_chain_forgets_older_history() {
    let model = MarkovModel::new(
        1,
        3,
        vec![vec![0.6, 0.3, 0.1], vec![0.2, 0.2, 0.6], vec![0.3, 0.5, 0.2]],
    )
    .unwrap();
    let series = simulate_markov(&model, 1_000_000, &[0], &mut seeded_rng(21)).unwrap();
    let s = series.symbols();
    // counts[older][previous][next]
    let mut counts = [[[0u64; 3]; 3]; 3];
    for w in s.windows(3) {
        counts[w[0]][w[1]][w[2]] += 1;
    }
    for prev in 0..3 {
        let laws: Vec<Vec<f64>> = (0..3)
            .map(|older| {
                let row = counts[older][prev];
                let total: u64 = row.iter().sum();
                row.iter().map(|&c| c as f64 / total as f64).collect()
            })
            .collect();
        for a in &laws {
            for b in &laws {
                let gap = a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max);
                assert!(gap < 0.02, "prev {prev}: {gap}");
            }
        }
        for (next, &p) in model.row(prev).mass().iter().enumerate() {
            assert!((laws[0][next] - p).abs() < 0.02);
        }
    }
}

#[test]
fn uncoupled_pair_has_no_plugin_mi() {
    let n = 100_000;
    let (x, y) = coupled_binary_pair(0.0, 1, n, &mut seeded_rng(5)).unwrap();
    let mi = mi_plugin(&x, &y).unwrap().value.0;
    // plug-in MI under independence ~ chi2 with (A-1)^2 dof over 2N ln 2
    let dof = 1.0;
    let scale = 2.0 * n as f64 * std::f64::consts::LN_2;
    let threshold = dof / scale + 3.0 * (2.0 * dof).sqrt() / scale;
    assert!(mi < threshold, "{mi} >= {threshold}");
}

#[test]
fn exact_pair_transfer_entropy_matches_closed_form() {
    for c in [0.0f64, 0.25, 0.5, 0.9, 1.0] {
        // TE = 1 - H2((1 + c) / 2) for a fair source copied with probability c
        let hit = (1.0 + c) / 2.0;
        let h = if hit >= 1.0 { 0.0 } else { -(hit * hit.log2() + (1.0 - hit) * (1.0 - hit).log2()) };
        let te = transfer_entropy_exact(&coupled_pair_exact_joint(c).unwrap()).unwrap().0;
        assert!((te - (1.0 - h)).abs() < 1e-12, "c={c}: {te}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn simulated_trains_respect_invariants(rate in 0.5..200.0f64, duration in 0.1..5.0f64, seed: u64) {
        let profile = RateProfile::constant(rate).unwrap();
        let a = simulate_poisson(&profile, duration, &mut seeded_rng(seed)).unwrap();
        let b = simulate_poisson(&profile, duration, &mut seeded_rng(seed)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert!(a.times().windows(2).all(|w| w[0] < w[1]));
        prop_assert!(a.times().iter().all(|&t| (0.0..duration).contains(&t)));
    }

    #[test]
    fn markov_output_in_alphabet(order in 1..3usize, alphabet in 2..4usize, steps in 1..500usize, seed: u64) {
        let model = MarkovModel::from_fn(order, alphabet, |h| {
            let bias = h.iter().sum::<usize>() % alphabet;
            (0..alphabet).map(|s| if s == bias { 2.0 } else { 1.0 } / (alphabet as f64 + 1.0)).collect()
        }).unwrap();
        let series = simulate_markov(&model, steps, &vec![0; order], &mut seeded_rng(seed)).unwrap();
        prop_assert_eq!(series.len(), steps);
        prop_assert!(series.symbols().iter().all(|&s| s < alphabet));
    }

    #[test]
    fn coupling_one_copies_source(lag in 1..5usize, len in 10..300usize, seed: u64) {
        let (x, y) = coupled_binary_pair(1.0, lag, len, &mut seeded_rng(seed)).unwrap();
        for t in lag..len {
            prop_assert_eq!(y.symbols()[t], x.symbols()[t - lag]);
        }
    }
}
