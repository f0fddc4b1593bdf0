mod common;

use common::*;
use divcomb::montecarlo::{simulate_sc, simulate_ssc, simulate_ssc_with_selections, McConfig};
use divcomb::schemes::{optimal_threshold, sc_error_exact, ssc_error};

#[test]
fn selection_histogram_follows_geometric_law() {
    let b = fig1_budget();
    let ch = fig1_channel(10.0);
    let g0 = 8.0;
    let samples = 400_000;
    let run =
        simulate_ssc_with_selections(&ch, &b, g0, &McConfig::new(samples, 11).unwrap()).unwrap();
    let f = ch.snr_cdf(g0).unwrap();
    let m = b.antennas as usize;
    let mut expected: Vec<f64> = (0..m).map(|j| f.powi(j as i32) * (1.0 - f)).collect();
    expected.push(f.powi(m as i32));
    let chi2: f64 = run
        .selections
        .iter()
        .zip(&expected)
        .map(|(&o, &p)| {
            let e = p * samples as f64;
            (o as f64 - e).powi(2) / e
        })
        .sum();
    // 6 degrees of freedom; 99.9% quantile is 22.46
    assert!(chi2 < 22.46, "chi2 = {chi2}, counts {:?}", run.selections);
    assert_eq!(run.selections.iter().sum::<u64>(), samples);
}

#[test]
fn confidence_intervals_cover_the_analytic_value() {
    let b = fig1_budget();
    let ch = fig1_channel(8.0);
    let analytic = sc_error_exact(&ch, &b).unwrap();
    let samples = 50_000;
    let sigma = (analytic * (1.0 - analytic) / samples as f64).sqrt();
    let covered = (0..20)
        .filter(|&seed| {
            let est = simulate_sc(&ch, &b, &McConfig::new(samples, seed).unwrap()).unwrap();
            (est.error_rate - analytic).abs() <= 1.96 * sigma
        })
        .count();
    assert!(
        covered >= 17,
        "only {covered}/20 intervals cover {analytic}"
    );
}

#[test]
fn ssc_simulation_tracks_analysis_across_thresholds() {
    let b = fig1_budget();
    let ch = fig1_channel(6.0);
    let samples = 300_000;
    for (i, g0) in [0.5, 2.0, 4.0, 10.0].into_iter().enumerate() {
        let analytic = ssc_error(&ch, &b, g0).unwrap().error_prob;
        let est = simulate_ssc(
            &ch,
            &b,
            g0,
            &McConfig::new(samples, 100 + i as u64).unwrap(),
        )
        .unwrap();
        let sigma = (analytic * (1.0 - analytic) / samples as f64).sqrt();
        let z = (est.error_rate - analytic) / sigma;
        assert!(
            z.abs() < 4.5,
            "g0={g0}: analytic {analytic}, mc {}, z={z}",
            est.error_rate
        );
    }
}

#[test]
fn optimum_threshold_simulates_no_worse_than_sc() {
    let b = fig1_budget();
    let ch = fig1_channel(9.0);
    let opt = optimal_threshold(&ch, &b).unwrap();
    let cfg = McConfig::new(400_000, 5).unwrap();
    let sc = simulate_sc(&ch, &b, &cfg).unwrap();
    let ssc = simulate_ssc(&ch, &b, opt.threshold, &cfg).unwrap();
    assert!(
        ssc.error_rate < sc.error_rate,
        "ssc {} vs sc {}",
        ssc.error_rate,
        sc.error_rate
    );
}

#[test]
fn rare_events_are_flagged() {
    let b = fig1_budget();
    let est = simulate_sc(&fig1_channel(20.0), &b, &McConfig::new(100_000, 1).unwrap()).unwrap();
    assert!(est.unreliable());
    assert_eq!(est.error_rate, 0.0);
}
