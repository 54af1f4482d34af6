mod common;

use common::*;
use qsf::noisegen::{
    generate_colored_nonstationary, generate_colored_stationary, generate_modulated,
    generate_nongaussian, generate_psd_noise, make_noise, standard_envelope, target_psd,
    NoiseConstants, NoiseKind, NoiseProfile, PsdProfile,
};
use qsf::pulsegen::time_grid;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Ensemble periodogram from direct DFT sums, compared bin by bin in bands of 4.
fn psd_band_errors(profile: PsdProfile, m: usize, k: usize) -> Vec<f64> {
    let t = 1.0;
    let c = NoiseConstants::for_duration(t);
    let noise = generate_psd_noise(profile, m, k, t, &c, &mut rng(11));
    let df = 1.0 / t;
    let mut p = vec![0.0; m / 2 + 1];
    for s in &noise.samples {
        for (acc, x) in p.iter_mut().zip(naive_dft_power(s)) {
            *acc += 2.0 * x / (m as f64 * m as f64 * df) / k as f64;
        }
    }
    let band: Vec<usize> = (2..=m / 4).collect();
    band.chunks(4)
        .map(|bins| {
            let est: f64 = bins.iter().map(|&b| p[b]).sum();
            let target: f64 = bins.iter().map(|&b| target_psd(profile, b as f64 * df, &c)).sum();
            (est / target - 1.0).abs()
        })
        .collect()
}

#[test]
fn n1_periodogram_matches_target() {
    let worst = psd_band_errors(PsdProfile::N1, 256, 400).into_iter().fold(0.0, f64::max);
    assert!(worst < 0.2, "worst band error {worst}");
}

#[test]
fn n5_periodogram_matches_target() {
    let worst = psd_band_errors(PsdProfile::N5, 256, 400).into_iter().fold(0.0, f64::max);
    assert!(worst < 0.2, "worst band error {worst}");
}

#[test]
fn bump_is_a_local_maximum() {
    let c = NoiseConstants::for_duration(1.0);
    let at = |f| target_psd(PsdProfile::N1, f, &c);
    assert!(at(c.bump_center_n1) >= at(c.bump_center_n1 - 3.0 * c.bump_width));
    assert!(at(c.bump_center_n1) >= at(c.bump_center_n1 + 3.0 * c.bump_width));
    let n5 = target_psd(PsdProfile::N5, c.bump_center_n5, &c) - c.psd_alpha / (c.bump_center_n5 + c.psd_floor);
    let n1 = at(c.bump_center_n1) - c.psd_alpha / (c.bump_center_n1 + c.psd_floor);
    assert!((n1 - n5).abs() < 1e-9);
}

#[test]
fn psd_series_have_no_dc() {
    let c = NoiseConstants::for_duration(1.0);
    let noise = generate_psd_noise(PsdProfile::N1, 512, 10, 1.0, &c, &mut rng(3));
    for s in &noise.samples {
        let sd = variance(s).sqrt();
        assert!(mean(s).abs() < 3.0 * sd / (s.len() as f64).sqrt());
    }
}

#[test]
fn n2_is_stationary_with_unit_variance() {
    let (m, k) = (512, 2000);
    let c = NoiseConstants::for_duration(1.0);
    let n = generate_colored_stationary(m, k, &c, &mut rng(5));
    let var: Vec<f64> = (0..m).map(|j| mean(&column(&n.samples, j).iter().map(|v| v * v).collect::<Vec<_>>())).collect();
    assert!((mean(&var) - 1.0).abs() < 0.1);
    for lag in 0..=10 {
        let r: Vec<f64> = (0..m - lag)
            .map(|t| n.samples.iter().map(|s| s[t] * s[t + lag]).sum::<f64>() / k as f64)
            .collect();
        let rbar = mean(&r);
        let spread = r.iter().map(|v| (v - rbar).abs()).fold(0.0, f64::max);
        assert!(spread < 0.15, "lag {lag}: spread {spread}");
    }
}

#[test]
fn narrow_kernel_is_nearly_white() {
    let mut c = NoiseConstants::for_duration(1.0);
    c.kernel_sigma_samples = 0.05;
    let n = generate_colored_stationary(256, 1000, &c, &mut rng(6));
    let r1 = mean(&(0..255).map(|t| n.samples.iter().map(|s| s[t] * s[t + 1]).sum::<f64>() / 1000.0).collect::<Vec<_>>());
    assert!(r1.abs() < 0.1, "adjacent correlation {r1}");
}

#[test]
fn n3_variance_follows_envelope() {
    let (m, k, t) = (256, 2000, 1.0);
    let c = NoiseConstants::for_duration(t);
    let n = generate_colored_nonstationary(m, k, t, &c, &mut rng(7));
    let grid = time_grid(t, m);
    let mut zero_checked = false;
    for (j, &tj) in grid.iter().enumerate() {
        let e2 = standard_envelope(tj, t).powi(2);
        let v = mean(&column(&n.samples, j).iter().map(|x| x * x).collect::<Vec<_>>());
        if e2 > 0.5 {
            assert!((v / e2 - 1.0).abs() < 0.2, "t = {tj}: variance {v}, envelope² {e2}");
        }
        if e2 < 1e-3 {
            assert!(v < 0.05);
            zero_checked = true;
        }
    }
    assert!(zero_checked);
}

#[test]
fn unit_envelope_reduces_to_n2() {
    let c = NoiseConstants::for_duration(1.0);
    let a = generate_modulated(128, 4, 1.0, &c, |_| 1.0, &mut rng(8));
    let b = generate_colored_stationary(128, 4, &c, &mut rng(8));
    assert_eq!(a.samples, b.samples);
}

#[test]
fn n4_is_positive_and_skewed() {
    let (m, k, t) = (256, 2000, 1.0);
    let c = NoiseConstants::for_duration(t);
    let n = generate_nongaussian(m, k, t, &c, &mut rng(9));
    assert!(n.samples.iter().flatten().all(|&v| v >= 0.0));
    let mid = column(&n.samples, m / 2);
    assert!(skewness(&mid) > 1.0, "skewness {}", skewness(&mid));
    let e2 = standard_envelope(time_grid(t, m)[m / 2], t).powi(2);
    assert!((mean(&mid) / e2 - 1.0).abs() < 0.15);
}

#[test]
fn n6_squares_its_base_exactly() {
    let c = NoiseConstants::for_duration(1.0);
    let profiles = [NoiseProfile::N1, NoiseProfile::N6 { base_axis: 0 }];
    let out = make_noise(&profiles, 128, 20, 1.0, &c, &mut rng(10)).unwrap();
    assert_eq!(out[1].kind, NoiseKind::N6);
    assert_eq!(out[1].base_axis, Some(0));
    for (b, s) in out[0].samples.iter().flatten().zip(out[1].samples.iter().flatten()) {
        assert_eq!((b * b).to_bits(), s.to_bits());
    }
}

#[test]
fn n6_needs_an_earlier_real_base() {
    let c = NoiseConstants::for_duration(1.0);
    let bad = [
        vec![NoiseProfile::N6 { base_axis: 0 }],
        vec![NoiseProfile::N6 { base_axis: 1 }, NoiseProfile::N1],
        vec![NoiseProfile::N0, NoiseProfile::N6 { base_axis: 0 }],
    ];
    for profiles in bad {
        assert!(make_noise(&profiles, 64, 2, 1.0, &c, &mut rng(0)).is_err());
    }
}

#[test]
fn make_noise_normalizes_psd_profiles() {
    let c = NoiseConstants::for_duration(1.0);
    let out = make_noise(&[NoiseProfile::N1], 256, 2000, 1.0, &c, &mut rng(12)).unwrap();
    let all: Vec<f64> = out[0].samples.iter().flatten().copied().collect();
    assert!((mean(&all.iter().map(|v| v * v).collect::<Vec<_>>()) - 1.0).abs() < 0.1);
}

#[test]
fn strength_scales_linearly() {
    let mut c = NoiseConstants::for_duration(1.0);
    let p = [NoiseProfile::N2];
    let a = make_noise(&p, 64, 3, 1.0, &c, &mut rng(13)).unwrap();
    c.strength = 2.5;
    let b = make_noise(&p, 64, 3, 1.0, &c, &mut rng(13)).unwrap();
    for (x, y) in a[0].samples.iter().flatten().zip(b[0].samples.iter().flatten()) {
        assert!((2.5 * x - y).abs() < 1e-12);
    }
}

#[test]
fn same_seed_same_noise() {
    let c = NoiseConstants::for_duration(1.0);
    let p = [NoiseProfile::N1, NoiseProfile::N5];
    let a = make_noise(&p, 128, 5, 1.0, &c, &mut rng(14)).unwrap();
    let b = make_noise(&p, 128, 5, 1.0, &c, &mut rng(14)).unwrap();
    let d = make_noise(&p, 128, 5, 1.0, &c, &mut rng(15)).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, d);
}
