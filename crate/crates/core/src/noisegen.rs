//! Time-domain noise realizations for the profiles N0–N6.
//!
//! * N1/N5: spectral synthesis from a `1/f` spectrum with a Gaussian bump;
//!   the two differ only in where the bump sits.
//! * N2: white Gaussian noise circularly convolved with a Gaussian kernel.
//! * N3: N2 multiplied by the deterministic envelope `1 + sin(2πt/T)`.
//! * N4: pointwise square of N3.
//! * N6: pointwise square of another axis' realizations, paired `k ↔ k`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pulsegen::time_grid;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NoiseKind {
    N0,
    N1,
    N2,
    N3,
    N4,
    N5,
    N6,
}

impl NoiseKind {
    pub fn index(self) -> u8 {
        self as u8
    }
}

impl fmt::Display for NoiseKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "N{}", self.index())
    }
}

impl FromStr for NoiseKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "N0" => NoiseKind::N0,
            "N1" => NoiseKind::N1,
            "N2" => NoiseKind::N2,
            "N3" => NoiseKind::N3,
            "N4" => NoiseKind::N4,
            "N5" => NoiseKind::N5,
            "N6" => NoiseKind::N6,
            other => {
                return Err(Error::InvalidConfig(format!("unknown noise profile {other:?}")))
            }
        })
    }
}

/// Profile assigned to one noise axis. `N6` names the axis it squares.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NoiseProfile {
    N0,
    N1,
    N2,
    N3,
    N4,
    N5,
    N6 { base_axis: usize },
}

impl NoiseProfile {
    pub fn kind(self) -> NoiseKind {
        match self {
            NoiseProfile::N0 => NoiseKind::N0,
            NoiseProfile::N1 => NoiseKind::N1,
            NoiseProfile::N2 => NoiseKind::N2,
            NoiseProfile::N3 => NoiseKind::N3,
            NoiseProfile::N4 => NoiseKind::N4,
            NoiseProfile::N5 => NoiseKind::N5,
            NoiseProfile::N6 { .. } => NoiseKind::N6,
        }
    }
}

/// Spectra with a bump; N5 is N1 with the bump moved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsdProfile {
    N1,
    N5,
}

/// Free constants of the noise models, in absolute units for a given `T`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NoiseConstants {
    pub psd_alpha: f64,
    pub psd_floor: f64,
    pub bump_amplitude: f64,
    pub bump_width: f64,
    pub bump_center_n1: f64,
    pub bump_center_n5: f64,
    /// Width of the N2 smoothing kernel, in samples.
    pub kernel_sigma_samples: f64,
    /// Overall multiplier applied to every unit-variance series.
    pub strength: f64,
}

impl NoiseConstants {
    pub fn for_duration(total_time: f64) -> Self {
        let alpha = 1.0;
        Self {
            psd_alpha: alpha,
            psd_floor: 1.0 / total_time,
            bump_amplitude: 20.0 * alpha * total_time,
            bump_width: 5.0 / total_time,
            bump_center_n1: 20.0 / total_time,
            bump_center_n5: 60.0 / total_time,
            kernel_sigma_samples: 8.0,
            strength: 1.0,
        }
    }

    fn bump_center(&self, profile: PsdProfile) -> f64 {
        match profile {
            PsdProfile::N1 => self.bump_center_n1,
            PsdProfile::N5 => self.bump_center_n5,
        }
    }
}

/// `K` series of `M` samples for one noise axis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseRealizations {
    pub kind: NoiseKind,
    /// Axis squared by an N6 series.
    pub base_axis: Option<usize>,
    pub samples: Vec<Vec<f64>>,
}

impl NoiseRealizations {
    pub fn zeros(n_steps: usize, n_realizations: usize) -> Self {
        Self {
            kind: NoiseKind::N0,
            base_axis: None,
            samples: vec![vec![0.0; n_steps]; n_realizations],
        }
    }

    pub fn n_realizations(&self) -> usize {
        self.samples.len()
    }

    pub fn n_steps(&self) -> usize {
        self.samples.first().map_or(0, Vec::len)
    }

    fn scaled(mut self, factor: f64) -> Self {
        if factor != 1.0 {
            self.samples.iter_mut().flatten().for_each(|v| *v *= factor);
        }
        self
    }
}

/// `S(f) = α/(f + f_floor) + A_b·exp(−(f − f_b)²/(2w_b²))`
pub fn target_psd(profile: PsdProfile, f: f64, c: &NoiseConstants) -> f64 {
    let d = f - c.bump_center(profile);
    c.psd_alpha / (f + c.psd_floor)
        + c.bump_amplitude * (-d * d / (2.0 * c.bump_width * c.bump_width)).exp()
}

/// Variance of a series synthesized by [`generate_psd_noise`]: `Σ S(f_m)·Δf`
/// over the populated bins (DC and Nyquist are left empty).
pub fn psd_variance(profile: PsdProfile, n_steps: usize, total_time: f64, c: &NoiseConstants) -> f64 {
    let df = 1.0 / total_time;
    (1..=(n_steps - 1) / 2)
        .map(|m| target_psd(profile, m as f64 * df, c) * df)
        .sum()
}

/// Spectral synthesis with random phases.
///
/// Bin `m` (frequency `m/T`) gets amplitude `sqrt(S·Δf/2)` and a uniform phase;
/// the conjugate bin mirrors it so the inverse FFT is real. The one-sided
/// periodogram `2|X_m|²/(M²Δf)` of the output then has expectation `S(f_m)`.
pub fn generate_psd_noise<R: Rng + ?Sized>(
    profile: PsdProfile,
    n_steps: usize,
    n_realizations: usize,
    total_time: f64,
    c: &NoiseConstants,
    rng: &mut R,
) -> NoiseRealizations {
    let df = 1.0 / total_time;
    let half = (n_steps.max(1) - 1) / 2;
    let amplitudes: Vec<f64> = (1..=half)
        .map(|m| (target_psd(profile, m as f64 * df, c) * df / 2.0).sqrt())
        .collect();
    let ifft = FftPlanner::new().plan_fft_inverse(n_steps);
    let samples = (0..n_realizations)
        .map(|_| {
            let mut spectrum = vec![Complex64::new(0.0, 0.0); n_steps];
            for (i, &a) in amplitudes.iter().enumerate() {
                let m = i + 1;
                let phase: f64 = rng.random_range(0.0..2.0 * PI);
                let z = Complex64::from_polar(a, phase);
                spectrum[m] = z;
                spectrum[n_steps - m] = z.conj();
            }
            ifft.process(&mut spectrum);
            spectrum.into_iter().map(|z| z.re).collect()
        })
        .collect();
    let kind = match profile {
        PsdProfile::N1 => NoiseKind::N1,
        PsdProfile::N5 => NoiseKind::N5,
    };
    NoiseRealizations { kind, base_axis: None, samples }
}

/// Circular Gaussian kernel with `Σ g² = 1`, so unit white noise stays unit variance.
fn smoothing_kernel(n_steps: usize, sigma_samples: f64) -> Vec<f64> {
    let mut g: Vec<f64> = (0..n_steps)
        .map(|l| {
            let d = l.min(n_steps - l) as f64;
            (-d * d / (2.0 * sigma_samples * sigma_samples)).exp()
        })
        .collect();
    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    g.iter_mut().for_each(|v| *v /= norm);
    g
}

pub fn generate_colored_stationary<R: Rng + ?Sized>(
    n_steps: usize,
    n_realizations: usize,
    c: &NoiseConstants,
    rng: &mut R,
) -> NoiseRealizations {
    let kernel = smoothing_kernel(n_steps, c.kernel_sigma_samples);
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(n_steps);
    let ifft = planner.plan_fft_inverse(n_steps);
    let mut kernel_hat: Vec<Complex64> = kernel.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft.process(&mut kernel_hat);
    let norm = 1.0 / n_steps as f64;

    let samples = (0..n_realizations)
        .map(|_| {
            let mut buf: Vec<Complex64> = (0..n_steps)
                .map(|_| Complex64::new(rng.sample(StandardNormal), 0.0))
                .collect();
            fft.process(&mut buf);
            buf.iter_mut().zip(&kernel_hat).for_each(|(x, k)| *x *= k * norm);
            ifft.process(&mut buf);
            buf.into_iter().map(|z| z.re).collect()
        })
        .collect();
    NoiseRealizations { kind: NoiseKind::N2, base_axis: None, samples }
}

/// `e(t) = 1 + sin(2πt/T)`
pub fn standard_envelope(t: f64, total_time: f64) -> f64 {
    1.0 + (2.0 * PI * t / total_time).sin()
}

/// Stationary colored noise multiplied by `envelope(t_j)` on the midpoint grid.
pub fn generate_modulated<R: Rng + ?Sized>(
    n_steps: usize,
    n_realizations: usize,
    total_time: f64,
    c: &NoiseConstants,
    envelope: impl Fn(f64) -> f64,
    rng: &mut R,
) -> NoiseRealizations {
    let env: Vec<f64> = time_grid(total_time, n_steps).into_iter().map(envelope).collect();
    let mut out = generate_colored_stationary(n_steps, n_realizations, c, rng);
    for series in &mut out.samples {
        series.iter_mut().zip(&env).for_each(|(v, e)| *v *= e);
    }
    out.kind = NoiseKind::N3;
    out
}

pub fn generate_colored_nonstationary<R: Rng + ?Sized>(
    n_steps: usize,
    n_realizations: usize,
    total_time: f64,
    c: &NoiseConstants,
    rng: &mut R,
) -> NoiseRealizations {
    generate_modulated(
        n_steps,
        n_realizations,
        total_time,
        c,
        |t| standard_envelope(t, total_time),
        rng,
    )
}

pub fn generate_nongaussian<R: Rng + ?Sized>(
    n_steps: usize,
    n_realizations: usize,
    total_time: f64,
    c: &NoiseConstants,
    rng: &mut R,
) -> NoiseRealizations {
    let mut out = generate_colored_nonstationary(n_steps, n_realizations, total_time, c, rng);
    out.samples.iter_mut().flatten().for_each(|v| *v *= *v);
    out.kind = NoiseKind::N4;
    out
}

/// Exact pointwise square of a realized base series; the result is tagged N6.
pub fn square_correlated(base: &NoiseRealizations, base_axis: usize) -> Result<NoiseRealizations> {
    if matches!(base.kind, NoiseKind::N0 | NoiseKind::N6) {
        return Err(Error::InvalidConfig(format!(
            "N6 needs a base profile in N1..N5, got {}",
            base.kind
        )));
    }
    Ok(NoiseRealizations {
        kind: NoiseKind::N6,
        base_axis: Some(base_axis),
        samples: base
            .samples
            .iter()
            .map(|s| s.iter().map(|v| v * v).collect())
            .collect(),
    })
}

/// Realizations for every noise axis, in axis order.
///
/// N1/N5 are rescaled to unit variance (using the synthesized spectrum's
/// exact variance) before the common strength multiplier; N6 axes square
/// the already-scaled base axis.
pub fn make_noise<R: Rng + ?Sized>(
    profiles: &[NoiseProfile],
    n_steps: usize,
    n_realizations: usize,
    total_time: f64,
    c: &NoiseConstants,
    rng: &mut R,
) -> Result<Vec<NoiseRealizations>> {
    for (axis, p) in profiles.iter().enumerate() {
        if let NoiseProfile::N6 { base_axis } = *p {
            let valid = base_axis < axis
                && !matches!(profiles[base_axis], NoiseProfile::N0 | NoiseProfile::N6 { .. });
            if !valid {
                return Err(Error::DanglingNoiseReference { axis, base: base_axis });
            }
        }
    }

    let mut out: Vec<NoiseRealizations> = Vec::with_capacity(profiles.len());
    for p in profiles {
        let g = c.strength;
        let realized = match *p {
            NoiseProfile::N0 => NoiseRealizations::zeros(n_steps, n_realizations),
            NoiseProfile::N1 | NoiseProfile::N5 => {
                let psd = if *p == NoiseProfile::N1 { PsdProfile::N1 } else { PsdProfile::N5 };
                let sd = psd_variance(psd, n_steps, total_time, c).sqrt();
                generate_psd_noise(psd, n_steps, n_realizations, total_time, c, rng).scaled(g / sd)
            }
            NoiseProfile::N2 => generate_colored_stationary(n_steps, n_realizations, c, rng).scaled(g),
            NoiseProfile::N3 => {
                generate_colored_nonstationary(n_steps, n_realizations, total_time, c, rng).scaled(g)
            }
            NoiseProfile::N4 => {
                generate_nongaussian(n_steps, n_realizations, total_time, c, rng).scaled(g)
            }
            NoiseProfile::N6 { base_axis } => square_correlated(&out[base_axis], base_axis)?,
        };
        out.push(realized);
    }
    Ok(out)
}
