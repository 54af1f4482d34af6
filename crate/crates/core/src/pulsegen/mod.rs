//! Random control pulse trains on the simulation time grid.

mod filter;

pub use filter::{apply_distortion, design_chebyshev, DistortionFilter, FilterSettings, Sos};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum WaveformKind {
    Square,
    Gaussian,
}

impl WaveformKind {
    pub fn letter(self) -> char {
        match self {
            WaveformKind::Gaussian => 'G',
            WaveformKind::Square => 'S',
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseConfig {
    pub waveform_kind: WaveformKind,
    pub n_pulses: usize,
    pub amp_min: f64,
    pub amp_max: f64,
    /// Gaussian standard deviation in seconds; square pulses are `6·sigma` wide.
    pub sigma: f64,
    pub total_time: f64,
    pub n_steps: usize,
}

impl PulseConfig {
    /// Defaults: `n = 5`, amplitudes in `[-100, 100]`, `σ = T/(12M)`.
    pub fn standard(waveform_kind: WaveformKind, total_time: f64, n_steps: usize) -> Self {
        Self {
            waveform_kind,
            n_pulses: 5,
            amp_min: -100.0,
            amp_max: 100.0,
            sigma: total_time / (12.0 * n_steps as f64),
            total_time,
            n_steps,
        }
    }

    pub fn dt(&self) -> f64 {
        self.total_time / self.n_steps as f64
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.amp_min < self.amp_max) {
            return Err(Error::InvalidConfig(format!(
                "amplitude range [{}, {}] is empty",
                self.amp_min, self.amp_max
            )));
        }
        if !(self.total_time > 0.0) || self.n_steps == 0 {
            return Err(Error::InvalidConfig("time grid must be non-empty".into()));
        }
        if !(self.sigma > 0.0) {
            return Err(Error::InvalidConfig(format!("pulse width {} must be positive", self.sigma)));
        }
        if self.n_pulses as f64 * 6.0 * self.sigma > self.total_time * (1.0 + 1e-12) {
            return Err(Error::InvalidConfig(format!(
                "{} pulses of width 6σ = {} do not fit in T = {}",
                self.n_pulses,
                6.0 * self.sigma,
                self.total_time
            )));
        }
        Ok(())
    }

    /// Midpoint sample times `t_j = (j + ½)·T/M`.
    pub fn time_grid(&self) -> Vec<f64> {
        time_grid(self.total_time, self.n_steps)
    }

    /// Square pulse width in samples (at least one).
    pub fn square_width_samples(&self) -> usize {
        ((6.0 * self.sigma / self.dt()).round() as usize).max(1)
    }
}

pub fn time_grid(total_time: f64, n_steps: usize) -> Vec<f64> {
    let dt = total_time / n_steps as f64;
    (0..n_steps).map(|j| (j as f64 + 0.5) * dt).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Pulse {
    Gaussian { amplitude: f64, center: f64, width: f64 },
    /// `position` is the first grid sample of the support; `duration` in seconds.
    Square { amplitude: f64, position: usize, duration: f64 },
}

impl Pulse {
    pub fn amplitude(&self) -> f64 {
        match *self {
            Pulse::Gaussian { amplitude, .. } | Pulse::Square { amplitude, .. } => amplitude,
        }
    }

    /// Stored parameter vector: gaussian `(A, μ, σ)`, square `(A, k, Δt)`.
    pub fn to_vector(&self) -> [f64; 3] {
        match *self {
            Pulse::Gaussian { amplitude, center, width } => [amplitude, center, width],
            Pulse::Square { amplitude, position, duration } => {
                [amplitude, position as f64, duration]
            }
        }
    }
}

/// Pulse trains, one per control channel.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PulseParams {
    pub channels: Vec<Vec<Pulse>>,
}

impl PulseParams {
    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }
}

/// One channel's samples at the grid midpoints.
pub type Waveform = Vec<f64>;

pub fn draw_pulse_params<R: Rng + ?Sized>(
    rng: &mut R,
    cfg: &PulseConfig,
    channels: usize,
) -> Result<PulseParams> {
    cfg.validate()?;
    let n = cfg.n_pulses;
    let bin = cfg.total_time / n.max(1) as f64;
    let margin = 3.0 * cfg.sigma;
    let dt = cfg.dt();
    let width = cfg.square_width_samples();
    let out = (0..channels)
        .map(|_| {
            (0..n)
                .map(|k| {
                    let amplitude = rng.random_range(cfg.amp_min..=cfg.amp_max);
                    let lo = k as f64 * bin + margin;
                    let hi = (k + 1) as f64 * bin - margin;
                    match cfg.waveform_kind {
                        WaveformKind::Gaussian => {
                            let center = if hi > lo { rng.random_range(lo..=hi) } else { 0.5 * (lo + hi) };
                            Pulse::Gaussian { amplitude, center, width: cfg.sigma }
                        }
                        WaveformKind::Square => {
                            let mid = (k as f64 + 0.5) * bin;
                            let start = (mid / dt - width as f64 / 2.0).round().max(0.0) as usize;
                            let position = start.min(cfg.n_steps.saturating_sub(width));
                            Pulse::Square { amplitude, position, duration: width as f64 * dt }
                        }
                    }
                })
                .collect()
        })
        .collect();
    Ok(PulseParams { channels: out })
}

pub fn render_waveform(params: &PulseParams, cfg: &PulseConfig) -> Vec<Waveform> {
    let times = cfg.time_grid();
    params.channels.iter().map(|pulses| render_channel(pulses, &times, cfg.dt())).collect()
}

fn render_channel(pulses: &[Pulse], times: &[f64], dt: f64) -> Waveform {
    let mut samples = vec![0.0; times.len()];
    for pulse in pulses {
        match *pulse {
            Pulse::Gaussian { amplitude, center, width } => {
                let inv = 1.0 / (2.0 * width * width);
                for (s, &t) in samples.iter_mut().zip(times) {
                    let d = t - center;
                    *s += amplitude * (-d * d * inv).exp();
                }
            }
            Pulse::Square { amplitude, position, duration } => {
                let len = (duration / dt).round() as usize;
                let end = (position + len).min(samples.len());
                for s in &mut samples[position.min(end)..end] {
                    *s = amplitude;
                }
            }
        }
    }
    samples
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn full_scale_cfg(kind: WaveformKind) -> PulseConfig {
        PulseConfig::standard(kind, 1.0, 1024)
    }

    #[test]
    fn gaussian_draw_respects_bins_and_range() {
        let cfg = full_scale_cfg(WaveformKind::Gaussian);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let params = draw_pulse_params(&mut rng, &cfg, 2).unwrap();
        assert_eq!(params.n_channels(), 2);
        for pulses in &params.channels {
            assert_eq!(pulses.len(), 5);
            let mut last: Option<f64> = None;
            for p in pulses {
                let Pulse::Gaussian { amplitude, center, width } = *p else { panic!() };
                assert!((-100.0..=100.0).contains(&amplitude));
                assert_eq!(width, cfg.sigma);
                if let Some(prev) = last {
                    assert!(center - prev >= 6.0 * cfg.sigma);
                }
                last = Some(center);
            }
        }
    }

    #[test]
    fn single_pulse_stays_inside_margins() {
        let mut cfg = full_scale_cfg(WaveformKind::Gaussian);
        cfg.n_pulses = 1;
        cfg.sigma = 0.05;
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..50 {
            let params = draw_pulse_params(&mut rng, &cfg, 1).unwrap();
            let Pulse::Gaussian { center, .. } = params.channels[0][0] else { panic!() };
            assert!((0.15..=0.85).contains(&center));
        }
    }

    #[test]
    fn fixed_seed_is_deterministic() {
        let cfg = full_scale_cfg(WaveformKind::Square);
        let a = draw_pulse_params(&mut ChaCha8Rng::seed_from_u64(42), &cfg, 3).unwrap();
        let b = draw_pulse_params(&mut ChaCha8Rng::seed_from_u64(42), &cfg, 3).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn overfull_config_is_rejected() {
        let mut cfg = full_scale_cfg(WaveformKind::Gaussian);
        cfg.sigma = 0.05;
        cfg.n_pulses = 4;
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(draw_pulse_params(&mut rng, &cfg, 1), Err(Error::InvalidConfig(_))));
        cfg.n_pulses = 3;
        cfg.amp_min = 5.0;
        cfg.amp_max = 5.0;
        assert!(draw_pulse_params(&mut rng, &cfg, 1).is_err());
    }

    #[test]
    fn empty_params_render_zero() {
        let cfg = full_scale_cfg(WaveformKind::Gaussian);
        let w = render_waveform(&PulseParams { channels: vec![vec![]] }, &cfg);
        assert_eq!(w.len(), 1);
        assert!(w[0].iter().all(|&s| s == 0.0));
        assert_eq!(w[0].len(), 1024);
    }

    #[test]
    fn single_gaussian_peaks_at_its_center() {
        // odd M puts T/2 exactly on a midpoint sample
        let mut cfg = PulseConfig::standard(WaveformKind::Gaussian, 1.0, 1023);
        cfg.sigma = 0.01;
        let params = PulseParams {
            channels: vec![vec![Pulse::Gaussian { amplitude: 1.0, center: 0.5, width: cfg.sigma }]],
        };
        let w = &render_waveform(&params, &cfg)[0];
        let times = cfg.time_grid();
        let nearest = (0..times.len())
            .min_by(|&a, &b| (times[a] - 0.5).abs().total_cmp(&(times[b] - 0.5).abs()))
            .unwrap();
        assert!((w[nearest] - 1.0).abs() < 1e-6);
        assert!(w.iter().all(|&s| s <= 1.0 + 1e-9));
    }

    #[test]
    fn square_pulse_support() {
        let mut cfg = full_scale_cfg(WaveformKind::Square);
        cfg.n_pulses = 1;
        cfg.sigma = 0.01;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut params = draw_pulse_params(&mut rng, &cfg, 1).unwrap();
        if let Pulse::Square { amplitude, .. } = &mut params.channels[0][0] {
            *amplitude = 7.0;
        }
        let w = &render_waveform(&params, &cfg)[0];
        assert!(w.iter().all(|&s| s == 0.0 || s == 7.0));
        let support = w.iter().filter(|&&s| s != 0.0).count() as i64;
        let expected = (6.0 * cfg.sigma / cfg.dt()).round() as i64;
        assert!((support - expected).abs() <= 1, "support {support} vs {expected}");
    }

    #[test]
    fn full_scale_square_pulse_occupies_one_sample() {
        let cfg = full_scale_cfg(WaveformKind::Square);
        assert_eq!(cfg.square_width_samples(), 1);
    }
}
