//! Chebyshev type-I low-pass distortion, discretized by the bilinear
//! transform and run as a cascade of second-order sections.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Design knobs for the distortion filter; one record shared by every dataset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FilterSettings {
    pub order: usize,
    pub ripple_db: f64,
    /// Cutoff as a fraction of the Nyquist frequency.
    pub cutoff_frac: f64,
}

impl Default for FilterSettings {
    fn default() -> Self {
        Self { order: 4, ripple_db: 0.1, cutoff_frac: 0.05 }
    }
}

/// `H(z) = (b0 + b1 z⁻¹ + b2 z⁻²) / (1 + a1 z⁻¹ + a2 z⁻²)`
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sos {
    pub b: [f64; 3],
    pub a: [f64; 2],
}

impl Sos {
    fn dc_gain(&self) -> f64 {
        self.b.iter().sum::<f64>() / (1.0 + self.a[0] + self.a[1])
    }

    fn poles(&self) -> Vec<Complex64> {
        let (a1, a2) = (self.a[0], self.a[1]);
        if a2 == 0.0 {
            return vec![Complex64::new(-a1, 0.0)];
        }
        let disc = Complex64::new(a1 * a1 - 4.0 * a2, 0.0).sqrt();
        vec![(-a1 + disc) / 2.0, (-a1 - disc) / 2.0]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistortionFilter {
    pub sections: Vec<Sos>,
    pub settings: FilterSettings,
    pub dt: f64,
}

impl DistortionFilter {
    pub fn poles(&self) -> Vec<Complex64> {
        self.sections.iter().flat_map(Sos::poles).collect()
    }

    pub fn max_pole_radius(&self) -> f64 {
        self.poles().iter().map(|p| p.norm()).fold(0.0, f64::max)
    }

    pub fn is_stable(&self) -> bool {
        self.max_pole_radius() < 1.0
    }

    pub fn dc_gain(&self) -> f64 {
        self.sections.iter().map(Sos::dc_gain).product()
    }
}

pub fn design_chebyshev(
    order: usize,
    ripple_db: f64,
    cutoff_frac: f64,
    dt: f64,
) -> Result<DistortionFilter> {
    if order == 0 {
        return Err(Error::InvalidConfig("filter order must be at least 1".into()));
    }
    if !(cutoff_frac > 0.0 && cutoff_frac < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "cutoff fraction {cutoff_frac} must lie in (0, 1)"
        )));
    }
    if !(ripple_db > 0.0) || !(dt > 0.0) {
        return Err(Error::InvalidConfig("ripple and time step must be positive".into()));
    }

    let eps = (10f64.powf(ripple_db / 10.0) - 1.0).sqrt();
    let mu = (1.0 / eps).asinh() / order as f64;
    let fs = 1.0 / dt;
    // prewarped analog cutoff in rad/s
    let omega_c = 2.0 * fs * (PI * cutoff_frac / 2.0).tan();
    let to_digital = |s: Complex64| (2.0 * fs + s) / (2.0 * fs - s);

    let analog_pole = |k: usize| {
        let theta = PI * (2 * k - 1) as f64 / (2 * order) as f64;
        Complex64::new(-mu.sinh() * theta.sin(), mu.cosh() * theta.cos()) * omega_c
    };

    let mut sections = Vec::with_capacity(order.div_ceil(2));
    for k in 1..=order / 2 {
        let z = to_digital(analog_pole(k));
        let a = [-2.0 * z.re, z.norm_sqr()];
        let g = (1.0 + a[0] + a[1]) / 4.0;
        sections.push(Sos { b: [g, 2.0 * g, g], a });
    }
    if order % 2 == 1 {
        let z = to_digital(analog_pole(order.div_ceil(2)));
        let a = [-z.re, 0.0];
        let g = (1.0 + a[0]) / 2.0;
        sections.push(Sos { b: [g, g, 0.0], a });
    }

    // every section has unit DC gain; even orders sit at the bottom of the ripple at DC
    let dc = if order.is_multiple_of(2) { 10f64.powf(-ripple_db / 20.0) } else { 1.0 };
    for b in &mut sections[0].b {
        *b *= dc;
    }

    let filter = DistortionFilter {
        sections,
        settings: FilterSettings { order, ripple_db, cutoff_frac },
        dt,
    };
    let radius = filter.max_pole_radius();
    debug_assert!(radius < 1.0, "bilinear Chebyshev design produced pole radius {radius}");
    if !(radius < 1.0) {
        return Err(Error::UnstableFilter { radius });
    }
    Ok(filter)
}

/// Causal cascade filtering with zero initial conditions (transposed direct form II).
pub fn apply_distortion(filter: &DistortionFilter, w: &[f64]) -> Vec<f64> {
    let mut signal = w.to_vec();
    for s in &filter.sections {
        let (mut z1, mut z2) = (0.0, 0.0);
        for x in signal.iter_mut() {
            let input = *x;
            let y = s.b[0] * input + z1;
            z1 = s.b[1] * input - s.a[0] * y + z2;
            z2 = s.b[2] * input - s.a[1] * y;
            *x = y;
        }
    }
    signal
}
