//! Dataset configurations and their underscore-separated names.
//!
//! `<G|S>_<1q|2q>_<control>[_<noise axes>_<profiles>][_D]`
//!
//! One-qubit tokens concatenate letters (`XY`, `XZ`, `N1N5`); two-qubit
//! tokens join per-term labels with hyphens (`IX-XI-XX`, `IZ-ZI`, `N1-N6`).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolver::{Category, SystemSpec};
use crate::noisegen::{NoiseConstants, NoiseKind, NoiseProfile};
use crate::pulsegen::{FilterSettings, PulseConfig, WaveformKind};
use crate::qcore::PauliLabel;

/// Numeric parameters of a generation run. `None` fields fall back to
/// values derived from the others (σ = T/(12M), category gaps, noise
/// constants scaled to T).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimulationParameters {
    pub total_time: f64,
    pub n_steps: usize,
    pub n_realizations: usize,
    pub omega: Option<Vec<f64>>,
    pub n_pulses: usize,
    pub amp_min: f64,
    pub amp_max: f64,
    pub sigma: Option<f64>,
    pub num_ex: usize,
    pub batch_size: usize,
    pub noise_constants: Option<NoiseConstants>,
    pub filter: FilterSettings,
    /// Store `Ũ_I` at every step instead of only the final time.
    pub store_full_ui: bool,
}

impl Default for SimulationParameters {
    fn default() -> Self {
        Self {
            total_time: 1.0,
            n_steps: 1024,
            n_realizations: 2000,
            omega: None,
            n_pulses: 5,
            amp_min: -100.0,
            amp_max: 100.0,
            sigma: None,
            num_ex: 10_000,
            batch_size: 50,
            noise_constants: None,
            filter: FilterSettings::default(),
            store_full_ui: false,
        }
    }
}

impl SimulationParameters {
    /// `M = 256, K = 100, 10 examples`.
    pub fn desk() -> Self {
        Self { n_steps: 256, n_realizations: 100, num_ex: 10, ..Self::default() }
    }

    pub fn dt(&self) -> f64 {
        self.total_time / self.n_steps as f64
    }

    pub fn noise_constants(&self) -> NoiseConstants {
        self.noise_constants.unwrap_or_else(|| NoiseConstants::for_duration(self.total_time))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetConfig {
    pub waveform: WaveformKind,
    pub category: Category,
    /// Per noise axis, in the category's axis order; `None` is noiseless.
    pub noise_profiles: Option<Vec<NoiseProfile>>,
    pub distortion: bool,
    pub params: SimulationParameters,
}

impl DatasetConfig {
    pub fn new(
        waveform: WaveformKind,
        category: Category,
        noise_profiles: Option<Vec<NoiseProfile>>,
        distortion: bool,
    ) -> Result<Self> {
        let cfg = Self { waveform, category, noise_profiles, distortion, params: Default::default() };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(profiles) = &self.noise_profiles {
            let axes = self.category.noise_labels().len();
            if profiles.len() != axes {
                return Err(Error::InvalidConfig(format!(
                    "{} noise profile(s) for {axes} noise axis/axes",
                    profiles.len()
                )));
            }
        }
        if self.params.n_steps == 0 || self.params.n_realizations == 0 {
            return Err(Error::InvalidConfig("M and K must be positive".into()));
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.category.n_qubits()
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits()
    }

    pub fn is_noiseless(&self) -> bool {
        self.noise_profiles
            .as_ref()
            .is_none_or(|p| p.iter().all(|p| *p == NoiseProfile::N0))
    }

    /// Profiles actually simulated; noiseless configs keep the category's
    /// noise axes with zero realizations.
    pub fn effective_profiles(&self) -> Vec<NoiseProfile> {
        self.noise_profiles
            .clone()
            .unwrap_or_else(|| vec![NoiseProfile::N0; self.category.noise_labels().len()])
    }

    pub fn system_spec(&self) -> Result<SystemSpec> {
        match &self.params.omega {
            Some(omega) => SystemSpec::with_omega(self.category, omega.clone()),
            None => Ok(SystemSpec::standard(self.category)),
        }
    }

    pub fn pulse_config(&self) -> PulseConfig {
        let p = &self.params;
        let mut cfg = PulseConfig::standard(self.waveform, p.total_time, p.n_steps);
        cfg.n_pulses = p.n_pulses;
        cfg.amp_min = p.amp_min;
        cfg.amp_max = p.amp_max;
        if let Some(sigma) = p.sigma {
            cfg.sigma = sigma;
        }
        cfg
    }

    /// Same waveform, category, noise and distortion (parameters ignored).
    pub fn same_layout(&self, other: &Self) -> bool {
        self.waveform == other.waveform
            && self.category == other.category
            && self.noise_profiles == other.noise_profiles
            && self.distortion == other.distortion
    }

    pub fn name(&self) -> String {
        dataset_name(self)
    }
}

fn labels_token(labels: &[PauliLabel], n_qubits: usize) -> String {
    let tokens: Vec<String> = labels.iter().map(|l| l.token()).collect();
    tokens.join(if n_qubits == 1 { "" } else { "-" })
}

fn profiles_token(profiles: &[NoiseProfile], n_qubits: usize) -> String {
    let tokens: Vec<String> = profiles.iter().map(|p| p.kind().to_string()).collect();
    tokens.join(if n_qubits == 1 { "" } else { "-" })
}

pub fn dataset_name(cfg: &DatasetConfig) -> String {
    let n = cfg.n_qubits();
    let mut parts = vec![
        cfg.waveform.letter().to_string(),
        format!("{n}q"),
        labels_token(&cfg.category.control_labels(), n),
    ];
    if let Some(profiles) = &cfg.noise_profiles {
        parts.push(labels_token(&cfg.category.noise_labels(), n));
        parts.push(profiles_token(profiles, n));
    }
    if cfg.distortion {
        parts.push("D".into());
    }
    parts.join("_")
}

fn malformed(position: usize, message: impl Into<String>) -> Error {
    Error::MalformedName { position, message: message.into() }
}

/// Inverse of [`dataset_name`]; parameters are left at their defaults.
pub fn parse_name(name: &str) -> Result<DatasetConfig> {
    let mut parts: Vec<(usize, &str)> = Vec::new();
    let mut offset = 0;
    for part in name.split('_') {
        parts.push((offset, part));
        offset += part.len() + 1;
    }
    if let Some(&(pos, p)) = parts.iter().find(|(_, p)| p.is_empty()) {
        return Err(malformed(pos, format!("empty name part {p:?}")));
    }

    let distortion = parts.last().is_some_and(|(_, p)| *p == "D");
    if distortion {
        parts.pop();
    }
    match parts.len() {
        3 | 5 => {}
        4 => return Err(malformed(name.len(), "noise axes given without noise profiles")),
        n if n < 3 => return Err(malformed(name.len(), "expected at least 3 parts")),
        _ => return Err(malformed(parts[5].0, "too many parts")),
    }

    let (pos, w) = parts[0];
    let waveform = match w {
        "G" => WaveformKind::Gaussian,
        "S" => WaveformKind::Square,
        _ => return Err(malformed(pos, format!("waveform must be G or S, got {w:?}"))),
    };

    let (pos, q) = parts[1];
    let n_qubits = match q {
        "1q" => 1,
        "2q" => 2,
        _ => return Err(malformed(pos, format!("qubit part must be 1q or 2q, got {q:?}"))),
    };

    let (pos, ctrl) = parts[2];
    let category = Category::ALL
        .into_iter()
        .find(|c| c.n_qubits() == n_qubits && labels_token(&c.control_labels(), n_qubits) == ctrl)
        .ok_or_else(|| malformed(pos, format!("unknown {n_qubits}-qubit control layout {ctrl:?}")))?;

    let noise_profiles = if parts.len() == 5 {
        let (pos, axes) = parts[3];
        let expected = labels_token(&category.noise_labels(), n_qubits);
        if axes != expected {
            return Err(malformed(
                pos,
                format!("category {} uses noise axes {expected:?}, got {axes:?}", category.number()),
            ));
        }
        let (pos, token) = parts[4];
        Some(parse_profiles(token, pos, n_qubits, category.noise_labels().len())?)
    } else {
        None
    };

    let cfg = DatasetConfig { waveform, category, noise_profiles, distortion, params: Default::default() };
    cfg.validate()?;
    Ok(cfg)
}

fn parse_profiles(token: &str, pos: usize, n_qubits: usize, n_axes: usize) -> Result<Vec<NoiseProfile>> {
    let pieces: Vec<(usize, &str)> = if n_qubits == 1 {
        let starts: Vec<usize> = token.match_indices('N').map(|(i, _)| i).collect();
        if starts.first() != Some(&0) {
            return Err(malformed(pos, format!("profile token {token:?} must start with N")));
        }
        starts
            .iter()
            .enumerate()
            .map(|(i, &s)| (s, &token[s..starts.get(i + 1).copied().unwrap_or(token.len())]))
            .collect()
    } else {
        let mut off = 0;
        token
            .split('-')
            .map(|p| {
                let item = (off, p);
                off += p.len() + 1;
                item
            })
            .collect()
    };
    if pieces.len() != n_axes {
        return Err(malformed(pos, format!("{} profile(s) for {n_axes} noise axes", pieces.len())));
    }
    let mut out = Vec::with_capacity(n_axes);
    for &(off, piece) in &pieces {
        let kind: NoiseKind = piece
            .parse()
            .map_err(|_| malformed(pos + off, format!("unknown noise profile {piece:?}")))?;
        let profile = match kind {
            NoiseKind::N0 => NoiseProfile::N0,
            NoiseKind::N1 => NoiseProfile::N1,
            NoiseKind::N2 => NoiseProfile::N2,
            NoiseKind::N3 => NoiseProfile::N3,
            NoiseKind::N4 => NoiseProfile::N4,
            NoiseKind::N5 => NoiseProfile::N5,
            NoiseKind::N6 => {
                let base_axis = out
                    .iter()
                    .rposition(|p: &NoiseProfile| !matches!(p, NoiseProfile::N0 | NoiseProfile::N6 { .. }))
                    .ok_or_else(|| malformed(pos + off, "N6 has no earlier profile to square"))?;
                NoiseProfile::N6 { base_axis }
            }
        };
        out.push(profile);
    }
    Ok(out)
}

/// The 52 standard configurations: 13 noise layouts × {G, S} × {plain, distorted}.
pub fn enumerate_standard() -> Vec<DatasetConfig> {
    use NoiseProfile::*;
    let n6 = N6 { base_axis: 0 };
    let layouts: Vec<(Category, Option<Vec<NoiseProfile>>)> = vec![
        (Category::SingleAxis, None),
        (Category::SingleAxis, Some(vec![N1])),
        (Category::SingleAxis, Some(vec![N2])),
        (Category::SingleAxis, Some(vec![N3])),
        (Category::SingleAxis, Some(vec![N4])),
        (Category::MultiAxis, None),
        (Category::MultiAxis, Some(vec![N1, N5])),
        (Category::MultiAxis, Some(vec![N1, n6])),
        (Category::MultiAxis, Some(vec![N3, n6])),
        (Category::LocalPair, Some(vec![N1, n6])),
        (Category::InteractingPair, None),
        (Category::InteractingPair, Some(vec![N1, N5])),
        (Category::InteractingPair, Some(vec![N1, n6])),
    ];
    let mut out = Vec::with_capacity(52);
    for waveform in [WaveformKind::Gaussian, WaveformKind::Square] {
        for (category, profiles) in &layouts {
            for distortion in [false, true] {
                out.push(DatasetConfig {
                    waveform,
                    category: *category,
                    noise_profiles: profiles.clone(),
                    distortion,
                    params: Default::default(),
                });
            }
        }
    }
    out
}
