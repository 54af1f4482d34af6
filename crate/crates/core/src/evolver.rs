//! Hamiltonian assembly and piecewise-constant time-ordered evolution.
//!
//! The full propagator is factored as `U = Ũ_I·U₀`, so the interaction
//! unitary is `Ũ_I = U·U₀†` and the noise operator for an observable is
//! `W_O = O⁻¹·Ũ_I†·O·Ũ_I`. Its realization mean is `V_O`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::noisegen::NoiseRealizations;
use crate::pulsegen::Waveform;
use crate::qcore::{pauli_matrix, unitary_step, Axis, ComplexMatrix, PauliLabel};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Category {
    /// One qubit, X control, Z noise.
    SingleAxis,
    /// One qubit, X and Y control, X and Z noise.
    MultiAxis,
    /// Two qubits, local X control, local Z noise.
    LocalPair,
    /// Two qubits, local X plus XX interaction control, local Z noise.
    InteractingPair,
}

impl Category {
    pub const ALL: [Category; 4] = [
        Category::SingleAxis,
        Category::MultiAxis,
        Category::LocalPair,
        Category::InteractingPair,
    ];

    pub fn number(self) -> u8 {
        match self {
            Category::SingleAxis => 1,
            Category::MultiAxis => 2,
            Category::LocalPair => 3,
            Category::InteractingPair => 4,
        }
    }

    pub fn from_number(n: u8) -> Result<Self> {
        Category::ALL
            .into_iter()
            .find(|c| c.number() == n)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown category {n}")))
    }

    pub fn n_qubits(self) -> usize {
        match self {
            Category::SingleAxis | Category::MultiAxis => 1,
            Category::LocalPair | Category::InteractingPair => 2,
        }
    }

    /// Control generators in channel order (the order of the name token).
    pub fn control_labels(self) -> Vec<PauliLabel> {
        use Axis::*;
        match self {
            Category::SingleAxis => vec![PauliLabel::Single(X)],
            Category::MultiAxis => vec![PauliLabel::Single(X), PauliLabel::Single(Y)],
            Category::LocalPair => vec![PauliLabel::Pair(I, X), PauliLabel::Pair(X, I)],
            Category::InteractingPair => vec![
                PauliLabel::Pair(I, X),
                PauliLabel::Pair(X, I),
                PauliLabel::Pair(X, X),
            ],
        }
    }

    pub fn noise_labels(self) -> Vec<PauliLabel> {
        use Axis::*;
        match self {
            Category::SingleAxis => vec![PauliLabel::Single(Z)],
            Category::MultiAxis => vec![PauliLabel::Single(X), PauliLabel::Single(Z)],
            Category::LocalPair | Category::InteractingPair => {
                vec![PauliLabel::Pair(I, Z), PauliLabel::Pair(Z, I)]
            }
        }
    }
}

/// A Hamiltonian term `coefficient · f(t) · G`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub label: PauliLabel,
    pub coefficient: f64,
}

impl Channel {
    fn for_label(label: PauliLabel) -> Self {
        // the XX interaction enters without the ½
        let coefficient = if label == PauliLabel::Pair(Axis::X, Axis::X) { 1.0 } else { 0.5 };
        Self { label, coefficient }
    }

    pub fn generator(&self) -> ComplexMatrix {
        pauli_matrix(self.label).scale_real(self.coefficient)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SystemSpec {
    pub category: Category,
    /// Energy gap(s): one entry for a single qubit, `(Ω₁, Ω₂)` for two.
    pub omega: Vec<f64>,
    pub control: Vec<Channel>,
    pub noise: Vec<Channel>,
}

impl SystemSpec {
    /// Ω = 12 for one qubit, (Ω₁, Ω₂) = (12, 10) for two.
    pub fn standard(category: Category) -> Self {
        let omega = if category.n_qubits() == 1 { vec![12.0] } else { vec![12.0, 10.0] };
        Self::with_omega(category, omega).expect("standard gaps have the right arity")
    }

    pub fn with_omega(category: Category, omega: Vec<f64>) -> Result<Self> {
        if omega.len() != category.n_qubits() {
            return Err(Error::InvalidConfig(format!(
                "category {} needs {} energy gap(s), got {}",
                category.number(),
                category.n_qubits(),
                omega.len()
            )));
        }
        Ok(Self {
            category,
            omega,
            control: category.control_labels().into_iter().map(Channel::for_label).collect(),
            noise: category.noise_labels().into_iter().map(Channel::for_label).collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.category.n_qubits()
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits()
    }

    /// `½Ω σ_z` or `½Ω₁ σ_z⊗σ₀ + ½Ω₂ σ₀⊗σ_z`.
    pub fn drift(&self) -> ComplexMatrix {
        match self.omega.as_slice() {
            [w] => pauli_matrix(PauliLabel::Single(Axis::Z)).scale_real(0.5 * w),
            [w1, w2] => {
                pauli_matrix(PauliLabel::Pair(Axis::Z, Axis::I)).scale_real(0.5 * w1)
                    + pauli_matrix(PauliLabel::Pair(Axis::I, Axis::Z)).scale_real(0.5 * w2)
            }
            _ => unreachable!("arity checked on construction"),
        }
    }
}

/// Noise-free and per-realization propagators for one example.
#[derive(Debug, Clone)]
pub struct TrajectorySet {
    /// Cumulative noise-free evolution, `u0_seq[j] = U₀(step j)·…·U₀(step 0)`.
    pub u0_seq: Vec<ComplexMatrix>,
    /// Full propagator at the final time, per realization.
    pub u_full: Vec<ComplexMatrix>,
    /// `Ũ_I(T)` per realization.
    pub ui_final: Vec<ComplexMatrix>,
    /// `Ũ_I` at every step (`[k][j]`), only when requested.
    pub ui_seq: Option<Vec<Vec<ComplexMatrix>>>,
}

impl TrajectorySet {
    pub fn u0_final(&self) -> &ComplexMatrix {
        self.u0_seq.last().expect("at least one step")
    }

    pub fn n_realizations(&self) -> usize {
        self.u_full.len()
    }
}

/// `H₀[j] = H_d + Σ_c c_c f_c(t_j) G_c` and `H₁[k][j] = Σ_a ½ β_a[k](t_j) G_a`.
pub fn assemble_hamiltonians(
    spec: &SystemSpec,
    distorted: &[Waveform],
    noise: &[NoiseRealizations],
) -> Result<(Vec<ComplexMatrix>, Vec<Vec<ComplexMatrix>>)> {
    if distorted.len() != spec.control.len() {
        return Err(Error::ChannelMismatch(format!(
            "{} control waveform(s) for {} channel(s)",
            distorted.len(),
            spec.control.len()
        )));
    }
    if noise.len() != spec.noise.len() {
        return Err(Error::ChannelMismatch(format!(
            "{} noise axis realization set(s) for {} axis/axes",
            noise.len(),
            spec.noise.len()
        )));
    }
    let n_steps = distorted.first().map_or_else(|| noise.first().map_or(0, |n| n.n_steps()), Vec::len);
    if n_steps == 0 {
        return Err(Error::ChannelMismatch("empty time grid".into()));
    }
    if distorted.iter().any(|w| w.len() != n_steps) {
        return Err(Error::ChannelMismatch("control waveforms differ in length".into()));
    }
    let n_real = noise.first().map_or(1, NoiseRealizations::n_realizations);
    for (a, n) in noise.iter().enumerate() {
        if n.n_realizations() != n_real || n.samples.iter().any(|s| s.len() != n_steps) {
            return Err(Error::ChannelMismatch(format!(
                "noise axis {a} is not {n_real}x{n_steps}"
            )));
        }
    }

    let drift = spec.drift();
    let control_ops: Vec<ComplexMatrix> = spec.control.iter().map(Channel::generator).collect();
    let noise_ops: Vec<ComplexMatrix> = spec.noise.iter().map(Channel::generator).collect();

    let h0 = (0..n_steps)
        .map(|j| {
            control_ops
                .iter()
                .zip(distorted)
                .fold(drift, |h, (g, w)| h + g.scale_real(w[j]))
        })
        .collect();

    let zero = ComplexMatrix::zeros(spec.dim())?;
    let h1 = (0..n_real)
        .map(|k| {
            (0..n_steps)
                .map(|j| {
                    noise_ops
                        .iter()
                        .zip(noise)
                        .fold(zero, |h, (g, n)| h + g.scale_real(n.samples[k][j]))
                })
                .collect()
        })
        .collect();
    Ok((h0, h1))
}

fn is_zero(m: &ComplexMatrix) -> bool {
    m.entries().iter().all(|z| z.re == 0.0 && z.im == 0.0)
}

/// First-order time-ordered products; later steps multiply from the left.
pub fn evolve(
    h0_seq: &[ComplexMatrix],
    h1_seq: &[Vec<ComplexMatrix>],
    dt: f64,
    store_full_ui: bool,
) -> Result<TrajectorySet> {
    let n_steps = h0_seq.len();
    if n_steps == 0 {
        return Err(Error::InvalidConfig("evolution needs at least one step".into()));
    }
    if h1_seq.is_empty() {
        return Err(Error::InvalidConfig("evolution needs at least one realization".into()));
    }
    if let Some(bad) = h1_seq.iter().position(|h| h.len() != n_steps) {
        return Err(Error::ChannelMismatch(format!(
            "noise Hamiltonian {bad} has {} steps, expected {n_steps}",
            h1_seq[bad].len()
        )));
    }
    let dim = h0_seq[0].dim();
    let id = ComplexMatrix::identity(dim)?;

    let steps0 = h0_seq
        .par_iter()
        .map(|h| unitary_step(h, dt))
        .collect::<Result<Vec<_>>>()?;
    let mut u0_seq = Vec::with_capacity(n_steps);
    let mut acc = id;
    for step in &steps0 {
        acc = *step * acc;
        u0_seq.push(acc);
    }
    let u0_final = acc;

    let per_real = h1_seq
        .par_iter()
        .map(|h1| {
            let mut u = id;
            let mut seq = store_full_ui.then(|| Vec::with_capacity(n_steps));
            for (j, (h0, h1j)) in h0_seq.iter().zip(h1).enumerate() {
                let step = if is_zero(h1j) { steps0[j] } else { unitary_step(&(*h0 + *h1j), dt)? };
                u = step * u;
                if let Some(seq) = seq.as_mut() {
                    seq.push(u * u0_seq[j].adjoint());
                }
            }
            Ok((u, u * u0_final.adjoint(), seq))
        })
        .collect::<Result<Vec<_>>>()?;

    let mut u_full = Vec::with_capacity(per_real.len());
    let mut ui_final = Vec::with_capacity(per_real.len());
    let mut ui_seq = store_full_ui.then(|| Vec::with_capacity(per_real.len()));
    for (u, ui, seq) in per_real {
        u_full.push(u);
        ui_final.push(ui);
        if let (Some(all), Some(seq)) = (ui_seq.as_mut(), seq) {
            all.push(seq);
        }
    }
    Ok(TrajectorySet { u0_seq, u_full, ui_final, ui_seq })
}

/// `W_O = O⁻¹·Ũ_I†·O·Ũ_I`
pub fn compute_wo(ui_final: &ComplexMatrix, obs: &ComplexMatrix) -> Result<ComplexMatrix> {
    let inv = obs.inverse().ok_or(Error::SingularObservable)?;
    Ok(inv * ui_final.adjoint() * *obs * *ui_final)
}

/// Entrywise mean over realizations.
pub fn compute_vo(wo_set: &[ComplexMatrix]) -> Result<ComplexMatrix> {
    let first = wo_set
        .first()
        .ok_or_else(|| Error::InvalidConfig("V_O needs at least one realization".into()))?;
    if wo_set.len() == 1 {
        return Ok(*first);
    }
    let sum = wo_set[1..].iter().fold(*first, |acc, w| acc + *w);
    Ok(sum.scale_real(1.0 / wo_set.len() as f64))
}

/// `W_O` per realization and `V_O` for each observable.
#[derive(Debug, Clone)]
pub struct VoSet {
    pub observables: Vec<PauliLabel>,
    /// `wo[o][k]`
    pub wo: Vec<Vec<ComplexMatrix>>,
    pub vo: Vec<ComplexMatrix>,
}

pub fn compute_vo_set(traj: &TrajectorySet, observables: &[PauliLabel]) -> Result<VoSet> {
    let mut wo = Vec::with_capacity(observables.len());
    let mut vo = Vec::with_capacity(observables.len());
    for &label in observables {
        let obs = pauli_matrix(label);
        let set = traj
            .ui_final
            .iter()
            .map(|ui| compute_wo(ui, &obs))
            .collect::<Result<Vec<_>>>()?;
        vo.push(compute_vo(&set)?);
        wo.push(set);
    }
    Ok(VoSet { observables: observables.to_vec(), wo, vo })
}
