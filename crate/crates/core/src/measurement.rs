//! Initial states, observables and noise-averaged Pauli expectations.
//!
//! Pair index is `state * n_observables + observable`. States per qubit run
//! `+x, −x, +y, −y, +z, −z`; two-qubit states are products in row-major
//! order (first qubit outer). Two-qubit observables are every `A⊗B` with
//! `A, B ∈ (I, X, Y, Z)` except `I⊗I`, again first factor outer, so
//! within each block the second factor runs X, Y, Z.

use crate::error::{Error, Result};
use crate::evolver::{TrajectorySet, VoSet};
use crate::qcore::{
    pauli_eigenstates, pauli_matrix, real_trace, tensor_product, trace_of_product, Axis,
    ComplexMatrix, PauliLabel,
};

/// Bound applied to every stored expectation.
pub const EXPECTATION_BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone)]
pub struct InitialState {
    pub label: String,
    pub rho: ComplexMatrix,
}

#[derive(Debug, Clone)]
pub struct MeasurementPlan {
    pub n_qubits: usize,
    pub states: Vec<InitialState>,
    pub observables: Vec<PauliLabel>,
}

impl MeasurementPlan {
    pub fn n_pairs(&self) -> usize {
        self.states.len() * self.observables.len()
    }

    pub fn pair_index(&self, state: usize, observable: usize) -> usize {
        state * self.observables.len() + observable
    }

    pub fn observable_matrices(&self) -> Vec<ComplexMatrix> {
        self.observables.iter().map(|&l| pauli_matrix(l)).collect()
    }
}

fn single_qubit_states() -> Vec<InitialState> {
    Axis::NON_IDENTITY
        .iter()
        .flat_map(|&axis| {
            let (plus, minus) = pauli_eigenstates(axis).expect("non-identity axis");
            let l = axis.letter().to_ascii_lowercase();
            [
                InitialState { label: format!("+{l}"), rho: plus },
                InitialState { label: format!("-{l}"), rho: minus },
            ]
        })
        .collect()
}

pub fn build_plan(n_qubits: usize) -> Result<MeasurementPlan> {
    match n_qubits {
        1 => Ok(MeasurementPlan {
            n_qubits,
            states: single_qubit_states(),
            observables: Axis::NON_IDENTITY.iter().map(|&a| PauliLabel::Single(a)).collect(),
        }),
        2 => {
            let single = single_qubit_states();
            let mut states = Vec::with_capacity(36);
            for a in &single {
                for b in &single {
                    states.push(InitialState {
                        label: format!("{}{}", a.label, b.label),
                        rho: tensor_product(&a.rho, &b.rho)?,
                    });
                }
            }
            let observables = Axis::ALL
                .iter()
                .flat_map(|&a| Axis::ALL.iter().map(move |&b| PauliLabel::Pair(a, b)))
                .filter(|l| !l.is_identity())
                .collect();
            Ok(MeasurementPlan { n_qubits, states, observables })
        }
        n => Err(Error::UnsupportedQubits(n)),
    }
}

/// Expectations per `(state, observable)` pair, plus optional per-realization values.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpectationTensor {
    pub values: Vec<f64>,
    /// `per_realization[k][pair]`
    pub per_realization: Option<Vec<Vec<f64>>>,
}

fn check_bounds(values: &[f64]) -> Result<()> {
    match values.iter().position(|v| !(v.abs() <= 1.0 + EXPECTATION_BOUND_TOL)) {
        Some(i) => Err(Error::Invariant(format!(
            "expectation {i} = {} lies outside [-1, 1]",
            values[i]
        ))),
        None => Ok(()),
    }
}

/// `E[s, o] = Tr(U₀ρ_sU₀†·O·V_O)`; the per-realization set uses `W_O[k]` in place of `V_O`.
pub fn expectations(
    plan: &MeasurementPlan,
    traj: &TrajectorySet,
    vo: &VoSet,
    per_realization: bool,
) -> Result<ExpectationTensor> {
    if vo.observables != plan.observables {
        return Err(Error::ChannelMismatch("V_O set was built for different observables".into()));
    }
    if vo.wo.iter().any(|w| w.len() != traj.n_realizations()) {
        return Err(Error::ChannelMismatch("W_O set and trajectories disagree on K".into()));
    }
    let u0 = *traj.u0_final();
    let evolved: Vec<ComplexMatrix> = plan.states.iter().map(|s| u0 * s.rho * u0.adjoint()).collect();
    let obs = plan.observable_matrices();

    let mut values = Vec::with_capacity(plan.n_pairs());
    for rho in &evolved {
        for (o, vo_o) in obs.iter().zip(&vo.vo) {
            values.push(real_trace(trace_of_product(rho, &(*o * *vo_o)))?);
        }
    }
    check_bounds(&values)?;

    let per_realization = if per_realization {
        let mut all = Vec::with_capacity(traj.n_realizations());
        for k in 0..traj.n_realizations() {
            let ow: Vec<ComplexMatrix> = obs.iter().zip(&vo.wo).map(|(o, w)| *o * w[k]).collect();
            let mut row = Vec::with_capacity(plan.n_pairs());
            for rho in &evolved {
                for m in &ow {
                    row.push(real_trace(trace_of_product(rho, m))?);
                }
            }
            check_bounds(&row)?;
            all.push(row);
        }
        Some(all)
    } else {
        None
    };
    Ok(ExpectationTensor { values, per_realization })
}

/// Monte Carlo mean of `Tr(UρU†O)` straight from the full propagators.
pub fn expectations_direct(
    plan: &MeasurementPlan,
    u_full: &[ComplexMatrix],
    per_realization: bool,
) -> Result<ExpectationTensor> {
    if u_full.is_empty() {
        return Err(Error::InvalidConfig("no realizations".into()));
    }
    let obs = plan.observable_matrices();
    let mut sums = vec![0.0; plan.n_pairs()];
    let mut rows = per_realization.then(|| Vec::with_capacity(u_full.len()));
    for u in u_full {
        let mut row = Vec::with_capacity(plan.n_pairs());
        for s in &plan.states {
            let rho = *u * s.rho * u.adjoint();
            for o in &obs {
                row.push(real_trace(trace_of_product(&rho, o))?);
            }
        }
        sums.iter_mut().zip(&row).for_each(|(acc, v)| *acc += v);
        if let Some(rows) = rows.as_mut() {
            rows.push(row);
        }
    }
    let n = u_full.len() as f64;
    let values: Vec<f64> = sums.into_iter().map(|s| s / n).collect();
    check_bounds(&values)?;
    Ok(ExpectationTensor { values, per_realization: rows })
}
