//! One example end to end: pulses → distortion → noise → evolution → V_O → expectations.

use std::time::Instant;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::datasetio::{shape_table, Array, DatasetConfig, ExampleRecord};
use crate::error::Result;
use crate::evolver::{assemble_hamiltonians, compute_vo_set, evolve, TrajectorySet, VoSet};
use crate::measurement::{build_plan, expectations, expectations_direct, ExpectationTensor, MeasurementPlan};
use crate::noisegen::{make_noise, NoiseRealizations};
use crate::pulsegen::{
    apply_distortion, design_chebyshev, draw_pulse_params, render_waveform, PulseConfig,
    PulseParams, Waveform,
};
use crate::qcore::ComplexMatrix;

/// Everything computed for one example, before flattening into arrays.
#[derive(Debug, Clone)]
pub struct Simulation {
    pub config: DatasetConfig,
    pub seed: u64,
    pub pulse_config: PulseConfig,
    pub pulse_params: PulseParams,
    pub pulses: Vec<Waveform>,
    pub distorted: Vec<Waveform>,
    pub noise: Vec<NoiseRealizations>,
    pub h0: Vec<ComplexMatrix>,
    pub h1: Vec<Vec<ComplexMatrix>>,
    pub trajectories: TrajectorySet,
    pub plan: MeasurementPlan,
    pub vo: VoSet,
    /// Noise-averaged expectations through `V_O`.
    pub eo: ExpectationTensor,
    /// Direct Monte Carlo average of `Tr(UρU†O)`.
    pub direct: ExpectationTensor,
}

pub fn simulate(cfg: &DatasetConfig, seed: u64) -> Result<Simulation> {
    cfg.validate()?;
    let p = &cfg.params;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = cfg.system_spec()?;

    let pulse_config = cfg.pulse_config();
    let pulse_params = draw_pulse_params(&mut rng, &pulse_config, spec.control.len())?;
    let pulses = render_waveform(&pulse_params, &pulse_config);
    let distorted = if cfg.distortion {
        let f = p.filter;
        let filter = design_chebyshev(f.order, f.ripple_db, f.cutoff_frac, p.dt())?;
        pulses.iter().map(|w| apply_distortion(&filter, w)).collect()
    } else {
        pulses.clone()
    };

    let noise = make_noise(
        &cfg.effective_profiles(),
        p.n_steps,
        p.n_realizations,
        p.total_time,
        &p.noise_constants(),
        &mut rng,
    )?;
    let (h0, h1) = assemble_hamiltonians(&spec, &distorted, &noise)?;
    let trajectories = evolve(&h0, &h1, p.dt(), p.store_full_ui)?;

    let plan = build_plan(spec.n_qubits())?;
    let vo = compute_vo_set(&trajectories, &plan.observables)?;
    let eo = expectations(&plan, &trajectories, &vo, true)?;
    let direct = expectations_direct(&plan, &trajectories.u_full, false)?;

    Ok(Simulation {
        config: cfg.clone(),
        seed,
        pulse_config,
        pulse_params,
        pulses,
        distorted,
        noise,
        h0,
        h1,
        trajectories,
        plan,
        vo,
        eo,
        direct,
    })
}

fn flat(ms: impl IntoIterator<Item = ComplexMatrix>) -> Vec<Complex64> {
    ms.into_iter().flat_map(|m| m.entries().to_vec()).collect()
}

/// Interleaves per-channel series into time-major `[j][c]` order.
fn time_major(series: &[Vec<f64>], n_steps: usize) -> Vec<f64> {
    (0..n_steps).flat_map(|j| series.iter().map(move |s| s[j])).collect()
}

impl Simulation {
    pub fn simulation_parameters(&self, elapsed_time: f64) -> serde_json::Value {
        let cfg = &self.config;
        let spec = cfg.system_spec().expect("validated in simulate");
        json!({
            "dataset": cfg.name(),
            "seed": self.seed,
            "category": cfg.category.number(),
            "n_qubits": cfg.n_qubits(),
            "T": cfg.params.total_time,
            "M": cfg.params.n_steps,
            "K": cfg.params.n_realizations,
            "Omega": spec.omega,
            "num_ex": cfg.params.num_ex,
            "batch_size": cfg.params.batch_size,
            "pulse_shape": match cfg.waveform {
                crate::pulsegen::WaveformKind::Gaussian => "Gaussian",
                crate::pulsegen::WaveformKind::Square => "Square",
            },
            "num_pulses": self.pulse_config.n_pulses,
            "amp_range": [self.pulse_config.amp_min, self.pulse_config.amp_max],
            "sigma": self.pulse_config.sigma,
            "distortion": cfg.distortion,
            "filter": cfg.params.filter,
            "noise_profile": cfg.effective_profiles().iter().map(|p| p.kind().to_string()).collect::<Vec<String>>(),
            "noise_constants": cfg.params.noise_constants(),
            "static_operators": ["drift"],
            "dynamic_operators": spec.control.iter().map(|c| c.label.token()).collect::<Vec<String>>(),
            "noise_operators": spec.noise.iter().map(|c| c.label.token()).collect::<Vec<String>>(),
            "measurement_operators": self.plan.observables.iter().map(|l| l.token()).collect::<Vec<String>>(),
            "initial_states": self.plan.states.iter().map(|s| s.label.clone()).collect::<Vec<String>>(),
            "store_full_ui": cfg.params.store_full_ui,
            "params": cfg.params,
            "elapsed_time": elapsed_time,
        })
    }

    /// Flattens into the schema layout described by [`shape_table`].
    pub fn to_record(&self, elapsed_time: f64) -> Result<ExampleRecord> {
        let table = shape_table(&self.config);
        let shape = |name: &str| {
            table.iter().find(|f| f.name == name).expect("known field").shape.clone()
        };
        let m = self.config.params.n_steps;
        let k = self.config.params.n_realizations;
        let traj = &self.trajectories;

        let pulse_parameters = self
            .pulse_params
            .channels
            .iter()
            .flatten()
            .flat_map(|p| p.to_vector())
            .collect();
        let noise: Vec<f64> = (0..m)
            .flat_map(|j| (0..k).flat_map(move |kk| self.noise.iter().map(move |n| n.samples[kk][j])))
            .collect();
        let h1 = flat((0..m).flat_map(|j| self.h1.iter().map(move |row| row[j])));
        let ui = match &traj.ui_seq {
            Some(seq) => flat((0..m).flat_map(|j| seq.iter().map(move |row| row[j]))),
            None => flat(traj.ui_final.iter().copied()),
        };
        let per_real = self.eo.per_realization.as_ref().expect("computed in simulate");

        let fields = vec![
            ("pulse_parameters", Array::real(shape("pulse_parameters"), pulse_parameters)?),
            ("time_range", Array::real(shape("time_range"), self.pulse_config.time_grid())?),
            ("pulses", Array::real(shape("pulses"), time_major(&self.pulses, m))?),
            ("distorted_pulses", Array::real(shape("distorted_pulses"), time_major(&self.distorted, m))?),
            ("expectations", Array::real(shape("expectations"), self.direct.values.clone())?),
            ("Vo_operator", Array::complex(shape("Vo_operator"), flat(self.vo.vo.iter().copied()))?),
            ("noise", Array::real(shape("noise"), noise)?),
            ("H0", Array::complex(shape("H0"), flat(self.h0.iter().copied()))?),
            ("H1", Array::complex(shape("H1"), h1)?),
            ("U0", Array::complex(shape("U0"), flat(traj.u0_seq.iter().copied()))?),
            ("UI", Array::complex(shape("UI"), ui)?),
            ("Vo", Array::real(shape("Vo"), per_real.iter().flatten().copied().collect())?),
            ("Eo", Array::real(shape("Eo"), self.eo.values.clone())?),
        ];
        let record = ExampleRecord {
            simulation_parameters: self.simulation_parameters(elapsed_time),
            fields: fields.into_iter().map(|(n, a)| (n.to_string(), a)).collect(),
        };
        record.check_shapes(&table)?;
        Ok(record)
    }
}

/// Simulates and flattens one example. `elapsed_time` is recorded only when
/// `record_timing` is set, so that default output is reproducible.
pub fn generate_example(cfg: &DatasetConfig, seed: u64, record_timing: bool) -> Result<ExampleRecord> {
    let start = Instant::now();
    let sim = simulate(cfg, seed)?;
    let elapsed = if record_timing { start.elapsed().as_secs_f64() } else { 0.0 };
    sim.to_record(elapsed)
}
