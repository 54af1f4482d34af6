//! Generation runs, seeding, validation and inspection behind the `qsf` binary.

mod inspect;
mod validate;

pub use inspect::{dump_example, run_inspect, InspectReport};
pub use validate::{run_validate, validate_archive, Check, CheckKind, CheckStatus, ValidationReport};

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::datasetio::{
    encode_example, enumerate_standard, example_entry_name, package_dataset, parse_name,
    DatasetConfig, DatasetManifest, SimulationParameters,
};
use crate::error::{Error, Result};
use crate::generate::generate_example;
use crate::noisegen::NoiseConstants;
use crate::pulsegen::FilterSettings;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_IO: i32 = 3;

/// Exit status for an error surfaced by a run.
pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::MalformedName { .. }
        | Error::InvalidConfig(_)
        | Error::UnsupportedQubits(_)
        | Error::IndexOutOfRange { .. }
        | Error::DanglingNoiseReference { .. } => EXIT_USAGE,
        Error::Io(_) | Error::Zip(_) | Error::Json(_) | Error::Container(_) | Error::MissingExamples(_) => {
            EXIT_IO
        }
        _ => EXIT_VALIDATION,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Selector {
    Name(String),
    All52,
}

impl Selector {
    pub fn parse(s: &str) -> Self {
        if s == "all-52" {
            Selector::All52
        } else {
            Selector::Name(s.to_string())
        }
    }

    pub fn configs(&self) -> Result<Vec<DatasetConfig>> {
        match self {
            Selector::All52 => Ok(enumerate_standard()),
            Selector::Name(name) => Ok(vec![parse_name(name)?]),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    /// M = 256, K = 100, 10 examples.
    Desk,
    /// M = 1024, K = 2000, 10 000 examples. Long-running.
    Full,
}

impl Preset {
    pub fn params(self) -> SimulationParameters {
        match self {
            Preset::Desk => SimulationParameters::desk(),
            Preset::Full => SimulationParameters::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub selector: Selector,
    pub preset: Preset,
    pub num_ex: Option<usize>,
    pub n_steps: Option<usize>,
    pub n_realizations: Option<usize>,
    pub master_seed: u64,
    pub out_dir: PathBuf,
    pub workers: usize,
    pub noise_constants: Option<NoiseConstants>,
    pub noise_strength: Option<f64>,
    pub filter: Option<FilterSettings>,
    pub store_full_ui: bool,
    pub record_timing: bool,
    /// Validate existing archives for the selection instead of generating.
    pub validate_only: bool,
}

impl RunConfig {
    pub fn new(selector: Selector, out_dir: impl Into<PathBuf>) -> Self {
        Self {
            selector,
            preset: Preset::Desk,
            num_ex: None,
            n_steps: None,
            n_realizations: None,
            master_seed: 0,
            out_dir: out_dir.into(),
            workers: 1,
            noise_constants: None,
            noise_strength: None,
            filter: None,
            store_full_ui: false,
            record_timing: false,
            validate_only: false,
        }
    }

    /// Parameters with every override applied.
    pub fn params(&self) -> SimulationParameters {
        let mut p = self.preset.params();
        if let Some(n) = self.num_ex {
            p.num_ex = n;
        }
        if let Some(m) = self.n_steps {
            p.n_steps = m;
        }
        if let Some(k) = self.n_realizations {
            p.n_realizations = k;
        }
        if let Some(f) = self.filter {
            p.filter = f;
        }
        if self.noise_constants.is_some() || self.noise_strength.is_some() {
            let mut c = self.noise_constants.unwrap_or_else(|| NoiseConstants::for_duration(p.total_time));
            if let Some(g) = self.noise_strength {
                c.strength = g;
            }
            p.noise_constants = Some(c);
        }
        p.store_full_ui = self.store_full_ui;
        p
    }

    pub fn configs(&self) -> Result<Vec<DatasetConfig>> {
        let params = self.params();
        self.selector
            .configs()?
            .into_iter()
            .map(|mut c| {
                c.params = params.clone();
                c.validate()?;
                Ok(c)
            })
            .collect()
    }
}

/// Seed of example `index`: the first 8 bytes (LE) of
/// `SHA-256("qsf-seed-v1" ‖ master LE ‖ name ‖ 0x00 ‖ index LE)`.
pub fn derive_seed(master: u64, dataset: &str, index: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(b"qsf-seed-v1");
    h.update(master.to_le_bytes());
    h.update(dataset.as_bytes());
    h.update([0u8]);
    h.update((index as u64).to_le_bytes());
    let digest = h.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("8 bytes"))
}

#[derive(Debug, Clone, Serialize)]
pub struct DatasetSummary {
    pub dataset: String,
    pub archive: PathBuf,
    pub num_ex: usize,
    pub validation_passed: bool,
}

#[derive(Debug, Clone, Serialize, Default)]
pub struct GenerateSummary {
    pub datasets: Vec<DatasetSummary>,
}

impl GenerateSummary {
    pub fn all_valid(&self) -> bool {
        self.datasets.iter().all(|d| d.validation_passed)
    }
}

fn partial_dir(out_dir: &Path, name: &str) -> PathBuf {
    out_dir.join(format!("{name}.partial"))
}

/// Generates, packages and validates every selected dataset.
///
/// Examples are written into `<out>/<name>.partial/` and zipped into
/// `<out>/<name>.zip` once all are present; on failure the partial
/// directory is left in place.
pub fn run_generate(rc: &RunConfig) -> Result<GenerateSummary> {
    let configs = rc.configs()?;
    fs::create_dir_all(&rc.out_dir)?;
    if rc.validate_only {
        return validate_selection(rc, &configs);
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(rc.workers.max(1))
        .build()
        .map_err(|e| Error::InvalidConfig(e.to_string()))?;

    let mut summary = GenerateSummary::default();
    for cfg in configs {
        let name = cfg.name();
        let n = cfg.params.num_ex;
        let seeds: Vec<u64> = (0..n).map(|i| derive_seed(rc.master_seed, &name, i)).collect();
        let work = partial_dir(&rc.out_dir, &name);
        fs::create_dir_all(&work)?;

        pool.install(|| {
            seeds.par_iter().enumerate().try_for_each(|(i, &seed)| -> Result<()> {
                let record = generate_example(&cfg, seed, rc.record_timing)?;
                fs::write(work.join(example_entry_name(i)), encode_example(&record))?;
                Ok(())
            })
        })?;

        let manifest = DatasetManifest::new(cfg, rc.master_seed, seeds);
        let archive = package_dataset(&manifest, &work, &rc.out_dir)?;
        fs::remove_dir_all(&work)?;

        let report = validate_archive(&archive);
        if !report.passed() {
            return Err(Error::Invariant(format!(
                "{} failed validation: {}",
                archive.display(),
                report.failures().join("; ")
            )));
        }
        summary.datasets.push(DatasetSummary {
            dataset: name,
            archive,
            num_ex: n,
            validation_passed: true,
        });
    }
    Ok(summary)
}

fn validate_selection(rc: &RunConfig, configs: &[DatasetConfig]) -> Result<GenerateSummary> {
    let mut summary = GenerateSummary::default();
    for cfg in configs {
        let name = cfg.name();
        let archive = rc.out_dir.join(format!("{name}.zip"));
        let report = validate_archive(&archive);
        summary.datasets.push(DatasetSummary {
            dataset: name,
            archive,
            num_ex: cfg.params.num_ex,
            validation_passed: report.passed(),
        });
    }
    Ok(summary)
}
