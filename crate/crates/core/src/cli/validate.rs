use std::path::Path;

use num_complex::Complex64;
use serde::Serialize;

use crate::datasetio::{parse_name, shape_table, DatasetArchive, ExampleRecord};
use crate::qcore::ComplexMatrix;

const UNITARY_TOL: f64 = 1e-8;
const HERMITIAN_TOL: f64 = 1e-9;
const BOUND_TOL: f64 = 1e-9;
const VO_IDENTITY_TOL: f64 = 1e-9;
const EO_AGREEMENT_TOL: f64 = 1e-9;

/// Format checks concern the container; physics checks the stored numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckKind {
    Format,
    Physics,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not applicable to this dataset.
    Inactive,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub kind: CheckKind,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub archive: String,
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| format!("{}: {}", c.name, c.detail))
            .collect()
    }

    /// 0 when clean, 3 for any format failure, otherwise 2 for physics failures.
    pub fn exit_code(&self) -> i32 {
        let failed = |kind| {
            self.checks.iter().any(|c| c.kind == kind && c.status == CheckStatus::Fail)
        };
        if failed(CheckKind::Format) {
            super::EXIT_IO
        } else if failed(CheckKind::Physics) {
            super::EXIT_VALIDATION
        } else {
            super::EXIT_OK
        }
    }
}

struct Accumulator {
    checks: Vec<Check>,
}

impl Accumulator {
    fn push(&mut self, name: &'static str, kind: CheckKind, failures: Vec<String>, active: bool) {
        let (status, detail) = if !active {
            (CheckStatus::Inactive, "not applicable".to_string())
        } else if failures.is_empty() {
            (CheckStatus::Pass, "ok".to_string())
        } else {
            let more = if failures.len() > 3 { format!(" (+{} more)", failures.len() - 3) } else { String::new() };
            (CheckStatus::Fail, format!("{}{more}", failures[..failures.len().min(3)].join("; ")))
        };
        self.checks.push(Check { name, kind, status, detail });
    }
}

fn matrices(values: &[Complex64], dim: usize) -> impl Iterator<Item = ComplexMatrix> + '_ {
    values
        .chunks_exact(dim * dim)
        .map(|c| ComplexMatrix::from_row_major(c).expect("2x2 or 4x4 chunks"))
}

fn worst<I: IntoIterator<Item = f64>>(it: I) -> f64 {
    // NaN propagates as a failure
    it.into_iter().fold(0.0, |m: f64, v| if v.is_nan() || m.is_nan() { f64::NAN } else { m.max(v) })
}

/// Runs every check on an archive. Never fails: problems become failed checks.
pub fn validate_archive(path: &Path) -> ValidationReport {
    let mut acc = Accumulator { checks: Vec::new() };
    let report = |acc: Accumulator| ValidationReport {
        archive: path.display().to_string(),
        checks: acc.checks,
    };

    let mut archive = match DatasetArchive::open(path) {
        Ok(a) => a,
        Err(e) => {
            acc.push("container", CheckKind::Format, vec![e.to_string()], true);
            return report(acc);
        }
    };
    let cfg = archive.manifest.config.clone();
    let n = archive.len();

    let mut examples: Vec<(usize, ExampleRecord)> = Vec::with_capacity(n);
    let mut container_failures = Vec::new();
    for i in 0..n {
        match archive.read_example(i) {
            Ok(r) => examples.push((i, r)),
            Err(e) => container_failures.push(format!("example {i}: {e}")),
        }
    }
    acc.push("container", CheckKind::Format, container_failures, true);

    let mut name_failures = Vec::new();
    if archive.manifest.dataset != cfg.name() {
        name_failures.push(format!("manifest name {} vs config {}", archive.manifest.dataset, cfg.name()));
    }
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    match parse_name(&stem) {
        Ok(parsed) if parsed.same_layout(&cfg) => {}
        Ok(_) => name_failures.push(format!("archive name {stem} disagrees with manifest config")),
        Err(e) => name_failures.push(format!("archive name {stem}: {e}")),
    }
    acc.push("naming", CheckKind::Format, name_failures, true);

    let table = shape_table(&cfg);
    let shape_failures: Vec<String> = examples
        .iter()
        .filter_map(|(i, r)| r.check_shapes(&table).err().map(|e| format!("example {i}: {e}")))
        .collect();
    let shapes_ok = shape_failures.is_empty();
    acc.push("shape_contract", CheckKind::Format, shape_failures, true);
    if !shapes_ok {
        return report(acc);
    }

    let dim = cfg.dim();
    let real = |r: &ExampleRecord, f: &str| r.get(f).and_then(|a| a.as_real()).unwrap_or(&[]).to_vec();
    let cplx = |r: &ExampleRecord, f: &str| r.get(f).and_then(|a| a.as_complex()).unwrap_or(&[]).to_vec();

    let mut bounds = Vec::new();
    let mut unitarity = Vec::new();
    let mut hermiticity = Vec::new();
    let mut vo_identity = Vec::new();
    let mut agreement = Vec::new();
    let mut distortion = Vec::new();
    for (i, r) in &examples {
        for field in ["expectations", "Eo", "Vo"] {
            let w = worst(real(r, field).iter().map(|v| v.abs()));
            if !(w <= 1.0 + BOUND_TOL) {
                bounds.push(format!("example {i}: max |{field}| = {w}"));
            }
        }
        for field in ["U0", "UI"] {
            let w = worst(matrices(&cplx(r, field), dim).map(|m| m.unitarity_deviation()));
            if !(w <= UNITARY_TOL) {
                unitarity.push(format!("example {i}: {field} deviates by {w:.3e}"));
            }
        }
        for field in ["H0", "H1"] {
            let w = worst(matrices(&cplx(r, field), dim).map(|m| m.hermitian_deviation()));
            if !(w <= HERMITIAN_TOL) {
                hermiticity.push(format!("example {i}: {field} deviates by {w:.3e}"));
            }
        }
        if cfg.is_noiseless() {
            let w = worst(matrices(&cplx(r, "Vo_operator"), dim).map(|m| m.distance_from_identity()));
            if !(w <= VO_IDENTITY_TOL) {
                vo_identity.push(format!("example {i}: ‖V_O − I‖ = {w:.3e}"));
            }
        }
        let w = worst(real(r, "Eo").iter().zip(real(r, "expectations").iter()).map(|(a, b)| (a - b).abs()));
        if !(w <= EO_AGREEMENT_TOL) {
            agreement.push(format!("example {i}: E_O differs from direct average by {w:.3e}"));
        }
        if !cfg.distortion {
            let same = real(r, "pulses").iter().zip(real(r, "distorted_pulses").iter()).all(|(a, b)| a.to_bits() == b.to_bits());
            if !same {
                distortion.push(format!("example {i}: distorted_pulses differ from pulses"));
            }
        }
    }
    acc.push("expectation_bounds", CheckKind::Physics, bounds, true);
    acc.push("unitarity", CheckKind::Physics, unitarity, true);
    acc.push("hermiticity", CheckKind::Physics, hermiticity, true);
    acc.push("vo_identity", CheckKind::Physics, vo_identity, cfg.is_noiseless());
    acc.push("eo_consistency", CheckKind::Physics, agreement, true);
    acc.push("undistorted_identity", CheckKind::Physics, distortion, !cfg.distortion);
    report(acc)
}

/// Validates each archive; the exit code is the worst across them.
pub fn run_validate(paths: &[&Path]) -> (Vec<ValidationReport>, i32) {
    let reports: Vec<ValidationReport> = paths.iter().map(|p| validate_archive(p)).collect();
    let code = reports.iter().map(ValidationReport::exit_code).max().unwrap_or(super::EXIT_OK);
    (reports, code)
}
