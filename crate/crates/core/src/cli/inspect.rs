use std::fmt::Write as _;
use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::datasetio::{shape_table, ArrayData, DatasetArchive, ExampleRecord, SCHEMA_FIELDS};
use crate::error::Result;
use crate::qcore::ComplexMatrix;

#[derive(Debug, Clone)]
pub struct InspectReport {
    pub dataset: String,
    pub index: usize,
    /// Schema keys present in the example, parameter record first.
    pub field_names: Vec<String>,
    pub eo_len: usize,
    pub eo_min: f64,
    pub eo_max: f64,
    /// `‖V_O − I‖_F` per observable.
    pub vo_deviation: Vec<(String, f64)>,
    pub text: String,
}

impl InspectReport {
    pub fn max_vo_deviation(&self) -> f64 {
        self.vo_deviation.iter().map(|(_, d)| *d).fold(0.0, f64::max)
    }
}

fn load(path: &Path, index: usize) -> Result<(DatasetArchive, ExampleRecord)> {
    let mut archive = DatasetArchive::open(path)?;
    let record = archive.read_example(index)?;
    Ok((archive, record))
}

/// Human-readable summary of one example.
pub fn run_inspect(path: &Path, index: usize) -> Result<InspectReport> {
    let (archive, record) = load(path, index)?;
    let cfg = &archive.manifest.config;
    let dim = cfg.dim();
    let mut text = String::new();

    let _ = writeln!(text, "dataset   {}  (example {index} of {})", archive.manifest.dataset, archive.len());
    let _ = writeln!(
        text,
        "config    category {}  qubits {}  M {}  K {}  distortion {}",
        cfg.category.number(),
        cfg.n_qubits(),
        cfg.params.n_steps,
        cfg.params.n_realizations,
        cfg.distortion
    );
    let _ = writeln!(text, "\nfields");
    let _ = writeln!(text, "  {:<22} dict", "simulation_parameters");
    for spec in shape_table(cfg) {
        if let Some(a) = record.get(spec.name) {
            let _ = writeln!(text, "  {:<22} {:?} {:?}", spec.name, a.dtype(), a.shape);
        }
    }

    let _ = writeln!(text, "\npulses (channel, amplitude, position, width)");
    if let Some(pp) = record.get("pulse_parameters").and_then(|a| a.as_real()) {
        let n_pulses = cfg.params.n_pulses;
        for (i, v) in pp.chunks_exact(3).enumerate() {
            let _ = writeln!(text, "  {:>2} {:>10.4} {:>10.5} {:>10.3e}", i / n_pulses, v[0], v[1], v[2]);
        }
    }

    let eo = record.get("Eo").and_then(|a| a.as_real()).unwrap_or(&[]);
    let eo_min = eo.iter().copied().fold(f64::INFINITY, f64::min);
    let eo_max = eo.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let _ = writeln!(text, "\nE_O       {} values in [{eo_min:.6}, {eo_max:.6}]", eo.len());

    let labels: Vec<String> = record.simulation_parameters["measurement_operators"]
        .as_array()
        .map(|a| a.iter().filter_map(|v| v.as_str().map(str::to_owned)).collect())
        .unwrap_or_default();
    let mut vo_deviation = Vec::new();
    if let Some(vo) = record.get("Vo_operator").and_then(|a| a.as_complex()) {
        let _ = writeln!(text, "‖V_O − I‖");
        for (o, chunk) in vo.chunks_exact(dim * dim).enumerate() {
            let d = ComplexMatrix::from_row_major(chunk)?.distance_from_identity();
            let label = labels.get(o).cloned().unwrap_or_else(|| o.to_string());
            let _ = writeln!(text, "  {label:<3} {d:.3e}");
            vo_deviation.push((label, d));
        }
    }

    let mut field_names = vec!["simulation_parameters".to_string()];
    field_names.extend(record.fields.iter().map(|(n, _)| n.clone()));
    Ok(InspectReport {
        dataset: archive.manifest.dataset.clone(),
        index,
        field_names,
        eo_len: eo.len(),
        eo_min,
        eo_max,
        vo_deviation,
        text,
    })
}

fn array_json(record: &ExampleRecord, name: &str) -> Option<Value> {
    let a = record.get(name)?;
    let data: Vec<f64> = match &a.data {
        ArrayData::Real(v) => v.clone(),
        ArrayData::Complex(v) => v.iter().flat_map(|z| [z.re, z.im]).collect(),
    };
    Some(json!({ "dtype": a.dtype(), "shape": a.shape, "data": data }))
}

/// Writes one example as JSON: `{dataset, index, simulation_parameters,
/// fields: {name: {dtype, shape, data}}}`. Complex data is interleaved
/// `(re, im)` in row-major order.
pub fn dump_example<W: Write>(path: &Path, index: usize, mut out: W) -> Result<()> {
    let (archive, record) = load(path, index)?;
    let mut fields = Map::new();
    for name in SCHEMA_FIELDS.iter().skip(1) {
        if let Some(v) = array_json(&record, name) {
            fields.insert(name.to_string(), v);
        }
    }
    let doc = json!({
        "dataset": archive.manifest.dataset,
        "index": index,
        "simulation_parameters": record.simulation_parameters,
        "fields": fields,
    });
    serde_json::to_writer(&mut out, &doc)?;
    out.write_all(b"\n")?;
    Ok(())
}
