use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::naming::DatasetConfig;
use crate::error::{Error, Result};

/// Array fields in storage order.
pub const FIELD_NAMES: [&str; 13] = [
    "pulse_parameters",
    "time_range",
    "pulses",
    "distorted_pulses",
    "expectations",
    "Vo_operator",
    "noise",
    "H0",
    "H1",
    "U0",
    "UI",
    "Vo",
    "Eo",
];

/// Every schema key of an example, including the parameter record.
pub const SCHEMA_FIELDS: [&str; 14] = [
    "simulation_parameters",
    "pulse_parameters",
    "time_range",
    "pulses",
    "distorted_pulses",
    "expectations",
    "Vo_operator",
    "noise",
    "H0",
    "H1",
    "U0",
    "UI",
    "Vo",
    "Eo",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DType {
    #[serde(rename = "f64")]
    Real,
    #[serde(rename = "c128")]
    Complex,
}

impl DType {
    pub fn size(self) -> usize {
        match self {
            DType::Real => 8,
            DType::Complex => 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ArrayData {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

/// Row-major n-dimensional array.
#[derive(Debug, Clone, PartialEq)]
pub struct Array {
    pub shape: Vec<usize>,
    pub data: ArrayData,
}

impl Array {
    pub fn real(shape: Vec<usize>, data: Vec<f64>) -> Result<Self> {
        Self::checked(shape, ArrayData::Real(data))
    }

    pub fn complex(shape: Vec<usize>, data: Vec<Complex64>) -> Result<Self> {
        Self::checked(shape, ArrayData::Complex(data))
    }

    fn checked(shape: Vec<usize>, data: ArrayData) -> Result<Self> {
        let a = Self { shape, data };
        if a.element_count() != a.shape.iter().product::<usize>() {
            return Err(Error::Invariant(format!(
                "array of shape {:?} holds {} elements",
                a.shape,
                a.element_count()
            )));
        }
        Ok(a)
    }

    pub fn dtype(&self) -> DType {
        match self.data {
            ArrayData::Real(_) => DType::Real,
            ArrayData::Complex(_) => DType::Complex,
        }
    }

    pub fn element_count(&self) -> usize {
        match &self.data {
            ArrayData::Real(v) => v.len(),
            ArrayData::Complex(v) => v.len(),
        }
    }

    pub fn nbytes(&self) -> usize {
        self.element_count() * self.dtype().size()
    }

    pub fn as_real(&self) -> Option<&[f64]> {
        match &self.data {
            ArrayData::Real(v) => Some(v),
            ArrayData::Complex(_) => None,
        }
    }

    pub fn as_complex(&self) -> Option<&[Complex64]> {
        match &self.data {
            ArrayData::Complex(v) => Some(v),
            ArrayData::Real(_) => None,
        }
    }
}

/// One generated example: the parameter record plus the named arrays.
#[derive(Debug, Clone, PartialEq)]
pub struct ExampleRecord {
    pub simulation_parameters: serde_json::Value,
    pub fields: Vec<(String, Array)>,
}

impl ExampleRecord {
    pub fn get(&self, name: &str) -> Option<&Array> {
        self.fields.iter().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    pub fn get_mut(&mut self, name: &str) -> Option<&mut Array> {
        self.fields.iter_mut().find(|(n, _)| n == name).map(|(_, a)| a)
    }

    /// Checks the fields against [`shape_table`], in order.
    pub fn check_shapes(&self, table: &[FieldSpec]) -> Result<()> {
        if self.fields.len() != table.len() {
            return Err(Error::Invariant(format!(
                "example has {} fields, expected {}",
                self.fields.len(),
                table.len()
            )));
        }
        for ((name, array), spec) in self.fields.iter().zip(table) {
            if name != spec.name || array.dtype() != spec.dtype || array.shape != spec.shape {
                return Err(Error::Invariant(format!(
                    "field {name} is {:?}{:?}, expected {} {:?}{:?}",
                    array.dtype(),
                    array.shape,
                    spec.name,
                    spec.dtype,
                    spec.shape
                )));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldSpec {
    pub name: &'static str,
    pub dtype: DType,
    pub shape: Vec<usize>,
}

/// Expected dtype and shape of every array field for a configuration.
///
/// `C` control channels, `P` pulses, `A` noise axes, `B` observables,
/// `Q` (state, observable) pairs, `d` Hilbert dimension.
pub fn shape_table(cfg: &DatasetConfig) -> Vec<FieldSpec> {
    let p = &cfg.params;
    let (m, k, d) = (p.n_steps, p.n_realizations, cfg.dim());
    let c = cfg.category.control_labels().len();
    let a = cfg.category.noise_labels().len();
    let (b, q) = if cfg.n_qubits() == 1 { (3, 18) } else { (15, 540) };
    let ui_steps = if p.store_full_ui { m } else { 1 };
    let spec = |name, dtype, shape: Vec<usize>| FieldSpec { name, dtype, shape };
    use DType::*;
    vec![
        spec("pulse_parameters", Real, vec![1, c, p.n_pulses, 3]),
        spec("time_range", Real, vec![1, m]),
        spec("pulses", Real, vec![1, m, c]),
        spec("distorted_pulses", Real, vec![1, m, c]),
        spec("expectations", Real, vec![1, q]),
        spec("Vo_operator", Complex, vec![b, 1, d, d]),
        spec("noise", Real, vec![1, m, k, a]),
        spec("H0", Complex, vec![1, m, d, d]),
        spec("H1", Complex, vec![1, m, k, d, d]),
        spec("U0", Complex, vec![1, m, d, d]),
        spec("UI", Complex, vec![1, ui_steps, k, d, d]),
        spec("Vo", Real, vec![1, k, q]),
        spec("Eo", Real, vec![q]),
    ]
}
