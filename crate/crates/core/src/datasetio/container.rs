//! Binary example container.
//!
//! ```text
//! "QDS1" | version: u32 LE | manifest length: u64 LE | manifest (UTF-8 JSON) | payload
//! ```
//!
//! The manifest lists each field's name, dtype (`f64` or `c128`), shape and
//! byte offset into the payload. Arrays are row-major little-endian; complex
//! values are interleaved (re, im) pairs.

use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::record::{Array, ArrayData, DType, ExampleRecord};

pub const MAGIC: &[u8; 4] = b"QDS1";
pub const FORMAT_VERSION: u32 = 1;
const HEADER_LEN: usize = 16;

#[derive(Debug, Error)]
pub enum ContainerError {
    #[error("corrupt manifest: {0}")]
    CorruptManifest(String),
    #[error("truncated payload: need {expected} bytes, found {actual}")]
    TruncatedPayload { expected: usize, actual: usize },
    #[error("unknown container version {0}")]
    UnknownVersion(u32),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FieldEntry {
    pub name: String,
    pub dtype: DType,
    pub shape: Vec<usize>,
    pub offset: usize,
    pub nbytes: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExampleManifest {
    pub format: String,
    pub version: u32,
    pub simulation_parameters: serde_json::Value,
    pub fields: Vec<FieldEntry>,
}

pub fn encode_example(record: &ExampleRecord) -> Vec<u8> {
    let mut offset = 0;
    let fields = record
        .fields
        .iter()
        .map(|(name, a)| {
            let e = FieldEntry {
                name: name.clone(),
                dtype: a.dtype(),
                shape: a.shape.clone(),
                offset,
                nbytes: a.nbytes(),
            };
            offset += e.nbytes;
            e
        })
        .collect();
    let manifest = ExampleManifest {
        format: "QDS1".into(),
        version: FORMAT_VERSION,
        simulation_parameters: record.simulation_parameters.clone(),
        fields,
    };
    let manifest = serde_json::to_vec(&manifest).expect("manifest serializes");

    let mut out = Vec::with_capacity(HEADER_LEN + manifest.len() + offset);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&FORMAT_VERSION.to_le_bytes());
    out.extend_from_slice(&(manifest.len() as u64).to_le_bytes());
    out.extend_from_slice(&manifest);
    for (_, a) in &record.fields {
        match &a.data {
            ArrayData::Real(v) => v.iter().for_each(|x| out.extend_from_slice(&x.to_le_bytes())),
            ArrayData::Complex(v) => v.iter().for_each(|z| {
                out.extend_from_slice(&z.re.to_le_bytes());
                out.extend_from_slice(&z.im.to_le_bytes());
            }),
        }
    }
    out
}

pub fn write_example<W: Write>(record: &ExampleRecord, mut sink: W) -> Result<(), ContainerError> {
    sink.write_all(&encode_example(record))?;
    Ok(())
}

pub fn read_example<R: Read>(mut source: R) -> Result<ExampleRecord, ContainerError> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    decode_example(&bytes)
}

/// Parses and validates the header and manifest without touching the payload.
pub fn decode_manifest(bytes: &[u8]) -> Result<(ExampleManifest, usize), ContainerError> {
    if bytes.len() < HEADER_LEN {
        return Err(ContainerError::TruncatedPayload { expected: HEADER_LEN, actual: bytes.len() });
    }
    if &bytes[..4] != MAGIC {
        return Err(ContainerError::CorruptManifest("bad magic".into()));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    if version != FORMAT_VERSION {
        return Err(ContainerError::UnknownVersion(version));
    }
    let manifest_len = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes"));
    let manifest_end = usize::try_from(manifest_len)
        .ok()
        .and_then(|l| l.checked_add(HEADER_LEN))
        .ok_or_else(|| ContainerError::CorruptManifest("manifest length overflows".into()))?;
    if bytes.len() < manifest_end {
        return Err(ContainerError::TruncatedPayload { expected: manifest_end, actual: bytes.len() });
    }
    let manifest: ExampleManifest = serde_json::from_slice(&bytes[HEADER_LEN..manifest_end])
        .map_err(|e| ContainerError::CorruptManifest(e.to_string()))?;
    if manifest.version != version || manifest.format != "QDS1" {
        return Err(ContainerError::CorruptManifest(format!(
            "manifest declares {} v{}",
            manifest.format, manifest.version
        )));
    }

    let mut expected_offset = 0usize;
    for f in &manifest.fields {
        let count = f
            .shape
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(d))
            .and_then(|n| n.checked_mul(f.dtype.size()))
            .ok_or_else(|| ContainerError::CorruptManifest(format!("field {} is too large", f.name)))?;
        if count != f.nbytes {
            return Err(ContainerError::CorruptManifest(format!(
                "field {}: shape {:?} needs {count} bytes, manifest says {}",
                f.name, f.shape, f.nbytes
            )));
        }
        if f.offset != expected_offset {
            return Err(ContainerError::CorruptManifest(format!(
                "field {} at offset {}, expected {expected_offset}",
                f.name, f.offset
            )));
        }
        expected_offset += f.nbytes;
    }
    let payload_len = bytes.len() - manifest_end;
    if payload_len < expected_offset {
        return Err(ContainerError::TruncatedPayload { expected: expected_offset, actual: payload_len });
    }
    if payload_len > expected_offset {
        return Err(ContainerError::CorruptManifest(format!(
            "{} trailing bytes after the last field",
            payload_len - expected_offset
        )));
    }
    Ok((manifest, manifest_end))
}

pub fn decode_example(bytes: &[u8]) -> Result<ExampleRecord, ContainerError> {
    let (manifest, start) = decode_manifest(bytes)?;
    let payload = &bytes[start..];
    let f64_at = |i: usize| f64::from_le_bytes(payload[i..i + 8].try_into().expect("8 bytes"));
    let fields = manifest
        .fields
        .into_iter()
        .map(|f| {
            let range = f.offset..f.offset + f.nbytes;
            let data = match f.dtype {
                DType::Real => ArrayData::Real(range.step_by(8).map(f64_at).collect()),
                DType::Complex => ArrayData::Complex(
                    range.step_by(16).map(|i| Complex64::new(f64_at(i), f64_at(i + 8))).collect(),
                ),
            };
            (f.name, Array { shape: f.shape, data })
        })
        .collect();
    Ok(ExampleRecord { simulation_parameters: manifest.simulation_parameters, fields })
}
