//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use num_complex::Complex64;
use qsf::qcore::ComplexMatrix;

pub type Dense = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn to_dense(m: &ComplexMatrix) -> Dense {
    let d = m.dim();
    (0..d).map(|i| (0..d).map(|j| m.get(i, j)).collect()).collect()
}

pub fn from_dense(a: &Dense) -> ComplexMatrix {
    let flat: Vec<Complex64> = a.iter().flatten().copied().collect();
    ComplexMatrix::from_row_major(&flat).unwrap()
}

pub fn dense_mul(a: &Dense, b: &Dense) -> Dense {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for k in 0..n {
            for j in 0..n {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

pub fn dense_dagger(a: &Dense) -> Dense {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| a[j][i].conj()).collect()).collect()
}

pub fn dense_trace(a: &Dense) -> Complex64 {
    (0..a.len()).map(|i| a[i][i]).sum()
}

pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    a.entries()
        .iter()
        .zip(b.entries())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `exp(-i h dt)` by scaling and squaring of a truncated Taylor series.
pub fn expm_oracle(h: &ComplexMatrix, dt: f64) -> ComplexMatrix {
    let a0 = to_dense(h);
    let n = a0.len();
    let norm: f64 = a0.iter().flatten().map(|z| z.norm()).sum::<f64>() * dt;
    let squarings = (norm.max(1.0).log2().ceil() as i32 + 4).max(0);
    let scale = dt / 2f64.powi(squarings);
    let a: Dense = a0.iter().map(|r| r.iter().map(|z| z * c(0.0, -scale)).collect()).collect();
    let mut result: Dense = (0..n).map(|i| (0..n).map(|j| c(if i == j { 1.0 } else { 0.0 }, 0.0)).collect()).collect();
    let mut term = result.clone();
    for k in 1..30 {
        term = dense_mul(&term, &a);
        term.iter_mut().flatten().for_each(|z| *z /= k as f64);
        for i in 0..n {
            for j in 0..n {
                result[i][j] += term[i][j];
            }
        }
    }
    for _ in 0..squarings {
        result = dense_mul(&result, &result);
    }
    from_dense(&result)
}

/// `|Σ_j x_j e^{-2πi m j / M}|²` for m = 0..M/2, by direct summation.
pub fn naive_dft_power(x: &[f64]) -> Vec<f64> {
    let n = x.len();
    let twiddle: Vec<Complex64> = (0..n)
        .map(|i| Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI * i as f64 / n as f64))
        .collect();
    (0..=n / 2)
        .map(|m| {
            let mut acc = c(0.0, 0.0);
            for (j, &v) in x.iter().enumerate() {
                acc += twiddle[m * j % n] * v;
            }
            acc.norm_sqr()
        })
        .collect()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

/// Population variance.
pub fn variance(xs: &[f64]) -> f64 {
    let m = mean(xs);
    xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / xs.len() as f64
}

pub fn skewness(xs: &[f64]) -> f64 {
    let m = mean(xs);
    let v = variance(xs);
    xs.iter().map(|x| (x - m).powi(3)).sum::<f64>() / xs.len() as f64 / v.powf(1.5)
}

/// Column `j` across realizations.
pub fn column(samples: &[Vec<f64>], j: usize) -> Vec<f64> {
    samples.iter().map(|s| s[j]).collect()
}

/// Rewrites one zip entry through `edit`, keeping every other entry as is.
pub fn rewrite_zip_entry(path: &Path, entry: &str, edit: impl FnOnce(&mut Vec<u8>)) {
    let mut src = zip::ZipArchive::new(File::open(path).unwrap()).unwrap();
    let mut entries = Vec::new();
    for i in 0..src.len() {
        let mut f = src.by_index(i).unwrap();
        let mut bytes = Vec::new();
        f.read_to_end(&mut bytes).unwrap();
        entries.push((f.name().to_string(), bytes));
    }
    drop(src);
    let mut edit = Some(edit);
    let mut w = zip::ZipWriter::new(File::create(path).unwrap());
    for (name, mut bytes) in entries {
        if name == entry {
            (edit.take().unwrap())(&mut bytes);
        }
        w.start_file(name.as_str(), zip::write::SimpleFileOptions::default()).unwrap();
        w.write_all(&bytes).unwrap();
    }
    w.finish().unwrap();
}

/// Byte offset of `field` inside an encoded example.
pub fn field_offset(bytes: &[u8], field: &str) -> usize {
    let (manifest, start) = qsf::datasetio::decode_manifest(bytes).unwrap();
    let f = manifest.fields.iter().find(|f| f.name == field).unwrap();
    start + f.offset
}
