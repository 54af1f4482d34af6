//! Dense complex matrices for one and two qubits, Pauli algebra and
//! the exponentials used by the piecewise-constant propagator.
//!
//! Matrices are stored inline (no heap allocation) since the evolution
//! loop builds `M × K` of them per example.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use nalgebra::{Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Hermiticity tolerance accepted by [`unitary_step`].
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Imaginary part of a trace above which [`expectation`] refuses the input.
pub const IMAG_TRACE_TOL: f64 = 1e-6;

/// Square complex matrix of dimension 2 or 4, row-major.
#[derive(Clone, Copy, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: [Complex64; 16],
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        check_dim(dim)?;
        Ok(Self { dim, data: [ZERO; 16] })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            m.data[i * dim + i] = ONE;
        }
        Ok(m)
    }

    /// Builds a matrix from row-major entries; `entries.len()` must be 4 or 16.
    pub fn from_row_major(entries: &[Complex64]) -> Result<Self> {
        let dim = match entries.len() {
            4 => 2,
            16 => 4,
            n => {
                return Err(Error::DimensionMismatch(format!(
                    "{n} entries do not form a 2x2 or 4x4 matrix"
                )))
            }
        };
        let mut m = Self::zeros(dim)?;
        m.data[..entries.len()].copy_from_slice(entries);
        Ok(m)
    }

    pub fn from_real_rows<const N: usize>(rows: [[f64; N]; N]) -> Result<Self> {
        let mut m = Self::zeros(N)?;
        for (i, row) in rows.iter().enumerate() {
            for (j, &v) in row.iter().enumerate() {
                m.set(i, j, Complex64::new(v, 0.0));
            }
        }
        Ok(m)
    }

    pub fn diagonal(diag: &[Complex64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &v) in diag.iter().enumerate() {
            m.set(i, i, v);
        }
        Ok(m)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        debug_assert!(row < self.dim && col < self.dim);
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex64) {
        debug_assert!(row < self.dim && col < self.dim);
        self.data[row * self.dim + col] = value;
    }

    /// Entries in row-major order (the serialization order).
    pub fn entries(&self) -> &[Complex64] {
        &self.data[..self.dim * self.dim]
    }

    pub fn adjoint(&self) -> Self {
        let mut out = *self;
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.data[i * self.dim + j] = self.data[j * self.dim + i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.data[i * self.dim + i]).sum()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= factor);
        out
    }

    pub fn scale_real(&self, factor: f64) -> Self {
        let mut out = *self;
        out.data.iter_mut().for_each(|z| *z *= factor);
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Frobenius distance to the identity.
    pub fn distance_from_identity(&self) -> f64 {
        let id = Self::identity(self.dim).expect("valid dim");
        (*self - id).frobenius_norm()
    }

    pub fn hermitian_deviation(&self) -> f64 {
        (*self - self.adjoint()).frobenius_norm()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    pub fn unitarity_deviation(&self) -> f64 {
        (self.adjoint() * *self).distance_from_identity()
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    /// Hermitian, unit trace and positive semidefinite, each within `tol`.
    pub fn is_density(&self, tol: f64) -> bool {
        if !self.is_hermitian(tol) {
            return false;
        }
        let tr = self.trace();
        if (tr.re - 1.0).abs() > tol || tr.im.abs() > tol {
            return false;
        }
        hermitian_eigenvalues(self).iter().all(|&ev| ev >= -tol)
    }

    /// Inverse by Gauss-Jordan elimination with partial pivoting.
    pub fn inverse(&self) -> Option<Self> {
        let n = self.dim;
        let mut a = *self;
        let mut inv = Self::identity(n).expect("valid dim");
        let scale = self.frobenius_norm().max(f64::MIN_POSITIVE);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&r1, &r2| a.get(r1, col).norm().total_cmp(&a.get(r2, col).norm()))
                .expect("non-empty range");
            if a.get(pivot, col).norm() <= 1e-13 * scale {
                return None;
            }
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).inv();
            for j in 0..n {
                a.data[col * n + j] *= p;
                inv.data[col * n + j] *= p;
            }
            for row in 0..n {
                if row == col {
                    continue;
                }
                let factor = a.get(row, col);
                if factor == ZERO {
                    continue;
                }
                for j in 0..n {
                    let av = a.data[col * n + j];
                    let iv = inv.data[col * n + j];
                    a.data[row * n + j] -= factor * av;
                    inv.data[row * n + j] -= factor * iv;
                }
            }
        }
        Some(inv)
    }

    fn assert_same_dim(&self, other: &Self) {
        assert_eq!(
            self.dim, other.dim,
            "matrix dimension mismatch ({} vs {})",
            self.dim, other.dim
        );
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self.get(i, j);
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl Add for ComplexMatrix {
    type Output = Self;
    fn add(mut self, rhs: Self) -> Self {
        self.assert_same_dim(&rhs);
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a += b;
        }
        self
    }
}

impl AddAssign for ComplexMatrix {
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl Sub for ComplexMatrix {
    type Output = Self;
    fn sub(mut self, rhs: Self) -> Self {
        self.assert_same_dim(&rhs);
        for (a, b) in self.data.iter_mut().zip(rhs.data.iter()) {
            *a -= b;
        }
        self
    }
}

impl Neg for ComplexMatrix {
    type Output = Self;
    fn neg(self) -> Self {
        self.scale_real(-1.0)
    }
}

impl Mul for ComplexMatrix {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.assert_same_dim(&rhs);
        let n = self.dim;
        let mut out = Self { dim: n, data: [ZERO; 16] };
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        out
    }
}

fn check_dim(dim: usize) -> Result<()> {
    match dim {
        2 | 4 => Ok(()),
        d => Err(Error::DimensionMismatch(format!("dimension {d} is not 2 or 4"))),
    }
}

/// Single-qubit Pauli axis; `I` is the identity σ₀.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Axis {
    I,
    X,
    Y,
    Z,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::I, Axis::X, Axis::Y, Axis::Z];
    pub const NON_IDENTITY: [Axis; 3] = [Axis::X, Axis::Y, Axis::Z];

    pub fn letter(self) -> char {
        match self {
            Axis::I => 'I',
            Axis::X => 'X',
            Axis::Y => 'Y',
            Axis::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'I' => Some(Axis::I),
            'X' => Some(Axis::X),
            'Y' => Some(Axis::Y),
            'Z' => Some(Axis::Z),
            _ => None,
        }
    }

    pub fn matrix(self) -> ComplexMatrix {
        let (a, b, c, d) = match self {
            Axis::I => (ONE, ZERO, ZERO, ONE),
            Axis::X => (ZERO, ONE, ONE, ZERO),
            Axis::Y => (ZERO, -I, I, ZERO),
            Axis::Z => (ONE, ZERO, ZERO, -ONE),
        };
        ComplexMatrix::from_row_major(&[a, b, c, d]).expect("2x2")
    }
}

/// A one-qubit Pauli or a two-qubit tensor Pauli `first ⊗ second`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PauliLabel {
    Single(Axis),
    Pair(Axis, Axis),
}

impl PauliLabel {
    pub fn n_qubits(self) -> usize {
        match self {
            PauliLabel::Single(_) => 1,
            PauliLabel::Pair(..) => 2,
        }
    }

    pub fn is_identity(self) -> bool {
        matches!(
            self,
            PauliLabel::Single(Axis::I) | PauliLabel::Pair(Axis::I, Axis::I)
        )
    }

    /// Letter string, e.g. `"X"` or `"IZ"` (left letter acts on the first qubit).
    pub fn token(self) -> String {
        match self {
            PauliLabel::Single(a) => a.letter().to_string(),
            PauliLabel::Pair(a, b) => format!("{}{}", a.letter(), b.letter()),
        }
    }

    pub fn from_token(token: &str) -> Option<Self> {
        let mut chars = token.chars();
        match (chars.next(), chars.next(), chars.next()) {
            (Some(a), None, None) => Axis::from_letter(a).map(PauliLabel::Single),
            (Some(a), Some(b), None) => {
                Some(PauliLabel::Pair(Axis::from_letter(a)?, Axis::from_letter(b)?))
            }
            _ => None,
        }
    }
}

impl fmt::Display for PauliLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

pub fn pauli_matrix(label: PauliLabel) -> ComplexMatrix {
    match label {
        PauliLabel::Single(a) => a.matrix(),
        PauliLabel::Pair(a, b) => tensor_product(&a.matrix(), &b.matrix()).expect("2x2 factors"),
    }
}

/// Kronecker product of two 2×2 matrices, `a` as the left factor.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.dim != 2 || b.dim != 2 {
        return Err(Error::DimensionMismatch(format!(
            "tensor product needs two 2x2 factors, got {}x{} and {}x{}",
            a.dim, a.dim, b.dim, b.dim
        )));
    }
    let mut out = ComplexMatrix::zeros(4)?;
    for i in 0..2 {
        for j in 0..2 {
            let aij = a.get(i, j);
            for k in 0..2 {
                for l in 0..2 {
                    out.set(2 * i + k, 2 * j + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// `exp(-i·h·dt)` for Hermitian `h`.
///
/// Two-level generators go through the SU(2) closed form
/// `e^{-i a₀ dt}(cos θ·I − i sin θ·n̂·σ)`; four-level ones through a
/// Hermitian eigendecomposition.
pub fn unitary_step(h: &ComplexMatrix, dt: f64) -> Result<ComplexMatrix> {
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::InvalidConfig(format!("time step must be positive, got {dt}")));
    }
    let deviation = h.hermitian_deviation();
    if !(deviation <= HERMITIAN_TOL) {
        return Err(Error::NotHermitian { deviation });
    }
    Ok(match h.dim {
        2 => exp_su2(h, dt),
        _ => exp_hermitian4(h, dt),
    })
}

fn exp_su2(h: &ComplexMatrix, dt: f64) -> ComplexMatrix {
    // h = a0·I + ax·σx + ay·σy + az·σz with a_i = Tr(h σ_i)/2
    let a0 = 0.5 * (h.get(0, 0).re + h.get(1, 1).re);
    let az = 0.5 * (h.get(0, 0).re - h.get(1, 1).re);
    let ax = 0.5 * (h.get(0, 1).re + h.get(1, 0).re);
    let ay = 0.5 * (h.get(1, 0).im - h.get(0, 1).im);
    let r = (ax * ax + ay * ay + az * az).sqrt();
    let theta = r * dt;
    let (s, c) = theta.sin_cos();
    // sin(θ)/r, finite as r → 0
    let k = if r > 0.0 { s / r } else { dt };
    let (nx, ny, nz) = (ax * k, ay * k, az * k);
    let phase = Complex64::from_polar(1.0, -a0 * dt);
    // cos θ·I − i(nx σx + ny σy + nz σz)
    let u = [
        Complex64::new(c, -nz),
        Complex64::new(-ny, -nx),
        Complex64::new(ny, -nx),
        Complex64::new(c, nz),
    ];
    ComplexMatrix::from_row_major(&u).expect("2x2").scale(phase)
}

fn to_nalgebra4(h: &ComplexMatrix) -> Matrix4<Complex64> {
    // symmetrize so the eigensolver sees an exactly Hermitian input
    let sym = (*h + h.adjoint()).scale_real(0.5);
    Matrix4::from_fn(|i, j| sym.get(i, j))
}

fn exp_hermitian4(h: &ComplexMatrix, dt: f64) -> ComplexMatrix {
    let eig = SymmetricEigen::new(to_nalgebra4(h));
    let v = eig.eigenvectors;
    let phases: Vec<Complex64> = eig
        .eigenvalues
        .iter()
        .map(|&lambda| Complex64::from_polar(1.0, -lambda * dt))
        .collect();
    let mut out = ComplexMatrix::zeros(4).expect("4x4");
    for i in 0..4 {
        for j in 0..4 {
            let z = (0..4).map(|k| v[(i, k)] * phases[k] * v[(j, k)].conj()).sum();
            out.set(i, j, z);
        }
    }
    out
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Vec<f64> {
    let mut evs: Vec<f64> = if m.dim == 2 {
        let sym = (*m + m.adjoint()).scale_real(0.5);
        let a = sym.get(0, 0).re;
        let d = sym.get(1, 1).re;
        let b = sym.get(0, 1);
        let mean = 0.5 * (a + d);
        let rad = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
        vec![mean - rad, mean + rad]
    } else {
        SymmetricEigen::new(to_nalgebra4(m)).eigenvalues.iter().copied().collect()
    };
    evs.sort_by(f64::total_cmp);
    evs
}

/// Complex trace of a product, `Tr(a·b)`, without forming the product.
pub fn trace_of_product(a: &ComplexMatrix, b: &ComplexMatrix) -> Complex64 {
    a.assert_same_dim(b);
    let n = a.dim;
    let mut acc = ZERO;
    for i in 0..n {
        for k in 0..n {
            acc += a.data[i * n + k] * b.data[k * n + i];
        }
    }
    acc
}

/// `Re Tr(ρ·O)`; refuses traces whose imaginary part reaches [`IMAG_TRACE_TOL`].
pub fn expectation(rho: &ComplexMatrix, obs: &ComplexMatrix) -> Result<f64> {
    if rho.dim != obs.dim {
        return Err(Error::DimensionMismatch(format!(
            "state is {}x{}, observable is {}x{}",
            rho.dim, rho.dim, obs.dim, obs.dim
        )));
    }
    real_trace(trace_of_product(rho, obs))
}

pub(crate) fn real_trace(tr: Complex64) -> Result<f64> {
    if !(tr.im.abs() < IMAG_TRACE_TOL) {
        return Err(Error::ComplexExpectation { imag: tr.im });
    }
    Ok(tr.re)
}

/// Density matrices `((I + σ)/2, (I − σ)/2)` of the ± eigenstates of a Pauli axis.
pub fn pauli_eigenstates(axis: Axis) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if axis == Axis::I {
        return Err(Error::InvalidConfig("identity has no eigenstate pair".into()));
    }
    let id = ComplexMatrix::identity(2)?;
    let s = axis.matrix();
    Ok(((id + s).scale_real(0.5), (id - s).scale_real(0.5)))
}
