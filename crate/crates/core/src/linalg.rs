//! Dense complex linear-algebra helpers shared by every module.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `e^{iφ}`.
#[inline]
pub fn cis(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, phi)
}

pub fn identity(n: usize) -> CMat {
    CMat::identity(n, n)
}

pub fn from_real(m: &DMatrix<f64>) -> CMat {
    m.map(|x| c(x, 0.0))
}

pub fn diag(entries: &[Complex64]) -> CMat {
    CMat::from_diagonal(&CVec::from_column_slice(entries))
}

pub fn diag_real(entries: &[f64]) -> CMat {
    CMat::from_fn(entries.len(), entries.len(), |i, j| {
        if i == j {
            c(entries[i], 0.0)
        } else {
            ZERO
        }
    })
}

pub fn kron(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Largest singular value.
pub fn spectral_norm(m: &CMat) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |acc, &s| acc.max(s))
}

pub fn hermiticity_defect(m: &CMat) -> f64 {
    (m - m.adjoint()).camax()
}

pub fn unitarity_defect(m: &CMat) -> f64 {
    let n = m.nrows();
    (m.adjoint() * m - CMat::identity(n, n)).camax()
}

pub fn commutator(a: &CMat, b: &CMat) -> CMat {
    a * b - b * a
}

/// Eigendecomposition of a Hermitian matrix with eigenvalues in ascending
/// order; eigenvectors are the columns of the returned matrix.
#[derive(Debug, Clone)]
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMat,
}

impl Eigh {
    pub fn new(h: &CMat) -> Self {
        let sym = (h + h.adjoint()).scale(0.5);
        let n = sym.nrows();
        let eig = SymmetricEigen::new(sym);
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
        let vectors = CMat::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
        Eigh { values, vectors }
    }

    /// `f(H) = V diag(f(λ)) V†`.
    pub fn apply_fn(&self, f: impl Fn(f64) -> Complex64) -> CMat {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            let fj = f(self.values[j]);
            for i in 0..n {
                scaled[(i, j)] *= fj;
            }
        }
        scaled * self.vectors.adjoint()
    }

    /// `exp(-iHt)`.
    pub fn propagator(&self, t: f64) -> CMat {
        self.apply_fn(|e| cis(-e * t))
    }

    /// `exp(-iHt) ψ` without forming the propagator matrix.
    pub fn evolve(&self, psi: &CVec, t: f64) -> CVec {
        let mut coeffs = self.vectors.adjoint() * psi;
        for (k, a) in coeffs.iter_mut().enumerate() {
            *a *= cis(-self.values[k] * t);
        }
        &self.vectors * coeffs
    }
}

/// `exp(-iHt)` for Hermitian `H`.
pub fn expm_hermitian(h: &CMat, t: f64) -> CMat {
    Eigh::new(h).propagator(t)
}

/// Principal matrix logarithm of a positive semidefinite Hermitian matrix;
/// `None` when an eigenvalue is not strictly positive.
pub fn logm_psd(m: &CMat, floor: f64) -> Option<CMat> {
    let e = Eigh::new(m);
    if e.values.iter().any(|&v| v <= floor) {
        return None;
    }
    Some(e.apply_fn(|v| c(v.ln(), 0.0)))
}

pub fn inner(a: &CVec, b: &CVec) -> Complex64 {
    a.dotc(b)
}

pub fn norm(v: &CVec) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Strides of a mixed-radix register with the first subsystem most significant.
pub fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        s[i] = s[i + 1] * dims[i + 1];
    }
    s
}

/// Mixed-radix digits of `index`.
pub fn digits(index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    let mut rest = index;
    for i in (0..dims.len()).rev() {
        out[i] = rest % dims[i];
        rest /= dims[i];
    }
    out
}

pub fn join_digits(digits: &[usize], dims: &[usize]) -> usize {
    digits
        .iter()
        .zip(dims)
        .fold(0, |acc, (&d, &n)| acc * n + d)
}
