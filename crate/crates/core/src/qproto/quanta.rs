//! Amplitude granularity: rounding amplitudes to a grain, dropping
//! sub-grain amplitudes during evolution, and splitting amplitudes into
//! quanta whose transitions under an operator are fixed in advance.

use crate::error::{Error, Result};
use crate::linalg::{c, CMat, CVec, ZERO};
use crate::qstate::Ket;
use nalgebra::DMatrix;
use num_complex::Complex64;

/// `{z} = |Re z| + |Im z|`.
pub fn l1(z: Complex64) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Amplitudes stored as integer multiples of a grain: `λ_j ≈ ε(n_j + i m_j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrainedState {
    pub eps: f64,
    pub dims: Vec<usize>,
    pub pairs: Vec<(i64, i64)>,
}

impl GrainedState {
    /// `Σ ε(n_j + i m_j)|j⟩`, not normalized.
    pub fn reconstruct(&self) -> CVec {
        CVec::from_iterator(
            self.pairs.len(),
            self.pairs.iter().map(|&(n, m)| c(self.eps * n as f64, self.eps * m as f64)),
        )
    }

    pub fn to_ket(&self) -> Result<Ket> {
        Ket::new(self.dims.clone(), self.reconstruct())?.normalized()
    }

    /// Basis states carrying a nonzero pair.
    pub fn support(&self) -> usize {
        self.pairs.iter().filter(|&&p| p != (0, 0)).count()
    }
}

/// Number of grains `[1/ε²]` and the matching qubit capacity `log₂` of it.
pub fn capacity(eps: f64) -> (u64, f64) {
    let k = (1.0 / (eps * eps)).floor() as u64;
    (k, (k as f64).log2())
}

/// Nearest-integer rounding of each real and imaginary part.
pub fn quantize_state(psi: &Ket, eps: f64) -> Result<GrainedState> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::BadParams(format!("grain must be positive, got {eps}")));
    }
    let pairs: Vec<(i64, i64)> = psi
        .amps()
        .iter()
        .map(|a| ((a.re / eps).round() as i64, (a.im / eps).round() as i64))
        .collect();
    if pairs.iter().all(|&p| p == (0, 0)) {
        return Err(Error::AllZero);
    }
    Ok(GrainedState { eps, dims: psi.dims().to_vec(), pairs })
}

fn truncate(amps: &mut CVec, eps: f64) -> Result<()> {
    for a in amps.iter_mut() {
        if a.norm() < eps {
            *a = ZERO;
        }
    }
    let n = amps.norm();
    if n == 0.0 {
        return Err(Error::AllTruncated);
    }
    *amps /= c(n, 0.0);
    Ok(())
}

/// Applies `u`, zeroes amplitudes with `|λ| < ε` and renormalizes.
pub fn granular_evolve(psi: &Ket, u: &CMat, eps: f64) -> Result<Ket> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::BadParams(format!("grain must lie in (0, 1), got {eps}")));
    }
    if u.shape() != (psi.dim(), psi.dim()) {
        return Err(Error::DimensionMismatch(format!(
            "operator {:?} on state of dimension {}",
            u.shape(),
            psi.dim()
        )));
    }
    let mut amps = u * psi.amps();
    truncate(&mut amps, eps)?;
    psi.with_amps(amps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GranularGrover {
    /// Granular iterations until only the target survives, if reached.
    pub iterations: Option<usize>,
    /// Target probability after the last granular iteration.
    pub success_prob: f64,
    /// Standard Grover count `⌊π/(4θ)⌋` for comparison.
    pub standard_iterations: usize,
    /// Target probability of standard Grover after `standard_iterations`.
    pub standard_prob: f64,
}

/// Grover search for one `target` on `n` qubits where each iteration is
/// followed by grain truncation. Stops when the target is the only
/// surviving amplitude or after `max_iter` iterations.
pub fn granular_grover(n: usize, target: usize, eps: f64, max_iter: usize) -> Result<GranularGrover> {
    let size = 1usize << n;
    if target >= size {
        return Err(Error::IndexOutOfRange { index: target, limit: size });
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::BadParams(format!("grain must lie in (0, 1), got {eps}")));
    }
    let step = |v: &mut CVec| {
        v[target] = -v[target];
        let mean = v.sum() / size as f64;
        for a in v.iter_mut() {
            *a = mean * 2.0 - *a;
        }
    };
    let start = CVec::from_element(size, c(1.0 / (size as f64).sqrt(), 0.0));
    let theta = (1.0 / (size as f64).sqrt()).asin();
    let standard_iterations = (std::f64::consts::FRAC_PI_4 / theta).floor() as usize;
    let mut v = start.clone();
    for _ in 0..standard_iterations {
        step(&mut v);
    }
    let standard_prob = v[target].norm_sqr();

    let mut v = start;
    let mut iterations = None;
    for k in 1..=max_iter {
        step(&mut v);
        truncate(&mut v, eps)?;
        if v.iter().enumerate().all(|(i, a)| i == target || *a == ZERO) {
            iterations = Some(k);
            break;
        }
    }
    Ok(GranularGrover {
        iterations,
        success_prob: v[target].norm_sqr(),
        standard_iterations,
        standard_prob,
    })
}

const SUPPORT_TOL: f64 = 1e-12;

fn column_weights(a: &CMat, psi: &CVec) -> Vec<(usize, f64)> {
    (0..psi.len())
        .filter(|&j| psi[j].norm() > SUPPORT_TOL)
        .map(|j| (j, a.column(j).iter().map(|&z| l1(z)).sum()))
        .collect()
}

/// True when `{A|j⟩}` agrees (within 1e-9) over the support of `ψ`.
pub fn equilibrium_check(a: &CMat, psi: &Ket) -> bool {
    if a.ncols() != psi.dim() {
        return false;
    }
    let w = column_weights(a, psi.amps());
    w.iter().all(|&(_, x)| (x - w[0].1).abs() <= 1e-9)
}

/// One of `+1, +i, −1, −i`, stored as the power of `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuantumType(u8);

impl QuantumType {
    pub const PLUS: Self = QuantumType(0);
    pub const PLUS_I: Self = QuantumType(1);
    pub const MINUS: Self = QuantumType(2);
    pub const MINUS_I: Self = QuantumType(3);

    fn real(sign_negative: bool) -> Self {
        if sign_negative {
            Self::MINUS
        } else {
            Self::PLUS
        }
    }

    fn imag(sign_negative: bool) -> Self {
        if sign_negative {
            Self::MINUS_I
        } else {
            Self::PLUS_I
        }
    }

    pub fn times(self, other: Self) -> Self {
        QuantumType((self.0 + other.0) % 4)
    }

    pub fn negated(self) -> Self {
        QuantumType((self.0 + 2) % 4)
    }

    pub fn value(self) -> Complex64 {
        [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0), c(0.0, -1.0)][self.0 as usize]
    }
}

/// `count` quanta with consecutive ids sharing all other attributes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuantaGroup {
    pub id_start: u64,
    pub count: u64,
    pub b_in: usize,
    pub b_fin: usize,
    pub t_in: QuantumType,
    pub t_fin: QuantumType,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantaSet {
    /// Size of a single quantum.
    pub size: f64,
    pub groups: Vec<QuantaGroup>,
}

impl QuantaSet {
    pub fn len(&self) -> u64 {
        self.groups.iter().map(|g| g.count).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// No two quanta with the same state transition, equal `t_in` and
    /// opposite `t_fin`; no two quanta on the same `b_in` with opposite `t_in`.
    pub fn condition_q(&self) -> bool {
        let live: Vec<&QuantaGroup> = self.groups.iter().filter(|g| g.count > 0).collect();
        for (k, g) in live.iter().enumerate() {
            for h in &live[k..] {
                if g.b_in == h.b_in && g.t_in == h.t_in.negated() {
                    return false;
                }
                if g.b_in == h.b_in
                    && g.b_fin == h.b_fin
                    && g.t_in == h.t_in
                    && g.t_fin == h.t_fin.negated()
                {
                    return false;
                }
            }
        }
        true
    }

    /// `(θ_in, θ_fin)`: `θ_in` carries the quantum size, `θ_fin` is
    /// normalized.
    pub fn states(&self, dim: usize) -> (CVec, CVec) {
        let mut t_in = CVec::zeros(dim);
        let mut t_fin = CVec::zeros(dim);
        for g in &self.groups {
            t_in[g.b_in] += g.t_in.value() * (g.count as f64 * self.size);
            t_fin[g.b_fin] += g.t_fin.value() * g.count as f64;
        }
        let n = t_fin.norm();
        if n > 0.0 {
            t_fin /= c(n, 0.0);
        }
        (t_in, t_fin)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Quantization {
    /// Grain of the amplitude and matrix expansions.
    pub eps: f64,
    /// Grains per column of the matrix expansion.
    pub nu: u64,
    pub set: QuantaSet,
    pub theta_in: CVec,
    pub theta_fin: CVec,
    /// `n_ij`: number of quanta moving `j → i`.
    pub counts: DMatrix<u64>,
    /// `‖θ_in − ψ‖`.
    pub in_error: f64,
    /// `‖θ_fin − Aψ/‖Aψ‖‖`.
    pub fin_error: f64,
    /// `max |ε² n_ij − {λ_j}{A_ij}| / ({λ_j}{A_ij})` over nonzero targets.
    pub agreement_error: f64,
}

/// Splits `ν` grains over the parts `x_k ≥ 0` (in grains) by largest remainder.
fn apportion(x: &[f64], nu: u64) -> Vec<u64> {
    let mut out: Vec<u64> = x.iter().map(|v| v.floor() as u64).collect();
    let assigned: u64 = out.iter().sum();
    let mut order: Vec<usize> = (0..x.len()).collect();
    order.sort_by(|&a, &b| (x[b] - x[b].floor()).total_cmp(&(x[a] - x[a].floor())));
    for &k in order.iter().take(nu.saturating_sub(assigned) as usize) {
        out[k] += 1;
    }
    out
}

/// Builds a quantization of the amplitudes of `ψ` consistent with `a`.
///
/// Each amplitude is written as `M_j` real and `N_j` imaginary grains of
/// size `ε`. Column `j` of `a` is written as `R_ij` real and `I_ij`
/// imaginary grains, apportioned so that every column has the same total
/// `ν = round({A|j⟩}/ε)`. Each amplitude grain splits into `ν` quanta of
/// size `ε/ν`, matched one-to-one with the grains of column `j`; a quantum
/// matched to a grain in row `i` moves `j → i` and its type is multiplied by
/// the grain's type.
pub fn amplitude_quantization(a: &CMat, psi: &Ket, eps: f64) -> Result<Quantization> {
    let dim = psi.dim();
    if a.shape() != (dim, dim) {
        return Err(Error::DimensionMismatch(format!(
            "operator {:?} on state of dimension {dim}",
            a.shape()
        )));
    }
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::BadParams(format!("grain must be positive, got {eps}")));
    }
    if !equilibrium_check(a, psi) {
        return Err(Error::NotEquilibrium);
    }
    let lambda = psi.amps();
    let weights = column_weights(a, lambda);
    let weight = weights.iter().map(|w| w.1).sum::<f64>() / weights.len() as f64;
    let nu = (weight / eps).round() as u64;
    if nu == 0 {
        return Err(Error::AllZero);
    }

    let mut groups = Vec::new();
    let mut counts = DMatrix::<u64>::zeros(dim, dim);
    let mut next_id = 0u64;
    for &(j, _) in &weights {
        let lj = lambda[j];
        let m_j = (lj.re.abs() / eps).round() as u64;
        let n_j = (lj.im.abs() / eps).round() as u64;
        if m_j + n_j == 0 {
            continue;
        }
        let parts: Vec<f64> = (0..dim)
            .flat_map(|i| [a[(i, j)].re.abs() / eps, a[(i, j)].im.abs() / eps])
            .collect();
        let grains = apportion(&parts, nu);
        let sources = [(m_j, QuantumType::real(lj.re < 0.0)), (n_j, QuantumType::imag(lj.im < 0.0))];
        for (i, row) in grains.chunks(2).enumerate() {
            let aij = a[(i, j)];
            counts[(i, j)] = (m_j + n_j) * (row[0] + row[1]);
            let targets = [(row[0], QuantumType::real(aij.re < 0.0)), (row[1], QuantumType::imag(aij.im < 0.0))];
            for &(occ, t_in) in &sources {
                for &(r, t_mat) in &targets {
                    let count = occ * r;
                    if count == 0 {
                        continue;
                    }
                    groups.push(QuantaGroup {
                        id_start: next_id,
                        count,
                        b_in: j,
                        b_fin: i,
                        t_in,
                        t_fin: t_in.times(t_mat),
                    });
                    next_id += count;
                }
            }
        }
    }
    if groups.is_empty() {
        return Err(Error::AllZero);
    }
    let set = QuantaSet { size: eps / nu as f64, groups };
    debug_assert!(set.condition_q());
    let (theta_in, theta_fin) = set.states(dim);

    let exact = a * lambda;
    let exact_norm = exact.norm();
    let fin_error = if exact_norm > 0.0 {
        (&theta_fin - exact / c(exact_norm, 0.0)).norm()
    } else {
        f64::INFINITY
    };
    let mut agreement_error: f64 = 0.0;
    for &(j, _) in &weights {
        for i in 0..dim {
            let want = l1(lambda[j]) * l1(a[(i, j)]);
            if want > 0.0 {
                let got = eps * eps * counts[(i, j)] as f64;
                agreement_error = agreement_error.max((got - want).abs() / want);
            }
        }
    }
    Ok(Quantization {
        eps,
        nu,
        in_error: (&theta_in - lambda).norm(),
        fin_error,
        agreement_error,
        set,
        theta_in,
        theta_fin,
        counts,
    })
}
