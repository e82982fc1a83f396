//! State vectors and density operators over mixed-dimension registers.
//!
//! Basis states are ordered lexicographically with the first subsystem most
//! significant, so `|a₀a₁…⟩` has index `a₀·d₁d₂… + a₁·d₂… + …`.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, CVec, Eigh, ONE, ZERO};
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

const NORM_TOL: f64 = 1e-6;
const DENSITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Ket {
    dims: Vec<usize>,
    amps: CVec,
}

/// JSON form `{dims, re, im}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KetJson {
    pub dims: Vec<usize>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch(format!("bad register signature {dims:?}")));
    }
    Ok(dims.iter().product())
}

impl Ket {
    pub fn new(dims: Vec<usize>, amps: CVec) -> Result<Self> {
        let total = check_dims(&dims)?;
        if amps.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "{} amplitudes for register {:?}",
                amps.len(),
                dims
            )));
        }
        Ok(Ket { dims, amps })
    }

    pub fn from_slice(dims: &[usize], amps: &[Complex64]) -> Result<Self> {
        Ket::new(dims.to_vec(), CVec::from_column_slice(amps))
    }

    pub fn basis(dims: &[usize], index: usize) -> Result<Self> {
        let total = check_dims(dims)?;
        if index >= total {
            return Err(Error::IndexOutOfRange { index, limit: total });
        }
        let mut amps = CVec::zeros(total);
        amps[index] = ONE;
        Ok(Ket { dims: dims.to_vec(), amps })
    }

    /// `|index⟩` on `n` qubits.
    pub fn qubit_basis(n: usize, index: usize) -> Result<Self> {
        Ket::basis(&vec![2; n], index)
    }

    /// Uniform superposition `|0̃⟩ = H^{⊗n}|0⟩` generalized to any register.
    pub fn uniform(dims: &[usize]) -> Result<Self> {
        let total = check_dims(dims)?;
        let a = c(1.0 / (total as f64).sqrt(), 0.0);
        Ok(Ket { dims: dims.to_vec(), amps: CVec::from_element(total, a) })
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn epr() -> Self {
        let h = c(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Ket { dims: vec![2, 2], amps: CVec::from_column_slice(&[h, ZERO, ZERO, h]) }
    }

    pub fn qubit(alpha: Complex64, beta: Complex64) -> Self {
        Ket { dims: vec![2], amps: CVec::from_column_slice(&[alpha, beta]) }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &CVec {
        &self.amps
    }

    pub fn into_amps(self) -> CVec {
        self.amps
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amp(&self, index: usize) -> Complex64 {
        self.amps[index]
    }

    pub fn norm(&self) -> f64 {
        linalg::norm(&self.amps)
    }

    pub fn normalized(&self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm: n });
        }
        Ok(Ket { dims: self.dims.clone(), amps: self.amps.unscale(n) })
    }

    pub fn with_amps(&self, amps: CVec) -> Result<Self> {
        Ket::new(self.dims.clone(), amps)
    }

    pub fn inner(&self, other: &Ket) -> Complex64 {
        self.amps.dotc(&other.amps)
    }

    /// `|⟨self|other⟩|²`.
    pub fn fidelity(&self, other: &Ket) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn ensure_normalized(&self) -> Result<()> {
        let n = self.norm();
        if (n - 1.0).abs() > NORM_TOL {
            Err(Error::NotNormalized { norm: n })
        } else {
            Ok(())
        }
    }

    pub fn to_json(&self) -> KetJson {
        KetJson {
            dims: self.dims.clone(),
            re: self.amps.iter().map(|z| z.re).collect(),
            im: self.amps.iter().map(|z| z.im).collect(),
        }
    }

    pub fn from_json(j: &KetJson) -> Result<Self> {
        if j.re.len() != j.im.len() {
            return Err(Error::DimensionMismatch("re/im lengths differ".into()));
        }
        let amps = CVec::from_iterator(j.re.len(), j.re.iter().zip(&j.im).map(|(&r, &i)| c(r, i)));
        Ket::new(j.dims.clone(), amps)
    }
}

/// Which subsystems are kept on one side of a cut.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartition {
    keep: Vec<usize>,
}

impl Bipartition {
    pub fn new(keep: &[usize], n_subsystems: usize) -> Result<Self> {
        let mut k = keep.to_vec();
        k.sort_unstable();
        k.dedup();
        if let Some(&bad) = k.iter().find(|&&i| i >= n_subsystems) {
            return Err(Error::IndexOutOfRange { index: bad, limit: n_subsystems });
        }
        if k.is_empty() || k.len() == n_subsystems {
            return Err(Error::EmptyPartition);
        }
        Ok(Bipartition { keep: k })
    }

    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    pub fn complement(&self, n_subsystems: usize) -> Vec<usize> {
        (0..n_subsystems).filter(|i| !self.keep.contains(i)).collect()
    }
}

/// Index bookkeeping for a split of a register into kept and rest subsystems.
struct Split {
    keep_dims: Vec<usize>,
    rest_dims: Vec<usize>,
    keep_dim: usize,
    rest_dim: usize,
    /// full index of (keep index, rest index), row-major in keep.
    full: Vec<usize>,
}

impl Split {
    fn new(dims: &[usize], part: &Bipartition) -> Result<Self> {
        if part.keep.iter().any(|&i| i >= dims.len()) || part.keep.len() >= dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "partition {:?} does not fit register {:?}",
                part.keep, dims
            )));
        }
        let rest = part.complement(dims.len());
        let keep_dims: Vec<usize> = part.keep.iter().map(|&i| dims[i]).collect();
        let rest_dims: Vec<usize> = rest.iter().map(|&i| dims[i]).collect();
        let keep_dim: usize = keep_dims.iter().product();
        let rest_dim: usize = rest_dims.iter().product();
        let st = linalg::strides(dims);
        let mut full = vec![0; keep_dim * rest_dim];
        for a in 0..keep_dim {
            let da = linalg::digits(a, &keep_dims);
            let base: usize = da.iter().zip(&part.keep).map(|(d, &s)| d * st[s]).sum();
            for r in 0..rest_dim {
                let dr = linalg::digits(r, &rest_dims);
                let off: usize = dr.iter().zip(&rest).map(|(d, &s)| d * st[s]).sum();
                full[a * rest_dim + r] = base + off;
            }
        }
        Ok(Split { keep_dims, rest_dims, keep_dim, rest_dim, full })
    }

    fn idx(&self, a: usize, r: usize) -> usize {
        self.full[a * self.rest_dim + r]
    }

    /// Amplitudes reshaped to a `keep × rest` matrix.
    fn reshape(&self, amps: &CVec) -> CMat {
        CMat::from_fn(self.keep_dim, self.rest_dim, |a, r| amps[self.idx(a, r)])
    }
}

/// `a ⊗ b`.
pub fn tensor(a: &Ket, b: &Ket) -> Ket {
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    let amps = a.amps.kronecker(&b.amps);
    Ket { dims, amps }
}

pub fn tensor_all(kets: &[Ket]) -> Result<Ket> {
    let (first, rest) = kets
        .split_first()
        .ok_or_else(|| Error::DimensionMismatch("empty tensor product".into()))?;
    Ok(rest.iter().fold(first.clone(), |acc, k| tensor(&acc, k)))
}

/// Born-rule probabilities `p_j = |λ_j|²`.
pub fn born_distribution(psi: &Ket) -> Result<Vec<f64>> {
    psi.ensure_normalized()?;
    Ok(psi.amps.iter().map(|z| z.norm_sqr()).collect())
}

/// Draw an index from a (not necessarily normalized) weight vector.
pub fn sample_index<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let u = rng.random::<f64>() * total;
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &w) in weights.iter().enumerate() {
        if w > 0.0 {
            last = i;
            acc += w;
            if u < acc {
                return i;
            }
        }
    }
    last
}

/// Projective measurement in the computational basis.
pub fn measure<R: Rng + ?Sized>(psi: &Ket, rng: &mut R) -> Result<(usize, Ket)> {
    let p = born_distribution(psi)?;
    let k = sample_index(&p, rng);
    Ok((k, Ket::basis(&psi.dims, k)?))
}

/// Probabilities of each outcome on the measured part.
pub fn marginal_distribution(psi: &Ket, part: &Bipartition) -> Result<Vec<f64>> {
    psi.ensure_normalized()?;
    let split = Split::new(&psi.dims, part)?;
    Ok((0..split.keep_dim)
        .map(|a| (0..split.rest_dim).map(|r| psi.amps[split.idx(a, r)].norm_sqr()).sum())
        .collect())
}

/// Residual state on the complement after observing `outcome` on `part`.
pub fn condition_on(psi: &Ket, part: &Bipartition, outcome: usize) -> Result<Ket> {
    let split = Split::new(&psi.dims, part)?;
    if outcome >= split.keep_dim {
        return Err(Error::IndexOutOfRange { index: outcome, limit: split.keep_dim });
    }
    let amps = CVec::from_fn(split.rest_dim, |r, _| psi.amps[split.idx(outcome, r)]);
    Ket::new(split.rest_dims.clone(), amps)?.normalized()
}

/// Measure the subsystems in `part`; returns the outcome (index over the kept
/// subsystems) and the renormalized state of the complement.
pub fn partial_measure<R: Rng + ?Sized>(
    psi: &Ket,
    part: &Bipartition,
    rng: &mut R,
) -> Result<(usize, Ket)> {
    let p = marginal_distribution(psi, part)?;
    let k = sample_index(&p, rng);
    Ok((k, condition_on(psi, part, k)?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityOp {
    dims: Vec<usize>,
    mat: CMat,
}

impl DensityOp {
    pub fn new(dims: Vec<usize>, mat: CMat) -> Result<Self> {
        let total = check_dims(&dims)?;
        if mat.nrows() != total || mat.ncols() != total {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix for register {:?}",
                mat.nrows(),
                mat.ncols(),
                dims
            )));
        }
        Ok(DensityOp { dims, mat })
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn trace(&self) -> Complex64 {
        self.mat.trace()
    }

    /// Hermiticity, unit trace and positivity within tolerance.
    pub fn validate(&self) -> Result<()> {
        let herm = linalg::hermiticity_defect(&self.mat);
        if herm > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("Hermiticity defect {herm:e}")));
        }
        let tr = self.trace();
        if (tr - ONE).norm() > DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("trace {tr}")));
        }
        let min = Eigh::new(&self.mat).values[0];
        if min < -DENSITY_TOL {
            return Err(Error::InvalidDensity(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Eigenvalues with tiny negative values clamped to zero.
    pub fn spectrum(&self) -> Result<Vec<f64>> {
        self.validate()?;
        Ok(Eigh::new(&self.mat).values.into_iter().map(|v| v.max(0.0)).collect())
    }

    /// `Σ p_k |ψ_k⟩⟨ψ_k|`.
    pub fn mixture(weights: &[f64], kets: &[Ket]) -> Result<Self> {
        let first = kets
            .first()
            .ok_or_else(|| Error::DimensionMismatch("empty mixture".into()))?;
        if weights.len() != kets.len() {
            return Err(Error::DimensionMismatch("weights and kets differ in length".into()));
        }
        let mut mat = CMat::zeros(first.dim(), first.dim());
        for (w, k) in weights.iter().zip(kets) {
            if k.dims != first.dims {
                return Err(Error::DimensionMismatch("mixed registers".into()));
            }
            mat += (&k.amps * k.amps.adjoint()).scale(*w);
        }
        DensityOp::new(first.dims.clone(), mat)
    }

    /// `tr(ρ·O)`.
    pub fn expectation(&self, op: &CMat) -> Complex64 {
        (&self.mat * op).trace()
    }
}

/// `|ψ⟩⟨ψ|`.
pub fn density_of(psi: &Ket) -> DensityOp {
    DensityOp { dims: psi.dims.clone(), mat: &psi.amps * psi.amps.adjoint() }
}

/// Reduced density operator on the subsystems kept by `part`.
pub fn partial_trace(rho: &DensityOp, part: &Bipartition) -> Result<DensityOp> {
    let split = Split::new(&rho.dims, part)?;
    let mut out = CMat::zeros(split.keep_dim, split.keep_dim);
    for a in 0..split.keep_dim {
        for b in 0..split.keep_dim {
            let mut s = ZERO;
            for r in 0..split.rest_dim {
                s += rho.mat[(split.idx(a, r), split.idx(b, r))];
            }
            out[(a, b)] = s;
        }
    }
    DensityOp::new(split.keep_dims.clone(), out)
}

#[derive(Debug, Clone)]
pub struct SchmidtForm {
    /// Non-negative, descending.
    pub coeffs: Vec<f64>,
    /// Orthonormal columns on the kept subsystems.
    pub basis_a: CMat,
    /// Orthonormal columns on the complement.
    pub basis_b: CMat,
    pub dims_a: Vec<usize>,
    pub dims_b: Vec<usize>,
}

impl SchmidtForm {
    /// Number of coefficients above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.coeffs.iter().filter(|&&a| a > tol).count()
    }

    /// `Σ α_q |J_q⟩|K_q⟩` with the kept subsystems placed first.
    pub fn reconstruct(&self) -> Ket {
        let mut amps = CVec::zeros(self.basis_a.nrows() * self.basis_b.nrows());
        for (q, &a) in self.coeffs.iter().enumerate() {
            let term = self.basis_a.column(q).kronecker(&self.basis_b.column(q));
            amps += term.scale(a);
        }
        let mut dims = self.dims_a.clone();
        dims.extend_from_slice(&self.dims_b);
        Ket { dims, amps }
    }
}

/// Schmidt decomposition across `part` via SVD of the reshaped amplitudes.
pub fn schmidt(psi: &Ket, part: &Bipartition) -> Result<SchmidtForm> {
    psi.ensure_normalized()?;
    let split = Split::new(&psi.dims, part)?;
    let m = split.reshape(&psi.amps);
    let svd = m.svd(true, true);
    let u = svd.u.expect("left singular vectors requested");
    let v_t = svd.v_t.expect("right singular vectors requested");
    let k = svd.singular_values.len();
    let mut order: Vec<usize> = (0..k).collect();
    // stable sort keeps the solver order among equal singular values
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let coeffs = order.iter().map(|&q| svd.singular_values[q]).collect();
    let basis_a = CMat::from_fn(split.keep_dim, k, |i, j| u[(i, order[j])]);
    let basis_b = CMat::from_fn(split.rest_dim, k, |i, j| v_t[(order[j], i)]);
    Ok(SchmidtForm {
        coeffs,
        basis_a,
        basis_b,
        dims_a: split.keep_dims,
        dims_b: split.rest_dims,
    })
}

fn entropy_of_spectrum(p: &[f64]) -> f64 {
    p.iter().filter(|&&x| x > 0.0).map(|&x| -x * x.ln()).sum()
}

/// Von Neumann entropy `−tr(ρ ln ρ)` in nats.
pub fn entropy(rho: &DensityOp) -> Result<f64> {
    Ok(entropy_of_spectrum(&rho.spectrum()?).max(0.0))
}

/// `S(ρ_A) + S(ρ_B) − S(ρ_AB)`.
pub fn mutual_information(rho: &DensityOp, part: &Bipartition) -> Result<f64> {
    let rest = Bipartition::new(&part.complement(rho.dims.len()), rho.dims.len())?;
    let sa = entropy(&partial_trace(rho, part)?)?;
    let sb = entropy(&partial_trace(rho, &rest)?)?;
    Ok(sa + sb - entropy(rho)?)
}

/// `S(ρ‖σ) = tr ρ ln ρ − tr ρ ln σ`; infinite when σ is singular.
pub fn relative_entropy(rho: &DensityOp, sigma: &DensityOp) -> Result<f64> {
    rho.validate()?;
    sigma.validate()?;
    if rho.dims != sigma.dims {
        return Err(Error::DimensionMismatch("registers differ".into()));
    }
    let Some(log_sigma) = linalg::logm_psd(&sigma.mat, 1e-14) else {
        return Ok(f64::INFINITY);
    };
    let cross = rho.expectation(&log_sigma).re;
    Ok(-entropy(rho)? - cross)
}

/// `ρ_A ⊗ ρ_B` as a density operator on the concatenated register.
pub fn density_tensor(a: &DensityOp, b: &DensityOp) -> DensityOp {
    let mut dims = a.dims.clone();
    dims.extend_from_slice(&b.dims);
    DensityOp { dims, mat: a.mat.kronecker(&b.mat) }
}

/// Purification `Σ √p_i |φ_i⟩|φ_i⟩` on the doubled register.
pub fn purify(rho: &DensityOp) -> Result<Ket> {
    rho.validate()?;
    let e = Eigh::new(&rho.mat);
    let n = rho.mat.nrows();
    let mut amps = CVec::zeros(n * n);
    for (k, &p) in e.values.iter().enumerate() {
        if p <= 0.0 {
            continue;
        }
        let col = e.vectors.column(k);
        amps += col.kronecker(&col).scale(p.sqrt());
    }
    let mut dims = rho.dims.clone();
    dims.extend_from_slice(&rho.dims);
    Ket::new(dims, amps)?.normalized()
}

/// Bipartition keeping the first `k` subsystems.
pub fn leading(k: usize, n_subsystems: usize) -> Result<Bipartition> {
    Bipartition::new(&(0..k).collect::<Vec<_>>(), n_subsystems)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use std::f64::consts::{FRAC_1_SQRT_2, LN_2};

    fn plus() -> Ket {
        Ket::qubit(c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0))
    }
    fn minus() -> Ket {
        Ket::qubit(c(FRAC_1_SQRT_2, 0.0), c(-FRAC_1_SQRT_2, 0.0))
    }

    #[test]
    fn tensor_of_basis_states() {
        let k = tensor(&Ket::qubit_basis(1, 0).unwrap(), &Ket::qubit_basis(1, 1).unwrap());
        assert_eq!(k.dims(), &[2, 2]);
        assert_eq!(k.amps().as_slice(), &[ZERO, ONE, ZERO, ZERO]);
    }

    #[test]
    fn tensor_of_plus_minus() {
        let k = tensor(&plus(), &minus());
        let want = [0.5, -0.5, 0.5, -0.5];
        for (z, w) in k.amps().iter().zip(want) {
            assert!((z - c(w, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn born_of_complex_qubit() {
        let p = born_distribution(&Ket::qubit(c(0.6, 0.0), c(0.0, 0.8))).unwrap();
        assert!((p[0] - 0.36).abs() < 1e-12 && (p[1] - 0.64).abs() < 1e-12);
    }

    #[test]
    fn born_rejects_unnormalized() {
        let k = Ket::qubit(ONE, ONE);
        assert!(matches!(born_distribution(&k), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn measuring_basis_state_is_certain() {
        let mut rng = rng_from_seed(1);
        let k = Ket::qubit_basis(1, 1).unwrap();
        for _ in 0..20 {
            let (i, post) = measure(&k, &mut rng).unwrap();
            assert_eq!(i, 1);
            assert_eq!(post, k);
        }
    }

    #[test]
    fn partial_measure_of_product_leaves_factor() {
        let phi = Ket::qubit(c(0.6, 0.0), c(0.0, 0.8));
        let psi = tensor(&Ket::qubit_basis(1, 0).unwrap(), &phi);
        let mut rng = rng_from_seed(3);
        let (k, rest) = partial_measure(&psi, &Bipartition::new(&[0], 2).unwrap(), &mut rng).unwrap();
        assert_eq!(k, 0);
        assert!((rest.fidelity(&phi) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn epr_partial_measure_collapses_partner() {
        let mut rng = rng_from_seed(5);
        let part = Bipartition::new(&[1], 2).unwrap();
        for _ in 0..20 {
            let (k, rest) = partial_measure(&Ket::epr(), &part, &mut rng).unwrap();
            assert!((rest.amp(k).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn conditional_state_by_hand() {
        let a = c(1.0 / 3f64.sqrt(), 0.0);
        let psi = Ket::from_slice(&[2, 2], &[a, a, a, ZERO]).unwrap();
        let part = Bipartition::new(&[1], 2).unwrap();
        let p = marginal_distribution(&psi, &part).unwrap();
        assert!((p[0] - 2.0 / 3.0).abs() < 1e-12);
        let rest = condition_on(&psi, &part, 0).unwrap();
        assert!((rest.fidelity(&plus()) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn epr_density_corners() {
        let rho = density_of(&Ket::epr());
        for (i, j) in [(0, 0), (0, 3), (3, 0), (3, 3)] {
            assert!((rho.mat()[(i, j)] - c(0.5, 0.0)).norm() < 1e-15);
        }
        assert!((rho.mat()[(1, 1)]).norm() < 1e-15);
    }

    #[test]
    fn entropy_paradox() {
        let rho = density_of(&Ket::epr());
        assert!(entropy(&rho).unwrap().abs() < 1e-9);
        let reduced = partial_trace(&rho, &Bipartition::new(&[0], 2).unwrap()).unwrap();
        assert!((entropy(&reduced).unwrap() - LN_2).abs() < 1e-12);
    }

    #[test]
    fn mutual_information_of_epr() {
        let rho = density_of(&Ket::epr());
        let i = mutual_information(&rho, &Bipartition::new(&[0], 2).unwrap()).unwrap();
        assert!((i - 2.0 * LN_2).abs() < 1e-9);
    }

    #[test]
    fn schmidt_of_epr() {
        let s = schmidt(&Ket::epr(), &Bipartition::new(&[0], 2).unwrap()).unwrap();
        assert!((s.coeffs[0] - FRAC_1_SQRT_2).abs() < 1e-12);
        assert!((s.coeffs[1] - FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn invalid_density_rejected() {
        let rho = DensityOp::new(vec![2], linalg::diag_real(&[1.5, -0.5])).unwrap();
        assert!(matches!(entropy(&rho), Err(Error::InvalidDensity(_))));
    }

    #[test]
    fn bipartition_validation() {
        assert_eq!(Bipartition::new(&[], 2), Err(Error::EmptyPartition));
        assert_eq!(Bipartition::new(&[0, 1], 2), Err(Error::EmptyPartition));
        assert!(Bipartition::new(&[2], 2).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let k = Ket::qubit(c(0.6, 0.0), c(0.0, 0.8));
        assert_eq!(Ket::from_json(&k.to_json()).unwrap(), k);
    }
}
