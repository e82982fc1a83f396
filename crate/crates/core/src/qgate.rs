//! Gate matrices, circuits and their action on registers.

use crate::error::{Error, Result};
use crate::linalg::{self, c, cis, CMat, CVec, ONE, ZERO};
use crate::qstate::Ket;
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

const UNITARY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct GateMatrix {
    mat: CMat,
}

impl GateMatrix {
    /// Wrap a square matrix, rejecting non-unitary input.
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() || mat.nrows() == 0 {
            return Err(Error::BadParams(format!("{}x{} gate", mat.nrows(), mat.ncols())));
        }
        let defect = linalg::unitarity_defect(&mat);
        if defect > UNITARY_TOL {
            return Err(Error::BadParams(format!("gate is not unitary (defect {defect:e})")));
        }
        Ok(GateMatrix { mat })
    }

    pub(crate) fn unchecked(mat: CMat) -> Self {
        GateMatrix { mat }
    }

    pub fn from_rows(dim: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != dim * dim {
            return Err(Error::BadParams("entry count does not match dimension".into()));
        }
        GateMatrix::new(CMat::from_row_slice(dim, dim, entries))
    }

    pub fn identity(dim: usize) -> Self {
        GateMatrix { mat: linalg::identity(dim) }
    }

    /// `|x⟩ → |perm[x]⟩`; `perm` must be a bijection.
    pub fn permutation(perm: &[usize]) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        let mut mat = CMat::zeros(n, n);
        for (x, &y) in perm.iter().enumerate() {
            if y >= n || seen[y] {
                return Err(Error::BadParams("not a permutation".into()));
            }
            seen[y] = true;
            mat[(y, x)] = ONE;
        }
        Ok(GateMatrix { mat })
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn dagger(&self) -> Self {
        GateMatrix { mat: self.mat.adjoint() }
    }

    /// `self · other` (apply `other` first).
    pub fn compose(&self, other: &GateMatrix) -> Result<Self> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch("gate dimensions differ".into()));
        }
        Ok(GateMatrix { mat: &self.mat * &other.mat })
    }

    pub fn kron(&self, other: &GateMatrix) -> Self {
        GateMatrix { mat: self.mat.kronecker(&other.mat) }
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.mat.clone();
        let mut acc = linalg::identity(self.dim());
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            k >>= 1;
        }
        GateMatrix { mat: acc }
    }

    /// `Λ₁U`: control qubit first, then the target subsystem.
    pub fn controlled_once(&self) -> Self {
        let d = self.dim();
        let mut mat = linalg::identity(2 * d);
        mat.view_mut((d, d), (d, d)).copy_from(&self.mat);
        GateMatrix { mat }
    }

    pub fn distance(&self, other: &GateMatrix) -> f64 {
        linalg::spectral_norm(&(&self.mat - &other.mat))
    }
}

pub fn x() -> GateMatrix {
    GateMatrix::unchecked(CMat::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO]))
}

pub fn y() -> GateMatrix {
    GateMatrix::unchecked(CMat::from_row_slice(2, 2, &[ZERO, c(0.0, -1.0), c(0.0, 1.0), ZERO]))
}

pub fn z() -> GateMatrix {
    GateMatrix::unchecked(linalg::diag_real(&[1.0, -1.0]))
}

/// `(1/√2)[[1, 1], [1, −1]]`.
pub fn h() -> GateMatrix {
    let s = c(FRAC_1_SQRT_2, 0.0);
    GateMatrix::unchecked(CMat::from_row_slice(2, 2, &[s, s, s, -s]))
}

/// Phase rotator `Λ_φ = diag(1, e^{iφ})`.
pub fn phase(phi: f64) -> GateMatrix {
    GateMatrix::unchecked(linalg::diag(&[ONE, cis(phi)]))
}

pub fn cnot() -> GateMatrix {
    x().controlled_once()
}

pub fn csign() -> GateMatrix {
    GateMatrix::unchecked(linalg::diag_real(&[1.0, 1.0, 1.0, -1.0]))
}

pub fn toffoli() -> GateMatrix {
    cnot().controlled_once()
}

/// `U_{k,j} = diag(1, 1, 1, e^{iπ/2^{k−j}})` for `k > j`.
pub fn shift(k: usize, j: usize) -> Result<GateMatrix> {
    if k <= j {
        return Err(Error::BadParams(format!("U_(k,j) needs k > j, got k={k}, j={j}")));
    }
    Ok(controlled_phase(PI / 2f64.powi((k - j) as i32)))
}

/// `diag(1, 1, 1, e^{iφ})`.
pub fn controlled_phase(phi: f64) -> GateMatrix {
    GateMatrix::unchecked(linalg::diag(&[ONE, ONE, ONE, cis(phi)]))
}

/// Named constructor: `x`, `y`, `z`, `h`, `phase(φ)`, `cnot`, `csign`,
/// `toffoli`, `shift(k, j)`.
pub fn make_gate(name: &str, params: &[f64]) -> Result<GateMatrix> {
    let expect = |n: usize| {
        if params.len() == n {
            Ok(())
        } else {
            Err(Error::BadParams(format!("{name} takes {n} parameter(s)")))
        }
    };
    let as_index = |v: f64| {
        if v >= 0.0 && v.fract() == 0.0 {
            Ok(v as usize)
        } else {
            Err(Error::BadParams(format!("{v} is not a non-negative integer")))
        }
    };
    match name.to_ascii_lowercase().as_str() {
        "x" | "not" => expect(0).map(|_| x()),
        "y" => expect(0).map(|_| y()),
        "z" => expect(0).map(|_| z()),
        "h" | "hadamard" => expect(0).map(|_| h()),
        "phase" => {
            expect(1)?;
            if !params[0].is_finite() {
                return Err(Error::BadParams("phase must be finite".into()));
            }
            Ok(phase(params[0]))
        }
        "cnot" => expect(0).map(|_| cnot()),
        "csign" => expect(0).map(|_| csign()),
        "toffoli" => expect(0).map(|_| toffoli()),
        "shift" => {
            expect(2)?;
            shift(as_index(params[0])?, as_index(params[1])?)
        }
        other => Err(Error::BadParams(format!("unknown gate {other}"))),
    }
}

/// Apply `g` to the listed subsystems (first target most significant).
pub fn apply_amps(amps: &CVec, dims: &[usize], g: &CMat, targets: &[usize]) -> Result<CVec> {
    let total: usize = dims.iter().product();
    if amps.len() != total {
        return Err(Error::DimensionMismatch("amplitudes do not match register".into()));
    }
    for (i, &t) in targets.iter().enumerate() {
        if t >= dims.len() {
            return Err(Error::IndexOutOfRange { index: t, limit: dims.len() });
        }
        if targets[..i].contains(&t) {
            return Err(Error::TargetCollision(t));
        }
    }
    let tdims: Vec<usize> = targets.iter().map(|&t| dims[t]).collect();
    let tdim: usize = tdims.iter().product();
    if g.nrows() != tdim || g.ncols() != tdim {
        return Err(Error::DimensionMismatch(format!(
            "gate of dimension {} on targets of dimension {}",
            g.nrows(),
            tdim
        )));
    }
    let st = linalg::strides(dims);
    let offsets: Vec<usize> = (0..tdim)
        .map(|t| {
            linalg::digits(t, &tdims)
                .iter()
                .zip(targets)
                .map(|(d, &q)| d * st[q])
                .sum()
        })
        .collect();
    let mut out = CVec::zeros(total);
    let mut buf = vec![ZERO; tdim];
    for base in 0..total {
        if targets.iter().any(|&q| (base / st[q]) % dims[q] != 0) {
            continue;
        }
        for (b, &o) in buf.iter_mut().zip(&offsets) {
            *b = amps[base + o];
        }
        for (r, &o) in offsets.iter().enumerate() {
            let mut s = ZERO;
            for (k, b) in buf.iter().enumerate() {
                s += g[(r, k)] * b;
            }
            out[base + o] = s;
        }
    }
    Ok(out)
}

pub fn apply(psi: &Ket, g: &GateMatrix, targets: &[usize]) -> Result<Ket> {
    let amps = apply_amps(psi.amps(), psi.dims(), g.mat(), targets)?;
    Ket::new(psi.dims().to_vec(), amps)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub gate: GateMatrix,
    pub targets: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    dims: Vec<usize>,
    steps: Vec<Step>,
}

impl Circuit {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(Error::DimensionMismatch(format!("bad register {dims:?}")));
        }
        Ok(Circuit { dims: dims.to_vec(), steps: Vec::new() })
    }

    pub fn qubits(n: usize) -> Result<Self> {
        Circuit::new(&vec![2; n])
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn push(&mut self, gate: GateMatrix, targets: &[usize]) -> Result<&mut Self> {
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.dims.len() {
                return Err(Error::IndexOutOfRange { index: t, limit: self.dims.len() });
            }
            if targets[..i].contains(&t) {
                return Err(Error::TargetCollision(t));
            }
        }
        let d: usize = targets.iter().map(|&t| self.dims[t]).product();
        if d != gate.dim() {
            return Err(Error::DimensionMismatch(format!(
                "gate of dimension {} on targets {:?} of dimension {}",
                gate.dim(),
                targets,
                d
            )));
        }
        self.steps.push(Step { gate, targets: targets.to_vec() });
        Ok(self)
    }

    /// Append `other`, mapping its subsystem `i` to `map[i]` of this register.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) -> Result<&mut Self> {
        if map.len() != other.dims.len() {
            return Err(Error::DimensionMismatch("subsystem map has wrong length".into()));
        }
        for s in &other.steps {
            let t: Vec<usize> = s.targets.iter().map(|&i| map[i]).collect();
            self.push(s.gate.clone(), &t)?;
        }
        Ok(self)
    }

    /// Reversed order with every gate replaced by its adjoint.
    pub fn inverse(&self) -> Circuit {
        Circuit {
            dims: self.dims.clone(),
            steps: self
                .steps
                .iter()
                .rev()
                .map(|s| Step { gate: s.gate.dagger(), targets: s.targets.clone() })
                .collect(),
        }
    }

    fn run_amps(&self, amps: &CVec) -> Result<CVec> {
        let mut v = amps.clone();
        for s in &self.steps {
            v = apply_amps(&v, &self.dims, s.gate.mat(), &s.targets)?;
        }
        Ok(v)
    }
}

pub fn run(circuit: &Circuit, input: &Ket) -> Result<Ket> {
    if input.dims() != circuit.dims() {
        return Err(Error::DimensionMismatch(format!(
            "ket register {:?} vs circuit register {:?}",
            input.dims(),
            circuit.dims()
        )));
    }
    Ket::new(input.dims().to_vec(), circuit.run_amps(input.amps())?)
}

/// Dense matrix of the whole circuit.
pub fn unitary_of(circuit: &Circuit) -> Result<GateMatrix> {
    let n = circuit.dim();
    let mut mat = CMat::zeros(n, n);
    for col in 0..n {
        let mut e = CVec::zeros(n);
        e[col] = ONE;
        mat.set_column(col, &circuit.run_amps(&e)?);
    }
    Ok(GateMatrix::unchecked(mat))
}

/// Principal square root: eigenphases in `(−π, π]` are halved.
pub fn gate_root(u: &GateMatrix) -> GateMatrix {
    let schur = u.mat().clone().schur();
    let (q, t) = schur.unpack();
    let n = u.dim();
    let mut d = CMat::zeros(n, n);
    for k in 0..n {
        let lam = t[(k, k)];
        d[(k, k)] = cis(lam.arg() / 2.0);
    }
    GateMatrix::unchecked(&q * d * q.adjoint())
}

/// `Λ_k U` for one-subsystem `U` and `k ∈ {1, 2}` controls, controls first.
///
/// For `k = 2` the network is `Λ₁V(c₂) · CNOT(c₁→c₂) · Λ₁V†(c₂) · CNOT(c₁→c₂) ·
/// Λ₁V(c₁)` in time order, with `V² = U`.
pub fn controlled(u: &GateMatrix, k: usize) -> Result<Circuit> {
    let d = u.dim();
    match k {
        1 => {
            let mut c = Circuit::new(&[2, d])?;
            c.push(u.controlled_once(), &[0, 1])?;
            Ok(c)
        }
        2 => {
            let v = gate_root(u);
            let cv = v.controlled_once();
            let cvd = v.dagger().controlled_once();
            let mut c = Circuit::new(&[2, 2, d])?;
            c.push(cv.clone(), &[1, 2])?
                .push(cnot(), &[0, 1])?
                .push(cvd, &[1, 2])?
                .push(cnot(), &[0, 1])?
                .push(cv, &[0, 2])?;
            Ok(c)
        }
        other => Err(Error::UnsupportedControlCount(other)),
    }
}

/// `|x, a⟩ → |U^a x, a⟩` on (target ⊗ `n_ctrl` counter qubits), built from
/// `U^{2^p}` conditioned on each binary digit of the counter.
pub fn u_seq(u: &GateMatrix, n_ctrl: usize) -> Result<Circuit> {
    let mut dims = vec![u.dim()];
    dims.extend(std::iter::repeat_n(2, n_ctrl));
    let mut c = Circuit::new(&dims)?;
    let mut power = u.clone();
    for i in (0..n_ctrl).rev() {
        c.push(power.controlled_once(), &[1 + i, 0])?;
        power = power.compose(&power)?;
    }
    Ok(c)
}

/// Parameters `(α, β, γ, θ)` of
/// `U = e^{iα} [[e^{iβ}cos θ, e^{iγ}sin θ], [−e^{−iγ}sin θ, e^{−iβ}cos θ]]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneQubitParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub theta: f64,
}

impl OneQubitParams {
    pub fn matrix(&self) -> CMat {
        let (s, co) = self.theta.sin_cos();
        let g = CMat::from_row_slice(
            2,
            2,
            &[
                cis(self.beta) * co,
                cis(self.gamma) * s,
                -cis(-self.gamma) * s,
                cis(-self.beta) * co,
            ],
        );
        g * cis(self.alpha)
    }
}

/// Fit a one-qubit unitary to the four-parameter family; returns the
/// parameters and the fit residual.
pub fn one_qubit_params(u: &GateMatrix) -> Result<(OneQubitParams, f64)> {
    if u.dim() != 2 {
        return Err(Error::DimensionMismatch("one-qubit gate expected".into()));
    }
    let m = u.mat();
    let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
    let alpha = det.arg() / 2.0;
    let w = m * cis(-alpha);
    let theta = w[(0, 0)].norm().clamp(0.0, 1.0).acos();
    let beta = if w[(0, 0)].norm() > 1e-12 { w[(0, 0)].arg() } else { 0.0 };
    let gamma = if w[(0, 1)].norm() > 1e-12 {
        w[(0, 1)].arg()
    } else {
        0.0
    };
    let p = OneQubitParams { alpha, beta, gamma, theta };
    let residual = (p.matrix() - m).camax();
    Ok((p, residual))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &CMat, b: &CMat, tol: f64) -> bool {
        (a - b).camax() <= tol
    }

    #[test]
    fn shift_with_unit_distance_is_diag_i() {
        let u = shift(2, 1).unwrap();
        assert!(close(u.mat(), &linalg::diag(&[ONE, ONE, ONE, c(0.0, 1.0)]), 1e-15));
        assert!(shift(1, 1).is_err());
    }

    #[test]
    fn phase_zero_is_identity() {
        assert!(close(phase(0.0).mat(), &linalg::identity(2), 0.0));
    }

    #[test]
    fn hadamard_is_involution() {
        assert!(close(&(h().mat() * h().mat()), &linalg::identity(2), 1e-12));
    }

    #[test]
    fn cnot_flips_target() {
        let k = apply(&Ket::qubit_basis(2, 2).unwrap(), &cnot(), &[0, 1]).unwrap();
        assert_eq!(k, Ket::qubit_basis(2, 3).unwrap());
    }

    #[test]
    fn cnot_with_reversed_targets() {
        // control is qubit 1, target qubit 0: |01⟩ → |11⟩
        let k = apply(&Ket::qubit_basis(2, 1).unwrap(), &cnot(), &[1, 0]).unwrap();
        assert_eq!(k, Ket::qubit_basis(2, 3).unwrap());
    }

    #[test]
    fn hadamard_on_zero() {
        let k = apply(&Ket::qubit_basis(1, 0).unwrap(), &h(), &[0]).unwrap();
        assert!((k.amp(0) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
        assert!((k.amp(1) - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn root_of_x() {
        let v = gate_root(&x());
        let want = CMat::from_row_slice(
            2,
            2,
            &[c(0.5, 0.5), c(0.5, -0.5), c(0.5, -0.5), c(0.5, 0.5)],
        );
        assert!(close(v.mat(), &want, 1e-12));
        assert!(close(&(v.mat() * v.mat()), x().mat(), 1e-12));
    }

    #[test]
    fn root_of_identity() {
        assert!(close(gate_root(&GateMatrix::identity(3)).mat(), &linalg::identity(3), 1e-12));
    }

    #[test]
    fn toffoli_from_network() {
        let circ = controlled(&x(), 2).unwrap();
        assert!(close(unitary_of(&circ).unwrap().mat(), toffoli().mat(), 1e-9));
    }

    #[test]
    fn controlled_z_is_csign() {
        let circ = controlled(&z(), 1).unwrap();
        assert!(close(unitary_of(&circ).unwrap().mat(), csign().mat(), 1e-12));
        assert_eq!(controlled(&z(), 3), Err(Error::UnsupportedControlCount(3)));
    }

    #[test]
    fn u_seq_of_x_with_three() {
        let circ = u_seq(&x(), 2).unwrap();
        // |x=0, a=3⟩ → |1, 3⟩
        let k = run(&circ, &Ket::basis(&[2, 2, 2], 0b011).unwrap()).unwrap();
        assert_eq!(k, Ket::basis(&[2, 2, 2], 0b111).unwrap());
        let k0 = run(&circ, &Ket::basis(&[2, 2, 2], 0b100).unwrap()).unwrap();
        assert_eq!(k0, Ket::basis(&[2, 2, 2], 0b100).unwrap());
    }

    #[test]
    fn empty_circuit_is_identity() {
        let circ = Circuit::qubits(2).unwrap();
        assert!(close(unitary_of(&circ).unwrap().mat(), &linalg::identity(4), 0.0));
    }

    #[test]
    fn target_errors() {
        let mut circ = Circuit::qubits(2).unwrap();
        assert_eq!(circ.push(cnot(), &[0, 0]).unwrap_err(), Error::TargetCollision(0));
        assert!(matches!(circ.push(cnot(), &[0]), Err(Error::DimensionMismatch(_))));
        assert!(matches!(circ.push(h(), &[2]), Err(Error::IndexOutOfRange { .. })));
    }

    #[test]
    fn make_gate_by_name() {
        assert_eq!(make_gate("cnot", &[]).unwrap(), cnot());
        assert!(make_gate("phase", &[]).is_err());
        assert!(make_gate("shift", &[1.0, 2.0]).is_err());
        assert!(make_gate("nope", &[]).is_err());
    }

    #[test]
    fn non_unitary_rejected() {
        assert!(GateMatrix::new(linalg::diag_real(&[1.0, 2.0])).is_err());
    }

    #[test]
    fn one_qubit_fit_of_standard_gates() {
        for g in [x(), y(), z(), h(), phase(0.7)] {
            let (_, res) = one_qubit_params(&g).unwrap();
            assert!(res < 1e-8);
        }
    }
}
