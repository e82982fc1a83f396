//! Euler integration of the Lindblad master equation
//! `ρ̇ = −i[H, ρ] + Σ_j γ_j (A_j ρ A_j† − ½{A_j†A_j, ρ})`.
//!
//! Each step applies the commutator term and then the dissipator to the
//! intermediate matrix. The result is made Hermitian with unit trace via
//! `(ρ + ρ†)/tr(ρ + ρ†)`; every 20 steps negative eigenvalues are clipped and
//! the spectrum renormalized.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, Eigh, I};
use crate::qstate::DensityOp;

const CLAMP_EVERY: usize = 20;
const STIFF_LIMIT: f64 = 0.1;

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladModel {
    pub h: CMat,
    pub factors: Vec<(CMat, f64)>,
}

impl LindbladModel {
    pub fn new(h: CMat, factors: Vec<(CMat, f64)>) -> Result<Self> {
        let n = h.nrows();
        if h.ncols() != n {
            return Err(Error::DimensionMismatch("H must be square".into()));
        }
        let d = linalg::hermiticity_defect(&h);
        if d > 1e-9 {
            return Err(Error::NotHermitian(d));
        }
        for (a, g) in &factors {
            if a.nrows() != n || a.ncols() != n {
                return Err(Error::DimensionMismatch("decoherence factor size".into()));
            }
            if !(*g >= 0.0 && g.is_finite()) {
                return Err(Error::BadParams(format!("rate {g} must be non-negative")));
            }
        }
        Ok(LindbladModel { h, factors })
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn dissipator(&self, rho: &CMat) -> CMat {
        let mut out = CMat::zeros(rho.nrows(), rho.ncols());
        for (a, g) in &self.factors {
            let ad = a.adjoint();
            let ada = &ad * a;
            let term = a * rho * &ad - (&ada * rho + rho * &ada) * c(0.5, 0.0);
            out += term * c(*g, 0.0);
        }
        out
    }

    /// `dt · max(γ, ‖H‖)`; values above 0.1 call for a smaller step.
    pub fn stiffness(&self, dt: f64) -> f64 {
        let gamma = self.factors.iter().map(|f| f.1).fold(0.0, f64::max);
        dt * gamma.max(linalg::spectral_norm(&self.h))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LindbladTrajectory {
    pub dt: f64,
    /// `ρ` at `t = 0, dt, …`.
    pub states: Vec<DensityOp>,
    /// Set when `dt · max(γ, ‖H‖) > 0.1`.
    pub stiff: bool,
}

impl LindbladTrajectory {
    pub fn last(&self) -> &DensityOp {
        self.states.last().expect("trajectory holds the initial state")
    }
}

fn repair(rho: &CMat) -> CMat {
    let s = rho + rho.adjoint();
    let tr = s.trace();
    s / tr
}

fn clamp(rho: &CMat) -> CMat {
    let eig = Eigh::new(rho);
    if eig.values.iter().all(|&v| v >= 0.0) {
        return rho.clone();
    }
    let kept: Vec<f64> = eig.values.iter().map(|&v| v.max(0.0)).collect();
    let total: f64 = kept.iter().sum();
    eig.apply_fn(|v| c(v.max(0.0) / total, 0.0))
}

pub fn lindblad_evolve(
    model: &LindbladModel,
    rho0: &DensityOp,
    total: f64,
    dt: f64,
) -> Result<LindbladTrajectory> {
    if !(dt > 0.0 && dt.is_finite()) || !(total >= dt && total.is_finite()) {
        return Err(Error::BadTimeStep(format!("T = {total}, dt = {dt}")));
    }
    if rho0.mat().nrows() != model.dim() {
        return Err(Error::DimensionMismatch("initial state does not match H".into()));
    }
    rho0.validate()?;
    let steps = (total / dt).round() as usize;
    let mut rho = rho0.mat().clone();
    let mut states = Vec::with_capacity(steps + 1);
    states.push(rho0.clone());
    for k in 1..=steps {
        let comm = linalg::commutator(&model.h, &rho);
        let tilde = &rho - comm * (I * dt);
        rho = &tilde + model.dissipator(&tilde) * c(dt, 0.0);
        rho = repair(&rho);
        if k % CLAMP_EVERY == 0 {
            rho = clamp(&rho);
        }
        states.push(DensityOp::new(rho0.dims().to_vec(), rho.clone())?);
    }
    Ok(LindbladTrajectory { dt, states, stiff: model.stiffness(dt) > STIFF_LIMIT })
}
