//! Split-operator simulation of a particle on a line.
//!
//! `n` qubits hold `N = 2^n` grid amplitudes. The box is `[0, √N]` with points
//! `X_k = k/√N`. Momentum labels are `p_c = √N (c/N − ½)` in the Fourier frame
//! reached by `QFT · A`, where `A = diag((−1)^a)` centres the spectrum. In these
//! units the kinetic energy is `p²/2m`; the physical momentum conjugate to `X`
//! is `2π p`, so a mass `m` here behaves as `4π²m` in ordinary units.

use crate::error::{Error, Result};
use crate::linalg::{self, cis, CMat, CVec};
use crate::qalgo::qft::qft_full;
use crate::qgate::{apply_amps, Circuit};
use crate::qstate::Ket;

#[derive(Debug, Clone, PartialEq)]
pub struct PotentialGrid {
    n: usize,
    samples: Vec<f64>,
    mass: f64,
}

impl PotentialGrid {
    pub fn new(n: usize, samples: Vec<f64>, mass: f64) -> Result<Self> {
        if n == 0 || n > 16 {
            return Err(Error::BadParams(format!("{n} grid qubits")));
        }
        if samples.len() != 1 << n {
            return Err(Error::DimensionMismatch(format!(
                "{} samples for {} grid points",
                samples.len(),
                1usize << n
            )));
        }
        if !(mass > 0.0 && mass.is_finite()) || samples.iter().any(|v| !v.is_finite()) {
            return Err(Error::BadParams("mass must be positive and samples finite".into()));
        }
        Ok(PotentialGrid { n, samples, mass })
    }

    /// Sample `v` at the grid points `X_k`.
    pub fn from_fn(n: usize, mass: f64, v: impl Fn(f64) -> f64) -> Result<Self> {
        let size = 1usize << n;
        let root = (size as f64).sqrt();
        let samples = (0..size).map(|k| v(k as f64 / root)).collect();
        PotentialGrid::new(n, samples, mass)
    }

    /// Resample tabulated `(X, V)` points by linear interpolation; points
    /// outside the table take the nearest end value.
    pub fn from_points(n: usize, mass: f64, points: &[(f64, f64)]) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::BadParams("empty potential table".into()));
        }
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.0.total_cmp(&b.0));
        PotentialGrid::from_fn(n, mass, |x| {
            let i = pts.partition_point(|p| p.0 <= x);
            if i == 0 {
                pts[0].1
            } else if i == pts.len() {
                pts[pts.len() - 1].1
            } else {
                let (x0, v0) = pts[i - 1];
                let (x1, v1) = pts[i];
                v0 + (v1 - v0) * (x - x0) / (x1 - x0)
            }
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn positions(&self) -> Vec<f64> {
        let root = (self.size() as f64).sqrt();
        (0..self.size()).map(|k| k as f64 / root).collect()
    }

    pub fn momenta(&self) -> Vec<f64> {
        let size = self.size() as f64;
        (0..self.size()).map(|c| size.sqrt() * (c as f64 / size - 0.5)).collect()
    }

    /// Kinetic energies `p_c²/2m` in the Fourier frame.
    pub fn kinetic_diag(&self) -> Vec<f64> {
        self.momenta().iter().map(|p| p * p / (2.0 * self.mass)).collect()
    }

    /// Dense `K = A⁻¹ QFT⁻¹ diag(p²/2m) QFT A` in the position basis.
    pub fn kinetic(&self) -> Result<CMat> {
        let f = crate::qgate::unitary_of(&qft_full(self.n, None)?)?;
        let a = linalg::diag_real(&self.centring());
        let fa = f.mat() * &a;
        Ok(fa.adjoint() * linalg::diag_real(&self.kinetic_diag()) * fa)
    }

    /// Dense `H = V + K`.
    pub fn hamiltonian(&self) -> Result<CMat> {
        Ok(linalg::diag_real(&self.samples) + self.kinetic()?)
    }

    fn centring(&self) -> Vec<f64> {
        (0..self.size()).map(|a| if a % 2 == 0 { 1.0 } else { -1.0 }).collect()
    }
}

/// Evolve `ψ₀` to time `t` with `[e^{−iK dt} e^{−iV dt}]^{t/dt}`. The step
/// count is `round(t/dt)` and the step is adjusted to land exactly on `t`.
pub fn zalka_wiesner(grid: &PotentialGrid, psi0: &Ket, t: f64, dt: f64) -> Result<Ket> {
    if !(dt > 0.0 && dt.is_finite() && t.is_finite()) || t < dt {
        return Err(Error::BadTimeStep(format!("t = {t}, dt = {dt}")));
    }
    if psi0.dim() != grid.size() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} on a grid of {} points",
            psi0.dim(),
            grid.size()
        )));
    }
    let steps = (t / dt).round() as usize;
    let h = t / steps as f64;
    let n = grid.n();
    let dims = vec![2; n];
    let f = qft_full(n, None)?;
    let finv = f.inverse();
    let centring = grid.centring();
    let vphase: Vec<_> = grid.samples().iter().map(|v| cis(-v * h)).collect();
    let kphase: Vec<_> = grid.kinetic_diag().iter().map(|k| cis(-k * h)).collect();
    let run = |c: &Circuit, v: CVec| -> Result<CVec> {
        c.steps()
            .iter()
            .try_fold(v, |acc, s| apply_amps(&acc, &dims, s.gate.mat(), &s.targets))
    };
    let mut v = psi0.amps().clone();
    for _ in 0..steps {
        for (a, p) in v.iter_mut().zip(&vphase) {
            *a *= p;
        }
        for (a, s) in v.iter_mut().zip(&centring) {
            *a *= *s;
        }
        v = run(&f, v)?;
        for (a, p) in v.iter_mut().zip(&kphase) {
            *a *= p;
        }
        v = run(&finv, v)?;
        for (a, s) in v.iter_mut().zip(&centring) {
            *a *= *s;
        }
    }
    Ket::new(vec![grid.size()], v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(n: usize, centre: f64, width: f64) -> Ket {
        let size = 1usize << n;
        let root = (size as f64).sqrt();
        let amps: Vec<_> = (0..size)
            .map(|k| {
                let x = k as f64 / root;
                linalg::c((-(x - centre).powi(2) / (2.0 * width * width)).exp(), 0.0)
            })
            .collect();
        Ket::from_slice(&[size], &amps).unwrap().normalized().unwrap()
    }

    #[test]
    fn free_particle_trotter_is_exact() {
        let grid = PotentialGrid::from_fn(5, 0.02, |_| 0.0).unwrap();
        let psi = gaussian(5, 2.8, 0.5);
        let got = zalka_wiesner(&grid, &psi, 1.0, 0.25).unwrap();
        let want = linalg::expm_hermitian(&grid.kinetic().unwrap(), 1.0) * psi.amps();
        assert!((got.amps() - want).camax() < 1e-9);
    }

    #[test]
    fn kinetic_is_hermitian() {
        let grid = PotentialGrid::from_fn(4, 0.5, |_| 0.0).unwrap();
        assert!(linalg::hermiticity_defect(&grid.kinetic().unwrap()) < 1e-12);
    }

    #[test]
    fn norm_is_preserved() {
        let grid = PotentialGrid::from_fn(5, 0.02, |x| (x - 2.8).powi(2)).unwrap();
        let out = zalka_wiesner(&grid, &gaussian(5, 2.0, 0.4), 2.0, 0.01).unwrap();
        assert!((out.norm() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bad_steps() {
        let grid = PotentialGrid::from_fn(3, 1.0, |_| 0.0).unwrap();
        let psi = Ket::basis(&[8], 0).unwrap();
        assert!(matches!(zalka_wiesner(&grid, &psi, 1.0, 0.0), Err(Error::BadTimeStep(_))));
        assert!(matches!(zalka_wiesner(&grid, &psi, 0.1, 1.0), Err(Error::BadTimeStep(_))));
    }

    #[test]
    fn table_resampling_interpolates() {
        let grid = PotentialGrid::from_points(2, 1.0, &[(0.0, 0.0), (2.0, 4.0)]).unwrap();
        // points 0, 0.5, 1, 1.5
        assert_eq!(grid.samples(), &[0.0, 1.0, 2.0, 3.0]);
    }
}
