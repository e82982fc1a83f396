//! CHSH correlations on an EPR pair.
//!
//! Alice chooses `X = σx` or `Y = σz`; Bob chooses `a = (σx+σz)/√2` or
//! `b = (σx−σz)/√2`. The statistic is `M = ¼(⟨Xa⟩ + ⟨Xb⟩ + ⟨Ya⟩ − ⟨Yb⟩)`,
//! bounded by `½` for local hidden variables.

use crate::error::{Error, Result};
use crate::linalg::{c, kron, CMat, Eigh};
use crate::qstate::{density_of, DensityOp, Ket};
use crate::rng::{batches, Streams};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

/// A ±1-valued qubit observable.
#[derive(Debug, Clone, PartialEq)]
pub struct DetectorSetting {
    observable: CMat,
}

impl DetectorSetting {
    pub fn new(observable: CMat) -> Result<Self> {
        if observable.shape() != (2, 2) {
            return Err(Error::DimensionMismatch("detector observable must be 2x2".into()));
        }
        let e = Eigh::new(&observable);
        let defect = (e.values[0] + 1.0).abs().max((e.values[1] - 1.0).abs());
        if crate::linalg::hermiticity_defect(&observable) > 1e-9 || defect > 1e-9 {
            return Err(Error::BadParams("detector observable must have eigenvalues ±1".into()));
        }
        Ok(DetectorSetting { observable })
    }

    /// `cos φ σx + sin φ σz`.
    pub fn in_plane(phi: f64) -> Self {
        let (s, co) = phi.sin_cos();
        let m = CMat::from_row_slice(2, 2, &[c(s, 0.0), c(co, 0.0), c(co, 0.0), c(-s, 0.0)]);
        DetectorSetting { observable: m }
    }

    pub fn sigma_x() -> Self {
        Self::in_plane(0.0)
    }

    pub fn sigma_z() -> Self {
        Self::in_plane(std::f64::consts::FRAC_PI_2)
    }

    pub fn observable(&self) -> &CMat {
        &self.observable
    }

    /// Projector onto outcome `+1` (`true`) or `−1` (`false`).
    pub fn projector(&self, plus: bool) -> CMat {
        let s = if plus { 0.5 } else { -0.5 };
        crate::linalg::identity(2).scale(0.5) + self.observable.scale(s)
    }
}

/// Alice's settings `[X, Y]` and Bob's `[a, b]`.
pub fn settings() -> ([DetectorSetting; 2], [DetectorSetting; 2]) {
    use std::f64::consts::FRAC_PI_4;
    (
        [DetectorSetting::sigma_x(), DetectorSetting::sigma_z()],
        [DetectorSetting::in_plane(FRAC_PI_4), DetectorSetting::in_plane(-FRAC_PI_4)],
    )
}

fn sign(sa: usize, sb: usize) -> f64 {
    if sa == 1 && sb == 1 {
        -1.0
    } else {
        1.0
    }
}

/// `M` for an arbitrary two-qubit density operator.
pub fn chsh_value(rho: &DensityOp) -> f64 {
    let (alice, bob) = settings();
    let mut m = 0.0;
    for (sa, a) in alice.iter().enumerate() {
        for (sb, b) in bob.iter().enumerate() {
            let e = rho.expectation(&kron(a.observable(), b.observable())).re;
            m += 0.25 * sign(sa, sb) * e;
        }
    }
    m
}

/// Exact quantum value on `(|00⟩+|11⟩)/√2`; equals `√2/2`.
pub fn chsh_exact() -> f64 {
    chsh_value(&density_of(&Ket::epr()))
}

/// Value on the classical mixture `½|00⟩⟨00| + ½|11⟩⟨11|`.
pub fn chsh_mixture() -> f64 {
    let k0 = Ket::qubit_basis(2, 0).expect("valid index");
    let k3 = Ket::qubit_basis(2, 3).expect("valid index");
    let rho = DensityOp::mixture(&[0.5, 0.5], &[k0, k3]).expect("valid mixture");
    chsh_value(&rho)
}

/// Largest `M` over deterministic local strategies (each side maps its
/// setting to a fixed ±1).
pub fn chsh_classical_max() -> f64 {
    let mut best = f64::NEG_INFINITY;
    for mask in 0..16u32 {
        let o = |k: u32| if mask >> k & 1 == 1 { 1.0 } else { -1.0 };
        let mut m = 0.0;
        for sa in 0..2 {
            for sb in 0..2 {
                m += 0.25 * sign(sa, sb) * o(sa as u32) * o(2 + sb as u32);
            }
        }
        best = best.max(m);
    }
    best
}

/// One measured pair; settings are `0/1` indices into [`settings`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChshTrial {
    pub setting_a: u8,
    pub setting_b: u8,
    pub outcome_a: i8,
    pub outcome_b: i8,
}

/// Joint outcome probabilities `[sa][sb][(oa,ob)]` with index `2·[oa=−1] + [ob=−1]`.
fn joint_table(rho: &DensityOp) -> [[[f64; 4]; 2]; 2] {
    let (alice, bob) = settings();
    let mut t = [[[0.0; 4]; 2]; 2];
    for sa in 0..2 {
        for sb in 0..2 {
            for k in 0..4 {
                let p = kron(&alice[sa].projector(k < 2), &bob[sb].projector(k % 2 == 0));
                t[sa][sb][k] = rho.expectation(&p).re.max(0.0);
            }
        }
    }
    t
}

fn draw<R: Rng + ?Sized>(table: &[[[f64; 4]; 2]; 2], rng: &mut R) -> ChshTrial {
    let sa = usize::from(rng.random::<bool>());
    let sb = usize::from(rng.random::<bool>());
    let k = crate::qstate::sample_index(&table[sa][sb], rng);
    ChshTrial {
        setting_a: sa as u8,
        setting_b: sb as u8,
        outcome_a: if k < 2 { 1 } else { -1 },
        outcome_b: if k % 2 == 0 { 1 } else { -1 },
    }
}

/// `shots` measured EPR pairs with uniformly random settings. Batch `k`
/// draws from stream `k`, so the output does not depend on the thread count.
pub fn chsh_trials(shots: usize, streams: &Streams) -> Vec<ChshTrial> {
    let table = joint_table(&density_of(&Ket::epr()));
    batches(shots)
        .into_par_iter()
        .map(|(id, len)| {
            let mut rng = streams.stream(id);
            (0..len).map(|_| draw(&table, &mut rng)).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .concat()
}

/// Monte-Carlo estimate of `M` and its standard error. The per-trial
/// estimator `sign · o_a · o_b` has mean `M` because each of the four
/// setting pairs is drawn with probability ¼.
pub fn chsh_sample(shots: usize, streams: &Streams) -> (f64, f64) {
    let trials = chsh_trials(shots, streams);
    let xs: Vec<f64> = trials
        .iter()
        .map(|t| {
            sign(t.setting_a as usize, t.setting_b as usize) * f64::from(t.outcome_a * t.outcome_b)
        })
        .collect();
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (0.0, f64::INFINITY);
    }
    let mean = xs.iter().sum::<f64>() / n;
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (mean, (var / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_value_is_half_root_two() {
        assert!((chsh_exact() - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn classical_controls_respect_bound() {
        assert!(chsh_mixture() <= 0.5 + 1e-12);
        assert!((chsh_classical_max() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn settings_are_dichotomic() {
        let (a, b) = settings();
        for s in a.iter().chain(b.iter()) {
            assert!(DetectorSetting::new(s.observable().clone()).is_ok());
        }
        assert!(DetectorSetting::new(crate::linalg::identity(2)).is_err());
    }

    #[test]
    fn sample_close_to_exact() {
        let (m, se) = chsh_sample(20_000, &Streams::new(5));
        assert!((m - chsh_exact()).abs() < 4.0 * se, "{m} ± {se}");
    }
}
