//! Isolating one two-qubit phase from an always-on diagonal coupling by
//! toggling the other qubits with NOT pulses.
//!
//! Phase bookkeeping is classical: on basis string `b` (bits `0/1`) the pair
//! `(p, q)` accrues `d_pq · dt · b̃_p b̃_q` per step, where `b̃` is `b` with the
//! currently toggled qubits inverted. Qubits `j, k` of the kept pair are never
//! toggled; every other qubit ends with an even number of pulses. Averaging
//! leaves `½ d_pj b_j` per unit time for each kept-toggled pair and `¼ d_pq`
//! for each toggled pair; both are removable with single-qubit phases, after
//! which the remainder should be `d_jk T b_j b_k`.

use crate::error::{Error, Result};
use nalgebra::DMatrix;
use rand::Rng;

#[derive(Debug, Clone, PartialEq)]
pub struct DecouplingReport {
    /// Compensated phase per basis string.
    pub achieved: Vec<f64>,
    /// `d_jk T b_j b_k` per basis string.
    pub target: Vec<f64>,
    /// `max_b |achieved − target|`.
    pub error: f64,
    /// NOT pulses applied, including the final parity restoration.
    pub pulses: usize,
    pub steps: usize,
}

impl DecouplingReport {
    pub fn pulses_per_step(&self) -> f64 {
        self.pulses as f64 / self.steps as f64
    }
}

fn validate(d: &DMatrix<f64>, pair: (usize, usize), total: f64, dt: f64) -> Result<usize> {
    let n = d.nrows();
    if d.ncols() != n || n < 2 || n > 16 {
        return Err(Error::DimensionMismatch(format!("{}x{} coupling matrix", n, d.ncols())));
    }
    if (d - d.transpose()).amax() > 1e-12 {
        return Err(Error::BadParams("coupling matrix must be symmetric".into()));
    }
    let (j, k) = pair;
    if j >= n || k >= n {
        return Err(Error::IndexOutOfRange { index: j.max(k), limit: n });
    }
    if j == k {
        return Err(Error::BadParams("kept pair needs two distinct qubits".into()));
    }
    if !(dt > 0.0 && dt.is_finite()) || !(total >= dt && total.is_finite()) {
        return Err(Error::BadTimeStep(format!("T = {total}, dt = {dt}")));
    }
    Ok(((total / dt).round() as usize).max(1))
}

/// Integrate the bookkeeping for a toggle schedule `toggles(step) -> mask`
/// giving the qubits to flip at the start of each step.
fn bookkeep(
    d: &DMatrix<f64>,
    pair: (usize, usize),
    total: f64,
    steps: usize,
    mut toggles: impl FnMut(usize) -> u32,
) -> DecouplingReport {
    let n = d.nrows();
    let dt = total / steps as f64;
    // occ[p][q][fp*2+fq]: time spent with toggle states (fp, fq)
    let mut occ = vec![[0.0f64; 4]; n * n];
    let mut mask = 0u32;
    let mut pulses = 0;
    for s in 0..steps {
        let flip = toggles(s);
        pulses += flip.count_ones() as usize;
        mask ^= flip;
        for p in 0..n {
            let fp = (mask >> p) & 1;
            for q in (p + 1)..n {
                let fq = (mask >> q) & 1;
                occ[p * n + q][(fp * 2 + fq) as usize] += dt;
            }
        }
    }
    pulses += mask.count_ones() as usize;

    let (j, k) = pair;
    let free: Vec<usize> = (0..n).filter(|&p| p != j && p != k).collect();
    let bit = |b: usize, i: usize| ((b >> (n - 1 - i)) & 1) as f64;
    let mut achieved = Vec::with_capacity(1 << n);
    let mut target = Vec::with_capacity(1 << n);
    let mut error: f64 = 0.0;
    for b in 0..1usize << n {
        let mut phase = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                if d[(p, q)] == 0.0 {
                    continue;
                }
                let (bp, bq) = (bit(b, p), bit(b, q));
                let o = &occ[p * n + q];
                let w = o[0] * bp * bq
                    + o[1] * bp * (1.0 - bq)
                    + o[2] * (1.0 - bp) * bq
                    + o[3] * (1.0 - bp) * (1.0 - bq);
                phase += d[(p, q)] * w;
            }
        }
        let mut comp = 0.0;
        for &p in &free {
            comp += 0.5 * (d[(p, j)] * bit(b, j) + d[(p, k)] * bit(b, k)) * total;
        }
        for (a, &p) in free.iter().enumerate() {
            for &q in &free[a + 1..] {
                comp += 0.25 * d[(p, q)] * total;
            }
        }
        let got = phase - comp;
        let want = d[(j, k)] * total * bit(b, j) * bit(b, k);
        error = error.max((got - want).abs());
        achieved.push(got);
        target.push(want);
    }
    DecouplingReport { achieved, target, error, pulses, steps }
}

/// Random pulses: each free qubit flips with probability `λ·dt` per step,
/// a discretized Poisson process of density `λ`.
pub fn randomized_decoupling<R: Rng + ?Sized>(
    d: &DMatrix<f64>,
    pair: (usize, usize),
    lambda: f64,
    total: f64,
    dt: f64,
    rng: &mut R,
) -> Result<DecouplingReport> {
    let steps = validate(d, pair, total, dt)?;
    let p = lambda * dt;
    if !(0.0..=0.5).contains(&p) {
        return Err(Error::BadDensity(p));
    }
    let n = d.nrows();
    let free: Vec<usize> = (0..n).filter(|&q| q != pair.0 && q != pair.1).collect();
    Ok(bookkeep(d, pair, total, steps, |_| {
        free.iter()
            .filter(|_| rng.random::<f64>() < p)
            .fold(0u32, |m, &q| m | (1 << q))
    }))
}

/// Periodic pulses: the `ℓ`-th free qubit (`ℓ = 1, 2, …`) flips at every
/// multiple of `ℓ·dt`. Free pairs whose periods have an odd ratio other than
/// one keep a residual correlation, so the cancellation is exact only for
/// period ratios that are even.
pub fn periodic_decoupling(
    d: &DMatrix<f64>,
    pair: (usize, usize),
    total: f64,
    dt: f64,
) -> Result<DecouplingReport> {
    let steps = validate(d, pair, total, dt)?;
    let n = d.nrows();
    let free: Vec<usize> = (0..n).filter(|&q| q != pair.0 && q != pair.1).collect();
    Ok(bookkeep(d, pair, total, steps, |s| {
        if s == 0 {
            return 0;
        }
        free.iter()
            .enumerate()
            .filter(|(l, _)| s % (l + 1) == 0)
            .fold(0u32, |m, (_, &q)| m | (1 << q))
    }))
}
