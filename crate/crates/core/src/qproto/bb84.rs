//! BB84 key distribution with an optional intercept-resend eavesdropper.

use crate::linalg::{c, CVec};
use rand::seq::index;
use rand::Rng;

/// QBER above this aborts the exchange.
pub const THRESHOLD: f64 = 0.12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Clean,
    EveDetected,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bb84Report {
    /// Sifted bits kept after the disclosed check bits are removed.
    pub key: Vec<u8>,
    pub sifted: usize,
    pub checked: usize,
    pub errors: usize,
    pub qber: f64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Basis {
    Z,
    X,
}

fn basis<R: Rng + ?Sized>(rng: &mut R) -> Basis {
    if rng.random::<bool>() {
        Basis::X
    } else {
        Basis::Z
    }
}

fn encode(bit: u8, b: Basis) -> CVec {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    match (b, bit) {
        (Basis::Z, 0) => CVec::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]),
        (Basis::Z, _) => CVec::from_vec(vec![c(0.0, 0.0), c(1.0, 0.0)]),
        (Basis::X, 0) => CVec::from_vec(vec![c(s, 0.0), c(s, 0.0)]),
        (Basis::X, _) => CVec::from_vec(vec![c(s, 0.0), c(-s, 0.0)]),
    }
}

/// Projective measurement of a photon; returns the bit and the collapsed state.
fn measure<R: Rng + ?Sized>(psi: &CVec, b: Basis, rng: &mut R) -> (u8, CVec) {
    let p0 = encode(0, b).dotc(psi).norm_sqr();
    let bit = u8::from(rng.random::<f64>() >= p0);
    (bit, encode(bit, b))
}

/// Exchange `n_bits` photons and disclose `check` of the sifted positions.
fn run<R: Rng + ?Sized>(
    n_bits: usize,
    eve: bool,
    check: impl Fn(usize) -> usize,
    rng: &mut R,
) -> Bb84Report {
    let mut alice = Vec::new();
    let mut bob = Vec::new();
    for _ in 0..n_bits {
        let bit = u8::from(rng.random::<bool>());
        let ab = basis(rng);
        let mut photon = encode(bit, ab);
        if eve {
            let eb = basis(rng);
            photon = measure(&photon, eb, rng).1;
        }
        let bb = basis(rng);
        let (got, _) = measure(&photon, bb, rng);
        if ab == bb {
            alice.push(bit);
            bob.push(got);
        }
    }
    let sifted = alice.len();
    let checked = check(sifted).min(sifted);
    let mut disclosed = vec![false; sifted];
    for i in index::sample(rng, sifted, checked) {
        disclosed[i] = true;
    }
    let errors = (0..sifted).filter(|&i| disclosed[i] && alice[i] != bob[i]).count();
    let key = (0..sifted).filter(|&i| !disclosed[i]).map(|i| bob[i]).collect();
    let qber = if checked == 0 { 0.0 } else { errors as f64 / checked as f64 };
    let verdict = if qber > THRESHOLD { Verdict::EveDetected } else { Verdict::Clean };
    Bb84Report { key, sifted, checked, errors, qber, verdict }
}

/// Runs BB84, disclosing `check_fraction` of the sifted bits to estimate the
/// QBER. `n_bits` below 16 is raised to 16.
pub fn bb84<R: Rng + ?Sized>(
    n_bits: usize,
    eve: bool,
    check_fraction: f64,
    rng: &mut R,
) -> Bb84Report {
    let f = check_fraction.clamp(0.0, 1.0);
    run(n_bits.max(16), eve, |s| (s as f64 * f).round() as usize, rng)
}

/// Runs BB84 disclosing exactly `k` sifted bits (fewer if not enough survive).
pub fn bb84_checked<R: Rng + ?Sized>(n_bits: usize, eve: bool, k: usize, rng: &mut R) -> Bb84Report {
    run(n_bits.max(16), eve, |_| k, rng)
}
