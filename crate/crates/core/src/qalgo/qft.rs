//! Quantum Fourier transform circuits.
//!
//! The forward transform is `|a⟩ → N^{−1/2} Σ_b e^{−2πi ab/N}|b⟩`. The gate
//! network (Hadamards and controlled phases `diag(1, 1, 1, e^{∓iπ/2^{k−j}})`)
//! leaves the output in bit-reversed order; `qft` returns that network and
//! `qft_full` appends an explicit permutation step restoring natural order.

use crate::error::{Error, Result};
use crate::qgate::{self, Circuit, GateMatrix};
use std::f64::consts::PI;

fn network(n: usize, cutoff: Option<usize>, sign: f64) -> Result<Circuit> {
    if n == 0 {
        return Err(Error::BadParams("QFT needs at least one qubit".into()));
    }
    if cutoff == Some(0) {
        return Err(Error::BadCutoff);
    }
    let d = cutoff.unwrap_or(n);
    let mut c = Circuit::qubits(n)?;
    for j in 0..n {
        c.push(qgate::h(), &[j])?;
        for k in (j + 1)..n.min(j + d + 1) {
            let phi = sign * PI / 2f64.powi((k - j) as i32);
            c.push(qgate::controlled_phase(phi), &[j, k])?;
        }
    }
    Ok(c)
}

/// Forward QFT network without the final bit reversal: its unitary is
/// `P_rev · DFT`. With `cutoff = d`, phase gates with `k − j > d` are dropped.
pub fn qft(n: usize, cutoff: Option<usize>) -> Result<Circuit> {
    network(n, cutoff, -1.0)
}

/// Exact inverse of `qft(n, cutoff)`.
pub fn qft_inverse(n: usize, cutoff: Option<usize>) -> Result<Circuit> {
    Ok(qft(n, cutoff)?.inverse())
}

/// Permutation `|b_0 … b_{n−1}⟩ → |b_{n−1} … b_0⟩` as one `2^n`-dimensional step.
pub fn bit_reversal(n: usize) -> GateMatrix {
    let perm: Vec<usize> = (0..1usize << n)
        .map(|x| (0..n).fold(0, |acc, b| (acc << 1) | ((x >> b) & 1)))
        .collect();
    GateMatrix::permutation(&perm).expect("bit reversal is a permutation")
}

/// Forward QFT in natural output order.
pub fn qft_full(n: usize, cutoff: Option<usize>) -> Result<Circuit> {
    let mut c = qft(n, cutoff)?;
    let all: Vec<usize> = (0..n).collect();
    c.push(bit_reversal(n), &all)?;
    Ok(c)
}

/// Upper bound on `‖U_trunc − U_full‖`: the sum of `π/2^{k−j}` over the
/// omitted phase gates.
pub fn truncation_bound(n: usize, cutoff: usize) -> f64 {
    let mut s = 0.0;
    for j in 0..n {
        for k in (j + 1)..n {
            if k - j > cutoff {
                s += PI / 2f64.powi((k - j) as i32);
            }
        }
    }
    s
}
