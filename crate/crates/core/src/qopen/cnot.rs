//! CNOT from a fixed diagonal two-qubit interaction and one-qubit phases.
//!
//! With `U = e^{−iH}`, `H = diag(E₁, E₂, E₃, E₄)`, the local phases
//! `A = diag(1, e^{i(E₃−E₁)})` on the first qubit and `B = diag(e^{iE₁}, e^{iE₂})`
//! on the second give `U(A⊗B) = diag(1, 1, 1, e^{−iΔE})`, `ΔE = E₁−E₂−E₃+E₄`.
//! Repeating it `n` times with `ΔE·n ≈ π(2m+1)` approximates `diag(1, 1, 1, −1)`,
//! and conjugating the target by Hadamards yields CNOT.

use crate::error::{Error, Result};
use crate::linalg::{self, cis, ONE};
use crate::qgate::{self, Circuit, GateMatrix};
use std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq)]
pub struct CnotSynthesis {
    pub n: usize,
    pub m: usize,
    /// `|ΔE·n − π(2m+1)|`.
    pub phase_error: f64,
    pub circuit: Circuit,
    /// Spectral-norm distance of the assembled circuit from CNOT.
    pub operator_error: f64,
}

pub fn cnot_from_diagonal(e: [f64; 4], eps: f64, n_cap: usize) -> Result<CnotSynthesis> {
    if e.iter().any(|v| !v.is_finite()) || !(eps > 0.0) {
        return Err(Error::BadParams("energies must be finite and eps positive".into()));
    }
    let de = e[0] - e[1] - e[2] + e[3];
    if de.abs() < 1e-15 {
        return Err(Error::BadParams("E1 - E2 - E3 + E4 must be nonzero".into()));
    }
    let mut best: Option<(usize, usize, f64)> = None;
    for n in 1..=n_cap {
        let x = de.abs() * n as f64;
        let m = ((x / PI - 1.0) / 2.0).round().max(0.0) as usize;
        let err = (x - PI * (2 * m + 1) as f64).abs();
        if best.is_none_or(|b| err < b.2 - 1e-15) {
            best = Some((n, m, err));
        }
    }
    let (n, m, phase_error) = match best {
        Some(b) if b.2 < eps => b,
        Some(b) => {
            return Err(Error::NotFound(format!(
                "best n = {} misses pi(2m+1) by {:.3e}",
                b.0, b.2
            )))
        }
        None => return Err(Error::NotFound("empty search range".into())),
    };
    let u = GateMatrix::new(linalg::diag(&[cis(-e[0]), cis(-e[1]), cis(-e[2]), cis(-e[3])]))?;
    let a = GateMatrix::new(linalg::diag(&[ONE, cis(e[2] - e[0])]))?;
    let b = GateMatrix::new(linalg::diag(&[cis(e[0]), cis(e[1])]))?;
    let mut circuit = Circuit::qubits(2)?;
    circuit.push(qgate::h(), &[1])?;
    for _ in 0..n {
        circuit.push(u.clone(), &[0, 1])?;
        circuit.push(a.clone(), &[0])?;
        circuit.push(b.clone(), &[1])?;
    }
    circuit.push(qgate::h(), &[1])?;
    let operator_error = qgate::unitary_of(&circuit)?.distance(&qgate::cnot());
    Ok(CnotSynthesis { n, m, phase_error, circuit, operator_error })
}
