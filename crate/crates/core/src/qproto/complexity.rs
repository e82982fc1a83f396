//! Entanglement-based complexity of qubit registers.
//!
//! A state splits across a bipartition when its Schmidt rank there is 1.
//! Naive complexity keeps the qubit order fixed and cuts only between
//! neighbours; quantum complexity allows any grouping of qubits, which is
//! the same as minimizing the naive value over qubit permutations.

use crate::error::{Error, Result};
use crate::qstate::{leading, schmidt, Bipartition, Ket};

/// Singular values at or below this count as zero.
pub const SCHMIDT_TOL: f64 = 1e-8;

const MAX_QUBITS: usize = 12;

fn qubit_count(psi: &Ket) -> Result<usize> {
    if psi.dims().iter().any(|&d| d != 2) {
        return Err(Error::DimensionMismatch("complexity needs a qubit register".into()));
    }
    let n = psi.dims().len();
    if n > MAX_QUBITS {
        return Err(Error::TooLarge(n));
    }
    psi.ensure_normalized()?;
    Ok(n)
}

fn splits(psi: &Ket, part: &Bipartition, tol: f64) -> Result<bool> {
    Ok(schmidt(psi, part)?.rank(tol) == 1)
}

/// Largest contiguous block in the finest factorization that respects the
/// qubit order. Product states give 1.
pub fn naive_complexity(psi: &Ket, tol: f64) -> Result<usize> {
    let n = qubit_count(psi)?;
    let mut best = 0;
    let mut start = 0;
    for k in 1..n {
        if splits(psi, &leading(k, n)?, tol)? {
            best = best.max(k - start);
            start = k;
        }
    }
    Ok(best.max(n - start))
}

/// Largest factor in the finest factorization over arbitrary qubit subsets.
///
/// Subsets across which the state splits are closed under complement,
/// union and intersection, so the factor holding qubit `q` is the
/// intersection of all splitting subsets that contain `q`.
pub fn quantum_complexity(psi: &Ket, tol: f64) -> Result<usize> {
    let n = qubit_count(psi)?;
    if n <= 1 {
        return Ok(n);
    }
    let full: u32 = (1 << n) - 1;
    let mut atoms = vec![full; n];
    // masks containing qubit 0 cover every cut once
    for mask in (1..full).filter(|m| m & 1 == 1) {
        let keep: Vec<usize> = (0..n).filter(|&q| mask >> q & 1 == 1).collect();
        if splits(psi, &Bipartition::new(&keep, n)?, tol)? {
            for (q, atom) in atoms.iter_mut().enumerate() {
                *atom &= if mask >> q & 1 == 1 { mask } else { full & !mask };
            }
        }
    }
    Ok(atoms.iter().map(|a| a.count_ones() as usize).max().unwrap_or(1))
}
