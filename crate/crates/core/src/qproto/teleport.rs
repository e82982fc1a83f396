//! Teleportation of one qubit over a shared EPR pair.
//!
//! Register order is `A, B, C`: `A` and `B` share `(|00⟩+|11⟩)/√2`, `C`
//! carries the input. Alice applies CNOT(C→A) and H(C), then measures `A`
//! and `C`. Bob's correction, read off the expanded final state:
//!
//! | a | c | Bob holds        | correction |
//! |---|---|------------------|------------|
//! | 0 | 0 | `λ|0⟩ + μ|1⟩`     | I          |
//! | 1 | 0 | `λ|1⟩ + μ|0⟩`     | X          |
//! | 0 | 1 | `λ|0⟩ − μ|1⟩`     | Z          |
//! | 1 | 1 | `λ|1⟩ − μ|0⟩`     | X then Z   |

use crate::error::Result;
use crate::qgate::{self, GateMatrix};
use crate::qstate::{self, Bipartition, Ket};
use num_complex::Complex64;
use rand::Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Correction {
    I,
    X,
    Z,
    XZ,
}

impl Correction {
    pub fn from_bits(a: u8, c: u8) -> Self {
        match (a, c) {
            (0, 0) => Correction::I,
            (1, 0) => Correction::X,
            (0, 1) => Correction::Z,
            _ => Correction::XZ,
        }
    }

    /// Operator applied by Bob (X first, then Z).
    pub fn gate(self) -> GateMatrix {
        match self {
            Correction::I => GateMatrix::identity(2),
            Correction::X => qgate::x(),
            Correction::Z => qgate::z(),
            Correction::XZ => qgate::z().compose(&qgate::x()).expect("2x2 gates"),
        }
    }
}

fn alice_state(lambda: Complex64, mu: Complex64) -> Result<Ket> {
    let input = Ket::qubit(lambda, mu);
    input.ensure_normalized()?;
    let ab = Ket::epr();
    let mut psi = qstate::tensor(&ab, &input);
    psi = qgate::apply(&psi, &qgate::cnot(), &[2, 0])?;
    qgate::apply(&psi, &qgate::h(), &[2])
}

fn bob_after(psi: &Ket, a: u8, c: u8) -> Result<Ket> {
    let part = Bipartition::new(&[0, 2], 3)?;
    let outcome = (a as usize) * 2 + c as usize;
    let bob = qstate::condition_on(psi, &part, outcome)?;
    qgate::apply(&bob, &Correction::from_bits(a, c).gate(), &[0])
}

/// Bob's corrected state for a fixed measurement branch `(a, c)`.
pub fn teleport_branch(lambda: Complex64, mu: Complex64, a: u8, c: u8) -> Result<Ket> {
    let psi = alice_state(lambda, mu)?;
    bob_after(&psi, a, c)
}

/// Full protocol with a sampled measurement; returns Bob's state and `(a, c)`.
pub fn teleport<R: Rng + ?Sized>(
    lambda: Complex64,
    mu: Complex64,
    rng: &mut R,
) -> Result<(Ket, (u8, u8))> {
    let psi = alice_state(lambda, mu)?;
    let part = Bipartition::new(&[0, 2], 3)?;
    let probs = qstate::marginal_distribution(&psi, &part)?;
    let k = qstate::sample_index(&probs, rng);
    let (a, c) = ((k / 2) as u8, (k % 2) as u8);
    Ok((bob_after(&psi, a, c)?, (a, c)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::linalg::c;
    use crate::rng::rng_from_seed;

    #[test]
    fn basis_inputs_arrive_on_every_branch() {
        for (l, m, idx) in [(1.0, 0.0, 0), (0.0, 1.0, 1)] {
            let want = Ket::qubit_basis(1, idx).unwrap();
            for a in 0..2 {
                for cc in 0..2 {
                    let bob = teleport_branch(c(l, 0.0), c(m, 0.0), a, cc).unwrap();
                    assert!((bob.fidelity(&want) - 1.0).abs() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn sampled_run_matches_input() {
        let mut rng = rng_from_seed(3);
        let (l, m) = (c(0.6, 0.0), c(0.0, 0.8));
        let want = Ket::qubit(l, m);
        for _ in 0..8 {
            let (bob, _) = teleport(l, m, &mut rng).unwrap();
            assert!((bob.fidelity(&want) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn unnormalized_input_rejected() {
        let e = teleport_branch(c(1.0, 0.0), c(1.0, 0.0), 0, 0).unwrap_err();
        assert!(matches!(e, Error::NotNormalized { .. }));
    }
}
