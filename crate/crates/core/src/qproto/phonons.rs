//! Normal modes of a ring of identical masses joined by identical springs.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, SymmetricEigen};

fn check(n: usize, m: f64, k: f64) -> Result<()> {
    if n < 2 || !(m > 0.0) || !(k >= 0.0) {
        return Err(Error::BadParams(format!("need N >= 2, m > 0, K >= 0; got N={n}, m={m}, K={k}")));
    }
    Ok(())
}

/// `ω_q = √(2K/m · (1 − cos(2πq/N)))` for `q = 0..N`.
pub fn oscillator_chain_spectrum(n: usize, m: f64, k: f64) -> Result<Vec<f64>> {
    check(n, m, k)?;
    let d = 2.0 * std::f64::consts::PI / n as f64;
    Ok((0..n).map(|q| (2.0 * k / m * (1.0 - (q as f64 * d).cos())).max(0.0).sqrt()).collect())
}

/// Frequencies from a dense eigensolve of the circulant force matrix
/// `(K/m)(2δ_ij − δ_{i,j+1} − δ_{i,j−1})`, ascending. Eigenvalues within
/// round-off of zero are set to zero before the square root.
pub fn circulant_frequencies(n: usize, m: f64, k: f64) -> Result<Vec<f64>> {
    check(n, m, k)?;
    let mut f = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        f[(i, i)] += 2.0 * k / m;
        f[(i, (i + 1) % n)] -= k / m;
        f[(i, (i + n - 1) % n)] -= k / m;
    }
    let floor = 64.0 * f64::EPSILON * 4.0 * k / m;
    let mut w: Vec<f64> = SymmetricEigen::new(f)
        .eigenvalues
        .iter()
        .map(|&l| if l <= floor { 0.0 } else { l.sqrt() })
        .collect();
    w.sort_by(f64::total_cmp);
    Ok(w)
}
