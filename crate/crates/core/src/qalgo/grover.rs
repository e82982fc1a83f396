//! Grover search with known and unknown solution counts, and threshold
//! minimization built on it.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, CVec};
use crate::qstate::sample_index;
use rand::Rng;
use std::cell::Cell;
use std::f64::consts::PI;

/// Boolean function on `n`-bit strings with a query counter.
pub struct BooleanOracle {
    n: usize,
    eval: Box<dyn Fn(usize) -> bool>,
    queries: Cell<usize>,
}

impl std::fmt::Debug for BooleanOracle {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("BooleanOracle")
            .field("n", &self.n)
            .field("queries", &self.queries.get())
            .finish()
    }
}

impl BooleanOracle {
    pub fn new(n: usize, eval: impl Fn(usize) -> bool + 'static) -> Self {
        BooleanOracle { n, eval: Box::new(eval), queries: Cell::new(0) }
    }

    /// `f(x) = 1` exactly on `marked`.
    pub fn marked(n: usize, marked: &[usize]) -> Self {
        let set: Vec<usize> = marked.to_vec();
        BooleanOracle::new(n, move |x| set.contains(&x))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        1 << self.n
    }

    pub fn queries(&self) -> usize {
        self.queries.get()
    }

    /// Classical query; counts once.
    pub fn query(&self, x: usize) -> bool {
        self.queries.set(self.queries.get() + 1);
        (self.eval)(x)
    }

    /// `|x⟩ → (−1)^{f(x)}|x⟩`; one oracle-gate application, counts once.
    pub fn reflect(&self, amps: &mut CVec) {
        self.queries.set(self.queries.get() + 1);
        for (x, a) in amps.iter_mut().enumerate() {
            if (self.eval)(x) {
                *a = -*a;
            }
        }
    }

    /// Exhaustive list of solutions, for analysis only; not counted.
    pub fn solutions(&self) -> Vec<usize> {
        (0..self.size()).filter(|&x| (self.eval)(x)).collect()
    }
}

/// Matrix of the sign-flip oracle `diag((−1)^{f(x)})`.
pub fn oracle_reflection(f: &BooleanOracle) -> CMat {
    let signs: Vec<f64> = (0..f.size())
        .map(|x| if (f.eval)(x) { -1.0 } else { 1.0 })
        .collect();
    linalg::diag_real(&signs)
}

/// `2|0̃⟩⟨0̃| − I` on `n` qubits, where `|0̃⟩` is the uniform superposition.
pub fn diffusion(n: usize) -> CMat {
    let size = 1usize << n;
    let w = 2.0 / size as f64;
    CMat::from_fn(size, size, |i, j| c(w - if i == j { 1.0 } else { 0.0 }, 0.0))
}

fn uniform(size: usize) -> CVec {
    CVec::from_element(size, c(1.0 / (size as f64).sqrt(), 0.0))
}

fn diffuse(amps: &mut CVec) {
    let mean = amps.sum() / amps.len() as f64;
    for a in amps.iter_mut() {
        *a = mean * 2.0 - *a;
    }
}

/// State after `k` Grover iterations from the uniform superposition.
pub fn grover_state(f: &BooleanOracle, k: usize) -> CVec {
    let mut v = uniform(f.size());
    for _ in 0..k {
        f.reflect(&mut v);
        diffuse(&mut v);
    }
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroverReport {
    pub iterations: usize,
    pub success_prob: f64,
    pub measured: usize,
    pub oracle_calls: usize,
}

/// Optimal iteration count `round(π/(4θ) − ½)` with `θ = arcsin √(l/N)`.
pub fn optimal_iterations(n: usize, l: usize) -> Result<usize> {
    let size = 1usize << n;
    if l == 0 {
        return Err(Error::NoSolutions);
    }
    if l > size {
        return Err(Error::BadParams(format!("{l} solutions among {size} strings")));
    }
    let theta = (l as f64 / size as f64).sqrt().asin();
    Ok((PI / (4.0 * theta) - 0.5).round().max(0.0) as usize)
}

/// Grover search with a known number `l` of solutions. `measured` is the most
/// probable index of the final state.
pub fn grover(f: &BooleanOracle, l: usize) -> Result<GroverReport> {
    let k = optimal_iterations(f.n(), l)?;
    let before = f.queries();
    let v = grover_state(f, k);
    let oracle_calls = f.queries() - before;
    let success_prob = f.solutions().iter().map(|&x| v[x].norm_sqr()).sum::<f64>();
    let measured = v
        .iter()
        .enumerate()
        .fold((0, -1.0), |best, (i, a)| if a.norm_sqr() > best.1 { (i, a.norm_sqr()) } else { best })
        .0;
    Ok(GroverReport { iterations: k, success_prob, measured, oracle_calls })
}

const UNKNOWN_SWEEPS: usize = 3;

/// Search with an unknown number of solutions: for `τ_s = 2^s`, draw
/// `j ∈ [0, τ_s)`, run `j` iterations, measure and verify with one query.
/// The schedule sweeps up to `τ ≤ ⌈√N⌉` and is repeated a few times before
/// giving up. Returns the solution and total oracle calls.
pub fn grover_unknown<R: Rng + ?Sized>(f: &BooleanOracle, rng: &mut R) -> Result<(usize, usize)> {
    let before = f.queries();
    let cap = ((f.size() as f64).sqrt().ceil() as usize).max(1);
    for _ in 0..UNKNOWN_SWEEPS {
        let mut tau = 1usize;
        while tau <= cap {
            let j = rng.random_range(0..tau);
            let v = grover_state(f, j);
            let p: Vec<f64> = v.iter().map(|a| a.norm_sqr()).collect();
            let x = sample_index(&p, rng);
            if f.query(x) {
                return Ok((x, f.queries() - before));
            }
            tau *= 2;
        }
    }
    Err(Error::Exhausted { calls: f.queries() - before })
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub index: usize,
    pub value: i64,
    pub rounds: usize,
    pub oracle_calls: usize,
}

/// Threshold descent: start from a random index `y`, search for any `x` with
/// `f(x) < f(y)`, move there, and stop once the search finds nothing.
pub fn grover_minimize<R: Rng + ?Sized>(
    f: &dyn Fn(usize) -> i64,
    n: usize,
    rng: &mut R,
) -> Minimum {
    let size = 1usize << n;
    let mut y = rng.random_range(0..size);
    let mut fy = f(y);
    let mut rounds = 0;
    let mut calls = 0;
    loop {
        rounds += 1;
        let values: Vec<i64> = (0..size).map(f).collect();
        let oracle = BooleanOracle::new(n, move |x| values[x] < fy);
        match grover_unknown(&oracle, rng) {
            Ok((x, used)) => {
                calls += used;
                y = x;
                fy = f(x);
            }
            Err(Error::Exhausted { calls: used }) => {
                calls += used;
                return Minimum { index: y, value: fy, rounds, oracle_calls: calls };
            }
            Err(_) => unreachable!("grover_unknown only fails with Exhausted"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;

    #[test]
    fn constant_zero_oracle_is_identity() {
        let f = BooleanOracle::new(3, |_| false);
        assert_eq!(oracle_reflection(&f), linalg::identity(8));
    }

    #[test]
    fn single_mark_flips_one_sign() {
        let f = BooleanOracle::marked(3, &[5]);
        let m = oracle_reflection(&f);
        for i in 0..8 {
            assert_eq!(m[(i, i)].re, if i == 5 { -1.0 } else { 1.0 });
        }
    }

    #[test]
    fn diffusion_fixes_uniform() {
        let u = uniform(8);
        assert!((diffusion(3) * &u - &u).camax() < 1e-12);
    }

    #[test]
    fn n2_single_solution_is_certain() {
        let f = BooleanOracle::marked(2, &[3]);
        let r = grover(&f, 1).unwrap();
        assert_eq!(r.iterations, 1);
        assert!((r.success_prob - 1.0).abs() < 1e-12);
        assert_eq!(r.measured, 3);
        assert_eq!(r.oracle_calls, 1);
    }

    #[test]
    fn n3_single_solution() {
        let f = BooleanOracle::marked(3, &[6]);
        let r = grover(&f, 1).unwrap();
        assert_eq!(r.iterations, 2);
        let want = (5.0 * (1.0 / 8f64.sqrt()).asin()).sin().powi(2);
        assert!((r.success_prob - want).abs() < 1e-12);
        assert!((r.success_prob - 0.9453).abs() < 1e-4);
    }

    #[test]
    fn all_solutions_needs_no_iteration() {
        let f = BooleanOracle::new(3, |_| true);
        let r = grover(&f, 8).unwrap();
        assert_eq!(r.iterations, 0);
        assert!((r.success_prob - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_solutions_rejected() {
        let f = BooleanOracle::new(3, |_| false);
        assert_eq!(grover(&f, 0), Err(Error::NoSolutions));
    }

    #[test]
    fn unknown_count_constant_one() {
        let f = BooleanOracle::new(4, |_| true);
        let (x, calls) = grover_unknown(&f, &mut rng_from_seed(1)).unwrap();
        assert!(x < 16);
        assert!(calls <= 2);
    }

    #[test]
    fn unknown_count_no_solution_exhausts() {
        let f = BooleanOracle::new(4, |_| false);
        assert!(matches!(
            grover_unknown(&f, &mut rng_from_seed(1)),
            Err(Error::Exhausted { .. })
        ));
    }

    #[test]
    fn minimize_constant_takes_one_round() {
        let m = grover_minimize(&|_| 7, 3, &mut rng_from_seed(3));
        assert_eq!(m.rounds, 1);
        assert_eq!(m.value, 7);
    }

    #[test]
    fn minimize_popcount() {
        let m = grover_minimize(&|x| x.count_ones() as i64, 4, &mut rng_from_seed(5));
        assert_eq!(m.index, 0);
    }
}
