//! Phase estimation and Shor order finding.

use crate::error::{Error, Result};
use crate::qalgo::qft::qft;
use crate::qgate::{self, Circuit, GateMatrix};
use crate::qstate::{marginal_distribution, sample_index, tensor, Bipartition, Ket};
use crate::linalg::{c, CVec, ZERO};
use rand::Rng;

fn reverse_bits(x: usize, n: usize) -> usize {
    (0..n).fold(0, |acc, b| (acc << 1) | ((x >> b) & 1))
}

/// Distribution of the counter reading `c` for `QFT · U_seq · QFT` acting on
/// `ψ_in ⊗ |0…0⟩`. Entry `c` is the probability of frequency `c/2^{n_bits}`.
pub fn phase_distribution(u: &GateMatrix, psi_in: &Ket, n_bits: usize) -> Result<Vec<f64>> {
    if n_bits == 0 {
        return Err(Error::BadParams("phase estimation needs a counter".into()));
    }
    if psi_in.dim() != u.dim() {
        return Err(Error::DimensionMismatch(format!(
            "state of dimension {} for operator of dimension {}",
            psi_in.dim(),
            u.dim()
        )));
    }
    let target = Ket::new(vec![u.dim()], psi_in.amps().clone())?;
    let input = tensor(&target, &Ket::qubit_basis(n_bits, 0)?);
    let counter: Vec<usize> = (1..=n_bits).collect();
    let f = qft(n_bits, None)?;
    let mut circ = Circuit::new(input.dims())?;
    circ.append_mapped(&f, &counter)?;
    let seq = qgate::u_seq(u, n_bits)?;
    let all: Vec<usize> = (0..=n_bits).collect();
    circ.append_mapped(&seq, &all)?;
    circ.append_mapped(&f, &counter)?;
    let out = qgate::run(&circ, &input)?;
    let p = marginal_distribution(&out, &Bipartition::new(&counter, n_bits + 1)?)?;
    // the network leaves the counter bit-reversed
    let mut natural = vec![0.0; p.len()];
    for (i, &w) in p.iter().enumerate() {
        natural[reverse_bits(i, n_bits)] = w;
    }
    Ok(natural)
}

/// Sample the frequency numerator `c` (estimate `w ≈ c/2^{n_bits}`).
pub fn phase_estimate<R: Rng + ?Sized>(
    u: &GateMatrix,
    psi_in: &Ket,
    n_bits: usize,
    rng: &mut R,
) -> Result<usize> {
    let p = phase_distribution(u, psi_in, n_bits)?;
    Ok(sample_index(&p, rng))
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: u64, b: u64) -> u64 {
    a / gcd(a, b) * b
}

pub(crate) fn modpow(base: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut b = base as u128 % m128;
    let mut acc = 1u128 % m128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m128;
        }
        b = b * b % m128;
        e >>= 1;
    }
    acc as u64
}

/// Order by direct search; `None` when `gcd(y, q) ≠ 1`.
pub fn multiplicative_order(y: u64, q: u64) -> Option<u64> {
    if q < 2 || gcd(y % q, q) != 1 {
        return None;
    }
    let mut v = y % q;
    let mut r = 1;
    while v != 1 {
        v = v * (y % q) % q;
        r += 1;
    }
    Some(r)
}

/// Convergents `p/s` of the continued fraction of `num/den`.
pub fn convergents(num: u64, den: u64) -> Vec<(u64, u64)> {
    let mut out = Vec::new();
    if den == 0 {
        return out;
    }
    let (mut a, mut b) = (num, den);
    let (mut p0, mut p1) = (0u64, 1u64);
    let (mut s0, mut s1) = (1u64, 0u64);
    while b != 0 {
        let t = a / b;
        (p0, p1) = (p1, t * p1 + p0);
        (s0, s1) = (s1, t * s1 + s0);
        out.push((p1, s1));
        (a, b) = (b, a - t * b);
    }
    out
}

fn register_bits(q: u64) -> usize {
    (64 - q.leading_zeros()) as usize
}

/// One run of the period-finding circuit on `t = 2n` counting qubits.
///
/// The value register is measured before the final QFT (deferred measurement),
/// which leaves the counter uniform over `{α₀ + r·k}`; only that register is
/// simulated. Returns the counter reading in natural order.
fn sample_counter<R: Rng + ?Sized>(y: u64, q: u64, t: usize, rng: &mut R) -> Result<u64> {
    let big_n = 1usize << t;
    let values: Vec<u64> = (0..big_n as u64).map(|a| modpow(y, a, q)).collect();
    let v = values[rng.random_range(0..big_n)];
    let support: Vec<usize> = (0..big_n).filter(|&a| values[a] == v).collect();
    let w = c(1.0 / (support.len() as f64).sqrt(), 0.0);
    let mut amps = CVec::from_element(big_n, ZERO);
    for &a in &support {
        amps[a] = w;
    }
    let out = qgate::run(&qft(t, None)?, &Ket::new(vec![2; t], amps)?)?;
    let p: Vec<f64> = out.amps().iter().map(|z| z.norm_sqr()).collect();
    Ok(reverse_bits(sample_index(&p, rng), t) as u64)
}

fn reduce_order(y: u64, q: u64, mut r: u64) -> u64 {
    let mut p = 2;
    while p <= r {
        while r % p == 0 && modpow(y, r / p, q) == 1 {
            r /= p;
        }
        p += 1;
    }
    r
}

const ORDER_SAMPLES: usize = 20;

/// Multiplicative order of `y` modulo `q` from repeated period-finding runs,
/// continued fractions and least-common-multiple combination of candidates.
pub fn shor_order<R: Rng + ?Sized>(y: u64, q: u64, rng: &mut R) -> Result<u64> {
    if q < 2 {
        return Err(Error::BadParams(format!("modulus {q} < 2")));
    }
    let y = y % q;
    if gcd(y, q) != 1 {
        return Err(Error::NotCoprime { y, q });
    }
    if y == 1 {
        return Ok(1);
    }
    let t = 2 * register_bits(q);
    let big_n = 1u64 << t;
    let mut acc = 1u64;
    for _ in 0..ORDER_SAMPLES {
        let reading = sample_counter(y, q, t, rng)?;
        let mut last = 1;
        for (_, s) in convergents(reading, big_n) {
            if s == 0 || s >= q {
                break;
            }
            if modpow(y, s, q) == 1 {
                return Ok(reduce_order(y, q, s));
            }
            last = s;
        }
        acc = lcm(acc, last);
        if acc < q * q && modpow(y, acc, q) == 1 {
            return Ok(reduce_order(y, q, acc));
        }
    }
    Err(Error::OrderNotFound { y, q })
}

fn perfect_power(q: u64) -> Option<u64> {
    for k in 2..=register_bits(q) as u32 {
        let b = (q as f64).powf(1.0 / k as f64).round() as u64;
        for cand in b.saturating_sub(1)..=b + 1 {
            if cand > 1 && cand.checked_pow(k) == Some(q) {
                return Some(cand);
            }
        }
    }
    None
}

fn ordered(a: u64, b: u64) -> (u64, u64) {
    (a.min(b), a.max(b))
}

/// Nontrivial factorization `q = q₁·q₂` with `q₁ ≤ q₂`.
pub fn shor_factor<R: Rng + ?Sized>(q: u64, rng: &mut R, max_attempts: usize) -> Result<(u64, u64)> {
    if q < 2 {
        return Err(Error::BadParams(format!("cannot factor {q}")));
    }
    if q % 2 == 0 && q > 2 {
        return Ok((2, q / 2));
    }
    if let Some(b) = perfect_power(q) {
        return Ok(ordered(b, q / b));
    }
    if q < 4 {
        return Err(Error::FactorNotFound { q, attempts: 0 });
    }
    for _ in 0..max_attempts {
        let y = rng.random_range(2..q - 1);
        let g = gcd(y, q);
        if g > 1 {
            return Ok(ordered(g, q / g));
        }
        let r = match shor_order(y, q, rng) {
            Ok(r) => r,
            Err(Error::OrderNotFound { .. }) => continue,
            Err(e) => return Err(e),
        };
        if r % 2 == 1 {
            continue;
        }
        let h = modpow(y, r / 2, q);
        if h == q - 1 {
            continue;
        }
        let f = gcd((h + q - 1) % q, q);
        if f > 1 && f < q {
            return Ok(ordered(f, q / f));
        }
    }
    Err(Error::FactorNotFound { q, attempts: max_attempts })
}
