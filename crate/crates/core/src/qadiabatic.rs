//! Time-dependent Hamiltonians, adiabatic search and annealing.
//!
//! Each time step applies `exp(−iH(t_mid)dt)` from an eigendecomposition of
//! the midpoint Hamiltonian, so the propagator is unitary for any `dt`. For a
//! two-level crossing the Landau-Zener estimate `err = O(e^{−CΔ²t_f})` applies;
//! the constant is model dependent and is not fitted here.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, CVec, Eigh, ONE, ZERO};
use crate::qstate::Ket;
use serde::Deserialize;
use std::f64::consts::FRAC_1_SQRT_2;

const HERMITIAN_TOL: f64 = 1e-9;
const DENSE_QUBIT_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq)]
pub struct Hamiltonian {
    mat: CMat,
}

impl Hamiltonian {
    pub fn new(mat: CMat) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch("Hamiltonian must be square".into()));
        }
        let d = linalg::hermiticity_defect(&mat);
        if d > HERMITIAN_TOL {
            return Err(Error::NotHermitian(d));
        }
        Ok(Hamiltonian { mat })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        Hamiltonian { mat: linalg::diag_real(values) }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn eigh(&self) -> Eigh {
        Eigh::new(&self.mat)
    }
}

fn bisect(f: impl Fn(f64) -> f64, target: f64) -> f64 {
    let (mut lo, mut hi) = (0.0, 1.0);
    while hi - lo > 1e-12 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Interpolation path `s(t)` or annealing strength `G(t)`.
#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    /// `s = t/T`.
    Linear,
    /// Local adiabatic schedule `ṡ = ε g²(s)` for Grover search over `n_states`.
    /// Run over a horizon `T` other than its natural length, it is rescaled in
    /// time, which amounts to a different `ε`.
    RolandCerf { n_states: f64, eps: f64 },
    /// `G(t)` samples for `H = H_tar + G(t) H_d`, non-increasing.
    AnnealingG { points: Vec<(f64, f64)> },
    /// `s(t)` samples, linearly interpolated.
    Tabulated { points: Vec<(f64, f64)> },
}

/// `g(s) = √(1 − 4 (N−1)/N · s(1−s))`.
pub fn grover_gap(s: f64, n_states: f64) -> f64 {
    (1.0 - 4.0 * (n_states - 1.0) / n_states * s * (1.0 - s)).max(0.0).sqrt()
}

/// Time `t(s)` of the local adiabatic schedule.
pub fn roland_cerf_time(s: f64, n_states: f64, eps: f64) -> f64 {
    let r = (n_states - 1.0).sqrt();
    n_states / (2.0 * eps * r) * (((2.0 * s - 1.0) * r).atan() + r.atan())
}

fn interpolate(points: &[(f64, f64)], t: f64) -> f64 {
    let i = points.partition_point(|p| p.0 <= t);
    if i == 0 {
        points[0].1
    } else if i == points.len() {
        points[points.len() - 1].1
    } else {
        let (t0, v0) = points[i - 1];
        let (t1, v1) = points[i];
        v0 + (v1 - v0) * (t - t0) / (t1 - t0)
    }
}

fn slope(points: &[(f64, f64)], t: f64) -> f64 {
    let i = points.partition_point(|p| p.0 <= t);
    if i == 0 || i == points.len() {
        0.0
    } else {
        let (t0, v0) = points[i - 1];
        let (t1, v1) = points[i];
        (v1 - v0) / (t1 - t0)
    }
}

impl Schedule {
    pub fn roland_cerf(n_states: usize, eps: f64) -> Result<Self> {
        if n_states < 2 || !(eps > 0.0 && eps.is_finite()) {
            return Err(Error::BadParams(format!("N = {n_states}, eps = {eps}")));
        }
        Ok(Schedule::RolandCerf { n_states: n_states as f64, eps })
    }

    pub fn tabulated(points: Vec<(f64, f64)>) -> Result<Self> {
        check_increasing(&points)?;
        if points.iter().any(|p| !(0.0..=1.0).contains(&p.1)) {
            return Err(Error::BadSchedule("s outside [0, 1]".into()));
        }
        if points.windows(2).any(|w| w[1].1 < w[0].1) {
            return Err(Error::BadSchedule("s decreases".into()));
        }
        Ok(Schedule::Tabulated { points })
    }

    pub fn annealing(points: Vec<(f64, f64)>) -> Result<Self> {
        check_increasing(&points)?;
        if points.windows(2).any(|w| w[1].1 > w[0].1) {
            return Err(Error::BadSchedule("G(t) increases".into()));
        }
        Ok(Schedule::AnnealingG { points })
    }

    /// Length of the schedule when it has one of its own.
    pub fn natural_time(&self) -> Option<f64> {
        match self {
            Schedule::RolandCerf { n_states, eps } => Some(roland_cerf_time(1.0, *n_states, *eps)),
            Schedule::AnnealingG { points } | Schedule::Tabulated { points } => {
                points.last().map(|p| p.0)
            }
            Schedule::Linear => None,
        }
    }

    /// `s(t)` on the horizon `[0, total]`.
    pub fn s(&self, t: f64, total: f64) -> f64 {
        match self {
            Schedule::Linear => (t / total).clamp(0.0, 1.0),
            Schedule::RolandCerf { n_states, eps } => {
                let t_rc = roland_cerf_time(1.0, *n_states, *eps) * (t / total).clamp(0.0, 1.0);
                bisect(|s| roland_cerf_time(s, *n_states, *eps), t_rc)
            }
            Schedule::Tabulated { points } => interpolate(points, t),
            Schedule::AnnealingG { .. } => 0.0,
        }
    }

    /// `ds/dt` on the horizon `[0, total]`.
    pub fn s_dot(&self, t: f64, total: f64) -> f64 {
        match self {
            Schedule::Linear => 1.0 / total,
            Schedule::RolandCerf { n_states, eps } => {
                let scale = roland_cerf_time(1.0, *n_states, *eps) / total;
                let s = self.s(t, total);
                scale * eps * grover_gap(s, *n_states).powi(2)
            }
            Schedule::Tabulated { points } => slope(points, t),
            Schedule::AnnealingG { .. } => 0.0,
        }
    }
}

fn check_increasing(points: &[(f64, f64)]) -> Result<()> {
    if points.len() < 2 {
        return Err(Error::BadSchedule("need at least two points".into()));
    }
    if points.iter().any(|p| !p.0.is_finite() || !p.1.is_finite()) {
        return Err(Error::BadSchedule("non-finite point".into()));
    }
    if points.windows(2).any(|w| w[1].0 <= w[0].0) {
        return Err(Error::BadSchedule("times must increase strictly".into()));
    }
    Ok(())
}

/// `H(t) = (1 − s)H₀ + sH₁`, or `H₁ + G(t)H₀` for an annealing schedule
/// (`H₀` the driver, `H₁` the target).
#[derive(Debug, Clone, PartialEq)]
pub struct TDHamiltonian {
    pub h0: Hamiltonian,
    pub h1: Hamiltonian,
    pub schedule: Schedule,
    pub total: f64,
}

impl TDHamiltonian {
    pub fn new(h0: Hamiltonian, h1: Hamiltonian, schedule: Schedule, total: f64) -> Result<Self> {
        if h0.dim() != h1.dim() {
            return Err(Error::DimensionMismatch("H0 and H1 differ in dimension".into()));
        }
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::BadTimeStep(format!("total time {total}")));
        }
        Ok(TDHamiltonian { h0, h1, schedule, total })
    }

    pub fn dim(&self) -> usize {
        self.h0.dim()
    }

    pub fn at(&self, t: f64) -> CMat {
        match &self.schedule {
            Schedule::AnnealingG { points } => self.h1.mat() + self.h0.mat() * c(interpolate(points, t), 0.0),
            sch => {
                let s = sch.s(t, self.total);
                self.h0.mat() * c(1.0 - s, 0.0) + self.h1.mat() * c(s, 0.0)
            }
        }
    }

    pub fn derivative(&self, t: f64) -> CMat {
        match &self.schedule {
            Schedule::AnnealingG { points } => self.h0.mat() * c(slope(points, t), 0.0),
            sch => (self.h1.mat() - self.h0.mat()) * c(sch.s_dot(t, self.total), 0.0),
        }
    }
}

fn step_count(total: f64, dt: f64) -> Result<usize> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::BadTimeStep(format!("dt = {dt}")));
    }
    Ok(((total / dt).round() as usize).max(1))
}

fn evolve_inner(td: &TDHamiltonian, psi0: &Ket, dt: f64, mut visit: impl FnMut(&CVec)) -> Result<CVec> {
    if psi0.dim() != td.dim() {
        return Err(Error::DimensionMismatch("initial state does not match H".into()));
    }
    let steps = step_count(td.total, dt)?;
    let h = td.total / steps as f64;
    let mut v = psi0.amps().clone();
    visit(&v);
    for k in 0..steps {
        let tm = (k as f64 + 0.5) * h;
        v = Eigh::new(&td.at(tm)).evolve(&v, h);
        visit(&v);
    }
    Ok(v)
}

/// States at `t = 0, h, 2h, …, T` with `h = T/round(T/dt)`.
pub fn evolve_td(td: &TDHamiltonian, psi0: &Ket, dt: f64) -> Result<Vec<Ket>> {
    let mut out = Vec::new();
    let dims = psi0.dims().to_vec();
    evolve_inner(td, psi0, dt, |v| out.push(v.clone()))?;
    out.into_iter().map(|v| Ket::new(dims.clone(), v)).collect()
}

/// Final state only.
pub fn evolve_final(td: &TDHamiltonian, psi0: &Ket, dt: f64) -> Result<Ket> {
    let v = evolve_inner(td, psi0, dt, |_| {})?;
    Ket::new(psi0.dims().to_vec(), v)
}

/// `H₀ = I − |0̃⟩⟨0̃|` and `H_m = I − |m⟩⟨m|` on `n` qubits.
pub fn grover_hamiltonians(n: usize, marked: usize) -> Result<(Hamiltonian, Hamiltonian)> {
    let size = dense_size(n)?;
    if marked >= size {
        return Err(Error::IndexOutOfRange { index: marked, limit: size });
    }
    let w = c(1.0 / size as f64, 0.0);
    let h0 = CMat::from_fn(size, size, |i, j| if i == j { ONE - w } else { -w });
    let mut hm = linalg::identity(size);
    hm[(marked, marked)] = ZERO;
    Ok((Hamiltonian { mat: h0 }, Hamiltonian { mat: hm }))
}

fn dense_size(n: usize) -> Result<usize> {
    if n == 0 || n > DENSE_QUBIT_LIMIT {
        return Err(Error::TooLarge(n));
    }
    Ok(1 << n)
}

/// Success probability `|⟨m|ψ(T)⟩|²` of adiabatic search from `|0̃⟩`.
/// `dt` defaults to `T/2000`.
pub fn adiabatic_grover(
    n: usize,
    marked: usize,
    schedule: &Schedule,
    total: f64,
    dt: Option<f64>,
) -> Result<f64> {
    let (h0, hm) = grover_hamiltonians(n, marked)?;
    let td = TDHamiltonian::new(h0, hm, schedule.clone(), total)?;
    let psi = Ket::uniform(&vec![2; n])?;
    let out = evolve_final(&td, &psi, dt.unwrap_or(total / 2000.0))?;
    Ok(out.amp(marked).norm_sqr())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContinuousReport {
    pub gap: f64,
    pub peak_time: f64,
    pub peak_prob: f64,
}

/// Evolve `|0̃⟩` under `(|0̃⟩⟨0̃| + |w⟩⟨w|)/√2` and locate the first maximum
/// of `|⟨w|ψ(t)⟩|²`. The two levels in the invariant plane are
/// `(1 ± 1/√N)/√2`, so the gap is `√(2/N)` and the transfer is complete at
/// `π/gap`.
pub fn continuous_grover(n: usize, marked: usize) -> Result<ContinuousReport> {
    let size = dense_size(n)?;
    if marked >= size {
        return Err(Error::IndexOutOfRange { index: marked, limit: size });
    }
    let s = CVec::from_element(size, c(1.0 / (size as f64).sqrt(), 0.0));
    let mut h = &s * s.adjoint();
    h[(marked, marked)] += ONE;
    h *= c(FRAC_1_SQRT_2, 0.0);
    let eig = Eigh::new(&h);
    let spectrum = &eig.values;
    let gap = spectrum[spectrum.len() - 1] - spectrum[spectrum.len() - 2];
    let prob = |t: f64| eig.evolve(&s, t)[marked].norm_sqr();
    // scan for the first local maximum, then refine by golden-section search
    let horizon = 4.0 * std::f64::consts::PI * (size as f64).sqrt();
    let samples = 4000;
    let dt = horizon / samples as f64;
    let mut k = 1;
    while k < samples && !(prob(k as f64 * dt) >= prob((k - 1) as f64 * dt) && prob(k as f64 * dt) >= prob((k + 1) as f64 * dt)) {
        k += 1;
    }
    let (mut a, mut b) = ((k as f64 - 1.0) * dt, (k as f64 + 1.0) * dt);
    let phi = 0.5 * (5f64.sqrt() - 1.0);
    while b - a > 1e-12 {
        let x1 = b - phi * (b - a);
        let x2 = a + phi * (b - a);
        if prob(x1) < prob(x2) {
            a = x1;
        } else {
            b = x2;
        }
    }
    let peak_time = 0.5 * (a + b);
    Ok(ContinuousReport { gap, peak_time, peak_prob: prob(peak_time) })
}

/// `H_I = Σ_i (1 − σˣ_i)/2`, with ground state `|0̃⟩`.
pub fn build_driver(n: usize) -> Result<Hamiltonian> {
    let size = dense_size(n)?;
    let mut mat = CMat::zeros(size, size);
    let half = c(0.5, 0.0);
    for x in 0..size {
        mat[(x, x)] += c(n as f64 * 0.5, 0.0);
        for q in 0..n {
            let y = x ^ (1 << (n - 1 - q));
            mat[(y, x)] -= half;
        }
    }
    Ok(Hamiltonian { mat })
}

/// Classical cost functions whose minima encode solutions. Bit `i` of a basis
/// index (qubit 0 most significant) is the Boolean `x_i`; spins are
/// `s_i = 1 − 2x_i`. Literals are 1-based, negative for negation.
#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSpec {
    /// `½(1 + s₁s₂)`.
    Disagree2,
    /// `Σ_c (1 − x₁ᶜ − x₂ᶜ − x₃ᶜ)²`.
    ExactCover { n: usize, clauses: Vec<Vec<i64>> },
    /// Number of violated clauses: each contributes `Π_lit (1 − lit)`.
    Sat3 { n: usize, clauses: Vec<Vec<i64>> },
    /// `Σ h_i s_i + Σ_{i<j} J_ij s_i s_j`.
    Ising { h: Vec<f64>, j: Vec<(usize, usize, f64)> },
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct IsingJson {
    h: Vec<f64>,
    #[serde(default)]
    j: Vec<(usize, usize, f64)>,
}

#[derive(Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
enum ProblemJson {
    Ising(IsingJson),
    Sat3(Vec<Vec<i64>>),
    ExactCover(Vec<Vec<i64>>),
    Disagree2,
}

fn literal_span(clauses: &[Vec<i64>]) -> usize {
    clauses.iter().flatten().map(|l| l.unsigned_abs() as usize).max().unwrap_or(0)
}

impl ProblemSpec {
    /// Parse `{"ising": {"h": [..], "j": [[i, j, v], ..]}}`, `{"sat3": [[lit, ..], ..]}`,
    /// `{"exact_cover": [[lit, lit, lit], ..]}` or `{"disagree2": null}`.
    pub fn from_json(text: &str) -> Result<Self> {
        let parsed: ProblemJson =
            serde_json::from_str(text).map_err(|e| Error::BadParams(format!("problem file: {e}")))?;
        let spec = match parsed {
            ProblemJson::Ising(i) => ProblemSpec::Ising { h: i.h, j: i.j },
            ProblemJson::Sat3(c) => ProblemSpec::Sat3 { n: literal_span(&c), clauses: c },
            ProblemJson::ExactCover(c) => ProblemSpec::ExactCover { n: literal_span(&c), clauses: c },
            ProblemJson::Disagree2 => ProblemSpec::Disagree2,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn n(&self) -> usize {
        match self {
            ProblemSpec::Disagree2 => 2,
            ProblemSpec::ExactCover { n, .. } | ProblemSpec::Sat3 { n, .. } => *n,
            ProblemSpec::Ising { h, .. } => h.len(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        match self {
            ProblemSpec::Disagree2 => Ok(()),
            ProblemSpec::ExactCover { clauses, .. } | ProblemSpec::Sat3 { clauses, .. } => {
                for &l in clauses.iter().flatten() {
                    let v = l.unsigned_abs() as usize;
                    if l == 0 || v > n {
                        return Err(Error::IndexOutOfRange { index: v, limit: n + 1 });
                    }
                }
                Ok(())
            }
            ProblemSpec::Ising { j, .. } => {
                for &(a, b, _) in j {
                    if a >= n || b >= n {
                        return Err(Error::IndexOutOfRange { index: a.max(b), limit: n });
                    }
                    if a == b {
                        return Err(Error::BadParams(format!("self-coupling on spin {a}")));
                    }
                }
                Ok(())
            }
        }
    }

    fn bit(&self, x: usize, i: usize) -> f64 {
        ((x >> (self.n() - 1 - i)) & 1) as f64
    }

    fn literal(&self, x: usize, l: i64) -> f64 {
        let v = self.bit(x, l.unsigned_abs() as usize - 1);
        if l > 0 {
            v
        } else {
            1.0 - v
        }
    }

    /// Classical cost of basis string `x`.
    pub fn cost(&self, x: usize) -> f64 {
        let spin = |i: usize| 1.0 - 2.0 * self.bit(x, i);
        match self {
            ProblemSpec::Disagree2 => 0.5 * (1.0 + spin(0) * spin(1)),
            ProblemSpec::ExactCover { clauses, .. } => clauses
                .iter()
                .map(|cl| (1.0 - cl.iter().map(|&l| self.literal(x, l)).sum::<f64>()).powi(2))
                .sum(),
            ProblemSpec::Sat3 { clauses, .. } => clauses
                .iter()
                .map(|cl| cl.iter().map(|&l| 1.0 - self.literal(x, l)).product::<f64>())
                .sum(),
            ProblemSpec::Ising { h, j } => {
                let field: f64 = h.iter().enumerate().map(|(i, hi)| hi * spin(i)).sum();
                let pair: f64 = j.iter().map(|&(a, b, v)| v * spin(a) * spin(b)).sum();
                field + pair
            }
        }
    }

    pub fn energies(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let n = self.n();
        if n == 0 || n > 20 {
            return Err(Error::TooLarge(n));
        }
        Ok((0..1usize << n).map(|x| self.cost(x)).collect())
    }
}

/// Basis strings within `tol` of the minimum energy.
pub fn ground_set(energies: &[f64], tol: f64) -> Vec<usize> {
    let min = energies.iter().cloned().fold(f64::INFINITY, f64::min);
    (0..energies.len()).filter(|&i| energies[i] - min <= tol).collect()
}

/// Diagonal problem Hamiltonian.
pub fn build_problem(spec: &ProblemSpec) -> Result<Hamiltonian> {
    dense_size(spec.n())?;
    Ok(Hamiltonian::diagonal(&spec.energies()?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnnealReport {
    pub state: Ket,
    /// Population in the ground eigenspace of `H_tar`.
    pub ground_population: f64,
}

/// Evolve under `H_tar + G(t)H_d` for the tabulated `G` over `[0, T]`.
pub fn anneal(
    h_tar: &Hamiltonian,
    h_d: &Hamiltonian,
    g: &Schedule,
    total: f64,
    psi0: &Ket,
    dt: f64,
) -> Result<AnnealReport> {
    let points = match g {
        Schedule::AnnealingG { points } => points.clone(),
        _ => return Err(Error::BadSchedule("annealing needs a G(t) schedule".into())),
    };
    let g = Schedule::annealing(points)?;
    let td = TDHamiltonian::new(h_d.clone(), h_tar.clone(), g, total)?;
    let state = evolve_final(&td, psi0, dt)?;
    let ground_population = ground_population(h_tar, &state);
    Ok(AnnealReport { state, ground_population })
}

/// Weight of `ψ` in the lowest eigenspace of `h` (levels within 1e-9).
pub fn ground_population(h: &Hamiltonian, psi: &Ket) -> f64 {
    let eig = h.eigh();
    let e0 = eig.values[0];
    (0..eig.values.len())
        .take_while(|&k| eig.values[k] - e0 < 1e-9)
        .map(|k| eig.vectors.column(k).dotc(psi.amps()).norm_sqr())
        .sum()
}

/// `max_t |⟨1(t)|dH/dt|0(t)⟩| / g(t)²` over the sample times.
pub fn adiabaticity_margin(td: &TDHamiltonian, times: &[f64]) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for &t in times {
        let eig = Eigh::new(&td.at(t));
        let gap = eig.values[1] - eig.values[0];
        if gap < 1e-12 {
            return Err(Error::DegenerateGap { t, gap });
        }
        let d = td.derivative(t);
        let v0 = eig.vectors.column(0).into_owned();
        let v1 = eig.vectors.column(1).into_owned();
        let elem = v1.dotc(&(d * v0)).norm();
        worst = worst.max(elem / (gap * gap));
    }
    Ok(worst)
}
