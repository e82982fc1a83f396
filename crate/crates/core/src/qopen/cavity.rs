//! Jaynes-Cummings, Tavis-Cummings and coupled-cavity Hamiltonians.
//!
//! Each cavity contributes a photon mode truncated at `n_max` followed by its
//! atoms; atom state `1` is excited and `σ = |0⟩⟨1|`. The vacuum energy is
//! omitted.

use crate::error::{Error, Result};
use crate::linalg::{self, c, CMat, CVec, Eigh};
use crate::qadiabatic::Hamiltonian;
use crate::qstate::Ket;
use serde::Deserialize;

pub const MAX_DIM: usize = 4096;
const RWA_LIMIT: f64 = 1e-2;
const RWA_ADVISED: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CavityModel {
    pub omega: f64,
    pub g: Vec<f64>,
    pub n_max: usize,
    pub rwa: bool,
}

impl CavityModel {
    pub fn new(omega: f64, g: Vec<f64>, n_max: usize, rwa: bool) -> Result<Self> {
        let m = CavityModel { omega, g, n_max, rwa };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        if !self.omega.is_finite() || self.g.iter().any(|g| !(*g >= 0.0 && g.is_finite())) {
            return Err(Error::BadParams("couplings must be finite and non-negative".into()));
        }
        if self.n_max < 1 {
            return Err(Error::BadParams("photon cutoff must be at least 1".into()));
        }
        if self.rwa && self.coupling_ratio() > RWA_LIMIT {
            return Err(Error::BadParams(format!(
                "g/omega = {} too large for the rotating-wave approximation",
                self.coupling_ratio()
            )));
        }
        Ok(())
    }

    fn coupling_ratio(&self) -> f64 {
        let g = self.g.iter().cloned().fold(0.0, f64::max);
        if g == 0.0 {
            0.0
        } else {
            g / self.omega.abs()
        }
    }

    /// Advisory notes, e.g. a coupling ratio above 1e-3 under RWA.
    pub fn warnings(&self) -> Vec<String> {
        let mut w = Vec::new();
        if self.rwa && self.coupling_ratio() > RWA_ADVISED {
            w.push(format!("g/omega = {:.3e} exceeds 1e-3", self.coupling_ratio()));
        }
        w
    }

    pub fn local_dims(&self) -> Vec<usize> {
        let mut d = vec![self.n_max + 1];
        d.extend(std::iter::repeat_n(2, self.g.len()));
        d
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CavityNetwork {
    pub cavities: Vec<CavityModel>,
    /// Photon hopping `μ_ij (a_i†a_j + a_i a_j†)` for `i < j`.
    pub hops: Vec<(usize, usize, f64)>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CavityJson {
    omega: f64,
    g: Vec<f64>,
    #[serde(default = "default_n_max")]
    n_max: usize,
    #[serde(default = "default_rwa")]
    rwa: bool,
    #[serde(default)]
    hops: Vec<(usize, usize, f64)>,
    #[serde(default = "default_cavities")]
    cavities: usize,
}

fn default_n_max() -> usize {
    3
}
fn default_rwa() -> bool {
    true
}
fn default_cavities() -> usize {
    1
}

impl CavityNetwork {
    pub fn new(cavities: Vec<CavityModel>, hops: Vec<(usize, usize, f64)>) -> Result<Self> {
        let net = CavityNetwork { cavities, hops };
        net.validate()?;
        Ok(net)
    }

    pub fn single(model: CavityModel) -> Result<Self> {
        CavityNetwork::new(vec![model], Vec::new())
    }

    /// `{"omega": …, "g": […], "n_max": …, "rwa": true, "hops": [[i, j, mu], …],
    /// "cavities": k}`; every cavity shares the listed couplings.
    pub fn from_json(text: &str) -> Result<Self> {
        let j: CavityJson =
            serde_json::from_str(text).map_err(|e| Error::BadParams(format!("cavity spec: {e}")))?;
        let model = CavityModel::new(j.omega, j.g, j.n_max, j.rwa)?;
        CavityNetwork::new(vec![model; j.cavities.max(1)], j.hops)
    }

    pub fn validate(&self) -> Result<()> {
        if self.cavities.is_empty() {
            return Err(Error::BadParams("network has no cavities".into()));
        }
        for c in &self.cavities {
            c.validate()?;
        }
        let m = self.cavities.len();
        for &(i, j, mu) in &self.hops {
            if i >= m || j >= m {
                return Err(Error::IndexOutOfRange { index: i.max(j), limit: m });
            }
            if i == j || !(mu >= 0.0 && mu.is_finite()) {
                return Err(Error::BadParams(format!("bad hop ({i}, {j}, {mu})")));
            }
        }
        let dim = self.dim_checked()?;
        if dim > MAX_DIM {
            return Err(Error::DimensionOverflow { dim, limit: MAX_DIM });
        }
        Ok(())
    }

    fn dim_checked(&self) -> Result<usize> {
        self.dims().iter().try_fold(1usize, |acc, &d| {
            acc.checked_mul(d)
                .ok_or(Error::DimensionOverflow { dim: usize::MAX, limit: MAX_DIM })
        })
    }

    pub fn dims(&self) -> Vec<usize> {
        self.cavities.iter().flat_map(|c| c.local_dims()).collect()
    }

    pub fn dim(&self) -> usize {
        self.dims().iter().product()
    }

    /// Subsystem index of cavity `i`'s photon mode.
    pub fn photon_slot(&self, i: usize) -> usize {
        self.cavities[..i].iter().map(|c| 1 + c.g.len()).sum()
    }

    /// Total excitation number `Σ a†a + Σ σ†σ` of a basis index.
    pub fn excitations(&self, index: usize) -> usize {
        linalg::digits(index, &self.dims()).iter().sum()
    }

    /// Basis indices with exactly `k` excitations.
    pub fn sector(&self, k: usize) -> Vec<usize> {
        (0..self.dim()).filter(|&x| self.excitations(x) == k).collect()
    }

    /// Basis index from per-cavity `(photons, atom states)`.
    pub fn index_of(&self, occupation: &[(usize, Vec<usize>)]) -> Result<usize> {
        if occupation.len() != self.cavities.len() {
            return Err(Error::DimensionMismatch("one entry per cavity expected".into()));
        }
        let mut digits = Vec::new();
        for ((n, atoms), cav) in occupation.iter().zip(&self.cavities) {
            if *n > cav.n_max || atoms.len() != cav.g.len() || atoms.iter().any(|&a| a > 1) {
                return Err(Error::BadParams("occupation outside the cavity space".into()));
            }
            digits.push(*n);
            digits.extend(atoms);
        }
        Ok(linalg::join_digits(&digits, &self.dims()))
    }

    /// Probability of finding any cavity at its cutoff level.
    pub fn top_level_population(&self, psi: &CVec) -> f64 {
        let dims = self.dims();
        let slots: Vec<(usize, usize)> = (0..self.cavities.len())
            .map(|i| (self.photon_slot(i), self.cavities[i].n_max))
            .collect();
        psi.iter()
            .enumerate()
            .filter(|(x, _)| {
                let d = linalg::digits(*x, &dims);
                slots.iter().any(|&(s, n)| d[s] == n)
            })
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }

    pub fn ensure_cutoff(&self, psi: &CVec) -> Result<()> {
        let p = self.top_level_population(psi);
        if p > 1e-6 {
            return Err(Error::CutoffTooSmall { population: p });
        }
        Ok(())
    }

    /// Dense Hamiltonian matrix.
    pub fn matrix(&self) -> Result<CMat> {
        self.validate()?;
        let dims = self.dims();
        let st = linalg::strides(&dims);
        let dim = self.dim();
        let mut h = CMat::zeros(dim, dim);
        for x in 0..dim {
            let d = linalg::digits(x, &dims);
            let mut diag = 0.0;
            for (i, cav) in self.cavities.iter().enumerate() {
                let p = self.photon_slot(i);
                let n = d[p];
                diag += cav.omega * (n + d[p + 1..p + 1 + cav.g.len()].iter().sum::<usize>()) as f64;
                for (k, &g) in cav.g.iter().enumerate() {
                    let a = p + 1 + k;
                    let atom = d[a];
                    // photon up
                    if n < cav.n_max && (atom == 1 || !cav.rwa) {
                        let y = x + st[p];
                        let y = if atom == 1 { y - st[a] } else { y + st[a] };
                        h[(y, x)] += c(g * ((n + 1) as f64).sqrt(), 0.0);
                    }
                    // photon down
                    if n > 0 && (atom == 0 || !cav.rwa) {
                        let y = x - st[p];
                        let y = if atom == 1 { y - st[a] } else { y + st[a] };
                        h[(y, x)] += c(g * (n as f64).sqrt(), 0.0);
                    }
                }
            }
            h[(x, x)] += c(diag, 0.0);
            for &(i, j, mu) in &self.hops {
                for (from, to) in [(i, j), (j, i)] {
                    let (pf, pt) = (self.photon_slot(from), self.photon_slot(to));
                    let (nf, nt) = (d[pf], d[pt]);
                    if nf > 0 && nt < self.cavities[to].n_max {
                        let y = x - st[pf] + st[pt];
                        h[(y, x)] += c(mu * (nf as f64).sqrt() * ((nt + 1) as f64).sqrt(), 0.0);
                    }
                }
            }
        }
        Ok(h)
    }

    pub fn hamiltonian(&self) -> Result<Hamiltonian> {
        Hamiltonian::new(self.matrix()?)
    }

    /// Diagonal excitation-number operator.
    pub fn number_operator(&self) -> CMat {
        let n: Vec<f64> = (0..self.dim()).map(|x| self.excitations(x) as f64).collect();
        linalg::diag_real(&n)
    }
}

/// Restrict a matrix to the listed basis indices.
pub fn restrict(m: &CMat, indices: &[usize]) -> CMat {
    CMat::from_fn(indices.len(), indices.len(), |r, c| m[(indices[r], indices[c])])
}

/// Single-cavity Hamiltonian (Tavis-Cummings when several atoms are present).
pub fn jc_hamiltonian(model: &CavityModel) -> Result<Hamiltonian> {
    CavityNetwork::single(model.clone())?.hamiltonian()
}

/// Coupled-cavity Hamiltonian.
pub fn tch_hamiltonian(net: &CavityNetwork) -> Result<Hamiltonian> {
    net.hamiltonian()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// Basis-state populations at each time.
    pub populations: Vec<Vec<f64>>,
    pub states: Vec<CVec>,
}

/// Populations under a constant Hamiltonian at `t = 0, dt, …, T`.
pub fn rabi_trajectory(h: &Hamiltonian, psi0: &Ket, total: f64, dt: f64) -> Result<Trajectory> {
    if !(dt > 0.0 && dt.is_finite()) || !(total >= 0.0 && total.is_finite()) {
        return Err(Error::BadTimeStep(format!("T = {total}, dt = {dt}")));
    }
    if psi0.dim() != h.dim() {
        return Err(Error::DimensionMismatch("state does not match Hamiltonian".into()));
    }
    let steps = (total / dt).round() as usize;
    let eig = Eigh::new(h.mat());
    let mut times = Vec::with_capacity(steps + 1);
    let mut populations = Vec::with_capacity(steps + 1);
    let mut states = Vec::with_capacity(steps + 1);
    for k in 0..=steps {
        let t = k as f64 * dt;
        let v = eig.evolve(psi0.amps(), t);
        times.push(t);
        populations.push(v.iter().map(|a| a.norm_sqr()).collect());
        states.push(v);
    }
    Ok(Trajectory { times, populations, states })
}
