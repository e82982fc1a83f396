//! Two-site polymer assembly whose gluing rule rewards correlated shifts.
//!
//! Each trial draws a monoblock type (`a` or `b`) at both sites and each site
//! picks a shift `±`. The pair glues when the shifts agree, except for types
//! `(b, a)`, which glue when they differ. Deterministic local strategies glue
//! at most ¾ of the time; measuring a shared EPR pair with detectors chosen
//! by the local type glues with probability `½(1 + √2/2)`.

use crate::linalg::kron;
use crate::qproto::chsh::DetectorSetting;
use crate::qstate::{density_of, sample_index, Ket};
use crate::rng::{batches, Streams};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::FRAC_PI_4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MonoType {
    A,
    B,
}

impl MonoType {
    fn index(self) -> usize {
        match self {
            MonoType::A => 0,
            MonoType::B => 1,
        }
    }

    fn from_index(i: usize) -> Self {
        if i == 0 {
            MonoType::A
        } else {
            MonoType::B
        }
    }

    pub fn letter(self) -> char {
        match self {
            MonoType::A => 'a',
            MonoType::B => 'b',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PolymerTrial {
    pub types: (MonoType, MonoType),
    /// `+1` or `−1` per site.
    pub shifts: (i8, i8),
    pub glued: bool,
}

/// Gluing table.
pub fn glues(types: (MonoType, MonoType), shifts: (i8, i8)) -> bool {
    let same = shifts.0 == shifts.1;
    match types {
        (MonoType::B, MonoType::A) => !same,
        _ => same,
    }
}

/// Deterministic local rule: `site1[t]`, `site2[t]` is the shift for type `t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Strategy {
    pub site1: [i8; 2],
    pub site2: [i8; 2],
}

/// All 16 deterministic type→shift strategies.
pub fn classical_strategies() -> Vec<Strategy> {
    let s = |bit: u32| if bit == 1 { -1 } else { 1 };
    (0..16u32)
        .map(|m| Strategy {
            site1: [s(m & 1), s(m >> 1 & 1)],
            site2: [s(m >> 2 & 1), s(m >> 3 & 1)],
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Control {
    Classical(Strategy),
    Epr,
}

/// Detector for `(site, type)`: site 1 uses `σx`/`σz`, site 2 uses
/// `(σx−σz)/√2` / `(σx+σz)/√2`.
fn detector(site: usize, t: MonoType) -> DetectorSetting {
    match (site, t) {
        (1, MonoType::A) => DetectorSetting::sigma_x(),
        (1, MonoType::B) => DetectorSetting::sigma_z(),
        (_, MonoType::A) => DetectorSetting::in_plane(-FRAC_PI_4),
        (_, MonoType::B) => DetectorSetting::in_plane(FRAC_PI_4),
    }
}

/// Outcome probabilities `[t1][t2][k]`, `k = 2·[s1=−1] + [s2=−1]`.
fn epr_table() -> [[[f64; 4]; 2]; 2] {
    let rho = density_of(&Ket::epr());
    let mut t = [[[0.0; 4]; 2]; 2];
    for (t1, row) in t.iter_mut().enumerate() {
        for (t2, cell) in row.iter_mut().enumerate() {
            let d1 = detector(1, MonoType::from_index(t1));
            let d2 = detector(2, MonoType::from_index(t2));
            for (k, p) in cell.iter_mut().enumerate() {
                let proj = kron(&d1.projector(k < 2), &d2.projector(k % 2 == 0));
                *p = rho.expectation(&proj).re.max(0.0);
            }
        }
    }
    t
}

/// Exact glue probability under `control`.
pub fn polymer_expected(control: Control) -> f64 {
    let table = epr_table();
    let mut total = 0.0;
    for t1 in 0..2 {
        for t2 in 0..2 {
            let types = (MonoType::from_index(t1), MonoType::from_index(t2));
            total += 0.25
                * match control {
                    Control::Classical(s) => f64::from(u8::from(glues(types, (s.site1[t1], s.site2[t2])))),
                    Control::Epr => (0..4)
                        .filter(|&k| glues(types, (shift(k < 2), shift(k % 2 == 0))))
                        .map(|k| table[t1][t2][k])
                        .sum(),
                };
        }
    }
    total
}

fn shift(plus: bool) -> i8 {
    if plus {
        1
    } else {
        -1
    }
}

fn trial<R: Rng + ?Sized>(control: Control, table: &[[[f64; 4]; 2]; 2], rng: &mut R) -> PolymerTrial {
    let t1 = usize::from(rng.random::<bool>());
    let t2 = usize::from(rng.random::<bool>());
    let types = (MonoType::from_index(t1), MonoType::from_index(t2));
    let shifts = match control {
        Control::Classical(s) => (s.site1[types.0.index()], s.site2[types.1.index()]),
        Control::Epr => {
            let k = sample_index(&table[t1][t2], rng);
            (shift(k < 2), shift(k % 2 == 0))
        }
    };
    PolymerTrial { types, shifts, glued: glues(types, shifts) }
}

/// `m` independent trials; batch `k` draws from stream `k`.
pub fn polymer_trials(m: usize, control: Control, streams: &Streams) -> Vec<PolymerTrial> {
    let table = epr_table();
    batches(m)
        .into_par_iter()
        .map(|(id, len)| {
            let mut rng = streams.stream(id);
            (0..len).map(|_| trial(control, &table, &mut rng)).collect::<Vec<_>>()
        })
        .collect::<Vec<_>>()
        .concat()
}

/// Fraction of glued pairs over `m ≥ 1` trials.
pub fn polymer_run(m: usize, control: Control, streams: &Streams) -> f64 {
    let m = m.max(1);
    let table = epr_table();
    let glued: usize = batches(m)
        .into_par_iter()
        .map(|(id, len)| {
            let mut rng = streams.stream(id);
            (0..len).filter(|_| trial(control, &table, &mut rng).glued).count()
        })
        .sum();
    glued as f64 / m as f64
}
