//! Registered experiments. Each takes resolved parameters and a seed; all
//! randomness flows from `Streams::new(seed)`.

use crate::{CliError, CliResult, Experiment, Kind, Outcome, ParamSpec, Params, Series};
use nalgebra::DMatrix;
use qlectra_core::linalg::{c, cis, diag, diag_real, CMat, CVec, Eigh};
use qlectra_core::qadiabatic::{
    adiabatic_grover, anneal, build_driver, build_problem, continuous_grover, grover_gap, ProblemSpec,
    Schedule,
};
use qlectra_core::qalgo::{
    grover, grover_state, phase_distribution, qft, qft_full, shor_factor, truncation_bound, zalka_wiesner,
    BooleanOracle, PotentialGrid,
};
use qlectra_core::qgate::{self, unitary_of, GateMatrix};
use qlectra_core::qopen::{
    cocsign_simulate, lindblad_evolve, periodic_decoupling, rabi_trajectory, randomized_decoupling,
    CavityModel, CavityNetwork, LindbladModel,
};
use qlectra_core::qproto::{
    amplitude_quantization, bb84, chsh_classical_max, chsh_exact, chsh_mixture, chsh_sample, chsh_trials,
    circulant_frequencies, classical_strategies, granular_grover, naive_complexity, oscillator_chain_spectrum,
    polymer_expected, polymer_run, polymer_trials, quantum_complexity, teleport, teleport_branch, Control,
    Verdict, SCHMIDT_TOL,
};
use qlectra_core::qstate::{density_of, Ket};
use qlectra_core::rng::Streams;
use rand::Rng;
use rayon::prelude::*;
use std::f64::consts::PI;

const fn p(name: &'static str, kind: Kind, default: &'static str, help: &'static str) -> ParamSpec {
    ParamSpec { name, kind, default, help }
}

use Kind::{Bool, Float, Int, Text};

static REGISTRY: &[Experiment] = &[
    Experiment {
        id: "grover",
        summary: "Grover search for one marked item",
        params: &[p("n", Int, "3", "qubits"), p("marked", Int, "5", "marked index")],
        run: run_grover,
    },
    Experiment {
        id: "grover-adiabatic",
        summary: "adiabatic search, local vs linear schedule at equal time",
        params: &[
            p("n", Int, "4", "qubits"),
            p("marked", Int, "9", "marked index"),
            p("total", Float, "16", "evolution time T"),
            p("eps", Float, "1", "local adiabaticity parameter"),
        ],
        run: run_grover_adiabatic,
    },
    Experiment {
        id: "grover-continuous",
        summary: "time-independent search Hamiltonian",
        params: &[p("n", Int, "4", "qubits"), p("marked", Int, "1", "marked index")],
        run: run_grover_continuous,
    },
    Experiment {
        id: "qft",
        summary: "QFT network against the DFT and its truncations",
        params: &[p("n", Int, "6", "qubits")],
        run: run_qft,
    },
    Experiment {
        id: "phase-estimate",
        summary: "phase estimation of a diagonal unitary",
        params: &[p("bits", Int, "4", "counting qubits"), p("phase", Float, "0.3125", "eigenphase w in [0, 1)")],
        run: run_phase_estimate,
    },
    Experiment {
        id: "shor",
        summary: "order finding and factoring",
        params: &[
            p("q", Int, "21", "modulus"),
            p("attempts", Int, "20", "bases tried per run"),
            p("runs", Int, "1", "independent runs"),
        ],
        run: run_shor,
    },
    Experiment {
        id: "zalka",
        summary: "split-operator evolution in a harmonic well",
        params: &[
            p("n", Int, "6", "grid qubits"),
            p("t", Float, "2", "evolution time"),
            p("steps", Int, "1000", "time steps"),
            p("center", Float, "4", "well center"),
            p("x0", Float, "3", "initial packet center"),
        ],
        run: run_zalka,
    },
    Experiment {
        id: "anneal",
        summary: "annealing with a decreasing driver strength",
        params: &[
            p("problem", Text, "{\"disagree2\":null}", "problem JSON"),
            p("g0", Float, "10", "initial driver strength"),
            p("total", Float, "200", "annealing time"),
            p("steps", Int, "4000", "time steps"),
        ],
        run: run_anneal,
    },
    Experiment {
        id: "lindblad",
        summary: "amplitude damping of a two-level system",
        params: &[
            p("gamma", Float, "1", "decay rate"),
            p("omega", Float, "1", "level splitting"),
            p("t", Float, "4", "evolution time"),
            p("dt", Float, "0.001", "time step"),
        ],
        run: run_lindblad,
    },
    Experiment {
        id: "rabi",
        summary: "single cavity Rabi oscillation",
        params: &[
            p("omega", Float, "1", "cavity and atom frequency"),
            p("g", Float, "0.001", "coupling"),
            p("photons", Int, "1", "initial photon number n"),
            p("n_max", Int, "3", "photon cutoff"),
            p("rwa", Bool, "true", "rotating-wave approximation"),
            p("span", Float, "2", "horizon in transfer times"),
            p("samples", Int, "200", "trajectory samples"),
        ],
        run: run_rabi,
    },
    Experiment {
        id: "cocsign",
        summary: "controlled sign on three coupled cavities",
        params: &[
            p("n1", Int, "4", "tau1 multiples"),
            p("n2", Int, "6", "tau2 multiples"),
            p("g", Float, "1", "atom-cavity coupling"),
            p("nu", Float, "1000", "hop strength"),
        ],
        run: run_cocsign,
    },
    Experiment {
        id: "decouple",
        summary: "selective decoupling of a qubit pair",
        params: &[
            p("qubits", Int, "3", "register size"),
            p("lambda", Float, "1000", "pulse density"),
            p("total", Float, "1", "evolution time"),
            p("dt", Float, "0.0001", "time step"),
            p("runs", Int, "50", "random realizations"),
            p("mode", Text, "random", "random or periodic"),
        ],
        run: run_decouple,
    },
    Experiment {
        id: "teleport",
        summary: "teleportation of random qubits",
        params: &[p("inputs", Int, "100", "random input states")],
        run: run_teleport,
    },
    Experiment {
        id: "bb84",
        summary: "BB84 key distribution",
        params: &[
            p("bits", Int, "4096", "transmitted qubits"),
            p("eve", Bool, "false", "intercept-resend eavesdropper"),
            p("check", Float, "0.5", "fraction of sifted bits disclosed"),
        ],
        run: run_bb84,
    },
    Experiment {
        id: "chsh",
        summary: "CHSH correlation on an EPR pair",
        params: &[p("shots", Int, "100000", "trials"), p("records", Bool, "false", "emit trial records")],
        run: run_chsh,
    },
    Experiment {
        id: "polymer",
        summary: "polymer gluing game",
        params: &[
            p("trials", Int, "100000", "trials"),
            p("control", Text, "epr", "epr or classical:<0..15>"),
            p("records", Bool, "false", "emit trial records"),
        ],
        run: run_polymer,
    },
    Experiment {
        id: "granular",
        summary: "Grover search with amplitude grains",
        params: &[
            p("n", Int, "3", "qubits"),
            p("target", Int, "6", "marked index"),
            p("eps", Float, "0.5", "grain size"),
            p("max_iter", Int, "50", "iteration cap"),
        ],
        run: run_granular,
    },
    Experiment {
        id: "quanta",
        summary: "amplitude quantization of a one-step evolution",
        params: &[
            p("operator", Text, "hadamard", "hadamard or cyclic3"),
            p("eps", Text, "0.1,0.01,0.001", "comma-separated grain sizes"),
        ],
        run: run_quanta,
    },
    Experiment {
        id: "complexity",
        summary: "naive and quantum complexity of a register state",
        params: &[
            p("state", Text, "grover", "grover, ghz, product or pairs"),
            p("n", Int, "4", "qubits"),
            p("t", Float, "0.7", "Grover angle"),
            p("target", Int, "5", "marked index"),
        ],
        run: run_complexity,
    },
    Experiment {
        id: "phonons",
        summary: "normal modes of a periodic oscillator chain",
        params: &[p("n", Int, "64", "masses"), p("m", Float, "1", "mass"), p("k", Float, "1", "spring constant")],
        run: run_phonons,
    },
];

pub fn registry() -> &'static [Experiment] {
    REGISTRY
}

fn bad(msg: impl Into<String>) -> CliError {
    CliError::Numerical(qlectra_core::Error::BadParams(msg.into()))
}

fn flag(b: bool) -> f64 {
    if b {
        1.0
    } else {
        0.0
    }
}

fn run_grover(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let (n, marked) = (p.usize("n"), p.usize("marked"));
    if n == 0 || n > 20 || marked >= 1 << n {
        return Err(bad(format!("n = {n}, marked = {marked}")));
    }
    let f = BooleanOracle::marked(n, &[marked]);
    let r = grover(&f, 1)?;
    let theta = (1.0 / ((1usize << n) as f64).sqrt()).asin();
    let mut o = Outcome::default();
    o.metric("iterations", r.iterations as f64)
        .metric("success_prob", r.success_prob)
        .metric("closed_form", ((2 * r.iterations + 1) as f64 * theta).sin().powi(2))
        .metric("oracle_calls", r.oracle_calls as f64)
        .metric("measured", r.measured as f64);
    let mut s = Series::new(&["k", "success_prob"]);
    for k in 0..=2 * r.iterations + 1 {
        s.push(vec![k.into(), grover_state(&f, k)[marked].norm_sqr().into()]);
    }
    o.series = Some(s);
    Ok(o)
}

fn run_grover_adiabatic(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let (n, marked, total) = (p.usize("n"), p.usize("marked"), p.f64("total"));
    let size = 1usize << n.min(30);
    let rc = Schedule::roland_cerf(size, p.f64("eps"))?;
    let a = adiabatic_grover(n, marked, &rc, total, None)?;
    let b = adiabatic_grover(n, marked, &Schedule::Linear, total, None)?;
    let mut o = Outcome::default();
    o.metric("success_local", a)
        .metric("success_linear", b)
        .metric("local_natural_time", rc.natural_time().unwrap_or(f64::NAN))
        .metric("min_gap", grover_gap(0.5, size as f64));
    let mut s = Series::new(&["s", "gap"]);
    for k in 0..=50 {
        let x = k as f64 / 50.0;
        s.push(vec![x.into(), grover_gap(x, size as f64).into()]);
    }
    o.series = Some(s);
    Ok(o)
}

fn run_grover_continuous(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let r = continuous_grover(p.usize("n"), p.usize("marked"))?;
    let mut o = Outcome::default();
    o.metric("gap", r.gap)
        .metric("peak_time", r.peak_time)
        .metric("peak_prob", r.peak_prob)
        .metric("predicted_time", PI / r.gap);
    Ok(o)
}

fn dft(n: usize) -> CMat {
    let size = 1usize << n;
    let s = 1.0 / (size as f64).sqrt();
    CMat::from_fn(size, size, |a, b| cis(-2.0 * PI * (a * b) as f64 / size as f64) * s)
}

fn run_qft(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let n = p.usize("n");
    if n == 0 || n > 10 {
        return Err(bad(format!("n = {n} outside 1..=10")));
    }
    let full = unitary_of(&qft_full(n, None)?)?;
    let exact = unitary_of(&qft(n, None)?)?;
    let mut s = Series::new(&["cutoff", "error", "bound"]);
    let mut errs = Vec::new();
    for cutoff in 1..n {
        let e = unitary_of(&qft(n, Some(cutoff))?)?.distance(&exact);
        s.push(vec![cutoff.into(), e.into(), truncation_bound(n, cutoff).into()]);
        errs.push(e);
    }
    let mut o = Outcome::default();
    o.metric("dft_error", (full.mat() - dft(n)).camax())
        .metric("truncation_monotone", flag(errs.windows(2).all(|w| w[1] < w[0])));
    o.series = Some(s);
    Ok(o)
}

fn run_phase_estimate(p: &Params, seed: u64) -> CliResult<Outcome> {
    let (bits, w) = (p.usize("bits"), p.f64("phase"));
    if !(0.0..1.0).contains(&w) {
        return Err(bad(format!("phase {w} outside [0, 1)")));
    }
    let u = GateMatrix::new(diag(&[cis(2.0 * PI * w), c(1.0, 0.0)]))?;
    let psi = Ket::qubit_basis(1, 0)?;
    let dist = phase_distribution(&u, &psi, bits)?;
    let (argmax, pmax) = dist
        .iter()
        .enumerate()
        .fold((0, f64::NEG_INFINITY), |b, (i, &v)| if v > b.1 { (i, v) } else { b });
    let k = qlectra_core::qstate::sample_index(&dist, &mut Streams::new(seed).stream(0));
    let size = (1usize << bits) as f64;
    let mut o = Outcome::default();
    o.metric("peak_prob", pmax)
        .metric("peak_estimate", argmax as f64 / size)
        .metric("sampled_estimate", k as f64 / size)
        .metric("exact", flag((pmax - 1.0).abs() < 1e-9));
    let mut s = Series::new(&["c", "prob"]);
    for (i, v) in dist.iter().enumerate() {
        s.push(vec![i.into(), (*v).into()]);
    }
    o.series = Some(s);
    Ok(o)
}

fn run_shor(p: &Params, seed: u64) -> CliResult<Outcome> {
    let (q, attempts, runs) = (p.u64("q"), p.usize("attempts"), p.usize("runs").max(1));
    let streams = Streams::new(seed);
    let results: Vec<_> = (0..runs as u64)
        .into_par_iter()
        .map(|k| shor_factor(q, &mut streams.stream(k), attempts))
        .collect();
    let ok: Vec<(u64, u64)> = results.iter().filter_map(|r| r.as_ref().ok().copied()).collect();
    let Some(&(a, b)) = ok.first() else {
        return Err(results.into_iter().next().and_then(|r| r.err()).map(Into::into).unwrap_or_else(|| bad("no runs")));
    };
    let mut o = Outcome::default();
    o.metric("factor_small", a as f64)
        .metric("factor_large", b as f64)
        .metric("success_rate", ok.len() as f64 / runs as f64);
    Ok(o)
}

fn run_zalka(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let (n, t, steps) = (p.usize("n"), p.f64("t"), p.usize("steps").max(1));
    let (center, x0) = (p.f64("center"), p.f64("x0"));
    if n == 0 || n > 12 {
        return Err(bad(format!("n = {n} outside 1..=12")));
    }
    let mass = 1.0 / (4.0 * PI * PI);
    let grid = PotentialGrid::from_fn(n, mass, |x| 0.5 * (x - center).powi(2))?;
    let amps = CVec::from_iterator(1 << n, grid.positions().iter().map(|x| c((-(x - x0).powi(2)).exp(), 0.0)));
    let psi = Ket::new(vec![2; n], amps)?.normalized()?;
    let exact = Eigh::new(&grid.hamiltonian()?).evolve(psi.amps(), t);
    let mut s = Series::new(&["steps", "error"]);
    let mut errs = Vec::new();
    let ladder = [steps.div_ceil(4), steps.div_ceil(2), steps, 2 * steps];
    for &k in &ladder {
        let out = zalka_wiesner(&grid, &psi, t, t / k as f64)?;
        let e = (out.amps() - &exact).norm();
        s.push(vec![k.into(), e.into()]);
        errs.push((out, e));
    }
    let (out, err) = &errs[2];
    let slope = (errs[0].1 / errs[3].1).ln() / (ladder[3] as f64 / ladder[0] as f64).ln();
    let mut o = Outcome::default();
    o.metric("fidelity", exact.dotc(out.amps()).norm_sqr())
        .metric("error", *err)
        .metric("norm_drift", (out.norm() - 1.0).abs())
        .metric("convergence_order", slope);
    o.series = Some(s);
    Ok(o)
}

fn run_anneal(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let spec = ProblemSpec::from_json(p.text("problem"))?;
    let (g0, total, steps) = (p.f64("g0"), p.f64("total"), p.usize("steps").max(1));
    let h_tar = build_problem(&spec)?;
    let h_d = build_driver(spec.n())?;
    let g = Schedule::annealing(vec![(0.0, g0), (total, 0.0)])?;
    let psi0 = Ket::uniform(&vec![2; spec.n()])?;
    let r = anneal(&h_tar, &h_d, &g, total, &psi0, total / steps as f64)?;
    let mut o = Outcome::default();
    o.metric("ground_population", r.ground_population).metric("qubits", spec.n() as f64);
    Ok(o)
}

fn run_lindblad(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let (gamma, omega, total, dt) = (p.f64("gamma"), p.f64("omega"), p.f64("t"), p.f64("dt"));
    let lower = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    let model = LindbladModel::new(diag_real(&[0.0, omega]), vec![(lower, gamma)])?;
    let rho0 = density_of(&Ket::qubit_basis(1, 1)?);
    let traj = lindblad_evolve(&model, &rho0, total, dt)?;
    let stride = (traj.states.len() / 200).max(1);
    let mut s = Series::new(&["t", "p_excited", "exact"]);
    let (mut dev, mut trace_err) = (0.0f64, 0.0f64);
    for (k, r) in traj.states.iter().enumerate() {
        let t = k as f64 * traj.dt;
        let (pe, want) = (r.mat()[(1, 1)].re, (-gamma * t).exp());
        dev = dev.max((pe - want).abs());
        trace_err = trace_err.max((r.trace().re - 1.0).abs());
        if k % stride == 0 {
            s.push(vec![t.into(), pe.into(), want.into()]);
        }
    }
    let mut o = Outcome::default();
    o.metric("max_deviation", dev)
        .metric("trace_error", trace_err)
        .metric("final_excited", traj.last().mat()[(1, 1)].re)
        .metric("stiff", flag(traj.stiff));
    o.series = Some(s);
    Ok(o)
}

fn run_rabi(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let (omega, g, n, n_max) = (p.f64("omega"), p.f64("g"), p.usize("photons"), p.usize("n_max"));
    if n == 0 || n >= n_max {
        return Err(bad(format!("photons = {n} needs 1 <= n < n_max = {n_max}")));
    }
    let build = |rwa: bool| -> CliResult<CavityNetwork> {
        Ok(CavityNetwork::single(CavityModel::new(omega, vec![g], n_max, rwa)?)?)
    };
    let net = build(p.bool("rwa"))?;
    let a = net.index_of(&[(n, vec![0])])?;
    let b = net.index_of(&[(n - 1, vec![1])])?;
    let psi = Ket::basis(&net.dims(), a)?;
    let h = net.hamiltonian()?;
    let transfer = PI / (2.0 * g * (n as f64).sqrt());
    let total = p.f64("span") * transfer;
    let dt = total / p.usize("samples").max(1) as f64;
    let traj = rabi_trajectory(&h, &psi, total, dt)?;
    let at = h.eigh().evolve(psi.amps(), transfer)[b] * cis(n as f64 * omega * transfer);

    let mut s = Series::new(&["t", "p_n0", "p_n1m1"]);
    for (t, pops) in traj.times.iter().zip(&traj.populations) {
        s.push(vec![(*t).into(), pops[a].into(), pops[b].into()]);
    }
    let full = build(false)?;
    let tf = rabi_trajectory(&full.hamiltonian()?, &psi, total, dt)?;
    let rwa_dev = traj
        .populations
        .iter()
        .zip(&tf.populations)
        .map(|(x, y)| (x[a] - y[a]).abs().max((x[b] - y[b]).abs()))
        .fold(0.0, f64::max);
    let mut o = Outcome::default();
    o.metric("transfer_time", transfer)
        .metric("transfer_population", at.norm_sqr())
        .metric("transfer_phase_error", (at.arg() + PI / 2.0).abs())
        .metric("rwa_full_deviation", rwa_dev)
        .metric("warnings", net.cavities[0].warnings().len() as f64);
    o.series = Some(s);
    Ok(o)
}

fn run_cocsign(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let r = cocsign_simulate(p.usize("n1"), p.usize("n2"), p.f64("g"), p.f64("nu"))?;
    let mut o = Outcome::default();
    for (label, (ph, ov)) in ["00", "01", "10", "11"].iter().zip(r.phases.iter().zip(&r.overlaps)) {
        o.metric(&format!("phase_{label}"), *ph).metric(&format!("overlap_{label}"), *ov);
    }
    o.metric("phase_error", r.phase_error())
        .metric("commensuration_error", r.timings.error)
        .metric("total_time", r.total_time)
        .metric("top_level_population", r.top_level_population);
    Ok(o)
}

fn run_decouple(p: &Params, seed: u64) -> CliResult<Outcome> {
    let n = p.usize("qubits");
    if !(2..=16).contains(&n) {
        return Err(bad(format!("qubits = {n} outside 2..=16")));
    }
    let d = DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 });
    let (lambda, total, dt) = (p.f64("lambda"), p.f64("total"), p.f64("dt"));
    let reports = match p.text("mode") {
        "periodic" => vec![periodic_decoupling(&d, (0, 1), total, dt)?],
        "random" => {
            let streams = Streams::new(seed);
            (0..p.u64("runs").max(1))
                .into_par_iter()
                .map(|k| randomized_decoupling(&d, (0, 1), lambda, total, dt, &mut streams.stream(k)))
                .collect::<qlectra_core::Result<Vec<_>>>()?
        }
        other => return Err(CliError::SchemaViolation(format!("mode '{other}' is not random or periodic"))),
    };
    let m = reports.len() as f64;
    let mut o = Outcome::default();
    o.metric("rms_error", (reports.iter().map(|r| r.error * r.error).sum::<f64>() / m).sqrt())
        .metric("max_error", reports.iter().map(|r| r.error).fold(0.0, f64::max))
        .metric("pulses_per_step", reports.iter().map(|r| r.pulses_per_step()).sum::<f64>() / m);
    Ok(o)
}

fn random_qubit(rng: &mut impl Rng) -> CliResult<Ket> {
    let v: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
    Ok(Ket::qubit(c(v[0], v[1]), c(v[2], v[3])).normalized()?)
}

fn run_teleport(p: &Params, seed: u64) -> CliResult<Outcome> {
    let mut rng = Streams::new(seed).stream(0);
    let (mut sampled, mut branches) = (1.0f64, 1.0f64);
    let mut counts = [0usize; 4];
    for _ in 0..p.usize("inputs") {
        let psi = random_qubit(&mut rng)?;
        let (bob, (a, cc)) = teleport(psi.amp(0), psi.amp(1), &mut rng)?;
        sampled = sampled.min(bob.fidelity(&psi));
        counts[(2 * a + cc) as usize] += 1;
        for a in 0..2 {
            for cc in 0..2 {
                branches = branches.min(teleport_branch(psi.amp(0), psi.amp(1), a, cc)?.fidelity(&psi));
            }
        }
    }
    let mut o = Outcome::default();
    o.metric("min_fidelity", sampled).metric("min_branch_fidelity", branches);
    for (k, label) in ["00", "01", "10", "11"].iter().enumerate() {
        o.metric(&format!("outcome_{label}"), counts[k] as f64);
    }
    Ok(o)
}

fn run_bb84(p: &Params, seed: u64) -> CliResult<Outcome> {
    let r = bb84(p.usize("bits"), p.bool("eve"), p.f64("check"), &mut Streams::new(seed).stream(0));
    let mut o = Outcome::default();
    o.metric("qber", r.qber)
        .metric("sifted", r.sifted as f64)
        .metric("checked", r.checked as f64)
        .metric("errors", r.errors as f64)
        .metric("key_bits", r.key.len() as f64)
        .metric("eve_detected", flag(r.verdict == Verdict::EveDetected))
        .metric("threshold", qlectra_core::qproto::BB84_THRESHOLD);
    Ok(o)
}

fn run_chsh(p: &Params, seed: u64) -> CliResult<Outcome> {
    let shots = p.usize("shots");
    if shots < 2 {
        return Err(bad("need at least two shots"));
    }
    let streams = Streams::new(seed);
    let (est, se) = chsh_sample(shots, &streams);
    let exact = chsh_exact();
    let mut o = Outcome::default();
    o.metric("exact", exact)
        .metric("estimate", est)
        .metric("stderr", se)
        .metric("z_score", (est - exact) / se)
        .metric("mixture", chsh_mixture())
        .metric("classical_max", chsh_classical_max());
    if p.bool("records") {
        let mut s = Series::new(&["setting_a", "setting_b", "outcome_a", "outcome_b"]);
        for t in chsh_trials(shots, &streams) {
            s.push(vec![
                (t.setting_a as f64).into(),
                (t.setting_b as f64).into(),
                (t.outcome_a as f64).into(),
                (t.outcome_b as f64).into(),
            ]);
        }
        o.series = Some(s);
    }
    Ok(o)
}

fn parse_control(text: &str) -> CliResult<Control> {
    if text == "epr" {
        return Ok(Control::Epr);
    }
    let idx = text
        .strip_prefix("classical:")
        .and_then(|k| k.parse::<usize>().ok())
        .filter(|&k| k < 16)
        .ok_or_else(|| CliError::SchemaViolation(format!("control '{text}' is not epr or classical:<0..15>")))?;
    Ok(Control::Classical(classical_strategies()[idx]))
}

fn run_polymer(p: &Params, seed: u64) -> CliResult<Outcome> {
    let control = parse_control(p.text("control"))?;
    let m = p.usize("trials");
    let streams = Streams::new(seed);
    let best = classical_strategies()
        .into_iter()
        .map(|s| polymer_expected(Control::Classical(s)))
        .fold(0.0, f64::max);
    let mut o = Outcome::default();
    o.metric("glued_fraction", polymer_run(m, control, &streams))
        .metric("expected", polymer_expected(control))
        .metric("classical_best", best);
    if p.bool("records") {
        let mut s = Series::new(&["trial", "types", "shifts", "glued"]);
        for (k, t) in polymer_trials(m, control, &streams).iter().enumerate() {
            s.push(vec![
                k.into(),
                format!("{}{}", t.types.0.letter(), t.types.1.letter()).into(),
                format!("{:+}{:+}", t.shifts.0, t.shifts.1).into(),
                flag(t.glued).into(),
            ]);
        }
        o.series = Some(s);
    }
    Ok(o)
}

fn run_granular(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let r = granular_grover(p.usize("n"), p.usize("target"), p.f64("eps"), p.usize("max_iter"))?;
    let mut o = Outcome::default();
    o.metric("iterations", r.iterations.map_or(-1.0, |k| k as f64))
        .metric("success_prob", r.success_prob)
        .metric("standard_iterations", r.standard_iterations as f64)
        .metric("standard_prob", r.standard_prob);
    Ok(o)
}

fn quanta_instance(name: &str) -> CliResult<(CMat, Ket)> {
    match name {
        "hadamard" => Ok((qgate::h().mat().clone(), Ket::uniform(&[2])?)),
        "cyclic3" => {
            let col = [c(0.6, -0.3), c(0.5, -0.7), c(0.3, -0.4)];
            let a = CMat::from_fn(3, 3, |i, j| col[(i + 3 - j) % 3]);
            let psi = Ket::from_slice(&[3], &[c(0.5, 0.4), c(0.3, 0.7), c(0.8, 0.2)])?.normalized()?;
            Ok((a, psi))
        }
        other => Err(CliError::SchemaViolation(format!("operator '{other}' is not hadamard or cyclic3"))),
    }
}

fn run_quanta(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let (a, psi) = quanta_instance(p.text("operator"))?;
    let ladder: Vec<f64> = p
        .text("eps")
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| CliError::SchemaViolation(format!("bad grain size '{s}'"))))
        .collect::<CliResult<_>>()?;
    if ladder.is_empty() {
        return Err(CliError::SchemaViolation("empty grain ladder".into()));
    }
    let mut s = Series::new(&["eps", "nu", "quanta", "in_error", "fin_error", "agreement_error", "condition_q"]);
    let mut fin = Vec::new();
    let mut all_q = true;
    let mut last = None;
    for &eps in &ladder {
        let q = amplitude_quantization(&a, &psi, eps)?;
        all_q &= q.set.condition_q();
        s.push(vec![
            eps.into(),
            (q.nu as f64).into(),
            (q.set.len() as f64).into(),
            q.in_error.into(),
            q.fin_error.into(),
            q.agreement_error.into(),
            flag(q.set.condition_q()).into(),
        ]);
        fin.push(q.fin_error);
        last = Some(q);
    }
    let q = last.expect("ladder is nonempty");
    let mut o = Outcome::default();
    o.metric("fin_error", q.fin_error)
        .metric("in_error", q.in_error)
        .metric("agreement_error", q.agreement_error)
        .metric("condition_q", flag(all_q))
        .metric("error_decreasing", flag(fin.windows(2).all(|w| w[1] <= w[0])));
    o.series = Some(s);
    Ok(o)
}

fn run_complexity(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let n = p.usize("n");
    if !(1..=12).contains(&n) {
        return Err(bad(format!("n = {n} outside 1..=12")));
    }
    let size = 1usize << n;
    let amps = match p.text("state") {
        "grover" => {
            let (t, target) = (p.f64("t"), p.usize("target"));
            if target >= size || n < 2 {
                return Err(bad(format!("target {target} with n = {n}")));
            }
            let rest = t.cos() / ((size - 1) as f64).sqrt();
            CVec::from_fn(size, |i, _| if i == target { c(t.sin(), 0.0) } else { c(rest, 0.0) })
        }
        "ghz" => CVec::from_fn(size, |i, _| if i == 0 || i == size - 1 { c(1.0, 0.0) } else { c(0.0, 0.0) }),
        "product" => CVec::from_element(size, c(1.0, 0.0)),
        "pairs" => {
            let pair = Ket::epr();
            let mut k = Ket::qubit_basis(n % 2, 0).ok();
            for _ in 0..n / 2 {
                k = Some(match k {
                    Some(k) => qlectra_core::qstate::tensor(&k, &pair),
                    None => pair.clone(),
                });
            }
            k.ok_or_else(|| bad("empty register"))?.into_amps()
        }
        other => return Err(CliError::SchemaViolation(format!("state '{other}' is not grover, ghz, product or pairs"))),
    };
    let psi = Ket::new(vec![2; n], amps)?.normalized()?;
    let mut o = Outcome::default();
    o.metric("naive", naive_complexity(&psi, SCHMIDT_TOL)? as f64)
        .metric("quantum", quantum_complexity(&psi, SCHMIDT_TOL)? as f64);
    Ok(o)
}

fn run_phonons(p: &Params, _seed: u64) -> CliResult<Outcome> {
    let (n, m, k) = (p.usize("n"), p.f64("m"), p.f64("k"));
    let mut formula = oscillator_chain_spectrum(n, m, k)?;
    formula.sort_by(f64::total_cmp);
    let eig = circulant_frequencies(n, m, k)?;
    let mut s = Series::new(&["mode", "formula", "eigensolve"]);
    let mut dev = 0.0f64;
    for (q, (a, b)) in formula.iter().zip(&eig).enumerate() {
        dev = dev.max((a - b).abs());
        s.push(vec![q.into(), (*a).into(), (*b).into()]);
    }
    let mut o = Outcome::default();
    o.metric("max_deviation", dev)
        .metric("max_frequency", formula.last().copied().unwrap_or(0.0))
        .metric("zero_modes", formula.iter().filter(|&&w| w == 0.0).count() as f64);
    o.series = Some(s);
    Ok(o)
}
