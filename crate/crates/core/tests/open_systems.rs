use nalgebra::DMatrix;
use proptest::prelude::*;
use qlectra_core::linalg::{c, cis, commutator, CMat};
use qlectra_core::qopen::{
    cnot_from_diagonal, cocsign_simulate, cocsign_timings, lindblad_evolve, periodic_decoupling,
    randomized_decoupling, rabi_trajectory, CavityModel, CavityNetwork, LindbladModel,
};
use qlectra_core::qstate::{density_of, Ket};
use qlectra_core::rng::Streams;
use std::f64::consts::PI;

fn lowering() -> CMat {
    CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)])
}

#[test]
fn amplitude_damping_follows_exponential() {
    for gamma in [0.5, 2.0] {
        let h = qlectra_core::linalg::diag_real(&[0.0, 1.0]);
        let model = LindbladModel::new(h, vec![(lowering(), gamma)]).unwrap();
        let rho0 = density_of(&Ket::qubit_basis(1, 1).unwrap());
        let dt = 1e-3 / gamma;
        let traj = lindblad_evolve(&model, &rho0, 4.0 / gamma, dt).unwrap();
        for (k, r) in traj.states.iter().enumerate() {
            let t = k as f64 * dt;
            assert!((r.mat()[(1, 1)].re - (-gamma * t).exp()).abs() < 1e-3);
            assert!((r.trace().re - 1.0).abs() < 1e-6);
            assert!(r.validate().is_ok());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lindblad_keeps_density_valid(theta in 0.0f64..PI, phi in 0.0f64..6.28, gamma in 0.1f64..3.0, w in -2.0f64..2.0) {
        let psi = Ket::qubit(c((theta / 2.0).cos(), 0.0), cis(phi) * (theta / 2.0).sin());
        let h = CMat::from_row_slice(2, 2, &[c(0.0, 0.0), c(w, 0.0), c(w, 0.0), c(1.0, 0.0)]);
        let model = LindbladModel::new(h, vec![(lowering(), gamma)]).unwrap();
        let traj = lindblad_evolve(&model, &density_of(&psi), 1.0, 1e-3).unwrap();
        let last = traj.last();
        prop_assert!((last.trace().re - 1.0).abs() < 1e-9);
        prop_assert!(qlectra_core::linalg::hermiticity_defect(last.mat()) < 1e-12);
        prop_assert!(last.spectrum().unwrap().iter().all(|&p| p > -1e-6));
    }

    #[test]
    fn rwa_networks_conserve_excitations(g1 in 0.0f64..0.01, g2 in 0.0f64..0.01, mu in 0.0f64..0.05, n_max in 1usize..3) {
        let net = CavityNetwork::new(
            vec![CavityModel::new(1.0, vec![g1, g2], n_max, true).unwrap(), CavityModel::new(1.0, vec![g2], n_max, true).unwrap()],
            vec![(0, 1, mu)],
        ).unwrap();
        let h = net.matrix().unwrap();
        prop_assert!(commutator(&h, &net.number_operator()).camax() < 1e-12);
    }
}

fn one_excitation(g: f64, rwa: bool) -> (CavityNetwork, usize, usize) {
    let net = CavityNetwork::single(CavityModel::new(1.0, vec![g], 3, rwa).unwrap()).unwrap();
    let a = net.index_of(&[(1, vec![0])]).unwrap();
    let b = net.index_of(&[(0, vec![1])]).unwrap();
    (net, a, b)
}

#[test]
fn half_rabi_period_gives_minus_i() {
    let g = 1e-3;
    let (net, a, b) = one_excitation(g, true);
    let psi = Ket::basis(&net.dims(), a).unwrap();
    let t = PI / (2.0 * g);
    let out = net.hamiltonian().unwrap().eigh().evolve(psi.amps(), t);
    let amp = out[b] * cis(t);
    assert!((amp.arg() + PI / 2.0).abs() < 1e-6);
    assert!((amp.norm() - 1.0).abs() < 1e-9);
}

#[test]
fn rwa_and_full_coupling_agree_to_first_order() {
    let g = 1e-3;
    let (rwa, a, b) = one_excitation(g, true);
    let (full, _, _) = one_excitation(g, false);
    let psi = Ket::basis(&rwa.dims(), a).unwrap();
    let total = PI / (2.0 * g);
    let tr = rabi_trajectory(&rwa.hamiltonian().unwrap(), &psi, total, total / 200.0).unwrap();
    let tf = rabi_trajectory(&full.hamiltonian().unwrap(), &psi, total, total / 200.0).unwrap();
    let dev = tr
        .populations
        .iter()
        .zip(&tf.populations)
        .map(|(p, q)| (p[b] - q[b]).abs().max((p[a] - q[a]).abs()))
        .fold(0.0, f64::max);
    assert!(dev < 10.0 * g, "{dev}");
}

#[test]
fn rwa_refused_for_strong_coupling() {
    assert!(CavityModel::new(1.0, vec![0.05], 2, true).is_err());
    assert!(!CavityModel::new(1.0, vec![0.005], 2, true).unwrap().warnings().is_empty());
    assert!(CavityModel::new(1.0, vec![0.05], 2, false).is_ok());
}

#[test]
fn cocsign_sign_table() {
    let t = cocsign_timings(0.05, 10).unwrap();
    assert_eq!((t.n1, t.n2), (4, 6));
    let r = cocsign_simulate(4, 6, 1.0, 1e3).unwrap();
    assert!(r.phase_error() < PI * 0.05, "{:?}", r.phases);
    assert!(r.overlaps.iter().all(|&o| o > 0.99));
}

fn uniform(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i == j { 0.0 } else { 1.0 })
}

fn rms(lambda: f64, seeds: u64) -> f64 {
    let s = Streams::new(11);
    let sq: f64 = (0..seeds)
        .map(|k| {
            randomized_decoupling(&uniform(3), (0, 1), lambda, 1.0, 1e-4, &mut s.stream(k))
                .unwrap()
                .error
                .powi(2)
        })
        .sum();
    (sq / seeds as f64).sqrt()
}

#[test]
fn randomized_decoupling_error_and_scaling() {
    let hi = rms(1e3, 50);
    assert!(hi < 0.05, "{hi}");
    let lo = rms(1e2, 50);
    let ratio = lo / hi;
    assert!((2.0..5.0).contains(&ratio), "ratio {ratio}, expected about sqrt(10)");
}

#[test]
fn periodic_decoupling_pulse_cost() {
    let r = periodic_decoupling(&uniform(4), (0, 1), 1.0, 1e-3).unwrap();
    assert!(r.error < 1e-9);
    assert!(r.pulses % 2 == 0);
    assert!(r.pulses_per_step() > 1.0);
}

#[test]
fn cnot_from_always_on_coupling() {
    let e = [0.0, 0.0, 0.0, 1.0];
    let r = cnot_from_diagonal(e, 0.05, 100).unwrap();
    assert_eq!((r.n, r.m), (22, 3));
    assert!(r.operator_error <= 2.0 * r.phase_error + 1e-12);
    let out = qlectra_core::qgate::run(&r.circuit, &Ket::qubit_basis(2, 2).unwrap()).unwrap();
    assert!(out.amp(3).norm() > 0.99);
}
