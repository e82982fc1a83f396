use proptest::prelude::*;
use qlectra_core::linalg::{c, cis, CMat, CVec, Eigh};
use qlectra_core::qalgo::{
    grover, grover_state, multiplicative_order, phase_distribution, qft, qft_full, shor_factor,
    shor_order, truncation_bound, zalka_wiesner, BooleanOracle, PotentialGrid,
};
use qlectra_core::qgate::{unitary_of, GateMatrix};
use qlectra_core::qstate::Ket;
use qlectra_core::rng::Streams;
use std::f64::consts::PI;

fn dft(n: usize) -> CMat {
    let size = 1usize << n;
    let s = 1.0 / (size as f64).sqrt();
    CMat::from_fn(size, size, |a, b| cis(-2.0 * PI * (a * b) as f64 / size as f64) * s)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn grover_stays_in_plane_and_follows_sine_law(n in 2usize..=6, seed in any::<u64>(), l_frac in 0.0f64..0.3) {
        let size = 1usize << n;
        let l = ((l_frac * size as f64) as usize).max(1);
        let marked: Vec<usize> = (0..l).map(|k| (seed as usize).wrapping_add(k * 7919) % size).collect::<std::collections::BTreeSet<_>>().into_iter().collect();
        let l = marked.len();
        let f = BooleanOracle::marked(n, &marked);
        let theta = (l as f64 / size as f64).sqrt().asin();
        let k_opt = (PI / (4.0 * theta)).floor() as usize;
        let good = CVec::from_fn(size, |i, _| if marked.contains(&i) { c(1.0 / (l as f64).sqrt(), 0.0) } else { c(0.0, 0.0) });
        let bad = if l < size {
            CVec::from_fn(size, |i, _| if marked.contains(&i) { c(0.0, 0.0) } else { c(1.0 / ((size - l) as f64).sqrt(), 0.0) })
        } else {
            CVec::zeros(size)
        };
        for k in 0..=(3 * k_opt).max(1) {
            let v = grover_state(&f, k);
            let inside = good.scale(good.dotc(&v).re) + bad.scale(bad.dotc(&v).re);
            prop_assert!((&v - inside).norm() < 1e-9);
            let p: f64 = marked.iter().map(|&x| v[x].norm_sqr()).sum();
            prop_assert!((p - ((2 * k + 1) as f64 * theta).sin().powi(2)).abs() < 1e-9);
        }
    }

    #[test]
    fn oracle_calls_match_iterations(n in 2usize..=7, target in any::<usize>()) {
        let f = BooleanOracle::marked(n, &[target % (1 << n)]);
        let r = grover(&f, 1).unwrap();
        prop_assert_eq!(r.oracle_calls, r.iterations);
        prop_assert_eq!(r.measured, target % (1 << n));
    }
}

#[test]
fn grover_closed_form_small_registers() {
    let r = grover(&BooleanOracle::marked(2, &[3]), 1).unwrap();
    assert_eq!(r.iterations, 1);
    assert!((r.success_prob - 1.0).abs() < 1e-9);
    let r = grover(&BooleanOracle::marked(3, &[5]), 1).unwrap();
    assert_eq!(r.iterations, 2);
    let theta = (1.0 / 8f64.sqrt()).asin();
    assert!((r.success_prob - (5.0 * theta).sin().powi(2)).abs() < 1e-9);
    assert!((r.success_prob - 0.9453).abs() < 1e-4);
}

#[test]
fn qft_network_is_reversed_dft() {
    for n in 1..=6 {
        let u = unitary_of(&qft_full(n, None).unwrap()).unwrap();
        let err = (u.mat() - dft(n)).camax();
        assert!(err < 1e-9, "n = {n}: {err}");
        let size = 1usize << n;
        assert!(u.mat().iter().all(|z| (z.norm() - 1.0 / (size as f64).sqrt()).abs() < 1e-12));
        let gram = u.mat().adjoint() * u.mat();
        assert!((gram - qlectra_core::linalg::identity(size)).camax() < 1e-12);
    }
}

#[test]
fn truncated_qft_error_shrinks_with_cutoff() {
    let n = 6;
    let exact = unitary_of(&qft(n, None).unwrap()).unwrap();
    let mut prev = f64::INFINITY;
    for cutoff in 1..n {
        let u = unitary_of(&qft(n, Some(cutoff)).unwrap()).unwrap();
        let err = u.distance(&exact);
        assert!(err < prev, "cutoff {cutoff}: {err} !< {prev}");
        assert!(err <= truncation_bound(n, cutoff) + 1e-12);
        prev = err;
    }
    assert!(prev < 1e-12, "cutoff n-1 drops no gates");
}

#[test]
fn phase_estimation_is_exact_on_grid_frequencies() {
    let n_bits = 4;
    for cc in 0..16usize {
        let w = cc as f64 / 16.0;
        let u = GateMatrix::new(qlectra_core::linalg::diag(&[cis(2.0 * PI * w), c(1.0, 0.0)])).unwrap();
        let p = phase_distribution(&u, &Ket::qubit_basis(1, 0).unwrap(), n_bits).unwrap();
        assert!((p[cc] - 1.0).abs() < 1e-9, "c = {cc}: {}", p[cc]);
    }
}

#[test]
fn shor_factors_desk_scale_moduli() {
    for (q, want) in [(15u64, (3, 5)), (21, (3, 7)), (33, (3, 11))] {
        let ok = (0..50)
            .filter(|&s| shor_factor(q, &mut Streams::new(s).stream(0), 20) == Ok(want))
            .count();
        assert!(ok >= 48, "q = {q}: {ok}/50");
    }
}

#[test]
fn shor_orders_match_brute_force() {
    for (y, q) in [(2u64, 15u64), (7, 15), (2, 21), (5, 21), (2, 33), (10, 33)] {
        let r = shor_order(y, q, &mut Streams::new(y * q).stream(0)).unwrap();
        assert_eq!(Some(r), multiplicative_order(y, q), "y = {y}, q = {q}");
    }
}

fn harmonic() -> (PotentialGrid, Ket) {
    let m = 1.0 / (4.0 * PI * PI);
    let grid = PotentialGrid::from_fn(6, m, |x| 0.5 * (x - 4.0).powi(2)).unwrap();
    let amps = CVec::from_iterator(64, grid.positions().iter().map(|x| c((-(x - 3.0).powi(2)).exp(), 0.0)));
    let psi = Ket::new(vec![2; 6], amps).unwrap().normalized().unwrap();
    (grid, psi)
}

#[test]
fn zalka_wiesner_converges_first_order() {
    let (grid, psi) = harmonic();
    let t = 2.0;
    let exact = Eigh::new(&grid.hamiltonian().unwrap()).evolve(psi.amps(), t);
    let out = zalka_wiesner(&grid, &psi, t, t / 1000.0).unwrap();
    assert!(exact.dotc(out.amps()).norm_sqr() >= 0.999);
    assert!((out.norm() - 1.0).abs() < 1e-9);

    let steps = [250usize, 500, 1000, 2000];
    let errs: Vec<f64> = steps
        .iter()
        .map(|&s| (zalka_wiesner(&grid, &psi, t, t / s as f64).unwrap().amps() - &exact).norm())
        .collect();
    let slope = (errs[0] / errs[3]).ln() / (steps[3] as f64 / steps[0] as f64).ln();
    assert!((slope - 1.0).abs() < 0.15, "slope {slope}");
}

#[test]
fn zalka_wiesner_free_particle_matches_kinetic_propagator() {
    let (grid, psi) = harmonic();
    let free = PotentialGrid::new(6, vec![0.0; 64], grid.mass()).unwrap();
    let exact = Eigh::new(&free.kinetic().unwrap()).evolve(psi.amps(), 0.7);
    for dt in [0.7, 0.1, 0.0123] {
        let out = zalka_wiesner(&free, &psi, 0.7, dt).unwrap();
        assert!((out.amps() - &exact).norm() < 1e-9);
    }
}
