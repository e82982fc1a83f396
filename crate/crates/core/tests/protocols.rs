use proptest::prelude::*;
use qlectra_core::linalg::{c, CMat, CVec};
use qlectra_core::qproto::{
    amplitude_quantization, bb84, bb84_checked, chsh_classical_max, chsh_exact, chsh_mixture,
    chsh_sample, circulant_frequencies, classical_strategies, equilibrium_check, granular_grover,
    naive_complexity, oscillator_chain_spectrum, polymer_expected, polymer_run, quantize_state,
    quantum_complexity, teleport_branch, Control, Verdict, SCHMIDT_TOL,
};
use qlectra_core::qgate;
use qlectra_core::qstate::Ket;
use qlectra_core::rng::Streams;
use rand::Rng;

fn random_qubit(rng: &mut impl Rng) -> Ket {
    let v: Vec<f64> = (0..4).map(|_| rng.random_range(-1.0..1.0)).collect();
    Ket::qubit(c(v[0], v[1]), c(v[2], v[3])).normalized().unwrap()
}

#[test]
fn teleportation_is_exact_on_every_branch() {
    let mut rng = Streams::new(2024).stream(0);
    for _ in 0..100 {
        let psi = random_qubit(&mut rng);
        for a in 0..2 {
            for cc in 0..2 {
                let bob = teleport_branch(psi.amp(0), psi.amp(1), a, cc).unwrap();
                assert!(bob.fidelity(&psi) >= 1.0 - 1e-9);
            }
        }
    }
}

#[test]
fn bb84_statistics() {
    let clean = bb84(4096, false, 0.5, &mut Streams::new(1).stream(0));
    assert_eq!(clean.qber, 0.0);
    assert_eq!(clean.verdict, Verdict::Clean);
    let eve = bb84(4096, true, 1.0, &mut Streams::new(1).stream(1));
    assert!((eve.qber - 0.25).abs() < 0.03, "{}", eve.qber);
    assert_eq!(eve.verdict, Verdict::EveDetected);
}

#[test]
fn bb84_detection_with_sixteen_check_bits() {
    let s = Streams::new(77);
    let caught = (0..500)
        .filter(|&k| bb84_checked(256, true, 16, &mut s.stream(k)).errors > 0)
        .count() as f64
        / 500.0;
    let want = 1.0 - 0.75f64.powi(16);
    // binomial standard error is about 0.0045
    assert!((caught - want).abs() < 0.02, "{caught} vs {want}");
}

#[test]
fn chsh_violation() {
    let exact = chsh_exact();
    assert!((exact - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    let (est, se) = chsh_sample(100_000, &Streams::new(7));
    assert!((est - exact).abs() < 4.0 * se, "{est} ± {se}");
    assert!(est - 0.5 > 20.0 * se);
    assert!(chsh_mixture() <= 0.5);
    assert!(chsh_classical_max() <= 0.5 + 1e-15);
}

#[test]
fn polymer_quantum_beats_every_classical_strategy() {
    let f = polymer_run(100_000, Control::Epr, &Streams::new(3));
    assert!((0.84..=0.87).contains(&f), "{f}");
    assert!((f - polymer_expected(Control::Epr)).abs() < 0.005);
    for s in classical_strategies() {
        assert!(polymer_expected(Control::Classical(s)) <= 0.75);
    }
}

#[test]
fn hadamard_quantization_ladder() {
    let h = qgate::h();
    let plus = Ket::uniform(&[2]).unwrap();
    let mut prev = f64::INFINITY;
    for eps in [0.1, 0.01, 0.001] {
        let q = amplitude_quantization(h.mat(), &plus, eps).unwrap();
        assert!(q.set.condition_q());
        assert!(q.fin_error <= prev);
        prev = q.fin_error;
        if eps == 0.001 {
            assert!(q.agreement_error < 0.1, "{}", q.agreement_error);
        }
    }
}

/// Columns are cyclic shifts of one column, so every state is in equilibrium.
fn circulant(col: &[num_complex::Complex64]) -> CMat {
    let d = col.len();
    CMat::from_fn(d, d, |i, j| col[(i + d - j) % d])
}

#[test]
fn generic_quantization_converges() {
    let mut rng = Streams::new(5).stream(0);
    for _ in 0..5 {
        let col: Vec<_> = (0..3)
            .map(|_| c(rng.random_range(0.2..1.0), rng.random_range(-1.0..-0.2)))
            .collect();
        let a = circulant(&col);
        let amps: Vec<_> = (0..3).map(|_| c(rng.random_range(0.2..1.0), rng.random_range(0.2..1.0))).collect();
        let psi = Ket::from_slice(&[3], &amps).unwrap().normalized().unwrap();
        assert!(equilibrium_check(&a, &psi));
        let errs: Vec<f64> = [0.1, 0.01, 0.001]
            .iter()
            .map(|&eps| {
                let q = amplitude_quantization(&a, &psi, eps).unwrap();
                assert!(q.set.condition_q());
                assert!(q.in_error <= 3.0 * eps);
                q.fin_error
            })
            .collect();
        assert!(errs[2] < errs[0], "{errs:?}");
        let q = amplitude_quantization(&a, &psi, 0.001).unwrap();
        assert!(q.agreement_error < 0.1, "{}", q.agreement_error);
    }
}

#[test]
fn granular_grover_thresholds() {
    let r = granular_grover(3, 6, 0.5, 10).unwrap();
    assert_eq!(r.iterations, Some(1));
    assert!((r.success_prob - 1.0).abs() < 1e-12);
    let theta = (1.0 / 8f64.sqrt()).asin();
    let other = (3.0 * theta).cos() / 7f64.sqrt();
    assert!(other < 0.5 && 0.5 < (3.0 * theta).sin());
    let r = granular_grover(6, 40, 0.12, 10).unwrap();
    assert!(r.iterations.unwrap() < r.standard_iterations);
}

fn grover_intermediate(n: usize, target: usize, t: f64) -> Ket {
    let size = 1usize << n;
    let a = t.cos() / ((size - 1) as f64).sqrt();
    let amps = CVec::from_fn(size, |i, _| if i == target { c(t.sin(), 0.0) } else { c(a, 0.0) });
    Ket::new(vec![2; n], amps).unwrap()
}

#[test]
fn complexity_of_grover_intermediate_state() {
    let psi = grover_intermediate(4, 5, 0.7);
    assert_eq!(naive_complexity(&psi, SCHMIDT_TOL).unwrap(), 4);
    assert_eq!(quantum_complexity(&psi, SCHMIDT_TOL).unwrap(), 4);
}

#[test]
fn phonon_formula_matches_eigensolve() {
    let mut w = oscillator_chain_spectrum(64, 1.0, 1.0).unwrap();
    w.sort_by(f64::total_cmp);
    let e = circulant_frequencies(64, 1.0, 1.0).unwrap();
    let dev = w.iter().zip(&e).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
    assert!(dev < 1e-8);
}

proptest! {
    #[test]
    fn grain_rounding_bound(re in prop::collection::vec(-1.0f64..1.0, 8), im in prop::collection::vec(-1.0f64..1.0, 8), eps in 0.01f64..0.2) {
        let amps: Vec<_> = re.iter().zip(&im).map(|(&a, &b)| c(a, b)).collect();
        let psi = Ket::from_slice(&[8], &amps).unwrap();
        prop_assume!(psi.norm() > 0.1);
        let psi = psi.normalized().unwrap();
        if let Ok(g) = quantize_state(&psi, eps) {
            let back = g.reconstruct();
            for (x, y) in back.iter().zip(psi.amps().iter()) {
                prop_assert!((x.re - y.re).abs() <= eps / 2.0 + 1e-12);
                prop_assert!((x.im - y.im).abs() <= eps / 2.0 + 1e-12);
            }
        }
    }

    #[test]
    fn complexity_of_products_is_one(angles in prop::collection::vec(0.0f64..3.0, 2..6)) {
        let kets: Vec<Ket> = angles.iter().map(|t| Ket::qubit(c(t.cos(), 0.0), c(t.sin(), 0.0))).collect();
        let psi = qlectra_core::qstate::tensor_all(&kets).unwrap();
        prop_assert_eq!(naive_complexity(&psi, SCHMIDT_TOL).unwrap(), 1);
        prop_assert_eq!(quantum_complexity(&psi, SCHMIDT_TOL).unwrap(), 1);
    }

    #[test]
    fn quantum_never_exceeds_naive(re in prop::collection::vec(-1.0f64..1.0, 16), mask in 0u16..) {
        let amps: Vec<_> = re.iter().enumerate().map(|(i, &a)| if mask >> i & 1 == 1 { c(a, 0.0) } else { c(0.0, 0.0) }).collect();
        let psi = Ket::from_slice(&[2, 2, 2, 2], &amps).unwrap();
        prop_assume!(psi.norm() > 0.1);
        let psi = psi.normalized().unwrap();
        let q = quantum_complexity(&psi, SCHMIDT_TOL).unwrap();
        prop_assert!(q <= naive_complexity(&psi, SCHMIDT_TOL).unwrap());
        prop_assert!(q >= 1);
    }
}
