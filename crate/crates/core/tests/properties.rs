mod common;

use common::*;
use dotcavity::correlations::{analyze, concurrence, mutual_information, reduce_to_dots, MeasurementSearch};
use dotcavity::dynamics::{integrate, lindblad_rhs};
use dotcavity::hilbert::{commutator, max_abs};
use dotcavity::model::hamiltonian;
use dotcavity::ode::Method;
use dotcavity::{DensityMatrix, HilbertSpace, IntegrateOptions, PulseParams, SystemParams, TwoQubitState};
use nalgebra::Matrix2;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

fn params_strategy() -> impl Strategy<Value = SystemParams> {
    (0.0..20.0, 0.0..2.0, 0.0..10.0, 0.0..25.0, -20.0..20.0, 0.0..2.0, 0.0..3.0, 1.0..30.0, 2usize..5).prop_map(
        |(g, gamma, kappa, forster, delta, pc, p0, tau, n_max)| SystemParams {
            g_over_2pi: g,
            gamma_over_2pi: gamma,
            kappa_over_2pi: kappa,
            forster_over_2pi: forster,
            delta_over_2pi: delta,
            pc_over_2pi: pc,
            pulse: PulseParams { p0_over_2pi: p0, tau_p: tau, t0: None },
            n_max,
        },
    )
}

fn random_local_unitary(rng: &mut StdRng) -> Matrix2<C64> {
    let m = Matrix2::from_fn(|_, _| random_complex(rng));
    m.qr().q()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn generator_is_traceless_and_hermitian(params in params_strategy(), seed in any::<u64>(), t in 0.0..200.0f64) {
        let space = params.space().unwrap();
        let mut rng = StdRng::seed_from_u64(seed);
        let rho = DensityMatrix::new(random_mixed(&mut rng, space.dim())).unwrap();
        let d = lindblad_rhs(&space, &params, &rho, t).unwrap();
        let scale = max_abs(&d).max(1e-300);
        prop_assert!(d.trace().norm() <= 1e-12 * scale * space.dim() as f64);
        prop_assert!(max_abs(&(&d - d.adjoint())) <= 1e-13 * scale);
    }

    #[test]
    fn hamiltonian_conserves_excitations(params in params_strategy()) {
        let space = params.space().unwrap();
        let h = hamiltonian(&space, &params);
        prop_assert!(max_abs(&commutator(&h, &space.excitation_number())) <= 1e-14);
        prop_assert!(max_abs(&(&h - h.adjoint())) == 0.0);
    }

    #[test]
    fn library_hamiltonian_matches_kronecker_oracle(params in params_strategy()) {
        let space = params.space().unwrap();
        let diff = hamiltonian(&space, &params) - Ops::new(params.n_max).hamiltonian(&params);
        prop_assert!(max_abs(&diff) <= 1e-15);
    }

    #[test]
    fn measures_are_local_unitary_invariant(seed in any::<u64>()) {
        let mut rng = StdRng::seed_from_u64(seed);
        let rho = TwoQubitState::new(nalgebra::Matrix4::from_iterator(random_mixed(&mut rng, 4).iter().copied()));
        let moved = rho.conjugate_local(&random_local_unitary(&mut rng), &random_local_unitary(&mut rng));
        let search = MeasurementSearch::default();
        let (a, b) = (analyze(&rho, &search, None).unwrap(), analyze(&moved, &search, None).unwrap());
        prop_assert!((a.cc - b.cc).abs() <= 1e-10);
        prop_assert!((a.mutual_info - b.mutual_info).abs() <= 1e-10);
        prop_assert!((a.discord - b.discord).abs() <= 1e-6);
    }
}

#[test]
fn discord_of_pure_states_is_the_entanglement_entropy() {
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..50 {
        let rho = TwoQubitState::from_pure(random_pure(&mut rng));
        let rb = rho.reduced_b();
        let rb = nalgebra::DMatrix::from_iterator(2, 2, rb.iter().copied());
        let sb = dotcavity::correlations::von_neumann_entropy(&rb).unwrap();
        let c = analyze(&rho, &MeasurementSearch::default(), None).unwrap();
        assert!((c.discord - sb).abs() < 1e-6, "Q = {} vs S(B) = {}", c.discord, sb);
        assert!((mutual_information(&rho).unwrap() - 2.0 * sb).abs() < 1e-9);
    }
}

#[test]
fn bell_diagonal_measures_match_closed_form() {
    let mut rng = StdRng::seed_from_u64(12);
    for _ in 0..20 {
        let cs = random_bell_diagonal(&mut rng);
        let (i, cl, q) = bell_diagonal_measures(cs);
        let got = analyze(&TwoQubitState::new(bell_diagonal(cs)), &MeasurementSearch::default(), None).unwrap();
        assert!((got.mutual_info - i).abs() < 1e-10);
        assert!((got.classical - cl).abs() < 1e-6);
        assert!((got.discord - q).abs() < 1e-6);
    }
    for (cs, q) in [([1.0, -1.0, 1.0], 1.0), ([-1.0, -1.0, -1.0], 1.0), ([0.0, 0.0, 0.0], 0.0)] {
        let got = analyze(&TwoQubitState::new(bell_diagonal(cs)), &MeasurementSearch::default(), None).unwrap();
        assert!((got.discord - q).abs() < 1e-9);
        assert!((concurrence(&TwoQubitState::new(bell_diagonal(cs))).unwrap() - q).abs() < 1e-9);
    }
}

#[test]
fn doubling_the_measurement_grid_changes_nothing() {
    let mut rng = StdRng::seed_from_u64(13);
    let fine = MeasurementSearch { theta_points: 128, phi_points: 256, ..MeasurementSearch::default() };
    for _ in 0..10 {
        let rho = TwoQubitState::new(nalgebra::Matrix4::from_iterator(random_mixed(&mut rng, 4).iter().copied()));
        let a = analyze(&rho, &MeasurementSearch::default(), None).unwrap();
        let b = analyze(&rho, &fine, None).unwrap();
        assert!((a.classical - b.classical).abs() < 1e-7);
    }
}

#[test]
fn closed_system_keeps_excitation_number() {
    let params = SystemParams {
        gamma_over_2pi: 0.0,
        kappa_over_2pi: 0.0,
        forster_over_2pi: 12.0,
        delta_over_2pi: 3.0,
        n_max: 4,
        ..SystemParams::default()
    };
    let space = params.space().unwrap();
    let ket = space.ket(1, 1, 0) + space.ket(0, 1, 1) + space.ket(0, 0, 2);
    let rho0 = DensityMatrix::pure(&ket).unwrap();
    let n_op = space.excitation_number();
    let traj = integrate(&space, &params, &rho0, (0.0, 100.0), 1.0, &IntegrateOptions::default()).unwrap();
    for rho in &traj.states {
        assert!((rho.expect(&n_op).re - 2.0).abs() < 1e-9);
    }
}

#[test]
fn halving_tolerances_converges() {
    let params = SystemParams {
        pc_over_2pi: 1.0,
        forster_over_2pi: 15.0,
        pulse: PulseParams { p0_over_2pi: 1.0, tau_p: 20.0, t0: None },
        ..SystemParams::default()
    };
    let space = params.space().unwrap();
    let rho0 = dotcavity::InitialState::Symmetric.density(&space);
    let run = |rtol: f64, atol: f64| {
        let opts = IntegrateOptions { method: Method::Adaptive { rtol, atol }, truncation_guard: None };
        integrate(&space, &params, &rho0, (0.0, 80.0), 1.0, &opts).unwrap()
    };
    let coarse = run(1e-8, 1e-10);
    let fine = run(5e-9, 5e-11);
    let search = MeasurementSearch::default();
    for (a, b) in coarse.states.iter().zip(&fine.states) {
        assert!(max_abs(&(a.matrix() - b.matrix())) < 1e-7);
        let (ca, cb) =
            (analyze(&reduce_to_dots(&space, a), &search, None).unwrap(), analyze(&reduce_to_dots(&space, b), &search, None).unwrap());
        assert!((ca.cc - cb.cc).abs() < 1e-6);
        assert!((ca.discord - cb.discord).abs() < 1e-6);
    }
}

#[test]
fn single_photon_decays_at_kappa() {
    let params = SystemParams { g_over_2pi: 0.0, gamma_over_2pi: 0.0, n_max: 2, ..SystemParams::default() };
    let space: HilbertSpace = params.space().unwrap();
    let rho0 = DensityMatrix::pure(&space.ket(0, 0, 1)).unwrap();
    let traj = integrate(&space, &params, &rho0, (0.0, 50.0), 5.0, &IntegrateOptions::default()).unwrap();
    let kappa = rad_per_ps(params.kappa_over_2pi);
    for (t, rho) in traj.times.iter().zip(&traj.states) {
        assert!((rho.population(space.index(0, 0, 1)) - (-kappa * t).exp()).abs() < 1e-8);
    }
}
