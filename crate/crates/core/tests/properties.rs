use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;

use qwalk::lattice::{step_position, LatticeState, LatticeWalk, MomentumStepper};
use qwalk::qca::build_free_step;
use qwalk::qca::fock::random_state;
use qwalk::qca::free::mode_occupations;
use qwalk::spin::{
    eigenphases, exp_neg_i, hermitian_eigen, pauli, projector_up, rotated_pauli_1d,
    rotated_pauli_3d, wrap_phase, Axis, SpinMatrix, C64,
};
use qwalk::walk1d::{gamma_coeffs, transfer_closed_form, transfer_op, walk_op, Walk1DParams};
use qwalk::walk3d::{dirac_op, kj_op, weyl_op, MomentumVec, Walk3DParams, WeylSign};

fn theta() -> impl Strategy<Value = f64> {
    -1.5f64..1.5
}

fn momentum() -> impl Strategy<Value = f64> {
    -PI..PI
}

fn mass() -> impl Strategy<Value = f64> {
    0.0f64..1.0
}

fn axis() -> impl Strategy<Value = Axis> {
    prop_oneof![Just(Axis::X), Just(Axis::Y), Just(Axis::Z)]
}

/// `a₀I + a·σ`, a generic 2×2 Hermitian matrix.
fn hermitian2(a: [f64; 4]) -> SpinMatrix {
    SpinMatrix::identity(2).scale_re(a[0])
        + pauli(Axis::X).scale_re(a[1])
        + pauli(Axis::Y).scale_re(a[2])
        + pauli(Axis::Z).scale_re(a[3])
}

fn circle_dist(a: f64, b: f64) -> f64 {
    wrap_phase(a - b).abs()
}

/// Every phase of `a` has a partner in `b` and vice versa (mod 2π).
fn same_phases(a: &[f64], b: &[f64], tol: f64) -> bool {
    let covered = |x: &[f64], y: &[f64]| {
        x.iter()
            .all(|&p| y.iter().any(|&q| circle_dist(p, q) < tol))
    };
    a.len() == b.len() && covered(a, b) && covered(b, a)
}

fn negated(phases: &[f64]) -> Vec<f64> {
    phases.iter().map(|&p| wrap_phase(-p)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn rotated_paulis_square_to_identity(t in -10.0f64..10.0, ax in axis()) {
        for s in [rotated_pauli_1d(t), rotated_pauli_3d(ax, t)] {
            prop_assert!((s * s).dist(&SpinMatrix::identity(2)) < 1e-12);
            let (eig, _) = hermitian_eigen(&s);
            prop_assert!((eig[0] + 1.0).abs() < 1e-12 && (eig[1] - 1.0).abs() < 1e-12);
            prop_assert!(s.trace().norm() < 1e-12);
        }
    }

    #[test]
    fn exponentials_compose(a in prop::array::uniform4(-2.0f64..2.0), s in -3.0f64..3.0, t in -3.0f64..3.0) {
        let h = hermitian2(a);
        let lhs = exp_neg_i(&h, s) * exp_neg_i(&h, t);
        prop_assert!(lhs.dist(&exp_neg_i(&h, s + t)) < 1e-12);
        prop_assert!(exp_neg_i(&h, s).unitarity_defect() < 1e-12);
    }

    #[test]
    fn adjoint_negates_eigenphases(a in prop::array::uniform4(-2.0f64..2.0), s in -3.0f64..3.0) {
        let u = exp_neg_i(&hermitian2(a), s);
        let e = eigenphases(&u).unwrap();
        let e_dag = eigenphases(&u.adjoint()).unwrap();
        prop_assert!(e.as_slice().iter().all(|p| *p > -PI && *p <= PI));
        prop_assert!(same_phases(e_dag.as_slice(), &negated(e.as_slice()), 1e-10));
    }

    #[test]
    fn complementary_projectors(t in -10.0f64..10.0, ax in axis()) {
        for s in [rotated_pauli_1d(t), rotated_pauli_3d(ax, t)] {
            let p = projector_up(&s).unwrap();
            let q = projector_up(&(-s)).unwrap();
            prop_assert!((p + q).dist(&SpinMatrix::identity(2)) < 1e-12);
            prop_assert!((p * p).dist(&p) < 1e-12);
        }
    }

    #[test]
    fn gamma_triple_invariants(t in theta()) {
        let g = gamma_coeffs(&Walk1DParams::new(t, 0.0).unwrap());
        let id = SpinMatrix::identity(2);
        prop_assert!((g.plus + g.zero + g.minus).dist(&id) < 1e-12);
        prop_assert!((g.plus.adjoint() * g.minus).frobenius_norm() < 1e-12);
        prop_assert!((g.minus.adjoint() * g.plus).frobenius_norm() < 1e-12);
        let sum = g.plus.adjoint() * g.plus + g.zero.adjoint() * g.zero + g.minus.adjoint() * g.minus;
        prop_assert!(sum.dist(&id) < 1e-12);
    }

    #[test]
    fn transfer_is_unitary_and_matches_closed_form(t in theta(), p in momentum()) {
        let params = Walk1DParams::new(t, 0.0).unwrap();
        let tp = transfer_op(&params, p);
        prop_assert!(tp.unitarity_defect() < 1e-12);
        prop_assert!(tp.dist(&transfer_closed_form(&params, p)) < 1e-12);
        prop_assert!(tp.dist(&gamma_coeffs(&params).transfer(p)) < 1e-12);
    }

    #[test]
    fn walk_eigenphases_pair_up(t in theta(), m in mass(), p in momentum()) {
        let params = Walk1DParams::new(t, m).unwrap();
        let e = eigenphases(&walk_op(&params, p)).unwrap();
        prop_assert!(same_phases(e.as_slice(), &negated(e.as_slice()), 1e-10));
    }

    #[test]
    fn conventional_pseudo_doubler_identity(eta in -0.1f64..0.1) {
        let params = Walk1DParams::new(0.0, 0.0).unwrap();
        let shifted = transfer_op(&params, wrap_phase(PI + eta));
        prop_assert!(shifted.dist(&(-transfer_op(&params, eta))) < 1e-12);
    }

    #[test]
    fn axis_step_real_part(t in theta(), p in momentum(), ax in axis()) {
        let params = Walk3DParams::new(t, 0.0).unwrap();
        let k = kj_op(&params, ax, p);
        prop_assert!(k.unitarity_defect() < 1e-12);
        let expected = (p / 2.0).cos().powi(2) - (p / 2.0).sin().powi(2) * (2.0 * t).cos();
        for phase in eigenphases(&k).unwrap().as_slice() {
            prop_assert!((phase.cos() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn weyl_handedness_relation(t in theta(), p in prop::array::uniform3(-PI..PI)) {
        let plus = Walk3DParams::new(-t, 0.0).unwrap();
        let minus = Walk3DParams::new(t, 0.0).unwrap();
        let neg = MomentumVec::wrapped([-p[0], -p[1], -p[2]]);
        let k_minus = weyl_op(&minus, WeylSign::Minus, &MomentumVec(p));
        let k_plus = weyl_op(&plus, WeylSign::Plus, &neg);
        prop_assert!(k_minus.dist(&k_plus) < 1e-12);
    }

    #[test]
    fn dirac_eigenphases_pair_up(t in theta(), m in mass(), p in prop::array::uniform3(-PI..PI)) {
        let params = Walk3DParams::new(t, m).unwrap();
        let u = dirac_op(&params, &MomentumVec(p));
        prop_assert!(u.unitarity_defect() < 1e-12);
        let e = eigenphases(&u).unwrap();
        prop_assert!(same_phases(e.as_slice(), &negated(e.as_slice()), 1e-10));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn position_steps_match_momentum_propagator(
        t in theta(),
        m in mass(),
        sites in 4usize..128,
        steps in 1usize..100,
        seed in any::<u64>(),
    ) {
        let walk = LatticeWalk::Line(Walk1DParams::new(t, m).unwrap());
        let amps = random_state(2 * sites, seed);
        let start = LatticeState::from_amplitudes(1, sites, 2, amps).unwrap();
        let mut state = start.clone();
        for _ in 0..steps {
            state = step_position(&walk, &state).unwrap();
        }
        let fourier = MomentumStepper::new(walk, sites).unwrap().steps(&start, steps).unwrap();
        prop_assert!(state.max_deviation(&fourier) < 1e-9);
    }

    #[test]
    fn free_qca_conserves_particle_number(t in theta(), m in mass(), sites in 2usize..6, seed in any::<u64>()) {
        let qca = build_free_step(&Walk1DParams::new(t, m).unwrap(), sites).unwrap();
        let modes = 2 * sites;
        // weight each Fock basis state by its particle number
        let number = |v: &[C64]| mode_occupations(modes, v).iter().sum::<f64>();
        let v = random_state(qca.space().dim(), seed);
        let w = qca.step().apply(&v);
        prop_assert!((number(&v) - number(&w)).abs() < 1e-10);
        let norm: f64 = w.iter().map(|z| z.norm_sqr()).sum();
        prop_assert!((norm - 1.0).abs() < 1e-10);
    }
}

#[test]
fn eigenphase_branch_edge() {
    let minus = SpinMatrix::identity(2).scale_re(-1.0);
    assert_eq!(eigenphases(&minus).unwrap().as_slice(), &[PI, PI]);
    let half = exp_neg_i(&pauli(Axis::Z), FRAC_PI_2);
    let e = eigenphases(&half).unwrap();
    assert!(
        (e.as_slice()[0] + FRAC_PI_2).abs() < 1e-15 && (e.as_slice()[1] - FRAC_PI_2).abs() < 1e-15
    );
}
