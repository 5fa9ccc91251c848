use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use proptest::prelude::*;

use oscillating_eigenket::bell::{bell_original_check, chsh_value, ChshConfig, VIOLATION_TOLERANCE};
use oscillating_eigenket::cat::{survival_probability, CatConfig};
use oscillating_eigenket::eprb::{
    correlation, joint_distribution, p_continuous, p_discrete, p_spin_s, p_standard, OscillationParams, TickTime,
};
use oscillating_eigenket::linalg::{hermitian_eigendecomposition, ComplexMatrix};
use oscillating_eigenket::position::{l2_norm, momentum_operator, translate_exact, PositionGrid, WaveVector};
use oscillating_eigenket::spin::{
    rotation_operator, rotation_phase, spin_component, spin_matrices, Direction, SpinEigenvalue, SpinQuantumNumber,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn direction() -> impl Strategy<Value = Direction> {
    (0.0..PI, 0.0..TAU).prop_map(|(t, p)| Direction::from_spherical(t, p))
}

fn spin() -> impl Strategy<Value = SpinQuantumNumber> {
    (0u32..=10).prop_map(SpinQuantumNumber::from_twice)
}

#[test]
fn commutators_and_casimir_for_all_tested_spins() {
    for ts in 0..=10 {
        let s = SpinQuantumNumber::from_twice(ts);
        let m = spin_matrices(s);
        let i = c(0.0, 1.0);
        let comm = |a: &ComplexMatrix, b: &ComplexMatrix| &(a * b) - &(b * a);
        assert!(comm(&m.x, &m.y).max_abs_diff(&m.z.scale(i)) < 1e-10, "[Sx,Sy], 2s={ts}");
        assert!(comm(&m.y, &m.z).max_abs_diff(&m.x.scale(i)) < 1e-10, "[Sy,Sz], 2s={ts}");
        assert!(comm(&m.z, &m.x).max_abs_diff(&m.y.scale(i)) < 1e-10, "[Sz,Sx], 2s={ts}");
        let casimir = &(&(&m.x * &m.x) + &(&m.y * &m.y)) + &(&m.z * &m.z);
        let sv = s.value();
        let expected = ComplexMatrix::identity(s.dim()).scale(c(sv * (sv + 1.0), 0.0));
        assert!(casimir.max_abs_diff(&expected) < 1e-10, "Casimir, 2s={ts}");
    }
}

#[test]
fn full_turn_sign_depends_on_spin_parity() {
    let axes = [
        Direction::X,
        Direction::Y,
        Direction::Z,
        Direction::from_spherical(1.0, 2.0),
    ];
    for ts in 0..=10 {
        let s = SpinQuantumNumber::from_twice(ts);
        let sign = if s.is_integer() { 1.0 } else { -1.0 };
        let expected = ComplexMatrix::identity(s.dim()).scale(c(sign, 0.0));
        for a in &axes {
            let d = rotation_operator(s, a, TAU).unwrap();
            assert!(d.max_abs_diff(&expected) < 1e-10, "2s={ts}");
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rotations_are_unitary(s in spin(), a in direction(), phi in -4.0 * PI..4.0 * PI) {
        let d = rotation_operator(s, &a, phi).unwrap();
        prop_assert!(d.is_unitary(1e-10));
    }

    #[test]
    fn same_axis_rotations_compose(s in spin(), a in direction(), p1 in -TAU..TAU, p2 in -TAU..TAU) {
        let d1 = rotation_operator(s, &a, p1).unwrap();
        let d2 = rotation_operator(s, &a, p2).unwrap();
        let d12 = rotation_operator(s, &a, p1 + p2).unwrap();
        prop_assert!((&d1 * &d2).max_abs_diff(&d12) < 1e-10);
    }

    #[test]
    fn component_spectrum_is_m_values(s in spin(), a in direction()) {
        let eig = hermitian_eigendecomposition(&spin_component(s, &a)).unwrap();
        let mut expected: Vec<f64> = s.eigenvalues().map(|m| m.value()).collect();
        expected.reverse();
        for (got, want) in eig.eigenvalues.iter().zip(&expected) {
            prop_assert!((got - want).abs() < 1e-10);
        }
    }

    #[test]
    fn matrix_rotation_reduces_to_scalar_phase(a in direction(), phi in -4.0 * PI..4.0 * PI) {
        let half = SpinQuantumNumber::HALF;
        let eig = hermitian_eigendecomposition(&spin_component(half, &a)).unwrap();
        let d = rotation_operator(half, &a, phi).unwrap();
        // ascending: column 0 is m = -1/2, column 1 is m = +1/2
        for (col, m) in [(0, SpinEigenvalue::DOWN), (1, SpinEigenvalue::UP)] {
            let v = eig.eigenvectors.column(col);
            let dv = d.mul_vec(&v);
            let phase = rotation_phase(m, phi);
            let resid: Vec<Complex64> = dv.iter().zip(&v).map(|(x, y)| x - y * phase).collect();
            prop_assert!(l2_norm(&resid) < 1e-10);
        }
    }

    #[test]
    fn rotation_phase_has_unit_modulus(twice_m in -10i32..=10, phi in -1e3..1e3) {
        let s = SpinQuantumNumber::from_twice(10);
        if let Ok(m) = SpinEigenvalue::new(s, twice_m) {
            prop_assert!((rotation_phase(m, phi).norm() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn probabilities_stay_in_unit_interval(theta in -10.0..10.0f64, n in 0u64..100_000, t in 0.0..1e4f64, ts in 0u32..=10) {
        let canon = OscillationParams::canonical();
        for p in [
            p_standard(theta),
            p_discrete(theta, TickTime(n)),
            p_continuous(theta, t, &canon).unwrap(),
            p_spin_s(SpinQuantumNumber::from_twice(ts), theta, TickTime(n)),
        ] {
            prop_assert!((0.0..=1.0).contains(&p));
        }
        prop_assert!(correlation(theta, TickTime(n)).abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn discrete_law_has_period_one(theta in -10.0..10.0f64, n in 0u64..1_000_000) {
        let a = p_discrete(theta, TickTime(n));
        let b = p_discrete(theta, TickTime(n + 1));
        prop_assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn antipodal_axis_is_the_complement(theta in -10.0..10.0f64, n in 0u64..1000) {
        let sum = p_discrete(theta, TickTime(n)) + p_discrete(theta + PI, TickTime(n));
        prop_assert!((sum - 1.0).abs() < 1e-12);
    }

    #[test]
    fn joint_distribution_invariants(theta in -10.0..10.0f64, n in 0u64..1000) {
        let j = joint_distribution(theta, TickTime(n));
        for p in [j.p_pp, j.p_pm, j.p_mp, j.p_mm] {
            prop_assert!((0.0..=1.0).contains(&p));
        }
        prop_assert!((j.total() - 1.0).abs() < 1e-12);
        prop_assert!((j.p_pp + j.p_pm - 0.5).abs() < 1e-12);
        prop_assert!((j.p_mp + j.p_mm - 0.5).abs() < 1e-12);
        prop_assert!((j.correlation() + theta.cos()).abs() < 1e-12);
    }

    #[test]
    fn correlation_is_minus_cosine(theta in -10.0..10.0f64, n in 0u64..10_000) {
        prop_assert!((correlation(theta, TickTime(n)) + theta.cos()).abs() < 1e-12);
    }

    #[test]
    fn three_axis_flag_matches_closed_form(theta in 0.0..=PI, n in 0u64..100) {
        let r = bell_original_check(theta, TickTime(n)).unwrap();
        // sin²(θ/2) − 2 sin²(θ/4) = 2 sin²(θ/4) cos(θ/2)
        let margin = 2.0 * (theta / 4.0).sin().powi(2) * (theta / 2.0).cos();
        prop_assume!((margin - VIOLATION_TOLERANCE).abs() > 1e-14);
        prop_assert_eq!(r.violated, margin > VIOLATION_TOLERANCE);
        prop_assert!((r.margin - margin).abs() < 1e-14);
    }

    #[test]
    fn chsh_is_rotation_invariant(
        angles in prop::array::uniform4(0.0..TAU),
        axis in direction(),
        turn in -PI..PI,
        n in 0u64..10,
    ) {
        let cfg = ChshConfig::coplanar(angles[0], angles[1], angles[2], angles[3]);
        let rot = |d: &Direction| d.rotated_about(&axis, turn);
        let moved = ChshConfig::new(rot(&cfg.a), rot(&cfg.a_prime), rot(&cfg.b), rot(&cfg.b_prime));
        let s = chsh_value(&cfg, TickTime(n));
        prop_assert!((s - chsh_value(&moved, TickTime(n))).abs() < 1e-10);
        prop_assert!((0.0..=4.0).contains(&s));
        prop_assert!((s - chsh_value(&cfg, TickTime(0))).abs() < 1e-12);
    }

    #[test]
    fn survival_is_monotone_and_decays(omega in 0.01..10.0f64, phi in -PI..PI, ticks in 0u64..200) {
        let cfg = CatConfig::new(omega, phi, ticks).unwrap();
        let now = survival_probability(&cfg);
        let next = survival_probability(&cfg.with_ticks(ticks + 1));
        prop_assert!(next <= now);
        let eps = (1..=ticks).map(|n| cfg.fire_probability(n)).fold(1.0, f64::min);
        if ticks > 0 {
            prop_assert!(now <= (1.0 - eps).powi(ticks as i32) * (1.0 + 1e-12));
        }
    }

    #[test]
    fn exact_translation_is_unitary_and_composes(
        re in prop::collection::vec(-1.0..1.0f64, 64),
        im in prop::collection::vec(-1.0..1.0f64, 64),
        d1 in -100.0..100.0f64,
        d2 in -100.0..100.0f64,
    ) {
        let grid = PositionGrid::new(64, 0.5).unwrap();
        let amps: Vec<Complex64> = re.iter().zip(&im).map(|(&a, &b)| c(a, b)).collect();
        prop_assume!(l2_norm(&amps) > 1e-3);
        let v = WaveVector::new(amps).unwrap();
        let once = translate_exact(&v, d1, &grid);
        prop_assert!((once.norm() - v.norm()).abs() < 1e-10);
        let twice = translate_exact(&once, d2, &grid);
        let direct = translate_exact(&v, d1 + d2, &grid);
        let diff: Vec<Complex64> = twice.amplitudes().iter().zip(direct.amplitudes()).map(|(a, b)| a - b).collect();
        prop_assert!(l2_norm(&diff) < 1e-10);
    }
}

#[test]
fn tick_equivalence_at_machine_precision() {
    let mut worst: f64 = 0.0;
    for i in 0..720 {
        let theta = TAU * i as f64 / 720.0;
        let reference = p_standard(theta);
        for n in 0..=10_000 {
            worst = worst.max((p_discrete(theta, TickTime(n)) - reference).abs());
            let half = p_spin_s(SpinQuantumNumber::HALF, theta, TickTime(n));
            assert!((half - p_discrete(theta, TickTime(n))).abs() < 1e-12);
        }
    }
    assert!(worst < 1e-12, "worst deviation {worst:e}");
}

#[test]
fn shifts_by_whole_sites_match_circular_shift() {
    for l in [8usize, 64, 256] {
        let grid = PositionGrid::new(l, 0.3).unwrap();
        let amps: Vec<Complex64> = (0..l)
            .map(|j| c((j as f64 * 0.7).sin(), (j as f64 * 1.3).cos()))
            .collect();
        let v = WaveVector::new(amps).unwrap();
        for j in [-3i64, 1, 2, 5, l as i64 - 1] {
            let moved = translate_exact(&v, j as f64 * grid.spacing(), &grid);
            for site in 0..l {
                let from = (site as i64 - j).rem_euclid(l as i64) as usize;
                assert!(
                    (moved.amplitudes()[site] - v.amplitudes()[from]).norm() < 1e-12,
                    "L={l} j={j}"
                );
            }
        }
    }
}

#[test]
fn momentum_operator_is_hermitian_on_test_grids() {
    for l in [8usize, 64, 256] {
        let p = momentum_operator(&PositionGrid::new(l, 1.0).unwrap());
        assert!(p.matrix().is_hermitian(1e-10));
    }
}
