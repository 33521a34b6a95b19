use std::f64::consts::PI;

use lmg_core::model::{ground_state, BASIS};
use lmg_core::oracle::hermitian_eigensystem;
use lmg_core::reduced::{
    one_qubit_from_branch, one_qubit_reduced, partial_trace, partial_trace_density, purity_parameter,
    two_qubit_from_branch, two_qubit_reduced, DensityOperator,
};
use lmg_core::{Branch, CMatrix, ModelParams, C64};
use proptest::prelude::*;

const TOL: f64 = 1e-12;

fn params(gamma: f64, h: f64) -> ModelParams {
    ModelParams::new(gamma, h).unwrap()
}

fn basis_vector(bits: u8) -> [C64; 8] {
    let mut v = [C64::new(0.0, 0.0); 8];
    v[BASIS.iter().position(|&b| b == bits).unwrap()] = C64::new(1.0, 0.0);
    v
}

fn diff(a: &DensityOperator, b: &CMatrix) -> f64 {
    (a.matrix() - b).max_abs()
}

/// Points away from the crossing line, with either sign of `h`.
fn point() -> impl Strategy<Value = ModelParams> {
    (0.0..2.0f64, -1.2..1.2f64)
        .prop_filter("off the crossing", |&(g, h)| ((2.0 / 3.0) * g.sqrt() - h.abs()).abs() > 1e-6)
        .prop_map(|(g, h)| params(g, h))
}

proptest! {
    #[test]
    fn closed_forms_match_partial_trace(p in point(), branch in prop_oneof![Just(Branch::LowField), Just(Branch::HighField)]) {
        let gs = ground_state(&p);
        let s = gs.state(branch);
        let one = one_qubit_from_branch(s);
        let two = two_qubit_from_branch(s);
        for q in 1..=3 {
            prop_assert!(diff(&partial_trace(&s.vector, &[q]).unwrap(), one.rho.matrix()) <= TOL);
        }
        for keep in [[1, 2], [1, 3], [2, 3]] {
            prop_assert!(diff(&partial_trace(&s.vector, &keep).unwrap(), two.varrho.matrix()) <= TOL);
        }
        for keep in [[1], [2]] {
            prop_assert!(diff(&partial_trace_density(&two.varrho, &keep).unwrap(), one.rho.matrix()) <= TOL);
        }
    }

    #[test]
    fn two_qubit_structure(p in point(), branch in prop_oneof![Just(Branch::LowField), Just(Branch::HighField)]) {
        let two = two_qubit_from_branch(ground_state(&p).state(branch));
        prop_assert!((two.p1 + two.p2 - 1.0).abs() <= TOL);
        let ov: C64 = two.psi1.iter().zip(&two.psi2).map(|(a, b)| a.conj() * b).sum();
        prop_assert!(ov.norm() <= TOL);
        let s = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let zero = C64::new(0.0, 0.0);
        prop_assert_eq!(two.psi2, [zero, s, s, zero]);
        let rebuilt = &CMatrix::outer(&two.psi1).scale(C64::new(two.p1, 0.0))
            + &CMatrix::outer(&two.psi2).scale(C64::new(two.p2, 0.0));
        prop_assert!(diff(&two.varrho, &rebuilt) <= TOL);
        let mut want = vec![0.0, 0.0, 0.5 * (1.0 - two.r), 0.5 * (1.0 + two.r)];
        want.sort_by(f64::total_cmp);
        let got = hermitian_eigensystem(two.varrho.matrix()).unwrap().values;
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).abs() <= TOL);
        }
    }

    #[test]
    fn density_invariants(p in point(), keep in prop_oneof![Just(vec![1]), Just(vec![2, 3]), Just(vec![1, 3])]) {
        let gs = ground_state(&p);
        let rho = partial_trace(&gs.state(Branch::LowField).vector, &keep).unwrap();
        prop_assert!(rho.matrix().hermiticity_defect() <= 1e-13);
        prop_assert!((rho.matrix().trace().re - 1.0).abs() <= TOL);
        let e = hermitian_eigensystem(rho.matrix()).unwrap();
        prop_assert!(e.values[0] >= -TOL);
    }
}

#[test]
fn partial_trace_examples() {
    let up = partial_trace(&basis_vector(0b111), &[1]).unwrap();
    assert!(diff(&up, &CMatrix::diagonal(&[0.0, 1.0])) <= TOL);
    let mut w_bar = [C64::new(0.0, 0.0); 8];
    for bits in [0b011, 0b101, 0b110] {
        w_bar[BASIS.iter().position(|&b| b == bits).unwrap()] = C64::new(1.0 / 3f64.sqrt(), 0.0);
    }
    let rho = partial_trace(&w_bar, &[1]).unwrap();
    assert!(diff(&rho, &CMatrix::diagonal(&[1.0 / 3.0, 2.0 / 3.0])) <= TOL);
    assert!((partial_trace(&w_bar, &[1, 2]).unwrap().matrix().trace().re - 1.0).abs() <= TOL);
    assert!(partial_trace(&w_bar, &[]).is_err());
    assert!(partial_trace(&w_bar, &[1, 2, 3]).is_err());
}

#[test]
fn one_qubit_examples() {
    assert!((purity_parameter(PI) + 1.0 / 3.0).abs() < 1e-15);
    assert!(purity_parameter(2.0 * PI / 3.0).abs() < 1e-15);
    let low = one_qubit_reduced(&params(1.0, 0.5)).unwrap();
    assert!(diff(&low.rho, &CMatrix::diagonal(&[1.0 / 3.0, 2.0 / 3.0])) <= TOL);
    let origin = one_qubit_reduced(&params(0.0, 0.0)).unwrap();
    assert!(diff(&origin.rho, &CMatrix::diagonal(&[0.5, 0.5])) <= TOL);
    let high = one_qubit_reduced(&params(1.0, 1.0)).unwrap();
    assert!(diff(&high.rho, &CMatrix::diagonal(&[0.0, 1.0])) <= TOL);
    assert!(one_qubit_reduced(&params(1.0, 2.0 / 3.0)).is_err());
}

#[test]
fn two_qubit_examples() {
    let w = two_qubit_reduced(&params(1.0, 0.5)).unwrap();
    assert!((w.p1 - 1.0 / 3.0).abs() <= TOL && (w.p2 - 2.0 / 3.0).abs() <= TOL);
    let eleven = [C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
    let ov: C64 = w.psi1.iter().zip(&eleven).map(|(a, b)| a.conj() * b).sum();
    assert!((ov.norm() - 1.0).abs() <= TOL);
    let ghz = two_qubit_reduced(&params(0.0, 0.0)).unwrap();
    assert!((ghz.p1 - 0.5).abs() <= TOL && (ghz.p2 - 0.5).abs() <= TOL);
}
