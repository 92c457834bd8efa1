use super::*;
use crate::gallery::{
    direct_sum_left_test, direct_sum_seq, direct_sum_witness, rademacher_base,
    rademacher_functionals, rademacher_modulated, std_units, typewriter,
};
use crate::lattice::StepFunction;

fn seq_of<F>(tag: SpaceTag, len: usize, f: F) -> VectorSequence
where
    F: Fn(usize) -> Vec<(usize, f64)> + Send + Sync + 'static,
{
    let t = tag.clone();
    VectorSequence::from_fn("test", tag, len, move |n| {
        LatticeVector::new(t.clone(), f(n)).unwrap().into()
    })
}

fn ones(tag: SpaceTag, horizon: usize) -> Element {
    LatticeVector::new(tag, (1..=horizon).map(|i| (i, 1.0)))
        .unwrap()
        .into()
}

#[test]
fn norm_tail_of_geometric_multiples() {
    let seq = seq_of(SpaceTag::Lp(2.0), 64, |n| {
        vec![(1, (0.5f64).powi(n as i32))]
    });
    let ts = ToleranceSpec::default_for(64);
    let zero = Element::zero(seq.tag());
    let r = norm_tail(&seq, &zero, &ts).unwrap();
    assert_eq!(r.verdict, Verdict::Null);
    assert_eq!(r.window, 16);
    for (i, v) in r.values.iter().enumerate() {
        assert_eq!(*v, (0.5f64).powi(i as i32 + 1));
    }
    assert!(r.witness.is_none());
}

#[test]
fn norm_tail_against_a_limit() {
    let seq = seq_of(SpaceTag::C0, 40, |n| vec![(1, 1.0 + 1.0 / n as f64)]);
    let limit: Element = LatticeVector::unit(SpaceTag::C0, 1).into();
    let r = norm_tail(&seq, &limit, &ToleranceSpec::new(0.05, 25).unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::NotNull);
    assert_eq!(r.witness.as_ref().unwrap().index, 16);
    let r = norm_tail(&seq, &limit, &ToleranceSpec::new(0.05, 20).unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::Null);
}

#[test]
fn window_longer_than_sequence_is_rejected() {
    let seq = seq_of(SpaceTag::C0, 4, |n| vec![(n, 1.0)]);
    let zero = Element::zero(seq.tag());
    let err = norm_tail(&seq, &zero, &ToleranceSpec::new(1e-6, 5).unwrap()).unwrap_err();
    assert_eq!(err.code(), "INVALID_TOLERANCE");
}

#[test]
fn units_in_linf_are_not_un_null() {
    let seq = std_units(&SpaceTag::LInftySeq, 128).unwrap();
    let ts = ToleranceSpec::default_for(128);
    let zero = Element::zero(seq.tag());
    let r = un_tail(&seq, &zero, &[ones(SpaceTag::LInftySeq, 128)], &ts).unwrap();
    assert_eq!(r.verdict, Verdict::NotNull);
    assert!(r.values.iter().all(|v| *v == 1.0));
    let w = r.witness.unwrap();
    assert_eq!(
        (w.index, w.test, w.label.as_deref()),
        (97, Some(0), Some("u1"))
    );
    // the same sequence through the quasi-interior point
    let r = un_tail_qip(&seq, &zero, &ts, 4096, None).unwrap();
    assert_eq!(r.verdict, Verdict::NotNull);
    assert_eq!(r.quantity, "un_qip");
    assert_eq!(r.coord_horizon, Some(4096));
}

#[test]
fn units_in_c0_are_un_null() {
    let seq = std_units(&SpaceTag::C0, 128).unwrap();
    let ts = ToleranceSpec::default_for(128);
    let zero = Element::zero(seq.tag());
    let r = un_tail_qip(&seq, &zero, &ts, 4096, None).unwrap();
    assert_eq!(r.verdict, Verdict::Null);
    for (i, v) in r.values.iter().enumerate() {
        assert_eq!(*v, (0.5f64).powi(i as i32 + 1));
    }
    assert_eq!(
        r.family.as_ref().unwrap()[0],
        "quasi_interior_point(horizon=4096)"
    );
}

#[test]
fn direct_sum_verdict_depends_on_the_test_vector() {
    let seq = direct_sum_seq(128);
    let ts = ToleranceSpec::default_for(128);
    let zero = Element::zero(seq.tag());
    let left = un_tail(&seq, &zero, &[direct_sum_left_test(128)], &ts).unwrap();
    assert_eq!(left.verdict, Verdict::Null);
    let right = un_tail(&seq, &zero, &[direct_sum_witness(128)], &ts).unwrap();
    assert_eq!(right.verdict, Verdict::NotNull);
    assert!(right.values.iter().all(|v| *v == 1.0));
    let both = un_tail(
        &seq,
        &zero,
        &[direct_sum_left_test(128), direct_sum_witness(128)],
        &ts,
    )
    .unwrap();
    assert_eq!(both.witness.unwrap().label.as_deref(), Some("u2"));
}

#[test]
fn invalid_test_vectors_are_rejected() {
    let seq = std_units(&SpaceTag::C0, 8).unwrap();
    let ts = ToleranceSpec::default_for(8);
    let zero = Element::zero(seq.tag());
    let neg: Element = LatticeVector::new(SpaceTag::C0, [(1, -1.0)])
        .unwrap()
        .into();
    let err = un_tail(&seq, &zero, &[ones(SpaceTag::C0, 4), neg], &ts).unwrap_err();
    assert!(matches!(err, LatticeError::NegativeTestVector { index: 1 }));
    let err = un_tail(&seq, &zero, &[zero.clone()], &ts).unwrap_err();
    assert_eq!(err.code(), "NEGATIVE_TEST_VECTOR");
    let wrong = ones(SpaceTag::LInftySeq, 4);
    assert_eq!(
        un_tail(&seq, &zero, &[wrong], &ts).unwrap_err().code(),
        "TAG_MISMATCH"
    );
}

#[test]
fn qip_multiplier_examples() {
    // u = (1, 1/2, 0, ...) against e = (2^-n): m·e dominates u from m = 2
    let tag = SpaceTag::Lp(2.0);
    let u: Element = LatticeVector::new(tag.clone(), [(1, 1.0), (2, 0.5)])
        .unwrap()
        .into();
    let e = quasi_interior_point(&tag, 64);
    let sel = qip_multiplier(&u, &e, 1e-9, 1 << 20).unwrap();
    assert_eq!(sel.m, 2);
    assert_eq!(sel.remainder, 0.0);
    // a slowly decaying u needs a large multiplier
    let u: Element = LatticeVector::new(tag.clone(), (1..=10).map(|i| (i, 1.0 / i as f64)))
        .unwrap()
        .into();
    let sel = qip_multiplier(&u, &e, 1e-9, 1 << 20).unwrap();
    assert_eq!(sel.m, 103);
    assert!(sel.remainder < 1e-9);
    let err = qip_multiplier(&u, &e, 1e-9, 64).unwrap_err();
    assert!(matches!(err, LatticeError::MNotFound { m_max: 64, .. }));
    let report = un_tail_qip(
        &std_units(&tag, 16).unwrap(),
        &Element::zero(&tag),
        &ToleranceSpec::default_for(16),
        64,
        Some(&QipRequest {
            u,
            eps: 1e-9,
            m_max: 1 << 20,
        }),
    )
    .unwrap();
    assert_eq!(report.qip.unwrap().m, 103);
}

#[test]
fn typewriter_un_values_are_cell_measures() {
    let seq = typewriter(6, 1.0).unwrap();
    let zero = Element::zero(seq.tag());
    let r = un_tail_qip(
        &seq,
        &zero,
        &ToleranceSpec::new(1e-1, 32).unwrap(),
        4096,
        None,
    )
    .unwrap();
    for (i, v) in r.values.iter().enumerate() {
        let (k, _) = crate::gallery::typewriter_cell(i + 1);
        assert_eq!(*v, (0.5f64).powi(k as i32));
    }
    assert_eq!(r.verdict, Verdict::Null);
}

#[test]
fn in_measure_requires_step_functions() {
    let seq = std_units(&SpaceTag::C0, 8).unwrap();
    let ts = ToleranceSpec::default_for(8);
    assert_eq!(
        in_measure_tail(&seq, 0.5, &ts).unwrap_err().code(),
        "NON_STEP_SEQUENCE"
    );
    let tw = typewriter(4, 1.0).unwrap();
    assert_eq!(
        in_measure_tail(&tw, 0.0, &ts).unwrap_err().code(),
        "INVALID_TOLERANCE"
    );
    let r = in_measure_tail(&tw, 0.5, &ToleranceSpec::new(0.1, 8).unwrap()).unwrap();
    assert_eq!(r.values[0], 1.0);
    assert_eq!(r.values[30], 1.0 / 16.0);
    assert_eq!(r.verdict, Verdict::Null);
}

#[test]
fn typewriter_is_not_pointwise_null() {
    let seq = typewriter(8, 1.0).unwrap();
    let ts = ToleranceSpec::new(1e-2, 256).unwrap();
    let r = pointwise_tail(&seq, &ts).unwrap();
    assert_eq!(r.verdict, Verdict::NotNull);
    assert_eq!(r.cell_level, Some(8));
    let cells = r.cells.unwrap();
    assert_eq!(cells.len(), 256);
    assert!(cells.iter().all(|c| c.limsup == 1.0 && c.liminf == 0.0));
    assert_eq!(r.values[255], 1.0);
    assert_eq!(r.values[510], 1.0 / 256.0);
}

#[test]
fn pointwise_respects_max_level() {
    let seq = typewriter(8, 1.0).unwrap();
    let ts = ToleranceSpec::new(1e-2, 64).unwrap();
    let err = pointwise_tail_with_max_level(&seq, &ts, 6).unwrap_err();
    assert!(matches!(
        err,
        LatticeError::RefinementOverflow { level: 8, max: 6 }
    ));
}

#[test]
fn units_in_c0_are_pointwise_null() {
    let seq = std_units(&SpaceTag::C0, 64).unwrap();
    let r = pointwise_tail(&seq, &ToleranceSpec::default_for(64)).unwrap();
    assert_eq!(r.verdict, Verdict::Null);
    let cells = r.cells.unwrap();
    assert_eq!(cells.len(), 48);
    assert!(cells.iter().all(|c| c.limsup == 0.0));
    // head values see the unit vector itself
    assert_eq!(r.values[0], 1.0);
    assert_eq!(r.values[48], 0.0);
}

#[test]
fn decaying_constant_is_pointwise_null() {
    let seq = seq_of(SpaceTag::LInftySeq, 400, |n| {
        (1..=16).map(|i| (i, 1.0 / n as f64)).collect()
    });
    let r = pointwise_tail(&seq, &ToleranceSpec::new(1e-2, 100).unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::Null);
    let r = pointwise_tail(&seq, &ToleranceSpec::new(1e-2, 350).unwrap()).unwrap();
    assert_eq!(r.verdict, Verdict::NotNull);
    assert_eq!(r.witness.unwrap().index, 51);
}

#[test]
fn direct_sum_coordinates_are_labelled() {
    let r = pointwise_tail(&direct_sum_seq(8), &ToleranceSpec::new(1e-6, 2).unwrap()).unwrap();
    let cells = r.cells.unwrap();
    assert_eq!(cells[0].cell, "left:1");
    assert!(cells.iter().any(|c| c.cell == "right:6"));
}

#[test]
fn rademacher_pairings_vanish_exactly() {
    let seq = rademacher_modulated(&rademacher_base(), 12).unwrap();
    let ts = ToleranceSpec::default_for(12);
    let r = weak_tail(&seq, &rademacher_functionals(), false, &ts).unwrap();
    assert_eq!(r.verdict, Verdict::Null);
    // level of the functionals is 3, of the base 2
    for v in &r.values[3..] {
        assert_eq!(*v, 0.0);
    }
    let one: Element = StepFunction::constant(rademacher_base().tag().clone(), 1.0)
        .unwrap()
        .into();
    let m = weak_tail(&seq, &[one], true, &ts).unwrap();
    assert_eq!(m.quantity, "modulus_weak");
    assert_eq!(m.verdict, Verdict::NotNull);
    assert!(m.values.iter().all(|v| (*v - 1.125).abs() < 1e-15));
}

#[test]
fn weak_tail_on_units_in_l1() {
    let seq = std_units(&SpaceTag::Lp(1.0), 64).unwrap();
    let ts = ToleranceSpec::default_for(64);
    let r = weak_tail(&seq, &[ones(SpaceTag::Lp(1.0), 64)], false, &ts).unwrap();
    assert_eq!(r.verdict, Verdict::NotNull);
    let w = r.witness.unwrap();
    assert_eq!(w.label.as_deref(), Some("f1"));
}

#[test]
fn order_witness_for_units_in_linf() {
    let seq = std_units(&SpaceTag::LInftySeq, 32).unwrap();
    let bound = ones(SpaceTag::LInftySeq, 32);
    let w = order_witness_atomic(&seq, &bound, 8).unwrap();
    assert_eq!(w.atoms.len(), 32);
    for step in &w.schedule {
        // |e_n| <= v_k once e_n sits beyond the first k atoms
        assert_eq!(step.n_k, if step.k == 1 { 1 } else { step.k + 1 });
        assert_eq!(step.v_norm, 1.0);
    }
    // v_k decreases to zero coordinatewise
    let v = order_schedule_vector(bound.as_seq().unwrap(), 4);
    assert_eq!(v.get(3), 0.25);
    assert_eq!(v.get(5), 1.0);
    let err = order_witness_atomic(&seq, &bound, 32).unwrap_err();
    assert!(matches!(err, LatticeError::NoIndexFound { k: 32 }));
}

#[test]
fn order_witness_needs_a_dominating_bound() {
    let seq = seq_of(SpaceTag::C0, 8, |n| vec![(1, 1.0 / n as f64)]);
    let small: Element = LatticeVector::new(SpaceTag::C0, [(1, 0.5)]).unwrap().into();
    assert!(matches!(
        order_witness_atomic(&seq, &small, 2).unwrap_err(),
        LatticeError::NotOrderBounded { index: 1 }
    ));
    let big: Element = LatticeVector::unit(SpaceTag::C0, 1).into();
    let w = order_witness_atomic(&seq, &big, 4).unwrap();
    let n: Vec<usize> = w.schedule.iter().map(|s| s.n_k).collect();
    assert_eq!(n, vec![1, 2, 3, 4]);
    let tw = typewriter(3, 1.0).unwrap();
    let one: Element = StepFunction::constant(tw.tag().clone(), 1.0)
        .unwrap()
        .into();
    assert_eq!(
        order_witness_atomic(&tw, &one, 1).unwrap_err().code(),
        "INVALID_ELEMENT"
    );
}

#[test]
fn almost_order_bounded_examples() {
    let tag = SpaceTag::Lp(1.0);
    let u: Element = LatticeVector::new(tag.clone(), [(1, 1.0), (2, 1.0)])
        .unwrap()
        .into();
    let xs: Vec<Element> = (1..=5)
        .map(|n| {
            LatticeVector::new(tag.clone(), [(1, 1.0), (n + 2, 0.01 / n as f64)])
                .unwrap()
                .into()
        })
        .collect();
    let r = almost_order_bounded_check(&xs, &u, 0.02).unwrap();
    assert!(r.passed);
    assert_eq!(r.worst_index, Some(1));
    assert!((r.worst_value - 0.01).abs() < 1e-18);
    let r = almost_order_bounded_check(&xs, &u, 0.005).unwrap();
    assert!(!r.passed);
    let units: Vec<Element> = (1..=5)
        .map(|n| LatticeVector::unit(tag.clone(), n).into())
        .collect();
    let r = almost_order_bounded_check(&units, &u, 0.5).unwrap();
    assert!(!r.passed);
    assert_eq!(r.worst_index, Some(3));
    assert!(almost_order_bounded_check(&units, &u.scale(-1.0), 0.5).is_err());
    assert!(almost_order_bounded_check(&units, &u, 0.0).is_err());
}
