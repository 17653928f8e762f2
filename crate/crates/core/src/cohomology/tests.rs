use std::collections::BTreeMap;

use super::*;
use crate::forms::named::parse_form_spec;
use crate::forms::IntegralForm;
use crate::linalg::{determinant, int_vec, is_unimodular, IntMatrix};

fn form(spec: &str) -> IntegralForm {
    parse_form_spec(spec).unwrap()
}

#[test]
fn surface_rings_validate() {
    for g in 1..=3 {
        let r = surface_ring(g).unwrap();
        assert!(validate_ring(&r).is_empty(), "genus {g}");
        assert_eq!(r.betti_numbers(), [1, 2 * g, 1, 0, 0, 0, 0]);
    }
    let t = surface_ring(1).unwrap();
    assert_eq!(t.product(1, &int_vec(&[1, 0]), 1, &int_vec(&[0, 1])), int_vec(&[1]));
    assert_eq!(t.product(1, &int_vec(&[1, 0]), 1, &int_vec(&[1, 0])), int_vec(&[0]));
    assert_eq!(surface_ring(0), Err(CohomologyError::GenusZero));
}

#[test]
fn anticommutativity_violation_is_named() {
    let mut r = surface_ring(2).unwrap();
    r.set_product(1, 1, 0, 2, &int_vec(&[5]));
    let v = validate_ring(&r);
    assert!(v.contains(&RingViolation::GradedCommutativity { k: 1, l: 1, i: 1, j: 3 }), "{v:?}");
}

/// Hand expansion for CP² × T²: basis e (H²(CP²)), a, b.
#[test]
fn cp2_torus_by_hand() {
    let d = kunneth_product(&form("<1>"), 1).unwrap();
    let r = &d.ring;
    assert_eq!(r.betti_numbers(), [1, 2, 2, 2, 2, 2, 1]);
    assert!(validate_ring(r).is_empty());
    let (a, b) = (int_vec(&[1, 0]), int_vec(&[0, 1]));
    let (e, f) = (int_vec(&[1, 0]), int_vec(&[0, 1]));
    // a ∪ b = [F], b ∪ a = -[F]
    assert_eq!(r.product(1, &a, 1, &b), f);
    assert_eq!(r.product(1, &b, 1, &a), int_vec(&[0, -1]));
    // e ∪ a, e ∪ b are the H³ basis
    assert_eq!(r.product(2, &e, 1, &a), int_vec(&[1, 0]));
    assert_eq!(r.product(2, &e, 1, &b), int_vec(&[0, 1]));
    assert_eq!(r.product(1, &b, 2, &e), int_vec(&[0, 1]));
    // e ∪ e = g_M, e ∪ f = e × [F]
    assert_eq!(r.product(2, &e, 2, &e), int_vec(&[1, 0]));
    assert_eq!(r.product(2, &e, 2, &f), int_vec(&[0, 1]));
    assert_eq!(r.product(2, &f, 2, &f), int_vec(&[0, 0]));
    // (e ∪ a) ∪ (e ∪ b) = g_M × [F]
    let ea = r.product(2, &e, 1, &a);
    let eb = r.product(2, &e, 1, &b);
    assert_eq!(r.evaluate(&r.product(3, &ea, 3, &eb)), 1.into());
    assert_eq!(r.evaluate(&r.product(3, &eb, 3, &ea)), (-1).into());
    let e3 = r.product(4, &r.product(2, &f, 2, &e), 2, &e);
    assert_eq!(r.evaluate(&e3), 1.into());
    assert_eq!(d.p1, int_vec(&[0, 3]));
    assert_eq!(d.w2, vec![1, 0]);
    assert_eq!(d.f, int_vec(&[0, 1]));
    assert_eq!(r.euler_characteristic(), 0);
}

#[test]
fn degenerate_and_k3_products() {
    let d = kunneth_product(&IntegralForm::empty(), 2).unwrap();
    assert_eq!(d.ring.betti_numbers(), [1, 4, 1, 0, 1, 4, 1]);
    assert_eq!(d.p1, int_vec(&[0]));
    assert!(validate_ring(&d.ring).is_empty());

    let k3 = kunneth_product(&form("-E8+-E8+H+H+H"), 1).unwrap();
    assert_eq!(k3.p1[22], (-48).into());
    assert_eq!(k3.ring.betti_numbers(), [1, 2, 23, 44, 23, 2, 1]);

    let hh = kunneth_product(&form("H+H"), 2).unwrap();
    assert_eq!(hh.ring.betti_numbers(), [1, 4, 5, 16, 5, 4, 1]);
    assert!(kunneth_product(&form("<2>"), 1).is_err());
    assert_eq!(kunneth_product(&form("<1>"), 0), Err(CohomologyError::GenusZero));
}

#[test]
fn products_satisfy_duality_and_round_trip() {
    for spec in ["<1>", "<-1>", "<1>+<-1>", "H", "<1>+<1>+<1>", "E8"] {
        for g in 1..=2 {
            let s = form(spec);
            let d = kunneth_product(&s, g).unwrap();
            assert!(validate_ring(&d.ring).is_empty(), "{spec} {g}");
            for k in 0..=6 {
                let p = poincare_pairing(&d.ring, k).unwrap();
                assert!(is_unimodular(&p).unwrap(), "{spec} {g} degree {k}");
            }
            let q = quotient_by_f(&d.ring, &d.f).unwrap();
            let i_n = triple_form(&d.ring, &d.f, &q).unwrap();
            assert_eq!(i_n.gram(), s.gram(), "{spec} {g}");
            let r = s.rank() as i64;
            assert_eq!(d.ring.euler_characteristic(), (2 - 2 * g as i64) * (r + 2));
        }
    }
}

#[test]
fn quotient_examples() {
    let d = kunneth_product(&form("H"), 2).unwrap();
    let q = quotient_by_f(&d.ring, &d.f).unwrap();
    assert_eq!(q.project(&int_vec(&[4, 5, 6])), int_vec(&[4, 5]));
    assert_eq!(triple_form(&d.ring, &d.f, &q).unwrap().gram(), &IntMatrix::from_rows(&[[0, 1], [1, 0]]));

    let two = kunneth_product(&form("<1>"), 1).unwrap();
    let q = quotient_by_f(&two.ring, &int_vec(&[2, 3])).unwrap();
    assert_eq!(q.rank(), 1);
    assert_eq!(q.project(&int_vec(&[2, 3])), int_vec(&[0]));
    assert_eq!(q.projection.checked_mul(&q.lift).unwrap(), IntMatrix::identity(1));
    assert!(num_traits::Signed::abs(&determinant(&q.basis_change).unwrap()) == 1.into());
    assert!(matches!(quotient_by_f(&two.ring, &int_vec(&[0, 0])), Err(CohomologyError::NotPrimitive { .. })));
}

#[test]
fn ill_defined_triple_form() {
    let mut d = kunneth_product(&form("<1>"), 1).unwrap();
    // f ∪ f = e × [F], so ⟨f ∪ f ∪ e⟩ = 1
    d.ring.set_product(2, 2, 1, 1, &int_vec(&[0, 1]));
    let q = quotient_by_f(&d.ring, &d.f).unwrap();
    assert_eq!(triple_form(&d.ring, &d.f, &q), Err(CohomologyError::IllDefined { index: 1, value: 1.into() }));
}

#[test]
fn degree_zero_pairing_is_eval() {
    let d = kunneth_product(&form("<1>"), 1).unwrap();
    assert_eq!(poincare_pairing(&d.ring, 0).unwrap(), IntMatrix::from_rows(&[[1]]));
    let p3 = poincare_pairing(&d.ring, 3).unwrap();
    assert_eq!(p3.rows(), 2);
    assert!(is_unimodular(&p3).unwrap());
    let tors = d.ring.clone().with_torsion(3, vec![2.into()]);
    assert_eq!(poincare_pairing(&tors, 3), Err(CohomologyError::TorsionPresent { degree: 3 }));
}

#[test]
fn triple_form_is_natural() {
    let s = form("<1>+<-1>");
    let d = kunneth_product(&s, 1).unwrap();
    // fixes f, mixes e_1 into e_2 and f into e_1
    let u = IntMatrix::from_rows(&[[1, 1, 0], [0, 1, 0], [1, 0, 1]]);
    let moved = d.change_h2_basis(&u).unwrap();
    assert!(validate_ring(&moved.ring).is_empty());
    assert_eq!(moved.f, int_vec(&[0, 0, 1]));
    let q = quotient_by_f(&moved.ring, &moved.f).unwrap();
    let i_n = triple_form(&moved.ring, &moved.f, &q).unwrap();
    let induced = IntMatrix::from_rows(&[[1, 1], [0, 1]]);
    assert_eq!(i_n.gram(), &induced.congruence(s.gram()));
}

#[test]
fn rebase_rejects_wrong_sizes() {
    let d = kunneth_product(&form("<1>"), 1).unwrap();
    assert!(d.change_h2_basis(&IntMatrix::identity(3)).is_err());
    assert!(d.change_h2_basis(&IntMatrix::diagonal(&[2, 1])).is_err());
    let r = GradedRing::new([1, 0, 0, 0, 0, 0, 1], Default::default(), BTreeMap::new(), int_vec(&[1]));
    assert!(r.is_ok());
    let bad = GradedRing::new([1, 0, 0, 0, 0, 0, 1], Default::default(), BTreeMap::new(), Vec::new());
    assert!(bad.is_err());
}
