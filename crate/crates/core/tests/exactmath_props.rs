//! Randomized invariants of the exact scalar and polynomial arithmetic.

use pbwforge_core::expr::parse_poly;
use pbwforge_core::poly::PolyRing;
use pbwforge_core::scalar::{cyclotomic_polynomial, rat, Field, FieldElement};
use proptest::prelude::*;
use std::collections::BTreeMap;

fn small_element(field: &Field, coords: &[i8]) -> FieldElement {
    let mut acc = field.zero();
    for (i, &c) in coords.iter().enumerate().take(field.degree()) {
        acc = acc.add(&field.zeta_pow(i as u32).mul_rat(&rat(c as i64, 1)));
    }
    acc
}

fn conductors() -> impl Strategy<Value = u32> {
    prop::sample::select(vec![1u32, 3, 4, 8])
}

proptest! {
    #[test]
    fn field_axioms(n in conductors(), a in prop::array::uniform4(-4i8..5), b in prop::array::uniform4(-4i8..5), c in prop::array::uniform4(-4i8..5)) {
        let field = Field::cyclotomic(n);
        let (a, b, c) = (small_element(&field, &a), small_element(&field, &b), small_element(&field, &c));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        if !a.is_zero() {
            prop_assert!(a.mul(&a.inv().unwrap()).is_one());
        }
    }

    #[test]
    fn canonical_representations(n in conductors(), a in prop::array::uniform4(-4i8..5), b in prop::array::uniform4(-4i8..5)) {
        // two arithmetic paths to the same value give identical coefficients
        let field = Field::cyclotomic(n);
        let (a, b) = (small_element(&field, &a), small_element(&field, &b));
        let p1 = a.add(&b).mul(&a.sub(&b));
        let p2 = a.mul(&a).sub(&b.mul(&b));
        prop_assert_eq!(p1.coeffs(), p2.coeffs());
    }

    #[test]
    fn substitution_commutes_with_arithmetic(
        ax in -3i8..4, ay in -3i8..4, bx in -3i8..4, by in -3i8..4, v in -3i8..4
    ) {
        let ring = PolyRing::new(&Field::cyclotomic(3), &["s", "t"]);
        let s = ring.param("s").unwrap();
        let t = ring.param("t").unwrap();
        let p = s.mul(&ring.from_int(ax as i64)).add(&t.mul(&ring.from_int(ay as i64)));
        let q = s.mul(&s).mul(&ring.from_int(bx as i64)).add(&ring.from_int(by as i64));
        let mut bind = BTreeMap::new();
        // t -> v*s + 1 keeps the substitution inside the same ring
        bind.insert(
            "t".to_string(),
            s.mul(&ring.from_int(v as i64)).add(&ring.one()),
        );
        let lhs_mul = p.mul(&q).substitute(&bind).unwrap();
        let rhs_mul = p.substitute(&bind).unwrap().mul(&q.substitute(&bind).unwrap());
        prop_assert_eq!(lhs_mul, rhs_mul);
        let lhs_add = p.add(&q).substitute(&bind).unwrap();
        let rhs_add = p.substitute(&bind).unwrap().add(&q.substitute(&bind).unwrap());
        prop_assert_eq!(lhs_add, rhs_add);
    }
}

#[test]
fn minimal_polynomial_vanishes_at_zeta() {
    for n in [1u32, 3, 4, 8, 5, 12] {
        let field = Field::cyclotomic(n);
        let z = field.zeta();
        let mp = cyclotomic_polynomial(n);
        let mut acc = field.zero();
        for (i, c) in mp.iter().enumerate() {
            let term = field.zeta_pow(i as u32).mul_rat(&num::BigRational::from(c.clone()));
            acc = acc.add(&term);
        }
        assert!(acc.is_zero(), "Phi_{}(zeta) != 0", n);
        assert!(field.zeta_pow(n).is_one());
        let _ = z;
    }
}

#[test]
fn paper_substitution_example() {
    // a14 - gamma(1+2z^2)/(z+1) vanishes at a14 = gamma(1+2z^2)/(z+1)
    let ring = PolyRing::new(&Field::cyclotomic(3), &["a14", "gamma"]);
    let p = parse_poly(&ring, "a14 - gamma*(1+2*z^2)/(z+1)").unwrap();
    let mut bind = BTreeMap::new();
    bind.insert(
        "a14".to_string(),
        parse_poly(&ring, "gamma*(1+2*z^2)/(z+1)").unwrap(),
    );
    assert!(p.substitute(&bind).unwrap().is_zero());
}

#[test]
fn type_h_substitution_example() {
    // gamma*beta*z*(z^2+2z+1) at gamma = beta = 1
    let ring = PolyRing::new(&Field::cyclotomic(8), &["beta", "gamma"]);
    let p = parse_poly(&ring, "gamma*beta*z*(z^2+2*z+1)").unwrap();
    let mut bind = BTreeMap::new();
    bind.insert("gamma".to_string(), ring.one());
    bind.insert("beta".to_string(), ring.one());
    let expected = parse_poly(&ring, "z*(z^2+2*z+1)").unwrap();
    assert_eq!(p.substitute(&bind).unwrap(), expected);
}
