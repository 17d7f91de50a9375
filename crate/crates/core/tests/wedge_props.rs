//! Properties of the wedge-relation deformation constructions: the forward
//! directions of the two classification theorems, the refusal paths, the
//! classification-necessity probe, and the structural normal form of the
//! first deformation map.

use pbwforge_core::exterior::{
    alternating_tensor_map, ext_zero, increasing_subsets, op_underline,
};
use pbwforge_core::linmap::SparseRow;
use pbwforge_core::pbw::{check_j1, check_j2, pbw_verify, DeformationData};
use pbwforge_core::poly::PolyRing;
use pbwforge_core::props;
use pbwforge_core::scalar::Field;
use pbwforge_core::wedgedef::{
    build_alpha_even, build_alpha_odd, gen_jacobi_check, random_odd_data, EvenWedgeData,
    OddWedgeData, SmallRationals, WedgeError,
};
use pbwforge_core::word::GradedPiece;
use std::collections::BTreeMap;

#[test]
fn odd_theorem_forward_direction_samples() {
    // the full twenty-sample run is in the acceptance suite; here a few
    // seeds at reduced truncation keep the unit suite fast
    let field = Field::rational();
    for seed in [1u64, 2, 3] {
        let data = random_odd_data(5, 3, seed, &field);
        let (datum, warned) = build_alpha_odd(&data, &field, false).unwrap();
        assert!(!warned);
        let report = pbw_verify(&datum, 4, 2).unwrap();
        assert!(report.passed(), "seed {} must verify", seed);
    }
}

#[test]
fn odd_alpha1_is_identity_tensor_linear_form() {
    // alpha_1 = 1^(N-1) (x) l
    let field = Field::rational();
    let mut data = random_odd_data(5, 3, 7, &field);
    data.forms.clear();
    let (datum, _) = build_alpha_odd(&data, &field, false).unwrap();
    // evaluate alpha_1 on the first wedge basis vector x1 ^ x2 ^ x3 and
    // compare with the direct formula
    let alpha1 = datum.alpha(1);
    assert!(!alpha1.is_zero() || data.l.iter().all(|c| c.is_zero()));
    // alpha_2 and alpha_3 vanish without forms
    assert!(datum.alpha(2).is_zero());
    assert!(datum.alpha(3).is_zero());
}

#[test]
fn small_dimension_gate() {
    let field = Field::rational();
    let data = OddWedgeData {
        v: 4,
        n: 3,
        l: vec![field.one(), field.zero(), field.zero(), field.zero()],
        forms: BTreeMap::new(),
    };
    assert!(matches!(
        build_alpha_odd(&data, &field, false),
        Err(WedgeError::SmallDimension { .. })
    ));
    let (_, warned) = build_alpha_odd(&data, &field, true).unwrap();
    assert!(warned);
}

#[test]
fn even_structural_identity_alpha1_is_interleaved_bracket() {
    // with all forms zero, alpha_1 reduces exactly to underline{1^(2(n-1)) L}
    let field = Field::rational();
    let subs2 = increasing_subsets(6, 2);
    let mut l_ext = ext_zero(subs2.len(), 6, &field);
    let idx12 = subs2.iter().position(|s| s == &vec![0u8, 1]).unwrap();
    l_ext[idx12][2] = field.one();
    let data = EvenWedgeData {
        v: 6,
        n: 4,
        bracket: l_ext.clone(),
        forms: BTreeMap::new(),
        top_form: None,
    };
    let (datum, _) = build_alpha_even(&data, &field, false).unwrap();
    let ring = PolyRing::scalars(&field);
    let l_map = pbwforge_core::exterior::bracket_tensor_map(6, &l_ext, &ring).unwrap();
    let expected = op_underline(&l_map, 1, 1)
        .unwrap()
        .restrict(datum.r_space())
        .unwrap();
    assert_eq!(datum.alpha(1).rows(), expected.rows());
    assert!(datum.alpha(2).is_zero() && datum.alpha(3).is_zero() && datum.alpha(4).is_zero());
}

#[test]
fn gen_jacobi_refusal_for_invalid_pairs() {
    // a bracket failing ordinary Jacobi is refused outright; a valid
    // bracket with a form violating the generalized identity is refused too
    let field = Field::rational();
    let subs2 = increasing_subsets(6, 2);
    let mut bad = ext_zero(subs2.len(), 6, &field);
    let idx12 = subs2.iter().position(|s| s == &vec![0u8, 1]).unwrap();
    let idx13 = subs2.iter().position(|s| s == &vec![0u8, 2]).unwrap();
    bad[idx12][0] = field.one(); // L(x1 ^ x2) = x1
    bad[idx13][2] = field.one(); // L(x1 ^ x3) = x3
    let data = EvenWedgeData {
        v: 6,
        n: 4,
        bracket: bad,
        forms: BTreeMap::new(),
        top_form: None,
    };
    assert!(matches!(
        build_alpha_even(&data, &field, false),
        Err(WedgeError::JacobiFails)
    ));

    // Heisenberg with a form touching the bracket's support: find a failing
    // pair by scanning single-pair forms with the checker
    let mut heis = ext_zero(subs2.len(), 6, &field);
    heis[idx12][2] = field.one(); // L(x1 ^ x2) = x3
    let mut failing: Option<usize> = None;
    for k in 0..subs2.len() {
        let mut phi = vec![field.zero(); subs2.len()];
        phi[k] = field.one();
        if !gen_jacobi_check(6, &heis, 2, &phi, &field) {
            failing = Some(k);
            break;
        }
    }
    let k = failing.expect("some single-pair form violates the identity");
    let mut phi = vec![field.zero(); subs2.len()];
    phi[k] = field.one();
    let mut forms = BTreeMap::new();
    forms.insert(2usize, phi);
    let data = EvenWedgeData {
        v: 6,
        n: 4,
        bracket: heis,
        forms,
        top_form: None,
    };
    assert!(matches!(
        build_alpha_even(&data, &field, false),
        Err(WedgeError::GenJacobiFails { degree: 2 })
    ));
}

#[test]
fn classification_necessity_probe() {
    // a random alpha_2 not of the form 1 (x) Phi fails the membership law,
    // and the corresponding deformation fails the J-conditions
    let field = Field::rational();
    let ring = PolyRing::scalars(&field);
    let (v, n) = (5usize, 3usize);
    let subs_n = increasing_subsets(v, n);
    let mut gen = SmallRationals::new(5);
    // random alternating-extended map Lambda^3 V -> V, used as alpha_2
    let ext_rows: Vec<SparseRow> = (0..subs_n.len())
        .map(|_| {
            (0..v as u64)
                .filter_map(|j| {
                    let c = gen.small(&field);
                    if c.is_zero() {
                        None
                    } else {
                        Some((j, ring.constant(c)))
                    }
                })
                .collect()
        })
        .collect();
    let map = alternating_tensor_map(v, n, &ext_rows, GradedPiece::new(v, 1).unwrap(), &ring)
        .unwrap();
    let in_wedge = props::alpha_image_in_wedge(v, n, 2, &map, &field);
    assert!(!in_wedge, "a random map should not satisfy the membership law");
    // alpha = (0, alpha_2, 0) on the wedge relations fails J2 at i = 1
    let r = pbwforge_core::exterior::antisymmetrizer(v, n, &field).unwrap();
    let relations = r.basis_elements(&ring);
    let alpha2 = map.restrict(&r).unwrap().rows().to_vec();
    let datum = DeformationData::new(
        &field,
        &ring,
        v,
        n,
        relations,
        vec![vec![Vec::new(); subs_n.len()], alpha2],
    )
    .unwrap();
    let overlap = datum.overlap_space().unwrap();
    let j1 = check_j1(&datum, &overlap).unwrap();
    assert!(j1.pass, "alpha_1 = 0 makes J1 trivial");
    let j2 = check_j2(&datum, &overlap, &j1).unwrap();
    assert!(!j2.pass, "[1, alpha_2] must fail to vanish on the syzygies");
}

#[test]
fn phi0_instance_of_the_generalized_identity() {
    // the r = 0, Phi_0 = 1 case is the ordinary Jacobi identity
    let field = Field::rational();
    let subs2 = increasing_subsets(4, 2);
    let mut gen = SmallRationals::new(12);
    for _ in 0..5 {
        let mut l = ext_zero(subs2.len(), 4, &field);
        for row in l.iter_mut() {
            for e in row.iter_mut() {
                *e = gen.small(&field);
            }
        }
        let phi0 = vec![field.one()];
        assert_eq!(
            gen_jacobi_check(4, &l, 0, &phi0, &field),
            pbwforge_core::wedgedef::jacobi_check(4, &l, &field)
        );
    }
}

#[test]
fn top_form_condition_is_enforced() {
    // N = 4, v = 6, Heisenberg bracket: a top form whose insertion pairing
    // hits the bracket is refused; one supported away from it passes
    let field = Field::rational();
    let subs2 = increasing_subsets(6, 2);
    let subs4 = increasing_subsets(6, 4);
    let mut heis = ext_zero(subs2.len(), 6, &field);
    let idx12 = subs2.iter().position(|s| s == &vec![0u8, 1]).unwrap();
    heis[idx12][2] = field.one();
    let mut accepted = None;
    let mut refused = None;
    for k in 0..subs4.len() {
        let mut top = vec![field.zero(); subs4.len()];
        top[k] = field.one();
        let data = EvenWedgeData {
            v: 6,
            n: 4,
            bracket: heis.clone(),
            forms: BTreeMap::new(),
            top_form: Some(top),
        };
        match build_alpha_even(&data, &field, false) {
            Ok((datum, _)) => {
                if accepted.is_none() {
                    accepted = Some((k, datum));
                }
            }
            Err(WedgeError::TopFormCondition) => {
                if refused.is_none() {
                    refused = Some(k);
                }
            }
            Err(e) => panic!("unexpected error: {}", e),
        }
    }
    let (_, datum) = accepted.expect("some top form satisfies the condition");
    assert!(refused.is_some(), "some top form violates the condition");
    assert!(!datum.is_augmented());
    let report = pbw_verify(&datum, 5, 1).unwrap();
    assert!(report.passed(), "accepted top form gives a PBW deformation");
}
