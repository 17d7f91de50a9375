//! Properties of the Yoneda algebra and the deformed A-infinity structure:
//! dimension duality, vanishing of the seeded differential on the dual
//! relations, the undeformed fixed points, the exhaustive axiom checks on
//! valid deformations, and the correspondence dictionary under perturbation.

use pbwforge_core::artinschelter::{family_data, specialize_to_datum, staged_solve, FamilyTag};
use pbwforge_core::exterior::{antisymmetrizer, bracket_tensor_map, ext_zero};
use pbwforge_core::pbw::{check_j1, check_j2, DeformationData};
use pbwforge_core::poly::{PolyElement, PolyRing};
use pbwforge_core::scalar::Field;
use pbwforge_core::word::TensorElement;
use pbwforge_core::yoneda::{sign_table, structure_sign_table, AInfStructure, YonedaAlgebra};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;

fn deformed_e(gamma: i64) -> DeformationData {
    let fam = family_data(FamilyTag::E).unwrap();
    let table = staged_solve(&fam).unwrap();
    let mut bind: BTreeMap<String, PolyElement> = BTreeMap::new();
    for f in &table.free {
        bind.insert(
            f.clone(),
            if f == "gamma" {
                fam.ring.from_int(gamma)
            } else {
                fam.ring.zero()
            },
        );
    }
    specialize_to_datum(&fam, &table, &bind).unwrap()
}

fn so3_data() -> DeformationData {
    let field = Field::rational();
    let ring = PolyRing::scalars(&field);
    let r = antisymmetrizer(3, 2, &field).unwrap();
    let relations = r.basis_elements(&ring);
    let mut l_ext = ext_zero(3, 3, &field);
    l_ext[0][2] = field.one();
    l_ext[1][1] = field.one().neg();
    l_ext[2][0] = field.one();
    let lmap = bracket_tensor_map(3, &l_ext, &ring).unwrap();
    let alpha1 = lmap.restrict(&r).unwrap().rows().to_vec();
    DeformationData::new(&field, &ring, 3, 2, relations, vec![alpha1]).unwrap()
}

#[test]
fn sign_tables() {
    // the stated recurrence
    assert_eq!(sign_table(3), vec![-1, -1, 1, 1]);
    assert_eq!(sign_table(2), vec![-1, -1, 1]);
    assert_eq!(sign_table(4), vec![1, 1, -1, -1, 1]);
    // the axiom-consistent anchor agrees at N = 2 where it matters (only
    // sigma(1)..sigma(N-1) enter the structure)
    assert_eq!(structure_sign_table(2)[1], sign_table(2)[1]);
    // both satisfy sigma(p-2) = -sigma(p)
    for n in 2..=6usize {
        for t in [sign_table(n), structure_sign_table(n)] {
            for p in 2..=n {
                assert_eq!(t[p - 2], -t[p]);
            }
        }
    }
}

#[test]
fn dimension_duality_for_acceptance_algebras() {
    // dim B_2 = dim R, dim B_3 = dim overlap
    for data in [deformed_e(1), so3_data()] {
        let yon = YonedaAlgebra::build(data.r_space(), data.field(), 2 * data.n() + 2).unwrap();
        assert_eq!(yon.dim_b(2), data.r_space().dim());
        let overlap = data.overlap_space().unwrap();
        assert_eq!(yon.dim_b(3), overlap.dim());
    }
}

#[test]
fn koszul_dual_dims_for_exterior_relations() {
    // R = Lambda^2 V for v = 3: the dual algebra has the symmetric-algebra
    // relation space, B_1 = 3, B_2 = 3, B_3 = 1
    let field = Field::rational();
    let r = antisymmetrizer(3, 2, &field).unwrap();
    let yon = YonedaAlgebra::build(&r, &field, 6).unwrap();
    assert_eq!(yon.dim_b(1), 3);
    assert_eq!(yon.dim_b(2), 3);
    assert_eq!(yon.dim_b(3), 1);
    // full relation space: S = 0, the dual is free
    let full = pbwforge_core::subspace::Subspace::full(
        pbwforge_core::word::GradedPiece::new(2, 2).unwrap(),
        &field,
    );
    let yon = YonedaAlgebra::build(&full, &field, 4).unwrap();
    // S = perp(full) = 0, so the dual algebra is free
    assert_eq!(yon.dual_dim(2), 4);
    assert_eq!(yon.dual_dim(4), 16);
    assert_eq!(yon.dim_b(1), 2);
}

#[test]
fn seeded_differential_kills_the_dual_relations() {
    // d(S) = 0 for a valid deformation
    let data = deformed_e(1);
    let st = AInfStructure::build(&data, 8, true).unwrap();
    let s_space = st.yoneda().s_space().clone();
    let ring = data.ring().clone();
    for row in s_space.rows() {
        let mut elt = TensorElement::zero(s_space.piece(), &ring);
        for (i, c) in row {
            elt.add_term(*i, ring.constant(c.clone()));
        }
        let d = st.d_elt(&elt).unwrap();
        assert!(AInfStructure::class_is_zero(&d), "d(S) must vanish");
    }
}

#[test]
fn undeformed_structure_is_kellers() {
    // alpha = 0: all deformable products vanish, m_N is the product, and
    // both axioms hold
    let data = deformed_e(0);
    let st = AInfStructure::build(&data, 8, true).unwrap();
    for p in 1..3usize {
        let table = st.m_linear_table(p).unwrap();
        assert!(
            table.iter().all(|row| row.iter().all(|c| c.is_zero())),
            "m_{} must vanish on linear arguments",
            p
        );
    }
    let a1 = st.check_axiom_1(8, false).unwrap();
    let a2 = st.check_axiom_2(8).unwrap();
    assert!(a1.pass() && a2.pass());
    assert!(a1.checked > 0 && a2.checked > 0);
}

#[test]
fn deformed_type_e_passes_both_axioms_and_descends() {
    let data = deformed_e(1);
    let st = AInfStructure::build(&data, 8, true).unwrap();
    let a1 = st.check_axiom_1(8, false).unwrap();
    let a2 = st.check_axiom_2(8).unwrap();
    let ds = st.descent_check(8).unwrap();
    assert!(a1.pass(), "axiom 1: {:?}", a1.failures.first());
    assert!(a2.pass(), "axiom 2: {:?}", a2.failures.first());
    assert!(ds.pass(), "descent: {:?}", ds.failures.first());
    assert!(st.roundtrip_alpha(&data).unwrap());
}

#[test]
fn so3_axioms_reduce_to_the_derivation_rule() {
    let data = so3_data();
    let st = AInfStructure::build(&data, 6, true).unwrap();
    let a1 = st.check_axiom_1(6, false).unwrap();
    let a2 = st.check_axiom_2(6).unwrap();
    assert!(a1.pass() && a2.pass());
    assert!(st.roundtrip_alpha(&data).unwrap());
    // N = 2 recovers the dual of the bracket as the differential
    let m1 = st.m_linear_table(1).unwrap();
    assert!(m1.iter().any(|row| row.iter().any(|c| !c.is_zero())));
}

#[test]
fn single_entry_perturbations_break_an_axiom_instance() {
    let data = deformed_e(1);
    let ring = data.ring().clone();
    // perturb a forced alpha_1 entry (b12, i.e. row g, word xy)
    let mut rows1 = data.alpha(1).rows().to_vec();
    let mut found = false;
    for e in rows1[1].iter_mut() {
        if e.0 == 1 {
            e.1 = e.1.add(&ring.one());
            found = true;
        }
    }
    if !found {
        rows1[1].push((1, ring.one()));
        rows1[1].sort_by_key(|e| e.0);
    }
    let relations = data.r_space().basis_elements(&ring);
    let perturbed = DeformationData::new(
        data.field(),
        &ring,
        2,
        3,
        relations,
        vec![rows1, data.alpha(2).rows().to_vec(), data.alpha(3).rows().to_vec()],
    )
    .unwrap();
    let st = AInfStructure::build(&perturbed, 8, false).unwrap();
    let a1 = st.check_axiom_1(8, false).unwrap();
    assert!(!a1.pass(), "a perturbed structure must fail somewhere");
}

#[test]
fn dictionary_pairing_on_random_perturbations() {
    // axiom 1 at p = N-1 pairs with J1, at p < N-1 with J2, on ten seeded
    // single-entry perturbations of the deformed type E structure
    let data = deformed_e(1);
    let ring = data.ring().clone();
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for trial in 0..10 {
        let which = rng.gen_range(1..=2usize);
        let row = rng.gen_range(0..2usize);
        let col = rng.gen_range(0..if which == 1 { 4u64 } else { 2u64 });
        let delta = ring.from_int(rng.gen_range(1..=2));
        let mut rows1 = data.alpha(1).rows().to_vec();
        let mut rows2 = data.alpha(2).rows().to_vec();
        let rows3 = data.alpha(3).rows().to_vec();
        {
            let target = if which == 1 { &mut rows1 } else { &mut rows2 };
            let mut found = false;
            for e in target[row].iter_mut() {
                if e.0 == col {
                    e.1 = e.1.add(&delta);
                    found = true;
                }
            }
            if !found {
                target[row].push((col, delta.clone()));
                target[row].sort_by_key(|e| e.0);
            }
        }
        let relations = data.r_space().basis_elements(&ring);
        let perturbed =
            DeformationData::new(data.field(), &ring, 2, 3, relations, vec![rows1, rows2, rows3])
                .unwrap();
        let overlap = perturbed.overlap_space().unwrap();
        let j1 = check_j1(&perturbed, &overlap).unwrap();
        let j2 = check_j2(&perturbed, &overlap, &j1).unwrap();
        let st = AInfStructure::build(&perturbed, 8, false).unwrap();
        let verdicts = st.axiom1_linear_verdicts().unwrap();
        let at_top = verdicts.iter().find(|(p, _)| *p == 2).unwrap().1;
        let below = verdicts.iter().filter(|(p, _)| *p < 2).all(|(_, ok)| *ok);
        assert_eq!(at_top, j1.pass, "trial {}: p = N-1 pairs with J1", trial);
        assert_eq!(below, j2.pass, "trial {}: p < N-1 pairs with J2", trial);
    }
}

#[test]
fn non_augmented_input_is_refused() {
    // give type E a nonzero alpha_3 (free a3 = 1): the correspondence needs
    // alpha_N = 0
    let fam = family_data(FamilyTag::E).unwrap();
    let table = staged_solve(&fam).unwrap();
    let mut bind: BTreeMap<String, PolyElement> = BTreeMap::new();
    for f in &table.free {
        bind.insert(
            f.clone(),
            if f == "gamma" || f == "a3" {
                fam.ring.one()
            } else {
                fam.ring.zero()
            },
        );
    }
    let data = specialize_to_datum(&fam, &table, &bind).unwrap();
    assert!(!data.is_augmented());
    assert!(matches!(
        AInfStructure::build(&data, 8, true),
        Err(pbwforge_core::yoneda::YonedaError::NonAugmented)
    ));
}

#[test]
fn j1_violation_is_refused_when_checking() {
    let data = deformed_e(1);
    let ring = data.ring().clone();
    let mut rows1 = data.alpha(1).rows().to_vec();
    rows1[0].push((2, ring.from_int(5)));
    rows1[0].sort_by_key(|e| e.0);
    let relations = data.r_space().basis_elements(&ring);
    let perturbed = DeformationData::new(
        data.field(),
        &ring,
        2,
        3,
        relations,
        vec![rows1, data.alpha(2).rows().to_vec(), data.alpha(3).rows().to_vec()],
    )
    .unwrap();
    match AInfStructure::build(&perturbed, 8, true) {
        Err(pbwforge_core::yoneda::YonedaError::J1Violated) => {}
        _ => panic!("expected a J1 refusal"),
    }
}
