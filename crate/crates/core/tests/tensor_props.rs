//! Randomized and worked invariants of the graded tensor-space calculus.

use pbwforge_core::exterior::{
    antisymmetrizer, bracket_tensor_map, ext_zero, full_bracket, increasing_subsets,
    op_pm_underline, op_underline, perp_space, symmetrizer,
};
use pbwforge_core::poly::PolyRing;
use pbwforge_core::scalar::{rat, Field};
use pbwforge_core::subspace::Subspace;
use pbwforge_core::word::{GradedPiece, TensorElement};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_subspace(
    rng: &mut ChaCha8Rng,
    piece: GradedPiece,
    ring: &PolyRing,
    gens: usize,
) -> Subspace {
    let vecs: Vec<TensorElement> = (0..gens)
        .map(|_| {
            let mut t = TensorElement::zero(piece, ring);
            for idx in 0..piece.dim() {
                let c: i64 = rng.gen_range(-2..=2);
                if c != 0 {
                    t.add_term(idx, ring.from_int(c));
                }
            }
            t
        })
        .collect();
    Subspace::from_vectors(&vecs).unwrap()
}

#[test]
fn dimension_formula_random_subspaces() {
    let field = Field::rational();
    let ring = PolyRing::scalars(&field);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for v in [2usize, 3] {
        let piece = GradedPiece::new(v, 3).unwrap();
        for _ in 0..20 {
            let gu = rng.gen_range(1..=4);
            let gw = rng.gen_range(1..=4);
            let u = random_subspace(&mut rng, piece, &ring, gu);
            let w = random_subspace(&mut rng, piece, &ring, gw);
            let s = u.sum(&w).unwrap();
            let i = u.intersect(&w).unwrap();
            assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
            assert!(u.contains(&i) && w.contains(&i));
            assert!(s.contains(&u) && s.contains(&w));
        }
    }
}

#[test]
fn perp_of_antisymmetrizer_is_symmetrizer_for_quadratic_relations() {
    for v in [2usize, 3, 4] {
        let field = Field::rational();
        let r = antisymmetrizer(v, 2, &field).unwrap();
        assert_eq!(perp_space(&r), symmetrizer(v, 2, &field).unwrap());
    }
}

#[test]
fn perp_dimension_is_complementary() {
    // type E relations: dim S = 2^3 - 2 = 6
    let field = Field::cyclotomic(3);
    let ring = PolyRing::scalars(&field);
    let p3 = GradedPiece::new(2, 3).unwrap();
    let z = field.zeta();
    let f = TensorElement::from_term_list(p3, &ring, &[("yyy", ring.one()), ("xxx", ring.one())])
        .unwrap();
    let g = TensorElement::from_term_list(
        p3,
        &ring,
        &[
            ("yyx", ring.one()),
            ("yxy", ring.constant(z.clone())),
            ("xyy", ring.constant(z.mul(&z))),
        ],
    )
    .unwrap();
    let r = Subspace::from_vectors(&[f, g]).unwrap();
    let s = perp_space(&r);
    assert_eq!(s.dim(), 6);
    // rank oracle for the tensored space: dim(W (x) S) = 2 * 6 = 12
    assert_eq!(s.tensor(0, 1).unwrap().dim(), 12);
    // full space has zero perp
    let full = Subspace::full(p3, &field);
    assert_eq!(perp_space(&full).dim(), 0);
}

#[test]
fn underline_identity_random_brackets() {
    // [1, underline{1^{2c} L}] = pm-underline{1^{2c+1} L} for random L
    let field = Field::rational();
    let ring = PolyRing::scalars(&field);
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for v in [2usize, 3, 4] {
        let rows = increasing_subsets(v, 2).len();
        for c in 0..=2usize {
            if v >= 4 && c == 2 {
                continue; // keep the matrices small
            }
            let mut l_ext = ext_zero(rows, v, &field);
            for row in l_ext.iter_mut() {
                for entry in row.iter_mut() {
                    let num: i64 = rng.gen_range(-2..=2);
                    *entry = field.from_rat(rat(num, 1));
                }
            }
            let l = bracket_tensor_map(v, &l_ext, &ring).unwrap();
            let lhs = full_bracket(&op_underline(&l, c, 1).unwrap()).unwrap();
            let rhs = op_pm_underline(&l, 2 * c + 1).unwrap();
            assert_eq!(lhs.rows(), rhs.rows(), "v={} c={}", v, c);
        }
    }
}

#[test]
fn overlap_of_wedge_relations_is_next_wedge_power() {
    // (V (x) R) ∩ (R (x) V) = Lambda^(N+1) V for R = Lambda^N V
    let field = Field::rational();
    for (v, n) in [(3usize, 2usize), (4, 2), (5, 3)] {
        let r = antisymmetrizer(v, n, &field).unwrap();
        let overlap = r.tensor(1, 0).unwrap().intersect(&r.tensor(0, 1).unwrap()).unwrap();
        let expected = antisymmetrizer(v, n + 1, &field).unwrap();
        assert_eq!(overlap, expected, "v={} n={}", v, n);
    }
}

#[test]
fn type_e_overlap_is_spanned_by_the_syzygy() {
    let field = Field::cyclotomic(3);
    let ring = PolyRing::scalars(&field);
    let p3 = GradedPiece::new(2, 3).unwrap();
    let p4 = GradedPiece::new(2, 4).unwrap();
    let z = field.zeta();
    let f = TensorElement::from_term_list(p3, &ring, &[("yyy", ring.one()), ("xxx", ring.one())])
        .unwrap();
    let g = TensorElement::from_term_list(
        p3,
        &ring,
        &[
            ("yyx", ring.one()),
            ("yxy", ring.constant(z.clone())),
            ("xyy", ring.constant(z.mul(&z))),
        ],
    )
    .unwrap();
    let w = TensorElement::from_term_list(
        p4,
        &ring,
        &[
            ("yyyx", ring.one()),
            ("yyxy", ring.constant(z.clone())),
            ("yxyy", ring.constant(z.mul(&z))),
            ("xyyy", ring.one()),
            ("xxxx", ring.one()),
        ],
    )
    .unwrap();
    let r = Subspace::from_vectors(&[f, g]).unwrap();
    let overlap = r.tensor(1, 0).unwrap().intersect(&r.tensor(0, 1).unwrap()).unwrap();
    assert_eq!(overlap.dim(), 1);
    assert_eq!(overlap, Subspace::from_vectors(&[w]).unwrap());
}

#[test]
fn symmetrizer_dimension_table() {
    let field = Field::rational();
    for v in 1..=4usize {
        for n in 0..=3usize {
            let dim = symmetrizer(v, n, &field).unwrap().dim();
            // binomial C(v+n-1, n)
            let mut expected = 1usize;
            for i in 0..n {
                expected = expected * (v + n - 1 - i) / (i + 1);
            }
            assert_eq!(dim, expected, "v={} n={}", v, n);
        }
    }
}
