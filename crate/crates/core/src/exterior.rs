//! Exterior and symmetric powers inside tensor pieces, the wedge-extension
//! operator T_a, and the interleaving operators built from identity pairs and
//! copies of a bracket-like map.
//!
//! Exterior powers are always realized as subspaces of tensor pieces; a map
//! "defined on Lambda^p V" is stored on the tensor piece (via the alternating
//! quotient V^(x p) -> Lambda^p V) and restricted where needed.

use crate::linmap::{LinMap, MapDomain, SparseRow};
use crate::poly::{PolyElement, PolyRing};
use crate::scalar::{Field, FieldElement};
use crate::subspace::{SparseVec, Subspace};
use crate::word::{GradedPiece, TensorError};
use std::collections::BTreeMap;

/// All strictly increasing k-subsets of {0..v-1}, in lexicographic order.
pub fn increasing_subsets(v: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    if k > v {
        return out;
    }
    let mut cur: Vec<u8> = (0..k as u8).collect();
    loop {
        out.push(cur.clone());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < (v - k + i) as u8 {
                cur[i] += 1;
                for j in i + 1..k {
                    cur[j] = cur[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn subset_index(subsets: &[Vec<u8>], s: &[u8]) -> usize {
    subsets
        .binary_search_by(|probe| probe.as_slice().cmp(s))
        .expect("subset present")
}

/// Sign of the permutation sorting `seq` (entries distinct): parity of the
/// inversion count.
pub fn sort_sign(seq: &[u8]) -> i32 {
    let mut inv = 0usize;
    for i in 0..seq.len() {
        for j in i + 1..seq.len() {
            if seq[i] > seq[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn for_each_permutation(items: &[u8], f: &mut impl FnMut(&[u8], i32)) {
    let mut arr = items.to_vec();
    let n = arr.len();
    let mut c = vec![0usize; n];
    let mut sign = 1i32;
    f(&arr, sign);
    let mut i = 0;
    while i < n {
        if c[i] < i {
            if i % 2 == 0 {
                arr.swap(0, i);
            } else {
                arr.swap(c[i], i);
            }
            sign = -sign;
            f(&arr, sign);
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
}

/// The alternating tensor realizing x_{s_1} ^ ... ^ x_{s_k} inside V^(x k).
pub fn wedge_tensor(piece: GradedPiece, field: &Field, subset: &[u8]) -> SparseVec {
    let mut terms: BTreeMap<u64, FieldElement> = BTreeMap::new();
    for_each_permutation(subset, &mut |word, sign| {
        let idx = piece.word_to_index(word);
        let val = if sign > 0 {
            field.one()
        } else {
            field.one().neg()
        };
        terms.insert(idx, val);
    });
    terms.into_iter().collect()
}

/// Lambda^N V embedded in V^(x N) by the signed sum over permutations.
/// Zero subspace when N > v; the basis is indexed by increasing sequences.
pub fn antisymmetrizer(v: usize, n: usize, field: &Field) -> Result<Subspace, TensorError> {
    let piece = GradedPiece::new(v, n)?;
    let subsets = increasing_subsets(v, n);
    let rows: Vec<SparseVec> = subsets
        .iter()
        .map(|s| wedge_tensor(piece, field, s))
        .collect();
    Ok(Subspace::from_sparse_rows(piece, field, rows))
}

/// S^N(V) embedded in V^(x N): sums over the distinct permutations of each
/// multiset, all coefficients 1.
pub fn symmetrizer(v: usize, n: usize, field: &Field) -> Result<Subspace, TensorError> {
    let piece = GradedPiece::new(v, n)?;
    let mut rows: Vec<SparseVec> = Vec::new();
    // multisets as nondecreasing words, lex order
    let mut cur = vec![0u8; n];
    loop {
        let mut words: std::collections::BTreeSet<u64> = std::collections::BTreeSet::new();
        collect_distinct_perms(&cur, &mut Vec::new(), &mut vec![false; n], &mut |w| {
            words.insert(piece.word_to_index(w));
        });
        rows.push(words.iter().map(|&i| (i, field.one())).collect());
        // advance nondecreasing word
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(Subspace::from_sparse_rows(piece, field, rows));
            }
            i -= 1;
            if cur[i] < (v - 1) as u8 {
                cur[i] += 1;
                for j in i + 1..n {
                    cur[j] = cur[i];
                }
                break;
            }
        }
        if n == 0 {
            return Ok(Subspace::from_sparse_rows(piece, field, rows));
        }
    }
}

fn collect_distinct_perms(
    multiset: &[u8],
    prefix: &mut Vec<u8>,
    used: &mut Vec<bool>,
    f: &mut impl FnMut(&[u8]),
) {
    if prefix.len() == multiset.len() {
        f(prefix);
        return;
    }
    let mut last: Option<u8> = None;
    for i in 0..multiset.len() {
        if used[i] || last == Some(multiset[i]) {
            continue;
        }
        last = Some(multiset[i]);
        used[i] = true;
        prefix.push(multiset[i]);
        collect_distinct_perms(multiset, prefix, used, f);
        prefix.pop();
        used[i] = false;
    }
}

/// The perpendicular space R^perp in the dual word basis (pairing
/// <w_I, x_J> = delta_IJ), i.e. the nullspace of the pairing against R.
pub fn perp_space(r: &Subspace) -> Subspace {
    r.nullspace()
}

/// Dense matrix in exterior bases: rows indexed by increasing p-subsets,
/// columns by increasing r-subsets.
pub type ExtMat = Vec<Vec<FieldElement>>;

pub fn ext_zero(rows: usize, cols: usize, field: &Field) -> ExtMat {
    vec![vec![field.zero(); cols]; rows]
}

/// T_a: Hom(Lambda^p V, Lambda^r V) -> Hom(Lambda^(a+p) V, Lambda^(a+r) V),
/// T_a(phi)(v_I) = sum over partitions I = A u P, |P| = p, of
/// sgn(P concat A) * v_A ^ phi(v_P).
pub fn ta_matrix(v: usize, a: usize, p: usize, r: usize, phi: &ExtMat, field: &Field) -> ExtMat {
    let dom_subs = increasing_subsets(v, a + p);
    let p_subs = increasing_subsets(v, p);
    let r_subs = increasing_subsets(v, r);
    let cod_subs = increasing_subsets(v, a + r);
    let mut out = ext_zero(dom_subs.len(), cod_subs.len(), field);
    for (ii, i_set) in dom_subs.iter().enumerate() {
        // choose P inside I by a bitmask over positions
        let n = i_set.len();
        let mut choose: Vec<usize> = (0..p).collect();
        if p > n {
            continue;
        }
        loop {
            let p_part: Vec<u8> = choose.iter().map(|&k| i_set[k]).collect();
            let a_part: Vec<u8> = (0..n)
                .filter(|k| !choose.contains(k))
                .map(|k| i_set[k])
                .collect();
            let mut concat = p_part.clone();
            concat.extend_from_slice(&a_part);
            let sign1 = sort_sign(&concat);
            let p_idx = subset_index(&p_subs, &p_part);
            for (k_idx, coeff) in phi[p_idx].iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                let k_set = &r_subs[k_idx];
                if k_set.iter().any(|x| a_part.contains(x)) {
                    continue;
                }
                let mut merged = a_part.clone();
                merged.extend_from_slice(k_set);
                let sign2 = sort_sign(&merged);
                merged.sort_unstable();
                let cod_idx = subset_index(&cod_subs, &merged);
                let mut val = coeff.clone();
                if sign1 * sign2 < 0 {
                    val = val.neg();
                }
                out[ii][cod_idx] = out[ii][cod_idx].add(&val);
            }
            // next p-combination of positions
            let mut i = p;
            let mut done = true;
            while i > 0 {
                i -= 1;
                if choose[i] < n - p + i {
                    choose[i] += 1;
                    for j in i + 1..p {
                        choose[j] = choose[j - 1] + 1;
                    }
                    done = false;
                    break;
                }
            }
            if done || p == 0 {
                break;
            }
        }
    }
    out
}

pub fn ext_compose(m1: &ExtMat, m2: &ExtMat, field: &Field) -> ExtMat {
    let rows = m1.len();
    let cols = if m2.is_empty() { 0 } else { m2[0].len() };
    let mut out = ext_zero(rows, cols, field);
    for i in 0..rows {
        for (k, c) in m1[i].iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for j in 0..cols {
                if m2[k][j].is_zero() {
                    continue;
                }
                let add = c.mul(&m2[k][j]);
                out[i][j] = out[i][j].add(&add);
            }
        }
    }
    out
}

pub fn ext_is_zero(m: &ExtMat) -> bool {
    m.iter().all(|r| r.iter().all(|c| c.is_zero()))
}

pub fn ext_rank(m: &ExtMat, _field: &Field) -> usize {
    let rows: Vec<SparseVec> = m
        .iter()
        .map(|r| {
            r.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j as u64, c.clone()))
                .collect()
        })
        .collect();
    let mut dim = 0;
    let mut basis: Vec<SparseVec> = Vec::new();
    let mut pivots: Vec<u64> = Vec::new();
    for v in rows {
        let mut rem = v;
        for (i, row) in basis.iter().enumerate() {
            if let Ok(pos) = rem.binary_search_by_key(&pivots[i], |e| e.0) {
                let c = rem[pos].1.clone();
                rem = crate::subspace::sv_add_scaled(&rem, row, &c.neg());
            }
        }
        if rem.is_empty() {
            continue;
        }
        let inv = rem[0].1.inv().expect("nonzero");
        let rem = crate::subspace::sv_scale(&rem, &inv);
        let pos = pivots.partition_point(|&p| p < rem[0].0);
        pivots.insert(pos, rem[0].0);
        basis.insert(pos, rem);
        dim += 1;
    }
    dim
}

/// Lifts a map given on Lambda^k V (rows over the codomain piece, one per
/// increasing k-subset) to the tensor piece V^(x k) through the alternating
/// quotient: a word with a repeated letter maps to zero, otherwise to
/// sign(sort) times the subset row.
pub fn alternating_tensor_map(
    v: usize,
    k: usize,
    ext_rows: &[SparseRow],
    cod: GradedPiece,
    ring: &PolyRing,
) -> Result<LinMap, TensorError> {
    let piece = GradedPiece::new(v, k)?;
    let subsets = increasing_subsets(v, k);
    assert_eq!(ext_rows.len(), subsets.len());
    let mut rows = Vec::with_capacity(piece.dim() as usize);
    for idx in 0..piece.dim() {
        let word = piece.index_to_word(idx);
        let mut sorted = word.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            rows.push(Vec::new());
            continue;
        }
        let sign = sort_sign(&word);
        let s_idx = subset_index(&subsets, &sorted);
        let row: SparseRow = ext_rows[s_idx]
            .iter()
            .map(|(j, c)| {
                (
                    *j,
                    if sign < 0 { c.neg() } else { c.clone() },
                )
            })
            .collect();
        rows.push(row);
    }
    LinMap::from_rows(MapDomain::Piece(piece), cod, ring, rows)
}

/// underline{1^{2a} L^b}: the sum over all interleavings of `a` identity
/// pair blocks and `b` copies of L, as a map on tensor pieces.
pub fn op_underline(l: &LinMap, a: usize, b: usize) -> Result<LinMap, TensorError> {
    let (l_dom, v) = match &l.domain {
        MapDomain::Piece(p) => (*p, p.v()),
        _ => {
            return Err(TensorError::ShapeMismatch(
                "interleaving needs a piece-domain map".into(),
            ))
        }
    };
    let ring = l.ring().clone();
    let dom_deg = 2 * a + b * l_dom.degree();
    let cod_deg = 2 * a + b * l.cod.degree();
    let dom = GradedPiece::new(v, dom_deg)?;
    let cod = GradedPiece::new(v, cod_deg)?;
    let id2 = LinMap::identity(GradedPiece::new(v, 2)?, &ring);
    let mut total = LinMap::zero(MapDomain::Piece(dom), cod, &ring);
    let mut pattern = vec![false; a + b]; // false = identity pair, true = L
    for i in a..a + b {
        pattern[i] = true;
    }
    loop {
        // build the tensor product for this arrangement
        let mut acc: Option<LinMap> = None;
        for &is_l in &pattern {
            let block = if is_l { l } else { &id2 };
            acc = Some(match acc {
                None => block.clone(),
                Some(m) => m.tensor(block)?,
            });
        }
        let term = acc.unwrap_or_else(|| LinMap::identity(GradedPiece::new(v, 0).unwrap(), &ring));
        total = total.add(&term)?;
        if !next_multiset_permutation(&mut pattern) {
            break;
        }
    }
    Ok(total)
}

/// underline{±1^a L} = 1^a (x) L - 1^(a-1) (x) L (x) 1 + ... + (-1)^a L (x) 1^a.
pub fn op_pm_underline(l: &LinMap, a: usize) -> Result<LinMap, TensorError> {
    let (l_dom, v) = match &l.domain {
        MapDomain::Piece(p) => (*p, p.v()),
        _ => {
            return Err(TensorError::ShapeMismatch(
                "interleaving needs a piece-domain map".into(),
            ))
        }
    };
    let ring = l.ring().clone();
    let dom = GradedPiece::new(v, a + l_dom.degree())?;
    let cod = GradedPiece::new(v, a + l.cod.degree())?;
    let mut total = LinMap::zero(MapDomain::Piece(dom), cod, &ring);
    for k in 0..=a {
        // 1^(a-k) (x) L (x) 1^k with sign (-1)^k
        let mut term = l.clone();
        if a - k > 0 {
            term = LinMap::identity(GradedPiece::new(v, a - k)?, &ring).tensor(&term)?;
        }
        if k > 0 {
            term = term.tensor(&LinMap::identity(GradedPiece::new(v, k)?, &ring))?;
        }
        if k % 2 == 1 {
            term = term.scale(&ring.from_int(-1));
        }
        total = total.add(&term)?;
    }
    Ok(total)
}

/// [1, m] = 1 (x) m - m (x) 1 on the full pieces.
pub fn full_bracket(m: &LinMap) -> Result<LinMap, TensorError> {
    let v = m.cod.v();
    let ring = m.ring().clone();
    let id = LinMap::identity(GradedPiece::new(v, 1)?, &ring);
    id.tensor(m)?.sub(&m.tensor(&id)?)
}

fn next_multiset_permutation(pattern: &mut [bool]) -> bool {
    // next permutation in lexicographic order (false < true)
    let n = pattern.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && pattern[i - 1] >= pattern[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while pattern[j] <= pattern[i - 1] {
        j -= 1;
    }
    pattern.swap(i - 1, j);
    pattern[i..].reverse();
    true
}

/// Scalar-valued alternating form given by coefficients on the increasing
/// basis of Lambda^k V, lifted to V^(x k) -> V^(x 0).
pub fn form_tensor_map(
    v: usize,
    k: usize,
    values: &[PolyElement],
    ring: &PolyRing,
) -> Result<LinMap, TensorError> {
    let cod = GradedPiece::new(v, 0)?;
    let ext_rows: Vec<SparseRow> = values
        .iter()
        .map(|c| {
            if c.is_zero() {
                Vec::new()
            } else {
                vec![(0u64, c.clone())]
            }
        })
        .collect();
    alternating_tensor_map(v, k, &ext_rows, cod, ring)
}

/// Bracket-valued map Lambda^2 V -> V given by an exterior matrix, lifted to
/// V^(x 2) -> V.
pub fn bracket_tensor_map(
    v: usize,
    values: &ExtMat,
    ring: &PolyRing,
) -> Result<LinMap, TensorError> {
    let cod = GradedPiece::new(v, 1)?;
    let ext_rows: Vec<SparseRow> = values
        .iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j as u64, ring.constant(c.clone())))
                .collect()
        })
        .collect();
    alternating_tensor_map(v, 2, &ext_rows, cod, ring)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::rational()
    }

    #[test]
    fn antisymmetrizer_dimensions() {
        assert_eq!(antisymmetrizer(2, 2, &q()).unwrap().dim(), 1);
        assert_eq!(antisymmetrizer(3, 3, &q()).unwrap().dim(), 1);
        assert_eq!(antisymmetrizer(2, 3, &q()).unwrap().dim(), 0);
        assert_eq!(antisymmetrizer(5, 3, &q()).unwrap().dim(), 10);
    }

    #[test]
    fn antisymmetrizer_v2_is_commutator_line() {
        let s = antisymmetrizer(2, 2, &q()).unwrap();
        let expected = Subspace::from_sparse_rows(
            GradedPiece::new(2, 2).unwrap(),
            &q(),
            vec![vec![(1, q().one()), (2, q().one().neg())]],
        );
        assert_eq!(s, expected);
    }

    #[test]
    fn full_alternating_sum_has_six_words() {
        let s = antisymmetrizer(3, 3, &q()).unwrap();
        assert_eq!(s.rows()[0].len(), 6);
    }

    #[test]
    fn symmetrizer_dimensions() {
        assert_eq!(symmetrizer(2, 2, &q()).unwrap().dim(), 3);
        assert_eq!(symmetrizer(1, 4, &q()).unwrap().dim(), 1);
        assert_eq!(symmetrizer(2, 3, &q()).unwrap().dim(), 4);
    }

    #[test]
    fn perp_of_wedge_is_symmetrizer_for_n2() {
        let r = antisymmetrizer(2, 2, &q()).unwrap();
        assert_eq!(perp_space(&r), symmetrizer(2, 2, &q()).unwrap());
    }

    #[test]
    fn ta_injective_when_dim_large_enough() {
        // v=2, a=1, p=1, r=0: an isomorphism on the 2-dim space of forms
        let field = q();
        // rank of the whole operator: stack the flattened images of a basis
        let mut stacked = Vec::new();
        for b in 0..2 {
            let mut phi = ext_zero(2, 1, &field);
            phi[b][0] = field.one();
            let t = ta_matrix(2, 1, 1, 0, &phi, &field);
            let flat: Vec<FieldElement> = t.into_iter().flatten().collect();
            stacked.push(flat);
        }
        assert_eq!(ext_rank(&stacked, &field), 2);
    }

    #[test]
    fn underline_identities() {
        // a=0, b=1 is L itself; [1, underline{1^{2c}L}] = pm-underline
        let field = q();
        let ring = PolyRing::scalars(&field);
        // so(3)-like bracket on v=3
        let mut l_ext = ext_zero(3, 3, &field);
        l_ext[0][2] = field.one(); // [x,y] = z
        l_ext[1][1] = field.one().neg(); // [x,z] = -y
        l_ext[2][0] = field.one(); // [y,z] = x
        let l = bracket_tensor_map(3, &l_ext, &ring).unwrap();
        let u01 = op_underline(&l, 0, 1).unwrap();
        assert_eq!(u01.rows(), l.rows());
        for c in 0..2usize {
            let lhs = full_bracket(&op_underline(&l, c, 1).unwrap().scale(&ring.one())).unwrap();
            // note: underline{1^{2c} L} has c identity pairs
            let rhs = op_pm_underline(&l, 2 * c + 1).unwrap();
            assert_eq!(lhs.rows(), rhs.rows(), "c = {}", c);
        }
    }

    #[test]
    fn pm_underline_term_count() {
        let field = q();
        let ring = PolyRing::scalars(&field);
        // L(x ^ y) = x on v = 2 (Lambda^2 V is one-dimensional)
        let mut l_ext = ext_zero(1, 2, &field);
        l_ext[0][0] = field.one();
        let l = bracket_tensor_map(2, &l_ext, &ring).unwrap();
        // 1^2 (x) L + L (x) 1^2 (two interleavings)
        let u = op_underline(&l, 1, 1).unwrap();
        let manual = {
            let id2 = LinMap::identity(GradedPiece::new(2, 2).unwrap(), &ring);
            id2.tensor(&l).unwrap().add(&l.tensor(&id2).unwrap()).unwrap()
        };
        assert_eq!(u.rows(), manual.rows());
    }
}
