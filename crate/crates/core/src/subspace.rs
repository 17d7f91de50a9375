//! Subspaces of graded pieces as canonical reduced row-echelon bases over the
//! coefficient field. Rows are sparse; pivots are the leftmost support index
//! of each row, rows are sorted by pivot, pivot entries are 1 and cleared
//! from every other row, so subspace equality is representation equality.

use crate::scalar::{Field, FieldElement};
use crate::word::{GradedPiece, TensorError, TensorElement};
use crate::poly::PolyElement;
use std::fmt;

/// Sparse vector over word indices, sorted by index, no explicit zeros.
pub type SparseVec = Vec<(u64, FieldElement)>;

/// target += c * source
pub fn sv_add_scaled(target: &SparseVec, source: &SparseVec, c: &FieldElement) -> SparseVec {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let mut i = 0;
    let mut j = 0;
    while i < target.len() || j < source.len() {
        if j >= source.len() || (i < target.len() && target[i].0 < source[j].0) {
            out.push(target[i].clone());
            i += 1;
        } else if i >= target.len() || source[j].0 < target[i].0 {
            let v = source[j].1.mul(c);
            if !v.is_zero() {
                out.push((source[j].0, v));
            }
            j += 1;
        } else {
            let v = target[i].1.add(&source[j].1.mul(c));
            if !v.is_zero() {
                out.push((target[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

pub fn sv_scale(v: &SparseVec, c: &FieldElement) -> SparseVec {
    if c.is_zero() {
        return Vec::new();
    }
    v.iter().map(|(i, x)| (*i, x.mul(c))).collect()
}

fn sv_get(v: &SparseVec, idx: u64) -> Option<FieldElement> {
    v.binary_search_by_key(&idx, |e| e.0)
        .ok()
        .map(|p| v[p].1.clone())
}

/// A subspace of one graded piece in canonical RREF.
#[derive(Clone)]
pub struct Subspace {
    piece: GradedPiece,
    field: Field,
    rows: Vec<SparseVec>,
    pivots: Vec<u64>,
}

impl PartialEq for Subspace {
    fn eq(&self, other: &Self) -> bool {
        self.piece == other.piece && self.rows == other.rows
    }
}

impl Eq for Subspace {}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Subspace(dim {} of {}^{})",
            self.rows.len(),
            self.piece.v(),
            self.piece.degree()
        )
    }
}

impl Subspace {
    pub fn empty(piece: GradedPiece, field: &Field) -> Subspace {
        Subspace {
            piece,
            field: field.clone(),
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(piece: GradedPiece, field: &Field) -> Subspace {
        let rows = (0..piece.dim())
            .map(|i| vec![(i, field.one())])
            .collect();
        Subspace {
            piece,
            field: field.clone(),
            rows,
            pivots: (0..piece.dim()).collect(),
        }
    }

    pub fn piece(&self) -> GradedPiece {
        self.piece
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[SparseVec] {
        &self.rows
    }

    pub fn pivots(&self) -> &[u64] {
        &self.pivots
    }

    /// Canonical echelon basis from arbitrary spanning vectors.
    pub fn from_sparse_rows(
        piece: GradedPiece,
        field: &Field,
        vectors: Vec<SparseVec>,
    ) -> Subspace {
        let mut sub = Subspace::empty(piece, field);
        for v in vectors {
            sub.insert_reduced(v);
        }
        sub
    }

    pub fn from_vectors(vecs: &[TensorElement]) -> Result<Subspace, TensorError> {
        let piece = match vecs.first() {
            Some(v) => v.piece(),
            None => panic!("from_vectors requires at least one element to fix the home piece"),
        };
        let field = vecs[0].ring().field().clone();
        let mut rows = Vec::new();
        for v in vecs {
            if v.piece() != piece {
                return Err(TensorError::MixedHomes);
            }
            rows.push(v.constant_coeffs()?);
        }
        Ok(Subspace::from_sparse_rows(piece, &field, rows))
    }

    /// Reduces a vector, inserting the nonzero residual as a new basis row
    /// (keeping canonical RREF). Returns true if the dimension grew.
    pub fn insert_reduced(&mut self, v: SparseVec) -> bool {
        let (_, mut rem) = self.reduce(&v);
        if rem.is_empty() {
            return false;
        }
        // normalize
        let lead = rem[0].1.clone();
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero pivot");
            rem = sv_scale(&rem, &inv);
        }
        let pivot = rem[0].0;
        // clear the new pivot from existing rows
        for row in self.rows.iter_mut() {
            if let Some(c) = sv_get(row, pivot) {
                *row = sv_add_scaled(row, &rem, &c.neg());
            }
        }
        let pos = self.pivots.partition_point(|&p| p < pivot);
        self.pivots.insert(pos, pivot);
        self.rows.insert(pos, rem);
        true
    }

    /// Writes v as (coordinates on the basis rows) + residual.
    pub fn reduce(&self, v: &SparseVec) -> (Vec<FieldElement>, SparseVec) {
        let mut coords = vec![self.field.zero(); self.rows.len()];
        let mut rem = v.clone();
        for (i, row) in self.rows.iter().enumerate() {
            if let Some(c) = sv_get(&rem, self.pivots[i]) {
                coords[i] = c.clone();
                rem = sv_add_scaled(&rem, row, &c.neg());
            }
        }
        (coords, rem)
    }

    /// Like `reduce`, but the vector has polynomial coefficients; the basis
    /// stays numeric. Returns the polynomial coordinates and residual.
    pub fn reduce_poly(&self, v: &TensorElement) -> (Vec<PolyElement>, TensorElement) {
        let ring = v.ring().clone();
        let mut coords = vec![ring.zero(); self.rows.len()];
        let mut rem = v.clone();
        for (i, row) in self.rows.iter().enumerate() {
            let c = rem.get(self.pivots[i]);
            if c.is_zero() {
                continue;
            }
            coords[i] = c.clone();
            for (idx, x) in row {
                rem.add_term(*idx, c.mul(&ring.constant(x.neg())));
            }
        }
        (coords, rem)
    }

    pub fn contains_vec(&self, v: &SparseVec) -> bool {
        self.reduce(v).1.is_empty()
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.piece == other.piece && other.rows.iter().all(|r| self.contains_vec(r))
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, TensorError> {
        if self.piece != other.piece {
            return Err(TensorError::MixedHomes);
        }
        let mut out = self.clone();
        for r in &other.rows {
            out.insert_reduced(r.clone());
        }
        Ok(out)
    }

    /// Echelonized intersection via residual kernels: combinations of the
    /// other basis that land in this subspace.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, TensorError> {
        if self.piece != other.piece {
            return Err(TensorError::MixedHomes);
        }
        // residual_i = other_i reduced mod self; kernel combos of residuals
        // give intersection elements sum_i c_i * other_i.
        let residuals: Vec<SparseVec> = other.rows.iter().map(|r| self.reduce(r).1).collect();
        let kernel = left_kernel(&residuals, &self.field);
        let mut gens = Vec::new();
        for combo in kernel {
            let mut acc: SparseVec = Vec::new();
            for (i, c) in combo {
                acc = sv_add_scaled(&acc, &other.rows[i], &c);
            }
            gens.push(acc);
        }
        Ok(Subspace::from_sparse_rows(self.piece, &self.field, gens))
    }

    /// V^(d_left) (x) U (x) V^(d_right) inside the bigger piece.
    pub fn tensor(&self, d_left: usize, d_right: usize) -> Result<Subspace, TensorError> {
        let v = self.piece.v();
        let piece = GradedPiece::new(v, d_left + self.piece.degree() + d_right)?;
        let left_dim = (v as u64).pow(d_left as u32);
        let right_dim = (v as u64).pow(d_right as u32);
        let mid_shift = right_dim;
        let left_shift = right_dim * self.piece.dim();
        let mut rows = Vec::with_capacity((left_dim * right_dim) as usize * self.rows.len());
        let mut pivots = Vec::new();
        for l in 0..left_dim {
            for (k, row) in self.rows.iter().enumerate() {
                for r in 0..right_dim {
                    let new_row: SparseVec = row
                        .iter()
                        .map(|(i, c)| (l * left_shift + i * mid_shift + r, c.clone()))
                        .collect();
                    pivots.push(l * left_shift + self.pivots[k] * mid_shift + r);
                    rows.push(new_row);
                }
            }
        }
        // rows are already RREF (disjoint (l, r) blocks, inner rows RREF);
        // sort by pivot for the canonical order.
        let mut order: Vec<usize> = (0..rows.len()).collect();
        order.sort_by_key(|&i| pivots[i]);
        let rows = order.iter().map(|&i| rows[i].clone()).collect();
        let pivots = order.iter().map(|&i| pivots[i]).collect();
        Ok(Subspace {
            piece,
            field: self.field.clone(),
            rows,
            pivots,
        })
    }

    /// Canonical basis of the kernel of the pairing against this subspace,
    /// i.e. all vectors whose supported coordinates annihilate every row.
    /// (Used for perpendicular spaces; the piece must be small enough to
    /// enumerate.)
    pub fn nullspace(&self) -> Subspace {
        let dim = self.piece.dim();
        let mut gens = Vec::new();
        let pivot_set: std::collections::BTreeSet<u64> = self.pivots.iter().copied().collect();
        for j in 0..dim {
            if pivot_set.contains(&j) {
                continue;
            }
            let mut vec: SparseVec = vec![(j, self.field.one())];
            for (i, row) in self.rows.iter().enumerate() {
                if let Some(c) = sv_get(row, j) {
                    vec = sv_add_scaled(&vec, &vec![(self.pivots[i], self.field.one())], &c.neg());
                }
            }
            vec.sort_by_key(|e| e.0);
            gens.push(vec);
        }
        Subspace::from_sparse_rows(self.piece, &self.field, gens)
    }

    /// Word indices not used as pivots: the canonical complement basis of
    /// the quotient piece/this.
    pub fn complement_words(&self) -> Vec<u64> {
        let pivot_set: std::collections::BTreeSet<u64> = self.pivots.iter().copied().collect();
        (0..self.piece.dim())
            .filter(|i| !pivot_set.contains(i))
            .collect()
    }

    pub fn basis_elements(&self, ring: &crate::poly::PolyRing) -> Vec<TensorElement> {
        self.rows
            .iter()
            .map(|r| {
                let mut t = TensorElement::zero(self.piece, ring);
                for (i, c) in r {
                    t.add_term(*i, ring.constant(c.clone()));
                }
                t
            })
            .collect()
    }
}

/// Canonical echelon basis with bookkeeping: returns the echelon rows, their
/// pivots, and for each echelon row its combination over the input rows.
pub fn echelon_with_transform(
    vectors: &[SparseVec],
    field: &Field,
) -> (Vec<SparseVec>, Vec<u64>, Vec<Vec<(usize, FieldElement)>>) {
    let mut rows: Vec<SparseVec> = Vec::new();
    let mut pivots: Vec<u64> = Vec::new();
    let mut combos: Vec<Vec<(usize, FieldElement)>> = Vec::new();
    for (vi, v) in vectors.iter().enumerate() {
        let mut rem = v.clone();
        let mut combo: Vec<(usize, FieldElement)> = vec![(vi, field.one())];
        for (i, row) in rows.iter().enumerate() {
            if let Some(c) = sv_get(&rem, pivots[i]) {
                rem = sv_add_scaled(&rem, row, &c.neg());
                combo = combo_add_scaled(&combo, &combos[i], &c.neg());
            }
        }
        if rem.is_empty() {
            continue;
        }
        let lead = rem[0].1.clone();
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero pivot");
            rem = sv_scale(&rem, &inv);
            combo = combo
                .iter()
                .map(|(i, c)| (*i, c.mul(&inv)))
                .collect();
        }
        let pivot = rem[0].0;
        for i in 0..rows.len() {
            if let Some(c) = sv_get(&rows[i], pivot) {
                rows[i] = sv_add_scaled(&rows[i], &rem, &c.neg());
                combos[i] = combo_add_scaled(&combos[i], &combo, &c.neg());
            }
        }
        let pos = pivots.partition_point(|&p| p < pivot);
        pivots.insert(pos, pivot);
        rows.insert(pos, rem);
        combos.insert(pos, combo);
    }
    (rows, pivots, combos)
}

fn combo_add_scaled(
    a: &[(usize, FieldElement)],
    b: &[(usize, FieldElement)],
    c: &FieldElement,
) -> Vec<(usize, FieldElement)> {
    let mut out: Vec<(usize, FieldElement)> = Vec::with_capacity(a.len() + b.len());
    let mut i = 0;
    let mut j = 0;
    while i < a.len() || j < b.len() {
        if j >= b.len() || (i < a.len() && a[i].0 < b[j].0) {
            out.push(a[i].clone());
            i += 1;
        } else if i >= a.len() || b[j].0 < a[i].0 {
            let v = b[j].1.mul(c);
            if !v.is_zero() {
                out.push((b[j].0, v));
            }
            j += 1;
        } else {
            let v = a[i].1.add(&b[j].1.mul(c));
            if !v.is_zero() {
                out.push((a[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Basis of the left kernel: combinations of the input rows summing to zero.
pub fn left_kernel(rows: &[SparseVec], field: &Field) -> Vec<Vec<(usize, FieldElement)>> {
    let mut basis: Vec<SparseVec> = Vec::new();
    let mut pivots: Vec<u64> = Vec::new();
    let mut combos: Vec<Vec<(usize, FieldElement)>> = Vec::new();
    let mut kernel = Vec::new();
    for (vi, v) in rows.iter().enumerate() {
        let mut rem = v.clone();
        let mut combo: Vec<(usize, FieldElement)> = vec![(vi, field.one())];
        for (i, row) in basis.iter().enumerate() {
            if let Some(c) = sv_get(&rem, pivots[i]) {
                rem = sv_add_scaled(&rem, row, &c.neg());
                combo = combo_add_scaled(&combo, &combos[i], &c.neg());
            }
        }
        if rem.is_empty() {
            kernel.push(combo);
            continue;
        }
        let lead = rem[0].1.clone();
        if !lead.is_one() {
            let inv = lead.inv().expect("nonzero pivot");
            rem = sv_scale(&rem, &inv);
            combo = combo.iter().map(|(i, c)| (*i, c.mul(&inv))).collect();
        }
        let pos = pivots.partition_point(|&p| p < rem[0].0);
        pivots.insert(pos, rem[0].0);
        basis.insert(pos, rem);
        combos.insert(pos, combo);
    }
    kernel
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;
    use crate::word::GradedPiece;

    fn q() -> Field {
        Field::rational()
    }

    fn elem(piece: GradedPiece, ring: &PolyRing, terms: &[(&str, i64)]) -> TensorElement {
        let list: Vec<(&str, crate::poly::PolyElement)> = terms
            .iter()
            .map(|(w, c)| (*w, ring.from_int(*c)))
            .collect();
        TensorElement::from_term_list(piece, ring, &list).unwrap()
    }

    #[test]
    fn dependent_input_collapses() {
        let p = GradedPiece::new(2, 2).unwrap();
        let ring = PolyRing::scalars(&q());
        let a = elem(p, &ring, &[("xy", 1), ("yx", -1)]);
        let b = elem(p, &ring, &[("yx", 1), ("xy", -1)]);
        let s = Subspace::from_vectors(&[a, b]).unwrap();
        assert_eq!(s.dim(), 1);
    }

    #[test]
    fn symbolic_coefficients_are_rejected() {
        let p = GradedPiece::new(2, 2).unwrap();
        let ring = PolyRing::new(&q(), &["t"]);
        let t = ring.param("t").unwrap();
        let v = TensorElement::from_term_list(p, &ring, &[("xy", t)]).unwrap();
        assert!(matches!(
            Subspace::from_vectors(&[v]),
            Err(TensorError::SymbolicCoefficient(_))
        ));
    }

    #[test]
    fn dimension_formula_for_sum_and_intersection() {
        let p = GradedPiece::new(2, 3).unwrap();
        let ring = PolyRing::scalars(&q());
        let u = Subspace::from_vectors(&[
            elem(p, &ring, &[("xxy", 1), ("xyx", 2)]),
            elem(p, &ring, &[("yyy", 1)]),
        ])
        .unwrap();
        let w = Subspace::from_vectors(&[
            elem(p, &ring, &[("xxy", 1), ("xyx", 2), ("yyy", 3)]),
            elem(p, &ring, &[("xxx", 1)]),
        ])
        .unwrap();
        let s = u.sum(&w).unwrap();
        let i = u.intersect(&w).unwrap();
        assert_eq!(s.dim() + i.dim(), u.dim() + w.dim());
        // idempotence
        assert_eq!(u.intersect(&u).unwrap(), u);
    }

    #[test]
    fn tensor_dimension() {
        let p = GradedPiece::new(2, 2).unwrap();
        let ring = PolyRing::scalars(&q());
        let r = Subspace::from_vectors(&[elem(p, &ring, &[("xy", 1), ("yx", -1)])]).unwrap();
        let t = r.tensor(1, 0).unwrap();
        assert_eq!(t.dim(), 2);
        assert_eq!(t.piece().degree(), 3);
        // (0,0) is the identity
        assert_eq!(r.tensor(0, 0).unwrap(), r);
    }

    #[test]
    fn nullspace_of_antisymmetric_line() {
        let p = GradedPiece::new(2, 2).unwrap();
        let ring = PolyRing::scalars(&q());
        let r = Subspace::from_vectors(&[elem(p, &ring, &[("xy", 1), ("yx", -1)])]).unwrap();
        let perp = r.nullspace();
        assert_eq!(perp.dim(), 3);
        // xx, xy+yx, yy
        let sym = Subspace::from_vectors(&[
            elem(p, &ring, &[("xx", 1)]),
            elem(p, &ring, &[("xy", 1), ("yx", 1)]),
            elem(p, &ring, &[("yy", 1)]),
        ])
        .unwrap();
        assert_eq!(perp, sym);
    }
}

/// Rank of a list of sparse rows over an abstract index space.
pub fn sparse_rank(rows: &[SparseVec], _field: &Field) -> usize {
    let mut basis: Vec<SparseVec> = Vec::new();
    let mut pivots: Vec<u64> = Vec::new();
    for v in rows {
        let mut rem = v.clone();
        for (i, row) in basis.iter().enumerate() {
            if let Ok(pos) = rem.binary_search_by_key(&pivots[i], |e| e.0) {
                let c = rem[pos].1.clone();
                rem = sv_add_scaled(&rem, row, &c.neg());
            }
        }
        if rem.is_empty() {
            continue;
        }
        let inv = rem[0].1.inv().expect("nonzero pivot");
        let rem = sv_scale(&rem, &inv);
        let pos = pivots.partition_point(|&p| p < rem[0].0);
        pivots.insert(pos, rem[0].0);
        basis.insert(pos, rem);
    }
    basis.len()
}
