//! Linear maps between graded pieces (or from a subspace into a piece), with
//! polynomial entries. The matrix convention is row-per-domain-basis-vector:
//! f(e_i) = sum_j M[i][j] e_j, stored sparsely.

use crate::poly::{PolyElement, PolyRing};
use crate::subspace::Subspace;
use crate::word::{GradedPiece, TensorError, TensorElement};
use std::collections::BTreeMap;
use std::fmt;

pub type SparseRow = Vec<(u64, PolyElement)>;

#[derive(Clone)]
pub enum MapDomain {
    Piece(GradedPiece),
    Sub(Subspace),
}

impl MapDomain {
    pub fn dim(&self) -> usize {
        match self {
            MapDomain::Piece(p) => p.dim() as usize,
            MapDomain::Sub(s) => s.dim(),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            MapDomain::Piece(p) => p.degree(),
            MapDomain::Sub(s) => s.piece().degree(),
        }
    }

    pub fn ambient(&self) -> GradedPiece {
        match self {
            MapDomain::Piece(p) => *p,
            MapDomain::Sub(s) => s.piece(),
        }
    }
}

#[derive(Clone)]
pub struct LinMap {
    pub domain: MapDomain,
    pub cod: GradedPiece,
    ring: PolyRing,
    rows: Vec<SparseRow>,
}

impl fmt::Debug for LinMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "LinMap({}x{} deg {} -> deg {})",
            self.rows.len(),
            self.cod.dim(),
            self.domain.degree(),
            self.cod.degree()
        )
    }
}

fn row_add_scaled(target: &mut BTreeMap<u64, PolyElement>, row: &SparseRow, c: &PolyElement) {
    if c.is_zero() {
        return;
    }
    for (j, x) in row {
        let v = x.mul(c);
        if v.is_zero() {
            continue;
        }
        match target.entry(*j) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(v);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(&v);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }
}

fn map_to_row(m: BTreeMap<u64, PolyElement>) -> SparseRow {
    m.into_iter().collect()
}

impl LinMap {
    pub fn zero(domain: MapDomain, cod: GradedPiece, ring: &PolyRing) -> LinMap {
        let n = domain.dim();
        LinMap {
            domain,
            cod,
            ring: ring.clone(),
            rows: vec![Vec::new(); n],
        }
    }

    pub fn identity(piece: GradedPiece, ring: &PolyRing) -> LinMap {
        let rows = (0..piece.dim())
            .map(|i| vec![(i, ring.one())])
            .collect();
        LinMap {
            domain: MapDomain::Piece(piece),
            cod: piece,
            ring: ring.clone(),
            rows,
        }
    }

    pub fn from_rows(
        domain: MapDomain,
        cod: GradedPiece,
        ring: &PolyRing,
        rows: Vec<SparseRow>,
    ) -> Result<LinMap, TensorError> {
        if rows.len() != domain.dim() {
            return Err(TensorError::ShapeMismatch(format!(
                "matrix has {} rows but the domain has dimension {}",
                rows.len(),
                domain.dim()
            )));
        }
        for r in &rows {
            if r.iter().any(|(j, _)| *j >= cod.dim()) {
                return Err(TensorError::ShapeMismatch(
                    "column index beyond the codomain dimension".into(),
                ));
            }
        }
        Ok(LinMap {
            domain,
            cod,
            ring: ring.clone(),
            rows,
        })
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn rows(&self) -> &[SparseRow] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &SparseRow {
        &self.rows[i]
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    pub fn add(&self, other: &LinMap) -> Result<LinMap, TensorError> {
        if self.rows.len() != other.rows.len() || self.cod != other.cod {
            return Err(TensorError::ShapeMismatch("sum of unequal shapes".into()));
        }
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| {
                let mut m: BTreeMap<u64, PolyElement> = BTreeMap::new();
                row_add_scaled(&mut m, a, &self.ring.one());
                row_add_scaled(&mut m, b, &self.ring.one());
                map_to_row(m)
            })
            .collect();
        Ok(LinMap {
            domain: self.domain.clone(),
            cod: self.cod,
            ring: self.ring.clone(),
            rows,
        })
    }

    pub fn sub(&self, other: &LinMap) -> Result<LinMap, TensorError> {
        self.add(&other.scale(&self.ring.from_int(-1)))
    }

    pub fn scale(&self, c: &PolyElement) -> LinMap {
        LinMap {
            domain: self.domain.clone(),
            cod: self.cod,
            ring: self.ring.clone(),
            rows: self
                .rows
                .iter()
                .map(|r| {
                    r.iter()
                        .filter_map(|(j, x)| {
                            let v = x.mul(c);
                            if v.is_zero() {
                                None
                            } else {
                                Some((*j, v))
                            }
                        })
                        .collect()
                })
                .collect(),
        }
    }

    /// self: X -> Y, then g: Y -> Z; requires g's domain piece to equal
    /// self's codomain.
    pub fn compose(&self, g: &LinMap) -> Result<LinMap, TensorError> {
        match &g.domain {
            MapDomain::Piece(p) if *p == self.cod => {}
            _ => {
                return Err(TensorError::ShapeMismatch(
                    "composition domain/codomain mismatch".into(),
                ))
            }
        }
        let rows = self
            .rows
            .iter()
            .map(|r| {
                let mut acc: BTreeMap<u64, PolyElement> = BTreeMap::new();
                for (j, c) in r {
                    row_add_scaled(&mut acc, &g.rows[*j as usize], c);
                }
                map_to_row(acc)
            })
            .collect();
        Ok(LinMap {
            domain: self.domain.clone(),
            cod: g.cod,
            ring: self.ring.clone(),
            rows,
        })
    }

    /// Kronecker product on word indices; both domains must be full pieces.
    pub fn tensor(&self, other: &LinMap) -> Result<LinMap, TensorError> {
        let (p1, p2) = match (&self.domain, &other.domain) {
            (MapDomain::Piece(a), MapDomain::Piece(b)) => (*a, *b),
            _ => {
                return Err(TensorError::ShapeMismatch(
                    "tensor product requires full-piece domains".into(),
                ))
            }
        };
        let v = p1.v();
        if v != p2.v() {
            return Err(TensorError::MixedHomes);
        }
        let domain = GradedPiece::new(v, p1.degree() + p2.degree())?;
        let cod = GradedPiece::new(v, self.cod.degree() + other.cod.degree())?;
        let c2 = other.cod.dim();
        let mut rows = Vec::with_capacity((p1.dim() * p2.dim()) as usize);
        for r1 in &self.rows {
            for r2 in &other.rows {
                let mut row = Vec::with_capacity(r1.len() * r2.len());
                for (j1, c1) in r1 {
                    for (j2, c2v) in r2 {
                        let c = c1.mul(c2v);
                        if !c.is_zero() {
                            row.push((j1 * c2 + j2, c));
                        }
                    }
                }
                row.sort_by_key(|e| e.0);
                rows.push(row);
            }
        }
        Ok(LinMap {
            domain: MapDomain::Piece(domain),
            cod,
            ring: self.ring.clone(),
            rows,
        })
    }

    /// Restricts a piece-domain map to a subspace of the piece.
    pub fn restrict(&self, sub: &Subspace) -> Result<LinMap, TensorError> {
        match &self.domain {
            MapDomain::Piece(p) if *p == sub.piece() => {}
            _ => {
                return Err(TensorError::ShapeMismatch(
                    "restriction subspace does not live in the domain piece".into(),
                ))
            }
        }
        let rows = sub
            .rows()
            .iter()
            .map(|sr| {
                let mut acc: BTreeMap<u64, PolyElement> = BTreeMap::new();
                for (i, c) in sr {
                    row_add_scaled(
                        &mut acc,
                        &self.rows[*i as usize],
                        &self.ring.constant(c.clone()),
                    );
                }
                map_to_row(acc)
            })
            .collect();
        Ok(LinMap {
            domain: MapDomain::Sub(sub.clone()),
            cod: self.cod,
            ring: self.ring.clone(),
            rows,
        })
    }

    pub fn apply(&self, t: &TensorElement) -> Result<TensorElement, TensorError> {
        match &self.domain {
            MapDomain::Piece(p) if *p == t.piece() => {}
            _ => return Err(TensorError::ShapeMismatch("apply to wrong piece".into())),
        }
        let mut acc: BTreeMap<u64, PolyElement> = BTreeMap::new();
        for (&i, c) in t.iter() {
            row_add_scaled(&mut acc, &self.rows[i as usize], c);
        }
        let mut out = TensorElement::zero(self.cod, &self.ring);
        for (j, c) in acc {
            out.add_term(j, c);
        }
        Ok(out)
    }

    /// Image of the i-th domain basis vector as a tensor element.
    pub fn image_of_basis(&self, i: usize) -> TensorElement {
        let mut out = TensorElement::zero(self.cod, &self.ring);
        for (j, c) in &self.rows[i] {
            out.add_term(*j, c.clone());
        }
        out
    }
}

/// Coordinates of each first-letter (side = Left) or last-letter (Right)
/// slice of `w` with respect to `r_space`. Errors if a slice leaves the
/// subspace, i.e. w is not in V (x) R (resp. R (x) V).
pub fn slice_coords(
    w: &crate::subspace::SparseVec,
    r_space: &Subspace,
    side: Side,
) -> Result<Vec<Vec<crate::scalar::FieldElement>>, TensorError> {
    let v = r_space.piece().v() as u64;
    let inner_dim = r_space.piece().dim();
    let mut out = Vec::with_capacity(v as usize);
    for t in 0..v {
        let slice: crate::subspace::SparseVec = w
            .iter()
            .filter_map(|(idx, c)| match side {
                Side::Left => {
                    if idx / inner_dim == t {
                        Some((idx % inner_dim, c.clone()))
                    } else {
                        None
                    }
                }
                Side::Right => {
                    if idx % v == t {
                        Some((idx / v, c.clone()))
                    } else {
                        None
                    }
                }
            })
            .collect();
        let (coords, rem) = r_space.reduce(&slice);
        if !rem.is_empty() {
            return Err(TensorError::ShapeMismatch(match side {
                Side::Left => "element is not inside V (x) R".into(),
                Side::Right => "element is not inside R (x) V".into(),
            }));
        }
        out.push(coords);
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// [1, alpha] = 1 (x) alpha - alpha (x) 1 restricted to an overlap subspace
/// of (V (x) R) ∩ (R (x) V). `alpha` must have domain Sub(R).
pub fn bracket(alpha: &LinMap, overlap: &Subspace) -> Result<LinMap, TensorError> {
    let r_space = match &alpha.domain {
        MapDomain::Sub(s) => s.clone(),
        MapDomain::Piece(_) => {
            return Err(TensorError::ShapeMismatch(
                "bracket needs a subspace-domain map".into(),
            ))
        }
    };
    let v = r_space.piece().v();
    let n = r_space.piece().degree();
    if overlap.piece().degree() != n + 1 || overlap.piece().v() != v {
        return Err(TensorError::ShapeMismatch(
            "overlap must live in degree N+1".into(),
        ));
    }
    let cod = GradedPiece::new(v, alpha.cod.degree() + 1)?;
    let cod_inner = alpha.cod.dim();
    let ring = alpha.ring.clone();
    let mut rows = Vec::with_capacity(overlap.dim());
    for w in overlap.rows() {
        let left = slice_coords(w, &r_space, Side::Left)?;
        let right = slice_coords(w, &r_space, Side::Right)?;
        let mut acc: BTreeMap<u64, PolyElement> = BTreeMap::new();
        for t in 0..v as u64 {
            for (k, lam) in left[t as usize].iter().enumerate() {
                if lam.is_zero() {
                    continue;
                }
                // + e_t (x) alpha(r_k)
                let shifted: SparseRow = alpha.rows[k]
                    .iter()
                    .map(|(j, c)| (t * cod_inner + j, c.clone()))
                    .collect();
                row_add_scaled(&mut acc, &shifted, &ring.constant(lam.clone()));
            }
            for (k, mu) in right[t as usize].iter().enumerate() {
                if mu.is_zero() {
                    continue;
                }
                // - alpha(r_k) (x) e_t
                let shifted: SparseRow = alpha.rows[k]
                    .iter()
                    .map(|(j, c)| (j * v as u64 + t, c.clone()))
                    .collect();
                row_add_scaled(&mut acc, &shifted, &ring.constant(mu.neg()));
            }
        }
        rows.push(map_to_row(acc));
    }
    LinMap::from_rows(MapDomain::Sub(overlap.clone()), cod, &ring, rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::PolyRing;
    use crate::scalar::Field;
    use crate::word::GradedPiece;

    #[test]
    fn compose_with_identity() {
        let ring = PolyRing::scalars(&Field::rational());
        let p = GradedPiece::new(2, 2).unwrap();
        let q = GradedPiece::new(2, 1).unwrap();
        let f = LinMap::from_rows(
            MapDomain::Piece(p),
            q,
            &ring,
            vec![
                vec![(0, ring.one())],
                vec![(1, ring.from_int(2))],
                Vec::new(),
                vec![(0, ring.from_int(-1)), (1, ring.one())],
            ],
        )
        .unwrap();
        let id = LinMap::identity(q, &ring);
        let g = f.compose(&id).unwrap();
        assert_eq!(g.rows(), f.rows());
    }

    #[test]
    fn tensor_shapes() {
        // id_V (x) Phi with Phi: V^2 -> k gives a map V^3 -> V
        let ring = PolyRing::scalars(&Field::rational());
        let v2 = GradedPiece::new(2, 2).unwrap();
        let k0 = GradedPiece::new(2, 0).unwrap();
        let phi = LinMap::from_rows(
            MapDomain::Piece(v2),
            k0,
            &ring,
            vec![
                vec![(0, ring.one())],
                Vec::new(),
                Vec::new(),
                vec![(0, ring.one())],
            ],
        )
        .unwrap();
        let id = LinMap::identity(GradedPiece::new(2, 1).unwrap(), &ring);
        let m = id.tensor(&phi).unwrap();
        assert_eq!(m.domain.degree(), 3);
        assert_eq!(m.cod.degree(), 1);
        assert_eq!(m.rows().len(), 8);
    }

    #[test]
    fn bracket_of_zero_map_is_zero() {
        let ring = PolyRing::scalars(&Field::rational());
        let p = GradedPiece::new(2, 2).unwrap();
        let r = crate::subspace::Subspace::from_sparse_rows(
            p,
            &Field::rational(),
            vec![vec![(1, Field::rational().one()), (2, Field::rational().one().neg())]],
        );
        let alpha = LinMap::zero(
            MapDomain::Sub(r.clone()),
            GradedPiece::new(2, 1).unwrap(),
            &ring,
        );
        let overlap = r.tensor(1, 0).unwrap().intersect(&r.tensor(0, 1).unwrap()).unwrap();
        let b = bracket(&alpha, &overlap).unwrap();
        assert!(b.is_zero());
    }
}
