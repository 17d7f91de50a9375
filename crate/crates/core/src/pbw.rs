//! Executable PBW conditions: the overlap-space check (J1), the chain of
//! composition identities (J2), and a direct verification that gr U has the
//! dimensions of A by truncated ideal computation, including the behavior on
//! the standard non-Koszul counterexample.

use crate::freealg::{self, FilteredDimsReport, NcPoly};
use crate::linmap::{bracket, LinMap, MapDomain, SparseRow};
use crate::poly::{PolyElement, PolyRing};
use crate::scalar::Field;
use crate::subspace::{echelon_with_transform, Subspace};
use crate::word::{GradedPiece, TensorError, TensorElement};
use serde::Serialize;
use std::fmt;

#[derive(Debug)]
pub enum PbwError {
    Tensor(TensorError),
    DependentRelations,
    AlphaShape(String),
    SymbolicWhereNumericRequired(String),
}

impl fmt::Display for PbwError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PbwError::Tensor(e) => write!(f, "{}", e),
            PbwError::DependentRelations => {
                write!(f, "relation vectors are linearly dependent")
            }
            PbwError::AlphaShape(m) => write!(f, "alpha matrix shape error: {}", m),
            PbwError::SymbolicWhereNumericRequired(m) => {
                write!(f, "numeric data required: {}", m)
            }
        }
    }
}

impl std::error::Error for PbwError {}

impl From<TensorError> for PbwError {
    fn from(e: TensorError) -> Self {
        PbwError::Tensor(e)
    }
}

/// A deformation datum (V, N, R, alpha_1..alpha_N). Relations are numeric;
/// the alpha entries may be symbolic polynomials in the ring's parameters.
#[derive(Clone)]
pub struct DeformationData {
    field: Field,
    ring: PolyRing,
    v: usize,
    n: usize,
    relations: Vec<TensorElement>,
    r_space: Subspace,
    /// alpha[i-1]: R -> V^(N-i) on the echelon basis of R
    alpha: Vec<LinMap>,
    augmented: bool,
}

impl DeformationData {
    /// `alpha_rows[i-1]` are sparse rows over words of degree N-i, one row
    /// per *input* relation vector (missing trailing maps mean zero).
    pub fn new(
        field: &Field,
        ring: &PolyRing,
        v: usize,
        n: usize,
        relations: Vec<TensorElement>,
        alpha_rows: Vec<Vec<SparseRow>>,
    ) -> Result<DeformationData, PbwError> {
        assert!(n >= 2, "relation degree must be at least 2");
        let piece = GradedPiece::new(v, n)?;
        let mut numeric_rows = Vec::with_capacity(relations.len());
        for r in &relations {
            if r.piece() != piece {
                return Err(PbwError::Tensor(TensorError::MixedHomes));
            }
            numeric_rows.push(r.constant_coeffs()?);
        }
        let (ech_rows, pivots, transform) = echelon_with_transform(&numeric_rows, field);
        if ech_rows.len() != relations.len() {
            return Err(PbwError::DependentRelations);
        }
        let r_space = Subspace::from_sparse_rows(piece, field, ech_rows);
        debug_assert_eq!(r_space.pivots(), &pivots[..]);
        if alpha_rows.len() > n {
            return Err(PbwError::AlphaShape(format!(
                "{} alpha maps given but N = {}",
                alpha_rows.len(),
                n
            )));
        }
        let mut alpha = Vec::with_capacity(n);
        for i in 1..=n {
            let cod = GradedPiece::new(v, n - i)?;
            let rows_in = alpha_rows.get(i - 1);
            let mut rows = Vec::with_capacity(relations.len());
            match rows_in {
                None => {
                    for _ in 0..relations.len() {
                        rows.push(Vec::new());
                    }
                }
                Some(mat) => {
                    if mat.len() != relations.len() {
                        return Err(PbwError::AlphaShape(format!(
                            "alpha_{} has {} rows, expected {}",
                            i,
                            mat.len(),
                            relations.len()
                        )));
                    }
                    for row in mat {
                        if row.iter().any(|(j, _)| *j >= cod.dim()) {
                            return Err(PbwError::AlphaShape(format!(
                                "alpha_{} column out of range for degree {}",
                                i,
                                n - i
                            )));
                        }
                        rows.push(row.clone());
                    }
                }
            }
            // change to the echelon basis of R
            let ech_mat: Vec<SparseRow> = transform
                .iter()
                .map(|combo| {
                    let mut acc: std::collections::BTreeMap<u64, PolyElement> =
                        std::collections::BTreeMap::new();
                    for (k, c) in combo {
                        for (j, x) in &rows[*k] {
                            let add = x.mul(&ring.constant(c.clone()));
                            if add.is_zero() {
                                continue;
                            }
                            match acc.entry(*j) {
                                std::collections::btree_map::Entry::Vacant(e) => {
                                    e.insert(add);
                                }
                                std::collections::btree_map::Entry::Occupied(mut e) => {
                                    let s = e.get().add(&add);
                                    if s.is_zero() {
                                        e.remove();
                                    } else {
                                        *e.get_mut() = s;
                                    }
                                }
                            }
                        }
                    }
                    acc.into_iter().collect()
                })
                .collect();
            alpha.push(LinMap::from_rows(
                MapDomain::Sub(r_space.clone()),
                cod,
                ring,
                ech_mat,
            )?);
        }
        let augmented = alpha[n - 1].is_zero();
        Ok(DeformationData {
            field: field.clone(),
            ring: ring.clone(),
            v,
            n,
            relations,
            r_space,
            alpha,
            augmented,
        })
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[TensorElement] {
        &self.relations
    }

    pub fn r_space(&self) -> &Subspace {
        &self.r_space
    }

    /// alpha_i on the echelon basis of R (1-based i).
    pub fn alpha(&self, i: usize) -> &LinMap {
        &self.alpha[i - 1]
    }

    pub fn is_augmented(&self) -> bool {
        self.augmented
    }

    pub fn is_numeric(&self) -> bool {
        self.alpha
            .iter()
            .all(|m| m.rows().iter().all(|r| r.iter().all(|(_, c)| c.as_constant().is_some())))
    }

    /// Substitutes ring parameters in all alpha entries.
    pub fn specialize(
        &self,
        bindings: &std::collections::BTreeMap<String, PolyElement>,
    ) -> Result<DeformationData, PbwError> {
        let alpha_rows: Vec<Vec<SparseRow>> = self
            .alpha
            .iter()
            .map(|m| {
                m.rows()
                    .iter()
                    .map(|row| {
                        row.iter()
                            .filter_map(|(j, c)| match c.substitute(bindings) {
                                Ok(v) if v.is_zero() => None,
                                Ok(v) => Some(Ok((*j, v))),
                                Err(e) => Some(Err(e)),
                            })
                            .collect::<Result<SparseRow, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| PbwError::AlphaShape(e.to_string()))?;
        // alpha is already on the echelon basis; relations are the echelon
        // basis elements themselves here
        let ech_relations = self.r_space.basis_elements(&self.ring);
        DeformationData::new(
            &self.field,
            &self.ring,
            self.v,
            self.n,
            ech_relations,
            alpha_rows,
        )
    }

    /// (V (x) R) ∩ (R (x) V) in degree N+1.
    pub fn overlap_space(&self) -> Result<Subspace, PbwError> {
        let left = self.r_space.tensor(1, 0)?;
        let right = self.r_space.tensor(0, 1)?;
        Ok(left.intersect(&right)?)
    }
}

#[derive(Debug, Clone)]
pub struct J1Report {
    pub overlap_dim: usize,
    /// R-coordinates of [1, alpha_1](w_j) per overlap basis vector
    pub coords: Vec<Vec<PolyElement>>,
    /// residuals after reducing against R; the symbolic J1 equations
    pub residuals: Vec<PolyElement>,
    pub pass: bool,
}

/// J1: the image of [1, alpha_1] on the overlap must lie in R. Returns the
/// induced R-coordinates (needed by J2) and the residual equations.
pub fn check_j1(data: &DeformationData, overlap: &Subspace) -> Result<J1Report, PbwError> {
    let br = bracket(data.alpha(1), overlap)?;
    let mut coords = Vec::with_capacity(overlap.dim());
    let mut residuals = Vec::new();
    for j in 0..overlap.dim() {
        let img = br.image_of_basis(j);
        let (c, rem) = data.r_space.reduce_poly(&img);
        coords.push(c);
        for (_, r) in rem.iter() {
            residuals.push(r.clone());
        }
    }
    let pass = residuals.iter().all(|r| r.is_zero());
    Ok(J1Report {
        overlap_dim: overlap.dim(),
        coords,
        residuals,
        pass,
    })
}

#[derive(Debug, Clone)]
pub struct J2Stage {
    pub i: usize,
    pub equations: Vec<PolyElement>,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct J2Report {
    pub stages: Vec<J2Stage>,
    pub pass: bool,
}

/// J2: alpha_i ∘ [1, alpha_1] = [1, alpha_(i+1)] on the overlap for
/// i = 1..N, with alpha_(N+1) = 0. Uses the R-coordinates from J1.
pub fn check_j2(
    data: &DeformationData,
    overlap: &Subspace,
    j1: &J1Report,
) -> Result<J2Report, PbwError> {
    let mut stages = Vec::new();
    for i in 1..=data.n {
        let rhs_map = if i + 1 <= data.n {
            Some(bracket(data.alpha(i + 1), overlap)?)
        } else {
            None
        };
        let mut equations = Vec::new();
        for j in 0..overlap.dim() {
            // lhs = alpha_i applied to the R-expansion of [1,alpha_1](w_j)
            let cod = GradedPiece::new(data.v, data.n - i)?;
            let mut lhs = TensorElement::zero(cod, &data.ring);
            for (k, c) in j1.coords[j].iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (col, x) in data.alpha(i).row(k) {
                    lhs.add_term(*col, x.mul(c));
                }
            }
            let rhs = match &rhs_map {
                Some(m) => m.image_of_basis(j),
                None => TensorElement::zero(cod, &data.ring),
            };
            let diff = lhs.sub(&rhs)?;
            for (_, e) in diff.iter() {
                equations.push(e.clone());
            }
        }
        let pass = equations.iter().all(|e| e.is_zero());
        stages.push(J2Stage { i, equations, pass });
    }
    let pass = stages.iter().all(|s| s.pass);
    Ok(J2Report { stages, pass })
}

/// dim A_d for d = 0..maxdeg of the homogeneous quotient T(V)/(R).
pub fn graded_dims_a(r_space: &Subspace, field: &Field, maxdeg: usize) -> Vec<u64> {
    let piece = r_space.piece();
    let relations: Vec<NcPoly> = r_space
        .rows()
        .iter()
        .map(|row| {
            let mut p = NcPoly::zero(field);
            for (idx, c) in row {
                p.add_term(piece.index_to_word(*idx), c.clone());
            }
            p
        })
        .collect();
    freealg::graded_quotient_dims(field, piece.v(), &relations, maxdeg)
}

/// dim F^d U for d = 0..maxdeg, with a stability recheck at one degree more.
pub fn filtered_dims_u(
    data: &DeformationData,
    maxdeg: usize,
    margin: usize,
) -> Result<FilteredDimsReport, PbwError> {
    let piece = data.r_space.piece();
    let mut gens = Vec::with_capacity(data.r_space.dim());
    for (k, row) in data.r_space.rows().iter().enumerate() {
        let mut p = NcPoly::zero(&data.field);
        for (idx, c) in row {
            p.add_term(piece.index_to_word(*idx), c.clone());
        }
        for i in 1..=data.n {
            let cod = GradedPiece::new(data.v, data.n - i)?;
            for (col, c) in data.alpha(i).row(k) {
                match c.as_constant() {
                    Some(v) => p.add_term(cod.index_to_word(*col), v),
                    None => {
                        return Err(PbwError::SymbolicWhereNumericRequired(format!(
                            "alpha_{} entry {}",
                            i, c
                        )))
                    }
                }
            }
        }
        gens.push(p);
    }
    Ok(freealg::filtered_quotient_dims(
        &data.field,
        data.v,
        &gens,
        maxdeg,
        margin,
    ))
}

pub fn default_margin(n: usize) -> usize {
    n + 2
}

#[derive(Debug, Clone, Serialize)]
pub struct J1Section {
    pub pass: bool,
    pub overlap_dim: usize,
    pub coords: Vec<Vec<String>>,
    pub residuals: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct J2Section {
    pub i: usize,
    pub pass: bool,
    pub residuals: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimRow {
    pub degree: usize,
    pub dim_filtered_u: u64,
    pub dim_a_cumulative: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DimsSection {
    pub pass: bool,
    pub stable: bool,
    pub completion_degree: usize,
    pub failing_degree: Option<usize>,
    pub rows: Vec<DimRow>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub verdict: String,
    pub j1: J1Section,
    pub j2: Vec<J2Section>,
    pub dims: DimsSection,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}

/// Full verdict: J1 + J2 + the direct dimension comparison up to maxdeg.
pub fn pbw_verify(
    data: &DeformationData,
    maxdeg: usize,
    margin: usize,
) -> Result<CheckReport, PbwError> {
    let overlap = data.overlap_space()?;
    let j1 = check_j1(data, &overlap)?;
    let j2 = check_j2(data, &overlap, &j1)?;
    let filtered = filtered_dims_u(data, maxdeg, margin)?;
    let graded = graded_dims_a(&data.r_space, &data.field, maxdeg);
    let mut cum = 0u64;
    let mut rows = Vec::with_capacity(maxdeg + 1);
    let mut failing = None;
    for d in 0..=maxdeg {
        cum += graded[d];
        rows.push(DimRow {
            degree: d,
            dim_filtered_u: filtered.dims[d],
            dim_a_cumulative: cum,
        });
        if failing.is_none() && filtered.dims[d] != cum {
            failing = Some(d);
        }
    }
    let dims_pass = failing.is_none() && filtered.stable;
    let verdict = if j1.pass && j2.pass && dims_pass {
        "pass"
    } else {
        "fail"
    };
    Ok(CheckReport {
        verdict: verdict.to_string(),
        j1: J1Section {
            pass: j1.pass,
            overlap_dim: j1.overlap_dim,
            coords: j1
                .coords
                .iter()
                .map(|row| row.iter().map(|c| c.to_string()).collect())
                .collect(),
            residuals: j1
                .residuals
                .iter()
                .filter(|r| !r.is_zero())
                .map(|r| r.to_string())
                .collect(),
        },
        j2: j2
            .stages
            .iter()
            .map(|s| J2Section {
                i: s.i,
                pass: s.pass,
                residuals: s
                    .equations
                    .iter()
                    .filter(|e| !e.is_zero())
                    .map(|e| e.to_string())
                    .collect(),
            })
            .collect(),
        dims: DimsSection {
            pass: dims_pass,
            stable: filtered.stable,
            completion_degree: filtered.completion_degree,
            failing_degree: failing,
            rows,
        },
    })
}

/// The degree-m inclusion from the Koszulity proof:
/// W^(m-1) (x) S (x) W inside W^m (x) S + the intersection of all
/// W^(m-i) (x) S (x) W^i, for S = R^perp. A sanity signal, not a
/// Koszulity certificate.
pub fn koszul_overlap_check(r_space: &Subspace, m: usize) -> Result<bool, PbwError> {
    let n = r_space.piece().degree();
    assert!(m >= 2 && m <= n.max(2), "m must satisfy 2 <= m <= N-1");
    let s = crate::exterior::perp_space(r_space);
    let lhs = s.tensor(m - 1, 1)?;
    let mut rhs = s.tensor(m, 0)?;
    let mut inter: Option<Subspace> = None;
    for i in 1..=m {
        let t = s.tensor(m - i, i)?;
        inter = Some(match inter {
            None => t,
            Some(acc) => acc.intersect(&t)?,
        });
    }
    if let Some(i) = inter {
        rhs = rhs.sum(&i)?;
    }
    Ok(rhs.contains(&lhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::{antisymmetrizer, bracket_tensor_map, ext_zero};

    fn so3_data() -> DeformationData {
        let field = Field::rational();
        let ring = PolyRing::scalars(&field);
        let r = antisymmetrizer(3, 2, &field).unwrap();
        let relations = r.basis_elements(&ring);
        // alpha_1 = the so(3) bracket: rows over words of degree 1
        let mut l_ext = ext_zero(3, 3, &field);
        l_ext[0][2] = field.one(); // [x,y] = z
        l_ext[1][1] = field.one().neg(); // [x,z] = -y
        l_ext[2][0] = field.one(); // [y,z] = x
        let lmap = bracket_tensor_map(3, &l_ext, &ring).unwrap();
        let restricted = lmap.restrict(&r).unwrap();
        let alpha1: Vec<SparseRow> = restricted.rows().to_vec();
        DeformationData::new(&field, &ring, 3, 2, relations, vec![alpha1]).unwrap()
    }

    #[test]
    fn so3_overlap_is_wedge3() {
        let data = so3_data();
        let overlap = data.overlap_space().unwrap();
        assert_eq!(overlap.dim(), 1);
        let w3 = antisymmetrizer(3, 3, &Field::rational()).unwrap();
        assert_eq!(overlap, w3);
    }

    #[test]
    fn so3_passes_everything() {
        let data = so3_data();
        let report = pbw_verify(&data, 6, 4).unwrap();
        assert!(report.passed(), "so(3) must be a PBW-deformation");
        // classical dimensions C(d+3,3)
        let expected = [1u64, 4, 10, 20, 35, 56, 84];
        for (d, row) in report.dims.rows.iter().enumerate() {
            assert_eq!(row.dim_filtered_u, expected[d]);
        }
    }

    #[test]
    fn failing_jacobi_is_detected_by_j2() {
        // L(x^y) = x, L(x^z) = z, L(y^z) = 0 violates Jacobi
        let field = Field::rational();
        let ring = PolyRing::scalars(&field);
        let r = antisymmetrizer(3, 2, &field).unwrap();
        let relations = r.basis_elements(&ring);
        let mut l_ext = ext_zero(3, 3, &field);
        l_ext[0][0] = field.one(); // L(x^y) = x
        l_ext[1][2] = field.one(); // L(x^z) = z
        let lmap = bracket_tensor_map(3, &l_ext, &ring).unwrap();
        let alpha1 = lmap.restrict(&r).unwrap().rows().to_vec();
        let data = DeformationData::new(&field, &ring, 3, 2, relations, vec![alpha1]).unwrap();
        let overlap = data.overlap_space().unwrap();
        let j1 = check_j1(&data, &overlap).unwrap();
        assert!(j1.pass, "J1 lands in degree N and is interior for N=2");
        let j2 = check_j2(&data, &overlap, &j1).unwrap();
        assert!(!j2.pass, "Jacobi failure shows up in J2 at i=1");
        assert!(!j2.stages[0].pass);
    }

    #[test]
    fn zero_alpha_always_passes() {
        let field = Field::rational();
        let ring = PolyRing::scalars(&field);
        let r = antisymmetrizer(3, 2, &field).unwrap();
        let relations = r.basis_elements(&ring);
        let data = DeformationData::new(&field, &ring, 3, 2, relations, vec![]).unwrap();
        let report = pbw_verify(&data, 5, 3).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn koszul_overlap_lemma_for_wedge_relations() {
        let field = Field::rational();
        let r = antisymmetrizer(5, 3, &field).unwrap();
        assert!(koszul_overlap_check(&r, 2).unwrap());
    }
}
