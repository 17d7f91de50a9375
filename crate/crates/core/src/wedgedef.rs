//! PBW-deformation families of T(V)/(Lambda^N V): built from a linear form
//! and alternating forms when N is odd, and from a Lie bracket with
//! alternating forms subject to generalized Jacobi conditions when N is even.
//! Construction only; verification is delegated to the PBW checker.

use crate::exterior::{
    antisymmetrizer, bracket_tensor_map, ext_compose, ext_is_zero, form_tensor_map,
    increasing_subsets, op_underline, symmetrizer, ta_matrix, ExtMat,
};
use crate::linmap::{LinMap, SparseRow};
use crate::pbw::{pbw_verify, CheckReport, DeformationData, PbwError};
use crate::poly::PolyRing;
use crate::scalar::{Field, FieldElement, Rat};
use crate::word::{GradedPiece, TensorError};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub enum WedgeError {
    SmallDimension { v: usize, n: usize },
    BadParity { n: usize, expected_odd: bool },
    JacobiFails,
    GenJacobiFails { degree: usize },
    TopFormCondition,
    Shape(String),
    Tensor(TensorError),
    Pbw(PbwError),
}

impl fmt::Display for WedgeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WedgeError::SmallDimension { v, n } => write!(
                f,
                "dim V = {} is below N+2 = {}; pass the small-dimension override to proceed",
                v,
                n + 2
            ),
            WedgeError::BadParity { n, expected_odd } => write!(
                f,
                "N = {} has the wrong parity (expected {})",
                n,
                if *expected_odd { "odd" } else { "even" }
            ),
            WedgeError::JacobiFails => write!(f, "the bracket violates the Jacobi identity"),
            WedgeError::GenJacobiFails { degree } => write!(
                f,
                "the generalized Jacobi condition fails for the degree-{} form",
                degree
            ),
            WedgeError::TopFormCondition => {
                write!(f, "the top form does not annihilate the bracket insertion")
            }
            WedgeError::Shape(m) => write!(f, "{}", m),
            WedgeError::Tensor(e) => write!(f, "{}", e),
            WedgeError::Pbw(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for WedgeError {}

impl From<TensorError> for WedgeError {
    fn from(e: TensorError) -> Self {
        WedgeError::Tensor(e)
    }
}

impl From<PbwError> for WedgeError {
    fn from(e: PbwError) -> Self {
        WedgeError::Pbw(e)
    }
}

/// Odd-N data: a linear form l and alternating forms Phi_{2r}, 2 <= 2r < N,
/// each given by its values on the increasing basis of Lambda^{2r} V.
/// No relations between them are required.
#[derive(Debug, Clone)]
pub struct OddWedgeData {
    pub v: usize,
    pub n: usize,
    pub l: Vec<FieldElement>,
    pub forms: BTreeMap<usize, Vec<FieldElement>>,
}

/// Even-N data: a Lie bracket L (exterior matrix C(v,2) x v) and alternating
/// forms Phi_{2r} for 2 <= 2r < N, plus an optional top form Phi_N.
#[derive(Debug, Clone)]
pub struct EvenWedgeData {
    pub v: usize,
    pub n: usize,
    pub bracket: ExtMat,
    pub forms: BTreeMap<usize, Vec<FieldElement>>,
    pub top_form: Option<Vec<FieldElement>>,
}

/// Ordinary Jacobi identity, realized as the vanishing of L ∘ T_1(L) on
/// Lambda^3 V.
pub fn jacobi_check(v: usize, bracket: &ExtMat, field: &Field) -> bool {
    let t1 = ta_matrix(v, 1, 2, 1, bracket, field);
    let composite = ext_compose(&t1, bracket, field);
    ext_is_zero(&composite)
}

/// Generalized Jacobi: L ∘ Phi_{2r} ∘ L vanishes on Lambda^(2r+3) V,
/// realized as L ∘ T_2(Phi_{2r}) ∘ T_{2r+1}(L). The r = 0 instance with
/// Phi_0 = 1 is the ordinary Jacobi identity.
pub fn gen_jacobi_check(
    v: usize,
    bracket: &ExtMat,
    two_r: usize,
    phi: &[FieldElement],
    field: &Field,
) -> bool {
    assert!(two_r % 2 == 0);
    if increasing_subsets(v, two_r + 3).is_empty() {
        return true;
    }
    let phi_mat: ExtMat = phi.iter().map(|c| vec![c.clone()]).collect();
    let t_outer = ta_matrix(v, two_r + 1, 2, 1, bracket, field);
    let t_phi = ta_matrix(v, 2, two_r, 0, &phi_mat, field);
    let composite = ext_compose(&ext_compose(&t_outer, &t_phi, field), bracket, field);
    ext_is_zero(&composite)
}

fn check_form_shapes(
    v: usize,
    n: usize,
    forms: &BTreeMap<usize, Vec<FieldElement>>,
) -> Result<(), WedgeError> {
    for (&two_r, phi) in forms {
        if two_r % 2 != 0 || two_r < 2 || two_r >= n {
            return Err(WedgeError::Shape(format!(
                "form degree {} out of range (even, 2 <= deg < N)",
                two_r
            )));
        }
        let expected = increasing_subsets(v, two_r).len();
        if phi.len() != expected {
            return Err(WedgeError::Shape(format!(
                "degree-{} form has {} coefficients, expected {}",
                two_r,
                phi.len(),
                expected
            )));
        }
    }
    Ok(())
}

fn dimension_gate(v: usize, n: usize, allow_small_v: bool) -> Result<bool, WedgeError> {
    if v >= n + 2 {
        Ok(false)
    } else if allow_small_v {
        Ok(true)
    } else {
        Err(WedgeError::SmallDimension { v, n })
    }
}

fn restrict_rows(map: &LinMap, r: &crate::subspace::Subspace) -> Result<Vec<SparseRow>, WedgeError> {
    Ok(map.restrict(r)?.rows().to_vec())
}

/// Theorem construction for odd N: alpha_{2r} = 1^(N-2r) (x) Phi_{2r},
/// alpha_{2r+1} = 1^(N-2r-1) (x) l (x) Phi_{2r}, with Phi_0 = 1. Returns the
/// deformation datum and whether the small-dimension override was used.
pub fn build_alpha_odd(
    data: &OddWedgeData,
    field: &Field,
    allow_small_v: bool,
) -> Result<(DeformationData, bool), WedgeError> {
    let (v, n) = (data.v, data.n);
    if n % 2 == 0 || n < 3 {
        return Err(WedgeError::BadParity {
            n,
            expected_odd: true,
        });
    }
    let warned = dimension_gate(v, n, allow_small_v)?;
    if data.l.len() != v {
        return Err(WedgeError::Shape(format!(
            "linear form has {} coefficients, expected {}",
            data.l.len(),
            v
        )));
    }
    check_form_shapes(v, n, &data.forms)?;
    let ring = PolyRing::scalars(field);
    let r_space = antisymmetrizer(v, n, field)?;
    let relations = r_space.basis_elements(&ring);
    let l_map = {
        let rows: Vec<SparseRow> = data
            .l
            .iter()
            .map(|c| {
                if c.is_zero() {
                    Vec::new()
                } else {
                    vec![(0u64, ring.constant(c.clone()))]
                }
            })
            .collect();
        LinMap::from_rows(
            crate::linmap::MapDomain::Piece(GradedPiece::new(v, 1)?),
            GradedPiece::new(v, 0)?,
            &ring,
            rows,
        )?
    };
    let mut alpha_rows: Vec<Vec<SparseRow>> = Vec::with_capacity(n);
    for i in 1..=n {
        let map = if i % 2 == 1 {
            // 1^(N-i) (x) l (x) Phi_{i-1}
            let two_r = i - 1;
            let phi = if two_r == 0 {
                None
            } else {
                match data.forms.get(&two_r) {
                    Some(p) => Some(p),
                    None => {
                        alpha_rows.push(vec![Vec::new(); relations.len()]);
                        continue;
                    }
                }
            };
            let mut m = l_map.clone();
            if n - i > 0 {
                m = LinMap::identity(GradedPiece::new(v, n - i)?, &ring).tensor(&m)?;
            }
            if let Some(p) = phi {
                let values: Vec<_> = p.iter().map(|c| ring.constant(c.clone())).collect();
                let form = form_tensor_map(v, two_r, &values, &ring)?;
                m = m.tensor(&form)?;
            }
            m
        } else {
            let two_r = i;
            match data.forms.get(&two_r) {
                None => {
                    alpha_rows.push(vec![Vec::new(); relations.len()]);
                    continue;
                }
                Some(p) => {
                    let values: Vec<_> = p.iter().map(|c| ring.constant(c.clone())).collect();
                    let form = form_tensor_map(v, two_r, &values, &ring)?;
                    LinMap::identity(GradedPiece::new(v, n - i)?, &ring).tensor(&form)?
                }
            }
        };
        alpha_rows.push(restrict_rows(&map, &r_space)?);
    }
    let datum = DeformationData::new(field, &ring, v, n, relations, alpha_rows)?;
    Ok((datum, warned))
}

/// Theorem construction for even N = 2n: alpha_{2r} and alpha_{2r+1} as sums
/// of interleavings of identity pairs and bracket copies tensored with the
/// forms, plus the r Phi_{2r}(1^(2r-1) (x) L) correction in odd degrees.
/// The invariants (Jacobi, generalized Jacobi, top-form condition) are
/// verified first; the build refuses on failure.
pub fn build_alpha_even(
    data: &EvenWedgeData,
    field: &Field,
    allow_small_v: bool,
) -> Result<(DeformationData, bool), WedgeError> {
    let (v, n) = (data.v, data.n);
    if n % 2 != 0 || n < 2 {
        return Err(WedgeError::BadParity {
            n,
            expected_odd: false,
        });
    }
    let warned = dimension_gate(v, n, allow_small_v)?;
    let half = n / 2;
    if data.bracket.len() != increasing_subsets(v, 2).len()
        || data.bracket.iter().any(|r| r.len() != v)
    {
        return Err(WedgeError::Shape("bracket matrix has the wrong shape".into()));
    }
    check_form_shapes(v, n, &data.forms)?;
    if let Some(top) = &data.top_form {
        let expected = increasing_subsets(v, n).len();
        if top.len() != expected {
            return Err(WedgeError::Shape(format!(
                "top form has {} coefficients, expected {}",
                top.len(),
                expected
            )));
        }
    }
    if !jacobi_check(v, &data.bracket, field) {
        return Err(WedgeError::JacobiFails);
    }
    for (&two_r, phi) in &data.forms {
        if !gen_jacobi_check(v, &data.bracket, two_r, phi, field) {
            return Err(WedgeError::GenJacobiFails { degree: two_r });
        }
    }
    let ring = PolyRing::scalars(field);
    let l_map = bracket_tensor_map(v, &data.bracket, &ring)?;
    if let Some(top) = &data.top_form {
        // Phi_N (1^(N-1) (x) L) must vanish on Lambda^(N+1) V
        let values: Vec<_> = top.iter().map(|c| ring.constant(c.clone())).collect();
        let form = form_tensor_map(v, n, &values, &ring)?;
        let inner = LinMap::identity(GradedPiece::new(v, n - 1)?, &ring).tensor(&l_map)?;
        let composite = inner.compose(&form)?;
        let wedge_top = antisymmetrizer(v, n + 1, field)?;
        if !composite.restrict(&wedge_top)?.is_zero() {
            return Err(WedgeError::TopFormCondition);
        }
    }
    let r_space = antisymmetrizer(v, n, field)?;
    let relations = r_space.basis_elements(&ring);
    let form_map = |two_r: usize| -> Result<Option<LinMap>, WedgeError> {
        if two_r == 0 {
            return Ok(None);
        }
        match data.forms.get(&two_r) {
            None => Ok(None),
            Some(p) => {
                let values: Vec<_> = p.iter().map(|c| ring.constant(c.clone())).collect();
                Ok(Some(form_tensor_map(v, two_r, &values, &ring)?))
            }
        }
    };
    let mut alpha_rows: Vec<Vec<SparseRow>> = Vec::with_capacity(n);
    for i in 1..=n {
        if i == n {
            // alpha_N = Phi_N when supplied, zero otherwise
            match &data.top_form {
                None => alpha_rows.push(vec![Vec::new(); relations.len()]),
                Some(top) => {
                    let values: Vec<_> =
                        top.iter().map(|c| ring.constant(c.clone())).collect();
                    let form = form_tensor_map(v, n, &values, &ring)?;
                    alpha_rows.push(restrict_rows(&form, &r_space)?);
                }
            }
            continue;
        }
        let mut total: Option<LinMap> = None;
        let add_term = |m: LinMap, total: &mut Option<LinMap>| -> Result<(), WedgeError> {
            *total = Some(match total.take() {
                None => m,
                Some(t) => t.add(&m)?,
            });
            Ok(())
        };
        if i % 2 == 0 {
            let r = i / 2;
            for j in 0..=r {
                let b = 2 * r - 2 * j;
                let a = match (half + j).checked_sub(2 * r) {
                    Some(a) => a,
                    None => continue,
                };
                let is_phi0 = j == 0;
                if !is_phi0 && data.forms.get(&(2 * j)).is_none() {
                    continue;
                }
                let mut m = op_underline(&l_map, a, b)?;
                if let Some(f) = form_map(2 * j)? {
                    m = m.tensor(&f)?;
                }
                add_term(m, &mut total)?;
            }
        } else {
            let r = (i - 1) / 2;
            for j in 0..=r {
                let b = 2 * r + 1 - 2 * j;
                let a = match (half + j).checked_sub(2 * r + 1) {
                    Some(a) => a,
                    None => continue,
                };
                let is_phi0 = j == 0;
                if !is_phi0 && data.forms.get(&(2 * j)).is_none() {
                    continue;
                }
                let mut m = op_underline(&l_map, a, b)?;
                if let Some(f) = form_map(2 * j)? {
                    m = m.tensor(&f)?;
                }
                add_term(m, &mut total)?;
            }
            if r >= 1 {
                if let Some(f) = form_map(2 * r)? {
                    // 1^(N-2r-1) (x) r * Phi_{2r}(1^(2r-1) (x) L)
                    let inner =
                        LinMap::identity(GradedPiece::new(v, 2 * r - 1)?, &ring).tensor(&l_map)?;
                    let composite = inner.compose(&f)?;
                    let m = LinMap::identity(GradedPiece::new(v, n - i)?, &ring)
                        .tensor(&composite)?
                        .scale(&ring.from_int(r as i64));
                    add_term(m, &mut total)?;
                }
            }
        }
        match total {
            None => alpha_rows.push(vec![Vec::new(); relations.len()]),
            Some(m) => alpha_rows.push(restrict_rows(&m, &r_space)?),
        }
    }
    let datum = DeformationData::new(field, &ring, v, n, relations, alpha_rows)?;
    Ok((datum, warned))
}

/// Verification-only support for R = S^N(V): no construction from forms is
/// attempted, the datum is checked directly.
pub fn verify_symmetric_relations(
    data: &DeformationData,
    maxdeg: usize,
    margin: usize,
) -> Result<CheckReport, WedgeError> {
    let sym = symmetrizer(data.v(), data.n(), data.field())?;
    if data.r_space() != &sym {
        return Err(WedgeError::Shape(
            "relations are not the symmetric tensors S^N(V)".into(),
        ));
    }
    Ok(pbw_verify(data, maxdeg, margin)?)
}

/// Deterministic small-rational generator (SplitMix64) so seeded runs are
/// reproducible across platforms without an RNG dependency.
pub struct SmallRationals {
    state: u64,
}

impl SmallRationals {
    pub fn new(seed: u64) -> SmallRationals {
        SmallRationals { state: seed }
    }

    fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// A rational with numerator in -3..=3 and denominator 1 or 2.
    pub fn small(&mut self, field: &Field) -> FieldElement {
        let x = self.next_u64();
        let num = (x % 7) as i64 - 3;
        let den = if (x >> 8) % 2 == 0 { 1 } else { 2 };
        field.from_rat(Rat::new(num.into(), den.into()))
    }
}

/// Random odd-N data over Q with the given seed.
pub fn random_odd_data(v: usize, n: usize, seed: u64, field: &Field) -> OddWedgeData {
    let mut gen = SmallRationals::new(seed);
    let l = (0..v).map(|_| gen.small(field)).collect();
    let mut forms = BTreeMap::new();
    let mut two_r = 2;
    while two_r < n {
        let len = increasing_subsets(v, two_r).len();
        forms.insert(two_r, (0..len).map(|_| gen.small(field)).collect());
        two_r += 2;
    }
    OddWedgeData { v, n, l, forms }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exterior::ext_zero;

    fn q() -> Field {
        Field::rational()
    }

    fn so3_bracket(field: &Field) -> ExtMat {
        let mut l = ext_zero(3, 3, field);
        l[0][2] = field.one();
        l[1][1] = field.one().neg();
        l[2][0] = field.one();
        l
    }

    #[test]
    fn jacobi_holds_for_so3_and_fails_for_broken_bracket() {
        let field = q();
        assert!(jacobi_check(3, &so3_bracket(&field), &field));
        let mut bad = ext_zero(3, 3, &field);
        bad[0][0] = field.one(); // L(x^y) = x
        bad[1][2] = field.one(); // L(x^z) = z
        assert!(!jacobi_check(3, &bad, &field));
    }

    #[test]
    fn phi0_instance_is_ordinary_jacobi() {
        let field = q();
        let phi0 = vec![field.one()];
        assert_eq!(
            gen_jacobi_check(3, &so3_bracket(&field), 0, &phi0, &field),
            jacobi_check(3, &so3_bracket(&field), &field)
        );
        let mut bad = ext_zero(3, 3, &field);
        bad[0][0] = field.one();
        bad[1][2] = field.one();
        assert_eq!(
            gen_jacobi_check(3, &bad, 0, &phi0, &field),
            jacobi_check(3, &bad, &field)
        );
    }

    #[test]
    fn even_n2_recovers_the_classical_enveloping_algebra() {
        let field = q();
        let data = EvenWedgeData {
            v: 3,
            n: 2,
            bracket: so3_bracket(&field),
            forms: BTreeMap::new(),
            top_form: None,
        };
        let (datum, warned) = build_alpha_even(&data, &field, true).unwrap();
        assert!(warned, "v = 3 = N+1 needs the override");
        // alpha_1 is the bracket itself
        let report = pbw_verify(&datum, 4, 3).unwrap();
        assert!(report.passed());
    }

    #[test]
    fn non_jacobi_bracket_is_refused() {
        let field = q();
        let mut bad = ext_zero(3, 3, &field);
        bad[0][0] = field.one();
        bad[1][2] = field.one();
        let data = EvenWedgeData {
            v: 3,
            n: 2,
            bracket: bad,
            forms: BTreeMap::new(),
            top_form: None,
        };
        assert!(matches!(
            build_alpha_even(&data, &field, true),
            Err(WedgeError::JacobiFails)
        ));
    }

    #[test]
    fn odd_zero_data_gives_zero_alpha() {
        let field = q();
        let data = OddWedgeData {
            v: 5,
            n: 3,
            l: vec![field.zero(); 5],
            forms: BTreeMap::new(),
        };
        let (datum, warned) = build_alpha_odd(&data, &field, false).unwrap();
        assert!(!warned);
        for i in 1..=3 {
            assert!(datum.alpha(i).is_zero());
        }
    }

    #[test]
    fn clifford_relations_pass_symmetric_verification() {
        // N=2, v=2, alpha_2 = a symmetric bilinear form: xy+yx - b(x,y) etc.
        let field = q();
        let ring = PolyRing::scalars(&field);
        let sym = symmetrizer(2, 2, &field).unwrap();
        let relations = sym.basis_elements(&ring);
        // alpha_2(xx) = 1, alpha_2(xy+yx) = 2, alpha_2(yy) = 3
        let alpha2: Vec<SparseRow> = vec![
            vec![(0, ring.from_int(1))],
            vec![(0, ring.from_int(2))],
            vec![(0, ring.from_int(3))],
        ];
        let datum =
            DeformationData::new(&field, &ring, 2, 2, relations, vec![vec![Vec::new(); 3], alpha2])
                .unwrap();
        let report = verify_symmetric_relations(&datum, 5, 3).unwrap();
        assert!(report.passed(), "Clifford-type deformation is PBW");
    }
}
