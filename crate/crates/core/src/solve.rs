//! Affine-linear extraction and staged solving over polynomial scalars.
//!
//! The solver does Gauss-Jordan elimination over the fraction field, but a
//! row may only become a pivot on an unknown whose coefficient is a unit of
//! the invertible-parameter subfield. Rows that never acquire such a pivot
//! are recorded as side conditions instead of being divided through. This is
//! what keeps solved tables in the same shape the source computations use:
//! family parameters may be inverted, deformation parameters may not.

use crate::poly::{PolyElement, PolyError, PolyRing};
use std::fmt;

#[derive(Debug, Clone)]
pub enum SolveError {
    NonLinear { equation: usize, unknown: String },
    DenominatorInUnknown { equation: usize, unknown: String },
    Inconsistent { witness: String },
    Poly(PolyError),
}

impl fmt::Display for SolveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SolveError::NonLinear { equation, unknown } => write!(
                f,
                "equation #{} is nonlinear in unknown '{}'",
                equation, unknown
            ),
            SolveError::DenominatorInUnknown { equation, unknown } => write!(
                f,
                "equation #{} has a denominator involving unknown '{}'",
                equation, unknown
            ),
            SolveError::Inconsistent { witness } => {
                write!(f, "inconsistent system: {} = 0 is unsatisfiable", witness)
            }
            SolveError::Poly(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for SolveError {}

impl From<PolyError> for SolveError {
    fn from(e: PolyError) -> Self {
        SolveError::Poly(e)
    }
}

/// The system M*u = c extracted from equations "eq = 0", i.e. eq = M*u - c.
pub struct LinearSystem {
    pub matrix: Vec<Vec<PolyElement>>,
    pub rhs: Vec<PolyElement>,
}

/// Splits each equation (a polynomial or rational function that must vanish)
/// into a row that is affine-linear in the chosen unknowns. Every equation
/// must have total degree <= 1 in the unknowns; anything else is an error
/// naming the offending equation and unknown.
pub fn linear_extract(
    eqs: &[PolyElement],
    unknowns: &[String],
    ring: &PolyRing,
) -> Result<LinearSystem, SolveError> {
    let idx_of: Vec<Option<usize>> = ring
        .params()
        .iter()
        .map(|p| unknowns.iter().position(|u| u == p))
        .collect();
    let mut matrix = Vec::with_capacity(eqs.len());
    let mut rhs = Vec::with_capacity(eqs.len());
    for (eq_no, eq) in eqs.iter().enumerate() {
        for (i, col) in idx_of.iter().enumerate() {
            if col.is_some() && eq.den().depends_on(i) {
                return Err(SolveError::DenominatorInUnknown {
                    equation: eq_no,
                    unknown: ring.params()[i].clone(),
                });
            }
        }
        let den_inv = PolyElement::new(
            crate::poly::MultiPoly::one(ring),
            eq.den().clone(),
        )?;
        let mut row_polys = vec![crate::poly::MultiPoly::zero(ring); unknowns.len()];
        let mut constant_poly = crate::poly::MultiPoly::zero(ring);
        for (mono, coeff) in eq.num().terms() {
            let mut unknown_col: Option<usize> = None;
            let mut rest = mono.clone();
            for (i, &e) in mono.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                if let Some(col) = idx_of[i] {
                    if e > 1 || unknown_col.is_some() {
                        return Err(SolveError::NonLinear {
                            equation: eq_no,
                            unknown: ring.params()[i].clone(),
                        });
                    }
                    unknown_col = Some(col);
                    rest.0[i] = 0;
                }
            }
            match unknown_col {
                Some(col) => row_polys[col].add_term(rest, coeff.clone()),
                None => constant_poly.add_term(rest, coeff.clone()),
            }
        }
        matrix.push(
            row_polys
                .into_iter()
                .map(|p| PolyElement::from_poly(p).mul(&den_inv))
                .collect(),
        );
        rhs.push(PolyElement::from_poly(constant_poly).mul(&den_inv).neg());
    }
    Ok(LinearSystem { matrix, rhs })
}

/// Result of solving a stage: pivot assignments (fully back-substituted, in
/// unknown order), the unknowns left free, and residual side conditions among
/// free unknowns and parameters.
#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub assignments: Vec<(String, PolyElement)>,
    pub free: Vec<String>,
    pub side_conditions: Vec<PolyElement>,
}

/// Gauss-Jordan with unit-restricted pivoting; see the module docs.
/// `invertible` marks ring parameters that may be formally inverted.
pub fn solve_affine(
    sys: &LinearSystem,
    unknowns: &[String],
    ring: &PolyRing,
    invertible: &[String],
) -> Result<SolveOutcome, SolveError> {
    let ncols = unknowns.len();
    let allowed: Vec<bool> = ring
        .params()
        .iter()
        .map(|p| invertible.iter().any(|q| q == p))
        .collect();
    let mut rows: Vec<(Vec<PolyElement>, PolyElement)> = sys
        .matrix
        .iter()
        .cloned()
        .zip(sys.rhs.iter().cloned())
        .collect();
    let mut used = vec![false; rows.len()];
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; ncols];

    for col in 0..ncols {
        let pick = (0..rows.len()).find(|&r| {
            !used[r] && !rows[r].0[col].is_zero() && rows[r].0[col].depends_only_on(&allowed)
        });
        let r = match pick {
            Some(r) => r,
            None => continue,
        };
        used[r] = true;
        pivot_of_col[col] = Some(r);
        let inv = rows[r].0[col].inv()?;
        for c in 0..ncols {
            rows[r].0[c] = rows[r].0[c].mul(&inv);
        }
        rows[r].1 = rows[r].1.mul(&inv);
        let pivot_row = rows[r].clone();
        for (j, row) in rows.iter_mut().enumerate() {
            if j == r {
                continue;
            }
            let factor = row.0[col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..ncols {
                let sub = pivot_row.0[c].mul(&factor);
                row.0[c] = row.0[c].sub(&sub);
            }
            let sub = pivot_row.1.mul(&factor);
            row.1 = row.1.sub(&sub);
        }
    }

    let mut assignments = Vec::new();
    let free: Vec<String> = (0..ncols)
        .filter(|&c| pivot_of_col[c].is_none())
        .map(|c| unknowns[c].clone())
        .collect();
    for col in 0..ncols {
        if let Some(r) = pivot_of_col[col] {
            let mut expr = rows[r].1.clone();
            for c in 0..ncols {
                if c == col || rows[r].0[c].is_zero() {
                    continue;
                }
                let u = ring.param(&unknowns[c])?;
                expr = expr.sub(&rows[r].0[c].mul(&u));
            }
            assignments.push((unknowns[col].clone(), expr));
        }
    }

    let mut side_conditions = Vec::new();
    for (r, row) in rows.iter().enumerate() {
        if used[r] {
            continue;
        }
        let mut expr = row.1.neg();
        for c in 0..ncols {
            if row.0[c].is_zero() {
                continue;
            }
            let u = ring.param(&unknowns[c])?;
            expr = expr.add(&row.0[c].mul(&u));
        }
        if expr.is_zero() {
            continue;
        }
        if expr.depends_only_on(&allowed) {
            return Err(SolveError::Inconsistent {
                witness: expr.to_string(),
            });
        }
        side_conditions.push(expr.monic());
    }

    Ok(SolveOutcome {
        assignments,
        free,
        side_conditions,
    })
}
