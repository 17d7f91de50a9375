//! Exact scalars: elements of cyclotomic fields Q(zeta_n).
//!
//! Elements are coefficient vectors of length phi(n) in the power basis
//! 1, zeta, ..., zeta^(phi(n)-1), reduced modulo the n-th cyclotomic
//! polynomial. n = 1 gives plain Q. All arithmetic is exact; equality is
//! coefficient-vector equality.

use num::{BigInt, BigRational, One, Signed, Zero};
use std::fmt;
use std::sync::Arc;

pub type Rat = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_int(n: i64) -> Rat {
    Rat::from(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScalarError {
    DivisionByZero,
    FieldMismatch,
}

impl fmt::Display for ScalarError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarError::DivisionByZero => write!(f, "division by zero"),
            ScalarError::FieldMismatch => write!(f, "elements belong to different fields"),
        }
    }
}

impl std::error::Error for ScalarError {}

pub fn euler_phi(n: u32) -> u32 {
    let mut m = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result = result / p * (p - 1);
        }
        p += 1;
    }
    if m > 1 {
        result = result / m * (m - 1);
    }
    result
}

/// Exact division of integer polynomials (ascending coefficients), assuming
/// the division is exact and the divisor is monic up to sign of its leading
/// coefficient (true for products of cyclotomic polynomials).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(rem.len() > dd, "degree mismatch in exact division");
    let lead = den[dd].clone();
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / &lead;
        if !(&c * &lead - &rem[k + dd]).is_zero() {
            panic!("non-exact polynomial division");
        }
        quot[k] = c.clone();
        for (i, dc) in den.iter().enumerate() {
            let v = &rem[k + i] - &c * dc;
            rem[k + i] = v;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "nonzero remainder");
    quot
}

/// The n-th cyclotomic polynomial, coefficients ascending, monic, exact.
pub fn cyclotomic_polynomial(n: u32) -> Vec<BigInt> {
    assert!(n >= 1);
    // Phi_n = (x^n - 1) / prod_{d | n, d < n} Phi_d, built bottom-up.
    let mut table: Vec<Vec<BigInt>> = Vec::with_capacity(n as usize + 1);
    table.push(Vec::new()); // index 0 unused
    for m in 1..=n {
        let mut num = vec![BigInt::zero(); m as usize + 1];
        num[0] = BigInt::from(-1);
        num[m as usize] = BigInt::one();
        let mut acc = num;
        for d in 1..m {
            if m % d == 0 {
                acc = int_poly_div_exact(&acc, &table[d as usize]);
            }
        }
        table.push(acc);
    }
    table.pop().unwrap()
}

struct FieldData {
    conductor: u32,
    symbol: String,
    phi: usize,
    /// minpoly coefficients as rationals, ascending, monic of degree phi
    minpoly: Vec<Rat>,
    /// rewrite[k] = coefficients of x^(phi+k) in the power basis
    rewrite: Vec<Vec<Rat>>,
}

/// A cyclotomic field Q(zeta_n), shared by handle. Conductor 1 is Q.
#[derive(Clone)]
pub struct Field(Arc<FieldData>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.0.conductor == other.0.conductor
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(zeta_{})", self.0.conductor)
    }
}

impl Field {
    pub fn cyclotomic(n: u32) -> Field {
        Field::with_symbol(n, "z")
    }

    pub fn rational() -> Field {
        Field::cyclotomic(1)
    }

    pub fn with_symbol(n: u32, symbol: &str) -> Field {
        assert!(n >= 1, "conductor must be >= 1");
        let phi = euler_phi(n) as usize;
        let mp: Vec<Rat> = cyclotomic_polynomial(n)
            .into_iter()
            .map(Rat::from)
            .collect();
        // x^phi = -(mp[0] + mp[1] x + ... + mp[phi-1] x^(phi-1)), then shift.
        let mut rewrite: Vec<Vec<Rat>> = Vec::with_capacity(phi.max(1));
        let base: Vec<Rat> = (0..phi).map(|i| -mp[i].clone()).collect();
        rewrite.push(base);
        for k in 1..phi.max(1) {
            let prev = rewrite[k - 1].clone();
            // multiply by x and reduce the overflowing top coefficient
            let mut next = vec![Rat::zero(); phi];
            for i in 0..phi.saturating_sub(1) {
                next[i + 1] = prev[i].clone();
            }
            if phi > 0 {
                let top = prev[phi - 1].clone();
                if !top.is_zero() {
                    for i in 0..phi {
                        let add = &top * &rewrite[0][i];
                        next[i] += add;
                    }
                }
            }
            rewrite.push(next);
        }
        Field(Arc::new(FieldData {
            conductor: n,
            symbol: symbol.to_string(),
            phi,
            minpoly: mp,
            rewrite,
        }))
    }

    pub fn conductor(&self) -> u32 {
        self.0.conductor
    }

    pub fn degree(&self) -> usize {
        self.0.phi
    }

    pub fn symbol(&self) -> &str {
        &self.0.symbol
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            field: self.clone(),
            coeffs: vec![Rat::zero(); self.0.phi],
        }
    }

    pub fn one(&self) -> FieldElement {
        self.from_rat(Rat::one())
    }

    pub fn from_rat(&self, q: Rat) -> FieldElement {
        let mut coeffs = vec![Rat::zero(); self.0.phi];
        coeffs[0] = q;
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        self.from_rat(rat_int(n))
    }

    /// The generator zeta_n (for n = 1 this is 1, for n = 2 it is -1).
    pub fn zeta(&self) -> FieldElement {
        let mut coeffs = vec![Rat::zero(); self.0.phi];
        if self.0.phi >= 2 {
            coeffs[1] = Rat::one();
        } else {
            // phi = 1: zeta is a rational root of the minimal polynomial
            coeffs[0] = -self.0.minpoly[0].clone();
        }
        FieldElement {
            field: self.clone(),
            coeffs,
        }
    }

    /// zeta^k for any integer k >= 0.
    pub fn zeta_pow(&self, k: u32) -> FieldElement {
        let mut acc = self.one();
        let z = self.zeta();
        for _ in 0..(k % self.0.conductor) {
            acc = acc.mul(&z);
        }
        acc
    }

    /// Reduce a raw coefficient vector of length <= 2*phi-1 into the power basis.
    fn reduce(&self, raw: Vec<Rat>) -> Vec<Rat> {
        let phi = self.0.phi;
        let mut out = vec![Rat::zero(); phi];
        for (i, c) in raw.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if i < phi {
                out[i] += c;
            } else {
                let row = &self.0.rewrite[i - phi];
                for j in 0..phi {
                    if !row[j].is_zero() {
                        let add = &c * &row[j];
                        out[j] += add;
                    }
                }
            }
        }
        out
    }
}

/// An element of a cyclotomic field in canonical reduced form.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    field: Field,
    coeffs: Vec<Rat>,
}

impl FieldElement {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn from_coeffs(field: &Field, coeffs: Vec<Rat>) -> FieldElement {
        assert_eq!(coeffs.len(), field.degree());
        FieldElement {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(|c| c.is_zero())
    }

    /// Returns the value as a rational if it lies in Q.
    pub fn as_rat(&self) -> Option<Rat> {
        if self.coeffs[1..].iter().all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    fn assert_same_field(&self, other: &FieldElement) {
        assert!(
            self.field == other.field,
            "field mismatch: Q(zeta_{}) vs Q(zeta_{})",
            self.field.conductor(),
            other.field.conductor()
        );
    }

    pub fn add(&self, other: &FieldElement) -> FieldElement {
        self.assert_same_field(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn sub(&self, other: &FieldElement) -> FieldElement {
        self.assert_same_field(other);
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        FieldElement {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn neg(&self) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn mul(&self, other: &FieldElement) -> FieldElement {
        self.assert_same_field(other);
        let phi = self.field.degree();
        let mut raw = vec![Rat::zero(); 2 * phi - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let add = a * b;
                raw[i + j] += add;
            }
        }
        FieldElement {
            field: self.field.clone(),
            coeffs: self.field.reduce(raw),
        }
    }

    pub fn mul_rat(&self, q: &Rat) -> FieldElement {
        FieldElement {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|a| a * q).collect(),
        }
    }

    pub fn inv(&self) -> Result<FieldElement, ScalarError> {
        if self.is_zero() {
            return Err(ScalarError::DivisionByZero);
        }
        // Extended Euclid in Q[x] against the minimal polynomial.
        let phi = self.field.degree();
        if phi == 1 {
            return Ok(self.field.from_rat(self.coeffs[0].recip()));
        }
        let minpoly = self.field.0.minpoly.clone();
        let a = self.coeffs.clone();
        let (g, s) = egcd_poly(&a, &minpoly);
        // g is a nonzero constant since the minimal polynomial is irreducible
        let g0 = g[0].clone();
        assert!(
            g.iter().skip(1).all(|c| c.is_zero()) && !g0.is_zero(),
            "gcd with irreducible minimal polynomial must be a nonzero constant"
        );
        let mut coeffs = vec![Rat::zero(); phi];
        for (i, c) in s.iter().enumerate() {
            if i < phi {
                coeffs[i] = c / &g0;
            }
        }
        // s may have degree >= phi in corner cases; reduce to be safe
        let mut raw = vec![Rat::zero(); 2 * phi - 1];
        for (i, c) in coeffs.iter().enumerate() {
            raw[i] = c.clone();
        }
        Ok(FieldElement {
            field: self.field.clone(),
            coeffs: self.field.reduce(raw),
        })
    }

    pub fn div(&self, other: &FieldElement) -> Result<FieldElement, ScalarError> {
        Ok(self.mul(&other.inv()?))
    }
}

fn poly_trim(p: &mut Vec<Rat>) {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_deg(p: &[Rat]) -> usize {
    let mut d = p.len();
    while d > 1 && p[d - 1].is_zero() {
        d -= 1;
    }
    d - 1
}

fn poly_is_zero(p: &[Rat]) -> bool {
    p.iter().all(|c| c.is_zero())
}

/// Extended gcd of univariate rational polynomials: returns (g, s) with
/// s*a = g modulo b (only the Bezout coefficient of `a` is tracked).
fn egcd_poly(a: &[Rat], b: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    poly_trim(&mut r0);
    poly_trim(&mut r1);
    let mut s0 = vec![Rat::one()];
    let mut s1 = vec![Rat::zero()];
    while !poly_is_zero(&r1) {
        let (q, r) = poly_divmod(&r0, &r1);
        let s = poly_sub(&s0, &poly_mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    (r0, s0)
}

fn poly_divmod(num: &[Rat], den: &[Rat]) -> (Vec<Rat>, Vec<Rat>) {
    let dd = poly_deg(den);
    let lead = den[dd].clone();
    let mut rem = num.to_vec();
    poly_trim(&mut rem);
    if poly_deg(&rem) < dd && !(dd == 0) {
        return (vec![Rat::zero()], rem);
    }
    let qlen = poly_deg(&rem).saturating_sub(dd) + 1;
    let mut quot = vec![Rat::zero(); qlen];
    while !poly_is_zero(&rem) && poly_deg(&rem) >= dd {
        let rd = poly_deg(&rem);
        let c = &rem[rd] / &lead;
        let shift = rd - dd;
        quot[shift] = c.clone();
        for i in 0..=dd {
            let v = &rem[shift + i] - &c * &den[i];
            rem[shift + i] = v;
        }
        poly_trim(&mut rem);
        if rd == 0 {
            break;
        }
    }
    (quot, rem)
}

fn poly_mul(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let mut out = vec![Rat::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            let add = x * y;
            out[i + j] += add;
        }
    }
    poly_trim(&mut out);
    out
}

fn poly_sub(a: &[Rat], b: &[Rat]) -> Vec<Rat> {
    let n = a.len().max(b.len());
    let mut out = vec![Rat::zero(); n];
    for (i, x) in a.iter().enumerate() {
        out[i] += x;
    }
    for (i, y) in b.iter().enumerate() {
        out[i] -= y;
    }
    poly_trim(&mut out);
    out
}

fn fmt_rat(q: &Rat) -> String {
    if q.denom().is_one() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let sym = self.field.symbol();
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            let sign_neg = c.is_negative();
            if first {
                if sign_neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if sign_neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{}", fmt_rat(&mag))?;
            } else {
                if !mag.is_one() {
                    write!(f, "{}*", fmt_rat(&mag))?;
                }
                if i == 1 {
                    write!(f, "{}", sym)?;
                } else {
                    write!(f, "{}^{}", sym, i)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_polynomials_small() {
        let as_i64 = |v: Vec<BigInt>| -> Vec<i64> {
            v.into_iter().map(|c| i64::try_from(c).unwrap()).collect()
        };
        assert_eq!(as_i64(cyclotomic_polynomial(1)), vec![-1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(2)), vec![1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(3)), vec![1, 1, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(4)), vec![1, 0, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(8)), vec![1, 0, 0, 0, 1]);
        assert_eq!(as_i64(cyclotomic_polynomial(12)), vec![1, 0, -1, 0, 1]);
    }

    #[test]
    fn phi_values() {
        assert_eq!(euler_phi(1), 1);
        assert_eq!(euler_phi(3), 2);
        assert_eq!(euler_phi(8), 4);
        assert_eq!(euler_phi(12), 4);
    }

    #[test]
    fn zeta3_minimal_polynomial_vanishes() {
        // zeta^2 + zeta + 1 = 0 in Q(zeta_3)
        let k = Field::cyclotomic(3);
        let z = k.zeta();
        let v = z.mul(&z).add(&z).add(&k.one());
        assert!(v.is_zero());
    }

    #[test]
    fn zeta8_minimal_polynomial_vanishes() {
        // zeta^4 + 1 = 0 in Q(zeta_8)
        let k = Field::cyclotomic(8);
        let z = k.zeta();
        let z4 = z.mul(&z).mul(&z).mul(&z);
        assert!(z4.add(&k.one()).is_zero());
    }

    #[test]
    fn zeta_n_is_an_nth_root_of_unity() {
        for n in [1u32, 3, 4, 8, 5, 12] {
            let k = Field::cyclotomic(n);
            assert!(k.zeta_pow(n).is_one(), "zeta_{}^{} != 1", n, n);
        }
    }

    #[test]
    fn inverse_of_one_plus_zeta3() {
        // 1/(1+zeta) = -zeta in Q(zeta_3)
        let k = Field::cyclotomic(3);
        let z = k.zeta();
        let v = k.one().div(&k.one().add(&z)).unwrap();
        assert_eq!(v, z.neg());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        let k = Field::cyclotomic(3);
        assert_eq!(k.one().div(&k.zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn display_forms() {
        let k = Field::cyclotomic(8);
        let e = k.from_rat(rat(1, 2)).add(&k.zeta_pow(2).mul_rat(&rat(3, 2)));
        assert_eq!(e.to_string(), "1/2 + 3/2*z^2");
        assert_eq!(k.zero().to_string(), "0");
        assert_eq!(k.zeta().neg().to_string(), "-z");
    }
}
