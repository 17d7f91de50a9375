//! Multivariate polynomials and rational functions over a cyclotomic field,
//! in a declared ordered parameter list.
//!
//! Monomials are ordered by graded lex (total degree first, then exponent
//! vector lexicographically). A `PolyElement` is a reduced fraction with a
//! monic denominator, so equal values have identical representations.

use crate::scalar::{Field, FieldElement, Rat};
use num::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PolyError {
    DivisionByZero,
    RingMismatch,
    UnknownParameter(String),
    ZeroDenominatorAfterSubstitution,
}

impl fmt::Display for PolyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PolyError::DivisionByZero => write!(f, "division by zero polynomial"),
            PolyError::RingMismatch => write!(f, "polynomials belong to different rings"),
            PolyError::UnknownParameter(p) => write!(f, "unknown parameter '{}'", p),
            PolyError::ZeroDenominatorAfterSubstitution => {
                write!(f, "denominator vanishes after substitution")
            }
        }
    }
}

impl std::error::Error for PolyError {}

struct RingData {
    field: Field,
    params: Vec<String>,
}

/// A polynomial ring K[p_1, ..., p_m] with K a cyclotomic field.
#[derive(Clone)]
pub struct PolyRing(Arc<RingData>);

impl PartialEq for PolyRing {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.field == other.0.field && self.0.params == other.0.params)
    }
}

impl Eq for PolyRing {}

impl fmt::Debug for PolyRing {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}[{}]", self.0.field, self.0.params.join(", "))
    }
}

impl PolyRing {
    pub fn new(field: &Field, params: &[&str]) -> PolyRing {
        PolyRing(Arc::new(RingData {
            field: field.clone(),
            params: params.iter().map(|s| s.to_string()).collect(),
        }))
    }

    pub fn new_owned(field: &Field, params: Vec<String>) -> PolyRing {
        PolyRing(Arc::new(RingData {
            field: field.clone(),
            params,
        }))
    }

    /// A ring with no parameters (scalars only).
    pub fn scalars(field: &Field) -> PolyRing {
        PolyRing::new(field, &[])
    }

    pub fn field(&self) -> &Field {
        &self.0.field
    }

    pub fn params(&self) -> &[String] {
        &self.0.params
    }

    pub fn param_index(&self, name: &str) -> Option<usize> {
        self.0.params.iter().position(|p| p == name)
    }

    pub fn zero(&self) -> PolyElement {
        PolyElement {
            num: MultiPoly::zero(self),
            den: MultiPoly::one(self),
        }
    }

    pub fn one(&self) -> PolyElement {
        self.constant(self.0.field.one())
    }

    pub fn constant(&self, c: FieldElement) -> PolyElement {
        PolyElement {
            num: MultiPoly::constant(self, c),
            den: MultiPoly::one(self),
        }
    }

    pub fn from_int(&self, n: i64) -> PolyElement {
        self.constant(self.0.field.from_int(n))
    }

    pub fn param(&self, name: &str) -> Result<PolyElement, PolyError> {
        let idx = self
            .param_index(name)
            .ok_or_else(|| PolyError::UnknownParameter(name.to_string()))?;
        let mut exps = vec![0u16; self.0.params.len()];
        exps[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(Mono(exps), self.0.field.one());
        Ok(PolyElement {
            num: MultiPoly {
                ring: self.clone(),
                terms,
            },
            den: MultiPoly::one(self),
        })
    }
}

/// Exponent vector with graded-lex ordering.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Mono(pub Vec<u16>);

impl Mono {
    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    fn divides(&self, other: &Mono) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Mono) -> Mono {
        Mono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

impl Ord for Mono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// A multivariate polynomial with field coefficients; no zero terms stored.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiPoly {
    ring: PolyRing,
    terms: BTreeMap<Mono, FieldElement>,
}

impl MultiPoly {
    pub fn zero(ring: &PolyRing) -> MultiPoly {
        MultiPoly {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &PolyRing) -> MultiPoly {
        MultiPoly::constant(ring, ring.field().one())
    }

    pub fn constant(ring: &PolyRing, c: FieldElement) -> MultiPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Mono(vec![0; ring.params().len()]), c);
        }
        MultiPoly {
            ring: ring.clone(),
            terms,
        }
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &FieldElement)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_unit())
    }

    pub fn as_constant(&self) -> Option<FieldElement> {
        if self.terms.is_empty() {
            Some(self.ring.field().zero())
        } else if self.is_constant() {
            Some(self.terms.values().next().unwrap().clone())
        } else {
            None
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(|m| m.total_degree())
            .max()
            .unwrap_or(0)
    }

    pub fn leading(&self) -> Option<(&Mono, &FieldElement)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, mono: Mono, coeff: FieldElement) {
        if coeff.is_zero() {
            return;
        }
        match self.terms.entry(mono) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(coeff);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add(&coeff);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        assert!(self.ring == other.ring, "ring mismatch");
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        assert!(self.ring == other.ring, "ring mismatch");
        let mut out = MultiPoly::zero(&self.ring);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1.mul(c2));
            }
        }
        out
    }

    pub fn mul_scalar(&self, c: &FieldElement) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(&self.ring);
        }
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, x)| (m.clone(), x.mul(c)))
                .collect(),
        }
    }

    /// Exact division; returns None if `div` does not divide `self`.
    pub fn exact_div(&self, div: &MultiPoly) -> Option<MultiPoly> {
        assert!(!div.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(MultiPoly::zero(&self.ring));
        }
        if let Some(c) = div.as_constant() {
            let inv = c.inv().ok()?;
            return Some(self.mul_scalar(&inv));
        }
        let (dl_m, dl_c) = div.leading().unwrap();
        let dl_c_inv = dl_c.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = MultiPoly::zero(&self.ring);
        while let Some((lm, lc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !dl_m.divides(&lm) {
                return None;
            }
            let qm = lm.div(dl_m);
            let qc = lc.mul(&dl_c_inv);
            quot.add_term(qm.clone(), qc.clone());
            // rem -= (qc * x^qm) * div
            for (m, c) in &div.terms {
                rem.add_term(qm.mul(m), qc.mul(c).neg());
            }
        }
        Some(quot)
    }

    pub fn degree_in(&self, var: usize) -> u16 {
        self.terms.keys().map(|m| m.0[var]).max().unwrap_or(0)
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.0[var] > 0)
    }

    /// Coefficient of var^d, as a polynomial with exponent 0 in `var`.
    fn univar_coeff(&self, var: usize, d: u16) -> MultiPoly {
        let mut out = MultiPoly::zero(&self.ring);
        for (m, c) in &self.terms {
            if m.0[var] == d {
                let mut e = m.clone();
                e.0[var] = 0;
                out.add_term(e, c.clone());
            }
        }
        out
    }

    fn from_univar(ring: &PolyRing, var: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = MultiPoly::zero(ring);
        for (d, p) in coeffs.iter().enumerate() {
            for (m, c) in &p.terms {
                let mut e = m.clone();
                e.0[var] += d as u16;
                out.add_term(e, c.clone());
            }
        }
        out
    }

    /// Divides by the leading coefficient, making the polynomial monic.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => self.mul_scalar(&c.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Scalar content: positive rational c with self/c having coprime integer
    /// coordinates across all coefficients (used to keep numbers small).
    fn rational_content(&self) -> Rat {
        use num::BigInt;
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            for q in c.coeffs() {
                if q.is_zero() {
                    continue;
                }
                num_gcd = num::integer::gcd(num_gcd.clone(), q.numer().abs());
                den_lcm = num::integer::lcm(den_lcm.clone(), q.denom().clone());
            }
        }
        if num_gcd.is_zero() {
            Rat::one()
        } else {
            Rat::new(num_gcd, den_lcm)
        }
    }

    fn div_rat(&self, q: &Rat) -> MultiPoly {
        let inv = q.recip();
        MultiPoly {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.mul_rat(&inv)))
                .collect(),
        }
    }
}

/// Multivariate gcd by primitive PRS on the first shared variable,
/// normalized monic. Over a field every nonzero constant divides everything,
/// so constant gcd is 1.
pub fn poly_gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    if a.is_constant() || b.is_constant() {
        return MultiPoly::one(a.ring());
    }
    let nvars = a.ring().params().len();
    let var = (0..nvars).find(|&v| a.depends_on(v) && b.depends_on(v));
    let var = match var {
        Some(v) => v,
        None => return MultiPoly::one(a.ring()),
    };
    let (cont_a, prim_a) = univar_content_prim(a, var);
    let (cont_b, prim_b) = univar_content_prim(b, var);
    let cont_g = poly_gcd(&cont_a, &cont_b);
    let mut r0 = prim_a;
    let mut r1 = prim_b;
    if r0.degree_in(var) < r1.degree_in(var) {
        std::mem::swap(&mut r0, &mut r1);
    }
    loop {
        let r = pseudo_rem(&r0, &r1, var);
        if r.is_zero() {
            break;
        }
        let (_, prim) = univar_content_prim(&r, var);
        r0 = r1;
        r1 = prim;
        if r1.degree_in(var) == 0 {
            // common divisor in the main variable is trivial
            return cont_g.monic();
        }
    }
    let (_, prim) = univar_content_prim(&r1, var);
    cont_g.mul(&prim).monic()
}

fn univar_content_prim(p: &MultiPoly, var: usize) -> (MultiPoly, MultiPoly) {
    let d = p.degree_in(var);
    let mut cont = MultiPoly::zero(p.ring());
    let coeffs: Vec<MultiPoly> = (0..=d).map(|k| p.univar_coeff(var, k)).collect();
    for c in &coeffs {
        if !c.is_zero() {
            cont = poly_gcd(&cont, c);
        }
    }
    let prim = p.exact_div(&cont).expect("content divides");
    (cont, prim)
}

/// Pseudo-remainder of a by b in `var` (up to content, which the primitive
/// PRS strips anyway).
fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, var: usize) -> MultiPoly {
    let da = a.degree_in(var) as usize;
    let db = b.degree_in(var) as usize;
    assert!(db >= 1 && db <= da);
    let b_coeffs: Vec<MultiPoly> = (0..=db).map(|k| b.univar_coeff(var, k as u16)).collect();
    let lc_b = b_coeffs[db].clone();
    let mut rem: Vec<MultiPoly> = (0..=da).map(|k| a.univar_coeff(var, k as u16)).collect();
    for k in (db..=da).rev() {
        let lead = rem[k].clone();
        if lead.is_zero() {
            continue;
        }
        for c in rem.iter_mut() {
            *c = c.mul(&lc_b);
        }
        // cancel position k by subtracting lead * x^(k-db) * b
        for (j, bc) in b_coeffs.iter().enumerate() {
            let sub = lead.mul(bc);
            rem[k - db + j] = rem[k - db + j].sub(&sub);
        }
        debug_assert!(rem[k].is_zero());
    }
    let mut out = MultiPoly::from_univar(a.ring(), var, &rem[..db]);
    let c = out.rational_content();
    if !c.is_one() {
        out = out.div_rat(&c);
    }
    out
}

/// A rational function num/den in fully reduced canonical form:
/// gcd(num, den) = 1 and den is monic (so polynomials have den = 1).
#[derive(Clone, PartialEq, Eq)]
pub struct PolyElement {
    num: MultiPoly,
    den: MultiPoly,
}

impl PolyElement {
    pub fn from_poly(num: MultiPoly) -> PolyElement {
        let ring = num.ring().clone();
        PolyElement {
            num,
            den: MultiPoly::one(&ring),
        }
    }

    pub fn new(num: MultiPoly, den: MultiPoly) -> Result<PolyElement, PolyError> {
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(num.ring().zero());
        }
        let g = poly_gcd(&num, &den);
        let (mut n, mut d) = if g.is_constant() {
            (num, den)
        } else {
            (
                num.exact_div(&g).expect("gcd divides numerator"),
                den.exact_div(&g).expect("gcd divides denominator"),
            )
        };
        // monic denominator
        let lc = d.leading().unwrap().1.clone();
        if !lc.is_one() {
            let inv = lc.inv().expect("nonzero");
            n = n.mul_scalar(&inv);
            d = d.mul_scalar(&inv);
        }
        Ok(PolyElement { num: n, den: d })
    }

    pub fn ring(&self) -> &PolyRing {
        self.num.ring()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.as_constant().map(|c| c.is_one()).unwrap_or(false)
            && self.num.as_constant().map(|c| c.is_one()).unwrap_or(false)
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<FieldElement> {
        if self.den.as_constant().map(|c| c.is_one()).unwrap_or(false) {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn add(&self, other: &PolyElement) -> PolyElement {
        let num = self
            .num
            .mul(&other.den)
            .add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        PolyElement::new(num, den).expect("nonzero denominator")
    }

    pub fn sub(&self, other: &PolyElement) -> PolyElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> PolyElement {
        PolyElement {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &PolyElement) -> PolyElement {
        if self.is_zero() || other.is_zero() {
            return self.ring().zero();
        }
        PolyElement::new(self.num.mul(&other.num), self.den.mul(&other.den))
            .expect("nonzero denominator")
    }

    pub fn mul_scalar(&self, c: &FieldElement) -> PolyElement {
        if c.is_zero() {
            return self.ring().zero();
        }
        PolyElement {
            num: self.num.mul_scalar(c),
            den: self.den.clone(),
        }
    }

    pub fn div(&self, other: &PolyElement) -> Result<PolyElement, PolyError> {
        if other.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        PolyElement::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn inv(&self) -> Result<PolyElement, PolyError> {
        self.ring().one().div(self)
    }

    pub fn pow(&self, e: u32) -> PolyElement {
        let mut acc = self.ring().one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// True if numerator and denominator involve only parameters in `allowed`
    /// (given by index).
    pub fn depends_only_on(&self, allowed: &[bool]) -> bool {
        let check = |p: &MultiPoly| {
            p.terms
                .keys()
                .all(|m| m.0.iter().enumerate().all(|(i, &e)| e == 0 || allowed[i]))
        };
        check(&self.num) && check(&self.den)
    }

    pub fn depends_on_param(&self, var: usize) -> bool {
        self.num.depends_on(var) || self.den.depends_on(var)
    }

    /// Exact substitution of parameters by rational functions. Bound
    /// parameters are a subset of the ring's parameters; unbound ones stay.
    pub fn substitute(
        &self,
        bindings: &BTreeMap<String, PolyElement>,
    ) -> Result<PolyElement, PolyError> {
        let ring = self.ring().clone();
        let mut by_index: Vec<Option<&PolyElement>> = vec![None; ring.params().len()];
        for (name, val) in bindings {
            let idx = ring
                .param_index(name)
                .ok_or_else(|| PolyError::UnknownParameter(name.clone()))?;
            if val.ring() != &ring {
                return Err(PolyError::RingMismatch);
            }
            by_index[idx] = Some(val);
        }
        let eval = |p: &MultiPoly| -> PolyElement {
            let mut acc = ring.zero();
            for (m, c) in &p.terms {
                let mut term = ring.constant(c.clone());
                let mut kept = vec![0u16; ring.params().len()];
                for (i, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    match by_index[i] {
                        Some(v) => term = term.mul(&v.pow(e as u32)),
                        None => kept[i] = e,
                    }
                }
                if kept.iter().any(|&e| e > 0) {
                    let mut mono_poly = MultiPoly::zero(&ring);
                    mono_poly.add_term(Mono(kept), ring.field().one());
                    term = term.mul(&PolyElement::from_poly(mono_poly));
                }
                acc = acc.add(&term);
            }
            acc
        };
        let num_val = eval(&self.num);
        let den_val = eval(&self.den);
        if den_val.is_zero() {
            return Err(PolyError::ZeroDenominatorAfterSubstitution);
        }
        num_val.div(&den_val)
    }

    /// Monic-normalized copy: leading numerator coefficient 1. Canonical
    /// representative of the line through this element, used when comparing
    /// derived equations against expected ones.
    pub fn monic(&self) -> PolyElement {
        match self.num.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.inv().expect("nonzero leading coefficient");
                PolyElement {
                    num: self.num.mul_scalar(&inv),
                    den: self.den.clone(),
                }
            }
        }
    }
}

fn fmt_mono(ring: &PolyRing, m: &Mono, out: &mut String) {
    for (i, &e) in m.0.iter().enumerate() {
        if e == 0 {
            continue;
        }
        if !out.is_empty() {
            out.push('*');
        }
        out.push_str(&ring.params()[i]);
        if e > 1 {
            out.push_str(&format!("^{}", e));
        }
    }
}

fn fmt_multipoly(p: &MultiPoly, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if p.is_zero() {
        return write!(f, "0");
    }
    // descending monomial order: leading term first
    let mut first = true;
    for (m, c) in p.terms.iter().rev() {
        let mut mono_str = String::new();
        fmt_mono(p.ring(), m, &mut mono_str);
        let coeff_str = c.to_string();
        let (neg, coeff_mag) = match coeff_str.strip_prefix('-') {
            // safe only for single-term scalars; multi-term ones parenthesize
            Some(rest) if !coeff_str.contains(" + ") && !coeff_str.contains(" - ") => {
                (true, rest.to_string())
            }
            _ => (false, coeff_str),
        };
        if first {
            if neg {
                write!(f, "-")?;
            }
            first = false;
        } else if neg {
            write!(f, " - ")?;
        } else {
            write!(f, " + ")?;
        }
        let scalar_is_trivial = coeff_mag == "1";
        let needs_paren = coeff_mag.contains(' ');
        if mono_str.is_empty() {
            if needs_paren {
                write!(f, "({})", coeff_mag)?;
            } else {
                write!(f, "{}", coeff_mag)?;
            }
        } else if scalar_is_trivial {
            write!(f, "{}", mono_str)?;
        } else if needs_paren {
            write!(f, "({})*{}", coeff_mag, mono_str)?;
        } else {
            write!(f, "{}*{}", coeff_mag, mono_str)?;
        }
    }
    Ok(())
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_multipoly(self, f)
    }
}

impl fmt::Display for PolyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_polynomial() {
            fmt_multipoly(&self.num, f)
        } else {
            if self.num.terms.len() > 1 {
                write!(f, "({})", self.num)?;
            } else {
                write!(f, "{}", self.num)?;
            }
            write!(f, " / ({})", self.den)
        }
    }
}

impl fmt::Debug for PolyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn ring3() -> PolyRing {
        PolyRing::new(&Field::cyclotomic(3), &["beta", "gamma"])
    }

    #[test]
    fn product_of_sum_and_difference() {
        let r = ring3();
        let b = r.param("beta").unwrap();
        let g = r.param("gamma").unwrap();
        let lhs = b.add(&g).mul(&b.sub(&g));
        let rhs = b.mul(&b).sub(&g.mul(&g));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn scalar_denominators_normalize_away() {
        // gamma * (zeta/(1+zeta)) = -gamma*zeta^2 in Q(zeta_3)
        let r = ring3();
        let k = r.field().clone();
        let g = r.param("gamma").unwrap();
        let z = r.constant(k.zeta());
        let one_plus_z = r.one().add(&z);
        let val = g.mul(&z).div(&one_plus_z).unwrap();
        let z2 = r.constant(k.zeta().mul(&k.zeta()));
        let expected = g.mul(&z2).neg();
        assert_eq!(val, expected);
        // multiply-back oracle: (1+zeta) * (-gamma*zeta^2) = gamma*zeta
        assert_eq!(one_plus_z.mul(&expected), g.mul(&z));
    }

    #[test]
    fn substitution_examples() {
        let r = ring3();
        let b = r.param("beta").unwrap();
        let g = r.param("gamma").unwrap();
        let p = b.mul(&g).add(&g.mul(&g));
        let mut bind = BTreeMap::new();
        bind.insert("beta".to_string(), r.zero());
        assert_eq!(p.substitute(&bind).unwrap(), g.mul(&g));

        let mut bind2 = BTreeMap::new();
        bind2.insert("beta".to_string(), r.zero());
        assert_eq!(b.mul(&b).substitute(&bind2).unwrap(), r.zero());
    }

    #[test]
    fn gcd_reduces_fractions() {
        let r = PolyRing::new(&Field::rational(), &["a"]);
        let a = r.param("a").unwrap();
        let one = r.one();
        // (a^2 - 1)/(a - 1) = a + 1
        let num = a.mul(&a).sub(&one);
        let den = a.sub(&one);
        let q = num.div(&den).unwrap();
        assert_eq!(q, a.add(&one));
        assert!(q.is_polynomial());
    }

    #[test]
    fn division_by_zero_polynomial() {
        let r = ring3();
        let b = r.param("beta").unwrap();
        assert!(matches!(b.div(&r.zero()), Err(PolyError::DivisionByZero)));
    }

    #[test]
    fn display_is_deterministic() {
        let r = ring3();
        let k = r.field().clone();
        let b = r.param("beta").unwrap();
        let g = r.param("gamma").unwrap();
        let e = b.mul(&g).mul_scalar(&k.from_rat(rat(-1, 2))).add(&g.pow(2));
        assert_eq!(e.to_string(), "-1/2*beta*gamma + gamma^2");
    }
}
