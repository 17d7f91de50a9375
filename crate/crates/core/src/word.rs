//! Graded tensor pieces V^(tensor d), their word bases, and sparse tensor
//! elements with polynomial coefficients.
//!
//! Words over the basis x_1 < x_2 < ... < x_v are enumerated in lexicographic
//! order; the word index is the base-v value with the first letter most
//! significant, so index order equals lex order.

use crate::poly::{PolyElement, PolyRing};
use crate::scalar::FieldElement;
use std::collections::BTreeMap;
use std::fmt;

/// Refuse pieces with more basis words than this.
pub const SIZE_GUARD: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TensorError {
    PieceTooLarge { v: usize, degree: usize },
    MixedHomes,
    SymbolicCoefficient(String),
    BadWord(String),
    ShapeMismatch(String),
}

impl fmt::Display for TensorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TensorError::PieceTooLarge { v, degree } => {
                write!(f, "piece with {}^{} words exceeds the size guard", v, degree)
            }
            TensorError::MixedHomes => write!(f, "tensor elements live in different pieces"),
            TensorError::SymbolicCoefficient(w) => {
                write!(f, "coefficient of word '{}' is not numeric", w)
            }
            TensorError::BadWord(w) => write!(f, "cannot parse word '{}'", w),
            TensorError::ShapeMismatch(m) => write!(f, "shape mismatch: {}", m),
        }
    }
}

impl std::error::Error for TensorError {}

/// The graded piece V^(tensor degree) for dim V = v.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GradedPiece {
    v: usize,
    degree: usize,
}

impl GradedPiece {
    pub fn new(v: usize, degree: usize) -> Result<GradedPiece, TensorError> {
        assert!(v >= 1, "dim V must be positive");
        let mut dim: u64 = 1;
        for _ in 0..degree {
            dim = dim.saturating_mul(v as u64);
            if dim > SIZE_GUARD {
                return Err(TensorError::PieceTooLarge { v, degree });
            }
        }
        Ok(GradedPiece { v, degree })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> u64 {
        (self.v as u64).pow(self.degree as u32)
    }

    pub fn index_to_word(&self, mut idx: u64) -> Vec<u8> {
        let mut word = vec![0u8; self.degree];
        for i in (0..self.degree).rev() {
            word[i] = (idx % self.v as u64) as u8;
            idx /= self.v as u64;
        }
        debug_assert_eq!(idx, 0);
        word
    }

    pub fn word_to_index(&self, word: &[u8]) -> u64 {
        assert_eq!(word.len(), self.degree);
        let mut idx = 0u64;
        for &c in word {
            debug_assert!((c as usize) < self.v);
            idx = idx * self.v as u64 + c as u64;
        }
        idx
    }

    /// Renders a word: letters x, y, z for v <= 3, else dotted x1.x2...
    /// The empty word (degree 0) renders as "1".
    pub fn word_string(&self, idx: u64) -> String {
        word_string(self.v, &self.index_to_word(idx))
    }

    pub fn parse_word(&self, s: &str) -> Result<u64, TensorError> {
        let w = parse_word(self.v, s)?;
        if w.len() != self.degree {
            return Err(TensorError::BadWord(s.to_string()));
        }
        Ok(self.word_to_index(&w))
    }
}

pub fn word_string(v: usize, word: &[u8]) -> String {
    if word.is_empty() {
        return "1".to_string();
    }
    if v <= 3 {
        word.iter()
            .map(|&c| ['x', 'y', 'z'][c as usize])
            .collect()
    } else {
        word.iter()
            .map(|&c| format!("x{}", c + 1))
            .collect::<Vec<_>>()
            .join(".")
    }
}

pub fn parse_word(v: usize, s: &str) -> Result<Vec<u8>, TensorError> {
    if s == "1" || s.is_empty() {
        return Ok(Vec::new());
    }
    let bad = || TensorError::BadWord(s.to_string());
    if s.contains('.') || (v > 3 && s.starts_with('x')) {
        let mut out = Vec::new();
        for part in s.split('.') {
            let rest = part.strip_prefix('x').ok_or_else(bad)?;
            let n: usize = rest.parse().map_err(|_| bad())?;
            if n < 1 || n > v {
                return Err(bad());
            }
            out.push((n - 1) as u8);
        }
        Ok(out)
    } else {
        let mut out = Vec::new();
        for c in s.chars() {
            let letter = match c {
                'x' => 0u8,
                'y' => 1,
                'z' => 2,
                _ => return Err(bad()),
            };
            if letter as usize >= v {
                return Err(bad());
            }
            out.push(letter);
        }
        Ok(out)
    }
}

/// A sparse element of one graded piece, with polynomial coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct TensorElement {
    piece: GradedPiece,
    ring: PolyRing,
    coeffs: BTreeMap<u64, PolyElement>,
}

impl TensorElement {
    pub fn zero(piece: GradedPiece, ring: &PolyRing) -> TensorElement {
        TensorElement {
            piece,
            ring: ring.clone(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn piece(&self) -> GradedPiece {
        self.piece
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn add_term(&mut self, idx: u64, coeff: PolyElement) {
        assert!(idx < self.piece.dim());
        if coeff.is_zero() {
            return;
        }
        match self.coeffs.entry(idx) {
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

    pub fn from_term_list(
        piece: GradedPiece,
        ring: &PolyRing,
        terms: &[(&str, PolyElement)],
    ) -> Result<TensorElement, TensorError> {
        let mut out = TensorElement::zero(piece, ring);
        for (w, c) in terms {
            out.add_term(piece.parse_word(w)?, c.clone());
        }
        Ok(out)
    }

    pub fn get(&self, idx: u64) -> PolyElement {
        self.coeffs
            .get(&idx)
            .cloned()
            .unwrap_or_else(|| self.ring.zero())
    }

    pub fn iter(&self) -> impl Iterator<Item = (&u64, &PolyElement)> {
        self.coeffs.iter()
    }

    pub fn support_len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &TensorElement) -> Result<TensorElement, TensorError> {
        if self.piece != other.piece {
            return Err(TensorError::MixedHomes);
        }
        let mut out = self.clone();
        for (&i, c) in &other.coeffs {
            out.add_term(i, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &TensorElement) -> Result<TensorElement, TensorError> {
        self.add(&other.scale(&self.ring.from_int(-1)))
    }

    pub fn scale(&self, c: &PolyElement) -> TensorElement {
        let mut out = TensorElement::zero(self.piece, &self.ring);
        for (&i, x) in &self.coeffs {
            out.add_term(i, x.mul(c));
        }
        out
    }

    /// Numeric coefficient view; error names the first symbolic word.
    pub fn constant_coeffs(&self) -> Result<Vec<(u64, FieldElement)>, TensorError> {
        let mut out = Vec::with_capacity(self.coeffs.len());
        for (&i, c) in &self.coeffs {
            match c.as_constant() {
                Some(v) => out.push((i, v)),
                None => {
                    return Err(TensorError::SymbolicCoefficient(
                        self.piece.word_string(i),
                    ))
                }
            }
        }
        Ok(out)
    }

    /// Serialized form: list of (word, coefficient) string pairs.
    pub fn to_pairs(&self) -> Vec<(String, String)> {
        self.coeffs
            .iter()
            .map(|(&i, c)| (self.piece.word_string(i), c.to_string()))
            .collect()
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&i, c) in &self.coeffs {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = c.to_string();
            if cs == "1" {
                write!(f, "{}", self.piece.word_string(i))?;
            } else if cs.contains(' ') || cs.contains('/') {
                write!(f, "({})*{}", cs, self.piece.word_string(i))?;
            } else {
                write!(f, "{}*{}", cs, self.piece.word_string(i))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Field;

    #[test]
    fn word_index_bijection_is_order_preserving() {
        let p = GradedPiece::new(3, 3).unwrap();
        assert_eq!(p.dim(), 27);
        let mut last = None;
        for i in 0..27 {
            let w = p.index_to_word(i);
            assert_eq!(p.word_to_index(&w), i);
            if let Some(prev) = last {
                let pw: Vec<u8> = p.index_to_word(prev);
                assert!(pw < w, "lex order must match index order");
            }
            last = Some(i);
        }
    }

    #[test]
    fn word_strings() {
        let p = GradedPiece::new(2, 3).unwrap();
        assert_eq!(p.word_string(p.parse_word("yyx").unwrap()), "yyx");
        let q = GradedPiece::new(5, 2).unwrap();
        let i = q.parse_word("x4.x1").unwrap();
        assert_eq!(q.word_string(i), "x4.x1");
        let unit = GradedPiece::new(2, 0).unwrap();
        assert_eq!(unit.word_string(0), "1");
        assert_eq!(unit.parse_word("1").unwrap(), 0);
    }

    #[test]
    fn size_guard_refuses_huge_pieces() {
        assert!(matches!(
            GradedPiece::new(10, 8),
            Err(TensorError::PieceTooLarge { .. })
        ));
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let p = GradedPiece::new(2, 2).unwrap();
        let ring = PolyRing::scalars(&Field::rational());
        let mut a = TensorElement::zero(p, &ring);
        a.add_term(1, ring.one());
        let b = a.clone();
        let d = a.sub(&b).unwrap();
        assert!(d.is_zero());
    }
}
