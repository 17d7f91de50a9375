//! The Yoneda algebra B of an N-homogeneous algebra, with the deformed
//! A-infinity structure attached to a PBW-deformation, and exhaustive
//! checking of the two reduced axioms on bounded-degree bases.
//!
//! B is re-graded from the dual algebra T(W)/(S), S = R^perp:
//! B_{2p} = dual degree Np, B_{2p+1} = dual degree Np+1. The differential d
//! (even to odd) is seeded on degree N as the dual of [1, alpha_1] and
//! extended as a derivation; the products m_p are seeded on linear arguments
//! as sign-adjusted duals of the alpha maps and extended through the second
//! axiom by splitting the last letter off the last non-linear argument.
//! Values are computed on canonical representatives throughout, so the
//! checker stays meaningful on inputs that break the PBW conditions.

use crate::linmap::bracket;
use crate::pbw::{check_j1, DeformationData, PbwError};
use crate::poly::{PolyElement, PolyRing};
use crate::scalar::{Field, FieldElement};
use crate::subspace::Subspace;
use crate::word::{GradedPiece, TensorError, TensorElement};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug)]
pub enum YonedaError {
    NonAugmented,
    J1Violated,
    DegreeOutOfRange(usize),
    Tensor(TensorError),
    Pbw(PbwError),
}

impl fmt::Display for YonedaError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            YonedaError::NonAugmented => write!(
                f,
                "the A-infinity correspondence requires an augmented deformation (alpha_N = 0)"
            ),
            YonedaError::J1Violated => {
                write!(f, "J1 fails, so the seeded differential does not descend")
            }
            YonedaError::DegreeOutOfRange(d) => {
                write!(f, "degree {} beyond the built bound", d)
            }
            YonedaError::Tensor(e) => write!(f, "{}", e),
            YonedaError::Pbw(e) => write!(f, "{}", e),
        }
    }
}

impl std::error::Error for YonedaError {}

impl From<TensorError> for YonedaError {
    fn from(e: TensorError) -> Self {
        YonedaError::Tensor(e)
    }
}

impl From<PbwError> for YonedaError {
    fn from(e: PbwError) -> Self {
        YonedaError::Pbw(e)
    }
}

/// sigma(p) for 0 <= p <= N as stated in the source: sigma(N) = 1,
/// sigma(N-1) = (-1)^(N-1), sigma(p-2) = -sigma(p).
pub fn sign_table(n: usize) -> Vec<i64> {
    assert!(n >= 2);
    let mut sigma = vec![0i64; n + 1];
    sigma[n] = 1;
    sigma[n - 1] = if (n - 1) % 2 == 0 { 1 } else { -1 };
    for p in (0..n.saturating_sub(1)).rev() {
        sigma[p] = -sigma[p + 2];
    }
    sigma
}

/// The sign table the axioms actually pin down once d is the plain dual of
/// [1, alpha_1] and m_N is the plain product. Pairing both sides of the
/// first axiom against the syzygy space gives
/// sigma(N-p-1) = (-1)^p sigma(N-p) for 1 <= p <= N-2 and
/// sigma(1) = (-1)^(N-1), equivalently the anchored recurrence below; it
/// satisfies sigma(p-2) = -sigma(p) but anchors sigma(N-1) at
/// (-1)^(N(N-1)/2) instead of (-1)^(N-1). The two tables agree for N = 2
/// and differ from N = 3 on, where the stated anchor would flip exactly the
/// p = N-1 axiom instances relative to the unsigned duals; the structure is
/// built with this consistent table.
pub fn structure_sign_table(n: usize) -> Vec<i64> {
    assert!(n >= 2);
    let mut sigma = vec![0i64; n + 1];
    sigma[n - 1] = if (n * (n - 1) / 2) % 2 == 0 { 1 } else { -1 };
    for q in (0..n - 1).rev() {
        let flip = (n - q - 1) % 2 == 1;
        sigma[q] = if flip { -sigma[q + 1] } else { sigma[q + 1] };
    }
    // sigma(N) never scales anything (m_N is the plain product); fill it so
    // the two-step recurrence stays intact
    sigma[n] = -sigma[n - 2];
    sigma
}

/// Graded data of the dual algebra A^! = T(W)/(S) up to a degree bound:
/// relation subspaces and canonical (echelon-complement) quotient bases for
/// every degree congruent to 0 or 1 mod N.
pub struct YonedaAlgebra {
    v: usize,
    n: usize,
    bound: usize,
    s_space: Subspace,
    rel: BTreeMap<usize, Subspace>,
    basis_words: BTreeMap<usize, Vec<u64>>,
}

impl YonedaAlgebra {
    pub fn build(
        r_space: &Subspace,
        field: &Field,
        bound: usize,
    ) -> Result<YonedaAlgebra, YonedaError> {
        let v = r_space.piece().v();
        let n = r_space.piece().degree();
        let s_space = crate::exterior::perp_space(r_space);
        let mut rel = BTreeMap::new();
        let mut basis_words = BTreeMap::new();
        // once a graded piece of A^! vanishes, all higher ones do (the
        // algebra is generated in degree 1), so those relation spaces are
        // the full pieces and need no echelonization
        let mut first_zero: Option<usize> = None;
        for d in 0..=bound {
            if d % n > 1 && d != n + 1 {
                continue;
            }
            let piece = GradedPiece::new(v, d)?;
            let sub = if d < n {
                Subspace::empty(piece, field)
            } else if first_zero.map(|z| d >= z).unwrap_or(false) {
                Subspace::full(piece, field)
            } else {
                let mut acc = Subspace::empty(piece, field);
                for i in 0..=d - n {
                    acc = acc.sum(&s_space.tensor(i, d - n - i)?)?;
                }
                acc
            };
            if sub.dim() as u64 == piece.dim() && first_zero.is_none() {
                first_zero = Some(d);
            }
            basis_words.insert(d, sub.complement_words());
            rel.insert(d, sub);
        }
        Ok(YonedaAlgebra {
            v,
            n,
            bound,
            s_space,
            rel,
            basis_words,
        })
    }

    pub fn v(&self) -> usize {
        self.v
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn bound(&self) -> usize {
        self.bound
    }

    pub fn s_space(&self) -> &Subspace {
        &self.s_space
    }

    /// Internal degree of B_k: n(2q) = Nq, n(2q+1) = Nq + 1.
    pub fn b_degree(&self, k: usize) -> usize {
        let q = k / 2;
        if k % 2 == 0 {
            self.n * q
        } else {
            self.n * q + 1
        }
    }

    /// dim (A^!)_d for a built degree.
    pub fn dual_dim(&self, d: usize) -> usize {
        self.basis_words.get(&d).map(|w| w.len()).unwrap_or(0)
    }

    pub fn dim_b(&self, k: usize) -> usize {
        self.dual_dim(self.b_degree(k))
    }

    pub fn basis(&self, d: usize) -> &[u64] {
        self.basis_words
            .get(&d)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn relations_at(&self, d: usize) -> Option<&Subspace> {
        self.rel.get(&d)
    }

    fn piece(&self, d: usize) -> GradedPiece {
        GradedPiece::new(self.v, d).expect("piece within bound")
    }

    /// Canonical class coordinates of a word-level element.
    pub fn reduce_to_class(&self, elt: &TensorElement) -> Result<Vec<PolyElement>, YonedaError> {
        let d = elt.piece().degree();
        let rel = self
            .rel
            .get(&d)
            .ok_or(YonedaError::DegreeOutOfRange(d))?;
        let (_, rem) = rel.reduce_poly(elt);
        let words = self.basis(d);
        let mut coords = vec![elt.ring().zero(); words.len()];
        for (idx, c) in rem.iter() {
            let pos = words.binary_search(idx).expect("residual on basis words");
            coords[pos] = c.clone();
        }
        Ok(coords)
    }

    /// Canonical representative combo of a class.
    pub fn class_elt(
        &self,
        d: usize,
        coords: &[PolyElement],
        ring: &PolyRing,
    ) -> TensorElement {
        let mut out = TensorElement::zero(self.piece(d), ring);
        for (pos, c) in coords.iter().enumerate() {
            out.add_term(self.basis(d)[pos], c.clone());
        }
        out
    }
}

/// Class-level element: a degree and coordinates on the canonical basis.
pub type ClassElt = (usize, Vec<PolyElement>);

fn word_concat_index(_p1: GradedPiece, i1: u64, p2: GradedPiece, i2: u64) -> u64 {
    i1 * p2.dim() + i2
}

/// Dense inverse over the field (small matrices only).
fn invert_dense(mat: &[Vec<FieldElement>], field: &Field) -> Option<Vec<Vec<FieldElement>>> {
    let n = mat.len();
    let mut a: Vec<Vec<FieldElement>> = mat.to_vec();
    let mut inv: Vec<Vec<FieldElement>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { field.one() } else { field.zero() })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].inv().ok()?;
        for j in 0..n {
            a[col][j] = a[col][j].mul(&p);
            inv[col][j] = inv[col][j].mul(&p);
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let s = a[col][j].mul(&f);
                a[r][j] = a[r][j].sub(&s);
                let s = inv[col][j].mul(&f);
                inv[r][j] = inv[r][j].sub(&s);
            }
        }
    }
    Some(inv)
}

/// The deformed A-infinity structure: seeded differential and products, with
/// recursive extension to non-linear arguments.
pub struct AInfStructure {
    yon: YonedaAlgebra,
    ring: PolyRing,
    n: usize,
    sigma: Vec<i64>,
    /// m_lin[p] for 1 <= p <= N-1: per word of W^p, class coords in B_2
    m_lin: BTreeMap<usize, Vec<Vec<PolyElement>>>,
    /// seed of d on W^N words: class coords in B_3
    d_seed: Vec<Vec<PolyElement>>,
}

impl AInfStructure {
    /// Builds the structure from a deformation datum. `verify_j1` enforces
    /// the descent precondition; disable it only to probe broken inputs.
    pub fn build(
        data: &DeformationData,
        bound: usize,
        verify_j1: bool,
    ) -> Result<AInfStructure, YonedaError> {
        if !data.is_augmented() {
            return Err(YonedaError::NonAugmented);
        }
        let n = data.n();
        let v = data.v();
        let field = data.field().clone();
        let ring = data.ring().clone();
        let yon = YonedaAlgebra::build(data.r_space(), &field, bound + n)?;
        let overlap = data.overlap_space()?;
        let j1 = check_j1(data, &overlap)?;
        if verify_j1 && !j1.pass {
            return Err(YonedaError::J1Violated);
        }
        let sigma = structure_sign_table(n);

        // pairing inverse for B_2 = W^N / S against the echelon basis of R
        let b2_words = yon.basis(n).to_vec();
        let p_mat: Vec<Vec<FieldElement>> = data
            .r_space()
            .rows()
            .iter()
            .map(|r| {
                b2_words
                    .iter()
                    .map(|w| {
                        r.binary_search_by_key(w, |e| e.0)
                            .map(|pos| r[pos].1.clone())
                            .unwrap_or_else(|_| field.zero())
                    })
                    .collect()
            })
            .collect();
        let p_inv = invert_dense(&p_mat, &field).expect("nondegenerate pairing R x B_2");

        // pairing inverse for B_3 against the overlap basis
        let b3_words = yon.basis(n + 1).to_vec();
        let q_mat: Vec<Vec<FieldElement>> = overlap
            .rows()
            .iter()
            .map(|r| {
                b3_words
                    .iter()
                    .map(|w| {
                        r.binary_search_by_key(w, |e| e.0)
                            .map(|pos| r[pos].1.clone())
                            .unwrap_or_else(|_| field.zero())
                    })
                    .collect()
            })
            .collect();
        let q_inv = invert_dense(&q_mat, &field).expect("nondegenerate pairing overlap x B_3");

        // m_p on linear arguments: sigma(N-p) * dual of alpha_{N-p}
        let mut m_lin = BTreeMap::new();
        for p in 1..n {
            let a = data.alpha(n - p);
            let wp = GradedPiece::new(v, p)?;
            let mut table = Vec::with_capacity(wp.dim() as usize);
            for u in 0..wp.dim() {
                // t_k = <u, alpha_{N-p}(r_k)>
                let t: Vec<PolyElement> = (0..data.r_space().dim())
                    .map(|k| {
                        a.row(k)
                            .binary_search_by_key(&u, |e| e.0)
                            .map(|pos| a.row(k)[pos].1.clone())
                            .unwrap_or_else(|_| ring.zero())
                    })
                    .collect();
                let mut coords = vec![ring.zero(); b2_words.len()];
                for (pos, c) in coords.iter_mut().enumerate() {
                    let mut acc = ring.zero();
                    for (k, tk) in t.iter().enumerate() {
                        if tk.is_zero() {
                            continue;
                        }
                        acc = acc.add(&tk.mul(&ring.constant(p_inv[pos][k].clone())));
                    }
                    let s = sigma[n - p];
                    *c = if s < 0 { acc.neg() } else { acc };
                }
                table.push(coords);
            }
            m_lin.insert(p, table);
        }

        // d seed on W^N words: dual of [1, alpha_1] on the overlap
        let br = bracket(data.alpha(1), &overlap)?;
        let wn = GradedPiece::new(v, n)?;
        let mut d_seed = Vec::with_capacity(wn.dim() as usize);
        for u in 0..wn.dim() {
            let t: Vec<PolyElement> = (0..overlap.dim())
                .map(|j| {
                    br.row(j)
                        .binary_search_by_key(&u, |e| e.0)
                        .map(|pos| br.row(j)[pos].1.clone())
                        .unwrap_or_else(|_| ring.zero())
                })
                .collect();
            let mut coords = vec![ring.zero(); b3_words.len()];
            for (pos, c) in coords.iter_mut().enumerate() {
                let mut acc = ring.zero();
                for (j, tj) in t.iter().enumerate() {
                    if tj.is_zero() {
                        continue;
                    }
                    acc = acc.add(&tj.mul(&ring.constant(q_inv[pos][j].clone())));
                }
                *c = acc;
            }
            d_seed.push(coords);
        }

        Ok(AInfStructure {
            yon,
            ring,
            n,
            sigma,
            m_lin,
            d_seed,
        })
    }

    pub fn yoneda(&self) -> &YonedaAlgebra {
        &self.yon
    }

    pub fn ring(&self) -> &PolyRing {
        &self.ring
    }

    pub fn sigma(&self, p: usize) -> i64 {
        self.sigma[p]
    }

    pub fn m_linear_table(&self, p: usize) -> Option<&Vec<Vec<PolyElement>>> {
        self.m_lin.get(&p)
    }

    pub fn zero_class(&self, d: usize) -> ClassElt {
        (d, vec![self.ring.zero(); self.yon.dual_dim(d)])
    }

    fn class_add(&self, a: &mut ClassElt, b: &ClassElt, scale: &PolyElement) {
        assert_eq!(a.0, b.0, "class degrees must agree");
        for (x, y) in a.1.iter_mut().zip(&b.1) {
            *x = x.add(&y.mul(scale));
        }
    }

    pub fn class_is_zero(c: &ClassElt) -> bool {
        c.1.iter().all(|x| x.is_zero())
    }

    /// Word-level single-letter element.
    fn letter_elt(&self, c: u8) -> TensorElement {
        let mut t = TensorElement::zero(self.yon.piece(1), &self.ring);
        t.add_term(c as u64, self.ring.one());
        t
    }

    fn basis_elt(&self, d: usize, pos: usize) -> TensorElement {
        let mut t = TensorElement::zero(self.yon.piece(d), &self.ring);
        t.add_term(self.yon.basis(d)[pos], self.ring.one());
        t
    }

    fn concat(&self, a: &TensorElement, b: &TensorElement) -> TensorElement {
        let pa = a.piece();
        let pb = b.piece();
        let out_piece = self.yon.piece(pa.degree() + pb.degree());
        let mut out = TensorElement::zero(out_piece, &self.ring);
        for (&i, c) in a.iter() {
            for (&j, x) in b.iter() {
                out.add_term(word_concat_index(pa, i, pb, j), c.mul(x));
            }
        }
        out
    }

    fn reduce(&self, elt: &TensorElement) -> Result<ClassElt, YonedaError> {
        Ok((elt.piece().degree(), self.yon.reduce_to_class(elt)?))
    }

    fn class_combo(&self, c: &ClassElt) -> TensorElement {
        self.yon.class_elt(c.0, &c.1, &self.ring)
    }

    /// Canonical representative after reduction, as a word combo.
    fn canonicalize(&self, elt: &TensorElement) -> Result<TensorElement, YonedaError> {
        let c = self.reduce(elt)?;
        Ok(self.class_combo(&c))
    }

    /// The derivation d on an even word (degree Nq), giving a class in the
    /// next odd degree.
    fn d_word(&self, word: &[u8]) -> Result<ClassElt, YonedaError> {
        let deg = word.len();
        debug_assert_eq!(deg % self.n, 0);
        let q = deg / self.n;
        let out_deg = deg + 1;
        let mut acc = self.zero_class(out_deg);
        let wn = self.yon.piece(self.n);
        for b in 0..q {
            let mid = &word[self.n * b..self.n * (b + 1)];
            let seed = &self.d_seed[wn.word_to_index(mid) as usize];
            if seed.iter().all(|c| c.is_zero()) {
                continue;
            }
            // prefix . (seed rep) . suffix
            let mut combo = TensorElement::zero(self.yon.piece(out_deg), &self.ring);
            for (pos, c) in seed.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let repw = self
                    .yon
                    .piece(self.n + 1)
                    .index_to_word(self.yon.basis(self.n + 1)[pos]);
                let mut full = Vec::with_capacity(out_deg);
                full.extend_from_slice(&word[..self.n * b]);
                full.extend_from_slice(&repw);
                full.extend_from_slice(&word[self.n * (b + 1)..]);
                combo.add_term(self.yon.piece(out_deg).word_to_index(&full), c.clone());
            }
            let cls = self.reduce(&combo)?;
            self.class_add(&mut acc, &cls, &self.ring.one());
        }
        Ok(acc)
    }

    /// d applied to an even word-level element.
    pub fn d_elt(&self, elt: &TensorElement) -> Result<ClassElt, YonedaError> {
        let out_deg = elt.piece().degree() + 1;
        let mut acc = self.zero_class(out_deg);
        let piece = elt.piece();
        for (&i, c) in elt.iter() {
            let w = piece.index_to_word(i);
            let dv = self.d_word(&w)?;
            self.class_add(&mut acc, &dv, c);
        }
        Ok(acc)
    }

    /// d applied to an even class.
    pub fn d_class(&self, c: &ClassElt) -> Result<ClassElt, YonedaError> {
        self.d_elt(&self.class_combo(c))
    }

    /// Left/right multiplication of a class by a word-level element.
    fn mult_left(&self, a: &TensorElement, b: &ClassElt) -> Result<ClassElt, YonedaError> {
        let combo = self.concat(a, &self.class_combo(b));
        self.reduce(&combo)
    }

    fn mult_right(&self, a: &ClassElt, b: &TensorElement) -> Result<ClassElt, YonedaError> {
        let combo = self.concat(&self.class_combo(a), b);
        self.reduce(&combo)
    }

    /// m_p on word-level odd arguments; the result is an even class of
    /// degree (total degree) + N - p.
    pub fn eval_m(&self, p: usize, args: &[TensorElement]) -> Result<ClassElt, YonedaError> {
        assert_eq!(args.len(), p.max(0));
        let total: usize = args.iter().map(|a| a.piece().degree()).sum();
        let out_deg = (total + self.n).checked_sub(p).expect("degree in range");
        if p == 0 || p > self.n {
            return Ok(self.zero_class(out_deg));
        }
        if args.iter().any(|a| a.is_zero()) {
            return Ok(self.zero_class(out_deg));
        }
        if args.iter().all(|a| a.piece().degree() == 1) {
            if p == self.n {
                // ordinary product of N letters
                let mut combo = args[0].clone();
                for a in &args[1..] {
                    combo = self.concat(&combo, a);
                }
                return self.reduce(&combo);
            }
            // multilinear lookup in the seeded table
            let table = &self.m_lin[&p];
            let wp = self.yon.piece(p);
            let mut acc = self.zero_class(out_deg);
            let mut stack: Vec<(usize, u64, PolyElement)> = vec![(0, 0, self.ring.one())];
            while let Some((k, idx, coeff)) = stack.pop() {
                if k == p {
                    let coords = &table[idx as usize];
                    let cls = (out_deg, coords.clone());
                    self.class_add(&mut acc, &cls, &coeff);
                    continue;
                }
                for (&i, c) in args[k].iter() {
                    stack.push((k + 1, idx * wp.v() as u64 + i, coeff.mul(c)));
                }
            }
            return Ok(acc);
        }
        // split the last letter off the last non-linear argument
        let i = args
            .iter()
            .rposition(|a| a.piece().degree() > 1)
            .expect("non-linear argument exists");
        let mut acc = self.zero_class(out_deg);
        let piece_i = args[i].piece();
        for (&widx, coeff) in args[i].iter() {
            let w = piece_i.index_to_word(widx);
            let (prefix, last) = w.split_at(w.len() - 1);
            let ell = self.letter_elt(last[0]);
            let mut prefix_elt =
                TensorElement::zero(self.yon.piece(prefix.len()), &self.ring);
            prefix_elt.add_term(
                self.yon.piece(prefix.len()).word_to_index(prefix),
                self.ring.one(),
            );
            // term 1
            let term1 = if i == 0 {
                let u_class = self.reduce(&prefix_elt)?;
                let mut inner_args: Vec<TensorElement> = Vec::with_capacity(p);
                inner_args.push(ell.clone());
                inner_args.extend_from_slice(&args[1..]);
                let inner = self.eval_m(p, &inner_args)?;
                self.mult_left(&self.class_combo(&u_class), &inner)?
            } else {
                let merged = self.canonicalize(&self.concat(&args[i - 1], &prefix_elt))?;
                let mut new_args: Vec<TensorElement> = args[..i - 1].to_vec();
                new_args.push(merged);
                new_args.push(ell.clone());
                new_args.extend_from_slice(&args[i + 1..]);
                self.eval_m(p, &new_args)?
            };
            // term 2: (-1)^(p+1) m_{p+1}(..., a_{i-1}, d(u), ell, ...)
            let du = self.d_word(prefix)?;
            let du_elt = self.class_combo(&du);
            let mut args2: Vec<TensorElement> = args[..i].to_vec();
            args2.push(du_elt);
            args2.push(ell);
            args2.extend_from_slice(&args[i + 1..]);
            let term2 = self.eval_m(p + 1, &args2)?;
            let s2 = if (p + 1) % 2 == 0 {
                self.ring.one()
            } else {
                self.ring.from_int(-1)
            };
            self.class_add(&mut acc, &term1, coeff);
            self.class_add(&mut acc, &term2, &s2.mul(coeff));
        }
        Ok(acc)
    }

    /// Odd internal degrees with nonzero pieces, up to `limit`.
    pub fn odd_degrees(&self, limit: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut d = 1;
        while d <= limit {
            if self.yon.dual_dim(d) > 0 {
                out.push(d);
            }
            d += self.n;
        }
        out
    }

    pub fn even_degrees(&self, limit: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut d = self.n;
        while d <= limit {
            if self.yon.dual_dim(d) > 0 {
                out.push(d);
            }
            d += self.n;
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct AxiomFailure {
    pub p: usize,
    pub instance: String,
    pub residual: String,
}

#[derive(Debug, Clone)]
pub struct AxiomReport {
    pub checked: usize,
    pub failures: Vec<AxiomFailure>,
}

impl AxiomReport {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

fn tuples_within(
    degrees: &[usize],
    dims: &BTreeMap<usize, usize>,
    len: usize,
    budget: usize,
) -> Vec<Vec<(usize, usize)>> {
    // all length-`len` tuples of (degree, basis position) with total degree
    // within budget
    let mut out = Vec::new();
    let mut cur: Vec<(usize, usize)> = Vec::new();
    fn rec(
        degrees: &[usize],
        dims: &BTreeMap<usize, usize>,
        len: usize,
        budget: usize,
        cur: &mut Vec<(usize, usize)>,
        out: &mut Vec<Vec<(usize, usize)>>,
    ) {
        if cur.len() == len {
            out.push(cur.clone());
            return;
        }
        let remaining = len - cur.len();
        for &d in degrees {
            if d * remaining > budget {
                continue;
            }
            for pos in 0..dims[&d] {
                cur.push((d, pos));
                rec(degrees, dims, len, budget - d, cur, out);
                cur.pop();
            }
        }
    }
    rec(degrees, dims, len, budget, &mut cur, &mut out);
    out
}

impl AInfStructure {
    fn odd_dims(&self, limit: usize) -> BTreeMap<usize, usize> {
        self.odd_degrees(limit)
            .into_iter()
            .map(|d| (d, self.yon.dual_dim(d)))
            .collect()
    }

    /// First reduced axiom: d(m_{p+1}(a_0..a_p)) = (-1)^p (a_0 m_p(a_1..a_p)
    /// - m_p(a_0..a_{p-1}) a_p) on all odd basis tuples within the degree
    /// budget, for 0 <= p <= N-1. `linear_only` restricts to B_1 arguments.
    pub fn check_axiom_1(
        &self,
        budget: usize,
        linear_only: bool,
    ) -> Result<AxiomReport, YonedaError> {
        let mut checked = 0;
        let mut failures = Vec::new();
        let degrees: Vec<usize> = if linear_only {
            vec![1]
        } else {
            self.odd_degrees(budget)
        };
        let dims = {
            let mut m = BTreeMap::new();
            for &d in &degrees {
                m.insert(d, self.yon.dual_dim(d));
            }
            m
        };
        for p in 0..self.n {
            for tuple in tuples_within(&degrees, &dims, p + 1, budget) {
                let args: Vec<TensorElement> = tuple
                    .iter()
                    .map(|&(d, pos)| self.basis_elt(d, pos))
                    .collect();
                let m_val = self.eval_m(p + 1, &args)?;
                let lhs = self.d_class(&m_val)?;
                let mut rhs = self.zero_class(lhs.0);
                if p >= 1 {
                    let left_inner = self.eval_m(p, &args[1..])?;
                    let left = self.mult_left(&args[0], &left_inner)?;
                    let right_inner = self.eval_m(p, &args[..p])?;
                    let right = self.mult_right(&right_inner, &args[p])?;
                    let sign = if p % 2 == 0 {
                        self.ring.one()
                    } else {
                        self.ring.from_int(-1)
                    };
                    self.class_add(&mut rhs, &left, &sign);
                    self.class_add(&mut rhs, &right, &sign.neg());
                }
                let mut diff = lhs;
                self.class_add(&mut diff, &rhs, &self.ring.from_int(-1));
                checked += 1;
                if !Self::class_is_zero(&diff) {
                    failures.push(AxiomFailure {
                        p,
                        instance: format!("{:?}", tuple),
                        residual: diff
                            .1
                            .iter()
                            .map(|c| c.to_string())
                            .collect::<Vec<_>>()
                            .join(", "),
                    });
                }
            }
        }
        Ok(AxiomReport { checked, failures })
    }

    /// Per-p verdicts of axiom 1 on linear tuples only (the dictionary of
    /// the correspondence theorem: p < N-1 pairs with J2, p = N-1 with J1).
    pub fn axiom1_linear_verdicts(&self) -> Result<Vec<(usize, bool)>, YonedaError> {
        let mut out = Vec::new();
        for p in 0..self.n {
            let mut ok = true;
            let letters: Vec<u8> = (0..self.yon.v() as u8).collect();
            let mut tuple = vec![0u8; p + 1];
            loop {
                let args: Vec<TensorElement> =
                    tuple.iter().map(|&c| self.letter_elt(c)).collect();
                let m_val = self.eval_m(p + 1, &args)?;
                let lhs = self.d_class(&m_val)?;
                let mut rhs = self.zero_class(lhs.0);
                if p >= 1 {
                    let left_inner = self.eval_m(p, &args[1..])?;
                    let left = self.mult_left(&args[0], &left_inner)?;
                    let right_inner = self.eval_m(p, &args[..p])?;
                    let right = self.mult_right(&right_inner, &args[p])?;
                    let sign = if p % 2 == 0 {
                        self.ring.one()
                    } else {
                        self.ring.from_int(-1)
                    };
                    self.class_add(&mut rhs, &left, &sign);
                    self.class_add(&mut rhs, &right, &sign.neg());
                }
                let mut diff = lhs;
                self.class_add(&mut diff, &rhs, &self.ring.from_int(-1));
                if !Self::class_is_zero(&diff) {
                    ok = false;
                    break;
                }
                // next tuple
                let mut k = tuple.len();
                let mut done = true;
                while k > 0 {
                    k -= 1;
                    if (tuple[k] as usize) + 1 < letters.len() {
                        tuple[k] += 1;
                        for j in k + 1..tuple.len() {
                            tuple[j] = 0;
                        }
                        done = false;
                        break;
                    }
                }
                if done {
                    break;
                }
            }
            out.push((p, ok));
        }
        Ok(out)
    }

    /// Second reduced axiom, all insertion positions including the boundary
    /// conventions, on basis tuples within the degree budget.
    pub fn check_axiom_2(&self, budget: usize) -> Result<AxiomReport, YonedaError> {
        let mut checked = 0;
        let mut failures = Vec::new();
        let odd_degrees = self.odd_degrees(budget);
        let odd_dims = self.odd_dims(budget);
        let even_degrees = self.even_degrees(budget);
        for p in 1..=self.n {
            for &ud in &even_degrees {
                for upos in 0..self.yon.dual_dim(ud) {
                    let u = self.basis_elt(ud, upos);
                    let du = self.d_elt(&u)?;
                    let du_elt = self.class_combo(&du);
                    if ud * 1 + p > budget {
                        continue;
                    }
                    for tuple in tuples_within(&odd_degrees, &odd_dims, p, budget - ud) {
                        let args: Vec<TensorElement> = tuple
                            .iter()
                            .map(|&(d, pos)| self.basis_elt(d, pos))
                            .collect();
                        for i in 1..=p + 1 {
                            let lhs;
                            let mid;
                            let t3;
                            if i == 1 {
                                let mut a1 = args.clone();
                                a1[0] = self.canonicalize(&self.concat(&u, &args[0]))?;
                                lhs = self.eval_m(p, &a1)?;
                                let inner = self.eval_m(p, &args)?;
                                mid = self.mult_left(&u, &inner)?;
                                let mut a3 = Vec::with_capacity(p + 1);
                                a3.push(du_elt.clone());
                                a3.extend_from_slice(&args);
                                t3 = self.eval_m(p + 1, &a3)?;
                            } else if i == p + 1 {
                                let inner = self.eval_m(p, &args)?;
                                lhs = self.mult_right(&inner, &u)?;
                                let mut a1 = args.clone();
                                let last = a1.len() - 1;
                                a1[last] = self.canonicalize(&self.concat(&args[last], &u))?;
                                mid = self.eval_m(p, &a1)?;
                                let mut a3 = args.clone();
                                a3.push(du_elt.clone());
                                t3 = self.eval_m(p + 1, &a3)?;
                            } else {
                                let mut a1 = args.clone();
                                a1[i - 1] = self.canonicalize(&self.concat(&u, &args[i - 1]))?;
                                lhs = self.eval_m(p, &a1)?;
                                let mut a2 = args.clone();
                                a2[i - 2] = self.canonicalize(&self.concat(&args[i - 2], &u))?;
                                mid = self.eval_m(p, &a2)?;
                                let mut a3: Vec<TensorElement> = args[..i - 1].to_vec();
                                a3.push(du_elt.clone());
                                a3.extend_from_slice(&args[i - 1..]);
                                t3 = self.eval_m(p + 1, &a3)?;
                            }
                            let sign = if (p + 1) % 2 == 0 {
                                self.ring.one()
                            } else {
                                self.ring.from_int(-1)
                            };
                            let mut diff = lhs;
                            self.class_add(&mut diff, &mid, &self.ring.from_int(-1));
                            self.class_add(&mut diff, &t3, &sign.neg());
                            checked += 1;
                            if !Self::class_is_zero(&diff) {
                                failures.push(AxiomFailure {
                                    p,
                                    instance: format!(
                                        "u=({},{}), args={:?}, i={}",
                                        ud, upos, tuple, i
                                    ),
                                    residual: diff
                                        .1
                                        .iter()
                                        .map(|c| c.to_string())
                                        .collect::<Vec<_>>()
                                        .join(", "),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(AxiomReport { checked, failures })
    }

    /// Well-definedness probe: the linear extension of each m_p must kill
    /// the relation subspace in its last argument (one relation row at a
    /// time, other arguments fixed linear).
    pub fn descent_check(&self, budget: usize) -> Result<AxiomReport, YonedaError> {
        let mut checked = 0;
        let mut failures = Vec::new();
        for p in 2..=self.n {
            for d in self.odd_degrees(budget).into_iter().filter(|&d| d > 1) {
                if d + (p - 1) > budget {
                    continue;
                }
                let rel = match self.yon.relations_at(d) {
                    Some(r) => r,
                    None => continue,
                };
                for row in rel.rows() {
                    let mut elt = TensorElement::zero(self.yon.piece(d), &self.ring);
                    for (idx, c) in row {
                        elt.add_term(*idx, self.ring.constant(c.clone()));
                    }
                    let mut args: Vec<TensorElement> = Vec::with_capacity(p);
                    for _ in 0..p - 1 {
                        args.push(self.letter_elt(0));
                    }
                    args.push(elt);
                    let val = self.eval_m(p, &args)?;
                    checked += 1;
                    if !Self::class_is_zero(&val) {
                        failures.push(AxiomFailure {
                            p,
                            instance: format!("relation in degree {}", d),
                            residual: val
                                .1
                                .iter()
                                .map(|c| c.to_string())
                                .collect::<Vec<_>>()
                                .join(", "),
                        });
                    }
                }
            }
        }
        Ok(AxiomReport { checked, failures })
    }

    /// Recovers the alpha maps from the linear product tables:
    /// alpha_p = sigma(p) (m_{N-p})^*. Returns the per-p sparse matrices in
    /// the same convention as DeformationData::alpha.
    pub fn roundtrip_alpha(
        &self,
        data: &DeformationData,
    ) -> Result<bool, YonedaError> {
        for p in 1..self.n {
            let alpha_deg = self.n - p; // recovered alpha_{N-p} from m_p
            let a = data.alpha(alpha_deg);
            let table = &self.m_lin[&p];
            let wp = self.yon.piece(p);
            for k in 0..data.r_space().dim() {
                for u in 0..wp.dim() {
                    // pairing <m_p(u), r_k> over the basis words
                    let coords = &table[u as usize];
                    let mut acc = self.ring.zero();
                    for (pos, c) in coords.iter().enumerate() {
                        if c.is_zero() {
                            continue;
                        }
                        let w = self.yon.basis(self.n)[pos];
                        let rv = data.r_space().rows()[k]
                            .binary_search_by_key(&w, |e| e.0)
                            .map(|q| data.r_space().rows()[k][q].1.clone());
                        if let Ok(rc) = rv {
                            acc = acc.add(&c.mul(&self.ring.constant(rc)));
                        }
                    }
                    let s = self.sigma[alpha_deg];
                    let recovered = if s < 0 { acc.neg() } else { acc };
                    let expected = a
                        .row(k)
                        .binary_search_by_key(&u, |e| e.0)
                        .map(|q| a.row(k)[q].1.clone())
                        .unwrap_or_else(|_| self.ring.zero());
                    if recovered != expected {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sign_tables_match_recurrence() {
        assert_eq!(sign_table(3), vec![-1, -1, 1, 1]);
        assert_eq!(sign_table(2), vec![-1, -1, 1]);
        assert_eq!(sign_table(4), vec![1, 1, -1, -1, 1]);
    }
}
