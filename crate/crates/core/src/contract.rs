//! Contraction machinery: left/right contractions, their alternized
//! versions, block transposition, the contraction operators c(l,m;n) with
//! their pairing adjoints, blockwise antisymmetrization, and mixed norms.
//!
//! Contracted slots are always a contiguous leading (left) or trailing
//! (right) block; every call site documents its block layout.

use crate::bits::{permutations, shuffle_sign, sort_tuple, tuples, Subset};
use crate::error::{Error, Result};
use crate::modespace::Ms;
use crate::scalar::Scalar;
use crate::wedge::{antisymmetrize, DenseTensor, WedgeTensor};
use std::collections::BTreeMap;

/// Element of (E^{⊗(l+m)})* identified with E^{⊗(l+m)}: tuple-indexed
/// coefficients plus a block split (left, right).
#[derive(Clone, Debug, PartialEq)]
pub struct BlockTensor<S: Scalar> {
    ms: Ms<S>,
    left: usize,
    right: usize,
    coeffs: BTreeMap<Vec<u8>, S>,
}

/// Canonical representative of the alt(l,m) class: antisymmetric separately
/// in the first l and last m slots, keyed by pairs of ascending subsets.
#[derive(Clone, Debug, PartialEq)]
pub struct AltBlockTensor<S: Scalar> {
    ms: Ms<S>,
    left: usize,
    right: usize,
    coeffs: BTreeMap<(Subset, Subset), S>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

impl<S: Scalar> BlockTensor<S> {
    pub fn zero(ms: &Ms<S>, left: usize, right: usize) -> Self {
        BlockTensor {
            ms: ms.clone(),
            left,
            right,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        ms: &Ms<S>,
        left: usize,
        right: usize,
        entries: Vec<(Vec<u8>, S)>,
    ) -> Result<Self> {
        let mut out = BlockTensor::zero(ms, left, right);
        for (t, v) in entries {
            if t.len() != left + right {
                return Err(Error::BlockMismatch(format!(
                    "key of length {} in a ({left},{right}) block tensor",
                    t.len()
                )));
            }
            for &m in &t {
                if m == 0 || m as usize > ms.dim() {
                    return Err(Error::ModeOutOfRange {
                        mode: m as usize,
                        dim: ms.dim(),
                    });
                }
            }
            out.insert(t, v);
        }
        Ok(out)
    }

    pub fn ms(&self) -> &Ms<S> {
        &self.ms
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn order(&self) -> usize {
        self.left + self.right
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, t: &[u8]) -> S {
        self.coeffs.get(t).cloned().unwrap_or_else(S::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Vec<u8>, &S)> {
        self.coeffs.iter()
    }

    pub fn insert(&mut self, t: Vec<u8>, v: S) {
        debug_assert_eq!(t.len(), self.order());
        if v.is_zero() {
            return;
        }
        let cur = self.coeffs.remove(&t).unwrap_or_else(S::zero) + v;
        if !cur.is_zero() {
            self.coeffs.insert(t, cur);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ms != other.ms || self.order() != other.order() {
            return Err(Error::BlockMismatch(
                "block tensor sum shape mismatch".into(),
            ));
        }
        let mut out = self.clone();
        for (t, v) in other.entries() {
            out.insert(t.clone(), v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return BlockTensor::zero(&self.ms, self.left, self.right);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(t, v)| (t.clone(), v.clone() * c.clone()))
            .collect();
        BlockTensor {
            ms: self.ms.clone(),
            left: self.left,
            right: self.right,
            coeffs,
        }
    }

    /// Reinterprets the block split without touching coefficients.
    pub fn resplit(&self, left: usize, right: usize) -> Result<Self> {
        if left + right != self.order() {
            return Err(Error::BlockMismatch(
                "resplit must preserve total order".into(),
            ));
        }
        Ok(BlockTensor {
            ms: self.ms.clone(),
            left,
            right,
            coeffs: self.coeffs.clone(),
        })
    }

    pub fn into_dense(self) -> DenseTensor<S> {
        let order = self.order();
        DenseTensor::from_entries(&self.ms, order, self.coeffs.into_iter().collect())
            .expect("valid by construction")
    }

    pub fn to_dense(&self) -> DenseTensor<S> {
        self.clone().into_dense()
    }

    pub fn from_dense(x: &DenseTensor<S>, left: usize, right: usize) -> Result<Self> {
        if left + right != x.degree() {
            return Err(Error::BlockMismatch(format!(
                "split ({left},{right}) does not match degree {}",
                x.degree()
            )));
        }
        let entries = x.entries().map(|(t, v)| (t.clone(), v.clone())).collect();
        BlockTensor::from_entries(x.ms(), left, right, entries)
    }

    /// Canonical bilinear pairing Σ_t x_t·y_t (requires equal total order).
    pub fn pair(&self, other: &Self) -> Result<S> {
        if self.ms != other.ms {
            return Err(Error::ModeSpaceMismatch);
        }
        if self.order() != other.order() {
            return Err(Error::BlockMismatch("pairing of different orders".into()));
        }
        let mut acc = S::zero();
        for (t, v) in &self.coeffs {
            if let Some(w) = other.coeffs.get(t) {
                acc = acc + v.clone() * w.clone();
            }
        }
        Ok(acc)
    }

    /// |F|²_{l,m;p,q} = Σ |F_{(i,j)}|²·|e(i)|_p²·|e(j)|_q² over the stored
    /// (left, right) split.
    pub fn mixed_norm_sq(&self, p: S::Exp, q: S::Exp) -> S {
        let mut acc = S::zero();
        for (t, v) in &self.coeffs {
            let (t1, t2) = t.split_at(self.left);
            let w1 = self.ms.weight_tuple(t1, p);
            let w2 = self.ms.weight_tuple(t2, q);
            let w = w1 * w2;
            acc = acc + v.clone() * v.conj() * w.clone() * w;
        }
        acc
    }
}

impl BlockTensor<f64> {
    pub fn mixed_norm(&self, p: f64, q: f64) -> f64 {
        self.mixed_norm_sq(p, q).sqrt()
    }
}

/// Left contraction F⊗^m g: sums the leading m slots of both tensors;
/// the result is indexed (F-rest, g-rest).
pub fn contract_left<S: Scalar>(
    f: &BlockTensor<S>,
    g: &BlockTensor<S>,
    m: usize,
) -> Result<BlockTensor<S>> {
    if f.ms != g.ms {
        return Err(Error::ModeSpaceMismatch);
    }
    if m > f.order() || m > g.order() {
        return Err(Error::BlockMismatch(format!(
            "cannot contract {m} leading slots of orders {} and {}",
            f.order(),
            g.order()
        )));
    }
    let l = f.order() - m;
    let n = g.order() - m;
    let mut grouped: BTreeMap<&[u8], Vec<(&[u8], &S)>> = BTreeMap::new();
    for (t, v) in &f.coeffs {
        let (i, j) = t.split_at(m);
        grouped.entry(i).or_default().push((j, v));
    }
    let mut out = BlockTensor::zero(&f.ms, l, n);
    for (t, w) in &g.coeffs {
        let (i, k) = t.split_at(m);
        if let Some(parts) = grouped.get(i) {
            for (j, v) in parts {
                let mut key = Vec::with_capacity(l + n);
                key.extend_from_slice(j);
                key.extend_from_slice(k);
                out.insert(key, (*v).clone() * w.clone());
            }
        }
    }
    Ok(out)
}

/// Right contraction F⊗_m g: sums the trailing m slots of both tensors.
pub fn contract_right<S: Scalar>(
    f: &BlockTensor<S>,
    g: &BlockTensor<S>,
    m: usize,
) -> Result<BlockTensor<S>> {
    if f.ms != g.ms {
        return Err(Error::ModeSpaceMismatch);
    }
    if m > f.order() || m > g.order() {
        return Err(Error::BlockMismatch(format!(
            "cannot contract {m} trailing slots of orders {} and {}",
            f.order(),
            g.order()
        )));
    }
    let l = f.order() - m;
    let n = g.order() - m;
    let mut grouped: BTreeMap<&[u8], Vec<(&[u8], &S)>> = BTreeMap::new();
    for (t, v) in &f.coeffs {
        let (j, i) = t.split_at(l);
        grouped.entry(i).or_default().push((j, v));
    }
    let mut out = BlockTensor::zero(&f.ms, l, n);
    for (t, w) in &g.coeffs {
        let (k, i) = t.split_at(n);
        if let Some(parts) = grouped.get(i) {
            for (j, v) in parts {
                let mut key = Vec::with_capacity(l + n);
                key.extend_from_slice(j);
                key.extend_from_slice(k);
                out.insert(key, (*v).clone() * w.clone());
            }
        }
    }
    Ok(out)
}

/// Alternized contraction 𝒜_{l+n}(F ⊗^m g) (or ⊗_m), returned in the
/// wedge subset basis.
pub fn wedge_contract<S: Scalar>(
    f: &BlockTensor<S>,
    g: &BlockTensor<S>,
    m: usize,
    side: Side,
) -> Result<WedgeTensor<S>> {
    let raw = match side {
        Side::Left => contract_left(f, g, m)?,
        Side::Right => contract_right(f, g, m)?,
    };
    Ok(antisymmetrize(&raw.into_dense()))
}

/// Wedge-tensor convenience wrapper around [`wedge_contract`].
pub fn wedge_contract_wedge<S: Scalar>(
    f: &WedgeTensor<S>,
    g: &WedgeTensor<S>,
    m: usize,
    side: Side,
) -> Result<WedgeTensor<S>> {
    let fb = BlockTensor::from_dense(&f.embed_dense(), f.degree(), 0)?;
    let gb = BlockTensor::from_dense(&g.embed_dense(), g.degree(), 0)?;
    wedge_contract(&fb, &gb, m, side)
}

/// t_{l,m}: swaps the two index blocks of the stored split.
pub fn transpose_t<S: Scalar>(x: &BlockTensor<S>) -> BlockTensor<S> {
    let mut out = BlockTensor::zero(&x.ms, x.right, x.left);
    for (t, v) in &x.coeffs {
        let (a, b) = t.split_at(x.left);
        let mut key = Vec::with_capacity(t.len());
        key.extend_from_slice(b);
        key.extend_from_slice(a);
        out.insert(key, v.clone());
    }
    out
}

/// Contraction operator c(l,m;n): traces the leading n slots of each block
/// against each other; blocks (l, m) shrink to (l−n, m−n).
pub fn contraction_c<S: Scalar>(x: &BlockTensor<S>, n: usize) -> Result<BlockTensor<S>> {
    let (l, m) = (x.left, x.right);
    if n > l || n > m {
        return Err(Error::BlockMismatch(format!(
            "c({l},{m};{n}) needs n <= min(l, m)"
        )));
    }
    let mut out = BlockTensor::zero(&x.ms, l - n, m - n);
    for (t, v) in &x.coeffs {
        let (b1, b2) = t.split_at(l);
        let (i1, j) = b1.split_at(n);
        let (i2, k) = b2.split_at(n);
        if i1 == i2 {
            let mut key = Vec::with_capacity(l + m - 2 * n);
            key.extend_from_slice(j);
            key.extend_from_slice(k);
            out.insert(key, v.clone());
        }
    }
    Ok(out)
}

/// Pairing adjoint of c(l,m;n): inserts a diagonal n-block into each block,
/// so ⟨c*(y), x⟩ = ⟨y, c(l,m;n)(x)⟩ exactly.
pub fn contraction_c_adjoint<S: Scalar>(
    y: &BlockTensor<S>,
    l: usize,
    m: usize,
    n: usize,
) -> Result<BlockTensor<S>> {
    if n > l || n > m || y.left != l - n || y.right != m - n {
        return Err(Error::BlockMismatch(format!(
            "c({l},{m};{n})* expects a ({}, {}) block tensor, got ({}, {})",
            l - n,
            m - n,
            y.left,
            y.right
        )));
    }
    let d = y.ms.dim();
    let mut out = BlockTensor::zero(&y.ms, l, m);
    let diag = tuples(d, n);
    for (t, v) in &y.coeffs {
        let (j, k) = t.split_at(y.left);
        for i in &diag {
            let mut key = Vec::with_capacity(l + m);
            key.extend_from_slice(i);
            key.extend_from_slice(j);
            key.extend_from_slice(i);
            key.extend_from_slice(k);
            out.insert(key, v.clone());
        }
    }
    Ok(out)
}

/// Blockwise antisymmetrization 𝒜_{l,m} onto the alt(l,m) canonical form:
/// the (I, J) coefficient is Σ over stored keys whose blocks permute I and J
/// of sign(σ₁)·sign(σ₂)·κ_{(t₁,t₂)}.
pub fn alt_project<S: Scalar>(x: &BlockTensor<S>) -> AltBlockTensor<S> {
    let mut out = AltBlockTensor::zero(&x.ms, x.left, x.right);
    for (t, v) in &x.coeffs {
        let (t1, t2) = t.split_at(x.left);
        let (Some((s1, sign1)), Some((s2, sign2))) = (sort_tuple(t1), sort_tuple(t2)) else {
            continue;
        };
        out.insert((s1, s2), v.clone() * S::from_int(sign1 * sign2));
    }
    out
}

impl<S: Scalar> AltBlockTensor<S> {
    pub fn zero(ms: &Ms<S>, left: usize, right: usize) -> Self {
        AltBlockTensor {
            ms: ms.clone(),
            left,
            right,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_entries(
        ms: &Ms<S>,
        left: usize,
        right: usize,
        entries: Vec<((Subset, Subset), S)>,
    ) -> Result<Self> {
        let mut out = AltBlockTensor::zero(ms, left, right);
        for ((a, b), v) in entries {
            if a.len() != left || b.len() != right {
                return Err(Error::BlockMismatch(format!(
                    "alt key sizes ({}, {}) in a ({left}, {right}) tensor",
                    a.len(),
                    b.len()
                )));
            }
            if a.modes()
                .iter()
                .chain(b.modes().iter())
                .any(|&m| m > ms.dim())
            {
                return Err(Error::ModeOutOfRange {
                    mode: ms.dim() + 1,
                    dim: ms.dim(),
                });
            }
            out.insert((a, b), v);
        }
        Ok(out)
    }

    /// Views a degree-n wedge tensor as an alt block tensor with the wedge
    /// block on the given side and an empty block on the other.
    pub fn from_wedge(w: &WedgeTensor<S>, side: Side) -> Self {
        let (left, right) = match side {
            Side::Left => (w.degree(), 0),
            Side::Right => (0, w.degree()),
        };
        let mut out = AltBlockTensor::zero(w.ms(), left, right);
        for (s, v) in w.entries() {
            let key = match side {
                Side::Left => (*s, Subset::EMPTY),
                Side::Right => (Subset::EMPTY, *s),
            };
            out.insert(key, v.clone());
        }
        out
    }

    pub fn ms(&self) -> &Ms<S> {
        &self.ms
    }

    pub fn left(&self) -> usize {
        self.left
    }

    pub fn right(&self) -> usize {
        self.right
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, key: (Subset, Subset)) -> S {
        self.coeffs.get(&key).cloned().unwrap_or_else(S::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&(Subset, Subset), &S)> {
        self.coeffs.iter()
    }

    pub fn insert(&mut self, key: (Subset, Subset), v: S) {
        debug_assert_eq!(key.0.len(), self.left);
        debug_assert_eq!(key.1.len(), self.right);
        if v.is_zero() {
            return;
        }
        let cur = self.coeffs.remove(&key).unwrap_or_else(S::zero) + v;
        if !cur.is_zero() {
            self.coeffs.insert(key, cur);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ms != other.ms || self.left != other.left || self.right != other.right {
            return Err(Error::BlockMismatch("alt tensor sum shape mismatch".into()));
        }
        let mut out = self.clone();
        for (k, v) in other.entries() {
            out.insert(*k, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return AltBlockTensor::zero(&self.ms, self.left, self.right);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(k, v)| (*k, v.clone() * c.clone()))
            .collect();
        AltBlockTensor {
            ms: self.ms.clone(),
            left: self.left,
            right: self.right,
            coeffs,
        }
    }

    /// Dense form: the ((t₁,t₂)) entry of the (I,J) basis element is
    /// sign(t₁)·sign(t₂)/(l!·m!).
    pub fn embed(&self) -> BlockTensor<S> {
        let norm = S::one() / (S::factorial(self.left) * S::factorial(self.right));
        let mut out = BlockTensor::zero(&self.ms, self.left, self.right);
        for ((a, b), v) in &self.coeffs {
            for (t1, s1) in permutations(*a) {
                for (t2, s2) in permutations(*b) {
                    let mut key = Vec::with_capacity(self.left + self.right);
                    key.extend_from_slice(&t1);
                    key.extend_from_slice(&t2);
                    out.insert(key, v.clone() * S::from_int(s1 * s2) * norm.clone());
                }
            }
        }
        out
    }

    /// ⟨κ, x⟩ against a dense block tensor of the same total order.
    pub fn pair_block(&self, x: &BlockTensor<S>) -> Result<S> {
        self.embed().pair(x)
    }

    /// Signed subset sum Σ_{U ⊂ I∩J, |U| = |I|−left} sign(U, I∖U)·
    /// sign(U, J∖U)·κ_{I∖U, J∖U}. For a kernel with blocks (2l, 2m) this is
    /// exactly the matrix element of its integral kernel operator between
    /// e_J (degree |J|) and e_I (degree |I|); both block sizes are even, so
    /// the two shuffle orders carry no extra sign.
    pub fn diagonal_trace_sum(&self, i: Subset, j: Subset) -> Result<S> {
        if i.len() < self.left || i.len() - self.left != j.len().wrapping_sub(self.right) {
            return Err(Error::BlockMismatch(format!(
                "subset sizes ({}, {}) do not extend blocks ({}, {})",
                i.len(),
                j.len(),
                self.left,
                self.right
            )));
        }
        let trace = i.len() - self.left;
        let common = Subset(i.0 & j.0);
        let mut acc = S::zero();
        for u in crate::bits::subsets_within(common, trace) {
            let a = Subset(i.0 & !u.0);
            let b = Subset(j.0 & !u.0);
            let Some(c) = self.coeffs.get(&(a, b)) else { continue };
            let sign = shuffle_sign(u, a) * shuffle_sign(u, b);
            acc = acc + c.clone() * S::from_int(sign);
        }
        Ok(acc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modespace::ModeSpace;
    use num::rational::BigRational;

    type Q = BigRational;

    fn r(n: i64, d: i64) -> Q {
        Q::ratio(n, d)
    }

    fn ms(d: usize) -> Ms<Q> {
        ModeSpace::standard(d)
    }

    fn block(ms: &Ms<Q>, l: usize, rr: usize, entries: &[(&[u8], (i64, i64))]) -> BlockTensor<Q> {
        BlockTensor::from_entries(
            ms,
            l,
            rr,
            entries
                .iter()
                .map(|(t, (n, d))| (t.to_vec(), r(*n, *d)))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn contract_left_examples() {
        let m3 = ms(3);
        // F = e1⊗e2 with leading slot contracted against g = e1⊗e3
        let f = block(&m3, 1, 1, &[(&[1, 2], (1, 1))]);
        let g = block(&m3, 1, 1, &[(&[1, 3], (1, 1))]);
        let out = contract_left(&f, &g, 1).unwrap();
        assert_eq!(out.get(&[2, 3]), r(1, 1));
        assert_eq!(out.order(), 2);

        // F = e2 against the dense embedding of e1∧e2: -(1/2)·e1
        let f = block(&m3, 1, 0, &[(&[2], (1, 1))]);
        let e12 = WedgeTensor::basis(&m3, &[1, 2]).unwrap().embed_dense();
        let g = BlockTensor::from_dense(&e12, 1, 1).unwrap();
        let out = contract_left(&f, &g, 1).unwrap();
        assert_eq!(out.get(&[1]), r(-1, 2));

        // m = 0 is the plain tensor product
        let f = block(&m3, 1, 0, &[(&[2], (1, 1))]);
        let g = block(&m3, 1, 0, &[(&[3], (1, 1))]);
        let out = contract_left(&f, &g, 0).unwrap();
        assert_eq!(out.get(&[2, 3]), r(1, 1));
    }

    #[test]
    fn contract_right_examples() {
        let m3 = ms(3);
        let f = block(&m3, 1, 1, &[(&[2, 1], (1, 1))]);
        let g = block(&m3, 1, 1, &[(&[3, 1], (1, 1))]);
        let out = contract_right(&f, &g, 1).unwrap();
        assert_eq!(out.get(&[2, 3]), r(1, 1));

        // F = e2 against dense(e1∧e2): +(1/2)·e1
        let f = block(&m3, 0, 1, &[(&[2], (1, 1))]);
        let e12 = WedgeTensor::basis(&m3, &[1, 2]).unwrap().embed_dense();
        let g = BlockTensor::from_dense(&e12, 1, 1).unwrap();
        let out = contract_right(&f, &g, 1).unwrap();
        assert_eq!(out.get(&[1]), r(1, 2));

        // full contraction reduces to the pairing
        let x = block(&m3, 0, 1, &[(&[1], (2, 1)), (&[3], (1, 2))]);
        let y = block(&m3, 0, 1, &[(&[1], (1, 3)), (&[3], (4, 1))]);
        let out = contract_right(&x, &y, 1).unwrap();
        assert_eq!(out.get(&[]), r(2, 3) + r(2, 1));
    }

    #[test]
    fn wedge_contract_sign_law_small() {
        let m3 = ms(3);
        let f = WedgeTensor::basis_vector(&m3, 2).unwrap();
        let g = WedgeTensor::basis(&m3, &[1, 2]).unwrap();
        // l = 0, m = 1, n = 1: left = (−1)^{1·(0+1)} × right
        let left = wedge_contract_wedge(&f, &g, 1, Side::Left).unwrap();
        let right = wedge_contract_wedge(&f, &g, 1, Side::Right).unwrap();
        assert_eq!(left, right.scale(&r(-1, 1)));
        assert_eq!(left.get(Subset::from_modes(&[1], 3).unwrap()), r(-1, 2));
    }

    #[test]
    fn full_wedge_contraction() {
        let m3 = ms(3);
        let w = WedgeTensor::basis(&m3, &[1, 2]).unwrap();
        let out = wedge_contract_wedge(&w, &w, 2, Side::Left).unwrap();
        assert_eq!(out.get(Subset::EMPTY), r(1, 2));
    }

    #[test]
    fn transpose_involution() {
        let m3 = ms(3);
        let x = block(&m3, 1, 2, &[(&[1, 2, 3], (5, 2)), (&[2, 2, 1], (-1, 3))]);
        let t = transpose_t(&x);
        assert_eq!(t.get(&[2, 3, 1]), r(5, 2));
        assert_eq!(t.left(), 2);
        assert_eq!(transpose_t(&t), x);
    }

    #[test]
    fn contraction_c_examples() {
        let m3 = ms(3);
        // x = (e1⊗e2)⊗(e1⊗e3) with blocks (2,2), n = 1 -> e2⊗e3
        let x = block(&m3, 2, 2, &[(&[1, 2, 1, 3], (1, 1))]);
        let out = contraction_c(&x, 1).unwrap();
        assert_eq!(out.get(&[2, 3]), r(1, 1));
        // n = 0 is the identity
        assert_eq!(contraction_c(&x, 0).unwrap(), x);
        assert!(contraction_c(&x, 3).is_err());
    }

    #[test]
    fn adjoint_diagonal_insertion() {
        let m2 = ms(2);
        let y = block(&m2, 1, 1, &[(&[2, 2], (1, 1))]);
        let c = contraction_c_adjoint(&y, 2, 2, 1).unwrap();
        assert_eq!(c.get(&[1, 2, 1, 2]), r(1, 1));
        assert_eq!(c.get(&[2, 2, 2, 2]), r(1, 1));
        assert_eq!(c.get(&[1, 2, 2, 2]), r(0, 1));
        // c then c* recovers d·y for n = 1
        let back = contraction_c(&c, 1).unwrap();
        assert_eq!(back.get(&[2, 2]), r(2, 1));
    }

    #[test]
    fn alt_projection() {
        let m3 = ms(3);
        let x = block(&m3, 2, 0, &[(&[1, 2], (1, 1))]);
        let a = alt_project(&x);
        let key = (Subset::from_modes(&[1, 2], 3).unwrap(), Subset::EMPTY);
        assert_eq!(a.get(key), r(1, 1));
        // idempotence through embed
        let again = alt_project(&a.embed());
        assert_eq!(again, a);
    }

    #[test]
    fn mixed_norm_monotone_in_exponents() {
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let m3 = ms(3);
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let mut x = BlockTensor::zero(&m3, 1, 2);
            for t in crate::bits::tuples(3, 3) {
                if rng.gen_bool(0.4) {
                    x.insert(t, r(rng.gen_range(-5..=5), rng.gen_range(1..=3)));
                }
            }
            for p in -1i64..=1 {
                for q in -1i64..=1 {
                    // lambda_j > 1: raising either exponent cannot shrink the norm
                    assert!(x.mixed_norm_sq(p, q) <= x.mixed_norm_sq(p + 1, q));
                    assert!(x.mixed_norm_sq(p, q) <= x.mixed_norm_sq(p, q + 1));
                }
            }
        }
    }

    #[test]
    fn mixed_norms() {
        let m3 = ms(3);
        let x = block(&m3, 1, 1, &[(&[1, 2], (1, 1))]);
        // lambda = (2, 3): |e1|_p^2 |e2|_q^2 at p = q = 1 -> (2·3)^2
        assert_eq!(x.mixed_norm_sq(1, 1), r(36, 1));
        assert_eq!(x.mixed_norm_sq(0, 1), r(9, 1));
    }
}
