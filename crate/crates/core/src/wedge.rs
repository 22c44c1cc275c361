//! Antisymmetric tensor algebra on the mode space: the alternizer, wedge
//! products, bilinear pairings, the determinant formula, and weighted norms.
//!
//! A `WedgeTensor` stores coefficients against the basis elements
//! e_I = e_{i1}∧…∧e_{in} over ascending subsets I, so |e_I|_0² = 1/n! and
//! every factorial appears explicitly in norms and pairings. `DenseTensor`
//! is the general (not necessarily antisymmetric) tuple-indexed form.

use crate::bits::{permutations, shuffle_sign, sort_tuple, Subset};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::modespace::Ms;
use crate::scalar::Scalar;
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq)]
pub struct WedgeTensor<S: Scalar> {
    ms: Ms<S>,
    degree: usize,
    coeffs: BTreeMap<Subset, S>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DenseTensor<S: Scalar> {
    ms: Ms<S>,
    degree: usize,
    coeffs: BTreeMap<Vec<u8>, S>,
}

impl<S: Scalar> WedgeTensor<S> {
    pub fn zero(ms: &Ms<S>, degree: usize) -> Self {
        WedgeTensor {
            ms: ms.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    /// Degree-0 tensor holding the given vacuum component.
    pub fn scalar(ms: &Ms<S>, value: S) -> Self {
        let mut coeffs = BTreeMap::new();
        if !value.is_zero() {
            coeffs.insert(Subset::EMPTY, value);
        }
        WedgeTensor {
            ms: ms.clone(),
            degree: 0,
            coeffs,
        }
    }

    /// e_{m1}∧…∧e_{mn} for strictly ascending 1-based modes.
    pub fn basis(ms: &Ms<S>, modes: &[usize]) -> Result<Self> {
        let s = Subset::from_modes(modes, ms.dim())?;
        let mut coeffs = BTreeMap::new();
        coeffs.insert(s, S::one());
        Ok(WedgeTensor {
            ms: ms.clone(),
            degree: modes.len(),
            coeffs,
        })
    }

    pub fn basis_vector(ms: &Ms<S>, mode: usize) -> Result<Self> {
        Self::basis(ms, &[mode])
    }

    pub fn from_entries(ms: &Ms<S>, degree: usize, entries: Vec<(Subset, S)>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (s, v) in entries {
            if s.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: s.len(),
                });
            }
            if s.modes().iter().any(|&m| m > ms.dim()) {
                return Err(Error::ModeOutOfRange {
                    mode: ms.dim() + 1,
                    dim: ms.dim(),
                });
            }
            if !v.is_zero() {
                let cur = coeffs.remove(&s).unwrap_or_else(S::zero) + v;
                if !cur.is_zero() {
                    coeffs.insert(s, cur);
                }
            }
        }
        Ok(WedgeTensor {
            ms: ms.clone(),
            degree,
            coeffs,
        })
    }

    pub fn ms(&self) -> &Ms<S> {
        &self.ms
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn get(&self, s: Subset) -> S {
        self.coeffs.get(&s).cloned().unwrap_or_else(S::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Subset, &S)> {
        self.coeffs.iter()
    }

    pub fn insert(&mut self, s: Subset, v: S) {
        debug_assert_eq!(s.len(), self.degree);
        if v.is_zero() {
            return;
        }
        let cur = self.coeffs.remove(&s).unwrap_or_else(S::zero) + v;
        if !cur.is_zero() {
            self.coeffs.insert(s, cur);
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (s, v) in other.entries() {
            out.insert(*s, v.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (s, v) in other.entries() {
            out.insert(*s, -v.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return WedgeTensor::zero(&self.ms, self.degree);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(s, v)| (*s, v.clone() * c.clone()))
            .collect();
        WedgeTensor {
            ms: self.ms.clone(),
            degree: self.degree,
            coeffs,
        }
    }

    pub fn conj(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|(s, v)| (*s, v.conj())).collect();
        WedgeTensor {
            ms: self.ms.clone(),
            degree: self.degree,
            coeffs,
        }
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.ms != other.ms {
            return Err(Error::ModeSpaceMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        Ok(())
    }

    /// Full tuple-indexed antisymmetric form: entry at a tuple t that
    /// permutes I is sign(t)·c_I/n!.
    pub fn embed_dense(&self) -> DenseTensor<S> {
        let n = self.degree;
        let inv_fact = S::one() / S::factorial(n);
        let mut coeffs = BTreeMap::new();
        for (s, c) in &self.coeffs {
            for (tuple, sign) in permutations(*s) {
                let v = c.clone() * S::from_int(sign) * inv_fact.clone();
                coeffs.insert(tuple, v);
            }
        }
        DenseTensor {
            ms: self.ms.clone(),
            degree: n,
            coeffs,
        }
    }

    /// Bilinear pairing of two wedge tensors: (1/n!)·Σ_I F_I·G_I.
    pub fn pair(&self, other: &Self) -> Result<S> {
        self.check_compatible(other)?;
        let mut acc = S::zero();
        for (s, v) in &self.coeffs {
            if let Some(w) = other.coeffs.get(s) {
                acc = acc + v.clone() * w.clone();
            }
        }
        Ok(acc / S::factorial(self.degree))
    }

    /// |w|_p² = (1/n!)·Σ_I c_I·conj(c_I)·weight(I,p)² (exactly the dense
    /// tuple-basis p-norm squared).
    pub fn norm_sq(&self, p: S::Exp) -> S {
        let mut acc = S::zero();
        for (s, v) in &self.coeffs {
            let w = self.ms.weight_subset(*s, p);
            acc = acc + v.clone() * v.conj() * w.clone() * w;
        }
        acc / S::factorial(self.degree)
    }
}

impl WedgeTensor<f64> {
    pub fn norm(&self, p: f64) -> f64 {
        self.norm_sq(p).sqrt()
    }
}

impl<S: Scalar> DenseTensor<S> {
    pub fn zero(ms: &Ms<S>, degree: usize) -> Self {
        DenseTensor {
            ms: ms.clone(),
            degree,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn from_entries(ms: &Ms<S>, degree: usize, entries: Vec<(Vec<u8>, S)>) -> Result<Self> {
        let mut coeffs = BTreeMap::new();
        for (t, v) in entries {
            if t.len() != degree {
                return Err(Error::DegreeMismatch {
                    expected: degree,
                    found: t.len(),
                });
            }
            for &m in &t {
                if m as usize > ms.dim() || m == 0 {
                    return Err(Error::ModeOutOfRange {
                        mode: m as usize,
                        dim: ms.dim(),
                    });
                }
            }
            if !v.is_zero() {
                let cur = coeffs.remove(&t).unwrap_or_else(S::zero) + v;
                if !cur.is_zero() {
                    coeffs.insert(t, cur);
                }
            }
        }
        Ok(DenseTensor {
            ms: ms.clone(),
            degree,
            coeffs,
        })
    }

    /// e_{t1}⊗…⊗e_{tn}, indices may repeat.
    pub fn basis(ms: &Ms<S>, tuple: &[usize]) -> Result<Self> {
        let t: Vec<u8> = tuple.iter().map(|&m| m as u8).collect();
        Self::from_entries(ms, tuple.len(), vec![(t, S::one())])
    }

    pub fn ms(&self) -> &Ms<S> {
        &self.ms
    }

    pub fn degree(&self) -> usize {
        self.degree
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
        debug_assert_eq!(t.len(), self.degree);
        if v.is_zero() {
            return;
        }
        let cur = self.coeffs.remove(&t).unwrap_or_else(S::zero) + v;
        if !cur.is_zero() {
            self.coeffs.insert(t, cur);
        }
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return DenseTensor::zero(&self.ms, self.degree);
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|(t, v)| (t.clone(), v.clone() * c.clone()))
            .collect();
        DenseTensor {
            ms: self.ms.clone(),
            degree: self.degree,
            coeffs,
        }
    }

    /// Canonical bilinear pairing Σ_t F_t·g_t.
    pub fn pair(&self, other: &Self) -> Result<S> {
        if self.ms != other.ms {
            return Err(Error::ModeSpaceMismatch);
        }
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                expected: self.degree,
                found: other.degree,
            });
        }
        let mut acc = S::zero();
        for (t, v) in &self.coeffs {
            if let Some(w) = other.coeffs.get(t) {
                acc = acc + v.clone() * w.clone();
            }
        }
        Ok(acc)
    }

    /// Tuple-basis p-norm squared: Σ_t |x_t|²·weight(t,p)².
    pub fn norm_sq(&self, p: S::Exp) -> S {
        let mut acc = S::zero();
        for (t, v) in &self.coeffs {
            let w = self.ms.weight_tuple(t, p);
            acc = acc + v.clone() * v.conj() * w.clone() * w;
        }
        acc
    }
}

/// The alternizer 𝒜_n expressed in the subset basis: the coefficient of e_I
/// is Σ over stored tuples t permuting I of sign(t)·x_t.
pub fn antisymmetrize<S: Scalar>(x: &DenseTensor<S>) -> WedgeTensor<S> {
    let mut out = WedgeTensor::zero(x.ms(), x.degree());
    for (t, v) in x.entries() {
        if let Some((s, sign)) = sort_tuple(t) {
            out.insert(s, v.clone() * S::from_int(sign));
        }
    }
    out
}

/// 𝒜(a⊗b) in the subset basis: coefficient of e_K is
/// Σ over splits K = I⊔J of sign(shuffle)·a_I·b_J. Degrees above d vanish.
pub fn wedge_product<S: Scalar>(a: &WedgeTensor<S>, b: &WedgeTensor<S>) -> Result<WedgeTensor<S>> {
    if a.ms() != b.ms() {
        return Err(Error::ModeSpaceMismatch);
    }
    let degree = a.degree() + b.degree();
    let mut out = WedgeTensor::zero(a.ms(), degree);
    if degree > a.ms().dim() {
        return Ok(out);
    }
    for (sa, va) in a.entries() {
        for (sb, vb) in b.entries() {
            if sa.is_disjoint(*sb) {
                let sign = shuffle_sign(*sa, *sb);
                out.insert(sa.union(*sb), va.clone() * vb.clone() * S::from_int(sign));
            }
        }
    }
    Ok(out)
}

/// Mixed pairing of a wedge tensor against a dense tensor (via embedding).
pub fn pair_wedge_dense<S: Scalar>(w: &WedgeTensor<S>, x: &DenseTensor<S>) -> Result<S> {
    w.embed_dense().pair(x)
}

/// (1/n!)·det((f_i, g_j)) for lists of degree-1 tensors; equals the pairing
/// of the corresponding wedge products.
pub fn gram_pairing<S: Scalar>(f: &[WedgeTensor<S>], g: &[WedgeTensor<S>]) -> Result<S> {
    if f.len() != g.len() {
        return Err(Error::DegreeMismatch {
            expected: f.len(),
            found: g.len(),
        });
    }
    let n = f.len();
    if n == 0 {
        return Ok(S::one());
    }
    for t in f.iter().chain(g.iter()) {
        if t.degree() != 1 {
            return Err(Error::DegreeMismatch {
                expected: 1,
                found: t.degree(),
            });
        }
    }
    let m = Matrix::from_fn(n, n, |i, j| {
        let mut acc = S::zero();
        for (s, v) in f[i].entries() {
            if let Some(w) = g[j].coeffs.get(s) {
                acc = acc + v.clone() * w.clone();
            }
        }
        acc
    });
    Ok(m.det()? / S::factorial(n))
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

    fn ms4() -> Ms<Q> {
        ModeSpace::standard(4)
    }

    #[test]
    fn antisymmetrize_basics() {
        let ms = ms4();
        let x = DenseTensor::basis(&ms, &[1, 2]).unwrap();
        let w = antisymmetrize(&x);
        assert_eq!(w, WedgeTensor::basis(&ms, &[1, 2]).unwrap());

        let x = DenseTensor::basis(&ms, &[1, 1]).unwrap();
        assert!(antisymmetrize(&x).is_zero());

        let x = DenseTensor::basis(&ms, &[2, 1, 3]).unwrap();
        let w = antisymmetrize(&x);
        assert_eq!(
            w,
            WedgeTensor::basis(&ms, &[1, 2, 3])
                .unwrap()
                .scale(&r(-1, 1))
        );
    }

    #[test]
    fn embed_dense_normalization() {
        let ms = ms4();
        let w = WedgeTensor::basis(&ms, &[1, 2]).unwrap();
        let d = w.embed_dense();
        assert_eq!(d.get(&[1, 2]), r(1, 2));
        assert_eq!(d.get(&[2, 1]), r(-1, 2));

        let v = WedgeTensor::scalar(&ms, r(1, 1));
        assert_eq!(v.embed_dense().get(&[]), r(1, 1));
    }

    #[test]
    fn embed_dense_degree_three_by_enumeration() {
        let ms = ms4();
        let w = WedgeTensor::basis(&ms, &[1, 2, 3]).unwrap();
        let d = w.embed_dense();
        // independent enumeration of the 6 signed entries of size 1/6
        let mut count = 0;
        for (t, v) in d.entries() {
            let (_, sign) = sort_tuple(t).unwrap();
            assert_eq!(*v, r(sign, 6));
            count += 1;
        }
        assert_eq!(count, 6);
        // round trip
        assert_eq!(antisymmetrize(&d), w);
    }

    #[test]
    fn wedge_products() {
        let ms = ms4();
        let a = WedgeTensor::basis(&ms, &[1, 2]).unwrap();
        let b = WedgeTensor::basis(&ms, &[3, 4]).unwrap();
        let ab = wedge_product(&a, &b).unwrap();
        assert_eq!(ab, WedgeTensor::basis(&ms, &[1, 2, 3, 4]).unwrap());

        // zeta ^ zeta = 2! e1234 for zeta = e12 + e34
        let zeta = a.add(&b).unwrap();
        let sq = wedge_product(&zeta, &zeta).unwrap();
        assert_eq!(
            sq,
            WedgeTensor::basis(&ms, &[1, 2, 3, 4])
                .unwrap()
                .scale(&r(2, 1))
        );

        let e1 = WedgeTensor::basis_vector(&ms, 1).unwrap();
        assert!(wedge_product(&e1, &a).unwrap().is_zero());
    }

    #[test]
    fn pairings() {
        let ms = ms4();
        let a = WedgeTensor::basis(&ms, &[1, 2]).unwrap();
        assert_eq!(a.pair(&a).unwrap(), r(1, 2));

        let d21 = DenseTensor::basis(&ms, &[2, 1]).unwrap();
        assert_eq!(pair_wedge_dense(&a, &d21).unwrap(), r(-1, 2));

        let vac = WedgeTensor::scalar(&ms, r(1, 1));
        assert_eq!(vac.pair(&vac).unwrap(), r(1, 1));
    }

    #[test]
    fn gram_pairing_examples() {
        let ms = ms4();
        let e1 = WedgeTensor::basis_vector(&ms, 1).unwrap();
        let e2 = WedgeTensor::basis_vector(&ms, 2).unwrap();
        let fg = vec![e1.clone(), e2.clone()];
        assert_eq!(gram_pairing(&fg, &fg).unwrap(), r(1, 2));
        let swapped = vec![e2, e1];
        assert_eq!(gram_pairing(&fg, &swapped).unwrap(), r(-1, 2));
    }

    #[test]
    fn norms() {
        let ms = ms4();
        let a = WedgeTensor::basis(&ms, &[1, 2]).unwrap();
        assert_eq!(a.norm_sq(0), r(1, 2));
        // |e1^e2|_p^2 = (lambda1 lambda2)^{2p}/2 with lambda = (2,3)
        assert_eq!(a.norm_sq(1), r(36, 2));
    }
}
