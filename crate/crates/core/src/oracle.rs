//! Brute-force reference implementations on flat dense arrays.
//!
//! Everything here enumerates full index ranges and permutations with no
//! shared code path with the sparse implementations; the verification
//! suites check the two against each other entry by entry.

use crate::contract::BlockTensor;
use crate::modespace::Ms;
use crate::scalar::Scalar;
use crate::wedge::{DenseTensor, WedgeTensor};

/// Order-k tensor over {1..d}^k stored as a flat d^k array.
#[derive(Clone, Debug, PartialEq)]
pub struct FlatTensor<S> {
    pub d: usize,
    pub order: usize,
    pub data: Vec<S>,
}

impl<S: Scalar> FlatTensor<S> {
    pub fn zeros(d: usize, order: usize) -> Self {
        FlatTensor {
            d,
            order,
            data: vec![S::zero(); d.pow(order as u32)],
        }
    }

    pub fn index(&self, tuple: &[u8]) -> usize {
        debug_assert_eq!(tuple.len(), self.order);
        let mut idx = 0usize;
        for &m in tuple {
            idx = idx * self.d + (m as usize - 1);
        }
        idx
    }

    pub fn tuple_of(&self, mut idx: usize) -> Vec<u8> {
        let mut t = vec![0u8; self.order];
        for slot in (0..self.order).rev() {
            t[slot] = (idx % self.d) as u8 + 1;
            idx /= self.d;
        }
        t
    }

    pub fn get(&self, tuple: &[u8]) -> &S {
        &self.data[self.index(tuple)]
    }

    pub fn set(&mut self, tuple: &[u8], v: S) {
        let i = self.index(tuple);
        self.data[i] = v;
    }

    pub fn from_dense(x: &DenseTensor<S>) -> Self {
        let mut out = FlatTensor::zeros(x.ms().dim(), x.degree());
        for (t, v) in x.entries() {
            out.set(t, v.clone());
        }
        out
    }

    pub fn from_block(x: &BlockTensor<S>) -> Self {
        let mut out = FlatTensor::zeros(x.ms().dim(), x.order());
        for (t, v) in x.entries() {
            out.set(t, v.clone());
        }
        out
    }

    pub fn from_wedge(w: &WedgeTensor<S>) -> Self {
        Self::from_dense(&w.embed_dense())
    }

    pub fn to_dense(&self, ms: &Ms<S>) -> DenseTensor<S> {
        let mut entries = Vec::new();
        for idx in 0..self.data.len() {
            if !self.data[idx].is_zero() {
                entries.push((self.tuple_of(idx), self.data[idx].clone()));
            }
        }
        DenseTensor::from_entries(ms, self.order, entries).expect("valid tuples")
    }

    pub fn to_block(&self, ms: &Ms<S>, left: usize, right: usize) -> BlockTensor<S> {
        assert_eq!(left + right, self.order);
        let mut entries = Vec::new();
        for idx in 0..self.data.len() {
            if !self.data[idx].is_zero() {
                entries.push((self.tuple_of(idx), self.data[idx].clone()));
            }
        }
        BlockTensor::from_entries(ms, left, right, entries).expect("valid tuples")
    }
}

fn tuple_at(d: usize, order: usize, mut idx: usize) -> Vec<u8> {
    let mut t = vec![0u8; order];
    for slot in (0..order).rev() {
        t[slot] = (idx % d) as u8 + 1;
        idx /= d;
    }
    t
}

fn permutation_sign(perm: &[usize]) -> i64 {
    let mut inv = 0;
    for i in 0..perm.len() {
        for j in i + 1..perm.len() {
            if perm[i] > perm[j] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut work: Vec<usize> = (0..n).collect();
    fn rec(work: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
        if k == work.len() {
            out.push(work.clone());
            return;
        }
        for i in k..work.len() {
            work.swap(k, i);
            rec(work, k + 1, out);
            work.swap(k, i);
        }
    }
    rec(&mut work, 0, &mut out);
    out
}

/// 𝒜_n by full permutation averaging: (𝒜x)_s = (1/n!)·Σ_π sign(π)·x_{s∘π}.
pub fn alternize<S: Scalar>(x: &FlatTensor<S>) -> FlatTensor<S> {
    let n = x.order;
    let perms = all_permutations(n);
    let norm = S::one() / S::factorial(n);
    let mut out = FlatTensor::zeros(x.d, n);
    for idx in 0..out.data.len() {
        let s = out.tuple_of(idx);
        let mut acc = S::zero();
        for p in &perms {
            let permuted: Vec<u8> = p.iter().map(|&i| s[i]).collect();
            let v = x.get(&permuted);
            if !v.is_zero() {
                acc = acc + S::from_int(permutation_sign(p)) * v.clone();
            }
        }
        out.data[idx] = acc * norm.clone();
    }
    out
}

/// Blockwise alternization 𝒜_{l,m} by double permutation averaging.
pub fn alternize_blocks<S: Scalar>(x: &FlatTensor<S>, left: usize) -> FlatTensor<S> {
    let right = x.order - left;
    let perms_l = all_permutations(left);
    let perms_r = all_permutations(right);
    let norm = S::one() / (S::factorial(left) * S::factorial(right));
    let mut out = FlatTensor::zeros(x.d, x.order);
    for idx in 0..out.data.len() {
        let s = out.tuple_of(idx);
        let mut acc = S::zero();
        for pl in &perms_l {
            for pr in &perms_r {
                let mut permuted = Vec::with_capacity(x.order);
                for &i in pl {
                    permuted.push(s[i]);
                }
                for &i in pr {
                    permuted.push(s[left + i]);
                }
                let v = x.get(&permuted);
                if !v.is_zero() {
                    acc =
                        acc + S::from_int(permutation_sign(pl) * permutation_sign(pr)) * v.clone();
                }
            }
        }
        out.data[idx] = acc * norm.clone();
    }
    out
}

/// Left contraction by exhaustive index loops: result_(j,k) = Σ_i F_(i,j)·g_(i,k).
pub fn contract_left<S: Scalar>(f: &FlatTensor<S>, g: &FlatTensor<S>, m: usize) -> FlatTensor<S> {
    let d = f.d;
    let l = f.order - m;
    let n = g.order - m;
    let mut out = FlatTensor::zeros(d, l + n);
    let i_count = d.pow(m as u32);
    for idx in 0..out.data.len() {
        let jk = out.tuple_of(idx);
        let (j, k) = jk.split_at(l);
        let mut acc = S::zero();
        for i_idx in 0..i_count {
            let i = tuple_at(d, m, i_idx);
            let mut fi = i.clone();
            fi.extend_from_slice(j);
            let mut gi = i;
            gi.extend_from_slice(k);
            let a = f.get(&fi);
            let b = g.get(&gi);
            if !a.is_zero() && !b.is_zero() {
                acc = acc + a.clone() * b.clone();
            }
        }
        out.data[idx] = acc;
    }
    out
}

/// Right contraction: result_(j,k) = Σ_i F_(j,i)·g_(k,i).
pub fn contract_right<S: Scalar>(f: &FlatTensor<S>, g: &FlatTensor<S>, m: usize) -> FlatTensor<S> {
    let d = f.d;
    let l = f.order - m;
    let n = g.order - m;
    let mut out = FlatTensor::zeros(d, l + n);
    let i_count = d.pow(m as u32);
    for idx in 0..out.data.len() {
        let jk = out.tuple_of(idx);
        let (j, k) = jk.split_at(l);
        let mut acc = S::zero();
        for i_idx in 0..i_count {
            let i = tuple_at(d, m, i_idx);
            let mut fj = j.to_vec();
            fj.extend_from_slice(&i);
            let mut gk = k.to_vec();
            gk.extend_from_slice(&i);
            let a = f.get(&fj);
            let b = g.get(&gk);
            if !a.is_zero() && !b.is_zero() {
                acc = acc + a.clone() * b.clone();
            }
        }
        out.data[idx] = acc;
    }
    out
}

/// Block transposition t_{l,m}.
pub fn transpose<S: Scalar>(x: &FlatTensor<S>, left: usize) -> FlatTensor<S> {
    let right = x.order - left;
    let mut out = FlatTensor::zeros(x.d, x.order);
    for idx in 0..x.data.len() {
        if x.data[idx].is_zero() {
            continue;
        }
        let t = x.tuple_of(idx);
        let (a, b) = t.split_at(left);
        let mut swapped = b.to_vec();
        swapped.extend_from_slice(a);
        let _ = right;
        out.set(&swapped, x.data[idx].clone());
    }
    out
}

/// c(l,m;n): result_(j,k) = Σ_i x_((i,j),(i,k)).
pub fn contraction_c<S: Scalar>(x: &FlatTensor<S>, left: usize, n: usize) -> FlatTensor<S> {
    let d = x.d;
    let right = x.order - left;
    let mut out = FlatTensor::zeros(d, x.order - 2 * n);
    let i_count = d.pow(n as u32);
    for idx in 0..out.data.len() {
        let jk = out.tuple_of(idx);
        let (j, k) = jk.split_at(left - n);
        let mut acc = S::zero();
        for i_idx in 0..i_count {
            let i = tuple_at(d, n, i_idx);
            let mut t = i.clone();
            t.extend_from_slice(j);
            t.extend_from_slice(&i);
            t.extend_from_slice(k);
            let v = x.get(&t);
            if !v.is_zero() {
                acc = acc + v.clone();
            }
        }
        let _ = right;
        out.data[idx] = acc;
    }
    out
}

/// c(l,m;n)*: inserts equal leading diagonal blocks.
pub fn contraction_c_adjoint<S: Scalar>(
    y: &FlatTensor<S>,
    l: usize,
    m: usize,
    n: usize,
) -> FlatTensor<S> {
    let d = y.d;
    let mut out = FlatTensor::zeros(d, l + m);
    for idx in 0..out.data.len() {
        let t = out.tuple_of(idx);
        let (b1, b2) = t.split_at(l);
        let (i1, j) = b1.split_at(n);
        let (i2, k) = b2.split_at(n);
        if i1 != i2 {
            continue;
        }
        let mut jk = j.to_vec();
        jk.extend_from_slice(k);
        out.data[idx] = y.get(&jk).clone();
    }
    out
}

/// Full bilinear pairing Σ_t x_t·y_t.
pub fn pairing<S: Scalar>(x: &FlatTensor<S>, y: &FlatTensor<S>) -> S {
    let mut acc = S::zero();
    for (a, b) in x.data.iter().zip(y.data.iter()) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc + a.clone() * b.clone();
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modespace::ModeSpace;
    use num::rational::BigRational;

    type Q = BigRational;

    #[test]
    fn flat_roundtrip() {
        let ms = ModeSpace::<Q>::standard(3);
        let w = WedgeTensor::basis(&ms, &[1, 3]).unwrap();
        let flat = FlatTensor::from_wedge(&w);
        assert_eq!(flat.to_dense(&ms), w.embed_dense());
    }

    #[test]
    fn alternize_matches_library() {
        let ms = ModeSpace::<Q>::standard(3);
        let x = DenseTensor::from_entries(
            &ms,
            2,
            vec![
                (vec![1, 2], Q::ratio(2, 3)),
                (vec![2, 2], Q::ratio(1, 2)),
                (vec![3, 1], Q::ratio(-1, 5)),
            ],
        )
        .unwrap();
        let flat = alternize(&FlatTensor::from_dense(&x));
        let lib = crate::wedge::antisymmetrize(&x);
        assert_eq!(flat.to_dense(&ms), lib.embed_dense());
    }
}
