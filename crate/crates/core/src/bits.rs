//! Occupation-mask subsets and permutation sign bookkeeping.
//!
//! Ascending mode subsets are stored as bitmasks (bit j set ⇔ mode j+1
//! occupied); shuffle signs come from inversion counts on bit positions.

use crate::error::{Error, Result};

/// Ascending subset of modes 1..=d encoded as a bitmask.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct Subset(pub u64);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn len(&self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.0 == 0
    }

    pub fn contains(&self, mode: usize) -> bool {
        mode >= 1 && (self.0 >> (mode - 1)) & 1 == 1
    }

    pub fn is_disjoint(&self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn union(&self, other: Subset) -> Subset {
        Subset(self.0 | other.0)
    }

    /// 1-based modes in ascending order.
    pub fn modes(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut bits = self.0;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            out.push(j + 1);
            bits &= bits - 1;
        }
        out
    }

    /// Builds a subset from strictly ascending 1-based modes.
    pub fn from_modes(modes: &[usize], dim: usize) -> Result<Subset> {
        let mut mask = 0u64;
        let mut prev = 0usize;
        for &m in modes {
            if m < 1 || m > dim {
                return Err(Error::ModeOutOfRange { mode: m, dim });
            }
            if m <= prev {
                return Err(Error::BlockMismatch(format!(
                    "mode list {:?} is not strictly ascending",
                    modes
                )));
            }
            prev = m;
            mask |= 1 << (m - 1);
        }
        Ok(Subset(mask))
    }
}

/// Sign of the shuffle merging two disjoint ascending subsets (a first, b
/// second) into one ascending list: (−1)^{#{(i,j) ∈ a×b : i > j}}.
pub fn shuffle_sign(a: Subset, b: Subset) -> i64 {
    let mut inversions = 0u32;
    let mut bits = b.0;
    while bits != 0 {
        let j = bits.trailing_zeros();
        // bits of a strictly above position j
        inversions += (a.0 & !((1u64 << (j + 1)) - 1)).count_ones();
        bits &= bits - 1;
    }
    if inversions % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Sorts a tuple of 1-based modes; returns the subset and the sign of the
/// sorting permutation, or None when an index repeats.
pub fn sort_tuple(t: &[u8]) -> Option<(Subset, i64)> {
    let mut mask = 0u64;
    let mut inversions = 0u32;
    for (i, &a) in t.iter().enumerate() {
        let bit = 1u64 << (a - 1);
        if mask & bit != 0 {
            return None;
        }
        mask |= bit;
        for &b in &t[i + 1..] {
            if b < a {
                inversions += 1;
            }
        }
    }
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    Some((Subset(mask), sign))
}

/// All size-k subsets of 1..=d in ascending mask order (Gosper's hack).
pub fn subsets(d: usize, k: usize) -> Vec<Subset> {
    if k > d {
        return Vec::new();
    }
    if k == 0 {
        return vec![Subset::EMPTY];
    }
    let limit = 1u64 << d;
    let mut out = Vec::new();
    let mut v: u64 = (1 << k) - 1;
    while v < limit {
        out.push(Subset(v));
        let t = v | (v - 1);
        v = (t + 1) | (((!t & t.wrapping_add(1)) - 1) >> (v.trailing_zeros() + 1));
    }
    out
}

/// All subsets of `within` having exactly `k` elements.
pub fn subsets_within(within: Subset, k: usize) -> Vec<Subset> {
    let modes = within.modes();
    if k > modes.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut pick = vec![0usize; k];
    fn rec(modes: &[usize], k: usize, start: usize, pick: &mut Vec<usize>, depth: usize, out: &mut Vec<Subset>) {
        if depth == k {
            let mut mask = 0u64;
            for &i in pick.iter() {
                mask |= 1 << (modes[i] - 1);
            }
            out.push(Subset(mask));
            return;
        }
        for i in start..=(modes.len() - (k - depth)) {
            pick[depth] = i;
            rec(modes, k, i + 1, pick, depth + 1, out);
        }
    }
    if k == 0 {
        return vec![Subset::EMPTY];
    }
    rec(&modes, k, 0, &mut pick, 0, &mut out);
    out
}

/// All permutations of the subset's modes, as (tuple, sign) pairs.
pub fn permutations(s: Subset) -> Vec<(Vec<u8>, i64)> {
    let modes: Vec<u8> = s.modes().iter().map(|&m| m as u8).collect();
    let mut out = Vec::new();
    let mut work = modes;
    permute_rec(&mut work, 0, &mut out);
    out
}

fn permute_rec(work: &mut Vec<u8>, k: usize, out: &mut Vec<(Vec<u8>, i64)>) {
    if k == work.len() {
        let (_, sign) = sort_tuple(work).expect("permutation of distinct modes");
        out.push((work.clone(), sign));
        return;
    }
    for i in k..work.len() {
        work.swap(k, i);
        permute_rec(work, k + 1, out);
        work.swap(k, i);
    }
}

/// All tuples in {1..d}^k in lexicographic order.
pub fn tuples(d: usize, k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::with_capacity(d.pow(k as u32));
    let mut cur = vec![1u8; k];
    loop {
        out.push(cur.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < d as u8 {
                cur[i] += 1;
                for c in cur[i + 1..].iter_mut() {
                    *c = 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn subset_roundtrip() {
        let s = Subset::from_modes(&[1, 3, 4], 5).unwrap();
        assert_eq!(s.modes(), vec![1, 3, 4]);
        assert_eq!(s.len(), 3);
        assert!(Subset::from_modes(&[2, 2], 4).is_err());
        assert!(Subset::from_modes(&[3, 1], 4).is_err());
        assert!(Subset::from_modes(&[5], 4).is_err());
    }

    #[test]
    fn shuffle_signs() {
        let a = Subset::from_modes(&[1, 2], 4).unwrap();
        let b = Subset::from_modes(&[3, 4], 4).unwrap();
        assert_eq!(shuffle_sign(a, b), 1);
        assert_eq!(shuffle_sign(b, a), 1); // 2×2 inversions
        let c = Subset::from_modes(&[2], 4).unwrap();
        let d = Subset::from_modes(&[1], 4).unwrap();
        assert_eq!(shuffle_sign(c, d), -1);
    }

    #[test]
    fn tuple_sorting() {
        assert_eq!(sort_tuple(&[2, 1, 3]), Some((Subset(0b111), -1)));
        assert_eq!(sort_tuple(&[1, 2, 3]), Some((Subset(0b111), 1)));
        assert_eq!(sort_tuple(&[1, 1]), None);
    }

    #[test]
    fn subset_enumeration() {
        let all = subsets(4, 2);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0].modes(), vec![1, 2]);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(subsets(3, 0), vec![Subset::EMPTY]);
        assert!(subsets(2, 3).is_empty());
    }

    #[test]
    fn subsets_within_enumeration() {
        let s = Subset::from_modes(&[1, 3, 4], 5).unwrap();
        let twos = subsets_within(s, 2);
        assert_eq!(twos.len(), 3);
        assert!(twos.iter().all(|t| t.len() == 2 && t.0 & !s.0 == 0));
        assert_eq!(subsets_within(s, 0), vec![Subset::EMPTY]);
        assert!(subsets_within(s, 4).is_empty());
    }

    #[test]
    fn permutation_signs_sum_to_zero() {
        let s = Subset::from_modes(&[1, 2, 3], 4).unwrap();
        let perms = permutations(s);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().map(|(_, s)| s).sum::<i64>(), 0);
    }

    #[test]
    fn tuple_enumeration() {
        assert_eq!(
            tuples(2, 2),
            vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![2, 2]]
        );
        assert_eq!(tuples(3, 0), vec![Vec::<u8>::new()]);
    }
}
