//! One-particle data: mode count d, eigenvalue weights λ_j, and the
//! Hilbert–Schmidt exponent α. Source of every weighted norm and of the
//! constants ρ = 1/λ₁ and δ² = Σ λ_j^{−2α} used by the estimate suites.

use crate::bits::Subset;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use std::sync::Arc;

pub const MAX_MODES: usize = 62;

#[derive(Clone, Debug, PartialEq)]
pub struct ModeSpace<S: Scalar> {
    lambdas: Vec<S>,
    alpha: S,
}

pub type Ms<S> = Arc<ModeSpace<S>>;

impl<S: Scalar> ModeSpace<S> {
    /// Validates 1 < λ₁ ≤ … ≤ λ_d, d ≥ 1, α ≥ 0 with 2α representable as a
    /// norm exponent (an integer in exact mode).
    pub fn new(d: usize, lambdas: Vec<S>, alpha: S) -> Result<Ms<S>> {
        if d == 0 {
            return Err(Error::InvalidModeSpace("mode count d must be >= 1".into()));
        }
        if d > MAX_MODES {
            return Err(Error::InvalidModeSpace(format!(
                "mode count d must be <= {MAX_MODES}"
            )));
        }
        if lambdas.len() != d {
            return Err(Error::InvalidModeSpace(format!(
                "expected {d} eigenvalues, got {}",
                lambdas.len()
            )));
        }
        if lambdas[0] <= S::one() {
            return Err(Error::InvalidModeSpace(
                "lambda_1 must be > 1 (rho >= 1 breaks every estimate)".into(),
            ));
        }
        if lambdas.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidModeSpace(
                "eigenvalues must be nondecreasing".into(),
            ));
        }
        if alpha < S::zero() {
            return Err(Error::InvalidModeSpace("alpha must be nonnegative".into()));
        }
        let two_alpha = alpha.clone() + alpha.clone();
        if two_alpha.to_exp().is_none() {
            return Err(Error::InvalidModeSpace(
                "2*alpha is not representable as a norm exponent in this arithmetic".into(),
            ));
        }
        Ok(Arc::new(ModeSpace { lambdas, alpha }))
    }

    /// λ_j = j + 1: the smallest strictly increasing admissible weights.
    pub fn standard(d: usize) -> Ms<S> {
        let lambdas = (0..d).map(|j| S::from_int(j as i64 + 2)).collect();
        ModeSpace::new(d, lambdas, S::one()).expect("standard weights are admissible")
    }

    pub fn dim(&self) -> usize {
        self.lambdas.len()
    }

    pub fn alpha(&self) -> &S {
        &self.alpha
    }

    /// λ_j for a 1-based mode index.
    pub fn lambda(&self, mode: usize) -> &S {
        &self.lambdas[mode - 1]
    }

    pub fn lambdas(&self) -> &[S] {
        &self.lambdas
    }

    /// ∏_{i∈modes} λ_i^p, the |·|_p weight of a basis monomial (multisets
    /// allowed: a tuple index may repeat).
    pub fn mode_weight(&self, modes: &[usize], p: S::Exp) -> Result<S> {
        let mut acc = S::one();
        for &m in modes {
            if m < 1 || m > self.dim() {
                return Err(Error::ModeOutOfRange {
                    mode: m,
                    dim: self.dim(),
                });
            }
            acc = acc * self.lambda(m).pow_exp(p);
        }
        Ok(acc)
    }

    pub(crate) fn weight_tuple(&self, t: &[u8], p: S::Exp) -> S {
        let mut acc = S::one();
        for &m in t {
            acc = acc * self.lambda(m as usize).pow_exp(p);
        }
        acc
    }

    pub(crate) fn weight_subset(&self, s: Subset, p: S::Exp) -> S {
        let mut acc = S::one();
        let mut bits = s.0;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            acc = acc * self.lambdas[j].pow_exp(p);
            bits &= bits - 1;
        }
        acc
    }

    /// (ρ, δ²) with ρ = 1/λ₁ (operator norm of A^{-1}) and
    /// δ² = Σ_j λ_j^{−2α} (finite Hilbert–Schmidt sum).
    pub fn schwartz_constants(&self) -> (S, S) {
        (self.rho(), self.delta_sq())
    }

    pub fn rho(&self) -> S {
        S::one() / self.lambdas[0].clone()
    }

    pub fn delta_sq(&self) -> S {
        let two_alpha = (self.alpha.clone() + self.alpha.clone())
            .to_exp()
            .expect("validated at construction");
        let mut acc = S::zero();
        for l in &self.lambdas {
            acc = acc + l.pow_exp(-two_alpha);
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    #[test]
    fn builds_valid_space() {
        let ms = ModeSpace::new(
            4,
            vec![r(2, 1), r(2, 1), r(3, 1), r(3, 1)],
            BigRational::one_int(),
        );
        assert!(ms.is_ok());
    }

    #[test]
    fn rejects_bad_spaces() {
        assert!(ModeSpace::new(2, vec![r(1, 1), r(2, 1)], r(1, 1)).is_err());
        assert!(ModeSpace::new(3, vec![r(2, 1), r(3, 1), r(2, 1)], r(1, 1)).is_err());
        assert!(ModeSpace::<BigRational>::new(0, vec![], r(1, 1)).is_err());
        // alpha = 1/4 gives 2*alpha = 1/2: not an integer exponent
        assert!(ModeSpace::new(1, vec![r(2, 1)], r(1, 4)).is_err());
    }

    #[test]
    fn weights() {
        let ms = ModeSpace::new(3, vec![r(2, 1), r(3, 1), r(4, 1)], r(1, 1)).unwrap();
        assert_eq!(ms.mode_weight(&[1, 2], 1).unwrap(), r(6, 1));
        assert_eq!(ms.mode_weight(&[1], 0).unwrap(), r(1, 1));
        assert_eq!(ms.mode_weight(&[1, 1], -1).unwrap(), r(1, 4));
        assert!(ms.mode_weight(&[4], 1).is_err());
    }

    #[test]
    fn schwartz_constants_small_cases() {
        let ms = ModeSpace::new(2, vec![r(2, 1), r(2, 1)], r(1, 1)).unwrap();
        let (rho, d2) = ms.schwartz_constants();
        assert_eq!(rho, r(1, 2));
        assert_eq!(d2, r(1, 2));

        // alpha = 1/2, so 2*alpha = 1 is an integer exponent
        let ms = ModeSpace::new(2, vec![r(2, 1), r(4, 1)], r(1, 2)).unwrap();
        assert_eq!(ms.delta_sq(), r(3, 4));
    }

    #[test]
    fn schwartz_delta_sq_matches_direct_summation() {
        let lambdas = vec![r(2, 1), r(3, 1), r(4, 1), r(5, 1)];
        let ms = ModeSpace::new(4, lambdas.clone(), r(1, 1)).unwrap();
        // independent oracle: direct summation of lambda^(-2)
        let mut expect = BigRational::zero_int();
        for l in &lambdas {
            expect += BigRational::one_int() / (l.clone() * l.clone());
        }
        assert_eq!(ms.delta_sq(), expect);
        assert_eq!(ms.delta_sq(), r(1669, 3600));
    }

    #[test]
    fn weight_inverse_and_shift_properties() {
        let ms = ModeSpace::new(3, vec![r(3, 2), r(2, 1), r(7, 2)], r(1, 1)).unwrap();
        for modes in [vec![1usize], vec![1, 2], vec![2, 3], vec![1, 2, 3]] {
            for p in -2i64..=2 {
                let w = ms.mode_weight(&modes, p).unwrap();
                let winv = ms.mode_weight(&modes, -p).unwrap();
                assert_eq!(w.clone() * winv, r(1, 1));
                // |e(i)|_p <= rho^{n r} |e(i)|_{p+r}
                for rr in 0i64..=2 {
                    let lhs = ms.mode_weight(&modes, p).unwrap();
                    let rhs = ms.rho().pow_exp(modes.len() as i64 * rr)
                        * ms.mode_weight(&modes, p + rr).unwrap();
                    assert!(lhs <= rhs);
                }
                let _ = w;
            }
        }
        assert!(ms.rho() < r(1, 1));
        assert!(ms.delta_sq() > r(0, 1));
    }

    trait QuickConsts {
        fn one_int() -> Self;
        fn zero_int() -> Self;
    }
    impl QuickConsts for BigRational {
        fn one_int() -> Self {
            <BigRational as Scalar>::one()
        }
        fn zero_int() -> Self {
            <BigRational as Scalar>::zero()
        }
    }
}
