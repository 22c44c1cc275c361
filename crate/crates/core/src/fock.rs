//! Graded Fock vectors with parity, weighted Fock norms, exponential
//! vectors, the S-transform and its Taylor coefficients, and the CAR ladder
//! operators a, a†, W.
//!
//! Annihilation uses the left contraction a(f)φ_n = n·(f ∧^1 φ_n); that is
//! the choice under which {a†(f), a(g)}φ = ⟨g,f⟩φ comes out sign-correct in
//! this storage convention, and a brute-force CAR sweep pins it.

use crate::contract::{wedge_contract, BlockTensor, Side};
use crate::error::{Error, Result};
use crate::modespace::Ms;
use crate::scalar::Scalar;
use crate::wedge::{wedge_product, WedgeTensor};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
    Mixed,
}

/// Graded family of wedge tensors φ = Σ_n φ_n, 0 ≤ n ≤ d.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector<S: Scalar> {
    ms: Ms<S>,
    components: BTreeMap<usize, WedgeTensor<S>>,
}

impl<S: Scalar> FockVector<S> {
    pub fn zero(ms: &Ms<S>) -> Self {
        FockVector {
            ms: ms.clone(),
            components: BTreeMap::new(),
        }
    }

    pub fn vacuum(ms: &Ms<S>) -> Self {
        FockVector::from_component(WedgeTensor::scalar(ms, S::one()))
    }

    pub fn from_component(w: WedgeTensor<S>) -> Self {
        let mut v = FockVector::zero(w.ms());
        v.set_component(w);
        v
    }

    pub fn ms(&self) -> &Ms<S> {
        &self.ms
    }

    pub fn component(&self, degree: usize) -> Option<&WedgeTensor<S>> {
        self.components.get(&degree)
    }

    pub fn components(&self) -> impl Iterator<Item = (&usize, &WedgeTensor<S>)> {
        self.components.iter()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.components.keys().copied().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn set_component(&mut self, w: WedgeTensor<S>) {
        if w.is_zero() {
            self.components.remove(&w.degree());
        } else {
            self.components.insert(w.degree(), w);
        }
    }

    pub fn add_component(&mut self, w: WedgeTensor<S>) {
        if w.is_zero() {
            return;
        }
        match self.components.remove(&w.degree()) {
            None => {
                self.components.insert(w.degree(), w);
            }
            Some(cur) => {
                let sum = cur.add(&w).expect("same degree and mode space");
                self.set_component(sum);
            }
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ms != other.ms {
            return Err(Error::ModeSpaceMismatch);
        }
        let mut out = self.clone();
        for (_, w) in other.components() {
            out.add_component(w.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = FockVector::zero(&self.ms);
        if c.is_zero() {
            return out;
        }
        for (_, w) in self.components() {
            out.set_component(w.scale(c));
        }
        out
    }

    pub fn conj(&self) -> Self {
        let mut out = FockVector::zero(&self.ms);
        for (_, w) in self.components() {
            out.set_component(w.conj());
        }
        out
    }

    /// Parity label derived from the populated degrees. The zero vector and
    /// the vacuum count as even.
    pub fn parity(&self) -> Parity {
        let mut even = false;
        let mut odd = false;
        for n in self.components.keys() {
            if n % 2 == 0 {
                even = true;
            } else {
                odd = true;
            }
        }
        match (even, odd) {
            (_, false) => Parity::Even,
            (false, true) => Parity::Odd,
            (true, true) => Parity::Mixed,
        }
    }

    /// ‖φ‖_p² = Σ_n n!·|φ_n|_p².
    pub fn norm_sq(&self, p: S::Exp) -> S {
        let mut acc = S::zero();
        for (n, w) in self.components() {
            acc = acc + S::factorial(*n) * w.norm_sq(p);
        }
        acc
    }
}

impl FockVector<f64> {
    pub fn norm(&self, p: f64) -> f64 {
        self.norm_sq(p).sqrt()
    }
}

/// ⟨⟨Φ, φ⟩⟩ = Σ_n n!·⟨Φ_n, φ_n⟩ (bilinear).
pub fn fock_pairing<S: Scalar>(a: &FockVector<S>, b: &FockVector<S>) -> Result<S> {
    if a.ms() != b.ms() {
        return Err(Error::ModeSpaceMismatch);
    }
    let mut acc = S::zero();
    for (n, w) in a.components() {
        if let Some(v) = b.component(*n) {
            acc = acc + S::factorial(*n) * w.pair(v)?;
        }
    }
    Ok(acc)
}

/// e⁺(ζ) = Σ_n ζ^{∧n}/(2n)! — finite, since wedge powers above d vanish.
pub fn exp_vector<S: Scalar>(zeta: &WedgeTensor<S>) -> Result<FockVector<S>> {
    if zeta.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: zeta.degree(),
        });
    }
    let ms = zeta.ms().clone();
    let mut out = FockVector::vacuum(&ms);
    let mut power = WedgeTensor::scalar(&ms, S::one());
    let mut n = 0usize;
    loop {
        n += 1;
        if 2 * n > ms.dim() {
            break;
        }
        power = wedge_product(&power, zeta)?;
        if power.is_zero() {
            break;
        }
        out.add_component(power.scale(&(S::one() / S::factorial(2 * n))));
    }
    Ok(out)
}

/// (SΦ)(ζ) = ⟨⟨Φ, e⁺(ζ)⟩⟩, evaluated through the exponential vector.
pub fn s_transform<S: Scalar>(phi: &FockVector<S>, zeta: &WedgeTensor<S>) -> Result<S> {
    if !phi.is_zero() && phi.parity() != Parity::Even {
        return Err(Error::ParityViolation(
            "S-transform needs an even vector".into(),
        ));
    }
    fock_pairing(phi, &exp_vector(zeta)?)
}

/// Independent evaluation path: (SΦ)(ζ) = Σ_n ⟨Φ_{2n}, ζ^{∧n}⟩.
pub fn s_transform_direct<S: Scalar>(phi: &FockVector<S>, zeta: &WedgeTensor<S>) -> Result<S> {
    if zeta.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: zeta.degree(),
        });
    }
    if !phi.is_zero() && phi.parity() != Parity::Even {
        return Err(Error::ParityViolation(
            "S-transform needs an even vector".into(),
        ));
    }
    let ms = zeta.ms().clone();
    let mut acc = S::zero();
    let mut power = WedgeTensor::scalar(&ms, S::one());
    for n in 0..=(ms.dim() / 2) {
        if n > 0 {
            power = wedge_product(&power, zeta)?;
            if power.is_zero() {
                break;
            }
        }
        if let Some(comp) = phi.component(2 * n) {
            acc = acc + comp.pair(&power)?;
        }
    }
    Ok(acc)
}

/// Taylor coefficients a_k of z ↦ SΦ(zζ + η):
/// a_k = Σ_n C(n+k, k)·⟨Φ_{2(n+k)}, ζ^{∧k}∧η^{∧n}⟩.
pub fn s_taylor<S: Scalar>(
    phi: &FockVector<S>,
    zeta: &WedgeTensor<S>,
    eta: &WedgeTensor<S>,
) -> Result<Vec<S>> {
    if zeta.degree() != 2 || eta.degree() != 2 {
        return Err(Error::DegreeMismatch {
            expected: 2,
            found: zeta.degree().max(eta.degree()),
        });
    }
    if !phi.is_zero() && phi.parity() != Parity::Even {
        return Err(Error::ParityViolation(
            "S-transform needs an even vector".into(),
        ));
    }
    let ms = zeta.ms().clone();
    let kmax = ms.dim() / 2;
    let mut zpow = Vec::with_capacity(kmax + 1);
    let mut epow = Vec::with_capacity(kmax + 1);
    zpow.push(WedgeTensor::scalar(&ms, S::one()));
    epow.push(WedgeTensor::scalar(&ms, S::one()));
    for i in 1..=kmax {
        zpow.push(wedge_product(&zpow[i - 1], zeta)?);
        epow.push(wedge_product(&epow[i - 1], eta)?);
    }
    let mut out = Vec::with_capacity(kmax + 1);
    for k in 0..=kmax {
        let mut ak = S::zero();
        for n in 0..=(kmax - k) {
            if let Some(comp) = phi.component(2 * (n + k)) {
                let mixed = wedge_product(&zpow[k], &epow[n])?;
                ak = ak + S::binomial(n + k, k) * comp.pair(&mixed)?;
            }
        }
        out.push(ak);
    }
    Ok(out)
}

/// a†(f): φ_n ↦ f∧φ_n (degree-raising, parity-flipping).
pub fn create<S: Scalar>(f: &WedgeTensor<S>, phi: &FockVector<S>) -> Result<FockVector<S>> {
    if f.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: f.degree(),
        });
    }
    if f.ms() != phi.ms() {
        return Err(Error::ModeSpaceMismatch);
    }
    let mut out = FockVector::zero(phi.ms());
    for (_, w) in phi.components() {
        out.add_component(wedge_product(f, w)?);
    }
    Ok(out)
}

/// a(f): φ_n ↦ n·(f ∧^1 φ_n) (degree-lowering, parity-flipping).
pub fn annihilate<S: Scalar>(f: &WedgeTensor<S>, phi: &FockVector<S>) -> Result<FockVector<S>> {
    if f.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: f.degree(),
        });
    }
    if f.ms() != phi.ms() {
        return Err(Error::ModeSpaceMismatch);
    }
    let fb = BlockTensor::from_dense(&f.embed_dense(), 1, 0)?;
    let mut out = FockVector::zero(phi.ms());
    for (n, w) in phi.components() {
        if *n == 0 {
            continue;
        }
        let wb = BlockTensor::from_dense(&w.embed_dense(), 1, w.degree() - 1)?;
        let contracted = wedge_contract(&fb, &wb, 1, Side::Left)?;
        out.add_component(contracted.scale(&S::from_int(*n as i64)));
    }
    Ok(out)
}

/// W(f) = a†(f) + a(Jf); self-inverse whenever (f,f)₀ = 1.
pub fn weyl<S: Scalar>(f: &WedgeTensor<S>, phi: &FockVector<S>) -> Result<FockVector<S>> {
    let created = create(f, phi)?;
    let annihilated = annihilate(&f.conj(), phi)?;
    created.add(&annihilated)
}

/// Componentwise split into the even and odd parts; their sum reassembles φ.
pub fn parity_split<S: Scalar>(phi: &FockVector<S>) -> (FockVector<S>, FockVector<S>) {
    let mut even = FockVector::zero(phi.ms());
    let mut odd = FockVector::zero(phi.ms());
    for (n, w) in phi.components() {
        if n % 2 == 0 {
            even.set_component(w.clone());
        } else {
            odd.set_component(w.clone());
        }
    }
    (even, odd)
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

    fn e(ms: &Ms<Q>, modes: &[usize]) -> WedgeTensor<Q> {
        WedgeTensor::basis(ms, modes).unwrap()
    }

    #[test]
    fn fock_norms() {
        let m = ms(4);
        let phi = FockVector::from_component(e(&m, &[1, 2]));
        assert_eq!(phi.norm_sq(0), r(1, 1));
        assert_eq!(FockVector::vacuum(&m).norm_sq(0), r(1, 1));
    }

    #[test]
    fn exp_vector_components() {
        let m = ms(4);
        let zero2 = WedgeTensor::zero(&m, 2);
        assert_eq!(exp_vector(&zero2).unwrap(), FockVector::vacuum(&m));

        let zeta = e(&m, &[1, 2]).add(&e(&m, &[3, 4])).unwrap();
        let ev = exp_vector(&zeta).unwrap();
        assert_eq!(
            ev.component(0).unwrap().get(crate::bits::Subset::EMPTY),
            r(1, 1)
        );
        assert_eq!(ev.component(2).unwrap(), &zeta.scale(&r(1, 2)));
        // zeta^2 = 2·e1234, so the degree-4 part is e1234/12
        assert_eq!(
            ev.component(4).unwrap(),
            &e(&m, &[1, 2, 3, 4]).scale(&r(1, 12))
        );

        let m2 = ms(2);
        let zeta = e(&m2, &[1, 2]);
        let ev = exp_vector(&zeta).unwrap();
        assert_eq!(ev.degrees(), vec![0, 2]);
        assert_eq!(ev.component(2).unwrap(), &zeta.scale(&r(1, 2)));
    }

    #[test]
    fn pairings() {
        let m = ms(4);
        let w = FockVector::from_component(e(&m, &[1, 2]));
        assert_eq!(fock_pairing(&w, &w).unwrap(), r(1, 1));
        let zeta = e(&m, &[1, 3]);
        assert_eq!(
            fock_pairing(&FockVector::vacuum(&m), &exp_vector(&zeta).unwrap()).unwrap(),
            r(1, 1)
        );
    }

    #[test]
    fn exp_vector_pairing_matches_series() {
        // <<e+(zeta), e+(eta)>> = sum_n <zeta^n, eta^n>/(2n)! - both routes
        use rand::{Rng, SeedableRng};
        use rand_chacha::ChaCha8Rng;
        let m = ms(4);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..10 {
            let entries = crate::bits::subsets(4, 2)
                .into_iter()
                .map(|s| (s, r(rng.gen_range(-5..=5), rng.gen_range(1..=3))))
                .collect();
            let zeta = WedgeTensor::from_entries(&m, 2, entries).unwrap();
            let entries = crate::bits::subsets(4, 2)
                .into_iter()
                .map(|s| (s, r(rng.gen_range(-5..=5), rng.gen_range(1..=3))))
                .collect();
            let eta = WedgeTensor::from_entries(&m, 2, entries).unwrap();
            let lhs =
                fock_pairing(&exp_vector(&zeta).unwrap(), &exp_vector(&eta).unwrap()).unwrap();
            let mut rhs = Q::zero();
            let mut zp = WedgeTensor::scalar(&m, Q::one());
            let mut ep = WedgeTensor::scalar(&m, Q::one());
            for n in 0..=2usize {
                if n > 0 {
                    zp = wedge_product(&zp, &zeta).unwrap();
                    ep = wedge_product(&ep, &eta).unwrap();
                }
                rhs += zp.pair(&ep).unwrap() / Q::factorial(2 * n);
            }
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn s_transform_paths_agree() {
        let m = ms(4);
        assert_eq!(
            s_transform(&FockVector::vacuum(&m), &e(&m, &[1, 2])).unwrap(),
            r(1, 1)
        );

        let phi = FockVector::from_component(e(&m, &[1, 2]));
        let zeta = e(&m, &[1, 2]).scale(&r(3, 2));
        assert_eq!(
            s_transform(&phi, &zeta).unwrap(),
            phi.component(2).unwrap().pair(&zeta).unwrap()
        );
        assert_eq!(
            s_transform(&phi, &zeta).unwrap(),
            s_transform_direct(&phi, &zeta).unwrap()
        );
    }

    #[test]
    fn s_taylor_degenerate_cases() {
        let m = ms(4);
        let mut phi = FockVector::from_component(e(&m, &[1, 2]));
        phi.add_component(e(&m, &[1, 2, 3, 4]).scale(&r(5, 3)));
        let zeta = e(&m, &[1, 2]);
        let eta = e(&m, &[3, 4]);

        // eta = 0: a_k = <Phi_{2k}, zeta^k>
        let zero2 = WedgeTensor::zero(&m, 2);
        let a = s_taylor(&phi, &zeta, &zero2).unwrap();
        assert_eq!(a[1], phi.component(2).unwrap().pair(&zeta).unwrap());

        // zeta = 0: a_0 = S(eta), higher vanish
        let a = s_taylor(&phi, &zero2, &eta).unwrap();
        assert_eq!(a[0], s_transform(&phi, &eta).unwrap());
        assert!(a[1..].iter().all(|v| v.is_zero()));
    }

    #[test]
    fn ladder_examples() {
        let m = ms(4);
        let e1 = e(&m, &[1]);
        let vac = FockVector::vacuum(&m);

        assert_eq!(
            create(&e1, &vac).unwrap(),
            FockVector::from_component(e(&m, &[1]))
        );
        assert!(create(&e1, &FockVector::from_component(e(&m, &[1])))
            .unwrap()
            .is_zero());
        assert_eq!(
            create(&e1, &FockVector::from_component(e(&m, &[2]))).unwrap(),
            FockVector::from_component(e(&m, &[1, 2]))
        );

        assert_eq!(
            annihilate(&e1, &FockVector::from_component(e(&m, &[1]))).unwrap(),
            vac
        );
        assert_eq!(
            annihilate(&e1, &FockVector::from_component(e(&m, &[1, 2]))).unwrap(),
            FockVector::from_component(e(&m, &[2]))
        );
        assert!(annihilate(&e1, &vac).unwrap().is_zero());

        assert_eq!(
            weyl(&e1, &vac).unwrap(),
            FockVector::from_component(e(&m, &[1]))
        );
    }

    #[test]
    fn weyl_involution_on_basis() {
        let m = ms(3);
        let f = e(&m, &[1]);
        for modes in [vec![], vec![1], vec![2], vec![1, 2], vec![1, 2, 3]] {
            let phi = if modes.is_empty() {
                FockVector::vacuum(&m)
            } else {
                FockVector::from_component(e(&m, &modes))
            };
            let ww = weyl(&f, &weyl(&f, &phi).unwrap()).unwrap();
            assert_eq!(ww, phi);
        }
        // (f,f)_0 = 4 scales the involution by 4
        let f2 = f.scale(&r(2, 1));
        let phi = FockVector::from_component(e(&m, &[2]));
        let ww = weyl(&f2, &weyl(&f2, &phi).unwrap()).unwrap();
        assert_eq!(ww, phi.scale(&r(4, 1)));
    }

    #[test]
    fn parity_splitting() {
        let m = ms(3);
        let vac = FockVector::vacuum(&m);
        let (ev, od) = parity_split(&vac);
        assert_eq!(ev, vac);
        assert!(od.is_zero());

        let mut phi = FockVector::from_component(e(&m, &[1]));
        phi.add_component(e(&m, &[1, 2]));
        let (ev, od) = parity_split(&phi);
        assert_eq!(ev, FockVector::from_component(e(&m, &[1, 2])));
        assert_eq!(od, FockVector::from_component(e(&m, &[1])));
        assert_eq!(ev.add(&od).unwrap(), phi);
        assert_eq!(phi.parity(), Parity::Mixed);
    }
}
