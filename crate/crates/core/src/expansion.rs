//! Kernel expansion of operators on the truncated Fock space: extraction of
//! the symbol coefficient tensors K_{l,m} and the kernel distributions
//! κ_{l,m} (recursive and closed composition-sum forms), reconstruction,
//! parity decomposition, and the extension to the full space by W(f)
//! conjugation.
//!
//! Normalization: K_{l,m} is the symbol-Taylor datum, i.e.
//! ⟨K_{l,m}, ψ⊗φ⟩ = ⟨⟨Ξφ, ψ⟩⟩/((2l)!(2m)!) on wedge states, so its stored
//! alt coefficients are exactly the raw matrix elements ⟨⟨Ξ e_J, e_I⟩⟩.
//! With that normalization the closed form reads
//! κ_{l,m} = K_{l,m} + Σ_k S_k·c(2l,2m;2k)*(K_{l−k,m−k}),
//! S_k = Σ_{(k₁..k_t) compositions of k} (−1)^t/((2k₁)!…(2k_t)!).

use crate::bits::subsets;
use crate::contract::{alt_project, contraction_c_adjoint, AltBlockTensor};
use crate::error::{Error, Result};
use crate::kernelop::KernelDistribution;
use crate::modespace::Ms;
use crate::operator::{weyl_matrix, OperatorMatrix, ParityClass};
use crate::scalar::Scalar;
use crate::wedge::WedgeTensor;
use std::collections::BTreeMap;

/// Family of kernel distributions, optionally conjugated by W factors:
/// left_w records a W(f)* applied after the kernel sum, right_w a W(f)
/// applied before it.
#[derive(Clone, Debug, PartialEq)]
pub struct KernelFamily<S: Scalar> {
    ms: Ms<S>,
    terms: BTreeMap<(usize, usize), KernelDistribution<S>>,
    left_w: Option<WedgeTensor<S>>,
    right_w: Option<WedgeTensor<S>>,
}

impl<S: Scalar> KernelFamily<S> {
    pub fn new(ms: &Ms<S>) -> Self {
        KernelFamily {
            ms: ms.clone(),
            terms: BTreeMap::new(),
            left_w: None,
            right_w: None,
        }
    }

    pub fn ms(&self) -> &Ms<S> {
        &self.ms
    }

    pub fn insert(&mut self, k: KernelDistribution<S>) {
        if !k.is_zero() {
            self.terms.insert((k.l(), k.m()), k);
        }
    }

    pub fn term(&self, l: usize, m: usize) -> Option<&KernelDistribution<S>> {
        self.terms.get(&(l, m))
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &KernelDistribution<S>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn left_w(&self) -> Option<&WedgeTensor<S>> {
        self.left_w.as_ref()
    }

    pub fn right_w(&self) -> Option<&WedgeTensor<S>> {
        self.right_w.as_ref()
    }

    pub fn with_left_w(mut self, f: WedgeTensor<S>) -> Self {
        self.left_w = Some(f);
        self
    }

    pub fn with_right_w(mut self, f: WedgeTensor<S>) -> Self {
        self.right_w = Some(f);
        self
    }
}

fn check_even<S: Scalar>(xi: &OperatorMatrix<S>) -> Result<()> {
    if !xi.is_even() {
        return Err(Error::ParityViolation(
            "extraction needs an even-to-even operator".into(),
        ));
    }
    Ok(())
}

/// Symbol coefficient tensors: K_{l,m} stored with alt coefficients equal to
/// the matrix elements ⟨⟨Ξ e_J^∧, e_I^∧⟩⟩ over ascending subsets |I| = 2l,
/// |J| = 2m.
pub fn taylor_kernels<S: Scalar>(
    xi: &OperatorMatrix<S>,
) -> Result<BTreeMap<(usize, usize), AltBlockTensor<S>>> {
    check_even(xi)?;
    let ms = xi.ms();
    let half = ms.dim() / 2;
    let mut out = BTreeMap::new();
    for l in 0..=half {
        for m in 0..=half {
            let mut alt = AltBlockTensor::zero(ms, 2 * l, 2 * m);
            for i in subsets(ms.dim(), 2 * l) {
                let row = xi.row_basis().position(2 * l, i).expect("even basis");
                for j in subsets(ms.dim(), 2 * m) {
                    let col = xi.col_basis().position(2 * m, j).expect("even basis");
                    alt.insert((i, j), xi.entry(row, col).clone());
                }
            }
            out.insert((l, m), alt);
        }
    }
    Ok(out)
}

/// Recursive kernel extraction: in increasing min(l,m), then lexicographic,
/// solve
/// ⟨κ_{l,m}, x⟩ = ⟨⟨Ξφ,ψ⟩⟩/((2l)!(2m)!) − Σ_{n≥1} ⟨κ_{l−n,m−n}, c(2l,2m;2n)(x)⟩/(2n)!
/// over the wedge basis pairs x = e_I^∧ ⊗ e_J^∧. In stored alt coordinates
/// the inner sum is the signed subset sum of the lower kernel (the matrix
/// element it already accounts for), so each coefficient reads: raw matrix
/// element minus the lower terms' contributions.
pub fn fock_expand<S: Scalar>(xi: &OperatorMatrix<S>) -> Result<KernelFamily<S>> {
    check_even(xi)?;
    let ms = xi.ms();
    let half = ms.dim() / 2;
    let mut order: Vec<(usize, usize)> = Vec::new();
    for l in 0..=half {
        for m in 0..=half {
            order.push((l, m));
        }
    }
    order.sort_by_key(|&(l, m)| (l.min(m), l, m));

    let mut kappas: BTreeMap<(usize, usize), AltBlockTensor<S>> = BTreeMap::new();
    for (l, m) in order {
        let mut alt = AltBlockTensor::zero(ms, 2 * l, 2 * m);
        for i in subsets(ms.dim(), 2 * l) {
            let row = xi.row_basis().position(2 * l, i).expect("even basis");
            for j in subsets(ms.dim(), 2 * m) {
                let col = xi.col_basis().position(2 * m, j).expect("even basis");
                let mut value = xi.entry(row, col).clone();
                for n in 1..=l.min(m) {
                    let prev = &kappas[&(l - n, m - n)];
                    value = value - prev.diagonal_trace_sum(i, j)?;
                }
                alt.insert((i, j), value);
            }
        }
        kappas.insert((l, m), alt);
    }

    let mut family = KernelFamily::new(ms);
    for ((l, m), alt) in kappas {
        family.insert(KernelDistribution::new(l, m, alt)?);
    }
    Ok(family)
}

/// Σ over compositions (k₁,…,k_t) of k of (−1)^t/((2k₁)!…(2k_t)!).
fn composition_coefficient<S: Scalar>(k: usize) -> S {
    fn rec<S: Scalar>(remaining: usize, acc: S, sign: bool, total: &mut S) {
        if remaining == 0 {
            let signed = if sign { -acc.clone() } else { acc.clone() };
            *total = total.clone() + signed;
            return;
        }
        for part in 1..=remaining {
            let next = acc.clone() / S::factorial(2 * part);
            rec(remaining - part, next, !sign, total);
        }
    }
    let mut total = S::zero();
    rec(k, S::one(), false, &mut total);
    total
}

/// Closed-form extraction through the symbol coefficient tensors:
/// κ_{l,m} = alt[K_{l,m} + Σ_{k=1}^{min(l,m)} S_k·c(2l,2m;2k)*(K_{l−k,m−k})].
pub fn fock_expand_closed<S: Scalar>(xi: &OperatorMatrix<S>) -> Result<KernelFamily<S>> {
    check_even(xi)?;
    let ms = xi.ms();
    let half = ms.dim() / 2;
    let kmap = taylor_kernels(xi)?;
    let coeffs: Vec<S> = (0..=half).map(composition_coefficient::<S>).collect();

    let mut family = KernelFamily::new(ms);
    for l in 0..=half {
        for m in 0..=half {
            let mut dense = kmap[&(l, m)].embed();
            for k in 1..=l.min(m) {
                let lower = kmap[&(l - k, m - k)].embed();
                let lifted = contraction_c_adjoint(&lower, 2 * l, 2 * m, 2 * k)?;
                dense = dense.add(&lifted.scale(&coeffs[k]))?;
            }
            family.insert(KernelDistribution::new(l, m, alt_project(&dense))?);
        }
    }
    Ok(family)
}

/// Σ_{l,m} Ξ_{l,m}(κ_{l,m}), pre/post-composed with the recorded W factors.
pub fn reconstruct<S: Scalar>(family: &KernelFamily<S>) -> Result<OperatorMatrix<S>> {
    let ms = family.ms();
    let mut core = OperatorMatrix::zeros(ms, ParityClass::Even, ParityClass::Even);
    for (_, k) in family.terms() {
        core = core.add(&k.matrix()?)?;
    }
    let mut out = core;
    if let Some(f) = family.right_w() {
        let w = weyl_matrix(f, ParityClass::Even, ParityClass::Odd)?;
        out = out.compose(&w)?;
    }
    if let Some(f) = family.left_w() {
        let wstar = weyl_matrix(f, ParityClass::Even, ParityClass::Odd)?.adjoint();
        out = wstar.compose(&out)?;
    }
    Ok(out)
}

/// The four parity-restricted blocks of a full operator, in the order
/// (even←even, even←odd, odd←even, odd←odd); their embeddings sum to Ξ.
#[derive(Clone, Debug)]
pub struct ParityBlocks<S: Scalar> {
    pub pp: OperatorMatrix<S>,
    pub pm: OperatorMatrix<S>,
    pub mp: OperatorMatrix<S>,
    pub mm: OperatorMatrix<S>,
}

pub fn parity_blocks<S: Scalar>(xi: &OperatorMatrix<S>) -> Result<ParityBlocks<S>> {
    if xi.row_basis().parity() != ParityClass::Full || xi.col_basis().parity() != ParityClass::Full
    {
        return Err(Error::ParityViolation(
            "parity decomposition needs a full operator".into(),
        ));
    }
    Ok(ParityBlocks {
        pp: xi.restrict(ParityClass::Even, ParityClass::Even),
        pm: xi.restrict(ParityClass::Even, ParityClass::Odd),
        mp: xi.restrict(ParityClass::Odd, ParityClass::Even),
        mm: xi.restrict(ParityClass::Odd, ParityClass::Odd),
    })
}

/// Kernel families of the four parity blocks of a full operator, obtained
/// by transporting odd sectors to the even one with a normalized W(f).
#[derive(Clone, Debug)]
pub struct FullExpansion<S: Scalar> {
    pub weyl_vector: WedgeTensor<S>,
    pub pp: KernelFamily<S>,
    pub pm: KernelFamily<S>,
    pub mp: KernelFamily<S>,
    pub mm: KernelFamily<S>,
}

impl<S: Scalar> FullExpansion<S> {
    /// Sum of the four reconstructed blocks embedded into the full space.
    pub fn reconstruct(&self) -> Result<OperatorMatrix<S>> {
        let pp = reconstruct(&self.pp)?;
        let pm = reconstruct(&self.pm)?;
        let mp = reconstruct(&self.mp)?;
        let mm = reconstruct(&self.mm)?;
        let full = |m: &OperatorMatrix<S>| m.embed(ParityClass::Full, ParityClass::Full);
        full(&pp).add(&full(&pm))?.add(&full(&mp))?.add(&full(&mm))
    }
}

/// Expands a full operator as four kernel families with W(f) factors:
/// Ξ_{++} = ΣΞ(κ), Ξ_{+−} = ΣΞ(κ)W(f), Ξ_{−+} = ΣW(f)*Ξ(κ),
/// Ξ_{−−} = ΣW(f)*Ξ(κ)W(f). Requires (f,f)₀ = 1 so that W(f)² = 1.
pub fn fock_expand_full<S: Scalar>(
    xi: &OperatorMatrix<S>,
    f: &WedgeTensor<S>,
) -> Result<FullExpansion<S>> {
    if f.degree() != 1 {
        return Err(Error::DegreeMismatch {
            expected: 1,
            found: f.degree(),
        });
    }
    if f.ms() != xi.ms() {
        return Err(Error::ModeSpaceMismatch);
    }
    let norm = {
        let mut acc = S::zero();
        for (_, v) in f.entries() {
            acc = acc + v.conj() * v.clone();
        }
        acc
    };
    if norm != S::one() {
        return Err(Error::NotNormalized(format!("{norm}")));
    }
    let blocks = parity_blocks(xi)?;
    let w_oe = weyl_matrix(f, ParityClass::Odd, ParityClass::Even)?;
    // W(f)* blocks are transposes of the opposite-parity blocks.
    let wstar_eo = w_oe.adjoint(); // even <- odd

    let pp = fock_expand(&blocks.pp)?;
    let pm = fock_expand(&blocks.pm.compose(&w_oe)?)?.with_right_w(f.clone());
    let mp = fock_expand(&wstar_eo.compose(&blocks.mp)?)?.with_left_w(f.clone());
    let mm = fock_expand(&wstar_eo.compose(&blocks.mm)?.compose(&w_oe)?)?
        .with_left_w(f.clone())
        .with_right_w(f.clone());
    Ok(FullExpansion {
        weyl_vector: f.clone(),
        pp,
        pm,
        mp,
        mm,
    })
}
