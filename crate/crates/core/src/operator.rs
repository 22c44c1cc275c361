//! Operators on the truncated Fock space as degree-blocked matrices in the
//! wedge subset basis.
//!
//! The subset basis is orthonormal for the factorial-weighted bilinear
//! pairing (⟨⟨e_I, e_J⟩⟩ = δ_{IJ}), so the pairing adjoint of a matrix is
//! its plain transpose and coefficient vectors pair by dot product.

use crate::bits::{subsets, Subset};
use crate::error::{Error, Result};
use crate::fock::{annihilate, create, fock_pairing, weyl, FockVector, Parity};
use crate::linalg::Matrix;
use crate::modespace::Ms;
use crate::scalar::Scalar;
use crate::wedge::WedgeTensor;
use rand::Rng;
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ParityClass {
    Even,
    Odd,
    Full,
}

impl ParityClass {
    pub fn admits(&self, degree: usize) -> bool {
        match self {
            ParityClass::Even => degree % 2 == 0,
            ParityClass::Odd => degree % 2 == 1,
            ParityClass::Full => true,
        }
    }

    pub fn admits_vector(&self, parity: Parity) -> bool {
        matches!(
            (self, parity),
            (ParityClass::Full, _)
                | (ParityClass::Even, Parity::Even)
                | (ParityClass::Odd, Parity::Odd)
        )
    }
}

/// Ordered wedge basis of a parity sector: degrees ascending, subsets in
/// ascending mask order within a degree.
#[derive(Clone, Debug, PartialEq)]
pub struct FockBasis {
    parity: ParityClass,
    elems: Vec<(usize, Subset)>,
    index: BTreeMap<(usize, Subset), usize>,
}

impl FockBasis {
    pub fn new(dim: usize, parity: ParityClass) -> Self {
        let mut elems = Vec::new();
        for degree in 0..=dim {
            if parity.admits(degree) {
                for s in subsets(dim, degree) {
                    elems.push((degree, s));
                }
            }
        }
        let index = elems.iter().enumerate().map(|(i, &k)| (k, i)).collect();
        FockBasis {
            parity,
            elems,
            index,
        }
    }

    pub fn parity(&self) -> ParityClass {
        self.parity
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elem(&self, i: usize) -> (usize, Subset) {
        self.elems[i]
    }

    pub fn elems(&self) -> &[(usize, Subset)] {
        &self.elems
    }

    pub fn position(&self, degree: usize, s: Subset) -> Option<usize> {
        self.index.get(&(degree, s)).copied()
    }
}

/// Linear operator between parity sectors, stored densely over the wedge
/// basis. Rows index the output sector, columns the input sector.
#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix<S: Scalar> {
    ms: Ms<S>,
    rows: FockBasis,
    cols: FockBasis,
    mat: Matrix<S>,
}

impl<S: Scalar> OperatorMatrix<S> {
    pub fn zeros(ms: &Ms<S>, out: ParityClass, input: ParityClass) -> Self {
        let rows = FockBasis::new(ms.dim(), out);
        let cols = FockBasis::new(ms.dim(), input);
        let mat = Matrix::zeros(rows.len(), cols.len());
        OperatorMatrix {
            ms: ms.clone(),
            rows,
            cols,
            mat,
        }
    }

    pub fn identity(ms: &Ms<S>, parity: ParityClass) -> Self {
        let mut out = Self::zeros(ms, parity, parity);
        for i in 0..out.rows.len() {
            out.mat.set(i, i, S::one());
        }
        out
    }

    /// Builds the matrix of a vector-in/vector-out operator by applying it
    /// to every basis vector of the input sector.
    pub fn from_apply(
        ms: &Ms<S>,
        out: ParityClass,
        input: ParityClass,
        mut op: impl FnMut(&FockVector<S>) -> Result<FockVector<S>>,
    ) -> Result<Self> {
        let mut matrix = Self::zeros(ms, out, input);
        for col in 0..matrix.cols.len() {
            let (degree, s) = matrix.cols.elem(col);
            let basis_vec = FockVector::from_component(WedgeTensor::from_entries(
                ms,
                degree,
                vec![(s, S::one())],
            )?);
            let image = op(&basis_vec)?;
            matrix.set_column(col, &image)?;
        }
        Ok(matrix)
    }

    fn set_column(&mut self, col: usize, image: &FockVector<S>) -> Result<()> {
        for (n, w) in image.components() {
            for (s, v) in w.entries() {
                let Some(row) = self.rows.position(*n, *s) else {
                    return Err(Error::ParityViolation(format!(
                        "operator image has a degree-{n} component outside the output sector"
                    )));
                };
                self.mat.set(row, col, v.clone());
            }
        }
        Ok(())
    }

    pub fn ms(&self) -> &Ms<S> {
        &self.ms
    }

    pub fn row_basis(&self) -> &FockBasis {
        &self.rows
    }

    pub fn col_basis(&self) -> &FockBasis {
        &self.cols
    }

    pub fn matrix(&self) -> &Matrix<S> {
        &self.mat
    }

    pub fn entry(&self, row: usize, col: usize) -> &S {
        self.mat.get(row, col)
    }

    pub fn set_entry(&mut self, row: usize, col: usize, v: S) {
        self.mat.set(row, col, v);
    }

    pub fn is_even(&self) -> bool {
        self.rows.parity() == ParityClass::Even && self.cols.parity() == ParityClass::Even
    }

    /// Coefficient vector of φ in the column basis.
    pub fn vector_of(&self, phi: &FockVector<S>) -> Result<Vec<S>> {
        vector_in_basis(&self.cols, phi)
    }

    pub fn apply(&self, phi: &FockVector<S>) -> Result<FockVector<S>> {
        if phi.ms() != &self.ms {
            return Err(Error::ModeSpaceMismatch);
        }
        let v = vector_in_basis(&self.cols, phi)?;
        let out = self.mat.apply(&v);
        Ok(vector_from_basis(&self.ms, &self.rows, &out))
    }

    /// Composition self∘other (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.ms != other.ms {
            return Err(Error::ModeSpaceMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::BlockMismatch(
                "operator composition sector mismatch".into(),
            ));
        }
        Ok(OperatorMatrix {
            ms: self.ms.clone(),
            rows: self.rows.clone(),
            cols: other.cols.clone(),
            mat: self.mat.mul(&other.mat)?,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.ms != other.ms || self.rows != other.rows || self.cols != other.cols {
            return Err(Error::BlockMismatch("operator sum sector mismatch".into()));
        }
        Ok(OperatorMatrix {
            ms: self.ms.clone(),
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            mat: self.mat.add(&other.mat)?,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-S::one()))
    }

    pub fn scale(&self, c: &S) -> Self {
        OperatorMatrix {
            ms: self.ms.clone(),
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            mat: self.mat.scale(c),
        }
    }

    /// Pairing adjoint: the transpose, since the basis is ⟨⟨·,·⟩⟩-orthonormal.
    pub fn adjoint(&self) -> Self {
        OperatorMatrix {
            ms: self.ms.clone(),
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            mat: self.mat.transpose(),
        }
    }

    /// Restriction to a parity block (rows to `out`, columns to `input`).
    pub fn restrict(&self, out: ParityClass, input: ParityClass) -> Self {
        let rows = FockBasis::new(self.ms.dim(), out);
        let cols = FockBasis::new(self.ms.dim(), input);
        let mat = Matrix::from_fn(rows.len(), cols.len(), |r, c| {
            let (dr, sr) = rows.elem(r);
            let (dc, sc) = cols.elem(c);
            match (self.rows.position(dr, sr), self.cols.position(dc, sc)) {
                (Some(i), Some(j)) => self.mat.get(i, j).clone(),
                _ => S::zero(),
            }
        });
        OperatorMatrix {
            ms: self.ms.clone(),
            rows,
            cols,
            mat,
        }
    }

    /// Embedding into larger parity sectors (missing entries are zero).
    pub fn embed(&self, out: ParityClass, input: ParityClass) -> Self {
        let rows = FockBasis::new(self.ms.dim(), out);
        let cols = FockBasis::new(self.ms.dim(), input);
        let mut mat = Matrix::zeros(rows.len(), cols.len());
        for r in 0..self.rows.len() {
            let (dr, sr) = self.rows.elem(r);
            let Some(nr) = rows.position(dr, sr) else {
                continue;
            };
            for c in 0..self.cols.len() {
                let v = self.mat.get(r, c);
                if v.is_zero() {
                    continue;
                }
                let (dc, sc) = self.cols.elem(c);
                if let Some(nc) = cols.position(dc, sc) {
                    mat.set(nr, nc, v.clone());
                }
            }
        }
        OperatorMatrix {
            ms: self.ms.clone(),
            rows,
            cols,
            mat,
        }
    }

    /// The (out_degree, in_degree) block as a dense matrix over subsets.
    pub fn block(&self, out_degree: usize, in_degree: usize) -> Matrix<S> {
        let row_sets = subsets(self.ms.dim(), out_degree);
        let col_sets = subsets(self.ms.dim(), in_degree);
        Matrix::from_fn(row_sets.len(), col_sets.len(), |r, c| {
            match (
                self.rows.position(out_degree, row_sets[r]),
                self.cols.position(in_degree, col_sets[c]),
            ) {
                (Some(i), Some(j)) => self.mat.get(i, j).clone(),
                _ => S::zero(),
            }
        })
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<S> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::BlockMismatch(
                "operator comparison sector mismatch".into(),
            ));
        }
        Ok(self.mat.sub(&other.mat)?.max_abs())
    }

    pub fn random<R: Rng>(ms: &Ms<S>, out: ParityClass, input: ParityClass, rng: &mut R) -> Self {
        let mut m = Self::zeros(ms, out, input);
        for r in 0..m.rows.len() {
            for c in 0..m.cols.len() {
                m.mat
                    .set(r, c, S::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=3)));
            }
        }
        m
    }
}

pub fn vector_in_basis<S: Scalar>(basis: &FockBasis, phi: &FockVector<S>) -> Result<Vec<S>> {
    let mut v = vec![S::zero(); basis.len()];
    for (n, w) in phi.components() {
        for (s, c) in w.entries() {
            let Some(i) = basis.position(*n, *s) else {
                return Err(Error::ParityViolation(format!(
                    "vector has a degree-{n} component outside the sector"
                )));
            };
            v[i] = c.clone();
        }
    }
    Ok(v)
}

pub fn vector_from_basis<S: Scalar>(ms: &Ms<S>, basis: &FockBasis, v: &[S]) -> FockVector<S> {
    let mut per_degree: BTreeMap<usize, Vec<(Subset, S)>> = BTreeMap::new();
    for (i, c) in v.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let (n, s) = basis.elem(i);
        per_degree.entry(n).or_default().push((s, c.clone()));
    }
    let mut out = FockVector::zero(ms);
    for (n, entries) in per_degree {
        out.set_component(WedgeTensor::from_entries(ms, n, entries).expect("basis keys are valid"));
    }
    out
}

/// Matrix of a†(f) between the stated sectors.
pub fn create_matrix<S: Scalar>(
    f: &WedgeTensor<S>,
    out: ParityClass,
    input: ParityClass,
) -> Result<OperatorMatrix<S>> {
    let ms = f.ms().clone();
    let f = f.clone();
    OperatorMatrix::from_apply(&ms, out, input, move |phi| create(&f, phi))
}

/// Matrix of a(f) between the stated sectors.
pub fn annihilate_matrix<S: Scalar>(
    f: &WedgeTensor<S>,
    out: ParityClass,
    input: ParityClass,
) -> Result<OperatorMatrix<S>> {
    let ms = f.ms().clone();
    let f = f.clone();
    OperatorMatrix::from_apply(&ms, out, input, move |phi| annihilate(&f, phi))
}

/// Matrix of W(f) = a†(f) + a(Jf) between the stated sectors.
pub fn weyl_matrix<S: Scalar>(
    f: &WedgeTensor<S>,
    out: ParityClass,
    input: ParityClass,
) -> Result<OperatorMatrix<S>> {
    let ms = f.ms().clone();
    let f = f.clone();
    OperatorMatrix::from_apply(&ms, out, input, move |phi| weyl(&f, phi))
}

/// ⟨⟨Ξ e⁺(ζ), e⁺(η)⟩⟩ — the operator symbol, evaluated through the
/// exponential vectors and the Fock pairing.
pub fn symbol_eval<S: Scalar>(
    xi: &OperatorMatrix<S>,
    zeta: &WedgeTensor<S>,
    eta: &WedgeTensor<S>,
) -> Result<S> {
    if !xi.is_even() {
        return Err(Error::ParityViolation(
            "symbol needs an even-to-even operator".into(),
        ));
    }
    let ez = crate::fock::exp_vector(zeta)?;
    let ee = crate::fock::exp_vector(eta)?;
    fock_pairing(&xi.apply(&ez)?, &ee)
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

    #[test]
    fn basis_sizes() {
        let even = FockBasis::new(4, ParityClass::Even);
        assert_eq!(even.len(), 8);
        let odd = FockBasis::new(4, ParityClass::Odd);
        assert_eq!(odd.len(), 8);
        let full = FockBasis::new(4, ParityClass::Full);
        assert_eq!(full.len(), 16);
        assert_eq!(full.elem(0), (0, Subset::EMPTY));
    }

    #[test]
    fn matrix_application_round_trip() {
        let ms = ModeSpace::<Q>::standard(3);
        let id = OperatorMatrix::identity(&ms, ParityClass::Full);
        let mut phi = FockVector::from_component(WedgeTensor::basis(&ms, &[1, 3]).unwrap());
        phi.add_component(WedgeTensor::basis(&ms, &[2]).unwrap().scale(&r(7, 2)));
        assert_eq!(id.apply(&phi).unwrap(), phi);
    }

    #[test]
    fn ladder_matrices_match_functions() {
        let ms = ModeSpace::<Q>::standard(3);
        let f = WedgeTensor::basis_vector(&ms, 2).unwrap().scale(&r(3, 4));
        let a = annihilate_matrix(&f, ParityClass::Full, ParityClass::Full).unwrap();
        let c = create_matrix(&f, ParityClass::Full, ParityClass::Full).unwrap();
        let mut phi = FockVector::from_component(WedgeTensor::basis(&ms, &[1, 2]).unwrap());
        phi.add_component(WedgeTensor::basis(&ms, &[3]).unwrap());
        assert_eq!(a.apply(&phi).unwrap(), annihilate(&f, &phi).unwrap());
        assert_eq!(c.apply(&phi).unwrap(), create(&f, &phi).unwrap());
        // duality: the pairing adjoint of creation is annihilation
        assert_eq!(c.adjoint(), a);
    }

    #[test]
    fn restrict_and_embed() {
        let ms = ModeSpace::<Q>::standard(3);
        let f = WedgeTensor::basis_vector(&ms, 1).unwrap();
        let w = weyl_matrix(&f, ParityClass::Full, ParityClass::Full).unwrap();
        let w_eo = w.restrict(ParityClass::Even, ParityClass::Odd);
        let w_oe = w.restrict(ParityClass::Odd, ParityClass::Even);
        // parity-flipping: the even->even and odd->odd blocks vanish
        assert!(w
            .restrict(ParityClass::Even, ParityClass::Even)
            .matrix()
            .is_zero());
        assert!(w
            .restrict(ParityClass::Odd, ParityClass::Odd)
            .matrix()
            .is_zero());
        let back = w_eo
            .embed(ParityClass::Full, ParityClass::Full)
            .add(&w_oe.embed(ParityClass::Full, ParityClass::Full))
            .unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn symbol_of_identity() {
        let ms = ModeSpace::<Q>::standard(4);
        let id = OperatorMatrix::identity(&ms, ParityClass::Even);
        let z = WedgeTensor::basis(&ms, &[1, 2]).unwrap();
        // 1 + <zeta, eta> / 2 = 1 + 1/4
        assert_eq!(symbol_eval(&id, &z, &z).unwrap(), r(5, 4));
        let zero = OperatorMatrix::zeros(&ms, ParityClass::Even, ParityClass::Even);
        assert_eq!(symbol_eval(&zero, &z, &z).unwrap(), r(0, 1));
        // vacuum-vacuum element at zeta = eta = 0
        let zero2 = WedgeTensor::zero(&ms, 2);
        assert_eq!(symbol_eval(&id, &zero2, &zero2).unwrap(), r(1, 1));
    }
}
