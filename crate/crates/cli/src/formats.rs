//! JSON file formats: mode spaces, Fock vectors, operator matrices, and
//! kernel families. Output is canonical: components by degree, entries in
//! lexicographic mode-list order, rationals rendered as "num/den" strings
//! (floats as plain numbers), so identical inputs produce identical bytes.

use anyhow::{anyhow, bail, Context, Result};
use fockex::bits::Subset;
use fockex::contract::AltBlockTensor;
use fockex::expansion::{FullExpansion, KernelFamily};
use fockex::fock::FockVector;
use fockex::kernelop::KernelDistribution;
use fockex::modespace::{ModeSpace, Ms};
use fockex::operator::{OperatorMatrix, ParityClass};
use fockex::wedge::WedgeTensor;
use fockex::{Rational, Scalar};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ValueRepr {
    Num(f64),
    Str(String),
}

/// Scalar modes the CLI understands.
pub trait CliScalar: Scalar {
    const ARITH: &'static str;
    fn parse_value(v: &ValueRepr) -> Result<Self>;
    fn render(&self) -> ValueRepr;
}

impl CliScalar for Rational {
    const ARITH: &'static str = "rational";

    fn parse_value(v: &ValueRepr) -> Result<Self> {
        match v {
            ValueRepr::Str(s) => {
                Rational::from_str(s.trim()).map_err(|e| anyhow!("bad rational '{s}': {e}"))
            }
            ValueRepr::Num(x) => {
                if x.fract() == 0.0 && x.abs() < 9e15 {
                    Ok(Rational::from_int(*x as i64))
                } else {
                    bail!("rational mode needs exact values, got {x}")
                }
            }
        }
    }

    fn render(&self) -> ValueRepr {
        ValueRepr::Str(self.to_string())
    }
}

impl CliScalar for f64 {
    const ARITH: &'static str = "float";

    fn parse_value(v: &ValueRepr) -> Result<Self> {
        match v {
            ValueRepr::Num(x) => Ok(*x),
            ValueRepr::Str(s) => {
                if let Ok(x) = s.trim().parse::<f64>() {
                    return Ok(x);
                }
                let q = Rational::from_str(s.trim())
                    .map_err(|e| anyhow!("bad numeric value '{s}': {e}"))?;
                num::ToPrimitive::to_f64(&q)
                    .ok_or_else(|| anyhow!("value '{s}' is not representable as f64"))
            }
        }
    }

    fn render(&self) -> ValueRepr {
        ValueRepr::Num(*self)
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModeSpaceFile {
    pub dim: usize,
    pub lambdas: Vec<ValueRepr>,
    pub alpha: ValueRepr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct VecEntry {
    pub modes: Vec<usize>,
    pub value: ValueRepr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ComponentFile {
    pub degree: usize,
    pub entries: Vec<VecEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FockVectorFile {
    pub components: Vec<ComponentFile>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MatEntry {
    pub row: Vec<usize>,
    pub col: Vec<usize>,
    pub value: ValueRepr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct BlockFile {
    pub out_degree: usize,
    pub in_degree: usize,
    pub entries: Vec<MatEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KerEntry {
    pub left: Vec<usize>,
    pub right: Vec<usize>,
    pub value: ValueRepr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TermFile {
    pub l: usize,
    pub m: usize,
    pub entries: Vec<KerEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamilyBody {
    pub terms: Vec<TermFile>,
    #[serde(rename = "left_W", skip_serializing_if = "Option::is_none")]
    pub left_w: Option<Vec<VecEntry>>,
    #[serde(rename = "right_W", skip_serializing_if = "Option::is_none")]
    pub right_w: Option<Vec<VecEntry>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FamiliesFile {
    pub pp: FamilyBody,
    pub pm: FamilyBody,
    pub mp: FamilyBody,
    pub mm: FamilyBody,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum OperatorFile {
    #[serde(rename = "matrix")]
    Matrix {
        parity: String,
        blocks: Vec<BlockFile>,
    },
    #[serde(rename = "kernels")]
    Kernels {
        #[serde(flatten)]
        body: FamilyBody,
        #[serde(skip_serializing_if = "Option::is_none")]
        residual: Option<ValueRepr>,
    },
    #[serde(rename = "kernels_full")]
    KernelsFull {
        weyl: Vec<VecEntry>,
        families: FamiliesFile,
        #[serde(skip_serializing_if = "Option::is_none")]
        residual: Option<ValueRepr>,
    },
}

// ---------------------------------------------------------------------------
// mode space
// ---------------------------------------------------------------------------

pub fn mode_space_from_file<S: CliScalar>(f: &ModeSpaceFile) -> Result<Ms<S>> {
    let lambdas = f
        .lambdas
        .iter()
        .map(|v| S::parse_value(v))
        .collect::<Result<Vec<_>>>()
        .context("mode space eigenvalues")?;
    let alpha = S::parse_value(&f.alpha).context("mode space alpha")?;
    Ok(ModeSpace::new(f.dim, lambdas, alpha)?)
}

// ---------------------------------------------------------------------------
// Fock vectors
// ---------------------------------------------------------------------------

pub fn vector_to_file<S: CliScalar>(phi: &FockVector<S>) -> FockVectorFile {
    let mut components = Vec::new();
    for (degree, w) in phi.components() {
        let mut entries: Vec<VecEntry> = w
            .entries()
            .map(|(s, v)| VecEntry {
                modes: s.modes(),
                value: v.render(),
            })
            .collect();
        entries.sort_by(|a, b| a.modes.cmp(&b.modes));
        components.push(ComponentFile {
            degree: *degree,
            entries,
        });
    }
    FockVectorFile { components }
}

pub fn vector_from_file<S: CliScalar>(ms: &Ms<S>, f: &FockVectorFile) -> Result<FockVector<S>> {
    let mut out = FockVector::zero(ms);
    for comp in &f.components {
        let mut entries = Vec::new();
        for e in &comp.entries {
            if e.modes.len() != comp.degree {
                bail!("entry {:?} in a degree-{} component", e.modes, comp.degree);
            }
            let s = Subset::from_modes(&e.modes, ms.dim())?;
            entries.push((s, S::parse_value(&e.value)?));
        }
        out.add_component(WedgeTensor::from_entries(ms, comp.degree, entries)?);
    }
    Ok(out)
}

/// A single wedge tensor of the stated degree (a one-component vector file).
pub fn wedge_from_file<S: CliScalar>(
    ms: &Ms<S>,
    f: &FockVectorFile,
    degree: usize,
) -> Result<WedgeTensor<S>> {
    let phi = vector_from_file(ms, f)?;
    let degrees = phi.degrees();
    if degrees.is_empty() {
        return Ok(WedgeTensor::zero(ms, degree));
    }
    if degrees != vec![degree] {
        bail!("expected a single degree-{degree} component, found degrees {degrees:?}");
    }
    Ok(phi.component(degree).expect("present").clone())
}

// ---------------------------------------------------------------------------
// operator matrices
// ---------------------------------------------------------------------------

fn parity_name(p: ParityClass) -> &'static str {
    match p {
        ParityClass::Even => "even",
        ParityClass::Odd => "odd",
        ParityClass::Full => "full",
    }
}

fn parity_of(name: &str) -> Result<ParityClass> {
    match name {
        "even" => Ok(ParityClass::Even),
        "odd" => Ok(ParityClass::Odd),
        "full" => Ok(ParityClass::Full),
        other => bail!("unknown parity '{other}' (expected even, odd, or full)"),
    }
}

pub fn operator_to_file<S: CliScalar>(op: &OperatorMatrix<S>) -> OperatorFile {
    // even->even and odd->odd keep their label; anything else embeds as full
    let (op, parity) = if op.row_basis().parity() == op.col_basis().parity()
        && op.row_basis().parity() != ParityClass::Full
    {
        (op.clone(), parity_name(op.row_basis().parity()))
    } else if op.row_basis().parity() == ParityClass::Full
        && op.col_basis().parity() == ParityClass::Full
    {
        (op.clone(), "full")
    } else {
        (op.embed(ParityClass::Full, ParityClass::Full), "full")
    };
    let mut blocks: Vec<BlockFile> = Vec::new();
    for row in 0..op.row_basis().len() {
        let (dr, sr) = op.row_basis().elem(row);
        for col in 0..op.col_basis().len() {
            let v = op.entry(row, col);
            if v.is_zero() {
                continue;
            }
            let (dc, sc) = op.col_basis().elem(col);
            let entry = MatEntry {
                row: sr.modes(),
                col: sc.modes(),
                value: v.render(),
            };
            match blocks
                .iter_mut()
                .find(|b| b.out_degree == dr && b.in_degree == dc)
            {
                Some(b) => b.entries.push(entry),
                None => blocks.push(BlockFile {
                    out_degree: dr,
                    in_degree: dc,
                    entries: vec![entry],
                }),
            }
        }
    }
    blocks.sort_by_key(|b| (b.out_degree, b.in_degree));
    for b in &mut blocks {
        b.entries
            .sort_by(|a, b| (a.row.clone(), a.col.clone()).cmp(&(b.row.clone(), b.col.clone())));
    }
    OperatorFile::Matrix {
        parity: parity.to_string(),
        blocks,
    }
}

pub fn operator_from_file<S: CliScalar>(
    ms: &Ms<S>,
    parity: &str,
    blocks: &[BlockFile],
) -> Result<OperatorMatrix<S>> {
    let p = parity_of(parity)?;
    let mut op = OperatorMatrix::zeros(ms, p, p);
    for b in blocks {
        for e in &b.entries {
            if e.row.len() != b.out_degree || e.col.len() != b.in_degree {
                bail!(
                    "entry ({:?}, {:?}) in block ({}, {})",
                    e.row,
                    e.col,
                    b.out_degree,
                    b.in_degree
                );
            }
            let sr = Subset::from_modes(&e.row, ms.dim())?;
            let sc = Subset::from_modes(&e.col, ms.dim())?;
            let row = op
                .row_basis()
                .position(b.out_degree, sr)
                .ok_or_else(|| anyhow!("row {:?} outside the {parity} sector", e.row))?;
            let col = op
                .col_basis()
                .position(b.in_degree, sc)
                .ok_or_else(|| anyhow!("column {:?} outside the {parity} sector", e.col))?;
            op.set_entry(row, col, S::parse_value(&e.value)?);
        }
    }
    Ok(op)
}

// ---------------------------------------------------------------------------
// kernel families
// ---------------------------------------------------------------------------

fn wedge_to_entries<S: CliScalar>(w: &WedgeTensor<S>) -> Vec<VecEntry> {
    let mut entries: Vec<VecEntry> = w
        .entries()
        .map(|(s, v)| VecEntry {
            modes: s.modes(),
            value: v.render(),
        })
        .collect();
    entries.sort_by(|a, b| a.modes.cmp(&b.modes));
    entries
}

fn wedge_from_entries<S: CliScalar>(
    ms: &Ms<S>,
    entries: &[VecEntry],
    degree: usize,
) -> Result<WedgeTensor<S>> {
    let mut list = Vec::new();
    for e in entries {
        if e.modes.len() != degree {
            bail!("W-vector entry {:?} must have degree {degree}", e.modes);
        }
        list.push((
            Subset::from_modes(&e.modes, ms.dim())?,
            S::parse_value(&e.value)?,
        ));
    }
    Ok(WedgeTensor::from_entries(ms, degree, list)?)
}

pub fn family_to_body<S: CliScalar>(fam: &KernelFamily<S>) -> FamilyBody {
    let mut terms = Vec::new();
    for ((l, m), k) in fam.terms() {
        let mut entries: Vec<KerEntry> = k
            .kernel()
            .entries()
            .map(|((a, b), v)| KerEntry {
                left: a.modes(),
                right: b.modes(),
                value: v.render(),
            })
            .collect();
        entries.sort_by(|a, b| {
            (a.left.clone(), a.right.clone()).cmp(&(b.left.clone(), b.right.clone()))
        });
        terms.push(TermFile {
            l: *l,
            m: *m,
            entries,
        });
    }
    FamilyBody {
        terms,
        left_w: fam.left_w().map(wedge_to_entries),
        right_w: fam.right_w().map(wedge_to_entries),
    }
}

pub fn family_from_body<S: CliScalar>(ms: &Ms<S>, body: &FamilyBody) -> Result<KernelFamily<S>> {
    let mut fam = KernelFamily::new(ms);
    for term in &body.terms {
        let mut alt = AltBlockTensor::zero(ms, 2 * term.l, 2 * term.m);
        for e in &term.entries {
            if e.left.len() != 2 * term.l || e.right.len() != 2 * term.m {
                bail!(
                    "kernel entry ({:?}, {:?}) in a ({}, {}) term",
                    e.left,
                    e.right,
                    term.l,
                    term.m
                );
            }
            let a = Subset::from_modes(&e.left, ms.dim())?;
            let b = Subset::from_modes(&e.right, ms.dim())?;
            alt.insert((a, b), S::parse_value(&e.value)?);
        }
        fam.insert(KernelDistribution::new(term.l, term.m, alt)?);
    }
    if let Some(entries) = &body.left_w {
        fam = fam.with_left_w(wedge_from_entries(ms, entries, 1)?);
    }
    if let Some(entries) = &body.right_w {
        fam = fam.with_right_w(wedge_from_entries(ms, entries, 1)?);
    }
    Ok(fam)
}

pub fn full_expansion_to_file<S: CliScalar>(
    ex: &FullExpansion<S>,
    residual: Option<ValueRepr>,
) -> OperatorFile {
    OperatorFile::KernelsFull {
        weyl: wedge_to_entries(&ex.weyl_vector),
        families: FamiliesFile {
            pp: family_to_body(&ex.pp),
            pm: family_to_body(&ex.pm),
            mp: family_to_body(&ex.mp),
            mm: family_to_body(&ex.mm),
        },
        residual,
    }
}

pub fn full_expansion_from_file<S: CliScalar>(
    ms: &Ms<S>,
    weyl: &[VecEntry],
    families: &FamiliesFile,
) -> Result<FullExpansion<S>> {
    Ok(FullExpansion {
        weyl_vector: wedge_from_entries(ms, weyl, 1)?,
        pp: family_from_body(ms, &families.pp)?,
        pm: family_from_body(ms, &families.pm)?,
        mp: family_from_body(ms, &families.mp)?,
        mm: family_from_body(ms, &families.mm)?,
    })
}
