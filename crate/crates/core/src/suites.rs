//! Named verification suites behind the CLI `verify` command and the
//! acceptance tests. Every check computes its two sides independently
//! (brute-force dense enumeration against the sparse implementations where
//! a law has two routes) and reports a minimal reproducing instance on
//! failure.

use crate::bits::{subsets, Subset};
use crate::bounds::{run_grid, BoundGrid};
use crate::contract::{
    alt_project, contract_left, contract_right, contraction_c, contraction_c_adjoint, transpose_t,
    wedge_contract, AltBlockTensor, BlockTensor, Side,
};
use crate::error::Result;
use crate::expansion::{
    fock_expand, fock_expand_closed, fock_expand_full, parity_blocks, reconstruct, taylor_kernels,
};
use crate::fock::{
    annihilate, create, exp_vector, fock_pairing, parity_split, s_taylor, s_transform,
    s_transform_direct, FockVector,
};
use crate::linalg::{rank_exact, Matrix};
use crate::modespace::{ModeSpace, Ms};
use crate::operator::{symbol_eval, weyl_matrix, OperatorMatrix, ParityClass};
use crate::oracle::{self, FlatTensor};
use crate::scalar::Scalar;
use crate::wedge::{antisymmetrize, gram_pairing, wedge_product, DenseTensor, WedgeTensor};
use crate::Rational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Clone, Debug)]
pub struct Check {
    pub id: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        SuiteReport {
            suite: suite.into(),
            checks: Vec::new(),
        }
    }

    fn push(&mut self, id: &str, pass: bool, detail: String) {
        self.checks.push(Check {
            id: id.into(),
            pass,
            detail,
        });
    }

    fn assert_eq<T: PartialEq + std::fmt::Debug>(
        &mut self,
        id: &str,
        lhs: T,
        rhs: T,
        instance: &str,
    ) {
        let pass = lhs == rhs;
        let detail = if pass {
            instance.to_string()
        } else {
            format!("{instance}: lhs={lhs:?} rhs={rhs:?}")
        };
        self.push(id, pass, detail);
    }

    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

pub fn random_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::ratio(rng.gen_range(-9..=9), rng.gen_range(1..=4))
}

pub fn random_wedge_q(
    ms: &Ms<Rational>,
    degree: usize,
    rng: &mut ChaCha8Rng,
) -> WedgeTensor<Rational> {
    let entries = subsets(ms.dim(), degree)
        .into_iter()
        .map(|s| (s, random_rational(rng)))
        .collect();
    WedgeTensor::from_entries(ms, degree, entries).expect("valid subsets")
}

pub fn random_block_q(
    ms: &Ms<Rational>,
    left: usize,
    right: usize,
    rng: &mut ChaCha8Rng,
) -> BlockTensor<Rational> {
    let mut out = BlockTensor::zero(ms, left, right);
    for t in crate::bits::tuples(ms.dim(), left + right) {
        if rng.gen_bool(0.5) {
            out.insert(t, random_rational(rng));
        }
    }
    out
}

/// Rational unit vector built from e₁ by exact plane rotations
/// (cos, sin) = ((1−t²)/(1+t²), 2t/(1+t²)).
pub fn random_unit_q(ms: &Ms<Rational>, rng: &mut ChaCha8Rng) -> WedgeTensor<Rational> {
    let d = ms.dim();
    let mut coords = vec![Rational::zero(); d];
    coords[0] = Rational::one();
    for i in 0..d {
        for j in (i + 1)..d {
            if rng.gen_bool(0.6) {
                let t = Rational::ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3));
                let denom = Rational::one() + t.clone() * t.clone();
                let c = (Rational::one() - t.clone() * t.clone()) / denom.clone();
                let s = Rational::from_int(2) * t / denom;
                let (xi, xj) = (coords[i].clone(), coords[j].clone());
                coords[i] = c.clone() * xi.clone() - s.clone() * xj.clone();
                coords[j] = s * xi + c * xj;
            }
        }
    }
    let entries = coords
        .into_iter()
        .enumerate()
        .map(|(i, v)| (Subset::from_modes(&[i + 1], d).expect("in range"), v))
        .collect();
    WedgeTensor::from_entries(ms, 1, entries).expect("unit vector coords")
}

fn random_even_fock_q(ms: &Ms<Rational>, rng: &mut ChaCha8Rng) -> FockVector<Rational> {
    let mut out = FockVector::zero(ms);
    for deg in (0..=ms.dim()).step_by(2) {
        out.add_component(random_wedge_q(ms, deg, rng));
    }
    out
}

// ---------------------------------------------------------------------------
// car suite: CAR relations, squares, duality, W involution
// ---------------------------------------------------------------------------

pub fn run_car(ms: &Ms<Rational>, seed: u64) -> Result<SuiteReport> {
    let ms = ms.clone();
    let d = ms.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::new("car");

    let basis = crate::operator::FockBasis::new(d, ParityClass::Full);
    let basis_vectors: Vec<FockVector<Rational>> = basis
        .elems()
        .iter()
        .map(|&(n, s)| {
            FockVector::from_component(
                WedgeTensor::from_entries(&ms, n, vec![(s, Rational::one())]).expect("basis"),
            )
        })
        .collect();

    // {a†(e_i), a(e_j)}φ = δ_ij·φ over all basis pairs and all basis φ
    let mut anti_ok = true;
    let mut anti_detail = format!("d={d}, {} basis states", basis_vectors.len());
    'outer: for i in 1..=d {
        let f = WedgeTensor::basis_vector(&ms, i)?;
        for j in 1..=d {
            let g = WedgeTensor::basis_vector(&ms, j)?;
            let delta = g.pair(&f)?;
            for phi in &basis_vectors {
                let lhs =
                    create(&f, &annihilate(&g, phi)?)?.add(&annihilate(&g, &create(&f, phi)?)?)?;
                if lhs != phi.scale(&delta) {
                    anti_ok = false;
                    anti_detail = format!("counterexample f=e{i}, g=e{j}");
                    break 'outer;
                }
            }
        }
    }
    rep.push(
        "car.anticommutator {a'(f),a(g)} = <g,f>",
        anti_ok,
        anti_detail,
    );

    // a(f)² = a†(f)² = 0 on random f and random mixed vectors
    let mut sq_ok = true;
    let mut sq_detail = String::from("20 random f");
    for k in 0..20 {
        let f = random_wedge_q(&ms, 1, &mut rng);
        let mut phi = random_even_fock_q(&ms, &mut rng);
        phi.add_component(random_wedge_q(&ms, 1, &mut rng));
        let aa = annihilate(&f, &annihilate(&f, &phi)?)?;
        let cc = create(&f, &create(&f, &phi)?)?;
        if !aa.is_zero() || !cc.is_zero() {
            sq_ok = false;
            sq_detail = format!("failure at instance {k}");
            break;
        }
    }
    rep.push("car.squares a(f)^2 = a'(f)^2 = 0", sq_ok, sq_detail);

    // duality <<a†(f)Φ, φ>> = <<Φ, a(f)φ>> on random instances
    let mut dual_ok = true;
    let mut dual_detail = String::from("20 random instances");
    for k in 0..20 {
        let f = random_wedge_q(&ms, 1, &mut rng);
        let phi = random_even_fock_q(&ms, &mut rng);
        let mut psi = FockVector::zero(&ms);
        for deg in (1..=ms.dim()).step_by(2) {
            psi.add_component(random_wedge_q(&ms, deg, &mut rng));
        }
        let lhs = fock_pairing(&create(&f, &phi)?, &psi)?;
        let rhs = fock_pairing(&phi, &annihilate(&f, &psi)?)?;
        if lhs != rhs {
            dual_ok = false;
            dual_detail = format!("failure at instance {k}");
            break;
        }
    }
    rep.push(
        "car.duality a'(f) = a(f)* under <<.,.>>",
        dual_ok,
        dual_detail,
    );

    // W(f)² = identity as a full matrix for 20 random normalized rational f
    let id = OperatorMatrix::identity(&ms, ParityClass::Full);
    let mut w_ok = true;
    let mut w_detail = String::from("20 random normalized f");
    for k in 0..20 {
        let f = random_unit_q(&ms, &mut rng);
        let w = weyl_matrix(&f, ParityClass::Full, ParityClass::Full)?;
        if w.compose(&w)? != id {
            w_ok = false;
            w_detail = format!("failure at instance {k}");
            break;
        }
    }
    rep.push(
        "car.weyl-involution W(f)^2 = 1 for (f,f) = 1",
        w_ok,
        w_detail,
    );

    // negative control: (f,f)₀ = 4 gives W(f)² = 4·identity
    let f = random_unit_q(&ms, &mut rng).scale(&Rational::from_int(2));
    let w = weyl_matrix(&f, ParityClass::Full, ParityClass::Full)?;
    rep.assert_eq(
        "car.weyl-scaling W(2f)^2 = 4",
        w.compose(&w)?,
        id.scale(&Rational::from_int(4)),
        "(f,f)=4 control",
    );
    Ok(rep)
}

// ---------------------------------------------------------------------------
// wedge suite: alternizer laws, determinant formula, norms
// ---------------------------------------------------------------------------

pub fn run_wedge(ms: &Ms<Rational>, seed: u64) -> Result<SuiteReport> {
    let ms = ms.clone();
    let d = ms.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::new("wedge");

    // determinant formula on 100 random rational vector lists, n ≤ 4
    let mut det_ok = true;
    let mut det_detail = String::from("100 random lists, n <= 4");
    for k in 0..100 {
        let n = rng.gen_range(1..=4.min(d));
        let f: Vec<_> = (0..n).map(|_| random_wedge_q(&ms, 1, &mut rng)).collect();
        let g: Vec<_> = (0..n).map(|_| random_wedge_q(&ms, 1, &mut rng)).collect();
        let mut fw = WedgeTensor::scalar(&ms, Rational::one());
        let mut gw = WedgeTensor::scalar(&ms, Rational::one());
        for i in 0..n {
            fw = wedge_product(&fw, &f[i])?;
            gw = wedge_product(&gw, &g[i])?;
        }
        if fw.pair(&gw)? != gram_pairing(&f, &g)? {
            det_ok = false;
            det_detail = format!("failure at instance {k} (n={n})");
            break;
        }
    }
    rep.push(
        "wedge.determinant-formula (1/n!)det = pairing",
        det_ok,
        det_detail,
    );

    // alternizer idempotence and self-adjointness against the flat oracle
    let mut alt_ok = true;
    let mut adj_ok = true;
    let mut alt_detail = String::from("30 random dense tensors");
    for k in 0..30 {
        let deg = rng.gen_range(0..=3.min(d));
        let x = random_dense_q(&ms, deg, &mut rng);
        let y = random_dense_q(&ms, deg, &mut rng);
        let ax = antisymmetrize(&x);
        // idempotence
        if antisymmetrize(&ax.embed_dense()) != ax {
            alt_ok = false;
            alt_detail = format!("idempotence failure at instance {k}");
            break;
        }
        // oracle agreement
        let flat = oracle::alternize(&FlatTensor::from_dense(&x));
        if flat.to_dense(&ms) != ax.embed_dense() {
            alt_ok = false;
            alt_detail = format!("oracle mismatch at instance {k}");
            break;
        }
        // self-adjointness <Ax, y> = <x, Ay>
        let lhs = ax.embed_dense().pair(&y)?;
        let rhs = x.pair(&antisymmetrize(&y).embed_dense())?;
        if lhs != rhs {
            adj_ok = false;
        }
    }
    rep.push(
        "wedge.alternizer idempotent + oracle match",
        alt_ok,
        alt_detail,
    );
    rep.push(
        "wedge.alternizer self-adjoint for <.,.>",
        adj_ok,
        "30 random pairs".into(),
    );

    // graded commutativity and associativity
    let mut law_ok = true;
    let mut law_detail = String::from("40 random triples");
    for k in 0..40 {
        let (na, nb, nc) = (
            rng.gen_range(0..=2),
            rng.gen_range(0..=2),
            rng.gen_range(0..=2),
        );
        let a = random_wedge_q(&ms, na, &mut rng);
        let b = random_wedge_q(&ms, nb, &mut rng);
        let c = random_wedge_q(&ms, nc, &mut rng);
        let ab = wedge_product(&a, &b)?;
        let ba = wedge_product(&b, &a)?;
        let sign = if (na * nb) % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        if ab != ba.scale(&sign) {
            law_ok = false;
            law_detail = format!("commutativity failure at instance {k}");
            break;
        }
        if wedge_product(&ab, &c)? != wedge_product(&a, &wedge_product(&b, &c)?)? {
            law_ok = false;
            law_detail = format!("associativity failure at instance {k}");
            break;
        }
    }
    rep.push(
        "wedge.graded-commutativity + associativity",
        law_ok,
        law_detail,
    );

    // degrees above d vanish
    let a = random_wedge_q(&ms, d, &mut rng);
    let b = random_wedge_q(&ms, 1, &mut rng);
    rep.push(
        "wedge.degree-overflow vanishes",
        wedge_product(&a, &b)?.is_zero(),
        format!("degree {} at d={d}", d + 1),
    );

    // |f∧g|₀² ≤ |f|₀²·|g|₀² on random inputs (exact rational comparison)
    let mut norm_ok = true;
    let mut norm_detail = String::from("40 random pairs");
    for k in 0..40 {
        let nf = rng.gen_range(0..=2.min(d));
        let ng = rng.gen_range(0..=(d - nf).min(2));
        let f = random_wedge_q(&ms, nf, &mut rng);
        let g = random_wedge_q(&ms, ng, &mut rng);
        let prod = wedge_product(&f, &g)?;
        if prod.norm_sq(0) > f.norm_sq(0) * g.norm_sq(0) {
            norm_ok = false;
            norm_detail = format!("failure at instance {k}");
            break;
        }
    }
    rep.push(
        "wedge.norm-submultiplicativity |f^g| <= |f||g|",
        norm_ok,
        norm_detail,
    );
    Ok(rep)
}

fn random_dense_q(ms: &Ms<Rational>, degree: usize, rng: &mut ChaCha8Rng) -> DenseTensor<Rational> {
    let mut out = DenseTensor::zero(ms, degree);
    for t in crate::bits::tuples(ms.dim(), degree) {
        if rng.gen_bool(0.5) {
            out.insert(t, random_rational(rng));
        }
    }
    out
}

// ---------------------------------------------------------------------------
// contract suite: identities against the dense-enumeration oracle
// ---------------------------------------------------------------------------

pub fn run_contract(ms: &Ms<Rational>, seed: u64, instances: usize) -> Result<SuiteReport> {
    let ms = ms.clone();
    let d = ms.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::new("contract");

    let mut shapes = Vec::new();
    for l in 0..=2usize {
        for m in 0..=2usize {
            for n in 0..=2usize {
                if l + m + n <= 4 && l + m <= d && m + n <= d && l + n <= d {
                    shapes.push((l, m, n));
                }
            }
        }
    }

    // transpose-adjoint: <κ ⊗_m φ, ψ> = <κ, t_{l,n}(ψ) ⊗^n φ>
    let mut ok = true;
    let mut detail = format!("{instances} random instances");
    for k in 0..instances {
        let (l, m, n) = shapes[rng.gen_range(0..shapes.len())];
        let kappa = random_block_q(&ms, l, m, &mut rng);
        let phi = random_block_q(&ms, n, m, &mut rng);
        let psi = random_block_q(&ms, l, n, &mut rng);
        let lhs = contract_right(&kappa, &phi, m)?.pair(&psi)?;
        // both sides independently through the flat oracle
        let tpsi = oracle::transpose(&FlatTensor::from_block(&psi), l);
        let rhs_flat = oracle::contract_left(&tpsi, &FlatTensor::from_block(&phi), n);
        let rhs = oracle::pairing(&FlatTensor::from_block(&kappa), &rhs_flat);
        if lhs != rhs {
            ok = false;
            detail = format!("failure at instance {k}, (l,m,n)=({l},{m},{n})");
            break;
        }
        // and the library transpose agrees with the oracle transpose
        if FlatTensor::from_block(&transpose_t(&psi)) != tpsi {
            ok = false;
            detail = format!("transpose mismatch at instance {k}");
            break;
        }
    }
    rep.push(
        "contract.transpose-adjoint <k x_m phi, psi> = <k, t(psi) x^n phi>",
        ok,
        detail,
    );

    // contraction operator composition c(l-n1,m-n1;n2)∘c(l,m;n1) = c(l,m;n1+n2)
    let mut ok = true;
    let mut detail = format!("{instances} random instances");
    for k in 0..instances {
        let (l, m) = (rng.gen_range(0..=2usize) + 2, rng.gen_range(0..=1usize) + 2);
        if l + m > 2 * d {
            continue;
        }
        let x = random_block_q(&ms, l, m, &mut rng);
        let n1 = rng.gen_range(0..=l.min(m));
        let n2 = rng.gen_range(0..=(l - n1).min(m - n1));
        let lhs = contraction_c(&contraction_c(&x, n1)?, n2)?;
        let rhs_flat = oracle::contraction_c(&FlatTensor::from_block(&x), l, n1 + n2);
        if FlatTensor::from_block(&lhs) != rhs_flat {
            ok = false;
            detail = format!("failure at instance {k}, (l,m,n1,n2)=({l},{m},{n1},{n2})");
            break;
        }
    }
    rep.push("contract.c-composition c∘c = c(n1+n2)", ok, detail);

    // c* adjointness: <c*(y), x> = <y, c(x)> exactly
    let mut ok = true;
    let mut detail = format!("{instances} random instances");
    for k in 0..instances {
        let (l, m) = (rng.gen_range(1..=2usize), rng.gen_range(1..=2usize));
        let n = rng.gen_range(0..=l.min(m));
        let x = random_block_q(&ms, l, m, &mut rng);
        let y = random_block_q(&ms, l - n, m - n, &mut rng);
        let lhs = contraction_c_adjoint(&y, l, m, n)?.pair(&x)?;
        let rhs = oracle::pairing(
            &FlatTensor::from_block(&y),
            &oracle::contraction_c(&FlatTensor::from_block(&x), l, n),
        );
        if lhs != rhs {
            ok = false;
            detail = format!("failure at instance {k}, (l,m,n)=({l},{m},{n})");
            break;
        }
        // library c against oracle c
        if FlatTensor::from_block(&contraction_c(&x, n)?)
            != oracle::contraction_c(&FlatTensor::from_block(&x), l, n)
        {
            ok = false;
            detail = format!("c oracle mismatch at instance {k}");
            break;
        }
    }
    rep.push("contract.c-adjoint <c*(y), x> = <y, c(x)>", ok, detail);

    // sign law F∧^m g = (−1)^{m(l+n)}·F∧_m g on antisymmetric inputs
    let mut ok = true;
    let mut detail = format!("{instances} random instances");
    for k in 0..instances {
        let (l, m, n) = shapes[rng.gen_range(0..shapes.len())];
        let f = random_wedge_q(&ms, l + m, &mut rng);
        let g = random_wedge_q(&ms, m + n, &mut rng);
        let fb = BlockTensor::from_dense(&f.embed_dense(), m, l)?;
        let gb = BlockTensor::from_dense(&g.embed_dense(), m, n)?;
        let left = wedge_contract(&fb, &gb, m, Side::Left)?;
        let right = wedge_contract(&fb, &gb, m, Side::Right)?;
        let sign = if (m * (l + n)) % 2 == 0 {
            Rational::one()
        } else {
            -Rational::one()
        };
        if left != right.scale(&sign) {
            ok = false;
            detail = format!("failure at instance {k}, (l,m,n)=({l},{m},{n})");
            break;
        }
        // oracle route for the left contraction
        let flat = oracle::alternize(&oracle::contract_left(
            &FlatTensor::from_wedge(&f),
            &FlatTensor::from_wedge(&g),
            m,
        ));
        if flat.to_dense(&ms) != left.embed_dense() {
            ok = false;
            detail = format!("oracle mismatch at instance {k}");
            break;
        }
        // even m: the two coincide
        if m % 2 == 0 && left != right {
            ok = false;
            detail = format!("even-m coincidence failure at instance {k}");
            break;
        }
    }
    rep.push("contract.sign-law F^m g = (-1)^{m(l+n)} F_m g", ok, detail);

    // even-m coincidence checked across all admissible even m
    let mut ok = true;
    let mut detail = format!("{instances} random instances");
    for k in 0..instances {
        let even_shapes: Vec<_> = shapes.iter().filter(|(_, m, _)| m % 2 == 0).collect();
        let (l, m, n) = *even_shapes[rng.gen_range(0..even_shapes.len())];
        let f = random_wedge_q(&ms, l + m, &mut rng);
        let g = random_wedge_q(&ms, m + n, &mut rng);
        let fb = BlockTensor::from_dense(&f.embed_dense(), m, l)?;
        let gb = BlockTensor::from_dense(&g.embed_dense(), m, n)?;
        if wedge_contract(&fb, &gb, m, Side::Left)? != wedge_contract(&fb, &gb, m, Side::Right)? {
            ok = false;
            detail = format!("failure at instance {k}, (l,m,n)=({l},{m},{n})");
            break;
        }
    }
    rep.push("contract.even-m left/right coincidence", ok, detail);

    // library contractions against the oracle on general block tensors
    let mut ok = true;
    let mut detail = format!("{instances} random instances");
    for k in 0..instances {
        let (l, m, n) = shapes[rng.gen_range(0..shapes.len())];
        let f = random_block_q(&ms, m, l, &mut rng);
        let g = random_block_q(&ms, m, n, &mut rng);
        let lib = contract_left(&f, &g, m)?;
        let flat =
            oracle::contract_left(&FlatTensor::from_block(&f), &FlatTensor::from_block(&g), m);
        if FlatTensor::from_block(&lib) != flat {
            ok = false;
            detail = format!("left mismatch at instance {k}");
            break;
        }
        let f = random_block_q(&ms, l, m, &mut rng);
        let g = random_block_q(&ms, n, m, &mut rng);
        let lib = contract_right(&f, &g, m)?;
        let flat =
            oracle::contract_right(&FlatTensor::from_block(&f), &FlatTensor::from_block(&g), m);
        if FlatTensor::from_block(&lib) != flat {
            ok = false;
            detail = format!("right mismatch at instance {k}");
            break;
        }
    }
    rep.push(
        "contract.oracle-agreement left/right contractions",
        ok,
        detail,
    );

    // blockwise antisymmetrization idempotent and oracle-consistent
    let mut ok = true;
    let mut detail = format!("{instances} random instances");
    for k in 0..instances {
        let (l, m) = (rng.gen_range(0..=2usize), rng.gen_range(0..=2usize));
        let x = random_block_q(&ms, l, m, &mut rng);
        let a = alt_project(&x);
        if alt_project(&a.embed()) != a {
            ok = false;
            detail = format!("idempotence failure at instance {k}");
            break;
        }
        let flat = oracle::alternize_blocks(&FlatTensor::from_block(&x), l);
        if FlatTensor::from_block(&a.embed()) != flat {
            ok = false;
            detail = format!("oracle mismatch at instance {k}");
            break;
        }
    }
    rep.push(
        "contract.alt-projection idempotent + oracle match",
        ok,
        detail,
    );

    // mixed norm at (p, p) equals the tuple-basis p-norm
    let mut ok = true;
    let mut detail = format!("{instances} random instances");
    for k in 0..instances {
        let (l, m) = (rng.gen_range(0..=2usize), rng.gen_range(0..=2usize));
        let x = random_block_q(&ms, l, m, &mut rng);
        let p = rng.gen_range(-2..=2i64);
        if x.mixed_norm_sq(p, p) != x.to_dense().norm_sq(p) {
            ok = false;
            detail = format!("failure at instance {k}");
            break;
        }
    }
    rep.push("contract.mixed-norm diagonal equals tuple norm", ok, detail);
    Ok(rep)
}

// ---------------------------------------------------------------------------
// bounds suite
// ---------------------------------------------------------------------------

pub fn run_bounds(ms: &Ms<f64>, seed: u64, grid: &BoundGrid) -> Result<SuiteReport> {
    let reports = run_grid(ms, grid, seed)?;
    let mut rep = SuiteReport::new("bounds");
    for id in crate::bounds::BoundId::ALL {
        let mine: Vec<_> = reports.iter().filter(|r| r.id == id).collect();
        let fails: Vec<_> = mine.iter().filter(|r| !r.holds).collect();
        let detail = if fails.is_empty() {
            let extra = mine
                .iter()
                .find(|r| !r.note.is_empty() && r.id == crate::bounds::BoundId::B12)
                .map(|r| {
                    format!(
                        "; first tail: {} lhs={:.6e} rhs={:.6e}",
                        r.note, r.lhs, r.rhs
                    )
                })
                .unwrap_or_default();
            format!("{} instances ({}){extra}", mine.len(), id.describe())
        } else {
            let f = fails[0];
            format!(
                "{} failures of {}; first: lhs={} rhs={} params=({}, {}, {}, {}) {}",
                fails.len(),
                mine.len(),
                f.lhs,
                f.rhs,
                f.params.p,
                f.params.q,
                f.params.r,
                f.params.alpha,
                f.note
            )
        };
        rep.push(&format!("bounds.{id}"), fails.is_empty(), detail);
    }
    Ok(rep)
}

// ---------------------------------------------------------------------------
// expansion suite: round trips, closed form, symbol consistency,
// S-transform, density shadow
// ---------------------------------------------------------------------------

pub fn run_expansion(
    ms: &Ms<Rational>,
    msf: &Ms<f64>,
    seed: u64,
    operators: usize,
) -> Result<SuiteReport> {
    let ms = ms.clone();
    let d = ms.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::new("expansion");

    // identity extracts to the single scalar kernel
    let id = OperatorMatrix::identity(&ms, ParityClass::Even);
    let fam = fock_expand(&id)?;
    let id_ok = fam.len() == 1
        && fam
            .term(0, 0)
            .map(|k| k.kernel().get((Subset::EMPTY, Subset::EMPTY)) == Rational::one())
            == Some(true);
    rep.push(
        "expansion.identity extracts to {(0,0) -> 1}",
        id_ok,
        String::new(),
    );

    // random even operators: round trip, alt-canonical kernels, uniqueness,
    // closed = recursive
    let mut round_ok = true;
    let mut alt_ok = true;
    let mut unique_ok = true;
    let mut closed_ok = true;
    let mut detail = format!("{operators} random even operators at d={d}");
    for k in 0..operators {
        let xi = OperatorMatrix::random(&ms, ParityClass::Even, ParityClass::Even, &mut rng);
        let fam = fock_expand(&xi)?;
        if reconstruct(&fam)? != xi {
            round_ok = false;
            detail = format!("round-trip failure at operator {k}");
            break;
        }
        for (_, kd) in fam.terms() {
            if alt_project(&kd.kernel().embed()) != *kd.kernel() {
                alt_ok = false;
            }
            let re = fock_expand(&kd.matrix()?)?;
            if re.len() != 1 || re.term(kd.l(), kd.m()).map(|x| x.kernel()) != Some(kd.kernel()) {
                unique_ok = false;
            }
        }
        if fock_expand_closed(&xi)? != fam {
            closed_ok = false;
            detail = format!("closed/recursive mismatch at operator {k}");
            break;
        }
    }
    rep.push(
        "expansion.round-trip reconstruct(expand) = identity map",
        round_ok,
        detail.clone(),
    );
    rep.push("expansion.kernels alt-canonical", alt_ok, detail.clone());
    rep.push(
        "expansion.uniqueness re-extraction returns the kernel",
        unique_ok,
        detail.clone(),
    );
    rep.push("expansion.closed equals recursive", closed_ok, detail);

    // symbol consistency: interpolated coefficients of the two-variable
    // symbol polynomial equal <K_{l,m}, eta^l x zeta^m>
    let mut sym_ok = true;
    let mut sym_detail = format!("{} random operators", operators.min(20));
    'symbol: for k in 0..operators.min(20) {
        let xi = OperatorMatrix::random(&ms, ParityClass::Even, ParityClass::Even, &mut rng);
        let zeta = random_wedge_q(&ms, 2, &mut rng);
        let eta = random_wedge_q(&ms, 2, &mut rng);
        let half = d / 2;
        let nodes: Vec<Rational> = (0..=half as i64).map(Rational::from_int).collect();
        // values P(z, w) on the grid
        let mut values = Vec::new();
        for z in &nodes {
            for w in &nodes {
                values.push(symbol_eval(&xi, &zeta.scale(z), &eta.scale(w))?);
            }
        }
        // solve the two-variable Vandermonde system exactly
        let nn = nodes.len();
        let vand = Matrix::from_fn(nn * nn, nn * nn, |row, col| {
            let (zi, wi) = (row / nn, row % nn);
            let (a, b) = (col / nn, col % nn);
            nodes[zi].pow_exp(a as i64) * nodes[wi].pow_exp(b as i64)
        });
        let coeffs = vand.solve(&values)?;
        let kmap = taylor_kernels(&xi)?;
        for l in 0..=half {
            for m in 0..=half {
                // coefficient of z^m·w^l must equal <K_{l,m}, eta^l x zeta^m>
                let got = coeffs[m * nn + l].clone();
                let want = pair_k_with_powers_q(&kmap[&(l, m)], &eta, &zeta, l, m)?;
                if got != want {
                    sym_ok = false;
                    sym_detail = format!("failure at operator {k}, (l,m)=({l},{m})");
                    break 'symbol;
                }
            }
        }
    }
    rep.push(
        "expansion.symbol-consistency Taylor data equals K tensors",
        sym_ok,
        sym_detail,
    );

    // S-transform: the two evaluation paths agree; Taylor polynomial matches
    let mut st_ok = true;
    let mut st_detail = String::from("20 random instances, z in {0,1,-1,2}");
    for k in 0..20 {
        let phi = random_even_fock_q(&ms, &mut rng);
        let zeta = random_wedge_q(&ms, 2, &mut rng);
        let eta = random_wedge_q(&ms, 2, &mut rng);
        if s_transform(&phi, &zeta)? != s_transform_direct(&phi, &zeta)? {
            st_ok = false;
            st_detail = format!("path mismatch at instance {k}");
            break;
        }
        let taylor = s_taylor(&phi, &zeta, &eta)?;
        for z in [0i64, 1, -1, 2] {
            let zq = Rational::from_int(z);
            let arg = zeta.scale(&zq).add(&eta)?;
            let direct = s_transform(&phi, &arg)?;
            let mut poly = Rational::zero();
            for (i, a) in taylor.iter().enumerate() {
                poly += a.clone() * zq.pow_exp(i as i64);
            }
            if direct != poly {
                st_ok = false;
                st_detail = format!("Taylor mismatch at instance {k}, z={z}");
                break;
            }
        }
    }
    rep.push(
        "expansion.s-transform paths + Taylor polynomial",
        st_ok,
        st_detail,
    );

    // ||e+(zeta)||_p^2 <= exp(|zeta|_p^2) on random float instances
    let mut exp_ok = true;
    let mut exp_detail = String::from("50 random float instances");
    for k in 0..50 {
        let entries = subsets(d, 2)
            .into_iter()
            .map(|s| (s, rng.gen_range(-1.5..1.5)))
            .collect();
        let zeta = WedgeTensor::<f64>::from_entries(msf, 2, entries)?;
        for p in [-1.0, 0.0, 1.0] {
            let lhs = exp_vector(&zeta)?.norm_sq(p);
            let rhs = zeta.norm_sq(p).exp();
            if lhs > rhs * (1.0 + 1e-12) {
                exp_ok = false;
                exp_detail = format!("failure at instance {k}, p={p}");
                break;
            }
        }
    }
    rep.push("expansion.exp-vector norm bound", exp_ok, exp_detail);

    // density shadow: Gram matrix of 12 random exponential vectors has full
    // even rank 2^{d-1}
    let count = 12.max(1 << (d - 1));
    let evs: Vec<FockVector<Rational>> = (0..count)
        .map(|_| exp_vector(&random_wedge_q(&ms, 2, &mut rng)))
        .collect::<Result<_>>()?;
    let gram = Matrix::from_fn(count, count, |i, j| {
        fock_pairing(&evs[i], &evs[j]).expect("same space")
    });
    let rank = rank_exact(&gram);
    rep.assert_eq(
        "expansion.density-shadow exponential vectors span the even sector",
        rank,
        1 << (d - 1),
        &format!("{count} random exponential vectors"),
    );
    Ok(rep)
}

fn pair_k_with_powers_q(
    k: &AltBlockTensor<Rational>,
    eta: &WedgeTensor<Rational>,
    zeta: &WedgeTensor<Rational>,
    l: usize,
    m: usize,
) -> Result<Rational> {
    let ms = k.ms();
    let mut eta_l = WedgeTensor::scalar(ms, Rational::one());
    for _ in 0..l {
        eta_l = wedge_product(&eta_l, eta)?;
    }
    let mut zeta_m = WedgeTensor::scalar(ms, Rational::one());
    for _ in 0..m {
        zeta_m = wedge_product(&zeta_m, zeta)?;
    }
    let mut x = BlockTensor::zero(ms, 2 * l, 2 * m);
    for (t1, v1) in eta_l.embed_dense().entries() {
        for (t2, v2) in zeta_m.embed_dense().entries() {
            let mut key = t1.clone();
            key.extend_from_slice(t2);
            x.insert(key, v1.clone() * v2.clone());
        }
    }
    k.pair_block(&x)
}

// ---------------------------------------------------------------------------
// full suite: whole-system expansion by W conjugation
// ---------------------------------------------------------------------------

pub fn run_full(ms: &Ms<Rational>, seed: u64, operators: usize) -> Result<SuiteReport> {
    let ms = ms.clone();
    let d = ms.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rep = SuiteReport::new("full");

    let f = WedgeTensor::basis_vector(&ms, 1)?;
    let mut round_ok = true;
    let mut blocks_ok = true;
    let mut detail = format!("{operators} random full operators at d={d}, f=e1");
    for k in 0..operators {
        let xi = OperatorMatrix::random(&ms, ParityClass::Full, ParityClass::Full, &mut rng);
        let blocks = parity_blocks(&xi)?;
        let full = |m: &OperatorMatrix<Rational>| m.embed(ParityClass::Full, ParityClass::Full);
        let sum = full(&blocks.pp)
            .add(&full(&blocks.pm))?
            .add(&full(&blocks.mp))?
            .add(&full(&blocks.mm))?;
        if sum != xi {
            blocks_ok = false;
            detail = format!("parity reassembly failure at operator {k}");
            break;
        }
        let ex = fock_expand_full(&xi, &f)?;
        if ex.reconstruct()? != xi {
            round_ok = false;
            detail = format!("round-trip failure at operator {k}");
            break;
        }
    }
    rep.push("full.parity-blocks reassemble", blocks_ok, detail.clone());
    rep.push("full.whole-system round trip", round_ok, detail);

    // parity-flip structure of a creation operator
    let adag = crate::operator::create_matrix(&f, ParityClass::Full, ParityClass::Full)?;
    let blocks = parity_blocks(&adag)?;
    rep.push(
        "full.creation-operator parity structure",
        blocks.pp.matrix().is_zero()
            && blocks.mm.matrix().is_zero()
            && !blocks.pm.matrix().is_zero()
            && !blocks.mp.matrix().is_zero(),
        "a'(e1) populates only the parity-flipping blocks".into(),
    );

    // negative control: reconstructing with a scaled (non-unit) f breaks
    let xi = OperatorMatrix::random(&ms, ParityClass::Full, ParityClass::Full, &mut rng);
    let blocks = parity_blocks(&xi)?;
    let f2 = f.scale(&Rational::from_int(2));
    let w_oe = weyl_matrix(&f2, ParityClass::Odd, ParityClass::Even)?;
    let fam = fock_expand(&blocks.pm.compose(&w_oe)?)?.with_right_w(f2.clone());
    let bad = reconstruct(&fam)?;
    rep.push(
        "full.negative-control non-normalized W breaks the round trip",
        bad != blocks.pm && fock_expand_full(&xi, &f2).is_err(),
        "(f,f)=4".into(),
    );

    // parity split of vectors round-trips
    let mut phi = FockVector::from_component(random_wedge_q(&ms, 1, &mut rng));
    phi.add_component(random_wedge_q(&ms, 2, &mut rng));
    let (even, odd) = parity_split(&phi);
    rep.assert_eq(
        "full.vector parity split reassembles",
        even.add(&odd)?,
        phi,
        "mixed vector",
    );
    Ok(rep)
}

/// First k modes of a space (identity when k >= dim).
fn truncate<S: crate::scalar::Scalar>(ms: &Ms<S>, k: usize) -> Result<Ms<S>> {
    if ms.dim() <= k {
        return Ok(ms.clone());
    }
    ModeSpace::new(k, ms.lambdas()[..k].to_vec(), ms.alpha().clone())
}

/// Runs the named suite at its standard scale (instance counts match the
/// acceptance tests). The contraction-identity suite caps the mode count at
/// 3 to keep the exhaustive dense oracle fast.
pub fn run_suite(
    name: &str,
    ms_q: &Ms<Rational>,
    ms_f: &Ms<f64>,
    seed: u64,
    grid: &BoundGrid,
) -> Result<Vec<SuiteReport>> {
    match name {
        "car" => Ok(vec![run_car(ms_q, seed)?]),
        "wedge" => Ok(vec![run_wedge(ms_q, seed)?]),
        "contract" => Ok(vec![run_contract(&truncate(ms_q, 3)?, seed, 50)?]),
        "bounds" => Ok(vec![run_bounds(ms_f, seed, grid)?]),
        "expansion" => Ok(vec![run_expansion(ms_q, ms_f, seed, 50)?]),
        "full" => Ok(vec![run_full(ms_q, seed, 20)?]),
        "all" => Ok(vec![
            run_car(ms_q, seed)?,
            run_wedge(ms_q, seed)?,
            run_contract(&truncate(ms_q, 3)?, seed, 50)?,
            run_bounds(ms_f, seed, grid)?,
            run_expansion(ms_q, ms_f, seed, 50)?,
            run_full(ms_q, seed, 20)?,
        ]),
        other => Err(crate::error::Error::InvalidParameter(format!(
            "unknown suite '{other}'"
        ))),
    }
}
