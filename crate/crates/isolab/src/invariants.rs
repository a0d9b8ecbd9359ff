//! Exact polynomial invariants on graded pieces: characteristic-polynomial
//! coefficients and the pfaffian, evaluated pointwise (never expanded
//! symbolically). Bi-homogeneous components are extracted by interpolation
//! along the scaling of one summand; directional derivatives are computed
//! with dual numbers, falling back to interpolation where a dual pivot
//! degenerates.

use exact_linalg::{charpoly_coeffs, pfaffian, Dual, LinalgError, Mat, RingElem, Scalar, Subspace};
use serde::Serialize;

use crate::cartan::CartanSubspace;
use crate::contraction::{DegeneratedModule, Variant};
use crate::error::IsolabError;
use crate::invol::QuaternionicDecomposition;
use crate::lie::{bracket, centralizer, Alg, Element, FormConvention};
use crate::sample::{element_in, vec_in, SampleRng};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum OracleKind {
    /// Coefficient of t^(n-k) in det(tI - M), a degree-k invariant.
    CharPolyCoeff(usize),
    Pfaffian,
}

/// A polynomial function given by an exact evaluator on algebra coefficients.
pub trait PolyEvaluator {
    fn degree(&self) -> usize;
    fn eval_scalar(&self, point: &[Scalar]) -> Scalar;
    fn eval_dual(&self, point: &[Dual]) -> Dual;
}

#[derive(Clone)]
pub struct InvariantOracle {
    alg: Alg,
    domain: Subspace,
    pub kind: OracleKind,
    pub degree: usize,
}

fn rep_ring<R: RingElem>(alg: &Alg, point: &[R]) -> Vec<Vec<R>> {
    let n = alg.rep_dim();
    let mut m = vec![vec![R::zero(); n]; n];
    for (i, c) in point.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let b = alg.basis_mat(i);
        for (r, row) in m.iter_mut().enumerate() {
            for (col, slot) in row.iter_mut().enumerate() {
                let e = b.get(r, col);
                if !e.is_zero() {
                    *slot = slot.add(&c.mul(&R::from_scalar(e)));
                }
            }
        }
    }
    m
}

fn gram_times<R: RingElem>(gram: &Mat, m: &[Vec<R>]) -> Vec<Vec<R>> {
    let n = m.len();
    let mut out = vec![vec![R::zero(); n]; n];
    for r in 0..n {
        for k in 0..n {
            let g = gram.get(r, k);
            if g.is_zero() {
                continue;
            }
            let gr = R::from_scalar(g);
            for c in 0..n {
                if !m[k][c].is_zero() {
                    out[r][c] = out[r][c].add(&gr.mul(&m[k][c]));
                }
            }
        }
    }
    out
}

impl InvariantOracle {
    pub fn domain(&self) -> &Subspace {
        &self.domain
    }

    fn eval_ring<R: RingElem>(&self, point: &[R]) -> Result<R, LinalgError> {
        let m = rep_ring(&self.alg, point);
        match self.kind {
            OracleKind::CharPolyCoeff(k) => {
                let coeffs = charpoly_coeffs(&m);
                Ok(coeffs[k - 1].clone())
            }
            OracleKind::Pfaffian => {
                let gram = match self.alg.form() {
                    FormConvention::Orthogonal { gram } => gram,
                    _ => unreachable!("pfaffian oracle only built on orthogonal algebras"),
                };
                pfaffian(&gram_times(gram, &m))
            }
        }
    }

    pub fn eval(&self, v: &Element) -> Scalar {
        self.eval_scalar(v.coeffs())
    }
}

impl PolyEvaluator for InvariantOracle {
    fn degree(&self) -> usize {
        self.degree
    }

    fn eval_scalar(&self, point: &[Scalar]) -> Scalar {
        self.eval_ring::<Scalar>(point).expect("field pivots always exist")
    }

    fn eval_dual(&self, point: &[Dual]) -> Dual {
        match self.eval_ring::<Dual>(point) {
            Ok(v) => v,
            Err(_) => {
                // dual pivot degenerated (pfaffian elimination); recover the
                // derivative by interpolation along the dual direction
                let d = self.degree;
                let vals: Vec<Scalar> = (0..=d as i64)
                    .map(|e| {
                        let pt: Vec<Scalar> = point
                            .iter()
                            .map(|x| x.val.add(&x.der.mul_int(e)))
                            .collect();
                        self.eval_scalar(&pt)
                    })
                    .collect();
                let w = coeff_weights(d);
                let val = vals[0].clone();
                let mut der = Scalar::zero();
                for (t, v) in vals.iter().enumerate() {
                    der = der.add(&w[1][t].mul(v));
                }
                Dual { val, der }
            }
        }
    }
}

/// Row j of the inverse Vandermonde at the nodes 0..=d: the weights that
/// extract the coefficient of t^j from values at those nodes.
fn coeff_weights(d: usize) -> Vec<Vec<Scalar>> {
    let v = Mat::from_fn(d + 1, d + 1, |t, j| Scalar::from_int(t as i64).pow(j as u32));
    let inv = v.inverse().expect("Vandermonde at distinct nodes");
    (0..=d).map(|j| (0..=d).map(|t| inv.get(j, t).clone()).collect()).collect()
}

/// The family of basic invariants used on a big graded piece: nonvanishing
/// characteristic-polynomial coefficients, plus the pfaffian on even
/// orthogonal realizations.
pub struct InvariantFamily {
    pub alg: Alg,
    pub domain: Subspace,
    pub oracles: Vec<InvariantOracle>,
}

/// Characteristic-polynomial coefficient oracles on a domain. Coefficients
/// that vanish identically are dropped: odd-degree ones vanish on orthogonal
/// and symplectic realizations by the form identity char(t) = +/- char(-t),
/// and further domain-specific vanishing is detected by exact sampling.
pub fn charpoly_invariants(
    alg: &Alg,
    domain: &Subspace,
    rng: &mut SampleRng,
) -> Vec<InvariantOracle> {
    let n = alg.rep_dim();
    let degrees: Vec<usize> = match alg.form() {
        FormConvention::None => (2..=n).collect(),
        FormConvention::Orthogonal { .. } | FormConvention::Symplectic { .. } => {
            (1..=n).filter(|k| k % 2 == 0).collect()
        }
    };
    let mut out = Vec::new();
    // sample a small set of points once, shared by all degrees
    let pts: Vec<Vec<Scalar>> = (0..8)
        .map(|t| vec_in(rng, domain, 2 + t as i64 / 4))
        .collect();
    for k in degrees {
        let oracle = InvariantOracle {
            alg: alg.clone(),
            domain: domain.clone(),
            kind: OracleKind::CharPolyCoeff(k),
            degree: k,
        };
        if pts.iter().any(|p| !oracle.eval_scalar(p).is_zero()) {
            out.push(oracle);
        }
    }
    out
}

pub fn pfaffian_invariant(alg: &Alg, domain: &Subspace) -> Result<InvariantOracle, IsolabError> {
    match alg.form() {
        FormConvention::Orthogonal { .. } if alg.rep_dim() % 2 == 0 => Ok(InvariantOracle {
            alg: alg.clone(),
            domain: domain.clone(),
            kind: OracleKind::Pfaffian,
            degree: alg.rep_dim() / 2,
        }),
        FormConvention::Orthogonal { .. } => Err(IsolabError::Precondition(
            "pfaffian needs an even orthogonal realization".into(),
        )),
        _ => Err(IsolabError::Precondition(
            "pfaffian is only defined for orthogonal realizations".into(),
        )),
    }
}

/// Assemble the scenario family on a domain and run the construction-time
/// self-tests: homogeneity, and invariance under the supplied witness
/// conjugations (which must preserve the domain).
pub fn invariant_family(
    alg: &Alg,
    domain: &Subspace,
    witnesses: &[Mat],
    rng: &mut SampleRng,
) -> Result<InvariantFamily, IsolabError> {
    let mut oracles = charpoly_invariants(alg, domain, rng);
    if matches!(alg.form(), FormConvention::Orthogonal { .. }) && alg.rep_dim() % 2 == 0 {
        let pf = pfaffian_invariant(alg, domain)?;
        // the top coefficient is the square of the pfaffian; keep the
        // pfaffian instead, unless it vanishes identically on the domain
        oracles.retain(|o| o.kind != OracleKind::CharPolyCoeff(alg.rep_dim()));
        let alive = (0..8).any(|t| {
            let p = vec_in(rng, domain, 2 + t / 4);
            !pf.eval_scalar(&p).is_zero()
        });
        if alive {
            oracles.push(pf);
        }
    }
    oracles.sort_by_key(|o| o.degree);
    let fam = InvariantFamily {
        alg: alg.clone(),
        domain: domain.clone(),
        oracles,
    };
    fam.self_test(witnesses, rng)?;
    Ok(fam)
}

impl InvariantFamily {
    pub fn degrees(&self) -> Vec<usize> {
        self.oracles.iter().map(|o| o.degree).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.oracles.iter().map(|o| o.degree).max().unwrap_or(0)
    }

    /// All oracle values at one point, sharing the characteristic-polynomial
    /// run. Over the field, elimination pivots always exist.
    pub fn eval_all_scalar(&self, point: &[Scalar]) -> Vec<Scalar> {
        let m = rep_ring(&self.alg, point);
        let char_coeffs = charpoly_coeffs(&m);
        let mut out = Vec::with_capacity(self.oracles.len());
        for o in &self.oracles {
            match o.kind {
                OracleKind::CharPolyCoeff(k) => out.push(char_coeffs[k - 1].clone()),
                OracleKind::Pfaffian => {
                    let gram = match self.alg.form() {
                        FormConvention::Orthogonal { gram } => gram,
                        _ => unreachable!(),
                    };
                    out.push(pfaffian(&gram_times(gram, &m)).expect("field pivots"));
                }
            }
        }
        out
    }

    /// Dual-number evaluation; a degenerate pfaffian pivot falls back to
    /// exact interpolation along the dual direction.
    pub fn eval_all_dual(&self, point: &[Dual]) -> Vec<Dual> {
        let m = rep_ring(&self.alg, point);
        let char_coeffs = charpoly_coeffs(&m);
        let mut out = Vec::with_capacity(self.oracles.len());
        for o in &self.oracles {
            match o.kind {
                OracleKind::CharPolyCoeff(k) => out.push(char_coeffs[k - 1].clone()),
                OracleKind::Pfaffian => {
                    let gram = match self.alg.form() {
                        FormConvention::Orthogonal { gram } => gram,
                        _ => unreachable!(),
                    };
                    match pfaffian(&gram_times(gram, &m)) {
                        Ok(v) => out.push(v),
                        Err(_) => out.push(o.eval_dual(point)),
                    }
                }
            }
        }
        out
    }

    fn self_test(&self, witnesses: &[Mat], rng: &mut SampleRng) -> Result<(), IsolabError> {
        for _ in 0..3 {
            let p = vec_in(rng, &self.domain, 3);
            let vals = self.eval_all_scalar(&p);
            // homogeneity under doubling
            let doubled: Vec<Scalar> = p.iter().map(|x| x.mul_int(2)).collect();
            let dvals = self.eval_all_scalar(&doubled);
            for (o, (v, dv)) in self.oracles.iter().zip(vals.iter().zip(&dvals)) {
                if *dv != v.mul(&Scalar::from_int(2).pow(o.degree as u32)) {
                    return Err(IsolabError::Internal(format!(
                        "homogeneity self-test failed for degree {}",
                        o.degree
                    )));
                }
            }
            // invariance under witness conjugations that preserve the domain
            for w in witnesses {
                let winv = w.inverse().ok_or_else(|| {
                    IsolabError::Precondition("witness must be invertible".into())
                })?;
                let x = Element::new(&self.alg, p.clone());
                let conj = w.matmul(&x.rep_matrix()).matmul(&winv);
                let moved = Element::from_matrix(&self.alg, &conj)?;
                if !self.domain.contains_vec(moved.coeffs()) {
                    return Err(IsolabError::Precondition(
                        "witness does not preserve the domain".into(),
                    ));
                }
                let mvals = self.eval_all_scalar(moved.coeffs());
                if mvals != vals {
                    return Err(IsolabError::Internal(
                        "invariance self-test failed for a witness conjugation".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// bi-homogeneous components

/// Splitting of a family over an ordered decomposition of its domain: values
/// of every bi-homogeneous component of every oracle are recovered from
/// max_degree + 1 evaluations along the scaling of the first summand.
pub struct BiHomogSplit<'f> {
    pub family: &'f InvariantFamily,
    /// projection onto the first summand of the split domain
    pub proj_first: Mat,
    nodes: usize,
    weights: Vec<Vec<Scalar>>,
    /// per oracle: degrees j (in the first summand) of provably nonzero
    /// components, found by exact sampling
    pub nonzero: Vec<Vec<usize>>,
}

impl<'f> BiHomogSplit<'f> {
    fn node_points<R: RingElem>(&self, point: &[R]) -> Vec<Vec<R>> {
        let first: Vec<R> = {
            // proj * point over the ring
            let n = self.proj_first.rows();
            let mut out = vec![R::zero(); n];
            for (r, slot) in out.iter_mut().enumerate() {
                for c in 0..n {
                    let p = self.proj_first.get(r, c);
                    if !p.is_zero() && !point[c].is_zero() {
                        *slot = slot.add(&R::from_scalar(p).mul(&point[c]));
                    }
                }
            }
            out
        };
        // evaluation points for t = 0..nodes-1: point + (t-1) * first
        (0..self.nodes as i64)
            .map(|t| {
                point
                    .iter()
                    .zip(&first)
                    .map(|(p, f)| {
                        let shift = f.mul(&R::from_scalar(&Scalar::from_int(t - 1)));
                        p.add(&shift)
                    })
                    .collect()
            })
            .collect()
    }

    fn assemble<R: RingElem>(&self, values: &[Vec<R>]) -> Vec<Vec<R>> {
        let mut comps = Vec::with_capacity(self.family.oracles.len());
        for i in 0..self.family.oracles.len() {
            let mut per_j = Vec::with_capacity(self.nodes);
            for j in 0..self.nodes {
                let mut acc = R::zero();
                for (t, row) in values.iter().enumerate() {
                    let w = &self.weights[j][t];
                    if !w.is_zero() {
                        acc = acc.add(&row[i].mul(&R::from_scalar(w)));
                    }
                }
                per_j.push(acc);
            }
            comps.push(per_j);
        }
        comps
    }

    /// component values comp[oracle][j] for j = 0..=max_degree at one point
    pub fn components_scalar(&self, point: &[Scalar]) -> Vec<Vec<Scalar>> {
        let values: Vec<Vec<Scalar>> = self
            .node_points(point)
            .iter()
            .map(|pt| self.family.eval_all_scalar(pt))
            .collect();
        self.assemble(&values)
    }

    pub fn components_dual(&self, point: &[Dual]) -> Vec<Vec<Dual>> {
        let values: Vec<Vec<Dual>> = self
            .node_points(point)
            .iter()
            .map(|pt| self.family.eval_all_dual(pt))
            .collect();
        self.assemble(&values)
    }

    /// The component of maximal degree in the first summand (nonzero ones
    /// observed by sampling).
    pub fn top_index(&self, oracle: usize) -> Option<usize> {
        self.nonzero[oracle].iter().max().copied()
    }

    /// The component of maximal degree in the second summand.
    pub fn bottom_index(&self, oracle: usize) -> Option<usize> {
        self.nonzero[oracle].iter().min().copied()
    }

    /// Single-component evaluator for gradient work.
    pub fn component_evaluator(&'f self, oracle: usize, j: usize) -> ComponentEval<'f> {
        ComponentEval {
            split: self,
            oracle,
            j,
            degree: self.family.oracles[oracle].degree,
        }
    }
}

/// Identify the nonzero bi-homogeneous components of each family member over
/// the ordered split, by exact evaluation at random points.
pub fn bihomog_extract<'f>(
    family: &'f InvariantFamily,
    proj_first: &Mat,
    rng: &mut SampleRng,
) -> Result<BiHomogSplit<'f>, IsolabError> {
    let d = family.max_degree();
    let split = BiHomogSplit {
        family,
        proj_first: proj_first.clone(),
        nodes: d + 1,
        weights: coeff_weights(d),
        nonzero: vec![Vec::new(); family.oracles.len()],
    };
    let mut nonzero: Vec<std::collections::BTreeSet<usize>> =
        vec![Default::default(); family.oracles.len()];
    let attempts = 24;
    let mut reconstructed_ok = false;
    for t in 0..attempts {
        let p = vec_in(rng, &family.domain, 2 + t as i64 / 8);
        let comps = split.components_scalar(&p);
        let direct = family.eval_all_scalar(&p);
        for (i, per_j) in comps.iter().enumerate() {
            // reconstruction: the components must sum back to the value
            let mut sum = Scalar::zero();
            for c in per_j {
                sum = sum.add(c);
            }
            if sum != direct[i] {
                return Err(IsolabError::Internal(
                    "bi-homogeneous components do not sum to the invariant".into(),
                ));
            }
            for (j, c) in per_j.iter().enumerate() {
                if !c.is_zero() {
                    nonzero[i].insert(j);
                }
            }
        }
        reconstructed_ok = true;
        if nonzero.iter().all(|s| !s.is_empty()) && t >= 8 {
            break;
        }
    }
    if !reconstructed_ok || nonzero.iter().any(|s| s.is_empty()) {
        return Err(IsolabError::Inconclusive {
            what: "bi-homogeneous component identification".into(),
            attempts,
            detail: "all sampled components vanish for some oracle".into(),
        });
    }
    Ok(BiHomogSplit {
        nonzero: nonzero.into_iter().map(|s| s.into_iter().collect()).collect(),
        ..split
    })
}

pub struct ComponentEval<'f> {
    split: &'f BiHomogSplit<'f>,
    oracle: usize,
    j: usize,
    degree: usize,
}

impl PolyEvaluator for ComponentEval<'_> {
    fn degree(&self) -> usize {
        self.degree
    }

    fn eval_scalar(&self, point: &[Scalar]) -> Scalar {
        self.split.components_scalar(point)[self.oracle][self.j].clone()
    }

    fn eval_dual(&self, point: &[Dual]) -> Dual {
        self.split.components_dual(point)[self.oracle][self.j].clone()
    }
}

// ---------------------------------------------------------------------------
// invariance verification

#[derive(Debug, Clone, Serialize)]
pub struct InvarianceFailure {
    pub check: String,
    pub detail: String,
}

/// Exact invariance of an evaluator under the degenerated action: the
/// unipotent radical at group level (the action is affine, so evaluation is
/// exact), and the reductive part through directional derivatives along
/// every basis direction.
pub fn verify_invariance(
    f: &dyn PolyEvaluator,
    module: &DegeneratedModule,
    rng: &mut SampleRng,
    points: usize,
) -> Result<(), InvarianceFailure> {
    let alg_dim = module.space().ambient_dim();
    for s in 0..points {
        let bound = 2 + (s / 8) as i64;
        let v = vec_in(rng, module.space(), bound);
        let x = vec_in(rng, module.g_beta(), bound);
        let ve = elem_from(module, &v);
        let xe = elem_from(module, &x);
        let moved = module.act_exp_nil(&xe, &ve);
        let before = f.eval_scalar(&v);
        let after = f.eval_scalar(moved.coeffs());
        if before != after {
            return Err(InvarianceFailure {
                check: "unipotent".into(),
                detail: format!("F changed along exp of the nilradical at sample {}", s),
            });
        }
    }
    // reductive directions: D_x F(v) = 0 for x over a basis of g00
    for i in 0..module.g00().dim() {
        let x = Element::new(elem_alg(module), module.g00().basis_row(i).to_vec());
        for _ in 0..2 {
            let v = vec_in(rng, module.space(), 2);
            let ve = elem_from(module, &v);
            let dir = bracket(&x, &ve).expect("same algebra");
            let dual_pt: Vec<Dual> = (0..alg_dim)
                .map(|t| Dual {
                    val: v[t].clone(),
                    der: dir.coeffs()[t].clone(),
                })
                .collect();
            let d = f.eval_dual(&dual_pt);
            if !d.der.is_zero() {
                return Err(InvarianceFailure {
                    check: "reductive".into(),
                    detail: format!("nonzero derivative along fixed-part basis direction {}", i),
                });
            }
        }
    }
    Ok(())
}

fn elem_alg(module: &DegeneratedModule) -> &Alg {
    module.algebra()
}

fn elem_from(module: &DegeneratedModule, v: &[Scalar]) -> Element {
    Element::new(elem_alg(module), v.to_vec())
}

/// Contraction-invariance check for the whole family over one ordered split:
/// the top components are invariant for variant A, the bottom ones for
/// variant B, and every component kills the reductive directions.
pub fn verify_family_contraction(
    split: &BiHomogSplit<'_>,
    variant_a: &DegeneratedModule,
    variant_b: &DegeneratedModule,
    rng: &mut SampleRng,
    points: usize,
) -> Result<(), InvarianceFailure> {
    assert_eq!(variant_a.variant, Variant::A);
    assert_eq!(variant_b.variant, Variant::B);
    let alg = elem_alg(variant_a);
    for s in 0..points {
        let bound = 2 + (s / 8) as i64;
        let v = vec_in(rng, variant_a.space(), bound);
        let x = element_in(rng, alg, variant_a.g_beta(), bound);
        let ve = elem_from(variant_a, &v);
        let moved_a = variant_a.act_exp_nil(&x, &ve);
        let moved_b = variant_b.act_exp_nil(&x, &ve);
        let base = split.components_scalar(&v);
        let ca = split.components_scalar(moved_a.coeffs());
        let cb = split.components_scalar(moved_b.coeffs());
        for (i, _) in split.family.oracles.iter().enumerate() {
            let top = split.top_index(i).expect("nonzero component");
            let bottom = split.bottom_index(i).expect("nonzero component");
            if ca[i][top] != base[i][top] {
                return Err(InvarianceFailure {
                    check: "unipotent-top".into(),
                    detail: format!("oracle {} top component moved at sample {}", i, s),
                });
            }
            if cb[i][bottom] != base[i][bottom] {
                return Err(InvarianceFailure {
                    check: "unipotent-bottom".into(),
                    detail: format!("oracle {} bottom component moved at sample {}", i, s),
                });
            }
        }
    }
    // reductive part: every bi-homogeneous component of an invariant is
    // again invariant under the fixed part, so all derivatives vanish
    for i in 0..variant_a.g00().dim() {
        let x = Element::new(alg, variant_a.g00().basis_row(i).to_vec());
        for _ in 0..2 {
            let v = vec_in(rng, variant_a.space(), 2);
            let ve = elem_from(variant_a, &v);
            let dir = bracket(&x, &ve).expect("same algebra");
            let dual_pt: Vec<Dual> = v
                .iter()
                .zip(dir.coeffs())
                .map(|(val, der)| Dual {
                    val: val.clone(),
                    der: der.clone(),
                })
                .collect();
            let comps = split.components_dual(&dual_pt);
            for per_j in &comps {
                for c in per_j {
                    if !c.der.is_zero() {
                        return Err(InvarianceFailure {
                            check: "reductive-components".into(),
                            detail: format!(
                                "component derivative nonzero along fixed direction {}",
                                i
                            ),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// gradients and independence

/// Exact gradient along the basis directions of the domain.
pub fn gradient(f: &dyn PolyEvaluator, domain: &Subspace, point: &[Scalar]) -> Vec<Scalar> {
    (0..domain.dim())
        .map(|i| {
            let dual_pt: Vec<Dual> = point
                .iter()
                .zip(domain.basis_row(i))
                .map(|(val, der)| Dual {
                    val: val.clone(),
                    der: der.clone(),
                })
                .collect();
            f.eval_dual(&dual_pt).der
        })
        .collect()
}

/// Linear independence of the gradients of several evaluators at a point.
pub fn independence_at(
    fs: &[&dyn PolyEvaluator],
    domain: &Subspace,
    point: &[Scalar],
) -> bool {
    if fs.is_empty() {
        return true;
    }
    let rows: Vec<Vec<Scalar>> = fs.iter().map(|f| gradient(*f, domain, point)).collect();
    Mat::from_rows(rows).rank() == fs.len()
}

// ---------------------------------------------------------------------------
// vanishing on the saturation of a little piece

#[derive(Serialize)]
pub struct VanishingEntry {
    pub degree: usize,
    pub kind: OracleKind,
    #[serde(rename = "vanishes_on_X")]
    pub vanishes_on_x: bool,
    pub top_bidegree: Option<usize>,
}

#[derive(Serialize)]
pub struct VanishingReport {
    /// z_g(c10) meets the big odd space in a Cartan subspace of it.
    pub condition_51: bool,
    /// dim of the complement slice h inside the 11-piece.
    pub k_expected: usize,
    pub entries: Vec<VanishingEntry>,
    pub vanishing_count: usize,
    pub count_matches: bool,
}

/// Whether a polynomial vanishes identically on a subspace: deterministic
/// per line (degree + 1 nodes), over several random lines, plus translated
/// spot checks by unipotent fixed-part elements.
fn vanishes_on_subspace(
    f: &InvariantOracle,
    sub: &Subspace,
    q: &QuaternionicDecomposition,
    rng: &mut SampleRng,
) -> bool {
    let lines = 6;
    for _ in 0..lines {
        let p = vec_in(rng, sub, 3);
        let u = vec_in(rng, sub, 3);
        for t in 0..=f.degree as i64 {
            let pt: Vec<Scalar> = p
                .iter()
                .zip(&u)
                .map(|(a, b)| a.add(&b.mul_int(t)))
                .collect();
            if !f.eval_scalar(&pt).is_zero() {
                return false;
            }
        }
    }
    // translated spot checks: exp(ad n) for nilpotent n in the fixed part
    let alg = q.algebra();
    let upper00 = crate::invol::strictly_upper_subspace(alg)
        .intersect(q.g00())
        .expect("same ambient");
    if !upper00.is_zero() {
        for _ in 0..4 {
            let nelem = element_in(rng, alg, &upper00, 2);
            let x = vec_in(rng, sub, 3);
            // exp(ad n) x, exact because ad n is nilpotent
            let adn = crate::lie::ad(&nelem);
            let mut term = x.clone();
            let mut acc = x.clone();
            let mut k = 1i64;
            loop {
                term = adn.mul_vec(&term).iter().map(|c| c.div_int(k)).collect();
                if term.iter().all(Scalar::is_zero) {
                    break;
                }
                for (a, t) in acc.iter_mut().zip(&term) {
                    *a = a.add(t);
                }
                k += 1;
            }
            if !f.eval_scalar(&acc).is_zero() {
                return false;
            }
        }
    }
    true
}

/// Which members of the family vanish on the closure of the saturation of
/// the 10-piece inside the big odd space, against the prediction that the
/// number of vanishing basic invariants equals the dimension of the
/// centralizer slice h.
pub fn vanishing_on_saturation(
    q: &QuaternionicDecomposition,
    family: &InvariantFamily,
    css_10: &CartanSubspace,
    rng: &mut SampleRng,
) -> Result<VanishingReport, IsolabError> {
    let alg = q.algebra();
    let big = q.big(crate::invol::BigIdx::RowOne);
    let d = centralizer(alg, css_10.space(), &big);
    // condition: d is a Cartan subspace of the big odd piece
    let condition_51 = crate::cartan::is_certified_toral(alg, &big, &d);
    if !condition_51 {
        return Err(IsolabError::Precondition(
            "saturation slice is not a Cartan subspace of the big odd piece".into(),
        ));
    }
    let g11 = q.little(crate::invol::LittleIdx::I11);
    let h = d.intersect(g11)?;
    let k_expected = h.dim();
    if css_10.dim() + k_expected != d.dim() {
        return Err(IsolabError::Internal(
            "slice does not split as c10 + h".into(),
        ));
    }
    let g10 = q.little(crate::invol::LittleIdx::I10).clone();
    let proj10 = {
        // projection onto g10 summand of the big odd space: product of the
        // sigma projections
        let dim = alg.dim();
        let idm = Mat::identity(dim);
        idm.sub(q.sigma(1).map())
            .matmul(&idm.add(q.sigma(2).map()))
            .scale(&Scalar::from_ratio(1, 4))
    };
    let split = bihomog_extract(family, &proj10, rng)?;
    let mut entries = Vec::new();
    let mut vanishing_count = 0usize;
    for (i, o) in family.oracles.iter().enumerate() {
        let vanishes = vanishes_on_subspace(o, &g10, q, rng);
        if vanishes {
            vanishing_count += 1;
        }
        entries.push(VanishingEntry {
            degree: o.degree,
            kind: o.kind,
            vanishes_on_x: vanishes,
            top_bidegree: split.top_index(i),
        });
    }
    Ok(VanishingReport {
        condition_51,
        k_expected,
        entries,
        count_matches: vanishing_count == k_expected,
        vanishing_count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contraction::degenerate_module;
    use crate::invol::{inner_involution, quaternionic, LittleIdx};
    use crate::lie::{make_sl, make_so, OrthogonalConvention};
    use crate::sample::rng_for;

    fn diag_i(pattern: &[i64]) -> Mat {
        let i = Scalar::i_unit().unwrap();
        let n = pattern.len();
        Mat::from_fn(n, n, |r, c| {
            if r != c {
                Scalar::zero()
            } else if pattern[r] > 0 {
                i.clone()
            } else {
                i.neg()
            }
        })
    }

    #[test]
    fn sl2_quadratic_invariant_value() {
        let g = make_sl(2).unwrap();
        let mut rng = rng_for(1, "sl2-inv");
        let oracles = charpoly_invariants(&g, &g.full_space(), &mut rng);
        assert_eq!(oracles.len(), 1);
        assert_eq!(oracles[0].degree, 2);
        // at e + f, det = -1, so the degree-2 coefficient is -1
        let mut m = Mat::zero(2, 2);
        m.set(0, 1, Scalar::one());
        m.set(1, 0, Scalar::one());
        let v = Element::from_matrix(&g, &m).unwrap();
        assert_eq!(oracles[0].eval(&v), Scalar::from_int(-1));
    }

    #[test]
    fn pfaffian_squares_to_determinant_so8() {
        let g = make_so(8, OrthogonalConvention::Antidiagonal).unwrap();
        let mut rng = rng_for(2, "pf-so8");
        let pf = pfaffian_invariant(&g, &g.full_space()).unwrap();
        let det = InvariantOracle {
            alg: g.clone(),
            domain: g.full_space(),
            kind: OracleKind::CharPolyCoeff(8),
            degree: 8,
        };
        for _ in 0..10 {
            let v = vec_in(&mut rng, &g.full_space(), 3);
            let p = pf.eval_scalar(&v);
            // det(J) = 1 for the size-8 reversal, so pf(Jx)^2 = det(x)
            assert_eq!(p.mul(&p), det.eval_scalar(&v));
        }
    }

    #[test]
    fn pfaffian_rejects_odd_or_wrong_form() {
        let g = make_so(7, OrthogonalConvention::Standard).unwrap();
        assert!(pfaffian_invariant(&g, &g.full_space()).is_err());
        let s = make_sl(4).unwrap();
        assert!(pfaffian_invariant(&s, &s.full_space()).is_err());
    }

    fn so8_31_family() -> (QuaternionicDecomposition, InvariantFamily) {
        let g = make_so(8, OrthogonalConvention::Antidiagonal).unwrap();
        let s1 = diag_i(&[1, 1, 1, 1, -1, -1, -1, -1]);
        let s2 = diag_i(&[1, -1, -1, -1, 1, 1, 1, -1]);
        let q = quaternionic(
            &inner_involution(&g, &s1).unwrap(),
            &inner_involution(&g, &s2).unwrap(),
        )
        .unwrap();
        let mut rng = rng_for(3, "so8-fam");
        let domain = q.big(crate::invol::BigIdx::RowOne);
        let fam = invariant_family(&g, &domain, &[s1], &mut rng).unwrap();
        (q, fam)
    }

    #[test]
    fn bihomog_reconstruction_and_extremes() {
        let (q, fam) = so8_31_family();
        let mut rng = rng_for(4, "bihomog");
        let dim = q.algebra().dim();
        let idm = Mat::identity(dim);
        let proj10 = idm
            .sub(q.sigma(1).map())
            .matmul(&idm.add(q.sigma(2).map()))
            .scale(&Scalar::from_ratio(1, 4));
        let split = bihomog_extract(&fam, &proj10, &mut rng).unwrap();
        for i in 0..fam.oracles.len() {
            let top = split.top_index(i).unwrap();
            let bottom = split.bottom_index(i).unwrap();
            assert!(bottom <= top);
            assert!(top <= fam.oracles[i].degree);
        }
    }

    #[test]
    fn contracted_invariance_of_extreme_components() {
        let (q, fam) = so8_31_family();
        let mut rng = rng_for(5, "contract-inv");
        let dim = q.algebra().dim();
        let idm = Mat::identity(dim);
        let proj10 = idm
            .sub(q.sigma(1).map())
            .matmul(&idm.add(q.sigma(2).map()))
            .scale(&Scalar::from_ratio(1, 4));
        let split = bihomog_extract(&fam, &proj10, &mut rng).unwrap();
        let va = degenerate_module(&q, LittleIdx::I10, LittleIdx::I11, Variant::A).unwrap();
        let vb = degenerate_module(&q, LittleIdx::I10, LittleIdx::I11, Variant::B).unwrap();
        verify_family_contraction(&split, &va, &vb, &mut rng, 8).unwrap();
    }

    struct CoordinateFunction {
        proj: Mat,
        index: usize,
    }

    impl PolyEvaluator for CoordinateFunction {
        fn degree(&self) -> usize {
            1
        }
        fn eval_scalar(&self, point: &[Scalar]) -> Scalar {
            self.proj.mul_vec(point)[self.index].clone()
        }
        fn eval_dual(&self, point: &[Dual]) -> Dual {
            let vals: Vec<Scalar> = point.iter().map(|d| d.val.clone()).collect();
            let ders: Vec<Scalar> = point.iter().map(|d| d.der.clone()).collect();
            Dual {
                val: self.proj.mul_vec(&vals)[self.index].clone(),
                der: self.proj.mul_vec(&ders)[self.index].clone(),
            }
        }
    }

    #[test]
    fn coordinate_function_is_not_invariant() {
        let (q, _) = so8_31_family();
        let mut rng = rng_for(6, "coord");
        let va = degenerate_module(&q, LittleIdx::I10, LittleIdx::I11, Variant::A).unwrap();
        let dim = q.algebra().dim();
        let idm = Mat::identity(dim);
        let proj11 = idm
            .sub(q.sigma(1).map())
            .matmul(&idm.sub(q.sigma(2).map()))
            .scale(&Scalar::from_ratio(1, 4));
        // find a coordinate of the 11-piece that actually moves
        let mut failed = false;
        for index in 0..dim {
            let f = CoordinateFunction {
                proj: proj11.clone(),
                index,
            };
            if verify_invariance(&f, &va, &mut rng, 10).is_err() {
                failed = true;
                break;
            }
        }
        assert!(failed, "some coordinate of the moved piece must be non-invariant");
    }

    #[test]
    fn constant_function_is_invariant() {
        struct Constant;
        impl PolyEvaluator for Constant {
            fn degree(&self) -> usize {
                0
            }
            fn eval_scalar(&self, _point: &[Scalar]) -> Scalar {
                Scalar::from_int(7)
            }
            fn eval_dual(&self, _point: &[Dual]) -> Dual {
                Dual::constant(&Scalar::from_int(7))
            }
        }
        let (q, _) = so8_31_family();
        let mut rng = rng_for(7, "const");
        let va = degenerate_module(&q, LittleIdx::I10, LittleIdx::I11, Variant::A).unwrap();
        verify_invariance(&Constant, &va, &mut rng, 5).unwrap();
    }

    #[test]
    fn gradient_of_linear_function_is_constant() {
        let (q, _) = so8_31_family();
        let dim = q.algebra().dim();
        let idm = Mat::identity(dim);
        let proj11 = idm
            .sub(q.sigma(1).map())
            .matmul(&idm.sub(q.sigma(2).map()))
            .scale(&Scalar::from_ratio(1, 4));
        let f = CoordinateFunction {
            proj: proj11,
            index: 0,
        };
        let domain = q.big(crate::invol::BigIdx::RowOne);
        let mut rng = rng_for(8, "grad");
        let p1 = vec_in(&mut rng, &domain, 3);
        let p2 = vec_in(&mut rng, &domain, 5);
        assert_eq!(
            gradient(&f, &domain, &p1),
            gradient(&f, &domain, &p2)
        );
    }
}
