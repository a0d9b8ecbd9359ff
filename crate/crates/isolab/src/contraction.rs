//! Contractions of the bracket along an involution (the fixed part keeps its
//! bracket, the odd part becomes an abelian ideal), the six degenerated
//! isotropy modules of a commuting pair, their duality pairing, nilradical
//! orbit analysis, and generic stabilizers with the two transcendence-degree
//! formulas.

use exact_linalg::{Mat, Scalar, Subspace};
use serde::Serialize;

use crate::cartan::{bracket_rank, find_css, CartanSubspace};
use crate::error::IsolabError;
use crate::invol::{Automorphism, LittleIdx, QuaternionicDecomposition};
use crate::lie::{bracket, centralizer, killing_form, Alg, Element};
use crate::sample::{element_in, SampleRng};

type SparseVec = Vec<(usize, Scalar)>;

/// g0 semidirect the odd part made abelian; the bracket table is stored as
/// sparse structure constants on the parent basis.
pub struct ContractedAlgebra {
    parent: Alg,
    table: Vec<Vec<SparseVec>>,
    dim_fixed: usize,
    dim_odd: usize,
}

impl ContractedAlgebra {
    pub fn parent(&self) -> &Alg {
        &self.parent
    }

    pub fn dim_fixed(&self) -> usize {
        self.dim_fixed
    }

    pub fn dim_odd(&self) -> usize {
        self.dim_odd
    }

    pub fn bracket(&self, x: &Element, y: &Element) -> Element {
        let dim = self.parent.dim();
        let mut out = vec![Scalar::zero(); dim];
        for (i, xi) in x.coeffs().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coeffs().iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi.mul(yj);
                for (k, c) in &self.table[i][j] {
                    out[*k] = out[*k].add(&f.mul(c));
                }
            }
        }
        Element::new(&self.parent, out)
    }

    /// Gram matrix of the trace form of the contracted adjoint action on the
    /// parent basis.
    pub fn killing_matrix(&self) -> Mat {
        let dim = self.parent.dim();
        let ads: Vec<std::collections::BTreeMap<(usize, usize), Scalar>> = (0..dim)
            .map(|i| {
                let mut m = std::collections::BTreeMap::new();
                for j in 0..dim {
                    for (k, c) in &self.table[i][j] {
                        m.insert((j, *k), c.clone());
                    }
                }
                m
            })
            .collect();
        let mut killing = Mat::zero(dim, dim);
        for i in 0..dim {
            for j in i..dim {
                let mut acc = Scalar::zero();
                for ((k, l), c) in &ads[i] {
                    if let Some(d) = ads[j].get(&(*l, *k)) {
                        acc = acc.add(&c.mul(d));
                    }
                }
                killing.set(i, j, acc.clone());
                killing.set(j, i, acc);
            }
        }
        killing
    }
}

/// Contract the bracket along an involution: both arguments keep their fixed
/// and odd components, but the odd-odd product is dropped. Jacobi and the
/// abelian-ideal law are verified exactly on all basis triples.
pub fn z2_contract(sigma: &Automorphism) -> Result<ContractedAlgebra, IsolabError> {
    if !sigma.is_involution() {
        return Err(IsolabError::Precondition("contraction needs an involution".into()));
    }
    let alg = sigma.algebra().clone();
    let dim = alg.dim();
    let half = Scalar::from_ratio(1, 2);
    let id = Mat::identity(dim);
    let proj_odd = id.sub(sigma.map()).scale(&half);
    // contracted structure constants on the parent basis:
    // [x, y]_c = [x, y] - [x_odd, y_odd]
    let odd_parts: Vec<Element> = (0..dim)
        .map(|i| Element::new(&alg, proj_odd.mul_vec(Element::basis_element(&alg, i).coeffs())))
        .collect();
    let mut table: Vec<Vec<SparseVec>> = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in (i + 1)..dim {
            let full = bracket(
                &Element::basis_element(&alg, i),
                &Element::basis_element(&alg, j),
            )?;
            let odd = bracket(&odd_parts[i], &odd_parts[j])?;
            let contracted = full.sub(&odd);
            let sparse: SparseVec = contracted
                .coeffs()
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.clone()))
                .collect();
            table[i][j] = sparse.clone();
            table[j][i] = sparse.into_iter().map(|(k, c)| (k, c.neg())).collect();
        }
    }
    let fixed = sigma.eigenspace(0);
    let odd = sigma.eigenspace(1);
    let contracted = ContractedAlgebra {
        parent: alg.clone(),
        table,
        dim_fixed: fixed.dim(),
        dim_odd: odd.dim(),
    };
    // the odd part is an abelian ideal
    for i in 0..odd.dim() {
        let x = Element::new(&alg, odd.basis_row(i).to_vec());
        for j in 0..odd.dim() {
            let y = Element::new(&alg, odd.basis_row(j).to_vec());
            if !contracted.bracket(&x, &y).is_zero() {
                return Err(IsolabError::Internal(
                    "odd part is not abelian after contraction".into(),
                ));
            }
        }
        for j in 0..dim {
            let z = contracted.bracket(&Element::basis_element(&alg, j), &x);
            if !odd.contains_vec(z.coeffs()) {
                return Err(IsolabError::Internal(
                    "odd part is not an ideal after contraction".into(),
                ));
            }
        }
    }
    // Jacobi on all basis triples
    let sparse_bracket = |i: usize, v: &[Scalar]| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); dim];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, d) in &contracted.table[i][j] {
                out[*k] = out[*k].add(&c.mul(d));
            }
        }
        out
    };
    let dense = |sv: &SparseVec| -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); dim];
        for (k, c) in sv {
            v[*k] = c.clone();
        }
        v
    };
    for i in 0..dim {
        for j in (i + 1)..dim {
            for k in (j + 1)..dim {
                let a = sparse_bracket(i, &dense(&contracted.table[j][k]));
                let b = sparse_bracket(j, &dense(&contracted.table[k][i]));
                let c = sparse_bracket(k, &dense(&contracted.table[i][j]));
                for t in 0..dim {
                    if !a[t].add(&b[t]).add(&c[t]).is_zero() {
                        return Err(IsolabError::Internal(format!(
                            "Jacobi fails for the contraction at triple ({},{},{})",
                            i, j, k
                        )));
                    }
                }
            }
        }
    }
    Ok(contracted)
}

// ---------------------------------------------------------------------------
// degenerated isotropy modules

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Variant {
    A,
    B,
}

/// The module g_alpha x g_gamma under g00 plus the abelian nilradical
/// g_beta: g00 acts diagonally by the bracket, the nilradical sends one
/// summand into the other and kills the rest.
pub struct DegeneratedModule {
    alg: Alg,
    pub alpha: LittleIdx,
    pub beta: LittleIdx,
    pub gamma: LittleIdx,
    pub variant: Variant,
    g00: Subspace,
    g_alpha: Subspace,
    g_beta: Subspace,
    g_gamma: Subspace,
    space: Subspace,
    proj_alpha: SparseRows,
    proj_gamma: SparseRows,
}

/// Row-sparse linear map on algebra coordinates.
pub struct SparseRows(Vec<Vec<(usize, Scalar)>>);

impl SparseRows {
    fn from_mat(m: &Mat) -> SparseRows {
        SparseRows(
            (0..m.rows())
                .map(|r| {
                    m.row(r)
                        .iter()
                        .enumerate()
                        .filter(|(_, v)| !v.is_zero())
                        .map(|(c, v)| (c, v.clone()))
                        .collect()
                })
                .collect(),
        )
    }

    fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.0
            .iter()
            .map(|row| {
                let mut acc = Scalar::zero();
                for (c, w) in row {
                    if !v[*c].is_zero() {
                        acc = acc.add(&w.mul(&v[*c]));
                    }
                }
                acc
            })
            .collect()
    }
}

impl DegeneratedModule {
    pub fn algebra(&self) -> &Alg {
        &self.alg
    }

    pub fn space(&self) -> &Subspace {
        &self.space
    }

    pub fn g_alpha(&self) -> &Subspace {
        &self.g_alpha
    }

    pub fn g_beta(&self) -> &Subspace {
        &self.g_beta
    }

    pub fn g_gamma(&self) -> &Subspace {
        &self.g_gamma
    }

    pub fn g00(&self) -> &Subspace {
        &self.g00
    }

    pub fn dim_k(&self) -> usize {
        self.g00.dim() + self.g_beta.dim()
    }

    pub fn alpha_part(&self, v: &Element) -> Element {
        Element::new(&self.alg, self.proj_alpha.apply(v.coeffs()))
    }

    pub fn gamma_part(&self, v: &Element) -> Element {
        Element::new(&self.alg, self.proj_gamma.apply(v.coeffs()))
    }

    /// Infinitesimal action of (x00, xbeta) on a module vector.
    pub fn act(&self, x00: &Element, xbeta: &Element, v: &Element) -> Element {
        let reductive = bracket(x00, v).expect("same algebra");
        let moved = match self.variant {
            Variant::A => bracket(xbeta, &self.alpha_part(v)).expect("same algebra"),
            Variant::B => bracket(xbeta, &self.gamma_part(v)).expect("same algebra"),
        };
        reductive.add(&moved)
    }

    /// Exact unipotent action: exp(x) for x in the abelian nilradical is
    /// affine on the module.
    pub fn act_exp_nil(&self, xbeta: &Element, v: &Element) -> Element {
        let moved = match self.variant {
            Variant::A => bracket(xbeta, &self.alpha_part(v)).expect("same algebra"),
            Variant::B => bracket(xbeta, &self.gamma_part(v)).expect("same algebra"),
        };
        v.add(&moved)
    }

    /// k-basis as (fixed-part, nilradical-part) element pairs.
    pub fn k_basis(&self) -> Vec<(Element, Element)> {
        let mut out = Vec::new();
        for i in 0..self.g00.dim() {
            out.push((
                Element::new(&self.alg, self.g00.basis_row(i).to_vec()),
                Element::zero(&self.alg),
            ));
        }
        for i in 0..self.g_beta.dim() {
            out.push((
                Element::zero(&self.alg),
                Element::new(&self.alg, self.g_beta.basis_row(i).to_vec()),
            ));
        }
        out
    }

    /// Sparse matrix of the action of one k-basis element on algebra
    /// coordinates.
    fn action_rows(&self, x0: &Element, x1: &Element) -> Vec<Vec<(usize, Scalar)>> {
        let dim = self.alg.dim();
        let mut cols: Vec<Vec<(usize, Scalar)>> = Vec::with_capacity(dim);
        for j in 0..dim {
            let img = self.act(x0, x1, &Element::basis_element(&self.alg, j));
            cols.push(
                img.coeffs()
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| !c.is_zero())
                    .map(|(k, c)| (k, c.clone()))
                    .collect(),
            );
        }
        cols
    }

    fn apply_action(cols: &[Vec<(usize, Scalar)>], v: &[Scalar], dim: usize) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); dim];
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (k, w) in &cols[j] {
                out[*k] = out[*k].add(&c.mul(w));
            }
        }
        out
    }

    /// x.(y.v) - y.(x.v) = [x,y].v on all basis triples, where the bracket of
    /// k = g00 + nilradical drops the nilradical-nilradical term.
    pub fn verify_module_law(&self) -> Result<(), IsolabError> {
        let kb = self.k_basis();
        let dim = self.alg.dim();
        let actions: Vec<Vec<Vec<(usize, Scalar)>>> = kb
            .iter()
            .map(|(x0, x1)| self.action_rows(x0, x1))
            .collect();
        let vbasis: Vec<Vec<Scalar>> = (0..self.space.dim())
            .map(|t| self.space.basis_row(t).to_vec())
            .collect();
        for (i, (x0, x1)) in kb.iter().enumerate() {
            for (jj, (y0, y1)) in kb.iter().enumerate().skip(i + 1) {
                // bracket in k
                let z0 = bracket(x0, y0).expect("same algebra");
                let z1 = bracket(x0, y1)
                    .expect("same algebra")
                    .sub(&bracket(y0, x1).expect("same algebra"));
                let zc = self.action_rows(&z0, &z1);
                for v in &vbasis {
                    let yv = Self::apply_action(&actions[jj], v, dim);
                    let xyv = Self::apply_action(&actions[i], &yv, dim);
                    let xv = Self::apply_action(&actions[i], v, dim);
                    let yxv = Self::apply_action(&actions[jj], &xv, dim);
                    let rhs = Self::apply_action(&zc, v, dim);
                    let ok = xyv
                        .iter()
                        .zip(&yxv)
                        .zip(&rhs)
                        .all(|((a, b), r)| a.sub(b) == *r);
                    if !ok {
                        return Err(IsolabError::Internal(format!(
                            "module law fails for perm ({},{},{}) variant {:?}",
                            self.alpha.name(),
                            self.beta.name(),
                            self.gamma.name(),
                            self.variant
                        )));
                    }
                }
            }
        }
        // two nilradical actions compose to zero
        let nil_actions: Vec<&Vec<Vec<(usize, Scalar)>>> = kb
            .iter()
            .zip(&actions)
            .filter(|((_, x1), _)| !x1.is_zero())
            .map(|(_, a)| a)
            .collect();
        for a in &nil_actions {
            for b in &nil_actions {
                for v in &vbasis {
                    let bv = Self::apply_action(b, v, dim);
                    let abv = Self::apply_action(a, &bv, dim);
                    if abv.iter().any(|c| !c.is_zero()) {
                        return Err(IsolabError::Internal(
                            "nilradical does not square to zero on the module".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }
}

/// Build the degenerated module for a permutation (alpha, beta, gamma) of the
/// little indices, in either variant, with the action laws verified.
pub fn degenerate_module(
    q: &QuaternionicDecomposition,
    alpha: LittleIdx,
    gamma: LittleIdx,
    variant: Variant,
) -> Result<DegeneratedModule, IsolabError> {
    if alpha == gamma {
        return Err(IsolabError::Precondition("alpha and gamma must differ".into()));
    }
    let beta = LittleIdx::third(alpha, gamma);
    let alg = q.algebra().clone();
    let dim = alg.dim();
    let half = Scalar::from_ratio(1, 2);
    let quarter = Scalar::from_ratio(1, 4);
    let id = Mat::identity(dim);
    let sign = |b: usize, m: &Mat| -> Mat {
        if b == 0 {
            id.add(m)
        } else {
            id.sub(m)
        }
    };
    let proj_of = |idx: LittleIdx| -> Mat {
        let (i, j) = idx.bits();
        sign(i, q.sigma(1).map())
            .matmul(&sign(j, q.sigma(2).map()))
            .scale(&quarter)
    };
    let _ = half;
    let m = DegeneratedModule {
        alg: alg.clone(),
        alpha,
        beta,
        gamma,
        variant,
        g00: q.g00().clone(),
        g_alpha: q.little(alpha).clone(),
        g_beta: q.little(beta).clone(),
        g_gamma: q.little(gamma).clone(),
        space: q.little(alpha).sum(q.little(gamma))?,
        proj_alpha: SparseRows::from_mat(&proj_of(alpha)),
        proj_gamma: SparseRows::from_mat(&proj_of(gamma)),
    };
    m.verify_module_law()?;
    Ok(m)
}

/// The invariant pairing between the two variants on the same underlying
/// space: the sum of the Killing pairings of the two components, which is
/// just the Killing form since distinct graded pieces are orthogonal.
pub fn duality_pairing(v: &Element, w: &Element) -> Scalar {
    killing_form(v, w).expect("same algebra")
}

/// Exact invariance of the duality pairing between variant A and variant B
/// on the same permutation: infinitesimally for the whole of k, and at group
/// level for the unipotent radical; plus nondegeneracy of the pairing Gram
/// matrix.
pub fn duality_check(
    va: &DegeneratedModule,
    vb: &DegeneratedModule,
    rng: &mut SampleRng,
    samples: usize,
) -> Result<(), IsolabError> {
    if va.alpha != vb.alpha || va.gamma != vb.gamma {
        return Err(IsolabError::Precondition(
            "duality requires the same permutation".into(),
        ));
    }
    if va.variant != Variant::A || vb.variant != Variant::B {
        return Err(IsolabError::Precondition(
            "duality compares variant A against variant B".into(),
        ));
    }
    let alg = &va.alg;
    let kb = va.k_basis();
    for s in 0..samples {
        let bound = 2 + (s / 8) as i64;
        let v = element_in(rng, alg, &va.space, bound);
        let w = element_in(rng, alg, &vb.space, bound);
        // infinitesimal invariance for every k-basis vector
        for (x0, x1) in &kb {
            let lhs = duality_pairing(&va.act(x0, x1, &v), &w);
            let rhs = duality_pairing(&v, &vb.act(x0, x1, &w));
            if !lhs.add(&rhs).is_zero() {
                return Err(IsolabError::Internal(
                    "duality pairing is not infinitesimally invariant".into(),
                ));
            }
        }
        // group-level invariance along the unipotent radical
        let x = element_in(rng, alg, &va.g_beta, bound);
        let pv = va.act_exp_nil(&x, &v);
        let pw = vb.act_exp_nil(&x, &w);
        if duality_pairing(&pv, &pw) != duality_pairing(&v, &w) {
            return Err(IsolabError::Internal(
                "duality pairing is not unipotent-invariant".into(),
            ));
        }
    }
    // nondegeneracy on the underlying space
    let n = va.space.dim();
    let gram = Mat::from_fn(n, n, |r, c| {
        duality_pairing(
            &Element::new(alg, va.space.basis_row(r).to_vec()),
            &Element::new(alg, va.space.basis_row(c).to_vec()),
        )
    });
    if gram.rank() != n {
        return Err(IsolabError::Internal("duality pairing is degenerate".into()));
    }
    Ok(())
}

#[derive(Clone, Serialize)]
pub struct OrbitReport {
    pub max_orbit_dim: usize,
    pub target_dim: usize,
    pub witness_found: bool,
}

/// Maximal nilradical-orbit dimension in the module: the orbit through
/// (y, *) has dimension dim [y, g_beta], which is maximal at the certified
/// generic witness; random samples can only confirm the maximum.
pub fn max_nilradical_orbit_dim(
    module: &DegeneratedModule,
    css_alpha: &CartanSubspace,
    rng: &mut SampleRng,
    samples: usize,
) -> OrbitReport {
    let alg = &module.alg;
    let (moving_src, target) = match module.variant {
        Variant::A => (&module.g_alpha, &module.g_gamma),
        Variant::B => (&module.g_gamma, &module.g_alpha),
    };
    let mut max = 0usize;
    let mut witness = false;
    let mut consider = |y: &Element| {
        let d = bracket_rank(alg, y, &module.g_beta);
        if d > max {
            max = d;
        }
        if d == target.dim() {
            witness = true;
        }
    };
    if module.variant == Variant::A {
        consider(css_alpha.witness());
    }
    for s in 0..samples {
        let bound = 2 + (s / 8) as i64;
        let y = element_in(rng, alg, moving_src, bound);
        consider(&y);
    }
    OrbitReport {
        max_orbit_dim: max,
        target_dim: target.dim(),
        witness_found: witness,
    }
}

#[derive(Clone, Serialize)]
pub struct StabilizerReport {
    pub perm: String,
    pub variant: Variant,
    pub max_orbit_dim: usize,
    pub witness_found: bool,
    pub stabilizer_dim: usize,
    /// dim c_alpha + dim of a Cartan subspace of the centralizer slice.
    pub trdeg_a: usize,
    /// dim of a big Cartan subspace of g_alpha + g_gamma.
    pub trdeg_b: usize,
    pub agree: bool,
}

pub struct StabilizerData {
    pub report: StabilizerReport,
    pub xi: Element,
    pub eta: Element,
    pub stabilizer: Subspace,
    pub predicted: Subspace,
}

/// Compute the stabilizer of a certified generic pair (xi, eta) in
/// k = g00 + g_beta, compare with the closed form
/// (g00^xi)^eta + (g_beta ^ xi), and cross-check the two transcendence-degree
/// formulas plus the dimension-count bookkeeping.
pub fn generic_stabilizer(
    q: &QuaternionicDecomposition,
    module: &DegeneratedModule,
    big_css_dim: usize,
    rng: &mut SampleRng,
) -> Result<StabilizerData, IsolabError> {
    if module.variant != Variant::A {
        return Err(IsolabError::Precondition(
            "generic stabilizers are computed on variant A (relabel the permutation)".into(),
        ));
    }
    let alg = &module.alg;
    let css_alpha = find_css(alg, &module.g_alpha, rng)?;
    // xi must cut every centralizer slice generically, not merely be regular
    // semisimple for the little action
    let xi = crate::cartan::fully_generic_witness(alg, &css_alpha, rng)?;
    let z_xi = centralizer(alg, &Subspace::span_of(xi.coeffs()), &alg.full_space());
    let g00_xi = z_xi.intersect(&module.g00)?;
    let gbeta_xi = z_xi.intersect(&module.g_beta)?;
    let ggamma_xi = z_xi.intersect(&module.g_gamma)?;
    // the moved piece splits as [g_beta, xi] + (slice): certified directness
    let moved = {
        let rows: Vec<Vec<Scalar>> = (0..module.g_beta.dim())
            .map(|i| {
                bracket(&Element::new(alg, module.g_beta.basis_row(i).to_vec()), &xi)
                    .expect("same algebra")
                    .coeffs()
                    .to_vec()
            })
            .collect();
        Subspace::from_vecs(alg.dim(), rows)
    };
    if !moved.intersect(&ggamma_xi)?.is_zero()
        || moved.dim() + ggamma_xi.dim() != module.g_gamma.dim()
    {
        return Err(IsolabError::Inconclusive {
            what: "generic slice decomposition".into(),
            attempts: 1,
            detail: "the moved piece does not complement the centralizer slice".into(),
        });
    }
    let css_slice = find_css(alg, &ggamma_xi, rng)?;
    let eta = crate::cartan::fully_generic_witness(alg, &css_slice, rng)?;

    // stabilizer of (xi, eta): rows over (g00 basis | g_beta basis)
    let k00 = module.g00.dim();
    let kb = module.g_beta.dim();
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let cols: Vec<Element> = (0..k00)
        .map(|i| Element::new(alg, module.g00.basis_row(i).to_vec()))
        .chain((0..kb).map(|i| Element::new(alg, module.g_beta.basis_row(i).to_vec())))
        .collect();
    // condition 1: [s0, xi] = 0; condition 2: [s0, eta] + [s1, xi] = 0
    let cond1: Vec<Vec<Scalar>> = cols
        .iter()
        .enumerate()
        .map(|(t, e)| {
            if t < k00 {
                bracket(e, &xi).expect("same algebra").coeffs().to_vec()
            } else {
                vec![Scalar::zero(); alg.dim()]
            }
        })
        .collect();
    let cond2: Vec<Vec<Scalar>> = cols
        .iter()
        .enumerate()
        .map(|(t, e)| {
            if t < k00 {
                bracket(e, &eta).expect("same algebra").coeffs().to_vec()
            } else {
                bracket(e, &xi).expect("same algebra").coeffs().to_vec()
            }
        })
        .collect();
    for coord in 0..alg.dim() {
        if cond1.iter().any(|v| !v[coord].is_zero()) {
            rows.push(cond1.iter().map(|v| v[coord].clone()).collect());
        }
        if cond2.iter().any(|v| !v[coord].is_zero()) {
            rows.push(cond2.iter().map(|v| v[coord].clone()).collect());
        }
    }
    let ker = if rows.is_empty() {
        Mat::identity(cols.len())
    } else {
        Mat::from_rows(rows).nullspace()
    };
    let mut stab_rows = Vec::new();
    for r in 0..ker.rows() {
        let mut v = vec![Scalar::zero(); alg.dim()];
        for (t, c) in ker.row(r).iter().enumerate() {
            if !c.is_zero() {
                for (dst, src) in v.iter_mut().zip(cols[t].coeffs()) {
                    *dst = dst.add(&c.mul(src));
                }
            }
        }
        stab_rows.push(v);
    }
    let stabilizer = Subspace::from_vecs(alg.dim(), stab_rows);

    // predicted closed form
    let g00_xi_eta = centralizer(alg, &Subspace::span_of(eta.coeffs()), &g00_xi);
    let predicted = g00_xi_eta.sum(&gbeta_xi)?;
    if stabilizer != predicted {
        return Err(IsolabError::Internal(
            "stabilizer does not match its closed form".into(),
        ));
    }

    // transcendence degree, two ways
    let trdeg_a = css_alpha.dim() + css_slice.dim();
    let trdeg_b = big_css_dim;
    // bookkeeping: dim V - dim K + dim stab = trdeg, using the distribution
    // cancellation dim g_beta - dim g_beta^xi = dim g_gamma - dim g_gamma^xi
    let dim_v = module.space.dim() as i64;
    let dim_k = module.dim_k() as i64;
    let rosenlicht = dim_v - dim_k + stabilizer.dim() as i64;
    let cancel = (module.g_beta.dim() - gbeta_xi.dim()) == (module.g_gamma.dim() - ggamma_xi.dim());
    let agree = trdeg_a == trdeg_b && rosenlicht == trdeg_a as i64 && cancel;
    if !agree {
        return Err(IsolabError::Internal(format!(
            "transcendence-degree formulas disagree: {} vs {} vs {} (cancel {})",
            trdeg_a, trdeg_b, rosenlicht, cancel
        )));
    }

    // orbit analysis rides along
    let orbit = max_nilradical_orbit_dim(module, &css_alpha, rng, 12);
    let _ = q;

    Ok(StabilizerData {
        report: StabilizerReport {
            perm: format!(
                "{},{},{}",
                module.alpha.name(),
                module.beta.name(),
                module.gamma.name()
            ),
            variant: module.variant,
            max_orbit_dim: orbit.max_orbit_dim,
            witness_found: orbit.witness_found,
            stabilizer_dim: stabilizer.dim(),
            trdeg_a,
            trdeg_b,
            agree,
        },
        xi,
        eta,
        stabilizer,
        predicted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invol::{inner_involution, quaternionic};
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
    fn sl2_contraction_structure() {
        let g = make_sl(2).unwrap();
        let sigma = inner_involution(&g, &diag_i(&[1, -1])).unwrap();
        let c = z2_contract(&sigma).unwrap();
        assert_eq!(c.dim_fixed(), 1);
        assert_eq!(c.dim_odd(), 2);
        // trace form of the contraction is degenerate
        let k = c.killing_matrix();
        assert!(k.det().is_zero());
        assert!(k.rank() < g.dim());
    }

    fn so8_31_q() -> QuaternionicDecomposition {
        let g = make_so(8, OrthogonalConvention::Antidiagonal).unwrap();
        let s1 = diag_i(&[1, 1, 1, 1, -1, -1, -1, -1]);
        let s2 = diag_i(&[1, -1, -1, -1, 1, 1, 1, -1]);
        quaternionic(
            &inner_involution(&g, &s1).unwrap(),
            &inner_involution(&g, &s2).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn module_laws_hold_for_all_permutations() {
        let q = so8_31_q();
        for alpha in LittleIdx::ALL {
            for gamma in LittleIdx::ALL {
                if alpha == gamma {
                    continue;
                }
                // construction includes the verification
                degenerate_module(&q, alpha, gamma, Variant::A).unwrap();
                degenerate_module(&q, alpha, gamma, Variant::B).unwrap();
            }
        }
    }

    #[test]
    fn duality_between_variants() {
        let q = so8_31_q();
        let va = degenerate_module(&q, LittleIdx::I10, LittleIdx::I11, Variant::A).unwrap();
        let vb = degenerate_module(&q, LittleIdx::I10, LittleIdx::I11, Variant::B).unwrap();
        let mut rng = rng_for(31, "duality");
        duality_check(&va, &vb, &mut rng, 20).unwrap();
    }

    #[test]
    fn orbit_dims_stay_below_target_without_coincidence() {
        let q = so8_31_q();
        let mut rng = rng_for(37, "orbits");
        for alpha in LittleIdx::ALL {
            for gamma in LittleIdx::ALL {
                if alpha == gamma {
                    continue;
                }
                let m = degenerate_module(&q, alpha, gamma, Variant::A).unwrap();
                let css = find_css(q.algebra(), m.g_alpha(), &mut rng).unwrap();
                let report = max_nilradical_orbit_dim(&m, &css, &mut rng, 10);
                assert!(report.max_orbit_dim < report.target_dim);
                assert!(!report.witness_found);
            }
        }
    }

    #[test]
    fn generic_stabilizer_closed_form_so8() {
        let q = so8_31_q();
        let mut rng = rng_for(41, "stab");
        let m = degenerate_module(&q, LittleIdx::I10, LittleIdx::I11, Variant::A).unwrap();
        let big = find_css(
            q.algebra(),
            &m.g_alpha().sum(m.g_gamma()).unwrap(),
            &mut rng,
        )
        .unwrap();
        let data = generic_stabilizer(&q, &m, big.dim(), &mut rng).unwrap();
        assert!(data.report.agree);
        assert_eq!(data.report.trdeg_b, 2);
        // resampling stability of dimensions
        for k in 0..4 {
            let mut rng2 = rng_for(500 + k, "stab-resample");
            let d2 = generic_stabilizer(&q, &m, big.dim(), &mut rng2).unwrap();
            assert_eq!(d2.report.stabilizer_dim, data.report.stabilizer_dim);
            assert_eq!(d2.report.trdeg_a, data.report.trdeg_a);
        }
    }

    #[test]
    fn adjoint_module_from_swap_pair() {
        // For the double algebra with the swap and a lifted involution, the
        // degenerated module on (10 -> 11) is the adjoint module of the
        // contraction of the summand: verified by an explicit equivariant
        // linear isomorphism on sl(2).
        let a = make_sl(2).unwrap();
        let gg = crate::lie::direct_sum(&a, &a).unwrap();
        let swap = crate::invol::swap_involution(&gg).unwrap();
        let inner = inner_involution(&a, &diag_i(&[1, -1])).unwrap();
        let lifted = crate::invol::lift_to_sum(&gg, &inner).unwrap();
        let q = quaternionic(&swap, &lifted).unwrap();
        let m = degenerate_module(&q, LittleIdx::I10, LittleIdx::I11, Variant::A).unwrap();
        let contraction = z2_contract(&inner).unwrap();

        // the anti-diagonal embedding x -> (x, -x) identifies the summand
        // with the module space, g0-part to g10 and g1-part to g11
        let embed = |x: &Element| -> Element {
            let mut coeffs = x.coeffs().to_vec();
            coeffs.extend(x.coeffs().iter().map(Scalar::neg));
            Element::new(&gg, coeffs)
        };
        let embed_k = |x: &Element| -> Element {
            let mut coeffs = x.coeffs().to_vec();
            coeffs.extend(x.coeffs().iter().cloned());
            Element::new(&gg, coeffs)
        };
        let sigma_map = inner.map().clone();
        let p0 = Mat::identity(a.dim()).add(&sigma_map).scale(&Scalar::from_ratio(1, 2));
        let p1 = Mat::identity(a.dim()).sub(&sigma_map).scale(&Scalar::from_ratio(1, 2));
        for i in 0..a.dim() {
            for j in 0..a.dim() {
                let x = Element::basis_element(&a, i);
                let v = Element::basis_element(&a, j);
                // contracted adjoint action in the summand
                let adj = contraction.bracket(&x, &v);
                // degenerated action upstairs: split x into k-components
                let x0 = Element::new(&a, p0.mul_vec(x.coeffs()));
                let x1 = Element::new(&a, p1.mul_vec(x.coeffs()));
                let up = m.act(&embed_k(&x0), &embed_k(&x1), &embed(&v));
                assert_eq!(up.coeffs(), embed(&adj).coeffs());
            }
        }
    }
}
