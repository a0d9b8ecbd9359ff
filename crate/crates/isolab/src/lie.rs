//! Classical semisimple Lie algebras in their defining matrix realizations:
//! structure constants, Killing form, centralizers, and element
//! classification. All constructions are verified at build time (bracket
//! closure, Jacobi, Killing nondegeneracy, rank certificate).

use std::fmt;
use std::sync::Arc;

use exact_linalg::{minimal_polynomial, Mat, Scalar, Subspace};

use crate::error::IsolabError;

/// Which bilinear form (if any) defines the algebra inside gl(rep_dim).
#[derive(Clone, Debug, PartialEq)]
pub enum FormConvention {
    /// Plain special linear algebra, no form.
    None,
    /// x^T G + G x = 0 with symmetric G (orthogonal algebras).
    Orthogonal { gram: Mat },
    /// x^T G + G x = 0 with skew G (symplectic algebras).
    Symplectic { gram: Mat },
}

/// Constructor fingerprint, used for exponent tables and guards.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    SpecialLinear(usize),
    Orthogonal(usize),
    Symplectic(usize),
    Sum(Box<Family>, Box<Family>),
}

impl Family {
    fn exponents(&self) -> Vec<usize> {
        match self {
            Family::SpecialLinear(n) => (1..*n).collect(),
            Family::Orthogonal(n) => {
                if n % 2 == 1 {
                    let k = (n - 1) / 2;
                    (0..k).map(|j| 2 * j + 1).collect()
                } else {
                    let k = n / 2;
                    let mut e: Vec<usize> = (0..k - 1).map(|j| 2 * j + 1).collect();
                    e.push(k - 1);
                    e.sort_unstable();
                    e
                }
            }
            Family::Symplectic(n2) => {
                let k = n2 / 2;
                (0..k).map(|j| 2 * j + 1).collect()
            }
            Family::Sum(a, b) => {
                let mut e = a.exponents();
                e.extend(b.exponents());
                e.sort_unstable();
                e
            }
        }
    }
}

type SparseVec = Vec<(usize, Scalar)>;

pub struct LieAlgebra {
    label: String,
    family: Family,
    rep_dim: usize,
    basis: Vec<Mat>,
    dim: usize,
    /// brackets[i][j] = coordinates of [b_i, b_j], sparse.
    brackets: Vec<Vec<SparseVec>>,
    killing: Mat,
    rank: usize,
    exponents: Vec<usize>,
    form: FormConvention,
    /// Pivot entry positions (flattened) and the matrix taking pivot entries
    /// to basis coordinates.
    expand_pivots: Vec<usize>,
    expand_inv: Mat,
}

pub type Alg = Arc<LieAlgebra>;

#[derive(Clone)]
pub struct Element {
    alg: Alg,
    coeffs: Vec<Scalar>,
}

/// Semisimple/nilpotent flags of a single element (zero is both).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ElementClass {
    pub semisimple: bool,
    pub nilpotent: bool,
}

impl ElementClass {
    pub fn mixed(&self) -> bool {
        !self.semisimple && !self.nilpotent
    }
}

fn same_algebra(a: &Alg, b: &Alg) -> Result<(), IsolabError> {
    if Arc::ptr_eq(a, b) {
        Ok(())
    } else {
        Err(IsolabError::AlgebraMismatch {
            left: a.label.clone(),
            right: b.label.clone(),
        })
    }
}

impl LieAlgebra {
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn rep_dim(&self) -> usize {
        self.rep_dim
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn exponents(&self) -> &[usize] {
        &self.exponents
    }

    /// Number of even exponents.
    pub fn k0(&self) -> usize {
        self.exponents.iter().filter(|e| *e % 2 == 0).count()
    }

    /// Number of odd exponents.
    pub fn k1(&self) -> usize {
        self.exponents.iter().filter(|e| *e % 2 == 1).count()
    }

    pub fn form(&self) -> &FormConvention {
        &self.form
    }

    pub fn basis_mat(&self, i: usize) -> &Mat {
        &self.basis[i]
    }

    pub fn killing_matrix(&self) -> &Mat {
        &self.killing
    }

    pub fn full_space(&self) -> Subspace {
        Subspace::full(self.dim)
    }

    /// Coordinates of a rep-space matrix in the algebra basis; error if the
    /// matrix does not lie in the algebra.
    pub fn coords_of_matrix(&self, x: &Mat) -> Result<Vec<Scalar>, IsolabError> {
        assert_eq!((x.rows(), x.cols()), (self.rep_dim, self.rep_dim));
        let picked: Vec<Scalar> = self
            .expand_pivots
            .iter()
            .map(|&p| x.get(p / self.rep_dim, p % self.rep_dim).clone())
            .collect();
        let coeffs = self.expand_inv.mul_vec(&picked);
        // exact verification that x is in the span
        let mut recon =
            Mat::zero(self.rep_dim, self.rep_dim);
        for (i, c) in coeffs.iter().enumerate() {
            if !c.is_zero() {
                recon = recon.add(&self.basis[i].scale(c));
            }
        }
        if recon == *x {
            Ok(coeffs)
        } else {
            Err(IsolabError::NotInAlgebra(self.label.clone()))
        }
    }

    fn bracket_coeffs(&self, x: &[Scalar], y: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); self.dim];
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                let f = xi.mul(yj);
                for (k, c) in &self.brackets[i][j] {
                    out[*k] = out[*k].add(&f.mul(c));
                }
            }
        }
        out
    }
}

impl Element {
    pub fn new(alg: &Alg, coeffs: Vec<Scalar>) -> Element {
        assert_eq!(coeffs.len(), alg.dim, "coefficient length must match dim");
        Element {
            alg: alg.clone(),
            coeffs,
        }
    }

    pub fn zero(alg: &Alg) -> Element {
        Element::new(alg, vec![Scalar::zero(); alg.dim])
    }

    pub fn basis_element(alg: &Alg, i: usize) -> Element {
        let mut c = vec![Scalar::zero(); alg.dim];
        c[i] = Scalar::one();
        Element::new(alg, c)
    }

    pub fn from_matrix(alg: &Alg, x: &Mat) -> Result<Element, IsolabError> {
        Ok(Element::new(alg, alg.coords_of_matrix(x)?))
    }

    pub fn algebra(&self) -> &Alg {
        &self.alg
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, o: &Element) -> Element {
        Element::new(
            &self.alg,
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.add(b))
                .collect(),
        )
    }

    pub fn sub(&self, o: &Element) -> Element {
        Element::new(
            &self.alg,
            self.coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a.sub(b))
                .collect(),
        )
    }

    pub fn scale(&self, s: &Scalar) -> Element {
        Element::new(&self.alg, self.coeffs.iter().map(|c| c.mul(s)).collect())
    }

    /// The defining-representation matrix of this element.
    pub fn rep_matrix(&self) -> Mat {
        let n = self.alg.rep_dim;
        let mut m = Mat::zero(n, n);
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                m = m.add(&self.alg.basis[i].scale(c));
            }
        }
        m
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element[{}] {:?}", self.alg.label, self.coeffs)
    }
}

/// [x, y] via structure constants (equals the matrix commutator in the
/// defining representation).
pub fn bracket(x: &Element, y: &Element) -> Result<Element, IsolabError> {
    same_algebra(&x.alg, &y.alg)?;
    Ok(Element::new(&x.alg, x.alg.bracket_coeffs(&x.coeffs, &y.coeffs)))
}

/// kappa(x, y) = trace(ad x . ad y), evaluated from the cached Gram matrix.
pub fn killing_form(x: &Element, y: &Element) -> Result<Scalar, IsolabError> {
    same_algebra(&x.alg, &y.alg)?;
    let ky = x.alg.killing.mul_vec(&y.coeffs);
    let mut acc = Scalar::zero();
    for (a, b) in x.coeffs.iter().zip(&ky) {
        if !a.is_zero() && !b.is_zero() {
            acc = acc.add(&a.mul(b));
        }
    }
    Ok(acc)
}

/// Matrix of ad(x) on the coefficient space.
pub fn ad(x: &Element) -> Mat {
    let alg = &x.alg;
    let mut m = Mat::zero(alg.dim, alg.dim);
    for j in 0..alg.dim {
        for (i, xi) in x.coeffs.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (k, c) in &alg.brackets[i][j] {
                let v = m.get(*k, j).add(&xi.mul(c));
                m.set(*k, j, v);
            }
        }
    }
    m
}

/// {w in W : [s, w] = 0 for every s in a basis of S}, as a subspace of the
/// coefficient space.
pub fn centralizer(alg: &Alg, s: &Subspace, w: &Subspace) -> Subspace {
    assert_eq!(s.ambient_dim(), alg.dim);
    assert_eq!(w.ambient_dim(), alg.dim);
    if s.is_zero() || w.is_zero() {
        return w.clone();
    }
    // Constraint matrix: rows indexed by (s-basis, algebra coordinate),
    // columns by w-basis. Scaled integral copies of the bases keep the
    // bracket arithmetic cheap; scaling changes neither the constraints nor
    // the resulting subspace.
    let clear = |sp: &Subspace| -> Vec<Vec<Scalar>> {
        (0..sp.dim())
            .map(|i| {
                let mut row = sp.basis_row(i).to_vec();
                crate::sample::clear_denominators(&mut row);
                row
            })
            .collect()
    };
    let s_rows = clear(s);
    let w_rows = clear(w);
    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    let brackets: Vec<Vec<Vec<Scalar>>> = s_rows
        .iter()
        .map(|si| w_rows.iter().map(|wj| alg.bracket_coeffs(si, wj)).collect())
        .collect();
    for i in 0..s.dim() {
        for k in 0..alg.dim {
            if brackets[i].iter().all(|b| b[k].is_zero()) {
                continue;
            }
            rows.push((0..w.dim()).map(|j| brackets[i][j][k].clone()).collect());
        }
    }
    if rows.is_empty() {
        return w.clone();
    }
    let ker = Mat::from_rows(rows).nullspace();
    let mut out_rows = Vec::new();
    for r in 0..ker.rows() {
        let mut v = vec![Scalar::zero(); alg.dim];
        for (j, c) in ker.row(r).iter().enumerate() {
            if !c.is_zero() {
                // kernel coordinates refer to the cleared copies of the rows
                for (t, slot) in v.iter_mut().enumerate() {
                    *slot = slot.add(&c.mul(&w_rows[j][t]));
                }
            }
        }
        out_rows.push(v);
    }
    Subspace::from_vecs(alg.dim, out_rows)
}

pub fn centralizer_of_element(x: &Element, w: &Subspace) -> Subspace {
    centralizer(&x.alg, &Subspace::span_of(x.coeffs()), w)
}

/// Semisimple iff the defining matrix has squarefree minimal polynomial;
/// nilpotent iff a power vanishes. Valid because the defining representations
/// here are faithful and respect abstract Jordan decomposition.
pub fn classify_element(x: &Element) -> ElementClass {
    // classification is invariant under scaling; integral coordinates keep
    // the minimal-polynomial arithmetic cheap
    let mut coeffs = x.coeffs().to_vec();
    crate::sample::clear_denominators(&mut coeffs);
    let x = &Element::new(x.algebra(), coeffs);
    let m = x.rep_matrix();
    let p = minimal_polynomial(&m);
    let semisimple = p.is_squarefree();
    let nilpotent = {
        // minimal polynomial t^k  <=>  nilpotent
        let c = p.coeffs();
        c[..c.len() - 1].iter().all(Scalar::is_zero)
    };
    ElementClass {
        semisimple,
        nilpotent,
    }
}

/// Regular in g: the centralizer has the minimal possible dimension, rk(g).
pub fn is_regular(x: &Element) -> bool {
    centralizer_of_element(x, &x.alg.full_space()).dim() == x.alg.rank()
}

// ---------------------------------------------------------------------------
// constructors

struct RawAlgebra {
    label: String,
    family: Family,
    rep_dim: usize,
    basis: Vec<Mat>,
    form: FormConvention,
    rank: usize,
    /// A known regular semisimple element (as a rep matrix) certifying the
    /// rank at construction time.
    regular_witness: Mat,
}

fn finish(raw: RawAlgebra, verify_jacobi: bool) -> Result<Alg, IsolabError> {
    let dim = raw.basis.len();
    let n = raw.rep_dim;
    // Expansion data: RREF of the flattened basis matrix picks pivot entries.
    let flat = Mat::from_rows(
        raw.basis
            .iter()
            .map(|b| {
                let mut v = Vec::with_capacity(n * n);
                for r in 0..n {
                    v.extend_from_slice(b.row(r));
                }
                v
            })
            .collect(),
    );
    let (_, pivots) = flat.rref();
    if pivots.len() != dim {
        return Err(IsolabError::Construction(format!(
            "{}: basis is linearly dependent",
            raw.label
        )));
    }
    let picked = Mat::from_fn(dim, dim, |i, j| {
        let p = pivots[j];
        raw.basis[i].get(p / n, p % n).clone()
    });
    let expand_inv = picked
        .transpose()
        .inverse()
        .ok_or_else(|| IsolabError::Construction(format!("{}: pivot solve failed", raw.label)))?;

    let mut alg = LieAlgebra {
        label: raw.label,
        family: raw.family.clone(),
        rep_dim: n,
        basis: raw.basis,
        dim,
        brackets: Vec::new(),
        killing: Mat::zero(dim, dim),
        rank: raw.rank,
        exponents: raw.family.exponents(),
        form: raw.form,
        expand_pivots: pivots,
        expand_inv,
    };

    // Structure constants; bracket closure is verified by coords_of_matrix.
    let mut brackets: Vec<Vec<SparseVec>> = vec![vec![Vec::new(); dim]; dim];
    for i in 0..dim {
        for j in (i + 1)..dim {
            let comm = alg.basis[i]
                .matmul(&alg.basis[j])
                .sub(&alg.basis[j].matmul(&alg.basis[i]));
            let coeffs = alg.coords_of_matrix(&comm).map_err(|_| {
                IsolabError::Construction(format!(
                    "{}: bracket of basis elements {} and {} leaves the algebra",
                    alg.label, i, j
                ))
            })?;
            let sparse: SparseVec = coeffs
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(k, c)| (k, c.clone()))
                .collect();
            brackets[i][j] = sparse.clone();
            brackets[j][i] = sparse.into_iter().map(|(k, c)| (k, c.neg())).collect();
        }
    }
    alg.brackets = brackets;

    // Killing form from structure constants.
    let ad_maps: Vec<std::collections::BTreeMap<(usize, usize), Scalar>> = (0..dim)
        .map(|i| {
            let mut m = std::collections::BTreeMap::new();
            for j in 0..dim {
                for (k, c) in &alg.brackets[i][j] {
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
            for ((k, l), c) in &ad_maps[i] {
                if let Some(d) = ad_maps[j].get(&(*l, *k)) {
                    acc = acc.add(&c.mul(d));
                }
            }
            killing.set(i, j, acc.clone());
            killing.set(j, i, acc);
        }
    }
    if killing.rank() != dim {
        return Err(IsolabError::Construction(format!(
            "{}: Killing form is degenerate",
            alg.label
        )));
    }
    alg.killing = killing;

    if verify_jacobi {
        verify_jacobi_full(&alg)?;
    }

    let alg = Arc::new(alg);

    // Rank certificate: the witness must be regular semisimple with
    // centralizer dimension equal to the tabulated rank.
    let w = Element::from_matrix(&alg, &raw.regular_witness)?;
    let zc = centralizer_of_element(&w, &alg.full_space());
    if zc.dim() != alg.rank {
        return Err(IsolabError::Construction(format!(
            "{}: rank certificate failed ({} vs {})",
            alg.label,
            zc.dim(),
            alg.rank
        )));
    }
    if alg.exponents.len() != alg.rank {
        return Err(IsolabError::Construction(format!(
            "{}: exponent count does not match rank",
            alg.label
        )));
    }
    // dim g = rank + 2 * (number of positive roots): positive-root count must
    // be integral and consistent.
    if (alg.dim - alg.rank) % 2 != 0 {
        return Err(IsolabError::Construction(format!(
            "{}: dim/rank parity is inconsistent",
            alg.label
        )));
    }
    Ok(alg)
}

fn verify_jacobi_full(alg: &LieAlgebra) -> Result<(), IsolabError> {
    let dim = alg.dim;
    let sparse_bracket = |i: usize, v: &SparseVec| -> Vec<Scalar> {
        let mut out = vec![Scalar::zero(); dim];
        for (j, c) in v {
            for (k, d) in &alg.brackets[i][*j] {
                out[*k] = out[*k].add(&c.mul(d));
            }
        }
        out
    };
    for i in 0..dim {
        for j in (i + 1)..dim {
            for k in (j + 1)..dim {
                let a = sparse_bracket(i, &alg.brackets[j][k]);
                let b = sparse_bracket(j, &alg.brackets[k][i]);
                let c = sparse_bracket(k, &alg.brackets[i][j]);
                for t in 0..dim {
                    if !a[t].add(&b[t]).add(&c[t]).is_zero() {
                        return Err(IsolabError::Construction(format!(
                            "{}: Jacobi identity fails on basis triple ({},{},{})",
                            alg.label, i, j, k
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

fn unit(n: usize, r: usize, c: usize) -> Mat {
    let mut m = Mat::zero(n, n);
    m.set(r, c, Scalar::one());
    m
}

/// sl(n): traceless n x n matrices. Basis: off-diagonal units, then the
/// simple coroot differences on the diagonal.
pub fn make_sl(n: usize) -> Result<Alg, IsolabError> {
    if n < 2 {
        return Err(IsolabError::Construction(format!(
            "sl({}) requires n >= 2",
            n
        )));
    }
    let mut basis = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                basis.push(unit(n, i, j));
            }
        }
    }
    for i in 0..n - 1 {
        let mut m = Mat::zero(n, n);
        m.set(i, i, Scalar::one());
        m.set(i + 1, i + 1, Scalar::from_int(-1));
        basis.push(m);
    }
    // diag(n-1, n-3, ..., 1-n) is regular semisimple with distinct entries
    // (distinct gaps), and traceless.
    let witness = Mat::from_fn(n, n, |r, c| {
        if r == c {
            Scalar::from_int((n as i64 - 1) - 2 * r as i64)
        } else {
            Scalar::zero()
        }
    });
    finish(
        RawAlgebra {
            label: format!("sl({})", n),
            family: Family::SpecialLinear(n),
            rep_dim: n,
            basis,
            form: FormConvention::None,
            rank: n - 1,
            regular_witness: witness,
        },
        true,
    )
}

/// Which Gram matrix realizes an orthogonal algebra.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrthogonalConvention {
    /// Ones on the antidiagonal (split form; diagonal matrices form a torus).
    Antidiagonal,
    /// The identity matrix (plain skew-symmetric matrices).
    Standard,
}

fn form_fixed_basis(n: usize, gram: &Mat) -> Vec<Mat> {
    // tau(X) = -G X^T G^-1; the algebra is the fixed space. For signed
    // permutation G, tau maps the unit E_uv to a multiple of a single unit,
    // so orbit sums give a sparse basis.
    let ginv = gram.inverse().expect("gram matrix invertible");
    let tau = |x: &Mat| -> Mat { gram.matmul(&x.transpose()).matmul(&ginv).neg() };
    let mut used = vec![vec![false; n]; n];
    let mut basis = Vec::new();
    for u in 0..n {
        for v in 0..n {
            if used[u][v] {
                continue;
            }
            let e = unit(n, u, v);
            let s = e.add(&tau(&e));
            if s.is_zero() {
                used[u][v] = true;
                continue;
            }
            // mark the support of the orbit
            for r in 0..n {
                for c in 0..n {
                    if !s.get(r, c).is_zero() {
                        used[r][c] = true;
                    }
                }
            }
            basis.push(s);
        }
    }
    basis
}

/// so(n) with the chosen form convention.
pub fn make_so(n: usize, convention: OrthogonalConvention) -> Result<Alg, IsolabError> {
    if n < 3 {
        return Err(IsolabError::Construction(format!(
            "so({}) requires n >= 3",
            n
        )));
    }
    let gram = match convention {
        OrthogonalConvention::Antidiagonal => {
            Mat::from_fn(n, n, |r, c| {
                if r + c == n - 1 {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            })
        }
        OrthogonalConvention::Standard => Mat::identity(n),
    };
    let basis = form_fixed_basis(n, &gram);
    if basis.len() != n * (n - 1) / 2 {
        return Err(IsolabError::Construction(format!(
            "so({}): expected dim {}, built {}",
            n,
            n * (n - 1) / 2,
            basis.len()
        )));
    }
    let k = n / 2;
    let witness = match convention {
        OrthogonalConvention::Antidiagonal => {
            // diag(a_1..a_k, [0], -a_k..-a_1) with distinct gaps
            Mat::from_fn(n, n, |r, c| {
                if r != c {
                    Scalar::zero()
                } else if r < k {
                    Scalar::from_int(1 + r as i64)
                } else if n - 1 - r < k {
                    Scalar::from_int(-(1 + (n - 1 - r) as i64))
                } else {
                    Scalar::zero()
                }
            })
        }
        OrthogonalConvention::Standard => {
            // block rotations with distinct weights; eigenvalues +/- i*w
            let i_unit = Scalar::i_unit().map_err(IsolabError::Linalg)?;
            let _ = &i_unit;
            let mut m = Mat::zero(n, n);
            for b in 0..k {
                let w = Scalar::from_int(1 + b as i64);
                m.set(2 * b, 2 * b + 1, w.clone());
                m.set(2 * b + 1, 2 * b, w.neg());
            }
            m
        }
    };
    finish(
        RawAlgebra {
            label: match convention {
                OrthogonalConvention::Antidiagonal => format!("so({},antidiag)", n),
                OrthogonalConvention::Standard => format!("so({},standard)", n),
            },
            family: Family::Orthogonal(n),
            rep_dim: n,
            basis,
            form: FormConvention::Orthogonal { gram },
            rank: k,
            regular_witness: witness,
        },
        true,
    )
}

/// sp(2n) with the antidiagonal skew form (diagonal matrices form a torus).
pub fn make_sp(n2: usize) -> Result<Alg, IsolabError> {
    if n2 < 2 || n2 % 2 != 0 {
        return Err(IsolabError::Construction(format!(
            "sp({}) requires even n >= 2",
            n2
        )));
    }
    let n = n2;
    let half = n / 2;
    let gram = Mat::from_fn(n, n, |r, c| {
        if r + c == n - 1 {
            if r < half {
                Scalar::one()
            } else {
                Scalar::from_int(-1)
            }
        } else {
            Scalar::zero()
        }
    });
    let basis = form_fixed_basis(n, &gram);
    if basis.len() != half * (n + 1) {
        return Err(IsolabError::Construction(format!(
            "sp({}): expected dim {}, built {}",
            n,
            half * (n + 1),
            basis.len()
        )));
    }
    let witness = Mat::from_fn(n, n, |r, c| {
        if r != c {
            Scalar::zero()
        } else if r < half {
            Scalar::from_int(1 + r as i64)
        } else {
            Scalar::from_int(-(1 + (n - 1 - r) as i64))
        }
    });
    finish(
        RawAlgebra {
            label: format!("sp({})", n),
            family: Family::Symplectic(n),
            rep_dim: n,
            basis,
            form: FormConvention::Symplectic { gram },
            rank: half,
            regular_witness: witness,
        },
        true,
    )
}

/// Block-diagonal direct sum; bracket, Killing form and rank are blockwise.
pub fn direct_sum(a: &Alg, b: &Alg) -> Result<Alg, IsolabError> {
    let n = a.rep_dim + b.rep_dim;
    let mut basis = Vec::new();
    for m in &a.basis {
        basis.push(Mat::from_fn(n, n, |r, c| {
            if r < a.rep_dim && c < a.rep_dim {
                m.get(r, c).clone()
            } else {
                Scalar::zero()
            }
        }));
    }
    for m in &b.basis {
        basis.push(Mat::from_fn(n, n, |r, c| {
            if r >= a.rep_dim && c >= a.rep_dim {
                m.get(r - a.rep_dim, c - a.rep_dim).clone()
            } else {
                Scalar::zero()
            }
        }));
    }
    let ra = Element::from_matrix(a, &{
        // reuse each factor's own regular witness via its rank certificate
        // by rebuilding it: simplest is a fresh witness from the stored basis
        // coordinates; here we recompute from the certified construction.
        a.basis
            .iter()
            .fold(Mat::zero(a.rep_dim, a.rep_dim), |acc, _| acc)
    });
    let _ = ra;
    // Regular witness: block-diagonal combination of generic semisimple
    // elements. Use shifted scalars per block so joint spectrum gaps differ.
    let wa = regular_witness_from(a, 1)?;
    let wb = regular_witness_from(b, 1 + a.rep_dim as i64)?;
    let witness = Mat::from_fn(n, n, |r, c| {
        if r < a.rep_dim && c < a.rep_dim {
            wa.get(r, c).clone()
        } else if r >= a.rep_dim && c >= a.rep_dim {
            wb.get(r - a.rep_dim, c - a.rep_dim).clone()
        } else {
            Scalar::zero()
        }
    });
    finish(
        RawAlgebra {
            label: format!("{}+{}", a.label, b.label),
            family: Family::Sum(Box::new(a.family.clone()), Box::new(b.family.clone())),
            rep_dim: n,
            basis,
            form: FormConvention::None,
            rank: a.rank + b.rank,
            regular_witness: witness,
        },
        true,
    )
}

/// A regular semisimple rep matrix for an already-certified algebra, with a
/// weight offset so direct sums stay regular.
fn regular_witness_from(a: &Alg, offset: i64) -> Result<Mat, IsolabError> {
    match &a.family {
        Family::SpecialLinear(n) => Ok(Mat::from_fn(*n, *n, |r, c| {
            if r == c {
                Scalar::from_int(offset * ((*n as i64 - 1) - 2 * r as i64))
            } else {
                Scalar::zero()
            }
        })),
        Family::Orthogonal(n) => {
            let k = n / 2;
            match &a.form {
                FormConvention::Orthogonal { gram } if *gram == Mat::identity(*n) => {
                    let mut m = Mat::zero(*n, *n);
                    for b in 0..k {
                        let w = Scalar::from_int(offset * (1 + b as i64));
                        m.set(2 * b, 2 * b + 1, w.clone());
                        m.set(2 * b + 1, 2 * b, w.neg());
                    }
                    Ok(m)
                }
                _ => Ok(Mat::from_fn(*n, *n, |r, c| {
                    if r != c {
                        Scalar::zero()
                    } else if r < k {
                        Scalar::from_int(offset * (1 + r as i64))
                    } else if n - 1 - r < k {
                        Scalar::from_int(-offset * (1 + (n - 1 - r) as i64))
                    } else {
                        Scalar::zero()
                    }
                })),
            }
        }
        Family::Symplectic(n) => {
            let half = n / 2;
            Ok(Mat::from_fn(*n, *n, |r, c| {
                if r != c {
                    Scalar::zero()
                } else if r < half {
                    Scalar::from_int(offset * (1 + r as i64))
                } else {
                    Scalar::from_int(-offset * (1 + (n - 1 - r) as i64))
                }
            }))
        }
        Family::Sum(..) => Err(IsolabError::Construction(
            "nested direct sums are not supported".into(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use exact_linalg::Subspace;

    #[test]
    fn sl2_standard_relations() {
        let g = make_sl(2).unwrap();
        assert_eq!(g.dim(), 3);
        assert_eq!(g.rank(), 1);
        assert_eq!(g.exponents(), &[1]);
        assert_eq!((g.k0(), g.k1()), (0, 1));
        // basis order: E01, E10, H
        let e = Element::basis_element(&g, 0);
        let f = Element::basis_element(&g, 1);
        let h = Element::basis_element(&g, 2);
        let ef = bracket(&e, &f).unwrap();
        assert_eq!(ef.coeffs(), h.coeffs());
        let xx = bracket(&e, &e).unwrap();
        assert!(xx.is_zero());
    }

    #[test]
    fn sl3_dimensions() {
        let g = make_sl(3).unwrap();
        assert_eq!(g.dim(), 8);
        assert_eq!(g.rank(), 2);
        assert_eq!(g.exponents(), &[1, 2]);
        assert_eq!((g.k0(), g.k1()), (1, 1));
    }

    #[test]
    fn so8_antidiag_dimensions() {
        let g = make_so(8, OrthogonalConvention::Antidiagonal).unwrap();
        assert_eq!(g.dim(), 28);
        assert_eq!(g.rank(), 4);
        assert_eq!(g.exponents(), &[1, 3, 3, 5]);
        assert_eq!((g.k0(), g.k1()), (0, 4));
    }

    #[test]
    fn so7_standard_dimensions() {
        let g = make_so(7, OrthogonalConvention::Standard).unwrap();
        assert_eq!(g.dim(), 21);
        assert_eq!(g.rank(), 3);
        assert_eq!(g.exponents(), &[1, 3, 5]);
    }

    #[test]
    fn sp4_dimensions() {
        let g = make_sp(4).unwrap();
        assert_eq!(g.dim(), 10);
        assert_eq!(g.rank(), 2);
        assert_eq!(g.exponents(), &[1, 3]);
        assert_eq!((g.k0(), g.k1()), (0, 2));
    }

    #[test]
    fn direct_sum_is_additive() {
        let a = make_sl(2).unwrap();
        let g = direct_sum(&a, &a).unwrap();
        assert_eq!(g.dim(), 6);
        assert_eq!(g.rank(), 2);
        assert_eq!(g.exponents(), &[1, 1]);
    }

    #[test]
    fn killing_invariance_random_triples() {
        let g = make_sl(3).unwrap();
        // kappa([x,y],z) + kappa(y,[x,z]) = 0 on a few integer elements
        let xs = [
            Element::new(&g, (0..8).map(|i| Scalar::from_int((i % 3) as i64 - 1)).collect()),
            Element::new(&g, (0..8).map(|i| Scalar::from_int((i % 5) as i64)).collect()),
            Element::new(&g, (0..8).map(|i| Scalar::from_int(((7 * i + 2) % 4) as i64 - 2)).collect()),
        ];
        for x in &xs {
            for y in &xs {
                for z in &xs {
                    let lhs = killing_form(&bracket(x, y).unwrap(), z).unwrap();
                    let rhs = killing_form(y, &bracket(x, z).unwrap()).unwrap();
                    assert!(lhs.add(&rhs).is_zero());
                }
            }
        }
    }

    #[test]
    fn killing_gram_nondegenerate_sl3() {
        let g = make_sl(3).unwrap();
        assert!(!g.killing_matrix().det().is_zero());
    }

    #[test]
    fn centralizer_cases() {
        let g = make_sl(2).unwrap();
        let full = g.full_space();
        // centralizer of 0 is everything
        assert_eq!(centralizer(&g, &Subspace::zero(g.dim()), &full), full);
        // centralizer of the torus is the torus
        let h = Element::basis_element(&g, 2);
        let zh = centralizer_of_element(&h, &full);
        assert_eq!(zh.dim(), 1);
        assert!(zh.contains_vec(h.coeffs()));
    }

    #[test]
    fn classify_elements_sl2_sl3() {
        let g2 = make_sl(2).unwrap();
        let zero = Element::zero(&g2);
        let c = classify_element(&zero);
        assert!(c.semisimple && c.nilpotent);
        assert!(!is_regular(&zero));
        // diag(1,-1) in sl2 is regular semisimple
        let h = Element::basis_element(&g2, 2);
        let ch = classify_element(&h);
        assert!(ch.semisimple && !ch.nilpotent);
        assert!(is_regular(&h));
        // full Jordan block in sl3 is regular nilpotent
        let g3 = make_sl(3).unwrap();
        let mut m = Mat::zero(3, 3);
        m.set(0, 1, Scalar::one());
        m.set(1, 2, Scalar::one());
        let e = Element::from_matrix(&g3, &m).unwrap();
        let ce = classify_element(&e);
        assert!(ce.nilpotent && !ce.semisimple);
        assert!(is_regular(&e));
    }

    #[test]
    fn dim_rank_root_count_consistency() {
        for g in [
            make_sl(4).unwrap(),
            make_so(8, OrthogonalConvention::Antidiagonal).unwrap(),
            make_so(7, OrthogonalConvention::Standard).unwrap(),
            make_sp(6).unwrap(),
        ] {
            let positive_roots = (g.dim() - g.rank()) / 2;
            assert_eq!(g.dim(), g.rank() + 2 * positive_roots);
            assert_eq!(g.k0() + g.k1(), g.rank());
            // sum of exponents equals the number of positive roots
            assert_eq!(g.exponents().iter().sum::<usize>(), positive_roots);
        }
    }

    /// Independent oracle for the exponent tables: take a regular nilpotent
    /// e, solve for h with [h, e] = 2e inside im(ad e), and read the ad-h
    /// eigenvalues on z(e); they are exactly twice the exponents.
    fn exponents_via_principal_element(g: &Alg, e: &Element) -> Vec<usize> {
        assert!(classify_element(e).nilpotent && is_regular(e));
        let ade = ad(e);
        // h = [e, w] with [h, e] = 2e: ad(e)^2 w = -2 e
        let target: Vec<Scalar> = e.coeffs().iter().map(|c| c.mul_int(-2)).collect();
        let w = ade.matmul(&ade).solve(&target).expect("principal element");
        let h = bracket(e, &Element::new(g, w)).unwrap();
        let hb = bracket(&h, e).unwrap();
        assert_eq!(hb.coeffs(), e.scale(&Scalar::from_int(2)).coeffs());
        // restrict ad h to z(e)
        let z = centralizer_of_element(e, &g.full_space());
        assert_eq!(z.dim(), g.rank());
        let adh = ad(&h);
        let mut exps = Vec::new();
        for m in 0..(2 * g.rep_dim() as i64) {
            // eigenvalue 2m multiplicity inside z(e)
            let shifted = adh.sub(&Mat::identity(g.dim()).scale(&Scalar::from_int(2 * m)));
            let ker = Subspace::from_rows(&shifted.nullspace());
            let mult = ker.intersect(&z).unwrap().dim();
            for _ in 0..mult {
                exps.push(m as usize);
            }
        }
        assert_eq!(exps.len(), g.rank(), "eigenvalues must exhaust z(e)");
        exps
    }

    fn strictly_upper_regular_nilpotent(g: &Alg) -> Element {
        // For realizations whose strict upper triangle lies in the algebra,
        // the sum of the "first superdiagonal" basis directions is a natural
        // candidate; fall back to scanning small integer combinations.
        let n = g.rep_dim();
        let upper: Vec<usize> = (0..g.dim())
            .filter(|&i| {
                let b = g.basis_mat(i);
                let mut strict_upper = true;
                for r in 0..n {
                    for c in 0..=r {
                        if !b.get(r, c).is_zero() {
                            strict_upper = false;
                        }
                    }
                }
                strict_upper
            })
            .collect();
        assert!(!upper.is_empty(), "no strictly upper triangular part");
        // Everything supported in the strict upper triangle is nilpotent;
        // generic combinations are regular. Scan small deterministic
        // pseudo-random coefficient patterns until the certificate holds.
        let mut state = 0x9e3779b97f4a7c15u64;
        for _ in 0..200 {
            let mut coeffs = vec![Scalar::zero(); g.dim()];
            for &i in &upper {
                state = state
                    .wrapping_mul(6364136223846793005)
                    .wrapping_add(1442695040888963407);
                let v = ((state >> 33) % 5) as i64 + 1;
                coeffs[i] = Scalar::from_int(v);
            }
            let e = Element::new(g, coeffs);
            if classify_element(&e).nilpotent && is_regular(&e) {
                return e;
            }
        }
        panic!("no regular nilpotent found in the strict upper triangle");
    }

    #[test]
    fn exponent_tables_match_principal_oracle() {
        for g in [
            make_sl(2).unwrap(),
            make_sl(3).unwrap(),
            make_sl(4).unwrap(),
            make_sp(4).unwrap(),
            make_so(8, OrthogonalConvention::Antidiagonal).unwrap(),
            make_so(7, OrthogonalConvention::Antidiagonal).unwrap(),
            make_so(6, OrthogonalConvention::Antidiagonal).unwrap(),
        ] {
            let e = strictly_upper_regular_nilpotent(&g);
            let oracle = exponents_via_principal_element(&g, &e);
            assert_eq!(
                oracle,
                g.exponents(),
                "exponent table mismatch for {}",
                g.label()
            );
        }
    }
}
