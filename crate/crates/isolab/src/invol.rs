//! Involutions and commuting pairs: automorphisms with certified group-level
//! actions, the joint-eigenspace decomposition of a commuting pair, involution
//! classification, the order-4 construction of commuting conjugate pairs,
//! commuting maximal-rank pairs with prescribed product, and restricted-root
//! decompositions with their parity involutions.

use exact_linalg::{minimal_polynomial, Mat, Scalar, Subspace};

use crate::error::IsolabError;
use crate::lie::{ad, bracket, is_regular, Alg, Element, FormConvention};
use crate::sample::{element_in, SampleRng};

/// Group-level action in normal form: either s -> a s a^-1 or
/// s -> a (s^T)^-1 a^-1. Both induce Lie-algebra maps on the defining
/// representation, and the family is closed under composition and inverse.
#[derive(Clone, PartialEq)]
pub enum GroupAction {
    Conj(Mat),
    ConjInvTranspose(Mat),
}

impl GroupAction {
    pub fn apply_group(&self, s: &Mat) -> Mat {
        match self {
            GroupAction::Conj(a) => a
                .matmul(s)
                .matmul(&a.inverse().expect("conjugator invertible")),
            GroupAction::ConjInvTranspose(a) => a
                .matmul(&s.transpose().inverse().expect("group element invertible"))
                .matmul(&a.inverse().expect("conjugator invertible")),
        }
    }

    pub fn apply_rep(&self, x: &Mat) -> Mat {
        match self {
            GroupAction::Conj(a) => a
                .matmul(x)
                .matmul(&a.inverse().expect("conjugator invertible")),
            GroupAction::ConjInvTranspose(a) => a
                .matmul(&x.transpose())
                .matmul(&a.inverse().expect("conjugator invertible"))
                .neg(),
        }
    }

    /// self after other (function composition).
    pub fn compose(&self, other: &GroupAction) -> GroupAction {
        match (self, other) {
            (GroupAction::Conj(a), GroupAction::Conj(b)) => GroupAction::Conj(a.matmul(b)),
            (GroupAction::Conj(a), GroupAction::ConjInvTranspose(b)) => {
                GroupAction::ConjInvTranspose(a.matmul(b))
            }
            (GroupAction::ConjInvTranspose(a), GroupAction::Conj(b)) => {
                let binv_t = b.inverse().expect("invertible").transpose();
                GroupAction::ConjInvTranspose(a.matmul(&binv_t))
            }
            (GroupAction::ConjInvTranspose(a), GroupAction::ConjInvTranspose(b)) => {
                let binv_t = b.inverse().expect("invertible").transpose();
                GroupAction::Conj(a.matmul(&binv_t))
            }
        }
    }

    pub fn inverse(&self) -> GroupAction {
        match self {
            GroupAction::Conj(a) => GroupAction::Conj(a.inverse().expect("invertible")),
            GroupAction::ConjInvTranspose(a) => GroupAction::ConjInvTranspose(a.transpose()),
        }
    }
}

#[derive(Clone, PartialEq)]
pub enum AutKind {
    /// Conjugation by a witness matrix certified to induce an inner
    /// automorphism of the algebra.
    Inner { witness: Mat },
    /// Built from a transpose-type action (outer for sl(n), n > 2).
    Outer,
    /// Composite or spectral constructions without a certified witness.
    Composite,
}

#[derive(Clone)]
pub struct Automorphism {
    alg: Alg,
    map: Mat,
    order: usize,
    kind: AutKind,
    action: Option<GroupAction>,
}

impl Automorphism {
    pub fn algebra(&self) -> &Alg {
        &self.alg
    }

    pub fn map(&self) -> &Mat {
        &self.map
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn kind(&self) -> &AutKind {
        &self.kind
    }

    pub fn action(&self) -> Option<&GroupAction> {
        self.action.as_ref()
    }

    pub fn is_involution(&self) -> bool {
        self.order <= 2
    }

    pub fn is_identity(&self) -> bool {
        self.order == 1
    }

    pub fn is_inner(&self) -> bool {
        matches!(self.kind, AutKind::Inner { .. })
    }

    pub fn apply(&self, x: &Element) -> Element {
        Element::new(&self.alg, self.map.mul_vec(x.coeffs()))
    }

    pub fn apply_subspace(&self, s: &Subspace) -> Subspace {
        s.apply(&self.map)
    }

    /// Eigenspace for eigenvalue +1 (sign = 0) or -1 (sign = 1).
    pub fn eigenspace(&self, sign: u8) -> Subspace {
        let n = self.alg.dim();
        let shift = if sign == 0 {
            Mat::identity(n).neg()
        } else {
            Mat::identity(n)
        };
        Subspace::from_rows(&self.map.add(&shift).nullspace())
    }

    pub fn compose(&self, other: &Automorphism) -> Result<Automorphism, IsolabError> {
        if !std::sync::Arc::ptr_eq(&self.alg, &other.alg) {
            return Err(IsolabError::AlgebraMismatch {
                left: self.alg.label().to_string(),
                right: other.alg.label().to_string(),
            });
        }
        let map = self.map.matmul(&other.map);
        let action = match (&self.action, &other.action) {
            (Some(a), Some(b)) => Some(a.compose(b)),
            _ => None,
        };
        let kind = kind_from_action(&self.alg, &action);
        let order = order_of(&map)?;
        Ok(Automorphism {
            alg: self.alg.clone(),
            map,
            order,
            kind,
            action,
        })
    }

    pub fn inverse(&self) -> Automorphism {
        Automorphism {
            alg: self.alg.clone(),
            map: self.map.inverse().expect("automorphism invertible"),
            order: self.order,
            kind: match &self.kind {
                AutKind::Inner { witness } => AutKind::Inner {
                    witness: witness.inverse().expect("witness invertible"),
                },
                k => k.clone(),
            },
            action: self.action.as_ref().map(GroupAction::inverse),
        }
    }

    pub fn same_map(&self, other: &Automorphism) -> bool {
        self.map == other.map
    }

    /// Full automorphism-law check on all basis pairs. Conjugation-type
    /// actions satisfy it by construction; spectral maps are checked at
    /// build time with this routine.
    pub fn verify_bracket_law(&self) -> bool {
        let dim = self.alg.dim();
        let mapped: Vec<Element> = (0..dim)
            .map(|i| self.apply(&Element::basis_element(&self.alg, i)))
            .collect();
        for i in 0..dim {
            for j in (i + 1)..dim {
                let bi = Element::basis_element(&self.alg, i);
                let bj = Element::basis_element(&self.alg, j);
                let lhs = self.apply(&bracket(&bi, &bj).expect("same algebra"));
                let rhs = bracket(&mapped[i], &mapped[j]).expect("same algebra");
                if lhs.coeffs() != rhs.coeffs() {
                    return false;
                }
            }
        }
        true
    }
}

impl std::fmt::Debug for Automorphism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Automorphism[{}] order {} kind {}",
            self.alg.label(),
            self.order,
            match self.kind {
                AutKind::Inner { .. } => "inner",
                AutKind::Outer => "outer",
                AutKind::Composite => "composite",
            }
        )
    }
}

fn order_of(map: &Mat) -> Result<usize, IsolabError> {
    let n = map.rows();
    let id = Mat::identity(n);
    let mut acc = map.clone();
    for k in 1..=8 {
        if acc == id {
            return Ok(k);
        }
        acc = acc.matmul(map);
    }
    Err(IsolabError::Construction(
        "automorphism order exceeds 8".into(),
    ))
}

/// Certify that conjugation by w is an inner automorphism (that is, w lies in
/// the identity component of the similitude group of the realization).
fn inner_witness_certified(alg: &Alg, w: &Mat) -> bool {
    match alg.form() {
        FormConvention::None => true,
        FormConvention::Symplectic { .. } => true,
        FormConvention::Orthogonal { gram } => {
            // similitude factor: w^T G w = lambda G
            let wgw = w.transpose().matmul(gram).matmul(w);
            let mut lambda = None;
            for r in 0..gram.rows() {
                for c in 0..gram.cols() {
                    if !gram.get(r, c).is_zero() {
                        lambda = wgw.get(r, c).div(gram.get(r, c));
                        break;
                    }
                }
                if lambda.is_some() {
                    break;
                }
            }
            let Some(lambda) = lambda else { return false };
            if wgw != gram.scale(&lambda) {
                return false;
            }
            let n = gram.rows();
            if n % 2 == 1 {
                // odd orthogonal: every form-preserving conjugation is inner
                true
            } else {
                // proper similitudes: det w = lambda^(n/2)
                w.det() == lambda.pow((n / 2) as u32)
            }
        }
    }
}

fn kind_from_action(alg: &Alg, action: &Option<GroupAction>) -> AutKind {
    match action {
        Some(GroupAction::Conj(w)) if inner_witness_certified(alg, w) => {
            AutKind::Inner { witness: w.clone() }
        }
        Some(GroupAction::Conj(_)) => AutKind::Composite,
        Some(GroupAction::ConjInvTranspose(_)) => AutKind::Outer,
        None => AutKind::Composite,
    }
}

/// Build an automorphism from a group action; membership of the mapped basis
/// in the algebra is verified exactly (conjugation-type actions then satisfy
/// the bracket law identically).
pub fn automorphism_from_action(alg: &Alg, action: GroupAction) -> Result<Automorphism, IsolabError> {
    let dim = alg.dim();
    let mut map = Mat::zero(dim, dim);
    for j in 0..dim {
        let img = action.apply_rep(alg.basis_mat(j));
        let coords = alg.coords_of_matrix(&img).map_err(|_| {
            IsolabError::Construction(format!(
                "action does not preserve the algebra {}",
                alg.label()
            ))
        })?;
        for (i, c) in coords.into_iter().enumerate() {
            if !c.is_zero() {
                map.set(i, j, c);
            }
        }
    }
    let order = order_of(&map)?;
    let kind = kind_from_action(alg, &Some(action.clone()));
    Ok(Automorphism {
        alg: alg.clone(),
        map,
        order,
        kind,
        action: Some(action),
    })
}

/// Spectral (map-only) automorphism; the bracket law is verified on all
/// basis pairs since there is no conjugation certificate.
pub fn automorphism_from_map(alg: &Alg, map: Mat) -> Result<Automorphism, IsolabError> {
    let order = order_of(&map)?;
    let aut = Automorphism {
        alg: alg.clone(),
        map,
        order,
        kind: AutKind::Composite,
        action: None,
    };
    if !aut.verify_bracket_law() {
        return Err(IsolabError::Construction(
            "map violates the automorphism law".into(),
        ));
    }
    Ok(aut)
}

/// Involution by conjugation: s must be invertible with central (scalar)
/// square.
pub fn inner_involution(alg: &Alg, s: &Mat) -> Result<Automorphism, IsolabError> {
    if s.inverse().is_none() {
        return Err(IsolabError::Precondition("witness must be invertible".into()));
    }
    let s2 = s.matmul(s);
    let lambda = s2.get(0, 0).clone();
    if s2 != Mat::identity(s.rows()).scale(&lambda) || lambda.is_zero() {
        return Err(IsolabError::Precondition(
            "witness squared must be a scalar matrix".into(),
        ));
    }
    let aut = automorphism_from_action(alg, GroupAction::Conj(s.clone()))?;
    if !aut.is_involution() {
        return Err(IsolabError::Precondition(
            "conjugation is not an involution of the algebra".into(),
        ));
    }
    Ok(aut)
}

/// x -> -x^T, optionally twisted by an inner conjugation: x -> -a x^T a^-1.
pub fn outer_involution_sl(alg: &Alg, twist: Option<&Mat>) -> Result<Automorphism, IsolabError> {
    let a = twist.cloned().unwrap_or_else(|| Mat::identity(alg.rep_dim()));
    let aut = automorphism_from_action(alg, GroupAction::ConjInvTranspose(a))?;
    if !aut.is_involution() {
        return Err(IsolabError::Precondition(
            "twisted transpose map is not an involution".into(),
        ));
    }
    Ok(aut)
}

/// Factor swap on a direct sum g + g, realized as conjugation by the block
/// permutation in the defining representation.
pub fn swap_involution(alg: &Alg) -> Result<Automorphism, IsolabError> {
    let n = alg.rep_dim();
    if n % 2 != 0 {
        return Err(IsolabError::Precondition(
            "swap needs a direct sum of equal summands".into(),
        ));
    }
    let h = n / 2;
    let p = Mat::from_fn(n, n, |r, c| {
        if (r + h) % n == c {
            Scalar::one()
        } else {
            Scalar::zero()
        }
    });
    let mut aut = automorphism_from_action(alg, GroupAction::Conj(p))?;
    // The factor swap is an outer automorphism of the sum even though it is
    // realized by conjugation in the ambient matrix space.
    aut.kind = AutKind::Outer;
    if !aut.is_involution() || aut.is_identity() {
        return Err(IsolabError::Precondition(
            "swap is not a nontrivial involution here".into(),
        ));
    }
    Ok(aut)
}

/// Lift an involution of the summand to sigma + sigma on the direct sum.
pub fn lift_to_sum(sum_alg: &Alg, sigma: &Automorphism) -> Result<Automorphism, IsolabError> {
    let h = sigma.alg.rep_dim();
    if sum_alg.rep_dim() != 2 * h {
        return Err(IsolabError::Precondition(
            "direct sum has wrong representation size".into(),
        ));
    }
    let block = |a: &Mat| -> Mat {
        Mat::from_fn(2 * h, 2 * h, |r, c| {
            if r < h && c < h {
                a.get(r, c).clone()
            } else if r >= h && c >= h {
                a.get(r - h, c - h).clone()
            } else {
                Scalar::zero()
            }
        })
    };
    let action = match sigma.action() {
        Some(GroupAction::Conj(a)) => GroupAction::Conj(block(a)),
        Some(GroupAction::ConjInvTranspose(a)) => GroupAction::ConjInvTranspose(block(a)),
        None => {
            return Err(IsolabError::Precondition(
                "summand involution carries no group action".into(),
            ))
        }
    };
    automorphism_from_action(sum_alg, action)
}

// ---------------------------------------------------------------------------
// quaternionic decomposition

/// Index of a little (off-unit) graded piece.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum LittleIdx {
    I01,
    I10,
    I11,
}

impl LittleIdx {
    pub const ALL: [LittleIdx; 3] = [LittleIdx::I01, LittleIdx::I10, LittleIdx::I11];

    pub fn bits(&self) -> (usize, usize) {
        match self {
            LittleIdx::I01 => (0, 1),
            LittleIdx::I10 => (1, 0),
            LittleIdx::I11 => (1, 1),
        }
    }

    pub fn from_bits(i: usize, j: usize) -> Option<LittleIdx> {
        match (i, j) {
            (0, 1) => Some(LittleIdx::I01),
            (1, 0) => Some(LittleIdx::I10),
            (1, 1) => Some(LittleIdx::I11),
            _ => None,
        }
    }

    /// The third little index: for distinct a, b this is the product index.
    pub fn third(a: LittleIdx, b: LittleIdx) -> LittleIdx {
        let (ai, aj) = a.bits();
        let (bi, bj) = b.bits();
        LittleIdx::from_bits((ai + bi) % 2, (aj + bj) % 2).expect("distinct little indices")
    }

    /// The two big eigenspaces containing this little piece.
    pub fn enclosing_bigs(&self) -> [BigIdx; 2] {
        match self {
            LittleIdx::I01 => [BigIdx::ColOne, BigIdx::Mixed],
            LittleIdx::I10 => [BigIdx::RowOne, BigIdx::Mixed],
            LittleIdx::I11 => [BigIdx::RowOne, BigIdx::ColOne],
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LittleIdx::I01 => "01",
            LittleIdx::I10 => "10",
            LittleIdx::I11 => "11",
        }
    }
}

/// Index of a big (-1)-eigenspace: of sigma1, sigma2 or sigma3.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum BigIdx {
    /// g_{1*} = g_10 + g_11, the (-1)-eigenspace of sigma1.
    RowOne,
    /// g_{*1} = g_01 + g_11, the (-1)-eigenspace of sigma2.
    ColOne,
    /// g_01 + g_10, the (-1)-eigenspace of sigma3.
    Mixed,
}

impl BigIdx {
    pub const ALL: [BigIdx; 3] = [BigIdx::RowOne, BigIdx::ColOne, BigIdx::Mixed];

    pub fn littles(&self) -> [LittleIdx; 2] {
        match self {
            BigIdx::RowOne => [LittleIdx::I10, LittleIdx::I11],
            BigIdx::ColOne => [LittleIdx::I01, LittleIdx::I11],
            BigIdx::Mixed => [LittleIdx::I01, LittleIdx::I10],
        }
    }

    /// Which of the three involutions (1, 2, 3) this eigenspace belongs to.
    pub fn sigma_index(&self) -> usize {
        match self {
            BigIdx::RowOne => 1,
            BigIdx::ColOne => 2,
            BigIdx::Mixed => 3,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            BigIdx::RowOne => "1*",
            BigIdx::ColOne => "*1",
            BigIdx::Mixed => "*,1-*",
        }
    }
}

pub struct QuaternionicDecomposition {
    alg: Alg,
    sigma: [Automorphism; 3],
    spaces: [[Subspace; 2]; 2],
}

impl QuaternionicDecomposition {
    pub fn algebra(&self) -> &Alg {
        &self.alg
    }

    /// sigma_k for k in 1..=3 (sigma3 = sigma1 sigma2).
    pub fn sigma(&self, k: usize) -> &Automorphism {
        &self.sigma[k - 1]
    }

    pub fn space(&self, i: usize, j: usize) -> &Subspace {
        &self.spaces[i][j]
    }

    pub fn g00(&self) -> &Subspace {
        &self.spaces[0][0]
    }

    pub fn little(&self, idx: LittleIdx) -> &Subspace {
        let (i, j) = idx.bits();
        &self.spaces[i][j]
    }

    pub fn big(&self, idx: BigIdx) -> Subspace {
        let [a, b] = idx.littles();
        self.little(a).sum(self.little(b)).expect("same ambient")
    }

    /// Projection onto the (i, j) joint eigenspace along the others.
    pub fn projection(&self, idx: LittleIdx) -> Mat {
        let (i, j) = idx.bits();
        let dim = self.alg.dim();
        let id = Mat::identity(dim);
        let quarter = Scalar::from_ratio(1, 4);
        let s1 = if i == 0 {
            id.add(self.sigma[0].map())
        } else {
            id.sub(self.sigma[0].map())
        };
        let s2 = if j == 0 {
            id.add(self.sigma[1].map())
        } else {
            id.sub(self.sigma[1].map())
        };
        s1.matmul(&s2).scale(&quarter)
    }

    pub fn dim_matrix(&self) -> [[usize; 2]; 2] {
        [
            [self.spaces[0][0].dim(), self.spaces[0][1].dim()],
            [self.spaces[1][0].dim(), self.spaces[1][1].dim()],
        ]
    }
}

/// Joint eigenspace decomposition of a commuting pair of involutions, with
/// all structural relations certified eagerly.
pub fn quaternionic(
    sigma1: &Automorphism,
    sigma2: &Automorphism,
) -> Result<QuaternionicDecomposition, IsolabError> {
    if !std::sync::Arc::ptr_eq(&sigma1.alg, &sigma2.alg) {
        return Err(IsolabError::AlgebraMismatch {
            left: sigma1.alg.label().to_string(),
            right: sigma2.alg.label().to_string(),
        });
    }
    let alg = sigma1.alg.clone();
    if !sigma1.is_involution() || !sigma2.is_involution() {
        return Err(IsolabError::Precondition("both maps must be involutions".into()));
    }
    if sigma1.is_identity() || sigma2.is_identity() {
        return Err(IsolabError::Precondition("identity is not allowed".into()));
    }
    if sigma1.same_map(sigma2) {
        return Err(IsolabError::Precondition(
            "the involutions must be different".into(),
        ));
    }
    if sigma1.map.matmul(&sigma2.map) != sigma2.map.matmul(&sigma1.map) {
        return Err(IsolabError::Precondition("the involutions must commute".into()));
    }
    let sigma3 = sigma1.compose(sigma2)?;
    if !sigma3.is_involution() || sigma3.is_identity() {
        return Err(IsolabError::Internal(
            "product of distinct commuting involutions must be an involution".into(),
        ));
    }

    let eig = |s: &Automorphism| (s.eigenspace(0), s.eigenspace(1));
    let (p0, p1) = eig(sigma1);
    let (q0, q1) = eig(sigma2);
    let spaces = [
        [p0.intersect(&q0)?, p0.intersect(&q1)?],
        [p1.intersect(&q0)?, p1.intersect(&q1)?],
    ];
    let total: usize = spaces.iter().flatten().map(Subspace::dim).sum();
    if total != alg.dim() {
        return Err(IsolabError::Internal(
            "joint eigenspaces do not fill the algebra".into(),
        ));
    }

    let q = QuaternionicDecomposition {
        alg: alg.clone(),
        sigma: [sigma1.clone(), sigma2.clone(), sigma3],
        spaces,
    };
    verify_bracket_relations(&q)?;
    verify_killing_orthogonality(&q)?;
    Ok(q)
}

/// All graded bracket inclusions: [g_u, g_v] inside g_{u+v} (indices mod 2).
fn verify_bracket_relations(q: &QuaternionicDecomposition) -> Result<(), IsolabError> {
    let idx = [(0usize, 0usize), (0, 1), (1, 0), (1, 1)];
    for &(ai, aj) in &idx {
        for &(bi, bj) in &idx {
            if (ai, aj) > (bi, bj) {
                continue;
            }
            let target = q.space((ai + bi) % 2, (aj + bj) % 2);
            let a = q.space(ai, aj);
            let b = q.space(bi, bj);
            for r in 0..a.dim() {
                for s in 0..b.dim() {
                    let x = Element::new(&q.alg, a.basis_row(r).to_vec());
                    let y = Element::new(&q.alg, b.basis_row(s).to_vec());
                    let z = bracket(&x, &y)?;
                    if !target.contains_vec(z.coeffs()) {
                        return Err(IsolabError::Internal(format!(
                            "bracket relation [g_{}{}, g_{}{}] fails",
                            ai, aj, bi, bj
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

fn verify_killing_orthogonality(q: &QuaternionicDecomposition) -> Result<(), IsolabError> {
    let idx = [(0usize, 0usize), (0, 1), (1, 0), (1, 1)];
    let k = q.alg.killing_matrix();
    for (t, &(ai, aj)) in idx.iter().enumerate() {
        for &(bi, bj) in idx.iter().skip(t + 1) {
            let a = q.space(ai, aj);
            let b = q.space(bi, bj);
            for r in 0..a.dim() {
                let ka = k.mul_vec(a.basis_row(r));
                for s in 0..b.dim() {
                    let mut acc = Scalar::zero();
                    for (x, y) in ka.iter().zip(b.basis_row(s)) {
                        if !x.is_zero() && !y.is_zero() {
                            acc = acc.add(&x.mul(y));
                        }
                    }
                    if !acc.is_zero() {
                        return Err(IsolabError::Internal(format!(
                            "Killing orthogonality fails between g_{}{} and g_{}{}",
                            ai, aj, bi, bj
                        )));
                    }
                }
            }
        }
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// involution classification

#[derive(Debug, Clone)]
pub enum QuasiMaximal {
    /// Only defined for inner involutions.
    NotApplicable,
    Certified {
        regular_semisimple: Element,
        regular_nilpotent: Option<Element>,
    },
    /// Ruled out by the even/odd exponent-count identity.
    RuledOut { detail: String },
    Inconclusive { attempts: usize },
}

#[derive(Debug, Clone)]
pub struct InvolutionClass {
    pub maximal_rank: bool,
    pub dim_fixed: usize,
    pub dim_odd: usize,
    pub quasi_maximal: QuasiMaximal,
}

/// The subspace of the algebra whose defining matrices are strictly upper
/// triangular (all its elements are nilpotent).
pub fn strictly_upper_subspace(alg: &Alg) -> Subspace {
    let n = alg.rep_dim();
    let mut rows = Vec::new();
    for r in 0..n {
        for c in 0..=r {
            let row: Vec<Scalar> = (0..alg.dim())
                .map(|i| alg.basis_mat(i).get(r, c).clone())
                .collect();
            if row.iter().any(|x| !x.is_zero()) {
                rows.push(row);
            }
        }
    }
    if rows.is_empty() {
        return alg.full_space();
    }
    Subspace::from_rows(&Mat::from_rows(rows).nullspace())
}

fn is_nilpotent_matrix(m: &Mat) -> bool {
    m.pow(m.rows()).is_zero()
}

/// Cheap necessary condition before the expensive centralizer computation:
/// regular nilpotent elements of the classical algebras have defining rank
/// at least rep_dim - 2.
fn could_be_regular_nilpotent(m: &Mat) -> bool {
    m.rank() + 2 >= m.rows()
}

/// A random combination of `support` basis rows of a subspace, with small
/// integer coefficients. Sparse combinations are much more likely to be
/// nilpotent than box samples.
fn sparse_element(
    rng: &mut SampleRng,
    alg: &Alg,
    space: &Subspace,
    support: usize,
) -> Element {
    use rand::Rng;
    let mut v = vec![Scalar::zero(); alg.dim()];
    for _ in 0..support.min(space.dim()) {
        let row = rng.random_range(0..space.dim());
        let c = Scalar::from_int(*[-2i64, -1, 1, 2].get(rng.random_range(0..4)).expect("index"));
        for (t, b) in v.iter_mut().zip(space.basis_row(row)) {
            *t = t.add(&c.mul(b));
        }
    }
    Element::new(alg, v)
}

/// Search the (-1)-eigenspace for a regular semisimple element and (when the
/// triangular slice is available) a regular nilpotent element of g.
pub fn classify_involution(sigma: &Automorphism, rng: &mut SampleRng) -> InvolutionClass {
    let alg = &sigma.alg;
    let g0 = sigma.eigenspace(0);
    let g1 = sigma.eigenspace(1);
    let maximal_rank = g1.dim() == g0.dim() + alg.rank();

    let quasi_maximal = if !sigma.is_inner() {
        QuasiMaximal::NotApplicable
    } else if g0.dim() as i64 - g1.dim() as i64 != alg.k0() as i64 - alg.k1() as i64 {
        // necessary dimension identity fails: ruled out without sampling
        QuasiMaximal::RuledOut {
            detail: format!(
                "dim g0 - dim g1 = {} but k0 - k1 = {}",
                g0.dim() as i64 - g1.dim() as i64,
                alg.k0() as i64 - alg.k1() as i64
            ),
        }
    } else {
        let mut found_ss: Option<Element> = None;
        let attempts = 60;
        let simple_family = !matches!(alg.family(), crate::lie::Family::Sum(..));
        for t in 0..attempts {
            let bound = 2 + (t / 12) as i64;
            let x = element_in(rng, alg, &g1, bound);
            if x.is_zero() {
                continue;
            }
            let p = minimal_polynomial(&x.rep_matrix());
            if !p.is_squarefree() {
                continue;
            }
            // in a simple algebra a regular semisimple element has a full
            // set of distinct eigenvalues
            if simple_family && p.degree() != Some(alg.rep_dim()) {
                continue;
            }
            if is_regular(&x) {
                found_ss = Some(x);
                break;
            }
        }
        match found_ss {
            Some(x) => {
                // Regular nilpotent cross-check: first the triangular slice
                // of the odd part (every element there is nilpotent), then
                // sparse combinations of the odd basis, testing nilpotency
                // exactly.
                let upper = strictly_upper_subspace(alg)
                    .intersect(&g1)
                    .expect("same ambient");
                let mut found_nil = None;
                // the centralizer certificate is the expensive step; cap how
                // often the search may reach it
                let mut cert_budget = 12usize;
                if !upper.is_zero() {
                    for t in 0..60 {
                        let bound = 1 + (t / 16) as i64;
                        let e = element_in(rng, alg, &upper, bound);
                        if e.is_zero() {
                            continue;
                        }
                        let m = e.rep_matrix();
                        if is_nilpotent_matrix(&m) && could_be_regular_nilpotent(&m) {
                            if cert_budget == 0 {
                                break;
                            }
                            cert_budget -= 1;
                            if is_regular(&e) {
                                found_nil = Some(e);
                                break;
                            }
                        }
                    }
                }
                if found_nil.is_none() {
                    'sparse: for support in 2..=4usize {
                        for _ in 0..120 {
                            let e = sparse_element(rng, alg, &g1, support);
                            if e.is_zero() {
                                continue;
                            }
                            let m = e.rep_matrix();
                            if is_nilpotent_matrix(&m) && could_be_regular_nilpotent(&m) {
                                if cert_budget == 0 {
                                    break 'sparse;
                                }
                                cert_budget -= 1;
                                if is_regular(&e) {
                                    found_nil = Some(e);
                                    break 'sparse;
                                }
                            }
                        }
                    }
                }
                QuasiMaximal::Certified {
                    regular_semisimple: x,
                    regular_nilpotent: found_nil,
                }
            }
            None => QuasiMaximal::Inconclusive { attempts },
        }
    };

    InvolutionClass {
        maximal_rank,
        dim_fixed: g0.dim(),
        dim_odd: g1.dim(),
        quasi_maximal,
    }
}

// ---------------------------------------------------------------------------
// dyads via order-4 inner automorphisms

pub struct Dyad {
    pub phi: Automorphism,
    pub sigma2: Automorphism,
}

/// Integer eigenvalues of a semisimple defining matrix, with multiplicity,
/// by trial deflation of the minimal polynomial.
fn integer_spectrum(m: &Mat) -> Result<Vec<(i64, Mat)>, IsolabError> {
    let p = minimal_polynomial(m);
    if !p.is_squarefree() {
        return Err(IsolabError::Precondition(
            "direction must be semisimple".into(),
        ));
    }
    let mut roots: Vec<i64> = Vec::new();
    let mut rem = p;
    'outer: while rem.degree().unwrap_or(0) > 0 {
        for cand in -64i64..=64 {
            if let Some(q) = rem.deflate_root(&Scalar::from_int(cand)) {
                roots.push(cand);
                rem = q;
                continue 'outer;
            }
        }
        return Err(IsolabError::Precondition(
            "direction spectrum is not rational-integral; realign the torus".into(),
        ));
    }
    roots.sort_unstable();
    // eigenprojections
    let n = m.rows();
    let mut out = Vec::new();
    for &w in &roots {
        let mut proj = Mat::identity(n);
        for &u in &roots {
            if u == w {
                continue;
            }
            let shifted = m.sub(&Mat::identity(n).scale(&Scalar::from_int(u)));
            let denom = Scalar::from_int(w - u).inv().expect("distinct roots");
            proj = proj.matmul(&shifted.scale(&denom));
        }
        out.push((w, proj));
    }
    Ok(out)
}

/// For sigma1 and a semisimple direction t with sigma1(t) = -t, produce an
/// order-4 inner automorphism phi from the one-parameter torus through t,
/// with sigma2 := phi sigma1 phi^-1 commuting with sigma1 and
/// sigma1 sigma2 = phi^2. The pair {sigma1, sigma2} is conjugate and
/// commuting by construction.
pub fn build_dyad(sigma1: &Automorphism, direction: &Element) -> Result<Dyad, IsolabError> {
    let alg = &sigma1.alg;
    if !sigma1.is_involution() || sigma1.is_identity() {
        return Err(IsolabError::Precondition("sigma1 must be a nontrivial involution".into()));
    }
    // Lie-level anisotropy.
    let img = sigma1.apply(direction);
    let neg: Vec<Scalar> = direction.coeffs().iter().map(Scalar::neg).collect();
    if img.coeffs() != &neg[..] {
        return Err(IsolabError::Precondition(
            "direction is not anisotropic: sigma1(t) != -t".into(),
        ));
    }
    let m = direction.rep_matrix();
    let spectrum = integer_spectrum(&m)?;
    if spectrum.len() < 2 {
        return Err(IsolabError::Precondition(
            "direction generates no torus (single eigenvalue)".into(),
        ));
    }
    // Normalize weights so differences are even with some difference = 2 mod 4.
    fn gcd_i64(a: i64, b: i64) -> i64 {
        let (mut a, mut b) = (a.abs(), b.abs());
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    }
    let w0 = spectrum[0].0;
    let mut g = 0i64;
    for (w, _) in &spectrum {
        g = gcd_i64(g, w - w0);
    }
    if g == 0 {
        return Err(IsolabError::Precondition("degenerate direction".into()));
    }
    // sigma1(t) = -t forces a symmetric spectrum, so 2w/g is integral; keeping
    // the weights antisymmetric makes sigma1 invert the torus element exactly.
    for (w, _) in &spectrum {
        if (2 * w) % g != 0 {
            return Err(IsolabError::Internal(
                "direction spectrum is not symmetric".into(),
            ));
        }
    }
    let m_order = exact_linalg::cyclotomic_order();
    if m_order % 8 != 0 {
        return Err(IsolabError::NeedLargerField(format!(
            "order-4 torus elements need an 8th root of unity; have zeta_{}",
            m_order
        )));
    }
    let step = (m_order / 8) as i64;
    let n = alg.rep_dim();
    let mut s = Mat::zero(n, n);
    for (w, proj) in &spectrum {
        let wp = 2 * w / g;
        s = s.add(&proj.scale(&Scalar::zeta_pow(step * wp)));
    }
    // s^4 must be scalar (phi^4 = id at group level).
    let s4 = s.pow(4);
    let lambda = s4.get(0, 0).clone();
    if s4 != Mat::identity(n).scale(&lambda) {
        return Err(IsolabError::Internal("s^4 is not central".into()));
    }
    // Group-level anisotropy: sigma1(s) = s^-1.
    let action = sigma1.action().ok_or_else(|| {
        IsolabError::Precondition("sigma1 carries no group-level action".into())
    })?;
    let sinv = s.inverse().expect("s invertible");
    if action.apply_group(&s) != sinv {
        return Err(IsolabError::Precondition(
            "direction is not anisotropic at the group level".into(),
        ));
    }
    let phi = automorphism_from_action(alg, GroupAction::Conj(s))?;
    if phi.order() != 4 {
        return Err(IsolabError::Precondition(format!(
            "torus element gives order {} instead of 4",
            phi.order()
        )));
    }
    let sigma2 = phi.compose(sigma1)?.compose(&phi.inverse())?;
    // All structural identities, exactly.
    if !sigma2.is_involution() || sigma2.same_map(sigma1) {
        return Err(IsolabError::Internal("conjugate is not a distinct involution".into()));
    }
    let s12 = sigma1.compose(&sigma2)?;
    let s21 = sigma2.compose(sigma1)?;
    if !s12.same_map(&s21) {
        return Err(IsolabError::Internal("dyad members do not commute".into()));
    }
    let phi2 = phi.compose(&phi)?;
    if !s12.same_map(&phi2) {
        return Err(IsolabError::Internal("sigma1 sigma2 != phi^2".into()));
    }
    Ok(Dyad { phi, sigma2 })
}

// ---------------------------------------------------------------------------
// commuting maximal-rank pairs with prescribed inner product

pub struct CanonicalPair {
    pub theta: Automorphism,
    pub theta_prime: Automorphism,
}

/// The standard maximal-rank involution whose anisotropic torus is the
/// diagonal torus of the realization: minus-transpose for sl(n),
/// conjugation by the Gram matrix for the split orthogonal and symplectic
/// realizations.
pub fn standard_maximal_rank_involution(alg: &Alg) -> Result<Automorphism, IsolabError> {
    let theta = match alg.form() {
        FormConvention::None => outer_involution_sl(alg, None)?,
        FormConvention::Orthogonal { gram } | FormConvention::Symplectic { gram } => {
            let n = alg.rep_dim();
            let is_antidiag_like = (0..n).all(|r| {
                (0..n).all(|c| r + c == n - 1 || gram.get(r, c).is_zero())
            });
            if !is_antidiag_like {
                return Err(IsolabError::Precondition(
                    "maximal-rank construction needs the split (antidiagonal) realization".into(),
                ));
            }
            inner_involution(alg, gram)?
        }
    };
    Ok(theta)
}

/// Given an inner involution mu = Int(s) with diagonal witness in the
/// anisotropic torus of the standard maximal-rank involution theta, produce
/// theta' = Int(g0) theta Int(g0)^-1 with g0 a diagonal square root of s^-1,
/// so that theta theta' = mu, both commute, and both have maximal rank.
pub fn canonical_pair(alg: &Alg, mu: &Automorphism) -> Result<CanonicalPair, IsolabError> {
    let AutKind::Inner { witness } = mu.kind() else {
        return Err(IsolabError::Precondition("mu must be inner".into()));
    };
    if !mu.is_involution() || mu.is_identity() {
        return Err(IsolabError::Precondition(
            "mu must be a nontrivial involution".into(),
        ));
    }
    let n = alg.rep_dim();
    let s = witness.clone();
    for r in 0..n {
        for c in 0..n {
            if r != c && !s.get(r, c).is_zero() {
                return Err(IsolabError::Precondition(
                    "mu's witness must be diagonal in this realization".into(),
                ));
            }
        }
    }
    let theta = standard_maximal_rank_involution(alg)?;
    let split_form = !matches!(alg.form(), FormConvention::None);
    if split_form {
        // the witness must lie in the anisotropic torus: s_k s_{n-1-k} = 1
        for k in 0..n {
            let prod = s.get(k, k).mul(s.get(n - 1 - k, n - 1 - k));
            if !prod.is_one() {
                return Err(IsolabError::Precondition(
                    "mu's witness is not in the anisotropic torus of the split form".into(),
                ));
            }
        }
    }
    // diagonal square root of s^-1 (second half mirrored for split forms)
    let mut g0 = Mat::zero(n, n);
    let half = if split_form { n.div_ceil(2) } else { n };
    for k in 0..half {
        let target = s.get(k, k).inv().expect("witness invertible");
        let root = target.sqrt().ok_or_else(|| {
            IsolabError::NeedLargerField(format!(
                "square root of {} not in the field",
                target
            ))
        })?;
        if split_form && 2 * k + 1 == n && !root.mul(&root.clone()).is_one() && !root.is_one() {
            // odd middle slot must carry +/-1
            if !s.get(k, k).is_one() {
                return Err(IsolabError::Precondition(
                    "odd-dimensional middle entry of the witness must be 1".into(),
                ));
            }
        }
        g0.set(k, k, root.clone());
        if split_form && n - 1 - k != k {
            g0.set(n - 1 - k, n - 1 - k, root.inv().expect("root of unity"));
        }
    }
    // theta' = Int(g0) theta Int(g0)^-1
    let cg = automorphism_from_action(alg, GroupAction::Conj(g0.clone()))?;
    let theta_prime = cg.compose(&theta)?.compose(&cg.inverse())?;
    // verification: involutive, maximal rank, product identities
    if !theta_prime.is_involution() {
        return Err(IsolabError::Internal("theta' is not an involution".into()));
    }
    let prod = theta.compose(&theta_prime)?;
    if !prod.same_map(mu) {
        return Err(IsolabError::Internal("theta theta' != mu".into()));
    }
    let prod2 = theta_prime.compose(&theta)?;
    if !prod2.same_map(mu) {
        return Err(IsolabError::Internal("theta' theta != mu (pair does not commute)".into()));
    }
    let rk = alg.rank();
    for t in [&theta, &theta_prime] {
        let d1 = t.eigenspace(1).dim();
        let d0 = t.eigenspace(0).dim();
        if d1 != d0 + rk {
            return Err(IsolabError::Internal(
                "constructed involution is not of maximal rank".into(),
            ));
        }
    }
    // dimension pattern of the pair
    let q = quaternionic(&theta, &theta_prime)?;
    let d = q.dim_matrix();
    if d[1][0] != d[0][1] || d[1][1] != d[0][0] + rk {
        return Err(IsolabError::Internal(
            "dimension matrix of the pair violates u = y, v - x = rk".into(),
        ));
    }
    Ok(CanonicalPair { theta, theta_prime })
}

// ---------------------------------------------------------------------------
// restricted roots

pub struct RestrictedRoot {
    /// Values on the torus basis.
    pub values: Vec<Scalar>,
    pub space: Subspace,
}

pub struct RestrictedRootSystem {
    pub alg: Alg,
    pub torus: Subspace,
    pub roots: Vec<RestrictedRoot>,
    pub zero_space: Subspace,
}

impl RestrictedRootSystem {
    pub fn multiplicity_sum(&self) -> usize {
        self.roots.iter().map(|r| r.space.dim()).sum()
    }
}

/// Eigenvalues of a defining matrix from a candidate list (entries, small
/// integers, and small half-integer multiples of roots of unity).
fn split_spectrum(m: &Mat) -> Result<Vec<Scalar>, IsolabError> {
    let p = minimal_polynomial(m);
    if !p.is_squarefree() {
        return Err(IsolabError::Precondition(
            "torus element is not semisimple".into(),
        ));
    }
    let mut candidates: Vec<Scalar> = Vec::new();
    for r in 0..m.rows() {
        candidates.push(m.get(r, r).clone());
    }
    let order = exact_linalg::cyclotomic_order() as i64;
    for q in 0..=(2 * m.rows() as i64 + 2) {
        for p2 in 0..order {
            let base = Scalar::from_int(q).mul(&Scalar::zeta_pow(p2));
            candidates.push(base.clone());
            candidates.push(base.div_int(2));
        }
    }
    let mut rem = p;
    let mut roots = Vec::new();
    'outer: while rem.degree().unwrap_or(0) > 0 {
        for cand in &candidates {
            if let Some(q) = rem.deflate_root(cand) {
                roots.push(cand.clone());
                rem = q;
                continue 'outer;
            }
        }
        return Err(IsolabError::Precondition(
            "irrational torus spectrum; realign the torus".into(),
        ));
    }
    Ok(roots)
}

/// Weight-space decomposition of g under a commuting semisimple family (the
/// basis of a certified torus with field-rational spectrum).
pub fn restricted_roots(alg: &Alg, torus: &Subspace) -> Result<RestrictedRootSystem, IsolabError> {
    let mut layers: Vec<(Vec<Scalar>, Subspace)> = vec![(vec![], alg.full_space())];
    for j in 0..torus.dim() {
        let t = Element::new(alg, torus.basis_row(j).to_vec());
        let rep = t.rep_matrix();
        let eigs = split_spectrum(&rep)?;
        // candidate ad-eigenvalues: pairwise differences
        let mut diffs: Vec<Scalar> = vec![Scalar::zero()];
        for a in &eigs {
            for b in &eigs {
                let d = a.sub(b);
                if !diffs.contains(&d) {
                    diffs.push(d);
                }
            }
        }
        let adt = ad(&t);
        let mut next = Vec::new();
        for (values, space) in &layers {
            let mut found = 0usize;
            for lam in &diffs {
                let shifted = adt.sub(&Mat::identity(alg.dim()).scale(lam));
                let ker = Subspace::from_rows(&shifted.nullspace());
                let piece = ker.intersect(space)?;
                if piece.dim() > 0 {
                    found += piece.dim();
                    let mut v = values.clone();
                    v.push(lam.clone());
                    next.push((v, piece));
                }
            }
            if found != space.dim() {
                return Err(IsolabError::Precondition(
                    "torus action did not split; spectrum incomplete".into(),
                ));
            }
        }
        layers = next;
    }
    let mut zero_space = Subspace::zero(alg.dim());
    let mut roots = Vec::new();
    for (values, space) in layers {
        if values.iter().all(Scalar::is_zero) {
            zero_space = space;
        } else {
            roots.push(RestrictedRoot { values, space });
        }
    }
    // roots come in opposite pairs with equal multiplicities
    for r in &roots {
        let negv: Vec<Scalar> = r.values.iter().map(Scalar::neg).collect();
        let partner = roots.iter().find(|o| o.values == negv);
        match partner {
            Some(o) if o.space.dim() == r.space.dim() => {}
            _ => {
                return Err(IsolabError::Internal(
                    "restricted roots are not symmetric".into(),
                ))
            }
        }
    }
    let total: usize = roots.iter().map(|r| r.space.dim()).sum::<usize>() + zero_space.dim();
    if total != alg.dim() {
        return Err(IsolabError::Internal(
            "restricted root decomposition is incomplete".into(),
        ));
    }
    Ok(RestrictedRootSystem {
        alg: alg.clone(),
        torus: torus.clone(),
        roots,
        zero_space,
    })
}

/// Parity involution attached to an integral linear form on the restricted
/// roots: +1 on the zero space and even-level root spaces, -1 on odd levels.
/// ell is given by its coefficients against the torus basis, so
/// ell(root) = sum ell_j * root.values[j], which must be a rational integer
/// for every root and odd for at least one.
pub fn sigma3_from_form(
    phi: &RestrictedRootSystem,
    ell: &[Scalar],
) -> Result<Automorphism, IsolabError> {
    assert_eq!(ell.len(), phi.torus.dim());
    let mut any_odd = false;
    let mut parities = Vec::new();
    for root in &phi.roots {
        let mut level = Scalar::zero();
        for (c, v) in ell.iter().zip(&root.values) {
            level = level.add(&c.mul(v));
        }
        let r = level
            .as_rational()
            .filter(|x| x.is_integer())
            .ok_or_else(|| {
                IsolabError::Precondition("linear form is not integral on the roots".into())
            })?;
        let odd = r.numer() % 2i32 != num_bigint::BigInt::from(0);
        any_odd |= odd;
        parities.push(odd);
    }
    if !any_odd {
        return Err(IsolabError::Precondition(
            "linear form is even on every restricted root".into(),
        ));
    }
    // assemble the map in the weight basis
    let dim = phi.alg.dim();
    let mut cols = Vec::new();
    let mut signs = Vec::new();
    for i in 0..phi.zero_space.dim() {
        cols.push(phi.zero_space.basis_row(i).to_vec());
        signs.push(false);
    }
    for (root, odd) in phi.roots.iter().zip(&parities) {
        for i in 0..root.space.dim() {
            cols.push(root.space.basis_row(i).to_vec());
            signs.push(*odd);
        }
    }
    let t = Mat::from_rows(cols).transpose();
    let tinv = t
        .inverse()
        .ok_or_else(|| IsolabError::Internal("weight basis is singular".into()))?;
    let d = Mat::from_fn(dim, dim, |r, c| {
        if r != c {
            Scalar::zero()
        } else if signs[r] {
            Scalar::from_int(-1)
        } else {
            Scalar::one()
        }
    });
    let map = t.matmul(&d).matmul(&tinv);
    automorphism_from_map(&phi.alg, map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{classify_element, killing_form, make_sl, make_so, OrthogonalConvention};
    use crate::sample::rng_for;

    fn diag(entries: &[Scalar]) -> Mat {
        let n = entries.len();
        Mat::from_fn(n, n, |r, c| {
            if r == c {
                entries[r].clone()
            } else {
                Scalar::zero()
            }
        })
    }

    fn diag_i(pattern: &[i64]) -> Mat {
        // entries +1 -> i, -1 -> -i
        let i = Scalar::i_unit().unwrap();
        diag(&pattern
            .iter()
            .map(|&p| if p > 0 { i.clone() } else { i.neg() })
            .collect::<Vec<_>>())
    }

    #[test]
    fn sl2_inner_involution_eigenspaces() {
        let g = make_sl(2).unwrap();
        let s = diag_i(&[1, -1]);
        let sigma = inner_involution(&g, &s).unwrap();
        assert!(sigma.is_involution() && !sigma.is_identity());
        assert!(sigma.is_inner());
        assert_eq!(sigma.eigenspace(0).dim(), 1);
        assert_eq!(sigma.eigenspace(1).dim(), 2);
    }

    #[test]
    fn rejects_non_scalar_square() {
        let g = make_sl(2).unwrap();
        let mut s = Mat::identity(2);
        s.set(0, 1, Scalar::one());
        assert!(inner_involution(&g, &s).is_err());
    }

    #[test]
    fn so8_gl4_fixed_points() {
        let g = make_so(8, OrthogonalConvention::Antidiagonal).unwrap();
        let s1 = diag_i(&[1, 1, 1, 1, -1, -1, -1, -1]);
        let sigma = inner_involution(&g, &s1).unwrap();
        assert!(sigma.is_inner());
        assert_eq!(sigma.eigenspace(0).dim(), 16);
        assert_eq!(sigma.eigenspace(1).dim(), 12);
    }

    #[test]
    fn killing_form_preserved_by_automorphisms() {
        let g = make_sl(3).unwrap();
        let sigma = outer_involution_sl(&g, None).unwrap();
        let mut rng = rng_for(7, "killing-preserved");
        for _ in 0..10 {
            let x = element_in(&mut rng, &g, &g.full_space(), 3);
            let y = element_in(&mut rng, &g, &g.full_space(), 3);
            let lhs = killing_form(&sigma.apply(&x), &sigma.apply(&y)).unwrap();
            let rhs = killing_form(&x, &y).unwrap();
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn quaternionic_rejects_bad_pairs() {
        let g = make_sl(2).unwrap();
        let s = diag_i(&[1, -1]);
        let sigma = inner_involution(&g, &s).unwrap();
        // equal involutions rejected
        assert!(quaternionic(&sigma, &sigma).is_err());
    }

    #[test]
    fn quaternionic_so8_example_dims() {
        let g = make_so(8, OrthogonalConvention::Antidiagonal).unwrap();
        // n = 3, m = 1 block pattern
        let s1 = diag_i(&[1, 1, 1, 1, -1, -1, -1, -1]);
        let s2 = diag_i(&[1, -1, -1, -1, 1, 1, 1, -1]);
        let sigma1 = inner_involution(&g, &s1).unwrap();
        let sigma2 = inner_involution(&g, &s2).unwrap();
        let q = quaternionic(&sigma1, &sigma2).unwrap();
        let d = q.dim_matrix();
        assert_eq!(d.iter().flatten().sum::<usize>(), 28);
        // sigma3 fixes so(2) x so(6), dimension 16
        assert_eq!(d[0][0] + d[1][1], 16);
        let cls = classify_involution(q.sigma(3), &mut rng_for(3, "so8-s3"));
        assert!(!cls.maximal_rank);
    }

    #[test]
    fn swap_on_double_sl2() {
        let a = make_sl(2).unwrap();
        let g = crate::lie::direct_sum(&a, &a).unwrap();
        let swap = swap_involution(&g).unwrap();
        assert!(swap.is_involution());
        // fixed points: the diagonal copy, dimension 3
        assert_eq!(swap.eigenspace(0).dim(), 3);
        assert_eq!(swap.eigenspace(1).dim(), 3);
    }

    #[test]
    fn maximal_rank_detection() {
        let mut rng = rng_for(11, "maxrank");
        let g = make_sl(2).unwrap();
        let sigma = inner_involution(&g, &diag_i(&[1, -1])).unwrap();
        let cls = classify_involution(&sigma, &mut rng);
        assert!(cls.maximal_rank);
        // sl(3) balanced inner involution: quasi-maximal but not max rank
        let g3 = make_sl(3).unwrap();
        let s = diag(&[Scalar::one(), Scalar::one(), Scalar::from_int(-1)]);
        let sigma3 = inner_involution(&g3, &s).unwrap();
        let cls3 = classify_involution(&sigma3, &mut rng);
        assert!(!cls3.maximal_rank);
        match cls3.quasi_maximal {
            QuasiMaximal::Certified {
                ref regular_semisimple,
                ..
            } => {
                assert!(classify_element(regular_semisimple).semisimple);
                assert!(is_regular(regular_semisimple));
                // quasi-maximal forces dim g0 - dim g1 = k0 - k1
                assert_eq!(
                    cls3.dim_fixed as i64 - cls3.dim_odd as i64,
                    g3.k0() as i64 - g3.k1() as i64
                );
            }
            ref other => panic!("expected certification, got {:?}", other),
        }
    }

    #[test]
    fn dyad_on_sl2() {
        let g = make_sl(2).unwrap();
        let sigma1 = inner_involution(&g, &diag_i(&[1, -1])).unwrap();
        // antidiagonal torus direction: e + f
        let mut m = Mat::zero(2, 2);
        m.set(0, 1, Scalar::one());
        m.set(1, 0, Scalar::one());
        let t = Element::from_matrix(&g, &m).unwrap();
        let dyad = build_dyad(&sigma1, &t).unwrap();
        assert_eq!(dyad.phi.order(), 4);
        assert!(dyad.sigma2.is_involution());
        // the full set of identities is re-checked here
        let s12 = sigma1.compose(&dyad.sigma2).unwrap();
        let phi2 = dyad.phi.compose(&dyad.phi).unwrap();
        assert!(s12.same_map(&phi2));
        let q = quaternionic(&sigma1, &dyad.sigma2).unwrap();
        assert_eq!(q.dim_matrix().iter().flatten().sum::<usize>(), 3);
    }

    #[test]
    fn dyad_rejects_non_anisotropic_direction() {
        let g = make_sl(2).unwrap();
        let sigma1 = inner_involution(&g, &diag_i(&[1, -1])).unwrap();
        // the torus itself is fixed, not inverted
        let h = Element::basis_element(&g, 2);
        assert!(build_dyad(&sigma1, &h).is_err());
    }

    #[test]
    fn canonical_pair_sl3() {
        let g = make_sl(3).unwrap();
        let mu = inner_involution(
            &g,
            &diag(&[Scalar::one(), Scalar::one(), Scalar::from_int(-1)]),
        )
        .unwrap();
        let pair = canonical_pair(&g, &mu).unwrap();
        let q = quaternionic(&pair.theta, &pair.theta_prime).unwrap();
        let d = q.dim_matrix();
        assert_eq!(d[1][1] - d[0][0], g.rank());
        assert_eq!(d[1][0], d[0][1]);
    }

    #[test]
    fn canonical_pair_rejects_identity() {
        let g = make_sl(2).unwrap();
        let mu = inner_involution(&g, &diag_i(&[1, 1])).unwrap();
        assert!(canonical_pair(&g, &mu).is_err());
    }

    #[test]
    fn canonical_pair_so8() {
        let g = make_so(8, OrthogonalConvention::Antidiagonal).unwrap();
        // m = n = 2 pattern for the product involution
        let one = Scalar::one();
        let neg = Scalar::from_int(-1);
        let mu = inner_involution(
            &g,
            &diag(&[
                neg.clone(),
                neg.clone(),
                one.clone(),
                one.clone(),
                one.clone(),
                one.clone(),
                neg.clone(),
                neg.clone(),
            ]),
        )
        .unwrap();
        let pair = canonical_pair(&g, &mu).unwrap();
        let prod = pair.theta.compose(&pair.theta_prime).unwrap();
        assert!(prod.same_map(&mu));
    }

    #[test]
    fn restricted_roots_of_sl3_diagonal_torus() {
        let g = make_sl(3).unwrap();
        // diagonal Cartan: basis H1, H2 (last two basis elements)
        let torus = Subspace::from_vecs(
            g.dim(),
            vec![
                Element::basis_element(&g, 6).coeffs().to_vec(),
                Element::basis_element(&g, 7).coeffs().to_vec(),
            ],
        );
        let phi = restricted_roots(&g, &torus).unwrap();
        // type A2: six roots, all multiplicity one, zero space = torus
        assert_eq!(phi.roots.len(), 6);
        assert!(phi.roots.iter().all(|r| r.space.dim() == 1));
        assert_eq!(phi.zero_space.dim(), 2);
        assert_eq!(phi.multiplicity_sum() + phi.zero_space.dim(), g.dim());

        // a parity involution from a linear form
        let ell = vec![Scalar::one(), Scalar::zero()];
        let sigma3 = sigma3_from_form(&phi, &ell).unwrap();
        assert!(sigma3.is_involution() && !sigma3.is_identity());
    }

    #[test]
    fn sigma3_rejects_even_form() {
        let g = make_sl(3).unwrap();
        let torus = Subspace::from_vecs(
            g.dim(),
            vec![
                Element::basis_element(&g, 6).coeffs().to_vec(),
                Element::basis_element(&g, 7).coeffs().to_vec(),
            ],
        );
        let phi = restricted_roots(&g, &torus).unwrap();
        let ell = vec![Scalar::from_int(2), Scalar::zero()];
        assert!(sigma3_from_form(&phi, &ell).is_err());
    }
}
