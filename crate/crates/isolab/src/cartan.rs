//! Certified Cartan subspaces of graded pieces, the six-way coincidence
//! table of a commuting pair, and the equal-rank distribution check for
//! bracket maps.
//!
//! Genericity is never assumed: every random sample must pass an exact
//! certificate (commuting, semisimple, saturated), and the two coincidence
//! criteria (saturation and bracket-surjectivity at a certified witness) are
//! required to agree.

use std::collections::BTreeMap;

use exact_linalg::{Mat, Scalar, Subspace};
use serde::Serialize;

use crate::error::IsolabError;
use crate::invol::{BigIdx, LittleIdx, QuaternionicDecomposition};
use crate::lie::{bracket, centralizer, classify_element, Alg, Element};
use crate::sample::{element_in, SampleRng};

/// A maximal toral subspace of an ambient space, with its certificate: the
/// witness is semisimple with z_g(witness) meeting the ambient space exactly
/// in the subspace, the subspace is abelian with semisimple basis, and it is
/// saturated (z_g of the whole subspace meets the ambient space in itself).
#[derive(Clone)]
pub struct CartanSubspace {
    ambient: Subspace,
    basis: Subspace,
    witness: Element,
}

impl CartanSubspace {
    pub fn ambient(&self) -> &Subspace {
        &self.ambient
    }

    pub fn space(&self) -> &Subspace {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn witness(&self) -> &Element {
        &self.witness
    }
}

/// Deterministic part of the toral certificate: abelian, semisimple basis
/// (hence simultaneously diagonalizable), and saturated in the ambient space.
pub fn is_certified_toral(alg: &Alg, ambient: &Subspace, candidate: &Subspace) -> bool {
    for i in 0..candidate.dim() {
        let x = Element::new(alg, candidate.basis_row(i).to_vec());
        if !classify_element(&x).semisimple {
            return false;
        }
        for j in (i + 1)..candidate.dim() {
            let y = Element::new(alg, candidate.basis_row(j).to_vec());
            if !bracket(&x, &y).expect("same algebra").is_zero() {
                return false;
            }
        }
    }
    centralizer(alg, candidate, ambient) == *candidate
}

fn certify_toral(
    alg: &Alg,
    ambient: &Subspace,
    candidate: &Subspace,
    witness: &Element,
) -> bool {
    // witness semisimple, inside the candidate
    if !classify_element(witness).semisimple || !candidate.contains_vec(witness.coeffs()) {
        return false;
    }
    is_certified_toral(alg, ambient, candidate)
}

/// Find a certified Cartan subspace of the ambient space by sampling exact
/// integer points from a growing box: c := z_g(x) meet ambient, accepted only
/// when the full certificate holds.
pub fn find_css(
    alg: &Alg,
    ambient: &Subspace,
    rng: &mut SampleRng,
) -> Result<CartanSubspace, IsolabError> {
    if ambient.is_zero() {
        let witness = Element::zero(alg);
        return Ok(CartanSubspace {
            ambient: ambient.clone(),
            basis: ambient.clone(),
            witness,
        });
    }
    let attempts = 60;
    let mut best: Option<(usize, Subspace)> = None;
    for t in 0..attempts {
        let bound = 2 + (t / 10) as i64;
        let x = element_in(rng, alg, ambient, bound);
        if x.is_zero() {
            continue;
        }
        let cand = centralizer(alg, &Subspace::span_of(x.coeffs()), ambient);
        if certify_toral(alg, ambient, &cand, &x) {
            return Ok(CartanSubspace {
                ambient: ambient.clone(),
                basis: cand,
                witness: x,
            });
        }
        let d = cand.dim();
        if best.as_ref().map(|(bd, _)| d < *bd).unwrap_or(true) {
            best = Some((d, cand));
        }
    }
    Err(IsolabError::Inconclusive {
        what: "Cartan subspace search".into(),
        attempts,
        detail: format!(
            "best uncertified candidate has dimension {}",
            best.map(|(d, _)| d).unwrap_or(0)
        ),
    })
}

/// Accept an externally supplied toral subspace (for aligned tori); the same
/// certificate is enforced, with the witness sampled from the subspace.
pub fn certify_css(
    alg: &Alg,
    ambient: &Subspace,
    candidate: &Subspace,
    rng: &mut SampleRng,
) -> Result<CartanSubspace, IsolabError> {
    for t in 0..40 {
        let bound = 1 + (t / 8) as i64;
        let x = element_in(rng, alg, candidate, bound);
        if x.is_zero() {
            continue;
        }
        if centralizer(alg, &Subspace::span_of(x.coeffs()), ambient) == *candidate
            && certify_toral(alg, ambient, candidate, &x)
        {
            return Ok(CartanSubspace {
                ambient: ambient.clone(),
                basis: candidate.clone(),
                witness: x,
            });
        }
    }
    Err(IsolabError::Inconclusive {
        what: "toral certificate".into(),
        attempts: 40,
        detail: "supplied subspace did not certify".into(),
    })
}

/// An element of a certified Cartan subspace whose full centralizer equals
/// the centralizer of the whole subspace (so every centralizer slice it cuts
/// is the generic one). Elements of a toral subspace are automatically
/// semisimple.
pub fn fully_generic_witness(
    alg: &Alg,
    css: &CartanSubspace,
    rng: &mut SampleRng,
) -> Result<Element, IsolabError> {
    if css.dim() == 0 {
        return Ok(Element::zero(alg));
    }
    let full = alg.full_space();
    let target = centralizer(alg, css.space(), &full);
    let witness = css.witness();
    if centralizer(alg, &Subspace::span_of(witness.coeffs()), &full) == target {
        return Ok(witness.clone());
    }
    let attempts = 40;
    for t in 0..attempts {
        let bound = 2 + (t / 8) as i64;
        let x = element_in(rng, alg, css.space(), bound);
        if x.is_zero() {
            continue;
        }
        if centralizer(alg, &Subspace::span_of(x.coeffs()), &full) == target {
            return Ok(x);
        }
    }
    Err(IsolabError::Inconclusive {
        what: "fully generic Cartan-subspace element".into(),
        attempts,
        detail: "no sampled element had the full centralizer of the subspace".into(),
    })
}

/// dim [x, S] for the bracket map S -> g, v -> [v, x].
pub fn bracket_rank(alg: &Alg, x: &Element, s: &Subspace) -> usize {
    let rows: Vec<Vec<Scalar>> = (0..s.dim())
        .map(|i| {
            bracket(&Element::new(alg, s.basis_row(i).to_vec()), x)
                .expect("same algebra")
                .coeffs()
                .to_vec()
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    Mat::from_rows(rows).rank()
}

/// Is the little Cartan subspace of g_alpha also one for the enclosing big
/// grading on g_alpha + g_gamma? Decided by two independent methods that
/// must agree: saturation of the centralizer, and surjectivity of
/// [g_beta, witness] onto g_gamma.
pub fn coincidence(
    q: &QuaternionicDecomposition,
    css_alpha: &CartanSubspace,
    alpha: LittleIdx,
    gamma: LittleIdx,
    rng: &mut SampleRng,
) -> Result<bool, IsolabError> {
    assert_ne!(alpha, gamma);
    let alg = q.algebra();
    let beta = LittleIdx::third(alpha, gamma);
    let big = q
        .little(alpha)
        .sum(q.little(gamma))
        .expect("same ambient");
    // method 1: saturation
    let sat = centralizer(alg, css_alpha.space(), &big) == *css_alpha.space();
    // method 2: bracket surjectivity at a certified fully generic witness
    let witness = fully_generic_witness(alg, css_alpha, rng)?;
    let full = bracket_rank(alg, &witness, q.little(beta)) == q.little(gamma).dim();
    if sat != full {
        return Err(IsolabError::Internal(format!(
            "coincidence criteria disagree for {} -> {}+{} (saturation {}, witness {})",
            alpha.name(),
            alpha.name(),
            gamma.name(),
            sat,
            full
        )));
    }
    Ok(sat)
}

/// dim [g_beta, x] = dim [g_gamma, x] for x in g_alpha: returns the common
/// value, or an error if the two ranks differ.
pub fn verify_raspred(
    q: &QuaternionicDecomposition,
    x: &Element,
    alpha: LittleIdx,
) -> Result<usize, IsolabError> {
    if !q.little(alpha).contains_vec(x.coeffs()) {
        return Err(IsolabError::Precondition(format!(
            "element is not in g_{}",
            alpha.name()
        )));
    }
    let others: Vec<LittleIdx> = LittleIdx::ALL.iter().copied().filter(|i| *i != alpha).collect();
    let (beta, gamma) = (others[0], others[1]);
    let db = bracket_rank(q.algebra(), x, q.little(beta));
    let dg = bracket_rank(q.algebra(), x, q.little(gamma));
    if db != dg {
        return Err(IsolabError::Internal(format!(
            "distribution ranks differ at x in g_{}: dim[g_{},x] = {}, dim[g_{},x] = {}",
            alpha.name(),
            beta.name(),
            db,
            gamma.name(),
            dg
        )));
    }
    Ok(db)
}

/// One row of the coincidence table: little alpha embedded into the big
/// grading spanned with gamma.
#[derive(Clone, Serialize)]
pub struct CoincidenceEntry {
    pub alpha: String,
    pub gamma: String,
    pub big: String,
    pub little_dim: usize,
    pub big_dim: usize,
    pub coincide: bool,
}

/// Lemma checks for a degenerate decomposition with some little piece zero:
/// with m_ij = [g_ij, g_ij], the opposite little pieces bracket-annihilate
/// each other, their derived parts are Killing-orthogonal and disjoint, and
/// m + g on each side is an ideal.
#[derive(Clone, Serialize)]
pub struct DegenerateChecks {
    pub zero_piece: String,
    pub annihilation: bool,
    pub killing_orthogonal: bool,
    pub disjoint_ideals: bool,
}

#[derive(Serialize)]
pub struct CoincidenceTable {
    pub little_dims: BTreeMap<String, usize>,
    pub big_dims: BTreeMap<String, usize>,
    pub entries: Vec<CoincidenceEntry>,
    pub degenerate: Option<DegenerateChecks>,
}

pub struct RankData {
    pub table: CoincidenceTable,
    pub little_css: BTreeMap<LittleIdx, CartanSubspace>,
    pub big_css: BTreeMap<BigIdx, CartanSubspace>,
}

fn derived_space(alg: &Alg, s: &Subspace) -> Subspace {
    let mut rows = Vec::new();
    for i in 0..s.dim() {
        for j in (i + 1)..s.dim() {
            let z = bracket(
                &Element::new(alg, s.basis_row(i).to_vec()),
                &Element::new(alg, s.basis_row(j).to_vec()),
            )
            .expect("same algebra");
            if !z.is_zero() {
                rows.push(z.coeffs().to_vec());
            }
        }
    }
    Subspace::from_vecs(alg.dim(), rows)
}

fn brackets_vanish(alg: &Alg, a: &Subspace, b: &Subspace) -> bool {
    for i in 0..a.dim() {
        for j in 0..b.dim() {
            let z = bracket(
                &Element::new(alg, a.basis_row(i).to_vec()),
                &Element::new(alg, b.basis_row(j).to_vec()),
            )
            .expect("same algebra");
            if !z.is_zero() {
                return false;
            }
        }
    }
    true
}

fn killing_orthogonal(alg: &Alg, a: &Subspace, b: &Subspace) -> bool {
    let k = alg.killing_matrix();
    for i in 0..a.dim() {
        let ka = k.mul_vec(a.basis_row(i));
        for j in 0..b.dim() {
            let mut acc = Scalar::zero();
            for (x, y) in ka.iter().zip(b.basis_row(j)) {
                if !x.is_zero() && !y.is_zero() {
                    acc = acc.add(&x.mul(y));
                }
            }
            if !acc.is_zero() {
                return false;
            }
        }
    }
    true
}

fn is_ideal(alg: &Alg, s: &Subspace) -> bool {
    for i in 0..alg.dim() {
        for j in 0..s.dim() {
            let z = bracket(
                &Element::basis_element(alg, i),
                &Element::new(alg, s.basis_row(j).to_vec()),
            )
            .expect("same algebra");
            if !s.contains_vec(z.coeffs()) {
                return false;
            }
        }
    }
    true
}

fn degenerate_checks(
    q: &QuaternionicDecomposition,
    zero: LittleIdx,
) -> Result<DegenerateChecks, IsolabError> {
    let alg = q.algebra();
    let others: Vec<LittleIdx> = LittleIdx::ALL
        .iter()
        .copied()
        .filter(|i| *i != zero)
        .collect();
    let (a, b) = (q.little(others[0]), q.little(others[1]));
    let ma = derived_space(alg, a);
    let mb = derived_space(alg, b);
    let annihilation = brackets_vanish(alg, &ma, b) && brackets_vanish(alg, &mb, a);
    let killing_ok =
        killing_orthogonal(alg, &ma, &mb) && ma.intersect(&mb)?.is_zero();
    let ia = ma.sum(a)?;
    let ib = mb.sum(b)?;
    let disjoint = ia.intersect(&ib)?.is_zero() && is_ideal(alg, &ia) && is_ideal(alg, &ib);
    Ok(DegenerateChecks {
        zero_piece: zero.name().into(),
        annihilation,
        killing_orthogonal: killing_ok,
        disjoint_ideals: disjoint,
    })
}

/// All six little-into-big comparisons, with the three big Cartan subspaces
/// and the degenerate-lemma checks when a little piece vanishes.
pub fn rank_table(
    q: &QuaternionicDecomposition,
    rng: &mut SampleRng,
) -> Result<RankData, IsolabError> {
    let alg = q.algebra();
    let mut little_css = BTreeMap::new();
    let mut little_dims = BTreeMap::new();
    let mut degenerate = None;
    for idx in LittleIdx::ALL {
        let css = find_css(alg, q.little(idx), rng)?;
        little_dims.insert(format!("c{}", idx.name()), css.dim());
        little_css.insert(idx, css);
        if q.little(idx).is_zero() && degenerate.is_none() {
            degenerate = Some(degenerate_checks(q, idx)?);
        }
    }
    let mut big_css = BTreeMap::new();
    let mut big_dims = BTreeMap::new();
    for idx in BigIdx::ALL {
        let css = find_css(alg, &q.big(idx), rng)?;
        big_dims.insert(format!("c{}", idx.name()), css.dim());
        big_css.insert(idx, css);
    }
    let mut entries = Vec::new();
    for alpha in LittleIdx::ALL {
        for big in alpha.enclosing_bigs() {
            let gamma = big
                .littles()
                .iter()
                .copied()
                .find(|l| *l != alpha)
                .expect("two littles per big");
            let little_dim = little_css[&alpha].dim();
            let big_dim = big_css[&big].dim();
            if little_dim > big_dim {
                return Err(IsolabError::Internal(format!(
                    "little Cartan subspace c{} exceeds its enclosing big one c{}",
                    alpha.name(),
                    big.name()
                )));
            }
            let coincide = coincidence(q, &little_css[&alpha], alpha, gamma, rng)?;
            if coincide && little_dim != big_dim {
                return Err(IsolabError::Internal(
                    "coincidence certified but dimensions differ".into(),
                ));
            }
            entries.push(CoincidenceEntry {
                alpha: alpha.name().into(),
                gamma: gamma.name().into(),
                big: big.name().into(),
                little_dim,
                big_dim,
                coincide,
            });
        }
    }
    Ok(RankData {
        table: CoincidenceTable {
            little_dims,
            big_dims,
            entries,
            degenerate,
        },
        little_css,
        big_css,
    })
}

impl CoincidenceTable {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable")
    }

    /// Markdown table mirroring the 2x2 layout plus the diagonal summary.
    pub fn to_markdown(&self, dims: [[usize; 2]; 2]) -> String {
        let mut s = String::new();
        s.push_str("| | sigma2 = +1 | sigma2 = -1 |\n|---|---|---|\n");
        s.push_str(&format!(
            "| sigma1 = +1 | dim g00 = {} | dim g01 = {} |\n",
            dims[0][0], dims[0][1]
        ));
        s.push_str(&format!(
            "| sigma1 = -1 | dim g10 = {} | dim g11 = {} |\n",
            dims[1][0], dims[1][1]
        ));
        s.push_str("\nCartan subspace dimensions:\n\n");
        for (k, v) in &self.little_dims {
            s.push_str(&format!("- dim {} = {}\n", k, v));
        }
        for (k, v) in &self.big_dims {
            s.push_str(&format!("- dim {} = {}\n", k, v));
        }
        s.push_str("\nCoincidences:\n\n");
        for e in &self.entries {
            s.push_str(&format!(
                "- c{} in g{}+g{} (big {}): {} ({} vs {})\n",
                e.alpha, e.alpha, e.gamma, e.big, e.coincide, e.little_dim, e.big_dim
            ));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invol::{inner_involution, quaternionic};
    use crate::lie::{make_sl, make_so, OrthogonalConvention};
    use crate::sample::rng_for;
    use exact_linalg::Scalar;

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
    fn sl2_css_is_one_dimensional() {
        let g = make_sl(2).unwrap();
        let sigma = inner_involution(&g, &diag_i(&[1, -1])).unwrap();
        let g1 = sigma.eigenspace(1);
        let mut rng = rng_for(5, "sl2-css");
        let css = find_css(&g, &g1, &mut rng).unwrap();
        assert_eq!(css.dim(), 1);
        assert!(classify_element(css.witness()).semisimple);
    }

    #[test]
    fn so8_31_css_dims_and_no_coincidence() {
        let g = make_so(8, OrthogonalConvention::Antidiagonal).unwrap();
        let s1 = diag_i(&[1, 1, 1, 1, -1, -1, -1, -1]);
        let s2 = diag_i(&[1, -1, -1, -1, 1, 1, 1, -1]);
        let q = quaternionic(
            &inner_involution(&g, &s1).unwrap(),
            &inner_involution(&g, &s2).unwrap(),
        )
        .unwrap();
        let mut rng = rng_for(17, "so8-31");
        let data = rank_table(&q, &mut rng).unwrap();
        let t = &data.table;
        // min(n, m) = 1, [n/2] + [m/2] = 1, [(n+m)/2] = 2, 2 min(n, m) = 2
        assert_eq!(t.little_dims["c01"], 1);
        assert_eq!(t.little_dims["c10"], 1);
        assert_eq!(t.little_dims["c11"], 1);
        assert_eq!(t.big_dims["c1*"], 2);
        assert_eq!(t.big_dims["c*1"], 2);
        assert_eq!(t.big_dims["c*,1-*"], 2);
        assert!(t.entries.iter().all(|e| !e.coincide));
    }

    #[test]
    fn raspred_holds_at_random_points() {
        let g = make_so(8, OrthogonalConvention::Antidiagonal).unwrap();
        let s1 = diag_i(&[1, 1, 1, 1, -1, -1, -1, -1]);
        let s2 = diag_i(&[1, -1, -1, -1, 1, 1, 1, -1]);
        let q = quaternionic(
            &inner_involution(&g, &s1).unwrap(),
            &inner_involution(&g, &s2).unwrap(),
        )
        .unwrap();
        let mut rng = rng_for(23, "raspred");
        // zero element: both ranks vanish
        assert_eq!(
            verify_raspred(&q, &Element::zero(&g), LittleIdx::I10).unwrap(),
            0
        );
        for _ in 0..50 {
            let x = element_in(&mut rng, &g, q.little(LittleIdx::I10), 3);
            verify_raspred(&q, &x, LittleIdx::I10).unwrap();
        }
        // element outside the graded piece is rejected
        let outside = Element::basis_element(&g, 0);
        if !q.little(LittleIdx::I10).contains_vec(outside.coeffs()) {
            assert!(verify_raspred(&q, &outside, LittleIdx::I10).is_err());
        }
    }

    #[test]
    fn triad_on_sl2_all_coincidences() {
        let g = make_sl(2).unwrap();
        let s1 = diag_i(&[1, -1]);
        let mut w = Mat::zero(2, 2);
        w.set(0, 1, Scalar::one());
        w.set(1, 0, Scalar::from_int(-1));
        let sigma1 = inner_involution(&g, &s1).unwrap();
        let sigma2 = inner_involution(&g, &w).unwrap();
        let q = quaternionic(&sigma1, &sigma2).unwrap();
        assert_eq!(q.dim_matrix(), [[0, 1], [1, 1]]);
        let mut rng = rng_for(29, "triad-sl2");
        let data = rank_table(&q, &mut rng).unwrap();
        assert!(data.table.entries.iter().all(|e| e.coincide));
    }

    #[test]
    fn css_repeatable_dimension() {
        let g = make_sl(3).unwrap();
        let sigma = crate::invol::outer_involution_sl(&g, None).unwrap();
        let g1 = sigma.eigenspace(1);
        let mut dims = Vec::new();
        for k in 0..5 {
            let mut rng = rng_for(100 + k, "css-repeat");
            dims.push(find_css(&g, &g1, &mut rng).unwrap().dim());
        }
        assert!(dims.iter().all(|d| *d == dims[0]));
        // minus-transpose on sl(3) has maximal rank: the Cartan subspace is a
        // full Cartan subalgebra
        assert_eq!(dims[0], g.rank());
    }
}
