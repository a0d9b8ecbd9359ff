//! The catalog of named scenarios: split orthogonal pairs with block
//! parameters, double algebras with the factor swap, constructed conjugate
//! pairs, commuting maximal-rank pairs with prescribed product, and the
//! orthogonal degeneration family on so(n+1).

use std::collections::BTreeMap;

use crate::error::IsolabError;
use crate::scenario::report::Expected;
use crate::scenario::Scenario;

fn repeat_tokens(tok: &str, n: usize) -> String {
    vec![tok; n].join(",")
}

/// so(2N, antidiag) with N = n + m: two commuting conjugations with fixed
/// points gl(N), whose product fixes so(2n) x so(2m).
pub fn so2n(n: usize, m: usize) -> Result<Scenario, IsolabError> {
    if n == 0 || m == 0 || n + m < 2 {
        return Err(IsolabError::Precondition(
            "block sizes must be positive with n + m >= 2".into(),
        ));
    }
    let nn = n + m;
    if nn > 8 {
        return Err(IsolabError::ResourceGuard(format!(
            "so({}) exceeds the default size guard",
            2 * nn
        )));
    }
    let sigma1 = format!(
        "inner:diag({},{})",
        repeat_tokens("i", nn),
        repeat_tokens("-i", nn)
    );
    let sigma2 = format!(
        "inner:diag({},{},{},{})",
        repeat_tokens("i", m),
        repeat_tokens("-i", n),
        repeat_tokens("i", n),
        repeat_tokens("-i", m)
    );
    let mut css = BTreeMap::new();
    css.insert("c01".into(), n.min(m));
    css.insert("c10".into(), n.min(m));
    css.insert("c11".into(), n / 2 + m / 2);
    css.insert("c1*".into(), (n + m) / 2);
    css.insert("c*1".into(), (n + m) / 2);
    css.insert("c*,1-*".into(), 2 * n.min(m));
    let expected = Expected {
        provenance: Some(
            "closed-form Cartan dimensions for the split orthogonal pair with blocks (n, m)"
                .into(),
        ),
        css_dims: Some(css),
        all_coincidences: if n % 2 == 1 && m % 2 == 1 && n != m {
            Some(false)
        } else {
            None
        },
        ..Default::default()
    };
    Ok(Scenario {
        name: format!("so2n-{}-{}", n, m),
        algebra: format!("so({},antidiag)", 2 * nn),
        sigma1: Some(sigma1),
        sigma2: Some(sigma2),
        dyad_direction: None,
        canonical_mu: None,
        conjugator_12: None,
        conjugator_13: None,
        nilpotent_seed: None,
        expected: Some(expected),
    })
}

/// g + g with the factor swap and a lifted involution of the summand.
pub fn double(summand: &str, sigma: &str, expected: Option<Expected>) -> Scenario {
    Scenario {
        name: format!(
            "double-{}-{}",
            summand.replace(['(', ')', ','], ""),
            sigma.split(':').next().unwrap_or(sigma)
        ),
        algebra: format!("{}+{}", summand, summand),
        sigma1: Some("swap".into()),
        sigma2: Some(format!("both:{}", sigma)),
        dyad_direction: None,
        canonical_mu: None,
        conjugator_12: None,
        conjugator_13: None,
        nilpotent_seed: None,
        expected,
    }
}

/// Commuting maximal-rank pair with prescribed inner product.
pub fn canonical(algebra: &str, mu: &str, seed: Option<&str>, expected: Option<Expected>) -> Scenario {
    Scenario {
        name: format!("canonical-{}", algebra.replace(['(', ')', ','], "")),
        algebra: algebra.into(),
        sigma1: None,
        sigma2: None,
        dyad_direction: None,
        canonical_mu: Some(mu.into()),
        conjugator_12: None,
        conjugator_13: None,
        nilpotent_seed: seed.map(Into::into),
        expected,
    }
}

/// The so(n+1) degeneration family: diagonal sign involutions splitting off
/// p + 1 and p coordinates.
pub fn gh(n: usize, p: usize) -> Result<Scenario, IsolabError> {
    if p == 0 || p + 1 > n {
        return Err(IsolabError::Precondition("need 1 <= p <= n - 1".into()));
    }
    if n + 1 > 16 {
        return Err(IsolabError::ResourceGuard(format!(
            "so({}) exceeds the default size guard",
            n + 1
        )));
    }
    let sigma1 = format!(
        "inner:diag({},{})",
        repeat_tokens("1", p + 1),
        repeat_tokens("-1", n - p)
    );
    let sigma2 = format!(
        "inner:diag({},{})",
        repeat_tokens("1", p),
        repeat_tokens("-1", n - p + 1)
    );
    let q = n - p;
    let rank_big = (p + 1).min(q);
    let degrees: Vec<usize> = if p + 1 != q {
        (1..=rank_big).map(|j| 2 * j).collect()
    } else {
        let mut d: Vec<usize> = (1..=p).map(|j| 2 * j).collect();
        d.push(p + 1);
        d.sort_unstable();
        d
    };
    let mut css = BTreeMap::new();
    css.insert("c10".into(), 1);
    css.insert("c11".into(), p.min(q));
    css.insert("c1*".into(), rank_big);
    let mut coincidences = BTreeMap::new();
    coincidences.insert("c10->1*".into(), q == 1);
    coincidences.insert("c11->1*".into(), q <= p);
    let expected = Expected {
        provenance: Some(
            "orthogonal degeneration family: rank min(p+1, n-p), one-dimensional vector slice"
                .into(),
        ),
        css_dims: Some(css),
        coincidences: Some(coincidences),
        invariant_degrees: Some(degrees),
        trdeg: Some(rank_big),
        dim_g00: Some(p * (p.max(1) - 1) / 2 + q * (q.max(1) - 1) / 2),
        // the saturation slice is only a Cartan subspace in the coincidence
        // case; elsewhere the vanishing analysis reports not-applicable
        vanishing_count: if q == 1 { Some(0) } else { None },
        ..Default::default()
    };
    Ok(Scenario {
        name: format!("gh-{}-{}", n, p),
        algebra: format!("so({},standard)", n + 1),
        sigma1: Some(sigma1),
        sigma2: Some(sigma2),
        dyad_direction: None,
        canonical_mu: None,
        conjugator_12: None,
        conjugator_13: None,
        nilpotent_seed: None,
        expected: Some(expected),
    })
}

pub fn all() -> Vec<Scenario> {
    let mut v = Vec::new();

    // split orthogonal pairs
    v.push(so2n(3, 1).expect("valid"));
    v.push(so2n(3, 3).expect("valid"));
    v.push(so2n(2, 2).expect("valid"));
    v.push(so2n(2, 4).expect("valid"));
    v.push(so2n(1, 1).expect("valid"));

    // double algebras: no coincidences for an outer non-maximal-rank
    // involution of the summand
    let mut css = BTreeMap::new();
    css.insert("c01".into(), 1);
    css.insert("c10".into(), 2);
    css.insert("c11".into(), 1);
    css.insert("c1*".into(), 3);
    css.insert("c*1".into(), 2);
    css.insert("c*,1-*".into(), 3);
    v.push(double(
        "sl(4)",
        "symplectic",
        Some(Expected {
            provenance: Some(
                "double algebra, outer summand involution below maximal rank: strict inequalities everywhere"
                    .into(),
            ),
            css_dims: Some(css),
            all_coincidences: Some(false),
            ..Default::default()
        }),
    ));
    let mut css = BTreeMap::new();
    css.insert("c01".into(), 2);
    css.insert("c10".into(), 1);
    css.insert("c11".into(), 2);
    css.insert("c1*".into(), 2);
    css.insert("c*1".into(), 4);
    css.insert("c*,1-*".into(), 2);
    let mut coincidences = BTreeMap::new();
    coincidences.insert("c11->1*".into(), true);
    coincidences.insert("c01->*,1-*".into(), true);
    v.push(double(
        "sl(3)",
        "negtranspose",
        Some(Expected {
            provenance: Some("double algebra with a maximal-rank summand involution".into()),
            css_dims: Some(css),
            coincidences: Some(coincidences),
            ..Default::default()
        }),
    ));
    v.push(double("sl(2)", "inner:diag(i,-i)", None));

    // maximal-rank first involutions
    let maxrank_expect = || {
        let mut coincidences = BTreeMap::new();
        coincidences.insert("c11->*1".into(), true);
        coincidences.insert("c10->*,1-*".into(), true);
        Some(Expected {
            provenance: Some("coincidences forced by a maximal-rank first involution".into()),
            coincidences: Some(coincidences),
            ..Default::default()
        })
    };
    v.push(Scenario {
        name: "maxrank-sl3".into(),
        algebra: "sl(3)".into(),
        sigma1: Some("negtranspose".into()),
        sigma2: Some("inner:diag(1,1,-1)".into()),
        dyad_direction: None,
        canonical_mu: None,
        conjugator_12: None,
        conjugator_13: None,
        nilpotent_seed: None,
        expected: maxrank_expect(),
    });
    v.push(Scenario {
        name: "maxrank-sl4".into(),
        algebra: "sl(4)".into(),
        sigma1: Some("negtranspose".into()),
        sigma2: Some("inner:diag(1,1,-1,-1)".into()),
        dyad_direction: None,
        canonical_mu: None,
        conjugator_12: None,
        conjugator_13: None,
        nilpotent_seed: None,
        expected: maxrank_expect(),
    });
    v.push(Scenario {
        name: "maxrank-so8".into(),
        algebra: "so(8,antidiag)".into(),
        sigma1: Some("gram".into()),
        sigma2: Some("inner:diag(i,i,i,i,-i,-i,-i,-i)".into()),
        dyad_direction: None,
        canonical_mu: None,
        conjugator_12: None,
        conjugator_13: None,
        nilpotent_seed: None,
        expected: maxrank_expect(),
    });

    // constructed conjugate pairs (order-4 torus elements)
    let dyad_expect = || {
        let mut coincidences = BTreeMap::new();
        coincidences.insert("c11->1*".into(), true);
        coincidences.insert("c11->*1".into(), true);
        Some(Expected {
            provenance: Some("coincidences forced for a commuting conjugate pair".into()),
            coincidences: Some(coincidences),
            ..Default::default()
        })
    };
    v.push(Scenario {
        name: "dyad-sl2".into(),
        algebra: "sl(2)".into(),
        sigma1: Some("inner:diag(i,-i)".into()),
        sigma2: None,
        dyad_direction: Some("[[0,1],[1,0]]".into()),
        canonical_mu: None,
        conjugator_12: None,
        conjugator_13: None,
        nilpotent_seed: None,
        expected: dyad_expect(),
    });
    v.push(Scenario {
        name: "dyad-sl3".into(),
        algebra: "sl(3)".into(),
        sigma1: Some("inner:diag(1,1,-1)".into()),
        sigma2: None,
        dyad_direction: Some("[[0,0,2],[0,0,0],[2,0,0]]".into()),
        canonical_mu: None,
        conjugator_12: None,
        conjugator_13: None,
        nilpotent_seed: None,
        expected: dyad_expect(),
    });
    v.push(Scenario {
        name: "dyad-so8".into(),
        algebra: "so(8,antidiag)".into(),
        sigma1: Some("inner:diag(i,i,i,i,-i,-i,-i,-i)".into()),
        sigma2: None,
        dyad_direction: Some(
            "[[0,0,0,0,2,0,0,0],[0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,-2],[2,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0],[0,0,0,0,0,0,0,0],[0,0,0,-2,0,0,0,0]]"
                .into(),
        ),
        canonical_mu: None,
        conjugator_12: None,
        conjugator_13: None,
        nilpotent_seed: None,
        expected: dyad_expect(),
    });

    // commuting maximal-rank pairs with prescribed product
    v.push(canonical(
        "sl(3)",
        "inner:diag(1,1,-1)",
        Some("[[0,0,1],[0,0,i],[1,i,0]]"),
        Some(Expected {
            provenance: Some("quasi-maximal product: dimension pattern and odd-degree vanishing".into()),
            dim_g00: Some(1),
            dim_g11: Some(3),
            vanishing_count: Some(1),
            vanishing_degrees: Some(vec![3]),
            ..Default::default()
        }),
    ));
    v.push(canonical(
        "sl(4)",
        "inner:diag(1,1,-1,-1)",
        Some("[[0,0,1,i],[0,0,0,0],[1,0,0,0],[i,0,0,0]]"),
        Some(Expected {
            provenance: Some("quasi-maximal product: dimension pattern and odd-degree vanishing".into()),
            dim_g00: Some(2),
            dim_g11: Some(5),
            vanishing_count: Some(1),
            vanishing_degrees: Some(vec![3]),
            ..Default::default()
        }),
    ));
    v.push(canonical(
        "so(8,antidiag)",
        "inner:diag(-1,-1,1,1,1,1,-1,-1)",
        None,
        None,
    ));

    // a certified triad on sl(2)
    v.push(Scenario {
        name: "triad-sl2".into(),
        algebra: "sl(2)".into(),
        sigma1: Some("inner:diag(i,-i)".into()),
        sigma2: Some("inner:matrix([[0,1],[-1,0]])".into()),
        dyad_direction: None,
        canonical_mu: None,
        conjugator_12: Some("[[1,1],[i,-i]]".into()),
        conjugator_13: Some("[[1,1],[1,-1]]".into()),
        nilpotent_seed: None,
        expected: Some(Expected {
            provenance: Some("pairwise-conjugate commuting triple: every comparison coincides".into()),
            all_coincidences: Some(true),
            ..Default::default()
        }),
    });

    // orthogonal degeneration family
    v.push(gh(6, 2).expect("valid"));
    v.push(gh(3, 2).expect("valid"));
    v.push(gh(5, 2).expect("valid"));

    v.sort_by(|a, b| a.name.cmp(&b.name));
    v
}

pub fn get(name: &str) -> Option<Scenario> {
    all().into_iter().find(|s| s.name == name)
}

pub fn names() -> Vec<String> {
    all().into_iter().map(|s| s.name).collect()
}
