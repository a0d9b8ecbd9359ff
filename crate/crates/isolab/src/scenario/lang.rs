//! Parsers for the scenario mini-languages: algebra specs like "sl(4)",
//! "so(8,antidiag)", "sp(6)" or "sl(3)+sl(3)", involution specs like
//! "inner:diag(i,i,-i,-i)", "negtranspose", "symplectic", "swap",
//! "both:<spec>" and "compose:<a>,<b>", and matrix literals for torus
//! directions and nilpotent seeds.

use exact_linalg::{Mat, Scalar};

use crate::error::IsolabError;
use crate::invol::{
    automorphism_from_action, inner_involution, lift_to_sum, outer_involution_sl,
    swap_involution, Automorphism, GroupAction,
};
use crate::lie::{direct_sum, make_sl, make_so, make_sp, Alg, FormConvention, OrthogonalConvention};

pub fn parse_algebra(spec: &str) -> Result<Alg, IsolabError> {
    let spec = spec.trim();
    if let Some((a, b)) = split_top_level(spec, '+') {
        let left = parse_algebra(&a)?;
        let right = parse_algebra(&b)?;
        return direct_sum(&left, &right);
    }
    let (head, args) = split_call(spec)?;
    match head {
        "sl" => {
            let n = parse_usize(&args, spec)?;
            make_sl(n)
        }
        "sp" => {
            let n = parse_usize(&args, spec)?;
            make_sp(n)
        }
        "so" => {
            let parts: Vec<&str> = args.split(',').map(str::trim).collect();
            let n: usize = parts[0]
                .parse()
                .map_err(|_| IsolabError::Parse(format!("bad algebra spec {spec}")))?;
            let conv = match parts.get(1).copied() {
                None | Some("antidiag") => OrthogonalConvention::Antidiagonal,
                Some("standard") => OrthogonalConvention::Standard,
                Some(other) => {
                    return Err(IsolabError::Parse(format!(
                        "unknown orthogonal convention {other}"
                    )))
                }
            };
            make_so(n, conv)
        }
        _ => Err(IsolabError::Parse(format!("unknown algebra spec {spec}"))),
    }
}

fn parse_usize(args: &str, ctx: &str) -> Result<usize, IsolabError> {
    args.trim()
        .parse()
        .map_err(|_| IsolabError::Parse(format!("bad algebra spec {ctx}")))
}

fn split_call(spec: &str) -> Result<(&str, String), IsolabError> {
    let open = spec
        .find('(')
        .ok_or_else(|| IsolabError::Parse(format!("expected call syntax in {spec}")))?;
    if !spec.ends_with(')') {
        return Err(IsolabError::Parse(format!("unbalanced parentheses in {spec}")));
    }
    Ok((&spec[..open], spec[open + 1..spec.len() - 1].to_string()))
}

/// Split on the first top-level occurrence of a separator (not inside
/// parentheses or brackets).
fn split_top_level(s: &str, sep: char) -> Option<(String, String)> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                return Some((s[..i].to_string(), s[i + 1..].to_string()))
            }
            _ => {}
        }
    }
    None
}

/// Scalar literals: integers, "i", "-i", "2i", "z8^3" (powers of the
/// generator), and simple fractions "p/q".
pub fn parse_scalar(tok: &str) -> Result<Scalar, IsolabError> {
    let tok = tok.trim();
    let (neg, body) = match tok.strip_prefix('-') {
        Some(rest) => (true, rest.trim()),
        None => (false, tok),
    };
    let v = if body == "i" {
        Scalar::i_unit().map_err(IsolabError::Linalg)?
    } else if let Some(rest) = body.strip_suffix('i') {
        let q: i64 = rest
            .parse()
            .map_err(|_| IsolabError::Parse(format!("bad scalar literal {tok}")))?;
        Scalar::i_unit().map_err(IsolabError::Linalg)?.mul_int(q)
    } else if let Some(rest) = body.strip_prefix("z8^") {
        let p: i64 = rest
            .parse()
            .map_err(|_| IsolabError::Parse(format!("bad scalar literal {tok}")))?;
        let order = exact_linalg::cyclotomic_order();
        if order % 8 != 0 {
            return Err(IsolabError::NeedLargerField(
                "z8 literals need an 8th root of unity".into(),
            ));
        }
        Scalar::zeta_pow((order as i64 / 8) * p)
    } else if let Some((p, q)) = body.split_once('/') {
        let p: i64 = p
            .trim()
            .parse()
            .map_err(|_| IsolabError::Parse(format!("bad scalar literal {tok}")))?;
        let q: i64 = q
            .trim()
            .parse()
            .map_err(|_| IsolabError::Parse(format!("bad scalar literal {tok}")))?;
        Scalar::from_ratio(p, q)
    } else {
        let n: i64 = body
            .parse()
            .map_err(|_| IsolabError::Parse(format!("bad scalar literal {tok}")))?;
        Scalar::from_int(n)
    };
    Ok(if neg { v.neg() } else { v })
}

/// Matrix literal "[[a,b],[c,d]]".
pub fn parse_matrix(spec: &str) -> Result<Mat, IsolabError> {
    let spec = spec.trim();
    let inner = spec
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| IsolabError::Parse(format!("bad matrix literal {spec}")))?;
    let mut rows = Vec::new();
    let mut depth = 0i32;
    let mut start = 0usize;
    for (idx, c) in inner.char_indices() {
        match c {
            '[' => {
                if depth == 0 {
                    start = idx + 1;
                }
                depth += 1;
            }
            ']' => {
                depth -= 1;
                if depth == 0 {
                    let row: Result<Vec<Scalar>, _> = inner[start..idx]
                        .split(',')
                        .map(parse_scalar)
                        .collect();
                    rows.push(row?);
                }
            }
            _ => {}
        }
    }
    if rows.is_empty() {
        return Err(IsolabError::Parse(format!("empty matrix literal {spec}")));
    }
    let cols = rows[0].len();
    if rows.iter().any(|r| r.len() != cols) {
        return Err(IsolabError::Parse(format!("ragged matrix literal {spec}")));
    }
    Ok(Mat::from_rows(rows))
}

fn diag_from(entries: &str, n: usize) -> Result<Mat, IsolabError> {
    let vals: Result<Vec<Scalar>, _> = entries.split(',').map(parse_scalar).collect();
    let vals = vals?;
    if vals.len() != n {
        return Err(IsolabError::Parse(format!(
            "diagonal has {} entries, representation needs {}",
            vals.len(),
            n
        )));
    }
    Ok(Mat::from_fn(n, n, |r, c| {
        if r == c {
            vals[r].clone()
        } else {
            Scalar::zero()
        }
    }))
}

fn antidiag_from(entries: &str, n: usize) -> Result<Mat, IsolabError> {
    let vals: Result<Vec<Scalar>, _> = entries.split(',').map(parse_scalar).collect();
    let vals = vals?;
    if vals.len() != n {
        return Err(IsolabError::Parse(format!(
            "antidiagonal has {} entries, representation needs {}",
            vals.len(),
            n
        )));
    }
    Ok(Mat::from_fn(n, n, |r, c| {
        if r + c == n - 1 {
            vals[r].clone()
        } else {
            Scalar::zero()
        }
    }))
}

/// The antidiagonal skew form used by the "symplectic" involution token.
fn skew_gram(n: usize) -> Mat {
    Mat::from_fn(n, n, |r, c| {
        if r + c == n - 1 {
            if r < n / 2 {
                Scalar::one()
            } else {
                Scalar::from_int(-1)
            }
        } else {
            Scalar::zero()
        }
    })
}

pub fn parse_involution(alg: &Alg, spec: &str) -> Result<Automorphism, IsolabError> {
    let spec = spec.trim();
    if spec == "negtranspose" {
        return outer_involution_sl(alg, None);
    }
    if spec == "symplectic" {
        if alg.rep_dim() % 2 != 0 {
            return Err(IsolabError::Parse(
                "symplectic involution needs even representation size".into(),
            ));
        }
        let omega = skew_gram(alg.rep_dim());
        return outer_involution_sl(alg, Some(&omega));
    }
    if spec == "swap" {
        return swap_involution(alg);
    }
    if spec == "gram" {
        // conjugation by the defining Gram matrix (split maximal-rank case)
        let gram = match alg.form() {
            FormConvention::Orthogonal { gram } | FormConvention::Symplectic { gram } => {
                gram.clone()
            }
            FormConvention::None => {
                return Err(IsolabError::Parse(
                    "gram involution needs an orthogonal or symplectic algebra".into(),
                ))
            }
        };
        return inner_involution(alg, &gram);
    }
    if let Some(rest) = spec.strip_prefix("inner:") {
        let rest = rest.trim();
        let witness = if let Some(inner) = rest.strip_prefix("diag(") {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| IsolabError::Parse(format!("unbalanced spec {spec}")))?;
            diag_from(inner, alg.rep_dim())?
        } else if let Some(inner) = rest.strip_prefix("antidiag(") {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| IsolabError::Parse(format!("unbalanced spec {spec}")))?;
            antidiag_from(inner, alg.rep_dim())?
        } else if let Some(inner) = rest.strip_prefix("matrix(") {
            let inner = inner
                .strip_suffix(')')
                .ok_or_else(|| IsolabError::Parse(format!("unbalanced spec {spec}")))?;
            parse_matrix(inner)?
        } else {
            return Err(IsolabError::Parse(format!("unknown inner witness in {spec}")));
        };
        return inner_involution(alg, &witness);
    }
    if let Some(rest) = spec.strip_prefix("both:") {
        // sigma + sigma on a direct sum of two equal summands
        let n = alg.rep_dim();
        if n % 2 != 0 {
            return Err(IsolabError::Parse("both: needs a direct sum".into()));
        }
        // rebuild the summand from the label prefix
        let label = alg.label();
        let plus = label
            .find('+')
            .ok_or_else(|| IsolabError::Parse("both: needs a direct sum".into()))?;
        let summand = parse_algebra(&label[..plus])?;
        let sigma = parse_involution(&summand, rest)?;
        return lift_to_sum(alg, &sigma);
    }
    if let Some(rest) = spec.strip_prefix("compose:") {
        let (a, b) = split_top_level(rest, ',')
            .ok_or_else(|| IsolabError::Parse(format!("compose needs two parts in {spec}")))?;
        let fa = parse_involution(alg, &a)?;
        let fb = parse_involution(alg, &b)?;
        return fa.compose(&fb);
    }
    if let Some(rest) = spec.strip_prefix("conj:") {
        // plain conjugation action used for certified conjugators
        let w = parse_matrix(rest)?;
        return automorphism_from_action(alg, GroupAction::Conj(w));
    }
    Err(IsolabError::Parse(format!("unknown involution spec {spec}")))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn algebra_specs() {
        assert_eq!(parse_algebra("sl(3)").unwrap().dim(), 8);
        assert_eq!(parse_algebra("so(8,antidiag)").unwrap().dim(), 28);
        assert_eq!(parse_algebra("so(7,standard)").unwrap().dim(), 21);
        assert_eq!(parse_algebra("sp(4)").unwrap().dim(), 10);
        assert_eq!(parse_algebra("sl(2)+sl(2)").unwrap().dim(), 6);
        assert!(parse_algebra("su(3)").is_err());
    }

    #[test]
    fn involution_specs() {
        let g = parse_algebra("sl(4)").unwrap();
        let neg = parse_involution(&g, "negtranspose").unwrap();
        assert_eq!(neg.eigenspace(0).dim(), 6); // so(4)
        let symp = parse_involution(&g, "symplectic").unwrap();
        assert_eq!(symp.eigenspace(0).dim(), 10); // sp(4)
        let inner = parse_involution(&g, "inner:diag(1,1,-1,-1)").unwrap();
        assert_eq!(inner.eigenspace(0).dim(), 7);
        let comp = parse_involution(&g, "compose:negtranspose,inner:diag(1,1,-1,-1)").unwrap();
        assert!(comp.is_involution());
        let gg = parse_algebra("sl(2)+sl(2)").unwrap();
        let both = parse_involution(&gg, "both:inner:diag(i,-i)").unwrap();
        assert_eq!(both.eigenspace(0).dim(), 2);
        assert!(parse_involution(&g, "mystery").is_err());
    }

    #[test]
    fn scalar_literals() {
        assert_eq!(parse_scalar("3").unwrap(), Scalar::from_int(3));
        assert_eq!(parse_scalar("-2").unwrap(), Scalar::from_int(-2));
        assert_eq!(parse_scalar("i").unwrap(), Scalar::i_unit().unwrap());
        assert_eq!(parse_scalar("-i").unwrap(), Scalar::i_unit().unwrap().neg());
        assert_eq!(parse_scalar("1/2").unwrap(), Scalar::from_ratio(1, 2));
        assert_eq!(parse_scalar("z8^2").unwrap(), Scalar::i_unit().unwrap());
    }

    #[test]
    fn matrix_literals() {
        let m = parse_matrix("[[0,1],[1,0]]").unwrap();
        assert_eq!(m.get(0, 1), &Scalar::one());
        assert!(parse_matrix("[[0,1],[1]]").is_err());
    }
}
