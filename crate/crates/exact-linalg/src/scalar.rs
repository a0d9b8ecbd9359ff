//! Elements of the cyclotomic field Q(zeta_m), represented as integer
//! polynomials in zeta_m over a common denominator, reduced modulo the m-th
//! cyclotomic polynomial.
//!
//! The order m is a process-wide configuration (default 8, which contains
//! i = zeta^2 and sqrt(2) = zeta + zeta^-1). It must be fixed before the
//! first scalar is created.

use std::fmt;
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::LinalgError;

/// Field configuration: the cyclotomic order, the minimal polynomial of
/// zeta_m, and reduction rows for zeta^(d+k) with d = deg(Phi_m).
pub struct FieldContext {
    order: u32,
    degree: usize,
    /// Monic minimal polynomial of zeta, integer coefficients, length degree+1.
    phi: Vec<BigInt>,
    /// red[k] = coefficients of zeta^(degree+k) reduced mod phi, k < degree-1.
    red: Vec<Vec<BigInt>>,
    /// zeta^j for j in 0..order, reduced; used by powers-of-zeta helpers.
    zeta_pow: Vec<Vec<BigInt>>,
}

static CTX: OnceLock<FieldContext> = OnceLock::new();

/// Fix the cyclotomic order m for the whole process. Fails if a different
/// order was already fixed (scalars from distinct fields cannot mix).
pub fn set_cyclotomic_order(m: u32) -> Result<(), LinalgError> {
    assert!(m >= 1, "cyclotomic order must be positive");
    let ctx = CTX.get_or_init(|| FieldContext::new(m));
    if ctx.order == m {
        Ok(())
    } else {
        Err(LinalgError::CyclotomicOrderFixed {
            fixed: ctx.order,
            requested: m,
        })
    }
}

/// The active cyclotomic order (initializing the default if unset).
pub fn cyclotomic_order() -> u32 {
    ctx().order
}

pub(crate) fn ctx() -> &'static FieldContext {
    CTX.get_or_init(|| FieldContext::new(8))
}

/// Exact division of integer polynomials (panics if not exact); both monic
/// uses only, so the leading-coefficient division is integral.
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    assert!(den[dd].is_one(), "divisor must be monic");
    if rem.len() < den.len() {
        assert!(rem.iter().all(Zero::is_zero));
        return vec![BigInt::zero()];
    }
    let mut quot = vec![BigInt::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = rem[k + dd].clone();
        if !c.is_zero() {
            for (j, dj) in den.iter().enumerate() {
                rem[k + j] -= &c * dj;
            }
        }
        quot[k] = c;
    }
    assert!(rem.iter().all(Zero::is_zero), "division not exact");
    quot
}

/// Phi_m by recursive removal: x^m - 1 = prod_{d | m} Phi_d.
fn cyclotomic_poly(m: u32) -> Vec<BigInt> {
    if m == 1 {
        return vec![-BigInt::one(), BigInt::one()];
    }
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    let mut result = num;
    for d in 1..m {
        if m % d == 0 {
            let phi_d = cyclotomic_poly(d);
            result = int_poly_div_exact(&result, &phi_d);
        }
    }
    result
}

impl FieldContext {
    fn new(m: u32) -> FieldContext {
        let phi = cyclotomic_poly(m);
        let degree = phi.len() - 1;
        // zeta^(degree+k) mod phi, built incrementally from zeta^degree.
        let mut red: Vec<Vec<BigInt>> = Vec::new();
        let mut cur: Vec<BigInt> = phi[..degree].iter().map(|c| -c).collect();
        for _ in 0..degree.saturating_sub(1) {
            red.push(cur.clone());
            // multiply by zeta
            let top = cur[degree - 1].clone();
            let mut next = vec![BigInt::zero(); degree];
            for i in (1..degree).rev() {
                next[i] = cur[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, c) in phi[..degree].iter().enumerate() {
                    next[i] -= &top * c;
                }
            }
            cur = next;
        }
        if red.is_empty() {
            red.push(cur);
        }
        let mut zeta_pow = Vec::with_capacity(m as usize);
        let mut z = vec![BigInt::zero(); degree];
        z[0] = BigInt::one();
        for _ in 0..m {
            zeta_pow.push(z.clone());
            // multiply by zeta mod phi
            let top = z[degree - 1].clone();
            let mut next = vec![BigInt::zero(); degree];
            for i in (1..degree).rev() {
                next[i] = z[i - 1].clone();
            }
            if !top.is_zero() {
                for (i, c) in phi[..degree].iter().enumerate() {
                    next[i] -= &top * c;
                }
            }
            z = next;
        }
        FieldContext {
            order: m,
            degree,
            phi,
            red,
            zeta_pow,
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }
}

/// An exact element of Q(zeta_m): integer numerator coefficients over a
/// positive common denominator, fully reduced, so equality of values is
/// equality of representations.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    num: Vec<BigInt>,
    den: BigInt,
}

impl Scalar {
    fn normalized(mut num: Vec<BigInt>, mut den: BigInt) -> Scalar {
        assert!(!den.is_zero(), "zero denominator");
        if den.is_negative() {
            den = -den;
            for c in num.iter_mut() {
                *c = -std::mem::take(c);
            }
        }
        if den.is_one() {
            return Scalar { num, den };
        }
        let mut g = den.clone();
        for c in &num {
            if g.is_one() {
                break;
            }
            g = g.gcd(c);
        }
        if !g.is_one() {
            den /= &g;
            for c in num.iter_mut() {
                *c /= &g;
            }
        }
        Scalar { num, den }
    }

    pub fn zero() -> Scalar {
        Scalar {
            num: vec![BigInt::zero(); ctx().degree],
            den: BigInt::one(),
        }
    }

    pub fn one() -> Scalar {
        Scalar::from_int(1)
    }

    pub fn from_int(n: i64) -> Scalar {
        let mut num = vec![BigInt::zero(); ctx().degree];
        num[0] = BigInt::from(n);
        Scalar {
            num,
            den: BigInt::one(),
        }
    }

    pub fn from_ratio(p: i64, q: i64) -> Scalar {
        assert!(q != 0);
        let mut num = vec![BigInt::zero(); ctx().degree];
        num[0] = BigInt::from(p);
        Scalar::normalized(num, BigInt::from(q))
    }

    pub fn from_big_ratio(r: &BigRational) -> Scalar {
        let mut num = vec![BigInt::zero(); ctx().degree];
        num[0] = r.numer().clone();
        Scalar::normalized(num, r.denom().clone())
    }

    /// zeta_m^k (k may be negative).
    pub fn zeta_pow(k: i64) -> Scalar {
        let c = ctx();
        let m = c.order as i64;
        let k = k.rem_euclid(m) as usize;
        Scalar {
            num: c.zeta_pow[k].clone(),
            den: BigInt::one(),
        }
    }

    /// The square root of -1, available whenever 4 divides m.
    pub fn i_unit() -> Result<Scalar, LinalgError> {
        let m = ctx().order;
        if m % 4 != 0 {
            return Err(LinalgError::MissingRootOfUnity { needed: 4, have: m });
        }
        Ok(Scalar::zeta_pow((m / 4) as i64))
    }

    pub fn is_zero(&self) -> bool {
        self.num.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one()
            && self.num[0].is_one()
            && self.num[1..].iter().all(Zero::is_zero)
    }

    /// Some(r) when the element lies in Q.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.num[1..].iter().all(Zero::is_zero) {
            Some(BigRational::new(self.num[0].clone(), self.den.clone()))
        } else {
            None
        }
    }

    pub fn add(&self, o: &Scalar) -> Scalar {
        if self.is_zero() {
            return o.clone();
        }
        if o.is_zero() {
            return self.clone();
        }
        let g = self.den.gcd(&o.den);
        let la = &o.den / &g;
        let lb = &self.den / &g;
        let num = self
            .num
            .iter()
            .zip(&o.num)
            .map(|(a, b)| a * &la + b * &lb)
            .collect();
        Scalar::normalized(num, &self.den * &la)
    }

    pub fn sub(&self, o: &Scalar) -> Scalar {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Scalar {
        Scalar {
            num: self.num.iter().map(|c| -c).collect(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Scalar) -> Scalar {
        if self.is_zero() || o.is_zero() {
            return Scalar::zero();
        }
        let c = ctx();
        let d = c.degree;
        let mut prod = vec![BigInt::zero(); 2 * d - 1];
        for (i, a) in self.num.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.num.iter().enumerate() {
                if !b.is_zero() {
                    prod[i + j] += a * b;
                }
            }
        }
        let mut num: Vec<BigInt> = prod[..d].to_vec();
        for k in 0..d.saturating_sub(1) {
            let hi = &prod[d + k];
            if !hi.is_zero() {
                for (i, r) in c.red[k].iter().enumerate() {
                    if !r.is_zero() {
                        num[i] += hi * r;
                    }
                }
            }
        }
        Scalar::normalized(num, &self.den * &o.den)
    }

    pub fn mul_int(&self, k: i64) -> Scalar {
        if k == 0 {
            return Scalar::zero();
        }
        let kk = BigInt::from(k);
        Scalar::normalized(self.num.iter().map(|c| c * &kk).collect(), self.den.clone())
    }

    pub fn div_int(&self, k: i64) -> Scalar {
        assert!(k != 0);
        Scalar::normalized(self.num.clone(), &self.den * BigInt::from(k))
    }

    /// Exact inverse; None for zero. Rational values invert directly,
    /// everything else goes through extended Euclid against Phi_m over Q.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        if self.num[1..].iter().all(Zero::is_zero) {
            let mut num = vec![BigInt::zero(); self.num.len()];
            num[0] = self.den.clone();
            return Some(Scalar::normalized(num, self.num[0].clone()));
        }
        let c = ctx();
        // Work with rational polynomial coefficients.
        let to_rat = |v: &[BigInt]| -> Vec<BigRational> {
            v.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        };
        let phi = to_rat(&c.phi);
        let mut a_nums: Vec<BigRational> = self
            .num
            .iter()
            .map(|x| BigRational::new(x.clone(), self.den.clone()))
            .collect();
        ratpoly_trim(&mut a_nums);
        // Extended gcd: s*a + t*phi = g (g constant since phi irreducible).
        let (g, s) = ratpoly_ext_gcd(&a_nums, &phi);
        debug_assert!(g.len() == 1 && !g[0].is_zero());
        let ginv = g[0].recip();
        let mut inv_coeffs = vec![BigRational::zero(); c.degree];
        for (i, si) in s.iter().enumerate() {
            if i < c.degree {
                inv_coeffs[i] = si * &ginv;
            }
        }
        // Common denominator.
        let mut den = BigInt::one();
        for r in &inv_coeffs {
            den = den.lcm(r.denom());
        }
        let num = inv_coeffs
            .iter()
            .map(|r| r.numer() * (&den / r.denom()))
            .collect();
        Some(Scalar::normalized(num, den))
    }

    pub fn div(&self, o: &Scalar) -> Option<Scalar> {
        o.inv().map(|i| self.mul(&i))
    }

    pub fn pow(&self, mut e: u32) -> Scalar {
        let mut base = self.clone();
        let mut acc = Scalar::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    /// A square root inside the field, when one exists of the form
    /// q * zeta^j with q rational. Covers all roots of unity present in the
    /// field and rational squares; returns None otherwise.
    pub fn sqrt(&self) -> Option<Scalar> {
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        let m = ctx().order as i64;
        for j in 0..m {
            let cand = self.mul(&Scalar::zeta_pow(-2 * j));
            if let Some(r) = cand.as_rational() {
                if r.is_negative() {
                    continue;
                }
                if let (Some(pn), Some(pd)) = (r.numer().sqrt_exact(), r.denom().sqrt_exact()) {
                    let q = Scalar::from_big_ratio(&BigRational::new(pn, pd));
                    let y = q.mul(&Scalar::zeta_pow(j));
                    debug_assert!(y.mul(&y) == *self);
                    return Some(y);
                }
            }
        }
        None
    }

    /// Least common multiple of coefficient denominators — the factor that
    /// clears this scalar to the ring of cyclotomic integers.
    pub fn denominator(&self) -> BigInt {
        self.den.clone()
    }
}

trait SqrtExact {
    fn sqrt_exact(&self) -> Option<BigInt>;
}

impl SqrtExact for BigInt {
    fn sqrt_exact(&self) -> Option<BigInt> {
        if self.is_negative() {
            return None;
        }
        let r = self.sqrt();
        if &r * &r == *self {
            Some(r)
        } else {
            None
        }
    }
}

fn ratpoly_trim(p: &mut Vec<BigRational>) {
    while p.len() > 1 && p.last().map(Zero::is_zero).unwrap_or(false) {
        p.pop();
    }
}

fn ratpoly_divrem(num: &[BigRational], den: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut rem = num.to_vec();
    ratpoly_trim(&mut rem);
    let dd = den.len() - 1;
    let lead = &den[dd];
    if rem.len() <= dd || (rem.len() == 1 && rem[0].is_zero()) {
        return (vec![BigRational::zero()], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - dd];
    for k in (0..quot.len()).rev() {
        let c = &rem[k + dd] / lead;
        if !c.is_zero() {
            for (j, dj) in den.iter().enumerate() {
                let t = &c * dj;
                rem[k + j] -= t;
            }
        }
        quot[k] = c;
    }
    ratpoly_trim(&mut rem);
    (quot, rem)
}

/// Returns (g, s) with s*a ≡ g (mod b) and g the gcd of a and b.
fn ratpoly_ext_gcd(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let mut r0 = a.to_vec();
    let mut r1 = b.to_vec();
    ratpoly_trim(&mut r0);
    ratpoly_trim(&mut r1);
    let mut s0 = vec![BigRational::one()];
    let mut s1 = vec![BigRational::zero()];
    while !(r1.len() == 1 && r1[0].is_zero()) {
        let (q, r) = ratpoly_divrem(&r0, &r1);
        let qs1 = ratpoly_mul(&q, &s1);
        let s2 = ratpoly_sub(&s0, &qs1);
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
    }
    (r0, s0)
}

fn ratpoly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            if !bj.is_zero() {
                out[i + j] += ai * bj;
            }
        }
    }
    ratpoly_trim(&mut out);
    out
}

fn ratpoly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let n = a.len().max(b.len());
    let mut out = vec![BigRational::zero(); n];
    for (i, ai) in a.iter().enumerate() {
        out[i] += ai;
    }
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    ratpoly_trim(&mut out);
    out
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.num.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, "-")?;
            } else {
                write!(f, "+")?;
            }
            let unit_coeff = abs.is_one() && i > 0;
            if !unit_coeff {
                write!(f, "{}", abs)?;
                if !self.den.is_one() {
                    write!(f, "/{}", self.den)?;
                }
            } else if !self.den.is_one() {
                write!(f, "1/{}", self.den)?;
            }
            match i {
                0 => {}
                1 => {
                    if !unit_coeff || !self.den.is_one() {
                        write!(f, "*")?;
                    }
                    write!(f, "z")?;
                }
                _ => {
                    if !unit_coeff || !self.den.is_one() {
                        write!(f, "*")?;
                    }
                    write!(f, "z^{}", i)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_field_has_degree_four() {
        assert_eq!(ctx().degree, 4);
        assert_eq!(cyclotomic_order(), 8);
    }

    #[test]
    fn zeta_has_order_eight() {
        let z = Scalar::zeta_pow(1);
        let mut p = Scalar::one();
        for k in 1..=8 {
            p = p.mul(&z);
            if k < 8 {
                assert!(!p.is_one(), "zeta^{} must not be 1", k);
            }
        }
        assert!(p.is_one());
    }

    #[test]
    fn i_squares_to_minus_one() {
        let i = Scalar::i_unit().unwrap();
        assert_eq!(i.mul(&i), Scalar::from_int(-1));
    }

    #[test]
    fn field_inverse_round_trip() {
        let x = Scalar::zeta_pow(3)
            .add(&Scalar::from_ratio(5, 7))
            .sub(&Scalar::zeta_pow(1).mul_int(2));
        let inv = x.inv().unwrap();
        assert!(x.mul(&inv).is_one());
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn sqrt_of_units() {
        let i = Scalar::i_unit().unwrap();
        for v in [
            Scalar::one(),
            Scalar::from_int(-1),
            i.clone(),
            i.neg(),
            Scalar::from_int(4),
            Scalar::from_ratio(9, 4),
            Scalar::zeta_pow(2).mul_int(25),
        ] {
            let s = v.sqrt().expect("square root must exist");
            assert_eq!(s.mul(&s), v);
        }
        assert!(Scalar::from_int(3).sqrt().is_none());
    }

    #[test]
    fn rational_detection() {
        assert!(Scalar::from_ratio(3, 4).as_rational().is_some());
        assert!(Scalar::zeta_pow(1).as_rational().is_none());
        // zeta^2 = i is not rational, but zeta^4 = -1 is.
        assert!(Scalar::zeta_pow(4).as_rational().is_some());
    }
}
