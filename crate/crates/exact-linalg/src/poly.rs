//! Univariate polynomials over the field: gcd-based squarefree testing,
//! Lagrange interpolation, and minimal polynomials of matrices.

use crate::{LinalgError, Mat, Scalar};

/// Coefficients low-to-high; the zero polynomial is the empty vector, any
/// other polynomial has a nonzero leading coefficient.
#[derive(Clone, PartialEq)]
pub struct UniPoly {
    c: Vec<Scalar>,
}

impl UniPoly {
    pub fn new(mut c: Vec<Scalar>) -> UniPoly {
        while c.last().map(Scalar::is_zero).unwrap_or(false) {
            c.pop();
        }
        UniPoly { c }
    }

    pub fn zero() -> UniPoly {
        UniPoly { c: vec![] }
    }

    pub fn constant(s: Scalar) -> UniPoly {
        UniPoly::new(vec![s])
    }

    pub fn monomial(deg: usize, s: Scalar) -> UniPoly {
        let mut c = vec![Scalar::zero(); deg + 1];
        c[deg] = s;
        UniPoly::new(c)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.c.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.c.is_empty() {
            None
        } else {
            Some(self.c.len() - 1)
        }
    }

    pub fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.c.iter().rev() {
            acc = acc.mul(x).add(c);
        }
        acc
    }

    /// Evaluate at a square matrix.
    pub fn eval_mat(&self, m: &Mat) -> Mat {
        let n = m.rows();
        let mut acc = Mat::zero(n, n);
        for c in self.c.iter().rev() {
            acc = m.matmul(&acc);
            for i in 0..n {
                let v = acc.get(i, i).add(c);
                acc.set(i, i, v);
            }
        }
        acc
    }

    pub fn add(&self, o: &UniPoly) -> UniPoly {
        let n = self.c.len().max(o.c.len());
        let mut c = vec![Scalar::zero(); n];
        for (i, x) in self.c.iter().enumerate() {
            c[i] = c[i].add(x);
        }
        for (i, x) in o.c.iter().enumerate() {
            c[i] = c[i].add(x);
        }
        UniPoly::new(c)
    }

    pub fn sub(&self, o: &UniPoly) -> UniPoly {
        self.add(&o.scale(&Scalar::from_int(-1)))
    }

    pub fn scale(&self, s: &Scalar) -> UniPoly {
        UniPoly::new(self.c.iter().map(|x| x.mul(s)).collect())
    }

    pub fn mul(&self, o: &UniPoly) -> UniPoly {
        if self.is_zero() || o.is_zero() {
            return UniPoly::zero();
        }
        let mut c = vec![Scalar::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] = c[i + j].add(&a.mul(b));
                }
            }
        }
        UniPoly::new(c)
    }

    pub fn derivative(&self) -> UniPoly {
        if self.c.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::new(
            self.c[1..]
                .iter()
                .enumerate()
                .map(|(i, x)| x.mul_int(i as i64 + 1))
                .collect(),
        )
    }

    pub fn divrem(&self, den: &UniPoly) -> (UniPoly, UniPoly) {
        assert!(!den.is_zero(), "division by zero polynomial");
        let dd = den.c.len() - 1;
        if self.c.len() <= dd {
            return (UniPoly::zero(), self.clone());
        }
        let lead_inv = den.c[dd].inv().expect("nonzero leading coefficient");
        let mut rem = self.c.clone();
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let f = rem[k + dd].mul(&lead_inv);
            if !f.is_zero() {
                for (j, dj) in den.c.iter().enumerate() {
                    rem[k + j] = rem[k + j].sub(&f.mul(dj));
                }
            }
            quot[k] = f;
        }
        (UniPoly::new(quot), UniPoly::new(rem))
    }

    pub fn monic(&self) -> UniPoly {
        match self.c.last() {
            None => UniPoly::zero(),
            Some(l) => self.scale(&l.inv().expect("leading coefficient nonzero")),
        }
    }

    pub fn gcd(&self, o: &UniPoly) -> UniPoly {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let (_, r) = a.divrem(&b);
            a = std::mem::replace(&mut b, r);
        }
        a.monic()
    }

    /// Squarefree iff gcd with the derivative is constant.
    pub fn is_squarefree(&self) -> bool {
        if self.is_zero() {
            return false;
        }
        if self.is_constant() {
            return true;
        }
        self.gcd(&self.derivative()).is_constant()
    }

    /// Multiplicity-weighted division by (x - r); None when r is not a root.
    pub fn deflate_root(&self, r: &Scalar) -> Option<UniPoly> {
        let lin = UniPoly::new(vec![r.neg(), Scalar::one()]);
        let (q, rem) = self.divrem(&lin);
        if rem.is_zero() {
            Some(q)
        } else {
            None
        }
    }
}

impl std::fmt::Debug for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.c.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})*t", c)?,
                _ => write!(f, "({})*t^{}", c, i)?,
            }
        }
        Ok(())
    }
}

/// Unique interpolating polynomial of degree < number of points.
pub fn interpolate(points: &[(Scalar, Scalar)]) -> Result<UniPoly, LinalgError> {
    for (i, (xi, _)) in points.iter().enumerate() {
        for (xj, _) in &points[..i] {
            if xi == xj {
                return Err(LinalgError::RepeatedAbscissa);
            }
        }
    }
    let mut acc = UniPoly::zero();
    for (i, (xi, yi)) in points.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut num = UniPoly::constant(Scalar::one());
        let mut den = Scalar::one();
        for (j, (xj, _)) in points.iter().enumerate() {
            if i == j {
                continue;
            }
            num = num.mul(&UniPoly::new(vec![xj.neg(), Scalar::one()]));
            den = den.mul(&xi.sub(xj));
        }
        acc = acc.add(&num.scale(&yi.div(&den).expect("distinct abscissae")));
    }
    Ok(acc)
}

/// Interpolation at the integer nodes 0, 1, ..., values.len()-1.
pub fn interpolate_at_integers(values: &[Scalar]) -> UniPoly {
    let pts: Vec<(Scalar, Scalar)> = values
        .iter()
        .enumerate()
        .map(|(i, v)| (Scalar::from_int(i as i64), v.clone()))
        .collect();
    interpolate(&pts).expect("integer nodes are distinct")
}

/// Monic minimal polynomial via Krylov iteration on flattened matrix powers.
pub fn minimal_polynomial(m: &Mat) -> UniPoly {
    assert_eq!(m.rows(), m.cols(), "minimal polynomial of square matrix");
    let n = m.rows();
    if n == 0 {
        return UniPoly::constant(Scalar::one());
    }
    let flat = |x: &Mat| -> Vec<Scalar> {
        let mut v = Vec::with_capacity(n * n);
        for r in 0..n {
            v.extend_from_slice(x.row(r));
        }
        v
    };
    let mut powers: Vec<Vec<Scalar>> = vec![flat(&Mat::identity(n))];
    let mut cur = Mat::identity(n);
    loop {
        cur = cur.matmul(m);
        let target = flat(&cur);
        // Solve for target as a combination of previous powers.
        let a = Mat::from_rows(powers.clone()).transpose();
        if let Some(sol) = a.solve(&target) {
            let mut coeffs: Vec<Scalar> = sol.iter().map(Scalar::neg).collect();
            coeffs.push(Scalar::one());
            return UniPoly::new(coeffs);
        }
        powers.push(target);
        assert!(
            powers.len() <= n + 1,
            "minimal polynomial degree exceeds matrix size"
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn minimal_polynomial_of_identity() {
        let p = minimal_polynomial(&Mat::identity(4));
        // t - 1
        assert_eq!(p.coeffs(), &[s(-1), s(1)]);
        assert!(p.is_squarefree());
    }

    #[test]
    fn minimal_polynomial_of_jordan_block() {
        let j = Mat::from_int_rows(&[&[0, 1], &[0, 0]]);
        let p = minimal_polynomial(&j);
        // t^2, not squarefree
        assert_eq!(p.coeffs(), &[s(0), s(0), s(1)]);
        assert!(!p.is_squarefree());
    }

    #[test]
    fn minimal_polynomial_of_diagonal() {
        let d = Mat::from_int_rows(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 2]]);
        let p = minimal_polynomial(&d);
        // (t-1)(t-2) = t^2 - 3t + 2
        assert_eq!(p.coeffs(), &[s(2), s(-3), s(1)]);
        assert!(p.is_squarefree());
        assert!(p.eval_mat(&d).is_zero());
    }

    #[test]
    fn annihilation_property() {
        let m = Mat::from_int_rows(&[&[1, 2, 0], &[0, 1, 3], &[0, 0, 2]]);
        let p = minimal_polynomial(&m);
        assert!(p.eval_mat(&m).is_zero());
    }

    #[test]
    fn interpolation_basics() {
        // constant through (0,1),(1,1)
        let p = interpolate(&[(s(0), s(1)), (s(1), s(1))]).unwrap();
        assert_eq!(p.coeffs(), &[s(1)]);
        // parabola through (0,0),(1,1),(2,4)
        let q = interpolate(&[(s(0), s(0)), (s(1), s(1)), (s(2), s(4))]).unwrap();
        assert_eq!(q.coeffs(), &[s(0), s(0), s(1)]);
        assert!(matches!(
            interpolate(&[(s(0), s(1)), (s(0), s(2))]),
            Err(LinalgError::RepeatedAbscissa)
        ));
    }

    #[test]
    fn deflate_roots() {
        // (t-1)(t-2)
        let p = UniPoly::new(vec![s(2), s(-3), s(1)]);
        let q = p.deflate_root(&s(1)).unwrap();
        assert_eq!(q.coeffs(), &[s(-2), s(1)]);
        assert!(p.deflate_root(&s(5)).is_none());
    }
}
