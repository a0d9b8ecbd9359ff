//! Dense matrices over the cyclotomic field, with fraction-free (Bareiss)
//! elimination as the workhorse for rank, determinant, echelon forms and
//! nullspaces. Row contents are cleared of denominators before elimination so
//! all intermediate entries stay in the ring generated by the inputs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;

use crate::ring::RingElem;
use crate::{LinalgError, Scalar};

#[derive(Clone, PartialEq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    a: Vec<Scalar>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Mat {
        Mat {
            rows,
            cols,
            a: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Mat {
        let mut m = Mat::zero(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Mat {
        let mut a = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                a.push(f(r, c));
            }
        }
        Mat { rows, cols, a }
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Mat {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        Mat {
            rows: r,
            cols: c,
            a: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_int_rows(rows: &[&[i64]]) -> Mat {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &Scalar {
        &self.a[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Scalar) {
        self.a[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[Scalar] {
        &self.a[r * self.cols..(r + 1) * self.cols]
    }

    pub fn row_vec(&self, r: usize) -> Vec<Scalar> {
        self.row(r).to_vec()
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Mat::identity(self.rows)
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    pub fn add(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().zip(&o.a).map(|(x, y)| x.add(y)).collect(),
        }
    }

    pub fn sub(&self, o: &Mat) -> Mat {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().zip(&o.a).map(|(x, y)| x.sub(y)).collect(),
        }
    }

    pub fn neg(&self) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().map(Scalar::neg).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Mat {
        Mat {
            rows: self.rows,
            cols: self.cols,
            a: self.a.iter().map(|x| x.mul(s)).collect(),
        }
    }

    pub fn matmul(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.rows, "inner dimension mismatch");
        let mut out = Mat::zero(self.rows, o.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let x = self.get(r, k);
                if x.is_zero() {
                    continue;
                }
                for c in 0..o.cols {
                    let y = o.get(k, c);
                    if !y.is_zero() {
                        let cur = out.get(r, c).add(&x.mul(y));
                        out.set(r, c, cur);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(self.cols, v.len());
        let mut out = vec![Scalar::zero(); self.rows];
        for r in 0..self.rows {
            for c in 0..self.cols {
                let x = self.get(r, c);
                if !x.is_zero() && !v[c].is_zero() {
                    out[r] = out[r].add(&x.mul(&v[c]));
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut t = Scalar::zero();
        for i in 0..self.rows {
            t = t.add(self.get(i, i));
        }
        t
    }

    pub fn pow(&self, e: usize) -> Mat {
        assert_eq!(self.rows, self.cols);
        let mut acc = Mat::identity(self.rows);
        for _ in 0..e {
            acc = acc.matmul(self);
        }
        acc
    }

    pub fn vstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.cols, o.cols);
        let mut a = self.a.clone();
        a.extend_from_slice(&o.a);
        Mat {
            rows: self.rows + o.rows,
            cols: self.cols,
            a,
        }
    }

    pub fn hstack(&self, o: &Mat) -> Mat {
        assert_eq!(self.rows, o.rows);
        Mat::from_fn(self.rows, self.cols + o.cols, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                o.get(r, c - self.cols).clone()
            }
        })
    }

    /// Scale every row by the lcm of its entry denominators, so elimination
    /// runs over cyclotomic integers. Row scaling preserves row space, rank
    /// and nullspace.
    fn cleared(&self) -> Mat {
        let mut out = self.clone();
        for r in 0..out.rows {
            let mut l = BigInt::one();
            for c in 0..out.cols {
                l = l.lcm(&out.get(r, c).denominator());
            }
            if !l.is_one() {
                let s = Scalar::from_big_ratio(&num_rational::BigRational::from_integer(l));
                for c in 0..out.cols {
                    let v = out.get(r, c).mul(&s);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    /// Fraction-free forward elimination (Bareiss). Returns the echelon
    /// matrix, the pivot columns, and the permutation sign.
    fn bareiss(&self) -> (Mat, Vec<(usize, usize)>, i8) {
        let mut w = self.cleared();
        let (n, m) = (w.rows, w.cols);
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut sign = 1i8;
        let mut prev = Scalar::one();
        let mut r = 0usize;
        for c in 0..m {
            if r == n {
                break;
            }
            // pivot search
            let mut pr = None;
            for i in r..n {
                if !w.get(i, c).is_zero() {
                    pr = Some(i);
                    break;
                }
            }
            let Some(pr) = pr else { continue };
            if pr != r {
                for j in 0..m {
                    let tmp = w.get(pr, j).clone();
                    w.set(pr, j, w.get(r, j).clone());
                    w.set(r, j, tmp);
                }
                sign = -sign;
            }
            let piv = w.get(r, c).clone();
            let prev_inv = prev.inv().expect("previous pivot nonzero");
            for i in (r + 1)..n {
                let top = w.get(i, c).clone();
                if top.is_zero() {
                    // still need the pivot scaling to keep the fraction-free
                    // invariant
                    for j in 0..m {
                        if !w.get(i, j).is_zero() {
                            let q = piv.mul(w.get(i, j)).mul(&prev_inv);
                            w.set(i, j, q);
                        }
                    }
                    continue;
                }
                for j in 0..m {
                    // (piv*a[i][j] - top*a[r][j]) / prev is exact by the
                    // Sylvester identity.
                    let num = piv.mul(w.get(i, j)).sub(&top.mul(w.get(r, j)));
                    let q = num.mul(&prev_inv);
                    w.set(i, j, q);
                }
            }
            pivots.push((r, c));
            prev = piv;
            r += 1;
        }
        (w, pivots, sign)
    }

    pub fn rank(&self) -> usize {
        self.bareiss().1.len()
    }

    pub fn det(&self) -> Scalar {
        assert_eq!(self.rows, self.cols, "determinant of non-square matrix");
        if self.rows == 0 {
            return Scalar::one();
        }
        // Track the row scalings applied by cleared().
        let mut scaling = Scalar::one();
        for r in 0..self.rows {
            let mut l = BigInt::one();
            for c in 0..self.cols {
                l = l.lcm(&self.get(r, c).denominator());
            }
            scaling = scaling.mul(&Scalar::from_big_ratio(
                &num_rational::BigRational::from_integer(l),
            ));
        }
        let (w, pivots, sign) = self.bareiss();
        if pivots.len() < self.rows {
            return Scalar::zero();
        }
        // For full-rank Bareiss, the last pivot is the determinant of the
        // cleared matrix.
        let (r, c) = pivots[pivots.len() - 1];
        let mut d = w.get(r, c).clone();
        if sign < 0 {
            d = d.neg();
        }
        d.div(&scaling).expect("nonzero scaling")
    }

    /// Reduced row echelon form and pivot columns. Unique per row space, so
    /// it doubles as a canonical representative for subspaces.
    pub fn rref(&self) -> (Mat, Vec<usize>) {
        let (mut w, pivots, _) = self.bareiss();
        let pivot_cols: Vec<usize> = pivots.iter().map(|&(_, c)| c).collect();
        // Back-substitute and normalize with field division.
        for k in (0..pivots.len()).rev() {
            let (r, c) = pivots[k];
            let inv = w.get(r, c).inv().expect("pivot nonzero");
            for j in 0..w.cols {
                let v = w.get(r, j).mul(&inv);
                w.set(r, j, v);
            }
            for i in 0..r {
                let f = w.get(i, c).clone();
                if !f.is_zero() {
                    for j in 0..w.cols {
                        let v = w.get(i, j).sub(&f.mul(w.get(r, j)));
                        w.set(i, j, v);
                    }
                }
            }
        }
        (w, pivot_cols)
    }

    /// Basis (as rows, in reduced echelon form) for {x : self * x = 0}.
    pub fn nullspace(&self) -> Mat {
        let (r, pivot_cols) = self.rref();
        let n = self.cols;
        let free: Vec<usize> = (0..n).filter(|c| !pivot_cols.contains(c)).collect();
        let mut rows = Vec::with_capacity(free.len());
        for &fc in &free {
            let mut v = vec![Scalar::zero(); n];
            v[fc] = Scalar::one();
            for (i, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = r.get(i, fc).neg();
            }
            rows.push(v);
        }
        if rows.is_empty() {
            return Mat::zero(0, n);
        }
        let (canon, _) = Mat::from_rows(rows).rref();
        canon
    }

    /// One solution of self * x = b, if consistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(self.rows, b.len());
        let aug = self.hstack(&Mat::from_rows(b.iter().map(|x| vec![x.clone()]).collect()));
        let (r, pivot_cols) = aug.rref();
        if pivot_cols.contains(&self.cols) {
            return None; // pivot in the augmented column
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (i, &pc) in pivot_cols.iter().enumerate() {
            x[pc] = r.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Mat> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let aug = self.hstack(&Mat::identity(n));
        let (r, pivot_cols) = aug.rref();
        if pivot_cols.len() < n || pivot_cols[..n] != (0..n).collect::<Vec<_>>()[..] {
            return None;
        }
        Some(Mat::from_fn(n, n, |i, j| r.get(i, n + j).clone()))
    }

    pub fn to_ring<R: RingElem>(&self) -> Vec<Vec<R>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(R::from_scalar).collect())
            .collect()
    }
}

impl std::fmt::Debug for Mat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Mat {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            write!(f, "  [")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f, "]")?;
        }
        write!(f, "]")
    }
}

/// Coefficients c_1..c_n of det(tI - A) = t^n + c_1 t^(n-1) + ... + c_n,
/// by the Faddeev-LeVerrier recurrence (division only by integers, so it
/// works over dual numbers too).
pub fn charpoly_coeffs<R: RingElem>(a: &[Vec<R>]) -> Vec<R> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n));
    let mut coeffs = Vec::with_capacity(n);
    // m = A, c1 = -tr(A); m_{k+1} = A (m_k + c_k I)
    let mut m = a.to_vec();
    for k in 1..=n {
        let mut tr = R::zero();
        for i in 0..n {
            tr = tr.add(&m[i][i]);
        }
        let c = tr.div_int(k as i64).neg();
        coeffs.push(c.clone());
        if k == n {
            break;
        }
        // m <- A * (m + c I)
        for i in 0..n {
            m[i][i] = m[i][i].add(&c);
        }
        let mut next = vec![vec![R::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                if a[i][l].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !m[l][j].is_zero() {
                        next[i][j] = next[i][j].add(&a[i][l].mul(&m[l][j]));
                    }
                }
            }
        }
        m = next;
    }
    coeffs
}

/// Pfaffian of a skew-symmetric matrix by elimination; requires invertible
/// pivots along the way (always satisfiable over a field unless pf = 0;
/// over dual numbers a bad pivot reports as an error).
pub fn pfaffian<R: RingElem>(a: &[Vec<R>]) -> Result<R, LinalgError> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n));
    if n % 2 != 0 {
        return Err(LinalgError::PfaffianOddDimension(n));
    }
    let mut w = a.to_vec();
    let mut result = R::one();
    let mut k = 0usize;
    while k < n {
        // pivot in column k below the diagonal
        let mut piv = None;
        for j in (k + 1)..n {
            if !w[k][j].is_zero() {
                piv = Some(j);
                break;
            }
        }
        let Some(j) = piv else {
            return Ok(R::zero());
        };
        if j != k + 1 {
            w.swap(j, k + 1);
            for row in w.iter_mut() {
                row.swap(j, k + 1);
            }
            result = result.neg();
        }
        let p = w[k][k + 1].clone();
        let pinv = p.try_inv().ok_or(LinalgError::SingularPivot)?;
        result = result.mul(&p);
        for j in (k + 2)..n {
            // zero w[k][j] using row/col k+1, then w[k+1][j] using row/col k;
            // symmetric updates keep the matrix skew and the pfaffian fixed.
            let f1 = w[k][j].mul(&pinv);
            if !f1.is_zero() {
                for t in 0..n {
                    let d = w[k + 1][t].mul(&f1);
                    w[j][t] = w[j][t].sub(&d);
                }
                for t in 0..n {
                    let d = w[t][k + 1].mul(&f1);
                    w[t][j] = w[t][j].sub(&d);
                }
            }
            let f2 = w[k + 1][j].mul(&pinv);
            if !f2.is_zero() {
                for t in 0..n {
                    let d = w[k][t].mul(&f2);
                    w[j][t] = w[j][t].add(&d);
                }
                for t in 0..n {
                    let d = w[t][k].mul(&f2);
                    w[t][j] = w[t][j].add(&d);
                }
            }
        }
        k += 2;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn rank_zero_and_identity() {
        assert_eq!(Mat::zero(3, 3).rank(), 0);
        assert_eq!(Mat::identity(4).rank(), 4);
    }

    #[test]
    fn rank_one_product() {
        // 5x1 times 1x3 has rank exactly 1.
        let a = Mat::from_int_rows(&[&[2], &[-1], &[3], &[7], &[0]]);
        let b = Mat::from_int_rows(&[&[1, -4, 2]]);
        assert_eq!(a.matmul(&b).rank(), 1);
    }

    #[test]
    fn nullspace_dimensions() {
        assert_eq!(Mat::identity(5).nullspace().rows(), 0);
        assert_eq!(Mat::zero(2, 5).nullspace().rows(), 5);
        let m = Mat::from_int_rows(&[&[1, 1, 0], &[0, 0, 1]]);
        let ns = m.nullspace();
        assert_eq!(ns.rows(), 1);
        // spanned by (1, -1, 0)
        assert_eq!(ns.row_vec(0), vec![s(1), s(-1), s(0)]);
        for r in 0..ns.rows() {
            assert!(m.mul_vec(ns.row(r)).iter().all(Scalar::is_zero));
        }
    }

    #[test]
    fn det_and_inverse() {
        let m = Mat::from_int_rows(&[&[2, 1, 0], &[1, 3, -1], &[0, 5, 4]]);
        let d = m.det();
        assert_eq!(d, s(2 * (12 + 5) - (4 + 0)));
        let inv = m.inverse().unwrap();
        assert!(m.matmul(&inv).is_identity());
        let sing = Mat::from_int_rows(&[&[1, 2], &[2, 4]]);
        assert!(sing.det().is_zero());
        assert!(sing.inverse().is_none());
    }

    #[test]
    fn det_with_cyclotomic_entries() {
        let i = Scalar::i_unit().unwrap();
        let m = Mat::from_rows(vec![
            vec![i.clone(), Scalar::one()],
            vec![Scalar::one().neg(), i.clone()],
        ]);
        // det = i*i + 1 = 0
        assert!(m.det().is_zero());
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = Mat::from_int_rows(&[&[1, 2], &[3, 4]]);
        let x = m.solve(&[s(5), s(11)]).unwrap();
        assert_eq!(m.mul_vec(&x), vec![s(5), s(11)]);
        let sing = Mat::from_int_rows(&[&[1, 1], &[1, 1]]);
        assert!(sing.solve(&[s(0), s(1)]).is_none());
    }

    #[test]
    fn charpoly_of_diagonal() {
        // diag(1,2): t^2 - 3t + 2
        let a = Mat::from_int_rows(&[&[1, 0], &[0, 2]]).to_ring::<Scalar>();
        let c = charpoly_coeffs(&a);
        assert_eq!(c, vec![s(-3), s(2)]);
    }

    #[test]
    fn pfaffian_matches_recursive_definition() {
        // pf([[0,a],[-a,0]]) = a
        let a = Mat::from_int_rows(&[&[0, 7], &[-7, 0]]).to_ring::<Scalar>();
        assert_eq!(pfaffian(&a).unwrap(), s(7));
        // 4x4 with pf = af - be + cd for rows (0,a,b,c),( ,0,d,e),( , ,0,f)
        let m = Mat::from_int_rows(&[
            &[0, 2, 3, 5],
            &[-2, 0, 7, 11],
            &[-3, -7, 0, 13],
            &[-5, -11, -13, 0],
        ]);
        let pf = pfaffian(&m.to_ring::<Scalar>()).unwrap();
        assert_eq!(pf, s(2 * 13 - 3 * 11 + 5 * 7));
        let det = m.det();
        assert_eq!(pf.mul(&pf), det);
    }

    #[test]
    fn pfaffian_odd_size_rejected() {
        let a = Mat::zero(3, 3).to_ring::<Scalar>();
        assert!(matches!(
            pfaffian(&a),
            Err(LinalgError::PfaffianOddDimension(3))
        ));
    }
}
