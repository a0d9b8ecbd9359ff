//! Linear subspaces of a fixed coordinate space, stored canonically: the
//! basis rows are in reduced row echelon form, so two constructions of the
//! same subspace compare equal.

use crate::{LinalgError, Mat, Scalar};

#[derive(Clone, PartialEq)]
pub struct Subspace {
    ambient: usize,
    basis: Mat, // RREF, no zero rows
}

impl Subspace {
    pub fn zero(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Mat::zero(0, ambient),
        }
    }

    pub fn full(ambient: usize) -> Subspace {
        Subspace {
            ambient,
            basis: Mat::identity(ambient),
        }
    }

    pub fn from_rows(rows: &Mat) -> Subspace {
        let ambient = rows.cols();
        let (r, pivots) = rows.rref();
        let k = pivots.len();
        let basis = Mat::from_fn(k, ambient, |i, j| r.get(i, j).clone());
        Subspace { ambient, basis }
    }

    pub fn from_vecs(ambient: usize, rows: Vec<Vec<Scalar>>) -> Subspace {
        if rows.is_empty() {
            return Subspace::zero(ambient);
        }
        Subspace::from_rows(&Mat::from_rows(rows))
    }

    pub fn span_of(v: &[Scalar]) -> Subspace {
        Subspace::from_vecs(v.len(), vec![v.to_vec()])
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> &Mat {
        &self.basis
    }

    pub fn basis_row(&self, i: usize) -> &[Scalar] {
        self.basis.row(i)
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    /// Residual of v after reduction against the basis; zero iff v lies in
    /// the subspace.
    pub fn reduce(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ambient);
        let mut w = v.to_vec();
        for i in 0..self.basis.rows() {
            // leading column of row i
            let mut lead = None;
            for c in 0..self.ambient {
                if !self.basis.get(i, c).is_zero() {
                    lead = Some(c);
                    break;
                }
            }
            let Some(c) = lead else { continue };
            if !w[c].is_zero() {
                let f = w[c].clone(); // pivot is 1 in RREF
                for j in 0..self.ambient {
                    w[j] = w[j].sub(&f.mul(self.basis.get(i, j)));
                }
            }
        }
        w
    }

    pub fn contains_vec(&self, v: &[Scalar]) -> bool {
        self.reduce(v).iter().all(Scalar::is_zero)
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        (0..other.dim()).all(|i| self.contains_vec(other.basis_row(i)))
    }

    /// Coordinates of v in the basis rows, if v lies in the subspace.
    pub fn coords_of(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        self.basis.transpose().solve(v)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        Ok(Subspace::from_rows(&self.basis.vstack(&other.basis)))
    }

    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, LinalgError> {
        self.check_ambient(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Subspace::zero(self.ambient));
        }
        // Kernel trick: (u, v) with u^T A = v^T B gives intersection vectors.
        let at = self.basis.transpose();
        let bt = other.basis.transpose().neg();
        let stacked = at.hstack(&bt); // ambient x (a+b)
        let ker = stacked.nullspace(); // rows (u|v)
        let a = self.dim();
        let mut rows = Vec::new();
        for r in 0..ker.rows() {
            let u = &ker.row(r)[..a];
            let mut x = vec![Scalar::zero(); self.ambient];
            for (i, ui) in u.iter().enumerate() {
                if !ui.is_zero() {
                    for j in 0..self.ambient {
                        x[j] = x[j].add(&ui.mul(self.basis.get(i, j)));
                    }
                }
            }
            rows.push(x);
        }
        Ok(Subspace::from_vecs(self.ambient, rows))
    }

    /// Image of the subspace under a linear map given on ambient coordinates.
    pub fn apply(&self, map: &Mat) -> Subspace {
        assert_eq!(map.cols(), self.ambient);
        let rows = (0..self.dim())
            .map(|i| map.mul_vec(self.basis_row(i)))
            .collect();
        Subspace::from_vecs(map.rows(), rows)
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), LinalgError> {
        if self.ambient != other.ambient {
            Err(LinalgError::AmbientMismatch(self.ambient, other.ambient))
        } else {
            Ok(())
        }
    }
}

impl std::fmt::Debug for Subspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Subspace(dim {} of {}) {:?}",
            self.dim(),
            self.ambient,
            self.basis
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn canonical_representative() {
        let a = Subspace::from_vecs(3, vec![vec![s(1), s(1), s(0)], vec![s(0), s(2), s(2)]]);
        let b = Subspace::from_vecs(3, vec![vec![s(2), s(4), s(2)], vec![s(1), s(2), s(1)], vec![
            s(3),
            s(3),
            s(0),
        ]]);
        assert_eq!(a, b);
    }

    #[test]
    fn intersect_complementary_coordinates() {
        let a = Subspace::from_vecs(4, vec![vec![s(1), s(0), s(0), s(0)], vec![
            s(0),
            s(1),
            s(0),
            s(0),
        ]]);
        let b = Subspace::from_vecs(4, vec![vec![s(0), s(0), s(1), s(0)], vec![
            s(0),
            s(0),
            s(0),
            s(1),
        ]]);
        assert!(a.intersect(&b).unwrap().is_zero());
        assert_eq!(a.intersect(&a).unwrap(), a);
        assert_eq!(a.sum(&b).unwrap(), Subspace::full(4));
    }

    #[test]
    fn dimension_formula() {
        let a = Subspace::from_vecs(4, vec![vec![s(1), s(2), s(0), s(0)], vec![
            s(0),
            s(0),
            s(1),
            s(1),
        ]]);
        let b = Subspace::from_vecs(4, vec![vec![s(1), s(2), s(1), s(1)], vec![
            s(1),
            s(0),
            s(0),
            s(0),
        ]]);
        let sum = a.sum(&b).unwrap();
        let int = a.intersect(&b).unwrap();
        assert_eq!(sum.dim() + int.dim(), a.dim() + b.dim());
        assert!(a.contains(&int) && b.contains(&int));
        assert!(sum.contains(&a) && sum.contains(&b));
    }

    #[test]
    fn ambient_mismatch_is_an_error() {
        let a = Subspace::full(3);
        let b = Subspace::full(4);
        assert!(a.intersect(&b).is_err());
    }

    #[test]
    fn coords_round_trip() {
        let a = Subspace::from_vecs(3, vec![vec![s(1), s(1), s(0)], vec![s(0), s(0), s(1)]]);
        let v = vec![s(2), s(2), s(-5)];
        let c = a.coords_of(&v).unwrap();
        assert_eq!(c, vec![s(2), s(-5)]);
        assert!(a.coords_of(&[s(1), s(0), s(0)]).is_none());
    }
}
