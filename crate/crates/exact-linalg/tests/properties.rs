use exact_linalg::{interpolate, minimal_polynomial, Mat, Scalar, Subspace, UniPoly};
use proptest::prelude::*;

fn small_scalar() -> impl Strategy<Value = Scalar> {
    // small rationals mixed with multiples of zeta
    (-4i64..=4, 1i64..=3, 0i64..=3).prop_map(|(p, q, zp)| {
        let r = Scalar::from_ratio(p, q);
        if zp == 0 {
            r
        } else {
            r.mul(&Scalar::zeta_pow(zp))
        }
    })
}

fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Mat> {
    proptest::collection::vec(small_scalar(), rows * cols).prop_map(move |v| {
        let mut it = v.into_iter();
        Mat::from_fn(rows, cols, |_, _| it.next().unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn subspace_dimension_formula(a in small_matrix(3, 5), b in small_matrix(3, 5)) {
        let sa = Subspace::from_rows(&a);
        let sb = Subspace::from_rows(&b);
        let sum = sa.sum(&sb).unwrap();
        let int = sa.intersect(&sb).unwrap();
        prop_assert_eq!(sum.dim() + int.dim(), sa.dim() + sb.dim());
    }

    #[test]
    fn echelon_canonicalization(a in small_matrix(3, 4), perm in 0usize..6) {
        let sa = Subspace::from_rows(&a);
        // shuffle rows and mix them
        let order = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]][perm];
        let mut rows: Vec<Vec<Scalar>> = order.iter().map(|&i| a.row_vec(i)).collect();
        // add a multiple of the second row onto the first
        let r1 = rows[1].clone();
        for (x, y) in rows[0].iter_mut().zip(&r1) {
            *x = x.add(&y.mul_int(3));
        }
        let sb = Subspace::from_vecs(4, rows);
        prop_assert_eq!(sa, sb);
    }

    #[test]
    fn minimal_polynomial_annihilates(a in small_matrix(4, 4)) {
        let p = minimal_polynomial(&a);
        prop_assert!(p.eval_mat(&a).is_zero());
        prop_assert!(p.coeffs().last().unwrap().is_one());
    }

    #[test]
    fn interpolation_round_trip(coeffs in proptest::collection::vec(small_scalar(), 6)) {
        let p = UniPoly::new(coeffs);
        let pts: Vec<(Scalar, Scalar)> = (0..6)
            .map(|k| {
                let x = Scalar::from_int(k as i64);
                (x.clone(), p.eval(&x))
            })
            .collect();
        let q = interpolate(&pts).unwrap();
        prop_assert_eq!(p, q);
    }

    #[test]
    fn outer_product_has_rank_one(col in proptest::collection::vec(-5i64..=5, 5),
                                  row in proptest::collection::vec(-5i64..=5, 3)) {
        prop_assume!(col.iter().any(|&x| x != 0) && row.iter().any(|&x| x != 0));
        let a = Mat::from_fn(5, 1, |r, _| Scalar::from_int(col[r]));
        let b = Mat::from_fn(1, 3, |_, c| Scalar::from_int(row[c]));
        prop_assert_eq!(a.matmul(&b).rank(), 1);
    }

    #[test]
    fn pfaffian_squares_to_determinant(v in proptest::collection::vec(-6i64..=6, 15)) {
        // random 6x6 skew matrix from the strict upper triangle
        let mut m = Mat::zero(6, 6);
        let mut it = v.into_iter();
        for i in 0..6 {
            for j in (i + 1)..6 {
                let x = Scalar::from_int(it.next().unwrap());
                m.set(i, j, x.clone());
                m.set(j, i, x.neg());
            }
        }
        let pf = exact_linalg::pfaffian(&m.to_ring::<Scalar>()).unwrap();
        prop_assert_eq!(pf.mul(&pf), m.det());
    }
}
