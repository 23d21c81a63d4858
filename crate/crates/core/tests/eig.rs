use magbound_core::eig::*;
use num_complex::Complex64;
use proptest::prelude::*;

fn hermitian(n: usize, raw: &[f64]) -> CMatrix {
    let mut k = 0;
    let mut next = || {
        k += 1;
        raw[(k - 1) % raw.len()]
    };
    let mut a = CMatrix::zeros(n);
    for i in 0..n {
        a[(i, i)] = Complex64::new(next(), 0.0);
        for j in 0..i {
            let z = Complex64::new(next(), next());
            a[(i, j)] = z;
            a[(j, i)] = z.conj();
        }
    }
    a
}

fn close(a: &CMatrix, b: &CMatrix, tol: f64) -> bool {
    a.as_slice().iter().zip(b.as_slice()).all(|(x, y)| (x - y).norm() <= tol)
}

#[test]
fn rejects_non_hermitian_and_oversized() {
    let mut a = CMatrix::identity(3);
    a[(0, 1)] = Complex64::new(1.0, 0.0);
    assert!(matches!(eigenvalues(&a, false), Err(magbound_core::Error::NotHermitian { .. })));
    assert!(matches!(inverse_sqrt(&CMatrix::diagonal(&[1.0, -1.0])), Err(magbound_core::Error::Singular { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn block_spectrum_is_union(n1 in 1usize..12, n2 in 1usize..12, raw in prop::collection::vec(-1.0f64..1.0, 40..80)) {
        let a = hermitian(n1, &raw);
        let b = hermitian(n2, &raw[7..]);
        let n = n1 + n2;
        let blk = CMatrix::from_fn(n, |i, j| {
            if i < n1 && j < n1 { a[(i, j)] } else if i >= n1 && j >= n1 { b[(i - n1, j - n1)] } else { Complex64::new(0.0, 0.0) }
        });
        let mut union = eigenvalues(&a, false).unwrap().values;
        union.extend(eigenvalues(&b, false).unwrap().values);
        union.sort_by(f64::total_cmp);
        let got = eigenvalues(&blk, false).unwrap();
        for (x, y) in got.values.iter().zip(&union) {
            prop_assert!((x - y).abs() < 1e-12);
        }
        let full = eigenvalues(&blk, true).unwrap();
        prop_assert!(full.max_residual(&blk).unwrap() < 1e-12);
    }

    #[test]
    fn semigroup_law(n in 1usize..16, t in 0.01f64..3.0, s in 0.01f64..3.0, raw in prop::collection::vec(-1.0f64..1.0, 40..80)) {
        let h = hermitian(n, &raw);
        let lhs = exp_neg(&h, t).unwrap().mul(&exp_neg(&h, s).unwrap());
        prop_assert!(close(&lhs, &exp_neg(&h, t + s).unwrap(), 1e-9 * lhs.max_abs().max(1.0)));
    }

    #[test]
    fn inverse_square_root(n in 1usize..16, raw in prop::collection::vec(-1.0f64..1.0, 40..80)) {
        let a = hermitian(n, &raw);
        let h = a.mul(&a.adjoint());
        let mut h = h;
        for i in 0..n {
            h[(i, i)] += Complex64::new(0.5, 0.0);
        }
        let r = inverse_sqrt(&h).unwrap();
        prop_assert!(close(&r.mul(&r).mul(&h), &CMatrix::identity(n), 1e-8));
    }
}
