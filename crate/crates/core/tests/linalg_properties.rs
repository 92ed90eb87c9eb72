use fwsw::linalg::{gmres_solve, CMatrix, FnOperator, GmresConfig};
use fwsw::quadrature::{make_rule, NodeFamily};
use num_complex::Complex64;
use proptest::prelude::*;

fn diagonally_dominant(n: usize, entries: &[(f64, f64)]) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| {
        let (re, im) = entries[i * n + j];
        let shift = if i == j { n as f64 + 1.0 } else { 0.0 };
        Complex64::new(re + shift, im)
    })
}

proptest! {
    #[test]
    fn inverse_multiplies_back(entries in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 25)) {
        let a = diagonally_dominant(5, &entries);
        let prod = &a * &a.inverse().unwrap();
        prop_assert!((&prod - &CMatrix::identity(5)).max_abs() < 1e-10);
    }

    #[test]
    fn gmres_matches_dense_solve(
        entries in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 36),
        rhs in prop::collection::vec(-1.0..1.0f64, 6),
    ) {
        let a = diagonally_dominant(6, &entries);
        let b: Vec<Complex64> = rhs.iter().map(|&v| Complex64::new(v, 0.5 * v)).collect();
        let op = FnOperator::new(6, |x: &[Complex64], out: &mut [Complex64]| out.copy_from_slice(&a.matvec(x)));
        let cfg = GmresConfig { tolerance: 1e-13, restart: 6, max_iters: 100 };
        let got = gmres_solve(&op, &b, &vec![Complex64::new(0.0, 0.0); 6], &cfg).unwrap().solution;
        let want = a.solve(&b).unwrap();
        for (g, w) in got.iter().zip(&want) {
            prop_assert!((g - w).norm() < 1e-10);
        }
    }

    #[test]
    fn rescaled_rules_integrate_constants(m in 2usize..10, t0 in -5.0..5.0f64, len in 0.01..10.0f64) {
        for family in NodeFamily::ALL {
            let rule = make_rule(family, m, t0, t0 + len).unwrap();
            prop_assert!((rule.q_end.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            for (row, tau) in rule.q.iter().zip(&rule.taus) {
                prop_assert!((row.iter().sum::<f64>() * len - (tau - t0)).abs() < 1e-11 * len.max(1.0));
            }
        }
    }
}
