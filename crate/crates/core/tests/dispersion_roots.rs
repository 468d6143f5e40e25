use num_complex::Complex64;
use proptest::prelude::*;

use polariton::model::{preset, QGrid, SystemConfig};
use polariton::oracle::{integral_rhs, QuadratureSpec};
use polariton::solver::{newton_root, residual, solve_branch, zero_disorder_energy, Branch};

fn system(which: bool, ratio: f64) -> SystemConfig {
    let name = if which { "perovskite" } else { "bodipy-bsw" };
    preset(name).unwrap().with_sigma_ratio(ratio).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Converged roots satisfy the closed-form residual, decay, keep the branches apart,
    /// and solve the effective-medium equation evaluated by brute-force quadrature.
    #[test]
    fn roots_are_genuine(which in any::<bool>(), ratio in 0.05f64..0.6, n in 20usize..60) {
        let cfg = system(which, ratio);
        let q = QGrid::default_for(&cfg);
        let grid = QGrid::new(q.min, q.max, n).unwrap().points();
        let spec = QuadratureSpec::default();
        let lp = solve_branch(Branch::LP, &grid, &cfg).unwrap();
        let up = solve_branch(Branch::UP, &grid, &cfg).unwrap();
        for (k, &x) in grid.iter().enumerate() {
            for (sol, b) in [(&lp, Branch::LP), (&up, Branch::UP)] {
                if !sol.converged[k] {
                    continue;
                }
                let e = sol.energies[k];
                prop_assert!(residual(e, x, &cfg).unwrap().norm() <= 1e-10);
                prop_assert!(e.im <= 0.0);
                let other = zero_disorder_energy(x, b.other(), &cfg).unwrap();
                match b {
                    Branch::LP => prop_assert!(e.re < other),
                    Branch::UP => prop_assert!(e.re > other),
                }
                if e.im.abs() >= 1e-3 * cfg.sigma() {
                    let rhs = integral_rhs(e, x, &cfg, &spec).unwrap();
                    let lhs = e - cfg.photon_energy(x).unwrap();
                    prop_assert!((lhs - rhs).norm() <= 1e-8, "q = {}, E = {}", x, e);
                }
            }
        }
    }

    #[test]
    fn newton_is_idempotent_on_roots(which in any::<bool>(), ratio in 0.05f64..0.5, qf in 0.0f64..1.0) {
        let cfg = system(which, ratio);
        let g = QGrid::default_for(&cfg);
        let x = g.min + qf * (g.max - g.min);
        let seed = Complex64::new(zero_disorder_energy(x, Branch::LP, &cfg).unwrap(), -1e-6);
        if let Ok(root) = newton_root(seed, x, &cfg, 1e-12, 50).map(|r| r.energy) {
            let again = newton_root(root, x, &cfg, 1e-12, 50).unwrap();
            prop_assert_eq!(again.iterations, 0);
            prop_assert_eq!(again.energy, root);
        }
    }
}

#[test]
fn narrow_disorder_reproduces_two_level_branches() {
    for which in [true, false] {
        let base = system(which, 0.0);
        let cfg = base.with_sigma_ratio(1e-6).unwrap();
        let grid = QGrid::default_for(&cfg).points();
        for b in Branch::BOTH {
            let sol = solve_branch(b, &grid, &cfg).unwrap();
            assert!(sol.all_converged());
            for (k, &x) in grid.iter().enumerate() {
                let e0 = zero_disorder_energy(x, b, &base).unwrap();
                assert!((sol.energies[k] - e0).norm() <= 1e-5);
            }
        }
    }
}

#[test]
fn zero_disorder_is_exactly_closed_form() {
    let cfg = preset("perovskite").unwrap();
    let grid = QGrid::new(0.0, 30.0, 50).unwrap().points();
    for b in Branch::BOTH {
        let sol = solve_branch(b, &grid, &cfg).unwrap();
        for (k, &x) in grid.iter().enumerate() {
            assert_eq!(
                sol.energies[k].re,
                zero_disorder_energy(x, b, &cfg).unwrap()
            );
            assert_eq!(sol.energies[k].im, 0.0);
        }
    }
}
