//! Twenty seeded end-to-end instances: the eigenvalues a converged solve
//! extracts must match the brute-force oracle.

use qstiefel::eig::generate_problem;
use qstiefel::solver::{solve_cg, SolverConfig};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn twenty_seeded_instances_match_the_oracle() {
    // Eigenvalue error at a near-stationary point is quadratic in the
    // gradient norm, so 1e-5 stationarity leaves orders of magnitude of
    // headroom for the 1e-6 agreement bound while staying safely above the
    // cost round-off floor on these scales.
    let config = SolverConfig {
        max_iters: 2000,
        grad_tol: 1e-5,
        ..SolverConfig::default()
    };
    let mut checked = 0usize;
    for (i, (n, p)) in [(10usize, 1usize), (10, 3), (30, 1), (30, 3)]
        .iter()
        .cycle()
        .take(20)
        .enumerate()
    {
        let seed = 300 + i as u64;
        let prob = generate_problem(*n, *p, seed).unwrap();
        let ctx = prob.context().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xabcd);
        let x0 = ctx.random_point(&mut rng).unwrap();
        let report = solve_cg(&ctx, &prob, &x0, &config).unwrap();
        assert!(
            report.converged,
            "instance {i} (n={n}, p={p}, seed={seed}) did not converge: {}",
            report.reason
        );

        // Normalize ‖A‖_F = 1 and compare against the p smallest oracle values.
        let a_norm = prob.a().norm();
        let extracted = prob.extract_eigenpairs(&report.x).unwrap();
        let oracle = prob.oracle_eigs().unwrap();
        for r in 0..*p {
            let diff = (extracted.lambdas[r] - oracle[r]).abs() / a_norm;
            assert!(
                diff <= 1e-6,
                "instance {i}: eigenvalue {r} off by {diff:.3e} after normalization"
            );
        }
        // Ascending output order at convergence.
        for w in extracted.lambdas.windows(2) {
            assert!(w[0] <= w[1] + 1e-9 * a_norm, "eigenvalues out of order");
        }
        checked += 1;
    }
    assert_eq!(checked, 20);
}
