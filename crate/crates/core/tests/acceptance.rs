//! Acceptance gate. Each test verifies one claimed property of the
//! library, at the stated tolerance, across truncation sizes that span
//! the supported range. Randomized claims run their invariant suite at
//! 200 trials per size; claims with closed forms or independent oracles
//! check those directly. One pass or fail line per claim.

mod common;

use common::{nelder_mead, random_cone_point, random_pair};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use spdcone::geometry::{distance, norm_at};
use spdcone::harness::{run_suite, RandomModel};
use spdcone::opalg::{mat_exp, CMatrix};
use spdcone::project::{diag_decompose, e_map, nm_coords, project, ProjectOpts};
use spdcone::triple::{
    block_system, commutant_system, diagonal_system, project_tangent, TripleSystem,
};
use spdcone::{ConePoint, UnitizedHermitian};

/// Truncation sizes exercised by every randomized claim: the smallest
/// supported size, a middle one, and the largest covered size.
const DIMS: [usize; 3] = [2, 5, 8];
const TRIALS: usize = 200;
const SEED: u64 = 7;

/// Runs one named suite at every gate size and panics with the list of
/// violations if any trial breaks its bound.
fn gate(suite: &str) {
    for n in DIMS {
        let model = RandomModel::new(SEED, n);
        let report = run_suite(suite, &model, TRIALS)
            .unwrap_or_else(|e| panic!("suite {suite} failed to run at n = {n}: {e}"));
        assert!(
            report.passed(),
            "suite {suite} at n = {n}: {} of {} trials violated bounds, worst excess {:.3e}\n{:#?}",
            report.failures.len(),
            report.trials,
            report.max_violation,
            report.failures
        );
    }
}

/// Distance dominates the flat distance between logarithms and reduces
/// to the norm of the logarithm at the identity.
#[test]
fn distance_formula_and_flat_lower_bound() {
    gate("minimality");
}

/// No piecewise geodesic detour through perturbed waypoints beats the
/// geodesic itself.
#[test]
fn piecewise_geodesic_paths_are_minimal() {
    gate("minimality");
}

/// The symmetrized differential of the exponential never shrinks a
/// tangent vector.
#[test]
fn differential_of_exp_is_expansive() {
    gate("expansive");
}

/// Random planes have nonpositive sectional curvature; commuting and
/// vertical planes are flat to roundoff.
#[test]
fn sectional_curvature_is_nonpositive_and_flat_where_expected() {
    gate("curvature");
}

/// Geodesic triangles obey the comparison cosine law, the angle sum
/// bound, and convexity of the distance between geodesics.
#[test]
fn triangles_satisfy_the_comparison_inequalities() {
    gate("cat0");
}

/// The worked submanifold families close under products, midpoints,
/// brackets, and parallel transport.
#[test]
fn triple_system_machinery_closes() {
    gate("triple");
}

/// The nearest point projection contracts distances, converges inside
/// its budget, and is stable under restarts.
#[test]
fn projection_contracts_and_converges() {
    gate("projection");
}

/// Builds the pair `sum_i c_i e_i` over the orthonormal basis of `m`.
fn combination(m: &TripleSystem, c: &[f64]) -> UnitizedHermitian {
    let mut out = UnitizedHermitian::zero(m.ambient_dim());
    for (coeff, e) in c.iter().zip(m.ortho_basis()) {
        out = &out + &e.scale(*coeff);
    }
    out
}

/// Minimizes the distance to `p` over the exponential image of `m`
/// with a derivative-free simplex search, independent of the gradient
/// machinery under test.
fn simplex_foot(m: &TripleSystem, p: &ConePoint) -> ConePoint {
    let objective = |c: &[f64]| {
        let q = mat_exp(&combination(m, c));
        distance(&q, p).expect("distance to a candidate foot")
    };
    let coarse = nelder_mead(&objective, &vec![0.0; m.dim()], 0.4, 600);
    let fine = nelder_mead(&objective, &coarse, 0.02, 300);
    mat_exp(&combination(m, &fine))
}

/// Every factorization reconstructs its input; the diagonal splitting
/// matches its closed form on the worked two by two example; and the
/// gradient-based projection agrees with a derivative-free minimizer.
#[test]
fn decompositions_reconstruct_and_match_oracles() {
    gate("decomposition");

    // Closed form: for `1 + 0.6 s1` with `s1` the symmetric permutation
    // matrix, the splitting D e^w D has D^2 = 0.8 I and w = atanh(0.6) s1.
    let mut a = CMatrix::zeros(2, 2);
    a[(0, 1)] = Complex64::new(0.6, 0.0);
    a[(1, 0)] = Complex64::new(0.6, 0.0);
    let (d, w) = diag_decompose(&a, 1.0).expect("diagonal splitting");
    let t = 0.6_f64.atanh();
    for i in 0..2 {
        for j in 0..2 {
            let dd = if i == j { 0.8 } else { 0.0 };
            let ww = if i == j { 0.0 } else { t };
            assert!(
                ((&d * &d)[(i, j)].re - dd).abs() < 1e-6,
                "D^2 entry ({i},{j}) differs from the closed form"
            );
            assert!(
                (d[(i, j)].im).abs() < 1e-12 && (w[(i, j)].im).abs() < 1e-12,
                "closed-form factors must be real"
            );
            assert!(
                (w[(i, j)].re - ww).abs() < 1e-6,
                "w entry ({i},{j}) differs from atanh(0.6) off the diagonal"
            );
        }
    }

    // Independent oracle: a simplex search over basis coefficients must
    // land on the same foot as the gradient descent.
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let systems: Vec<TripleSystem> = vec![
        diagonal_system(2).unwrap(),
        block_system(2, 1).unwrap(),
        commutant_system(&random_pair(&mut rng, 2, 0.8)).unwrap(),
    ];
    for m in &systems {
        for _ in 0..3 {
            let p = random_cone_point(&mut rng, 2, 0.6);
            let res = project(m, &p, &ProjectOpts::default()).expect("projection");
            let oracle = simplex_foot(m, &p);
            let gap = distance(&res.foot, &oracle).expect("foot comparison");
            assert!(
                gap <= 1e-4,
                "gradient foot and simplex foot disagree by {gap:.3e} on a system of dim {}",
                m.dim()
            );
        }
    }
}

/// Leaf projections are isometries and the leaf and scale coordinates
/// split the metric as a product.
#[test]
fn foliation_splits_isometrically() {
    gate("foliation");
}

/// The normal bundle chart and the normal exponential invert each other
/// on random samples from both sides.
#[test]
fn normal_bundle_coordinates_invert_on_random_samples() {
    let mut rng = ChaCha8Rng::seed_from_u64(4040);
    for n in [2usize, 3, 4] {
        let systems: Vec<TripleSystem> = vec![
            diagonal_system(n).unwrap(),
            block_system(n, 1).unwrap(),
            commutant_system(&random_pair(&mut rng, n, 0.8)).unwrap(),
        ];
        for m in &systems {
            for _ in 0..25 {
                // Chart after exponential: start from (q, v) with v
                // metrically normal at q and ask for it back.
                let q = m.random_point(&mut rng, 0.8);
                let raw = random_pair(&mut rng, n, 0.5);
                let v = &raw - &project_tangent(m, &q, &raw).expect("tangential part");
                let p = e_map(m, &q, &v).expect("normal exponential");
                let (q2, v2) = nm_coords(m, &p).expect("normal bundle chart");
                let foot_gap = distance(&q, &q2).expect("foot comparison");
                let vector_gap = norm_at(&q, &(&v - &v2)).expect("vector comparison");
                assert!(
                    foot_gap <= 1e-6,
                    "foot moved by {foot_gap:.3e} through the roundtrip at n = {n}"
                );
                assert!(
                    vector_gap <= 1e-6,
                    "normal vector moved by {vector_gap:.3e} through the roundtrip at n = {n}"
                );

                // Exponential after chart: a random point must be
                // reproduced from its coordinates.
                let target = random_cone_point(&mut rng, n, 0.7);
                let (foot, normal) = nm_coords(m, &target).expect("normal bundle chart");
                let back = e_map(m, &foot, &normal).expect("normal exponential");
                let gap = distance(&back, &target).expect("roundtrip comparison");
                assert!(
                    gap <= 1e-6,
                    "point moved by {gap:.3e} through the inverse roundtrip at n = {n}"
                );
            }
        }
    }
}
