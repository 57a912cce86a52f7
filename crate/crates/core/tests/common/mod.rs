//! Helpers shared by the integration tests: random inputs drawn
//! independently of the library's own harness, and a derivative-free
//! simplex minimizer used as an oracle against the gradient-based
//! projection.

use num_complex::Complex64;
use rand::Rng;
use spdcone::{CMatrix, ConePoint, UnitizedHermitian};

pub fn random_hermitian<R: Rng>(rng: &mut R, n: usize, scale: f64) -> CMatrix {
    let raw = CMatrix::from_fn(n, n, |_, _| {
        Complex64::new(
            scale * rng.random_range(-1.0..1.0),
            scale * rng.random_range(-1.0..1.0),
        )
    });
    (&raw + raw.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn random_pair<R: Rng>(rng: &mut R, n: usize, scale: f64) -> UnitizedHermitian {
    UnitizedHermitian::new(
        scale * rng.random_range(-1.0..1.0),
        random_hermitian(rng, n, scale),
    )
    .expect("symmetrized matrix is Hermitian")
}

pub fn random_cone_point<R: Rng>(rng: &mut R, n: usize, scale: f64) -> ConePoint {
    spdcone::opalg::mat_exp(&random_pair(rng, n, scale))
}

/// Plain Nelder-Mead on `R^n` with the textbook reflection, expansion,
/// contraction and shrink coefficients. Deliberately knows nothing
/// about gradients or the manifold; the acceptance tests use it to
/// cross-check the projection solver on low-dimensional instances.
pub fn nelder_mead(f: impl Fn(&[f64]) -> f64, start: &[f64], step: f64, iters: usize) -> Vec<f64> {
    let n = start.len();
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    simplex.push((start.to_vec(), f(start)));
    for i in 0..n {
        let mut v = start.to_vec();
        v[i] += step;
        let fv = f(&v);
        simplex.push((v, fv));
    }
    for _ in 0..iters {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..n].iter().map(|(v, _)| v[i]).sum::<f64>() / n as f64)
            .collect();
        let worst = simplex[n].clone();
        let reflected: Vec<f64> = (0..n)
            .map(|i| 2.0 * centroid[i] - worst.0[i])
            .collect();
        let fr = f(&reflected);
        if fr < simplex[0].1 {
            let expanded: Vec<f64> = (0..n)
                .map(|i| 3.0 * centroid[i] - 2.0 * worst.0[i])
                .collect();
            let fe = f(&expanded);
            simplex[n] = if fe < fr {
                (expanded, fe)
            } else {
                (reflected, fr)
            };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (reflected, fr);
        } else {
            let contracted: Vec<f64> = (0..n)
                .map(|i| 0.5 * (centroid[i] + worst.0[i]))
                .collect();
            let fc = f(&contracted);
            if fc < worst.1 {
                simplex[n] = (contracted, fc);
            } else {
                let best = simplex[0].0.clone();
                for entry in simplex.iter_mut().skip(1) {
                    let shrunk: Vec<f64> = (0..n)
                        .map(|i| 0.5 * (best[i] + entry.0[i]))
                        .collect();
                    entry.1 = f(&shrunk);
                    entry.0 = shrunk;
                }
            }
        }
    }
    simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
    simplex[0].0.clone()
}

#[allow(dead_code)]
pub fn assert_close(actual: f64, expected: f64, tol: f64, what: &str) {
    assert!(
        (actual - expected).abs() <= tol,
        "{what}: got {actual}, expected {expected} within {tol}"
    );
}
