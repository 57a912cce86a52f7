//! The invariant suites behind `run_suite`.
//!
//! Every suite takes the random model and a trial index, draws a fresh
//! deterministic instance, and returns the list of evaluated checks.
//! Bounds are fixed constants so reports stay comparable across runs.

use super::{Check, RandomModel};
use crate::error::Result;
use crate::foliation::{leaf_of, leaf_project, split, unsplit};
use crate::geometry::{
    distance, exp_point, geodesic_eval, log_point, metric_at, norm_at, parallel_transport,
    sectional,
};
use crate::geometry::curvature as curvature_tensor;
use crate::opalg::{
    commutator, congruence, frechet_exp, mat_exp, polar, CMatrix, ConePoint, UnitizedHermitian,
    UnitizedOperator,
};
use crate::project::{
    block_decompose, decompose_mvm, diag_decompose, full_block_polar, polar_relative, project,
    ProjectOpts,
};
use crate::triple::{
    block_system, bracket_algebra, commutant_system, diagonal_system, polynomial_system,
    project_tangent, qpq_closure_check, scalar_system, TripleSystem,
};
use num_complex::Complex64;
use rand::Rng;

/// Clamped angle between two tangent vectors at `p`.
fn angle_at(p: &ConePoint, x: &UnitizedHermitian, y: &UnitizedHermitian) -> Result<f64> {
    let cos = metric_at(p, x, y)? / (norm_at(p, x)? * norm_at(p, y)?);
    Ok(cos.clamp(-1.0, 1.0).acos())
}

/// Triangle comparisons: the hyperbolic-style cosine law, the angle sum
/// bound, convexity of the distance between geodesics, and the metric
/// axioms that make them meaningful.
pub(super) fn cat0(model: &RandomModel, trial: u64) -> Result<Vec<Check>> {
    let mut rng = model.rng_for(trial);
    let p = model.random_point(&mut rng);
    let q = model.random_point(&mut rng);
    let r = model.random_point(&mut rng);
    let s = model.random_point(&mut rng);
    let d_pq = distance(&p, &q)?;
    let d_pr = distance(&p, &r)?;
    let d_qr = distance(&q, &r)?;
    let mut checks = Vec::new();

    let gamma_p = angle_at(&p, &log_point(&p, &q)?, &log_point(&p, &r)?)?;
    let lhs = d_qr * d_qr;
    let rhs = d_pq * d_pq + d_pr * d_pr - 2.0 * d_pq * d_pr * gamma_p.cos();
    checks.push(Check::new(
        "comparison cosine law for geodesic triangles",
        rhs - lhs,
        1e-8 * (1.0 + lhs),
    ));

    let gamma_q = angle_at(&q, &log_point(&q, &p)?, &log_point(&q, &r)?)?;
    let gamma_r = angle_at(&r, &log_point(&r, &p)?, &log_point(&r, &q)?)?;
    checks.push(Check::new(
        "angle sum of a geodesic triangle is at most pi",
        gamma_p + gamma_q + gamma_r,
        std::f64::consts::PI + 1e-8,
    ));

    let grid: Vec<f64> = (0..21)
        .map(|i| {
            let t = i as f64 / 20.0;
            distance(&geodesic_eval(&p, &q, t)?, &geodesic_eval(&r, &s, t)?)
        })
        .collect::<Result<_>>()?;
    let worst_concavity = (1..20)
        .map(|i| 2.0 * grid[i] - grid[i - 1] - grid[i + 1])
        .fold(f64::NEG_INFINITY, f64::max);
    checks.push(Check::new(
        "distance between geodesics is convex in the parameter",
        worst_concavity,
        1e-7,
    ));

    checks.push(Check::new(
        "distance is symmetric",
        (d_pq - distance(&q, &p)?).abs(),
        1e-10 * (1.0 + d_pq),
    ));
    checks.push(Check::new(
        "triangle inequality for the geodesic distance",
        d_pr - (d_pq + d_qr),
        1e-9,
    ));
    Ok(checks)
}

/// Geodesics are shortest: detours through perturbed waypoints are
/// never shorter, the distance dominates its flat counterpart, and the
/// distance to the identity is the norm of the logarithm.
pub(super) fn minimality(model: &RandomModel, trial: u64) -> Result<Vec<Check>> {
    let mut rng = model.rng_for(trial);
    let p = model.random_point(&mut rng);
    let q = model.random_point(&mut rng);
    let d = distance(&p, &q)?;

    let mut stations = vec![p.clone()];
    for i in 1..=4 {
        let base = geodesic_eval(&p, &q, i as f64 / 5.0)?;
        let kick = model.random_tangent(&mut rng).scale(0.3);
        stations.push(exp_point(&base, &kick)?);
    }
    stations.push(q.clone());
    let mut length = 0.0;
    for pair in stations.windows(2) {
        length += distance(&pair[0], &pair[1])?;
    }

    let x = model.random_tangent(&mut rng);
    let y = model.random_tangent(&mut rng);
    let flat = (&x - &y).hs_norm();
    let curved = distance(&mat_exp(&x), &mat_exp(&y))?;
    let from_unit = distance(&ConePoint::identity(model.n), &mat_exp(&x))?;

    Ok(vec![
        Check::new(
            "piecewise geodesic detours are no shorter than the geodesic",
            d - length,
            1e-8,
        ),
        Check::new(
            "distance dominates the flat distance between logarithms",
            flat - curved,
            1e-9,
        ),
        Check::new(
            "distance to the identity equals the norm of the logarithm",
            (from_unit - x.hs_norm()).abs(),
            1e-10,
        ),
    ])
}

/// The symmetrized differential of the exponential never shrinks a
/// tangent vector, at the drawn exponent and at a larger multiple.
pub(super) fn expansive(model: &RandomModel, trial: u64) -> Result<Vec<Check>> {
    let mut rng = model.rng_for(trial);
    let x = model.random_tangent(&mut rng);
    let y = model.random_tangent(&mut rng);
    let mut checks = Vec::new();
    for (description, factor) in [
        ("differential of the exponential is metrically expansive", 1.0),
        ("expansive differential at a larger exponent", 2.5),
    ] {
        let base = x.scale(factor);
        let image = frechet_exp(&base, &y)?;
        let shrink = mat_exp(&base.scale(-0.5)).op().to_operator();
        let pulled = congruence(&shrink, &image);
        checks.push(Check::new(description, y.hs_norm() - pulled.hs_norm(), 1e-9));
    }
    Ok(checks)
}

/// A diagonal pair with independent random entries.
fn random_diagonal<R: Rng>(n: usize, rng: &mut R) -> UnitizedHermitian {
    let mut mat = CMatrix::zeros(n, n);
    for i in 0..n {
        mat[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
    }
    UnitizedHermitian::new(rng.random_range(-1.0..1.0), mat).expect("diagonal pair")
}

/// A tangent vector with no scalar component, tangent to every leaf.
fn random_leaf_tangent<R: Rng>(model: &RandomModel, rng: &mut R) -> UnitizedHermitian {
    let t = model.random_tangent(rng);
    UnitizedHermitian::from_hs(t.hs().clone()).expect("zero scalar pair")
}

/// Curvature signs: nonpositive sections everywhere, flat commuting
/// and vertical sections, and antisymmetry of the curvature form.
pub(super) fn curvature(model: &RandomModel, trial: u64) -> Result<Vec<Check>> {
    let mut rng = model.rng_for(trial);
    let p = model.random_point(&mut rng);
    let x = model.random_tangent(&mut rng);
    let y = model.random_tangent(&mut rng);
    let z = model.random_tangent(&mut rng);
    let w = model.random_tangent(&mut rng);
    let mut checks = Vec::new();

    checks.push(Check::new(
        "sectional curvature is nonpositive",
        sectional(&p, &x, &y)?,
        1e-12,
    ));

    let (_, u) = polar(&model.random_operator(&mut rng))?;
    let d0 = random_diagonal(model.n, &mut rng);
    let d1 = random_diagonal(model.n, &mut rng);
    let d2 = random_diagonal(model.n, &mut rng);
    let cp = ConePoint::certify(congruence(&u, mat_exp(&d0).op()))?;
    let cx = congruence(&u, &d1);
    let cy = congruence(&u, &d2);
    checks.push(Check::new(
        "planes spanned by commuting directions are flat",
        sectional(&cp, &cx, &cy)?.abs(),
        1e-12,
    ));

    let leafward = random_leaf_tangent(model, &mut rng);
    checks.push(Check::new(
        "vertical planes through the scalar direction are flat",
        sectional(&p, &leafward, p.op())?.abs(),
        1e-12,
    ));

    let m1 = metric_at(&p, &curvature_tensor(&p, &x, &y, &z)?, &w)?;
    let m2 = metric_at(&p, &curvature_tensor(&p, &y, &x, &z)?, &w)?;
    checks.push(Check::new(
        "curvature form is antisymmetric in its first two slots",
        (m1 + m2).abs(),
        1e-10 * (1.0 + m1.abs()),
    ));
    Ok(checks)
}

/// The worked submanifold families, cycled by trial index. Dimension
/// one has no corner blocks, so it falls back to the diagonal family.
fn example_system<R: Rng>(
    model: &RandomModel,
    trial: u64,
    rng: &mut R,
) -> Result<(TripleSystem, Option<UnitizedHermitian>)> {
    Ok(match trial % 4 {
        0 => (diagonal_system(model.n)?, None),
        1 if model.n >= 2 => {
            let k = 1 + (trial as usize / 4) % (model.n - 1);
            (block_system(model.n, k)?, None)
        }
        2 => {
            let y = model.random_tangent(rng);
            (commutant_system(&y)?, Some(y))
        }
        3 => {
            let a = model.random_tangent(rng);
            (polynomial_system(&a)?, None)
        }
        _ => (diagonal_system(model.n)?, None),
    })
}

/// Closure of the worked submanifold families: qpq products and
/// geodesic midpoints stay inside, brackets close into the canonical
/// split, and transported tangents stay tangent.
pub(super) fn triple(model: &RandomModel, trial: u64) -> Result<Vec<Check>> {
    let mut rng = model.rng_for(trial);
    let (m, generator) = example_system(model, trial, &mut rng)?;
    let mut checks = Vec::new();

    checks.push(Check::new(
        "products q p q stay inside the exponential image",
        qpq_closure_check(&m, 3, &mut rng)?,
        1e-8,
    ));

    let p = m.random_point(&mut rng, model.norm_bound);
    let q = m.random_point(&mut rng, model.norm_bound);
    let mid = geodesic_eval(&p, &q, 0.5)?;
    checks.push(Check::new(
        "geodesic midpoints stay inside the exponential image",
        m.span_residual(&mid.log()),
        1e-7,
    ));

    checks.push(Check::new(
        "bracket relations of the canonical split hold",
        bracket_algebra(&m)?.max_relation_residual,
        1e-9,
    ));

    let w = project_tangent(&m, &p, &model.random_tangent(&mut rng))?;
    let moved = parallel_transport(&p, &q, &w)?;
    let tangential = project_tangent(&m, &q, &moved)?;
    checks.push(Check::new(
        "parallel transport preserves tangency to the submanifold",
        (&moved - &tangential).hs_norm() / w.hs_norm().max(1.0),
        1e-8,
    ));

    if let Some(y) = generator {
        let member = m.random_point(&mut rng, model.norm_bound);
        let defect = commutator(&member.op().to_operator(), &y.to_operator()).hs_norm();
        checks.push(Check::new(
            "points of a commutant system commute with the generator",
            defect / (member.op().hs_norm() * y.hs_norm()).max(1.0),
            1e-10,
        ));
    }
    Ok(checks)
}

/// The projection targets exercised by the projection suite, cycled by
/// trial index.
fn projection_target<R: Rng>(model: &RandomModel, trial: u64, rng: &mut R) -> Result<TripleSystem> {
    Ok(match trial % 4 {
        0 => diagonal_system(model.n)?,
        1 => scalar_system(model.n)?,
        2 if model.n >= 2 => {
            let k = 1 + (trial as usize / 4) % (model.n - 1);
            block_system(model.n, k)?
        }
        3 => commutant_system(&model.random_tangent(rng))?,
        _ => diagonal_system(model.n)?,
    })
}

/// The nearest-point projection: contraction, bounded iteration count,
/// restart stability, and the exponential contract of its output.
pub(super) fn projection(model: &RandomModel, trial: u64) -> Result<Vec<Check>> {
    let mut rng = model.rng_for(trial);
    let m = projection_target(model, trial, &mut rng)?;
    let p = model.random_point(&mut rng);
    let q = model.random_point(&mut rng);
    let opts = ProjectOpts::default();
    let res_p = project(&m, &p, &opts)?;
    let res_q = project(&m, &q, &opts)?;
    let mut checks = Vec::new();

    checks.push(Check::new(
        "nearest point projection does not increase distances",
        distance(&res_p.foot, &res_q.foot)? - distance(&p, &q)?,
        1e-8,
    ));
    checks.push(Check::new(
        "projection converges within the iteration budget",
        res_p.iterations.max(res_q.iterations) as f64,
        200.0,
    ));

    let restart = ProjectOpts {
        init: Some(m.random_point(&mut rng, 1.5)),
        ..ProjectOpts::default()
    };
    let res_r = project(&m, &p, &restart)?;
    checks.push(Check::new(
        "restarts reach the same foot of the perpendicular",
        distance(&res_p.foot, &res_r.foot)?,
        1e-6,
    ));

    let reach = distance(&p, &res_p.foot)?;
    checks.push(Check::new(
        "normal from the foot reproduces the projected point",
        distance(&exp_point(&res_p.foot, &res_p.normal)?, &p)? / (1.0 + reach),
        1e-7,
    ));
    let tangential = project_tangent(&m, &res_p.foot, &res_p.normal)?;
    checks.push(Check::new(
        "residual at the foot is orthogonal to the submanifold",
        norm_at(&res_p.foot, &tangential)? / (1.0 + norm_at(&res_p.foot, &res_p.normal)?),
        1e-7,
    ));
    Ok(checks)
}

fn mvm_checks<R: Rng>(model: &RandomModel, trial: u64, rng: &mut R) -> Result<Vec<Check>> {
    let m = if trial % 2 == 0 || model.n < 2 {
        diagonal_system(model.n)?
    } else {
        block_system(model.n, 1 + (trial as usize / 2) % (model.n - 1))?
    };
    let a = model.random_tangent(rng);
    let (x, v) = decompose_mvm(&m, &a)?;
    let ex = mat_exp(&x).op().to_operator();
    let rebuilt =
        ConePoint::certify((&(&ex * &mat_exp(&v).op().to_operator()) * &ex).hermitian_part())?;
    let foot = mat_exp(&x.scale(2.0));
    let mut checks = vec![
        Check::new(
            "two sided splitting reconstructs the exponential",
            distance(&rebuilt, &mat_exp(&a))?,
            1e-7,
        ),
        Check::new(
            "outer factor lies in the subspace",
            m.span_residual(&x),
            1e-8,
        ),
        Check::new(
            "middle factor is orthogonal to the subspace",
            m.project_span(&v).hs_norm() / v.hs_norm().max(1.0),
            1e-8,
        ),
    ];

    let p = mat_exp(&a);
    let along = project_tangent(&m, &foot, &model.random_tangent(rng))?;
    let here = distance(&foot, &p)?;
    let mut best = f64::INFINITY;
    for i in 0..41 {
        let s = -0.1 + 0.2 * i as f64 / 40.0;
        let d = distance(&exp_point(&foot, &along.scale(s))?, &p)?;
        best = best.min(d);
    }
    checks.push(Check::new(
        "foot minimizes distance along submanifold directions",
        here - best,
        1e-9,
    ));
    Ok(checks)
}

fn diag_checks<R: Rng>(model: &RandomModel, rng: &mut R) -> Result<Vec<Check>> {
    let a = model.random_tangent(rng).hs().clone();
    let radius = crate::opalg::eig_hermitian(&a)?
        .values
        .iter()
        .fold(0.0_f64, |acc, &v| acc.max(v.abs()));
    let lambda = radius + rng.random_range(0.5..2.0);
    let (d, w) = diag_decompose(&a, lambda)?;
    let worst_diag = (0..model.n)
        .map(|i| w[(i, i)].norm())
        .fold(0.0_f64, f64::max);
    let shifted = CMatrix::identity(model.n, model.n) * Complex64::new(lambda, 0.0) + &a;
    let rebuilt = &d * crate::opalg::exp_hermitian_matrix(&w)? * &d;
    Ok(vec![
        Check::new(
            "diagonal splitting leaves a zero diagonal middle exponent",
            worst_diag,
            1e-8,
        ),
        Check::new(
            "diagonal splitting reconstructs the shifted operator",
            (&rebuilt - &shifted).norm() / shifted.norm().max(1.0),
            1e-7,
        ),
    ])
}

fn polar_checks<R: Rng>(model: &RandomModel, rng: &mut R) -> Result<Vec<Check>> {
    let m = diagonal_system(model.n)?;
    let g = model.random_operator(rng);
    let (ex, ev, u) = polar_relative(&m, &g)?;
    let rebuilt = &(&ex.op().to_operator() * &ev.op().to_operator()) * &u;
    let defect = (&(&u * &u.adjoint()) - &UnitizedOperator::unit(model.n)).hs_norm();
    Ok(vec![
        Check::new(
            "relative polar factorization reconstructs the operator",
            (&rebuilt - &g).hs_norm() / g.hs_norm().max(1.0),
            1e-7,
        ),
        Check::new("relative polar factor is unitary", defect, 1e-9),
        Check::new(
            "relative polar outer factor lies in the subspace",
            m.span_residual(&ex.log()),
            1e-8,
        ),
    ])
}

fn block_checks<R: Rng>(model: &RandomModel, trial: u64, rng: &mut R) -> Result<Vec<Check>> {
    let n = model.n;
    let k = 1 + (trial as usize / 5) % (n - 1);
    let b = model.random_tangent(rng).hs().clone();
    let dec = block_decompose(&b, k)?;

    let mut foot_mat = CMatrix::identity(n, n);
    let ea = crate::opalg::exp_hermitian_matrix(&dec.a)?;
    let mut corner = CMatrix::zeros(n, n);
    for i in 0..k {
        for j in 0..k {
            foot_mat[(i, j)] = ea[(i, j)];
        }
    }
    for i in 0..(n - k) {
        for j in 0..k {
            corner[(k + i, j)] = dec.y[(i, j)];
            corner[(j, k + i)] = dec.y[(i, j)].conj();
        }
        for j in 0..(n - k) {
            corner[(k + i, k + j)] = dec.x[(i, j)];
        }
    }
    let foot = ConePoint::from_parts(1.0, &foot_mat - CMatrix::identity(n, n))?;
    let normal = UnitizedHermitian::from_hs(corner)?;
    let target = mat_exp(&UnitizedHermitian::from_hs(b)?);
    let d = distance(&foot, &target)?;

    let eah = crate::opalg::exp_hermitian_matrix(&(&dec.a * Complex64::new(-0.5, 0.0)))?;
    let coupling = &dec.y * &eah;
    let identity_gap =
        d * d - (8.0 * coupling.norm_squared() + 4.0 * dec.x.norm_squared());
    Ok(vec![
        Check::new(
            "corner splitting reconstructs the exponential",
            distance(&exp_point(&foot, &normal)?, &target)?,
            1e-7,
        ),
        Check::new(
            "corner splitting distance identity holds",
            identity_gap.abs(),
            1e-7 * (1.0 + d * d),
        ),
    ])
}

fn block_polar_checks<R: Rng>(model: &RandomModel, trial: u64, rng: &mut R) -> Result<Vec<Check>> {
    let n = model.n;
    let k = 1 + (trial as usize / 5) % (n - 1);
    let g = model.random_operator(rng);
    let bp = full_block_polar(&g, k)?;

    let mut rmat = CMatrix::zeros(n, n);
    for i in 0..k {
        for j in 0..k {
            rmat[(i, j)] = bp.r[(i, j)];
        }
    }
    let r_full = UnitizedOperator::new(Complex64::new(1.0, 0.0), &rmat - {
        let mut top = CMatrix::zeros(n, n);
        for i in 0..k {
            top[(i, i)] = Complex64::new(1.0, 0.0);
        }
        top
    })?;
    let rebuilt = (&(&r_full * &mat_exp(&bp.v).op().to_operator()) * &bp.u)
        .scale_c(Complex64::new(bp.lambda, 0.0));
    let defect = (&(&bp.u * &bp.u.adjoint()) - &UnitizedOperator::unit(n)).hs_norm();
    let vmat = bp.v.materialize();
    let top_left = vmat.view((0, 0), (k, k)).norm();
    Ok(vec![
        Check::new(
            "scaled corner polar reconstructs the operator",
            (&rebuilt - &g).hs_norm() / g.hs_norm().max(1.0),
            1e-7,
        ),
        Check::new("scaled corner polar leaves a unitary remainder", defect, 1e-9),
        Check::new(
            "scaled corner polar exponent avoids the corner block",
            (top_left + bp.v.scalar().abs()) / bp.v.hs_norm().max(1.0),
            1e-7,
        ),
    ])
}

/// The factorizations built on the projection, one kind per trial:
/// two sided splittings, diagonal splittings, relative polar forms,
/// corner splittings, and the scaled corner polar form.
pub(super) fn decomposition(model: &RandomModel, trial: u64) -> Result<Vec<Check>> {
    let mut rng = model.rng_for(trial);
    let kind = if model.n >= 2 { trial % 5 } else { trial % 3 };
    match kind {
        0 => mvm_checks(model, trial, &mut rng),
        1 => diag_checks(model, &mut rng),
        2 => polar_checks(model, &mut rng),
        3 => block_checks(model, trial, &mut rng),
        _ => block_polar_checks(model, trial, &mut rng),
    }
}

/// The scalar foliation: leaf projections are isometries that realize
/// the leaf distance, the leaf and scale coordinates split the metric
/// as a product, and vertical directions are orthogonal and flat.
pub(super) fn foliation(model: &RandomModel, trial: u64) -> Result<Vec<Check>> {
    let mut rng = model.rng_for(trial);
    let p = model.random_point(&mut rng);
    let q = model.random_point(&mut rng);
    let mut checks = Vec::new();

    let a = leaf_project(&p, 2.0)?;
    let b = leaf_project(&q, 2.0)?;
    let before = distance(&a, &b)?;
    let after = distance(&leaf_project(&a, 5.0)?, &leaf_project(&b, 5.0)?)?;
    checks.push(Check::new(
        "projection between leaves is an isometry",
        (before - after).abs(),
        1e-10,
    ));

    let (s1p, lp) = split(&p);
    let (s1q, lq) = split(&q);
    let d = distance(&p, &q)?;
    let horizontal = distance(&s1p, &s1q)?;
    let vertical = (lp / lq).ln();
    checks.push(Check::new(
        "splitting into leaf and scale is a metric product",
        (d * d - horizontal * horizontal - vertical * vertical).abs(),
        1e-8,
    ));
    let back = unsplit(&s1p, lp)?;
    checks.push(Check::new(
        "roundtrip through the splitting is the identity",
        (back.op() - p.op()).hs_norm() / p.op().hs_norm(),
        1e-12,
    ));

    let target = rng.random_range(0.5..4.0);
    let dropped = leaf_project(&p, target)?;
    checks.push(Check::new(
        "distance to a leaf is the log ratio of scales",
        (distance(&p, &dropped)? - (leaf_of(&p) / target).ln().abs()).abs(),
        1e-12,
    ));

    let velocity = log_point(&p, &dropped)?;
    let w = random_leaf_tangent(model, &mut rng);
    checks.push(Check::new(
        "vertical geodesics cross leaves orthogonally",
        metric_at(&p, &velocity, &w)?.abs(),
        1e-9,
    ));

    let ratio = target / leaf_of(&p);
    let moved = parallel_transport(&p, &dropped, &w)?;
    checks.push(Check::new(
        "leaf projection transports leaf tangents",
        (&moved - &w.scale(ratio)).hs_norm() / w.hs_norm().max(1.0),
        1e-9,
    ));

    checks.push(Check::new(
        "vertical planes are flat",
        sectional(&p, &w, p.op())?.abs(),
        1e-12,
    ));
    Ok(checks)
}
