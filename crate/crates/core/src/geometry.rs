//! Trace metric, geodesics, curvature and the symmetric-space structure
//! of the cone.
//!
//! The metric at a point `p` rescales the ambient trace form by
//! congruence with `p^{-1/2}`. Geodesics, the exponential map and its
//! inverse, parallel transport and the curvature tensor all come in
//! closed form, so the only iteration anywhere in this module is the
//! quadrature used for path lengths.

use crate::error::{Error, Result};
use crate::opalg::{
    commutator, congruence, frechet_exp, mat_exp, ConePoint, UnitizedHermitian,
};

fn same_dims(a: usize, b: usize) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::Dimension { left: a, right: b })
    }
}

/// Riemannian inner product `<x, y>_p = <p^{-1/2} x p^{-1/2}, p^{-1/2} y p^{-1/2}>`.
pub fn metric_at(p: &ConePoint, x: &UnitizedHermitian, y: &UnitizedHermitian) -> Result<f64> {
    same_dims(p.dim(), x.dim())?;
    same_dims(p.dim(), y.dim())?;
    let gis = p.inv_sqrt().op().to_operator();
    Ok(congruence(&gis, x).hs_inner(&congruence(&gis, y)))
}

/// Norm induced by [`metric_at`].
pub fn norm_at(p: &ConePoint, x: &UnitizedHermitian) -> Result<f64> {
    Ok(metric_at(p, x, x)?.max(0.0).sqrt())
}

/// Exponential map `Exp_p(v) = p^{1/2} exp(p^{-1/2} v p^{-1/2}) p^{1/2}`.
pub fn exp_point(p: &ConePoint, v: &UnitizedHermitian) -> Result<ConePoint> {
    same_dims(p.dim(), v.dim())?;
    let ps = p.sqrt().op().to_operator();
    let pis = p.inv_sqrt().op().to_operator();
    let inner = mat_exp(&congruence(&pis, v));
    ConePoint::certify(congruence(&ps, inner.op()))
}

/// Inverse of the exponential map,
/// `Log_p(q) = p^{1/2} ln(p^{-1/2} q p^{-1/2}) p^{1/2}`.
pub fn log_point(p: &ConePoint, q: &ConePoint) -> Result<UnitizedHermitian> {
    same_dims(p.dim(), q.dim())?;
    let ps = p.sqrt().op().to_operator();
    let pis = p.inv_sqrt().op().to_operator();
    let inner = ConePoint::certify(congruence(&pis, q.op()))?;
    Ok(congruence(&ps, &inner.log()))
}

/// Point of the unique geodesic through `p` and `q`,
/// `gamma(t) = p^{1/2} (p^{-1/2} q p^{-1/2})^t p^{1/2}`.
///
/// `t = 0` gives `p`, `t = 1` gives `q`, and the parameter may run
/// outside `[0, 1]`; the geodesic is defined for all real `t`.
pub fn geodesic_eval(p: &ConePoint, q: &ConePoint, t: f64) -> Result<ConePoint> {
    same_dims(p.dim(), q.dim())?;
    let ps = p.sqrt().op().to_operator();
    let pis = p.inv_sqrt().op().to_operator();
    let inner = ConePoint::certify(congruence(&pis, q.op()))?;
    ConePoint::certify(congruence(&ps, inner.pow(t).op()))
}

/// Geodesic distance `dist(p, q) = || ln(p^{1/2} q^{-1} p^{1/2}) ||`.
pub fn distance(p: &ConePoint, q: &ConePoint) -> Result<f64> {
    same_dims(p.dim(), q.dim())?;
    let ps = p.sqrt().op().to_operator();
    let inner = ConePoint::certify(congruence(&ps, q.inv().op()))?;
    Ok(inner.log().hs_norm())
}

/// Parallel transport of `w` from `T_p` to `T_q` along the geodesic
/// joining them: congruence with
/// `g = p^{1/2} (p^{-1/2} q p^{-1/2})^{1/2} p^{-1/2}`.
pub fn parallel_transport(
    p: &ConePoint,
    q: &ConePoint,
    w: &UnitizedHermitian,
) -> Result<UnitizedHermitian> {
    same_dims(p.dim(), q.dim())?;
    same_dims(p.dim(), w.dim())?;
    let ps = p.sqrt().op().to_operator();
    let pis = p.inv_sqrt().op().to_operator();
    let mid = ConePoint::certify(congruence(&pis, q.op()))?.sqrt();
    let g = &(&ps * &mid.op().to_operator()) * &pis;
    Ok(congruence(&g, w))
}

/// Curvature tensor
/// `R_p(x, y) z = -1/4 p [[p^{-1} x, p^{-1} y], p^{-1} z]`.
///
/// The scalar coordinate of the result is exactly zero, since scalars
/// commute out of every bracket.
pub fn curvature(
    p: &ConePoint,
    x: &UnitizedHermitian,
    y: &UnitizedHermitian,
    z: &UnitizedHermitian,
) -> Result<UnitizedHermitian> {
    for v in [x, y, z] {
        same_dims(p.dim(), v.dim())?;
    }
    let pinv = p.inv().op().to_operator();
    let px = &pinv * &x.to_operator();
    let py = &pinv * &y.to_operator();
    let pz = &pinv * &z.to_operator();
    let inner = commutator(&commutator(&px, &py), &pz);
    let r = &p.op().to_operator() * &inner;
    Ok(r.scale_c(crate::opalg::cplx(-0.25)).hermitian_part())
}

/// Sectional curvature of the plane spanned by `x, y` at `p`:
/// `<R_p(x, y) y, x>_p` over the squared area of the parallelogram.
///
/// Returns `Degenerate` when `x` and `y` are linearly dependent, since
/// the plane (and the normalizer) collapses.
pub fn sectional(p: &ConePoint, x: &UnitizedHermitian, y: &UnitizedHermitian) -> Result<f64> {
    let num = metric_at(p, &curvature(p, x, y, y)?, x)?;
    let nx = metric_at(p, x, x)?;
    let ny = metric_at(p, y, y)?;
    let xy = metric_at(p, x, y)?;
    let den = nx * ny - xy * xy;
    if den <= 1e-12 * nx * ny {
        return Err(Error::Degenerate(
            "plane section spanned by dependent vectors".into(),
        ));
    }
    Ok(num / den)
}

/// Geodesic symmetry `s_p(q) = p q^{-1} p`, the isometry fixing `p` that
/// reverses geodesics through it.
pub fn symmetry(p: &ConePoint, q: &ConePoint) -> Result<ConePoint> {
    same_dims(p.dim(), q.dim())?;
    let po = p.op().to_operator();
    let prod = &(&po * &q.inv().op().to_operator()) * &po;
    ConePoint::certify(prod.hermitian_part())
}

/// One-parameter transvection group along the geodesic from `p` towards
/// `q`, applied to `r`: the composition of the symmetries at
/// `gamma(t/2)` and at `p`. It translates the geodesic by `t` and
/// transports tangent data without holonomy along it.
pub fn transvection(p: &ConePoint, q: &ConePoint, t: f64, r: &ConePoint) -> Result<ConePoint> {
    same_dims(p.dim(), q.dim())?;
    same_dims(p.dim(), r.dim())?;
    let mid = geodesic_eval(p, q, 0.5 * t)?;
    let g = &mid.op().to_operator() * &p.inv().op().to_operator();
    ConePoint::certify(congruence(&g, r.op()))
}

/// Covariant derivative of a sampled field along a sampled curve at the
/// interior node `i`, by central differences with step `h`:
/// `D_t Y = Y' - (c' c^{-1} Y + Y c^{-1} c') / 2`.
pub fn covariant_derivative(
    curve: &[ConePoint],
    field: &[UnitizedHermitian],
    i: usize,
    h: f64,
) -> Result<UnitizedHermitian> {
    if curve.len() != field.len() {
        return Err(Error::Dimension {
            left: curve.len(),
            right: field.len(),
        });
    }
    if i == 0 || i + 1 >= curve.len() {
        return Err(Error::Index(format!(
            "central differences need an interior node, got {} of {}",
            i,
            curve.len()
        )));
    }
    if !(h > 0.0) {
        return Err(Error::Domain("step must be positive".into()));
    }
    let n = curve[i].dim();
    for p in curve {
        same_dims(n, p.dim())?;
    }
    for w in field {
        same_dims(n, w.dim())?;
    }
    let ydot = (&field[i + 1] - &field[i - 1]).scale(1.0 / (2.0 * h));
    let cdot = (curve[i + 1].op() - curve[i - 1].op()).scale(1.0 / (2.0 * h));
    let pinv = curve[i].inv().op().to_operator();
    // c' c^{-1} Y and its adjoint Y c^{-1} c' average to the Hermitian part.
    let t1 = &(&cdot.to_operator() * &pinv) * &field[i].to_operator();
    Ok(&ydot - &t1.hermitian_part())
}

/// Jacobi field `J(t)` of the geodesic variation
/// `(s, t) -> Exp_p(t (v + s w))`, evaluated at `t`.
///
/// `J(0) = 0`, its covariant derivative at zero is `w`, and its norm is
/// convex in `t` because the curvature is nonpositive.
pub fn jacobi_field(
    p: &ConePoint,
    v: &UnitizedHermitian,
    w: &UnitizedHermitian,
    t: f64,
) -> Result<UnitizedHermitian> {
    same_dims(p.dim(), v.dim())?;
    same_dims(p.dim(), w.dim())?;
    let ps = p.sqrt().op().to_operator();
    let pis = p.inv_sqrt().op().to_operator();
    let vbar = congruence(&pis, v).scale(t);
    let wbar = congruence(&pis, w).scale(t);
    let d = frechet_exp(&vbar, &wbar)?;
    Ok(congruence(&ps, &d))
}

/// Length of the piecewise-geodesic path through the given waypoints,
/// by composite Simpson quadrature on `norm_at(c(t), c'(t))` with about
/// `total_nodes` quadrature nodes spread over the segments.
///
/// Velocities use the closed form
/// `c'(s) = a^{1/2} m^s ln(m) a^{1/2)` with `m = a^{-1/2} b a^{-1/2}`
/// on the segment from `a` to `b`.
pub fn path_length(waypoints: &[ConePoint], total_nodes: usize) -> Result<f64> {
    if waypoints.len() < 2 {
        return Err(Error::Degenerate(
            "a path needs at least two waypoints".into(),
        ));
    }
    let n = waypoints[0].dim();
    for p in waypoints {
        same_dims(n, p.dim())?;
    }
    let segments = waypoints.len() - 1;
    // Even interval count per segment, splitting the node budget.
    let per = ((total_nodes.max(3) - 1) / segments).max(2);
    let per = per + per % 2;
    let mut total = 0.0;
    for seg in waypoints.windows(2) {
        let a = &seg[0];
        let b = &seg[1];
        let asq = a.sqrt().op().to_operator();
        let ais = a.inv_sqrt().op().to_operator();
        let m = ConePoint::certify(congruence(&ais, b.op()))?;
        let lm = m.log().to_operator();
        let hstep = 1.0 / per as f64;
        let mut acc = 0.0;
        for k in 0..=per {
            let s = k as f64 * hstep;
            let ms = m.pow(s);
            let pt = ConePoint::certify(congruence(&asq, ms.op()))?;
            let vel = congruence(&asq, &(&ms.op().to_operator() * &lm).hermitian_part());
            let speed = norm_at(&pt, &vel)?;
            let weight = if k == 0 || k == per {
                1.0
            } else if k % 2 == 1 {
                4.0
            } else {
                2.0
            };
            acc += weight * speed;
        }
        total += acc * hstep / 3.0;
    }
    Ok(total)
}
