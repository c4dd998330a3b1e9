//! Normally ordered functional calculus `f(T, S) = Σ_n f_n(T) Sⁿ`.
//!
//! Only exactly finite sums are computed: `S^k` must vanish at the
//! truncation order `k` of the series.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::koszul::{Axis, AxisPoint};
use crate::linalg::{self, CMatrix};
use crate::qpair::{QPair, ToleranceConfig};
use crate::qseries::QSeries;
use crate::qtopology::{open_member, putinar_spectrum, Geometry, QOpenSet};

#[derive(Debug, Clone)]
pub struct CalculusResult {
    pub value: CMatrix,
    /// `‖S^k‖_max` at the truncation order `k`.
    pub nilpotency_residual: f64,
    pub admissibility: Option<Admissibility>,
}

fn horner(coeffs: &[Complex64], t: &CMatrix) -> CMatrix {
    let n = t.nrows();
    let mut acc = CMatrix::zeros(n, n);
    for c in coeffs.iter().rev() {
        acc = &acc * t + linalg::identity(n) * *c;
    }
    acc
}

pub fn evaluate(f: &QSeries, pair: &QPair, cfg: &ToleranceConfig) -> Result<CalculusResult> {
    if f.q() != &pair.q().value() {
        return Err(Error::QMismatch);
    }
    let n = pair.dim();
    let k = f.y_order();
    let s = pair.s();
    let scale = linalg::max_norm(s).max(1.0);
    let sk = linalg::mat_pow(s, k);
    let nilpotency_residual = linalg::max_norm(&sk);
    if nilpotency_residual > cfg.rank_tol * scale.powi(k as i32) {
        return Err(Error::NotNilpotent { order: k, residual: nilpotency_residual });
    }
    let mut value = CMatrix::zeros(n, n);
    let mut sp = linalg::identity(n);
    for j in 0..k {
        value += horner(f.y_component(j), pair.t()) * &sp;
        sp = &sp * s;
    }
    Ok(CalculusResult { value, nilpotency_residual, admissibility: None })
}

/// `Σ |c_ij| ‖T‖^i ‖S‖^j` with Frobenius norms; bounds `‖f(T,S)‖`.
pub fn majorant(f: &QSeries, pair: &QPair) -> f64 {
    let (nt, ns) = (pair.t().norm(), pair.s().norm());
    let mut acc = 0.0;
    for j in 0..f.y_order() {
        for i in 0..f.x_order() {
            acc += f.coeff(i, j).norm() * nt.powi(i as i32) * ns.powi(j as i32);
        }
    }
    acc
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HomomorphismReport {
    /// `‖f·g(T,S) − f(T,S)g(T,S)‖_max`.
    pub residual: f64,
    /// `1 + majorant(f)·majorant(g)`.
    pub scale: f64,
}

impl HomomorphismReport {
    pub fn relative(&self) -> f64 {
        self.residual / self.scale
    }
}

/// Evaluates both sides of `(fg)(T,S) = f(T,S) g(T,S)`.
///
/// Both series are lifted to a common box whose x-order is large enough to
/// hold every product term, so x-truncation loses nothing; y-truncation is
/// harmless because `S^k = 0` is required anyway.
pub fn homomorphism_check(f: &QSeries, g: &QSeries, pair: &QPair, cfg: &ToleranceConfig) -> Result<HomomorphismReport> {
    let m = (f.x_order() + g.x_order()).saturating_sub(1).max(1);
    let k = f.y_order().max(g.y_order());
    let (fl, gl) = (f.lift(m, k), g.lift(m, k));
    let prod = fl.q_mul(&gl)?;
    let lhs = evaluate(&prod, pair, cfg)?.value;
    let rhs = evaluate(&fl, pair, cfg)?.value * evaluate(&gl, pair, cfg)?.value;
    Ok(HomomorphismReport {
        residual: linalg::max_norm(&(lhs - rhs)),
        scale: 1.0 + majorant(f, pair) * majorant(g, pair),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    /// A point of the Putinar spectrum outside the open set.
    pub witness: Option<AxisPoint>,
    pub reason: String,
}

/// Whether the Putinar spectrum of the pair in `geometry` lies inside `U`.
///
/// Each generator is checked against its whole closure: a nonzero point on
/// a 𝔮 axis needs its backward orbit in `U`, which happens only if the axis
/// is whole or a sector holds the point; on a 𝔡 axis the closure is
/// unbounded so the axis must be covered; the origin drags in every axis of
/// the spectrum space.
pub fn calculus_admissible(pair: &QPair, u: &QOpenSet, geometry: Geometry, cfg: &ToleranceConfig) -> Result<Admissibility> {
    let ps = putinar_spectrum(pair, geometry, cfg)?;
    let q = pair.q();
    let ok = |reason: &str| Admissibility { admissible: true, witness: None, reason: reason.into() };
    let fail = |w: AxisPoint, reason: String| Admissibility { admissible: false, witness: Some(w), reason };
    let (tx, ty) = geometry.topologies();
    for g in &ps.closed.generators {
        if !open_member(u, g, q, cfg)? {
            return Ok(fail(*g, format!("spectrum point {g} is not in the open set")));
        }
        match g.axis() {
            None => {
                for (axis, topo) in [(Axis::X, tx), (Axis::Y, ty)] {
                    if topo.is_some() {
                        if let Some(w) = u.point_outside(axis, q) {
                            return Ok(fail(w, format!("closure of the origin is the whole {axis:?} axis")));
                        }
                    }
                }
            }
            Some(axis) => {
                let topo = if axis == Axis::X { tx } else { ty };
                if u.covers_axis(axis) {
                    continue;
                }
                match topo {
                    Some(crate::qtopology::AxisTopology::Spiral) => {
                        // walk the backward orbit; sectors hold it entirely
                        let mut w = *g;
                        let mut escaped = None;
                        for _ in 0..4096 {
                            if !open_member(u, &w, q, cfg)? {
                                escaped = Some(w);
                                break;
                            }
                            if u.parts.iter().any(|p| {
                                Axis::from(p.axis) == axis
                                    && p.sectors.iter().any(|s| s.half_width > 0.0 && s.contains(w.coordinate(), q))
                            }) {
                                break;
                            }
                            w = AxisPoint::on_axis(axis, w.coordinate() * q.inv());
                        }
                        if let Some(w) = escaped {
                            return Ok(fail(w, format!("backward orbit of {g} leaves the open set")));
                        }
                    }
                    Some(crate::qtopology::AxisTopology::Disk) => {
                        let w = u.point_outside(axis, q).unwrap_or(*g);
                        return Ok(fail(w, format!("disk closure of {g} is unbounded")));
                    }
                    None => {}
                }
            }
        }
    }
    if ps.closed.is_empty() {
        return Ok(ok("Putinar spectrum is empty"));
    }
    Ok(ok("every generator closure lies in the open set"))
}

/// Evaluation together with the admissibility report.
pub fn evaluate_in(f: &QSeries, pair: &QPair, u: &QOpenSet, geometry: Geometry, cfg: &ToleranceConfig) -> Result<CalculusResult> {
    let adm = calculus_admissible(pair, u, geometry, cfg)?;
    let mut r = evaluate(f, pair, cfg)?;
    r.admissibility = Some(adm);
    Ok(r)
}
