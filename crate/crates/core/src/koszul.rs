//! Koszul complex of a q-pair at a character of the quantum plane, and the
//! Taylor spectrum assembled from it.
//!
//! At `λ = (λ₁, λ₂)` with `λ₁λ₂ = 0` the complex is
//!
//! ```text
//! 0 → X --δ₂--> X ⊕ X --δ₁--> X → 0
//! δ₂ ξ        = (−(S − q⁻¹λ₂)ξ, (q⁻¹T − λ₁)ξ)
//! δ₁(ξ₁, ξ₂)  = (T − λ₁)ξ₁ + (S − λ₂)ξ₂
//! ```
//!
//! and `δ₁δ₂ = −TS + q⁻¹ST + λ₁λ₂(1 − q⁻¹)`, which vanishes on the axes.

use std::cmp::Ordering;

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homology::{self, CochainComplex, HomologyReport};
use crate::json;
use crate::linalg::{self, CMatrix};
use crate::qpair::{operator_spectrum, QPair, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AxisPoint {
    #[serde(with = "json::complex")]
    pub l1: Complex64,
    #[serde(with = "json::complex")]
    pub l2: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

impl AxisPoint {
    pub fn new(l1: Complex64, l2: Complex64, tol: f64) -> Result<Self> {
        let p = Self { l1, l2 };
        if !p.is_on_axes(tol) {
            return Err(Error::OffAxisPoint { l1, l2 });
        }
        Ok(p)
    }

    pub fn origin() -> Self {
        Self { l1: Complex64::zero(), l2: Complex64::zero() }
    }

    pub fn x(z: Complex64) -> Self {
        Self { l1: z, l2: Complex64::zero() }
    }

    pub fn y(z: Complex64) -> Self {
        Self { l1: Complex64::zero(), l2: z }
    }

    pub fn is_on_axes(&self, tol: f64) -> bool {
        (self.l1 * self.l2).norm() <= tol * (1.0 + self.l1.norm()) * (1.0 + self.l2.norm())
    }

    pub fn is_origin(&self) -> bool {
        self.l1.is_zero() && self.l2.is_zero()
    }

    /// The axis a nonzero point lies on; `None` for the origin.
    pub fn axis(&self) -> Option<Axis> {
        if self.is_origin() {
            None
        } else if self.l2.is_zero() || self.l1.norm() >= self.l2.norm() {
            Some(Axis::X)
        } else {
            Some(Axis::Y)
        }
    }

    /// Coordinate along the point's own axis.
    pub fn coordinate(&self) -> Complex64 {
        match self.axis() {
            Some(Axis::Y) => self.l2,
            Some(Axis::X) => self.l1,
            None => Complex64::zero(),
        }
    }

    pub fn on_axis(axis: Axis, z: Complex64) -> Self {
        match axis {
            Axis::X => Self::x(z),
            Axis::Y => Self::y(z),
        }
    }

    pub fn close_to(&self, other: &AxisPoint, tol: f64) -> bool {
        linalg::close(self.l1, other.l1, tol) && linalg::close(self.l2, other.l2, tol)
    }

    pub fn cmp_lex(&self, other: &AxisPoint) -> Ordering {
        linalg::cmp_complex(&self.l1, &other.l1).then(linalg::cmp_complex(&self.l2, &other.l2))
    }

    fn canonical(mut self) -> Self {
        self.l1 = json::from_cjson(json::to_cjson(self.l1));
        self.l2 = json::from_cjson(json::to_cjson(self.l2));
        self
    }
}

impl std::fmt::Display for AxisPoint {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.l1, self.l2)
    }
}

#[derive(Debug, Clone)]
pub struct KoszulComplex {
    pub point: AxisPoint,
    pub complex: CochainComplex,
}

impl KoszulComplex {
    pub fn delta2(&self) -> &CMatrix {
        &self.complex.maps()[0]
    }
    pub fn delta1(&self) -> &CMatrix {
        &self.complex.maps()[1]
    }

    /// `‖δ₁δ₂‖_max`.
    pub fn composite_residual(&self) -> f64 {
        linalg::max_norm(&(self.delta1() * self.delta2()))
    }

    /// `1 + ‖T‖‖S‖ + |λ|²`, the size of the terms cancelling in `δ₁δ₂`.
    pub fn scale(&self, pair: &QPair) -> f64 {
        let lam = self.point.l1.norm().max(self.point.l2.norm());
        1.0 + linalg::max_norm(pair.t()) * linalg::max_norm(pair.s()) * pair.dim() as f64 + lam * lam
    }
}

pub fn build_koszul(pair: &QPair, point: AxisPoint) -> Result<KoszulComplex> {
    if !point.is_on_axes(pair.tolerances().point_match_tol) {
        return Err(Error::OffAxisPoint { l1: point.l1, l2: point.l2 });
    }
    let n = pair.dim();
    let qi = pair.q().inv();
    let id = linalg::identity(n);
    let (t, s) = (pair.t(), pair.s());
    let mut d2 = CMatrix::zeros(2 * n, n);
    d2.view_mut((0, 0), (n, n)).copy_from(&(-(s - &id * (qi * point.l2))));
    d2.view_mut((n, 0), (n, n)).copy_from(&(t * qi - &id * point.l1));
    let mut d1 = CMatrix::zeros(n, 2 * n);
    d1.view_mut((0, 0), (n, n)).copy_from(&(t - &id * point.l1));
    d1.view_mut((0, n), (n, n)).copy_from(&(s - &id * point.l2));
    let complex = CochainComplex::new(vec![n, 2 * n, n], vec![d2, d1])?;
    Ok(KoszulComplex { point, complex })
}

/// Homology of the Koszul complex without raising on rank ambiguity.
pub fn koszul_report(pair: &QPair, point: AxisPoint, cfg: &ToleranceConfig) -> Result<HomologyReport> {
    let k = build_koszul(pair, point)?;
    homology::homology_report(&k.complex, cfg)
}

pub fn is_transversal(pair: &QPair, point: AxisPoint, cfg: &ToleranceConfig) -> Result<bool> {
    Ok(koszul_report(pair, point, cfg)?.into_result()?.is_exact())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaylorSpectrum {
    pub taylor: Vec<AxisPoint>,
    pub undecided: Vec<AxisPoint>,
    #[serde(skip)]
    pub candidates: Vec<AxisPoint>,
}

impl TaylorSpectrum {
    pub fn contains(&self, p: &AxisPoint, tol: f64) -> bool {
        self.taylor.iter().any(|t| t.close_to(p, tol))
    }
}

fn sort_points(v: &mut [AxisPoint]) {
    v.sort_by(|a, b| a.cmp_lex(b));
}

/// `{(μ,0): μ ∈ σ(T) ∪ q⁻¹σ(T)} ∪ {(0,ν): ν ∈ σ(S) ∪ qσ(S)} ∪ {(0,0)}`.
pub fn candidate_points(pair: &QPair, cfg: &ToleranceConfig) -> Result<Vec<AxisPoint>> {
    let q = pair.q();
    let mut xs = operator_spectrum(pair.t(), cfg)?;
    let tx: Vec<Complex64> = xs.iter().map(|z| z * q.inv()).collect();
    xs.extend(tx);
    linalg::dedupe_points(&mut xs, cfg.point_match_tol);
    let mut ys = operator_spectrum(pair.s(), cfg)?;
    let ty: Vec<Complex64> = ys.iter().map(|z| z * q.value()).collect();
    ys.extend(ty);
    linalg::dedupe_points(&mut ys, cfg.point_match_tol);
    let mut out = vec![AxisPoint::origin()];
    out.extend(xs.into_iter().filter(|z| !z.is_zero()).map(AxisPoint::x));
    out.extend(ys.into_iter().filter(|z| !z.is_zero()).map(AxisPoint::y));
    let mut out: Vec<AxisPoint> = out.into_iter().map(AxisPoint::canonical).collect();
    sort_points(&mut out);
    Ok(out)
}

pub fn taylor_spectrum(pair: &QPair, cfg: &ToleranceConfig) -> Result<TaylorSpectrum> {
    let candidates = candidate_points(pair, cfg)?;
    let mut taylor = Vec::new();
    let mut undecided = Vec::new();
    for p in &candidates {
        let r = koszul_report(pair, *p, cfg)?;
        if r.ambiguous.is_some() {
            undecided.push(*p);
        } else if !r.is_exact() {
            taylor.push(*p);
        }
    }
    Ok(TaylorSpectrum { taylor, undecided, candidates })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridScan {
    pub points_checked: usize,
    pub radius: f64,
    /// Non-transversal grid points not matching any candidate.
    pub outside: Vec<AxisPoint>,
    /// Grid points whose verdict fell inside the rank guard band.
    pub ambiguous: Vec<AxisPoint>,
}

/// Default scan radius: comfortably past every candidate.
pub fn default_grid_radius(candidates: &[AxisPoint]) -> f64 {
    let m = candidates.iter().map(|p| p.l1.norm().max(p.l2.norm())).fold(0.0, f64::max);
    1.5 * m + 1.0
}

/// Falsification harness: scans an `n × n` grid of `[−R, R]²` on each axis.
pub fn grid_scan(pair: &QPair, cfg: &ToleranceConfig, n: usize, radius: Option<f64>) -> Result<GridScan> {
    let candidates = candidate_points(pair, cfg)?;
    let radius = radius.unwrap_or_else(|| default_grid_radius(&candidates));
    let coords: Vec<f64> = if n <= 1 {
        vec![0.0]
    } else {
        (0..n).map(|i| -radius + 2.0 * radius * i as f64 / (n - 1) as f64).collect()
    };
    let mut outside = Vec::new();
    let mut ambiguous = Vec::new();
    let mut checked = 0;
    for axis in [Axis::X, Axis::Y] {
        for &re in &coords {
            for &im in &coords {
                let p = AxisPoint::on_axis(axis, Complex64::new(re, im));
                let r = koszul_report(pair, p, cfg)?;
                checked += 1;
                if r.ambiguous.is_some() {
                    ambiguous.push(p);
                } else if !r.is_exact() && !candidates.iter().any(|c| c.close_to(&p, cfg.point_match_tol)) {
                    outside.push(p);
                }
            }
        }
    }
    Ok(GridScan { points_checked: checked, radius, outside, ambiguous })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpectrumJson {
    pub taylor: Vec<AxisPoint>,
    pub undecided: Vec<AxisPoint>,
}

impl From<&TaylorSpectrum> for SpectrumJson {
    fn from(t: &TaylorSpectrum) -> Self {
        Self { taylor: t.taylor.clone(), undecided: t.undecided.clone() }
    }
}
