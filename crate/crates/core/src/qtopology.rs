//! Spiral (𝔮) and disk (𝔡) topologies on the axes and Putinar spectra as
//! closures of the Taylor spectrum.
//!
//! A nonempty 𝔮-open set contains the origin and is forward saturated:
//! `z ∈ U ⟹ qz ∈ U`. Closures therefore run backwards:
//! `cl{z} = {q^{-k} z : k ≥ 0}` for `z ≠ 0`, and the origin is generic, its
//! closure is the whole axis. In 𝔡 the opens are origin-centered disks and
//! `cl{z} = {w : |w| ≥ |z|}`.
//!
//! Open sets are finite unions of saturated disks
//! `sat(c, r) = ⋃_{k≥0} q^k D(c, r) ∪ {0}` and of spiral sectors
//! `{z : arg z − κ ln|z| ∈ (φ − h, φ + h) mod 2π} ∪ {0}` with
//! `κ = arg q / ln|q|`. Sectors are invariant under multiplication by `q`
//! in both directions, so they are the only descriptors that can contain a
//! whole backward orbit.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json;
use crate::koszul::{self, Axis, AxisPoint, TaylorSpectrum};
use crate::linalg;
use crate::qpair::{QPair, QParameter, ToleranceConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisTopology {
    /// Spiral topology.
    #[serde(rename = "q")]
    Spiral,
    /// Origin-centered disks.
    #[serde(rename = "d")]
    Disk,
}

/// Smallest `k ≥ 0` candidates with `|q|^k ≈ ratio`.
fn orbit_exponents(ratio: f64, q: QParameter) -> Vec<i64> {
    let k = ratio.ln() / q.modulus().ln();
    if !k.is_finite() {
        return Vec::new();
    }
    let (lo, hi) = (k.floor() as i64 - 1, k.ceil() as i64 + 1);
    (lo.max(0)..=hi).collect()
}

/// `w ∈ cl(G)` in the 𝔮-topology on the axis of `w`.
pub fn q_closure_member(generators: &[AxisPoint], w: &AxisPoint, q: QParameter, cfg: &ToleranceConfig) -> Result<bool> {
    q.require_contractive()?;
    for z in generators {
        if z.is_origin() {
            return Ok(true);
        }
        if w.is_origin() || z.axis() != w.axis() {
            continue;
        }
        let (zc, wc) = (z.coordinate(), w.coordinate());
        for k in orbit_exponents(zc.norm() / wc.norm(), q) {
            if linalg::close(q.value().powi(k as i32) * wc, zc, cfg.point_match_tol) {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

/// `w ∈ cl(G)` in the 𝔡-topology.
pub fn disk_closure_member(generators: &[AxisPoint], w: &AxisPoint, cfg: &ToleranceConfig) -> bool {
    generators.iter().any(|z| {
        z.is_origin()
            || (!w.is_origin() && z.axis() == w.axis() && z.coordinate().norm() <= w.coordinate().norm() + cfg.point_match_tol)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    #[serde(with = "json::complex")]
    pub c: Complex64,
    pub r: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    /// Phase of the spiral center line.
    pub phase: f64,
    pub half_width: f64,
}

fn wrap(a: f64) -> f64 {
    let t = (a + PI).rem_euclid(TAU) - PI;
    if t <= -PI {
        t + TAU
    } else {
        t
    }
}

/// Spiral coordinate `arg z − κ ln|z|`, constant along q-orbits.
pub fn spiral_angle(z: Complex64, q: QParameter) -> f64 {
    let kappa = q.value().arg() / q.modulus().ln();
    wrap(z.arg() - kappa * z.norm().ln())
}

impl Sector {
    pub fn contains(&self, z: Complex64, q: QParameter) -> bool {
        self.half_width >= PI || wrap(spiral_angle(z, q) - self.phase).abs() < self.half_width
    }
}

/// One axis part of a 𝔮- or 𝔡-open set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxisOpen {
    pub axis: AxisName,
    #[serde(default)]
    pub disks: Vec<Disk>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub sectors: Vec<Sector>,
    #[serde(default)]
    pub whole: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum AxisName {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
}

impl From<AxisName> for Axis {
    fn from(a: AxisName) -> Self {
        match a {
            AxisName::X => Axis::X,
            AxisName::Y => Axis::Y,
        }
    }
}

impl AxisOpen {
    pub fn is_empty(&self) -> bool {
        !self.whole && self.disks.iter().all(|d| d.r <= 0.0) && self.sectors.iter().all(|s| s.half_width <= 0.0)
    }

    /// `z ∈ sat(c, r)` iff `z = 0` or `|q^{-k} z − c| < r` for some `k ≥ 0`.
    fn disk_member(d: &Disk, z: Complex64, q: QParameter) -> bool {
        if d.r <= 0.0 {
            return false;
        }
        if z.is_zero() {
            return true;
        }
        let qi = q.inv();
        let stop = d.c.norm() + d.r;
        let mut w = z;
        while w.norm() < stop {
            if (w - d.c).norm() < d.r {
                return true;
            }
            w *= qi;
        }
        false
    }

    pub fn contains(&self, z: Complex64, q: QParameter) -> bool {
        if self.is_empty() {
            return false;
        }
        if self.whole || z.is_zero() {
            return true;
        }
        self.sectors.iter().any(|s| s.half_width > 0.0 && s.contains(z, q))
            || self.disks.iter().any(|d| Self::disk_member(d, z, q))
    }

    /// An angle of the spiral coordinate not covered by any sector, if any.
    pub fn uncovered_angle(&self) -> Option<f64> {
        if self.whole {
            return None;
        }
        let mut iv: Vec<(f64, f64)> = Vec::new();
        for s in &self.sectors {
            if s.half_width >= PI {
                return None;
            }
            if s.half_width <= 0.0 {
                continue;
            }
            let a = wrap(s.phase) - s.half_width;
            for shift in [-TAU, 0.0, TAU] {
                iv.push((a + shift, a + 2.0 * s.half_width + shift));
            }
        }
        let mut cur = -PI;
        while cur <= PI {
            let best = iv.iter().filter(|(a, b)| *a < cur && cur < *b).map(|&(_, b)| b).fold(f64::NAN, f64::max);
            if best.is_nan() {
                return Some(cur);
            }
            cur = best;
        }
        None
    }

    /// Whether every nonzero point of the axis lies in the set.
    pub fn covers_axis(&self) -> bool {
        self.whole || (!self.sectors.is_empty() && self.uncovered_angle().is_none())
    }
}

/// A 𝔮-open (or 𝔡-open) subset of `ℂ_x ∪ ℂ_y`. Axes without a part
/// contribute nothing; the origin lies in the set as soon as any part is
/// nonempty.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QOpenSet {
    pub parts: Vec<AxisOpen>,
}

impl QOpenSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_parts(parts: Vec<AxisOpen>) -> Self {
        Self { parts }
    }

    /// `sat(c, r)` on one axis.
    pub fn saturated_disk(axis: Axis, c: Complex64, r: f64) -> Self {
        Self::from_parts(vec![AxisOpen {
            axis: match axis {
                Axis::X => AxisName::X,
                Axis::Y => AxisName::Y,
            },
            disks: vec![Disk { c, r }],
            sectors: vec![],
            whole: false,
        }])
    }

    pub fn whole() -> Self {
        Self::from_parts(vec![
            AxisOpen { axis: AxisName::X, disks: vec![], sectors: vec![], whole: true },
            AxisOpen { axis: AxisName::Y, disks: vec![], sectors: vec![], whole: true },
        ])
    }

    pub fn union(mut self, other: QOpenSet) -> Self {
        self.parts.extend(other.parts);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(AxisOpen::is_empty)
    }

    fn parts_on(&self, axis: Axis) -> impl Iterator<Item = &AxisOpen> {
        self.parts.iter().filter(move |p| Axis::from(p.axis) == axis && !p.is_empty())
    }

    pub fn covers_axis(&self, axis: Axis) -> bool {
        let parts: Vec<&AxisOpen> = self.parts_on(axis).collect();
        if parts.iter().any(|p| p.whole) {
            return true;
        }
        let merged = AxisOpen {
            axis: AxisName::X,
            disks: vec![],
            sectors: parts.iter().flat_map(|p| p.sectors.iter().copied()).collect(),
            whole: false,
        };
        merged.covers_axis()
    }

    /// A nonzero point on `axis` outside the set, when one exists.
    pub fn point_outside(&self, axis: Axis, q: QParameter) -> Option<AxisPoint> {
        if self.covers_axis(axis) {
            return None;
        }
        let sectors: Vec<Sector> = self.parts_on(axis).flat_map(|p| p.sectors.iter().copied()).collect();
        let merged = AxisOpen { axis: AxisName::X, disks: vec![], sectors, whole: false };
        let theta = merged.uncovered_angle().unwrap_or(0.0);
        // walk outwards along the uncovered spiral until no disk reaches
        let kappa = q.value().arg() / q.modulus().ln();
        let mut rad: f64 = 1.0;
        for _ in 0..2000 {
            let z = Complex64::from_polar(rad, theta + kappa * rad.ln());
            let p = AxisPoint::on_axis(axis, z);
            if !self.contains_unchecked(&p, q) {
                return Some(p);
            }
            rad *= 2.0;
        }
        None
    }

    fn contains_unchecked(&self, z: &AxisPoint, q: QParameter) -> bool {
        if self.is_empty() {
            return false;
        }
        match z.axis() {
            None => true,
            Some(axis) => self.parts_on(axis).any(|p| p.contains(z.coordinate(), q)),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text)?;
        let parts: Vec<AxisOpen> = if v.is_array() {
            serde_json::from_value(v)?
        } else {
            vec![serde_json::from_value(v)?]
        };
        for p in &parts {
            if p.disks.iter().any(|d| !(d.r.is_finite() && d.r >= 0.0)) {
                return Err(Error::InvalidInput("disk radii must be finite and nonnegative".into()));
            }
        }
        Ok(Self { parts })
    }

    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(&self.parts).expect("serializable")
    }
}

/// `z ∈ U`.
pub fn open_member(u: &QOpenSet, z: &AxisPoint, q: QParameter, _cfg: &ToleranceConfig) -> Result<bool> {
    q.require_contractive()?;
    Ok(u.contains_unchecked(z, q))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Geometry {
    /// `ℂ_xy` with 𝔮 on both axes.
    FormalQ,
    /// `ℂ_x` with 𝔮; needs `S` nilpotent.
    OY,
    /// `ℂ_y` with 𝔮; needs `T` nilpotent.
    XO,
    /// The single point `(0, 0)`; needs both nilpotent.
    Local,
    /// 𝔮 on `ℂ_x`, 𝔡 on `ℂ_y`.
    Oq,
}

impl Geometry {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "fq" => Self::FormalQ,
            "oy" => Self::OY,
            "xo" => Self::XO,
            "local" => Self::Local,
            "oq" => Self::Oq,
            _ => return Err(Error::InvalidInput(format!("unknown geometry `{s}`"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::FormalQ => "fq",
            Self::OY => "oy",
            Self::XO => "xo",
            Self::Local => "local",
            Self::Oq => "oq",
        }
    }

    /// Topology carried by each axis; `None` when the axis (minus the
    /// origin) is not part of the spectrum space.
    pub fn topologies(&self) -> (Option<AxisTopology>, Option<AxisTopology>) {
        use AxisTopology::*;
        match self {
            Self::FormalQ => (Some(Spiral), Some(Spiral)),
            Self::OY => (Some(Spiral), None),
            Self::XO => (None, Some(Spiral)),
            Self::Local => (None, None),
            Self::Oq => (Some(Spiral), Some(Disk)),
        }
    }

    pub fn all() -> [Geometry; 5] {
        [Self::FormalQ, Self::OY, Self::XO, Self::Local, Self::Oq]
    }
}

/// Closed subset of a geometry's spectrum space, given by generators and
/// decided lazily.
#[derive(Debug, Clone, PartialEq)]
pub struct QClosedSet {
    pub generators: Vec<AxisPoint>,
    pub geometry: Geometry,
    pub q: QParameter,
    pub tol: ToleranceConfig,
}

impl QClosedSet {
    pub fn topology(&self, axis: Axis) -> Option<AxisTopology> {
        let (x, y) = self.geometry.topologies();
        match axis {
            Axis::X => x,
            Axis::Y => y,
        }
    }

    pub fn in_space(&self, w: &AxisPoint) -> bool {
        match w.axis() {
            None => true,
            Some(a) => self.topology(a).is_some(),
        }
    }

    pub fn contains(&self, w: &AxisPoint) -> bool {
        if !self.in_space(w) {
            return false;
        }
        if self.generators.iter().any(|g| g.is_origin()) {
            return true;
        }
        match w.axis() {
            None => false,
            Some(a) => match self.topology(a) {
                Some(AxisTopology::Spiral) => {
                    q_closure_member(&self.generators, w, self.q, &self.tol).unwrap_or(false)
                }
                Some(AxisTopology::Disk) => disk_closure_member(&self.generators, w, &self.tol),
                None => false,
            },
        }
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }
}

#[derive(Debug, Clone)]
pub struct PutinarSpectrum {
    pub closed: QClosedSet,
    pub taylor: TaylorSpectrum,
    pub diagnostic: Option<String>,
}

pub fn putinar_spectrum(pair: &QPair, geometry: Geometry, cfg: &ToleranceConfig) -> Result<PutinarSpectrum> {
    let q = pair.q();
    let taylor = koszul::taylor_spectrum(pair, cfg)?;
    let s_nil = crate::qpair::nilpotency_index(pair.s(), cfg.rank_tol).is_some();
    let t_nil = crate::qpair::nilpotency_index(pair.t(), cfg.rank_tol).is_some();
    let mut diagnostic = None;
    match geometry {
        Geometry::Local => {}
        _ => q.require_contractive()?,
    }
    let generators = match geometry {
        Geometry::OY if !s_nil => {
            return Err(Error::GeometryPreconditionFailed("S is not nilpotent, the module does not extend over O(C_x)[[y]]".into()))
        }
        Geometry::XO if !t_nil => {
            return Err(Error::GeometryPreconditionFailed("T is not nilpotent, the module does not extend over C[[x]]O(C_y)".into()))
        }
        Geometry::Local => {
            if s_nil && t_nil {
                vec![AxisPoint::origin()]
            } else {
                diagnostic = Some(format!(
                    "pair is not a module over the local envelope: T nilpotent = {t_nil}, S nilpotent = {s_nil}"
                ));
                vec![]
            }
        }
        _ => {
            let (x, y) = geometry.topologies();
            taylor
                .taylor
                .iter()
                .filter(|p| match p.axis() {
                    None => true,
                    Some(Axis::X) => x.is_some(),
                    Some(Axis::Y) => y.is_some(),
                })
                .copied()
                .collect()
        }
    };
    Ok(PutinarSpectrum { closed: QClosedSet { generators, geometry, q, tol: *cfg }, taylor, diagnostic })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ClosedSetJson {
    pub geometry: Geometry,
    pub topology: (Option<AxisTopology>, Option<AxisTopology>),
    pub generators: Vec<AxisPoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub diagnostic: Option<String>,
}

impl From<&PutinarSpectrum> for ClosedSetJson {
    fn from(p: &PutinarSpectrum) -> Self {
        Self {
            geometry: p.closed.geometry,
            topology: p.closed.geometry.topologies(),
            generators: p.closed.generators.clone(),
            diagnostic: p.diagnostic.clone(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::c;
    use crate::qpair::{jordan_q_pair, nilpotent_q_pair, validate_qpair};
    use crate::random;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn half() -> QParameter {
        QParameter::real(0.5).unwrap()
    }
    fn cfg() -> ToleranceConfig {
        ToleranceConfig::default()
    }
    fn xp(v: f64) -> AxisPoint {
        AxisPoint::x(c(v, 0.0))
    }

    #[test]
    fn q_closure_examples() {
        let g = [xp(1.0)];
        assert!(q_closure_member(&g, &xp(4.0), half(), &cfg()).unwrap());
        assert!(!q_closure_member(&g, &xp(0.5), half(), &cfg()).unwrap());
        assert!(q_closure_member(&[AxisPoint::origin()], &AxisPoint::y(c(3.0, 1.0)), half(), &cfg()).unwrap());
        assert!(matches!(
            q_closure_member(&g, &xp(4.0), QParameter::real(1.0).unwrap(), &cfg()),
            Err(Error::NonContractiveQ { .. })
        ));
    }

    #[test]
    fn disk_closure_examples() {
        let g = [AxisPoint::y(c(2.0, 0.0))];
        assert!(disk_closure_member(&g, &AxisPoint::y(c(3.0, 0.0)), &cfg()));
        assert!(!disk_closure_member(&g, &AxisPoint::y(c(1.0, 0.0)), &cfg()));
        assert!(disk_closure_member(&[AxisPoint::origin()], &AxisPoint::y(c(0.1, 0.0)), &cfg()));
        assert!(!disk_closure_member(&[], &AxisPoint::y(c(0.1, 0.0)), &cfg()));
    }

    #[test]
    fn open_member_forward_saturation() {
        let u = QOpenSet::saturated_disk(Axis::X, c(1.0, 0.0), 0.1);
        assert!(open_member(&u, &xp(0.5), half(), &cfg()).unwrap());
        assert!(open_member(&u, &xp(1.0 / 64.0), half(), &cfg()).unwrap());
        assert!(!open_member(&u, &xp(2.0), half(), &cfg()).unwrap());
        assert!(!open_member(&u, &xp(3.0), half(), &cfg()).unwrap());
        assert!(open_member(&u, &AxisPoint::origin(), half(), &cfg()).unwrap());
        assert!(!open_member(&u, &AxisPoint::y(c(0.5, 0.0)), half(), &cfg()).unwrap());
        assert!(!open_member(&QOpenSet::empty(), &AxisPoint::origin(), half(), &cfg()).unwrap());
    }

    #[test]
    fn sectors_are_orbit_invariant() {
        let q = QParameter::new(c(0.4, 0.3)).unwrap();
        let s = Sector { phase: 0.7, half_width: 0.2 };
        let mut z = Complex64::from_polar(1.3, 0.7 + q.value().arg() / q.modulus().ln() * 1.3f64.ln());
        assert!(s.contains(z, q));
        for _ in 0..30 {
            z *= q.value();
            assert!(s.contains(z, q));
        }
    }

    #[test]
    fn arc_coverage() {
        let open = |sectors: Vec<Sector>| AxisOpen { axis: AxisName::X, disks: vec![], sectors, whole: false };
        let two = open(vec![Sector { phase: 0.0, half_width: 2.0 }, Sector { phase: PI, half_width: 1.2 }]);
        assert!(two.covers_axis());
        let gap = open(vec![Sector { phase: 0.0, half_width: 1.5 }, Sector { phase: PI, half_width: 1.5 }]);
        assert!(!gap.covers_axis());
        let touching = open(vec![Sector { phase: 0.0, half_width: PI / 2.0 }, Sector { phase: PI, half_width: PI / 2.0 }]);
        assert!(!touching.covers_axis());
    }

    #[test]
    fn putinar_examples() {
        let nil = nilpotent_q_pair(4, half()).unwrap();
        let p = putinar_spectrum(&nil, Geometry::Local, &cfg()).unwrap();
        assert_eq!(p.closed.generators, vec![AxisPoint::origin()]);
        assert!(p.closed.contains(&AxisPoint::origin()));
        assert!(!p.closed.contains(&xp(1.0)));

        let scalar = jordan_q_pair(c(1.0, 0.0), 1, half()).unwrap();
        let oy = putinar_spectrum(&scalar, Geometry::OY, &cfg()).unwrap();
        for k in 0..10 {
            assert!(oy.closed.contains(&xp(2f64.powi(k))));
        }
        assert!(!oy.closed.contains(&xp(3.0)));
        assert!(!oy.closed.contains(&xp(0.5)));

        // T = 0, S nilpotent Jordan block, XO: closure of the origin is all of ℂ_y
        let s = crate::linalg::down_shift(3);
        let p = validate_qpair(CMatrix0::zeros(3, 3), s, half(), cfg()).unwrap();
        let xo = putinar_spectrum(&p, Geometry::XO, &cfg()).unwrap();
        assert!(xo.closed.contains(&AxisPoint::y(c(7.0, -2.0))));
        assert!(!xo.closed.contains(&xp(1.0)));
    }

    type CMatrix0 = crate::linalg::CMatrix;

    #[test]
    fn geometry_preconditions() {
        let p = crate::qpair::shift_q_pair(c(1.0, 0.0), 2, half()).unwrap();
        assert!(matches!(putinar_spectrum(&p, Geometry::OY, &cfg()), Err(Error::GeometryPreconditionFailed(_))));
        let j = jordan_q_pair(c(1.0, 0.0), 2, half()).unwrap();
        assert!(matches!(putinar_spectrum(&j, Geometry::XO, &cfg()), Err(Error::GeometryPreconditionFailed(_))));
        let local = putinar_spectrum(&j, Geometry::Local, &cfg()).unwrap();
        assert!(local.closed.is_empty());
        assert!(local.diagnostic.is_some());
    }

    #[test]
    fn open_json_forms() {
        let one = QOpenSet::from_json(r#"{"axis":"x","disks":[{"c":[1,0],"r":0.1}],"whole":false}"#).unwrap();
        assert_eq!(one.parts.len(), 1);
        let many = QOpenSet::from_json(r#"[{"axis":"x","disks":[],"whole":true},{"axis":"y","disks":[],"sectors":[{"phase":0,"half_width":1}],"whole":false}]"#).unwrap();
        assert!(many.covers_axis(Axis::X));
        assert!(!many.covers_axis(Axis::Y));
    }

    fn probe_points(rng: &mut rand_chacha::ChaCha8Rng, gens: &[AxisPoint], q: QParameter) -> Vec<AxisPoint> {
        let mut out = Vec::new();
        for g in gens {
            if let Some(a) = g.axis() {
                for k in 0..4 {
                    out.push(AxisPoint::on_axis(a, g.coordinate() * q.inv().powi(k)));
                    out.push(AxisPoint::on_axis(a, g.coordinate() * q.value().powi(k + 1)));
                }
            }
        }
        for _ in 0..10 {
            out.push(random::random_axis_point(rng, 4.0));
        }
        out
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn closure_is_idempotent_and_monotone(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let q = random::random_q(&mut rng, 0.2, 0.9);
            let gens: Vec<AxisPoint> = (0..3).map(|_| random::random_axis_point(&mut rng, 3.0)).filter(|p| !p.is_origin()).collect();
            let probes = probe_points(&mut rng, &gens, q);
            let member = |g: &[AxisPoint], w: &AxisPoint| q_closure_member(g, w, q, &cfg()).unwrap();
            for w in &probes {
                if member(&gens, w) {
                    let mut more = gens.clone();
                    more.push(*w);
                    for v in &probes {
                        prop_assert_eq!(member(&gens, v), member(&more, v));
                    }
                }
                let extra = random::random_axis_point(&mut rng, 3.0);
                let mut bigger = gens.clone();
                bigger.push(extra);
                if member(&gens, w) {
                    prop_assert!(member(&bigger, w));
                }
            }
        }

        #[test]
        fn open_sets_are_forward_saturated(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let q = random::random_q(&mut rng, 0.2, 0.9);
            let u = QOpenSet::saturated_disk(Axis::X, random::polar(&mut rng, 0.5, 3.0), rng.random_range(0.05..1.0))
                .union(QOpenSet::from_parts(vec![AxisOpen { axis: AxisName::Y, disks: vec![], sectors: vec![Sector { phase: rng.random_range(-3.0..3.0), half_width: 0.4 }], whole: false }]));
            for _ in 0..50 {
                let z = random::random_axis_point(&mut rng, 4.0);
                if open_member(&u, &z, q, &cfg()).unwrap() {
                    let qz = AxisPoint { l1: z.l1 * q.value(), l2: z.l2 * q.value() };
                    prop_assert!(open_member(&u, &qz, q, &cfg()).unwrap());
                }
            }
        }

        // w ∈ cl{z} iff every saturated disk containing w contains z; the
        // small disk around w is the decisive test open
        #[test]
        fn closure_and_opens_are_complementary(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let q = random::random_q(&mut rng, 0.2, 0.9);
            let z = AxisPoint::x(random::polar(&mut rng, 0.2, 3.0));
            let k: i32 = rng.random_range(0..4);
            let on_orbit = AxisPoint::x(z.l1 * q.inv().powi(k));
            let off_orbit = AxisPoint::x(z.l1 * q.value().powi(k + 1));
            for w in [on_orbit, off_orbit, AxisPoint::x(random::polar(&mut rng, 0.2, 3.0))] {
                let in_closure = q_closure_member(&[z], &w, q, &cfg()).unwrap();
                let mut every = true;
                for r in [1e-3, 1e-2, 0.1, 0.5] {
                    let u = QOpenSet::saturated_disk(Axis::X, w.l1, r * w.l1.norm());
                    prop_assert!(open_member(&u, &w, q, &cfg()).unwrap());
                    every &= open_member(&u, &z, q, &cfg()).unwrap();
                }
                prop_assert_eq!(in_closure, every);
            }
        }

        #[test]
        fn taylor_inside_putinar(seed in any::<u64>()) {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let q = random::random_q(&mut rng, 0.3, 0.9);
            let pair = random::random_valid_pair(&mut rng, q, &random::PairSampler { max_dim: 5, ..Default::default() });
            for g in [Geometry::FormalQ, Geometry::Oq] {
                let p = putinar_spectrum(&pair, g, &cfg()).unwrap();
                for t in &p.taylor.taylor {
                    prop_assert!(p.closed.contains(t));
                }
            }
        }
    }
}
