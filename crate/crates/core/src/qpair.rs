//! q-commuting matrix pairs `TS = q⁻¹ST`.

use std::collections::BTreeSet;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{self, CJson};
use crate::linalg::{self, CMatrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QParameter {
    value: Complex64,
}

impl QParameter {
    /// Relaxed mode: any `0 < |q| ≤ 1`.
    pub fn new(value: Complex64) -> Result<Self> {
        if !(value.re.is_finite() && value.im.is_finite()) {
            return Err(Error::InvalidInput("q must be finite".into()));
        }
        if value.is_zero() {
            return Err(Error::ZeroQ);
        }
        if value.norm() > 1.0 + 1e-15 {
            return Err(Error::InvalidInput(format!("|q| = {} exceeds 1", value.norm())));
        }
        Ok(Self { value })
    }

    pub fn real(q: f64) -> Result<Self> {
        Self::new(Complex64::new(q, 0.0))
    }

    /// Contractive mode: `0 < |q| < 1`.
    pub fn contractive(value: Complex64) -> Result<Self> {
        let q = Self::new(value)?;
        q.require_contractive()?;
        Ok(q)
    }

    pub fn value(&self) -> Complex64 {
        self.value
    }

    pub fn inv(&self) -> Complex64 {
        self.value.inv()
    }

    pub fn modulus(&self) -> f64 {
        self.value.norm()
    }

    pub fn is_contractive(&self) -> bool {
        self.modulus() < 1.0
    }

    pub fn require_contractive(&self) -> Result<()> {
        if self.is_contractive() {
            Ok(())
        } else {
            Err(Error::NonContractiveQ { modulus: self.modulus() })
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub relation_tol: f64,
    pub rank_tol: f64,
    pub point_match_tol: f64,
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self { relation_tol: 1e-10, rank_tol: 1e-9, point_match_tol: 1e-8 }
    }
}

impl ToleranceConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("relation_tol", self.relation_tol),
            ("rank_tol", self.rank_tol),
            ("point_match_tol", self.point_match_tol),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidInput(format!("{name} must be positive, got {v}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct QPair {
    t: CMatrix,
    s: CMatrix,
    q: QParameter,
    tol: ToleranceConfig,
    residual: f64,
}

/// `‖TS − q⁻¹ST‖_max / (1 + ‖T‖_max‖S‖_max)`.
pub fn relation_residual(t: &CMatrix, s: &CMatrix, q: QParameter) -> f64 {
    let r = t * s - s * t * q.inv();
    linalg::max_norm(&r) / (1.0 + linalg::max_norm(t) * linalg::max_norm(s))
}

pub fn validate_qpair(t: CMatrix, s: CMatrix, q: QParameter, cfg: ToleranceConfig) -> Result<QPair> {
    cfg.validate()?;
    if !t.is_square() || !s.is_square() || t.nrows() != s.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "T is {}×{}, S is {}×{}",
            t.nrows(),
            t.ncols(),
            s.nrows(),
            s.ncols()
        )));
    }
    if t.nrows() == 0 {
        return Err(Error::DimensionMismatch("dimension must be positive".into()));
    }
    let residual = relation_residual(&t, &s, q);
    if !(residual <= cfg.relation_tol) {
        return Err(Error::RelationViolated { residual, bound: cfg.relation_tol });
    }
    Ok(QPair { t, s, q, tol: cfg, residual })
}

impl QPair {
    pub fn dim(&self) -> usize {
        self.t.nrows()
    }
    pub fn t(&self) -> &CMatrix {
        &self.t
    }
    pub fn s(&self) -> &CMatrix {
        &self.s
    }
    pub fn q(&self) -> QParameter {
        self.q
    }
    pub fn tolerances(&self) -> ToleranceConfig {
        self.tol
    }
    pub fn residual(&self) -> f64 {
        self.residual
    }

    pub fn with_tolerances(mut self, tol: ToleranceConfig) -> Self {
        self.tol = tol;
        self
    }

    /// `(WTW⁻¹, WSW⁻¹)`.
    pub fn conjugate(&self, w: &CMatrix) -> Result<QPair> {
        let wi = w
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::InvalidInput("conjugating matrix is singular".into()))?;
        let t = w * &self.t * &wi;
        let s = w * &self.s * &wi;
        let residual = relation_residual(&t, &s, self.q);
        Ok(QPair { t, s, q: self.q, tol: self.tol, residual })
    }

    pub fn direct_sum(pairs: &[QPair]) -> Result<QPair> {
        let first = pairs.first().ok_or_else(|| Error::InvalidInput("empty direct sum".into()))?;
        if pairs.iter().any(|p| p.q != first.q) {
            return Err(Error::QMismatch);
        }
        let ts: Vec<&CMatrix> = pairs.iter().map(|p| &p.t).collect();
        let ss: Vec<&CMatrix> = pairs.iter().map(|p| &p.s).collect();
        let t = linalg::block_diag(&ts);
        let s = linalg::block_diag(&ss);
        let residual = relation_residual(&t, &s, first.q);
        Ok(QPair { t, s, q: first.q, tol: first.tol, residual })
    }

    /// Smallest `k ≤ dim` with `S^k ≈ 0`, if any.
    pub fn s_nilpotency(&self) -> Option<usize> {
        nilpotency_index(&self.s, self.tol.rank_tol)
    }

    pub fn t_nilpotency(&self) -> Option<usize> {
        nilpotency_index(&self.t, self.tol.rank_tol)
    }

    pub fn from_json(text: &str) -> Result<QPair> {
        let raw: QPairJson = serde_json::from_str(text)?;
        raw.into_pair()
    }

    pub fn to_json_value(&self) -> QPairJson {
        QPairJson {
            dim: self.dim(),
            q: json::to_cjson(self.q.value()),
            t: json::matrix_to_json(&self.t),
            s: json::matrix_to_json(&self.s),
            tolerances: Some(self.tol),
        }
    }
}

/// Nilpotency index measured against `tol · max(1, ‖M‖)^k`.
pub fn nilpotency_index(m: &CMatrix, tol: f64) -> Option<usize> {
    let n = m.nrows();
    let scale = linalg::max_norm(m).max(1.0);
    let mut p = linalg::identity(n);
    for k in 1..=n {
        p = &p * m;
        if linalg::max_norm(&p) <= tol * scale.powi(k as i32) {
            return Some(k);
        }
    }
    None
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QPairJson {
    pub dim: usize,
    pub q: CJson,
    #[serde(rename = "T")]
    pub t: Vec<Vec<CJson>>,
    #[serde(rename = "S")]
    pub s: Vec<Vec<CJson>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerances: Option<ToleranceConfig>,
}

impl QPairJson {
    pub fn into_pair(self) -> Result<QPair> {
        let t = json::matrix_from_json(&self.t, "T")?;
        let s = json::matrix_from_json(&self.s, "S")?;
        if t.nrows() != self.dim || s.nrows() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "declared dim {} but T has {} rows and S has {}",
                self.dim,
                t.nrows(),
                s.nrows()
            )));
        }
        let q = QParameter::new(json::from_cjson(self.q))?;
        validate_qpair(t, s, q, self.tolerances.unwrap_or_default())
    }
}

fn exact_pair(t: CMatrix, s: CMatrix, q: QParameter) -> QPair {
    let residual = relation_residual(&t, &s, q);
    QPair { t, s, q, tol: ToleranceConfig::default(), residual }
}

/// `T = diag(t0, q⁻¹t0, …)`, `S` = down-shift.
pub fn jordan_q_pair(t0: Complex64, n: usize, q: QParameter) -> Result<QPair> {
    if n == 0 {
        return Err(Error::DimensionMismatch("n must be at least 1".into()));
    }
    let qi = q.inv();
    let mut d = Vec::with_capacity(n);
    let mut z = t0;
    for _ in 0..n {
        d.push(z);
        z *= qi;
    }
    Ok(exact_pair(linalg::diag(&d), linalg::down_shift(n), q))
}

/// `T` = down-shift, `S = diag(s0, q·s0, …)`.
pub fn shift_q_pair(s0: Complex64, n: usize, q: QParameter) -> Result<QPair> {
    if n == 0 {
        return Err(Error::DimensionMismatch("n must be at least 1".into()));
    }
    let mut d = Vec::with_capacity(n);
    let mut z = s0;
    for _ in 0..n {
        d.push(z);
        z *= q.value();
    }
    Ok(exact_pair(linalg::down_shift(n), linalg::diag(&d), q))
}

/// Left multiplication by `x` and `y` on the span of a down-closed set of
/// monomials `x^a y^b` inside the quantum plane, with `y·x^a = q^a x^a y`.
///
/// The basis is listed by decreasing total degree, so both operators are
/// strictly upper triangular.
pub fn staircase_q_pair(monomials: &[(usize, usize)], q: QParameter) -> Result<QPair> {
    let set: BTreeSet<(usize, usize)> = monomials.iter().copied().collect();
    if set.is_empty() || set.len() != monomials.len() {
        return Err(Error::InvalidInput("monomials must be nonempty and distinct".into()));
    }
    for &(a, b) in &set {
        if (a > 0 && !set.contains(&(a - 1, b))) || (b > 0 && !set.contains(&(a, b - 1))) {
            return Err(Error::InvalidInput(format!("monomial set is not down-closed at x^{a} y^{b}")));
        }
    }
    let mut basis: Vec<(usize, usize)> = set.iter().copied().collect();
    basis.sort_by(|x, y| (y.0 + y.1).cmp(&(x.0 + x.1)).then(y.0.cmp(&x.0)));
    let pos = |m: (usize, usize)| basis.iter().position(|&b| b == m);
    let n = basis.len();
    let mut t = CMatrix::zeros(n, n);
    let mut s = CMatrix::zeros(n, n);
    for (col, &(a, b)) in basis.iter().enumerate() {
        if let Some(row) = pos((a + 1, b)) {
            t[(row, col)] = Complex64::one();
        }
        if let Some(row) = pos((a, b + 1)) {
            s[(row, col)] = q.value().powu(a as u32);
        }
    }
    Ok(exact_pair(t, s, q))
}

/// First `n` monomials in graded order `1, x, y, x², xy, y², …`.
pub fn graded_monomials(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n);
    let mut d = 0;
    while out.len() < n {
        for j in 0..=d {
            if out.len() == n {
                break;
            }
            out.push((d - j, j));
        }
        d += 1;
    }
    out
}

/// Nilpotent pair on the first `n` graded monomials.
pub fn nilpotent_q_pair(n: usize, q: QParameter) -> Result<QPair> {
    if n < 2 {
        return Err(Error::DimensionMismatch("n must be at least 2".into()));
    }
    staircase_q_pair(&graded_monomials(n), q)
}

/// Eigenvalues of `M`, defective clusters merged, deduplicated within
/// `point_match_tol` and sorted.
pub fn operator_spectrum(m: &CMatrix, cfg: &ToleranceConfig) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch("operator_spectrum needs a square matrix".into()));
    }
    let mut pts: Vec<Complex64> = linalg::clustered_eigenvalues(m)?.into_iter().map(|e| e.0).collect();
    linalg::dedupe_points(&mut pts, cfg.point_match_tol);
    Ok(pts)
}
