//! Finite cochain complexes of complex matrices and their numerical homology.

pub mod exact;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::qpair::ToleranceConfig;

/// `0 → ℂ^{d_0} → ℂ^{d_1} → … → ℂ^{d_L} → 0` with `maps[p]: ℂ^{d_p} → ℂ^{d_{p+1}}`.
#[derive(Debug, Clone, PartialEq)]
pub struct CochainComplex {
    degrees: Vec<usize>,
    maps: Vec<CMatrix>,
}

impl CochainComplex {
    pub fn new(degrees: Vec<usize>, maps: Vec<CMatrix>) -> Result<Self> {
        if degrees.is_empty() {
            if maps.is_empty() {
                return Ok(Self { degrees, maps });
            }
            return Err(Error::ShapeMismatch("maps given for an empty complex".into()));
        }
        if maps.len() + 1 != degrees.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} degrees need {} maps, got {}",
                degrees.len(),
                degrees.len() - 1,
                maps.len()
            )));
        }
        for (p, m) in maps.iter().enumerate() {
            if m.ncols() != degrees[p] || m.nrows() != degrees[p + 1] {
                return Err(Error::ShapeMismatch(format!(
                    "map {p} is {}×{}, expected {}×{}",
                    m.nrows(),
                    m.ncols(),
                    degrees[p + 1],
                    degrees[p]
                )));
            }
        }
        Ok(Self { degrees, maps })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn maps(&self) -> &[CMatrix] {
        &self.maps
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    /// Applies fixed changes of basis `M_p ↦ G_{p+1} M_p G_p⁻¹`.
    pub fn change_basis(&self, g: &[CMatrix]) -> Result<Self> {
        if g.len() != self.degrees.len() {
            return Err(Error::ShapeMismatch("one basis change per degree required".into()));
        }
        let mut maps = Vec::with_capacity(self.maps.len());
        for (p, m) in self.maps.iter().enumerate() {
            let inv = g[p]
                .clone()
                .try_inverse()
                .ok_or_else(|| Error::InvalidInput(format!("basis change {p} is singular")))?;
            maps.push(&g[p + 1] * m * inv);
        }
        Self::new(self.degrees.clone(), maps)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ComplexCheck {
    /// `‖M_{p+1} M_p‖_max` for each consecutive pair.
    pub residuals: Vec<f64>,
    pub bounds: Vec<f64>,
    pub violations: Vec<usize>,
}

impl ComplexCheck {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().fold(0.0, |a, &b| a.max(b))
    }
}

pub fn check_complex(c: &CochainComplex, cfg: &ToleranceConfig) -> ComplexCheck {
    let mut residuals = Vec::new();
    let mut bounds = Vec::new();
    let mut violations = Vec::new();
    for p in 0..c.maps.len().saturating_sub(1) {
        let (a, b) = (&c.maps[p], &c.maps[p + 1]);
        let r = linalg::max_norm(&(b * a));
        let bound = cfg.rank_tol * (1.0 + linalg::max_norm(a) * linalg::max_norm(b) * a.nrows().max(1) as f64);
        if !(r <= bound) {
            violations.push(p);
        }
        residuals.push(r);
        bounds.push(bound);
    }
    ComplexCheck { residuals, bounds, violations }
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomologyReport {
    pub dims: Vec<usize>,
    pub ranks: Vec<usize>,
    /// Absolute singular-value threshold.
    pub tol_used: f64,
    /// First degree whose rank fell inside the guard band, with the
    /// offending singular value.
    pub ambiguous: Option<(usize, f64)>,
}

impl HomologyReport {
    pub fn is_exact(&self) -> bool {
        self.dims.iter().all(|&d| d == 0)
    }

    pub fn into_result(self) -> Result<Self> {
        match self.ambiguous {
            Some((degree, sv)) => Err(Error::RankAmbiguous {
                degree: Some(degree),
                singular_value: sv,
                threshold: self.tol_used,
                guard: linalg::RANK_GUARD,
            }),
            None => Ok(self),
        }
    }
}

/// Ranks and dimensions without raising on ambiguity.
///
/// The threshold is `rank_tol` times the largest singular value over all
/// maps of the complex, so a map that is tiny relative to its neighbours
/// counts as zero.
pub fn homology_report(c: &CochainComplex, cfg: &ToleranceConfig) -> Result<HomologyReport> {
    let check = check_complex(c, cfg);
    if let Some(&p) = check.violations.first() {
        return Err(Error::ComplexViolated { degree: p, residual: check.residuals[p], bound: check.bounds[p] });
    }
    let svs: Vec<Vec<f64>> = c.maps.iter().map(linalg::singular_values).collect::<Result<_>>()?;
    let scale = svs.iter().filter_map(|s| s.first().copied()).fold(0.0, f64::max);
    let mut ranks = Vec::with_capacity(svs.len());
    let mut ambiguous = None;
    let mut tol_used = cfg.rank_tol * scale;
    for (p, sv) in svs.iter().enumerate() {
        let info = linalg::rank_from_singular_values(sv, cfg.rank_tol, scale);
        tol_used = info.threshold;
        if ambiguous.is_none() {
            if let Some(s) = info.ambiguous {
                ambiguous = Some((p, s));
            }
        }
        ranks.push(info.rank);
    }
    let dims = (0..c.degrees.len())
        .map(|p| {
            let out = if p < ranks.len() { ranks[p] } else { 0 };
            let inc = if p > 0 { ranks[p - 1] } else { 0 };
            c.degrees[p] - out - inc
        })
        .collect();
    Ok(HomologyReport { dims, ranks, tol_used, ambiguous })
}

pub fn homology_dims(c: &CochainComplex, cfg: &ToleranceConfig) -> Result<HomologyReport> {
    homology_report(c, cfg)?.into_result()
}

pub fn is_exact(c: &CochainComplex, cfg: &ToleranceConfig) -> Result<bool> {
    Ok(homology_dims(c, cfg)?.is_exact())
}
