//! Resolvent sets and spectra of a module over a finite category, relative
//! to a transversality oracle.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::poset::FiniteCategory;
use crate::error::{Error, Result};
use crate::koszul::{self, AxisPoint};
use crate::qpair::{QPair, ToleranceConfig};

/// Verdicts `true` = transversal, per object and per point. Entries may be
/// missing; spectra refuse incomplete oracles.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TransversalityOracle {
    objects: Vec<Option<bool>>,
    points: Vec<Option<bool>>,
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct OracleJson {
    #[serde(default)]
    pub objects: BTreeMap<String, bool>,
    #[serde(default)]
    pub points: BTreeMap<String, bool>,
}

impl TransversalityOracle {
    pub fn from_table(objects: Vec<bool>, points: Vec<bool>) -> Self {
        Self { objects: objects.into_iter().map(Some).collect(), points: points.into_iter().map(Some).collect() }
    }

    pub fn partial(objects: Vec<Option<bool>>, points: Vec<Option<bool>>) -> Self {
        Self { objects, points }
    }

    /// Objects are transversal iff every point of their spectrum is, so the
    /// oracle is consistent on each `U_A`.
    pub fn from_points(cat: &FiniteCategory, points: Vec<bool>) -> Self {
        let objects = (0..cat.len()).map(|a| cat.spec(a).iter().all(|&p| points[p])).collect();
        Self::from_table(objects, points)
    }

    /// Point verdicts from Koszul exactness of `pair` at the given axis
    /// points, one per category point.
    pub fn from_koszul(cat: &FiniteCategory, pair: &QPair, coords: &[AxisPoint], cfg: &ToleranceConfig) -> Result<Self> {
        if coords.len() != cat.points().len() {
            return Err(Error::DimensionMismatch(format!(
                "{} coordinates for {} points",
                coords.len(),
                cat.points().len()
            )));
        }
        let verdicts = coords.iter().map(|&p| koszul::is_transversal(pair, p, cfg)).collect::<Result<Vec<_>>>()?;
        Ok(Self::from_points(cat, verdicts))
    }

    pub fn from_json(text: &str, cat: &FiniteCategory) -> Result<Self> {
        let raw: OracleJson = serde_json::from_str(text)?;
        let mut objects = vec![None; cat.len()];
        for (name, v) in raw.objects {
            objects[cat.index_of(&name)?] = Some(v);
        }
        let mut points = vec![None; cat.points().len()];
        for (name, v) in raw.points {
            let i = cat.points().iter().position(|p| *p == name).ok_or_else(|| Error::UnknownObject(name.clone()))?;
            points[i] = Some(v);
        }
        Ok(Self { objects, points })
    }

    pub fn to_json_value(&self, cat: &FiniteCategory) -> OracleJson {
        OracleJson {
            objects: self.objects.iter().enumerate().filter_map(|(i, v)| v.map(|v| (cat.name(i).to_string(), v))).collect(),
            points: self.points.iter().enumerate().filter_map(|(i, v)| v.map(|v| (cat.points()[i].clone(), v))).collect(),
        }
    }

    fn object(&self, a: usize, cat: &FiniteCategory) -> Result<bool> {
        self.objects
            .get(a)
            .copied()
            .flatten()
            .ok_or_else(|| Error::OracleIncomplete(format!("no verdict for object {}", cat.name(a))))
    }

    fn point(&self, p: usize, cat: &FiniteCategory) -> Result<bool> {
        self.points
            .get(p)
            .copied()
            .flatten()
            .ok_or_else(|| Error::OracleIncomplete(format!("no verdict for point {}", cat.points()[p])))
    }

    /// The oracle seen from the full subcategory on `objects`.
    pub fn restrict(&self, objects: &BTreeSet<usize>) -> Self {
        Self { objects: objects.iter().map(|&a| self.objects.get(a).copied().flatten()).collect(), points: self.points.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CategorySpectrumResult {
    pub res: BTreeSet<usize>,
    pub sigma: BTreeSet<usize>,
    pub res_p: BTreeSet<usize>,
    pub sigma_p: BTreeSet<usize>,
    pub taylor: BTreeSet<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CategorySpectrumJson {
    pub res: Vec<String>,
    pub sigma: Vec<String>,
    pub res_p: Vec<String>,
    pub sigma_p: Vec<String>,
    pub taylor: Vec<String>,
}

impl CategorySpectrumResult {
    pub fn to_json_value(&self, cat: &FiniteCategory) -> CategorySpectrumJson {
        let obj = |s: &BTreeSet<usize>| s.iter().map(|&a| cat.name(a).to_string()).collect();
        let pts = |s: &BTreeSet<usize>| s.iter().map(|&p| cat.points()[p].clone()).collect();
        CategorySpectrumJson {
            res: obj(&self.res),
            sigma: obj(&self.sigma),
            res_p: pts(&self.res_p),
            sigma_p: pts(&self.sigma_p),
            taylor: pts(&self.taylor),
        }
    }
}

/// Spectra with every category point in the universe.
pub fn category_spectrum(cat: &FiniteCategory, oracle: &TransversalityOracle) -> Result<CategorySpectrumResult> {
    let universe = (0..cat.points().len()).collect();
    category_spectrum_in(cat, oracle, &universe)
}

/// `res` holds the objects all of whose successors are transversal;
/// point spectra are taken inside `universe`.
pub fn category_spectrum_in(
    cat: &FiniteCategory,
    oracle: &TransversalityOracle,
    universe: &BTreeSet<usize>,
) -> Result<CategorySpectrumResult> {
    let verdict: Vec<bool> = (0..cat.len()).map(|a| oracle.object(a, cat)).collect::<Result<_>>()?;
    let mut taylor = BTreeSet::new();
    for &p in universe {
        if !oracle.point(p, cat)? {
            taylor.insert(p);
        }
    }
    let res: BTreeSet<usize> = (0..cat.len()).filter(|&a| (0..cat.len()).all(|b| !cat.leq(a, b) || verdict[b])).collect();
    let sigma = (0..cat.len()).filter(|a| !res.contains(a)).collect();
    let res_p: BTreeSet<usize> = res.iter().flat_map(|&a| cat.spec(a).iter().copied()).filter(|p| universe.contains(p)).collect();
    let sigma_p = universe.difference(&res_p).copied().collect();
    Ok(CategorySpectrumResult { res, sigma, res_p, sigma_p, taylor })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralMappingReport {
    pub object: usize,
    /// `σ(S)` cut down to `U_A` against `σ(U_A)`.
    pub sigma: (BTreeSet<usize>, BTreeSet<usize>),
    /// `σ_P(S)` cut down to `Spec(A)` against `σ_P(U_A)`.
    pub sigma_p: (BTreeSet<usize>, BTreeSet<usize>),
    /// Non-transversal points of `Spec(A)` seen globally and locally.
    pub points: (BTreeSet<usize>, BTreeSet<usize>),
}

impl SpectralMappingReport {
    pub fn sigma_ok(&self) -> bool {
        self.sigma.0 == self.sigma.1
    }
    pub fn sigma_p_ok(&self) -> bool {
        self.sigma_p.0 == self.sigma_p.1
    }
    pub fn points_ok(&self) -> bool {
        self.points.0 == self.points.1
    }
    pub fn passed(&self) -> bool {
        self.sigma_ok() && self.sigma_p_ok() && self.points_ok()
    }
}

/// Computes both sides of each restriction identity at `a` independently:
/// once on the whole category, once on the subcategory `U_A` whose point
/// universe is `Spec(A)`.
pub fn spectral_mapping_check(cat: &FiniteCategory, oracle: &TransversalityOracle, a: usize) -> Result<SpectralMappingReport> {
    let ua = cat.min_neighborhood(a)?;
    let spec_a = cat.spec(a).clone();
    let global = category_spectrum(cat, oracle)?;
    let sub = cat.subcategory(&ua, Some(&spec_a));
    let local = category_spectrum_in(&sub, &oracle.restrict(&ua), &spec_a)?;
    let back: Vec<usize> = ua.iter().copied().collect();
    let local_sigma = local.sigma.iter().map(|&i| back[i]).collect();
    Ok(SpectralMappingReport {
        object: a,
        sigma: (global.sigma.intersection(&ua).copied().collect(), local_sigma),
        sigma_p: (global.sigma_p.intersection(&spec_a).copied().collect(), local.sigma_p),
        points: (global.taylor.intersection(&spec_a).copied().collect(), local.taylor),
    })
}

/// The largest object whose spectrum contains `p`, when it exists.
pub fn point_object(cat: &FiniteCategory, p: usize) -> Option<usize> {
    let holders: Vec<usize> = (0..cat.len()).filter(|&a| cat.spec(a).contains(&p)).collect();
    holders.iter().copied().find(|&m| holders.iter().all(|&h| cat.leq(h, m)))
}

/// `σ_P = σ ∩ Spec(A)` where each point stands for its largest object and
/// `A` is the least object (all points when there is none).
pub fn putinar_restriction_check(cat: &FiniteCategory, oracle: &TransversalityOracle) -> Result<bool> {
    let s = category_spectrum(cat, oracle)?;
    let spec_a: BTreeSet<usize> = match cat.least() {
        Some(a) => cat.spec(a).clone(),
        None => (0..cat.points().len()).collect(),
    };
    let mut cut = BTreeSet::new();
    for &p in &spec_a {
        let obj = point_object(cat, p)
            .ok_or_else(|| Error::InvalidInput(format!("point {} has no largest object", cat.points()[p])))?;
        if s.sigma.contains(&obj) {
            cut.insert(p);
        }
    }
    let sigma_p: BTreeSet<usize> = s.sigma_p.intersection(&spec_a).copied().collect();
    Ok(sigma_p == cut && s.sigma_p.is_subset(&spec_a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cechcat::poset::natural_posets;

    fn chain3() -> FiniteCategory {
        FiniteCategory::new(vec!["A".into(), "B".into(), "C".into()], &[(0, 1), (1, 2)], vec![BTreeSet::new(); 3], vec![]).unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn chain_examples() {
        let cat = chain3();
        let r = category_spectrum(&cat, &TransversalityOracle::from_table(vec![false, true, true], vec![])).unwrap();
        assert_eq!(r.res, set(&[1, 2]));
        assert_eq!(r.sigma, set(&[0]));
        let r = category_spectrum(&cat, &TransversalityOracle::from_table(vec![true, true, false], vec![])).unwrap();
        assert!(r.res.is_empty());
        assert_eq!(r.sigma, set(&[0, 1, 2]));
    }

    #[test]
    fn chain_mapping_at_middle() {
        let cat = chain3();
        let o = TransversalityOracle::from_table(vec![false, true, true], vec![]);
        let r = spectral_mapping_check(&cat, &o, 1).unwrap();
        assert!(r.passed());
        assert!(r.sigma.0.is_empty());
    }

    #[test]
    fn incomplete_oracle_rejected() {
        let cat = chain3();
        let o = TransversalityOracle::partial(vec![Some(true), None, Some(true)], vec![]);
        assert!(matches!(category_spectrum(&cat, &o), Err(Error::OracleIncomplete(_))));
    }

    #[test]
    fn diamond_all_oracles() {
        // 0 < 1, 2 < 3
        let cat = FiniteCategory::new((0..4).map(|i| i.to_string()).collect(), &[(0, 1), (0, 2), (1, 3), (2, 3)], vec![BTreeSet::new(); 4], vec![])
            .unwrap()
            .with_maximal_points();
        for mask in 0..16u32 {
            let table: Vec<bool> = (0..4).map(|i| mask >> i & 1 == 1).collect();
            let pts = vec![table[3]];
            let o = TransversalityOracle::from_table(table, pts);
            for a in 0..4 {
                assert!(spectral_mapping_check(&cat, &o, a).unwrap().passed(), "mask {mask} object {a}");
            }
            assert!(putinar_restriction_check(&cat, &o).unwrap());
        }
    }

    #[test]
    fn least_object_in_spectrum() {
        for order in natural_posets(4) {
            let cat = FiniteCategory::from_order(order).unwrap();
            let Some(a) = cat.least() else { continue };
            let o = TransversalityOracle::from_table((0..4).map(|i| i != a).collect(), vec![]);
            assert!(category_spectrum(&cat, &o).unwrap().sigma.contains(&a));
        }
    }

    #[test]
    fn oracle_json() {
        let cat = chain3();
        let o = TransversalityOracle::from_json(r#"{"objects":{"A":false,"B":true,"C":true}}"#, &cat).unwrap();
        let r = category_spectrum(&cat, &o).unwrap().to_json_value(&cat);
        assert_eq!(r.sigma, vec!["A".to_string()]);
        assert!(TransversalityOracle::from_json(r#"{"objects":{"D":true}}"#, &cat).is_err());
    }

    #[test]
    fn koszul_bridge() {
        use crate::linalg::{c, CMatrix};
        use crate::qpair::{validate_qpair, QParameter};
        let q = QParameter::real(0.5).unwrap();
        let cfg = ToleranceConfig::default();
        let pair = validate_qpair(CMatrix::from_element(1, 1, c(1.0, 0.0)), CMatrix::zeros(1, 1), q, cfg).unwrap();
        // two points (1,0) and (3,0) with a least object over both
        let cat = FiniteCategory::new(
            vec!["A".into(), "p".into(), "r".into()],
            &[(0, 1), (0, 2)],
            vec![set(&[0, 1]), set(&[0]), set(&[1])],
            vec!["p".into(), "r".into()],
        )
        .unwrap();
        let coords = [AxisPoint::x(c(1.0, 0.0)), AxisPoint::x(c(3.0, 0.0))];
        let o = TransversalityOracle::from_koszul(&cat, &pair, &coords, &cfg).unwrap();
        let r = category_spectrum(&cat, &o).unwrap();
        assert_eq!(r.taylor, set(&[0]));
        assert_eq!(r.sigma, set(&[0, 1]));
        assert_eq!(r.sigma_p, set(&[0]));
        assert!(putinar_restriction_check(&cat, &o).unwrap());
    }
}
