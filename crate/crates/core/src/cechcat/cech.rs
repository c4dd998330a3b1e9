//! Augmented Čech complexes of a finite basis, indexed by all tuples.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::presheaf::{parse_points, OpenSet, Presheaf};
use crate::error::{Error, Result};
use crate::homology::{self, CochainComplex, HomologyReport};
use crate::linalg::{self, CMatrix};
use crate::qpair::ToleranceConfig;

/// Largest single degree the builder will allocate.
pub const MAX_DEGREE_DIM: usize = 4096;

/// What the builder needs to know about a basis `b_0..b_{N-1}` inside an
/// open `U`. Member lists are sorted and duplicate-free; their value is the
/// value on the intersection of the listed basis elements.
pub trait CechInput {
    fn basis_len(&self) -> usize;
    fn join_dim(&self, members: &[usize]) -> usize;
    /// Restriction from the value on `from` to the value on `to`, where
    /// `from ⊆ to` as member lists.
    fn restriction(&self, from: &[usize], to: &[usize]) -> CMatrix;
    /// Dimension of the value on `U` itself.
    fn augmentation_dim(&self) -> usize;
    /// Restriction from `U` to basis element `b`.
    fn augmentation(&self, b: usize) -> CMatrix;
}

/// `0 → P(U) → C⁰ → C¹ → … → C^{p_max+1}`; position `k` of the inner
/// complex holds `C^{k-1}` with `C^{-1} = P(U)`.
#[derive(Debug, Clone)]
pub struct CechComplex {
    pub complex: CochainComplex,
    pub p_max: usize,
    pub basis_len: usize,
}

fn members(tuple: &[usize]) -> Vec<usize> {
    let s: BTreeSet<usize> = tuple.iter().copied().collect();
    s.into_iter().collect()
}

fn tuples(n: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..n).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    out
}

struct Degree {
    tuples: Vec<Vec<usize>>,
    offsets: Vec<usize>,
    dim: usize,
}

fn degree<I: CechInput + ?Sized>(input: &I, p: usize) -> Result<Degree> {
    let n = input.basis_len();
    let count = n.checked_pow(p as u32 + 1).unwrap_or(usize::MAX);
    if count > MAX_DEGREE_DIM {
        return Err(Error::InvalidInput(format!("degree {p} has {count} tuples; lower p_max")));
    }
    let tuples = tuples(n, p + 1);
    let mut offsets = Vec::with_capacity(tuples.len());
    let mut dim = 0;
    for t in &tuples {
        offsets.push(dim);
        dim += input.join_dim(&members(t));
    }
    if dim > MAX_DEGREE_DIM {
        return Err(Error::InvalidInput(format!("degree {p} has dimension {dim}; lower p_max")));
    }
    Ok(Degree { tuples, offsets, dim })
}

/// `(∂f)(B) = Σ_j (−1)^j m_j f(B(j))`, `B(j)` dropping the `j`-th entry.
fn differential<I: CechInput + ?Sized>(input: &I, src: &Degree, dst: &Degree) -> CMatrix {
    let n = input.basis_len();
    let mut d = CMatrix::zeros(dst.dim, src.dim);
    for (row, t) in dst.tuples.iter().enumerate() {
        let to = members(t);
        let rdim = input.join_dim(&to);
        if rdim == 0 {
            continue;
        }
        let r0 = dst.offsets[row];
        for j in 0..t.len() {
            let mut face = t.clone();
            face.remove(j);
            let idx = face.iter().fold(0, |acc, &b| acc * n + b);
            let from = members(&face);
            let cdim = input.join_dim(&from);
            if cdim == 0 {
                continue;
            }
            let c0 = src.offsets[idx];
            let m = input.restriction(&from, &to);
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            let mut block = d.view_mut((r0, c0), (rdim, cdim));
            block += m * linalg::c(sign, 0.0);
        }
    }
    d
}

/// Builds the augmented complex through `C^{p_max+1}` so exactness can be
/// read off through `C^{p_max}`.
pub fn build_augmented<I: CechInput + ?Sized>(input: &I, p_max: usize) -> Result<CechComplex> {
    let n = input.basis_len();
    let levels: Vec<Degree> = (0..=p_max + 1).map(|p| degree(input, p)).collect::<Result<_>>()?;
    let a = input.augmentation_dim();
    let mut eps = CMatrix::zeros(levels[0].dim, a);
    for b in 0..n {
        let bd = input.join_dim(&[b]);
        if bd > 0 && a > 0 {
            let mut block = eps.view_mut((levels[0].offsets[b], 0), (bd, a));
            block += input.augmentation(b);
        }
    }
    let mut degrees = vec![a];
    degrees.extend(levels.iter().map(|l| l.dim));
    let mut maps = vec![eps];
    for p in 0..=p_max {
        maps.push(differential(input, &levels[p], &levels[p + 1]));
    }
    Ok(CechComplex { complex: CochainComplex::new(degrees, maps)?, p_max, basis_len: n })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CechReport {
    pub exact: bool,
    pub p_max: usize,
    pub basis_len: usize,
    /// Dimensions of `C^{-1}, C⁰, …, C^{p_max+1}`.
    pub degrees: Vec<usize>,
    /// Ranks of `ε, ∂⁰, …, ∂^{p_max}`.
    pub ranks: Vec<usize>,
    /// Homology at `C^{-1}, …, C^{p_max}`.
    pub homology: Vec<usize>,
    /// First Čech degree (−1 for the augmentation) where exactness fails.
    pub first_failure: Option<i64>,
    pub max_dd_residual: f64,
}

impl CechComplex {
    pub fn degrees(&self) -> &[usize] {
        self.complex.degrees()
    }

    /// Largest entry of any composite `∂∂`, including `∂⁰ε`.
    pub fn max_dd_residual(&self) -> f64 {
        let maps = self.complex.maps();
        maps.windows(2).map(|w| linalg::max_norm(&(&w[1] * &w[0]))).fold(0.0, f64::max)
    }

    pub fn report(&self, cfg: &ToleranceConfig) -> Result<CechReport> {
        let h: HomologyReport = homology::homology_dims(&self.complex, cfg)?;
        let homology: Vec<usize> = h.dims[..=self.p_max + 1].to_vec();
        let first_failure = homology.iter().position(|&d| d != 0).map(|k| k as i64 - 1);
        Ok(CechReport {
            exact: first_failure.is_none(),
            p_max: self.p_max,
            basis_len: self.basis_len,
            degrees: self.degrees().to_vec(),
            ranks: h.ranks,
            homology,
            first_failure,
            max_dd_residual: self.max_dd_residual(),
        })
    }
}

/// Basic opens, given by their point sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Basis {
    pub members: Vec<OpenSet>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisJson {
    pub basis: Vec<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p_max: Option<usize>,
}

impl Basis {
    pub fn new(members: Vec<OpenSet>) -> Self {
        Self { members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Parses `{"basis": [[point, …], …], "p_max": k}` against the points of
    /// `p`; returns the optional `p_max` alongside.
    pub fn from_json(text: &str, p: &Presheaf) -> Result<(Self, Option<usize>)> {
        let raw: BasisJson = serde_json::from_str(text)?;
        let members = raw.basis.iter().map(|b| parse_points(p.points(), b)).collect::<Result<Vec<_>>>()?;
        for m in &members {
            if p.open_index(m).is_none() {
                return Err(Error::InvalidInput(format!("basis element {m:?} is not an open")));
            }
        }
        Ok((Self { members }, raw.p_max))
    }
}

/// A presheaf, a basis and an open `U`; only basis elements inside `U`
/// take part.
pub struct PresheafCech<'a> {
    presheaf: &'a Presheaf,
    inside: Vec<OpenSet>,
    open: usize,
}

impl<'a> PresheafCech<'a> {
    pub fn new(presheaf: &'a Presheaf, basis: &Basis, open: &OpenSet) -> Result<Self> {
        let u = presheaf
            .open_index(open)
            .ok_or_else(|| Error::InvalidInput(format!("{open:?} is not an open")))?;
        for b in &basis.members {
            if presheaf.open_index(b).is_none() {
                return Err(Error::InvalidInput(format!("basis element {b:?} is not an open")));
            }
        }
        let inside: Vec<OpenSet> = basis.members.iter().filter(|b| b.is_subset(open)).cloned().collect();
        let covered: OpenSet = inside.iter().flatten().copied().collect();
        let missing: Vec<usize> = open.difference(&covered).copied().collect();
        if !missing.is_empty() {
            return Err(Error::BasisNotCovering(missing));
        }
        Ok(Self { presheaf, inside, open: u })
    }

    fn meet(&self, members: &[usize]) -> OpenSet {
        let mut it = members.iter();
        let first = self.inside[*it.next().expect("nonempty tuple")].clone();
        it.fold(first, |acc, &b| acc.intersection(&self.inside[b]).copied().collect())
    }
}

impl CechInput for PresheafCech<'_> {
    fn basis_len(&self) -> usize {
        self.inside.len()
    }

    fn join_dim(&self, members: &[usize]) -> usize {
        self.presheaf.dim_of(&self.meet(members)).expect("closed under intersections")
    }

    fn restriction(&self, from: &[usize], to: &[usize]) -> CMatrix {
        let (a, b) = (self.meet(from), self.meet(to));
        match (self.presheaf.open_index(&a), self.presheaf.open_index(&b)) {
            (Some(i), Some(j)) => self.presheaf.restriction(i, j).expect("filled at construction").clone(),
            _ => CMatrix::zeros(self.presheaf.dim_of(&b).unwrap_or(0), self.presheaf.dim_of(&a).unwrap_or(0)),
        }
    }

    fn augmentation_dim(&self) -> usize {
        self.presheaf.dims()[self.open]
    }

    fn augmentation(&self, b: usize) -> CMatrix {
        let j = self.presheaf.open_index(&self.inside[b]).expect("checked in new");
        self.presheaf.restriction(self.open, j).expect("filled at construction").clone()
    }
}

/// Augmented Čech complex of `p` over `open` through degree `p_max`
/// (default: basis size plus one).
pub fn cech_complex(p: &Presheaf, basis: &Basis, open: &OpenSet, p_max: Option<usize>) -> Result<CechComplex> {
    let input = PresheafCech::new(p, basis, open)?;
    build_augmented(&input, p_max.unwrap_or(input.basis_len() + 1))
}

/// Exactness of the augmented complex over the whole space.
pub fn is_cech_category(p: &Presheaf, basis: &Basis, p_max: Option<usize>, cfg: &ToleranceConfig) -> Result<bool> {
    Ok(cech_report(p, basis, p_max, cfg)?.exact)
}

pub fn cech_report(p: &Presheaf, basis: &Basis, p_max: Option<usize>, cfg: &ToleranceConfig) -> Result<CechReport> {
    let whole = p.opens()[p.whole()].clone();
    cech_complex(p, basis, &whole, p_max)?.report(cfg)
}

/// One basis element carrying `dim`, identity restrictions, and an
/// arbitrary augmentation.
#[derive(Debug, Clone)]
pub struct SingleBasis {
    pub dim: usize,
    pub augmentation: CMatrix,
}

impl CechInput for SingleBasis {
    fn basis_len(&self) -> usize {
        1
    }
    fn join_dim(&self, _: &[usize]) -> usize {
        self.dim
    }
    fn restriction(&self, _: &[usize], _: &[usize]) -> CMatrix {
        linalg::identity(self.dim)
    }
    fn augmentation_dim(&self) -> usize {
        self.augmentation.ncols()
    }
    fn augmentation(&self, _: usize) -> CMatrix {
        self.augmentation.clone()
    }
}
