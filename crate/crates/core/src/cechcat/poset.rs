//! Finite poset categories with object spectra.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Objects `0..n` ordered by `leq[i][j] ⟺ i ≤ j` (a morphism `i → j`
/// exists). Each object carries a finite spectrum of point ids.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteCategory {
    names: Vec<String>,
    leq: Vec<Vec<bool>>,
    spec: Vec<BTreeSet<usize>>,
    points: Vec<String>,
}

impl FiniteCategory {
    /// Builds the reflexive-transitive closure of `pairs` and rejects cycles.
    pub fn new(names: Vec<String>, pairs: &[(usize, usize)], spec: Vec<BTreeSet<usize>>, points: Vec<String>) -> Result<Self> {
        let n = names.len();
        if spec.len() != n {
            return Err(Error::InvalidInput(format!("{} objects but {} spectra", n, spec.len())));
        }
        if spec.iter().flatten().any(|&p| p >= points.len()) {
            return Err(Error::InvalidInput("spectrum refers to an unknown point".into()));
        }
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for &(i, j) in pairs {
            if i >= n || j >= n {
                return Err(Error::UnknownObject(format!("index {}", i.max(j))));
            }
            leq[i][j] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    for j in 0..n {
                        if leq[k][j] {
                            leq[i][j] = true;
                        }
                    }
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::NotAPartialOrder(format!("{} and {} lie on a cycle", names[i], names[j])));
                }
            }
        }
        Ok(Self { names, leq, spec, points })
    }

    /// Category on `0..n` from an order matrix, names `"0"`, `"1"`, …, and
    /// empty spectra. The matrix must already be a partial order.
    pub fn from_order(leq: Vec<Vec<bool>>) -> Result<Self> {
        let n = leq.len();
        let pairs: Vec<(usize, usize)> =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|&(i, j)| leq[i][j]).collect();
        let c = Self::new((0..n).map(|i| i.to_string()).collect(), &pairs, vec![BTreeSet::new(); n], vec![])?;
        if c.leq != leq {
            return Err(Error::NotAPartialOrder("relation is not reflexive and transitive".into()));
        }
        Ok(c)
    }

    pub fn with_spec(mut self, spec: Vec<BTreeSet<usize>>, points: Vec<String>) -> Result<Self> {
        if spec.len() != self.len() || spec.iter().flatten().any(|&p| p >= points.len()) {
            return Err(Error::InvalidInput("spectra do not match the objects".into()));
        }
        self.spec = spec;
        self.points = points;
        Ok(self)
    }

    /// Treats maximal objects as points: `Spec(A)` becomes the set of
    /// maximal objects above `A`, so each point `m` has `U_m = {m}`.
    pub fn with_maximal_points(self) -> Self {
        let n = self.len();
        let maximal: Vec<usize> = (0..n).filter(|&a| (0..n).all(|b| b == a || !self.leq[a][b])).collect();
        let points = maximal.iter().map(|&m| self.names[m].clone()).collect();
        let spec = (0..n).map(|a| (0..maximal.len()).filter(|&k| self.leq[a][maximal[k]]).collect()).collect();
        self.with_spec(spec, points).expect("indices in range")
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.names.iter().position(|n| n == name).ok_or_else(|| Error::UnknownObject(name.to_string()))
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.leq[i][j]
    }

    pub fn order(&self) -> &[Vec<bool>] {
        &self.leq
    }

    pub fn spec(&self, i: usize) -> &BTreeSet<usize> {
        &self.spec[i]
    }

    /// Union of all object spectra.
    pub fn all_points(&self) -> BTreeSet<usize> {
        self.spec.iter().flatten().copied().collect()
    }

    /// `U_A = {B : A ≤ B}`.
    pub fn min_neighborhood(&self, a: usize) -> Result<BTreeSet<usize>> {
        if a >= self.len() {
            return Err(Error::UnknownObject(format!("index {a}")));
        }
        Ok((0..self.len()).filter(|&b| self.leq[a][b]).collect())
    }

    pub fn is_up_closed(&self, set: &BTreeSet<usize>) -> bool {
        set.iter().all(|&a| (0..self.len()).all(|b| !self.leq[a][b] || set.contains(&b)))
    }

    pub fn least(&self) -> Option<usize> {
        (0..self.len()).find(|&a| (0..self.len()).all(|b| self.leq[a][b]))
    }

    pub fn greatest(&self) -> Option<usize> {
        (0..self.len()).find(|&a| (0..self.len()).all(|b| self.leq[b][a]))
    }

    pub fn is_unital(&self) -> bool {
        self.least().is_some()
    }

    /// Greatest lower bound; the meet of the empty set is the top.
    pub fn meet(&self, subset: &[usize]) -> Result<usize> {
        let lower: Vec<usize> = (0..self.len()).filter(|&a| subset.iter().all(|&s| self.leq[a][s])).collect();
        lower
            .iter()
            .copied()
            .find(|&m| lower.iter().all(|&l| self.leq[l][m]))
            .ok_or_else(|| Error::NotALattice(format!("no meet for {:?}", self.label(subset))))
    }

    /// Least upper bound; the join of the empty set is the bottom.
    pub fn join(&self, subset: &[usize]) -> Result<usize> {
        let upper: Vec<usize> = (0..self.len()).filter(|&a| subset.iter().all(|&s| self.leq[s][a])).collect();
        upper
            .iter()
            .copied()
            .find(|&m| upper.iter().all(|&u| self.leq[m][u]))
            .ok_or_else(|| Error::NotALattice(format!("no join for {:?}", self.label(subset))))
    }

    fn label(&self, subset: &[usize]) -> Vec<&str> {
        subset.iter().map(|&i| self.names[i].as_str()).collect()
    }

    /// Every subset has a meet and a join. For a finite poset it suffices
    /// to have binary ones plus top and bottom.
    pub fn is_complete_lattice(&self) -> bool {
        if self.is_empty() || self.meet(&[]).is_err() || self.join(&[]).is_err() {
            return false;
        }
        (0..self.len()).all(|i| (i + 1..self.len()).all(|j| self.meet(&[i, j]).is_ok() && self.join(&[i, j]).is_ok()))
    }

    pub fn require_complete_lattice(&self) -> Result<()> {
        if self.is_complete_lattice() {
            Ok(())
        } else {
            Err(Error::NotALattice("some subset lacks a meet or a join".into()))
        }
    }

    /// Full subcategory on `objects` (kept in increasing order), with
    /// spectra intersected with `points` when given.
    pub fn subcategory(&self, objects: &BTreeSet<usize>, points: Option<&BTreeSet<usize>>) -> FiniteCategory {
        let idx: Vec<usize> = objects.iter().copied().collect();
        let leq = idx.iter().map(|&i| idx.iter().map(|&j| self.leq[i][j]).collect()).collect();
        let spec = idx
            .iter()
            .map(|&i| match points {
                Some(p) => self.spec[i].intersection(p).copied().collect(),
                None => self.spec[i].clone(),
            })
            .collect();
        FiniteCategory {
            names: idx.iter().map(|&i| self.names[i].clone()).collect(),
            leq,
            spec,
            points: self.points.clone(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: CategoryJson = serde_json::from_str(text)?;
        raw.into_category()
    }

    pub fn to_json_value(&self) -> CategoryJson {
        let mut leq = Vec::new();
        for i in 0..self.len() {
            for j in 0..self.len() {
                if i != j && self.leq[i][j] {
                    leq.push([i, j]);
                }
            }
        }
        let spec = (0..self.len())
            .map(|i| (self.names[i].clone(), self.spec[i].iter().map(|&p| self.points[p].clone()).collect()))
            .collect();
        CategoryJson { objects: self.names.clone(), leq, spec }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CategoryJson {
    pub objects: Vec<String>,
    #[serde(default)]
    pub leq: Vec<[usize; 2]>,
    #[serde(default)]
    pub spec: BTreeMap<String, Vec<String>>,
}

impl CategoryJson {
    pub fn into_category(self) -> Result<FiniteCategory> {
        let mut points: BTreeSet<String> = BTreeSet::new();
        for v in self.spec.values() {
            points.extend(v.iter().cloned());
        }
        let points: Vec<String> = points.into_iter().collect();
        let mut spec = vec![BTreeSet::new(); self.objects.len()];
        for (name, pts) in &self.spec {
            let i = self.objects.iter().position(|o| o == name).ok_or_else(|| Error::UnknownObject(name.clone()))?;
            spec[i] = pts.iter().map(|p| points.binary_search(p).expect("collected above")).collect();
        }
        let pairs: Vec<(usize, usize)> = self.leq.iter().map(|p| (p[0], p[1])).collect();
        FiniteCategory::new(self.objects, &pairs, spec, points)
    }
}

/// Every partial order on `0..n` up to isomorphism, each given by a
/// naturally labelled order matrix (`i ≤ j ⟹ i ≤ j` numerically).
/// Some isomorphism classes appear more than once.
pub fn natural_posets(n: usize) -> Vec<Vec<Vec<bool>>> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << slots.len()) {
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (b, &(i, j)) in slots.iter().enumerate() {
            if mask >> b & 1 == 1 {
                leq[i][j] = true;
            }
        }
        let transitive =
            (0..n).all(|i| (0..n).all(|j| !leq[i][j] || (0..n).all(|k| !leq[j][k] || leq[i][k])));
        if transitive {
            out.push(leq);
        }
    }
    out
}
