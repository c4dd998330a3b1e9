//! Presheaves of finite-dimensional spaces on finite spaces, and the
//! lattice category they induce.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::poset::FiniteCategory;
use crate::error::{Error, Result};
use crate::json::{self, CJson};
use crate::linalg::{self, CMatrix};

pub type OpenSet = BTreeSet<usize>;

/// Sections over a family of opens with restriction matrices
/// `r(U → V): P(U) → P(V)` for `V ⊆ U`.
///
/// The family must contain the whole space and be closed under unions and
/// nonempty intersections; the empty set is optional.
#[derive(Debug, Clone, PartialEq)]
pub struct Presheaf {
    points: Vec<String>,
    opens: Vec<OpenSet>,
    dims: Vec<usize>,
    restrictions: BTreeMap<(usize, usize), CMatrix>,
    spec_points: OpenSet,
}

const FUNCTOR_TOL: f64 = 1e-12;

impl Presheaf {
    pub fn new(
        points: Vec<String>,
        opens: Vec<OpenSet>,
        dims: Vec<usize>,
        given: Vec<(usize, usize, CMatrix)>,
        spec_points: Option<OpenSet>,
    ) -> Result<Self> {
        let n = points.len();
        check_topology(n, &opens)?;
        if dims.len() != opens.len() {
            return Err(Error::InvalidInput(format!("{} opens but {} dimensions", opens.len(), dims.len())));
        }
        for (i, o) in opens.iter().enumerate() {
            if o.is_empty() && dims[i] != 0 {
                return Err(Error::InvalidInput("sections over the empty set must be zero".into()));
            }
        }
        let mut known: BTreeMap<(usize, usize), CMatrix> = BTreeMap::new();
        for (u, v, m) in given {
            if u >= opens.len() || v >= opens.len() {
                return Err(Error::InvalidInput(format!("restriction {u} → {v} names an unknown open")));
            }
            if !opens[v].is_subset(&opens[u]) {
                return Err(Error::FunctorialityViolated(format!(
                    "restriction from {} to {} but the target is not contained in the source",
                    show(&points, &opens[u]),
                    show(&points, &opens[v])
                )));
            }
            if m.nrows() != dims[v] || m.ncols() != dims[u] {
                return Err(Error::ShapeMismatch(format!(
                    "restriction {} → {} is {}×{}, expected {}×{}",
                    show(&points, &opens[u]),
                    show(&points, &opens[v]),
                    m.nrows(),
                    m.ncols(),
                    dims[v],
                    dims[u]
                )));
            }
            if u == v && linalg::max_norm(&(&m - linalg::identity(dims[u]))) > FUNCTOR_TOL {
                return Err(Error::FunctorialityViolated(format!(
                    "restriction of {} to itself is not the identity",
                    show(&points, &opens[u])
                )));
            }
            known.insert((u, v), m);
        }
        for u in 0..opens.len() {
            known.entry((u, u)).or_insert_with(|| linalg::identity(dims[u]));
        }
        // fill missing pairs by composing through intermediate opens, shortest gaps first
        let mut pairs: Vec<(usize, usize)> = (0..opens.len())
            .flat_map(|u| (0..opens.len()).map(move |v| (u, v)))
            .filter(|&(u, v)| u != v && opens[v].is_subset(&opens[u]))
            .collect();
        pairs.sort_by_key(|&(u, v)| opens[u].len() - opens[v].len());
        for &(u, v) in &pairs {
            if known.contains_key(&(u, v)) {
                continue;
            }
            let via = (0..opens.len()).find(|&w| {
                w != u && w != v && known.contains_key(&(u, w)) && known.contains_key(&(w, v))
            });
            match via {
                Some(w) => {
                    let m = &known[&(w, v)] * &known[&(u, w)];
                    known.insert((u, v), m);
                }
                None if dims[v] == 0 || dims[u] == 0 => {
                    known.insert((u, v), CMatrix::zeros(dims[v], dims[u]));
                }
                None => {
                    return Err(Error::FunctorialityViolated(format!(
                        "no restriction given from {} to {}",
                        show(&points, &opens[u]),
                        show(&points, &opens[v])
                    )))
                }
            }
        }
        let p = Self {
            spec_points: spec_points.unwrap_or_else(|| (0..n).collect()),
            points,
            opens,
            dims,
            restrictions: known,
        };
        p.check_functorial()?;
        Ok(p)
    }

    fn check_functorial(&self) -> Result<()> {
        let k = self.opens.len();
        for u in 0..k {
            for v in 0..k {
                if !self.opens[v].is_subset(&self.opens[u]) {
                    continue;
                }
                for w in 0..k {
                    if !self.opens[w].is_subset(&self.opens[v]) {
                        continue;
                    }
                    let comp = &self.restrictions[&(v, w)] * &self.restrictions[&(u, v)];
                    let direct = &self.restrictions[&(u, w)];
                    let scale = 1.0 + linalg::max_norm(&self.restrictions[&(v, w)]) * linalg::max_norm(&self.restrictions[&(u, v)]);
                    if linalg::max_norm(&(comp - direct)) > FUNCTOR_TOL * scale {
                        return Err(Error::FunctorialityViolated(format!(
                            "restricting {} → {} → {} differs from restricting directly",
                            show(&self.points, &self.opens[u]),
                            show(&self.points, &self.opens[v]),
                            show(&self.points, &self.opens[w])
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// The same space for every open and identity restrictions.
    pub fn constant(points: Vec<String>, opens: Vec<OpenSet>, dim: usize) -> Result<Self> {
        let dims = opens.iter().map(|o| if o.is_empty() { 0 } else { dim }).collect();
        let mut given = Vec::new();
        for (u, ou) in opens.iter().enumerate() {
            for (v, ov) in opens.iter().enumerate() {
                if u != v && ov.is_subset(ou) && !ov.is_empty() {
                    given.push((u, v, linalg::identity(dim)));
                }
            }
        }
        Self::new(points, opens, dims, given, None)
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }
    pub fn opens(&self) -> &[OpenSet] {
        &self.opens
    }
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }
    pub fn spec_points(&self) -> &OpenSet {
        &self.spec_points
    }

    pub fn open_index(&self, set: &OpenSet) -> Option<usize> {
        self.opens.iter().position(|o| o == set)
    }

    pub fn whole(&self) -> usize {
        let all: OpenSet = (0..self.points.len()).collect();
        self.open_index(&all).expect("checked at construction")
    }

    pub fn restriction(&self, u: usize, v: usize) -> Option<&CMatrix> {
        self.restrictions.get(&(u, v))
    }

    /// Dimension of sections over an arbitrary set that is either listed or
    /// empty.
    pub fn dim_of(&self, set: &OpenSet) -> Option<usize> {
        match self.open_index(set) {
            Some(i) => Some(self.dims[i]),
            None if set.is_empty() => Some(0),
            None => None,
        }
    }

    /// For each point the smallest open containing it.
    pub fn point_objects(&self) -> Vec<usize> {
        (0..self.points.len())
            .map(|p| {
                let min: OpenSet = self
                    .opens
                    .iter()
                    .filter(|o| o.contains(&p))
                    .fold(None, |acc: Option<OpenSet>, o| {
                        Some(match acc {
                            None => o.clone(),
                            Some(a) => a.intersection(o).copied().collect(),
                        })
                    })
                    .expect("whole space contains every point");
                self.open_index(&min).expect("closed under nonempty intersections")
            })
            .collect()
    }

    /// Objects `P(V)` ordered by `P(V) ≤ P(W) ⟺ W ⊆ V`, with spectra
    /// `V ∩ spec_points`.
    pub fn to_category(&self) -> FiniteCategory {
        let k = self.opens.len();
        let names = self.opens.iter().map(|o| show(&self.points, o)).collect();
        let pairs: Vec<(usize, usize)> = (0..k)
            .flat_map(|v| (0..k).map(move |w| (v, w)))
            .filter(|&(v, w)| self.opens[w].is_subset(&self.opens[v]))
            .collect();
        let spec = self.opens.iter().map(|o| o.intersection(&self.spec_points).copied().collect()).collect();
        FiniteCategory::new(names, &pairs, spec, self.points.clone()).expect("inclusion is a partial order")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: PresheafJson = serde_json::from_str(text)?;
        raw.into_presheaf()
    }

    pub fn to_json_value(&self) -> PresheafJson {
        let names = |o: &OpenSet| o.iter().map(|&p| self.points[p].clone()).collect::<Vec<_>>();
        let restrictions = self
            .restrictions
            .iter()
            .filter(|((u, v), _)| u != v)
            .map(|(&(u, v), m)| RestrictionJson { from: names(&self.opens[u]), to: names(&self.opens[v]), matrix: json::matrix_to_json(m) })
            .collect();
        PresheafJson {
            points: self.points.clone(),
            opens: self.opens.iter().map(names).collect(),
            dims: self.dims.clone(),
            restrictions,
            spec_points: Some(self.spec_points.iter().map(|&p| self.points[p].clone()).collect()),
        }
    }
}

fn show(points: &[String], o: &OpenSet) -> String {
    let inner: Vec<&str> = o.iter().map(|&p| points[p].as_str()).collect();
    format!("{{{}}}", inner.join(","))
}

fn check_topology(n: usize, opens: &[OpenSet]) -> Result<()> {
    let all: OpenSet = (0..n).collect();
    if opens.iter().flatten().any(|&p| p >= n) {
        return Err(Error::NotATopology("an open refers to an unknown point".into()));
    }
    if !opens.contains(&all) {
        return Err(Error::NotATopology("the whole space must be open".into()));
    }
    for (i, a) in opens.iter().enumerate() {
        if opens[..i].contains(a) {
            return Err(Error::NotATopology("duplicate open".into()));
        }
        for b in opens {
            let u: OpenSet = a.union(b).copied().collect();
            if !opens.contains(&u) {
                return Err(Error::NotATopology("not closed under unions".into()));
            }
            let m: OpenSet = a.intersection(b).copied().collect();
            if !m.is_empty() && !opens.contains(&m) {
                return Err(Error::NotATopology("not closed under intersections".into()));
            }
        }
    }
    Ok(())
}

/// Category data carried alongside a presheaf-derived category: the value
/// dimension of each object and the matrix of each morphism.
#[derive(Debug, Clone, PartialEq)]
pub struct CategoryPayload {
    pub dims: Vec<usize>,
    pub morphisms: BTreeMap<(usize, usize), CMatrix>,
}

pub fn to_category_with_payload(p: &Presheaf) -> (FiniteCategory, CategoryPayload) {
    let cat = p.to_category();
    let morphisms = p.restrictions.iter().map(|(&k, m)| (k, m.clone())).collect();
    (cat, CategoryPayload { dims: p.dims.clone(), morphisms })
}

/// Rebuilds a presheaf from a lattice category: each object's open is its
/// spectrum, morphisms become restrictions.
pub fn from_category(cat: &FiniteCategory, payload: &CategoryPayload) -> Result<Presheaf> {
    let opens: Vec<OpenSet> = (0..cat.len()).map(|i| cat.spec(i).clone()).collect();
    for i in 0..cat.len() {
        for j in 0..cat.len() {
            if cat.leq(i, j) != opens[j].is_subset(&opens[i]) {
                return Err(Error::FunctorialityViolated(format!(
                    "order between {} and {} does not match reverse inclusion",
                    cat.name(i),
                    cat.name(j)
                )));
            }
        }
    }
    let given = payload.morphisms.iter().map(|(&(u, v), m)| (u, v, m.clone())).collect();
    Presheaf::new(cat.points().to_vec(), opens, payload.dims.clone(), given, None)
}

/// Presheaf → lattice category → presheaf, asserting the round trip is the
/// identity and the category is a complete lattice.
pub fn presheaf_roundtrip(p: &Presheaf) -> Result<(FiniteCategory, Presheaf)> {
    let (cat, payload) = to_category_with_payload(p);
    cat.require_complete_lattice()?;
    let back = from_category(&cat, &payload)?;
    if back.opens != p.opens || back.dims != p.dims || back.restrictions != p.restrictions {
        return Err(Error::FunctorialityViolated("round trip changed the presheaf".into()));
    }
    Ok((cat, back))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RestrictionJson {
    pub from: Vec<String>,
    pub to: Vec<String>,
    pub matrix: Vec<Vec<CJson>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresheafJson {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
    pub dims: Vec<usize>,
    #[serde(default)]
    pub restrictions: Vec<RestrictionJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spec_points: Option<Vec<String>>,
}

pub fn parse_points(points: &[String], names: &[String]) -> Result<OpenSet> {
    names
        .iter()
        .map(|n| points.iter().position(|p| p == n).ok_or_else(|| Error::InvalidInput(format!("unknown point `{n}`"))))
        .collect()
}

impl PresheafJson {
    pub fn into_presheaf(self) -> Result<Presheaf> {
        let opens: Vec<OpenSet> = self.opens.iter().map(|o| parse_points(&self.points, o)).collect::<Result<_>>()?;
        let find = |names: &[String]| -> Result<usize> {
            let s = parse_points(&self.points, names)?;
            opens.iter().position(|o| *o == s).ok_or_else(|| Error::InvalidInput(format!("{names:?} is not an open")))
        };
        let mut given = Vec::new();
        for r in &self.restrictions {
            given.push((find(&r.from)?, find(&r.to)?, json::matrix_from_json(&r.matrix, "restriction")?));
        }
        let spec = match &self.spec_points {
            Some(s) => Some(parse_points(&self.points, s)?),
            None => None,
        };
        let dims = self.dims.clone();
        // zero-sized matrices lose their shape in JSON; rebuild them
        let given = given
            .into_iter()
            .map(|(u, v, m)| if m.is_empty() { (u, v, CMatrix::zeros(dims[v], dims[u])) } else { (u, v, m) })
            .collect();
        Presheaf::new(self.points, opens, dims, given, spec)
    }
}
