//! Named verification suites, runnable from the command line. Each one is
//! seeded, so repeated runs give identical reports.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cechcat::{self, Basis, FiniteCategory, OpenSet, Presheaf, SingleBasis, TransversalityOracle};
use crate::error::{Error, Result};
use crate::homology::{self, exact};
use crate::koszul::{self, AxisPoint};
use crate::linalg::{self, c, CMatrix};
use crate::qpair::{jordan_q_pair, validate_qpair, QParameter, ToleranceConfig};
use crate::qtopology::{putinar_spectrum, Geometry};
use crate::{funcalc, random};

pub const SUITES: [&str; 8] = ["nilpotent", "qprojection", "koszul", "homomorphism", "putinar", "cech", "category", "homology"];

const MAX_LISTED: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub passed: bool,
    pub checks: usize,
    pub failures: Vec<String>,
    /// Counts worth reporting even on success, such as guard-band hits.
    pub notes: Vec<String>,
}

struct Tally {
    name: &'static str,
    checks: usize,
    failed: usize,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Self { name, checks: 0, failed: 0, failures: Vec::new(), notes: Vec::new() }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_LISTED {
                self.failures.push(msg());
            }
        }
    }

    fn finish(mut self) -> SuiteReport {
        if self.failed > self.failures.len() {
            self.failures.push(format!("… {} failures in total", self.failed));
        }
        SuiteReport { name: self.name.to_string(), passed: self.failed == 0, checks: self.checks, failures: self.failures, notes: self.notes }
    }
}

pub fn run_suite(name: &str, cfg: &ToleranceConfig) -> Result<Vec<SuiteReport>> {
    match name {
        "all" => SUITES.iter().map(|s| run_one(s, cfg)).collect(),
        _ => Ok(vec![run_one(name, cfg)?]),
    }
}

/// Older names still accepted on the command line.
const ALIASES: [(&str, &str); 1] = [("propCex3", "nilpotent")];

fn run_one(name: &str, cfg: &ToleranceConfig) -> Result<SuiteReport> {
    let name = ALIASES.iter().find(|a| a.0 == name).map_or(name, |a| a.1);
    Ok(match name {
        "nilpotent" => nilpotent_spectra(cfg),
        "qprojection" => q_projection(cfg, 50, 101),
        "koszul" => koszul_validity(cfg),
        "homomorphism" => homomorphism(cfg),
        "putinar" => putinar_closure(cfg),
        "cech" => cech(cfg),
        "category" => category(),
        "homology" => homology_oracle(cfg),
        other => return Err(Error::InvalidInput(format!("unknown suite `{other}`; expected one of {SUITES:?} or all"))),
    })
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random nilpotent pairs have Taylor and local Putinar spectrum `{(0,0)}`.
pub fn nilpotent_spectra(cfg: &ToleranceConfig) -> SuiteReport {
    let mut t = Tally::new("nilpotent");
    let mut r = rng(0xce3);
    for i in 0..50 {
        let q = random::random_q(&mut r, 0.1, 0.9);
        let dim = r.random_range(2..=8);
        let pair = random::random_nilpotent_pair(&mut r, dim, q).with_tolerances(*cfg);
        match putinar_spectrum(&pair, Geometry::Local, cfg) {
            Ok(p) => {
                t.check(p.taylor.taylor == vec![AxisPoint::origin()] && p.taylor.undecided.is_empty(), || {
                    format!("pair {i}: taylor {:?}, undecided {:?}", p.taylor.taylor, p.taylor.undecided)
                });
                t.check(p.closed.generators == vec![AxisPoint::origin()], || format!("pair {i}: local generators {:?}", p.closed.generators));
            }
            Err(e) => t.check(false, || format!("pair {i}: {e}")),
        }
    }
    t.finish()
}

/// Grid scans on both axes find no non-transversal point off the
/// candidate set.
pub fn q_projection(cfg: &ToleranceConfig, pairs: usize, grid: usize) -> SuiteReport {
    let mut t = Tally::new("qprojection");
    let mut r = rng(0x9e0);
    let mut ambiguous = 0;
    for i in 0..pairs {
        let q = random::random_q(&mut r, 0.1, 0.9);
        let pair = random::random_valid_pair(&mut r, q, &random::PairSampler::default()).with_tolerances(*cfg);
        match koszul::grid_scan(&pair, cfg, grid, None) {
            Ok(s) => {
                ambiguous += s.ambiguous.len();
                t.check(s.outside.is_empty(), || format!("pair {i}: non-transversal off candidates at {:?}", s.outside));
            }
            Err(e) => t.check(false, || format!("pair {i}: {e}")),
        }
    }
    t.notes.push(format!("rank guard hits: {ambiguous}"));
    t.finish()
}

/// Dimension of `ker(D − μ)` for diagonal `D`; entries equal up to
/// rounding of the generating products count as equal.
fn diagonal_kernel(diag: &[Complex64], mu: Complex64) -> usize {
    diag.iter().filter(|&&d| (d - mu).norm() <= 1e-12 * (1.0 + mu.norm())).count()
}

/// Composite residuals on random samples, and S = 0 homology against the
/// diagonal closed form.
pub fn koszul_validity(cfg: &ToleranceConfig) -> SuiteReport {
    let mut t = Tally::new("koszul");
    let mut r = rng(0x605);
    for i in 0..1000 {
        let q = random::random_q(&mut r, 0.1, 0.9);
        let pair = random::random_valid_pair(&mut r, q, &random::PairSampler::default());
        let p = random::random_axis_point(&mut r, 3.0);
        let k = koszul::build_koszul(&pair, p).expect("axis point");
        let (res, scale) = (k.composite_residual(), k.scale(&pair));
        t.check(res <= 1e-10 * scale, || format!("sample {i}: residual {res:e} > 1e-10·{scale:e}"));
    }
    for i in 0..20 {
        let q = QParameter::real([0.5, 0.25, 0.8][i % 3]).expect("valid");
        let n = 1 + i % 3;
        let mut diag: Vec<Complex64> = Vec::new();
        for _ in 0..n {
            let z = match r.random_range(0..4) {
                0 => Complex64::new(0.0, 0.0),
                1 if !diag.is_empty() => diag[0] * q.inv(),
                _ => Complex64::new(r.random_range(-3i32..=3) as f64, r.random_range(-2i32..=2) as f64),
            };
            diag.push(z);
        }
        let pair = validate_qpair(linalg::diag(&diag), CMatrix::zeros(n, n), q, *cfg).expect("S = 0 commutes");
        let mut probes: Vec<AxisPoint> = vec![AxisPoint::origin()];
        for &d in &diag {
            probes.push(AxisPoint::x(d));
            probes.push(AxisPoint::x(d * q.inv()));
            probes.push(AxisPoint::x(d * q.value()));
            probes.push(AxisPoint::y(d + c(1.0, 0.0)));
        }
        probes.push(AxisPoint::x(c(0.7, 0.3)));
        for p in probes {
            let mu = p.l1;
            let expected = if p.l2 != Complex64::new(0.0, 0.0) {
                true
            } else {
                let scaled: Vec<Complex64> = diag.iter().map(|d| d * q.inv()).collect();
                diagonal_kernel(&scaled, mu) == 0 && diagonal_kernel(&diag, mu) == 0
            };
            match koszul::is_transversal(&pair, p, cfg) {
                Ok(v) => t.check(v == expected, || format!("instance {i} at {p}: got {v}, closed form {expected}")),
                Err(e) => t.check(false, || format!("instance {i} at {p}: {e}")),
            }
        }
    }
    t.finish()
}

/// `eval(f·g) = eval(f)·eval(g)` on a (4,4) box.
pub fn homomorphism(cfg: &ToleranceConfig) -> SuiteReport {
    let mut t = Tally::new("homomorphism");
    let mut r = rng(0x4011);
    let sampler = random::PairSampler { min_dim: 1, max_dim: 6, max_block: 4, seed_modulus: (0.3, 1.5) };
    let mut worst: f64 = 0.0;
    for i in 0..500 {
        let q = random::random_q(&mut r, 0.3, 0.95);
        let pair = random::random_calculus_pair(&mut r, q, &sampler);
        let f = random::random_series(&mut r, q, 4, 4);
        let g = random::random_series(&mut r, q, 4, 4);
        match funcalc::homomorphism_check(&f, &g, &pair, cfg) {
            Ok(h) => {
                worst = worst.max(h.relative());
                t.check(h.residual <= 1e-9 * h.scale, || format!("triple {i}: residual {:e}, scale {:e}", h.residual, h.scale));
            }
            Err(e) => t.check(false, || format!("triple {i}: {e}")),
        }
    }
    t.notes.push(format!("worst relative residual: {worst:.3e}"));
    t.finish()
}

/// For the scalar pair the OY Putinar spectrum is the forward orbit of 1.
pub fn putinar_closure(cfg: &ToleranceConfig) -> SuiteReport {
    let mut t = Tally::new("putinar");
    let q = QParameter::real(0.5).expect("valid");
    let pair = jordan_q_pair(c(1.0, 0.0), 1, q).expect("valid").with_tolerances(*cfg);
    let spec = match putinar_spectrum(&pair, Geometry::OY, cfg) {
        Ok(s) => s,
        Err(e) => {
            t.check(false, || e.to_string());
            return t.finish();
        }
    };
    for k in 0..=20 {
        let p = AxisPoint::x(c(2f64.powi(k), 0.0));
        t.check(spec.closed.contains(&p), || format!("2^{k} missing"));
    }
    let mut r = rng(0x9a7);
    let mut tested = 0;
    while tested < 20 {
        let z = random::polar(&mut r, 0.05, 4.0e6);
        let k = (z.norm().log2()).round();
        if (z - c(2f64.powf(k), 0.0)).norm() < 1e-3 * z.norm() {
            continue;
        }
        tested += 1;
        t.check(!spec.closed.contains(&AxisPoint::x(z)), || format!("{z} reported in the spectrum"));
    }
    t.finish()
}

fn up_sets(order: &[Vec<bool>]) -> Vec<OpenSet> {
    let n = order.len();
    (0u32..1 << n)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<OpenSet>())
        .filter(|s| s.iter().all(|&a| (0..n).all(|b| !order[a][b] || s.contains(&b))))
        .collect()
}

fn to_float(m: &exact::QMatrix, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |i, j| c(exact::to_f64(&m[i][j]), 0.0))
}

/// Presheaf of point stalks with projections, each space twisted by a
/// unimodular integer change of basis so all arithmetic stays exact.
fn integer_presheaf<R: Rng>(rng: &mut R, order: &[Vec<bool>]) -> Presheaf {
    let n = order.len();
    let opens = up_sets(order);
    let stalk: Vec<usize> = (0..n).map(|_| rng.random_range(0..=2)).collect();
    let dims: Vec<usize> = opens.iter().map(|o| o.iter().map(|&p| stalk[p]).sum()).collect();
    let twists: Vec<(CMatrix, CMatrix)> = dims
        .iter()
        .map(|&d| {
            let (g, gi) = exact::unimodular(rng, d);
            (to_float(&g, d, d), to_float(&gi, d, d))
        })
        .collect();
    let mut given = Vec::new();
    for (u, ou) in opens.iter().enumerate() {
        for (v, ov) in opens.iter().enumerate() {
            if u == v || !ov.is_subset(ou) {
                continue;
            }
            let mut proj = CMatrix::zeros(dims[v], dims[u]);
            let (mut row, mut col) = (0, 0);
            for &p in ou {
                if ov.contains(&p) {
                    for k in 0..stalk[p] {
                        proj[(row + k, col + k)] = c(1.0, 0.0);
                    }
                    row += stalk[p];
                }
                col += stalk[p];
            }
            given.push((u, v, &twists[v].0 * proj * &twists[u].1));
        }
    }
    let names = (0..n).map(|i| format!("p{i}")).collect();
    Presheaf::new(names, opens, dims, given, None).expect("stalk presheaf is functorial")
}

/// Minimal opens of every point plus a few random extra opens.
fn covering_basis<R: Rng>(rng: &mut R, p: &Presheaf) -> Basis {
    let mut members: BTreeSet<OpenSet> = p.point_objects().into_iter().map(|i| p.opens()[i].clone()).collect();
    for o in p.opens() {
        if !o.is_empty() && rng.random_bool(0.2) {
            members.insert(o.clone());
        }
    }
    Basis::new(members.into_iter().take(3).collect())
}

/// Rank-`r` integer matrix.
fn integer_rank<R: Rng>(rng: &mut R, rows: usize, cols: usize, r: usize) -> CMatrix {
    let (a, _) = exact::unimodular(rng, rows);
    let (b, _) = exact::unimodular(rng, cols);
    let mut d = CMatrix::zeros(rows, cols);
    for k in 0..r {
        d[(k, k)] = c(1.0, 0.0);
    }
    to_float(&a, rows, rows) * d * to_float(&b, cols, cols)
}

fn three_point(global: usize) -> Presheaf {
    let set = |v: &[usize]| v.iter().copied().collect::<OpenSet>();
    let opens = vec![set(&[0, 1, 2]), set(&[0, 1]), set(&[1, 2]), set(&[1])];
    let id = linalg::identity(1);
    let top = if global == 1 { id.clone() } else { CMatrix::zeros(1, 0) };
    let given = vec![(1, 3, id.clone()), (2, 3, id), (0, 1, top.clone()), (0, 2, top)];
    Presheaf::new(vec!["a".into(), "b".into(), "c".into()], opens, vec![global, 1, 1, 1], given, None).expect("functorial")
}

pub fn cech(cfg: &ToleranceConfig) -> SuiteReport {
    let mut t = Tally::new("cech");
    let mut r = rng(0xcec);
    for n in 1..=3 {
        for order in cechcat::natural_posets(n) {
            for _ in 0..3 {
                let p = integer_presheaf(&mut r, &order);
                let basis = covering_basis(&mut r, &p);
                for o in p.opens().iter().filter(|o| !o.is_empty()) {
                    match cechcat::cech_complex(&p, &basis, o, None) {
                        Ok(cx) => {
                            let dd = cx.max_dd_residual();
                            t.check(dd == 0.0, || format!("∂∂ = {dd:e} over {o:?}"));
                        }
                        Err(Error::BasisNotCovering(_)) => {}
                        Err(e) => t.check(false, || e.to_string()),
                    }
                }
            }
        }
    }
    for dim in 0..=4 {
        for aug in 0..=4 {
            for rank in 0..=dim.min(aug) {
                let s = SingleBasis { dim, augmentation: integer_rank(&mut r, dim, aug, rank) };
                let expect = dim == aug && rank == dim;
                match cechcat::build_augmented(&s, 3).and_then(|cx| cx.report(cfg)) {
                    Ok(rep) => t.check(rep.exact == expect, || format!("single basis dim {dim}, source {aug}, rank {rank}: exact = {}", rep.exact)),
                    Err(e) => t.check(false, || e.to_string()),
                }
            }
        }
    }
    let basis = Basis::new(vec![[0, 1].into_iter().collect(), [1, 2].into_iter().collect()]);
    match cechcat::cech_report(&three_point(1), &basis, None, cfg) {
        Ok(rep) => t.check(rep.exact && rep.ranks == vec![1, 1, 3, 5, 11], || format!("constant sheaf: {rep:?}")),
        Err(e) => t.check(false, || e.to_string()),
    }
    match cechcat::cech_report(&three_point(0), &basis, None, cfg) {
        Ok(rep) => t.check(!rep.exact && rep.first_failure == Some(0), || format!("vanishing sections: {rep:?}")),
        Err(e) => t.check(false, || e.to_string()),
    }
    t.finish()
}

fn category_checks(t: &mut Tally, cat: &FiniteCategory, oracle: &TransversalityOracle, label: &str) {
    let s = match cechcat::category_spectrum(cat, oracle) {
        Ok(s) => s,
        Err(e) => return t.check(false, || format!("{label}: {e}")),
    };
    t.check(cat.is_up_closed(&s.res), || format!("{label}: res not up-closed"));
    let all: BTreeSet<usize> = (0..cat.len()).collect();
    t.check(s.sigma == all.difference(&s.res).copied().collect(), || format!("{label}: sigma is not the complement"));
    if let Some(a) = cat.least() {
        if !s.res.contains(&a) || s.res.len() < cat.len() {
            t.check(s.sigma.contains(&a), || format!("{label}: least object outside sigma"));
        }
    }
    for a in 0..cat.len() {
        match cechcat::spectral_mapping_check(cat, oracle, a) {
            Ok(rep) => t.check(rep.passed(), || format!("{label}: restriction identities fail at {}", cat.name(a))),
            Err(e) => t.check(false, || format!("{label}: {e}")),
        }
    }
    match cechcat::putinar_restriction_check(cat, oracle) {
        Ok(ok) => t.check(ok, || format!("{label}: σ_P ≠ σ ∩ Spec(A)")),
        Err(e) => t.check(false, || format!("{label}: {e}")),
    }
}

/// Exhaustive sweep over posets of at most five objects and all oracles,
/// then over presheaf categories of spaces with at most three points.
pub fn category() -> SuiteReport {
    let mut t = Tally::new("category");
    for n in 1..=5 {
        for (k, order) in cechcat::natural_posets(n).into_iter().enumerate() {
            let cat = FiniteCategory::from_order(order).expect("partial order").with_maximal_points();
            let maximal: Vec<usize> = cat.points().iter().map(|p| cat.index_of(p).expect("named")).collect();
            for mask in 0u32..1 << n {
                let table: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                let pts = maximal.iter().map(|&m| table[m]).collect();
                let oracle = TransversalityOracle::from_table(table, pts);
                category_checks(&mut t, &cat, &oracle, &format!("poset {n}/{k} oracle {mask:b}"));
            }
        }
    }
    for n in 1..=3 {
        for (k, order) in cechcat::natural_posets(n).into_iter().enumerate() {
            let opens = up_sets(&order);
            let p = Presheaf::constant((0..n).map(|i| format!("p{i}")).collect(), opens, 1).expect("topology");
            let cat = p.to_category();
            let objs = p.point_objects();
            for mask in 0u32..1 << cat.len() {
                let table: Vec<bool> = (0..cat.len()).map(|i| mask >> i & 1 == 1).collect();
                let pts = objs.iter().map(|&o| table[o]).collect();
                let oracle = TransversalityOracle::from_table(table, pts);
                category_checks(&mut t, &cat, &oracle, &format!("space {n}/{k} oracle {mask:b}"));
            }
        }
    }
    t.finish()
}

/// Floating homology against exact row reduction on random rational
/// complexes.
pub fn homology_oracle(cfg: &ToleranceConfig) -> SuiteReport {
    let mut t = Tally::new("homology");
    let mut r = rng(0x40);
    for i in 0..200 {
        let (cx, _) = exact::random_rational_complex(&mut r, 24);
        let want = cx.homology_dims();
        match homology::homology_dims(&cx.to_float(), cfg) {
            Ok(h) => t.check(h.dims == want, || format!("complex {i}: floating {:?}, exact {want:?}", h.dims)),
            Err(e) => t.check(false, || format!("complex {i}: {e}")),
        }
    }
    t.finish()
}
