//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Expected values come from closed forms and exact arithmetic
//! written here, not from the library's own candidate or rank logic.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qplane_core::cechcat::{self, Basis, FiniteCategory, OpenSet, Presheaf, SingleBasis, TransversalityOracle};
use qplane_core::homology::exact;
use qplane_core::koszul::{self, AxisPoint};
use qplane_core::qseries::QSeries;
use qplane_core::{funcalc, putinar_spectrum, validate_qpair, CMatrix, Geometry, QPair, QParameter, ToleranceConfig};

type M = DMatrix<Complex64>;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn fro(m: &M) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

fn maxabs(m: &M) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

struct Outcome {
    ok: bool,
    detail: String,
}

// ---------------------------------------------------------------- pairs

/// A pair built from blocks whose spectra are known in closed form.
struct Built {
    pair: QPair,
    t_spec: Vec<Complex64>,
    s_spec: Vec<Complex64>,
}

fn shift(n: usize) -> M {
    M::from_fn(n, n, |i, j| if i == j + 1 { c(1.0, 0.0) } else { c(0.0, 0.0) })
}

fn diag(d: &[Complex64]) -> M {
    M::from_fn(d.len(), d.len(), |i, j| if i == j { d[i] } else { c(0.0, 0.0) })
}

/// Young-diagram monomials `x^a y^b`, `a < rows[b]`.
fn staircase(rows: &[usize], q: Complex64) -> (M, M) {
    let mono: Vec<(usize, usize)> = rows.iter().enumerate().flat_map(|(b, &len)| (0..len).map(move |a| (a, b))).collect();
    let n = mono.len();
    let at = |m: (usize, usize)| mono.iter().position(|&x| x == m);
    let mut t = M::zeros(n, n);
    let mut s = M::zeros(n, n);
    for (col, &(a, b)) in mono.iter().enumerate() {
        if let Some(r) = at((a + 1, b)) {
            t[(r, col)] = c(1.0, 0.0);
        }
        if let Some(r) = at((a, b + 1)) {
            s[(r, col)] = q.powu(a as u32);
        }
    }
    (t, s)
}

fn random_rows(rng: &mut ChaCha8Rng, size: usize) -> Vec<usize> {
    // partitions of `size` with nonincreasing parts
    let mut rows = Vec::new();
    let mut left = size;
    let mut cap = size;
    while left > 0 {
        let part = rng.random_range(1..=left.min(cap));
        rows.push(part);
        left -= part;
        cap = part;
    }
    rows
}

fn polar(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(rng.random_range(lo..hi), rng.random_range(0.0..std::f64::consts::TAU))
}

fn gauss(rng: &mut ChaCha8Rng) -> Complex64 {
    // Box-Muller keeps the test free of the library's sampler
    let (u, v): (f64, f64) = (rng.random_range(1e-12..1.0), rng.random_range(0.0..1.0));
    let r = (-2.0 * u.ln()).sqrt();
    c(r * (std::f64::consts::TAU * v).cos(), r * (std::f64::consts::TAU * v).sin())
}

fn conjugator(rng: &mut ChaCha8Rng, n: usize) -> (M, M) {
    let g = M::from_fn(n, n, |_, _| gauss(rng));
    let u = g.qr().q();
    let d = diag(&(0..n).map(|_| c(rng.random_range(0.5..2.0), 0.0)).collect::<Vec<_>>());
    let w = u * d;
    let wi = w.clone().try_inverse().expect("well conditioned");
    (w, wi)
}

#[derive(Clone, Copy)]
enum Kinds {
    Any,
    Nilpotent,
    SNilpotent,
}

fn build_pair(rng: &mut ChaCha8Rng, q: QParameter, dim: usize, max_block: usize, kinds: Kinds) -> Built {
    let qv = q.value();
    let mut blocks: Vec<(M, M)> = Vec::new();
    let (mut t_spec, mut s_spec) = (Vec::new(), Vec::new());
    let mut left = dim;
    while left > 0 {
        let k = rng.random_range(1..=left.min(max_block));
        let kind = match kinds {
            Kinds::Any => rng.random_range(0..3),
            Kinds::Nilpotent => 2,
            Kinds::SNilpotent => [0, 2][rng.random_range(0..2)],
        };
        match kind {
            0 => {
                let t0 = polar(rng, 0.3, 2.0);
                let d: Vec<Complex64> = (0..k).map(|i| t0 * qv.powi(-(i as i32))).collect();
                t_spec.extend(d.iter().copied());
                s_spec.push(c(0.0, 0.0));
                blocks.push((diag(&d), shift(k)));
            }
            1 => {
                let s0 = polar(rng, 0.3, 2.0);
                let d: Vec<Complex64> = (0..k).map(|i| s0 * qv.powi(i as i32)).collect();
                s_spec.extend(d.iter().copied());
                t_spec.push(c(0.0, 0.0));
                blocks.push((shift(k), diag(&d)));
            }
            _ => {
                t_spec.push(c(0.0, 0.0));
                s_spec.push(c(0.0, 0.0));
                blocks.push(staircase(&random_rows(rng, k), qv));
            }
        }
        left -= k;
    }
    let mut t = M::zeros(dim, dim);
    let mut s = M::zeros(dim, dim);
    let mut at = 0;
    for (bt, bs) in &blocks {
        let k = bt.nrows();
        t.view_mut((at, at), (k, k)).copy_from(bt);
        s.view_mut((at, at), (k, k)).copy_from(bs);
        at += k;
    }
    let (w, wi) = conjugator(rng, dim);
    let (t, s) = (&wi * t * &w, &wi * s * &w);
    let pair = validate_qpair(t, s, q, ToleranceConfig::default()).expect("relation holds by construction");
    Built { pair, t_spec, s_spec }
}

fn random_q(rng: &mut ChaCha8Rng) -> QParameter {
    QParameter::new(polar(rng, 0.1, 0.9)).unwrap()
}

// ---------------------------------------------------------------- exact rank

type Q = BigRational;

fn rational_rank(mut a: Vec<Vec<Q>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(rank, p);
        for i in rank + 1..rows {
            if a[i][col].is_zero() {
                continue;
            }
            let f = &a[i][col] / &a[rank][col];
            for j in col..cols {
                let sub = &f * &a[rank][j];
                a[i][j] -= sub;
            }
        }
        rank += 1;
    }
    rank
}

fn q_int(v: i64) -> Q {
    BigRational::from_integer(BigInt::from(v))
}

// ---------------------------------------------------------------- 1

fn nilpotent_spectra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let cfg = ToleranceConfig::default();
    let mut bad = Vec::new();
    for i in 0..50 {
        let q = random_q(&mut rng);
        let dim = rng.random_range(2..=8);
        let b = build_pair(&mut rng, q, dim, dim, Kinds::Nilpotent);
        let (t, s) = (b.pair.t().clone(), b.pair.s().clone());
        let mut tp = M::identity(dim, dim);
        let mut sp = M::identity(dim, dim);
        for _ in 0..dim {
            tp = &tp * &t;
            sp = &sp * &s;
        }
        assert!(maxabs(&tp) < 1e-9 && maxabs(&sp) < 1e-9, "generator produced a non-nilpotent pair");
        let origin_only = |pts: &[AxisPoint]| pts.len() == 1 && pts[0].l1.norm() <= cfg.point_match_tol && pts[0].l2.norm() <= cfg.point_match_tol;
        let taylor = koszul::taylor_spectrum(&b.pair, &cfg).unwrap();
        let local = putinar_spectrum(&b.pair, Geometry::Local, &cfg).unwrap();
        if !origin_only(&taylor.taylor) || !taylor.undecided.is_empty() || !origin_only(&local.closed.generators) {
            bad.push(format!("pair {i}: taylor {:?} local {:?}", taylor.taylor, local.closed.generators));
        }
    }
    Outcome { ok: bad.is_empty(), detail: if bad.is_empty() { "50 nilpotent pairs, both spectra {(0,0)}".into() } else { bad.join("; ") } }
}

// ---------------------------------------------------------------- 2

fn q_projection() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let cfg = ToleranceConfig::default();
    let (mut outside, mut guard, mut scanned) = (Vec::new(), 0usize, 0usize);
    // farthest guard hit from a candidate, in grid steps
    let mut guard_gap: f64 = 0.0;
    for i in 0..50 {
        let q = random_q(&mut rng);
        let dim = rng.random_range(2..=6);
        let b = build_pair(&mut rng, q, dim, 4, Kinds::Any);
        let (qv, qi) = (q.value(), q.inv());
        let mut cands: Vec<AxisPoint> = vec![AxisPoint::origin()];
        for &t in &b.t_spec {
            cands.push(AxisPoint::x(t));
            cands.push(AxisPoint::x(t * qi));
        }
        for &s in &b.s_spec {
            cands.push(AxisPoint::y(s));
            cands.push(AxisPoint::y(s * qv));
        }
        let radius = 1.5 * cands.iter().map(|p| p.l1.norm().max(p.l2.norm())).fold(0.0, f64::max) + 1.0;
        let n = 101;
        let coords: Vec<f64> = (0..n).map(|k| -radius + 2.0 * radius * k as f64 / (n - 1) as f64).collect();
        for axis in 0..2 {
            for &re in &coords {
                for &im in &coords {
                    let z = c(re, im);
                    let p = if axis == 0 { AxisPoint::x(z) } else { AxisPoint::y(z) };
                    scanned += 1;
                    let rep = koszul::koszul_report(&b.pair, p, &cfg).unwrap();
                    if rep.ambiguous.is_some() {
                        guard += 1;
                        let d = cands.iter().map(|c| (c.l1 - p.l1).norm() + (c.l2 - p.l2).norm()).fold(f64::INFINITY, f64::min);
                        guard_gap = guard_gap.max(d / (2.0 * radius / (n - 1) as f64));
                        continue;
                    }
                    let hit = rep.dims.iter().any(|&d| d > 0);
                    let near = cands.iter().any(|c| (c.l1 - p.l1).norm() + (c.l2 - p.l2).norm() <= 1e-8 * (1.0 + c.l1.norm() + c.l2.norm()));
                    if hit && !near {
                        outside.push(format!("pair {i} at {p}"));
                    }
                }
            }
        }
    }
    // guard hits are reported against a target of zero; the pass condition
    // is the inclusion itself
    Outcome {
        ok: outside.is_empty(),
        detail: format!(
            "{scanned} grid points, {} outside candidates, {guard} rank guard hits (target 0{}) {}",
            outside.len(),
            if guard > 0 { format!(", all within {guard_gap:.1} grid steps of a candidate") } else { String::new() },
            outside.iter().take(3).cloned().collect::<Vec<_>>().join(" ")
        ),
    }
}

// ---------------------------------------------------------------- 3

fn koszul_validity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    let cfg = ToleranceConfig::default();
    let mut worst: f64 = 0.0;
    let mut over = 0;
    for _ in 0..1000 {
        let q = random_q(&mut rng);
        let dim = rng.random_range(1..=6);
        let b = build_pair(&mut rng, q, dim, 4, Kinds::Any);
        let z = polar(&mut rng, 0.0, 3.0);
        let p = match rng.random_range(0..5) {
            0 => AxisPoint::origin(),
            1 | 2 => AxisPoint::x(z),
            _ => AxisPoint::y(z),
        };
        let k = koszul::build_koszul(&b.pair, p).unwrap();
        let prod = k.delta1() * k.delta2();
        let lam = p.l1.norm().max(p.l2.norm());
        let scale = 1.0 + maxabs(b.pair.t()) * maxabs(b.pair.s()) * dim as f64 + lam * lam;
        let r = maxabs(&prod) / scale;
        worst = worst.max(r);
        if r > 1e-10 {
            over += 1;
        }
    }
    // S = 0: kernels of the diagonal give the homology in closed form
    let mut mismatches = Vec::new();
    let mut probes_total = 0;
    for i in 0..20 {
        let q = QParameter::real([0.5, 0.25, 0.75, 0.6][i % 4]).unwrap();
        let n = 1 + i % 3;
        let mut d: Vec<Complex64> = Vec::new();
        for _ in 0..n {
            let v = match rng.random_range(0..4) {
                0 => c(0.0, 0.0),
                1 if !d.is_empty() => d[rng.random_range(0..d.len())] / q.value(),
                2 if !d.is_empty() => d[rng.random_range(0..d.len())],
                _ => c(rng.random_range(-3..=3) as f64, rng.random_range(-2..=2) as f64),
            };
            d.push(v);
        }
        let pair = validate_qpair(diag(&d), M::zeros(n, n), q, cfg).unwrap();
        let count = |mu: Complex64, f: f64| d.iter().filter(|&&t| (t * f - mu).norm() <= 1e-12 * (1.0 + mu.norm())).count();
        let mut probes = vec![AxisPoint::origin(), AxisPoint::x(c(0.37, -1.1)), AxisPoint::y(c(0.5, 0.5))];
        for &t in &d {
            probes.push(AxisPoint::x(t));
            probes.push(AxisPoint::x(t / q.value()));
            probes.push(AxisPoint::x(t * q.value()));
        }
        for p in probes {
            probes_total += 1;
            let want: [usize; 3] = if p.l2.norm() > 0.0 {
                [0, 0, 0]
            } else {
                let h0 = count(p.l1, 1.0 / q.value().re);
                let h2 = count(p.l1, 1.0);
                [h0, h0 + h2, h2]
            };
            let got = koszul::koszul_report(&pair, p, &cfg).unwrap();
            let verdict_ok = got.ambiguous.is_none() && (got.dims.iter().all(|&x| x == 0) == want.iter().all(|&x| x == 0));
            if !verdict_ok || got.dims != want {
                mismatches.push(format!("instance {i} at {p}: {:?} vs {want:?}", got.dims));
            }
        }
    }
    Outcome {
        ok: over == 0 && mismatches.is_empty(),
        detail: format!(
            "1000 samples, worst δ₁δ₂ residual {worst:.2e}·scale; {probes_total} diagonal probes, {} mismatches {}",
            mismatches.len(),
            mismatches.iter().take(3).cloned().collect::<Vec<_>>().join(" ")
        ),
    }
}

// ---------------------------------------------------------------- 4

/// Coefficients `[j][i]` of `Σ c x^i y^j`.
type Coeffs = Vec<Vec<Complex64>>;

fn twisted_product(f: &Coeffs, g: &Coeffs, q: Complex64, mx: usize, my: usize) -> Coeffs {
    // x^a y^i · x^d y^j = q^{i d} x^{a+d} y^{i+j}
    let mut out = vec![vec![c(0.0, 0.0); mx]; my];
    for (i, row_f) in f.iter().enumerate() {
        for (a, &cf) in row_f.iter().enumerate() {
            for (j, row_g) in g.iter().enumerate() {
                for (d, &cg) in row_g.iter().enumerate() {
                    if a + d < mx && i + j < my {
                        out[i + j][a + d] += cf * cg * q.powu((i * d) as u32);
                    }
                }
            }
        }
    }
    out
}

fn eval(f: &Coeffs, t: &M, s: &M) -> M {
    let n = t.nrows();
    let mut out = M::zeros(n, n);
    let mut sp = M::identity(n, n);
    for row in f {
        let mut tp = M::identity(n, n);
        for &cf in row {
            out += &tp * &sp * cf;
            tp = &tp * t;
        }
        sp = &sp * s;
    }
    out
}

fn to_series(f: &Coeffs, q: Complex64) -> QSeries {
    let (my, mx) = (f.len(), f[0].len());
    let mut s = QSeries::zero(q, mx, my);
    for (j, row) in f.iter().enumerate() {
        for (i, &v) in row.iter().enumerate() {
            s.set(i, j, v);
        }
    }
    s
}

fn homomorphism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let cfg = ToleranceConfig::default();
    let mut worst: f64 = 0.0;
    let mut failures = Vec::new();
    for k in 0..500 {
        let q = QParameter::new(polar(&mut rng, 0.3, 0.95)).unwrap();
        let dim = rng.random_range(1..=6);
        let b = build_pair(&mut rng, q, dim, 4, Kinds::SNilpotent);
        let (t, s) = (b.pair.t().clone(), b.pair.s().clone());
        let f: Coeffs = (0..4).map(|_| (0..4).map(|_| gauss(&mut rng)).collect()).collect();
        let g: Coeffs = (0..4).map(|_| (0..4).map(|_| gauss(&mut rng)).collect()).collect();
        let lift = |h: &Coeffs| -> Coeffs { h.iter().map(|r| r.iter().copied().chain(std::iter::repeat(c(0.0, 0.0)).take(3)).collect()).collect() };
        let (fl, gl) = (to_series(&lift(&f), q.value()), to_series(&lift(&g), q.value()));
        let prod = fl.q_mul(&gl).unwrap();
        let lhs = funcalc::evaluate(&prod, &b.pair, &cfg).unwrap().value;
        let rhs = funcalc::evaluate(&fl, &b.pair, &cfg).unwrap().value * funcalc::evaluate(&gl, &b.pair, &cfg).unwrap().value;
        let (tn, sn) = (fro(&t), fro(&s));
        let major = |h: &Coeffs| -> f64 {
            h.iter().enumerate().map(|(j, row)| row.iter().enumerate().map(|(i, z)| z.norm() * tn.powi(i as i32) * sn.powi(j as i32)).sum::<f64>()).sum()
        };
        let scale = 1.0 + major(&f) * major(&g);
        let r = fro(&(&lhs - &rhs)) / scale;
        worst = worst.max(r);
        // the library product and evaluation agree with the direct formulas
        let direct = twisted_product(&f, &g, q.value(), 7, 4);
        let coeff_gap = (0..4)
            .flat_map(|j| (0..7).map(move |i| (i, j)))
            .map(|(i, j)| (prod.coeff(i, j) - direct[j][i]).norm())
            .fold(0.0, f64::max);
        let eval_gap = fro(&(eval(&direct, &t, &s) - &lhs)) / scale;
        if r > 1e-9 || coeff_gap > 1e-12 * (1.0 + major(&f) * major(&g)) || eval_gap > 1e-9 {
            failures.push(format!("triple {k}: residual {r:.2e}, coefficient gap {coeff_gap:.2e}, evaluation gap {eval_gap:.2e}"));
        }
    }
    Outcome {
        ok: failures.is_empty(),
        detail: format!("500 triples, worst residual {worst:.2e}·scale {}", failures.iter().take(3).cloned().collect::<Vec<_>>().join(" ")),
    }
}

// ---------------------------------------------------------------- 5

fn putinar_closure() -> Outcome {
    let cfg = ToleranceConfig::default();
    let q = QParameter::real(0.5).unwrap();
    let pair = validate_qpair(M::from_element(1, 1, c(1.0, 0.0)), M::zeros(1, 1), q, cfg).unwrap();
    let sp = putinar_spectrum(&pair, Geometry::OY, &cfg).unwrap();
    let on_orbit = |z: Complex64| (0..=40).any(|k| (z - c(2f64.powi(k), 0.0)).norm() <= 1e-8 * (1.0 + z.norm()));
    let mut bad = Vec::new();
    for k in 0..=20 {
        let z = c(2f64.powi(k), 0.0);
        if !sp.closed.contains(&AxisPoint::x(z)) {
            bad.push(format!("2^{k} missing"));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut probes: Vec<Complex64> = vec![c(0.5, 0.0), c(3.0, 0.0), c(-2.0, 0.0), c(1024.0 * (1.0 + 1e-6), 0.0), c(0.0, 2.0)];
    while probes.len() < 20 {
        let z = polar(&mut rng, 0.01, 1.0e6);
        if !on_orbit(z) {
            probes.push(z);
        }
    }
    for z in &probes {
        if sp.closed.contains(&AxisPoint::x(*z)) {
            bad.push(format!("{z} reported"));
        }
    }
    Outcome { ok: bad.is_empty(), detail: format!("orbit 2^0..2^20 present, {} off-orbit points absent {}", probes.len(), bad.join(" ")) }
}

// ---------------------------------------------------------------- 6

fn set(v: &[usize]) -> OpenSet {
    v.iter().copied().collect()
}

/// Opens of a random finite space: the up-sets of a random preorder.
fn random_space(rng: &mut ChaCha8Rng, n: usize) -> Vec<OpenSet> {
    let mut rel = vec![vec![false; n]; n];
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for i in 0..n {
        for j in 0..n {
            if i != j && rng.random_bool(0.3) {
                rel[i][j] = true;
            }
        }
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][k] && rel[k][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    (0u32..1 << n)
        .map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect::<OpenSet>())
        .filter(|s| s.iter().all(|&a| (0..n).all(|b| !rel[a][b] || s.contains(&b))))
        .collect()
}

/// Integer-valued presheaf: random integer maps out of each stalk sum,
/// composed through projections so functoriality holds exactly.
fn integer_presheaf(rng: &mut ChaCha8Rng, n: usize) -> Presheaf {
    let opens = random_space(rng, n);
    let stalk: Vec<usize> = (0..n).map(|_| rng.random_range(0..=2)).collect();
    let dims: Vec<usize> = opens.iter().map(|o| o.iter().map(|&p| stalk[p]).sum()).collect();
    // each P(V) is the stalk sum scaled blockwise by a nonzero integer per point
    let scale: Vec<f64> = (0..n).map(|_| [1.0, -1.0, 2.0, -3.0][rng.random_range(0..4)]).collect();
    let mut given = Vec::new();
    for (u, ou) in opens.iter().enumerate() {
        for (v, ov) in opens.iter().enumerate() {
            if u == v || !ov.is_subset(ou) {
                continue;
            }
            let mut m = M::zeros(dims[v], dims[u]);
            let (mut row, mut col) = (0, 0);
            for &p in ou {
                if ov.contains(&p) {
                    for k in 0..stalk[p] {
                        // scale depends only on the point, so composites agree
                        let f = if ou.len() == n && ov.len() < n { scale[p] } else { 1.0 };
                        m[(row + k, col + k)] = c(f, 0.0);
                    }
                    row += stalk[p];
                }
                col += stalk[p];
            }
            given.push((u, v, m));
        }
    }
    Presheaf::new((0..n).map(|i| format!("p{i}")).collect(), opens, dims, given, None).expect("functorial by construction")
}

fn three_point(global: usize) -> Presheaf {
    let opens = vec![set(&[0, 1, 2]), set(&[0, 1]), set(&[1, 2]), set(&[1])];
    let id = M::identity(1, 1);
    let top = if global == 1 { id.clone() } else { M::zeros(1, 0) };
    let given = vec![(1, 3, id.clone()), (2, 3, id), (0, 1, top.clone()), (0, 2, top)];
    Presheaf::new(vec!["a".into(), "b".into(), "c".into()], opens, vec![global, 1, 1, 1], given, None).unwrap()
}

/// Ranks of the augmented tuple complex of the three-point space with
/// basis `{a,b}, {b,c}`, every nonempty intersection carrying ℚ and
/// identity restrictions; `global` is the dimension over the whole space.
fn three_point_ranks(global: usize, p_max: usize) -> Vec<usize> {
    let tuples = |len: usize| -> Vec<Vec<usize>> {
        (0..1usize << len).map(|m| (0..len).map(|k| m >> k & 1).collect()).collect()
    };
    let mut ranks = Vec::new();
    // augmentation: global sections into each basis element
    let eps: Vec<Vec<Q>> = (0..2).map(|_| (0..global).map(|_| q_int(1)).collect()).collect();
    ranks.push(if global == 0 { 0 } else { rational_rank(eps) });
    for p in 0..=p_max {
        let src = tuples(p + 1);
        let dst = tuples(p + 2);
        let mut m = vec![vec![q_int(0); src.len()]; dst.len()];
        for (r, t) in dst.iter().enumerate() {
            for j in 0..t.len() {
                let mut face = t.clone();
                face.remove(j);
                let col = src.iter().position(|s| *s == face).unwrap();
                let sign = if j % 2 == 0 { 1 } else { -1 };
                m[r][col] += q_int(sign);
            }
        }
        ranks.push(rational_rank(m));
    }
    ranks
}

fn cech() -> Outcome {
    let cfg = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut notes = Vec::new();
    let mut ok = true;
    // ∂∂ vanishes identically
    let mut complexes = 0;
    for _ in 0..60 {
        let n = rng.random_range(1..=4);
        let p = integer_presheaf(&mut rng, n);
        let mut members: Vec<OpenSet> = (0..n)
            .map(|pt| p.opens().iter().filter(|o| o.contains(&pt)).min_by_key(|o| o.len()).unwrap().clone())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        members.truncate(3);
        let basis = Basis::new(members);
        for u in p.opens().iter().filter(|o| !o.is_empty()) {
            let Ok(cx) = cechcat::cech_complex(&p, &basis, u, None) else { continue };
            complexes += 1;
            let maps = cx.complex.maps();
            for w in maps.windows(2) {
                let dd = &w[1] * &w[0];
                if dd.iter().any(|z| *z != c(0.0, 0.0)) {
                    ok = false;
                    notes.push(format!("nonzero ∂∂ over {u:?}"));
                }
            }
        }
    }
    notes.push(format!("∂∂ = 0 on {complexes} complexes"));
    // one basis element: exact iff the augmentation is invertible
    let mut cases = 0;
    for dim in 0..=4usize {
        for src in 0..=4usize {
            for r in 0..=dim.min(src) {
                let mut e = M::zeros(dim, src);
                for k in 0..r {
                    e[(k, k)] = c(1.0 + k as f64, 0.0);
                }
                // mix rows and columns so the rank is not visible from the layout
                if dim > 1 {
                    let row0 = e.row(0).clone_owned();
                    let mut row1 = e.row_mut(1);
                    row1 += row0 * c(2.0, 0.0);
                }
                let cx = cechcat::build_augmented(&SingleBasis { dim, augmentation: e }, 3).unwrap();
                let maps = cx.complex.maps();
                let pattern = (1..maps.len()).all(|k| {
                    let expect = if k % 2 == 0 { M::identity(dim, dim) } else { M::zeros(dim, dim) };
                    maps[k] == expect
                });
                let exact = cx.report(&cfg).unwrap().exact;
                let want = dim == src && r == dim;
                cases += 1;
                if exact != want || !pattern {
                    ok = false;
                    notes.push(format!("single basis dim {dim} source {src} rank {r}: exact {exact}"));
                }
            }
        }
    }
    notes.push(format!("{cases} single-basis cases"));
    // three-point space against the exact rank table
    let basis = Basis::new(vec![set(&[0, 1]), set(&[1, 2])]);
    for global in [1, 0] {
        let want = three_point_ranks(global, 3);
        let dims: Vec<usize> = std::iter::once(global).chain((0..=4).map(|p| 1usize << (p + 1))).collect();
        let want_exact = (0..=4).all(|k| dims[k] - want.get(k).copied().unwrap_or(0) - if k > 0 { want[k - 1] } else { 0 } == 0);
        let got = cechcat::cech_report(&three_point(global), &basis, None, &cfg).unwrap();
        if got.ranks != want || got.exact != want_exact {
            ok = false;
        }
        notes.push(format!("global dim {global}: ranks {:?} (exact table {want:?}), exact {}", got.ranks, got.exact));
    }
    Outcome { ok, detail: notes.join("; ") }
}

// ---------------------------------------------------------------- 7

/// All partial orders on `0..n`, labelled.
fn all_posets(n: usize) -> Vec<Vec<Vec<bool>>> {
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).filter(|(i, j)| i != j).collect();
    let mut out = Vec::new();
    'mask: for m in 0u64..1 << slots.len() {
        let mut r = vec![vec![false; n]; n];
        for (i, row) in r.iter_mut().enumerate() {
            row[i] = true;
        }
        for (k, &(i, j)) in slots.iter().enumerate() {
            if m >> k & 1 == 1 {
                if r[j][i] {
                    continue 'mask;
                }
                r[i][j] = true;
            }
        }
        for i in 0..n {
            for j in 0..n {
                for k in 0..n {
                    if r[i][j] && r[j][k] && !r[i][k] {
                        continue 'mask;
                    }
                }
            }
        }
        out.push(r);
    }
    out
}

/// Resolvent objects, by definition.
fn resolvent(leq: &dyn Fn(usize, usize) -> bool, n: usize, ok: &[bool]) -> BTreeSet<usize> {
    (0..n).filter(|&a| (0..n).all(|b| !leq(a, b) || ok[b])).collect()
}

fn category_sweep() -> Outcome {
    let mut checked = 0usize;
    let mut bad: Vec<String> = Vec::new();
    let fail = |msg: String, bad: &mut Vec<String>| {
        if bad.len() < 5 {
            bad.push(msg);
        }
    };
    for n in 1..=5 {
        let posets = all_posets(n);
        if posets.len() != [1, 3, 19, 219, 4231][n - 1] {
            fail(format!("{} labelled posets on {n} elements", posets.len()), &mut bad);
        }
        for order in posets {
            let cat = FiniteCategory::from_order(order.clone()).unwrap().with_maximal_points();
            let maximal: Vec<usize> = (0..n).filter(|&a| (0..n).all(|b| b == a || !order[a][b])).collect();
            let least = (0..n).find(|&a| (0..n).all(|b| order[a][b]));
            let leq = |a: usize, b: usize| order[a][b];
            for mask in 0u32..1 << n {
                checked += 1;
                let table: Vec<bool> = (0..n).map(|i| mask >> i & 1 == 1).collect();
                let pts: Vec<bool> = maximal.iter().map(|&m| table[m]).collect();
                let oracle = TransversalityOracle::from_table(table.clone(), pts.clone());
                let got = cechcat::category_spectrum(&cat, &oracle).unwrap();
                let res = resolvent(&leq, n, &table);
                // (a) up-closed resolvent, complement spectrum
                let up = res.iter().all(|&a| (0..n).all(|b| !order[a][b] || res.contains(&b)));
                let sigma: BTreeSet<usize> = (0..n).filter(|a| !res.contains(a)).collect();
                if got.res != res || got.sigma != sigma || !up {
                    fail(format!("n={n} mask {mask:b}: resolvent mismatch"), &mut bad);
                }
                // (b) a nontrivial module is never transversal to the least object
                if let Some(a) = least {
                    if !table[a] && !got.sigma.contains(&a) {
                        fail(format!("n={n} mask {mask:b}: least object outside the spectrum"), &mut bad);
                    }
                }
                // (c) restriction identities at every object, both sides computed here
                let spec = |a: usize| -> BTreeSet<usize> { (0..maximal.len()).filter(|&k| order[a][maximal[k]]).collect() };
                let res_p: BTreeSet<usize> = res.iter().flat_map(|&a| spec(a)).collect();
                let sigma_p: BTreeSet<usize> = (0..maximal.len()).filter(|k| !res_p.contains(k)).collect();
                let taylor: BTreeSet<usize> = (0..maximal.len()).filter(|&k| !pts[k]).collect();
                if got.sigma_p != sigma_p || got.taylor != taylor {
                    fail(format!("n={n} mask {mask:b}: point spectra mismatch"), &mut bad);
                }
                for a in 0..n {
                    let ua: Vec<usize> = (0..n).filter(|&b| order[a][b]).collect();
                    let sub_leq = |i: usize, j: usize| order[ua[i]][ua[j]];
                    let sub_ok: Vec<bool> = ua.iter().map(|&b| table[b]).collect();
                    let sub_res = resolvent(&sub_leq, ua.len(), &sub_ok);
                    let local_sigma: BTreeSet<usize> = (0..ua.len()).filter(|i| !sub_res.contains(i)).map(|i| ua[i]).collect();
                    let global_sigma: BTreeSet<usize> = sigma.iter().copied().filter(|b| ua.contains(b)).collect();
                    let sa = spec(a);
                    let local_res_p: BTreeSet<usize> = sub_res.iter().flat_map(|&i| spec(ua[i])).filter(|k| sa.contains(k)).collect();
                    let local_sigma_p: BTreeSet<usize> = sa.iter().copied().filter(|k| !local_res_p.contains(k)).collect();
                    let global_sigma_p: BTreeSet<usize> = sigma_p.intersection(&sa).copied().collect();
                    let local_taylor: BTreeSet<usize> = sa.iter().copied().filter(|&k| !pts[k]).collect();
                    let global_taylor: BTreeSet<usize> = taylor.intersection(&sa).copied().collect();
                    let lib = cechcat::spectral_mapping_check(&cat, &oracle, a).unwrap();
                    if local_sigma != global_sigma || local_sigma_p != global_sigma_p || local_taylor != global_taylor || !lib.passed() {
                        fail(format!("n={n} mask {mask:b}: restriction identity fails at {a}"), &mut bad);
                    }
                }
            }
        }
    }
    // presheaf categories of every topology on at most three points
    let mut spaces = 0;
    for n in 1..=3usize {
        let subsets: Vec<OpenSet> = (0u32..1 << n).map(|m| (0..n).filter(|&i| m >> i & 1 == 1).collect()).collect();
        for fam in 0u64..1 << subsets.len() {
            let opens: Vec<OpenSet> = (0..subsets.len()).filter(|&k| fam >> k & 1 == 1).map(|k| subsets[k].clone()).collect();
            let whole: OpenSet = (0..n).collect();
            if !opens.contains(&whole) || !opens.contains(&OpenSet::new()) {
                continue;
            }
            let closed = opens.iter().all(|a| {
                opens.iter().all(|b| opens.contains(&a.union(b).copied().collect()) && opens.contains(&a.intersection(b).copied().collect()))
            });
            if !closed {
                continue;
            }
            spaces += 1;
            let p = Presheaf::constant((0..n).map(|i| format!("p{i}")).collect(), opens.clone(), 1).unwrap();
            let cat = p.to_category();
            let k = opens.len();
            // the open of each point
            let min_open: Vec<usize> = (0..n)
                .map(|pt| (0..k).filter(|&i| opens[i].contains(&pt)).min_by_key(|&i| opens[i].len()).unwrap())
                .collect();
            let leq = |v: usize, w: usize| opens[w].is_subset(&opens[v]);
            for mask in 0u32..1 << k {
                checked += 1;
                let table: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
                let pts: Vec<bool> = min_open.iter().map(|&o| table[o]).collect();
                let oracle = TransversalityOracle::from_table(table.clone(), pts);
                let res = resolvent(&leq, k, &table);
                let res_p: BTreeSet<usize> = res.iter().flat_map(|&v| opens[v].iter().copied()).collect();
                let sigma_p: BTreeSet<usize> = (0..n).filter(|x| !res_p.contains(x)).collect();
                let cut: BTreeSet<usize> = (0..n).filter(|&x| !res.contains(&min_open[x])).collect();
                let got = cechcat::category_spectrum(&cat, &oracle).unwrap();
                let lib = cechcat::putinar_restriction_check(&cat, &oracle).unwrap();
                let whole_idx = opens.iter().position(|o| *o == whole).unwrap();
                if sigma_p != cut || got.sigma_p != sigma_p || !lib || (!table[whole_idx] && !got.sigma.contains(&whole_idx)) {
                    fail(format!("space {opens:?} mask {mask:b}: σ_P ≠ σ ∩ Spec"), &mut bad);
                }
                for a in 0..k {
                    if !cechcat::spectral_mapping_check(&cat, &oracle, a).unwrap().passed() {
                        fail(format!("space {opens:?} mask {mask:b}: restriction identity fails at {a}"), &mut bad);
                    }
                }
            }
        }
    }
    Outcome { ok: bad.is_empty(), detail: format!("{checked} (category, oracle) pairs incl. {spaces} topologies {}", bad.join("; ")) }
}

// ---------------------------------------------------------------- 8

fn homology_oracle() -> Outcome {
    let cfg = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(808);
    let mut bad = Vec::new();
    for i in 0..200 {
        let (cx, _) = exact::random_rational_complex(&mut rng, 24);
        assert!(cx.degrees.iter().sum::<usize>() <= 24);
        let ranks: Vec<usize> = cx.maps.iter().map(|m| rational_rank(m.clone())).collect();
        let want: Vec<usize> = (0..cx.degrees.len())
            .map(|p| cx.degrees[p] - ranks.get(p).copied().unwrap_or(0) - if p > 0 { ranks[p - 1] } else { 0 })
            .collect();
        let maps: Vec<CMatrix> = cx
            .maps
            .iter()
            .enumerate()
            .map(|(p, m)| {
                CMatrix::from_fn(cx.degrees[p + 1], cx.degrees[p], |r, s| {
                    c(m[r][s].numer().to_f64().unwrap() / m[r][s].denom().to_f64().unwrap(), 0.0)
                })
            })
            .collect();
        let float = qplane_core::CochainComplex::new(cx.degrees.clone(), maps).unwrap();
        match qplane_core::homology_dims(&float, &cfg) {
            Ok(h) if h.dims == want => {}
            Ok(h) => bad.push(format!("complex {i}: {:?} vs exact {want:?}", h.dims)),
            Err(e) => bad.push(format!("complex {i}: {e}")),
        }
    }
    Outcome { ok: bad.is_empty(), detail: format!("200 rational complexes {}", bad.join("; ")) }
}

// ---------------------------------------------------------------- main

fn main() {
    let criteria: [(&str, fn() -> Outcome, Option<Duration>); 8] = [
        ("nilpotent pairs have spectrum {(0,0)}", nilpotent_spectra, Some(Duration::from_secs(5))),
        ("grid scan finds no spectrum off the candidates", q_projection, Some(Duration::from_secs(60))),
        ("Koszul composite vanishes, S = 0 homology closed form", koszul_validity, None),
        ("functional calculus is multiplicative", homomorphism, Some(Duration::from_secs(10))),
        ("Putinar spectrum of the scalar pair is the orbit", putinar_closure, None),
        ("Čech complexes", cech, None),
        ("category spectra sweep", category_sweep, Some(Duration::from_secs(30))),
        ("floating homology equals exact homology", homology_oracle, None),
    ];
    let mut all = true;
    for (k, (name, run, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = run();
        let took = start.elapsed();
        let in_time = limit.is_none_or(|l| took <= l);
        let ok = out.ok && in_time;
        all &= ok;
        let budget = limit.map(|l| format!(" (limit {} s)", l.as_secs())).unwrap_or_default();
        println!(
            "{} [{}] {name}: {} [{:.2} s{budget}]",
            if ok { "PASS" } else { "FAIL" },
            k + 1,
            out.detail.trim(),
            took.as_secs_f64()
        );
    }
    if !all {
        std::process::exit(1);
    }
}
