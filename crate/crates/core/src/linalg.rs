//! Dense complex linear algebra helpers on top of nalgebra.

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_traits::Zero;
use rand::SeedableRng;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;

/// Factor separating "clearly zero" from "clearly nonzero" singular values.
pub const RANK_GUARD: f64 = 10.0;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn max_norm(m: &CMatrix) -> f64 {
    m.iter().fold(0.0, |acc, z| acc.max(z.norm()))
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

/// `S·e_i = e_{i+1}`, last basis vector goes to zero.
pub fn down_shift(n: usize) -> CMatrix {
    let mut m = CMatrix::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn diag(entries: &[Complex64]) -> CMatrix {
    let n = entries.len();
    let mut m = CMatrix::zeros(n, n);
    for (i, z) in entries.iter().enumerate() {
        m[(i, i)] = *z;
    }
    m
}

pub fn block_diag(blocks: &[&CMatrix]) -> CMatrix {
    let n: usize = blocks.iter().map(|b| b.nrows()).sum();
    let mut m = CMatrix::zeros(n, n);
    let mut off = 0;
    for b in blocks {
        let k = b.nrows();
        m.view_mut((off, off), (k, k)).copy_from(b);
        off += k;
    }
    m
}

pub fn mat_pow(m: &CMatrix, p: usize) -> CMatrix {
    let mut out = identity(m.nrows());
    for _ in 0..p {
        out = &out * m;
    }
    out
}

/// Singular values in decreasing order. Empty or zero-sized matrices have none.
pub fn singular_values(m: &CMatrix) -> Result<Vec<f64>> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Ok(Vec::new());
    }
    if m.iter().all(|z| z.is_zero()) {
        return Ok(vec![0.0; m.nrows().min(m.ncols())]);
    }
    let svd = nalgebra::linalg::SVD::try_new(m.clone(), false, false, f64::EPSILON, 0)
        .ok_or(Error::SvdFailure)?;
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankInfo {
    pub rank: usize,
    pub threshold: f64,
    /// Singular value closest to the threshold inside the guard band, if any.
    pub ambiguous: Option<f64>,
}

/// Rank from a precomputed list of singular values. The threshold is
/// `tol · scale`; a value inside `(threshold/10, 10·threshold]` is ambiguous.
pub fn rank_from_singular_values(sv: &[f64], tol: f64, scale: f64) -> RankInfo {
    let threshold = tol * scale;
    if scale <= 0.0 {
        return RankInfo { rank: 0, threshold, ambiguous: None };
    }
    let rank = sv.iter().filter(|&&s| s > threshold).count();
    let ambiguous = sv
        .iter()
        .copied()
        .filter(|&s| s > threshold / RANK_GUARD && s <= threshold * RANK_GUARD)
        .min_by(|a, b| (a / threshold).ln().abs().total_cmp(&(b / threshold).ln().abs()));
    RankInfo { rank, threshold, ambiguous }
}

/// Numerical rank relative to the largest singular value of `m`.
pub fn numerical_rank(m: &CMatrix, tol: f64) -> Result<RankInfo> {
    let sv = singular_values(m)?;
    let scale = sv.first().copied().unwrap_or(0.0);
    Ok(rank_from_singular_values(&sv, tol, scale))
}

/// Raw eigenvalues from a complex Schur decomposition.
pub fn eigenvalues(m: &CMatrix) -> Result<Vec<Complex64>> {
    let n = m.nrows();
    if n == 0 {
        return Ok(Vec::new());
    }
    if m.iter().all(|z| z.is_zero()) {
        return Ok(vec![Complex64::zero(); n]);
    }
    // QR iteration stalls on some exactly nilpotent inputs (the 3×3 shift);
    // a fixed unitary conjugation breaks the symmetry without moving eigenvalues
    let max_iter = 200 * n.max(10);
    for attempt in 0..4u64 {
        let work = if attempt == 0 {
            m.clone()
        } else {
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5c4u64 + attempt);
            let u = gaussian_unitary(&mut rng, n);
            u.adjoint() * m * &u
        };
        if let Some(ev) = nalgebra::linalg::Schur::try_new(work, f64::EPSILON, max_iter).and_then(|s| s.eigenvalues()) {
            return Ok(ev.iter().copied().collect());
        }
    }
    Err(Error::EigensolverFailure)
}

fn gaussian_unitary<R: rand::Rng>(rng: &mut R, n: usize) -> CMatrix {
    crate::random::gaussian_matrix(rng, n, n).qr().q()
}

fn nullity_at_least(m: &CMatrix, mu: Complex64, k: usize) -> Result<bool> {
    let n = m.nrows();
    let shifted = m - CMatrix::from_diagonal_element(n, n, mu);
    let base = singular_values(&shifted)?.first().copied().unwrap_or(0.0);
    if base == 0.0 {
        return Ok(true);
    }
    let p = mat_pow(&shifted, k);
    let sv = singular_values(&p)?;
    let thr = 1e-8 * base.powi(k as i32).max(f64::MIN_POSITIVE);
    Ok(sv.iter().filter(|&&s| s <= thr).count() >= k)
}

fn single_linkage(points: &[Complex64], idx: &[usize], radius: f64) -> Vec<Vec<usize>> {
    let mut seen = vec![false; idx.len()];
    let mut out = Vec::new();
    for s in 0..idx.len() {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        let mut comp = vec![s];
        let mut head = 0;
        while head < comp.len() {
            let a = points[idx[comp[head]]];
            head += 1;
            for t in 0..idx.len() {
                if !seen[t] && (points[idx[t]] - a).norm() <= radius {
                    seen[t] = true;
                    comp.push(t);
                }
            }
        }
        out.push(comp.into_iter().map(|t| idx[t]).collect());
    }
    out
}

fn centroid(points: &[Complex64], members: &[usize]) -> Complex64 {
    let sum: Complex64 = members.iter().map(|&i| points[i]).sum();
    sum / members.len() as f64
}

/// Eigenvalues with defective clusters collapsed to their centroid.
///
/// Schur eigenvalues of a Jordan block of size k scatter on a circle of
/// radius about `(ε‖M‖)^{1/k}`; the centroid is far more accurate. A cluster
/// of size k is kept only if `(M − μI)^k` has nullity k at its centroid μ,
/// otherwise it is split at a tenth of the radius.
pub fn clustered_eigenvalues(m: &CMatrix) -> Result<Vec<(Complex64, usize)>> {
    let n = m.nrows();
    let raw = eigenvalues(m)?;
    if n == 0 {
        return Ok(Vec::new());
    }
    let norm = singular_values(m)?.first().copied().unwrap_or(0.0);
    if norm == 0.0 {
        return Ok(vec![(Complex64::zero(), n)]);
    }
    let floor = 1e-13 * norm;
    let r0 = 4.0 * norm * (n as f64 * f64::EPSILON).powf(1.0 / n as f64);
    let mut out = Vec::new();
    let mut stack = vec![((0..n).collect::<Vec<_>>(), r0)];
    while let Some((idx, radius)) = stack.pop() {
        for cl in single_linkage(&raw, &idx, radius) {
            if cl.len() == 1 {
                out.push((raw[cl[0]], 1));
                continue;
            }
            let mu = centroid(&raw, &cl);
            if radius < floor || nullity_at_least(m, mu, cl.len())? {
                out.push((mu, cl.len()));
            } else {
                stack.push((cl, radius / 10.0));
            }
        }
    }
    Ok(out)
}

/// Absolute-plus-relative closeness used for point matching.
pub fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
    (a - b).norm() <= tol * (1.0 + a.norm().max(b.norm()))
}

pub fn cmp_complex(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Sort, merge points within `tol`, and snap near-zero values to exact zero.
pub fn dedupe_points(points: &mut Vec<Complex64>, tol: f64) {
    for z in points.iter_mut() {
        if z.norm() <= tol {
            *z = Complex64::zero();
        }
        // avoid printing -0
        if z.re == 0.0 {
            z.re = 0.0;
        }
        if z.im == 0.0 {
            z.im = 0.0;
        }
    }
    points.sort_by(cmp_complex);
    let mut out: Vec<Complex64> = Vec::with_capacity(points.len());
    for z in points.drain(..) {
        if !out.iter().any(|w| close(*w, z, tol)) {
            out.push(z);
        }
    }
    *points = out;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_matrix_has_rank_zero() {
        let m = CMatrix::zeros(0, 3);
        assert_eq!(numerical_rank(&m, 1e-9).unwrap().rank, 0);
        let z = CMatrix::zeros(2, 3);
        assert_eq!(numerical_rank(&z, 1e-9).unwrap().rank, 0);
    }

    #[test]
    fn rank_of_projection() {
        let m = diag(&[c(1.0, 0.0), c(0.0, 0.0)]);
        let r = numerical_rank(&m, 1e-9).unwrap();
        assert_eq!(r.rank, 1);
        assert!(r.ambiguous.is_none());
    }

    #[test]
    fn guard_band_flags_ambiguity() {
        let m = diag(&[c(1.0, 0.0), c(3e-9, 0.0)]);
        let r = numerical_rank(&m, 1e-9).unwrap();
        assert!(r.ambiguous.is_some());
    }

    #[test]
    fn jordan_block_collapses() {
        let n = 6;
        let mut m = down_shift(n).transpose();
        for i in 0..n {
            m[(i, i)] = c(2.0, 0.0);
        }
        let ev = clustered_eigenvalues(&m).unwrap();
        assert_eq!(ev.len(), 1);
        assert!((ev[0].0 - c(2.0, 0.0)).norm() < 1e-10);
        assert_eq!(ev[0].1, 6);
    }

    #[test]
    fn distinct_eigenvalues_survive() {
        let m = diag(&[c(0.0, 0.0), c(1e-3, 0.0), c(1.0, 1.0)]);
        let mut ev: Vec<_> = clustered_eigenvalues(&m).unwrap().into_iter().map(|e| e.0).collect();
        dedupe_points(&mut ev, 1e-8);
        assert_eq!(ev.len(), 3);
    }

    #[test]
    fn dedupe_snaps_and_sorts() {
        let mut v = vec![c(2.0, 0.0), c(1e-12, 0.0), c(2.0 + 1e-12, 0.0), c(-1.0, 0.0)];
        dedupe_points(&mut v, 1e-8);
        assert_eq!(v, vec![c(-1.0, 0.0), c(0.0, 0.0), c(2.0, 0.0)]);
    }
}
