//! Seeded generators for pairs, points, series and matrices used by the
//! property tests, benches and verification suites.

use std::collections::BTreeSet;

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::koszul::AxisPoint;
use crate::linalg::{self, CMatrix};
use crate::qpair::{self, QPair, QParameter};
use crate::qseries::QSeries;

pub fn gaussian<R: Rng>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) / std::f64::consts::SQRT_2
}

pub fn gaussian_matrix<R: Rng>(rng: &mut R, r: usize, c: usize) -> CMatrix {
    CMatrix::from_fn(r, c, |_, _| gaussian(rng))
}

/// Unitary factor of a Gaussian matrix times a diagonal scaling in
/// `[0.5, 2]`; condition number at most 4.
pub fn well_conditioned<R: Rng>(rng: &mut R, n: usize) -> CMatrix {
    if n == 0 {
        return CMatrix::zeros(0, 0);
    }
    let u = gaussian_matrix(rng, n, n).qr().q();
    let d: Vec<Complex64> = (0..n).map(|_| Complex64::new(rng.random_range(0.5..=2.0), 0.0)).collect();
    u * linalg::diag(&d)
}

/// Complex number with modulus in `[lo, hi)` and uniform argument.
pub fn polar<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> Complex64 {
    let r = rng.random_range(lo..hi);
    let th = rng.random_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, th)
}

pub fn random_q<R: Rng>(rng: &mut R, lo: f64, hi: f64) -> QParameter {
    QParameter::new(polar(rng, lo, hi)).expect("modulus within (0, 1]")
}

/// Down-closed monomial set of the given size grown one corner at a time.
pub fn random_staircase<R: Rng>(rng: &mut R, size: usize) -> Vec<(usize, usize)> {
    let mut set = BTreeSet::from([(0usize, 0usize)]);
    while set.len() < size {
        let corners: Vec<(usize, usize)> = set
            .iter()
            .flat_map(|&(a, b)| [(a + 1, b), (a, b + 1)])
            .filter(|&(a, b)| {
                !set.contains(&(a, b))
                    && (a == 0 || set.contains(&(a - 1, b)))
                    && (b == 0 || set.contains(&(a, b - 1)))
            })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let pick = corners[rng.random_range(0..corners.len())];
        set.insert(pick);
    }
    set.into_iter().collect()
}

/// Direct sum of random staircase blocks totalling `dim`, conjugated by a
/// well-conditioned matrix. Both operators are nilpotent.
pub fn random_nilpotent_pair<R: Rng>(rng: &mut R, dim: usize, q: QParameter) -> QPair {
    let mut blocks = Vec::new();
    let mut left = dim;
    while left > 0 {
        let k = rng.random_range(1..=left);
        blocks.push(qpair::staircase_q_pair(&random_staircase(rng, k), q).expect("down-closed"));
        left -= k;
    }
    let sum = QPair::direct_sum(&blocks).expect("same q");
    sum.conjugate(&well_conditioned(rng, dim)).expect("invertible")
}

#[derive(Debug, Clone, Copy)]
pub struct PairSampler {
    pub min_dim: usize,
    pub max_dim: usize,
    pub max_block: usize,
    /// Modulus range of the leading eigenvalue of Jordan / shift blocks.
    pub seed_modulus: (f64, f64),
}

impl Default for PairSampler {
    fn default() -> Self {
        Self { min_dim: 2, max_dim: 6, max_block: 4, seed_modulus: (0.3, 2.0) }
    }
}

/// Direct sum of Jordan-type, shift-type and staircase blocks, conjugated
/// by a well-conditioned matrix.
pub fn random_valid_pair<R: Rng>(rng: &mut R, q: QParameter, spec: &PairSampler) -> QPair {
    let dim = rng.random_range(spec.min_dim..=spec.max_dim);
    let mut blocks = Vec::new();
    let mut left = dim;
    while left > 0 {
        let k = rng.random_range(1..=left.min(spec.max_block));
        let seed = polar(rng, spec.seed_modulus.0, spec.seed_modulus.1);
        let b = match rng.random_range(0..3) {
            0 => qpair::jordan_q_pair(seed, k, q),
            1 => qpair::shift_q_pair(seed, k, q),
            _ => qpair::staircase_q_pair(&random_staircase(rng, k), q),
        };
        blocks.push(b.expect("valid block"));
        left -= k;
    }
    let sum = QPair::direct_sum(&blocks).expect("same q");
    sum.conjugate(&well_conditioned(rng, dim)).expect("invertible")
}

/// Jordan-type and staircase blocks only, so `S^max_block = 0` and every
/// series with y-order at least `max_block` can be evaluated.
pub fn random_calculus_pair<R: Rng>(rng: &mut R, q: QParameter, spec: &PairSampler) -> QPair {
    let dim = rng.random_range(spec.min_dim..=spec.max_dim);
    let mut blocks = Vec::new();
    let mut left = dim;
    while left > 0 {
        let k = rng.random_range(1..=left.min(spec.max_block));
        let b = if rng.random_bool(0.5) {
            qpair::jordan_q_pair(polar(rng, spec.seed_modulus.0, spec.seed_modulus.1), k, q)
        } else {
            qpair::staircase_q_pair(&random_staircase(rng, k), q)
        };
        blocks.push(b.expect("valid block"));
        left -= k;
    }
    let sum = QPair::direct_sum(&blocks).expect("same q");
    sum.conjugate(&well_conditioned(rng, dim)).expect("invertible")
}

/// Random point on one of the two axes, sometimes the origin.
pub fn random_axis_point<R: Rng>(rng: &mut R, radius: f64) -> AxisPoint {
    let z = polar(rng, 0.0, radius);
    match rng.random_range(0..5) {
        0 => AxisPoint::origin(),
        1 | 2 => AxisPoint::x(z),
        _ => AxisPoint::y(z),
    }
}

/// Series with Gaussian coefficients filling the box.
pub fn random_series<R: Rng>(rng: &mut R, q: QParameter, x_order: usize, y_order: usize) -> QSeries {
    let mut s = QSeries::zero(q.value(), x_order, y_order);
    for j in 0..y_order {
        for i in 0..x_order {
            s.set(i, j, gaussian(rng));
        }
    }
    s
}
