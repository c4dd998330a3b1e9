//! Exact rational homology by row reduction, the ground truth for the
//! floating path.

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::CochainComplex;
use crate::linalg::CMatrix;

pub type QMatrix = Vec<Vec<BigRational>>;

fn zeros(r: usize, c: usize) -> QMatrix {
    vec![vec![BigRational::zero(); c]; r]
}

fn int(v: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(v))
}

pub fn mul(a: &QMatrix, b: &QMatrix, inner: usize) -> QMatrix {
    let (r, c) = (a.len(), b.first().map_or(0, |row| row.len()));
    let mut out = zeros(r, c);
    for i in 0..r {
        for k in 0..inner {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..c {
                if !b[k][j].is_zero() {
                    out[i][j] = &out[i][j] + &a[i][k] * &b[k][j];
                }
            }
        }
    }
    out
}

/// Rank by Gaussian elimination over ℚ.
pub fn rank(m: &QMatrix) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut r = 0;
    for col in 0..cols {
        let Some(piv) = (r..rows).find(|&i| !a[i][col].is_zero()) else { continue };
        a.swap(r, piv);
        let inv = a[r][col].recip();
        for j in col..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][col].is_zero() {
                let f = a[i][col].clone();
                for j in col..cols {
                    let sub = &f * &a[r][j];
                    a[i][j] = &a[i][j] - sub;
                }
            }
        }
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

#[derive(Debug, Clone)]
pub struct RationalComplex {
    pub degrees: Vec<usize>,
    /// `maps[p]` is `degrees[p+1] × degrees[p]`.
    pub maps: Vec<QMatrix>,
}

impl RationalComplex {
    pub fn is_complex(&self) -> bool {
        self.maps.windows(2).enumerate().all(|(p, w)| {
            mul(&w[1], &w[0], self.degrees[p + 1]).iter().flatten().all(|x| x.is_zero())
        })
    }

    pub fn homology_dims(&self) -> Vec<usize> {
        let ranks: Vec<usize> = self.maps.iter().map(rank).collect();
        (0..self.degrees.len())
            .map(|p| {
                let out = ranks.get(p).copied().unwrap_or(0);
                let inc = if p > 0 { ranks[p - 1] } else { 0 };
                self.degrees[p] - out - inc
            })
            .collect()
    }

    pub fn to_float(&self) -> CochainComplex {
        let maps = self
            .maps
            .iter()
            .enumerate()
            .map(|(p, m)| {
                CMatrix::from_fn(self.degrees[p + 1], self.degrees[p], |i, j| {
                    Complex64::new(to_f64(&m[i][j]), 0.0)
                })
            })
            .collect();
        CochainComplex::new(self.degrees.clone(), maps).expect("shapes are consistent by construction")
    }
}

pub fn to_f64(x: &BigRational) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Random unimodular integer matrix and its inverse, built from a handful
/// of elementary row operations with small multipliers.
pub fn unimodular<R: Rng>(rng: &mut R, n: usize) -> (QMatrix, QMatrix) {
    let mut g = zeros(n, n);
    let mut gi = zeros(n, n);
    for i in 0..n {
        g[i][i] = BigRational::one();
        gi[i][i] = BigRational::one();
    }
    if n < 2 {
        return (g, gi);
    }
    for _ in 0..2 * n {
        let i = rng.random_range(0..n);
        let mut j = rng.random_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let f = int(rng.random_range(-2..=2));
        // row_i += f·row_j on g; column_j -= f·column_i on the inverse
        for k in 0..n {
            let t = &f * &g[j][k];
            g[i][k] = &g[i][k] + t;
            let u = &f * &gi[k][i];
            gi[k][j] = &gi[k][j] - u;
        }
    }
    (g, gi)
}

/// A random rational complex of total dimension at most `max_total`,
/// together with its homology dimensions known by construction.
///
/// A canonical complex with prescribed ranks is conjugated degreewise by
/// unimodular integer matrices and each map is scaled by a random rational.
pub fn random_rational_complex<R: Rng>(rng: &mut R, max_total: usize) -> (RationalComplex, Vec<usize>) {
    let len = rng.random_range(2..=5usize);
    let mut degrees = Vec::with_capacity(len);
    let mut budget = max_total;
    for p in 0..len {
        let left = len - p - 1;
        let hi = budget.saturating_sub(left).min(8);
        let d = rng.random_range(0..=hi.max(0));
        degrees.push(d);
        budget -= d;
    }
    let mut ranks = Vec::with_capacity(len - 1);
    let mut prev = 0;
    for p in 0..len - 1 {
        let cap = (degrees[p] - prev).min(degrees[p + 1]);
        let r = rng.random_range(0..=cap);
        ranks.push(r);
        prev = r;
    }
    let bases: Vec<(QMatrix, QMatrix)> = degrees.iter().map(|&d| unimodular(rng, d)).collect();
    let mut maps = Vec::with_capacity(len - 1);
    for p in 0..len - 1 {
        let start = if p > 0 { ranks[p - 1] } else { 0 };
        let mut m = zeros(degrees[p + 1], degrees[p]);
        for k in 0..ranks[p] {
            m[k][start + k] = BigRational::one();
        }
        let conj = mul(&mul(&bases[p + 1].0, &m, degrees[p + 1]), &bases[p].1, degrees[p]);
        let s = BigRational::new(BigInt::from(rng.random_range(1..=7i64)), BigInt::from(rng.random_range(1..=5i64)));
        let s = if rng.random_bool(0.5) { -s } else { s };
        maps.push(conj.into_iter().map(|row| row.into_iter().map(|x| x * &s).collect()).collect());
    }
    let expected = (0..len)
        .map(|p| {
            let out = ranks.get(p).copied().unwrap_or(0);
            let inc = if p > 0 { ranks[p - 1] } else { 0 };
            degrees[p] - out - inc
        })
        .collect();
    (RationalComplex { degrees, maps }, expected)
}

/// Largest absolute numerator or denominator, to keep generated data honest.
pub fn max_height(c: &RationalComplex) -> BigInt {
    c.maps
        .iter()
        .flatten()
        .flatten()
        .map(|x| x.numer().abs().max(x.denom().abs()))
        .max()
        .unwrap_or_else(BigInt::zero)
}
