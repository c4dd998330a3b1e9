//! Truncated series `f = Σ_j f_j(z) y^j` in `ℂ_q[[x, y]]` modulo `(x^m, y^k)`.
//!
//! The product is the twisted one
//! `(f·g)_n = Σ_{i+j=n} f_i(z) g_j(q^i z)`, i.e. on monomials
//! `x^a y^i · x^d y^j = q^{i·d} x^{a+d} y^{i+j}`.
//! Coefficients are generic so tests can run the same code over exact
//! rational complex numbers.

use num_complex::Complex64;
use num_traits::{Num, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json::{self, CJson};
use crate::qpair::QParameter;

#[derive(Debug, Clone, PartialEq)]
pub struct QSeries<C = Complex64> {
    q: C,
    x_order: usize,
    y_order: usize,
    /// `coeffs[j * x_order + i]` is the coefficient of `x^i y^j`.
    coeffs: Vec<C>,
}

impl<C: Clone + Num> QSeries<C> {
    pub fn zero(q: C, x_order: usize, y_order: usize) -> Self {
        Self { q, x_order, y_order, coeffs: vec![C::zero(); x_order * y_order] }
    }

    pub fn one(q: C, x_order: usize, y_order: usize) -> Self {
        Self::monomial(q, x_order, y_order, 0, 0, C::one())
    }

    /// `c·x^i y^j`, or zero when outside the box.
    pub fn monomial(q: C, x_order: usize, y_order: usize, i: usize, j: usize, c: C) -> Self {
        let mut s = Self::zero(q, x_order, y_order);
        s.set(i, j, c);
        s
    }

    pub fn x(q: C, x_order: usize, y_order: usize) -> Self {
        Self::monomial(q, x_order, y_order, 1, 0, C::one())
    }

    pub fn y(q: C, x_order: usize, y_order: usize) -> Self {
        Self::monomial(q, x_order, y_order, 0, 1, C::one())
    }

    pub fn q(&self) -> &C {
        &self.q
    }
    pub fn x_order(&self) -> usize {
        self.x_order
    }
    pub fn y_order(&self) -> usize {
        self.y_order
    }

    /// Coefficient of `x^i y^j`; zero outside the box.
    pub fn coeff(&self, i: usize, j: usize) -> C {
        if i < self.x_order && j < self.y_order {
            self.coeffs[j * self.x_order + i].clone()
        } else {
            C::zero()
        }
    }

    /// Writes are silently dropped outside the box, as truncation demands.
    pub fn set(&mut self, i: usize, j: usize, c: C) {
        if i < self.x_order && j < self.y_order {
            self.coeffs[j * self.x_order + i] = c;
        }
    }

    /// The polynomial `f_j(z)` as coefficients in `z`.
    pub fn y_component(&self, j: usize) -> &[C] {
        &self.coeffs[j * self.x_order..(j + 1) * self.x_order]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// Same series in a larger box.
    pub fn lift(&self, x_order: usize, y_order: usize) -> Self {
        let mut s = Self::zero(self.q.clone(), x_order, y_order);
        for j in 0..self.y_order {
            for i in 0..self.x_order {
                s.set(i, j, self.coeff(i, j));
            }
        }
        s
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.x_order != other.x_order || self.y_order != other.y_order {
            return Err(Error::TruncationMismatch(self.x_order, self.y_order, other.x_order, other.y_order));
        }
        if self.q != other.q {
            return Err(Error::QMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.clone() + b.clone()).collect();
        Ok(Self { coeffs, ..self.clone() })
    }

    pub fn scale(&self, c: C) -> Self {
        let coeffs = self.coeffs.iter().map(|a| a.clone() * c.clone()).collect();
        Self { coeffs, ..self.clone() }
    }

    pub fn q_mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        let (m, k) = (self.x_order, self.y_order);
        let mut out = Self::zero(self.q.clone(), m, k);
        if m == 0 || k == 0 {
            return Ok(out);
        }
        // q^e for e ≤ (k-1)(m-1)
        let top = (k - 1) * (m - 1);
        let mut qpow = Vec::with_capacity(top + 1);
        qpow.push(C::one());
        for e in 1..=top {
            let next = qpow[e - 1].clone() * self.q.clone();
            qpow.push(next);
        }
        for i in 0..k {
            for a in 0..m {
                let fa = &self.coeffs[i * m + a];
                if fa.is_zero() {
                    continue;
                }
                for j in 0..k - i {
                    for d in 0..m - a {
                        let gd = &other.coeffs[j * m + d];
                        if gd.is_zero() {
                            continue;
                        }
                        let idx = (i + j) * m + a + d;
                        let term = fa.clone() * gd.clone() * qpow[i * d].clone();
                        out.coeffs[idx] = out.coeffs[idx].clone() + term;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn q_pow(&self, p: u32) -> Result<Self> {
        let mut acc = Self::one(self.q.clone(), self.x_order, self.y_order);
        for _ in 0..p {
            acc = acc.q_mul(self)?;
        }
        Ok(acc)
    }
}

impl QSeries<Complex64> {
    pub fn qparam(&self) -> Result<QParameter> {
        QParameter::new(self.q)
    }

    /// Largest coefficient modulus.
    pub fn max_abs(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |a, c| a.max(c.norm()))
    }

    pub fn to_json_value(&self) -> QSeriesJson {
        let mut coeffs = Vec::new();
        for i in 0..self.x_order {
            for j in 0..self.y_order {
                let c = self.coeff(i, j);
                if !c.is_zero() {
                    coeffs.push(CoeffJson { i, j, c: json::to_cjson(c) });
                }
            }
        }
        QSeriesJson { q: json::to_cjson(self.q), x_order: self.x_order, y_order: self.y_order, coeffs }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: QSeriesJson = serde_json::from_str(text)?;
        raw.into_series()
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CoeffJson {
    pub i: usize,
    pub j: usize,
    pub c: CJson,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QSeriesJson {
    pub q: CJson,
    pub x_order: usize,
    pub y_order: usize,
    pub coeffs: Vec<CoeffJson>,
}

impl QSeriesJson {
    pub fn into_series(self) -> Result<QSeries> {
        let q = QParameter::new(json::from_cjson(self.q))?;
        let mut s = QSeries::zero(q.value(), self.x_order, self.y_order);
        for e in self.coeffs {
            if e.i >= self.x_order || e.j >= self.y_order {
                return Err(Error::InvalidInput(format!(
                    "coefficient ({}, {}) outside the box ({}, {})",
                    e.i, e.j, self.x_order, self.y_order
                )));
            }
            let prev = s.coeff(e.i, e.j);
            s.set(e.i, e.j, prev + json::from_cjson(e.c));
        }
        Ok(s)
    }
}
