//! Matrices of trigonometric polynomials on the torus and the cocycle
//! they generate over the toral endomorphism `xi -> S^T xi mod Z^d`.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::intmatrix::{big_to_f64, IntMatrix};
use crate::polynomial::IntPolynomial;
use crate::substitution::Substitution;
use crate::{Error, Result};

/// Integer-coefficient trigonometric polynomial
/// `sum_k c_k exp(-2 pi i <k, xi>)`, `k in Z^d`.
///
/// Terms live in a `BTreeMap` keyed by the frequency vector, so iteration
/// order (and hence every serialized form) is deterministic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrigPoly {
    dim: usize,
    terms: BTreeMap<Vec<i64>, BigInt>,
}

impl TrigPoly {
    pub fn zero(dim: usize) -> Self {
        TrigPoly { dim, terms: BTreeMap::new() }
    }

    pub fn constant(dim: usize, c: BigInt) -> Self {
        let mut p = TrigPoly::zero(dim);
        p.add_term(alloc::vec![0; dim], c);
        p
    }

    /// One-variable polynomial `p(z)` read as a trigonometric polynomial in
    /// `z = e(-xi)`; only the modulus on the torus is meaningful, which is
    /// invariant under the sign convention.
    pub fn from_polynomial(p: &IntPolynomial) -> Self {
        let mut out = TrigPoly::zero(1);
        for (k, c) in p.coeffs().iter().enumerate() {
            out.add_term(alloc::vec![k as i64], c.clone());
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, freq: Vec<i64>, coeff: BigInt) {
        debug_assert_eq!(freq.len(), self.dim);
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(freq).or_insert_with(BigInt::zero);
        *entry += coeff;
        if entry.is_zero() {
            // remove cancelled terms so is_zero stays meaningful
            let key: Vec<i64> = self
                .terms
                .iter()
                .find(|(_, c)| c.is_zero())
                .map(|(k, _)| k.clone())
                .unwrap();
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<i64>, &BigInt)> {
        self.terms.iter()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    pub fn add(&self, rhs: &TrigPoly) -> TrigPoly {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = self.clone();
        for (k, c) in rhs.terms() {
            out.add_term(k.clone(), c.clone());
        }
        out
    }

    pub fn mul(&self, rhs: &TrigPoly) -> TrigPoly {
        debug_assert_eq!(self.dim, rhs.dim);
        let mut out = TrigPoly::zero(self.dim);
        for (ka, ca) in self.terms() {
            for (kb, cb) in rhs.terms() {
                let freq: Vec<i64> = ka.iter().zip(kb).map(|(a, b)| a + b).collect();
                out.add_term(freq, ca * cb);
            }
        }
        out
    }

    /// Complex conjugate on the torus: frequencies negate, coefficients
    /// (being integers) stay.
    pub fn conj(&self) -> TrigPoly {
        let mut out = TrigPoly::zero(self.dim);
        for (k, c) in self.terms() {
            out.add_term(k.iter().map(|x| -x).collect(), c.clone());
        }
        out
    }

    /// `|self|^2 = self * conj(self)` as a trigonometric polynomial.
    pub fn norm_sq(&self) -> TrigPoly {
        self.mul(&self.conj())
    }

    pub fn eval(&self, xi: &[f64]) -> Complex64 {
        debug_assert_eq!(xi.len(), self.dim);
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, c) in self.terms() {
            let phase: f64 = k.iter().zip(xi).map(|(&ki, &x)| ki as f64 * x).sum();
            let angle = -2.0 * core::f64::consts::PI * phase;
            acc += big_to_f64(c) * Complex64::new(angle.cos(), angle.sin());
        }
        acc
    }
}

/// Point on the torus `T^d`, either floating or exact rational.
///
/// Rational points stay exact under the endomorphism, which is what makes
/// finite-orbit (periodicity) checks reliable.
#[derive(Debug, Clone, PartialEq)]
pub enum TorusPoint {
    Float(Vec<f64>),
    Rational(Vec<BigRational>),
}

impl TorusPoint {
    pub fn dim(&self) -> usize {
        match self {
            TorusPoint::Float(v) => v.len(),
            TorusPoint::Rational(v) => v.len(),
        }
    }

    pub fn to_floats(&self) -> Vec<f64> {
        match self {
            TorusPoint::Float(v) => v.clone(),
            TorusPoint::Rational(v) => v.iter().map(|r| r.to_f64().unwrap_or(0.0)).collect(),
        }
    }

    /// Reduce every coordinate to `[0, 1)`.
    pub fn reduce(&self) -> TorusPoint {
        match self {
            TorusPoint::Float(v) => {
                TorusPoint::Float(v.iter().map(|x| x - x.floor()).collect())
            }
            TorusPoint::Rational(v) => TorusPoint::Rational(
                v.iter().map(|r| r - r.floor()).collect(),
            ),
        }
    }

    /// One step of the endomorphism `xi -> S^T xi mod Z^d`.
    pub fn endomorphism_step(&self, s: &IntMatrix) -> Result<TorusPoint> {
        let d = self.dim();
        if s.dim() != d {
            return Err(Error::DimensionMismatch { expected: s.dim(), got: d });
        }
        let st = s.transpose();
        let next = match self {
            TorusPoint::Float(v) => {
                let mut out = alloc::vec![0.0f64; d];
                for (i, slot) in out.iter_mut().enumerate() {
                    let mut acc = 0.0;
                    for (j, &x) in v.iter().enumerate() {
                        acc += big_to_f64(st.entry(i, j)) * x;
                    }
                    *slot = acc;
                }
                TorusPoint::Float(out)
            }
            TorusPoint::Rational(v) => {
                let mut out = alloc::vec![BigRational::zero(); d];
                for (i, slot) in out.iter_mut().enumerate() {
                    let mut acc = BigRational::zero();
                    for (j, x) in v.iter().enumerate() {
                        acc += BigRational::from(st.entry(i, j).clone()) * x;
                    }
                    *slot = acc;
                }
                TorusPoint::Rational(out)
            }
        };
        Ok(next.reduce())
    }
}

/// Square matrix of trigonometric polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TrigMatrix {
    d: usize,
    entries: Vec<TrigPoly>, // row-major
}

impl TrigMatrix {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> &TrigPoly {
        &self.entries[i * self.d + j]
    }

    pub fn evaluate(&self, xi: &[f64]) -> ComplexMatrix {
        ComplexMatrix {
            d: self.d,
            entries: self.entries.iter().map(|p| p.eval(xi)).collect(),
        }
    }

    /// `sum_{b,c} |entry(b,c)|^2` as a trigonometric polynomial.
    pub fn frobenius_norm_sq_poly(&self) -> TrigPoly {
        let mut acc = TrigPoly::zero(self.d);
        for e in &self.entries {
            acc = acc.add(&e.norm_sq());
        }
        acc
    }
}

/// The matrix-valued trigonometric polynomial attached to a substitution:
/// entry `(b, c)` sums `exp(-2 pi i <abelianized prefix, xi>)` over the
/// occurrences of letter `c` in the image of `b`. At `xi = 0` this is `S^T`.
pub fn build_cocycle_matrix(zeta: &Substitution) -> TrigMatrix {
    let d = zeta.dim();
    let mut entries = alloc::vec![TrigPoly::zero(d); d * d];
    for b in 0..d {
        let mut prefix = alloc::vec![0i64; d];
        for &c in zeta.image(b) {
            entries[b * d + c].add_term(prefix.clone(), BigInt::one());
            prefix[c] += 1;
        }
    }
    TrigMatrix { d, entries }
}

/// Dense complex matrix used for cocycle products.
#[derive(Debug, Clone)]
pub struct ComplexMatrix {
    d: usize,
    entries: Vec<Complex64>, // row-major
}

impl ComplexMatrix {
    pub fn identity(d: usize) -> Self {
        let mut entries = alloc::vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            entries[i * d + i] = Complex64::new(1.0, 0.0);
        }
        ComplexMatrix { d, entries }
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.d + j]
    }

    pub fn mul(&self, rhs: &ComplexMatrix) -> ComplexMatrix {
        debug_assert_eq!(self.d, rhs.d);
        let d = self.d;
        let mut out = alloc::vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.entries[i * d + k];
                for j in 0..d {
                    out[i * d + j] += a * rhs.entries[k * d + j];
                }
            }
        }
        ComplexMatrix { d, entries: out }
    }

    pub fn scale(&self, s: f64) -> ComplexMatrix {
        ComplexMatrix {
            d: self.d,
            entries: self.entries.iter().map(|e| e * s).collect(),
        }
    }

    pub fn frobenius_norm_sq(&self) -> f64 {
        self.entries.iter().map(|e| e.norm_sqr()).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.frobenius_norm_sq().sqrt()
    }

    pub fn max_abs_diff(&self, rhs: &ComplexMatrix) -> f64 {
        self.entries
            .iter()
            .zip(&rhs.entries)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// `n`-step cocycle product `M(E^{n-1} xi) ... M(E xi) M(xi)` with
/// `E xi = S^T xi mod Z^d`. Equals the matrix of the `n`-th substitution
/// power evaluated at `xi`.
pub fn cocycle_product(zeta: &Substitution, xi: &[f64], n: u32) -> Result<ComplexMatrix> {
    let (m, log_scale) = rescaled_cocycle_product(zeta, xi, n)?;
    if log_scale.abs() > 500.0 {
        return Err(Error::NonFinite { context: "cocycle product overflow" });
    }
    Ok(m.scale(log_scale.exp()))
}

/// Cocycle product kept at unit Frobenius norm, returning the accumulated
/// `log` of the normalization. The true product is `exp(log_scale) * matrix`;
/// keeping the logarithm avoids overflow for large `n`.
pub fn rescaled_cocycle_product(
    zeta: &Substitution,
    xi: &[f64],
    n: u32,
) -> Result<(ComplexMatrix, f64)> {
    let d = zeta.dim();
    if xi.len() != d {
        return Err(Error::DimensionMismatch { expected: d, got: xi.len() });
    }
    let trig = build_cocycle_matrix(zeta);
    let s = zeta.substitution_matrix();
    let mut point = TorusPoint::Float(xi.to_vec()).reduce();
    let mut acc = ComplexMatrix::identity(d);
    let mut log_scale = 0.0f64;
    for _ in 0..n {
        let step = trig.evaluate(&point.to_floats());
        acc = step.mul(&acc);
        let norm = acc.frobenius_norm();
        if !norm.is_finite() {
            return Err(Error::NonFinite { context: "cocycle product norm" });
        }
        if norm == 0.0 {
            // product annihilated: log norm is -inf, report as such
            return Ok((acc, f64::NEG_INFINITY));
        }
        acc = acc.scale(1.0 / norm);
        log_scale += norm.ln();
        point = point.endomorphism_step(&s)?;
    }
    Ok((acc, log_scale))
}
