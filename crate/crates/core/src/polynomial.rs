//! Exact integer polynomials, constant term first.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::intmatrix::big_to_f64;
use crate::Result;
use crate::Error;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>, // constant first; empty = zero polynomial
}

impl IntPolynomial {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        IntPolynomial { coeffs }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigInt {
        static ZERO: BigInt = BigInt::ZERO;
        self.coeffs.get(k).unwrap_or(&ZERO)
    }

    pub fn leading(&self) -> &BigInt {
        self.coeff(self.degree())
    }

    pub fn is_monic(&self) -> bool {
        !self.is_zero() && self.leading().is_one()
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n / 2).all(|k| self.coeffs[k] == self.coeffs[n - 1 - k])
    }

    pub fn eval_big(&self, x: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn eval_complex(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + Complex64::new(big_to_f64(c), 0.0);
        }
        acc
    }

    pub fn derivative(&self) -> IntPolynomial {
        if self.coeffs.len() <= 1 {
            return IntPolynomial::zero();
        }
        IntPolynomial::new(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c * BigInt::from((k + 1) as u64))
                .collect(),
        )
    }

    pub fn mul(&self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut out = alloc::vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPolynomial::new(out)
    }

    pub fn neg(&self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }

    /// Exact division in Z[x]: returns the quotient iff `self = q * rhs`
    /// with integer coefficients and zero remainder.
    pub fn divide_exact(&self, rhs: &IntPolynomial) -> Option<IntPolynomial> {
        if rhs.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(IntPolynomial::zero());
        }
        if self.degree() < rhs.degree() {
            return None;
        }
        let mut rem = self.coeffs.clone();
        let dq = self.degree() - rhs.degree();
        let mut quot = alloc::vec![BigInt::zero(); dq + 1];
        let lead = rhs.leading();
        for k in (0..=dq).rev() {
            let top = rem[k + rhs.degree()].clone();
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                rem[k + j] -= &q * b;
            }
            quot[k] = q;
        }
        if rem.iter().all(|c| c.is_zero()) {
            Some(IntPolynomial::new(quot))
        } else {
            None
        }
    }

    /// GCD of coefficients, positive; zero polynomial has content zero.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for c in &self.coeffs {
            g = g.gcd(c);
        }
        g
    }

    /// Primitive part with positive leading coefficient.
    pub fn primitive_part(&self) -> IntPolynomial {
        if self.is_zero() {
            return IntPolynomial::zero();
        }
        let mut g = self.content();
        if self.leading().is_negative() {
            g = -g;
        }
        IntPolynomial::new(self.coeffs.iter().map(|c| c / &g).collect())
    }

    /// Square-free decomposition by Yun's algorithm (over Q, results
    /// renormalized to primitive integer polynomials). Returns pairs
    /// `(factor, multiplicity)` with `self ~ content * prod f_i^{m_i}`.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(IntPolynomial, usize)>> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        if self.degree() == 0 {
            return Ok(Vec::new());
        }
        let p = RatPoly::from_int(&self.primitive_part());
        let dp = p.derivative();
        let a = p.gcd(&dp);
        let mut b = p.div(&a);
        let mut c = dp.div(&a);
        let mut out = Vec::new();
        let mut mult = 1usize;
        loop {
            let d = c.sub(&b.derivative());
            if b.degree() == 0 {
                break;
            }
            let f = b.gcd(&d);
            if f.degree() > 0 {
                out.push((f.to_primitive_int(), mult));
            }
            b = b.div(&f);
            c = d.div(&f);
            mult += 1;
            if mult > self.degree() + 1 {
                break; // defensive bound, cannot trigger for valid input
            }
        }
        Ok(out)
    }
}

/// Minimal dense rational polynomial used only for gcd computations.
#[derive(Debug, Clone)]
struct RatPoly {
    coeffs: Vec<BigRational>, // constant first, normalized (no trailing zeros)
}

impl RatPoly {
    fn from_int(p: &IntPolynomial) -> RatPoly {
        RatPoly {
            coeffs: p.coeffs().iter().map(|c| BigRational::from(c.clone())).collect(),
        }
    }

    fn trim(mut self) -> RatPoly {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
        self
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    fn derivative(&self) -> RatPoly {
        if self.coeffs.len() <= 1 {
            return RatPoly { coeffs: Vec::new() };
        }
        RatPoly {
            coeffs: self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c * BigRational::from(BigInt::from((k + 1) as u64)))
                .collect(),
        }
        .trim()
    }

    fn sub(&self, rhs: &RatPoly) -> RatPoly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let zero = BigRational::zero();
        RatPoly {
            coeffs: (0..n)
                .map(|k| {
                    self.coeffs.get(k).unwrap_or(&zero) - rhs.coeffs.get(k).unwrap_or(&zero)
                })
                .collect(),
        }
        .trim()
    }

    /// Remainder of self / rhs.
    fn rem(&self, rhs: &RatPoly) -> RatPoly {
        let mut rem = self.coeffs.clone();
        let lead = rhs.coeffs.last().unwrap().clone();
        while rem.len() >= rhs.coeffs.len() && !rem.is_empty() {
            let q = rem.last().unwrap() / &lead;
            let shift = rem.len() - rhs.coeffs.len();
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let v = &q * b;
                rem[shift + j] -= v;
            }
            while rem.last().map(|c| c.is_zero()).unwrap_or(false) {
                rem.pop();
            }
            if rem.len() < rhs.coeffs.len() {
                break;
            }
        }
        RatPoly { coeffs: rem }
    }

    /// Exact quotient (remainder assumed zero by construction).
    fn div(&self, rhs: &RatPoly) -> RatPoly {
        if self.is_zero() {
            return RatPoly { coeffs: Vec::new() };
        }
        let mut rem = self.coeffs.clone();
        let lead = rhs.coeffs.last().unwrap().clone();
        let dq = self.degree() - rhs.degree();
        let mut quot = alloc::vec![BigRational::zero(); dq + 1];
        for k in (0..=dq).rev() {
            let q = &rem[k + rhs.degree()] / &lead;
            for (j, b) in rhs.coeffs.iter().enumerate() {
                let v = &q * b;
                rem[k + j] -= v;
            }
            quot[k] = q;
        }
        RatPoly { coeffs: quot }.trim()
    }

    /// Monic gcd by the Euclidean algorithm.
    fn gcd(&self, rhs: &RatPoly) -> RatPoly {
        let mut a = self.clone().trim();
        let mut b = rhs.clone().trim();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let lead = a.coeffs.last().unwrap().clone();
        RatPoly { coeffs: a.coeffs.iter().map(|c| c / &lead).collect() }
    }

    /// Clear denominators, return the primitive integer polynomial.
    fn to_primitive_int(&self) -> IntPolynomial {
        let mut denom = BigInt::one();
        for c in &self.coeffs {
            denom = denom.lcm(c.denom());
        }
        IntPolynomial::new(
            self.coeffs
                .iter()
                .map(|c| c.numer() * (&denom / c.denom()))
                .collect(),
        )
        .primitive_part()
    }
}
