//! Exact arbitrary-precision integer matrices.
//!
//! Entries of powers of substitution matrices grow like `theta_1^k` and
//! overflow 64-bit integers by `k` around 15 for the families treated here,
//! so everything is big-integer from the start.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::polynomial::IntPolynomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    d: usize,
    entries: Vec<BigInt>, // row-major
}

impl IntMatrix {
    pub fn zeros(d: usize) -> Self {
        IntMatrix { d, entries: alloc::vec![BigInt::zero(); d * d] }
    }

    pub fn identity(d: usize) -> Self {
        let mut m = IntMatrix::zeros(d);
        for i in 0..d {
            m.entries[i * d + i] = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let d = rows.len();
        let mut entries = Vec::with_capacity(d * d);
        for row in rows {
            assert_eq!(row.len(), d, "matrix must be square");
            entries.extend(row);
        }
        IntMatrix { d, entries }
    }

    pub fn from_i64_rows(rows: &[&[i64]]) -> Self {
        IntMatrix::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| BigInt::from(v)).collect()).collect(),
        )
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn entry(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.d + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, v: BigInt) {
        self.entries[i * self.d + j] = v;
    }

    pub fn add_assign_entry(&mut self, i: usize, j: usize, v: i64) {
        self.entries[i * self.d + j] += v;
    }

    pub fn transpose(&self) -> IntMatrix {
        let d = self.d;
        let mut m = IntMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                m.entries[j * d + i] = self.entries[i * d + j].clone();
            }
        }
        m
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.d, rhs.d);
        let d = self.d;
        let mut out = IntMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = &self.entries[i * d + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..d {
                    let b = &rhs.entries[k * d + j];
                    if !b.is_zero() {
                        out.entries[i * d + j] += a * b;
                    }
                }
            }
        }
        out
    }

    pub fn pow(&self, n: u32) -> IntMatrix {
        let mut result = IntMatrix::identity(self.d);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn trace(&self) -> BigInt {
        (0..self.d).map(|i| self.entries[i * self.d + i].clone()).sum()
    }

    /// Sum of all entries.
    pub fn entry_sum(&self) -> BigInt {
        self.entries.iter().sum()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.iter().all(|e| !e.is_negative())
    }

    pub fn to_f64_rows(&self) -> Vec<Vec<f64>> {
        (0..self.d)
            .map(|i| (0..self.d).map(|j| big_to_f64(self.entry(i, j))).collect())
            .collect()
    }

    /// Monic characteristic polynomial `det(xI - A)`, constant term first,
    /// by the Faddeev-LeVerrier recurrence. All divisions are exact.
    pub fn char_poly(&self) -> IntPolynomial {
        let d = self.d;
        let mut coeffs = alloc::vec![BigInt::zero(); d + 1];
        coeffs[d] = BigInt::one();
        let mut m = self.clone(); // M_1 = A
        let mut c = -m.trace(); // c_1
        coeffs[d - 1] = c.clone();
        for k in 2..=d {
            // M_k = A (M_{k-1} + c_{k-1} I)
            let mut shifted = m;
            for i in 0..d {
                let idx = i * d + i;
                shifted.entries[idx] += &c;
            }
            m = self.mul(&shifted);
            c = -m.trace() / BigInt::from(k as i64); // exact
            coeffs[d - k] = c.clone();
        }
        IntPolynomial::new(coeffs)
    }

    pub fn det(&self) -> BigInt {
        let p0 = self.char_poly().coeff(0).clone();
        if self.d % 2 == 0 {
            p0
        } else {
            -p0
        }
    }
}

/// Lossy conversion that stays finite for integers far beyond `f64::MAX` by
/// going through mantissa + exponent. Only used where a float is the target.
pub fn big_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() { f64::NEG_INFINITY } else { f64::INFINITY })
}

/// Natural log of a positive big integer, stable for thousands of bits.
pub fn ln_big(x: &BigInt) -> f64 {
    assert!(x.is_positive(), "ln_big requires a positive integer");
    let bits = x.bits();
    if bits <= 53 {
        return big_to_f64(x).ln();
    }
    let shift = bits - 53;
    let top = x >> shift;
    big_to_f64(&top).ln() + (shift as f64) * core::f64::consts::LN_2
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_poly_identity() {
        // (x-1)^2 = x^2 - 2x + 1
        let p = IntMatrix::identity(2).char_poly();
        assert_eq!(p.coeffs(), &[BigInt::from(1), BigInt::from(-2), BigInt::from(1)]);
    }

    #[test]
    fn char_poly_zeta_m() {
        // x^3 - (m+1)x^2 + (m-2)x + m
        for m in [3i64, 12, 20] {
            let s = IntMatrix::from_i64_rows(&[&[m, 1, 0], &[1, 1, 1], &[0, 1, 0]]);
            let p = s.char_poly();
            assert_eq!(
                p.coeffs(),
                &[
                    BigInt::from(m),
                    BigInt::from(m - 2),
                    BigInt::from(-(m + 1)),
                    BigInt::from(1)
                ]
            );
        }
    }

    #[test]
    fn char_poly_iet_family() {
        // x^4 - (n+6)x^3 + (10+n)x^2 - (n+6)x + 1
        for n in 1i64..=4 {
            let s = IntMatrix::from_i64_rows(&[
                &[1, 1, 1, 1],
                &[0, 2, n + 2, n + 1],
                &[0, 0, n + 1, n],
                &[1, 2, 2, 2],
            ]);
            let p = s.char_poly();
            assert_eq!(
                p.coeffs(),
                &[
                    BigInt::from(1),
                    BigInt::from(-(n + 6)),
                    BigInt::from(10 + n),
                    BigInt::from(-(n + 6)),
                    BigInt::from(1)
                ]
            );
        }
    }

    #[test]
    fn det_via_char_poly() {
        let fib = IntMatrix::from_i64_rows(&[&[1, 1], &[1, 0]]);
        assert_eq!(fib.det(), BigInt::from(-1));
        let tm = IntMatrix::from_i64_rows(&[&[1, 1], &[1, 1]]);
        assert_eq!(tm.det(), BigInt::from(0));
    }

    #[test]
    fn pow_matches_repeated_mul() {
        let fib = IntMatrix::from_i64_rows(&[&[1, 1], &[1, 0]]);
        let mut acc = IntMatrix::identity(2);
        for k in 0..8u32 {
            assert_eq!(fib.pow(k), acc);
            acc = acc.mul(&fib);
        }
    }

    #[test]
    fn ln_big_large() {
        let x = BigInt::from(3u32).pow(500u32);
        let expect = 500.0 * 3f64.ln();
        assert!((ln_big(&x) - expect).abs() < 1e-9 * expect);
    }
}
