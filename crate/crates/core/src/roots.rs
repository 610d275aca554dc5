//! Complex root finding for integer polynomials.
//!
//! Roots are located per square-free factor with Durand-Kerner iteration and
//! then Newton-polished against that factor, so multiple roots of the input
//! are recovered exactly as clusters-free simple roots with a multiplicity.

use alloc::vec::Vec;

use num_complex::Complex64;

use crate::intmatrix::big_to_f64;
use crate::polynomial::IntPolynomial;
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct RootSet {
    /// `(root, multiplicity)` pairs, sorted by real part then imaginary part.
    pub roots: Vec<(Complex64, usize)>,
    /// Per-root residual bound: `|p(root)|` of the defining square-free factor.
    pub residuals: Vec<f64>,
}

impl RootSet {
    /// Total root count with multiplicity.
    pub fn count(&self) -> usize {
        self.roots.iter().map(|(_, m)| m).sum()
    }

    /// Roots repeated according to multiplicity.
    pub fn with_multiplicity(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.count());
        for (r, m) in &self.roots {
            for _ in 0..*m {
                out.push(*r);
            }
        }
        out
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }
}

/// All complex roots of `p`, with multiplicities.
pub fn roots(p: &IntPolynomial) -> Result<RootSet> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if p.degree() == 0 {
        return Err(Error::InvalidArgument("degree-0 polynomial has no roots".into()));
    }
    let mut all: Vec<(Complex64, usize)> = Vec::new();
    let mut residuals = Vec::new();
    for (factor, mult) in p.squarefree_decomposition()? {
        if factor.degree() == 0 {
            continue;
        }
        let simple = simple_roots(&factor);
        for r in simple {
            all.push((r, mult));
            residuals.push(factor.eval_complex(r).norm());
        }
    }
    let mut idx: Vec<usize> = (0..all.len()).collect();
    idx.sort_by(|&a, &b| {
        let (ra, rb) = (all[a].0, all[b].0);
        ra.re.partial_cmp(&rb.re)
            .unwrap()
            .then(ra.im.partial_cmp(&rb.im).unwrap())
    });
    Ok(RootSet {
        roots: idx.iter().map(|&i| all[i]).collect(),
        residuals: idx.iter().map(|&i| residuals[i]).collect(),
    })
}

/// Durand-Kerner on a square-free polynomial, followed by Newton polishing.
fn simple_roots(p: &IntPolynomial) -> Vec<Complex64> {
    let n = p.degree();
    let lead = big_to_f64(p.leading());
    let monic: Vec<f64> = p.coeffs().iter().map(|c| big_to_f64(c) / lead).collect();
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in monic.iter().rev() {
            acc = acc * z + c;
        }
        acc
    };
    // Cauchy-style inclusion radius.
    let radius = 1.0 + monic.iter().take(n).map(|c| c.abs()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut xs: Vec<Complex64> = (0..n).map(|j| radius * seed.powu(j as u32 + 1)).collect();
    for _ in 0..500 {
        let mut max_step = 0.0f64;
        for j in 0..n {
            let mut denom = Complex64::new(1.0, 0.0);
            for k in 0..n {
                if k != j {
                    denom *= xs[j] - xs[k];
                }
            }
            if denom.norm() == 0.0 {
                // coincident iterates: nudge
                xs[j] += Complex64::new(1e-8, 1e-8);
                max_step = f64::MAX;
                continue;
            }
            let step = eval(xs[j]) / denom;
            xs[j] -= step;
            max_step = max_step.max(step.norm() / (1.0 + xs[j].norm()));
        }
        if max_step < 1e-14 {
            break;
        }
    }
    // Newton polishing against the exact integer coefficients.
    let dp = p.derivative();
    for x in xs.iter_mut() {
        for _ in 0..4 {
            let f = p.eval_complex(*x);
            let df = dp.eval_complex(*x);
            if df.norm() == 0.0 {
                break;
            }
            let step = f / df;
            if !step.re.is_finite() || !step.im.is_finite() {
                break;
            }
            *x -= step;
            if step.norm() < 1e-16 * (1.0 + x.norm()) {
                break;
            }
        }
        // snap near-real roots so conjugate symmetry is clean
        if x.im.abs() < 1e-12 * (1.0 + x.re.abs()) {
            let candidate = Complex64::new(x.re, 0.0);
            if p.eval_complex(candidate).norm() <= p.eval_complex(*x).norm() * 4.0 + 1e-300 {
                *x = candidate;
            }
        }
    }
    xs
}
