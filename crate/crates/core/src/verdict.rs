//! Decision logic: combine exact hypothesis checks with the Lyapunov-exponent
//! evidence into a verdict on pure singularity of the spectrum.
//!
//! Two criteria are implemented. The general one needs an irreducible
//! characteristic polynomial and the gap `chi < (1/2) log theta_1`; the
//! two-letter one replaces irreducibility with two integer eigenvalues of
//! modulus greater than one (non-constant length).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::algebra::{is_irreducible_over_q, mahler_jensen, perron_data};
use crate::lyapunov::ExponentReport;
use crate::polynomial::IntPolynomial;
use crate::substitution::Substitution;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Conclusion {
    /// All hypotheses hold and the spectral gap fires.
    SingularSpectrum,
    /// Hypotheses hold but the gap could not be certified.
    Inconclusive,
    /// At least one hypothesis fails; the criterion does not apply.
    HypothesesViolated,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct HypothesisCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct Evidence {
    pub half_log_theta: f64,
    /// Best certified-with-confidence upper bound for the exponent.
    pub chi_upper: f64,
    /// `half_log_theta - chi_upper`; the gap fires when positive.
    pub margin: f64,
    pub best_k: u32,
}

#[derive(Debug, Clone, serde::Serialize)]
pub struct Verdict {
    pub conclusion: Conclusion,
    /// How the exponent upper bound was obtained: `"monte_carlo"` or
    /// `"analytic"`.
    pub method: &'static str,
    pub checks: Vec<HypothesisCheck>,
    pub evidence: Option<Evidence>,
}

fn push(checks: &mut Vec<HypothesisCheck>, name: &'static str, passed: bool, detail: String) {
    checks.push(HypothesisCheck { name, passed, detail });
}

fn gap_evidence(
    zeta: &Substitution,
    chi_upper: f64,
    best_k: u32,
    checks: &mut Vec<HypothesisCheck>,
) -> Result<Evidence> {
    let (theta, _) = perron_data(&zeta.substitution_matrix())?;
    let half_log_theta = theta.ln() / 2.0;
    let margin = half_log_theta - chi_upper;
    push(
        checks,
        "spectral_gap",
        margin > 0.0,
        format!(
            "chi <= {chi_upper:.6} vs (1/2) log theta_1 = {half_log_theta:.6} (margin {margin:+.6})"
        ),
    );
    Ok(Evidence { half_log_theta, chi_upper, margin, best_k })
}

fn conclude(
    method: &'static str,
    checks: Vec<HypothesisCheck>,
    evidence: Option<Evidence>,
) -> Verdict {
    let hypotheses_ok = checks
        .iter()
        .filter(|c| c.name != "spectral_gap")
        .all(|c| c.passed);
    let gap = checks.iter().any(|c| c.name == "spectral_gap" && c.passed);
    let conclusion = if !hypotheses_ok {
        Conclusion::HypothesesViolated
    } else if gap {
        Conclusion::SingularSpectrum
    } else {
        Conclusion::Inconclusive
    };
    Verdict { conclusion, method, checks, evidence }
}

/// General criterion: primitive aperiodic substitution on `d >= 2` letters
/// with irreducible characteristic polynomial; singular spectrum follows
/// from `chi < (1/2) log theta_1`.
///
/// Aperiodicity is accepted either through the sufficient condition
/// (irreducible characteristic polynomial of degree >= 2 forces an
/// irrational Perron eigenvalue, which no periodic system admits) or by the
/// caller's explicit assertion.
pub fn check_theorem1(
    zeta: &Substitution,
    report: &ExponentReport,
    aperiodicity_asserted: bool,
) -> Result<Verdict> {
    theorem1_with_upper(
        zeta,
        report.best_upper,
        report.best_k,
        "monte_carlo",
        aperiodicity_asserted,
    )
}

/// Same criterion, with the exponent bound supplied by the caller — used for
/// families with a closed-form bound (see [`zeta_m_family_bound`]).
pub fn check_theorem1_analytic(
    zeta: &Substitution,
    chi_upper: f64,
    aperiodicity_asserted: bool,
) -> Result<Verdict> {
    theorem1_with_upper(zeta, chi_upper, 0, "analytic", aperiodicity_asserted)
}

fn theorem1_with_upper(
    zeta: &Substitution,
    chi_upper: f64,
    best_k: u32,
    method: &'static str,
    aperiodicity_asserted: bool,
) -> Result<Verdict> {
    let mut checks = Vec::new();
    let d = zeta.dim();
    push(&mut checks, "alphabet_size", d >= 2, format!("{d} letters"));
    let primitive = zeta.is_primitive();
    push(&mut checks, "primitive", primitive, String::from(if primitive {
        "substitution matrix is primitive"
    } else {
        "substitution matrix is not primitive"
    }));
    let s = zeta.substitution_matrix();
    let det = s.det();
    push(
        &mut checks,
        "nondegenerate",
        !det.is_zero(),
        format!("det S = {det}"),
    );
    let p = s.char_poly();
    let irreducible = match is_irreducible_over_q(&p) {
        Ok(v) => v,
        Err(Error::Undecided { msg }) => {
            push(&mut checks, "irreducible_char_poly", false, format!("undecided: {msg}"));
            return Ok(conclude(method, checks, None));
        }
        Err(e) => return Err(e),
    };
    push(
        &mut checks,
        "irreducible_char_poly",
        irreducible,
        format!("characteristic polynomial of degree {}", p.degree()),
    );
    let aperiodic = (irreducible && d >= 2) || aperiodicity_asserted;
    push(&mut checks, "aperiodic", aperiodic, String::from(if aperiodicity_asserted {
        "asserted by caller"
    } else if aperiodic {
        "irreducible characteristic polynomial forces an irrational expansion factor"
    } else {
        "no sufficient condition available; assert explicitly if known"
    }));
    let evidence = if primitive {
        Some(gap_evidence(zeta, chi_upper, best_k, &mut checks)?)
    } else {
        None
    };
    Ok(conclude(method, checks, evidence))
}

/// Two-letter criterion: primitive aperiodic non-constant-length substitution
/// on two letters whose matrix has two integer eigenvalues of modulus greater
/// than one; the same gap condition then gives singular spectrum.
pub fn check_theorem2(
    zeta: &Substitution,
    report: &ExponentReport,
    aperiodicity_asserted: bool,
) -> Result<Verdict> {
    let mut checks = Vec::new();
    let d = zeta.dim();
    push(
        &mut checks,
        "alphabet_size",
        d == 2,
        if d == 2 {
            String::from("2 letters")
        } else {
            format!("{d} letters; use the general criterion instead")
        },
    );
    if d != 2 {
        return Ok(conclude("monte_carlo", checks, None));
    }
    let primitive = zeta.is_primitive();
    push(&mut checks, "primitive", primitive, String::from(if primitive {
        "substitution matrix is primitive"
    } else {
        "substitution matrix is not primitive"
    }));
    let constant = zeta.is_constant_length();
    push(
        &mut checks,
        "non_constant_length",
        !constant,
        format!(
            "image lengths {:?}",
            (0..d).map(|a| zeta.image(a).len()).collect::<Vec<_>>()
        ),
    );
    push(&mut checks, "aperiodic", aperiodicity_asserted, String::from(
        if aperiodicity_asserted {
            "asserted by caller"
        } else {
            "reducible characteristic polynomial: aperiodicity must be asserted explicitly"
        },
    ));
    // integer eigenvalues, exactly: x^2 - t x + det with square discriminant
    let s = zeta.substitution_matrix();
    let trace = s.trace();
    let det = s.det();
    let disc = &trace * &trace - num_bigint::BigInt::from(4) * &det;
    let (integer_pair, detail) = if disc.is_negative() {
        (false, String::from("complex eigenvalues"))
    } else {
        let root = disc.sqrt();
        if &root * &root != disc {
            (false, format!("irrational eigenvalues (discriminant {disc})"))
        } else {
            let two = num_bigint::BigInt::from(2);
            let a = (&trace + &root) / &two;
            let b = (&trace - &root) / &two;
            let exact = &a + &b == trace && &a * &b == det;
            let big = a.abs() > num_bigint::BigInt::from(1) && b.abs() > num_bigint::BigInt::from(1);
            (exact && big, format!("eigenvalues {a} and {b}"))
        }
    };
    push(&mut checks, "two_integer_eigenvalues_modulus_gt_one", integer_pair, detail);
    let evidence = if primitive {
        Some(gap_evidence(zeta, report.best_upper, report.best_k, &mut checks)?)
    } else {
        None
    };
    Ok(conclude("monte_carlo", checks, evidence))
}

/// Analytic bound for the three-letter family `0 -> 0^m 1, 1 -> 012, 2 -> 1`:
/// the exponent is at most `(1/2) log(7 + 2 sqrt 6)`, computed here as half
/// the Mahler measure of `5z^2 - 14z + 5`.
pub fn zeta_m_family_bound() -> Result<f64> {
    Ok(mahler_jensen(&IntPolynomial::from_i64(&[5, -14, 5]))? / 2.0)
}

/// Smallest `m` for which the analytic bound certifies the gap for the
/// three-letter family (`theta_1 > m` beats `7 + 2 sqrt 6`).
pub const ZETA_M_FAMILY_THRESHOLD: usize = 12;

/// Recognize a member of the three-letter family, returning its parameter.
pub fn zeta_m_parameter(zeta: &Substitution) -> Option<usize> {
    if zeta.dim() != 3 {
        return None;
    }
    let img0 = zeta.image(0);
    let m = img0.len().checked_sub(1)?;
    if m == 0 || !img0[..m].iter().all(|&a| a == 0) || img0[m] != 1 {
        return None;
    }
    if zeta.image(1) != [0, 1, 2] || zeta.image(2) != [1] {
        return None;
    }
    Some(m)
}

/// Recognize a member of the four-letter loop family, returning `n`.
pub fn loop_family_parameter(zeta: &Substitution) -> Option<usize> {
    if zeta.dim() != 4 {
        return None;
    }
    // image of letter 3 is 03 (12)^n 13, so n = (len - 4) / 2
    let len = zeta.image(3).len();
    if len < 4 || (len - 4) % 2 != 0 {
        return None;
    }
    let n = (len - 4) / 2;
    (n >= 1 && *zeta == crate::iet::family_zeta_n(n)).then_some(n)
}

#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct FamilyBound {
    /// Upper bound for `int log ||M(xi)||_F`, valid for every `n`.
    pub integral_bound: f64,
    /// Smallest `n` certified singular via `theta_1 >= n + 1`.
    pub lemma_threshold: usize,
    /// Smallest `n` certified singular via `theta_1 > n` alone.
    pub corollary_threshold: usize,
    /// Whether the bound certifies singular spectrum at this `n`.
    pub certified: bool,
}

/// Analytic bound for block-sandwiched repetition families
/// `sigma_1 (zeta_ab)^n sigma_2` on `d` letters: the level-1 integral is at
/// most `(1/2) log(d+2 + 2 sqrt(d+1)) + (1/2)(log |S_1|_F^2 + log |S_2|_F^2)`.
/// The gap fires once `theta_1` exceeds the exponentiated bound; thresholds
/// come from `theta_1 >= n + 1` (lemma mode) or `theta_1 > n` (corollary
/// mode).
pub fn family_bound_lemma(
    d: usize,
    s1_frob_sq: u64,
    s2_frob_sq: u64,
) -> Result<FamilyBound> {
    if d < 2 || s1_frob_sq == 0 || s2_frob_sq == 0 {
        return Err(Error::InvalidArgument("need d >= 2 and nonzero block norms".into()));
    }
    // (1/2) log(d+2 + 2 sqrt(d+1)) via the Mahler measure of
    // d z^2 - (2d+4) z + d
    let di = d as i64;
    let core = mahler_jensen(&IntPolynomial::from_i64(&[di, -(2 * di + 4), di]))? / 2.0;
    let integral_bound =
        core + 0.5 * ((s1_frob_sq as f64).ln() + (s2_frob_sq as f64).ln());
    let product = (2.0 * integral_bound).exp();
    // lemma mode: smallest n with n + 1 > product;
    // corollary mode: smallest n with n >= product
    let lemma_threshold = product.floor() as usize;
    let corollary_threshold = product.ceil() as usize;
    Ok(FamilyBound {
        integral_bound,
        lemma_threshold,
        corollary_threshold,
        certified: false,
    })
}

/// The bound above specialized to the four-letter loop family, whose outer
/// blocks have squared Frobenius norms 11 and 8.
pub fn loop_family_bound(n: usize) -> Result<FamilyBound> {
    if n == 0 {
        return Err(Error::InvalidArgument("family parameter n must be >= 1".into()));
    }
    let mut b = family_bound_lemma(4, 11, 8)?;
    b.certified = n >= b.lemma_threshold;
    Ok(b)
}

/// Half the log of the Perron eigenvalue, the right-hand side of the gap.
pub fn half_log_theta(zeta: &Substitution) -> Result<f64> {
    let (theta, _) = perron_data(&zeta.substitution_matrix())?;
    Ok(theta.ln() / 2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::intmatrix::big_to_f64;
    use crate::lyapunov::inf_exponent;
    use crate::substitution::Substitution;

    fn zeta_m(m: usize) -> Substitution {
        let mut img0 = alloc::vec![0; m];
        img0.push(1);
        Substitution::new(alloc::vec![img0, alloc::vec![0, 1, 2], alloc::vec![1]]).unwrap()
    }

    #[test]
    fn general_criterion_fires_for_m_12() {
        let zeta = zeta_m(12);
        let report = inf_exponent(&zeta, 200, 12, 42).unwrap();
        let v = check_theorem1(&zeta, &report, false).unwrap();
        assert_eq!(v.conclusion, Conclusion::SingularSpectrum, "checks: {:?}", v.checks);
        let e = v.evidence.unwrap();
        assert!(e.margin > 0.0);
        // analytic bound confirms: chi <= (1/2) log(7 + 2 sqrt 6) < half log theta
        assert!(zeta_m_family_bound().unwrap() < e.half_log_theta);
    }

    #[test]
    fn general_criterion_fires_for_fibonacci() {
        // Pisot case: the exponent tends to 0, so the gap fires; the
        // conclusion is consistent (pure point spectrum is singular)
        let zeta = Substitution::parse("0 -> 01\n1 -> 0").unwrap();
        let report = inf_exponent(&zeta, 100, 15, 7).unwrap();
        let v = check_theorem1(&zeta, &report, false).unwrap();
        assert_eq!(v.conclusion, Conclusion::SingularSpectrum, "checks: {:?}", v.checks);
        assert_eq!(v.method, "monte_carlo");
    }

    #[test]
    fn analytic_path_matches_family_threshold() {
        // gap fires exactly from m = 12 on with the closed-form bound
        let bound = zeta_m_family_bound().unwrap();
        for m in 3..=20 {
            let zeta = zeta_m(m);
            let v = check_theorem1_analytic(&zeta, bound, false).unwrap();
            let expect = if m >= 12 {
                Conclusion::SingularSpectrum
            } else {
                Conclusion::Inconclusive
            };
            assert_eq!(v.conclusion, expect, "m = {m}");
            assert_eq!(v.method, "analytic");
        }
    }

    #[test]
    fn general_criterion_rejects_thue_morse() {
        // det = 0 and reducible characteristic polynomial
        let zeta = Substitution::parse("0 -> 01\n1 -> 10").unwrap();
        let report = inf_exponent(&zeta, 20, 3, 1).unwrap();
        let v = check_theorem1(&zeta, &report, true).unwrap();
        assert_eq!(v.conclusion, Conclusion::HypothesesViolated);
        assert!(v.checks.iter().any(|c| c.name == "nondegenerate" && !c.passed));
        assert!(v.checks.iter().any(|c| c.name == "irreducible_char_poly" && !c.passed));
    }

    #[test]
    fn two_letter_criterion_structure() {
        // S = [[3,2],[1,4]]: eigenvalues 5 and 2, column sums 4 and 6
        let zeta = Substitution::parse("0 -> 0001\n1 -> 001111").unwrap();
        let report = inf_exponent(&zeta, 60, 8, 3).unwrap();
        let v = check_theorem2(&zeta, &report, true).unwrap();
        for name in
            ["alphabet_size", "primitive", "non_constant_length", "aperiodic", "two_integer_eigenvalues_modulus_gt_one"]
        {
            assert!(
                v.checks.iter().any(|c| c.name == name && c.passed),
                "{name} should pass: {:?}",
                v.checks
            );
        }
        assert_ne!(v.conclusion, Conclusion::HypothesesViolated);
        // without the aperiodicity assertion the criterion must not conclude
        let v = check_theorem2(&zeta, &report, false).unwrap();
        assert_eq!(v.conclusion, Conclusion::HypothesesViolated);
    }

    #[test]
    fn two_letter_criterion_rejects_wrong_shapes() {
        let report = inf_exponent(&zeta_m(3), 10, 2, 1).unwrap();
        let v = check_theorem2(&zeta_m(3), &report, true).unwrap();
        assert_eq!(v.conclusion, Conclusion::HypothesesViolated);
        // Fibonacci: eigenvalues irrational
        let fib = Substitution::parse("0 -> 01\n1 -> 0").unwrap();
        let report = inf_exponent(&fib, 10, 2, 1).unwrap();
        let v = check_theorem2(&fib, &report, true).unwrap();
        assert!(v
            .checks
            .iter()
            .any(|c| c.name == "two_integer_eigenvalues_modulus_gt_one" && !c.passed));
    }

    #[test]
    fn family_bounds_and_thresholds() {
        let b = zeta_m_family_bound().unwrap();
        assert!((b - 0.5 * (7.0 + 2.0 * 6f64.sqrt()).ln()).abs() < 1e-12);
        // smallest integer beating 7 + 2 sqrt 6
        assert_eq!(ZETA_M_FAMILY_THRESHOLD, 12);
        let fb = loop_family_bound(1).unwrap();
        let expect = 0.5 * (6.0 + 2.0 * 5f64.sqrt()).ln() + 0.5 * (11.0f64.ln() + 8.0f64.ln());
        assert!((fb.integral_bound - expect).abs() < 1e-12);
        assert_eq!(fb.lemma_threshold, 921);
        assert_eq!(fb.corollary_threshold, 922);
        assert!(!fb.certified);
        assert!(loop_family_bound(921).unwrap().certified);
        assert!(loop_family_bound(922).unwrap().certified);
        assert!(!loop_family_bound(920).unwrap().certified);
    }

    #[test]
    fn outer_block_norms() {
        // the squared Frobenius norms 11 and 8 of the outer blocks
        use crate::iet::{rauzy_substitution, Perm, RauzyMove};
        let z14 = rauzy_substitution(&Perm::parse("4321").unwrap(), RauzyMove::B).unwrap();
        let s3 = rauzy_substitution(&Perm::parse("2431").unwrap(), RauzyMove::A).unwrap();
        let z24 = rauzy_substitution(&Perm::parse("2431").unwrap(), RauzyMove::B).unwrap();
        let block1 = Substitution::compose(
            &Substitution::compose(&Substitution::compose(&z14, &s3).unwrap(), &s3).unwrap(),
            &z24,
        )
        .unwrap();
        let sq_sum = |s: &Substitution| -> i64 {
            let m = s.substitution_matrix();
            let mut acc = 0i64;
            for i in 0..4 {
                for j in 0..4 {
                    let v = big_to_f64(m.entry(i, j)) as i64;
                    acc += v * v;
                }
            }
            acc
        };
        assert_eq!(sq_sum(&block1), 11);
        let z34 = rauzy_substitution(&Perm::parse("3241").unwrap(), RauzyMove::B).unwrap();
        let s2 = rauzy_substitution(&Perm::parse("4321").unwrap(), RauzyMove::A).unwrap();
        let mut block2 = Substitution::compose(&z34, &s2).unwrap();
        block2 = Substitution::compose(&block2, &s2).unwrap();
        block2 = Substitution::compose(&block2, &s2).unwrap();
        assert_eq!(sq_sum(&block2), 8);
    }

    #[test]
    fn family_detection() {
        assert_eq!(zeta_m_parameter(&zeta_m(12)), Some(12));
        assert_eq!(zeta_m_parameter(&zeta_m(3)), Some(3));
        let fib = Substitution::parse("0 -> 01\n1 -> 0").unwrap();
        assert_eq!(zeta_m_parameter(&fib), None);
        for n in [1usize, 2, 5] {
            assert_eq!(loop_family_parameter(&crate::iet::family_zeta_n(n)), Some(n));
        }
        assert_eq!(loop_family_parameter(&zeta_m(3)), None);
    }
}
