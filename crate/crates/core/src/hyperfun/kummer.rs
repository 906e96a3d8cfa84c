use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use super::dd::DD;
use crate::error::{Error, Result};

const EPS: f64 = 1.0 / 9_007_199_254_740_992.0; // 2^-53
const MAX_TERMS: usize = 10_000;
const COND_LIMIT: f64 = 1e8;

/// Arithmetic tier used when summing the series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Precision {
    /// Compensated double, escalating to double-double when cancellation is severe.
    #[default]
    Auto,
    /// Compensated double only; severe cancellation is an error.
    Double,
    /// Double-double throughout.
    DoubleDouble,
}

impl Precision {
    /// Reads `SL2REP_PRECISION` (`double` or `dd`); anything else means `Auto`.
    pub fn from_env() -> Precision {
        match std::env::var("SL2REP_PRECISION").as_deref() {
            Ok("double") => Precision::Double,
            Ok("dd") => Precision::DoubleDouble,
            _ => Precision::Auto,
        }
    }

    /// `from_env()` read once per process; the tier used by the entry points without a `_with` suffix.
    pub fn global() -> Precision {
        static TIER: std::sync::OnceLock<Precision> = std::sync::OnceLock::new();
        *TIER.get_or_init(Precision::from_env)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KummerEval {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub terms_used: usize,
    pub condition_estimate: f64,
}

fn check_b(b: f64) -> Result<()> {
    if !b.is_finite() || (b <= 0.0 && b == b.floor()) {
        return Err(Error::InvalidB(b));
    }
    Ok(())
}

/// Bound on |t_{k+1}/t_k| for all k >= n, valid once a+n and b+n are positive.
fn tail_ratio(a: f64, b: f64, z: f64, n: usize) -> Option<f64> {
    let nf = n as f64;
    if a + nf <= 0.0 || b + nf <= 0.0 {
        return None;
    }
    let growth = ((a + nf) / (b + nf)).max(1.0);
    Some(growth * z.abs() / (nf + 1.0))
}

struct Summed {
    sum: f64,
    abs_sum: f64,
    next_term: f64,
    terms_used: usize,
    terminated: bool,
}

fn sum_double(a: f64, b: f64, z: f64) -> Result<Summed> {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut abs_sum = 0.0f64;
    let mut term = 1.0f64;
    let mut small = 0;
    for n in 0..MAX_TERMS {
        // Neumaier compensated addition
        let s = sum + term;
        if sum.abs() >= term.abs() {
            comp += (sum - s) + term;
        } else {
            comp += (term - s) + sum;
        }
        sum = s;
        abs_sum += term.abs();
        let nf = n as f64;
        let next = term * (a + nf) * z / ((b + nf) * (nf + 1.0));
        if a + nf == 0.0 {
            return Ok(Summed { sum: sum + comp, abs_sum, next_term: 0.0, terms_used: n + 1, terminated: true });
        }
        if term.abs() <= EPS * (sum + comp).abs() {
            small += 1;
        } else {
            small = 0;
        }
        if small >= 3 && tail_ratio(a, b, z, n + 1).is_some_and(|r| r < 0.5) {
            return Ok(Summed { sum: sum + comp, abs_sum, next_term: next, terms_used: n + 1, terminated: false });
        }
        term = next;
    }
    Err(Error::NonConvergence(MAX_TERMS))
}

fn sum_dd(a: f64, b: f64, z: f64) -> Result<Summed> {
    let (a_dd, b_dd, z_dd) = (DD::from_f64(a), DD::from_f64(b), DD::from_f64(z));
    let mut sum = DD::default();
    let mut abs_sum = 0.0f64;
    let mut term = DD::from_f64(1.0);
    let mut small = 0;
    for n in 0..MAX_TERMS {
        sum = sum + term;
        abs_sum += term.to_f64().abs();
        let nf = DD::from_f64(n as f64);
        let next = term * (a_dd + nf) * z_dd / ((b_dd + nf) * (nf + DD::from_f64(1.0)));
        if a + n as f64 == 0.0 {
            return Ok(Summed { sum: sum.to_f64(), abs_sum, next_term: 0.0, terms_used: n + 1, terminated: true });
        }
        if term.to_f64().abs() <= EPS * EPS * sum.to_f64().abs() {
            small += 1;
        } else {
            small = 0;
        }
        if small >= 3 && tail_ratio(a, b, z, n + 1).is_some_and(|r| r < 0.5) {
            return Ok(Summed { sum: sum.to_f64(), abs_sum, next_term: next.to_f64(), terms_used: n + 1, terminated: false });
        }
        term = next;
    }
    Err(Error::NonConvergence(MAX_TERMS))
}

fn finish(s: Summed, a: f64, b: f64, z: f64, unit: f64) -> KummerEval {
    let cond = if s.sum == 0.0 { f64::INFINITY } else { (s.abs_sum / s.sum.abs()).max(1.0) };
    let tail = if s.terminated {
        0.0
    } else {
        let r = tail_ratio(a, b, z, s.terms_used).unwrap_or(0.5).min(0.5);
        s.next_term.abs() / (1.0 - r)
    };
    KummerEval {
        value: Complex64::new(s.sum, 0.0),
        abs_error_estimate: tail + unit * s.abs_sum,
        terms_used: s.terms_used,
        condition_estimate: cond,
    }
}

/// Kummer's function M(a, b, z) = 1F1(a; b; z) by direct series.
pub fn kummer_m(a: f64, b: f64, z: f64) -> Result<KummerEval> {
    kummer_m_with(a, b, z, Precision::global())
}

pub fn kummer_m_with(a: f64, b: f64, z: f64, prec: Precision) -> Result<KummerEval> {
    check_b(b)?;
    if prec != Precision::DoubleDouble {
        let s = sum_double(a, b, z)?;
        let ev = finish(s, a, b, z, EPS);
        if ev.condition_estimate <= COND_LIMIT {
            return Ok(ev);
        }
        if prec == Precision::Double {
            return Err(Error::PrecisionLoss(ev.condition_estimate));
        }
    }
    let s = sum_dd(a, b, z)?;
    let ev = finish(s, a, b, z, EPS * EPS);
    // double-double carries 53 extra bits; compare the loss on that scale. A sum inside its own
    // error bound is a resolved zero of M: relative accuracy is meaningless there, the absolute bound holds.
    let at_root = ev.value.re.abs() <= ev.abs_error_estimate;
    if !at_root && ev.condition_estimate * EPS > COND_LIMIT {
        return Err(Error::PrecisionLoss(ev.condition_estimate));
    }
    Ok(ev)
}

/// Exact (a)_n / (b)_n for binary floating-point a, b.
pub fn pochhammer_ratio(a: f64, b: f64, n: u32) -> f64 {
    let ra = BigRational::from_float(a).expect("finite a");
    let rb = BigRational::from_float(b).expect("finite b");
    let mut num = BigRational::one();
    let mut den = BigRational::one();
    for k in 0..n {
        let kk = BigRational::from_integer(k.into());
        num *= &ra + &kk;
        den *= &rb + &kk;
    }
    (num / den).to_f64().unwrap_or(f64::NAN)
}

/// n-th z-derivative: ((a)_n/(b)_n) M(a+n, b+n, z).
pub fn kummer_m_deriv(a: f64, b: f64, z: f64, n: u32) -> Result<KummerEval> {
    kummer_m_deriv_with(a, b, z, n, Precision::global())
}

pub fn kummer_m_deriv_with(a: f64, b: f64, z: f64, n: u32, prec: Precision) -> Result<KummerEval> {
    check_b(b)?;
    if n == 0 {
        return kummer_m_with(a, b, z, prec);
    }
    let factor = pochhammer_ratio(a, b, n);
    let inner = kummer_m_with(a + n as f64, b + n as f64, z, prec)?;
    Ok(KummerEval {
        value: inner.value * factor,
        abs_error_estimate: inner.abs_error_estimate * factor.abs(),
        terms_used: inner.terms_used,
        condition_estimate: inner.condition_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: f64, y: f64, tol: f64) -> bool {
        (x - y).abs() <= tol * y.abs().max(1.0)
    }

    #[test]
    fn root_of_terminating_polynomial() {
        // M(-1, 1/2, 1/2) = 1 - z/b = 0
        let ev = kummer_m(-1.0, 0.5, 0.5).unwrap();
        assert_eq!(ev.value.re, 0.0);
        assert!(ev.abs_error_estimate <= 1e-30);
        assert!(kummer_m_with(-1.0, 0.5, 0.5, Precision::Double).is_err());
        // M(1/2, -1/2, z) = e^z (1 - 2z), a non-terminating series with a root at z = 1/2
        let ev = kummer_m(0.5, -0.5, 0.5).unwrap();
        assert!(ev.value.re.abs() <= ev.abs_error_estimate && ev.abs_error_estimate <= 1e-30);
    }

    #[test]
    fn zero_a_is_one() {
        let ev = kummer_m(0.0, 2.5, 7.3).unwrap();
        assert_eq!(ev.value.re, 1.0);
        assert_eq!(ev.terms_used, 1);
    }

    #[test]
    fn equal_parameters_give_exponential() {
        let ev = kummer_m(1.5, 1.5, 1.0).unwrap();
        assert!(close(ev.value.re, std::f64::consts::E, 1e-15));
    }

    #[test]
    fn one_two_one() {
        // oracle: 25 terms of sum 1/(n+1)!
        let mut oracle = 0.0;
        let mut fact = 1.0;
        for n in 0..25 {
            fact *= (n + 1) as f64;
            oracle += 1.0 / fact;
        }
        let ev = kummer_m(1.0, 2.0, 1.0).unwrap();
        assert!(close(ev.value.re, oracle, 1e-15));
        assert!(close(ev.value.re, std::f64::consts::E - 1.0, 1e-15));
        assert!(ev.abs_error_estimate < 1e-14);
        assert!(ev.condition_estimate >= 1.0);
    }

    #[test]
    fn derivatives() {
        let d0 = kummer_m_deriv(0.75, 2.5, 1.2, 0).unwrap();
        assert_eq!(d0, kummer_m(0.75, 2.5, 1.2).unwrap());
        assert_eq!(kummer_m_deriv(1.0, 2.0, 0.0, 1).unwrap().value.re, 0.5);
        for z in [0.0, 0.3, 4.0, 17.0] {
            let d = kummer_m_deriv(-1.0, 1.5, z, 1).unwrap();
            assert!(close(d.value.re, -2.0 / 3.0, 1e-15), "{z}");
        }
    }

    #[test]
    fn invalid_b_rejected() {
        assert_eq!(kummer_m(1.0, 0.0, 1.0).unwrap_err(), Error::InvalidB(0.0));
        assert_eq!(kummer_m(1.0, -3.0, 1.0).unwrap_err(), Error::InvalidB(-3.0));
    }

    #[test]
    fn polynomial_terminates() {
        for a in 0..=12 {
            let a = -(a as f64);
            let ev = kummer_m(a, 0.5, 9.0).unwrap();
            assert!(ev.terms_used as f64 <= 1.0 - a);
            assert!(ev.abs_error_estimate.is_finite());
        }
    }

    #[test]
    fn cancellation_falls_back_to_double_double() {
        // M(-30.5, 1.5, 60): alternating prefix with severe cancellation.
        // Reference from a 50-digit evaluation.
        let reference = kummer_reference(-30.5, 1.5, 60.0);
        let auto = kummer_m(-30.5, 1.5, 60.0).unwrap();
        assert!(auto.condition_estimate > 1e8);
        assert!(close(auto.value.re, reference, 1e-9), "{} vs {}", auto.value.re, reference);
        assert!(matches!(kummer_m_with(-30.5, 1.5, 60.0, Precision::Double), Err(Error::PrecisionLoss(_))));
    }

    /// Exact-rational partial sums, far past convergence.
    fn kummer_reference(a: f64, b: f64, z: f64) -> f64 {
        let ra = BigRational::from_float(a).unwrap();
        let rb = BigRational::from_float(b).unwrap();
        let rz = BigRational::from_float(z).unwrap();
        let mut term = BigRational::one();
        let mut sum = BigRational::one();
        for n in 0..400u32 {
            let nn = BigRational::from_integer(n.into());
            term = term * (&ra + &nn) * &rz / ((&rb + &nn) * (&nn + BigRational::one()));
            sum += &term;
        }
        sum.to_f64().unwrap()
    }
}
