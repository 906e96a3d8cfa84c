//! Time-dependent potentials g2 x^2 + g1 x + g0 + lambda/x^2: the chi-system, the generators L_j,
//! the change of variables with its multiplier, and PDE residual certification.

mod chi;
mod generators;
mod transform;

use std::fmt;
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub use chi::{
    chi_identities_residual, solve_chi, solve_chi_with, ChiPoint, ChiSystem, IdentityResiduals, StepControl,
    WronskianConvention,
};
pub use generators::{apply_l, bracket_residual_l, generators_l, BracketReport, LCoefficients, RelationResidual};
pub use transform::{
    gamma_map, multiplier, td_residual, td_residual_grid, transform_closure, transform_solution, MultiplierForm,
    ProfilePoint, TdReport, TdVerdict,
};

/// Polynomial in t, constant coefficient first.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Poly(pub Vec<f64>);

impl Poly {
    pub fn eval(&self, t: f64) -> f64 {
        self.0.iter().rev().fold(0.0, |acc, c| acc * t + c)
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|c| *c == 0.0)
    }
}

fn parse_real(s: &str) -> Option<f64> {
    if let Some((n, d)) = s.split_once('/') {
        return Some(n.trim().parse::<f64>().ok()? / d.trim().parse::<f64>().ok()?);
    }
    s.parse().ok()
}

impl FromStr for Poly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        match s {
            "" | "zero" => return Ok(Poly(vec![])),
            "harmonic" => return Ok(Poly(vec![0.5])),
            _ => {}
        }
        if let Some(inner) = s.strip_prefix("constant(").and_then(|r| r.strip_suffix(')')) {
            let c = parse_real(inner.trim()).ok_or_else(|| Error::Potential(format!("bad constant '{inner}'")))?;
            return Ok(Poly(vec![c]));
        }
        let coeffs = s
            .split(',')
            .map(|c| parse_real(c.trim()).filter(|v| v.is_finite()))
            .collect::<Option<Vec<f64>>>()
            .ok_or_else(|| Error::Potential(format!("bad polynomial '{s}'")))?;
        Ok(Poly(coeffs))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("zero");
        }
        let parts: Vec<String> = self.0.iter().map(|c| format!("{c:?}")).collect();
        f.write_str(&parts.join(","))
    }
}

fn ser_display<T: fmt::Display, S: Serializer>(v: &T, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&v.to_string())
}

/// V(t,x) = g2 x^2 + g1 x + g0 + lambda/x^2 on [-T, T].
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PotentialSpec {
    pub g2: Poly,
    pub g1: Poly,
    pub g0: Poly,
    #[serde(serialize_with = "ser_display")]
    pub lambda: BigRational,
    #[serde(rename = "T")]
    pub t_max: f64,
}

impl PotentialSpec {
    pub fn new(g2: Poly, g1: Poly, g0: Poly, lambda: BigRational, t_max: f64) -> Result<Self> {
        if lambda.is_negative() {
            return Err(Error::Potential(format!("lambda = {lambda} must be >= 0")));
        }
        if !lambda.is_zero() && !g1.is_zero() {
            return Err(Error::Potential(format!(
                "lambda * g1 must vanish identically (lambda = {lambda}, g1 = {g1})"
            )));
        }
        if !(t_max > 0.0 && t_max.is_finite()) {
            return Err(Error::Potential(format!("T = {t_max} must be positive")));
        }
        Ok(PotentialSpec { g2, g1, g0, lambda, t_max })
    }

    /// Named presets: zero, harmonic, linear (g1 = 1), linear-t (g1 = t).
    pub fn preset(name: &str) -> Result<Self> {
        let z = || Poly(vec![]);
        let l0 = BigRational::zero();
        match name {
            "zero" => PotentialSpec::new(z(), z(), z(), l0, 2.0),
            "harmonic" => PotentialSpec::new(Poly(vec![0.5]), z(), z(), l0, 1.2),
            "linear" => PotentialSpec::new(z(), Poly(vec![1.0]), z(), l0, 1.0),
            "linear-t" => PotentialSpec::new(z(), Poly(vec![0.0, 1.0]), z(), l0, 1.0),
            _ => Err(Error::Potential(format!("unknown preset '{name}'"))),
        }
    }

    pub fn with_lambda(mut self, lambda: BigRational) -> Result<Self> {
        self.lambda = lambda;
        PotentialSpec::new(self.g2, self.g1, self.g0, self.lambda, self.t_max)
    }

    pub fn lambda_f64(&self) -> f64 {
        self.lambda.to_f64().unwrap_or(f64::NAN)
    }

    pub fn potential(&self, t: f64, x: f64) -> f64 {
        let mut v = self.g2.eval(t) * x * x + self.g1.eval(t) * x + self.g0.eval(t);
        if !self.lambda.is_zero() {
            v += self.lambda_f64() / (x * x);
        }
        v
    }
}

impl FromStr for PotentialSpec {
    type Err = Error;

    /// `g2=<poly>; g1=<poly>; g0=<poly>; lambda=<rational>; T=<real>` or a preset name.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if !s.contains('=') {
            return PotentialSpec::preset(s);
        }
        let (mut g2, mut g1, mut g0) = (Poly(vec![]), Poly(vec![]), Poly(vec![]));
        let mut lambda = BigRational::zero();
        let mut t_max = 1.0;
        for field in s.split(';').map(str::trim).filter(|f| !f.is_empty()) {
            let (k, v) = field
                .split_once('=')
                .ok_or_else(|| Error::Potential(format!("field '{field}' is not key=value")))?;
            let v = v.trim();
            match k.trim() {
                "g2" => g2 = v.parse()?,
                "g1" => g1 = v.parse()?,
                "g0" => g0 = v.parse()?,
                "lambda" => {
                    lambda = v.parse().map_err(|_| Error::Potential(format!("lambda '{v}' is not a rational")))?
                }
                "T" => t_max = parse_real(v).ok_or_else(|| Error::Potential(format!("bad T '{v}'")))?,
                other => return Err(Error::Potential(format!("unknown field '{other}'"))),
            }
        }
        PotentialSpec::new(g2, g1, g0, lambda, t_max)
    }
}

impl fmt::Display for PotentialSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g2={}; g1={}; g0={}; lambda={}; T={:?}", self.g2, self.g1, self.g0, self.lambda, self.t_max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print() {
        let p: PotentialSpec = "g2=0.5; g1=zero; g0=1,2; lambda=3/2; T=1.1".parse().unwrap();
        assert_eq!(p.g2.eval(3.0), 0.5);
        assert_eq!(p.g0.eval(2.0), 5.0);
        assert_eq!(p.lambda, BigRational::new(3.into(), 2.into()));
        let again: PotentialSpec = p.to_string().parse().unwrap();
        assert_eq!(again, p);
        let h: PotentialSpec = "harmonic".parse().unwrap();
        assert_eq!(h.g2, Poly(vec![0.5]));
        let c: PotentialSpec = "g2=constant(0.25); T=1".parse().unwrap();
        assert_eq!(c.g2, Poly(vec![0.25]));
    }

    #[test]
    fn rejects_lambda_with_linear_term() {
        let err = "g1=1; lambda=1; T=1".parse::<PotentialSpec>().unwrap_err();
        assert!(err.to_string().contains("lambda * g1"));
        assert!("g1=t".parse::<PotentialSpec>().is_err());
        assert!("lambda=-1".parse::<PotentialSpec>().is_err());
        assert!("nope".parse::<PotentialSpec>().is_err());
    }
}
