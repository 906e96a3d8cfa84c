use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::gauss::GaussRat;
use super::param::{write_param_monomial, Param, ParamPoly, ParamValues};
use crate::error::{Error, Result};
use crate::fd;

/// `t^t x^x dt^dt dx^dx`, derivatives always to the right.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mono {
    pub t: u32,
    pub x: i32,
    pub dt: u32,
    pub dx: u32,
}

impl Mono {
    pub const ONE: Mono = Mono { t: 0, x: 0, dt: 0, dx: 0 };

    pub fn new(t: u32, x: i32, dt: u32, dx: u32) -> Self {
        Mono { t, x, dt, dx }
    }
}

/// Normal-ordered differential operator in (t, x) with parameter-polynomial coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct WeylOperator {
    terms: BTreeMap<Mono, ParamPoly>,
}

fn falling(e: i64, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k as i64 {
        acc *= BigInt::from(e - j);
    }
    acc
}

fn binom(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::one();
    for j in 0..k {
        acc = acc * BigInt::from(n - j) / BigInt::from(j + 1);
    }
    acc
}

impl WeylOperator {
    pub fn zero() -> Self {
        WeylOperator { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(Mono::ONE, ParamPoly::one())
    }

    pub fn monomial(m: Mono, c: ParamPoly) -> Self {
        let mut op = Self::zero();
        op.add_term(m, c);
        op
    }

    pub fn constant(c: ParamPoly) -> Self {
        Self::monomial(Mono::ONE, c)
    }

    pub fn scalar(c: GaussRat) -> Self {
        Self::constant(ParamPoly::constant(c))
    }

    pub fn int(n: i64) -> Self {
        Self::scalar(GaussRat::int(n))
    }

    pub fn param(p: Param) -> Self {
        Self::constant(ParamPoly::param(p))
    }

    pub fn t() -> Self {
        Self::monomial(Mono::new(1, 0, 0, 0), ParamPoly::one())
    }

    pub fn x_pow(k: i32) -> Self {
        Self::monomial(Mono::new(0, k, 0, 0), ParamPoly::one())
    }

    pub fn x() -> Self {
        Self::x_pow(1)
    }

    pub fn dt() -> Self {
        Self::monomial(Mono::new(0, 0, 1, 0), ParamPoly::one())
    }

    pub fn dx() -> Self {
        Self::monomial(Mono::new(0, 0, 0, 1), ParamPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Mono) -> ParamPoly {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, m: Mono, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn add(&self, o: &WeylOperator) -> WeylOperator {
        let mut out = self.clone();
        for (m, c) in &o.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &WeylOperator) -> WeylOperator {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> WeylOperator {
        WeylOperator { terms: self.terms.iter().map(|(m, c)| (*m, c.neg())).collect() }
    }

    pub fn scale(&self, c: &ParamPoly) -> WeylOperator {
        let mut out = WeylOperator::zero();
        for (m, v) in &self.terms {
            out.add_term(*m, v.mul(c));
        }
        out
    }

    pub fn scale_int(&self, n: i64) -> WeylOperator {
        self.scale(&ParamPoly::int(n))
    }

    pub fn scale_rat(&self, c: GaussRat) -> WeylOperator {
        self.scale(&ParamPoly::constant(c))
    }

    /// Normal-ordered product `self * o`.
    pub fn mul(&self, o: &WeylOperator) -> WeylOperator {
        let mut out = WeylOperator::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &o.terms {
                let c = c1.mul(c2);
                // dt^c t^e and dx^d x^f expand independently
                for k in 0..=m1.dt.min(m2.t) {
                    let kt = binom(m1.dt, k) * falling(m2.t as i64, k);
                    let jmax = if m2.x >= 0 { m1.dx.min(m2.x as u32) } else { m1.dx };
                    for j in 0..=jmax {
                        let kx = binom(m1.dx, j) * falling(m2.x as i64, j);
                        let n = &kt * kx;
                        if n.is_zero() {
                            continue;
                        }
                        let m = Mono {
                            t: m1.t + m2.t - k,
                            x: m1.x + m2.x - j as i32,
                            dt: m1.dt - k + m2.dt,
                            dx: m1.dx - j + m2.dx,
                        };
                        let factor = GaussRat::real(BigRational::from_integer(n));
                        out.add_term(m, c.scale(&factor));
                    }
                }
            }
        }
        out
    }

    /// `[A, B] = AB - BA`.
    pub fn bracket(&self, o: &WeylOperator) -> WeylOperator {
        self.mul(o).sub(&o.mul(self))
    }

    pub fn pow(&self, n: u32) -> WeylOperator {
        let mut acc = WeylOperator::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Rebuilds the term map; a no-op on values produced by this type.
    pub fn normalize(&self) -> WeylOperator {
        let mut out = WeylOperator::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.clone());
        }
        out
    }

    pub fn substitute(&self, p: Param, value: &ParamPoly) -> WeylOperator {
        let mut out = WeylOperator::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, c.substitute(p, value));
        }
        out
    }

    /// Specialization to the Schrödinger values r = -1/2, s = i/2.
    pub fn at_schrodinger(&self) -> WeylOperator {
        self.substitute(Param::R, &ParamPoly::constant(GaussRat::frac(-1, 2)))
            .substitute(Param::S, &ParamPoly::constant(GaussRat::new(BigRational::zero(), BigRational::new(1.into(), 2.into()))))
    }

    pub fn max_derivative_order(&self) -> (u32, u32) {
        self.terms.keys().fold((0, 0), |(a, b), m| (a.max(m.dt), b.max(m.dx)))
    }

    /// Applies the operator to a sampled function with central differences of step `h`.
    /// Derivative orders up to 2 in each variable are supported.
    pub fn apply_numeric<F>(&self, f: &F, t: f64, x: f64, h: f64, values: &ParamValues) -> Result<Complex64>
    where
        F: Fn(f64, f64) -> Result<Complex64> + ?Sized,
    {
        let mut acc = Complex64::new(0.0, 0.0);
        for (m, c) in &self.terms {
            if m.dt > 2 || m.dx > 2 {
                return Err(Error::Unsupported(format!(
                    "numeric application supports derivative orders <= 2, found dt^{} dx^{}",
                    m.dt, m.dx
                )));
            }
            let d = fd::mixed_partial(f, t, x, m.dt, m.dx, h)?;
            let coeff = c.eval(values) * t.powi(m.t as i32) * x.powi(m.x);
            acc += coeff * d;
        }
        Ok(acc)
    }
}

impl fmt::Display for WeylOperator {
    /// Canonical printing in the parser's grammar; one summand per parameter monomial.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut lead = true;
        for (m, poly) in &self.terms {
            for (e, c) in poly.terms() {
                let neg = c.leading_negative();
                let mag = if neg { -c } else { c.clone() };
                if lead {
                    if neg {
                        write!(f, "-")?;
                    }
                } else {
                    write!(f, "{}", if neg { " - " } else { " + " })?;
                }
                lead = false;
                let mut first = true;
                if !mag.is_one() {
                    write!(f, "{mag}")?;
                    first = false;
                }
                write_param_monomial(f, e, &mut first)?;
                let mut factor = |f: &mut fmt::Formatter<'_>, name: &str, k: i64| -> fmt::Result {
                    if k == 0 {
                        return Ok(());
                    }
                    if !first {
                        write!(f, "*")?;
                    }
                    first = false;
                    write!(f, "{name}")?;
                    if k != 1 {
                        write!(f, "^{k}")?;
                    }
                    Ok(())
                };
                factor(f, "t", m.t as i64)?;
                factor(f, "x", m.x as i64)?;
                factor(f, "dt", m.dt as i64)?;
                factor(f, "dx", m.dx as i64)?;
                if first {
                    write!(f, "1")?;
                }
            }
        }
        Ok(())
    }
}
