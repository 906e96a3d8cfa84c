use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use super::gauss::GaussRat;

/// The commuting indeterminates that may appear in operator coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    R,
    S,
    Lambda,
    U,
    V,
    W,
}

impl Param {
    pub const ALL: [Param; 6] = [Param::R, Param::S, Param::Lambda, Param::U, Param::V, Param::W];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::R => "r",
            Param::S => "s",
            Param::Lambda => "lambda",
            Param::U => "u",
            Param::V => "v",
            Param::W => "w",
        }
    }

    pub fn from_name(s: &str) -> Option<Param> {
        Some(match s {
            "r" => Param::R,
            "s" => Param::S,
            "lambda" | "λ" => Param::Lambda,
            "u" => Param::U,
            "v" => Param::V,
            "w" => Param::W,
            _ => return None,
        })
    }
}

pub type ParamExps = [u32; 6];

/// Polynomial in the parameters with Gaussian-rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct ParamPoly {
    terms: BTreeMap<ParamExps, GaussRat>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly { terms: BTreeMap::new() }
    }

    pub fn constant(c: GaussRat) -> Self {
        let mut p = Self::zero();
        p.add_term([0; 6], c);
        p
    }

    pub fn int(n: i64) -> Self {
        Self::constant(GaussRat::int(n))
    }

    pub fn one() -> Self {
        Self::int(1)
    }

    pub fn param(p: Param) -> Self {
        let mut e = [0; 6];
        e[p.index()] = 1;
        let mut out = Self::zero();
        out.add_term(e, GaussRat::one());
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ParamExps, &GaussRat)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Returns the constant value if the polynomial has no parameter dependence.
    pub fn as_constant(&self) -> Option<GaussRat> {
        match self.terms.len() {
            0 => Some(GaussRat::zero()),
            1 => self.terms.get(&[0; 6]).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, e: ParamExps, c: GaussRat) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(GaussRat::zero);
        *entry = &*entry + &c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, o: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (e, c) in &o.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, o: &ParamPoly) -> ParamPoly {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }

    pub fn mul(&self, o: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                let mut e = [0; 6];
                for k in 0..6 {
                    e[k] = e1[k] + e2[k];
                }
                out.add_term(e, c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &GaussRat) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (e, v) in &self.terms {
            out.add_term(*e, v * c);
        }
        out
    }

    pub fn pow(&self, n: u32) -> ParamPoly {
        let mut acc = ParamPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Replaces `p` by the polynomial `value`.
    pub fn substitute(&self, p: Param, value: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (e, c) in &self.terms {
            let k = e[p.index()];
            let mut rest = *e;
            rest[p.index()] = 0;
            let mut base = ParamPoly::zero();
            base.add_term(rest, c.clone());
            out = out.add(&base.mul(&value.pow(k)));
        }
        out
    }

    pub fn eval(&self, values: &ParamValues) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut term = c.to_complex();
            for p in Param::ALL {
                let k = e[p.index()];
                if k > 0 {
                    term *= values.get(p).powu(k);
                }
            }
            acc += term;
        }
        acc
    }
}

/// Numeric values for the parameters, used when an operator is applied to sampled functions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ParamValues {
    pub vals: [Complex64; 6],
}

impl Default for ParamValues {
    fn default() -> Self {
        ParamValues { vals: [Complex64::new(0.0, 0.0); 6] }
    }
}

impl ParamValues {
    pub fn get(&self, p: Param) -> Complex64 {
        self.vals[p.index()]
    }

    pub fn with(mut self, p: Param, v: Complex64) -> Self {
        self.vals[p.index()] = v;
        self
    }

    /// r = -1/2, s = i/2.
    pub fn schrodinger() -> Self {
        ParamValues::default()
            .with(Param::R, Complex64::new(-0.5, 0.0))
            .with(Param::S, Complex64::new(0.0, 0.5))
    }
}

/// Writes `c*r^2*s` style products; `coeff_needed` controls whether a unit coefficient is printed.
pub(crate) fn write_param_monomial(
    f: &mut fmt::Formatter<'_>,
    e: &ParamExps,
    first: &mut bool,
) -> fmt::Result {
    for p in Param::ALL {
        let k = e[p.index()];
        if k == 0 {
            continue;
        }
        if !*first {
            write!(f, "*")?;
        }
        *first = false;
        write!(f, "{}", p.name())?;
        if k > 1 {
            write!(f, "^{k}")?;
        }
    }
    Ok(())
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut lead = true;
        for (e, c) in &self.terms {
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
            if !mag.is_one() || *e == [0; 6] {
                write!(f, "{mag}")?;
                first = false;
            }
            write_param_monomial(f, e, &mut first)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_removes_terms() {
        let r = ParamPoly::param(Param::R);
        assert!(r.sub(&r).is_zero());
    }

    #[test]
    fn substitution_specializes() {
        let r = ParamPoly::param(Param::R);
        let p = r.mul(&r.add(&ParamPoly::int(2)));
        let at = p.substitute(Param::R, &ParamPoly::constant(GaussRat::frac(-1, 2)));
        assert_eq!(at, ParamPoly::constant(GaussRat::frac(-3, 4)));
    }

    #[test]
    fn display_is_readable() {
        let p = ParamPoly::param(Param::R).scale(&GaussRat::int(-2)).add(&ParamPoly::int(1));
        assert_eq!(p.to_string(), "1 - 2*r");
    }
}
