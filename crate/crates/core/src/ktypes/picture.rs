use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::KTypeIndex;
use crate::error::{Error, Result};
use crate::grid::GridFunction;
use crate::hyperfun::psi;
use crate::weyl::GaussRat;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Picture {
    /// Coordinates (theta, y).
    Compact,
    /// Coordinates (t, x).
    NonCompact,
}

pub type Evaluator = Arc<dyn Fn(f64, f64) -> Result<Complex64> + Send + Sync>;

#[derive(Clone)]
pub enum Representation {
    /// Linear combination of closed-form K-types (compact picture).
    KTypes(Vec<(Complex64, KTypeIndex)>),
    Grid(GridFunction),
    Closure(Evaluator),
}

impl fmt::Debug for Representation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Representation::KTypes(c) => f.debug_tuple("KTypes").field(c).finish(),
            Representation::Grid(g) => f.debug_tuple("Grid").field(&g.spec).finish(),
            Representation::Closure(_) => f.write_str("Closure"),
        }
    }
}

/// Character data (q, r, s).
#[derive(Clone, Debug, PartialEq)]
pub struct CharacterParams {
    pub q: u8,
    pub r: BigRational,
    pub s: GaussRat,
}

impl CharacterParams {
    /// The Schrödinger values r = -1/2, s = i/2.
    pub fn schrodinger(q: u8) -> Self {
        CharacterParams {
            q: q % 4,
            r: BigRational::new((-1).into(), 2.into()),
            s: GaussRat::new(BigRational::from_integer(0.into()), BigRational::new(1.into(), 2.into())),
        }
    }

    pub fn r_f64(&self) -> f64 {
        self.r.to_f64().unwrap_or(f64::NAN)
    }

    pub fn s_c64(&self) -> Complex64 {
        self.s.to_complex()
    }
}

#[derive(Clone, Debug)]
pub struct PictureFunction {
    pub picture: Picture,
    pub repr: Representation,
    pub params: CharacterParams,
}

impl PictureFunction {
    /// A single closed-form K-type in the compact picture at the Schrödinger parameters.
    pub fn ktype(index: KTypeIndex) -> Self {
        PictureFunction {
            picture: Picture::Compact,
            repr: Representation::KTypes(vec![(Complex64::new(1.0, 0.0), index)]),
            params: CharacterParams::schrodinger(index.q),
        }
    }

    pub fn closure<F>(picture: Picture, params: CharacterParams, f: F) -> Self
    where
        F: Fn(f64, f64) -> Result<Complex64> + Send + Sync + 'static,
    {
        PictureFunction { picture, repr: Representation::Closure(Arc::new(f)), params }
    }

    pub fn eval(&self, a: f64, b: f64) -> Result<Complex64> {
        match &self.repr {
            Representation::KTypes(terms) => {
                let mut acc = Complex64::new(0.0, 0.0);
                for (c, k) in terms {
                    acc += c * psi(k, a, b)?;
                }
                Ok(acc)
            }
            Representation::Grid(g) => g.eval(a, b),
            Representation::Closure(f) => f(a, b),
        }
    }

    pub fn evaluator(&self) -> Evaluator {
        let me = self.clone();
        Arc::new(move |a, b| me.eval(a, b))
    }
}

/// f(t,x) = (1+t^2)^{r/2} e^{s t x^2/(1+t^2)} F(arctan t, x (1+t^2)^{-1/2}).
pub fn to_noncompact(big_f: &PictureFunction) -> Result<PictureFunction> {
    if big_f.picture != Picture::Compact {
        return Err(Error::Domain("to_noncompact expects a compact-picture function".into()));
    }
    let r = big_f.params.r_f64();
    let s = big_f.params.s_c64();
    let inner = big_f.clone();
    Ok(PictureFunction::closure(Picture::NonCompact, big_f.params.clone(), move |t, x| {
        let w = 1.0 + t * t;
        let pre = w.powf(r / 2.0) * (s * (t * x * x / w)).exp();
        Ok(pre * inner.eval(t.atan(), x / w.sqrt())?)
    }))
}

/// Reduces theta to [-pi/2, pi/2) and returns (theta', j).
fn reduce_theta(theta: f64) -> (f64, i64) {
    let j = ((theta + FRAC_PI_2) / PI).floor() as i64;
    (theta - j as f64 * PI, j)
}

fn i_pow(k: i64) -> Complex64 {
    match k.rem_euclid(4) {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// F(theta,y) = (cos theta)^r e^{-s y^2 tan theta} f(tan theta, y sec theta) on the strip,
/// extended by F(theta + j pi, y) = i^{-jq} F(theta, (-1)^j y).
pub fn to_compact(f: &PictureFunction) -> Result<PictureFunction> {
    if f.picture != Picture::NonCompact {
        return Err(Error::Domain("to_compact expects a noncompact-picture function".into()));
    }
    let r = f.params.r_f64();
    let s = f.params.s_c64();
    let q = f.params.q as i64;
    let inner = f.clone();
    Ok(PictureFunction::closure(Picture::Compact, f.params.clone(), move |theta, y| {
        let (th, j) = reduce_theta(theta);
        let c = th.cos();
        if th <= -FRAC_PI_2 || c <= 1e-300 {
            return Err(Error::Domain(format!("theta = {theta} is an odd multiple of pi/2")));
        }
        let y = if j.rem_euclid(2) == 0 { y } else { -y };
        let tan = th.tan();
        let direct = c.powf(r) * (-s * (y * y * tan)).exp() * inner.eval(tan, y / c)?;
        Ok(i_pow(-j * q) * direct)
    }))
}

/// F(theta + j pi, (-1)^j y) - i^{-jq} F(theta, y).
pub fn parity_residual(big_f: &PictureFunction, theta: f64, y: f64, j: i64) -> Result<Complex64> {
    let sign = if j.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
    let shifted = big_f.eval(theta + j as f64 * PI, sign * y)?;
    Ok(shifted - i_pow(-j * big_f.params.q as i64) * big_f.eval(theta, y)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(q: u8, l: u32, m: i64) -> KTypeIndex {
        KTypeIndex::new(q, l, m).unwrap()
    }

    fn constant_compact(r: i64, q: u8) -> PictureFunction {
        let mut p = CharacterParams::schrodinger(q);
        p.r = BigRational::from_integer(r.into());
        PictureFunction::closure(Picture::Compact, p, |_, _| Ok(Complex64::new(1.0, 0.0)))
    }

    #[test]
    fn noncompact_of_constant() {
        let f = to_noncompact(&constant_compact(0, 0)).unwrap();
        let (t, x) = (0.7, 1.3);
        let expect = (Complex64::new(0.0, 0.5) * (t * x * x / (1.0 + t * t))).exp();
        assert!((f.eval(t, x).unwrap() - expect).norm() < 1e-15);
    }

    #[test]
    fn t_zero_slice_is_identity() {
        let big = PictureFunction::ktype(k(1, 2, 5));
        let f = to_noncompact(&big).unwrap();
        for y in [0.3, 1.0, 2.2] {
            assert!((f.eval(0.0, y).unwrap() - big.eval(0.0, y).unwrap()).norm() < 1e-15);
        }
    }

    #[test]
    fn value_at_one_one() {
        // (1+1)^{-1/4} e^{i/4} Psi(pi/4, 2^{-1/2})
        let big = PictureFunction::ktype(k(1, 2, 5));
        let f = to_noncompact(&big).unwrap();
        let expect = 2f64.powf(-0.25)
            * Complex64::new(0.0, 0.25).exp()
            * big.eval(PI / 4.0, 2f64.powf(-0.5)).unwrap();
        assert!((f.eval(1.0, 1.0).unwrap() - expect).norm() < 1e-15);
    }

    #[test]
    fn round_trip() {
        let big = PictureFunction::ktype(k(3, 2, 7));
        let back = to_compact(&to_noncompact(&big).unwrap()).unwrap();
        for (th, y) in [(0.3, 1.1), (-1.2, 0.4), (2.0, 0.8), (-4.0, 1.7)] {
            let a = back.eval(th, y).unwrap();
            let b = big.eval(th, y).unwrap();
            assert!((a - b).norm() <= 1e-12 * b.norm().max(1e-300), "{th} {y}: {a} vs {b}");
        }
    }

    #[test]
    fn compact_of_constant() {
        let mut p = CharacterParams::schrodinger(0);
        p.r = BigRational::from_integer(0.into());
        let one = PictureFunction::closure(Picture::NonCompact, p, |_, _| Ok(Complex64::new(1.0, 0.0)));
        let big = to_compact(&one).unwrap();
        let (th, y): (f64, f64) = (0.4, 1.2);
        let expect = (-Complex64::new(0.0, 0.5) * (y * y * th.tan())).exp();
        assert!((big.eval(th, y).unwrap() - expect).norm() < 1e-15);
        assert!(big.eval(FRAC_PI_2, 1.0).is_err());
    }

    #[test]
    fn parity_of_closed_forms() {
        let f = PictureFunction::ktype(k(1, 2, 5));
        assert_eq!(parity_residual(&f, 0.3, 0.9, 0).unwrap(), Complex64::new(0.0, 0.0));
        assert!(parity_residual(&f, 0.3, 0.9, 2).unwrap().norm() < 1e-12);
        assert!(parity_residual(&f, 0.3, 0.9, 1).unwrap().norm() < 1e-12);
        let g = PictureFunction::ktype(k(0, 2, 4));
        assert!(parity_residual(&g, -0.6, 1.4, 1).unwrap().norm() < 1e-12);
    }

    #[test]
    fn parity_extension_q1() {
        // F(theta + pi, -y) = i^{-1} F(theta, y) on a transported function
        let big = PictureFunction::ktype(k(1, 1, 3));
        let back = to_compact(&to_noncompact(&big).unwrap()).unwrap();
        let r = parity_residual(&back, 0.2, 0.7, 1).unwrap();
        assert!(r.norm() < 1e-12);
    }
}
