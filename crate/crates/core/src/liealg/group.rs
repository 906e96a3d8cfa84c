use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fd::richardson;
use crate::ktypes::{Picture, PictureFunction};
use crate::weyl::{heisenberg_generator_at, sl2_action_operator, GaussRat, Param, ParamValues, WeylOperator};

/// One-parameter subgroups with an explicit double-cover section.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum Subgroup {
    /// [[1, tau], [0, 1]]
    N,
    /// diag(e^tau, e^-tau)
    A,
    /// [[1, 0], [tau, 1]]
    NBar,
    /// [[cos tau, sin tau], [-sin tau, cos tau]]
    K,
    /// tau (u, v, w) in the Heisenberg group.
    Heis { u: f64, v: f64, w: f64 },
}

/// The algebra element whose operator matches d/dtau of Heis(tau u, tau v, tau w) is (u, -v, -w).
pub const HEIS_DERIVATIVE_MAP: &str = "(u, v, w) -> (u, -v, -w)";

impl Subgroup {
    pub fn name(&self) -> String {
        match self {
            Subgroup::N => "N".into(),
            Subgroup::A => "A".into(),
            Subgroup::NBar => "NBar".into(),
            Subgroup::K => "K".into(),
            Subgroup::Heis { u, v, w } => format!("Heis({u}, {v}, {w})"),
        }
    }

    /// (a, b, c, d) of the SL2 element at tau, or None for the Heisenberg line.
    fn matrix(&self, tau: f64) -> Option<(f64, f64, f64, f64)> {
        match self {
            Subgroup::N => Some((1.0, tau, 0.0, 1.0)),
            Subgroup::A => Some((tau.exp(), 0.0, 0.0, (-tau).exp())),
            Subgroup::NBar => Some((1.0, 0.0, tau, 1.0)),
            Subgroup::K => Some((tau.cos(), tau.sin(), -tau.sin(), tau.cos())),
            Subgroup::Heis { .. } => None,
        }
    }

    /// The non-compact-picture operator matching d/dtau at tau = 0.
    pub fn generator(&self) -> WeylOperator {
        let g = |n: i64| GaussRat::int(n);
        let exact = |v: f64| GaussRat::real(BigRational::from_float(v).unwrap_or_default());
        match self {
            Subgroup::N => sl2_action_operator(g(0), g(1), g(0)),
            Subgroup::A => sl2_action_operator(g(1), g(0), g(0)),
            Subgroup::NBar => sl2_action_operator(g(0), g(0), g(1)),
            Subgroup::K => sl2_action_operator(g(0), g(1), g(-1)),
            Subgroup::Heis { u, v, w } => heisenberg_generator_at(exact(*u), exact(-*v), exact(-*w)),
        }
    }

    /// The group element acting on f, as a new non-compact-picture function.
    pub fn act(&self, tau: f64, f: &PictureFunction) -> Result<PictureFunction> {
        if f.picture != Picture::NonCompact {
            return Err(Error::Domain("group actions are defined in the noncompact picture".into()));
        }
        let r = f.params.r_f64();
        let s = f.params.s_c64();
        let inner = f.clone();
        let me = *self;
        Ok(PictureFunction::closure(Picture::NonCompact, f.params.clone(), move |t, x| match me {
            Subgroup::Heis { u, v, w } => {
                let (u, v, w) = (tau * u, tau * v, tau * w);
                let phase = (-s * (u * v - 2.0 * v * x + t * v * v + w)).exp();
                Ok(phase * inner.eval(t, x - u - t * v)?)
            }
            _ => {
                let (a, b, c, d) = me.matrix(tau).expect("sl2 subgroup");
                let base = a - c * t;
                if base <= 0.0 {
                    return Err(Error::Chart(base));
                }
                // (a-ct)^{r-q/2} times the boundary value sqrt(a-ct)^q of the section
                let scalar = base.powf(r) * (-s * c * x * x / base).exp();
                Ok(scalar * inner.eval((d * t - b) / base, x / base)?)
            }
        }))
    }
}

/// ((g, eps).f)(t, x) for the subgroup element at parameter tau.
pub fn group_action(sub: Subgroup, tau: f64, f: &PictureFunction, t: f64, x: f64) -> Result<Complex64> {
    sub.act(tau, f)?.eval(t, x)
}

/// The section eps(z) of the subgroup element at the fixed probe z = i.
pub fn epsilon_probe(sub: Subgroup, tau: f64) -> Complex64 {
    let z = Complex64::new(0.0, 1.0);
    match sub {
        Subgroup::N | Subgroup::Heis { .. } => Complex64::new(1.0, 0.0),
        Subgroup::A => Complex64::new((-tau / 2.0).exp(), 0.0),
        Subgroup::NBar => (tau * z + 1.0).sqrt(),
        Subgroup::K => (tau.cos() - z * tau.sin()).sqrt(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeCheck {
    /// Richardson-extrapolated d/dtau at tau = 0.
    pub derivative: Complex64,
    /// Extrapolated finite-difference application of the algebra operator.
    pub operator: Complex64,
    pub scale: f64,
    pub epsilon_at_i: Complex64,
}

impl DerivativeCheck {
    pub fn residual(&self) -> Complex64 {
        self.derivative - self.operator
    }

    pub fn relative(&self) -> f64 {
        self.residual().norm() / self.scale
    }
}

fn param_values(f: &PictureFunction) -> ParamValues {
    ParamValues::default()
        .with(Param::R, Complex64::new(f.params.r_f64(), 0.0))
        .with(Param::S, f.params.s_c64())
}

/// Central difference in tau of the action minus the matching operator applied to f.
pub fn derivative_check(sub: Subgroup, f: &PictureFunction, t: f64, x: f64, delta: f64) -> Result<DerivativeCheck> {
    let central = |d: f64| -> Result<Complex64> {
        Ok((group_action(sub, d, f, t, x)? - group_action(sub, -d, f, t, x)?) / (2.0 * d))
    };
    let derivative = richardson(central(delta)?, central(delta / 2.0)?);
    let op = sub.generator();
    let values = param_values(f);
    let eval = |a: f64, b: f64| f.eval(a, b);
    let operator = richardson(
        op.apply_numeric(&eval, t, x, delta, &values)?,
        op.apply_numeric(&eval, t, x, delta / 2.0, &values)?,
    );
    let scale = 1.0f64.max(f.eval(t, x)?.norm()).max(derivative.norm());
    Ok(DerivativeCheck { derivative, operator, scale, epsilon_at_i: epsilon_probe(sub, delta) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ktypes::CharacterParams;

    fn gaussian() -> PictureFunction {
        PictureFunction::closure(Picture::NonCompact, CharacterParams::schrodinger(1), |t, x| {
            Ok(Complex64::new(-(t - 0.2) * (t - 0.2) - 0.5 * x * x, 0.3 * x).exp())
        })
    }

    #[test]
    fn heis_translation_and_center() {
        let f = gaussian();
        let (t, x) = (0.3, 0.7);
        let a = group_action(Subgroup::Heis { u: 1.0, v: 0.0, w: 0.0 }, 1.0, &f, t, x).unwrap();
        assert!((a - f.eval(t, x - 1.0).unwrap()).norm() < 1e-15);
        let b = group_action(Subgroup::Heis { u: 0.0, v: 0.0, w: 1.0 }, 0.8, &f, t, x).unwrap();
        let expect = (-Complex64::new(0.0, 0.5) * 0.8).exp() * f.eval(t, x).unwrap();
        assert!((b - expect).norm() < 1e-15);
    }

    #[test]
    fn n_translates_time() {
        let f = gaussian();
        let a = group_action(Subgroup::N, 0.4, &f, 0.3, 0.7).unwrap();
        assert!((a - f.eval(-0.1, 0.7).unwrap()).norm() < 1e-15);
    }

    #[test]
    fn derivatives_match_generators() {
        let f = gaussian();
        for sub in [
            Subgroup::N,
            Subgroup::A,
            Subgroup::NBar,
            Subgroup::K,
            Subgroup::Heis { u: 1.0, v: 0.0, w: 0.0 },
            Subgroup::Heis { u: 0.0, v: 1.0, w: 0.0 },
            Subgroup::Heis { u: 0.0, v: 0.0, w: 1.0 },
        ] {
            let c = derivative_check(sub, &f, 0.3, 0.7, 1e-3).unwrap();
            assert!(c.relative() <= 1e-6, "{}: {c:?}", sub.name());
        }
    }

    #[test]
    fn one_parameter_group_law() {
        let f = gaussian();
        for sub in [Subgroup::N, Subgroup::A, Subgroup::NBar, Subgroup::K, Subgroup::Heis { u: 0.5, v: 0.7, w: -0.3 }] {
            let (t1, t2) = (0.13, 0.21);
            let composed = sub.act(t1, &sub.act(t2, &f).unwrap()).unwrap();
            let direct = sub.act(t1 + t2, &f).unwrap();
            let (a, b) = (composed.eval(0.3, 0.7).unwrap(), direct.eval(0.3, 0.7).unwrap());
            assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0), "{}: {a} vs {b}", sub.name());
        }
    }

    #[test]
    fn chart_violation() {
        let f = gaussian();
        assert!(matches!(group_action(Subgroup::NBar, 2.0, &f, 1.0, 0.0), Err(Error::Chart(_))));
    }

    #[test]
    fn epsilon_values() {
        assert_eq!(epsilon_probe(Subgroup::N, 0.5), Complex64::new(1.0, 0.0));
        let e = epsilon_probe(Subgroup::K, 0.3);
        let sq = e * e;
        assert!((sq - Complex64::new(0.3f64.cos(), -0.3f64.sin())).norm() < 1e-15);
    }
}
