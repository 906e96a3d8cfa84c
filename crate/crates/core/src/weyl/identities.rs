use serde::{Deserialize, Serialize};

use super::gauss::GaussRat;
use super::operator::WeylOperator;
use super::param::{Param, ParamPoly};
use crate::error::{Error, Result};

fn p(param: Param) -> WeylOperator {
    WeylOperator::param(param)
}

/// `(h, e+, e-)` with symbolic r, s:
/// h = -x dx - 2t dt + r, e+ = -dt, e- = t x dx + t^2 dt - (s x^2 + r t).
pub fn sl2_generators() -> (WeylOperator, WeylOperator, WeylOperator) {
    let (t, x, dt, dx) = (WeylOperator::t(), WeylOperator::x(), WeylOperator::dt(), WeylOperator::dx());
    let h = x.mul(&dx).neg().sub(&t.mul(&dt).scale_int(2)).add(&p(Param::R));
    let e_plus = dt.neg();
    let e_minus = t
        .mul(&x)
        .mul(&dx)
        .add(&t.pow(2).mul(&dt))
        .sub(&p(Param::S).mul(&x.pow(2)))
        .sub(&p(Param::R).mul(&t));
    (h, e_plus, e_minus)
}

/// The free Schrödinger operator `2i dt + dx^2`.
pub fn free_schrodinger() -> WeylOperator {
    WeylOperator::dt()
        .scale_rat(&GaussRat::int(2) * &GaussRat::i())
        .add(&WeylOperator::dx().pow(2))
}

/// `(t v - u) dx + s (w - 2 v x)` with the given coefficient polynomials for u, v, w.
pub fn heisenberg_operator(u: &ParamPoly, v: &ParamPoly, w: &ParamPoly) -> WeylOperator {
    let (t, x, dx) = (WeylOperator::t(), WeylOperator::x(), WeylOperator::dx());
    let (u, v, w) = (WeylOperator::constant(u.clone()), WeylOperator::constant(v.clone()), WeylOperator::constant(w.clone()));
    t.mul(&v)
        .sub(&u)
        .mul(&dx)
        .add(&p(Param::S).mul(&w.sub(&v.mul(&x).scale_int(2))))
}

/// Heisenberg action operator with symbolic u, v, w.
pub fn heisenberg_generator() -> WeylOperator {
    heisenberg_operator(&ParamPoly::param(Param::U), &ParamPoly::param(Param::V), &ParamPoly::param(Param::W))
}

/// Heisenberg action operator at fixed exact (u, v, w).
pub fn heisenberg_generator_at(u: GaussRat, v: GaussRat, w: GaussRat) -> WeylOperator {
    heisenberg_operator(&ParamPoly::constant(u), &ParamPoly::constant(v), &ParamPoly::constant(w))
}

/// Action of the trace-free element [[a, b], [c, -a]]:
/// (ct - a) x dx + (ct^2 - 2at - b) dt + (ra - c s x^2 - r c t).
pub fn sl2_action_operator(a: GaussRat, b: GaussRat, c: GaussRat) -> WeylOperator {
    let (t, x, dt, dx) = (WeylOperator::t(), WeylOperator::x(), WeylOperator::dt(), WeylOperator::dx());
    let (a, b, c) = (WeylOperator::scalar(a), WeylOperator::scalar(b), WeylOperator::scalar(c));
    let r = p(Param::R);
    let s = p(Param::S);
    c.mul(&t)
        .sub(&a)
        .mul(&x)
        .mul(&dx)
        .add(&c.mul(&t.pow(2)).sub(&a.mul(&t).scale_int(2)).sub(&b).mul(&dt))
        .add(&r.mul(&a))
        .sub(&c.mul(&s).mul(&x.pow(2)))
        .sub(&r.mul(&c).mul(&t))
}

/// The displayed action operator for (a, b, c, d); requires ad - bc = 1 (d itself does not enter).
pub fn gl_action_operator(a: GaussRat, b: GaussRat, c: GaussRat, d: GaussRat) -> Result<WeylOperator> {
    let det = &(&a * &d) - &(&b * &c);
    if !det.is_one() {
        return Err(Error::Determinant(det.to_string()));
    }
    Ok(sl2_action_operator(a, b, c))
}

/// `(Omega, Omega')` with Omega = h^2/2 - h + 2 e+ e- and Omega' = 2 Omega - r(r+2).
pub fn casimir() -> (WeylOperator, WeylOperator) {
    let (h, ep, em) = sl2_generators();
    let omega = h
        .mul(&h)
        .scale_rat(GaussRat::frac(1, 2))
        .sub(&h)
        .add(&ep.mul(&em).scale_int(2));
    let r = ParamPoly::param(Param::R);
    let rr2 = r.mul(&r.add(&ParamPoly::int(2)));
    let omega_prime = omega.scale_int(2).sub(&WeylOperator::constant(rr2));
    (omega, omega_prime)
}

/// `1/2 (4 s x^2 dt + x^2 dx^2 - (1+2r) x dx + r(r+2))`.
pub fn casimir_closed_form() -> WeylOperator {
    let (x, dt, dx) = (WeylOperator::x(), WeylOperator::dt(), WeylOperator::dx());
    let r = p(Param::R);
    let s = p(Param::S);
    let x2 = x.pow(2);
    s.mul(&x2)
        .mul(&dt)
        .scale_int(4)
        .add(&x2.mul(&dx.pow(2)))
        .sub(&WeylOperator::one().add(&r.scale_int(2)).mul(&x).mul(&dx))
        .add(&r.mul(&r.add(&WeylOperator::int(2))))
        .scale_rat(GaussRat::frac(1, 2))
}

/// `Omega' - 2 lambda - x^2 (box - 2 lambda x^-2)` at r = -1/2, s = i/2.
pub fn factorization_residual() -> WeylOperator {
    let (_, omega_prime) = casimir();
    let lam = p(Param::Lambda);
    let x = WeylOperator::x();
    let inner = free_schrodinger().sub(&lam.mul(&WeylOperator::x_pow(-2)).scale_int(2));
    omega_prime
        .at_schrodinger()
        .sub(&lam.scale_int(2))
        .sub(&x.pow(2).mul(&inner))
}

/// `[box - 2 lambda x^-2, (tv - u) dx + s(w - 2vx)]` with s = i/2, symbolic lambda, u, v, w.
pub fn heis_commutator_identity() -> WeylOperator {
    let lam = p(Param::Lambda);
    let shifted = free_schrodinger().sub(&lam.mul(&WeylOperator::x_pow(-2)).scale_int(2));
    shifted.bracket(&heisenberg_generator()).at_schrodinger()
}

/// The closed form claimed for the commutator: `4 lambda (tv - u) x^-3`.
pub fn heis_commutator_claim() -> WeylOperator {
    let lam = p(Param::Lambda);
    let tv_u = WeylOperator::t().mul(&p(Param::V)).sub(&p(Param::U));
    lam.mul(&tv_u).mul(&WeylOperator::x_pow(-3)).scale_int(4)
}

/// JSON record of an exact identity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentityRecord {
    pub lhs: String,
    pub rhs: String,
    pub equal: bool,
    pub difference: String,
}

pub fn identity_record(lhs: &WeylOperator, rhs: &WeylOperator) -> IdentityRecord {
    let diff = lhs.sub(rhs);
    IdentityRecord {
        lhs: lhs.to_string(),
        rhs: rhs.to_string(),
        equal: diff.is_zero(),
        difference: diff.to_string(),
    }
}
