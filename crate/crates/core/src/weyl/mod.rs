//! Exact algebra of differential operators in (t, x).
//!
//! Coefficients are Laurent polynomials in x, polynomials in t, with Gaussian-rational
//! coefficients extended by the commuting parameters r, s, lambda, u, v, w. Every
//! operator is kept in normal order so that equality is structural.

pub mod gauss;
pub mod identities;
pub mod operator;
pub mod param;
pub mod parser;

pub use gauss::GaussRat;
pub use identities::{
    casimir, casimir_closed_form, factorization_residual, free_schrodinger, gl_action_operator,
    heis_commutator_claim, heis_commutator_identity, heisenberg_generator, heisenberg_generator_at,
    identity_record, sl2_action_operator, sl2_generators, IdentityRecord,
};
pub use operator::{Mono, WeylOperator};
pub use param::{Param, ParamPoly, ParamValues};
pub use parser::{parse_operator, parse_weyl, Atom, OperatorExpr};
