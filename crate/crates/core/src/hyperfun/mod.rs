//! Kummer's confluent hypergeometric function, its contiguous relations and the closed-form
//! K-type jets built from it.

mod contiguous;
pub mod dd;
mod jet;
mod kummer;

pub use contiguous::{contiguous_residual, kummer_ode_residual, Relation, Residual};
pub use jet::{psi, psi_jet, psi_jet_with, radial_jet, PsiJet};
pub use kummer::{
    kummer_m, kummer_m_deriv, kummer_m_deriv_with, kummer_m_with, pochhammer_ratio, KummerEval, Precision,
};
