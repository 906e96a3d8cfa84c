//! Compact-picture generators applied to K-types through exact jets, ladder coefficient
//! verification, and one-parameter group actions in the non-compact picture.

mod group;
mod ladder;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hyperfun::psi_jet;
use crate::ktypes::KTypeIndex;

pub use group::{
    derivative_check, epsilon_probe, group_action, DerivativeCheck, Subgroup, HEIS_DERIVATIVE_MAP,
};
pub use ladder::{ladder_terms, verify_ladder, LadderConvention, LadderReport, LadderTerm, ProbeGrid};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GeneratorTag {
    #[serde(rename = "kappa")]
    Kappa,
    #[serde(rename = "eta_plus")]
    EtaPlus,
    #[serde(rename = "eta_minus")]
    EtaMinus,
    #[serde(rename = "E_plus")]
    EPlus,
    #[serde(rename = "E_minus")]
    EMinus,
    #[serde(rename = "omega_dd")]
    OmegaDD,
    #[serde(rename = "h")]
    H,
    #[serde(rename = "e_plus")]
    SmallEPlus,
    #[serde(rename = "e_minus")]
    SmallEMinus,
}

impl GeneratorTag {
    pub const ALL: [GeneratorTag; 9] = [
        GeneratorTag::Kappa,
        GeneratorTag::EtaPlus,
        GeneratorTag::EtaMinus,
        GeneratorTag::EPlus,
        GeneratorTag::EMinus,
        GeneratorTag::OmegaDD,
        GeneratorTag::H,
        GeneratorTag::SmallEPlus,
        GeneratorTag::SmallEMinus,
    ];

    /// The five generators that carry ladder structure on K-types.
    pub const MODULE: [GeneratorTag; 5] = [
        GeneratorTag::Kappa,
        GeneratorTag::EtaPlus,
        GeneratorTag::EtaMinus,
        GeneratorTag::EPlus,
        GeneratorTag::EMinus,
    ];

    pub fn name(self) -> &'static str {
        match self {
            GeneratorTag::Kappa => "kappa",
            GeneratorTag::EtaPlus => "eta_plus",
            GeneratorTag::EtaMinus => "eta_minus",
            GeneratorTag::EPlus => "E_plus",
            GeneratorTag::EMinus => "E_minus",
            GeneratorTag::OmegaDD => "omega_dd",
            GeneratorTag::H => "h",
            GeneratorTag::SmallEPlus => "e_plus",
            GeneratorTag::SmallEMinus => "e_minus",
        }
    }
}

impl fmt::Display for GeneratorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for GeneratorTag {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        GeneratorTag::ALL
            .into_iter()
            .find(|g| g.name() == s)
            .ok_or_else(|| Error::Domain(format!("unknown generator '{s}'")))
    }
}

const I: Complex64 = Complex64::new(0.0, 1.0);

/// The generator applied to Psi_index at (theta, y), at r = -1/2, s = i/2, from the exact jet.
pub fn apply_compact(gen: GeneratorTag, index: &KTypeIndex, theta: f64, y: f64) -> Result<Complex64> {
    let j = psi_jet(index, theta, y)?;
    let (v, dth, dy, dyy) = (j.value, j.d_theta, j.d_y, j.d_yy);
    let y2 = y * y;
    let eta_plus = || -0.5 * Complex64::from_polar(1.0, -2.0 * theta) * (y * dy + I * dth + (0.5 - y2) * v);
    let eta_minus = || -0.5 * Complex64::from_polar(1.0, 2.0 * theta) * (y * dy - I * dth + (0.5 + y2) * v);
    let kappa = || I * dth;
    Ok(match gen {
        GeneratorTag::Kappa => kappa(),
        GeneratorTag::EtaPlus => eta_plus(),
        GeneratorTag::EtaMinus => eta_minus(),
        GeneratorTag::EMinus => -Complex64::from_polar(1.0, theta) * (dy + y * v),
        GeneratorTag::EPlus => Complex64::from_polar(1.0, -theta) * (y * v - dy),
        GeneratorTag::OmegaDD => y2 * (2.0 * I * dth - y2 * v + dyy),
        // kappa = i(e- - e+), eta+- = (h +- i(e+ + e-))/2
        GeneratorTag::H => eta_plus() + eta_minus(),
        GeneratorTag::SmallEPlus => 0.5 * (-I * (eta_plus() - eta_minus()) + I * kappa()),
        GeneratorTag::SmallEMinus => 0.5 * (-I * (eta_plus() - eta_minus()) - I * kappa()),
    })
}
