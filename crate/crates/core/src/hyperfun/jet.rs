use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::kummer::{kummer_m_deriv_with, Precision};
use crate::error::Result;
use crate::ktypes::KTypeIndex;

/// Value and partial derivatives of the K-type Psi_{m,l} at (theta, y).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PsiJet {
    pub index: KTypeIndex,
    pub theta: f64,
    pub y: f64,
    pub value: Complex64,
    pub d_theta: Complex64,
    pub d_y: Complex64,
    pub d_yy: Complex64,
}

/// Radial part R(y) = y^l e^{-y^2/2} M(a, b, y^2) and its first two derivatives.
pub fn radial_jet(index: &KTypeIndex, y: f64, prec: Precision) -> Result<[f64; 3]> {
    let (a, b) = (index.kummer_a(), index.kummer_b());
    let z = y * y;
    let f0 = kummer_m_deriv_with(a, b, z, 0, prec)?.value.re;
    let f1 = kummer_m_deriv_with(a, b, z, 1, prec)?.value.re;
    let f2 = kummer_m_deriv_with(a, b, z, 2, prec)?.value.re;
    let e = (-0.5 * z).exp();
    // g(y) = e^{-y^2/2} F(y^2)
    let g = e * f0;
    let g1 = e * (-y * f0 + 2.0 * y * f1);
    let g2 = e * ((z - 1.0) * f0 + (2.0 - 4.0 * z) * f1 + 4.0 * z * f2);
    let l = index.l as i32;
    let lf = l as f64;
    // powi keeps the (-1)^l extension for y < 0; zero-coefficient terms are skipped so y = 0 is exact
    let yl = y.powi(l);
    let r0 = yl * g;
    let mut r1 = yl * g1;
    let mut r2 = yl * g2;
    if l >= 1 {
        let ylm1 = y.powi(l - 1);
        r1 += lf * ylm1 * g;
        r2 += 2.0 * lf * ylm1 * g1;
    }
    if l >= 2 {
        r2 += lf * (lf - 1.0) * y.powi(l - 2) * g;
    }
    Ok([r0, r1, r2])
}

pub fn psi_jet(index: &KTypeIndex, theta: f64, y: f64) -> Result<PsiJet> {
    psi_jet_with(index, theta, y, Precision::global())
}

pub fn psi_jet_with(index: &KTypeIndex, theta: f64, y: f64, prec: Precision) -> Result<PsiJet> {
    let idx = KTypeIndex::new(index.q, index.l, index.m)?;
    let [r0, r1, r2] = radial_jet(&idx, y, prec)?;
    let phase = Complex64::from_polar(1.0, -(idx.m as f64) * theta / 2.0);
    let value = phase * r0;
    Ok(PsiJet {
        index: idx,
        theta,
        y,
        value,
        d_theta: Complex64::new(0.0, -(idx.m as f64) / 2.0) * value,
        d_y: phase * r1,
        d_yy: phase * r2,
    })
}

/// Psi_{m,l}(theta, y) alone.
pub fn psi(index: &KTypeIndex, theta: f64, y: f64) -> Result<Complex64> {
    Ok(psi_jet(index, theta, y)?.value)
}
