use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{KTypeIndex, Picture, PictureFunction};
use crate::error::{Error, Result};
use crate::fd::richardson;
use crate::hyperfun::psi_jet;

/// A residual with the magnitude it is measured against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScaledResidual {
    pub residual: Complex64,
    pub scale: f64,
}

impl ScaledResidual {
    pub fn relative(&self) -> f64 {
        self.residual.norm() / self.scale
    }
}

/// Finite-difference residual at steps h and h/2 plus the extrapolated value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FdResidual {
    pub at_h: Complex64,
    pub at_half: Complex64,
    pub extrapolated: Complex64,
    pub scale: f64,
}

impl FdResidual {
    pub fn relative(&self) -> f64 {
        self.extrapolated.norm() / self.scale
    }

    /// |r(h)| / |r(h/2)|, close to 4 for a second-order stencil.
    pub fn ratio(&self) -> f64 {
        self.at_h.norm() / self.at_half.norm()
    }
}

/// max(1, max |v|).
pub fn local_scale(values: &[Complex64]) -> f64 {
    values.iter().fold(1.0f64, |m, v| m.max(v.norm()))
}

/// y^2 Psi_yy - (2 lambda - m y^2 + y^4) Psi.
pub fn cond_d_residual(index: &KTypeIndex, y: f64) -> Result<ScaledResidual> {
    let jet = psi_jet(index, 0.0, y)?;
    let y2 = y * y;
    let potential = 2.0 * index.lambda_f64() - index.m as f64 * y2 + y2 * y2;
    Ok(ScaledResidual {
        residual: y2 * jet.d_yy - potential * jet.value,
        scale: local_scale(&[jet.value]),
    })
}

/// Central-difference estimate of 2i f_t + f_xx - 2 lambda x^-2 f, extrapolated over {h, h/2}.
pub fn schrodinger_residual(f: &PictureFunction, lambda: f64, t: f64, x: f64, h: f64) -> Result<FdResidual> {
    if f.picture != Picture::NonCompact {
        return Err(Error::Domain("schrodinger_residual expects a noncompact-picture function".into()));
    }
    if x.abs() <= h {
        return Err(Error::Domain(format!("x = {x} is within h = {h} of the singular line")));
    }
    let mut scale = 1.0f64;
    let mut at = |h: f64| -> Result<Complex64> {
        let c = f.eval(t, x)?;
        let (tp, tm) = (f.eval(t + h, x)?, f.eval(t - h, x)?);
        let (xp, xm) = (f.eval(t, x + h)?, f.eval(t, x - h)?);
        scale = scale.max(local_scale(&[c, tp, tm, xp, xm]));
        let ft = (tp - tm) / (2.0 * h);
        let fxx = (xp - 2.0 * c + xm) / (h * h);
        Ok(Complex64::new(0.0, 2.0) * ft + fxx - 2.0 * lambda / (x * x) * c)
    };
    let at_h = at(h)?;
    let at_half = at(h / 2.0)?;
    Ok(FdResidual { at_h, at_half, extrapolated: richardson(at_h, at_half), scale })
}
