use num_complex::Complex64;
use serde::Serialize;

use super::{ChiSystem, PotentialSpec};
use crate::error::{Error, Result};
use crate::fd::richardson;
use crate::grid::{GridFunction, GridSpec};
use crate::ktypes::{local_scale, Picture, PictureFunction};

/// gamma(t, x) = (int 1/chi2^2, x/chi2 + int C2/chi2^2).
pub fn gamma_map(cs: &ChiSystem, t: f64, x: f64) -> Result<(f64, f64)> {
    let p = cs.at(t)?;
    Ok((p.int_inv, x / p.chi2 + p.int_c2))
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum MultiplierForm {
    /// exp of int_0^t [B2/chi2^2 + (chi2^-2 (phi2' x/2 + A2))^2] du with the outer x inside.
    #[default]
    Verbatim,
    /// chi2^{-1/2} exp(i x^2 chi2'/(2 chi2) - i x C2/chi2 - i int g0 - (i/2) int C2^2/chi2^2).
    Derived,
}

pub fn multiplier(cs: &ChiSystem, form: MultiplierForm, t: f64, x: f64) -> Result<Complex64> {
    let p = cs.at(t)?;
    Ok(match form {
        MultiplierForm::Verbatim => {
            let e = Complex64::new(p.p[0].0, p.p[0].1) * (x * x)
                + Complex64::new(p.p[1].0, p.p[1].1) * x
                + Complex64::new(p.p[2].0, p.p[2].1);
            e.exp()
        }
        MultiplierForm::Derived => {
            let phase = x * x * p.dchi2 / (2.0 * p.chi2) - x * p.c[1] / p.chi2 - p.int_g0 - 0.5 * p.int_c2_sq;
            Complex64::new(0.0, phase).exp() / p.chi2.sqrt()
        }
    })
}

/// f~(t, x) = rho(t, x) f(gamma(t, x)) as a noncompact-picture closure.
pub fn transform_closure(cs: &ChiSystem, f: &PictureFunction, form: MultiplierForm) -> Result<PictureFunction> {
    if f.picture != Picture::NonCompact {
        return Err(Error::Domain("transform expects a noncompact-picture solution".into()));
    }
    let cs = cs.clone();
    let inner = f.clone();
    Ok(PictureFunction::closure(Picture::NonCompact, f.params.clone(), move |t, x| {
        let (th, xi) = gamma_map(&cs, t, x)?;
        Ok(multiplier(&cs, form, t, x)? * inner.eval(th, xi)?)
    }))
}

/// Samples f~ on a grid.
pub fn transform_solution(
    cs: &ChiSystem,
    f: &PictureFunction,
    form: MultiplierForm,
    grid: GridSpec,
) -> Result<GridFunction> {
    let g = transform_closure(cs, f, form)?;
    GridFunction::sample(grid, |t, x| g.eval(t, x))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum TdVerdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "MULTIPLIER-DISCREPANCY")]
    MultiplierDiscrepancy,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ProfilePoint {
    pub t: f64,
    pub x: f64,
    pub residual: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TdReport {
    pub spec: String,
    pub max_residual: f64,
    pub profile: Vec<ProfilePoint>,
    pub verdict: TdVerdict,
    pub threshold: f64,
}

impl TdReport {
    fn build(spec: &PotentialSpec, profile: Vec<ProfilePoint>, threshold: f64) -> TdReport {
        let max_residual = profile.iter().fold(0.0f64, |m, p| m.max(p.residual));
        let verdict = if max_residual <= threshold { TdVerdict::Pass } else { TdVerdict::MultiplierDiscrepancy };
        TdReport { spec: spec.to_string(), max_residual, profile, verdict, threshold }
    }
}

fn check_probe(spec: &PotentialSpec, x: f64) -> Result<()> {
    if spec.lambda_f64() != 0.0 && x.abs() < 0.1 {
        return Err(Error::Domain(format!("probe x = {x} is within 0.1 of the singular line")));
    }
    Ok(())
}

fn stencil(spec: &PotentialSpec, t: f64, x: f64, h: f64, v: [Complex64; 5]) -> Complex64 {
    // v = [center, t+, t-, x+, x-]
    let ft = (v[1] - v[2]) / (2.0 * h);
    let fxx = (v[3] - 2.0 * v[0] + v[4]) / (h * h);
    Complex64::new(0.0, 2.0) * ft + fxx - 2.0 * spec.potential(t, x) * v[0]
}

/// 2i f_t + f_xx - 2V f at each probe with steps h and h/2, extrapolated and scaled.
pub fn td_residual(
    f: &PictureFunction,
    spec: &PotentialSpec,
    probes: &[(f64, f64)],
    h: f64,
    threshold: f64,
) -> Result<TdReport> {
    let mut profile = Vec::new();
    for &(t, x) in probes {
        check_probe(spec, x)?;
        let mut scale = 1.0f64;
        let mut at = |h: f64| -> Result<Complex64> {
            let v = [f.eval(t, x)?, f.eval(t + h, x)?, f.eval(t - h, x)?, f.eval(t, x + h)?, f.eval(t, x - h)?];
            scale = scale.max(local_scale(&v));
            Ok(stencil(spec, t, x, h, v))
        };
        let (a, b) = (at(h)?, at(h / 2.0)?);
        profile.push(ProfilePoint { t, x, residual: richardson(a, b).norm() / scale });
    }
    Ok(TdReport::build(spec, profile, threshold))
}

/// Same residual on grid samples, using node stencils at spacings 2h and h.
pub fn td_residual_grid(
    g: &GridFunction,
    spec: &PotentialSpec,
    probes: &[(usize, usize)],
    threshold: f64,
) -> Result<TdReport> {
    let (ht, hx) = g.spacing();
    if (ht - hx).abs() > 1e-12 * ht.max(hx) {
        return Err(Error::Domain(format!("grid residual needs equal spacings, got {ht} and {hx}")));
    }
    let (ts, xs) = (g.spec.ts(), g.spec.xs());
    let mut profile = Vec::new();
    for &(it, ix) in probes {
        if it < 2 || ix < 2 || it + 2 >= g.spec.nt || ix + 2 >= g.spec.nx {
            return Err(Error::Domain(format!("probe node ({it}, {ix}) is too close to the grid edge")));
        }
        let (t, x) = (ts[it], xs[ix]);
        check_probe(spec, x)?;
        let v = |k: usize| [g.at(it, ix), g.at(it + k, ix), g.at(it - k, ix), g.at(it, ix + k), g.at(it, ix - k)];
        let (v2, v1) = (v(2), v(1));
        let scale = local_scale(&v2).max(local_scale(&v1));
        let r = richardson(stencil(spec, t, x, 2.0 * ht, v2), stencil(spec, t, x, ht, v1));
        profile.push(ProfilePoint { t, x, residual: r.norm() / scale });
    }
    Ok(TdReport::build(spec, profile, threshold))
}
