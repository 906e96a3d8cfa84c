use num_complex::Complex64;
use serde::Serialize;

use super::ChiSystem;
use crate::error::Result;
use crate::fd::richardson;

/// L_j = (-1)^{j+1} (phi_j d_t + (phi_j' x / 2 + A_j) d_x + B_j) at one point, sign included.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LCoefficients {
    pub c_t: f64,
    pub c_x: f64,
    pub c_0: Complex64,
}

/// Coefficients of L_1, L_2, L_3 at (t, x). phi_j' is the analytic 2 chi_j chi_j'.
pub fn generators_l(cs: &ChiSystem, t: f64, x: f64) -> Result<[LCoefficients; 3]> {
    let p = cs.at(t)?;
    let mut out = [LCoefficients { c_t: 0.0, c_x: 0.0, c_0: Complex64::new(0.0, 0.0) }; 3];
    for (j, o) in out.iter_mut().enumerate() {
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        let (bre, bim) = p.b(j, x);
        *o = LCoefficients {
            c_t: sign * p.phi[j],
            c_x: sign * (0.5 * p.dphi[j] * x + p.a[j]),
            c_0: sign * Complex64::new(bre, bim),
        };
    }
    Ok(out)
}

/// L_j f at (t, x) by central differences with step h. j is 1-based.
pub fn apply_l<F>(cs: &ChiSystem, j: usize, f: &F, t: f64, x: f64, h: f64) -> Result<Complex64>
where
    F: Fn(f64, f64) -> Result<Complex64> + ?Sized,
{
    let c = generators_l(cs, t, x)?[j - 1];
    let ft = (f(t + h, x)? - f(t - h, x)?) / (2.0 * h);
    let fx = (f(t, x + h)? - f(t, x - h)?) / (2.0 * h);
    Ok(c.c_t * ft + c.c_x * fx + c.c_0 * f(t, x)?)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RelationResidual {
    pub relation: String,
    /// Max over probes of |extrapolated| / scale.
    pub max_relative: f64,
    pub worst_probe: (f64, f64),
    pub at_h: f64,
    pub at_half: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BracketReport {
    pub relations: Vec<RelationResidual>,
    pub max_relative: f64,
}

/// [L3,L1] + 2 L1, [L3,L2] - 2 L2, [L2,L1] - L3 applied to a test function by nested central
/// differences at steps delta and delta/2, then extrapolated. Scaled by max(|L_j f|) at the probe.
pub fn bracket_residual_l<F>(cs: &ChiSystem, f: &F, probes: &[(f64, f64)], delta: f64) -> Result<BracketReport>
where
    F: Fn(f64, f64) -> Result<Complex64>,
{
    // (a, b, c, k): [L_a, L_b] - k L_c
    let rels: [(&str, usize, usize, usize, f64); 3] =
        [("[L3,L1] = -2 L1", 3, 1, 1, -2.0), ("[L3,L2] = 2 L2", 3, 2, 2, 2.0), ("[L2,L1] = L3", 2, 1, 3, 1.0)];
    let mut relations: Vec<RelationResidual> = rels
        .iter()
        .map(|r| RelationResidual {
            relation: r.0.into(),
            max_relative: 0.0,
            worst_probe: (f64::NAN, f64::NAN),
            at_h: 0.0,
            at_half: 0.0,
        })
        .collect();
    for &(t, x) in probes {
        let mut scale = 0.0f64;
        for j in 1..=3 {
            scale = scale.max(apply_l(cs, j, f, t, x, delta / 2.0)?.norm());
        }
        for (ri, &(_, a, b, c, k)) in rels.iter().enumerate() {
            let at = |h: f64| -> Result<Complex64> {
                let lb = |t: f64, x: f64| apply_l(cs, b, f, t, x, h);
                let la = |t: f64, x: f64| apply_l(cs, a, f, t, x, h);
                let ab = apply_l(cs, a, &lb, t, x, h)?;
                let ba = apply_l(cs, b, &la, t, x, h)?;
                Ok(ab - ba - k * apply_l(cs, c, f, t, x, h)?)
            };
            let (rh, rh2) = (at(delta)?, at(delta / 2.0)?);
            let ex = richardson(rh, rh2).norm();
            let rel = if scale > 0.0 { ex / scale } else { ex };
            let e = &mut relations[ri];
            if rel > e.max_relative || e.worst_probe.0.is_nan() {
                e.max_relative = rel;
                e.worst_probe = (t, x);
                e.at_h = rh.norm();
                e.at_half = rh2.norm();
            }
        }
    }
    let max_relative = relations.iter().fold(0.0f64, |m, r| m.max(r.max_relative));
    Ok(BracketReport { relations, max_relative })
}
