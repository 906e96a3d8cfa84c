use serde::Serialize;

use super::PotentialSpec;
use crate::error::{Error, Result};

const N: usize = 16;
type State = [f64; N];

// state layout
const CHI2: usize = 0;
const DCHI2: usize = 1;
const CHI1_ODE: usize = 2;
const DCHI1_ODE: usize = 3;
const INT_I: usize = 4;
const C1U: usize = 5;
const C2: usize = 6;
const INT_K: usize = 7;
const G0_INT: usize = 8;
const INT_Q: usize = 9;
const P: usize = 10;

/// Which Wronskian normalization pins chi1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub enum WronskianConvention {
    /// chi1 chi2' - chi1' chi2 = 1, so chi1 = -chi2 * int 1/chi2^2.
    #[default]
    Standard,
    /// chi1' chi2 - chi1 chi2' = 1, so chi1 = +chi2 * int 1/chi2^2.
    Reversed,
}

impl WronskianConvention {
    pub fn sign(self) -> f64 {
        match self {
            WronskianConvention::Standard => -1.0,
            WronskianConvention::Reversed => 1.0,
        }
    }

    pub fn describe(self) -> &'static str {
        match self {
            WronskianConvention::Standard => "chi1*chi2' - chi1'*chi2 = 1 (chi1 = -chi2 * int_0^t 1/chi2^2)",
            WronskianConvention::Reversed => "chi1'*chi2 - chi1*chi2' = 1 (chi1 = +chi2 * int_0^t 1/chi2^2)",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub enum StepControl {
    /// One RK4 step per grid interval.
    Fixed,
    /// Step doubling with a Richardson estimate; intervals are subdivided until it is below tol.
    Adaptive { tol: f64 },
}

/// One RK4 step with Kahan-compensated accumulation of the increment into (y, comp).
fn rk4<F: Fn(f64, &State) -> State>(f: &F, t: f64, y: &mut State, comp: &mut State, h: f64) {
    let add = |a: &State, b: &State, s: f64| -> State {
        let mut o = *a;
        for i in 0..N {
            o[i] += s * b[i];
        }
        o
    };
    let k1 = f(t, y);
    let k2 = f(t + h / 2.0, &add(y, &k1, h / 2.0));
    let k3 = f(t + h / 2.0, &add(y, &k2, h / 2.0));
    let k4 = f(t + h, &add(y, &k3, h));
    for i in 0..N {
        // weights first so a constant slope yields exactly h
        let inc = (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) / 6.0 * h - comp[i];
        let s = y[i] + inc;
        comp[i] = (s - y[i]) - inc;
        y[i] = s;
    }
}

fn advance<F: Fn(f64, &State) -> State>(f: &F, t: f64, y: &State, comp: &State, h: f64, nsub: usize) -> (State, State) {
    let hs = h / nsub as f64;
    let (mut y, mut c) = (*y, *comp);
    for k in 0..nsub {
        rk4(f, t + k as f64 * hs, &mut y, &mut c, hs);
    }
    (y, c)
}

/// Everything derived from the chi pair at one time.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ChiPoint {
    pub t: f64,
    pub g2: f64,
    pub g1: f64,
    pub g0: f64,
    pub chi1: f64,
    pub chi2: f64,
    pub dchi1: f64,
    pub dchi2: f64,
    /// chi1 integrated as an ODE solution instead of from the integral formula.
    pub chi1_ode: f64,
    pub dchi1_ode: f64,
    /// int_0^t 1/chi2^2.
    pub int_inv: f64,
    /// int_0^t C2/chi2^2.
    pub int_c2: f64,
    /// int_0^t g0.
    pub int_g0: f64,
    /// int_0^t C2^2/chi2^2.
    pub int_c2_sq: f64,
    pub c: [f64; 2],
    pub phi: [f64; 3],
    pub dphi: [f64; 3],
    pub ddphi: [f64; 3],
    pub a: [f64; 3],
    pub da: [f64; 3],
    pub d: [f64; 3],
    /// Verbatim multiplier exponent x^2 p[0] + x p[1] + p[2] (complex, (re, im) pairs).
    pub p: [(f64, f64); 3],
}

impl ChiPoint {
    /// B_j(x) as (re, im).
    pub fn b(&self, j: usize, x: f64) -> (f64, f64) {
        let re = 0.25 * self.dphi[j];
        let im = -0.25 * self.ddphi[j] * x * x - self.da[j] * x + self.g0 * self.phi[j] + self.d[j];
        (re, im)
    }
}

#[derive(Clone, Debug)]
pub struct ChiSystem {
    pub spec: PotentialSpec,
    pub convention: WronskianConvention,
    pub control: StepControl,
    /// Grid step before subdivision.
    pub step: f64,
    /// Ascending node times on the valid interval.
    pub times: Vec<f64>,
    states: Vec<State>,
    /// Kahan compensation carried with each node state.
    comps: Vec<State>,
    /// Substeps used on the interval (times[k], times[k+1]).
    substeps: Vec<usize>,
    pub warnings: Vec<String>,
}

fn derivative(spec: &PotentialSpec) -> impl Fn(f64, &State) -> State + '_ {
    move |t, y| {
        let (g2, g1, g0) = (spec.g2.eval(t), spec.g1.eval(t), spec.g0.eval(t));
        let c2 = y[CHI2];
        let inv2 = 1.0 / (c2 * c2);
        let chi1u = c2 * y[INT_I];
        let cc2 = y[C2];
        let phi2 = c2 * c2;
        let dphi2 = 2.0 * c2 * y[DCHI2];
        let ddphi2 = 2.0 * y[DCHI2] * y[DCHI2] - 4.0 * g2 * phi2;
        let a2 = -c2 * cc2;
        let da2 = -y[DCHI2] * cc2 - phi2 * g1;
        let d2 = -0.5 * cc2 * cc2;
        let mut o = [0.0; N];
        o[CHI2] = y[DCHI2];
        o[DCHI2] = -2.0 * g2 * c2;
        o[CHI1_ODE] = y[DCHI1_ODE];
        o[DCHI1_ODE] = -2.0 * g2 * y[CHI1_ODE];
        o[INT_I] = inv2;
        o[C1U] = chi1u * g1;
        o[C2] = c2 * g1;
        o[INT_K] = cc2 * inv2;
        o[G0_INT] = g0;
        o[INT_Q] = cc2 * cc2 * inv2;
        let half = 0.5 * dphi2 * inv2;
        o[P] = half * half;
        o[P + 1] = -0.25 * ddphi2 * inv2;
        o[P + 2] = dphi2 * a2 * inv2 * inv2;
        o[P + 3] = -da2 * inv2;
        o[P + 4] = 0.25 * dphi2 * inv2 + a2 * a2 * inv2 * inv2;
        o[P + 5] = (g0 * phi2 + d2) * inv2;
        o
    }
}

pub fn solve_chi(spec: &PotentialSpec, step: f64) -> Result<ChiSystem> {
    solve_chi_with(spec, step, StepControl::Adaptive { tol: 1e-13 }, WronskianConvention::Standard)
}

/// chi2(0) = 1, chi2'(0) = 0, marched out to +-T and truncated where |chi2| < 1e-3.
pub fn solve_chi_with(
    spec: &PotentialSpec,
    step: f64,
    control: StepControl,
    convention: WronskianConvention,
) -> Result<ChiSystem> {
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::Domain(format!("step = {step} must be positive")));
    }
    let n = (spec.t_max / step).ceil().max(1.0) as usize;
    let h = spec.t_max / n as f64;
    let f = derivative(spec);
    let mut y0 = [0.0; N];
    y0[CHI2] = 1.0;
    y0[DCHI1_ODE] = 1.0;

    let mut warnings = Vec::new();
    let mut march = |dir: f64| -> (Vec<f64>, Vec<(State, State)>, Vec<usize>) {
        let (mut ts, mut ys, mut subs) = (vec![0.0], vec![(y0, [0.0; N])], Vec::new());
        for k in 0..n {
            let t = dir * k as f64 * h;
            let (y, c) = ys[k];
            let (next, nsub) = match control {
                StepControl::Fixed => (advance(&f, t, &y, &c, dir * h, 1), 1),
                StepControl::Adaptive { tol } => {
                    let mut nsub = 1;
                    loop {
                        let coarse = advance(&f, t, &y, &c, dir * h, nsub).0;
                        let fine = advance(&f, t, &y, &c, dir * h, 2 * nsub);
                        let size = fine.0.iter().fold(1.0f64, |m, v| m.max(v.abs()));
                        let err = coarse.iter().zip(&fine.0).fold(0.0f64, |m, (a, b)| m.max((a - b).abs())) / 15.0;
                        if err <= tol * size || nsub >= 4096 {
                            break (fine, 2 * nsub);
                        }
                        nsub *= 2;
                    }
                }
            };
            let tn = if k + 1 == n { dir * spec.t_max } else { dir * (k + 1) as f64 * h };
            // chi2 starts at 1, so a sign change also lands here
            if next.0[CHI2] < 1e-3 || next.0.iter().any(|v| !v.is_finite()) {
                warnings.push(format!("chi2 approaches 0 near t = {tn:.6}; valid interval truncated"));
                break;
            }
            ts.push(tn);
            ys.push(next);
            subs.push(nsub);
        }
        (ts, ys, subs)
    };
    let (tf, yf, sf) = march(1.0);
    let (tb, yb, sb) = march(-1.0);

    let mut times: Vec<f64> = tb.iter().rev().copied().collect();
    let mut states: Vec<State> = yb.iter().rev().map(|p| p.0).collect();
    let mut comps: Vec<State> = yb.iter().rev().map(|p| p.1).collect();
    let mut substeps: Vec<usize> = sb.iter().rev().copied().collect();
    times.extend_from_slice(&tf[1..]);
    states.extend(yf[1..].iter().map(|p| p.0));
    comps.extend(yf[1..].iter().map(|p| p.1));
    substeps.extend_from_slice(&sf);

    let (lo, hi) = (times[0], *times.last().unwrap_or(&0.0));
    if hi - lo < 0.2 {
        return Err(Error::ValidInterval { lo, hi });
    }
    Ok(ChiSystem { spec: spec.clone(), convention, control, step: h, times, states, comps, substeps, warnings })
}

impl ChiSystem {
    pub fn valid_interval(&self) -> (f64, f64) {
        (self.times[0], self.times[self.times.len() - 1])
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Same integration read under the other Wronskian convention.
    pub fn with_convention(&self, convention: WronskianConvention) -> ChiSystem {
        ChiSystem { convention, ..self.clone() }
    }

    fn point(&self, t: f64, y: &State) -> ChiPoint {
        let sp = &self.spec;
        let (g2, g1, g0) = (sp.g2.eval(t), sp.g1.eval(t), sp.g0.eval(t));
        let sigma = self.convention.sign();
        let (c2, dc2, int_i) = (y[CHI2], y[DCHI2], y[INT_I]);
        let chi1 = sigma * c2 * int_i;
        let dchi1 = sigma * (dc2 * int_i + 1.0 / c2);
        let cc = [sigma * y[C1U], y[C2]];
        let chi = [chi1, c2];
        let dchi = [dchi1, dc2];
        let mut phi = [0.0; 3];
        let mut dphi = [0.0; 3];
        let mut ddphi = [0.0; 3];
        let mut a = [0.0; 3];
        let mut da = [0.0; 3];
        let mut d = [0.0; 3];
        for l in 0..2 {
            phi[l] = chi[l] * chi[l];
            dphi[l] = 2.0 * chi[l] * dchi[l];
            ddphi[l] = 2.0 * dchi[l] * dchi[l] - 4.0 * g2 * phi[l];
            a[l] = -chi[l] * cc[l];
            da[l] = -dchi[l] * cc[l] - phi[l] * g1;
            d[l] = -0.5 * cc[l] * cc[l];
        }
        phi[2] = 2.0 * chi1 * c2;
        dphi[2] = 2.0 * (dchi1 * c2 + chi1 * dc2);
        ddphi[2] = 2.0 * (2.0 * dchi1 * dc2 - 4.0 * g2 * chi1 * c2);
        a[2] = -(chi1 * cc[1] + c2 * cc[0]);
        da[2] = -(dchi1 * cc[1] + dc2 * cc[0] + 2.0 * chi1 * c2 * g1);
        d[2] = -cc[0] * cc[1];
        ChiPoint {
            t,
            g2,
            g1,
            g0,
            chi1,
            chi2: c2,
            dchi1,
            dchi2: dc2,
            chi1_ode: sigma * y[CHI1_ODE],
            dchi1_ode: sigma * y[DCHI1_ODE],
            int_inv: int_i,
            int_c2: y[INT_K],
            int_g0: y[G0_INT],
            int_c2_sq: y[INT_Q],
            c: cc,
            phi,
            dphi,
            ddphi,
            a,
            da,
            d,
            p: [(y[P], y[P + 1]), (y[P + 2], y[P + 3]), (y[P + 4], y[P + 5])],
        }
    }

    /// Node values.
    pub fn nodes(&self) -> Vec<ChiPoint> {
        self.times.iter().zip(&self.states).map(|(t, y)| self.point(*t, y)).collect()
    }

    /// Dense evaluation: integrate from the nearest node with that interval's substep size.
    pub fn at(&self, t: f64) -> Result<ChiPoint> {
        let (lo, hi) = self.valid_interval();
        if !(t >= lo - 1e-12 && t <= hi + 1e-12) {
            return Err(Error::OutsideInterval(t));
        }
        let k = match self.times.binary_search_by(|v| v.total_cmp(&t)) {
            Ok(k) => return Ok(self.point(t, &self.states[k])),
            Err(k) => k,
        };
        let (left, right) = (k.saturating_sub(1), k.min(self.times.len() - 1));
        let near = if (t - self.times[left]).abs() <= (self.times[right] - t).abs() { left } else { right };
        let interval = left.min(self.substeps.len().saturating_sub(1));
        let nsub = self.substeps.get(interval).copied().unwrap_or(1);
        let dt = t - self.times[near];
        let hs = self.step / nsub as f64;
        let count = ((dt.abs() / hs).ceil() as usize).max(1);
        let f = derivative(&self.spec);
        let (y, _) = advance(&f, self.times[near], &self.states[near], &self.comps[near], dt, count);
        Ok(self.point(t, &y))
    }

    /// max |W - 1| for the ODE pair and for the integral-formula pair, in this convention's orientation.
    pub fn wronskian_drift(&self) -> (f64, f64) {
        let s = -self.convention.sign();
        let mut ode = 0.0f64;
        let mut formula = 0.0f64;
        for p in self.nodes() {
            ode = ode.max((s * (p.chi1_ode * p.dchi2 - p.dchi1_ode * p.chi2) - 1.0).abs());
            formula = formula.max((s * (p.chi1 * p.dchi2 - p.dchi1 * p.chi2) - 1.0).abs());
        }
        (ode, formula)
    }

    /// max |chi1 (integral formula) - chi1 (ODE)|.
    pub fn chi1_consistency(&self) -> f64 {
        self.nodes().iter().fold(0.0, |m, p| m.max((p.chi1 - p.chi1_ode).abs()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct IdentityResiduals {
    /// A1 - (I^2 A2 - chi2 I K), the stated form.
    pub a_identity: f64,
    /// A1 - (I^2 A2 + chi2 I K).
    pub a_identity_corrected: f64,
    /// phi1' - (I^2 phi2' + 2 I).
    pub phi_identity: f64,
}

/// Max residuals over the grid, with I = int 1/chi2^2 and K = int C2/chi2^2.
pub fn chi_identities_residual(cs: &ChiSystem) -> IdentityResiduals {
    let mut r = IdentityResiduals { a_identity: 0.0, a_identity_corrected: 0.0, phi_identity: 0.0 };
    for p in cs.nodes() {
        let (i, k) = (p.int_inv, p.int_c2);
        let base = i * i * p.a[1];
        let cross = p.chi2 * i * k;
        r.a_identity = r.a_identity.max((p.a[0] - (base - cross)).abs());
        r.a_identity_corrected = r.a_identity_corrected.max((p.a[0] - (base + cross)).abs());
        r.phi_identity = r.phi_identity.max((p.dphi[0] - (i * i * p.dphi[1] + 2.0 * i)).abs());
    }
    r
}
