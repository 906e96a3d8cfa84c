use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{apply_compact, GeneratorTag};
use crate::error::{Error, Result};
use crate::hyperfun::psi;
use crate::ktypes::KTypeIndex;

/// Which closed forms to use for the Heisenberg ladder coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LadderConvention {
    /// The closed forms as stated.
    #[default]
    Printed,
    /// The coefficients the operators actually produce.
    Verified,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LadderTerm {
    pub coefficient: BigRational,
    pub target: KTypeIndex,
}

impl LadderTerm {
    pub fn coefficient_f64(&self) -> f64 {
        self.coefficient.to_f64().unwrap_or(f64::NAN)
    }
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn push(out: &mut Vec<LadderTerm>, coefficient: BigRational, target: Option<KTypeIndex>) {
    if let Some(target) = target {
        if !coefficient.is_zero() {
            out.push(LadderTerm { coefficient, target });
        }
    }
}

/// Predicted expansion of gen applied to Psi_index; zero-coefficient terms are omitted.
pub fn ladder_terms(gen: GeneratorTag, index: &KTypeIndex, conv: LadderConvention) -> Result<Vec<LadderTerm>> {
    let idx = KTypeIndex::new(index.q, index.l, index.m)?;
    let (l, m) = (idx.l as i64, idx.m);
    let mut out = Vec::new();
    match gen {
        GeneratorTag::Kappa => push(&mut out, rat(m, 2), Some(idx)),
        GeneratorTag::EtaPlus => push(&mut out, rat(-(2 * l + 1 + m), 4), idx.shifted(4, 0)),
        GeneratorTag::EtaMinus => push(&mut out, rat(-(2 * l + 1 - m), 4), idx.shifted(-4, 0)),
        GeneratorTag::EMinus => {
            let k = l;
            let up = match conv {
                LadderConvention::Printed => rat((1 + 2 * k - m) * (k - 1), (2 * k - 1) * (2 * k + 1)),
                LadderConvention::Verified => rat((m - 1 - 2 * k) * (k - 1), (2 * k - 1) * (2 * k + 1)),
            };
            push(&mut out, up, idx.shifted(-2, 1));
            push(&mut out, rat(-k, 1), idx.shifted(-2, -1));
        }
        GeneratorTag::EPlus => {
            let k = l;
            let up = match conv {
                LadderConvention::Printed => rat((1 + 2 * k + m) * (k - 1), 2 * (2 * k - 1)),
                LadderConvention::Verified => rat((1 + 2 * k + m) * (k - 1), (2 * k - 1) * (2 * k + 1)),
            };
            push(&mut out, up, idx.shifted(2, 1));
            push(&mut out, rat(-k, 1), idx.shifted(2, -1));
        }
        other => return Err(Error::Unsupported(format!("no ladder formula for {other}"))),
    }
    Ok(out)
}

/// Every target the generator can reach, whether or not its predicted coefficient vanishes.
fn structural_targets(gen: GeneratorTag, idx: &KTypeIndex) -> Vec<KTypeIndex> {
    let cands = match gen {
        GeneratorTag::Kappa => vec![Some(*idx)],
        GeneratorTag::EtaPlus => vec![idx.shifted(4, 0)],
        GeneratorTag::EtaMinus => vec![idx.shifted(-4, 0)],
        GeneratorTag::EMinus => vec![idx.shifted(-2, 1), idx.shifted(-2, -1)],
        GeneratorTag::EPlus => vec![idx.shifted(2, 1), idx.shifted(2, -1)],
        _ => vec![],
    };
    cands.into_iter().flatten().collect()
}

/// Tensor grid of (theta, y) probe points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbeGrid {
    pub thetas: Vec<f64>,
    pub ys: Vec<f64>,
}

impl Default for ProbeGrid {
    /// 5 x 4 = 20 points away from theta = 0 and y = 0.
    fn default() -> Self {
        ProbeGrid { thetas: vec![0.13, 0.71, 1.37, 2.23, 2.95], ys: vec![0.35, 0.9, 1.55, 2.2] }
    }
}

impl ProbeGrid {
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.thetas.iter().flat_map(|&th| self.ys.iter().map(move |&y| (th, y))).collect()
    }

    pub fn len(&self) -> usize {
        self.thetas.len() * self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn describe(&self) -> String {
        format!("theta={:?} x y={:?}", self.thetas, self.ys)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LadderReport {
    pub generator: GeneratorTag,
    pub index: KTypeIndex,
    pub convention: LadderConvention,
    /// Max relative deviation between the applied operator and sigma times the predicted sum.
    pub deviation: f64,
    pub fitted_sign: i8,
    pub grid_spec: String,
    /// (target, predicted coefficient), including zeros for every reachable target.
    pub predicted: Vec<(KTypeIndex, f64)>,
    /// (target, least-squares coefficient) over the same targets.
    pub extracted: Vec<(KTypeIndex, Complex64)>,
    /// Relative residual left after the least-squares fit; small iff the image lies in the predicted span.
    pub fit_residual: f64,
    /// Largest relative gap between predicted and extracted coefficient magnitudes.
    pub magnitude_mismatch: f64,
}

impl LadderReport {
    /// True when the measured coefficients disagree with the prediction by more than tol.
    pub fn is_discrepancy(&self, tol: f64) -> bool {
        self.deviation > tol || self.magnitude_mismatch > tol
    }
}

/// Solves the normal equations of a complex least-squares problem with few columns.
fn least_squares(cols: &[Vec<Complex64>], rhs: &[Complex64]) -> Vec<Complex64> {
    let n = cols.len();
    let mut a = vec![vec![Complex64::new(0.0, 0.0); n + 1]; n];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = cols[i].iter().zip(&cols[j]).map(|(p, q)| p.conj() * q).sum();
        }
        a[i][n] = cols[i].iter().zip(rhs).map(|(p, b)| p.conj() * b).sum();
    }
    for c in 0..n {
        let piv = (c..n).max_by(|&i, &j| a[i][c].norm().total_cmp(&a[j][c].norm())).unwrap_or(c);
        a.swap(c, piv);
        let d = a[c][c];
        if d.norm() == 0.0 {
            continue;
        }
        for r in 0..n {
            if r != c {
                let f = a[r][c] / d;
                for k in c..=n {
                    let v = a[c][k];
                    a[r][k] -= f * v;
                }
            }
        }
    }
    (0..n)
        .map(|i| if a[i][i].norm() == 0.0 { Complex64::new(0.0, 0.0) } else { a[i][n] / a[i][i] })
        .collect()
}

/// Compares the exact-jet application of gen with the predicted ladder expansion on the grid.
pub fn verify_ladder(
    gen: GeneratorTag,
    index: &KTypeIndex,
    grid: &ProbeGrid,
    conv: LadderConvention,
) -> Result<LadderReport> {
    if grid.len() < 8 {
        return Err(Error::GridTooSmall(grid.len()));
    }
    let terms = ladder_terms(gen, index, conv)?;
    let targets = structural_targets(gen, index);
    let points = grid.points();

    let mut applied = Vec::with_capacity(points.len());
    let mut predicted_vals = Vec::with_capacity(points.len());
    let mut cols: Vec<Vec<Complex64>> = vec![Vec::with_capacity(points.len()); targets.len()];
    let mut scale = 0.0f64;
    for &(th, y) in &points {
        let a = apply_compact(gen, index, th, y)?;
        let mut p = Complex64::new(0.0, 0.0);
        for t in &terms {
            p += t.coefficient_f64() * psi(&t.target, th, y)?;
        }
        for (c, tgt) in cols.iter_mut().zip(&targets) {
            c.push(psi(tgt, th, y)?);
        }
        scale = scale.max(a.norm()).max(p.norm()).max(psi(index, th, y)?.norm());
        applied.push(a);
        predicted_vals.push(p);
    }
    let scale = if scale > 0.0 { scale } else { 1.0 };

    let dev = |sigma: f64| {
        applied
            .iter()
            .zip(&predicted_vals)
            .fold(0.0f64, |m, (a, p)| m.max((a - sigma * p).norm()))
            / scale
    };
    let (dev_plus, dev_minus) = (dev(1.0), dev(-1.0));
    let (deviation, fitted_sign) = if dev_plus <= dev_minus { (dev_plus, 1) } else { (dev_minus, -1) };

    let coeffs = least_squares(&cols, &applied);
    let mut fit_residual = 0.0f64;
    for (i, a) in applied.iter().enumerate() {
        let fit: Complex64 = coeffs.iter().zip(&cols).map(|(c, col)| c * col[i]).sum();
        fit_residual = fit_residual.max((a - fit).norm());
    }
    fit_residual /= scale;

    let predicted: Vec<(KTypeIndex, f64)> = targets
        .iter()
        .map(|tgt| {
            let c = terms.iter().find(|t| t.target == *tgt).map_or(0.0, |t| t.coefficient_f64());
            (*tgt, c)
        })
        .collect();
    let extracted: Vec<(KTypeIndex, Complex64)> = targets.iter().copied().zip(coeffs.iter().copied()).collect();
    let magnitude_mismatch = predicted.iter().zip(&extracted).fold(0.0f64, |m, ((_, p), (_, e))| {
        let denom = p.abs().max(e.norm()).max(1.0);
        m.max((p.abs() - e.norm()).abs() / denom)
    });

    Ok(LadderReport {
        generator: gen,
        index: *index,
        convention: conv,
        deviation,
        fitted_sign,
        grid_spec: grid.describe(),
        predicted,
        extracted,
        fit_residual,
        magnitude_mismatch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(q: u8, l: u32, m: i64) -> KTypeIndex {
        KTypeIndex::new(q, l, m).unwrap()
    }

    #[test]
    fn eta_plus_example() {
        let t = ladder_terms(GeneratorTag::EtaPlus, &k(1, 2, 5), LadderConvention::Printed).unwrap();
        assert_eq!(t, vec![LadderTerm { coefficient: rat(-5, 2), target: k(1, 2, 9) }]);
    }

    #[test]
    fn e_minus_examples() {
        let t = ladder_terms(GeneratorTag::EMinus, &k(3, 2, 7), LadderConvention::Printed).unwrap();
        assert_eq!(
            t,
            vec![
                LadderTerm { coefficient: rat(-2, 15), target: k(3, 3, 5) },
                LadderTerm { coefficient: rat(-2, 1), target: k(3, 1, 5) },
            ]
        );
        // k = 1 kills the upward term; (q=1, l=1) needs m = 3 mod 4
        assert!(KTypeIndex::new(1, 1, 5).is_err());
        let t = ladder_terms(GeneratorTag::EMinus, &k(1, 1, 3), LadderConvention::Printed).unwrap();
        assert_eq!(t, vec![LadderTerm { coefficient: rat(-1, 1), target: k(1, 0, 1) }]);
    }

    #[test]
    fn lowest_weight_has_no_eta_minus_term() {
        assert!(ladder_terms(GeneratorTag::EtaMinus, &k(1, 2, 5), LadderConvention::Printed).unwrap().is_empty());
    }

    #[test]
    fn eta_verifies() {
        let r = verify_ladder(GeneratorTag::EtaPlus, &k(1, 2, 5), &ProbeGrid::default(), LadderConvention::Printed)
            .unwrap();
        assert!(r.deviation <= 1e-10, "{r:?}");
        assert_eq!(r.fitted_sign, 1);
    }

    #[test]
    fn kappa_is_exact() {
        let r = verify_ladder(GeneratorTag::Kappa, &k(2, 3, -4), &ProbeGrid::default(), LadderConvention::Printed)
            .unwrap();
        assert!(r.deviation <= 1e-15);
    }

    #[test]
    fn heisenberg_verified_convention_matches() {
        for idx in [k(3, 2, 7), k(1, 1, 3), k(0, 0, 0), k(2, 4, -10), k(1, 3, -1)] {
            for gen in [GeneratorTag::EPlus, GeneratorTag::EMinus] {
                let r = verify_ladder(gen, &idx, &ProbeGrid::default(), LadderConvention::Verified).unwrap();
                assert!(r.deviation <= 1e-9 && r.fitted_sign == 1, "{gen} {idx}: {r:?}");
                assert!(r.fit_residual <= 1e-9);
            }
        }
    }

    #[test]
    fn printed_e_plus_denominator_is_flagged() {
        let r = verify_ladder(GeneratorTag::EPlus, &k(3, 2, 7), &ProbeGrid::default(), LadderConvention::Printed)
            .unwrap();
        assert!(r.fit_residual <= 1e-9);
        assert!(r.is_discrepancy(1e-9));
    }

    #[test]
    fn grid_guard() {
        let g = ProbeGrid { thetas: vec![0.1, 0.2], ys: vec![0.5, 1.0, 1.5] };
        let err = verify_ladder(GeneratorTag::Kappa, &k(0, 0, 0), &g, LadderConvention::Printed).unwrap_err();
        assert_eq!(err, Error::GridTooSmall(6));
    }
}
