//! Exact generator matrices on a finite window of the weight lattice, and checks of the
//! composition-series claims restricted to the window interior.

mod series;

use std::collections::{BTreeMap, HashMap};

use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ktypes::{admissible_indices, KTypeIndex};
use crate::liealg::{ladder_terms, GeneratorTag, LadderConvention};

pub use series::{
    composition_series, sl2_commutation_check, verify_invariance, verify_irreducible_quotient, ChainMember,
    InvarianceReport, IrreducibilityReport, SeriesReport, Subquotient, Violation,
};

/// Truncation l <= l_max, |m| <= m_bound for a fixed q.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Window {
    pub q: u8,
    pub l_max: u32,
    pub m_bound: i64,
}

impl Window {
    pub fn new(q: u8, l_max: u32, m_bound: i64) -> Result<Window> {
        if l_max < 2 {
            return Err(Error::WindowTooSmall(format!("l_max = {l_max}; at least 2 is needed to reach an l >= 2 K-type")));
        }
        let need = 2 * l_max as i64 + 5;
        if m_bound < need {
            return Err(Error::WindowTooSmall(format!(
                "m_bound = {m_bound}; extremal weights +-(2l+1) for l <= {l_max} plus one ladder step need m_bound >= {need}"
            )));
        }
        Ok(Window { q: q % 4, l_max, m_bound })
    }

    /// l_max = 6, m_bound = 29.
    pub fn default_for(q: u8) -> Window {
        Window { q: q % 4, l_max: 6, m_bound: 29 }
    }

    pub fn contains(&self, k: &KTypeIndex) -> bool {
        k.q == self.q && k.l <= self.l_max && k.m.abs() <= self.m_bound
    }
}

/// Column-sparse exact matrix: cols[j] lists (row, entry) with nonzero entries.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct SparseMatrix {
    pub n: usize,
    pub cols: Vec<Vec<(usize, BigRational)>>,
}

impl SparseMatrix {
    pub fn entry(&self, row: usize, col: usize) -> BigRational {
        self.cols[col].iter().find(|(r, _)| *r == row).map(|(_, v)| v.clone()).unwrap_or_else(BigRational::zero)
    }

    pub fn nnz(&self) -> usize {
        self.cols.iter().map(Vec::len).sum()
    }

    /// Matrix-vector product on a sparse vector.
    pub fn apply(&self, v: &BTreeMap<usize, BigRational>) -> BTreeMap<usize, BigRational> {
        let mut out: BTreeMap<usize, BigRational> = BTreeMap::new();
        for (j, x) in v {
            for (i, a) in &self.cols[*j] {
                *out.entry(*i).or_insert_with(BigRational::zero) += a * x;
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

#[derive(Clone, Debug)]
pub struct TruncatedModule {
    pub window: Window,
    pub convention: LadderConvention,
    pub basis: Vec<KTypeIndex>,
    pub position: HashMap<KTypeIndex, usize>,
    pub matrices: BTreeMap<GeneratorTag, SparseMatrix>,
    /// True where some generator maps the basis vector outside the window.
    pub boundary_mask: Vec<bool>,
}

impl TruncatedModule {
    pub fn matrix(&self, g: GeneratorTag) -> &SparseMatrix {
        &self.matrices[&g]
    }

    pub fn is_interior(&self, j: usize) -> bool {
        !self.boundary_mask[j]
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Builds the five generator matrices with the coefficients the operators actually produce.
pub fn build_truncated(window: Window) -> Result<TruncatedModule> {
    build_truncated_with(window, LadderConvention::Verified)
}

pub fn build_truncated_with(window: Window, convention: LadderConvention) -> Result<TruncatedModule> {
    let window = Window::new(window.q, window.l_max, window.m_bound)?;
    let basis = admissible_indices(window.q, window.l_max, window.m_bound);
    let position: HashMap<KTypeIndex, usize> = basis.iter().enumerate().map(|(i, k)| (*k, i)).collect();
    let n = basis.len();
    let mut boundary_mask = vec![false; n];
    let mut matrices = BTreeMap::new();
    for g in GeneratorTag::MODULE {
        let mut m = SparseMatrix { n, cols: vec![Vec::new(); n] };
        for (j, k) in basis.iter().enumerate() {
            for term in ladder_terms(g, k, convention)? {
                match position.get(&term.target) {
                    Some(&i) => m.cols[j].push((i, term.coefficient)),
                    None => boundary_mask[j] = true,
                }
            }
        }
        matrices.insert(g, m);
    }
    Ok(TruncatedModule { window, convention, basis, position, matrices, boundary_mask })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Extremal {
    None,
    /// Annihilated by eta-minus at m = 2l + 1.
    Lowest(i64),
    /// Annihilated by eta-plus at m = -(2l + 1).
    Highest(i64),
}

pub fn detect_extremal(q: u8, l: u32) -> Extremal {
    let class = (2 * l as i64 + q as i64).rem_euclid(4);
    let w = 2 * l as i64 + 1;
    if w.rem_euclid(4) == class {
        Extremal::Lowest(w)
    } else if (-w).rem_euclid(4) == class {
        Extremal::Highest(-w)
    } else {
        Extremal::None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn window_guard() {
        assert!(matches!(Window::new(1, 1, 29), Err(Error::WindowTooSmall(_))));
        assert!(matches!(Window::new(1, 6, 16), Err(Error::WindowTooSmall(_))));
        assert!(Window::new(1, 2, 9).is_ok());
    }

    #[test]
    fn kappa_diagonal_and_eta_annihilation() {
        let m = build_truncated(Window::new(1, 2, 9).unwrap()).unwrap();
        let j = m.position[&KTypeIndex::new(1, 2, 5).unwrap()];
        assert_eq!(m.matrix(GeneratorTag::Kappa).entry(j, j), rat(5, 2));
        assert!(m.matrix(GeneratorTag::EtaMinus).cols[j].is_empty());
        for (j, k) in m.basis.iter().enumerate() {
            assert_eq!(m.matrix(GeneratorTag::Kappa).cols[j], vec![(j, rat(k.m, 2))]);
        }
    }

    #[test]
    fn e_minus_k1_entry() {
        let m = build_truncated(Window::new(1, 2, 9).unwrap()).unwrap();
        let j = m.position[&KTypeIndex::new(1, 1, 3).unwrap()];
        let i = m.position[&KTypeIndex::new(1, 0, 1).unwrap()];
        assert_eq!(m.matrix(GeneratorTag::EMinus).entry(i, j), rat(-1, 1));
        assert_eq!(m.matrix(GeneratorTag::EMinus).cols[j].len(), 1);
    }

    #[test]
    fn entries_match_ladder_terms() {
        let m = build_truncated(Window::default_for(3)).unwrap();
        for g in GeneratorTag::MODULE {
            for (j, k) in m.basis.iter().enumerate() {
                for t in ladder_terms(g, k, LadderConvention::Verified).unwrap() {
                    if let Some(&i) = m.position.get(&t.target) {
                        assert_eq!(m.matrix(g).entry(i, j), t.coefficient);
                    } else {
                        assert!(m.boundary_mask[j]);
                    }
                }
            }
        }
    }

    #[test]
    fn extremal_detection() {
        assert_eq!(detect_extremal(0, 2), Extremal::None);
        assert_eq!(detect_extremal(1, 3), Extremal::Lowest(7));
        assert_eq!(detect_extremal(3, 2), Extremal::Highest(-5));
        for l in 0..10 {
            assert_eq!(detect_extremal(2, l), Extremal::None);
        }
    }
}
