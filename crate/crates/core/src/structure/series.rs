use std::collections::{BTreeMap, VecDeque};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{build_truncated, detect_extremal, Extremal, TruncatedModule, Window};
use crate::error::Result;
use crate::ktypes::KTypeIndex;
use crate::liealg::GeneratorTag;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub generator: GeneratorTag,
    pub from: KTypeIndex,
    pub to: KTypeIndex,
    pub coefficient: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvarianceReport {
    /// Interior basis vectors of the subspace whose images were inspected.
    pub checked: usize,
    pub invariant: bool,
    pub violations: Vec<Violation>,
}

/// Checks that every interior basis vector in the subspace maps into the subspace.
pub fn verify_invariance<P>(module: &TruncatedModule, subspace: P) -> InvarianceReport
where
    P: Fn(&KTypeIndex) -> bool,
{
    let mut checked = 0;
    let mut violations = Vec::new();
    for (j, k) in module.basis.iter().enumerate() {
        if !subspace(k) || !module.is_interior(j) {
            continue;
        }
        checked += 1;
        for g in GeneratorTag::MODULE {
            for (i, c) in &module.matrix(g).cols[j] {
                let to = module.basis[*i];
                if !subspace(&to) {
                    violations.push(Violation { generator: g, from: *k, to, coefficient: c.to_string() });
                }
            }
        }
    }
    InvarianceReport { checked, invariant: violations.is_empty(), violations }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrreducibilityReport {
    /// Interior vertices of the quotient A / B.
    pub vertices: usize,
    pub strongly_connected: bool,
    /// (from, to) pairs witnessing a failure, capped at 20.
    pub unreachable: Vec<(KTypeIndex, KTypeIndex)>,
}

fn reach(adj: &[Vec<usize>], start: usize) -> Vec<bool> {
    let mut seen = vec![false; adj.len()];
    let mut queue = VecDeque::from([start]);
    seen[start] = true;
    while let Some(v) = queue.pop_front() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Strong connectivity of the generator graph on the interior vertices of A minus B.
pub fn verify_irreducible_quotient<A, B>(module: &TruncatedModule, a: A, b: B) -> IrreducibilityReport
where
    A: Fn(&KTypeIndex) -> bool,
    B: Fn(&KTypeIndex) -> bool,
{
    let verts: Vec<usize> = (0..module.dim())
        .filter(|&j| module.is_interior(j) && a(&module.basis[j]) && !b(&module.basis[j]))
        .collect();
    let local: BTreeMap<usize, usize> = verts.iter().enumerate().map(|(i, &j)| (j, i)).collect();
    let mut fwd = vec![Vec::new(); verts.len()];
    let mut rev = vec![Vec::new(); verts.len()];
    for (vi, &j) in verts.iter().enumerate() {
        for g in GeneratorTag::MODULE {
            for (i, _) in &module.matrix(g).cols[j] {
                if let Some(&wi) = local.get(i) {
                    if wi != vi {
                        fwd[vi].push(wi);
                        rev[wi].push(vi);
                    }
                }
            }
        }
    }
    let mut unreachable = Vec::new();
    if !verts.is_empty() {
        let (out, back) = (reach(&fwd, 0), reach(&rev, 0));
        let root = module.basis[verts[0]];
        for (vi, &j) in verts.iter().enumerate() {
            if unreachable.len() >= 20 {
                break;
            }
            if !out[vi] {
                unreachable.push((root, module.basis[j]));
            }
            if !back[vi] {
                unreachable.push((module.basis[j], root));
            }
        }
    }
    IrreducibilityReport { vertices: verts.len(), strongly_connected: unreachable.is_empty(), unreachable }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChainMember {
    pub name: String,
    /// Symbol when q = 1 pairs with + (the lowest-weight span is H^+).
    pub symbol: String,
    /// Symbol under the opposite pairing (q = 1 with -).
    pub alt_symbol: String,
    pub description: String,
    pub dim_in_window: usize,
    pub invariant: bool,
    pub violations: Vec<Violation>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Subquotient {
    pub name: String,
    pub irreducible_interior: bool,
    pub vertices: usize,
    pub unreachable: Vec<(KTypeIndex, KTypeIndex)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SeriesReport {
    pub q: u8,
    pub window: Window,
    pub chain: Vec<ChainMember>,
    pub subquotients: Vec<Subquotient>,
    /// Extremal weights present in the window (must be empty for even q).
    pub extremal_weights: Vec<KTypeIndex>,
    /// Which labeling of the one-sided spans the matrices support.
    pub labeling: String,
    pub boundary_caveats: Vec<String>,
    pub verified: bool,
}

type Pred = Box<dyn Fn(&KTypeIndex) -> bool>;

struct Member {
    name: &'static str,
    symbol: &'static str,
    alt_symbol: &'static str,
    description: &'static str,
    pred: Pred,
}

fn low_span(k: &KTypeIndex) -> bool {
    k.m >= 2 * k.l as i64 + 1
}

fn high_span(k: &KTypeIndex) -> bool {
    k.m <= -(2 * k.l as i64 + 1)
}

fn chain_for(q: u8) -> Vec<Member> {
    let h01 = || -> Pred { Box::new(|k: &KTypeIndex| k.l <= 1) };
    let all = Member { name: "H", symbol: "H", alt_symbol: "H", description: "every K-type in the window", pred: Box::new(|_| true) };
    let h01_member = || Member {
        name: "H0+H1",
        symbol: "H_0 + H_1",
        alt_symbol: "H_0 + H_1",
        description: "the potential-free levels k = 0, 1",
        pred: h01(),
    };
    match q % 4 {
        1 => vec![
            Member {
                name: "H0low+H1low",
                symbol: "H_0^+ + H_1^+",
                alt_symbol: "H_0^- + H_1^-",
                description: "lowest-weight ladders from m = 2k+1 at k = 0, 1",
                pred: Box::new(|k| k.l <= 1 && low_span(k)),
            },
            h01_member(),
            Member {
                name: "H0+H1+Hlow",
                symbol: "H_0 + H_1 + H^+",
                alt_symbol: "H_0 + H_1 + H^-",
                description: "levels k = 0, 1 plus the lowest-weight ladders m >= 2k+1 for k >= 2",
                pred: Box::new(|k| k.l <= 1 || low_span(k)),
            },
            all,
        ],
        3 => vec![
            Member {
                name: "H0high+H1high",
                symbol: "H_0^- + H_1^-",
                alt_symbol: "H_0^+ + H_1^+",
                description: "highest-weight ladders from m = -(2k+1) at k = 0, 1",
                pred: Box::new(|k| k.l <= 1 && high_span(k)),
            },
            h01_member(),
            Member {
                name: "H0+H1+Hhigh",
                symbol: "H_0 + H_1 + H^-",
                alt_symbol: "H_0 + H_1 + H^+",
                description: "levels k = 0, 1 plus the highest-weight ladders m <= -(2k+1) for k >= 2",
                pred: Box::new(|k| k.l <= 1 || high_span(k)),
            },
            all,
        ],
        _ => vec![h01_member(), all],
    }
}

/// Builds the window module and verifies each chain member and subquotient at the interior.
pub fn composition_series(q: u8, window: Window) -> Result<SeriesReport> {
    let window = Window::new(q, window.l_max, window.m_bound)?;
    let module = build_truncated(window)?;
    let members = chain_for(window.q);

    let mut chain = Vec::new();
    for mem in &members {
        let inv = verify_invariance(&module, &mem.pred);
        chain.push(ChainMember {
            name: mem.name.into(),
            symbol: mem.symbol.into(),
            alt_symbol: mem.alt_symbol.into(),
            description: mem.description.into(),
            dim_in_window: module.basis.iter().filter(|k| (mem.pred)(k)).count(),
            invariant: inv.invariant,
            violations: inv.violations,
        });
    }

    let mut subquotients = Vec::new();
    for (i, mem) in members.iter().enumerate() {
        let rep = if i == 0 {
            verify_irreducible_quotient(&module, &mem.pred, |_| false)
        } else {
            verify_irreducible_quotient(&module, &mem.pred, &members[i - 1].pred)
        };
        let name = if i == 0 { mem.name.to_string() } else { format!("{}/{}", mem.name, members[i - 1].name) };
        subquotients.push(Subquotient {
            name,
            irreducible_interior: rep.strongly_connected,
            vertices: rep.vertices,
            unreachable: rep.unreachable,
        });
    }

    let extremal_weights: Vec<KTypeIndex> = (0..=window.l_max)
        .filter_map(|l| match detect_extremal(window.q, l) {
            Extremal::Lowest(m) | Extremal::Highest(m) => KTypeIndex::new(window.q, l, m).ok(),
            Extremal::None => None,
        })
        .filter(|k| window.contains(k))
        .collect();

    let labeling = match window.q {
        1 => "invariant one-sided span is m >= 2k+1 (lowest weights): H^+ when q = 1 pairs with +",
        3 => "invariant one-sided span is m <= -(2k+1) (highest weights): H^- when q = 3 pairs with -",
        _ => "no one-sided spans for even q",
    }
    .to_string();

    let boundary = module.boundary_mask.iter().filter(|b| **b).count();
    let boundary_caveats = vec![format!(
        "claims checked on {} interior basis vectors; {} boundary vectors have images leaving l <= {}, |m| <= {} and are excluded",
        module.dim() - boundary,
        boundary,
        window.l_max,
        window.m_bound
    )];
    let even_ok = window.q % 2 == 1 || extremal_weights.is_empty();
    let verified = even_ok
        && chain.iter().all(|c| c.invariant)
        && subquotients.iter().all(|s| s.irreducible_interior && s.vertices > 0);

    Ok(SeriesReport { q: window.q, window, chain, subquotients, extremal_weights, labeling, boundary_caveats, verified })
}

fn unit(j: usize) -> BTreeMap<usize, BigRational> {
    BTreeMap::from([(j, BigRational::one())])
}

fn escapes(module: &TruncatedModule, v: &BTreeMap<usize, BigRational>) -> bool {
    v.keys().any(|&j| !module.is_interior(j))
}

/// Exact matrix-level sl2 relations on interior columns whose two-step images stay interior:
/// [kappa, eta+-] = +-2 eta+-, [eta+, eta-] = kappa. Returns the failing (relation, column) pairs.
pub fn sl2_commutation_check(module: &TruncatedModule) -> Vec<(String, KTypeIndex)> {
    let mut failures = Vec::new();
    let m = |g| module.matrix(g);
    let two = BigRational::from_integer(BigInt::from(2));
    for j in 0..module.dim() {
        if !module.is_interior(j) {
            continue;
        }
        let e = unit(j);
        let mut check = |name: &str, a: GeneratorTag, b: GeneratorTag, rhs: BTreeMap<usize, BigRational>| {
            let (av, bv) = (m(a).apply(&e), m(b).apply(&e));
            if escapes(module, &av) || escapes(module, &bv) {
                return;
            }
            let mut lhs = m(a).apply(&bv);
            for (i, x) in m(b).apply(&av) {
                *lhs.entry(i).or_insert_with(BigRational::zero) -= x;
            }
            lhs.retain(|_, v| !v.is_zero());
            if lhs != rhs {
                failures.push((name.to_string(), module.basis[j]));
            }
        };
        let scaled = |g: GeneratorTag, c: &BigRational| {
            let mut v = m(g).apply(&e);
            v.values_mut().for_each(|x| *x *= c);
            v.retain(|_, x| !x.is_zero());
            v
        };
        check("[kappa, eta+] = 2 eta+", GeneratorTag::Kappa, GeneratorTag::EtaPlus, scaled(GeneratorTag::EtaPlus, &two));
        check("[kappa, eta-] = -2 eta-", GeneratorTag::Kappa, GeneratorTag::EtaMinus, scaled(GeneratorTag::EtaMinus, &-two.clone()));
        check("[eta+, eta-] = kappa", GeneratorTag::EtaPlus, GeneratorTag::EtaMinus, m(GeneratorTag::Kappa).apply(&e));
    }
    failures
}
