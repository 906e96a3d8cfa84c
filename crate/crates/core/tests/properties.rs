use num_complex::Complex64;
use proptest::prelude::*;
use sl2rep::hyperfun::{kummer_m, psi};
use sl2rep::ktypes::{
    admissible_indices, lambda_to_l, required_class, to_compact, to_noncompact, weights, KTypeIndex, PictureFunction,
};
use sl2rep::liealg::{ladder_terms, GeneratorTag, LadderConvention};
use sl2rep::structure::{build_truncated, Window};
use sl2rep::tdreduce::{gamma_map, solve_chi, Poly, PotentialSpec};
use sl2rep::weyl::{parse_weyl, GaussRat, Mono, Param, ParamPoly, WeylOperator};

fn coeff() -> impl Strategy<Value = ParamPoly> {
    (-4i64..=4, 1i64..=3, -2i64..=2, prop::option::of(0usize..6)).prop_map(|(n, d, im, p)| {
        let c = GaussRat::new(GaussRat::frac(n, d).re, GaussRat::int(im).re);
        let base = ParamPoly::constant(c);
        match p {
            Some(k) => base.mul(&ParamPoly::param(Param::ALL[k])),
            None => base,
        }
    })
}

fn operator() -> impl Strategy<Value = WeylOperator> {
    prop::collection::vec((0u32..=3, -3i32..=3, 0u32..=2, 0u32..=3, coeff()), 1..4).prop_map(|terms| {
        terms
            .into_iter()
            .fold(WeylOperator::zero(), |acc, (t, x, dt, dx, c)| acc.add(&WeylOperator::monomial(Mono::new(t, x, dt, dx), c)))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]
    #[test]
    fn associativity(a in operator(), b in operator(), c in operator()) {
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]
    #[test]
    fn jacobi(a in operator(), b in operator(), c in operator()) {
        let j = a.bracket(&b.bracket(&c)).add(&b.bracket(&c.bracket(&a))).add(&c.bracket(&a.bracket(&b)));
        prop_assert!(j.is_zero());
    }

    #[test]
    fn parser_round_trip(a in operator()) {
        let printed = a.to_string();
        let back = parse_weyl(&printed).map_err(|e| TestCaseError::fail(format!("{printed}: {e}")))?;
        prop_assert_eq!(back, a);
    }

    #[test]
    fn normalize_is_idempotent(a in operator(), b in operator()) {
        let n = a.mul(&b).normalize();
        prop_assert_eq!(n.normalize(), n.clone());
    }

    #[test]
    fn weights_are_admissible(q in 0u8..4, l in 0u32..12, lo in -40i64..0, span in 0i64..80) {
        let ws = weights(q, l, lo, lo + span);
        for m in &ws {
            prop_assert!(KTypeIndex::new(q, l, *m).is_ok());
        }
        let expected = (lo..=lo + span).filter(|m| m.rem_euclid(4) == required_class(q, l)).count();
        prop_assert_eq!(ws.len(), expected);
    }

    #[test]
    fn lambda_round_trip(l in 2u32..500) {
        let k = KTypeIndex { q: 0, l, m: 0 };
        prop_assert_eq!(lambda_to_l(&k.lambda()).unwrap(), vec![l]);
    }

    #[test]
    fn ladder_targets_stay_admissible(q in 0u8..4, l in 0u32..8, slot in 0usize..12, gen in 0usize..5) {
        let ws = weights(q, l, -25, 25);
        let idx = KTypeIndex::new(q, l, ws[slot % ws.len()]).unwrap();
        let g = GeneratorTag::MODULE[gen];
        for term in ladder_terms(g, &idx, LadderConvention::Verified).unwrap() {
            prop_assert!(KTypeIndex::new(term.target.q, term.target.l, term.target.m).is_ok());
            prop_assert!((term.target.l as i64 - l as i64).abs() <= 1);
        }
    }

    #[test]
    fn terminating_kummer(n in 0u32..6, b2 in 1u32..12, z in 0.0f64..8.0) {
        // a = -n truncates to a polynomial of degree n
        let (a, b) = (-(n as f64), b2 as f64 / 2.0);
        let mut term = 1.0;
        let mut sum = 1.0;
        for k in 0..n {
            term *= (a + k as f64) / (b + k as f64) * z / (k as f64 + 1.0);
            sum += term;
        }
        let v = kummer_m(a, b, z).unwrap().value.re;
        prop_assert!((v - sum).abs() <= 1e-12 * sum.abs().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(50))]
    #[test]
    fn picture_round_trip(q in 0u8..4, l in 0u32..5, slot in 0usize..6, th in -3.0f64..3.0, y in 0.05f64..2.5) {
        let ws = weights(q, l, -13, 13);
        let idx = KTypeIndex::new(q, l, ws[slot % ws.len()]).unwrap();
        prop_assume!((th.cos()).abs() > 1e-3);
        let big = PictureFunction::ktype(idx);
        let back = to_compact(&to_noncompact(&big).unwrap()).unwrap();
        let (a, b) = (back.eval(th, y).unwrap(), psi(&idx, th, y).unwrap());
        prop_assert!((a - b).norm() <= 1e-12 * b.norm().max(1.0));
    }

    #[test]
    fn theta_is_increasing(g2 in 0.0f64..1.5, g1 in -1.0f64..1.0) {
        let spec = PotentialSpec::new(Poly(vec![g2]), Poly(vec![g1]), Poly(vec![]), "0".parse().unwrap(), 0.8).unwrap();
        let cs = solve_chi(&spec, 2e-2).unwrap();
        let (lo, hi) = cs.valid_interval();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=40 {
            let t = lo + (hi - lo) * k as f64 / 40.0;
            let (th, _) = gamma_map(&cs, t, 0.3).unwrap();
            prop_assert!(th > prev);
            prev = th;
        }
    }
}

#[test]
fn module_matrices_close_on_interior() {
    for q in 0..4u8 {
        let m = build_truncated(Window::default_for(q)).unwrap();
        let all = admissible_indices(q, 6, 29);
        assert_eq!(m.dim(), all.len());
        for (j, k) in m.basis.iter().enumerate() {
            if !m.is_interior(j) {
                continue;
            }
            for g in GeneratorTag::MODULE {
                for (i, _) in &m.matrix(g).cols[j] {
                    assert!(all.contains(&m.basis[*i]), "{g} {k}");
                }
            }
        }
    }
}

#[test]
fn psi_is_finite_over_window() {
    for k in admissible_indices(1, 6, 21) {
        let v: Complex64 = psi(&k, 0.4, 1.7).unwrap();
        assert!(v.re.is_finite() && v.im.is_finite());
    }
}
