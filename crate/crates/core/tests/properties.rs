//! Property tests for the algebraic invariants: ring laws, the completion
//! being a ring map with ultrametric valuations, Laurent clearing, the
//! palindromic symmetry of tower determinants, and Smith form consistency.

use num_bigint::BigInt;
use proptest::prelude::*;

use cayley_tower::cyclo::padic::{exact_valuation, padic_context};
use cayley_tower::cyclo::{euler_phi, CyclotomicInteger};
use cayley_tower::graphs::{cayley_graph, BetaAssignment, Multigraph};
use cayley_tower::groups::{build_group, full_connection_set};
use cayley_tower::iwasawa::tower_determinant;
use cayley_tower::report::{SerializedCyclotomic, SerializedPadic};
use cayley_tower::xlaurent::XLaurent;

fn cyclotomic(m: u64) -> impl Strategy<Value = CyclotomicInteger> {
    let phi = euler_phi(m) as usize;
    proptest::collection::vec(-50i64..=50, phi).prop_map(move |coeffs| {
        let mut acc = CyclotomicInteger::zero(m);
        for (i, c) in coeffs.into_iter().enumerate() {
            let term = CyclotomicInteger::root_of_unity(i as i64, m).mul_int(&BigInt::from(c));
            acc = acc.add(&term);
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn cyclotomic_ring_laws(
        a in cyclotomic(12),
        b in cyclotomic(12),
        c in cyclotomic(12),
    ) {
        prop_assert_eq!(a.add(&b).sub(&b), a.clone());
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b.mul(&c)), a.mul(&b).mul(&c));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        // conjugation is an involutive ring map
        prop_assert_eq!(a.conj().conj(), a.clone());
        prop_assert_eq!(a.mul(&b).conj(), a.conj().mul(&b.conj()));
        // galois twists are multiplicative
        let ta = a.galois_twist(5).unwrap();
        let tb = b.galois_twist(5).unwrap();
        prop_assert_eq!(a.mul(&b).galois_twist(5).unwrap(), ta.mul(&tb));
    }

    #[test]
    fn completion_is_a_ring_map_with_ultrametric(
        a in cyclotomic(5),
        b in cyclotomic(5),
    ) {
        let ctx = padic_context(2, 5, 48).unwrap();
        let ra = ctx.reduce(&a).unwrap();
        let rb = ctx.reduce(&b).unwrap();
        prop_assert_eq!(ctx.reduce(&a.add(&b)).unwrap(), ctx.add(&ra, &rb));
        prop_assert_eq!(ctx.reduce(&a.mul(&b)).unwrap(), ctx.mul(&ra, &rb));

        let mut mctx = ctx.clone();
        let va = exact_valuation(&mut mctx, &a).unwrap();
        let vb = exact_valuation(&mut mctx, &b).unwrap();
        let vs = exact_valuation(&mut mctx, &a.add(&b)).unwrap();
        match (va, vb, vs) {
            (Some(x), Some(y), Some(z)) => {
                prop_assert!(z >= x.min(y));
                if x != y {
                    prop_assert_eq!(z, x.min(y));
                }
            }
            (Some(_), Some(_), None) => {} // exact cancellation
            (None, _, _) => prop_assert_eq!(vs, vb),
            (_, None, _) => prop_assert_eq!(vs, va),
        }
        // v(ell * x) = 1 + v(x)
        if let Some(x) = va {
            let doubled = a.mul_int(&BigInt::from(2));
            prop_assert_eq!(exact_valuation(&mut mctx, &doubled).unwrap(), Some(x + 1));
        }
    }

    #[test]
    fn laurent_clearing_is_consistent(
        terms in proptest::collection::vec((-6i64..=6, -99i64..=99), 1..8),
        point in 2i64..6,
    ) {
        let mut q: XLaurent<BigInt> = XLaurent::zero();
        for (e, c) in terms {
            q = q.add(&XLaurent::monomial(e, BigInt::from(c)));
        }
        prop_assume!(!q.is_zero());
        let (poly, k) = q.clear_to_t_polynomial();
        let (value, k2) = q.eval_cleared(&BigInt::from(point));
        prop_assert_eq!(k, k2);
        // Horner in T = point - 1 agrees with direct evaluation in x = point
        let t = BigInt::from(point - 1);
        let horner = poly.iter().rev().fold(BigInt::from(0), |acc, c| acc * &t + c);
        prop_assert_eq!(value, horner);
        // (mu, lambda) do not depend on extra clearing: multiplying by x
        // shifts the Laurent polynomial but not the invariants
        let data_a = cayley_tower::iwasawa::integer_invariants(&poly, 3);
        let (poly_b, _) = q.shift(1).clear_to_t_polynomial();
        let data_b = cayley_tower::iwasawa::integer_invariants(&poly_b, 3);
        match (data_a, data_b) {
            (Some((mu_a, _)), Some((mu_b, _))) => prop_assert_eq!(mu_a, mu_b),
            (a, b) => prop_assert_eq!(a, b),
        }
    }

    #[test]
    fn tower_determinants_are_palindromic(
        v1 in -3i64..=3,
        v2 in -3i64..=3,
    ) {
        let group = build_group("cyclic:6").unwrap();
        let s = full_connection_set(&group).unwrap();
        let beta =
            BetaAssignment::from_entries(&group, &s, &[(1, v1), (2, v2)]).unwrap();
        let graph = cayley_graph(&group, &s);
        let alpha = beta.voltage(&group, &graph);
        let det = tower_determinant(&graph, &alpha);
        for (e, c) in det.terms() {
            prop_assert_eq!(det.coeff(-e), Some(c));
        }
    }

    #[test]
    fn smith_chain_and_determinant(
        entries in proptest::collection::vec(-20i64..=20, 16),
    ) {
        let m: Vec<Vec<BigInt>> = entries
            .chunks(4)
            .map(|row| row.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        let factors = cayley_tower::graphs::snf::smith_normal_form(m.clone());
        for w in factors.windows(2) {
            prop_assert!(num_integer::Integer::mod_floor(&w[1], &w[0]) == BigInt::from(0));
        }
        let det = cayley_tower::polydet::bareiss_det(m);
        if det != BigInt::from(0) {
            let prod: BigInt = factors.iter().product();
            prop_assert_eq!(prod, num_traits::Signed::abs(&det));
        }
    }

    #[test]
    fn graph_exchange_round_trip(
        edges in proptest::collection::vec((0usize..6, 0usize..6), 1..12),
    ) {
        let graph = Multigraph::from_undirected_edges(6, &edges);
        let json = graph.to_exchange_json();
        let back = Multigraph::from_exchange_json(&json).unwrap();
        prop_assert_eq!(back, graph);
    }
}

#[test]
fn serialization_shapes() {
    // {"m": ..., "coeffs": [...]} for cyclotomic integers
    let z = CyclotomicInteger::root_of_unity(1, 4).mul_int(&BigInt::from(-7));
    let s = serde_json::to_value(SerializedCyclotomic::of(&z)).unwrap();
    assert_eq!(s["m"], 4);
    assert_eq!(s["coeffs"][1], "-7");

    // {"ell": ..., "N": ..., "poly": [...]} for completion residues
    let ctx = padic_context(2, 3, 16).unwrap();
    let x = ctx.reduce(&CyclotomicInteger::root_of_unity(1, 3)).unwrap();
    let s = serde_json::to_value(SerializedPadic::of(&ctx, &x)).unwrap();
    assert_eq!(s["ell"], 2);
    assert_eq!(s["N"], 16);
    assert_eq!(s["poly"].as_array().unwrap().len(), 2);

    // {"nV": ..., "edges": [[o, t], ...]} for multigraphs
    let g = Multigraph::from_undirected_edges(3, &[(0, 1), (1, 2)]);
    let v: serde_json::Value = serde_json::from_str(&g.to_exchange_json()).unwrap();
    assert_eq!(v["nV"], 3);
    assert_eq!(v["edges"][1][1], 2);
}
