use super::*;
use crate::testutil::{rng, ZeroRng};
use proptest::prelude::*;

// composite of three 16-bit primes, the smallest shape the scheme uses;
// matrix entries are tiny, so pivots are always coprime to it
const N: u128 = 65521 * 65537 * 65539;

fn universe() -> AttributeUniverse {
    AttributeUniverse::new(vec!["a", "b", "c", "d", "e"], 4).unwrap()
}

fn leaf(n: &str) -> PolicyExpr {
    PolicyExpr::Leaf(n.into())
}

fn idx_set(u: &AttributeUniverse, names: &[&str]) -> BTreeSet<u32> {
    names.iter().map(|n| u.index_of(n).unwrap()).collect()
}

#[test]
fn single_leaf_compiles_to_unit_matrix() {
    let u = universe();
    let s = compile_policy(&leaf("a"), &u, N).unwrap();
    assert_eq!(s.rows(), 1);
    assert_eq!(s.cols(), 1);
    assert_eq!(s.row(0)[0].value(), 1);
    assert_eq!(s.rho(0).attr, u.index_of("a").unwrap());
    assert_eq!(s.rho(0).copy, 1);

    let omega = recon_coeffs(&s, &idx_set(&u, &["a"])).unwrap();
    assert_eq!(omega.len(), 1);
    assert_eq!(omega[&0].value(), 1);
}

#[test]
fn and_gate_splits_the_secret() {
    let u = universe();
    let expr = PolicyExpr::And(vec![leaf("a"), leaf("b")]);
    let s = compile_policy(&expr, &u, N).unwrap();
    assert_eq!((s.rows(), s.cols()), (2, 2));

    // both attributes reconstruct, each alone does not
    let omega = recon_coeffs(&s, &idx_set(&u, &["a", "b"])).unwrap();
    let mut acc = vec![Scalar::zero(N); 2];
    for (&i, w) in &omega {
        for c in 0..2 {
            acc[c] = acc[c].add(&w.mul(&s.row(i)[c]));
        }
    }
    assert_eq!(acc[0].value(), 1);
    assert!(acc[1].is_zero());
    assert!(matches!(
        recon_coeffs(&s, &idx_set(&u, &["a"])),
        Err(Error::NotAuthorized)
    ));
    assert!(matches!(
        recon_coeffs(&s, &idx_set(&u, &["b"])),
        Err(Error::NotAuthorized)
    ));
    // monotonicity: a superset keeps working
    assert!(satisfies(&s, &idx_set(&u, &["a", "b", "c"])).unwrap());
}

#[test]
fn or_gate_rows_each_span_the_secret() {
    let u = universe();
    let expr = PolicyExpr::Or(vec![leaf("a"), leaf("b")]);
    let s = compile_policy(&expr, &u, N).unwrap();
    assert_eq!(s.rows(), 2);
    for name in ["a", "b"] {
        let omega = recon_coeffs(&s, &idx_set(&u, &[name])).unwrap();
        let live: Vec<usize> = omega
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(&i, _)| i)
            .collect();
        assert_eq!(live.len(), 1, "{name} alone must use exactly its own row");
        assert_eq!(s.rho(live[0]).attr, u.index_of(name).unwrap());
    }
}

#[test]
fn duplicated_attributes_get_distinct_copies() {
    let u = universe();
    let expr = PolicyExpr::Or(vec![
        PolicyExpr::And(vec![leaf("a"), leaf("b")]),
        PolicyExpr::And(vec![leaf("a"), leaf("c")]),
    ]);
    let s = compile_policy(&expr, &u, N).unwrap();
    assert_eq!(s.dup(), 2);
    let mut seen = BTreeSet::new();
    for i in 0..s.rows() {
        assert!(seen.insert(s.rho(i)), "rho must be injective");
    }
}

#[test]
fn over_duplication_is_rejected() {
    let u = AttributeUniverse::new(vec!["a", "b"], 1).unwrap();
    let expr = PolicyExpr::Or(vec![leaf("a"), leaf("a")]);
    assert!(matches!(
        compile_policy(&expr, &u, N),
        Err(Error::Policy(_))
    ));
}

#[test]
fn unknown_attribute_and_bad_threshold() {
    let u = universe();
    assert!(matches!(
        compile_policy(&leaf("zz"), &u, N),
        Err(Error::UnknownAttribute(_))
    ));
    let bad = PolicyExpr::Threshold {
        k: 3,
        children: vec![leaf("a"), leaf("b")],
    };
    assert!(matches!(compile_policy(&bad, &u, N), Err(Error::Policy(_))));
    let bad = PolicyExpr::Threshold {
        k: 0,
        children: vec![leaf("a"), leaf("b")],
    };
    assert!(matches!(compile_policy(&bad, &u, N), Err(Error::Policy(_))));
}

#[test]
fn share_generation_examples() {
    let u = universe();
    let s = compile_policy(&leaf("a"), &u, N).unwrap();
    let mut r = rng(5);
    let sv = make_shares(&s, &Scalar::new(7, N), &mut r);
    assert_eq!(sv.shares(), &[Scalar::new(7, N)]);

    let s2 = compile_policy(&PolicyExpr::And(vec![leaf("a"), leaf("b")]), &u, N).unwrap();
    let sv = make_shares(&s2, &Scalar::zero(N), &mut ZeroRng);
    assert!(sv.shares().iter().all(Scalar::is_zero));
}

#[test]
fn reconstruction_identity_holds_on_random_instances() {
    let u = universe();
    let names: Vec<&str> = u.names().iter().map(String::as_str).collect();
    let mut r = rng(6);
    let mut tested = 0;
    while tested < 200 {
        let expr = random_policy(&mut r, &names, 3);
        let Ok(s) = compile_policy(&expr, &u, N) else {
            continue; // too much duplication for the configured universe
        };
        // pick a random subset; skip unsatisfying draws
        let mask = crate::math::random_below(&mut r, 32) as u32;
        let subset: Vec<&str> = names
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, n)| *n)
            .collect();
        if !expr.evaluate(&subset) {
            continue;
        }
        let set = idx_set(&u, &subset);
        let secret = Scalar::random(&mut r, N);
        let sv = make_shares(&s, &secret, &mut r);
        let omega = recon_coeffs(&s, &set).unwrap();
        let mut acc = Scalar::zero(N);
        for (&i, w) in &omega {
            acc = acc.add(&w.mul(&sv.shares()[i]));
        }
        assert_eq!(acc, secret);
        tested += 1;
    }
}

#[test]
fn satisfies_agrees_with_ast_on_all_subsets() {
    let u = universe();
    let names: Vec<&str> = u.names().iter().map(String::as_str).collect();
    let mut r = rng(7);
    let mut tested = 0;
    while tested < 200 {
        let expr = random_policy(&mut r, &names, 3);
        let Ok(s) = compile_policy(&expr, &u, N) else {
            continue;
        };
        for mask in 0u32..32 {
            let subset: Vec<&str> = names
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, n)| *n)
                .collect();
            let expected = expr.evaluate(&subset);
            let got = satisfies(&s, &idx_set(&u, &subset)).unwrap();
            assert_eq!(got, expected, "policy {expr} disagrees on {subset:?}");
        }
        tested += 1;
    }
}

#[test]
fn codec_round_trip() {
    let u = universe();
    let expr = parse_policy("(a AND b) OR 2of(c,d,e) OR (a AND c AND d)").unwrap();
    let s = compile_policy(&expr, &u, N).unwrap();
    let mut w = Writer::new();
    s.encode(&mut w);
    let bytes = w.into_bytes();
    let back = AccessStructure::decode(&mut Reader::new(&bytes), N).unwrap();
    assert_eq!(back, s);
    assert!(back.expr().is_none());
}

fn arb_policy() -> impl Strategy<Value = PolicyExpr> {
    let leaf = prop_oneof![
        Just(leaf("a")),
        Just(leaf("b")),
        Just(leaf("c")),
        Just(leaf("d")),
        Just(leaf("e")),
    ];
    leaf.prop_recursive(3, 24, 3, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 2..4).prop_map(PolicyExpr::And),
            prop::collection::vec(inner.clone(), 2..4).prop_map(PolicyExpr::Or),
            (prop::collection::vec(inner, 2..5), 1u32..4).prop_map(|(children, k)| {
                let k = k.min(children.len() as u32);
                PolicyExpr::Threshold { k, children }
            }),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn prop_matrix_semantics_match_ast(expr in arb_policy(), mask in 0u32..32) {
        let u = universe();
        let names: Vec<&str> = u.names().iter().map(String::as_str).collect();
        if let Ok(s) = compile_policy(&expr, &u, N) {
            let subset: Vec<&str> = names
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, n)| *n)
                .collect();
            let set = idx_set(&u, &subset);
            prop_assert_eq!(satisfies(&s, &set).unwrap(), expr.evaluate(&subset));
            // soundness: recon_coeffs never succeeds on unsatisfying sets
            if !expr.evaluate(&subset) {
                prop_assert!(matches!(recon_coeffs(&s, &set), Err(Error::NotAuthorized)));
            }
        }
    }
}
