use lndkit::embedding::{injectivity_test, Method};
use lndkit::field::Field;
use lndkit::ideal::{algebra_map_kernel, kernel_is_trivial, Ideal, RingPresentation};
use lndkit::poly::{jacobian_rank, MonomialOrder, Poly, PolyRing};
use proptest::prelude::*;

fn build(r: &PolyRing, ts: &[(Vec<u32>, i64)]) -> Poly {
    r.from_terms(ts.iter().map(|(m, c)| (m.clone(), r.field().from_int(*c))))
}

fn arb(nvars: usize) -> impl Strategy<Value = Vec<(Vec<u32>, i64)>> {
    proptest::collection::vec((proptest::collection::vec(0u32..4, nvars), -5i64..6), 0..6)
}

fn fixtures() -> Vec<Ideal> {
    let r = PolyRing::new(&Field::rationals(), &["x", "y", "z"]).unwrap();
    vec![
        Ideal::parse(&r, &["x*y + z^2 + 1"]).unwrap(),
        Ideal::parse(&r, &["x^2 + y^2", "x*y"]).unwrap(),
        Ideal::parse(&r, &["y - x^2", "z - x^3"]).unwrap(),
        Ideal::parse(&r, &["x^2 + y^2 + z^2 + 1"]).unwrap(),
    ]
}

#[test]
fn generators_reduce_to_zero_under_every_order() {
    for i in fixtures() {
        for ord in [MonomialOrder::grevlex(), MonomialOrder::lex(), MonomialOrder::elimination(3, &[0])] {
            for g in i.generators() {
                assert!(i.normal_form_with(g, &ord).unwrap().is_zero());
            }
            let gb = i.groebner(&ord).unwrap();
            for p in gb.polys() {
                assert!(i.member(&p).unwrap());
            }
        }
    }
}

#[test]
fn kernel_verdict_matches_jacobian() {
    let b = RingPresentation::parse(&Field::rationals(), &["x", "y", "z"], &["x*y + z^2 + 1"]).unwrap();
    let t = PolyRing::new(&Field::rationals(), &["X1", "X2"]).unwrap();
    let cases: Vec<[&str; 3]> = vec![
        ["1 + X2^2", "-1 + 2*X1*X2 - X1^2 - X1^2*X2^2", "X1 - X2 + X1*X2^2"],
        ["1", "-1 - X1^2", "X1"],
        ["X1^2 + 1", "-1", "X1"],
        ["1", "-1", "0"],
    ];
    for case in cases {
        let imgs: Vec<Poly> = case.iter().map(|s| t.parse(s).unwrap()).collect();
        let rel = b.relations()[0].substitute(&imgs).unwrap();
        assert!(rel.is_zero());
        let ker = algebra_map_kernel(&b, &imgs, &Ideal::zero(&t)).unwrap();
        let by_kernel = kernel_is_trivial(&b, &ker).unwrap();
        let by_rank = jacobian_rank(&imgs).unwrap() == 2;
        assert_eq!(by_kernel, by_rank, "{case:?}");
        assert_eq!(injectivity_test(&b, &imgs, Method::Both).unwrap().injective, by_rank);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn normal_form_invariants(idx in 0usize..4, f in arb(3), g in arb(3)) {
        let i = &fixtures()[idx];
        let r = i.ring().clone();
        let (f, g) = (build(&r, &f), build(&r, &g));
        let nf = |p: &Poly| i.normal_form(p).unwrap();
        prop_assert_eq!(nf(&(&f + &g)), nf(&(&nf(&f) + &nf(&g))));
        prop_assert_eq!(nf(&nf(&f)), nf(&f));
        prop_assert!(i.member(&(&f - &nf(&f))).unwrap());
        for gen in i.generators() {
            prop_assert!(i.member(&(gen * &f)).unwrap());
        }
    }

    #[test]
    fn grevlex_and_lex_agree_on_membership(idx in 0usize..4, f in arb(3)) {
        let i = &fixtures()[idx];
        let f = build(i.ring(), &f);
        let a = i.normal_form_with(&f, &MonomialOrder::grevlex()).unwrap().is_zero();
        let b = i.normal_form_with(&f, &MonomialOrder::lex()).unwrap().is_zero();
        prop_assert_eq!(a, b);
    }
}
