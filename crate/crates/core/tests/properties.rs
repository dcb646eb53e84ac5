mod common;

use common::{abs_norm, hilbert_bruteforce, simple_field, trace_form};
use framed_mw::algebra::{Elem, Field, Poly, Rat};
use framed_mw::bridge::{phi, roundtrip_check};
use framed_mw::corr::moves::move_split_roots;
use framed_mw::corr::{AxisSpec, CorrTerm, FormalCorr};
use framed_mw::gw::{gw_equal, GwElem};
use framed_mw::lang::{parse_expr, parse_stmt};
use framed_mw::mw::{milnor_equal, mw_equal, transfer, MilnorElem, MwElem};
use framed_mw::quadform::{hilbert_symbol, isometric, witt_equal, Decision, DiagForm, Place};
use proptest::prelude::*;

fn q() -> Field {
    Field::rationals()
}

fn qr(n: i64, d: i64) -> Elem {
    q().from_rat(&Rat::new(n.into(), d.into()))
}

fn form(a: &Elem) -> GwElem {
    GwElem::one_form(a).unwrap()
}

fn nonzero(b: i64) -> impl Strategy<Value = i64> {
    (-b..=b).prop_filter("nonzero", |v| *v != 0)
}

fn rational() -> impl Strategy<Value = Elem> {
    (nonzero(40), 1i64..=12).prop_map(|(n, d)| qr(n, d))
}

fn place() -> impl Strategy<Value = Option<u64>> {
    prop_oneof![Just(None), Just(Some(2)), Just(Some(3)), Just(Some(5)), Just(Some(7)), Just(Some(11))]
}

fn to_place(p: Option<u64>) -> Place {
    p.map(|p| Place::prime(p).unwrap()).unwrap_or(Place::Real)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gw_sum_relation(a in rational(), b in rational()) {
        let s = a.add(&b);
        prop_assume!(!s.is_zero());
        let l = form(&a).add(&form(&b));
        let r = form(&s).add(&form(&s.mul(&a).mul(&b)));
        prop_assert_eq!(gw_equal(&l, &r).unwrap(), Decision::Equal);
    }

    #[test]
    fn squares_do_not_change_a_form(a in rational(), b in rational()) {
        prop_assert_eq!(gw_equal(&form(&a.mul(&b).mul(&b)), &form(&a)).unwrap(), Decision::Equal);
    }

    #[test]
    fn hilbert_matches_search(a in nonzero(60), b in nonzero(60), p in place()) {
        let got = hilbert_symbol(&Rat::from_integer(a.into()), &Rat::from_integer(b.into()), &to_place(p)).unwrap();
        prop_assert_eq!(got, hilbert_bruteforce(a, b, p));
    }

    #[test]
    fn hilbert_is_bimultiplicative(a in nonzero(30), b in nonzero(30), c in nonzero(30), p in place()) {
        let h = |x: i64, y: i64| hilbert_symbol(&Rat::from_integer(x.into()), &Rat::from_integer(y.into()), &to_place(p)).unwrap();
        prop_assert_eq!(h(a * b, c), h(a, c) * h(b, c));
        prop_assert_eq!(h(a, b), h(b, a));
    }

    #[test]
    fn isometry_implies_witt_equivalence(a in proptest::collection::vec(nonzero(12), 1..4), b in proptest::collection::vec(nonzero(12), 1..4)) {
        let f = DiagForm::from_ints(&a).unwrap();
        let g = DiagForm::from_ints(&b).unwrap();
        if isometric(&f, &g).unwrap() == Decision::Equal {
            prop_assert_eq!(witt_equal(&f, &g).unwrap(), Decision::Equal);
        }
        // cancelling a hyperbolic plane keeps the Witt class
        let fh = f.orth_sum(&DiagForm::hyperbolic(&q(), 1));
        prop_assert_eq!(witt_equal(&fh, &f).unwrap(), Decision::Equal);
    }

    #[test]
    fn steinberg(a in rational()) {
        prop_assume!(!a.is_one());
        let s = MwElem::symbol(&q(), &[a.clone(), q().one().sub(&a)]).unwrap();
        prop_assert_eq!(mw_equal(&s, &MwElem::zero(&q(), 2)).unwrap(), Decision::Equal);
    }

    #[test]
    fn eta_h_vanishes(a in rational()) {
        let x = MwElem::symbol(&q(), &[a]).unwrap().mul(&MwElem::eta(&q())).unwrap();
        let z = x.gw_mul(&GwElem::h(&q()));
        prop_assert_eq!(mw_equal(&z, &MwElem::zero(&q(), 0)).unwrap(), Decision::Equal);
    }

    #[test]
    fn phi_inverts_psi(u in rational(), entries in proptest::collection::vec(rational(), 0..4), neg in any::<bool>()) {
        let x = MwElem::symbol(&q(), &entries).unwrap().gw_mul(&form(&u));
        let x = if neg { x.neg() } else { x };
        prop_assert_eq!(roundtrip_check(&x).unwrap(), Decision::Equal);
    }

    #[test]
    fn transfer_of_a_form_is_the_trace_form(c0 in nonzero(9), c1 in -4i64..=4, cubic in any::<bool>(), b0 in nonzero(5), b1 in -3i64..=3) {
        let coeffs = if cubic { vec![c0, c1, 0, 1] } else { vec![c0, c1, 1] };
        let minpoly = Poly::from_ints(&q(), &coeffs);
        prop_assume!(framed_mw::algebra::is_irreducible(&minpoly).unwrap());
        let l = simple_field(&coeffs, "a");
        let beta = l.from_int(b0).add(&l.generator().mul(&l.from_int(b1)));
        let t = transfer(&MwElem::one_form(&beta).unwrap(), &q()).unwrap().as_gw().unwrap();
        prop_assert_eq!(gw_equal(&t, &trace_form(&beta)).unwrap(), Decision::Equal);
    }

    #[test]
    fn transfer_reduces_to_the_norm(c0 in nonzero(9), b0 in nonzero(5), b1 in nonzero(3)) {
        let coeffs = vec![c0, 0, 1];
        prop_assume!(framed_mw::algebra::is_irreducible(&Poly::from_ints(&q(), &coeffs)).unwrap());
        let l = simple_field(&coeffs, "a");
        let g = l.from_int(b0).add(&l.generator().mul(&l.from_int(b1)));
        let t = transfer(&MwElem::symbol(&l, &[g.clone()]).unwrap(), &q()).unwrap();
        let n = MilnorElem::new(&q(), 1, vec![(1, vec![q().from_rat(&abs_norm(&g))])]);
        prop_assert_eq!(milnor_equal(&t.to_milnor(), &n).unwrap(), Decision::Equal);
    }

    #[test]
    fn split_roots_keeps_the_value(roots in proptest::collection::btree_set(-6i64..=6, 1..4), lead in nonzero(5)) {
        let mut f = Poly::constant(&q(), &q().from_int(lead));
        for r in &roots {
            f = f.mul(&Poly::linear(&q().from_int(*r)));
        }
        let t = CorrTerm::new(&q(), &q(), vec![AxisSpec::point(f).unwrap()]).unwrap();
        let tr = move_split_roots(&t, 0).unwrap();
        let c = tr.certify().unwrap();
        prop_assert!(c.degree_preserved);
        prop_assert_eq!(c.phi_preserved, Some(Decision::Equal));
        let before = phi(&FormalCorr::from_term(t)).unwrap();
        prop_assert_eq!(mw_equal(&before, &phi(&tr.after).unwrap()).unwrap(), Decision::Equal);
    }
}

fn expr_source() -> impl Strategy<Value = String> {
    let leaf = prop_oneof![
        (0i64..20).prop_map(|n| n.to_string()),
        Just("x".to_string()),
        Just("h".to_string()),
        Just("eta".to_string()),
        (nonzero(9)).prop_map(|n| format!("<{}>", n)),
        proptest::collection::vec(nonzero(9), 1..3).prop_map(|v| format!(
            "[{}]",
            v.iter().map(|n| n.to_string()).collect::<Vec<_>>().join(", ")
        )),
    ];
    leaf.prop_recursive(4, 24, 3, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone(), prop_oneof![Just("+"), Just("-"), Just("*"), Just("/")])
                .prop_map(|(a, b, op)| format!("({}) {} ({})", a, op, b)),
            inner.clone().prop_map(|a| format!("-({})", a)),
            (inner.clone(), 0u32..4).prop_map(|(a, e)| format!("({})^{}", a, e)),
            (inner.clone(), inner).prop_map(|(a, b)| format!("equal({}, {})", a, b)),
        ]
    })
}

proptest! {
    #[test]
    fn printed_expressions_reparse(src in expr_source()) {
        let e = parse_expr(&src).unwrap();
        let printed = e.to_string();
        prop_assert_eq!(parse_expr(&printed).unwrap(), e);
    }

    #[test]
    fn printed_statements_reparse(name in "[a-w][a-z]{0,3}", src in expr_source()) {
        prop_assume!(!["eta", "let", "corr", "axis", "over", "excl", "h", "x", "t", "inf", "point", "coord", "const", "target"].contains(&name.as_str()));
        let line = format!("let {} = {}", name, src);
        let s = parse_stmt(&line).unwrap().unwrap();
        prop_assert_eq!(parse_stmt(&s.to_string()).unwrap().unwrap(), s);
    }
}
