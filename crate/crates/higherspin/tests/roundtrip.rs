//! Property tests for the text exchange formats: rendering then parsing is
//! the identity, bit-exact on canonical forms.

use proptest::prelude::*;

use higherspin::clifford::{Blade, Multivector};
use higherspin::scalar::rat;
use higherspin::weighted::{Var, WeightedFunction};

type Wf = WeightedFunction;

fn arb_coeff() -> impl Strategy<Value = (i64, i64)> {
    (-20i64..=20, 1i64..=9)
}

fn arb_multivector(m: u32) -> impl Strategy<Value = Multivector> {
    prop::collection::vec((0u32..(1 << m), arb_coeff()), 0..5).prop_map(move |entries| {
        let mut out = Multivector::zero(m);
        for (mask, (n, d)) in entries {
            out = out.add(&Multivector::blade(m, Blade::from_mask(mask), rat(n, d)));
        }
        out
    })
}

fn arb_weighted(m: u32) -> impl Strategy<Value = Wf> {
    let term = (
        arb_multivector(m),
        prop::collection::vec(0u32..3, 3 * m as usize),
        -4i32..=4,
    );
    prop::collection::vec(term, 0..6).prop_map(move |terms| {
        let mut out = Wf::zero(m);
        for (coeff, exps, weight) in terms {
            let mut idx = higherspin::weighted::MultiIndex::empty(m);
            for (slot, e) in exps.iter().enumerate() {
                let axis = (slot % m as usize) + 1;
                let var = match slot / m as usize {
                    0 => Var::X(axis),
                    1 => Var::U(axis),
                    _ => Var::V(axis),
                };
                idx = idx.with_exponent(var, *e);
            }
            out = out.add(&Wf::term(m, weight, idx, coeff));
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn multivector_round_trip(mv in arb_multivector(4)) {
        let text = mv.render();
        let back = Multivector::parse(&text, 4).unwrap();
        prop_assert_eq!(&back, &mv);
        prop_assert_eq!(back.render(), text);
    }

    #[test]
    fn weighted_function_round_trip(f in arb_weighted(3)) {
        let text = f.render();
        let back = Wf::parse(&text, 3).unwrap();
        prop_assert_eq!(&back, &f);
        // Bit-exact stability of the canonical rendering.
        prop_assert_eq!(back.render(), text);
    }

    #[test]
    fn canonicalization_is_idempotent(f in arb_weighted(3)) {
        let once = f.canonical();
        let twice = once.canonical();
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(once.render(), twice.render());
    }

    #[test]
    fn addition_commutes_with_canonicalization(f in arb_weighted(3), g in arb_weighted(3)) {
        let direct = f.add(&g);
        let canon_first = f.canonical().add(&g.canonical());
        prop_assert_eq!(direct, canon_first);
    }
}
