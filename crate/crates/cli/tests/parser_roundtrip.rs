//! parse . print = identity on canonical forms.

use proptest::prelude::*;
use tautring::rat::qi;
use tautring::ring::{Gen, RingContext};
use tautring::ClassExpr;
use tautring_cli::parser::{parse_expr, AtomPolicy};

fn arb_class(ctx: RingContext) -> impl Strategy<Value = ClassExpr> {
    let pool = ctx.catalog();
    let term = (
        prop::collection::vec((prop::sample::select(pool), 1..=2u32), 0..3),
        -6i64..=6,
        1i64..=4,
    );
    prop::collection::vec(term, 0..4).prop_map(move |terms| {
        let mut acc = ctx.zero();
        for (factors, num, den) in terms {
            let mut t = ctx.scalar(qi(num) / qi(den));
            for (g, e) in factors {
                t = t.mul(&ctx.gen(g).pow(e));
            }
            acc = acc.add(&t);
        }
        acc
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn round_trip_on_hilb(x in arb_class(RingContext::hilb(2, 3).unwrap())) {
        let printed = format!("{}", x);
        let back = parse_expr(&printed, &RingContext::hilb(2, 3).unwrap(), AtomPolicy::All).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn round_trip_on_linsys(x in arb_class(RingContext::hilb_times_linsys(2, 3).unwrap())) {
        let ctx = RingContext::hilb_times_linsys(2, 3).unwrap();
        let printed = format!("{}", x);
        let back = parse_expr(&printed, &ctx, AtomPolicy::All).unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn round_trip_on_incidence(x in arb_class(RingContext::incidence(2, 4).unwrap())) {
        let ctx = RingContext::incidence(2, 4).unwrap();
        let printed = format!("{}", x);
        let back = parse_expr(&printed, &ctx, AtomPolicy::All).unwrap();
        prop_assert_eq!(back, x);
    }
}

#[test]
fn pxi_and_gamma_atoms_evaluate() {
    let ctx = RingContext::hilb_times_linsys(2, 3).unwrap();
    let via_atom = parse_expr("Pxi", &ctx, AtomPolicy::All).unwrap();
    assert_eq!(via_atom, tautring::gamma::p_xi(2, 3));
    let via_atoms = parse_expr("gamma(0,2)^2 - xi^2", &ctx, AtomPolicy::All).unwrap();
    assert!(via_atoms.is_zero_expr());
    assert_eq!(parse_expr("xi", &ctx, AtomPolicy::All).unwrap(), ctx.gen(Gen::Xi));
}
