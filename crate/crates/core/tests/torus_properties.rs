use proptest::prelude::*;

use schur_core::arith::{binom, binom_mod_p_i64, Field, Prime};
use schur_core::torus::{interpolate, sigma_shift, to_grid, GridFunction, TorusAlgebraContext};

fn ctx_222() -> std::sync::Arc<TorusAlgebraContext> {
    TorusAlgebraContext::char_p(2, Prime::new(2).unwrap(), 2).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn interpolation_round_trips(values in proptest::collection::vec(0u64..2, 16)) {
        let ctx = ctx_222();
        let field = ctx.field();
        let f = GridFunction::from_values(&ctx, values.iter().map(|v| field.from_i64(*v as i64)).collect()).unwrap();
        let x = interpolate(&f);
        prop_assert_eq!(to_grid(&x), f);
    }

    #[test]
    fn grid_map_is_multiplicative(a in proptest::collection::vec(0u64..3, 9), b in proptest::collection::vec(0u64..3, 9)) {
        let ctx = TorusAlgebraContext::char_p(2, Prime::new(3).unwrap(), 1).unwrap();
        let field = ctx.field();
        let fa = GridFunction::from_values(&ctx, a.iter().map(|v| field.from_i64(*v as i64)).collect()).unwrap();
        let fb = GridFunction::from_values(&ctx, b.iter().map(|v| field.from_i64(*v as i64)).collect()).unwrap();
        let prod = interpolate(&fa).multiply(&interpolate(&fb)).unwrap();
        prop_assert_eq!(to_grid(&prod), fa.pointwise_mul(&fb).unwrap());
    }

    #[test]
    fn sigma_is_evaluation_at_shifted_points(values in proptest::collection::vec(0u64..2, 16), s in 1i64..3) {
        let ctx = ctx_222();
        let field = ctx.field();
        let f = GridFunction::from_values(&ctx, values.iter().map(|v| field.from_i64(*v as i64)).collect()).unwrap();
        let x = interpolate(&f);
        let y = sigma_shift(&x, s).unwrap();
        for pt in ctx.points() {
            let shifted: Vec<i64> = pt.iter().map(|v| v + s).collect();
            prop_assert_eq!(y.evaluate(&pt).unwrap(), x.evaluate(&shifted).unwrap());
        }
    }

    #[test]
    fn fast_binomial_mod_p_matches_exact(a in -400i64..400, b in 0u64..60, p in prop::sample::select(vec![2u64, 3, 5, 7])) {
        let exact = Field::prime(p).unwrap().from_bigint(&binom(a, b));
        prop_assert_eq!(Field::prime(p).unwrap().from_i64(binom_mod_p_i64(a, b, p) as i64), exact);
    }
}
