use num_traits::Zero;
use proptest::prelude::*;

use polyrank::escape::ShearAutomorphism;
use polyrank::exact::{rat, GaussianRational, MultiPoly, PolyMap, Polydisc};
use polyrank::groebner::{normal_form, Ideal};
use polyrank::linalg;
use polyrank::pipeline::format::{default_vars, emit_poly, parse_poly};
use polyrank::rng::SplitMix64;
use polyrank::strata::rank_at;

const N: usize = 3;

fn coeff() -> impl Strategy<Value = GaussianRational> {
    (-4i64..=4, 1i64..=3, -2i64..=2, 1i64..=3).prop_map(|(a, b, c, d)| GaussianRational::from_parts(a, b, c, d))
}

fn poly(nvars: usize, max_exp: u32, max_terms: usize) -> impl Strategy<Value = MultiPoly> {
    prop::collection::vec((prop::collection::vec(0..=max_exp, nvars), coeff()), 0..=max_terms)
        .prop_map(move |terms| MultiPoly::from_terms(nvars, terms))
}

fn point(nvars: usize) -> impl Strategy<Value = Vec<GaussianRational>> {
    prop::collection::vec(coeff(), nvars)
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn ring_laws(f in poly(N, 2, 4), g in poly(N, 2, 4), h in poly(N, 2, 4)) {
        prop_assert_eq!(&f + &g, &g + &f);
        prop_assert_eq!(&f * &g, &g * &f);
        prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
        prop_assert!((&f - &f).is_zero());
    }

    #[test]
    fn evaluation_is_a_homomorphism(f in poly(N, 2, 4), g in poly(N, 2, 4), z in point(N)) {
        let (fz, gz) = (f.eval(&z).unwrap(), g.eval(&z).unwrap());
        prop_assert_eq!((&f * &g).eval(&z).unwrap(), &fz * &gz);
        prop_assert_eq!((&f + &g).eval(&z).unwrap(), &fz + &gz);
    }

    #[test]
    fn sup_bound_dominates_samples(f in poly(2, 3, 5), seed in any::<u64>()) {
        let region = Polydisc::centered(2, rat(1, 1)).unwrap();
        let bound = f.sup_bound(&region).unwrap();
        let mut rng = SplitMix64::new(seed);
        for _ in 0..8 {
            let v = f.eval(&region.sample_point(&mut rng)).unwrap();
            prop_assert!(v.norm_sqr() <= &bound * &bound);
        }
    }

    #[test]
    fn printed_polynomials_parse_back(f in poly(N, 3, 5)) {
        let vars = default_vars(N);
        prop_assert_eq!(parse_poly(&emit_poly(&f, &vars), &vars).unwrap(), f);
    }

    #[test]
    fn shears_invert(g1 in poly(2, 3, 3), g2 in poly(2, 3, 3), z in point(2)) {
        // shifts may only use the coordinates they do not move
        let only = |g: &MultiPoly, keep: usize| MultiPoly::from_terms(2, g.terms().iter().filter(|(m, _)| m.0[1 - keep] == 0).map(|(m, c)| (m.0.clone(), c.clone())));
        let psi = ShearAutomorphism::identity(2).then(1, only(&g1, 0)).unwrap().then(0, only(&g2, 1)).unwrap();
        let back = psi.inverse().apply_point(&psi.apply_point(&z).unwrap()).unwrap();
        prop_assert_eq!(back, z);
        prop_assert!(psi.as_map().compose(&psi.inverse().as_map()).unwrap().is_identity());
    }

    #[test]
    fn generators_reduce_to_zero(gens in prop::collection::vec(poly(2, 2, 3), 1..=3)) {
        let ideal = Ideal::new(2, gens.clone()).unwrap();
        for g in &gens {
            prop_assert!(normal_form(g, ideal.groebner_basis()).is_zero());
        }
    }

    #[test]
    fn dimension_ignores_order_and_scaling(gens in prop::collection::vec(poly(2, 2, 3), 1..=3), c in coeff()) {
        prop_assume!(!c.is_zero());
        let a = Ideal::new(2, gens.clone()).unwrap().dimension();
        let mut rev: Vec<_> = gens.iter().map(|g| g.scale(&c)).collect();
        rev.reverse();
        prop_assert_eq!(Ideal::new(2, rev).unwrap().dimension(), a);
    }

    #[test]
    fn rank_is_transpose_invariant(rows in prop::collection::vec(prop::collection::vec(coeff(), 3), 1..=4)) {
        let t: Vec<Vec<_>> = (0..3).map(|j| rows.iter().map(|r| r[j].clone()).collect()).collect();
        prop_assert_eq!(linalg::rank(&rows), linalg::rank(&t));
    }

    #[test]
    fn shears_preserve_rank(z in point(2), g in poly(1, 3, 3)) {
        let z1 = MultiPoly::var(2, 0);
        let z2 = MultiPoly::var(2, 1);
        let f = PolyMap::new(2, vec![z1.pow(2), z2.pow(2), &z1 * &z2]).unwrap();
        let shift = g.relabel(2, &[0]);
        let psi = ShearAutomorphism::identity(2).then(1, shift).unwrap();
        let pulled = psi.apply_map(&f).unwrap();
        prop_assert_eq!(rank_at(&pulled, &z).unwrap(), rank_at(&f, &psi.apply_point(&z).unwrap()).unwrap());
    }
}
