use num_traits::Zero;
use proptest::prelude::*;

use ramification::arith::{
    additive_char_depth, char_to_param_depth, norm_depth_image, norm_one_profile,
    param_to_char_depth, trace_depth_image, ExtensionSummary, Glyph,
};
use ramification::classical::{
    phi_from_classical, phi_to_classical, psi_from_classical, psi_to_classical,
};
use ramification::newton::{depth_multiset_from_polynomial, discriminant_valuation};
use ramification::pl::compose;
use ramification::random::{self, TowerSampler};
use ramification::rat::{from_u64, int, rat, Rat};
use ramification::{DepthMultiset, PlFunc};

fn sampler() -> &'static TowerSampler {
    static S: std::sync::OnceLock<TowerSampler> = std::sync::OnceLock::new();
    S.get_or_init(TowerSampler::new)
}

fn small_rat() -> impl Strategy<Value = Rat> {
    (0i64..200, 1i64..24).prop_map(|(a, b)| rat(a, b))
}

fn pl() -> impl Strategy<Value = PlFunc> {
    any::<u64>().prop_map(|s| random::pl_func(&mut random::rng(s)))
}

fn multiset() -> impl Strategy<Value = DepthMultiset> {
    any::<u64>().prop_map(|s| sampler().depth_function(&mut random::rng(s)).unwrap().multiset())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inverse_undoes_function(f in pl(), x in small_rat()) {
        let y = f.eval(&x).unwrap();
        prop_assert_eq!(f.invert().eval(&y).unwrap(), x);
        prop_assert!(compose(&f.invert(), &f).is_identity());
        prop_assert_eq!(f.invert().invert(), f);
    }

    #[test]
    fn composition_is_associative(f in pl(), g in pl(), h in pl(), x in small_rat()) {
        let left = compose(&compose(&f, &g), &h);
        let right = compose(&f, &compose(&g, &h));
        prop_assert_eq!(&left, &right);
        let direct = f.eval(&g.eval(&h.eval(&x).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(left.eval(&x).unwrap(), direct);
    }

    #[test]
    fn text_form_round_trips(f in pl()) {
        prop_assert_eq!(f.to_string().parse::<PlFunc>().unwrap(), f);
    }

    #[test]
    fn herbrand_function_shape(d in multiset(), x in small_rat()) {
        let phi = d.phi();
        prop_assert!(phi.is_concave());
        prop_assert!(d.psi().is_convex());
        let (ell, u) = d.ell_and_u();
        prop_assert_eq!(phi.eval(&ell).unwrap(), u);
        prop_assert!(phi.eval(&x).unwrap() >= x);
        prop_assert_eq!(d.compressed_different().is_zero(), ell.is_zero());
    }

    #[test]
    fn classical_conversion_round_trips(f in pl(), seed in any::<u64>()) {
        let ctx = random::classical_context(&mut random::rng(seed));
        prop_assert_eq!(phi_from_classical(&phi_to_classical(&f, &ctx), &ctx), f.clone());
        prop_assert_eq!(psi_from_classical(&psi_to_classical(&f, &ctx), &ctx), f.clone());
        prop_assert_eq!(psi_to_classical(&f.invert(), &ctx), phi_to_classical(&f, &ctx).invert());
    }

    #[test]
    fn norm_meets_trace_beyond_ell(d in multiset(), extra in small_rat()) {
        let ext = ExtensionSummary::from_multiset(&d, 1).unwrap();
        let s = &ext.ell + &extra + rat(1, 97);
        let (depth, surjective) = norm_depth_image(&s, &ext).unwrap();
        prop_assert!(surjective);
        prop_assert_eq!(depth, trace_depth_image(&s, &ext));
    }

    #[test]
    fn parameters_and_characters(d in multiset(), r in small_rat()) {
        let ext = ExtensionSummary::from_multiset(&d, 1).unwrap();
        let param = char_to_param_depth(&r, &ext).unwrap();
        prop_assert_eq!(param_to_char_depth(&param, &ext).unwrap(), r.clone());
        let wild = ext.ell > int(0);
        prop_assert_eq!(param > r, wild && r > int(0));
        prop_assert!(param >= r);
    }

    #[test]
    fn character_shifts_compose_in_towers(seed in any::<u64>(), base in small_rat()) {
        let t = sampler().tower(&mut random::rng(seed)).unwrap();
        let ext = |d: DepthMultiset| ExtensionSummary::from_multiset(&d, 1).unwrap();
        let le = ext(t.big().multiset());
        let lk = ext(t.kernel_function().multiset());
        let ke = ext(t.quotient_depth_function().unwrap().multiset());
        let stepwise = additive_char_depth(&additive_char_depth(&base, &ke), &lk);
        prop_assert_eq!(stepwise, additive_char_depth(&base, &le));
    }

    #[test]
    fn random_towers_satisfy_tower_laws(seed in any::<u64>()) {
        let t = sampler().tower(&mut random::rng(seed)).unwrap();
        for s in 0..t.big().order() {
            prop_assert_eq!(t.quotient_depth_sum(s), t.quotient_depth_max(s));
        }
        prop_assert!(t.herbrand_tower_check().unwrap());
        prop_assert!(t.different_additivity_check().unwrap());
        for s in t.sample_points().unwrap() {
            prop_assert!(t.exact_sequence_check(&s).unwrap().holds());
            prop_assert!(t.exact2_check(&s).unwrap());
        }
    }

    #[test]
    fn full_torus_pieces_count_integers(c2 in 1i64..8, k in 0i64..6) {
        let c = rat(c2, 2);
        let rows = norm_one_profile(&c, &(&c + int(k))).unwrap();
        let full = rows.iter().filter(|r| r.r > c && r.torus == Glyph::Full).count();
        prop_assert_eq!(full as i64, k);
        prop_assert!(rows.iter().filter(|r| r.r < c).all(|r| r.torus == Glyph::Empty));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn different_matches_discriminant(seed in any::<u64>()) {
        let f = random::eisenstein(&mut random::rng(seed), 5);
        let depths = depth_multiset_from_polynomial(&f, false).unwrap();
        let n = from_u64(f.degree() as u64);
        let d = depths.compressed_different() + int(1) - n.recip();
        prop_assert_eq!(n * d, from_u64(discriminant_valuation(&f).unwrap()));
        prop_assert!(depths.balls_consistent());
    }
}
