use ramification::arith::{norm_one_profile, profile_csv};
use ramification::classical::{classical_jumps, comparison_lemma_check};
use ramification::formats::{depth_function_text, multiset_text, parse_depth_function, parse_multiset};
use ramification::presets::{
    cyclotomic_function, cyclotomic_multiset, lmfdb_quaternion, preset, quaternion_catalog,
    serre_quaternion, standard_presets,
};
use ramification::random::{self, TowerSampler};
use ramification::rat::{int, rat};
use ramification::{Depth, DepthMultiset, ElementSet, TowerDatum};

#[test]
fn tame_layer_leaves_phi_unchanged() {
    for (p, n) in [(3u64, 2u32), (3, 3), (5, 2), (2, 4)] {
        let g = cyclotomic_function(p, n).unwrap();
        let wild = g.filtration_at(&rat(1, g.e_lf() as i64), false).unwrap();
        let t = TowerDatum::new(g.clone(), wild).unwrap();
        assert_eq!(t.kernel_function().phi(), g.phi(), "p={p} n={n}");
        assert!(t.quotient_depth_function().unwrap().phi().is_identity());
        assert!(comparison_lemma_check(&t, 1).unwrap());
    }
}

#[test]
fn quaternion_quotients() {
    let center = ElementSet::from_indices([0, 1]);
    let serre = TowerDatum::new(serre_quaternion(), center).unwrap();
    let quotient = serre.quotient_depth_function().unwrap().multiset();
    assert_eq!(
        quotient.entries(),
        &[(Depth::Finite(rat(1, 4)), 3), (Depth::Infinite, 1)]
    );
    // ±i sits at 3/8 in this catalog entry, and φ_{L/K}(3/8) = 3/4
    let lmfdb = TowerDatum::new(lmfdb_quaternion(), center).unwrap();
    let quotient = lmfdb.quotient_depth_function().unwrap().multiset();
    assert_eq!(
        quotient.entries(),
        &[
            (Depth::Finite(rat(1, 4)), 2),
            (Depth::Finite(rat(3, 4)), 1),
            (Depth::Infinite, 1)
        ]
    );
    for t in [&serre, &lmfdb] {
        assert!(t.lower_upper_restriction_checks().unwrap().all_passed());
        assert!(t.exact_sequence_check(&rat(1, 8)).unwrap().holds());
    }
    let at_eighth = serre.exact_sequence_check(&rat(1, 8)).unwrap();
    assert_eq!(at_eighth.sequences.len(), 5);
}

#[test]
fn upper_filtration_commutes_with_quotients() {
    let sampler = TowerSampler::new();
    let mut rng = random::rng(99);
    for _ in 0..200 {
        let t = sampler.tower(&mut rng).unwrap();
        let ke = t.quotient_depth_function().unwrap();
        for s in t.sample_points().unwrap() {
            let image = ElementSet::from_indices(
                t.big().upper_at(&s, false).unwrap().iter().map(|x| t.projection()[x]),
            );
            assert_eq!(image, ke.upper_at(&s, false).unwrap());
        }
    }
}

#[test]
fn classical_jumps_are_integers() {
    for p in standard_presets() {
        let d = &p.multiset;
        let jumps = classical_jumps(&d.jumps(), d.e_lf());
        assert!(jumps.iter().all(|j| j.is_integer()), "{}", p.name);
    }
    assert_eq!(
        classical_jumps(&serre_quaternion().jump_set(), 8),
        vec![int(1), int(3)]
    );
}

#[test]
fn catalog_exports_round_trip() {
    for entry in quaternion_catalog() {
        let text = depth_function_text(&entry.group);
        let back = parse_depth_function(&text).unwrap();
        assert_eq!(back.depths(), entry.group.depths());
        let m = multiset_text(&entry.group.multiset());
        assert_eq!(parse_multiset(&m, None, None).unwrap(), entry.group.multiset());
    }
}

#[test]
fn preset_phi_values() {
    let phi = preset("cyclotomic:3,4").unwrap().multiset.phi();
    assert_eq!(phi.eval(&rat(26, 54)).unwrap(), int(3));
    let d: DepthMultiset = cyclotomic_multiset(2, 3).unwrap();
    assert_eq!(d.ell_and_u(), (rat(3, 4), int(2)));
}

#[test]
fn profile_csv_for_three_halves() {
    let rows = norm_one_profile(&rat(3, 2), &int(5)).unwrap();
    let csv = profile_csv(&rows);
    let torus: Vec<&str> = csv.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(
        torus,
        ["empty", "empty", "empty", "half", "full", "empty", "full", "empty", "full", "empty", "full"]
    );
    assert!(csv.contains("\n3,full,full,full,half,9/2\n"));
}
