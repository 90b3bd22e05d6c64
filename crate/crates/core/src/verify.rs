//! The acceptance suite: one pass/fail outcome per criterion, all exact.

use std::fmt;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::arith::{
    char_to_param_depth, norm_one_profile, param_to_char_depth, CosetDepthData, ExtensionSummary,
    Glyph,
};
use crate::classical::{phi_from_classical, phi_to_classical, ClassicalContext};
use crate::error::Result;
use crate::group::ElementSet;
use crate::newton::{
    cyclotomic_eisenstein, depth_multiset_from_polynomial, discriminant_valuation, EisensteinPoly,
    PolynomialDepths,
};
use crate::poly::IntPoly;
use crate::presets::{
    cyclotomic_function, cyclotomic_multiset, lmfdb_quaternion, serre_quaternion,
    standard_presets,
};
use crate::random::{self, TowerSampler};
use crate::rat::{fmt_rat, from_u64, int, rat, Rat};
use crate::ramgroup::DepthMultiset;
use crate::tower::{tfae_check, TowerDatum};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mark = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "[{mark}] {:>2} {}: {}", self.id, self.name, self.detail)
    }
}

/// Sizes of the randomized parts of the suite.
#[derive(Clone, Copy, Debug)]
pub struct SuiteConfig {
    pub seed: u64,
    pub towers: usize,
    pub eisenstein: usize,
    pub pl_funcs: usize,
    pub tfae_points: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: 20240501,
            towers: 1000,
            eisenstein: 10,
            pl_funcs: 100,
            tfae_points: 50,
        }
    }
}

fn outcome(id: u32, name: &'static str, r: Result<(bool, String)>) -> Outcome {
    match r {
        Ok((passed, detail)) => Outcome {
            id,
            name,
            passed,
            detail,
        },
        Err(e) => Outcome {
            id,
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn join(rs: &[Rat]) -> String {
    rs.iter().map(fmt_rat).collect::<Vec<_>>().join(" ")
}

pub fn cyclotomic_breakpoints() -> Result<(bool, String)> {
    let mut cases = 0;
    for p in [2u64, 3, 5] {
        for n in 1..=5u32 {
            let d = cyclotomic_multiset(p, n)?;
            let phi = d.phi();
            let e = from_u64(d.e_lf());
            for k in 0..n {
                let x = from_u64(p.pow(k) - 1) / &e;
                if phi.eval(&x)? != from_u64(k as u64) {
                    return Ok((false, format!("p={p} n={n}: φ({}) ≠ {k}", fmt_rat(&x))));
                }
            }
            let pn1 = from_u64(p.pow(n - 1));
            let ell = (&pn1 - Rat::one()) / (from_u64(p - 1) * &pn1);
            let expected = (ell, from_u64(n as u64 - 1));
            if d.ell_and_u() != expected {
                return Ok((false, format!("p={p} n={n}: (ℓ, u) mismatch")));
            }
            cases += 1;
        }
    }
    Ok((true, format!("{cases} cyclotomic fields")))
}

pub fn serre_quaternion_filtration() -> Result<(bool, String)> {
    let g = serre_quaternion();
    let jumps_ok = g.jump_set() == vec![rat(1, 8), rat(3, 8)];
    let all = g.group().all();
    let center = ElementSet::from_indices([0, 1]);
    let trivial = ElementSet::singleton(0);
    let mut upper_ok = true;
    for k in 0..=16 {
        let s = rat(k, 8);
        let expected = if s <= int(1) {
            all
        } else if s <= rat(3, 2) {
            center
        } else {
            trivial
        };
        upper_ok &= g.upper_at(&s, false)? == expected;
    }
    for s in [rat(1, 1000), int(1) + rat(1, 1000), rat(3, 2) + rat(1, 1000)] {
        let expected = if s <= int(1) {
            all
        } else if s <= rat(3, 2) {
            center
        } else {
            trivial
        };
        upper_ok &= g.upper_at(&s, false)? == expected;
    }
    Ok((
        jumps_ok && upper_ok,
        format!("lower jumps {}; upper {}", join(&g.jump_set()), join(&g.upper_jumps())),
    ))
}

pub fn lmfdb_quaternion_jumps() -> Result<(bool, String)> {
    let g = lmfdb_quaternion();
    let lower = g.jump_set();
    let upper = g.upper_jumps();
    let ok = lower == vec![rat(1, 8), rat(3, 8), rat(7, 8)]
        && upper == vec![int(1), int(2), int(3)]
        && upper.iter().all(|u| u.is_integer());
    Ok((ok, format!("lower {}; upper {}", join(&lower), join(&upper))))
}

pub fn newton_cyclotomic() -> Result<(bool, String)> {
    let mut ok = true;
    let mut slowest = Duration::ZERO;
    for (p, n) in [(2u64, 2u32), (2, 3), (3, 2), (3, 3)] {
        let start = Instant::now();
        let f = cyclotomic_eisenstein(p, n)?;
        let derived = match depth_multiset_from_polynomial(&f, true)? {
            PolynomialDepths::Galois(d) => d,
            PolynomialDepths::Aggregate { .. } => unreachable!("requested as Galois"),
        };
        slowest = slowest.max(start.elapsed());
        ok &= derived == cyclotomic_multiset(p, n)?;
    }
    ok &= slowest < Duration::from_secs(60);
    Ok((ok, format!("4 fields, slowest {:.1}s", slowest.as_secs_f64())))
}

fn different_matches_discriminant(f: &EisensteinPoly) -> Result<bool> {
    let depths = depth_multiset_from_polynomial(f, false)?;
    let n = from_u64(f.degree() as u64);
    let d = depths.compressed_different() + Rat::one() - n.recip();
    Ok(n * d == from_u64(discriminant_valuation(f)?))
}

pub fn different_consistency(count: usize, seed: u64) -> Result<(bool, String)> {
    let mut polys = vec![
        EisensteinPoly::new(IntPoly::from_i64(&[-2, 0, 1]), 2)?,
        EisensteinPoly::new(IntPoly::from_i64(&[2, -2, 1]), 2)?,
        cyclotomic_eisenstein(3, 2)?,
    ];
    let mut rng = random::rng(seed);
    polys.extend((0..count).map(|_| random::eisenstein(&mut rng, 8)));
    let results: Vec<bool> = polys
        .par_iter()
        .map(different_matches_discriminant)
        .collect::<Result<_>>()?;
    let bad = results.iter().filter(|b| !**b).count();
    Ok((bad == 0, format!("{} polynomials, {bad} mismatches", polys.len())))
}

/// The randomized towers shared by criteria 6–9.
pub fn random_towers(count: usize, seed: u64) -> Result<Vec<TowerDatum>> {
    let sampler = TowerSampler::new();
    let mut rng = random::rng(seed);
    (0..count).map(|_| sampler.tower(&mut rng)).collect()
}

pub fn two_formula_quotient(towers: &[TowerDatum]) -> Result<(bool, String)> {
    let mismatches: usize = towers
        .par_iter()
        .map(|t| {
            (0..t.big().order())
                .filter(|&s| t.quotient_depth_sum(s) != t.quotient_depth_max(s))
                .count()
        })
        .sum();
    let nontrivial = towers
        .iter()
        .filter(|t| t.kernel().len() > 1 && t.kernel() != t.big().group().all())
        .count();
    Ok((
        mismatches == 0 && towers.len() >= 1000,
        format!(
            "{} towers ({nontrivial} with proper nontrivial kernel), {mismatches} mismatches",
            towers.len()
        ),
    ))
}

pub fn exact_sequences(towers: &[TowerDatum]) -> Result<(bool, String)> {
    let counts: Vec<(usize, usize)> = towers
        .par_iter()
        .map(|t| -> Result<(usize, usize)> {
            let points = t.sample_points()?;
            let mut bad = 0;
            for s in &points {
                if !t.exact_sequence_check(s)?.holds() {
                    bad += 1;
                }
            }
            Ok((points.len(), bad))
        })
        .collect::<Result<_>>()?;
    let points: usize = counts.iter().map(|c| c.0).sum();
    let bad: usize = counts.iter().map(|c| c.1).sum();
    Ok((bad == 0, format!("{points} grid points, {bad} failures")))
}

pub fn herbrand_and_additivity(towers: &[TowerDatum]) -> Result<(bool, String)> {
    let bad: Vec<bool> = towers
        .par_iter()
        .map(|t| Ok(!(t.herbrand_tower_check()? && t.different_additivity_check()?)))
        .collect::<Result<_>>()?;
    let bad = bad.iter().filter(|b| **b).count();
    Ok((bad == 0, format!("{} towers, {bad} failures", towers.len())))
}

fn u_and_c_hold(d: &DepthMultiset) -> Result<bool> {
    let (ell, u) = d.ell_and_u();
    let c = d.compressed_different();
    if &u - &ell != c {
        return Ok(false);
    }
    let phi = d.phi();
    let mut points = vec![ell.clone(), &ell + rat(1, 7), &ell + int(3)];
    points.extend(phi.kinks().iter().map(|(x, _)| x.clone()).filter(|x| *x >= ell));
    for s in points {
        if phi.eval(&s)? != &s + &c {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn u_minus_ell(towers: &[TowerDatum]) -> Result<(bool, String)> {
    let mut multisets: Vec<DepthMultiset> =
        standard_presets().into_iter().map(|p| p.multiset).collect();
    let presets = multisets.len();
    for t in towers {
        multisets.push(t.big().multiset());
        multisets.push(t.kernel_function().multiset());
        multisets.push(t.quotient_depth_function()?.multiset());
    }
    let bad: Vec<bool> = multisets
        .par_iter()
        .map(|d| u_and_c_hold(d).map(|ok| !ok))
        .collect::<Result<_>>()?;
    let bad = bad.iter().filter(|b| **b).count();
    Ok((
        bad == 0,
        format!("{presets} presets + {} random, {bad} failures", multisets.len() - presets),
    ))
}

pub fn classical_round_trip(count: usize, seed: u64) -> Result<(bool, String)> {
    let mut rng = random::rng(seed);
    let mut ok = true;
    for _ in 0..count {
        let f = random::pl_func(&mut rng);
        let ctx = random::classical_context(&mut rng);
        ok &= phi_from_classical(&phi_to_classical(&f, &ctx), &ctx) == f;
    }
    let phi = cyclotomic_multiset(3, 2)?.phi();
    let classical = phi_to_classical(&phi, &ClassicalContext::new(1, 6)?);
    let cross = phi.eval(&rat(1, 3))? == int(1) && classical.eval(&int(2))? == int(1);
    Ok((ok && cross, format!("{count} functions; φ(1/3) = φ̃(2) = 1: {cross}")))
}

pub fn tfae_coherence(points: usize, seed: u64) -> Result<(bool, String)> {
    let mut rng = random::rng(seed);
    let mut evaluated = 0;
    let presets = standard_presets();
    for p in &presets {
        let d = &p.multiset;
        let (ell, u) = d.ell_and_u();
        let mut samples = vec![Rat::zero(), ell.clone(), u.clone()];
        samples.extend(d.upper_jumps());
        let max = u.ceil().to_integer().try_into().unwrap_or(0u64) + 2;
        while samples.len() < points {
            samples.push(random::grid_point(&mut rng, d.e_lf(), max));
        }
        samples.truncate(points);
        for s in &samples {
            tfae_check(d, s)?;
            evaluated += 1;
        }
    }
    Ok((
        true,
        format!("{} presets × {points} points = {evaluated} evaluations", presets.len()),
    ))
}

pub fn depth_transfer() -> Result<(bool, String)> {
    let ext = ExtensionSummary::from_multiset(&cyclotomic_multiset(3, 2)?, 1)?;
    let r = int(1);
    let d = char_to_param_depth(&r, &ext)?;
    let forward = d == rat(5, 3) && d == &r + &ext.c;
    let back = param_to_char_depth(&d, &ext)? == r;
    let composite = ext.psi().after(&ext.phi).is_identity();
    Ok((
        forward && back && composite,
        format!("depth 1 ↦ {}; ψ∘φ = id: {composite}", fmt_rat(&d)),
    ))
}

pub fn norm_one_profile_pattern() -> Result<(bool, String)> {
    let c = rat(3, 2);
    let rows = norm_one_profile(&c, &int(5))?;
    let mut ok = rows.len() == 11;
    for row in &rows {
        let expected = if row.r < c {
            Glyph::Empty
        } else if row.r == c {
            Glyph::Half
        } else if row.r.is_integer() {
            Glyph::Full
        } else {
            Glyph::Empty
        };
        ok &= row.torus == expected;
    }
    let pattern: String = rows
        .iter()
        .map(|r| match r.torus {
            Glyph::Empty => '.',
            Glyph::Half => 'o',
            Glyph::Full => '#',
        })
        .collect();
    Ok((ok, format!("T row {pattern}")))
}

pub fn weil_distribution() -> Result<(bool, String)> {
    let mut towers = Vec::new();
    for g in [serre_quaternion(), lmfdb_quaternion()] {
        for kernel in g.group().normal_subgroups() {
            towers.push(TowerDatum::new(g.clone(), kernel)?);
        }
    }
    let c = cyclotomic_function(3, 2)?;
    let wild = c.filtration_at(&rat(1, 3), false)?;
    towers.push(TowerDatum::new(c, wild)?);
    let mut ok = true;
    for t in &towers {
        ok &= CosetDepthData::from_tower(t)?.weil_distribution_check()?.all_passed();
    }
    Ok((ok, format!("{} towers", towers.len())))
}

/// Runs every criterion in order.
pub fn run_suite(cfg: &SuiteConfig) -> Vec<Outcome> {
    let towers = random_towers(cfg.towers, cfg.seed);
    let with_towers = |f: fn(&[TowerDatum]) -> Result<(bool, String)>| match &towers {
        Ok(t) => f(t),
        Err(e) => Err(e.clone()),
    };
    vec![
        outcome(1, "cyclotomic breakpoints", cyclotomic_breakpoints()),
        outcome(2, "Serre quaternion filtration", serre_quaternion_filtration()),
        outcome(3, "LMFDB quaternion jumps", lmfdb_quaternion_jumps()),
        outcome(4, "Newton oracle equivalence", newton_cyclotomic()),
        outcome(
            5,
            "different vs discriminant",
            different_consistency(cfg.eisenstein, cfg.seed),
        ),
        outcome(6, "two-formula quotient depth", with_towers(two_formula_quotient)),
        outcome(7, "exact sequences", with_towers(exact_sequences)),
        outcome(8, "Herbrand composition and c additivity", with_towers(herbrand_and_additivity)),
        outcome(9, "u − ℓ = c and linear tail", with_towers(u_minus_ell)),
        outcome(10, "classical round trip", classical_round_trip(cfg.pl_funcs, cfg.seed)),
        outcome(11, "TFAE coherence", tfae_coherence(cfg.tfae_points, cfg.seed)),
        outcome(12, "depth transfer", depth_transfer()),
        outcome(13, "norm-one profile", norm_one_profile_pattern()),
        outcome(14, "Weil distribution additivity", weil_distribution()),
    ]
}

/// The whole-suite verdict together with the report lines.
pub fn summary(outcomes: &[Outcome]) -> (bool, String) {
    let lines: Vec<String> = outcomes.iter().map(|o| o.to_string()).collect();
    (outcomes.iter().all(|o| o.passed), lines.join("\n"))
}
