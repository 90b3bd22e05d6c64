//! Inputs shared by the benchmarks, built once from fixed seeds.

use ramification::newton::cyclotomic_eisenstein;
use ramification::random::{self, TowerSampler};
use ramification::{EisensteinPoly, PlFunc, TowerDatum};

pub fn towers(count: usize, seed: u64) -> Vec<TowerDatum> {
    let sampler = TowerSampler::new();
    let mut rng = random::rng(seed);
    (0..count)
        .map(|_| sampler.tower(&mut rng).expect("sampler yields valid towers"))
        .collect()
}

pub fn pl_funcs(count: usize, seed: u64) -> Vec<PlFunc> {
    let mut rng = random::rng(seed);
    (0..count).map(|_| random::pl_func(&mut rng)).collect()
}

/// `Φ_{p^n}(1 + x)` for the listed `(p, n)`.
pub fn cyclotomic_polys(cases: &[(u64, u32)]) -> Vec<EisensteinPoly> {
    cases
        .iter()
        .map(|&(p, n)| cyclotomic_eisenstein(p, n).expect("cyclotomic polynomial"))
        .collect()
}
