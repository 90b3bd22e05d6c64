//! Seeded generators for depth functions, towers, piecewise-linear functions
//! and Eisenstein polynomials.

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub use rand::SeedableRng;

use crate::classical::ClassicalContext;
use crate::error::{Error, Result};
use crate::group::{ElementSet, FiniteGroup};
use crate::newton::EisensteinPoly;
use crate::pl::PlFunc;
use crate::poly::IntPoly;
use crate::rat::{from_u64, rat, Depth, Rat};
use crate::ramgroup::DepthFunction;
use crate::tower::TowerDatum;

pub type Rng64 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

const MAX_ATTEMPTS: usize = 500;

/// A prime for which the group can be an inertia group: normal Sylow
/// subgroup, cyclic quotient by it.
#[derive(Clone, Debug)]
struct PrimeOption {
    p: u64,
    sylow: ElementSet,
    /// G-normal subgroups of the Sylow subgroup.
    wild_normals: Vec<ElementSet>,
}

#[derive(Clone, Debug)]
struct ZooEntry {
    group: FiniteGroup,
    normals: Vec<ElementSet>,
    options: Vec<PrimeOption>,
}

/// Groups of order at most 16, precomputed for repeated sampling.
#[derive(Clone, Debug)]
pub struct TowerSampler {
    zoo: Vec<ZooEntry>,
}

fn small_groups() -> Vec<FiniteGroup> {
    let c = FiniteGroup::cyclic;
    let prod = |a: &FiniteGroup, b: &FiniteGroup| FiniteGroup::direct_product(a, b).unwrap();
    let mut out: Vec<FiniteGroup> = (1..=16).map(c).collect();
    out.extend((2..=8).map(FiniteGroup::dihedral));
    out.push(FiniteGroup::quaternion());
    out.push(prod(&c(2), &c(4)));
    out.push(FiniteGroup::elementary_abelian(2, 3).unwrap());
    out.push(prod(&c(3), &c(3)));
    out.push(prod(&c(2), &c(6)));
    out.push(prod(&c(2), &c(8)));
    out.push(prod(&c(4), &c(4)));
    out.push(prod(&prod(&c(2), &c(2)), &c(4)));
    out.push(FiniteGroup::elementary_abelian(2, 4).unwrap());
    out.push(prod(&c(2), &FiniteGroup::dihedral(4)));
    out.push(prod(&c(2), &FiniteGroup::quaternion()));
    out.push(FiniteGroup::semidirect_cyclic(3, 4, 2).unwrap());
    out.push(FiniteGroup::semidirect_cyclic(8, 2, 5).unwrap());
    out.push(FiniteGroup::semidirect_cyclic(8, 2, 3).unwrap());
    out.push(FiniteGroup::from_permutations(&[vec![1, 2, 0, 3], vec![1, 0, 3, 2]]).unwrap());
    out.retain(|g| g.order() <= 16);
    out
}

fn prime_factors(n: u64) -> Vec<u64> {
    (2..=n).filter(|&q| n % q == 0 && crate::rat::is_prime(q)).collect()
}

impl TowerSampler {
    pub fn new() -> Self {
        let mut zoo = Vec::new();
        for group in small_groups() {
            let n = group.order() as u64;
            let normals = group.normal_subgroups();
            let mut options = Vec::new();
            let mut primes = prime_factors(n);
            if group.is_cyclic() {
                primes.extend([2u64, 3, 5, 7].into_iter().filter(|q| n % q != 0));
            }
            for p in primes {
                let mut pk = 1;
                while n % (pk * p) == 0 {
                    pk *= p;
                }
                let Some(&sylow) = normals.iter().find(|s| s.len() as u64 == pk) else {
                    continue;
                };
                let Ok((quot, _)) = group.quotient(sylow) else {
                    continue;
                };
                if !quot.is_cyclic() {
                    continue;
                }
                let wild_normals = normals.iter().copied().filter(|s| s.is_subset(&sylow)).collect();
                options.push(PrimeOption {
                    p,
                    sylow,
                    wild_normals,
                });
            }
            if !options.is_empty() {
                zoo.push(ZooEntry {
                    group,
                    normals,
                    options,
                });
            }
        }
        TowerSampler { zoo }
    }

    pub fn group_count(&self) -> usize {
        self.zoo.len()
    }

    fn chain(entry: &ZooEntry, opt: &PrimeOption, rng: &mut Rng64) -> Vec<ElementSet> {
        let g = &entry.group;
        let mut chain = vec![opt.sylow];
        let mut current = opt.sylow;
        while current.len() > 1 {
            let steps: Vec<ElementSet> = opt
                .wild_normals
                .iter()
                .copied()
                .filter(|n| n.is_subset(&current) && *n != current)
                .filter(|n| {
                    g.section(current, *n)
                        .map(|q| q.is_elementary_abelian(opt.p as usize))
                        .unwrap_or(false)
                })
                .collect();
            current = *steps.choose(rng).expect("the Frattini subgroup is always available");
            chain.push(current);
        }
        chain
    }

    fn attempt(&self, rng: &mut Rng64) -> Option<DepthFunction> {
        let entry = self.zoo.choose(rng).unwrap();
        let opt = entry.options.choose(rng).unwrap();
        let g = &entry.group;
        let n = g.order() as u64;
        let e_lf = n * rng.gen_range(1..=4u64);
        let chain = Self::chain(entry, opt, rng);
        let mut level = vec![Depth::zero(); g.order()];
        level[0] = Depth::Infinite;
        let mut t = rng.gen_range(1..=2 * e_lf as i64);
        for w in chain.windows(2) {
            for x in w[0].minus(&w[1]).iter() {
                level[x] = Depth::Finite(rat(t, e_lf as i64));
            }
            t += opt.p as i64 * rng.gen_range(1..=3i64);
        }
        let f = DepthFunction::new(g.clone(), level, e_lf, opt.p).ok()?;
        f.validate(&Depth::Infinite).all_passed().then_some(f)
    }

    /// A depth function passing every structural check (with `val_p = ∞`).
    pub fn depth_function(&self, rng: &mut Rng64) -> Result<DepthFunction> {
        for _ in 0..MAX_ATTEMPTS {
            if let Some(f) = self.attempt(rng) {
                return Ok(f);
            }
        }
        Err(Error::Invariant("no valid depth function sampled".into()))
    }

    /// A valid depth function with a random normal kernel whose quotient
    /// depths lie on the grid of the intermediate field. Towers where the two
    /// quotient formulas disagree are kept, so callers can detect them.
    pub fn tower(&self, rng: &mut Rng64) -> Result<TowerDatum> {
        for _ in 0..MAX_ATTEMPTS {
            let f = self.depth_function(rng)?;
            let entry = self
                .zoo
                .iter()
                .find(|e| e.group == *f.group())
                .expect("sampled from the zoo");
            let kernel = *entry.normals.choose(rng).unwrap();
            let t = TowerDatum::new(f, kernel)?;
            match t.quotient_depth_function() {
                Err(Error::Invariant(_)) => continue,
                _ => return Ok(t),
            }
        }
        Err(Error::Invariant("no valid tower sampled".into()))
    }
}

impl Default for TowerSampler {
    fn default() -> Self {
        Self::new()
    }
}

/// An increasing piecewise-linear function with 0–4 kinks and positive
/// rational slopes.
pub fn pl_func(rng: &mut Rng64) -> PlFunc {
    let kinks = rng.gen_range(0..=4);
    let mut x = Rat::from_integer(0.into());
    let mut pieces = Vec::new();
    for _ in 0..kinks {
        x += rat(rng.gen_range(1..=12), rng.gen_range(1..=6));
        pieces.push((x.clone(), rat(rng.gen_range(1..=9), rng.gen_range(1..=9))));
    }
    let last = rat(rng.gen_range(1..=9), rng.gen_range(1..=9));
    PlFunc::from_slopes(&pieces, last).expect("positive slopes on increasing abscissae")
}

pub fn classical_context(rng: &mut Rng64) -> ClassicalContext {
    let e_ef = rng.gen_range(1..=6u64);
    ClassicalContext::new(e_ef, e_ef * rng.gen_range(1..=8u64)).expect("multiple")
}

/// Monic Eisenstein polynomial at `p ∈ {2, 3, 5}` of degree 2..=`max_degree`.
pub fn eisenstein(rng: &mut Rng64, max_degree: usize) -> EisensteinPoly {
    let p = *[2u64, 3, 5].choose(rng).unwrap();
    let n = rng.gen_range(2..=max_degree.max(2));
    let pi = p as i64;
    let mut unit = 0;
    while unit % pi == 0 {
        unit = rng.gen_range(-6..=6i64);
    }
    let mut coeffs = vec![BigInt::from(pi * unit)];
    coeffs.extend((1..n).map(|_| BigInt::from(pi * rng.gen_range(-3..=3i64))));
    coeffs.push(BigInt::from(1));
    EisensteinPoly::new(IntPoly::new(coeffs), p).expect("Eisenstein by construction")
}

/// A random `s ≥ 0` with denominator dividing `2·e`.
pub fn grid_point(rng: &mut Rng64, e: u64, max: u64) -> Rat {
    let den = 2 * e;
    from_u64(rng.gen_range(0..=max * den)) / from_u64(den)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zoo_covers_small_orders() {
        let s = TowerSampler::new();
        assert!(s.group_count() >= 30);
    }

    #[test]
    fn samples_are_valid_and_reproducible() {
        let s = TowerSampler::new();
        let mut r = rng(7);
        for _ in 0..40 {
            let t = s.tower(&mut r).unwrap();
            assert!(t.big().validate(&Depth::Infinite).all_passed());
        }
        let a = s.depth_function(&mut rng(3)).unwrap();
        let b = s.depth_function(&mut rng(3)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn generated_polynomials_are_eisenstein() {
        let mut r = rng(11);
        for _ in 0..20 {
            let f = eisenstein(&mut r, 8);
            assert!(f.degree() >= 2 && f.degree() <= 8);
        }
        let f = pl_func(&mut r);
        assert!(f.eval(&rat(1, 2)).is_ok());
    }
}
