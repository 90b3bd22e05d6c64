//! Named example extensions: cyclotomic fields, wild quadratics, the two
//! quaternion extensions of `Q_2`, tame and trivial cases.

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::group::FiniteGroup;
use crate::pl::PlFunc;
use crate::rat::{from_u64, int, is_prime, on_grid, parse_rat, rat, Depth, Rat};
use crate::ramgroup::{DepthFunction, DepthMultiset};

fn check_cyclotomic_args(p: u64, n: u32) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if n == 0 {
        return Err(Error::Domain("cyclotomic level must be at least 1".into()));
    }
    if p.checked_pow(n).is_none() {
        return Err(Error::Domain("p^n overflows".into()));
    }
    Ok(())
}

/// Ramification index of `Q_p(ζ_{p^n}) / Q_p`.
pub fn cyclotomic_e(p: u64, n: u32) -> u64 {
    p.pow(n - 1) * (p - 1)
}

/// Depths of `Gal(Q_p(ζ_{p^n}) / Q_p)`: elements congruent to 1 mod `p^d` but
/// not mod `p^{d+1}` have depth `(p^d − 1)/e`.
pub fn cyclotomic_multiset(p: u64, n: u32) -> Result<DepthMultiset> {
    check_cyclotomic_args(p, n)?;
    let e = cyclotomic_e(p, n);
    let mut entries = Vec::new();
    let tame = e - p.pow(n - 1);
    if tame > 0 {
        entries.push((Depth::zero(), tame));
    }
    for d in 1..n {
        let depth = Rat::new((p.pow(d) - 1).into(), e.into());
        entries.push((Depth::Finite(depth), p.pow(n - d) - p.pow(n - d - 1)));
    }
    entries.push((Depth::Infinite, 1));
    DepthMultiset::new(entries, e, p)
}

/// Closed form: `φ((p^k − 1)/e) = k`, linear in between, slope 1 afterwards.
pub fn cyclotomic_phi(p: u64, n: u32) -> Result<PlFunc> {
    check_cyclotomic_args(p, n)?;
    let e = from_u64(cyclotomic_e(p, n));
    let mut points = vec![(Rat::zero(), Rat::zero())];
    for k in 1..n {
        points.push((from_u64(p.pow(k) - 1) / &e, from_u64(k as u64)));
    }
    PlFunc::new(points, int(1))
}

/// The cyclotomic depth function on `(Z/p^n)^×` itself, when it is small
/// enough to tabulate.
pub fn cyclotomic_function(p: u64, n: u32) -> Result<DepthFunction> {
    check_cyclotomic_args(p, n)?;
    let m = p.pow(n);
    let (group, residues) = FiniteGroup::units_mod(m)?;
    let e = cyclotomic_e(p, n);
    let depths = residues
        .iter()
        .map(|&a| {
            if a == 1 % m {
                return Depth::Infinite;
            }
            let mut d = 0;
            while d < n && (a + m - 1) % p.pow(d + 1) == 0 {
                d += 1;
            }
            Depth::Finite(Rat::new((p.pow(d) - 1).into(), e.into()))
        })
        .collect();
    DepthFunction::new(group, depths, e, p)
}

/// `ℓ = min(val(4), 2·val(a) − 1) / 2` for `x² + ax + b` Eisenstein-type
/// wild quadratics.
pub fn wild_quadratic_ell(val4: &Depth, val_a: &Depth) -> Result<Rat> {
    let from_a = match val_a {
        Depth::Finite(v) if v.is_negative() => {
            return Err(Error::Domain("valuation of a must be nonnegative".into()))
        }
        Depth::Finite(v) => Depth::Finite(v * int(2) - int(1)),
        Depth::Infinite => Depth::Infinite,
    };
    if let Depth::Finite(v) = val4 {
        if v.is_negative() {
            return Err(Error::Domain("valuation of 4 must be nonnegative".into()));
        }
    }
    match std::cmp::min(val4.clone(), from_a) {
        Depth::Finite(m) => Ok(m / int(2)),
        Depth::Infinite => Err(Error::Inseparable),
    }
}

/// Quadratic extension with the given depth and `e(E/F) = e_ef`.
pub fn quadratic(ell: &Rat, e_ef: u64) -> Result<DepthFunction> {
    if !ell.is_positive() {
        return Err(Error::Domain("wild quadratic needs positive depth".into()));
    }
    DepthFunction::new(
        FiniteGroup::cyclic(2),
        vec![Depth::Infinite, Depth::Finite(ell.clone())],
        2 * e_ef,
        2,
    )
}

/// Cyclic tame extension of degree `e` prime to `p`.
pub fn tame(e: u64, p: u64) -> Result<DepthFunction> {
    if e == 0 || (e > 1 && e % p == 0) {
        return Err(Error::Domain(format!("{e} is not a tame degree for p = {p}")));
    }
    let mut depths = vec![Depth::Infinite];
    depths.extend((1..e).map(|_| Depth::zero()));
    DepthFunction::new(FiniteGroup::cyclic(e as usize), depths, e, p)
}

pub fn trivial(p: u64) -> Result<DepthFunction> {
    DepthFunction::new(FiniteGroup::trivial(), vec![Depth::Infinite], 1, p)
}

fn quaternion_with(depth_of: impl Fn(&str) -> Rat) -> DepthFunction {
    let q = FiniteGroup::quaternion();
    let depths = q
        .labels()
        .iter()
        .map(|l| {
            if l == "1" {
                Depth::Infinite
            } else {
                Depth::Finite(depth_of(l.trim_start_matches('-')))
            }
        })
        .collect();
    DepthFunction::new(q, depths, 8, 2).expect("quaternion depths")
}

/// Quaternion extension whose filtration is `Q ⊃ Z ⊃ 1` with jumps 1/8, 3/8.
pub fn serre_quaternion() -> DepthFunction {
    quaternion_with(|l| if l == "1" { rat(3, 8) } else { rat(1, 8) })
}

/// Quaternion extension of `Q_2` with filtration `Q ⊃ ⟨i⟩ ⊃ Z ⊃ 1` and jumps
/// 1/8, 3/8, 7/8.
pub fn lmfdb_quaternion() -> DepthFunction {
    quaternion_with(|l| match l {
        "1" => rat(7, 8),
        "i" => rat(3, 8),
        _ => rat(1, 8),
    })
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub group: DepthFunction,
    pub lower_jumps: Vec<Rat>,
    pub upper_jumps: Vec<Rat>,
}

pub fn quaternion_catalog() -> Vec<CatalogEntry> {
    vec![
        CatalogEntry {
            name: "serre",
            group: serre_quaternion(),
            lower_jumps: vec![rat(1, 8), rat(3, 8)],
            upper_jumps: vec![int(1), rat(3, 2)],
        },
        CatalogEntry {
            name: "lmfdb-q2",
            group: lmfdb_quaternion(),
            lower_jumps: vec![rat(1, 8), rat(3, 8), rat(7, 8)],
            upper_jumps: vec![int(1), int(2), int(3)],
        },
    ]
}

/// A named example: its multiset, a labeled group when one is available, and
/// the valuation of `p` for the Serre bound.
#[derive(Clone, Debug)]
pub struct Preset {
    pub name: String,
    pub multiset: DepthMultiset,
    pub function: Option<DepthFunction>,
    pub val_p: Depth,
}

impl Preset {
    fn from_function(name: &str, g: DepthFunction) -> Self {
        Preset {
            name: name.to_string(),
            multiset: g.multiset(),
            function: Some(g),
            val_p: Depth::Finite(int(1)),
        }
    }
}

fn parse_list(args: &str, count: usize) -> Result<Vec<u64>> {
    let vals = args
        .split(',')
        .map(|t| {
            t.trim()
                .parse::<u64>()
                .map_err(|_| Error::Parse(format!("bad preset argument `{t}`")))
        })
        .collect::<Result<Vec<_>>>()?;
    if vals.len() != count {
        return Err(Error::Parse(format!("expected {count} preset arguments")));
    }
    Ok(vals)
}

/// Resolves `cyclotomic:p,n`, `quaternion:serre`, `quaternion:lmfdb-q2`,
/// `quadratic:ell`, `tame:e,p` and `trivial`.
pub fn preset(name: &str) -> Result<Preset> {
    let (kind, args) = name.split_once(':').unwrap_or((name, ""));
    match kind {
        "cyclotomic" => {
            let v = parse_list(args, 2)?;
            let n = u32::try_from(v[1]).map_err(|_| Error::Domain("n too large".into()))?;
            let multiset = cyclotomic_multiset(v[0], n)?;
            let function = if multiset.order() <= 64 {
                Some(cyclotomic_function(v[0], n)?)
            } else {
                None
            };
            Ok(Preset {
                name: name.to_string(),
                multiset,
                function,
                val_p: Depth::Finite(int(1)),
            })
        }
        "quaternion" => match args {
            "serre" => Ok(Preset::from_function(name, serre_quaternion())),
            "lmfdb-q2" => Ok(Preset::from_function(name, lmfdb_quaternion())),
            _ => Err(Error::Parse(format!("unknown quaternion preset `{args}`"))),
        },
        "quadratic" => {
            let ell = parse_rat(args)?;
            if !on_grid(&ell, 2) {
                return Err(Error::Domain("quadratic depth must lie in (1/2)·Z".into()));
            }
            Ok(Preset::from_function(name, quadratic(&ell, 1)?))
        }
        "tame" => {
            let v = parse_list(args, 2)?;
            if !is_prime(v[1]) {
                return Err(Error::Domain(format!("{} is not prime", v[1])));
            }
            Ok(Preset::from_function(name, tame(v[0], v[1])?))
        }
        "trivial" => Ok(Preset::from_function(name, trivial(2)?)),
        _ => Err(Error::Parse(format!("unknown preset `{name}`"))),
    }
}

/// Every preset exercised by the verification suite.
pub fn standard_presets() -> Vec<Preset> {
    [
        "trivial",
        "tame:3,2",
        "tame:4,3",
        "quadratic:1",
        "quadratic:1/2",
        "quadratic:3/2",
        "quaternion:serre",
        "quaternion:lmfdb-q2",
        "cyclotomic:2,2",
        "cyclotomic:2,3",
        "cyclotomic:2,4",
        "cyclotomic:3,1",
        "cyclotomic:3,2",
        "cyclotomic:3,3",
        "cyclotomic:3,4",
        "cyclotomic:5,2",
        "cyclotomic:5,3",
        "cyclotomic:7,2",
    ]
    .iter()
    .map(|n| preset(n).expect("standard preset"))
    .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cyclotomic_small_cases() {
        let d = cyclotomic_multiset(3, 1).unwrap();
        assert_eq!(d.entries(), &[(Depth::zero(), 1), (Depth::Infinite, 1)]);
        let d = cyclotomic_multiset(3, 2).unwrap();
        assert_eq!(
            d.entries(),
            &[
                (Depth::zero(), 3),
                (Depth::Finite(rat(1, 3)), 2),
                (Depth::Infinite, 1)
            ]
        );
        let d = cyclotomic_multiset(3, 4).unwrap();
        assert_eq!(
            d.jumps(),
            vec![int(0), rat(2, 54), rat(8, 54), rat(26, 54)]
        );
        assert!(cyclotomic_multiset(3, 0).is_err());
        assert!(cyclotomic_multiset(4, 2).is_err());
    }

    #[test]
    fn cyclotomic_phi_matches_multiset() {
        for p in [2, 3, 5, 7] {
            for n in 1..=5 {
                let closed = cyclotomic_phi(p, n).unwrap();
                assert_eq!(closed, cyclotomic_multiset(p, n).unwrap().phi(), "p={p} n={n}");
            }
        }
        assert!(cyclotomic_phi(3, 1).unwrap().is_identity());
        assert_eq!(cyclotomic_phi(3, 2).unwrap().eval(&rat(1, 3)).unwrap(), int(1));
        assert_eq!(cyclotomic_phi(3, 4).unwrap().eval(&rat(26, 54)).unwrap(), int(3));
    }

    #[test]
    fn cyclotomic_labeled_function() {
        let g = cyclotomic_function(3, 2).unwrap();
        assert_eq!(g.multiset(), cyclotomic_multiset(3, 2).unwrap());
        assert!(g.validate(&Depth::Finite(int(1))).all_passed());
        let g = cyclotomic_function(2, 4).unwrap();
        assert_eq!(g.multiset(), cyclotomic_multiset(2, 4).unwrap());
    }

    #[test]
    fn quadratic_ell_formula() {
        let two = Depth::Finite(int(2));
        assert_eq!(wild_quadratic_ell(&two, &Depth::Infinite).unwrap(), int(1));
        assert_eq!(wild_quadratic_ell(&two, &Depth::Finite(int(1))).unwrap(), rat(1, 2));
        assert_eq!(
            wild_quadratic_ell(&Depth::Infinite, &Depth::Finite(int(3))).unwrap(),
            rat(5, 2)
        );
        assert_eq!(
            wild_quadratic_ell(&Depth::Infinite, &Depth::Infinite),
            Err(Error::Inseparable)
        );
    }

    #[test]
    fn quaternion_entries() {
        let one = Depth::Finite(int(1));
        for entry in quaternion_catalog() {
            assert_eq!(entry.group.jump_set(), entry.lower_jumps, "{}", entry.name);
            assert_eq!(entry.group.upper_jumps(), entry.upper_jumps, "{}", entry.name);
            let report = entry.group.validate(&one);
            assert!(report.all_passed(), "{}: {report}", entry.name);
        }
        assert_ne!(serre_quaternion().phi(), lmfdb_quaternion().phi());
        assert_eq!(lmfdb_quaternion().compressed_different(), rat(17, 8));
    }

    #[test]
    fn preset_names() {
        assert_eq!(preset("cyclotomic:3,4").unwrap().multiset.order(), 54);
        assert!(preset("cyclotomic:3,4").unwrap().function.is_some());
        assert!(preset("cyclotomic:5,3").unwrap().function.is_none());
        assert!(preset("quaternion:nope").is_err());
        assert!(preset("tame:4,2").is_err());
        assert!(preset("quadratic:1/3").is_err());
        assert!(preset("bogus").is_err());
        assert_eq!(standard_presets().len(), 18);
    }
}
