//! Depth functions on inertia groups, their group-free multisets, and the
//! lower and upper filtrations they define.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::group::{ElementSet, FiniteGroup};
use crate::pl::PlFunc;
use crate::rat::{fmt_rat, from_u64, is_prime, on_grid, Depth, Rat};

/// One named property with its outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn push(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check {
            name,
            passed,
            detail: detail.into(),
        });
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.passed).collect()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = if c.passed { "pass" } else { "FAIL" };
            if c.detail.is_empty() {
                writeln!(f, "{tag}  {}", c.name)?;
            } else {
                writeln!(f, "{tag}  {}: {}", c.name, c.detail)?;
            }
        }
        Ok(())
    }
}

/// `d = c + 1/e_EF − 1/e_LF`.
pub fn differental_exponent(c: &Rat, e_ef: u64, e_lf: u64) -> Result<Rat> {
    if e_ef == 0 || e_lf == 0 || e_lf % e_ef != 0 {
        return Err(Error::Divisibility(format!(
            "e(E/F) = {e_ef} does not divide e(L/F) = {e_lf}"
        )));
    }
    Ok(c + from_u64(e_ef).recip() - from_u64(e_lf).recip())
}

fn check_p_and_e(p: u64, e_lf: u64, order: u64) -> Result<()> {
    if !is_prime(p) {
        return Err(Error::Domain(format!("{p} is not prime")));
    }
    if e_lf == 0 || e_lf % order != 0 {
        return Err(Error::Divisibility(format!(
            "inertia order {order} does not divide e(L/F) = {e_lf}"
        )));
    }
    Ok(())
}

fn is_power_of(mut n: u64, p: u64) -> bool {
    while n > 1 && n % p == 0 {
        n /= p;
    }
    n == 1
}

fn serre_bound_check(report: &mut ValidationReport, ell: &Rat, p: u64, val_p: &Depth) {
    match val_p {
        Depth::Infinite => report.push("serre bound", true, "skipped (val_p = inf)"),
        Depth::Finite(v) => {
            let bound = v / from_u64(p - 1);
            report.push(
                "serre bound",
                *ell <= bound,
                format!("ell = {} <= {}", fmt_rat(ell), fmt_rat(&bound)),
            );
        }
    }
}

fn wild_congruence_check(report: &mut ValidationReport, jumps: &[Rat], e_lf: u64, p: u64) {
    let positive: Vec<&Rat> = jumps.iter().filter(|r| r.is_positive()).collect();
    let mut bad = None;
    for (i, t) in positive.iter().enumerate() {
        for s in &positive[..i] {
            let gap = (*t - *s) * from_u64(e_lf);
            let p_rat = from_u64(p);
            if !(gap / p_rat).is_integer() {
                bad = Some(format!("{} and {}", fmt_rat(t), fmt_rat(s)));
            }
        }
    }
    match bad {
        None => report.push("wild-jump congruence", true, ""),
        Some(d) => report.push("wild-jump congruence", false, format!("p does not divide e·(t−s) for {d}")),
    }
}

/// The multiset of depths of inertia elements, identity included as `∞`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DepthMultiset {
    entries: Vec<(Depth, u64)>,
    e_lf: u64,
    p: u64,
}

impl DepthMultiset {
    /// Merges repeated depths and sorts. Requires exactly one `∞` of
    /// multiplicity one, nonnegative depths on the `(1/e_LF)·Z` grid, and an
    /// inertia order dividing `e_LF`.
    pub fn new(entries: Vec<(Depth, u64)>, e_lf: u64, p: u64) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidMultiset("empty multiset".into()));
        }
        let mut merged: BTreeMap<Depth, u64> = BTreeMap::new();
        for (d, m) in entries {
            if m == 0 {
                return Err(Error::InvalidMultiset("zero multiplicity".into()));
            }
            if let Depth::Finite(r) = &d {
                if r.is_negative() {
                    return Err(Error::InvalidMultiset(format!(
                        "negative depth {}",
                        fmt_rat(r)
                    )));
                }
                if !on_grid(r, e_lf.max(1)) {
                    return Err(Error::InvalidMultiset(format!(
                        "depth {} not in (1/{e_lf})·Z",
                        fmt_rat(r)
                    )));
                }
            }
            *merged.entry(d).or_insert(0) += m;
        }
        match merged.get(&Depth::Infinite) {
            Some(1) => {}
            Some(_) => {
                return Err(Error::InvalidMultiset("infinite depth repeated".into()));
            }
            None => return Err(Error::InvalidMultiset("missing infinite entry".into())),
        }
        let order: u64 = merged.values().sum();
        check_p_and_e(p, e_lf, order).map_err(|e| Error::InvalidMultiset(e.to_string()))?;
        Ok(DepthMultiset {
            entries: merged.into_iter().collect(),
            e_lf,
            p,
        })
    }

    /// The multiset of a trivial inertia group.
    pub fn trivial(e_lf: u64, p: u64) -> Result<Self> {
        Self::new(vec![(Depth::Infinite, 1)], e_lf, p)
    }

    /// Sorted `(depth, multiplicity)` pairs, `∞` last.
    pub fn entries(&self) -> &[(Depth, u64)] {
        &self.entries
    }

    pub fn finite_entries(&self) -> impl Iterator<Item = (&Rat, u64)> {
        self.entries
            .iter()
            .filter_map(|(d, m)| d.as_finite().map(|r| (r, *m)))
    }

    pub fn order(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn e_lf(&self) -> u64 {
        self.e_lf
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    /// `|I_r|`, or `|I_{r+}|` when strict.
    pub fn filtration_count(&self, r: &Rat, strict: bool) -> Result<u64> {
        if r.is_negative() {
            return Err(Error::Domain(format!("negative index {}", fmt_rat(r))));
        }
        Ok(self
            .entries
            .iter()
            .filter(|(d, _)| if strict { d.exceeds(r) } else { d.at_least(r) })
            .map(|(_, m)| m)
            .sum())
    }

    /// `φ(x) = Σ mult · min(depth, x)`.
    pub fn phi(&self) -> PlFunc {
        let mut points = vec![(Rat::zero(), Rat::zero())];
        for (d, _) in self.finite_entries() {
            if d.is_positive() {
                let y: Rat = self
                    .entries
                    .iter()
                    .map(|(e, m)| e.min_with(d) * from_u64(*m))
                    .sum();
                points.push((d.clone(), y));
            }
        }
        PlFunc::new(points, Rat::one()).expect("depth sums are strictly increasing")
    }

    pub fn psi(&self) -> PlFunc {
        self.phi().invert()
    }

    /// Distinct finite depths, ascending.
    pub fn jumps(&self) -> Vec<Rat> {
        self.finite_entries().map(|(r, _)| r.clone()).collect()
    }

    /// Deepest jump, 0 when inertia is trivial.
    pub fn ell(&self) -> Rat {
        self.jumps().pop().unwrap_or_else(Rat::zero)
    }

    pub fn ell_and_u(&self) -> (Rat, Rat) {
        let ell = self.ell();
        let u = self.phi().eval(&ell).expect("nonnegative");
        (ell, u)
    }

    pub fn upper_jumps(&self) -> Vec<Rat> {
        let phi = self.phi();
        self.jumps()
            .iter()
            .map(|r| phi.eval(r).expect("nonnegative"))
            .collect()
    }

    /// Sum of the depths of the nontrivial elements.
    pub fn compressed_different(&self) -> Rat {
        self.finite_entries().map(|(r, m)| r * from_u64(m)).sum()
    }

    /// `d = c + 1/e_EF − 1/e_LF`.
    pub fn differental_exponent(&self, e_ef: u64) -> Result<Rat> {
        differental_exponent(&self.compressed_different(), e_ef, self.e_lf)
    }

    /// Group-free subset of the structural checks.
    pub fn validate(&self, val_p: &Depth) -> ValidationReport {
        let mut report = ValidationReport::default();
        let jumps = self.jumps();
        report.push(
            "jump grid",
            jumps.iter().all(|r| on_grid(r, self.e_lf)),
            "",
        );
        let zero = Rat::zero();
        let tame = self.order() / self.filtration_count(&zero, true).unwrap();
        report.push(
            "tame quotient",
            tame % self.p != 0,
            format!("|I_0:0+| = {tame}"),
        );
        let mut graded_ok = true;
        for r in jumps.iter().filter(|r| r.is_positive()) {
            let size = self.filtration_count(r, false).unwrap() / self.filtration_count(r, true).unwrap();
            graded_ok &= is_power_of(size, self.p);
        }
        report.push("graded pieces p-groups", graded_ok, "");
        wild_congruence_check(&mut report, &jumps, self.e_lf, self.p);
        serre_bound_check(&mut report, &self.ell(), self.p, val_p);
        report
    }
}

/// A depth function on a finite group: the inertia group `I(L/E)` with the
/// depth of each element, the ramification index `e(L/F)` and the residue
/// characteristic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DepthFunction {
    group: FiniteGroup,
    depths: Vec<Depth>,
    e_lf: u64,
    p: u64,
    multiset: DepthMultiset,
    phi: PlFunc,
    psi: PlFunc,
}

impl DepthFunction {
    /// Checks shape only: the identity has depth `∞`, everything else a finite
    /// nonnegative depth on the grid. Group-theoretic laws are left to
    /// [`DepthFunction::validate`].
    pub fn new(group: FiniteGroup, depths: Vec<Depth>, e_lf: u64, p: u64) -> Result<Self> {
        if depths.len() != group.order() {
            return Err(Error::Invariant("one depth per element required".into()));
        }
        if depths[0] != Depth::Infinite {
            return Err(Error::Invariant("identity must have infinite depth".into()));
        }
        for (i, d) in depths.iter().enumerate().skip(1) {
            match d {
                Depth::Infinite => {
                    return Err(Error::Invariant(format!(
                        "nonidentity element {} has infinite depth",
                        group.label(i)
                    )))
                }
                Depth::Finite(r) if r.is_negative() => {
                    return Err(Error::Invariant("negative depth".into()))
                }
                Depth::Finite(r) if !on_grid(r, e_lf.max(1)) => {
                    return Err(Error::Invariant(format!(
                        "depth {} not in (1/{e_lf})·Z",
                        fmt_rat(r)
                    )))
                }
                _ => {}
            }
        }
        check_p_and_e(p, e_lf, group.order() as u64)?;
        let multiset = DepthMultiset::new(depths.iter().map(|d| (d.clone(), 1)).collect(), e_lf, p)?;
        let phi = multiset.phi();
        let psi = phi.invert();
        Ok(DepthFunction {
            group,
            depths,
            e_lf,
            p,
            multiset,
            phi,
            psi,
        })
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn depth(&self, sigma: usize) -> &Depth {
        &self.depths[sigma]
    }

    pub fn depths(&self) -> &[Depth] {
        &self.depths
    }

    pub fn e_lf(&self) -> u64 {
        self.e_lf
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn order(&self) -> usize {
        self.group.order()
    }

    pub fn multiset(&self) -> DepthMultiset {
        self.multiset.clone()
    }

    pub fn phi(&self) -> PlFunc {
        self.phi.clone()
    }

    pub fn psi(&self) -> PlFunc {
        self.psi.clone()
    }

    /// `I_r = {depth ≥ r}`, or `I_{r+} = {depth > r}` when strict.
    pub fn filtration_at(&self, r: &Rat, strict: bool) -> Result<ElementSet> {
        if r.is_negative() {
            return Err(Error::Domain(format!("negative index {}", fmt_rat(r))));
        }
        Ok(ElementSet::from_indices(
            self.depths
                .iter()
                .enumerate()
                .filter(|(_, d)| if strict { d.exceeds(r) } else { d.at_least(r) })
                .map(|(i, _)| i),
        ))
    }

    /// `I^s = I_{ψ(s)}`, or `I^{s+}` when strict.
    pub fn upper_at(&self, s: &Rat, strict: bool) -> Result<ElementSet> {
        if s.is_negative() {
            return Err(Error::Domain(format!("negative index {}", fmt_rat(s))));
        }
        self.filtration_at(&self.psi.eval(s)?, strict)
    }

    pub fn jump_set(&self) -> Vec<Rat> {
        self.multiset.jumps()
    }

    pub fn upper_jumps(&self) -> Vec<Rat> {
        self.multiset.upper_jumps()
    }

    pub fn ell_and_u(&self) -> (Rat, Rat) {
        self.multiset.ell_and_u()
    }

    pub fn compressed_different(&self) -> Rat {
        self.multiset.compressed_different()
    }

    /// The restriction to a subgroup, re-indexed, with the embedding.
    pub fn restrict(&self, sub: ElementSet) -> Result<(DepthFunction, Vec<usize>)> {
        let (g, emb) = self.group.subgroup_as_group(sub)?;
        let depths = emb.iter().map(|&i| self.depths[i].clone()).collect();
        Ok((DepthFunction::new(g, depths, self.e_lf, self.p)?, emb))
    }

    pub fn symmetric(&self) -> bool {
        (0..self.order()).all(|s| self.depths[s] == self.depths[self.group.inv(s)])
    }

    pub fn ultrametric(&self) -> bool {
        self.ultrametric_failure().is_none()
    }

    fn ultrametric_failure(&self) -> Option<(usize, usize)> {
        let n = self.order();
        for a in 0..n {
            for b in 0..n {
                let (da, db) = (&self.depths[a], &self.depths[b]);
                let dab = &self.depths[self.group.mul(a, b)];
                let m = std::cmp::min(da, db);
                if dab < m || (da != db && dab != m) {
                    return Some((a, b));
                }
            }
        }
        None
    }

    /// Structural checks; failures are reported rather than returned as
    /// errors. `val_p` is the valuation of `p` (`∞` in equal characteristic).
    pub fn validate(&self, val_p: &Depth) -> ValidationReport {
        let g = &self.group;
        let mut report = ValidationReport::default();
        report.push("depth symmetry", self.symmetric(), "");
        match self.ultrametric_failure() {
            None => report.push("ultrametric law", true, ""),
            Some((a, b)) => report.push(
                "ultrametric law",
                false,
                format!("at ({}, {})", g.label(a), g.label(b)),
            ),
        }
        let jumps = self.jump_set();
        report.push("jump grid", jumps.iter().all(|r| on_grid(r, self.e_lf)), "");

        let filtrations: Vec<(Rat, ElementSet, ElementSet)> = jumps
            .iter()
            .map(|r| {
                (
                    r.clone(),
                    self.filtration_at(r, false).unwrap(),
                    self.filtration_at(r, true).unwrap(),
                )
            })
            .collect();
        let normal = filtrations.iter().all(|(_, a, _)| g.is_normal(*a));
        report.push("filtration subgroups normal", normal, "");
        if !normal {
            for name in [
                "commutator containment",
                "tame quotient",
                "graded pieces elementary abelian",
            ] {
                report.push(name, false, "filtration is not a normal series");
            }
        } else {
            let mut comm_ok = true;
            for a in 1..g.order() {
                for b in 1..g.order() {
                    if let (Depth::Finite(t), Depth::Finite(s)) = (&self.depths[a], &self.depths[b]) {
                        if t.is_positive() && s.is_positive() {
                            comm_ok &= self.depths[g.commutator(a, b)].exceeds(&(t + s));
                        }
                    }
                }
            }
            report.push("commutator containment", comm_ok, "");

            let zero = Rat::zero();
            let i0 = g.all();
            let i0p = self.filtration_at(&zero, true).unwrap();
            let tame = g.section(i0, i0p).expect("normal");
            report.push(
                "tame quotient",
                tame.is_cyclic() && tame.order() as u64 % self.p != 0,
                format!("|I_0:0+| = {}", tame.order()),
            );
            let graded_ok = filtrations
                .iter()
                .filter(|(r, _, _)| r.is_positive())
                .all(|(_, a, b)| {
                    g.section(*a, *b)
                        .map(|q| q.is_elementary_abelian(self.p as usize))
                        .unwrap_or(false)
                });
            report.push("graded pieces elementary abelian", graded_ok, "");
        }
        wild_congruence_check(&mut report, &jumps, self.e_lf, self.p);
        report.push("inertia solvable", g.is_solvable(), "");
        serre_bound_check(&mut report, &self.ell_and_u().0, self.p, val_p);
        report
    }
}
