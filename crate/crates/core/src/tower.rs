//! Towers `L/K/E` modelled as a normal subgroup `I(L/K)` of `I(L/E)`.

use std::sync::OnceLock;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{ElementSet, FiniteGroup};
use crate::pl::PlFunc;
use crate::rat::{fmt_rat, int, Depth, Rat};
use crate::ramgroup::{DepthFunction, DepthMultiset, ValidationReport};

/// Sorted, deduplicated candidates together with 0, all midpoints and one
/// point past the largest.
pub fn sample_points(mut candidates: Vec<Rat>) -> Vec<Rat> {
    candidates.push(Rat::zero());
    candidates.sort();
    candidates.dedup();
    let mut out = Vec::with_capacity(2 * candidates.len() + 1);
    for w in candidates.windows(2) {
        out.push(w[0].clone());
        out.push((&w[0] + &w[1]) / int(2));
    }
    let last = candidates.last().unwrap().clone();
    out.push(last.clone());
    out.push(last + int(1));
    out
}

#[derive(Clone, Debug)]
pub struct TowerDatum {
    big: DepthFunction,
    kernel: ElementSet,
    quotient: FiniteGroup,
    projection: Vec<usize>,
    lower: DepthFunction,
    embedding: Vec<usize>,
    upper: OnceLock<Result<DepthFunction>>,
}

/// Outcome of the five exact-sequence identities at one index.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactSequenceReport {
    pub s: Rat,
    /// `(left = middle ∩ kernel, image(middle) = right, |middle| = |left|·|right|)`
    /// for each sequence in order.
    pub sequences: Vec<(bool, bool, bool)>,
}

impl ExactSequenceReport {
    pub fn holds(&self) -> bool {
        self.sequences.iter().all(|&(a, b, c)| a && b && c)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TfaeWitness {
    pub s: Rat,
    pub psi_s: Rat,
    pub psi_at_least_ell: bool,
    pub s_at_least_u: bool,
    pub different_gap: bool,
    pub filtration_trivial: bool,
    pub norm_surjective: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapConstancy {
    pub constant: bool,
    pub gap: Rat,
}

impl TowerDatum {
    /// Quotients by the normal subgroup `kernel` of `big`.
    pub fn new(big: DepthFunction, kernel: ElementSet) -> Result<Self> {
        let (quotient, projection) = big.group().quotient(kernel)?;
        Self::from_parts(big, kernel, quotient, projection)
    }

    /// Uses a supplied quotient and projection, which must be a surjective
    /// homomorphism with kernel exactly `kernel`.
    pub fn from_parts(
        big: DepthFunction,
        kernel: ElementSet,
        quotient: FiniteGroup,
        projection: Vec<usize>,
    ) -> Result<Self> {
        let g = big.group();
        if !g.is_normal(kernel) {
            return Err(Error::InvalidGroup("kernel is not a normal subgroup".into()));
        }
        if !g.is_surjective_hom(&quotient, &projection) {
            return Err(Error::InvalidGroup("projection is not a surjective homomorphism".into()));
        }
        let fibre = ElementSet::from_indices((0..g.order()).filter(|&x| projection[x] == 0));
        if fibre != kernel {
            return Err(Error::InvalidGroup("projection kernel differs from kernel".into()));
        }
        if !big.symmetric() || !big.ultrametric() {
            return Err(Error::Invariant("depth function violates the ultrametric laws".into()));
        }
        let (lower, embedding) = big.restrict(kernel)?;
        Ok(TowerDatum {
            big,
            kernel,
            quotient,
            projection,
            lower,
            embedding,
            upper: OnceLock::new(),
        })
    }

    pub fn big(&self) -> &DepthFunction {
        &self.big
    }

    pub fn kernel(&self) -> ElementSet {
        self.kernel
    }

    pub fn quotient_group(&self) -> &FiniteGroup {
        &self.quotient
    }

    pub fn projection(&self) -> &[usize] {
        &self.projection
    }

    /// `I(L/K)` with its own depth function, re-indexed.
    pub fn kernel_function(&self) -> &DepthFunction {
        &self.lower
    }

    /// Position in the big group of each kernel element.
    pub fn kernel_embedding(&self) -> &[usize] {
        &self.embedding
    }

    /// `e(K/F) = e(L/F) / |I(L/K)|`.
    pub fn e_kf(&self) -> u64 {
        self.big.e_lf() / self.kernel.len() as u64
    }

    /// `Σ_{τ ∈ I(L/K)} depth(στ)`.
    pub fn quotient_depth_sum(&self, sigma: usize) -> Depth {
        let g = self.big.group();
        self.kernel
            .iter()
            .map(|t| self.big.depth(g.mul(sigma, t)).clone())
            .fold(Depth::zero(), |a, b| a + b)
    }

    /// `φ_{L/K}(max_{τ ∈ I(L/K)} depth(στ))`.
    pub fn quotient_depth_max(&self, sigma: usize) -> Depth {
        let g = self.big.group();
        let best = self
            .kernel
            .iter()
            .map(|t| self.big.depth(g.mul(sigma, t)))
            .max()
            .expect("kernel contains the identity");
        match best {
            Depth::Infinite => Depth::Infinite,
            Depth::Finite(r) => Depth::Finite(self.lower.phi().eval(r).expect("nonnegative")),
        }
    }

    /// The depth function of `I(K/E)`, with both coset formulas required to
    /// agree.
    pub fn quotient_depth_function(&self) -> Result<DepthFunction> {
        self.upper.get_or_init(|| self.compute_quotient()).clone()
    }

    fn compute_quotient(&self) -> Result<DepthFunction> {
        let phi_lk = self.lower.phi();
        let g = self.big.group();
        let mut depths = vec![None; self.quotient.order()];
        for sigma in 0..g.order() {
            let q = self.projection[sigma];
            if depths[q].is_some() {
                continue;
            }
            let by_sum = self.quotient_depth_sum(sigma);
            let by_max = match self
                .kernel
                .iter()
                .map(|t| self.big.depth(g.mul(sigma, t)))
                .max()
                .unwrap()
            {
                Depth::Infinite => Depth::Infinite,
                Depth::Finite(r) => Depth::Finite(phi_lk.eval(r)?),
            };
            if by_sum != by_max {
                return Err(Error::Inconsistent(format!(
                    "coset of {}: sum formula gives {by_sum}, max formula gives {by_max}",
                    g.label(sigma)
                )));
            }
            depths[q] = Some(by_sum);
        }
        DepthFunction::new(
            self.quotient.clone(),
            depths.into_iter().map(Option::unwrap).collect(),
            self.e_kf(),
            self.big.p(),
        )
    }

    /// `φ_{L/E} = φ_{K/E} ∘ φ_{L/K}`.
    pub fn herbrand_tower_check(&self) -> Result<bool> {
        let upper = self.quotient_depth_function()?;
        Ok(upper.phi().after(&self.lower.phi()) == self.big.phi())
    }

    /// `c_{L/E} = c_{L/K} + c_{K/E}`.
    pub fn different_additivity_check(&self) -> Result<bool> {
        let upper = self.quotient_depth_function()?;
        Ok(self.big.compressed_different()
            == self.lower.compressed_different() + upper.compressed_different())
    }

    fn lift(&self, kernel_subset: ElementSet) -> ElementSet {
        ElementSet::from_indices(kernel_subset.iter().map(|i| self.embedding[i]))
    }

    fn project(&self, subset: ElementSet) -> ElementSet {
        ElementSet::from_indices(subset.iter().map(|i| self.projection[i]))
    }

    /// Index values where any filtration of the tower can change.
    pub fn sample_points(&self) -> Result<Vec<Rat>> {
        let upper = self.quotient_depth_function()?;
        let phi_lk = self.lower.phi();
        let psi_lk = phi_lk.invert();
        let mut cands = self.big.jump_set();
        cands.extend(self.big.upper_jumps());
        cands.extend(self.lower.jump_set());
        cands.extend(self.lower.upper_jumps());
        cands.extend(upper.jump_set());
        cands.extend(upper.upper_jumps());
        for r in upper.jump_set() {
            cands.push(psi_lk.eval(&r)?);
        }
        for r in self.lower.upper_jumps() {
            cands.push(upper.phi().eval(&r)?);
        }
        Ok(sample_points(cands))
    }

    /// The five short exact sequences relating lower and upper filtrations of
    /// `L/K`, `L/E` and `K/E`, checked as subsets at `s`.
    pub fn exact_sequence_check(&self, s: &Rat) -> Result<ExactSequenceReport> {
        let lk = &self.lower;
        let le = &self.big;
        let ke = self.quotient_depth_function()?;
        let phi_lk = lk.phi();
        let psi_lk = phi_lk.invert();
        let psi_le = le.psi();
        let psi_ke = ke.psi();

        let triples = [
            (
                lk.filtration_at(s, false)?,
                le.filtration_at(s, false)?,
                ke.filtration_at(&phi_lk.eval(s)?, false)?,
            ),
            (
                lk.filtration_at(&psi_le.eval(s)?, false)?,
                le.upper_at(s, false)?,
                ke.upper_at(s, false)?,
            ),
            (
                lk.upper_at(&psi_ke.eval(s)?, false)?,
                le.upper_at(s, false)?,
                ke.filtration_at(&psi_ke.eval(s)?, false)?,
            ),
            (
                lk.upper_at(&psi_ke.eval(s)?, false)?,
                le.upper_at(s, false)?,
                ke.upper_at(s, false)?,
            ),
            (
                lk.upper_at(s, false)?,
                le.filtration_at(&psi_lk.eval(s)?, false)?,
                ke.filtration_at(s, false)?,
            ),
        ];
        let sequences = triples
            .iter()
            .map(|(left, middle, right)| {
                let left = self.lift(*left);
                (
                    left == middle.intersect(&self.kernel),
                    self.project(*middle) == *right,
                    middle.len() == left.len() * right.len(),
                )
            })
            .collect();
        Ok(ExactSequenceReport {
            s: s.clone(),
            sequences,
        })
    }

    /// `s > ℓ(L/E) ⇔ (s > ℓ(L/K) and φ_{L/K}(s) > ℓ(K/E))`.
    pub fn exact2_check(&self, s: &Rat) -> Result<bool> {
        let ke = self.quotient_depth_function()?;
        let (ell_le, _) = self.big.ell_and_u();
        let (ell_lk, _) = self.lower.ell_and_u();
        let (ell_ke, _) = ke.ell_and_u();
        let lhs = *s > ell_le;
        let rhs = *s > ell_lk && self.lower.phi().eval(s)? > ell_ke;
        Ok(lhs == rhs)
    }

    /// Identities relating the filtrations of `L/K`, `L/E` and `K/E` when
    /// `I(L/K) = I(L/E)^{v+}`. The kernel may also be the whole group.
    pub fn lower_upper_restriction_checks(&self) -> Result<ValidationReport> {
        let le = &self.big;
        let lk = &self.lower;
        let ke = self.quotient_depth_function()?;
        let whole = self.kernel == le.group().all();
        let mut levels = vec![Rat::zero()];
        levels.extend(le.upper_jumps());
        let v = levels
            .into_iter()
            .find(|v| le.upper_at(v, true).map(|s| s == self.kernel).unwrap_or(false));
        if v.is_none() && !whole {
            return Err(Error::Precondition(
                "kernel is not I(L/E)^{v+} for an upper jump v".into(),
            ));
        }
        let points = self.sample_points()?;
        let mut report = ValidationReport::default();

        let mut restriction = true;
        for r in &points {
            restriction &= le.filtration_at(r, false)?.intersect(&self.kernel)
                == self.lift(lk.filtration_at(r, false)?);
        }
        report.push("lower filtration restricts to kernel", restriction, "");

        let mut lowerq = true;
        let ell = match &v {
            Some(v) => Some(le.psi().eval(v)?),
            None => None,
        };
        for r in &points {
            let lk_r = self.lift(lk.filtration_at(r, false)?);
            lowerq &= match &ell {
                Some(ell) if r <= ell => lk_r == self.lift(lk.filtration_at(ell, true)?),
                _ => lk_r == le.filtration_at(r, false)?,
            };
        }
        report.push("kernel filtration above ell", lowerq, "");

        let mut upperq = true;
        let mut detail = String::new();
        if let Some(v) = &v {
            upperq &= ke.upper_at(v, true)?.len() == 1;
            for s in points.iter().filter(|s| *s <= v) {
                let big_piece = le
                    .group()
                    .section(le.upper_at(s, false)?, le.upper_at(s, true)?)?;
                let small_piece = ke
                    .group()
                    .section(ke.upper_at(s, false)?, ke.upper_at(s, true)?)?;
                if !big_piece.is_isomorphic(&small_piece) {
                    upperq = false;
                    detail = format!("graded pieces differ at {}", fmt_rat(s));
                }
            }
        }
        report.push("upper graded pieces survive the quotient", upperq, detail);
        Ok(report)
    }
}

/// Evaluates the equivalent conditions at upper index `s` and returns their
/// common value. Disagreement is an invariant error.
pub fn tfae_check(g: &DepthMultiset, s: &Rat) -> Result<(bool, TfaeWitness)> {
    let (ell, u) = g.ell_and_u();
    let psi_s = g.psi().eval(s)?;
    let c = g.compressed_different();
    let unramified = g.is_trivial();
    let w = TfaeWitness {
        s: s.clone(),
        psi_at_least_ell: psi_s >= ell,
        s_at_least_u: *s >= u,
        different_gap: c == s - &psi_s,
        filtration_trivial: g.filtration_count(&psi_s, true)? == 1,
        norm_surjective: unramified || psi_s >= ell,
        psi_s,
    };
    let all = [
        w.psi_at_least_ell,
        w.s_at_least_u,
        w.different_gap,
        w.filtration_trivial,
        w.norm_surjective,
    ];
    if all.iter().any(|&b| b != all[0]) {
        return Err(Error::Invariant(format!(
            "equivalent conditions disagree at s = {}: {all:?}",
            fmt_rat(s)
        )));
    }
    Ok((all[0], w))
}

/// For `r ≥ u`, `s − ψ(s)` is constant on `[r, ∞)`; returns that constant.
pub fn psi_gap_constancy_check(phi: &PlFunc, u: &Rat, r: &Rat) -> Result<GapConstancy> {
    if r < u {
        return Err(Error::Precondition(format!(
            "{} is below u = {}",
            fmt_rat(r),
            fmt_rat(u)
        )));
    }
    let psi = phi.invert();
    let linear_beyond = psi.kinks().iter().all(|(x, _)| x <= r) && psi.final_slope().is_one();
    let gap = r - psi.eval(r)?;
    Ok(GapConstancy {
        constant: linear_beyond,
        gap,
    })
}
