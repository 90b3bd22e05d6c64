//! How depths move under trace, norm, characters, Langlands parameters and
//! restriction of scalars, plus the norm-one torus profile and the coset
//! distribution check.

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pl::PlFunc;
use crate::rat::{fmt_rat, int, on_grid, parse_rat, Depth, Rat};
use crate::ramgroup::{DepthMultiset, ValidationReport};
use crate::tower::TowerDatum;

/// The invariants of `L/E` the depth-transfer formulas need.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionSummary {
    pub phi: PlFunc,
    pub ell: Rat,
    pub u: Rat,
    pub c: Rat,
    pub e_ef: u64,
    pub e_lf: u64,
    pub p: u64,
    pub unramified: bool,
}

impl ExtensionSummary {
    pub fn from_multiset(d: &DepthMultiset, e_ef: u64) -> Result<Self> {
        if e_ef == 0 || d.e_lf() % e_ef != 0 {
            return Err(Error::Divisibility(format!(
                "e(E/F) = {e_ef} does not divide e(L/F) = {}",
                d.e_lf()
            )));
        }
        let (ell, u) = d.ell_and_u();
        let summary = ExtensionSummary {
            phi: d.phi(),
            c: d.compressed_different(),
            ell,
            u,
            e_ef,
            e_lf: d.e_lf(),
            p: d.p(),
            unramified: d.is_trivial(),
        };
        debug_assert_eq!(summary.c, &summary.u - &summary.ell);
        Ok(summary)
    }

    pub fn psi(&self) -> PlFunc {
        self.phi.invert()
    }
}

fn nonnegative(x: &Rat) -> Result<()> {
    if x.is_negative() {
        return Err(Error::Domain(format!("negative depth {}", fmt_rat(x))));
    }
    Ok(())
}

/// `Tr(L_{≥s}) = E_{≥ s+c}`.
pub fn trace_depth_image(s: &Rat, ext: &ExtensionSummary) -> Rat {
    s + &ext.c
}

/// Depth `φ(s)` of the norm image of `L^×_{≥s}`, and whether the norm is onto
/// `E^×_{≥φ(s)}`.
pub fn norm_depth_image(s: &Rat, ext: &ExtensionSummary) -> Result<(Rat, bool)> {
    nonnegative(s)?;
    let surjective = if ext.unramified { true } else { *s > ext.ell };
    Ok((ext.phi.eval(s)?, surjective))
}

/// Depth of `Λ_L = Λ_E ∘ Tr` given the depth of `Λ_E`.
pub fn additive_char_depth(base_depth: &Rat, ext: &ExtensionSummary) -> Rat {
    base_depth + &ext.c
}

/// Parameter depth of a character of depth `r` of the induced torus.
pub fn char_to_param_depth(r: &Rat, ext: &ExtensionSummary) -> Result<Rat> {
    nonnegative(r)?;
    ext.phi.eval(r)
}

/// Character depth of a parameter of depth `d`.
pub fn param_to_char_depth(d: &Rat, ext: &ExtensionSummary) -> Result<Rat> {
    nonnegative(d)?;
    ext.psi().eval(d)
}

/// Depth over `F` of the parameter obtained from one of depth `d` over `E`.
pub fn res_scalars_param_depth(d: &Rat, ext: &ExtensionSummary) -> Result<Rat> {
    nonnegative(d)?;
    ext.psi().eval(d)
}

/// Parameter depths for a character of `G_m(F) × Res_{E/F} G_m` whose factors
/// have depths `r` and `s`: the first is unchanged, the second is `φ(s)`.
pub fn product_torus_depths(r: &Rat, s: &Rat, ext: &ExtensionSummary) -> Result<(Rat, Rat)> {
    nonnegative(r)?;
    Ok((r.clone(), char_to_param_depth(s, ext)?))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Glyph {
    /// trivial
    Empty,
    /// order two
    Half,
    /// the whole residue field (or its units at depth zero)
    Full,
}

impl Glyph {
    pub fn as_str(&self) -> &'static str {
        match self {
            Glyph::Empty => "empty",
            Glyph::Half => "half",
            Glyph::Full => "full",
        }
    }
}

impl fmt::Display for Glyph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One column of the norm-one profile at depth `r`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProfileRow {
    pub r: Rat,
    pub torus: Glyph,
    pub gm_l: Glyph,
    pub gm_f: Glyph,
    /// `I(L/F)^{r:r+}`
    pub inertia: Glyph,
    /// Depth `φ(r)` of the norm image of `G_m(L)_{=r}`.
    pub norm_target: Rat,
}

/// Graded pieces of `L^1`, `L^×`, `F^×` and the upper inertia filtration for
/// a wild quadratic `L/F` with compressed different `c`, on the grid
/// `(1/2)·Z ∩ [0, r_max]`.
pub fn norm_one_profile(c: &Rat, r_max: &Rat) -> Result<Vec<ProfileRow>> {
    if !c.is_positive() || !on_grid(c, 2) {
        return Err(Error::Domain(format!(
            "c = {} is not a positive half-integer",
            fmt_rat(c)
        )));
    }
    if r_max < c {
        return Err(Error::Domain("r_max must be at least c".into()));
    }
    let phi = PlFunc::from_slopes(&[(c.clone(), int(2))], int(1))?;
    let u = phi.eval(c)?;
    let steps = (r_max * int(2)).floor().to_integer();
    let mut rows = Vec::new();
    let mut k = num_bigint::BigInt::zero();
    while k <= steps {
        let r = Rat::new(k.clone(), 2.into());
        let target = phi.eval(&r)?;
        let torus = if r < *c {
            Glyph::Empty
        } else if r == *c {
            Glyph::Half
        } else if target.is_integer() {
            Glyph::Empty
        } else {
            Glyph::Full
        };
        rows.push(ProfileRow {
            torus,
            gm_l: Glyph::Full,
            gm_f: if r.is_integer() { Glyph::Full } else { Glyph::Empty },
            inertia: if r == u { Glyph::Half } else { Glyph::Empty },
            norm_target: target,
            r,
        });
        k += 1;
    }
    Ok(rows)
}

pub fn profile_csv(rows: &[ProfileRow]) -> String {
    let mut out = String::from("r,torus,gm_l,gm_f,inertia,norm_target\n");
    for row in rows {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            fmt_rat(&row.r),
            row.torus,
            row.gm_l,
            row.gm_f,
            row.inertia,
            fmt_rat(&row.norm_target)
        ));
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GradedLevel {
    /// depth zero: the graded piece of `L^×` is `F_q^×`
    Zero,
    /// positive depth: the graded piece is `F_q`
    Positive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormImage {
    Isomorphism,
    Size(u64),
    /// The target graded piece is trivial; no image size is asserted.
    TargetTrivial,
}

/// Size of the norm image of `L^×_{=r}` given `|I(L/K)^{r:r+}|`, from the
/// exact sequence `1 → I^{r:r+} → L^×_{=r} → K^×_{=φ(r)}`.
pub fn norm_graded_image_size(
    q: u64,
    graded_inertia_size: u64,
    level: GradedLevel,
    target_nonzero: bool,
) -> Result<NormImage> {
    if q < 2 {
        return Err(Error::Domain("q must be a prime power".into()));
    }
    let source = match level {
        GradedLevel::Zero => q - 1,
        GradedLevel::Positive => q,
    };
    if graded_inertia_size == 0 || source % graded_inertia_size != 0 {
        return Err(Error::Inconsistent(format!(
            "graded inertia of size {graded_inertia_size} cannot embed in a group of order {source}"
        )));
    }
    if !target_nonzero {
        return Ok(NormImage::TargetTrivial);
    }
    if graded_inertia_size == 1 {
        return Ok(NormImage::Isomorphism);
    }
    Ok(NormImage::Size(source / graded_inertia_size))
}

/// Depths of the cosets of one open subgroup; `None` marks the trivial coset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetLevel {
    pub c: String,
    pub depths: Vec<Option<String>>,
}

/// Coset depths for `I_L ≤ I_K ≤ I_E`: the coarse level (cosets of `I_K`),
/// optionally a fine level (cosets of `I_L`) with the coarse coset containing
/// each fine one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CosetDepthData {
    pub coarse: CosetLevel,
    pub fine: Option<CosetLevel>,
    #[serde(default)]
    pub refinement: Vec<usize>,
}

struct ParsedLevel {
    c: Rat,
    depths: Vec<Option<Rat>>,
    trivial: usize,
}

fn parse_level(level: &CosetLevel) -> Result<ParsedLevel> {
    let c = parse_rat(&level.c)?;
    let depths = level
        .depths
        .iter()
        .map(|d| d.as_deref().map(parse_rat).transpose())
        .collect::<Result<Vec<_>>>()?;
    let trivial: Vec<usize> = (0..depths.len()).filter(|&i| depths[i].is_none()).collect();
    if trivial.len() != 1 {
        return Err(Error::Invariant("each level needs exactly one trivial coset".into()));
    }
    if depths.iter().flatten().any(|d| d.is_negative()) || c.is_negative() {
        return Err(Error::Invariant("coset depths must be nonnegative".into()));
    }
    Ok(ParsedLevel {
        c,
        depths,
        trivial: trivial[0],
    })
}

fn level_from(c: &Rat, depths: Vec<Option<Rat>>) -> CosetLevel {
    CosetLevel {
        c: fmt_rat(c),
        depths: depths.into_iter().map(|d| d.map(|r| fmt_rat(&r))).collect(),
    }
}

impl CosetDepthData {
    /// Coset data of `L/K/E` from a tower. The fine level lists elements of
    /// `I(L/E)` with their depths; the coarse level lists cosets of `I(L/K)`
    /// with depths from the max-then-`φ_{L/K}` formula.
    pub fn from_tower(t: &TowerDatum) -> Result<Self> {
        let big = t.big();
        let n = big.order();
        let fine: Vec<Option<Rat>> = (0..n).map(|s| big.depth(s).as_finite().cloned()).collect();
        let mut coarse = vec![None; t.quotient_group().order()];
        for sigma in 0..n {
            let q = t.projection()[sigma];
            if coarse[q].is_none() {
                coarse[q] = Some(t.quotient_depth_max(sigma));
            }
        }
        let coarse: Vec<Option<Rat>> = coarse
            .into_iter()
            .map(|d| d.and_then(|d: Depth| d.as_finite().cloned()))
            .collect();
        let c_coarse: Rat = coarse.iter().flatten().sum();
        Ok(CosetDepthData {
            coarse: level_from(&c_coarse, coarse),
            fine: Some(level_from(&big.compressed_different(), fine)),
            refinement: t.projection().to_vec(),
        })
    }

    /// Additivity across the refinement: a nontrivial coarse coset has the
    /// total depth of the fine cosets inside it, and inside the trivial coarse
    /// coset the nontrivial fine depths add up to `c_fine − c_coarse`.
    pub fn weil_distribution_check(&self) -> Result<ValidationReport> {
        let coarse = parse_level(&self.coarse)?;
        let mut report = ValidationReport::default();
        let Some(fine) = &self.fine else {
            report.push("distribution additivity", true, "single level");
            return Ok(report);
        };
        let fine = parse_level(fine)?;
        if self.refinement.len() != fine.depths.len()
            || self.refinement.iter().any(|&k| k >= coarse.depths.len())
        {
            return Err(Error::Invariant("refinement map has the wrong shape".into()));
        }
        if self.refinement[fine.trivial] != coarse.trivial {
            return Err(Error::Invariant("trivial cosets must be nested".into()));
        }
        let mut sums = vec![Rat::zero(); coarse.depths.len()];
        for (i, d) in fine.depths.iter().enumerate() {
            if let Some(d) = d {
                sums[self.refinement[i]] += d;
            }
        }
        let mut outer_ok = true;
        let mut detail = String::new();
        for (k, d) in coarse.depths.iter().enumerate() {
            if let Some(d) = d {
                if *d != sums[k] {
                    outer_ok = false;
                    detail = format!("coset {k}: {} vs {}", fmt_rat(d), fmt_rat(&sums[k]));
                }
            }
        }
        report.push("nontrivial cosets additive", outer_ok, detail);
        let inner = &fine.c - &coarse.c;
        report.push(
            "trivial coset carries the different",
            sums[coarse.trivial] == inner,
            format!("{} vs {}", fmt_rat(&sums[coarse.trivial]), fmt_rat(&inner)),
        );
        Ok(report)
    }
}

/// `φ_{L/E} = φ_{L̃/E} ∘ ψ_{L̃/L}` from a Galois closure `L̃`.
pub fn nongalois_phi(phi_closure_e: &PlFunc, phi_closure_l: &PlFunc) -> PlFunc {
    phi_closure_e.after(&phi_closure_l.invert())
}

/// A row of the wild quadratic example `φ(r) = 2r` up to `c`, then `r + c`.
pub fn quadratic_phi(c: &Rat) -> Result<PlFunc> {
    if !c.is_positive() {
        return Err(Error::Domain("c must be positive".into()));
    }
    PlFunc::from_slopes(&[(c.clone(), int(2))], int(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ElementSet;
    use crate::presets::{cyclotomic_function, cyclotomic_multiset, quadratic, serre_quaternion};
    use crate::rat::rat;

    fn summary_of(d: &DepthMultiset) -> ExtensionSummary {
        ExtensionSummary::from_multiset(d, 1).unwrap()
    }

    #[test]
    fn trace_and_norm() {
        let quad = summary_of(&quadratic(&int(1), 1).unwrap().multiset());
        assert_eq!(trace_depth_image(&int(0), &quad), int(1));
        let tame = summary_of(&crate::presets::tame(3, 2).unwrap().multiset());
        assert_eq!(trace_depth_image(&int(5), &tame), int(5));
        let nine = summary_of(&cyclotomic_multiset(3, 2).unwrap());
        assert_eq!(trace_depth_image(&rat(1, 3), &nine), int(1));

        let unram = summary_of(&DepthMultiset::trivial(1, 2).unwrap());
        assert_eq!(norm_depth_image(&int(0), &unram).unwrap(), (int(0), true));
        let serre = summary_of(&serre_quaternion().multiset());
        assert_eq!(norm_depth_image(&rat(1, 4), &serre).unwrap(), (rat(5, 4), false));
        assert_eq!(norm_depth_image(&rat(1, 2), &serre).unwrap(), (rat(13, 8), true));
        assert!(norm_depth_image(&rat(-1, 2), &serre).is_err());
    }

    #[test]
    fn characters_and_parameters() {
        let serre = summary_of(&serre_quaternion().multiset());
        assert_eq!(additive_char_depth(&int(0), &serre), rat(9, 8));
        let nine = summary_of(&cyclotomic_multiset(3, 2).unwrap());
        assert_eq!(char_to_param_depth(&int(0), &nine).unwrap(), int(0));
        assert_eq!(char_to_param_depth(&int(1), &nine).unwrap(), rat(5, 3));
        assert_eq!(param_to_char_depth(&rat(5, 3), &nine).unwrap(), int(1));
        assert_eq!(res_scalars_param_depth(&int(1), &nine).unwrap(), rat(1, 3));
        assert_eq!(res_scalars_param_depth(&int(3), &nine).unwrap(), int(3) - rat(2, 3));
        let tame = summary_of(&crate::presets::tame(4, 3).unwrap().multiset());
        assert_eq!(char_to_param_depth(&rat(7, 2), &tame).unwrap(), rat(7, 2));
        assert_eq!(
            product_torus_depths(&int(2), &int(1), &nine).unwrap(),
            (int(2), rat(5, 3))
        );
    }

    #[test]
    fn profile_three_halves() {
        let rows = norm_one_profile(&rat(3, 2), &int(5)).unwrap();
        assert_eq!(rows.len(), 11);
        let torus: Vec<Glyph> = rows.iter().map(|r| r.torus).collect();
        use Glyph::*;
        assert_eq!(
            torus,
            vec![Empty, Empty, Empty, Half, Full, Empty, Full, Empty, Full, Empty, Full]
        );
        assert!(rows.iter().all(|r| r.gm_l == Full));
        assert_eq!(rows[6].inertia, Half);
        assert_eq!(rows.iter().filter(|r| r.inertia == Half).count(), 1);
        assert_eq!(rows[1].norm_target, int(1));
        assert_eq!(rows[4].norm_target, rat(7, 2));
        assert!(norm_one_profile(&rat(1, 3), &int(5)).is_err());
        assert!(norm_one_profile(&int(2), &int(1)).is_err());
    }

    #[test]
    fn profile_for_root_two() {
        let rows = norm_one_profile(&int(1), &int(2)).unwrap();
        assert_eq!(rows[2].torus, Glyph::Half);
        assert_eq!(rows[3].torus, Glyph::Full);
        assert_eq!(rows[4].torus, Glyph::Empty);
        assert!(profile_csv(&rows).starts_with("r,torus,gm_l,gm_f,inertia,norm_target\n0,empty,full,full,empty,0\n"));
    }

    #[test]
    fn graded_image() {
        use GradedLevel::*;
        assert_eq!(norm_graded_image_size(2, 2, Positive, true).unwrap(), NormImage::Size(1));
        assert_eq!(norm_graded_image_size(7, 1, Positive, true).unwrap(), NormImage::Isomorphism);
        assert_eq!(norm_graded_image_size(4, 2, Positive, true).unwrap(), NormImage::Size(2));
        assert_eq!(norm_graded_image_size(7, 3, Zero, true).unwrap(), NormImage::Size(2));
        assert_eq!(norm_graded_image_size(4, 2, Positive, false).unwrap(), NormImage::TargetTrivial);
        assert!(matches!(
            norm_graded_image_size(4, 3, Positive, true),
            Err(Error::Inconsistent(_))
        ));
    }

    #[test]
    fn weil_on_towers() {
        let t = TowerDatum::new(serre_quaternion(), ElementSet::from_indices([0, 1])).unwrap();
        let data = CosetDepthData::from_tower(&t).unwrap();
        assert!(data.weil_distribution_check().unwrap().all_passed());
        let c = cyclotomic_function(3, 2).unwrap();
        let wild = c.filtration_at(&rat(1, 3), false).unwrap();
        let t = TowerDatum::new(c, wild).unwrap();
        let data = CosetDepthData::from_tower(&t).unwrap();
        assert!(data.weil_distribution_check().unwrap().all_passed());

        let single = CosetDepthData {
            coarse: CosetLevel { c: "0".into(), depths: vec![None] },
            fine: None,
            refinement: vec![],
        };
        assert!(single.weil_distribution_check().unwrap().all_passed());

        let mut broken = CosetDepthData::from_tower(&t).unwrap();
        broken.coarse.depths[1] = Some("5".into());
        assert!(!broken.weil_distribution_check().unwrap().all_passed());
    }

    #[test]
    fn nongalois_phi_two_routes() {
        let g = serre_quaternion();
        let t = TowerDatum::new(g.clone(), ElementSet::from_indices([0, 1])).unwrap();
        let direct = t.quotient_depth_function().unwrap().phi();
        assert_eq!(nongalois_phi(&g.phi(), &t.kernel_function().phi()), direct);
        assert_eq!(nongalois_phi(&g.phi(), &PlFunc::identity()), g.phi());
        assert!(nongalois_phi(&g.phi(), &g.phi()).is_identity());
        assert_eq!(quadratic_phi(&int(1)).unwrap(), quadratic(&int(1), 1).unwrap().phi());
    }
}
