//! Conversion between normalized indices (`val(F^×) = Z`) and the classical
//! indexing, where lower indices are measured by the valuation of `L` and upper
//! indices by that of `E`.

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::group::ElementSet;
use crate::pl::PlFunc;
use crate::rat::{fmt_rat, from_u64, Rat};
use crate::tower::TowerDatum;

/// Ramification indices `e(E/F)` and `e(L/F)` with `e(E/F) | e(L/F)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ClassicalContext {
    pub e_ef: u64,
    pub e_lf: u64,
}

impl ClassicalContext {
    pub fn new(e_ef: u64, e_lf: u64) -> Result<Self> {
        if e_ef == 0 || e_lf == 0 || e_lf % e_ef != 0 {
            return Err(Error::Divisibility(format!(
                "e(E/F) = {e_ef} must divide e(L/F) = {e_lf}"
            )));
        }
        Ok(ClassicalContext { e_ef, e_lf })
    }

    fn ef(&self) -> Rat {
        from_u64(self.e_ef)
    }

    fn lf(&self) -> Rat {
        from_u64(self.e_lf)
    }
}

/// `φ̃(y) = e(E/F) · φ(y / e(L/F))`.
pub fn phi_to_classical(phi: &PlFunc, ctx: &ClassicalContext) -> PlFunc {
    phi.rescale(&ctx.lf(), &ctx.ef()).expect("positive scales")
}

/// `φ(x) = φ̃(e(L/F) · x) / e(E/F)`.
pub fn phi_from_classical(phi: &PlFunc, ctx: &ClassicalContext) -> PlFunc {
    phi.rescale(&ctx.lf().recip(), &ctx.ef().recip())
        .expect("positive scales")
}

/// `ψ̃(y) = e(L/F) · ψ(y / e(E/F))`.
pub fn psi_to_classical(psi: &PlFunc, ctx: &ClassicalContext) -> PlFunc {
    psi.rescale(&ctx.ef(), &ctx.lf()).expect("positive scales")
}

/// `ψ(y) = ψ̃(e(E/F) · y) / e(L/F)`.
pub fn psi_from_classical(psi: &PlFunc, ctx: &ClassicalContext) -> PlFunc {
    psi.rescale(&ctx.ef().recip(), &ctx.lf().recip())
        .expect("positive scales")
}

fn nonnegative(r: &Rat) -> Result<()> {
    if r.is_negative() {
        return Err(Error::Domain(format!("negative index {}", fmt_rat(r))));
    }
    Ok(())
}

pub fn lower_index_to_classical(r: &Rat, e_lf: u64) -> Result<Rat> {
    nonnegative(r)?;
    Ok(r * from_u64(e_lf))
}

pub fn lower_index_from_classical(r: &Rat, e_lf: u64) -> Result<Rat> {
    nonnegative(r)?;
    Ok(r / from_u64(e_lf))
}

pub fn upper_index_to_classical(t: &Rat, e_ef: u64) -> Result<Rat> {
    nonnegative(t)?;
    Ok(t * from_u64(e_ef))
}

pub fn upper_index_from_classical(t: &Rat, e_ef: u64) -> Result<Rat> {
    nonnegative(t)?;
    Ok(t / from_u64(e_ef))
}

/// `I(L/E)^s ∩ I(L/K) = I(L/K)^{ψ_{K/E}(s)}` at every sample point, checked
/// once in normalized indices and once through the classical functions and
/// indices (with base ramification `e(E/F) = e_ef`).
pub fn comparison_lemma_check(tower: &TowerDatum, e_ef: u64) -> Result<bool> {
    let le = tower.big();
    let lk = tower.kernel_function();
    let ke = tower.quotient_depth_function()?;
    let e_kf = tower.e_kf();
    let ctx_ke = ClassicalContext::new(e_ef, e_kf)?;
    let psi_ke = ke.psi();
    let psi_ke_classical = psi_to_classical(&psi_ke, &ctx_ke);
    let lift = |s: ElementSet| {
        ElementSet::from_indices(s.iter().map(|i| tower.kernel_embedding()[i]))
    };
    let mut ok = true;
    for s in tower.sample_points()? {
        let left = le.upper_at(&s, false)?.intersect(&tower.kernel());
        let direct = lift(lk.upper_at(&psi_ke.eval(&s)?, false)?);

        let t = upper_index_to_classical(&s, e_ef)?;
        let big_classical = le.upper_at(&upper_index_from_classical(&t, e_ef)?, false)?;
        let sub_index = psi_ke_classical.eval(&t)?;
        let sub_classical = lift(lk.upper_at(&upper_index_from_classical(&sub_index, e_kf)?, false)?);
        ok &= left == direct && big_classical.intersect(&tower.kernel()) == sub_classical;
    }
    Ok(ok)
}

/// Classical lower jumps `e(L/F)·r` of the normalized jumps `r`.
pub fn classical_jumps(jumps: &[Rat], e_lf: u64) -> Vec<Rat> {
    jumps
        .iter()
        .map(|r| r * from_u64(e_lf))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::ElementSet;
    use crate::presets::{cyclotomic_function, cyclotomic_multiset, serre_quaternion};
    use crate::rat::{int, rat};

    #[test]
    fn cyclotomic_nine_classical() {
        let phi = cyclotomic_multiset(3, 2).unwrap().phi();
        let ctx = ClassicalContext::new(1, 6).unwrap();
        let classical = phi_to_classical(&phi, &ctx);
        assert_eq!(phi.eval(&rat(1, 3)).unwrap(), int(1));
        assert_eq!(classical.eval(&int(2)).unwrap(), int(1));
        assert_eq!(phi_from_classical(&classical, &ctx), phi);
        let psi = phi.invert();
        assert_eq!(psi_to_classical(&psi, &ctx), classical.invert());
        assert_eq!(psi_from_classical(&classical.invert(), &ctx), psi);
    }

    #[test]
    fn tame_is_identity() {
        let ctx = ClassicalContext::new(4, 4).unwrap();
        assert!(phi_to_classical(&PlFunc::identity(), &ctx).is_identity());
        assert!(ClassicalContext::new(3, 4).is_err());
    }

    #[test]
    fn index_scalings() {
        assert_eq!(lower_index_to_classical(&rat(1, 8), 8).unwrap(), int(1));
        assert_eq!(lower_index_to_classical(&int(0), 8).unwrap(), int(0));
        assert_eq!(lower_index_to_classical(&rat(1, 3), 6).unwrap(), int(2));
        assert_eq!(upper_index_to_classical(&rat(3, 2), 1).unwrap(), rat(3, 2));
        assert_eq!(upper_index_to_classical(&rat(3, 4), 2).unwrap(), rat(3, 2));
        assert!(upper_index_to_classical(&rat(-1, 4), 2).is_err());
        assert_eq!(
            classical_jumps(&[rat(1, 8), rat(3, 8), rat(7, 8)], 8),
            vec![int(1), int(3), int(7)]
        );
    }

    #[test]
    fn comparison_on_towers() {
        let g = serre_quaternion();
        let center = ElementSet::from_indices([0, 1]);
        assert!(comparison_lemma_check(&TowerDatum::new(g.clone(), center).unwrap(), 1).unwrap());
        assert!(comparison_lemma_check(&TowerDatum::new(g, ElementSet::singleton(0)).unwrap(), 1).unwrap());
        let c = cyclotomic_function(3, 2).unwrap();
        let wild = c.filtration_at(&rat(1, 3), false).unwrap();
        assert!(comparison_lemma_check(&TowerDatum::new(c, wild).unwrap(), 1).unwrap());
    }
}
