//! Depths from Eisenstein polynomials: root differences come from a resultant,
//! their valuations from a Newton polygon.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{resultant, IntPoly};
use crate::rat::{fmt_rat, from_u64, is_prime, valuation_bigint, Depth, Rat};
use crate::ramgroup::DepthMultiset;

/// Largest degree the command-line front end accepts without an override.
pub const DEFAULT_DEGREE_CAP: usize = 24;

/// A monic Eisenstein polynomial at `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EisensteinPoly {
    poly: IntPoly,
    p: u64,
}

impl EisensteinPoly {
    pub fn new(poly: IntPoly, p: u64) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::Domain(format!("{p} is not prime")));
        }
        if poly.is_zero() || poly.degree() == 0 {
            return Err(Error::Domain("degree must be at least 1".into()));
        }
        if !poly.is_monic() {
            return Err(Error::Domain("polynomial must be monic".into()));
        }
        let pb = BigInt::from(p);
        let n = poly.degree();
        if (0..n).any(|i| !poly.coeff(i).is_multiple_of(&pb)) {
            return Err(Error::Domain(format!("p = {p} does not divide every lower coefficient")));
        }
        let c0 = poly.coeff(0);
        if c0.is_zero() || c0.is_multiple_of(&(&pb * &pb)) {
            return Err(Error::Domain("p^2 divides the constant term".into()));
        }
        Ok(EisensteinPoly { poly, p })
    }

    pub fn poly(&self) -> &IntPoly {
        &self.poly
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.poly.degree()
    }
}

/// `Φ_{p^n}(1 + x)`, the minimal polynomial of `ζ_{p^n} − 1`.
pub fn cyclotomic_eisenstein(p: u64, n: u32) -> Result<EisensteinPoly> {
    if n == 0 {
        return Err(Error::Domain("level must be at least 1".into()));
    }
    let step = p.pow(n - 1) as usize;
    let mut coeffs = vec![BigInt::zero(); step * (p as usize - 1) + 1];
    for k in 0..p as usize {
        coeffs[k * step] = BigInt::one();
    }
    let phi = IntPoly::new(coeffs).taylor_shift(&BigInt::one());
    EisensteinPoly::new(phi, p)
}

/// `Res_x(f(x), f(x + y)) / y^n`, the monic polynomial of degree `n(n−1)`
/// whose roots are the differences `α_i − α_j`, `i ≠ j`.
///
/// Evaluated at `y = 1, …, n(n−1)+1` and interpolated through forward
/// differences.
pub fn difference_poly(f: &EisensteinPoly) -> Result<IntPoly> {
    let n = f.degree();
    let target = n * (n - 1);
    let values: Vec<BigInt> = (1..=target + 1)
        .into_par_iter()
        .map(|k| {
            let y = BigInt::from(k);
            let shifted = f.poly().taylor_shift(&y);
            let r = resultant(f.poly(), &shifted);
            let yn = num_traits::pow(y, n);
            let (q, rem) = r.div_rem(&yn);
            if !rem.is_zero() {
                return Err(Error::Invariant("resultant not divisible by y^n".into()));
            }
            Ok(q)
        })
        .collect::<Result<_>>()?;
    let mut diffs = Vec::with_capacity(values.len());
    let mut row = values;
    let mut factorial = BigInt::one();
    for k in 0..=target {
        if k > 0 {
            factorial *= BigInt::from(k);
        }
        let (c, rem) = row[0].div_rem(&factorial);
        if !rem.is_zero() {
            return Err(Error::Invariant("difference polynomial is not integral".into()));
        }
        diffs.push(c);
        row = row.windows(2).map(|w| &w[1] - &w[0]).collect();
    }
    // D(y) = Σ c_k (y−1)(y−2)…(y−k), nested from the top.
    let mut acc = IntPoly::constant(diffs[target].clone());
    for k in (0..target).rev() {
        let factor = IntPoly::new(vec![-BigInt::from(k + 1), BigInt::one()]);
        acc = acc.mul(&factor).add(&IntPoly::constant(diffs[k].clone()));
    }
    if acc.is_zero() || acc.coeff(0).is_zero() {
        return Err(Error::Inseparable);
    }
    Ok(acc)
}

/// Root valuations (with `val(p) = 1`) from the lower convex hull of
/// `(i, val_p(g_i))`, ascending, with multiplicities.
pub fn newton_slopes(g: &IntPoly, p: u64) -> Result<Vec<(Rat, u64)>> {
    if g.is_zero() {
        return Err(Error::Domain("zero polynomial".into()));
    }
    if g.coeff(0).is_zero() {
        return Err(Error::Domain("constant term must be nonzero".into()));
    }
    let pts: Vec<(i64, i64)> = g
        .coeffs()
        .iter()
        .enumerate()
        .filter_map(|(i, c)| valuation_bigint(c, p).map(|v| (i as i64, v as i64)))
        .collect();
    let mut hull: Vec<(i64, i64)> = Vec::new();
    for &pt in &pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // drop b unless it lies strictly below the segment a–pt
            let cross = (b.0 - a.0) * (pt.1 - a.1) - (b.1 - a.1) * (pt.0 - a.0);
            if cross <= 0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(pt);
    }
    let mut out: BTreeMap<Rat, u64> = BTreeMap::new();
    for w in hull.windows(2) {
        let (dx, dy) = (w[1].0 - w[0].0, w[1].1 - w[0].1);
        let val = Rat::new(BigInt::from(-dy), BigInt::from(dx));
        *out.entry(val).or_insert(0) += dx as u64;
    }
    Ok(out.into_iter().collect())
}

/// `val_p(Res(f, f'))`.
pub fn discriminant_valuation(f: &EisensteinPoly) -> Result<u64> {
    let r = resultant(f.poly(), &f.poly().derivative());
    valuation_bigint(&r, f.p()).ok_or(Error::Inseparable)
}

/// Per-root depths read off a polynomial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PolynomialDepths {
    /// Depths of the Galois group of the extension.
    Galois(DepthMultiset),
    /// Depths of all ordered root pairs, unreduced.
    Aggregate {
        pairs: Vec<(Rat, u64)>,
        degree: u64,
        p: u64,
    },
}

impl PolynomialDepths {
    /// The multiset seen from a single root: aggregate counts divided by the
    /// degree, plus the root itself at `∞`.
    pub fn per_root(&self) -> Vec<(Depth, u64)> {
        match self {
            PolynomialDepths::Galois(d) => d.entries().to_vec(),
            PolynomialDepths::Aggregate { pairs, degree, .. } => {
                let mut v: Vec<(Depth, u64)> = pairs
                    .iter()
                    .map(|(r, m)| (Depth::Finite(r.clone()), m / degree))
                    .collect();
                v.push((Depth::Infinite, 1));
                v
            }
        }
    }

    pub fn degree(&self) -> u64 {
        match self {
            PolynomialDepths::Galois(d) => d.order(),
            PolynomialDepths::Aggregate { degree, .. } => *degree,
        }
    }

    /// Sum of the finite per-root depths.
    pub fn compressed_different(&self) -> Rat {
        self.per_root()
            .iter()
            .filter_map(|(d, m)| d.as_finite().map(|r| r * from_u64(*m)))
            .sum()
    }

    /// Sizes of the balls `{β : depth(α, β) ≥ t}` around a root divide the
    /// degree and each divides the next larger one.
    pub fn balls_consistent(&self) -> bool {
        ball_sizes_consistent(&self.per_root(), self.degree())
    }
}

/// Ball-size consistency of a per-root multiset of an ultrametric on `n`
/// points acted on transitively.
pub fn ball_sizes_consistent(per_root: &[(Depth, u64)], n: u64) -> bool {
    let mut sorted = per_root.to_vec();
    sorted.sort();
    let mut sizes = Vec::new();
    let mut acc = 0;
    for (_, m) in sorted.iter().rev() {
        acc += m;
        sizes.push(acc);
    }
    acc == n
        && sizes.windows(2).all(|w| w[1] % w[0] == 0)
        && sizes.iter().all(|s| n % s == 0)
}

/// Depths `val(α_i − α_j) − 1/n` of a root against the others.
///
/// With `assume_galois`, the result is validated as the depth multiset of a
/// Galois group (grid, tame and wild graded structure, jump congruences) and
/// an error is returned if it cannot be one.
pub fn depth_multiset_from_polynomial(
    f: &EisensteinPoly,
    assume_galois: bool,
) -> Result<PolynomialDepths> {
    let n = f.degree() as u64;
    let p = f.p();
    let pairs: Vec<(Rat, u64)> = if n == 1 {
        Vec::new()
    } else {
        let d = difference_poly(f)?;
        let inv_n = from_u64(n).recip();
        newton_slopes(&d, p)?
            .into_iter()
            .map(|(v, m)| (v - &inv_n, m))
            .collect()
    };
    if let Some((r, m)) = pairs.iter().find(|(_, m)| m % n != 0) {
        return Err(Error::NotGalois(format!(
            "{m} root pairs at depth {} is not a multiple of {n}",
            fmt_rat(r)
        )));
    }
    let aggregate = PolynomialDepths::Aggregate {
        pairs,
        degree: n,
        p,
    };
    if !assume_galois {
        return Ok(aggregate);
    }
    let multiset = DepthMultiset::new(aggregate.per_root(), n, p)
        .map_err(|e| Error::NotGalois(e.to_string()))?;
    let report = multiset.validate(&Depth::Infinite);
    if let Some(bad) = report.failures().first() {
        return Err(Error::NotGalois(format!("{} fails", bad.name)));
    }
    if !aggregate.balls_consistent() {
        return Err(Error::NotGalois("ball sizes do not nest".into()));
    }
    Ok(PolynomialDepths::Galois(multiset))
}
