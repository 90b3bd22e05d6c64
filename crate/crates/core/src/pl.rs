//! Continuous, strictly increasing piecewise-linear functions on `[0, ∞)` over
//! exact rationals. Herbrand functions `φ` and `ψ` live here.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rat::{fmt_rat, parse_rat, Depth, Rat};

/// A piecewise-linear function with `f(0) = 0`.
///
/// Breakpoints are canonical: they start at the origin, x strictly increases,
/// and no interior point (nor the last point) sits between two segments of
/// equal slope. Structural equality is therefore functional equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlFunc {
    points: Vec<(Rat, Rat)>,
    final_slope: Rat,
}

impl PlFunc {
    pub fn identity() -> Self {
        PlFunc {
            points: vec![(Rat::zero(), Rat::zero())],
            final_slope: Rat::one(),
        }
    }

    /// Builds a function from breakpoints `(x, y)` starting at `(0, 0)` and
    /// the slope beyond the last breakpoint.
    pub fn new(points: Vec<(Rat, Rat)>, final_slope: Rat) -> Result<Self> {
        match points.first() {
            Some((x, y)) if x.is_zero() && y.is_zero() => {}
            _ => {
                return Err(Error::Invariant(
                    "piecewise-linear function must start at (0,0)".into(),
                ))
            }
        }
        for w in points.windows(2) {
            if w[1].0 <= w[0].0 || w[1].1 <= w[0].1 {
                return Err(Error::Invariant(format!(
                    "breakpoints not strictly increasing at ({}, {})",
                    fmt_rat(&w[1].0),
                    fmt_rat(&w[1].1)
                )));
            }
        }
        if !final_slope.is_positive() {
            return Err(Error::Invariant("final slope must be positive".into()));
        }
        Ok(Self::canonical(points, final_slope))
    }

    /// Builds a function from consecutive pieces `(end_x, slope)` followed by
    /// the final slope.
    pub fn from_slopes(pieces: &[(Rat, Rat)], final_slope: Rat) -> Result<Self> {
        let mut points = vec![(Rat::zero(), Rat::zero())];
        for (end, slope) in pieces {
            let (x0, y0) = points.last().unwrap().clone();
            if !slope.is_positive() {
                return Err(Error::Invariant("slopes must be positive".into()));
            }
            points.push((end.clone(), y0 + slope * (end - &x0)));
        }
        Self::new(points, final_slope)
    }

    fn canonical(points: Vec<(Rat, Rat)>, final_slope: Rat) -> Self {
        let mut out: Vec<(Rat, Rat)> = Vec::with_capacity(points.len());
        let mut slopes: Vec<Rat> = Vec::with_capacity(points.len());
        for p in points {
            if let Some(last) = out.last() {
                let s = (&p.1 - &last.1) / (&p.0 - &last.0);
                if slopes.last() == Some(&s) {
                    out.pop();
                    slopes.pop();
                }
                let last = out.last().unwrap();
                let s = (&p.1 - &last.1) / (&p.0 - &last.0);
                slopes.push(s);
            }
            out.push(p);
        }
        if out.len() > 1 && slopes.last() == Some(&final_slope) {
            out.pop();
        }
        PlFunc {
            points: out,
            final_slope,
        }
    }

    pub fn breakpoints(&self) -> &[(Rat, Rat)] {
        &self.points
    }

    /// Breakpoints other than the origin.
    pub fn kinks(&self) -> &[(Rat, Rat)] {
        &self.points[1..]
    }

    pub fn final_slope(&self) -> &Rat {
        &self.final_slope
    }

    /// Slopes of each segment, ending with the final slope.
    pub fn slopes(&self) -> Vec<Rat> {
        let mut out: Vec<Rat> = self
            .points
            .windows(2)
            .map(|w| (&w[1].1 - &w[0].1) / (&w[1].0 - &w[0].0))
            .collect();
        out.push(self.final_slope.clone());
        out
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }

    /// Index of the segment containing `x` (segment `i` starts at point `i`).
    fn segment(&self, x: &Rat) -> usize {
        match self.points.binary_search_by(|(px, _)| px.cmp(x)) {
            Ok(i) => i,
            Err(i) => i - 1,
        }
    }

    fn slope_of_segment(&self, i: usize) -> Rat {
        if i + 1 < self.points.len() {
            let (a, b) = (&self.points[i], &self.points[i + 1]);
            (&b.1 - &a.1) / (&b.0 - &a.0)
        } else {
            self.final_slope.clone()
        }
    }

    pub fn eval(&self, x: &Rat) -> Result<Rat> {
        if x.is_negative() {
            return Err(Error::Domain(format!(
                "cannot evaluate at negative {}",
                fmt_rat(x)
            )));
        }
        let i = self.segment(x);
        let (px, py) = &self.points[i];
        Ok(py + self.slope_of_segment(i) * (x - px))
    }

    pub fn eval_depth(&self, x: &Depth) -> Result<Rat> {
        match x {
            Depth::Finite(r) => self.eval(r),
            Depth::Infinite => Err(Error::Domain("cannot evaluate at infinity".into())),
        }
    }

    /// Derivative just to the right of `x`.
    pub fn right_slope(&self, x: &Rat) -> Result<Rat> {
        if x.is_negative() {
            return Err(Error::Domain("negative argument".into()));
        }
        Ok(self.slope_of_segment(self.segment(x)))
    }

    /// Derivative just to the left of `x > 0`.
    pub fn left_slope(&self, x: &Rat) -> Result<Rat> {
        if !x.is_positive() {
            return Err(Error::Domain("left slope needs a positive argument".into()));
        }
        let i = match self.points.binary_search_by(|(px, _)| px.cmp(x)) {
            Ok(i) => i - 1,
            Err(i) => i - 1,
        };
        Ok(self.slope_of_segment(i))
    }

    /// The compositional inverse; slopes become reciprocals.
    pub fn invert(&self) -> PlFunc {
        let points = self
            .points
            .iter()
            .map(|(x, y)| (y.clone(), x.clone()))
            .collect();
        PlFunc {
            points,
            final_slope: self.final_slope.recip(),
        }
    }

    /// `self ∘ inner`.
    pub fn after(&self, inner: &PlFunc) -> PlFunc {
        let inner_inv = inner.invert();
        let mut xs: Vec<Rat> = inner.points.iter().map(|(x, _)| x.clone()).collect();
        xs.extend(
            self.points
                .iter()
                .map(|(x, _)| inner_inv.eval(x).expect("nonnegative breakpoint")),
        );
        xs.sort();
        xs.dedup();
        let points = xs
            .into_iter()
            .map(|x| {
                let y = self
                    .eval(&inner.eval(&x).expect("nonnegative"))
                    .expect("nonnegative");
                (x, y)
            })
            .collect();
        Self::canonical(points, &self.final_slope * &inner.final_slope)
    }

    /// Nonincreasing slopes.
    pub fn is_concave(&self) -> bool {
        self.slopes().windows(2).all(|w| w[0] >= w[1])
    }

    /// Nondecreasing slopes.
    pub fn is_convex(&self) -> bool {
        self.slopes().windows(2).all(|w| w[0] <= w[1])
    }

    /// `x ↦ y_scale · f(x / x_scale)`.
    pub fn rescale(&self, x_scale: &Rat, y_scale: &Rat) -> Result<PlFunc> {
        if !x_scale.is_positive() || !y_scale.is_positive() {
            return Err(Error::Domain("scale factors must be positive".into()));
        }
        let points = self
            .points
            .iter()
            .map(|(x, y)| (x * x_scale, y * y_scale))
            .collect();
        Ok(PlFunc {
            points,
            final_slope: &self.final_slope * y_scale / x_scale,
        })
    }

    /// CSV rows `x,y,slope_after` with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("x,y,slope_after\n");
        let slopes = self.slopes();
        for ((x, y), s) in self.points.iter().zip(slopes.iter()) {
            out.push_str(&format!("{},{},{}\n", fmt_rat(x), fmt_rat(y), fmt_rat(s)));
        }
        out
    }
}

/// `outer ∘ inner`.
pub fn compose(outer: &PlFunc, inner: &PlFunc) -> PlFunc {
    outer.after(inner)
}

impl fmt::Display for PlFunc {
    /// `[(x1,y1),...] + slope s`
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, (x, y)) in self.points.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "({},{})", fmt_rat(x), fmt_rat(y))?;
        }
        write!(f, "] + slope {}", fmt_rat(&self.final_slope))
    }
}

impl FromStr for PlFunc {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("expected `[(x,y),...] + slope s`, got `{s}`"));
        let (list, slope) = s.rsplit_once("+ slope").ok_or_else(bad)?;
        let list = list.trim();
        let inner = list
            .strip_prefix('[')
            .and_then(|l| l.strip_suffix(']'))
            .ok_or_else(bad)?;
        let mut points = Vec::new();
        for chunk in inner.split(')') {
            let chunk = chunk.trim().trim_start_matches(',').trim();
            if chunk.is_empty() {
                continue;
            }
            let body = chunk.strip_prefix('(').ok_or_else(bad)?;
            let (x, y) = body.split_once(',').ok_or_else(bad)?;
            points.push((parse_rat(x)?, parse_rat(y)?));
        }
        PlFunc::new(points, parse_rat(slope)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    fn serre_phi() -> PlFunc {
        PlFunc::new(
            vec![(int(0), int(0)), (rat(1, 8), int(1)), (rat(3, 8), rat(3, 2))],
            int(1),
        )
        .unwrap()
    }

    fn quadratic_phi(ell: Rat) -> PlFunc {
        PlFunc::from_slopes(&[(ell, int(2))], int(1)).unwrap()
    }

    #[test]
    fn eval_identity_and_serre() {
        assert_eq!(PlFunc::identity().eval(&rat(7, 3)).unwrap(), rat(7, 3));
        let phi = serre_phi();
        assert_eq!(phi.eval(&rat(1, 8)).unwrap(), int(1));
        assert_eq!(phi.eval(&rat(3, 8)).unwrap(), rat(3, 2));
        assert_eq!(phi.eval(&int(2)).unwrap(), rat(25, 8));
    }

    #[test]
    fn eval_rejects_negative_and_infinite() {
        let phi = serre_phi();
        assert!(matches!(phi.eval(&rat(-1, 2)), Err(Error::Domain(_))));
        assert!(matches!(phi.eval_depth(&Depth::Infinite), Err(Error::Domain(_))));
    }

    #[test]
    fn invert_examples() {
        assert_eq!(PlFunc::identity().invert(), PlFunc::identity());
        let psi = quadratic_phi(int(1)).invert();
        assert_eq!(psi.eval(&int(2)).unwrap(), int(1));
        assert_eq!(psi.eval(&int(1)).unwrap(), rat(1, 2));
        assert_eq!(serre_phi().invert().eval(&rat(3, 2)).unwrap(), rat(3, 8));
        assert!(serre_phi().invert().is_convex());
    }

    #[test]
    fn compose_with_identity() {
        let phi = serre_phi();
        assert_eq!(compose(&PlFunc::identity(), &phi), phi);
        assert_eq!(compose(&phi, &PlFunc::identity()), phi);
        assert_eq!(
            compose(&PlFunc::identity(), &PlFunc::identity()),
            PlFunc::identity()
        );
    }

    #[test]
    fn redundant_breakpoints_are_removed() {
        let with_extra = PlFunc::new(
            vec![
                (int(0), int(0)),
                (rat(1, 16), rat(1, 2)),
                (rat(1, 8), int(1)),
                (rat(3, 8), rat(3, 2)),
                (int(1), rat(17, 8)),
            ],
            int(1),
        )
        .unwrap();
        assert_eq!(with_extra, serre_phi());
        assert_eq!(with_extra.breakpoints().len(), 3);
    }

    #[test]
    fn rejects_non_monotone() {
        let bad = PlFunc::new(vec![(int(0), int(0)), (int(1), int(0))], int(1));
        assert!(matches!(bad, Err(Error::Invariant(_))));
        let bad = PlFunc::new(vec![(int(1), int(0))], int(1));
        assert!(bad.is_err());
        assert!(PlFunc::new(vec![(int(0), int(0))], int(0)).is_err());
    }

    #[test]
    fn slopes_left_and_right() {
        let phi = serre_phi();
        assert_eq!(phi.right_slope(&int(0)).unwrap(), int(8));
        assert_eq!(phi.left_slope(&rat(1, 8)).unwrap(), int(8));
        assert_eq!(phi.right_slope(&rat(1, 8)).unwrap(), int(2));
        assert_eq!(phi.left_slope(&int(5)).unwrap(), int(1));
        assert!(phi.left_slope(&int(0)).is_err());
    }

    #[test]
    fn text_round_trip() {
        let phi = serre_phi();
        let s = phi.to_string();
        assert_eq!(s, "[(0,0),(1/8,1),(3/8,3/2)] + slope 1");
        assert_eq!(s.parse::<PlFunc>().unwrap(), phi);
        assert!("[(0,0)".parse::<PlFunc>().is_err());
        assert_eq!(
            phi.to_csv(),
            "x,y,slope_after\n0,0,8\n1/8,1,2\n3/8,3/2,1\n"
        );
    }
}
