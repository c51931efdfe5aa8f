//! Membership functions, sampled fuzzy sets and their level sets.

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Sampling resolution used for curves and quadrature.
pub const DEFAULT_RESOLUTION: usize = 1001;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub enum MembershipFunction<T> {
    Triangular { a: T, b: T, c: T },
    Trapezoidal { a: T, b: T, c: T, d: T },
    Gaussian { center: T, width: T },
}

impl<T: Real> MembershipFunction<T> {
    pub fn triangular(a: T, b: T, c: T) -> Result<Self> {
        Self::Triangular { a, b, c }.validated()
    }

    pub fn trapezoidal(a: T, b: T, c: T, d: T) -> Result<Self> {
        Self::Trapezoidal { a, b, c, d }.validated()
    }

    pub fn gaussian(center: T, width: T) -> Result<Self> {
        Self::Gaussian { center, width }.validated()
    }

    pub fn validated(self) -> Result<Self> {
        let ok = match self {
            Self::Triangular { a, b, c } => a <= b && b <= c && c.is_finite() && a.is_finite(),
            Self::Trapezoidal { a, b, c, d } => a <= b && b <= c && c <= d && a.is_finite() && d.is_finite(),
            Self::Gaussian { center, width } => center.is_finite() && width > T::zero() && width.is_finite(),
        };
        if ok {
            Ok(self)
        } else {
            Err(Error::invalid(format!("malformed membership function {self:?}")))
        }
    }

    /// Membership grade of `x`.
    pub fn eval(&self, x: T) -> T {
        match *self {
            Self::Triangular { a, b, c } => ramp(x, a, b, b, c),
            Self::Trapezoidal { a, b, c, d } => ramp(x, a, b, c, d),
            Self::Gaussian { center, width } => {
                let z = (x - center) / width;
                (-(z * z) / T::lit(2.0)).exp()
            }
        }
    }

    /// Abscissa of maximal membership (midpoint of the core).
    pub fn peak(&self) -> T {
        match *self {
            Self::Triangular { b, .. } => b,
            Self::Trapezoidal { b, c, .. } => (b + c) / T::lit(2.0),
            Self::Gaussian { center, .. } => center,
        }
    }

    /// Exact level sets of the analytic shape.
    pub fn level_sets(&self) -> LevelSets<T> {
        match *self {
            Self::Triangular { a, b, c } => LevelSets {
                support: (a, c),
                core: (b, b),
                crossovers: side_crossovers(a, b, b, c),
            },
            Self::Trapezoidal { a, b, c, d } => LevelSets {
                support: (a, d),
                core: (b, c),
                crossovers: side_crossovers(a, b, c, d),
            },
            Self::Gaussian { center, width } => {
                let h = width * (T::lit(2.0) * T::lit(2.0).ln()).sqrt();
                LevelSets {
                    support: (T::neg_infinity(), T::infinity()),
                    core: (center, center),
                    crossovers: vec![center - h, center + h],
                }
            }
        }
    }

    /// Closed interval `{x : μ(x) >= alpha}` for `alpha` in `(0, 1]`.
    pub fn alpha_cut(&self, alpha: T) -> Result<(T, T)> {
        if !(alpha > T::zero() && alpha <= T::one()) {
            return Err(Error::invalid(format!("alpha must lie in (0, 1], got {alpha}")));
        }
        Ok(match *self {
            Self::Triangular { a, b, c } => (a + alpha * (b - a), c - alpha * (c - b)),
            Self::Trapezoidal { a, b, c, d } => (a + alpha * (b - a), d - alpha * (d - c)),
            Self::Gaussian { center, width } => {
                let h = width * (-T::lit(2.0) * alpha.ln()).sqrt();
                (center - h, center + h)
            }
        })
    }
}

fn ramp<T: Real>(x: T, a: T, b: T, c: T, d: T) -> T {
    if x < a || x > d {
        T::zero()
    } else if x >= b && x <= c {
        T::one()
    } else if x < b {
        (x - a) / (b - a)
    } else {
        (d - x) / (d - c)
    }
}

fn side_crossovers<T: Real>(a: T, b: T, c: T, d: T) -> Vec<T> {
    let half = T::lit(0.5);
    let mut out = Vec::with_capacity(2);
    if a < b {
        out.push((a + b) * half);
    }
    if c < d {
        out.push((c + d) * half);
    }
    out
}

/// Support, core and 0.5-crossover points of a fuzzy set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LevelSets<T> {
    /// Open interval where the membership is positive.
    pub support: (T, T),
    /// Interval where the membership equals 1.
    pub core: (T, T),
    pub crossovers: Vec<T>,
}

/// Pointwise set operation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Combine {
    UnionMax,
    UnionProduct,
    IntersectMin,
    IntersectProduct,
}

impl Combine {
    pub fn apply<T: Real>(self, a: T, b: T) -> T {
        match self {
            Combine::UnionMax => a.max(b),
            Combine::UnionProduct => a + b - a * b,
            Combine::IntersectMin => a.min(b),
            Combine::IntersectProduct => a * b,
        }
    }
}

/// Fuzzy set sampled on an evenly spaced grid over its universe.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct FuzzySet<T> {
    universe: (T, T),
    mu: Vec<T>,
}

impl<T: Real> FuzzySet<T> {
    /// Samples `mf` at `resolution` points spanning `universe`.
    pub fn from_mf(mf: &MembershipFunction<T>, universe: (T, T), resolution: usize) -> Result<Self> {
        let mut s = Self::empty(universe, resolution)?;
        for (i, m) in s.mu.iter_mut().enumerate() {
            *m = mf.eval(grid_point(universe, resolution, i));
        }
        Ok(s)
    }

    /// The identically zero set.
    pub fn empty(universe: (T, T), resolution: usize) -> Result<Self> {
        if !(universe.0 < universe.1) || resolution < 2 {
            return Err(Error::invalid("fuzzy set needs lo < hi and at least two samples"));
        }
        Ok(FuzzySet {
            universe,
            mu: vec![T::zero(); resolution],
        })
    }

    pub fn from_samples(universe: (T, T), mu: Vec<T>) -> Result<Self> {
        let mut s = Self::empty(universe, mu.len())?;
        if mu.iter().any(|&m| !(m >= T::zero() && m <= T::one())) {
            return Err(Error::invalid("membership grades must lie in [0, 1]"));
        }
        s.mu = mu;
        Ok(s)
    }

    pub fn universe(&self) -> (T, T) {
        self.universe
    }

    pub fn resolution(&self) -> usize {
        self.mu.len()
    }

    pub fn grades(&self) -> &[T] {
        &self.mu
    }

    pub fn x(&self, i: usize) -> T {
        grid_point(self.universe, self.mu.len(), i)
    }

    pub fn points(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.mu.iter().enumerate().map(|(i, &m)| (self.x(i), m))
    }

    pub fn height(&self) -> T {
        self.mu.iter().fold(T::zero(), |h, &m| h.max(m))
    }

    pub fn is_zero(&self) -> bool {
        self.mu.iter().all(|&m| m == T::zero())
    }

    /// Pointwise min of the set with `level` (Mamdani clipping).
    pub fn clip(&self, level: T) -> Self {
        FuzzySet {
            universe: self.universe,
            mu: self.mu.iter().map(|&m| m.min(level)).collect(),
        }
    }

    pub fn combine(&self, other: &Self, mode: Combine) -> Result<Self> {
        if self.universe != other.universe || self.mu.len() != other.mu.len() {
            return Err(Error::DimensionMismatch("fuzzy sets on different universes".into()));
        }
        Ok(FuzzySet {
            universe: self.universe,
            mu: self.mu.iter().zip(&other.mu).map(|(&a, &b)| mode.apply(a, b)).collect(),
        })
    }

    pub fn complement(&self) -> Self {
        FuzzySet {
            universe: self.universe,
            mu: self.mu.iter().map(|&m| T::one() - m).collect(),
        }
    }

    /// Maximal runs of grid points with membership `>= alpha`, as closed
    /// intervals. `alpha = 0` returns the whole universe.
    pub fn alpha_cut(&self, alpha: T) -> Result<Vec<(T, T)>> {
        if !(alpha >= T::zero() && alpha <= T::one()) {
            return Err(Error::invalid(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(self.runs(|m| m >= alpha))
    }

    fn runs(&self, keep: impl Fn(T) -> bool) -> Vec<(T, T)> {
        let mut out = Vec::new();
        let mut start = None;
        for (i, &m) in self.mu.iter().enumerate() {
            match (keep(m), start) {
                (true, None) => start = Some(i),
                (false, Some(s)) => {
                    out.push((self.x(s), self.x(i - 1)));
                    start = None;
                }
                _ => {}
            }
        }
        if let Some(s) = start {
            out.push((self.x(s), self.x(self.mu.len() - 1)));
        }
        out
    }

    /// Level sets resolved to the sampling grid; crossovers are linearly
    /// interpolated. `None` for the zero set.
    pub fn level_sets(&self) -> Option<LevelSets<T>> {
        let pos = self.runs(|m| m > T::zero());
        let (first, last) = (pos.first()?, pos.last()?);
        let tol = T::lit(1e-12);
        let core = self.runs(|m| m >= T::one() - tol);
        let core = match (core.first(), core.last()) {
            (Some(a), Some(b)) => (a.0, b.1),
            _ => (T::nan(), T::nan()),
        };
        let half = T::lit(0.5);
        let mut crossovers = Vec::new();
        for i in 0..self.mu.len() {
            let m = self.mu[i];
            if m == half {
                crossovers.push(self.x(i));
            } else if i + 1 < self.mu.len() {
                let n = self.mu[i + 1];
                if n != half && (m - half) * (n - half) < T::zero() {
                    let t = (half - m) / (n - m);
                    crossovers.push(self.x(i) + t * (self.x(i + 1) - self.x(i)));
                }
            }
        }
        Some(LevelSets {
            support: (first.0, last.1),
            core,
            crossovers,
        })
    }

    /// Centre of gravity by trapezoid quadrature over the grid.
    pub fn centroid(&self) -> Result<T> {
        let mut num = T::zero();
        let mut den = T::zero();
        for i in 1..self.mu.len() {
            let (x0, x1) = (self.x(i - 1), self.x(i));
            let (m0, m1) = (self.mu[i - 1], self.mu[i]);
            let h = x1 - x0;
            den += (m0 + m1) * h / T::lit(2.0);
            num += (x0 * m0 + x1 * m1) * h / T::lit(2.0);
        }
        if den <= T::zero() {
            return Err(Error::NoFiring);
        }
        Ok(num / den)
    }
}

fn grid_point<T: Real>((lo, hi): (T, T), n: usize, i: usize) -> T {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * T::from_count(i) / T::from_count(n - 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn tri() -> MembershipFunction<f64> {
        MembershipFunction::triangular(0.0, 1.0, 2.0).unwrap()
    }

    #[test]
    fn triangular_values() {
        let m = tri();
        assert_eq!(m.eval(1.0), 1.0);
        assert_eq!(m.eval(3.0), 0.0);
        assert_eq!(m.eval(0.5), 0.5);
        assert_eq!(m.eval(-0.1), 0.0);
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(MembershipFunction::triangular(1.0, 0.0, 2.0).is_err());
        assert!(MembershipFunction::trapezoidal(0.0, 2.0, 1.0, 3.0).is_err());
        assert!(MembershipFunction::gaussian(0.0, 0.0).is_err());
        assert!(MembershipFunction::<f64>::gaussian(0.0, -1.0).is_err());
    }

    #[test]
    fn gaussian_values() {
        let g = MembershipFunction::gaussian(3.0, 2.0).unwrap();
        assert_eq!(g.eval(3.0), 1.0);
        assert_abs_diff_eq!(g.eval(5.0), (-0.5f64).exp(), epsilon = 1e-15);
        let ls = g.level_sets();
        assert_eq!(ls.core, (3.0, 3.0));
        for x in ls.crossovers {
            assert_abs_diff_eq!(g.eval(x), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn analytic_level_sets() {
        let t = MembershipFunction::trapezoidal(1.0, 2.0, 4.0, 7.0).unwrap();
        let ls = t.level_sets();
        assert_eq!(ls.support, (1.0, 7.0));
        assert_eq!(ls.core, (2.0, 4.0));
        assert_eq!(ls.crossovers, vec![1.5, 5.5]);
        assert_eq!(tri().level_sets().crossovers, vec![0.5, 1.5]);
        assert_eq!(tri().alpha_cut(0.5).unwrap(), (0.5, 1.5));
        assert_eq!(tri().alpha_cut(1.0).unwrap(), (1.0, 1.0));
        assert!(tri().alpha_cut(0.0).is_err());
    }

    #[test]
    fn sampled_level_sets_match_analytic() {
        let s = FuzzySet::from_mf(&tri(), (-1.0, 3.0), 4001).unwrap();
        let ls = s.level_sets().unwrap();
        assert_abs_diff_eq!(ls.support.0, 0.001, epsilon = 1e-9);
        assert_abs_diff_eq!(ls.support.1, 1.999, epsilon = 1e-9);
        assert_abs_diff_eq!(ls.core.0, 1.0, epsilon = 1e-9);
        assert_eq!(ls.crossovers.len(), 2);
        assert_abs_diff_eq!(ls.crossovers[0], 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(ls.crossovers[1], 1.5, epsilon = 1e-9);
        let cut = s.alpha_cut(0.5).unwrap();
        assert_eq!(cut.len(), 1);
        assert_abs_diff_eq!(cut[0].0, 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(cut[0].1, 1.5, epsilon = 1e-9);
        assert!(FuzzySet::<f64>::empty((0.0, 1.0), 11).unwrap().level_sets().is_none());
    }

    #[test]
    fn alpha_cut_limits() {
        let s = FuzzySet::from_mf(&tri(), (-1.0, 3.0), 401).unwrap();
        let ls = s.level_sets().unwrap();
        let near_zero = s.alpha_cut(1e-12).unwrap();
        assert_eq!(near_zero, vec![ls.support]);
        assert_eq!(s.alpha_cut(1.0).unwrap(), vec![ls.core]);
        assert_eq!(s.alpha_cut(0.0).unwrap(), vec![(-1.0, 3.0)]);
    }

    #[test]
    fn combine_examples() {
        assert_abs_diff_eq!(Combine::UnionProduct.apply(0.4, 0.5), 0.7, epsilon = 1e-15);
        let a = FuzzySet::from_mf(&tri(), (0.0, 2.0), 101).unwrap();
        assert_eq!(a.combine(&a, Combine::UnionMax).unwrap(), a);
        let meet = a.combine(&a.complement(), Combine::IntersectMin).unwrap();
        assert!(meet.height() <= 0.5);
        let b = FuzzySet::from_mf(&tri(), (0.0, 3.0), 101).unwrap();
        assert!(a.combine(&b, Combine::UnionMax).is_err());
    }

    #[test]
    fn centroid_examples() {
        let s = FuzzySet::from_mf(&tri(), (0.0, 2.0), DEFAULT_RESOLUTION).unwrap();
        assert_abs_diff_eq!(s.centroid().unwrap(), 1.0, epsilon = 1e-12);
        // Asymmetric triangle (0, 1, 4): centroid (0 + 1 + 4) / 3.
        let t = MembershipFunction::triangular(0.0, 1.0, 4.0).unwrap();
        let s = FuzzySet::from_mf(&t, (0.0, 4.0), DEFAULT_RESOLUTION).unwrap();
        assert_abs_diff_eq!(s.centroid().unwrap(), 5.0 / 3.0, epsilon = 1e-3);
        assert!(matches!(FuzzySet::<f64>::empty((0.0, 1.0), 5).unwrap().centroid(), Err(Error::NoFiring)));
    }

    #[test]
    fn works_in_single_precision() {
        let m = MembershipFunction::<f32>::triangular(0.0, 1.0, 2.0).unwrap();
        assert_eq!(m.eval(0.5), 0.5f32);
    }

    fn mf_strategy() -> impl Strategy<Value = MembershipFunction<f64>> {
        prop_oneof![
            prop::array::uniform3(-50.0f64..50.0).prop_map(|mut v| {
                v.sort_by(f64::total_cmp);
                MembershipFunction::Triangular { a: v[0], b: v[1], c: v[2] }
            }),
            prop::array::uniform4(-50.0f64..50.0).prop_map(|mut v| {
                v.sort_by(f64::total_cmp);
                MembershipFunction::Trapezoidal { a: v[0], b: v[1], c: v[2], d: v[3] }
            }),
            (-50.0f64..50.0, 0.01f64..20.0).prop_map(|(center, width)| MembershipFunction::Gaussian { center, width }),
        ]
    }

    proptest! {
        #[test]
        fn grades_in_unit_interval(mf in mf_strategy(), x in -100.0f64..100.0) {
            let m = mf.eval(x);
            prop_assert!((0.0..=1.0).contains(&m));
        }

        #[test]
        fn complement_is_involution(mf in mf_strategy()) {
            let s = FuzzySet::from_mf(&mf, (-60.0, 60.0), 257).unwrap();
            let back = s.complement().complement();
            for (a, b) in back.grades().iter().zip(s.grades()) {
                prop_assert!((a - b).abs() <= 1e-15);
            }
        }

        #[test]
        fn union_and_intersection_bound_operands(mf1 in mf_strategy(), mf2 in mf_strategy()) {
            let a = FuzzySet::from_mf(&mf1, (-60.0, 60.0), 129).unwrap();
            let b = FuzzySet::from_mf(&mf2, (-60.0, 60.0), 129).unwrap();
            for mode in [Combine::UnionMax, Combine::UnionProduct, Combine::IntersectMin, Combine::IntersectProduct] {
                let c = a.combine(&b, mode).unwrap();
                for ((&x, &y), &z) in a.grades().iter().zip(b.grades()).zip(c.grades()) {
                    prop_assert!((0.0..=1.0 + 1e-15).contains(&z));
                    match mode {
                        Combine::UnionMax | Combine::UnionProduct => prop_assert!(z >= x.max(y) - 1e-15),
                        _ => prop_assert!(z <= x.min(y) + 1e-15),
                    }
                }
            }
        }

        #[test]
        fn analytic_alpha_cut_bounds_membership(mf in mf_strategy(), alpha in 0.01f64..=1.0) {
            let (lo, hi) = mf.alpha_cut(alpha).unwrap();
            prop_assert!(lo <= hi);
            prop_assert!(mf.eval(mf.peak()) >= alpha);
            if lo.is_finite() && hi.is_finite() && hi > lo {
                prop_assert!(mf.eval((lo + hi) / 2.0) >= alpha - 1e-9);
            }
        }
    }
}
