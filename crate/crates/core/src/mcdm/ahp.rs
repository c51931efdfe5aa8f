//! Fuzzy AHP: geometric-mean aggregation, extent analysis and consistency.

use super::tfn::TriangularFuzzyNumber;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Square matrix of fuzzy pairwise judgements over named criteria.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPairwise<T>")]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct FuzzyPairwiseMatrix<T> {
    criteria: Vec<String>,
    entries: Vec<Vec<TriangularFuzzyNumber<T>>>,
}

#[derive(Deserialize)]
#[serde(bound(deserialize = "T: Real + Deserialize<'de>"))]
struct RawPairwise<T> {
    criteria: Vec<String>,
    entries: Vec<Vec<TriangularFuzzyNumber<T>>>,
}

impl<T: Real> TryFrom<RawPairwise<T>> for FuzzyPairwiseMatrix<T> {
    type Error = Error;

    fn try_from(r: RawPairwise<T>) -> Result<Self> {
        FuzzyPairwiseMatrix::new(r.criteria, r.entries)
    }
}

impl<T: Real> FuzzyPairwiseMatrix<T> {
    pub fn new(criteria: Vec<String>, entries: Vec<Vec<TriangularFuzzyNumber<T>>>) -> Result<Self> {
        let n = criteria.len();
        if n < 2 {
            return Err(Error::invalid("a pairwise matrix needs at least two criteria"));
        }
        if entries.len() != n || entries.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch(format!(
                "pairwise matrix must be {n}x{n} to match its criteria"
            )));
        }
        let tol = T::lit(1e-9);
        for (i, row) in entries.iter().enumerate() {
            let d = row[i];
            if [d.l(), d.m(), d.u()].iter().any(|&v| (v - T::one()).abs() > tol) {
                return Err(Error::invalid(format!("diagonal entry {i} must be (1, 1, 1)")));
            }
            if row.iter().any(|t| t.l() <= T::zero()) {
                return Err(Error::invalid(format!("row {i} has a non-positive judgement")));
            }
        }
        Ok(FuzzyPairwiseMatrix { criteria, entries })
    }

    /// Builds a matrix from its upper triangle, filling the lower triangle
    /// with fuzzy reciprocals.
    pub fn from_upper(criteria: Vec<String>, upper: &[Vec<TriangularFuzzyNumber<T>>]) -> Result<Self> {
        let n = criteria.len();
        let mut entries = vec![vec![TriangularFuzzyNumber::one(); n]; n];
        for i in 0..n {
            for j in i + 1..n {
                let v = *upper
                    .get(i)
                    .and_then(|r| r.get(j - i - 1))
                    .ok_or_else(|| Error::DimensionMismatch("upper triangle too short".into()))?;
                entries[i][j] = v;
                entries[j][i] = v.inverse()?;
            }
        }
        Self::new(criteria, entries)
    }

    pub fn criteria(&self) -> &[String] {
        &self.criteria
    }

    pub fn entries(&self) -> &[Vec<TriangularFuzzyNumber<T>>] {
        &self.entries
    }

    pub fn size(&self) -> usize {
        self.criteria.len()
    }

    pub fn get(&self, i: usize, j: usize) -> TriangularFuzzyNumber<T> {
        self.entries[i][j]
    }

    /// Centroid-defuzzified crisp matrix.
    pub fn defuzzified(&self) -> Matrix<T> {
        let n = self.size();
        Matrix::from_fn(n, n, |i, j| self.entries[i][j].centroid())
    }
}

/// Componentwise geometric mean of several experts' matrices.
pub fn fahp_aggregate<T: Real>(matrices: &[FuzzyPairwiseMatrix<T>]) -> Result<FuzzyPairwiseMatrix<T>> {
    let first = matrices
        .first()
        .ok_or_else(|| Error::invalid("aggregation needs at least one matrix"))?;
    for m in &matrices[1..] {
        if m.criteria != first.criteria {
            return Err(Error::DimensionMismatch(
                "pairwise matrices disagree on criteria or their order".into(),
            ));
        }
    }
    let n = first.size();
    let k = T::from_count(matrices.len());
    let gm = |f: &dyn Fn(&TriangularFuzzyNumber<T>) -> T, i: usize, j: usize| {
        let s = matrices.iter().fold(T::zero(), |acc, m| acc + f(&m.entries[i][j]).ln());
        (s / k).exp()
    };
    let mut entries = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            if i == j {
                row.push(TriangularFuzzyNumber::one());
                continue;
            }
            let l = gm(&|t| t.l(), i, j);
            let m = gm(&|t| t.m(), i, j).max(l);
            let u = gm(&|t| t.u(), i, j).max(m);
            row.push(TriangularFuzzyNumber::new(l, m, u)?);
        }
        entries.push(row);
    }
    FuzzyPairwiseMatrix::new(first.criteria.clone(), entries)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound(serialize = "T: Real + Serialize", deserialize = "T: Real + Deserialize<'de>"))]
pub struct SyntheticExtent<T> {
    pub criterion: String,
    pub value: TriangularFuzzyNumber<T>,
}

/// Row sums of the matrix, each multiplied by the fuzzy inverse of the grand sum.
pub fn synthetic_extents<T: Real>(m: &FuzzyPairwiseMatrix<T>) -> Result<Vec<SyntheticExtent<T>>> {
    let rows: Vec<TriangularFuzzyNumber<T>> = m
        .entries
        .iter()
        .map(|r| r.iter().copied().fold(TriangularFuzzyNumber::crisp(T::zero()), |a, b| a + b))
        .collect();
    let total = rows
        .iter()
        .copied()
        .fold(TriangularFuzzyNumber::crisp(T::zero()), |a, b| a + b);
    if total.l() <= T::zero() {
        return Err(Error::invalid("grand sum of the pairwise matrix has a zero component"));
    }
    let inv = total.inverse()?;
    Ok(m.criteria
        .iter()
        .zip(rows)
        .map(|(c, r)| SyntheticExtent {
            criterion: c.clone(),
            value: r * inv,
        })
        .collect())
}

/// Degree of possibility `V(sb >= sa)`.
pub fn degree_of_possibility<T: Real>(sb: &SyntheticExtent<T>, sa: &SyntheticExtent<T>) -> T {
    possibility(&sb.value, &sa.value)
}

pub(crate) fn possibility<T: Real>(b: &TriangularFuzzyNumber<T>, a: &TriangularFuzzyNumber<T>) -> T {
    if b.m() >= a.m() {
        T::one()
    } else if a.l() >= b.u() {
        T::zero()
    } else {
        let v = (a.l() - b.u()) / ((b.m() - b.u()) - (a.m() - a.l()));
        v.max(T::zero()).min(T::one())
    }
}

/// Labelled weights: raw values and their normalisation to unit sum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightVector<T> {
    pub labels: Vec<String>,
    pub raw: Vec<T>,
    pub normalized: Vec<T>,
}

impl<T: Real> WeightVector<T> {
    /// Normalises raw weights; an all-zero vector is degenerate.
    pub fn from_raw(labels: Vec<String>, raw: Vec<T>) -> Result<Self> {
        if labels.len() != raw.len() {
            return Err(Error::DimensionMismatch("weight labels and values differ in length".into()));
        }
        if raw.iter().any(|w| *w < T::zero() || !w.is_finite()) {
            return Err(Error::invalid("weights must be finite and non-negative"));
        }
        let sum = raw.iter().fold(T::zero(), |a, &b| a + b);
        if sum <= T::zero() {
            return Err(Error::Degenerate("all raw weights are zero".into()));
        }
        let normalized = raw.iter().map(|&w| w / sum).collect();
        Ok(WeightVector { labels, raw, normalized })
    }

    pub fn get(&self, label: &str) -> Option<T> {
        self.labels.iter().position(|l| l == label).map(|i| self.normalized[i])
    }
}

/// Pairwise possibility degrees `(b, a, V(S_b >= S_a))` for every ordered pair.
pub fn possibility_table<T: Real>(extents: &[SyntheticExtent<T>]) -> Vec<(String, String, T)> {
    let mut out = Vec::new();
    for b in extents {
        for a in extents {
            if a.criterion != b.criterion {
                out.push((b.criterion.clone(), a.criterion.clone(), degree_of_possibility(b, a)));
            }
        }
    }
    out
}

/// Raw weight of each criterion is its minimum possibility degree over the others.
pub fn fahp_weights<T: Real>(extents: &[SyntheticExtent<T>]) -> Result<WeightVector<T>> {
    if extents.len() < 2 {
        return Err(Error::invalid("weights need at least two extents"));
    }
    let raw = extents
        .iter()
        .enumerate()
        .map(|(i, si)| {
            extents
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, sj)| degree_of_possibility(si, sj))
                .fold(T::one(), T::min)
        })
        .collect();
    WeightVector::from_raw(extents.iter().map(|e| e.criterion.clone()).collect(), raw)
}

/// Saaty random index for matrices of order 3..=9.
pub fn random_index<T: Real>(n: usize) -> Option<T> {
    let ri = match n {
        0..=2 => 0.0,
        3 => 0.58,
        4 => 0.90,
        5 => 1.12,
        6 => 1.24,
        7 => 1.32,
        8 => 1.41,
        9 => 1.45,
        _ => return None,
    };
    Some(T::lit(ri))
}

/// How the crisp matrix is prepared before the eigenvalue step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reciprocity {
    /// Replace `a_ij` by `sqrt(a_ij / a_ji)`, the nearest reciprocal matrix
    /// in log space. Centroids of reciprocal fuzzy judgements are not
    /// reciprocal, and Saaty's index presumes reciprocity.
    #[default]
    Repair,
    /// Use the defuzzified matrix unchanged.
    AsIs,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport<T> {
    pub lambda_max: T,
    pub ci: T,
    pub ri: T,
    pub cr: T,
}

/// Consistency ratio of the centroid-defuzzified matrix under the default
/// reciprocity handling.
pub fn consistency_ratio<T: Real>(m: &FuzzyPairwiseMatrix<T>) -> Result<T> {
    consistency(m, Reciprocity::default()).map(|r| r.cr)
}

pub fn consistency<T: Real>(m: &FuzzyPairwiseMatrix<T>, mode: Reciprocity) -> Result<ConsistencyReport<T>> {
    let mut a = m.defuzzified();
    if mode == Reciprocity::Repair {
        let orig = a.clone();
        for i in 0..a.rows() {
            for j in 0..a.cols() {
                a[(i, j)] = (orig[(i, j)] / orig[(j, i)]).sqrt();
            }
        }
    }
    crisp_consistency(&a)
}

/// Saaty consistency of a positive crisp matrix via power iteration.
pub fn crisp_consistency<T: Real>(a: &Matrix<T>) -> Result<ConsistencyReport<T>> {
    let n = a.rows();
    if !a.is_square() || n == 0 {
        return Err(Error::DimensionMismatch("consistency needs a square matrix".into()));
    }
    let ri = random_index::<T>(n)
        .ok_or_else(|| Error::invalid(format!("no random index for order {n}")))?;
    if n <= 2 {
        return Ok(ConsistencyReport {
            lambda_max: T::from_count(n),
            ci: T::zero(),
            ri,
            cr: T::zero(),
        });
    }
    let lambda = principal_eigenvalue(a)?;
    let nn = T::from_count(n);
    let ci = (lambda - nn) / (nn - T::one());
    Ok(ConsistencyReport {
        lambda_max: lambda,
        ci,
        ri,
        cr: ci / ri,
    })
}

fn principal_eigenvalue<T: Real>(a: &Matrix<T>) -> Result<T> {
    let n = a.rows();
    let mut x = vec![T::one() / T::from_count(n); n];
    let tol = T::lit(1e-13);
    for _ in 0..10_000 {
        let y = a.mul_vec(&x).expect("square matrix");
        let s = y.iter().fold(T::zero(), |acc, &v| acc + v);
        if !(s > T::zero()) || !s.is_finite() {
            return Err(Error::NonConvergence("power iteration".into()));
        }
        let y: Vec<T> = y.into_iter().map(|v| v / s).collect();
        let delta = x
            .iter()
            .zip(&y)
            .fold(T::zero(), |acc, (p, q)| acc.max((*p - *q).abs()));
        x = y;
        if delta < tol {
            // With x normalised to unit sum, λ = Σ (A x)_i.
            let ax = a.mul_vec(&x).expect("square matrix");
            return Ok(ax.iter().fold(T::zero(), |acc, &v| acc + v));
        }
    }
    Err(Error::NonConvergence("power iteration".into()))
}

/// Final parameter priority = criterion weight × within-criterion weight,
/// sorted descending (stable, so ties keep input order).
pub fn final_priorities<T: Real>(
    criteria: &WeightVector<T>,
    per_criterion: &[WeightVector<T>],
) -> Result<Vec<(String, T)>> {
    if criteria.normalized.len() != per_criterion.len() {
        return Err(Error::DimensionMismatch(
            "one parameter weight vector is needed per criterion".into(),
        ));
    }
    let mut out: Vec<(String, T)> = criteria
        .normalized
        .iter()
        .zip(per_criterion)
        .flat_map(|(&cw, params)| {
            params
                .labels
                .iter()
                .zip(&params.normalized)
                .map(move |(p, &w)| (p.clone(), cw * w))
        })
        .collect();
    out.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    type Tfn = TriangularFuzzyNumber<f64>;

    fn t(l: f64, m: f64, u: f64) -> Tfn {
        Tfn::new(l, m, u).unwrap()
    }

    fn ext(name: &str, v: Tfn) -> SyntheticExtent<f64> {
        SyntheticExtent {
            criterion: name.into(),
            value: v,
        }
    }

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("K{i}")).collect()
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(FuzzyPairwiseMatrix::new(names(1), vec![vec![Tfn::one()]]).is_err());
        assert!(FuzzyPairwiseMatrix::new(names(2), vec![vec![Tfn::one(); 2]]).is_err());
        let bad_diag = vec![vec![t(1.0, 2.0, 3.0), Tfn::one()], vec![Tfn::one(); 2]];
        assert!(FuzzyPairwiseMatrix::new(names(2), bad_diag).is_err());
    }

    #[test]
    fn aggregate_single_is_identity() {
        let m = FuzzyPairwiseMatrix::from_upper(names(3), &[vec![t(1.0, 3.0, 5.0), t(3.0, 5.0, 7.0)], vec![t(1.0, 1.0, 3.0)]])
            .unwrap();
        let agg = fahp_aggregate(std::slice::from_ref(&m)).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let (a, b) = (agg.get(i, j), m.get(i, j));
                assert_relative_eq!(a.l(), b.l(), epsilon = 1e-12);
                assert_relative_eq!(a.m(), b.m(), epsilon = 1e-12);
                assert_relative_eq!(a.u(), b.u(), epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn aggregate_two_experts() {
        let a = FuzzyPairwiseMatrix::from_upper(names(2), &[vec![t(1.0, 3.0, 5.0)]]).unwrap();
        let b = FuzzyPairwiseMatrix::from_upper(names(2), &[vec![t(1.0, 1.0, 3.0)]]).unwrap();
        let g = fahp_aggregate(&[a, b]).unwrap().get(0, 1);
        assert_relative_eq!(g.l(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(g.m(), 3f64.sqrt(), epsilon = 1e-12);
        assert_relative_eq!(g.u(), 15f64.sqrt(), epsilon = 1e-12);
    }

    #[test]
    fn aggregate_rejects_mismatch() {
        let a = FuzzyPairwiseMatrix::from_upper(names(2), &[vec![t(1.0, 3.0, 5.0)]]).unwrap();
        let b = FuzzyPairwiseMatrix::from_upper(names(3), &[vec![Tfn::one(), Tfn::one()], vec![Tfn::one()]]).unwrap();
        assert!(matches!(fahp_aggregate(&[a, b]), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn unit_matrix_extents() {
        let m = FuzzyPairwiseMatrix::new(names(2), vec![vec![Tfn::one(); 2]; 2]).unwrap();
        for s in synthetic_extents(&m).unwrap() {
            assert_eq!(s.value.to_array(), [0.5, 0.5, 0.5]);
        }
    }

    #[test]
    fn self_possibility_is_one() {
        let s = ext("A", t(0.1, 0.3, 0.9));
        assert_eq!(degree_of_possibility(&s, &s), 1.0);
    }

    #[test]
    fn dominant_pair_weights() {
        let hi = ext("A", t(0.6, 0.7, 0.8));
        let lo = ext("B", t(0.1, 0.2, 0.3));
        let w = fahp_weights(&[hi, lo]).unwrap();
        assert_eq!(w.normalized, vec![1.0, 0.0]);
    }

    #[test]
    fn identical_extents_are_uniform() {
        let e: Vec<_> = (0..4).map(|i| ext(&format!("K{i}"), t(0.1, 0.25, 0.4))).collect();
        let w = fahp_weights(&e).unwrap();
        for v in w.normalized {
            assert_relative_eq!(v, 0.25, epsilon = 1e-12);
        }
    }

    #[test]
    fn all_zero_raw_is_degenerate() {
        assert!(matches!(
            WeightVector::from_raw(names(2), vec![0.0, 0.0]),
            Err(Error::Degenerate(_))
        ));
    }

    #[test]
    fn consistent_matrix_has_zero_cr() {
        let w = [0.5, 0.3, 0.2];
        let rows: Vec<Vec<Tfn>> = (0..3)
            .map(|i| (0..3).map(|j| Tfn::crisp(w[i] / w[j])).collect())
            .collect();
        let m = FuzzyPairwiseMatrix::new(names(3), rows).unwrap();
        assert!(consistency_ratio(&m).unwrap().abs() < 1e-6);
        assert!(consistency(&m, Reciprocity::AsIs).unwrap().cr.abs() < 1e-6);
    }

    #[test]
    fn inconsistent_matrix_matches_eigen_oracle() {
        // numpy.linalg.eigvals: λmax = 4.231179777790137
        let a = Matrix::from_rows(&[vec![1.0, 3.0, 0.5], vec![1.0 / 3.0, 1.0, 4.0], vec![2.0, 0.25, 1.0]]).unwrap();
        let r = crisp_consistency(&a).unwrap();
        assert_relative_eq!(r.lambda_max, 4.231179777790137, epsilon = 1e-9);
        assert_relative_eq!(r.cr, 1.0613618774052909, epsilon = 1e-9);
    }

    #[test]
    fn small_orders_have_zero_cr() {
        let m = FuzzyPairwiseMatrix::from_upper(names(2), &[vec![t(1.0, 3.0, 5.0)]]).unwrap();
        assert_eq!(consistency_ratio(&m).unwrap(), 0.0);
    }

    #[test]
    fn priorities_pass_through_single_criterion() {
        let c = WeightVector::from_raw(vec!["C".into()], vec![1.0]).unwrap();
        let p = WeightVector::from_raw(vec!["P1".into(), "P2".into()], vec![0.3, 0.7]).unwrap();
        let out = final_priorities(&c, &[p]).unwrap();
        assert_eq!(out[0].0, "P2");
        assert_relative_eq!(out[0].1, 0.7, epsilon = 1e-12);
        assert_relative_eq!(out[1].1, 0.3, epsilon = 1e-12);
    }

    #[test]
    fn zero_weight_criterion_zeroes_parameters() {
        let c = WeightVector::from_raw(vec!["A".into(), "B".into()], vec![1.0, 0.0]).unwrap();
        let pa = WeightVector::from_raw(vec!["P1".into()], vec![1.0]).unwrap();
        let pb = WeightVector::from_raw(vec!["P2".into(), "P3".into()], vec![1.0, 1.0]).unwrap();
        let out = final_priorities(&c, &[pa, pb]).unwrap();
        assert_eq!(out[1], ("P2".to_string(), 0.0));
        assert_eq!(out[2], ("P3".to_string(), 0.0));
    }

    fn extent_strategy() -> impl Strategy<Value = Tfn> {
        (0.01..1.0f64, 0.01..1.0f64, 0.01..1.0f64).prop_map(|(a, b, c)| {
            let mut v = [a, b, c];
            v.sort_by(f64::total_cmp);
            t(v[0], v[1], v[2])
        })
    }

    proptest! {
        #[test]
        fn possibility_in_unit_interval(a in extent_strategy(), b in extent_strategy()) {
            let v = degree_of_possibility(&ext("a", a), &ext("b", b));
            prop_assert!((0.0..=1.0).contains(&v));
        }

        #[test]
        fn top_rank_is_scale_invariant(es in prop::collection::vec(extent_strategy(), 2..6), k in 0.1..10.0f64) {
            let base: Vec<_> = es.iter().enumerate().map(|(i, v)| ext(&format!("K{i}"), *v)).collect();
            let scaled: Vec<_> = es.iter().enumerate().map(|(i, v)| ext(&format!("K{i}"), v.scale(k))).collect();
            if let (Ok(a), Ok(b)) = (fahp_weights(&base), fahp_weights(&scaled)) {
                let argmax = |w: &[f64]| {
                    let mx = w.iter().cloned().fold(f64::MIN, f64::max);
                    w.iter().map(|v| (mx - v).abs() < 1e-9).collect::<Vec<_>>()
                };
                prop_assert_eq!(argmax(&a.normalized), argmax(&b.normalized));
            }
        }

        #[test]
        fn priorities_sum_to_criteria_weight(
            cw in prop::collection::vec(0.01..1.0f64, 1..4),
            sizes in prop::collection::vec(1usize..4, 4),
            seed in prop::collection::vec(0.01..1.0f64, 16),
        ) {
            let c = WeightVector::from_raw(names(cw.len()), cw.clone()).unwrap();
            let mut k = 0;
            let per: Vec<_> = (0..cw.len()).map(|i| {
                let raw: Vec<f64> = (0..sizes[i]).map(|_| { k += 1; seed[k % seed.len()] }).collect();
                WeightVector::from_raw((0..sizes[i]).map(|j| format!("P{i}_{j}")).collect(), raw).unwrap()
            }).collect();
            let total: f64 = final_priorities(&c, &per).unwrap().iter().map(|p| p.1).sum();
            let expected: f64 = c.normalized.iter().sum();
            prop_assert!((total - expected).abs() < 1e-9);
        }
    }
}
