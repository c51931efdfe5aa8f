//! Exploratory factor analysis: sampling adequacy, principal components,
//! retention rules and varimax rotation.

use super::correlation::{correlation_matrix, CorrelationMethod};
use crate::error::{Error, Result};
use crate::linalg::{symmetric_eigen, Matrix};
use crate::scalar::Real;
use crate::special::chi_square_sf;
use serde::{Deserialize, Serialize};

/// Determinant below which the correlation matrix is flagged as near-singular.
pub const DETERMINANT_FLOOR: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bartlett<T> {
    pub statistic: T,
    pub df: usize,
    pub p_value: T,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdequacyReport<T> {
    pub names: Vec<String>,
    pub determinant: T,
    /// True when the determinant exceeds [`DETERMINANT_FLOOR`].
    pub determinant_ok: bool,
    pub kmo: T,
    pub msa: Vec<T>,
    pub bartlett: Bartlett<T>,
}

/// Adequacy statistics of raw data columns.
pub fn adequacy<T: Real, S: AsRef<str>>(names: &[S], columns: &[Vec<T>]) -> Result<AdequacyReport<T>> {
    let p = columns.len();
    if p < 2 {
        return Err(Error::invalid("adequacy needs at least two variables"));
    }
    let n = columns[0].len();
    if n <= p {
        return Err(Error::invalid(format!("adequacy needs more rows than variables ({n} <= {p})")));
    }
    let r = correlation_matrix(names, columns, CorrelationMethod::Pearson)?;
    adequacy_from_correlation(&r.names, &r.values, n)
}

/// Adequacy statistics from a correlation matrix over `n` observations.
pub fn adequacy_from_correlation<T: Real>(names: &[String], r: &Matrix<T>, n: usize) -> Result<AdequacyReport<T>> {
    let p = r.rows();
    if !r.is_square() || p != names.len() {
        return Err(Error::DimensionMismatch("correlation matrix does not match its names".into()));
    }
    let det = r.determinant().unwrap_or(T::zero());
    let tiny = T::lit(1e-14);
    if det.abs() <= tiny {
        return Err(Error::SingularMatrix);
    }
    let inv = r.inverse().ok_or(Error::SingularMatrix)?;

    // Anti-image partials q_ij = -inv_ij / sqrt(inv_ii inv_jj). With two
    // variables the partial correlation equals the correlation itself.
    let q = |i: usize, j: usize| {
        if p == 2 {
            r[(i, j)]
        } else {
            -inv[(i, j)] / (inv[(i, i)] * inv[(j, j)]).sqrt()
        }
    };
    let mut sum_r2 = T::zero();
    let mut sum_q2 = T::zero();
    let mut msa = Vec::with_capacity(p);
    for i in 0..p {
        let mut rr = T::zero();
        let mut qq = T::zero();
        for j in 0..p {
            if i != j {
                rr += r[(i, j)] * r[(i, j)];
                qq += q(i, j) * q(i, j);
            }
        }
        sum_r2 += rr;
        sum_q2 += qq;
        msa.push(if rr + qq > T::zero() { rr / (rr + qq) } else { T::zero() });
    }
    let kmo = if sum_r2 + sum_q2 > T::zero() {
        sum_r2 / (sum_r2 + sum_q2)
    } else {
        T::zero()
    };

    let pp = T::from_count(p);
    let factor = T::from_count(n) - T::one() - (T::lit(2.0) * pp + T::lit(5.0)) / T::lit(6.0);
    let statistic = (-factor * det.ln()).max(T::zero());
    let df = p * (p - 1) / 2;
    Ok(AdequacyReport {
        names: names.to_vec(),
        determinant: det,
        determinant_ok: det > T::lit(DETERMINANT_FLOOR),
        kmo,
        msa,
        bartlett: Bartlett {
            statistic,
            df,
            p_value: chi_square_sf(statistic, T::from_count(df)),
        },
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorSolution<T> {
    /// Descending eigenvalues of the correlation matrix.
    pub eigenvalues: Vec<T>,
    /// Variables × components.
    pub loadings: Matrix<T>,
    pub communalities: Vec<T>,
    pub percent_variance: Vec<T>,
}

impl<T: Real> FactorSolution<T> {
    /// Solution restricted to the first `k` components.
    pub fn truncate(&self, k: usize) -> FactorSolution<T> {
        let k = k.min(self.loadings.cols());
        let loadings = Matrix::from_fn(self.loadings.rows(), k, |i, j| self.loadings[(i, j)]);
        FactorSolution {
            eigenvalues: self.eigenvalues.clone(),
            communalities: communalities(&loadings),
            percent_variance: self.percent_variance[..k].to_vec(),
            loadings,
        }
    }
}

/// Row sums of squared loadings.
pub fn communalities<T: Real>(loadings: &Matrix<T>) -> Vec<T> {
    (0..loadings.rows())
        .map(|i| loadings.row(i).iter().fold(T::zero(), |a, &v| a + v * v))
        .collect()
}

/// Principal components of a correlation matrix.
pub fn pca<T: Real>(r: &Matrix<T>) -> Result<FactorSolution<T>> {
    let tol = T::lit(1e-8);
    if !r.is_square() || !r.is_symmetric(tol) {
        return Err(Error::invalid("pca needs a symmetric matrix"));
    }
    let p = r.rows();
    if (0..p).any(|i| (r[(i, i)] - T::one()).abs() > tol) {
        return Err(Error::invalid("pca needs a unit diagonal"));
    }
    let (vals, vecs) = symmetric_eigen(r, 100).ok_or_else(|| Error::NonConvergence("Jacobi eigen-decomposition".into()))?;
    if vals.iter().any(|&v| v < -tol) {
        return Err(Error::invalid("correlation matrix is not positive semidefinite"));
    }
    let loadings = Matrix::from_fn(p, p, |i, j| {
        // Orient each component so its largest-magnitude entry is positive.
        let col = vecs.column(j);
        let pivot = col.iter().copied().fold(T::zero(), |a, v| if v.abs() > a.abs() { v } else { a });
        let sign = if pivot < T::zero() { -T::one() } else { T::one() };
        sign * vecs[(i, j)] * vals[j].max(T::zero()).sqrt()
    });
    let total = vals.iter().fold(T::zero(), |a, &b| a + b);
    let percent_variance = vals.iter().map(|&v| v / total * T::lit(100.0)).collect();
    Ok(FactorSolution {
        communalities: communalities(&loadings),
        eigenvalues: vals,
        loadings,
        percent_variance,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "rule", content = "t")]
pub enum RetentionRule<T> {
    /// Eigenvalue > 1.
    Kaiser,
    /// Eigenvalue > 0.7.
    Jolliffe,
    /// Eigenvalue > t.
    Threshold(T),
}

/// Number of eigenvalues strictly above the rule's cut-off.
pub fn retain_components<T: Real>(eigenvalues: &[T], rule: RetentionRule<T>) -> usize {
    let cut = match rule {
        RetentionRule::Kaiser => T::one(),
        RetentionRule::Jolliffe => T::lit(0.7),
        RetentionRule::Threshold(t) => t,
    };
    eigenvalues.iter().filter(|&&v| v > cut).count()
}

/// Varimax criterion `Σ_j [p Σ_i a_ij⁴ - (Σ_i a_ij²)²] / p²`.
pub fn varimax_criterion<T: Real>(a: &Matrix<T>) -> T {
    let p = T::from_count(a.rows());
    (0..a.cols()).fold(T::zero(), |acc, j| {
        let (mut s2, mut s4) = (T::zero(), T::zero());
        for i in 0..a.rows() {
            let v2 = a[(i, j)] * a[(i, j)];
            s2 += v2;
            s4 += v2 * v2;
        }
        acc + (p * s4 - s2 * s2) / (p * p)
    })
}

/// Varimax rotation with Kaiser row normalisation, by pairwise planar
/// rotations until the criterion improves by less than `1e-9`.
pub fn varimax<T: Real>(loadings: &Matrix<T>) -> Result<Matrix<T>> {
    let (p, k) = (loadings.rows(), loadings.cols());
    if k < 2 {
        return Ok(loadings.clone());
    }
    let h: Vec<T> = communalities(loadings).into_iter().map(|c| c.sqrt()).collect();
    let mut a = Matrix::from_fn(p, k, |i, j| if h[i] > T::zero() { loadings[(i, j)] / h[i] } else { T::zero() });
    let pp = T::from_count(p);
    let two = T::lit(2.0);
    let mut crit = varimax_criterion(&a);
    let mut converged = false;
    for _ in 0..1000 {
        for j in 0..k - 1 {
            for l in j + 1..k {
                let (mut sa, mut sb, mut sc, mut sd) = (T::zero(), T::zero(), T::zero(), T::zero());
                for i in 0..p {
                    let (x, y) = (a[(i, j)], a[(i, l)]);
                    let u = x * x - y * y;
                    let v = two * x * y;
                    sa += u;
                    sb += v;
                    sc += u * u - v * v;
                    sd += two * u * v;
                }
                let num = sd - two * sa * sb / pp;
                let den = sc - (sa * sa - sb * sb) / pp;
                let phi = num.atan2(den) / T::lit(4.0);
                if phi.abs() < T::epsilon() {
                    continue;
                }
                let (s, c) = phi.sin_cos();
                for i in 0..p {
                    let (x, y) = (a[(i, j)], a[(i, l)]);
                    a[(i, j)] = x * c + y * s;
                    a[(i, l)] = -x * s + y * c;
                }
            }
        }
        let next = varimax_criterion(&a);
        let gain = next - crit;
        crit = next;
        if gain < T::lit(1e-9) {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NonConvergence("varimax".into()));
    }
    Ok(Matrix::from_fn(p, k, |i, j| a[(i, j)] * h[i]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn synthetic_columns() -> Vec<Vec<f64>> {
        let t: Vec<f64> = (0..20).map(f64::from).collect();
        vec![
            t.clone(),
            t.iter().map(|i| i + 3.0 * i.sin()).collect(),
            t.iter().map(|i| 5.0 * (0.7 * i).cos() + 0.3 * i).collect(),
            t.iter().map(|i| (i % 5.0) * 2.0 + (1.3 * i).sin()).collect(),
        ]
    }

    #[test]
    fn adequacy_matches_reference() {
        // numpy: anti-image KMO and Bartlett on the same columns.
        let rep = adequacy(&["a", "b", "c", "d"], &synthetic_columns()).unwrap();
        assert_relative_eq!(rep.kmo, 0.5949421226958889, epsilon = 1e-10);
        let msa = [0.5674113165937155, 0.5589431339935212, 0.9312082274648017, 0.49862585754114186];
        for (a, b) in rep.msa.iter().zip(msa) {
            assert_relative_eq!(*a, b, epsilon = 1e-10);
        }
        assert_relative_eq!(rep.determinant, 0.07757482379475314, epsilon = 1e-12);
        assert_relative_eq!(rep.bartlett.statistic, 43.034624391148284, epsilon = 1e-9);
        assert_eq!(rep.bartlett.df, 6);
        assert_relative_eq!(rep.bartlett.p_value, 1.1481770300821035e-07, epsilon = 1e-12);
        assert!(rep.determinant_ok);
    }

    #[test]
    fn two_variables_give_half() {
        let cols = vec![vec![1.0, 2.0, 3.0, 5.0, 4.0], vec![2.0, 1.0, 4.0, 3.0, 6.0]];
        let rep = adequacy(&["a", "b"], &cols).unwrap();
        assert_eq!(rep.kmo, 0.5);
        assert_eq!(rep.msa, vec![0.5, 0.5]);
    }

    #[test]
    fn identity_has_zero_bartlett() {
        let names: Vec<String> = (0..4).map(|i| format!("v{i}")).collect();
        let rep = adequacy_from_correlation(&names, &Matrix::<f64>::identity(4), 50).unwrap();
        assert_eq!(rep.bartlett.statistic, 0.0);
        assert_eq!(rep.determinant, 1.0);
    }

    #[test]
    fn singular_matrix_refused() {
        let a = vec![1.0, 2.0, 3.0, 4.0, 6.0];
        let b: Vec<f64> = a.iter().map(|v| 2.0 * v).collect();
        let c = vec![3.0, 1.0, 2.0, 5.0, 4.0];
        assert_eq!(adequacy(&["a", "b", "c"], &[a, b, c]).unwrap_err(), Error::SingularMatrix);
    }

    #[test]
    fn pca_closed_forms() {
        let m = Matrix::from_rows(&[vec![1.0, 0.6], vec![0.6, 1.0]]).unwrap();
        let s = pca(&m).unwrap();
        assert_relative_eq!(s.eigenvalues[0], 1.6, epsilon = 1e-12);
        assert_relative_eq!(s.eigenvalues[1], 0.4, epsilon = 1e-12);
        let id = pca(&Matrix::<f64>::identity(5)).unwrap();
        assert!(id.eigenvalues.iter().all(|v| (v - 1.0).abs() < 1e-12));
    }

    #[test]
    fn pca_matches_characteristic_roots() {
        // numpy.roots(numpy.poly(M))
        let m = Matrix::from_rows(&[
            vec![1.0, 0.5, 0.3, 0.2],
            vec![0.5, 1.0, 0.4, 0.1],
            vec![0.3, 0.4, 1.0, 0.6],
            vec![0.2, 0.1, 0.6, 1.0],
        ])
        .unwrap();
        let expected = [2.0635058859675466, 1.0797941357215788, 0.5488088132814815, 0.30789116502939595];
        let s = pca(&m).unwrap();
        for (a, b) in s.eigenvalues.iter().zip(expected) {
            assert_relative_eq!(*a, b, epsilon = 1e-8);
        }
    }

    #[test]
    fn pca_rejects_bad_input() {
        let asym = Matrix::from_rows(&[vec![1.0, 0.5], vec![0.4, 1.0]]).unwrap();
        assert!(pca(&asym).is_err());
        let not_psd = Matrix::from_rows(&[vec![1.0, 0.9, -0.9], vec![0.9, 1.0, 0.9], vec![-0.9, 0.9, 1.0]]).unwrap();
        assert!(pca(&not_psd).is_err());
    }

    #[test]
    fn retention_rules() {
        let ev = [4.628, 1.545, 1.307, 1.083, 1.006, 0.9, 0.75, 0.5];
        assert_eq!(retain_components(&ev, RetentionRule::Kaiser), 5);
        assert_eq!(retain_components(&ev, RetentionRule::Jolliffe), 7);
        assert_eq!(retain_components(&[0.6, 0.5], RetentionRule::Jolliffe), 0);
        assert_eq!(retain_components(&[2.0, 1.0, 0.5], RetentionRule::Kaiser), 1);
        assert_eq!(retain_components(&[2.0, 1.0, 0.5], RetentionRule::Threshold(0.4)), 3);
    }

    #[test]
    fn simple_structure_unchanged() {
        let l = Matrix::<f64>::from_rows(&[vec![0.9, 0.0], vec![0.8, 0.0], vec![0.0, 0.7], vec![0.0, 0.6]]).unwrap();
        let r = varimax(&l).unwrap();
        for i in 0..4 {
            for j in 0..2 {
                assert_relative_eq!(r[(i, j)].abs(), l[(i, j)].abs(), epsilon = 1e-9);
            }
        }
    }

    #[test]
    fn single_component_is_noop() {
        let l = Matrix::from_rows(&[vec![0.9], vec![0.3]]).unwrap();
        assert_eq!(varimax(&l).unwrap(), l);
    }

    fn canonical(m: &Matrix<f64>) -> Vec<Vec<f64>> {
        let mut cols: Vec<Vec<f64>> = (0..m.cols())
            .map(|j| {
                let c = m.column(j);
                let s = if c.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
                c.into_iter().map(|v| v * s).collect()
            })
            .collect();
        cols.sort_by(|a, b| b[0].total_cmp(&a[0]));
        cols
    }

    #[test]
    fn matches_angle_grid_oracle() {
        let l = Matrix::<f64>::from_rows(&[
            vec![0.70, 0.40],
            vec![0.65, 0.45],
            vec![0.72, 0.30],
            vec![0.35, 0.68],
            vec![0.30, 0.74],
            vec![0.42, 0.60],
        ])
        .unwrap();
        let got = varimax(&l).unwrap();

        // Oracle: maximise the criterion of the Kaiser-normalised loadings
        // over a fine grid of rotation angles, then refine by ternary search.
        let h: Vec<f64> = (0..6).map(|i| (l[(i, 0)].powi(2) + l[(i, 1)].powi(2)).sqrt()).collect();
        let rot = |t: f64| Matrix::from_fn(6, 2, |i, j| {
            let (x, y) = (l[(i, 0)] / h[i], l[(i, 1)] / h[i]);
            if j == 0 { x * t.cos() + y * t.sin() } else { -x * t.sin() + y * t.cos() }
        });
        let steps = 20_000;
        let mut best = (0.0, f64::MIN);
        for s in 0..steps {
            let t = std::f64::consts::FRAC_PI_2 * s as f64 / steps as f64;
            let c = varimax_criterion(&rot(t));
            if c > best.1 {
                best = (t, c);
            }
        }
        let (mut lo, mut hi) = (best.0 - 1e-4, best.0 + 1e-4);
        for _ in 0..100 {
            let (m1, m2) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
            if varimax_criterion(&rot(m1)) < varimax_criterion(&rot(m2)) { lo = m1 } else { hi = m2 }
        }
        let t = (lo + hi) / 2.0;
        let r = rot(t);
        let oracle = Matrix::from_fn(6, 2, |i, j| r[(i, j)] * h[i]);
        for (a, b) in canonical(&got).iter().zip(canonical(&oracle)) {
            for (x, y) in a.iter().zip(b) {
                assert!((x - y).abs() < 1e-4, "{x} vs {y}");
            }
        }
    }

    fn loadings_strategy() -> impl Strategy<Value = Matrix<f64>> {
        (2usize..4, prop::collection::vec(-0.9..0.9f64, 24)).prop_map(|(k, v)| {
            let p = 24 / k.max(1) / 2;
            Matrix::from_fn(p.max(3), k, |i, j| v[(i * k + j) % v.len()] * 0.9 / (k as f64).sqrt())
        })
    }

    fn random_correlation(seed: &[f64], p: usize) -> Matrix<f64> {
        // B Bᵀ scaled to unit diagonal is a valid correlation matrix.
        let b = Matrix::from_fn(p, p + 1, |i, j| seed[(i * (p + 1) + j) % seed.len()]);
        let s = b.matmul(&b.transpose()).unwrap();
        Matrix::from_fn(p, p, |i, j| s[(i, j)] / (s[(i, i)] * s[(j, j)]).sqrt())
    }

    proptest! {
        #[test]
        fn varimax_preserves_communalities(l in loadings_strategy()) {
            let r = varimax(&l).unwrap();
            for (a, b) in communalities(&l).iter().zip(communalities(&r)) {
                prop_assert!((a - b).abs() < 1e-9);
            }
            let total = |m: &Matrix<f64>| communalities(m).iter().sum::<f64>();
            prop_assert!((total(&l) - total(&r)).abs() < 1e-9);
        }

        #[test]
        fn pca_eigenvalues_sum_to_p(seed in prop::collection::vec(-1.0..1.0f64, 30), p in 2usize..6) {
            let r = random_correlation(&seed, p);
            if let Ok(s) = pca(&r) {
                prop_assert!((s.eigenvalues.iter().sum::<f64>() - p as f64).abs() < 1e-9);
                let back = s.loadings.matmul(&s.loadings.transpose()).unwrap();
                prop_assert!(back.max_abs_diff(&r).unwrap() < 1e-8);
                prop_assert!(s.communalities.iter().all(|&c| (-1e-9..=1.0 + 1e-9).contains(&c)));
            }
        }

        #[test]
        fn kmo_and_msa_in_unit_interval(seed in prop::collection::vec(-1.0..1.0f64, 30), p in 3usize..6) {
            let r = random_correlation(&seed, p);
            let names: Vec<String> = (0..p).map(|i| format!("v{i}")).collect();
            if let Ok(rep) = adequacy_from_correlation(&names, &r, 100) {
                prop_assert!((0.0..=1.0).contains(&rep.kmo));
                prop_assert!(rep.msa.iter().all(|m| (0.0..=1.0).contains(m)));
                prop_assert!(rep.bartlett.statistic >= 0.0);
            }
        }
    }
}
