//! Foundational distance-geometry predicates and constructions: distances
//! from points, Cayley-Menger volumes, Gram matrices, realizability,
//! coordinate embedding and congruence testing.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default structural tolerance, relative to the squared mean distance.
pub const STRUCTURAL_TOL: f64 = 1e-9;
/// Default tolerance for matching 5-decimal printed values.
pub const REFERENCE_TOL: f64 = 1e-4;

/// `n` labeled points with real coordinates in R^d.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointConfiguration {
    pub dimension: usize,
    pub points: Vec<Vec<f64>>,
}

impl PointConfiguration {
    pub fn new(dimension: usize, points: Vec<Vec<f64>>) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::InvalidConfiguration("dimension must be >= 1".into()));
        }
        if points.is_empty() {
            return Err(Error::InvalidConfiguration("need at least one point".into()));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dimension {
                return Err(Error::InvalidConfiguration(format!(
                    "point {} has {} coordinates, expected {}",
                    i,
                    p.len(),
                    dimension
                )));
            }
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidConfiguration(format!(
                    "point {} has a non-finite coordinate",
                    i
                )));
            }
        }
        Ok(Self { dimension, points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Euclidean distance between points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> f64 {
        self.points[i]
            .iter()
            .zip(&self.points[j])
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }
}

/// A labeled symmetric matrix of pair distances: a specific assignment of
/// distances onto point pairs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceAssignment {
    n: usize,
    entries: Vec<f64>, // dense n*n, row major
}

impl DistanceAssignment {
    /// Build from the upper triangle listed in pair order (see [`pair_order`]).
    pub fn from_pair_values(n: usize, values: &[f64]) -> Result<Self> {
        let m = n * (n - 1) / 2;
        if values.len() != m {
            return Err(Error::InvalidDistances(format!(
                "expected {} pair distances for n = {}, got {}",
                m,
                n,
                values.len()
            )));
        }
        let mut entries = vec![0.0; n * n];
        for (k, &(i, j)) in pair_order(n).iter().enumerate() {
            let v = values[k];
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidDistances(format!(
                    "pair distance for ({},{}) must be finite and > 0, got {}",
                    i + 1,
                    j + 1,
                    v
                )));
            }
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
        Ok(Self { n, entries })
    }

    /// Build from explicit (i, j, value) triples with 0-based i < j.
    pub fn from_triples(n: usize, triples: &[(usize, usize, f64)]) -> Result<Self> {
        let m = n * (n - 1) / 2;
        if triples.len() != m {
            return Err(Error::InvalidDistances(format!(
                "expected {} pair entries for n = {}, got {}",
                m,
                n,
                triples.len()
            )));
        }
        let mut entries = vec![f64::NAN; n * n];
        for i in 0..n {
            entries[i * n + i] = 0.0;
        }
        for &(i, j, v) in triples {
            if i >= j || j >= n {
                return Err(Error::InvalidDistances(format!(
                    "pair ({},{}) out of range or not ordered i < j",
                    i + 1,
                    j + 1
                )));
            }
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::InvalidDistances(format!(
                    "pair distance for ({},{}) must be finite and > 0, got {}",
                    i + 1,
                    j + 1,
                    v
                )));
            }
            if !entries[i * n + j].is_nan() {
                return Err(Error::InvalidDistances(format!(
                    "duplicate entry for pair ({},{})",
                    i + 1,
                    j + 1
                )));
            }
            entries[i * n + j] = v;
            entries[j * n + i] = v;
        }
        if entries.iter().any(|v| v.is_nan()) {
            return Err(Error::InvalidDistances("missing pair entries".into()));
        }
        Ok(Self { n, entries })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    /// Upper-triangle values in pair order.
    pub fn pair_values(&self) -> Vec<f64> {
        pair_order(self.n)
            .iter()
            .map(|&(i, j)| self.get(i, j))
            .collect()
    }

    /// Restriction to a subset of point labels, preserving their order.
    pub fn restrict(&self, labels: &[usize]) -> Result<Self> {
        let k = labels.len();
        if labels.iter().any(|&l| l >= self.n) {
            return Err(Error::InvalidDistances("label out of range".into()));
        }
        let mut entries = vec![0.0; k * k];
        for (a, &i) in labels.iter().enumerate() {
            for (b, &j) in labels.iter().enumerate() {
                entries[a * k + b] = self.get(i, j);
            }
        }
        Ok(Self { n: k, entries })
    }

    /// Flatten the upper triangle into an unordered multiset view.
    pub fn multiset(&self) -> DistanceMultiset {
        DistanceMultiset::new(self.pair_values()).expect("valid assignment yields valid multiset")
    }

    /// Mean pair distance; the scale used to normalize tolerances.
    pub fn mean_distance(&self) -> f64 {
        let vals = self.pair_values();
        vals.iter().sum::<f64>() / vals.len() as f64
    }
}

/// Unordered collection of the m = n(n-1)/2 pair distances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistanceMultiset {
    values: Vec<f64>, // kept sorted ascending
    n: usize,
}

impl DistanceMultiset {
    pub fn new(mut values: Vec<f64>) -> Result<Self> {
        let m = values.len();
        let n = point_count_for_pairs(m).ok_or_else(|| {
            Error::InvalidDistances(format!("{} values is not n(n-1)/2 for any integer n >= 2", m))
        })?;
        if values.iter().any(|v| !(*v > 0.0) || !v.is_finite()) {
            return Err(Error::InvalidDistances(
                "multiset values must be finite and > 0".into(),
            ));
        }
        values.sort_by(|a, b| a.partial_cmp(b).unwrap());
        Ok(Self { values, n })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn point_count(&self) -> usize {
        self.n
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }
}

/// Inverse of m = n(n-1)/2.
pub fn point_count_for_pairs(m: usize) -> Option<usize> {
    let n = (((1 + 8 * m) as f64).sqrt() as usize).div_ceil(2);
    for cand in n.saturating_sub(1)..=n + 1 {
        if cand >= 2 && cand * (cand - 1) / 2 == m {
            return Some(cand);
        }
    }
    None
}

/// Pair slots in construction order: (1,2), (1,3), (2,3), (1,4), (2,4), (3,4), ...
/// (0-based here). Slot k of an n-point assignment refers to `pair_order(n)[k]`.
pub fn pair_order(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(n * (n - 1) / 2);
    for j in 1..n {
        for i in 0..j {
            out.push((i, j));
        }
    }
    out
}

/// Which feasibility condition failed, with its residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FailedCondition {
    /// A (k+1)-point subset has negative squared simplex volume.
    SimplexInequality {
        points: Vec<usize>,
        squared_volume: f64,
    },
    /// The Gram matrix has numerical rank above the target dimension;
    /// equivalently some (d+1)-minor determinant is nonzero.
    MinorRank { residual: f64 },
}

/// Verdict plus diagnostics from a realizability check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeasibilityReport {
    pub realizable: bool,
    pub failed_condition: Option<FailedCondition>,
    /// Gram eigenvalues (ascending), the signed residuals of the check.
    pub residuals: Vec<f64>,
    pub tolerance_used: f64,
}

/// Measure the Euclidean distance matrix of a configuration.
///
/// Coincident points (distance below `STRUCTURAL_TOL`-scaled threshold) are
/// rejected; use coordinates directly for deliberately collapsed inputs.
pub fn pairwise_distances(config: &PointConfiguration) -> Result<DistanceAssignment> {
    let n = config.len();
    if n < 2 {
        return Err(Error::InvalidConfiguration("need n >= 2 points".into()));
    }
    let scale = config
        .points
        .iter()
        .flatten()
        .fold(1.0_f64, |acc, c| acc.max(c.abs()));
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = config.distance(i, j);
            if d < STRUCTURAL_TOL.sqrt() * scale * 1e-3 {
                return Err(Error::DuplicatePoint { i, j, dist: d });
            }
            entries[i * n + j] = d;
            entries[j * n + i] = d;
        }
    }
    Ok(DistanceAssignment { n, entries })
}

/// Squared volume of the k-simplex with the given (k+1)-point distances,
/// via the bordered Cayley-Menger determinant. Negative for non-realizable
/// inputs.
pub fn cayley_menger_squared_volume(dists: &DistanceAssignment, k: usize) -> Result<f64> {
    let n = dists.len();
    if n != k + 1 {
        return Err(Error::ShapeMismatch(format!(
            "simplex dimension {} needs {} points, got {}",
            k,
            k + 1,
            n
        )));
    }
    let size = k + 2;
    let mut m = DMatrix::<f64>::zeros(size, size);
    for i in 1..size {
        m[(0, i)] = 1.0;
        m[(i, 0)] = 1.0;
    }
    for i in 0..n {
        for j in 0..n {
            let d = dists.get(i, j);
            m[(i + 1, j + 1)] = d * d;
        }
    }
    let det = m.determinant();
    let kfact: f64 = (1..=k).map(|v| v as f64).product();
    let sign = if (k + 1).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * det / (2f64.powi(k as i32) * kfact * kfact))
}

/// Non-strict simplex inequality: squared volume >= -tol (scaled).
///
/// The printed form of the planar inequality in terms of fourth powers of
/// the edges equals -16 * (squared area), so "> 0" there corresponds to a
/// *negative* squared area; the geometric meaning (nonnegative volume) is
/// what is implemented here.
pub fn simplex_inequality_holds(dists: &DistanceAssignment, k: usize, tol: f64) -> Result<bool> {
    let v2 = cayley_menger_squared_volume(dists, k)?;
    let scale = dists.mean_distance().powi(2 * k as i32);
    Ok(v2 >= -tol * scale)
}

/// Strict (nondegenerate) simplex inequality: squared volume > +tol (scaled).
pub fn simplex_inequality_strict(dists: &DistanceAssignment, k: usize, tol: f64) -> Result<bool> {
    let v2 = cayley_menger_squared_volume(dists, k)?;
    let scale = dists.mean_distance().powi(2 * k as i32);
    Ok(v2 > tol * scale)
}

/// Gram matrix of the difference vectors with the given origin point:
/// G_ij = (d_io^2 + d_jo^2 - d_ij^2) / 2 for points i, j != origin.
pub fn gram_from_distances(dists: &DistanceAssignment, origin: usize) -> Result<DMatrix<f64>> {
    let n = dists.len();
    if origin >= n {
        return Err(Error::ShapeMismatch(format!(
            "origin index {} out of range for n = {}",
            origin, n
        )));
    }
    let others: Vec<usize> = (0..n).filter(|&i| i != origin).collect();
    let k = others.len();
    let mut g = DMatrix::<f64>::zeros(k, k);
    for (a, &i) in others.iter().enumerate() {
        for (b, &j) in others.iter().enumerate() {
            let dio = dists.get(i, origin);
            let djo = dists.get(j, origin);
            let dij = dists.get(i, j);
            g[(a, b)] = 0.5 * (dio * dio + djo * djo - dij * dij);
        }
    }
    Ok(g)
}

/// Decide whether the assignment is realizable as points in R^d: the Gram
/// matrix must be positive semidefinite with at most d eigenvalues above
/// tolerance. The tolerance is relative to the squared mean distance.
pub fn realizability_check(dists: &DistanceAssignment, d: usize, tol: f64) -> FeasibilityReport {
    let n = dists.len();
    let scale = dists.mean_distance();
    let tol_abs = tol * scale * scale * n as f64;
    let g = gram_from_distances(dists, 0).expect("origin 0 always valid");
    let eig = g.symmetric_eigenvalues();
    let mut eigs: Vec<f64> = eig.iter().copied().collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let min_eig = eigs[0];
    let rank = eigs.iter().filter(|&&e| e > tol_abs).count();

    let mut failed = None;
    if min_eig < -tol_abs {
        // Name a violating simplex when one is small enough to find.
        failed = Some(find_violating_simplex(dists, d, tol).unwrap_or(
            FailedCondition::SimplexInequality {
                points: vec![],
                squared_volume: min_eig,
            },
        ));
    } else if rank > d {
        failed = Some(FailedCondition::MinorRank {
            residual: eigs[eigs.len() - d - 1],
        });
    }

    FeasibilityReport {
        realizable: failed.is_none(),
        failed_condition: failed,
        residuals: eigs,
        tolerance_used: tol,
    }
}

/// Scan (k+1)-point subsets for a negative Cayley-Menger volume, smallest
/// subsets first. Used only for diagnostics.
fn find_violating_simplex(
    dists: &DistanceAssignment,
    d: usize,
    tol: f64,
) -> Option<FailedCondition> {
    use itertools::Itertools;
    let n = dists.len();
    for k in 2..=d.min(n - 1) {
        for subset in (0..n).combinations(k + 1) {
            let sub = dists.restrict(&subset).ok()?;
            let v2 = cayley_menger_squared_volume(&sub, k).ok()?;
            let scale = sub.mean_distance().powi(2 * k as i32);
            if v2 < -tol * scale {
                return Some(FailedCondition::SimplexInequality {
                    points: subset,
                    squared_volume: v2,
                });
            }
        }
    }
    None
}

/// All (d+1)x(d+1) minor determinants of the Gram matrix, as a cross-check
/// on the eigenvalue rank test. Feasible distances make all of them vanish.
pub fn gram_minor_determinants(dists: &DistanceAssignment, d: usize) -> Result<Vec<f64>> {
    use itertools::Itertools;
    let g = gram_from_distances(dists, 0)?;
    let k = g.nrows();
    if k <= d {
        return Ok(vec![]);
    }
    let mut out = Vec::new();
    for rows in (0..k).combinations(d + 1) {
        for cols in (0..k).combinations(d + 1) {
            let mut minor = DMatrix::<f64>::zeros(d + 1, d + 1);
            for (a, &r) in rows.iter().enumerate() {
                for (b, &c) in cols.iter().enumerate() {
                    minor[(a, b)] = g[(r, c)];
                }
            }
            out.push(minor.determinant());
        }
    }
    Ok(out)
}

/// Embed a realizable assignment into canonical-gauge coordinates: point 1
/// at the origin, point 2 on the first axis, each later point's last fresh
/// coordinate positive. Rejects rank-deficient (boundary) inputs.
pub fn embed(dists: &DistanceAssignment, d: usize, tol: f64) -> Result<PointConfiguration> {
    embed_with(dists, d, tol, true)
}

/// As [`embed`], but accepts degenerate inputs and embeds them into their
/// affine hull (zero trailing coordinates).
pub fn embed_lax(dists: &DistanceAssignment, d: usize, tol: f64) -> Result<PointConfiguration> {
    embed_with(dists, d, tol, false)
}

fn embed_with(
    dists: &DistanceAssignment,
    d: usize,
    tol: f64,
    strict: bool,
) -> Result<PointConfiguration> {
    let n = dists.len();
    let report = realizability_check(dists, d, tol);
    if !report.realizable {
        return Err(Error::NotRealizable {
            dimension: d,
            report,
        });
    }
    let scale = dists.mean_distance();
    let gate = tol.max(1e-14) * scale * scale * 10.0;

    let mut coords = vec![vec![0.0; d]; n];
    let mut rank = 0usize;
    for i in 1..n {
        let mut y = vec![0.0; d];
        if rank > 0 {
            // 2 x_j . y = |x_j|^2 + d_{1,i}^2 - d_{j,i}^2 for placed j
            let placed: Vec<usize> = (1..i).collect();
            let rows = placed.len();
            let mut a = DMatrix::<f64>::zeros(rows, rank);
            let mut b = DVector::<f64>::zeros(rows);
            for (r, &j) in placed.iter().enumerate() {
                for c in 0..rank {
                    a[(r, c)] = 2.0 * coords[j][c];
                }
                let xj2: f64 = coords[j].iter().map(|v| v * v).sum();
                let d0 = dists.get(0, i);
                let dj = dists.get(j, i);
                b[r] = xj2 + d0 * d0 - dj * dj;
            }
            let svd = a.svd(true, true);
            let sol = svd
                .solve(&b, 1e-12 * scale)
                .map_err(|e| Error::InvalidDistances(e.to_string()))?;
            y[..rank].copy_from_slice(sol.as_slice());
        }
        let d0 = dists.get(0, i);
        let h2 = d0 * d0 - y.iter().map(|v| v * v).sum::<f64>();
        if h2 > gate {
            if rank >= d {
                return Err(Error::NotRealizable {
                    dimension: d,
                    report: realizability_check(dists, d, tol),
                });
            }
            y[rank] = h2.sqrt();
            rank += 1;
        } else if h2 < -gate * 100.0 {
            return Err(Error::NotRealizable {
                dimension: d,
                report: realizability_check(dists, d, tol),
            });
        }
        coords[i] = y;
    }

    if strict && rank < d.min(n - 1) {
        return Err(Error::DegenerateEmbedding);
    }

    let config = PointConfiguration::new(d, coords)?;
    // reproduction check
    let verify = tol.sqrt().max(1e-12) * scale * 10.0;
    for i in 0..n {
        for j in (i + 1)..n {
            if (config.distance(i, j) - dists.get(i, j)).abs() > verify {
                return Err(Error::NotRealizable {
                    dimension: d,
                    report: realizability_check(dists, d, tol),
                });
            }
        }
    }
    Ok(config)
}

/// Congruence up to translation, rotation and reflection: true iff some
/// relabeling makes the two distance matrices agree entrywise within `tol`
/// (scaled by the mean distance). With `allow_isotropic_rescale` each
/// configuration is first normalized by its own mean pair distance.
pub fn congruent(
    a: &PointConfiguration,
    b: &PointConfiguration,
    tol: f64,
    allow_isotropic_rescale: bool,
) -> Result<bool> {
    if a.dimension != b.dimension {
        return Err(Error::ShapeMismatch(format!(
            "dimensions differ: {} vs {}",
            a.dimension, b.dimension
        )));
    }
    if a.len() != b.len() {
        return Err(Error::ShapeMismatch(format!(
            "point counts differ: {} vs {}",
            a.len(),
            b.len()
        )));
    }
    let n = a.len();
    let mut da = raw_distance_matrix(a);
    let mut db = raw_distance_matrix(b);
    let mean = |m: &Vec<Vec<f64>>| -> f64 {
        let mut s = 0.0;
        let mut c = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += m[i][j];
                c += 1.0;
            }
        }
        if c > 0.0 {
            s / c
        } else {
            1.0
        }
    };
    let ma = mean(&da);
    let mb = mean(&db);
    if allow_isotropic_rescale {
        if ma > 0.0 {
            for r in da.iter_mut() {
                for v in r.iter_mut() {
                    *v /= ma;
                }
            }
        }
        if mb > 0.0 {
            for r in db.iter_mut() {
                for v in r.iter_mut() {
                    *v /= mb;
                }
            }
        }
    }
    let scale = if allow_isotropic_rescale { 1.0 } else { ma.max(mb).max(1e-300) };
    let eps = tol * scale;

    // Row-multiset pruning: candidate targets must have matching sorted rows.
    let sorted_row = |m: &Vec<Vec<f64>>, i: usize| -> Vec<f64> {
        let mut r: Vec<f64> = (0..n).filter(|&j| j != i).map(|j| m[i][j]).collect();
        r.sort_by(|x, y| x.partial_cmp(y).unwrap());
        r
    };
    let rows_a: Vec<Vec<f64>> = (0..n).map(|i| sorted_row(&da, i)).collect();
    let rows_b: Vec<Vec<f64>> = (0..n).map(|i| sorted_row(&db, i)).collect();
    let mut candidates: Vec<Vec<usize>> = Vec::with_capacity(n);
    for i in 0..n {
        let c: Vec<usize> = (0..n)
            .filter(|&j| {
                rows_a[i]
                    .iter()
                    .zip(&rows_b[j])
                    .all(|(x, y)| (x - y).abs() <= eps * (n as f64))
            })
            .collect();
        if c.is_empty() {
            return Ok(false);
        }
        candidates.push(c);
    }

    let mut mapping = vec![usize::MAX; n];
    let mut used = vec![false; n];
    Ok(backtrack(0, &mut mapping, &mut used, &candidates, &da, &db, eps))
}

fn backtrack(
    i: usize,
    mapping: &mut [usize],
    used: &mut [bool],
    candidates: &[Vec<usize>],
    da: &[Vec<f64>],
    db: &[Vec<f64>],
    eps: f64,
) -> bool {
    let n = mapping.len();
    if i == n {
        return true;
    }
    for &t in &candidates[i] {
        if used[t] {
            continue;
        }
        let consistent = (0..i).all(|j| (da[i][j] - db[t][mapping[j]]).abs() <= eps);
        if consistent {
            mapping[i] = t;
            used[t] = true;
            if backtrack(i + 1, mapping, used, candidates, da, db, eps) {
                return true;
            }
            used[t] = false;
            mapping[i] = usize::MAX;
        }
    }
    false
}

pub(crate) fn raw_distance_matrix(config: &PointConfiguration) -> Vec<Vec<f64>> {
    let n = config.len();
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let d = config.distance(i, j);
            m[i][j] = d;
            m[j][i] = d;
        }
    }
    m
}

/// Free dimension f of the distance space: the number of pair distances
/// constrained only by inequalities. f = d(d-1)/2 + (n-d)d for n > d+1;
/// for n <= d+1 every pair distance is free.
pub fn free_dimension(n: usize, d: usize) -> usize {
    assert!(n >= 2 && d >= 1, "need n >= 2 and d >= 1");
    if n <= d + 1 {
        n * (n - 1) / 2
    } else {
        d * (d - 1) / 2 + (n - d) * d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn unit_square() -> PointConfiguration {
        PointConfiguration::new(
            2,
            vec![
                vec![0.0, 0.0],
                vec![1.0, 0.0],
                vec![1.0, 1.0],
                vec![0.0, 1.0],
            ],
        )
        .unwrap()
    }

    fn triangle_345() -> DistanceAssignment {
        DistanceAssignment::from_pair_values(3, &[3.0, 4.0, 5.0]).unwrap()
    }

    #[test]
    fn square_multiset() {
        let d = pairwise_distances(&unit_square()).unwrap();
        let mut vals = d.multiset().values().to_vec();
        vals.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let sqrt2 = 2f64.sqrt();
        let expect = [1.0, 1.0, 1.0, 1.0, sqrt2, sqrt2];
        for (v, e) in vals.iter().zip(expect) {
            assert_relative_eq!(v, &e, epsilon = 1e-12);
        }
    }

    #[test]
    fn right_triangle_multiset() {
        let c = PointConfiguration::new(2, vec![vec![0.0, 0.0], vec![3.0, 0.0], vec![0.0, 4.0]])
            .unwrap();
        let d = pairwise_distances(&c).unwrap();
        assert_eq!(d.multiset().values(), &[3.0, 4.0, 5.0]);
    }

    #[test]
    fn coincident_points_rejected() {
        let c = PointConfiguration::new(2, vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        assert!(matches!(
            pairwise_distances(&c),
            Err(Error::DuplicatePoint { .. })
        ));
    }

    #[test]
    fn heron_345() {
        let v2 = cayley_menger_squared_volume(&triangle_345(), 2).unwrap();
        assert_relative_eq!(v2, 36.0, epsilon = 1e-9);
    }

    #[test]
    fn regular_tetrahedron_volume() {
        let d = DistanceAssignment::from_pair_values(4, &[1.0; 6]).unwrap();
        let v2 = cayley_menger_squared_volume(&d, 3).unwrap();
        assert_relative_eq!(v2, 1.0 / 72.0, epsilon = 1e-12);
    }

    #[test]
    fn collinear_zero_area() {
        let d = DistanceAssignment::from_pair_values(3, &[1.0, 2.0, 3.0]).unwrap();
        let v2 = cayley_menger_squared_volume(&d, 2).unwrap();
        assert_relative_eq!(v2, 0.0, epsilon = 1e-9);
        assert!(simplex_inequality_holds(&d, 2, STRUCTURAL_TOL).unwrap());
        assert!(!simplex_inequality_strict(&d, 2, STRUCTURAL_TOL).unwrap());
    }

    #[test]
    fn triangle_inequality_violation() {
        let d = DistanceAssignment::from_pair_values(3, &[1.0, 1.0, 5.0]).unwrap();
        assert!(!simplex_inequality_holds(&d, 2, STRUCTURAL_TOL).unwrap());
    }

    #[test]
    fn gram_right_angle_origin() {
        // origin at the right-angle vertex: legs 3 and 4, hypotenuse 5
        let d = DistanceAssignment::from_pair_values(3, &[3.0, 4.0, 5.0]).unwrap();
        let g = gram_from_distances(&d, 0).unwrap();
        assert_relative_eq!(g[(0, 0)], 9.0, epsilon = 1e-12);
        assert_relative_eq!(g[(1, 1)], 16.0, epsilon = 1e-12);
        assert_relative_eq!(g[(0, 1)], 0.0, epsilon = 1e-12);
    }

    #[test]
    fn gram_two_points() {
        let d = DistanceAssignment::from_pair_values(2, &[1.0]).unwrap();
        let g = gram_from_distances(&d, 0).unwrap();
        assert_eq!(g.nrows(), 1);
        assert_relative_eq!(g[(0, 0)], 1.0, epsilon = 1e-15);
    }

    #[test]
    fn realizability_rejects_triangle_violation() {
        let vals = [1.0, 1.0, 5.0, 1.0, 1.0, 1.0];
        let d = DistanceAssignment::from_pair_values(4, &vals).unwrap();
        let r = realizability_check(&d, 2, STRUCTURAL_TOL);
        assert!(!r.realizable);
        assert!(r.failed_condition.is_some());
    }

    #[test]
    fn measured_distances_always_realizable() {
        let c = unit_square();
        let d = pairwise_distances(&c).unwrap();
        assert!(realizability_check(&d, 2, STRUCTURAL_TOL).realizable);
        // ...but not in dimension 1
        assert!(!realizability_check(&d, 1, STRUCTURAL_TOL).realizable);
    }

    #[test]
    fn embed_345() {
        let d = triangle_345();
        let c = embed(&d, 2, STRUCTURAL_TOL).unwrap();
        assert_eq!(c.points[0], vec![0.0, 0.0]);
        assert_relative_eq!(c.points[1][0], 3.0, epsilon = 1e-12);
        assert_relative_eq!(c.points[1][1], 0.0, epsilon = 1e-12);
        assert!(c.points[2][1] > 0.0);
        assert_relative_eq!(c.distance(0, 2), 4.0, epsilon = 1e-12);
        assert_relative_eq!(c.distance(1, 2), 5.0, epsilon = 1e-12);
    }

    #[test]
    fn embed_infeasible_carries_report() {
        let d = DistanceAssignment::from_pair_values(3, &[1.0, 1.0, 5.0]).unwrap();
        match embed(&d, 2, STRUCTURAL_TOL) {
            Err(Error::NotRealizable { report, .. }) => assert!(!report.realizable),
            other => panic!("expected NotRealizable, got {:?}", other.map(|_| ())),
        }
    }

    #[test]
    fn embed_strict_rejects_collinear() {
        let d = DistanceAssignment::from_pair_values(3, &[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(
            embed(&d, 2, STRUCTURAL_TOL),
            Err(Error::DegenerateEmbedding)
        ));
        let c = embed_lax(&d, 2, STRUCTURAL_TOL).unwrap();
        assert_relative_eq!(c.points[2][1], 0.0, epsilon = 1e-9);
        assert_relative_eq!(c.distance(1, 2), 3.0, epsilon = 1e-9);
    }

    #[test]
    fn congruent_under_isometry() {
        let c = unit_square();
        let theta = 0.7f64;
        let (s, co) = theta.sin_cos();
        let moved = PointConfiguration::new(
            2,
            c.points
                .iter()
                .map(|p| vec![co * p[0] - s * p[1] + 5.0, -(s * p[0] + co * p[1]) - 2.0])
                .collect(),
        )
        .unwrap();
        assert!(congruent(&c, &moved, 1e-9, false).unwrap());
    }

    #[test]
    fn congruent_rescale() {
        let c = unit_square();
        let scaled = PointConfiguration::new(
            2,
            c.points
                .iter()
                .map(|p| p.iter().map(|v| v * 2.0).collect())
                .collect(),
        )
        .unwrap();
        assert!(!congruent(&c, &scaled, 1e-9, false).unwrap());
        assert!(congruent(&c, &scaled, 1e-9, true).unwrap());
    }

    #[test]
    fn congruent_shape_error() {
        let a = unit_square();
        let b = PointConfiguration::new(2, vec![vec![0.0, 0.0], vec![1.0, 0.0]]).unwrap();
        assert!(congruent(&a, &b, 1e-9, false).is_err());
    }

    #[test]
    fn free_dimension_values() {
        assert_eq!(free_dimension(4, 2), 5);
        assert_eq!(free_dimension(4, 3), 6);
        assert_eq!(free_dimension(10, 3), 24);
        assert_eq!(free_dimension(3, 2), 3);
        assert_eq!(free_dimension(2, 1), 1);
    }

    #[test]
    fn minor_determinants_vanish_for_measured() {
        let d = pairwise_distances(&unit_square()).unwrap();
        for det in gram_minor_determinants(&d, 2).unwrap() {
            assert!(det.abs() < 1e-9);
        }
    }
}
