//! Parametric generators for explicit degenerate families: the
//! kite-trapezoid pair, centrally symmetric two-fold constructions and
//! generic simplex distance sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::degeneracy::{enumerate_assemblies, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::geometry::{
    congruent, raw_distance_matrix, realizability_check, DistanceAssignment, DistanceMultiset,
    PointConfiguration, STRUCTURAL_TOL,
};

/// The two-fold degenerate kite/trapezoid family at parameter x.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KiteTrapezoidPair {
    pub x: f64,
    pub kite: PointConfiguration,
    pub trapezoid: PointConfiguration,
    /// (a, b, c, d) edge lengths with d = 1.
    pub edge_lengths: (f64, f64, f64, f64),
}

/// Edge lengths of the family: a = sqrt(2x^2 - 3x + 5/4),
/// b = sqrt(2x^2 - x + 1/4), c = 2x - 1, d = 1.
pub fn kite_trapezoid_edges(x: f64) -> (f64, f64, f64, f64) {
    let a = (2.0 * x * x - 3.0 * x + 1.25).sqrt();
    let b = (2.0 * x * x - x + 0.25).sqrt();
    let c = 2.0 * x - 1.0;
    (a, b, c, 1.0)
}

/// Build the kite and trapezoid realizing the multiset {a, a, b, b, c, 1}.
///
/// The two distance assignments are found by realizability search over the
/// pairings of the multiset onto point pairs, not assumed; the kite is the
/// class whose distance matrix admits a nontrivial relabeling fixing exactly
/// two points (its symmetry axis passes through two vertices), while the
/// trapezoid's axis fixes none.
///
/// Requires x > 1/2. Use [`kite_trapezoid_boundary`] for the collinear
/// x = 1/2 limit.
pub fn kite_trapezoid(x: f64) -> Result<KiteTrapezoidPair> {
    if !(x > 0.5) {
        return Err(Error::InvalidParameter(format!(
            "kite-trapezoid parameter must satisfy x > 1/2, got {}",
            x
        )));
    }
    let (a, b, c, d) = kite_trapezoid_edges(x);
    let ms = DistanceMultiset::new(vec![a, a, b, b, c, d])?;
    let rep = enumerate_assemblies(&ms, 2, STRUCTURAL_TOL, DEFAULT_BUDGET);
    if rep.set.order != 2 {
        return Err(Error::InvalidParameter(format!(
            "expected 2 congruence classes at x = {}, found {}",
            x, rep.set.order
        )));
    }
    let mut kite = None;
    let mut trapezoid = None;
    for class in rep.set.classes {
        if has_two_fixed_point_symmetry(&class) {
            kite = Some(class);
        } else {
            trapezoid = Some(class);
        }
    }
    match (kite, trapezoid) {
        (Some(kite), Some(trapezoid)) => Ok(KiteTrapezoidPair {
            x,
            kite,
            trapezoid,
            edge_lengths: (a, b, c, d),
        }),
        _ => Err(Error::InvalidParameter(format!(
            "could not classify kite vs trapezoid at x = {}",
            x
        ))),
    }
}

/// The collinear x = 1/2 limit, where both shapes collapse onto a segment
/// (two points coincide). Both returned configurations are the common limit.
pub fn kite_trapezoid_boundary() -> KiteTrapezoidPair {
    let (a, b, c, d) = kite_trapezoid_edges(0.5);
    let collapsed = PointConfiguration::new(
        2,
        vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![0.5, 0.0],
            vec![0.5, 0.0],
        ],
    )
    .expect("static coordinates are valid");
    KiteTrapezoidPair {
        x: 0.5,
        kite: collapsed.clone(),
        trapezoid: collapsed,
        edge_lengths: (a, b, c, d),
    }
}

/// True iff the distance matrix admits a nontrivial self-relabeling fixing
/// exactly two point indices.
fn has_two_fixed_point_symmetry(config: &PointConfiguration) -> bool {
    use itertools::Itertools;
    let n = config.len();
    let dm = raw_distance_matrix(config);
    let scale: f64 = dm.iter().flatten().cloned().fold(0.0, f64::max).max(1e-300);
    let eps = 1e-7 * scale;
    for perm in (0..n).permutations(n) {
        let fixed = perm.iter().enumerate().filter(|&(i, &p)| i == p).count();
        if fixed == n || fixed != 2 {
            continue;
        }
        let ok = (0..n).all(|i| {
            (0..n).all(|j| (dm[i][j] - dm[perm[i]][perm[j]]).abs() <= eps)
        });
        if ok {
            return true;
        }
    }
    false
}

/// Parameters of the centrally symmetric two-fold construction: a centrally
/// symmetric core, a symmetric point row on a parallel line offset from the
/// center, and a symmetric row through the center split into primary and
/// dual halves.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetricConstructionParams {
    pub dimension: usize,
    /// Centrally symmetric point set about the origin.
    pub gamma1: Vec<Vec<f64>>,
    /// Offset of the second center from the origin; must be orthogonal to
    /// the first axis (its first component zero) and nonzero.
    pub gamma2_offset: Vec<f64>,
    /// Positions along the first axis relative to the second center;
    /// must form a set symmetric about zero.
    pub gamma2_positions: Vec<f64>,
    /// Half-spacings t_j > 0 of the through-center row: the full row is
    /// {+t_j, -t_j} on the first axis.
    pub gamma3_offsets: Vec<f64>,
    /// Sign choice per t_j selecting the primary point (+1 or -1).
    pub primary_signs: Vec<i8>,
}

impl SymmetricConstructionParams {
    /// The planar default: a generic centrally symmetric core (two antipodal
    /// pairs with no mirror symmetry — a reflection-symmetric core would make
    /// the primary and dual congruent), three evenly spaced points on the
    /// offset line, and two primary points.
    pub fn default_planar() -> Self {
        Self {
            dimension: 2,
            gamma1: vec![
                vec![0.6, 0.35],
                vec![-0.6, -0.35],
                vec![0.2, -0.55],
                vec![-0.2, 0.55],
            ],
            gamma2_offset: vec![0.0, 1.0],
            gamma2_positions: vec![-0.8, 0.0, 0.8],
            gamma3_offsets: vec![0.45, 1.15],
            primary_signs: vec![1, -1],
        }
    }

    /// The spatial default: a centered box core and an offset with two
    /// transverse components.
    pub fn default_spatial() -> Self {
        Self {
            dimension: 3,
            gamma1: vec![
                vec![0.6, 0.35, 0.2],
                vec![-0.6, -0.35, -0.2],
                vec![0.6, -0.35, 0.2],
                vec![-0.6, 0.35, -0.2],
            ],
            gamma2_offset: vec![0.0, 1.0, 0.4],
            gamma2_positions: vec![-0.8, 0.0, 0.8],
            gamma3_offsets: vec![0.45, 1.15],
            primary_signs: vec![1, -1],
        }
    }

    /// Randomized parameter set with the invariants enforced by
    /// construction.
    pub fn random(dimension: usize, n2: usize, n3: usize, rng: &mut impl Rng) -> Self {
        let mut gamma1 = Vec::new();
        let core_pairs = 2;
        for _ in 0..core_pairs {
            let p: Vec<f64> = (0..dimension).map(|_| rng.gen_range(-1.0..1.0)).collect();
            gamma1.push(p.iter().map(|v| -v).collect());
            gamma1.push(p);
        }
        let mut gamma2_offset = vec![0.0; dimension];
        for v in gamma2_offset.iter_mut().skip(1) {
            *v = rng.gen_range(0.5..1.5);
        }
        let mut gamma2_positions = Vec::new();
        if n2 % 2 == 1 {
            gamma2_positions.push(0.0);
        }
        for i in 0..n2 / 2 {
            let s = 0.5 + 0.6 * i as f64 + rng.gen_range(0.0..0.3);
            gamma2_positions.push(s);
            gamma2_positions.push(-s);
        }
        let gamma3_offsets: Vec<f64> = (0..n3)
            .map(|i| 0.3 + 0.7 * i as f64 + rng.gen_range(0.0..0.3))
            .collect();
        let primary_signs: Vec<i8> = (0..n3)
            .map(|_| if rng.gen_bool(0.5) { 1 } else { -1 })
            .collect();
        Self {
            dimension,
            gamma1,
            gamma2_offset,
            gamma2_positions,
            gamma3_offsets,
            primary_signs,
        }
    }

    fn validate(&self) -> Result<()> {
        let d = self.dimension;
        if d < 2 {
            return Err(Error::InvalidParameter("dimension must be >= 2".into()));
        }
        for p in &self.gamma1 {
            if p.len() != d {
                return Err(Error::InvalidParameter(
                    "core point has wrong dimension".into(),
                ));
            }
        }
        // central symmetry of the core
        for p in &self.gamma1 {
            let neg: Vec<f64> = p.iter().map(|v| -v).collect();
            let found = self.gamma1.iter().any(|q| {
                q.iter()
                    .zip(&neg)
                    .all(|(a, b)| (a - b).abs() <= 1e-12)
            });
            if !found {
                return Err(Error::InvalidParameter(
                    "core set is not centrally symmetric about the origin".into(),
                ));
            }
        }
        if self.gamma2_offset.len() != d
            || self.gamma2_offset[0].abs() > 1e-12
            || self.gamma2_offset.iter().map(|v| v * v).sum::<f64>() <= 1e-12
        {
            return Err(Error::InvalidParameter(
                "offset must be nonzero and orthogonal to the first axis".into(),
            ));
        }
        // row symmetry about the second center
        for &s in &self.gamma2_positions {
            if !self
                .gamma2_positions
                .iter()
                .any(|&t| (t + s).abs() <= 1e-12)
            {
                return Err(Error::InvalidParameter(
                    "offset-row positions are not symmetric about their center".into(),
                ));
            }
        }
        if self.gamma3_offsets.iter().any(|&t| !(t > 0.0)) {
            return Err(Error::InvalidParameter(
                "through-center spacings must be > 0".into(),
            ));
        }
        for (i, &a) in self.gamma3_offsets.iter().enumerate() {
            for &b in &self.gamma3_offsets[i + 1..] {
                if (a - b).abs() <= 1e-12 {
                    return Err(Error::InvalidParameter(
                        "through-center spacings must be distinct".into(),
                    ));
                }
            }
        }
        if self.primary_signs.len() != self.gamma3_offsets.len()
            || self.primary_signs.iter().any(|&s| s != 1 && s != -1)
        {
            return Err(Error::InvalidParameter(
                "need one sign of +/-1 per through-center spacing".into(),
            ));
        }
        Ok(())
    }
}

/// A constructed degenerate pair with its attached non-congruence check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymmetricTwoFold {
    pub primary: PointConfiguration,
    pub dual: PointConfiguration,
    pub multisets_equal: bool,
    pub noncongruent: bool,
}

/// Build the degenerate pair: core + offset row + primary half-row, and the
/// same with the dual (inverted) half-row. Multiset equality follows from
/// the inversion symmetry of everything except the half-row; the
/// non-congruence check is executed and a congruent outcome rejected.
pub fn symmetric_two_fold(params: &SymmetricConstructionParams) -> Result<SymmetricTwoFold> {
    params.validate()?;
    let d = params.dimension;

    let mut shared: Vec<Vec<f64>> = params.gamma1.clone();
    for &s in &params.gamma2_positions {
        let mut p = params.gamma2_offset.clone();
        p[0] += s;
        shared.push(p);
    }

    let axis_point = |t: f64| -> Vec<f64> {
        let mut p = vec![0.0; d];
        p[0] = t;
        p
    };
    let mut primary_pts = shared.clone();
    let mut dual_pts = shared.clone();
    for (&t, &sign) in params.gamma3_offsets.iter().zip(&params.primary_signs) {
        primary_pts.push(axis_point(t * sign as f64));
        dual_pts.push(axis_point(-t * sign as f64));
    }

    let primary = PointConfiguration::new(d, primary_pts)?;
    let dual = PointConfiguration::new(d, dual_pts)?;

    let dp = crate::geometry::pairwise_distances(&primary)?;
    let dd = crate::geometry::pairwise_distances(&dual)?;
    let multisets_equal = crate::analysis::multiset_equal(&dp.multiset(), &dd.multiset(), 1e-12);
    if !multisets_equal {
        return Err(Error::InvalidParameter(
            "constructed pair has unequal distance multisets (invariant violated)".into(),
        ));
    }
    let noncongruent = !congruent(&primary, &dual, 1e-9, false)?;
    if !noncongruent {
        return Err(Error::CongruentPair);
    }
    Ok(SymmetricTwoFold {
        primary,
        dual,
        multisets_equal,
        noncongruent,
    })
}

/// Draw a randomized parameter set and build the pair, retrying on
/// accidental symmetry or coincident points.
pub fn symmetric_two_fold_random(
    dimension: usize,
    n2: usize,
    n3: usize,
    seed: u64,
) -> Result<SymmetricTwoFold> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..64 {
        let params = SymmetricConstructionParams::random(dimension, n2, n3, &mut rng);
        match symmetric_two_fold(&params) {
            Ok(pair) => return Ok(pair),
            Err(Error::CongruentPair) | Err(Error::DuplicatePoint { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::CongruentPair)
}

const RESAMPLE_CAP: usize = 100;
const GOLDEN_FRAC: f64 = 0.618_033_988_749_894_9;

/// Generic simplex distances mean + delta_i with deterministic, mutually
/// distinct small offsets from a seeded Kronecker (golden-ratio) sequence.
/// The result always passes the simplex inequalities for n = d+1; too large
/// a spread is resampled up to a cap and then rejected.
pub fn generic_simplex_distances(
    d: usize,
    mean: f64,
    spread: f64,
    seed: u64,
) -> Result<DistanceMultiset> {
    if d < 1 || !(mean > 0.0) || spread < 0.0 {
        return Err(Error::InvalidParameter(
            "need d >= 1, mean > 0 and spread >= 0".into(),
        ));
    }
    let m = d * (d + 1) / 2;
    if spread == 0.0 {
        // lax mode: equal values, the regular simplex
        return DistanceMultiset::new(vec![mean; m]);
    }
    if spread >= mean {
        return Err(Error::InvalidParameter(
            "spread must be smaller than the mean distance".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..RESAMPLE_CAP {
        let u0: f64 = rng.gen();
        let values: Vec<f64> = (0..m)
            .map(|i| {
                let u = (u0 + (i + 1) as f64 * GOLDEN_FRAC).fract();
                mean + spread * (2.0 * u - 1.0)
            })
            .collect();
        let distinct = values.iter().enumerate().all(|(i, a)| {
            values[i + 1..]
                .iter()
                .all(|b| (a - b).abs() > 1e-12 * mean)
        });
        if !distinct {
            continue;
        }
        let ms = DistanceMultiset::new(values)?;
        if simplex_feasible(&ms, d) {
            return Ok(ms);
        }
    }
    Err(Error::SpreadTooLarge)
}

fn simplex_feasible(ms: &DistanceMultiset, d: usize) -> bool {
    let n = d + 1;
    match DistanceAssignment::from_pair_values(n, ms.values()) {
        Ok(dists) => realizability_check(&dists, d, STRUCTURAL_TOL).realizable,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{multiset_equal, triangle_multiset};
    use crate::geometry::pairwise_distances;

    #[test]
    fn kite_trapezoid_at_three_quarters() {
        let pair = kite_trapezoid(0.75).unwrap();
        let mk = pairwise_distances(&pair.kite).unwrap().multiset();
        let mt = pairwise_distances(&pair.trapezoid).unwrap().multiset();
        assert!(multiset_equal(&mk, &mt, 1e-12));
        assert!(!congruent(&pair.kite, &pair.trapezoid, 1e-9, false).unwrap());
        let tk = triangle_multiset(&pair.kite).unwrap();
        let tt = triangle_multiset(&pair.trapezoid).unwrap();
        assert!(!crate::analysis::triangle_multisets_equal(&tk, &tt, 1e-9));
    }

    #[test]
    fn kite_is_triangle_bounded_past_one() {
        // x > 1: still a valid degenerate pair
        let pair = kite_trapezoid(1.2).unwrap();
        let mk = pairwise_distances(&pair.kite).unwrap().multiset();
        let mt = pairwise_distances(&pair.trapezoid).unwrap().multiset();
        assert!(multiset_equal(&mk, &mt, 1e-12));
        assert!(!congruent(&pair.kite, &pair.trapezoid, 1e-9, false).unwrap());
    }

    #[test]
    fn boundary_collapses_to_segment() {
        let pair = kite_trapezoid_boundary();
        for p in &pair.kite.points {
            assert_eq!(p[1], 0.0);
        }
        assert_eq!(pair.edge_lengths.2, 0.0);
    }

    #[test]
    fn strict_mode_rejects_half() {
        assert!(kite_trapezoid(0.5).is_err());
        assert!(kite_trapezoid(0.3).is_err());
    }

    #[test]
    fn symmetric_default_planar() {
        let out = symmetric_two_fold(&SymmetricConstructionParams::default_planar()).unwrap();
        assert!(out.multisets_equal);
        assert!(out.noncongruent);
    }

    #[test]
    fn symmetric_default_spatial() {
        let out = symmetric_two_fold(&SymmetricConstructionParams::default_spatial()).unwrap();
        assert!(out.multisets_equal);
        assert!(out.noncongruent);
    }

    #[test]
    fn symmetric_single_point_row() {
        // smallest nontrivial instance: one off-center primary point
        let mut params = SymmetricConstructionParams::default_planar();
        params.gamma3_offsets = vec![0.45];
        params.primary_signs = vec![1];
        let out = symmetric_two_fold(&params).unwrap();
        assert!(out.multisets_equal);
    }

    #[test]
    fn symmetric_rejects_bad_offset() {
        let mut params = SymmetricConstructionParams::default_planar();
        params.gamma2_offset = vec![0.3, 1.0]; // not orthogonal to the axis
        assert!(symmetric_two_fold(&params).is_err());
    }

    #[test]
    fn generic_distances_realizable_and_reproducible() {
        let a = generic_simplex_distances(3, 1.0, 0.05, 7).unwrap();
        let b = generic_simplex_distances(3, 1.0, 0.05, 7).unwrap();
        assert_eq!(a.values(), b.values());
        assert_eq!(a.values().len(), 6);
        assert!(simplex_feasible(&a, 3));
        let c = generic_simplex_distances(4, 1.0, 0.02, 1).unwrap();
        assert_eq!(c.values().len(), 10);
        assert!(simplex_feasible(&c, 4));
    }

    #[test]
    fn zero_spread_gives_regular_simplex() {
        let ms = generic_simplex_distances(2, 1.0, 0.0, 0).unwrap();
        assert_eq!(ms.values(), &[1.0, 1.0, 1.0]);
    }
}
