//! Enumeration of congruence classes realizing a distance multiset, and the
//! constrained-distance polynomial systems used to construct k-fold
//! degenerate four-point configurations.

use nalgebra::{DMatrix, DVector, Matrix3};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{
    congruent, embed_lax, pair_order, realizability_check, DistanceAssignment, DistanceMultiset,
    PointConfiguration,
};

/// The congruence classes realizing one distance multiset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DegeneracyClassSet {
    pub multiset: Vec<f64>,
    pub dimension: usize,
    pub order: usize,
    pub classes: Vec<PointConfiguration>,
}

/// Outcome of an assembly enumeration, including budget accounting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EnumerationReport {
    pub set: DegeneracyClassSet,
    /// Assignment nodes evaluated (including pruned partial assignments).
    pub evaluated: u64,
    /// False when the evaluation budget was exhausted; `set` then holds a
    /// partial result.
    pub complete: bool,
    /// Fraction of the assignment space explored (1.0 when complete).
    pub explored_fraction: f64,
}

/// The multinomial D(x1..x6): determinant of the 3x3 matrix of squared
/// distances whose vanishing makes the ordered sextuple assemblable as a
/// planar four-point configuration.
///
/// The published bottom-right entry reads -2 x5^2; that form does not vanish
/// on distances measured from actual planar configurations, while -2 x4^2
/// (the squared distance from the origin point to the fourth point, matching
/// the Gram diagonal) does. The corrected entry is used here.
pub fn constraint_polynomial(x: &[f64; 6]) -> f64 {
    let s: Vec<f64> = x.iter().map(|v| v * v).collect();
    let m = Matrix3::new(
        -2.0 * s[0],
        s[2] - s[0] - s[1],
        s[4] - s[0] - s[3],
        s[2] - s[0] - s[1],
        -2.0 * s[1],
        s[5] - s[1] - s[3],
        s[4] - s[0] - s[3],
        s[5] - s[1] - s[3],
        -2.0 * s[3],
    );
    m.determinant()
}

/// A simultaneous system D(Omega_i) = 0 over the six distance slots of a
/// planar four-point configuration. `free_values` fixes some slots; the
/// remaining `unknowns` are solved for.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PermutationConstraintSystem {
    /// (slot, value) pairs for the fixed distances; slots are 0-based
    /// positions in the pair order (1,2),(1,3),(2,3),(1,4),(2,4),(3,4).
    pub free_values: Vec<(usize, f64)>,
    /// Slots to solve for.
    pub unknowns: Vec<usize>,
    /// Each permutation maps argument position -> slot index: the value fed
    /// to argument j of D is the distance in slot `perm[j]`.
    pub equations: Vec<[usize; 6]>,
}

impl PermutationConstraintSystem {
    pub fn new(
        free_values: Vec<(usize, f64)>,
        unknowns: Vec<usize>,
        equations: Vec<[usize; 6]>,
    ) -> Result<Self> {
        let mut seen = [false; 6];
        for &(s, v) in &free_values {
            if s >= 6 || seen[s] {
                return Err(Error::InvalidParameter(format!("bad free slot {}", s)));
            }
            if !(v > 0.0) {
                return Err(Error::InvalidParameter("free values must be > 0".into()));
            }
            seen[s] = true;
        }
        for &s in &unknowns {
            if s >= 6 || seen[s] {
                return Err(Error::InvalidParameter(format!("bad unknown slot {}", s)));
            }
            seen[s] = true;
        }
        if !seen.iter().all(|&b| b) {
            return Err(Error::InvalidParameter(
                "free values and unknowns must cover all six slots".into(),
            ));
        }
        if equations.len() > unknowns.len() {
            return Err(Error::InvalidParameter(
                "more equations than unknowns".into(),
            ));
        }
        for perm in &equations {
            let mut hit = [false; 6];
            for &p in perm {
                if p >= 6 || hit[p] {
                    return Err(Error::InvalidParameter("equation is not a permutation".into()));
                }
                hit[p] = true;
            }
        }
        Ok(Self {
            free_values,
            unknowns,
            equations,
        })
    }

    fn residuals(&self, unknown_vals: &[f64]) -> Vec<f64> {
        let mut slots = [0.0f64; 6];
        for &(s, v) in &self.free_values {
            slots[s] = v;
        }
        for (&s, &v) in self.unknowns.iter().zip(unknown_vals) {
            slots[s] = v;
        }
        self.equations
            .iter()
            .map(|perm| {
                let mut args = [0.0f64; 6];
                for (j, &p) in perm.iter().enumerate() {
                    args[j] = slots[p];
                }
                constraint_polynomial(&args)
            })
            .collect()
    }

    fn free_mean(&self) -> f64 {
        let s: f64 = self.free_values.iter().map(|&(_, v)| v).sum();
        s / self.free_values.len() as f64
    }
}

/// Solution of a [`PermutationConstraintSystem`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolvedSystem {
    /// Root reached from the supplied (or default mean-seeded) initial guess.
    pub primary: Vec<f64>,
    /// All distinct positive real roots found from a grid of initial
    /// guesses; a heuristic sweep, not a completeness guarantee.
    pub roots: Vec<Vec<f64>>,
    pub residual: f64,
}

const NEWTON_CAP: usize = 200;
const GRID_PER_UNKNOWN: usize = 16;

/// Solve the simultaneous system by damped Newton iteration. The primary
/// root starts from `initial_guess` (free-distance mean when `None`); a grid
/// of 16 seeds per unknown over [0.1 mean, 3 mean] collects further roots.
pub fn solve_constrained(
    system: &PermutationConstraintSystem,
    initial_guess: Option<&[f64]>,
    tol: f64,
) -> Result<SolvedSystem> {
    let k = system.unknowns.len();
    if system.equations.len() != k {
        return Err(Error::InvalidParameter(format!(
            "need as many independent equations as unknowns ({} vs {})",
            system.equations.len(),
            k
        )));
    }
    let mean = system.free_mean();
    let seed: Vec<f64> = match initial_guess {
        Some(g) if g.len() == k => g.to_vec(),
        Some(_) => {
            return Err(Error::InvalidParameter(
                "initial guess length must match unknown count".into(),
            ))
        }
        None => vec![mean; k],
    };
    // residual scale: D is degree 6 in the distances
    let res_tol = tol.max(1e-12) * mean.powi(6).max(1e-12);

    let primary = newton(system, &seed, res_tol)
        .ok_or_else(|| match newton_final(system, &seed) {
            (residual, iterations) => Error::SolverDiverged {
                residual,
                iterations,
            },
        })?;

    let mut roots: Vec<Vec<f64>> = vec![primary.clone()];
    let lo = 0.1 * mean;
    let hi = 3.0 * mean;
    let mut idx = vec![0usize; k];
    loop {
        let guess: Vec<f64> = idx
            .iter()
            .map(|&i| lo + (hi - lo) * (i as f64 + 0.5) / GRID_PER_UNKNOWN as f64)
            .collect();
        if let Some(r) = newton(system, &guess, res_tol) {
            let dup = roots.iter().any(|q| {
                q.iter()
                    .zip(&r)
                    .all(|(a, b)| (a - b).abs() <= 1e-7 * mean.max(1.0))
            });
            if !dup {
                roots.push(r);
            }
        }
        // advance mixed-radix counter
        let mut pos = 0;
        loop {
            if pos == k {
                break;
            }
            idx[pos] += 1;
            if idx[pos] < GRID_PER_UNKNOWN {
                break;
            }
            idx[pos] = 0;
            pos += 1;
        }
        if pos == k {
            break;
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let residual = system
        .residuals(&primary)
        .iter()
        .fold(0.0f64, |m, r| m.max(r.abs()));
    Ok(SolvedSystem {
        primary,
        roots,
        residual,
    })
}

fn newton(system: &PermutationConstraintSystem, seed: &[f64], res_tol: f64) -> Option<Vec<f64>> {
    let k = seed.len();
    let mut u = DVector::from_column_slice(seed);
    let norm = |r: &[f64]| r.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    for _ in 0..NEWTON_CAP {
        let r = system.residuals(u.as_slice());
        let rn = norm(&r);
        if rn < res_tol {
            let out = u.as_slice().to_vec();
            if out.iter().all(|&v| v > 1e-9) {
                return Some(out);
            }
            return None;
        }
        // forward-difference Jacobian
        let h = 1e-7 * u.amax().max(1.0);
        let mut jac = DMatrix::<f64>::zeros(k, k);
        for c in 0..k {
            let mut up = u.clone();
            up[c] += h;
            let rp = system.residuals(up.as_slice());
            for row in 0..k {
                jac[(row, c)] = (rp[row] - r[row]) / h;
            }
        }
        let rhs = DVector::from_iterator(k, r.iter().map(|v| -v));
        let step = jac.lu().solve(&rhs)?;
        // damping halved whenever the residual fails to decrease
        let mut lambda = 1.0;
        let mut accepted = false;
        while lambda > 1e-10 {
            let cand = &u + lambda * &step;
            if cand.iter().all(|&v| v > 0.0) && norm(&system.residuals(cand.as_slice())) < rn {
                u = cand;
                accepted = true;
                break;
            }
            lambda *= 0.5;
        }
        if !accepted {
            return None;
        }
    }
    None
}

fn newton_final(system: &PermutationConstraintSystem, seed: &[f64]) -> (f64, usize) {
    let r = system.residuals(seed);
    (r.iter().fold(0.0f64, |m, v| m.max(v.abs())), NEWTON_CAP)
}

/// Maximum degeneracy order of a d-simplex: (m-1)!/2^(d-1) with
/// m = d(d+1)/2 edge distances.
pub fn kmax_simplex(d: usize) -> BigUint {
    assert!(d >= 2, "simplex counting needs d >= 2");
    let m = d * (d + 1) / 2;
    let mut fact = BigUint::from(1u32);
    for v in 2..m {
        fact *= BigUint::from(v);
    }
    fact >> (d - 1)
}

pub const DEFAULT_BUDGET: u64 = 10_000_000;

/// Enumerate all congruence classes of configurations in R^d realizing the
/// multiset. The largest value is fixed onto pair (1,2) as the reference
/// distance; the remaining value slots are permuted with triangle-inequality
/// pruning on partial assignments, each surviving assignment is tested for
/// realizability, embedded and deduplicated by congruence.
pub fn enumerate_assemblies(
    multiset: &DistanceMultiset,
    d: usize,
    tol: f64,
    budget: u64,
) -> EnumerationReport {
    let n = multiset.point_count();
    let pairs = pair_order(n);
    let m = pairs.len();

    // descending so the reference (largest) value sits in slot 0
    let mut values: Vec<f64> = multiset.values().to_vec();
    values.reverse();

    let mean = multiset.mean();
    let tri_slack = tol.sqrt().max(1e-12) * mean * 10.0;

    // pairs among points < j are assigned before any pair (i, j)
    let mut state = EnumState {
        pairs,
        values,
        assigned: vec![0.0; m],
        used: vec![false; m],
        classes: Vec::new(),
        evaluated: 0,
        budget,
        exhausted: false,
        d,
        tol,
        tri_slack,
        n,
        leaves_done: 0,
    };
    state.used[0] = true;
    state.assigned[0] = state.values[0];
    state.recurse(1);

    let total_leaves: f64 = (1..m).map(|v| v as f64).product();
    let explored = if state.exhausted {
        (state.leaves_done as f64 / total_leaves).min(1.0)
    } else {
        1.0
    };

    let mut classes = state.classes;
    sort_classes(&mut classes);
    EnumerationReport {
        set: DegeneracyClassSet {
            multiset: multiset.values().to_vec(),
            dimension: d,
            order: classes.len(),
            classes,
        },
        evaluated: state.evaluated,
        complete: !state.exhausted,
        explored_fraction: explored,
    }
}

struct EnumState {
    pairs: Vec<(usize, usize)>,
    values: Vec<f64>,
    assigned: Vec<f64>,
    used: Vec<bool>,
    classes: Vec<PointConfiguration>,
    evaluated: u64,
    budget: u64,
    exhausted: bool,
    d: usize,
    tol: f64,
    tri_slack: f64,
    n: usize,
    leaves_done: u64,
}

impl EnumState {
    fn recurse(&mut self, slot: usize) {
        if self.exhausted {
            return;
        }
        let m = self.pairs.len();
        if slot == m {
            self.leaves_done += 1;
            self.try_assignment();
            return;
        }
        for v in 1..m {
            if self.used[v] {
                continue;
            }
            // skip equal values in the same slot (duplicate multiset entries)
            if self.values[..v]
                .iter()
                .zip(&self.used[..v])
                .any(|(&w, &u)| !u && w == self.values[v])
            {
                continue;
            }
            self.evaluated += 1;
            if self.evaluated > self.budget {
                self.exhausted = true;
                return;
            }
            self.assigned[slot] = self.values[v];
            if !self.partial_ok(slot) {
                continue;
            }
            self.used[v] = true;
            self.recurse(slot + 1);
            self.used[v] = false;
        }
    }

    /// Triangle inequalities over all fully assigned triples involving the
    /// pair just placed in `slot`.
    fn partial_ok(&self, slot: usize) -> bool {
        let (i, j) = self.pairs[slot];
        debug_assert!(i < j);
        let idx = |a: usize, b: usize| -> usize {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            hi * (hi - 1) / 2 + lo
        };
        for k in 0..j {
            if k == i {
                continue;
            }
            let s_kj = idx(k, j);
            if s_kj > slot {
                continue; // not yet assigned
            }
            let a = self.assigned[slot];
            let b = self.assigned[s_kj];
            let c = self.assigned[idx(i, k)];
            if a > b + c + self.tri_slack
                || b > a + c + self.tri_slack
                || c > a + b + self.tri_slack
            {
                return false;
            }
        }
        true
    }

    fn try_assignment(&mut self) {
        let dists = match DistanceAssignment::from_pair_values(self.n, &self.assigned) {
            Ok(d) => d,
            Err(_) => return,
        };
        if !realizability_check(&dists, self.d, self.tol).realizable {
            return;
        }
        let config = match embed_lax(&dists, self.d, self.tol) {
            Ok(c) => c,
            Err(_) => return,
        };
        let tol_cong = self.tol.sqrt().max(1e-9);
        let is_new = self
            .classes
            .iter()
            .all(|c| !congruent(c, &config, tol_cong, false).unwrap_or(false));
        if is_new {
            self.classes.push(config);
        }
    }
}

/// Deterministic output ordering: lexicographic by canonical coordinates.
fn sort_classes(classes: &mut [PointConfiguration]) {
    classes.sort_by(|a, b| {
        let fa = a.points.iter().flatten();
        let fb = b.points.iter().flatten();
        for (x, y) in fa.zip(fb) {
            match x.partial_cmp(y).unwrap() {
                std::cmp::Ordering::Equal => continue,
                o => return o,
            }
        }
        std::cmp::Ordering::Equal
    });
}

/// Specialization of [`enumerate_assemblies`] to simplices (n = d+1).
pub fn enumerate_simplex_classes(
    multiset: &DistanceMultiset,
    d: usize,
    tol: f64,
    budget: u64,
) -> Result<EnumerationReport> {
    let expected = d * (d + 1) / 2;
    if multiset.values().len() != expected {
        return Err(Error::InvalidDistances(format!(
            "a {}-simplex needs {} distances, got {}",
            d,
            expected,
            multiset.values().len()
        )));
    }
    Ok(enumerate_assemblies(multiset, d, tol, budget))
}

/// Standard systems from the four-point constructions.
pub mod systems {
    use super::PermutationConstraintSystem;

    pub const IDENTITY: [usize; 6] = [0, 1, 2, 3, 4, 5];

    /// Two-fold system: permutations Omega_1 (identity) and
    /// Omega_2 = (d1, d2, d3, d6, d4, d5).
    pub fn two_fold(free: [f64; 4]) -> PermutationConstraintSystem {
        PermutationConstraintSystem::new(
            free.iter().enumerate().map(|(i, &v)| (i, v)).collect(),
            vec![4, 5],
            vec![IDENTITY, [0, 1, 2, 5, 3, 4]],
        )
        .expect("well-formed two-fold system")
    }

    /// Three-fold system: Omega_1 identity, Omega_2 = (d1,d2,d3,d5,d6,d4),
    /// Omega_3 = (d1,d2,d3,d4,d6,d5).
    pub fn three_fold(free: [f64; 3]) -> PermutationConstraintSystem {
        PermutationConstraintSystem::new(
            free.iter().enumerate().map(|(i, &v)| (i, v)).collect(),
            vec![3, 4, 5],
            vec![IDENTITY, [0, 1, 2, 4, 5, 3], [0, 1, 2, 3, 5, 4]],
        )
        .expect("well-formed three-fold system")
    }
}

#[cfg(test)]
// the 5-decimal reference inputs happen to truncate 1/sqrt(2); they are
// fixed external values, not approximations chosen here
#[allow(clippy::approx_constant)]
mod tests {
    use super::*;
    use crate::geometry::STRUCTURAL_TOL;
    use approx::assert_relative_eq;

    const FIG5_FREE: [f64; 4] = [1.0, 1.58114, 0.70710, 0.87228];

    #[test]
    fn constraint_vanishes_for_square() {
        let s = 2f64.sqrt();
        let v = constraint_polynomial(&[1.0, s, 1.0, 1.0, s, 1.0]);
        assert!(v.abs() < 1e-12, "got {}", v);
    }

    #[test]
    fn constraint_vanishes_for_printed_two_fold_values() {
        let v1 = constraint_polynomial(&[1.0, 1.58114, 0.70710, 0.87228, 1.32698, 1.54551]);
        assert!(v1.abs() < 1e-3, "Omega1 residual {}", v1);
        let v2 = constraint_polynomial(&[1.0, 1.58114, 0.70710, 1.54551, 0.87228, 1.32698]);
        assert!(v2.abs() < 1e-3, "Omega2 residual {}", v2);
    }

    #[test]
    fn constraint_nonzero_for_unassemblable() {
        let v = constraint_polynomial(&[1.0, 1.0, 1.0, 1.0, 1.0, 2.9]);
        assert!(v.abs() > 1e-3);
    }

    #[test]
    fn two_fold_roots_contain_printed_values() {
        let sys = systems::two_fold(FIG5_FREE);
        let sol = solve_constrained(&sys, None, 1e-12).unwrap();
        assert!(sol.residual < 1e-10);
        let hit = sol
            .roots
            .iter()
            .any(|r| (r[0] - 1.32698).abs() < 1e-4 && (r[1] - 1.54551).abs() < 1e-4);
        assert!(hit, "roots: {:?}", sol.roots);
    }

    #[test]
    fn three_fold_roots_contain_printed_values() {
        let sys = systems::three_fold([1.0, 1.581144, 0.70710]);
        let sol = solve_constrained(&sys, None, 1e-12).unwrap();
        let hit = sol.roots.iter().any(|r| {
            (r[0] - 1.34371).abs() < 1e-4
                && (r[1] - 0.37267).abs() < 1e-4
                && (r[2] - 0.68718).abs() < 1e-4
        });
        assert!(hit, "roots: {:?}", sol.roots);
    }

    #[test]
    fn square_diagonal_closure() {
        // five square distances fixed, one diagonal unknown, single equation
        let s = 2f64.sqrt();
        let sys = PermutationConstraintSystem::new(
            vec![(0, 1.0), (1, s), (2, 1.0), (3, 1.0), (4, s)],
            vec![5],
            vec![systems::IDENTITY],
        )
        .unwrap();
        let sol = solve_constrained(&sys, None, 1e-14).unwrap();
        assert_relative_eq!(sol.primary[0], 1.0, epsilon = 1e-9);
        // the mirror placement yields the other diagonal sqrt(5) as a root
        assert!(sol
            .roots
            .iter()
            .any(|r| (r[0] - 5f64.sqrt()).abs() < 1e-9));
    }

    #[test]
    fn kmax_values() {
        assert_eq!(kmax_simplex(2), BigUint::from(1u32));
        assert_eq!(kmax_simplex(3), BigUint::from(30u32));
        assert_eq!(kmax_simplex(4), BigUint::from(45360u32));
    }

    #[test]
    fn generic_triangle_is_unique() {
        let ms = DistanceMultiset::new(vec![1.0, 1.01, 1.02]).unwrap();
        let rep = enumerate_simplex_classes(&ms, 2, STRUCTURAL_TOL, DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.set.order, 1);
        assert!(rep.complete);
    }

    #[test]
    fn equal_distances_collapse_to_regular_tetrahedron() {
        let ms = DistanceMultiset::new(vec![1.0; 6]).unwrap();
        let rep = enumerate_simplex_classes(&ms, 3, STRUCTURAL_TOL, DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.set.order, 1);
    }

    #[test]
    fn generic_tetrahedron_distances_give_thirty_classes() {
        let ms =
            DistanceMultiset::new(vec![1.0, 1.01, 1.02, 1.03, 1.04, 1.05]).unwrap();
        let rep = enumerate_simplex_classes(&ms, 3, STRUCTURAL_TOL, DEFAULT_BUDGET).unwrap();
        assert_eq!(rep.set.order, 30);
    }

    #[test]
    fn budget_exhaustion_reports_partial() {
        let ms =
            DistanceMultiset::new(vec![1.0, 1.01, 1.02, 1.03, 1.04, 1.05]).unwrap();
        let rep = enumerate_assemblies(&ms, 3, STRUCTURAL_TOL, 10);
        assert!(!rep.complete);
        assert!(rep.explored_fraction < 1.0);
    }

    #[test]
    fn representatives_reproduce_multiset() {
        let ms = DistanceMultiset::new(vec![1.0, 1.01, 1.02, 1.03, 1.04, 1.05]).unwrap();
        let rep = enumerate_assemblies(&ms, 3, STRUCTURAL_TOL, DEFAULT_BUDGET);
        for class in &rep.set.classes {
            let got = crate::geometry::pairwise_distances(class).unwrap().multiset();
            for (a, b) in got.values().iter().zip(ms.values()) {
                assert_relative_eq!(a, b, epsilon = 1e-8);
            }
        }
    }
}
