//! Higher-order diagnostics of configurations: triangle side multisets and
//! brute-force Hamiltonian circuit statistics.

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{raw_distance_matrix, DistanceMultiset, PointConfiguration};

/// One sorted side-triple per point triple: the finite-configuration proxy
/// for three-body statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleMultiset {
    /// Sorted within each triple, triples sorted lexicographically.
    pub triples: Vec<[f64; 3]>,
}

/// A Hamiltonian circuit: vertex visiting order and total length.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Circuit {
    pub order: Vec<usize>,
    pub length: f64,
}

/// All undirected Hamiltonian circuits of a configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircuitReport {
    pub circuits: Vec<Circuit>,
    #[serde(rename = "distinct")]
    pub distinct_length_count: usize,
    pub shortest: Circuit,
}

/// Sorted side-triples of all C(n,3) triangles.
pub fn triangle_multiset(config: &PointConfiguration) -> Result<TriangleMultiset> {
    let n = config.len();
    if n < 3 {
        return Err(Error::InvalidConfiguration("need n >= 3 points".into()));
    }
    let dm = raw_distance_matrix(config);
    let mut triples: Vec<[f64; 3]> = (0..n)
        .combinations(3)
        .map(|c| {
            let mut t = [dm[c[0]][c[1]], dm[c[0]][c[2]], dm[c[1]][c[2]]];
            t.sort_by(|a, b| a.partial_cmp(b).unwrap());
            t
        })
        .collect();
    triples.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(TriangleMultiset { triples })
}

/// Brute-force cap on circuit enumeration.
pub const CIRCUIT_CAP: usize = 12;

/// Enumerate all (n-1)!/2 undirected Hamiltonian cycles, grouping lengths
/// within `length_tol` (relative to the mean distance) to count
/// distinguishable circuits.
pub fn hamiltonian_circuits(
    config: &PointConfiguration,
    length_tol: f64,
) -> Result<CircuitReport> {
    let n = config.len();
    if n < 3 {
        return Err(Error::InvalidConfiguration("need n >= 3 points".into()));
    }
    if n > CIRCUIT_CAP {
        return Err(Error::ScopeExceeded { n, cap: CIRCUIT_CAP });
    }
    let dm = raw_distance_matrix(config);
    let mean = {
        let mut s = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                s += dm[i][j];
            }
        }
        s / (n * (n - 1) / 2) as f64
    };
    let eps = length_tol * mean.max(1e-300);

    let mut circuits = Vec::new();
    let rest: Vec<usize> = (1..n).collect();
    for perm in rest.iter().copied().permutations(n - 1) {
        // quotient out direction: keep one orientation per cycle
        if perm[0] > perm[n - 2] {
            continue;
        }
        let mut order = Vec::with_capacity(n);
        order.push(0);
        order.extend(&perm);
        let mut len = 0.0;
        for k in 0..n {
            len += dm[order[k]][order[(k + 1) % n]];
        }
        circuits.push(Circuit { order, length: len });
    }

    let mut lengths: Vec<f64> = circuits.iter().map(|c| c.length).collect();
    lengths.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut distinct = 1;
    for w in lengths.windows(2) {
        if w[1] - w[0] > eps {
            distinct += 1;
        }
    }
    let shortest = circuits
        .iter()
        .min_by(|a, b| a.length.partial_cmp(&b.length).unwrap())
        .cloned()
        .expect("at least one circuit");
    Ok(CircuitReport {
        circuits,
        distinct_length_count: distinct,
        shortest,
    })
}

/// Sorted-value comparison of two distance multisets within `tol`.
/// Cardinality mismatch compares unequal.
pub fn multiset_equal(a: &DistanceMultiset, b: &DistanceMultiset, tol: f64) -> bool {
    if a.values().len() != b.values().len() {
        return false;
    }
    a.values()
        .iter()
        .zip(b.values())
        .all(|(x, y)| (x - y).abs() <= tol)
}

/// Componentwise comparison of triangle multisets within `tol`.
pub fn triangle_multisets_equal(a: &TriangleMultiset, b: &TriangleMultiset, tol: f64) -> bool {
    if a.triples.len() != b.triples.len() {
        return false;
    }
    a.triples
        .iter()
        .zip(&b.triples)
        .all(|(x, y)| x.iter().zip(y).all(|(u, v)| (u - v).abs() <= tol))
}
