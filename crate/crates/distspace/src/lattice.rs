//! Bravais-lattice distance spectra and fundamental-cell reconstruction
//! from the smallest distances.

use itertools::Itertools;
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::degeneracy::{enumerate_assemblies, DEFAULT_BUDGET};
use crate::error::{Error, Result};
use crate::geometry::{DistanceMultiset, STRUCTURAL_TOL};

/// d linearly independent basis vectors spanning a Bravais lattice.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeBasis {
    pub dimension: usize,
    pub vectors: Vec<Vec<f64>>,
}

impl LatticeBasis {
    pub fn new(dimension: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        if vectors.len() != dimension || dimension == 0 {
            return Err(Error::InvalidParameter(format!(
                "need exactly {} basis vectors",
                dimension
            )));
        }
        for v in &vectors {
            if v.len() != dimension || v.iter().any(|c| !c.is_finite()) {
                return Err(Error::InvalidParameter(
                    "basis vectors must be finite with matching dimension".into(),
                ));
            }
        }
        let b = Self { dimension, vectors };
        let g = b.matrix();
        let det = (&g * g.transpose()).determinant();
        let scale: f64 = b
            .vectors
            .iter()
            .flatten()
            .fold(0.0f64, |m, c| m.max(c.abs()))
            .powi(2 * dimension as i32);
        if det.abs() <= 1e-12 * scale.max(1e-300) {
            return Err(Error::InvalidParameter(
                "basis vectors are linearly dependent".into(),
            ));
        }
        Ok(b)
    }

    /// Row matrix of the basis vectors.
    pub fn matrix(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.dimension, self.dimension, |i, j| self.vectors[i][j])
    }
}

/// One distance shell: a distance value and how many lattice vectors
/// realize it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Shell {
    pub distance: f64,
    pub multiplicity: usize,
}

/// Sorted inter-point distances of a lattice within a cutoff radius.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LatticeSpectrum {
    pub dimension: usize,
    pub cutoff: f64,
    pub shells: Vec<Shell>,
}

impl LatticeSpectrum {
    /// Flattened distance multiset (each shell repeated by multiplicity).
    pub fn distances(&self) -> Vec<f64> {
        self.shells
            .iter()
            .flat_map(|s| std::iter::repeat_n(s.distance, s.multiplicity))
            .collect()
    }

    pub fn shortest(&self) -> Option<f64> {
        self.shells.first().map(|s| s.distance)
    }
}

const VECTOR_BUDGET: u64 = 10_000_000;
const SHELL_REL_TOL: f64 = 1e-9;

/// Enumerate all nonzero lattice vectors n1 a1 + ... + nd ad with length
/// at most `cutoff`, grouped into shells.
pub fn lattice_distance_spectrum(basis: &LatticeBasis, cutoff: f64) -> Result<LatticeSpectrum> {
    if !(cutoff > 0.0) {
        return Err(Error::InvalidParameter("cutoff must be > 0".into()));
    }
    let d = basis.dimension;
    let b = basis.matrix();
    // |n_i| <= cutoff * ||row i of B^{ -1 }|| for |B^T n| <= cutoff
    let inv = b
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::InvalidParameter("basis is singular".into()))?;
    let bounds: Vec<i64> = (0..d)
        .map(|i| {
            // n_i = sum_j inv[(j, i)] x_j for the lattice point x
            let norm: f64 = (0..d).map(|j| inv[(j, i)] * inv[(j, i)]).sum::<f64>().sqrt();
            (cutoff * norm).ceil() as i64 + 1
        })
        .collect();
    let total: u64 = bounds
        .iter()
        .map(|&bd| (2 * bd + 1) as u64)
        .try_fold(1u64, |acc, v| acc.checked_mul(v))
        .unwrap_or(u64::MAX);
    if total > VECTOR_BUDGET {
        return Err(Error::BudgetExceeded {
            budget: VECTOR_BUDGET,
        });
    }

    let mut dists: Vec<f64> = Vec::new();
    let mut idx: Vec<i64> = bounds.iter().map(|&bd| -bd).collect();
    'outer: loop {
        if idx.iter().any(|&v| v != 0) {
            let mut len2 = 0.0;
            for c in 0..d {
                let x: f64 = (0..d).map(|i| idx[i] as f64 * basis.vectors[i][c]).sum();
                len2 += x * x;
            }
            let len = len2.sqrt();
            if len <= cutoff * (1.0 + SHELL_REL_TOL) {
                dists.push(len);
            }
        }
        let mut pos = 0;
        loop {
            if pos == d {
                break 'outer;
            }
            idx[pos] += 1;
            if idx[pos] <= bounds[pos] {
                break;
            }
            idx[pos] = -bounds[pos];
            pos += 1;
        }
    }

    dists.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut shells: Vec<Shell> = Vec::new();
    for v in dists {
        match shells.last_mut() {
            Some(s) if (v - s.distance).abs() <= SHELL_REL_TOL * s.distance.max(1.0) => {
                s.multiplicity += 1
            }
            _ => shells.push(Shell {
                distance: v,
                multiplicity: 1,
            }),
        }
    }
    Ok(LatticeSpectrum {
        dimension: d,
        cutoff,
        shells,
    })
}

fn spectra_match(a: &LatticeSpectrum, b: &LatticeSpectrum, tol: f64) -> bool {
    a.shells.len() == b.shells.len()
        && a.shells.iter().zip(&b.shells).all(|(x, y)| {
            x.multiplicity == y.multiplicity
                && (x.distance - y.distance).abs() <= tol * x.distance.max(1.0)
        })
}

/// Reconstruct a fundamental cell from a spectrum (d <= 3): candidate edge
/// multisets drawn from the smallest shells are assembled into d-simplices;
/// the first assembly whose regenerated spectrum matches the input (shell
/// values and multiplicities) yields the basis, returned in reduced form.
pub fn reconstruct_cell(spectrum: &LatticeSpectrum, d: usize) -> Result<LatticeBasis> {
    if !(1..=3).contains(&d) {
        return Err(Error::InvalidParameter(
            "reconstruction is supported for d <= 3".into(),
        ));
    }
    if spectrum.shells.is_empty() {
        return Err(Error::ReconstructionFailed);
    }
    if d == 1 {
        let a = spectrum.shells[0].distance;
        return LatticeBasis::new(1, vec![vec![a]]);
    }
    let m = d * (d + 1) / 2;
    let shell_values: Vec<f64> = spectrum
        .shells
        .iter()
        .take((m + 2).min(spectrum.shells.len()))
        .map(|s| s.distance)
        .collect();

    // candidate edge multisets, smallest total length first
    let mut candidates: Vec<Vec<f64>> = (0..shell_values.len())
        .combinations_with_replacement(m)
        .map(|c| c.iter().map(|&i| shell_values[i]).collect())
        .collect();
    candidates.sort_by(|a, b| {
        let sa: f64 = a.iter().sum();
        let sb: f64 = b.iter().sum();
        sa.partial_cmp(&sb).unwrap()
    });

    let match_tol = 1e-6;
    for edges in candidates {
        let ms = match DistanceMultiset::new(edges) {
            Ok(m) => m,
            Err(_) => continue,
        };
        let rep = enumerate_assemblies(&ms, d, STRUCTURAL_TOL, DEFAULT_BUDGET);
        for class in &rep.set.classes {
            // vertex 0 sits at the origin in canonical gauge
            let vectors: Vec<Vec<f64>> = class.points[1..].to_vec();
            let basis = match LatticeBasis::new(d, vectors) {
                Ok(b) => b,
                Err(_) => continue,
            };
            let regen = match lattice_distance_spectrum(&basis, spectrum.cutoff) {
                Ok(s) => s,
                Err(_) => continue,
            };
            if spectra_match(spectrum, &regen, match_tol) {
                return Ok(reduce_basis(&basis));
            }
        }
    }
    Err(Error::ReconstructionFailed)
}

/// Basis reduction: Lagrange-Gauss for d = 2, greedy pairwise shortening
/// for d >= 3. The reduced basis spans the same lattice with shorter,
/// closer-to-orthogonal vectors.
pub fn reduce_basis(basis: &LatticeBasis) -> LatticeBasis {
    let d = basis.dimension;
    let mut v: Vec<Vec<f64>> = basis.vectors.clone();
    let norm2 = |a: &[f64]| -> f64 { a.iter().map(|x| x * x).sum() };
    let dot = |a: &[f64], b: &[f64]| -> f64 { a.iter().zip(b).map(|(x, y)| x * y).sum() };

    let mut changed = true;
    let mut rounds = 0;
    while changed && rounds < 64 {
        changed = false;
        rounds += 1;
        for i in 0..d {
            for j in 0..d {
                if i == j {
                    continue;
                }
                let mu = (dot(&v[i], &v[j]) / norm2(&v[j])).round();
                if mu != 0.0 {
                    let before = norm2(&v[i]);
                    let cand: Vec<f64> = v[i]
                        .iter()
                        .zip(&v[j])
                        .map(|(a, b)| a - mu * b)
                        .collect();
                    if norm2(&cand) < before - 1e-15 * before {
                        v[i] = cand;
                        changed = true;
                    }
                }
            }
        }
        // keep vectors sorted by length
        v.sort_by(|a, b| norm2(a).partial_cmp(&norm2(b)).unwrap());
    }
    LatticeBasis {
        dimension: d,
        vectors: v,
    }
}
