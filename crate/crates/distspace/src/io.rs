//! JSON and CSV serialization of the domain types, with validating parsers.
//!
//! Distance files use 1-based point labels: `{"n": 4, "distances":
//! {"1,2": 1.0, ...}}` with i < j. Multiset files are plain JSON arrays.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::analysis::CircuitReport;
use crate::degeneracy::DegeneracyClassSet;
use crate::error::{Error, Result};
use crate::geometry::{DistanceAssignment, DistanceMultiset, PointConfiguration};
use crate::lattice::{LatticeBasis, LatticeSpectrum};

#[derive(Serialize, Deserialize)]
struct DistanceAssignmentJson {
    n: usize,
    distances: BTreeMap<String, f64>,
}

pub fn parse_point_configuration(text: &str) -> Result<PointConfiguration> {
    let raw: PointConfiguration =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("configuration: {}", e)))?;
    PointConfiguration::new(raw.dimension, raw.points)
}

pub fn parse_distance_assignment(text: &str) -> Result<DistanceAssignment> {
    let raw: DistanceAssignmentJson =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("distances: {}", e)))?;
    if raw.n < 2 {
        return Err(Error::Parse("distances: \"n\" must be >= 2".into()));
    }
    let mut triples = Vec::with_capacity(raw.distances.len());
    for (key, value) in &raw.distances {
        let (i, j) = parse_pair_key(key)?;
        triples.push((i - 1, j - 1, *value));
    }
    DistanceAssignment::from_triples(raw.n, &triples)
}

fn parse_pair_key(key: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("distances: key \"{}\" is not \"i,j\" with 1 <= i < j", key));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    let i: usize = a.trim().parse().map_err(|_| bad())?;
    let j: usize = b.trim().parse().map_err(|_| bad())?;
    if i == 0 || i >= j {
        return Err(bad());
    }
    Ok((i, j))
}

pub fn distance_assignment_to_json(dists: &DistanceAssignment) -> String {
    let mut map = BTreeMap::new();
    for (k, &(i, j)) in crate::geometry::pair_order(dists.len()).iter().enumerate() {
        map.insert(format!("{},{}", i + 1, j + 1), dists.pair_values()[k]);
    }
    serde_json::to_string_pretty(&DistanceAssignmentJson {
        n: dists.len(),
        distances: map,
    })
    .expect("serializable")
}

pub fn parse_multiset(text: &str) -> Result<DistanceMultiset> {
    let values: Vec<f64> =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("multiset: {}", e)))?;
    DistanceMultiset::new(values)
}

pub fn parse_lattice_basis(text: &str) -> Result<LatticeBasis> {
    let raw: LatticeBasis =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("basis: {}", e)))?;
    LatticeBasis::new(raw.dimension, raw.vectors)
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

/// Row-major upper triangle with header "i,j,distance" (1-based labels).
pub fn distance_matrix_csv(dists: &DistanceAssignment) -> String {
    let mut out = String::from("i,j,distance\n");
    for &(i, j) in &crate::geometry::pair_order(dists.len()) {
        out.push_str(&format!("{},{},{}\n", i + 1, j + 1, dists.get(i, j)));
    }
    out
}

pub fn spectrum_csv(spectrum: &LatticeSpectrum) -> String {
    let mut out = String::from("distance,multiplicity\n");
    for s in &spectrum.shells {
        out.push_str(&format!("{},{}\n", s.distance, s.multiplicity));
    }
    out
}

/// The kite-trapezoid edge-length family sampled over x.
pub fn kite_family_csv(xs: &[f64]) -> String {
    let mut out = String::from("x,a,b,c\n");
    for &x in xs {
        let (a, b, c, _) = crate::constructions::kite_trapezoid_edges(x);
        out.push_str(&format!("{},{},{},{}\n", x, a, b, c));
    }
    out
}

/// Write via a temporary sibling and rename, so failures never leave a
/// partial file behind.
pub fn write_atomic(path: &Path, contents: &str) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty());
    if let Some(dir) = dir {
        fs::create_dir_all(dir)?;
    }
    let tmp = path.with_extension("tmp~");
    fs::write(&tmp, contents)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

pub fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(Error::Io)
}

// Re-exported type aliases used by the CLI output files.
pub type ClassSetJson = DegeneracyClassSet;
pub type CircuitJson = CircuitReport;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn distance_assignment_round_trip() {
        let d = DistanceAssignment::from_pair_values(3, &[3.0, 4.0, 5.0]).unwrap();
        let text = distance_assignment_to_json(&d);
        let back = parse_distance_assignment(&text).unwrap();
        assert_eq!(back.pair_values(), d.pair_values());
    }

    #[test]
    fn bad_pair_key_is_named() {
        let text = r#"{"n": 3, "distances": {"2,1": 1.0, "1,3": 1.0, "2,3": 1.0}}"#;
        let err = parse_distance_assignment(text).unwrap_err();
        assert!(err.to_string().contains("2,1"), "got: {}", err);
    }

    #[test]
    fn missing_entry_rejected() {
        let text = r#"{"n": 3, "distances": {"1,2": 1.0, "1,3": 1.0}}"#;
        assert!(parse_distance_assignment(text).is_err());
    }

    #[test]
    fn configuration_validation() {
        assert!(parse_point_configuration(r#"{"dimension": 2, "points": [[0,0],[1]]}"#).is_err());
        let ok = parse_point_configuration(r#"{"dimension": 2, "points": [[0,0],[1,0]]}"#);
        assert!(ok.is_ok());
    }

    #[test]
    fn multiset_parse() {
        assert!(parse_multiset("[1.0, 2.0, 3.0]").is_ok());
        assert!(parse_multiset("[1.0, 2.0]").is_err()); // not n(n-1)/2
        assert!(parse_multiset("[1.0, -2.0, 3.0]").is_err());
    }

    #[test]
    fn csv_headers() {
        let d = DistanceAssignment::from_pair_values(3, &[3.0, 4.0, 5.0]).unwrap();
        let csv = distance_matrix_csv(&d);
        assert!(csv.starts_with("i,j,distance\n"));
        assert_eq!(csv.lines().count(), 4);
    }
}
