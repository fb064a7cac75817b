//! Reference data compiled into the binary and checked against recorded
//! SHA-256 digests before use.

use num_bigint::BigInt;
use serde::Deserialize;
use sha2::{Digest, Sha256};
use tilehull_core::intlin::{IntMatrix, IntVector};

use crate::dto::{GroupDto, LimitGroupDto};

const FILES: &[(&str, &str)] = &[
    ("a2_star.csv", include_str!("../fixtures/a2_star.csv")),
    ("tile_value_generators.csv", include_str!("../fixtures/tile_value_generators.csv")),
    ("b.csv", include_str!("../fixtures/b.csv")),
    ("eigenpairs.csv", include_str!("../fixtures/eigenpairs.csv")),
    ("image_generators.csv", include_str!("../fixtures/image_generators.csv")),
    ("m.csv", include_str!("../fixtures/m.csv")),
    ("expected.json", include_str!("../fixtures/expected.json")),
];

const SUMS: &str = include_str!("../fixtures/SHA256SUMS");

#[derive(Debug)]
pub enum FixtureError {
    Checksum { file: String, expected: String, found: String },
    MissingChecksum(String),
    Malformed { file: String, message: String },
}

impl std::fmt::Display for FixtureError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FixtureError::Checksum { file, expected, found } => {
                write!(f, "fixture {file}: checksum {found} does not match recorded {expected}")
            }
            FixtureError::MissingChecksum(file) => write!(f, "fixture {file} has no recorded checksum"),
            FixtureError::Malformed { file, message } => write!(f, "fixture {file}: {message}"),
        }
    }
}

impl std::error::Error for FixtureError {}

#[derive(Clone, Debug, Deserialize)]
pub struct CensusExpect {
    pub source: String,
    pub total: usize,
    pub by_base: std::collections::BTreeMap<String, usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ComplexExpect {
    pub source: String,
    pub vertices: usize,
    pub edges: usize,
    pub faces: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct QuotientCohomologyExpect {
    pub source: String,
    pub h0: GroupDto,
    pub h1: GroupDto,
    pub h2: GroupDto,
    pub torsion_representative_coefficients: Vec<i64>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct EigenExpect {
    pub source: String,
    pub required: Vec<(i64, usize)>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct LimitsExpect {
    pub source: String,
    pub h0: LimitGroupDto,
    pub h1: LimitGroupDto,
    pub h2: LimitGroupDto,
}

#[derive(Clone, Debug, Deserialize)]
pub struct ChainExpect {
    pub source: String,
    pub stabilized_free_rank: usize,
    pub stabilized_torsion: Vec<i64>,
    pub core_limit: LimitGroupDto,
}

#[derive(Clone, Debug, Deserialize)]
pub struct SingularityExpect {
    pub source: String,
    pub periodic: usize,
    pub non_periodic: usize,
    pub periods: Vec<usize>,
}

#[derive(Clone, Debug, Deserialize)]
pub struct HullExpect {
    pub source: String,
    pub h0: LimitGroupDto,
    pub h1: LimitGroupDto,
    pub h2: LimitGroupDto,
    pub h3: LimitGroupDto,
    pub e11: LimitGroupDto,
    pub singularity_count: usize,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Expected {
    pub census: CensusExpect,
    pub complex: ComplexExpect,
    pub quotient_complex_cohomology: QuotientCohomologyExpect,
    pub a2_eigenvalues: EigenExpect,
    pub rotation_quotient_limits: LimitsExpect,
    pub fixture_chain: ChainExpect,
    pub singularities: SingularityExpect,
    pub hull: HullExpect,
}

/// The embedded reference data.
#[derive(Clone, Debug)]
pub struct Fixtures {
    /// Degree-two induced map on 18 free generators and one of order 2;
    /// column `j` is the image of generator `j`.
    pub a2_star: IntMatrix,
    /// Nineteen tile-value vectors, indexed kites first, then left and
    /// right rectangles.
    pub generators: Vec<IntVector>,
    /// Generators of the image of the degree-two map, in the coordinates of
    /// `a2_star`; the last one has order 2.
    pub image_generators: Vec<IntVector>,
    pub b: IntMatrix,
    pub m: IntMatrix,
    pub eigenpairs: Vec<(BigInt, IntVector)>,
    pub expected: Expected,
}

fn digest(data: &str) -> String {
    hex::encode(Sha256::digest(data.as_bytes()))
}

fn recorded(file: &str) -> Option<&'static str> {
    SUMS.lines().find_map(|l| {
        let (sum, name) = l.split_once(char::is_whitespace)?;
        (name.trim() == file).then_some(sum)
    })
}

fn rows(file: &str, data: &str) -> Result<Vec<Vec<BigInt>>, FixtureError> {
    let mut r = csv::ReaderBuilder::new().has_headers(false).from_reader(data.as_bytes());
    let mut out = Vec::new();
    for (i, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| FixtureError::Malformed {
            file: file.into(),
            message: e.to_string(),
        })?;
        let row = rec
            .iter()
            .map(|x| x.trim().parse::<BigInt>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| FixtureError::Malformed {
                file: file.into(),
                message: format!("row {}: {e}", i + 1),
            })?;
        out.push(row);
    }
    Ok(out)
}

fn matrix(file: &str, data: &str, n: usize) -> Result<IntMatrix, FixtureError> {
    let r = rows(file, data)?;
    if r.len() != n || r.iter().any(|row| row.len() != n) {
        return Err(FixtureError::Malformed {
            file: file.into(),
            message: format!("expected a {n}x{n} matrix"),
        });
    }
    IntMatrix::from_rows(&r).map_err(|e| FixtureError::Malformed {
        file: file.into(),
        message: e.to_string(),
    })
}

/// Verifies every checksum, then parses.
pub fn load_fixtures() -> Result<Fixtures, FixtureError> {
    for (name, data) in FILES {
        let expected = recorded(name).ok_or_else(|| FixtureError::MissingChecksum((*name).into()))?;
        let found = digest(data);
        if found != expected {
            return Err(FixtureError::Checksum {
                file: (*name).into(),
                expected: expected.into(),
                found,
            });
        }
    }
    let get = |n: &str| FILES.iter().find(|(f, _)| *f == n).expect("listed fixture").1;
    let generators = rows("tile_value_generators.csv", get("tile_value_generators.csv"))?;
    if generators.len() != 19 || generators.iter().any(|g| g.len() != 83) {
        return Err(FixtureError::Malformed {
            file: "tile_value_generators.csv".into(),
            message: "expected 19 vectors of 83 entries".into(),
        });
    }
    let image_generators = rows("image_generators.csv", get("image_generators.csv"))?;
    let eigenpairs = rows("eigenpairs.csv", get("eigenpairs.csv"))?
        .into_iter()
        .map(|mut r| {
            let l = r.remove(0);
            (l, r)
        })
        .collect();
    let expected: Expected = serde_json::from_str(get("expected.json")).map_err(|e| FixtureError::Malformed {
        file: "expected.json".into(),
        message: e.to_string(),
    })?;
    Ok(Fixtures {
        a2_star: matrix("a2_star.csv", get("a2_star.csv"), 19)?,
        generators,
        image_generators,
        b: matrix("b.csv", get("b.csv"), 9)?,
        m: matrix("m.csv", get("m.csv"), 5)?,
        eigenpairs,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn documented_entries() {
        let f = load_fixtures().unwrap();
        assert_eq!(f.a2_star.get(0, 0), &BigInt::from(25));
        assert_eq!(f.m.get(3, 0), &BigInt::from(15300));
        assert!(f.generators[0].iter().all(|x| *x == BigInt::from(1)));
        assert_eq!(f.image_generators.len(), 9);
        assert_eq!(f.eigenpairs.len(), 3);
        assert_eq!(f.expected.census.total, 83);
    }

    #[test]
    fn tampering_is_detected() {
        assert_ne!(digest("25,0"), digest("25,1"));
        assert!(recorded("a2_star.csv").is_some());
        assert!(recorded("nonexistent.csv").is_none());
    }
}
