//! Serializable mirrors of the core types.
//!
//! Integers are written as JSON numbers of arbitrary size, so matrices and
//! group orders survive a round trip exactly.

use num_bigint::BigInt;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use tilehull_core::abgrp::FgAbGroup;
use tilehull_core::intlin::IntMatrix;
use tilehull_core::limit::{LimitGroup, LimitStatus, PresentedEndo};

/// An integer of any size, serialized as a plain JSON number.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Big(pub BigInt);

impl Serialize for Big {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let n: serde_json::Number = self.0.to_string().parse().map_err(serde::ser::Error::custom)?;
        n.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Big {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let n = serde_json::Number::deserialize(d)?;
        n.to_string()
            .parse::<BigInt>()
            .map(Big)
            .map_err(|_| serde::de::Error::custom(format!("expected an integer, found {n}")))
    }
}

impl From<&BigInt> for Big {
    fn from(b: &BigInt) -> Self {
        Big(b.clone())
    }
}

impl From<i64> for Big {
    fn from(b: i64) -> Self {
        Big(BigInt::from(b))
    }
}

pub fn bigs(v: &[BigInt]) -> Vec<Big> {
    v.iter().map(Big::from).collect()
}

pub fn unbig(v: &[Big]) -> Vec<BigInt> {
    v.iter().map(|b| b.0.clone()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixDto(pub Vec<Vec<Big>>);

impl From<&IntMatrix> for MatrixDto {
    fn from(m: &IntMatrix) -> Self {
        MatrixDto(m.to_rows().iter().map(|r| bigs(r)).collect())
    }
}

impl MatrixDto {
    pub fn to_matrix(&self, cols_if_empty: usize) -> Result<IntMatrix, String> {
        if self.0.is_empty() {
            return Ok(IntMatrix::zeros(0, cols_if_empty));
        }
        let cols = self.0[0].len();
        let mut data = Vec::new();
        for (i, r) in self.0.iter().enumerate() {
            if r.len() != cols {
                return Err(format!("matrix row {i} has {} entries, expected {cols}", r.len()));
            }
            data.extend(unbig(r));
        }
        IntMatrix::from_vec(self.0.len(), cols, data).map_err(|e| e.to_string())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupDto {
    pub free_rank: usize,
    pub torsion: Vec<Big>,
}

impl From<&FgAbGroup> for GroupDto {
    fn from(g: &FgAbGroup) -> Self {
        GroupDto {
            free_rank: g.free_rank(),
            torsion: bigs(&g.torsion()),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalizedDto {
    pub base: Big,
    pub mult: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndoDto {
    pub free: usize,
    pub torsion: Vec<Big>,
    pub matrix: MatrixDto,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LimitGroupDto {
    pub localized: Vec<LocalizedDto>,
    pub free_rank: usize,
    pub torsion: Vec<Big>,
    /// `exact` or `symbolic`.
    pub status: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    /// For symbolic limits, the injective map whose limit is meant.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reduced: Option<EndoDto>,
    /// Human-readable form.
    #[serde(default)]
    pub display: String,
}

impl From<&LimitGroup> for LimitGroupDto {
    fn from(g: &LimitGroup) -> Self {
        let (status, reason, reduced) = match &g.status {
            LimitStatus::Exact => ("exact", None, None),
            LimitStatus::Symbolic { reduced, reason } => (
                "symbolic",
                Some(reason.clone()),
                Some(EndoDto {
                    free: reduced.free,
                    torsion: bigs(&reduced.torsion),
                    matrix: MatrixDto::from(&reduced.matrix),
                }),
            ),
        };
        LimitGroupDto {
            localized: g
                .localized
                .iter()
                .map(|(b, m)| LocalizedDto {
                    base: Big::from(b),
                    mult: *m,
                })
                .collect(),
            free_rank: g.free_rank,
            torsion: bigs(&g.torsion),
            status: status.into(),
            reason,
            reduced,
            display: g.to_string(),
        }
    }
}

impl LimitGroupDto {
    pub fn to_limit(&self) -> Result<LimitGroup, String> {
        let status = match self.status.as_str() {
            "exact" => LimitStatus::Exact,
            "symbolic" => {
                let r = self.reduced.as_ref().ok_or("symbolic limit without `reduced`")?;
                let n = r.free + r.torsion.len();
                let matrix = r.matrix.to_matrix(n)?;
                let reduced =
                    PresentedEndo::new(r.free, unbig(&r.torsion), matrix).map_err(|e| format!("reduced: {e}"))?;
                LimitStatus::Symbolic {
                    reduced,
                    reason: self.reason.clone().unwrap_or_default(),
                }
            }
            other => return Err(format!("status: unknown value {other:?}")),
        };
        Ok(LimitGroup {
            localized: self.localized.iter().map(|l| (l.base.0.clone(), l.mult)).collect(),
            free_rank: self.free_rank,
            torsion: unbig(&self.torsion),
            status,
        })
    }
}

impl PartialEq<LimitGroupDto> for LimitGroup {
    fn eq(&self, other: &LimitGroupDto) -> bool {
        other.to_limit().is_ok_and(|g| &g == self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn big_numbers_round_trip() {
        let b = Big("123456789012345678901234567890".parse().unwrap());
        let s = serde_json::to_string(&b).unwrap();
        assert_eq!(s, "123456789012345678901234567890");
        assert_eq!(serde_json::from_str::<Big>(&s).unwrap(), b);
        assert!(serde_json::from_str::<Big>("1.5").is_err());
    }

    #[test]
    fn limit_json_shape() {
        let g = LimitGroup::exact(&[(25, 1), (3, 2)], 5, &[2]);
        let v = serde_json::to_value(LimitGroupDto::from(&g)).unwrap();
        assert_eq!(v["localized"][0]["base"], 25);
        assert_eq!(v["localized"][1]["mult"], 2);
        assert_eq!(v["free_rank"], 5);
        assert_eq!(v["torsion"][0], 2);
        assert_eq!(v["status"], "exact");
        let back: LimitGroupDto = serde_json::from_value(v).unwrap();
        assert_eq!(back.to_limit().unwrap(), g);
    }
}
