//! The persisted record schema for range scans.

use num_bigint::BigUint;
use serde::{de, Deserialize, Deserializer, Serialize, Serializer};
use std::fmt;
use std::str::FromStr;

use crate::binomial::{Basis, CaseKind, Valuation};
use crate::trinomial::TrinomialCase;

/// Case label as persisted: binomial cases `"1" | "2" | "3"`, trinomial
/// cases `"t1" | "t2"`, and `"uncovered"` for trinomial patterns outside
/// the covered two.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseTag {
    Binomial1,
    Binomial2,
    Binomial3,
    Trinomial1,
    Trinomial2,
    Uncovered,
}

impl CaseTag {
    pub fn as_str(&self) -> &'static str {
        match self {
            CaseTag::Binomial1 => "1",
            CaseTag::Binomial2 => "2",
            CaseTag::Binomial3 => "3",
            CaseTag::Trinomial1 => "t1",
            CaseTag::Trinomial2 => "t2",
            CaseTag::Uncovered => "uncovered",
        }
    }
}

impl From<CaseKind> for CaseTag {
    fn from(kind: CaseKind) -> Self {
        match kind {
            CaseKind::Case1 { .. } => CaseTag::Binomial1,
            CaseKind::Case2 => CaseTag::Binomial2,
            CaseKind::Case3 => CaseTag::Binomial3,
        }
    }
}

impl From<&TrinomialCase> for CaseTag {
    fn from(case: &TrinomialCase) -> Self {
        match case {
            TrinomialCase::Case1 => CaseTag::Trinomial1,
            TrinomialCase::Case2 => CaseTag::Trinomial2,
            TrinomialCase::Uncovered { .. } => CaseTag::Uncovered,
        }
    }
}

impl fmt::Display for CaseTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CaseTag {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Ok(match s {
            "1" => CaseTag::Binomial1,
            "2" => CaseTag::Binomial2,
            "3" => CaseTag::Binomial3,
            "t1" => CaseTag::Trinomial1,
            "t2" => CaseTag::Trinomial2,
            "uncovered" => CaseTag::Uncovered,
            other => return Err(format!("unknown case tag {other:?}")),
        })
    }
}

impl Serialize for CaseTag {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

impl<'de> Deserialize<'de> for CaseTag {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(de::Error::custom)
    }
}

/// Big integers travel as decimal strings so that readers in any language
/// parse them exactly.
mod big_dec {
    use super::*;

    pub fn serialize<S: Serializer>(
        x: &BigUint,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(x)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BigUint, D::Error> {
        let s = String::deserialize(d)?;
        s.parse()
            .map_err(|e| de::Error::custom(format!("bad decimal integer {s:?}: {e}")))
    }
}

mod big_dec_opt {
    use super::*;

    pub fn serialize<S: Serializer>(
        x: &Option<BigUint>,
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        match x {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Option<BigUint>, D::Error> {
        let s = Option::<String>::deserialize(d)?;
        s.map(|s| {
            s.parse()
                .map_err(|e| de::Error::custom(format!("bad decimal integer {s:?}: {e}")))
        })
        .transpose()
    }
}

/// One scanned instance. Field order here is the key order of the JSONL
/// encoding and the column order of the CSV encoding.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScanRecord {
    /// Raw (unreduced) first summand.
    #[serde(with = "big_dec")]
    pub a: BigUint,
    /// Raw second summand.
    #[serde(with = "big_dec")]
    pub b: BigUint,
    /// Raw third summand; absent for binomial records.
    #[serde(with = "big_dec_opt", default, skip_serializing_if = "Option::is_none")]
    pub c: Option<BigUint>,
    pub n: u32,
    pub case: CaseTag,
    pub valuation: Valuation,
    pub predicted_bound: u32,
    pub basis: Basis,
    pub anomaly: bool,
    pub exceptional: bool,
    /// Common factor removed before analysis (1 if the input was already
    /// reduced).
    #[serde(with = "big_dec")]
    pub extracted_gcd: BigUint,
}
