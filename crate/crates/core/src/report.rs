//! JSON shapes shared by the library and the command-line front end.

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::census::CensusReport;
use crate::tsystems::TSystemReport;
use crate::ucover::UCoverRecord;

pub const SCHEMA_VERSION: u32 = 1;

/// Serde adapter writing big integers as decimal strings.
pub mod decimal {
    use num_bigint::BigUint;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &BigUint, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&value.to_str_radix(10))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigUint, D::Error> {
        let text = String::deserialize(d)?;
        BigUint::parse_bytes(text.as_bytes(), 10)
            .ok_or_else(|| D::Error::custom(format!("not a decimal integer: {text}")))
    }
}

/// Optional variant of [`decimal`].
pub mod decimal_opt {
    use num_bigint::BigUint;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(value: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match value {
            Some(v) => s.serialize_some(&v.to_str_radix(10)),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        let text: Option<String> = Option::deserialize(d)?;
        text.map(|t| {
            BigUint::parse_bytes(t.as_bytes(), 10)
                .ok_or_else(|| serde::de::Error::custom(format!("not a decimal integer: {t}")))
        })
        .transpose()
    }
}

/// Writes an exact rational as `"p/q"`, or `"p"` when integral.
pub fn rational<S: serde::Serializer>(
    value: &num_rational::BigRational,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.serialize_str(&value.to_string())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSummary {
    pub descriptor: String,
    pub degree: usize,
    #[serde(with = "decimal")]
    pub order: BigUint,
}

/// Top-level document emitted by `dessins census` and friends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Document {
    pub schema_version: u32,
    pub group: GroupSummary,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub census: Option<CensusReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t_systems: Option<TSystemReport>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub universal_cover: Option<UCoverRecord>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub universal_cover_orbits: Option<Vec<UCoverRecord>>,
}

impl Document {
    pub fn new(group: GroupSummary) -> Self {
        Document {
            schema_version: SCHEMA_VERSION,
            group,
            census: None,
            t_systems: None,
            universal_cover: None,
            universal_cover_orbits: None,
        }
    }
}
