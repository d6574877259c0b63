//! Serde adapters writing rationals as strings (`"3"`, `"-1/2"`).

use serde::{Deserialize, Deserializer, Serializer};

use crate::scalar::{self, Scalar};

fn parse<E: serde::de::Error>(s: &str) -> Result<Scalar, E> {
    scalar::parse(s).ok_or_else(|| E::custom(format!("malformed rational literal `{s}`")))
}

pub mod vec_scalar {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|x| x.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter().map(|s| parse::<D::Error>(s)).collect()
    }
}

pub mod vec_vec_scalar {
    use super::*;

    pub fn serialize<S: Serializer>(v: &[Vec<Scalar>], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Scalar>>, D::Error> {
        let raw = Vec::<Vec<String>>::deserialize(d)?;
        raw.iter().map(|row| row.iter().map(|s| parse::<D::Error>(s)).collect::<Result<Vec<_>, _>>()).collect()
    }
}
