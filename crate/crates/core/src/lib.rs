//! Exact q-series, level-one quasimodular forms, and MacMahon-type
//! partition functions that detect primes.
//!
//! The crate is organized bottom-up:
//!
//! * [`series`]: truncated power series over `Q` and the operator `D = q d/dq`
//! * [`number_theory`]: divisor sums, Bernoulli numbers, primality
//! * [`linalg`]: exact solves, ranks and nullspaces over `Q`
//! * [`quasimodular`]: the ring `Q[G2, G4, G6]`, recognition, cusp forms,
//!   and the Eisenstein/cusp decomposition
//! * [`omega`]: the forms `H_k` and the prime-detecting membership checker
//! * [`macmahon`]: MacMahon and MacMahonesque partition functions and a
//!   search for new prime-detecting combinations

pub mod error;
pub mod linalg;
pub mod macmahon;
pub mod number_theory;
pub mod omega;
pub mod quasimodular;
pub mod series;

pub use error::{Error, Result};
pub use macmahon::{MMExpression, PartVector};
pub use omega::{HFormId, OmegaInput, OmegaVerdict, Status};
pub use quasimodular::{Decomposition, Monomial, QMPoly};
pub use series::{QSeries, Rational};

/// Serde adapters that write rationals as canonical `"p/q"` strings.
pub(crate) mod serde_rational {
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::series::{format_rational, parse_rational, Rational};

    pub fn serialize<S: Serializer>(v: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(v))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let text = String::deserialize(d)?;
        parse_rational(&text).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&format_rational(x))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter().map(|t| parse_rational(t).map_err(serde::de::Error::custom)).collect()
        }
    }
}

/// Serde adapter for big integer lists as decimal strings.
pub(crate) mod serde_bigint {
    pub mod vec {
        use num_bigint::BigInt;
        use serde::ser::SerializeSeq;
        use serde::{Deserialize, Deserializer, Serializer};
        use std::str::FromStr;

        pub fn serialize<S: Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<BigInt>, D::Error> {
            let raw = Vec::<String>::deserialize(d)?;
            raw.iter().map(|t| BigInt::from_str(t).map_err(serde::de::Error::custom)).collect()
        }
    }
}
