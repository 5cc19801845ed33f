//! Serde adapter that writes [`BigUint`] values as decimal strings, keeping
//! arbitrarily large counts exact in JSON.

use num_bigint::BigUint;
use serde::Serializer;

pub fn serialize<S: Serializer>(value: &BigUint, ser: S) -> Result<S::Ok, S::Error> {
    ser.serialize_str(&value.to_string())
}
