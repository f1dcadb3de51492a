//! JSON helpers: big integers are written as JSON numbers when they fit in
//! an i64 and as decimal strings otherwise; both forms are accepted on input.

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeSeq, Serializer};
use serde_json::Value;

use crate::error::{Error, Result};

pub fn big_json(x: &BigInt) -> Value {
    match x.to_i64() {
        Some(v) => Value::from(v),
        None => Value::from(x.to_string()),
    }
}

pub fn big_vec_json(v: &[BigInt]) -> Value {
    Value::Array(v.iter().map(big_json).collect())
}

pub fn json_big(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => s
            .parse()
            .map_err(|_| Error::Parse(format!("not an integer: {s}"))),
        other => Err(Error::Parse(format!("expected integer, got {other}"))),
    }
}

pub fn json_big_vec(v: &Value) -> Result<Vec<BigInt>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("expected integer array, got {v}")))?
        .iter()
        .map(json_big)
        .collect()
}

pub fn json_big_matrix(v: &Value) -> Result<Vec<Vec<BigInt>>> {
    v.as_array()
        .ok_or_else(|| Error::Parse(format!("expected matrix, got {v}")))?
        .iter()
        .map(json_big_vec)
        .collect()
}

pub fn serialize_big_vec<S: Serializer>(v: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for x in v {
        match x.to_i64() {
            Some(i) => seq.serialize_element(&i)?,
            None => seq.serialize_element(&x.to_string())?,
        }
    }
    seq.end()
}

pub fn deserialize_big_vec<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<BigInt>, D::Error> {
    struct V;
    impl<'de> Visitor<'de> for V {
        type Value = Vec<BigInt>;
        fn expecting(&self, f: &mut std::fmt::Formatter) -> std::fmt::Result {
            f.write_str("an array of integers")
        }
        fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> std::result::Result<Self::Value, A::Error> {
            let mut out = Vec::new();
            while let Some(v) = seq.next_element::<Value>()? {
                out.push(json_big(&v).map_err(de::Error::custom)?);
            }
            Ok(out)
        }
    }
    d.deserialize_seq(V)
}

/// Serialize with object keys sorted at every level, so repeated runs are
/// byte-identical.
pub fn to_sorted_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(&sort_keys(v)).expect("json serialization");
    s.push('\n');
    s
}

pub fn sort_keys(v: &Value) -> Value {
    match v {
        Value::Object(m) => {
            let mut keys: Vec<&String> = m.keys().collect();
            keys.sort();
            let mut out = serde_json::Map::new();
            for k in keys {
                out.insert(k.clone(), sort_keys(&m[k]));
            }
            Value::Object(out)
        }
        Value::Array(a) => Value::Array(a.iter().map(sort_keys).collect()),
        other => other.clone(),
    }
}
