//! JSON rendering with fixed 17-significant-digit numbers.

use std::collections::BTreeMap;

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

use crate::domain::Interval;

/// A float that serializes as a JSON number with 17 significant digits,
/// or `null` when non-finite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Num(pub f64);

impl Num {
    pub fn render(x: f64) -> String {
        format!("{x:.16e}")
    }
}

impl From<f64> for Num {
    fn from(x: f64) -> Self {
        Num(x)
    }
}

impl Serialize for Num {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(Self::render(self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

pub fn interval_pair(i: Interval) -> [Num; 2] {
    [Num(i.a()), Num(i.b())]
}

/// Named witness values, serialized with sorted keys.
pub type Witness = BTreeMap<&'static str, Num>;

pub fn witness<const N: usize>(items: [(&'static str, f64); N]) -> Witness {
    items.into_iter().map(|(k, v)| (k, Num(v))).collect()
}

/// Pretty JSON followed by a newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report types always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_have_seventeen_significant_digits() {
        assert_eq!(Num::render(0.25), "2.5000000000000000e-1");
        assert_eq!(Num::render(-3.0), "-3.0000000000000000e0");
        let x = 0.1 + 0.2;
        let back: f64 = Num::render(x).parse().unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn serializes_as_json_number() {
        #[derive(Serialize)]
        struct S {
            a: Num,
            b: Num,
        }
        let s = serde_json::to_string(&S { a: Num(1.5), b: Num(f64::NAN) }).unwrap();
        assert_eq!(s, r#"{"a":1.5000000000000000e0,"b":null}"#);
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["a"].as_f64(), Some(1.5));
    }
}
