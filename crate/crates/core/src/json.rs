//! JSON encodings shared repo-wide.
//!
//! A matrix is `{"rows": r, "cols": c, "entries": [[...], ...]}` with one
//! inner array per row. Entries are strings `"p/q"` (or `"p"`) or bare
//! integers. Parsing normalizes: `"2/4"` loads as one half and negative
//! denominators move the sign to the numerator. Serialization always emits
//! canonical-form strings, so emitted files re-parse to equal values and
//! repeat runs are byte-identical. Floating-point entries are rejected.
//!
//! A subspace is `{"ambient": d, "basis": <matrix>}` and is canonicalized
//! on load.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::matrix::Matrix;
use crate::subspace::Subspace;
use crate::{Mat, Rational, Space};

/// Parses a rational token: `"p/q"` or `"p"`, arbitrary precision, any
/// sign placement. Normalizes to canonical form.
pub fn parse_rational(token: &str) -> Result<Rational, String> {
    let token = token.trim();
    let (numer_text, denom_text) = match token.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (token, "1"),
    };
    let numer: BigInt = numer_text
        .parse()
        .map_err(|_| format!("invalid integer {numer_text:?} in rational {token:?}"))?;
    let denom: BigInt = denom_text
        .parse()
        .map_err(|_| format!("invalid integer {denom_text:?} in rational {token:?}"))?;
    if denom.is_zero() {
        return Err(format!("zero denominator in rational {token:?}"));
    }
    Ok(Rational::new(numer, denom))
}

/// Canonical token for a rational: `"p"` when the denominator is one,
/// `"p/q"` otherwise, sign on the numerator.
pub fn rational_token(value: &Rational) -> String {
    value.to_string()
}

struct EntryVisitor;

impl<'de> Visitor<'de> for EntryVisitor {
    type Value = Rational;

    fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "an integer or a rational string \"p/q\"")
    }

    fn visit_i64<E: de::Error>(self, v: i64) -> Result<Rational, E> {
        Ok(Rational::from_integer(v.into()))
    }

    fn visit_u64<E: de::Error>(self, v: u64) -> Result<Rational, E> {
        Ok(Rational::from_integer(v.into()))
    }

    fn visit_f64<E: de::Error>(self, v: f64) -> Result<Rational, E> {
        Err(E::custom(format!(
            "floating-point entry {v} rejected: encode rationals as \"p/q\" strings"
        )))
    }

    fn visit_str<E: de::Error>(self, v: &str) -> Result<Rational, E> {
        parse_rational(v).map_err(E::custom)
    }
}

/// Newtype so matrix rows deserialize through [`EntryVisitor`].
struct Entry(Rational);

impl<'de> Deserialize<'de> for Entry {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserializer.deserialize_any(EntryVisitor).map(Entry)
    }
}

impl Serialize for Mat {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw {
            rows: usize,
            cols: usize,
            entries: Vec<Vec<String>>,
        }
        let entries = (0..self.rows())
            .map(|r| (0..self.cols()).map(|c| rational_token(&self[(r, c)])).collect())
            .collect();
        Raw { rows: self.rows(), cols: self.cols(), entries }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Mat {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            rows: usize,
            cols: usize,
            entries: Vec<Vec<Entry>>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.entries.len() != raw.rows {
            return Err(de::Error::custom(format!(
                "entries has {} rows, header says {}",
                raw.entries.len(),
                raw.rows
            )));
        }
        let mut flat = Vec::with_capacity(raw.rows * raw.cols);
        for (r, row) in raw.entries.into_iter().enumerate() {
            if row.len() != raw.cols {
                return Err(de::Error::custom(format!(
                    "row {r} has {} entries, header says {}",
                    row.len(),
                    raw.cols
                )));
            }
            flat.extend(row.into_iter().map(|e| e.0));
        }
        Ok(Matrix::new(raw.rows, raw.cols, flat))
    }
}

impl Serialize for Space {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Raw<'a> {
            ambient: usize,
            basis: &'a Mat,
        }
        Raw { ambient: self.ambient_dim(), basis: self.basis() }.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Space {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            ambient: usize,
            basis: Mat,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.basis.rows() != raw.ambient {
            return Err(de::Error::custom(format!(
                "basis vectors live in dimension {}, ambient says {}",
                raw.basis.rows(),
                raw.ambient
            )));
        }
        Ok(Subspace::span(raw.ambient, &raw.basis))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat_json(m: &Mat) -> String {
        serde_json::to_string(m).unwrap()
    }

    #[test]
    fn rational_tokens_normalize() {
        assert_eq!(parse_rational("2/4").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("-3/-6").unwrap(), Rational::new(1.into(), 2.into()));
        assert_eq!(parse_rational("5").unwrap(), Rational::from_integer(5.into()));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert_eq!(rational_token(&Rational::new(6.into(), (-4).into())), "-3/2");
    }

    #[test]
    fn matrix_round_trip_is_canonical() {
        let text = r#"{"rows":2,"cols":2,"entries":[["2/4",1],["-3","0"]]}"#;
        let m: Mat = serde_json::from_str(text).unwrap();
        assert_eq!(m[(0, 0)], Rational::new(1.into(), 2.into()));
        let emitted = mat_json(&m);
        assert_eq!(
            emitted,
            r#"{"rows":2,"cols":2,"entries":[["1/2","1"],["-3","0"]]}"#
        );
        let again: Mat = serde_json::from_str(&emitted).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn matrix_rejects_floats_and_bad_shapes() {
        let float = r#"{"rows":1,"cols":1,"entries":[[0.5]]}"#;
        assert!(serde_json::from_str::<Mat>(float).is_err());
        let ragged = r#"{"rows":1,"cols":2,"entries":[["1"]]}"#;
        assert!(serde_json::from_str::<Mat>(ragged).is_err());
        let missing_row = r#"{"rows":2,"cols":1,"entries":[["1"]]}"#;
        assert!(serde_json::from_str::<Mat>(missing_row).is_err());
    }

    #[test]
    fn zero_dimension_matrices_round_trip() {
        let wide = Mat::zero(0, 3);
        let tall = Mat::zero(2, 0);
        for m in [wide, tall] {
            let text = mat_json(&m);
            let back: Mat = serde_json::from_str(&text).unwrap();
            assert_eq!(back, m);
        }
    }

    #[test]
    fn subspace_canonicalizes_on_load() {
        let text = r#"{"ambient":2,"basis":{"rows":2,"cols":2,"entries":[["1","2"],["1","2"]]}}"#;
        let s: Space = serde_json::from_str(text).unwrap();
        assert_eq!(s.dim(), 1);
        assert_eq!(s, Space::span(2, &Mat::from_ints(&[&[1], &[1]])));
        let emitted = serde_json::to_string(&s).unwrap();
        let back: Space = serde_json::from_str(&emitted).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn subspace_rejects_ambient_mismatch() {
        let text = r#"{"ambient":3,"basis":{"rows":2,"cols":1,"entries":[["1"],["0"]]}}"#;
        assert!(serde_json::from_str::<Space>(text).is_err());
    }
}
