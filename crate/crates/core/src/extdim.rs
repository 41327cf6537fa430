//! Extended-cardinal dimension arithmetic over {0, 1, 2, …} ∪ {ℵ₀}, and
//! the case analysis for matching quotient codimensions of left-invertible
//! embeddings.
//!
//! This is the one place where the *choice* of embedding matters: a
//! left-invertible map from a k-dimensional space into an m-dimensional
//! space leaves a quotient of codimension m − k when m is finite, but when
//! k = m = ℵ₀ every codimension in {0, 1, …, ℵ₀} is achievable by choosing
//! the embedding (shift-style maps realize each one). The decision
//! procedure picks a codimension achievable on both sides and labels the
//! case split that applies.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A dimension on the separable scale: a finite count or ℵ₀.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ExtDim {
    Finite(u64),
    Aleph0,
}

impl ExtDim {
    pub fn is_finite(self) -> bool {
        matches!(self, ExtDim::Finite(_))
    }
}

impl Add for ExtDim {
    type Output = ExtDim;

    /// Cardinal addition: ℵ₀ absorbs every summand.
    fn add(self, rhs: ExtDim) -> ExtDim {
        match (self, rhs) {
            (ExtDim::Finite(a), ExtDim::Finite(b)) => ExtDim::Finite(a + b),
            _ => ExtDim::Aleph0,
        }
    }
}

impl PartialOrd for ExtDim {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtDim {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtDim::Finite(a), ExtDim::Finite(b)) => a.cmp(b),
            (ExtDim::Finite(_), ExtDim::Aleph0) => Ordering::Less,
            (ExtDim::Aleph0, ExtDim::Finite(_)) => Ordering::Greater,
            (ExtDim::Aleph0, ExtDim::Aleph0) => Ordering::Equal,
        }
    }
}

impl fmt::Display for ExtDim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtDim::Finite(n) => write!(f, "{n}"),
            ExtDim::Aleph0 => write!(f, "inf"),
        }
    }
}

impl FromStr for ExtDim {
    type Err = String;

    fn from_str(token: &str) -> Result<Self, String> {
        if token == "inf" {
            Ok(ExtDim::Aleph0)
        } else {
            token
                .parse::<u64>()
                .map(ExtDim::Finite)
                .map_err(|_| format!("expected a nonnegative integer or \"inf\", got {token:?}"))
        }
    }
}

impl Serialize for ExtDim {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtDim::Finite(n) => serializer.serialize_u64(*n),
            ExtDim::Aleph0 => serializer.serialize_str("inf"),
        }
    }
}

impl<'de> Deserialize<'de> for ExtDim {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Token {
            Number(u64),
            Text(String),
        }
        match Token::deserialize(deserializer)? {
            Token::Number(n) => Ok(ExtDim::Finite(n)),
            Token::Text(t) => t.parse().map_err(D::Error::custom),
        }
    }
}

/// Symbolic description of a set of achievable codimensions. Never
/// materialized: either a single value or the whole scale {0, 1, …, ℵ₀}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodimSet {
    Singleton(ExtDim),
    Everything,
}

impl CodimSet {
    pub fn contains(&self, q: ExtDim) -> bool {
        match self {
            CodimSet::Singleton(v) => *v == q,
            CodimSet::Everything => true,
        }
    }
}

/// Case labels of the quotient-matching analysis. The Roman numeral picks
/// the comparison pattern of (k, m, l); the subcase records whether the
/// governing space is infinite (.1) or finite (.2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "I.1")]
    I1,
    #[serde(rename = "I.2")]
    I2,
    #[serde(rename = "II.1")]
    II1,
    #[serde(rename = "II.2")]
    II2,
    #[serde(rename = "III.1")]
    III1,
    #[serde(rename = "III.2")]
    III2,
    #[serde(rename = "IV.1")]
    IV1,
    #[serde(rename = "IV.2")]
    IV2,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 8] = [
        CaseLabel::I1,
        CaseLabel::I2,
        CaseLabel::II1,
        CaseLabel::II2,
        CaseLabel::III1,
        CaseLabel::III2,
        CaseLabel::IV1,
        CaseLabel::IV2,
    ];
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            CaseLabel::I1 => "I.1",
            CaseLabel::I2 => "I.2",
            CaseLabel::II1 => "II.1",
            CaseLabel::II2 => "II.2",
            CaseLabel::III1 => "III.1",
            CaseLabel::III2 => "III.2",
            CaseLabel::IV1 => "IV.1",
            CaseLabel::IV2 => "IV.2",
        };
        write!(f, "{text}")
    }
}

/// Which standing hypothesis (or the sum condition) failed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Violation {
    KExceedsM,
    NExceedsL,
    SumMismatch,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::KExceedsM => write!(f, "k > m"),
            Violation::NExceedsL => write!(f, "n > l"),
            Violation::SumMismatch => write!(f, "k + l != m + n"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExtDimError {
    #[error("not embeddable: source dimension {k} exceeds target dimension {m}")]
    NotEmbeddable { k: ExtDim, m: ExtDim },
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(Violation),
}

/// A matching codimension together with the case label that produced it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuotientWitness {
    pub witness_codim: ExtDim,
    pub case_label: CaseLabel,
}

/// The set of codimensions dim(target / image) realizable by
/// left-invertible maps from a k-dimensional into an m-dimensional space.
///
/// Forced to {m − k} when m is finite, forced to {ℵ₀} when only the target
/// is infinite, and the whole scale when k = m = ℵ₀.
pub fn achievable_codims(k: ExtDim, m: ExtDim) -> Result<CodimSet, ExtDimError> {
    if k > m {
        return Err(ExtDimError::NotEmbeddable { k, m });
    }
    Ok(match (k, m) {
        (ExtDim::Finite(kv), ExtDim::Finite(mv)) => CodimSet::Singleton(ExtDim::Finite(mv - kv)),
        (ExtDim::Finite(_), ExtDim::Aleph0) => CodimSet::Singleton(ExtDim::Aleph0),
        (ExtDim::Aleph0, ExtDim::Aleph0) => CodimSet::Everything,
        (ExtDim::Aleph0, ExtDim::Finite(_)) => unreachable!("k <= m was checked"),
    })
}

/// Decides whether the two quotients can be matched, given
/// k = dim N(B), m = codim R(A), n = codim R(B), l = dim N(C).
///
/// Under the standing hypotheses k ≤ m and n ≤ l, the sum condition
/// k + l = m + n guarantees a codimension achievable on both sides; the
/// returned witness is the minimum of the intersection (deterministic pick
/// when the intersection is the whole scale). Inputs violating a
/// hypothesis or the sum condition are refused: no witness is owed there.
pub fn decide_quotient_iso(
    k: ExtDim,
    m: ExtDim,
    n: ExtDim,
    l: ExtDim,
) -> Result<QuotientWitness, ExtDimError> {
    if k > m {
        return Err(ExtDimError::HypothesisViolated(Violation::KExceedsM));
    }
    if n > l {
        return Err(ExtDimError::HypothesisViolated(Violation::NExceedsL));
    }
    if k + l != m + n {
        return Err(ExtDimError::HypothesisViolated(Violation::SumMismatch));
    }
    let left = achievable_codims(k, m).expect("k <= m holds");
    let right = achievable_codims(n, l).expect("n <= l holds");
    let witness_codim = match (left, right) {
        (CodimSet::Everything, CodimSet::Everything) => ExtDim::Finite(0),
        (CodimSet::Everything, CodimSet::Singleton(x))
        | (CodimSet::Singleton(x), CodimSet::Everything) => x,
        (CodimSet::Singleton(a), CodimSet::Singleton(b)) => {
            assert_eq!(a, b, "singleton codimensions must agree under the sum condition");
            a
        }
    };
    let case_label = match (k < m, l <= m) {
        (true, true) => subcase(CaseLabel::I1, CaseLabel::I2, m),
        (true, false) => subcase(CaseLabel::II1, CaseLabel::II2, l),
        (false, true) => subcase(CaseLabel::III1, CaseLabel::III2, m),
        (false, false) => subcase(CaseLabel::IV1, CaseLabel::IV2, l),
    };
    Ok(QuotientWitness { witness_codim, case_label })
}

fn subcase(infinite: CaseLabel, finite: CaseLabel, governing: ExtDim) -> CaseLabel {
    if governing == ExtDim::Aleph0 {
        infinite
    } else {
        finite
    }
}
