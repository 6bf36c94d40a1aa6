//! The versioned JSON problem file.
//!
//! Rationals are accepted as integers, `"p/q"` strings or `[num, den]` pairs
//! and are always written back as strings. Rows of `alpha_k` are indexed by
//! `(wedge tuple, g index)` with wedge tuples strictly increasing and sorted
//! lexicographically, i.e. row `w * dim g + a`.

use std::collections::BTreeMap;
use std::fmt;

use dglp::linalg::{format_scalar, int, parse_scalar, Matrix, Scalar};
use serde::de::{self, SeqAccess, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub schema_version: u32,
    pub lie_algebra: LieAlgebraSpec,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub modules: BTreeMap<String, ModuleSpec>,
    /// Module carrying `alpha`; defaults to `V`, or the only module.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lp_module: Option<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub alpha: BTreeMap<usize, MatrixSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lie_pair: Option<LiePairSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lift: Option<LiftSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LieAlgebraSpec {
    pub dim: usize,
    pub basis: Vec<String>,
    /// `[i, j, k, num, den]` with `i < j`: `[x_i, x_j]` has `x_k`-coefficient `num/den`.
    pub structure_constants: Vec<StructureConstant>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureConstant {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModuleSpec {
    pub degrees: BTreeMap<i32, usize>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub names: BTreeMap<i32, Vec<String>>,
    /// One matrix per basis element of g, in each degree.
    pub actions: BTreeMap<i32, Vec<MatrixSpec>>,
    /// `d_q : V^q -> V^{q+1}` for every declared degree but the top one.
    #[serde(default)]
    pub differentials: BTreeMap<i32, MatrixSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiePairSpec {
    pub subalgebra_basis: Vec<usize>,
    /// Section `j : L/g -> L` as a `dim L x dim(L/g)` matrix; the pivot
    /// complement is used when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub splitting: Option<MatrixSpec>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftSpec {
    /// Ordinary LP module `G`, concentrated in degree 0.
    pub g_module: String,
    /// `X : G -> g`.
    pub x: MatrixSpec,
    pub resolution: String,
    /// Inclusion `G -> V^0` onto `ker d_0`.
    pub inclusion: MatrixSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarSpec(pub Scalar);

pub type MatrixSpec = Vec<Vec<ScalarSpec>>;

impl Serialize for ScalarSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_scalar(&self.0))
    }
}

impl<'de> Deserialize<'de> for ScalarSpec {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Int(i64),
            Str(String),
            Pair([i64; 2]),
        }
        let s = match Raw::deserialize(d).map_err(|_| {
            de::Error::custom("expected a rational: integer, \"p/q\" string or [num, den]")
        })? {
            Raw::Int(n) => int(n),
            Raw::Str(t) => {
                parse_scalar(&t).ok_or_else(|| de::Error::custom(format!("bad rational {t:?}")))?
            }
            Raw::Pair([n, den]) => {
                if den == 0 {
                    return Err(de::Error::custom("zero denominator"));
                }
                Scalar::new(n.into(), den.into())
            }
        };
        Ok(ScalarSpec(s))
    }
}

impl Serialize for StructureConstant {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let num = self
            .value
            .numer()
            .to_string()
            .parse::<i64>()
            .map_err(serde::ser::Error::custom)?;
        let den = self
            .value
            .denom()
            .to_string()
            .parse::<i64>()
            .map_err(serde::ser::Error::custom)?;
        (self.i, self.j, self.k, num, den).serialize(s)
    }
}

impl<'de> Deserialize<'de> for StructureConstant {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        struct V;
        impl<'de> Visitor<'de> for V {
            type Value = StructureConstant;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("[i, j, k, num, den] or [i, j, k, \"p/q\"]")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut idx = [0usize; 3];
                for (t, slot) in idx.iter_mut().enumerate() {
                    *slot = seq
                        .next_element()?
                        .ok_or_else(|| de::Error::invalid_length(t, &self))?;
                }
                let first: ScalarSpec = seq
                    .next_element()?
                    .ok_or_else(|| de::Error::invalid_length(3, &self))?;
                let value = match seq.next_element::<i64>()? {
                    Some(0) => return Err(de::Error::custom("zero denominator")),
                    Some(den) => first.0 / int(den),
                    None => first.0,
                };
                if seq.next_element::<de::IgnoredAny>()?.is_some() {
                    return Err(de::Error::invalid_length(6, &self));
                }
                Ok(StructureConstant {
                    i: idx[0],
                    j: idx[1],
                    k: idx[2],
                    value,
                })
            }
        }
        d.deserialize_seq(V)
    }
}

pub fn matrix_to_spec(m: &Matrix) -> MatrixSpec {
    (0..m.rows())
        .map(|i| m.row(i).iter().map(|x| ScalarSpec(x.clone())).collect())
        .collect()
}

/// Converts with an expected shape; `cols` is needed for matrices without rows.
pub fn spec_to_matrix(
    spec: &MatrixSpec,
    rows: usize,
    cols: usize,
    field: &str,
) -> Result<Matrix, String> {
    if spec.len() != rows || spec.iter().any(|r| r.len() != cols) {
        let got_cols = spec.first().map_or(0, Vec::len);
        return Err(format!(
            "{field}: expected a {rows}x{cols} matrix, got {}x{got_cols}",
            spec.len()
        ));
    }
    let mut m = Matrix::zeros(rows, cols);
    for (i, r) in spec.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            m[(i, j)] = x.0.clone();
        }
    }
    Ok(m)
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let f: ProblemFile = serde_json::from_str(text).map_err(|e| format!("parse error: {e}"))?;
        if f.schema_version != SCHEMA_VERSION {
            return Err(format!(
                "schema_version: unsupported version {}, expected {SCHEMA_VERSION}",
                f.schema_version
            ));
        }
        Ok(f)
    }

    /// Canonical pretty-printed JSON with a trailing newline.
    pub fn to_canonical(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("problem files serialize");
        s.push('\n');
        s
    }
}
