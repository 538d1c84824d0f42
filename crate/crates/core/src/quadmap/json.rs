use serde::{Deserialize, Serialize};

use super::QuadraticMap;
use crate::gf2::BitVec;
use crate::poly::parse_column;
use crate::{Error, Result};

/// Wire form of a quadratic map. Either the value table (`Q`, `B`) or the
/// polynomial column (`q_polys`) may be given; when both are present they
/// must describe the same map. Indices in `B` are 1-based with `i < j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuadraticMapJson {
    pub m: usize,
    pub n: usize,
    #[serde(rename = "Q", default, skip_serializing_if = "Option::is_none")]
    pub q: Option<Vec<Vec<u8>>>,
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Vec<BilinearEntry>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub q_polys: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BilinearEntry {
    pub i: usize,
    pub j: usize,
    pub v: Vec<u8>,
}

fn bits_to_vec(bits: &[u8], n: usize, what: &str) -> Result<BitVec> {
    if bits.len() != n {
        return Err(Error::DimensionMismatch {
            what: what.into(),
            expected: n,
            found: bits.len(),
        });
    }
    if let Some(b) = bits.iter().find(|&&b| b > 1) {
        return Err(Error::InvalidMap(format!("{what}: entry {b} is not a bit")));
    }
    Ok(BitVec::from_bools(&bits.iter().map(|&b| b == 1).collect::<Vec<_>>()))
}

fn vec_to_bits(v: &BitVec) -> Vec<u8> {
    v.to_bools().into_iter().map(u8::from).collect()
}

impl QuadraticMapJson {
    pub fn into_map(self) -> Result<QuadraticMap> {
        let (m, n) = (self.m, self.n);
        let from_table = match self.q {
            Some(rows) => {
                if rows.len() != m {
                    return Err(Error::DimensionMismatch {
                        what: "rows of Q".into(),
                        expected: m,
                        found: rows.len(),
                    });
                }
                let q_vals = rows
                    .iter()
                    .map(|r| bits_to_vec(r, n, "Q(w_i)"))
                    .collect::<Result<Vec<_>>>()?;
                let mut pairs = Vec::new();
                for e in self.b.unwrap_or_default() {
                    if e.i == 0 || e.i >= e.j || e.j > m {
                        return Err(Error::InvalidMap(format!(
                            "B entry ({}, {}) must satisfy 1 <= i < j <= {m}",
                            e.i, e.j
                        )));
                    }
                    pairs.push(((e.i - 1, e.j - 1), bits_to_vec(&e.v, n, "B(w_i, w_j)")?));
                }
                Some(QuadraticMap::new(m, n, q_vals, pairs)?)
            }
            None if self.b.is_some() => {
                return Err(Error::InvalidMap("B given without Q".into()));
            }
            None => None,
        };
        let from_polys = match self.q_polys {
            Some(strs) => {
                if strs.len() != n {
                    return Err(Error::DimensionMismatch {
                        what: "entries of q_polys".into(),
                        expected: n,
                        found: strs.len(),
                    });
                }
                Some(QuadraticMap::from_polys(&parse_column(&strs, m)?, m)?)
            }
            None => None,
        };
        match (from_table, from_polys) {
            (Some(a), Some(b)) if a != b => Err(Error::InvalidMap(
                "Q/B table and q_polys describe different maps".into(),
            )),
            (Some(a), _) => Ok(a),
            (None, Some(b)) => Ok(b),
            (None, None) => Err(Error::InvalidMap("expected Q or q_polys".into())),
        }
    }

    /// Both forms, with only the nonzero `B` entries listed.
    pub fn from_map(q: &QuadraticMap) -> Self {
        let m = q.m();
        let mut b = Vec::new();
        for i in 0..m {
            for j in i + 1..m {
                if !q.b(i, j).is_zero() {
                    b.push(BilinearEntry {
                        i: i + 1,
                        j: j + 1,
                        v: vec_to_bits(q.b(i, j)),
                    });
                }
            }
        }
        Self {
            m,
            n: q.n(),
            q: Some((0..m).map(|i| vec_to_bits(q.q_basis(i))).collect()),
            b: Some(b),
            q_polys: Some(q.extension_class().to_strings()),
        }
    }
}

impl QuadraticMap {
    pub fn from_json(text: &str) -> Result<Self> {
        let raw: QuadraticMapJson =
            serde_json::from_str(text).map_err(|e| Error::InvalidMap(format!("malformed JSON: {e}")))?;
        raw.into_map()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&QuadraticMapJson::from_map(self)).expect("serializable")
    }
}
