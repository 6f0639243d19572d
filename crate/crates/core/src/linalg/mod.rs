//! Exact integer matrices, characteristic polynomials and p-local Smith forms.

mod charpoly;
mod shape;
mod snf;

pub use charpoly::{char_poly, CharPolyCoeffs};
pub use shape::{quotient_shape, QuotientShape};
pub use snf::snf_p_exponents;
pub(crate) use snf::{grid_exponents, p_local_diagonalize, Grid};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A square `t x t` matrix of arbitrary-precision integers, `t >= 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntegerMatrix {
    t: usize,
    entries: Vec<BigInt>,
}

impl IntegerMatrix {
    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Result<Self> {
        let t = rows.len();
        if t == 0 || rows.iter().any(|r| r.len() != t) {
            return Err(Error::NotSquare {
                rows: t,
                widths: rows.iter().map(Vec::len).collect(),
            });
        }
        Ok(IntegerMatrix {
            t,
            entries: rows.into_iter().flatten().collect(),
        })
    }

    pub fn from_i64_rows<R: AsRef<[i64]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    /// Builds a `t x t` matrix from an entry function.
    ///
    /// # Panics
    /// If `t == 0`.
    pub fn from_fn(t: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        assert!(t >= 1, "matrix dimension must be positive");
        let mut entries = Vec::with_capacity(t * t);
        for i in 0..t {
            for j in 0..t {
                entries.push(f(i, j));
            }
        }
        IntegerMatrix { t, entries }
    }

    pub fn zero(t: usize) -> Self {
        Self::from_fn(t, |_, _| BigInt::zero())
    }

    pub fn identity(t: usize) -> Self {
        Self::from_fn(t, |i, j| if i == j { BigInt::one() } else { BigInt::zero() })
    }

    pub fn diagonal(diag: Vec<BigInt>) -> Self {
        let t = diag.len();
        Self::from_fn(t, |i, j| if i == j { diag[i].clone() } else { BigInt::zero() })
    }

    pub fn dim(&self) -> usize {
        self.t
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.entries[i * self.t + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigInt) {
        self.entries[i * self.t + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.entries[i * self.t..(i + 1) * self.t]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[BigInt]> {
        self.entries.chunks(self.t)
    }

    pub fn mul(&self, rhs: &IntegerMatrix) -> IntegerMatrix {
        assert_eq!(self.t, rhs.t, "dimension mismatch");
        let t = self.t;
        let mut out = vec![BigInt::zero(); t * t];
        for i in 0..t {
            for k in 0..t {
                let a = &self.entries[i * t + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..t {
                    out[i * t + j] += a * &rhs.entries[k * t + j];
                }
            }
        }
        IntegerMatrix { t, entries: out }
    }

    pub fn transpose(&self) -> IntegerMatrix {
        Self::from_fn(self.t, |i, j| self.get(j, i).clone())
    }

    /// The leading `k x k` principal submatrix.
    pub fn leading(&self, k: usize) -> IntegerMatrix {
        assert!(k >= 1 && k <= self.t);
        Self::from_fn(k, |i, j| self.get(i, j).clone())
    }

    pub(crate) fn to_grid(&self) -> Grid {
        Grid::new(self.t, self.t, self.entries.clone())
    }

    pub fn to_document(&self) -> MatrixDocument {
        MatrixDocument {
            t: self.t,
            entries: self
                .rows()
                .map(|r| r.iter().map(BigInt::to_string).collect())
                .collect(),
        }
    }

    pub fn from_document(doc: &MatrixDocument) -> Result<Self> {
        if doc.entries.len() != doc.t {
            return Err(Error::Parse(format!(
                "declared t = {} but found {} rows",
                doc.t,
                doc.entries.len()
            )));
        }
        let rows = doc
            .entries
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| {
                        s.trim()
                            .parse::<BigInt>()
                            .map_err(|_| Error::Parse(format!("bad integer {s:?}")))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    /// Pretty JSON matrix file.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_document()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_document(&serde_json::from_str(text)?)
    }
}

impl fmt::Debug for IntegerMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list()
            .entries(self.rows().map(|r| r.iter().map(ToString::to_string).collect::<Vec<_>>()))
            .finish()
    }
}

/// On-disk matrix format: `{"t": 3, "entries": [["1", "0", "0"], ...]}`.
///
/// Entries are decimal strings so magnitudes survive any JSON reader.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixDocument {
    pub t: usize,
    pub entries: Vec<Vec<String>>,
}
