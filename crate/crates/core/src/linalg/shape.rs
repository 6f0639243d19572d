use serde::{Deserialize, Serialize};

use super::{snf_p_exponents, IntegerMatrix};
use crate::error::{Error, Result};
use crate::valuation::{Prime, Valuation};

/// Exponents `a_1 >= a_2 >= ... >= a_t >= 0` with `a_1 <= n`, describing
/// `L/K = (+) O/p^(a_i) O` for a sublattice `K` of a rank-`t` lattice `L`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "ShapeRepr", into = "ShapeRepr")]
pub struct QuotientShape {
    n: u64,
    a: Vec<u64>,
}

#[derive(Serialize, Deserialize)]
struct ShapeRepr {
    n: u64,
    a: Vec<u64>,
}

impl TryFrom<ShapeRepr> for QuotientShape {
    type Error = Error;
    fn try_from(r: ShapeRepr) -> Result<Self> {
        QuotientShape::new(r.n, r.a)
    }
}

impl From<QuotientShape> for ShapeRepr {
    fn from(s: QuotientShape) -> Self {
        ShapeRepr { n: s.n, a: s.a }
    }
}

impl QuotientShape {
    pub fn new(n: u64, a: Vec<u64>) -> Result<Self> {
        if a.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidShape(format!("exponents {a:?} are not weakly decreasing")));
        }
        if let Some(&first) = a.first() {
            if first > n {
                return Err(Error::InvalidShape(format!("exponent {first} exceeds depth n = {n}")));
            }
        }
        Ok(QuotientShape { n, a })
    }

    /// Sorts the exponents first.
    pub fn from_unsorted(n: u64, mut a: Vec<u64>) -> Result<Self> {
        a.sort_unstable_by(|x, y| y.cmp(x));
        Self::new(n, a)
    }

    pub fn depth(&self) -> u64 {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.a.len()
    }

    pub fn exponents(&self) -> &[u64] {
        &self.a
    }

    /// `b_i = n - a_i`, weakly increasing.
    pub fn complements(&self) -> Vec<u64> {
        self.a.iter().map(|&a| self.n - a).collect()
    }

    /// `M`: the least integer with `2M >= n`.
    pub fn half_depth(&self) -> u64 {
        self.n.div_ceil(2)
    }

    /// `log_p |L/K|`.
    pub fn length(&self) -> u64 {
        self.a.iter().sum()
    }
}

/// Shape of `L/K` where the columns of `k_in_l` span `K` inside `L = Z^t`.
pub fn quotient_shape(k_in_l: &IntegerMatrix, p: Prime, n: u64) -> Result<QuotientShape> {
    let exps = snf_p_exponents(k_in_l, p);
    let a = exps
        .iter()
        .map(|e| match *e {
            Valuation::Finite(v) if v <= n => Ok(v),
            other => Err(Error::ExponentExceedsDepth {
                exponent: other.to_string(),
                depth: n,
            }),
        })
        .collect::<Result<Vec<_>>>()?;
    QuotientShape::new(n, a)
}
