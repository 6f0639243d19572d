use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::IntegerMatrix;

/// Coefficients `[d_0, d_1, ..., d_t]` of `det(X*I - A) = sum d_s X^(t-s)`.
///
/// Always monic: `d_0 = 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CharPolyCoeffs {
    d: Vec<BigInt>,
}

impl CharPolyCoeffs {
    /// Wraps a coefficient vector; `d[0]` must be 1.
    pub fn new(d: Vec<BigInt>) -> Option<Self> {
        (d.first().is_some_and(One::is_one)).then_some(CharPolyCoeffs { d })
    }

    pub fn degree(&self) -> usize {
        self.d.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.d
    }

    /// `d_s`, or zero beyond the degree.
    pub fn coeff(&self, s: usize) -> BigInt {
        self.d.get(s).cloned().unwrap_or_else(BigInt::zero)
    }

    /// Extends with zero coefficients up to degree `t`, i.e. multiplies by `X^(t - deg)`.
    pub fn padded_to(&self, t: usize) -> CharPolyCoeffs {
        let mut d = self.d.clone();
        if d.len() < t + 1 {
            d.resize(t + 1, BigInt::zero());
        }
        CharPolyCoeffs { d }
    }
}

/// Characteristic polynomial by Berkowitz's division-free recursion.
///
/// Each step borders the leading `r x r` block `M` with column `C`, row `R`
/// and corner `a`, and multiplies the running polynomial by the lower
/// triangular Toeplitz matrix with first column `(1, -a, -RC, -RMC, ..., -RM^(r-1)C)`.
pub fn char_poly(a: &IntegerMatrix) -> CharPolyCoeffs {
    let t = a.dim();
    let mut poly: Vec<BigInt> = vec![BigInt::one()];
    for r in 0..t {
        let mut toeplitz = Vec::with_capacity(r + 2);
        toeplitz.push(BigInt::one());
        toeplitz.push(-a.get(r, r));
        let row = &a.row(r)[..r];
        let mut v: Vec<BigInt> = (0..r).map(|i| a.get(i, r).clone()).collect();
        for step in 0..r {
            let mut dot = BigInt::zero();
            for (x, y) in row.iter().zip(&v) {
                if !x.is_zero() && !y.is_zero() {
                    dot += x * y;
                }
            }
            toeplitz.push(-dot);
            if step + 1 < r {
                v = (0..r)
                    .map(|i| {
                        let mut acc = BigInt::zero();
                        for (x, y) in a.row(i)[..r].iter().zip(&v) {
                            if !x.is_zero() && !y.is_zero() {
                                acc += x * y;
                            }
                        }
                        acc
                    })
                    .collect();
            }
        }
        let mut next = vec![BigInt::zero(); r + 2];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, c) in poly.iter().enumerate().take(i + 1) {
                let tc = &toeplitz[i - j];
                if !tc.is_zero() && !c.is_zero() {
                    *slot += tc * c;
                }
            }
        }
        poly = next;
    }
    CharPolyCoeffs { d: poly }
}
