//! Symmetric powers, their tensor products, and the `(p, x)^n` filtration.
//!
//! A degree-`k` homogeneous polynomial is stored densely as `c_0..c_k`, with
//! `c_i` the coefficient of `x^i y^(k-i)`. A tensor of `d` such factors is
//! stored row-major over multi-indices `(i_1, ..., i_d)`, last index fastest.
//!
//! A 2x2 matrix `[[a, b], [c, d]]` acts by substitution,
//! `f(x, y) -> det^w f(ax + cy, bx + dy)`. Reading `(x, y)` as a row vector
//! `v`, this is `f(v g)`, so `act(g1 g2, f) = act(g1, act(g2, f))`: a left
//! action.

use num_bigint::BigInt;
use num_integer::binomial;
use num_traits::{One, Pow, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::valuation::{divisible_by_power, vp, Prime};

/// `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Mat2 {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
    pub d: BigInt,
}

impl Mat2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        Mat2::from_i64(1, 0, 0, 1)
    }

    /// `[[p, u], [0, 1]]`
    pub fn hecke_representative(p: Prime, u: BigInt) -> Self {
        Mat2::new(p.to_bigint(), u, BigInt::zero(), BigInt::one())
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn mul(&self, o: &Mat2) -> Mat2 {
        Mat2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// `c = 0 mod p` and `d = 1 mod p`.
    pub fn in_semigroup_m(&self, p: Prime) -> bool {
        divisible_by_power(&self.c, p, 1) && divisible_by_power(&(&self.d - 1), p, 1)
    }

    /// `a = c = 0 mod p`, i.e. the first column vanishes mod `p`.
    pub fn first_column_divisible(&self, p: Prime) -> bool {
        divisible_by_power(&self.a, p, 1) && divisible_by_power(&self.c, p, 1)
    }
}

/// Coefficients of `(alpha x + beta y)^e`, indexed by the power of `x`.
fn linear_power(alpha: &BigInt, beta: &BigInt, e: usize) -> Vec<BigInt> {
    let mut ap = vec![BigInt::one(); e + 1];
    let mut bp = vec![BigInt::one(); e + 1];
    for j in 1..=e {
        ap[j] = &ap[j - 1] * alpha;
        bp[j] = &bp[j - 1] * beta;
    }
    (0..=e)
        .map(|j| binomial(BigInt::from(e), BigInt::from(j)) * &ap[j] * &bp[e - j])
        .collect()
}

fn convolve(u: &[BigInt], v: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); u.len() + v.len() - 1];
    for (i, x) in u.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in v.iter().enumerate() {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// `sub[r][s]`: coefficient of `x^r y^(k-r)` in the image of `x^s y^(k-s)`.
fn substitution_matrix(g: &Mat2, k: usize) -> Vec<Vec<BigInt>> {
    let cols: Vec<Vec<BigInt>> = (0..=k)
        .map(|s| convolve(&linear_power(&g.a, &g.c, s), &linear_power(&g.b, &g.d, k - s)))
        .collect();
    (0..=k).map(|r| cols.iter().map(|col| col[r].clone()).collect()).collect()
}

/// Homogeneous polynomial of degree `k` in `x, y`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    coeffs: Vec<BigInt>,
}

impl HomogPoly {
    /// `coeffs[i]` multiplies `x^i y^(k-i)`; the degree is `coeffs.len() - 1`.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::InvalidParameter("a polynomial needs at least one coefficient".into()));
        }
        Ok(HomogPoly { coeffs })
    }

    pub fn from_i64(coeffs: &[i64]) -> Result<Self> {
        HomogPoly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero(k: usize) -> Self {
        HomogPoly { coeffs: vec![BigInt::zero(); k + 1] }
    }

    /// `x^i y^(k-i)`
    pub fn monomial(k: usize, i: usize) -> Self {
        let mut f = HomogPoly::zero(k);
        f.coeffs[i] = BigInt::one();
        f
    }

    /// `alpha x + beta y`
    pub fn linear(alpha: BigInt, beta: BigInt) -> Self {
        HomogPoly { coeffs: vec![beta, alpha] }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn mul(&self, o: &HomogPoly) -> HomogPoly {
        HomogPoly { coeffs: convolve(&self.coeffs, &o.coeffs) }
    }

    pub fn pow(&self, e: u64) -> HomogPoly {
        let mut acc = HomogPoly::monomial(0, 0);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn sub(&self, o: &HomogPoly) -> Result<HomogPoly> {
        if self.degree() != o.degree() {
            return Err(Error::InvalidParameter(format!(
                "degree mismatch: {} vs {}",
                self.degree(),
                o.degree()
            )));
        }
        Ok(HomogPoly {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn scale(&self, s: &BigInt) -> HomogPoly {
        HomogPoly { coeffs: self.coeffs.iter().map(|c| c * s).collect() }
    }

    pub fn to_tensor(&self, det_twist: u64) -> TensorPolynomial {
        TensorPolynomial {
            degrees: vec![self.degree()],
            det_twist,
            coeffs: self.coeffs.clone(),
        }
    }
}

/// `det(g)^twist f(ax + cy, bx + dy)`.
pub fn act(g: &Mat2, f: &HomogPoly, twist: u64) -> HomogPoly {
    let t = tensor_act(g, &f.to_tensor(twist));
    HomogPoly { coeffs: t.coeffs }
}

/// Element of `S_{k_1} (x) ... (x) S_{k_d}`, twisted by `det^det_twist`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorPolynomial {
    degrees: Vec<usize>,
    det_twist: u64,
    coeffs: Vec<BigInt>,
}

/// File form: `{"degrees": [...], "det_twist": w, "coeffs": ["..", ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialDocument {
    pub degrees: Vec<usize>,
    pub det_twist: u64,
    pub coeffs: Vec<String>,
}

fn index_count(degrees: &[usize]) -> Result<usize> {
    degrees.iter().try_fold(1usize, |acc, &k| {
        acc.checked_mul(k + 1)
            .ok_or_else(|| Error::Overflow("tensor index space".into()))
    })
}

impl TensorPolynomial {
    pub fn new(degrees: Vec<usize>, det_twist: u64, coeffs: Vec<BigInt>) -> Result<Self> {
        if degrees.is_empty() {
            return Err(Error::InvalidParameter("a tensor needs at least one factor".into()));
        }
        let len = index_count(&degrees)?;
        if coeffs.len() != len {
            return Err(Error::InvalidParameter(format!(
                "expected {len} coefficients for degrees {degrees:?}, got {}",
                coeffs.len()
            )));
        }
        Ok(TensorPolynomial { degrees, det_twist, coeffs })
    }

    pub fn zero(degrees: Vec<usize>, det_twist: u64) -> Result<Self> {
        let len = index_count(&degrees)?;
        TensorPolynomial::new(degrees, det_twist, vec![BigInt::zero(); len])
    }

    /// `f_1 (x) ... (x) f_d`
    pub fn pure(factors: &[HomogPoly], det_twist: u64) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::InvalidParameter("a tensor needs at least one factor".into()));
        }
        let mut out = TensorPolynomial { degrees: vec![], det_twist, coeffs: vec![BigInt::one()] };
        for f in factors {
            let mut coeffs = Vec::with_capacity(out.coeffs.len() * f.coeffs.len());
            for c in &out.coeffs {
                coeffs.extend(f.coeffs.iter().map(|e| c * e));
            }
            out.coeffs = coeffs;
            out.degrees.push(f.degree());
        }
        Ok(out)
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn arity(&self) -> usize {
        self.degrees.len()
    }

    pub fn det_twist(&self) -> u64 {
        self.det_twist
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    /// Iterates `(multi_index, coefficient)` in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &BigInt)> + '_ {
        MultiIndices::new(&self.degrees).zip(self.coeffs.iter())
    }

    pub fn get(&self, index: &[usize]) -> Option<&BigInt> {
        if index.len() != self.degrees.len() || index.iter().zip(&self.degrees).any(|(i, k)| i > k) {
            return None;
        }
        let flat = index
            .iter()
            .zip(&self.degrees)
            .fold(0usize, |acc, (i, k)| acc * (k + 1) + i);
        self.coeffs.get(flat)
    }

    pub fn sub(&self, o: &TensorPolynomial) -> Result<TensorPolynomial> {
        if self.degrees != o.degrees || self.det_twist != o.det_twist {
            return Err(Error::InvalidParameter("tensor shapes differ".into()));
        }
        Ok(TensorPolynomial {
            degrees: self.degrees.clone(),
            det_twist: self.det_twist,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn to_document(&self) -> PolynomialDocument {
        PolynomialDocument {
            degrees: self.degrees.clone(),
            det_twist: self.det_twist,
            coeffs: self.coeffs.iter().map(ToString::to_string).collect(),
        }
    }

    pub fn from_document(doc: PolynomialDocument) -> Result<Self> {
        let coeffs = doc
            .coeffs
            .iter()
            .map(|s| {
                s.trim()
                    .parse::<BigInt>()
                    .map_err(|_| Error::Parse(format!("bad coefficient {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        TensorPolynomial::new(doc.degrees, doc.det_twist, coeffs)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_document()).expect("serializable") + "\n"
    }

    pub fn from_json(text: &str) -> Result<Self> {
        TensorPolynomial::from_document(serde_json::from_str(text)?)
    }
}

/// Row-major walk over `0..=k_1 x ... x 0..=k_d`.
struct MultiIndices {
    degrees: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl MultiIndices {
    fn new(degrees: &[usize]) -> Self {
        MultiIndices {
            degrees: degrees.to_vec(),
            next: Some(vec![0; degrees.len()]),
        }
    }
}

impl Iterator for MultiIndices {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut succ = cur.clone();
        for pos in (0..succ.len()).rev() {
            if succ[pos] < self.degrees[pos] {
                succ[pos] += 1;
                self.next = Some(succ);
                return Some(cur);
            }
            succ[pos] = 0;
        }
        Some(cur)
    }
}

/// `g` applied to every factor at once, times `det(g)^det_twist`.
pub fn tensor_act(g: &Mat2, f: &TensorPolynomial) -> TensorPolynomial {
    let mut data = f.coeffs.clone();
    for (axis, &k) in f.degrees.iter().enumerate() {
        let sub = substitution_matrix(g, k);
        let inner: usize = f.degrees[axis + 1..].iter().map(|k| k + 1).product();
        let outer = data.len() / ((k + 1) * inner);
        let mut next = vec![BigInt::zero(); data.len()];
        for o in 0..outer {
            for s in 0..=k {
                for i in 0..inner {
                    let v = &data[(o * (k + 1) + s) * inner + i];
                    if v.is_zero() {
                        continue;
                    }
                    for (r, row) in sub.iter().enumerate() {
                        if !row[s].is_zero() {
                            next[(o * (k + 1) + r) * inner + i] += &row[s] * v;
                        }
                    }
                }
            }
        }
        data = next;
    }
    if f.det_twist > 0 {
        let scale = Pow::pow(&g.det(), f.det_twist);
        for c in &mut data {
            *c *= &scale;
        }
    }
    TensorPolynomial {
        degrees: f.degrees.clone(),
        det_twist: f.det_twist,
        coeffs: data,
    }
}

/// Required `p`-exponent at `x^i y^(k-i)` for membership in `(p, x)^n`.
pub fn w_exponents(k: usize, n: u64) -> Vec<u64> {
    (0..=k).map(|i| n.saturating_sub(i as u64)).collect()
}

/// Diagonal basis `p^max(n-i, 0)` of the degree-`k` piece of `(p, x)^n`.
pub fn w_basis(k: usize, n: u64, p: Prime) -> crate::linalg::IntegerMatrix {
    crate::linalg::IntegerMatrix::diagonal(w_exponents(k, n).into_iter().map(|e| p.pow(e)).collect())
}

pub fn w_membership(f: &HomogPoly, n: u64, p: Prime) -> bool {
    f.coeffs
        .iter()
        .zip(w_exponents(f.degree(), n))
        .all(|(c, e)| divisible_by_power(c, p, e))
}

/// Required exponents for the sum over `j` of `L (x) .. W^n_{k_j} .. (x) L`:
/// `min_j max(n - i_j, 0)` at each multi-index.
pub fn tensor_w_exponents(degrees: &[usize], n: u64) -> Vec<u64> {
    MultiIndices::new(degrees)
        .map(|idx| idx.iter().map(|&i| n.saturating_sub(i as u64)).min().unwrap_or(0))
        .collect()
}

pub fn tensor_w_basis(degrees: &[usize], n: u64, p: Prime) -> crate::linalg::IntegerMatrix {
    crate::linalg::IntegerMatrix::diagonal(tensor_w_exponents(degrees, n).into_iter().map(|e| p.pow(e)).collect())
}

pub fn tensor_w_membership(f: &TensorPolynomial, n: u64, p: Prime) -> bool {
    f.coeffs
        .iter()
        .zip(tensor_w_exponents(&f.degrees, n))
        .all(|(c, e)| divisible_by_power(c, p, e))
}

/// Multiplies factor `i0` (0-based) by `y^(p^(n-1))`.
pub fn phi_map(f: &TensorPolynomial, n: u64, i0: usize, p: Prime) -> Result<TensorPolynomial> {
    if n == 0 {
        return Err(Error::InvalidParameter("phi needs depth n >= 1".into()));
    }
    if i0 >= f.arity() {
        return Err(Error::InvalidParameter(format!(
            "factor index {i0} out of range for arity {}",
            f.arity()
        )));
    }
    let shift = p
        .get()
        .checked_pow(u32::try_from(n - 1).map_err(|_| Error::Overflow("p^(n-1)".into()))?)
        .ok_or_else(|| Error::Overflow("p^(n-1)".into()))? as usize;
    let mut degrees = f.degrees.clone();
    degrees[i0] += shift;
    let mut out = TensorPolynomial::zero(degrees, f.det_twist)?;
    // x-exponents are unchanged, so each term keeps its multi-index
    let stride_new: Vec<usize> = strides(&out.degrees);
    for (idx, c) in f.terms() {
        let flat: usize = idx.iter().zip(&stride_new).map(|(i, s)| i * s).sum();
        out.coeffs[flat] = c.clone();
    }
    Ok(out)
}

fn strides(degrees: &[usize]) -> Vec<usize> {
    let mut s = vec![1usize; degrees.len()];
    for j in (0..degrees.len().saturating_sub(1)).rev() {
        s[j] = s[j + 1] * (degrees[j + 1] + 1);
    }
    s
}

/// `phi(g F) - g phi(F)` for `g` in the semigroup `M`.
pub fn phi_equivariance_defect(
    f: &TensorPolynomial,
    g: &Mat2,
    n: u64,
    i0: usize,
    p: Prime,
) -> Result<TensorPolynomial> {
    if !g.in_semigroup_m(p) {
        return Err(Error::Precondition(format!(
            "matrix is not in M (needs c = 0, d = 1 mod {p})"
        )));
    }
    phi_map(&tensor_act(g, f), n, i0, p)?.sub(&tensor_act(g, &phi_map(f, n, i0, p)?))
}

/// `y^(p^(n-1)) - (bx + dy)^(p^(n-1))` lies in `(p, x)^n`, given `d = 1 mod p`.
pub fn y_power_identity_check(b: &BigInt, d: &BigInt, n: u64, p: Prime) -> Result<bool> {
    if n == 0 {
        return Err(Error::InvalidParameter("depth n must be >= 1".into()));
    }
    if !divisible_by_power(&(d - 1), p, 1) {
        return Err(Error::Precondition(format!("d = {d} is not 1 mod {p}")));
    }
    let e = u32::try_from(n - 1)
        .ok()
        .and_then(|e| p.get().checked_pow(e))
        .ok_or_else(|| Error::Overflow("p^(n-1)".into()))?;
    let lhs = HomogPoly::linear(BigInt::zero(), BigInt::one()).pow(e);
    let rhs = HomogPoly::linear(b.clone(), d.clone()).pow(e);
    Ok(w_membership(&lhs.sub(&rhs)?, n, p))
}

/// `f^(p^s) - f'^(p^s)` lies in `W^n` of degree `p^s k`, given `f - f'` in `W^n_k`.
pub fn power_congruence_check(f: &HomogPoly, f_prime: &HomogPoly, n: u64, s: u32, p: Prime) -> Result<bool> {
    let diff = f.sub(f_prime)?;
    if !w_membership(&diff, n, p) {
        return Err(Error::Precondition("f - f' is not in W^n".into()));
    }
    let e = p
        .get()
        .checked_pow(s)
        .ok_or_else(|| Error::Overflow("p^s".into()))?;
    Ok(w_membership(&f.pow(e).sub(&f_prime.pow(e))?, n, p))
}

/// Every coefficient of `g F` is divisible by `p^(n + twist * vp(det g))`,
/// given `a = c = 0 mod p` and `F` in the tensor `W^n`.
pub fn hecke_divisibility_check(g: &Mat2, f: &TensorPolynomial, n: u64, p: Prime) -> Result<bool> {
    if !g.first_column_divisible(p) {
        return Err(Error::Precondition(format!("needs a = c = 0 mod {p}")));
    }
    if !tensor_w_membership(f, n, p) {
        return Err(Error::Precondition("F is not in W^n".into()));
    }
    let image = tensor_act(g, f);
    let required = match vp(&g.det(), p).finite() {
        Some(v) => n + f.det_twist * v,
        // det = 0: the twist kills everything, or contributes nothing
        None if f.det_twist > 0 => return Ok(image.is_zero()),
        None => n,
    };
    Ok(image.coeffs.iter().all(|c| divisible_by_power(c, p, required)))
}
