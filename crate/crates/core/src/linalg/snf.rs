//! Smith normal form over the p-local integers.
//!
//! Only p-adic valuations of elementary divisors are tracked. Row and column
//! operations are restricted to those invertible over `Z_(p)`: swaps, adding
//! multiples of one line to another, and scaling by integers prime to `p`.
//! Entries stay integral throughout; no modular reduction is applied.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::IntegerMatrix;
use crate::valuation::{split_p_power, vp, Prime, Valuation};

/// Row-major rectangular integer grid used by the elimination routines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Grid {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<BigInt>,
}

impl Grid {
    pub fn new(rows: usize, cols: usize, data: Vec<BigInt>) -> Self {
        assert_eq!(data.len(), rows * cols);
        Grid { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Grid::new(rows, cols, vec![BigInt::zero(); rows * cols])
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.cols + j]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for i in 0..self.rows {
                self.data.swap(i * self.cols + a, i * self.cols + b);
            }
        }
    }

    #[cfg(test)]
    pub fn mul(&self, rhs: &Grid) -> Grid {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Grid::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let prod = a * rhs.at(k, j);
                    *out.at_mut(i, j) += prod;
                }
            }
        }
        out
    }
}

/// The p-free part of the gcd of `values`, or `None` if it is 1 or all are zero.
fn p_free_content<'a>(values: impl Iterator<Item = &'a BigInt>, p: Prime) -> Option<BigInt> {
    let mut g = BigInt::zero();
    for v in values {
        if !v.is_zero() {
            g = g.gcd(v);
            if g.is_one() {
                return None;
            }
        }
    }
    if g.is_zero() {
        return None;
    }
    let (_, unit) = split_p_power(&g, p);
    let unit = unit.abs();
    (!unit.is_one()).then_some(unit)
}

/// Diagonalizes `g` in place by p-local row and column operations.
///
/// Every row operation is mirrored on `companion` (same row count). Returns the
/// valuation of the diagonal entry in each row position after pivoting; rows
/// past the rank get `Infinity`. The finite values are weakly increasing.
pub(crate) fn p_local_diagonalize(g: &mut Grid, mut companion: Option<&mut Grid>, p: Prime) -> Vec<Valuation> {
    if let Some(c) = companion.as_deref() {
        assert_eq!(c.rows, g.rows, "companion must share the row space");
    }
    let (rows, cols) = (g.rows, g.cols);
    let mut exps = vec![Valuation::Infinity; rows];
    for k in 0..rows.min(cols) {
        let mut best: Option<(u64, usize, usize)> = None;
        'scan: for i in k..rows {
            for j in k..cols {
                if let Valuation::Finite(v) = vp(g.at(i, j), p) {
                    if best.is_none_or(|(b, _, _)| v < b) {
                        best = Some((v, i, j));
                        if v == 0 {
                            break 'scan;
                        }
                    }
                }
            }
        }
        let Some((e, pi, pj)) = best else { break };
        g.swap_rows(k, pi);
        if let Some(c) = companion.as_deref_mut() {
            c.swap_rows(k, pi);
        }
        g.swap_cols(k, pj);
        let pe = p.pow(e);
        let unit = g.at(k, k) / &pe;

        for i in k + 1..rows {
            if g.at(i, k).is_zero() {
                continue;
            }
            let q = g.at(i, k) / &pe;
            for j in k..cols {
                let v = &unit * g.at(i, j) - &q * g.at(k, j);
                *g.at_mut(i, j) = v;
            }
            if let Some(c) = companion.as_deref_mut() {
                for j in 0..c.cols {
                    let v = &unit * c.at(i, j) - &q * c.at(k, j);
                    *c.at_mut(i, j) = v;
                }
            }
            let content = match companion.as_deref() {
                Some(c) => p_free_content(
                    (k..cols).map(|j| g.at(i, j)).chain((0..c.cols).map(|j| c.at(i, j))),
                    p,
                ),
                None => p_free_content((k..cols).map(|j| g.at(i, j)), p),
            };
            if let Some(content) = content {
                for j in k..cols {
                    let v = g.at(i, j) / &content;
                    *g.at_mut(i, j) = v;
                }
                if let Some(c) = companion.as_deref_mut() {
                    for j in 0..c.cols {
                        let v = c.at(i, j) / &content;
                        *c.at_mut(i, j) = v;
                    }
                }
            }
        }
        // Rows below k are now zero in column k, so clearing row k only
        // rescales the rest of each column by the unit.
        for j in k + 1..cols {
            if g.at(k, j).is_zero() {
                continue;
            }
            for i in k + 1..rows {
                let v = &unit * g.at(i, j);
                *g.at_mut(i, j) = v;
            }
            *g.at_mut(k, j) = BigInt::zero();
            if let Some(content) = p_free_content((k + 1..rows).map(|i| g.at(i, j)), p) {
                for i in k + 1..rows {
                    let v = g.at(i, j) / &content;
                    *g.at_mut(i, j) = v;
                }
            }
        }
        exps[k] = Valuation::Finite(e);
    }
    exps
}

/// p-valuations of the elementary divisors of `a`, weakly decreasing.
///
/// A rank-deficient matrix contributes `Infinity` entries, which sort first.
pub fn snf_p_exponents(a: &IntegerMatrix, p: Prime) -> Vec<Valuation> {
    let mut g = a.to_grid();
    let mut exps = p_local_diagonalize(&mut g, None, p);
    exps.sort_unstable_by(|x, y| y.cmp(x));
    exps
}

/// Elementary-divisor valuations of a rectangular grid: the shape of
/// `Z_(p)^rows / (column span)`, weakly decreasing, `Infinity` for free rank.
pub(crate) fn grid_exponents(g: &Grid, p: Prime) -> Vec<Valuation> {
    let mut g = g.clone();
    let mut exps = p_local_diagonalize(&mut g, None, p);
    exps.sort_unstable_by(|x, y| y.cmp(x));
    exps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::char_poly;
    use crate::linalg::charpoly::tests::random_unimodular;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn p(n: u64) -> Prime {
        Prime::new(n).unwrap()
    }

    fn fin(v: &[u64]) -> Vec<Valuation> {
        v.iter().map(|&x| Valuation::Finite(x)).collect()
    }

    #[test]
    fn diagonal_examples() {
        for q in [2u64, 3, 5] {
            let d = IntegerMatrix::diagonal(vec![p(q).pow(2), p(q).pow(1), BigInt::one()]);
            assert_eq!(snf_p_exponents(&d, p(q)), fin(&[2, 1, 0]));
        }
        assert_eq!(
            snf_p_exponents(&IntegerMatrix::zero(2), p(3)),
            vec![Valuation::Infinity, Valuation::Infinity]
        );
        // other primes are invisible: 7*9 at p = 3
        let d = IntegerMatrix::from_i64_rows(&[[63, 0], [0, 14]]).unwrap();
        assert_eq!(snf_p_exponents(&d, p(3)), fin(&[2, 0]));
    }

    #[test]
    fn non_diagonal() {
        // [[2,4],[6,8]] has elementary divisors 2, 4 over Z
        let a = IntegerMatrix::from_i64_rows(&[[2, 4], [6, 8]]).unwrap();
        assert_eq!(snf_p_exponents(&a, p(2)), fin(&[2, 1]));
        // det = -8, unit at p = 3
        assert_eq!(snf_p_exponents(&a, p(3)), fin(&[0, 0]));
        let singular = IntegerMatrix::from_i64_rows(&[[3, 6], [1, 2]]).unwrap();
        assert_eq!(snf_p_exponents(&singular, p(3)), vec![Valuation::Infinity, Valuation::Finite(0)]);
    }

    #[test]
    fn conjugated_diagonal_keeps_exponents() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for q in [2u64, 3, 5, 7] {
            let d = IntegerMatrix::diagonal(vec![p(q).pow(2), p(q).pow(1), BigInt::one()]);
            for _ in 0..20 {
                let (u, _) = random_unimodular(&mut rng, 3, 12);
                let (v, _) = random_unimodular(&mut rng, 3, 12);
                assert_eq!(snf_p_exponents(&u.mul(&d).mul(&v), p(q)), fin(&[2, 1, 0]));
            }
        }
    }

    #[test]
    fn companion_tracks_row_operations() {
        // With the identity as companion we recover U; the rows of U*A then
        // have minimal valuations equal to the pivot exponents.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..30 {
            let data: Vec<BigInt> = (0..12).map(|_| BigInt::from(rng.gen_range(-30i64..=30) * 9)).collect();
            let a = Grid::new(3, 4, data);
            let mut g = a.clone();
            let mut c = Grid::zeros(3, 3);
            for i in 0..3 {
                *c.at_mut(i, i) = BigInt::one();
            }
            let exps = p_local_diagonalize(&mut g, Some(&mut c), p(3));
            let ua = c.mul(&a);
            for (i, e) in exps.iter().enumerate() {
                let row_min = (0..4).map(|j| vp(ua.at(i, j), p(3))).min().unwrap();
                assert_eq!(row_min, *e);
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn exponent_sum_is_det_valuation(seed in any::<u64>(), t in 1usize..6, q in prop::sample::select(vec![2u64, 3, 5])) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = IntegerMatrix::from_fn(t, |_, _| BigInt::from(rng.gen_range(-60i64..=60)));
            let det = char_poly(&a).coeff(t);
            let exps = snf_p_exponents(&a, p(q));
            match vp(&det, p(q)) {
                Valuation::Finite(v) => {
                    prop_assert_eq!(exps.iter().map(|e| e.finite().unwrap()).sum::<u64>(), v);
                }
                Valuation::Infinity => prop_assert!(exps[0].is_infinite()),
            }
        }

        #[test]
        fn unimodular_invariance(seed in any::<u64>(), t in 1usize..6, q in prop::sample::select(vec![2u64, 3, 5])) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = IntegerMatrix::from_fn(t, |_, j| BigInt::from(rng.gen_range(-20i64..=20)) * p(q).pow(j as u64 % 3));
            let (u, _) = random_unimodular(&mut rng, t, 4 * t);
            prop_assert_eq!(snf_p_exponents(&a.mul(&u), p(q)), snf_p_exponents(&a, p(q)));
            prop_assert_eq!(snf_p_exponents(&u.mul(&a), p(q)), snf_p_exponents(&a, p(q)));
        }

        #[test]
        fn diagonal_output_weakly_decreasing(seed in any::<u64>(), t in 1usize..6) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let a = IntegerMatrix::from_fn(t, |_, _| BigInt::from(rng.gen_range(-4i64..=4) * 8));
            let exps = snf_p_exponents(&a, p(2));
            prop_assert!(exps.windows(2).all(|w| w[0] >= w[1]));
        }
    }
}
