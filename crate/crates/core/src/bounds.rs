//! Convex piecewise-linear bounds on Newton polygons.
//!
//! For a quotient shape `a_1 >= ... >= a_t` at depth `n`, with `b_i = n - a_i`:
//!
//! - `B(j) = b_1 + ... + b_j`, interpolated linearly, slope `n` past `t`;
//! - `T(x) = M + B(x - 1)` with `M = ceil(n / 2)`, and `T = M` on `[0, 1]`;
//! - `c = inf { T(x) / x : x >= 1 }`.
//!
//! Every quantity here is an exact rational, except the closed-form
//! comparison values in [`ClosedForm`], which are floats for reporting.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::QuotientShape;
use crate::rational::{self, int, Rational};

/// Multiplicities `sigma_i = (i^d - (i-1)^d) h`, `i = 1..=n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SigmaProfile {
    pub d: u32,
    pub h: u64,
    pub n: u64,
    pub sigma: Vec<u64>,
}

impl SigmaProfile {
    /// `sigma_1 + ... + sigma_n = n^d h`.
    pub fn total(&self) -> u64 {
        self.sigma.iter().sum()
    }

    /// Partial sums `sigma_1 + ... + sigma_j` for `j = 0..=n`.
    pub fn partial_sums(&self) -> Vec<u64> {
        let mut acc = 0;
        std::iter::once(0)
            .chain(self.sigma.iter().map(|s| {
                acc += s;
                acc
            }))
            .collect()
    }
}

fn checked_power(base: u64, exp: u32) -> Result<u64> {
    base.checked_pow(exp)
        .ok_or_else(|| Error::Overflow(format!("{base}^{exp}")))
}

pub fn sigma_profile(d: u32, h: u64, n: u64) -> Result<SigmaProfile> {
    if d == 0 || h == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "sigma profile needs d, h, n >= 1 (got d={d}, h={h}, n={n})"
        )));
    }
    let sigma = (1..=n)
        .map(|i| {
            let hi = checked_power(i, d)?;
            let lo = checked_power(i - 1, d)?;
            (hi - lo)
                .checked_mul(h)
                .ok_or_else(|| Error::Overflow("sigma_i * h".into()))
        })
        .collect::<Result<Vec<_>>>()?;
    checked_power(n, d)?
        .checked_mul(h)
        .ok_or_else(|| Error::Overflow("n^d h".into()))?;
    Ok(SigmaProfile { d, h, n, sigma })
}

/// `sigma_1` copies of `n`, `sigma_2` copies of `n - 1`, ..., `sigma_n` copies
/// of 1, padded with zeros to rank `t`.
pub fn shape_from_profile(profile: &SigmaProfile, t: usize) -> Result<QuotientShape> {
    let total = profile.total() as usize;
    if t < total {
        return Err(Error::InvalidParameter(format!(
            "rank t = {t} is smaller than the profile length {total}"
        )));
    }
    let mut a = Vec::with_capacity(t);
    for (i, &s) in profile.sigma.iter().enumerate() {
        a.extend(std::iter::repeat_n(profile.n - i as u64, s as usize));
    }
    a.resize(t, 0);
    QuotientShape::new(profile.n, a)
}

/// A convex piecewise-linear function on `[0, inf)`.
///
/// Piece `i` starts at `breakpoints[i]` with value `values[i]` and has integer
/// slope `slopes[i]`; the last piece extends forever. Adjacent pieces always
/// have different slopes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PiecewiseBound {
    breakpoints: Vec<Rational>,
    values: Vec<Rational>,
    slopes: Vec<i64>,
}

/// One exported row: breakpoint, value there, slope to the right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundRow {
    #[serde(with = "rational::serde_text")]
    pub breakpoint: Rational,
    #[serde(with = "rational::serde_text")]
    pub value: Rational,
    pub slope: i64,
}

impl PiecewiseBound {
    /// Builds from a starting value at `x = 0` and `(start, slope)` pieces.
    ///
    /// The first piece must start at 0, starts must strictly increase, and
    /// slopes must weakly increase.
    pub fn from_pieces(initial: Rational, pieces: &[(Rational, i64)]) -> Result<Self> {
        if pieces.first().is_none_or(|(x, _)| !x.is_zero()) {
            return Err(Error::InvalidParameter("first piece must start at 0".into()));
        }
        if pieces.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(Error::InvalidParameter("breakpoints must strictly increase".into()));
        }
        if pieces.windows(2).any(|w| w[0].1 > w[1].1) {
            return Err(Error::InvalidParameter("slopes must weakly increase (convexity)".into()));
        }
        let mut out = PiecewiseBound {
            breakpoints: vec![],
            values: vec![],
            slopes: vec![],
        };
        let mut value = initial;
        for (i, (x, s)) in pieces.iter().enumerate() {
            if i > 0 {
                let (px, ps) = &pieces[i - 1];
                value += int(*ps) * (x - px);
            }
            if out.slopes.last() == Some(s) {
                continue;
            }
            out.breakpoints.push(x.clone());
            out.values.push(value.clone());
            out.slopes.push(*s);
        }
        Ok(out)
    }

    pub fn breakpoints(&self) -> &[Rational] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn slopes(&self) -> &[i64] {
        &self.slopes
    }

    pub fn terminal_slope(&self) -> i64 {
        *self.slopes.last().expect("nonempty")
    }

    fn piece_index(&self, x: &Rational) -> usize {
        match self.breakpoints.binary_search(x) {
            Ok(i) => i,
            Err(i) => i.saturating_sub(1),
        }
    }

    /// Value at `x >= 0`; negative `x` evaluates the first piece's constant.
    pub fn eval(&self, x: &Rational) -> Rational {
        if *x <= self.breakpoints[0] {
            return self.values[0].clone();
        }
        let i = self.piece_index(x);
        &self.values[i] + int(self.slopes[i]) * (x - &self.breakpoints[i])
    }

    pub fn eval_int(&self, x: i64) -> Rational {
        self.eval(&int(x))
    }

    pub fn is_convex(&self) -> bool {
        self.slopes.windows(2).all(|w| w[0] <= w[1])
    }

    pub fn rows(&self) -> Vec<BoundRow> {
        (0..self.slopes.len())
            .map(|i| BoundRow {
                breakpoint: self.breakpoints[i].clone(),
                value: self.values[i].clone(),
                slope: self.slopes[i],
            })
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows()).expect("serializable")
    }
}

/// `B` for a quotient shape: slope `b_i` on `[i-1, i]`, slope `n` past `t`.
pub fn b_function(shape: &QuotientShape) -> PiecewiseBound {
    let b = shape.complements();
    let mut pieces: Vec<(Rational, i64)> = Vec::new();
    for (i, &bi) in b.iter().enumerate() {
        if pieces.last().map(|p| p.1) != Some(bi as i64) {
            pieces.push((int(i as i64), bi as i64));
        }
    }
    let n = shape.depth() as i64;
    if pieces.last().map(|p| p.1) != Some(n) {
        pieces.push((int(b.len() as i64), n));
    }
    PiecewiseBound::from_pieces(Rational::zero(), &pieces).expect("b_i weakly increase")
}

/// `T(x) = M + B(x - 1)`, constant `M` on `[0, 1]`.
pub fn t_function(shape: &QuotientShape) -> PiecewiseBound {
    let b = b_function(shape);
    let m = int(shape.half_depth() as i64);
    let mut pieces = vec![(Rational::zero(), 0i64)];
    for (x, s) in b.breakpoints().iter().zip(b.slopes()) {
        pieces.push((x + Rational::one(), *s));
    }
    PiecewiseBound::from_pieces(m, &pieces).expect("shifted B is convex")
}

/// `inf { T(x) / x : x >= 1 }`, exactly.
///
/// On each linear piece `T(x)/x` is monotone, so the infimum is at `x = 1`,
/// at a breakpoint, or approached along the final ray, where the limit is the
/// terminal slope `n`.
pub fn critical_slope_c(shape: &QuotientShape) -> Rational {
    inf_ratio_from_one(&t_function(shape))
}

fn inf_ratio_from_one(f: &PiecewiseBound) -> Rational {
    let one = Rational::one();
    let mut best = f.eval(&one);
    for (x, v) in f.breakpoints().iter().zip(f.values()) {
        if *x >= one {
            let r = v / x;
            if r < best {
                best = r;
            }
        }
    }
    let terminal = int(f.terminal_slope());
    if terminal < best {
        best = terminal;
    }
    best
}

/// Float evaluation of the closed-form comparison quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosedForm {
    pub d: u32,
    pub h: u64,
    pub n: u64,
    pub m: u64,
    /// `(1/(d+1))^(d/(d+1)) (h^(-d/(d+1)) + 1)`
    pub c1: f64,
    /// `c1 n^(1/(d+1))`
    pub c1_scaled: f64,
    /// `min(c1 n^(1/(d+1)), n)`
    pub c_closed: f64,
    /// `h (M (d+1))^(d/(d+1))`, where `P(x)/x` is stationary
    pub stationary_x: f64,
    pub q_at_stationary: f64,
    pub p_over_x_at_stationary: f64,
}

/// `Q(x) = (d/(d+1)) (x/h)^((d+1)/d) - x`.
pub fn q_lower(d: u32, h: u64, x: f64) -> f64 {
    let d = d as f64;
    (d / (d + 1.0)) * (x / h as f64).powf((d + 1.0) / d) - x
}

pub fn closed_form_c(d: u32, h: u64, n: u64) -> Result<ClosedForm> {
    if d == 0 || h == 0 || n == 0 {
        return Err(Error::InvalidParameter("closed form needs d, h, n >= 1".into()));
    }
    let df = d as f64;
    let e = df / (df + 1.0);
    let c1 = (1.0 / (df + 1.0)).powf(e) * (1.0 / (h as f64).powf(e) + 1.0);
    let c1_scaled = c1 * (n as f64).powf(1.0 / (df + 1.0));
    let m = n.div_ceil(2);
    let stationary_x = h as f64 * (m as f64 * (df + 1.0)).powf(e);
    let q = q_lower(d, h, stationary_x);
    Ok(ClosedForm {
        d,
        h,
        n,
        m,
        c1,
        c1_scaled,
        c_closed: c1_scaled.min(n as f64),
        stationary_x,
        q_at_stationary: q,
        p_over_x_at_stationary: (m as f64 + q) / stationary_x,
    })
}

/// The shape used for depth thresholds: profile `(d, h, n)` at rank `n^d h + 1`.
pub fn threshold_shape(d: u32, h: u64, n: u64) -> Result<QuotientShape> {
    let profile = sigma_profile(d, h, n)?;
    shape_from_profile(&profile, profile.total() as usize + 1)
}

/// Smallest `n >= 1` with `alpha < c(n)`, searching up to `max_n`.
pub fn n_alpha(alpha: &Rational, d: u32, h: u64, max_n: u64) -> Result<u64> {
    if *alpha < Rational::zero() {
        return Err(Error::InvalidParameter("alpha must be nonnegative".into()));
    }
    for n in 1..=max_n {
        if *alpha < critical_slope_c(&threshold_shape(d, h, n)?) {
            return Ok(n);
        }
    }
    Err(Error::SearchExhausted { max_n })
}

/// `floor(3 m (alpha + 1)^2 / 2) * m`.
pub fn iq_bound_paper(m: u64, alpha: &Rational) -> BigInt {
    let a1 = alpha + Rational::one();
    let inner = rational::int(3) * int(m as i64) * &a1 * &a1 / int(2);
    rational::floor(&inner) * BigInt::from(m)
}

/// Slope `r` on `[r^2 m, (r+1)^2 m]` for `r < n`, slope `n` from `n^2 m` on.
pub fn projection_bound(m: u64, n: u64) -> Result<PiecewiseBound> {
    if m == 0 {
        return Err(Error::InvalidParameter("generator count m must be >= 1".into()));
    }
    let pieces: Vec<(Rational, i64)> = (0..=n)
        .map(|r| (int((r * r * m) as i64), r as i64))
        .collect();
    PiecewiseBound::from_pieces(Rational::zero(), &pieces)
}

/// A nonnegative rational or `Infinite`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chord {
    Finite(Rational),
    Infinite,
}

impl Chord {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Chord::Finite(q) => Some(q),
            Chord::Infinite => None,
        }
    }
}

impl std::fmt::Display for Chord {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Chord::Finite(q) => f.write_str(&rational::format(q)),
            Chord::Infinite => f.write_str("inf"),
        }
    }
}

/// Longest horizontal extent `x2 - x1` of a line of slope `alpha` through
/// `(x1, f(x1))` that stays on or above `f` over `[x1, x2]`.
///
/// For convex `f` the extent decreases as `x1` moves right inside a piece, so
/// only breakpoints need to be tried as starting points.
pub fn max_chord_above(bound: &PiecewiseBound, alpha: &Rational) -> Chord {
    match chord_extent(bound, alpha) {
        Some((len, _)) => Chord::Finite(len),
        None => Chord::Infinite,
    }
}

/// Longest chord and the furthest right end of any chord from a breakpoint.
fn chord_extent(bound: &PiecewiseBound, alpha: &Rational) -> Option<(Rational, Rational)> {
    if int(bound.terminal_slope()) <= *alpha {
        return None;
    }
    let bps = bound.breakpoints();
    let mut best = Rational::zero();
    let mut furthest = Rational::zero();
    for start in 0..bps.len() {
        let x1 = &bps[start];
        // gap = line - f, concave, zero at x1
        let mut x = x1.clone();
        let mut gap = Rational::zero();
        let mut x2 = None;
        for i in start..bps.len() {
            let rate = alpha - int(bound.slopes()[i]);
            match bps.get(i + 1) {
                Some(e) if &gap + &rate * (e - &x) >= Rational::zero() => {
                    gap += &rate * (e - &x);
                    x = e.clone();
                }
                _ => {
                    // rate < 0 here: either the gap turns negative inside the
                    // piece or this is the final ray with slope > alpha
                    x2 = Some(&x + &gap / (-rate));
                    break;
                }
            }
        }
        let x2 = x2.expect("terminal slope exceeds alpha");
        if &x2 - x1 > best {
            best = &x2 - x1;
        }
        if x2 > furthest {
            furthest = x2;
        }
    }
    Some((best, furthest))
}

/// [`max_chord_above`] on [`projection_bound`] with the depth `n` raised until
/// every chord ends before `n^2 m`, past which the bound no longer matters.
/// Returns the chord length and the depth used.
pub fn projection_chord(m: u64, alpha: &Rational) -> Result<(Rational, u64)> {
    if *alpha < Rational::zero() {
        return Err(Error::InvalidParameter("alpha must be nonnegative".into()));
    }
    let mut n: u64 = u64::try_from(rational::floor(alpha))
        .map_err(|_| Error::Overflow("alpha".into()))?
        + 2;
    loop {
        let bound = projection_bound(m, n)?;
        let (len, furthest) = chord_extent(&bound, alpha).expect("terminal slope n exceeds alpha");
        if furthest <= int((n * n * m) as i64) {
            return Ok((len, n));
        }
        n = n.checked_mul(2).ok_or_else(|| Error::Overflow("projection bound depth".into()))?;
    }
}
