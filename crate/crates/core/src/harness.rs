//! Seeded random campaigns checking the divisibility, congruence and slope
//! statements for endomorphisms with `xi(K) ⊆ p^n L`, and the layer bound for
//! subquotients of finite abelian p-groups.
//!
//! Take `L = Z^t` with `K` spanned by the columns `p^(a_j) e_j`. An integer
//! matrix `u` sends `K` into `p^n L` exactly when column `j` is divisible by
//! `p^(b_j)`, `b_j = n - a_j`. A second lattice with the same quotient shape
//! gives a matrix `u'` congruent to `u` row by row modulo `p^(a_j)`.
//!
//! Trial `i` of a campaign with seed `s` uses its own generator, seeded by
//! `trial_seed(s, i)`, so campaigns are reproducible and trials can run in
//! any order.

use std::time::{Duration, Instant};

use num_bigint::{BigInt, RandBigInt};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{b_function, critical_slope_c, t_function};
use crate::error::{Error, Result};
use crate::linalg::{char_poly, grid_exponents, p_local_diagonalize, CharPolyCoeffs, Grid, IntegerMatrix, QuotientShape};
use crate::newton::{newton_polygon, NewtonPolygon, SlopeCount};
use crate::rational::{self, Rational};
use crate::valuation::{vp, Prime, Valuation};

/// Parameters of one campaign.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrialConfig {
    pub shape: QuotientShape,
    pub p: Prime,
    pub seed: u64,
    /// Random factors are drawn from `[0, p^entry_bound)`.
    pub entry_bound: u64,
    pub trials: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t_prime: Option<usize>,
}

impl TrialConfig {
    /// Defaults: `entry_bound = n + 2`, no rank drop.
    pub fn new(shape: QuotientShape, p: Prime, seed: u64, trials: usize) -> Self {
        let entry_bound = shape.depth() + 2;
        TrialConfig { shape, p, seed, entry_bound, trials, t_prime: None }
    }

    pub fn with_entry_bound(mut self, e: u64) -> Self {
        self.entry_bound = e;
        self
    }

    pub fn with_t_prime(mut self, t_prime: Option<usize>) -> Self {
        self.t_prime = t_prime;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.shape.depth();
        if self.entry_bound < n + 1 {
            return Err(Error::InvalidParameter(format!(
                "entry bound E = {} must be at least n + 1 = {}",
                self.entry_bound,
                n + 1
            )));
        }
        if self.trials == 0 {
            return Err(Error::InvalidParameter("trials must be positive".into()));
        }
        if self.shape.rank() == 0 {
            return Err(Error::InvalidParameter("shape must have rank t >= 1".into()));
        }
        if let Some(tp) = self.t_prime {
            check_rank_drop(&self.shape, tp)?;
        }
        Ok(())
    }
}

fn check_rank_drop(shape: &QuotientShape, t_prime: usize) -> Result<()> {
    let t = shape.rank();
    if t_prime == 0 || t_prime > t {
        return Err(Error::InvalidParameter(format!("t' = {t_prime} must lie in 1..={t}")));
    }
    if shape.exponents()[t_prime..].iter().any(|&a| a != 0) {
        return Err(Error::Precondition(format!(
            "dropping ranks {}..{t} needs a_i = 0 there, shape is {:?}",
            t_prime + 1,
            shape.exponents()
        )));
    }
    Ok(())
}

/// SplitMix64 step applied to `seed + index * golden`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

fn draw_below(rng: &mut ChaCha8Rng, bound: &BigInt) -> BigInt {
    if bound <= &BigInt::from(1) {
        return BigInt::zero();
    }
    rng.gen_bigint_range(&BigInt::zero(), bound)
}

/// Entry `(i, j)` is `p^(b_j) r` with `r` uniform in `[0, p^entry_bound)`.
pub fn gen_matrix(shape: &QuotientShape, p: Prime, seed: u64, entry_bound: u64) -> IntegerMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let col_scale: Vec<BigInt> = shape.complements().into_iter().map(|b| p.pow(b)).collect();
    let bound = p.pow(entry_bound);
    IntegerMatrix::from_fn(shape.rank(), |_, j| &col_scale[j] * draw_below(&mut rng, &bound))
}

/// Adds `p^max(a_j, b_k) r` to entry `(j, k)`, `r` uniform in `[0, p^entry_bound)`,
/// then keeps the leading `t'` block.
///
/// `entry_bound = 0` leaves every entry unchanged.
pub fn perturb_matrix(
    u: &IntegerMatrix,
    shape: &QuotientShape,
    p: Prime,
    seed: u64,
    t_prime: Option<usize>,
    entry_bound: u64,
) -> Result<IntegerMatrix> {
    let t = shape.rank();
    if u.dim() != t {
        return Err(Error::InvalidParameter(format!(
            "matrix is {0}x{0} but the shape has rank {t}",
            u.dim()
        )));
    }
    let tp = t_prime.unwrap_or(t);
    check_rank_drop(shape, tp)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = shape.exponents();
    let b = shape.complements();
    let bound = p.pow(entry_bound);
    let out = IntegerMatrix::from_fn(t, |j, k| {
        let r = draw_below(&mut rng, &bound);
        u.get(j, k) + p.pow(a[j].max(b[k])) * r
    });
    Ok(if tp < t { out.leading(tp) } else { out })
}

/// One coefficient-level violation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub trial: usize,
    pub seed: u64,
    /// Coefficient index `s`, or the layer `mu` for layer checks.
    pub index: usize,
    pub observed: Valuation,
    pub required: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlopeRow {
    pub trial: usize,
    pub seed: u64,
    pub u: SlopeCount,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub u_prime: Option<SlopeCount>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Property {
    Divisibility,
    Congruence,
    Slopes,
    Layers,
}

impl std::fmt::Display for Property {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Property::Divisibility => "divisibility",
            Property::Congruence => "congruence",
            Property::Slopes => "slopes",
            Property::Layers => "layers",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub property: Property,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config: Option<TrialConfig>,
    #[serde(skip_serializing_if = "Option::is_none", with = "opt_rational")]
    pub critical_slope: Option<Rational>,
    pub trials_run: usize,
    pub failures: Vec<Failure>,
    pub slope_table: Vec<SlopeRow>,
    /// Wall time; never serialized, so report bodies compare byte for byte.
    #[serde(skip)]
    pub elapsed: Duration,
}

mod opt_rational {
    use super::*;

    pub fn serialize<S: serde::Serializer>(q: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
        match q {
            Some(q) => s.serialize_str(&rational::format(q)),
            None => s.serialize_none(),
        }
    }
}

impl VerificationReport {
    fn empty(property: Property) -> Self {
        VerificationReport {
            property,
            config: None,
            critical_slope: None,
            trials_run: 0,
            failures: vec![],
            slope_table: vec![],
            elapsed: Duration::ZERO,
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serializable") + "\n"
    }
}

fn integer_bound(q: &Rational) -> u64 {
    // B and T have integer breakpoints and slopes, so their integer values are integers
    debug_assert!(q.is_integer());
    rational::floor(q).try_into().expect("bound fits in u64")
}

fn divisibility_failures(d: &CharPolyCoeffs, shape: &QuotientShape, p: Prime) -> Vec<(usize, Valuation, u64)> {
    let b = b_function(shape);
    (1..=d.degree())
        .filter_map(|s| {
            let required = integer_bound(&b.eval_int(s as i64));
            let observed = vp(&d.coeff(s), p);
            (!observed.at_least(required)).then_some((s, observed, required))
        })
        .collect()
}

fn congruence_failures(d: &CharPolyCoeffs, d_prime: &CharPolyCoeffs, shape: &QuotientShape, p: Prime) -> Vec<(usize, Valuation, u64)> {
    let t = t_function(shape);
    let deg = d.degree().max(d_prime.degree());
    (1..=deg)
        .filter_map(|s| {
            let required = integer_bound(&t.eval_int(s as i64));
            let observed = vp(&(d.coeff(s) - d_prime.coeff(s)), p);
            (!observed.at_least(required)).then_some((s, observed, required))
        })
        .collect()
}

/// Slopes below `c` whose multiplicities differ: `(slope, count in u, count in u')`.
fn slope_mismatches(np: &NewtonPolygon, np_prime: &NewtonPolygon, c: &Rational) -> Vec<(Rational, usize, usize)> {
    let (m, m_prime) = (np.slope_multiplicities(), np_prime.slope_multiplicities());
    let mut slopes: Vec<&Rational> = m.slopes().chain(m_prime.slopes()).filter(|s| *s < c).collect();
    slopes.sort();
    slopes.dedup();
    slopes
        .into_iter()
        .filter_map(|s| {
            let (x, y) = (m.get(s), m_prime.get(s));
            (x != y).then(|| (s.clone(), x, y))
        })
        .collect()
}

fn polygon_summary(np: &NewtonPolygon) -> String {
    let v: Vec<String> = np.vertices().iter().map(|(i, v)| format!("({i},{v})")).collect();
    v.join(" ")
}

fn single(property: Property, failures: Vec<(usize, Valuation, u64)>) -> VerificationReport {
    let mut r = VerificationReport::empty(property);
    r.trials_run = 1;
    r.failures = failures
        .into_iter()
        .map(|(index, observed, required)| Failure { trial: 0, seed: 0, index, observed, required, detail: None })
        .collect();
    r
}

/// `v_p(d_s) >= B(s)` for `1 <= s <= t`.
pub fn verify_divisibility(u: &IntegerMatrix, shape: &QuotientShape, p: Prime) -> VerificationReport {
    single(Property::Divisibility, divisibility_failures(&char_poly(u), shape, p))
}

/// `d_s = d'_s mod p^T(s)`, with the smaller polynomial padded by zeros.
pub fn verify_coeff_congruence(u: &IntegerMatrix, u_prime: &IntegerMatrix, shape: &QuotientShape, p: Prime) -> VerificationReport {
    let t = u.dim().max(u_prime.dim());
    let d = char_poly(u).padded_to(t);
    let d_prime = char_poly(u_prime).padded_to(t);
    single(Property::Congruence, congruence_failures(&d, &d_prime, shape, p))
}

/// Equal multiplicity for every slope below `c`.
pub fn verify_slope_match(u: &IntegerMatrix, u_prime: &IntegerMatrix, shape: &QuotientShape, p: Prime) -> VerificationReport {
    let t = u.dim().max(u_prime.dim());
    let np = newton_polygon(&char_poly(u).padded_to(t), p);
    let np_prime = newton_polygon(&char_poly(u_prime).padded_to(t), p);
    let c = critical_slope_c(shape);
    let mut r = VerificationReport::empty(Property::Slopes);
    r.trials_run = 1;
    r.failures = slope_failures(0, 0, &np, &np_prime, &c);
    r.slope_table = vec![SlopeRow {
        trial: 0,
        seed: 0,
        u: np.slope_multiplicities(),
        u_prime: Some(np_prime.slope_multiplicities()),
    }];
    r.critical_slope = Some(c);
    r
}

fn slope_failures(trial: usize, seed: u64, np: &NewtonPolygon, np_prime: &NewtonPolygon, c: &Rational) -> Vec<Failure> {
    slope_mismatches(np, np_prime, c)
        .into_iter()
        .enumerate()
        .map(|(index, (s, x, y))| Failure {
            trial,
            seed,
            index,
            observed: Valuation::Finite(x as u64),
            required: y as u64,
            detail: Some(format!(
                "slope {} has multiplicity {x} vs {y}; polygons [{}] and [{}]",
                rational::format(&s),
                polygon_summary(np),
                polygon_summary(np_prime)
            )),
        })
        .collect()
}

/// `v_p(d_t) = B(t)` for `diag(p^(b_1), ..., p^(b_t))`.
pub fn tightness_witness(shape: &QuotientShape, p: Prime) -> bool {
    let u = IntegerMatrix::diagonal(shape.complements().into_iter().map(|b| p.pow(b)).collect());
    let t = shape.rank();
    let bt = integer_bound(&b_function(shape).eval_int(t as i64));
    vp(&char_poly(&u).coeff(t), p) == Valuation::Finite(bt)
}

/// The three reports of one paired campaign, sharing matrices and polynomials.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairedReports {
    pub divisibility: VerificationReport,
    pub congruence: VerificationReport,
    pub slopes: VerificationReport,
}

struct PairedTrial {
    seed: u64,
    divisibility: Vec<(usize, Valuation, u64)>,
    congruence: Vec<(usize, Valuation, u64)>,
    slopes: Vec<Failure>,
    row: SlopeRow,
}

fn to_failures(trial: usize, seed: u64, raw: Vec<(usize, Valuation, u64)>) -> impl Iterator<Item = Failure> {
    raw.into_iter()
        .map(move |(index, observed, required)| Failure { trial, seed, index, observed, required, detail: None })
}

fn paired_trial(cfg: &TrialConfig, c: &Rational, i: usize) -> Result<PairedTrial> {
    let seed = trial_seed(cfg.seed, i as u64);
    let u = gen_matrix(&cfg.shape, cfg.p, seed, cfg.entry_bound);
    let u_prime = perturb_matrix(&u, &cfg.shape, cfg.p, trial_seed(seed, 1), cfg.t_prime, cfg.entry_bound)?;
    let t = cfg.shape.rank();
    let d = char_poly(&u);
    let d_prime = char_poly(&u_prime).padded_to(t);
    let np = newton_polygon(&d, cfg.p);
    let np_prime = newton_polygon(&d_prime, cfg.p);
    Ok(PairedTrial {
        seed,
        divisibility: divisibility_failures(&d, &cfg.shape, cfg.p),
        congruence: congruence_failures(&d, &d_prime, &cfg.shape, cfg.p),
        slopes: slope_failures(i, seed, &np, &np_prime, c),
        row: SlopeRow {
            trial: i,
            seed,
            u: np.slope_multiplicities(),
            u_prime: Some(np_prime.slope_multiplicities()),
        },
    })
}

/// Runs `trials` paired trials `(u, u')` and checks all three coefficient
/// properties on the same pairs.
pub fn run_paired(cfg: &TrialConfig) -> Result<PairedReports> {
    cfg.validate()?;
    let start = Instant::now();
    let c = critical_slope_c(&cfg.shape);
    let trials: Vec<PairedTrial> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| paired_trial(cfg, &c, i))
        .collect::<Result<_>>()?;
    let mut out = PairedReports {
        divisibility: VerificationReport::empty(Property::Divisibility),
        congruence: VerificationReport::empty(Property::Congruence),
        slopes: VerificationReport::empty(Property::Slopes),
    };
    for (i, tr) in trials.into_iter().enumerate() {
        out.divisibility.failures.extend(to_failures(i, tr.seed, tr.divisibility));
        out.congruence.failures.extend(to_failures(i, tr.seed, tr.congruence));
        out.slopes.failures.extend(tr.slopes);
        out.divisibility.slope_table.push(SlopeRow { u_prime: None, ..tr.row.clone() });
        out.slopes.slope_table.push(tr.row);
    }
    out.congruence.slope_table = out.slopes.slope_table.clone();
    out.slopes.critical_slope = Some(c);
    let elapsed = start.elapsed();
    for r in [&mut out.divisibility, &mut out.congruence, &mut out.slopes] {
        r.config = Some(cfg.clone());
        r.trials_run = cfg.trials;
        r.elapsed = elapsed;
    }
    Ok(out)
}

/// Divisibility alone: only `u` is generated.
pub fn run_divisibility(cfg: &TrialConfig) -> Result<VerificationReport> {
    cfg.validate()?;
    let start = Instant::now();
    let rows: Vec<(u64, Vec<(usize, Valuation, u64)>, SlopeCount)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(cfg.seed, i as u64);
            let d = char_poly(&gen_matrix(&cfg.shape, cfg.p, seed, cfg.entry_bound));
            let slopes = newton_polygon(&d, cfg.p).slope_multiplicities();
            (seed, divisibility_failures(&d, &cfg.shape, cfg.p), slopes)
        })
        .collect();
    let mut r = VerificationReport::empty(Property::Divisibility);
    for (i, (seed, f, slopes)) in rows.into_iter().enumerate() {
        r.failures.extend(to_failures(i, seed, f));
        r.slope_table.push(SlopeRow { trial: i, seed, u: slopes, u_prime: None });
    }
    r.config = Some(cfg.clone());
    r.trials_run = cfg.trials;
    r.elapsed = start.elapsed();
    Ok(r)
}

/// `#{i : a_i > mu}` for `mu = 0..n`, the exponent of `|p^mu P / p^(mu+1) P|`.
pub fn layer_sizes(shape: &QuotientShape) -> Vec<u64> {
    (0..shape.depth())
        .map(|mu| shape.exponents().iter().filter(|&&a| a > mu).count() as u64)
        .collect()
}

/// Layer by layer, `sub` is no larger than `parent`. Missing layers count as 0.
pub fn verify_layer_monotonic(parent: &QuotientShape, sub: &QuotientShape) -> bool {
    layer_violations(parent, sub).is_empty()
}

fn layer_violations(parent: &QuotientShape, sub: &QuotientShape) -> Vec<(usize, u64, u64)> {
    let (lp, ls) = (layer_sizes(parent), layer_sizes(sub));
    (0..lp.len().max(ls.len()))
        .filter_map(|mu| {
            let (x, y) = (ls.get(mu).copied().unwrap_or(0), lp.get(mu).copied().unwrap_or(0));
            (x > y).then_some((mu, x, y))
        })
        .collect()
}

/// Shape of `A/C` inside `P = Z^r / diag(p^(a_i))`, where `A` is spanned by
/// `generators` (columns of length `r`) and `C` by the combinations
/// `generators * relations[j]` (each of length `generators.len()`), both
/// taken together with the relations of `P`.
pub fn subquotient_shape(
    shape: &QuotientShape,
    p: Prime,
    generators: &[Vec<BigInt>],
    relations: &[Vec<BigInt>],
) -> Result<QuotientShape> {
    let r = shape.rank();
    let g = generators.len();
    if generators.iter().any(|v| v.len() != r) {
        return Err(Error::InvalidParameter(format!("generators must have length {r}")));
    }
    if relations.iter().any(|v| v.len() != g) {
        return Err(Error::InvalidParameter(format!("relations must have length {g}")));
    }
    let diag: Vec<BigInt> = shape.exponents().iter().map(|&a| p.pow(a)).collect();
    let rels = relations.len();
    // [G | D] and [G R | D], r rows each
    let mut a_grid = Grid::zeros(r, g + r);
    let mut c_grid = Grid::zeros(r, rels + r);
    for i in 0..r {
        for (j, v) in generators.iter().enumerate() {
            *a_grid.at_mut(i, j) = v[i].clone();
        }
        for (j, rel) in relations.iter().enumerate() {
            let mut acc = BigInt::zero();
            for (v, coef) in generators.iter().zip(rel) {
                acc += &v[i] * coef;
            }
            *c_grid.at_mut(i, j) = acc;
        }
        *a_grid.at_mut(i, g + i) = diag[i].clone();
        *c_grid.at_mut(i, rels + i) = diag[i].clone();
    }
    // After the row operations the rows of A are p^(e_i) Z_(p), so row i of
    // the companion, divided by p^(e_i), gives C in A's coordinates.
    let exps = p_local_diagonalize(&mut a_grid, Some(&mut c_grid), p);
    for (i, e) in exps.iter().enumerate() {
        let e = e.finite().expect("A contains a full-rank lattice");
        let pe = p.pow(e);
        for j in 0..c_grid.cols {
            let v = c_grid.at(i, j);
            debug_assert!((v % &pe).is_zero());
            *c_grid.at_mut(i, j) = v / &pe;
        }
    }
    let q: Vec<u64> = grid_exponents(&c_grid, p)
        .into_iter()
        .map(|v| v.finite().expect("C has finite index in A"))
        .collect();
    QuotientShape::from_unsorted(shape.depth(), q)
}

/// A random subgroup of `P` and a random quotient of it.
pub fn random_subquotient(shape: &QuotientShape, p: Prime, seed: u64) -> Result<QuotientShape> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let r = shape.rank();
    let bound = p.pow(shape.depth().max(1));
    let g = rng.gen_range(0..=r + 1);
    let generators: Vec<Vec<BigInt>> = (0..g)
        .map(|_| (0..r).map(|_| draw_below(&mut rng, &bound)).collect())
        .collect();
    let rels = if g == 0 { 0 } else { rng.gen_range(0..=g) };
    let relations: Vec<Vec<BigInt>> = (0..rels)
        .map(|_| (0..g).map(|_| draw_below(&mut rng, &bound)).collect())
        .collect();
    subquotient_shape(shape, p, &generators, &relations)
}

/// Layer monotonicity over `cfg.trials` random subquotients of `cfg.shape`.
pub fn run_layers(cfg: &TrialConfig) -> Result<VerificationReport> {
    if cfg.trials == 0 {
        return Err(Error::InvalidParameter("trials must be positive".into()));
    }
    let start = Instant::now();
    let subs: Vec<(u64, QuotientShape)> = (0..cfg.trials)
        .into_par_iter()
        .map(|i| {
            let seed = trial_seed(cfg.seed, i as u64);
            random_subquotient(&cfg.shape, cfg.p, seed).map(|s| (seed, s))
        })
        .collect::<Result<_>>()?;
    let mut r = VerificationReport::empty(Property::Layers);
    for (i, (seed, sub)) in subs.into_iter().enumerate() {
        for (mu, x, y) in layer_violations(&cfg.shape, &sub) {
            r.failures.push(Failure {
                trial: i,
                seed,
                index: mu,
                observed: Valuation::Finite(x),
                required: y,
                detail: Some(format!("subquotient {:?} of {:?}", sub.exponents(), cfg.shape.exponents())),
            });
        }
    }
    r.config = Some(cfg.clone());
    r.trials_run = cfg.trials;
    r.elapsed = start.elapsed();
    Ok(r)
}

/// One cell of the standard campaign: profile `(d, h, n)` at rank `n^d h + 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CampaignCell {
    pub d: u32,
    pub h: u64,
    pub n: u64,
    pub p: u64,
    pub t: usize,
}

impl CampaignCell {
    pub fn shape(&self) -> Result<QuotientShape> {
        let profile = crate::bounds::sigma_profile(self.d, self.h, self.n)?;
        crate::bounds::shape_from_profile(&profile, self.t)
    }

    /// A seed derived from the base seed and the cell parameters.
    pub fn seed(&self, base: u64) -> u64 {
        let key = (self.d as u64) << 48 | self.h << 40 | self.n << 32 | self.p;
        trial_seed(base, key)
    }

    pub fn config(&self, base_seed: u64, trials: usize) -> Result<TrialConfig> {
        Ok(TrialConfig::new(self.shape()?, Prime::new(self.p)?, self.seed(base_seed), trials))
    }
}

/// Cells for `d in 1..=3`, `h in 1..=2`, `n in 1..=5`, `p in {2, 3, 5}`
/// with rank at most `max_t`; returns the kept and the skipped cells.
pub fn standard_cells(max_t: usize) -> (Vec<CampaignCell>, Vec<CampaignCell>) {
    let mut kept = vec![];
    let mut skipped = vec![];
    for d in 1..=3u32 {
        for h in 1..=2u64 {
            for n in 1..=5u64 {
                let t = (n.pow(d) * h + 2) as usize;
                for p in [2u64, 3, 5] {
                    let cell = CampaignCell { d, h, n, p, t };
                    if t <= max_t {
                        kept.push(cell);
                    } else {
                        skipped.push(cell);
                    }
                }
            }
        }
    }
    (kept, skipped)
}
