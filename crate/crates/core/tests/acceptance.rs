//! Acceptance suite: one pass/fail line per criterion, nonzero exit on any failure.
//!
//! Runs as a plain binary (`harness = false`) so the lines reach the terminal
//! under `cargo test`.

use std::time::{Duration, Instant};

use hecke_slopes::bounds::{
    b_function, critical_slope_c, iq_bound_paper, projection_bound, projection_chord, max_chord_above, n_alpha,
    shape_from_profile, sigma_profile, threshold_shape, Chord,
};
use hecke_slopes::harness::{
    gen_matrix, layer_sizes, perturb_matrix, run_layers, run_paired, standard_cells, verify_coeff_congruence,
    verify_slope_match, TrialConfig,
};
use hecke_slopes::linalg::{char_poly, quotient_shape, IntegerMatrix};
use hecke_slopes::newton::{newton_polygon, SlopeCount};
use hecke_slopes::rational::{self, int, ratio, Rational};
use hecke_slopes::symmetric::{
    hecke_divisibility_check, phi_equivariance_defect, power_congruence_check, tensor_w_basis, tensor_w_exponents,
    tensor_w_membership, w_basis, y_power_identity_check, HomogPoly, Mat2, TensorPolynomial,
};
use hecke_slopes::{Prime, QuotientShape};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BASE_SEED: u64 = 0x5EED_2024;
const TRIALS: usize = 200;
const MAX_RANK: usize = 40;
const CAMPAIGN_BUDGET: Duration = Duration::from_secs(300);

struct Outcome {
    pass: bool,
    summary: String,
}

fn outcome(pass: bool, summary: impl Into<String>) -> Outcome {
    Outcome { pass, summary: summary.into() }
}

fn pr(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

struct CampaignTotals {
    cells: usize,
    skipped: usize,
    divisibility: usize,
    congruence: usize,
    slopes: usize,
    elapsed: Duration,
}

fn standard_campaign() -> CampaignTotals {
    let start = Instant::now();
    let (cells, skipped) = standard_cells(MAX_RANK);
    let mut totals = CampaignTotals {
        cells: cells.len(),
        skipped: skipped.len(),
        divisibility: 0,
        congruence: 0,
        slopes: 0,
        elapsed: Duration::ZERO,
    };
    for cell in &cells {
        let cfg = cell.config(BASE_SEED, TRIALS).unwrap();
        let r = run_paired(&cfg).unwrap();
        for (name, rep, count) in [
            ("divisibility", &r.divisibility, &mut totals.divisibility),
            ("congruence", &r.congruence, &mut totals.congruence),
            ("slopes", &r.slopes, &mut totals.slopes),
        ] {
            *count += rep.failures.len();
            for f in rep.failures.iter().take(3) {
                println!("    {name} failure in cell {cell:?}: {}", serde_json::to_string(f).unwrap());
            }
        }
    }
    totals.elapsed = start.elapsed();
    totals
}

fn criterion_1(c: &CampaignTotals) -> Outcome {
    outcome(
        c.divisibility == 0 && c.elapsed < CAMPAIGN_BUDGET,
        format!(
            "divisibility v_p(d_s) >= B(s): {} cells x {TRIALS} trials ({} cells over rank {MAX_RANK} skipped), {} failures, paired campaign {:.1}s (budget {}s)",
            c.cells,
            c.skipped,
            c.divisibility,
            c.elapsed.as_secs_f64(),
            CAMPAIGN_BUDGET.as_secs()
        ),
    )
}

fn criterion_2(c: &CampaignTotals) -> Outcome {
    outcome(
        c.congruence == 0,
        format!("coefficient congruence mod p^T(s): {} cells x {TRIALS} paired trials, {} failures", c.cells, c.congruence),
    )
}

fn criterion_3(c: &CampaignTotals) -> Outcome {
    // 1x1, n = 1, a = [1]: c = 1/2, and [p^2], [p] satisfy both lattice
    // constraints while having slopes 2 and 1.
    let shape = QuotientShape::new(1, vec![1]).unwrap();
    let p = pr(3);
    let u = IntegerMatrix::from_i64_rows(&[[9]]).unwrap();
    let v = IntegerMatrix::from_i64_rows(&[[3]]).unwrap();
    let c_value = critical_slope_c(&shape);
    let cong = verify_coeff_congruence(&u, &v, &shape, p);
    let slopes = verify_slope_match(&u, &v, &shape, p);
    let row = &slopes.slope_table[0];
    let differ_above_c = row
        .u
        .slopes()
        .chain(row.u_prime.as_ref().unwrap().slopes())
        .any(|s| *s >= c_value && row.u.get(s) != row.u_prime.as_ref().unwrap().get(s));
    let engineered = cong.passed() && slopes.passed() && differ_above_c;
    outcome(
        c.slopes == 0 && engineered,
        format!(
            "slope counts agree below c: {} sub-c mismatches; engineered pair [9] vs [3] at p=3 (c = {}) has slopes {{{}}} vs {{{}}}, differing above c: {}",
            c.slopes,
            rational::format(&c_value),
            row.u,
            row.u_prime.as_ref().unwrap(),
            differ_above_c
        ),
    )
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(BASE_SEED ^ 4);
    let mut bad = 0;
    for _ in 0..100 {
        let p = pr([2u64, 3, 5][rng.gen_range(0..3)]);
        let t = rng.gen_range(1..=8);
        let vals: Vec<u64> = (0..t).map(|_| rng.gen_range(0..=6)).collect();
        let m = IntegerMatrix::from_fn(t, |i, j| {
            if i == j {
                let mut unit = rng.gen_range(1i64..=50);
                while unit % p.get() as i64 == 0 {
                    unit += 1;
                }
                p.pow(vals[i]) * BigInt::from(unit)
            } else if i < j {
                BigInt::from(rng.gen_range(-1000i64..=1000))
            } else {
                BigInt::from(0)
            }
        });
        // conservation and convexity are asserted inside newton_polygon itself
        let np = newton_polygon(&char_poly(&m), p);
        let expected = SlopeCount::from_slopes(vals.iter().map(|&v| int(v as i64)));
        if np.slope_multiplicities() != expected || np.kernel_multiplicity() != 0 {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!("triangular Newton polygon oracle: 100 matrices, {bad} slope multisets differing from the diagonal valuations; conservation asserted in-library on every polygon"),
    )
}

/// Random product of elementary column operations.
fn scramble(rng: &mut ChaCha8Rng, m: &IntegerMatrix) -> IntegerMatrix {
    let t = m.dim();
    let mut u = IntegerMatrix::identity(t);
    for _ in 0..3 * t {
        let (i, j) = (rng.gen_range(0..t), rng.gen_range(0..t));
        if i != j {
            let k = BigInt::from(rng.gen_range(-2i64..=2));
            for r in 0..t {
                let v = u.get(r, j) + &k * u.get(r, i);
                u.set(r, j, v);
            }
        }
    }
    m.mul(&u)
}

fn criterion_5() -> Outcome {
    let mut checked = 0;
    let mut bad = 0;
    for p in [2u64, 3, 5] {
        for n in 0..=6u64 {
            for k in n as usize..=20 {
                let shape = quotient_shape(&w_basis(k, n, pr(p)), pr(p), n).unwrap();
                let mut expected: Vec<u64> = (1..=n).rev().collect();
                expected.resize(k + 1, 0);
                checked += 1;
                if shape.exponents() != expected.as_slice() {
                    bad += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(BASE_SEED ^ 5);
    let mut tensor_checked = 0;
    for d in 1..=3usize {
        for n in 1..=4u64 {
            for h in 1..=2u64 {
                let p = pr(3);
                let degrees = vec![n as usize; d];
                // h copies, then a unimodular change of generators
                let one = tensor_w_basis(&degrees, n, p);
                let diag: Vec<BigInt> = (0..h).flat_map(|_| (0..one.dim()).map(|i| one.get(i, i).clone())).collect();
                let basis = IntegerMatrix::diagonal(diag);
                let basis = if basis.dim() <= 64 { scramble(&mut rng, &basis) } else { basis };
                let shape = quotient_shape(&basis, p, n).unwrap();
                let profile = sigma_profile(d as u32, h, n).unwrap();
                tensor_checked += 1;
                for i in 1..=n {
                    let count = shape.exponents().iter().filter(|&&a| a == n - i + 1).count() as u64;
                    if count != profile.sigma[i as usize - 1] {
                        bad += 1;
                    }
                }
            }
        }
    }
    outcome(
        bad == 0,
        format!("quotient structure: {checked} (k, n, p) graded pieces give [n, ..., 1, 0, ...]; {tensor_checked} tensor lattices (d <= 3, n <= 4, h <= 2) reproduce sigma_i by SNF; {bad} mismatches"),
    )
}

fn random_m(rng: &mut ChaCha8Rng, p: Prime) -> Mat2 {
    let q = p.get() as i64;
    Mat2::from_i64(
        rng.gen_range(-20..=20),
        rng.gen_range(-20..=20),
        q * rng.gen_range(-5..=5),
        1 + q * rng.gen_range(-5..=5),
    )
}

fn random_tensor(rng: &mut ChaCha8Rng, degrees: &[usize], bound: i64) -> TensorPolynomial {
    let len: usize = degrees.iter().map(|k| k + 1).product();
    TensorPolynomial::new(degrees.to_vec(), 0, (0..len).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect()).unwrap()
}

fn random_w_element(rng: &mut ChaCha8Rng, degrees: &[usize], n: u64, p: Prime, twist: u64) -> TensorPolynomial {
    let coeffs = tensor_w_exponents(degrees, n)
        .into_iter()
        .map(|e| p.pow(e) * BigInt::from(rng.gen_range(-30i64..=30)))
        .collect();
    TensorPolynomial::new(degrees.to_vec(), twist, coeffs).unwrap()
}

fn criterion_6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(BASE_SEED ^ 6);
    let mut defect_bad = 0;
    for _ in 0..1000 {
        let p = pr([3u64, 5][rng.gen_range(0..2)]);
        let n = rng.gen_range(1..=3);
        let arity = rng.gen_range(1..=2);
        let degrees: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..=if arity == 1 { 10 } else { 4 })).collect();
        let f = random_tensor(&mut rng, &degrees, 50);
        let i0 = rng.gen_range(0..arity);
        let g = random_m(&mut rng, p);
        let defect = phi_equivariance_defect(&f, &g, n, i0, p).unwrap();
        if !tensor_w_membership(&defect, n, p) {
            defect_bad += 1;
        }
    }
    let mut identity_bad = 0;
    for _ in 0..1000 {
        let p = pr([3u64, 5][rng.gen_range(0..2)]);
        let q = p.get() as i64;
        let n = rng.gen_range(1..=3);
        let b = BigInt::from(rng.gen_range(-100i64..=100));
        let d = BigInt::from(1 + q * rng.gen_range(-30i64..=30));
        if !y_power_identity_check(&b, &d, n, p).unwrap() {
            identity_bad += 1;
        }
    }
    let mut power_bad = 0;
    for _ in 0..500 {
        let p = pr([3u64, 5][rng.gen_range(0..2)]);
        let n = rng.gen_range(1..=3);
        let s = rng.gen_range(0..=2);
        let k = rng.gen_range(0..=3);
        let f = HomogPoly::new((0..=k).map(|_| BigInt::from(rng.gen_range(-9i64..=9))).collect()).unwrap();
        let w = random_w_element(&mut rng, &[k], n, p, 0);
        let f_prime = HomogPoly::new(f.coeffs().iter().zip(w.coeffs()).map(|(a, b)| a + b).collect()).unwrap();
        if !power_congruence_check(&f, &f_prime, n, s, p).unwrap() {
            power_bad += 1;
        }
    }
    outcome(
        defect_bad + identity_bad + power_bad == 0,
        format!("weight-shift map: 1000 defects phi(gF) - g phi(F) in W^n ({defect_bad} failures); 1000 y-power identities ({identity_bad} failures); 500 power congruences ({power_bad} failures)"),
    )
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(BASE_SEED ^ 7);
    let mut bad = 0;
    let mut twists = [0usize; 3];
    for _ in 0..1000 {
        let p = pr([2u64, 3, 5][rng.gen_range(0..3)]);
        let q = p.get() as i64;
        let n = rng.gen_range(0..=4);
        let twist = rng.gen_range(0..=2u64);
        twists[twist as usize] += 1;
        let arity = rng.gen_range(1..=2);
        let degrees: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..=if arity == 1 { 10 } else { 5 })).collect();
        let f = random_w_element(&mut rng, &degrees, n, p, twist);
        let g = if rng.gen_bool(0.3) {
            // a Hecke representative [[p, u], [0, 1]]
            Mat2::hecke_representative(p, BigInt::from(rng.gen_range(0..q)))
        } else {
            Mat2::from_i64(q * rng.gen_range(-6..=6), rng.gen_range(-20..=20), q * rng.gen_range(-6..=6), rng.gen_range(-20..=20))
        };
        if !hecke_divisibility_check(&g, &f, n, p).unwrap() {
            bad += 1;
        }
    }
    outcome(
        bad == 0,
        format!("Hecke divisibility by p^(n + w v_p(det)): 1000 instances (twist w = 0/1/2: {}/{}/{}), {bad} failures", twists[0], twists[1], twists[2]),
    )
}

fn criterion_8() -> Outcome {
    let parents: [&[u64]; 8] = [&[1], &[2, 1], &[2, 2], &[3, 2, 1], &[3, 3, 1, 0], &[4, 3, 2, 1], &[4, 4, 2, 2], &[5, 4, 3, 2, 1]];
    let mut bad = 0;
    let mut runs = 0;
    for (i, a) in parents.iter().enumerate() {
        for p in [2u64, 3] {
            let shape = QuotientShape::new(a[0], a.to_vec()).unwrap();
            let cfg = TrialConfig::new(shape, pr(p), BASE_SEED ^ (80 + i as u64) ^ (p << 8), 500);
            let r = run_layers(&cfg).unwrap();
            bad += r.failures.len();
            runs += 1;
        }
    }
    outcome(
        bad == 0,
        format!("subquotient layers: {runs} parent/prime pairs (parents up to [5,4,3,2,1]) x 500 subquotients, {bad} layer violations"),
    )
}

fn criterion_9() -> Outcome {
    let mut notes = vec![];
    let mut ok = true;
    let mut check = |cond: bool, what: String| {
        if !cond {
            ok = false;
        }
        notes.push(format!("{what}:{}", if cond { "ok" } else { "FAIL" }));
    };

    check(sigma_profile(2, 1, 3).unwrap().sigma == vec![1, 3, 5], "sigma(2,1,3)=[1,3,5]".into());

    let mut breakpoints_ok = true;
    for d in 1..=3u32 {
        for h in 1..=3u64 {
            for n in 1..=6u64 {
                let prof = sigma_profile(d, h, n).unwrap();
                let b = b_function(&shape_from_profile(&prof, prof.total() as usize).unwrap());
                let expected: Vec<Rational> = (0..=n).map(|j| int((j.pow(d) * h) as i64)).collect();
                breakpoints_ok &= b.breakpoints() == expected.as_slice();
            }
        }
    }
    check(breakpoints_ok, "B breakpoints at j^d h".into());

    // independent oracle: T(x)/x at integer x plus the terminal slope
    let oracle_c = |s: &QuotientShape| -> Rational {
        let b = s.complements();
        let n = s.depth() as i64;
        let mut best = int(n);
        let mut acc = 0i64;
        for x in 1..=(b.len() as i64 + 2) {
            let r = ratio(s.half_depth() as i64 + acc, x);
            if r < best {
                best = r;
            }
            acc += b.get(x as usize - 1).map(|&v| v as i64).unwrap_or(n);
        }
        best
    };
    let oracle_n = (1..=50u64).find(|&n| int(1) < oracle_c(&threshold_shape(1, 1, n).unwrap())).unwrap();
    let searched = n_alpha(&int(1), 1, 1, 1000).unwrap();
    check(searched == oracle_n && oracle_n == 5, format!("n_alpha(1,1,1)={searched} oracle={oracle_n}"));

    check(iq_bound_paper(2, &int(1)) == BigInt::from(24), "iq_bound_paper(2,1)=24".into());

    let chord = max_chord_above(&projection_bound(2, 5).unwrap(), &int(1));
    check(chord == Chord::Finite(int(10)), format!("chord(m=2,alpha=1)={chord}"));

    let mut findings = vec![];
    for m in 1..=10u64 {
        for alpha in [int(0), ratio(1, 2), int(1), int(2), int(5)] {
            let (len, depth) = projection_chord(m, &alpha).unwrap();
            let closed = iq_bound_paper(m, &alpha);
            if len > Rational::from_integer(closed.clone()) {
                findings.push(serde_json::json!({
                    "finding": "projection bound exceeds closed-form upper bound",
                    "m": m,
                    "alpha": rational::format(&alpha),
                    "chord": rational::format(&len),
                    "closed_form": closed.to_string(),
                    "depth_used": depth,
                }));
            }
        }
    }
    for f in &findings {
        println!("    FINDING {f}");
    }
    // Violations of chord <= closed form are reported, not failed: the
    // closed form is checked for consistency, the exact chord is the reference.
    notes.push(format!(
        "chord <= closed form in {} of 50 (m, alpha) pairs, {} violations emitted as FINDING lines",
        50 - findings.len(),
        findings.len()
    ));

    outcome(ok, format!("bound computations: {}", notes.join(", ")))
}

fn criterion_10() -> Outcome {
    let cell_cfg = standard_cells(MAX_RANK).0[17].config(BASE_SEED, 50).unwrap();
    let a = run_paired(&cell_cfg).unwrap();
    let b = run_paired(&cell_cfg).unwrap();
    let paired_same = a.divisibility.to_json() == b.divisibility.to_json()
        && a.congruence.to_json() == b.congruence.to_json()
        && a.slopes.to_json() == b.slopes.to_json();
    let layer_cfg = TrialConfig::new(QuotientShape::new(3, vec![3, 2, 1]).unwrap(), pr(3), 7, 200);
    let layers_same = run_layers(&layer_cfg).unwrap().to_json() == run_layers(&layer_cfg).unwrap().to_json();
    let shape = cell_cfg.shape.clone();
    let u = gen_matrix(&shape, cell_cfg.p, 99, 6);
    let perturb_same = perturb_matrix(&u, &shape, cell_cfg.p, 100, None, 6).unwrap()
        == perturb_matrix(&gen_matrix(&shape, cell_cfg.p, 99, 6), &shape, cell_cfg.p, 100, None, 6).unwrap();
    let other = run_paired(&TrialConfig { seed: cell_cfg.seed + 1, ..cell_cfg.clone() }).unwrap();
    let seed_matters = other.slopes.to_json() != a.slopes.to_json();
    outcome(
        paired_same && layers_same && perturb_same && seed_matters,
        format!(
            "reproducibility: paired reports identical {paired_same}, layer reports identical {layers_same}, generators identical {perturb_same}, different seed changes the body {seed_matters}; layer sizes of [3,2,1] = {:?}",
            layer_sizes(&layer_cfg.shape)
        ),
    )
}

fn main() {
    let campaign = standard_campaign();
    let results = [
        criterion_1(&campaign),
        criterion_2(&campaign),
        criterion_3(&campaign),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        criterion_8(),
        criterion_9(),
        criterion_10(),
    ];
    let mut failed = 0;
    for (i, r) in results.iter().enumerate() {
        println!("criterion {:>2} [{}] {}", i + 1, if r.pass { "PASS" } else { "FAIL" }, r.summary);
        failed += usize::from(!r.pass);
    }
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
