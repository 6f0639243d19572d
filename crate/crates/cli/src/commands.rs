use std::error::Error;
use std::fs;
use std::time::Instant;

use hecke_slopes::bounds::{
    b_function, closed_form_c, critical_slope_c, iq_bound_paper, projection_chord, n_alpha, shape_from_profile,
    sigma_profile, t_function, PiecewiseBound, SigmaProfile,
};
use hecke_slopes::harness::{layer_sizes, run_divisibility, run_layers, run_paired, TrialConfig, VerificationReport};
use hecke_slopes::linalg::{char_poly, quotient_shape};
use hecke_slopes::newton::newton_polygon;
use hecke_slopes::rational::{self, Rational};
use hecke_slopes::{IntegerMatrix, Prime, QuotientShape};
use serde_json::{json, Value};

use crate::{BoundsArgs, Format, Kind, Output, PolygonArgs, ShapeArgs, ShapeSource, VerifyArgs};

pub type CliResult<T> = Result<T, Box<dyn Error>>;

#[derive(Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    PropertyFailed,
}

fn usage(msg: impl Into<String>) -> Box<dyn Error> {
    msg.into().into()
}

fn read_matrix(path: &std::path::Path) -> CliResult<IntegerMatrix> {
    let text = fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(IntegerMatrix::from_json(&text)?)
}

fn emit(output: &Output, body: &str) -> CliResult<()> {
    match &output.out {
        Some(path) => fs::write(path, body).map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{body}");
            Ok(())
        }
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn fmt_q(q: &Rational) -> String {
    rational::format(q)
}

struct ResolvedShape {
    shape: QuotientShape,
    profile: Option<SigmaProfile>,
}

fn resolve_shape(src: &ShapeSource) -> CliResult<Option<ResolvedShape>> {
    if let Some(a) = &src.shape {
        if src.d.is_some() || src.h.is_some() {
            return Err(usage("give either --shape or --d/--h/--n, not both"));
        }
        let n = src.n.unwrap_or_else(|| a.iter().copied().max().unwrap_or(0));
        let mut a = a.clone();
        if let Some(t) = src.t {
            if t < a.len() {
                return Err(usage(format!("--t {t} is shorter than the shape")));
            }
            a.resize(t, 0);
        }
        return Ok(Some(ResolvedShape { shape: QuotientShape::from_unsorted(n, a)?, profile: None }));
    }
    match (src.d, src.h, src.n) {
        (Some(d), Some(h), Some(n)) => {
            let profile = sigma_profile(d, h, n)?;
            let t = src.t.unwrap_or(profile.total() as usize + 2);
            let shape = shape_from_profile(&profile, t)?;
            Ok(Some(ResolvedShape { shape, profile: Some(profile) }))
        }
        (None, None, None) if src.t.is_none() => Ok(None),
        _ => Err(usage("a sigma profile needs all of --d, --h and --n")),
    }
}

fn bound_rows(f: &PiecewiseBound) -> Value {
    serde_json::to_value(f.rows()).expect("serializable")
}

pub fn polygon(args: PolygonArgs) -> CliResult<Status> {
    let p = Prime::new(args.p)?;
    let m = read_matrix(&args.matrix)?;
    let cp = char_poly(&m);
    let np = newton_polygon(&cp, p);
    let resolved = resolve_shape(&args.source)?;
    let shape = match &resolved {
        Some(r) => r.shape.clone(),
        None => QuotientShape::new(0, vec![0; m.dim()])?,
    };
    let (b, t) = (b_function(&shape), t_function(&shape));
    let slopes = np.slope_multiplicities();
    let body = match args.output.format.unwrap_or(Format::Text) {
        Format::Text => {
            let vertices: Vec<String> = np.vertices().iter().map(|(i, v)| format!("({i},{v})")).collect();
            let mut s = format!(
                "p = {p}, degree {}\nslopes: {slopes}\nkernel multiplicity: {}\nvertices: {}\n",
                np.degree(),
                np.kernel_multiplicity(),
                vertices.join(" ")
            );
            if resolved.is_some() {
                s.push_str(&format!("critical slope c: {}\n", fmt_q(&critical_slope_c(&shape))));
            }
            s
        }
        Format::Json => {
            let mut v = json!({
                "p": p.get(),
                "degree": np.degree(),
                "char_poly": cp.coeffs().iter().map(ToString::to_string).collect::<Vec<_>>(),
                "vertices": np.vertices(),
                "segments": np.segments(),
                "slopes": slopes,
                "kernel_multiplicity": np.kernel_multiplicity(),
            });
            if let Some(r) = &resolved {
                v["shape"] = serde_json::to_value(&r.shape)?;
                v["critical_slope"] = json!(fmt_q(&critical_slope_c(&shape)));
                v["b"] = bound_rows(&b);
                v["t"] = bound_rows(&t);
            }
            pretty(&v)
        }
        Format::Csv => np.points_csv(),
        Format::Svg => crate::svg::render(&np, &b, &t),
    };
    emit(&args.output, &body)?;
    Ok(Status::Pass)
}

fn report_value(r: &VerificationReport) -> Value {
    let mut v = json!({
        "command": "verify",
        "property": r.property,
        "config": r.config,
        "totals": { "trials": r.trials_run, "failures": r.failures.len() },
        "failures": r.failures,
        "tables": { "slopes": r.slope_table },
    });
    if let Some(c) = &r.critical_slope {
        v["critical_slope"] = json!(fmt_q(c));
    }
    v
}

fn report_text(r: &VerificationReport) -> String {
    let mut s = format!(
        "{}: {} trials, {} failures\n",
        r.property,
        r.trials_run,
        r.failures.len()
    );
    if let Some(cfg) = &r.config {
        s.push_str(&format!(
            "config: p={} seed={} entry_bound={} shape n={} a={:?}\n",
            cfg.p,
            cfg.seed,
            cfg.entry_bound,
            cfg.shape.depth(),
            cfg.shape.exponents()
        ));
    }
    if let Some(c) = &r.critical_slope {
        s.push_str(&format!("critical slope c: {}\n", fmt_q(c)));
    }
    for f in &r.failures {
        s.push_str(&format!(
            "failure trial={} seed={} index={} observed={} required={}{}\n",
            f.trial,
            f.seed,
            f.index,
            f.observed,
            f.required,
            f.detail.as_deref().map(|d| format!(" ({d})")).unwrap_or_default()
        ));
    }
    s
}

pub fn verify(args: VerifyArgs) -> CliResult<Status> {
    let resolved = resolve_shape(&args.source)?.ok_or_else(|| usage("verify needs --shape or --d/--h/--n"))?;
    let p = Prime::new(args.p)?;
    let mut cfg = TrialConfig::new(resolved.shape, p, args.seed, args.trials).with_t_prime(args.t_prime);
    if let Some(e) = args.entry_bound {
        cfg = cfg.with_entry_bound(e);
    }
    if args.kind == Kind::Layers && args.t_prime.is_some() {
        return Err(usage("--t-prime does not apply to layers"));
    }
    let start = Instant::now();
    let report = match args.kind {
        Kind::Divisibility => run_divisibility(&cfg)?,
        Kind::Congruence => run_paired(&cfg)?.congruence,
        Kind::Slopes => run_paired(&cfg)?.slopes,
        Kind::Layers => run_layers(&cfg)?,
    };
    let body = match args.output.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&report_value(&report)),
        Format::Text => report_text(&report),
        other => return Err(usage(format!("verify writes json or text, not {other:?}"))),
    };
    emit(&args.output, &body)?;
    eprintln!(
        "# {}: {} trials, {} failures, elapsed {:.3}s",
        report.property,
        report.trials_run,
        report.failures.len(),
        start.elapsed().as_secs_f64()
    );
    Ok(status_of(&report))
}

fn status_of(report: &VerificationReport) -> Status {
    if report.passed() {
        Status::Pass
    } else {
        Status::PropertyFailed
    }
}

pub fn bounds(args: BoundsArgs) -> CliResult<Status> {
    // --d/--h without --n is enough for the depth threshold
    let threshold_only = args.source.n.is_none() && args.source.shape.is_none() && args.source.t.is_none();
    let resolved = if threshold_only { None } else { resolve_shape(&args.source)? };
    let alpha = args.alpha.as_deref().map(rational::parse).transpose()?;
    if alpha.as_ref().is_some_and(|a| *a < Rational::from_integer(0.into())) {
        return Err(usage("--alpha must be nonnegative"));
    }
    let mut v = json!({});
    if let Some(r) = &resolved {
        if let Some(prof) = &r.profile {
            v["sigma"] = json!(prof.sigma);
            v["closed_form"] = serde_json::to_value(closed_form_c(prof.d, prof.h, prof.n)?)?;
        }
        v["shape"] = serde_json::to_value(&r.shape)?;
        v["b"] = bound_rows(&b_function(&r.shape));
        v["t"] = bound_rows(&t_function(&r.shape));
        v["critical_slope"] = json!(fmt_q(&critical_slope_c(&r.shape)));
    }
    if let Some(a) = &alpha {
        if let (Some(d), Some(h)) = (args.source.d, args.source.h) {
            v["n_alpha"] = json!(n_alpha(a, d, h, args.max_n)?);
        }
    }
    if args.iq {
        let m = args.m.ok_or_else(|| usage("--iq needs --m"))?;
        let a = alpha.as_ref().ok_or_else(|| usage("--iq needs --alpha"))?;
        let (chord, depth) = projection_chord(m, a)?;
        let closed = iq_bound_paper(m, a);
        v["iq"] = json!({
            "m": m,
            "alpha": fmt_q(a),
            "closed_form_bound": closed.to_string(),
            "chord_bound": fmt_q(&chord),
            "depth_used": depth,
            "chord_exceeds_closed_form": chord > Rational::from_integer(closed),
        });
    }
    if v.as_object().is_some_and(|o| o.is_empty()) {
        return Err(usage("nothing to compute: give a shape or profile, --alpha with --d/--h, or --iq"));
    }
    let body = match args.output.format.unwrap_or(Format::Text) {
        Format::Json => pretty(&v),
        Format::Text => bounds_text(&v),
        Format::Csv => {
            let r = resolved.as_ref().ok_or_else(|| usage("csv output needs a shape or profile"))?;
            let mut s = String::from("function,breakpoint,value,slope\n");
            for (name, f) in [("B", b_function(&r.shape)), ("T", t_function(&r.shape))] {
                for row in f.rows() {
                    s.push_str(&format!("{name},{},{},{}\n", fmt_q(&row.breakpoint), fmt_q(&row.value), row.slope));
                }
            }
            s
        }
        Format::Svg => return Err(usage("bounds has no svg output")),
    };
    emit(&args.output, &body)?;
    Ok(Status::Pass)
}

fn bounds_text(v: &Value) -> String {
    let mut s = String::new();
    if let Some(sigma) = v.get("sigma") {
        s.push_str(&format!("sigma: {sigma}\n"));
    }
    if let Some(shape) = v.get("shape") {
        s.push_str(&format!("shape: n={} a={}\n", shape["n"], shape["a"]));
    }
    for key in ["b", "t"] {
        if let Some(rows) = v.get(key).and_then(Value::as_array) {
            let parts: Vec<String> = rows
                .iter()
                .map(|r| format!("{}->{} (slope {})", unquote(&r["breakpoint"]), unquote(&r["value"]), r["slope"]))
                .collect();
            s.push_str(&format!("{}: {}\n", key.to_uppercase(), parts.join(", ")));
        }
    }
    if let Some(c) = v.get("critical_slope") {
        s.push_str(&format!("critical slope c: {}\n", unquote(c)));
    }
    if let Some(cf) = v.get("closed_form") {
        s.push_str(&format!(
            "closed form: c1 = {}, min(c1 n^(1/(d+1)), n) = {}, stationary x = {}, Q there = {}\n",
            cf["c1"], cf["c_closed"], cf["stationary_x"], cf["q_at_stationary"]
        ));
    }
    if let Some(n) = v.get("n_alpha") {
        s.push_str(&format!("n(alpha): {n}\n"));
    }
    if let Some(iq) = v.get("iq") {
        s.push_str(&format!(
            "iq m={} alpha={}: closed-form bound {}, chord bound {} (depth {})\n",
            iq["m"],
            unquote(&iq["alpha"]),
            unquote(&iq["closed_form_bound"]),
            unquote(&iq["chord_bound"]),
            iq["depth_used"]
        ));
    }
    s
}

fn unquote(v: &Value) -> String {
    v.as_str().map(str::to_owned).unwrap_or_else(|| v.to_string())
}

pub fn shape(args: ShapeArgs) -> CliResult<Status> {
    let shape = match &args.matrix {
        Some(path) => {
            if args.source.shape.is_some() || args.source.d.is_some() {
                return Err(usage("give either --matrix or a profile"));
            }
            let p = Prime::new(args.p.ok_or_else(|| usage("--matrix needs --p"))?)?;
            let n = args.source.n.ok_or_else(|| usage("--matrix needs --n"))?;
            quotient_shape(&read_matrix(path)?, p, n)?
        }
        None => {
            if args.source.d.is_none() {
                return Err(usage("shape needs --matrix/--p/--n or --d/--h/--n/--t"));
            }
            resolve_shape(&args.source)?.expect("profile given").shape
        }
    };
    let v = json!({
        "n": shape.depth(),
        "a": shape.exponents(),
        "layers": layer_sizes(&shape),
        "critical_slope": fmt_q(&critical_slope_c(&shape)),
    });
    let body = match args.output.format.unwrap_or(Format::Text) {
        Format::Json => pretty(&v),
        Format::Text => format!(
            "n = {}\na = {:?}\nlayers = {:?}\ncritical slope c: {}\n",
            shape.depth(),
            shape.exponents(),
            layer_sizes(&shape),
            fmt_q(&critical_slope_c(&shape))
        ),
        other => return Err(usage(format!("shape writes json or text, not {other:?}"))),
    };
    emit(&args.output, &body)?;
    Ok(Status::Pass)
}
