//! Plain SVG plot of a Newton polygon against `B` and `T`.
//!
//! One unit in either direction is `SCALE` pixels; the y axis points up.
//! All plotted vertices have integer coordinates, so the pixel positions are
//! exact.

use hecke_slopes::bounds::PiecewiseBound;
use hecke_slopes::newton::NewtonPolygon;
use hecke_slopes::rational::{self, int, Rational};

pub const SCALE: i64 = 40;

fn bound_points(f: &PiecewiseBound, x_max: i64) -> Vec<(Rational, Rational)> {
    let end = int(x_max);
    let mut pts: Vec<(Rational, Rational)> = f
        .breakpoints()
        .iter()
        .zip(f.values())
        .filter(|(x, _)| **x <= end)
        .map(|(x, v)| (x.clone(), v.clone()))
        .collect();
    if pts.last().is_none_or(|(x, _)| *x < end) {
        pts.push((end.clone(), f.eval(&end)));
    }
    pts
}

fn pixel(q: &Rational) -> i64 {
    let scaled = q * int(SCALE);
    // breakpoints and values are integers here; floor is exact
    rational::floor(&scaled).try_into().expect("coordinate fits in i64")
}

fn polyline(points: &[(Rational, Rational)], height: i64, color: &str, id: &str) -> String {
    let coords: Vec<String> = points
        .iter()
        .map(|(x, y)| format!("{},{}", SCALE + pixel(x), height - SCALE - pixel(y)))
        .collect();
    format!(
        "  <polyline id=\"{id}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\" points=\"{}\"/>\n",
        coords.join(" ")
    )
}

pub fn render(np: &NewtonPolygon, b: &PiecewiseBound, t: &PiecewiseBound) -> String {
    let x_max = np.degree() as i64;
    let poly: Vec<(Rational, Rational)> = np
        .vertices()
        .iter()
        .map(|&(i, v)| (int(i as i64), int(v as i64)))
        .collect();
    let b_pts = bound_points(b, x_max);
    let t_pts = bound_points(t, x_max);
    let y_max = poly
        .iter()
        .chain(&b_pts)
        .chain(&t_pts)
        .map(|(_, y)| y.clone())
        .max()
        .unwrap_or_else(|| int(0));
    let width = (x_max + 2) * SCALE;
    let height = (rational::floor(&y_max).try_into().unwrap_or(0i64) + 2) * SCALE;
    let mut out = String::new();
    out.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">\n"
    ));
    out.push_str(&format!("  <desc>scale {SCALE}: one unit is {SCALE} px, y axis up, origin at ({SCALE},{})</desc>\n", height - SCALE));
    out.push_str(&polyline(&b_pts, height, "#1f77b4", "B"));
    out.push_str(&polyline(&t_pts, height, "#2ca02c", "T"));
    out.push_str(&polyline(&poly, height, "#d62728", "newton"));
    out.push_str("</svg>\n");
    out
}
