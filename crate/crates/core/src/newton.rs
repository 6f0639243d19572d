//! Newton polygons of characteristic polynomials and their slope multiplicities.
//!
//! Coefficients are indexed by descending power: `d_s` is plotted at
//! `(s, v_p(d_s))`. With `d_0 = 1` the polygon starts at the origin and each
//! segment slope is the valuation of that many roots (no sign flip).
//! Trailing zero coefficients are split off as eigenvalue zero, i.e. roots of
//! infinite slope, and counted in `kernel_multiplicity`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::linalg::CharPolyCoeffs;
use crate::rational::{self, Rational};
use crate::valuation::{vp, Prime, Valuation};

/// A point `(index, valuation)`.
pub type PlotPoint = (usize, u64);

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Segment {
    pub start: PlotPoint,
    pub end: PlotPoint,
    #[serde(with = "rational::serde_text")]
    pub slope: Rational,
    pub length: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NewtonPolygon {
    degree: usize,
    points: Vec<PlotPoint>,
    vertices: Vec<PlotPoint>,
    segments: Vec<Segment>,
    kernel_multiplicity: usize,
}

impl NewtonPolygon {
    pub fn degree(&self) -> usize {
        self.degree
    }

    /// All plotted points, one per nonzero coefficient.
    pub fn points(&self) -> &[PlotPoint] {
        &self.points
    }

    pub fn vertices(&self) -> &[PlotPoint] {
        &self.vertices
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Number of roots equal to zero (trailing zero coefficients).
    pub fn kernel_multiplicity(&self) -> usize {
        self.kernel_multiplicity
    }

    /// Largest index with a nonzero coefficient.
    pub fn last_index(&self) -> usize {
        self.degree - self.kernel_multiplicity
    }

    /// Height of the polygon at `x`, for `0 <= x <= last_index()`.
    pub fn height_at(&self, x: &Rational) -> Option<Rational> {
        let first = self.vertices.first()?;
        if *x < rational::int(first.0 as i64) || *x > rational::int(self.last_index() as i64) {
            return None;
        }
        if self.segments.is_empty() {
            return Some(rational::int(first.1 as i64));
        }
        let seg = self
            .segments
            .iter()
            .find(|s| *x <= rational::int(s.end.0 as i64))
            .expect("x within range");
        Some(rational::int(seg.start.1 as i64) + &seg.slope * (x - rational::int(seg.start.0 as i64)))
    }

    pub fn slope_multiplicities(&self) -> SlopeCount {
        slope_multiplicities(self)
    }

    pub fn count_slope(&self, alpha: &Rational) -> usize {
        count_slope(self, alpha)
    }

    /// `index,valuation` rows for every plotted point.
    pub fn points_csv(&self) -> String {
        csv(&self.points)
    }

    /// `index,valuation` rows for the polygon vertices.
    pub fn vertices_csv(&self) -> String {
        csv(&self.vertices)
    }
}

fn csv(points: &[PlotPoint]) -> String {
    let mut out = String::from("index,valuation\n");
    for (i, v) in points {
        out.push_str(&format!("{i},{v}\n"));
    }
    out
}

/// Cross product of `(a - o)` and `(b - o)`.
fn cross(o: PlotPoint, a: PlotPoint, b: PlotPoint) -> i128 {
    let (ox, oy) = (o.0 as i128, o.1 as i128);
    (a.0 as i128 - ox) * (b.1 as i128 - oy) - (a.1 as i128 - oy) * (b.0 as i128 - ox)
}

/// Newton polygon of a monic characteristic polynomial.
pub fn newton_polygon(coeffs: &CharPolyCoeffs, p: Prime) -> NewtonPolygon {
    newton_polygon_of(coeffs.coeffs(), p)
}

/// Newton polygon of `sum d_s X^(t-s)` for any coefficient list with `d_0 != 0`.
///
/// # Panics
/// If `d` is empty or `d_0 == 0`.
pub fn newton_polygon_of(d: &[BigInt], p: Prime) -> NewtonPolygon {
    assert!(d.first().is_some_and(|c| !c.is_zero()), "leading coefficient must be nonzero");
    let degree = d.len() - 1;
    let points: Vec<PlotPoint> = d
        .iter()
        .enumerate()
        .filter_map(|(i, c)| match vp(c, p) {
            Valuation::Finite(v) => Some((i, v)),
            Valuation::Infinity => None,
        })
        .collect();
    let last = points.last().expect("d_0 is plotted").0;

    // monotone chain, lower hull; collinear points are dropped
    let mut hull: Vec<PlotPoint> = Vec::with_capacity(points.len());
    for &pt in &points {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], pt) <= 0 {
            hull.pop();
        }
        hull.push(pt);
    }

    let segments: Vec<Segment> = hull
        .windows(2)
        .map(|w| {
            let (a, b) = (w[0], w[1]);
            Segment {
                start: a,
                end: b,
                slope: Rational::new(
                    BigInt::from(b.1 as i128 - a.1 as i128),
                    BigInt::from(b.0 - a.0),
                ),
                length: b.0 - a.0,
            }
        })
        .collect();

    let np = NewtonPolygon {
        degree,
        points,
        vertices: hull,
        segments,
        kernel_multiplicity: degree - last,
    };
    check_invariants(&np);
    np
}

/// Conservation, convexity and hull-below-points; run on every construction.
fn check_invariants(np: &NewtonPolygon) {
    let first = np.vertices[0];
    let last = *np.vertices.last().unwrap();
    let total: Rational = np
        .segments
        .iter()
        .map(|s| &s.slope * rational::int(s.length as i64))
        .fold(Rational::zero(), |acc, x| acc + x);
    assert_eq!(
        total,
        rational::int(last.1 as i64) - rational::int(first.1 as i64),
        "slope conservation violated"
    );
    assert!(
        np.segments.windows(2).all(|w| w[0].slope < w[1].slope),
        "Newton polygon slopes must strictly increase"
    );
    let lengths: usize = np.segments.iter().map(|s| s.length).sum();
    assert_eq!(lengths + np.kernel_multiplicity + first.0, np.degree);
    for &(i, v) in &np.points {
        let h = np.height_at(&rational::int(i as i64)).expect("plotted point in range");
        assert!(rational::int(v as i64) >= h, "plotted point below the hull");
    }
}

/// Multiplicity of each finite slope.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SlopeCount(BTreeMap<Rational, usize>);

impl SlopeCount {
    pub fn get(&self, slope: &Rational) -> usize {
        self.0.get(slope).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Rational, usize)> {
        self.0.iter().map(|(k, v)| (k, *v))
    }

    pub fn slopes(&self) -> impl Iterator<Item = &Rational> {
        self.0.keys()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Builds a count from a multiset of slopes.
    pub fn from_slopes<I: IntoIterator<Item = Rational>>(slopes: I) -> Self {
        let mut m = BTreeMap::new();
        for s in slopes {
            *m.entry(s).or_insert(0) += 1;
        }
        SlopeCount(m)
    }
}

impl fmt::Display for SlopeCount {
    /// `slope:mult` pairs separated by spaces; integral slopes print without `/1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, m)| {
                if s.is_integer() {
                    format!("{}:{m}", s.numer())
                } else {
                    format!("{}:{m}", s)
                }
            })
            .collect();
        f.write_str(&parts.join(" "))
    }
}

impl Serialize for SlopeCount {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = s.serialize_map(Some(self.0.len()))?;
        for (k, v) in &self.0 {
            map.serialize_entry(&rational::format(k), v)?;
        }
        map.end()
    }
}

pub fn slope_multiplicities(np: &NewtonPolygon) -> SlopeCount {
    let mut m = BTreeMap::new();
    for s in &np.segments {
        *m.entry(s.slope.clone()).or_insert(0) += s.length;
    }
    SlopeCount(m)
}

pub fn count_slope(np: &NewtonPolygon, alpha: &Rational) -> usize {
    np.segments
        .iter()
        .filter(|s| &s.slope == alpha)
        .map(|s| s.length)
        .sum()
}

/// True iff `v_p(d_s) >= bound(s)` for all plotted points, i.e. the polygon
/// lies on or above `bound` at every index.
pub fn lies_above(np: &NewtonPolygon, bound: impl Fn(usize) -> Rational) -> bool {
    np.points
        .iter()
        .all(|&(i, v)| rational::int(v as i64) >= bound(i))
}
