//! Convex summation regions inside `[1,U] x [1,V]` and bounded weight
//! sequences.
//!
//! A region is the set of lattice points inside (or on) a convex polygon
//! with rational vertices contained in the closed box `[0,U] x [0,V]`,
//! intersected with `[1,U] x [1,V]`. Convexity guarantees that the members
//! in each column u form one contiguous run of v values, reported as a
//! half-open interval `(X_u, Y_u]` (and symmetrically per row), which is
//! exactly the slicing the sum evaluators iterate along.

use crate::error::{Error, Result};
use crate::rng::SplitMix64;
use num_complex::Complex64;
use num_rational::Rational64;
use num_traits::Zero;

type Vertex = (Rational64, Rational64);

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Rectangle,
    Polygon(Vec<Vertex>),
}

/// Convex lattice region in `[1,U] x [1,V]`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexRegion {
    u_max: u64,
    v_max: u64,
    shape: Shape,
}

impl ConvexRegion {
    /// The full rectangle `[1,U] x [1,V]`.
    pub fn rectangle(u_max: u64, v_max: u64) -> Result<Self> {
        if u_max < 1 || v_max < 1 {
            return Err(Error::BadBounds { u: u_max, v: v_max });
        }
        Ok(ConvexRegion { u_max, v_max, shape: Shape::Rectangle })
    }

    /// Region of lattice points inside a convex polygon. Vertices are given
    /// counter-clockwise with rational coordinates and must stay inside the
    /// closed box `[0, u_max] x [0, v_max]`.
    pub fn from_polygon(vertices: Vec<Vertex>, u_max: u64, v_max: u64) -> Result<Self> {
        if u_max < 1 || v_max < 1 {
            return Err(Error::BadBounds { u: u_max, v: v_max });
        }
        if vertices.len() < 3 {
            return Err(Error::NotConvex(format!(
                "need at least 3 vertices, got {}",
                vertices.len()
            )));
        }
        let zero = Rational64::zero();
        let ubound = Rational64::from_integer(u_max as i64);
        let vbound = Rational64::from_integer(v_max as i64);
        for &(x, y) in &vertices {
            if x < zero || x > ubound || y < zero || y > vbound {
                return Err(Error::OutOfBox(format!("vertex ({x}, {y})")));
            }
        }
        let n = vertices.len();
        let mut has_positive = false;
        for i in 0..n {
            let a = vertices[i];
            let b = vertices[(i + 1) % n];
            let c = vertices[(i + 2) % n];
            let cr = cross(a, b, c);
            if cr < zero {
                return Err(Error::NotConvex(format!(
                    "clockwise turn at vertex ({}, {})",
                    b.0, b.1
                )));
            }
            if cr > zero {
                has_positive = true;
            }
        }
        // all-collinear vertex lists degenerate to a segment; still convex
        let _ = has_positive;
        Ok(ConvexRegion { u_max, v_max, shape: Shape::Polygon(vertices) })
    }

    pub fn u_max(&self) -> u64 {
        self.u_max
    }

    pub fn v_max(&self) -> u64 {
        self.v_max
    }

    pub fn is_rectangle(&self) -> bool {
        matches!(self.shape, Shape::Rectangle)
    }

    /// Member v's of column u as a half-open interval `(X_u, Y_u]`;
    /// empty columns are encoded `X_u = Y_u`.
    pub fn column_interval(&self, u: u64) -> (u64, u64) {
        if u < 1 || u > self.u_max {
            return (0, 0);
        }
        match &self.shape {
            Shape::Rectangle => (0, self.v_max),
            Shape::Polygon(vs) => {
                match line_range(vs, Rational64::from_integer(u as i64), true) {
                    None => (0, 0),
                    Some((lo, hi)) => clamp_interval(lo, hi, self.v_max),
                }
            }
        }
    }

    /// Member u's of row v as a half-open interval, mirror of
    /// [`ConvexRegion::column_interval`].
    pub fn row_interval(&self, v: u64) -> (u64, u64) {
        if v < 1 || v > self.v_max {
            return (0, 0);
        }
        match &self.shape {
            Shape::Rectangle => (0, self.u_max),
            Shape::Polygon(vs) => {
                match line_range(vs, Rational64::from_integer(v as i64), false) {
                    None => (0, 0),
                    Some((lo, hi)) => clamp_interval(lo, hi, self.u_max),
                }
            }
        }
    }

    /// Membership by direct point-in-polygon test (used by the consistency
    /// suites; the evaluators use the interval views).
    pub fn contains(&self, u: u64, v: u64) -> bool {
        if u < 1 || u > self.u_max || v < 1 || v > self.v_max {
            return false;
        }
        match &self.shape {
            Shape::Rectangle => true,
            Shape::Polygon(vs) => {
                let p = (
                    Rational64::from_integer(u as i64),
                    Rational64::from_integer(v as i64),
                );
                let zero = Rational64::zero();
                let n = vs.len();
                (0..n).all(|i| cross(vs[i], vs[(i + 1) % n], p) >= zero)
            }
        }
    }

    /// Total number of lattice members.
    pub fn lattice_count(&self) -> u64 {
        (1..=self.u_max)
            .map(|u| {
                let (x, y) = self.column_interval(u);
                y - x
            })
            .sum()
    }

    pub fn is_empty(&self) -> bool {
        self.lattice_count() == 0
    }
}

fn cross(a: Vertex, b: Vertex, c: Vertex) -> Rational64 {
    (b.0 - a.0) * (c.1 - a.1) - (b.1 - a.1) * (c.0 - a.0)
}

/// Intersection of the polygon with the line `x = t` (columns = true) or
/// `y = t` (columns = false), as a rational coordinate range.
fn line_range(vs: &[Vertex], t: Rational64, columns: bool) -> Option<(Rational64, Rational64)> {
    let coord = |p: &Vertex| if columns { p.0 } else { p.1 };
    let other = |p: &Vertex| if columns { p.1 } else { p.0 };
    let mut lo: Option<Rational64> = None;
    let mut hi: Option<Rational64> = None;
    let mut take = |y: Rational64| {
        lo = Some(match lo {
            None => y,
            Some(cur) => cur.min(y),
        });
        hi = Some(match hi {
            None => y,
            Some(cur) => cur.max(y),
        });
    };
    let n = vs.len();
    for i in 0..n {
        let a = &vs[i];
        let b = &vs[(i + 1) % n];
        let (ca, cb) = (coord(a), coord(b));
        if ca.min(cb) > t || ca.max(cb) < t {
            continue;
        }
        if ca == cb {
            take(other(a));
            take(other(b));
        } else {
            let s = (t - ca) / (cb - ca);
            take(other(a) + s * (other(b) - other(a)));
        }
    }
    match (lo, hi) {
        (Some(lo), Some(hi)) => Some((lo, hi)),
        _ => None,
    }
}

/// Clamp a rational range to lattice values in `[1, cap]`, returning the
/// half-open `(X, Y]` encoding.
fn clamp_interval(lo: Rational64, hi: Rational64, cap: u64) -> (u64, u64) {
    let lo_int = lo.ceil().to_integer().max(1);
    let hi_int = hi.floor().to_integer().min(cap as i64);
    if hi_int < lo_int {
        (0, 0)
    } else {
        ((lo_int - 1) as u64, hi_int as u64)
    }
}

/// Parses the polygon vertex format: one `x y` pair per line, coordinates
/// as integers or `num/den` rationals, counter-clockwise order, `#`
/// comments allowed.
pub fn parse_vertices(text: &str) -> Result<Vec<Vertex>> {
    let mut out = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let mut parts = line.split_whitespace();
        let (x, y) = match (parts.next(), parts.next(), parts.next()) {
            (Some(x), Some(y), None) => (x, y),
            _ => {
                return Err(Error::Config {
                    line: lineno + 1,
                    msg: format!("expected `x y` vertex, got `{raw}`"),
                })
            }
        };
        out.push((parse_rational(x, lineno + 1)?, parse_rational(y, lineno + 1)?));
    }
    Ok(out)
}

pub(crate) fn parse_rational(text: &str, line: usize) -> Result<Rational64> {
    let mk_err = |msg: String| Error::Config { line, msg };
    if let Some((num, den)) = text.split_once('/') {
        let n: i64 = num
            .trim()
            .parse()
            .map_err(|_| mk_err(format!("bad rational numerator `{num}`")))?;
        let d: i64 = den
            .trim()
            .parse()
            .map_err(|_| mk_err(format!("bad rational denominator `{den}`")))?;
        if d == 0 {
            return Err(mk_err("rational with zero denominator".into()));
        }
        Ok(Rational64::new(n, d))
    } else {
        let n: i64 = text
            .trim()
            .parse()
            .map_err(|_| mk_err(format!("bad integer `{text}`")))?;
        Ok(Rational64::from_integer(n))
    }
}

/// Where a weight sequence came from; recorded so experiment rows are
/// reproducible from their CSV alone.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Provenance {
    Unit,
    Seeded(u64),
    File,
}

/// Complex weights with every modulus at most 1.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightSeq {
    values: Vec<Complex64>,
    provenance: Provenance,
}

impl WeightSeq {
    /// All-ones weights of length n.
    pub fn unit(n: u64) -> Self {
        WeightSeq {
            values: vec![Complex64::new(1.0, 0.0); n as usize],
            provenance: Provenance::Unit,
        }
    }

    /// I.i.d. weights uniform on the closed unit disc from the seeded
    /// generator; the same seed always yields the same sequence.
    pub fn random(n: u64, seed: u64) -> Self {
        let mut gen = SplitMix64::new(seed);
        WeightSeq {
            values: (0..n).map(|_| gen.unit_disc()).collect(),
            provenance: Provenance::Seeded(seed),
        }
    }

    /// User-supplied weights; rejects any modulus above `1 + 1e-12`.
    pub fn from_values(values: Vec<Complex64>) -> Result<Self> {
        for (index, w) in values.iter().enumerate() {
            let modulus = w.norm();
            if modulus > 1.0 + 1e-12 {
                return Err(Error::WeightModulus { index, modulus });
            }
        }
        Ok(WeightSeq { values, provenance: Provenance::File })
    }

    pub fn len(&self) -> u64 {
        self.values.len() as u64
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    /// Weight for the 1-based index used in the sums.
    pub fn at(&self, index1: u64) -> Complex64 {
        self.values[(index1 - 1) as usize]
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn max_modulus(&self) -> f64 {
        self.values.iter().map(|w| w.norm()).fold(0.0, f64::max)
    }
}
