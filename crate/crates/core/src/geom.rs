//! Gauss self-linking (writhe) and linking numbers of closed polygons.
//!
//! Each segment pair contributes the signed solid angle of the spherical
//! quadrilateral swept by the unit vectors between them, divided by 4π.

use std::f64::consts::PI;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Point = [f64; 3];

pub const DEFAULT_CLEARANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PolygonalCurve {
    points: Vec<Point>,
    closed: bool,
}

fn sub(a: Point, b: Point) -> Point {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: Point, b: Point) -> Point {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn scale(a: Point, k: f64) -> Point {
    [a[0] * k, a[1] * k, a[2] * k]
}

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Point, b: Point) -> Point {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn norm(a: Point) -> f64 {
    dot(a, a).sqrt()
}

impl PolygonalCurve {
    pub fn new(points: Vec<Point>, closed: bool) -> Result<Self> {
        if points.len() < 3 {
            return Err(Error::InvalidInput(format!("a curve needs at least 3 points, got {}", points.len())));
        }
        if points.iter().flatten().any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("non-finite coordinate".into()));
        }
        let n = points.len();
        let pairs = if closed { n } else { n - 1 };
        for i in 0..pairs {
            if points[i] == points[(i + 1) % n] {
                return Err(Error::InvalidInput(format!("points {i} and {} coincide", (i + 1) % n)));
            }
        }
        Ok(PolygonalCurve { points, closed })
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.points.len()
        } else {
            self.points.len() - 1
        }
    }

    pub fn segment(&self, i: usize) -> (Point, Point) {
        (self.points[i], self.points[(i + 1) % self.points.len()])
    }

    pub fn length(&self) -> f64 {
        (0..self.segment_count()).map(|i| {
            let (a, b) = self.segment(i);
            norm(sub(b, a))
        }).sum()
    }

    /// Diameter of the axis-aligned bounding box.
    pub fn bbox_diameter(&self) -> f64 {
        bbox_diameter(self.points.iter())
    }

    pub fn map(&self, f: impl Fn(Point) -> Point) -> Result<Self> {
        Self::new(self.points.iter().map(|&p| f(p)).collect(), self.closed)
    }

    pub fn reversed(&self) -> Self {
        let mut points = self.points.clone();
        points.reverse();
        PolygonalCurve { points, closed: self.closed }
    }

    /// Splits every segment into `k` equal pieces.
    pub fn subdivided(&self, k: usize) -> Self {
        let k = k.max(1);
        let mut points = Vec::with_capacity(self.points.len() * k);
        for i in 0..self.segment_count() {
            let (a, b) = self.segment(i);
            for s in 0..k {
                points.push(add(a, scale(sub(b, a), s as f64 / k as f64)));
            }
        }
        if !self.closed {
            points.push(*self.points.last().unwrap());
        }
        PolygonalCurve { points, closed: self.closed }
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        let n = self.segment_count();
        i == j || (i + 1) % n == j && (self.closed || i + 1 == j) || (j + 1) % n == i && (self.closed || j + 1 == i)
    }

    /// Rejects curves whose non-adjacent segments come closer than
    /// `rel * bbox_diameter`.
    pub fn check_clearance(&self, rel: f64) -> Result<()> {
        let tol = rel * self.bbox_diameter();
        let n = self.segment_count();
        let hit = (0..n).into_par_iter().find_map_first(|i| {
            (i + 1..n).find_map(|j| {
                if self.adjacent(i, j) {
                    return None;
                }
                let (a, b) = self.segment(i);
                let (c, d) = self.segment(j);
                (segment_distance(a, b, c, d) <= tol).then_some((i, j))
            })
        });
        match hit {
            Some((i, j)) => Err(Error::NumericalDegeneracy(format!("segments {i} and {j} are within clearance"))),
            None => Ok(()),
        }
    }

    /// `{"points": [...], "closed": bool}` or a bare point array (open).
    pub fn from_json(text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Input {
            Full { points: Vec<Point>, #[serde(default)] closed: bool },
            Bare(Vec<Point>),
        }
        match serde_json::from_str::<Input>(text).map_err(|e| Error::Parse(e.to_string()))? {
            Input::Full { points, closed } => Self::new(points, closed),
            Input::Bare(points) => Self::new(points, false),
        }
    }

    /// Rows of `x,y,z`; a non-numeric first row is taken as a header.
    pub fn from_csv(text: &str, closed: bool) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).from_reader(text.as_bytes());
        let mut points = Vec::new();
        for (row, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| Error::Parse(e.to_string()))?;
            if rec.iter().all(|f| f.is_empty()) {
                continue;
            }
            if rec.len() != 3 {
                return Err(Error::Parse(format!("row {row} has {} fields, expected 3", rec.len())));
            }
            let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
            match parsed {
                Ok(v) => points.push([v[0], v[1], v[2]]),
                Err(_) if row == 0 => continue,
                Err(e) => return Err(Error::Parse(format!("row {row}: {e}"))),
            }
        }
        Self::new(points, closed)
    }

    /// Loads `.json` or CSV by extension.
    pub fn load(path: &Path, closed: bool) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
        if path.extension().is_some_and(|e| e == "json") {
            let c = Self::from_json(&text)?;
            if !closed && !c.closed {
                return Ok(c);
            }
            Self::new(c.points, closed || c.closed)
        } else {
            Self::from_csv(&text, closed)
        }
    }
}

fn bbox_diameter<'a>(pts: impl Iterator<Item = &'a Point>) -> f64 {
    let mut lo = [f64::INFINITY; 3];
    let mut hi = [f64::NEG_INFINITY; 3];
    for p in pts {
        for k in 0..3 {
            lo[k] = lo[k].min(p[k]);
            hi[k] = hi[k].max(p[k]);
        }
    }
    norm(sub(hi, lo))
}

/// Shortest distance between segments `ab` and `cd`.
pub fn segment_distance(a: Point, b: Point, c: Point, d: Point) -> f64 {
    let u = sub(b, a);
    let v = sub(d, c);
    let w = sub(a, c);
    let (aa, bb, cc, dd, ee) = (dot(u, u), dot(u, v), dot(v, v), dot(u, w), dot(v, w));
    let den = aa * cc - bb * bb;
    let (mut sn, mut sd, mut tn, mut td);
    if den < 1e-14 * aa * cc {
        sn = 0.0;
        sd = 1.0;
        tn = ee;
        td = cc;
    } else {
        sd = den;
        td = den;
        sn = bb * ee - cc * dd;
        tn = aa * ee - bb * dd;
        if sn < 0.0 {
            sn = 0.0;
            tn = ee;
            td = cc;
        } else if sn > sd {
            sn = sd;
            tn = ee + bb;
            td = cc;
        }
    }
    if tn < 0.0 {
        tn = 0.0;
        if -dd < 0.0 {
            sn = 0.0;
        } else if -dd > aa {
            sn = sd;
        } else {
            sn = -dd;
            sd = aa;
        }
    } else if tn > td {
        tn = td;
        if -dd + bb < 0.0 {
            sn = 0.0;
        } else if -dd + bb > aa {
            sn = sd;
        } else {
            sn = -dd + bb;
            sd = aa;
        }
    }
    let sc = if sn.abs() < 1e-300 { 0.0 } else { sn / sd };
    let tc = if tn.abs() < 1e-300 { 0.0 } else { tn / td };
    norm(sub(add(w, scale(u, sc)), scale(v, tc)))
}

/// Signed solid angle subtended between segments `p1p2` and `p3p4`.
pub fn pair_solid_angle(p1: Point, p2: Point, p3: Point, p4: Point) -> f64 {
    let r13 = sub(p3, p1);
    let r14 = sub(p4, p1);
    let r23 = sub(p3, p2);
    let r24 = sub(p4, p2);
    let r12 = sub(p2, p1);
    let r34 = sub(p4, p3);
    let raw = [cross(r13, r14), cross(r14, r24), cross(r24, r23), cross(r23, r13)];
    let scale_ref = norm(r13).max(norm(r14)).max(norm(r23)).max(norm(r24));
    let mut n = [[0.0; 3]; 4];
    for (k, v) in raw.iter().enumerate() {
        let l = norm(*v);
        if l <= 1e-15 * scale_ref * scale_ref {
            // coplanar pair
            return 0.0;
        }
        n[k] = scale(*v, 1.0 / l);
    }
    let omega: f64 = (0..4)
        .map(|k| {
            let (a, b) = (n[k], n[(k + 1) % 4]);
            dot(a, b).atan2(norm(cross(a, b)))
        })
        .sum();
    let s = dot(cross(r34, r12), r13);
    if s == 0.0 {
        0.0
    } else {
        omega * s.signum()
    }
}

/// Neumaier-compensated sum.
#[derive(Clone, Copy, Debug, Default)]
pub struct CompensatedSum {
    sum: f64,
    c: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.c += (self.sum - t) + x;
        } else {
            self.c += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.c
    }
}

/// Writhe of a closed polygon with the default clearance.
pub fn writhe_exact(c: &PolygonalCurve) -> Result<f64> {
    writhe_with_clearance(c, DEFAULT_CLEARANCE)
}

pub fn writhe_with_clearance(c: &PolygonalCurve, clearance: f64) -> Result<f64> {
    if !c.is_closed() {
        return Err(Error::InvalidInput("writhe needs a closed curve".into()));
    }
    c.check_clearance(clearance)?;
    let n = c.segment_count();
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut acc = CompensatedSum::default();
            let (a, b) = c.segment(i);
            for j in i + 1..n {
                if c.adjacent(i, j) {
                    continue;
                }
                let (p, q) = c.segment(j);
                acc.add(pair_solid_angle(a, b, p, q));
            }
            acc.value()
        })
        .collect();
    let mut total = CompensatedSum::default();
    for r in rows {
        total.add(r);
    }
    Ok(2.0 * total.value() / (4.0 * PI))
}

/// Gauss linking number of two closed polygons (not rounded).
pub fn linking_gauss(c1: &PolygonalCurve, c2: &PolygonalCurve) -> Result<f64> {
    linking_with_clearance(c1, c2, DEFAULT_CLEARANCE)
}

pub fn linking_with_clearance(c1: &PolygonalCurve, c2: &PolygonalCurve, clearance: f64) -> Result<f64> {
    if !c1.is_closed() || !c2.is_closed() {
        return Err(Error::InvalidInput("linking needs closed curves".into()));
    }
    let tol = clearance * bbox_diameter(c1.points().iter().chain(c2.points()));
    let n1 = c1.segment_count();
    let n2 = c2.segment_count();
    let rows: Vec<Result<f64>> = (0..n1)
        .into_par_iter()
        .map(|i| {
            let (a, b) = c1.segment(i);
            let mut acc = CompensatedSum::default();
            for j in 0..n2 {
                let (p, q) = c2.segment(j);
                if segment_distance(a, b, p, q) <= tol {
                    return Err(Error::NumericalDegeneracy(format!(
                        "segment {i} of the first curve and {j} of the second are within clearance"
                    )));
                }
                acc.add(pair_solid_angle(a, b, p, q));
            }
            Ok(acc.value())
        })
        .collect();
    let mut total = CompensatedSum::default();
    for r in rows {
        total.add(r?);
    }
    Ok(total.value() / (4.0 * PI))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub value: f64,
    pub std_error: f64,
    pub samples: u64,
}

/// Gauss double integral by uniform sampling of arclength pairs.
pub fn writhe_monte_carlo(c: &PolygonalCurve, samples: u64, seed: u64) -> Result<MonteCarloEstimate> {
    if !c.is_closed() {
        return Err(Error::InvalidInput("writhe needs a closed curve".into()));
    }
    if samples < 2 {
        return Err(Error::InvalidArgument("need at least 2 samples".into()));
    }
    let n = c.segment_count();
    let mut cum = Vec::with_capacity(n + 1);
    cum.push(0.0);
    for i in 0..n {
        let (a, b) = c.segment(i);
        cum.push(cum[i] + norm(sub(b, a)));
    }
    let total = cum[n];
    let locate = |s: f64| -> (Point, Point, usize) {
        let i = match cum.binary_search_by(|x| x.partial_cmp(&s).unwrap()) {
            Ok(i) => i.min(n - 1),
            Err(i) => i - 1,
        };
        let (a, b) = c.segment(i);
        let len = cum[i + 1] - cum[i];
        let t = ((s - cum[i]) / len).clamp(0.0, 1.0);
        (add(a, scale(sub(b, a), t)), scale(sub(b, a), 1.0 / len), i)
    };
    const CHUNK: u64 = 1 << 16;
    let chunks = samples.div_ceil(CHUNK);
    let parts: Vec<(f64, f64, u64)> = (0..chunks)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k);
            let count = CHUNK.min(samples - k * CHUNK);
            let (mut s1, mut s2) = (CompensatedSum::default(), CompensatedSum::default());
            for _ in 0..count {
                let (x, tx, i) = locate(rng.gen::<f64>() * total);
                let (y, ty, j) = locate(rng.gen::<f64>() * total);
                let g = if i == j {
                    0.0
                } else {
                    let r = sub(x, y);
                    let d = norm(r);
                    dot(cross(tx, ty), r) / (d * d * d)
                };
                s1.add(g);
                s2.add(g * g);
            }
            (s1.value(), s2.value(), count)
        })
        .collect();
    let (mut s1, mut s2) = (CompensatedSum::default(), CompensatedSum::default());
    let mut cnt = 0u64;
    for (a, b, k) in parts {
        s1.add(a);
        s2.add(b);
        cnt += k;
    }
    let mean = s1.value() / cnt as f64;
    let var = (s2.value() / cnt as f64 - mean * mean).max(0.0) * cnt as f64 / (cnt - 1) as f64;
    let factor = total * total / (4.0 * PI);
    Ok(MonteCarloEstimate { value: factor * mean, std_error: factor * (var / cnt as f64).sqrt(), samples: cnt })
}

/// Sampled `(sin t + 2 sin 2t, cos t - 2 cos 2t, -sin 3t)`.
pub fn trefoil(samples: usize) -> PolygonalCurve {
    let pts = (0..samples)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / samples as f64;
            [t.sin() + 2.0 * (2.0 * t).sin(), t.cos() - 2.0 * (2.0 * t).cos(), -(3.0 * t).sin()]
        })
        .collect();
    PolygonalCurve::new(pts, true).expect("trefoil samples are distinct")
}

/// Regular polygon approximating a circle of radius `r` in the plane spanned
/// by `u` and `v` (assumed orthonormal) around `center`.
pub fn circle(center: Point, u: Point, v: Point, r: f64, samples: usize) -> PolygonalCurve {
    let pts = (0..samples)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / samples as f64;
            add(center, add(scale(u, r * t.cos()), scale(v, r * t.sin())))
        })
        .collect();
    PolygonalCurve::new(pts, true).expect("circle samples are distinct")
}

/// `(p, q)` torus curve on a torus with radii `big_r > r`: winds `p` times
/// along the core circle and `q` times around it.
pub fn torus_curve(p: u32, q: u32, big_r: f64, r: f64, samples: usize) -> PolygonalCurve {
    let pts = (0..samples)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / samples as f64;
            let (a, b) = (p as f64 * t, q as f64 * t);
            let rad = big_r + r * b.cos();
            [rad * a.cos(), rad * a.sin(), r * b.sin()]
        })
        .collect();
    PolygonalCurve::new(pts, true).expect("torus samples are distinct")
}
