//! Legal orientations, the pushed-label leg bound and directed STU rewriting.

use serde::Serialize;

use crate::diagram::{DirectedJacobiDiagram, JacobiDiagram, Site, Skeleton};
use crate::error::{invalid, Error, Result};
use crate::rational;
use crate::sum::{DiagramSum, SumTermJson};

/// All legal orientations, in a fixed order. Chords between legs take both
/// directions; every other edge is fixed by the incoming choice at its vertices.
pub fn legal_orientations(d: &JacobiDiagram) -> Vec<DirectedJacobiDiagram> {
    let n = d.num_half_edges();
    let v = d.num_vertices();
    let mut out = Vec::new();
    let mut incoming = vec![usize::MAX; v];
    choose(d, 0, &mut incoming, &mut |inc| {
        let mut head = vec![false; n];
        for (w, &s) in inc.iter().enumerate() {
            head[d.vertices()[w][s] as usize] = true;
        }
        // Edges with a vertex end are now determined; collect free chords.
        let mut chords = Vec::new();
        for &[a, b] in d.edges() {
            match (d.site(a), d.site(b)) {
                (Site::Leg(_), Site::Leg(_)) => chords.push(a),
                (Site::Vertex(..), Site::Leg(_)) if !head[a as usize] => head[b as usize] = true,
                (Site::Leg(_), Site::Vertex(..)) if !head[b as usize] => head[a as usize] = true,
                _ => {}
            }
        }
        for mask in 0..1u64 << chords.len() {
            let mut h = head.clone();
            for (i, &a) in chords.iter().enumerate() {
                let target = if mask >> i & 1 == 1 { a } else { d.partner(a) };
                h[target as usize] = true;
            }
            out.push(DirectedJacobiDiagram::from_heads(d.clone(), h).expect("consistent orientation"));
        }
    });
    out
}

fn choose(d: &JacobiDiagram, w: usize, incoming: &mut Vec<usize>, emit: &mut dyn FnMut(&[usize])) {
    if w == incoming.len() {
        emit(incoming);
        return;
    }
    for s in 0..3 {
        // Every edge to an already decided vertex (or a loop) needs exactly one head.
        let ok = d.vertices()[w].iter().enumerate().all(|(slot, &h)| match d.site(d.partner(h)) {
            Site::Vertex(u, us) if u < w => (slot == s) != (incoming[u] == us),
            Site::Vertex(u, us) if u == w => (slot == s) != (us == s),
            _ => true,
        });
        if ok {
            incoming[w] = s;
            choose(d, w + 1, incoming, emit);
            incoming[w] = usize::MAX;
        }
    }
}

/// Orientation sum: every legal orientation with coefficient one.
pub fn orientation_sum(d: &JacobiDiagram) -> DiagramSum {
    let mut s = DiagramSum::new();
    for o in legal_orientations(d) {
        s.add_directed(&o, &rational::one());
    }
    s
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LegBoundReport {
    pub degree: usize,
    pub legs: usize,
    /// Labels that land on each leg position after pushing along the arrows.
    pub pushed_labels: Vec<usize>,
    pub holds: bool,
}

/// Pushes each edge's +1 along its arrow. Every vertex absorbs exactly one
/// label against its -1; the rest end on legs.
pub fn verify_leg_bound(d: &DirectedJacobiDiagram) -> Result<LegBoundReport> {
    if let Some(v) = d.illegal_vertex() {
        return invalid(format!("vertex {v} does not have exactly one incoming edge"));
    }
    let base = d.base();
    let mut absorbed = vec![0i64; base.num_vertices()];
    let mut pushed = vec![0usize; base.legs().len()];
    for &[a, b] in base.edges() {
        let head = if d.is_head(a) { a } else { b };
        match base.site(head) {
            Site::Leg(p) => pushed[p] += 1,
            Site::Vertex(v, _) => absorbed[v] += 1,
        }
    }
    if absorbed.iter().any(|&x| x != 1) {
        return Err(Error::InvalidArgument("a vertex absorbed other than one label".into()));
    }
    let total: usize = pushed.iter().sum();
    let degree = base.degree();
    if total != degree {
        return Err(Error::InvalidArgument(format!("pushed {total} labels for degree {degree}")));
    }
    let legs = base.legs().len();
    Ok(LegBoundReport { degree, legs, pushed_labels: pushed, holds: legs >= degree })
}

/// Raw diagram data; in directed mode each edge is stored `[tail, head]`.
#[derive(Clone, Debug)]
struct Parts {
    skeleton: Skeleton,
    legs: Vec<u32>,
    vertices: Vec<[u32; 3]>,
    edges: Vec<[u32; 2]>,
}

impl Parts {
    fn of(d: &JacobiDiagram) -> Self {
        Parts {
            skeleton: d.skeleton(),
            legs: d.legs().to_vec(),
            vertices: d.vertices().to_vec(),
            edges: d.edges().to_vec(),
        }
    }

    fn of_directed(d: &DirectedJacobiDiagram) -> Self {
        let mut p = Self::of(d.base());
        p.edges = d.directions().into_iter().map(|(t, h)| [t, h]).collect();
        p
    }

    fn partner(&self, h: u32) -> u32 {
        self.edges
            .iter()
            .find_map(|&[a, b]| if a == h { Some(b) } else if b == h { Some(a) } else { None })
            .expect("half-edge on an edge")
    }

    fn fresh(&self) -> u32 {
        self.legs.iter().chain(self.vertices.iter().flatten()).max().map_or(0, |m| m + 1)
    }

    fn plain(self) -> Result<JacobiDiagram> {
        JacobiDiagram::new(self.skeleton, self.legs, self.vertices, self.edges)
    }

    fn directed(self) -> Result<DirectedJacobiDiagram> {
        DirectedJacobiDiagram::build(self.skeleton, self.legs, self.vertices, self.edges)
    }

    /// Resolves the vertex behind leg `p` into two adjacent legs. Returns the
    /// `(S, T)` pair with `vertex diagram = S - T`.
    fn expand(&self, p: usize) -> Result<(Parts, Parts)> {
        let Some(&h) = self.legs.get(p) else {
            return invalid(format!("no leg at position {p}"));
        };
        let hv = self.partner(h);
        let Some(v) = self.vertices.iter().position(|t| t.contains(&hv)) else {
            return Err(Error::NotApplicable(format!("leg {p} ends on another leg")));
        };
        let t = self.vertices[v];
        let s = t.iter().position(|&x| x == hv).unwrap();
        let (a, b) = (t[(s + 1) % 3], t[(s + 2) % 3]);
        let mut vertices = self.vertices.clone();
        vertices.remove(v);
        let edges: Vec<[u32; 2]> = self.edges.iter().copied().filter(|e| !e.contains(&h)).collect();
        let with = |x: u32, y: u32| {
            let mut legs = self.legs.clone();
            legs.splice(p..=p, [x, y]);
            Parts { skeleton: self.skeleton, legs, vertices: vertices.clone(), edges: edges.clone() }
        };
        Ok((with(a, b), with(b, a)))
    }

    /// Normalises an adjacent pair so that it sits at `(p, p + 1)` without wrap.
    fn adjacent_pair(&self, p: usize) -> Result<(Parts, usize)> {
        let l = self.legs.len();
        if p >= l || l < 2 {
            return invalid(format!("no adjacent leg pair at position {p}"));
        }
        if p + 1 < l {
            return Ok((self.clone(), p));
        }
        if self.skeleton == Skeleton::Interval {
            return invalid(format!("leg {p} is the last leg of the interval"));
        }
        let mut r = self.clone();
        r.legs.rotate_left(p);
        Ok((r, 0))
    }

    fn swapped(&self, p: usize) -> Parts {
        let mut s = self.clone();
        s.legs.swap(p, p + 1);
        s
    }

    /// Joins legs `p, p + 1` at a new vertex whose stem runs to a new leg.
    /// `stem_in` is `Some(true)` when the stem points into the vertex.
    fn merged(&self, p: usize, stem_in: Option<bool>) -> Parts {
        let (x, y) = (self.legs[p], self.legs[p + 1]);
        let s = self.fresh();
        let g = s + 1;
        let mut legs = self.legs.clone();
        legs.splice(p..=p + 1, [g]);
        let mut vertices = self.vertices.clone();
        vertices.push([x, y, s]);
        let mut edges = self.edges.clone();
        edges.push(if stem_in == Some(false) { [s, g] } else { [g, s] });
        Parts { skeleton: self.skeleton, legs, vertices, edges }
    }
}

/// Undirected STU at leg `p`: returns `S - T`, equal to the input diagram.
pub fn stu_at_vertex(d: &JacobiDiagram, p: usize) -> Result<(JacobiDiagram, JacobiDiagram)> {
    let (s, t) = Parts::of(d).expand(p)?;
    Ok((s.plain()?, t.plain()?))
}

/// Undirected STU at adjacent legs `(p, p + 1)`: `(S, T, U)` with `S - T = U`.
pub fn stu_at_adjacent(d: &JacobiDiagram, p: usize) -> Result<(JacobiDiagram, JacobiDiagram, JacobiDiagram)> {
    let (parts, p) = Parts::of(d).adjacent_pair(p)?;
    let t = parts.swapped(p);
    let u = parts.merged(p, None);
    Ok((parts.plain()?, t.plain()?, u.plain()?))
}

/// Which directed STU relation applies, named by the arrows of the two
/// S-legs (`u`: away from the skeleton, `d`: towards it).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StuVariant {
    Uu,
    Ud,
    Du,
    Dd,
}

impl StuVariant {
    fn of(first_bar: bool, second_bar: bool) -> Self {
        match (first_bar, second_bar) {
            (false, false) => StuVariant::Uu,
            (false, true) => StuVariant::Ud,
            (true, false) => StuVariant::Du,
            (true, true) => StuVariant::Dd,
        }
    }
}

/// One instance of a directed STU relation `S - T = U` (`U` absent for `dd`).
#[derive(Clone, Debug)]
pub struct DirectedStu {
    pub variant: StuVariant,
    pub s: DirectedJacobiDiagram,
    pub t: DirectedJacobiDiagram,
    pub u: Option<DirectedJacobiDiagram>,
}

/// Directed STU read from the vertex side: the vertex behind leg `p` is
/// replaced by `S - T`.
pub fn apply_directed_stu(d: &DirectedJacobiDiagram, p: usize) -> Result<DiagramSum> {
    let rel = stu_at_vertex_directed(d, p)?;
    let mut out = DiagramSum::single_directed(&rel.s);
    out.add_directed(&rel.t, &-rational::one());
    Ok(out)
}

pub fn stu_at_vertex_directed(d: &DirectedJacobiDiagram, p: usize) -> Result<DirectedStu> {
    let (s, t) = Parts::of_directed(d).expand(p)?;
    let (s, t) = (s.directed()?, t.directed()?);
    let variant = StuVariant::of(s.leg_points_to_skeleton(p), s.leg_points_to_skeleton(p + 1));
    Ok(DirectedStu { variant, s, t, u: Some(d.clone()) })
}

/// Directed STU read from the skeleton side at legs `(p, p + 1)`.
pub fn stu_at_adjacent_directed(d: &DirectedJacobiDiagram, p: usize) -> Result<DirectedStu> {
    let (parts, p) = Parts::of_directed(d).adjacent_pair(p)?;
    let s = parts.clone().directed()?;
    let variant = StuVariant::of(s.leg_points_to_skeleton(p), s.leg_points_to_skeleton(p + 1));
    let t = parts.swapped(p).directed()?;
    let u = match variant {
        StuVariant::Uu => Some(parts.merged(p, Some(true)).directed()?),
        StuVariant::Ud | StuVariant::Du => Some(parts.merged(p, Some(false)).directed()?),
        StuVariant::Dd => None,
    };
    Ok(DirectedStu { variant, s, t, u })
}

/// True when some vertex sends both outgoing edges to adjacent legs.
pub fn detect_zero_pattern(d: &DirectedJacobiDiagram) -> bool {
    zero_pattern_vertex(d).is_some()
}

fn zero_pattern_vertex(d: &DirectedJacobiDiagram) -> Option<(usize, usize, usize)> {
    let base = d.base();
    let l = base.legs().len();
    for (v, t) in base.vertices().iter().enumerate() {
        let outs: Vec<usize> = t
            .iter()
            .filter(|&&h| !d.is_head(h))
            .filter_map(|&h| match base.site(base.partner(h)) {
                Site::Leg(p) => Some(p),
                Site::Vertex(..) => None,
            })
            .collect();
        if let [i, j] = outs[..] {
            let (i, j) = (i.min(j), i.max(j));
            let adjacent = j == i + 1 || (base.skeleton() == Skeleton::Circle && l > 2 && i == 0 && j == l - 1);
            if adjacent {
                return Some((v, i, j));
            }
        }
    }
    None
}

#[derive(Clone, Debug, Serialize)]
pub struct TraceStep {
    pub rule: String,
    pub site: String,
    pub terms: Vec<SumTermJson>,
}

#[derive(Clone, Debug, Serialize)]
pub struct WheelReduction {
    pub m: usize,
    pub trace: Vec<TraceStep>,
    #[serde(skip)]
    pub result: DiagramSum,
}

fn step(rule: &str, site: String, terms: &DiagramSum) -> TraceStep {
    TraceStep { rule: rule.into(), site, terms: terms.to_json() }
}

/// Kills one directed wheel: STU at leg 0, then each tree term is carried to a
/// zero pattern by commuting adjacent legs that both point at the skeleton.
pub fn reduce_wheel_on_circle(m: usize) -> Result<WheelReduction> {
    reduce_wheel(m, Skeleton::Circle)
}

pub fn reduce_wheel(m: usize, skeleton: Skeleton) -> Result<WheelReduction> {
    if skeleton == Skeleton::Interval {
        return Err(Error::NotApplicable("leg transport needs the circle skeleton".into()));
    }
    let undirected = JacobiDiagram::wheel(m, skeleton)?;
    let mut trace = Vec::new();
    let mut result = DiagramSum::new();
    let orientations = legal_orientations(&undirected);
    trace.push(step("orient", format!("{m}-wheel"), &orientation_sum(&undirected)));
    for w in orientations {
        let sum = DiagramSum::single_directed(&w);
        trace.push(step("start", w.to_json_key(), &sum));
        let rel = stu_at_vertex_directed(&w, 0)?;
        let mut after = DiagramSum::single_directed(&rel.s);
        after.add_directed(&rel.t, &-rational::one());
        trace.push(step("stu", "leg 0".into(), &after));
        for (term, sign) in [(rel.s, rational::one()), (rel.t, -rational::one())] {
            let rest = kill_by_transport(&term, &mut trace)?;
            if let Some(rest) = rest {
                result.add_directed(&rest, &sign);
            }
        }
    }
    trace.push(step("result", format!("{m}-wheel"), &result));
    Ok(WheelReduction { m, trace, result })
}

/// Commutes bar legs until a zero pattern appears; returns the term if no
/// such path exists.
fn kill_by_transport(d: &DirectedJacobiDiagram, trace: &mut Vec<TraceStep>) -> Result<Option<DirectedJacobiDiagram>> {
    if let Some((v, i, j)) = zero_pattern_vertex(d) {
        trace.push(step("zero-pattern", format!("vertex {v}, legs {i},{j}"), &DiagramSum::new()));
        return Ok(None);
    }
    let Some(path) = transport_path(d) else {
        return Ok(Some(d.clone()));
    };
    let mut cur = d.clone();
    for p in path {
        let rel = stu_at_adjacent_directed(&cur, p)?;
        debug_assert_eq!(rel.variant, StuVariant::Dd);
        cur = rel.t;
        trace.push(step("commute", format!("legs {p},{}", (p + 1) % cur.base().legs().len()), &DiagramSum::single_directed(&cur)));
    }
    match zero_pattern_vertex(&cur) {
        Some((v, i, j)) => {
            trace.push(step("zero-pattern", format!("vertex {v}, legs {i},{j}"), &DiagramSum::new()));
            Ok(None)
        }
        None => Ok(Some(cur)),
    }
}

/// Swap positions that bring some vertex's two outgoing legs together while
/// only exchanging legs that both point at the skeleton.
fn transport_path(d: &DirectedJacobiDiagram) -> Option<Vec<usize>> {
    let base = d.base();
    let l = base.legs().len();
    let circle = base.skeleton() == Skeleton::Circle;
    let bar = |p: usize| d.leg_points_to_skeleton(p % l);
    for t in base.vertices() {
        let outs: Vec<usize> = t
            .iter()
            .filter(|&&h| !d.is_head(h))
            .filter_map(|&h| match base.site(base.partner(h)) {
                Site::Leg(p) => Some(p),
                Site::Vertex(..) => None,
            })
            .collect();
        let [a, b] = outs[..] else { continue };
        // Move the leg at `from` forward (increasing positions) to just before `to`.
        let mut candidates = vec![(a, b), (b, a)];
        if !circle {
            candidates.retain(|&(f, t)| f < t);
        }
        for (from, to) in candidates {
            let steps = (to + l - from) % l - 1;
            if (0..=steps).all(|k| bar(from + k)) {
                return Some((0..steps).map(|k| (from + k) % l).collect());
            }
        }
    }
    None
}

trait KeyLabel {
    fn to_json_key(&self) -> String;
}

impl KeyLabel for DirectedJacobiDiagram {
    fn to_json_key(&self) -> String {
        crate::canon::canonicalize_directed(self).key.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orientation_counts() {
        for m in 2..=6 {
            let w = JacobiDiagram::wheel(m, Skeleton::Circle).unwrap();
            let os = legal_orientations(&w);
            assert_eq!(os.len(), 2, "m = {m}");
            assert!(os.iter().all(|o| o.is_legal()));
        }
        assert_eq!(legal_orientations(&JacobiDiagram::theta(Skeleton::Circle)).len(), 2);
        assert_eq!(legal_orientations(&JacobiDiagram::tripod(Skeleton::Circle)).len(), 3);
    }

    #[test]
    fn leg_bound_examples() {
        let w = DirectedJacobiDiagram::wheel(2, Skeleton::Circle, false).unwrap();
        let r = verify_leg_bound(&w).unwrap();
        assert_eq!((r.degree, r.legs, r.holds), (2, 2, true));
        for o in legal_orientations(&JacobiDiagram::tripod(Skeleton::Circle)) {
            let r = verify_leg_bound(&o).unwrap();
            assert_eq!((r.degree, r.legs), (2, 3));
        }
    }

    #[test]
    fn illegal_orientation_rejected_by_bound() {
        let t = JacobiDiagram::tripod(Skeleton::Circle);
        let heads = vec![true, true, true, false, false, false];
        let d = DirectedJacobiDiagram::from_heads(t, heads).unwrap();
        assert!(verify_leg_bound(&d).is_err());
    }

    #[test]
    fn zero_pattern_examples() {
        let w = DirectedJacobiDiagram::wheel(2, Skeleton::Circle, false).unwrap();
        assert!(!detect_zero_pattern(&w));
        for o in legal_orientations(&JacobiDiagram::theta(Skeleton::Circle)) {
            assert!(!detect_zero_pattern(&o));
        }
    }

    #[test]
    fn stu_needs_a_vertex() {
        let th = legal_orientations(&JacobiDiagram::theta(Skeleton::Interval)).remove(0);
        assert!(matches!(apply_directed_stu(&th, 0), Err(Error::NotApplicable(_))));
    }

    #[test]
    fn wheels_reduce_to_zero() {
        for m in 2..=6 {
            let r = reduce_wheel_on_circle(m).unwrap();
            assert!(r.result.is_zero(), "m = {m}");
        }
        assert!(matches!(reduce_wheel(3, Skeleton::Interval), Err(Error::NotApplicable(_))));
    }
}
