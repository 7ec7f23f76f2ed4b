//! Jacobi diagrams on a circle or interval skeleton.
//!
//! A diagram is a set of half-edges. Each half-edge sits either on a leg (a
//! point of the skeleton) or in one of the three slots of an internal
//! vertex, and every half-edge belongs to exactly one edge. The literal order
//! of a vertex triple is its cyclic orientation. Half-edge ids are always
//! renumbered densely as `0..num_half_edges()`.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Skeleton {
    Circle,
    Interval,
}

impl std::fmt::Display for Skeleton {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Skeleton::Circle => "circle",
            Skeleton::Interval => "interval",
        })
    }
}

impl std::str::FromStr for Skeleton {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "circle" => Ok(Skeleton::Circle),
            "interval" => Ok(Skeleton::Interval),
            _ => Err(Error::Parse(format!("unknown skeleton {s:?}"))),
        }
    }
}

/// Position of a half-edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Site {
    /// Leg at the given skeleton position.
    Leg(usize),
    /// Vertex index and slot within its triple.
    Vertex(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JacobiDiagram {
    skeleton: Skeleton,
    legs: Vec<u32>,
    vertices: Vec<[u32; 3]>,
    edges: Vec<[u32; 2]>,
    site: Vec<Site>,
    partner: Vec<u32>,
    edge_of: Vec<usize>,
}

impl JacobiDiagram {
    /// Builds and validates a diagram. Half-edge ids may be arbitrary; they
    /// are renumbered in order of appearance (legs first, then vertices).
    pub fn new(
        skeleton: Skeleton,
        legs: Vec<u32>,
        vertices: Vec<[u32; 3]>,
        edges: Vec<[u32; 2]>,
    ) -> Result<Self> {
        let mut dense: HashMap<u32, u32> = HashMap::new();
        let mut site = Vec::new();
        let mut place = |h: u32, s: Site| -> Result<u32> {
            if dense.contains_key(&h) {
                return invalid(format!("half-edge {h} appears at two sites"));
            }
            let id = site.len() as u32;
            dense.insert(h, id);
            site.push(s);
            Ok(id)
        };
        let legs = legs
            .iter()
            .enumerate()
            .map(|(p, &h)| place(h, Site::Leg(p)))
            .collect::<Result<Vec<_>>>()?;
        let vertices = vertices
            .iter()
            .enumerate()
            .map(|(v, t)| {
                Ok([
                    place(t[0], Site::Vertex(v, 0))?,
                    place(t[1], Site::Vertex(v, 1))?,
                    place(t[2], Site::Vertex(v, 2))?,
                ])
            })
            .collect::<Result<Vec<_>>>()?;
        let n = site.len();
        let mut partner = vec![u32::MAX; n];
        let mut edge_of = vec![usize::MAX; n];
        let mut dense_edges = Vec::with_capacity(edges.len());
        for (e, &[a, b]) in edges.iter().enumerate() {
            let da = *dense
                .get(&a)
                .ok_or_else(|| Error::InvalidArgument(format!("edge uses unknown half-edge {a}")))?;
            let db = *dense
                .get(&b)
                .ok_or_else(|| Error::InvalidArgument(format!("edge uses unknown half-edge {b}")))?;
            if da == db {
                return invalid(format!("edge joins half-edge {a} to itself"));
            }
            for (x, orig) in [(da, a), (db, b)] {
                if edge_of[x as usize] != usize::MAX {
                    return invalid(format!("half-edge {orig} lies on two edges"));
                }
                edge_of[x as usize] = e;
            }
            partner[da as usize] = db;
            partner[db as usize] = da;
            dense_edges.push([da, db]);
        }
        if let Some(h) = (0..n).find(|&h| edge_of[h] == usize::MAX) {
            let orig = dense.iter().find(|(_, &d)| d as usize == h).map(|(&o, _)| o).unwrap();
            return invalid(format!("half-edge {orig} lies on no edge"));
        }
        let d = JacobiDiagram {
            skeleton,
            legs,
            vertices,
            edges: dense_edges,
            site,
            partner,
            edge_of,
        };
        if !d.is_connected() {
            return invalid("diagram is not connected to the skeleton");
        }
        Ok(d)
    }

    /// The empty diagram (unit of the diagram algebra).
    pub fn empty(skeleton: Skeleton) -> Self {
        Self::new(skeleton, vec![], vec![], vec![]).unwrap()
    }

    /// The m-wheel: m legs, a hub m-cycle and one spoke per leg.
    pub fn wheel(m: usize, skeleton: Skeleton) -> Result<Self> {
        if m < 2 {
            return invalid(format!("wheel needs m >= 2, got {m}"));
        }
        let (legs, vertices, edges) = wheel_parts(m);
        Self::new(skeleton, legs, vertices, edges)
    }

    /// k disjoint chords side by side on the skeleton.
    pub fn theta_power(k: usize, skeleton: Skeleton) -> Result<Self> {
        if k < 1 {
            return invalid("theta power needs k >= 1");
        }
        let legs: Vec<u32> = (0..2 * k as u32).collect();
        let edges = (0..k as u32).map(|i| [2 * i, 2 * i + 1]).collect();
        Self::new(skeleton, legs, vec![], edges)
    }

    pub fn theta(skeleton: Skeleton) -> Self {
        Self::theta_power(1, skeleton).unwrap()
    }

    /// One internal vertex joined to three legs.
    pub fn tripod(skeleton: Skeleton) -> Self {
        Self::new(skeleton, vec![0, 1, 2], vec![[3, 4, 5]], vec![[0, 3], [1, 4], [2, 5]]).unwrap()
    }

    pub fn skeleton(&self) -> Skeleton {
        self.skeleton
    }

    pub fn legs(&self) -> &[u32] {
        &self.legs
    }

    pub fn vertices(&self) -> &[[u32; 3]] {
        &self.vertices
    }

    pub fn edges(&self) -> &[[u32; 2]] {
        &self.edges
    }

    pub fn num_half_edges(&self) -> usize {
        self.site.len()
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn site(&self, h: u32) -> Site {
        self.site[h as usize]
    }

    pub fn partner(&self, h: u32) -> u32 {
        self.partner[h as usize]
    }

    pub fn edge_of(&self, h: u32) -> usize {
        self.edge_of[h as usize]
    }

    /// Number of internal edges minus number of internal vertices.
    pub fn degree(&self) -> usize {
        self.edges.len() - self.vertices.len()
    }

    pub fn external_leg_count(&self) -> usize {
        self.legs.len()
    }

    /// True when some vertex has an edge back to itself.
    pub fn has_loop(&self) -> bool {
        self.edges.iter().any(|&[a, b]| match (self.site(a), self.site(b)) {
            (Site::Vertex(u, _), Site::Vertex(v, _)) => u == v,
            _ => false,
        })
    }

    /// Connected after deleting the skeleton.
    pub fn is_primitive(&self) -> bool {
        if self.site.is_empty() {
            return false;
        }
        let mut uf = UnionFind::new(self.site.len());
        self.join_internal(&mut uf);
        uf.components() == 1
    }

    fn join_internal(&self, uf: &mut UnionFind) {
        for &[a, b] in &self.edges {
            uf.union(a as usize, b as usize);
        }
        for t in &self.vertices {
            uf.union(t[0] as usize, t[1] as usize);
            uf.union(t[0] as usize, t[2] as usize);
        }
    }

    fn is_connected(&self) -> bool {
        if self.site.is_empty() {
            return true;
        }
        let mut uf = UnionFind::new(self.site.len());
        self.join_internal(&mut uf);
        for w in self.legs.windows(2) {
            uf.union(w[0] as usize, w[1] as usize);
        }
        uf.components() == 1
    }

    /// Reinterprets an interval diagram on the circle.
    pub fn close_interval(&self) -> Result<Self> {
        if self.skeleton != Skeleton::Interval {
            return invalid("close_interval expects an interval diagram");
        }
        let mut d = self.clone();
        d.skeleton = Skeleton::Circle;
        Ok(d)
    }

    pub fn with_skeleton(&self, skeleton: Skeleton) -> Self {
        let mut d = self.clone();
        d.skeleton = skeleton;
        d
    }

    /// Reorders the legs: new position `i` holds the old leg at `order[i]`.
    pub fn with_leg_order(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.legs.len())?;
        let legs = order.iter().map(|&p| self.legs[p]).collect();
        Self::new(self.skeleton, legs, self.vertices.clone(), self.edges.clone())
    }

    /// Rotates a circle diagram so that old position `r` becomes position 0.
    pub fn rotated(&self, r: usize) -> Result<Self> {
        let l = self.legs.len();
        if l == 0 {
            return Ok(self.clone());
        }
        let order: Vec<usize> = (0..l).map(|i| (i + r) % l).collect();
        self.with_leg_order(&order)
    }

    /// Transposes the first two slots of vertex `v`, reversing its orientation.
    pub fn flip_vertex(&self, v: usize) -> Result<Self> {
        if v >= self.vertices.len() {
            return invalid(format!("no vertex {v}"));
        }
        let mut vertices = self.vertices.clone();
        vertices[v].swap(0, 1);
        Self::new(self.skeleton, self.legs.clone(), vertices, self.edges.clone())
    }

    /// Applies a bijection to half-edge ids (for relabeling tests and tools).
    pub fn relabeled(&self, map: impl Fn(u32) -> u32) -> Result<Self> {
        Self::new(
            self.skeleton,
            self.legs.iter().map(|&h| map(h)).collect(),
            self.vertices.iter().map(|t| [map(t[0]), map(t[1]), map(t[2])]).collect(),
            self.edges.iter().map(|e| [map(e[0]), map(e[1])]).collect(),
        )
    }

    pub fn to_json(&self) -> DiagramJson {
        DiagramJson {
            skeleton: self.skeleton,
            legs: self.legs.clone(),
            vertices: self.vertices.clone(),
            edges: self.edges.clone(),
            directions: None,
        }
    }
}

pub(crate) fn wheel_parts(m: usize) -> (Vec<u32>, Vec<[u32; 3]>, Vec<[u32; 2]>) {
    let m = m as u32;
    let legs: Vec<u32> = (0..m).collect();
    let spoke = |i: u32| m + 3 * i;
    let hub_in = |i: u32| m + 3 * i + 1;
    let hub_out = |i: u32| m + 3 * i + 2;
    let vertices = (0..m).map(|i| [spoke(i), hub_in(i), hub_out(i)]).collect();
    let mut edges: Vec<[u32; 2]> = (0..m).map(|i| [i, spoke(i)]).collect();
    edges.extend((0..m).map(|i| [hub_out(i), hub_in((i + 1) % m)]));
    (legs, vertices, edges)
}

pub(crate) fn check_permutation(order: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return invalid(format!("expected a permutation of {n} positions"));
    }
    for &p in order {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return invalid(format!("not a permutation of {n} positions"));
        }
    }
    Ok(())
}

/// A diagram with an arrow on every internal edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedJacobiDiagram {
    base: JacobiDiagram,
    head: Vec<bool>,
}

impl DirectedJacobiDiagram {
    /// `directions` lists each edge once as `(tail, head)` in the base
    /// diagram's dense half-edge ids.
    pub fn new(base: JacobiDiagram, directions: &[(u32, u32)]) -> Result<Self> {
        let n = base.num_half_edges();
        let mut head = vec![false; n];
        let mut seen = vec![false; base.edges.len()];
        for &(t, h) in directions {
            if t as usize >= n || h as usize >= n || base.partner(t) != h {
                return invalid(format!("direction ({t},{h}) is not an edge"));
            }
            let e = base.edge_of(t);
            if std::mem::replace(&mut seen[e], true) {
                return invalid(format!("edge ({t},{h}) directed twice"));
            }
            head[h as usize] = true;
        }
        if seen.iter().any(|s| !s) {
            return invalid("some edge has no direction");
        }
        Ok(DirectedJacobiDiagram { base, head })
    }

    /// Builds from a per-half-edge head flag; every edge needs exactly one head.
    pub fn from_heads(base: JacobiDiagram, head: Vec<bool>) -> Result<Self> {
        if head.len() != base.num_half_edges() {
            return invalid("head flags do not match half-edge count");
        }
        for &[a, b] in base.edges() {
            if head[a as usize] == head[b as usize] {
                return invalid(format!("edge ({a},{b}) needs exactly one head"));
            }
        }
        Ok(DirectedJacobiDiagram { base, head })
    }

    /// One of the two legal orientations of the m-wheel: spokes point at the
    /// skeleton and the hub runs forward (or backward when `reversed`).
    pub fn wheel(m: usize, skeleton: Skeleton, reversed: bool) -> Result<Self> {
        let base = JacobiDiagram::wheel(m, skeleton)?;
        let dirs: Vec<(u32, u32)> = base
            .edges()
            .iter()
            .map(|&[a, b]| match base.site(a) {
                Site::Leg(_) => (b, a),
                Site::Vertex(_, _) if reversed => (b, a),
                Site::Vertex(_, _) => (a, b),
            })
            .collect();
        Self::new(base, &dirs)
    }

    pub fn base(&self) -> &JacobiDiagram {
        &self.base
    }

    pub fn into_base(self) -> JacobiDiagram {
        self.base
    }

    pub fn heads(&self) -> &[bool] {
        &self.head
    }

    pub fn is_head(&self, h: u32) -> bool {
        self.head[h as usize]
    }

    pub fn skeleton(&self) -> Skeleton {
        self.base.skeleton
    }

    pub fn degree(&self) -> usize {
        self.base.degree()
    }

    /// Every internal vertex has exactly one incoming half-edge.
    pub fn is_legal(&self) -> bool {
        self.illegal_vertex().is_none()
    }

    pub fn illegal_vertex(&self) -> Option<usize> {
        self.base
            .vertices
            .iter()
            .position(|t| t.iter().filter(|&&h| self.head[h as usize]).count() != 1)
    }

    /// Arrow at leg position `p`: true when the edge points at the skeleton.
    pub fn leg_points_to_skeleton(&self, p: usize) -> bool {
        self.head[self.base.legs[p] as usize]
    }

    pub fn directions(&self) -> Vec<(u32, u32)> {
        self.base
            .edges
            .iter()
            .map(|&[a, b]| if self.head[b as usize] { (a, b) } else { (b, a) })
            .collect()
    }

    /// Builds from arbitrary half-edge ids; each arrow is `[tail, head]`.
    pub fn build(skeleton: Skeleton, legs: Vec<u32>, vertices: Vec<[u32; 3]>, arrows: Vec<[u32; 2]>) -> Result<Self> {
        let base = JacobiDiagram::new(skeleton, legs, vertices, arrows)?;
        let dirs: Vec<(u32, u32)> = base.edges().iter().map(|&[t, h]| (t, h)).collect();
        Self::new(base, &dirs)
    }

    /// Same arrows on a reordered skeleton.
    pub fn with_leg_order(&self, order: &[usize]) -> Result<Self> {
        check_permutation(order, self.base.legs.len())?;
        let legs = order.iter().map(|&p| self.base.legs[p]).collect();
        let arrows = self.directions().into_iter().map(|(t, h)| [t, h]).collect();
        Self::build(self.base.skeleton, legs, self.base.vertices.clone(), arrows)
    }

    pub fn with_skeleton(&self, skeleton: Skeleton) -> Self {
        DirectedJacobiDiagram { base: self.base.with_skeleton(skeleton), head: self.head.clone() }
    }

    pub fn to_json(&self) -> DiagramJson {
        let mut j = self.base.to_json();
        j.directions = Some(self.directions().into_iter().map(|(t, h)| [t, h]).collect());
        j
    }
}

/// Interchange format for diagrams.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagramJson {
    pub skeleton: Skeleton,
    pub legs: Vec<u32>,
    pub vertices: Vec<[u32; 3]>,
    pub edges: Vec<[u32; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub directions: Option<Vec<[u32; 2]>>,
}

/// A parsed diagram, directed when the input carried `directions`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AnyDiagram {
    Undirected(JacobiDiagram),
    Directed(DirectedJacobiDiagram),
}

impl AnyDiagram {
    pub fn base(&self) -> &JacobiDiagram {
        match self {
            AnyDiagram::Undirected(d) => d,
            AnyDiagram::Directed(d) => d.base(),
        }
    }
}

impl DiagramJson {
    /// Validates every invariant and reports the first violation.
    pub fn into_diagram(self) -> Result<AnyDiagram> {
        let mut ids: HashMap<u32, u32> = HashMap::new();
        let mut next = 0u32;
        let mut dense = |h: u32| {
            *ids.entry(h).or_insert_with(|| {
                next += 1;
                next - 1
            })
        };
        // Dense ids follow the same order JacobiDiagram::new assigns.
        for &h in &self.legs {
            dense(h);
        }
        for t in &self.vertices {
            for &h in t {
                dense(h);
            }
        }
        let base = JacobiDiagram::new(self.skeleton, self.legs, self.vertices, self.edges)?;
        match self.directions {
            None => Ok(AnyDiagram::Undirected(base)),
            Some(dirs) => {
                let mut pairs = Vec::with_capacity(dirs.len());
                for [t, h] in dirs {
                    let (Some(&dt), Some(&dh)) = (ids.get(&t), ids.get(&h)) else {
                        return invalid(format!("direction ({t},{h}) uses unknown half-edge"));
                    };
                    pairs.push((dt, dh));
                }
                let d = DirectedJacobiDiagram::new(base, &pairs)?;
                if let Some(v) = d.illegal_vertex() {
                    return invalid(format!("vertex {v} does not have exactly one incoming edge"));
                }
                Ok(AnyDiagram::Directed(d))
            }
        }
    }
}

pub fn parse_json(s: &str) -> Result<AnyDiagram> {
    let j: DiagramJson = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
    j.into_diagram()
}

pub(crate) struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub(crate) fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    pub(crate) fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    pub(crate) fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    pub(crate) fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}
