//! Canonical keys for diagrams up to skeleton-preserving isomorphism.
//!
//! Leg positions seed a colour refinement of the internal vertices; ties are
//! broken by individualising each vertex of the first non-trivial cell and
//! keeping the lexicographically least edge list. Circle diagrams also
//! minimise over rotations. The sign compares vertex orientations with the
//! representative rebuilt from the key; it is 0 when the diagram has an
//! orientation-reversing automorphism (and so vanishes by AS).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::diagram::{DirectedJacobiDiagram, JacobiDiagram, Site, Skeleton};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DiagramKey {
    skeleton: Skeleton,
    legs: u16,
    vertices: u16,
    directed: bool,
    /// Sorted edge list over canonical node ids: legs are `0..legs`, vertices
    /// follow. Undirected edges are `(min, max)`, directed ones `(tail, head)`.
    edges: Vec<(u16, u16)>,
}

/// Result of canonicalisation: the diagram equals `sign` times the key's
/// representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Canonical {
    pub key: DiagramKey,
    pub sign: i8,
}

impl DiagramKey {
    pub fn skeleton(&self) -> Skeleton {
        self.skeleton
    }

    pub fn legs(&self) -> usize {
        self.legs as usize
    }

    pub fn vertices(&self) -> usize {
        self.vertices as usize
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn degree(&self) -> usize {
        self.edges.len() - self.vertices as usize
    }

    pub fn edges(&self) -> &[(u16, u16)] {
        &self.edges
    }

    /// Representative diagram with positive orientation.
    pub fn to_diagram(&self) -> Result<JacobiDiagram> {
        Ok(self.rebuild()?.0)
    }

    /// Representative directed diagram; fails for undirected keys.
    pub fn to_directed(&self) -> Result<DirectedJacobiDiagram> {
        if !self.directed {
            return Err(Error::InvalidArgument("key is undirected".into()));
        }
        let (d, dirs) = self.rebuild()?;
        DirectedJacobiDiagram::new(d, &dirs)
    }

    fn rebuild(&self) -> Result<(JacobiDiagram, Vec<(u32, u32)>)> {
        let (l, v) = (self.legs as usize, self.vertices as usize);
        let mut legs = vec![u32::MAX; l];
        let mut slots: Vec<Vec<u32>> = vec![Vec::new(); v];
        let mut edges = Vec::with_capacity(self.edges.len());
        for (e, &(a, b)) in self.edges.iter().enumerate() {
            let (ha, hb) = (2 * e as u32, 2 * e as u32 + 1);
            for (node, h) in [(a as usize, ha), (b as usize, hb)] {
                if node < l {
                    if legs[node] != u32::MAX {
                        return Err(Error::Parse(format!("leg {node} used twice in key")));
                    }
                    legs[node] = h;
                } else if node < l + v {
                    slots[node - l].push(h);
                } else {
                    return Err(Error::Parse(format!("node {node} out of range in key")));
                }
            }
            edges.push([ha, hb]);
        }
        if legs.contains(&u32::MAX) || slots.iter().any(|s| s.len() != 3) {
            return Err(Error::Parse("key does not describe a trivalent diagram".into()));
        }
        let vertices: Vec<[u32; 3]> = slots.iter().map(|s| [s[0], s[1], s[2]]).collect();
        let raw = JacobiDiagram::new(self.skeleton, legs, vertices, edges)?;
        let dirs: Vec<(u32, u32)> = raw.edges().iter().map(|&[a, b]| (a, b)).collect();
        let heads = self.directed.then(|| head_flags(&raw, &dirs));
        let graph = Graph::new(&raw, heads.as_deref());
        let ids: Vec<u16> = (0..(l + v) as u16).collect();
        let order = reference_orders(&graph, &ids);
        let vertices: Vec<[u32; 3]> = order.into_iter().collect();
        let d = JacobiDiagram::new(self.skeleton, raw.legs().to_vec(), vertices, raw.edges().to_vec())?;
        let dirs = d.edges().iter().map(|&[a, b]| (a, b)).collect();
        Ok((d, dirs))
    }
}

fn head_flags(d: &JacobiDiagram, dirs: &[(u32, u32)]) -> Vec<bool> {
    let mut head = vec![false; d.num_half_edges()];
    for &(_, h) in dirs {
        head[h as usize] = true;
    }
    head
}

impl fmt::Display for DiagramKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self.skeleton {
            Skeleton::Circle => 'C',
            Skeleton::Interval => 'I',
        };
        let sep = if self.directed { '>' } else { '-' };
        write!(f, "{s}{}.{}:", self.legs, self.vertices)?;
        for (i, (a, b)) in self.edges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}{sep}{b}")?;
        }
        Ok(())
    }
}

impl FromStr for DiagramKey {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed diagram key {s:?}"));
        let mut chars = s.chars();
        let skeleton = match chars.next() {
            Some('C') => Skeleton::Circle,
            Some('I') => Skeleton::Interval,
            _ => return Err(bad()),
        };
        let rest = chars.as_str();
        let (head, body) = rest.split_once(':').ok_or_else(bad)?;
        let (l, v) = head.split_once('.').ok_or_else(bad)?;
        let legs: u16 = l.parse().map_err(|_| bad())?;
        let vertices: u16 = v.parse().map_err(|_| bad())?;
        let directed = body.contains('>');
        let mut edges = Vec::new();
        if !body.is_empty() {
            for part in body.split(',') {
                let (a, b) = part.split_once(if directed { '>' } else { '-' }).ok_or_else(bad)?;
                edges.push((a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?));
            }
        }
        let key = DiagramKey { skeleton, legs, vertices, directed, edges };
        key.rebuild()?;
        Ok(key)
    }
}

impl Serialize for DiagramKey {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DiagramKey {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Node-level view used by the search: legs are nodes `0..L`, vertices follow.
struct Graph<'a> {
    d: &'a JacobiDiagram,
    heads: Option<&'a [bool]>,
    l: usize,
    v: usize,
}

impl<'a> Graph<'a> {
    fn new(d: &'a JacobiDiagram, heads: Option<&'a [bool]>) -> Self {
        Graph { d, heads, l: d.legs().len(), v: d.num_vertices() }
    }

    fn node(&self, h: u32) -> usize {
        match self.d.site(h) {
            Site::Leg(p) => p,
            Site::Vertex(v, _) => self.l + v,
        }
    }

    /// 0 undirected, 1 tail, 2 head.
    fn marker(&self, h: u32) -> u8 {
        match self.heads {
            None => 0,
            Some(hd) if hd[h as usize] => 2,
            Some(_) => 1,
        }
    }
}

/// Canonical form of an undirected diagram.
pub fn canonicalize(d: &JacobiDiagram) -> Canonical {
    if d.has_loop() {
        // Swapping the two ends of a loop reverses the vertex: D = -D.
        let mut c = search(&Graph::new(d, None));
        c.sign = 0;
        return c;
    }
    search(&Graph::new(d, None))
}

/// Canonical form of a directed diagram. Arrows are part of the key.
pub fn canonicalize_directed(d: &DirectedJacobiDiagram) -> Canonical {
    search(&Graph::new(d.base(), Some(d.heads())))
}

fn search(g: &Graph<'_>) -> Canonical {
    let rotations: Vec<usize> = match g.d.skeleton() {
        Skeleton::Circle if g.l > 0 => (0..g.l).collect(),
        _ => vec![0],
    };
    let mut best: Option<(Vec<(u16, u16)>, i8, bool)> = None;
    for r in rotations {
        let leg_id: Vec<u16> = (0..g.l).map(|p| ((p + g.l - r) % g.l.max(1)) as u16).collect();
        let mut colors = vec![0u32; g.v];
        refine(g, &leg_id, &mut colors);
        explore(g, &leg_id, colors, &mut best);
    }
    let (edges, sign, conflict) = best.expect("at least one leaf");
    Canonical {
        key: DiagramKey {
            skeleton: g.d.skeleton(),
            legs: g.l as u16,
            vertices: g.v as u16,
            directed: g.heads.is_some(),
            edges,
        },
        sign: if conflict { 0 } else { sign },
    }
}

fn node_color(g: &Graph<'_>, leg_id: &[u16], colors: &[u32], node: usize) -> u32 {
    if node < g.l {
        leg_id[node] as u32
    } else {
        g.l as u32 + colors[node - g.l]
    }
}

fn refine(g: &Graph<'_>, leg_id: &[u16], colors: &mut [u32]) {
    let mut cells = count_distinct(colors);
    loop {
        let sigs: Vec<(u32, [(u8, u32, u8); 3])> = (0..g.v)
            .map(|v| {
                let t = g.d.vertices()[v];
                let mut nb = t.map(|h| {
                    let p = g.d.partner(h);
                    (g.marker(h), node_color(g, leg_id, colors, g.node(p)), g.marker(p))
                });
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut sorted = sigs.clone();
        sorted.sort_unstable();
        sorted.dedup();
        for (v, s) in sigs.iter().enumerate() {
            colors[v] = sorted.binary_search(s).unwrap() as u32;
        }
        if sorted.len() == cells {
            return;
        }
        cells = sorted.len();
    }
}

fn count_distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

fn explore(
    g: &Graph<'_>,
    leg_id: &[u16],
    colors: Vec<u32>,
    best: &mut Option<(Vec<(u16, u16)>, i8, bool)>,
) {
    // First (lowest colour) non-singleton cell.
    let mut counts = vec![0usize; g.v];
    for &c in &colors {
        counts[c as usize] += 1;
    }
    let target = counts.iter().position(|&n| n > 1);
    let Some(target) = target else {
        let ids: Vec<u16> = (0..g.l)
            .map(|p| leg_id[p])
            .chain(colors.iter().map(|&c| (g.l as u32 + c) as u16))
            .collect();
        let edges = leaf_edges(g, &ids);
        let sign = leaf_sign(g, &ids);
        match best {
            Some((b, s, conflict)) => match edges.cmp(b) {
                std::cmp::Ordering::Less => *best = Some((edges, sign, false)),
                std::cmp::Ordering::Equal => {
                    if *s != sign {
                        *conflict = true;
                    }
                }
                std::cmp::Ordering::Greater => {}
            },
            None => *best = Some((edges, sign, false)),
        }
        return;
    };
    for v in (0..g.v).filter(|&v| colors[v] as usize == target) {
        let mut c: Vec<u32> = colors
            .iter()
            .enumerate()
            .map(|(u, &col)| 2 * col + u32::from(u != v))
            .collect();
        let mut sorted = c.clone();
        sorted.sort_unstable();
        sorted.dedup();
        for x in c.iter_mut() {
            *x = sorted.binary_search(x).unwrap() as u32;
        }
        refine(g, leg_id, &mut c);
        explore(g, leg_id, c, best);
    }
}

fn leaf_edges(g: &Graph<'_>, ids: &[u16]) -> Vec<(u16, u16)> {
    let mut edges: Vec<(u16, u16)> = g
        .d
        .edges()
        .iter()
        .map(|&[a, b]| {
            let (na, nb) = (ids[g.node(a)], ids[g.node(b)]);
            match g.heads {
                Some(hd) if hd[a as usize] => (nb, na),
                Some(_) => (na, nb),
                None => (na.min(nb), na.max(nb)),
            }
        })
        .collect();
    edges.sort_unstable();
    edges
}

/// Reference slot order for every vertex under the labelling `ids`.
fn reference_orders(g: &Graph<'_>, ids: &[u16]) -> Vec<[u32; 3]> {
    let mut by_id: Vec<usize> = (0..g.v).collect();
    by_id.sort_by_key(|&v| ids[g.l + v]);
    let mut order: Vec<Option<[u32; 3]>> = vec![None; g.v];
    for &v in &by_id {
        let cv = ids[g.l + v];
        let t = g.d.vertices()[v];
        let mut hs = t;
        hs.sort_by_key(|&h| {
            let p = g.d.partner(h);
            let pn = g.node(p);
            let tie = if pn >= g.l && ids[pn] < cv {
                let pv = pn - g.l;
                order[pv].expect("lower vertex ordered first").iter().position(|&x| x == p).unwrap() as u32
            } else {
                h
            };
            (ids[pn], g.marker(h), tie)
        });
        order[v] = Some(hs);
    }
    order.into_iter().map(|o| o.unwrap()).collect()
}

fn leaf_sign(g: &Graph<'_>, ids: &[u16]) -> i8 {
    let order = reference_orders(g, ids);
    let mut sign = 1i8;
    for (v, r) in order.iter().enumerate() {
        let t = g.d.vertices()[v];
        let pos: Vec<usize> = r.iter().map(|h| t.iter().position(|x| x == h).unwrap()).collect();
        let inversions = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| pos[i] > pos[j]).count();
        if inversions % 2 == 1 {
            sign = -sign;
        }
    }
    sign
}
