//! Enumeration of low-degree diagrams up to isomorphism, and the audit of
//! legally orientable primitive classes.

use std::collections::{BTreeMap, BTreeSet};

use num::Zero;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonicalize, DiagramKey};
use crate::diagram::{JacobiDiagram, Skeleton};
use crate::error::{invalid, Result};
use crate::lie::{LieAlgebraData, Representation};
use crate::orient::legal_orientations;
use crate::rational::Q;
use crate::sigma::chi;
use crate::weights::{weight_circle, AlgebraRef, DiagramRef};

pub const MAX_DEGREE: usize = 5;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub key: DiagramKey,
    pub degree: usize,
    pub legs: usize,
    pub vertices: usize,
    pub primitive: bool,
    pub legally_orientable: bool,
    /// Representative vanishes by AS (odd automorphism).
    pub as_zero: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramCorpus {
    pub skeleton: Skeleton,
    pub max_degree: usize,
    pub entries: Vec<CorpusEntry>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum GenerationOrder {
    #[default]
    Forward,
    /// Legs are attached from the last position and choices tried in reverse.
    Reverse,
}

/// Every class of degree `1..=max_degree`. Vertex loops are excluded.
pub fn enumerate_diagrams(max_degree: usize, skeleton: Skeleton) -> Result<DiagramCorpus> {
    enumerate_with_order(max_degree, skeleton, GenerationOrder::Forward)
}

pub fn enumerate_with_order(max_degree: usize, skeleton: Skeleton, order: GenerationOrder) -> Result<DiagramCorpus> {
    if max_degree > MAX_DEGREE {
        return invalid(format!("max_degree {max_degree} exceeds the bound {MAX_DEGREE}"));
    }
    let strata: Vec<(usize, usize)> = (1..=max_degree)
        .flat_map(|n| (1..=2 * n).map(move |l| (l, 2 * n - l)))
        .collect();
    let found: Vec<BTreeSet<DiagramKey>> =
        strata.par_iter().map(|&(l, v)| enumerate_stratum(l, v, skeleton, order)).collect();
    let mut keys = BTreeSet::new();
    for s in found {
        keys.extend(s);
    }
    let mut entries: Vec<CorpusEntry> = keys.into_par_iter().map(entry_for).collect::<Result<_>>()?;
    entries.sort_by(|a, b| (a.degree, a.legs, &a.key).cmp(&(b.degree, b.legs, &b.key)));
    Ok(DiagramCorpus { skeleton, max_degree, entries })
}

fn entry_for(key: DiagramKey) -> Result<CorpusEntry> {
    let d = key.to_diagram()?;
    Ok(CorpusEntry {
        degree: d.degree(),
        legs: d.legs().len(),
        vertices: d.num_vertices(),
        primitive: d.is_primitive(),
        legally_orientable: !legal_orientations(&d).is_empty(),
        as_zero: canonicalize(&d).sign == 0,
        key,
    })
}

struct Gen {
    l: usize,
    v: usize,
    skeleton: Skeleton,
    reverse: bool,
    edges: Vec<[u32; 2]>,
    leg_done: Vec<bool>,
    /// filled slots per created vertex
    fill: Vec<usize>,
    out: BTreeSet<DiagramKey>,
}

impl Gen {
    fn slot(&self, v: usize, k: usize) -> u32 {
        (self.l + 3 * v + k) as u32
    }

    fn run(&mut self) {
        let next_leg = if self.reverse {
            (0..self.l).rev().find(|&p| !self.leg_done[p])
        } else {
            (0..self.l).find(|&p| !self.leg_done[p])
        };
        if let Some(p) = next_leg {
            self.leg_done[p] = true;
            let mut choices: Vec<Choice> = Vec::new();
            for q in 0..self.l {
                if !self.leg_done[q] {
                    choices.push(Choice::Leg(q));
                }
            }
            for u in 0..self.fill.len() {
                if self.fill[u] < 3 {
                    choices.push(Choice::Vertex(u));
                }
            }
            if self.fill.len() < self.v {
                choices.push(Choice::New);
            }
            if self.reverse {
                choices.reverse();
            }
            for c in choices {
                self.attach(p as u32, c);
            }
            self.leg_done[p] = false;
            return;
        }
        let Some(w) = self.fill.iter().position(|&f| f < 3) else {
            if self.fill.len() == self.v {
                self.finish();
            }
            return;
        };
        let h = self.slot(w, self.fill[w]);
        self.fill[w] += 1;
        let mut choices: Vec<Choice> =
            (w + 1..self.fill.len()).filter(|&u| self.fill[u] < 3).map(Choice::Vertex).collect();
        if self.fill.len() < self.v {
            choices.push(Choice::New);
        }
        if self.reverse {
            choices.reverse();
        }
        for c in choices {
            self.attach(h, c);
        }
        self.fill[w] -= 1;
    }

    fn attach(&mut self, h: u32, c: Choice) {
        match c {
            Choice::Leg(q) => {
                self.leg_done[q] = true;
                self.edges.push([h, q as u32]);
                self.run();
                self.edges.pop();
                self.leg_done[q] = false;
            }
            Choice::Vertex(u) => {
                let s = self.slot(u, self.fill[u]);
                self.fill[u] += 1;
                self.edges.push([h, s]);
                self.run();
                self.edges.pop();
                self.fill[u] -= 1;
            }
            Choice::New => {
                let u = self.fill.len();
                self.fill.push(1);
                self.edges.push([h, self.slot(u, 0)]);
                self.run();
                self.edges.pop();
                self.fill.pop();
            }
        }
    }

    fn finish(&mut self) {
        let legs: Vec<u32> = (0..self.l as u32).collect();
        let vertices: Vec<[u32; 3]> = (0..self.v).map(|v| [self.slot(v, 0), self.slot(v, 1), self.slot(v, 2)]).collect();
        if let Ok(d) = JacobiDiagram::new(self.skeleton, legs, vertices, self.edges.clone()) {
            self.out.insert(canonicalize(&d).key);
        }
    }
}

#[derive(Clone, Copy)]
enum Choice {
    Leg(usize),
    Vertex(usize),
    New,
}

fn enumerate_stratum(l: usize, v: usize, skeleton: Skeleton, order: GenerationOrder) -> BTreeSet<DiagramKey> {
    if (l + 3 * v) % 2 != 0 {
        return BTreeSet::new();
    }
    let mut g = Gen {
        l,
        v,
        skeleton,
        reverse: order == GenerationOrder::Reverse,
        edges: Vec::new(),
        leg_done: vec![false; l],
        fill: Vec::new(),
        out: BTreeSet::new(),
    };
    g.run();
    g.out
}

impl DiagramCorpus {
    /// Class counts per `(degree, legs)`.
    pub fn counts(&self) -> BTreeMap<(usize, usize), usize> {
        let mut m = BTreeMap::new();
        for e in &self.entries {
            *m.entry((e.degree, e.legs)).or_insert(0) += 1;
        }
        m
    }

    pub fn of_degree(&self, n: usize) -> impl Iterator<Item = &CorpusEntry> {
        self.entries.iter().filter(move |e| e.degree == n)
    }

    /// One JSON object per line.
    pub fn to_json_lines(&self) -> String {
        self.entries.iter().map(|e| serde_json::to_string(e).expect("serialisable") + "\n").collect()
    }

    pub fn from_json_lines(skeleton: Skeleton, max_degree: usize, text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let e: CorpusEntry =
                serde_json::from_str(line).map_err(|e| crate::Error::Parse(format!("line {}: {e}", i + 1)))?;
            entries.push(e);
        }
        Ok(DiagramCorpus { skeleton, max_degree, entries })
    }
}

/// A weight functional used to separate classes.
pub struct Functional<'a> {
    pub name: String,
    pub algebra: &'a LieAlgebraData,
    pub rep: &'a Representation,
}

#[derive(Clone, Debug, Serialize)]
pub struct TopLegClass {
    pub key: DiagramKey,
    /// A wheel with its legs in some order.
    pub wheel_like: bool,
    /// The leg-symmetrised sum vanishes modulo AS.
    pub symmetrized_zero: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct PrimitiveAudit {
    pub degree: usize,
    /// Legally orientable primitive classes per leg count.
    pub orientable_by_legs: BTreeMap<usize, usize>,
    /// All primitive classes per leg count.
    pub primitive_by_legs: BTreeMap<usize, usize>,
    /// Legally orientable primitives with exactly `degree` legs.
    pub top_leg_classes: Vec<TopLegClass>,
    pub functionals: Vec<String>,
    /// Pairing rank of primitives with fewer than `degree` legs.
    pub rank_lower: usize,
    /// The same with the wheel added.
    pub rank_lower_with_wheel: usize,
    /// Pairing rank of primitives with at most `degree` legs.
    pub rank_up_to_degree: usize,
    /// Pairing rank of all primitives of this degree.
    pub rank_all: usize,
    pub holds: bool,
}

/// Audits the primitive classes of degree `n`: legally orientable ones need
/// at least `n` legs; classes with more than `n` legs must pair inside the
/// span of those with at most `n`; modulo classes with fewer legs the
/// `n`-leg part is spanned by the wheel for even `n` and is empty for odd
/// `n`. Independence is measured by the pairing rank against `functionals`.
pub fn primitive_audit(corpus: &DiagramCorpus, n: usize, functionals: &[Functional<'_>]) -> Result<PrimitiveAudit> {
    if n == 0 || n > corpus.max_degree {
        return invalid(format!("corpus does not cover degree {n}"));
    }
    let prims: Vec<&CorpusEntry> = corpus.of_degree(n).filter(|e| e.primitive).collect();
    let mut orientable_by_legs = BTreeMap::new();
    let mut primitive_by_legs = BTreeMap::new();
    for e in &prims {
        *primitive_by_legs.entry(e.legs).or_insert(0) += 1;
        if e.legally_orientable {
            *orientable_by_legs.entry(e.legs).or_insert(0) += 1;
        }
    }
    let wheel = if n >= 2 { Some(JacobiDiagram::wheel(n, corpus.skeleton)?) } else { None };
    let wheel_keys: BTreeSet<DiagramKey> = match &wheel {
        Some(w) => crate::sigma::chi_terms(w).iter().map(|d| canonicalize(d).key).collect(),
        None => BTreeSet::new(),
    };
    let mut top = Vec::new();
    for e in prims.iter().filter(|e| e.legally_orientable && e.legs == n) {
        let d = e.key.to_diagram()?;
        top.push(TopLegClass {
            key: e.key.clone(),
            wheel_like: wheel_keys.contains(&e.key),
            symmetrized_zero: chi(&d).is_zero(),
        });
    }

    let vector = |d: &JacobiDiagram| -> Result<Vec<Q>> {
        let d = if d.skeleton() == Skeleton::Interval { d.close_interval()? } else { d.clone() };
        functionals
            .iter()
            .map(|f| weight_circle(DiagramRef::Plain(&d), AlgebraRef::Lie(f.algebra), f.rep))
            .collect()
    };
    let rows_where = |pred: &dyn Fn(&CorpusEntry) -> bool| -> Result<Vec<Vec<Q>>> {
        prims.iter().filter(|e| pred(e)).map(|e| vector(&e.key.to_diagram()?)).collect()
    };
    let lower = rows_where(&|e| e.legs < n)?;
    let rank_lower = rank(lower.clone());
    let mut with_wheel = lower;
    if let Some(w) = &wheel {
        with_wheel.push(vector(w)?);
    }
    let rank_lower_with_wheel = rank(with_wheel);
    let rank_up_to_degree = rank(rows_where(&|e| e.legs <= n)?);
    let rank_all = rank(rows_where(&|_| true)?);

    let min_orientable_legs = prims.iter().filter(|e| e.legally_orientable).map(|e| e.legs).min();
    let holds = if n == 1 {
        let theta = canonicalize(&JacobiDiagram::theta(corpus.skeleton)).key;
        prims.iter().all(|e| e.key == theta)
    } else {
        let bound = min_orientable_legs.is_none_or(|m| m >= n);
        let quotient = if n % 2 == 0 { rank_lower_with_wheel } else { rank_lower };
        bound && rank_up_to_degree == rank_all && quotient == rank_up_to_degree
    };
    Ok(PrimitiveAudit {
        degree: n,
        orientable_by_legs,
        primitive_by_legs,
        top_leg_classes: top,
        functionals: functionals.iter().map(|f| f.name.clone()).collect(),
        rank_lower,
        rank_lower_with_wheel,
        rank_up_to_degree,
        rank_all,
        holds,
    })
}

/// Rank over the rationals by Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Q>>) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, p);
        let pivot = rows[r][c].clone();
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = &rows[i][c] / &pivot;
                for k in c..cols {
                    let delta = &rows[r][k] * &f;
                    rows[i][k] -= delta;
                }
            }
        }
        r += 1;
    }
    r
}
