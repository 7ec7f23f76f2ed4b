//! Labeling/contracting into the enveloping algebra and traced weight systems.

use std::collections::{BTreeMap, HashMap};

use num::Zero;
use serde::Serialize;

use crate::diagram::{DirectedJacobiDiagram, JacobiDiagram, Skeleton};
use crate::error::{invalid, Result};
use crate::lie::{DoubleAlgebra, LieAlgebraData, Representation};
use crate::matrix::SparseMatrix;
use crate::orient::legal_orientations;
use crate::rational::{self, Q};
use crate::tensor::{contract_network, Label, SparseTensor};

pub type Word = Vec<u32>;

/// Formal sum of `arity`-tuples of words with rational coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnvelopingTensor {
    arity: usize,
    terms: BTreeMap<Vec<Word>, Q>,
}

impl EnvelopingTensor {
    pub fn new(arity: usize) -> Result<Self> {
        if arity < 1 {
            return invalid("tensor arity must be at least 1");
        }
        Ok(EnvelopingTensor { arity, terms: BTreeMap::new() })
    }

    /// `1 ⊗ ... ⊗ 1`.
    pub fn unit(arity: usize) -> Result<Self> {
        let mut t = Self::new(arity)?;
        t.add_term(vec![Vec::new(); arity], &rational::one());
        Ok(t)
    }

    /// Arity-one tensor from `(word, coefficient)` pairs.
    pub fn from_words(words: impl IntoIterator<Item = (Word, Q)>) -> Self {
        let mut t = EnvelopingTensor { arity: 1, terms: BTreeMap::new() };
        for (w, c) in words {
            t.add_term(vec![w], &c);
        }
        t
    }

    pub fn add_term(&mut self, slots: Vec<Word>, c: &Q) {
        assert_eq!(slots.len(), self.arity, "slot count must equal arity");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(slots) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&mut self, other: &Self, c: &Q) {
        assert_eq!(self.arity, other.arity);
        for (k, v) in &other.terms {
            self.add_term(k.clone(), &(v * c));
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<Word>, &Q)> {
        self.terms.iter()
    }

    /// Words of an arity-one tensor.
    pub fn words(&self) -> impl Iterator<Item = (&Word, &Q)> {
        assert_eq!(self.arity, 1);
        self.terms.iter().map(|(k, v)| (&k[0], v))
    }

    pub fn coefficient(&self, slots: &[Word]) -> Q {
        self.terms.get(slots).cloned().unwrap_or_else(Q::zero)
    }

    pub fn all_letters(&self, pred: impl Fn(u32) -> bool) -> bool {
        self.terms.keys().all(|k| k.iter().flatten().all(|&x| pred(x)))
    }

    /// Image in `U(a)^{⊗ arity}`: every slot rewritten in the PBW basis of
    /// nondecreasing words via `x_i x_j = x_j x_i + [x_i, x_j]`.
    pub fn normal_ordered(&self, a: &LieAlgebraData) -> Result<Self> {
        if let Some(&bad) = self.terms.keys().flatten().flatten().find(|&&x| x as usize >= a.dim()) {
            return invalid(format!("letter {bad} outside {}", a.name()));
        }
        let mut memo = HashMap::new();
        let mut out = Self::new(self.arity)?;
        for (slots, c) in &self.terms {
            let mut partial: Vec<(Vec<Word>, Q)> = vec![(Vec::new(), c.clone())];
            for w in slots {
                let nf = normal_word(w, a, &mut memo);
                partial = partial
                    .iter()
                    .flat_map(|(p, pc)| {
                        nf.iter().map(move |(v, vc)| {
                            let mut p = p.clone();
                            p.push(v.clone());
                            (p, pc * vc)
                        })
                    })
                    .collect();
            }
            for (p, pc) in partial {
                out.add_term(p, &pc);
            }
        }
        Ok(out)
    }

    /// `Σ c · ρ(w)` for an arity-one tensor.
    pub fn matrix_in(&self, rho: &Representation) -> Result<SparseMatrix> {
        if self.arity != 1 {
            return invalid("matrix_in needs an arity-one tensor");
        }
        let mut m = SparseMatrix::zeros(rho.size(), rho.size());
        for (w, c) in self.words() {
            if let Some(&bad) = w.iter().find(|&&x| x as usize >= rho.matrices().len()) {
                return invalid(format!("letter {bad} outside the representation"));
            }
            let ws: Vec<usize> = w.iter().map(|&x| x as usize).collect();
            m = &m + &rho.word(&ws).scale(c);
        }
        Ok(m)
    }

    pub fn trace_in(&self, rho: &Representation) -> Result<Q> {
        Ok(self.matrix_in(rho)?.trace())
    }

    pub fn to_json(&self) -> Vec<TensorTermJson> {
        self.terms
            .iter()
            .map(|(k, c)| TensorTermJson {
                word: if self.arity == 1 { WordJson::Flat(k[0].clone()) } else { WordJson::Slots(k.clone()) },
                coeff: rational::to_string(c),
            })
            .collect()
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(untagged)]
pub enum WordJson {
    Flat(Word),
    Slots(Vec<Word>),
}

#[derive(Clone, Debug, Serialize)]
pub struct TensorTermJson {
    pub word: WordJson,
    pub coeff: String,
}

#[derive(Clone, Copy, Debug)]
pub enum DiagramRef<'a> {
    Plain(&'a JacobiDiagram),
    Directed(&'a DirectedJacobiDiagram),
}

impl<'a> From<&'a JacobiDiagram> for DiagramRef<'a> {
    fn from(d: &'a JacobiDiagram) -> Self {
        DiagramRef::Plain(d)
    }
}

impl<'a> From<&'a DirectedJacobiDiagram> for DiagramRef<'a> {
    fn from(d: &'a DirectedJacobiDiagram) -> Self {
        DiagramRef::Directed(d)
    }
}

impl<'a> DiagramRef<'a> {
    pub fn base(&self) -> &'a JacobiDiagram {
        match self {
            DiagramRef::Plain(d) => d,
            DiagramRef::Directed(d) => d.base(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub enum AlgebraRef<'a> {
    Lie(&'a LieAlgebraData),
    Double(&'a DoubleAlgebra),
}

impl<'a> From<&'a LieAlgebraData> for AlgebraRef<'a> {
    fn from(a: &'a LieAlgebraData) -> Self {
        AlgebraRef::Lie(a)
    }
}

impl<'a> From<&'a DoubleAlgebra> for AlgebraRef<'a> {
    fn from(a: &'a DoubleAlgebra) -> Self {
        AlgebraRef::Double(a)
    }
}

impl<'a> AlgebraRef<'a> {
    pub fn data(&self) -> &'a LieAlgebraData {
        match self {
            AlgebraRef::Lie(a) => a,
            AlgebraRef::Double(a) => a.data(),
        }
    }
}

const MAT: Label = 1 << 30;

/// Per half-edge index restriction: `None` any, `Some(true)` bar only,
/// `Some(false)` non-bar only.
fn domains(d: DiagramRef<'_>, a: AlgebraRef<'_>) -> Result<(Vec<Option<bool>>, usize)> {
    match (d, a) {
        (DiagramRef::Plain(p), _) => Ok((vec![None; p.num_half_edges()], a.data().dim())),
        (DiagramRef::Directed(dd), AlgebraRef::Double(dbl)) => {
            Ok(((0..dd.base().num_half_edges() as u32).map(|h| Some(dd.is_head(h))).collect(), dbl.base_dim()))
        }
        (DiagramRef::Directed(_), AlgebraRef::Lie(_)) => {
            invalid("a directed diagram needs a double algebra")
        }
    }
}

fn network(
    d: DiagramRef<'_>,
    a: AlgebraRef<'_>,
    rho: Option<&Representation>,
    close: bool,
) -> Result<Vec<SparseTensor>> {
    let base = d.base();
    let alg = a.data();
    let (dom, split) = domains(d, a)?;
    let ok = |h: u32, i: usize| match dom[h as usize] {
        None => true,
        Some(bar) => (i >= split) == bar,
    };
    let mut factors = Vec::new();
    for t in base.vertices() {
        let entries = alg
            .lowered()
            .iter()
            .filter(|([i, j, k], _)| ok(t[0], *i) && ok(t[1], *j) && ok(t[2], *k))
            .map(|([i, j, k], v)| (vec![*i as u32, *j as u32, *k as u32], v.clone()));
        factors.push(SparseTensor::new(t.to_vec(), entries));
    }
    for &[x, y] in base.edges() {
        let entries = alg
            .metric_inverse()
            .iter()
            .filter(|(i, j, _)| ok(x, *i) && ok(y, *j))
            .map(|(i, j, v)| (vec![i as u32, j as u32], v.clone()));
        factors.push(SparseTensor::new(vec![x, y], entries));
    }
    if let Some(rho) = rho {
        if rho.matrices().len() != alg.dim() {
            return invalid(format!(
                "representation acts on a {}-dimensional algebra, not {}",
                rho.matrices().len(),
                alg.dim()
            ));
        }
        let l = base.legs().len();
        if l == 0 {
            let id = SparseMatrix::identity(rho.size());
            let out = if close { vec![MAT, MAT] } else { vec![MAT, MAT + 1] };
            factors.push(SparseTensor::new(out, id.iter().map(|(r, c, v)| (vec![r as u32, c as u32], v.clone()))));
        }
        for (p, &h) in base.legs().iter().enumerate() {
            let next = if close && p + 1 == l { MAT } else { MAT + p as Label + 1 };
            let mut entries = Vec::new();
            for (i, m) in rho.matrices().iter().enumerate() {
                if !ok(h, i) {
                    continue;
                }
                for (r, c, v) in m.iter() {
                    entries.push((vec![i as u32, r as u32, c as u32], v.clone()));
                }
            }
            factors.push(SparseTensor::new(vec![h, MAT + p as Label, next], entries));
        }
    }
    Ok(factors)
}

fn normal_word(w: &[u32], a: &LieAlgebraData, memo: &mut HashMap<Word, BTreeMap<Word, Q>>) -> BTreeMap<Word, Q> {
    if let Some(hit) = memo.get(w) {
        return hit.clone();
    }
    let mut out = BTreeMap::new();
    match w.windows(2).position(|p| p[0] > p[1]) {
        None => {
            out.insert(w.to_vec(), rational::one());
        }
        Some(p) => {
            let mut swapped = w.to_vec();
            swapped.swap(p, p + 1);
            let mut parts = vec![(swapped, rational::one())];
            for (k, c) in a.bracket(w[p] as usize, w[p + 1] as usize) {
                let mut v = w[..p].to_vec();
                v.push(*k as u32);
                v.extend_from_slice(&w[p + 2..]);
                parts.push((v, c.clone()));
            }
            for (v, c) in parts {
                for (x, d) in normal_word(&v, a, memo) {
                    let e = out.entry(x).or_insert_with(Q::zero);
                    *e += &c * d;
                }
            }
            out.retain(|_, c| !c.is_zero());
        }
    }
    memo.insert(w.to_vec(), out.clone());
    out
}

/// The labeling-and-contracting map: one word per index assignment of the
/// legs, read in skeleton order. Needs an interval skeleton.
pub fn contract_l(d: DiagramRef<'_>, a: AlgebraRef<'_>) -> Result<EnvelopingTensor> {
    if d.base().skeleton() != Skeleton::Interval {
        return invalid("contract_l needs an interval skeleton; use weight_circle on the circle");
    }
    let factors = network(d, a, None, false)?;
    let legs: Vec<Label> = d.base().legs().to_vec();
    let t = contract_network(factors, &legs);
    if t.is_zero() {
        return EnvelopingTensor::new(1);
    }
    Ok(EnvelopingTensor::from_words(t.entries_in(&legs)))
}

/// Matrix-valued weight `Σ c · ρ(w)` of an interval diagram.
pub fn weight_interval(d: DiagramRef<'_>, a: AlgebraRef<'_>, rho: &Representation) -> Result<SparseMatrix> {
    if d.base().skeleton() != Skeleton::Interval {
        return invalid("weight_interval needs an interval skeleton");
    }
    let l = d.base().legs().len() as Label;
    let factors = network(d, a, Some(rho), false)?;
    let out = [MAT, MAT + l.max(1)];
    let t = contract_network(factors, &out);
    let mut m = SparseMatrix::zeros(rho.size(), rho.size());
    if !t.is_zero() {
        for (k, v) in t.entries_in(&out) {
            m.set(k[0] as usize, k[1] as usize, v);
        }
    }
    Ok(m)
}

/// Traced weight of a circle diagram.
pub fn weight_circle(d: DiagramRef<'_>, a: AlgebraRef<'_>, rho: &Representation) -> Result<Q> {
    if d.base().skeleton() != Skeleton::Circle {
        return invalid("weight_circle needs a circle skeleton");
    }
    let factors = network(d, a, Some(rho), true)?;
    Ok(contract_network(factors, &[]).scalar_value())
}

/// Same value computed through the word expansion and a trace of products.
pub fn weight_circle_by_words(d: DiagramRef<'_>, a: AlgebraRef<'_>, rho: &Representation) -> Result<Q> {
    if d.base().skeleton() != Skeleton::Circle {
        return invalid("weight_circle needs a circle skeleton");
    }
    let cut = match d {
        DiagramRef::Plain(p) => contract_l(DiagramRef::Plain(&p.with_skeleton(Skeleton::Interval)), a)?,
        DiagramRef::Directed(p) => contract_l(DiagramRef::Directed(&p.with_skeleton(Skeleton::Interval)), a)?,
    };
    if d.base().legs().is_empty() {
        return Ok(Q::from_integer(rho.size().into()));
    }
    cut.trace_in(rho)
}

/// Sum over legal orientations of the directed two-index weights.
pub fn directed_weight_sum(d: &JacobiDiagram, dbl: &DoubleAlgebra, rho: &Representation) -> Result<Q> {
    if d.skeleton() != Skeleton::Circle {
        return invalid("directed_weight_sum needs a circle skeleton");
    }
    let mut total = Q::zero();
    for o in legal_orientations(d) {
        total += weight_circle(DiagramRef::Directed(&o), AlgebraRef::Double(dbl), rho)?;
    }
    Ok(total)
}

/// Sum over legal orientations of `contract_l` (interval skeleton).
pub fn directed_l_sum(d: &JacobiDiagram, dbl: &DoubleAlgebra) -> Result<EnvelopingTensor> {
    let mut total = EnvelopingTensor::new(1)?;
    for o in legal_orientations(d) {
        total.add(&contract_l(DiagramRef::Directed(&o), AlgebraRef::Double(dbl))?, &rational::one());
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_gl, defining, double, rep_r};
    use crate::rational::q;

    #[test]
    fn normal_order_of_a_commutator() {
        let g = build_gl(2).unwrap();
        let (i, j) = (1u32, 2u32);
        let mut t = EnvelopingTensor::from_words([(vec![j, i], rational::one())]);
        t.add_term(vec![vec![i, j]], &-rational::one());
        let mut br = EnvelopingTensor::new(1).unwrap();
        for (k, c) in g.bracket(j as usize, i as usize) {
            br.add_term(vec![vec![*k as u32]], c);
        }
        assert_eq!(t.normal_ordered(&g).unwrap(), br.normal_ordered(&g).unwrap());
        let b = defining(&g).unwrap();
        let w = EnvelopingTensor::from_words([(vec![3, 2, 1, 0], rational::one())]);
        assert_eq!(w.matrix_in(&b).unwrap(), w.normal_ordered(&g).unwrap().matrix_in(&b).unwrap());
    }

    #[test]
    fn theta_on_gl2_defining() {
        let g = build_gl(2).unwrap();
        let b = defining(&g).unwrap();
        let th = JacobiDiagram::theta(Skeleton::Circle);
        assert_eq!(weight_circle((&th).into(), (&g).into(), &b).unwrap(), q(4));
        assert_eq!(weight_circle_by_words((&th).into(), (&g).into(), &b).unwrap(), q(4));
    }

    #[test]
    fn casimir_word_on_interval() {
        let g = build_gl(2).unwrap();
        let th = JacobiDiagram::theta(Skeleton::Interval);
        let l = contract_l((&th).into(), (&g).into()).unwrap();
        assert_eq!(l.len(), 4);
        for (w, c) in l.words() {
            let (a, b) = (w[0] as usize, w[1] as usize);
            assert_eq!(*c, g.metric_inverse().get(a, b));
        }
    }

    #[test]
    fn empty_diagram_is_unit() {
        let g = build_gl(2).unwrap();
        let l = contract_l((&JacobiDiagram::empty(Skeleton::Interval)).into(), (&g).into()).unwrap();
        assert_eq!(l, EnvelopingTensor::unit(1).unwrap());
    }

    #[test]
    fn directed_needs_double() {
        let g = build_gl(2).unwrap();
        let w = DirectedJacobiDiagram::wheel(2, Skeleton::Interval, false).unwrap();
        assert!(contract_l((&w).into(), (&g).into()).is_err());
        let dbl = double(&g).unwrap();
        let l = contract_l((&w).into(), (&dbl).into()).unwrap();
        assert!(!l.is_zero());
        assert!(l.all_letters(|x| x >= 4));
    }

    #[test]
    fn network_and_word_routes_agree() {
        let g = build_gl(2).unwrap();
        let dbl = double(&g).unwrap();
        let r = rep_r(&dbl, &defining(&g).unwrap()).unwrap();
        let b = defining(&g).unwrap();
        for d in [
            JacobiDiagram::wheel(2, Skeleton::Circle).unwrap(),
            JacobiDiagram::tripod(Skeleton::Circle),
            JacobiDiagram::theta_power(2, Skeleton::Circle).unwrap(),
        ] {
            assert_eq!(
                weight_circle((&d).into(), (&g).into(), &b).unwrap(),
                weight_circle_by_words((&d).into(), (&g).into(), &b).unwrap()
            );
            assert_eq!(
                weight_circle((&d).into(), (&dbl).into(), &r).unwrap(),
                weight_circle_by_words((&d).into(), (&dbl).into(), &r).unwrap()
            );
        }
    }

    #[test]
    fn dimension_mismatch() {
        let g = build_gl(2).unwrap();
        let dbl = double(&g).unwrap();
        let b = defining(&g).unwrap();
        let th = JacobiDiagram::theta(Skeleton::Circle);
        assert!(weight_circle((&th).into(), (&dbl).into(), &b).is_err());
    }
}
