//! The observable `Σ_m = Tr_½ ∘ λ ∘ R^{⊗m} ∘ Δ^m` and the leg-permutation map χ.

use num::Zero;
use rayon::prelude::*;

use crate::diagram::{DirectedJacobiDiagram, JacobiDiagram, Skeleton};
use crate::error::{invalid, Result};
use crate::lie::{double, LieAlgebraData, Representation};
use crate::matrix::SparseMatrix;
use crate::rational::{self, Q};
use crate::sum::DiagramSum;
use crate::weights::{contract_l, weight_circle, AlgebraRef, DiagramRef, EnvelopingTensor, Word};

/// A `2n × 2n` matrix with block accessors `(A B; C D)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockMatrix2n {
    m: SparseMatrix,
}

impl BlockMatrix2n {
    pub fn new(m: SparseMatrix) -> Result<Self> {
        if m.rows() != m.cols() || m.rows() % 2 != 0 {
            return invalid(format!("block matrix must be square of even size, got {}x{}", m.rows(), m.cols()));
        }
        Ok(BlockMatrix2n { m })
    }

    pub fn identity(n: usize) -> Self {
        BlockMatrix2n { m: SparseMatrix::identity(2 * n) }
    }

    /// `C = (0 0; I 0)`.
    pub fn c(n: usize) -> Self {
        BlockMatrix2n { m: SparseMatrix::unit(2, 2, 1, 0).kron(&SparseMatrix::identity(n)) }
    }

    pub fn n(&self) -> usize {
        self.m.rows() / 2
    }

    pub fn matrix(&self) -> &SparseMatrix {
        &self.m
    }

    pub fn a(&self) -> SparseMatrix {
        self.m.block(0, 0, self.n(), self.n())
    }

    pub fn b(&self) -> SparseMatrix {
        self.m.block(0, self.n(), self.n(), self.n())
    }

    pub fn c_block(&self) -> SparseMatrix {
        self.m.block(self.n(), 0, self.n(), self.n())
    }

    pub fn d(&self) -> SparseMatrix {
        self.m.block(self.n(), self.n(), self.n(), self.n())
    }
}

/// Iterated coproduct of an arity-one tensor: every letter goes to one of `m`
/// slots, keeping relative order inside each slot.
pub fn delta_m(w: &EnvelopingTensor, m: usize) -> Result<EnvelopingTensor> {
    if m < 1 {
        return invalid("delta_m needs m >= 1");
    }
    if w.arity() != 1 {
        return invalid("delta_m needs an arity-one tensor");
    }
    let mut out = EnvelopingTensor::new(m)?;
    for (word, c) in w.words() {
        let k = word.len();
        let total = (m as u64).checked_pow(k as u32).ok_or_else(|| crate::Error::InvalidArgument("coproduct too large".into()))?;
        for code in 0..total {
            let mut slots: Vec<Word> = vec![Vec::new(); m];
            let mut x = code;
            for &letter in word {
                slots[(x % m as u64) as usize].push(letter);
                x /= m as u64;
            }
            out.add_term(slots, c);
        }
    }
    Ok(out)
}

/// `τ_1 C τ_2 C ... τ_m C`.
pub fn lambda_c(taus: &[BlockMatrix2n]) -> Result<BlockMatrix2n> {
    let Some(first) = taus.first() else {
        return invalid("lambda_c needs at least one matrix");
    };
    let n = first.n();
    let c = BlockMatrix2n::c(n);
    let mut acc = SparseMatrix::identity(2 * n);
    for t in taus {
        if t.n() != n {
            return invalid("lambda_c inputs differ in size");
        }
        acc = acc.try_mul(&t.m)?.try_mul(&c.m)?;
    }
    BlockMatrix2n::new(acc)
}

/// Trace of the upper-left block.
pub fn half_trace(m: &BlockMatrix2n) -> Q {
    m.a().trace()
}

/// `Σ_m(w)` for an arity-one tensor over the double, evaluated in `r`.
///
/// Slots are filled letter by letter; a branch stops as soon as some slot's
/// partial product vanishes.
pub fn sigma_m(w: &EnvelopingTensor, r: &Representation, m: usize) -> Result<Q> {
    if m < 1 {
        return invalid("sigma_m needs m >= 1");
    }
    if w.arity() != 1 {
        return invalid("sigma_m needs an arity-one tensor");
    }
    if r.size() % 2 != 0 {
        return invalid("sigma_m needs an even-dimensional representation");
    }
    if let Some(bad) = w.words().flat_map(|(x, _)| x.iter()).find(|&&x| x as usize >= r.matrices().len()) {
        return invalid(format!("letter {bad} outside the representation"));
    }
    let words: Vec<(&Word, &Q)> = w.words().collect();
    let c = BlockMatrix2n::c(r.size() / 2);
    let parts: Vec<Q> = words
        .par_iter()
        .map(|(word, coeff)| {
            let mut slots = vec![SparseMatrix::identity(r.size()); m];
            let mut acc = Q::zero();
            fill(word, 0, r, &mut slots, &c, &mut acc);
            acc * *coeff
        })
        .collect();
    Ok(parts.into_iter().fold(Q::zero(), |a, b| a + b))
}

fn fill(word: &[u32], i: usize, r: &Representation, slots: &mut [SparseMatrix], c: &BlockMatrix2n, acc: &mut Q) {
    if i == word.len() {
        let mut prod = SparseMatrix::identity(r.size());
        for s in slots.iter() {
            prod = &(&prod * s) * c.matrix();
            if prod.is_zero() {
                return;
            }
        }
        *acc += half_trace(&BlockMatrix2n { m: prod });
        return;
    }
    let letter = r.matrix(word[i] as usize);
    for j in 0..slots.len() {
        let next = &slots[j] * letter;
        if next.is_zero() {
            continue;
        }
        let prev = std::mem::replace(&mut slots[j], next);
        fill(word, i + 1, r, slots, c, acc);
        slots[j] = prev;
    }
}

/// All `L!` leg orders of `d` (no collapsing).
pub fn chi_terms(d: &JacobiDiagram) -> Vec<JacobiDiagram> {
    permutations(d.legs().len())
        .into_iter()
        .map(|p| d.with_leg_order(&p).expect("valid permutation"))
        .collect()
}

/// `χ(d)`: the sum over leg permutations, with multiplicities.
pub fn chi(d: &JacobiDiagram) -> DiagramSum {
    let mut s = DiagramSum::new();
    for t in chi_terms(d) {
        s.add_diagram(&t, &rational::one());
    }
    s
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..n).collect();
    heap(n, &mut cur, &mut out);
    out.sort();
    out
}

fn heap(k: usize, a: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    if k <= 1 {
        out.push(a.clone());
        return;
    }
    for i in 0..k {
        heap(k - 1, a, out);
        if k % 2 == 0 {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
}

/// `l(directed m-wheel)` over the double of `g`.
pub fn wheel_tensor(m: usize, g: &LieAlgebraData, reversed: bool) -> Result<EnvelopingTensor> {
    let dbl = double(g)?;
    let w = DirectedJacobiDiagram::wheel(m, Skeleton::Interval, reversed)?;
    contract_l(DiagramRef::Directed(&w), AlgebraRef::Double(&dbl))
}

/// `Σ_m` on a wheel through the generic pipeline.
pub fn sigma_wheel(m: usize, g: &LieAlgebraData, b: &Representation, reversed: bool) -> Result<Q> {
    let dbl = double(g)?;
    let r = crate::lie::rep_r(&dbl, b)?;
    let w = wheel_tensor(m, g, reversed)?;
    sigma_m(&w, &r, m)
}

/// `Σ_m` on the directed m-wheel using that every letter is barred: only
/// one letter per slot survives, so the value is a sum over letter orders of
/// `Tr(B ... B)`.
pub fn sigma_wheel_fast(m: usize, g: &LieAlgebraData, b: &Representation) -> Result<Q> {
    if m < 2 {
        return invalid(format!("sigma_wheel_fast needs m >= 2, got {m}"));
    }
    if b.matrices().len() != g.dim() {
        return invalid("representation does not match algebra");
    }
    let w = wheel_tensor(m, g, false)?;
    let d = g.dim() as u32;
    if !w.all_letters(|x| x >= d) {
        return invalid("wheel tensor has an unbarred letter");
    }
    let perms = permutations(m);
    let words: Vec<(&Word, &Q)> = w.words().collect();
    let parts: Vec<Q> = words
        .par_iter()
        .map(|(word, c)| {
            let mut acc = Q::zero();
            for p in &perms {
                let mut prod = SparseMatrix::identity(b.size());
                for &i in p {
                    prod = &prod * b.matrix((word[i] - d) as usize);
                    if prod.is_zero() {
                        break;
                    }
                }
                acc += prod.trace();
            }
            acc * *c
        })
        .collect();
    Ok(parts.into_iter().fold(Q::zero(), |a, b| a + b))
}

/// `W_{g,B}(χ(d))` for a circle diagram, summing the weight of every leg order.
pub fn weight_of_chi(d: &JacobiDiagram, g: &LieAlgebraData, b: &Representation) -> Result<Q> {
    let d = if d.skeleton() == Skeleton::Interval { d.close_interval()? } else { d.clone() };
    let terms = chi_terms(&d);
    let vals: Vec<Result<Q>> = terms
        .par_iter()
        .map(|t| weight_circle(DiagramRef::Plain(t), AlgebraRef::Lie(g), b))
        .collect();
    let mut total = Q::zero();
    for v in vals {
        total += v?;
    }
    Ok(total)
}
