//! Exact sparse tensor networks with greedy pairwise contraction.

use std::collections::{BTreeMap, HashMap};

use num::Zero;
use rayon::prelude::*;

use crate::rational::Q;

pub type Label = u32;

/// Sparse tensor over named index labels. Zero entries are dropped.
#[derive(Clone, Debug, Default)]
pub struct SparseTensor {
    labels: Vec<Label>,
    entries: HashMap<Vec<u32>, Q>,
}

/// Join sizes above this are split across threads.
const PAR_THRESHOLD: usize = 1 << 14;

impl SparseTensor {
    /// Builds a tensor; repeated labels keep only the diagonal and are merged.
    pub fn new(labels: Vec<Label>, entries: impl IntoIterator<Item = (Vec<u32>, Q)>) -> Self {
        let mut uniq: Vec<Label> = Vec::new();
        let mut first: Vec<usize> = Vec::new();
        for &l in &labels {
            match uniq.iter().position(|&u| u == l) {
                Some(u) => first.push(u),
                None => {
                    uniq.push(l);
                    first.push(uniq.len() - 1);
                }
            }
        }
        let diagonal = uniq.len() != labels.len();
        let mut out: HashMap<Vec<u32>, Q> = HashMap::new();
        'entry: for (idx, v) in entries {
            if v.is_zero() {
                continue;
            }
            let key = if diagonal {
                let mut key = vec![u32::MAX; uniq.len()];
                for (pos, &u) in first.iter().enumerate() {
                    if key[u] == u32::MAX {
                        key[u] = idx[pos];
                    } else if key[u] != idx[pos] {
                        continue 'entry;
                    }
                }
                key
            } else {
                idx
            };
            accumulate(&mut out, key, v);
        }
        SparseTensor { labels: uniq, entries: out }
    }

    /// Rank-0 tensor.
    pub fn scalar(v: Q) -> Self {
        Self::new(vec![], [(vec![], v)])
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn scalar_value(&self) -> Q {
        assert!(self.labels.is_empty(), "tensor is not a scalar");
        self.entries.get(&Vec::new()).cloned().unwrap_or_else(Q::zero)
    }

    /// Entries with indices reordered to follow `order` (a permutation of the labels).
    pub fn entries_in(&self, order: &[Label]) -> BTreeMap<Vec<u32>, Q> {
        let pos: Vec<usize> = order
            .iter()
            .map(|l| self.labels.iter().position(|x| x == l).expect("label present"))
            .collect();
        self.entries
            .iter()
            .map(|(k, v)| (pos.iter().map(|&p| k[p]).collect(), v.clone()))
            .collect()
    }

    /// Sums out every label not in `keep`.
    pub fn sum_out(&self, keep: &[Label]) -> Self {
        let kept: Vec<usize> = (0..self.labels.len()).filter(|&i| keep.contains(&self.labels[i])).collect();
        if kept.len() == self.labels.len() {
            return self.clone();
        }
        let mut out = HashMap::new();
        for (k, v) in &self.entries {
            accumulate(&mut out, kept.iter().map(|&i| k[i]).collect(), v.clone());
        }
        SparseTensor { labels: kept.iter().map(|&i| self.labels[i]).collect(), entries: out }
    }

    /// Contracts shared labels and keeps only labels in `keep` (other
    /// non-shared labels are summed out).
    pub fn contract(&self, other: &Self, keep: &[Label]) -> Self {
        let shared: Vec<Label> = self.labels.iter().copied().filter(|l| other.labels.contains(l)).collect();
        let a_sh: Vec<usize> = shared.iter().map(|l| self.labels.iter().position(|x| x == l).unwrap()).collect();
        let b_sh: Vec<usize> = shared.iter().map(|l| other.labels.iter().position(|x| x == l).unwrap()).collect();
        let a_keep: Vec<usize> = (0..self.labels.len()).filter(|&i| keep.contains(&self.labels[i])).collect();
        let b_keep: Vec<usize> = (0..other.labels.len())
            .filter(|&i| keep.contains(&other.labels[i]) && !shared.contains(&other.labels[i]))
            .collect();
        let labels: Vec<Label> =
            a_keep.iter().map(|&i| self.labels[i]).chain(b_keep.iter().map(|&i| other.labels[i])).collect();

        let mut index: HashMap<Vec<u32>, Vec<(&Vec<u32>, &Q)>> = HashMap::new();
        for (k, v) in &other.entries {
            index.entry(b_sh.iter().map(|&i| k[i]).collect()).or_default().push((k, v));
        }
        let join = |chunk: &[(&Vec<u32>, &Q)]| {
            let mut out: HashMap<Vec<u32>, Q> = HashMap::new();
            for (ka, va) in chunk {
                let probe: Vec<u32> = a_sh.iter().map(|&i| ka[i]).collect();
                let Some(matches) = index.get(&probe) else { continue };
                for (kb, vb) in matches {
                    let key: Vec<u32> =
                        a_keep.iter().map(|&i| ka[i]).chain(b_keep.iter().map(|&i| kb[i])).collect();
                    accumulate(&mut out, key, *va * *vb);
                }
            }
            out
        };
        let a_entries: Vec<(&Vec<u32>, &Q)> = self.entries.iter().collect();
        let entries = if a_entries.len() * other.entries.len().max(1) > PAR_THRESHOLD && a_entries.len() > 64 {
            let parts: Vec<HashMap<Vec<u32>, Q>> = a_entries.par_chunks(a_entries.len().div_ceil(64)).map(join).collect();
            let mut merged = HashMap::new();
            for part in parts {
                for (k, v) in part {
                    accumulate(&mut merged, k, v);
                }
            }
            merged
        } else {
            join(&a_entries)
        };
        SparseTensor { labels, entries }
    }
}

fn accumulate(map: &mut HashMap<Vec<u32>, Q>, key: Vec<u32>, v: Q) {
    use std::collections::hash_map::Entry;
    match map.entry(key) {
        Entry::Vacant(e) => {
            if !v.is_zero() {
                e.insert(v);
            }
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += v;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

/// Contracts a whole network down to the `output` labels (in that order).
///
/// Pairs are chosen greedily: first by the size of the resulting label set,
/// then by the product of the operand sizes.
pub fn contract_network(mut factors: Vec<SparseTensor>, output: &[Label]) -> SparseTensor {
    if factors.is_empty() {
        return SparseTensor::scalar(crate::rational::one());
    }
    let needed = |factors: &[SparseTensor], skip: &[usize], l: Label| {
        output.contains(&l) || factors.iter().enumerate().any(|(i, f)| !skip.contains(&i) && f.labels.contains(&l))
    };
    // Trace out labels private to a single factor.
    for i in 0..factors.len() {
        let keep: Vec<Label> = factors[i].labels.iter().copied().filter(|&l| needed(&factors, &[i], l)).collect();
        factors[i] = factors[i].sum_out(&keep);
    }
    while factors.len() > 1 {
        if factors.iter().any(|f| f.is_zero()) {
            return SparseTensor::new(output.to_vec(), std::iter::empty());
        }
        let mut best: Option<(bool, usize, u128, usize, usize)> = None;
        for i in 0..factors.len() {
            for j in i + 1..factors.len() {
                let (a, b) = (&factors[i], &factors[j]);
                let shares = a.labels.iter().any(|l| b.labels.contains(l));
                let mut union: Vec<Label> = a.labels.clone();
                union.extend(b.labels.iter().copied().filter(|l| !a.labels.contains(l)));
                let result = union.iter().filter(|&&l| needed(&factors, &[i, j], l)).count();
                let cost = a.nnz() as u128 * b.nnz() as u128;
                let cand = (!shares, result, cost, i, j);
                if best.as_ref().is_none_or(|b| cand < *b) {
                    best = Some(cand);
                }
            }
        }
        let (_, _, _, i, j) = best.unwrap();
        let b = factors.swap_remove(j);
        let a = factors.swap_remove(i);
        let mut union: Vec<Label> = a.labels.clone();
        union.extend(b.labels.iter().copied().filter(|l| !a.labels.contains(l)));
        let keep: Vec<Label> = union.into_iter().filter(|&l| needed(&factors, &[], l)).collect();
        factors.push(a.contract(&b, &keep));
    }
    let last = factors.pop().unwrap();
    let keep: Vec<Label> = output.to_vec();
    let t = last.sum_out(&keep);
    // Output labels absent from the network have no entries to attach to.
    debug_assert!(output.iter().all(|l| t.labels.contains(l)) || t.is_zero());
    if t.is_zero() {
        return SparseTensor::new(output.to_vec(), std::iter::empty());
    }
    t
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::q;

    fn mat(labels: [Label; 2], m: &[[i64; 2]; 2]) -> SparseTensor {
        SparseTensor::new(
            labels.to_vec(),
            (0..2).flat_map(|i| (0..2).map(move |j| (vec![i as u32, j as u32], q(m[i][j])))),
        )
    }

    #[test]
    fn matrix_chain_trace() {
        let a = mat([0, 1], &[[1, 2], [3, 4]]);
        let b = mat([1, 2], &[[0, 1], [1, 0]]);
        let c = mat([2, 0], &[[2, 0], [0, 5]]);
        // Tr(A B C) with A B = [[2,1],[4,3]], times C = [[4,5],[8,15]] -> 19
        let t = contract_network(vec![a, b, c], &[]);
        assert_eq!(t.scalar_value(), q(19));
    }

    #[test]
    fn repeated_label_takes_diagonal() {
        let a = mat([7, 7], &[[1, 2], [3, 4]]);
        assert_eq!(a.labels(), &[7]);
        assert_eq!(contract_network(vec![a], &[]).scalar_value(), q(5));
    }

    #[test]
    fn outer_product_and_output_order() {
        let u = SparseTensor::new(vec![1], [(vec![0], q(2)), (vec![1], q(3))]);
        let v = SparseTensor::new(vec![2], [(vec![1], q(5))]);
        let t = contract_network(vec![u, v], &[2, 1]);
        let e = t.entries_in(&[2, 1]);
        assert_eq!(e.len(), 2);
        assert_eq!(e[&vec![1, 0]], q(10));
        assert_eq!(e[&vec![1, 1]], q(15));
    }
}
