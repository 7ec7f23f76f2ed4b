//! Metrized Lie algebras, the inhomogeneous double and its block representation.
//!
//! Basis conventions: `gl(n)` uses `E_ij` at index `i*n + j`; `sl(2)` uses
//! `H, E, F`. In a double of a `d`-dimensional algebra, `X_i` keeps index `i`
//! and its bar partner sits at `d + i`.

use std::collections::HashMap;

use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::matrix::SparseMatrix;
use crate::rational::{self, q, Q};

#[derive(Clone, Debug)]
pub struct LieAlgebraData {
    name: String,
    labels: Vec<String>,
    /// `brackets[i * dim + j]` lists `(k, c^k_ij)`.
    brackets: Vec<Vec<(usize, Q)>>,
    metric: SparseMatrix,
    metric_inverse: SparseMatrix,
    /// Non-zero `f_ijk = t([e_i, e_j], e_k)`.
    lowered: Vec<([usize; 3], Q)>,
}

impl LieAlgebraData {
    /// Builds and validates an algebra from structure constants `(i, j, k, c^k_ij)`
    /// and a symmetric metric.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        structure: impl IntoIterator<Item = (usize, usize, usize, Q)>,
        metric: SparseMatrix,
    ) -> Result<Self> {
        let dim = labels.len();
        if dim == 0 {
            return invalid("algebra must have positive dimension");
        }
        if metric.rows() != dim || metric.cols() != dim {
            return invalid(format!("metric must be {dim}x{dim}"));
        }
        let mut dense = vec![Q::zero(); dim * dim * dim];
        for (i, j, k, c) in structure {
            if i >= dim || j >= dim || k >= dim {
                return invalid(format!("structure constant index ({i},{j},{k}) out of range"));
            }
            dense[(i * dim + j) * dim + k] += c;
        }
        let brackets: Vec<Vec<(usize, Q)>> = (0..dim * dim)
            .map(|ij| {
                (0..dim)
                    .filter(|&k| !dense[ij * dim + k].is_zero())
                    .map(|k| (k, dense[ij * dim + k].clone()))
                    .collect()
            })
            .collect();
        if metric != metric.transpose() {
            return invalid("metric is not symmetric");
        }
        let metric_inverse = metric.inverse().ok_or_else(|| Error::InvalidArgument("metric is degenerate".into()))?;
        let mut lowered = Vec::new();
        for i in 0..dim {
            for j in 0..dim {
                let mut row = vec![Q::zero(); dim];
                for (k, c) in &brackets[i * dim + j] {
                    for z in 0..dim {
                        let t = metric.get(*k, z);
                        if !t.is_zero() {
                            row[z] += c * t;
                        }
                    }
                }
                for (z, v) in row.into_iter().enumerate() {
                    if !v.is_zero() {
                        lowered.push(([i, j, z], v));
                    }
                }
            }
        }
        let alg = LieAlgebraData { name: name.into(), labels, brackets, metric, metric_inverse, lowered };
        alg.validate()?;
        Ok(alg)
    }

    fn validate(&self) -> Result<()> {
        let d = self.dim();
        for i in 0..d {
            for j in 0..d {
                let a = self.bracket_basis(i, j);
                let b = self.bracket_basis(j, i);
                if a.iter().zip(&b).any(|(x, y)| x != &-y.clone()) {
                    return invalid(format!("bracket not antisymmetric at ({i},{j})"));
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    // [e_i,[e_j,e_k]] + [e_j,[e_k,e_i]] + [e_k,[e_i,e_j]]
                    let mut acc = vec![Q::zero(); d];
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        for (m, x) in &self.brackets[b * d + c] {
                            for (n, y) in &self.brackets[a * d + m] {
                                acc[*n] += x * y;
                            }
                        }
                    }
                    if acc.iter().any(|x| !x.is_zero()) {
                        return invalid(format!("Jacobi identity fails at ({i},{j},{k})"));
                    }
                }
            }
        }
        let f = self.lowered_dense();
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    let v = &f[(i * d + j) * d + k];
                    if *v != -f[(i * d + k) * d + j].clone() {
                        return invalid(format!("metric is not invariant at ({i},{j},{k})"));
                    }
                }
            }
        }
        Ok(())
    }

    fn lowered_dense(&self) -> Vec<Q> {
        let d = self.dim();
        let mut f = vec![Q::zero(); d * d * d];
        for ([i, j, k], v) in &self.lowered {
            f[(i * d + j) * d + k] = v.clone();
        }
        f
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// `[e_i, e_j]` as sparse `(k, c^k_ij)`.
    pub fn bracket(&self, i: usize, j: usize) -> &[(usize, Q)] {
        &self.brackets[i * self.dim() + j]
    }

    fn bracket_basis(&self, i: usize, j: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        for (k, c) in self.bracket(i, j) {
            v[*k] = c.clone();
        }
        v
    }

    pub fn metric(&self) -> &SparseMatrix {
        &self.metric
    }

    pub fn metric_inverse(&self) -> &SparseMatrix {
        &self.metric_inverse
    }

    /// Non-zero entries of the totally antisymmetric `f_ijk = t([e_i,e_j],e_k)`.
    pub fn lowered(&self) -> &[([usize; 3], Q)] {
        &self.lowered
    }

    pub fn to_json(&self) -> AlgebraDump {
        let d = self.dim();
        let mut brackets = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, c) in self.bracket(i, j) {
                    brackets.push(BracketEntry { i, j, k: *k, coeff: rational::to_string(c) });
                }
            }
        }
        AlgebraDump {
            name: self.name.clone(),
            dim: d,
            labels: self.labels.clone(),
            brackets,
            metric: self.metric.clone(),
            metric_inverse: self.metric_inverse.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    pub coeff: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct AlgebraDump {
    pub name: String,
    pub dim: usize,
    pub labels: Vec<String>,
    pub brackets: Vec<BracketEntry>,
    pub metric: SparseMatrix,
    pub metric_inverse: SparseMatrix,
}

/// `gl(n)` with the defining trace form.
pub fn build_gl(n: usize) -> Result<LieAlgebraData> {
    if n < 1 {
        return invalid(format!("gl(n) needs n >= 1, got {n}"));
    }
    let idx = |i: usize, j: usize| i * n + j;
    let labels = (0..n).flat_map(|i| (0..n).map(move |j| format!("E{}{}", i + 1, j + 1))).collect();
    let mut structure = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    if j == k {
                        structure.push((idx(i, j), idx(k, l), idx(i, l), q(1)));
                    }
                    if l == i {
                        structure.push((idx(i, j), idx(k, l), idx(k, j), q(-1)));
                    }
                }
            }
        }
    }
    let metric = SparseMatrix::from_entries(
        n * n,
        n * n,
        (0..n).flat_map(|i| (0..n).map(move |j| (idx(i, j), idx(j, i), q(1)))),
    )?;
    LieAlgebraData::new(format!("gl({n})"), labels, structure, metric)
}

/// `sl(2)` with basis `H, E, F` and the defining trace form.
pub fn build_sl2() -> Result<LieAlgebraData> {
    let (h, e, f) = (0, 1, 2);
    let structure = vec![
        (h, e, e, q(2)),
        (e, h, e, q(-2)),
        (h, f, f, q(-2)),
        (f, h, f, q(2)),
        (e, f, h, q(1)),
        (f, e, h, q(-1)),
    ];
    let rep = sl2_defining_matrices();
    let metric = trace_form(&rep)?;
    LieAlgebraData::new("sl(2)", vec!["H".into(), "E".into(), "F".into()], structure, metric)
}

fn sl2_defining_matrices() -> Vec<SparseMatrix> {
    vec![
        SparseMatrix::from_entries(2, 2, [(0, 0, q(1)), (1, 1, q(-1))]).unwrap(),
        SparseMatrix::unit(2, 2, 0, 1),
        SparseMatrix::unit(2, 2, 1, 0),
    ]
}

/// `t_ij = Tr(ρ(e_i) ρ(e_j))`.
pub fn trace_form(mats: &[SparseMatrix]) -> Result<SparseMatrix> {
    let d = mats.len();
    let mut t = SparseMatrix::zeros(d, d);
    for i in 0..d {
        for j in 0..d {
            t.set(i, j, mats[i].try_mul(&mats[j])?.trace());
        }
    }
    Ok(t)
}

/// The inhomogeneous double `g ⋉ ḡ` with the hyperbolic pairing metric.
#[derive(Clone, Debug)]
pub struct DoubleAlgebra {
    base: LieAlgebraData,
    data: LieAlgebraData,
}

impl DoubleAlgebra {
    pub fn new(base: &LieAlgebraData) -> Result<Self> {
        let d = base.dim();
        let mut structure = Vec::new();
        for i in 0..d {
            for j in 0..d {
                for (k, c) in base.bracket(i, j) {
                    structure.push((i, j, *k, c.clone()));
                    structure.push((i, d + j, d + k, c.clone()));
                    structure.push((d + i, j, d + k, c.clone()));
                }
            }
        }
        let mut metric = SparseMatrix::zeros(2 * d, 2 * d);
        for (i, j, t) in base.metric().iter() {
            metric.set(i, d + j, t.clone());
            metric.set(d + i, j, t.clone());
        }
        let labels = base
            .labels()
            .iter()
            .cloned()
            .chain(base.labels().iter().map(|l| format!("{l}~")))
            .collect();
        let data = LieAlgebraData::new(format!("double {}", base.name()), labels, structure, metric)?;
        Ok(DoubleAlgebra { base: base.clone(), data })
    }

    pub fn base(&self) -> &LieAlgebraData {
        &self.base
    }

    /// The full `2d`-dimensional algebra.
    pub fn data(&self) -> &LieAlgebraData {
        &self.data
    }

    pub fn base_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn bar(&self, i: usize) -> usize {
        self.base.dim() + i
    }

    pub fn is_bar(&self, i: usize) -> bool {
        i >= self.base.dim()
    }
}

pub fn double(g: &LieAlgebraData) -> Result<DoubleAlgebra> {
    DoubleAlgebra::new(g)
}

/// Matrix representation of an algebra, checked against its brackets.
#[derive(Clone, Debug)]
pub struct Representation {
    name: String,
    size: usize,
    mats: Vec<SparseMatrix>,
}

impl Representation {
    pub fn new(name: impl Into<String>, alg: &LieAlgebraData, mats: Vec<SparseMatrix>) -> Result<Self> {
        if mats.len() != alg.dim() {
            return invalid(format!("representation has {} matrices for a {}-dimensional algebra", mats.len(), alg.dim()));
        }
        let size = mats.first().map(|m| m.rows()).unwrap_or(0);
        if mats.iter().any(|m| m.rows() != size || m.cols() != size) {
            return invalid("representation matrices must be square of one size");
        }
        for i in 0..alg.dim() {
            for j in 0..alg.dim() {
                let lhs = mats[i].commutator(&mats[j])?;
                let mut rhs = SparseMatrix::zeros(size, size);
                for (k, c) in alg.bracket(i, j) {
                    rhs = &rhs + &mats[*k].scale(c);
                }
                if lhs != rhs {
                    return invalid(format!(
                        "representation fails the bracket at ({},{})",
                        alg.labels()[i],
                        alg.labels()[j]
                    ));
                }
            }
        }
        Ok(Representation { name: name.into(), size, mats })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn matrix(&self, i: usize) -> &SparseMatrix {
        &self.mats[i]
    }

    pub fn matrices(&self) -> &[SparseMatrix] {
        &self.mats
    }

    /// Product `ρ(e_{w_0}) ρ(e_{w_1}) ...`; the identity for the empty word.
    pub fn word(&self, w: &[usize]) -> SparseMatrix {
        let mut m = SparseMatrix::identity(self.size);
        for &i in w {
            m = &m * &self.mats[i];
        }
        m
    }
}

/// Defining representation of `gl(n)` or `sl(2)`.
pub fn defining(alg: &LieAlgebraData) -> Result<Representation> {
    let mats = if alg.name() == "sl(2)" {
        sl2_defining_matrices()
    } else if let Some(n) = gl_rank(alg) {
        (0..n).flat_map(|i| (0..n).map(move |j| SparseMatrix::unit(n, n, i, j))).collect()
    } else {
        return invalid(format!("no defining representation known for {}", alg.name()));
    };
    Representation::new("defining", alg, mats)
}

fn gl_rank(alg: &LieAlgebraData) -> Option<usize> {
    alg.name().strip_prefix("gl(")?.strip_suffix(')')?.parse().ok()
}

/// Adjoint representation: `ad(e_i)_{kj} = c^k_ij`.
pub fn adjoint(alg: &LieAlgebraData) -> Result<Representation> {
    let d = alg.dim();
    let mats = (0..d)
        .map(|i| {
            let mut m = SparseMatrix::zeros(d, d);
            for j in 0..d {
                for (k, c) in alg.bracket(i, j) {
                    m.set(*k, j, c.clone());
                }
            }
            m
        })
        .collect();
    Representation::new("adjoint", alg, mats)
}

/// Block representation of the double: `X ↦ diag(B, B)`, `X̄ ↦ (0 B; 0 0)`.
pub fn rep_r(dbl: &DoubleAlgebra, b: &Representation) -> Result<Representation> {
    let base = dbl.base();
    // Re-validate B against the base algebra before lifting it.
    let b = Representation::new(b.name(), base, b.matrices().to_vec())?;
    let n = b.size();
    let diag = SparseMatrix::identity(2);
    let upper = SparseMatrix::unit(2, 2, 0, 1);
    let mut mats: Vec<SparseMatrix> = b.matrices().iter().map(|m| diag.kron(m)).collect();
    mats.extend(b.matrices().iter().map(|m| upper.kron(m)));
    debug_assert!(mats.iter().all(|m| m.rows() == 2 * n));
    Representation::new(format!("R[{}]", b.name()), dbl.data(), mats)
}

/// One-dimensional character of the double: `X` and `X̄` both act by
/// `tr B(X)`. Vanishes on the derived algebra since `tr` kills commutators.
pub fn trace_character(dbl: &DoubleAlgebra, b: &Representation) -> Result<Representation> {
    let b = Representation::new(b.name(), dbl.base(), b.matrices().to_vec())?;
    let one = |m: &SparseMatrix| SparseMatrix::from_entries(1, 1, [(0, 0, m.trace())]);
    let mut mats = b.matrices().iter().map(one).collect::<Result<Vec<_>>>()?;
    mats.extend(mats.clone());
    Representation::new(format!("tr[{}]", b.name()), dbl.data(), mats)
}

/// `Sym(g)` truncated above degree `k` as a module over the double: `X`
/// acts as a derivation through the bracket, `X̄` multiplies by `X`.
/// Barred letters are nilpotent of order `k + 1` instead of two.
pub fn truncated_symmetric(dbl: &DoubleAlgebra, k: usize) -> Result<Representation> {
    let g = dbl.base();
    let d = g.dim();
    let mut basis: Vec<Vec<usize>> = vec![vec![]];
    let mut layer: Vec<Vec<usize>> = vec![vec![]];
    for _ in 0..k {
        let next: Vec<Vec<usize>> = layer
            .iter()
            .flat_map(|m| {
                let lo = m.last().copied().unwrap_or(0);
                (lo..d).map(move |a| {
                    let mut n = m.clone();
                    n.push(a);
                    n
                })
            })
            .collect();
        basis.extend(next.iter().cloned());
        layer = next;
    }
    let index: HashMap<Vec<usize>, usize> = basis.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let size = basis.len();
    let mut mats = Vec::with_capacity(2 * d);
    for i in 0..d {
        let mut m = SparseMatrix::zeros(size, size);
        for (col, mono) in basis.iter().enumerate() {
            for t in 0..mono.len() {
                for (c, coeff) in g.bracket(i, mono[t]) {
                    let mut img = mono.clone();
                    img[t] = *c;
                    img.sort_unstable();
                    m.add_at(index[&img], col, coeff);
                }
            }
        }
        mats.push(m);
    }
    for i in 0..d {
        let mut m = SparseMatrix::zeros(size, size);
        for (col, mono) in basis.iter().enumerate().filter(|(_, m)| m.len() < k) {
            let mut img = mono.clone();
            img.push(i);
            img.sort_unstable();
            m.add_at(index[&img], col, &rational::one());
        }
        mats.push(m);
    }
    Representation::new(format!("Sym<={k}"), dbl.data(), mats)
}

/// Algebra selection as read from a JSON spec file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraSpec {
    pub family: String,
    #[serde(default = "default_n")]
    pub n: usize,
    #[serde(default = "default_rep")]
    pub rep: String,
}

fn default_n() -> usize {
    2
}

fn default_rep() -> String {
    "defining".into()
}

impl Default for AlgebraSpec {
    fn default() -> Self {
        AlgebraSpec { family: "gl".into(), n: 2, rep: default_rep() }
    }
}

impl AlgebraSpec {
    pub fn build(&self) -> Result<(LieAlgebraData, Representation)> {
        let alg = match self.family.as_str() {
            "gl" => build_gl(self.n)?,
            "sl2" => build_sl2()?,
            other => return invalid(format!("unknown algebra family {other:?}")),
        };
        let rep = match self.rep.as_str() {
            "defining" => defining(&alg)?,
            "adjoint" => adjoint(&alg)?,
            other => return invalid(format!("unknown representation {other:?}")),
        };
        Ok((alg, rep))
    }
}
