use jacobi::corpus::enumerate_diagrams;
use jacobi::diagram::Site;
use jacobi::lie::{adjoint, build_gl, defining, double};
use jacobi::rational::one;
use jacobi::matrix::SparseMatrix;
use jacobi::orient::legal_orientations;
use jacobi::weights::{contract_l, weight_interval, EnvelopingTensor};
use jacobi::{DirectedJacobiDiagram, JacobiDiagram, Skeleton};

/// Internal edges joining two distinct vertices: `(u, slot_u, v, slot_v)`.
fn inner_edges(d: &JacobiDiagram) -> Vec<(usize, usize, usize, usize)> {
    d.edges()
        .iter()
        .filter_map(|e| match (d.site(e[0]), d.site(e[1])) {
            (Site::Vertex(u, i), Site::Vertex(v, j)) if u != v => Some((u, i, v, j)),
            _ => None,
        })
        .collect()
}

/// The three terms of the cyclic Jacobi sum at the edge joining `u` and `v`:
/// the outer half-edges `x, y` of `u` and `z, w` of `v` are regrouped as
/// `(x y | z w)`, `(x z | w y)`, `(x w | y z)`.
fn ihx_vertices(d: &JacobiDiagram, (u, i, v, j): (usize, usize, usize, usize)) -> [Vec<[u32; 3]>; 3] {
    let tu = d.vertices()[u];
    let tv = d.vertices()[v];
    let (eu, ev) = (tu[i], tv[j]);
    let (x, y) = (tu[(i + 1) % 3], tu[(i + 2) % 3]);
    let (z, w) = (tv[(j + 1) % 3], tv[(j + 2) % 3]);
    [(y, z, w), (z, w, y), (w, y, z)].map(|(p, r, s)| {
        let mut vs = d.vertices().to_vec();
        vs[u] = [eu, x, p];
        vs[v] = [ev, r, s];
        vs
    })
}

#[test]
fn undirected_jacobi_sum_vanishes() {
    let g = build_gl(2).unwrap();
    let reps = [defining(&g).unwrap(), adjoint(&g).unwrap()];
    let c = enumerate_diagrams(3, Skeleton::Interval).unwrap();
    let (mut seen, mut nonzero) = (0, 0);
    for e in &c.entries {
        let d = e.key.to_diagram().unwrap();
        for site in inner_edges(&d) {
            seen += 1;
            for rho in &reps {
                let mut acc = SparseMatrix::zeros(rho.size(), rho.size());
                for vs in ihx_vertices(&d, site) {
                    let t = JacobiDiagram::new(Skeleton::Interval, d.legs().to_vec(), vs, d.edges().to_vec()).unwrap();
                    let w = weight_interval((&t).into(), (&g).into(), rho).unwrap();
                    nonzero += usize::from(!w.is_zero());
                    acc = &acc + &w;
                }
                assert!(acc.is_zero(), "{}", e.key);
            }
        }
    }
    assert!(seen > 20 && nonzero > 20);
}

/// Directed terms are compared as enveloping tensors: every directed
/// diagram of degree two or more weighs zero in R and in the adjoint of the
/// double, so matrices would not see the relation.
#[test]
fn directed_jacobi_sum_vanishes_for_fixed_outer_arrows() {
    let g = build_gl(2).unwrap();
    let dbl = double(&g).unwrap();
    let c = enumerate_diagrams(3, Skeleton::Interval).unwrap();
    let (mut relations, mut nonzero) = (0, 0);
    for e in &c.entries {
        let d = e.key.to_diagram().unwrap();
        for site in inner_edges(&d) {
            let (u, i, _, _) = site;
            let mid = d.vertices()[u][i];
            let partner = d.partner(mid);
            for o in legal_orientations(&d) {
                let outer: Vec<[u32; 2]> = o
                    .directions()
                    .into_iter()
                    .filter(|&(t, h)| t != mid && h != mid)
                    .map(|(t, h)| [t, h])
                    .collect();
                let mut acc = EnvelopingTensor::new(1).unwrap();
                for vs in ihx_vertices(&d, site) {
                    for arrow in [[mid, partner], [partner, mid]] {
                        let mut arrows = outer.clone();
                        arrows.push(arrow);
                        let t = DirectedJacobiDiagram::build(Skeleton::Interval, d.legs().to_vec(), vs.clone(), arrows)
                            .unwrap();
                        if t.is_legal() {
                            let l = contract_l((&t).into(), (&dbl).into()).unwrap();
                            nonzero += usize::from(!l.is_zero());
                            acc.add(&l, &one());
                        }
                    }
                }
                assert!(acc.is_zero(), "{}", e.key);
                relations += 1;
            }
        }
    }
    assert!(relations > 20 && nonzero > 20);
}
