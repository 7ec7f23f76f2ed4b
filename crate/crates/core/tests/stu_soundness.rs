use jacobi::corpus::enumerate_diagrams;
use jacobi::lie::{adjoint, build_gl, defining, double, rep_r, truncated_symmetric, Representation};
use jacobi::matrix::SparseMatrix;
use jacobi::orient::{
    legal_orientations, stu_at_adjacent, stu_at_adjacent_directed, stu_at_vertex, stu_at_vertex_directed, StuVariant,
};
use jacobi::rational;
use jacobi::weights::{contract_l, weight_interval};
use jacobi::{DirectedJacobiDiagram, JacobiDiagram, Skeleton};

fn samples() -> Vec<JacobiDiagram> {
    vec![
        JacobiDiagram::wheel(2, Skeleton::Interval).unwrap(),
        JacobiDiagram::wheel(3, Skeleton::Interval).unwrap(),
        JacobiDiagram::tripod(Skeleton::Interval),
        JacobiDiagram::new(
            Skeleton::Interval,
            vec![0, 1, 2, 3],
            vec![[4, 5, 6], [7, 8, 9]],
            vec![[0, 4], [1, 7], [2, 8], [3, 5], [6, 9]],
        )
        .unwrap(),
    ]
}

#[test]
fn undirected_stu_at_vertex() {
    let g = build_gl(2).unwrap();
    for rho in [defining(&g).unwrap(), adjoint(&g).unwrap()] {
        let w = |x: &JacobiDiagram| weight_interval(x.into(), (&g).into(), &rho).unwrap();
        for d in samples() {
            for p in 0..d.legs().len() {
                let (s, t) = stu_at_vertex(&d, p).unwrap();
                assert_eq!(w(&d), &w(&s) - &w(&t), "leg {p}");
            }
        }
    }
}

#[test]
fn undirected_stu_at_adjacent_legs() {
    let g = build_gl(2).unwrap();
    let b = defining(&g).unwrap();
    let w = |x: &JacobiDiagram| weight_interval(x.into(), (&g).into(), &b).unwrap();
    for d in samples() {
        for p in 0..d.legs().len() - 1 {
            let (s, t, u) = stu_at_adjacent(&d, p).unwrap();
            assert_eq!(&w(&s) - &w(&t), w(&u));
        }
    }
}

#[test]
fn directed_stu_variants_pair_exactly() {
    let g = build_gl(2).unwrap();
    let dbl = double(&g).unwrap();
    let reps: Vec<Representation> = vec![
        rep_r(&dbl, &defining(&g).unwrap()).unwrap(),
        adjoint(dbl.data()).unwrap(),
        truncated_symmetric(&dbl, 3).unwrap(),
    ];
    let mut seen = std::collections::BTreeSet::new();
    let mut nonzero = 0;
    for rho in &reps {
        let w = |x: &DirectedJacobiDiagram| weight_interval(x.into(), (&dbl).into(), rho).unwrap();
        for d in samples() {
            for o in legal_orientations(&d) {
                let l = o.base().legs().len();
                for p in 0..l {
                    if let Ok(rel) = stu_at_vertex_directed(&o, p) {
                        let lhs = &w(&rel.s) - &w(&rel.t);
                        nonzero += usize::from(!lhs.is_zero());
                        assert_eq!(lhs, w(rel.u.as_ref().unwrap()));
                        seen.insert(rel.variant);
                    }
                    if p + 1 < l {
                        let rel = stu_at_adjacent_directed(&o, p).unwrap();
                        let rhs = match &rel.u {
                            Some(u) => w(u),
                            None => {
                                assert_eq!(rel.variant, StuVariant::Dd);
                                SparseMatrix::zeros(rho.size(), rho.size())
                            }
                        };
                        assert_eq!(&w(&rel.s) - &w(&rel.t), rhs);
                        seen.insert(rel.variant);
                    }
                }
            }
        }
    }
    assert_eq!(seen.len(), 4, "{seen:?}");
    assert!(nonzero > 5);
}

#[test]
fn directed_stu_holds_in_the_enveloping_algebra() {
    let dbl = double(&build_gl(2).unwrap()).unwrap();
    let corpus = enumerate_diagrams(3, Skeleton::Interval).unwrap();
    let l = |x: &DirectedJacobiDiagram| contract_l(x.into(), (&dbl).into()).unwrap();
    let (mut checked, mut nonzero) = (0, 0);
    for e in corpus.entries.iter().filter(|e| e.legally_orientable) {
        for o in legal_orientations(&e.key.to_diagram().unwrap()) {
            let legs = o.base().legs().len();
            let rels = (0..legs)
                .filter_map(|p| stu_at_vertex_directed(&o, p).ok())
                .chain((0..legs.saturating_sub(1)).map(|p| stu_at_adjacent_directed(&o, p).unwrap()));
            for rel in rels {
                let mut acc = l(&rel.s);
                acc.add(&l(&rel.t), &-rational::one());
                nonzero += usize::from(!acc.normal_ordered(dbl.data()).unwrap().is_zero());
                if let Some(u) = &rel.u {
                    acc.add(&l(u), &-rational::one());
                }
                assert!(acc.normal_ordered(dbl.data()).unwrap().is_zero(), "{}", e.key);
                checked += 1;
            }
        }
    }
    assert!(checked > 500 && nonzero > 20, "{checked} {nonzero}");
}
