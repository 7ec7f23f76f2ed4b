use jacobi::corpus::enumerate_diagrams;
use jacobi::lie::{adjoint, build_gl, build_sl2, defining, double, rep_r};
use jacobi::rational::{q, zero};
use jacobi::weights::{contract_l, weight_circle, weight_circle_by_words, weight_interval, AlgebraRef};
use jacobi::{JacobiDiagram, Skeleton};

#[test]
fn circle_weight_is_rotation_invariant() {
    let g = build_gl(2).unwrap();
    let reps = [defining(&g).unwrap(), adjoint(&g).unwrap()];
    let c = enumerate_diagrams(3, Skeleton::Circle).unwrap();
    for rho in &reps {
        for e in &c.entries {
            let d = e.key.to_diagram().unwrap();
            let w = weight_circle((&d).into(), (&g).into(), rho).unwrap();
            for r in 1..d.legs().len() {
                let t = d.rotated(r).unwrap();
                assert_eq!(weight_circle((&t).into(), (&g).into(), rho).unwrap(), w, "{}", e.key);
            }
        }
    }
}

#[test]
fn vertex_flip_negates_l() {
    let g = build_gl(2).unwrap();
    let dbl = double(&g).unwrap();
    let c = enumerate_diagrams(3, Skeleton::Interval).unwrap();
    for e in c.entries.iter().filter(|e| e.vertices > 0) {
        let d = e.key.to_diagram().unwrap();
        for a in [AlgebraRef::Lie(&g), AlgebraRef::Lie(dbl.data())] {
            let base = contract_l((&d).into(), a).unwrap();
            let flipped = contract_l((&d.flip_vertex(0).unwrap()).into(), a).unwrap();
            let mut sum = base.clone();
            sum.add(&flipped, &q(1));
            assert!(sum.is_zero(), "{}", e.key);
        }
    }
}

#[test]
fn network_and_word_routes_agree_on_corpus() {
    let s = build_sl2().unwrap();
    let reps = [defining(&s).unwrap(), adjoint(&s).unwrap()];
    let c = enumerate_diagrams(3, Skeleton::Circle).unwrap();
    for rho in &reps {
        for e in &c.entries {
            let d = e.key.to_diagram().unwrap();
            assert_eq!(
                weight_circle((&d).into(), (&s).into(), rho).unwrap(),
                weight_circle_by_words((&d).into(), (&s).into(), rho).unwrap()
            );
        }
    }
}

#[test]
fn theta_on_the_double_in_r() {
    let g = build_gl(2).unwrap();
    let dbl = double(&g).unwrap();
    let r = rep_r(&dbl, &defining(&g).unwrap()).unwrap();
    let th = JacobiDiagram::theta(Skeleton::Interval);
    // X and its bar partner multiply to E12 (x) B^2, which is traceless.
    let m = weight_interval((&th).into(), (&dbl).into(), &r).unwrap();
    assert!(m.iter().all(|(i, j, _)| i < 2 && j >= 2));
    assert_eq!(m.trace(), zero());
}
