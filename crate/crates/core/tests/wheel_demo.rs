use jacobi::diagram::Site;
use jacobi::orient::{detect_zero_pattern, legal_orientations, reduce_wheel_on_circle, stu_at_vertex_directed};
use jacobi::{DirectedJacobiDiagram, JacobiDiagram, Skeleton};

fn inner_edges(d: &DirectedJacobiDiagram) -> usize {
    let b = d.base();
    b.edges().iter().filter(|e| matches!((b.site(e[0]), b.site(e[1])), (Site::Vertex(..), Site::Vertex(..)))).count()
}

fn inward_legs(d: &DirectedJacobiDiagram) -> usize {
    (0..d.base().legs().len()).filter(|&p| !d.leg_points_to_skeleton(p)).count()
}

#[test]
fn four_wheel_splits_into_two_trees() {
    let w = JacobiDiagram::wheel(4, Skeleton::Circle).unwrap();
    let os = legal_orientations(&w);
    assert_eq!(os.len(), 2);
    for o in os {
        assert_eq!(inward_legs(&o), 0);
        let rel = stu_at_vertex_directed(&o, 0).unwrap();
        for t in [&rel.s, &rel.t] {
            assert_eq!(t.base().num_vertices(), 3);
            assert_eq!(t.base().legs().len(), 5);
            assert_eq!(inner_edges(t), 2);
            assert_eq!(inward_legs(t), 1);
        }
        assert!(detect_zero_pattern(&rel.s));
        assert!(!detect_zero_pattern(&rel.t));
    }
}

#[test]
fn four_wheel_trace_ends_in_zero_patterns() {
    let r = reduce_wheel_on_circle(4).unwrap();
    assert!(r.result.is_zero());
    let rules: Vec<&str> = r.trace.iter().map(|s| s.rule.as_str()).collect();
    assert_eq!(rules.first(), Some(&"orient"));
    assert_eq!(rules.last(), Some(&"result"));
    assert_eq!(rules.iter().filter(|&&x| x == "start").count(), 2);
    assert_eq!(rules.iter().filter(|&&x| x == "zero-pattern").count(), 4);
    assert_eq!(rules.iter().filter(|&&x| x == "commute").count(), 4);
    let stu = r.trace.iter().find(|s| s.rule == "stu").unwrap();
    assert_eq!(stu.terms.len(), 2);
}

#[test]
fn larger_wheels_commute_m_minus_two_times() {
    for m in 2..=6 {
        let r = reduce_wheel_on_circle(m).unwrap();
        assert!(r.result.is_zero());
        assert_eq!(r.trace.iter().filter(|s| s.rule == "commute").count(), 2 * (m - 2), "m={m}");
    }
}
