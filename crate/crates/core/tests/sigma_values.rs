use jacobi::lie::{build_gl, defining};
use jacobi::poly::interpolate;
use jacobi::rational::q;
use jacobi::sigma::{sigma_wheel, sigma_wheel_fast, weight_of_chi};
use jacobi::{JacobiDiagram, Skeleton};

fn gl(n: usize) -> (jacobi::lie::LieAlgebraData, jacobi::lie::Representation) {
    let g = build_gl(n).unwrap();
    let b = defining(&g).unwrap();
    (g, b)
}

#[test]
fn generic_fast_and_chi_paths_agree() {
    for (m, n) in [(2, 2), (2, 3), (4, 2), (4, 3)] {
        let (g, b) = gl(n);
        let generic = sigma_wheel(m, &g, &b, false).unwrap();
        let fast = sigma_wheel_fast(m, &g, &b).unwrap();
        let w = JacobiDiagram::wheel(m, Skeleton::Circle).unwrap();
        let chi = weight_of_chi(&w, &g, &b).unwrap();
        assert_eq!(generic, fast, "m={m} n={n}");
        assert_eq!(generic, chi, "m={m} n={n}");
    }
}

#[test]
fn both_wheel_orientations_give_the_same_value() {
    for (m, n) in [(2, 2), (2, 3), (3, 2), (4, 2)] {
        let (g, b) = gl(n);
        assert_eq!(sigma_wheel(m, &g, &b, false).unwrap(), sigma_wheel(m, &g, &b, true).unwrap(), "m={m} n={n}");
    }
}

#[test]
fn frozen_values() {
    let table: [(usize, &[i64]); 3] = [(2, &[0, 24, 96, 240]), (3, &[0, 0, 0, 0, 0]), (4, &[0, 480, 2880, 10560, 29760])];
    for (m, want) in table {
        for (i, &v) in want.iter().enumerate() {
            let (g, b) = gl(i + 1);
            assert_eq!(sigma_wheel_fast(m, &g, &b).unwrap(), q(v), "m={m} n={}", i + 1);
        }
    }
}

#[test]
fn two_wheel_matches_killing_form() {
    // Per wheel the gl(n) Killing form gives 2n^3 - 2n; the symmetrisation doubles it.
    for n in 1..=4i64 {
        let (g, b) = gl(n as usize);
        assert_eq!(sigma_wheel_fast(2, &g, &b).unwrap(), q(2 * (2 * n * n * n - 2 * n)));
    }
}

#[test]
fn interpolated_polynomials() {
    let (p2, p4) = (
        interpolate(&[(q(1), q(0)), (q(2), q(24)), (q(3), q(96)), (q(4), q(240))]).unwrap(),
        interpolate(&[(q(1), q(0)), (q(2), q(480)), (q(3), q(2880)), (q(4), q(10560)), (q(5), q(29760)), (q(6), q(70560))])
            .unwrap(),
    );
    assert_eq!(p2.coeffs(), &[q(0), q(-4), q(0), q(4)]);
    assert_eq!(p4.coeffs(), &[q(0), q(-48), q(0), q(40), q(0), q(8)]);
    assert_eq!((p2.degree(), p4.degree()), (Some(3), Some(5)));
}
