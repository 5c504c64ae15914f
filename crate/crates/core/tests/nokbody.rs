use proptest::prelude::*;
use tvb_core::bundle::{build_pair, nonnegative_form, BundlePair, Variant, WeightVec};
use tvb_core::exactmath::{convex_weights, rats, QMatrix, Rat};
use tvb_core::nokbody::{
    build_M, divisor_polytope, flag_matrix, global_body, nok_divisor_body, phi_and_section,
    vertices, Direction,
};
use tvb_core::Error;

fn pair(a: &[i64], v: Variant) -> BundlePair {
    nonnegative_form(&build_pair(&WeightVec::new(a.to_vec()).unwrap(), v).unwrap())
}

/// z01 z02 z03 z12 z13 z23 in lex order.
fn col(i: usize, j: usize) -> usize {
    [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
        .iter()
        .position(|&p| p == (i, j))
        .unwrap()
}

fn two_step_flag() -> Vec<Vec<usize>> {
    vec![vec![col(0, 1)], vec![col(0, 1), col(1, 2)]]
}

/// The printed example matrix, entry for entry.
fn printed_m(a: &[i64]) -> QMatrix {
    let [a0, a1, a2, a3] = [a[0], a[1], a[2], a[3]];
    QMatrix::from_ints(&[
        [0, 0, 0, a0, a0, a0, -1, 0, 0, 0],
        [0, a1, a1, 0, 0, a1, 0, -1, 0, 0],
        [a2, 0, a2, 0, a2, 0, 0, 0, -1, 0],
        [a3, a3, 0, a3, 0, 0, 0, 0, 0, -1],
        [1, 1, 1, 1, 1, 1, 0, 0, 0, 0],
        [1, 1, 0, 1, 0, 0, 0, 0, 0, 0],
        [1, 0, 0, 0, 0, 0, 0, 0, 0, 0],
    ])
    .unwrap()
}

#[test]
fn printed_matrix_reproduced() {
    for a in [[1, 2, 3, 4], [2, 3, 5, 7], [1, 1, 1, 1]] {
        let p = pair(&a, Variant::Dual);
        let e = flag_matrix(&p, &two_step_flag()).unwrap();
        assert_eq!(
            e.e,
            QMatrix::from_ints(&[[1, 1, 1, 1, 1, 1], [1, 1, 0, 1, 0, 0], [1, 0, 0, 0, 0, 0]])
                .unwrap()
        );
        assert_eq!(build_M(&p, &e).unwrap().m, printed_m(&a));
    }
}

#[test]
fn printed_equations_reproduced() {
    let a = [1, 2, 3, 4];
    let p = pair(&a, Variant::Dual);
    let poly = divisor_polytope(&p, 9, 2);
    let sum = |s: &[usize]| s.iter().map(|&i| a[i]).sum::<i64>();
    let expect = vec![
        rats(&[1, 1, 1, 1, 1, 1, 0, 0, 0, 0]),
        rats(&[
            sum(&[2, 3]),
            sum(&[1, 3]),
            sum(&[1, 2]),
            sum(&[0, 3]),
            sum(&[0, 2]),
            sum(&[0, 1]),
            -1,
            -1,
            -1,
            -1,
        ]),
    ];
    assert_eq!(poly.a.to_rows(), expect);
    assert_eq!(poly.b, rats(&[2, 9]));
    assert_eq!(poly.variables[0], "z01");
    assert_eq!(poly.variables[9], "x3");
}

#[test]
fn primal_flags() {
    let p = pair(&[1, 1, 1], Variant::Primal);
    let e = flag_matrix(&p, &[vec![0]]).unwrap();
    assert_eq!(e.e, QMatrix::from_ints(&[[1, 1, 1], [1, 0, 0]]).unwrap());
    // {0,1} spans everything in rank 2, so it closes to the top flat
    let same = flag_matrix(&p, &[vec![0], vec![0, 1]]).unwrap();
    assert_eq!(same.e, e.e);
    assert!(matches!(
        flag_matrix(&p, &[vec![0, 1]]),
        Err(Error::InvalidFlag(_))
    ));
    let m = build_M(&p, &e).unwrap();
    assert_eq!((m.m.rows(), m.m.cols()), (5, 6));
    let p4 = pair(&[1, 2, 3, 4], Variant::Primal);
    let e4 = flag_matrix(&p4, &[vec![2], vec![2, 0]]).unwrap();
    assert_eq!(
        e4.e,
        QMatrix::from_ints(&[[1, 1, 1, 1], [1, 0, 1, 0], [0, 0, 1, 0]]).unwrap()
    );
}

#[test]
fn global_body_of_printed_matrix() {
    let m = printed_m(&[1, 2, 3, 4]);
    let body = global_body(&m, true).unwrap();
    assert_eq!(body.generators.len(), 10);
    let h = body.hrep.unwrap();
    let dot = |u: &[Rat], v: &[Rat]| u.iter().zip(v).map(|(x, y)| x * y).sum::<Rat>();
    for g in &body.generators {
        for e in &h.equations {
            assert!(dot(e, g).is_zero());
        }
        for f in &h.inequalities {
            assert!(!dot(f, g).is_negative());
        }
    }
    // each facet is supported by generators spanning a hyperplane of the span
    let span_rank = QMatrix::from_rows(body.generators.clone()).unwrap().rank();
    for f in &h.inequalities {
        let tight: Vec<Vec<Rat>> = body
            .generators
            .iter()
            .filter(|g| dot(f, g).is_zero())
            .cloned()
            .collect();
        let r = if tight.is_empty() {
            0
        } else {
            QMatrix::from_rows(tight).unwrap().rank()
        };
        assert_eq!(r, span_rank - 1);
    }
    assert!(matches!(
        global_body(&QMatrix::zeros(9, 2), true),
        Err(Error::ResourceCap(_))
    ));
    assert!(global_body(&QMatrix::zeros(9, 2), false).is_ok());
}

#[test]
fn primal_unit_vertices() {
    let p = pair(&[1, 1, 1], Variant::Primal);
    let v = vertices(&divisor_polytope(&p, 0, 1)).unwrap();
    assert_eq!(v.len(), 9);
    for u in &v {
        assert_eq!(u.iter().filter(|x| x.is_one()).count(), 2);
        assert_eq!(u.iter().filter(|x| x.is_zero()).count(), 4);
    }
    assert!(vertices(&divisor_polytope(&p, 0, -1)).unwrap().is_empty());
    let body = nok_divisor_body(&p, &flag_matrix(&p, &[vec![0]]).unwrap(), 0, 0).unwrap();
    assert_eq!(body.vertices, vec![vec![Rat::zero(); 5]]);
}

/// Basic feasible solutions by Cramer's rule on every pair and singleton of
/// columns of a two-row system.
fn bfs_oracle(a: &QMatrix, b: &[Rat]) -> Vec<Vec<Rat>> {
    let n = a.cols();
    let mut out: Vec<Vec<Rat>> = Vec::new();
    let mut push = |u: Vec<Rat>| {
        if !out.contains(&u) {
            out.push(u);
        }
    };
    if b.iter().all(Rat::is_zero) {
        push(vec![Rat::zero(); n]);
    }
    for j in 0..n {
        let (c0, c1) = (a.get(0, j), a.get(1, j));
        // t * column = b
        let t = if !c0.is_zero() {
            &b[0] / c0
        } else if !c1.is_zero() {
            &b[1] / c1
        } else {
            continue;
        };
        if &t * c0 == b[0] && &t * c1 == b[1] && !t.is_negative() {
            let mut u = vec![Rat::zero(); n];
            u[j] = t;
            push(u);
        }
    }
    for j in 0..n {
        for k in j + 1..n {
            let det = a.get(0, j) * a.get(1, k) - a.get(0, k) * a.get(1, j);
            if det.is_zero() {
                continue;
            }
            let s = (&b[0] * a.get(1, k) - &b[1] * a.get(0, k)) / &det;
            let t = (a.get(0, j) * &b[1] - a.get(1, j) * &b[0]) / &det;
            if !s.is_negative() && !t.is_negative() {
                let mut u = vec![Rat::zero(); n];
                u[j] = s;
                u[k] = t;
                push(u);
            }
        }
    }
    out.sort();
    out
}

#[test]
fn two_step_body_against_oracle() {
    let p = pair(&[1, 2, 3, 4], Variant::Dual);
    let flag = flag_matrix(&p, &two_step_flag()).unwrap();
    let m = printed_m(&[1, 2, 3, 4]);
    for (alpha, beta) in [(5, 1), (9, 2), (-1, 1), (0, 0), (20, 1)] {
        let body = nok_divisor_body(&p, &flag, alpha, beta).unwrap();
        let oracle = bfs_oracle(&body.polytope.a, &body.polytope.b);
        assert_eq!(body.polytope_vertices, oracle, "({alpha},{beta})");
        let images: Vec<Vec<Rat>> = oracle.iter().map(|u| m.mul_vec(u).unwrap()).collect();
        for v in &body.vertices {
            assert!(images.contains(v));
            let others: Vec<Vec<Rat>> = images.iter().filter(|w| *w != v).cloned().collect();
            assert!(convex_weights(&others, v).unwrap().is_none());
        }
        for w in &images {
            assert!(convex_weights(&body.vertices, w).unwrap().is_some());
        }
        let mut sorted = body.vertices.clone();
        sorted.sort();
        assert_eq!(sorted, body.vertices);
    }
    assert!(nok_divisor_body(&p, &flag, 30, 1)
        .unwrap()
        .vertices
        .is_empty());
}

#[test]
fn bodies_are_superadditive() {
    let p = pair(&[1, 2, 2], Variant::Primal);
    let flag = flag_matrix(&p, &[vec![1]]).unwrap();
    let cases = [((1, 1), (2, 1)), ((0, 1), (-1, 1)), ((2, 1), (2, 2))];
    for ((a1, b1), (a2, b2)) in cases {
        let x = nok_divisor_body(&p, &flag, a1, b1).unwrap().vertices;
        let y = nok_divisor_body(&p, &flag, a2, b2).unwrap().vertices;
        let z = nok_divisor_body(&p, &flag, a1 + a2, b1 + b2)
            .unwrap()
            .vertices;
        for u in &x {
            for v in &y {
                let s: Vec<Rat> = u.iter().zip(v).map(|(a, b)| a + b).collect();
                assert!(convex_weights(&z, &s).unwrap().is_some());
            }
        }
    }
}

#[test]
fn phi_shapes() {
    let p = pair(&[1, 2, 3], Variant::Dual);
    assert!(phi_and_section(&p, &rats(&[1, 2]), Direction::Phi).is_err());
    assert_eq!(
        phi_and_section(&p, &rats(&[0, 0, 0]), Direction::Section).unwrap(),
        rats(&[0; 6])
    );
}

proptest! {
    #[test]
    fn phi_after_section_is_identity(
        a in prop::collection::vec(1i64..6, 3..6),
        dual in any::<bool>(),
        seed in prop::collection::vec(-50i64..50, 15),
    ) {
        let p = pair(&a, if dual { Variant::Dual } else { Variant::Primal });
        let v: Vec<Rat> = seed.iter().cycle().take(p.vars.len()).map(|&x| Rat::new(x, 3)).collect();
        let s = phi_and_section(&p, &v, Direction::Section).unwrap();
        prop_assert_eq!(phi_and_section(&p, &s, Direction::Phi).unwrap(), v.clone());
        for i in 0..p.rays() {
            let mut w = v.clone();
            w.extend((0..p.rays()).map(|k| if k == i { Rat::one() } else { Rat::zero() }));
            let expect: Vec<Rat> = v.iter().zip(p.d.row(i)).map(|(x, d)| x + d).collect();
            prop_assert_eq!(phi_and_section(&p, &w, Direction::Phi).unwrap(), expect);
        }
    }

    #[test]
    fn polytope_vertices_feasible(
        a in prop::collection::vec(1i64..5, 3..5),
        dual in any::<bool>(),
        alpha in -5i64..25,
        beta in 0i64..4,
    ) {
        let p = pair(&a, if dual { Variant::Dual } else { Variant::Primal });
        let poly = divisor_polytope(&p, alpha, beta);
        let v = vertices(&poly).unwrap();
        prop_assert_eq!(&v, &bfs_oracle(&poly.a, &poly.b));
        for u in &v {
            prop_assert!(poly.contains(u));
        }
    }
}
