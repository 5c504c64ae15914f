//! Acceptance suite. Each criterion runs once against its time limit and
//! prints a single PASS or FAIL line; the process exits non-zero on any FAIL.

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tvb_core::bundle::{build_pair, lex_pairs, nonnegative_form, BundlePair, Variant, WeightVec};
use tvb_core::coxring::{cox_ideal, verify_flag_relations, verify_phi_generators};
use tvb_core::exactmath::{convex_weights, QMatrix, Rat, SparsePoly};
use tvb_core::matroid::{facet_initial, iterated_initial, LinearIdeal};
use tvb_core::nokbody::{
    build_M, divisor_polytope, flag_matrix, nok_divisor_body, phi_and_section, Direction,
};
use tvb_core::positivity::{fujita_certify, Verdict};
use tvb_core::tropic::{
    check_membership, enumerate_trees, tree_from_flag, trop_point_from_tree, wellpoised_check,
    wellpoised_hypersurface,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn wv(a: &[i64]) -> WeightVec {
    WeightVec::new(a.to_vec()).unwrap()
}

fn ints(rows: &[[i64; 6]]) -> QMatrix {
    QMatrix::from_ints(rows).unwrap()
}

fn random_weights(rng: &mut ChaCha8Rng, len: usize, max: i64) -> Vec<i64> {
    (0..len).map(|_| rng.gen_range(1..=max)).collect()
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            out.push(q);
        }
    }
    out
}

fn golden_matrices() -> Check {
    let pairs = lex_pairs(4);
    for a in [[2i64, 3, 5, 7], [1, 2, 3, 4], [11, 1, 4, 9]] {
        let primal = build_pair(&wv(&a), Variant::Primal).map_err(|e| e.to_string())?;
        let mut diag = vec![vec![Rat::zero(); 4]; 4];
        for (i, row) in diag.iter_mut().enumerate() {
            row[i] = Rat::from_int(a[i]);
        }
        ensure(primal.d.to_rows() == diag, || format!("D_a at {a:?}"))?;
        let sum = LinearIdeal::from_polys(
            &primal.vars,
            &[SparsePoly::parse("y0 + y1 + y2 + y3", Some(&primal.vars)).unwrap()],
        )
        .unwrap();
        ensure(primal.l == sum, || "L_3".into())?;

        let dual = build_pair(&wv(&a), Variant::Dual).map_err(|e| e.to_string())?;
        let mut dv = [[0i64; 6]; 4];
        let mut dn = [[0i64; 6]; 4];
        for l in 0..4 {
            for (c, &(i, j)) in pairs.iter().enumerate() {
                let hit = l == i || l == j;
                dv[l][c] = if hit { -a[l] } else { 0 };
                dn[l][c] = if hit { 0 } else { a[l] };
            }
        }
        ensure(dual.d == ints(&dv), || format!("D_a^vee at {a:?}"))?;
        ensure(nonnegative_form(&dual).d == ints(&dn), || {
            format!("D_a' at {a:?}")
        })?;
        let circuits: Vec<SparsePoly> = [(0, 1, 2), (0, 1, 3), (0, 2, 3), (1, 2, 3)]
            .iter()
            .map(|&(i, j, k)| {
                let s = format!("z{i}{k} - z{i}{j} - z{j}{k}");
                SparsePoly::parse(&s, Some(&dual.vars)).unwrap()
            })
            .collect();
        ensure(
            dual.l == LinearIdeal::from_polys(&dual.vars, &circuits).unwrap(),
            || "L_3^vee".into(),
        )?;
    }
    Ok("D_a, D_a^vee and D_a' match entry for entry at 3 weight vectors".into())
}

fn initial_ideals() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut checked = 0;
    for n in 2..=4usize {
        for a in [
            (1..=n as i64 + 1).collect::<Vec<_>>(),
            random_weights(&mut rng, n + 1, 9),
        ] {
            let primal = build_pair(&wv(&a), Variant::Primal).unwrap();
            let dual = nonnegative_form(&build_pair(&wv(&a), Variant::Dual).unwrap());
            for (p, is_dual) in [(&primal, false), (&dual, true)] {
                for i in 0..=n {
                    let expect: Vec<usize> = if is_dual {
                        lex_pairs(n + 1)
                            .iter()
                            .enumerate()
                            .filter(|(_, &(j, k))| i != j && i != k)
                            .map(|(c, _)| c)
                            .collect()
                    } else {
                        vec![i]
                    };
                    let got = facet_initial(p, i).map_err(|e| e.to_string())?;
                    ensure(got.monomial_generators() == Some(expect.clone()), || {
                        format!("n={n} a={a:?} facet {i} dual={is_dual}")
                    })?;
                    let rows: Vec<Vec<Rat>> = (0..=n)
                        .filter(|&r| r != i)
                        .map(|r| p.d.row(r).to_vec())
                        .collect();
                    for perm in permutations(rows.len()) {
                        let permuted: Vec<Vec<Rat>> =
                            perm.iter().map(|&k| rows[k].clone()).collect();
                        let again = iterated_initial(&p.l, &permuted).map_err(|e| e.to_string())?;
                        ensure(again == got, || format!("order dependence n={n} facet {i}"))?;
                    }
                    checked += 1;
                }
            }
        }
    }
    Ok(format!("{checked} facet initial ideals, all row orders"))
}

fn phi_correspondence() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 2..=4usize {
        let expect = (n + 2) * (n + 1) * n * (n - 1) / 24;
        for _ in 0..5 {
            let a = random_weights(&mut rng, n + 1, 9);
            let m = verify_phi_generators(&wv(&a)).map_err(|e| e.to_string())?;
            let gens = cox_ideal(&wv(&a), Variant::Dual).unwrap().generators;
            let mut used: Vec<usize> = m.iter().map(|x| x.generator_index).collect();
            used.sort();
            used.dedup();
            ensure(
                m.len() == expect && gens.len() == expect && used.len() == expect,
                || {
                    format!(
                        "n={n} a={a:?}: {} matches for {} generators",
                        m.len(),
                        gens.len()
                    )
                },
            )?;
            if n == 3 {
                let quadrics = gens.iter().filter(|g| !g.to_string().contains('x')).count();
                let three = gens.iter().filter(|g| g.num_terms() == 3).count();
                ensure(quadrics == 1 && three == 5, || {
                    format!("n=3: {quadrics} quadrics, {three} three-term generators")
                })?;
            }
        }
    }
    Ok("C(n+2,4) Plücker generators matched bijectively, n=2..4, 5 weights each".into())
}

fn wellpoised() -> Check {
    let cases: [&[i64]; 6] = [
        &[1, 1, 1],
        &[1, 2, 3],
        &[2, 2, 2],
        &[1, 1, 1, 1],
        &[1, 2, 3, 4],
        &[2, 2, 2, 2],
    ];
    let mut trees = 0;
    for a in cases {
        let reports = wellpoised_check(&wv(a), 4).map_err(|e| e.to_string())?;
        let expected = if a.len() == 3 { 3 } else { 15 };
        ensure(reports.len() == expected, || {
            format!("{a:?}: {} trees", reports.len())
        })?;
        for r in &reports {
            ensure(r.passed(), || {
                format!("{a:?} tree {}: {:?}", r.newick, r.failures)
            })?;
            ensure(r.status_label() == "PASS (verified up to degree 4)", || {
                r.status_label()
            })?;
        }
        trees += reports.len();
    }
    Ok(format!(
        "{trees} trees PASS (verified up to degree 4); primeness itself not proved"
    ))
}

fn printed_m(a: &[i64; 4]) -> QMatrix {
    let [a0, a1, a2, a3] = *a;
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

/// Basic feasible solutions of a two-row system `A u = b, u >= 0`.
fn bfs(a: &QMatrix, b: &[Rat]) -> Vec<Vec<Rat>> {
    let n = a.cols();
    let mut out: Vec<Vec<Rat>> = Vec::new();
    if b.iter().all(Rat::is_zero) {
        out.push(vec![Rat::zero(); n]);
    }
    for j in 0..n {
        for k in j..n {
            let sol = if j == k {
                let (c0, c1) = (a.get(0, j), a.get(1, j));
                let t = if !c0.is_zero() {
                    &b[0] / c0
                } else if !c1.is_zero() {
                    &b[1] / c1
                } else {
                    continue;
                };
                (&t * c0 == b[0] && &t * c1 == b[1]).then(|| vec![(j, t)])
            } else {
                let det = a.get(0, j) * a.get(1, k) - a.get(0, k) * a.get(1, j);
                if det.is_zero() {
                    continue;
                }
                let s = (&b[0] * a.get(1, k) - &b[1] * a.get(0, k)) / &det;
                let t = (a.get(0, j) * &b[1] - a.get(1, j) * &b[0]) / &det;
                Some(vec![(j, s), (k, t)])
            };
            if let Some(sol) = sol {
                if sol.iter().all(|(_, x)| !x.is_negative()) {
                    let mut u = vec![Rat::zero(); n];
                    for (c, x) in sol {
                        u[c] = x;
                    }
                    if !out.contains(&u) {
                        out.push(u);
                    }
                }
            }
        }
    }
    out.sort();
    out
}

fn nok_example() -> Check {
    let a = [1i64, 2, 3, 4];
    let p = nonnegative_form(&build_pair(&wv(&a), Variant::Dual).unwrap());
    let col = |i: usize, j: usize| lex_pairs(4).iter().position(|&q| q == (i, j)).unwrap();
    let flag = flag_matrix(&p, &[vec![col(0, 1)], vec![col(0, 1), col(1, 2)]])
        .map_err(|e| e.to_string())?;
    let m = build_M(&p, &flag).map_err(|e| e.to_string())?.m;
    ensure(m == printed_m(&a), || "7x10 matrix differs".into())?;

    let s = |idx: &[usize]| idx.iter().map(|&i| a[i]).sum::<i64>();
    let (alpha, beta) = (9, 2);
    let poly = divisor_polytope(&p, alpha, beta);
    let eq = QMatrix::from_ints(&[
        [1, 1, 1, 1, 1, 1, 0, 0, 0, 0],
        [
            s(&[2, 3]),
            s(&[1, 3]),
            s(&[1, 2]),
            s(&[0, 3]),
            s(&[0, 2]),
            s(&[0, 1]),
            -1,
            -1,
            -1,
            -1,
        ],
    ])
    .unwrap();
    ensure(poly.a == eq, || "equations differ".into())?;
    ensure(
        poly.b == vec![Rat::from_int(beta), Rat::from_int(alpha)],
        || "right-hand side".into(),
    )?;

    let mut bodies = 0;
    for (alpha, beta) in [(5, 1), (9, 2), (0, 1), (-1, 1), (0, 0), (14, 2), (30, 1)] {
        let body = nok_divisor_body(&p, &flag, alpha, beta).map_err(|e| e.to_string())?;
        let oracle = bfs(&body.polytope.a, &body.polytope.b);
        ensure(body.polytope_vertices == oracle, || {
            format!("P vertices at ({alpha},{beta})")
        })?;
        let images: Vec<Vec<Rat>> = oracle.iter().map(|u| m.mul_vec(u).unwrap()).collect();
        for w in &images {
            ensure(convex_weights(&body.vertices, w).unwrap().is_some(), || {
                format!("image outside body at ({alpha},{beta})")
            })?;
        }
        for v in &body.vertices {
            let others: Vec<Vec<Rat>> = images.iter().filter(|w| *w != v).cloned().collect();
            ensure(
                images.contains(v) && convex_weights(&others, v).unwrap().is_none(),
                || format!("non-extreme vertex at ({alpha},{beta})"),
            )?;
        }
        bodies += 1;
    }
    Ok(format!(
        "printed M and equations reproduced; {bodies} bodies agree with BFS enumeration"
    ))
}

fn fujita() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..20 {
        let len = rng.gen_range(3..=5);
        let a = random_weights(&mut rng, len, 5);
        for v in [Variant::Primal, Variant::Dual] {
            let c = fujita_certify(&a, v).map_err(|e| e.to_string())?;
            ensure(
                c.verdict == Verdict::Pass && c.saturated && c.tidy && c.missing_points.is_empty(),
                || format!("{a:?} {v:?}: {c:?}"),
            )?;
        }
    }
    Ok("40 certificates PASS: saturated, tidy, no missing points in radius 50".into())
}

fn flag_relations() -> Check {
    let mut total = 0;
    for a in [[1i64, 1, 1, 1], [1, 2, 1, 3]] {
        let r = verify_flag_relations(&wv(&a)).map_err(|e| e.to_string())?;
        let kinds: std::collections::BTreeSet<&str> =
            r.relations.iter().map(|x| x.kind.as_str()).collect();
        ensure(kinds.len() >= 2, || {
            format!("{a:?}: relation kinds {kinds:?}")
        })?;
        for rel in &r.relations {
            ensure(rel.vanishes && rel.residue.is_zero(), || {
                format!("{a:?}: {} -> {}", rel.relation, rel.residue)
            })?;
        }
        ensure(r.all_vanish, || format!("{a:?}"))?;
        total += r.relations.len();
    }
    Ok(format!(
        "{total} incidence and exchange relations map to zero"
    ))
}

fn random_pair(rng: &mut ChaCha8Rng) -> BundlePair {
    let len = rng.gen_range(3..=5);
    let a = random_weights(rng, len, 6);
    let v = if rng.gen_bool(0.5) {
        Variant::Dual
    } else {
        Variant::Primal
    };
    nonnegative_form(&build_pair(&wv(&a), v).unwrap())
}

/// Merges two random blocks at a time, recording the pairs inside blocks.
fn random_flag(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<usize>> {
    let pairs = lex_pairs(n + 1);
    let mut part: Vec<Vec<usize>> = (0..=n).map(|i| vec![i]).collect();
    let mut spans = Vec::new();
    while part.len() > 1 {
        let i = rng.gen_range(0..part.len());
        let mut j = rng.gen_range(0..part.len() - 1);
        if j >= i {
            j += 1;
        }
        let b = part.remove(i.max(j));
        part[i.min(j)].extend(b);
        spans.push(
            pairs
                .iter()
                .enumerate()
                .filter(|(_, (x, y))| part.iter().any(|b| b.contains(x) && b.contains(y)))
                .map(|(e, _)| e)
                .collect(),
        );
    }
    spans
}

fn properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..1000 {
        let p = random_pair(&mut rng);
        let v: Vec<Rat> = (0..p.vars.len())
            .map(|_| Rat::new(rng.gen_range(-60..60), rng.gen_range(1..7)))
            .collect();
        let s = phi_and_section(&p, &v, Direction::Section).map_err(|e| e.to_string())?;
        ensure(
            phi_and_section(&p, &s, Direction::Phi).unwrap() == v,
            || "phi after s".into(),
        )?;
    }

    for _ in 0..50 {
        let len = rng.gen_range(3..=6);
        let a = random_weights(&mut rng, len, 9);
        let terms: Vec<String> = a
            .iter()
            .enumerate()
            .map(|(j, aj)| format!("x{j}^{aj}*Y{j}"))
            .collect();
        let f = SparsePoly::parse(&terms.join(" + "), None).unwrap();
        ensure(wellpoised_hypersurface(&f), || format!("{f} rejected"))?;
        let g = &cox_ideal(&wv(&a), Variant::Primal).unwrap().generators[0];
        ensure(wellpoised_hypersurface(g), || format!("{g} rejected"))?;
    }
    ensure(
        !wellpoised_hypersurface(&SparsePoly::parse("x^2 + y^2", None).unwrap()),
        || "x^2 + y^2 accepted".into(),
    )?;

    let mut points = 0;
    for n in 2..=4usize {
        let counts = [3, 15, 105];
        let trees = enumerate_trees(n + 2).map_err(|e| e.to_string())?;
        ensure(trees.len() == counts[n - 2], || {
            format!("{} trees on {} leaves", trees.len(), n + 2)
        })?;
        for t in &trees {
            let a = wv(&random_weights(&mut rng, n + 1, 5));
            let mut t = t.clone();
            for e in t.internal_edges() {
                t.set_weight(e, Rat::new(rng.gen_range(0..20), rng.gen_range(1..4)));
            }
            let rho = trop_point_from_tree(&t, Some(&a)).map_err(|e| e.to_string())?;
            let gens = cox_ideal(&a, Variant::Dual).unwrap().generators;
            check_membership(&gens, &rho).map_err(|e| e.to_string())?;
            points += 1;
        }
        for _ in 0..20 {
            let a = wv(&random_weights(&mut rng, n + 1, 5));
            let v: Vec<Rat> = (0..n)
                .map(|_| Rat::new(rng.gen_range(0..10), rng.gen_range(1..3)))
                .collect();
            let ft = tree_from_flag(n, &random_flag(&mut rng, n), &v).map_err(|e| e.to_string())?;
            let gens = cox_ideal(&a, Variant::Dual).unwrap().generators;
            check_membership(&gens, &ft.point).map_err(|e| e.to_string())?;
            points += 1;
        }
    }
    Ok(format!(
        "phi∘s on 1000 points; 101 hypersurfaces; {points} tropical points; counts 3/15/105"
    ))
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Check,
}

fn main() {
    let criteria = [
        Criterion {
            id: 1,
            name: "golden matrices",
            limit: Some(Duration::from_secs(1)),
            run: golden_matrices,
        },
        Criterion {
            id: 2,
            name: "initial ideals",
            limit: Some(Duration::from_secs(1)),
            run: initial_ideals,
        },
        Criterion {
            id: 3,
            name: "phi correspondence",
            limit: Some(Duration::from_secs(1)),
            run: phi_correspondence,
        },
        Criterion {
            id: 4,
            name: "well-poised (degree-bounded)",
            limit: Some(Duration::from_secs(300)),
            run: wellpoised,
        },
        Criterion {
            id: 5,
            name: "Newton-Okounkov example",
            limit: Some(Duration::from_secs(10)),
            run: nok_example,
        },
        Criterion {
            id: 6,
            name: "Fujita certificates",
            limit: Some(Duration::from_secs(60)),
            run: fujita,
        },
        Criterion {
            id: 7,
            name: "flag relations",
            limit: Some(Duration::from_secs(30)),
            run: flag_relations,
        },
        Criterion {
            id: 8,
            name: "property suites",
            limit: None,
            run: properties,
        },
    ];
    let mut failed = 0;
    for c in &criteria {
        let start = Instant::now();
        let result = (c.run)();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(d) if c.limit.is_none_or(|l| took <= l) => (true, d),
            Ok(d) => (false, format!("{d}; over time limit")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "[{}] {}. {} ({:.3}s, {}): {}",
            if ok { "PASS" } else { "FAIL" },
            c.id,
            c.name,
            took.as_secs_f64(),
            c.limit.map_or("no limit".to_string(), |l| format!(
                "limit {}s",
                l.as_secs()
            )),
            detail
        );
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
