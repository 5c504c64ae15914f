//! Tree semigroups, their degree-bounded toric ideals, and the per-tree
//! well-poised check.

use std::collections::HashMap;
use std::fmt;

use num_integer::Integer;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use super::tree::{enumerate_trees, LabelledTree};
use super::{initial_forms, tree_point, unit_weights};
use crate::bundle::{lex_pairs, Variant, WeightVec};
use crate::coxring::{cox_ideal, cox_variables};
use crate::error::{Error, Result};
use crate::exactmath::{Rat, SparsePoly};

/// Largest number of monomials enumerated for one degree bound.
pub const MONOMIAL_CAP: usize = 2_000_000;

/// Generators of `S_T(a)` attached to the dual Cox variables:
/// `x_i -> (1/a_i) p_{0,i+1}` and `Z_jk -> p_{j+1,k+1}`. Stored scaled by
/// `lcm(a)` so every entry is an integer.
#[derive(Debug, Clone, Serialize)]
pub struct TreeSemigroup {
    pub tree: LabelledTree,
    pub a: Vec<i64>,
    pub scale: i64,
    pub variables: Vec<String>,
    pub scaled_generators: Vec<Vec<i64>>,
}

impl TreeSemigroup {
    pub fn n(&self) -> usize {
        self.a.len() - 1
    }

    /// Generator of `var` with its true rational entries.
    pub fn generator(&self, var: &str) -> Option<Vec<Rat>> {
        let i = self.variables.iter().position(|v| v == var)?;
        Some(
            self.scaled_generators[i]
                .iter()
                .map(|&x| Rat::new(x, self.scale))
                .collect(),
        )
    }

    /// Scaled image of a monomial given by exponents over `variables`.
    pub fn image(&self, exps: &[i32]) -> Vec<i64> {
        let mut out = vec![0; self.tree.edges().len()];
        for (e, g) in exps.iter().zip(&self.scaled_generators) {
            if *e != 0 {
                for (o, x) in out.iter_mut().zip(g) {
                    *o += i64::from(*e) * x;
                }
            }
        }
        out
    }

    /// Per-variable grading `1/a_i` on `x_i` and `1` on `Z_jk`, scaled by
    /// `lcm(a)`. It equals half the leaf-edge mass of the image.
    fn scaled_grades(&self) -> Vec<i64> {
        let n = self.n();
        let mut g: Vec<i64> = self.a.iter().map(|ai| self.scale / ai).collect();
        g.extend(std::iter::repeat_n(self.scale, n * (n + 1) / 2));
        g
    }

    pub fn degree(&self, exps: &[i32]) -> Rat {
        let s: i64 = exps
            .iter()
            .zip(self.scaled_grades())
            .map(|(e, g)| i64::from(*e) * g)
            .sum();
        Rat::new(s, self.scale)
    }

    /// Every monomial of degree at most `d`.
    pub fn monomials_upto(&self, d: usize) -> Result<Vec<Vec<i32>>> {
        let grades = self.scaled_grades();
        let budget = d as i64 * self.scale;
        let mut out = Vec::new();
        let mut cur = vec![0i32; grades.len()];
        fill(&grades, 0, budget, &mut cur, &mut out)?;
        Ok(out)
    }
}

fn fill(
    grades: &[i64],
    k: usize,
    budget: i64,
    cur: &mut Vec<i32>,
    out: &mut Vec<Vec<i32>>,
) -> Result<()> {
    if k == grades.len() {
        if out.len() >= MONOMIAL_CAP {
            return Err(Error::ResourceCap(format!(
                "more than {MONOMIAL_CAP} monomials"
            )));
        }
        out.push(cur.clone());
        return Ok(());
    }
    let mut e = 0;
    while e as i64 * grades[k] <= budget {
        cur[k] = e;
        fill(grades, k + 1, budget - e as i64 * grades[k], cur, out)?;
        e += 1;
    }
    cur[k] = 0;
    Ok(())
}

/// `S_T(a)` for a tree on `n+2` leaves; `None` gives unit weights.
pub fn semigroup_st(t: &LabelledTree, a: Option<&WeightVec>) -> Result<TreeSemigroup> {
    if t.leaves() < 4 {
        return Err(Error::LeafCountOutOfRange(t.leaves()));
    }
    let n = t.leaves() - 2;
    let a = match a {
        Some(a) if a.n() != n => {
            return Err(Error::DimensionMismatch(format!(
                "tree has {} leaves but a has {} entries",
                t.leaves(),
                a.len()
            )))
        }
        Some(a) => a.clone(),
        None => unit_weights(n),
    };
    let scale = a.as_slice().iter().fold(1i64, |l, x| l.lcm(x));
    let mut gens = Vec::new();
    for i in 0..=n {
        let f = scale / a.get(i);
        gens.push(
            t.path_indicator(0, i + 1)
                .into_iter()
                .map(|x| x * f)
                .collect(),
        );
    }
    for (j, k) in lex_pairs(n + 1) {
        gens.push(
            t.path_indicator(j + 1, k + 1)
                .into_iter()
                .map(|x| x * scale)
                .collect(),
        );
    }
    Ok(TreeSemigroup {
        tree: t.clone(),
        a: a.as_slice().to_vec(),
        scale,
        variables: cox_variables(n, Variant::Dual),
        scaled_generators: gens,
    })
}

fn buckets(s: &TreeSemigroup, monos: &[Vec<i32>]) -> Vec<Vec<usize>> {
    let mut map: HashMap<Vec<i64>, Vec<usize>> = HashMap::new();
    for (i, m) in monos.iter().enumerate() {
        map.entry(s.image(m)).or_default().push(i);
    }
    let mut out: Vec<Vec<usize>> = map.into_values().collect();
    out.sort();
    out
}

/// Binomials spanning the toric ideal of `S` in every degree up to `d`:
/// within each fiber, the first monomial minus each of the others.
pub fn toric_ideal_upto(s: &TreeSemigroup, d: usize) -> Result<Vec<SparsePoly>> {
    if d > 6 || s.n() > 4 {
        return Err(Error::Precondition(format!(
            "need d <= 6 and n <= 4 (d = {d}, n = {})",
            s.n()
        )));
    }
    let monos = s.monomials_upto(d)?;
    let mono = |i: usize| SparsePoly::monomial(&s.variables, monos[i].clone(), Rat::one());
    let mut out = Vec::new();
    for b in buckets(s, &monos) {
        for &other in &b[1..] {
            out.push(mono(b[0]).sub(&mono(other)));
        }
    }
    Ok(out)
}

/// Union-find where each node carries a factor with `node = factor * root`
/// in the quotient by the binomials added so far.
struct Relations {
    parent: Vec<usize>,
    factor: Vec<Rat>,
    degenerate: Vec<bool>,
}

impl Relations {
    fn new(n: usize) -> Self {
        Relations {
            parent: (0..n).collect(),
            factor: vec![Rat::one(); n],
            degenerate: vec![false; n],
        }
    }

    fn find(&mut self, x: usize) -> (usize, Rat) {
        if self.parent[x] == x {
            return (x, Rat::one());
        }
        let p = self.parent[x];
        let (r, f) = self.find(p);
        let nf = &self.factor[x] * &f;
        self.parent[x] = r;
        self.factor[x] = nf.clone();
        (r, nf)
    }

    /// Records `x + c*y = 0`.
    fn relate(&mut self, x: usize, y: usize, c: &Rat) {
        let (rx, fx) = self.find(x);
        let (ry, fy) = self.find(y);
        let want = -(c * &fy);
        if rx == ry {
            if fx != want {
                self.degenerate[rx] = true;
            }
            return;
        }
        self.parent[rx] = ry;
        self.factor[rx] = want / fx;
        if self.degenerate[rx] {
            self.degenerate[ry] = true;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct TreeReport {
    pub tree_id: usize,
    pub newick: String,
    #[serde(serialize_with = "status_string")]
    pub status: (TreeStatus, usize),
    pub internal_weights: Vec<Rat>,
    pub initial_forms: Vec<SparsePoly>,
    pub fibers_checked: usize,
    pub failures: Vec<String>,
}

impl TreeReport {
    pub fn passed(&self) -> bool {
        self.status.0 == TreeStatus::Pass
    }

    pub fn status_label(&self) -> String {
        StatusLabel(self.status).to_string()
    }
}

struct StatusLabel((TreeStatus, usize));

impl fmt::Display for StatusLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (s, d) = self.0;
        let word = if s == TreeStatus::Pass {
            "PASS"
        } else {
            "FAIL"
        };
        write!(f, "{word} (verified up to degree {d})")
    }
}

fn status_string<S: Serializer>(
    v: &(TreeStatus, usize),
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(&StatusLabel(*v))
}

fn primes(count: usize) -> Vec<i64> {
    let mut out = Vec::new();
    let mut k = 2i64;
    while out.len() < count {
        if (2..k).take_while(|p| p * p <= k).all(|p| k % p != 0) {
            out.push(k);
        }
        k += 1;
    }
    out
}

const REDRAWS: usize = 8;

/// Compares the ideal generated by initial forms of the dual Cox generators
/// with the toric ideal of `S_T(a)`, fiber by fiber, for every tree on
/// `n+2` leaves. Runs the trees in parallel.
pub fn wellpoised_check(a: &WeightVec, d: usize) -> Result<Vec<TreeReport>> {
    let n = a.n();
    if n > 3 || d > 4 {
        return Err(Error::Precondition(format!(
            "need n <= 3 and d <= 4 (n = {n}, d = {d})"
        )));
    }
    let trees = enumerate_trees(n + 2)?;
    let gens = cox_ideal(a, Variant::Dual)?.generators;
    trees
        .par_iter()
        .enumerate()
        .map(|(id, t)| check_tree(id, t, a, &gens, d))
        .collect()
}

/// The check for a single tree.
pub fn check_tree(
    tree_id: usize,
    t: &LabelledTree,
    a: &WeightVec,
    gens: &[SparsePoly],
    d: usize,
) -> Result<TreeReport> {
    let internal = t.internal_edges();
    let pool = primes(internal.len() * (REDRAWS + 1));
    let s = semigroup_st(t, Some(a))?;
    for attempt in 0..REDRAWS {
        let mut weights = vec![Rat::zero(); t.edges().len()];
        let chosen: Vec<Rat> = pool[attempt..attempt + internal.len()]
            .iter()
            .map(|&p| Rat::from_int(p))
            .collect();
        for (e, w) in internal.iter().zip(&chosen) {
            weights[*e] = w.clone();
        }
        let weighted = t.clone().with_weights(weights)?;
        let (rho, _) = tree_point(&weighted, Some(a))?;
        let ins = initial_forms(gens, &rho)?;
        let Some(binomials) = split_binomials(&s, &ins)? else {
            continue;
        };
        let (fibers, failures) = compare_fibers(&s, &binomials, d)?;
        let status = if failures.is_empty() {
            TreeStatus::Pass
        } else {
            TreeStatus::Fail
        };
        return Ok(TreeReport {
            tree_id,
            newick: t.newick(),
            status: (status, d),
            internal_weights: chosen,
            initial_forms: ins,
            fibers_checked: fibers,
            failures,
        });
    }
    Err(Error::VerificationFailed(format!(
        "no generic weights found for tree {tree_id} after {REDRAWS} draws"
    )))
}

type Binomial = (Vec<i32>, Vec<i32>, Rat);

/// `(u, v, c)` with `in(g)` proportional to `x^u + c x^v`, or `None` when some
/// initial form is not a binomial with both terms in the same fiber.
fn split_binomials(s: &TreeSemigroup, ins: &[SparsePoly]) -> Result<Option<Vec<Binomial>>> {
    let mut out = Vec::new();
    for f in ins {
        let f = f.align_to(&s.variables)?;
        let terms: Vec<(&Vec<i32>, &Rat)> = f.terms().collect();
        if terms.len() != 2 {
            return Ok(None);
        }
        let (u, cu) = terms[0];
        let (v, cv) = terms[1];
        if s.image(u) != s.image(v) {
            return Ok(None);
        }
        out.push((u.clone(), v.clone(), cv / cu));
    }
    Ok(Some(out))
}

/// Returns the number of fibers inspected and a description of each fiber
/// where the two ideals differ.
fn compare_fibers(
    s: &TreeSemigroup,
    binomials: &[Binomial],
    d: usize,
) -> Result<(usize, Vec<String>)> {
    let monos = s.monomials_upto(d)?;
    let index: HashMap<&Vec<i32>, usize> = monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
    let mut rel = Relations::new(monos.len());
    for (i, m) in monos.iter().enumerate() {
        for (u, v, c) in binomials {
            if m.iter().zip(u).all(|(x, y)| x >= y) {
                let shifted: Vec<i32> = m
                    .iter()
                    .zip(u)
                    .zip(v)
                    .map(|((x, y), z)| x - y + z)
                    .collect();
                let j = index[&shifted];
                rel.relate(i, j, c);
            }
        }
    }
    let mut failures = Vec::new();
    let fibers = buckets(s, &monos);
    for b in &fibers {
        let mut roots: Vec<usize> = b.iter().map(|&i| rel.find(i).0).collect();
        roots.sort_unstable();
        roots.dedup();
        let show = |i: usize| SparsePoly::monomial(&s.variables, monos[i].clone(), Rat::one());
        if roots.len() > 1 {
            failures.push(format!(
                "degree {}: fiber of {} has {} classes, relations missing",
                s.degree(&monos[b[0]]),
                show(b[0]),
                roots.len()
            ));
        }
        if roots.iter().any(|&r| rel.degenerate[r]) {
            failures.push(format!(
                "degree {}: fiber of {} contains a monomial",
                s.degree(&monos[b[0]]),
                show(b[0])
            ));
        }
    }
    Ok((fibers.len(), failures))
}
