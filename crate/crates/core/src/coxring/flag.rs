//! The map from the flag-bundle Cox ring generators into `C[t_j^±, y_ij]`
//! and symbolic checks of the incidence and exchange relations.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::gz::GZSymbol;
use crate::bundle::{pair_label, WeightVec};
use crate::error::{Error, Result};
use crate::exactmath::{indexed_names, QMatrix, Rat, SparsePoly};

pub use super::gz::GZSymbol as FlagSymbol;

fn index_label(prefix: &str, idx: &[usize]) -> String {
    let parts: Vec<String> = idx.iter().map(usize::to_string).collect();
    if idx.iter().any(|&i| i >= 10) {
        format!("{prefix}{}", parts.join("_"))
    } else {
        format!("{prefix}{}", parts.concat())
    }
}

impl FlagSymbol {
    /// `x2`, `P13` for `P_{13}`, `P03` for `P_{0,{3}}` and `P0` for `P_{0,∅}`.
    pub fn label(&self) -> String {
        match self {
            GZSymbol::X(j) => format!("x{j}"),
            GZSymbol::P(tau) => index_label("P", tau),
            GZSymbol::P0(tau) => {
                let mut idx = vec![0];
                idx.extend(tau);
                index_label("P", &idx)
            }
        }
    }

    pub fn parse_label(s: &str) -> Result<FlagSymbol> {
        let bad = || Error::Parse(format!("not a flag generator: {s:?}"));
        if let Some(rest) = s.strip_prefix('x') {
            return rest.parse().map(GZSymbol::X).map_err(|_| bad());
        }
        let rest = s.strip_prefix('P').ok_or_else(bad)?;
        let idx: Vec<usize> = if rest.contains('_') {
            rest.split('_')
                .map(|p| p.parse().map_err(|_| bad()))
                .collect::<Result<_>>()?
        } else {
            rest.chars()
                .map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad))
                .collect::<Result<_>>()?
        };
        match idx.split_first() {
            Some((0, tail)) => Ok(GZSymbol::P0(tail.to_vec())),
            Some(_) => Ok(GZSymbol::P(idx)),
            None => Err(bad()),
        }
    }
}

/// Target variables `t0..tn` and `y{i}{j}` for `1 <= i <= n-1`, `1 <= j <= n`.
pub fn psi_target_vars(n: usize) -> Vec<String> {
    let mut vars = indexed_names("t", n + 1);
    for i in 1..n {
        for j in 1..=n {
            vars.push(pair_label("y", i, j));
        }
    }
    vars
}

/// Generators `x0..xn`, every `P_tau` with `1 <= |tau| <= n-1` and every
/// `P_{0,tau}` with `|tau| <= n-2`.
pub fn flag_symbols(n: usize) -> Vec<FlagSymbol> {
    let mut out: Vec<FlagSymbol> = (0..=n).map(GZSymbol::X).collect();
    let subsets: Vec<Vec<usize>> = (0u32..1 << n)
        .map(|m| (1..=n).filter(|j| m & (1 << (j - 1)) != 0).collect())
        .collect();
    let mut ps: Vec<&Vec<usize>> = subsets
        .iter()
        .filter(|t| !t.is_empty() && t.len() < n)
        .collect();
    ps.sort_by(|x, y| x.len().cmp(&y.len()).then(x.cmp(y)));
    out.extend(ps.into_iter().map(|t| GZSymbol::P(t.clone())));
    let mut p0s: Vec<&Vec<usize>> = subsets.iter().filter(|t| t.len() + 2 <= n).collect();
    p0s.sort_by(|x, y| x.len().cmp(&y.len()).then(x.cmp(y)));
    out.extend(p0s.into_iter().map(|t| GZSymbol::P0(t.clone())));
    out
}

pub fn flag_variables(n: usize) -> Vec<String> {
    flag_symbols(n).iter().map(FlagSymbol::label).collect()
}

fn var(vars: &[String], name: &str) -> SparsePoly {
    SparsePoly::var(vars, name).expect("target variable")
}

/// Determinant of the first `cols.len()` rows of `[y_ij]` on `cols`, in the
/// given column order.
fn y_minor(vars: &[String], cols: &[usize]) -> SparsePoly {
    let k = cols.len();
    let mut total = SparsePoly::zero(vars);
    for (perm, sign) in permutations(k) {
        let mut term = SparsePoly::constant(vars, Rat::from_int(sign));
        for (r, &c) in perm.iter().enumerate() {
            term = term.mul(&var(vars, &pair_label("y", r + 1, cols[c])));
        }
        total = total.add(&term);
    }
    total
}

fn permutations(k: usize) -> Vec<(Vec<usize>, i64)> {
    if k == 0 {
        return vec![(Vec::new(), 1)];
    }
    let mut out = Vec::new();
    for (p, s) in permutations(k - 1) {
        // insert k-1 at each position; moving it left past m entries flips sign m times
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            let flips = (p.len() - pos) as i64;
            out.push((q, if flips % 2 == 0 { s } else { -s }));
        }
    }
    out
}

fn t_monomial(vars: &[String], a: &WeightVec, idx: &[usize]) -> SparsePoly {
    let mut e = vec![0; vars.len()];
    for &j in idx {
        e[j] += a.get(j) as i32;
    }
    SparsePoly::monomial(vars, e, Rat::one())
}

/// `x_j -> t_j^{-1}`, `P_tau -> det y(tau) t^{a_tau}` and
/// `P_{0,tau} -> sum_j det y(j, tau) t_0^{a_0} t^{a_tau}`, the minor taking
/// column `j` first and then `tau` in increasing order.
pub fn psi_image(a: &WeightVec, sym: &FlagSymbol) -> Result<SparsePoly> {
    let n = a.n();
    let vars = psi_target_vars(n);
    let check = |tau: &[usize]| -> Result<()> {
        if tau.iter().any(|&t| t == 0 || t > n) || tau.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidSubset(format!(
                "{tau:?} is not an increasing subset of 1..={n}"
            )));
        }
        Ok(())
    };
    match sym {
        GZSymbol::X(j) => {
            if *j > n {
                return Err(Error::IndexOutOfRange {
                    index: *j,
                    len: n + 1,
                });
            }
            let mut e = vec![0; vars.len()];
            e[*j] = -1;
            Ok(SparsePoly::monomial(&vars, e, Rat::one()))
        }
        GZSymbol::P(tau) => {
            check(tau)?;
            if tau.is_empty() || tau.len() > n - 1 {
                return Err(Error::InvalidSubset(format!(
                    "P_tau needs 1 <= |tau| <= {}",
                    n - 1
                )));
            }
            Ok(y_minor(&vars, tau).mul(&t_monomial(&vars, a, tau)))
        }
        GZSymbol::P0(tau) => {
            check(tau)?;
            if tau.len() + 2 > n {
                return Err(Error::InvalidSubset(format!(
                    "P_0,tau needs |tau| <= {}",
                    n - 2
                )));
            }
            let mut sum = SparsePoly::zero(&vars);
            for j in (1..=n).filter(|j| !tau.contains(j)) {
                let mut cols = vec![j];
                cols.extend(tau);
                sum = sum.add(&y_minor(&vars, &cols));
            }
            let mut idx = vec![0];
            idx.extend(tau);
            Ok(sum.mul(&t_monomial(&vars, a, &idx)))
        }
    }
}

/// Images of every flag generator.
fn psi_images(a: &WeightVec) -> Result<HashMap<String, SparsePoly>> {
    flag_symbols(a.n())
        .iter()
        .map(|s| Ok((s.label(), psi_image(a, s)?)))
        .collect()
}

/// Applies the map to a polynomial in the flag generators.
pub fn psi_apply(a: &WeightVec, p: &SparsePoly) -> Result<SparsePoly> {
    p.substitute(&psi_images(a)?, &psi_target_vars(a.n()))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationCheck {
    pub kind: String,
    pub relation: SparsePoly,
    pub residue: SparsePoly,
    pub vanishes: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagReport {
    pub n: usize,
    pub a: WeightVec,
    pub relations: Vec<RelationCheck>,
    pub all_vanish: bool,
}

/// Symbol with sign for a minor on a column sequence over `0..=n`, where
/// column 0 stands for `P_{0,.}`; `None` when a column repeats.
fn minor_symbol(cols: &[usize]) -> Option<(FlagSymbol, i64)> {
    let mut sorted = cols.to_vec();
    let mut sign = 1;
    for i in 0..sorted.len() {
        for j in 0..sorted.len() - 1 - i {
            if sorted[j] > sorted[j + 1] {
                sorted.swap(j, j + 1);
                sign = -sign;
            } else if sorted[j] == sorted[j + 1] {
                return None;
            }
        }
    }
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    let sym = if sorted.first() == Some(&0) {
        GZSymbol::P0(sorted[1..].to_vec())
    } else {
        GZSymbol::P(sorted)
    };
    Some((sym, sign))
}

fn subsets_of(set: &[usize], k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    if set.len() < k {
        return Vec::new();
    }
    let mut out = Vec::new();
    for (i, &x) in set.iter().enumerate() {
        for mut rest in subsets_of(&set[i + 1..], k - 1) {
            rest.insert(0, x);
            out.push(rest);
        }
    }
    out
}

/// Signs `s_j` making `sum_j s_j x_j P_{j tau}` vanish at unit weights,
/// found from the kernel of the coefficient matrix of the images.
fn calibrate_incidence(n: usize, tau: &[usize]) -> Result<Vec<(usize, i64)>> {
    let ones = WeightVec::new(vec![1; n + 1])?;
    let js: Vec<usize> = (0..=n).filter(|j| !tau.contains(j)).collect();
    let mut images = Vec::with_capacity(js.len());
    for &j in &js {
        let mut cols = vec![j];
        cols.extend(tau);
        let (sym, sign) = minor_symbol(&cols).expect("j not in tau");
        let img = psi_image(&ones, &GZSymbol::X(j))?.mul(&psi_image(&ones, &sym)?);
        images.push(img.scale(&Rat::from_int(sign)));
    }
    let monomials: BTreeSet<Vec<i32>> = images
        .iter()
        .flat_map(|p| p.terms().map(|(e, _)| e.clone()))
        .collect();
    let rows: Vec<Vec<Rat>> = monomials
        .iter()
        .map(|m| {
            images
                .iter()
                .map(|p| {
                    p.terms()
                        .find(|(e, _)| *e == m)
                        .map_or_else(Rat::zero, |(_, c)| c.clone())
                })
                .collect()
        })
        .collect();
    let kernel = QMatrix::from_rows_with_cols(rows, js.len())?.nullspace();
    if kernel.len() != 1 {
        return Err(Error::VerificationFailed(format!(
            "incidence calibration for tau = {tau:?} has a {}-dimensional kernel",
            kernel.len()
        )));
    }
    let v = &kernel[0];
    let scale = v[0].recip();
    let mut out = Vec::with_capacity(js.len());
    for (&j, c) in js.iter().zip(v) {
        let s = c * &scale;
        let Some(s) = s.to_i64().filter(|s| s.abs() == 1) else {
            return Err(Error::VerificationFailed(format!(
                "calibrated sign {s} is not ±1"
            )));
        };
        let mut cols = vec![j];
        cols.extend(tau);
        let (_, sign) = minor_symbol(&cols).expect("j not in tau");
        out.push((j, s * sign));
    }
    Ok(out)
}

/// The calibrated incidence relation `sum_{j not in tau} ±x_j^{a_j} P_{j tau}`.
pub fn incidence_relation(a: &WeightVec, tau: &[usize]) -> Result<SparsePoly> {
    let n = a.n();
    let vars = flag_variables(n);
    let mut rel = SparsePoly::zero(&vars);
    for (j, s) in calibrate_incidence(n, tau)? {
        let mut cols = vec![j];
        cols.extend(tau);
        let (sym, _) = minor_symbol(&cols).expect("j not in tau");
        let mut e = vec![0; vars.len()];
        e[j] = a.get(j) as i32;
        let xp = SparsePoly::monomial(&vars, e, Rat::from_int(s));
        rel = rel.add(&xp.mul(&var(&vars, &sym.label())));
    }
    Ok(rel)
}

/// Quadratic exchange relations
/// `sum_k (-1)^k P_{I - i_k} P_{i_k J}` for `|I| = p + 1`, `|J| = q - 1` and
/// `1 <= q <= p <= n - 1`, with trivial and repeated ones removed.
pub fn exchange_relations(n: usize) -> Vec<SparsePoly> {
    let vars = flag_variables(n);
    let all: Vec<usize> = (0..=n).collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for p in 1..n {
        for q in 1..=p {
            for big_i in subsets_of(&all, p + 1) {
                for big_j in subsets_of(&all, q - 1) {
                    let mut rel = SparsePoly::zero(&vars);
                    for (k, &ik) in big_i.iter().enumerate() {
                        let rest: Vec<usize> = big_i.iter().copied().filter(|&x| x != ik).collect();
                        let mut second = vec![ik];
                        second.extend(&big_j);
                        let (Some((s1, e1)), Some((s2, e2))) =
                            (minor_symbol(&rest), minor_symbol(&second))
                        else {
                            continue;
                        };
                        let sign = if k % 2 == 0 { 1 } else { -1 } * e1 * e2;
                        let term = var(&vars, &s1.label())
                            .mul(&var(&vars, &s2.label()))
                            .scale(&Rat::from_int(sign));
                        rel = rel.add(&term);
                    }
                    if rel.is_zero() {
                        continue;
                    }
                    let key = rel.to_string();
                    let neg_key = rel.neg().to_string();
                    if seen.contains(&key) || seen.contains(&neg_key) {
                        continue;
                    }
                    seen.insert(key);
                    out.push(rel);
                }
            }
        }
    }
    out
}

/// Evaluates every incidence and exchange relation under the map and
/// reports the residues.
pub fn verify_flag_relations(a: &WeightVec) -> Result<FlagReport> {
    let n = a.n();
    if n > 4 {
        return Err(Error::Precondition(format!("n = {n} exceeds 4")));
    }
    let images = psi_images(a)?;
    let target = psi_target_vars(n);
    let mut relations = Vec::new();
    let all: Vec<usize> = (1..=n).collect();
    for size in 0..=n.saturating_sub(2) {
        for tau in subsets_of(&all, size) {
            let rel = incidence_relation(a, &tau)?;
            let residue = rel.substitute(&images, &target)?;
            relations.push(RelationCheck {
                kind: "incidence".into(),
                vanishes: residue.is_zero(),
                relation: rel,
                residue,
            });
        }
    }
    for rel in exchange_relations(n) {
        let residue = rel.substitute(&images, &target)?;
        relations.push(RelationCheck {
            kind: "exchange".into(),
            vanishes: residue.is_zero(),
            relation: rel,
            residue,
        });
    }
    let all_vanish = relations.iter().all(|r| r.vanishes);
    Ok(FlagReport {
        n,
        a: a.clone(),
        relations,
        all_vanish,
    })
}
