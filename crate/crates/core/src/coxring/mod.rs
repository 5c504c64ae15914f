//! Cox ring presentations, the substitution map from the Grassmannian
//! Plücker algebra, and the flag-bundle map with its Gel'fand–Zetlin data.

pub mod flag;
pub mod gz;

use std::collections::HashMap;

use serde::Serialize;

use crate::bundle::{build_pair, column_degrees_of, lex_pairs, nonnegative_form, pair_label};
use crate::bundle::{ClassDegree, Variant, WeightVec};
use crate::error::{Error, Result};
use crate::exactmath::{indexed_names, Rat, SparsePoly};

pub use flag::{psi_image, verify_flag_relations, FlagReport, FlagSymbol, RelationCheck};
pub use gz::{ext_gz_generator, gz_generator, ExtGZElement, GZPattern};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoxPresentation {
    pub variant: Variant,
    pub variables: Vec<String>,
    pub generators: Vec<SparsePoly>,
    pub degrees: Vec<ClassDegree>,
}

impl CoxPresentation {
    pub fn degree_of(&self, var: &str) -> Option<ClassDegree> {
        self.variables
            .iter()
            .position(|v| v == var)
            .map(|i| self.degrees[i])
    }

    /// Class degree of every term of `p`, or `None` if they differ.
    pub fn homogeneous_degree(&self, p: &SparsePoly) -> Option<ClassDegree> {
        let q = p.align_to(&self.variables).ok()?;
        let mut seen: Option<ClassDegree> = None;
        for (e, _) in q.terms() {
            let mut d = ClassDegree::new(0, 0);
            for (x, deg) in e.iter().zip(&self.degrees) {
                d.alpha += *x as i64 * deg.alpha;
                d.beta += *x as i64 * deg.beta;
            }
            match seen {
                None => seen = Some(d),
                Some(s) if s != d => return None,
                _ => {}
            }
        }
        seen
    }
}

/// Variables `x0..xn` followed by `Y0..Yn` (primal) or `Z01, Z02, ...` (dual).
pub fn cox_variables(n: usize, variant: Variant) -> Vec<String> {
    let mut vars = indexed_names("x", n + 1);
    match variant {
        Variant::Dual => vars.extend(lex_pairs(n + 1).iter().map(|&(i, j)| pair_label("Z", i, j))),
        _ => vars.extend(indexed_names("Y", n + 1)),
    }
    vars
}

fn mono(vars: &[String], factors: &[(&str, i32)], c: i64) -> SparsePoly {
    let mut e = vec![0; vars.len()];
    for (name, k) in factors {
        let i = vars.iter().position(|v| v == name).expect("known variable");
        e[i] += k;
    }
    SparsePoly::monomial(vars, e, Rat::from_int(c))
}

fn xname(i: usize) -> String {
    format!("x{i}")
}

fn zname(i: usize, j: usize) -> String {
    pair_label("Z", i, j)
}

pub fn cox_ideal(a: &WeightVec, variant: Variant) -> Result<CoxPresentation> {
    let n = a.n();
    let vars = cox_variables(n, variant);
    let pair = nonnegative_form(&build_pair(a, variant)?);
    let degrees = column_degrees_of(&pair);
    let exp = |i: usize| a.get(i) as i32;
    let mut gens = Vec::new();
    match variant {
        Variant::Primal => {
            let mut g = SparsePoly::zero(&vars);
            for j in 0..=n {
                g = g.add(&mono(
                    &vars,
                    &[(&xname(j), exp(j)), (&format!("Y{j}"), 1)],
                    1,
                ));
            }
            gens.push(g);
        }
        Variant::Dual => {
            for i in 0..=n {
                for j in i + 1..=n {
                    for k in j + 1..=n {
                        gens.push(dual_three_term(&vars, a, i, j, k));
                    }
                }
            }
            for q in quadruples(n + 1) {
                let [i, j, k, l] = q;
                let t = |p: usize, q: usize, r: usize, s: usize, c: i64| {
                    mono(&vars, &[(&zname(p, q), 1), (&zname(r, s), 1)], c)
                };
                gens.push(
                    t(i, j, k, l, 1)
                        .add(&t(i, k, j, l, -1))
                        .add(&t(i, l, j, k, 1)),
                );
            }
        }
        Variant::Custom => {
            return Err(Error::Precondition(
                "Cox ideals are built for primal or dual pairs".into(),
            ))
        }
    }
    Ok(CoxPresentation {
        variant,
        variables: vars,
        generators: gens,
        degrees,
    })
}

/// `x_j^{a_j} Z_ik - x_k^{a_k} Z_ij - x_i^{a_i} Z_jk` for `i < j < k`.
fn dual_three_term(vars: &[String], a: &WeightVec, i: usize, j: usize, k: usize) -> SparsePoly {
    let e = |t: usize| a.get(t) as i32;
    mono(vars, &[(&xname(j), e(j)), (&zname(i, k), 1)], 1)
        .add(&mono(vars, &[(&xname(k), e(k)), (&zname(i, j), 1)], -1))
        .add(&mono(vars, &[(&xname(i), e(i)), (&zname(j, k), 1)], -1))
}

/// All increasing 4-tuples from `0..m`.
pub fn quadruples(m: usize) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for k in j + 1..m {
                for l in k + 1..m {
                    out.push([i, j, k, l]);
                }
            }
        }
    }
    out
}

/// Plücker coordinates `P01, P02, ...` of `Gr(2, n+2)`.
pub fn plucker_variables(n: usize) -> Vec<String> {
    lex_pairs(n + 2)
        .iter()
        .map(|&(i, j)| pair_label("P", i, j))
        .collect()
}

/// Generators `P_ij P_kl - P_ik P_jl + P_il P_jk` of the Plücker ideal of
/// `Gr(2, n+2)`, indexed by their quadruple.
pub fn plucker_generators(n: usize) -> Vec<([usize; 4], SparsePoly)> {
    let vars = plucker_variables(n);
    quadruples(n + 2)
        .into_iter()
        .map(|[i, j, k, l]| {
            let t = |p: usize, q: usize, r: usize, s: usize, c: i64| {
                mono(
                    &vars,
                    &[(&pair_label("P", p, q), 1), (&pair_label("P", r, s), 1)],
                    c,
                )
            };
            (
                [i, j, k, l],
                t(i, j, k, l, 1)
                    .add(&t(i, k, j, l, -1))
                    .add(&t(i, l, j, k, 1)),
            )
        })
        .collect()
}

/// Substitutes `P_{0,i+1} -> x_i^{a_i}` and `P_{j+1,k+1} -> Z_jk`.
pub fn phi_map(a: &WeightVec, q: &SparsePoly) -> Result<SparsePoly> {
    let n = a.n();
    let target = cox_variables(n, Variant::Dual);
    let mut images = HashMap::new();
    for (i, j) in lex_pairs(n + 2) {
        let img = if i == 0 {
            mono(&target, &[(&xname(j - 1), a.get(j - 1) as i32)], 1)
        } else {
            mono(&target, &[(&zname(i - 1, j - 1), 1)], 1)
        };
        images.insert(pair_label("P", i, j), img);
    }
    q.substitute(&images, &target)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PhiMatch {
    pub quadruple: [usize; 4],
    pub plucker: SparsePoly,
    pub image: SparsePoly,
    pub generator_index: usize,
    /// `1` or `-1`: image = sign * generator.
    pub sign: i64,
}

/// Matches the image of every Plücker generator with a generator of the dual
/// Cox ideal, up to sign, and checks that this is a bijection.
pub fn verify_phi_generators(a: &WeightVec) -> Result<Vec<PhiMatch>> {
    let n = a.n();
    if n > 5 {
        return Err(Error::Precondition(format!("n = {n} exceeds 5")));
    }
    let cox = cox_ideal(a, Variant::Dual)?;
    let mut used = vec![false; cox.generators.len()];
    let mut out = Vec::new();
    for (quad, p) in plucker_generators(n) {
        let image = phi_map(a, &p)?;
        let found = cox.generators.iter().enumerate().find_map(|(gi, g)| {
            if used[gi] {
                None
            } else if image == *g {
                Some((gi, 1))
            } else if image == g.neg() {
                Some((gi, -1))
            } else {
                None
            }
        });
        let Some((gi, sign)) = found else {
            return Err(Error::VerificationFailed(format!(
                "image {image} of {p} is not a generator"
            )));
        };
        used[gi] = true;
        out.push(PhiMatch {
            quadruple: quad,
            plucker: p,
            image,
            generator_index: gi,
            sign,
        });
    }
    if let Some(gi) = used.iter().position(|u| !u) {
        return Err(Error::VerificationFailed(format!(
            "generator {} is not hit",
            cox.generators[gi]
        )));
    }
    Ok(out)
}
