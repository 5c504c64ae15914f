//! Trivalent trees, tree semigroups, tropical points of the dual Cox ideal
//! and the well-poised checkers.

pub mod flagtree;
pub mod semigroup;
pub mod tree;

use num_integer::Integer;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::bundle::{Variant, WeightVec};
use crate::coxring::{cox_ideal, cox_variables};
use crate::error::{Error, Result};
use crate::exactmath::{Rat, SparsePoly};

pub use flagtree::{tree_from_flag, FlagTree};
pub use semigroup::{
    semigroup_st, toric_ideal_upto, wellpoised_check, TreeReport, TreeSemigroup, TreeStatus,
};
pub use tree::{enumerate_trees, LabelledTree};

/// Rational weights on named variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TropPoint {
    variables: Vec<String>,
    coords: Vec<Rat>,
}

impl TropPoint {
    pub fn new(variables: Vec<String>, coords: Vec<Rat>) -> Result<Self> {
        if variables.len() != coords.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} variables, {} coordinates",
                variables.len(),
                coords.len()
            )));
        }
        Ok(TropPoint { variables, coords })
    }

    pub fn zero(variables: Vec<String>) -> Self {
        let coords = vec![Rat::zero(); variables.len()];
        TropPoint { variables, coords }
    }

    pub fn variables(&self) -> &[String] {
        &self.variables
    }

    pub fn coords(&self) -> &[Rat] {
        &self.coords
    }

    pub fn get(&self, var: &str) -> Option<&Rat> {
        self.variables
            .iter()
            .position(|v| v == var)
            .map(|i| &self.coords[i])
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Rat::is_zero)
    }

    /// Weights aligned with the variables of `p`.
    fn weights_for(&self, p: &SparsePoly) -> Result<Vec<Rat>> {
        p.vars()
            .iter()
            .map(|v| {
                self.get(v)
                    .cloned()
                    .ok_or_else(|| Error::UnknownVariable(v.clone()))
            })
            .collect()
    }
}

impl Serialize for TropPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(self.variables.len()))?;
        for (v, c) in self.variables.iter().zip(&self.coords) {
            m.serialize_entry(v, c)?;
        }
        m.end()
    }
}

/// The minimal-weight part of each generator.
pub fn initial_forms(gens: &[SparsePoly], rho: &TropPoint) -> Result<Vec<SparsePoly>> {
    gens.iter()
        .map(|g| Ok(g.initial_form(&rho.weights_for(g)?)))
        .collect()
}

/// Whether the minimum term weight of `p` is attained at least twice.
pub fn is_tropical(p: &SparsePoly, rho: &TropPoint) -> Result<bool> {
    let w = rho.weights_for(p)?;
    let mut weights: Vec<Rat> = p
        .terms()
        .map(|(e, _)| SparsePoly::term_weight(e, &w))
        .collect();
    if weights.len() < 2 {
        return Ok(weights.is_empty());
    }
    weights.sort();
    Ok(weights[0] == weights[1])
}

/// Fails with the first generator whose minimum is attained only once.
pub fn check_membership(gens: &[SparsePoly], rho: &TropPoint) -> Result<()> {
    for g in gens {
        if !is_tropical(g, rho)? {
            return Err(Error::TropicalViolation(format!("{g}")));
        }
    }
    Ok(())
}

/// Disjoint supports and coprime exponent pairs.
pub fn wellpoised_hypersurface(p: &SparsePoly) -> bool {
    let exps: Vec<&Vec<i32>> = p.terms().map(|(e, _)| e).collect();
    if exps.len() < 2 {
        return false;
    }
    for (i, u) in exps.iter().enumerate() {
        for v in &exps[i + 1..] {
            if u.iter().zip(v.iter()).any(|(x, y)| *x != 0 && *y != 0) {
                return false;
            }
            let g = u.iter().chain(v.iter()).fold(0i32, |g, &x| g.gcd(&x));
            if g != 1 {
                return false;
            }
        }
    }
    true
}

pub(crate) fn unit_weights(n: usize) -> WeightVec {
    WeightVec::new(vec![1; n + 1]).expect("n >= 2")
}

/// `x_i = -d(0, i+1) / a_i` and `Z_jk = -d(j+1, k+1)`, checked against every
/// generator of the dual Cox ideal. With unit weights this is the tree point
/// itself; for general `a` it is its pullback along `x_i -> a_i x_i`.
pub fn trop_point_from_tree(t: &LabelledTree, a: Option<&WeightVec>) -> Result<TropPoint> {
    let (point, a) = tree_point(t, a)?;
    check_membership(&cox_ideal(&a, Variant::Dual)?.generators, &point)?;
    Ok(point)
}

pub(crate) fn tree_point(
    t: &LabelledTree,
    a: Option<&WeightVec>,
) -> Result<(TropPoint, WeightVec)> {
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
    let mut coords = Vec::new();
    for i in 0..=n {
        coords.push(-t.path_weight(0, i + 1) / Rat::from_int(a.get(i)));
    }
    for j in 0..=n {
        for k in j + 1..=n {
            coords.push(-t.path_weight(j + 1, k + 1));
        }
    }
    Ok((TropPoint::new(cox_variables(n, Variant::Dual), coords)?, a))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hypersurface_examples() {
        let p = SparsePoly::parse("x^2 + y^2", None).unwrap();
        assert!(!wellpoised_hypersurface(&p));
        let p = SparsePoly::parse("x*y + y*z", None).unwrap();
        assert!(!wellpoised_hypersurface(&p));
        let p = SparsePoly::parse("x^2*Y0 + z^3*Y1", None).unwrap();
        assert!(wellpoised_hypersurface(&p));
        let p = SparsePoly::parse("x", None).unwrap();
        assert!(!wellpoised_hypersurface(&p));
    }

    #[test]
    fn zero_point_keeps_generators() {
        let a = WeightVec::new(vec![1, 2, 3, 4]).unwrap();
        let gens = cox_ideal(&a, Variant::Dual).unwrap().generators;
        let rho = TropPoint::zero(cox_variables(3, Variant::Dual));
        assert_eq!(initial_forms(&gens, &rho).unwrap(), gens);
    }
}
