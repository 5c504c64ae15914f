//! Rank-two monoids of divisor classes: the corner monoids `S_p`, the
//! basepoint-free monoid, and Fujita certificates.

use std::collections::HashSet;

use num_integer::Integer;
use rayon::prelude::*;
use serde::Serialize;

use crate::bundle::{build_pair, nonnegative_form, BundlePair, ClassDegree, Variant, WeightVec};
use crate::error::{Error, Result};
use crate::matroid::{facet_initial, is_monomial_bundle, matroid_of};

pub type Vec2 = [i64; 2];

/// Radius of the box scanned for lattice points missing from a monoid.
pub const BOX_RADIUS: i64 = 50;

fn det(u: Vec2, v: Vec2) -> i64 {
    u[0] * v[1] - u[1] * v[0]
}

fn dot(u: Vec2, v: Vec2) -> i64 {
    u[0] * v[0] + u[1] * v[1]
}

fn primitive(v: Vec2) -> Vec2 {
    let g = v[0].gcd(&v[1]);
    if g == 0 {
        v
    } else {
        [v[0] / g, v[1] / g]
    }
}

/// A pointed rational cone in the plane with extreme rays `r1`, `r2`, where
/// `det(r1, r2) >= 0`; the two coincide for a single ray.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Cone2 {
    pub r1: Vec2,
    pub r2: Vec2,
}

impl Cone2 {
    pub fn contains(&self, v: Vec2) -> bool {
        if v == [0, 0] {
            return true;
        }
        if self.r1 == self.r2 {
            return det(self.r1, v) == 0 && dot(self.r1, v) > 0;
        }
        det(self.r1, v) >= 0 && det(v, self.r2) >= 0
    }

    /// The cone over a finite set of vectors, or `None` when it is `{0}`.
    pub fn spanned_by(vs: &[Vec2]) -> Result<Option<Cone2>> {
        let vs: Vec<Vec2> = vs
            .iter()
            .filter(|v| **v != [0, 0])
            .map(|&v| primitive(v))
            .collect();
        if vs.is_empty() {
            return Ok(None);
        }
        let first = vs.iter().find(|&&c| {
            vs.iter()
                .all(|&v| det(c, v) >= 0 && !(det(c, v) == 0 && dot(c, v) < 0))
        });
        let last = vs.iter().find(|&&c| {
            vs.iter()
                .all(|&v| det(v, c) >= 0 && !(det(v, c) == 0 && dot(c, v) < 0))
        });
        match (first, last) {
            (Some(&r1), Some(&r2)) => Ok(Some(Cone2 { r1, r2 })),
            _ => Err(Error::Precondition(
                "vectors do not span a pointed cone".into(),
            )),
        }
    }

    pub fn intersect(&self, other: &Cone2) -> Result<Option<Cone2>> {
        let cands: Vec<Vec2> = [self.r1, self.r2, other.r1, other.r2]
            .into_iter()
            .filter(|&v| self.contains(v) && other.contains(v))
            .collect();
        Cone2::spanned_by(&cands)
    }

    /// Minimal generators of the lattice points of the cone, from `r1` to
    /// `r2`, each consecutive pair of determinant one.
    pub fn hilbert_basis(&self) -> Vec<Vec2> {
        if self.r1 == self.r2 {
            return vec![self.r1];
        }
        let mut out = vec![self.r1];
        let mut cur = self.r1;
        while det(cur, self.r2) > 1 {
            let d = det(cur, self.r2);
            let e = cur[0].extended_gcd(&cur[1]);
            // det(cur, u) = 1
            let s = e.gcd.signum();
            let u = [-e.y * s, e.x * s];
            let t = Integer::div_ceil(&-det(u, self.r2), &d);
            cur = [u[0] + t * cur[0], u[1] + t * cur[1]];
            out.push(cur);
        }
        out.push(self.r2);
        out
    }
}

/// A finitely generated submonoid of `Z^2` lying in a pointed cone.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Monoid2D {
    pub generators: Vec<Vec2>,
    pub cone: Option<Cone2>,
    pub hilbert_basis: Vec<Vec2>,
}

impl Monoid2D {
    pub fn generated_by(generators: Vec<Vec2>) -> Result<Self> {
        let cone = Cone2::spanned_by(&generators)?;
        let hilbert_basis = cone.map(|c| c.hilbert_basis()).unwrap_or_default();
        Ok(Monoid2D {
            generators,
            cone,
            hilbert_basis,
        })
    }

    /// All lattice points of a cone.
    pub fn saturated_cone(cone: Option<Cone2>) -> Self {
        let hilbert_basis = cone.map(|c| c.hilbert_basis()).unwrap_or_default();
        Monoid2D {
            generators: hilbert_basis.clone(),
            cone,
            hilbert_basis,
        }
    }

    /// Exact membership: a nonnegative integer combination of the generators.
    pub fn contains(&self, v: Vec2) -> bool {
        if v == [0, 0] {
            return true;
        }
        let Some(cone) = self.cone else { return false };
        if !cone.contains(v) {
            return false;
        }
        let gens: Vec<Vec2> = self
            .generators
            .iter()
            .copied()
            .filter(|g| *g != [0, 0])
            .collect();
        if let [g, h] = gens[..] {
            let d = det(g, h);
            if d != 0 {
                let (p, q) = (det(v, h), det(g, v));
                return p % d == 0 && q % d == 0 && p / d >= 0 && q / d >= 0;
            }
        }
        // depth-first search bounded by a functional positive on the cone
        let ell = if cone.r1 == cone.r2 {
            cone.r1
        } else {
            let n1 = [-cone.r1[1], cone.r1[0]];
            let n2 = [cone.r2[1], -cone.r2[0]];
            [n1[0] + n2[0], n1[1] + n2[1]]
        };
        let mut seen = HashSet::new();
        let mut stack = vec![v];
        while let Some(w) = stack.pop() {
            if w == [0, 0] {
                return true;
            }
            if !seen.insert(w) || dot(ell, w) <= 0 {
                continue;
            }
            for g in &gens {
                let next = [w[0] - g[0], w[1] - g[1]];
                if cone.contains(next) {
                    stack.push(next);
                }
            }
        }
        false
    }

    /// Every Hilbert basis element of the cone is in the monoid.
    pub fn is_saturated(&self) -> bool {
        self.hilbert_basis.iter().all(|&h| self.contains(h))
    }

    pub fn is_subset_of(&self, other: &Monoid2D) -> bool {
        self.generators.iter().all(|&g| other.contains(g))
    }
}

fn corner(d: i64) -> Monoid2D {
    Monoid2D::generated_by(vec![[-1, 0], [d, 1]]).expect("two independent generators")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SpMonoid {
    pub facet: usize,
    pub element: usize,
    pub degree: ClassDegree,
    pub monoid: Monoid2D,
}

/// One monoid `Z≥0{(-1,0), (d_j,1)}` for every facet and every non-loop `j`
/// of the matroid of the facet's initial ideal.
pub fn sp_monoids(p: &BundlePair) -> Result<Vec<SpMonoid>> {
    if !is_monomial_bundle(p) {
        return Err(Error::NotMonomial(
            "some facet has a non-monomial initial ideal".into(),
        ));
    }
    let degrees = p.column_degrees();
    let per_facet: Vec<Vec<SpMonoid>> = (0..p.rays())
        .into_par_iter()
        .map(|i| {
            let m = matroid_of(&facet_initial(p, i)?);
            Ok(m.hyperplane_complements()?
                .into_iter()
                .map(|(j, _)| SpMonoid {
                    facet: i,
                    element: j,
                    degree: degrees[j],
                    monoid: corner(degrees[j].alpha),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(per_facet.into_iter().flatten().collect())
}

/// An intersection of monoids, with the lattice points of the intersected
/// cone (inside the test box) that some monoid misses.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Intersection {
    pub monoid: Monoid2D,
    pub missing: Vec<Vec2>,
}

impl Intersection {
    pub fn is_saturated(&self) -> bool {
        self.missing.is_empty()
    }
}

pub fn intersect_monoids(parts: &[&Monoid2D]) -> Result<Intersection> {
    let mut cone = parts
        .first()
        .ok_or_else(|| Error::Precondition("nothing to intersect".into()))?
        .cone;
    for m in &parts[1..] {
        cone = match (cone, m.cone) {
            (Some(a), Some(b)) => a.intersect(&b)?,
            _ => None,
        };
    }
    let monoid = Monoid2D::saturated_cone(cone);
    let mut missing = Vec::new();
    for x in -BOX_RADIUS..=BOX_RADIUS {
        for y in -BOX_RADIUS..=BOX_RADIUS {
            let v = [x, y];
            if monoid.cone.map_or(v == [0, 0], |c| c.contains(v))
                && !parts.iter().all(|m| m.contains(v))
            {
                missing.push(v);
            }
        }
    }
    Ok(Intersection { monoid, missing })
}

/// `Bpf(PE)`: the intersection of all corner monoids.
pub fn bpf_monoid(p: &BundlePair) -> Result<Intersection> {
    let sp = sp_monoids(p)?;
    intersect_monoids(&sp.iter().map(|s| &s.monoid).collect::<Vec<_>>())
}

/// The basepoint-free monoid of the split bundle: every column's corner
/// monoid.
pub fn split_bpf(p: &BundlePair) -> Result<Intersection> {
    if p.d.cols() == 0 {
        return Err(Error::Precondition("diagram has no columns".into()));
    }
    let corners: Vec<Monoid2D> = p.column_degrees().iter().map(|d| corner(d.alpha)).collect();
    intersect_monoids(&corners.iter().collect::<Vec<_>>())
}

/// Monoid generated by every Cox generator degree.
pub fn effective_monoid(p: &BundlePair) -> Result<Monoid2D> {
    let mut gens = vec![[-1, 0]];
    for d in p.column_degrees() {
        if !gens.contains(&[d.alpha, d.beta]) {
            gens.push([d.alpha, d.beta]);
        }
    }
    Monoid2D::generated_by(gens)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FujitaCertificate {
    pub bundle: String,
    pub bpf_basis: Vec<Vec2>,
    pub nef_rays: Vec<Vec2>,
    pub split_bpf_basis: Vec<Vec2>,
    /// Cone of the effective monoid, reported as the pseudo-effective cone.
    pub pseudo_effective_rays: Vec<Vec2>,
    pub missing_points: Vec<Vec2>,
    pub saturated: bool,
    pub tidy: bool,
    pub verdict: Verdict,
}

/// Saturation of `Bpf(PE)` and its equality with the split bundle's monoid.
pub fn fujita_certify(a: &[i64], variant: Variant) -> Result<FujitaCertificate> {
    if a.len() < 3 || a.len() > 6 {
        return Err(Error::Precondition(format!(
            "need 2 <= n <= 5, got n = {}",
            a.len() as i64 - 1
        )));
    }
    let w = WeightVec::new(a.to_vec())?;
    let p = nonnegative_form(&build_pair(&w, variant)?);
    let bpf = bpf_monoid(&p)?;
    let split = split_bpf(&p)?;
    let tidy = bpf.monoid.is_subset_of(&split.monoid) && split.monoid.is_subset_of(&bpf.monoid);
    let saturated = bpf.is_saturated();
    let rays = |c: Option<Cone2>| {
        c.map_or(Vec::new(), |c| {
            if c.r1 == c.r2 {
                vec![c.r1]
            } else {
                vec![c.r1, c.r2]
            }
        })
    };
    let name = match variant {
        Variant::Primal => "primal",
        Variant::Dual => "dual",
        Variant::Custom => "custom",
    };
    let list: Vec<String> = a.iter().map(i64::to_string).collect();
    Ok(FujitaCertificate {
        bundle: format!("{name} a=({})", list.join(",")),
        bpf_basis: bpf.monoid.hilbert_basis.clone(),
        nef_rays: rays(bpf.monoid.cone),
        split_bpf_basis: split.monoid.hilbert_basis.clone(),
        pseudo_effective_rays: rays(effective_monoid(&p)?.cone),
        missing_points: bpf.missing.clone(),
        saturated,
        tidy,
        verdict: if saturated && tidy {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    })
}
