//! Newton–Okounkov matrices, global bodies, divisor polytopes and their
//! images.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::bundle::BundlePair;
use crate::error::{Error, Result};
use crate::exactmath::{feasible_point, indexed_names, lp_is_extreme, solve_linear, QMatrix, Rat};
use crate::matroid::{matroid_of, Flat};

/// Ambient dimension above which cone facets are not enumerated.
pub const HREP_DIM_CAP: usize = 8;
/// Largest number of generator subsets tried during facet enumeration.
pub const FACET_SUBSET_CAP: usize = 500_000;

/// Indicator rows of a maximal flag, top flat first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlagMatrix {
    /// `F_1 ⊂ … ⊂ F_r`, bottom flat first.
    pub flats: Vec<Flat>,
    #[serde(rename = "E_K")]
    pub e: QMatrix,
}

/// Closes each spanning set in the matroid of `L` and builds the indicator
/// matrix. The ground set may be omitted as the last flat.
pub fn flag_matrix(p: &BundlePair, spans: &[Vec<usize>]) -> Result<FlagMatrix> {
    let m = p.vars.len();
    if let Some(&e) = spans.iter().flatten().find(|&&e| e >= m) {
        return Err(Error::IndexOutOfRange { index: e, len: m });
    }
    let flats = matroid_of(&p.l).flag_from_spans(spans)?;
    let rows: Vec<Vec<Rat>> = flats
        .iter()
        .rev()
        .map(|f| {
            (0..m)
                .map(|j| {
                    if f.contains(&j) {
                        Rat::one()
                    } else {
                        Rat::zero()
                    }
                })
                .collect()
        })
        .collect();
    let e = QMatrix::from_rows_with_cols(rows, m)?;
    Ok(FlagMatrix { flats, e })
}

/// `[D -I; E_K 0]`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NokMatrix {
    #[serde(rename = "M")]
    pub m: QMatrix,
    pub rays: usize,
    pub columns: usize,
    pub flag_rows: usize,
}

#[allow(non_snake_case)]
pub fn build_M(p: &BundlePair, e: &FlagMatrix) -> Result<NokMatrix> {
    let (rays, cols) = (p.d.rows(), p.d.cols());
    if e.e.cols() != cols {
        return Err(Error::DimensionMismatch(format!(
            "flag matrix has {} columns, diagram has {cols}",
            e.e.cols()
        )));
    }
    let minus_i = {
        let mut t = QMatrix::zeros(rays, rays);
        for i in 0..rays {
            t.set(i, i, Rat::from_int(-1));
        }
        t
    };
    let top = p.d.hstack(&minus_i)?;
    let bottom = e.e.hstack(&QMatrix::zeros(e.e.rows(), rays))?;
    Ok(NokMatrix {
        m: top.vstack(&bottom)?,
        rays,
        columns: cols,
        flag_rows: e.e.rows(),
    })
}

/// Facet description `E u = 0`, `H u >= 0` with primitive integer rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConeHRep {
    pub equations: Vec<Vec<Rat>>,
    pub inequalities: Vec<Vec<Rat>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GlobalBody {
    pub generators: Vec<Vec<Rat>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hrep: Option<ConeHRep>,
}

/// The cone over the columns of `M` (repeated columns listed once), with
/// facets when `with_hrep` is set.
pub fn global_body(m: &QMatrix, with_hrep: bool) -> Result<GlobalBody> {
    let mut generators: Vec<Vec<Rat>> = Vec::new();
    for c in 0..m.cols() {
        let col = m.column(c);
        if !generators.contains(&col) {
            generators.push(col);
        }
    }
    let hrep = if with_hrep {
        if m.rows() > HREP_DIM_CAP {
            return Err(Error::ResourceCap(format!(
                "facets requested in dimension {} (cap {HREP_DIM_CAP})",
                m.rows()
            )));
        }
        Some(cone_hrep(&generators, m.rows())?)
    } else {
        None
    };
    Ok(GlobalBody { generators, hrep })
}

/// Scales a nonzero rational vector to a primitive integer vector with the
/// same direction.
pub fn primitive(v: &[Rat]) -> Vec<Rat> {
    let l = v.iter().fold(BigInt::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    let g = ints.iter().fold(BigInt::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|x| Rat::from_bigint(x / &g)).collect()
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Facets by brute force: every hyperplane of the linear span through a
/// codimension-one set of generators that has all generators on one side.
pub fn cone_hrep(generators: &[Vec<Rat>], dim: usize) -> Result<ConeHRep> {
    let g = QMatrix::from_rows_with_cols(generators.to_vec(), dim)?;
    let equations: Vec<Vec<Rat>> = g.nullspace().iter().map(|v| primitive(v)).collect();
    let k = dim - equations.len();
    let mut inequalities = BTreeSet::new();
    if k == 0 {
        return Ok(ConeHRep {
            equations,
            inequalities: Vec::new(),
        });
    }
    let mut tried = 0usize;
    let mut subset = Vec::new();
    // subsets of size k-1 in lexicographic order
    let size = k - 1;
    let n = generators.len();
    if size > n {
        return Ok(ConeHRep {
            equations,
            inequalities: Vec::new(),
        });
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        tried += 1;
        if tried > FACET_SUBSET_CAP {
            return Err(Error::ResourceCap(format!(
                "more than {FACET_SUBSET_CAP} facet candidates"
            )));
        }
        subset.clear();
        subset.extend(idx.iter().map(|&i| generators[i].clone()));
        subset.extend(equations.iter().cloned());
        let normals = QMatrix::from_rows_with_cols(subset.clone(), dim)?.nullspace();
        if normals.len() == 1 {
            let h = &normals[0];
            let signs: Vec<Rat> = generators.iter().map(|x| dot(h, x)).collect();
            let pos = signs.iter().any(Rat::is_positive);
            let neg = signs.iter().any(Rat::is_negative);
            if pos != neg {
                let h = if neg {
                    h.iter().map(|x| -x).collect()
                } else {
                    h.clone()
                };
                inequalities.insert(primitive(&h));
            }
        }
        // next combination
        let mut i = size;
        loop {
            if i == 0 {
                let mut ineq: Vec<Vec<Rat>> = inequalities.into_iter().collect();
                ineq.sort();
                return Ok(ConeHRep {
                    equations,
                    inequalities: ineq,
                });
            }
            i -= 1;
            if idx[i] < n - size + i {
                idx[i] += 1;
                for j in i + 1..size {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

/// `{u >= 0 : A u = b}` over named coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Polytope {
    pub variables: Vec<String>,
    #[serde(rename = "A")]
    pub a: QMatrix,
    pub b: Vec<Rat>,
}

impl Polytope {
    pub fn contains(&self, u: &[Rat]) -> bool {
        u.len() == self.a.cols()
            && u.iter().all(|x| !x.is_negative())
            && self.a.mul_vec(u).is_ok_and(|v| v == self.b)
    }

    /// No nonzero `d >= 0` with `A d = 0`.
    pub fn is_bounded(&self) -> Result<bool> {
        let ones = QMatrix::from_rows(vec![vec![Rat::one(); self.a.cols()]])?;
        let a = self.a.vstack(&ones)?;
        let mut b = vec![Rat::zero(); self.a.rows()];
        b.push(Rat::one());
        Ok(feasible_point(&a, &b)?.is_none())
    }
}

/// Coordinates `y_j` (the bundle's variables) followed by `x_0..x_{R-1}`,
/// cut out by `Σ y_j = β` and `Σ d_j y_j - Σ x_i = α`.
pub fn divisor_polytope(p: &BundlePair, alpha: i64, beta: i64) -> Polytope {
    let m = p.vars.len();
    let rays = p.rays();
    let mut variables = p.vars.clone();
    variables.extend(indexed_names("x", rays));
    let mut first = vec![Rat::one(); m];
    first.extend(vec![Rat::zero(); rays]);
    let mut second: Vec<Rat> = p
        .column_degrees()
        .iter()
        .map(|d| Rat::from_int(d.alpha))
        .collect();
    second.extend(vec![Rat::from_int(-1); rays]);
    let a = QMatrix::from_rows(vec![first, second]).expect("two rows of equal length");
    Polytope {
        variables,
        a,
        b: vec![Rat::from_int(beta), Rat::from_int(alpha)],
    }
}

fn subsets_upto(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    let mut frontier = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        for s in &frontier {
            let start = s.last().map_or(0, |&l: &usize| l + 1);
            for e in start..n {
                let mut t = s.clone();
                t.push(e);
                next.push(t);
            }
        }
        out.extend(next.iter().cloned());
        frontier = next;
    }
    out
}

/// Basic feasible solutions, sorted.
pub fn vertices(p: &Polytope) -> Result<Vec<Vec<Rat>>> {
    let k = p.a.rows();
    if k > 3 {
        return Err(Error::Precondition(format!(
            "{k} equations, at most 3 supported"
        )));
    }
    let n = p.a.cols();
    let mut out = BTreeSet::new();
    for s in subsets_upto(n, k) {
        let sub = p.a.select_columns(&s);
        if sub.rank() != s.len() {
            continue;
        }
        let Some(sol) = solve_linear(&sub, &p.b)? else {
            continue;
        };
        if sol.iter().any(Rat::is_negative) {
            continue;
        }
        let mut u = vec![Rat::zero(); n];
        for (&j, x) in s.iter().zip(sol) {
            u[j] = x;
        }
        out.insert(u);
    }
    Ok(out.into_iter().collect())
}

/// Extreme points among `points`, duplicates removed, sorted.
pub fn extreme_points(points: &[Vec<Rat>]) -> Result<Vec<Vec<Rat>>> {
    let distinct: Vec<Vec<Rat>> = points
        .iter()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut out = Vec::new();
    for i in 0..distinct.len() {
        if lp_is_extreme(&distinct, i)? {
            out.push(distinct[i].clone());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NokBody {
    pub matrix: NokMatrix,
    pub polytope: Polytope,
    pub polytope_vertices: Vec<Vec<Rat>>,
    pub vertices: Vec<Vec<Rat>>,
}

/// `M ∘ P_{α,β}` as the extreme points of the image of the vertices of
/// `P_{α,β}`.
pub fn nok_divisor_body(
    p: &BundlePair,
    flag: &FlagMatrix,
    alpha: i64,
    beta: i64,
) -> Result<NokBody> {
    let matrix = build_M(p, flag)?;
    let polytope = divisor_polytope(p, alpha, beta);
    if !polytope.is_bounded()? {
        return Err(Error::Unbounded);
    }
    let polytope_vertices = vertices(&polytope)?;
    let images: Vec<Vec<Rat>> = polytope_vertices
        .iter()
        .map(|u| matrix.m.mul_vec(u))
        .collect::<Result<_>>()?;
    let vertices = extreme_points(&images)?;
    Ok(NokBody {
        matrix,
        polytope,
        polytope_vertices,
        vertices,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Phi,
    Section,
}

/// `φ(v, m)_j = v_j + Σ_i m_i D_ij` and `s(v) = (v, 0)`.
pub fn phi_and_section(p: &BundlePair, point: &[Rat], direction: Direction) -> Result<Vec<Rat>> {
    let (rays, cols) = (p.rays(), p.d.cols());
    match direction {
        Direction::Phi => {
            if point.len() != cols + rays {
                return Err(Error::DimensionMismatch(format!(
                    "φ takes {} coordinates, got {}",
                    cols + rays,
                    point.len()
                )));
            }
            let shift = p.d.transpose().mul_vec(&point[cols..])?;
            Ok(point[..cols]
                .iter()
                .zip(shift)
                .map(|(v, s)| v + s)
                .collect())
        }
        Direction::Section => {
            if point.len() != cols {
                return Err(Error::DimensionMismatch(format!(
                    "s takes {cols} coordinates, got {}",
                    point.len()
                )));
            }
            let mut out = point.to_vec();
            out.extend(vec![Rat::zero(); rays]);
            Ok(out)
        }
    }
}
