//! Classifying pairs `(L, D)` for the irreducible bundles on projective space.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exactmath::{QMatrix, Rat};
use crate::matroid::LinearIdeal;

/// Positive weights `a_0..a_n` with `n >= 2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct WeightVec(Vec<i64>);

impl WeightVec {
    pub fn new(a: Vec<i64>) -> Result<Self> {
        if a.len() < 3 || a.iter().any(|&x| x <= 0) {
            let shown: Vec<String> = a.iter().map(i64::to_string).collect();
            return Err(Error::InvalidWeights(shown.join(",")));
        }
        Ok(WeightVec(a))
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// The dimension `n` of the projective space; there are `n + 1` weights.
    pub fn n(&self) -> usize {
        self.0.len() - 1
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl std::str::FromStr for WeightVec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: std::result::Result<Vec<i64>, _> =
            s.split(',').map(|p| p.trim().parse::<i64>()).collect();
        match parts {
            Ok(v) => WeightVec::new(v),
            Err(_) => Err(Error::InvalidWeights(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Primal,
    Dual,
    /// A pair supplied directly rather than built from weights.
    Custom,
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "primal" => Ok(Variant::Primal),
            "dual" => Ok(Variant::Dual),
            other => Err(Error::Parse(format!("unknown variant {other:?}"))),
        }
    }
}

/// A class `(alpha, beta)` in `CL(P^n) x Z`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ClassDegree {
    pub alpha: i64,
    pub beta: i64,
}

impl ClassDegree {
    pub const RAY: ClassDegree = ClassDegree { alpha: -1, beta: 0 };

    pub fn new(alpha: i64, beta: i64) -> Self {
        ClassDegree { alpha, beta }
    }
}

/// Label for an index pair, e.g. `z01`; indices of two or more digits are
/// separated by an underscore (`z3_10`).
pub fn pair_label(prefix: &str, i: usize, j: usize) -> String {
    if i >= 10 || j >= 10 {
        format!("{prefix}{i}_{j}")
    } else {
        format!("{prefix}{i}{j}")
    }
}

/// All pairs `i < j` of `0..m` in lexicographic order.
pub fn lex_pairs(m: usize) -> Vec<(usize, usize)> {
    (0..m)
        .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BundlePair {
    pub variant: Variant,
    pub vars: Vec<String>,
    #[serde(rename = "L_generators")]
    pub l: LinearIdeal,
    #[serde(rename = "D")]
    pub d: QMatrix,
}

impl BundlePair {
    /// A pair from explicit data; the diagram must be integral with one
    /// column per variable.
    pub fn custom(l: LinearIdeal, d: QMatrix) -> Result<Self> {
        if d.cols() != l.vars().len() {
            return Err(Error::DimensionMismatch(format!(
                "diagram has {} columns for {} variables",
                d.cols(),
                l.vars().len()
            )));
        }
        if d.entries().iter().any(|v| !v.is_integer()) {
            return Err(Error::Precondition(
                "diagram entries must be integers".into(),
            ));
        }
        Ok(BundlePair {
            variant: Variant::Custom,
            vars: l.vars().to_vec(),
            l,
            d,
        })
    }

    /// Number of rays (rows of the diagram).
    pub fn rays(&self) -> usize {
        self.d.rows()
    }

    /// Column degrees `(d_j, 1)`, where `d_j` is the column sum of `D`.
    pub fn column_degrees(&self) -> Vec<ClassDegree> {
        (0..self.d.cols())
            .map(|j| {
                let s: Rat = self.d.column(j).iter().sum();
                ClassDegree::new(s.to_i64().expect("integral diagram"), 1)
            })
            .collect()
    }

    /// The shift of each row needed to make its minimum zero.
    pub fn row_shifts(&self) -> Vec<Rat> {
        (0..self.d.rows())
            .map(|r| {
                -self
                    .d
                    .row(r)
                    .iter()
                    .min()
                    .cloned()
                    .unwrap_or_else(Rat::zero)
            })
            .collect()
    }

    /// Checks that every row of `D` is a tropical point of `L`.
    pub fn check_tropical_rows(&self) -> Result<()> {
        for r in 0..self.d.rows() {
            let w = self.d.row(r);
            for g in self.l.generator_rows() {
                let weights: Vec<&Rat> = g
                    .iter()
                    .zip(w)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(_, x)| x)
                    .collect();
                let Some(min) = weights.iter().min() else {
                    continue;
                };
                if weights.iter().filter(|x| *x == min).count() < 2 {
                    return Err(Error::TropicalViolation(format!(
                        "row {r} has a unique minimum on a generator of L"
                    )));
                }
            }
        }
        Ok(())
    }
}

pub fn build_pair(a: &WeightVec, variant: Variant) -> Result<BundlePair> {
    let n = a.n();
    match variant {
        Variant::Primal => {
            let vars: Vec<String> = (0..=n).map(|i| format!("y{i}")).collect();
            let l = LinearIdeal::from_rows(&vars, vec![vec![Rat::one(); n + 1]])?;
            let mut d = QMatrix::zeros(n + 1, n + 1);
            for i in 0..=n {
                d.set(i, i, Rat::from_int(a.get(i)));
            }
            Ok(BundlePair {
                variant,
                vars,
                l,
                d,
            })
        }
        Variant::Dual => {
            let pairs = lex_pairs(n + 1);
            let vars: Vec<String> = pairs.iter().map(|&(i, j)| pair_label("z", i, j)).collect();
            let col = |i: usize, j: usize| pairs.iter().position(|&p| p == (i, j)).expect("pair");
            let mut gens = Vec::new();
            for i in 0..=n {
                for j in i + 1..=n {
                    for k in j + 1..=n {
                        let mut g = vec![Rat::zero(); pairs.len()];
                        g[col(i, k)] = Rat::one();
                        g[col(i, j)] = Rat::from_int(-1);
                        g[col(j, k)] = Rat::from_int(-1);
                        gens.push(g);
                    }
                }
            }
            let l = LinearIdeal::from_rows(&vars, gens)?;
            let mut d = QMatrix::zeros(n + 1, pairs.len());
            for l_idx in 0..=n {
                for (c, &(j, k)) in pairs.iter().enumerate() {
                    if l_idx == j || l_idx == k {
                        d.set(l_idx, c, Rat::from_int(-a.get(l_idx)));
                    }
                }
            }
            Ok(BundlePair {
                variant,
                vars,
                l,
                d,
            })
        }
        Variant::Custom => Err(Error::Precondition(
            "custom pairs are built with BundlePair::custom".into(),
        )),
    }
}

/// Shifts each row of `D` so that its minimum is zero.
pub fn nonnegative_form(p: &BundlePair) -> BundlePair {
    let shifts = p.row_shifts();
    let mut d = p.d.clone();
    for (r, s) in shifts.iter().enumerate() {
        for c in 0..d.cols() {
            let v = d.get(r, c) + s;
            d.set(r, c, v);
        }
    }
    BundlePair { d, ..p.clone() }
}

/// Degrees of the Cox generators: the ray variables followed by one
/// variable per column.
pub fn column_degrees_of(p: &BundlePair) -> Vec<ClassDegree> {
    let mut out = vec![ClassDegree::RAY; p.rays()];
    out.extend(p.column_degrees());
    out
}
