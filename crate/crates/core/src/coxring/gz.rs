//! Gel'fand–Zetlin patterns and the extended generators of the flag semigroup.

use std::fmt;
use std::ops::Add;

use serde::Serialize;

use crate::bundle::WeightVec;
use crate::error::{Error, Result};

/// Triangular array; row `i` (0-based) has `n - i` entries.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct GZPattern {
    pub rows: Vec<Vec<i64>>,
}

impl GZPattern {
    pub fn zero(n: usize) -> Self {
        GZPattern {
            rows: (0..n).map(|i| vec![0; n - i]).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    /// Checks `g[i][j] >= g[i+1][j] >= g[i][j+1]` wherever defined.
    pub fn satisfies_interlacing(&self) -> bool {
        for i in 0..self.rows.len().saturating_sub(1) {
            for j in 0..self.rows[i + 1].len() {
                let (a, b, c) = (self.rows[i][j], self.rows[i + 1][j], self.rows[i][j + 1]);
                if !(a >= b && b >= c) {
                    return false;
                }
            }
        }
        true
    }

    /// Membership in the positive part: the last entry of the top row is 0.
    pub fn is_positive_part(&self) -> bool {
        self.rows
            .first()
            .and_then(|r| r.last())
            .is_none_or(|&v| v == 0)
    }
}

impl Add for &GZPattern {
    type Output = GZPattern;

    fn add(self, other: &GZPattern) -> GZPattern {
        assert_eq!(self.n(), other.n(), "patterns of different size");
        GZPattern {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(r, s)| r.iter().zip(s).map(|(x, y)| x + y).collect())
                .collect(),
        }
    }
}

impl fmt::Display for GZPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .rows
            .iter()
            .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
            .collect();
        write!(f, "{}", rows.join(" / "))
    }
}

fn check_subset(tau: &[usize], n: usize) -> Result<()> {
    if tau.iter().any(|&t| t == 0 || t > n) {
        return Err(Error::InvalidSubset(format!(
            "{tau:?} is not a subset of 1..={n}"
        )));
    }
    let mut s = tau.to_vec();
    s.sort_unstable();
    s.dedup();
    if s.len() != tau.len() {
        return Err(Error::InvalidSubset(format!(
            "{tau:?} has repeated elements"
        )));
    }
    Ok(())
}

/// `|tau ∩ [m]|` for `m = 0..=n`.
pub fn prefix_counts(tau: &[usize], n: usize) -> Vec<usize> {
    (0..=n)
        .map(|m| tau.iter().filter(|&&t| t <= m).count())
        .collect()
}

/// The 0/1 pattern whose row `i` (1-based) starts with `|tau ∩ [n-i+1]|` ones.
pub fn gz_generator(tau: &[usize], n: usize) -> Result<GZPattern> {
    check_subset(tau, n)?;
    if tau.len() == n {
        return Err(Error::InvalidSubset("tau must be a proper subset".into()));
    }
    Ok(pattern_from_counts(&prefix_counts(tau, n), n))
}

fn pattern_from_counts(counts: &[usize], n: usize) -> GZPattern {
    GZPattern {
        rows: (1..=n)
            .map(|i| {
                let len = n + 1 - i;
                let ones = counts[len];
                (0..len).map(|j| i64::from(j < ones)).collect()
            })
            .collect(),
    }
}

fn subset_from_counts(counts: &[usize]) -> Vec<usize> {
    (1..counts.len())
        .filter(|&m| counts[m] > counts[m - 1])
        .collect()
}

/// Subset with prefix counts `max(|tau ∩ [m]|, |eta ∩ [m]|)`.
pub fn gz_join(tau: &[usize], eta: &[usize], n: usize) -> Vec<usize> {
    let (c, d) = (prefix_counts(tau, n), prefix_counts(eta, n));
    subset_from_counts(&c.iter().zip(&d).map(|(x, y)| *x.max(y)).collect::<Vec<_>>())
}

/// Subset with prefix counts `min(|tau ∩ [m]|, |eta ∩ [m]|)`.
pub fn gz_meet(tau: &[usize], eta: &[usize], n: usize) -> Vec<usize> {
    let (c, d) = (prefix_counts(tau, n), prefix_counts(eta, n));
    subset_from_counts(&c.iter().zip(&d).map(|(x, y)| *x.min(y)).collect::<Vec<_>>())
}

/// Generator symbols of the flag Cox ring.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum GZSymbol {
    X(usize),
    P(Vec<usize>),
    P0(Vec<usize>),
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExtGZElement {
    pub pattern: GZPattern,
    pub charge: Vec<i64>,
}

impl Add for &ExtGZElement {
    type Output = ExtGZElement;

    fn add(self, other: &ExtGZElement) -> ExtGZElement {
        ExtGZElement {
            pattern: &self.pattern + &other.pattern,
            charge: self
                .charge
                .iter()
                .zip(&other.charge)
                .map(|(x, y)| x + y)
                .collect(),
        }
    }
}

impl ExtGZElement {
    pub fn scaled(&self, k: i64) -> ExtGZElement {
        ExtGZElement {
            pattern: GZPattern {
                rows: self
                    .pattern
                    .rows
                    .iter()
                    .map(|r| r.iter().map(|v| v * k).collect())
                    .collect(),
            },
            charge: self.charge.iter().map(|v| v * k).collect(),
        }
    }
}

/// Leading exponent data of a generator: `x_j -> (0, -e_j)`,
/// `P_tau -> (g(tau), sum a_j e_j)` and
/// `P_{0,tau} -> (g(tau*), a_0 e_0 + sum a_j e_j)` where `tau*` adds the
/// first element of `[n]` missing from `tau`.
pub fn ext_gz_generator(a: &WeightVec, sym: &GZSymbol) -> Result<ExtGZElement> {
    let n = a.n();
    let mut charge = vec![0; n + 1];
    match sym {
        GZSymbol::X(j) => {
            if *j > n {
                return Err(Error::IndexOutOfRange {
                    index: *j,
                    len: n + 1,
                });
            }
            charge[*j] = -1;
            Ok(ExtGZElement {
                pattern: GZPattern::zero(n),
                charge,
            })
        }
        GZSymbol::P(tau) => {
            let pattern = gz_generator(tau, n)?;
            for &j in tau {
                charge[j] += a.get(j);
            }
            Ok(ExtGZElement { pattern, charge })
        }
        GZSymbol::P0(tau) => {
            check_subset(tau, n)?;
            let first_missing = (1..=n)
                .find(|j| !tau.contains(j))
                .ok_or_else(|| Error::InvalidSubset("tau must be a proper subset".into()))?;
            let mut star = tau.clone();
            star.push(first_missing);
            let pattern = gz_generator(&star, n)?;
            charge[0] = a.get(0);
            for &j in tau {
                charge[j] += a.get(j);
            }
            Ok(ExtGZElement { pattern, charge })
        }
    }
}
