//! Exact feasibility LP over the rationals (phase-one simplex, Bland's rule).

use super::matrix::QMatrix;
use super::rat::Rat;
use crate::error::{Error, Result};

/// Finds some `x >= 0` with `A x = b`, or `None` when the system is
/// infeasible. The returned point is a basic feasible solution.
pub fn feasible_point(a: &QMatrix, b: &[Rat]) -> Result<Option<Vec<Rat>>> {
    let m = a.rows();
    let n = a.cols();
    if b.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side of length {} for {m} rows",
            b.len()
        )));
    }
    if m == 0 {
        return Ok(Some(vec![Rat::zero(); n]));
    }

    // Tableau columns: n structural, m artificial, 1 rhs.
    let width = n + m + 1;
    let mut t: Vec<Vec<Rat>> = Vec::with_capacity(m);
    for r in 0..m {
        let flip = b[r].is_negative();
        let mut row = Vec::with_capacity(width);
        for c in 0..n {
            let v = a.get(r, c).clone();
            row.push(if flip { -v } else { v });
        }
        for k in 0..m {
            row.push(if k == r { Rat::one() } else { Rat::zero() });
        }
        row.push(if flip { -&b[r] } else { b[r].clone() });
        t.push(row);
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    // Reduced costs of the phase-one objective `sum of artificials`.
    let mut cost = vec![Rat::zero(); width];
    for row in &t {
        for c in 0..width {
            if c < n || c == width - 1 {
                cost[c] -= &row[c];
            }
        }
    }

    loop {
        // Bland: lowest-index column with negative reduced cost enters.
        let Some(enter) = (0..n + m).find(|&c| cost[c].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, Rat)> = None;
        for r in 0..m {
            if !t[r][enter].is_positive() {
                continue;
            }
            let ratio = &t[r][width - 1] / &t[r][enter];
            leave = match leave {
                None => Some((r, ratio)),
                Some((lr, lratio)) => {
                    if ratio < lratio || (ratio == lratio && basis[r] < basis[lr]) {
                        Some((r, ratio))
                    } else {
                        Some((lr, lratio))
                    }
                }
            };
        }
        // Phase one is bounded below by zero, so a leaving row exists.
        let (pr, _) = leave.expect("phase-one objective is bounded");
        pivot(&mut t, &mut cost, pr, enter);
        basis[pr] = enter;
    }

    if !cost[width - 1].is_zero() {
        return Ok(None);
    }
    let mut x = vec![Rat::zero(); n];
    for (r, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[r][width - 1].clone();
        }
    }
    Ok(Some(x))
}

fn pivot(t: &mut [Vec<Rat>], cost: &mut [Rat], pr: usize, pc: usize) {
    let inv = t[pr][pc].recip();
    for v in t[pr].iter_mut() {
        *v = &*v * &inv;
    }
    let prow = t[pr].clone();
    for (r, row) in t.iter_mut().enumerate() {
        if r == pr || row[pc].is_zero() {
            continue;
        }
        let f = row[pc].clone();
        for (v, p) in row.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v -= &(&f * p);
            }
        }
    }
    let f = cost[pc].clone();
    if !f.is_zero() {
        for (v, p) in cost.iter_mut().zip(&prow) {
            if !p.is_zero() {
                *v -= &(&f * p);
            }
        }
    }
}

/// Convex-combination weights expressing `target` through `points`, if any.
pub fn convex_weights(points: &[Vec<Rat>], target: &[Rat]) -> Result<Option<Vec<Rat>>> {
    let dim = target.len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch(
            "points of unequal dimension".into(),
        ));
    }
    if points.is_empty() {
        return Ok(None);
    }
    let mut a = QMatrix::zeros(dim + 1, points.len());
    for (j, p) in points.iter().enumerate() {
        for (i, v) in p.iter().enumerate() {
            a.set(i, j, v.clone());
        }
        a.set(dim, j, Rat::one());
    }
    let mut b = target.to_vec();
    b.push(Rat::one());
    feasible_point(&a, &b)
}

/// True iff `points[index]` is not a convex combination of the other points.
pub fn lp_is_extreme(points: &[Vec<Rat>], index: usize) -> Result<bool> {
    if index >= points.len() {
        return Err(Error::IndexOutOfRange {
            index,
            len: points.len(),
        });
    }
    let dim = points[index].len();
    if points.iter().any(|p| p.len() != dim) {
        return Err(Error::DimensionMismatch(
            "points of unequal dimension".into(),
        ));
    }
    let others: Vec<Vec<Rat>> = points
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != index)
        .map(|(_, p)| p.clone())
        .collect();
    Ok(convex_weights(&others, &points[index])?.is_none())
}
