//! The weighted tree attached to a maximal flag of flats of the graphic
//! matroid on `K_{n+1}`.

use serde::Serialize;

use super::tree::LabelledTree;
use super::{trop_point_from_tree, TropPoint};
use crate::bundle::lex_pairs;
use crate::error::{Error, Result};
use crate::exactmath::Rat;

#[derive(Debug, Clone, Serialize)]
pub struct FlagTree {
    pub tree: LabelledTree,
    pub newick: String,
    pub point: TropPoint,
    /// `permutation[i]` is the position of vertex `i` in an order where every
    /// block of every flat is an interval.
    pub permutation: Vec<usize>,
    /// Whether the flag was already spanned by consecutive `z_{k,k+1}`.
    pub normal_form: bool,
}

/// Blocks of the partition of `0..=n` cut out by a set of pairs, each block
/// sorted and the list sorted by first element.
fn blocks(n: usize, pairs: &[(usize, usize)], subset: &[usize]) -> Result<Vec<Vec<usize>>> {
    let mut label: Vec<usize> = (0..=n).collect();
    for &e in subset {
        let &(i, j) = pairs.get(e).ok_or(Error::IndexOutOfRange {
            index: e,
            len: pairs.len(),
        })?;
        let (li, lj) = (label[i], label[j]);
        if li != lj {
            for l in label.iter_mut() {
                if *l == lj {
                    *l = li;
                }
            }
        }
    }
    let mut out: Vec<Vec<usize>> = Vec::new();
    for v in 0..=n {
        match out.iter_mut().find(|b| label[b[0]] == label[v]) {
            Some(b) => b.push(v),
            None => out.push(vec![v]),
        }
    }
    Ok(out)
}

/// Builds the tree for the flag `F_1 ⊂ … ⊂ F_n` (each flat given by any
/// spanning set of pair indices into `lex_pairs(n+1)`; the full flat may be
/// omitted) with edge weights `v_1..v_n`.
///
/// Merging two blocks at step `k` creates an internal vertex; the edge from a
/// vertex made at step `c` up to one made at step `k` weighs
/// `v_c + … + v_{k-1}`, the last vertex meets leaf 0 through `v_n`, and leaf
/// edges cancel the path to leaf 0. Everything is then halved.
pub fn tree_from_flag(n: usize, flag: &[Vec<usize>], v: &[Rat]) -> Result<FlagTree> {
    if !(2..=5).contains(&n) {
        return Err(Error::LeafCountOutOfRange(n + 2));
    }
    let pairs = lex_pairs(n + 1);
    let mut parts = Vec::new();
    for f in flag {
        parts.push(blocks(n, &pairs, f)?);
    }
    if parts.last().is_none_or(|p| p.len() != 1) {
        parts.push(vec![(0..=n).collect()]);
    }
    if parts.len() != n {
        return Err(Error::InvalidFlag(format!(
            "expected {n} flats, got {}",
            parts.len()
        )));
    }
    if v.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "{} weights for {n} flats",
            v.len()
        )));
    }
    if v.iter().any(Rat::is_negative) {
        return Err(Error::InvalidFlag(
            "flat weights must be non-negative".into(),
        ));
    }

    // Each step must merge exactly two blocks of the previous partition.
    let mut prev: Vec<Vec<usize>> = (0..=n).map(|i| vec![i]).collect();
    let mut merges = Vec::new();
    for (k, part) in parts.iter().enumerate() {
        if part.len() != n - k {
            return Err(Error::InvalidFlag(format!(
                "flat {} has rank {}, expected {}",
                k + 1,
                n + 1 - part.len(),
                k + 1
            )));
        }
        let joined: Vec<&Vec<usize>> = part.iter().filter(|b| !prev.contains(b)).collect();
        let [big] = joined[..] else {
            return Err(Error::InvalidFlag(format!(
                "flat {} is not a cover of flat {k}",
                k + 1
            )));
        };
        let pieces: Vec<Vec<usize>> = prev
            .iter()
            .filter(|b| b.iter().all(|x| big.contains(x)))
            .cloned()
            .collect();
        if pieces.len() != 2 || pieces.iter().map(Vec::len).sum::<usize>() != big.len() {
            return Err(Error::InvalidFlag(format!(
                "flat {} does not contain flat {k}",
                k + 1
            )));
        }
        merges.push((pieces[0].clone(), pieces[1].clone()));
        prev = part.clone();
    }

    // Vertices: leaves 0..=n+1 (leaf i+1 is vertex i), then one per step.
    let leaves = n + 2;
    let partial = |from: usize, to: usize| -> Rat { v[from..to].iter().sum() };
    let mut edges = Vec::new();
    let mut weights = Vec::new();
    // (block, tree vertex at its top, step it was made at)
    let mut tops: Vec<(Vec<usize>, usize, usize)> = (0..=n).map(|i| (vec![i], i + 1, 0)).collect();
    let mut attach = vec![0usize; n + 1];
    for (k, (b1, b2)) in merges.iter().enumerate() {
        let w = leaves + k;
        let mut merged = Vec::new();
        for b in [b1, b2] {
            let pos = tops
                .iter()
                .position(|(blk, _, _)| blk == b)
                .expect("block present");
            let (blk, top, made) = tops.remove(pos);
            edges.push((top, w));
            if top < leaves {
                attach[top - 1] = k;
                weights.push(Rat::zero());
            } else {
                weights.push(partial(made, k));
            }
            merged.extend(blk);
        }
        merged.sort_unstable();
        tops.push((merged, w, k));
    }
    edges.push((0, leaves + n - 1));
    weights.push(v[n - 1].clone());
    for (i, &k) in attach.iter().enumerate() {
        let e = edges
            .iter()
            .position(|&(a, _)| a == i + 1)
            .expect("leaf edge");
        weights[e] = -partial(k, n);
    }
    let half = Rat::new(1, 2);
    let weights: Vec<Rat> = weights.into_iter().map(|w| w * &half).collect();
    let tree = LabelledTree::new(leaves, leaves + n, edges)?.with_weights(weights)?;
    let point = trop_point_from_tree(&tree, None)?;

    let order = leaf_order(&merges, n);
    let mut permutation = vec![0; n + 1];
    for (pos, &x) in order.iter().enumerate() {
        permutation[x] = pos;
    }
    let normal_form = parts
        .iter()
        .all(|p| p.iter().all(|b| b.windows(2).all(|w| w[1] == w[0] + 1)));
    Ok(FlagTree {
        newick: tree.newick_weighted(),
        tree,
        point,
        permutation,
        normal_form,
    })
}

/// Vertices in the order they meet a depth-first walk of the merge tree,
/// smaller blocks' labels first.
fn leaf_order(merges: &[(Vec<usize>, Vec<usize>)], n: usize) -> Vec<usize> {
    fn walk(block: &[usize], merges: &[(Vec<usize>, Vec<usize>)], out: &mut Vec<usize>) {
        if block.len() == 1 {
            out.push(block[0]);
            return;
        }
        let (b1, b2) = merges
            .iter()
            .find(|(x, y)| {
                x.len() + y.len() == block.len() && x.iter().chain(y).all(|e| block.contains(e))
            })
            .expect("every block above a singleton comes from a merge");
        walk(b1, merges, out);
        walk(b2, merges, out);
    }
    let mut out = Vec::new();
    walk(&(0..=n).collect::<Vec<_>>(), merges, &mut out);
    out
}
