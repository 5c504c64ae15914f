//! Leaf-labelled trivalent trees with rational edge weights.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactmath::Rat;

/// Vertices `0..leaves` are the leaves (labelled by their index); the rest
/// are internal.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LabelledTree {
    leaves: usize,
    vertices: usize,
    edges: Vec<(usize, usize)>,
    weights: Vec<Rat>,
}

impl LabelledTree {
    /// Builds a tree from an edge list; every weight starts at zero.
    pub fn new(leaves: usize, vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let t = LabelledTree {
            leaves,
            vertices,
            weights: vec![Rat::zero(); edges.len()],
            edges,
        };
        t.validate()?;
        Ok(t)
    }

    fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::Precondition(format!("not a trivalent tree: {m}")));
        if self.edges.len() + 1 != self.vertices {
            return bad("edge count");
        }
        let mut deg = vec![0usize; self.vertices];
        for &(u, v) in &self.edges {
            if u >= self.vertices || v >= self.vertices || u == v {
                return bad("edge endpoints");
            }
            deg[u] += 1;
            deg[v] += 1;
        }
        for (x, &d) in deg.iter().enumerate() {
            let want = if x < self.leaves { 1 } else { 3 };
            if d != want {
                return bad(&format!("vertex {x} has degree {d}"));
            }
        }
        // n - 1 edges and no cycle means connected
        let mut parent: Vec<usize> = (0..self.vertices).collect();
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        for &(u, v) in &self.edges {
            let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
            if ru == rv {
                return bad("cycle");
            }
            parent[ru] = rv;
        }
        Ok(())
    }

    pub fn leaves(&self) -> usize {
        self.leaves
    }

    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn weights(&self) -> &[Rat] {
        &self.weights
    }

    pub fn set_weight(&mut self, edge: usize, w: Rat) {
        self.weights[edge] = w;
    }

    pub fn with_weights(mut self, w: Vec<Rat>) -> Result<Self> {
        if w.len() != self.edges.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} edges",
                w.len(),
                self.edges.len()
            )));
        }
        self.weights = w;
        Ok(self)
    }

    pub fn is_leaf_edge(&self, e: usize) -> bool {
        let (u, v) = self.edges[e];
        u < self.leaves || v < self.leaves
    }

    pub fn internal_edges(&self) -> Vec<usize> {
        (0..self.edges.len())
            .filter(|&e| !self.is_leaf_edge(e))
            .collect()
    }

    /// The edge ending at leaf `i`.
    pub fn leaf_edge(&self, i: usize) -> usize {
        self.edges
            .iter()
            .position(|&(u, v)| u == i || v == i)
            .expect("every leaf has an edge")
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, e));
            adj[v].push((u, e));
        }
        adj
    }

    /// Edges on the path between two vertices.
    pub fn path_edges(&self, from: usize, to: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; self.vertices];
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![from];
        seen[from] = true;
        while let Some(x) = stack.pop() {
            for &(y, e) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    prev[y] = Some((x, e));
                    stack.push(y);
                }
            }
        }
        let mut out = Vec::new();
        let mut cur = to;
        while let Some((p, e)) = prev[cur] {
            out.push(e);
            cur = p;
        }
        out.sort_unstable();
        out
    }

    /// 0/1 indicator of the path between leaves `i` and `j`.
    pub fn path_indicator(&self, i: usize, j: usize) -> Vec<i64> {
        let mut v = vec![0; self.edges.len()];
        for e in self.path_edges(i, j) {
            v[e] = 1;
        }
        v
    }

    pub fn path_weight(&self, i: usize, j: usize) -> Rat {
        self.path_edges(i, j)
            .iter()
            .map(|&e| &self.weights[e])
            .sum()
    }

    /// For each internal edge, the leaves on the side away from leaf 0 as a
    /// bitmask; sorted, this identifies the labelled topology.
    pub fn splits(&self) -> Vec<u64> {
        let mut out: Vec<u64> = self
            .internal_edges()
            .iter()
            .map(|&e| self.split_of(e))
            .collect();
        out.sort_unstable();
        out
    }

    fn split_of(&self, e: usize) -> u64 {
        let (u, v) = self.edges[e];
        let side = self.component_without(u, e);
        let mask: u64 = side
            .iter()
            .filter(|&&x| x < self.leaves)
            .map(|&x| 1u64 << x)
            .sum();
        if mask & 1 == 1 {
            let other = self.component_without(v, e);
            other
                .iter()
                .filter(|&&x| x < self.leaves)
                .map(|&x| 1u64 << x)
                .sum()
        } else {
            mask
        }
    }

    fn component_without(&self, start: usize, cut: usize) -> Vec<usize> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.vertices];
        let mut stack = vec![start];
        seen[start] = true;
        let mut out = Vec::new();
        while let Some(x) = stack.pop() {
            out.push(x);
            for &(y, e) in &adj[x] {
                if e != cut && !seen[y] {
                    seen[y] = true;
                    stack.push(y);
                }
            }
        }
        out
    }

    pub fn same_topology(&self, other: &LabelledTree) -> bool {
        self.leaves == other.leaves && self.splits() == other.splits()
    }

    /// Newick string rooted at the internal vertex next to leaf 0, children
    /// ordered by smallest leaf label.
    pub fn newick(&self) -> String {
        self.newick_impl(false)
    }

    /// As [`LabelledTree::newick`] with `:weight` on every branch.
    pub fn newick_weighted(&self) -> String {
        self.newick_impl(true)
    }

    fn newick_impl(&self, weighted: bool) -> String {
        let adj = self.adjacency();
        let (root, e0) = adj[0][0];
        let mut parts: Vec<(usize, String)> = vec![(0, self.branch(0, e0, weighted))];
        for &(y, e) in &adj[root] {
            if y != 0 {
                parts.push(self.subtree(&adj, y, root, e, weighted));
            }
        }
        parts.sort();
        let inner: Vec<String> = parts.into_iter().map(|(_, s)| s).collect();
        format!("({});", inner.join(","))
    }

    fn branch(&self, label: usize, e: usize, weighted: bool) -> String {
        if weighted {
            format!("{label}:{}", self.weights[e])
        } else {
            label.to_string()
        }
    }

    fn subtree(
        &self,
        adj: &[Vec<(usize, usize)>],
        x: usize,
        parent: usize,
        e: usize,
        weighted: bool,
    ) -> (usize, String) {
        if x < self.leaves {
            return (x, self.branch(x, e, weighted));
        }
        let mut kids: Vec<(usize, String)> = adj[x]
            .iter()
            .filter(|&&(y, _)| y != parent)
            .map(|&(y, f)| self.subtree(adj, y, x, f, weighted))
            .collect();
        kids.sort();
        let min = kids[0].0;
        let inner: Vec<String> = kids.into_iter().map(|(_, s)| s).collect();
        let body = format!("({})", inner.join(","));
        if weighted {
            (min, format!("{body}:{}", self.weights[e]))
        } else {
            (min, body)
        }
    }
}

/// All labelled trivalent trees on `n_leaves` leaves, `(2N-5)!!` of them,
/// ordered by their split sets.
pub fn enumerate_trees(n_leaves: usize) -> Result<Vec<LabelledTree>> {
    if !(4..=7).contains(&n_leaves) {
        return Err(Error::LeafCountOutOfRange(n_leaves));
    }
    // Grow by inserting leaf k on every edge of each tree on leaves 0..k.
    // Internal vertices are numbered from `n_leaves` upward.
    let first = n_leaves;
    let mut trees: Vec<Vec<(usize, usize)>> = vec![vec![(0, first), (1, first), (2, first)]];
    for k in 3..n_leaves {
        let new_internal = first + (k - 2);
        let mut next = Vec::new();
        for t in &trees {
            for idx in 0..t.len() {
                let (u, v) = t[idx];
                let mut s = t.clone();
                s[idx] = (u, new_internal);
                s.push((new_internal, v));
                s.push((k, new_internal));
                next.push(s);
            }
        }
        trees = next;
    }
    let vertices = 2 * n_leaves - 2;
    let mut out = Vec::with_capacity(trees.len());
    let mut seen = BTreeSet::new();
    for edges in trees {
        let t = LabelledTree::new(n_leaves, vertices, edges)?;
        if seen.insert(t.splits()) {
            out.push(t);
        }
    }
    out.sort_by_key(|t| t.splits());
    Ok(out)
}
