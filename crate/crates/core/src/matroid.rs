//! Linear ideals, their matroids, flats and flags, and initial linear ideals.

use std::collections::{BTreeSet, HashMap};

use serde::{Serialize, Serializer};

use crate::bundle::BundlePair;
use crate::error::{Error, Result};
use crate::exactmath::{QMatrix, Rat, SparsePoly};

/// Largest ground set accepted by the flat enumerators.
pub const GROUND_CAP: usize = 16;

/// An ideal generated by linear forms over a named variable list.
#[derive(Debug, Clone)]
pub struct LinearIdeal {
    vars: Vec<String>,
    gens: Vec<Vec<Rat>>,
}

impl LinearIdeal {
    /// Generators given as coefficient rows; zero rows are dropped.
    pub fn from_rows(vars: &[String], rows: Vec<Vec<Rat>>) -> Result<Self> {
        if let Some(r) = rows.iter().find(|r| r.len() != vars.len()) {
            return Err(Error::DimensionMismatch(format!(
                "linear form with {} coefficients over {} variables",
                r.len(),
                vars.len()
            )));
        }
        let gens = rows
            .into_iter()
            .filter(|r| r.iter().any(|c| !c.is_zero()))
            .collect();
        Ok(LinearIdeal {
            vars: vars.to_vec(),
            gens,
        })
    }

    /// Reads homogeneous linear polynomials over `vars`.
    pub fn from_polys(vars: &[String], polys: &[SparsePoly]) -> Result<Self> {
        let mut rows = Vec::with_capacity(polys.len());
        for p in polys {
            let q = p.align_to(vars)?;
            let mut row = vec![Rat::zero(); vars.len()];
            for (e, c) in q.terms() {
                let mut nz = e.iter().enumerate().filter(|(_, &x)| x != 0);
                match (nz.next(), nz.next()) {
                    (Some((i, &1)), None) => row[i] = c.clone(),
                    _ => return Err(Error::NonLinearGenerator(p.to_string())),
                }
            }
            rows.push(row);
        }
        LinearIdeal::from_rows(vars, rows)
    }

    pub fn zero(vars: &[String]) -> Self {
        LinearIdeal {
            vars: vars.to_vec(),
            gens: Vec::new(),
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn generator_rows(&self) -> &[Vec<Rat>] {
        &self.gens
    }

    pub fn generator_matrix(&self) -> QMatrix {
        QMatrix::from_rows_with_cols(self.gens.clone(), self.vars.len())
            .expect("rows checked on construction")
    }

    /// Reduced row echelon basis; two ideals are equal iff these agree.
    pub fn canonical_basis(&self) -> Vec<Vec<Rat>> {
        self.generator_matrix().row_space_basis()
    }

    pub fn canonical(&self) -> LinearIdeal {
        LinearIdeal {
            vars: self.vars.clone(),
            gens: self.canonical_basis(),
        }
    }

    /// Dimension of the degree-one part.
    pub fn dim(&self) -> usize {
        self.generator_matrix().rank()
    }

    pub fn to_polys(&self) -> Vec<SparsePoly> {
        self.gens
            .iter()
            .map(|r| linear_poly(&self.vars, r))
            .collect()
    }

    /// True iff the variable at `index` lies in the ideal.
    pub fn contains_variable(&self, index: usize) -> bool {
        let g = self.generator_matrix();
        let mut e = vec![Rat::zero(); self.vars.len()];
        e[index] = Rat::one();
        let stacked = g
            .vstack(&QMatrix::from_rows(vec![e]).expect("one row"))
            .expect("same width");
        stacked.rank() == g.rank()
    }

    /// True iff the ideal is generated by variables.
    pub fn is_monomial(&self) -> bool {
        self.canonical_basis()
            .iter()
            .all(|r| r.iter().filter(|c| !c.is_zero()).count() == 1)
    }

    /// Variables generating a monomial ideal, or `None` if it is not monomial.
    pub fn monomial_generators(&self) -> Option<Vec<usize>> {
        let basis = self.canonical_basis();
        let mut out = Vec::with_capacity(basis.len());
        for r in &basis {
            let nz: Vec<usize> = (0..r.len()).filter(|&i| !r[i].is_zero()).collect();
            if nz.len() != 1 {
                return None;
            }
            out.push(nz[0]);
        }
        out.sort_unstable();
        Some(out)
    }
}

impl PartialEq for LinearIdeal {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars && self.canonical_basis() == other.canonical_basis()
    }
}

impl Eq for LinearIdeal {}

impl Serialize for LinearIdeal {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let forms: Vec<String> = self.to_polys().iter().map(|p| p.to_string()).collect();
        forms.serialize(serializer)
    }
}

fn linear_poly(vars: &[String], row: &[Rat]) -> SparsePoly {
    SparsePoly::from_terms(
        vars,
        row.iter().enumerate().map(|(i, c)| {
            let mut e = vec![0; vars.len()];
            e[i] = 1;
            (e, c.clone())
        }),
    )
}

/// Initial ideal of a linear ideal at the weight vector `w`.
///
/// Eliminating with columns sorted by increasing weight leaves every row
/// with its pivot at a term of minimal weight; the initial forms of those
/// rows have distinct pivots and so span the initial ideal.
pub fn initial_linear(l: &LinearIdeal, w: &[Rat]) -> Result<LinearIdeal> {
    let m = l.vars.len();
    if w.len() != m {
        return Err(Error::DimensionMismatch(format!(
            "weight vector of length {} for {m} variables",
            w.len()
        )));
    }
    let mut order: Vec<usize> = (0..m).collect();
    order.sort_by(|&i, &j| w[i].cmp(&w[j]).then(i.cmp(&j)));
    let (r, pivots) = l.generator_matrix().select_columns(&order).rref();
    let mut rows = Vec::with_capacity(pivots.len());
    for (k, &p) in pivots.iter().enumerate() {
        let pw = &w[order[p]];
        let mut row = vec![Rat::zero(); m];
        for (pos, &col) in order.iter().enumerate() {
            if &w[col] == pw {
                row[col] = r.get(k, pos).clone();
            }
        }
        rows.push(row);
    }
    Ok(LinearIdeal::from_rows(&l.vars, rows)?.canonical())
}

/// Applies the rows of `weights` one after another.
pub fn iterated_initial(l: &LinearIdeal, weights: &[Vec<Rat>]) -> Result<LinearIdeal> {
    let mut cur = l.canonical();
    for w in weights {
        cur = initial_linear(&cur, w)?;
    }
    Ok(cur)
}

/// Initial ideal of `L` on the cone spanned by every ray of the diagram
/// except ray `i`.
///
/// The rows are applied in order, in reverse order, and also summed; the
/// three must agree, otherwise the rows do not lie on a common face.
pub fn facet_initial(p: &BundlePair, i: usize) -> Result<LinearIdeal> {
    if i >= p.rays() {
        return Err(Error::IndexOutOfRange {
            index: i,
            len: p.rays(),
        });
    }
    let rows: Vec<Vec<Rat>> = (0..p.rays())
        .filter(|&r| r != i)
        .map(|r| p.d.row(r).to_vec())
        .collect();
    let forward = iterated_initial(&p.l, &rows)?;
    let reversed: Vec<Vec<Rat>> = rows.iter().rev().cloned().collect();
    let backward = iterated_initial(&p.l, &reversed)?;
    let mut sum = vec![Rat::zero(); p.vars.len()];
    for r in &rows {
        for (s, x) in sum.iter_mut().zip(r) {
            *s += x;
        }
    }
    let summed = initial_linear(&p.l, &sum)?;
    if forward != backward || forward != summed {
        return Err(Error::NonMonomialFace);
    }
    Ok(forward)
}

/// True iff every facet initial ideal is generated by variables.
pub fn is_monomial_bundle(p: &BundlePair) -> bool {
    (0..p.rays()).all(|i| matches!(facet_initial(p, i), Ok(l) if l.is_monomial()))
}

/// A matroid realized by the columns of `vectors`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinMatroid {
    pub ground: Vec<String>,
    pub vectors: QMatrix,
}

/// The matroid of the quotient of the linear forms by `L`: element `j` is
/// realized by the `j`-th coordinate functional on the kernel of `L`.
pub fn matroid_of(l: &LinearIdeal) -> LinMatroid {
    let m = l.vars.len();
    let kernel = l.generator_matrix().nullspace();
    let vectors = QMatrix::from_rows_with_cols(kernel, m).expect("kernel vectors have length m");
    LinMatroid {
        ground: l.vars.clone(),
        vectors,
    }
}

/// A closed subset, stored as sorted element indices.
pub type Flat = Vec<usize>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FlatMode {
    AllFlats,
    MaximalFlags,
    NonloopHyperplaneComplements,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlatListing {
    Flats(Vec<Flat>),
    Flags(Vec<Vec<Flat>>),
    /// `(e, closure(ground \ {e}))` for each non-loop `e` whose closure is a
    /// hyperplane.
    Hyperplanes(Vec<(usize, Flat)>),
}

impl LinMatroid {
    pub fn len(&self) -> usize {
        self.ground.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ground.is_empty()
    }

    pub fn rank(&self) -> usize {
        self.vectors.rank()
    }

    pub fn rank_of(&self, subset: &[usize]) -> usize {
        if subset.is_empty() {
            return 0;
        }
        self.vectors.select_columns(subset).rank()
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.rank_of(&[e]) == 0
    }

    pub fn index_of(&self, name: &str) -> Result<usize> {
        self.ground
            .iter()
            .position(|g| g == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))
    }

    pub fn closure(&self, subset: &[usize]) -> Flat {
        let r = self.rank_of(subset);
        let mut out: Vec<usize> = (0..self.len())
            .filter(|e| {
                if subset.contains(e) {
                    return true;
                }
                let mut s = subset.to_vec();
                s.push(*e);
                self.rank_of(&s) == r
            })
            .collect();
        out.sort_unstable();
        out
    }

    pub fn is_flat(&self, subset: &[usize]) -> bool {
        let mut s = subset.to_vec();
        s.sort_unstable();
        s.dedup();
        self.closure(&s) == s
    }

    pub fn names(&self, flat: &[usize]) -> Vec<String> {
        flat.iter().map(|&e| self.ground[e].clone()).collect()
    }

    fn check_cap(&self) -> Result<()> {
        if self.len() > GROUND_CAP {
            return Err(Error::GroundTooLarge(self.len()));
        }
        Ok(())
    }

    /// Flats that cover `f`.
    fn covers(&self, f: &Flat) -> Vec<Flat> {
        let mut seen = BTreeSet::new();
        for e in 0..self.len() {
            if f.contains(&e) {
                continue;
            }
            let mut s = f.clone();
            s.push(e);
            seen.insert(self.closure(&s));
        }
        seen.into_iter().collect()
    }

    /// All flats, ordered by rank and then lexicographically.
    pub fn flats(&self) -> Result<Vec<Flat>> {
        self.check_cap()?;
        let mut level: BTreeSet<Flat> = BTreeSet::from([self.closure(&[])]);
        let mut out = Vec::new();
        while !level.is_empty() {
            let mut next = BTreeSet::new();
            for f in &level {
                next.extend(self.covers(f));
            }
            out.extend(level);
            level = next;
        }
        Ok(out)
    }

    /// Maximal chains `F_1 < ... < F_r` with `rank(F_i) = i`; the bottom flat
    /// of loops is omitted and `F_r` is the ground set.
    pub fn maximal_flags(&self) -> Result<Vec<Vec<Flat>>> {
        self.check_cap()?;
        let mut memo: HashMap<Flat, Vec<Vec<Flat>>> = HashMap::new();
        let bottom = self.closure(&[]);
        Ok(self.flags_above(&bottom, &mut memo))
    }

    fn flags_above(&self, f: &Flat, memo: &mut HashMap<Flat, Vec<Vec<Flat>>>) -> Vec<Vec<Flat>> {
        if let Some(v) = memo.get(f) {
            return v.clone();
        }
        let covers = self.covers(f);
        let out = if covers.is_empty() {
            vec![Vec::new()]
        } else {
            let mut out = Vec::new();
            for c in covers {
                for tail in self.flags_above(&c, memo) {
                    let mut chain = vec![c.clone()];
                    chain.extend(tail);
                    out.push(chain);
                }
            }
            out
        };
        memo.insert(f.clone(), out.clone());
        out
    }

    pub fn hyperplane_complements(&self) -> Result<Vec<(usize, Flat)>> {
        self.check_cap()?;
        let r = self.rank();
        let mut out = Vec::new();
        for e in 0..self.len() {
            if self.is_loop(e) {
                continue;
            }
            let rest: Vec<usize> = (0..self.len()).filter(|&x| x != e).collect();
            let h = self.closure(&rest);
            if r > 0 && self.rank_of(&h) == r - 1 {
                out.push((e, h));
            }
        }
        Ok(out)
    }

    pub fn flats_and_flags(&self, mode: FlatMode) -> Result<FlatListing> {
        Ok(match mode {
            FlatMode::AllFlats => FlatListing::Flats(self.flats()?),
            FlatMode::MaximalFlags => FlatListing::Flags(self.maximal_flags()?),
            FlatMode::NonloopHyperplaneComplements => {
                FlatListing::Hyperplanes(self.hyperplane_complements()?)
            }
        })
    }

    /// Closes each spanning set, appends the ground set if missing and
    /// checks that the result is a maximal flag.
    pub fn flag_from_spans(&self, spans: &[Vec<usize>]) -> Result<Vec<Flat>> {
        let mut flags: Vec<Flat> = spans.iter().map(|s| self.closure(s)).collect();
        let full: Flat = (0..self.len()).collect();
        if flags.last() != Some(&full) {
            flags.push(full);
        }
        self.validate_flag(&flags)?;
        Ok(flags)
    }

    pub fn validate_flag(&self, flags: &[Flat]) -> Result<()> {
        if flags.len() != self.rank() {
            return Err(Error::InvalidFlag(format!(
                "a maximal flag has {} flats, got {}",
                self.rank(),
                flags.len()
            )));
        }
        for (i, f) in flags.iter().enumerate() {
            if !self.is_flat(f) {
                return Err(Error::InvalidFlag(format!(
                    "{{{}}} is not a flat",
                    self.names(f).join(",")
                )));
            }
            if self.rank_of(f) != i + 1 {
                return Err(Error::InvalidFlag(format!(
                    "{{{}}} has rank {}, expected {}",
                    self.names(f).join(","),
                    self.rank_of(f),
                    i + 1
                )));
            }
            if i > 0 && !flags[i - 1].iter().all(|e| f.contains(e)) {
                return Err(Error::InvalidFlag("flats are not nested".into()));
            }
        }
        Ok(())
    }
}
