//! Sparse multivariate Laurent polynomials with rational coefficients.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use serde::{Serialize, Serializer};

use super::rat::Rat;
use crate::error::{Error, Result};

/// Exponent vector; entries may be negative.
pub type Exponents = Vec<i32>;

#[derive(Clone)]
pub struct SparsePoly {
    vars: Vec<String>,
    terms: BTreeMap<Exponents, Rat>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
}

impl SparsePoly {
    pub fn zero(vars: &[String]) -> Self {
        SparsePoly {
            vars: vars.to_vec(),
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[String], c: Rat) -> Self {
        let mut p = SparsePoly::zero(vars);
        if !c.is_zero() {
            p.terms.insert(vec![0; vars.len()], c);
        }
        p
    }

    pub fn one(vars: &[String]) -> Self {
        SparsePoly::constant(vars, Rat::one())
    }

    /// The variable `name`, which must occur in `vars`.
    pub fn var(vars: &[String], name: &str) -> Result<Self> {
        let idx = vars
            .iter()
            .position(|v| v == name)
            .ok_or_else(|| Error::UnknownVariable(name.to_string()))?;
        let mut e = vec![0; vars.len()];
        e[idx] = 1;
        Ok(SparsePoly::monomial(vars, e, Rat::one()))
    }

    pub fn monomial(vars: &[String], exps: Exponents, coeff: Rat) -> Self {
        assert_eq!(exps.len(), vars.len(), "exponent vector length");
        let mut p = SparsePoly::zero(vars);
        if !coeff.is_zero() {
            p.terms.insert(exps, coeff);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing
    /// repeated exponents and dropping zeros.
    pub fn from_terms<I>(vars: &[String], terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponents, Rat)>,
    {
        let mut p = SparsePoly::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent vector length");
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Exponents, c: Rat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                let s = o.get() + &c;
                if s.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = s;
                }
            }
        }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Names of variables that occur with a nonzero exponent.
    pub fn support_vars(&self) -> Vec<String> {
        (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] != 0))
            .map(|i| self.vars[i].clone())
            .collect()
    }

    /// Re-expresses the polynomial over `target`, which must contain every
    /// variable that actually occurs.
    pub fn align_to(&self, target: &[String]) -> Result<SparsePoly> {
        let mut map = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            match target.iter().position(|t| t == v) {
                Some(j) => map.push(Some(j)),
                None => {
                    if self.terms.keys().any(|e| e[i] != 0) {
                        return Err(Error::UnknownVariable(v.clone()));
                    }
                    map.push(None);
                }
            }
        }
        let terms = self.terms.iter().map(|(e, c)| {
            let mut ne = vec![0; target.len()];
            for (i, &x) in e.iter().enumerate() {
                if let Some(j) = map[i] {
                    ne[j] = x;
                }
            }
            (ne, c.clone())
        });
        Ok(SparsePoly::from_terms(target, terms))
    }

    fn union_vars(&self, other: &SparsePoly) -> Vec<String> {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(v.clone());
            }
        }
        vars
    }

    fn aligned_pair(&self, other: &SparsePoly) -> (SparsePoly, SparsePoly) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let vars = self.union_vars(other);
        (
            self.align_to(&vars).expect("union contains all variables"),
            other.align_to(&vars).expect("union contains all variables"),
        )
    }

    pub fn add(&self, other: &SparsePoly) -> SparsePoly {
        let (mut a, b) = self.aligned_pair(other);
        for (e, c) in b.terms {
            a.add_term(e, c);
        }
        a
    }

    pub fn sub(&self, other: &SparsePoly) -> SparsePoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> SparsePoly {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> SparsePoly {
        if c.is_zero() {
            return SparsePoly::zero(&self.vars);
        }
        SparsePoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &SparsePoly) -> SparsePoly {
        let (a, b) = self.aligned_pair(other);
        let mut out = SparsePoly::zero(&a.vars);
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Exponents = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// `self^k`; negative powers are allowed for monomials only.
    pub fn pow(&self, k: i32) -> Result<SparsePoly> {
        if k < 0 {
            let inv = self
                .monomial_inverse()
                .ok_or_else(|| Error::NonInvertibleSubstitution(self.to_string()))?;
            return inv.pow(-k);
        }
        let mut out = SparsePoly::one(&self.vars);
        let mut base = self.clone();
        let mut k = k as u32;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        Ok(out)
    }

    fn monomial_inverse(&self) -> Option<SparsePoly> {
        if self.terms.len() != 1 {
            return None;
        }
        let (e, c) = self.terms.iter().next()?;
        Some(SparsePoly::monomial(
            &self.vars,
            e.iter().map(|x| -x).collect(),
            c.recip(),
        ))
    }

    /// Substitutes a polynomial for every variable. The images must share a
    /// common variable list; variables missing from `images` are an error
    /// only if they actually occur.
    pub fn substitute(
        &self,
        images: &HashMap<String, SparsePoly>,
        target_vars: &[String],
    ) -> Result<SparsePoly> {
        let mut var_images = Vec::with_capacity(self.vars.len());
        for (i, v) in self.vars.iter().enumerate() {
            let occurs = self.terms.keys().any(|e| e[i] != 0);
            match images.get(v) {
                Some(img) => var_images.push(Some(img.align_to(target_vars)?)),
                None if occurs => return Err(Error::UnknownVariable(v.clone())),
                None => var_images.push(None),
            }
        }
        let mut out = SparsePoly::zero(target_vars);
        for (e, c) in &self.terms {
            let mut term = SparsePoly::constant(target_vars, c.clone());
            for (i, &x) in e.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                let img = var_images[i]
                    .as_ref()
                    .expect("occurring variable has an image");
                let f = img
                    .pow(x)
                    .map_err(|_| Error::NonInvertibleSubstitution(self.vars[i].clone()))?;
                term = term.mul(&f);
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// Weight of each term under a per-variable weight vector.
    pub fn term_weight(exps: &[i32], weights: &[Rat]) -> Rat {
        exps.iter()
            .zip(weights)
            .filter(|(e, _)| **e != 0)
            .map(|(&e, w)| Rat::from_int(e as i64) * w)
            .sum()
    }

    /// The sum of the terms of minimal weight.
    pub fn initial_form(&self, weights: &[Rat]) -> SparsePoly {
        assert_eq!(weights.len(), self.vars.len(), "weight vector length");
        let weighted: Vec<(Rat, &Exponents, &Rat)> = self
            .terms
            .iter()
            .map(|(e, c)| (SparsePoly::term_weight(e, weights), e, c))
            .collect();
        let Some(min) = weighted.iter().map(|(w, _, _)| w).min().cloned() else {
            return self.clone();
        };
        SparsePoly::from_terms(
            &self.vars,
            weighted
                .into_iter()
                .filter(|(w, _, _)| *w == min)
                .map(|(_, e, c)| (e.clone(), c.clone())),
        )
    }

    /// Parses expressions such as `2*x0^3*Y1 - 1/2*t0^-1 + 7`.
    ///
    /// Variables are collected in order of first appearance unless a
    /// variable list is supplied.
    pub fn parse(s: &str, vars: Option<&[String]>) -> Result<SparsePoly> {
        let mut raw_terms: Vec<(Rat, Vec<(String, i32)>)> = Vec::new();
        let mut names: Vec<String> = vars.map(<[String]>::to_vec).unwrap_or_default();
        let cleaned: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::Parse("empty polynomial".into()));
        }
        // Split on top-level +/- that are not part of an exponent.
        let bytes: Vec<char> = cleaned.chars().collect();
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut negative = false;
        for (i, &ch) in bytes.iter().enumerate() {
            let after_caret = i > 0 && bytes[i - 1] == '^';
            if (ch == '+' || ch == '-') && !after_caret {
                if !cur.is_empty() {
                    pieces.push((negative, std::mem::take(&mut cur)));
                }
                negative = ch == '-';
            } else {
                cur.push(ch);
            }
        }
        if cur.is_empty() {
            return Err(Error::Parse(format!("dangling sign in {s:?}")));
        }
        pieces.push((negative, cur));

        for (neg, piece) in pieces {
            let mut coeff = if neg { -Rat::one() } else { Rat::one() };
            let mut factors = Vec::new();
            for f in piece.split('*') {
                if f.is_empty() {
                    return Err(Error::Parse(format!("empty factor in {s:?}")));
                }
                if f.starts_with(|c: char| c.is_ascii_digit()) {
                    coeff = coeff * f.parse::<Rat>()?;
                    continue;
                }
                let (name, exp) = match f.split_once('^') {
                    Some((n, e)) => (
                        n,
                        e.parse::<i32>()
                            .map_err(|_| Error::Parse(format!("bad exponent {e:?}")))?,
                    ),
                    None => (f, 1),
                };
                if !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                    return Err(Error::Parse(format!("bad variable name {name:?}")));
                }
                if !names.iter().any(|n| n == name) {
                    if vars.is_some() {
                        return Err(Error::UnknownVariable(name.to_string()));
                    }
                    names.push(name.to_string());
                }
                factors.push((name.to_string(), exp));
            }
            raw_terms.push((coeff, factors));
        }
        let terms = raw_terms.into_iter().map(|(c, fs)| {
            let mut e = vec![0; names.len()];
            for (n, x) in fs {
                let i = names.iter().position(|m| *m == n).expect("name registered");
                e[i] += x;
            }
            (e, c)
        });
        Ok(SparsePoly::from_terms(&names, terms))
    }
}

/// `p op q` over the union of the two variable lists.
pub fn poly_arith(p: &SparsePoly, q: &SparsePoly, op: PolyOp) -> SparsePoly {
    match op {
        PolyOp::Add => p.add(q),
        PolyOp::Mul => p.mul(q),
    }
}

impl PartialEq for SparsePoly {
    fn eq(&self, other: &Self) -> bool {
        let (a, b) = self.aligned_pair(other);
        a.terms == b.terms
    }
}

impl Eq for SparsePoly {}

fn format_monomial(vars: &[String], e: &[i32]) -> String {
    let factors: Vec<String> = vars
        .iter()
        .zip(e)
        .filter(|(_, &x)| x != 0)
        .map(|(v, &x)| {
            if x == 1 {
                v.clone()
            } else {
                format!("{v}^{x}")
            }
        })
        .collect();
    factors.join("*")
}

impl fmt::Display for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let mono = format_monomial(&self.vars, e);
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            match (mono.is_empty(), abs.is_one()) {
                (true, _) => write!(f, "{abs}")?,
                (false, true) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{abs}*{mono}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for SparsePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SparsePoly({self})")
    }
}

impl Serialize for SparsePoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// Variable names `prefix0 .. prefix{n-1}`.
pub fn indexed_names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> SparsePoly {
        SparsePoly::parse(s, None).unwrap()
    }

    #[test]
    fn cancellation() {
        assert_eq!(poly_arith(&p("x+y"), &p("-x"), PolyOp::Add), p("y"));
    }

    #[test]
    fn difference_of_squares() {
        assert_eq!(poly_arith(&p("x+y"), &p("x-y"), PolyOp::Mul), p("x^2-y^2"));
    }

    #[test]
    fn laurent_cancellation() {
        let r = poly_arith(&p("t^-1"), &p("t"), PolyOp::Mul);
        assert_eq!(r, SparsePoly::one(&["t".to_string()]));
        assert_eq!(r.to_string(), "1");
    }

    #[test]
    fn display_round_trip() {
        let q = p("2*x0^3*Y1 - 1/2*t0^-1 + 7");
        let back = SparsePoly::parse(&q.to_string(), None).unwrap();
        assert_eq!(q, back);
    }

    #[test]
    fn substitution_with_inverse() {
        let vars = vec!["t".to_string()];
        let mut images = HashMap::new();
        images.insert(
            "x".to_string(),
            SparsePoly::parse("t^-1", Some(&vars)).unwrap(),
        );
        let r = p("x^2").substitute(&images, &vars).unwrap();
        assert_eq!(r, SparsePoly::parse("t^-2", Some(&vars)).unwrap());
    }

    #[test]
    fn substitution_unknown_variable() {
        let vars = vec!["t".to_string()];
        let images = HashMap::new();
        assert!(matches!(
            p("x").substitute(&images, &vars),
            Err(Error::UnknownVariable(_))
        ));
    }

    #[test]
    fn negative_power_of_binomial_fails() {
        assert!(p("x+1").pow(-1).is_err());
    }

    #[test]
    fn initial_form_min_weight() {
        let q = p("x+y+z");
        let w = vec![Rat::one(), Rat::zero(), Rat::zero()];
        assert_eq!(q.initial_form(&w), p("y+z"));
    }
}
