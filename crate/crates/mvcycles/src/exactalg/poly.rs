//! Sparse multivariate polynomials over the rationals in the matrix entries
//! `x_{ij}` (1 <= i < j <= n) of a generic upper unitriangular matrix.
//!
//! Terms are kept in a `BTreeMap` under a graded lexicographic monomial order
//! so that printing, hashing and iteration are canonical. Coefficients are
//! arbitrary-precision rationals; no zero coefficient is ever stored.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num::{BigRational, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::ExactError;

pub type Rat = BigRational;

/// Convenience constructor for small integer rationals.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(n.into())
}

/// A matrix-entry variable `x_{row,col}` with `row < col` (1-based).
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var {
    pub row: u8,
    pub col: u8,
}

impl Var {
    pub fn new(row: u8, col: u8) -> Self {
        assert!(
            0 < row && row < col,
            "variable x_{{{row},{col}}} must satisfy 1 <= row < col"
        );
        Var { row, col }
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x_{}_{}", self.row, self.col)
    }
}

/// A monomial: sorted list of `(variable, exponent)` with positive exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Mono {
    factors: Vec<(Var, u32)>,
}

impl Mono {
    pub fn one() -> Self {
        Mono::default()
    }

    pub fn var(v: Var) -> Self {
        Mono {
            factors: vec![(v, 1)],
        }
    }

    pub fn from_factors(mut factors: Vec<(Var, u32)>) -> Self {
        factors.retain(|&(_, e)| e > 0);
        factors.sort_by_key(|&(v, _)| v);
        // merge duplicates
        let mut merged: Vec<(Var, u32)> = Vec::with_capacity(factors.len());
        for (v, e) in factors {
            match merged.last_mut() {
                Some((w, f)) if *w == v => *f += e,
                _ => merged.push((v, e)),
            }
        }
        Mono { factors: merged }
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn degree(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| e as u64).sum()
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.factors
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.factors
            .iter()
            .find(|&&(w, _)| w == v)
            .map_or(0, |&(_, e)| e)
    }

    pub fn mul(&self, other: &Mono) -> Mono {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        Mono::from_factors(factors)
    }

    pub fn pow(&self, k: u32) -> Mono {
        if k == 0 {
            return Mono::one();
        }
        Mono {
            factors: self.factors.iter().map(|&(v, e)| (v, e * k)).collect(),
        }
    }

    /// Componentwise quotient, `None` when some exponent would go negative.
    pub fn try_div(&self, other: &Mono) -> Option<Mono> {
        let mut out = Vec::with_capacity(self.factors.len());
        let mut it = self.factors.iter().copied().peekable();
        for &(v, e) in &other.factors {
            loop {
                let (w, f) = *it.peek()?;
                if w < v {
                    out.push((w, f));
                    it.next();
                } else if w == v {
                    if f < e {
                        return None;
                    }
                    if f > e {
                        out.push((w, f - e));
                    }
                    it.next();
                    break;
                } else {
                    return None;
                }
            }
        }
        out.extend(it);
        Some(Mono { factors: out })
    }

    /// Largest column index used by any variable, 0 for the empty monomial.
    pub fn max_col(&self) -> u8 {
        self.factors.iter().map(|&(v, _)| v.col).max().unwrap_or(0)
    }
}

/// Graded lexicographic order: first by total degree, then lexicographically
/// on the exponent vector read along increasing `(row, col)`.
impl Ord for Mono {
    fn cmp(&self, other: &Self) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            ord => return ord,
        }
        let mut a = self.factors.iter();
        let mut b = other.factors.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                // the side with a factor on an earlier variable has a larger
                // exponent there, hence is lex-greater
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some(&(va, ea)), Some(&(vb, eb))) => {
                    if va < vb {
                        return Ordering::Greater;
                    }
                    if vb < va {
                        return Ordering::Less;
                    }
                    match ea.cmp(&eb) {
                        Ordering::Equal => {}
                        ord => return ord,
                    }
                }
            }
        }
    }
}

impl PartialOrd for Mono {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Mono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for &(v, e) in &self.factors {
            if !first {
                write!(f, " ")?;
            }
            first = false;
            if e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial in the `x_{ij}` with rational coefficients.
///
/// `n` is the ambient column count; it is carried for context (printing and
/// picture conversions) and ignored by equality and hashing, which look only
/// at the terms.
#[derive(Clone, Debug)]
pub struct MultiPoly {
    n: u8,
    terms: BTreeMap<Mono, Rat>,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms
    }
}
impl Eq for MultiPoly {}

impl std::hash::Hash for MultiPoly {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.terms.hash(state);
    }
}

impl PartialOrd for MultiPoly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Term-by-term order; exists so polynomials can live in sorted sets.
impl Ord for MultiPoly {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.terms.iter().rev();
        let mut b = other.terms.iter().rev();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((ma, ca)), Some((mb, cb))) => match ma.cmp(mb).then_with(|| ca.cmp(cb)) {
                    Ordering::Equal => {}
                    ord => return ord,
                },
            }
        }
    }
}

impl MultiPoly {
    pub fn zero(n: u8) -> Self {
        MultiPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(n: u8) -> Self {
        Self::constant(n, Rat::one())
    }

    pub fn constant(n: u8, c: Rat) -> Self {
        let mut p = Self::zero(n);
        p.add_term(Mono::one(), c);
        p
    }

    pub fn var(n: u8, row: u8, col: u8) -> Self {
        let v = Var::new(row, col);
        assert!(col <= n, "variable {v} does not fit in {n} columns");
        let mut p = Self::zero(n);
        p.add_term(Mono::var(v), Rat::one());
        p
    }

    pub fn from_terms(n: u8, terms: impl IntoIterator<Item = (Mono, Rat)>) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn columns(&self) -> u8 {
        self.n
    }

    pub fn with_columns(mut self, n: u8) -> Self {
        self.n = self.n.max(n);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .get(&Mono::one())
                .map_or(false, |c| c.is_one())
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Mono, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Mono) -> Rat {
        self.terms.get(m).cloned().unwrap_or_else(Rat::zero)
    }

    /// Constant value when the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(c) = self.terms.get(&Mono::one()) {
                return Some(c.clone());
            }
        }
        None
    }

    /// Leading term in the graded lexicographic order.
    pub fn leading(&self) -> Option<(&Mono, &Rat)> {
        self.terms.iter().next_back()
    }

    pub fn add_term(&mut self, m: Mono, c: Rat) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.n = out.n.max(other.n);
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero(self.n.max(other.n));
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        MultiPoly {
            n: self.n,
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::one(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                out = out.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    pub fn mul_term(&self, m: &Mono, c: &Rat) -> Self {
        let mut out = Self::zero(self.n);
        for (m1, c1) in &self.terms {
            out.add_term(m1.mul(m), c1 * c);
        }
        out
    }

    /// Exact quotient `self / den`, by iterated leading-term elimination in
    /// the graded lexicographic order.
    ///
    /// Fails with `NonExactDivision` when no polynomial quotient exists.
    pub fn exact_div(&self, den: &Self) -> Result<Self, ExactError> {
        assert!(!den.is_zero(), "division by the zero polynomial");
        let (dm, dc) = den.leading().expect("nonzero denominator");
        let mut rem = self.clone();
        let mut quo = Self::zero(self.n.max(den.n));
        while let Some((rm, rc)) = rem.leading() {
            let m = rm.try_div(dm).ok_or(ExactError::NonExactDivision)?;
            let c = rc / dc;
            rem = rem.sub(&den.mul_term(&m, &c));
            quo.add_term(m, c);
        }
        Ok(quo)
    }

    /// Largest column index appearing in any variable.
    pub fn max_col(&self) -> u8 {
        self.terms.keys().map(Mono::max_col).max().unwrap_or(0)
    }

    /// Stable byte encoding of the canonical form, for keys and hashes.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        self.to_string().into_bytes()
    }
}

/// Root-lattice grading: `wt(x_{ij}) = alpha_i + ... + alpha_{j-1}`.
///
/// Returns the coordinates of the monomial's weight in the simple-root basis
/// `alpha_1 .. alpha_{n-1}`.
pub fn weight_of_monomial(m: &Mono, n: u8) -> Vec<i64> {
    let mut w = vec![0i64; (n as usize).saturating_sub(1)];
    for &(v, e) in m.factors() {
        for k in v.row..v.col {
            w[(k - 1) as usize] += e as i64;
        }
    }
    w
}

/// True when every monomial of `p` has the same root-lattice weight.
pub fn is_homogeneous(p: &MultiPoly, n: u8) -> bool {
    let mut it = p.terms();
    let first = match it.next() {
        Some((m, _)) => weight_of_monomial(m, n),
        None => return true,
    };
    it.all(|(m, _)| weight_of_monomial(m, n) == first)
}

// ---------------------------------------------------------------------------
// text format: terms like `-3 x_1_2^2 x_3_5` joined by `+` / `-`
// ---------------------------------------------------------------------------

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if idx == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs} {m}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for MultiPoly {
    type Err = ExactError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(MultiPoly::zero(0));
        }
        let bad = |what: &str| ExactError::Parse(format!("{what} in polynomial {s:?}"));

        let mut p = MultiPoly::zero(0);
        // split into signed chunks
        let mut chunks: Vec<(bool, String)> = Vec::new();
        let mut cur = String::new();
        let mut sign = false;
        let mut started = false;
        for ch in s.chars() {
            match ch {
                '+' | '-' if started && !cur.trim().is_empty() => {
                    chunks.push((sign, std::mem::take(&mut cur)));
                    sign = ch == '-';
                }
                '+' | '-' if !started || cur.trim().is_empty() => {
                    if ch == '-' {
                        sign = !sign;
                    }
                    started = true;
                }
                _ => {
                    started = true;
                    cur.push(ch);
                }
            }
        }
        if !cur.trim().is_empty() {
            chunks.push((sign, cur));
        }
        for (neg, chunk) in chunks {
            let mut coeff = Rat::one();
            let mut factors: Vec<(Var, u32)> = Vec::new();
            for tok in chunk.split(|c: char| c.is_whitespace() || c == '*') {
                let tok = tok.trim();
                if tok.is_empty() {
                    continue;
                }
                if let Some(rest) = tok.strip_prefix("x_") {
                    let (var_part, exp) = match rest.split_once('^') {
                        Some((v, e)) => {
                            (v, e.parse::<u32>().map_err(|_| bad("bad exponent"))?)
                        }
                        None => (rest, 1),
                    };
                    let (i, j) = var_part
                        .split_once('_')
                        .ok_or_else(|| bad("bad variable"))?;
                    let i: u8 = i.parse().map_err(|_| bad("bad variable row"))?;
                    let j: u8 = j.parse().map_err(|_| bad("bad variable column"))?;
                    if !(0 < i && i < j) {
                        return Err(bad("variable indices must satisfy 1 <= i < j"));
                    }
                    factors.push((Var::new(i, j), exp));
                } else {
                    let c: Rat = tok.parse().map_err(|_| bad("bad coefficient"))?;
                    coeff *= c;
                }
            }
            if neg {
                coeff = -coeff;
            }
            p.add_term(Mono::from_factors(factors), coeff);
        }
        let n = p.max_col();
        Ok(p.with_columns(n))
    }
}

// ---------------------------------------------------------------------------
// JSON form: {"terms":[{"c":"-3","e":{"1,2":2,"3,5":1}}]}
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct JsonTerm {
    c: String,
    e: BTreeMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
struct JsonPoly {
    terms: Vec<JsonTerm>,
}

impl MultiPoly {
    pub fn to_json(&self) -> String {
        let terms = self
            .terms
            .iter()
            .rev()
            .map(|(m, c)| JsonTerm {
                c: c.to_string(),
                e: m.factors()
                    .iter()
                    .map(|&(v, e)| (format!("{},{}", v.row, v.col), e))
                    .collect(),
            })
            .collect();
        serde_json::to_string(&JsonPoly { terms }).expect("polynomial serializes")
    }

    pub fn from_json(s: &str) -> Result<Self, ExactError> {
        let parsed: JsonPoly =
            serde_json::from_str(s).map_err(|e| ExactError::Parse(e.to_string()))?;
        let mut p = MultiPoly::zero(0);
        for term in parsed.terms {
            let c: Rat = term
                .c
                .parse()
                .map_err(|_| ExactError::Parse(format!("bad coefficient {:?}", term.c)))?;
            let mut factors = Vec::new();
            for (key, e) in term.e {
                let (i, j) = key
                    .split_once(',')
                    .ok_or_else(|| ExactError::Parse(format!("bad variable key {key:?}")))?;
                let i: u8 = i
                    .trim()
                    .parse()
                    .map_err(|_| ExactError::Parse(format!("bad variable key {key:?}")))?;
                let j: u8 = j
                    .trim()
                    .parse()
                    .map_err(|_| ExactError::Parse(format!("bad variable key {key:?}")))?;
                factors.push((Var::new(i, j), e));
            }
            p.add_term(Mono::from_factors(factors), c);
        }
        let n = p.max_col();
        Ok(p.with_columns(n))
    }
}

impl std::ops::Add for &MultiPoly {
    type Output = MultiPoly;
    fn add(self, rhs: Self) -> MultiPoly {
        MultiPoly::add(self, rhs)
    }
}
impl std::ops::Sub for &MultiPoly {
    type Output = MultiPoly;
    fn sub(self, rhs: Self) -> MultiPoly {
        MultiPoly::sub(self, rhs)
    }
}
impl std::ops::Mul for &MultiPoly {
    type Output = MultiPoly;
    fn mul(self, rhs: Self) -> MultiPoly {
        MultiPoly::mul(self, rhs)
    }
}
impl std::ops::Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        MultiPoly::neg(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn monomial_order_is_graded_lex() {
        let x12 = Mono::var(Var::new(1, 2));
        let x13 = Mono::var(Var::new(1, 3));
        let x23 = Mono::var(Var::new(2, 3));
        assert!(x12.mul(&x23) > x13); // degree wins
        assert!(x12 > x13); // earlier variable with positive exponent wins
        assert!(x13 > x23);
        assert!(x12.pow(2) > x12.mul(&x13));
    }

    #[test]
    fn exact_division_round_trip() {
        let a = p("x_1_2 x_2_3 - x_1_3");
        let b = p("x_1_2^2 + 3 x_1_3 x_2_3 - 1/2");
        let prod = &a * &b;
        assert_eq!(prod.exact_div(&a).unwrap(), b);
        assert_eq!(prod.exact_div(&b).unwrap(), a);
    }

    #[test]
    fn division_examples() {
        // (x13 + (x12 x23 - x13)) / x12 = x23
        let num = &p("x_1_3") + &p("x_1_2 x_2_3 - x_1_3");
        let q = num.exact_div(&p("x_1_2")).unwrap();
        assert_eq!(q, p("x_2_3"));

        // p / 1 = p
        let any = p("5 x_1_4^3 - 2/7 x_2_3");
        assert_eq!(any.exact_div(&MultiPoly::one(4)).unwrap(), any);

        // x13 / x12 fails
        assert!(matches!(
            p("x_1_3").exact_div(&p("x_1_2")),
            Err(ExactError::NonExactDivision)
        ));
    }

    #[test]
    fn display_parse_round_trip() {
        let q = p("-3 x_1_2^2 x_3_5 + x_1_3 - 1/2");
        assert_eq!(q.to_string().parse::<MultiPoly>().unwrap(), q);
        assert_eq!(q.to_string(), "-3 x_1_2^2 x_3_5 + x_1_3 - 1/2");
        assert_eq!(MultiPoly::zero(3).to_string(), "0");
        assert_eq!(p("0"), MultiPoly::zero(0));
    }

    #[test]
    fn json_round_trip() {
        let q = p("-3 x_1_2^2 x_3_5 + 5/2");
        let json = q.to_json();
        assert!(json.contains("\"1,2\":2"));
        assert_eq!(MultiPoly::from_json(&json).unwrap(), q);
    }

    #[test]
    fn weights() {
        let n = 3;
        assert_eq!(weight_of_monomial(&Mono::var(Var::new(1, 2)), n), vec![1, 0]);
        assert_eq!(weight_of_monomial(&Mono::var(Var::new(1, 3)), n), vec![1, 1]);
        let m = Mono::var(Var::new(1, 2)).mul(&Mono::var(Var::new(2, 3)));
        assert_eq!(weight_of_monomial(&m, n), vec![1, 1]);
        assert!(is_homogeneous(&p("x_1_2 x_2_3 - x_1_3"), 3));
        assert!(!is_homogeneous(&p("x_1_2 + x_1_3"), 3));
    }
}
