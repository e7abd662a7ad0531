//! Laurent polynomials in `t` whose coefficients are `MultiPoly` values
//! (rational scalars embed as constant polynomials).

use std::collections::BTreeMap;
use std::fmt;

use num::Zero;

use super::poly::{Mono, MultiPoly, Rat, Var};
use super::ExactError;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LaurentPoly {
    terms: BTreeMap<i64, MultiPoly>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn constant(c: Rat) -> Self {
        Self::from_poly(0, MultiPoly::constant(0, c))
    }

    /// `c * t^k`.
    pub fn scalar_term(k: i64, c: Rat) -> Self {
        Self::from_poly(k, MultiPoly::constant(0, c))
    }

    pub fn from_poly(k: i64, p: MultiPoly) -> Self {
        let mut out = Self::zero();
        out.add_term(k, p);
        out
    }

    pub fn from_scalar_terms(terms: impl IntoIterator<Item = (i64, Rat)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, MultiPoly::constant(0, c));
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: i64, p: MultiPoly) {
        if p.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(k) {
            Entry::Vacant(e) => {
                e.insert(p);
            }
            Entry::Occupied(mut e) => {
                let sum = e.get().add(&p);
                if sum.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = sum;
                }
            }
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &MultiPoly)> {
        self.terms.iter().map(|(&k, p)| (k, p))
    }

    /// Coefficient of `t^k`, zero when absent.
    pub fn coeff(&self, k: i64) -> MultiPoly {
        self.terms.get(&k).cloned().unwrap_or_else(|| MultiPoly::zero(0))
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn min_degree(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&k, p) in &other.terms {
            out.add_term(k, p.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        LaurentPoly {
            terms: self.terms.iter().map(|(&k, p)| (k, p.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&k1, p1) in &self.terms {
            for (&k2, p2) in &other.terms {
                out.add_term(k1 + k2, p1.mul(p2));
            }
        }
        out
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::constant(num::One::one());
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

    /// True when every coefficient is a rational constant.
    pub fn is_scalar(&self) -> bool {
        self.terms.values().all(|p| p.as_constant().is_some())
    }

    pub fn scalar_terms(&self) -> Option<BTreeMap<i64, Rat>> {
        self.terms
            .iter()
            .map(|(&k, p)| p.as_constant().map(|c| (k, c)))
            .collect()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (&k, p) in &self.terms {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if k == 0 {
                write!(f, "({p})")?;
            } else {
                write!(f, "({p}) t^{k}")?;
            }
        }
        Ok(())
    }
}

/// Coefficient of `t^k` in `p`, zero when absent.
pub fn t_coefficient(p: &LaurentPoly, k: i64) -> MultiPoly {
    p.coeff(k)
}

/// Substitute Laurent polynomials for the variables of `p`.
///
/// Every variable appearing in `p` must be present in `entries`; the
/// unitriangular conventions (`x_ii = 1`, `x_ij = 0` for `i > j`) never
/// produce variables, so they need no entries.
pub fn evaluate(
    p: &MultiPoly,
    entries: &BTreeMap<Var, LaurentPoly>,
) -> Result<LaurentPoly, ExactError> {
    let mut out = LaurentPoly::zero();
    let mut pow_cache: BTreeMap<(Var, u32), LaurentPoly> = BTreeMap::new();
    for (m, c) in p.terms() {
        let mut term = LaurentPoly::constant(c.clone());
        for &(v, e) in m.factors() {
            let entry = entries.get(&v).ok_or(ExactError::MissingEntry {
                row: v.row,
                col: v.col,
            })?;
            let powed = pow_cache
                .entry((v, e))
                .or_insert_with(|| entry.pow(e))
                .clone();
            term = term.mul(&powed);
        }
        for (k, q) in term.terms() {
            out.add_term(k, q.clone());
        }
    }
    Ok(out)
}

/// Evaluate a single monomial; used by tests and the golden checks.
pub fn evaluate_mono(
    m: &Mono,
    entries: &BTreeMap<Var, LaurentPoly>,
) -> Result<LaurentPoly, ExactError> {
    let p = MultiPoly::from_terms(0, [(m.clone(), num::One::one())]);
    evaluate(&p, entries)
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
}

impl std::ops::Add for LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: Self) -> Self {
        LaurentPoly::add(&self, &rhs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::rat;

    #[test]
    fn coefficients_and_identity() {
        // t^-1 a + b, symbolically: use x_1_2 for a and x_1_3 for b
        let a: MultiPoly = "x_1_2".parse().unwrap();
        let b: MultiPoly = "x_1_3".parse().unwrap();
        let mut p = LaurentPoly::from_poly(-1, a.clone());
        p.add_term(0, b);
        assert_eq!(t_coefficient(&p, -1), a);
        assert_eq!(t_coefficient(&LaurentPoly::zero(), 5), MultiPoly::zero(0));
    }

    #[test]
    fn evaluate_simple() {
        let p: MultiPoly = "x_1_2 x_2_3 - x_1_3".parse().unwrap();
        // all-zero entries annihilate every variable
        let mut entries = BTreeMap::new();
        entries.insert(Var::new(1, 2), LaurentPoly::zero());
        entries.insert(Var::new(2, 3), LaurentPoly::zero());
        entries.insert(Var::new(1, 3), LaurentPoly::zero());
        assert!(evaluate(&p, &entries).unwrap().is_zero());

        // evaluate(x12, {x12 -> t^-1 + 3}) = t^-1 + 3
        let x12: MultiPoly = "x_1_2".parse().unwrap();
        let mut e2 = BTreeMap::new();
        let val = LaurentPoly::from_scalar_terms([(-1, rat(1)), (0, rat(3))]);
        e2.insert(Var::new(1, 2), val.clone());
        assert_eq!(evaluate(&x12, &e2).unwrap(), val);

        // missing entry is reported
        assert!(matches!(
            evaluate(&p, &e2),
            Err(ExactError::MissingEntry { row: 1, col: 3 }) | Err(ExactError::MissingEntry { row: 2, col: 3 })
        ));
    }
}
