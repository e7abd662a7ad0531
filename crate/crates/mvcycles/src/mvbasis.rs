//! A registry of MV-polynomials indexed by Kostant pictures, triangular
//! expansion of arbitrary polynomials in that basis, and convolution
//! structure constants computed through the expansion.

use std::collections::BTreeMap;

use num::{One, Zero};

use crate::detform::{self, DetformError};
use crate::exactalg::{Mono, MultiPoly, Rat};
use crate::kostant::{compare_plain, picture_of_monomial, KostantPicture, PictureOrd};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum BasisError {
    #[error(transparent)]
    Detform(#[from] DetformError),
    #[error("entry for {picture} violates triangularity: {reason}")]
    InvariantViolation { picture: String, reason: String },
    #[error("no basis entry for picture {0}")]
    MissingBasisEntry(String),
    #[error("no unique maximal picture among the monomials")]
    NoUniqueMaximum,
    #[error("the zero polynomial has no leading picture")]
    ZeroPolynomial,
    #[error("parse error: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Provenance {
    Determinantal,
    Ingested,
}

/// Picture-indexed table of MV-polynomials. Every entry `P` satisfies the
/// triangularity invariant: each monomial's picture is `<=` the index
/// picture, and the index picture's own monomial has coefficient 1.
#[derive(Clone, Debug, Default)]
pub struct BasisTable {
    entries: BTreeMap<KostantPicture, (MultiPoly, Provenance)>,
}

impl BasisTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, p: &KostantPicture) -> Option<&MultiPoly> {
        self.entries.get(p).map(|(poly, _)| poly)
    }

    pub fn provenance(&self, p: &KostantPicture) -> Option<Provenance> {
        self.entries.get(p).map(|&(_, prov)| prov)
    }

    pub fn pictures(&self) -> impl Iterator<Item = &KostantPicture> {
        self.entries.keys()
    }

    pub fn contains(&self, p: &KostantPicture) -> bool {
        self.entries.contains_key(p)
    }

    fn validate(p: &KostantPicture, poly: &MultiPoly) -> Result<(), BasisError> {
        let bad = |reason: String| BasisError::InvariantViolation {
            picture: p.to_string(),
            reason,
        };
        let own = p.monomial();
        let (own_mono, _) = own.leading().expect("picture monomial");
        let c = poly.coeff(own_mono);
        if !c.is_one() {
            return Err(bad(format!("own monomial has coefficient {c}")));
        }
        for (m, _) in poly.terms() {
            let q = picture_of_monomial(p.n(), m);
            match compare_plain(&q, p) {
                PictureOrd::Less | PictureOrd::Equal => {}
                other => {
                    return Err(bad(format!(
                        "monomial {m} has picture {q} which compares {other} to the index"
                    )))
                }
            }
        }
        Ok(())
    }

    /// Register the masked-determinant polynomial for `p`.
    pub fn register_determinantal(&mut self, p: &KostantPicture) -> Result<(), BasisError> {
        if self.contains(p) {
            return Ok(());
        }
        let poly = detform::mv_det(p)?;
        Self::validate(p, &poly)?;
        self.entries
            .insert(p.clone(), (poly, Provenance::Determinantal));
        Ok(())
    }

    /// Register an externally supplied polynomial (same invariant checks).
    pub fn register_ingested(
        &mut self,
        p: &KostantPicture,
        poly: MultiPoly,
    ) -> Result<(), BasisError> {
        Self::validate(p, &poly)?;
        self.entries.insert(p.clone(), (poly, Provenance::Ingested));
        Ok(())
    }

    /// Try to register every picture of the given root-lattice weight whose
    /// graph is acyclic; returns the pictures that had to be skipped.
    pub fn register_weight_class(&mut self, n: u8, weight: &[i64]) -> Vec<KostantPicture> {
        let mut skipped = Vec::new();
        for p in crate::kostant::pictures_with_weight(n, weight) {
            if self.register_determinantal(&p).is_err() {
                skipped.push(p);
            }
        }
        skipped
    }

    /// Parse lines of the form `<picture> := <polynomial>`.
    pub fn ingest(&mut self, text: &str) -> Result<usize, BasisError> {
        let mut count = 0;
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (pic, poly) = line
                .split_once(":=")
                .ok_or_else(|| BasisError::Parse(format!("missing := in {line:?}")))?;
            let picture: KostantPicture = pic
                .trim()
                .parse()
                .map_err(|e: crate::kostant::KostantError| BasisError::Parse(e.to_string()))?;
            let poly: MultiPoly = poly
                .trim()
                .parse()
                .map_err(|e: crate::exactalg::ExactError| BasisError::Parse(e.to_string()))?;
            self.register_ingested(&picture, poly.with_columns(picture.n()))?;
            count += 1;
        }
        Ok(count)
    }

    pub fn dump(&self) -> String {
        let mut out = String::new();
        for (p, (poly, _)) in &self.entries {
            out.push_str(&format!("{p} := {poly}\n"));
        }
        out
    }
}

/// A maximal monomial of `f` under the picture order (no other monomial's
/// picture is strictly greater).
fn maximal_monomial(n: u8, f: &MultiPoly) -> Mono {
    let monos: Vec<&Mono> = f.terms().map(|(m, _)| m).collect();
    'outer: for m in &monos {
        let pm = picture_of_monomial(n, m);
        for other in &monos {
            if other == m {
                continue;
            }
            if compare_plain(&picture_of_monomial(n, other), &pm) == PictureOrd::Greater {
                continue 'outer;
            }
        }
        return (*m).clone();
    }
    unreachable!("a finite nonempty set has a maximal element")
}

/// Expand `f` over the table: coefficients `c` with `f = sum c_p table[p]`,
/// found by repeatedly peeling a maximal monomial. Fails naming the first
/// picture the table is missing.
pub fn expand(
    table: &BasisTable,
    f: &MultiPoly,
) -> Result<BTreeMap<KostantPicture, Rat>, BasisError> {
    let mut out: BTreeMap<KostantPicture, Rat> = BTreeMap::new();
    let mut rem = f.clone();
    let n = {
        let mut n = rem.max_col();
        for p in table.pictures() {
            n = n.max(p.n());
        }
        n.max(rem.columns()).max(1)
    };
    while !rem.is_zero() {
        let mono = maximal_monomial(n, &rem);
        let p = picture_of_monomial(n, &mono);
        let entry = table
            .get(&p)
            .ok_or_else(|| BasisError::MissingBasisEntry(p.to_string()))?;
        let c = rem.coeff(&mono);
        rem = rem.sub(&entry.scale(&c));
        debug_assert!(rem.coeff(&mono).is_zero());
        let total = out.entry(p).or_insert_with(Rat::zero);
        *total += c;
        if total.is_zero() {
            // possible only through cancellation across peels of equal pictures
            out.retain(|_, v| !v.is_zero());
        }
    }
    Ok(out)
}

/// Structure constants of the product of two registered classes:
/// `expand(table[p] * table[q])`.
pub fn convolve(
    table: &BasisTable,
    p: &KostantPicture,
    q: &KostantPicture,
) -> Result<BTreeMap<KostantPicture, Rat>, BasisError> {
    let fp = table
        .get(p)
        .ok_or_else(|| BasisError::MissingBasisEntry(p.to_string()))?;
    let fq = table
        .get(q)
        .ok_or_else(|| BasisError::MissingBasisEntry(q.to_string()))?;
    expand(table, &fp.mul(fq))
}

/// The unique maximal picture among the monomials of `f`.
pub fn leading_picture(f: &MultiPoly) -> Result<KostantPicture, BasisError> {
    if f.is_zero() {
        return Err(BasisError::ZeroPolynomial);
    }
    let n = f.max_col().max(f.columns()).max(1);
    let mono = maximal_monomial(n, f);
    let p = picture_of_monomial(n, &mono);
    // maximal but possibly not unique: every other monomial must be below
    for (m, _) in f.terms() {
        if m == &mono {
            continue;
        }
        let q = picture_of_monomial(n, m);
        match compare_plain(&q, &p) {
            PictureOrd::Less => {}
            _ => return Err(BasisError::NoUniqueMaximum),
        }
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::rat;
    use crate::kostant::Loop;

    fn pic(n: u8, loops: &[(u8, u8)]) -> KostantPicture {
        KostantPicture::new(n, loops.iter().map(|&(l, r)| Loop::new(l, r)).collect())
    }

    fn n3_table() -> BasisTable {
        let mut t = BasisTable::new();
        let skipped = t.register_weight_class(3, &[1, 1]);
        assert!(skipped.is_empty());
        t.register_determinantal(&pic(3, &[(1, 2)])).unwrap();
        t.register_determinantal(&pic(3, &[(2, 3)])).unwrap();
        t
    }

    #[test]
    fn registration_examples() {
        let mut t = BasisTable::new();
        t.register_determinantal(&pic(3, &[(1, 3)])).unwrap();
        assert_eq!(t.get(&pic(3, &[(1, 3)])).unwrap(), &"x_1_3".parse().unwrap());
        t.register_determinantal(&pic(3, &[(1, 2), (2, 3)])).unwrap();
        assert_eq!(
            t.get(&pic(3, &[(1, 2), (2, 3)])).unwrap(),
            &"x_1_2 x_2_3 - x_1_3".parse().unwrap()
        );
        assert_eq!(
            t.provenance(&pic(3, &[(1, 3)])),
            Some(Provenance::Determinantal)
        );
    }

    #[test]
    fn expansion_examples() {
        let t = n3_table();
        let p = pic(3, &[(1, 2), (2, 3)]);
        let res = expand(&t, t.get(&p).unwrap()).unwrap();
        assert_eq!(res.len(), 1);
        assert_eq!(res[&p], rat(1));

        let res = expand(&t, &"x_1_2 x_2_3".parse().unwrap()).unwrap();
        assert_eq!(res.len(), 2);
        assert_eq!(res[&p], rat(1));
        assert_eq!(res[&pic(3, &[(1, 3)])], rat(1));

        assert!(expand(&t, &MultiPoly::zero(3)).unwrap().is_empty());
    }

    #[test]
    fn expansion_round_trip() {
        let t = n3_table();
        // f = 2 P_{a1+a2} - 3/5 P_{a13} + 7 P_{a1}
        let f = t
            .get(&pic(3, &[(1, 2), (2, 3)]))
            .unwrap()
            .scale(&rat(2))
            .add(&t.get(&pic(3, &[(1, 3)])).unwrap().scale(&(-rat(3) / rat(5))))
            .add(&t.get(&pic(3, &[(1, 2)])).unwrap().scale(&rat(7)));
        let res = expand(&t, &f).unwrap();
        assert_eq!(res.len(), 3);
        assert_eq!(res[&pic(3, &[(1, 2), (2, 3)])], rat(2));
        assert_eq!(res[&pic(3, &[(1, 3)])], -rat(3) / rat(5));
        assert_eq!(res[&pic(3, &[(1, 2)])], rat(7));
    }

    #[test]
    fn convolution_examples() {
        let t = n3_table();
        let res = convolve(&t, &pic(3, &[(1, 2)]), &pic(3, &[(2, 3)])).unwrap();
        assert_eq!(res.len(), 2);
        assert_eq!(res[&pic(3, &[(1, 2), (2, 3)])], rat(1));
        assert_eq!(res[&pic(3, &[(1, 3)])], rat(1));

        // unit element
        let mut t2 = n3_table();
        t2.register_determinantal(&pic(3, &[])).unwrap();
        let res = convolve(&t2, &pic(3, &[(1, 2)]), &pic(3, &[])).unwrap();
        assert_eq!(res.len(), 1);
        assert_eq!(res[&pic(3, &[(1, 2)])], rat(1));

        // support of x12 * x12 is {2 alpha_1}
        let mut t3 = n3_table();
        t3.register_determinantal(&pic(3, &[(1, 2), (1, 2)])).unwrap();
        let res = convolve(&t3, &pic(3, &[(1, 2)]), &pic(3, &[(1, 2)])).unwrap();
        assert_eq!(res.len(), 1);
        assert_eq!(res[&pic(3, &[(1, 2), (1, 2)])], rat(1));
    }

    #[test]
    fn missing_entry_is_named() {
        let mut t = BasisTable::new();
        t.register_determinantal(&pic(3, &[(1, 2)])).unwrap();
        t.register_determinantal(&pic(3, &[(2, 3)])).unwrap();
        let err = convolve(&t, &pic(3, &[(1, 2)]), &pic(3, &[(2, 3)])).unwrap_err();
        match err {
            BasisError::MissingBasisEntry(s) => {
                assert_eq!(s, pic(3, &[(1, 2), (2, 3)]).to_string())
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn leading_picture_examples() {
        let f: MultiPoly = "x_1_2 x_2_3 - x_1_3".parse().unwrap();
        assert_eq!(leading_picture(&f).unwrap(), pic(3, &[(1, 2), (2, 3)]));
        assert_eq!(
            leading_picture(&"x_2_4".parse().unwrap()).unwrap(),
            pic(4, &[(2, 4)])
        );
        // two incomparable maxima
        let g: MultiPoly = "x_1_2 + x_2_3".parse().unwrap();
        assert!(matches!(
            leading_picture(&g),
            Err(BasisError::NoUniqueMaximum)
        ));
        assert!(matches!(
            leading_picture(&MultiPoly::zero(3)),
            Err(BasisError::ZeroPolynomial)
        ));
    }

    #[test]
    fn ingestion_round_trip() {
        let mut t = n3_table();
        let dumped = t.dump();
        let mut t2 = BasisTable::new();
        let count = t2.ingest(&dumped).unwrap();
        assert_eq!(count, t.len());
        for p in t.pictures() {
            assert_eq!(t2.get(p), t.get(p));
        }
        // invariant violations are rejected
        let mut t3 = BasisTable::new();
        assert!(matches!(
            t3.ingest("n=3; loops=(1,3) := 2 x_1_3"),
            Err(BasisError::InvariantViolation { .. })
        ));
        let _ = t;
    }
}
