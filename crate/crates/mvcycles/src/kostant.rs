//! Kostant pictures and extended pictures: multisets of loops on `n` columns,
//! their highest/lowest coweights, D-statistics, the fusion operation, and
//! the partial order it generates.
//!
//! A loop with left end at column `l` and right end at column `r` stands for
//! the positive root `alpha_l + ... + alpha_{r-1}`; a picture is a formal sum
//! of positive roots. An extended picture carries in addition a base
//! coweight, whose entries (relative to a level `m`) count zero loops.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num::One;
use serde::{Deserialize, Serialize};

use crate::exactalg::{Mono, MultiPoly, Rat, Var};

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum KostantError {
    #[error("loops do not overlap")]
    NotOverlapping,
    #[error("level {level} exceeds base entry {entry} in column {column}")]
    BadLevel { level: i64, entry: i64, column: u8 },
    #[error("picture has {0} loops, above the configured closure limit {1}")]
    LimitExceeded(usize, usize),
    #[error("parse error: {0}")]
    Parse(String),
}

/// A loop spanning columns `left ..= right`, `left < right`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Loop {
    pub left: u8,
    pub right: u8,
}

impl Loop {
    pub fn new(left: u8, right: u8) -> Self {
        assert!(0 < left && left < right, "loop ends must satisfy 1 <= l < r");
        Loop { left, right }
    }

    /// Number of Dynkin dots enclosed.
    pub fn len(&self) -> u8 {
        self.right - self.left
    }

    /// Containment of column intervals (not strict).
    pub fn contains(&self, other: &Loop) -> bool {
        self.left <= other.left && other.right <= self.right
    }

    /// Neither contains the other and they share at least one column.
    pub fn overlaps(&self, other: &Loop) -> bool {
        let (a, b) = if (self.left, self.right) <= (other.left, other.right) {
            (self, other)
        } else {
            (other, self)
        };
        a.left < b.left && b.left <= a.right && a.right < b.right
    }

    pub fn passes_through(&self, column: u8) -> bool {
        self.left <= column && column <= self.right
    }
}

impl fmt::Display for Loop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.left, self.right)
    }
}

/// A multiset of loops on `n` columns, kept sorted for canonical form.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct KostantPicture {
    n: u8,
    loops: Vec<Loop>,
}

impl KostantPicture {
    pub fn new(n: u8, mut loops: Vec<Loop>) -> Self {
        assert!(n >= 1);
        for l in &loops {
            assert!(l.right <= n, "loop {l} does not fit in {n} columns");
        }
        loops.sort();
        KostantPicture { n, loops }
    }

    pub fn empty(n: u8) -> Self {
        Self::new(n, Vec::new())
    }

    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn loops(&self) -> &[Loop] {
        &self.loops
    }

    pub fn num_loops(&self) -> usize {
        self.loops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.loops.is_empty()
    }

    /// Multiset union of the loops of both pictures.
    pub fn add(&self, other: &KostantPicture) -> KostantPicture {
        assert_eq!(self.n, other.n, "pictures live on different column counts");
        let mut loops = self.loops.clone();
        loops.extend_from_slice(&other.loops);
        KostantPicture::new(self.n, loops)
    }

    /// Count of loops with left end at each column (length `n`).
    pub fn left_end_counts(&self) -> Vec<i64> {
        let mut c = vec![0i64; self.n as usize];
        for l in &self.loops {
            c[(l.left - 1) as usize] += 1;
        }
        c
    }

    pub fn right_end_counts(&self) -> Vec<i64> {
        let mut c = vec![0i64; self.n as usize];
        for l in &self.loops {
            c[(l.right - 1) as usize] += 1;
        }
        c
    }

    /// Root-lattice weight in the simple-root basis `alpha_1..alpha_{n-1}`.
    pub fn weight(&self) -> Vec<i64> {
        let mut w = vec![0i64; (self.n as usize).saturating_sub(1)];
        for l in &self.loops {
            for k in l.left..l.right {
                w[(k - 1) as usize] += 1;
            }
        }
        w
    }

    /// The monomial `x^p = prod_L x_{l(L), r(L)}`.
    pub fn monomial(&self) -> MultiPoly {
        let factors: Vec<(Var, u32)> = self
            .loops
            .iter()
            .map(|l| (Var::new(l.left, l.right), 1))
            .collect();
        MultiPoly::from_terms(self.n, [(Mono::from_factors(factors), Rat::one())])
    }
}

/// Inverse of [`KostantPicture::monomial`].
pub fn picture_of_monomial(n: u8, m: &Mono) -> KostantPicture {
    let mut loops = Vec::new();
    for &(v, e) in m.factors() {
        for _ in 0..e {
            loops.push(Loop::new(v.row, v.col));
        }
    }
    KostantPicture::new(n, loops)
}

/// An n-tuple of integers.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
pub struct Coweight(pub Vec<i64>);

impl Coweight {
    pub fn zero(n: u8) -> Self {
        Coweight(vec![0; n as usize])
    }

    pub fn n(&self) -> u8 {
        self.0.len() as u8
    }

    pub fn add(&self, other: &Coweight) -> Coweight {
        Coweight(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn min_entry(&self) -> i64 {
        self.0.iter().copied().min().expect("nonempty coweight")
    }
}

impl fmt::Display for Coweight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

/// A picture together with a base coweight.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ExtendedPicture {
    pub picture: KostantPicture,
    pub base: Coweight,
}

impl ExtendedPicture {
    pub fn new(picture: KostantPicture, base: Coweight) -> Self {
        assert_eq!(picture.n(), base.n(), "picture and base disagree on n");
        ExtendedPicture { picture, base }
    }

    pub fn n(&self) -> u8 {
        self.picture.n()
    }

    /// Highest coweight: base plus per-column left-end counts.
    pub fn highest_coweight(&self) -> Coweight {
        let mut v = self.base.0.clone();
        for (i, c) in self.picture.left_end_counts().iter().enumerate() {
            v[i] += c;
        }
        Coweight(v)
    }

    /// Lowest coweight: base plus per-column right-end counts.
    pub fn lowest_coweight(&self) -> Coweight {
        let mut v = self.base.0.clone();
        for (i, c) in self.picture.right_end_counts().iter().enumerate() {
            v[i] += c;
        }
        Coweight(v)
    }
}

/// Both coweights at once, `(highest, lowest)`.
pub fn coweights(p: &ExtendedPicture) -> (Coweight, Coweight) {
    (p.highest_coweight(), p.lowest_coweight())
}

/// The numbers `d_ij`: loops (zero loops included, relative to level `m`)
/// confined to columns `i ..= j`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DStats {
    pub m: i64,
    n: u8,
    d: Vec<i64>, // indexed by pairs 1 <= i <= j <= n
}

impl DStats {
    fn idx(&self, i: u8, j: u8) -> usize {
        debug_assert!(1 <= i && i <= j && j <= self.n);
        let i = (i - 1) as usize;
        let j = (j - 1) as usize;
        i * (self.n as usize) - i * (i + 1) / 2 + j
    }

    pub fn get(&self, i: u8, j: u8) -> i64 {
        self.d[self.idx(i, j)]
    }

    /// `>=` in every entry and `>` in at least one.
    pub fn strictly_dominates(&self, other: &DStats) -> bool {
        assert_eq!(self.n, other.n);
        assert_eq!(self.m, other.m, "D-statistics compared at different levels");
        let mut strict = false;
        for (a, b) in self.d.iter().zip(&other.d) {
            if a < b {
                return false;
            }
            if a > b {
                strict = true;
            }
        }
        strict
    }

    /// Recover per-interval loop multiplicities by inclusion-exclusion;
    /// diagonal entries give zero-loop counts (base minus level).
    pub fn multiplicity(&self, i: u8, j: u8) -> i64 {
        let d = |a: u8, b: u8| -> i64 {
            if a > b || b > self.n {
                0
            } else {
                self.get(a, b)
            }
        };
        d(i, j) - d(i + 1, j) - d(i, j - 1) + d(i + 1, j - 1)
    }
}

/// D-statistics of `p` at reference level `m` (which must not exceed any base
/// entry): real loops inside `[i, j]` plus zero loops `base_k - m` for
/// `i <= k <= j`.
pub fn d_stats(p: &ExtendedPicture, m: i64) -> Result<DStats, KostantError> {
    let n = p.n();
    for (k, &b) in p.base.0.iter().enumerate() {
        if m > b {
            return Err(KostantError::BadLevel {
                level: m,
                entry: b,
                column: (k + 1) as u8,
            });
        }
    }
    let mut d = Vec::with_capacity((n as usize) * (n as usize + 1) / 2);
    for i in 1..=n {
        for j in i..=n {
            let real = p
                .picture
                .loops()
                .iter()
                .filter(|l| i <= l.left && l.right <= j)
                .count() as i64;
            let zero: i64 = (i..=j).map(|k| p.base.0[(k - 1) as usize] - m).sum();
            d.push(real + zero);
        }
    }
    Ok(DStats { m, n, d })
}

/// Replace overlapping loops `a`, `b` by their union and intersection. An
/// intersection spanning a single column becomes a zero loop: the base entry
/// at that column goes up by one. Highest and lowest coweights are unchanged.
pub fn fuse(p: &ExtendedPicture, a: Loop, b: Loop) -> Result<ExtendedPicture, KostantError> {
    let mut loops = p.picture.loops().to_vec();
    let pos_a = loops
        .iter()
        .position(|&l| l == a)
        .unwrap_or_else(|| panic!("loop {a} not in picture"));
    loops.swap_remove(pos_a);
    let pos_b = loops
        .iter()
        .position(|&l| l == b)
        .unwrap_or_else(|| panic!("loop {b} not in picture"));
    loops.swap_remove(pos_b);

    if !a.overlaps(&b) {
        return Err(KostantError::NotOverlapping);
    }
    let (a, b) = if (a.left, a.right) <= (b.left, b.right) {
        (a, b)
    } else {
        (b, a)
    };
    loops.push(Loop::new(a.left, b.right));
    let mut base = p.base.clone();
    if b.left < a.right {
        loops.push(Loop::new(b.left, a.right));
    } else {
        base.0[(b.left - 1) as usize] += 1;
    }
    Ok(ExtendedPicture::new(
        KostantPicture::new(p.n(), loops),
        base,
    ))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PictureOrd {
    Less,
    Equal,
    Greater,
    Incomparable,
}

impl fmt::Display for PictureOrd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PictureOrd::Less => "LESS",
            PictureOrd::Equal => "EQUAL",
            PictureOrd::Greater => "GREATER",
            PictureOrd::Incomparable => "INCOMPARABLE",
        };
        write!(f, "{s}")
    }
}

/// The fusion order, decided through D-statistics: `p > q` iff both coweight
/// pairs agree and `D(q) > D(p)` at a common level.
pub fn compare(p: &ExtendedPicture, q: &ExtendedPicture) -> PictureOrd {
    assert_eq!(p.n(), q.n(), "pictures live on different column counts");
    if p == q {
        return PictureOrd::Equal;
    }
    if coweights(p) != coweights(q) {
        return PictureOrd::Incomparable;
    }
    let m = p.base.min_entry().min(q.base.min_entry());
    let dp = d_stats(p, m).expect("level at most both minima");
    let dq = d_stats(q, m).expect("level at most both minima");
    if dq.strictly_dominates(&dp) {
        PictureOrd::Greater
    } else if dp.strictly_dominates(&dq) {
        PictureOrd::Less
    } else {
        PictureOrd::Incomparable
    }
}

/// Order on plain pictures: `p > q` iff some base choices align both coweight
/// pairs and the extended comparison says so. Bases can be aligned exactly
/// when the root-lattice weights agree.
pub fn compare_plain(p: &KostantPicture, q: &KostantPicture) -> PictureOrd {
    assert_eq!(p.n(), q.n(), "pictures live on different column counts");
    if p == q {
        return PictureOrd::Equal;
    }
    if p.weight() != q.weight() {
        return PictureOrd::Incomparable;
    }
    let base_p = Coweight::zero(p.n());
    let base_q = Coweight(
        p.left_end_counts()
            .iter()
            .zip(q.left_end_counts())
            .map(|(a, b)| a - b)
            .collect(),
    );
    compare(
        &ExtendedPicture::new(p.clone(), base_p),
        &ExtendedPicture::new(q.clone(), base_q),
    )
}

/// All pictures `<=` the given one, by exhaustive closure under single
/// fusions. The loop count is capped to keep the closure tractable.
pub fn downset(
    p: &ExtendedPicture,
    max_loops: usize,
) -> Result<BTreeSet<ExtendedPicture>, KostantError> {
    if p.picture.num_loops() > max_loops {
        return Err(KostantError::LimitExceeded(
            p.picture.num_loops(),
            max_loops,
        ));
    }
    let mut seen: BTreeSet<ExtendedPicture> = BTreeSet::new();
    let mut frontier = vec![p.clone()];
    seen.insert(p.clone());
    while let Some(cur) = frontier.pop() {
        let loops = cur.picture.loops();
        for i in 0..loops.len() {
            for j in i + 1..loops.len() {
                if loops[i].overlaps(&loops[j]) {
                    let next = fuse(&cur, loops[i], loops[j]).expect("checked overlap");
                    if seen.insert(next.clone()) {
                        frontier.push(next);
                    }
                }
            }
        }
    }
    Ok(seen)
}

/// All Kostant pictures on `n` columns with the given root-lattice weight
/// (simple-root coordinates, entries >= 0): Kostant partition enumeration by
/// choosing a multiplicity for each positive root in turn.
pub fn pictures_with_weight(n: u8, weight: &[i64]) -> Vec<KostantPicture> {
    assert_eq!(weight.len(), (n as usize).saturating_sub(1));
    let mut out = Vec::new();
    if weight.iter().any(|&w| w < 0) {
        return out;
    }
    let roots: Vec<Loop> = (1..n)
        .flat_map(|l| (l + 1..=n).map(move |r| Loop::new(l, r)))
        .collect();
    fn rec(
        n: u8,
        roots: &[Loop],
        idx: usize,
        rem: &mut [i64],
        loops: &mut Vec<Loop>,
        out: &mut Vec<KostantPicture>,
    ) {
        if idx == roots.len() {
            if rem.iter().all(|&w| w == 0) {
                out.push(KostantPicture::new(n, loops.clone()));
            }
            return;
        }
        let l = roots[idx];
        let max_mult = (l.left..l.right)
            .map(|k| rem[(k - 1) as usize])
            .min()
            .unwrap_or(0);
        for mult in 0..=max_mult {
            if mult > 0 {
                for k in l.left..l.right {
                    rem[(k - 1) as usize] -= 1;
                }
                loops.push(l);
            }
            rec(n, roots, idx + 1, rem, loops, out);
        }
        for _ in 0..max_mult {
            loops.pop();
        }
        for k in l.left..l.right {
            rem[(k - 1) as usize] += max_mult;
        }
    }
    let mut rem = weight.to_vec();
    let mut loops = Vec::new();
    rec(n, &roots, 0, &mut rem, &mut loops, &mut out);
    out
}

// ---------------------------------------------------------------------------
// text format: `n=6; loops=(1,5)(2,3)(3,5)` [ `; base=(1,-2,...)` ]
// ---------------------------------------------------------------------------

impl fmt::Display for KostantPicture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n={}; loops=", self.n)?;
        for l in &self.loops {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl fmt::Display for ExtendedPicture {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}; base={}", self.picture, self.base)
    }
}

fn parse_loops(n: u8, s: &str) -> Result<Vec<Loop>, KostantError> {
    let s = s.trim();
    let mut loops = Vec::new();
    for part in s.split(')') {
        let part = part.trim().trim_start_matches('(').trim();
        if part.is_empty() {
            continue;
        }
        let (l, r) = part
            .split_once(',')
            .ok_or_else(|| KostantError::Parse(format!("bad loop {part:?}")))?;
        let l: u8 = l
            .trim()
            .parse()
            .map_err(|_| KostantError::Parse(format!("bad loop {part:?}")))?;
        let r: u8 = r
            .trim()
            .parse()
            .map_err(|_| KostantError::Parse(format!("bad loop {part:?}")))?;
        if !(0 < l && l < r && r <= n) {
            return Err(KostantError::Parse(format!(
                "loop ({l},{r}) out of range for n={n}"
            )));
        }
        loops.push(Loop::new(l, r));
    }
    Ok(loops)
}

fn parse_coweight(s: &str) -> Result<Coweight, KostantError> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let vals: Result<Vec<i64>, _> = s.split(',').map(|v| v.trim().parse::<i64>()).collect();
    vals.map(Coweight)
        .map_err(|_| KostantError::Parse(format!("bad coweight {s:?}")))
}

/// Parse either a plain or an extended picture; the base is `Some` only when
/// present in the input.
pub fn parse_picture(s: &str) -> Result<(KostantPicture, Option<Coweight>), KostantError> {
    let mut n: Option<u8> = None;
    let mut loops_str: Option<String> = None;
    let mut base: Option<Coweight> = None;
    for field in s.split(';') {
        let field = field.trim();
        if field.is_empty() {
            continue;
        }
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| KostantError::Parse(format!("bad field {field:?}")))?;
        match key.trim() {
            "n" => {
                n = Some(
                    value
                        .trim()
                        .parse()
                        .map_err(|_| KostantError::Parse(format!("bad n {value:?}")))?,
                )
            }
            "loops" => loops_str = Some(value.to_string()),
            "base" => base = Some(parse_coweight(value)?),
            other => return Err(KostantError::Parse(format!("unknown field {other:?}"))),
        }
    }
    let n = n.ok_or_else(|| KostantError::Parse("missing n".into()))?;
    let loops = parse_loops(n, &loops_str.unwrap_or_default())?;
    if let Some(b) = &base {
        if b.n() != n {
            return Err(KostantError::Parse(format!(
                "base has {} entries, expected {n}",
                b.n()
            )));
        }
    }
    Ok((KostantPicture::new(n, loops), base))
}

impl FromStr for KostantPicture {
    type Err = KostantError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, _) = parse_picture(s)?;
        Ok(p)
    }
}

impl FromStr for ExtendedPicture {
    type Err = KostantError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (p, base) = parse_picture(s)?;
        let base = base.unwrap_or_else(|| Coweight::zero(p.n()));
        Ok(ExtendedPicture::new(p, base))
    }
}

#[derive(Serialize, Deserialize)]
struct JsonPicture {
    n: u8,
    loops: Vec<(u8, u8)>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base: Option<Vec<i64>>,
}

impl KostantPicture {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&JsonPicture {
            n: self.n,
            loops: self.loops.iter().map(|l| (l.left, l.right)).collect(),
            base: None,
        })
        .expect("picture serializes")
    }
}

impl ExtendedPicture {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&JsonPicture {
            n: self.n(),
            loops: self
                .picture
                .loops()
                .iter()
                .map(|l| (l.left, l.right))
                .collect(),
            base: Some(self.base.0.clone()),
        })
        .expect("picture serializes")
    }
}

pub fn picture_from_json(s: &str) -> Result<(KostantPicture, Option<Coweight>), KostantError> {
    let parsed: JsonPicture =
        serde_json::from_str(s).map_err(|e| KostantError::Parse(e.to_string()))?;
    let loops = parsed
        .loops
        .iter()
        .map(|&(l, r)| {
            if 0 < l && l < r && r <= parsed.n {
                Ok(Loop::new(l, r))
            } else {
                Err(KostantError::Parse(format!(
                    "loop ({l},{r}) out of range for n={}",
                    parsed.n
                )))
            }
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((
        KostantPicture::new(parsed.n, loops),
        parsed.base.map(Coweight),
    ))
}
