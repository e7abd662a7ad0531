//! The cluster algebra structure on `C[N]`: the initial seed of minors of a
//! generic unitriangular matrix, matrix mutation, and breadth-first seed
//! enumeration with canonical deduplication and a resumable cache.
//!
//! Seeds carry `n(n-1)/2` variables of which the first `(n-1)(n-2)/2` are
//! mutable; the rest are frozen and identical across all reachable seeds.

use std::collections::{BTreeSet, HashSet};
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::exactalg::{ExactError, MultiPoly, PolyMatrix};

#[derive(thiserror::Error, Debug)]
pub enum ClusterError {
    #[error("exact division failed during mutation: {0}")]
    Division(#[from] ExactError),
    #[error("cache io: {0}")]
    Io(#[from] std::io::Error),
    #[error("cache format: {0}")]
    Cache(String),
}

/// One cluster: ordered variables (mutable then frozen) and the integer
/// exchange matrix, `rows = all variables`, `columns = mutable variables`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Seed {
    n: u8,
    vars: Vec<MultiPoly>,
    b: Vec<Vec<i64>>,
}

/// 0-based position of the minor on `(a, b)`, `1 <= a < b <= n`.
fn k_index(a: u8, b: u8) -> usize {
    (b as usize) * (b as usize - 1) / 2 - a as usize
}

impl Seed {
    pub fn n(&self) -> u8 {
        self.n
    }

    pub fn num_vars(&self) -> usize {
        self.vars.len()
    }

    pub fn num_mutable(&self) -> usize {
        let n = self.n as usize;
        (n - 1) * (n - 2) / 2
    }

    pub fn vars(&self) -> &[MultiPoly] {
        &self.vars
    }

    pub fn mutable_vars(&self) -> &[MultiPoly] {
        &self.vars[..self.num_mutable()]
    }

    pub fn frozen_vars(&self) -> &[MultiPoly] {
        &self.vars[self.num_mutable()..]
    }

    pub fn exchange_matrix(&self) -> &[Vec<i64>] {
        &self.b
    }

    /// Canonical key: the sorted multiset of mutable variables. Frozen
    /// variables are shared by every reachable seed and carry no information.
    pub fn cluster_key(&self) -> ClusterKey {
        let mut vars: Vec<Vec<u8>> = self
            .mutable_vars()
            .iter()
            .map(|p| p.canonical_bytes())
            .collect();
        vars.sort();
        ClusterKey(vars)
    }

    /// Exchange matrix re-indexed along the sorted order of the mutable
    /// variables; equal keys with unequal canonical matrices indicate that
    /// the variables fail to determine the seed.
    fn canonical_b(&self) -> Vec<Vec<i64>> {
        let m = self.num_mutable();
        let mut perm: Vec<usize> = (0..m).collect();
        perm.sort_by_key(|&i| self.vars[i].canonical_bytes());
        let mut rows: Vec<Vec<i64>> = Vec::with_capacity(self.vars.len());
        for i in 0..self.vars.len() {
            let src_row = if i < m { perm[i] } else { i };
            rows.push(perm.iter().map(|&j| self.b[src_row][j]).collect());
        }
        rows
    }
}

/// Sorted multiset of canonical mutable-variable encodings.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct ClusterKey(Vec<Vec<u8>>);

impl ClusterKey {
    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for v in &self.0 {
            h.update((v.len() as u64).to_le_bytes());
            h.update(v);
        }
        format!("{:x}", h.finalize())
    }
}

/// Minor of the generic unitriangular matrix on rows `1..=b-a` and columns
/// `a+1..=b`; the calibration that makes the smallest minors the matrix
/// entries themselves.
fn initial_minor(n: u8, a: u8, b: u8) -> MultiPoly {
    let size = (b - a) as usize;
    let rows: Vec<Vec<MultiPoly>> = (1..=size as u8)
        .map(|i| {
            (a + 1..=b)
                .map(|j| {
                    if i < j {
                        MultiPoly::var(n, i, j)
                    } else if i == j {
                        MultiPoly::one(n)
                    } else {
                        MultiPoly::zero(n)
                    }
                })
                .collect()
        })
        .collect();
    PolyMatrix::from_rows(rows).determinant()
}

/// The initial seed: variables `c_{k(a,b)} = Delta_{ab}` with `b <= n-1`
/// mutable, and the +-1 exchange pattern on adjacent index pairs.
pub fn initial_seed(n: u8) -> Seed {
    assert!(n >= 3, "the cluster structure needs n >= 3");
    let total = (n as usize) * (n as usize - 1) / 2;
    let mutable = (n as usize - 1) * (n as usize - 2) / 2;
    let mut vars = vec![MultiPoly::zero(n); total];
    for b in 2..=n {
        for a in 1..b {
            vars[k_index(a, b)] = initial_minor(n, a, b);
        }
    }
    let mut bmat = vec![vec![0i64; mutable]; total];
    for b in 2..=n {
        for a in 1..b {
            let row = k_index(a, b);
            let mut set = |a2: i64, b2: i64, val: i64| {
                if a2 >= 1 && b2 > a2 && b2 <= n as i64 {
                    let col = k_index(a2 as u8, b2 as u8);
                    if col < mutable {
                        bmat[row][col] = val;
                    }
                }
            };
            let (a, b) = (a as i64, b as i64);
            set(a - 1, b - 1, 1);
            set(a + 1, b, 1);
            set(a, b + 1, 1);
            set(a + 1, b + 1, -1);
            set(a - 1, b, -1);
            set(a, b - 1, -1);
        }
    }
    Seed {
        n,
        vars,
        b: bmat,
    }
}

/// Mutate at a mutable index: exchange the variable through the binomial
/// exchange relation (the division is exact on every reachable seed) and
/// flip the matrix by the standard rule.
pub fn mutate(s: &Seed, k: usize) -> Result<Seed, ClusterError> {
    assert!(k < s.num_mutable(), "index {k} is not mutable");
    let mut pos = MultiPoly::one(s.n);
    let mut neg = MultiPoly::one(s.n);
    for (i, var) in s.vars.iter().enumerate() {
        let bik = s.b[i][k];
        if bik > 0 {
            pos = pos.mul(&var.pow(bik as u32));
        } else if bik < 0 {
            neg = neg.mul(&var.pow((-bik) as u32));
        }
    }
    let new_var = pos.add(&neg).exact_div(&s.vars[k])?;
    let mut vars = s.vars.clone();
    vars[k] = new_var;
    let rows = s.vars.len();
    let cols = s.num_mutable();
    let mut b = vec![vec![0i64; cols]; rows];
    for i in 0..rows {
        for j in 0..cols {
            b[i][j] = if i == k || j == k {
                -s.b[i][j]
            } else {
                s.b[i][j] + (s.b[i][k].abs() * s.b[k][j] + s.b[i][k] * s.b[k][j].abs()) / 2
            };
        }
    }
    Ok(Seed { n: s.n, vars, b })
}

/// All cluster monomials of a seed up to the given total degree: products
/// over the seed's variables (mutable and frozen) with exponent sum <= D.
pub fn cluster_monomials(s: &Seed, max_degree: u32) -> BTreeSet<MultiPoly> {
    let mut out = BTreeSet::new();
    fn rec(
        vars: &[MultiPoly],
        idx: usize,
        left: u32,
        acc: &MultiPoly,
        out: &mut BTreeSet<MultiPoly>,
    ) {
        out.insert(acc.clone());
        if idx == vars.len() || left == 0 {
            return;
        }
        let mut acc = acc.clone();
        for used in 0..=left {
            if used > 0 {
                acc = acc.mul(&vars[idx]);
            }
            rec(vars, idx + 1, left - used, &acc, out);
            if used == left {
                break;
            }
        }
    }
    rec(s.vars(), 0, max_degree, &MultiPoly::one(s.n), &mut out);
    out
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumerationLimits {
    pub max_seeds: Option<usize>,
    pub max_depth: Option<u32>,
    /// Stop once this many distinct variables have been collected.
    pub target_variables: Option<usize>,
}

#[derive(Debug)]
pub struct Enumeration {
    pub n: u8,
    pub seeds: usize,
    pub variables: BTreeSet<MultiPoly>,
    pub complete: bool,
    pub depth_reached: u32,
    /// Diagnostics such as equal keys with mismatched exchange matrices.
    pub findings: Vec<String>,
    /// All distinct seeds, kept when requested (n <= 5 scale).
    pub kept_seeds: Vec<Seed>,
}

/// Breadth-first closure under mutation with canonical deduplication.
///
/// `keep_seeds` retains every distinct seed in the result (for the finite
/// types); the cache, when given, records one line per seed and is replayed
/// on resume.
pub fn enumerate(
    n: u8,
    limits: EnumerationLimits,
    keep_seeds: bool,
    cache: Option<&Path>,
) -> Result<Enumeration, ClusterError> {
    let mut result = Enumeration {
        n,
        seeds: 0,
        variables: BTreeSet::new(),
        complete: false,
        depth_reached: 0,
        findings: Vec::new(),
        kept_seeds: Vec::new(),
    };
    let mut seen: HashSet<ClusterKey> = HashSet::new();
    let mut canon_b: std::collections::HashMap<ClusterKey, Vec<Vec<i64>>> = Default::default();
    let mut frontier: Vec<Seed> = Vec::new();
    let mut depth = 0u32;

    let mut fresh_cache = false;
    let mut cache_out = match cache {
        Some(path) => {
            let mut resumed = Vec::new();
            if path.exists() {
                resumed = read_cache(path, n)?;
            }
            if resumed.is_empty() {
                fresh_cache = true;
                let s0 = initial_seed(n);
                admit(
                    s0,
                    0,
                    &mut seen,
                    &mut canon_b,
                    &mut frontier,
                    &mut result,
                    keep_seeds,
                );
            } else {
                // a truncated run may have left any seed unexpanded, so the
                // whole resumed set goes back on the frontier
                depth = resumed.iter().map(|(_, d)| *d).max().unwrap_or(0);
                for (seed, _) in resumed {
                    let key = seed.cluster_key();
                    if seen.insert(key.clone()) {
                        canon_b.insert(key, seed.canonical_b());
                        result.seeds += 1;
                        for v in seed.vars() {
                            result.variables.insert(v.clone());
                        }
                        if keep_seeds {
                            result.kept_seeds.push(seed.clone());
                        }
                        frontier.push(seed);
                    }
                }
            }
            let file = std::fs::OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)?;
            Some(std::io::BufWriter::new(file))
        }
        None => {
            let s0 = initial_seed(n);
            admit(
                s0,
                0,
                &mut seen,
                &mut canon_b,
                &mut frontier,
                &mut result,
                keep_seeds,
            );
            None
        }
    };
    if fresh_cache {
        if let Some(w) = cache_out.as_mut() {
            write_cache_record(w, &frontier[0], 0)?;
        }
    }

    fn admit(
        seed: Seed,
        _depth: u32,
        seen: &mut HashSet<ClusterKey>,
        canon_b: &mut std::collections::HashMap<ClusterKey, Vec<Vec<i64>>>,
        frontier: &mut Vec<Seed>,
        result: &mut Enumeration,
        keep_seeds: bool,
    ) -> bool {
        let key = seed.cluster_key();
        if !seen.insert(key.clone()) {
            if let Some(prev) = canon_b.get(&key) {
                if prev != &seed.canonical_b() {
                    result.findings.push(format!(
                        "cluster key {} reached with mismatched exchange matrices",
                        key.digest()
                    ));
                }
            }
            return false;
        }
        canon_b.insert(key, seed.canonical_b());
        result.seeds += 1;
        for v in seed.vars() {
            result.variables.insert(v.clone());
        }
        if keep_seeds {
            result.kept_seeds.push(seed.clone());
        }
        frontier.push(seed);
        true
    }

    let hit_limit = |result: &Enumeration, limits: &EnumerationLimits| {
        limits.max_seeds.is_some_and(|m| result.seeds >= m)
            || limits
                .target_variables
                .is_some_and(|t| result.variables.len() >= t)
    };

    let mut truncated = hit_limit(&result, &limits);
    while !frontier.is_empty() && !truncated {
        if limits.max_depth.is_some_and(|d| depth >= d) {
            truncated = true;
            break;
        }
        depth += 1;
        let level = std::mem::take(&mut frontier);
        let mut next: Vec<Seed> = Vec::new();
        'level: for seed in &level {
            for k in 0..seed.num_mutable() {
                let child = mutate(seed, k)?;
                if admit(
                    child,
                    depth,
                    &mut seen,
                    &mut canon_b,
                    &mut next,
                    &mut result,
                    keep_seeds,
                ) {
                    if let Some(w) = cache_out.as_mut() {
                        write_cache_record(w, next.last().unwrap(), depth)?;
                    }
                }
                if hit_limit(&result, &limits) {
                    truncated = true;
                    break 'level;
                }
            }
        }
        result.depth_reached = depth;
        frontier = next;
    }
    if let Some(w) = cache_out.as_mut() {
        w.flush()?;
    }
    result.complete = !truncated && frontier.is_empty();
    Ok(result)
}

// ---------------------------------------------------------------------------
// cache: one JSON record per seed, append-only
// ---------------------------------------------------------------------------

#[derive(Serialize, Deserialize)]
struct CacheRecord {
    hash: String,
    n: u8,
    depth: u32,
    vars: Vec<String>,
    b: Vec<Vec<i64>>,
}

fn write_cache_record(
    w: &mut impl Write,
    seed: &Seed,
    depth: u32,
) -> Result<(), ClusterError> {
    let record = CacheRecord {
        hash: seed.cluster_key().digest(),
        n: seed.n,
        depth,
        vars: seed.vars.iter().map(|p| p.to_string()).collect(),
        b: seed.b.clone(),
    };
    let line = serde_json::to_string(&record).map_err(|e| ClusterError::Cache(e.to_string()))?;
    writeln!(w, "{line}")?;
    Ok(())
}

fn read_cache(path: &Path, n: u8) -> Result<Vec<(Seed, u32)>, ClusterError> {
    let file = std::fs::File::open(path)?;
    let mut out = Vec::new();
    for line in std::io::BufReader::new(file).lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: CacheRecord =
            serde_json::from_str(&line).map_err(|e| ClusterError::Cache(e.to_string()))?;
        if record.n != n {
            return Err(ClusterError::Cache(format!(
                "cache is for n={}, requested n={n}",
                record.n
            )));
        }
        let vars: Result<Vec<MultiPoly>, _> = record
            .vars
            .iter()
            .map(|s| s.parse::<MultiPoly>().map(|p| p.with_columns(n)))
            .collect();
        let vars = vars.map_err(|e| ClusterError::Cache(e.to_string()))?;
        let seed = Seed {
            n,
            vars,
            b: record.b,
        };
        out.push((seed, record.depth));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    #[test]
    fn initial_seed_n3() {
        let s = initial_seed(3);
        assert_eq!(s.num_mutable(), 1);
        assert_eq!(s.frozen_vars().len(), 2);
        assert_eq!(s.vars()[0], p("x_1_2"));
        assert_eq!(s.vars()[1], p("x_1_3"));
        assert_eq!(s.vars()[2], p("x_1_2 x_2_3 - x_1_3"));
    }

    #[test]
    fn initial_seed_n4_frozen_minors() {
        let s = initial_seed(4);
        assert_eq!(s.num_mutable(), 3);
        assert_eq!(s.frozen_vars().len(), 3);
        let frozen: BTreeSet<MultiPoly> = s.frozen_vars().iter().cloned().collect();
        assert!(frozen.contains(&p("x_1_4")));
        assert!(frozen.contains(&p("x_1_3 x_2_4 - x_1_4 x_2_3")));
        // 3x3 minor on rows 1-3, columns 2-4
        let big = PolyMatrix::from_rows(vec![
            vec![p("x_1_2"), p("x_1_3"), p("x_1_4")],
            vec![MultiPoly::one(4), p("x_2_3"), p("x_2_4")],
            vec![MultiPoly::zero(4), MultiPoly::one(4), p("x_3_4")],
        ])
        .determinant();
        assert!(frozen.contains(&big));
    }

    #[test]
    fn first_mutation_yields_single_variable() {
        let s = initial_seed(3);
        let s2 = mutate(&s, 0).unwrap();
        assert_eq!(s2.vars()[0], p("x_2_3"));
        // involution
        assert_eq!(mutate(&s2, 0).unwrap(), s);
    }

    #[test]
    fn enumerate_n3() {
        let res = enumerate(3, EnumerationLimits::default(), true, None).unwrap();
        assert!(res.complete);
        assert_eq!(res.seeds, 2);
        assert_eq!(res.variables.len(), 4);
        assert!(res.findings.is_empty());
        let expected: BTreeSet<MultiPoly> = [
            p("x_1_2"),
            p("x_2_3"),
            p("x_1_3"),
            p("x_1_2 x_2_3 - x_1_3"),
        ]
        .into_iter()
        .collect();
        assert_eq!(res.variables, expected);
    }

    #[test]
    fn enumerate_n4() {
        let res = enumerate(4, EnumerationLimits::default(), true, None).unwrap();
        assert!(res.complete);
        assert_eq!(res.variables.len(), 12);
        assert!(res.findings.is_empty());
        // involution on every seed and every direction
        for seed in &res.kept_seeds {
            for k in 0..seed.num_mutable() {
                let back = mutate(&mutate(seed, k).unwrap(), k).unwrap();
                assert_eq!(&back, seed);
            }
        }
    }

    #[test]
    fn cluster_monomials_small() {
        let s = initial_seed(3);
        let d0 = cluster_monomials(&s, 0);
        assert_eq!(d0.len(), 1);
        assert!(d0.contains(&MultiPoly::one(3)));

        let d1 = cluster_monomials(&s, 1);
        assert_eq!(d1.len(), 4); // 1 plus three variables

        let d2 = cluster_monomials(&s, 2);
        assert!(d2.contains(&p("x_1_2 x_2_3 - x_1_3").mul(&p("x_1_2"))));
        assert!(d2.contains(&p("x_1_3").pow(2)));
        // 1 + 3 + (3 choose 2 with repetition) = 10
        assert_eq!(d2.len(), 10);
    }

    #[test]
    fn cache_round_trip() {
        let dir = std::env::temp_dir().join(format!("mvcycles-cache-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("n4.jsonl");
        let _ = std::fs::remove_file(&path);

        // truncated run, then resume to completion
        let limits = EnumerationLimits {
            max_depth: Some(1),
            ..Default::default()
        };
        let partial = enumerate(4, limits, false, Some(&path)).unwrap();
        assert!(!partial.complete);
        let resumed = enumerate(4, EnumerationLimits::default(), false, Some(&path)).unwrap();
        assert!(resumed.complete);
        assert_eq!(resumed.variables.len(), 12);
        let fresh = enumerate(4, EnumerationLimits::default(), false, None).unwrap();
        assert_eq!(resumed.variables, fresh.variables);
        let _ = std::fs::remove_file(&path);
    }
}
