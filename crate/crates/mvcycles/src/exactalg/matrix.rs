//! Square matrices of polynomials and their exact symbolic determinants.

use super::poly::MultiPoly;

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    dim: usize,
    entries: Vec<MultiPoly>,
}

impl PolyMatrix {
    pub fn from_rows(rows: Vec<Vec<MultiPoly>>) -> Self {
        let dim = rows.len();
        assert!(rows.iter().all(|r| r.len() == dim), "matrix must be square");
        PolyMatrix {
            dim,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn entry(&self, i: usize, j: usize) -> &MultiPoly {
        &self.entries[i * self.dim + j]
    }

    pub fn set_entry(&mut self, i: usize, j: usize, p: MultiPoly) {
        self.entries[i * self.dim + j] = p;
    }

    pub fn map_entries(&self, mut f: impl FnMut(usize, usize, &MultiPoly) -> MultiPoly) -> Self {
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set_entry(i, j, f(i, j, self.entry(i, j)));
            }
        }
        out
    }

    /// Simultaneous row/column permutation: entry (i,j) of the result is
    /// entry (perm[i], perm[j]) of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        assert_eq!(perm.len(), self.dim);
        let mut out = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                out.set_entry(i, j, self.entry(perm[i], perm[j]).clone());
            }
        }
        out
    }

    /// Exact determinant by Laplace expansion over column subsets, one row at
    /// a time. Zero entries are skipped, which matters for masked matrices.
    pub fn determinant(&self) -> MultiPoly {
        let n = self.dim;
        let cols = self
            .entries
            .iter()
            .map(|p| p.columns())
            .max()
            .unwrap_or(0);
        if n == 0 {
            return MultiPoly::one(cols);
        }
        let mut prev: std::collections::HashMap<u64, MultiPoly> =
            std::collections::HashMap::new();
        prev.insert(0u64, MultiPoly::one(cols));
        for row in 0..n {
            let mut next: std::collections::HashMap<u64, MultiPoly> =
                std::collections::HashMap::new();
            for (mask, minor) in prev {
                if minor.is_zero() {
                    continue;
                }
                let mut pos = 0u32; // # of chosen columns below j
                for j in 0..n {
                    if mask & (1 << j) != 0 {
                        pos += 1;
                        continue;
                    }
                    let e = self.entry(row, j);
                    if e.is_zero() {
                        continue;
                    }
                    let signed = if (row as u32 + pos) % 2 == 0 {
                        minor.mul(e)
                    } else {
                        minor.mul(e).neg()
                    };
                    let key = mask | (1 << j);
                    match next.entry(key) {
                        std::collections::hash_map::Entry::Vacant(v) => {
                            v.insert(signed);
                        }
                        std::collections::hash_map::Entry::Occupied(mut o) => {
                            let sum = o.get().add(&signed);
                            *o.get_mut() = sum;
                        }
                    }
                }
            }
            prev = next;
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        prev.remove(&full).unwrap_or_else(|| MultiPoly::zero(cols))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::{rat, MultiPoly};
    use rand::Rng;

    fn p(s: &str) -> MultiPoly {
        s.parse().unwrap()
    }

    /// Brute-force oracle: signed sum over all permutations.
    pub fn determinant_by_permutations(m: &PolyMatrix) -> MultiPoly {
        let n = m.dim();
        let cols = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| m.entry(i, j).columns())
            .max()
            .unwrap_or(0);
        let mut perm: Vec<usize> = (0..n).collect();
        let mut out = MultiPoly::zero(cols);
        permute(&mut perm, 0, &mut |perm, sign| {
            let mut prod = MultiPoly::one(cols);
            for (i, &j) in perm.iter().enumerate() {
                prod = prod.mul(m.entry(i, j));
            }
            out = if sign { out.sub(&prod) } else { out.add(&prod) };
        });
        out
    }

    fn permute(perm: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize], bool)) {
        let n = perm.len();
        if k == n {
            // parity by counting inversions
            let mut inv = 0;
            for a in 0..n {
                for b in a + 1..n {
                    if perm[a] > perm[b] {
                        inv += 1;
                    }
                }
            }
            f(perm, inv % 2 == 1);
            return;
        }
        for i in k..n {
            perm.swap(k, i);
            permute(perm, k + 1, f);
            perm.swap(k, i);
        }
    }

    #[test]
    fn two_by_two_minor() {
        let m = PolyMatrix::from_rows(vec![
            vec![p("x_1_2"), p("x_1_3")],
            vec![MultiPoly::one(3), p("x_2_3")],
        ]);
        assert_eq!(m.determinant(), p("x_1_2 x_2_3 - x_1_3"));
    }

    #[test]
    fn identity_determinant() {
        for k in 0..5 {
            let rows: Vec<Vec<MultiPoly>> = (0..k)
                .map(|i| {
                    (0..k)
                        .map(|j| if i == j { MultiPoly::one(2) } else { MultiPoly::zero(2) })
                        .collect()
                })
                .collect();
            assert!(PolyMatrix::from_rows(rows).determinant().is_one());
        }
    }

    #[test]
    fn agrees_with_permutation_expansion_on_random_matrices() {
        let mut rng = rand::thread_rng();
        for dim in 1..=5usize {
            for _ in 0..3 {
                let rows: Vec<Vec<MultiPoly>> = (0..dim)
                    .map(|_| {
                        (0..dim)
                            .map(|_| {
                                let mut q = MultiPoly::constant(6, rat(rng.gen_range(-2..=2)));
                                if rng.gen_bool(0.7) {
                                    let i = rng.gen_range(1..6u8);
                                    let j = rng.gen_range(i + 1..=6u8);
                                    q = q.add(&MultiPoly::var(6, i, j));
                                }
                                q
                            })
                            .collect()
                    })
                    .collect();
                let m = PolyMatrix::from_rows(rows);
                assert_eq!(m.determinant(), determinant_by_permutations(&m));
            }
        }
    }

    #[test]
    fn invariant_under_simultaneous_permutation() {
        let m = PolyMatrix::from_rows(vec![
            vec![p("x_1_2"), p("x_1_3"), p("x_1_4")],
            vec![MultiPoly::one(4), p("x_2_3"), p("x_2_4")],
            vec![MultiPoly::zero(4), MultiPoly::one(4), p("x_3_4")],
        ]);
        let d = m.determinant();
        for perm in [[1usize, 0, 2], [2, 1, 0], [1, 2, 0], [2, 0, 1]] {
            assert_eq!(m.permuted(&perm).determinant(), d);
        }
    }
}
