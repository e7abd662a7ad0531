//! Determinantal machinery for MV-polynomials: line-diagram heights, the
//! loop graph with its overlap directions, allowable paths, the loop matrix
//! `A_p`, the zero mask, and the masked determinant.
//!
//! Loops are addressed by their index in the picture's canonical (sorted)
//! loop list. Copies of the same interval are treated as linearly nested,
//! earlier index outermost.

use std::collections::HashMap;

use num::One;

use crate::exactalg::{MultiPoly, PolyMatrix};
use crate::kostant::KostantPicture;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum DetformError {
    #[error("loop graph has a cycle; the zero-pattern rule does not apply")]
    CyclicGraph,
    #[error("coefficient of the diagonal monomial is {0}, expected 1")]
    LeadingTermAnomaly(String),
}

/// Strict encirclement of loop instances: proper interval containment, with
/// equal intervals nested by index (earlier index outside).
fn encircles(p: &KostantPicture, outer: usize, inner: usize) -> bool {
    let lo = p.loops()[outer];
    let li = p.loops()[inner];
    if lo == li {
        return outer < inner;
    }
    lo.contains(&li)
}

/// Per-loop, per-column heights of the line diagram. `heights[k]` maps the
/// columns loop `k` passes through to its height there.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineDiagram {
    heights: Vec<HashMap<u8, u32>>,
}

impl LineDiagram {
    pub fn height(&self, loop_idx: usize, column: u8) -> Option<u32> {
        self.heights[loop_idx].get(&column).copied()
    }
}

/// Heights: a loop sits one unit above the tallest stack of loops it
/// encircles in each column it passes through, computed inductively from the
/// innermost loops outward.
pub fn heights(p: &KostantPicture) -> LineDiagram {
    let k = p.num_loops();
    let mut order: Vec<usize> = (0..k).collect();
    // inner before outer: shorter first; equal intervals later-index first
    order.sort_by_key(|&i| {
        let l = p.loops()[i];
        (l.len(), std::cmp::Reverse(i))
    });
    let mut heights: Vec<HashMap<u8, u32>> = vec![HashMap::new(); k];
    for &i in &order {
        let l = p.loops()[i];
        for col in l.left..=l.right {
            let below = (0..k)
                .filter(|&j| encircles(p, i, j) && p.loops()[j].passes_through(col))
                .map(|j| heights[j][&col])
                .max()
                .unwrap_or(0);
            heights[i].insert(col, below + 1);
        }
    }
    LineDiagram { heights }
}

/// The loop graph: the directed overlap relation and the reduced edge set.
#[derive(Clone, Debug)]
pub struct LoopGraph {
    picture: KostantPicture,
    /// `arrow[a][b]`: the overlap relation points from `a` (left) to `b`.
    arrow: Vec<Vec<bool>>,
    /// Undirected edges, each stored as an ordered index pair.
    edges: Vec<(usize, usize)>,
    acyclic: bool,
}

impl LoopGraph {
    pub fn picture(&self) -> &KostantPicture {
        &self.picture
    }

    pub fn arrow(&self, a: usize, b: usize) -> bool {
        self.arrow[a][b]
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_acyclic(&self) -> bool {
        self.acyclic
    }

    fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges.iter().filter_map(move |&(a, b)| {
            if a == v {
                Some(b)
            } else if b == v {
                Some(a)
            } else {
                None
            }
        })
    }

    /// The unique simple path between two vertices of the forest, inclusive,
    /// or `None` when they lie in different trees.
    fn simple_path(&self, from: usize, to: usize) -> Option<Vec<usize>> {
        let k = self.picture.num_loops();
        let mut prev: Vec<Option<usize>> = vec![None; k];
        let mut seen = vec![false; k];
        let mut queue = std::collections::VecDeque::new();
        seen[from] = true;
        queue.push_back(from);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while let Some(p) = prev[cur] {
                    path.push(p);
                    cur = p;
                }
                path.reverse();
                return Some(path);
            }
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    prev[w] = Some(v);
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Build the loop graph of `p`: direct each overlapping pair by the height
/// test at the two shared-end columns, then keep an edge only when no third
/// loop sits strictly between in the directed relation.
pub fn build_graph(p: &KostantPicture) -> LoopGraph {
    let k = p.num_loops();
    let diagram = heights(p);
    let mut arrow = vec![vec![false; k]; k];
    for a in 0..k {
        for b in 0..k {
            if a == b {
                continue;
            }
            let la = p.loops()[a];
            let lb = p.loops()[b];
            if !la.overlaps(&lb) {
                continue;
            }
            // the relation points from the loop with the smaller left end
            if !(la.left < lb.left) {
                continue;
            }
            let at_r1 = diagram.height(a, la.right).unwrap()
                <= diagram.height(b, la.right).unwrap();
            let at_l2 = diagram.height(b, lb.left).unwrap()
                <= diagram.height(a, lb.left).unwrap();
            if at_r1 && at_l2 {
                arrow[a][b] = true;
            }
        }
    }
    let mut edges = Vec::new();
    for a in 0..k {
        for b in 0..k {
            if !arrow[a][b] {
                continue;
            }
            let shortcut = (0..k).any(|c| arrow[a][c] && arrow[c][b]);
            if !shortcut {
                edges.push((a, b));
            }
        }
    }
    // forest test on the undirected edge set
    let mut parent: Vec<usize> = (0..k).collect();
    fn find(parent: &mut Vec<usize>, x: usize) -> usize {
        if parent[x] != x {
            let root = find(parent, parent[x]);
            parent[x] = root;
        }
        parent[x]
    }
    let mut acyclic = true;
    for &(a, b) in &edges {
        let ra = find(&mut parent, a);
        let rb = find(&mut parent, b);
        if ra == rb {
            acyclic = false;
            break;
        }
        parent[ra] = rb;
    }
    LoopGraph {
        picture: p.clone(),
        arrow,
        edges,
        acyclic,
    }
}

/// Whether the forest contains an allowable path from `from` to `to`: the
/// unique simple path must exist and every consecutive triple `(a, b, c)`
/// must satisfy the two encirclement conditions. A single vertex counts.
pub fn has_allowable_path(
    g: &LoopGraph,
    from: usize,
    to: usize,
) -> Result<bool, DetformError> {
    if !g.is_acyclic() {
        return Err(DetformError::CyclicGraph);
    }
    if from == to {
        return Ok(true);
    }
    let Some(path) = g.simple_path(from, to) else {
        return Ok(false);
    };
    for w in path.windows(3) {
        let (a, b, c) = (w[0], w[1], w[2]);
        if g.arrow(a, b) && g.arrow(c, b) && !encircles(g.picture(), a, c) {
            return Ok(false);
        }
        if g.arrow(b, a) && g.arrow(b, c) && !encircles(g.picture(), c, a) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Default loop ordering for printed matrices: ascending left end, ties
/// broken outer loop first (descending right end, then index).
pub fn default_order(p: &KostantPicture) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p.num_loops()).collect();
    order.sort_by_key(|&i| {
        let l = p.loops()[i];
        (l.left, std::cmp::Reverse(l.right), i)
    });
    order
}

/// The loop matrix: entry `(i, j)` is `x_{l_i, r_j}` under the unitriangular
/// conventions (`1` on equal indices, `0` below the diagonal). The diagonal
/// product is the picture's monomial.
pub fn build_matrix(p: &KostantPicture, order: &[usize]) -> PolyMatrix {
    assert_eq!(order.len(), p.num_loops());
    let n = p.n();
    let rows: Vec<Vec<MultiPoly>> = order
        .iter()
        .map(|&i| {
            let li = p.loops()[i].left;
            order
                .iter()
                .map(|&j| {
                    let rj = p.loops()[j].right;
                    if li < rj {
                        MultiPoly::var(n, li, rj)
                    } else if li == rj {
                        MultiPoly::one(n)
                    } else {
                        MultiPoly::zero(n)
                    }
                })
                .collect()
        })
        .collect();
    PolyMatrix::from_rows(rows)
}

/// Boolean mask over the loop matrix; `true` means the entry is replaced by
/// zero. The single-vertex path keeps the diagonal alive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroPattern {
    mask: Vec<Vec<bool>>,
}

impl ZeroPattern {
    pub fn dim(&self) -> usize {
        self.mask.len()
    }

    pub fn is_zeroed(&self, i: usize, j: usize) -> bool {
        self.mask[i][j]
    }

    pub fn zeroed_positions(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (i, row) in self.mask.iter().enumerate() {
            for (j, &z) in row.iter().enumerate() {
                if z {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn apply(&self, m: &PolyMatrix) -> PolyMatrix {
        assert_eq!(m.dim(), self.dim());
        m.map_entries(|i, j, e| {
            if self.mask[i][j] {
                MultiPoly::zero(e.columns())
            } else {
                e.clone()
            }
        })
    }
}

/// Mask entry `(i, j)` exactly when there is no allowable path from the j-th
/// to the i-th loop.
pub fn zero_pattern(p: &KostantPicture, order: &[usize]) -> Result<ZeroPattern, DetformError> {
    let g = build_graph(p);
    if !g.is_acyclic() {
        return Err(DetformError::CyclicGraph);
    }
    let k = order.len();
    let mut mask = vec![vec![false; k]; k];
    for i in 0..k {
        for j in 0..k {
            mask[i][j] = !has_allowable_path(&g, order[j], order[i])?;
        }
    }
    Ok(ZeroPattern { mask })
}

/// The masked determinant, with the unit-leading-coefficient check: the
/// picture's own monomial must occur with coefficient exactly 1.
pub fn mv_det(p: &KostantPicture) -> Result<MultiPoly, DetformError> {
    let order = default_order(p);
    let a = build_matrix(p, &order);
    let pattern = zero_pattern(p, &order)?;
    let det = pattern.apply(&a).determinant();
    let target = p.monomial();
    let (target_mono, _) = target.leading().expect("picture monomial is nonzero");
    let c = det.coeff(target_mono);
    if !c.is_one() {
        return Err(DetformError::LeadingTermAnomaly(c.to_string()));
    }
    Ok(det)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kostant::Loop;

    fn pic(n: u8, loops: &[(u8, u8)]) -> KostantPicture {
        KostantPicture::new(n, loops.iter().map(|&(l, r)| Loop::new(l, r)).collect())
    }

    /// Six loops on n=6: (1,5),(1,3),(2,4),(3,4),(4,6),(4,5).
    pub fn six_loop_picture() -> KostantPicture {
        pic(6, &[(3, 4), (4, 5), (1, 3), (2, 4), (4, 6), (1, 5)])
    }

    /// Four loops on n=6 whose graph is a 4-cycle: (1,3),(2,5),(3,4),(4,6).
    pub fn four_cycle_picture() -> KostantPicture {
        pic(6, &[(1, 3), (3, 4), (2, 5), (4, 6)])
    }

    #[test]
    fn heights_simple() {
        let single = pic(4, &[(2, 4)]);
        let d = heights(&single);
        for col in 2..=4 {
            assert_eq!(d.height(0, col), Some(1));
        }

        let disjoint = pic(5, &[(1, 2), (3, 5)]);
        let d = heights(&disjoint);
        assert_eq!(d.height(0, 1), Some(1));
        assert_eq!(d.height(1, 4), Some(1));
    }

    #[test]
    fn heights_six_loop() {
        let p = six_loop_picture();
        let d = heights(&p);
        let idx = |l: (u8, u8)| {
            p.loops()
                .iter()
                .position(|&x| x == Loop::new(l.0, l.1))
                .unwrap()
        };
        let big = idx((1, 5));
        // the big loop: height 2 over columns 1,2,5 and height 3 over 3,4
        assert_eq!(d.height(big, 1), Some(2));
        assert_eq!(d.height(big, 2), Some(2));
        assert_eq!(d.height(big, 3), Some(3));
        assert_eq!(d.height(big, 4), Some(3));
        assert_eq!(d.height(big, 5), Some(2));
        // (2,4) stacks over (3,4)
        let mid = idx((2, 4));
        assert_eq!(d.height(mid, 2), Some(1));
        assert_eq!(d.height(mid, 3), Some(2));
        assert_eq!(d.height(mid, 4), Some(2));
        // (4,6) stacks over (4,5)
        let right = idx((4, 6));
        assert_eq!(d.height(right, 4), Some(2));
        assert_eq!(d.height(right, 5), Some(2));
        assert_eq!(d.height(right, 6), Some(1));
    }

    #[test]
    fn equal_intervals_stack() {
        let p = pic(3, &[(1, 2), (1, 2)]);
        let d = heights(&p);
        // earlier index outermost, so it sits above
        assert_eq!(d.height(0, 1), Some(2));
        assert_eq!(d.height(1, 1), Some(1));
    }

    #[test]
    fn graph_six_loop() {
        let p = six_loop_picture();
        let g = build_graph(&p);
        assert!(g.is_acyclic());
        let idx = |l: (u8, u8)| {
            p.loops()
                .iter()
                .position(|&x| x == Loop::new(l.0, l.1))
                .unwrap()
        };
        let mut edges: Vec<((u8, u8), (u8, u8))> = g
            .edges()
            .iter()
            .map(|&(a, b)| {
                let la = p.loops()[a];
                let lb = p.loops()[b];
                ((la.left, la.right), (lb.left, lb.right))
            })
            .collect();
        edges.sort();
        assert_eq!(
            edges,
            vec![
                ((1, 3), (2, 4)),
                ((1, 3), (3, 4)),
                ((1, 5), (4, 6)),
                ((2, 4), (4, 6)),
                ((3, 4), (4, 5)),
            ]
        );
        // no overlap, no edge
        let disjoint = pic(5, &[(1, 2), (3, 5)]);
        assert!(build_graph(&disjoint).edges().is_empty());
        assert!(build_graph(&disjoint).is_acyclic());

        // the allowable-path failure: no path from (1,3) to (1,5),
        // because the final triple breaks the first condition
        assert!(!has_allowable_path(&g, idx((1, 3)), idx((1, 5))).unwrap());
        assert!(has_allowable_path(&g, idx((1, 5)), idx((1, 3))).unwrap());
        assert!(has_allowable_path(&g, idx((2, 4)), idx((2, 4))).unwrap());
    }

    #[test]
    fn graph_four_cycle() {
        let g = build_graph(&four_cycle_picture());
        assert!(!g.is_acyclic());
        assert_eq!(g.edges().len(), 4);
        assert!(matches!(
            has_allowable_path(&g, 0, 1),
            Err(DetformError::CyclicGraph)
        ));
        assert!(matches!(
            mv_det(&four_cycle_picture()),
            Err(DetformError::CyclicGraph)
        ));
    }

    #[test]
    fn richardson_matrix() {
        let p = pic(3, &[(1, 2), (2, 3)]);
        let a = build_matrix(&p, &default_order(&p));
        assert_eq!(a.entry(0, 0), &MultiPoly::var(3, 1, 2));
        assert_eq!(a.entry(0, 1), &MultiPoly::var(3, 1, 3));
        assert_eq!(a.entry(1, 0), &MultiPoly::one(3));
        assert_eq!(a.entry(1, 1), &MultiPoly::var(3, 2, 3));
        assert_eq!(
            mv_det(&p).unwrap(),
            "x_1_2 x_2_3 - x_1_3".parse().unwrap()
        );
    }

    #[test]
    fn default_order_matches_drawing() {
        let p = six_loop_picture();
        let order = default_order(&p);
        let seq: Vec<(u8, u8)> = order
            .iter()
            .map(|&i| (p.loops()[i].left, p.loops()[i].right))
            .collect();
        assert_eq!(
            seq,
            vec![(1, 5), (1, 3), (2, 4), (3, 4), (4, 6), (4, 5)]
        );
    }

    #[test]
    fn single_loop() {
        let p = pic(5, &[(2, 4)]);
        let pattern = zero_pattern(&p, &default_order(&p)).unwrap();
        assert!(pattern.zeroed_positions().is_empty());
        assert_eq!(mv_det(&p).unwrap(), MultiPoly::var(5, 2, 4));
    }

    #[test]
    fn richardson_mask_is_trivial_for_determinant() {
        // non-nested pictures: masked and unmasked determinants agree
        for loops in [
            vec![(1u8, 2u8), (2, 3)],
            vec![(1, 3), (2, 4)],
            vec![(1, 2), (2, 4), (3, 5)],
            vec![(1, 4), (2, 5), (3, 5)],
        ] {
            let p = pic(5, &loops);
            let order = default_order(&p);
            let a = build_matrix(&p, &order);
            let masked = zero_pattern(&p, &order).unwrap().apply(&a);
            assert_eq!(masked.determinant(), a.determinant(), "{p}");
        }
    }
}
