//! Sigma(A,B) node states: the independent sets containing A and avoiding B.

use crate::complexes::Face;
use crate::error::{Error, Result};
use crate::graphs::Graph;

/// A matching tree node state, by vertex index into the host graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SigmaNode {
    /// Sorted ascending.
    pub a: Vec<u32>,
    /// Sorted ascending.
    pub b: Vec<u32>,
}

impl SigmaNode {
    pub fn root() -> SigmaNode {
        SigmaNode {
            a: Vec::new(),
            b: Vec::new(),
        }
    }

    pub fn new(mut a: Vec<u32>, mut b: Vec<u32>) -> SigmaNode {
        a.sort_unstable();
        b.sort_unstable();
        SigmaNode { a, b }
    }

    pub fn from_masks(a_mask: u64, b_mask: u64) -> SigmaNode {
        SigmaNode {
            a: bits(a_mask),
            b: bits(b_mask),
        }
    }

    pub fn a_mask(&self) -> u64 {
        mask(&self.a)
    }

    pub fn b_mask(&self) -> u64 {
        mask(&self.b)
    }

    /// Checks A ∩ B = ∅, N(A) ⊆ B, and A independent.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        let masks = g.neighbor_masks()?;
        let a = self.a_mask();
        let b = self.b_mask();
        if a & b != 0 {
            return Err(Error::contract("sigma node: A and B intersect"));
        }
        for &v in &self.a {
            let nb = masks[v as usize];
            if nb & a != 0 {
                return Err(Error::contract("sigma node: A is not independent"));
            }
            if nb & !b != 0 {
                return Err(Error::contract("sigma node: N(A) not contained in B"));
            }
        }
        Ok(())
    }
}

pub(crate) fn bits(mut m: u64) -> Vec<u32> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        let v = m.trailing_zeros();
        out.push(v);
        m &= m - 1;
    }
    out
}

pub(crate) fn mask(vs: &[u32]) -> u64 {
    vs.iter().fold(0u64, |acc, &v| acc | (1u64 << v))
}

/// Collects every independent subset of `residual` (as bitmasks, including 0)
/// in a deterministic order.
pub(crate) fn independent_subsets(masks: &[u64], residual: u64, out: &mut Vec<u64>) {
    fn rec(masks: &[u64], current: u64, rest: u64, out: &mut Vec<u64>) {
        if rest == 0 {
            out.push(current);
            return;
        }
        let v = rest.trailing_zeros();
        let bit = 1u64 << v;
        rec(masks, current, rest & !bit, out);
        rec(masks, current | bit, rest & !bit & !masks[v as usize], out);
    }
    rec(masks, 0, residual, out);
}

/// Counts independent subsets of `residual` with early exit at `bound`.
pub(crate) fn count_independent_bounded(masks: &[u64], residual: u64, bound: usize) -> usize {
    fn rec(masks: &[u64], rest: u64, bound: usize) -> usize {
        if bound == 0 {
            return 0;
        }
        if rest == 0 {
            return 1;
        }
        let v = rest.trailing_zeros();
        let bit = 1u64 << v;
        let without = rec(masks, rest & !bit, bound);
        if without >= bound {
            return without;
        }
        without + rec(masks, rest & !bit & !masks[v as usize], bound - without)
    }
    rec(masks, residual, bound)
}

/// All faces of Sigma(A,B), sorted by cardinality then lexicographically.
pub fn expand_sigma(g: &Graph, node: &SigmaNode) -> Result<Vec<Face>> {
    node.validate(g)?;
    let masks = g.neighbor_masks()?;
    let full = if g.n() == 64 {
        u64::MAX
    } else {
        (1u64 << g.n()) - 1
    };
    let residual = full & !node.a_mask() & !node.b_mask();
    let mut subsets = Vec::new();
    independent_subsets(&masks, residual, &mut subsets);
    let a_mask = node.a_mask();
    let mut faces: Vec<Face> = subsets
        .into_iter()
        .map(|j| Face(bits(a_mask | j)))
        .collect();
    faces.sort_by(|x, y| x.card().cmp(&y.card()).then_with(|| x.0.cmp(&y.0)));
    Ok(faces)
}

/// |Sigma(A,B)|, capped at `bound`.
pub fn sigma_size_bounded(g: &Graph, node: &SigmaNode, bound: usize) -> Result<usize> {
    node.validate(g)?;
    let masks = g.neighbor_masks()?;
    let full = if g.n() == 64 {
        u64::MAX
    } else {
        (1u64 << g.n()) - 1
    };
    let residual = full & !node.a_mask() & !node.b_mask();
    Ok(count_independent_bounded(&masks, residual, bound))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs;

    #[test]
    fn sigma_everything_excluded() {
        let g = graphs::cycle(5).unwrap();
        let node = SigmaNode::new(vec![], (0..5).collect());
        let faces = expand_sigma(&g, &node).unwrap();
        assert_eq!(faces, vec![Face::empty()]);
    }

    #[test]
    fn sigma_root_is_whole_complex() {
        let g = graphs::cycle(5).unwrap();
        let faces = expand_sigma(&g, &SigmaNode::root()).unwrap();
        assert_eq!(faces.len(), 11);
    }

    #[test]
    fn sigma_with_anchor() {
        // C_5 on labels 1..5 = indices 0..4; A = {1}, B = {2,5}
        let g = graphs::cycle(5).unwrap();
        let node = SigmaNode::new(vec![0], vec![1, 4]);
        let faces = expand_sigma(&g, &node).unwrap();
        let expect: Vec<Face> = vec![Face(vec![0]), Face(vec![0, 2]), Face(vec![0, 3])];
        assert_eq!(faces, expect);
    }

    #[test]
    fn sigma_invariant_violation() {
        let g = graphs::cycle(5).unwrap();
        // N(A) not in B
        let node = SigmaNode::new(vec![0], vec![]);
        assert!(expand_sigma(&g, &node).is_err());
    }

    #[test]
    fn bounded_count() {
        let g = graphs::cycle(5).unwrap();
        assert_eq!(sigma_size_bounded(&g, &SigmaNode::root(), 100).unwrap(), 11);
        assert_eq!(sigma_size_bounded(&g, &SigmaNode::root(), 2).unwrap(), 2);
    }
}
