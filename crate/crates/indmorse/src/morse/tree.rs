//! Matching trees: validated construction over Sigma(A,B) states.

use std::collections::BTreeMap;
use std::fmt;

use crate::complexes::Face;
use crate::error::{Error, Result};
use crate::graphs::Graph;

use super::sigma::{bits, SigmaNode};

/// One construction step at a tree node.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TreeStep {
    /// Free vertex p: N(p) outside A∪B is empty; the node's faces pair off
    /// completely and the node closes with an empty child.
    Free(u32),
    /// Matching vertex v with witness p: N(p) outside A∪B is exactly {v}.
    Match { v: u32, p: u32 },
    /// Splitting vertex v: two children, exclude (B∪{v}) and include
    /// (A∪{v}, B∪N(v)).
    Split(u32),
}

impl fmt::Display for TreeStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TreeStep::Free(p) => write!(f, "free #{p}"),
            TreeStep::Match { v, p } => write!(f, "match #{v} via #{p}"),
            TreeStep::Split(v) => write!(f, "split #{v}"),
        }
    }
}

#[derive(Debug, Clone)]
pub struct TreeNode {
    pub a_mask: u64,
    pub b_mask: u64,
    /// L/R letters of the splits above this node; empty for the root spine.
    pub path: String,
    pub step: Option<TreeStep>,
    pub children: Vec<usize>,
}

impl TreeNode {
    pub fn sigma(&self) -> SigmaNode {
        SigmaNode::from_masks(self.a_mask, self.b_mask)
    }

    pub fn a_face(&self) -> Face {
        Face(bits(self.a_mask))
    }
}

/// A fully built tree: every leaf is either closed by a free vertex or has an
/// empty residual (a critical leaf with Sigma = {A}).
#[derive(Debug, Clone)]
pub struct MatchingTree {
    pub nodes: Vec<TreeNode>,
}

impl MatchingTree {
    /// Indices of critical leaves, in construction order.
    pub fn critical_leaf_indices(&self) -> Vec<usize> {
        self.nodes
            .iter()
            .enumerate()
            .filter(|(_, n)| n.step.is_none() && n.children.is_empty())
            .map(|(i, _)| i)
            .collect()
    }

    /// Critical cells (the A-sets of nonempty leaves), sorted by cardinality
    /// then lexicographically.
    pub fn critical_cells(&self) -> Vec<Face> {
        let mut cells: Vec<Face> = self
            .critical_leaf_indices()
            .into_iter()
            .map(|i| self.nodes[i].a_face())
            .collect();
        cells.sort_by(|x, y| x.card().cmp(&y.card()).then_with(|| x.0.cmp(&y.0)));
        cells
    }

    /// Critical cell sizes (cardinalities), ascending.
    pub fn critical_sizes(&self) -> Vec<usize> {
        let mut s: Vec<usize> = self
            .critical_leaf_indices()
            .into_iter()
            .map(|i| self.nodes[i].a_mask.count_ones() as usize)
            .collect();
        s.sort_unstable();
        s
    }
}

/// Validates a step against Definition-style preconditions; the error spells
/// out which precondition failed (this is the paper-audit channel).
pub fn validate_step(g: &Graph, node: &SigmaNode, step: TreeStep) -> Result<()> {
    node.validate(g)?;
    let masks = g.neighbor_masks()?;
    let used = node.a_mask() | node.b_mask();
    validate_step_masks(&masks, used, step)
}

pub(crate) fn validate_step_masks(masks: &[u64], used: u64, step: TreeStep) -> Result<()> {
    let in_graph = |v: u32| (v as usize) < masks.len();
    match step {
        TreeStep::Free(p) => {
            if !in_graph(p) || used & (1u64 << p) != 0 {
                return Err(Error::audit(format!("free vertex #{p} is not outside A∪B")));
            }
            let left = masks[p as usize] & !used;
            if left != 0 {
                return Err(Error::audit(format!(
                    "free vertex #{p} still has neighbors outside A∪B: {:?}",
                    bits(left)
                )));
            }
        }
        TreeStep::Match { v, p } => {
            if !in_graph(p) || used & (1u64 << p) != 0 {
                return Err(Error::audit(format!(
                    "match witness #{p} is not outside A∪B"
                )));
            }
            if !in_graph(v) || masks[p as usize] & (1u64 << v) == 0 {
                return Err(Error::audit(format!(
                    "matching vertex #{v} is not a neighbor of witness #{p}"
                )));
            }
            let left = masks[p as usize] & !used;
            if left != 1u64 << v {
                return Err(Error::audit(format!(
                    "witness #{p} has remaining neighborhood {:?}, expected exactly {{{v}}}",
                    bits(left)
                )));
            }
        }
        TreeStep::Split(v) => {
            if !in_graph(v) || used & (1u64 << v) != 0 {
                return Err(Error::audit(format!(
                    "splitting vertex #{v} is not outside A∪B"
                )));
            }
        }
    }
    Ok(())
}

/// Incremental tree construction with per-step validation.
pub struct TreeBuilder<'g> {
    pub graph: &'g Graph,
    masks: Vec<u64>,
    full: u64,
    nodes: Vec<TreeNode>,
    /// path -> index of the currently open (sink) node on that path.
    open: BTreeMap<String, usize>,
}

impl<'g> TreeBuilder<'g> {
    pub fn new(graph: &'g Graph) -> Result<TreeBuilder<'g>> {
        let masks = graph.neighbor_masks()?;
        let full = if graph.n() == 64 {
            u64::MAX
        } else {
            (1u64 << graph.n()) - 1
        };
        let root = TreeNode {
            a_mask: 0,
            b_mask: 0,
            path: String::new(),
            step: None,
            children: Vec::new(),
        };
        let mut open = BTreeMap::new();
        open.insert(String::new(), 0);
        Ok(TreeBuilder {
            graph,
            masks,
            full,
            nodes: vec![root],
            open,
        })
    }

    pub fn masks(&self) -> &[u64] {
        &self.masks
    }

    pub fn node(&self, idx: usize) -> &TreeNode {
        &self.nodes[idx]
    }

    pub fn open_node(&self, path: &str) -> Option<usize> {
        self.open.get(path).copied()
    }

    /// Open paths in deterministic (lexicographic) order.
    pub fn open_paths(&self) -> Vec<String> {
        self.open.keys().cloned().collect()
    }

    pub fn residual(&self, idx: usize) -> u64 {
        let n = &self.nodes[idx];
        self.full & !n.a_mask & !n.b_mask
    }

    /// Applies a validated step at the open node of `path`.
    pub fn apply(&mut self, path: &str, step: TreeStep) -> Result<()> {
        let idx = *self
            .open
            .get(path)
            .ok_or_else(|| Error::audit(format!("no open node at path '{}'", render_path(path))))?;
        let (a, b) = (self.nodes[idx].a_mask, self.nodes[idx].b_mask);
        validate_step_masks(&self.masks, a | b, step)
            .map_err(|e| Error::audit(format!("at path '{}': {e}", render_path(path))))?;
        self.nodes[idx].step = Some(step);
        match step {
            TreeStep::Free(_) => {
                // the node's faces are fully paired; nothing remains below
                self.open.remove(path);
            }
            TreeStep::Match { v, .. } => {
                let child = self.push_node(
                    a | (1u64 << v),
                    b | self.masks[v as usize],
                    path.to_string(),
                );
                self.nodes[idx].children.push(child);
                self.open.insert(path.to_string(), child);
            }
            TreeStep::Split(v) => {
                let excl = self.push_node(a, b | (1u64 << v), format!("{path}L"));
                let incl = self.push_node(
                    a | (1u64 << v),
                    b | self.masks[v as usize],
                    format!("{path}R"),
                );
                self.nodes[idx].children.push(excl);
                self.nodes[idx].children.push(incl);
                self.open.remove(path);
                self.open.insert(format!("{path}L"), excl);
                self.open.insert(format!("{path}R"), incl);
            }
        }
        Ok(())
    }

    fn push_node(&mut self, a_mask: u64, b_mask: u64, path: String) -> usize {
        self.nodes.push(TreeNode {
            a_mask,
            b_mask,
            path,
            step: None,
            children: Vec::new(),
        });
        self.nodes.len() - 1
    }

    /// Closes construction. Every still-open node must have empty residual
    /// (so its Sigma is the singleton {A}); anything else violates the loop
    /// guard of the construction algorithm.
    pub fn finish(self) -> Result<MatchingTree> {
        for (path, &idx) in &self.open {
            let r = self.full & !self.nodes[idx].a_mask & !self.nodes[idx].b_mask;
            if r != 0 {
                return Err(Error::contract(format!(
                    "leaf at path '{}' still has |Sigma| >= 2 (residual {:?})",
                    render_path(path),
                    bits(r)
                )));
            }
        }
        Ok(MatchingTree { nodes: self.nodes })
    }
}

pub(crate) fn render_path(path: &str) -> String {
    if path.is_empty() {
        "-".to_string()
    } else {
        path.to_string()
    }
}

pub(crate) fn parse_path(s: &str) -> Result<String> {
    if s == "-" {
        return Ok(String::new());
    }
    if s.chars().all(|c| c == 'L' || c == 'R') && !s.is_empty() {
        Ok(s.to_string())
    } else {
        Err(Error::contract(format!("bad node path '{s}'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs;

    #[test]
    fn match_on_p3() {
        // P_3 = a-b-c (indices 0-1-2): match b via a, leaf {b}
        let g = graphs::path(3).unwrap();
        let mut tb = TreeBuilder::new(&g).unwrap();
        tb.apply("", TreeStep::Match { v: 1, p: 0 }).unwrap();
        let t = tb.finish().unwrap();
        assert_eq!(t.critical_cells(), vec![Face(vec![1])]);
    }

    #[test]
    fn free_on_p1() {
        let g = graphs::path(1).unwrap();
        let mut tb = TreeBuilder::new(&g).unwrap();
        tb.apply("", TreeStep::Free(0)).unwrap();
        let t = tb.finish().unwrap();
        assert!(t.critical_cells().is_empty());
    }

    #[test]
    fn invalid_steps_rejected() {
        let g = graphs::path(3).unwrap();
        let mut tb = TreeBuilder::new(&g).unwrap();
        // 0 has neighbor 1 outside A∪B, so it is not free
        assert!(tb.apply("", TreeStep::Free(0)).is_err());
        // witness 1 has two remaining neighbors
        assert!(tb.apply("", TreeStep::Match { v: 0, p: 1 }).is_err());
    }

    #[test]
    fn incomplete_tree_rejected() {
        let g = graphs::path(3).unwrap();
        let tb = TreeBuilder::new(&g).unwrap();
        assert!(tb.finish().is_err());
    }

    #[test]
    fn split_structure() {
        let g = graphs::cycle(4).unwrap();
        let mut tb = TreeBuilder::new(&g).unwrap();
        tb.apply("", TreeStep::Split(0)).unwrap();
        assert!(tb.open_node("L").is_some());
        assert!(tb.open_node("R").is_some());
        // include child: A={0}, B=N(0)={1,3}; residual {2} with no neighbors
        let incl = tb.open_node("R").unwrap();
        assert_eq!(tb.node(incl).a_mask, 1);
        assert_eq!(tb.residual(incl), 1 << 2);
        tb.apply("R", TreeStep::Free(2)).unwrap();
        // exclude child: residual {1,2,3} = path; match 2 via 1
        tb.apply("L", TreeStep::Match { v: 2, p: 1 }).unwrap();
        let t = tb.finish().unwrap();
        // C_4 = 3k+1 with k=1: one critical cell of size 1
        assert_eq!(t.critical_cells(), vec![Face(vec![2])]);
    }

    #[test]
    fn validate_step_public() {
        let g = graphs::cycle(5).unwrap();
        let node = SigmaNode::new(vec![0], vec![1, 4]);
        // N(2) \ {0,1,4} = {3}
        assert!(validate_step(&g, &node, TreeStep::Match { v: 3, p: 2 }).is_ok());
        assert!(validate_step(&g, &node, TreeStep::Free(2)).is_err());
    }
}
