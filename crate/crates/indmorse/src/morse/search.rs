//! Deterministic backtracking search for matching trees with few critical
//! cells. States are residual-vertex bitmasks; two nodes with the same
//! residual admit identical subtrees, so results are memoized on the mask.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::graphs::Graph;

use super::tree::{MatchingTree, TreeBuilder, TreeStep};

pub const DEFAULT_NODE_BUDGET: usize = 1_000_000;
/// Split candidates per node: vertices of maximum residual degree first.
const SPLIT_FANOUT: usize = 4;

#[derive(Debug, Clone, Copy)]
enum Move {
    Leaf,
    Free(u32),
    Match { v: u32, p: u32 },
    Split(u32),
}

pub struct Searcher<'a> {
    masks: &'a [u64],
    memo: HashMap<u64, (Move, Vec<usize>)>,
    explored: usize,
    budget: usize,
}

impl<'a> Searcher<'a> {
    pub fn new(masks: &'a [u64], budget: usize) -> Searcher<'a> {
        Searcher {
            masks,
            memo: HashMap::new(),
            explored: 0,
            budget,
        }
    }

    /// Relative critical-cell sizes (sorted) achievable below a node with
    /// this residual, minimizing (count, size spread, sizes).
    fn solve(&mut self, residual: u64) -> Result<(Move, Vec<usize>)> {
        if let Some(hit) = self.memo.get(&residual) {
            return Ok(hit.clone());
        }
        self.explored += 1;
        if self.explored > self.budget {
            return Err(Error::SearchBudget {
                explored: self.explored,
            });
        }
        let result = self.solve_fresh(residual)?;
        self.memo.insert(residual, result.clone());
        Ok(result)
    }

    fn solve_fresh(&mut self, residual: u64) -> Result<(Move, Vec<usize>)> {
        if residual == 0 {
            return Ok((Move::Leaf, vec![0]));
        }
        // a free vertex pairs the whole node away: always optimal
        let mut rest = residual;
        while rest != 0 {
            let p = rest.trailing_zeros();
            if self.masks[p as usize] & residual == 0 {
                return Ok((Move::Free(p), vec![]));
            }
            rest &= rest - 1;
        }
        let mut candidates: Vec<Move> = Vec::new();
        // match moves: witnesses with exactly one remaining neighbor
        let mut seen_v = 0u64;
        let mut rest = residual;
        while rest != 0 {
            let p = rest.trailing_zeros();
            let nb = self.masks[p as usize] & residual;
            if nb.count_ones() == 1 {
                let v = nb.trailing_zeros();
                if seen_v & (1u64 << v) == 0 {
                    seen_v |= 1u64 << v;
                    candidates.push(Move::Match { v, p });
                }
            }
            rest &= rest - 1;
        }
        // split moves: maximum residual degree first, index ascending
        let mut degs: Vec<(u32, u32)> = Vec::new();
        let mut rest = residual;
        while rest != 0 {
            let v = rest.trailing_zeros();
            degs.push(((self.masks[v as usize] & residual).count_ones(), v));
            rest &= rest - 1;
        }
        degs.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        for &(_, v) in degs.iter().take(SPLIT_FANOUT) {
            candidates.push(Move::Split(v));
        }
        let mut best: Option<(Move, Vec<usize>)> = None;
        for mv in candidates {
            let cells = match mv {
                Move::Match { v, .. } => {
                    let child = residual & !(1u64 << v) & !self.masks[v as usize];
                    let (_, sub) = self.solve(child)?;
                    let mut cells: Vec<usize> = sub.iter().map(|s| s + 1).collect();
                    cells.sort_unstable();
                    cells
                }
                Move::Split(v) => {
                    let excl = residual & !(1u64 << v);
                    let incl = residual & !(1u64 << v) & !self.masks[v as usize];
                    let (_, left) = self.solve(excl)?;
                    let (_, right) = self.solve(incl)?;
                    let mut cells = left.clone();
                    cells.extend(right.iter().map(|s| s + 1));
                    cells.sort_unstable();
                    cells
                }
                Move::Leaf | Move::Free(_) => unreachable!(),
            };
            if best
                .as_ref()
                .map_or(true, |(_, b)| objective(&cells) < objective(b))
            {
                let done = cells.is_empty();
                best = Some((mv, cells));
                if done {
                    break;
                }
            }
        }
        best.ok_or_else(|| Error::contract("no pivot candidates on nonempty residual"))
    }
}

fn objective(cells: &[usize]) -> (usize, usize, Vec<usize>) {
    let spread = match (cells.first(), cells.last()) {
        (Some(a), Some(b)) => b - a,
        _ => 0,
    };
    (cells.len(), spread, cells.to_vec())
}

/// Extends every open node of the builder to completion using the searcher's
/// chosen pivots. Deterministic: open paths are processed in lexicographic
/// order and pivot choice depends only on the residual.
pub fn complete_tree(builder: &mut TreeBuilder<'_>, budget: usize) -> Result<()> {
    let masks = builder.masks().to_vec();
    let mut searcher = Searcher::new(&masks, budget);
    loop {
        let next = builder
            .open_paths()
            .into_iter()
            .find(|p| builder.residual(builder.open_node(p).unwrap()) != 0);
        let Some(path) = next else { break };
        let residual = builder.residual(builder.open_node(&path).unwrap());
        let (mv, _) = searcher.solve(residual)?;
        match mv {
            Move::Leaf => unreachable!("residual is nonzero"),
            Move::Free(p) => builder.apply(&path, TreeStep::Free(p))?,
            Move::Match { v, p } => builder.apply(&path, TreeStep::Match { v, p })?,
            Move::Split(v) => builder.apply(&path, TreeStep::Split(v))?,
        }
    }
    Ok(())
}

/// Builds a full matching tree for `g` by search alone.
pub fn search_tree(g: &Graph, budget: usize) -> Result<MatchingTree> {
    let mut builder = TreeBuilder::new(g)?;
    complete_tree(&mut builder, budget)?;
    builder.finish()
}
