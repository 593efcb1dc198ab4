//! Integral simplicial homology via boundary matrices and Smith normal form.
//!
//! This is the independent brute-force oracle: it never consumes Morse data.
//! The elimination works on sparse integer matrices, consuming unit pivots
//! chosen by a Markowitz-style minimal-fill heuristic; whatever submatrix
//! survives without unit entries is finished densely in arbitrary precision.

use std::cmp::Reverse;
use std::collections::{BinaryHeap, HashMap, HashSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::complexes::SimplicialComplex;
use crate::error::{Error, Result};

pub const DEFAULT_SNF_FACE_THRESHOLD: usize = 200_000;

/// A sparse integer matrix in row-major form.
#[derive(Debug, Clone, Default)]
pub struct SparseIntMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Per-row maps column -> nonzero entry.
    pub data: Vec<HashMap<u32, i64>>,
}

impl SparseIntMatrix {
    pub fn new(rows: usize, cols: usize) -> SparseIntMatrix {
        SparseIntMatrix {
            rows,
            cols,
            data: vec![HashMap::new(); rows],
        }
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        if v == 0 {
            self.data[r].remove(&(c as u32));
        } else {
            self.data[r].insert(c as u32, v);
        }
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        *self.data[r].get(&(c as u32)).unwrap_or(&0)
    }

    pub fn nnz(&self) -> usize {
        self.data.iter().map(|r| r.len()).sum()
    }

    /// Matrix product; used by the `boundary of boundary is zero` checks.
    pub fn multiply(&self, other: &SparseIntMatrix) -> SparseIntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = SparseIntMatrix::new(self.rows, other.cols);
        for r in 0..self.rows {
            let mut acc: HashMap<u32, i64> = HashMap::new();
            for (&k, &a) in &self.data[r] {
                for (&c, &b) in &other.data[k as usize] {
                    *acc.entry(c).or_insert(0) += a * b;
                }
            }
            acc.retain(|_, v| *v != 0);
            out.data[r] = acc;
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|r| r.is_empty())
    }
}

/// Outcome of the elimination: rank plus the invariant factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithResult {
    pub rank: usize,
    /// Diagonal d_1 | d_2 | ... | d_rank, all positive.
    pub factors: Vec<BigInt>,
}

impl SmithResult {
    pub fn torsion(&self) -> Vec<BigInt> {
        self.factors
            .iter()
            .filter(|d| !d.is_one())
            .cloned()
            .collect()
    }
}

struct Elimination {
    rows: Vec<HashMap<u32, i64>>,
    /// Column -> set of rows with a nonzero entry there.
    col_rows: Vec<HashSet<u32>>,
    /// Lazy min-heap of unit-pivot candidates as (cost, col, row). Entries
    /// may be stale; costs are re-validated on pop.
    heap: BinaryHeap<Reverse<(usize, u32, u32)>>,
    unit_pivots: usize,
    overflowed: bool,
}

impl Elimination {
    fn new(m: &SparseIntMatrix) -> Elimination {
        let mut col_rows = vec![HashSet::new(); m.cols];
        for (r, row) in m.data.iter().enumerate() {
            for &c in row.keys() {
                col_rows[c as usize].insert(r as u32);
            }
        }
        let mut elim = Elimination {
            rows: m.data.clone(),
            col_rows,
            heap: BinaryHeap::new(),
            unit_pivots: 0,
            overflowed: false,
        };
        for r in 0..elim.rows.len() {
            for (&c, &v) in &elim.rows[r] {
                if v == 1 || v == -1 {
                    let cost = elim.cost(r as u32, c);
                    elim.heap.push(Reverse((cost, c, r as u32)));
                }
            }
        }
        elim
    }

    /// Markowitz fill estimate (row_nnz - 1) * (col_nnz - 1).
    fn cost(&self, r: u32, c: u32) -> usize {
        (self.col_rows[c as usize].len() - 1) * (self.rows[r as usize].len() - 1)
    }

    /// Pops the cheapest still-valid unit pivot; stale entries are dropped
    /// or re-queued with their current cost.
    fn pick_unit_pivot(&mut self) -> Option<(u32, u32)> {
        while let Some(Reverse((cost, c, r))) = self.heap.pop() {
            match self.rows[r as usize].get(&c) {
                Some(&v) if v == 1 || v == -1 => {
                    let cur = self.cost(r, c);
                    if cur > cost {
                        self.heap.push(Reverse((cur, c, r)));
                    } else {
                        return Some((r, c));
                    }
                }
                _ => {}
            }
        }
        None
    }

    fn eliminate_unit(&mut self, pr: u32, pc: u32) -> Result<()> {
        let pivot = self.rows[pr as usize][&pc];
        debug_assert!(pivot == 1 || pivot == -1);
        let prow: Vec<(u32, i64)> = self.rows[pr as usize]
            .iter()
            .map(|(&c, &v)| (c, v))
            .collect();
        let targets: Vec<u32> = self.col_rows[pc as usize]
            .iter()
            .copied()
            .filter(|&r| r != pr)
            .collect();
        for r in targets {
            let coeff = self.rows[r as usize][&pc];
            // row_r -= coeff/pivot * row_p
            let factor = coeff * pivot; // pivot inverse is pivot itself
            for &(c, pv) in &prow {
                let cur = *self.rows[r as usize].get(&c).unwrap_or(&0);
                let delta = factor
                    .checked_mul(pv)
                    .ok_or(Error::Contract("i64 overflow in elimination".to_string()))?;
                let next = cur
                    .checked_sub(delta)
                    .ok_or(Error::Contract("i64 overflow in elimination".to_string()))?;
                if next == 0 {
                    self.rows[r as usize].remove(&c);
                    self.col_rows[c as usize].remove(&r);
                } else {
                    self.rows[r as usize].insert(c, next);
                    self.col_rows[c as usize].insert(r);
                    if next == 1 || next == -1 {
                        let cost = self.cost(r, c);
                        self.heap.push(Reverse((cost, c, r)));
                    }
                }
            }
        }
        // pivot row and column are now conceptually cleared by unimodular ops
        for &(c, _) in &prow {
            self.col_rows[c as usize].remove(&pr);
        }
        self.rows[pr as usize].clear();
        self.unit_pivots += 1;
        Ok(())
    }

    /// Runs the sparse unit-pivot phase; returns the leftover submatrix as a
    /// dense arbitrary-precision matrix.
    fn run(&mut self) -> Result<Vec<Vec<BigInt>>> {
        while let Some((r, c)) = self.pick_unit_pivot() {
            if let Err(e) = self.eliminate_unit(r, c) {
                self.overflowed = true;
                return Err(e);
            }
        }
        let live_rows: Vec<usize> = (0..self.rows.len())
            .filter(|&r| !self.rows[r].is_empty())
            .collect();
        let mut live_cols: Vec<u32> = live_rows
            .iter()
            .flat_map(|&r| self.rows[r].keys().copied())
            .collect();
        live_cols.sort_unstable();
        live_cols.dedup();
        let col_pos: HashMap<u32, usize> =
            live_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let mut dense = vec![vec![BigInt::zero(); live_cols.len()]; live_rows.len()];
        for (i, &r) in live_rows.iter().enumerate() {
            for (&c, &v) in &self.rows[r] {
                dense[i][col_pos[&c]] = BigInt::from(v);
            }
        }
        Ok(dense)
    }
}

/// Textbook Smith normal form on a dense arbitrary-precision matrix.
/// Returns the positive diagonal entries with the divisibility chain fixed.
fn dense_snf(mut m: Vec<Vec<BigInt>>) -> Vec<BigInt> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut diag: Vec<BigInt> = Vec::new();
    let mut t = 0usize;
    while t < rows.min(cols) {
        // find smallest nonzero entry in the remaining block
        let mut pivot: Option<(usize, usize)> = None;
        for r in t..rows {
            for c in t..cols {
                if !m[r][c].is_zero()
                    && pivot.map_or(true, |(pr, pc)| m[r][c].abs() < m[pr][pc].abs())
                {
                    pivot = Some((r, c));
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        m.swap(t, pr);
        for row in m.iter_mut() {
            row.swap(t, pc);
        }
        // reduce row and column against the pivot until it divides everything
        loop {
            let mut done = true;
            for r in (t + 1)..rows {
                if !m[r][t].is_zero() {
                    let q = div_round(&m[r][t], &m[t][t]);
                    for c in t..cols {
                        let sub = &q * &m[t][c];
                        m[r][c] -= sub;
                    }
                    if !m[r][t].is_zero() {
                        m.swap(t, r);
                        done = false;
                    }
                }
            }
            for c in (t + 1)..cols {
                if !m[t][c].is_zero() {
                    let q = div_round(&m[t][c], &m[t][t]);
                    for row in m.iter_mut().take(rows).skip(t) {
                        let sub = &q * &row[t];
                        row[c] -= sub;
                    }
                    if !m[t][c].is_zero() {
                        for row in m.iter_mut() {
                            row.swap(t, c);
                        }
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        // ensure the pivot divides every remaining entry
        let mut fixed = false;
        'outer: for r in (t + 1)..rows {
            for c in (t + 1)..cols {
                if !(&m[r][c] % &m[t][t]).is_zero() {
                    for cc in t..cols {
                        let add = m[r][cc].clone();
                        m[t][cc] += add;
                    }
                    fixed = true;
                    break 'outer;
                }
            }
        }
        if fixed {
            continue; // redo this pivot position
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

fn div_round(a: &BigInt, b: &BigInt) -> BigInt {
    // quotient rounded to nearest, which keeps remainders small;
    // div_rem truncates, so the remainder carries the sign of a
    let (q, r) = a.div_rem(b);
    if &r.abs() * 2 > b.abs() {
        if r.sign() == b.sign() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

/// Smith normal form of a sparse integer matrix: sparse unit-pivot phase,
/// dense finish for whatever remains. Exact over the integers.
pub fn smith_normal_form(m: &SparseIntMatrix) -> Result<SmithResult> {
    let mut elim = Elimination::new(m);
    let dense = match elim.run() {
        Ok(d) => d,
        Err(_) => {
            // rare i64 overflow: redo everything densely in BigInt
            let dense: Vec<Vec<BigInt>> = m
                .data
                .iter()
                .map(|row| {
                    let mut out = vec![BigInt::zero(); m.cols];
                    for (&c, &v) in row {
                        out[c as usize] = BigInt::from(v);
                    }
                    out
                })
                .collect();
            let diag = dense_snf(dense);
            let rank = diag.len();
            let mut factors = diag;
            factors.sort();
            return Ok(SmithResult { rank, factors });
        }
    };
    let tail = dense_snf(dense);
    let rank = elim.unit_pivots + tail.len();
    let mut factors = vec![BigInt::one(); elim.unit_pivots];
    factors.extend(tail);
    Ok(SmithResult { rank, factors })
}

/// Rank over the rationals by exact integer elimination. The unit-pivot
/// phase is division free; the dense finish uses fraction-free Bareiss
/// elimination. Agrees with the Smith normal form rank by construction,
/// which the property tests check.
pub fn rank(m: &SparseIntMatrix) -> Result<usize> {
    let mut elim = Elimination::new(m);
    match elim.run() {
        Ok(dense) => Ok(elim.unit_pivots + bareiss_rank(dense)),
        Err(_) => {
            let dense: Vec<Vec<BigInt>> = m
                .data
                .iter()
                .map(|row| {
                    let mut out = vec![BigInt::zero(); m.cols];
                    for (&c, &v) in row {
                        out[c as usize] = BigInt::from(v);
                    }
                    out
                })
                .collect();
            Ok(bareiss_rank(dense))
        }
    }
}

/// Fraction-free Gaussian elimination (Bareiss) rank on a dense matrix.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut prev = BigInt::one();
    let mut r = 0usize;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, pr);
        for i in (r + 1)..rows {
            for j in (c + 1)..cols {
                let num = &m[r][c] * &m[i][j] - &m[i][c] * &m[r][j];
                m[i][j] = num / &prev;
            }
            m[i][c] = BigInt::zero();
        }
        prev = m[r][c].clone();
        r += 1;
    }
    r
}

/// The (reduced) chain complex of a simplicial complex: bases per dimension
/// and boundary matrices, with `boundary(0)` mapping vertices to the empty
/// face.
#[derive(Debug)]
pub struct ChainComplex {
    /// boundaries[c] maps card-(c+1) faces to card-c faces for c >= 0;
    /// index by dimension d via boundaries[d] (d = card - 1).
    pub boundaries: Vec<SparseIntMatrix>,
    pub faces_per_card: Vec<usize>,
}

impl ChainComplex {
    pub fn boundary(&self, dim: usize) -> Option<&SparseIntMatrix> {
        self.boundaries.get(dim)
    }

    /// Checks the simplicial identity for every consecutive pair.
    pub fn boundary_of_boundary_is_zero(&self) -> bool {
        for d in 1..self.boundaries.len() {
            if !self.boundaries[d - 1]
                .multiply(&self.boundaries[d])
                .is_zero()
            {
                return false;
            }
        }
        true
    }
}

/// Builds the boundary matrices of `k`, with faces sorted ascending within
/// each dimension and the sign convention `(-1)^position` for the removed
/// vertex.
pub fn boundary_matrices(k: &SimplicialComplex) -> ChainComplex {
    let max_card = k.max_card();
    let mut boundaries = Vec::new();
    for card in 1..=max_card {
        let rows = k.faces_of_card(card - 1).len();
        let cols = k.faces_of_card(card).len();
        let mut m = SparseIntMatrix::new(rows, cols);
        for (col, f) in k.faces_of_card(card).iter().enumerate() {
            for (facet, sign) in f.facets() {
                let id = k.id_of(&facet).expect("downward closed");
                m.set(id.pos, col, sign);
            }
        }
        boundaries.push(m);
    }
    ChainComplex {
        boundaries,
        faces_per_card: (0..=max_card).map(|c| k.faces_of_card(c).len()).collect(),
    }
}

/// Reduced homology: per-dimension Betti numbers and torsion factors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HomologyResult {
    /// betti[i] is the reduced Betti number in dimension i-1 (index 0 holds
    /// dimension -1).
    pub betti: Vec<usize>,
    /// torsion[i]: invariant factors > 1 of the boundary one dimension up.
    pub torsion: Vec<Vec<BigInt>>,
}

impl HomologyResult {
    pub fn betti_in_dim(&self, dim: i32) -> usize {
        let idx = (dim + 1) as usize;
        self.betti.get(idx).copied().unwrap_or(0)
    }

    pub fn torsion_in_dim(&self, dim: i32) -> &[BigInt] {
        let idx = (dim + 1) as usize;
        self.torsion.get(idx).map(|t| t.as_slice()).unwrap_or(&[])
    }

    pub fn has_torsion(&self) -> bool {
        self.torsion.iter().any(|t| !t.is_empty())
    }

    /// Dimensions (>= -1) with nonzero reduced Betti number.
    pub fn support(&self) -> Vec<(i32, usize)> {
        self.betti
            .iter()
            .enumerate()
            .filter(|(_, &b)| b > 0)
            .map(|(i, &b)| (i as i32 - 1, b))
            .collect()
    }

    pub fn report(&self, id: &str) -> String {
        let mut out = String::new();
        for (i, &b) in self.betti.iter().enumerate() {
            let tor: Vec<String> = self.torsion[i].iter().map(|t| t.to_string()).collect();
            out.push_str(&format!(
                "homology {id} dim={} betti={} torsion=[{}]\n",
                i as i32 - 1,
                b,
                tor.join(",")
            ));
        }
        out
    }
}

/// Integral reduced homology of `k`. Ranks always; torsion via full Smith
/// normal form when the face count is at most `snf_threshold` (above it,
/// torsion checking is skipped and reported empty).
pub fn homology(k: &SimplicialComplex, snf_threshold: usize) -> Result<HomologyResult> {
    let chain = boundary_matrices(k);
    homology_of_chain(&chain, k.total_faces() <= snf_threshold)
}

pub fn homology_of_chain(chain: &ChainComplex, with_torsion: bool) -> Result<HomologyResult> {
    let ncards = chain.faces_per_card.len();
    let mut snf: Vec<Option<SmithResult>> = Vec::new();
    let mut ranks: Vec<usize> = Vec::new();
    for m in &chain.boundaries {
        if with_torsion {
            let s = smith_normal_form(m)?;
            ranks.push(s.rank);
            snf.push(Some(s));
        } else {
            ranks.push(rank(m)?);
            snf.push(None);
        }
    }
    let rank_at = |card: usize| -> usize {
        // boundary from card faces to card-1 faces sits at index card-1
        if card == 0 {
            // the map from the empty face down is zero
            0
        } else {
            ranks.get(card - 1).copied().unwrap_or(0)
        }
    };
    let mut betti = Vec::with_capacity(ncards);
    let mut torsion = Vec::with_capacity(ncards);
    for card in 0..ncards {
        let f = chain.faces_per_card[card];
        let b = f - rank_at(card) - rank_at(card + 1);
        betti.push(b);
        let t = snf
            .get(card)
            .and_then(|s| s.as_ref())
            .map(|s| s.torsion())
            .unwrap_or_default();
        torsion.push(t);
    }
    Ok(HomologyResult { betti, torsion })
}
