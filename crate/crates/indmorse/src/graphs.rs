//! Graph families: Kneser and stable Kneser graphs, the cycle-with-diagonals
//! family `DC`, the end graphs `E` and end ladders `EL`, cartesian products,
//! and the vertex classification of `SG_{n,2}` into end/middle classes.
//!
//! All generators emit vertices in lexicographic label order so that every
//! downstream artifact (complexes, matchings, reports) is deterministic.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use crate::error::{Error, Result};

/// A vertex label. Subset labels are strictly increasing integer sets,
/// cycle labels are the `c_i` vertices of the `DC`/`C` families, plain
/// integers label bipartite and path/cycle vertices, and pairs label
/// cartesian product vertices.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VertexLabel {
    Int(u32),
    Cycle(u32),
    Subset(Vec<u32>),
    Pair(Box<VertexLabel>, Box<VertexLabel>),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Int(i) => write!(f, "{i}"),
            VertexLabel::Cycle(i) => write!(f, "c{i}"),
            VertexLabel::Subset(s) => {
                write!(f, "{{")?;
                for (i, x) in s.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, "}}")
            }
            VertexLabel::Pair(a, b) => write!(f, "({a},{b})"),
        }
    }
}

impl VertexLabel {
    pub fn parse(s: &str) -> Result<VertexLabel> {
        let bad = || Error::parameter(format!("bad vertex label `{s}`"));
        if let Some(rest) = s.strip_prefix('c') {
            if let Ok(i) = rest.parse() {
                return Ok(VertexLabel::Cycle(i));
            }
        }
        if let Ok(i) = s.parse() {
            return Ok(VertexLabel::Int(i));
        }
        if let Some(inner) = s.strip_prefix('{').and_then(|t| t.strip_suffix('}')) {
            let mut v = Vec::new();
            if !inner.is_empty() {
                for part in inner.split(',') {
                    v.push(part.parse().map_err(|_| bad())?);
                }
            }
            return Ok(VertexLabel::Subset(v));
        }
        if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
            // split at the top-level comma
            let mut depth = 0usize;
            for (i, ch) in inner.char_indices() {
                match ch {
                    '(' | '{' => depth += 1,
                    ')' | '}' => depth = depth.saturating_sub(1),
                    ',' if depth == 0 => {
                        let a = VertexLabel::parse(&inner[..i])?;
                        let b = VertexLabel::parse(&inner[i + 1..])?;
                        return Ok(VertexLabel::Pair(Box::new(a), Box::new(b)));
                    }
                    _ => {}
                }
            }
        }
        Err(bad())
    }
}

/// An immutable labeled graph with a symmetric irreflexive adjacency relation.
#[derive(Debug, Clone)]
pub struct Graph {
    family: String,
    labels: Vec<VertexLabel>,
    neighbors: Vec<Vec<u32>>,
}

impl Graph {
    /// Builds a graph from labels and an adjacency predicate. Labels are
    /// sorted; the predicate is evaluated on each unordered label pair.
    pub fn from_predicate<F>(family: &str, mut labels: Vec<VertexLabel>, adj: F) -> Result<Graph>
    where
        F: Fn(&VertexLabel, &VertexLabel) -> bool,
    {
        labels.sort();
        labels.dedup();
        let n = labels.len();
        let mut neighbors = vec![Vec::new(); n];
        for i in 0..n {
            for j in (i + 1)..n {
                if adj(&labels[i], &labels[j]) {
                    neighbors[i].push(j as u32);
                    neighbors[j].push(i as u32);
                }
            }
        }
        for nb in &mut neighbors {
            nb.sort_unstable();
        }
        Ok(Graph {
            family: family.to_string(),
            labels,
            neighbors,
        })
    }

    /// Builds a graph from labels and explicit label-pair edges.
    pub fn from_edges(
        family: &str,
        labels: Vec<VertexLabel>,
        edges: &[(VertexLabel, VertexLabel)],
    ) -> Result<Graph> {
        let set: BTreeSet<(VertexLabel, VertexLabel)> = edges
            .iter()
            .map(|(a, b)| {
                if a < b {
                    (a.clone(), b.clone())
                } else {
                    (b.clone(), a.clone())
                }
            })
            .collect();
        for (a, b) in &set {
            if a == b {
                return Err(Error::parameter(format!("self-loop at {a}")));
            }
        }
        Graph::from_predicate(family, labels, |a, b| {
            let key = if a < b {
                (a.clone(), b.clone())
            } else {
                (b.clone(), a.clone())
            };
            set.contains(&key)
        })
    }

    pub fn family(&self) -> &str {
        &self.family
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.iter().map(|nb| nb.len()).sum::<usize>() / 2
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn label(&self, v: u32) -> &VertexLabel {
        &self.labels[v as usize]
    }

    pub fn index_of(&self, l: &VertexLabel) -> Option<u32> {
        self.labels.binary_search(l).ok().map(|i| i as u32)
    }

    pub fn neighbors(&self, v: u32) -> &[u32] {
        &self.neighbors[v as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.neighbors[v as usize].len()
    }

    pub fn are_adjacent(&self, u: u32, v: u32) -> bool {
        self.neighbors[u as usize].binary_search(&v).is_ok()
    }

    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.n() as u32).flat_map(move |i| {
            self.neighbors[i as usize]
                .iter()
                .copied()
                .filter(move |&j| i < j)
                .map(move |j| (i, j))
        })
    }

    /// Neighbor bitmasks, available for graphs with at most 64 vertices.
    pub fn neighbor_masks(&self) -> Result<Vec<u64>> {
        if self.n() > 64 {
            return Err(Error::Budget {
                what: format!("bitmask adjacency for {} vertices", self.n()),
                budget: 64,
            });
        }
        Ok(self
            .neighbors
            .iter()
            .map(|nb| nb.iter().fold(0u64, |m, &j| m | (1 << j)))
            .collect())
    }

    pub fn is_regular(&self, d: usize) -> bool {
        self.neighbors.iter().all(|nb| nb.len() == d)
    }

    pub fn is_bipartite(&self) -> bool {
        let n = self.n();
        let mut color = vec![-1i8; n];
        for s in 0..n {
            if color[s] >= 0 {
                continue;
            }
            color[s] = 0;
            let mut stack = vec![s as u32];
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if color[w as usize] < 0 {
                        color[w as usize] = 1 - color[u as usize];
                        stack.push(w);
                    } else if color[w as usize] == color[u as usize] {
                        return false;
                    }
                }
            }
        }
        true
    }

    /// Induced subgraph on the given vertex indices, labels preserved.
    pub fn induced_subgraph(&self, s: &[u32]) -> Result<Graph> {
        for &v in s {
            if v as usize >= self.n() {
                return Err(Error::parameter(format!("unknown vertex index {v}")));
            }
        }
        let set: BTreeSet<u32> = s.iter().copied().collect();
        let labels: Vec<VertexLabel> = set
            .iter()
            .map(|&v| self.labels[v as usize].clone())
            .collect();
        let by_label: HashMap<&VertexLabel, u32> =
            set.iter().map(|&v| (&self.labels[v as usize], v)).collect();
        Graph::from_predicate("induced", labels, |a, b| {
            self.are_adjacent(by_label[a], by_label[b])
        })
    }

    /// Serializes to the text graph format. Byte-deterministic.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "graph {} {} {}\n",
            self.family,
            self.n(),
            self.edge_count()
        ));
        for (i, l) in self.labels.iter().enumerate() {
            out.push_str(&format!("v {i} {l}\n"));
        }
        for (i, j) in self.edges() {
            out.push_str(&format!("e {i} {j}\n"));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Graph> {
        let mut family = String::new();
        let mut labels = Vec::new();
        let mut edges: Vec<(u32, u32)> = Vec::new();
        let mut decl: (usize, usize) = (0, 0);
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let tag = parts.next().unwrap();
            let err = |msg: &str| Error::Parse {
                line: ln + 1,
                msg: msg.to_string(),
            };
            match tag {
                "graph" => {
                    let rest: Vec<&str> = parts.collect();
                    if rest.len() < 3 {
                        return Err(err("graph header needs family, |V|, |E|"));
                    }
                    family = rest[..rest.len() - 2].join(" ");
                    decl = (
                        rest[rest.len() - 2].parse().map_err(|_| err("bad |V|"))?,
                        rest[rest.len() - 1].parse().map_err(|_| err("bad |E|"))?,
                    );
                }
                "v" => {
                    let idx: usize = parts
                        .next()
                        .ok_or_else(|| err("missing index"))?
                        .parse()
                        .map_err(|_| err("bad index"))?;
                    if idx != labels.len() {
                        return Err(err("vertex indices must be consecutive"));
                    }
                    let label = parts.next().ok_or_else(|| err("missing label"))?;
                    labels.push(VertexLabel::parse(label).map_err(|e| Error::Parse {
                        line: ln + 1,
                        msg: e.to_string(),
                    })?);
                }
                "e" => {
                    let i: u32 = parts
                        .next()
                        .ok_or_else(|| err("missing endpoint"))?
                        .parse()
                        .map_err(|_| err("bad endpoint"))?;
                    let j: u32 = parts
                        .next()
                        .ok_or_else(|| err("missing endpoint"))?
                        .parse()
                        .map_err(|_| err("bad endpoint"))?;
                    if i >= j {
                        return Err(err("edge endpoints must satisfy i < j"));
                    }
                    edges.push((i, j));
                }
                _ => return Err(err("unknown line tag")),
            }
        }
        if labels.is_empty() {
            return Err(Error::Parse {
                line: 0,
                msg: "no vertices".into(),
            });
        }
        if decl.0 != labels.len() || decl.1 != edges.len() {
            return Err(Error::Parse {
                line: 0,
                msg: "header counts disagree with body".into(),
            });
        }
        let pairs: Vec<(VertexLabel, VertexLabel)> = edges
            .iter()
            .map(|&(i, j)| (labels[i as usize].clone(), labels[j as usize].clone()))
            .collect();
        Graph::from_edges(&family, labels, &pairs)
    }
}

/// True iff `subset` contains no two cyclically consecutive elements of `[m]`,
/// i.e. no pair `{i, i+1}` and not both `1` and `m`.
pub fn is_stable(subset: &[u32], m: u32) -> Result<bool> {
    for &x in subset {
        if x < 1 || x > m {
            return Err(Error::parameter(format!("entry {x} out of range 1..{m}")));
        }
    }
    let set: BTreeSet<u32> = subset.iter().copied().collect();
    for &x in &set {
        let next = if x == m { 1 } else { x + 1 };
        if set.contains(&next) {
            return Ok(false);
        }
    }
    Ok(true)
}

fn subsets_of(m: u32, n: usize) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(start: u32, m: u32, n: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for x in start..=m {
            cur.push(x);
            rec(x + 1, m, n, cur, out);
            cur.pop();
        }
    }
    rec(1, m, n, &mut cur, &mut out);
    out
}

/// All stable n-subsets of `[m]` in lexicographic order.
pub fn stable_subsets(n: u32, m: u32) -> Vec<Vec<u32>> {
    subsets_of(m, n as usize)
        .into_iter()
        .filter(|s| is_stable(s, m).unwrap())
        .collect()
}

fn disjoint(a: &[u32], b: &[u32]) -> bool {
    a.iter().all(|x| !b.contains(x))
}

/// The Kneser graph: n-subsets of `[2n+k]`, edges between disjoint subsets.
pub fn kneser(n: u32, k: u32) -> Result<Graph> {
    if n < 1 {
        return Err(Error::parameter("kneser requires n >= 1".to_string()));
    }
    let m = 2 * n + k;
    let labels = subsets_of(m, n as usize)
        .into_iter()
        .map(VertexLabel::Subset)
        .collect();
    Graph::from_predicate(&format!("kg {n} {k}"), labels, |a, b| match (a, b) {
        (VertexLabel::Subset(x), VertexLabel::Subset(y)) => disjoint(x, y),
        _ => unreachable!(),
    })
}

/// The stable Kneser (Schrijver) graph: the subgraph of the Kneser graph
/// induced by the stable n-subsets.
pub fn stable_kneser(n: u32, k: u32) -> Result<Graph> {
    if n < 1 {
        return Err(Error::parameter(
            "stable_kneser requires n >= 1".to_string(),
        ));
    }
    let m = 2 * n + k;
    let labels = stable_subsets(n, m)
        .into_iter()
        .map(VertexLabel::Subset)
        .collect();
    Graph::from_predicate(&format!("sg {n} {k}"), labels, |a, b| match (a, b) {
        (VertexLabel::Subset(x), VertexLabel::Subset(y)) => disjoint(x, y),
        _ => unreachable!(),
    })
}

pub fn path(j: u32) -> Result<Graph> {
    if j < 1 {
        return Err(Error::parameter("path requires >= 1 vertex".to_string()));
    }
    let labels = (1..=j).map(VertexLabel::Int).collect();
    Graph::from_predicate(&format!("p {j}"), labels, |a, b| match (a, b) {
        (VertexLabel::Int(x), VertexLabel::Int(y)) => x.abs_diff(*y) == 1,
        _ => unreachable!(),
    })
}

pub fn cycle(j: u32) -> Result<Graph> {
    if j < 3 {
        return Err(Error::parameter("cycle requires >= 3 vertices".to_string()));
    }
    let labels = (1..=j).map(VertexLabel::Int).collect();
    Graph::from_predicate(&format!("c {j}"), labels, |a, b| match (a, b) {
        (VertexLabel::Int(x), VertexLabel::Int(y)) => {
            x.abs_diff(*y) == 1 || x.abs_diff(*y) == j - 1
        }
        _ => unreachable!(),
    })
}

pub fn complete(j: u32) -> Result<Graph> {
    if j < 1 {
        return Err(Error::parameter(
            "complete requires >= 1 vertex".to_string(),
        ));
    }
    let labels = (1..=j).map(VertexLabel::Int).collect();
    Graph::from_predicate(&format!("k {j}"), labels, |_, _| true)
}

/// Complete bipartite graph on `1..=a+b` with parts `1..=a` and `a+1..=a+b`.
pub fn complete_bipartite(a: u32, b: u32) -> Result<Graph> {
    if a < 1 || b < 1 {
        return Err(Error::parameter(
            "complete_bipartite requires both parts nonempty".to_string(),
        ));
    }
    let labels = (1..=a + b).map(VertexLabel::Int).collect();
    Graph::from_predicate(&format!("kb {a} {b}"), labels, |x, y| match (x, y) {
        (VertexLabel::Int(i), VertexLabel::Int(j)) => (*i <= a) != (*j <= a),
        _ => unreachable!(),
    })
}

fn cyc_index(i: i64, modulus: i64) -> u32 {
    (((i - 1).rem_euclid(modulus)) + 1) as u32
}

/// `DC_{2n+2}`: a (2n+2)-cycle on `c_1..c_{2n+2}` augmented by antipodal edges.
pub fn dc_cycle(n: u32) -> Result<Graph> {
    if n < 2 {
        return Err(Error::parameter("dc_cycle requires n >= 2".to_string()));
    }
    let m = (2 * n + 2) as i64;
    let labels: Vec<VertexLabel> = (1..=2 * n + 2).map(VertexLabel::Cycle).collect();
    let mut edges = Vec::new();
    for i in 1..=m {
        edges.push((
            VertexLabel::Cycle(i as u32),
            VertexLabel::Cycle(cyc_index(i + 1, m)),
        ));
    }
    for i in 1..=(n as i64 + 1) {
        edges.push((
            VertexLabel::Cycle(i as u32),
            VertexLabel::Cycle(cyc_index(i + n as i64 + 1, m)),
        ));
    }
    Graph::from_edges(&format!("dc {n}"), labels, &edges)
}

/// `C_{n+1}` on the odd-indexed cycle labels, used when `n` is even.
pub fn c_odd(n: u32) -> Result<Graph> {
    if n < 2 || n % 2 != 0 {
        return Err(Error::parameter("c_odd requires even n >= 2".to_string()));
    }
    let m = (2 * n + 2) as i64;
    let labels: Vec<VertexLabel> = (1..=2 * n + 1).step_by(2).map(VertexLabel::Cycle).collect();
    let mut edges = Vec::new();
    for i in (1..=2 * n + 1).step_by(2) {
        edges.push((
            VertexLabel::Cycle(i),
            VertexLabel::Cycle(cyc_index(i as i64 + 2, m)),
        ));
    }
    Graph::from_edges(&format!("codd {n}"), labels, &edges)
}

/// `E_{2n+2}`: the end graph of `SG_{n,2}`. For odd `n` this is
/// `K_{n+1,n+1}` plus `DC_{2n+2}` joined by a spoke at every vertex; for even
/// `n` it is `K_{n+1,n+1}` plus the odd cycle `C_{n+1}` with two spokes per
/// cycle vertex.
pub fn e_graph(n: u32) -> Result<Graph> {
    if n < 2 {
        return Err(Error::parameter("e_graph requires n >= 2".to_string()));
    }
    let m = 2 * n + 2;
    let mm = m as i64;
    let mut labels: Vec<VertexLabel> = (1..=m).map(VertexLabel::Int).collect();
    let mut edges = Vec::new();
    for i in (1..=m).step_by(2) {
        for j in (2..=m).step_by(2) {
            edges.push((VertexLabel::Int(i), VertexLabel::Int(j)));
        }
    }
    if n % 2 == 1 {
        let dc = dc_cycle(n)?;
        labels.extend(dc.labels().iter().cloned());
        for (i, j) in dc.edges() {
            edges.push((dc.label(i).clone(), dc.label(j).clone()));
        }
        for i in 1..=m {
            edges.push((VertexLabel::Int(i), VertexLabel::Cycle(i)));
        }
    } else {
        let co = c_odd(n)?;
        labels.extend(co.labels().iter().cloned());
        for (i, j) in co.edges() {
            edges.push((co.label(i).clone(), co.label(j).clone()));
        }
        for i in (1..=2 * n + 1).step_by(2) {
            edges.push((VertexLabel::Cycle(i), VertexLabel::Int(i)));
            edges.push((
                VertexLabel::Cycle(i),
                VertexLabel::Int(cyc_index(i as i64 + n as i64 + 1, mm)),
            ));
        }
    }
    Graph::from_edges(&format!("e {n}"), labels, &edges)
}

/// `EL_r` in ladder form: rails `a_1..a_r` and `b_1..b_{r+2}` with rungs
/// `{a_i, b_{i+1}}`. Reproduces `EL_0 = K_2` and `EL_1 = K_{1,3}` and is
/// gated by induced-subgraph isomorphism checks against the `E` family.
pub fn el_graph(r: u32) -> Result<Graph> {
    let a = |i: u32| VertexLabel::Cycle(i);
    let b = |i: u32| VertexLabel::Int(i);
    let mut labels: Vec<VertexLabel> = (1..=r).map(a).collect();
    labels.extend((1..=r + 2).map(b));
    let mut edges = Vec::new();
    for i in 1..r {
        edges.push((a(i), a(i + 1)));
    }
    for i in 1..=r + 1 {
        edges.push((b(i), b(i + 1)));
    }
    for i in 1..=r {
        edges.push((a(i), b(i + 1)));
    }
    Graph::from_edges(&format!("el {r}"), labels, &edges)
}

/// Cartesian product: `(u,v) ~ (u',v')` iff `u=u'` and `v~v'` in `H`, or
/// `v=v'` and `u~u'` in `G`.
pub fn cartesian_product(g: &Graph, h: &Graph) -> Result<Graph> {
    if g.n() == 0 || h.n() == 0 {
        return Err(Error::parameter(
            "cartesian product of empty graph".to_string(),
        ));
    }
    let mut labels = Vec::with_capacity(g.n() * h.n());
    for lu in g.labels() {
        for lv in h.labels() {
            labels.push(VertexLabel::Pair(
                Box::new(lu.clone()),
                Box::new(lv.clone()),
            ));
        }
    }
    Graph::from_predicate(
        &format!("prod ({}) ({})", g.family(), h.family()),
        labels,
        |x, y| match (x, y) {
            (VertexLabel::Pair(u, v), VertexLabel::Pair(u2, v2)) => {
                let gu = g.index_of(u).unwrap();
                let gu2 = g.index_of(u2).unwrap();
                let hv = h.index_of(v).unwrap();
                let hv2 = h.index_of(v2).unwrap();
                (gu == gu2 && h.are_adjacent(hv, hv2)) || (hv == hv2 && g.are_adjacent(gu, gu2))
            }
            _ => unreachable!(),
        },
    )
}

pub fn p_param(n: u32) -> u32 {
    if n % 2 == 1 {
        n
    } else {
        n - 1
    }
}

pub fn o_param(n: u32) -> u32 {
    if (n + 1) % 2 == 0 {
        (n + 1) / 2
    } else {
        (n + 2) / 2
    }
}

/// Class of an `SG_{n,2}` vertex in the end/middle partition.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexClass {
    Alternating,
    Bipartite,
    Middle,
}

/// Partition of the vertices of `SG_{n,2}` into alternating end, bipartite
/// end, and middle vertices, aligned with the vertex order of
/// `stable_kneser(n, 2)`.
#[derive(Debug, Clone)]
pub struct VertexClassification {
    pub classes: Vec<VertexClass>,
    pub alternating: usize,
    pub bipartite: usize,
    pub middle: usize,
}

impl VertexClassification {
    pub fn indices_of(&self, class: VertexClass) -> Vec<u32> {
        self.classes
            .iter()
            .enumerate()
            .filter(|(_, &c)| c == class)
            .map(|(i, _)| i as u32)
            .collect()
    }
}

/// Classifies the stable n-subsets of `[2n+2]`: alternating end vertices are
/// the cyclic rotations of the base pattern
/// `{1,3,...,p(n), p(n)+3, p(n)+5, ..., 2n}`, bipartite end vertices are the
/// n-subsets of the evens or of the odds, middle vertices are the rest.
pub fn classify_sg_n2(n: u32) -> Result<VertexClassification> {
    if n < 2 {
        return Err(Error::parameter(
            "classify_sg_n2 requires n >= 2".to_string(),
        ));
    }
    let m = 2 * n + 2;
    let p = p_param(n);
    let mut base: Vec<u32> = (1..=p).step_by(2).collect();
    let mut x = p + 3;
    while x <= 2 * n {
        base.push(x);
        x += 2;
    }
    debug_assert_eq!(base.len(), n as usize);
    let mut orbit: BTreeSet<Vec<u32>> = BTreeSet::new();
    for shift in 0..m {
        let mut rotated: Vec<u32> = base
            .iter()
            .map(|&v| cyc_index(v as i64 + shift as i64, m as i64))
            .collect();
        rotated.sort_unstable();
        orbit.insert(rotated);
    }
    let mut classes = Vec::new();
    let mut counts = [0usize; 3];
    for s in stable_subsets(n, m) {
        let class = if orbit.contains(&s) {
            VertexClass::Alternating
        } else if s.iter().all(|v| v % 2 == 0) || s.iter().all(|v| v % 2 == 1) {
            VertexClass::Bipartite
        } else {
            VertexClass::Middle
        };
        counts[match class {
            VertexClass::Alternating => 0,
            VertexClass::Bipartite => 1,
            VertexClass::Middle => 2,
        }] += 1;
        classes.push(class);
    }
    Ok(VertexClassification {
        classes,
        alternating: counts[0],
        bipartite: counts[1],
        middle: counts[2],
    })
}

/// Exact chromatic number by backtracking over color assignments, capped in
/// size. A verification oracle, not a production algorithm.
pub fn chromatic_number_exact(g: &Graph, cap: usize) -> Result<u32> {
    if g.n() > cap {
        return Err(Error::Budget {
            what: format!("chromatic number of {} vertices", g.n()),
            budget: cap,
        });
    }
    if g.n() == 0 {
        return Ok(0);
    }
    // order vertices by descending degree for earlier pruning
    let mut order: Vec<u32> = (0..g.n() as u32).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(g.degree(v)));

    fn feasible(
        g: &Graph,
        order: &[u32],
        pos: usize,
        colors: &mut Vec<i32>,
        num: u32,
        max_used: u32,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        let limit = num.min(max_used + 2);
        for c in 0..limit {
            if g.neighbors(v)
                .iter()
                .all(|&w| colors[w as usize] != c as i32)
            {
                colors[v as usize] = c as i32;
                if feasible(g, order, pos + 1, colors, num, max_used.max(c + 1)) {
                    return true;
                }
                colors[v as usize] = -1;
            }
        }
        false
    }

    for num in 1..=g.n() as u32 {
        let mut colors = vec![-1i32; g.n()];
        if feasible(g, &order, 0, &mut colors, num, 0) {
            return Ok(num);
        }
    }
    unreachable!("a graph is always colorable with |V| colors")
}

/// Stable vertex refinement colors (degree sequences iterated to a fixed
/// point), used as an isomorphism invariant and candidate filter.
fn wl_colors(g: &Graph) -> Vec<u64> {
    let mut colors: Vec<u64> = (0..g.n()).map(|v| g.degree(v as u32) as u64).collect();
    for _ in 0..g.n() {
        let mut sigs: Vec<(u64, Vec<u64>)> = (0..g.n())
            .map(|v| {
                let mut nb: Vec<u64> = g
                    .neighbors(v as u32)
                    .iter()
                    .map(|&w| colors[w as usize])
                    .collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let mut sorted: Vec<&(u64, Vec<u64>)> = sigs.iter().collect();
        sorted.sort();
        sorted.dedup();
        let lookup: HashMap<&(u64, Vec<u64>), u64> = sorted
            .iter()
            .enumerate()
            .map(|(i, s)| (*s, i as u64))
            .collect();
        let next: Vec<u64> = sigs.iter().map(|s| lookup[s]).collect();
        if next == colors {
            break;
        }
        drop(sigs.drain(..));
        colors = next;
    }
    colors
}

/// Exact isomorphism test by backtracking with refinement-color pruning,
/// capped at 64 vertices per side.
pub fn is_isomorphic_small(g: &Graph, h: &Graph) -> Result<bool> {
    if g.n() > 64 || h.n() > 64 {
        return Err(Error::Budget {
            what: format!("isomorphism test on {}/{} vertices", g.n(), h.n()),
            budget: 64,
        });
    }
    if g.n() != h.n() || g.edge_count() != h.edge_count() {
        return Ok(false);
    }
    let cg = wl_colors(g);
    let ch = wl_colors(h);
    let mut mg: Vec<u64> = cg.clone();
    let mut mh: Vec<u64> = ch.clone();
    mg.sort_unstable();
    mh.sort_unstable();
    if mg != mh {
        return Ok(false);
    }
    // map vertices of g in order of rarest color first
    let mut freq: HashMap<u64, usize> = HashMap::new();
    for &c in &cg {
        *freq.entry(c).or_insert(0) += 1;
    }
    let mut order: Vec<u32> = (0..g.n() as u32).collect();
    order.sort_by_key(|&v| (freq[&cg[v as usize]], v));

    fn rec(
        g: &Graph,
        h: &Graph,
        cg: &[u64],
        ch: &[u64],
        order: &[u32],
        pos: usize,
        map: &mut Vec<i32>,
        used: &mut Vec<bool>,
    ) -> bool {
        if pos == order.len() {
            return true;
        }
        let v = order[pos];
        for w in 0..h.n() as u32 {
            if used[w as usize] || ch[w as usize] != cg[v as usize] {
                continue;
            }
            let ok = order[..pos].iter().all(|&u| {
                let mu = map[u as usize] as u32;
                g.are_adjacent(v, u) == h.are_adjacent(w, mu)
            });
            if ok {
                map[v as usize] = w as i32;
                used[w as usize] = true;
                if rec(g, h, cg, ch, order, pos + 1, map, used) {
                    return true;
                }
                map[v as usize] = -1;
                used[w as usize] = false;
            }
        }
        false
    }

    let mut map = vec![-1i32; g.n()];
    let mut used = vec![false; h.n()];
    Ok(rec(g, h, &cg, &ch, &order, 0, &mut map, &mut used))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn stability_check() {
        assert!(is_stable(&[1, 3], 6).unwrap());
        assert!(!is_stable(&[1, 6], 6).unwrap());
        assert!(is_stable(&[2, 4, 6], 7).unwrap());
        assert!(is_stable(&[2, 4, 6], 6).unwrap());
        assert!(!is_stable(&[2, 3], 6).unwrap());
        assert!(is_stable(&[], 5).unwrap());
        assert!(is_stable(&[4], 6).unwrap());
        assert!(matches!(is_stable(&[7], 6), Err(Error::Parameter(_))));
    }

    #[test]
    fn stable_kneser_small() {
        let g = stable_kneser(2, 1).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(g.edge_count(), 5);
        assert!(g.is_regular(2));

        let g = stable_kneser(1, 2).unwrap();
        assert_eq!(g.n(), 4);
        assert_eq!(g.edge_count(), 6);

        assert_eq!(stable_kneser(2, 2).unwrap().n(), 9);
        assert_eq!(stable_kneser(4, 2).unwrap().n(), 25);
        assert_eq!(stable_kneser(5, 2).unwrap().n(), 36);
    }

    #[test]
    fn kneser_small() {
        let g = kneser(1, 1).unwrap();
        assert_eq!((g.n(), g.edge_count()), (3, 3));
        let petersen = kneser(2, 1).unwrap();
        assert_eq!((petersen.n(), petersen.edge_count()), (10, 15));
        assert!(petersen.is_regular(3));
        let g = kneser(2, 0).unwrap();
        assert_eq!((g.n(), g.edge_count()), (6, 3));
        assert!(g.is_regular(1));
    }

    #[test]
    fn basic_graphs() {
        let p1 = path(1).unwrap();
        assert_eq!((p1.n(), p1.edge_count()), (1, 0));
        let c5 = cycle(5).unwrap();
        assert_eq!((c5.n(), c5.edge_count()), (5, 5));
        let kb = complete_bipartite(4, 4).unwrap();
        assert_eq!((kb.n(), kb.edge_count()), (8, 16));
        assert!(cycle(2).is_err());
    }

    #[test]
    fn dc_family() {
        let dc8 = dc_cycle(3).unwrap();
        assert_eq!((dc8.n(), dc8.edge_count()), (8, 12));
        assert!(dc8.is_regular(3));
        let dc6 = dc_cycle(2).unwrap();
        assert_eq!((dc6.n(), dc6.edge_count()), (6, 9));
        assert!(dc6.is_regular(3));
        assert!(dc6.is_bipartite());
        assert!(is_isomorphic_small(&dc6, &complete_bipartite(3, 3).unwrap()).unwrap());
        for n in 2..8 {
            assert!(dc_cycle(n).unwrap().is_regular(3));
        }
        assert!(dc_cycle(1).is_err());
    }

    #[test]
    fn c_odd_family() {
        let g = c_odd(4).unwrap();
        assert_eq!((g.n(), g.edge_count()), (5, 5));
        assert!(g.is_regular(2));
        let tri = c_odd(2).unwrap();
        assert_eq!((tri.n(), tri.edge_count()), (3, 3));
        let g = c_odd(6).unwrap();
        assert_eq!(g.n(), 7);
        assert!(g.is_regular(2));
        assert!(c_odd(3).is_err());
    }

    #[test]
    fn e_family_counts() {
        let e8 = e_graph(3).unwrap();
        assert_eq!((e8.n(), e8.edge_count()), (16, 36));
        let e10 = e_graph(4).unwrap();
        assert_eq!((e10.n(), e10.edge_count()), (15, 40));
        // bipartite-side vertices have degree (n+1)+1 when n is odd
        let n = 5;
        let e = e_graph(n).unwrap();
        for i in 1..=2 * n + 2 {
            let v = e.index_of(&VertexLabel::Int(i)).unwrap();
            assert_eq!(e.degree(v), (n + 2) as usize);
        }
    }

    #[test]
    fn el_family() {
        let el0 = el_graph(0).unwrap();
        assert_eq!((el0.n(), el0.edge_count()), (2, 1));
        let el1 = el_graph(1).unwrap();
        assert_eq!((el1.n(), el1.edge_count()), (4, 3));
        assert!(is_isomorphic_small(&el1, &complete_bipartite(1, 3).unwrap()).unwrap());
        let el2 = el_graph(2).unwrap();
        assert_eq!((el2.n(), el2.edge_count()), (6, 6));
        for r in 2..=10 {
            let el = el_graph(r).unwrap();
            assert_eq!(el.n() as u32, 2 * r + 2);
        }
    }

    #[test]
    fn products() {
        let c3 = cycle(3).unwrap();
        let p1 = path(1).unwrap();
        let g = cartesian_product(&c3, &p1).unwrap();
        assert!(is_isomorphic_small(&g, &c3).unwrap());
        let p2 = path(2).unwrap();
        let sq = cartesian_product(&p2, &p2).unwrap();
        assert!(is_isomorphic_small(&sq, &cycle(4).unwrap()).unwrap());
        let ring = cartesian_product(&cycle(10).unwrap(), &p1).unwrap();
        assert_eq!((ring.n(), ring.edge_count()), (10, 10));
    }

    #[test]
    fn parameters() {
        assert_eq!(p_param(5), 5);
        assert_eq!(p_param(4), 3);
        assert_eq!(o_param(5), 3);
        assert_eq!(o_param(4), 3);
        assert_eq!(o_param(7), 4);
    }

    #[test]
    fn classification_counts() {
        let c = classify_sg_n2(4).unwrap();
        assert_eq!((c.alternating, c.bipartite, c.middle), (5, 10, 10));
        let c = classify_sg_n2(5).unwrap();
        assert_eq!((c.alternating, c.bipartite, c.middle), (12, 12, 12));
        // {1,3,5,7} is a proper subset of the odds of [10]
        let g = stable_kneser(4, 2).unwrap();
        let v = g.index_of(&VertexLabel::Subset(vec![1, 3, 5, 7])).unwrap();
        let c = classify_sg_n2(4).unwrap();
        assert_eq!(c.classes[v as usize], VertexClass::Bipartite);
    }

    #[test]
    fn chromatic_small() {
        assert_eq!(chromatic_number_exact(&cycle(5).unwrap(), 40).unwrap(), 3);
        assert_eq!(
            chromatic_number_exact(&stable_kneser(2, 2).unwrap(), 40).unwrap(),
            4
        );
        assert_eq!(
            chromatic_number_exact(&stable_kneser(3, 1).unwrap(), 40).unwrap(),
            3
        );
        assert!(chromatic_number_exact(&kneser(2, 4).unwrap(), 20).is_err());
    }

    #[test]
    fn induced_and_iso() {
        let c5 = cycle(5).unwrap();
        let sub = c5.induced_subgraph(&[0, 1, 2]).unwrap();
        assert!(is_isomorphic_small(&sub, &path(3).unwrap()).unwrap());
        let empty = c5.induced_subgraph(&[]).unwrap();
        assert_eq!(empty.n(), 0);
        assert!(c5.induced_subgraph(&[9]).is_err());
        assert!(
            !is_isomorphic_small(&path(4).unwrap(), &complete_bipartite(1, 3).unwrap()).unwrap()
        );
        // relabeled cycle
        let c5b = Graph::from_edges(
            "c 5",
            (10..15).map(VertexLabel::Int).collect(),
            &[
                (VertexLabel::Int(10), VertexLabel::Int(12)),
                (VertexLabel::Int(12), VertexLabel::Int(14)),
                (VertexLabel::Int(14), VertexLabel::Int(11)),
                (VertexLabel::Int(11), VertexLabel::Int(13)),
                (VertexLabel::Int(13), VertexLabel::Int(10)),
            ],
        )
        .unwrap();
        assert!(is_isomorphic_small(&c5, &c5b).unwrap());
    }

    #[test]
    fn text_round_trip() {
        for g in [
            stable_kneser(2, 2).unwrap(),
            e_graph(3).unwrap(),
            el_graph(2).unwrap(),
            cartesian_product(&cycle(4).unwrap(), &path(2).unwrap()).unwrap(),
        ] {
            let text = g.to_text();
            let back = Graph::from_text(&text).unwrap();
            assert_eq!(back.to_text(), text);
        }
    }

    #[test]
    fn stable_kneser_is_induced_in_kneser() {
        for (n, k) in [(1u32, 1u32), (2, 1), (2, 2), (3, 1), (2, 3)] {
            let sg = stable_kneser(n, k).unwrap();
            let kg = kneser(n, k).unwrap();
            let idx: Vec<u32> = sg
                .labels()
                .iter()
                .map(|l| kg.index_of(l).unwrap())
                .collect();
            let induced = kg.induced_subgraph(&idx).unwrap();
            assert_eq!(
                induced.to_text().lines().count(),
                sg.to_text().lines().count()
            );
            for (i, j) in sg.edges() {
                let a = induced.index_of(sg.label(i)).unwrap();
                let b = induced.index_of(sg.label(j)).unwrap();
                assert!(induced.are_adjacent(a, b));
            }
            assert_eq!(induced.edge_count(), sg.edge_count());
        }
    }
}
