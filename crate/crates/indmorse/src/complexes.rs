//! Independence and neighborhood complexes with explicit face sets.
//!
//! Faces are stored explicitly (not just maximal faces) because the Morse
//! machinery needs the full face poset. A face budget guards memory. The
//! empty face is a first-class face of dimension -1.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::graphs::{stable_kneser, Graph, VertexLabel};

pub const DEFAULT_FACE_BUDGET: usize = 2_000_000;

/// A face: a strictly increasing set of vertex indices into the host
/// vertex universe. The empty face is valid.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Face(pub Vec<u32>);

impl Face {
    pub fn empty() -> Face {
        Face(Vec::new())
    }

    pub fn card(&self) -> usize {
        self.0.len()
    }

    /// Dimension: cardinality minus one; the empty face has dimension -1.
    pub fn dim(&self) -> i32 {
        self.0.len() as i32 - 1
    }

    pub fn contains(&self, v: u32) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn with(&self, v: u32) -> Face {
        debug_assert!(!self.contains(v));
        let mut out = self.0.clone();
        let pos = out.partition_point(|&x| x < v);
        out.insert(pos, v);
        Face(out)
    }

    pub fn without(&self, v: u32) -> Face {
        let mut out = self.0.clone();
        out.retain(|&x| x != v);
        Face(out)
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        self.0.iter().all(|&v| other.contains(v))
    }

    /// Facets in removal-position order, with the sign `(-1)^position`.
    pub fn facets(&self) -> impl Iterator<Item = (Face, i64)> + '_ {
        (0..self.0.len()).map(move |p| {
            let mut out = self.0.clone();
            out.remove(p);
            (Face(out), if p % 2 == 0 { 1 } else { -1 })
        })
    }
}

impl std::fmt::Display for Face {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

/// Identifier of a face inside a complex: cardinality and position within
/// that cardinality's sorted face list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FaceId {
    pub card: usize,
    pub pos: usize,
}

/// An abstract simplicial complex with an explicit, downward-closed face set
/// grouped by cardinality (`faces_by_card[c]` holds the faces with `c`
/// vertices; index 0 is the empty face alone).
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    labels: Vec<VertexLabel>,
    faces_by_card: Vec<Vec<Face>>,
    index: HashMap<Face, FaceId>,
}

impl SimplicialComplex {
    /// Builds a complex from a set of faces, closing downward. The empty
    /// face is always included.
    pub fn from_faces<I>(
        labels: Vec<VertexLabel>,
        faces: I,
        budget: usize,
    ) -> Result<SimplicialComplex>
    where
        I: IntoIterator<Item = Face>,
    {
        let mut seen: HashSet<Face> = HashSet::new();
        let mut stack: Vec<Face> = faces.into_iter().collect();
        seen.insert(Face::empty());
        while let Some(f) = stack.pop() {
            if seen.contains(&f) {
                continue;
            }
            if seen.len() >= budget {
                return Err(Error::Budget {
                    what: "face set".to_string(),
                    budget,
                });
            }
            for (facet, _) in f.facets() {
                if !seen.contains(&facet) {
                    stack.push(facet);
                }
            }
            seen.insert(f);
        }
        let max_card = seen.iter().map(|f| f.card()).max().unwrap_or(0);
        let mut faces_by_card: Vec<Vec<Face>> = vec![Vec::new(); max_card + 1];
        for f in seen {
            faces_by_card[f.card()].push(f);
        }
        for group in &mut faces_by_card {
            group.sort();
        }
        let mut index = HashMap::new();
        for (card, group) in faces_by_card.iter().enumerate() {
            for (pos, f) in group.iter().enumerate() {
                index.insert(f.clone(), FaceId { card, pos });
            }
        }
        Ok(SimplicialComplex {
            labels,
            faces_by_card,
            index,
        })
    }

    pub fn labels(&self) -> &[VertexLabel] {
        &self.labels
    }

    pub fn universe_size(&self) -> usize {
        self.labels.len()
    }

    pub fn max_card(&self) -> usize {
        self.faces_by_card.len() - 1
    }

    pub fn faces_of_card(&self, card: usize) -> &[Face] {
        self.faces_by_card
            .get(card)
            .map(|v| v.as_slice())
            .unwrap_or(&[])
    }

    pub fn total_faces(&self) -> usize {
        self.faces_by_card.iter().map(|g| g.len()).sum()
    }

    pub fn contains(&self, f: &Face) -> bool {
        self.index.contains_key(f)
    }

    pub fn id_of(&self, f: &Face) -> Option<FaceId> {
        self.index.get(f).copied()
    }

    pub fn face(&self, id: FaceId) -> &Face {
        &self.faces_by_card[id.card][id.pos]
    }

    pub fn all_faces(&self) -> impl Iterator<Item = &Face> {
        self.faces_by_card.iter().flatten()
    }

    /// Maximal faces: faces that are a facet of no other face in the set.
    pub fn maximal_faces(&self) -> Vec<Face> {
        let mut non_maximal: HashSet<&Face> = HashSet::new();
        let mut out = Vec::new();
        for card in (0..self.faces_by_card.len()).rev() {
            for f in &self.faces_by_card[card] {
                if !non_maximal.contains(f) {
                    out.push(f.clone());
                }
            }
            for f in &self.faces_by_card[card] {
                for (facet, _) in f.facets() {
                    if let Some((stored, _)) = self.index.get_key_value(&facet) {
                        non_maximal.insert(stored);
                    }
                }
            }
        }
        out.sort();
        out
    }

    /// All cover pairs `(face, coface)` of the face poset in deterministic
    /// order: cofaces by ascending cardinality then face order.
    pub fn cover_pairs(&self) -> Vec<(FaceId, FaceId)> {
        let mut out = Vec::new();
        for card in 1..self.faces_by_card.len() {
            for (pos, f) in self.faces_by_card[card].iter().enumerate() {
                let up = FaceId { card, pos };
                for (facet, _) in f.facets() {
                    let down = self.index[&facet];
                    out.push((down, up));
                }
            }
        }
        out
    }

    /// Exhaustive downward-closure check; intended for tests.
    pub fn is_downward_closed(&self) -> bool {
        self.all_faces()
            .all(|f| f.facets().all(|(facet, _)| self.contains(&facet)))
    }

    /// Serializes the maximal-face form of the complex.
    pub fn to_text(&self) -> String {
        let mut out = format!("complex {} {}\n", self.universe_size(), self.total_faces());
        for f in self.maximal_faces() {
            out.push_str(&format!("f {f}\n"));
        }
        out
    }

    pub fn from_text(
        text: &str,
        labels: Vec<VertexLabel>,
        budget: usize,
    ) -> Result<SimplicialComplex> {
        let mut faces = Vec::new();
        let mut declared: Option<(usize, usize)> = None;
        for (ln, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let err = |msg: &str| Error::Parse {
                line: ln + 1,
                msg: msg.to_string(),
            };
            if let Some(rest) = line.strip_prefix("complex ") {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 2 {
                    return Err(err("complex header needs |V| and #faces"));
                }
                declared = Some((
                    parts[0].parse().map_err(|_| err("bad |V|"))?,
                    parts[1].parse().map_err(|_| err("bad face count"))?,
                ));
            } else if let Some(rest) = line.strip_prefix("f ") {
                let inner = rest
                    .trim()
                    .strip_prefix('{')
                    .and_then(|t| t.strip_suffix('}'))
                    .ok_or_else(|| err("face must look like {i,j,k}"))?;
                let mut v: Vec<u32> = Vec::new();
                if !inner.is_empty() {
                    for part in inner.split(',') {
                        v.push(part.parse().map_err(|_| err("bad face entry"))?);
                    }
                }
                v.sort_unstable();
                faces.push(Face(v));
            } else {
                return Err(err("unknown line"));
            }
        }
        let (nv, nf) = declared.ok_or(Error::Parse {
            line: 0,
            msg: "missing complex header".into(),
        })?;
        if nv != labels.len() {
            return Err(Error::Parse {
                line: 0,
                msg: "universe size disagrees with labels".into(),
            });
        }
        let k = SimplicialComplex::from_faces(labels, faces, budget)?;
        if k.total_faces() != nf {
            return Err(Error::Parse {
                line: 0,
                msg: "face count disagrees after downward closure".into(),
            });
        }
        Ok(k)
    }
}

/// Face counts per dimension, starting at `f_{-1} = 1` for the empty face.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FVector(pub Vec<usize>);

pub fn f_vector(k: &SimplicialComplex) -> FVector {
    FVector(
        (0..=k.max_card())
            .map(|c| k.faces_of_card(c).len())
            .collect(),
    )
}

/// Unreduced Euler characteristic: alternating sum over dimensions `d >= 0`.
pub fn euler_characteristic(k: &SimplicialComplex) -> i64 {
    let mut chi = 0i64;
    for card in 1..=k.max_card() {
        let sign = if (card - 1) % 2 == 0 { 1 } else { -1 };
        chi += sign * k.faces_of_card(card).len() as i64;
    }
    chi
}

/// The independence complex: faces are the independent sets of `g`,
/// including the empty set, enumerated by ordered backtracking.
pub fn independence_complex(g: &Graph, budget: usize) -> Result<SimplicialComplex> {
    let n = g.n();
    let mut faces: Vec<Face> = Vec::new();
    let mut cur: Vec<u32> = Vec::new();
    fn rec(
        g: &Graph,
        start: u32,
        cur: &mut Vec<u32>,
        faces: &mut Vec<Face>,
        budget: usize,
    ) -> Result<()> {
        if faces.len() >= budget {
            return Err(Error::Budget {
                what: "independence complex faces".to_string(),
                budget,
            });
        }
        faces.push(Face(cur.clone()));
        for v in start..g.n() as u32 {
            if cur.iter().all(|&u| !g.are_adjacent(u, v)) {
                cur.push(v);
                rec(g, v + 1, cur, faces, budget)?;
                cur.pop();
            }
        }
        Ok(())
    }
    rec(g, 0, &mut cur, &mut faces, budget)?;
    let _ = n;
    // already downward closed; from_faces only sorts and indexes
    SimplicialComplex::from_faces(g.labels().to_vec(), faces, budget)
}

/// Independent count of the faces of `Ind(g)` via the vertex in/out
/// recursion; an oracle for the enumerator above.
pub fn count_independent_sets(g: &Graph) -> u64 {
    fn rec(masks: &[Vec<u32>], alive: &mut Vec<bool>, from: usize) -> u64 {
        let v = (from..alive.len()).find(|&v| alive[v]);
        let Some(v) = v else { return 1 };
        // v out
        alive[v] = false;
        let mut total = rec(masks, alive, v + 1);
        // v in: drop neighbors
        let dropped: Vec<usize> = masks[v]
            .iter()
            .map(|&w| w as usize)
            .filter(|&w| alive[w])
            .collect();
        for &w in &dropped {
            alive[w] = false;
        }
        total += rec(masks, alive, v + 1);
        for &w in &dropped {
            alive[w] = true;
        }
        alive[v] = true;
        total
    }
    let masks: Vec<Vec<u32>> = (0..g.n() as u32).map(|v| g.neighbors(v).to_vec()).collect();
    let mut alive = vec![true; g.n()];
    rec(&masks, &mut alive, 0)
}

/// The neighborhood complex: generated by the neighbor sets `N(v)` of all
/// vertices, downward closed.
pub fn neighborhood_complex(g: &Graph, budget: usize) -> Result<SimplicialComplex> {
    let generators: Vec<Face> = (0..g.n() as u32)
        .map(|v| Face(g.neighbors(v).to_vec()))
        .collect();
    SimplicialComplex::from_faces(g.labels().to_vec(), generators, budget)
}

/// The claimed maximal faces of `Ind(SG_{2,k})`: wheels `W_i` (all stable
/// pairs through `i`) and triangles `T_{i,j,h}` (three pairwise intersecting
/// stable pairs on three elements). Faces are given as vertex index sets of
/// `stable_kneser(2, k)`.
pub fn wheels_and_triangles(k: u32) -> Result<(Graph, Vec<Face>, Vec<Face>)> {
    if k < 2 {
        return Err(Error::parameter(
            "wheels_and_triangles requires k >= 2".to_string(),
        ));
    }
    let g = stable_kneser(2, k)?;
    let m = k + 4;
    let idx = |a: u32, b: u32| -> Option<u32> {
        let pair = if a < b { vec![a, b] } else { vec![b, a] };
        g.index_of(&VertexLabel::Subset(pair))
    };
    let mut wheels = Vec::new();
    for i in 1..=m {
        let mut w: Vec<u32> = Vec::new();
        for j in 1..=m {
            if j != i {
                if let Some(v) = idx(i, j) {
                    w.push(v);
                }
            }
        }
        w.sort_unstable();
        w.dedup();
        wheels.push(Face(w));
    }
    let mut triangles = Vec::new();
    for i in 1..=m {
        for j in (i + 1)..=m {
            for h in (j + 1)..=m {
                if let (Some(a), Some(b), Some(c)) = (idx(i, j), idx(j, h), idx(i, h)) {
                    let mut t = vec![a, b, c];
                    t.sort_unstable();
                    triangles.push(Face(t));
                }
            }
        }
    }
    Ok((g, wheels, triangles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs;

    #[test]
    fn ind_k4_is_points() {
        let k = independence_complex(&graphs::complete(4).unwrap(), 1000).unwrap();
        assert_eq!(f_vector(&k), FVector(vec![1, 4]));
    }

    #[test]
    fn ind_c5_faces() {
        let k = independence_complex(&graphs::cycle(5).unwrap(), 1000).unwrap();
        assert_eq!(k.total_faces(), 11);
        assert_eq!(f_vector(&k), FVector(vec![1, 5, 5]));
        assert_eq!(k.cover_pairs().len(), 15);
        assert!(k.is_downward_closed());
    }

    #[test]
    fn ind_sg22_maximal() {
        let g = graphs::stable_kneser(2, 2).unwrap();
        let k = independence_complex(&g, 10_000).unwrap();
        let maximal = k.maximal_faces();
        assert_eq!(maximal.len(), 8);
        assert!(maximal.iter().all(|f| f.card() == 3));
    }

    #[test]
    fn neighborhood_small() {
        let k2 = graphs::complete(2).unwrap();
        let nk = neighborhood_complex(&k2, 100).unwrap();
        assert_eq!(f_vector(&nk), FVector(vec![1, 2]));

        let c5 = graphs::cycle(5).unwrap();
        let nc = neighborhood_complex(&c5, 100).unwrap();
        assert_eq!(nc.total_faces(), 11);
        assert_eq!(f_vector(&nc), FVector(vec![1, 5, 5]));
    }

    #[test]
    fn euler_small() {
        // full simplex on 3 vertices
        let k = SimplicialComplex::from_faces(
            (1..=3).map(VertexLabel::Int).collect(),
            vec![Face(vec![0, 1, 2])],
            100,
        )
        .unwrap();
        assert_eq!(euler_characteristic(&k), 1);

        let c6 = independence_complex(&graphs::cycle(6).unwrap(), 1000).unwrap();
        assert_eq!(euler_characteristic(&c6), -1);
    }

    #[test]
    fn cover_pairs_simplex() {
        let k = SimplicialComplex::from_faces(
            (1..=2).map(VertexLabel::Int).collect(),
            vec![Face(vec![0, 1])],
            100,
        )
        .unwrap();
        let pairs = k.cover_pairs();
        assert_eq!(pairs.len(), 4);
        // counts of covers from dimension d-1 to d
        for card in 1..=k.max_card() {
            let expected: usize = k.faces_of_card(card).iter().map(|f| f.card()).sum();
            let got = pairs.iter().filter(|(_, up)| up.card == card).count();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn wheels_triangles_k2() {
        let (g, wheels, triangles) = wheels_and_triangles(2).unwrap();
        assert_eq!(wheels.len(), 6);
        assert!(wheels.iter().all(|w| w.card() == 3));
        assert_eq!(triangles.len(), 2);
        let k = independence_complex(&g, 10_000).unwrap();
        let mut claimed: Vec<Face> = wheels.into_iter().chain(triangles).collect();
        claimed.sort();
        claimed.dedup();
        assert_eq!(claimed, k.maximal_faces());
    }

    #[test]
    fn wheels_are_k_simplices() {
        for k in 2..=6u32 {
            let (_, wheels, _) = wheels_and_triangles(k).unwrap();
            assert_eq!(wheels.len() as u32, k + 4);
            assert!(wheels.iter().all(|w| w.card() as u32 == k + 1));
        }
    }

    #[test]
    fn triangles_avoiding_one_k3() {
        let (g, _, triangles) = wheels_and_triangles(3).unwrap();
        let avoiding: Vec<&Face> = triangles
            .iter()
            .filter(|t| {
                t.0.iter().all(|&v| match g.label(v) {
                    VertexLabel::Subset(s) => !s.contains(&1),
                    _ => false,
                })
            })
            .collect();
        assert_eq!(avoiding.len(), 4);
    }

    #[test]
    fn independent_count_matches() {
        for g in [
            graphs::cycle(6).unwrap(),
            graphs::path(7).unwrap(),
            graphs::stable_kneser(2, 3).unwrap(),
            graphs::e_graph(3).unwrap(),
        ] {
            let k = independence_complex(&g, DEFAULT_FACE_BUDGET).unwrap();
            assert_eq!(k.total_faces() as u64, count_independent_sets(&g));
        }
    }

    #[test]
    fn complex_text_round_trip() {
        let g = graphs::stable_kneser(2, 2).unwrap();
        let k = independence_complex(&g, 10_000).unwrap();
        let text = k.to_text();
        let back = SimplicialComplex::from_text(&text, g.labels().to_vec(), 10_000).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.total_faces(), k.total_faces());
    }
}
