//! The explicit two-level graded matching on Ind(SG_{2,k}).
//!
//! Faces are viewed as sets of stable pairs from [k+4]. An outer grading
//! phi sends the face poset onto the chain 3 < 4 < ... < k+4; each grade
//! below k+4 is matched perfectly by toggling the pair {1,l}. The top grade
//! carries a second grading psi onto a chain of small buckets, matched by
//! explicit pairs or by toggling {2,4} / {2,k+4}. The unmatched faces of the
//! top bucket are the critical triangles.

use std::collections::BTreeSet;

use crate::complexes::{
    independence_complex, Face, FaceId, SimplicialComplex, DEFAULT_FACE_BUDGET,
};
use crate::error::{Error, Result};
use crate::graphs::{self, Graph, VertexLabel};
use crate::morse::matching::{
    morse_summary, patchwork_compose, GradeMap, MorseSummary, PartialMatching,
};

type Pair = (u32, u32);

fn all_contain(pairs: &[Pair], x: u32) -> bool {
    !pairs.is_empty() && pairs.iter().all(|&(a, b)| a == x || b == x)
}

fn elements(pairs: &[Pair]) -> BTreeSet<u32> {
    pairs.iter().flat_map(|&(a, b)| [a, b]).collect()
}

/// A face on three elements with no common element, i.e. the three pairs of
/// a triple {i,j,h}; returns the sorted triple.
fn triangle(pairs: &[Pair]) -> Option<(u32, u32, u32)> {
    if pairs.len() != 3 {
        return None;
    }
    let e: Vec<u32> = elements(pairs).into_iter().collect();
    if e.len() == 3 {
        Some((e[0], e[1], e[2]))
    } else {
        None
    }
}

/// Every phi grade whose case table matches the face; the assignment is the
/// first one, extra hits feed the ambiguity audit.
pub fn phi_grades(k: u32, pairs: &[Pair]) -> Vec<u32> {
    let k4 = k + 4;
    let card = pairs.len();
    let mut out = Vec::new();
    // grade 3
    let g3 = pairs.is_empty()
        || all_contain(pairs, 1)
        || all_contain(pairs, 3)
        || (card == 2 && {
            let (a, b) = (pairs[0], pairs[1]);
            a.0 == 1 && b.0 == 3 && a.1 == b.1 && 3 < a.1 && a.1 < k4
        })
        || matches!(triangle(pairs), Some((1, 3, j)) if 3 < j && j < k4);
    if g3 {
        out.push(3);
    }
    for l in 4..k4 {
        let hit = (pairs == [(2, l)])
            || (pairs == [(1, l), (2, l)])
            || (card == 1 && pairs[0].0 == l && pairs[0].1 > l)
            || (card == 2 && pairs[0].0 == l && pairs[1].0 == l && pairs[0].1 < pairs[1].1)
            || (card == 2 && pairs[0].1 == l && pairs[1].0 == l && pairs[0].0 < l)
            || (card == 2
                && pairs[0].1 == l
                && pairs[1].1 == l
                && 2 <= pairs[0].0
                && pairs[0].0 < pairs[1].0)
            || ((3..=(k as usize + 1)).contains(&card) && all_contain(pairs, l))
            || (card == 2 && {
                let (a, b) = (pairs[0], pairs[1]);
                a.0 == 1 && b.0 == l && a.1 == b.1 && l < a.1 && a.1 <= k4 - 1
            })
            || matches!(triangle(pairs), Some((1, m, j)) if m == l && l < j && j <= k4 - 1);
        if hit {
            out.push(l);
        }
    }
    let top = (pairs == [(2, k4)])
        || ((2..=(k as usize + 1)).contains(&card) && all_contain(pairs, 2))
        || ((2..=(k as usize + 1)).contains(&card) && all_contain(pairs, k4))
        || matches!(triangle(pairs), Some((i, _, _)) if i >= 2);
    if top {
        out.push(k4);
    }
    out
}

/// First-listed phi grade, or a partition-failure audit error.
pub fn sg2k_phi(k: u32, pairs: &[Pair]) -> Result<u32> {
    phi_grades(k, pairs)
        .first()
        .copied()
        .ok_or_else(|| Error::audit(format!("face {pairs:?} matches no phi case at k={k}")))
}

/// The buckets of the inner chain on the top phi grade, in chain order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PsiGrade {
    B,
    R(u32),
    M1,
    M2,
    T2,
    S(u32),
    M3,
    M4,
    Tk4,
}

impl PsiGrade {
    /// Position along the chain b < r_6 < ... < r_{k+3} < m_1 < m_2 < t_2 <
    /// s_4 < ... < s_{k+2} < m_3 < m_4 < t_{k+4}.
    pub fn chain_index(self, k: u32) -> u32 {
        match self {
            PsiGrade::B => 0,
            PsiGrade::R(i) => i - 5,
            PsiGrade::M1 => k - 1,
            PsiGrade::M2 => k,
            PsiGrade::T2 => k + 1,
            PsiGrade::S(j) => k + j - 2,
            PsiGrade::M3 => 2 * k + 1,
            PsiGrade::M4 => 2 * k + 2,
            PsiGrade::Tk4 => 2 * k + 3,
        }
    }
}

/// Every psi bucket matching the face (the tables are disjoint via their
/// explicit "except" clauses; more than one hit is an audit finding).
pub fn psi_grades(k: u32, pairs: &[Pair]) -> Vec<PsiGrade> {
    let k4 = k + 4;
    let card = pairs.len();
    let mut out = Vec::new();
    if pairs == [(2, k4)] || pairs == [(2, 4), (2, k4)] {
        out.push(PsiGrade::B);
    }
    if card == 2 && pairs[0] == (2, 4) && pairs[1].0 == 2 && (6..=k4 - 1).contains(&pairs[1].1) {
        out.push(PsiGrade::R(pairs[1].1));
    }
    if let Some((2, 4, i)) = triangle(pairs) {
        if (6..=k4 - 1).contains(&i) {
            out.push(PsiGrade::R(i));
        }
    }
    if k >= 4 {
        if pairs == [(2, 5), (2, 7)] || triangle(pairs) == Some((2, 5, 7)) {
            out.push(PsiGrade::M1);
        }
        if pairs == [(2, 4), (2, 5)] || pairs == [(2, 4), (2, 5), (2, 7)] {
            out.push(PsiGrade::M2);
        }
    }
    // t_2
    {
        let pair_case = card == 2
            && pairs[0].0 == 2
            && pairs[1].0 == 2
            && pairs[0].1 >= 5
            && !(k >= 4 && pairs == [(2, 5), (2, 7)]);
        let big_case = (3..=(k as usize + 1)).contains(&card)
            && all_contain(pairs, 2)
            && !(k >= 4 && pairs == [(2, 4), (2, 5), (2, 7)]);
        let k3_extra = k == 3 && pairs == [(2, 4), (2, 5)];
        if pair_case || big_case || k3_extra {
            out.push(PsiGrade::T2);
        }
    }
    if card == 2 && pairs[0] == (2, k4) && pairs[1].1 == k4 && (4..=k4 - 2).contains(&pairs[1].0) {
        out.push(PsiGrade::S(pairs[1].0));
    }
    if let Some((2, j, h)) = triangle(pairs) {
        if h == k4 && (4..=k4 - 2).contains(&j) {
            out.push(PsiGrade::S(j));
        }
    }
    if pairs == [(3, k4), (5, k4)] || triangle(pairs) == Some((3, 5, k4)) {
        out.push(PsiGrade::M3);
    }
    if pairs == [(2, k4), (3, k4)] || pairs == [(2, k4), (3, k4), (5, k4)] {
        out.push(PsiGrade::M4);
    }
    // t_{k+4}
    {
        let pair_case = card == 2
            && pairs[0].1 == k4
            && pairs[1].1 == k4
            && pairs[0].0 >= 3
            && pairs != [(3, k4), (5, k4)];
        let big_case = (3..=(k as usize + 1)).contains(&card)
            && all_contain(pairs, k4)
            && pairs != [(2, k4), (3, k4), (5, k4)];
        let tri_case = match triangle(pairs) {
            Some((i, j, h)) if i >= 2 => {
                let listed = (i == 2 && j == 4 && (6..=k4 - 1).contains(&h))
                    || (i, j, h) == (2, 5, 7)
                    || (i == 2 && h == k4 && (4..=k4 - 2).contains(&j))
                    || (i, j, h) == (3, 5, k4);
                !listed
            }
            _ => false,
        };
        if pair_case || big_case || tri_case {
            out.push(PsiGrade::Tk4);
        }
    }
    out
}

pub fn sg2k_psi(k: u32, pairs: &[Pair]) -> Result<PsiGrade> {
    let hits = psi_grades(k, pairs);
    match hits.as_slice() {
        [g] => Ok(*g),
        [] => Err(Error::audit(format!(
            "face {pairs:?} matches no psi case at k={k}"
        ))),
        many => Err(Error::audit(format!(
            "face {pairs:?} matches several psi cases at k={k}: {many:?}"
        ))),
    }
}

/// The predicted critical set: all stable triangles avoiding 1 minus the
/// listed exceptional set S (for k >= 4); the single short cell for k = 3.
pub fn m_crit(k: u32) -> Vec<Vec<Pair>> {
    if k == 3 {
        return vec![vec![(2, 4), (2, 5)]];
    }
    let k4 = k + 4;
    let stable = |a: u32, b: u32| b - a >= 2 && !(a == 1 && b == k4);
    let mut out = Vec::new();
    for i in 2..=k4 - 2 {
        for j in (i + 1)..=k4 - 1 {
            for h in (j + 1)..=k4 {
                if !(stable(i, j) && stable(j, h) && stable(i, h)) {
                    continue;
                }
                let in_s = (i == 2 && j == 4 && (6..=k4 - 1).contains(&h))
                    || (i == 2 && h == k4 && (4..=k4 - 2).contains(&j))
                    || (i, j, h) == (3, 5, k4)
                    || (i, j, h) == (2, 5, 7);
                if !in_s {
                    out.push(vec![(i, j), (i, h), (j, h)]);
                }
            }
        }
    }
    out
}

pub struct Sg2kOutcome {
    pub graph: Graph,
    pub complex: SimplicialComplex,
    /// The composite grade of every face (outer chain, then the inner chain
    /// expanded inside the top grade).
    pub grading: GradeMap,
    pub matching: PartialMatching,
    pub summary: MorseSummary,
    /// Critical faces as sorted pair lists.
    pub critical: Vec<Vec<Pair>>,
    /// Faces matching more than one phi grade or psi bucket (expected none).
    pub ambiguities: Vec<String>,
}

fn face_pairs(g: &Graph, face: &Face) -> Vec<Pair> {
    face.0
        .iter()
        .map(|&v| match g.label(v) {
            VertexLabel::Subset(s) if s.len() == 2 => (s[0], s[1]),
            other => panic!("unexpected vertex label {other}"),
        })
        .collect()
}

fn vertex_of_pair(g: &Graph, p: Pair) -> Result<u32> {
    g.index_of(&VertexLabel::Subset(vec![p.0, p.1]))
        .ok_or_else(|| Error::contract(format!("pair {{{},{}}} is not a vertex", p.0, p.1)))
}

/// Builds the full composed matching on Ind(SG_{2,k}) and verifies it.
pub fn sg2k_matching(k: u32) -> Result<Sg2kOutcome> {
    if k < 3 {
        return Err(Error::parameter("graded matching defined for k >= 3"));
    }
    let k4 = k + 4;
    let g = graphs::stable_kneser(2, k)?;
    let kx = independence_complex(&g, DEFAULT_FACE_BUDGET)?;
    let mut ambiguities = Vec::new();

    // composite grade: phi grades first, then the top grade's chain
    let psi_base = k + 1;
    let n_grades = psi_base + 2 * k + 4;
    let mut grades: Vec<u32> = Vec::with_capacity(kx.total_faces());
    let mut by_grade: Vec<Vec<FaceId>> = vec![Vec::new(); n_grades as usize];
    for card in 0..=kx.max_card() {
        for pos in 0..kx.faces_of_card(card).len() {
            let id = FaceId { card, pos };
            let pairs = face_pairs(&g, kx.face(id));
            let phis = phi_grades(k, &pairs);
            if phis.len() > 1 {
                ambiguities.push(format!("phi ambiguity on {pairs:?}: grades {phis:?}"));
            }
            let phi = *phis
                .first()
                .ok_or_else(|| Error::audit(format!("unclassified face {pairs:?}")))?;
            let grade = if phi < k4 {
                phi - 3
            } else {
                let hits = psi_grades(k, &pairs);
                if hits.len() > 1 {
                    ambiguities.push(format!("psi ambiguity on {pairs:?}: {hits:?}"));
                }
                let psi = *hits.first().ok_or_else(|| {
                    Error::audit(format!("top-grade face {pairs:?} missed by psi"))
                })?;
                psi_base + psi.chain_index(k)
            };
            grades.push(grade);
            by_grade[grade as usize].push(id);
        }
    }
    let grading = GradeMap { grades };

    let grade_of =
        |id: FaceId, kx: &SimplicialComplex, grading: &GradeMap| -> u32 { grading.grade(kx, id) };

    let mut per_grade: Vec<(u32, PartialMatching)> = Vec::new();
    let mut critical: Vec<Vec<Pair>> = Vec::new();
    for grade in 0..n_grades {
        let faces = &by_grade[grade as usize];
        if faces.is_empty() {
            continue;
        }
        let m = if grade < psi_base {
            // toggle {1, l}; the table promises a perfect matching here
            let l = grade + 3;
            let (m, crit) =
                toggle_matching(&kx, faces, vertex_of_pair(&g, (1, l))?, grade, &grading)?;
            if !crit.is_empty() {
                return Err(Error::audit(format!(
                    "grade {l} left unmatched faces: {:?}",
                    crit.iter()
                        .map(|&id| face_pairs(&g, kx.face(id)))
                        .collect::<Vec<_>>()
                )));
            }
            m
        } else {
            let idx = grade - psi_base;
            let t2 = PsiGrade::T2.chain_index(k);
            let tk4 = PsiGrade::Tk4.chain_index(k);
            if idx == t2 || idx == tk4 {
                let toggle = if idx == t2 { (2, 4) } else { (2, k4) };
                let (m, crit) =
                    toggle_matching(&kx, faces, vertex_of_pair(&g, toggle)?, grade, &grading)?;
                for &id in &crit {
                    critical.push(face_pairs(&g, kx.face(id)));
                }
                m
            } else {
                // two-element bucket: pair them directly
                if faces.len() != 2 {
                    return Err(Error::audit(format!(
                        "psi bucket {idx} has {} faces, expected 2",
                        faces.len()
                    )));
                }
                let (lo, hi) = (faces[0], faces[1]);
                PartialMatching::from_pairs(&kx, vec![(lo, hi)])?
            }
        };
        let _ = grade_of;
        per_grade.push((grade, m));
    }

    let matching = patchwork_compose(&kx, &grading, &per_grade)?;
    let summary = morse_summary(&kx, &matching)?;
    critical.sort();
    Ok(Sg2kOutcome {
        graph: g,
        complex: kx,
        grading,
        matching,
        summary,
        critical,
        ambiguities,
    })
}

/// Pairs sigma with sigma toggled by the vertex `t`, keeping only pairs that
/// stay inside `grade`; faces with no in-grade partner are returned as
/// critical.
fn toggle_matching(
    kx: &SimplicialComplex,
    faces: &[FaceId],
    t: u32,
    grade: u32,
    grading: &GradeMap,
) -> Result<(PartialMatching, Vec<FaceId>)> {
    let mut m = PartialMatching::empty();
    let mut critical = Vec::new();
    for &id in faces {
        let face = kx.face(id);
        if face.contains(t) {
            let down = face.without(t);
            let ok = kx
                .id_of(&down)
                .map(|d| grading.grade(kx, d) == grade)
                .unwrap_or(false);
            if !ok {
                critical.push(id);
            }
            // the pair itself is added from the lower side
        } else {
            let up = face.with(t);
            match kx.id_of(&up) {
                Some(u) if grading.grade(kx, u) == grade => m.add_pair(kx, id, u)?,
                _ => critical.push(id),
            }
        }
    }
    Ok((m, critical))
}
