//! Closed-form homotopy predictions for the supported graph families, and
//! reconciliation of three independent channels: the prediction, the Morse
//! critical-cell counts, and the homology oracle. All comparisons are exact
//! integer equality.

use std::fmt;

use crate::complexes::{independence_complex, DEFAULT_FACE_BUDGET};
use crate::error::{Error, Result};
use crate::graphs::{self, Graph};
use crate::homology::{homology, HomologyResult, DEFAULT_SNF_FACE_THRESHOLD};
use crate::morse::{
    e_graph_script, run_script, search_tree, sg2k_matching, Fallback, DEFAULT_NODE_BUDGET,
};

/// Predicted homotopy type: a point, or a wedge of spheres given as
/// (dimension, count) entries with distinct dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prediction {
    Contractible,
    WedgeOfSpheres(Vec<(i32, usize)>),
}

impl Prediction {
    fn spheres(entries: Vec<(i32, usize)>) -> Prediction {
        assert!(entries.iter().all(|&(d, c)| d >= 0 && c >= 1));
        Prediction::WedgeOfSpheres(entries)
    }

    /// Expected nonzero reduced Betti numbers, sorted by dimension.
    pub fn betti_support(&self) -> Vec<(i32, usize)> {
        match self {
            Prediction::Contractible => Vec::new(),
            Prediction::WedgeOfSpheres(entries) => {
                let mut v = entries.clone();
                v.sort();
                v
            }
        }
    }
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prediction::Contractible => write!(f, "contractible"),
            Prediction::WedgeOfSpheres(entries) => {
                let parts: Vec<String> =
                    entries.iter().map(|(d, c)| format!("{c}xS^{d}")).collect();
                write!(f, "wedge {}", parts.join(" "))
            }
        }
    }
}

/// Ind of a path: contractible when n = 3k+1, a single sphere otherwise.
pub fn predict_ind_path(n: u32) -> Result<Prediction> {
    if n < 1 {
        return Err(Error::parameter("path needs n >= 1"));
    }
    Ok(match n % 3 {
        0 => Prediction::spheres(vec![(n as i32 / 3 - 1, 1)]),
        1 => Prediction::Contractible,
        _ => Prediction::spheres(vec![(n as i32 / 3, 1)]),
    })
}

/// Ind of a cycle: two spheres S^{r-1} when n = 3r, one when n = 3r +/- 1.
pub fn predict_ind_cycle(n: u32) -> Result<Prediction> {
    if n < 3 {
        return Err(Error::parameter("cycle needs n >= 3"));
    }
    let r = ((n + 1) / 3) as i32;
    Ok(Prediction::spheres(vec![(
        r - 1,
        if n % 3 == 0 { 2 } else { 1 },
    )]))
}

/// Ind of the ladder-with-ears family: one sphere S^{2k} when r = 4k or
/// 4k+1, contractible otherwise.
pub fn predict_ind_el(r: u32) -> Result<Prediction> {
    Ok(match r % 4 {
        0 | 1 => Prediction::spheres(vec![(2 * (r as i32 / 4), 1)]),
        _ => Prediction::Contractible,
    })
}

/// Ind(SG_{2,k}): two S^1 for k=2, one S^1 for k=3, and for k >= 4 a wedge
/// of (k-3)(k-1)(k+4)/6 - 1 copies of S^2.
pub fn predict_ind_sg2(k: u32) -> Result<Prediction> {
    match k {
        0 | 1 => Err(Error::parameter("sg2 prediction needs k >= 2")),
        2 => Ok(Prediction::spheres(vec![(1, 2)])),
        3 => Ok(Prediction::spheres(vec![(1, 1)])),
        _ => {
            let k = k as i64;
            let c = (k - 3) * (k - 1) * (k + 4) / 6 - 1;
            Ok(Prediction::spheres(vec![(2, c as usize)]))
        }
    }
}

/// Ind of the auxiliary graph on 2n+2 vertices, split by the residue of n:
/// three S^{2k+1} for n=4k+1, one S^{2k+2} for n=4k+3, one S^{2k} for n=6k,
/// two S^{2k+1} for n=6k+2, one S^{2k+2} for n=6k+4.
pub fn predict_ind_e(n: u32) -> Result<Prediction> {
    if n < 3 {
        return Err(Error::parameter("e-family prediction needs n >= 3"));
    }
    let q = n as i32;
    Ok(if n % 2 == 1 {
        if n % 4 == 1 {
            Prediction::spheres(vec![((q - 1) / 4 * 2 + 1, 3)])
        } else {
            Prediction::spheres(vec![((q - 3) / 4 * 2 + 2, 1)])
        }
    } else {
        match n % 6 {
            0 => Prediction::spheres(vec![(q / 3, 1)]),
            2 => Prediction::spheres(vec![((q - 2) / 6 * 2 + 1, 2)]),
            _ => Prediction::spheres(vec![((q - 4) / 6 * 2 + 2, 1)]),
        }
    })
}

/// Both closed forms for the sphere count at n=2: the cubic formula and the
/// binomial count of critical triangles minus the exceptional set.
pub fn wedge_count_formulas_agree(k: u32) -> bool {
    let k = k as i64;
    let cubic = (k - 3) * (k - 1) * (k + 4) / 6 - 1;
    let binom = (k + 1) * k * (k - 1) / 6 - (2 * k - 1);
    cubic == binom
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    El,
    Path,
    Cycle,
    Sg2,
    E,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::El => "el",
            Family::Path => "path",
            Family::Cycle => "cycle",
            Family::Sg2 => "sg2",
            Family::E => "e",
        }
    }

    pub fn param_name(self) -> &'static str {
        match self {
            Family::El => "r",
            Family::Sg2 => "k",
            _ => "n",
        }
    }
}

pub fn predict(family: Family, p: u32) -> Result<Prediction> {
    match family {
        Family::El => predict_ind_el(p),
        Family::Path => predict_ind_path(p),
        Family::Cycle => predict_ind_cycle(p),
        Family::Sg2 => predict_ind_sg2(p),
        Family::E => predict_ind_e(p),
    }
}

pub fn family_graph(family: Family, p: u32) -> Result<Graph> {
    match family {
        Family::El => graphs::el_graph(p),
        Family::Path => graphs::path(p),
        Family::Cycle => graphs::cycle(p),
        Family::Sg2 => graphs::stable_kneser(2, p),
        Family::E => graphs::e_graph(p),
    }
}

/// Expected critical-cell sizes (cardinalities, ascending) of the designated
/// Morse construction for the family.
pub fn predict_morse_counts(family: Family, p: u32) -> Result<Vec<usize>> {
    match family {
        Family::El => Ok(match p % 4 {
            0 | 1 => vec![(p / 4 * 2 + 1) as usize],
            _ => vec![],
        }),
        Family::Path => {
            if p < 1 {
                return Err(Error::parameter("path needs n >= 1"));
            }
            Ok(match p % 3 {
                0 => vec![(p / 3) as usize],
                1 => vec![],
                _ => vec![(p / 3 + 1) as usize],
            })
        }
        Family::Cycle => {
            if p < 3 {
                return Err(Error::parameter("cycle needs n >= 3"));
            }
            let r = ((p + 1) / 3) as usize;
            Ok(if p % 3 == 0 { vec![r, r] } else { vec![r] })
        }
        Family::Sg2 => match p {
            0..=2 => Err(Error::parameter(
                "graded matching counts defined for k >= 3",
            )),
            3 => Ok(vec![2]),
            _ => {
                let k = p as i64;
                let c = ((k + 1) * k * (k - 1) / 6 - (2 * k - 1)) as usize;
                Ok(vec![3; c])
            }
        },
        Family::E => {
            if p < 3 {
                return Err(Error::parameter("e-family needs n >= 3"));
            }
            let s = match predict_ind_e(p)? {
                Prediction::WedgeOfSpheres(entries) => entries,
                Prediction::Contractible => vec![],
            };
            // cell size = sphere dimension + 1
            Ok(s.into_iter()
                .flat_map(|(d, c)| std::iter::repeat((d + 1) as usize).take(c))
                .collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Match,
    Mismatch(String),
    Skipped(String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Match => write!(f, "match"),
            Verdict::Mismatch(why) => write!(f, "mismatch ({why})"),
            Verdict::Skipped(why) => write!(f, "skipped ({why})"),
        }
    }
}

impl Verdict {
    pub fn is_mismatch(&self) -> bool {
        matches!(self, Verdict::Mismatch(_))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channels {
    Morse,
    Homology,
    Both,
}

impl Channels {
    fn morse(self) -> bool {
        matches!(self, Channels::Morse | Channels::Both)
    }

    fn homology(self) -> bool {
        matches!(self, Channels::Homology | Channels::Both)
    }
}

#[derive(Debug, Clone)]
pub struct VerificationReport {
    pub family: Family,
    pub param: u32,
    pub prediction: Prediction,
    pub morse: Verdict,
    /// Critical-cell sizes actually produced, when the channel ran.
    pub morse_cells: Option<Vec<usize>>,
    pub homology: Verdict,
    /// Nonzero reduced Betti numbers actually computed, when the channel ran.
    pub betti: Option<Vec<(i32, usize)>>,
}

impl VerificationReport {
    /// True when no channel that ran disagreed.
    pub fn is_match(&self) -> bool {
        !self.morse.is_mismatch() && !self.homology.is_mismatch()
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "instance family={} {}={}\n",
            self.family.name(),
            self.family.param_name(),
            self.param
        ));
        out.push_str(&format!("prediction {}\n", self.prediction));
        match &self.morse_cells {
            Some(c) => out.push_str(&format!("morse verdict={} cells={c:?}\n", self.morse)),
            None => out.push_str(&format!("morse verdict={}\n", self.morse)),
        }
        match &self.betti {
            Some(b) => out.push_str(&format!("homology verdict={} betti={b:?}\n", self.homology)),
            None => out.push_str(&format!("homology verdict={}\n", self.homology)),
        }
        out.push_str(&format!(
            "verdict {}\n",
            if self.is_match() { "match" } else { "MISMATCH" }
        ));
        out
    }
}

/// Checks the homology oracle output against the prediction: exact reduced
/// Betti numbers in every dimension and no torsion.
fn check_homology(pred: &Prediction, h: &HomologyResult) -> Verdict {
    let got = h.support();
    let want = pred.betti_support();
    if got != want {
        return Verdict::Mismatch(format!("betti {got:?}, predicted {want:?}"));
    }
    if h.has_torsion() {
        return Verdict::Mismatch("unexpected torsion".to_string());
    }
    Verdict::Match
}

/// Runs the family's designated Morse construction and returns its critical
/// sizes: tree search for paths, cycles and ladders; the step scripts for
/// the e-family; the two-level graded matching for sg2.
pub fn morse_critical_sizes(family: Family, p: u32) -> Result<Vec<usize>> {
    match family {
        Family::Sg2 => {
            let out = sg2k_matching(p)?;
            if !out.ambiguities.is_empty() {
                return Err(Error::audit(format!(
                    "grading ambiguities: {:?}",
                    out.ambiguities
                )));
            }
            let mut sizes: Vec<usize> = out.critical.iter().map(|c| c.len()).collect();
            sizes.sort_unstable();
            Ok(sizes)
        }
        Family::E => {
            let g = family_graph(family, p)?;
            let script = e_graph_script(p)?;
            let tree = run_script(&g, &script, Fallback::Search(DEFAULT_NODE_BUDGET))?;
            Ok(tree.critical_sizes())
        }
        _ => {
            let g = family_graph(family, p)?;
            Ok(search_tree(&g, DEFAULT_NODE_BUDGET)?.critical_sizes())
        }
    }
}

pub fn verify_instance(family: Family, p: u32, channels: Channels) -> VerificationReport {
    let prediction = match predict(family, p) {
        Ok(pr) => pr,
        Err(e) => {
            return VerificationReport {
                family,
                param: p,
                prediction: Prediction::Contractible,
                morse: Verdict::Mismatch(format!("no prediction: {e}")),
                morse_cells: None,
                homology: Verdict::Skipped("no prediction".to_string()),
                betti: None,
            }
        }
    };

    let (morse, morse_cells) = if !channels.morse() {
        (Verdict::Skipped("channel not selected".to_string()), None)
    } else if family == Family::Sg2 && p == 2 {
        // the explicit graded matching starts at k=3
        (
            Verdict::Skipped("graded matching defined for k >= 3".to_string()),
            None,
        )
    } else {
        match (
            morse_critical_sizes(family, p),
            predict_morse_counts(family, p),
        ) {
            (Ok(got), Ok(want)) => {
                if got == want {
                    (Verdict::Match, Some(got))
                } else {
                    (
                        Verdict::Mismatch(format!("cells {got:?}, expected {want:?}")),
                        Some(got),
                    )
                }
            }
            (Err(e), _) | (_, Err(e)) => (Verdict::Mismatch(e.to_string()), None),
        }
    };

    let (homology_v, betti) = if !channels.homology() {
        (Verdict::Skipped("channel not selected".to_string()), None)
    } else {
        let run = family_graph(family, p)
            .and_then(|g| independence_complex(&g, DEFAULT_FACE_BUDGET))
            .and_then(|kx| homology(&kx, DEFAULT_SNF_FACE_THRESHOLD));
        match run {
            Ok(h) => {
                let support = h.support();
                (check_homology(&prediction, &h), Some(support))
            }
            Err(e) => (Verdict::Mismatch(e.to_string()), None),
        }
    };

    VerificationReport {
        family,
        param: p,
        prediction,
        morse,
        morse_cells,
        homology: homology_v,
        betti,
    }
}

pub fn verify_family(
    family: Family,
    params: impl IntoIterator<Item = u32>,
    channels: Channels,
) -> Vec<VerificationReport> {
    params
        .into_iter()
        .map(|p| verify_instance(family, p, channels))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prediction_examples() {
        assert_eq!(
            predict_ind_cycle(6).unwrap(),
            Prediction::WedgeOfSpheres(vec![(1, 2)])
        );
        assert_eq!(
            predict_ind_cycle(5).unwrap(),
            Prediction::WedgeOfSpheres(vec![(1, 1)])
        );
        assert_eq!(
            predict_ind_cycle(3).unwrap(),
            Prediction::WedgeOfSpheres(vec![(0, 2)])
        );
        assert_eq!(
            predict_ind_sg2(4).unwrap(),
            Prediction::WedgeOfSpheres(vec![(2, 3)])
        );
        assert_eq!(
            predict_ind_sg2(5).unwrap(),
            Prediction::WedgeOfSpheres(vec![(2, 11)])
        );
        assert_eq!(
            predict_ind_sg2(2).unwrap(),
            Prediction::WedgeOfSpheres(vec![(1, 2)])
        );
        assert_eq!(
            predict_ind_e(5).unwrap(),
            Prediction::WedgeOfSpheres(vec![(3, 3)])
        );
        assert_eq!(
            predict_ind_e(8).unwrap(),
            Prediction::WedgeOfSpheres(vec![(3, 2)])
        );
        assert_eq!(
            predict_ind_e(4).unwrap(),
            Prediction::WedgeOfSpheres(vec![(2, 1)])
        );
    }

    #[test]
    fn morse_count_examples() {
        assert_eq!(predict_morse_counts(Family::El, 5).unwrap(), vec![3]);
        assert_eq!(predict_morse_counts(Family::Path, 8).unwrap(), vec![3]);
        assert_eq!(predict_morse_counts(Family::Sg2, 6).unwrap(), vec![3; 24]);
    }

    #[test]
    fn formula_identity() {
        for k in 3..=64 {
            assert!(wedge_count_formulas_agree(k), "k={k}");
        }
    }

    #[test]
    fn e_parity_cases_are_total() {
        for n in 3..=60u32 {
            predict_ind_e(n).unwrap();
        }
    }

    #[test]
    fn cycles_all_match() {
        for rep in verify_family(Family::Cycle, 3..=9, Channels::Both) {
            assert!(rep.is_match(), "{}", rep.to_text());
        }
    }

    #[test]
    fn paths_and_el_match() {
        for rep in verify_family(Family::Path, 1..=9, Channels::Both) {
            assert!(rep.is_match(), "{}", rep.to_text());
        }
        for rep in verify_family(Family::El, 0..=6, Channels::Both) {
            assert!(rep.is_match(), "{}", rep.to_text());
        }
    }

    #[test]
    fn sg2_small_match() {
        for rep in verify_family(Family::Sg2, 2..=4, Channels::Both) {
            assert!(rep.is_match(), "{}", rep.to_text());
        }
    }

    #[test]
    fn e_small_match() {
        for rep in verify_family(Family::E, 3..=5, Channels::Both) {
            assert!(rep.is_match(), "{}", rep.to_text());
        }
    }
}
