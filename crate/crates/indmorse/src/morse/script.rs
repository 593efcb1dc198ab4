//! Node-addressed step programs for matching trees, and the generated
//! programs for the E graph family in both parity cases.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graphs::{self, Graph, VertexLabel};

use super::search::complete_tree;
use super::tree::{parse_path, render_path, MatchingTree, TreeBuilder, TreeStep};

/// A program of steps addressed by node path (L/R letters from the root;
/// free and match steps stay on their node's path).
#[derive(Debug, Clone)]
pub struct Script {
    pub name: String,
    pub steps: Vec<(String, TreeStep)>,
    /// Audit notes: prose steps dropped because their preconditions fail at
    /// this parameter (small-parameter degeneracies); their subtrees fall
    /// through to search.
    pub notes: Vec<String>,
}

impl Script {
    pub fn to_text(&self, g: &Graph) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "script {}", self.name);
        for (path, step) in &self.steps {
            let p = render_path(path);
            match *step {
                TreeStep::Free(v) => {
                    let _ = writeln!(out, "at {p} free {}", g.label(v));
                }
                TreeStep::Match { v, p: w } => {
                    let _ = writeln!(out, "at {p} match {} via {}", g.label(v), g.label(w));
                }
                TreeStep::Split(v) => {
                    let _ = writeln!(out, "at {p} split {}", g.label(v));
                }
            }
        }
        out
    }

    pub fn from_text(text: &str, g: &Graph) -> Result<Script> {
        let mut name = String::new();
        let mut steps = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            let err = |msg: &str| Error::Parse {
                line: lineno + 1,
                msg: msg.to_string(),
            };
            match toks.as_slice() {
                ["script", n] => name = n.to_string(),
                ["at", p, "free", v] => {
                    steps.push((parse_path(p)?, TreeStep::Free(resolve(g, v)?)));
                }
                ["at", p, "match", v, "via", w] => {
                    steps.push((
                        parse_path(p)?,
                        TreeStep::Match {
                            v: resolve(g, v)?,
                            p: resolve(g, w)?,
                        },
                    ));
                }
                ["at", p, "split", v] => {
                    steps.push((parse_path(p)?, TreeStep::Split(resolve(g, v)?)));
                }
                _ => return Err(err("expected 'script', 'at <path> free|match|split ...'")),
            }
        }
        Ok(Script {
            name,
            steps,
            notes: Vec::new(),
        })
    }
}

fn resolve(g: &Graph, token: &str) -> Result<u32> {
    let label = VertexLabel::parse(token)?;
    g.index_of(&label)
        .ok_or_else(|| Error::parameter(format!("vertex {label} not in graph")))
}

/// What to do with leaves the script leaves open with |Sigma| >= 2.
#[derive(Debug, Clone, Copy)]
pub enum Fallback {
    /// Reject the tree as incomplete.
    Strict,
    /// Complete open leaves by search, with this node budget.
    Search(usize),
}

/// Runs a script against its host graph. Every step is validated; an
/// invalid step aborts with the node path and the violated precondition.
pub fn run_script(g: &Graph, script: &Script, fallback: Fallback) -> Result<MatchingTree> {
    let mut builder = TreeBuilder::new(g)?;
    for (path, step) in &script.steps {
        builder.apply(path, *step)?;
    }
    if let Fallback::Search(budget) = fallback {
        complete_tree(&mut builder, budget)?;
    }
    builder.finish()
}

/// Recovers a replayable script from a built tree. Nodes are created after
/// their parent's step is applied, so index order is a valid replay order.
pub fn script_from_tree(tree: &MatchingTree, name: &str) -> Script {
    let steps = tree
        .nodes
        .iter()
        .filter_map(|n| n.step.map(|s| (n.path.clone(), s)))
        .collect();
    Script {
        name: name.to_string(),
        steps,
        notes: Vec::new(),
    }
}

struct ProseScript {
    g: Graph,
    m: u32,
    raw: Vec<(String, TreeStep)>,
}

impl ProseScript {
    fn new(n: u32) -> Result<ProseScript> {
        Ok(ProseScript {
            g: graphs::e_graph(n)?,
            m: 2 * n + 2,
            raw: Vec::new(),
        })
    }

    fn wrap(&self, i: i64) -> u32 {
        ((i - 1).rem_euclid(self.m as i64) + 1) as u32
    }

    fn int(&self, i: i64) -> Result<u32> {
        let l = VertexLabel::Int(self.wrap(i));
        self.g
            .index_of(&l)
            .ok_or_else(|| Error::contract(format!("generated vertex {l} not in graph")))
    }

    fn cyc(&self, i: i64) -> Result<u32> {
        let l = VertexLabel::Cycle(self.wrap(i));
        self.g
            .index_of(&l)
            .ok_or_else(|| Error::contract(format!("generated vertex {l} not in graph")))
    }

    fn push(&mut self, path: &str, step: TreeStep) {
        self.raw.push((path.to_string(), step));
    }

    fn split_int(&mut self, path: &str, i: i64) -> Result<()> {
        let v = self.int(i)?;
        self.push(path, TreeStep::Split(v));
        Ok(())
    }

    fn split_cyc(&mut self, path: &str, i: i64) -> Result<()> {
        let v = self.cyc(i)?;
        self.push(path, TreeStep::Split(v));
        Ok(())
    }

    fn free_int(&mut self, path: &str, i: i64) -> Result<()> {
        let v = self.int(i)?;
        self.push(path, TreeStep::Free(v));
        Ok(())
    }

    fn free_cyc(&mut self, path: &str, i: i64) -> Result<()> {
        let v = self.cyc(i)?;
        self.push(path, TreeStep::Free(v));
        Ok(())
    }

    fn match_cyc_int(&mut self, path: &str, v: i64, p: i64) -> Result<()> {
        let v = self.cyc(v)?;
        let p = self.int(p)?;
        self.push(path, TreeStep::Match { v, p });
        Ok(())
    }

    fn match_int_int(&mut self, path: &str, v: i64, p: i64) -> Result<()> {
        let v = self.int(v)?;
        let p = self.int(p)?;
        self.push(path, TreeStep::Match { v, p });
        Ok(())
    }

    fn match_cyc_cyc(&mut self, path: &str, v: i64, p: i64) -> Result<()> {
        let v = self.cyc(v)?;
        let p = self.cyc(p)?;
        self.push(path, TreeStep::Match { v, p });
        Ok(())
    }
}

fn spine(depth: i64) -> String {
    "L".repeat(depth.max(0) as usize)
}

fn odd_case(s: &mut ProseScript, n: i64) -> Result<()> {
    // first branching step at the root
    s.split_int("", 1)?;
    s.match_cyc_int("R", 3, 3)?;
    s.free_int("R", n + 4)?;
    // branch loop over the exclusion spine
    for i in 1..=n - 2 {
        let p = spine(i);
        s.split_int(&p, i + 1)?;
        let q = format!("{p}R");
        s.match_cyc_int(&q, i + 3, i + 3)?;
        s.free_int(&q, i + 4 + n)?;
    }
    // second loop: splits walk from n-1 up to 2n-2 on the spine
    for r in 0..=n - 2 {
        let p = spine(n - 1 + r);
        s.split_int(&p, n + r)?;
        let q = format!("{p}R");
        s.match_cyc_int(&q, n + r + 2, n + r + 2)?;
        s.match_cyc_int(&q, n + r + 4, n + r + 4)?;
        s.free_cyc(&q, r + 2)?;
    }
    let f = spine(2 * n - 2);
    s.split_int(&f, 2 * n)?;
    // include branch: reduces to an end ladder
    s.split_cyc(&format!("{f}R"), 2 * n + 2)?;
    s.free_int(&format!("{f}RL"), 2 * n + 2)?;
    s.split_cyc(&format!("{f}RR"), n - 1)?;
    s.free_cyc(&format!("{f}RRL"), n)?;
    // {f}RRR: ladder residual, handled by search
    // exclude branch
    s.split_cyc(&format!("{f}L"), 2 * n + 2)?;
    s.free_int(&format!("{f}LR"), 2 * n + 1)?;
    s.split_int(&format!("{f}LL"), 2 * n + 1)?;
    // exclude 2n+1
    let p3 = format!("{f}LLL");
    s.match_int_int(&p3, 2 * n - 1, 2 * n + 2)?;
    s.split_cyc(&p3, n - 1)?;
    s.free_cyc(&format!("{p3}R"), 2 * n + 1)?;
    s.split_cyc(&format!("{p3}L"), 2 * n + 1)?;
    s.free_cyc(&format!("{p3}LL"), 2 * n)?;
    s.split_cyc(&format!("{p3}LR"), n + 2)?;
    s.free_cyc(&format!("{p3}LRL"), n + 1)?;
    // {p3}LRR: ladder residual
    // include 2n+1
    let p4 = format!("{f}LLR");
    s.match_cyc_int(&p4, 2 * n - 1, 2 * n - 1)?;
    s.match_cyc_cyc(&p4, n, n - 1)?;
    s.split_cyc(&p4, n + 2)?;
    // {p4}L and {p4}R: ladder residuals
    Ok(())
}

fn even_case(s: &mut ProseScript, n: i64) -> Result<()> {
    s.split_int("", 1)?;
    s.match_cyc_int("R", 3, 3)?;
    s.free_int("R", 5)?;
    for i in 1..=2 * n - 3 {
        let p = spine(i);
        s.split_int(&p, i + 1)?;
        let q = format!("{p}R");
        if i % 2 == 1 {
            s.match_cyc_int(&q, i + n + 4, i + 3)?;
        } else {
            s.match_cyc_int(&q, i + 3, i + 3)?;
        }
        s.free_int(&q, i + 5)?;
    }
    let f = spine(2 * n - 2);
    s.split_cyc(&f, n + 1)?;
    let fl = format!("{f}L");
    if n % 6 == 4 {
        let k = (n - 4) / 6;
        for l in 0..k {
            s.match_cyc_cyc(&fl, n + 5 + 6 * l, n + 3 + 6 * l)?;
        }
        s.split_int(&fl, 2 * n)?;
        let fll = format!("{fl}L");
        for l in 0..=k {
            s.match_cyc_cyc(&fll, n - 3 - 6 * l, n - 1 - 6 * l)?;
        }
        // {fll}: four-vertex path residual, handled by search
        s.free_int(&format!("{fl}R"), 2 * n + 2)?;
    } else {
        s.split_int(&fl, 2 * n + 1)?;
        // {fl}R: two path residuals
        s.match_int_int(&format!("{fl}L"), 2 * n - 1, 2 * n + 2)?;
        // {fl}L: two path residuals
    }
    let fr = format!("{f}R");
    s.split_int(&fr, 2 * n)?;
    // {fr}R: path residual
    s.match_cyc_int(&format!("{fr}L"), 2 * n + 1, 2 * n + 1)?;
    s.free_int(&format!("{fr}L"), 2 * n - 1)?;
    Ok(())
}

/// The prose construction for E_{2n+2}, as an executable script. Steps whose
/// preconditions degenerate at small n are dropped (recorded in `notes`);
/// their subtrees, like the end-ladder and path residuals, complete by
/// search. Every returned step validates.
pub fn e_graph_script(n: u32) -> Result<Script> {
    if n < 3 {
        return Err(Error::parameter("E script needs n >= 3"));
    }
    let mut s = ProseScript::new(n)?;
    if n % 2 == 1 {
        odd_case(&mut s, n as i64)?;
    } else {
        even_case(&mut s, n as i64)?;
    }
    // dry-run: keep only the steps that validate, abandoning a node's
    // remaining steps (and its descendants') after the first failure there
    let mut builder = TreeBuilder::new(&s.g)?;
    let mut kept = Vec::new();
    let mut notes = Vec::new();
    let mut abandoned: Vec<String> = Vec::new();
    for (path, step) in s.raw {
        if abandoned.iter().any(|a| path.starts_with(a.as_str())) {
            notes.push(format!(
                "skipped '{step}' at {}: inside an abandoned subtree",
                render_path(&path)
            ));
            continue;
        }
        match builder.apply(&path, step) {
            Ok(()) => kept.push((path, step)),
            Err(e) => {
                notes.push(format!("dropped '{step}': {e}"));
                abandoned.push(path);
            }
        }
    }
    Ok(Script {
        name: format!("e{}", 2 * n + 2),
        steps: kept,
        notes,
    })
}

/// Sorted component sizes when every component of `g` is a path; an audit
/// error otherwise.
fn path_union_shape(g: &Graph) -> Result<Vec<usize>> {
    let n = g.n();
    let mut seen = vec![false; n];
    let mut sizes = Vec::new();
    for start in 0..n as u32 {
        if seen[start as usize] {
            continue;
        }
        let mut stack = vec![start];
        seen[start as usize] = true;
        let mut verts = 0usize;
        let mut deg_sum = 0usize;
        while let Some(v) = stack.pop() {
            verts += 1;
            let nb = g.neighbors(v);
            if nb.len() > 2 {
                return Err(Error::audit(format!(
                    "component of vertex {} is not a path: degree {}",
                    g.label(v),
                    nb.len()
                )));
            }
            deg_sum += nb.len();
            for &w in nb {
                if !seen[w as usize] {
                    seen[w as usize] = true;
                    stack.push(w);
                }
            }
        }
        // a path on m vertices has m-1 edges; equality rules out cycles
        if deg_sum != 2 * (verts - 1) {
            return Err(Error::audit(
                "component has a cycle, expected a path".to_string(),
            ));
        }
        sizes.push(verts);
    }
    sizes.sort_unstable();
    Ok(sizes)
}

/// Applies the generated e-family script without search completion and
/// checks its delegation-node residual subgraphs: for odd n the four
/// end-ladder copies (parameters n-4, n-5, n-5, n-6), for even n the stated
/// disjoint unions of paths.
pub fn el_delegation_check(n: u32) -> Result<()> {
    if n < 7 {
        return Err(Error::parameter("delegation check needs n >= 7"));
    }
    let script = e_graph_script(n)?;
    if !script.notes.is_empty() {
        return Err(Error::audit(format!(
            "script for n={n} dropped steps: {:?}",
            script.notes
        )));
    }
    let g = graphs::e_graph(n)?;
    let mut b = TreeBuilder::new(&g)?;
    for (path, step) in &script.steps {
        b.apply(path, *step)?;
    }
    let mut residuals: Vec<Graph> = Vec::new();
    for path in b.open_paths() {
        let idx = b.open_node(&path).expect("open path");
        let r = b.residual(idx);
        if r != 0 {
            residuals.push(g.induced_subgraph(&super::sigma::bits(r))?);
        }
    }
    if n % 2 == 1 {
        let mut expect: Vec<u32> = vec![n - 4, n - 5, n - 5, n - 6];
        for sub in &residuals {
            let hit = expect
                .iter()
                .position(|&r| {
                    graphs::el_graph(r)
                        .and_then(|el| graphs::is_isomorphic_small(sub, &el))
                        .unwrap_or(false)
                })
                .ok_or_else(|| {
                    Error::audit(format!(
                        "a residual with {} vertices matches no expected end-ladder",
                        sub.n()
                    ))
                })?;
            expect.remove(hit);
        }
        if !expect.is_empty() {
            return Err(Error::audit(format!(
                "missing end-ladder residuals with parameters {expect:?}"
            )));
        }
    } else {
        let mut shapes: Vec<Vec<usize>> = residuals
            .iter()
            .map(path_union_shape)
            .collect::<Result<_>>()?;
        shapes.sort();
        let h = (n / 2) as usize;
        let mut want: Vec<Vec<usize>> = if n % 6 == 4 {
            vec![vec![4], vec![n as usize - 2]]
        } else {
            vec![vec![h, h], vec![h - 2, h + 1], vec![n as usize - 2]]
        };
        want.sort();
        if shapes != want {
            return Err(Error::audit(format!(
                "path residual shapes {shapes:?}, expected {want:?}"
            )));
        }
    }
    Ok(())
}
