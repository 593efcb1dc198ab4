//! Command-line front end: graph generation, complex construction, Morse
//! runs, homology, verification sweeps, and artifact round-tripping.
//! Everything is deterministic; identical invocations produce identical
//! bytes. Exit codes: 0 success, 1 mismatch, 2 usage or parse error,
//! 3 budget exhausted.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use indmorse::complexes::{independence_complex, SimplicialComplex, DEFAULT_FACE_BUDGET};
use indmorse::error::{Error, Result};
use indmorse::graphs::{self, Graph};
use indmorse::homology::{homology, DEFAULT_SNF_FACE_THRESHOLD};
use indmorse::morse::{
    e_graph_script, induced_matching, morse_summary, run_script, script_from_tree, search_tree,
    sg2k_matching, verify_acyclic, Fallback, MatchingTree, PartialMatching, Script,
    DEFAULT_NODE_BUDGET,
};
use indmorse::theorems::{verify_family, Channels, Family};

#[derive(Parser)]
#[command(name = "indmorse", version, about = "Independence-complex toolkit")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a graph and write its text form.
    Gen(GenArgs),
    /// Build the independence complex of a generated graph.
    Complex(ComplexArgs),
    /// Run the family's Morse construction and report critical cells.
    Morse(MorseArgs),
    /// Compute integral reduced homology of the independence complex.
    Homology(HomologyArgs),
    /// Sweep a parameter range and reconcile prediction, Morse and homology.
    Verify(VerifyArgs),
    /// Re-emit a stored artifact (round-trip check).
    Export(ExportArgs),
}

#[derive(Args, Clone)]
struct FamilyArgs {
    /// Family: sg, sg2, path, cycle, e, el, complete.
    #[arg(long)]
    family: Option<String>,
    #[arg(short = 'n', long)]
    n: Option<u32>,
    #[arg(short = 'k', long)]
    k: Option<u32>,
    #[arg(short = 'r', long)]
    r: Option<u32>,
}

impl FamilyArgs {
    fn need(v: Option<u32>, what: &str) -> Result<u32> {
        v.ok_or_else(|| Error::parameter(format!("missing parameter {what}")))
    }

    fn family(&self) -> Result<&str> {
        self.family
            .as_deref()
            .ok_or_else(|| Error::parameter("missing --family"))
    }

    fn graph(&self) -> Result<Graph> {
        match self.family()? {
            "sg" => graphs::stable_kneser(Self::need(self.n, "-n")?, Self::need(self.k, "-k")?),
            "sg2" => graphs::stable_kneser(2, Self::need(self.k, "-k")?),
            "path" => graphs::path(Self::need(self.n, "-n")?),
            "cycle" => graphs::cycle(Self::need(self.n, "-n")?),
            "e" => graphs::e_graph(Self::need(self.n, "-n")?),
            "el" => graphs::el_graph(Self::need(self.r, "-r")?),
            "complete" => graphs::complete(Self::need(self.n, "-n")?),
            other => Err(Error::parameter(format!("unknown family '{other}'"))),
        }
    }

    fn verify_family(&self) -> Result<Family> {
        match self.family()? {
            "sg2" => Ok(Family::Sg2),
            "path" => Ok(Family::Path),
            "cycle" => Ok(Family::Cycle),
            "e" => Ok(Family::E),
            "el" => Ok(Family::El),
            other => Err(Error::parameter(format!(
                "family '{other}' has no predictions; use sg2, path, cycle, e or el"
            ))),
        }
    }

    fn param(&self) -> Option<u32> {
        self.n.or(self.k).or(self.r)
    }

    fn id(&self) -> String {
        let mut s = self.family.clone().unwrap_or_default();
        for v in [self.n, self.k, self.r].into_iter().flatten() {
            s.push_str(&format!("-{v}"));
        }
        s
    }
}

#[derive(Args)]
struct GenArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ComplexArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long, default_value_t = DEFAULT_FACE_BUDGET)]
    budget_faces: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MorseArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long, default_value_t = DEFAULT_NODE_BUDGET)]
    budget_nodes: usize,
    #[arg(long, default_value_t = DEFAULT_FACE_BUDGET)]
    budget_faces: usize,
    /// Also emit the tree as a replayable step script.
    #[arg(long)]
    emit_script: bool,
    /// Also emit the full induced matching on the face poset.
    #[arg(long)]
    emit_matching: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct HomologyArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long, default_value_t = DEFAULT_FACE_BUDGET)]
    budget_faces: usize,
    #[arg(long, default_value_t = DEFAULT_SNF_FACE_THRESHOLD)]
    snf_threshold: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    fam: FamilyArgs,
    /// Parameter range `a..b` (inclusive) or a single value; defaults to the
    /// -n/-k/-r value.
    #[arg(long)]
    range: Option<String>,
    #[arg(long, value_enum, default_value_t = ChannelArg::Both)]
    channels: ChannelArg,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    Morse,
    Homology,
    Both,
}

#[derive(Args)]
struct ExportArgs {
    /// Kind of the stored artifact.
    #[arg(long, value_enum)]
    kind: Kind,
    /// Input artifact path.
    #[arg(long)]
    input: PathBuf,
    /// Family context (required for complex, script, matching).
    #[command(flatten)]
    fam: FamilyArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Graph,
    Complex,
    Script,
    Matching,
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn parse_range(spec: &str) -> Result<(u32, u32)> {
    if let Some((a, b)) = spec.split_once("..") {
        let lo: u32 = a
            .trim()
            .parse()
            .map_err(|_| Error::parameter(format!("bad range start '{a}'")))?;
        let hi: u32 = b
            .trim()
            .parse()
            .map_err(|_| Error::parameter(format!("bad range end '{b}'")))?;
        if lo > hi {
            return Err(Error::parameter(format!("empty range '{spec}'")));
        }
        Ok((lo, hi))
    } else {
        let v: u32 = spec
            .trim()
            .parse()
            .map_err(|_| Error::parameter(format!("bad range '{spec}'")))?;
        Ok((v, v))
    }
}

/// Builds the family's matching tree: the generated script for the e family
/// (search fills any leaves its prose steps abandon), plain search otherwise.
fn family_tree(fam: &FamilyArgs, g: &Graph, budget_nodes: usize) -> Result<MatchingTree> {
    if fam.family()? == "e" {
        let script = e_graph_script(FamilyArgs::need(fam.n, "-n")?)?;
        run_script(g, &script, Fallback::Search(budget_nodes))
    } else {
        search_tree(g, budget_nodes)
    }
}

fn cmd_gen(args: &GenArgs) -> Result<()> {
    let g = args.fam.graph()?;
    emit(&args.out, &g.to_text())?;
    eprintln!("vertices={} edges={}", g.n(), g.edge_count());
    Ok(())
}

fn cmd_complex(args: &ComplexArgs) -> Result<()> {
    let g = args.fam.graph()?;
    let k = independence_complex(&g, args.budget_faces)?;
    emit(&args.out, &k.to_text())?;
    eprintln!("faces={} max_card={}", k.total_faces(), k.max_card());
    Ok(())
}

fn cmd_morse(args: &MorseArgs) -> Result<()> {
    let g = args.fam.graph()?;
    let mut out = String::new();
    if args.fam.family()? == "sg2" {
        let res = sg2k_matching(FamilyArgs::need(args.fam.k, "-k")?)?;
        out.push_str(&format!(
            "critical count={} sizes={:?}\n",
            res.critical.len(),
            res.critical.iter().map(|c| c.len()).collect::<Vec<_>>()
        ));
        for cell in &res.critical {
            let parts: Vec<String> = cell.iter().map(|(a, b)| format!("{{{a},{b}}}")).collect();
            out.push_str(&format!("cell {}\n", parts.join(" ")));
        }
        if args.emit_matching {
            out.push_str(&res.matching.to_text(&res.complex));
        }
    } else {
        let tree = family_tree(&args.fam, &g, args.budget_nodes)?;
        if args.emit_script {
            let script = script_from_tree(&tree, &args.fam.id());
            out.push_str(&script.to_text(&g));
        }
        let cells = tree.critical_cells();
        out.push_str(&format!(
            "critical count={} sizes={:?}\n",
            cells.len(),
            tree.critical_sizes()
        ));
        for cell in &cells {
            let parts: Vec<String> = cell.0.iter().map(|&v| g.label(v).to_string()).collect();
            out.push_str(&format!("cell {{{}}}\n", parts.join(",")));
        }
        if args.emit_matching {
            let k = independence_complex(&g, args.budget_faces)?;
            let m = induced_matching(&g, &tree, &k)?;
            verify_acyclic(&k, &m)?;
            let s = morse_summary(&k, &m)?;
            out.push_str(&format!("summary cells={:?}\n", s.cells()));
            out.push_str(&m.to_text(&k));
        }
    }
    emit(&args.out, &out)
}

fn cmd_homology(args: &HomologyArgs) -> Result<()> {
    let g = args.fam.graph()?;
    let k = independence_complex(&g, args.budget_faces)?;
    let h = homology(&k, args.snf_threshold)?;
    emit(&args.out, &h.report(&args.fam.id()))
}

fn cmd_verify(args: &VerifyArgs) -> Result<bool> {
    let family = args.fam.verify_family()?;
    let (lo, hi) = match (&args.range, args.fam.param()) {
        (Some(spec), _) => parse_range(spec)?,
        (None, Some(p)) => (p, p),
        (None, None) => return Err(Error::parameter("need --range or a parameter value")),
    };
    let channels = match args.channels {
        ChannelArg::Morse => Channels::Morse,
        ChannelArg::Homology => Channels::Homology,
        ChannelArg::Both => Channels::Both,
    };
    let reports = verify_family(family, lo..=hi, channels);
    let mut out = String::new();
    let mut all_match = true;
    for rep in &reports {
        out.push_str(&rep.to_text());
        out.push('\n');
        all_match &= rep.is_match();
    }
    out.push_str(&format!(
        "sweep family={} range={lo}..{hi} instances={} result={}\n",
        family.name(),
        reports.len(),
        if all_match { "all-match" } else { "MISMATCH" }
    ));
    emit(&args.out, &out)?;
    Ok(all_match)
}

fn export_context(args: &ExportArgs) -> Result<(Graph, SimplicialComplex)> {
    let g = args.fam.graph()?;
    let k = independence_complex(&g, DEFAULT_FACE_BUDGET)?;
    Ok((g, k))
}

fn cmd_export(args: &ExportArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input)?;
    let regenerated = match args.kind {
        Kind::Graph => Graph::from_text(&text)?.to_text(),
        Kind::Complex => {
            let (g, _) = export_context(args)?;
            SimplicialComplex::from_text(&text, g.labels().to_vec(), DEFAULT_FACE_BUDGET)?.to_text()
        }
        Kind::Script => {
            let (g, _) = export_context(args)?;
            Script::from_text(&text, &g)?.to_text(&g)
        }
        Kind::Matching => {
            let (_, k) = export_context(args)?;
            PartialMatching::from_text(&text, &k)?.to_text(&k)
        }
    };
    emit(&args.out, &regenerated)
}

fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Parameter(_) | Error::Parse { .. } | Error::Io(_) => 2,
        Error::Budget { .. } | Error::SearchBudget { .. } => 3,
        Error::Contract(_) | Error::Audit(_) => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.cmd {
        Cmd::Gen(a) => cmd_gen(a).map(|()| true),
        Cmd::Complex(a) => cmd_complex(a).map(|()| true),
        Cmd::Morse(a) => cmd_morse(a).map(|()| true),
        Cmd::Homology(a) => cmd_homology(a).map(|()| true),
        Cmd::Verify(a) => cmd_verify(a),
        Cmd::Export(a) => cmd_export(a).map(|()| true),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
