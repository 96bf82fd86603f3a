use std::fs;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand};
use serde_json::json;

use ratlink::census::{census, CensusConfig, CensusError};
use ratlink::classify::{classify, ClassifyError, ClassifyOptions};
use ratlink::exact::format_rational;
use ratlink::graph::{PlumbingGraph, VertexId};
use ratlink::lattice::{chi, IntersectionForm};
use ratlink::laufer::{is_rational, min_bad, z_min, LauferError};
use ratlink::seifert::{
    brieskorn_seifert, foliation_criterion, orbifold_euler, pinkham_nonrational, seifert_to_graph, star_to_seifert,
    SeifertError,
};
use ratlink::surgery::{check_certificate, cut_and_fill, lo_certificate, CertificateTree, SurgeryError};

/// Exact calculus for negative definite plumbing trees: rationality, and
/// with it the L-space, left-orderability and taut foliation questions.
#[derive(Parser)]
#[command(name = "ratlink", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full report for one graph.
    Classify {
        file: PathBuf,
        #[arg(long)]
        json: bool,
        /// Also compute m(Γ) and a smallest bad set.
        #[arg(long = "with-badset")]
        with_bad_set: bool,
        /// Write a decomposition certificate here (non-rational inputs only).
        #[arg(long = "with-certificate")]
        with_certificate: Option<PathBuf>,
    },
    /// Enumerate and classify all negative definite trees up to isomorphism.
    Census {
        #[arg(long = "max-vertices", default_value_t = 6)]
        max_vertices: usize,
        #[arg(long = "min-weight", default_value_t = -5, allow_hyphen_values = true)]
        min_weight: i64,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        jobs: Option<usize>,
        #[arg(long)]
        minimal: bool,
        #[arg(long = "with-badset")]
        with_bad_set: bool,
    },
    /// Minimal cycle via the Laufer sequence.
    Zmin {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Step-by-step Laufer computation sequence.
    Sequence {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Smallest bad vertex set.
    Bad {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Cut along an edge and fill both sides.
    Cut {
        file: PathBuf,
        /// Edge as `v,w`; `v` keeps the `1/r` filling.
        #[arg(long)]
        edge: String,
        #[arg(long)]
        json: bool,
    },
    /// Build a decomposition certificate.
    Certificate {
        file: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Verify a certificate from scratch.
    CheckCertificate { file: PathBuf },
    /// Seifert invariants and the three rationality verdicts of a star.
    Seifert {
        file: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Graph and classification of the Brieskorn sphere Σ(p,q,r).
    Brieskorn {
        p: i64,
        q: i64,
        r: i64,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
    /// Intersection matrix as JSON.
    Matrix { file: PathBuf },
}

/// A failed internal cross-check, reported with exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
struct Internal(String);

fn is_internal(err: &anyhow::Error) -> bool {
    err.chain().any(|cause| {
        if cause.is::<Internal>() {
            return true;
        }
        if let Some(e) = cause.downcast_ref::<LauferError>() {
            return matches!(e, LauferError::CriteriaDisagree | LauferError::Diverged | LauferError::LoweringCap(_));
        }
        if let Some(e) = cause.downcast_ref::<SurgeryError>() {
            return matches!(e, SurgeryError::Inconsistent(_));
        }
        if let Some(e) = cause.downcast_ref::<SeifertError>() {
            return matches!(e, SeifertError::Inconsistent(_) | SeifertError::SearchFailed);
        }
        if let Some(e) = cause.downcast_ref::<ClassifyError>() {
            return e.is_internal();
        }
        if let Some(CensusError::Classify(e)) = cause.downcast_ref::<CensusError>() {
            return e.is_internal();
        }
        false
    })
}

fn read_graph(path: &Path) -> Result<PlumbingGraph> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        s
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?
    };
    let g = PlumbingGraph::parse(&text).with_context(|| format!("parsing {}", path.display()))?;
    if g.is_empty() || !g.is_connected() {
        bail!("{} must describe a non-empty connected tree", path.display());
    }
    Ok(g)
}

fn print_json(value: &impl serde::Serialize) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(value)?);
    Ok(())
}

fn opt_bool(b: Option<bool>) -> String {
    b.map_or_else(|| "n/a".to_string(), |b| b.to_string())
}

fn ids(set: &[VertexId]) -> String {
    set.iter().map(|v| v.as_str()).collect::<Vec<_>>().join(",")
}

fn cycle_vector(g: &PlumbingGraph, cycle: &ratlink::Cycle) -> String {
    let order: Vec<VertexId> = g.vertices().cloned().collect();
    format!("{:?}", cycle.to_vec(&order))
}

fn write_certificate(g: &PlumbingGraph, path: &Path) -> Result<CertificateTree> {
    let cert = lo_certificate(&g.minimize())?;
    check_certificate(&cert).map_err(|e| Internal(format!("freshly built certificate rejected: {e}")))?;
    fs::write(path, serde_json::to_string_pretty(&cert)?).with_context(|| format!("writing {}", path.display()))?;
    Ok(cert)
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Classify { file, json, with_bad_set, with_certificate } => {
            let g = read_graph(&file)?;
            let opts = ClassifyOptions { with_bad_set, ..Default::default() };
            let mut report = classify(&g, &opts)?;
            if !report.is_consistent() {
                return Err(Internal("report violates the equivalences".into()).into());
            }
            if let Some(path) = with_certificate {
                match report.rational {
                    Some(false) => {
                        write_certificate(&g, &path)?;
                        report.certificate_path = Some(path.display().to_string());
                    }
                    _ => eprintln!("no certificate: the graph is rational or not negative definite"),
                }
            }
            if json {
                return print_json(&report);
            }
            println!("vertices:           {}", report.vertices);
            println!("intersection form:  {}", report.definiteness);
            println!("det:                {}", format_rational(&report.det));
            println!("homology sphere:    {}", report.zhs);
            println!("rational:           {}", opt_bool(report.rational));
            println!("L-space:            {}", opt_bool(report.l_space));
            println!("left-orderable π1:  {}", opt_bool(report.lo));
            println!("taut foliation:     {}", opt_bool(report.taut_foliation));
            if let (Some(m), Some(b)) = (report.m, &report.bad_set) {
                let bound = if report.m_upper_bound { " (upper bound)" } else { "" };
                println!("m:                  {m}{bound}, bad set {{{}}}", ids(b));
            }
            if let Some(p) = &report.certificate_path {
                println!("certificate:        {p}");
            }
        }
        Command::Census { max_vertices, min_weight, out, jobs, minimal, with_bad_set } => {
            if let Some(k) = jobs {
                rayon::ThreadPoolBuilder::new().num_threads(k).build_global()?;
            }
            let cfg = CensusConfig { max_vertices, weight_min: min_weight, minimal_only: minimal };
            let opts = ClassifyOptions { with_bad_set, ..Default::default() };
            let records = census(&cfg, &opts)?;
            fs::create_dir_all(&out)?;
            let mut lines = String::new();
            for r in &records {
                lines.push_str(&serde_json::to_string(r)?);
                lines.push('\n');
            }
            fs::write(out.join("census.jsonl"), lines)?;
            let rational = records.iter().filter(|r| r.report.rational == Some(true)).count();
            let summary = json!({
                "max_vertices": max_vertices,
                "min_weight": min_weight,
                "minimal_only": minimal,
                "graphs": records.len(),
                "rational": rational,
                "non_rational": records.len() - rational,
            });
            fs::write(out.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
            println!("{} graphs ({rational} rational) written to {}", records.len(), out.display());
        }
        Command::Zmin { file, json } => {
            let g = read_graph(&file)?;
            let (z, _) = z_min(&g)?;
            let chi_z = chi(&g, &z)?;
            if json {
                return print_json(&json!({ "z_min": z, "chi": format_rational(&chi_z) }));
            }
            println!("Z_min = {z}");
            println!("chi(Z_min) = {}", format_rational(&chi_z));
        }
        Command::Sequence { file, json } => {
            let g = read_graph(&file)?;
            let (_, seq) = z_min(&g)?;
            if json {
                return print_json(&seq);
            }
            let order: Vec<&str> = g.vertices().map(|v| v.as_str()).collect();
            println!("cycle order: {}", order.join(","));
            println!("{:>5}  {:<10} {:>7}  cycle", "step", "vertex", "pairing");
            for (i, s) in seq.steps.iter().enumerate() {
                println!("{i:>5}  {:<10} {:>7}  {}", s.vertex.as_str(), s.pairing, cycle_vector(&g, &s.cycle_before));
            }
            println!("final  {}", cycle_vector(&g, &seq.final_cycle));
        }
        Command::Bad { file, json } => {
            let g = read_graph(&file)?;
            let search = min_bad(&g)?;
            if json {
                return print_json(&search);
            }
            let w: Vec<VertexId> = search.witness.iter().cloned().collect();
            println!("m = {}", search.m);
            println!("bad set = {{{}}}", ids(&w));
            if search.uses_non_node {
                println!("note: the witness uses a vertex of valency below three");
            }
        }
        Command::Cut { file, edge, json } => {
            let g = read_graph(&file)?;
            let (v, w) = edge.split_once(',').ok_or_else(|| anyhow!("--edge expects `v,w`"))?;
            let (v, w) = (VertexId::new(v.trim())?, VertexId::new(w.trim())?);
            let cut = cut_and_fill(&g, &v, &w)?;
            if json {
                return print_json(&cut);
            }
            println!("r = {}", format_rational(&cut.r));
            println!("# filled_v (string for 1/r at {v})\n{}", cut.filled_v);
            println!("# filled_w (string for r at {w})\n{}", cut.filled_w);
        }
        Command::Certificate { file, out } => {
            let g = read_graph(&file)?;
            match out {
                Some(path) => {
                    let cert = write_certificate(&g, &path)?;
                    println!("{} nodes, depth {}, written to {}", cert.size(), cert.depth(), path.display());
                }
                None => {
                    let cert = lo_certificate(&g.minimize())?;
                    print_json(&cert)?;
                }
            }
        }
        Command::CheckCertificate { file } => {
            let text = fs::read_to_string(&file).with_context(|| format!("reading {}", file.display()))?;
            let cert: CertificateTree = serde_json::from_str(&text).context("parsing certificate")?;
            check_certificate(&cert)?;
            println!("valid: {} nodes, depth {}", cert.size(), cert.depth());
        }
        Command::Seifert { file, json } => {
            let g = read_graph(&file)?.minimize();
            let sd = star_to_seifert(&g)?;
            let e = orbifold_euler(&sd);
            let laufer = is_rational(&g)?.rational;
            let pinkham = pinkham_nonrational(&sd)?;
            let foliation = if sd.nu() == 3 { Some(foliation_criterion(&sd)?) } else { None };
            if json {
                return print_json(&json!({
                    "e0": sd.e0,
                    "legs": sd.legs,
                    "e": format_rational(&e),
                    "rational": laufer,
                    "pinkham_nonrational": pinkham.0,
                    "pinkham_witness": pinkham.1,
                    "foliation": foliation,
                }));
            }
            println!("Seifert invariants: {sd}");
            println!("e = {}", format_rational(&e));
            println!("Laufer: {}", if laufer { "rational" } else { "not rational" });
            match pinkham.1 {
                Some(l) => println!("Pinkham: not rational (l = {l})"),
                None => println!("Pinkham: rational"),
            }
            match foliation {
                Some(f) => println!("taut foliation criterion: {f}"),
                None => println!("taut foliation criterion: n/a (needs three legs)"),
            }
        }
        Command::Brieskorn { p, q, r, out, json } => {
            let sd = brieskorn_seifert(p, q, r)?;
            let g = seifert_to_graph(&sd)?;
            if let Some(path) = &out {
                fs::write(path, g.to_text())?;
            }
            let report = classify(&g, &ClassifyOptions::default())?;
            if json {
                return print_json(&json!({ "seifert": sd, "graph": g.to_text(), "report": report }));
            }
            println!("# Σ({p},{q},{r}) = {sd}");
            print!("{g}");
            println!("# rational: {}", opt_bool(report.rational));
        }
        Command::Matrix { file } => {
            let g = read_graph(&file)?;
            print_json(&IntersectionForm::of(&g).to_json())?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            if is_internal(&err) {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
