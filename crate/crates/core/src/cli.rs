//! The `tresolve` command line.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::checks::representation_checks;
use crate::error::Error;
use crate::field::{Field, FieldChoice, PrimeField, Rationals};
use crate::io::{
    free_complex_doc, free_complex_from_doc, vector_space_complex_doc, vector_space_complex_from_doc,
    ChainDoc, ComplexDoc, InputDoc, MultiplicityDoc,
};
use crate::linalg::Matrix;
use crate::matroid::{Representation, DEFAULT_MAX_GROUND_SET};
use crate::multigraded::{self, build_resolution_with, verify_resolution, FreeComplex};
use crate::multiplicity::{multiplicity_space_with_chains, Multiplicities};
use crate::report::{Check, Report};
use crate::tcomplex::{self, build_t_plus_with, lambda, BasisLabel, Block, VectorSpaceComplex};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INPUT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "tresolve", version, about = "Exact T-complexes of representable matroids and T-resolutions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Circuits, connected components and the T-flat table
    Matroid(JobArgs),
    /// Multiplicity spaces and the augmented T-complex
    Tcomplex(JobArgs),
    /// T-resolution of a multigraded presentation
    Resolve(JobArgs),
    /// Re-check an input document or an emitted complex
    Verify(JobArgs),
}

#[derive(Debug, Clone, Args)]
pub struct JobArgs {
    pub input: PathBuf,
    /// qq or fp:<prime>; overrides the document's field
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long)]
    pub json: bool,
    /// Run every applicable check
    #[arg(long)]
    pub verify: bool,
    #[arg(long, default_value_t = DEFAULT_MAX_GROUND_SET)]
    pub max_ground_set: usize,
    /// Print the chain vectors spanning each multiplicity space
    #[arg(long)]
    pub dump_chains: bool,
}

enum Failure {
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

/// Runs the command line, writing to the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(argv, &mut out, &mut err);
    let _ = std::io::stdout().write_all(&out);
    let _ = std::io::stderr().write_all(&err);
    code
}

/// Runs the command line with buffered output.
pub fn run_with<I, T>(argv: I, out: &mut Vec<u8>, err: &mut Vec<u8>) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT_ERROR } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                err.extend_from_slice(text.as_bytes());
            } else {
                out.extend_from_slice(text.as_bytes());
            }
            return code;
        }
    };
    let mut text = String::new();
    let result = execute(&cli.command, &mut text);
    out.extend_from_slice(text.as_bytes());
    match result {
        Ok(true) => EXIT_OK,
        Ok(false) => EXIT_CHECK_FAILED,
        Err(Failure::Input(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_INPUT_ERROR
        }
    }
}

enum Loaded {
    Input(InputDoc),
    Complex(ComplexDoc),
}

fn load(path: &PathBuf) -> Result<Loaded, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let annotate = |e: Error| Failure::Input(format!("{}: {e}", path.display()));
    if value.get("format").is_some() {
        Ok(Loaded::Complex(ComplexDoc::from_json(&text).map_err(annotate)?))
    } else {
        Ok(Loaded::Input(InputDoc::from_json(&text).map_err(annotate)?))
    }
}

fn choose_field(flag: &Option<String>, doc: Option<&str>) -> Result<FieldChoice, Failure> {
    match (flag, doc) {
        (Some(f), _) => Ok(f.parse()?),
        (None, Some(d)) => Ok(d.parse()?),
        (None, None) => Ok(FieldChoice::Rationals),
    }
}

fn execute(cmd: &Command, out: &mut String) -> Result<bool, Failure> {
    let (Command::Matroid(args) | Command::Tcomplex(args) | Command::Resolve(args) | Command::Verify(args)) = cmd;
    let loaded = load(&args.input)?;
    let doc_field = match &loaded {
        Loaded::Input(d) => d.field.clone(),
        Loaded::Complex(d) => Some(d.field.clone()),
    };
    match choose_field(&args.field, doc_field.as_deref())? {
        FieldChoice::Rationals => dispatch(&Rationals, cmd, args, loaded, out),
        FieldChoice::Prime(p) => dispatch(&PrimeField::new(p)?, cmd, args, loaded, out),
    }
}

fn dispatch<F: Field>(field: &F, cmd: &Command, args: &JobArgs, loaded: Loaded, out: &mut String) -> Result<bool, Failure> {
    match (cmd, loaded) {
        (Command::Verify(_), Loaded::Complex(doc)) => verify_document(field, args, &doc, out),
        (_, Loaded::Complex(_)) => Err(Failure::Input(
            "an emitted complex can only be passed to `verify`".to_string(),
        )),
        (Command::Matroid(_), Loaded::Input(doc)) => matroid_cmd(field, args, &doc, out),
        (Command::Tcomplex(_), Loaded::Input(doc)) => tcomplex_cmd(field, args, &doc, out),
        (Command::Resolve(_), Loaded::Input(doc)) => resolve_cmd(field, args, &doc, out),
        (Command::Verify(_), Loaded::Input(doc)) => verify_input(field, args, &doc, out),
    }
}

fn representation<F: Field>(field: &F, args: &JobArgs, doc: &InputDoc) -> Result<(Representation<F>, Option<multigraded::MultigradedPresentation<F>>), Failure> {
    let parsed = doc.parse(field)?;
    let rep = Representation::with_max_ground_set(parsed.labels, parsed.matrix, args.max_ground_set)?;
    Ok((rep, parsed.presentation))
}

fn emit_json<T: Serialize>(value: &T, out: &mut String) {
    out.push_str(&serde_json::to_string_pretty(value).expect("serializable"));
    out.push('\n');
}

fn emit_report(report: &Report, out: &mut String) {
    out.push_str("checks:\n");
    for line in report.render().lines() {
        let _ = writeln!(out, "  {line}");
    }
}

fn label_sets<F: Field>(rep: &Representation<F>, sets: &[crate::matroid::ElementSet]) -> Vec<Vec<String>> {
    sets.iter().map(|s| rep.set_labels(*s)).collect()
}

fn multiplicity_docs<F: Field>(rep: &Representation<F>, mult: &Multiplicities<F>, chains: bool) -> Result<Vec<MultiplicityDoc>, Failure> {
    let f = rep.field();
    let mut docs = Vec::new();
    for rec in rep.t_flats().iter() {
        let space = if chains {
            multiplicity_space_with_chains(rep, mult, rec.set)?
        } else {
            mult.multiplicity_space(rec.set)
        };
        let basis = (0..space.dim())
            .map(|i| space.ambient.render(f, &space.basis.basis_vector(i)))
            .collect();
        let chains = space.generators.as_ref().map(|gens| {
            gens.iter()
                .map(|(c, v)| ChainDoc {
                    flats: label_sets(rep, &c.flats),
                    vector: space.ambient.render(f, v),
                })
                .collect()
        });
        docs.push(MultiplicityDoc {
            tflat: rep.set_labels(rec.set),
            level: rec.level,
            dim: space.dim(),
            basis,
            chains,
        });
    }
    Ok(docs)
}

#[derive(Serialize)]
struct TFlatDoc {
    set: Vec<String>,
    level: usize,
    rank: usize,
    t_parts: Vec<Vec<String>>,
}

#[derive(Serialize)]
struct MatroidDoc {
    field: String,
    labels: Vec<String>,
    rank: usize,
    circuits: Vec<Vec<String>>,
    connected_components: Vec<Vec<String>>,
    t_flats: Vec<TFlatDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    multiplicity_spaces: Option<Vec<MultiplicityDoc>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    checks: Option<Vec<Check>>,
}

fn render_sets<F: Field>(rep: &Representation<F>, sets: &[crate::matroid::ElementSet]) -> String {
    sets.iter().map(|s| rep.render_set(*s)).collect::<Vec<_>>().join(" ")
}

fn matroid_cmd<F: Field>(field: &F, args: &JobArgs, doc: &InputDoc, out: &mut String) -> Result<bool, Failure> {
    let (rep, _) = representation(field, args, doc)?;
    let needs_mult = args.verify || args.dump_chains;
    let mult = needs_mult.then(|| Multiplicities::new(&rep));
    let report = match (&mult, args.verify) {
        (Some(m), true) => Some(representation_checks(&rep, m)),
        _ => None,
    };
    let spaces = match (&mult, args.dump_chains) {
        (Some(m), true) => Some(multiplicity_docs(&rep, m, true)?),
        _ => None,
    };
    let components = rep.connected_components(rep.ground_set());
    if args.json {
        let d = MatroidDoc {
            field: field.name(),
            labels: rep.labels().to_vec(),
            rank: rep.rank(rep.ground_set()),
            circuits: label_sets(&rep, rep.circuits()),
            connected_components: label_sets(&rep, &components),
            t_flats: rep
                .t_flats()
                .iter()
                .map(|r| TFlatDoc {
                    set: rep.set_labels(r.set),
                    level: r.level,
                    rank: r.rank,
                    t_parts: label_sets(&rep, &r.t_parts),
                })
                .collect(),
            multiplicity_spaces: spaces,
            checks: report.as_ref().map(|r| r.checks.clone()),
        };
        emit_json(&d, out);
    } else {
        let _ = writeln!(out, "field: {}", field.name());
        let _ = writeln!(out, "ground set: {}", rep.labels().join(" "));
        let _ = writeln!(out, "rank: {}", rep.rank(rep.ground_set()));
        let _ = writeln!(out, "circuits: {}", render_sets(&rep, rep.circuits()));
        let _ = writeln!(out, "connected components: {}", render_sets(&rep, &components));
        out.push_str("T-flats:\n");
        let _ = writeln!(out, "  {:<5} {:<4} {:<24} T-partition", "level", "rank", "set");
        for r in rep.t_flats().iter() {
            let _ = writeln!(
                out,
                "  {:<5} {:<4} {:<24} {}",
                r.level,
                r.rank,
                rep.render_set(r.set),
                render_sets(&rep, &r.t_parts)
            );
        }
        if let Some(spaces) = &spaces {
            write_spaces(spaces, out);
        }
        if let Some(r) = &report {
            emit_report(r, out);
        }
    }
    Ok(report.is_none_or(|r| r.passed()))
}

fn write_spaces(spaces: &[MultiplicityDoc], out: &mut String) {
    out.push_str("multiplicity spaces:\n");
    for s in spaces {
        let _ = writeln!(
            out,
            "  {{{}}} level {} dim {}: {}",
            s.tflat.join(","),
            s.level,
            s.dim,
            if s.basis.is_empty() { "0".to_string() } else { s.basis.join("; ") }
        );
        for c in s.chains.iter().flatten() {
            let chain: Vec<String> = c.flats.iter().map(|f| format!("{{{}}}", f.join(","))).collect();
            let _ = writeln!(out, "    chain {} -> {}", chain.join(" > "), c.vector);
        }
    }
}

fn render_label(label: &BasisLabel, labels: &[String]) -> String {
    match label.block {
        Block::Ambient => format!("W[{}]", label.index),
        Block::Element(a) => format!("e_{}", labels[a]),
        Block::TFlat(set) => {
            let names: Vec<&str> = set.iter().map(|i| labels[i].as_str()).collect();
            format!("T_{{{}}}[{}]", names.join(","), label.index)
        }
    }
}

fn write_table(rows: &[Vec<String>], out: &mut String) {
    let cols = rows.first().map_or(0, |r| r.len());
    let widths: Vec<usize> = (0..cols)
        .map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0))
        .collect();
    for r in rows {
        let cells: Vec<String> = r
            .iter()
            .zip(&widths)
            .map(|(c, w)| format!("{c:>w$}"))
            .collect();
        let _ = writeln!(out, "    [ {} ]", cells.join("  "));
    }
}

fn write_vector_space_complex<F: Field>(c: &VectorSpaceComplex<F>, labels: &[String], out: &mut String) {
    let f = c.field();
    let dims = c.dims();
    let top_down: Vec<String> = dims.iter().rev().map(|d| d.to_string()).collect();
    let _ = writeln!(out, "dims by homological degree 0..{}: {:?}", dims.len().saturating_sub(1), dims);
    let _ = writeln!(out, "dims from the top: {}", top_down.join(","));
    for k in 0..c.len() {
        let names: Vec<String> = c.labels(k).iter().map(|l| render_label(l, labels)).collect();
        let _ = writeln!(out, "C_{k}: {}", names.join(" "));
    }
    for k in 1..c.len() {
        let d = c.differential(k).expect("in range");
        let _ = writeln!(out, "d_{k}: C_{k} -> C_{} ({}x{})", k - 1, d.rows(), d.cols());
        let rows: Vec<Vec<String>> = (0..d.rows())
            .map(|i| (0..d.cols()).map(|j| f.render(d.get(i, j))).collect())
            .collect();
        write_table(&rows, out);
    }
}

fn tcomplex_cmd<F: Field>(field: &F, args: &JobArgs, doc: &InputDoc, out: &mut String) -> Result<bool, Failure> {
    let (rep, _) = representation(field, args, doc)?;
    let mult = Multiplicities::new(&rep);
    let tp = build_t_plus_with(&rep, &mult);
    let spaces = multiplicity_docs(&rep, &mult, args.dump_chains)?;
    let report = args.verify.then(|| representation_checks(&rep, &mult));
    if args.json {
        let mut d = vector_space_complex_doc(&tp, rep.labels(), "augmented_t_complex");
        d.multiplicity_spaces = Some(spaces);
        d.structural_checks = Some(tcomplex::structural_checks(&tp).checks);
        d.checks = report.as_ref().map(|r| r.checks.clone());
        emit_json(&d, out);
    } else {
        let _ = writeln!(out, "field: {}", field.name());
        let _ = writeln!(out, "ground set: {}", rep.labels().join(" "));
        let _ = writeln!(out, "rank: {}, lambda: {}", rep.rank(rep.ground_set()), lambda(&rep));
        write_spaces(&spaces, out);
        out.push_str("augmented T-complex:\n");
        write_vector_space_complex(&tp, rep.labels(), out);
        if let Some(r) = &report {
            emit_report(r, out);
        }
    }
    Ok(report.is_none_or(|r| r.passed()))
}

fn write_free_complex<F: Field>(c: &FreeComplex<F>, labels: &[String], out: &mut String) {
    let f = &c.field;
    let _ = writeln!(out, "ranks: {:?}", c.ranks());
    let _ = writeln!(out, "length: {}", c.length());
    for (k, gens) in c.components.iter().enumerate() {
        let names: Vec<String> = gens
            .iter()
            .map(|g| format!("{}{:?}", render_label(&g.label, labels), g.degree))
            .collect();
        let _ = writeln!(out, "F_{k}: {}", names.join(" "));
    }
    for (k0, d) in c.differentials.iter().enumerate() {
        let k = k0 + 1;
        let _ = writeln!(out, "Phi_{k}: F_{k} -> F_{} ({}x{})", k - 1, d.rows(), d.cols());
        let rows: Vec<Vec<String>> = (0..d.rows())
            .map(|i| {
                (0..d.cols())
                    .map(|j| {
                        let p = d.get(i, j);
                        if p.is_zero() {
                            "0".to_string()
                        } else {
                            p.render(f, &c.vars)
                        }
                    })
                    .collect()
            })
            .collect();
        write_table(&rows, out);
    }
}

fn resolve_cmd<F: Field>(field: &F, args: &JobArgs, doc: &InputDoc, out: &mut String) -> Result<bool, Failure> {
    let (rep, p) = representation(field, args, doc)?;
    let p = p.ok_or_else(|| {
        Failure::Input("`resolve` needs \"source_degrees\" and \"target_degrees\" or a \"poly_matrix\"".to_string())
    })?;
    let mult = Multiplicities::new(&rep);
    let c = build_resolution_with(&p, &rep, &mult);
    let verified = args.verify.then(|| verify_resolution(&p, &rep, &mult, &c));
    if args.json {
        let mut d = free_complex_doc(&c, rep.labels());
        d.structural_checks = Some(multigraded::structural_checks(&c).checks);
        d.checks = verified.as_ref().map(|(r, _)| r.checks.clone());
        emit_json(&d, out);
    } else {
        let _ = writeln!(out, "field: {}", field.name());
        let _ = writeln!(out, "ring: {}", p.vars.join(" "));
        out.push_str("T-resolution:\n");
        write_free_complex(&c, rep.labels(), out);
        if let Some((r, s)) = &verified {
            let _ = writeln!(
                out,
                "strands checked: {}, length {} <= bound {}",
                s.strands_checked, s.length, s.pd_bound
            );
            emit_report(r, out);
        }
    }
    Ok(verified.is_none_or(|(r, _)| r.passed()))
}

#[derive(Serialize)]
struct VerifyDoc {
    field: String,
    kind: String,
    checks: Vec<Check>,
}

fn verify_input<F: Field>(field: &F, args: &JobArgs, doc: &InputDoc, out: &mut String) -> Result<bool, Failure> {
    let (rep, p) = representation(field, args, doc)?;
    let mult = Multiplicities::new(&rep);
    let mut report = representation_checks(&rep, &mult);
    let kind = if let Some(p) = &p {
        let c = build_resolution_with(p, &rep, &mult);
        report.extend(verify_resolution(p, &rep, &mult, &c).0);
        "presentation"
    } else {
        "representation"
    };
    finish_verify(field, args, kind, report, None, out)
}

fn verify_document<F: Field>(field: &F, args: &JobArgs, doc: &ComplexDoc, out: &mut String) -> Result<bool, Failure> {
    let report = if doc.is_resolution() {
        multigraded::structural_checks(&free_complex_from_doc(field, doc)?)
    } else {
        tcomplex::structural_checks(&vector_space_complex_from_doc(field, doc)?)
    };
    finish_verify(field, args, &doc.kind, report, doc.structural_checks.as_deref(), out)
}

fn finish_verify<F: Field>(
    field: &F,
    args: &JobArgs,
    kind: &str,
    report: Report,
    recorded: Option<&[Check]>,
    out: &mut String,
) -> Result<bool, Failure> {
    let agrees = recorded.is_none_or(|r| r == report.checks.as_slice());
    if args.json {
        emit_json(
            &VerifyDoc {
                field: field.name(),
                kind: kind.to_string(),
                checks: report.checks.clone(),
            },
            out,
        );
    } else {
        let _ = writeln!(out, "field: {}", field.name());
        let _ = writeln!(out, "kind: {kind}");
        emit_report(&report, out);
        if !agrees {
            out.push_str("recorded structural checks differ from the recomputed ones\n");
        }
    }
    Ok(report.passed() && agrees)
}

/// Matrix of a representation as input text, for emitting example documents.
pub fn input_doc_for<F: Field>(field: &F, labels: &[String], m: &Matrix<F>) -> InputDoc {
    InputDoc {
        field: Some(field.name()),
        labels: Some(labels.to_vec()),
        matrix: Some(
            (0..m.rows())
                .map(|i| {
                    (0..m.cols())
                        .map(|j| crate::io::ScalarText::Text(field.render(m.get(i, j))))
                        .collect()
                })
                .collect(),
        ),
        ..InputDoc::default()
    }
}
