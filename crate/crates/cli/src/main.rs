//! `bframes`: validators, verdicts and diagrams for finite event algebras.
//!
//! Exit status is 0 when the checked property holds, 1 when it fails, and
//! 2 on unreadable input or an exceeded bound.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use boolean_frames::boolean_algebra::validate_boolean_hom;
use boolean_frames::dot::{counit_dot, elements_dot, hasse_dot};
use boolean_frames::localization::{counit, single_frame_obstruction, validate_system, PrelocSystem};
use boolean_frames::observables::{act_borel_function, validate_observable, Observable};
use boolean_frames::presheaf::{
    category_of_elements, tensor_product, validate_category, validate_model, validate_presheaf, CoordinatizationModel,
    SetPresheaf,
};
use boolean_frames::quantum_logic::{maximal_boolean_subalgebras, validate_event_algebra, validate_quantum_hom};
use boolean_frames::schema::{
    BooleanAlgebraDoc, BooleanHomDoc, CategoryDoc, DocumentKind, Loader, ModelDoc, ObservableDoc, OmpDoc, PartitionDoc,
    PresheafDoc,
};
use boolean_frames::{Error, Report};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "bframes", version, about = "Check finite quantum event algebras and their Boolean charts")]
struct Cli {
    /// Output style.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long, short, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Check the laws of any document: algebra, hom, observable, model, presheaf or system.
    Validate { file: PathBuf },
    /// List the maximal Boolean subalgebras of an event algebra.
    Blocks { file: PathBuf },
    /// Check an observable; optionally act on it by a cell function.
    Observable {
        file: PathBuf,
        /// Cell function document `f`; reports `Ξ∙f`.
        #[arg(long)]
        apply: Option<PathBuf>,
    },
    /// Class table of `X ⊗ A` for a system or a presheaf over a model.
    Tensor { file: PathBuf },
    /// The counit `S ⊗ A → L` of a system, with class table and flags.
    Counit { file: PathBuf },
    /// Whether a system is a localization.
    Verdict { file: PathBuf },
    /// Whether no single Boolean chart covers an event algebra.
    Ks {
        file: PathBuf,
        /// Model document; defaults to the powerset model up to `--model-atoms`.
        #[arg(long)]
        model: Option<PathBuf>,
        #[arg(long, default_value_t = 3)]
        model_atoms: usize,
    },
    /// Graphviz output: Hasse diagram, category of elements, or counit.
    Dot {
        file: PathBuf,
        #[arg(long, value_enum)]
        graph: Option<Graph>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Graph {
    Hasse,
    Elements,
    Counit,
}

/// A rendered report and whether the checked property holds.
struct Outcome {
    holds: bool,
    text: String,
    structured: Value,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(outcome) => {
            let mut body = match cli.format {
                Format::Text => outcome.text,
                Format::Structured => serde_json::to_string_pretty(&outcome.structured).expect("serializable"),
            };
            if !body.ends_with('\n') {
                body.push('\n');
            }
            let written = match &cli.output {
                Some(path) => std::fs::write(path, body).map_err(|e| format!("cannot write {}: {e}", path.display())),
                None => {
                    print!("{body}");
                    Ok(())
                }
            };
            match written {
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
                Ok(()) if outcome.holds => ExitCode::SUCCESS,
                Ok(()) => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(command: &Command) -> Result<Outcome, Error> {
    match command {
        Command::Validate { file } => validate(file),
        Command::Blocks { file } => blocks(file),
        Command::Observable { file, apply } => observable(file, apply.as_deref()),
        Command::Tensor { file } => tensor(file),
        Command::Counit { file } => counit_cmd(file, true),
        Command::Verdict { file } => counit_cmd(file, false),
        Command::Ks {
            file,
            model,
            model_atoms,
        } => ks(file, model.as_deref(), *model_atoms),
        Command::Dot { file, graph } => dot(file, *graph),
    }
}

fn open(file: &Path) -> Result<(Loader, Value, DocumentKind), Error> {
    let (loader, value) = Loader::open(file)?;
    let kind = DocumentKind::detect(&value)
        .ok_or_else(|| Error::Parse(format!("{}: unrecognised document", file.display())))?;
    Ok((loader, value, kind))
}

fn report_outcome<L: std::fmt::Display>(what: &str, report: &Report<L>, document: Option<Value>) -> Outcome {
    let mut text = format!("{what}: {}\n", if report.is_ok() { "valid" } else { "invalid" });
    for v in &report.violations {
        writeln!(text, "  {}: {}", v.law, v.witness).unwrap();
    }
    let violations: Vec<Value> = report
        .violations
        .iter()
        .map(|v| json!({"law": v.law.to_string(), "witness": v.witness}))
        .collect();
    let mut structured = json!({"kind": what, "ok": report.is_ok(), "violations": violations});
    if let Some(doc) = document {
        structured["document"] = doc;
    }
    Outcome {
        holds: report.is_ok(),
        text,
        structured,
    }
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("serializable")
}

fn validate(file: &Path) -> Result<Outcome, Error> {
    let (loader, v, kind) = open(file)?;
    Ok(match kind {
        DocumentKind::EventAlgebra => {
            let l = loader.event_algebra(&v)?;
            report_outcome("event algebra", &validate_event_algebra(&l), Some(to_value(&OmpDoc::of(&l))))
        }
        DocumentKind::BooleanAlgebra => {
            let doc: BooleanAlgebraDoc = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
            let a = doc.build()?;
            report_outcome::<String>("Boolean algebra", &Report::new(), Some(to_value(&BooleanAlgebraDoc::of(&a))))
        }
        DocumentKind::BooleanHom => {
            let h = loader.boolean_hom(&v)?;
            report_outcome("Boolean hom", &validate_boolean_hom(&h), Some(to_value(&BooleanHomDoc::of(&h))))
        }
        DocumentKind::QuantumHom => {
            let h = loader.quantum_hom(&v)?;
            report_outcome("quantum hom", &validate_quantum_hom(&h), None)
        }
        DocumentKind::Partition => {
            let doc: PartitionDoc = serde_json::from_value(v).map_err(|e| Error::Parse(e.to_string()))?;
            let p = doc.build()?;
            report_outcome::<String>("partition", &Report::new(), Some(to_value(&PartitionDoc::of(&p))))
        }
        DocumentKind::Observable => {
            let xi = loader.observable(&v)?;
            report_outcome("observable", &validate_observable(&xi), Some(to_value(&ObservableDoc::of(&xi))))
        }
        DocumentKind::CellFunction => {
            loader.cell_function(&v)?;
            report_outcome::<String>("cell function", &Report::new(), None)
        }
        DocumentKind::Model => {
            let m = loader.model(&v)?;
            report_outcome("model", &validate_model(&m), Some(to_value(&ModelDoc::of(&m))))
        }
        DocumentKind::Category => {
            let c = loader.category(&v)?;
            report_outcome("category", &validate_category(&c), Some(to_value(&CategoryDoc::of(&c))))
        }
        DocumentKind::Presheaf => {
            let (x, _) = loader.presheaf(&v)?;
            report_outcome("presheaf", &validate_presheaf(&x), Some(to_value(&PresheafDoc::of(&x))))
        }
        DocumentKind::System => {
            let s = loader.system(&v)?;
            report_outcome("system", &validate_system(&s), None)
        }
    })
}

fn require_kind(file: &Path, kind: DocumentKind, wanted: &[DocumentKind]) -> Result<(), Error> {
    if wanted.contains(&kind) {
        Ok(())
    } else {
        Err(Error::Parse(format!("{}: expected {wanted:?}, found {kind:?}", file.display())))
    }
}

fn blocks(file: &Path) -> Result<Outcome, Error> {
    let (loader, v, kind) = open(file)?;
    require_kind(file, kind, &[DocumentKind::EventAlgebra])?;
    let l = loader.event_algebra(&v)?;
    let report = validate_event_algebra(&l);
    if !report.is_ok() {
        return Ok(report_outcome("event algebra", &report, None));
    }
    let blocks = maximal_boolean_subalgebras(&l)?;
    let labelled: Vec<Vec<&str>> = blocks.iter().map(|b| b.iter().map(|&e| l.label(e)).collect()).collect();
    let mut text = format!("blocks: {}\n", labelled.len());
    for b in &labelled {
        writeln!(text, "  {{{}}}", b.join(", ")).unwrap();
    }
    Ok(Outcome {
        holds: true,
        text,
        structured: json!({"blocks": labelled}),
    })
}

fn observable_table(xi: &Observable) -> (String, Value) {
    let d = xi.domain();
    let mut text = String::new();
    let mut rows = Vec::new();
    for c in 0..d.cell_count() {
        let label = xi.value_label(1 << c);
        writeln!(text, "  Ξ({}) = {label}", d.cell_label(c)).unwrap();
        rows.push(json!({"cell": d.cell_label(c), "value": label}));
    }
    let all = xi.value_label(d.algebra().top());
    writeln!(text, "  Ξ(ℝ) = {all}").unwrap();
    (text, json!({"cells": rows, "whole_line": all}))
}

fn observable(file: &Path, apply: Option<&Path>) -> Result<Outcome, Error> {
    let (loader, v, kind) = open(file)?;
    require_kind(file, kind, &[DocumentKind::Observable])?;
    let xi = loader.observable(&v)?;
    let report = validate_observable(&xi);
    let mut outcome = report_outcome("observable", &report, None);
    let (table, values) = observable_table(&xi);
    outcome.text.push_str(&table);
    outcome.structured["values"] = values;
    if let Some(f_path) = apply {
        let (f_loader, f_value, f_kind) = open(f_path)?;
        require_kind(f_path, f_kind, &[DocumentKind::CellFunction])?;
        let f = f_loader.cell_function(&f_value)?;
        let acted = act_borel_function(&xi, &f)?;
        let acted_report = validate_observable(&acted);
        outcome.holds &= acted_report.is_ok();
        writeln!(outcome.text, "Ξ∙f: {}", if acted_report.is_ok() { "valid" } else { "invalid" }).unwrap();
        for v in &acted_report.violations {
            writeln!(outcome.text, "  {}: {}", v.law, v.witness).unwrap();
        }
        let (table, values) = observable_table(&acted);
        outcome.text.push_str(&table);
        outcome.structured["acted"] = json!({
            "ok": acted_report.is_ok(),
            "document": to_value(&ObservableDoc::of(&acted)),
            "values": values,
        });
    }
    Ok(outcome)
}

/// A system, or a presheaf together with its model.
fn presheaf_and_model(file: &Path) -> Result<(SetPresheaf, Arc<CoordinatizationModel>, Option<PrelocSystem>), Error> {
    let (loader, v, kind) = open(file)?;
    require_kind(file, kind, &[DocumentKind::System, DocumentKind::Presheaf])?;
    if kind == DocumentKind::System {
        let s = loader.system(&v)?;
        return Ok((s.as_presheaf()?, s.model().clone(), Some(s)));
    }
    let (x, model) = loader.presheaf(&v)?;
    let model = model.ok_or_else(|| Error::Parse("the tensor product needs a presheaf over a `model`".into()))?;
    Ok((x, Arc::new(model), None))
}

fn tensor(file: &Path) -> Result<Outcome, Error> {
    let (x, model, _) = presheaf_and_model(file)?;
    let q = tensor_product(&x, &model)?;
    let mut text = format!("classes: {}\n", q.class_count());
    let mut rows = Vec::new();
    for (c, members) in q.classes().iter().enumerate() {
        let labels: Vec<String> = members.iter().map(|&p| q.pair_label(&x, &model, p)).collect();
        writeln!(text, "  {c}: {}", labels.join(" = ")).unwrap();
        rows.push(json!({"class": c, "members": labels}));
    }
    Ok(Outcome {
        holds: true,
        text,
        structured: json!({"pairs": q.pairs().len(), "classes": rows}),
    })
}

fn load_system(file: &Path) -> Result<PrelocSystem, Error> {
    let (loader, v, kind) = open(file)?;
    require_kind(file, kind, &[DocumentKind::System])?;
    loader.system(&v)
}

fn counit_cmd(file: &Path, full: bool) -> Result<Outcome, Error> {
    let s = load_system(file)?;
    let r = counit(&s)?;
    let text = if full {
        r.to_string()
    } else {
        let mut t = format!("is_localization: {}\n", r.is_localization);
        for (flag, value) in [
            ("covering", r.covering),
            ("injective", r.injective),
            ("preserves_top", r.preserves_top),
            ("preserves_ortho", r.preserves_ortho),
            ("preserves_order", r.preserves_order),
        ] {
            writeln!(t, "  {flag}: {value}").unwrap();
        }
        for w in &r.witnesses {
            writeln!(t, "{w}").unwrap();
        }
        t
    };
    Ok(Outcome {
        holds: r.is_localization,
        text,
        structured: to_value(&r),
    })
}

fn ks(file: &Path, model: Option<&Path>, model_atoms: usize) -> Result<Outcome, Error> {
    let (loader, v, kind) = open(file)?;
    require_kind(file, kind, &[DocumentKind::EventAlgebra])?;
    let l = Arc::new(loader.event_algebra(&v)?);
    let model = match model {
        Some(path) => {
            let (m_loader, m_value, m_kind) = open(path)?;
            require_kind(path, m_kind, &[DocumentKind::Model])?;
            m_loader.model(&m_value)?
        }
        None => CoordinatizationModel::powerset_model(model_atoms)?,
    };
    let r = single_frame_obstruction(&l, &model)?;
    Ok(Outcome {
        holds: r.obstructed,
        text: r.to_string(),
        structured: to_value(&r),
    })
}

fn dot(file: &Path, graph: Option<Graph>) -> Result<Outcome, Error> {
    let (loader, v, kind) = open(file)?;
    let graph = graph.unwrap_or(match kind {
        DocumentKind::EventAlgebra => Graph::Hasse,
        _ => Graph::Elements,
    });
    let text = match (graph, kind) {
        (Graph::Hasse, DocumentKind::EventAlgebra) => hasse_dot(&loader.event_algebra(&v)?),
        (Graph::Hasse, DocumentKind::System) => hasse_dot(loader.system(&v)?.target()),
        (Graph::Elements, DocumentKind::System) => elements_dot(&category_of_elements(&loader.system(&v)?.as_presheaf()?)),
        (Graph::Elements, DocumentKind::Presheaf) => elements_dot(&category_of_elements(&loader.presheaf(&v)?.0)),
        (Graph::Counit, DocumentKind::System) => {
            let s = loader.system(&v)?;
            counit_dot(&counit(&s)?, s.target())
        }
        _ => return Err(Error::Parse(format!("{}: this graph needs a different document kind", file.display()))),
    };
    Ok(Outcome {
        holds: true,
        structured: json!({"dot": text}),
        text,
    })
}
