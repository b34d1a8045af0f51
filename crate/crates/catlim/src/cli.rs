//! Command-line surface: document loading, engine operations, law suites,
//! decomposition trees and reports.
//!
//! Every command is deterministic given its inputs, flags and seed. The
//! structured (JSON) output is the machine contract; the text output is
//! derived from the same data. Exit codes: 0 success/holds, 1 verification
//! or law failure, 2 input/parse error, 3 capacity or budget exhaustion.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::caps::Caps;
use crate::concept::{
    deconcept, diagram_analogy, learn_concept, supervised_repair, verify_with_tasks,
    verify_with_verifier, BruteForceVerifier, DecompKind, DecompNode, LearnConfig, LearnOutcome,
    TableExtractor, TaskVerification, VerifierVerification, DEFAULT_MAX_DEPTH,
};
use crate::doc::{
    CategoryDoc, DiagramDoc, ExpressionDoc, InstanceDoc, KbDoc, LawManifestDoc, LimitResultDoc,
    PresheafDoc,
};
use crate::error::Error;
use crate::laws::{suites, LawReport, Verdict};

#[derive(Parser)]
#[command(name = "catlim", version, about = "finite category theory engine", disable_help_subcommand = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every randomized search or sampler.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Output format; text is derived from the structured form.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum VerifyMode {
    Tasks,
    Verifier,
}

#[derive(Subcommand)]
enum Command {
    /// Validate category or presheaf documents.
    Validate { paths: Vec<PathBuf> },
    /// Compute the projective limit of a diagram document.
    Limit { diagram: PathBuf },
    /// Compute the inductive limit of a diagram document.
    Colimit { diagram: PathBuf },
    /// Run a law-suite manifest.
    Laws { manifest: PathBuf },
    /// Decompose a concept into its tree.
    Deconcept {
        kb: PathBuf,
        concept: String,
        /// Emit the tree as DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Verify a concept by sampled tasks or by the brute-force verifier.
    Verify {
        kb: PathBuf,
        concept: String,
        #[arg(long, value_enum, default_value_t = VerifyMode::Verifier)]
        mode: VerifyMode,
        /// Number of sampled tasks (task mode).
        #[arg(long, default_value_t = 50)]
        m: usize,
        /// Loss threshold (task mode).
        #[arg(long, default_value_t = 0.5)]
        eps: f64,
    },
    /// Search the expression space for a concept, or install a supervised
    /// expression after verification.
    Learn {
        kb: PathBuf,
        concept: String,
        /// Maximum diagram nodes in a candidate expression.
        #[arg(long, default_value_t = 4)]
        k: usize,
        /// Number of sampled tasks each candidate must pass.
        #[arg(long, default_value_t = 20)]
        m: usize,
        /// Path to an expression document to install after verification.
        #[arg(long)]
        supervised: Option<PathBuf>,
    },
    /// Score the structural analogy between two concepts' expressions.
    Analogy {
        kb: PathBuf,
        concept1: String,
        concept2: String,
    },
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse(_) | Error::Structural(_) => 2,
        Error::Invalid(_) => 1,
        Error::Capacity(_) | Error::BudgetExhausted(_) => 3,
    }
}

fn caps_from_env() -> Caps {
    match std::env::var("CATLIM_MAX_BUDGET").ok().and_then(|v| v.parse().ok()) {
        Some(budget) => Caps::with_budget(budget),
        None => Caps::default(),
    }
}

/// Runs the command line against the given argument list, writing all
/// output to `out`; returns the process exit code.
pub fn run<I, S>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(out, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let caps = caps_from_env();
    let result = match &cli.command {
        Command::Validate { paths } => cmd_validate(paths, cli.format, out),
        Command::Limit { diagram } => cmd_limit(diagram, true, cli.format, &caps, out),
        Command::Colimit { diagram } => cmd_limit(diagram, false, cli.format, &caps, out),
        Command::Laws { manifest } => cmd_laws(manifest, cli.seed, cli.format, &caps, out),
        Command::Deconcept { kb, concept, dot } => {
            cmd_deconcept(kb, concept, *dot, cli.format, out)
        }
        Command::Verify { kb, concept, mode, m, eps } => {
            cmd_verify(kb, concept, *mode, *m, *eps, cli.seed, cli.format, &caps, out)
        }
        Command::Learn { kb, concept, k, m, supervised } => {
            cmd_learn(kb, concept, *k, *m, supervised.as_deref(), cli.seed, cli.format, &caps, out)
        }
        Command::Analogy { kb, concept1, concept2 } => {
            cmd_analogy(kb, concept1, concept2, cli.format, out)
        }
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(out, "error: {e}");
            exit_code(&e)
        }
    }
}

fn emit(out: &mut dyn Write, format: Format, structured: &Value, text: &str) {
    match format {
        Format::Structured => {
            let _ = writeln!(out, "{}", serde_json::to_string_pretty(structured).expect("json"));
        }
        Format::Text => {
            let _ = write!(out, "{text}");
        }
    }
}

fn cmd_validate(paths: &[PathBuf], format: Format, out: &mut dyn Write) -> crate::Result<i32> {
    let mut entries = Vec::new();
    let mut text = String::new();
    let mut worst = 0i32;
    for path in paths {
        let raw: Value = crate::doc::read_json(path)?;
        let (kind, violations): (&str, Vec<String>) = if raw.get("objects").is_some() {
            let doc: CategoryDoc = serde_json::from_value(raw)
                .map_err(|e| Error::parse(format!("{}: {e}", path.display())))?;
            let cat = doc.to_category()?;
            ("category", cat.validate().iter().map(|v| v.to_string()).collect())
        } else if raw.get("base").is_some() {
            let doc: PresheafDoc = serde_json::from_value(raw)
                .map_err(|e| Error::parse(format!("{}: {e}", path.display())))?;
            match doc.to_presheaf() {
                Ok(_) => ("presheaf", Vec::new()),
                Err(Error::Invalid(msg)) => ("presheaf", vec![msg]),
                Err(other) => return Err(other),
            }
        } else {
            return Err(Error::parse(format!(
                "{}: neither a category nor a presheaf document",
                path.display()
            )));
        };
        if violations.is_empty() {
            text.push_str(&format!("{}: {kind} ok\n", path.display()));
        } else {
            worst = worst.max(1);
            text.push_str(&format!(
                "{}: {kind} breaks {} law(s)\n",
                path.display(),
                violations.len()
            ));
            for v in &violations {
                text.push_str(&format!("  - {v}\n"));
            }
        }
        entries.push(json!({
            "path": path.display().to_string(),
            "kind": kind,
            "violations": violations,
        }));
    }
    emit(out, format, &json!({ "command": "validate", "files": entries }), &text);
    Ok(worst)
}

fn cmd_limit(
    path: &Path,
    projective: bool,
    format: Format,
    caps: &Caps,
    out: &mut dyn Write,
) -> crate::Result<i32> {
    let doc: DiagramDoc = crate::doc::read_json(path)?;
    let diagram = doc.to_diagram()?;
    let result = if projective {
        crate::finset::lim_matching_families_with_caps(&diagram, caps)?
    } else {
        crate::finset::colim(&diagram)?
    };
    let result_doc = LimitResultDoc::from_result(&result);
    let mut text = format!(
        "{} apex ({} elements): {}\n",
        result_doc.kind,
        result.apex.len(),
        result
            .apex
            .elements()
            .iter()
            .map(|e| e.0.clone())
            .collect::<Vec<_>>()
            .join(" ")
    );
    for (obj, leg) in &result.legs {
        text.push_str(&format!("leg {obj}:"));
        for (a, b) in leg.table() {
            text.push_str(&format!(" {a}->{b}"));
        }
        text.push('\n');
    }
    emit(
        out,
        format,
        &serde_json::to_value(&result_doc).expect("document serializes"),
        &text,
    );
    Ok(0)
}

fn report_to_value(r: &LawReport) -> Value {
    serde_json::to_value(r).expect("reports serialize")
}

fn cmd_laws(
    path: &Path,
    seed: u64,
    format: Format,
    caps: &Caps,
    out: &mut dyn Write,
) -> crate::Result<i32> {
    let manifest: LawManifestDoc = crate::doc::read_json(path)?;
    let mut reports: Vec<LawReport> = Vec::new();
    for entry in &manifest.entries {
        match &entry.instance {
            InstanceDoc::Generated { seed: entry_seed, size } => {
                let effective_seed = entry_seed.wrapping_add(seed);
                reports.extend(suites::run_generated(&entry.law, effective_seed, *size, caps)?);
            }
            InstanceDoc::Inline(value) => {
                reports.extend(run_inline_law(&entry.law, value, caps)?);
            }
        }
    }
    let mut text = String::new();
    let mut any_fail = false;
    for r in &reports {
        let tag = match r.verdict {
            Verdict::Holds => "holds",
            Verdict::Fails => {
                any_fail = true;
                "FAILS"
            }
            Verdict::NotApplicable => "n/a",
        };
        text.push_str(&format!("[{tag}] {}: {}\n", r.law, r.instance));
    }
    text.push_str(&format!("{} report(s)\n", reports.len()));
    let structured = json!({
        "command": "laws",
        "reports": reports.iter().map(report_to_value).collect::<Vec<_>>(),
    });
    emit(out, format, &structured, &text);
    Ok(if any_fail { 1 } else { 0 })
}

fn run_inline_law(law: &str, value: &Value, caps: &Caps) -> crate::Result<Vec<LawReport>> {
    match law {
        "yoneda" => {
            let doc: CategoryDoc = serde_json::from_value(value.clone())
                .map_err(|e| Error::parse(format!("inline yoneda instance: {e}")))?;
            let cat = doc.to_category()?;
            let presheaves =
                crate::gen::enumerate_presheaves(&cat, crate::finset::Variance::Contravariant, 2, 2000)?;
            let mut ok = true;
            let mut checks = 0usize;
            let mut first_failure = None;
            for a in &presheaves {
                for x in cat.objects() {
                    checks += 1;
                    let witness = crate::presheaf::yoneda_check(&cat, x, a, caps)?;
                    if !witness.holds {
                        ok = false;
                        first_failure.get_or_insert((
                            x.clone(),
                            witness.nat_trans_count,
                            a.value(x).len(),
                        ));
                    }
                }
            }
            Ok(vec![LawReport {
                law: "yoneda".to_string(),
                instance: format!("inline category {} ({checks} checks)", cat.name()),
                verdict: if ok { Verdict::Holds } else { Verdict::Fails },
                witness: first_failure.map(|(x, nat, val)| {
                    crate::laws::Witness::Counterexample(
                        crate::laws::Counterexample::Cardinality {
                            left: format!("Nat(h({x}), A)"),
                            left_size: nat,
                            right: format!("A({x})"),
                            right_size: val,
                        },
                    )
                }),
            }])
        }
        "dual-definition" => {
            let doc: DiagramDoc = serde_json::from_value(value.clone())
                .map_err(|e| Error::parse(format!("inline diagram instance: {e}")))?;
            let diagram = doc.to_diagram()?;
            let a = crate::finset::lim_matching_families_with_caps(&diagram, caps)?;
            let b = crate::finset::lim_as_nat_trans_with_caps(&diagram, caps)?;
            let ok = a.apex == b.apex && a.legs == b.legs;
            Ok(vec![LawReport {
                law: "dual-definition".to_string(),
                instance: format!("inline diagram over {}", diagram.shape().name()),
                verdict: if ok { Verdict::Holds } else { Verdict::Fails },
                witness: if ok {
                    None
                } else {
                    Some(crate::laws::Witness::Counterexample(
                        crate::laws::Counterexample::Cardinality {
                            left: "matching families".into(),
                            left_size: a.apex.len(),
                            right: "transformations from the point".into(),
                            right_size: b.apex.len(),
                        },
                    ))
                },
            }])
        }
        other => Err(Error::invalid(format!(
            "law {other} does not accept inline instances; use generated"
        ))),
    }
}

fn node_to_value(node: &DecompNode) -> Value {
    match &node.kind {
        DecompKind::Leaf(kind) => json!({
            "concept": node.concept,
            "leaf": serde_json::to_value(kind).expect("leaf kinds serialize"),
        }),
        DecompKind::Expanded { expression, children } => json!({
            "concept": node.concept,
            "expression": serde_json::to_value(ExpressionDoc::from_expression(expression))
                .expect("expressions serialize"),
            "children": children
                .iter()
                .map(|(slot, child)| json!({ "slot": slot.0, "node": node_to_value(child) }))
                .collect::<Vec<_>>(),
        }),
    }
}

fn cmd_deconcept(
    path: &Path,
    concept: &str,
    dot: bool,
    format: Format,
    out: &mut dyn Write,
) -> crate::Result<i32> {
    let doc: KbDoc = crate::doc::read_json(path)?;
    let kb = doc.to_kb()?;
    let tree = deconcept(&kb, concept, &TableExtractor, DEFAULT_MAX_DEPTH)?;
    if dot {
        let _ = write!(out, "{}", tree.render_dot());
        return Ok(0);
    }
    let structured = json!({
        "command": "deconcept",
        "concept": concept,
        "tree": node_to_value(&tree.root),
    });
    emit(out, format, &structured, &tree.render_text());
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    path: &Path,
    concept: &str,
    mode: VerifyMode,
    m: usize,
    eps: f64,
    seed: u64,
    format: Format,
    caps: &Caps,
    out: &mut dyn Write,
) -> crate::Result<i32> {
    let doc: KbDoc = crate::doc::read_json(path)?;
    let kb = doc.to_kb()?;
    let (passed, detail) = match mode {
        VerifyMode::Tasks => match verify_with_tasks(&kb, concept, &TableExtractor, seed, m, eps, caps)? {
            TaskVerification::Pass => (true, "all sampled tasks within tolerance".to_string()),
            TaskVerification::Fail { task, loss } => {
                (false, format!("task {} has loss {loss}", task.describe()))
            }
        },
        VerifyMode::Verifier => {
            let verifier = BruteForceVerifier { caps: *caps };
            match verify_with_verifier(&kb, concept, &TableExtractor, &verifier)? {
                VerifierVerification::Pass => (true, "every non-leaf node verified".to_string()),
                VerifierVerification::Fail { concept: node } => {
                    (false, format!("node {node} fails the limit verifier"))
                }
            }
        }
    };
    let mode_tag = match mode {
        VerifyMode::Tasks => "tasks",
        VerifyMode::Verifier => "verifier",
    };
    let structured = json!({
        "command": "verify",
        "concept": concept,
        "mode": mode_tag,
        "passed": passed,
        "detail": detail,
    });
    let text = format!(
        "{}: {} ({detail})\n",
        concept,
        if passed { "pass" } else { "fail" }
    );
    emit(out, format, &structured, &text);
    Ok(if passed { 0 } else { 1 })
}

#[allow(clippy::too_many_arguments)]
fn cmd_learn(
    path: &Path,
    concept: &str,
    k: usize,
    m: usize,
    supervised: Option<&Path>,
    seed: u64,
    format: Format,
    caps: &Caps,
    out: &mut dyn Write,
) -> crate::Result<i32> {
    let doc: KbDoc = crate::doc::read_json(path)?;
    let kb = doc.to_kb()?;
    if let Some(expr_path) = supervised {
        let expr_doc: ExpressionDoc = crate::doc::read_json(expr_path)?;
        let expr = expr_doc.to_expression()?;
        let repaired = supervised_repair(&kb, concept, &expr, caps)?;
        let structured = json!({
            "command": "learn",
            "concept": concept,
            "supervised": true,
            "kb": serde_json::to_value(KbDoc::from_kb(&repaired)).expect("kb serializes"),
        });
        let text = format!("installed verified expression for {concept}\n");
        emit(out, format, &structured, &text);
        return Ok(0);
    }
    let config = LearnConfig { max_nodes: k, m, seed };
    match learn_concept(&kb, concept, &config, caps)? {
        LearnOutcome::Found(expr) => {
            let structured = json!({
                "command": "learn",
                "concept": concept,
                "found": serde_json::to_value(ExpressionDoc::from_expression(&expr))
                    .expect("expressions serialize"),
            });
            let text = format!("{concept}: {}\n", expr.describe());
            emit(out, format, &structured, &text);
            Ok(0)
        }
        LearnOutcome::Exhausted { best_loss, candidates } => {
            let structured = json!({
                "command": "learn",
                "concept": concept,
                "found": Value::Null,
                "best_loss": best_loss,
                "candidates": candidates,
            });
            let text = format!(
                "{concept}: no expression found ({candidates} candidates, best loss {best_loss})\n"
            );
            emit(out, format, &structured, &text);
            Ok(1)
        }
    }
}

fn cmd_analogy(
    path: &Path,
    concept1: &str,
    concept2: &str,
    format: Format,
    out: &mut dyn Write,
) -> crate::Result<i32> {
    let doc: KbDoc = crate::doc::read_json(path)?;
    let kb = doc.to_kb()?;
    let e1 = crate::concept::extract_limit(&kb, concept1)?
        .ok_or_else(|| Error::invalid(format!("{concept1} has no expression")))?;
    let e2 = crate::concept::extract_limit(&kb, concept2)?
        .ok_or_else(|| Error::invalid(format!("{concept2} has no expression")))?;
    let result = diagram_analogy(&e1, &e2);
    let correspondence = result.correspondence.as_ref().map(|c| {
        json!({
            "objects": c.object_map.iter().map(|(a, b)| (a.0.clone(), b.0.clone()))
                .collect::<std::collections::BTreeMap<_, _>>(),
            "morphisms": c.morphism_map.iter().map(|(a, b)| (a.0.clone(), b.0.clone()))
                .collect::<std::collections::BTreeMap<_, _>>(),
        })
    });
    let structured = json!({
        "command": "analogy",
        "concepts": [concept1, concept2],
        "score": result.score,
        "correspondence": correspondence,
    });
    let text = match &result.correspondence {
        Some(_) => format!("{concept1} ~ {concept2}: score {:.3}, full shape correspondence\n", result.score),
        None => format!("{concept1} ~ {concept2}: score {:.3}, partial overlap only\n", result.score),
    };
    emit(out, format, &structured, &text);
    Ok(0)
}
