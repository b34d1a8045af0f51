//! The committed fixture documents must stay in sync with the in-code
//! builders, and every shipped fixture must satisfy the properties the
//! examples and command-line walkthroughs rely on.

use std::path::PathBuf;

use catlim::caps::Caps;
use catlim::concept::{precisely_understands, TableExtractor};
use catlim::doc::{to_pretty_json, DiagramDoc, KbDoc};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

#[test]
fn committed_kb_documents_match_their_builders() {
    for (name, kb) in [
        ("dp_kb.json", catlim::fixtures::dp_kb()),
        ("wall_clock_kb.json", catlim::fixtures::wall_clock_kb()),
    ] {
        let committed = std::fs::read_to_string(fixture(name)).expect("fixture present");
        let rebuilt = to_pretty_json(&KbDoc::from_kb(&kb));
        assert_eq!(committed, rebuilt, "{name} drifted from its builder");
    }
}

#[test]
fn committed_kbs_parse_and_verify() {
    let caps = Caps::default();
    for (name, root) in [
        ("dp_kb.json", "dynamic_programming"),
        ("wall_clock_kb.json", "wall_clock"),
    ] {
        let doc: KbDoc = catlim::doc::read_json(&fixture(name)).unwrap();
        let kb = doc.to_kb().unwrap();
        assert!(kb.category().validate().is_empty(), "{name} category invalid");
        assert!(
            precisely_understands(&kb, root, &TableExtractor, &caps).unwrap(),
            "{name}: {root} should verify"
        );
    }
    // The corrupted variant must fail, from the document too.
    let doc: KbDoc = catlim::doc::read_json(&fixture("dp_kb_corrupted.json")).unwrap();
    let kb = doc.to_kb().unwrap();
    assert!(!precisely_understands(&kb, "dynamic_programming", &TableExtractor, &caps).unwrap());
}

#[test]
fn figure_fixtures_parse_into_valid_diagrams() {
    for name in [
        "figure_product.json",
        "figure_pullback_point.json",
        "figure_preimage.json",
        "figure_sum.json",
        "figure_quotient.json",
    ] {
        let doc: DiagramDoc = catlim::doc::read_json(&fixture(name)).unwrap();
        doc.to_diagram().unwrap_or_else(|e| panic!("{name}: {e}"));
    }
}

#[test]
fn default_law_manifest_runs_clean() {
    let mut out = Vec::new();
    let args = vec![
        "catlim".to_string(),
        "laws".to_string(),
        fixture("laws_default.json").to_str().unwrap().to_string(),
    ];
    let code = catlim::cli::run(args, &mut out);
    let text = String::from_utf8(out).unwrap();
    assert_eq!(code, 0, "{text}");
    assert!(!text.contains("FAILS"), "{text}");
}
