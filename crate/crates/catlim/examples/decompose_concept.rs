//! Hierarchical concept decomposition: expand the dynamic-programming
//! fixture into its tree and emit both renderings.
//!
//! Run with `cargo run --example decompose_concept`.

use catlim::concept::{deconcept, TableExtractor, DEFAULT_MAX_DEPTH};
use catlim::fixtures;

fn main() -> catlim::Result<()> {
    let kb = fixtures::dp_kb();
    let tree = deconcept(&kb, "dynamic_programming", &TableExtractor, DEFAULT_MAX_DEPTH)?;
    println!("{}", tree.render_text());
    println!("{}", tree.render_dot());

    // Basic concepts stay single nodes; cycles are flagged, not expanded.
    let leaf = deconcept(&kb, "optimal_state", &TableExtractor, DEFAULT_MAX_DEPTH)?;
    print!("{}", leaf.render_text());

    let circular = catlim::concept::LimitExpression {
        operator: catlim::concept::LimitOp::Projective,
        shape: catlim::fincat::ShapeKind::Discrete(1),
        nodes: [(catlim::fincat::ObjId::from("I1"), "dynamic_programming".to_string())].into(),
        edges: Default::default(),
    };
    let cyclic_kb = kb.with_expressions("dynamic_programming", vec![circular])?;
    let cyclic = deconcept(&cyclic_kb, "dynamic_programming", &TableExtractor, DEFAULT_MAX_DEPTH)?;
    println!("\nself-referential entry becomes a flagged leaf:");
    print!("{}", cyclic.render_text());
    Ok(())
}
