//! The discrete expression-search learner: recover a planted expression on
//! a generated knowledge base, and repair a corrupted one under
//! supervision.
//!
//! Run with `cargo run --example learn_expression`.

use catlim::caps::Caps;
use catlim::concept::{
    expressions_equivalent, learn_concept, limit_verifier, precisely_understands,
    supervised_repair, LearnConfig, LearnOutcome, TableExtractor,
};
use catlim::gen;

fn main() -> catlim::Result<()> {
    let caps = Caps::default();

    // Plant-and-recover on a generated knowledge base.
    let generated = gen::random_concept_kb(11, false)?;
    let planted = &generated.planted["goal"];
    println!("planted:   {}", planted.describe());
    let config = LearnConfig { max_nodes: 4, m: 40, seed: 0 };
    match learn_concept(&generated.kb, "goal", &config, &caps)? {
        LearnOutcome::Found(expr) => {
            println!("recovered: {}", expr.describe());
            println!("same diagram up to shape iso: {}", expressions_equivalent(&expr, planted));
            println!("passes the verifier: {}", limit_verifier(&generated.kb, &expr, "goal", &caps)?);
        }
        LearnOutcome::Exhausted { best_loss, candidates } => {
            println!("nothing found: best loss {best_loss} across {candidates} candidates")
        }
    }

    // Supervised repair: corrupt, then install the known-good expression.
    let corrupted = gen::corrupt_expression(&generated.kb, "goal", 99, &caps)?;
    println!(
        "\nafter corruption, goal verifies: {}",
        precisely_understands(&corrupted, "goal", &TableExtractor, &caps)?
    );
    let repaired = supervised_repair(&corrupted, "goal", planted, &caps)?;
    println!(
        "after supervised repair, goal verifies: {}",
        precisely_understands(&repaired, "goal", &TableExtractor, &caps)?
    );
    Ok(())
}
