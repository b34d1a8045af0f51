//! Diagram analogies: structural similarity between limit expressions,
//! reported as a correspondence and a score — never as a decomposition.
//!
//! Run with `cargo run --example diagram_analogy`.

use catlim::concept::{diagram_analogy, extract_limit, LimitExpression, LimitOp};
use catlim::fincat::{ObjId, ShapeKind};
use catlim::fixtures;

fn main() -> catlim::Result<()> {
    let kb = fixtures::dp_kb();
    let for_expr = extract_limit(&kb, "for_loop")?.expect("has expression");
    let while_expr = extract_limit(&kb, "while_loop")?.expect("has expression");
    let dp_expr = extract_limit(&kb, "dynamic_programming")?.expect("has expression");

    let same = diagram_analogy(&for_expr, &for_expr);
    println!("for_loop vs itself:      score {:.3}", same.score);

    let pair = diagram_analogy(&for_expr, &while_expr);
    println!(
        "for_loop vs while_loop:  score {:.3}, full correspondence: {}",
        pair.score,
        pair.correspondence.is_some()
    );

    let cross = diagram_analogy(&for_expr, &dp_expr);
    println!(
        "for_loop vs dp:          score {:.3} (different shapes)",
        cross.score
    );

    // Shapes of different kinds get a partial structural score.
    let discrete = LimitExpression {
        operator: LimitOp::Projective,
        shape: ShapeKind::Discrete(2),
        nodes: [
            (ObjId::from("I1"), "optimal_state".to_string()),
            (ObjId::from("I2"), "sub_problem_recursion".to_string()),
        ]
        .into(),
        edges: Default::default(),
    };
    let partial = diagram_analogy(&dp_expr, &discrete);
    println!("parallel_pair vs discrete(2): score {:.3}", partial.score);
    Ok(())
}
