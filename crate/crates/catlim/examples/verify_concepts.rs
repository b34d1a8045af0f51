//! Concept verification two ways — sampled tasks and the brute-force limit
//! verifier — on a consistent knowledge base and after a corruption.
//!
//! Run with `cargo run --example verify_concepts`.

use catlim::caps::Caps;
use catlim::concept::{
    precisely_understands, verify_with_tasks, verify_with_verifier, BruteForceVerifier,
    TableExtractor, TaskVerification, VerifierVerification,
};
use catlim::fincat::MorId;
use catlim::fixtures;

fn main() -> catlim::Result<()> {
    let caps = Caps::default();
    let kb = fixtures::dp_kb();

    println!(
        "precisely_understands(dynamic_programming) = {}",
        precisely_understands(&kb, "dynamic_programming", &TableExtractor, &caps)?
    );
    match verify_with_tasks(&kb, "dynamic_programming", &TableExtractor, 0, 40, 0.5, &caps)? {
        TaskVerification::Pass => println!("task verification (m=40, eps=0.5): pass"),
        TaskVerification::Fail { task, loss } => {
            println!("task verification failed on {} with loss {loss}", task.describe())
        }
    }

    // Corrupt the inner node: both parallel edges now carry run_case, so
    // the inductive gluing no longer reproduces sub_problem_recursion.
    let mut corrupted_expr =
        catlim::concept::extract_limit(&kb, "sub_problem_recursion")?.expect("has expression");
    corrupted_expr.edges.insert(MorId::from("m2"), MorId::from("run_case"));
    let corrupted = kb.with_expressions("sub_problem_recursion", vec![corrupted_expr])?;

    let verifier = BruteForceVerifier { caps };
    match verify_with_verifier(&corrupted, "dynamic_programming", &TableExtractor, &verifier)? {
        VerifierVerification::Pass => println!("corrupted KB unexpectedly passes"),
        VerifierVerification::Fail { concept } => {
            println!("verifier names the corrupted node: {concept}")
        }
    }
    match verify_with_tasks(&corrupted, "sub_problem_recursion", &TableExtractor, 1, 50, 0.5, &caps)? {
        TaskVerification::Pass => println!("task verification unexpectedly passes"),
        TaskVerification::Fail { task, loss } => {
            println!("task verification agrees: {} has loss {loss}", task.describe())
        }
    }

    // The wall-clock base: its cospan definition verifies too.
    let clock = fixtures::wall_clock_kb();
    println!(
        "\nprecisely_understands(wall_clock) = {}",
        precisely_understands(&clock, "wall_clock", &TableExtractor, &caps)?
    );
    Ok(())
}
