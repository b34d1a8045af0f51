//! The brute-force law checkers on their generated instance suites, plus
//! one deliberate counterexample with its independent recheck.
//!
//! Run with `cargo run --example law_suite`.

use catlim::caps::Caps;
use catlim::fincat::ObjId;
use catlim::gen;
use catlim::laws::{check_hom_lim_wrong_side, recheck, suites, Verdict, Witness};

fn main() -> catlim::Result<()> {
    let caps = Caps::default();
    for law in suites::all_law_ids() {
        let reports = suites::run_generated(law, 0, 2, &caps)?;
        let holds = reports.iter().filter(|r| r.verdict == Verdict::Holds).count();
        let na = reports.iter().filter(|r| r.verdict == Verdict::NotApplicable).count();
        let fails = reports.iter().filter(|r| r.verdict == Verdict::Fails).count();
        println!("{law:<28} holds {holds:>3}   n/a {na:>2}   fails {fails:>2}");
    }

    // The one-sidedness of hom/colim commutation, witnessed on a chain and
    // re-checked by the independent verifier.
    let chain = gen::chain_poset(2);
    let alpha = {
        use catlim::fincat::{build_shape, ShapeKind};
        use catlim::finset::Variance;
        use catlim::presheaf::CatDiagram;
        use std::collections::BTreeMap;
        CatDiagram::new(
            &chain,
            build_shape(&ShapeKind::Discrete(2)),
            Variance::Covariant,
            [
                (ObjId::from("I1"), ObjId::from("p1")),
                (ObjId::from("I2"), ObjId::from("p2")),
            ]
            .into(),
            BTreeMap::new(),
        )?
    };
    let report = check_hom_lim_wrong_side(&alpha, &ObjId::from("p1"), &caps)?;
    println!("\nwrong-side probe verdict: {:?} — {}", report.verdict, report.instance);
    if let Some(Witness::Counterexample(cx)) = &report.witness {
        println!("counterexample rechecks independently: {}", recheck::cardinality(cx));
    }
    Ok(())
}
