//! The seeded generators behind the test suites: random categories by free
//! composition closure, lattice posets, presheaf enumeration and generated
//! knowledge bases with known ground truth.
//!
//! Run with `cargo run --example random_structures`.

use catlim::finset::Variance;
use catlim::gen;

fn main() -> catlim::Result<()> {
    for seed in 0..5 {
        let cat = gen::random_category(seed, &gen::CategoryBounds::default());
        println!(
            "seed {seed}: {} with {} objects, {} morphisms, valid = {}",
            cat.name(),
            cat.objects().len(),
            cat.morphisms().len(),
            cat.validate().is_empty()
        );
    }

    let cat = gen::random_category(2, &gen::CategoryBounds::default());
    let presheaves = gen::enumerate_presheaves(&cat, Variance::Contravariant, 2, 5000)?;
    println!("\n{} carries {} presheaves of pointwise size ≤ 2", cat.name(), presheaves.len());

    for p in gen::lattice_posets() {
        println!("lattice {}: {} objects", p.name(), p.objects().len());
    }

    let g = gen::random_concept_kb(4, true)?;
    println!(
        "\ngenerated KB (seed 4, corrupted): victim = {:?}",
        g.corrupted
    );
    for (concept, valid) in &g.truth {
        println!("  {concept}: expression valid = {valid}");
    }
    Ok(())
}
