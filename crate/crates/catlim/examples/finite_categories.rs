//! Build explicit finite categories, validate their laws, take opposites
//! and hunt for isomorphisms.
//!
//! Run with `cargo run --example finite_categories`.


use catlim::fincat::{build_shape, FinCategory, MorId, Morphism, ObjId, ShapeKind};

fn main() -> catlim::Result<()> {
    // The canonical shapes ship with deterministic ids.
    for kind in [ShapeKind::Discrete(2), ShapeKind::ParallelPair, ShapeKind::Cospan, ShapeKind::Span] {
        let shape = build_shape(&kind);
        println!(
            "{}: {} objects, {} morphisms, valid = {}",
            shape.name(),
            shape.objects().len(),
            shape.morphisms().len(),
            shape.validate().is_empty()
        );
    }

    // A two-object groupoid, entered by hand.
    let objects = vec![ObjId::from("U"), ObjId::from("V")];
    let morphisms = vec![
        Morphism { id: MorId::from("id_U"), src: ObjId::from("U"), dst: ObjId::from("U") },
        Morphism { id: MorId::from("id_V"), src: ObjId::from("V"), dst: ObjId::from("V") },
        Morphism { id: MorId::from("f"), src: ObjId::from("U"), dst: ObjId::from("V") },
        Morphism { id: MorId::from("g"), src: ObjId::from("V"), dst: ObjId::from("U") },
    ];
    let identities = [
        (ObjId::from("U"), MorId::from("id_U")),
        (ObjId::from("V"), MorId::from("id_V")),
    ]
    .into();
    let composition = [
        ((MorId::from("g"), MorId::from("f")), MorId::from("id_U")),
        ((MorId::from("f"), MorId::from("g")), MorId::from("id_V")),
    ]
    .into();
    let groupoid = FinCategory::new("pair_groupoid", objects, morphisms, identities, composition)?;
    println!("\npair_groupoid law violations: {:?}", groupoid.validate());
    println!("inverse of f: {:?}", groupoid.is_isomorphism(&MorId::from("f"))?);

    // Opposites reverse every arrow and are involutive on the table.
    let cospan = build_shape(&ShapeKind::Cospan);
    let op = cospan.opposite();
    println!("\ncospan^op has the span table: {}", op.same_table(&build_shape(&ShapeKind::Span)));
    println!("double opposite restores the original: {}", op.opposite() == cospan);

    // The validator pinpoints broken tables instead of refusing to build.
    let broken = FinCategory::new(
        "broken",
        vec![ObjId::from("A"), ObjId::from("B")],
        vec![
            Morphism { id: MorId::from("id_A"), src: ObjId::from("A"), dst: ObjId::from("A") },
            Morphism { id: MorId::from("id_B"), src: ObjId::from("B"), dst: ObjId::from("B") },
            Morphism { id: MorId::from("m"), src: ObjId::from("A"), dst: ObjId::from("B") },
        ],
        [
            (ObjId::from("A"), MorId::from("id_A")),
            (ObjId::from("B"), MorId::from("id_B")),
        ]
        .into(),
        // id_B ∘ m wrongly tabulated as id_A: a closure violation.
        [((MorId::from("id_B"), MorId::from("m")), MorId::from("id_A"))].into(),
    )?;
    let mut report = broken.validate();
    report.truncate(2);
    println!("\nbroken category first violations:");
    for v in report {
        println!("  - {v}");
    }
    Ok(())
}
