//! The concrete limit engine over finite sets: products, pullbacks,
//! preimages, sums, quotients, and the universal-property checker.
//!
//! Run with `cargo run --example limits_in_set`.

use catlim::finset::{
    coequalizer, coproduct, equalizer, iso_sets, product, pullback, verify_universal_property,
    ElemId, FinSet, SetFn,
};

fn main() -> catlim::Result<()> {
    let x = FinSet::of("X", &["1", "2", "3"]);
    let y = FinSet::of("Y", &["a", "b"]);

    // Product: matching families over the discrete pair.
    let prod = product(&x, &y)?;
    println!("|X × Y| = {} (expected {})", prod.apex.len(), x.len() * y.len());

    // Pullback over the point collapses to the product.
    let pt = FinSet::point();
    let to_pt_x = SetFn::constant(&x, &pt, &ElemId::from("pt"))?;
    let to_pt_y = SetFn::constant(&y, &pt, &ElemId::from("pt"))?;
    let pb = pullback(&to_pt_x, &to_pt_y)?;
    println!("|X ×* Y| = {} ≅ |X × Y|: {}", pb.apex.len(), pb.apex.len() == prod.apex.len());

    // Preimage: the equalizer of f against the constant at b.
    let f = SetFn::of(&x, &y, &[("1", "a"), ("2", "b"), ("3", "b")])?;
    let g = SetFn::constant(&x, &y, &ElemId::from("b"))?;
    let eq = equalizer(&f, &g)?;
    println!(
        "equalizer(f, const_b) picks out f⁻¹(b): {:?}",
        eq.apex.elements().iter().map(|e| e.as_str()).collect::<Vec<_>>()
    );

    // Sum and quotient.
    let sum = coproduct(&x, &y)?;
    println!("|X + Y| = {} (expected {})", sum.apex.len(), x.len() + y.len());
    let glue_src = FinSet::of("G", &["p"]);
    let f2 = SetFn::of(&glue_src, &x, &[("p", "1")])?;
    let g2 = SetFn::of(&glue_src, &x, &[("p", "2")])?;
    let quot = coequalizer(&f2, &g2)?;
    println!("coequalizer glues 1 ∼ 2 inside X: |X/∼| = {}", quot.apex.len());

    // The universal property, checked by exhaustive cone enumeration, and
    // broken on purpose by corrupting a projection.
    let diagram = {
        use catlim::fincat::{build_shape, ObjId, ShapeKind};
        use catlim::finset::{SetDiagram, Variance};
        use std::collections::BTreeMap;
        SetDiagram::new(
            build_shape(&ShapeKind::Discrete(2)),
            Variance::Contravariant,
            [(ObjId::from("I1"), x.clone()), (ObjId::from("I2"), y.clone())].into(),
            BTreeMap::new(),
        )?
    };
    let probes = [FinSet::of("W1", &["w"]), FinSet::of("W2", &["w1", "w2"])];
    let ok = verify_universal_property(&prod, &diagram, &probes)?;
    println!("product satisfies its universal property: {}", ok.holds);

    let mut corrupted = prod.clone();
    let leg = corrupted.legs.get_mut(&catlim::fincat::ObjId::from("I1")).unwrap();
    let victim = leg.source().elements()[0].clone();
    let old = leg.apply(&victim).clone();
    let other = x.elements().iter().find(|e| **e != old).unwrap().clone();
    let mut table = leg.table().clone();
    table.insert(victim, other);
    *leg = SetFn::new(leg.source().clone(), leg.target().clone(), table)?;
    let bad = verify_universal_property(&corrupted, &diagram, &probes)?;
    println!(
        "after flipping one projection entry: holds = {}, counterexample: {}",
        bad.holds,
        bad.counterexample.map(|c| c.detail).unwrap_or_default()
    );

    // iso_sets is the cardinality bijection used everywhere as d = 0/1.
    println!("iso_sets(X, Y) exists: {}", iso_sets(&x, &y).is_some());
    Ok(())
}
