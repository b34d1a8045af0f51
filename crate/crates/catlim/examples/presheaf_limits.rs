//! Pointwise limits in presheaf categories, lifted limits of
//! category-valued diagrams, representability search and the Yoneda
//! extension.
//!
//! Run with `cargo run --example presheaf_limits`.

use std::collections::BTreeMap;

use catlim::caps::Caps;
use catlim::fincat::{build_shape, ObjId, ShapeKind};
use catlim::finset::Variance;
use catlim::gen;
use catlim::presheaf::{
    category_of_elements, cone_presheaf, ind_lim, naturally_isomorphic, presheaf_lim, pro_lim,
    representability_search, yoneda_extension, yoneda_h, yoneda_k, CatDiagram, PresheafDiagram,
    SetPresheaf,
};

fn main() -> catlim::Result<()> {
    let caps = Caps::default();
    let diamond = gen::diamond_poset();
    let (qa, qb) = (ObjId::from("qa"), ObjId::from("qb"));

    // A pointwise limit of two representables: values are products.
    let a = yoneda_h(&diamond, &qa)?;
    let b = yoneda_h(&diamond, &qb)?;
    let pair = PresheafDiagram::new(
        &diamond,
        build_shape(&ShapeKind::Discrete(2)),
        Variance::Contravariant,
        Variance::Contravariant,
        [(ObjId::from("I1"), a.clone()), (ObjId::from("I2"), b.clone())].into(),
        BTreeMap::new(),
    )?;
    let lim = presheaf_lim(&pair, &caps)?;
    for z in diamond.objects() {
        println!(
            "lim(h(qa), h(qb))({z}) has {} = {} × {} elements",
            lim.value(z).len(),
            a.value(z).len(),
            b.value(z).len()
        );
    }

    // The cone presheaf of {qa, qb} is representable by their meet.
    let beta = CatDiagram::new(
        &diamond,
        build_shape(&ShapeKind::Discrete(2)),
        Variance::Contravariant,
        [(ObjId::from("I1"), qa.clone()), (ObjId::from("I2"), qb.clone())].into(),
        BTreeMap::new(),
    )?;
    let cones = cone_presheaf(&beta, &caps)?;
    match representability_search(&cones, &caps)? {
        Some(w) => println!("\ncones over {{qa, qb}} are represented by {} (their meet)", w.object),
        None => println!("\ncones over {{qa, qb}} are not representable"),
    }

    // Lifted limits: over a point shape they are just Yoneda images.
    let point = CatDiagram::point(&diamond, Variance::Covariant, &qa)?;
    let lifted = ind_lim(&point, &caps)?;
    println!(
        "ind_lim over the point ≅ h(qa): {}",
        naturally_isomorphic(&lifted, &yoneda_h(&diamond, &qa)?, &caps)?
    );
    let point_beta = CatDiagram::point(&diamond, Variance::Contravariant, &qb)?;
    let prolifted = pro_lim(&point_beta, &caps)?;
    println!(
        "pro_lim over the point ≅ k(qb): {}",
        naturally_isomorphic(&prolifted, &yoneda_k(&diamond, &qb)?, &caps)?
    );

    // The category of elements and the Yoneda extension.
    let pt = SetPresheaf::constant_point(&diamond, Variance::Contravariant);
    let elements = category_of_elements(&pt, &caps)?;
    println!(
        "\nelements of the constant point presheaf ≅ the base: {} objects vs {}",
        elements.category.objects().len(),
        diamond.objects().len()
    );
    let f = yoneda_k(&diamond, &ObjId::from("q0"))?;
    for x in diamond.objects() {
        let hx = yoneda_h(&diamond, x)?;
        let extended = yoneda_extension(&f, &hx, &caps)?;
        println!("F̃(h({x})) has {} elements, F({x}) has {}", extended.apex.len(), f.value(x).len());
    }
    Ok(())
}
