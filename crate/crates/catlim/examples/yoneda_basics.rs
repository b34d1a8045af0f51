//! Yoneda embeddings, natural-transformation enumeration and the canonical
//! bijection `Nat(h(x), A) ≅ A(x)` checked with explicit witnesses.
//!
//! Run with `cargo run --example yoneda_basics`.

use catlim::caps::Caps;
use catlim::fincat::ObjId;
use catlim::gen;
use catlim::presheaf::{enumerate_nat_trans, yoneda_check, yoneda_h, yoneda_k};

fn main() -> catlim::Result<()> {
    let caps = Caps::default();
    let chain = gen::chain_poset(3);

    // The embeddings read hom-sets straight off the table.
    let h = yoneda_h(&chain, &ObjId::from("p2"))?;
    let k = yoneda_k(&chain, &ObjId::from("p2"))?;
    for z in chain.objects() {
        println!(
            "h(p2)({z}) = {:?}   k(p2)({z}) = {:?}",
            h.value(z).elements().iter().map(|e| e.as_str()).collect::<Vec<_>>(),
            k.value(z).elements().iter().map(|e| e.as_str()).collect::<Vec<_>>()
        );
    }

    // Endotransformations of a representable match endomorphisms.
    let endos = enumerate_nat_trans(&h, &h, &caps)?;
    println!("\n|Nat(h(p2), h(p2))| = {}", endos.len());

    // The canonical bijection, verified on every presheaf over a random
    // category with pointwise size at most 2.
    let cat = gen::random_category(5, &gen::CategoryBounds::default());
    let presheaves =
        gen::enumerate_presheaves(&cat, catlim::finset::Variance::Contravariant, 2, 2000)?;
    println!(
        "\nrandom category {}: {} objects, {} morphisms, {} presheaves",
        cat.name(),
        cat.objects().len(),
        cat.morphisms().len(),
        presheaves.len()
    );
    let mut checks = 0;
    let mut all_hold = true;
    for a in &presheaves {
        for x in cat.objects() {
            let witness = yoneda_check(&cat, x, a, &caps)?;
            checks += 1;
            all_hold &= witness.holds;
        }
    }
    println!("yoneda checks run: {checks}, all hold: {all_hold}");

    // One witness in detail: the bijection pairs u with θ^u.
    if let Some(a) = presheaves.iter().find(|a| a.total_size() > 2) {
        let x = cat.objects()[0].clone();
        let witness = yoneda_check(&cat, &x, a, &caps)?;
        println!("\nwitness at {x}: {}", witness.detail);
        for (u, theta) in witness.bijection.iter().take(3) {
            println!("  {u} ↦ {}", theta.encode());
        }
    }
    Ok(())
}
