//! Property tests over seeded random structures: the structural laws the
//! engine promises on every input, not just the fixtures.

use proptest::prelude::*;

use catlim::caps::Caps;
use catlim::fincat::ObjId;
use catlim::finset::{colim, lim_matching_families, product, Variance};
use catlim::gen;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Generated categories are valid, and so are their opposites.
    #[test]
    fn random_categories_and_their_opposites_validate(seed in any::<u64>()) {
        let cat = gen::random_category(seed, &gen::CategoryBounds::default());
        prop_assert!(cat.validate().is_empty());
        prop_assert!(cat.opposite().validate().is_empty());
    }

    /// The double opposite is the structural identity on the full table.
    #[test]
    fn double_opposite_is_identity(seed in any::<u64>()) {
        let cat = gen::random_category(seed, &gen::CategoryBounds::default());
        prop_assert_eq!(cat.opposite().opposite(), cat);
    }

    /// Inverses are unique and induce an equivalence relation on objects.
    #[test]
    fn isomorphism_candidates_are_unique(seed in any::<u64>()) {
        let cat = gen::random_category(seed, &gen::CategoryBounds::default());
        for m in cat.morphisms() {
            // At most one inverse exists in a valid category; the scan
            // returns the first, and composing confirms it.
            if let Some(inv) = cat.is_isomorphism(&m.id).unwrap() {
                let im = cat.morphism(&inv).unwrap();
                prop_assert_eq!(cat.compose(&m.id, &inv), cat.identity(&im.src));
                prop_assert_eq!(cat.compose(&inv, &m.id), cat.identity(&m.src));
                // Symmetry of the induced relation.
                prop_assert!(cat.is_isomorphism(&inv).unwrap().is_some());
            }
        }
    }

    /// Limit apexes are bounded by the product of the value sizes, colimit
    /// apexes by their sum.
    #[test]
    fn apex_size_bounds(seed in any::<u64>()) {
        let d = gen::random_contravariant_diagram(seed);
        let limit = lim_matching_families(&d).unwrap();
        let prod: usize = d.objects().values().map(|s| s.len()).product();
        prop_assert!(limit.apex.len() <= prod);
        // Reuse the same sets covariantly when the shape allows it.
        if d.shape().morphisms().iter().all(|m| d.shape().is_identity(&m.id)) {
            let cov = catlim::finset::SetDiagram::new(
                d.shape().clone(),
                Variance::Covariant,
                d.objects().clone(),
                Default::default(),
            )
            .unwrap();
            let colimit = colim(&cov).unwrap();
            let sum: usize = d.objects().values().map(|s| s.len()).sum();
            prop_assert_eq!(colimit.apex.len(), sum);
        }
    }

    /// The specialized product constructor agrees with the general engine
    /// on cardinality and projections.
    #[test]
    fn product_projects_onto_its_factors(seed in any::<u64>()) {
        let mut r = gen::rng(seed);
        let x = gen::random_set(&mut r, "X", 0, 4);
        let y = gen::random_set(&mut r, "Y", 0, 4);
        let p = product(&x, &y).unwrap();
        prop_assert_eq!(p.apex.len(), x.len() * y.len());
        let mut seen = std::collections::BTreeSet::new();
        for fam in p.apex.elements() {
            let pair = (
                p.legs[&ObjId::from("I1")].apply(fam).clone(),
                p.legs[&ObjId::from("I2")].apply(fam).clone(),
            );
            prop_assert!(seen.insert(pair), "projections must be jointly injective");
        }
    }

    /// Both limit routes agree on arbitrary seeds (element-level equality).
    #[test]
    fn limit_routes_agree(seed in any::<u64>()) {
        let d = gen::random_contravariant_diagram(seed);
        let caps = Caps::default();
        let a = catlim::finset::lim_matching_families_with_caps(&d, &caps).unwrap();
        let b = catlim::finset::lim_as_nat_trans_with_caps(&d, &caps).unwrap();
        prop_assert_eq!(a.apex, b.apex);
        prop_assert_eq!(a.legs, b.legs);
    }

    /// Yoneda counts: |Nat(h(x), A)| = |A(x)| on random presheaves.
    #[test]
    fn yoneda_counts_match(seed in any::<u64>()) {
        let cat = gen::random_category(seed % 1000, &gen::CategoryBounds { max_objects: 3, max_morphisms: 8 });
        if let Ok(a) = gen::random_presheaf(&cat, Variance::Contravariant, seed, 2, 2000) {
            for x in cat.objects() {
                let witness = catlim::presheaf::yoneda_check(&cat, x, &a, &Caps::default()).unwrap();
                prop_assert!(witness.holds);
                prop_assert_eq!(witness.nat_trans_count, a.value(x).len());
            }
        }
    }

    /// Representability search always succeeds on Yoneda images and
    /// returns an object isomorphic to the original.
    #[test]
    fn yoneda_images_are_representable(seed in any::<u64>()) {
        let cat = gen::random_category(seed % 500, &gen::CategoryBounds { max_objects: 4, max_morphisms: 10 });
        let caps = Caps::default();
        for x in cat.objects() {
            let hx = catlim::presheaf::yoneda_h(&cat, x).unwrap();
            let witness = catlim::presheaf::representability_search(&hx, &caps)
                .unwrap()
                .expect("representables must be found");
            prop_assert!(
                catlim::laws::objects_isomorphic(&cat, &witness.object, x).unwrap(),
                "found {} for h({})", witness.object, x
            );
        }
    }
}
