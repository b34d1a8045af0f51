//! Acceptance suite: one test per criterion, each printing a PASS line
//! with its headline numbers (visible with `--nocapture`). Everything is
//! seeded and deterministic; tolerances are pinned in the assertions.


use catlim::caps::Caps;
use catlim::concept::{
    applicable_tasks, apply_task, expressions_equivalent, learn_concept, learn_concept_all,
    limit_verifier, precisely_understands, similarity_d, supervised_repair, verify_with_tasks,
    verify_with_verifier, BruteForceVerifier, LearnConfig, LearnOutcome, TableExtractor,
    TaskTarget, TaskVerification, VerifierVerification, DEFAULT_MAX_DEPTH,
};
use catlim::fincat::ObjId;
use catlim::finset::{
    coequalizer, colim, coproduct, equalizer, lim_as_nat_trans_with_caps,
    lim_matching_families_with_caps, product, pullback, verify_universal_property, ElemId, FinSet,
    SetFn, Variance,
};
use catlim::gen;
use catlim::laws::{suites, Verdict};
use catlim::presheaf::yoneda_check;

fn caps() -> Caps {
    Caps::default()
}

fn fixture(name: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name),
    )
    .expect("golden file present")
}

fn run_cli(args: &[&str]) -> (i32, Vec<u8>) {
    let mut out = Vec::new();
    let full: Vec<String> =
        std::iter::once("catlim".to_string()).chain(args.iter().map(|s| s.to_string())).collect();
    let code = catlim::cli::run(full, &mut out);
    (code, out)
}

/// Yoneda suite: 100 seeded random categories (bounds 5 objects, 12
/// morphisms), every contravariant presheaf of pointwise size at most 3
/// over each, the canonical bijection verified at every object; zero
/// failures, under 60 seconds.
#[test]
fn acceptance_yoneda_suite() {
    let start = std::time::Instant::now();
    let bounds = gen::CategoryBounds { max_objects: 5, max_morphisms: 12 };
    let suite = gen::presheaf_sweep_categories(100, 0, &bounds, 3, 600);
    assert_eq!(suite.len(), 100);
    let mut checks = 0u64;
    let mut presheaf_count = 0u64;
    for (cat, presheaves) in &suite {
        presheaf_count += presheaves.len() as u64;
        for a in presheaves {
            for x in cat.objects() {
                let witness = yoneda_check(cat, x, a, &caps()).expect("within caps");
                assert!(witness.holds, "yoneda fails on {} at {x}: {}", cat.name(), witness.detail);
                checks += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "yoneda suite took {elapsed:?}, budget is 60s"
    );
    println!(
        "ACCEPTANCE yoneda_suite: PASS ({} categories, {presheaf_count} presheaves, {checks} checks, {elapsed:?})",
        suite.len()
    );
}

/// Dual-definition agreement: matching-family and natural-transformation
/// routes coincide element-for-element on 500 seeded diagrams.
#[test]
fn acceptance_dual_definition_agreement() {
    let mut count = 0;
    for seed in 0..500u64 {
        let d = gen::random_contravariant_diagram(seed);
        let a = lim_matching_families_with_caps(&d, &caps()).expect("within caps");
        let b = lim_as_nat_trans_with_caps(&d, &caps()).expect("within caps");
        assert_eq!(a.apex, b.apex, "apex mismatch at seed {seed}");
        assert_eq!(a.legs, b.legs, "leg mismatch at seed {seed}");
        count += 1;
    }
    println!("ACCEPTANCE dual_definition: PASS ({count} diagrams, 0 mismatches)");
}

fn seeded_sets(seed: u64) -> (FinSet, FinSet) {
    let mut r = gen::rng(seed);
    let x = gen::random_set(&mut r, "X", 0, 4);
    let y = gen::random_set(&mut r, "Y", 0, 4);
    (x, y)
}

/// Figure reproduction: the five concrete identities hold exactly on the
/// shipped fixtures and on 100 seeded random instances each.
#[test]
fn acceptance_figure_reproduction() {
    let caps = caps();
    // Shipped fixtures through the document layer.
    let load = |name: &str| -> catlim::finset::SetDiagram {
        let doc: catlim::doc::DiagramDoc =
            catlim::doc::read_json(&fixture(name)).expect("fixture parses");
        doc.to_diagram().expect("fixture is well formed")
    };
    let product_fx = lim_matching_families_with_caps(&load("figure_product.json"), &caps).unwrap();
    assert_eq!(product_fx.apex.len(), 6);
    let pullback_fx =
        lim_matching_families_with_caps(&load("figure_pullback_point.json"), &caps).unwrap();
    assert_eq!(pullback_fx.apex.len(), 6);
    let preimage_fx = lim_matching_families_with_caps(&load("figure_preimage.json"), &caps).unwrap();
    assert_eq!(preimage_fx.apex.len(), 2);
    let sum_fx = colim(&load("figure_sum.json")).unwrap();
    assert_eq!(sum_fx.apex.len(), 5);
    let quotient_fx = colim(&load("figure_quotient.json")).unwrap();
    assert_eq!(quotient_fx.apex.len(), 2);

    // 100 random instances per identity.
    for seed in 0..100u64 {
        let (x, y) = seeded_sets(seed);
        // |X × Y| = |X| · |Y|
        let prod = product(&x, &y).unwrap();
        assert_eq!(prod.apex.len(), x.len() * y.len(), "product at seed {seed}");
        // Pullback over the point ≅ product, structurally.
        let pt = FinSet::point();
        let fx = SetFn::constant(&x, &pt, &ElemId::from("pt")).unwrap();
        let fy = SetFn::constant(&y, &pt, &ElemId::from("pt")).unwrap();
        let pb = pullback(&fx, &fy).unwrap();
        assert_eq!(pb.apex.len(), prod.apex.len(), "pullback at seed {seed}");
        for fam in pb.apex.elements() {
            let pair = (
                pb.legs[&ObjId::from("I1")].apply(fam),
                pb.legs[&ObjId::from("I2")].apply(fam),
            );
            assert!(
                prod.apex.elements().iter().any(|p| {
                    (
                        prod.legs[&ObjId::from("I1")].apply(p),
                        prod.legs[&ObjId::from("I2")].apply(p),
                    ) == pair
                }),
                "pullback element unmatched at seed {seed}"
            );
        }
        // |X + Y| = |X| + |Y|
        let sum = coproduct(&x, &y).unwrap();
        assert_eq!(sum.apex.len(), x.len() + y.len(), "sum at seed {seed}");
        // Equalizer against a constant is the preimage; coequalizer is the
        // quotient, checked against an independent partition oracle.
        let mut r = gen::rng(seed.wrapping_add(10_000));
        let xs = gen::random_set(&mut r, "S", 1, 4);
        let ys = gen::random_set(&mut r, "T", 1, 4);
        let f = random_fn_for_test(&mut r, &xs, &ys);
        let b = ys.elements()[0].clone();
        let g = SetFn::constant(&xs, &ys, &b).unwrap();
        let eq = equalizer(&f, &g).unwrap();
        let preimage: Vec<&ElemId> =
            xs.elements().iter().filter(|e| f.apply(e) == &b).collect();
        assert_eq!(eq.apex.len(), preimage.len(), "equalizer at seed {seed}");
        for fam in eq.apex.elements() {
            assert!(preimage.contains(&eq.legs[&ObjId::from("I2")].apply(fam)));
        }
        let g2 = random_fn_for_test(&mut r, &xs, &ys);
        let coeq = coequalizer(&f, &g2).unwrap();
        let oracle = quotient_oracle(&xs, &ys, &f, &g2);
        assert_eq!(coeq.apex.len(), oracle.len(), "coequalizer at seed {seed}");
        // Classes agree as partitions of Y.
        let leg = &coeq.legs[&ObjId::from("I2")];
        for class in &oracle {
            let images: Vec<&ElemId> = class.iter().map(|e| leg.apply(e)).collect();
            assert!(images.windows(2).all(|w| w[0] == w[1]), "split class at seed {seed}");
        }
    }
    println!("ACCEPTANCE figure_reproduction: PASS (5 fixtures + 100 random instances each)");
}

fn random_fn_for_test(r: &mut rand_chacha::ChaCha8Rng, src: &FinSet, dst: &FinSet) -> SetFn {
    use rand::Rng;
    let table = src
        .elements()
        .iter()
        .map(|e| (e.clone(), dst.elements()[r.gen_range(0..dst.len())].clone()))
        .collect();
    SetFn::new(src.clone(), dst.clone(), table).unwrap()
}

/// Independent quotient oracle: partition refinement by repeated merging,
/// no union-find shared with the engine.
fn quotient_oracle(x: &FinSet, y: &FinSet, f: &SetFn, g: &SetFn) -> Vec<Vec<ElemId>> {
    let mut classes: Vec<Vec<ElemId>> = y.elements().iter().map(|e| vec![e.clone()]).collect();
    loop {
        let mut merged = false;
        for e in x.elements() {
            let (a, b) = (f.apply(e), g.apply(e));
            let ia = classes.iter().position(|c| c.contains(a)).unwrap();
            let ib = classes.iter().position(|c| c.contains(b)).unwrap();
            if ia != ib {
                let moved = classes.remove(ia.max(ib));
                classes[ia.min(ib)].extend(moved);
                merged = true;
            }
        }
        if !merged {
            return classes;
        }
    }
}

/// Universal property: holds for every engine result on probes of size 1
/// and 2, and fails for each of 100 seeded single-entry leg mutations.
#[test]
fn acceptance_universal_property() {
    let caps = caps();
    let probes = [FinSet::of("W1", &["w"]), FinSet::of("W2", &["w1", "w2"])];
    let mut positive = 0;
    for seed in 0..60u64 {
        let d = gen::random_contravariant_diagram(seed);
        let result = lim_matching_families_with_caps(&d, &caps).unwrap();
        let report = verify_universal_property(&result, &d, &probes).unwrap();
        assert!(report.holds, "limit universal property fails at seed {seed}");
        positive += 1;
    }
    // Colimits from the covariant coequalizer/coproduct constructors.
    for seed in 0..40u64 {
        let mut r = gen::rng(seed.wrapping_add(77));
        let x = gen::random_set(&mut r, "X", 1, 3);
        let y = gen::random_set(&mut r, "Y", 1, 3);
        let f = random_fn_for_test(&mut r, &x, &y);
        let g = random_fn_for_test(&mut r, &x, &y);
        let result = coequalizer(&f, &g).unwrap();
        let d = coequalizer_diagram(&f, &g);
        let report = verify_universal_property(&result, &d, &probes).unwrap();
        assert!(report.holds, "colimit universal property fails at seed {seed}");
        positive += 1;
    }
    // 100 seeded single-entry mutations, all detected.
    let mut detected = 0;
    let mut seed = 0u64;
    while detected < 100 {
        seed += 1;
        let d = gen::random_contravariant_diagram(seed.wrapping_mul(31).wrapping_add(7));
        let result = lim_matching_families_with_caps(&d, &caps).unwrap();
        match mutate_one_leg_entry(&result, seed) {
            None => continue,
            Some(mutated) => {
                let report = verify_universal_property(&mutated, &d, &probes).unwrap();
                assert!(!report.holds, "mutation not detected at seed {seed}");
                detected += 1;
            }
        }
    }
    println!(
        "ACCEPTANCE universal_property: PASS ({positive} positive checks, {detected}/100 mutations detected)"
    );
}

fn coequalizer_diagram(f: &SetFn, g: &SetFn) -> catlim::finset::SetDiagram {
    use catlim::fincat::{build_shape, MorId, ShapeKind};
    catlim::finset::SetDiagram::new(
        build_shape(&ShapeKind::ParallelPair),
        Variance::Covariant,
        [
            (ObjId::from("I1"), f.source().clone()),
            (ObjId::from("I2"), f.target().clone()),
        ]
        .into(),
        [(MorId::from("m1"), f.clone()), (MorId::from("m2"), g.clone())].into(),
    )
    .unwrap()
}

fn mutate_one_leg_entry(
    result: &catlim::finset::LimitResult,
    seed: u64,
) -> Option<catlim::finset::LimitResult> {
    use rand::Rng;
    let mut r = gen::rng(seed.wrapping_add(0xabcd));
    let legs: Vec<&ObjId> = result.legs.keys().collect();
    if legs.is_empty() {
        return None;
    }
    let leg_key = legs[r.gen_range(0..legs.len())].clone();
    let leg = &result.legs[&leg_key];
    if leg.source().is_empty() || leg.target().len() < 2 {
        return None;
    }
    let victim = leg.source().elements()[r.gen_range(0..leg.source().len())].clone();
    let old = leg.apply(&victim).clone();
    let alternatives: Vec<&ElemId> =
        leg.target().elements().iter().filter(|e| **e != old).collect();
    let replacement = alternatives[r.gen_range(0..alternatives.len())].clone();
    let mut table = leg.table().clone();
    table.insert(victim, replacement);
    let mut mutated = result.clone();
    mutated.legs.insert(
        leg_key,
        SetFn::new(leg.source().clone(), leg.target().clone(), table).unwrap(),
    );
    Some(mutated)
}

/// Lemma suite: every checker reports holds (or not-applicable where the
/// representability hypothesis fails) across its generated instances.
#[test]
fn acceptance_lemma_suite() {
    let caps = caps();
    let laws = [
        "hom-lim",
        "indlim-hom",
        "prolim-hom",
        "otherside-hom",
        "adjunction",
        "adjoint-preserves-lim",
        "representable-colim",
        "extension-representables",
        "yoneda-preserves-lim",
        "preservation",
        "reflection",
    ];
    let mut total = 0;
    let mut holds = 0;
    let mut not_applicable = 0;
    for law in laws {
        let reports = suites::run_generated(law, 0, 3, &caps).unwrap();
        assert!(!reports.is_empty(), "law {law} generated no instances");
        let mut law_holds = 0;
        for r in &reports {
            total += 1;
            match r.verdict {
                Verdict::Holds => {
                    holds += 1;
                    law_holds += 1;
                }
                Verdict::NotApplicable => not_applicable += 1,
                Verdict::Fails => panic!("law {law} fails on {}", r.instance),
            }
        }
        assert!(law_holds > 0, "law {law} never held");
    }
    println!(
        "ACCEPTANCE lemma_suite: PASS ({total} instances: {holds} hold, {not_applicable} not applicable, 0 failures)"
    );
}

/// Decomposition golden test: the CLI reproduces the committed tree byte
/// for byte at seed 0, in both text and DOT forms.
#[test]
fn acceptance_decomposition_golden() {
    let kb_path = fixture("dp_kb.json");
    let kb_arg = kb_path.to_str().unwrap();
    let (code, out) =
        run_cli(&["deconcept", kb_arg, "dynamic_programming", "--seed", "0"]);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(out).unwrap(), golden("dp_tree.txt"));
    let (code, dot) =
        run_cli(&["deconcept", kb_arg, "dynamic_programming", "--dot", "--seed", "0"]);
    assert_eq!(code, 0);
    assert_eq!(String::from_utf8(dot).unwrap(), golden("dp_tree.dot"));
    println!("ACCEPTANCE decomposition_golden: PASS (text and DOT byte-identical)");
}

/// Main-criterion executable check: the consistent fixture passes the
/// verifier and a zero-loss exhaustive task sweep at every non-leaf node;
/// 50 seeded single-edit corruptions are each detected and attributed to
/// exactly the corrupted node.
#[test]
fn acceptance_theorem_executable_check() {
    let caps = caps();
    let kb = catlim::fixtures::dp_kb();
    assert!(precisely_understands(&kb, "dynamic_programming", &TableExtractor, &caps).unwrap());
    // Exhaustive sweep over the registered task universe.
    let tree = catlim::concept::deconcept(
        &kb,
        "dynamic_programming",
        &TableExtractor,
        DEFAULT_MAX_DEPTH,
    )
    .unwrap();
    let mut sweep = 0;
    for (node, expr) in tree.expanded_nodes() {
        for task in applicable_tasks(&kb, node).unwrap() {
            let on_concept = apply_task(&kb, &task, TaskTarget::Concept(node), &caps).unwrap();
            let on_expr = apply_task(&kb, &task, TaskTarget::Expression(expr), &caps).unwrap();
            assert_eq!(
                similarity_d(&on_concept, &on_expr),
                0.0,
                "loss at node {node}, task {}",
                task.describe()
            );
            sweep += 1;
        }
    }
    // 50 corruptions: the verifier must name exactly the corrupted node.
    let non_leaves = ["dynamic_programming", "sub_problem_recursion"];
    let verifier = BruteForceVerifier { caps };
    for seed in 0..50u64 {
        let victim = non_leaves[(seed % 2) as usize];
        let corrupted = gen::corrupt_expression(&kb, victim, seed, &caps).unwrap();
        match verify_with_verifier(&corrupted, "dynamic_programming", &TableExtractor, &verifier)
            .unwrap()
        {
            VerifierVerification::Pass => panic!("corruption at seed {seed} went undetected"),
            VerifierVerification::Fail { concept } => {
                assert_eq!(concept, victim, "wrong accusation at seed {seed}");
            }
        }
    }
    println!(
        "ACCEPTANCE theorem_executable_check: PASS ({sweep} task sweeps at loss 0, 50/50 corruptions named correctly)"
    );
}

/// Task-based and verifier-based verification agree on every concept of 50
/// seeded knowledge bases.
#[test]
fn acceptance_task_verifier_consistency() {
    let caps = caps();
    let verifier = BruteForceVerifier { caps };
    let mut concepts_checked = 0;
    for seed in 0..50u64 {
        let generated = gen::random_concept_kb(seed, seed % 2 == 1).unwrap();
        for concept in ["goal", "family"] {
            let by_tasks = matches!(
                verify_with_tasks(&generated.kb, concept, &TableExtractor, seed, 50, 0.5, &caps)
                    .unwrap(),
                TaskVerification::Pass
            );
            let by_verifier = matches!(
                verify_with_verifier(&generated.kb, concept, &TableExtractor, &verifier).unwrap(),
                VerifierVerification::Pass
            );
            assert_eq!(
                by_tasks, by_verifier,
                "seed {seed}, concept {concept}: tasks={by_tasks} verifier={by_verifier}"
            );
            assert_eq!(
                by_verifier, generated.truth[concept],
                "seed {seed}, concept {concept}: ground truth mismatch"
            );
            concepts_checked += 1;
        }
    }
    println!(
        "ACCEPTANCE task_verifier_consistency: PASS ({concepts_checked} concept verdicts agree)"
    );
}

/// Learner recovery: on 20 seeded plant-and-recover instances the search
/// finds a verifier-valid expression and the planted expression reappears
/// among the zero-loss candidates; 20 supervised repairs restore passing
/// knowledge bases.
#[test]
fn acceptance_learner_recovery() {
    let caps = caps();
    let config = LearnConfig { max_nodes: 4, m: 40, seed: 0 };
    for seed in 0..20u64 {
        let generated = gen::random_concept_kb(seed, false).unwrap();
        let concept = if seed % 2 == 0 { "goal" } else { "family" };
        let planted = &generated.planted[concept];
        match learn_concept(&generated.kb, concept, &config, &caps).unwrap() {
            LearnOutcome::Found(expr) => {
                assert!(
                    limit_verifier(&generated.kb, &expr, concept, &caps).unwrap(),
                    "seed {seed}: learned expression is not a valid decomposition"
                );
            }
            LearnOutcome::Exhausted { .. } => panic!("seed {seed}: learner found nothing"),
        }
        let all = learn_concept_all(&generated.kb, concept, &config, &caps).unwrap();
        assert!(
            all.iter().any(|e| expressions_equivalent(e, planted)),
            "seed {seed}: planted expression not recovered among {} candidates",
            all.len()
        );
    }
    for seed in 0..20u64 {
        let generated = gen::random_concept_kb(seed, true).unwrap();
        let victim = generated.corrupted.clone().unwrap();
        assert!(!precisely_understands(&generated.kb, &victim, &TableExtractor, &caps).unwrap());
        let repaired =
            supervised_repair(&generated.kb, &victim, &generated.planted[&victim], &caps).unwrap();
        assert!(
            precisely_understands(&repaired, &victim, &TableExtractor, &caps).unwrap(),
            "seed {seed}: repair did not restore {victim}"
        );
    }
    println!(
        "ACCEPTANCE learner_recovery: PASS (20/20 plant-and-recover, 20/20 supervised repairs)"
    );
}

/// Determinism: every command produces byte-identical output across three
/// runs at a fixed seed.
#[test]
fn acceptance_cli_determinism() {
    let dp = fixture("dp_kb.json");
    let dpc = fixture("dp_kb_corrupted.json");
    let expr = fixture("dp_expression.json");
    let preimage = fixture("figure_preimage.json");
    let quotient = fixture("figure_quotient.json");
    let small_manifest = fixture("laws_small.json");
    std::fs::write(
        &small_manifest,
        r#"{ "entries": [
            { "law": "dual-definition", "instance": { "generated": { "seed": 1, "size": 3 } } },
            { "law": "hom-lim", "instance": { "generated": { "seed": 0, "size": 1 } } }
        ] }"#,
    )
    .unwrap();
    let dp_s = dp.to_str().unwrap();
    let dpc_s = dpc.to_str().unwrap();
    let commands: Vec<Vec<&str>> = vec![
        vec!["validate", dp_s],
        vec!["limit", preimage.to_str().unwrap(), "--format", "structured"],
        vec!["colimit", quotient.to_str().unwrap(), "--format", "structured"],
        vec!["laws", small_manifest.to_str().unwrap(), "--seed", "0"],
        vec!["deconcept", dp_s, "dynamic_programming", "--format", "structured"],
        vec!["deconcept", dp_s, "dynamic_programming", "--dot"],
        vec!["verify", dp_s, "dynamic_programming", "--mode", "verifier", "--seed", "0"],
        vec!["verify", dp_s, "dynamic_programming", "--mode", "tasks", "--m", "20", "--seed", "3"],
        vec!["verify", dpc_s, "dynamic_programming", "--mode", "verifier"],
        vec!["learn", dp_s, "for_loop", "--k", "1", "--m", "10", "--seed", "0"],
        vec![
            "learn",
            dpc_s,
            "dynamic_programming",
            "--supervised",
            expr.to_str().unwrap(),
            "--format",
            "structured",
        ],
        vec!["analogy", dp_s, "for_loop", "while_loop"],
    ];
    let mut checked = 0;
    for args in &commands {
        let first = run_cli(args);
        for _ in 0..2 {
            let again = run_cli(args);
            assert_eq!(first.0, again.0, "exit code drift for {args:?}");
            assert_eq!(first.1, again.1, "output drift for {args:?}");
        }
        checked += 1;
    }
    std::fs::remove_file(&small_manifest).ok();
    println!("ACCEPTANCE cli_determinism: PASS ({checked} commands, 3 identical runs each)");
}
