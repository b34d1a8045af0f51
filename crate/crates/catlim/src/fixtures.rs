//! Built-in knowledge bases and diagrams used by the examples, the test
//! suite and the command-line fixtures.
//!
//! The semantic categories here are carved out of the category of finite
//! sets: objects carry explicit element lists and every morphism is an
//! actual function, with the morphism set closed under composition by
//! [`function_category`]. Associativity then holds for free, and the law
//! validator re-checks it anyway in tests.
//!
//! The knowledge bases are built so that their expressions genuinely pass
//! the brute-force limit verifier: the projective entries sit on split
//! equalizers and the inductive ones on split coequalizers, the textbook
//! absolute (co)limits, so the lifted limits stay representable.

use std::collections::BTreeMap;

use crate::concept::{ConceptEntry, ConceptKB, LimitExpression, LimitOp, TaskUniverse};
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, Morphism, ObjId, ShapeKind};
use crate::finset::{ElemId, FinSet, SetFn, Variance};
use crate::presheaf::{yoneda_k, SetPresheaf};

/// A generating function for [`function_category`].
#[derive(Clone, Debug)]
pub struct GenFn {
    pub name: String,
    pub src: String,
    pub dst: String,
    pub table: BTreeMap<String, String>,
}

impl GenFn {
    pub fn new(name: &str, src: &str, dst: &str, pairs: &[(&str, &str)]) -> GenFn {
        GenFn {
            name: name.to_string(),
            src: src.to_string(),
            dst: dst.to_string(),
            table: pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect(),
        }
    }
}

/// Closes a set of concrete functions between named carriers under
/// composition and returns the resulting finite category.
///
/// Composites that coincide with an existing function are identified with
/// it; genuinely new composites are named `g.f` after the first pair that
/// produced them, in a deterministic round order.
pub fn function_category(
    name: &str,
    carriers: &[(&str, &[&str])],
    generators: &[GenFn],
) -> Result<FinCategory> {
    #[derive(Clone, PartialEq, Eq)]
    struct Fun {
        src: String,
        dst: String,
        table: BTreeMap<String, String>,
    }
    let carrier: BTreeMap<String, Vec<String>> = carriers
        .iter()
        .map(|(o, es)| (o.to_string(), es.iter().map(|e| e.to_string()).collect()))
        .collect();
    let mut funs: BTreeMap<String, Fun> = BTreeMap::new();
    for (obj, elems) in &carrier {
        funs.insert(
            format!("id_{obj}"),
            Fun {
                src: obj.clone(),
                dst: obj.clone(),
                table: elems.iter().map(|e| (e.clone(), e.clone())).collect(),
            },
        );
    }
    for g in generators {
        if !carrier.contains_key(&g.src) || !carrier.contains_key(&g.dst) {
            return Err(Error::structural(format!("generator {} has unknown carrier", g.name)));
        }
        for e in &carrier[&g.src] {
            let image = g
                .table
                .get(e)
                .ok_or_else(|| Error::structural(format!("generator {} misses {e}", g.name)))?;
            if !carrier[&g.dst].contains(image) {
                return Err(Error::structural(format!(
                    "generator {} maps {e} outside its target",
                    g.name
                )));
            }
        }
        funs.insert(
            g.name.clone(),
            Fun { src: g.src.clone(), dst: g.dst.clone(), table: g.table.clone() },
        );
    }
    let mut composition: BTreeMap<(MorId, MorId), MorId> = BTreeMap::new();
    // Round-based closure: process pairs in sorted name order; repeat until
    // no new function appears.
    loop {
        let names: Vec<String> = funs.keys().cloned().collect();
        let mut added = false;
        for gname in &names {
            for fname in &names {
                let (g, f) = (&funs[gname], &funs[fname]);
                if f.dst != g.src {
                    continue;
                }
                let key = (MorId(gname.clone()), MorId(fname.clone()));
                if composition.contains_key(&key) {
                    continue;
                }
                let table: BTreeMap<String, String> =
                    f.table.iter().map(|(a, b)| (a.clone(), g.table[b].clone())).collect();
                let composite = Fun { src: f.src.clone(), dst: g.dst.clone(), table };
                let existing = funs.iter().find(|(_, h)| **h == composite).map(|(n, _)| n.clone());
                let result_name = match existing {
                    Some(n) => n,
                    None => {
                        let fresh = format!("{gname}.{fname}");
                        funs.insert(fresh.clone(), composite);
                        added = true;
                        fresh
                    }
                };
                composition.insert(key, MorId(result_name));
            }
        }
        if !added && {
            // All composable pairs tabulated?
            let mut complete = true;
            'outer: for (gname, g) in &funs {
                for (fname, f) in &funs {
                    if f.dst == g.src
                        && !composition.contains_key(&(MorId(gname.clone()), MorId(fname.clone())))
                    {
                        complete = false;
                        break 'outer;
                    }
                }
            }
            complete
        } {
            break;
        }
    }
    let objects: Vec<ObjId> = carrier.keys().map(|o| ObjId(o.clone())).collect();
    let morphisms: Vec<Morphism> = funs
        .iter()
        .map(|(n, f)| Morphism {
            id: MorId(n.clone()),
            src: ObjId(f.src.clone()),
            dst: ObjId(f.dst.clone()),
        })
        .collect();
    let identities: BTreeMap<ObjId, MorId> = carrier
        .keys()
        .map(|o| (ObjId(o.clone()), MorId(format!("id_{o}"))))
        .collect();
    FinCategory::new(name, objects, morphisms, identities, composition)
}

/// The carrier sets of a function category built by [`function_category`],
/// reconstructed as finite sets for building Set-valued functors.
pub fn carrier_set(id: &str, elems: &[&str]) -> FinSet {
    FinSet::new(id, elems.iter().map(|e| ElemId::from(*e)).collect()).expect("distinct carriers")
}

/// The dynamic-programming knowledge base.
///
/// Narrative: `dynamic_programming` is defined projectively as the part of
/// `sub_problem_recursion` whose direct and memoized evaluations agree on
/// `optimal_state`; `sub_problem_recursion` is in turn presented
/// inductively, gluing `recursion_cases` along their normalized
/// `loop_patterns`. `for_loop` and `while_loop` carry parallel point-shape
/// definitions used by the analogy examples.
pub fn dp_category() -> FinCategory {
    let carriers: &[(&str, &[&str])] = &[
        ("dynamic_programming", &["dp1"]),
        ("sub_problem_recursion", &["r1", "r2"]),
        ("optimal_state", &["s1", "s2", "s3"]),
        ("recursion_cases", &["c1", "c2", "c3"]),
        ("loop_patterns", &["a1", "a2", "a3"]),
        ("for_loop", &["fl1"]),
        ("bounded_iteration", &["bi1"]),
        ("while_loop", &["wl1"]),
        ("condition_iteration", &["ci1"]),
    ];
    let generators = vec![
        // Split equalizer: direct_eval and memo_eval agree exactly on the
        // image of embed_base.
        GenFn::new("direct_eval", "sub_problem_recursion", "optimal_state", &[("r1", "s1"), ("r2", "s2")]),
        GenFn::new("memo_eval", "sub_problem_recursion", "optimal_state", &[("r1", "s1"), ("r2", "s3")]),
        GenFn::new("embed_base", "dynamic_programming", "sub_problem_recursion", &[("dp1", "r1")]),
        GenFn::new("classify", "sub_problem_recursion", "dynamic_programming", &[("r1", "dp1"), ("r2", "dp1")]),
        GenFn::new("select_case", "optimal_state", "sub_problem_recursion", &[("s1", "r1"), ("s2", "r2"), ("s3", "r1")]),
        // Split coequalizer: loop patterns glued along case normalization.
        GenFn::new("run_case", "recursion_cases", "loop_patterns", &[("c1", "a1"), ("c2", "a2"), ("c3", "a3")]),
        GenFn::new("normalize_case", "recursion_cases", "loop_patterns", &[("c1", "a1"), ("c2", "a1"), ("c3", "a3")]),
        GenFn::new("classify_pattern", "loop_patterns", "sub_problem_recursion", &[("a1", "r1"), ("a2", "r1"), ("a3", "r2")]),
        GenFn::new("canonical_pattern", "sub_problem_recursion", "loop_patterns", &[("r1", "a1"), ("r2", "a3")]),
        GenFn::new("case_of", "loop_patterns", "recursion_cases", &[("a1", "c1"), ("a2", "c2"), ("a3", "c3")]),
        // Isomorphic definitional twins for the loop concepts.
        GenFn::new("as_bounded", "for_loop", "bounded_iteration", &[("fl1", "bi1")]),
        GenFn::new("as_for", "bounded_iteration", "for_loop", &[("bi1", "fl1")]),
        GenFn::new("as_conditional", "while_loop", "condition_iteration", &[("wl1", "ci1")]),
        GenFn::new("as_while", "condition_iteration", "while_loop", &[("ci1", "wl1")]),
    ];
    function_category("dp_semantics", carriers, &generators).expect("fixture carriers are sound")
}

fn basic(name: &str, trusted: bool) -> ConceptEntry {
    ConceptEntry { name: name.to_string(), expressions: Vec::new(), trusted_leaf: trusted }
}

fn pp_expression(op: LimitOp, i1: &str, i2: &str, m1: &str, m2: &str) -> LimitExpression {
    LimitExpression {
        operator: op,
        shape: ShapeKind::ParallelPair,
        nodes: [
            (ObjId::from("I1"), i1.to_string()),
            (ObjId::from("I2"), i2.to_string()),
        ]
        .into(),
        edges: [
            (MorId::from("m1"), MorId::from(m1)),
            (MorId::from("m2"), MorId::from(m2)),
        ]
        .into(),
    }
}

fn point_expression(op: LimitOp, node: &str) -> LimitExpression {
    LimitExpression {
        operator: op,
        shape: ShapeKind::Discrete(1),
        nodes: [(ObjId::from("I1"), node.to_string())].into(),
        edges: BTreeMap::new(),
    }
}

/// The dynamic-programming fixture knowledge base. Every expression passes
/// the brute-force verifier; the committed golden decomposition tree is the
/// two-level expansion of `dynamic_programming`.
pub fn dp_kb() -> ConceptKB {
    let cat = dp_category();
    let concepts = vec![
        ConceptEntry {
            name: "dynamic_programming".to_string(),
            expressions: vec![pp_expression(
                LimitOp::Projective,
                "optimal_state",
                "sub_problem_recursion",
                "direct_eval",
                "memo_eval",
            )],
            trusted_leaf: false,
        },
        ConceptEntry {
            name: "sub_problem_recursion".to_string(),
            expressions: vec![pp_expression(
                LimitOp::Inductive,
                "recursion_cases",
                "loop_patterns",
                "run_case",
                "normalize_case",
            )],
            trusted_leaf: false,
        },
        basic("optimal_state", true),
        basic("recursion_cases", true),
        basic("loop_patterns", true),
        ConceptEntry {
            name: "for_loop".to_string(),
            expressions: vec![point_expression(LimitOp::Projective, "bounded_iteration")],
            trusted_leaf: false,
        },
        ConceptEntry {
            name: "while_loop".to_string(),
            expressions: vec![point_expression(LimitOp::Projective, "condition_iteration")],
            trusted_leaf: false,
        },
        basic("bounded_iteration", true),
        basic("condition_iteration", true),
    ];
    let functors: BTreeMap<String, SetPresheaf> = [
        (
            "traces".to_string(),
            yoneda_k(&cat, &ObjId::from("sub_problem_recursion")).expect("object exists"),
        ),
        (
            "unit".to_string(),
            SetPresheaf::constant_point(&cat, Variance::Covariant),
        ),
    ]
    .into();
    let task_universe = TaskUniverse { probes: cat.objects().to_vec(), functors };
    ConceptKB::new(cat, concepts, BTreeMap::new(), task_universe).expect("fixture is well formed")
}

/// A small knowledge base around `wall_clock`, defined projectively as a
/// clock-shaped thing hanging on a wall; `mountable_clock` is its
/// isomorphic definitional core.
pub fn wall_clock_kb() -> ConceptKB {
    let carriers: &[(&str, &[&str])] = &[
        ("wall", &["w1"]),
        ("clock", &["k1"]),
        ("wall_clock", &["wk1"]),
        ("mountable_clock", &["mc1"]),
        ("boxed_clock", &["bc1"]),
    ];
    let generators = vec![
        GenFn::new("is_clock", "mountable_clock", "clock", &[("mc1", "k1")]),
        GenFn::new("hangs_on", "mountable_clock", "wall", &[("mc1", "w1")]),
        GenFn::new("as_mountable", "wall_clock", "mountable_clock", &[("wk1", "mc1")]),
        GenFn::new("as_wall_clock", "mountable_clock", "wall_clock", &[("mc1", "wk1")]),
        // A decoy relating to both clock and wall without being a
        // wall clock: corrupting the definitional core to it must fail.
        GenFn::new("contains_clock", "boxed_clock", "clock", &[("bc1", "k1")]),
        GenFn::new("beside_wall", "boxed_clock", "wall", &[("bc1", "w1")]),
    ];
    let cat = function_category("clock_semantics", carriers, &generators)
        .expect("fixture carriers are sound");
    let expression = LimitExpression {
        operator: LimitOp::Projective,
        shape: ShapeKind::Cospan,
        nodes: [
            (ObjId::from("I1"), "clock".to_string()),
            (ObjId::from("I2"), "wall".to_string()),
            (ObjId::from("I3"), "mountable_clock".to_string()),
        ]
        .into(),
        edges: [
            (MorId::from("m1"), MorId::from("is_clock")),
            (MorId::from("m2"), MorId::from("hangs_on")),
        ]
        .into(),
    };
    let concepts = vec![
        ConceptEntry {
            name: "wall_clock".to_string(),
            expressions: vec![expression],
            trusted_leaf: false,
        },
        basic("wall", true),
        basic("clock", true),
        basic("mountable_clock", true),
        basic("boxed_clock", true),
    ];
    let functors: BTreeMap<String, SetPresheaf> = [(
        "unit".to_string(),
        SetPresheaf::constant_point(&cat, Variance::Covariant),
    )]
    .into();
    let task_universe = TaskUniverse { probes: cat.objects().to_vec(), functors };
    ConceptKB::new(cat, concepts, BTreeMap::new(), task_universe).expect("fixture is well formed")
}

/// The four figure diagrams: sets and functions realizing the product,
/// pullback-over-point, preimage and quotient computations.
pub struct FigureFixtures {
    pub x: FinSet,
    pub y: FinSet,
    pub f: SetFn,
    pub g_const: SetFn,
}

pub fn figure_fixtures() -> FigureFixtures {
    let x = FinSet::of("X", &["1", "2", "3"]);
    let y = FinSet::of("Y", &["a", "b"]);
    let f = SetFn::of(&x, &y, &[("1", "a"), ("2", "b"), ("3", "b")]).expect("total");
    let g_const = SetFn::constant(&x, &y, &ElemId::from("b")).expect("element exists");
    FigureFixtures { x, y, f, g_const }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;
    use crate::concept::{
        deconcept, limit_verifier, precisely_understands, TableExtractor, DEFAULT_MAX_DEPTH,
    };

    #[test]
    fn function_closure_yields_valid_categories_within_caps() {
        let cat = dp_category();
        assert!(cat.validate().is_empty());
        assert!(cat.morphisms().len() <= 256, "closure has {} morphisms", cat.morphisms().len());
        let clock = wall_clock_kb();
        assert!(clock.category().validate().is_empty());
    }

    #[test]
    fn dp_expressions_pass_the_limit_verifier() {
        let kb = dp_kb();
        let caps = Caps::default();
        for name in ["dynamic_programming", "sub_problem_recursion", "for_loop", "while_loop"] {
            let expr = kb.concept(name).unwrap().expressions[0].clone();
            assert!(
                limit_verifier(&kb, &expr, name, &caps).unwrap(),
                "expression of {name} should verify"
            );
        }
    }

    #[test]
    fn dp_tree_is_the_expected_two_level_expansion() {
        let kb = dp_kb();
        let tree = deconcept(&kb, "dynamic_programming", &TableExtractor, DEFAULT_MAX_DEPTH)
            .unwrap();
        let rendered = tree.render_text();
        let expected = "dynamic_programming [pro parallel_pair]\n\
                        \x20 I1: optimal_state (basic)\n\
                        \x20 I2: sub_problem_recursion [ind parallel_pair]\n\
                        \x20   I1: recursion_cases (basic)\n\
                        \x20   I2: loop_patterns (basic)\n";
        assert_eq!(rendered, expected);
    }

    #[test]
    fn dp_root_is_precisely_understood() {
        let kb = dp_kb();
        assert!(precisely_understands(&kb, "dynamic_programming", &TableExtractor, &Caps::default())
            .unwrap());
    }

    #[test]
    fn wall_clock_verifies_and_breaks_under_node_corruption() {
        let kb = wall_clock_kb();
        let caps = Caps::default();
        let expr = kb.concept("wall_clock").unwrap().expressions[0].clone();
        assert!(limit_verifier(&kb, &expr, "wall_clock", &caps).unwrap());
        // Corrupt the definitional core to the decoy: a boxed clock also
        // relates to clock and wall, but nothing makes it a wall clock.
        let mut corrupted = expr.clone();
        corrupted.nodes.insert(ObjId::from("I3"), "boxed_clock".to_string());
        corrupted.edges.insert(MorId::from("m1"), MorId::from("contains_clock"));
        corrupted.edges.insert(MorId::from("m2"), MorId::from("beside_wall"));
        assert!(!limit_verifier(&kb, &corrupted, "wall_clock", &caps).unwrap());
    }
}
