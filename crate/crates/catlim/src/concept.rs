//! The concept layer: knowledge bases over a semantic category, limit
//! expressions, hierarchical decomposition, task-based and verifier-based
//! verification, a discrete expression-search learner, and diagram
//! analogies.
//!
//! A knowledge base names its concepts after objects of an explicit
//! semantic category (or ships a presheaf override for concepts with no
//! representing object). A concept's expression is a small diagram valued
//! in that category together with a limit operator; realizing the
//! expression lifts the diagram through the Yoneda embedding and computes
//! the corresponding presheaf-level limit. The brute-force verifier then
//! asks whether that presheaf is naturally isomorphic to the concept's own
//! avatar — never a cardinality shortcut.

use std::collections::BTreeMap;

use rand::Rng;
use serde::Serialize;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fincat::{build_shape, FinCategory, MorId, ObjId, ShapeKind};
use crate::finset::{
    colim, iso_sets, lim_matching_families_with_caps, FinSet, SetDiagram, Variance,
};
use crate::presheaf::{
    apply_functor_to_diagram, enumerate_nat_trans, hom_slots_diagram, ind_lim,
    naturally_isomorphic, pro_lim, yoneda, yoneda_extension, yoneda_extension_cov, CatDiagram,
    HomSide, SetPresheaf,
};

/// Which limit operator an expression uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitOp {
    /// "Learn by examples": the lifted colimit.
    Inductive,
    /// "Learn by definition": the lifted limit.
    Projective,
}

impl LimitOp {
    pub fn tag(self) -> &'static str {
        match self {
            LimitOp::Inductive => "ind",
            LimitOp::Projective => "pro",
        }
    }

    /// Diagram variance matching the operator.
    pub fn variance(self) -> Variance {
        match self {
            LimitOp::Inductive => Variance::Covariant,
            LimitOp::Projective => Variance::Contravariant,
        }
    }
}

/// A limit operator plus a diagram valued in the semantic category,
/// written with concept names at the nodes and relation names at the edges.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitExpression {
    pub operator: LimitOp,
    pub shape: ShapeKind,
    pub nodes: BTreeMap<ObjId, String>,
    pub edges: BTreeMap<MorId, MorId>,
}

impl LimitExpression {
    /// Short one-line rendering for reports and diagnostics.
    pub fn describe(&self) -> String {
        let nodes: Vec<String> =
            self.nodes.iter().map(|(i, c)| format!("{i}:{c}")).collect();
        let edges: Vec<String> =
            self.edges.iter().map(|(m, u)| format!("{m}:{u}")).collect();
        if edges.is_empty() {
            format!("{} {} [{}]", self.operator.tag(), self.shape.tag(), nodes.join(", "))
        } else {
            format!(
                "{} {} [{}] [{}]",
                self.operator.tag(),
                self.shape.tag(),
                nodes.join(", "),
                edges.join(", ")
            )
        }
    }
}

/// One named concept: an ordered list of candidate expressions (empty for
/// basic concepts) plus the explicit leaf-trust flag.
#[derive(Clone, Debug)]
pub struct ConceptEntry {
    pub name: String,
    pub expressions: Vec<LimitExpression>,
    pub trusted_leaf: bool,
}

/// The finite task universe registered with a knowledge base: hom probes
/// and Set-valued functors.
#[derive(Clone, Debug, Default)]
pub struct TaskUniverse {
    pub probes: Vec<ObjId>,
    pub functors: BTreeMap<String, SetPresheaf>,
}

/// A knowledge base: semantic category, concept entries, presheaf
/// overrides for non-representable concepts, and the task universe.
#[derive(Clone, Debug)]
pub struct ConceptKB {
    semantic_category: FinCategory,
    concepts: BTreeMap<String, ConceptEntry>,
    presheaf_overrides: BTreeMap<String, SetPresheaf>,
    task_universe: TaskUniverse,
}

impl ConceptKB {
    pub fn new(
        semantic_category: FinCategory,
        concepts: Vec<ConceptEntry>,
        presheaf_overrides: BTreeMap<String, SetPresheaf>,
        task_universe: TaskUniverse,
    ) -> Result<Self> {
        let violations = semantic_category.validate();
        if !violations.is_empty() {
            return Err(Error::invalid(format!(
                "semantic category breaks {} law(s); first: {}",
                violations.len(),
                violations[0]
            )));
        }
        let mut map = BTreeMap::new();
        for entry in concepts {
            if map.contains_key(&entry.name) {
                return Err(Error::structural(format!("duplicate concept {}", entry.name)));
            }
            map.insert(entry.name.clone(), entry);
        }
        for (name, p) in &presheaf_overrides {
            if !p.base().same_table(&semantic_category) {
                return Err(Error::invalid(format!(
                    "override for {name} lives over a different base"
                )));
            }
        }
        for probe in &task_universe.probes {
            if !semantic_category.has_object(probe) {
                return Err(Error::structural(format!("unknown probe object {probe}")));
            }
        }
        for (fname, f) in &task_universe.functors {
            if f.variance() != Variance::Covariant || !f.base().same_table(&semantic_category) {
                return Err(Error::invalid(format!(
                    "functor {fname} must be covariant over the semantic category"
                )));
            }
        }
        let kb = ConceptKB {
            semantic_category,
            concepts: map,
            presheaf_overrides,
            task_universe,
        };
        // Every concept must resolve to an object or an override, and every
        // expression must parse into a valid diagram.
        for (name, entry) in &kb.concepts {
            let obj = ObjId(name.clone());
            if !kb.semantic_category.has_object(&obj) && !kb.presheaf_overrides.contains_key(name) {
                return Err(Error::structural(format!(
                    "concept {name} is neither an object nor an override"
                )));
            }
            for expr in &entry.expressions {
                kb.expression_diagram(expr).map_err(|e| {
                    Error::invalid(format!("expression of {name} is malformed: {e}"))
                })?;
            }
        }
        Ok(kb)
    }

    pub fn category(&self) -> &FinCategory {
        &self.semantic_category
    }

    pub fn concept(&self, name: &str) -> Result<&ConceptEntry> {
        self.concepts
            .get(name)
            .ok_or_else(|| Error::structural(format!("unknown concept {name}")))
    }

    pub fn concepts(&self) -> impl Iterator<Item = &ConceptEntry> {
        self.concepts.values()
    }

    pub fn task_universe(&self) -> &TaskUniverse {
        &self.task_universe
    }

    pub fn override_of(&self, name: &str) -> Option<&SetPresheaf> {
        self.presheaf_overrides.get(name)
    }

    /// A copy of the knowledge base with one concept's expressions
    /// replaced; queries never mutate in place.
    pub fn with_expressions(
        &self,
        name: &str,
        expressions: Vec<LimitExpression>,
    ) -> Result<ConceptKB> {
        let mut kb = self.clone();
        let entry = kb
            .concepts
            .get_mut(name)
            .ok_or_else(|| Error::structural(format!("unknown concept {name}")))?;
        entry.expressions = expressions;
        for expr in &kb.concepts[name].expressions {
            kb.expression_diagram(expr)?;
        }
        Ok(kb)
    }

    /// The expression's diagram valued in the semantic category, with
    /// functor laws validated.
    pub fn expression_diagram(&self, expr: &LimitExpression) -> Result<CatDiagram> {
        let shape = build_shape(&expr.shape);
        let mut objects = BTreeMap::new();
        for o in shape.objects() {
            let concept = expr
                .nodes
                .get(o)
                .ok_or_else(|| Error::structural(format!("expression misses node {o}")))?;
            let obj = ObjId(concept.clone());
            if !self.semantic_category.has_object(&obj) {
                return Err(Error::structural(format!(
                    "expression node {concept} is not an object of the semantic category"
                )));
            }
            objects.insert(o.clone(), obj);
        }
        let mut morphisms = BTreeMap::new();
        for m in shape.morphisms() {
            if shape.is_identity(&m.id) {
                continue;
            }
            let rel = expr
                .edges
                .get(&m.id)
                .ok_or_else(|| Error::structural(format!("expression misses edge {}", m.id)))?;
            morphisms.insert(m.id.clone(), rel.clone());
        }
        CatDiagram::new(
            &self.semantic_category,
            shape,
            expr.operator.variance(),
            objects,
            morphisms,
        )
    }
}

/// The pluggable extraction interface: given a concept, produce one limit
/// expression or report that none is available.
pub trait LimitExtractor {
    fn extract(&self, kb: &ConceptKB, concept: &str) -> Result<Option<LimitExpression>>;
}

/// Table-backed extractor: deterministically the first listed expression.
pub struct TableExtractor;

impl LimitExtractor for TableExtractor {
    fn extract(&self, kb: &ConceptKB, concept: &str) -> Result<Option<LimitExpression>> {
        Ok(kb.concept(concept)?.expressions.first().cloned())
    }
}

/// Seed-randomized extractor over the same interface, for stress tests.
pub struct SeededExtractor(pub u64);

impl LimitExtractor for SeededExtractor {
    fn extract(&self, kb: &ConceptKB, concept: &str) -> Result<Option<LimitExpression>> {
        let entry = kb.concept(concept)?;
        if entry.expressions.is_empty() {
            return Ok(None);
        }
        // Derive a per-concept stream so extraction order is stable under
        // knowledge-base iteration order.
        let mut h: u64 = self.0;
        for b in concept.bytes() {
            h = h.wrapping_mul(0x100000001b3).wrapping_add(b as u64);
        }
        let idx = crate::gen::rng(h).gen_range(0..entry.expressions.len());
        Ok(Some(entry.expressions[idx].clone()))
    }
}

/// Convenience wrapper for the table-backed extractor.
pub fn extract_limit(kb: &ConceptKB, concept: &str) -> Result<Option<LimitExpression>> {
    TableExtractor.extract(kb, concept)
}

/// Realizes an expression as a presheaf: the diagram is lifted through the
/// Yoneda embedding matching its operator and the corresponding
/// presheaf-level limit is computed.
pub fn realize(kb: &ConceptKB, expr: &LimitExpression, caps: &Caps) -> Result<SetPresheaf> {
    let diagram = kb.expression_diagram(expr)?;
    match expr.operator {
        LimitOp::Inductive => ind_lim(&diagram, caps),
        LimitOp::Projective => pro_lim(&diagram, caps),
    }
}

/// The concept's avatar in the requested variance: a registered override
/// when present, otherwise the Yoneda image of its object.
pub fn concept_presheaf(kb: &ConceptKB, name: &str, want: Variance) -> Result<SetPresheaf> {
    kb.concept(name)?;
    if let Some(p) = kb.override_of(name) {
        if p.variance() != want {
            return Err(Error::invalid(format!(
                "override for {name} has the wrong variance for this use"
            )));
        }
        return Ok(p.clone());
    }
    yoneda(kb.category(), &ObjId(name.to_string()), want)
}

/// Why a decomposition node is a leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum LeafKind {
    /// No expression listed: a basic concept.
    Basic,
    /// The extractor declined although expressions exist.
    ExtractorNull,
    /// The concept already occurs among its ancestors.
    CycleRef,
}

/// A node of a decomposition tree.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompNode {
    pub concept: String,
    pub kind: DecompKind,
}

#[derive(Clone, Debug, PartialEq)]
pub enum DecompKind {
    Leaf(LeafKind),
    Expanded {
        expression: LimitExpression,
        /// Children keyed by shape object, in shape-object order.
        children: Vec<(ObjId, DecompNode)>,
    },
}

/// The output of recursive decomposition.
#[derive(Clone, Debug, PartialEq)]
pub struct DecompositionTree {
    pub root: DecompNode,
}

pub const DEFAULT_MAX_DEPTH: usize = 32;

/// Recursively expands a concept: a null extraction makes a leaf, anything
/// else recurses into every diagram node. A concept reappearing below
/// itself becomes a flagged cycle leaf rather than infinite recursion; one
/// extraction is performed per node and reused for its children.
pub fn deconcept(
    kb: &ConceptKB,
    concept: &str,
    extractor: &dyn LimitExtractor,
    max_depth: usize,
) -> Result<DecompositionTree> {
    let mut path = Vec::new();
    let root = deconcept_node(kb, concept, extractor, max_depth, &mut path)?;
    Ok(DecompositionTree { root })
}

fn deconcept_node(
    kb: &ConceptKB,
    concept: &str,
    extractor: &dyn LimitExtractor,
    max_depth: usize,
    path: &mut Vec<String>,
) -> Result<DecompNode> {
    if path.iter().any(|p| p == concept) {
        return Ok(DecompNode {
            concept: concept.to_string(),
            kind: DecompKind::Leaf(LeafKind::CycleRef),
        });
    }
    if path.len() >= max_depth {
        return Err(Error::capacity(format!(
            "decomposition exceeds depth {max_depth} along {} -> {concept}",
            path.join(" -> ")
        )));
    }
    let entry = kb.concept(concept)?;
    let extraction = extractor.extract(kb, concept)?;
    match extraction {
        None => {
            let kind = if entry.expressions.is_empty() {
                LeafKind::Basic
            } else {
                LeafKind::ExtractorNull
            };
            Ok(DecompNode { concept: concept.to_string(), kind: DecompKind::Leaf(kind) })
        }
        Some(expression) => {
            kb.expression_diagram(&expression)?;
            path.push(concept.to_string());
            let mut children = Vec::new();
            for (node_id, child_concept) in &expression.nodes {
                let child = deconcept_node(kb, child_concept, extractor, max_depth, path)?;
                children.push((node_id.clone(), child));
            }
            path.pop();
            Ok(DecompNode {
                concept: concept.to_string(),
                kind: DecompKind::Expanded { expression, children },
            })
        }
    }
}

impl DecompositionTree {
    /// Stable plain-text rendering, one node per line.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        render_node(&self.root, None, 0, &mut out);
        out
    }

    /// Deterministic DOT rendering: tree edges labeled with shape objects,
    /// dashed sibling edges labeled with shape morphisms and their
    /// semantic relations.
    pub fn render_dot(&self) -> String {
        let mut lines: Vec<String> = Vec::new();
        let mut edges: Vec<String> = Vec::new();
        collect_dot("n0", &self.root, &mut lines, &mut edges);
        let mut out = String::from("digraph decomposition {\n  rankdir=TB;\n");
        for l in lines {
            out.push_str("  ");
            out.push_str(&l);
            out.push('\n');
        }
        edges.sort();
        for e in edges {
            out.push_str("  ");
            out.push_str(&e);
            out.push('\n');
        }
        out.push_str("}\n");
        out
    }

    /// All expanded nodes in preorder, with their expressions.
    pub fn expanded_nodes(&self) -> Vec<(&str, &LimitExpression)> {
        let mut out = Vec::new();
        collect_expanded(&self.root, &mut out);
        out
    }
}

fn render_node(node: &DecompNode, slot: Option<&ObjId>, depth: usize, out: &mut String) {
    out.push_str(&"  ".repeat(depth));
    if let Some(slot) = slot {
        out.push_str(&format!("{slot}: "));
    }
    out.push_str(&node.concept);
    match &node.kind {
        DecompKind::Leaf(LeafKind::Basic) => out.push_str(" (basic)\n"),
        DecompKind::Leaf(LeafKind::ExtractorNull) => out.push_str(" (no extraction)\n"),
        DecompKind::Leaf(LeafKind::CycleRef) => out.push_str(" (cycle)\n"),
        DecompKind::Expanded { expression, children } => {
            out.push_str(&format!(
                " [{} {}]\n",
                expression.operator.tag(),
                expression.shape.tag()
            ));
            for (slot, child) in children {
                render_node(child, Some(slot), depth + 1, out);
            }
        }
    }
}

fn collect_dot(id: &str, node: &DecompNode, lines: &mut Vec<String>, edges: &mut Vec<String>) {
    let label = match &node.kind {
        DecompKind::Leaf(LeafKind::Basic) => format!("{}\\n(basic)", node.concept),
        DecompKind::Leaf(LeafKind::ExtractorNull) => format!("{}\\n(no extraction)", node.concept),
        DecompKind::Leaf(LeafKind::CycleRef) => format!("{}\\n(cycle)", node.concept),
        DecompKind::Expanded { expression, .. } => format!(
            "{}\\n[{} {}]",
            node.concept,
            expression.operator.tag(),
            expression.shape.tag()
        ),
    };
    lines.push(format!("\"{id}\" [label=\"{label}\"];"));
    if let DecompKind::Expanded { expression, children } = &node.kind {
        let child_id =
            |slot: &ObjId| -> String { format!("{id}/{slot}") };
        for (slot, child) in children {
            let cid = child_id(slot);
            edges.push(format!("\"{id}\" -> \"{cid}\" [label=\"{slot}\"];"));
            collect_dot(&cid, child, lines, edges);
        }
        let shape = build_shape(&expression.shape);
        for m in shape.morphisms() {
            if shape.is_identity(&m.id) {
                continue;
            }
            let rel = &expression.edges[&m.id];
            edges.push(format!(
                "\"{}\" -> \"{}\" [label=\"{}={rel}\", style=dashed];",
                child_id(&m.src),
                child_id(&m.dst),
                m.id
            ));
        }
    }
}

fn collect_expanded<'a>(node: &'a DecompNode, out: &mut Vec<(&'a str, &'a LimitExpression)>) {
    if let DecompKind::Expanded { expression, children } = &node.kind {
        out.push((&node.concept, expression));
        for (_, child) in children {
            collect_expanded(child, out);
        }
    }
}

/// Which side of the hom bifunctor a probe occupies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum HomTaskSide {
    /// `Hom(concept, probe)`.
    Domain,
    /// `Hom(probe, concept)`.
    Codomain,
}

/// A task drawn from the registered universe.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Task {
    Hom { side: HomTaskSide, probe: ObjId },
    Functor { name: String },
}

impl Task {
    pub fn describe(&self) -> String {
        match self {
            Task::Hom { side: HomTaskSide::Domain, probe } => format!("hom(·,{probe})"),
            Task::Hom { side: HomTaskSide::Codomain, probe } => format!("hom({probe},·)"),
            Task::Functor { name } => format!("functor {name}"),
        }
    }
}

/// What a task can be applied to.
#[derive(Clone, Copy, Debug)]
pub enum TaskTarget<'a> {
    Concept(&'a str),
    Expression(&'a LimitExpression),
}

/// Applies a task: on a concept, hom tasks enumerate transformations
/// against the probe's Yoneda image and functor tasks evaluate the Yoneda
/// extension at the concept's avatar; on an expression, the task is applied
/// to every node and the results are combined with the limit or colimit
/// matching the operator and the probe side.
pub fn apply_task(kb: &ConceptKB, task: &Task, target: TaskTarget, caps: &Caps) -> Result<FinSet> {
    match target {
        TaskTarget::Concept(name) => apply_task_to_concept(kb, task, name, caps),
        TaskTarget::Expression(expr) => apply_task_to_expression(kb, task, expr, caps),
    }
}

fn apply_task_to_concept(kb: &ConceptKB, task: &Task, name: &str, caps: &Caps) -> Result<FinSet> {
    match task {
        Task::Hom { side, probe } => {
            let (image, avatar) = match side {
                HomTaskSide::Codomain => (
                    yoneda(kb.category(), probe, Variance::Contravariant)?,
                    concept_presheaf(kb, name, Variance::Contravariant)?,
                ),
                HomTaskSide::Domain => (
                    yoneda(kb.category(), probe, Variance::Covariant)?,
                    concept_presheaf(kb, name, Variance::Covariant)?,
                ),
            };
            let transformations = enumerate_nat_trans(&image, &avatar, caps)?;
            FinSet::new(
                format!("{}({name})", task.describe()),
                transformations.iter().map(|t| t.encode()).collect(),
            )
        }
        Task::Functor { name: fname } => {
            let f = kb
                .task_universe
                .functors
                .get(fname)
                .ok_or_else(|| Error::structural(format!("unknown functor {fname}")))?;
            let value = match kb.override_of(name) {
                Some(p) if p.variance() == Variance::Covariant => {
                    yoneda_extension_cov(f, p, caps)?
                }
                Some(p) => yoneda_extension(f, p, caps)?,
                None => {
                    let avatar = concept_presheaf(kb, name, Variance::Contravariant)?;
                    yoneda_extension(f, &avatar, caps)?
                }
            };
            Ok(value.apex)
        }
    }
}

fn apply_task_to_expression(
    kb: &ConceptKB,
    task: &Task,
    expr: &LimitExpression,
    caps: &Caps,
) -> Result<FinSet> {
    let diagram = kb.expression_diagram(expr)?;
    let slots: SetDiagram = match task {
        Task::Hom { side, probe } => {
            let hom_side = match side {
                HomTaskSide::Domain => HomSide::NodesInDomain,
                HomTaskSide::Codomain => HomSide::NodesInCodomain,
            };
            hom_slots_diagram(&diagram, probe, hom_side)?
        }
        Task::Functor { name: fname } => {
            let f = kb
                .task_universe
                .functors
                .get(fname)
                .ok_or_else(|| Error::structural(format!("unknown functor {fname}")))?;
            apply_functor_to_diagram(f, &diagram)?
        }
    };
    let result = match slots.variance() {
        Variance::Contravariant => lim_matching_families_with_caps(&slots, caps)?,
        Variance::Covariant => colim(&slots)?,
    };
    Ok(result.apex)
}

/// The 0/1 indicator loss: zero exactly when the two sets are isomorphic.
pub fn similarity_d(a: &FinSet, b: &FinSet) -> f64 {
    if iso_sets(a, b).is_some() {
        0.0
    } else {
        1.0
    }
}

/// Graded size-overlap distance for diagnostics only, never for verdicts.
pub fn graded_similarity_d(a: &FinSet, b: &FinSet) -> f64 {
    if a.len() == b.len() {
        return 0.0;
    }
    let lo = a.len().min(b.len()) as f64;
    let hi = a.len().max(b.len()).max(1) as f64;
    1.0 - lo / hi
}

/// Deterministic uniform task sampler over the tasks applicable to a
/// concept.
pub struct TaskSampler {
    tasks: Vec<Task>,
    rng: rand_chacha::ChaCha8Rng,
}

impl TaskSampler {
    pub fn new(kb: &ConceptKB, concept: &str, seed: u64) -> Result<TaskSampler> {
        let tasks = applicable_tasks(kb, concept)?;
        if tasks.is_empty() {
            return Err(Error::invalid(format!("no applicable tasks for {concept}")));
        }
        Ok(TaskSampler { tasks, rng: crate::gen::rng(seed) })
    }

    pub fn next_task(&mut self) -> Task {
        let idx = self.rng.gen_range(0..self.tasks.len());
        self.tasks[idx].clone()
    }

    pub fn universe(&self) -> &[Task] {
        &self.tasks
    }
}

/// Every registered task that can be evaluated on the concept: override
/// concepts only support the hom side matching their variance.
pub fn applicable_tasks(kb: &ConceptKB, concept: &str) -> Result<Vec<Task>> {
    kb.concept(concept)?;
    let override_variance = kb.override_of(concept).map(|p| p.variance());
    let mut tasks = Vec::new();
    for probe in &kb.task_universe.probes {
        for side in [HomTaskSide::Codomain, HomTaskSide::Domain] {
            let ok = match (side, override_variance) {
                (_, None) => true,
                (HomTaskSide::Codomain, Some(Variance::Contravariant)) => true,
                (HomTaskSide::Domain, Some(Variance::Covariant)) => true,
                _ => false,
            };
            if ok {
                tasks.push(Task::Hom { side, probe: probe.clone() });
            }
        }
    }
    for fname in kb.task_universe.functors.keys() {
        tasks.push(Task::Functor { name: fname.clone() });
    }
    Ok(tasks)
}

/// Outcome of task-based verification.
#[derive(Clone, Debug, PartialEq)]
pub enum TaskVerification {
    Pass,
    Fail { task: Task, loss: f64 },
}

/// Task-sampled verification: extract once, then compare `T(concept)` with
/// `T(expression)` on `m` sampled tasks; any loss at or above `eps` fails.
/// A null extraction passes vacuously.
pub fn verify_with_tasks(
    kb: &ConceptKB,
    concept: &str,
    extractor: &dyn LimitExtractor,
    seed: u64,
    m: usize,
    eps: f64,
    caps: &Caps,
) -> Result<TaskVerification> {
    let expr = match extractor.extract(kb, concept)? {
        None => return Ok(TaskVerification::Pass),
        Some(e) => e,
    };
    let mut sampler = TaskSampler::new(kb, concept, seed)?;
    for _ in 0..m {
        let task = sampler.next_task();
        let on_concept = apply_task(kb, &task, TaskTarget::Concept(concept), caps)?;
        let on_expr = apply_task(kb, &task, TaskTarget::Expression(&expr), caps)?;
        let loss = similarity_d(&on_concept, &on_expr);
        if loss >= eps {
            return Ok(TaskVerification::Fail { task, loss });
        }
    }
    Ok(TaskVerification::Pass)
}

/// The brute-force limit verifier: 1 exactly when the realized expression
/// is naturally isomorphic to the concept's avatar. Search-budget
/// exhaustion propagates as an error, never as a verdict.
pub fn limit_verifier(
    kb: &ConceptKB,
    expr: &LimitExpression,
    concept: &str,
    caps: &Caps,
) -> Result<bool> {
    let realized = realize(kb, expr, caps)?;
    let avatar = concept_presheaf(kb, concept, realized.variance())?;
    naturally_isomorphic(&realized, &avatar, caps)
}

/// Pluggable verifier interface for the verifier-based algorithm.
pub trait LimitVerifier {
    fn verify(&self, kb: &ConceptKB, expr: &LimitExpression, concept: &str) -> Result<bool>;
}

/// The shipped brute-force verifier.
pub struct BruteForceVerifier {
    pub caps: Caps,
}

impl LimitVerifier for BruteForceVerifier {
    fn verify(&self, kb: &ConceptKB, expr: &LimitExpression, concept: &str) -> Result<bool> {
        limit_verifier(kb, expr, concept, &self.caps)
    }
}

/// Outcome of verifier-based verification.
#[derive(Clone, Debug, PartialEq)]
pub enum VerifierVerification {
    Pass,
    Fail { concept: String },
}

/// Decomposes the concept, then checks every non-leaf node's stored
/// expression with the verifier; the first zero verdict names its node.
/// Leaves are trusted by assumption.
pub fn verify_with_verifier(
    kb: &ConceptKB,
    concept: &str,
    extractor: &dyn LimitExtractor,
    verifier: &dyn LimitVerifier,
) -> Result<VerifierVerification> {
    let tree = deconcept(kb, concept, extractor, DEFAULT_MAX_DEPTH)?;
    for (node_concept, expr) in tree.expanded_nodes() {
        if !verifier.verify(kb, expr, node_concept)? {
            return Ok(VerifierVerification::Fail { concept: node_concept.to_string() });
        }
    }
    Ok(VerifierVerification::Pass)
}

/// The executable form of the main criterion: decomposition plus the
/// brute-force verifier at every non-leaf node.
pub fn precisely_understands(
    kb: &ConceptKB,
    concept: &str,
    extractor: &dyn LimitExtractor,
    caps: &Caps,
) -> Result<bool> {
    let verifier = BruteForceVerifier { caps: *caps };
    Ok(verify_with_verifier(kb, concept, extractor, &verifier)? == VerifierVerification::Pass)
}

/// Configuration for the discrete expression-search learner.
#[derive(Clone, Copy, Debug)]
pub struct LearnConfig {
    /// Maximum diagram nodes in a candidate expression.
    pub max_nodes: usize,
    /// Number of sampled tasks a candidate must pass with zero loss.
    pub m: usize,
    pub seed: u64,
}

impl Default for LearnConfig {
    fn default() -> Self {
        LearnConfig { max_nodes: 4, m: 20, seed: 0 }
    }
}

/// Outcome of a learning run.
#[derive(Clone, Debug)]
pub enum LearnOutcome {
    Found(LimitExpression),
    Exhausted { best_loss: f64, candidates: usize },
}

/// The shapes searched by the learner, ordered by size then name.
fn learner_shapes(max_nodes: usize) -> Vec<ShapeKind> {
    let all = [
        ShapeKind::Discrete(1),
        ShapeKind::Discrete(2),
        ShapeKind::ParallelPair,
        ShapeKind::Cospan,
        ShapeKind::Discrete(3),
        ShapeKind::Span,
        ShapeKind::Discrete(4),
    ];
    all.into_iter()
        .filter(|k| {
            let n = match k {
                ShapeKind::Discrete(n) => *n,
                ShapeKind::ParallelPair => 2,
                ShapeKind::Cospan | ShapeKind::Span => 3,
                ShapeKind::Custom(c) => c.objects().len(),
            };
            n <= max_nodes
        })
        .collect()
}

/// Deterministic enumeration of the hypothesis space: every well-formed
/// expression over the registered shapes with at most `max_nodes` nodes.
/// Self-referential expressions (mentioning the concept being defined) and
/// identity edges are excluded: the first is circular rather than a
/// decomposition, the second only ever pads a diagram or glues an
/// idempotent collapse, neither of which names a KB relation.
pub fn enumerate_expressions(
    kb: &ConceptKB,
    concept: &str,
    max_nodes: usize,
) -> Vec<LimitExpression> {
    let cat = kb.category();
    let objects: Vec<&ObjId> = cat
        .objects()
        .iter()
        .filter(|o| o.as_str() != concept)
        .collect();
    let mut out = Vec::new();
    for shape_kind in learner_shapes(max_nodes) {
        let shape = build_shape(&shape_kind);
        let shape_objs = shape.objects().to_vec();
        let non_id: Vec<_> = shape
            .morphisms()
            .iter()
            .filter(|m| !shape.is_identity(&m.id))
            .cloned()
            .collect();
        for operator in [LimitOp::Inductive, LimitOp::Projective] {
            // Odometer over node assignments.
            let mut idx = vec![0usize; shape_objs.len()];
            if objects.is_empty() {
                continue;
            }
            'nodes: loop {
                let nodes: BTreeMap<ObjId, String> = shape_objs
                    .iter()
                    .zip(&idx)
                    .map(|(o, &i)| (o.clone(), objects[i].as_str().to_string()))
                    .collect();
                // Edge candidates per shape morphism, already endpoint-valid.
                let mut edge_options: Vec<Vec<MorId>> = Vec::new();
                let mut feasible = true;
                for m in &non_id {
                    let (src_node, dst_node) = match operator.variance() {
                        Variance::Covariant => (&nodes[&m.src], &nodes[&m.dst]),
                        Variance::Contravariant => (&nodes[&m.dst], &nodes[&m.src]),
                    };
                    let options: Vec<MorId> = cat
                        .hom(&ObjId(src_node.clone()), &ObjId(dst_node.clone()))
                        .into_iter()
                        .filter(|f| !cat.is_identity(f))
                        .collect();
                    if options.is_empty() {
                        feasible = false;
                        break;
                    }
                    edge_options.push(options);
                }
                if feasible {
                    let mut pick = vec![0usize; non_id.len()];
                    'edges: loop {
                        let edges: BTreeMap<MorId, MorId> = non_id
                            .iter()
                            .enumerate()
                            .map(|(k, m)| (m.id.clone(), edge_options[k][pick[k]].clone()))
                            .collect();
                        let expr = LimitExpression {
                            operator,
                            shape: shape_kind.clone(),
                            nodes: nodes.clone(),
                            edges,
                        };
                        // Composition constraints on richer shapes are
                        // rechecked by the diagram constructor.
                        if kb.expression_diagram(&expr).is_ok() {
                            out.push(expr);
                        }
                        let mut k = pick.len();
                        loop {
                            if k == 0 {
                                break 'edges;
                            }
                            k -= 1;
                            pick[k] += 1;
                            if pick[k] < edge_options[k].len() {
                                break;
                            }
                            pick[k] = 0;
                        }
                        if pick.is_empty() {
                            break 'edges;
                        }
                    }
                }
                let mut k = idx.len();
                loop {
                    if k == 0 {
                        break 'nodes;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < objects.len() {
                        break;
                    }
                    idx[k] = 0;
                }
                if idx.is_empty() {
                    break 'nodes;
                }
            }
        }
    }
    out
}

/// Discrete substitute for gradient-based expression learning: sample `m`
/// tasks once, then scan the hypothesis space in order and return the first
/// expression with zero total loss.
pub fn learn_concept(
    kb: &ConceptKB,
    concept: &str,
    config: &LearnConfig,
    caps: &Caps,
) -> Result<LearnOutcome> {
    let mut sampler = TaskSampler::new(kb, concept, config.seed)?;
    let tasks: Vec<Task> = (0..config.m).map(|_| sampler.next_task()).collect();
    let mut concept_values: BTreeMap<String, FinSet> = BTreeMap::new();
    for task in &tasks {
        let key = task.describe();
        if !concept_values.contains_key(&key) {
            let value = apply_task(kb, task, TaskTarget::Concept(concept), caps)?;
            concept_values.insert(key, value);
        }
    }
    let candidates = enumerate_expressions(kb, concept, config.max_nodes);
    let total = candidates.len();
    let mut best_loss = f64::INFINITY;
    for expr in candidates {
        let mut loss = 0.0;
        for task in &tasks {
            let on_concept = &concept_values[&task.describe()];
            let on_expr = apply_task(kb, task, TaskTarget::Expression(&expr), caps)?;
            loss += similarity_d(on_concept, &on_expr);
            if loss > 0.0 {
                break;
            }
        }
        if loss == 0.0 {
            return Ok(LearnOutcome::Found(expr));
        }
        if loss < best_loss {
            best_loss = loss;
        }
    }
    Ok(LearnOutcome::Exhausted { best_loss, candidates: total })
}

/// As [`learn_concept`], but scanning the whole hypothesis space and
/// returning every expression with zero total loss over the sampled tasks.
/// Useful for recovery tests: a planted valid expression must reappear in
/// this set.
pub fn learn_concept_all(
    kb: &ConceptKB,
    concept: &str,
    config: &LearnConfig,
    caps: &Caps,
) -> Result<Vec<LimitExpression>> {
    let mut sampler = TaskSampler::new(kb, concept, config.seed)?;
    let tasks: Vec<Task> = (0..config.m).map(|_| sampler.next_task()).collect();
    let mut concept_values: BTreeMap<String, FinSet> = BTreeMap::new();
    for task in &tasks {
        let key = task.describe();
        if !concept_values.contains_key(&key) {
            let value = apply_task(kb, task, TaskTarget::Concept(concept), caps)?;
            concept_values.insert(key, value);
        }
    }
    let mut found = Vec::new();
    for expr in enumerate_expressions(kb, concept, config.max_nodes) {
        let mut ok = true;
        for task in &tasks {
            let on_concept = &concept_values[&task.describe()];
            let on_expr = apply_task(kb, task, TaskTarget::Expression(&expr), caps)?;
            if similarity_d(on_concept, &on_expr) > 0.0 {
                ok = false;
                break;
            }
        }
        if ok {
            found.push(expr);
        }
    }
    Ok(found)
}

/// Supervised repair: install a known-good expression after the brute-force
/// verifier confirms it, producing a new knowledge base.
pub fn supervised_repair(
    kb: &ConceptKB,
    concept: &str,
    target: &LimitExpression,
    caps: &Caps,
) -> Result<ConceptKB> {
    if !limit_verifier(kb, target, concept, caps)? {
        return Err(Error::invalid(format!(
            "supervised expression for {concept} fails the limit verifier"
        )));
    }
    kb.with_expressions(concept, vec![target.clone()])
}

/// A full structural correspondence between two expressions' diagrams.
#[derive(Clone, Debug, PartialEq)]
pub struct AnalogyCorrespondence {
    pub object_map: BTreeMap<ObjId, ObjId>,
    pub morphism_map: BTreeMap<MorId, MorId>,
}

/// Result of a diagram analogy search.
#[derive(Clone, Debug)]
pub struct AnalogyResult {
    /// Present exactly when the operators match and the shapes are
    /// isomorphic; an analogy relates structure, never node identities.
    pub correspondence: Option<AnalogyCorrespondence>,
    /// Matched fraction of (operator, objects, non-identity morphisms)
    /// under the best partial shape map.
    pub score: f64,
}

/// Searches for a shape isomorphism carrying one expression's diagram onto
/// the other's up to relabeling; when none exists the score reports the
/// best partial structural overlap. An analogy is reported as similarity
/// only — it does not decompose either concept.
pub fn diagram_analogy(d1: &LimitExpression, d2: &LimitExpression) -> AnalogyResult {
    let s1 = build_shape(&d1.shape);
    let s2 = build_shape(&d2.shape);
    let op_match = d1.operator == d2.operator;
    let full = if op_match { shape_isomorphism(&s1, &s2) } else { None };
    let non_id = |s: &FinCategory| s.morphisms().iter().filter(|m| !s.is_identity(&m.id)).count();
    let total1 = 1 + s1.objects().len() + non_id(&s1);
    let total2 = 1 + s2.objects().len() + non_id(&s2);
    let denom = total1.max(total2) as f64;
    let (matched_objs, matched_mors) = match &full {
        Some(c) => (c.object_map.len(), c.morphism_map.len()),
        None => best_partial_match(&s1, &s2),
    };
    let score = (op_match as usize + matched_objs + matched_mors) as f64 / denom;
    AnalogyResult { correspondence: full, score }
}

/// An isomorphism of shape categories, if one exists.
fn shape_isomorphism(s1: &FinCategory, s2: &FinCategory) -> Option<AnalogyCorrespondence> {
    if s1.objects().len() != s2.objects().len() {
        return None;
    }
    let objs2 = s2.objects().to_vec();
    let mut perm: Vec<usize> = (0..objs2.len()).collect();
    // Heap's-algorithm-free plain permutation scan: lexicographic next.
    loop {
        if let Some(c) = try_object_map(s1, s2, &perm, &objs2) {
            return Some(c);
        }
        if !next_permutation(&mut perm) {
            return None;
        }
    }
}

fn try_object_map(
    s1: &FinCategory,
    s2: &FinCategory,
    perm: &[usize],
    objs2: &[ObjId],
) -> Option<AnalogyCorrespondence> {
    let object_map: BTreeMap<ObjId, ObjId> = s1
        .objects()
        .iter()
        .zip(perm.iter().map(|&i| objs2[i].clone()))
        .map(|(a, b)| (a.clone(), b))
        .collect();
    // Morphisms must biject respecting endpoints; shapes have at most a
    // couple of parallel arrows, matched in id order.
    let mut morphism_map = BTreeMap::new();
    let mut used: Vec<MorId> = Vec::new();
    for m in s1.morphisms() {
        if s1.is_identity(&m.id) {
            continue;
        }
        let want_src = &object_map[&m.src];
        let want_dst = &object_map[&m.dst];
        let candidate = s2
            .morphisms()
            .iter()
            .find(|n| {
                !s2.is_identity(&n.id)
                    && &n.src == want_src
                    && &n.dst == want_dst
                    && !used.contains(&n.id)
            })?
            .id
            .clone();
        used.push(candidate.clone());
        morphism_map.insert(m.id.clone(), candidate);
    }
    let non_id2 = s2.morphisms().iter().filter(|m| !s2.is_identity(&m.id)).count();
    if morphism_map.len() != non_id2 {
        return None;
    }
    Some(AnalogyCorrespondence { object_map, morphism_map })
}

fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

/// Whether two expressions carry the same diagram up to a shape
/// isomorphism matching node concepts and edge relations. Parallel shape
/// arrows may permute, so an equalizer written with its two arrows swapped
/// counts as the same decomposition.
pub fn expressions_equivalent(a: &LimitExpression, b: &LimitExpression) -> bool {
    if a.operator != b.operator {
        return false;
    }
    let s1 = build_shape(&a.shape);
    let s2 = build_shape(&b.shape);
    if s1.objects().len() != s2.objects().len() {
        return false;
    }
    let objs2 = s2.objects().to_vec();
    let mut perm: Vec<usize> = (0..objs2.len()).collect();
    loop {
        let object_map: BTreeMap<ObjId, ObjId> = s1
            .objects()
            .iter()
            .zip(perm.iter().map(|&i| objs2[i].clone()))
            .map(|(x, y)| (x.clone(), y))
            .collect();
        let nodes_match = object_map
            .iter()
            .all(|(o1, o2)| a.nodes.get(o1) == b.nodes.get(o2));
        if nodes_match && edges_match_under(&s1, &s2, &object_map, a, b) {
            return true;
        }
        if !next_permutation(&mut perm) {
            return false;
        }
    }
}

/// Backtracking match of non-identity arrows under a fixed object map,
/// requiring endpoint compatibility and equal edge assignments.
fn edges_match_under(
    s1: &FinCategory,
    s2: &FinCategory,
    object_map: &BTreeMap<ObjId, ObjId>,
    a: &LimitExpression,
    b: &LimitExpression,
) -> bool {
    let m1: Vec<_> = s1.morphisms().iter().filter(|m| !s1.is_identity(&m.id)).collect();
    let m2: Vec<_> = s2.morphisms().iter().filter(|m| !s2.is_identity(&m.id)).collect();
    if m1.len() != m2.len() {
        return false;
    }
    fn go(
        k: usize,
        m1: &[&crate::fincat::Morphism],
        m2: &[&crate::fincat::Morphism],
        used: &mut Vec<bool>,
        object_map: &BTreeMap<ObjId, ObjId>,
        a: &LimitExpression,
        b: &LimitExpression,
    ) -> bool {
        if k == m1.len() {
            return true;
        }
        let want_src = &object_map[&m1[k].src];
        let want_dst = &object_map[&m1[k].dst];
        for (j, cand) in m2.iter().enumerate() {
            if used[j] || &cand.src != want_src || &cand.dst != want_dst {
                continue;
            }
            if a.edges.get(&m1[k].id) != b.edges.get(&cand.id) {
                continue;
            }
            used[j] = true;
            if go(k + 1, m1, m2, used, object_map, a, b) {
                return true;
            }
            used[j] = false;
        }
        false
    }
    let mut used = vec![false; m2.len()];
    go(0, &m1, &m2, &mut used, object_map, a, b)
}

/// Best `(objects, morphisms)` match over partial injective object maps.
fn best_partial_match(s1: &FinCategory, s2: &FinCategory) -> (usize, usize) {
    let o1 = s1.objects().to_vec();
    let o2 = s2.objects().to_vec();
    let mut best = (0usize, 0usize);
    // Assignments of each s1 object to an s2 object or to "unmatched"
    // (index = o2.len()), injectively.
    let mut assign = vec![0usize; o1.len()];
    let slots = o2.len() + 1;
    loop {
        let mut used = vec![false; o2.len()];
        let mut ok = true;
        for &a in &assign {
            if a < o2.len() {
                if used[a] {
                    ok = false;
                    break;
                }
                used[a] = true;
            }
        }
        if ok {
            let object_map: BTreeMap<&ObjId, &ObjId> = o1
                .iter()
                .zip(&assign)
                .filter(|(_, &a)| a < o2.len())
                .map(|(o, &a)| (o, &o2[a]))
                .collect();
            let mut matched_mors = 0usize;
            let mut used_m: Vec<&MorId> = Vec::new();
            for m in s1.morphisms() {
                if s1.is_identity(&m.id) {
                    continue;
                }
                let (Some(ws), Some(wd)) = (object_map.get(&m.src), object_map.get(&m.dst))
                else {
                    continue;
                };
                if let Some(n) = s2.morphisms().iter().find(|n| {
                    !s2.is_identity(&n.id)
                        && &&n.src == ws
                        && &&n.dst == wd
                        && !used_m.contains(&&n.id)
                }) {
                    used_m.push(&n.id);
                    matched_mors += 1;
                }
            }
            let score = (object_map.len(), matched_mors);
            if score.0 + score.1 > best.0 + best.1 {
                best = score;
            }
        }
        // Odometer.
        let mut k = assign.len();
        loop {
            if k == 0 {
                return best;
            }
            k -= 1;
            assign[k] += 1;
            if assign[k] < slots {
                break;
            }
            assign[k] = 0;
        }
        if assign.is_empty() {
            return best;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{dp_kb, wall_clock_kb};

    fn o(s: &str) -> ObjId {
        ObjId::from(s)
    }

    #[test]
    fn extraction_is_the_first_listed_expression() {
        let kb = dp_kb();
        // Basic concept: no expressions, null extraction.
        assert!(extract_limit(&kb, "optimal_state").unwrap().is_none());
        // Single-expression concept: that expression.
        let expr = extract_limit(&kb, "wall_clock_missing");
        assert!(expr.is_err());
        let expr = extract_limit(&kb, "dynamic_programming").unwrap().unwrap();
        assert_eq!(expr.operator, LimitOp::Projective);
        // Two expressions: deterministically the first.
        let second = LimitExpression {
            operator: LimitOp::Projective,
            shape: ShapeKind::Discrete(1),
            nodes: [(o("I1"), "optimal_state".to_string())].into(),
            edges: BTreeMap::new(),
        };
        let first = expr.clone();
        let kb2 = kb
            .with_expressions("dynamic_programming", vec![first.clone(), second])
            .unwrap();
        assert_eq!(extract_limit(&kb2, "dynamic_programming").unwrap().unwrap(), first);
    }

    #[test]
    fn realize_point_shape_is_the_yoneda_image() {
        let kb = dp_kb();
        let expr = LimitExpression {
            operator: LimitOp::Inductive,
            shape: ShapeKind::Discrete(1),
            nodes: [(o("I1"), "optimal_state".to_string())].into(),
            edges: BTreeMap::new(),
        };
        let p = realize(&kb, &expr, &Caps::default()).unwrap();
        let h = yoneda(kb.category(), &o("optimal_state"), Variance::Contravariant).unwrap();
        assert!(naturally_isomorphic(&p, &h, &Caps::default()).unwrap());
    }

    #[test]
    fn realize_inductive_discrete_pair_doubles_hom_sets() {
        let kb = dp_kb();
        let expr = LimitExpression {
            operator: LimitOp::Inductive,
            shape: ShapeKind::Discrete(2),
            nodes: [
                (o("I1"), "optimal_state".to_string()),
                (o("I2"), "optimal_state".to_string()),
            ]
            .into(),
            edges: BTreeMap::new(),
        };
        let p = realize(&kb, &expr, &Caps::default()).unwrap();
        let h = yoneda(kb.category(), &o("optimal_state"), Variance::Contravariant).unwrap();
        for z in kb.category().objects() {
            assert_eq!(p.value(z).len(), 2 * h.value(z).len());
        }
    }

    #[test]
    fn concept_presheaf_prefers_overrides() {
        let kb = dp_kb();
        let plain = concept_presheaf(&kb, "optimal_state", Variance::Contravariant).unwrap();
        let h = yoneda(kb.category(), &o("optimal_state"), Variance::Contravariant).unwrap();
        assert_eq!(plain, h);
    }

    #[test]
    fn cyclic_entries_become_flagged_leaves() {
        let kb = dp_kb();
        // dynamic_programming's expression rewired to mention itself.
        let circular = LimitExpression {
            operator: LimitOp::Projective,
            shape: ShapeKind::Discrete(1),
            nodes: [(o("I1"), "dynamic_programming".to_string())].into(),
            edges: BTreeMap::new(),
        };
        let kb2 = kb.with_expressions("dynamic_programming", vec![circular]).unwrap();
        let tree =
            deconcept(&kb2, "dynamic_programming", &TableExtractor, DEFAULT_MAX_DEPTH).unwrap();
        match &tree.root.kind {
            DecompKind::Expanded { children, .. } => {
                assert_eq!(children.len(), 1);
                assert_eq!(children[0].1.kind, DecompKind::Leaf(LeafKind::CycleRef));
            }
            other => panic!("expected an expanded root, got {other:?}"),
        }
    }

    #[test]
    fn basic_concept_decomposes_to_a_single_node() {
        let kb = dp_kb();
        let tree = deconcept(&kb, "optimal_state", &TableExtractor, DEFAULT_MAX_DEPTH).unwrap();
        assert_eq!(tree.root.kind, DecompKind::Leaf(LeafKind::Basic));
        assert_eq!(tree.render_text(), "optimal_state (basic)\n");
    }

    #[test]
    fn hom_task_on_expression_matches_direct_hom_on_the_representative() {
        // The commutation the task combination rests on: for a verifier-
        // passing inductive expression, the domain-side hom task on the
        // expression agrees with the task on the concept.
        let kb = dp_kb();
        let expr = extract_limit(&kb, "sub_problem_recursion").unwrap().unwrap();
        let caps = Caps::default();
        for probe in kb.category().objects() {
            for side in [HomTaskSide::Domain, HomTaskSide::Codomain] {
                let task = Task::Hom { side, probe: probe.clone() };
                let on_concept =
                    apply_task(&kb, &task, TaskTarget::Concept("sub_problem_recursion"), &caps)
                        .unwrap();
                let on_expr =
                    apply_task(&kb, &task, TaskTarget::Expression(&expr), &caps).unwrap();
                assert_eq!(
                    similarity_d(&on_concept, &on_expr),
                    0.0,
                    "task {} disagrees",
                    task.describe()
                );
            }
        }
    }

    #[test]
    fn functor_task_agrees_on_verified_expressions() {
        let kb = dp_kb();
        let caps = Caps::default();
        for name in ["dynamic_programming", "sub_problem_recursion"] {
            let expr = extract_limit(&kb, name).unwrap().unwrap();
            for fname in kb.task_universe().functors.keys() {
                let task = Task::Functor { name: fname.clone() };
                let on_concept = apply_task(&kb, &task, TaskTarget::Concept(name), &caps).unwrap();
                let on_expr = apply_task(&kb, &task, TaskTarget::Expression(&expr), &caps).unwrap();
                assert_eq!(similarity_d(&on_concept, &on_expr), 0.0, "{fname} on {name}");
            }
        }
    }

    #[test]
    fn similarity_values_are_the_pinned_ones() {
        let s2 = FinSet::of("A", &["a", "b"]);
        let s3 = FinSet::of("B", &["x", "y", "z"]);
        assert_eq!(similarity_d(&s2, &s2), 0.0);
        assert_eq!(similarity_d(&s2, &s3), 1.0);
        assert!((graded_similarity_d(&s2, &s3) - 1.0 / 3.0).abs() < 1e-12);
        assert_eq!(graded_similarity_d(&s2, &s2), 0.0);
    }

    #[test]
    fn verify_with_tasks_passes_on_the_fixture_and_vacuously_on_basics() {
        let kb = dp_kb();
        let caps = Caps::default();
        for name in ["dynamic_programming", "sub_problem_recursion", "optimal_state"] {
            let verdict =
                verify_with_tasks(&kb, name, &TableExtractor, 0, 25, 0.5, &caps).unwrap();
            assert_eq!(verdict, TaskVerification::Pass, "{name}");
        }
    }

    #[test]
    fn corrupted_edge_fails_task_verification() {
        let kb = dp_kb();
        let caps = Caps::default();
        let mut expr = extract_limit(&kb, "dynamic_programming").unwrap().unwrap();
        // Both parallel edges now carry the same evaluation: the equalizer
        // collapses to the whole of sub_problem_recursion.
        expr.edges.insert(MorId::from("m2"), MorId::from("direct_eval"));
        let kb2 = kb.with_expressions("dynamic_programming", vec![expr]).unwrap();
        let verdict =
            verify_with_tasks(&kb2, "dynamic_programming", &TableExtractor, 7, 50, 0.5, &caps)
                .unwrap();
        assert!(matches!(verdict, TaskVerification::Fail { .. }));
        let verifier_verdict =
            verify_with_verifier(&kb2, "dynamic_programming", &TableExtractor, &BruteForceVerifier {
                caps,
            })
            .unwrap();
        assert_eq!(
            verifier_verdict,
            VerifierVerification::Fail { concept: "dynamic_programming".to_string() }
        );
    }

    #[test]
    fn verifier_names_the_corrupted_inner_node() {
        let kb = dp_kb();
        let caps = Caps::default();
        let mut expr = extract_limit(&kb, "sub_problem_recursion").unwrap().unwrap();
        expr.edges.insert(MorId::from("m2"), MorId::from("run_case"));
        let kb2 = kb.with_expressions("sub_problem_recursion", vec![expr]).unwrap();
        let verdict = verify_with_verifier(
            &kb2,
            "dynamic_programming",
            &TableExtractor,
            &BruteForceVerifier { caps },
        )
        .unwrap();
        assert_eq!(
            verdict,
            VerifierVerification::Fail { concept: "sub_problem_recursion".to_string() }
        );
    }

    #[test]
    fn wall_clock_passes_both_verifications() {
        let kb = wall_clock_kb();
        let caps = Caps::default();
        assert!(precisely_understands(&kb, "wall_clock", &TableExtractor, &caps).unwrap());
        let verdict =
            verify_with_tasks(&kb, "wall_clock", &TableExtractor, 3, 25, 0.5, &caps).unwrap();
        assert_eq!(verdict, TaskVerification::Pass);
    }

    #[test]
    fn learner_finds_a_verifier_valid_expression() {
        // A concept can have several valid limits; the learner returns the
        // first task-valid one in enumeration order, which here is a
        // collapse expression rather than the listed definition. What must
        // hold is that the found expression passes the brute-force
        // verifier, i.e. it really is a decomposition of the concept.
        let kb = dp_kb();
        let caps = Caps::default();
        let config = LearnConfig { max_nodes: 2, m: 30, seed: 0 };
        match learn_concept(&kb, "dynamic_programming", &config, &caps).unwrap() {
            LearnOutcome::Found(expr) => {
                assert!(
                    limit_verifier(&kb, &expr, "dynamic_programming", &caps).unwrap(),
                    "learned expression {} fails the verifier",
                    expr.describe()
                );
            }
            LearnOutcome::Exhausted { best_loss, candidates } => {
                panic!("no expression found: best loss {best_loss} over {candidates} candidates")
            }
        }
    }

    #[test]
    fn learner_reports_exhaustion_when_nothing_fits() {
        // Restrict the space to single nodes: no point-shape expression can
        // realize dynamic_programming once self-reference is excluded,
        // because no other object is isomorphic to it.
        let kb = dp_kb();
        let caps = Caps::default();
        let config = LearnConfig { max_nodes: 1, m: 20, seed: 1 };
        match learn_concept(&kb, "sub_problem_recursion", &config, &caps).unwrap() {
            LearnOutcome::Found(expr) => {
                panic!("unexpectedly found {}", expr.describe())
            }
            LearnOutcome::Exhausted { candidates, .. } => {
                assert!(candidates > 0);
            }
        }
    }

    #[test]
    fn supervised_repair_restores_a_passing_kb() {
        let kb = dp_kb();
        let caps = Caps::default();
        let good = extract_limit(&kb, "dynamic_programming").unwrap().unwrap();
        let mut corrupted_expr = good.clone();
        corrupted_expr.edges.insert(MorId::from("m2"), MorId::from("direct_eval"));
        let corrupted = kb
            .with_expressions("dynamic_programming", vec![corrupted_expr])
            .unwrap();
        assert!(!precisely_understands(&corrupted, "dynamic_programming", &TableExtractor, &caps)
            .unwrap());
        let repaired = supervised_repair(&corrupted, "dynamic_programming", &good, &caps).unwrap();
        assert!(precisely_understands(&repaired, "dynamic_programming", &TableExtractor, &caps)
            .unwrap());
        // A wrong target is rejected outright.
        let mut bad = good.clone();
        bad.edges.insert(MorId::from("m1"), MorId::from("memo_eval"));
        bad.edges.insert(MorId::from("m2"), MorId::from("memo_eval"));
        assert!(supervised_repair(&corrupted, "dynamic_programming", &bad, &caps).is_err());
    }

    #[test]
    fn analogy_of_an_expression_with_itself_is_total() {
        let kb = dp_kb();
        let expr = extract_limit(&kb, "dynamic_programming").unwrap().unwrap();
        let result = diagram_analogy(&expr, &expr);
        assert!(result.correspondence.is_some());
        assert_eq!(result.score, 1.0);
    }

    #[test]
    fn for_and_while_loops_share_their_shape() {
        let kb = dp_kb();
        let for_expr = extract_limit(&kb, "for_loop").unwrap().unwrap();
        let while_expr = extract_limit(&kb, "while_loop").unwrap().unwrap();
        let result = diagram_analogy(&for_expr, &while_expr);
        assert!(result.correspondence.is_some());
        assert_eq!(result.score, 1.0);
    }

    #[test]
    fn mismatched_shapes_score_below_one() {
        let kb = dp_kb();
        let pp = extract_limit(&kb, "dynamic_programming").unwrap().unwrap();
        let discrete = LimitExpression {
            operator: LimitOp::Projective,
            shape: ShapeKind::Discrete(2),
            nodes: [
                (o("I1"), "optimal_state".to_string()),
                (o("I2"), "sub_problem_recursion".to_string()),
            ]
            .into(),
            edges: BTreeMap::new(),
        };
        let result = diagram_analogy(&pp, &discrete);
        assert!(result.correspondence.is_none());
        assert!(result.score < 1.0);
    }

    #[test]
    fn equivalence_sees_through_parallel_edge_swaps() {
        let kb = dp_kb();
        let expr = extract_limit(&kb, "dynamic_programming").unwrap().unwrap();
        let mut swapped = expr.clone();
        swapped.edges.insert(MorId::from("m1"), expr.edges[&MorId::from("m2")].clone());
        swapped.edges.insert(MorId::from("m2"), expr.edges[&MorId::from("m1")].clone());
        assert!(expressions_equivalent(&expr, &swapped));
        let mut different = expr.clone();
        different.edges.insert(MorId::from("m2"), MorId::from("direct_eval"));
        assert!(!expressions_equivalent(&expr, &different));
    }

    #[test]
    fn seeded_extractor_is_deterministic_and_in_range() {
        let kb = dp_kb();
        let expr = extract_limit(&kb, "dynamic_programming").unwrap().unwrap();
        let alt = LimitExpression {
            operator: LimitOp::Projective,
            shape: ShapeKind::Discrete(1),
            nodes: [(o("I1"), "optimal_state".to_string())].into(),
            edges: BTreeMap::new(),
        };
        let kb2 = kb
            .with_expressions("dynamic_programming", vec![expr.clone(), alt.clone()])
            .unwrap();
        for seed in 0..5 {
            let e = SeededExtractor(seed);
            let a = e.extract(&kb2, "dynamic_programming").unwrap().unwrap();
            let b = e.extract(&kb2, "dynamic_programming").unwrap().unwrap();
            assert_eq!(a, b);
            assert!(a == expr || a == alt);
        }
    }
}
