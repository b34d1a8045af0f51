//! Document formats: JSON encodings of categories, diagrams, presheaves,
//! knowledge bases and law-suite manifests, plus the conversions to and
//! from engine values.
//!
//! Parsing failures surface as `Error::Parse`; structural problems found
//! while converting a parsed document (dangling ids and the like) keep
//! their `Error::Structural` identity so the two never blur.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::concept::{ConceptEntry, ConceptKB, LimitExpression, LimitOp, TaskUniverse};
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, Morphism, ObjId, ShapeKind};
use crate::finset::{ElemId, FinSet, LimitResult, SetDiagram, SetFn, Variance};
use crate::presheaf::SetPresheaf;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CategoryDoc {
    pub name: String,
    pub objects: Vec<String>,
    pub morphisms: Vec<MorphismDoc>,
    pub identities: BTreeMap<String, String>,
    /// Triples `[g, f, g∘f]`; identity composites may be omitted.
    #[serde(default)]
    pub compose: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MorphismDoc {
    pub id: String,
    pub src: String,
    pub dst: String,
}

impl CategoryDoc {
    pub fn to_category(&self) -> Result<FinCategory> {
        let objects = self.objects.iter().map(|o| ObjId(o.clone())).collect();
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism {
                id: MorId(m.id.clone()),
                src: ObjId(m.src.clone()),
                dst: ObjId(m.dst.clone()),
            })
            .collect();
        let identities = self
            .identities
            .iter()
            .map(|(o, m)| (ObjId(o.clone()), MorId(m.clone())))
            .collect();
        let composition = self
            .compose
            .iter()
            .map(|(g, f, r)| ((MorId(g.clone()), MorId(f.clone())), MorId(r.clone())))
            .collect();
        FinCategory::new(self.name.clone(), objects, morphisms, identities, composition)
    }

    pub fn from_category(cat: &FinCategory) -> CategoryDoc {
        let mut compose = Vec::new();
        for g in cat.morphisms() {
            for f in cat.morphisms() {
                if f.dst != g.src {
                    continue;
                }
                if cat.is_identity(&g.id) || cat.is_identity(&f.id) {
                    continue;
                }
                if let Some(r) = cat.compose(&g.id, &f.id) {
                    compose.push((g.id.0.clone(), f.id.0.clone(), r.0.clone()));
                }
            }
        }
        CategoryDoc {
            name: cat.name().to_string(),
            objects: cat.objects().iter().map(|o| o.0.clone()).collect(),
            morphisms: cat
                .morphisms()
                .iter()
                .map(|m| MorphismDoc {
                    id: m.id.0.clone(),
                    src: m.src.0.clone(),
                    dst: m.dst.0.clone(),
                })
                .collect(),
            identities: cat
                .objects()
                .iter()
                .map(|o| (o.0.clone(), cat.identity(o).expect("valid").0.clone()))
                .collect(),
            compose,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SetDoc {
    pub id: String,
    pub elements: Vec<String>,
}

impl SetDoc {
    pub fn to_set(&self) -> Result<FinSet> {
        FinSet::new(self.id.clone(), self.elements.iter().map(|e| ElemId(e.clone())).collect())
    }

    pub fn from_set(set: &FinSet) -> SetDoc {
        SetDoc {
            id: set.id().to_string(),
            elements: set.elements().iter().map(|e| e.0.clone()).collect(),
        }
    }
}

/// A shape is either a canonical tag (`"discrete:2"`, `"parallel_pair"`,
/// `"cospan"`, `"span"`) or an inline category document.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ShapeDoc {
    Tag(String),
    Inline(CategoryDoc),
}

impl ShapeDoc {
    pub fn to_shape(&self) -> Result<ShapeKind> {
        match self {
            ShapeDoc::Inline(doc) => Ok(ShapeKind::Custom(doc.to_category()?)),
            ShapeDoc::Tag(tag) => parse_shape_tag(tag),
        }
    }

    pub fn from_shape(kind: &ShapeKind) -> ShapeDoc {
        match kind {
            ShapeKind::Custom(cat) => ShapeDoc::Inline(CategoryDoc::from_category(cat)),
            other => ShapeDoc::Tag(other.tag()),
        }
    }
}

pub fn parse_shape_tag(tag: &str) -> Result<ShapeKind> {
    if let Some(n) = tag.strip_prefix("discrete:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::parse(format!("bad discrete shape tag {tag}")))?;
        return Ok(ShapeKind::Discrete(n));
    }
    match tag {
        "parallel_pair" => Ok(ShapeKind::ParallelPair),
        "cospan" => Ok(ShapeKind::Cospan),
        "span" => Ok(ShapeKind::Span),
        other => Err(Error::parse(format!("unknown shape tag {other}"))),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagramDoc {
    pub shape: ShapeDoc,
    pub variance: Variance,
    pub objects: BTreeMap<String, SetDoc>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, BTreeMap<String, String>>,
}

impl DiagramDoc {
    pub fn to_diagram(&self) -> Result<SetDiagram> {
        let shape = crate::fincat::build_shape(&self.shape.to_shape()?);
        let objects: BTreeMap<ObjId, FinSet> = self
            .objects
            .iter()
            .map(|(o, s)| Ok((ObjId(o.clone()), s.to_set()?)))
            .collect::<Result<_>>()?;
        let mut morphisms = BTreeMap::new();
        for (mid, table) in &self.morphisms {
            let m = shape
                .morphism(&MorId(mid.clone()))
                .ok_or_else(|| Error::structural(format!("unknown shape morphism {mid}")))?;
            let (src_obj, dst_obj) = match self.variance {
                Variance::Covariant => (&m.src, &m.dst),
                Variance::Contravariant => (&m.dst, &m.src),
            };
            let src = objects
                .get(src_obj)
                .ok_or_else(|| Error::structural(format!("missing set for {src_obj}")))?;
            let dst = objects
                .get(dst_obj)
                .ok_or_else(|| Error::structural(format!("missing set for {dst_obj}")))?;
            let fn_table: BTreeMap<ElemId, ElemId> = table
                .iter()
                .map(|(a, b)| (ElemId(a.clone()), ElemId(b.clone())))
                .collect();
            morphisms.insert(
                MorId(mid.clone()),
                SetFn::new(src.clone(), dst.clone(), fn_table)?,
            );
        }
        SetDiagram::new(shape, self.variance, objects, morphisms)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresheafDoc {
    pub base: CategoryDoc,
    pub variance: Variance,
    pub values: BTreeMap<String, SetDoc>,
    #[serde(default)]
    pub actions: BTreeMap<String, BTreeMap<String, String>>,
}

impl PresheafDoc {
    pub fn to_presheaf(&self) -> Result<SetPresheaf> {
        let base = self.base.to_category()?;
        presheaf_from_parts(&base, self.variance, &self.values, &self.actions)
    }
}

/// The base-relative presheaf payload used for overrides and functors
/// inside knowledge-base documents.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PresheafPayload {
    pub variance: Variance,
    pub values: BTreeMap<String, SetDoc>,
    #[serde(default)]
    pub actions: BTreeMap<String, BTreeMap<String, String>>,
}

fn presheaf_from_parts(
    base: &FinCategory,
    variance: Variance,
    values: &BTreeMap<String, SetDoc>,
    actions: &BTreeMap<String, BTreeMap<String, String>>,
) -> Result<SetPresheaf> {
    let value_sets: BTreeMap<ObjId, FinSet> = values
        .iter()
        .map(|(o, s)| Ok((ObjId(o.clone()), s.to_set()?)))
        .collect::<Result<_>>()?;
    let mut action_fns = BTreeMap::new();
    for (mid, table) in actions {
        let m = base
            .morphism(&MorId(mid.clone()))
            .ok_or_else(|| Error::structural(format!("unknown base morphism {mid}")))?;
        let (src_obj, dst_obj) = match variance {
            Variance::Covariant => (&m.src, &m.dst),
            Variance::Contravariant => (&m.dst, &m.src),
        };
        let src = value_sets
            .get(src_obj)
            .ok_or_else(|| Error::structural(format!("missing value at {src_obj}")))?;
        let dst = value_sets
            .get(dst_obj)
            .ok_or_else(|| Error::structural(format!("missing value at {dst_obj}")))?;
        let fn_table: BTreeMap<ElemId, ElemId> = table
            .iter()
            .map(|(a, b)| (ElemId(a.clone()), ElemId(b.clone())))
            .collect();
        action_fns.insert(MorId(mid.clone()), SetFn::new(src.clone(), dst.clone(), fn_table)?);
    }
    SetPresheaf::new(base, variance, value_sets, action_fns)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExpressionDoc {
    pub op: String,
    pub shape: ShapeDoc,
    pub nodes: BTreeMap<String, String>,
    #[serde(default)]
    pub edges: BTreeMap<String, String>,
}

impl ExpressionDoc {
    pub fn to_expression(&self) -> Result<LimitExpression> {
        let operator = match self.op.as_str() {
            "ind" => LimitOp::Inductive,
            "pro" => LimitOp::Projective,
            other => return Err(Error::parse(format!("unknown operator {other}"))),
        };
        Ok(LimitExpression {
            operator,
            shape: self.shape.to_shape()?,
            nodes: self.nodes.iter().map(|(o, c)| (ObjId(o.clone()), c.clone())).collect(),
            edges: self
                .edges
                .iter()
                .map(|(m, r)| (MorId(m.clone()), MorId(r.clone())))
                .collect(),
        })
    }

    pub fn from_expression(expr: &LimitExpression) -> ExpressionDoc {
        ExpressionDoc {
            op: expr.operator.tag().to_string(),
            shape: ShapeDoc::from_shape(&expr.shape),
            nodes: expr.nodes.iter().map(|(o, c)| (o.0.clone(), c.clone())).collect(),
            edges: expr.edges.iter().map(|(m, r)| (m.0.clone(), r.0.clone())).collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ConceptDoc {
    #[serde(default)]
    pub expressions: Vec<ExpressionDoc>,
    #[serde(default)]
    pub trusted_leaf: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
pub struct TaskUniverseDoc {
    #[serde(default)]
    pub probes: Vec<String>,
    #[serde(default)]
    pub functors: BTreeMap<String, PresheafPayload>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KbDoc {
    pub semantic_category: CategoryDoc,
    pub concepts: BTreeMap<String, ConceptDoc>,
    #[serde(default)]
    pub presheaf_overrides: BTreeMap<String, PresheafPayload>,
    #[serde(default)]
    pub task_universe: TaskUniverseDoc,
}

impl KbDoc {
    pub fn to_kb(&self) -> Result<ConceptKB> {
        let cat = self.semantic_category.to_category()?;
        let concepts = self
            .concepts
            .iter()
            .map(|(name, doc)| {
                Ok(ConceptEntry {
                    name: name.clone(),
                    expressions: doc
                        .expressions
                        .iter()
                        .map(|e| e.to_expression())
                        .collect::<Result<_>>()?,
                    trusted_leaf: doc.trusted_leaf,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let overrides = self
            .presheaf_overrides
            .iter()
            .map(|(name, p)| {
                Ok((name.clone(), presheaf_from_parts(&cat, p.variance, &p.values, &p.actions)?))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let functors = self
            .task_universe
            .functors
            .iter()
            .map(|(name, p)| {
                Ok((name.clone(), presheaf_from_parts(&cat, p.variance, &p.values, &p.actions)?))
            })
            .collect::<Result<BTreeMap<_, _>>>()?;
        let universe = TaskUniverse {
            probes: self.task_universe.probes.iter().map(|p| ObjId(p.clone())).collect(),
            functors,
        };
        ConceptKB::new(cat, concepts, overrides, universe)
    }

    pub fn from_kb(kb: &ConceptKB) -> KbDoc {
        let concepts = kb
            .concepts()
            .map(|entry| {
                (
                    entry.name.clone(),
                    ConceptDoc {
                        expressions: entry
                            .expressions
                            .iter()
                            .map(ExpressionDoc::from_expression)
                            .collect(),
                        trusted_leaf: entry.trusted_leaf,
                    },
                )
            })
            .collect();
        let payload = |p: &SetPresheaf| PresheafPayload {
            variance: p.variance(),
            values: p
                .values()
                .iter()
                .map(|(o, s)| (o.0.clone(), SetDoc::from_set(s)))
                .collect(),
            actions: p
                .base()
                .morphisms()
                .iter()
                .filter(|m| !p.base().is_identity(&m.id))
                .map(|m| {
                    (
                        m.id.0.clone(),
                        p.action(&m.id)
                            .table()
                            .iter()
                            .map(|(a, b)| (a.0.clone(), b.0.clone()))
                            .collect(),
                    )
                })
                .collect(),
        };
        let functors = kb
            .task_universe()
            .functors
            .iter()
            .map(|(n, p)| (n.clone(), payload(p)))
            .collect();
        let overrides = kb
            .concepts()
            .filter_map(|e| kb.override_of(&e.name).map(|p| (e.name.clone(), payload(p))))
            .collect();
        KbDoc {
            semantic_category: CategoryDoc::from_category(kb.category()),
            concepts,
            presheaf_overrides: overrides,
            task_universe: TaskUniverseDoc {
                probes: kb.task_universe().probes.iter().map(|p| p.0.clone()).collect(),
                functors,
            },
        }
    }
}

/// Machine-readable rendering of a computed limit or colimit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LimitResultDoc {
    pub kind: String,
    pub apex: SetDoc,
    pub legs: BTreeMap<String, BTreeMap<String, String>>,
}

impl LimitResultDoc {
    pub fn from_result(result: &LimitResult) -> LimitResultDoc {
        LimitResultDoc {
            kind: match result.kind {
                crate::finset::LimitKind::Projective => "projective".to_string(),
                crate::finset::LimitKind::Inductive => "inductive".to_string(),
            },
            apex: SetDoc::from_set(&result.apex),
            legs: result
                .legs
                .iter()
                .map(|(o, f)| {
                    (
                        o.0.clone(),
                        f.table().iter().map(|(a, b)| (a.0.clone(), b.0.clone())).collect(),
                    )
                })
                .collect(),
        }
    }
}

/// One entry of a law-suite manifest.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LawEntryDoc {
    pub law: String,
    pub instance: InstanceDoc,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InstanceDoc {
    Generated { seed: u64, #[serde(default = "default_size")] size: usize },
    Inline(serde_json::Value),
}

fn default_size() -> usize {
    4
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LawManifestDoc {
    pub entries: Vec<LawEntryDoc>,
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::parse(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| Error::parse(format!("cannot parse {}: {e}", path.display())))
}

pub fn to_pretty_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("document types serialize")
}
