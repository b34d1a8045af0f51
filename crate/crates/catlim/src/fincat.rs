//! Explicit finite categories.
//!
//! A [`FinCategory`] stores its objects, morphisms, identity assignment and
//! full composition table. Ids are plain strings and every enumeration in
//! the crate is ordered lexicographically on them, which makes all
//! downstream computations deterministic and snapshot-stable.
//!
//! Construction only enforces *structural* well-formedness (ids resolve,
//! caps respected). The category *laws* — identity, totality, closure,
//! associativity — are checked separately by [`FinCategory::validate`], so
//! a file-format bug never masquerades as a mathematical failure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};

/// Object identifier inside a finite category.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ObjId(pub String);

/// Morphism identifier inside a finite category.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MorId(pub String);

impl ObjId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl MorId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ObjId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for MorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ObjId {
    fn from(s: &str) -> Self {
        ObjId(s.to_string())
    }
}

impl From<&str> for MorId {
    fn from(s: &str) -> Self {
        MorId(s.to_string())
    }
}

/// A morphism record: id plus source and target objects.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Morphism {
    pub id: MorId,
    pub src: ObjId,
    pub dst: ObjId,
}

/// An explicit finite category.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinCategory {
    name: String,
    objects: Vec<ObjId>,
    morphisms: Vec<Morphism>,
    identities: BTreeMap<ObjId, MorId>,
    /// `(g, f) -> g ∘ f`, keyed on composable pairs (target of f = source of g).
    composition: BTreeMap<(MorId, MorId), MorId>,
}

/// A single category-law violation found by [`FinCategory::validate`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum LawViolation {
    /// `identities[obj]` does not have that object as both endpoints.
    IdentityEndpoints { obj: ObjId, id_mor: MorId },
    /// A composable pair has no entry in the composition table.
    NotTotal { g: MorId, f: MorId },
    /// `g ∘ f` exists but its endpoints differ from src(f) → dst(g).
    NotClosed { g: MorId, f: MorId, result: MorId },
    /// `id ∘ f ≠ f` or `g ∘ id ≠ g`.
    IdentityLaw { mor: MorId, composite: MorId },
    /// `(h ∘ g) ∘ f ≠ h ∘ (g ∘ f)`.
    Associativity { h: MorId, g: MorId, f: MorId, left: MorId, right: MorId },
}

impl fmt::Display for LawViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LawViolation::IdentityEndpoints { obj, id_mor } => {
                write!(f, "identity {id_mor} of {obj} does not have {obj} as source and target")
            }
            LawViolation::NotTotal { g, f: ff } => {
                write!(f, "composable pair ({g}, {ff}) has no composite")
            }
            LawViolation::NotClosed { g, f: ff, result } => {
                write!(f, "composite {result} = {g}∘{ff} has wrong endpoints")
            }
            LawViolation::IdentityLaw { mor, composite } => {
                write!(f, "identity law broken on {mor} (composite {composite})")
            }
            LawViolation::Associativity { h, g, f: ff, left, right } => {
                write!(f, "associativity broken: ({h}∘{g})∘{ff} = {left} but {h}∘({g}∘{ff}) = {right}")
            }
        }
    }
}

impl FinCategory {
    /// Builds a category from raw tables, checking structure only.
    ///
    /// Identity composites (`id ∘ f` and `g ∘ id`) may be omitted from
    /// `composition`; they are inferred. Dangling ids, duplicate ids,
    /// missing identities and cap overruns are structural errors.
    pub fn new(
        name: impl Into<String>,
        objects: Vec<ObjId>,
        morphisms: Vec<Morphism>,
        identities: BTreeMap<ObjId, MorId>,
        composition: BTreeMap<(MorId, MorId), MorId>,
    ) -> Result<Self> {
        Self::with_caps(name, objects, morphisms, identities, composition, &Caps::default())
    }

    pub fn with_caps(
        name: impl Into<String>,
        mut objects: Vec<ObjId>,
        mut morphisms: Vec<Morphism>,
        identities: BTreeMap<ObjId, MorId>,
        mut composition: BTreeMap<(MorId, MorId), MorId>,
        caps: &Caps,
    ) -> Result<Self> {
        let name = name.into();
        if objects.len() > caps.max_objects {
            return Err(Error::capacity(format!(
                "category {name} has {} objects (cap {})",
                objects.len(),
                caps.max_objects
            )));
        }
        if morphisms.len() > caps.max_morphisms {
            return Err(Error::capacity(format!(
                "category {name} has {} morphisms (cap {})",
                morphisms.len(),
                caps.max_morphisms
            )));
        }
        objects.sort();
        let obj_set: BTreeSet<&ObjId> = objects.iter().collect();
        if obj_set.len() != objects.len() {
            return Err(Error::structural(format!("category {name}: duplicate object ids")));
        }
        morphisms.sort_by(|a, b| a.id.cmp(&b.id));
        let mut mor_ids: BTreeSet<&MorId> = BTreeSet::new();
        for m in &morphisms {
            if !mor_ids.insert(&m.id) {
                return Err(Error::structural(format!(
                    "category {name}: duplicate morphism id {}",
                    m.id
                )));
            }
            if !obj_set.contains(&m.src) || !obj_set.contains(&m.dst) {
                return Err(Error::structural(format!(
                    "category {name}: morphism {} has dangling endpoint",
                    m.id
                )));
            }
        }
        for obj in &objects {
            match identities.get(obj) {
                None => {
                    return Err(Error::structural(format!(
                        "category {name}: object {obj} has no identity morphism"
                    )))
                }
                Some(id) if !mor_ids.contains(id) => {
                    return Err(Error::structural(format!(
                        "category {name}: identity {id} of {obj} is not a listed morphism"
                    )))
                }
                _ => {}
            }
        }
        for (obj, _) in identities.iter() {
            if !obj_set.contains(obj) {
                return Err(Error::structural(format!(
                    "category {name}: identity listed for unknown object {obj}"
                )));
            }
        }
        for ((g, f), r) in composition.iter() {
            for m in [g, f, r] {
                if !mor_ids.contains(m) {
                    return Err(Error::structural(format!(
                        "category {name}: composition table references unknown morphism {m}"
                    )));
                }
            }
        }
        let by_id: BTreeMap<&MorId, &Morphism> =
            morphisms.iter().map(|m| (&m.id, m)).collect();
        // Infer identity composites that were omitted.
        for m in &morphisms {
            let id_src = identities
                .get(&m.src)
                .expect("identity present for every object");
            let id_dst = identities.get(&m.dst).expect("identity present");
            composition
                .entry((m.id.clone(), id_src.clone()))
                .or_insert_with(|| m.id.clone());
            composition
                .entry((id_dst.clone(), m.id.clone()))
                .or_insert_with(|| m.id.clone());
        }
        // Reject entries keyed on non-composable pairs.
        for ((g, f), _) in composition.iter() {
            let gm = by_id[g];
            let fm = by_id[f];
            if fm.dst != gm.src {
                return Err(Error::structural(format!(
                    "category {name}: composition entry ({g}, {f}) is not a composable pair"
                )));
            }
        }
        Ok(FinCategory {
            name,
            objects,
            morphisms,
            identities,
            composition,
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// Objects in lexicographic order.
    pub fn objects(&self) -> &[ObjId] {
        &self.objects
    }

    /// Morphisms in lexicographic id order, identities included.
    pub fn morphisms(&self) -> &[Morphism] {
        &self.morphisms
    }

    pub fn has_object(&self, x: &ObjId) -> bool {
        self.objects.binary_search(x).is_ok()
    }

    pub fn morphism(&self, id: &MorId) -> Option<&Morphism> {
        self.morphisms
            .binary_search_by(|m| m.id.cmp(id))
            .ok()
            .map(|i| &self.morphisms[i])
    }

    pub fn identity(&self, x: &ObjId) -> Option<&MorId> {
        self.identities.get(x)
    }

    pub fn is_identity(&self, f: &MorId) -> bool {
        self.identities.values().any(|id| id == f)
    }

    /// `g ∘ f` if the pair is composable and tabulated.
    pub fn compose(&self, g: &MorId, f: &MorId) -> Option<&MorId> {
        self.composition.get(&(g.clone(), f.clone()))
    }

    /// Hom-set `Hom(x, y)` as a sorted list of morphism ids.
    pub fn hom(&self, x: &ObjId, y: &ObjId) -> Vec<MorId> {
        self.morphisms
            .iter()
            .filter(|m| &m.src == x && &m.dst == y)
            .map(|m| m.id.clone())
            .collect()
    }

    /// All category-law violations; empty iff the category is valid.
    pub fn validate(&self) -> Vec<LawViolation> {
        let mut out = Vec::new();
        for (obj, id_mor) in &self.identities {
            let m = self.morphism(id_mor).expect("checked structurally");
            if &m.src != obj || &m.dst != obj {
                out.push(LawViolation::IdentityEndpoints {
                    obj: obj.clone(),
                    id_mor: id_mor.clone(),
                });
            }
        }
        // Totality and closure.
        for g in &self.morphisms {
            for f in &self.morphisms {
                if f.dst != g.src {
                    continue;
                }
                match self.compose(&g.id, &f.id) {
                    None => out.push(LawViolation::NotTotal {
                        g: g.id.clone(),
                        f: f.id.clone(),
                    }),
                    Some(r) => {
                        let rm = self.morphism(r).expect("checked structurally");
                        if rm.src != f.src || rm.dst != g.dst {
                            out.push(LawViolation::NotClosed {
                                g: g.id.clone(),
                                f: f.id.clone(),
                                result: r.clone(),
                            });
                        }
                    }
                }
            }
        }
        // Identity laws.
        for m in &self.morphisms {
            let id_src = self.identities[&m.src].clone();
            let id_dst = self.identities[&m.dst].clone();
            if let Some(r) = self.compose(&m.id, &id_src) {
                if r != &m.id {
                    out.push(LawViolation::IdentityLaw {
                        mor: m.id.clone(),
                        composite: r.clone(),
                    });
                }
            }
            if let Some(r) = self.compose(&id_dst, &m.id) {
                if r != &m.id {
                    out.push(LawViolation::IdentityLaw {
                        mor: m.id.clone(),
                        composite: r.clone(),
                    });
                }
            }
        }
        // Associativity over all composable triples.
        for f in &self.morphisms {
            for g in &self.morphisms {
                if f.dst != g.src {
                    continue;
                }
                for h in &self.morphisms {
                    if g.dst != h.src {
                        continue;
                    }
                    let gf = match self.compose(&g.id, &f.id) {
                        Some(x) => x,
                        None => continue, // already reported as NotTotal
                    };
                    let hg = match self.compose(&h.id, &g.id) {
                        Some(x) => x,
                        None => continue,
                    };
                    let left = self.compose(hg, &f.id);
                    let right = self.compose(&h.id, gf);
                    match (left, right) {
                        (Some(l), Some(r)) if l != r => {
                            out.push(LawViolation::Associativity {
                                h: h.id.clone(),
                                g: g.id.clone(),
                                f: f.id.clone(),
                                left: l.clone(),
                                right: r.clone(),
                            });
                        }
                        _ => {}
                    }
                }
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// The opposite category: same objects, all arrows reversed,
    /// `g ∘op f = f ∘ g`. Taking the opposite twice restores the original
    /// table (the name toggles a `^op` suffix so the round trip is exact).
    pub fn opposite(&self) -> FinCategory {
        let name = match self.name.strip_suffix("^op") {
            Some(base) => base.to_string(),
            None => format!("{}^op", self.name),
        };
        let morphisms = self
            .morphisms
            .iter()
            .map(|m| Morphism {
                id: m.id.clone(),
                src: m.dst.clone(),
                dst: m.src.clone(),
            })
            .collect();
        let composition = self
            .composition
            .iter()
            .map(|((g, f), r)| ((f.clone(), g.clone()), r.clone()))
            .collect();
        FinCategory {
            name,
            objects: self.objects.clone(),
            morphisms,
            identities: self.identities.clone(),
            composition,
        }
    }

    /// Structural equality ignoring the category name.
    pub fn same_table(&self, other: &FinCategory) -> bool {
        self.objects == other.objects
            && self.morphisms == other.morphisms
            && self.identities == other.identities
            && self.composition == other.composition
    }

    /// If `f` is an isomorphism, its (unique, in a valid category) inverse.
    pub fn is_isomorphism(&self, f: &MorId) -> Result<Option<MorId>> {
        let fm = self
            .morphism(f)
            .ok_or_else(|| Error::structural(format!("unknown morphism {f}")))?;
        let id_src = &self.identities[&fm.src];
        let id_dst = &self.identities[&fm.dst];
        for g in self.hom(&fm.dst, &fm.src) {
            let fg = self.compose(f, &g);
            let gf = self.compose(&g, f);
            if fg == Some(id_dst) && gf == Some(id_src) {
                return Ok(Some(g));
            }
        }
        Ok(None)
    }
}

/// Canonical index shapes for diagrams.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ShapeKind {
    /// `n` objects, identities only.
    Discrete(usize),
    /// Two objects with two parallel arrows `m1, m2 : I1 → I2`.
    ParallelPair,
    /// Three objects with `m1 : I1 → I3` and `m2 : I2 → I3`.
    Cospan,
    /// Opposite of the cospan: `m1 : I3 → I1` and `m2 : I3 → I2`.
    Span,
    Custom(FinCategory),
}

impl ShapeKind {
    /// Stable textual tag used in documents and reports.
    pub fn tag(&self) -> String {
        match self {
            ShapeKind::Discrete(n) => format!("discrete:{n}"),
            ShapeKind::ParallelPair => "parallel_pair".to_string(),
            ShapeKind::Cospan => "cospan".to_string(),
            ShapeKind::Span => "span".to_string(),
            ShapeKind::Custom(c) => format!("custom:{}", c.name()),
        }
    }
}

/// Builds the canonical shape category with deterministic ids
/// (`I1, I2, …` for objects, `m1, m2, …` for non-identity morphisms,
/// `id_I1, …` for identities).
pub fn build_shape(kind: &ShapeKind) -> FinCategory {
    match kind {
        ShapeKind::Custom(cat) => cat.clone(),
        ShapeKind::Discrete(n) => {
            let objects: Vec<ObjId> = (1..=*n).map(|i| ObjId(format!("I{i}"))).collect();
            let mut morphisms = Vec::new();
            let mut identities = BTreeMap::new();
            for o in &objects {
                let id = MorId(format!("id_{o}"));
                morphisms.push(Morphism {
                    id: id.clone(),
                    src: o.clone(),
                    dst: o.clone(),
                });
                identities.insert(o.clone(), id);
            }
            FinCategory::new(format!("discrete{n}"), objects, morphisms, identities, BTreeMap::new())
                .expect("canonical shape is structurally sound")
        }
        ShapeKind::ParallelPair => {
            shape_from_arrows("parallel_pair", 2, &[("m1", 1, 2), ("m2", 1, 2)])
        }
        ShapeKind::Cospan => shape_from_arrows("cospan", 3, &[("m1", 1, 3), ("m2", 2, 3)]),
        ShapeKind::Span => shape_from_arrows("span", 3, &[("m1", 3, 1), ("m2", 3, 2)]),
    }
}

/// Helper for shapes whose non-identity arrows never compose.
fn shape_from_arrows(name: &str, n_objects: usize, arrows: &[(&str, usize, usize)]) -> FinCategory {
    let objects: Vec<ObjId> = (1..=n_objects).map(|i| ObjId(format!("I{i}"))).collect();
    let mut morphisms = Vec::new();
    let mut identities = BTreeMap::new();
    for o in &objects {
        let id = MorId(format!("id_{o}"));
        morphisms.push(Morphism {
            id: id.clone(),
            src: o.clone(),
            dst: o.clone(),
        });
        identities.insert(o.clone(), id);
    }
    for (mid, s, d) in arrows {
        morphisms.push(Morphism {
            id: MorId(mid.to_string()),
            src: ObjId(format!("I{s}")),
            dst: ObjId(format!("I{d}")),
        });
    }
    FinCategory::new(name, objects, morphisms, identities, BTreeMap::new())
        .expect("canonical shape is structurally sound")
}

/// A functor between explicit finite categories, stored as object and
/// morphism tables and validated on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatFunctor {
    source: FinCategory,
    target: FinCategory,
    obj_map: BTreeMap<ObjId, ObjId>,
    mor_map: BTreeMap<MorId, MorId>,
}

impl CatFunctor {
    pub fn new(
        source: FinCategory,
        target: FinCategory,
        obj_map: BTreeMap<ObjId, ObjId>,
        mor_map: BTreeMap<MorId, MorId>,
    ) -> Result<Self> {
        for x in source.objects() {
            let fx = obj_map
                .get(x)
                .ok_or_else(|| Error::structural(format!("functor misses object {x}")))?;
            if !target.has_object(fx) {
                return Err(Error::structural(format!("functor maps {x} to unknown object {fx}")));
            }
        }
        for m in source.morphisms() {
            let fm_id = mor_map
                .get(&m.id)
                .ok_or_else(|| Error::structural(format!("functor misses morphism {}", m.id)))?;
            let fm = target
                .morphism(fm_id)
                .ok_or_else(|| Error::structural(format!("functor maps {} to unknown morphism {fm_id}", m.id)))?;
            if fm.src != obj_map[&m.src] || fm.dst != obj_map[&m.dst] {
                return Err(Error::invalid(format!(
                    "functor image of {} has wrong endpoints",
                    m.id
                )));
            }
        }
        for x in source.objects() {
            let idx = source.identity(x).expect("valid source");
            let image = &mor_map[idx];
            let target_id = target.identity(&obj_map[x]).expect("valid target");
            if image != target_id {
                return Err(Error::invalid(format!("functor does not preserve identity of {x}")));
            }
        }
        for g in source.morphisms() {
            for f in source.morphisms() {
                if f.dst != g.src {
                    continue;
                }
                let gf = source
                    .compose(&g.id, &f.id)
                    .ok_or_else(|| Error::invalid("functor source category not total".to_string()))?;
                let lhs = &mor_map[gf];
                let rhs = target
                    .compose(&mor_map[&g.id], &mor_map[&f.id])
                    .ok_or_else(|| Error::invalid("functor target category not total".to_string()))?;
                if lhs != rhs {
                    return Err(Error::invalid(format!(
                        "functor does not preserve composition of ({}, {})",
                        g.id, f.id
                    )));
                }
            }
        }
        Ok(CatFunctor {
            source,
            target,
            obj_map,
            mor_map,
        })
    }

    pub fn identity(cat: &FinCategory) -> CatFunctor {
        let obj_map = cat.objects().iter().map(|o| (o.clone(), o.clone())).collect();
        let mor_map = cat
            .morphisms()
            .iter()
            .map(|m| (m.id.clone(), m.id.clone()))
            .collect();
        CatFunctor {
            source: cat.clone(),
            target: cat.clone(),
            obj_map,
            mor_map,
        }
    }

    pub fn source(&self) -> &FinCategory {
        &self.source
    }

    pub fn target(&self) -> &FinCategory {
        &self.target
    }

    pub fn apply_obj(&self, x: &ObjId) -> &ObjId {
        &self.obj_map[x]
    }

    pub fn apply_mor(&self, f: &MorId) -> &MorId {
        &self.mor_map[f]
    }
}
