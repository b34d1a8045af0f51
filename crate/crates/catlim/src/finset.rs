//! The category of finite sets and the concrete limit/colimit engine.
//!
//! Projective limits are computed as matching families by filtered
//! cartesian-product enumeration — plain, and in one-to-one correspondence
//! with the natural-transformation definition, which [`lim_as_nat_trans`]
//! realizes independently so the two routes can be cross-checked on every
//! diagram. Inductive limits are computed as union-find quotients of the
//! tagged disjoint union.
//!
//! Canonical encodings keep results byte-stable: a matching family prints
//! as `(I1:x, I2:y)` ordered by shape object, a colimit class is named by
//! its lexicographically smallest member tag `I1:x`.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, ObjId, ShapeKind};
use crate::search::{ComponentSearch, Square};

/// Element identifier inside a finite set.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ElemId(pub String);

impl ElemId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ElemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for ElemId {
    fn from(s: &str) -> Self {
        ElemId(s.to_string())
    }
}

/// A finite set with a stable, sorted element list.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct FinSet {
    id: String,
    elements: Vec<ElemId>,
}

impl FinSet {
    pub fn new(id: impl Into<String>, mut elements: Vec<ElemId>) -> Result<Self> {
        let id = id.into();
        elements.sort();
        for w in elements.windows(2) {
            if w[0] == w[1] {
                return Err(Error::structural(format!(
                    "set {id}: duplicate element {}",
                    w[0]
                )));
            }
        }
        Ok(FinSet { id, elements })
    }

    /// Convenience constructor from string literals.
    pub fn of(id: &str, elements: &[&str]) -> FinSet {
        FinSet::new(id, elements.iter().map(|e| ElemId::from(*e)).collect())
            .expect("literal elements are distinct")
    }

    /// The one-point set `{pt}`.
    pub fn point() -> FinSet {
        FinSet::of("pt", &["pt"])
    }

    pub fn empty(id: &str) -> FinSet {
        FinSet { id: id.to_string(), elements: Vec::new() }
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn elements(&self) -> &[ElemId] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, e: &ElemId) -> bool {
        self.elements.binary_search(e).is_ok()
    }

    pub fn index_of(&self, e: &ElemId) -> Option<usize> {
        self.elements.binary_search(e).ok()
    }
}

/// A total function between finite sets, stored as an explicit table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetFn {
    source: FinSet,
    target: FinSet,
    table: BTreeMap<ElemId, ElemId>,
}

impl SetFn {
    pub fn new(source: FinSet, target: FinSet, table: BTreeMap<ElemId, ElemId>) -> Result<Self> {
        for e in source.elements() {
            match table.get(e) {
                None => {
                    return Err(Error::structural(format!(
                        "function {}→{}: no image for {e}",
                        source.id(),
                        target.id()
                    )))
                }
                Some(v) if !target.contains(v) => {
                    return Err(Error::structural(format!(
                        "function {}→{}: image {v} of {e} not in target",
                        source.id(),
                        target.id()
                    )))
                }
                _ => {}
            }
        }
        if table.len() != source.len() {
            return Err(Error::structural(format!(
                "function {}→{}: table mentions elements outside the source",
                source.id(),
                target.id()
            )));
        }
        Ok(SetFn { source, target, table })
    }

    /// Builds a function from element pairs given as string literals.
    pub fn of(source: &FinSet, target: &FinSet, pairs: &[(&str, &str)]) -> Result<SetFn> {
        let table = pairs
            .iter()
            .map(|(a, b)| (ElemId::from(*a), ElemId::from(*b)))
            .collect();
        SetFn::new(source.clone(), target.clone(), table)
    }

    pub fn identity(set: &FinSet) -> SetFn {
        let table = set.elements().iter().map(|e| (e.clone(), e.clone())).collect();
        SetFn { source: set.clone(), target: set.clone(), table }
    }

    /// Constant function onto one target element.
    pub fn constant(source: &FinSet, target: &FinSet, value: &ElemId) -> Result<SetFn> {
        if !target.contains(value) {
            return Err(Error::structural(format!(
                "constant value {value} not in target {}",
                target.id()
            )));
        }
        let table = source.elements().iter().map(|e| (e.clone(), value.clone())).collect();
        Ok(SetFn { source: source.clone(), target: target.clone(), table })
    }

    pub fn source(&self) -> &FinSet {
        &self.source
    }

    pub fn target(&self) -> &FinSet {
        &self.target
    }

    pub fn table(&self) -> &BTreeMap<ElemId, ElemId> {
        &self.table
    }

    pub fn apply(&self, e: &ElemId) -> &ElemId {
        &self.table[e]
    }

    /// `self ∘ other` (apply `other` first).
    pub fn compose(&self, other: &SetFn) -> Result<SetFn> {
        if other.target != self.source {
            return Err(Error::invalid(format!(
                "cannot compose {}→{} after {}→{}",
                self.source.id(),
                self.target.id(),
                other.source.id(),
                other.target.id()
            )));
        }
        let table = other
            .table
            .iter()
            .map(|(k, v)| (k.clone(), self.table[v].clone()))
            .collect();
        Ok(SetFn { source: other.source.clone(), target: self.target.clone(), table })
    }

    pub fn is_bijection(&self) -> bool {
        if self.source.len() != self.target.len() {
            return false;
        }
        let mut seen = std::collections::BTreeSet::new();
        self.table.values().all(|v| seen.insert(v))
    }
}

/// Whether a diagram reads its morphism assignment along or against the
/// shape arrows.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variance {
    /// A functor `I → Set`: shape arrow `m : i → j` carries a function
    /// `F(i) → F(j)`.
    Covariant,
    /// A functor `I^op → Set` stored over the shape `I`: shape arrow
    /// `m : i → j` carries a function `F(j) → F(i)`.
    Contravariant,
}

/// A set-valued diagram: a shape category plus a functorial assignment.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetDiagram {
    shape: FinCategory,
    variance: Variance,
    objects: BTreeMap<ObjId, FinSet>,
    morphisms: BTreeMap<MorId, SetFn>,
}

impl SetDiagram {
    /// Validates endpoints and functor laws. Identity morphisms may be
    /// omitted from `morphisms`; they are filled in as identity tables.
    pub fn new(
        shape: FinCategory,
        variance: Variance,
        objects: BTreeMap<ObjId, FinSet>,
        mut morphisms: BTreeMap<MorId, SetFn>,
    ) -> Result<Self> {
        for o in shape.objects() {
            if !objects.contains_key(o) {
                return Err(Error::structural(format!("diagram misses shape object {o}")));
            }
        }
        for (o, _) in objects.iter() {
            if !shape.has_object(o) {
                return Err(Error::structural(format!("diagram assigns unknown shape object {o}")));
            }
        }
        for m in shape.morphisms() {
            if shape.is_identity(&m.id) {
                let set = &objects[&m.src];
                let entry = morphisms
                    .entry(m.id.clone())
                    .or_insert_with(|| SetFn::identity(set));
                if entry != &SetFn::identity(set) {
                    return Err(Error::invalid(format!(
                        "diagram maps identity {} to a non-identity table",
                        m.id
                    )));
                }
                continue;
            }
            let f = morphisms
                .get(&m.id)
                .ok_or_else(|| Error::structural(format!("diagram misses shape morphism {}", m.id)))?;
            let (want_src, want_dst) = match variance {
                Variance::Covariant => (&objects[&m.src], &objects[&m.dst]),
                Variance::Contravariant => (&objects[&m.dst], &objects[&m.src]),
            };
            if f.source() != want_src || f.target() != want_dst {
                return Err(Error::invalid(format!(
                    "diagram function for {} has wrong endpoints",
                    m.id
                )));
            }
        }
        for (mid, _) in morphisms.iter() {
            if shape.morphism(mid).is_none() {
                return Err(Error::structural(format!(
                    "diagram assigns unknown shape morphism {mid}"
                )));
            }
        }
        let diagram = SetDiagram { shape, variance, objects, morphisms };
        diagram.check_functor_laws()?;
        Ok(diagram)
    }

    fn check_functor_laws(&self) -> Result<()> {
        for g in self.shape.morphisms() {
            for f in self.shape.morphisms() {
                if f.dst != g.src {
                    continue;
                }
                let c = self
                    .shape
                    .compose(&g.id, &f.id)
                    .ok_or_else(|| Error::invalid("diagram shape is not a valid category".to_string()))?;
                let composite = match self.variance {
                    Variance::Covariant => self.morphisms[&g.id].compose(&self.morphisms[&f.id])?,
                    Variance::Contravariant => {
                        self.morphisms[&f.id].compose(&self.morphisms[&g.id])?
                    }
                };
                if composite != self.morphisms[c] {
                    return Err(Error::invalid(format!(
                        "diagram breaks functor law on composite {} = {}∘{}",
                        c, g.id, f.id
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn shape(&self) -> &FinCategory {
        &self.shape
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn object(&self, o: &ObjId) -> &FinSet {
        &self.objects[o]
    }

    pub fn objects(&self) -> &BTreeMap<ObjId, FinSet> {
        &self.objects
    }

    pub fn morphism(&self, m: &MorId) -> &SetFn {
        &self.morphisms[m]
    }

    /// Constant diagram at `w` over the same shape and variance.
    pub fn constant_at(&self, w: &FinSet) -> SetDiagram {
        let objects = self.objects.keys().map(|o| (o.clone(), w.clone())).collect();
        let morphisms = self
            .morphisms
            .keys()
            .map(|m| (m.clone(), SetFn::identity(w)))
            .collect();
        SetDiagram {
            shape: self.shape.clone(),
            variance: self.variance,
            objects,
            morphisms,
        }
    }

    fn non_identity_morphisms(&self) -> impl Iterator<Item = &crate::fincat::Morphism> {
        self.shape
            .morphisms()
            .iter()
            .filter(|m| !self.shape.is_identity(&m.id))
    }
}

/// Which universal construction a [`LimitResult`] came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LimitKind {
    Projective,
    Inductive,
}

/// A computed limit or colimit: the apex set plus one leg per shape object
/// (projections out of a limit, injections into a colimit).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LimitResult {
    pub kind: LimitKind,
    pub apex: FinSet,
    pub legs: BTreeMap<ObjId, SetFn>,
}

/// Canonical encoding of a matching family, ordered by shape object id.
pub fn family_element(components: &BTreeMap<ObjId, ElemId>) -> ElemId {
    let inner: Vec<String> = components.iter().map(|(o, e)| format!("{o}:{e}")).collect();
    ElemId(format!("({})", inner.join(", ")))
}

fn tag(obj: &ObjId, elem: &ElemId) -> ElemId {
    ElemId(format!("{obj}:{elem}"))
}

/// The projective limit as the set of matching families: tuples
/// `(x_i ∈ F(i))` with `F(m)(x_j) = x_i` for every shape arrow `m : i → j`.
pub fn lim_matching_families(diagram: &SetDiagram) -> Result<LimitResult> {
    lim_matching_families_with_caps(diagram, &Caps::default())
}

pub fn lim_matching_families_with_caps(diagram: &SetDiagram, caps: &Caps) -> Result<LimitResult> {
    if diagram.variance() != Variance::Contravariant {
        return Err(Error::invalid(
            "projective limits take a contravariant diagram".to_string(),
        ));
    }
    let objs: Vec<&ObjId> = diagram.objects().keys().collect();
    let mut product_size: u64 = 1;
    for o in &objs {
        product_size = product_size.saturating_mul(diagram.object(o).len() as u64);
        if product_size > caps.max_functions {
            return Err(Error::capacity(format!(
                "limit enumeration over {} exceeds cap {}",
                diagram.shape().name(),
                caps.max_functions
            )));
        }
    }
    let mut families = Vec::new();
    let mut counters = vec![0usize; objs.len()];
    let sizes: Vec<usize> = objs.iter().map(|o| diagram.object(o).len()).collect();
    if sizes.iter().all(|&s| s > 0) || objs.is_empty() {
        'outer: loop {
            let assignment: BTreeMap<ObjId, ElemId> = objs
                .iter()
                .zip(&counters)
                .map(|(o, &i)| ((*o).clone(), diagram.object(o).elements()[i].clone()))
                .collect();
            let matches = diagram.non_identity_morphisms().all(|m| {
                let f = diagram.morphism(&m.id); // F(j) → F(i) for m : i → j
                f.apply(&assignment[&m.dst]) == &assignment[&m.src]
            });
            if matches {
                families.push(assignment);
            }
            // Odometer increment.
            let mut k = objs.len();
            loop {
                if k == 0 {
                    break 'outer;
                }
                k -= 1;
                counters[k] += 1;
                if counters[k] < sizes[k] {
                    break;
                }
                counters[k] = 0;
            }
        }
    }
    build_limit_result(diagram, families)
}

fn build_limit_result(
    diagram: &SetDiagram,
    families: Vec<BTreeMap<ObjId, ElemId>>,
) -> Result<LimitResult> {
    let apex_elems: Vec<ElemId> = families.iter().map(family_element).collect();
    let apex = FinSet::new("lim", apex_elems)?;
    let mut legs = BTreeMap::new();
    for o in diagram.objects().keys() {
        let table = families
            .iter()
            .map(|fam| (family_element(fam), fam[o].clone()))
            .collect();
        legs.insert(
            o.clone(),
            SetFn::new(apex.clone(), diagram.object(o).clone(), table)?,
        );
    }
    Ok(LimitResult { kind: LimitKind::Projective, apex, legs })
}

/// The projective limit as the set of natural transformations from the
/// constant point diagram — definitionally the same set, enumerated by an
/// independent route and canonically encoded for comparison.
pub fn lim_as_nat_trans(diagram: &SetDiagram) -> Result<LimitResult> {
    lim_as_nat_trans_with_caps(diagram, &Caps::default())
}

pub fn lim_as_nat_trans_with_caps(diagram: &SetDiagram, caps: &Caps) -> Result<LimitResult> {
    if diagram.variance() != Variance::Contravariant {
        return Err(Error::invalid(
            "projective limits take a contravariant diagram".to_string(),
        ));
    }
    let pt = diagram.constant_at(&FinSet::point());
    let transformations = enumerate_diagram_transformations(&pt, diagram, false, caps)?;
    let families: Vec<BTreeMap<ObjId, ElemId>> = transformations
        .into_iter()
        .map(|components| {
            components
                .into_iter()
                .map(|(o, f)| {
                    let value = f.apply(&ElemId::from("pt")).clone();
                    (o, value)
                })
                .collect()
        })
        .collect();
    build_limit_result(diagram, families)
}

/// Enumerates all natural transformations between two parallel diagrams of
/// the same shape and variance: component functions `F(i) → G(i)` making
/// every naturality square commute. With `bijective`, only families of
/// bijections are returned (natural isomorphisms).
pub fn enumerate_diagram_transformations(
    f: &SetDiagram,
    g: &SetDiagram,
    bijective: bool,
    caps: &Caps,
) -> Result<Vec<BTreeMap<ObjId, SetFn>>> {
    enumerate_diagram_transformations_limited(f, g, bijective, caps, None)
}

/// As [`enumerate_diagram_transformations`], stopping after `max_results`.
pub fn enumerate_diagram_transformations_limited(
    f: &SetDiagram,
    g: &SetDiagram,
    bijective: bool,
    caps: &Caps,
    max_results: Option<usize>,
) -> Result<Vec<BTreeMap<ObjId, SetFn>>> {
    if !f.shape().same_table(g.shape()) || f.variance() != g.variance() {
        return Err(Error::invalid(
            "diagram transformation requires matching shapes and variance".to_string(),
        ));
    }
    let objs: Vec<&ObjId> = f.objects().keys().collect();
    let slot_of: BTreeMap<&ObjId, usize> = objs.iter().enumerate().map(|(i, o)| (*o, i)).collect();
    let mut squares = Vec::new();
    for m in f.shape().morphisms() {
        if f.shape().is_identity(&m.id) {
            continue;
        }
        // Covariant m : i → j gives θ_j ∘ F(m) = G(m) ∘ θ_i — a square from
        // slot i to slot j. Contravariant swaps the roles of i and j.
        let (from_obj, to_obj) = match f.variance() {
            Variance::Covariant => (&m.src, &m.dst),
            Variance::Contravariant => (&m.dst, &m.src),
        };
        let fm = f.morphism(&m.id);
        let gm = g.morphism(&m.id);
        let src_map = fm
            .source()
            .elements()
            .iter()
            .map(|e| {
                f.object(to_obj)
                    .index_of(fm.apply(e))
                    .expect("image in target set")
            })
            .collect();
        let dst_map = gm
            .source()
            .elements()
            .iter()
            .map(|e| {
                g.object(to_obj)
                    .index_of(gm.apply(e))
                    .expect("image in target set")
            })
            .collect();
        squares.push(Square {
            from: slot_of[from_obj],
            to: slot_of[to_obj],
            src_map,
            dst_map,
        });
    }
    let problem = ComponentSearch {
        src_sizes: objs.iter().map(|o| f.object(o).len()).collect(),
        dst_sizes: objs.iter().map(|o| g.object(o).len()).collect(),
        squares,
        bijective,
    };
    let solutions = problem.enumerate(caps.search_budget, max_results)?;
    let mut out = Vec::new();
    for sol in solutions {
        let mut components = BTreeMap::new();
        for (slot, o) in objs.iter().enumerate() {
            let src = f.object(o);
            let dst = g.object(o);
            let table = src
                .elements()
                .iter()
                .enumerate()
                .map(|(i, e)| (e.clone(), dst.elements()[sol[slot][i]].clone()))
                .collect();
            components.insert((*o).clone(), SetFn::new(src.clone(), dst.clone(), table)?);
        }
        out.push(components);
    }
    Ok(out)
}

/// Union-find over element indices, with path halving.
struct UnionFind {
    parents: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parents: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parents[x] != x {
            self.parents[x] = self.parents[self.parents[x]];
            x = self.parents[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let ra = self.find(a);
        let rb = self.find(b);
        if ra != rb {
            // Attach the larger root to the smaller so class names stay
            // stable under the smallest-member convention.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parents[hi] = lo;
        }
    }
}

/// The inductive limit: tagged disjoint union of the diagram sets,
/// quotiented by the relation generated by `x ∼ F(m)(x)`.
pub fn colim(diagram: &SetDiagram) -> Result<LimitResult> {
    if diagram.variance() != Variance::Covariant {
        return Err(Error::invalid(
            "inductive limits take a covariant diagram".to_string(),
        ));
    }
    // Tags sorted so that index order equals lexicographic tag order; the
    // union-find then keeps the smallest member as every class root.
    let mut tags: Vec<ElemId> = Vec::new();
    let mut tag_index: BTreeMap<ElemId, usize> = BTreeMap::new();
    for (o, set) in diagram.objects() {
        for e in set.elements() {
            tags.push(tag(o, e));
        }
    }
    tags.sort();
    for (i, t) in tags.iter().enumerate() {
        tag_index.insert(t.clone(), i);
    }
    let mut uf = UnionFind::new(tags.len());
    for m in diagram.non_identity_morphisms() {
        let f = diagram.morphism(&m.id); // F(i) → F(j) for m : i → j
        for e in diagram.object(&m.src).elements() {
            let a = tag_index[&tag(&m.src, e)];
            let b = tag_index[&tag(&m.dst, f.apply(e))];
            uf.union(a, b);
        }
    }
    let class_of: Vec<usize> = (0..tags.len()).map(|i| uf.find(i)).collect();
    let mut class_names: BTreeMap<usize, ElemId> = BTreeMap::new();
    for (i, &root) in class_of.iter().enumerate() {
        let name = class_names.entry(root).or_insert_with(|| tags[i].clone());
        if tags[i] < *name {
            *name = tags[i].clone();
        }
    }
    let apex_elems: Vec<ElemId> = class_names.values().cloned().collect();
    let apex = FinSet::new("colim", apex_elems)?;
    let mut legs = BTreeMap::new();
    for (o, set) in diagram.objects() {
        let table = set
            .elements()
            .iter()
            .map(|e| {
                let idx = tag_index[&tag(o, e)];
                (e.clone(), class_names[&class_of[idx]].clone())
            })
            .collect();
        legs.insert(o.clone(), SetFn::new(set.clone(), apex.clone(), table)?);
    }
    Ok(LimitResult { kind: LimitKind::Inductive, apex, legs })
}

fn discrete_pair_diagram(variance: Variance, x: &FinSet, y: &FinSet) -> Result<SetDiagram> {
    let shape = crate::fincat::build_shape(&ShapeKind::Discrete(2));
    let objects = [
        (ObjId::from("I1"), x.clone()),
        (ObjId::from("I2"), y.clone()),
    ]
    .into();
    SetDiagram::new(shape, variance, objects, BTreeMap::new())
}

/// Binary product `X × Y` via the discrete two-object diagram.
pub fn product(x: &FinSet, y: &FinSet) -> Result<LimitResult> {
    lim_matching_families(&discrete_pair_diagram(Variance::Contravariant, x, y)?)
}

/// Binary coproduct `X + Y` via the discrete two-object diagram.
pub fn coproduct(x: &FinSet, y: &FinSet) -> Result<LimitResult> {
    colim(&discrete_pair_diagram(Variance::Covariant, x, y)?)
}

/// Pullback of `f : X → Z ← Y : g`, computed over the span shape.
pub fn pullback(f: &SetFn, g: &SetFn) -> Result<LimitResult> {
    if f.target() != g.target() {
        return Err(Error::invalid("pullback requires a common codomain".to_string()));
    }
    let shape = crate::fincat::build_shape(&ShapeKind::Span);
    let objects = [
        (ObjId::from("I1"), f.source().clone()),
        (ObjId::from("I2"), g.source().clone()),
        (ObjId::from("I3"), f.target().clone()),
    ]
    .into();
    let morphisms = [
        (MorId::from("m1"), f.clone()),
        (MorId::from("m2"), g.clone()),
    ]
    .into();
    lim_matching_families(&SetDiagram::new(shape, Variance::Contravariant, objects, morphisms)?)
}

/// Equalizer of a parallel pair `f, g : X → Y`; with `g` constant at `b`
/// the apex is canonically isomorphic to the preimage `f⁻¹(b)`.
pub fn equalizer(f: &SetFn, g: &SetFn) -> Result<LimitResult> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(Error::invalid("equalizer requires a parallel pair".to_string()));
    }
    let shape = crate::fincat::build_shape(&ShapeKind::ParallelPair);
    let objects = [
        (ObjId::from("I1"), f.target().clone()),
        (ObjId::from("I2"), f.source().clone()),
    ]
    .into();
    let morphisms = [
        (MorId::from("m1"), f.clone()),
        (MorId::from("m2"), g.clone()),
    ]
    .into();
    lim_matching_families(&SetDiagram::new(shape, Variance::Contravariant, objects, morphisms)?)
}

/// Coequalizer of a parallel pair `f, g : X → Y`: the quotient of `Y` by
/// the relation generated by `f(x) ∼ g(x)`.
pub fn coequalizer(f: &SetFn, g: &SetFn) -> Result<LimitResult> {
    if f.source() != g.source() || f.target() != g.target() {
        return Err(Error::invalid("coequalizer requires a parallel pair".to_string()));
    }
    let shape = crate::fincat::build_shape(&ShapeKind::ParallelPair);
    let objects = [
        (ObjId::from("I1"), f.source().clone()),
        (ObjId::from("I2"), f.target().clone()),
    ]
    .into();
    let morphisms = [
        (MorId::from("m1"), f.clone()),
        (MorId::from("m2"), g.clone()),
    ]
    .into();
    colim(&SetDiagram::new(shape, Variance::Covariant, objects, morphisms)?)
}

/// Outcome of a universal-property check; a failure carries the probe and
/// cone that witnessed it together with the observed mediator count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UniversalPropertyReport {
    pub holds: bool,
    pub counterexample: Option<UpCounterexample>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpCounterexample {
    pub probe: FinSet,
    /// Cone (or cocone) components keyed by shape object; empty when the
    /// failure is a broken leg-commutation.
    pub cone: BTreeMap<ObjId, BTreeMap<ElemId, ElemId>>,
    pub mediators: usize,
    pub detail: String,
}

/// Checks that a computed result really is a limit (resp. colimit): every
/// leg commutes with the diagram, and for each probe apex every cone
/// (resp. cocone) factors through the result by exactly one mediating
/// function.
pub fn verify_universal_property(
    result: &LimitResult,
    diagram: &SetDiagram,
    probes: &[FinSet],
) -> Result<UniversalPropertyReport> {
    verify_universal_property_with_caps(result, diagram, probes, &Caps::default())
}

pub fn verify_universal_property_with_caps(
    result: &LimitResult,
    diagram: &SetDiagram,
    probes: &[FinSet],
    caps: &Caps,
) -> Result<UniversalPropertyReport> {
    // Leg commutation first: a mutated leg usually breaks the cone itself.
    for m in diagram.non_identity_morphisms() {
        let f = diagram.morphism(&m.id);
        let (lhs, rhs) = match result.kind {
            // Legs π_i : apex → F(i); need F(m) ∘ π_j = π_i for m : i → j.
            LimitKind::Projective => (
                f.compose(&result.legs[&m.dst])?,
                result.legs[&m.src].clone(),
            ),
            // Legs ι_i : F(i) → apex; need ι_j ∘ F(m) = ι_i for m : i → j.
            LimitKind::Inductive => (
                result.legs[&m.dst].compose(f)?,
                result.legs[&m.src].clone(),
            ),
        };
        if lhs != rhs {
            return Ok(UniversalPropertyReport {
                holds: false,
                counterexample: Some(UpCounterexample {
                    probe: FinSet::empty("none"),
                    cone: BTreeMap::new(),
                    mediators: 0,
                    detail: format!("leg commutation fails at shape morphism {}", m.id),
                }),
            });
        }
    }
    for probe in probes {
        let report = match result.kind {
            LimitKind::Projective => check_limit_probe(result, diagram, probe, caps)?,
            LimitKind::Inductive => check_colimit_probe(result, diagram, probe, caps)?,
        };
        if !report.holds {
            return Ok(report);
        }
    }
    Ok(UniversalPropertyReport { holds: true, counterexample: None })
}

fn check_limit_probe(
    result: &LimitResult,
    diagram: &SetDiagram,
    probe: &FinSet,
    caps: &Caps,
) -> Result<UniversalPropertyReport> {
    let const_probe = diagram.constant_at(probe);
    let cones = enumerate_diagram_transformations(&const_probe, diagram, false, caps)?;
    for cone in cones {
        // Mediator u : probe → apex with leg_i ∘ u = cone_i for all i; each
        // probe element's image is pinned down independently.
        let mut mediators: usize = 1;
        for w in probe.elements() {
            let candidates = result
                .apex
                .elements()
                .iter()
                .filter(|a| {
                    diagram
                        .objects()
                        .keys()
                        .all(|o| result.legs[o].apply(a) == cone[o].apply(w))
                })
                .count();
            mediators = mediators.saturating_mul(candidates);
        }
        if probe.is_empty() {
            mediators = 1; // the empty function is the unique mediator
        }
        if mediators != 1 {
            return Ok(UniversalPropertyReport {
                holds: false,
                counterexample: Some(UpCounterexample {
                    probe: probe.clone(),
                    cone: cone.iter().map(|(o, f)| (o.clone(), f.table().clone())).collect(),
                    mediators,
                    detail: format!("cone from {} has {} mediators", probe.id(), mediators),
                }),
            });
        }
    }
    Ok(UniversalPropertyReport { holds: true, counterexample: None })
}

fn check_colimit_probe(
    result: &LimitResult,
    diagram: &SetDiagram,
    probe: &FinSet,
    caps: &Caps,
) -> Result<UniversalPropertyReport> {
    let const_probe = diagram.constant_at(probe);
    let cocones = enumerate_diagram_transformations(diagram, &const_probe, false, caps)?;
    for cocone in cocones {
        // Mediator u : apex → probe with u ∘ leg_i = cocone_i; apex classes
        // hit by a leg are pinned, untouched classes are free.
        let mut pinned: BTreeMap<&ElemId, &ElemId> = BTreeMap::new();
        let mut consistent = true;
        'pinning: for (o, set) in diagram.objects() {
            for e in set.elements() {
                let class = result.legs[o].apply(e);
                let want = cocone[o].apply(e);
                match pinned.get(class) {
                    Some(prev) if *prev != want => {
                        consistent = false;
                        break 'pinning;
                    }
                    _ => {
                        pinned.insert(class, want);
                    }
                }
            }
        }
        let mediators = if !consistent {
            0
        } else {
            let free = result
                .apex
                .elements()
                .iter()
                .filter(|a| !pinned.contains_key(a))
                .count();
            (probe.len() as u64)
                .checked_pow(free as u32)
                .unwrap_or(u64::MAX) as usize
        };
        if mediators != 1 {
            return Ok(UniversalPropertyReport {
                holds: false,
                counterexample: Some(UpCounterexample {
                    probe: probe.clone(),
                    cone: cocone.iter().map(|(o, f)| (o.clone(), f.table().clone())).collect(),
                    mediators,
                    detail: format!("cocone into {} has {} mediators", probe.id(), mediators),
                }),
            });
        }
    }
    Ok(UniversalPropertyReport { holds: true, counterexample: None })
}

/// All functions `X → Y` in lexicographic order of their tables.
pub fn enumerate_functions(x: &FinSet, y: &FinSet, caps: &Caps) -> Result<Vec<SetFn>> {
    let count = (y.len() as u64)
        .checked_pow(x.len() as u32)
        .unwrap_or(u64::MAX);
    if count > caps.max_functions {
        return Err(Error::capacity(format!(
            "{}^{} functions from {} to {} exceed cap {}",
            y.len(),
            x.len(),
            x.id(),
            y.id(),
            caps.max_functions
        )));
    }
    if x.is_empty() {
        return Ok(vec![SetFn::new(x.clone(), y.clone(), BTreeMap::new())?]);
    }
    if y.is_empty() {
        return Ok(Vec::new());
    }
    let mut out = Vec::with_capacity(count as usize);
    let mut counters = vec![0usize; x.len()];
    loop {
        let table = x
            .elements()
            .iter()
            .zip(&counters)
            .map(|(e, &i)| (e.clone(), y.elements()[i].clone()))
            .collect();
        out.push(SetFn::new(x.clone(), y.clone(), table)?);
        let mut k = x.len();
        loop {
            if k == 0 {
                return Ok(out);
            }
            k -= 1;
            counters[k] += 1;
            if counters[k] < y.len() {
                break;
            }
            counters[k] = 0;
        }
    }
}

/// The canonical bijection pairing sorted elements, present iff the sets
/// have equal cardinality.
pub fn iso_sets(x: &FinSet, y: &FinSet) -> Option<SetFn> {
    if x.len() != y.len() {
        return None;
    }
    let table = x
        .elements()
        .iter()
        .zip(y.elements())
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();
    Some(SetFn { source: x.clone(), target: y.clone(), table })
}
