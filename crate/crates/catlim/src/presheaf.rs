//! Presheaves at finite scale: Yoneda embeddings, natural transformations,
//! pointwise limits, lifted limits of category-valued diagrams,
//! representability search, the category of elements and the Yoneda
//! extension.
//!
//! Two flavours of presheaf are stored with ordinary function tables:
//! contravariant ones (the presheaf category proper) and covariant ones
//! (`Set^op`-valued presheaves read as plain functors to `Set`). Because a
//! morphism of `Set^op`-valued presheaves reverses componentwise, limits on
//! the covariant side are computed by the *colimit* engine and vice versa —
//! the role swap is applied by [`PresheafDiagram::pointwise_variance`] and
//! noted where it happens, so each public operation still carries its
//! mathematical name.

use std::collections::BTreeMap;

use crate::caps::Caps;
use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, Morphism, ObjId};
use crate::finset::{
    colim, enumerate_diagram_transformations, lim_matching_families_with_caps, ElemId, FinSet,
    LimitResult, SetDiagram, SetFn, Variance,
};

/// A finite-set-valued presheaf over an explicit base category.
///
/// Structurally this is a set diagram whose shape is the base category;
/// the wrapper fixes the vocabulary (values, actions) and adds the
/// presheaf-specific operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SetPresheaf(SetDiagram);

impl SetPresheaf {
    /// Validates functor laws on construction; identity actions may be
    /// omitted and are filled in.
    pub fn new(
        base: &FinCategory,
        variance: Variance,
        values: BTreeMap<ObjId, FinSet>,
        actions: BTreeMap<MorId, SetFn>,
    ) -> Result<Self> {
        Ok(SetPresheaf(SetDiagram::new(base.clone(), variance, values, actions)?))
    }

    pub fn base(&self) -> &FinCategory {
        self.0.shape()
    }

    pub fn variance(&self) -> Variance {
        self.0.variance()
    }

    pub fn value(&self, x: &ObjId) -> &FinSet {
        self.0.object(x)
    }

    pub fn values(&self) -> &BTreeMap<ObjId, FinSet> {
        self.0.objects()
    }

    pub fn action(&self, f: &MorId) -> &SetFn {
        self.0.morphism(f)
    }

    pub fn as_diagram(&self) -> &SetDiagram {
        &self.0
    }

    /// The constant one-point presheaf.
    pub fn constant_point(base: &FinCategory, variance: Variance) -> SetPresheaf {
        let pt = FinSet::point();
        let values = base.objects().iter().map(|o| (o.clone(), pt.clone())).collect();
        let actions = base
            .morphisms()
            .iter()
            .map(|m| (m.id.clone(), SetFn::identity(&pt)))
            .collect();
        SetPresheaf::new(base, variance, values, actions).expect("constant presheaf is functorial")
    }

    /// Total number of elements across all values.
    pub fn total_size(&self) -> usize {
        self.values().values().map(|s| s.len()).sum()
    }
}

/// The hom-set `Hom(x, y)` as a finite set whose elements are morphism ids.
pub fn hom_set(cat: &FinCategory, x: &ObjId, y: &ObjId) -> FinSet {
    FinSet::new(format!("hom({x},{y})"), cat.hom(x, y).into_iter().map(|m| ElemId(m.0)).collect())
        .expect("hom-set ids are unique")
}

/// The contravariant Yoneda embedding at `x`: `Z ↦ Hom(Z, x)` with actions
/// by precomposition.
pub fn yoneda_h(cat: &FinCategory, x: &ObjId) -> Result<SetPresheaf> {
    if !cat.has_object(x) {
        return Err(Error::structural(format!("unknown object {x}")));
    }
    let values: BTreeMap<ObjId, FinSet> = cat
        .objects()
        .iter()
        .map(|z| (z.clone(), hom_set(cat, z, x)))
        .collect();
    let mut actions = BTreeMap::new();
    for f in cat.morphisms() {
        // f : Z → W acts Hom(W, x) → Hom(Z, x), g ↦ g ∘ f.
        let src = &values[&f.dst];
        let dst = &values[&f.src];
        let table = src
            .elements()
            .iter()
            .map(|g| {
                let composite = cat
                    .compose(&MorId(g.0.clone()), &f.id)
                    .expect("valid category is total");
                (g.clone(), ElemId(composite.0.clone()))
            })
            .collect();
        actions.insert(f.id.clone(), SetFn::new(src.clone(), dst.clone(), table)?);
    }
    SetPresheaf::new(cat, Variance::Contravariant, values, actions)
}

/// The covariant Yoneda embedding at `x`: `Z ↦ Hom(x, Z)` with actions by
/// postcomposition.
pub fn yoneda_k(cat: &FinCategory, x: &ObjId) -> Result<SetPresheaf> {
    if !cat.has_object(x) {
        return Err(Error::structural(format!("unknown object {x}")));
    }
    let values: BTreeMap<ObjId, FinSet> = cat
        .objects()
        .iter()
        .map(|z| (z.clone(), hom_set(cat, x, z)))
        .collect();
    let mut actions = BTreeMap::new();
    for f in cat.morphisms() {
        // f : Z → W acts Hom(x, Z) → Hom(x, W), g ↦ f ∘ g.
        let src = &values[&f.src];
        let dst = &values[&f.dst];
        let table = src
            .elements()
            .iter()
            .map(|g| {
                let composite = cat
                    .compose(&f.id, &MorId(g.0.clone()))
                    .expect("valid category is total");
                (g.clone(), ElemId(composite.0.clone()))
            })
            .collect();
        actions.insert(f.id.clone(), SetFn::new(src.clone(), dst.clone(), table)?);
    }
    SetPresheaf::new(cat, Variance::Covariant, values, actions)
}

/// Yoneda image matching the requested variance.
pub fn yoneda(cat: &FinCategory, x: &ObjId, variance: Variance) -> Result<SetPresheaf> {
    match variance {
        Variance::Contravariant => yoneda_h(cat, x),
        Variance::Covariant => yoneda_k(cat, x),
    }
}

/// A natural transformation between parallel presheaves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NatTrans {
    source: SetPresheaf,
    target: SetPresheaf,
    components: BTreeMap<ObjId, SetFn>,
}

impl NatTrans {
    pub fn new(
        source: SetPresheaf,
        target: SetPresheaf,
        components: BTreeMap<ObjId, SetFn>,
    ) -> Result<Self> {
        if source.base() != target.base() || source.variance() != target.variance() {
            return Err(Error::invalid(
                "natural transformation requires a shared base and variance".to_string(),
            ));
        }
        for z in source.base().objects() {
            let c = components
                .get(z)
                .ok_or_else(|| Error::structural(format!("missing component at {z}")))?;
            if c.source() != source.value(z) || c.target() != target.value(z) {
                return Err(Error::invalid(format!("component at {z} has wrong endpoints")));
            }
        }
        let nt = NatTrans { source, target, components };
        for m in nt.source.base().morphisms() {
            if nt.source.base().is_identity(&m.id) {
                continue;
            }
            if !nt.square_commutes(m) {
                return Err(Error::invalid(format!("naturality square fails at {}", m.id)));
            }
        }
        Ok(nt)
    }

    fn square_commutes(&self, m: &Morphism) -> bool {
        let fm = self.source.action(&m.id);
        let gm = self.target.action(&m.id);
        // Contravariant: θ_src ∘ F(m) = G(m) ∘ θ_dst on F(dst);
        // covariant: θ_dst ∘ F(m) = G(m) ∘ θ_src on F(src).
        let (near, far) = match self.source.variance() {
            Variance::Contravariant => (&m.src, &m.dst),
            Variance::Covariant => (&m.dst, &m.src),
        };
        let lhs = self.components[near].compose(fm).expect("endpoints validated");
        let rhs = gm.compose(&self.components[far]).expect("endpoints validated");
        lhs == rhs
    }

    pub fn identity(p: &SetPresheaf) -> NatTrans {
        let components = p
            .values()
            .iter()
            .map(|(o, s)| (o.clone(), SetFn::identity(s)))
            .collect();
        NatTrans { source: p.clone(), target: p.clone(), components }
    }

    pub fn source(&self) -> &SetPresheaf {
        &self.source
    }

    pub fn target(&self) -> &SetPresheaf {
        &self.target
    }

    pub fn component(&self, z: &ObjId) -> &SetFn {
        &self.components[z]
    }

    pub fn components(&self) -> &BTreeMap<ObjId, SetFn> {
        &self.components
    }

    /// Vertical composition `other ∘ self` (apply `self` first).
    pub fn then(&self, other: &NatTrans) -> Result<NatTrans> {
        if self.target != other.source {
            return Err(Error::invalid("vertical composition endpoint mismatch".to_string()));
        }
        let components = self
            .components
            .iter()
            .map(|(o, f)| Ok((o.clone(), other.components[o].compose(f)?)))
            .collect::<Result<_>>()?;
        Ok(NatTrans {
            source: self.source.clone(),
            target: other.target.clone(),
            components,
        })
    }

    pub fn is_isomorphism(&self) -> bool {
        self.components.values().all(|c| c.is_bijection())
    }

    /// Canonical string encoding, stable across runs: components ordered by
    /// object, entries by source element.
    pub fn encode(&self) -> ElemId {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|(o, f)| {
                let entries: Vec<String> = f
                    .table()
                    .iter()
                    .map(|(a, b)| format!("{a}->{b}"))
                    .collect();
                format!("{o}[{}]", entries.join(","))
            })
            .collect();
        ElemId(format!("nt({})", parts.join(";")))
    }
}

/// Exhaustive, deterministic enumeration of all natural transformations
/// `F ⇒ G`.
pub fn enumerate_nat_trans(f: &SetPresheaf, g: &SetPresheaf, caps: &Caps) -> Result<Vec<NatTrans>> {
    let raw = enumerate_diagram_transformations(f.as_diagram(), g.as_diagram(), false, caps)?;
    Ok(raw
        .into_iter()
        .map(|components| NatTrans {
            source: f.clone(),
            target: g.clone(),
            components,
        })
        .collect())
}

/// All natural isomorphisms `F ⇒ G` (componentwise bijections).
pub fn natural_isos(f: &SetPresheaf, g: &SetPresheaf, caps: &Caps) -> Result<Vec<NatTrans>> {
    let raw = enumerate_diagram_transformations(f.as_diagram(), g.as_diagram(), true, caps)?;
    Ok(raw
        .into_iter()
        .map(|components| NatTrans {
            source: f.clone(),
            target: g.clone(),
            components,
        })
        .collect())
}

/// Whether `F ≅ G` naturally; budget exhaustion is an error, never a "no".
pub fn naturally_isomorphic(f: &SetPresheaf, g: &SetPresheaf, caps: &Caps) -> Result<bool> {
    if f.base() != g.base() || f.variance() != g.variance() {
        return Ok(false);
    }
    for z in f.base().objects() {
        if f.value(z).len() != g.value(z).len() {
            return Ok(false);
        }
    }
    let raw = crate::finset::enumerate_diagram_transformations_limited(
        f.as_diagram(),
        g.as_diagram(),
        true,
        caps,
        Some(1),
    )?;
    Ok(!raw.is_empty())
}

/// Result of a Yoneda-lemma check at one object: the canonical bijection
/// `u ↦ θ^u` between `A(x)` and `Nat(y(x), A)` together with its verdict.
#[derive(Clone, Debug)]
pub struct YonedaWitness {
    pub holds: bool,
    /// Pairs `(u, θ^u)`; the canonical direction of the bijection.
    pub bijection: Vec<(ElemId, NatTrans)>,
    pub nat_trans_count: usize,
    pub detail: String,
}

/// Checks `Nat(h(x), A) ≅ A(x)` (contravariant `A`) or
/// `Nat(k(x), B) ≅ B(x)` (covariant `B`, realizing `Hom(B, k(x))` with the
/// componentwise reversal) via the canonical bijection `θ ↦ θ_x(id_x)`.
///
/// A `false` verdict indicates an engine bug, never a mathematical outcome.
pub fn yoneda_check(
    cat: &FinCategory,
    x: &ObjId,
    a: &SetPresheaf,
    caps: &Caps,
) -> Result<YonedaWitness> {
    let image = yoneda(cat, x, a.variance())?;
    let all = enumerate_nat_trans(&image, a, caps)?;
    let id_x = ElemId(cat.identity(x).expect("valid category").0.clone());
    // Canonical transformation for u ∈ A(x): component at Z sends
    // g ∈ Hom(Z,x) (resp. Hom(x,Z)) to A(g)(u).
    let mut bijection = Vec::new();
    for u in a.value(x).elements() {
        let mut components = BTreeMap::new();
        for z in cat.objects() {
            let src = image.value(z);
            let dst = a.value(z);
            let table: BTreeMap<ElemId, ElemId> = src
                .elements()
                .iter()
                .map(|g| (g.clone(), a.action(&MorId(g.0.clone())).apply(u).clone()))
                .collect();
            components.insert(z.clone(), SetFn::new(src.clone(), dst.clone(), table)?);
        }
        let theta = NatTrans::new(image.clone(), a.clone(), components)?;
        bijection.push((u.clone(), theta));
    }
    let mut holds = all.len() == a.value(x).len();
    for (u, theta) in &bijection {
        if theta.component(x).apply(&id_x) != u {
            holds = false;
        }
        if !all.contains(theta) {
            holds = false;
        }
    }
    // Injectivity: distinct u yield distinct transformations.
    for i in 0..bijection.len() {
        for j in (i + 1)..bijection.len() {
            if bijection[i].1 == bijection[j].1 {
                holds = false;
            }
        }
    }
    let detail = format!(
        "|Nat| = {}, |A({x})| = {}",
        all.len(),
        a.value(x).len()
    );
    Ok(YonedaWitness { holds, bijection, nat_trans_count: all.len(), detail })
}

/// A diagram of presheaves over a shape category.
///
/// The stored direction of each morphism's transformation follows the
/// pointwise computation: when the pointwise engine is the colimit
/// (`pointwise_variance() == Covariant`) a shape arrow `m : i → j` carries
/// `δ(i) ⇒ δ(j)`, otherwise `δ(j) ⇒ δ(i)`.
#[derive(Clone, Debug)]
pub struct PresheafDiagram {
    base: FinCategory,
    shape: FinCategory,
    variance: Variance,
    member_variance: Variance,
    objects: BTreeMap<ObjId, SetPresheaf>,
    morphisms: BTreeMap<MorId, NatTrans>,
}

impl PresheafDiagram {
    pub fn new(
        base: &FinCategory,
        shape: FinCategory,
        variance: Variance,
        member_variance: Variance,
        objects: BTreeMap<ObjId, SetPresheaf>,
        mut morphisms: BTreeMap<MorId, NatTrans>,
    ) -> Result<Self> {
        for o in shape.objects() {
            let p = objects
                .get(o)
                .ok_or_else(|| Error::structural(format!("presheaf diagram misses object {o}")))?;
            if p.base() != base {
                return Err(Error::invalid(format!("member at {o} lives over a different base")));
            }
            if p.variance() != member_variance {
                return Err(Error::invalid(format!("member at {o} has the wrong variance")));
            }
        }
        let pointwise = pointwise_variance(variance, member_variance);
        for m in shape.morphisms() {
            if shape.is_identity(&m.id) {
                morphisms
                    .entry(m.id.clone())
                    .or_insert_with(|| NatTrans::identity(&objects[&m.src]));
                continue;
            }
            let nt = morphisms
                .get(&m.id)
                .ok_or_else(|| Error::structural(format!("presheaf diagram misses morphism {}", m.id)))?;
            let (want_src, want_dst) = match pointwise {
                Variance::Covariant => (&objects[&m.src], &objects[&m.dst]),
                Variance::Contravariant => (&objects[&m.dst], &objects[&m.src]),
            };
            if nt.source() != want_src || nt.target() != want_dst {
                return Err(Error::invalid(format!(
                    "presheaf diagram transformation for {} has wrong endpoints",
                    m.id
                )));
            }
        }
        Ok(PresheafDiagram {
            base: base.clone(),
            shape,
            variance,
            member_variance,
            objects,
            morphisms,
        })
    }

    pub fn base(&self) -> &FinCategory {
        &self.base
    }

    pub fn shape(&self) -> &FinCategory {
        &self.shape
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn member_variance(&self) -> Variance {
        self.member_variance
    }

    pub fn object(&self, o: &ObjId) -> &SetPresheaf {
        &self.objects[o]
    }

    pub fn objects(&self) -> &BTreeMap<ObjId, SetPresheaf> {
        &self.objects
    }

    pub fn morphism(&self, m: &MorId) -> &NatTrans {
        &self.morphisms[m]
    }

    /// Which set-level engine computes the pointwise stage.
    pub fn pointwise_variance(&self) -> Variance {
        pointwise_variance(self.variance, self.member_variance)
    }

    /// The set diagram obtained by evaluating every member at `z`.
    pub fn at(&self, z: &ObjId) -> Result<SetDiagram> {
        let objects = self
            .objects
            .iter()
            .map(|(o, p)| (o.clone(), p.value(z).clone()))
            .collect();
        let morphisms = self
            .morphisms
            .iter()
            .filter(|(m, _)| !self.shape.is_identity(m))
            .map(|(m, nt)| (m.clone(), nt.component(z).clone()))
            .collect();
        SetDiagram::new(self.shape.clone(), self.pointwise_variance(), objects, morphisms)
    }
}

/// Covariant exactly when one of the two sides reverses: a colimit of
/// contravariant presheaves and a limit of covariant ones are both computed
/// by the pointwise colimit engine (the `Set^op` role swap), and dually.
fn pointwise_variance(diagram: Variance, member: Variance) -> Variance {
    match (diagram, member) {
        (Variance::Covariant, Variance::Contravariant) => Variance::Covariant,
        (Variance::Contravariant, Variance::Covariant) => Variance::Covariant,
        (Variance::Contravariant, Variance::Contravariant) => Variance::Contravariant,
        (Variance::Covariant, Variance::Covariant) => Variance::Contravariant,
    }
}

/// Projective limit of a presheaf diagram over `I^op`, computed pointwise.
pub fn presheaf_lim(diagram: &PresheafDiagram, caps: &Caps) -> Result<SetPresheaf> {
    Ok(presheaf_lim_with_stages(diagram, caps)?.0)
}

/// As [`presheaf_lim`], also returning the per-object stage results whose
/// legs realize the limit's projections (componentwise).
pub fn presheaf_lim_with_stages(
    diagram: &PresheafDiagram,
    caps: &Caps,
) -> Result<(SetPresheaf, BTreeMap<ObjId, LimitResult>)> {
    if diagram.variance() != Variance::Contravariant {
        return Err(Error::invalid(
            "presheaf_lim takes a diagram over the opposite shape".to_string(),
        ));
    }
    pointwise_limit(diagram, caps)
}

/// Inductive limit of a presheaf diagram over `I`, computed pointwise.
pub fn presheaf_colim(diagram: &PresheafDiagram, caps: &Caps) -> Result<SetPresheaf> {
    Ok(presheaf_colim_with_stages(diagram, caps)?.0)
}

/// As [`presheaf_colim`], also returning the per-object stages whose legs
/// realize the colimit's injections (componentwise).
pub fn presheaf_colim_with_stages(
    diagram: &PresheafDiagram,
    caps: &Caps,
) -> Result<(SetPresheaf, BTreeMap<ObjId, LimitResult>)> {
    if diagram.variance() != Variance::Covariant {
        return Err(Error::invalid(
            "presheaf_colim takes a covariant diagram".to_string(),
        ));
    }
    pointwise_limit(diagram, caps)
}

/// The leg of a pointwise (co)limit at shape object `i`, assembled from the
/// stage legs into a natural transformation.
pub fn stage_leg(
    diagram: &PresheafDiagram,
    result: &SetPresheaf,
    stages: &BTreeMap<ObjId, LimitResult>,
    i: &ObjId,
) -> Result<NatTrans> {
    let member = diagram.object(i);
    let components: BTreeMap<ObjId, SetFn> = stages
        .iter()
        .map(|(z, stage)| (z.clone(), stage.legs[i].clone()))
        .collect();
    match diagram.pointwise_variance() {
        // Colimit stages inject members into the result.
        Variance::Covariant => NatTrans::new(member.clone(), result.clone(), components),
        // Limit stages project the result onto members.
        Variance::Contravariant => NatTrans::new(result.clone(), member.clone(), components),
    }
}

fn pointwise_limit(
    diagram: &PresheafDiagram,
    caps: &Caps,
) -> Result<(SetPresheaf, BTreeMap<ObjId, LimitResult>)> {
    let base = diagram.base().clone();
    let mut stages: BTreeMap<ObjId, LimitResult> = BTreeMap::new();
    for z in base.objects() {
        let stage_diagram = diagram.at(z)?;
        let result = match diagram.pointwise_variance() {
            Variance::Contravariant => lim_matching_families_with_caps(&stage_diagram, caps)?,
            Variance::Covariant => colim(&stage_diagram)?,
        };
        stages.insert(z.clone(), result);
    }
    let values: BTreeMap<ObjId, FinSet> =
        stages.iter().map(|(z, r)| (z.clone(), r.apex.clone())).collect();
    let mut actions = BTreeMap::new();
    for u in base.morphisms() {
        if base.is_identity(&u.id) {
            continue;
        }
        let (from, to) = match diagram.member_variance() {
            Variance::Contravariant => (&u.dst, &u.src),
            Variance::Covariant => (&u.src, &u.dst),
        };
        let induced = induced_action(diagram, &stages, from, to, &u.id)?;
        actions.insert(u.id.clone(), induced);
    }
    let presheaf = SetPresheaf::new(&base, diagram.member_variance(), values, actions)?;
    Ok((presheaf, stages))
}

/// Induced action on a pointwise (co)limit, found by mediating-morphism
/// search and asserted unique; non-uniqueness would mean the stage is not
/// the universal object and is treated as an engine bug.
fn induced_action(
    diagram: &PresheafDiagram,
    stages: &BTreeMap<ObjId, LimitResult>,
    from: &ObjId,
    to: &ObjId,
    u: &MorId,
) -> Result<SetFn> {
    let from_stage = &stages[from];
    let to_stage = &stages[to];
    let mut table: BTreeMap<ElemId, ElemId> = BTreeMap::new();
    match diagram.pointwise_variance() {
        Variance::Contravariant => {
            // Limit stage: each matching family maps to the unique family
            // matching its member-wise image.
            for w in from_stage.apex.elements() {
                let mut candidates: Vec<&ElemId> = to_stage.apex.elements().iter().collect();
                for (i, p) in diagram.objects() {
                    let member_action = p.action(u);
                    let want = member_action.apply(from_stage.legs[i].apply(w));
                    candidates.retain(|a| to_stage.legs[i].apply(a) == want);
                }
                assert!(
                    candidates.len() == 1,
                    "mediating morphism for {u} is not unique ({} candidates): engine invariant broken",
                    candidates.len()
                );
                table.insert(w.clone(), candidates[0].clone());
            }
        }
        Variance::Covariant => {
            // Colimit stage: every class value is forced through each of its
            // members; members must agree.
            for (i, p) in diagram.objects() {
                let member_action = p.action(u);
                for e in p.value(from).elements() {
                    let class = from_stage.legs[i].apply(e);
                    let value = to_stage.legs[i].apply(member_action.apply(e));
                    match table.get(class) {
                        None => {
                            table.insert(class.clone(), value.clone());
                        }
                        Some(prev) => assert!(
                            prev == value,
                            "mediating morphism for {u} is inconsistent: engine invariant broken"
                        ),
                    }
                }
            }
            assert!(
                table.len() == from_stage.apex.len(),
                "colimit class without members: engine invariant broken"
            );
        }
    }
    SetFn::new(from_stage.apex.clone(), to_stage.apex.clone(), table)
}

/// A diagram valued in a finite category: a functorial assignment of base
/// objects and morphisms to the shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CatDiagram {
    target: FinCategory,
    shape: FinCategory,
    variance: Variance,
    objects: BTreeMap<ObjId, ObjId>,
    morphisms: BTreeMap<MorId, MorId>,
}

impl CatDiagram {
    pub fn new(
        target: &FinCategory,
        shape: FinCategory,
        variance: Variance,
        objects: BTreeMap<ObjId, ObjId>,
        mut morphisms: BTreeMap<MorId, MorId>,
    ) -> Result<Self> {
        for o in shape.objects() {
            let t = objects
                .get(o)
                .ok_or_else(|| Error::structural(format!("diagram misses shape object {o}")))?;
            if !target.has_object(t) {
                return Err(Error::structural(format!("diagram maps {o} to unknown object {t}")));
            }
        }
        for m in shape.morphisms() {
            if shape.is_identity(&m.id) {
                morphisms.entry(m.id.clone()).or_insert_with(|| {
                    target.identity(&objects[&m.src]).expect("object exists").clone()
                });
            }
            let t = morphisms
                .get(&m.id)
                .ok_or_else(|| Error::structural(format!("diagram misses shape morphism {}", m.id)))?;
            let tm = target
                .morphism(t)
                .ok_or_else(|| Error::structural(format!("diagram maps {} to unknown morphism {t}", m.id)))?;
            let (want_src, want_dst) = match variance {
                Variance::Covariant => (&objects[&m.src], &objects[&m.dst]),
                Variance::Contravariant => (&objects[&m.dst], &objects[&m.src]),
            };
            if &tm.src != want_src || &tm.dst != want_dst {
                return Err(Error::invalid(format!(
                    "diagram image of {} has wrong endpoints",
                    m.id
                )));
            }
        }
        // Composition must be preserved (with reversal when contravariant).
        for g in shape.morphisms() {
            for f in shape.morphisms() {
                if f.dst != g.src {
                    continue;
                }
                let c = shape
                    .compose(&g.id, &f.id)
                    .ok_or_else(|| Error::invalid("diagram shape is not a valid category".to_string()))?;
                let image = match variance {
                    Variance::Covariant => target.compose(&morphisms[&g.id], &morphisms[&f.id]),
                    Variance::Contravariant => target.compose(&morphisms[&f.id], &morphisms[&g.id]),
                };
                if image != Some(&morphisms[c]) {
                    return Err(Error::invalid(format!(
                        "diagram breaks functor law on composite {c}"
                    )));
                }
            }
        }
        Ok(CatDiagram {
            target: target.clone(),
            shape,
            variance,
            objects,
            morphisms,
        })
    }

    pub fn target(&self) -> &FinCategory {
        &self.target
    }

    pub fn shape(&self) -> &FinCategory {
        &self.shape
    }

    pub fn variance(&self) -> Variance {
        self.variance
    }

    pub fn object(&self, o: &ObjId) -> &ObjId {
        &self.objects[o]
    }

    pub fn objects(&self) -> &BTreeMap<ObjId, ObjId> {
        &self.objects
    }

    pub fn morphism(&self, m: &MorId) -> &MorId {
        &self.morphisms[m]
    }

    /// Point-shape diagram selecting one object.
    pub fn point(target: &FinCategory, variance: Variance, x: &ObjId) -> Result<CatDiagram> {
        let shape = crate::fincat::build_shape(&crate::fincat::ShapeKind::Discrete(1));
        CatDiagram::new(
            target,
            shape,
            variance,
            [(ObjId::from("I1"), x.clone())].into(),
            BTreeMap::new(),
        )
    }
}

/// Which side of a hom-set the diagram nodes occupy.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomSide {
    /// Slots `Hom(node_i, x)`.
    NodesInDomain,
    /// Slots `Hom(x, node_i)`.
    NodesInCodomain,
}

/// The diagram of hom-sets `Hom(node_i, x)` or `Hom(x, node_i)` obtained by
/// probing a category-valued diagram at `x`, with composition-induced slot
/// maps. The resulting variance follows from the probe side and the
/// diagram's own variance: cones and cocones come out as matching-family
/// (contravariant) diagrams, the other two orientations as covariant ones.
pub fn hom_slots_diagram(d: &CatDiagram, x: &ObjId, side: HomSide) -> Result<SetDiagram> {
    let cat = d.target();
    if !cat.has_object(x) {
        return Err(Error::structural(format!("unknown probe object {x}")));
    }
    let slot = |i: &ObjId| -> FinSet {
        let node = d.object(i);
        match side {
            HomSide::NodesInDomain => hom_set(cat, node, x),
            HomSide::NodesInCodomain => hom_set(cat, x, node),
        }
    };
    let variance = match (d.variance(), side) {
        (Variance::Covariant, HomSide::NodesInDomain) => Variance::Contravariant,
        (Variance::Covariant, HomSide::NodesInCodomain) => Variance::Covariant,
        (Variance::Contravariant, HomSide::NodesInDomain) => Variance::Covariant,
        (Variance::Contravariant, HomSide::NodesInCodomain) => Variance::Contravariant,
    };
    let objects: BTreeMap<ObjId, FinSet> =
        d.shape().objects().iter().map(|i| (i.clone(), slot(i))).collect();
    let mut morphisms = BTreeMap::new();
    for m in d.shape().morphisms() {
        if d.shape().is_identity(&m.id) {
            continue;
        }
        let u = d.morphism(&m.id);
        // Where the slot map runs, per the variance conventions of
        // `SetDiagram`: covariant src → dst along the arrow, contravariant
        // dst → src against it.
        let (from_i, to_i) = match variance {
            Variance::Covariant => (&m.src, &m.dst),
            Variance::Contravariant => (&m.dst, &m.src),
        };
        let src_set = &objects[from_i];
        let dst_set = &objects[to_i];
        let table: BTreeMap<ElemId, ElemId> = src_set
            .elements()
            .iter()
            .map(|g| {
                let gm = MorId(g.0.clone());
                let composite = match side {
                    // Precompose with u : node(to) → node(from) side-adjusted.
                    HomSide::NodesInDomain => cat.compose(&gm, u),
                    // Postcompose.
                    HomSide::NodesInCodomain => cat.compose(u, &gm),
                }
                .expect("valid category is total");
                (g.clone(), ElemId(composite.0.clone()))
            })
            .collect();
        morphisms.insert(m.id.clone(), SetFn::new(src_set.clone(), dst_set.clone(), table)?);
    }
    SetDiagram::new(d.shape().clone(), variance, objects, morphisms)
}

/// Composes a Set-valued functor with a category-valued diagram, giving the
/// set diagram `F ∘ d` (same shape and variance).
pub fn apply_functor_to_diagram(f: &SetPresheaf, d: &CatDiagram) -> Result<SetDiagram> {
    if f.variance() != Variance::Covariant {
        return Err(Error::invalid("expected a covariant Set-valued functor".to_string()));
    }
    if f.base() != d.target() {
        return Err(Error::invalid("functor base must be the diagram's target".to_string()));
    }
    let objects: BTreeMap<ObjId, FinSet> = d
        .objects()
        .iter()
        .map(|(i, o)| (i.clone(), f.value(o).clone()))
        .collect();
    let morphisms: BTreeMap<MorId, SetFn> = d
        .shape()
        .morphisms()
        .iter()
        .filter(|m| !d.shape().is_identity(&m.id))
        .map(|m| (m.id.clone(), f.action(d.morphism(&m.id)).clone()))
        .collect();
    SetDiagram::new(d.shape().clone(), d.variance(), objects, morphisms)
}

/// Lifts a category-valued diagram through the contravariant Yoneda
/// embedding `h`.
pub fn lift_h(diagram: &CatDiagram) -> Result<PresheafDiagram> {
    lift(diagram, Variance::Contravariant)
}

/// Lifts a category-valued diagram through the covariant Yoneda
/// embedding `k`.
pub fn lift_k(diagram: &CatDiagram) -> Result<PresheafDiagram> {
    lift(diagram, Variance::Covariant)
}

fn lift(diagram: &CatDiagram, member_variance: Variance) -> Result<PresheafDiagram> {
    let base = diagram.target();
    let objects: BTreeMap<ObjId, SetPresheaf> = diagram
        .objects()
        .iter()
        .map(|(o, x)| Ok((o.clone(), yoneda(base, x, member_variance)?)))
        .collect::<Result<_>>()?;
    let pointwise = pointwise_variance(diagram.variance(), member_variance);
    let mut morphisms = BTreeMap::new();
    for m in diagram.shape().morphisms() {
        if diagram.shape().is_identity(&m.id) {
            continue;
        }
        let u = diagram.morphism(&m.id);
        let (src_obj, dst_obj) = match pointwise {
            Variance::Covariant => (&m.src, &m.dst),
            Variance::Contravariant => (&m.dst, &m.src),
        };
        let source = &objects[src_obj];
        let target_p = &objects[dst_obj];
        let mut components = BTreeMap::new();
        for z in base.objects() {
            let src = source.value(z);
            let dst = target_p.value(z);
            let table: BTreeMap<ElemId, ElemId> = src
                .elements()
                .iter()
                .map(|g| {
                    let composite = match member_variance {
                        // h-lift: postcompose with u. k-lift: precompose.
                        Variance::Contravariant => base.compose(u, &MorId(g.0.clone())),
                        Variance::Covariant => base.compose(&MorId(g.0.clone()), u),
                    }
                    .expect("valid category is total");
                    (g.clone(), ElemId(composite.0.clone()))
                })
                .collect();
            components.insert(z.clone(), SetFn::new(src.clone(), dst.clone(), table)?);
        }
        morphisms.insert(
            m.id.clone(),
            NatTrans::new(source.clone(), target_p.clone(), components)?,
        );
    }
    PresheafDiagram::new(
        base,
        diagram.shape().clone(),
        diagram.variance(),
        member_variance,
        objects,
        morphisms,
    )
}

/// The ind-lim of a covariant diagram valued in the base category: the
/// colimit of the `h`-lifted diagram, a contravariant presheaf.
pub fn ind_lim(diagram: &CatDiagram, caps: &Caps) -> Result<SetPresheaf> {
    if diagram.variance() != Variance::Covariant {
        return Err(Error::invalid("ind_lim takes a covariant diagram".to_string()));
    }
    presheaf_colim(&lift_h(diagram)?, caps)
}

/// The pro-lim of a contravariant diagram valued in the base category: the
/// limit (in the covariant-presheaf category, hence the pointwise colimit
/// engine) of the `k`-lifted diagram.
pub fn pro_lim(diagram: &CatDiagram, caps: &Caps) -> Result<SetPresheaf> {
    if diagram.variance() != Variance::Contravariant {
        return Err(Error::invalid("pro_lim takes a contravariant diagram".to_string()));
    }
    presheaf_lim(&lift_k(diagram)?, caps)
}

/// The presheaf of cones: `X ↦ lim Hom(X, β(i))`. Representable exactly
/// when the diagram has a genuine limit in the base category, with the
/// limit object as representative.
pub fn cone_presheaf(diagram: &CatDiagram, caps: &Caps) -> Result<SetPresheaf> {
    Ok(cone_presheaf_with_stages(diagram, caps)?.0)
}

/// As [`cone_presheaf`], also returning the pointwise stages: the stage leg
/// at the representative applied to its identity family reads off the
/// limit's legs in the base category.
pub fn cone_presheaf_with_stages(
    diagram: &CatDiagram,
    caps: &Caps,
) -> Result<(SetPresheaf, BTreeMap<ObjId, LimitResult>)> {
    if diagram.variance() != Variance::Contravariant {
        return Err(Error::invalid("cone_presheaf takes a contravariant diagram".to_string()));
    }
    presheaf_lim_with_stages(&lift_h(diagram)?, caps)
}

/// The presheaf of cocones: `X ↦ lim Hom(α(i), X)`. Representable exactly
/// when the diagram has a genuine colimit in the base category.
pub fn cocone_presheaf(diagram: &CatDiagram, caps: &Caps) -> Result<SetPresheaf> {
    Ok(cocone_presheaf_with_stages(diagram, caps)?.0)
}

/// As [`cocone_presheaf`], also returning the pointwise stages.
pub fn cocone_presheaf_with_stages(
    diagram: &CatDiagram,
    caps: &Caps,
) -> Result<(SetPresheaf, BTreeMap<ObjId, LimitResult>)> {
    if diagram.variance() != Variance::Covariant {
        return Err(Error::invalid("cocone_presheaf takes a covariant diagram".to_string()));
    }
    presheaf_colim_with_stages(&lift_k(diagram)?, caps)
}

/// A successful representability search: the representing object and a
/// natural isomorphism from its Yoneda image onto the presheaf.
#[derive(Clone, Debug)]
pub struct RepresentabilityWitness {
    pub object: ObjId,
    pub iso: NatTrans,
}

/// Scans base objects in id order for one whose Yoneda image is naturally
/// isomorphic to `a`. `None` means proven non-representable; budget
/// exhaustion surfaces as an error instead.
pub fn representability_search(
    a: &SetPresheaf,
    caps: &Caps,
) -> Result<Option<RepresentabilityWitness>> {
    for x in a.base().objects() {
        let image = yoneda(a.base(), x, a.variance())?;
        if a.base()
            .objects()
            .iter()
            .any(|z| image.value(z).len() != a.value(z).len())
        {
            continue;
        }
        let isos = crate::finset::enumerate_diagram_transformations_limited(
            image.as_diagram(),
            a.as_diagram(),
            true,
            caps,
            Some(1),
        )?;
        if let Some(components) = isos.into_iter().next() {
            return Ok(Some(RepresentabilityWitness {
                object: x.clone(),
                iso: NatTrans {
                    source: image,
                    target: a.clone(),
                    components,
                },
            }));
        }
    }
    Ok(None)
}

/// The category of elements of a presheaf, with the projection back to the
/// base category.
///
/// For contravariant `A`: objects are pairs `(X, a ∈ A(X))`, one morphism
/// `(X, A(f)(b)) → (Y, b)` for every base `f : X → Y` and `b ∈ A(Y)`.
/// For covariant `B`: objects `(X, b ∈ B(X))`, one morphism
/// `(X, b) → (Y, B(f)(b))` per base `f : X → Y` and `b ∈ B(X)`.
#[derive(Clone, Debug)]
pub struct ElementsCategory {
    pub category: FinCategory,
    /// Element-category object → (base object, element).
    pub obj_origin: BTreeMap<ObjId, (ObjId, ElemId)>,
    /// Element-category morphism → base morphism.
    pub mor_origin: BTreeMap<MorId, MorId>,
}

pub fn category_of_elements(a: &SetPresheaf, caps: &Caps) -> Result<ElementsCategory> {
    let base = a.base();
    let pair_obj = |x: &ObjId, e: &ElemId| ObjId(format!("({x},{e})"));
    let mut objects = Vec::new();
    let mut obj_origin = BTreeMap::new();
    for x in base.objects() {
        for e in a.value(x).elements() {
            let o = pair_obj(x, e);
            obj_origin.insert(o.clone(), (x.clone(), e.clone()));
            objects.push(o);
        }
    }
    let mut morphisms = Vec::new();
    let mut identities = BTreeMap::new();
    let mut mor_origin = BTreeMap::new();
    // A morphism is keyed by the base morphism plus the element that
    // determines the other endpoint through the action.
    let endpoint = |f: &Morphism, anchor: &ElemId| -> (ObjId, ObjId) {
        match a.variance() {
            Variance::Contravariant => {
                // anchor b ∈ A(dst): (src, A(f)(b)) → (dst, b)
                let src_elem = a.action(&f.id).apply(anchor);
                (pair_obj(&f.src, src_elem), pair_obj(&f.dst, anchor))
            }
            Variance::Covariant => {
                // anchor b ∈ B(src): (src, b) → (dst, B(f)(b))
                let dst_elem = a.action(&f.id).apply(anchor);
                (pair_obj(&f.src, anchor), pair_obj(&f.dst, dst_elem))
            }
        }
    };
    for f in base.morphisms() {
        let anchors = match a.variance() {
            Variance::Contravariant => a.value(&f.dst).elements(),
            Variance::Covariant => a.value(&f.src).elements(),
        };
        for b in anchors {
            let id = MorId(format!("{}@{b}", f.id));
            let (src, dst) = endpoint(f, b);
            morphisms.push(Morphism { id: id.clone(), src: src.clone(), dst });
            mor_origin.insert(id.clone(), f.id.clone());
            if base.is_identity(&f.id) {
                identities.insert(src, id);
            }
        }
    }
    let mut composition = BTreeMap::new();
    for g in base.morphisms() {
        for f in base.morphisms() {
            if f.dst != g.src {
                continue;
            }
            let c = base
                .compose(&g.id, &f.id)
                .ok_or_else(|| Error::invalid("base category is not total".to_string()))?;
            match a.variance() {
                Variance::Contravariant => {
                    // (f anchored at A(g)(c)) then (g anchored at c)
                    for anchor in a.value(&g.dst).elements() {
                        let mid = a.action(&g.id).apply(anchor);
                        composition.insert(
                            (
                                MorId(format!("{}@{anchor}", g.id)),
                                MorId(format!("{}@{mid}", f.id)),
                            ),
                            MorId(format!("{c}@{anchor}")),
                        );
                    }
                }
                Variance::Covariant => {
                    for anchor in a.value(&f.src).elements() {
                        let mid = a.action(&f.id).apply(anchor);
                        composition.insert(
                            (
                                MorId(format!("{}@{mid}", g.id)),
                                MorId(format!("{}@{anchor}", f.id)),
                            ),
                            MorId(format!("{c}@{anchor}")),
                        );
                    }
                }
            }
        }
    }
    let elements_caps = Caps {
        max_objects: caps.max_objects * 8,
        max_morphisms: caps.max_morphisms * 8,
        ..*caps
    };
    let category = FinCategory::with_caps(
        format!("elements({})", base.name()),
        objects,
        morphisms,
        identities,
        composition,
        &elements_caps,
    )?;
    Ok(ElementsCategory { category, obj_origin, mor_origin })
}

/// Result of applying a Yoneda extension: the value object together with
/// the colimit (or limit) stage it came from, kept for leg inspection.
#[derive(Clone, Debug)]
pub struct ExtensionValue {
    pub apex: FinSet,
    pub stage: LimitResult,
    pub elements: ElementsCategory,
    pub stage_diagram: SetDiagram,
}

/// The Yoneda extension of a Set-valued functor, applied to a contravariant
/// presheaf: the colimit over the category of elements of `A` of `F`
/// composed with the projection. Satisfies `F̃(h(X)) ≅ F(X)` and commutes
/// with ind-lims.
pub fn yoneda_extension(f: &SetPresheaf, a: &SetPresheaf, caps: &Caps) -> Result<ExtensionValue> {
    if f.variance() != Variance::Covariant {
        return Err(Error::invalid(
            "yoneda_extension extends a covariant Set-valued functor".to_string(),
        ));
    }
    if a.variance() != Variance::Contravariant {
        return Err(Error::invalid(
            "yoneda_extension applies to a contravariant presheaf".to_string(),
        ));
    }
    if f.base() != a.base() {
        return Err(Error::invalid("functor and presheaf must share the base".to_string()));
    }
    let elements = category_of_elements(a, caps)?;
    let objects: BTreeMap<ObjId, FinSet> = elements
        .obj_origin
        .iter()
        .map(|(o, (x, _))| (o.clone(), f.value(x).clone()))
        .collect();
    let morphisms: BTreeMap<MorId, SetFn> = elements
        .category
        .morphisms()
        .iter()
        .filter(|m| !elements.category.is_identity(&m.id))
        .map(|m| (m.id.clone(), f.action(&elements.mor_origin[&m.id]).clone()))
        .collect();
    let stage_diagram =
        SetDiagram::new(elements.category.clone(), Variance::Covariant, objects, morphisms)?;
    let stage = colim(&stage_diagram)?;
    Ok(ExtensionValue {
        apex: stage.apex.clone(),
        stage,
        elements,
        stage_diagram,
    })
}

/// The dual extension for covariant presheaves: the limit over the
/// (opposite of the) category of elements of `B` of `F` composed with the
/// projection. Satisfies `F̃(k(X)) ≅ F(X)` and commutes with pro-lims.
pub fn yoneda_extension_cov(
    f: &SetPresheaf,
    b: &SetPresheaf,
    caps: &Caps,
) -> Result<ExtensionValue> {
    if f.variance() != Variance::Covariant {
        return Err(Error::invalid(
            "yoneda_extension_cov extends a covariant Set-valued functor".to_string(),
        ));
    }
    if b.variance() != Variance::Covariant {
        return Err(Error::invalid(
            "yoneda_extension_cov applies to a covariant presheaf".to_string(),
        ));
    }
    if f.base() != b.base() {
        return Err(Error::invalid("functor and presheaf must share the base".to_string()));
    }
    let elements = category_of_elements(b, caps)?;
    let objects: BTreeMap<ObjId, FinSet> = elements
        .obj_origin
        .iter()
        .map(|(o, (x, _))| (o.clone(), f.value(x).clone()))
        .collect();
    let morphisms: BTreeMap<MorId, SetFn> = elements
        .category
        .morphisms()
        .iter()
        .filter(|m| !elements.category.is_identity(&m.id))
        .map(|m| (m.id.clone(), f.action(&elements.mor_origin[&m.id]).clone()))
        .collect();
    // The arrows of the elements category carry forward maps F(X) → F(Y);
    // presenting the diagram over the opposite shape makes it contravariant
    // so the matching-family engine computes the limit.
    let stage_diagram = SetDiagram::new(
        elements.category.opposite(),
        Variance::Contravariant,
        objects,
        morphisms,
    )?;
    let stage = lim_matching_families_with_caps(&stage_diagram, caps)?;
    Ok(ExtensionValue {
        apex: stage.apex.clone(),
        stage,
        elements,
        stage_diagram,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::{build_shape, ShapeKind};

    fn o(s: &str) -> ObjId {
        ObjId::from(s)
    }

    fn m(s: &str) -> MorId {
        MorId::from(s)
    }

    fn e(s: &str) -> ElemId {
        ElemId::from(s)
    }

    fn arrow_category() -> FinCategory {
        let objects = vec![o("U"), o("V")];
        let morphisms = vec![
            Morphism { id: m("id_U"), src: o("U"), dst: o("U") },
            Morphism { id: m("id_V"), src: o("V"), dst: o("V") },
            Morphism { id: m("m"), src: o("U"), dst: o("V") },
        ];
        let identities = [(o("U"), m("id_U")), (o("V"), m("id_V"))].into();
        FinCategory::new("arrow", objects, morphisms, identities, BTreeMap::new()).unwrap()
    }

    #[test]
    fn yoneda_h_reads_hom_sets_off_the_table() {
        let cat = arrow_category();
        let hv = yoneda_h(&cat, &o("V")).unwrap();
        assert_eq!(hv.value(&o("U")).elements(), &[e("m")]);
        assert_eq!(hv.value(&o("V")).elements(), &[e("id_V")]);
        // h(X)(X) always contains id_X.
        let hu = yoneda_h(&cat, &o("U")).unwrap();
        assert!(hu.value(&o("U")).contains(&e("id_U")));
    }

    #[test]
    fn yoneda_k_is_the_covariant_twin() {
        let cat = arrow_category();
        let ku = yoneda_k(&cat, &o("U")).unwrap();
        assert_eq!(ku.value(&o("U")).elements(), &[e("id_U")]);
        assert_eq!(ku.value(&o("V")).elements(), &[e("m")]);
    }

    #[test]
    fn constant_point_has_exactly_one_endomorphism() {
        let cat = arrow_category();
        let pt = SetPresheaf::constant_point(&cat, Variance::Contravariant);
        let all = enumerate_nat_trans(&pt, &pt, &Caps::default()).unwrap();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn empty_value_contributes_one_empty_component() {
        let base = build_shape(&ShapeKind::Discrete(2));
        let f = SetPresheaf::new(
            &base,
            Variance::Contravariant,
            [
                (o("I1"), FinSet::empty("E")),
                (o("I2"), FinSet::of("F2", &["a", "b"])),
            ]
            .into(),
            BTreeMap::new(),
        )
        .unwrap();
        let g = SetPresheaf::new(
            &base,
            Variance::Contravariant,
            [
                (o("I1"), FinSet::of("G1", &["x"])),
                (o("I2"), FinSet::of("G2", &["y", "z"])),
            ]
            .into(),
            BTreeMap::new(),
        )
        .unwrap();
        // One empty component at I1 times 2² components at I2.
        let all = enumerate_nat_trans(&f, &g, &Caps::default()).unwrap();
        assert_eq!(all.len(), 4);
    }

    #[test]
    fn nat_h_x_h_x_matches_endomorphisms() {
        let cat = arrow_category();
        let hv = yoneda_h(&cat, &o("V")).unwrap();
        let all = enumerate_nat_trans(&hv, &hv, &Caps::default()).unwrap();
        assert_eq!(all.len(), 1);
    }

    #[test]
    fn yoneda_check_on_a_small_presheaf() {
        let cat = arrow_category();
        let a_u = FinSet::of("AU", &["s", "t"]);
        let a_v = FinSet::of("AV", &["w"]);
        let action = SetFn::of(&a_v, &a_u, &[("w", "s")]).unwrap();
        let a = SetPresheaf::new(
            &cat,
            Variance::Contravariant,
            [(o("U"), a_u), (o("V"), a_v)].into(),
            [(m("m"), action)].into(),
        )
        .unwrap();
        let witness = yoneda_check(&cat, &o("V"), &a, &Caps::default()).unwrap();
        assert!(witness.holds);
        assert_eq!(witness.nat_trans_count, 1);
        let witness_u = yoneda_check(&cat, &o("U"), &a, &Caps::default()).unwrap();
        assert!(witness_u.holds);
        assert_eq!(witness_u.nat_trans_count, 2);
    }

    #[test]
    fn empty_value_means_no_transformations_from_the_yoneda_image() {
        let base = build_shape(&ShapeKind::Discrete(1));
        let a = SetPresheaf::new(
            &base,
            Variance::Contravariant,
            [(o("I1"), FinSet::empty("A"))].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let witness = yoneda_check(&base, &o("I1"), &a, &Caps::default()).unwrap();
        assert!(witness.holds);
        assert_eq!(witness.nat_trans_count, 0);
    }

    #[test]
    fn covariant_yoneda_check_holds() {
        let cat = arrow_category();
        let b = yoneda_k(&cat, &o("U")).unwrap();
        let witness = yoneda_check(&cat, &o("V"), &b, &Caps::default()).unwrap();
        assert!(witness.holds);
        assert_eq!(witness.nat_trans_count, b.value(&o("V")).len());
    }

    fn discrete_pair_presheaf_diagram(
        base: &FinCategory,
        a: &SetPresheaf,
        b: &SetPresheaf,
        variance: Variance,
    ) -> PresheafDiagram {
        let shape = build_shape(&ShapeKind::Discrete(2));
        PresheafDiagram::new(
            base,
            shape,
            variance,
            a.variance(),
            [(o("I1"), a.clone()), (o("I2"), b.clone())].into(),
            BTreeMap::new(),
        )
        .unwrap()
    }

    #[test]
    fn presheaf_lim_of_discrete_pair_is_pointwise_product() {
        let cat = arrow_category();
        let a = yoneda_h(&cat, &o("U")).unwrap();
        let b = yoneda_h(&cat, &o("V")).unwrap();
        let d = discrete_pair_presheaf_diagram(&cat, &a, &b, Variance::Contravariant);
        let lim = presheaf_lim(&d, &Caps::default()).unwrap();
        for z in cat.objects() {
            assert_eq!(lim.value(z).len(), a.value(z).len() * b.value(z).len());
        }
    }

    #[test]
    fn presheaf_colim_over_point_shape_is_isomorphic_to_the_member() {
        let cat = arrow_category();
        let a = yoneda_h(&cat, &o("V")).unwrap();
        let shape = build_shape(&ShapeKind::Discrete(1));
        let d = PresheafDiagram::new(
            &cat,
            shape,
            Variance::Covariant,
            Variance::Contravariant,
            [(o("I1"), a.clone())].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let c = presheaf_colim(&d, &Caps::default()).unwrap();
        assert!(naturally_isomorphic(&c, &a, &Caps::default()).unwrap());
    }

    #[test]
    fn ind_lim_over_point_shape_is_the_yoneda_image() {
        let cat = arrow_category();
        let d = CatDiagram::point(&cat, Variance::Covariant, &o("U")).unwrap();
        let p = ind_lim(&d, &Caps::default()).unwrap();
        let hu = yoneda_h(&cat, &o("U")).unwrap();
        assert!(naturally_isomorphic(&p, &hu, &Caps::default()).unwrap());
    }

    #[test]
    fn ind_lim_of_discrete_pair_doubles_hom_sets() {
        let cat = arrow_category();
        let shape = build_shape(&ShapeKind::Discrete(2));
        let d = CatDiagram::new(
            &cat,
            shape,
            Variance::Covariant,
            [(o("I1"), o("V")), (o("I2"), o("V"))].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let p = ind_lim(&d, &Caps::default()).unwrap();
        let hv = yoneda_h(&cat, &o("V")).unwrap();
        for z in cat.objects() {
            assert_eq!(p.value(z).len(), 2 * hv.value(z).len());
        }
    }

    #[test]
    fn pro_lim_over_point_shape_is_the_covariant_yoneda_image() {
        let cat = arrow_category();
        let d = CatDiagram::point(&cat, Variance::Contravariant, &o("V")).unwrap();
        let p = pro_lim(&d, &Caps::default()).unwrap();
        let kv = yoneda_k(&cat, &o("V")).unwrap();
        assert!(naturally_isomorphic(&p, &kv, &Caps::default()).unwrap());
    }

    #[test]
    fn representability_of_yoneda_images() {
        let cat = arrow_category();
        let hv = yoneda_h(&cat, &o("V")).unwrap();
        let found = representability_search(&hv, &Caps::default()).unwrap().unwrap();
        assert_eq!(found.object, o("V"));
        assert!(found.iso.is_isomorphism());
    }

    #[test]
    fn non_representable_presheaf_is_proven_absent() {
        let cat = arrow_category();
        let a_u = FinSet::of("AU", &["s", "t"]);
        let a_v = FinSet::of("AV", &["w"]);
        let action = SetFn::of(&a_v, &a_u, &[("w", "s")]).unwrap();
        let a = SetPresheaf::new(
            &cat,
            Variance::Contravariant,
            [(o("U"), a_u), (o("V"), a_v)].into(),
            [(m("m"), action)].into(),
        )
        .unwrap();
        // h(U) has sizes (1, 0) and h(V) has (1, 1); A has (2, 1).
        assert!(representability_search(&a, &Caps::default()).unwrap().is_none());
        let empty = SetPresheaf::new(
            &cat,
            Variance::Contravariant,
            [(o("U"), FinSet::empty("EU")), (o("V"), FinSet::empty("EV"))].into(),
            [(m("m"), SetFn::new(FinSet::empty("EV"), FinSet::empty("EU"), BTreeMap::new()).unwrap())]
                .into(),
        )
        .unwrap();
        assert!(representability_search(&empty, &Caps::default()).unwrap().is_none());
    }

    #[test]
    fn elements_of_the_constant_point_presheaf_mirror_the_base() {
        let cat = arrow_category();
        let pt = SetPresheaf::constant_point(&cat, Variance::Contravariant);
        let elements = category_of_elements(&pt, &Caps::default()).unwrap();
        assert_eq!(elements.category.objects().len(), cat.objects().len());
        assert_eq!(elements.category.morphisms().len(), cat.morphisms().len());
        assert!(elements.category.validate().is_empty());
    }

    #[test]
    fn elements_of_the_empty_presheaf_form_the_empty_category() {
        let cat = arrow_category();
        let empty = SetPresheaf::new(
            &cat,
            Variance::Contravariant,
            [(o("U"), FinSet::empty("EU")), (o("V"), FinSet::empty("EV"))].into(),
            [(m("m"), SetFn::new(FinSet::empty("EV"), FinSet::empty("EU"), BTreeMap::new()).unwrap())]
                .into(),
        )
        .unwrap();
        let elements = category_of_elements(&empty, &Caps::default()).unwrap();
        assert!(elements.category.objects().is_empty());
    }

    #[test]
    fn elements_object_count_is_the_total_size() {
        let cat = arrow_category();
        let hv = yoneda_h(&cat, &o("V")).unwrap();
        let elements = category_of_elements(&hv, &Caps::default()).unwrap();
        assert_eq!(elements.category.objects().len(), hv.total_size());
        assert!(elements.category.validate().is_empty());
    }

    #[test]
    fn extension_agrees_with_the_functor_on_representables() {
        let cat = arrow_category();
        let f = yoneda_k(&cat, &o("U")).unwrap(); // Hom(U, ·) as Set-valued functor
        for x in cat.objects() {
            let hx = yoneda_h(&cat, x).unwrap();
            let extended = yoneda_extension(&f, &hx, &Caps::default()).unwrap();
            assert_eq!(extended.apex.len(), f.value(x).len(), "at object {x}");
        }
    }

    #[test]
    fn extension_turns_ind_lim_into_colimit() {
        let cat = arrow_category();
        let f = yoneda_k(&cat, &o("U")).unwrap();
        let shape = build_shape(&ShapeKind::Discrete(2));
        let d = CatDiagram::new(
            &cat,
            shape,
            Variance::Covariant,
            [(o("I1"), o("U")), (o("I2"), o("V"))].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let p = ind_lim(&d, &Caps::default()).unwrap();
        let extended = yoneda_extension(&f, &p, &Caps::default()).unwrap();
        // Coproduct of F(U) and F(V).
        assert_eq!(extended.apex.len(), f.value(&o("U")).len() + f.value(&o("V")).len());
    }

    #[test]
    fn extension_at_constant_point_is_colim_over_the_base() {
        let cat = arrow_category();
        let f = yoneda_k(&cat, &o("U")).unwrap();
        let pt = SetPresheaf::constant_point(&cat, Variance::Contravariant);
        let extended = yoneda_extension(&f, &pt, &Caps::default()).unwrap();
        // Base is connected (U → V), so the colimit glues F(U) into F(V)
        // along the action of m; here both values have size 1.
        assert_eq!(extended.apex.len(), 1);
    }

    #[test]
    fn hom_out_of_lifted_colimit_counts_cocones() {
        // Transformations from the lifted colimit into a representable
        // match the matching families of hom-sets, pointwise.
        let cat = arrow_category();
        let shape = build_shape(&ShapeKind::Discrete(2));
        let alpha = CatDiagram::new(
            &cat,
            shape,
            Variance::Covariant,
            [(o("I1"), o("U")), (o("I2"), o("V"))].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let caps = Caps::default();
        let lifted = ind_lim(&alpha, &caps).unwrap();
        let cocones = cocone_presheaf(&alpha, &caps).unwrap();
        for x in cat.objects() {
            let hx = yoneda_h(&cat, x).unwrap();
            let nat = enumerate_nat_trans(&lifted, &hx, &caps).unwrap();
            assert_eq!(nat.len(), cocones.value(x).len(), "at {x}");
        }
    }

    #[test]
    fn pointwise_product_of_representables_is_represented_by_the_meet() {
        let diamond = crate::gen::diamond_poset();
        let caps = Caps::default();
        let a = yoneda_h(&diamond, &o("qa")).unwrap();
        let b = yoneda_h(&diamond, &o("qb")).unwrap();
        let d = PresheafDiagram::new(
            &diamond,
            build_shape(&ShapeKind::Discrete(2)),
            Variance::Contravariant,
            Variance::Contravariant,
            [(o("I1"), a), (o("I2"), b)].into(),
            BTreeMap::new(),
        )
        .unwrap();
        let prod = presheaf_lim(&d, &caps).unwrap();
        let witness = representability_search(&prod, &caps).unwrap().unwrap();
        assert_eq!(witness.object, o("q0"));
    }

    #[test]
    fn covariant_extension_agrees_on_representables() {
        let cat = arrow_category();
        let f = yoneda_k(&cat, &o("U")).unwrap();
        for x in cat.objects() {
            let kx = yoneda_k(&cat, x).unwrap();
            let extended = yoneda_extension_cov(&f, &kx, &Caps::default()).unwrap();
            assert_eq!(extended.apex.len(), f.value(x).len(), "at object {x}");
        }
    }
}
