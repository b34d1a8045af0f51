//! Seeded generators for random finite structures.
//!
//! Everything here is deterministic given its seed (ChaCha8 keeps a stable
//! stream across platforms), so generated suites and their verdicts are
//! reproducible byte for byte. Random categories come from free
//! composition closure over acyclic edge sets, which is valid by
//! construction; the validator re-checks anyway in tests. Posets are the
//! workhorse for adjunction and limit stress tests because representability
//! is decidable at a glance there.

use std::collections::BTreeMap;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::fincat::{FinCategory, MorId, Morphism, ObjId};
use crate::finset::{ElemId, FinSet, SetDiagram, SetFn, Variance};
use crate::presheaf::SetPresheaf;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Bounds for random category generation.
#[derive(Debug, Clone, Copy)]
pub struct CategoryBounds {
    pub max_objects: usize,
    pub max_morphisms: usize,
}

impl Default for CategoryBounds {
    fn default() -> Self {
        CategoryBounds { max_objects: 5, max_morphisms: 12 }
    }
}

/// A random category built by free composition closure: objects, an
/// acyclic set of generating arrows, and one morphism per path. Path
/// concatenation is associative, so the result is always a valid category.
pub fn random_category(seed: u64, bounds: &CategoryBounds) -> FinCategory {
    let mut r = rng(seed);
    // Retry with fewer edges until the path closure fits the bound.
    for attempt in 0..64 {
        let n = r.gen_range(1..=bounds.max_objects);
        let max_edges = n * (n.saturating_sub(1)) / 2;
        let budget = bounds.max_morphisms.saturating_sub(n);
        let edge_count = r.gen_range(0..=max_edges.min(budget).min(6));
        let mut edges: Vec<(usize, usize)> = Vec::new();
        for _ in 0..edge_count {
            if n < 2 {
                break;
            }
            let a = r.gen_range(0..n - 1);
            let b = r.gen_range(a + 1..n);
            if !edges.contains(&(a, b)) {
                edges.push((a, b));
            }
        }
        edges.sort();
        if let Some(cat) = dag_closure_category(&format!("rand{seed}_{attempt}"), n, &edges) {
            if cat.morphisms().len() <= bounds.max_morphisms {
                return cat;
            }
        }
    }
    // Degenerate fallback: a discrete category always fits.
    crate::fincat::build_shape(&crate::fincat::ShapeKind::Discrete(1))
}

/// All paths over an acyclic edge set, as an explicit category.
/// Returns `None` if the closure exceeds a hard safety bound.
fn dag_closure_category(name: &str, n: usize, edges: &[(usize, usize)]) -> Option<FinCategory> {
    let obj = |i: usize| ObjId(format!("X{}", i + 1));
    let objects: Vec<ObjId> = (0..n).map(obj).collect();
    let edge_names: Vec<String> = (0..edges.len()).map(|k| format!("e{}", k + 1)).collect();
    // Paths as edge-index sequences in composition order (head applied last).
    let mut paths: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    let mut frontier: Vec<(usize, usize, Vec<usize>)> = edges
        .iter()
        .enumerate()
        .map(|(k, &(a, b))| (a, b, vec![k]))
        .collect();
    while let Some(p) = frontier.pop() {
        if paths.len() > 512 {
            return None;
        }
        paths.push(p.clone());
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a == p.1 {
                let mut seq = vec![k];
                seq.extend(&p.2);
                frontier.push((p.0, b, seq));
            }
        }
    }
    let path_id = |seq: &[usize]| -> MorId {
        let names: Vec<&str> = seq.iter().rev().map(|&k| edge_names[k].as_str()).collect();
        MorId(names.join("."))
    };
    let mut morphisms: Vec<Morphism> = Vec::new();
    let mut identities = BTreeMap::new();
    for (i, o) in objects.iter().enumerate() {
        let id = MorId(format!("id_X{}", i + 1));
        morphisms.push(Morphism { id: id.clone(), src: o.clone(), dst: o.clone() });
        identities.insert(o.clone(), id);
    }
    let mut by_seq: BTreeMap<Vec<usize>, (usize, usize)> = BTreeMap::new();
    for (a, b, seq) in &paths {
        morphisms.push(Morphism { id: path_id(seq), src: obj(*a), dst: obj(*b) });
        by_seq.insert(seq.clone(), (*a, *b));
    }
    let mut composition = BTreeMap::new();
    for (seq_f, &(_, bf)) in &by_seq {
        for (seq_g, &(ag, _)) in &by_seq {
            if bf != ag {
                continue;
            }
            let mut combined = seq_f.clone();
            combined.extend(seq_g);
            composition.insert((path_id(seq_g), path_id(seq_f)), path_id(&combined));
        }
    }
    FinCategory::new(name, objects, morphisms, identities, composition).ok()
}

/// A poset presented as a category: one morphism `x_to_y` per related pair.
pub fn poset_category(name: &str, elements: &[&str], leq: impl Fn(usize, usize) -> bool) -> FinCategory {
    let objects: Vec<ObjId> = elements.iter().map(|e| ObjId::from(*e)).collect();
    let mut morphisms = Vec::new();
    let mut identities = BTreeMap::new();
    for (i, o) in objects.iter().enumerate() {
        assert!(leq(i, i), "poset order must be reflexive");
        let id = MorId(format!("id_{o}"));
        morphisms.push(Morphism { id: id.clone(), src: o.clone(), dst: o.clone() });
        identities.insert(o.clone(), id);
    }
    for (i, x) in objects.iter().enumerate() {
        for (j, y) in objects.iter().enumerate() {
            if i != j && leq(i, j) {
                morphisms.push(Morphism {
                    id: MorId(format!("{x}_to_{y}")),
                    src: x.clone(),
                    dst: y.clone(),
                });
            }
        }
    }
    // Composition is forced: at most one morphism per hom-set.
    let mut composition = BTreeMap::new();
    let all = morphisms.clone();
    for g in &all {
        for f in &all {
            if f.dst != g.src {
                continue;
            }
            let result = if f.src == g.dst {
                // Only possible when both are identities on the same object.
                identities[&f.src].clone()
            } else {
                MorId(format!("{}_to_{}", f.src, g.dst))
            };
            composition.insert((g.id.clone(), f.id.clone()), result);
        }
    }
    FinCategory::new(name, objects, morphisms, identities, composition)
        .expect("poset structure is well formed")
}

/// A total order with `n` elements `p1 ≤ … ≤ pn`.
pub fn chain_poset(n: usize) -> FinCategory {
    let names: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    poset_category(&format!("chain{n}"), &refs, |i, j| i <= j)
}

/// The divisibility lattice on the divisors of `n` (for small `n`).
pub fn divisor_lattice(n: u32) -> FinCategory {
    let divisors: Vec<u32> = (1..=n).filter(|d| n % d == 0).collect();
    let names: Vec<String> = divisors.iter().map(|d| format!("d{d:02}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    poset_category(&format!("div{n}"), &refs, |i, j| divisors[j] % divisors[i] == 0)
}

/// The four-element diamond: bottom, two incomparable middles, top.
pub fn diamond_poset() -> FinCategory {
    let leq = |i: usize, j: usize| i == j || i == 0 || j == 3;
    poset_category("diamond", &["q0", "qa", "qb", "qt"], leq)
}

/// A deterministic family of small lattices used by the law suites.
pub fn lattice_posets() -> Vec<FinCategory> {
    vec![chain_poset(2), chain_poset(3), chain_poset(4), diamond_poset(), divisor_lattice(12)]
}

/// A random poset: reflexive-transitive closure of a random acyclic
/// relation on `n` elements.
pub fn random_poset(seed: u64, n: usize) -> FinCategory {
    let mut r = rng(seed);
    let mut rel = vec![vec![false; n]; n];
    for (i, row) in rel.iter_mut().enumerate() {
        row[i] = true;
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if r.gen_bool(0.4) {
                rel[i][j] = true;
            }
        }
    }
    // Transitive closure (indices already topologically ordered).
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if rel[i][k] && rel[k][j] {
                    rel[i][j] = true;
                }
            }
        }
    }
    let names: Vec<String> = (1..=n).map(|i| format!("p{i}")).collect();
    let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
    poset_category(&format!("poset{seed}"), &refs, |i, j| rel[i][j])
}

/// `x ≤ y` in a poset category.
pub fn poset_leq(cat: &FinCategory, x: &ObjId, y: &ObjId) -> bool {
    !cat.hom(x, y).is_empty()
}

/// Least upper bound in a poset category, when it exists.
pub fn poset_join(cat: &FinCategory, x: &ObjId, y: &ObjId) -> Option<ObjId> {
    let uppers: Vec<&ObjId> = cat
        .objects()
        .iter()
        .filter(|z| poset_leq(cat, x, z) && poset_leq(cat, y, z))
        .collect();
    uppers
        .iter()
        .find(|z| uppers.iter().all(|w| poset_leq(cat, z, w)))
        .map(|z| (*z).clone())
}

/// Greatest lower bound in a poset category, when it exists.
pub fn poset_meet(cat: &FinCategory, x: &ObjId, y: &ObjId) -> Option<ObjId> {
    let lowers: Vec<&ObjId> = cat
        .objects()
        .iter()
        .filter(|z| poset_leq(cat, z, x) && poset_leq(cat, z, y))
        .collect();
    lowers
        .iter()
        .find(|z| lowers.iter().all(|w| poset_leq(cat, w, z)))
        .map(|z| (*z).clone())
}

/// Enumerates every presheaf of the given variance with pointwise size at
/// most `max_elems`, in a deterministic order. Errors out once more than
/// `cap` presheaves exist, so suite generators can skip oversized bases.
pub fn enumerate_presheaves(
    cat: &FinCategory,
    variance: Variance,
    max_elems: usize,
    cap: usize,
) -> Result<Vec<SetPresheaf>> {
    let objects: Vec<&ObjId> = cat.objects().iter().collect();
    let non_id: Vec<&Morphism> = cat
        .morphisms()
        .iter()
        .filter(|m| !cat.is_identity(&m.id))
        .collect();
    // Composable triples (g, f, g∘f) among the listed morphisms; a triple is
    // checked as soon as the last of its non-identity members is assigned.
    struct Triple {
        g: usize,
        f: usize,
        composite: CompositeRef,
    }
    enum CompositeRef {
        NonId(usize),
        Identity(usize), // object index whose identity the composite is
    }
    let mor_index: BTreeMap<&MorId, usize> =
        non_id.iter().enumerate().map(|(k, m)| (&m.id, k)).collect();
    let obj_index: BTreeMap<&ObjId, usize> =
        objects.iter().enumerate().map(|(i, o)| (*o, i)).collect();
    let mut triples = Vec::new();
    for (gi, g) in non_id.iter().enumerate() {
        for (fi, f) in non_id.iter().enumerate() {
            if f.dst != g.src {
                continue;
            }
            let c = cat
                .compose(&g.id, &f.id)
                .ok_or_else(|| Error::invalid("presheaf base is not total".to_string()))?;
            let composite = match mor_index.get(c) {
                Some(&ci) => CompositeRef::NonId(ci),
                None => CompositeRef::Identity(obj_index[&cat.morphism(c).unwrap().src]),
            };
            triples.push(Triple { g: gi, f: fi, composite });
        }
    }
    let canonical_elems = |size: usize| -> Vec<ElemId> {
        (1..=size).map(|i| ElemId(format!("e{i}"))).collect()
    };

    let mut out: Vec<SetPresheaf> = Vec::new();
    let mut sizes = vec![0usize; objects.len()];
    // Odometer over value sizes; for each size vector, backtrack over
    // action tables morphism by morphism.
    'sizes: loop {
        let sets: Vec<FinSet> = objects
            .iter()
            .zip(&sizes)
            .map(|(o, &s)| FinSet::new(format!("v_{o}"), canonical_elems(s)).expect("distinct"))
            .collect();
        // Action endpoints per non-identity morphism (as object indices).
        let endpoints: Vec<(usize, usize)> = non_id
            .iter()
            .map(|mph| {
                let (s, d) = match variance {
                    Variance::Covariant => (&mph.src, &mph.dst),
                    Variance::Contravariant => (&mph.dst, &mph.src),
                };
                (obj_index[s], obj_index[d])
            })
            .collect();
        let feasible = endpoints
            .iter()
            .all(|&(s, d)| sizes[s] == 0 || sizes[d] > 0);
        if feasible {
            let mut tables: Vec<Vec<usize>> = Vec::with_capacity(non_id.len());
            enumerate_actions(
                cat,
                variance,
                &objects,
                &sets,
                &sizes,
                &endpoints,
                &non_id,
                &triples
                    .iter()
                    .map(|t| {
                        (
                            t.g,
                            t.f,
                            match t.composite {
                                CompositeRef::NonId(ci) => Ok(ci),
                                CompositeRef::Identity(oi) => Err(oi),
                            },
                        )
                    })
                    .collect::<Vec<_>>(),
                &mut tables,
                cap,
                &mut out,
            )?;
        }
        // Next size vector.
        let mut k = sizes.len();
        loop {
            if k == 0 {
                break 'sizes;
            }
            k -= 1;
            sizes[k] += 1;
            if sizes[k] <= max_elems {
                break;
            }
            sizes[k] = 0;
        }
        if objects.is_empty() {
            break;
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn enumerate_actions(
    cat: &FinCategory,
    variance: Variance,
    objects: &[&ObjId],
    sets: &[FinSet],
    sizes: &[usize],
    endpoints: &[(usize, usize)],
    non_id: &[&Morphism],
    triples: &[(usize, usize, std::result::Result<usize, usize>)],
    tables: &mut Vec<Vec<usize>>,
    cap: usize,
    out: &mut Vec<SetPresheaf>,
) -> Result<()> {
    let k = tables.len();
    if k == non_id.len() {
        let values: BTreeMap<ObjId, FinSet> = objects
            .iter()
            .zip(sets)
            .map(|(o, s)| ((*o).clone(), s.clone()))
            .collect();
        let mut actions = BTreeMap::new();
        for (i, mph) in non_id.iter().enumerate() {
            let (s, d) = endpoints[i];
            let table: BTreeMap<ElemId, ElemId> = sets[s]
                .elements()
                .iter()
                .zip(&tables[i])
                .map(|(e, &ti)| (e.clone(), sets[d].elements()[ti].clone()))
                .collect();
            actions.insert(mph.id.clone(), SetFn::new(sets[s].clone(), sets[d].clone(), table)?);
        }
        if out.len() >= cap {
            return Err(Error::capacity(format!(
                "more than {cap} presheaves over {}",
                cat.name()
            )));
        }
        out.push(SetPresheaf::new(cat, variance, values, actions)?);
        return Ok(());
    }
    let (s, d) = endpoints[k];
    let (src_size, dst_size) = (sizes[s], sizes[d]);
    let count = (dst_size as u64).checked_pow(src_size as u32).unwrap_or(u64::MAX);
    if src_size > 0 && dst_size == 0 {
        return Ok(());
    }
    let mut table = vec![0usize; src_size];
    for combo in 0..count.max(1) {
        // Decode combo into a table.
        let mut c = combo;
        for t in table.iter_mut() {
            *t = (c % dst_size.max(1) as u64) as usize;
            c /= dst_size.max(1) as u64;
        }
        tables.push(table.clone());
        if actions_consistent(variance, endpoints, sizes, tables, triples, k) {
            enumerate_actions(
                cat, variance, objects, sets, sizes, endpoints, non_id, triples, tables, cap, out,
            )?;
        }
        tables.pop();
    }
    Ok(())
}

/// Checks every composite constraint whose members are all decided by the
/// assignment of morphism `k`.
fn actions_consistent(
    variance: Variance,
    endpoints: &[(usize, usize)],
    sizes: &[usize],
    tables: &[Vec<usize>],
    triples: &[(usize, usize, std::result::Result<usize, usize>)],
    k: usize,
) -> bool {
    let assigned = tables.len();
    for &(g, f, comp) in triples {
        let members: Vec<usize> = match comp {
            Ok(c) => vec![g, f, c],
            Err(_) => vec![g, f],
        };
        if members.iter().any(|&m| m >= assigned) || !members.contains(&k) {
            continue;
        }
        // Contravariant: act(g∘f) = act(f) ∘ act(g); covariant: act(g) ∘ act(f).
        let (outer, inner) = match variance {
            Variance::Contravariant => (f, g),
            Variance::Covariant => (g, f),
        };
        let inner_table = &tables[inner];
        let outer_table = &tables[outer];
        let composite_src = endpoints[inner].0;
        for x in 0..sizes[composite_src] {
            let via = outer_table[inner_table[x]];
            let want = match comp {
                Ok(c) => tables[c][x],
                Err(_) => x,
            };
            if via != want {
                return false;
            }
        }
    }
    true
}

/// A seeded random presheaf: a deterministic pick from the full enumeration.
pub fn random_presheaf(
    cat: &FinCategory,
    variance: Variance,
    seed: u64,
    max_elems: usize,
    cap: usize,
) -> Result<SetPresheaf> {
    let all = enumerate_presheaves(cat, variance, max_elems, cap)?;
    if all.is_empty() {
        return Err(Error::invalid(format!("no presheaves over {}", cat.name())));
    }
    let idx = rng(seed).gen_range(0..all.len());
    Ok(all[idx].clone())
}

/// A random finite set with `1..=max` elements named after the seed stream.
pub fn random_set(r: &mut ChaCha8Rng, id: &str, min: usize, max: usize) -> FinSet {
    let size = r.gen_range(min..=max);
    FinSet::new(id, (1..=size).map(|i| ElemId(format!("{id}{i}"))).collect())
        .expect("generated elements are distinct")
}

fn random_fn(r: &mut ChaCha8Rng, src: &FinSet, dst: &FinSet) -> SetFn {
    let table = src
        .elements()
        .iter()
        .map(|e| {
            let pick = dst.elements()[r.gen_range(0..dst.len())].clone();
            (e.clone(), pick)
        })
        .collect();
    SetFn::new(src.clone(), dst.clone(), table).expect("image inside target")
}

/// Shape tags used by the random diagram generator.
pub fn dual_route_shapes() -> Vec<crate::fincat::ShapeKind> {
    use crate::fincat::ShapeKind;
    vec![
        ShapeKind::Discrete(0),
        ShapeKind::Discrete(1),
        ShapeKind::Discrete(2),
        ShapeKind::Discrete(3),
        ShapeKind::ParallelPair,
        ShapeKind::Cospan,
    ]
}

/// A random contravariant set diagram over one of the dual-route shapes.
/// Sets carry 0–3 elements on discrete shapes and 1–3 otherwise (arrow
/// shapes need nonempty targets for tables to exist).
pub fn random_contravariant_diagram(seed: u64) -> SetDiagram {
    let mut r = rng(seed);
    let shapes = dual_route_shapes();
    let kind = &shapes[r.gen_range(0..shapes.len())];
    let shape = crate::fincat::build_shape(kind);
    let discrete = matches!(kind, crate::fincat::ShapeKind::Discrete(_));
    let min = if discrete { 0 } else { 1 };
    let objects: BTreeMap<ObjId, FinSet> = shape
        .objects()
        .iter()
        .map(|o| {
            let set = random_set(&mut r, &format!("s{o}"), min, 3);
            (o.clone(), set)
        })
        .collect();
    let mut morphisms = BTreeMap::new();
    for m in shape.morphisms() {
        if shape.is_identity(&m.id) {
            continue;
        }
        // Contravariant: table F(dst) → F(src).
        let f = random_fn(&mut r, &objects[&m.dst], &objects[&m.src]);
        morphisms.insert(m.id.clone(), f);
    }
    SetDiagram::new(shape, Variance::Contravariant, objects, morphisms)
        .expect("generated tables respect the shape")
}

/// Random categories suitable for exhaustive presheaf sweeps: sized within
/// the bounds and with at most `presheaf_cap` presheaves of pointwise size
/// `max_elems`. Seeds that overflow the cap are skipped deterministically.
pub fn presheaf_sweep_categories(
    count: usize,
    seed: u64,
    bounds: &CategoryBounds,
    max_elems: usize,
    presheaf_cap: usize,
) -> Vec<(FinCategory, Vec<SetPresheaf>)> {
    let mut out = Vec::new();
    let mut sub_seed = seed;
    while out.len() < count {
        let cat = random_category(sub_seed, bounds);
        sub_seed += 1;
        match enumerate_presheaves(&cat, Variance::Contravariant, max_elems, presheaf_cap) {
            Ok(presheaves) => out.push((cat, presheaves)),
            Err(_) => continue,
        }
    }
    out
}

/// All monotone object maps between two poset categories, in lexicographic
/// order of their value vectors.
pub fn monotone_obj_maps(p: &FinCategory, q: &FinCategory) -> Vec<BTreeMap<ObjId, ObjId>> {
    let src = p.objects().to_vec();
    let dst = q.objects().to_vec();
    if dst.is_empty() {
        return if src.is_empty() { vec![BTreeMap::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut idx = vec![0usize; src.len()];
    loop {
        let map: BTreeMap<ObjId, ObjId> = src
            .iter()
            .zip(&idx)
            .map(|(o, &i)| (o.clone(), dst[i].clone()))
            .collect();
        let monotone = src.iter().enumerate().all(|(i, a)| {
            src.iter().enumerate().all(|(j, b)| {
                !(poset_leq(p, a, b)) || poset_leq(q, &dst[idx[i]], &dst[idx[j]])
            })
        });
        if monotone {
            out.push(map);
        }
        let mut k = idx.len();
        loop {
            if k == 0 {
                return out;
            }
            k -= 1;
            idx[k] += 1;
            if idx[k] < dst.len() {
                break;
            }
            idx[k] = 0;
        }
        if idx.is_empty() {
            return out;
        }
    }
}

/// The left adjoint of a monotone map `g : Q → P`, if it exists:
/// `f(x) = min { y : x ≤ g(y) }`.
pub fn left_adjoint_of(
    p: &FinCategory,
    q: &FinCategory,
    g: &BTreeMap<ObjId, ObjId>,
) -> Option<BTreeMap<ObjId, ObjId>> {
    let mut f = BTreeMap::new();
    for x in p.objects() {
        let uppers: Vec<&ObjId> = q
            .objects()
            .iter()
            .filter(|y| poset_leq(p, x, &g[*y]))
            .collect();
        let min = uppers
            .iter()
            .find(|y| uppers.iter().all(|z| poset_leq(q, y, z)))?;
        f.insert(x.clone(), (*min).clone());
    }
    // Verify the Galois condition both ways.
    for x in p.objects() {
        for y in q.objects() {
            if poset_leq(q, &f[x], y) != poset_leq(p, x, &g[y]) {
                return None;
            }
        }
    }
    Some(f)
}

/// A generated knowledge base with its ground truth: which
/// expression-bearing concepts carry a verifier-valid expression, and what
/// was originally planted.
pub struct GeneratedKb {
    pub kb: crate::concept::ConceptKB,
    pub truth: BTreeMap<String, bool>,
    pub planted: BTreeMap<String, crate::concept::LimitExpression>,
    /// Name of the concept whose expression was corrupted, if any.
    pub corrupted: Option<String>,
}

/// Builds a seeded knowledge base over a function-closure category with a
/// split-equalizer cluster (concept `goal`, defined projectively) and a
/// split-coequalizer cluster (concept `family`, presented inductively).
/// Both planted expressions pass the brute-force verifier by construction;
/// with `corrupt` one of them is replaced by a seeded single edit that
/// provably fails it and is visible to a quarter of the task universe.
pub fn random_concept_kb(seed: u64, corrupt: bool) -> crate::error::Result<GeneratedKb> {
    use crate::concept::{ConceptEntry, ConceptKB, LimitExpression, LimitOp, TaskUniverse};
    use crate::fixtures::{function_category, GenFn};

    let mut r = rng(seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(1));
    // Split equalizer: goal = the agreement of two evaluations.
    let na = r.gen_range(1..=2usize);
    let nx = na + r.gen_range(1..=(4 - na).min(2));
    let ny = nx + (nx - na);
    let goal: Vec<String> = (1..=na).map(|i| format!("g{i}")).collect();
    let method: Vec<String> = (1..=nx).map(|i| format!("x{i}")).collect();
    let outcome: Vec<String> = (1..=ny).map(|i| format!("y{i}")).collect();
    let pairs = |xs: &[String], f: &dyn Fn(usize) -> String| -> Vec<(String, String)> {
        xs.iter().enumerate().map(|(i, e)| (e.clone(), f(i))).collect()
    };
    let eval_direct = pairs(&method, &|i| format!("y{}", i + 1));
    let eval_memo =
        pairs(&method, &|i| if i < na { format!("y{}", i + 1) } else { format!("y{}", nx + i - na + 1) });
    let embed_goal = pairs(&goal, &|i| format!("x{}", i + 1));
    let retract_choice: Vec<usize> = (0..nx)
        .map(|i| if i < na { i } else { r.gen_range(0..na) })
        .collect();
    let name_goal = pairs(&method, &|i| format!("g{}", retract_choice[i] + 1));
    let pick_method = pairs(&outcome, &|i| {
        if i < nx {
            format!("x{}", i + 1)
        } else {
            // Fresh targets of eval_memo: y_{nx+k} comes from x_{na+k}.
            let x_index = na + (i - nx);
            format!("x{}", retract_choice[x_index] + 1)
        }
    });
    // Split coequalizer: family = samples glued along normalization.
    let nl = r.gen_range(1..=2usize);
    let ns = nl + r.gen_range(1..=2usize);
    let family: Vec<String> = (1..=nl).map(|i| format!("f{i}")).collect();
    let sample: Vec<String> = (1..=ns).map(|i| format!("s{i}")).collect();
    let pairing: Vec<String> = (1..=ns).map(|i| format!("z{i}")).collect();
    let class_of: Vec<usize> = (0..ns).map(|i| if i < nl { i } else { r.gen_range(0..nl) }).collect();
    let classify = pairs(&sample, &|i| format!("f{}", class_of[i] + 1));
    let represent = pairs(&family, &|i| format!("s{}", i + 1));
    let run_pair = pairs(&pairing, &|i| format!("s{}", i + 1));
    // normalize = represent ∘ classify ∘ run: z_i ↦ the canonical sample of
    // s_i's class.
    let norm_pair = pairs(&pairing, &|i| format!("s{}", class_of[i] + 1));
    let to_refs = |v: &[(String, String)]| -> Vec<(String, String)> { v.to_vec() };
    let carriers_owned: Vec<(String, Vec<String>)> = vec![
        ("goal".into(), goal),
        ("method".into(), method),
        ("outcome".into(), outcome),
        ("family".into(), family),
        ("sample".into(), sample),
        ("pairing".into(), pairing),
    ];
    let carrier_refs: Vec<(&str, Vec<&str>)> = carriers_owned
        .iter()
        .map(|(n, es)| (n.as_str(), es.iter().map(|e| e.as_str()).collect()))
        .collect();
    let carrier_slices: Vec<(&str, &[&str])> =
        carrier_refs.iter().map(|(n, es)| (*n, es.as_slice())).collect();
    let gen_fn = |name: &str, src: &str, dst: &str, table: &[(String, String)]| -> GenFn {
        let str_pairs: Vec<(&str, &str)> =
            table.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        GenFn::new(name, src, dst, &str_pairs)
    };
    let generators = vec![
        gen_fn("eval_direct", "method", "outcome", &to_refs(&eval_direct)),
        gen_fn("eval_memo", "method", "outcome", &to_refs(&eval_memo)),
        gen_fn("embed_goal", "goal", "method", &to_refs(&embed_goal)),
        gen_fn("name_goal", "method", "goal", &to_refs(&name_goal)),
        gen_fn("pick_method", "outcome", "method", &to_refs(&pick_method)),
        gen_fn("classify", "sample", "family", &to_refs(&classify)),
        gen_fn("represent", "family", "sample", &to_refs(&represent)),
        gen_fn("run_pair", "pairing", "sample", &to_refs(&run_pair)),
        gen_fn("norm_pair", "pairing", "sample", &to_refs(&norm_pair)),
        gen_fn("pair_of", "sample", "pairing", &to_refs(&pairs(&carriers_owned[4].1, &|i| format!("z{}", i + 1)))),
    ];
    let cat = function_category(&format!("kb{seed}"), &carrier_slices, &generators)?;
    let pp = |op: LimitOp, i1: &str, i2: &str, m1: &str, m2: &str| LimitExpression {
        operator: op,
        shape: crate::fincat::ShapeKind::ParallelPair,
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
    };
    let goal_expr = pp(LimitOp::Projective, "outcome", "method", "eval_direct", "eval_memo");
    let family_expr = pp(LimitOp::Inductive, "pairing", "sample", "run_pair", "norm_pair");
    let mut concepts = vec![
        ConceptEntry {
            name: "goal".to_string(),
            expressions: vec![goal_expr.clone()],
            trusted_leaf: false,
        },
        ConceptEntry {
            name: "family".to_string(),
            expressions: vec![family_expr.clone()],
            trusted_leaf: false,
        },
    ];
    for leaf in ["method", "outcome", "sample", "pairing"] {
        concepts.push(ConceptEntry {
            name: leaf.to_string(),
            expressions: Vec::new(),
            trusted_leaf: true,
        });
    }
    let functors = [
        (
            "unit".to_string(),
            SetPresheaf::constant_point(&cat, Variance::Covariant),
        ),
        (
            "traces".to_string(),
            crate::presheaf::yoneda_k(&cat, &ObjId::from("method"))?,
        ),
    ]
    .into();
    let task_universe = TaskUniverse { probes: cat.objects().to_vec(), functors };
    let kb = ConceptKB::new(cat, concepts, BTreeMap::new(), task_universe)?;
    let mut planted = BTreeMap::new();
    planted.insert("goal".to_string(), goal_expr);
    planted.insert("family".to_string(), family_expr);
    let mut truth: BTreeMap<String, bool> =
        [("goal".to_string(), true), ("family".to_string(), true)].into();
    if !corrupt {
        return Ok(GeneratedKb { kb, truth, planted, corrupted: None });
    }
    let victim = if r.gen_bool(0.5) { "goal" } else { "family" };
    let caps = crate::caps::Caps::default();
    let corrupted_kb = corrupt_expression(&kb, victim, r.gen(), &caps)?;
    truth.insert(victim.to_string(), false);
    Ok(GeneratedKb {
        kb: corrupted_kb,
        truth,
        planted,
        corrupted: Some(victim.to_string()),
    })
}

/// Replaces one entry of a concept's first expression (an edge relation or
/// a node concept) by a seeded single edit that keeps the diagram well
/// formed, provably fails the brute-force verifier, and is visible to at
/// least a quarter of the concept's applicable tasks. Edits that leave the
/// expression equivalent (absorbed corruptions) are skipped, as usual in
/// mutation testing.
pub fn corrupt_expression(
    kb: &crate::concept::ConceptKB,
    concept: &str,
    seed: u64,
    caps: &crate::caps::Caps,
) -> crate::error::Result<crate::concept::ConceptKB> {
    use crate::concept::{
        applicable_tasks, apply_task, limit_verifier, similarity_d, LimitExpression, TaskTarget,
    };
    let expr = kb
        .concept(concept)?
        .expressions
        .first()
        .cloned()
        .ok_or_else(|| Error::invalid(format!("{concept} has no expression to corrupt")))?;
    let cat = kb.category();
    let shape = crate::fincat::build_shape(&expr.shape);
    // Candidate single edits, in deterministic order.
    let mut candidates: Vec<LimitExpression> = Vec::new();
    for (m, current) in &expr.edges {
        let cm = cat.morphism(current).expect("validated expression");
        for alt in cat.hom(&cm.src, &cm.dst) {
            if &alt != current {
                let mut e = expr.clone();
                e.edges.insert(m.clone(), alt);
                candidates.push(e);
            }
        }
    }
    for (node, current) in &expr.nodes {
        for alt in cat.objects() {
            if alt.as_str() == current || alt.as_str() == concept {
                continue;
            }
            let mut e = expr.clone();
            e.nodes.insert(node.clone(), alt.as_str().to_string());
            // Re-point every edge touching this node at the first available
            // parallel relation, skipping the candidate if none exists.
            let mut ok = true;
            for m in shape.morphisms() {
                if shape.is_identity(&m.id) {
                    continue;
                }
                let (src_node, dst_node) = match expr.operator.variance() {
                    Variance::Covariant => (&m.src, &m.dst),
                    Variance::Contravariant => (&m.dst, &m.src),
                };
                let src_obj = ObjId(e.nodes[src_node].clone());
                let dst_obj = ObjId(e.nodes[dst_node].clone());
                let current_edge = &e.edges[&m.id];
                let cm = cat.morphism(current_edge).expect("validated");
                if cm.src == src_obj && cm.dst == dst_obj {
                    continue;
                }
                match cat.hom(&src_obj, &dst_obj).into_iter().next() {
                    Some(repl) => {
                        e.edges.insert(m.id.clone(), repl);
                    }
                    None => {
                        ok = false;
                        break;
                    }
                }
            }
            if ok {
                candidates.push(e);
            }
        }
    }
    // Seeded rotation so different seeds pick different edits first.
    if candidates.is_empty() {
        return Err(Error::invalid(format!("no single-edit candidates for {concept}")));
    }
    let offset = rng(seed).gen_range(0..candidates.len());
    candidates.rotate_left(offset);
    let tasks = applicable_tasks(kb, concept)?;
    for candidate in candidates {
        if kb.expression_diagram(&candidate).is_err() {
            continue;
        }
        if limit_verifier(kb, &candidate, concept, caps)? {
            continue; // equivalent mutant
        }
        let mut distinguishing = 0usize;
        for task in &tasks {
            let on_concept = apply_task(kb, task, TaskTarget::Concept(concept), caps)?;
            let on_expr = apply_task(kb, task, TaskTarget::Expression(&candidate), caps)?;
            if similarity_d(&on_concept, &on_expr) > 0.0 {
                distinguishing += 1;
            }
        }
        if distinguishing * 4 >= tasks.len() {
            return kb.with_expressions(concept, vec![candidate]);
        }
    }
    Err(Error::invalid(format!(
        "no task-visible verifier-breaking single edit exists for {concept}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::caps::Caps;

    #[test]
    fn random_categories_validate() {
        for seed in 0..40 {
            let cat = random_category(seed, &CategoryBounds::default());
            assert!(cat.validate().is_empty(), "seed {seed} produced an invalid category");
            assert!(cat.objects().len() <= 5);
            assert!(cat.morphisms().len() <= 12);
        }
    }

    #[test]
    fn random_categories_are_deterministic() {
        let a = random_category(7, &CategoryBounds::default());
        let b = random_category(7, &CategoryBounds::default());
        assert_eq!(a, b);
    }

    #[test]
    fn posets_validate_and_have_expected_bounds() {
        for cat in lattice_posets() {
            assert!(cat.validate().is_empty(), "{} is invalid", cat.name());
        }
        let chain = chain_poset(3);
        let (p1, p3) = (ObjId::from("p1"), ObjId::from("p3"));
        assert!(poset_leq(&chain, &p1, &p3));
        assert!(!poset_leq(&chain, &p3, &p1));
        assert_eq!(poset_join(&chain, &p1, &p3), Some(p3.clone()));
        assert_eq!(poset_meet(&chain, &p1, &p3), Some(p1));
    }

    #[test]
    fn diamond_has_joins_and_meets() {
        let d = diamond_poset();
        let (qa, qb) = (ObjId::from("qa"), ObjId::from("qb"));
        assert_eq!(poset_join(&d, &qa, &qb), Some(ObjId::from("qt")));
        assert_eq!(poset_meet(&d, &qa, &qb), Some(ObjId::from("q0")));
    }

    #[test]
    fn random_posets_validate() {
        for seed in 0..20 {
            let cat = random_poset(seed, 5);
            assert!(cat.validate().is_empty());
        }
    }

    #[test]
    fn presheaf_enumeration_respects_functor_laws() {
        let cat = chain_poset(3);
        let all = enumerate_presheaves(&cat, Variance::Contravariant, 2, 10_000).unwrap();
        assert!(!all.is_empty());
        // Spot-check: every presheaf passes a Yoneda check at some object.
        let sample = &all[all.len() / 2];
        let witness =
            crate::presheaf::yoneda_check(&cat, &ObjId::from("p1"), sample, &Caps::default())
                .unwrap();
        assert!(witness.holds);
    }

    #[test]
    fn presheaf_enumeration_over_discrete_base_counts_value_vectors() {
        let cat = crate::fincat::build_shape(&crate::fincat::ShapeKind::Discrete(2));
        let all = enumerate_presheaves(&cat, Variance::Contravariant, 2, 10_000).unwrap();
        // Sizes 0..=2 per object, no morphism constraints: 3 × 3 choices.
        assert_eq!(all.len(), 9);
    }

    #[test]
    fn random_diagrams_are_valid_and_deterministic() {
        for seed in 0..30 {
            let a = random_contravariant_diagram(seed);
            let b = random_contravariant_diagram(seed);
            assert_eq!(a.shape().name(), b.shape().name());
            assert_eq!(a.objects(), b.objects());
        }
    }

    #[test]
    fn sweep_categories_come_with_their_presheaves() {
        let suite = presheaf_sweep_categories(3, 0, &CategoryBounds::default(), 2, 500);
        assert_eq!(suite.len(), 3);
        for (cat, presheaves) in &suite {
            assert!(cat.validate().is_empty());
            assert!(presheaves.len() <= 500);
        }
    }
}

#[cfg(test)]
mod kb_tests {
    use super::*;
    use crate::caps::Caps;
    use crate::concept::{limit_verifier, precisely_understands, TableExtractor};

    #[test]
    fn generated_kbs_have_valid_planted_expressions() {
        let caps = Caps::default();
        for seed in 0..10 {
            let g = random_concept_kb(seed, false).unwrap();
            assert!(g.kb.category().validate().is_empty(), "seed {seed}");
            for (name, expr) in &g.planted {
                assert!(
                    limit_verifier(&g.kb, expr, name, &caps).unwrap(),
                    "seed {seed}: planted expression for {name} should verify"
                );
            }
            assert!(precisely_understands(&g.kb, "goal", &TableExtractor, &caps).unwrap());
            assert!(precisely_understands(&g.kb, "family", &TableExtractor, &caps).unwrap());
        }
    }

    #[test]
    fn corrupted_kbs_fail_exactly_at_the_victim() {
        let caps = Caps::default();
        for seed in 0..10 {
            let g = random_concept_kb(seed, true).unwrap();
            let victim = g.corrupted.clone().unwrap();
            let expr = g.kb.concept(&victim).unwrap().expressions[0].clone();
            assert!(
                !limit_verifier(&g.kb, &expr, &victim, &caps).unwrap(),
                "seed {seed}: corruption of {victim} should fail the verifier"
            );
            let other = if victim == "goal" { "family" } else { "goal" };
            assert!(
                precisely_understands(&g.kb, other, &TableExtractor, &caps).unwrap(),
                "seed {seed}: untouched concept {other} should still verify"
            );
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = random_concept_kb(3, true).unwrap();
        let b = random_concept_kb(3, true).unwrap();
        assert_eq!(a.corrupted, b.corrupted);
        assert_eq!(
            a.kb.concept("goal").unwrap().expressions,
            b.kb.concept("goal").unwrap().expressions
        );
    }
}
