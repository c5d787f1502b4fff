//! Seeded generators for the acceptance suite. Everything is a pure
//! function of the ChaCha stream, so every suite run is reproducible.

use crate::error::{Error, Result};
use crate::quiver::{ArrowId, Quiver, VertexId};
use crate::rep::{
    ChainMorphism, ChainMorphismTail, ChainRep, FiniteRep, RepMorphism, TailSpec,
};
use crate::ring::{BaseRing, FinModule, MapExpr, MapSystem, ModuleMap};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::collections::{BTreeMap, BTreeSet};

pub fn rng_for(seed: u64, case: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed ^ case.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Random module with cardinality at most `max_card`.
pub fn random_module(rng: &mut ChaCha8Rng, ring: BaseRing, max_card: u64) -> FinModule {
    let top = ring.top_exponent();
    let mut invariants = Vec::new();
    let mut card = 1u64;
    loop {
        if rng.gen_bool(0.3) {
            break;
        }
        let e = rng.gen_range(1..=top);
        let factor = ring.prime().pow(e.min(top));
        let factor = if ring.is_field() { ring.size() } else { factor };
        if card.saturating_mul(factor) > max_card {
            break;
        }
        card *= factor;
        invariants.push(e);
    }
    FinModule::new(ring, invariants).expect("generated invariants are valid")
}

/// Uniform-ish random map between two modules.
pub fn random_map(rng: &mut ChaCha8Rng, dom: &FinModule, cod: &FinModule) -> ModuleMap {
    let mut sys = MapSystem::new(dom.ring());
    sys.add_unknown(dom, cod);
    sys.sample_solution(rng)
        .expect("unconstrained system always solves")
        .swap_remove(0)
}

/// Random automorphism (random maps filtered for bijectivity).
pub fn random_automorphism(rng: &mut ChaCha8Rng, m: &FinModule) -> ModuleMap {
    for _ in 0..64 {
        let f = random_map(rng, m, m);
        if f.is_injective_map() && f.is_surjective_map() {
            return f;
        }
    }
    ModuleMap::identity(m)
}

/// Two-sided inverse of a bijective map.
pub fn invert(f: &ModuleMap) -> ModuleMap {
    crate::ring::solve_section(f).expect("bijective maps invert")
}

/// Random representation with per-vertex cardinality at most `max_card`.
pub fn random_rep(
    rng: &mut ChaCha8Rng,
    quiver: &Quiver,
    ring: BaseRing,
    max_card: u64,
) -> FiniteRep {
    let modules: BTreeMap<VertexId, FinModule> = quiver
        .vertices()
        .map(|v| (v, random_module(rng, ring, max_card)))
        .collect();
    let maps = quiver
        .arrows()
        .iter()
        .map(|a| {
            (
                a.id,
                random_map(rng, &modules[&a.src], &modules[&a.tgt]),
            )
        })
        .collect();
    FiniteRep::new(quiver.clone(), ring, modules, maps).expect("generated rep is valid")
}

/// Random tree on n vertices (vertex 1 is the root).
pub fn random_tree(rng: &mut ChaCha8Rng, n: u32) -> Quiver {
    let mut arrows = Vec::new();
    for v in 2..=n {
        let parent = rng.gen_range(1..v);
        arrows.push((v - 1, parent, v));
    }
    Quiver::new(1..=n, arrows).expect("tree is valid")
}

/// Random acyclic quiver: edges only increase the vertex id.
pub fn random_dag(rng: &mut ChaCha8Rng, n: u32, max_extra: u32) -> Quiver {
    let mut arrows = Vec::new();
    let mut id = 1;
    for v in 2..=n {
        let parent = rng.gen_range(1..v);
        arrows.push((id, parent, v));
        id += 1;
    }
    for _ in 0..rng.gen_range(0..=max_extra) {
        let src = rng.gen_range(1..n);
        let tgt = rng.gen_range(src + 1..=n);
        arrows.push((id, src, tgt));
        id += 1;
    }
    Quiver::new(1..=n, arrows).expect("dag is valid")
}

/// Conjugates a representation by random vertex automorphisms; the result
/// is isomorphic to the input but no longer in any standard basis.
pub fn conjugate_rep(rng: &mut ChaCha8Rng, x: &FiniteRep) -> FiniteRep {
    let autos: BTreeMap<VertexId, ModuleMap> = x
        .quiver()
        .vertices()
        .map(|v| (v, random_automorphism(rng, x.module(v))))
        .collect();
    let maps: BTreeMap<ArrowId, ModuleMap> = x
        .quiver()
        .arrows()
        .iter()
        .map(|a| {
            let m = autos[&a.tgt]
                .compose(x.map(a.id))
                .and_then(|f| f.compose(&invert(&autos[&a.src])))
                .expect("conjugation composes");
            (a.id, m)
        })
        .collect();
    FiniteRep::new(x.quiver().clone(), x.ring(), x.modules().clone(), maps)
        .expect("conjugated rep is valid")
}

/// Conjugates a stable-tailed chain by stage automorphisms (constant beyond
/// the horizon so the tail shape is preserved).
pub fn conjugate_chain(rng: &mut ChaCha8Rng, x: &ChainRep) -> ChainRep {
    let h = x.horizon();
    let autos: Vec<ModuleMap> = (0..=h)
        .map(|n| random_automorphism(rng, &x.stage_module(n)))
        .collect();
    let auto_at = |n: usize| -> &ModuleMap { &autos[n.min(h)] };
    let maps: Vec<ModuleMap> = (0..h)
        .map(|n| {
            auto_at(n + 1)
                .compose(&x.stage_map(n))
                .and_then(|f| f.compose(&invert(auto_at(n))))
                .expect("conjugation composes")
        })
        .collect();
    let prefix: Vec<FinModule> = (0..h).map(|n| x.stage_module(n)).collect();
    ChainRep::new(x.ring(), prefix, maps, x.tail().clone()).expect("conjugated chain is valid")
}

/// Subrepresentation generated by random elements, with its inclusion.
pub fn random_subrep(
    rng: &mut ChaCha8Rng,
    x: &FiniteRep,
) -> Result<(FiniteRep, RepMorphism)> {
    let ring = x.ring();
    let scalars: Vec<u64> = ring.elements().collect();
    let mut sets: BTreeMap<VertexId, BTreeSet<Vec<u64>>> = x
        .quiver()
        .vertices()
        .map(|v| (v, [x.module(v).zero_element()].into()))
        .collect();
    for v in x.quiver().vertices() {
        let m = x.module(v);
        if m.is_zero() {
            continue;
        }
        for _ in 0..rng.gen_range(0..=2u32) {
            let e: Vec<u64> = (0..m.rank())
                .map(|i| rng.gen_range(0..m.generator_order(i)))
                .collect();
            sets.get_mut(&v).expect("vertex exists").insert(e);
        }
    }
    // close under module operations and arrow images
    let close = |m: &FinModule, set: &mut BTreeSet<Vec<u64>>| loop {
        let items: Vec<_> = set.iter().cloned().collect();
        let mut added = Vec::new();
        for a in &items {
            for &c in &scalars {
                let s = m.scale_element(c, a);
                if !set.contains(&s) {
                    added.push(s);
                }
            }
            for b in &items {
                let s = m.add_elements(a, b);
                if !set.contains(&s) {
                    added.push(s);
                }
            }
        }
        if added.is_empty() {
            break;
        }
        set.extend(added);
    };
    for v in x.quiver().vertices() {
        close(x.module(v), sets.get_mut(&v).expect("vertex exists"));
    }
    loop {
        let mut changed = false;
        for a in x.quiver().arrows() {
            let images: Vec<Vec<u64>> = sets[&a.src].iter().map(|e| x.map(a.id).apply(e)).collect();
            let tgt = sets.get_mut(&a.tgt).expect("vertex exists");
            let before = tgt.len();
            tgt.extend(images);
            if tgt.len() != before {
                close(x.module(a.tgt), tgt);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    subrep_from_element_sets(x, &sets)
}

/// Presents per-vertex element sets (assumed arrow-closed submodules) as a
/// subrepresentation with its inclusion.
pub fn subrep_from_element_sets(
    x: &FiniteRep,
    sets: &BTreeMap<VertexId, BTreeSet<Vec<u64>>>,
) -> Result<(FiniteRep, RepMorphism)> {
    let mut modules = BTreeMap::new();
    let mut incls = BTreeMap::new();
    for (&v, elems) in sets {
        let list: Vec<Vec<u64>> = elems.iter().cloned().collect();
        let (s, incl) = crate::ring::submodule_from_elements(x.module(v), &list);
        modules.insert(v, s);
        incls.insert(v, incl);
    }
    let mut maps = BTreeMap::new();
    for a in x.quiver().arrows() {
        let rhs = x.map(a.id).compose(&incls[&a.src])?;
        let mut sys = MapSystem::new(x.ring());
        let u = sys.add_unknown(&modules[&a.src], &modules[&a.tgt]);
        sys.add_equation(MapExpr::composed(Some(&incls[&a.tgt]), u, None), rhs)?;
        maps.insert(
            a.id,
            sys.solve()
                .ok_or_else(|| Error::Internal("subrep closure".into()))?
                .swap_remove(0),
        );
    }
    let s = FiniteRep::new(x.quiver().clone(), x.ring(), modules, maps)?;
    let incl = RepMorphism::new(s.clone(), x.clone(), incls)?;
    Ok((s, incl))
}

/// Random natural transformation X → Y (None when Hom is inconsistent,
/// which cannot happen: zero is always there).
pub fn random_hom(rng: &mut ChaCha8Rng, x: &FiniteRep, y: &FiniteRep) -> Result<RepMorphism> {
    let mut sys = MapSystem::new(x.ring());
    let mut index = BTreeMap::new();
    for v in x.quiver().vertices() {
        index.insert(v, sys.add_unknown(x.module(v), y.module(v)));
    }
    for a in x.quiver().arrows() {
        let expr = MapExpr::composed(Some(y.map(a.id)), index[&a.src], None).minus(
            MapExpr::composed(None, index[&a.tgt], Some(x.map(a.id))),
        );
        sys.add_equation(expr, ModuleMap::zero(x.module(a.src), y.module(a.tgt)))?;
    }
    let sol = sys
        .sample_solution(rng)
        .ok_or_else(|| Error::Internal("hom system always has zero".into()))?;
    let components = x
        .quiver()
        .vertices()
        .map(|v| (v, sol[index[&v]].clone()))
        .collect();
    RepMorphism::new(x.clone(), y.clone(), components)
}

/// Random chain representation with a stable tail.
pub fn random_chain(rng: &mut ChaCha8Rng, ring: BaseRing, max_card: u64) -> ChainRep {
    let n0 = rng.gen_range(0..=2usize);
    let tail = if rng.gen_bool(0.5) {
        TailSpec::EventuallyIso(random_module(rng, ring, max_card))
    } else {
        TailSpec::EventuallyZero
    };
    let mut prefix = Vec::new();
    for _ in 0..n0 {
        prefix.push(random_module(rng, ring, max_card));
    }
    let stage = |prefix: &[FinModule], n: usize| -> FinModule {
        if n < prefix.len() {
            prefix[n].clone()
        } else {
            match &tail {
                TailSpec::EventuallyZero => FinModule::zero(ring),
                TailSpec::EventuallyIso(e) => e.clone(),
                TailSpec::EventuallyPeriodic(_) => unreachable!(),
            }
        }
    };
    let maps: Vec<ModuleMap> = (0..n0)
        .map(|n| {
            let dom = stage(&prefix, n);
            let cod = stage(&prefix, n + 1);
            random_map(rng, &dom, &cod)
        })
        .collect();
    ChainRep::new(ring, prefix, maps, tail).expect("generated chain is valid")
}

/// Random injective chain: a direct sum of stage- and ray-seeded
/// indecomposable injectives, conjugated into a random basis.
pub fn random_injective_chain(rng: &mut ChaCha8Rng, ring: BaseRing) -> ChainRep {
    use crate::adjoint::{e_star_chain, EStarTarget};
    let top = ring.top_exponent();
    let free = |rank: usize| FinModule::new(ring, vec![top; rank]).expect("free module");
    let mut acc = ChainRep::zero(ring);
    for stage in 0..3usize {
        let mult = rng.gen_range(0..=1usize);
        if mult > 0 {
            let piece = e_star_chain(&EStarTarget::Stage(stage), &free(mult)).expect("piece");
            let (sum, _) = crate::rep::chain_direct_sum(&acc, &piece).expect("sum");
            acc = sum;
        }
    }
    let ray_mult = rng.gen_range(0..=1usize);
    if ray_mult > 0 {
        let piece = e_star_chain(&EStarTarget::Ray(0), &free(ray_mult)).expect("piece");
        let (sum, _) = crate::rep::chain_direct_sum(&acc, &piece).expect("sum");
        acc = sum;
    }
    conjugate_chain(rng, &acc)
}

/// Random chain subrepresentation with its inclusion.
pub fn random_chain_subrep(
    rng: &mut ChaCha8Rng,
    x: &ChainRep,
) -> Result<(ChainRep, ChainMorphism)> {
    let d = x.horizon() + 1;
    let fin = x.materialize(d);
    let (s_fin, incl_fin) = random_subrep(rng, &fin)?;
    // rebuild as a chain; the last two stages agree, so the tail is the
    // stable part of the materialized subrep
    let stage_mod = |n: usize| s_fin.module(VertexId(n as u32)).clone();
    let stable = stage_mod(d);
    let tail = match x.tail() {
        TailSpec::EventuallyZero => TailSpec::EventuallyZero,
        _ if stable.is_zero() => TailSpec::EventuallyZero,
        _ => TailSpec::EventuallyIso(stable.clone()),
    };
    let prefix: Vec<FinModule> = (0..d).map(stage_mod).collect();
    let maps: Vec<ModuleMap> = (0..d)
        .map(|n| s_fin.map(ArrowId(n as u32)).clone())
        .collect();
    let s = ChainRep::new(x.ring(), prefix, maps, tail)?;
    let comps: Vec<ModuleMap> = (0..=d)
        .map(|n| incl_fin.component(VertexId(n as u32)).clone())
        .collect();
    let incl = ChainMorphism::new(s.clone(), x.clone(), comps, ChainMorphismTail::Constant)?;
    Ok((s, incl))
}

/// Random natural transformation between stable-tailed chains.
pub fn random_chain_hom(
    rng: &mut ChaCha8Rng,
    x: &ChainRep,
    y: &ChainRep,
) -> Result<ChainMorphism> {
    let d = x.horizon().max(y.horizon()).max(1);
    let mut sys = MapSystem::new(x.ring());
    let unknowns: Vec<usize> = (0..=d)
        .map(|n| sys.add_unknown(&x.stage_module(n), &y.stage_module(n)))
        .collect();
    for n in 0..=d {
        let next = if n < d { unknowns[n + 1] } else { unknowns[d] };
        let expr = MapExpr::composed(Some(&y.stage_map(n)), unknowns[n], None).minus(
            MapExpr::composed(None, next, Some(&x.stage_map(n))),
        );
        sys.add_equation(
            expr,
            ModuleMap::zero(&x.stage_module(n), &y.stage_module(n + 1)),
        )?;
    }
    let sol = sys
        .sample_solution(rng)
        .ok_or_else(|| Error::Internal("chain hom system has zero".into()))?;
    let components: Vec<ModuleMap> = unknowns.iter().map(|&u| sol[u].clone()).collect();
    ChainMorphism::new(x.clone(), y.clone(), components, ChainMorphismTail::Constant)
}

/// A subrepresentation problem for criterion 4 and 10: random mono plus a
/// compatible h into the target.
pub fn random_extension_problem(
    rng: &mut ChaCha8Rng,
    x: &FiniteRep,
    e: &FiniteRep,
) -> Result<(RepMorphism, RepMorphism)> {
    let (s, g) = random_subrep(rng, x)?;
    let h = random_hom(rng, &s, e)?;
    Ok((g, h))
}
