//! Torsion theory, injective envelopes and the splitting construction on
//! the one-sided chain quiver, plus exhaustive essential-extension checks.
//!
//! The torsion part of a chain keeps the elements that die somewhere down
//! the chain; a chain is torsion free exactly when all its maps are
//! injective. An accepted chain G splits as Ē ⊕ G′ where Ē is the forward
//! image of the stage-0 torsion (an envelope of the eventually-killed
//! part) and G′ is a torsion-free identity chain.

use super::{local_test_chain, InjectivityVerdict};
use crate::error::{Error, Result};
use crate::quiver::VertexId;
use crate::rep::{
    ChainMorphism, ChainMorphismTail, ChainRep, FiniteRep, RepMorphism, TailSpec,
};
use crate::ring::{
    big_direct_sum, injective_hull, module_classify, FinModule, MapExpr, MapSystem, ModuleMap,
};
use crate::Budget;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Stable kernel ∪_m Ker(X_n → X_m).
///
/// The kernels can plateau before the horizon and then grow again (the
/// prefix maps are arbitrary), so the scan starts past the horizon, where
/// the maps repeat with the tail period; from there the kernels are the
/// preimages of the kernels of iterates of one endomorphism, and two equal
/// consecutive steps mean stabilized forever. Returns (kernel, inclusion
/// into stage n, stabilization stage).
fn stable_kernel(x: &ChainRep, n: usize) -> (FinModule, ModuleMap, usize) {
    let r = x.tail().period();
    let mut m = (n + 1).max(x.horizon());
    let mut current = x.composite(n, m).kernel();
    loop {
        let next = x.composite(n, m + r).kernel();
        if next.0.cardinality() == current.0.cardinality() {
            return (current.0, current.1, m);
        }
        current = next;
        m += r;
    }
}

/// The torsion subrepresentation t(X) with its inclusion.
pub fn torsion_subrep(x: &ChainRep) -> Result<(ChainRep, ChainMorphism)> {
    let h = x.horizon();
    let period = x.tail().period();
    // distinct stages to compute explicitly
    let through = h + period;
    let mut stages: Vec<(FinModule, ModuleMap)> = Vec::new();
    for n in 0..=through {
        let (t, incl, _) = stable_kernel(x, n);
        stages.push((t, incl));
    }
    let induced = |n: usize, from: &(FinModule, ModuleMap), to: &(FinModule, ModuleMap)| -> Result<ModuleMap> {
        let rhs = x.stage_map(n).compose(&from.1)?;
        let mut sys = MapSystem::new(x.ring());
        let u = sys.add_unknown(&from.0, &to.0);
        sys.add_equation(MapExpr::composed(Some(&to.1), u, None), rhs)?;
        Ok(sys
            .solve()
            .ok_or_else(|| Error::Internal("torsion is closed under the chain maps".into()))?
            .swap_remove(0))
    };
    match x.tail() {
        TailSpec::EventuallyPeriodic(_) => {
            // prefix 0..h, then a periodic tail of the induced maps
            let prefix: Vec<FinModule> = stages[..h].iter().map(|(t, _)| t.clone()).collect();
            let mut maps = Vec::new();
            for n in 0..h {
                maps.push(induced(n, &stages[n], &stages[n + 1])?);
            }
            let mut period_maps = Vec::new();
            for j in 0..period {
                let to = if j + 1 < period {
                    &stages[h + j + 1]
                } else {
                    &stages[h]
                };
                period_maps.push(induced(h + j, &stages[h + j], to)?);
            }
            let sub = ChainRep::new(
                x.ring(),
                prefix,
                maps,
                TailSpec::EventuallyPeriodic(period_maps),
            )?;
            let incl = ChainMorphism::new(
                sub.clone(),
                x.clone(),
                stages[..h].iter().map(|(_, i)| i.clone()).collect(),
                ChainMorphismTail::Periodic(
                    (0..period).map(|j| stages[h + j].1.clone()).collect(),
                ),
            )?;
            Ok((sub, incl))
        }
        _ => {
            // stable: beyond the horizon the torsion is constant (zero when
            // the tail is iso, zero again when the tail is zero)
            let stable = stages[h].0.clone();
            let tail = if stable.is_zero() {
                TailSpec::EventuallyZero
            } else {
                TailSpec::EventuallyIso(stable)
            };
            let prefix: Vec<FinModule> = stages[..h].iter().map(|(t, _)| t.clone()).collect();
            let mut maps = Vec::new();
            for n in 0..h {
                maps.push(induced(n, &stages[n], &stages[n + 1])?);
            }
            let sub = ChainRep::new(x.ring(), prefix, maps, tail)?;
            let incl = ChainMorphism::new(
                sub.clone(),
                x.clone(),
                stages[..=h].iter().map(|(_, i)| i.clone()).collect(),
                ChainMorphismTail::Constant,
            )?;
            Ok((sub, incl))
        }
    }
}

/// Stagewise cokernel of a stable-tailed chain morphism.
pub fn chain_cokernel(eta: &ChainMorphism) -> Result<(ChainRep, ChainMorphism)> {
    if !eta.source().tail().is_stable() || !eta.target().tail().is_stable() {
        return Err(Error::UnsupportedTail("cokernel of a periodic chain".into()));
    }
    let d = eta
        .source()
        .horizon()
        .max(eta.target().horizon())
        .max(eta.window_len());
    let mut stage_data = Vec::new();
    for n in 0..=d {
        stage_data.push(eta.component(n).cokernel());
    }
    let mut maps = Vec::new();
    for n in 0..d {
        let rhs = stage_data[n + 1].1.compose(&eta.target().stage_map(n))?;
        let mut sys = MapSystem::new(eta.target().ring());
        let u = sys.add_unknown(&stage_data[n].0, &stage_data[n + 1].0);
        sys.add_equation(
            MapExpr::composed(None, u, Some(&stage_data[n].1)),
            rhs,
        )?;
        maps.push(
            sys.solve()
                .ok_or_else(|| Error::Internal("cokernel chain map must exist".into()))?
                .swap_remove(0),
        );
    }
    let stable = stage_data[d].0.clone();
    let tail = if stable.is_zero() {
        TailSpec::EventuallyZero
    } else {
        TailSpec::EventuallyIso(stable)
    };
    let prefix: Vec<FinModule> = stage_data[..d].iter().map(|(c, _)| c.clone()).collect();
    let coker = ChainRep::new(eta.target().ring(), prefix, maps, tail)?;
    let proj = ChainMorphism::new(
        eta.target().clone(),
        coker.clone(),
        stage_data[..=d].iter().map(|(_, p)| p.clone()).collect(),
        ChainMorphismTail::Constant,
    )?;
    Ok((coker, proj))
}

/// Per-stage view of the chain criterion: module injective, map surjective,
/// kernel injective.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AinfStageReport {
    pub stage: usize,
    pub module_injective: bool,
    pub map_surjective: bool,
    pub kernel_injective: bool,
}

/// The chain criterion with its stage-by-stage data. The verdict is the
/// local test; the reports record the equivalent surjective-with-injective-
/// kernel formulation, with the first failing stage easy to read off.
pub fn ainf_injective_test(g: &ChainRep) -> Result<(InjectivityVerdict, Vec<AinfStageReport>)> {
    let verdict = local_test_chain(g)?;
    let through = g.horizon() + g.tail().period();
    let mut reports = Vec::new();
    for n in 0..=through {
        let map = g.stage_map(n);
        let (ker, _) = map.kernel();
        reports.push(AinfStageReport {
            stage: n,
            module_injective: module_classify(&g.stage_module(n)).is_injective,
            map_surjective: map.is_surjective_map(),
            kernel_injective: module_classify(&ker).is_injective,
        });
    }
    Ok((verdict, reports))
}

/// The envelope construction: from injective modules E₀,…,E_{m−1} build
/// Ē = E → E/E₀ → E/(E₀⊕E₁) → ⋯ (E the hull of the direct sum) together
/// with the embedded chain 𝓔 = ⊕_{i≥0}E_i → ⊕_{i≥1}E_i → ⋯.
pub struct AinfEnvelope {
    pub ebar: ChainRep,
    pub script_e: ChainRep,
    pub embedding: ChainMorphism,
}

pub fn ainf_envelope(family: &[FinModule]) -> Result<AinfEnvelope> {
    if family.is_empty() {
        return Err(Error::Validation("envelope needs at least one module".into()));
    }
    let ring = family[0].ring();
    for e in family {
        if !module_classify(e).is_injective {
            return Err(Error::Validation(
                "envelope construction expects injective inputs".into(),
            ));
        }
    }
    let m = family.len();
    let (total, total_incs, _) = big_direct_sum(ring, family);
    let (hull, hull_incl) = injective_hull(&total);

    // quotients B_n = hull / (E_0 ⊕ ... ⊕ E_{n-1})
    let mut quotients: Vec<(FinModule, ModuleMap)> = Vec::new(); // (B_n, proj_n)
    for n in 0..=m {
        if n == 0 {
            quotients.push((hull.clone(), ModuleMap::identity(&hull)));
            continue;
        }
        let (head, _, head_projs) = big_direct_sum(ring, &family[..n]);
        let mut into_total = ModuleMap::zero(&head, &total);
        for (i, proj) in head_projs.iter().enumerate() {
            into_total = into_total.add(&total_incs[i].compose(proj)?)?;
        }
        let sub_map = hull_incl.compose(&into_total)?;
        let (_, proj) = sub_map.cokernel();
        quotients.push((proj.codomain().clone(), proj));
    }
    let mut ebar_maps = Vec::new();
    for n in 0..m {
        // descend the identity of the hull to B_n -> B_{n+1}
        let mut sys = MapSystem::new(ring);
        let u = sys.add_unknown(&quotients[n].0, &quotients[n + 1].0);
        sys.add_equation(
            MapExpr::composed(None, u, Some(&quotients[n].1)),
            quotients[n + 1].1.clone(),
        )?;
        ebar_maps.push(
            sys.solve()
                .ok_or_else(|| Error::Internal("quotient maps descend".into()))?
                .swap_remove(0),
        );
    }
    let stable = quotients[m].0.clone();
    let tail = if stable.is_zero() {
        TailSpec::EventuallyZero
    } else {
        TailSpec::EventuallyIso(stable)
    };
    let ebar = ChainRep::new(
        ring,
        quotients[..m].iter().map(|(b, _)| b.clone()).collect(),
        ebar_maps,
        tail,
    )?;

    // the embedded chain of partial sums
    let mut script_stages: Vec<(FinModule, Vec<ModuleMap>, Vec<ModuleMap>)> = Vec::new();
    for n in 0..=m {
        let (s, incs, projs) = big_direct_sum(ring, &family[n..]);
        script_stages.push((s, incs, projs));
    }
    let mut script_maps = Vec::new();
    for n in 0..m {
        let (ref s_n, _, ref projs_n) = script_stages[n];
        let (ref s_n1, ref incs_n1, _) = script_stages[n + 1];
        let mut map = ModuleMap::zero(s_n, s_n1);
        for i in (n + 1)..m {
            map = map.add(&incs_n1[i - n - 1].compose(&projs_n[i - n])?)?;
        }
        script_maps.push(map);
    }
    let script_e = ChainRep::new(
        ring,
        script_stages[..m].iter().map(|(s, _, _)| s.clone()).collect(),
        script_maps,
        TailSpec::EventuallyZero,
    )?;

    // embedding components: S_n -> hull -> B_n
    let mut embed_comps = Vec::new();
    for n in 0..=m {
        let (ref s_n, _, ref projs_n) = script_stages[n];
        let mut into_total = ModuleMap::zero(s_n, &total);
        for i in n..m {
            into_total = into_total.add(&total_incs[i].compose(&projs_n[i - n])?)?;
        }
        embed_comps.push(quotients[n].1.compose(&hull_incl)?.compose(&into_total)?);
    }
    let embedding = ChainMorphism::new(
        script_e.clone(),
        ebar.clone(),
        embed_comps,
        ChainMorphismTail::Zero,
    )?;
    if !embedding.is_mono() {
        return Err(Error::Internal("envelope embedding must be mono".into()));
    }
    Ok(AinfEnvelope {
        ebar,
        script_e,
        embedding,
    })
}

/// The splitting G ≅ Ē ⊕ G′ of an accepted chain: Ē is the forward image
/// of the stage-0 torsion, G′ = Ker(retraction) is a torsion-free identity
/// chain.
pub struct AinfSplit {
    pub ebar: ChainRep,
    pub gprime: ChainRep,
    pub inclusion: ChainMorphism,
    pub retraction: ChainMorphism,
    pub complement_incl: ChainMorphism,
    pub complement_proj: ChainMorphism,
}

pub fn ainf_split(g: &ChainRep) -> Result<AinfSplit> {
    if !g.tail().is_stable() {
        return Err(Error::UnsupportedTail("splitting needs zero/iso tails".into()));
    }
    let verdict = local_test_chain(g)?;
    if !verdict.is_injective() {
        return Err(Error::NotInjective(format!("{:?}", verdict.overall)));
    }
    let ring = g.ring();
    let (_, kappa, stab) = stable_kernel(g, 0);
    let d = g.horizon().max(stab);
    // forward images I_n of the stage-0 torsion
    let mut images: Vec<(FinModule, ModuleMap)> = Vec::new();
    for n in 0..=d {
        let (img, incl, _) = g.composite(0, n).compose(&kappa)?.image();
        images.push((img, incl));
    }
    if !images[d].0.is_zero() {
        return Err(Error::Internal("torsion image must vanish at the stable stage".into()));
    }
    let mut ebar_maps = Vec::new();
    for n in 0..d {
        let rhs = g.stage_map(n).compose(&images[n].1)?;
        let mut sys = MapSystem::new(ring);
        let u = sys.add_unknown(&images[n].0, &images[n + 1].0);
        sys.add_equation(MapExpr::composed(Some(&images[n + 1].1), u, None), rhs)?;
        ebar_maps.push(
            sys.solve()
                .ok_or_else(|| Error::Internal("image chain maps exist".into()))?
                .swap_remove(0),
        );
    }
    let ebar = ChainRep::new(
        ring,
        images[..d].iter().map(|(i, _)| i.clone()).collect(),
        ebar_maps,
        TailSpec::EventuallyZero,
    )?;
    let inclusion = ChainMorphism::new(
        ebar.clone(),
        g.clone(),
        images[..=d].iter().map(|(_, i)| i.clone()).collect(),
        ChainMorphismTail::Zero,
    )?;

    // retraction r with r∘ι = id, solved on the window
    let mut sys = MapSystem::new(ring);
    let unknowns: Vec<usize> = (0..=d)
        .map(|n| sys.add_unknown(&g.stage_module(n), &ebar.stage_module(n)))
        .collect();
    for n in 0..d {
        let expr = MapExpr::composed(Some(&ebar.stage_map(n)), unknowns[n], None).minus(
            MapExpr::composed(None, unknowns[n + 1], Some(&g.stage_map(n))),
        );
        sys.add_equation(
            expr,
            ModuleMap::zero(&g.stage_module(n), &ebar.stage_module(n + 1)),
        )?;
    }
    for n in 0..=d {
        sys.add_equation(
            MapExpr::composed(None, unknowns[n], Some(&inclusion.component(n))),
            ModuleMap::identity(&ebar.stage_module(n)),
        )?;
    }
    let sol = sys
        .solve()
        .ok_or_else(|| Error::Internal("the embedded envelope must split off".into()))?;
    let retraction = ChainMorphism::new(
        g.clone(),
        ebar.clone(),
        unknowns.iter().map(|&u| sol[u].clone()).collect(),
        ChainMorphismTail::Zero,
    )?;

    let (gprime, complement_incl) = retraction.kernel()?;
    // complement projection: κ'∘π = id − ι∘r
    let mut proj_comps = Vec::new();
    for n in 0..=d {
        let residue = ModuleMap::identity(&g.stage_module(n))
            .sub(&inclusion.component(n).compose(&retraction.component(n))?)?;
        let mut sys = MapSystem::new(ring);
        let u = sys.add_unknown(&g.stage_module(n), &gprime.stage_module(n));
        sys.add_equation(
            MapExpr::composed(Some(&complement_incl.component(n)), u, None),
            residue,
        )?;
        proj_comps.push(
            sys.solve()
                .ok_or_else(|| Error::Internal("complement projection exists".into()))?
                .swap_remove(0),
        );
    }
    let complement_proj = ChainMorphism::new(
        g.clone(),
        gprime.clone(),
        proj_comps,
        ChainMorphismTail::Constant,
    )?;

    // certification: G' is a torsion-free identity chain and the pair
    // (r, π') is a stagewise isomorphism onto Ē ⊕ G'
    for n in 0..=(d + 1) {
        if !gprime.stage_map(n).is_injective_map() || !gprime.stage_map(n).is_surjective_map() {
            return Err(Error::Internal("complement must be an identity chain".into()));
        }
        let (sum, incs, _) = big_direct_sum(
            ring,
            &[ebar.stage_module(n), gprime.stage_module(n)],
        );
        let stacked = incs[0]
            .compose(&retraction.component(n))?
            .add(&incs[1].compose(&complement_proj.component(n))?)?;
        if !stacked.is_injective_map() || stacked.codomain() != &sum || !stacked.is_surjective_map()
        {
            return Err(Error::Internal("split must be a stagewise isomorphism".into()));
        }
    }
    Ok(AinfSplit {
        ebar,
        gprime,
        inclusion,
        retraction,
        complement_incl,
        complement_proj,
    })
}

/// Exhaustive essential-extension check over cyclic subobjects: the image
/// of `incl` is essential iff every nonzero cyclic subrepresentation meets
/// it nontrivially.
pub fn essential_check_finite(incl: &RepMorphism, budget: Budget) -> Result<bool> {
    let x = incl.target();
    let s = incl.source();
    let total: u128 = x.modules().values().map(|m| m.cardinality()).sum();
    budget.check(total)?;
    let s_total: u128 = s.modules().values().map(|m| m.cardinality()).sum();
    budget.check(s_total)?;
    // image element sets of S in X
    let mut s_image: BTreeMap<VertexId, BTreeSet<Vec<u64>>> = BTreeMap::new();
    for v in x.quiver().vertices() {
        let mut set = BTreeSet::new();
        for e in s.module(v).elements() {
            set.insert(incl.component(v).apply(&e));
        }
        s_image.insert(v, set);
    }
    for v in x.quiver().vertices() {
        for e in x.module(v).elements() {
            if e.iter().all(|&c| c == 0) {
                continue;
            }
            let cyclic = cyclic_subrep(x, v, &e);
            let meets = x.quiver().vertices().any(|u| {
                cyclic[&u]
                    .iter()
                    .any(|y| y.iter().any(|&c| c != 0) && s_image[&u].contains(y))
            });
            if !meets {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Element sets of the subrepresentation generated by one element.
fn cyclic_subrep(
    x: &FiniteRep,
    v: VertexId,
    e: &[u64],
) -> BTreeMap<VertexId, BTreeSet<Vec<u64>>> {
    let ring = x.ring();
    let scalars: Vec<u64> = ring.elements().collect();
    let close = |m: &FinModule, set: &mut BTreeSet<Vec<u64>>| {
        set.insert(m.zero_element());
        loop {
            let items: Vec<_> = set.iter().cloned().collect();
            let mut added = Vec::new();
            for a in &items {
                for &c in &scalars {
                    let sa = m.scale_element(c, a);
                    if !set.contains(&sa) {
                        added.push(sa);
                    }
                }
                for b in &items {
                    let sum = m.add_elements(a, b);
                    if !set.contains(&sum) {
                        added.push(sum);
                    }
                }
            }
            if added.is_empty() {
                break;
            }
            set.extend(added);
        }
    };
    let mut sets: BTreeMap<VertexId, BTreeSet<Vec<u64>>> = x
        .quiver()
        .vertices()
        .map(|u| (u, [x.module(u).zero_element()].into()))
        .collect();
    sets.get_mut(&v).expect("vertex exists").insert(e.to_vec());
    close(x.module(v), sets.get_mut(&v).expect("vertex exists"));
    loop {
        let mut changed = false;
        for a in x.quiver().arrows() {
            let images: Vec<Vec<u64>> = sets[&a.src]
                .iter()
                .map(|y| x.map(a.id).apply(y))
                .collect();
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
    sets
}

/// Essential check on chains by materializing both sides one stage past
/// every horizon (stages beyond behave identically to the last one).
pub fn essential_check_chain(incl: &ChainMorphism, budget: Budget) -> Result<bool> {
    let depth = incl
        .source()
        .horizon()
        .max(incl.target().horizon())
        .max(incl.window_len())
        + 1;
    let s = incl.source().materialize(depth);
    let x = incl.target().materialize(depth);
    let comps: BTreeMap<VertexId, ModuleMap> = (0..=depth)
        .map(|n| (VertexId(n as u32), incl.component(n)))
        .collect();
    let incl_fin = RepMorphism::new(s, x, comps)?;
    essential_check_finite(&incl_fin, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;
    use crate::ring::BaseRing;

    fn z4() -> BaseRing {
        BaseRing::ZmodPk { p: 2, k: 2 }
    }

    fn z4_mod(inv: &[u32]) -> FinModule {
        FinModule::new(z4(), inv.to_vec()).unwrap()
    }

    #[test]
    fn torsion_reference_cases() {
        // all maps injective: torsion vanishes
        let e = z4_mod(&[2]);
        let (t, _) = torsion_subrep(&ChainRep::constant(e.clone())).unwrap();
        assert!(t.is_zero());

        // eventually zero: everything is torsion
        let x = ChainRep::new(
            z4(),
            vec![e.clone()],
            vec![ModuleMap::zero(&e, &FinModule::zero(z4()))],
            TailSpec::EventuallyZero,
        )
        .unwrap();
        let (t, _) = torsion_subrep(&x).unwrap();
        assert_eq!(t.stage_module(0).cardinality(), 4);

        // periodic ·2 on Z/4: composites vanish after two steps
        let twice = ModuleMap::new(e.clone(), e.clone(), vec![2]).unwrap();
        let x = ChainRep::new(
            z4(),
            Vec::new(),
            Vec::new(),
            TailSpec::EventuallyPeriodic(vec![twice]),
        )
        .unwrap();
        let (t, _) = torsion_subrep(&x).unwrap();
        assert_eq!(t.stage_module(0).cardinality(), 4);
        assert_eq!(t.stage_module(5).cardinality(), 4);
    }

    #[test]
    fn torsion_is_idempotent_and_quotient_torsion_free() {
        let e = z4_mod(&[2]);
        let x = ChainRep::new(
            z4(),
            vec![z4_mod(&[2, 2])],
            vec![ModuleMap::new(z4_mod(&[2, 2]), e.clone(), vec![1, 0]).unwrap()],
            TailSpec::EventuallyIso(e.clone()),
        )
        .unwrap();
        let (t, incl) = torsion_subrep(&x).unwrap();
        let (tt, _) = torsion_subrep(&t).unwrap();
        for n in 0..4 {
            assert_eq!(tt.stage_module(n), t.stage_module(n));
        }
        let (q, _) = chain_cokernel(&incl).unwrap();
        for n in 0..4 {
            assert!(q.stage_map(n).is_injective_map());
        }
    }

    #[test]
    fn envelope_reference_case() {
        // E0 = E1 = Z/4, rest zero: Ē = Z/4² -> Z/4 -> 0 -> ...
        let e = z4_mod(&[2]);
        let env = ainf_envelope(&[e.clone(), e.clone()]).unwrap();
        assert_eq!(env.ebar.stage_module(0).invariants(), &[2, 2]);
        assert_eq!(env.ebar.stage_module(1).invariants(), &[2]);
        assert!(env.ebar.stage_module(2).is_zero());
        let (verdict, _) = ainf_injective_test(&env.ebar).unwrap();
        assert!(verdict.is_injective());
        assert!(essential_check_chain(&env.embedding, Budget::default()).unwrap());
    }

    #[test]
    fn split_reference_cases() {
        // constant chain: trivial torsion, G' = G
        let e = z4_mod(&[2]);
        let g = ChainRep::constant(e.clone());
        let split = ainf_split(&g).unwrap();
        assert!(split.ebar.is_zero());
        assert_eq!(split.gprime.stage_module(0), e);

        // Z/4² -> Z/4 -> 0 ... projection chain: all torsion
        let env = ainf_envelope(&[e.clone(), e.clone()]).unwrap();
        let split = ainf_split(&env.ebar).unwrap();
        assert!(split.gprime.is_zero());
        assert_eq!(split.ebar.stage_module(0).invariants(), &[2, 2]);

        // a rejected chain errors
        let zero = FinModule::zero(z4());
        let bad = ChainRep::new(
            z4(),
            vec![zero.clone()],
            vec![ModuleMap::zero(&zero, &e)],
            TailSpec::EventuallyIso(e.clone()),
        )
        .unwrap();
        assert!(matches!(ainf_split(&bad), Err(Error::NotInjective(_))));
    }

    #[test]
    fn essential_reference_cases() {
        // 2Z/4 ⊂ Z/4 on the one-point quiver is essential
        let q = Quiver::new([1], vec![]).unwrap();
        let m = z4_mod(&[2]);
        let s = z4_mod(&[1]);
        let x = FiniteRep::new(q.clone(), z4(), [(VertexId(1), m.clone())].into(), [].into())
            .unwrap();
        let srep =
            FiniteRep::new(q.clone(), z4(), [(VertexId(1), s.clone())].into(), [].into()).unwrap();
        let incl = RepMorphism::new(
            srep.clone(),
            x.clone(),
            [(VertexId(1), ModuleMap::new(s.clone(), m.clone(), vec![2]).unwrap())].into(),
        )
        .unwrap();
        assert!(essential_check_finite(&incl, Budget::default()).unwrap());

        // X ⊆ X is essential; 0 ⊂ X (X ≠ 0) is not
        let idm = RepMorphism::identity(&x);
        assert!(essential_check_finite(&idm, Budget::default()).unwrap());
        let zero = FiniteRep::zero(q, z4());
        let z_incl = RepMorphism::new(
            zero.clone(),
            x.clone(),
            [(VertexId(1), ModuleMap::zero(&FinModule::zero(z4()), &m))].into(),
        )
        .unwrap();
        assert!(!essential_check_finite(&z_incl, Budget::default()).unwrap());
    }
}
