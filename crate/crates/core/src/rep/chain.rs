//! Representations of the descriptor quivers: the one-sided chain with an
//! eventually-stable tail, the two-sided chain, and barren forests (core
//! representation plus one chain per ray).

use super::FiniteRep;
use crate::error::{Error, Result};
use crate::quiver::{Quiver, VertexId};
use crate::ring::{BaseRing, FinModule, ModuleMap};
use std::collections::BTreeMap;

/// Behaviour of a chain representation beyond its explicit prefix.
///
/// `EventuallyIso(E)` means every later stage is E with identity maps;
/// `EventuallyZero` means every later stage vanishes; a periodic tail
/// cycles through the given maps (stage j beyond the prefix carries the
/// domain of maps[j mod r]).
#[derive(Debug, Clone, PartialEq)]
pub enum TailSpec {
    EventuallyZero,
    EventuallyIso(FinModule),
    EventuallyPeriodic(Vec<ModuleMap>),
}

impl TailSpec {
    pub fn period(&self) -> usize {
        match self {
            TailSpec::EventuallyPeriodic(ps) => ps.len(),
            _ => 1,
        }
    }

    pub fn is_stable(&self) -> bool {
        !matches!(self, TailSpec::EventuallyPeriodic(_))
    }
}

/// A representation of the one-sided infinite chain 0 → 1 → 2 → ⋯ with an
/// eventually-stable (or periodic) tail.
///
/// `prefix` holds the modules of stages 0..n₀ and `maps[i]` is the map
/// stage i → stage i+1; the last explicit map lands in the first tail
/// stage, whose module is dictated by the tail rule.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainRep {
    ring: BaseRing,
    prefix: Vec<FinModule>,
    maps: Vec<ModuleMap>,
    tail: TailSpec,
}

impl ChainRep {
    pub fn new(
        ring: BaseRing,
        prefix: Vec<FinModule>,
        maps: Vec<ModuleMap>,
        tail: TailSpec,
    ) -> Result<Self> {
        if maps.len() != prefix.len() {
            return Err(Error::ShapeMismatch(format!(
                "a chain with {} explicit stages needs {} maps (the last one enters the tail)",
                prefix.len(),
                prefix.len()
            )));
        }
        if let TailSpec::EventuallyPeriodic(ps) = &tail {
            if ps.is_empty() {
                return Err(Error::UnsupportedTail("empty period".into()));
            }
            for (i, p) in ps.iter().enumerate() {
                let next = &ps[(i + 1) % ps.len()];
                if p.codomain() != next.domain() {
                    return Err(Error::ShapeMismatch(
                        "periodic tail maps do not cycle".into(),
                    ));
                }
            }
        }
        let rep = ChainRep {
            ring,
            prefix,
            maps,
            tail,
        };
        for n in 0..rep.prefix.len() {
            let f = &rep.maps[n];
            if f.domain() != &rep.stage_module(n) || f.codomain() != &rep.stage_module(n + 1) {
                return Err(Error::ShapeMismatch(format!(
                    "chain map at stage {n} has wrong ends"
                )));
            }
        }
        Ok(rep)
    }

    /// The constant chain E → E → ⋯ with identity maps.
    pub fn constant(e: FinModule) -> Self {
        ChainRep {
            ring: e.ring(),
            prefix: Vec::new(),
            maps: Vec::new(),
            tail: TailSpec::EventuallyIso(e),
        }
    }

    pub fn zero(ring: BaseRing) -> Self {
        ChainRep {
            ring,
            prefix: Vec::new(),
            maps: Vec::new(),
            tail: TailSpec::EventuallyZero,
        }
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn tail(&self) -> &TailSpec {
        &self.tail
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix.len()
    }

    /// First stage from which the (module, map) pattern repeats forever.
    pub fn horizon(&self) -> usize {
        self.prefix.len()
    }

    pub fn stage_module(&self, n: usize) -> FinModule {
        if n < self.prefix.len() {
            return self.prefix[n].clone();
        }
        match &self.tail {
            TailSpec::EventuallyZero => FinModule::zero(self.ring),
            TailSpec::EventuallyIso(e) => e.clone(),
            TailSpec::EventuallyPeriodic(ps) => {
                ps[(n - self.prefix.len()) % ps.len()].domain().clone()
            }
        }
    }

    /// The map stage n → stage n+1.
    pub fn stage_map(&self, n: usize) -> ModuleMap {
        if n < self.maps.len() {
            return self.maps[n].clone();
        }
        match &self.tail {
            TailSpec::EventuallyZero => {
                ModuleMap::zero(&self.stage_module(n), &self.stage_module(n + 1))
            }
            TailSpec::EventuallyIso(e) => ModuleMap::identity(e),
            TailSpec::EventuallyPeriodic(ps) => ps[(n - self.prefix.len()) % ps.len()].clone(),
        }
    }

    /// The composite stage n → stage m (identity when m = n).
    pub fn composite(&self, n: usize, m: usize) -> ModuleMap {
        assert!(m >= n);
        let mut acc = ModuleMap::identity(&self.stage_module(n));
        for i in n..m {
            acc = self.stage_map(i).compose(&acc).expect("chain composes");
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        self.prefix.iter().all(|m| m.is_zero())
            && match &self.tail {
                TailSpec::EventuallyZero => true,
                TailSpec::EventuallyIso(e) => e.is_zero(),
                TailSpec::EventuallyPeriodic(ps) => ps.iter().all(|p| p.domain().is_zero()),
            }
    }

    /// The chain with the first `k` stages dropped (stage i of the result
    /// is stage i+k of the original).
    pub fn shifted(&self, k: usize) -> ChainRep {
        let prefix: Vec<FinModule> = (k..self.prefix.len()).map(|n| self.prefix[n].clone()).collect();
        let maps: Vec<ModuleMap> = (k..self.maps.len()).map(|n| self.maps[n].clone()).collect();
        if prefix.is_empty() && matches!(self.tail, TailSpec::EventuallyPeriodic(_)) {
            // rotate the period so stage 0 lines up
            if let TailSpec::EventuallyPeriodic(ps) = &self.tail {
                let r = ps.len();
                let off = (k - self.prefix.len()) % r;
                let rotated: Vec<ModuleMap> =
                    (0..r).map(|i| ps[(i + off) % r].clone()).collect();
                return ChainRep {
                    ring: self.ring,
                    prefix,
                    maps,
                    tail: TailSpec::EventuallyPeriodic(rotated),
                };
            }
        }
        ChainRep {
            ring: self.ring,
            prefix,
            maps,
            tail: self.tail.clone(),
        }
    }

    /// Truncation to the finite line quiver 0 → 1 → ⋯ → depth.
    pub fn materialize(&self, depth: usize) -> FiniteRep {
        let q = line_quiver(depth + 1);
        let modules: BTreeMap<VertexId, FinModule> = (0..=depth)
            .map(|n| (VertexId(n as u32), self.stage_module(n)))
            .collect();
        let maps = (0..depth)
            .map(|n| (crate::quiver::ArrowId(n as u32), self.stage_map(n)))
            .collect();
        FiniteRep::new(q, self.ring, modules, maps).expect("materialization is valid")
    }
}

/// The line quiver with vertices 0..n and arrows i: i → i+1.
pub fn line_quiver(n_vertices: usize) -> Quiver {
    Quiver::new(
        (0..n_vertices as u32).collect::<Vec<_>>(),
        (0..n_vertices.saturating_sub(1) as u32)
            .map(|i| (i, i, i + 1))
            .collect(),
    )
    .expect("line quiver is valid")
}

/// Behaviour of a chain morphism beyond its explicit window.
#[derive(Debug, Clone, PartialEq)]
pub enum ChainMorphismTail {
    /// All later components vanish (target or source vanished).
    Zero,
    /// All later components repeat the last explicit one (both sides stable).
    Constant,
    /// Components cycle with the given period.
    Periodic(Vec<ModuleMap>),
}

/// A natural transformation between chain representations: explicit
/// components on a window, a rule beyond it.
#[derive(Debug, Clone, PartialEq)]
pub struct ChainMorphism {
    source: ChainRep,
    target: ChainRep,
    components: Vec<ModuleMap>,
    tail: ChainMorphismTail,
}

impl ChainMorphism {
    pub fn new(
        source: ChainRep,
        target: ChainRep,
        components: Vec<ModuleMap>,
        tail: ChainMorphismTail,
    ) -> Result<Self> {
        let m = ChainMorphism {
            source,
            target,
            components,
            tail,
        };
        m.validate()?;
        Ok(m)
    }

    fn validate(&self) -> Result<()> {
        if matches!(self.tail, ChainMorphismTail::Constant) && self.components.is_empty() {
            return Err(Error::ShapeMismatch("constant tail needs a component".into()));
        }
        let horizon = self
            .source
            .horizon()
            .max(self.target.horizon())
            .max(self.components.len());
        let period = self.source.tail.period() * self.target.tail.period() * self.tail_period();
        for n in 0..=(horizon + 2 * period) {
            let c = self.component(n);
            if c.domain() != &self.source.stage_module(n)
                || c.codomain() != &self.target.stage_module(n)
            {
                return Err(Error::ShapeMismatch(format!(
                    "chain component at stage {n} has wrong ends"
                )));
            }
            // naturality square n -> n+1
            let lhs = self
                .target
                .stage_map(n)
                .compose(&self.component(n))
                .expect("shapes fit");
            let rhs = self
                .component(n + 1)
                .compose(&self.source.stage_map(n))
                .expect("shapes fit");
            if lhs != rhs {
                return Err(Error::ShapeMismatch(format!(
                    "chain naturality fails at stage {n}"
                )));
            }
        }
        Ok(())
    }

    fn tail_period(&self) -> usize {
        match &self.tail {
            ChainMorphismTail::Periodic(ps) => ps.len(),
            _ => 1,
        }
    }

    pub fn source(&self) -> &ChainRep {
        &self.source
    }

    pub fn target(&self) -> &ChainRep {
        &self.target
    }

    pub fn window_len(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, n: usize) -> ModuleMap {
        if n < self.components.len() {
            return self.components[n].clone();
        }
        match &self.tail {
            ChainMorphismTail::Zero => {
                ModuleMap::zero(&self.source.stage_module(n), &self.target.stage_module(n))
            }
            ChainMorphismTail::Constant => self.components.last().expect("nonempty").clone(),
            ChainMorphismTail::Periodic(ps) => ps[(n - self.components.len()) % ps.len()].clone(),
        }
    }

    /// The morphism restricted to stages ≥ k, between the shifted chains.
    pub fn shifted(&self, k: usize) -> Result<ChainMorphism> {
        let window = if self.components.len() > k {
            self.components.len() - k
        } else {
            1
        };
        let components: Vec<ModuleMap> = (0..window).map(|n| self.component(n + k)).collect();
        let tail = match &self.tail {
            ChainMorphismTail::Periodic(_) => {
                return Err(Error::UnsupportedTail("shift of a periodic morphism".into()))
            }
            t => t.clone(),
        };
        ChainMorphism::new(
            self.source.shifted(k),
            self.target.shifted(k),
            components,
            tail,
        )
    }

    pub fn identity(rep: &ChainRep) -> Self {
        let window = rep.horizon() + 1;
        ChainMorphism {
            source: rep.clone(),
            target: rep.clone(),
            components: (0..window)
                .map(|n| ModuleMap::identity(&rep.stage_module(n)))
                .collect(),
            tail: match rep.tail {
                TailSpec::EventuallyPeriodic(ref ps) => ChainMorphismTail::Periodic(
                    ps.iter().map(|p| ModuleMap::identity(p.domain())).collect(),
                ),
                _ => ChainMorphismTail::Constant,
            },
        }
    }

    pub fn compose(&self, inner: &ChainMorphism) -> Result<ChainMorphism> {
        if inner.target != self.source {
            return Err(Error::ShapeMismatch("chain composition ends differ".into()));
        }
        let window = self.components.len().max(inner.components.len()).max(1);
        let components = (0..window)
            .map(|n| self.component(n).compose(&inner.component(n)))
            .collect::<Result<Vec<_>>>()?;
        let tail = match (&self.tail, &inner.tail) {
            (ChainMorphismTail::Zero, _) | (_, ChainMorphismTail::Zero) => ChainMorphismTail::Zero,
            (ChainMorphismTail::Constant, ChainMorphismTail::Constant) => {
                ChainMorphismTail::Constant
            }
            _ => {
                return Err(Error::UnsupportedTail(
                    "composition of periodic chain morphisms".into(),
                ))
            }
        };
        ChainMorphism::new(inner.source.clone(), self.target.clone(), components, tail)
    }

    /// Checks injectivity of every component (window plus one repeat).
    pub fn is_mono(&self) -> bool {
        let horizon = self.source.horizon().max(self.target.horizon());
        let through = horizon.max(self.components.len()) + self.source.tail.period();
        (0..=through).all(|n| self.component(n).is_injective_map())
    }

    pub fn is_epi(&self) -> bool {
        let horizon = self.source.horizon().max(self.target.horizon());
        let through = horizon.max(self.components.len()) + self.source.tail.period();
        (0..=through).all(|n| self.component(n).is_surjective_map())
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// Stagewise kernel with induced maps; source and target tails must be
    /// stable (zero or iso).
    pub fn kernel(&self) -> Result<(ChainRep, ChainMorphism)> {
        if !self.source.tail.is_stable()
            || !self.target.tail.is_stable()
            || matches!(self.tail, ChainMorphismTail::Periodic(_))
        {
            return Err(Error::UnsupportedTail("kernel of a periodic chain".into()));
        }
        let d = self
            .source
            .horizon()
            .max(self.target.horizon())
            .max(self.components.len());
        let mut stage_data = Vec::new();
        for n in 0..=d {
            stage_data.push(self.component(n).kernel());
        }
        let mut maps = Vec::new();
        for n in 0..d {
            let (ref kn, ref incl_n) = stage_data[n];
            let (ref kn1, ref incl_n1) = stage_data[n + 1];
            let rhs = self.source.stage_map(n).compose(incl_n)?;
            let mut sys = crate::ring::MapSystem::new(self.source.ring);
            let u = sys.add_unknown(kn, kn1);
            sys.add_equation(crate::ring::MapExpr::composed(Some(incl_n1), u, None), rhs)?;
            maps.push(
                sys.solve()
                    .ok_or_else(|| Error::Internal("kernel chain map must exist".into()))?
                    .swap_remove(0),
            );
        }
        // Beyond d the pattern is constant: the kernel of a constant map.
        let (stable_kernel, _) = stage_data[d].clone();
        let tail = if stable_kernel.is_zero() {
            TailSpec::EventuallyZero
        } else {
            TailSpec::EventuallyIso(stable_kernel)
        };
        let prefix: Vec<FinModule> = stage_data[..d].iter().map(|(k, _)| k.clone()).collect();
        let ker = ChainRep::new(self.source.ring, prefix, maps, tail)?;
        let incls: Vec<ModuleMap> = stage_data[..=d].iter().map(|(_, i)| i.clone()).collect();
        let incl = ChainMorphism::new(
            ker.clone(),
            self.source.clone(),
            incls,
            ChainMorphismTail::Constant,
        )?;
        Ok((ker, incl))
    }
}

/// Complete enumeration of Hom between stable-tailed chains.
///
/// Every morphism between such chains is eventually constant (beyond the
/// common horizon the stage maps are identities or zero), so the window
/// system of naturality equations is the whole Hom set. For a target of
/// product type (stagewise products of a finite family, with projection
/// maps) this realizes the correspondence with free families of stagewise
/// components; for a constant target it realizes the correspondence with
/// maps out of the colimit.
pub fn hom_chain_reps(
    x: &ChainRep,
    y: &ChainRep,
    budget: crate::Budget,
) -> Result<Vec<ChainMorphism>> {
    if !x.tail.is_stable() || !y.tail.is_stable() {
        return Err(Error::UnsupportedTail("Hom enumeration needs zero/iso tails".into()));
    }
    let d = x.horizon().max(y.horizon()).max(1);
    let mut sys = crate::ring::MapSystem::new(x.ring);
    let unknowns: Vec<usize> = (0..=d)
        .map(|n| sys.add_unknown(&x.stage_module(n), &y.stage_module(n)))
        .collect();
    for n in 0..=d {
        let next = if n < d { unknowns[n + 1] } else { unknowns[d] };
        let expr = crate::ring::MapExpr::composed(Some(&y.stage_map(n)), unknowns[n], None).minus(
            crate::ring::MapExpr::composed(None, next, Some(&x.stage_map(n))),
        );
        sys.add_equation(
            expr,
            ModuleMap::zero(&x.stage_module(n), &y.stage_module(n + 1)),
        )?;
    }
    sys.enumerate_solutions(budget)?
        .into_iter()
        .map(|sol| {
            ChainMorphism::new(
                x.clone(),
                y.clone(),
                unknowns.iter().map(|&u| sol[u].clone()).collect(),
                ChainMorphismTail::Constant,
            )
        })
        .collect()
}

/// Direct sum of two stable-tailed chains with the four structure morphisms.
pub fn chain_direct_sum(
    a: &ChainRep,
    b: &ChainRep,
) -> Result<(ChainRep, [ChainMorphism; 4])> {
    if !a.tail.is_stable() || !b.tail.is_stable() {
        return Err(Error::UnsupportedTail("direct sum of periodic chains".into()));
    }
    let ring = a.ring;
    let d = a.horizon().max(b.horizon());
    let mut sum_stages = Vec::new();
    let mut inc_a = Vec::new();
    let mut inc_b = Vec::new();
    let mut proj_a = Vec::new();
    let mut proj_b = Vec::new();
    for n in 0..=(d + 1) {
        let (am, bm) = (a.stage_module(n), b.stage_module(n));
        let ds = am.direct_sum(&bm);
        inc_a.push(crate::ring::sum_inclusion(&ds, &am, true));
        inc_b.push(crate::ring::sum_inclusion(&ds, &bm, false));
        proj_a.push(crate::ring::sum_projection(&ds, &am, true));
        proj_b.push(crate::ring::sum_projection(&ds, &bm, false));
        sum_stages.push(ds.module);
    }
    let mut maps = Vec::new();
    for n in 0..=d {
        let left = inc_a[n + 1]
            .compose(&a.stage_map(n))?
            .compose(&proj_a[n])?;
        let right = inc_b[n + 1]
            .compose(&b.stage_map(n))?
            .compose(&proj_b[n])?;
        maps.push(left.add(&right)?);
    }
    let stable = sum_stages[d + 1].clone();
    let tail = if stable.is_zero() {
        TailSpec::EventuallyZero
    } else {
        TailSpec::EventuallyIso(stable)
    };
    let sum = ChainRep::new(ring, sum_stages[..=d].to_vec(), maps, tail)?;
    let mk_into = |comps: Vec<ModuleMap>, part: &ChainRep| {
        ChainMorphism::new(part.clone(), sum.clone(), comps, ChainMorphismTail::Constant)
    };
    let mk_from = |comps: Vec<ModuleMap>, part: &ChainRep| {
        ChainMorphism::new(sum.clone(), part.clone(), comps, ChainMorphismTail::Constant)
    };
    Ok((
        sum.clone(),
        [
            mk_into(inc_a, a)?,
            mk_into(inc_b, b)?,
            mk_from(proj_a, a)?,
            mk_from(proj_b, b)?,
        ],
    ))
}

/// A representation of a barren forest: a representation of the finite core
/// plus one chain per ray, sharing the attachment module at stage 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ForestRep {
    core: FiniteRep,
    /// ray id → (attachment vertex, chain); chain stage 0 is the attachment
    /// module and chain map 0 is the map along the first ray arrow.
    rays: BTreeMap<u32, (VertexId, ChainRep)>,
}

impl ForestRep {
    pub fn new(core: FiniteRep, rays: BTreeMap<u32, (VertexId, ChainRep)>) -> Result<Self> {
        for (ray_id, (attach, chain)) in &rays {
            if !core.quiver().contains_vertex(*attach) {
                return Err(Error::UnknownVertex(attach.0));
            }
            if &chain.stage_module(0) != core.module(*attach) {
                return Err(Error::ShapeMismatch(format!(
                    "ray {ray_id}: chain stage 0 differs from the module at vertex {attach}"
                )));
            }
        }
        Ok(ForestRep { core, rays })
    }

    pub fn core(&self) -> &FiniteRep {
        &self.core
    }

    pub fn rays(&self) -> &BTreeMap<u32, (VertexId, ChainRep)> {
        &self.rays
    }

    pub fn ring(&self) -> BaseRing {
        self.core.ring()
    }

    /// Rays attached at a given core vertex, in ray-id order.
    pub fn rays_at(&self, v: VertexId) -> Vec<(u32, &ChainRep)> {
        self.rays
            .iter()
            .filter(|(_, (attach, _))| *attach == v)
            .map(|(id, (_, chain))| (*id, chain))
            .collect()
    }

    /// Effective source map at a core vertex: the product runs over the
    /// core out-arrows (arrow-id order) followed by the first stages of the
    /// attached rays (ray-id order).
    pub fn source_map(&self, v: VertexId) -> ForestSourceData {
        let core_arrows: Vec<crate::quiver::Arrow> = self
            .core
            .quiver()
            .out_arrows(v)
            .into_iter()
            .copied()
            .collect();
        let ray_ids: Vec<u32> = self.rays_at(v).into_iter().map(|(id, _)| id).collect();
        let mut parts: Vec<FinModule> = core_arrows
            .iter()
            .map(|a| self.core.module(a.tgt).clone())
            .collect();
        for id in &ray_ids {
            parts.push(self.rays[id].1.stage_module(1));
        }
        let (product, injections, projections) =
            crate::ring::big_direct_sum(self.ring(), &parts);
        let mut map = ModuleMap::zero(self.core.module(v), &product);
        for (i, a) in core_arrows.iter().enumerate() {
            map = map
                .add(&injections[i].compose(self.core.map(a.id)).expect("shapes fit"))
                .expect("shapes fit");
        }
        for (j, id) in ray_ids.iter().enumerate() {
            let first = self.rays[id].1.stage_map(0);
            map = map
                .add(&injections[core_arrows.len() + j].compose(&first).expect("shapes fit"))
                .expect("shapes fit");
        }
        ForestSourceData {
            core_arrows,
            ray_ids,
            product,
            map,
            injections,
            projections,
        }
    }
}

/// Product data of a forest source map: core arrow factors first, then the
/// first ray stages.
pub struct ForestSourceData {
    pub core_arrows: Vec<crate::quiver::Arrow>,
    pub ray_ids: Vec<u32>,
    pub product: FinModule,
    pub map: ModuleMap,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

/// A natural transformation between forest representations over the same
/// descriptor: core components plus one chain morphism per ray (whose stage
/// 0 component equals the core component at the attachment).
#[derive(Debug, Clone, PartialEq)]
pub struct ForestMorphism {
    source: ForestRep,
    target: ForestRep,
    core_components: BTreeMap<VertexId, ModuleMap>,
    ray_components: BTreeMap<u32, ChainMorphism>,
}

impl ForestMorphism {
    pub fn new(
        source: ForestRep,
        target: ForestRep,
        core_components: BTreeMap<VertexId, ModuleMap>,
        ray_components: BTreeMap<u32, ChainMorphism>,
    ) -> Result<Self> {
        // core naturality
        for a in source.core.quiver().arrows() {
            let lhs = target
                .core
                .map(a.id)
                .compose(&core_components[&a.src])?;
            let rhs = core_components[&a.tgt].compose(source.core.map(a.id))?;
            if lhs != rhs {
                return Err(Error::ShapeMismatch(format!(
                    "forest naturality fails at core arrow {}",
                    a.id
                )));
            }
        }
        for v in source.core.quiver().vertices() {
            let c = &core_components[&v];
            if c.domain() != source.core.module(v) || c.codomain() != target.core.module(v) {
                return Err(Error::ShapeMismatch(format!(
                    "forest component at {v} has wrong ends"
                )));
            }
        }
        // ray chains (their own validation covers the ray squares); the
        // stage-0 component must agree with the core at the attachment
        for (id, (attach, _)) in &source.rays {
            let rm = ray_components
                .get(id)
                .ok_or_else(|| Error::ShapeMismatch(format!("missing ray morphism {id}")))?;
            if rm.component(0) != core_components[attach] {
                return Err(Error::ShapeMismatch(format!(
                    "ray {id} morphism disagrees with the core at vertex {attach}"
                )));
            }
        }
        Ok(ForestMorphism {
            source,
            target,
            core_components,
            ray_components,
        })
    }

    pub fn source(&self) -> &ForestRep {
        &self.source
    }

    pub fn target(&self) -> &ForestRep {
        &self.target
    }

    pub fn core_component(&self, v: VertexId) -> &ModuleMap {
        &self.core_components[&v]
    }

    pub fn ray_component(&self, ray: u32) -> &ChainMorphism {
        &self.ray_components[&ray]
    }

    pub fn is_mono(&self) -> bool {
        self.core_components.values().all(|c| c.is_injective_map())
            && self.ray_components.values().all(|r| r.is_mono())
    }
}

/// A representation of the two-sided infinite chain: an explicit window for
/// stages 0..m, a forward tail, and a backward rule for the stages < 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BiChainRep {
    ring: BaseRing,
    /// Rule for stages ≤ −1. `EventuallyIso(E)` means every negative stage
    /// is E with identity maps and `back_seam: E → window[0]` is the map
    /// from stage −1 into stage 0; `EventuallyZero` makes them all vanish.
    back_tail: TailSpec,
    back_seam: Option<ModuleMap>,
    window: Vec<FinModule>,
    window_maps: Vec<ModuleMap>,
    forward_tail: TailSpec,
}

impl BiChainRep {
    pub fn new(
        ring: BaseRing,
        back_tail: TailSpec,
        back_seam: Option<ModuleMap>,
        window: Vec<FinModule>,
        window_maps: Vec<ModuleMap>,
        forward_tail: TailSpec,
    ) -> Result<Self> {
        if window.is_empty() {
            return Err(Error::ShapeMismatch("two-sided chain needs a window".into()));
        }
        if !back_tail.is_stable() || !forward_tail.is_stable() {
            return Err(Error::UnsupportedTail(
                "two-sided chains support stable tails only".into(),
            ));
        }
        match (&back_tail, &back_seam) {
            (TailSpec::EventuallyIso(e), Some(seam)) => {
                if seam.domain() != e || seam.codomain() != &window[0] {
                    return Err(Error::ShapeMismatch("backward seam has wrong ends".into()));
                }
            }
            (TailSpec::EventuallyZero, None) => {}
            _ => {
                return Err(Error::ShapeMismatch(
                    "backward tail and seam do not match".into(),
                ))
            }
        }
        let rep = BiChainRep {
            ring,
            back_tail,
            back_seam,
            window,
            window_maps,
            forward_tail,
        };
        if rep.window_maps.len() != rep.window.len() {
            return Err(Error::ShapeMismatch(
                "two-sided chain needs one map per window stage".into(),
            ));
        }
        for n in 0..rep.window.len() {
            let f = &rep.window_maps[n];
            if f.domain() != &rep.stage_module(n as i64)
                || f.codomain() != &rep.stage_module(n as i64 + 1)
            {
                return Err(Error::ShapeMismatch(format!(
                    "two-sided chain map at stage {n} has wrong ends"
                )));
            }
        }
        Ok(rep)
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn window_len(&self) -> usize {
        self.window.len()
    }

    pub fn stage_module(&self, n: i64) -> FinModule {
        if n < 0 {
            return match &self.back_tail {
                TailSpec::EventuallyZero => FinModule::zero(self.ring),
                TailSpec::EventuallyIso(e) => e.clone(),
                TailSpec::EventuallyPeriodic(_) => unreachable!("rejected at construction"),
            };
        }
        let n = n as usize;
        if n < self.window.len() {
            return self.window[n].clone();
        }
        match &self.forward_tail {
            TailSpec::EventuallyZero => FinModule::zero(self.ring),
            TailSpec::EventuallyIso(e) => e.clone(),
            TailSpec::EventuallyPeriodic(_) => unreachable!("rejected at construction"),
        }
    }

    /// The map stage n → n+1.
    pub fn stage_map(&self, n: i64) -> ModuleMap {
        if n < -1 {
            return match &self.back_tail {
                TailSpec::EventuallyZero => {
                    ModuleMap::zero(&self.stage_module(n), &self.stage_module(n + 1))
                }
                TailSpec::EventuallyIso(e) => ModuleMap::identity(e),
                TailSpec::EventuallyPeriodic(_) => unreachable!(),
            };
        }
        if n == -1 {
            return match (&self.back_tail, &self.back_seam) {
                (TailSpec::EventuallyZero, _) => {
                    ModuleMap::zero(&self.stage_module(-1), &self.window[0])
                }
                (TailSpec::EventuallyIso(_), Some(seam)) => seam.clone(),
                _ => unreachable!(),
            };
        }
        let n = n as usize;
        if n < self.window_maps.len() {
            return self.window_maps[n].clone();
        }
        match &self.forward_tail {
            TailSpec::EventuallyZero => {
                ModuleMap::zero(&self.stage_module(n as i64), &self.stage_module(n as i64 + 1))
            }
            TailSpec::EventuallyIso(e) => ModuleMap::identity(e),
            TailSpec::EventuallyPeriodic(_) => unreachable!(),
        }
    }

    /// Forward horizon: stages ≥ this index repeat.
    pub fn forward_horizon(&self) -> usize {
        self.window.len()
    }

    /// The one-sided chain of stages ≥ 0.
    pub fn forward_chain(&self) -> ChainRep {
        ChainRep::new(
            self.ring,
            self.window.clone(),
            self.window_maps.clone(),
            self.forward_tail.clone(),
        )
        .expect("forward view of a valid two-sided chain")
    }

    pub fn back_tail(&self) -> &TailSpec {
        &self.back_tail
    }
}

/// A natural transformation between two-sided chains: explicit components
/// on stages lo..=hi, constant-or-zero rules beyond both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct BiChainMorphism {
    source: BiChainRep,
    target: BiChainRep,
    lo: i64,
    components: Vec<ModuleMap>,
    back_tail: ChainMorphismTail,
    forward_tail: ChainMorphismTail,
}

impl BiChainMorphism {
    pub fn new(
        source: BiChainRep,
        target: BiChainRep,
        lo: i64,
        components: Vec<ModuleMap>,
        back_tail: ChainMorphismTail,
        forward_tail: ChainMorphismTail,
    ) -> Result<Self> {
        if matches!(back_tail, ChainMorphismTail::Periodic(_))
            || matches!(forward_tail, ChainMorphismTail::Periodic(_))
        {
            return Err(Error::UnsupportedTail(
                "two-sided morphisms support constant/zero tails only".into(),
            ));
        }
        if components.is_empty() || lo > 0 {
            return Err(Error::ShapeMismatch(
                "two-sided morphism window must cover stage 0".into(),
            ));
        }
        let m = BiChainMorphism {
            source,
            target,
            lo,
            components,
            back_tail,
            forward_tail,
        };
        let hi = m.lo + m.components.len() as i64 - 1;
        let fwd = m.source.forward_horizon().max(m.target.forward_horizon()) as i64;
        for n in (m.lo - 2)..=(hi.max(fwd) + 1) {
            let c = m.component(n);
            if c.domain() != &m.source.stage_module(n) || c.codomain() != &m.target.stage_module(n)
            {
                return Err(Error::ShapeMismatch(format!(
                    "two-sided component at stage {n} has wrong ends"
                )));
            }
            let lhs = m.target.stage_map(n).compose(&m.component(n)).expect("fits");
            let rhs = m.component(n + 1).compose(&m.source.stage_map(n)).expect("fits");
            if lhs != rhs {
                return Err(Error::ShapeMismatch(format!(
                    "two-sided naturality fails at stage {n}"
                )));
            }
        }
        Ok(m)
    }

    pub fn source(&self) -> &BiChainRep {
        &self.source
    }

    pub fn target(&self) -> &BiChainRep {
        &self.target
    }

    pub fn component(&self, n: i64) -> ModuleMap {
        let hi = self.lo + self.components.len() as i64 - 1;
        if n >= self.lo && n <= hi {
            return self.components[(n - self.lo) as usize].clone();
        }
        let rule = if n < self.lo {
            &self.back_tail
        } else {
            &self.forward_tail
        };
        match rule {
            ChainMorphismTail::Zero => {
                ModuleMap::zero(&self.source.stage_module(n), &self.target.stage_module(n))
            }
            ChainMorphismTail::Constant => {
                if n < self.lo {
                    self.components.first().expect("nonempty").clone()
                } else {
                    self.components.last().expect("nonempty").clone()
                }
            }
            ChainMorphismTail::Periodic(_) => unreachable!("rejected at construction"),
        }
    }

    /// Restriction to the forward chains (stages ≥ 0).
    pub fn forward(&self) -> Result<ChainMorphism> {
        let hi = self.lo + self.components.len() as i64 - 1;
        let window = (hi.max(0) + 1) as usize;
        let components = (0..window as i64).map(|n| self.component(n)).collect();
        ChainMorphism::new(
            self.source.forward_chain(),
            self.target.forward_chain(),
            components,
            self.forward_tail.clone(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z4() -> BaseRing {
        BaseRing::ZmodPk { p: 2, k: 2 }
    }

    fn z4_mod(inv: &[u32]) -> FinModule {
        FinModule::new(z4(), inv.to_vec()).unwrap()
    }

    #[test]
    fn chain_accessors_and_materialization() {
        // Z/4 -> Z/4 -> 0 -> 0 -> ... with the first map ·2
        let m = z4_mod(&[2]);
        let chain = ChainRep::new(
            z4(),
            vec![m.clone(), m.clone()],
            vec![
                ModuleMap::new(m.clone(), m.clone(), vec![2]).unwrap(),
                ModuleMap::zero(&m, &FinModule::zero(z4())),
            ],
            TailSpec::EventuallyZero,
        )
        .unwrap();
        assert_eq!(chain.stage_module(0), m);
        assert!(chain.stage_module(5).is_zero());
        assert!(chain.stage_map(7).is_zero_map());
        let fin = chain.materialize(4);
        assert_eq!(fin.module(VertexId(0)), &m);
        assert!(fin.module(VertexId(3)).is_zero());

        // tail correctness: operations supported below depth d agree at d and d+5
        let shallow = chain.materialize(3);
        let deep = chain.materialize(8);
        for n in 0..=3u32 {
            assert_eq!(shallow.module(VertexId(n)), deep.module(VertexId(n)));
        }
    }

    #[test]
    fn constant_chain_and_identity_morphism() {
        let e = z4_mod(&[2, 2]);
        let chain = ChainRep::constant(e.clone());
        assert_eq!(chain.stage_module(10), e);
        let id = ChainMorphism::identity(&chain);
        assert!(id.is_iso());
        assert_eq!(id.compose(&id).unwrap().component(3), id.component(3));
    }

    #[test]
    fn chain_kernel_of_projection() {
        // (Z/4 ⊕ Z/4 -> Z/4 -> Z/4 ...) projection onto the constant chain
        let e = z4_mod(&[2]);
        let e2 = z4_mod(&[2, 2]);
        let src = ChainRep::new(
            z4(),
            vec![e2.clone()],
            vec![ModuleMap::new(e2.clone(), e.clone(), vec![1, 0]).unwrap()],
            TailSpec::EventuallyIso(e.clone()),
        )
        .unwrap();
        let tgt = ChainRep::constant(e.clone());
        let eta = ChainMorphism::new(
            src.clone(),
            tgt.clone(),
            vec![
                ModuleMap::new(e2.clone(), e.clone(), vec![1, 0]).unwrap(),
                ModuleMap::identity(&e),
            ],
            ChainMorphismTail::Constant,
        )
        .unwrap();
        let (ker, incl) = eta.kernel().unwrap();
        assert_eq!(ker.stage_module(0).invariants(), &[2]);
        assert!(ker.stage_module(3).is_zero());
        assert!(incl.is_mono());
    }

    #[test]
    fn chain_direct_sum_structure() {
        let a = ChainRep::constant(z4_mod(&[2]));
        let b = ChainRep::new(
            z4(),
            vec![z4_mod(&[2])],
            vec![ModuleMap::zero(&z4_mod(&[2]), &FinModule::zero(z4()))],
            TailSpec::EventuallyZero,
        )
        .unwrap();
        let (sum, [inc_a, inc_b, proj_a, proj_b]) = chain_direct_sum(&a, &b).unwrap();
        assert_eq!(sum.stage_module(0).invariants(), &[2, 2]);
        assert_eq!(sum.stage_module(3).invariants(), &[2]);
        for n in 0..4 {
            let pa = proj_a.component(n).compose(&inc_a.component(n)).unwrap();
            assert_eq!(pa, ModuleMap::identity(&a.stage_module(n)));
            let mixed = proj_a.component(n).compose(&inc_b.component(n)).unwrap();
            assert!(mixed.is_zero_map());
            let pb = proj_b.component(n).compose(&inc_b.component(n)).unwrap();
            assert_eq!(pb, ModuleMap::identity(&b.stage_module(n)));
        }
    }

    #[test]
    fn bichain_accessors() {
        let e = z4_mod(&[2]);
        let bi = BiChainRep::new(
            z4(),
            TailSpec::EventuallyIso(e.clone()),
            Some(ModuleMap::identity(&e)),
            vec![e.clone()],
            vec![ModuleMap::identity(&e)],
            TailSpec::EventuallyIso(e.clone()),
        )
        .unwrap();
        assert_eq!(bi.stage_module(-5), e);
        assert_eq!(bi.stage_module(7), e);
        assert_eq!(bi.stage_map(-3), ModuleMap::identity(&e));
    }

    #[test]
    fn forest_rep_validation() {
        use crate::quiver::ArrowId;
        let core_q = Quiver::a2();
        let m = z4_mod(&[2]);
        let core = FiniteRep::new(
            core_q,
            z4(),
            [(VertexId(1), m.clone()), (VertexId(2), m.clone())].into(),
            [(ArrowId(1), ModuleMap::identity(&m))].into(),
        )
        .unwrap();
        let ray = ChainRep::constant(m.clone());
        let forest = ForestRep::new(core.clone(), [(0, (VertexId(2), ray))].into()).unwrap();
        assert_eq!(forest.rays_at(VertexId(2)).len(), 1);
        // mismatched attachment module is rejected
        let bad_ray = ChainRep::constant(z4_mod(&[1]));
        assert!(ForestRep::new(core, [(0, (VertexId(2), bad_ray))].into()).is_err());
    }
}
