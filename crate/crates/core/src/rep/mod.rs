//! The representation category: objects, morphisms, (co)kernels, direct
//! sums, Hom enumeration and the source/sink maps of the local criteria.

mod chain;
mod json;

pub use chain::{
    chain_direct_sum, hom_chain_reps, line_quiver, BiChainMorphism, BiChainRep, ChainMorphism,
    ChainMorphismTail, ChainRep, ForestMorphism, ForestRep, ForestSourceData, TailSpec,
};
pub use json::{MatrixDoc, RepDoc, TailDoc};

use crate::error::{Error, Result};
use crate::quiver::{Arrow, ArrowId, Quiver, VertexId};
use crate::ring::{
    big_direct_sum, BaseRing, FinModule, MapExpr, MapSystem, ModuleMap,
};
use crate::Budget;
use std::collections::BTreeMap;

/// A representation of any supported quiver shape. Two-sided chains exist
/// in the library API only (no file form).
#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Finite(FiniteRep),
    Chain(ChainRep),
    Forest(ForestRep),
}

/// A representation of a finite quiver: a module per vertex, a map per arrow.
#[derive(Debug, Clone, PartialEq)]
pub struct FiniteRep {
    quiver: Quiver,
    ring: BaseRing,
    modules: BTreeMap<VertexId, FinModule>,
    maps: BTreeMap<ArrowId, ModuleMap>,
}

impl FiniteRep {
    /// Validates shapes eagerly: every vertex needs a module, every arrow a
    /// map between the assigned modules. (The quiver is free, so there are
    /// no composition relations to check beyond the annihilator conditions
    /// already enforced by `ModuleMap`.)
    pub fn new(
        quiver: Quiver,
        ring: BaseRing,
        modules: BTreeMap<VertexId, FinModule>,
        maps: BTreeMap<ArrowId, ModuleMap>,
    ) -> Result<Self> {
        for v in quiver.vertices() {
            let m = modules
                .get(&v)
                .ok_or_else(|| Error::ShapeMismatch(format!("vertex {v} has no module")))?;
            if m.ring() != ring {
                return Err(Error::ShapeMismatch(format!("vertex {v}: wrong ring")));
            }
        }
        if modules.len() != quiver.vertex_count() {
            return Err(Error::ShapeMismatch("module assigned to unknown vertex".into()));
        }
        for arrow in quiver.arrows() {
            let f = maps
                .get(&arrow.id)
                .ok_or_else(|| Error::ShapeMismatch(format!("arrow {} has no map", arrow.id)))?;
            if f.domain() != &modules[&arrow.src] || f.codomain() != &modules[&arrow.tgt] {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {}: map ends do not match the vertex modules",
                    arrow.id
                )));
            }
        }
        if maps.len() != quiver.arrows().len() {
            return Err(Error::ShapeMismatch("map assigned to unknown arrow".into()));
        }
        Ok(FiniteRep {
            quiver,
            ring,
            modules,
            maps,
        })
    }

    pub fn zero(quiver: Quiver, ring: BaseRing) -> Self {
        let modules: BTreeMap<VertexId, FinModule> = quiver
            .vertices()
            .map(|v| (v, FinModule::zero(ring)))
            .collect();
        let maps = quiver
            .arrows()
            .iter()
            .map(|a| {
                (
                    a.id,
                    ModuleMap::zero(&modules[&a.src], &modules[&a.tgt]),
                )
            })
            .collect();
        FiniteRep {
            quiver,
            ring,
            modules,
            maps,
        }
    }

    pub fn quiver(&self) -> &Quiver {
        &self.quiver
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn module(&self, v: VertexId) -> &FinModule {
        &self.modules[&v]
    }

    pub fn modules(&self) -> &BTreeMap<VertexId, FinModule> {
        &self.modules
    }

    pub fn map(&self, a: ArrowId) -> &ModuleMap {
        &self.maps[&a]
    }

    pub fn maps(&self) -> &BTreeMap<ArrowId, ModuleMap> {
        &self.maps
    }

    pub fn is_zero(&self) -> bool {
        self.modules.values().all(|m| m.is_zero())
    }

    pub fn total_cardinality(&self) -> u128 {
        self.modules
            .values()
            .map(|m| m.cardinality())
            .product()
    }

    /// The map along a whole path (identity for the trivial path).
    pub fn path_map(&self, from: VertexId, path: &[ArrowId]) -> Result<ModuleMap> {
        let mut at = from;
        let mut acc = ModuleMap::identity(self.module(from));
        for id in path {
            let arrow = self.quiver.arrow(*id)?;
            if arrow.src != at {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {id} does not compose at vertex {at}"
                )));
            }
            acc = self.map(*id).compose(&acc)?;
            at = arrow.tgt;
        }
        Ok(acc)
    }

    /// Source map at v: the tuple map X(v) → ∏_{s(a)=v} X(t(a)), with the
    /// product structure maps. The empty product is the zero module.
    pub fn source_map(&self, v: VertexId) -> SourceMapData {
        let arrows: Vec<Arrow> = self.quiver.out_arrows(v).into_iter().copied().collect();
        let parts: Vec<FinModule> = arrows.iter().map(|a| self.module(a.tgt).clone()).collect();
        let (product, injections, projections) = big_direct_sum(self.ring, &parts);
        let mut map = ModuleMap::zero(self.module(v), &product);
        for (inc, a) in injections.iter().zip(&arrows) {
            map = map
                .add(&inc.compose(self.map(a.id)).expect("shapes fit"))
                .expect("shapes fit");
        }
        SourceMapData {
            arrows,
            product,
            map,
            injections,
            projections,
        }
    }

    /// Sink map at v: ⊕_{t(a)=v} X(s(a)) → X(v).
    pub fn sink_map(&self, v: VertexId) -> SinkMapData {
        let arrows: Vec<Arrow> = self.quiver.in_arrows(v).into_iter().copied().collect();
        let parts: Vec<FinModule> = arrows.iter().map(|a| self.module(a.src).clone()).collect();
        let (sum, injections, projections) = big_direct_sum(self.ring, &parts);
        let mut map = ModuleMap::zero(&sum, self.module(v));
        for (proj, a) in projections.iter().zip(&arrows) {
            map = map
                .add(&self.map(a.id).compose(proj).expect("shapes fit"))
                .expect("shapes fit");
        }
        SinkMapData {
            arrows,
            sum,
            map,
            injections,
            projections,
        }
    }

    /// Direct sum with block-diagonal arrow maps, plus the four structure
    /// morphisms. Arrow blocks are homogeneous with respect to the
    /// decomposition by construction.
    pub fn direct_sum(&self, other: &FiniteRep) -> Result<RepSum> {
        if self.quiver != other.quiver {
            return Err(Error::ShapeMismatch("direct sum over different quivers".into()));
        }
        let mut modules = BTreeMap::new();
        let mut inc_l = BTreeMap::new();
        let mut inc_r = BTreeMap::new();
        let mut proj_l = BTreeMap::new();
        let mut proj_r = BTreeMap::new();
        for v in self.quiver.vertices() {
            let ds = self.module(v).direct_sum(other.module(v));
            inc_l.insert(v, crate::ring::sum_inclusion(&ds, self.module(v), true));
            inc_r.insert(v, crate::ring::sum_inclusion(&ds, other.module(v), false));
            proj_l.insert(v, crate::ring::sum_projection(&ds, self.module(v), true));
            proj_r.insert(v, crate::ring::sum_projection(&ds, other.module(v), false));
            modules.insert(v, ds.module);
        }
        let mut maps = BTreeMap::new();
        for a in self.quiver.arrows() {
            let left = inc_l[&a.tgt]
                .compose(self.map(a.id))?
                .compose(&proj_l[&a.src])?;
            let right = inc_r[&a.tgt]
                .compose(other.map(a.id))?
                .compose(&proj_r[&a.src])?;
            maps.insert(a.id, left.add(&right)?);
        }
        let sum = FiniteRep::new(self.quiver.clone(), self.ring, modules, maps)?;
        let mk = |rep: &FiniteRep, comps: BTreeMap<VertexId, ModuleMap>, into: bool| {
            if into {
                RepMorphism::new(rep.clone(), sum.clone(), comps)
            } else {
                RepMorphism::new(sum.clone(), rep.clone(), comps)
            }
        };
        Ok(RepSum {
            inc_left: mk(self, inc_l, true)?,
            inc_right: mk(other, inc_r, true)?,
            proj_left: mk(self, proj_l, false)?,
            proj_right: mk(other, proj_r, false)?,
            sum,
        })
    }
}

pub struct SourceMapData {
    pub arrows: Vec<Arrow>,
    pub product: FinModule,
    pub map: ModuleMap,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

pub struct SinkMapData {
    pub arrows: Vec<Arrow>,
    pub sum: FinModule,
    pub map: ModuleMap,
    pub injections: Vec<ModuleMap>,
    pub projections: Vec<ModuleMap>,
}

pub struct RepSum {
    pub sum: FiniteRep,
    pub inc_left: RepMorphism,
    pub inc_right: RepMorphism,
    pub proj_left: RepMorphism,
    pub proj_right: RepMorphism,
}

/// A natural transformation between representations of the same finite
/// quiver: one component per vertex, all naturality squares commuting.
#[derive(Debug, Clone, PartialEq)]
pub struct RepMorphism {
    source: FiniteRep,
    target: FiniteRep,
    components: BTreeMap<VertexId, ModuleMap>,
}

impl RepMorphism {
    pub fn new(
        source: FiniteRep,
        target: FiniteRep,
        components: BTreeMap<VertexId, ModuleMap>,
    ) -> Result<Self> {
        if source.quiver != target.quiver {
            return Err(Error::ShapeMismatch("morphism across different quivers".into()));
        }
        for v in source.quiver.vertices() {
            let c = components
                .get(&v)
                .ok_or_else(|| Error::ShapeMismatch(format!("no component at vertex {v}")))?;
            if c.domain() != source.module(v) || c.codomain() != target.module(v) {
                return Err(Error::ShapeMismatch(format!(
                    "component at {v} has wrong ends"
                )));
            }
        }
        let morphism = RepMorphism {
            source,
            target,
            components,
        };
        morphism.check_naturality()?;
        Ok(morphism)
    }

    fn check_naturality(&self) -> Result<()> {
        for a in self.source.quiver.arrows() {
            let lhs = self.target.map(a.id).compose(&self.components[&a.src])?;
            let rhs = self.components[&a.tgt].compose(self.source.map(a.id))?;
            if lhs != rhs {
                return Err(Error::ShapeMismatch(format!(
                    "naturality fails at arrow {}",
                    a.id
                )));
            }
        }
        Ok(())
    }

    pub fn identity(rep: &FiniteRep) -> Self {
        RepMorphism {
            source: rep.clone(),
            target: rep.clone(),
            components: rep
                .quiver
                .vertices()
                .map(|v| (v, ModuleMap::identity(rep.module(v))))
                .collect(),
        }
    }

    pub fn zero(source: &FiniteRep, target: &FiniteRep) -> Result<Self> {
        if source.quiver != target.quiver {
            return Err(Error::ShapeMismatch("morphism across different quivers".into()));
        }
        Ok(RepMorphism {
            source: source.clone(),
            target: target.clone(),
            components: source
                .quiver
                .vertices()
                .map(|v| (v, ModuleMap::zero(source.module(v), target.module(v))))
                .collect(),
        })
    }

    pub fn source(&self) -> &FiniteRep {
        &self.source
    }

    pub fn target(&self) -> &FiniteRep {
        &self.target
    }

    pub fn component(&self, v: VertexId) -> &ModuleMap {
        &self.components[&v]
    }

    pub fn components(&self) -> &BTreeMap<VertexId, ModuleMap> {
        &self.components
    }

    pub fn compose(&self, inner: &RepMorphism) -> Result<RepMorphism> {
        if inner.target != self.source {
            return Err(Error::ShapeMismatch("composition ends differ".into()));
        }
        let components = self
            .components
            .iter()
            .map(|(&v, c)| Ok((v, c.compose(inner.component(v))?)))
            .collect::<Result<_>>()?;
        Ok(RepMorphism {
            source: inner.source.clone(),
            target: self.target.clone(),
            components,
        })
    }

    pub fn is_mono(&self) -> bool {
        self.components.values().all(|c| c.is_injective_map())
    }

    pub fn is_epi(&self) -> bool {
        self.components.values().all(|c| c.is_surjective_map())
    }

    pub fn is_iso(&self) -> bool {
        self.is_mono() && self.is_epi()
    }

    /// Vertexwise kernel with the induced arrow maps.
    pub fn kernel(&self) -> Result<(FiniteRep, RepMorphism)> {
        let mut modules = BTreeMap::new();
        let mut incls = BTreeMap::new();
        for v in self.source.quiver.vertices() {
            let (k, incl) = self.component(v).kernel();
            modules.insert(v, k);
            incls.insert(v, incl);
        }
        let mut maps = BTreeMap::new();
        for a in self.source.quiver.arrows() {
            // X(a) maps Ker(η_src) into Ker(η_tgt); solve for the induced map.
            let target_side = self.source.map(a.id).compose(&incls[&a.src])?;
            let mut sys = MapSystem::new(self.source.ring);
            let u = sys.add_unknown(&modules[&a.src], &modules[&a.tgt]);
            sys.add_equation(
                MapExpr::composed(Some(&incls[&a.tgt]), u, None),
                target_side,
            )?;
            let sol = sys
                .solve()
                .ok_or_else(|| Error::Internal("kernel arrow map must exist".into()))?;
            maps.insert(a.id, sol.into_iter().next().expect("one unknown"));
        }
        let ker = FiniteRep::new(self.source.quiver.clone(), self.source.ring, modules, maps)?;
        let incl = RepMorphism::new(ker.clone(), self.source.clone(), incls)?;
        Ok((ker, incl))
    }

    /// Vertexwise cokernel with the induced arrow maps.
    pub fn cokernel(&self) -> Result<(FiniteRep, RepMorphism)> {
        let mut modules = BTreeMap::new();
        let mut projs = BTreeMap::new();
        for v in self.source.quiver.vertices() {
            let (c, proj) = self.component(v).cokernel();
            modules.insert(v, c);
            projs.insert(v, proj);
        }
        let mut maps = BTreeMap::new();
        for a in self.source.quiver.arrows() {
            let target_side = projs[&a.tgt].compose(self.target.map(a.id))?;
            let mut sys = MapSystem::new(self.source.ring);
            let u = sys.add_unknown(&modules[&a.src], &modules[&a.tgt]);
            sys.add_equation(
                MapExpr::composed(None, u, Some(&projs[&a.src])),
                target_side,
            )?;
            let sol = sys
                .solve()
                .ok_or_else(|| Error::Internal("cokernel arrow map must exist".into()))?;
            maps.insert(a.id, sol.into_iter().next().expect("one unknown"));
        }
        let coker = FiniteRep::new(self.target.quiver.clone(), self.target.ring, modules, maps)?;
        let proj = RepMorphism::new(self.target.clone(), coker.clone(), projs)?;
        Ok((coker, proj))
    }

    /// Vertexwise image: (image rep, inclusion into the target,
    /// corestriction from the source).
    pub fn image(&self) -> Result<(FiniteRep, RepMorphism, RepMorphism)> {
        let mut modules = BTreeMap::new();
        let mut incls = BTreeMap::new();
        let mut cores = BTreeMap::new();
        for v in self.source.quiver.vertices() {
            let (im, incl, core) = self.component(v).image();
            modules.insert(v, im);
            incls.insert(v, incl);
            cores.insert(v, core);
        }
        let mut maps = BTreeMap::new();
        for a in self.source.quiver.arrows() {
            let target_side = self.target.map(a.id).compose(&incls[&a.src])?;
            let mut sys = MapSystem::new(self.source.ring);
            let u = sys.add_unknown(&modules[&a.src], &modules[&a.tgt]);
            sys.add_equation(
                MapExpr::composed(Some(&incls[&a.tgt]), u, None),
                target_side,
            )?;
            let sol = sys
                .solve()
                .ok_or_else(|| Error::Internal("image arrow map must exist".into()))?;
            maps.insert(a.id, sol.into_iter().next().expect("one unknown"));
        }
        let img = FiniteRep::new(self.source.quiver.clone(), self.source.ring, modules, maps)?;
        let incl = RepMorphism::new(img.clone(), self.target.clone(), incls)?;
        let core = RepMorphism::new(self.source.clone(), img.clone(), cores)?;
        Ok((img, incl, core))
    }
}

/// Complete enumeration of Hom(X, Y): solutions of the naturality system,
/// in a deterministic order. The candidate count is checked against the
/// budget before anything is materialized.
pub fn hom_reps(x: &FiniteRep, y: &FiniteRep, budget: Budget) -> Result<Vec<RepMorphism>> {
    if x.quiver != y.quiver {
        return Err(Error::ShapeMismatch("Hom across different quivers".into()));
    }
    let mut sys = MapSystem::new(x.ring);
    let mut index = BTreeMap::new();
    for v in x.quiver.vertices() {
        index.insert(v, sys.add_unknown(x.module(v), y.module(v)));
    }
    for a in x.quiver.arrows() {
        let lhs = MapExpr::composed(Some(y.map(a.id)), index[&a.src], None).minus(
            MapExpr::composed(None, index[&a.tgt], Some(x.map(a.id))),
        );
        sys.add_equation(lhs, ModuleMap::zero(x.module(a.src), y.module(a.tgt)))?;
    }
    let solutions = sys.enumerate_solutions(budget)?;
    solutions
        .into_iter()
        .map(|maps| {
            let components = x
                .quiver
                .vertices()
                .map(|v| (v, maps[index[&v]].clone()))
                .collect();
            RepMorphism::new(x.clone(), y.clone(), components)
        })
        .collect()
}
