//! Injectivity classification: the local criteria, the Baer oracle,
//! constructive extension, decomposition over trees, and the torsion /
//! envelope machinery on the one-sided chain.
//!
//! An injective representation always has injective vertex modules and
//! split-epi source maps. Over a quiver certified source-injective those
//! two local conditions are also sufficient, so a local pass upgrades to a
//! definite verdict; over an uncertified quiver it stays a "local pass".

mod ainf;
mod baer;
mod decompose;
mod extend;

pub use ainf::{
    ainf_envelope, ainf_injective_test, ainf_split, chain_cokernel, essential_check_chain,
    essential_check_finite, torsion_subrep, AinfEnvelope, AinfSplit, AinfStageReport,
};
pub use baer::{baer_oracle, BaerContext};
pub use decompose::{decompose_injective_tree, DecompEntry, DecompTarget, DecompositionResult};
pub use extend::{
    chain_extension_solution, extend_morphism, extend_morphism_bichain, extend_morphism_chain,
    extend_morphism_forest,
};

use crate::error::Result;
use crate::quiver::{
    classify_source_injective, ClassVerdict, Classification, InfiniteQuiverDescriptor, QuiverShape,
    VertexId,
};
use crate::rep::{ChainRep, FiniteRep, ForestRep, Representation};
use crate::ring::{module_classify, split_epi_witness, Certificate, ModuleMap, SplitFailure};
use serde::{Deserialize, Serialize};

/// Where a local check ran: a finite vertex, a chain stage, or a stage of a
/// ray (ray stage 0 is the attachment vertex itself).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum SiteId {
    Vertex { vertex: VertexId },
    Stage { stage: i64 },
    RayStage { ray: u32, stage: usize },
}

impl std::fmt::Display for SiteId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SiteId::Vertex { vertex } => write!(f, "vertex {vertex}"),
            SiteId::Stage { stage } => write!(f, "stage {stage}"),
            SiteId::RayStage { ray, stage } => write!(f, "ray {ray} stage {stage}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SiteFailure {
    ModuleNotInjective,
    SourceMap(SplitFailure),
}

impl std::fmt::Display for SiteFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SiteFailure::ModuleNotInjective => write!(f, "vertex module not injective"),
            SiteFailure::SourceMap(s) => write!(f, "source map not a split epi ({s})"),
        }
    }
}

/// Outcome of both local conditions at one site.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SiteVerdict {
    pub site: SiteId,
    pub module_injective: bool,
    /// Section certificate of the source map when it splits.
    pub split: Option<Certificate>,
    pub failure: Option<SiteFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "overall", rename_all = "snake_case")]
pub enum Overall {
    Injective,
    NotInjective {
        site: SiteId,
        failure: SiteFailure,
    },
    /// Both local conditions hold everywhere but the quiver carries no
    /// sufficiency certificate, so injectivity stays open.
    LocalPassButQuiverUnknown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InjectivityVerdict {
    pub sites: Vec<SiteVerdict>,
    pub overall: Overall,
    pub classification: Classification,
}

impl InjectivityVerdict {
    pub fn is_injective(&self) -> bool {
        matches!(self.overall, Overall::Injective)
    }

    pub fn local_pass(&self) -> bool {
        !matches!(self.overall, Overall::NotInjective { .. })
    }

    /// Section of the source map at a site (present after a local pass).
    pub fn section_at(&self, site: SiteId) -> Option<&ModuleMap> {
        self.sites.iter().find(|s| s.site == site).and_then(|s| {
            s.split.as_ref().and_then(|c| match c {
                Certificate::Section { section, .. } => Some(section),
                _ => None,
            })
        })
    }
}

fn check_site(site: SiteId, module_inj: bool, map: &ModuleMap) -> SiteVerdict {
    if !module_inj {
        return SiteVerdict {
            site,
            module_injective: false,
            split: None,
            failure: Some(SiteFailure::ModuleNotInjective),
        };
    }
    match split_epi_witness(map) {
        Ok(cert) => SiteVerdict {
            site,
            module_injective: true,
            split: Some(cert),
            failure: None,
        },
        Err(fail) => SiteVerdict {
            site,
            module_injective: true,
            split: None,
            failure: Some(SiteFailure::SourceMap(fail)),
        },
    }
}

fn finish(sites: Vec<SiteVerdict>, classification: Classification) -> InjectivityVerdict {
    let first_failure = sites
        .iter()
        .find_map(|s| s.failure.clone().map(|f| (s.site, f)));
    let overall = match first_failure {
        Some((site, failure)) => Overall::NotInjective { site, failure },
        None => match classification.verdict {
            ClassVerdict::Yes { .. } => Overall::Injective,
            ClassVerdict::Unknown { .. } => Overall::LocalPassButQuiverUnknown,
        },
    };
    InjectivityVerdict {
        sites,
        overall,
        classification,
    }
}

/// Checks the two local conditions at every site and combines them with
/// the quiver classification.
pub fn local_injectivity_test(rep: &Representation) -> Result<InjectivityVerdict> {
    match rep {
        Representation::Finite(x) => local_test_finite(x),
        Representation::Chain(c) => local_test_chain(c),
        Representation::Forest(f) => local_test_forest(f),
    }
}

pub fn local_test_finite(x: &FiniteRep) -> Result<InjectivityVerdict> {
    let classification =
        classify_source_injective(&QuiverShape::Finite(x.quiver().clone()))?;
    let mut sites = Vec::new();
    for v in x.quiver().vertices() {
        let inj = module_classify(x.module(v)).is_injective;
        let src = x.source_map(v);
        sites.push(check_site(SiteId::Vertex { vertex: v }, inj, &src.map));
    }
    Ok(finish(sites, classification))
}

pub fn local_test_chain(c: &ChainRep) -> Result<InjectivityVerdict> {
    let classification = classify_source_injective(&QuiverShape::Descriptor(
        InfiniteQuiverDescriptor::AInfPlus,
    ))?;
    // Distinct behaviour lives in stages 0 ..= horizon + period: beyond the
    // horizon the (module, map) pattern repeats.
    let through = c.horizon() + c.tail().period();
    let mut sites = Vec::new();
    for n in 0..=through {
        let inj = module_classify(&c.stage_module(n)).is_injective;
        sites.push(check_site(SiteId::Stage { stage: n as i64 }, inj, &c.stage_map(n)));
    }
    Ok(finish(sites, classification))
}

pub fn local_test_forest(f: &ForestRep) -> Result<InjectivityVerdict> {
    let rays_meta: Vec<crate::quiver::RayAttachment> = f
        .rays()
        .iter()
        .map(|(id, (attach, _))| crate::quiver::RayAttachment {
            attach: *attach,
            ray_id: *id,
        })
        .collect();
    let classification = classify_source_injective(&QuiverShape::Descriptor(
        InfiniteQuiverDescriptor::BarrenForest {
            core: f.core().quiver().clone(),
            rays: rays_meta,
        },
    ))?;
    let mut sites = Vec::new();
    for v in f.core().quiver().vertices() {
        let inj = module_classify(f.core().module(v)).is_injective;
        let src = f.source_map(v);
        sites.push(check_site(SiteId::Vertex { vertex: v }, inj, &src.map));
    }
    for (&ray, (_, chain)) in f.rays() {
        let through = chain.horizon() + chain.tail().period();
        for n in 1..=through.max(1) {
            let inj = module_classify(&chain.stage_module(n)).is_injective;
            sites.push(check_site(
                SiteId::RayStage { ray, stage: n },
                inj,
                &chain.stage_map(n),
            ));
        }
    }
    Ok(finish(sites, classification))
}

/// Local test on a representation of the two-sided chain.
pub fn local_test_bichain(b: &crate::rep::BiChainRep) -> Result<InjectivityVerdict> {
    let classification = classify_source_injective(&QuiverShape::Descriptor(
        InfiniteQuiverDescriptor::AInfBoth,
    ))?;
    let mut sites = Vec::new();
    // one representative backward stage, the seam, the window, one forward
    let lo = -2i64;
    let hi = b.forward_horizon() as i64 + 1;
    for n in lo..=hi {
        let inj = module_classify(&b.stage_module(n)).is_injective;
        sites.push(check_site(SiteId::Stage { stage: n }, inj, &b.stage_map(n)));
    }
    Ok(finish(sites, classification))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{ArrowId, Quiver};
    use crate::rep::TailSpec as TS;
    use crate::ring::{BaseRing, FinModule};
    use std::collections::BTreeMap;

    fn f2() -> BaseRing {
        BaseRing::FiniteField { p: 2, e: 1 }
    }

    fn z4() -> BaseRing {
        BaseRing::ZmodPk { p: 2, k: 2 }
    }

    fn a2_rep(ring: BaseRing, m1: &[u32], m2: &[u32], entries: Vec<i128>) -> FiniteRep {
        let q = Quiver::a2();
        let modules: BTreeMap<VertexId, FinModule> = [
            (VertexId(1), FinModule::new(ring, m1.to_vec()).unwrap()),
            (VertexId(2), FinModule::new(ring, m2.to_vec()).unwrap()),
        ]
        .into();
        let map = ModuleMap::new(
            modules[&VertexId(1)].clone(),
            modules[&VertexId(2)].clone(),
            entries,
        )
        .unwrap();
        FiniteRep::new(q, ring, modules, [(ArrowId(1), map)].into()).unwrap()
    }

    #[test]
    fn local_test_reference_cases() {
        // (k -id-> k) over A2, F2: injective
        let x = a2_rep(f2(), &[1], &[1], vec![1]);
        let v = local_test_finite(&x).unwrap();
        assert!(v.is_injective());

        // (0 -> k): source map at 1 is 0 -> k, not epi
        let q = Quiver::a2();
        let zero = FinModule::zero(f2());
        let k = FinModule::free(f2(), 1);
        let x = FiniteRep::new(
            q,
            f2(),
            [(VertexId(1), zero.clone()), (VertexId(2), k.clone())].into(),
            [(ArrowId(1), ModuleMap::zero(&zero, &k))].into(),
        )
        .unwrap();
        let v = local_test_finite(&x).unwrap();
        match &v.overall {
            Overall::NotInjective { site, failure } => {
                assert_eq!(*site, SiteId::Vertex { vertex: VertexId(1) });
                assert_eq!(
                    *failure,
                    SiteFailure::SourceMap(SplitFailure::NotSurjective)
                );
            }
            _ => panic!("must fail"),
        }

        // (Z/2 -id-> Z/2) over Z/4: vertex modules not injective
        let x = a2_rep(z4(), &[1], &[1], vec![1]);
        let v = local_test_finite(&x).unwrap();
        match &v.overall {
            Overall::NotInjective { failure, .. } => {
                assert_eq!(*failure, SiteFailure::ModuleNotInjective);
            }
            _ => panic!("must fail"),
        }
    }

    #[test]
    fn local_pass_on_unknown_quiver() {
        // loop quiver, X(v) = Z/4, X(a) = id: locally fine, quiver Unknown
        let q = Quiver::single_loop();
        let m = FinModule::new(z4(), vec![2]).unwrap();
        let x = FiniteRep::new(
            q,
            z4(),
            [(VertexId(1), m.clone())].into(),
            [(ArrowId(1), ModuleMap::identity(&m))].into(),
        )
        .unwrap();
        let v = local_test_finite(&x).unwrap();
        assert_eq!(v.overall, Overall::LocalPassButQuiverUnknown);
    }

    #[test]
    fn chain_local_test() {
        // constant chain on an injective module: injective
        let e = FinModule::new(z4(), vec![2]).unwrap();
        let v = local_test_chain(&ChainRep::constant(e.clone())).unwrap();
        assert!(v.is_injective());

        // 0 -> E -> E -> ...: the stage-0 map 0 -> E is not epi
        let zero = FinModule::zero(z4());
        let c = ChainRep::new(
            z4(),
            vec![zero.clone()],
            vec![ModuleMap::zero(&zero, &e)],
            TS::EventuallyIso(e.clone()),
        )
        .unwrap();
        let v = local_test_chain(&c).unwrap();
        match v.overall {
            Overall::NotInjective { site, .. } => {
                assert_eq!(site, SiteId::Stage { stage: 0 });
            }
            _ => panic!("must fail at stage 0"),
        }
    }
}
