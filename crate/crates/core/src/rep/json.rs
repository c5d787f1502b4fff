//! Wire schema for representations: the quiver document extended with
//! "modules" and "maps" (matrices as row-major integer arrays) and an
//! optional "tail" (plus per-ray blocks for forests). The coefficient ring
//! travels out of band (CLI flag), not in the file.

use super::chain::{ChainRep, ForestRep, TailSpec};
use super::{FiniteRep, Representation};
use crate::error::{Error, Result};
use crate::quiver::{ArrowId, InfiniteQuiverDescriptor, QuiverDoc, QuiverShape, VertexId};
use crate::ring::{BaseRing, FinModule, ModuleMap};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixDoc {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<i64>,
}

impl MatrixDoc {
    pub fn of(map: &ModuleMap) -> MatrixDoc {
        MatrixDoc {
            rows: map.codomain().rank(),
            cols: map.domain().rank(),
            entries: map.entries().iter().map(|&e| e as i64).collect(),
        }
    }

    pub fn to_map(&self, domain: FinModule, codomain: FinModule) -> Result<ModuleMap> {
        if self.rows != codomain.rank() || self.cols != domain.rank() {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{}, modules need {}x{}",
                self.rows,
                self.cols,
                codomain.rank(),
                domain.rank()
            )));
        }
        ModuleMap::new(
            domain,
            codomain,
            self.entries.iter().map(|&e| e as i128).collect(),
        )
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TailDoc {
    EventuallyZero,
    EventuallyIso {
        module: Vec<u32>,
    },
    EventuallyPeriodic {
        modules: Vec<Vec<u32>>,
        maps: Vec<MatrixDoc>,
    },
}

impl TailDoc {
    fn of(tail: &TailSpec) -> TailDoc {
        match tail {
            TailSpec::EventuallyZero => TailDoc::EventuallyZero,
            TailSpec::EventuallyIso(e) => TailDoc::EventuallyIso {
                module: e.invariants().to_vec(),
            },
            TailSpec::EventuallyPeriodic(ps) => TailDoc::EventuallyPeriodic {
                modules: ps.iter().map(|p| p.domain().invariants().to_vec()).collect(),
                maps: ps.iter().map(MatrixDoc::of).collect(),
            },
        }
    }

    fn to_tail(&self, ring: BaseRing) -> Result<TailSpec> {
        match self {
            TailDoc::EventuallyZero => Ok(TailSpec::EventuallyZero),
            TailDoc::EventuallyIso { module } => Ok(TailSpec::EventuallyIso(FinModule::new(
                ring,
                module.clone(),
            )?)),
            TailDoc::EventuallyPeriodic { modules, maps } => {
                if modules.len() != maps.len() || modules.is_empty() {
                    return Err(Error::Validation("periodic tail needs one map per module".into()));
                }
                let mods: Vec<FinModule> = modules
                    .iter()
                    .map(|inv| FinModule::new(ring, inv.clone()))
                    .collect::<Result<_>>()?;
                let ps = maps
                    .iter()
                    .enumerate()
                    .map(|(i, m)| {
                        m.to_map(mods[i].clone(), mods[(i + 1) % mods.len()].clone())
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(TailSpec::EventuallyPeriodic(ps))
            }
        }
    }
}

/// Per-ray block of a forest representation. Stage 0 repeats the module at
/// the attachment vertex.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RayRepDoc {
    pub modules: BTreeMap<String, Vec<u32>>,
    pub maps: BTreeMap<String, MatrixDoc>,
    pub tail: TailDoc,
}

/// A representation document: the quiver fields plus modules and maps.
/// For finite quivers the keys are vertex/arrow ids; for chain descriptors
/// they are stage indices and a tail is required.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RepDoc {
    #[serde(flatten)]
    pub quiver: QuiverDoc,
    pub modules: BTreeMap<String, Vec<u32>>,
    pub maps: BTreeMap<String, MatrixDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rays: Option<BTreeMap<String, RayRepDoc>>,
}

fn parse_key(key: &str) -> Result<u32> {
    key.parse::<u32>()
        .map_err(|_| Error::Validation(format!("key {key:?} is not an id")))
}

fn chain_from_parts(
    ring: BaseRing,
    modules: &BTreeMap<String, Vec<u32>>,
    maps: &BTreeMap<String, MatrixDoc>,
    tail: &TailDoc,
) -> Result<ChainRep> {
    let tail = tail.to_tail(ring)?;
    let mut stages: BTreeMap<u32, FinModule> = BTreeMap::new();
    for (key, inv) in modules {
        stages.insert(parse_key(key)?, FinModule::new(ring, inv.clone())?);
    }
    let n0 = stages.len();
    for i in 0..n0 {
        if !stages.contains_key(&(i as u32)) {
            return Err(Error::Validation(format!("chain stages must be 0..{n0}, missing {i}")));
        }
    }
    let prefix: Vec<FinModule> = (0..n0).map(|i| stages[&(i as u32)].clone()).collect();
    let probe = ChainRep::new(
        ring,
        prefix.clone(),
        // placeholder maps validated below; build the real ones now
        Vec::new(),
        tail.clone(),
    );
    drop(probe);
    let mut chain_maps = Vec::new();
    for i in 0..n0 {
        let doc = maps
            .get(&i.to_string())
            .ok_or_else(|| Error::Validation(format!("missing chain map at stage {i}")))?;
        let domain = prefix[i].clone();
        let codomain = if i + 1 < n0 {
            prefix[i + 1].clone()
        } else {
            match &tail {
                TailSpec::EventuallyZero => FinModule::zero(ring),
                TailSpec::EventuallyIso(e) => e.clone(),
                TailSpec::EventuallyPeriodic(ps) => ps[0].domain().clone(),
            }
        };
        chain_maps.push(doc.to_map(domain, codomain)?);
    }
    ChainRep::new(ring, prefix, chain_maps, tail)
}

fn chain_to_parts(
    chain: &ChainRep,
) -> (BTreeMap<String, Vec<u32>>, BTreeMap<String, MatrixDoc>, TailDoc) {
    let modules = (0..chain.prefix_len())
        .map(|i| (i.to_string(), chain.stage_module(i).invariants().to_vec()))
        .collect();
    let maps = (0..chain.prefix_len())
        .map(|i| (i.to_string(), MatrixDoc::of(&chain.stage_map(i))))
        .collect();
    (modules, maps, TailDoc::of(chain.tail()))
}

impl RepDoc {
    pub fn of(rep: &Representation) -> RepDoc {
        match rep {
            Representation::Finite(x) => RepDoc {
                quiver: QuiverShape::Finite(x.quiver().clone()).to_doc(),
                modules: x
                    .modules()
                    .iter()
                    .map(|(v, m)| (v.to_string(), m.invariants().to_vec()))
                    .collect(),
                maps: x
                    .maps()
                    .iter()
                    .map(|(a, f)| (a.to_string(), MatrixDoc::of(f)))
                    .collect(),
                tail: None,
                rays: None,
            },
            Representation::Chain(c) => {
                let (modules, maps, tail) = chain_to_parts(c);
                RepDoc {
                    quiver: QuiverShape::Descriptor(InfiniteQuiverDescriptor::AInfPlus).to_doc(),
                    modules,
                    maps,
                    tail: Some(tail),
                    rays: None,
                }
            }
            Representation::Forest(f) => {
                let rays_meta: Vec<crate::quiver::RayAttachment> = f
                    .rays()
                    .iter()
                    .map(|(id, (attach, _))| crate::quiver::RayAttachment {
                        attach: *attach,
                        ray_id: *id,
                    })
                    .collect();
                let shape = QuiverShape::Descriptor(InfiniteQuiverDescriptor::BarrenForest {
                    core: f.core().quiver().clone(),
                    rays: rays_meta,
                });
                RepDoc {
                    quiver: shape.to_doc(),
                    modules: f
                        .core()
                        .modules()
                        .iter()
                        .map(|(v, m)| (v.to_string(), m.invariants().to_vec()))
                        .collect(),
                    maps: f
                        .core()
                        .maps()
                        .iter()
                        .map(|(a, m)| (a.to_string(), MatrixDoc::of(m)))
                        .collect(),
                    tail: None,
                    rays: Some(
                        f.rays()
                            .iter()
                            .map(|(id, (_, chain))| {
                                let (modules, maps, tail) = chain_to_parts(chain);
                                (id.to_string(), RayRepDoc { modules, maps, tail })
                            })
                            .collect(),
                    ),
                }
            }
        }
    }

    pub fn to_representation(&self, ring: BaseRing) -> Result<Representation> {
        let shape = QuiverShape::from_doc(&self.quiver)?;
        match shape {
            QuiverShape::Finite(quiver) => {
                let mut modules = BTreeMap::new();
                for (key, inv) in &self.modules {
                    modules.insert(VertexId(parse_key(key)?), FinModule::new(ring, inv.clone())?);
                }
                let mut maps = BTreeMap::new();
                for (key, doc) in &self.maps {
                    let id = ArrowId(parse_key(key)?);
                    let arrow = quiver.arrow(id)?;
                    let dom = modules
                        .get(&arrow.src)
                        .ok_or_else(|| Error::ShapeMismatch(format!("no module at {}", arrow.src)))?
                        .clone();
                    let cod = modules
                        .get(&arrow.tgt)
                        .ok_or_else(|| Error::ShapeMismatch(format!("no module at {}", arrow.tgt)))?
                        .clone();
                    maps.insert(id, doc.to_map(dom, cod)?);
                }
                Ok(Representation::Finite(FiniteRep::new(
                    quiver, ring, modules, maps,
                )?))
            }
            QuiverShape::Descriptor(InfiniteQuiverDescriptor::AInfPlus) => {
                let tail = self.tail.as_ref().ok_or(Error::TailUnderspecified)?;
                Ok(Representation::Chain(chain_from_parts(
                    ring,
                    &self.modules,
                    &self.maps,
                    tail,
                )?))
            }
            QuiverShape::Descriptor(InfiniteQuiverDescriptor::BarrenForest { core, rays }) => {
                let mut modules = BTreeMap::new();
                for (key, inv) in &self.modules {
                    modules.insert(VertexId(parse_key(key)?), FinModule::new(ring, inv.clone())?);
                }
                let mut maps = BTreeMap::new();
                for (key, doc) in &self.maps {
                    let id = ArrowId(parse_key(key)?);
                    let arrow = core.arrow(id)?;
                    let dom = modules[&arrow.src].clone();
                    let cod = modules[&arrow.tgt].clone();
                    maps.insert(id, doc.to_map(dom, cod)?);
                }
                let core_rep = FiniteRep::new(core, ring, modules, maps)?;
                let ray_docs = self.rays.as_ref().ok_or(Error::TailUnderspecified)?;
                let mut ray_reps = BTreeMap::new();
                for meta in &rays {
                    let doc = ray_docs
                        .get(&meta.ray_id.to_string())
                        .ok_or(Error::TailUnderspecified)?;
                    let chain = chain_from_parts(ring, &doc.modules, &doc.maps, &doc.tail)?;
                    ray_reps.insert(meta.ray_id, (meta.attach, chain));
                }
                Ok(Representation::Forest(ForestRep::new(core_rep, ray_reps)?))
            }
            QuiverShape::Descriptor(InfiniteQuiverDescriptor::AInfBoth) => {
                Err(Error::QuiverUnsupported(
                    "two-sided chain representations have no file form".into(),
                ))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("rep doc serializes")
    }

    pub fn from_json(text: &str) -> Result<RepDoc> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::Quiver;

    fn z4() -> BaseRing {
        BaseRing::ZmodPk { p: 2, k: 2 }
    }

    #[test]
    fn finite_rep_round_trip() {
        let q = Quiver::a2();
        let m = FinModule::new(z4(), vec![2]).unwrap();
        let x = FiniteRep::new(
            q,
            z4(),
            [(VertexId(1), m.clone()), (VertexId(2), m.clone())].into(),
            [(ArrowId(1), ModuleMap::new(m.clone(), m.clone(), vec![2]).unwrap())].into(),
        )
        .unwrap();
        let doc = RepDoc::of(&Representation::Finite(x.clone()));
        let text = doc.to_json();
        let back = RepDoc::from_json(&text).unwrap();
        match back.to_representation(z4()).unwrap() {
            Representation::Finite(y) => assert_eq!(y, x),
            _ => panic!("wrong variant"),
        }
        assert_eq!(RepDoc::from_json(&text).unwrap().to_json(), text);
    }

    #[test]
    fn chain_rep_round_trip_and_missing_tail() {
        let m = FinModule::new(z4(), vec![2]).unwrap();
        let chain = ChainRep::new(
            z4(),
            vec![m.clone()],
            vec![ModuleMap::identity(&m)],
            TailSpec::EventuallyIso(m.clone()),
        )
        .unwrap();
        let doc = RepDoc::of(&Representation::Chain(chain.clone()));
        let back = RepDoc::from_json(&doc.to_json()).unwrap();
        match back.to_representation(z4()).unwrap() {
            Representation::Chain(c) => assert_eq!(c, chain),
            _ => panic!("wrong variant"),
        }
        // descriptor without a tail is underspecified
        let no_tail = r#"{"vertices":[],"arrows":[],"descriptor":{"kind":"a_inf_plus"},"modules":{},"maps":{}}"#;
        let doc = RepDoc::from_json(no_tail).unwrap();
        assert!(matches!(
            doc.to_representation(z4()),
            Err(Error::TailUnderspecified)
        ));
    }
}
