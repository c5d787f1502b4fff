//! Decomposition of injective representations of trees (field base) into
//! the indecomposables attached to vertices and to vertices at infinity.
//!
//! Peeling is top-down: at each vertex the kernel of the source map counts
//! the copies seeded there; whatever survives to the far end of a ray
//! belongs to the vertex at infinity. The rebuilt direct sum comes with an
//! explicit isomorphism, constructed by transporting each kernel backwards
//! along sections of the source maps; the multiset is unique because the
//! kernels are basis-independent.

use super::{local_test_chain, local_test_finite};
use crate::adjoint::{e_star_chain, e_star_finite, EStarTarget};
use crate::error::{Error, Result};
use crate::quiver::{QuiverShape, VertexId};
use crate::rep::{
    chain_direct_sum, ChainMorphism, ChainMorphismTail, ChainRep, FiniteRep, RepMorphism,
    Representation, TailSpec,
};
use crate::ring::{solve_section, FinModule, ModuleMap};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "at", rename_all = "snake_case")]
pub enum DecompTarget {
    Vertex { vertex: VertexId },
    Stage { stage: usize },
    Ray { ray: u32 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompEntry {
    pub target: DecompTarget,
    /// The indecomposable seed (the one-dimensional module, over a field).
    pub seed: Vec<u32>,
    pub multiplicity: u32,
}

/// The decomposition multiset plus a rebuilt model and a verified
/// isomorphism onto the input.
pub enum DecompositionResult {
    Finite {
        entries: Vec<DecompEntry>,
        rebuilt: FiniteRep,
        iso: RepMorphism,
    },
    Chain {
        entries: Vec<DecompEntry>,
        rebuilt: ChainRep,
        iso: ChainMorphism,
    },
}

impl DecompositionResult {
    pub fn entries(&self) -> &[DecompEntry] {
        match self {
            DecompositionResult::Finite { entries, .. } => entries,
            DecompositionResult::Chain { entries, .. } => entries,
        }
    }
}

pub fn decompose_injective_tree(rep: &Representation) -> Result<DecompositionResult> {
    match rep {
        Representation::Finite(x) => decompose_finite_tree(x),
        Representation::Chain(c) => decompose_chain(c),
        Representation::Forest(_) => Err(Error::QuiverUnsupported(
            "decomposition is implemented for finite trees and the one-ray chain".into(),
        )),
    }
}

fn decompose_finite_tree(x: &FiniteRep) -> Result<DecompositionResult> {
    if !x.ring().is_field() {
        return Err(Error::NonFieldBase);
    }
    let shape = QuiverShape::Finite(x.quiver().clone());
    let tree = crate::quiver::tree_structure(&shape)?;
    let verdict = local_test_finite(x)?;
    if !verdict.is_injective() {
        return Err(Error::NotInjective(format!("{:?}", verdict.overall)));
    }
    let k_seed = FinModule::free(x.ring(), 1);

    // per-vertex sections of the source maps and kernels
    let mut sections: BTreeMap<VertexId, ModuleMap> = BTreeMap::new();
    let mut arrow_sections: BTreeMap<crate::quiver::ArrowId, ModuleMap> = BTreeMap::new();
    let mut kernels: BTreeMap<VertexId, (FinModule, ModuleMap)> = BTreeMap::new();
    for v in x.quiver().vertices() {
        let src = x.source_map(v);
        let section = solve_section(&src.map)
            .ok_or_else(|| Error::Internal("injective representation must split".into()))?;
        for (i, a) in src.arrows.iter().enumerate() {
            arrow_sections.insert(a.id, section.compose(&src.injections[i])?);
        }
        kernels.insert(v, src.map.kernel());
        sections.insert(v, section);
    }

    // pieces seeded at each vertex with a nonzero kernel
    let mut entries = Vec::new();
    let mut pieces: Vec<(FiniteRep, BTreeMap<VertexId, ModuleMap>)> = Vec::new();
    for v in x.quiver().vertices() {
        let (kernel, kappa) = kernels[&v].clone();
        if kernel.is_zero() {
            continue;
        }
        entries.push(DecompEntry {
            target: DecompTarget::Vertex { vertex: v },
            seed: k_seed.invariants().to_vec(),
            multiplicity: kernel.rank() as u32,
        });
        let piece = e_star_finite(x.quiver(), x.ring(), v, &kernel)?.rep;
        // transport the kernel backwards along the root path
        let path = &tree.paths_from_root[&v];
        let mut components: BTreeMap<VertexId, ModuleMap> = x
            .quiver()
            .vertices()
            .map(|u| (u, ModuleMap::zero(piece.module(u), x.module(u))))
            .collect();
        let mut at = v;
        let mut psi = kappa;
        components.insert(at, psi.clone());
        for aid in path.iter().rev() {
            let arrow = x.quiver().arrow(*aid)?;
            psi = arrow_sections[aid].compose(&psi)?;
            at = arrow.src;
            components.insert(at, psi.clone());
        }
        pieces.push((piece, components));
    }

    // fold the direct sum, tracking projections onto each piece
    let mut rebuilt = FiniteRep::zero(x.quiver().clone(), x.ring());
    let mut projections: Vec<RepMorphism> = Vec::new();
    for (piece, _) in &pieces {
        let rs = rebuilt.direct_sum(piece)?;
        for p in projections.iter_mut() {
            *p = p.compose(&rs.proj_left)?;
        }
        projections.push(rs.proj_right);
        rebuilt = rs.sum;
    }
    let mut iso_components: BTreeMap<VertexId, ModuleMap> = x
        .quiver()
        .vertices()
        .map(|u| (u, ModuleMap::zero(rebuilt.module(u), x.module(u))))
        .collect();
    for ((_, psi), proj) in pieces.iter().zip(&projections) {
        for u in x.quiver().vertices() {
            let term = psi[&u].compose(proj.component(u))?;
            let acc = iso_components[&u].add(&term)?;
            iso_components.insert(u, acc);
        }
    }
    let iso = RepMorphism::new(rebuilt.clone(), x.clone(), iso_components)?;
    if !iso.is_iso() {
        return Err(Error::Internal("rebuilt sum is not isomorphic to the input".into()));
    }
    Ok(DecompositionResult::Finite {
        entries,
        rebuilt,
        iso,
    })
}

fn decompose_chain(x: &ChainRep) -> Result<DecompositionResult> {
    if !x.ring().is_field() {
        return Err(Error::NonFieldBase);
    }
    if !x.tail().is_stable() {
        return Err(Error::UnsupportedTail("decomposition needs zero/iso tails".into()));
    }
    let verdict = local_test_chain(x)?;
    if !verdict.is_injective() {
        return Err(Error::NotInjective(format!("{:?}", verdict.overall)));
    }
    let k_seed = FinModule::free(x.ring(), 1);
    let h = x.horizon();
    let mut sections: Vec<ModuleMap> = Vec::new();
    for n in 0..=h {
        sections.push(
            solve_section(&x.stage_map(n))
                .ok_or_else(|| Error::Internal("injective chain must split".into()))?,
        );
    }
    let mut entries = Vec::new();
    // (piece chain, components at stages 0..=h, constant beyond)
    let mut pieces: Vec<(ChainRep, Vec<ModuleMap>)> = Vec::new();
    for n in 0..h {
        let (kernel, kappa) = x.stage_map(n).kernel();
        if kernel.is_zero() {
            continue;
        }
        entries.push(DecompEntry {
            target: DecompTarget::Stage { stage: n },
            seed: k_seed.invariants().to_vec(),
            multiplicity: kernel.rank() as u32,
        });
        let piece = e_star_chain(&EStarTarget::Stage(n), &kernel)?;
        let mut comps: Vec<ModuleMap> =
            (0..=h).map(|i| ModuleMap::zero(&piece.stage_module(i), &x.stage_module(i))).collect();
        let mut psi = kappa;
        comps[n] = psi.clone();
        for i in (0..n).rev() {
            psi = sections[i].compose(&psi)?;
            comps[i] = psi.clone();
        }
        pieces.push((piece, comps));
    }
    if let TailSpec::EventuallyIso(e) = x.tail() {
        if !e.is_zero() {
            entries.push(DecompEntry {
                target: DecompTarget::Ray { ray: 0 },
                seed: k_seed.invariants().to_vec(),
                multiplicity: e.rank() as u32,
            });
            let piece = e_star_chain(&EStarTarget::Ray(0), e)?;
            let mut comps: Vec<ModuleMap> = Vec::new();
            let mut psi = ModuleMap::identity(e);
            comps.resize(h + 1, psi.clone());
            comps[h] = psi.clone();
            for i in (0..h).rev() {
                psi = sections[i].compose(&psi)?;
                comps[i] = psi.clone();
            }
            pieces.push((piece, comps));
        }
    }

    let mut rebuilt = ChainRep::zero(x.ring());
    let mut projections: Vec<ChainMorphism> = Vec::new();
    for (piece, _) in &pieces {
        let (sum, [_, _, proj_left, proj_right]) = chain_direct_sum(&rebuilt, piece)?;
        for p in projections.iter_mut() {
            *p = p.compose(&proj_left)?;
        }
        projections.push(proj_right);
        rebuilt = sum;
    }
    let mut iso_components: Vec<ModuleMap> = (0..=h + 1)
        .map(|n| ModuleMap::zero(&rebuilt.stage_module(n), &x.stage_module(n)))
        .collect();
    for ((_, psi), proj) in pieces.iter().zip(&projections) {
        for (n, slot) in iso_components.iter_mut().enumerate() {
            let part = if n < psi.len() {
                psi[n].clone()
            } else {
                psi.last().expect("nonempty").clone()
            };
            *slot = slot.add(&part.compose(&proj.component(n))?)?;
        }
    }
    let iso = ChainMorphism::new(
        rebuilt.clone(),
        x.clone(),
        iso_components,
        ChainMorphismTail::Constant,
    )?;
    if !iso.is_iso() {
        return Err(Error::Internal("rebuilt chain is not isomorphic to the input".into()));
    }
    Ok(DecompositionResult::Chain {
        entries,
        rebuilt,
        iso,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quiver::{ArrowId, Quiver};
    use crate::rep::TailSpec;
    use crate::ring::BaseRing;

    fn f2() -> BaseRing {
        BaseRing::FiniteField { p: 2, e: 1 }
    }

    #[test]
    fn decompose_reference_case_a2() {
        // X = (k² -[1 0]-> k): one copy seeded at vertex 1, one at vertex 2
        let k1 = FinModule::free(f2(), 2);
        let k2 = FinModule::free(f2(), 1);
        let map = ModuleMap::new(k1.clone(), k2.clone(), vec![1, 0]).unwrap();
        let x = FiniteRep::new(
            Quiver::a2(),
            f2(),
            [(VertexId(1), k1), (VertexId(2), k2)].into(),
            [(ArrowId(1), map)].into(),
        )
        .unwrap();
        let d = decompose_injective_tree(&Representation::Finite(x)).unwrap();
        assert_eq!(
            d.entries()
                .iter()
                .map(|e| (e.target, e.multiplicity))
                .collect::<Vec<_>>(),
            vec![
                (DecompTarget::Vertex { vertex: VertexId(1) }, 1),
                (DecompTarget::Vertex { vertex: VertexId(2) }, 1),
            ]
        );
    }

    #[test]
    fn decompose_zero_and_constant_chain() {
        let zero = FiniteRep::zero(Quiver::a2(), f2());
        let d = decompose_injective_tree(&Representation::Finite(zero)).unwrap();
        assert!(d.entries().is_empty());

        // E -> E -> ... with E = k: exactly the ray indecomposable
        let e = FinModule::free(f2(), 1);
        let chain = ChainRep::constant(e);
        let d = decompose_injective_tree(&Representation::Chain(chain)).unwrap();
        assert_eq!(d.entries().len(), 1);
        assert_eq!(d.entries()[0].target, DecompTarget::Ray { ray: 0 });
        assert_eq!(d.entries()[0].multiplicity, 1);
    }

    #[test]
    fn non_field_base_is_rejected() {
        let z4 = BaseRing::ZmodPk { p: 2, k: 2 };
        let m = FinModule::new(z4, vec![2]).unwrap();
        let x = FiniteRep::new(
            Quiver::a2(),
            z4,
            [(VertexId(1), m.clone()), (VertexId(2), m.clone())].into(),
            [(ArrowId(1), ModuleMap::identity(&m))].into(),
        )
        .unwrap();
        assert!(matches!(
            decompose_injective_tree(&Representation::Finite(x)),
            Err(Error::NonFieldBase)
        ));
    }

    #[test]
    fn chain_with_finite_support_decomposes() {
        // k -> k -> 0 -> ... (identity then zero): one piece at stage 1
        let k = FinModule::free(f2(), 1);
        let chain = ChainRep::new(
            f2(),
            vec![k.clone(), k.clone()],
            vec![
                ModuleMap::identity(&k),
                ModuleMap::zero(&k, &FinModule::zero(f2())),
            ],
            TailSpec::EventuallyZero,
        )
        .unwrap();
        let d = decompose_injective_tree(&Representation::Chain(chain)).unwrap();
        assert_eq!(d.entries().len(), 1);
        assert_eq!(d.entries()[0].target, DecompTarget::Stage { stage: 1 });
    }
}
