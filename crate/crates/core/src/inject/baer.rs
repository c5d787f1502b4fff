//! Brute-force injectivity oracle for representations of finite acyclic
//! quivers, independent of the local criteria.
//!
//! The free representation G = ⊕_w P_w (basis: all paths, graded by their
//! endpoint) is a generator of the category, so a representation X is
//! injective iff every morphism S → X from every subrepresentation S ⊆ G
//! extends to G. Extendability is decided by counting: the restriction
//! Hom(G, X) → Hom(S, X) is onto iff |Hom(G,X)| / |kernel| = |Hom(S,X)|.

use crate::error::{Error, Result};
use crate::quiver::{Path, Quiver, VertexId};
use crate::rep::FiniteRep;
use crate::ring::{
    submodule_element_sets, submodule_from_elements, BaseRing, FinModule, MapExpr, MapSystem,
    ModuleMap,
};
use crate::Budget;
use std::collections::BTreeMap;

/// The generator representation and its subrepresentation lattice, cached
/// per (quiver, ring) so that batches of oracle calls share the setup.
pub struct BaerContext {
    generator: FiniteRep,
    /// Subrepresentations as (rep, inclusion components).
    subreps: Vec<(FiniteRep, BTreeMap<VertexId, ModuleMap>)>,
}

impl BaerContext {
    pub fn new(quiver: &Quiver, ring: BaseRing, budget: Budget) -> Result<BaerContext> {
        if !quiver.is_acyclic() {
            return Err(Error::QuiverUnsupported(
                "the path algebra is infinite on a cyclic quiver".into(),
            ));
        }
        // G(v) is free on all paths ending at v.
        let mut basis: BTreeMap<VertexId, Vec<(VertexId, Path)>> = BTreeMap::new();
        for v in quiver.vertices() {
            let mut items = Vec::new();
            for w in quiver.vertices() {
                for p in quiver.paths(w, v, None)? {
                    items.push((w, p));
                }
            }
            items.sort();
            basis.insert(v, items);
        }
        let modules: BTreeMap<VertexId, FinModule> = basis
            .iter()
            .map(|(&v, items)| (v, FinModule::free(ring, items.len())))
            .collect();
        let mut maps = BTreeMap::new();
        for arrow in quiver.arrows() {
            let src_items = &basis[&arrow.src];
            let tgt_items = &basis[&arrow.tgt];
            let rows = tgt_items.len();
            let cols = src_items.len();
            let mut entries = vec![0i128; rows * cols];
            for (j, (w, p)) in src_items.iter().enumerate() {
                let mut extended = p.clone();
                extended.push(arrow.id);
                let i = tgt_items
                    .iter()
                    .position(|(w2, p2)| w2 == w && p2 == &extended)
                    .ok_or_else(|| Error::Internal("extended path must be a basis item".into()))?;
                entries[i * cols + j] = 1;
            }
            maps.insert(
                arrow.id,
                ModuleMap::new(
                    modules[&arrow.src].clone(),
                    modules[&arrow.tgt].clone(),
                    entries,
                )?,
            );
        }
        let generator = FiniteRep::new(quiver.clone(), ring, modules, maps)?;
        let subreps = enumerate_subreps(&generator, budget)?;
        Ok(BaerContext { generator, subreps })
    }

    pub fn generator(&self) -> &FiniteRep {
        &self.generator
    }

    pub fn subrep_count(&self) -> usize {
        self.subreps.len()
    }

    /// The Baer test for X over the same quiver and ring.
    pub fn is_injective(&self, x: &FiniteRep) -> Result<bool> {
        if x.quiver() != self.generator.quiver() || x.ring() != self.generator.ring() {
            return Err(Error::ShapeMismatch("oracle context mismatch".into()));
        }
        let hom_g = count_natural(&self.generator, x, None)?;
        for (s, incl) in &self.subreps {
            let hom_s = count_natural(s, x, None)?;
            let killed = count_natural(&self.generator, x, Some((s, incl)))?;
            debug_assert!(killed > 0);
            if hom_g / killed != hom_s {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// |Hom(Y, X)|, or, when `vanish_on` is set, the number of natural maps
/// Y → X vanishing on the given subrepresentation.
fn count_natural(
    y: &FiniteRep,
    x: &FiniteRep,
    vanish_on: Option<(&FiniteRep, &BTreeMap<VertexId, ModuleMap>)>,
) -> Result<u128> {
    let mut sys = MapSystem::new(y.ring());
    let mut index = BTreeMap::new();
    for v in y.quiver().vertices() {
        index.insert(v, sys.add_unknown(y.module(v), x.module(v)));
    }
    for a in y.quiver().arrows() {
        let expr = MapExpr::composed(Some(x.map(a.id)), index[&a.src], None).minus(
            MapExpr::composed(None, index[&a.tgt], Some(y.map(a.id))),
        );
        sys.add_equation(expr, ModuleMap::zero(y.module(a.src), x.module(a.tgt)))?;
    }
    if let Some((s, incl)) = vanish_on {
        for v in y.quiver().vertices() {
            sys.add_equation(
                MapExpr::composed(None, index[&v], Some(&incl[&v])),
                ModuleMap::zero(s.module(v), x.module(v)),
            )?;
        }
    }
    Ok(sys.count_solutions())
}

/// All subrepresentations of `g`: per-vertex submodules closed under the
/// arrow maps, assembled with pruning.
fn enumerate_subreps(
    g: &FiniteRep,
    budget: Budget,
) -> Result<Vec<(FiniteRep, BTreeMap<VertexId, ModuleMap>)>> {
    let vertices: Vec<VertexId> = g.quiver().vertices().collect();
    let mut per_vertex: BTreeMap<VertexId, Vec<Vec<Vec<u64>>>> = BTreeMap::new();
    for &v in &vertices {
        per_vertex.insert(v, submodule_element_sets(g.module(v), budget)?);
    }
    let mut choices: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut out = Vec::new();
    assemble(
        g,
        &vertices,
        0,
        &per_vertex,
        &mut choices,
        &mut out,
        budget,
    )?;
    Ok(out
        .into_iter()
        .map(|sets| build_subrep(g, &sets))
        .collect::<Result<Vec<_>>>()?)
}

fn assemble(
    g: &FiniteRep,
    vertices: &[VertexId],
    at: usize,
    per_vertex: &BTreeMap<VertexId, Vec<Vec<Vec<u64>>>>,
    choices: &mut BTreeMap<VertexId, usize>,
    out: &mut Vec<BTreeMap<VertexId, Vec<Vec<u64>>>>,
    budget: Budget,
) -> Result<()> {
    if at == vertices.len() {
        budget.check(out.len() as u128 + 1)?;
        out.push(
            choices
                .iter()
                .map(|(&v, &i)| (v, per_vertex[&v][i].clone()))
                .collect(),
        );
        return Ok(());
    }
    let v = vertices[at];
    'next: for i in 0..per_vertex[&v].len() {
        choices.insert(v, i);
        // closure under every arrow whose endpoints are both chosen
        for a in g.quiver().arrows() {
            let (Some(&si), Some(&ti)) = (choices.get(&a.src), choices.get(&a.tgt)) else {
                continue;
            };
            let src_set = &per_vertex[&a.src][si];
            let tgt_set = &per_vertex[&a.tgt][ti];
            for x in src_set {
                let y = g.map(a.id).apply(x);
                if !tgt_set.contains(&y) {
                    continue 'next;
                }
            }
        }
        assemble(g, vertices, at + 1, per_vertex, choices, out, budget)?;
    }
    choices.remove(&v);
    Ok(())
}

fn build_subrep(
    g: &FiniteRep,
    sets: &BTreeMap<VertexId, Vec<Vec<u64>>>,
) -> Result<(FiniteRep, BTreeMap<VertexId, ModuleMap>)> {
    let mut modules = BTreeMap::new();
    let mut incls = BTreeMap::new();
    for (&v, elems) in sets {
        let (s, incl) = submodule_from_elements(g.module(v), elems);
        modules.insert(v, s);
        incls.insert(v, incl);
    }
    let mut maps = BTreeMap::new();
    for a in g.quiver().arrows() {
        let rhs = g.map(a.id).compose(&incls[&a.src])?;
        let mut sys = MapSystem::new(g.ring());
        let u = sys.add_unknown(&modules[&a.src], &modules[&a.tgt]);
        sys.add_equation(MapExpr::composed(Some(&incls[&a.tgt]), u, None), rhs)?;
        let sol = sys
            .solve()
            .ok_or_else(|| Error::Internal("subrep arrow map must exist (closure)".into()))?;
        maps.insert(a.id, sol.into_iter().next().expect("one unknown"));
    }
    let rep = FiniteRep::new(g.quiver().clone(), g.ring(), modules, maps)?;
    Ok((rep, incls))
}

/// One-shot Baer oracle (prefer `BaerContext` for batches).
pub fn baer_oracle(x: &FiniteRep, budget: Budget) -> Result<bool> {
    BaerContext::new(x.quiver(), x.ring(), budget)?.is_injective(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjoint::e_star_finite;
    use crate::quiver::ArrowId;

    fn f2() -> BaseRing {
        BaseRing::FiniteField { p: 2, e: 1 }
    }

    #[test]
    fn baer_reference_cases() {
        let q = Quiver::a2();
        let ctx = BaerContext::new(&q, f2(), Budget::default()).unwrap();
        // the generator over A2/F2 is 3-dimensional in total
        let total: usize = ctx
            .generator()
            .modules()
            .values()
            .map(|m| m.rank())
            .sum();
        assert_eq!(total, 3);

        // e_*²(k) = (k -id-> k) is injective
        let k = FinModule::free(f2(), 1);
        let e = e_star_finite(&q, f2(), VertexId(2), &k).unwrap().rep;
        assert!(ctx.is_injective(&e).unwrap());

        // (0 -> k) is not
        let zero = FinModule::zero(f2());
        let bad = FiniteRep::new(
            q.clone(),
            f2(),
            [(VertexId(1), zero.clone()), (VertexId(2), k.clone())].into(),
            [(ArrowId(1), ModuleMap::zero(&zero, &k))].into(),
        )
        .unwrap();
        assert!(!ctx.is_injective(&bad).unwrap());

        // the zero representation is vacuously injective
        assert!(ctx.is_injective(&FiniteRep::zero(q, f2())).unwrap());

        // cyclic quivers are refused
        assert!(matches!(
            BaerContext::new(&Quiver::single_loop(), f2(), Budget::default()),
            Err(Error::QuiverUnsupported(_))
        ));
    }

    #[test]
    fn baer_agrees_with_local_test_on_a2_z4_samples() {
        use crate::inject::local_test_finite;
        let z4 = BaseRing::ZmodPk { p: 2, k: 2 };
        let q = Quiver::a2();
        let ctx = BaerContext::new(&q, z4, Budget::default()).unwrap();
        // all (Z/4 -> Z/4) representations: matrices 0..4
        for e in 0..4i128 {
            let m = FinModule::new(z4, vec![2]).unwrap();
            let x = FiniteRep::new(
                q.clone(),
                z4,
                [(VertexId(1), m.clone()), (VertexId(2), m.clone())].into(),
                [(
                    ArrowId(1),
                    ModuleMap::new(m.clone(), m.clone(), vec![e]).unwrap(),
                )]
                .into(),
            )
            .unwrap();
            let local = local_test_finite(&x).unwrap().is_injective();
            let oracle = ctx.is_injective(&x).unwrap();
            assert_eq!(local, oracle, "matrix [{e}]");
        }
    }
}
