//! Quivers, infinite-quiver descriptors, path combinatorics, the rootedness
//! stratification and the source-injective classifier.
//!
//! Finite quivers are explicit vertex/arrow lists; the supported infinite
//! shapes exist only as closed-form descriptors: the one-sided infinite
//! chain, the two-sided infinite chain, and barren forests given as a
//! finite core with finitely many attached rays.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ArrowId(pub u32);

impl std::fmt::Display for VertexId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::fmt::Display for ArrowId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arrow {
    pub id: ArrowId,
    pub src: VertexId,
    pub tgt: VertexId,
}

/// A finite quiver. Loops and parallel arrows are allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quiver {
    vertices: BTreeSet<VertexId>,
    arrows: Vec<Arrow>,
}

/// A path, stored as its arrow-id sequence; the empty sequence is the
/// trivial path at a vertex. Paths compare lexicographically by id
/// sequence, which fixes the coordinate order of every product built over
/// path sets.
pub type Path = Vec<ArrowId>;

impl Quiver {
    pub fn new(
        vertices: impl IntoIterator<Item = u32>,
        arrows: Vec<(u32, u32, u32)>,
    ) -> Result<Self> {
        let vertices: BTreeSet<VertexId> = vertices.into_iter().map(VertexId).collect();
        let mut seen = BTreeSet::new();
        let mut list = Vec::with_capacity(arrows.len());
        for (id, src, tgt) in arrows {
            if !seen.insert(id) {
                return Err(Error::Validation(format!("duplicate arrow id {id}")));
            }
            let (src, tgt) = (VertexId(src), VertexId(tgt));
            if !vertices.contains(&src) {
                return Err(Error::UnknownVertex(src.0));
            }
            if !vertices.contains(&tgt) {
                return Err(Error::UnknownVertex(tgt.0));
            }
            list.push(Arrow {
                id: ArrowId(id),
                src,
                tgt,
            });
        }
        list.sort_by_key(|a| a.id);
        Ok(Quiver {
            vertices,
            arrows: list,
        })
    }

    /// The two-vertex one-arrow quiver 1 → 2.
    pub fn a2() -> Quiver {
        Quiver::new([1, 2], vec![(1, 1, 2)]).expect("valid")
    }

    /// The chain 1 → 2 → 3.
    pub fn a3() -> Quiver {
        Quiver::new([1, 2, 3], vec![(1, 1, 2), (2, 2, 3)]).expect("valid")
    }

    /// One vertex with one loop.
    pub fn single_loop() -> Quiver {
        Quiver::new([1], vec![(1, 1, 1)]).expect("valid")
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn arrows(&self) -> &[Arrow] {
        &self.arrows
    }

    pub fn arrow(&self, id: ArrowId) -> Result<&Arrow> {
        self.arrows
            .iter()
            .find(|a| a.id == id)
            .ok_or(Error::UnknownArrow(id.0))
    }

    /// Arrows with the given source, in id order.
    pub fn out_arrows(&self, v: VertexId) -> Vec<&Arrow> {
        self.arrows.iter().filter(|a| a.src == v).collect()
    }

    /// Arrows with the given target, in id order.
    pub fn in_arrows(&self, v: VertexId) -> Vec<&Arrow> {
        self.arrows.iter().filter(|a| a.tgt == v).collect()
    }

    pub fn opposite(&self) -> Quiver {
        Quiver {
            vertices: self.vertices.clone(),
            arrows: self
                .arrows
                .iter()
                .map(|a| Arrow {
                    id: a.id,
                    src: a.tgt,
                    tgt: a.src,
                })
                .collect(),
        }
    }

    pub fn reachable_from(&self, start: VertexId) -> BTreeSet<VertexId> {
        let mut seen: BTreeSet<VertexId> = [start].into();
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for a in self.out_arrows(v) {
                if seen.insert(a.tgt) {
                    queue.push_back(a.tgt);
                }
            }
        }
        seen
    }

    /// Vertices lying on some directed cycle.
    fn cycle_vertices(&self) -> BTreeSet<VertexId> {
        self.vertices
            .iter()
            .copied()
            .filter(|&v| {
                self.out_arrows(v)
                    .iter()
                    .any(|a| a.tgt == v || self.reachable_from(a.tgt).contains(&v))
            })
            .collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.cycle_vertices().is_empty()
    }

    /// All paths w → v, lexicographic by arrow-id sequence. The trivial path
    /// appears when w = v. A `bound` on the length is required as soon as a
    /// directed cycle lies on a w → v route.
    pub fn paths(&self, w: VertexId, v: VertexId, bound: Option<usize>) -> Result<Vec<Path>> {
        if !self.vertices.contains(&w) {
            return Err(Error::UnknownVertex(w.0));
        }
        if !self.vertices.contains(&v) {
            return Err(Error::UnknownVertex(v.0));
        }
        if bound.is_none() {
            let from_w = self.reachable_from(w);
            let cycles = self.cycle_vertices();
            let on_route =
                |x: VertexId| from_w.contains(&x) && self.reachable_from(x).contains(&v);
            if cycles.iter().any(|&x| on_route(x)) {
                return Err(Error::UnboundedPathSet);
            }
        }
        let mut out = Vec::new();
        let mut current: Path = Vec::new();
        self.collect_paths(w, v, bound, &mut current, &mut out);
        out.sort();
        Ok(out)
    }

    fn collect_paths(
        &self,
        at: VertexId,
        v: VertexId,
        bound: Option<usize>,
        current: &mut Path,
        out: &mut Vec<Path>,
    ) {
        if at == v {
            out.push(current.clone());
        }
        if let Some(b) = bound {
            if current.len() >= b {
                return;
            }
        }
        for a in self.out_arrows(at) {
            // Without a bound the route region is acyclic, so only walk
            // vertices that still reach v.
            if bound.is_none() && !self.reachable_from(a.tgt).contains(&v) {
                continue;
            }
            current.push(a.id);
            self.collect_paths(a.tgt, v, bound, current, out);
            current.pop();
        }
    }

    /// Endpoint of a path starting at `from`.
    pub fn path_target(&self, from: VertexId, path: &Path) -> Result<VertexId> {
        let mut at = from;
        for id in path {
            let a = self.arrow(*id)?;
            if a.src != at {
                return Err(Error::Validation(format!(
                    "arrow {id} does not compose at vertex {at}"
                )));
            }
            at = a.tgt;
        }
        Ok(at)
    }

    /// Validates the tree shape: one root, every other vertex with exactly
    /// one in-arrow, everything reachable from the root, no loops.
    pub fn tree_root(&self) -> Result<VertexId> {
        let mut root = None;
        for &v in &self.vertices {
            let indeg = self.in_arrows(v).len();
            match indeg {
                0 => {
                    if root.replace(v).is_some() {
                        return Err(Error::NotATree("more than one root".into()));
                    }
                }
                1 => {}
                _ => {
                    return Err(Error::NotATree(format!(
                        "vertex {v} has {indeg} incoming arrows"
                    )))
                }
            }
        }
        let root =
            root.ok_or_else(|| Error::NotATree("no root (every vertex has an in-arrow)".into()))?;
        if self.reachable_from(root).len() != self.vertices.len() {
            return Err(Error::NotATree("not connected".into()));
        }
        Ok(root)
    }

    pub fn is_tree(&self) -> bool {
        self.tree_root().is_ok()
    }

    /// Weakly connected components.
    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut remaining: BTreeSet<VertexId> = self.vertices.clone();
        let mut out = Vec::new();
        while let Some(&start) = remaining.iter().next() {
            let mut comp: BTreeSet<VertexId> = [start].into();
            let mut queue = VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for a in &self.arrows {
                    let other = if a.src == v {
                        Some(a.tgt)
                    } else if a.tgt == v {
                        Some(a.src)
                    } else {
                        None
                    };
                    if let Some(o) = other {
                        if comp.insert(o) {
                            queue.push_back(o);
                        }
                    }
                }
            }
            for v in &comp {
                remaining.remove(v);
            }
            out.push(comp);
        }
        out
    }

    /// Restriction to a vertex subset (keeps arrows with both ends inside).
    pub fn restrict(&self, keep: &BTreeSet<VertexId>) -> Quiver {
        Quiver {
            vertices: keep.clone(),
            arrows: self
                .arrows
                .iter()
                .filter(|a| keep.contains(&a.src) && keep.contains(&a.tgt))
                .copied()
                .collect(),
        }
    }

    pub fn is_forest(&self) -> bool {
        self.components()
            .iter()
            .all(|comp| self.restrict(comp).is_tree())
    }
}

/// Attachment point of one infinite ray • → • → ⋯ onto a core vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayAttachment {
    pub attach: VertexId,
    pub ray_id: u32,
}

/// Closed-form infinite quivers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InfiniteQuiverDescriptor {
    /// • → • → • → ⋯ (stages indexed 0, 1, 2, …).
    AInfPlus,
    /// ⋯ → • → • → ⋯ (stages indexed over ℤ).
    AInfBoth,
    /// A finite forest core with finitely many rays attached at core
    /// vertices; ray vertices have out-degree one.
    BarrenForest {
        core: Quiver,
        rays: Vec<RayAttachment>,
    },
}

impl InfiniteQuiverDescriptor {
    pub fn validate(&self) -> Result<()> {
        if let InfiniteQuiverDescriptor::BarrenForest { core, rays } = self {
            if !core.is_forest() {
                return Err(Error::Validation(
                    "barren forest core must be a forest".into(),
                ));
            }
            let mut seen = BTreeSet::new();
            for r in rays {
                if !core.contains_vertex(r.attach) {
                    return Err(Error::UnknownVertex(r.attach.0));
                }
                if !seen.insert(r.ray_id) {
                    return Err(Error::Validation(format!("duplicate ray id {}", r.ray_id)));
                }
            }
        }
        Ok(())
    }

    pub fn opposite(&self) -> Result<InfiniteQuiverDescriptor> {
        match self {
            InfiniteQuiverDescriptor::AInfBoth => Ok(InfiniteQuiverDescriptor::AInfBoth),
            _ => Err(Error::QuiverUnsupported(
                "the opposite of this descriptor is not representable in the descriptor family"
                    .into(),
            )),
        }
    }
}

/// Either an explicit finite quiver or a descriptor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuiverShape {
    Finite(Quiver),
    Descriptor(InfiniteQuiverDescriptor),
}

/// Result of the V_α fixpoint. `stages[0]` is the set of vertices with no
/// outgoing arrows; stage α+1 holds the vertices all of whose out-arrows
/// point into earlier stages. For finite quivers the iteration stops after
/// at most |V| stages; the residual is what is never reached. Descriptor
/// quivers are answered in closed form, with `residual_rays` flagging that
/// the (infinitely many) ray vertices are all residual.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stratification {
    pub stages: Vec<BTreeSet<VertexId>>,
    pub residual: BTreeSet<VertexId>,
    pub residual_rays: bool,
}

impl Stratification {
    pub fn is_right_rooted(&self) -> bool {
        self.residual.is_empty() && !self.residual_rays
    }

    /// Stage index of a vertex, if it was reached.
    pub fn stage_of(&self, v: VertexId) -> Option<usize> {
        self.stages.iter().position(|s| s.contains(&v))
    }
}

pub fn stratify_finite(q: &Quiver) -> Stratification {
    let mut remaining: BTreeSet<VertexId> = q.vertices().collect();
    let mut stages = Vec::new();
    loop {
        let stage: BTreeSet<VertexId> = remaining
            .iter()
            .copied()
            .filter(|&v| q.out_arrows(v).iter().all(|a| !remaining.contains(&a.tgt)))
            .collect();
        if stage.is_empty() {
            break;
        }
        for v in &stage {
            remaining.remove(v);
        }
        stages.push(stage);
    }
    Stratification {
        stages,
        residual: remaining,
        residual_rays: false,
    }
}

pub fn stratify(shape: &QuiverShape) -> Stratification {
    match shape {
        QuiverShape::Finite(q) => stratify_finite(q),
        QuiverShape::Descriptor(d) => match d {
            // Every vertex of the chain starts an infinite forward path.
            InfiniteQuiverDescriptor::AInfPlus | InfiniteQuiverDescriptor::AInfBoth => {
                Stratification {
                    stages: Vec::new(),
                    residual: BTreeSet::new(),
                    residual_rays: true,
                }
            }
            InfiniteQuiverDescriptor::BarrenForest { core, rays } => {
                // A core vertex is residual iff it reaches a ray attachment.
                let attach: BTreeSet<VertexId> = rays.iter().map(|r| r.attach).collect();
                let residual: BTreeSet<VertexId> = core
                    .vertices()
                    .filter(|&v| attach.iter().any(|&a| core.reachable_from(v).contains(&a)))
                    .collect();
                let keep: BTreeSet<VertexId> =
                    core.vertices().filter(|v| !residual.contains(v)).collect();
                let finite_part = stratify_finite(&core.restrict(&keep));
                Stratification {
                    stages: finite_part.stages,
                    residual,
                    residual_rays: !rays.is_empty(),
                }
            }
        },
    }
}

/// Level-size report for the barren test. Levels are 1-indexed from the
/// root; `stabilization_index` is the least level from which the sizes are
/// constant forever.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BarrenReport {
    pub barren: bool,
    pub stabilization_index: Option<u32>,
    pub state_sizes: Vec<u64>,
}

/// Tree inputs accepted by the barren test.
pub enum TreeInput<'a> {
    Finite(&'a Quiver),
    AInfPlus,
    /// One component of a barren-forest descriptor: a core tree plus rays.
    BarrenTree {
        core: &'a Quiver,
        rays: &'a [RayAttachment],
    },
    /// Tree where every vertex has the same number of children, forever
    /// (the infinite complete binary tree is branching = 2).
    SelfSimilar { branching: u64 },
}

pub fn is_barren(input: TreeInput<'_>) -> Result<BarrenReport> {
    match input {
        TreeInput::Finite(q) => {
            let root = q.tree_root()?;
            let mut sizes = level_sizes(q, root);
            sizes.push(0); // beyond the leaves everything is empty
            Ok(BarrenReport {
                barren: true,
                stabilization_index: Some(first_constant_level(&sizes)),
                state_sizes: sizes,
            })
        }
        TreeInput::AInfPlus => Ok(BarrenReport {
            barren: true,
            stabilization_index: Some(1),
            state_sizes: vec![1; 6],
        }),
        TreeInput::BarrenTree { core, rays } => {
            let root = core.tree_root()?;
            let mut depth_of: BTreeMap<VertexId, u32> = BTreeMap::new();
            depths(core, root, 1, &mut depth_of);
            let ray_depths: Vec<u32> = rays.iter().map(|r| depth_of[&r.attach]).collect();
            let core_depth = depth_of.values().copied().max().unwrap_or(1);
            let horizon = core_depth + 2;
            let mut sizes = Vec::new();
            for level in 1..=horizon {
                let core_count = depth_of.values().filter(|&&d| d == level).count() as u64;
                let ray_count = ray_depths.iter().filter(|&&d| d < level).count() as u64;
                sizes.push(core_count + ray_count);
            }
            Ok(BarrenReport {
                barren: true,
                stabilization_index: Some(first_constant_level(&sizes)),
                state_sizes: sizes,
            })
        }
        TreeInput::SelfSimilar { branching } => {
            let sizes: Vec<u64> = (0..6).map(|i| branching.pow(i)).collect();
            if branching <= 1 {
                Ok(BarrenReport {
                    barren: true,
                    stabilization_index: Some(1),
                    state_sizes: sizes,
                })
            } else {
                Ok(BarrenReport {
                    barren: false,
                    stabilization_index: None,
                    state_sizes: sizes,
                })
            }
        }
    }
}

fn depths(q: &Quiver, at: VertexId, level: u32, out: &mut BTreeMap<VertexId, u32>) {
    out.insert(at, level);
    for a in q.out_arrows(at) {
        depths(q, a.tgt, level + 1, out);
    }
}

fn level_sizes(q: &Quiver, root: VertexId) -> Vec<u64> {
    let mut depth_of = BTreeMap::new();
    depths(q, root, 1, &mut depth_of);
    let max = depth_of.values().copied().max().unwrap_or(1);
    (1..=max)
        .map(|l| depth_of.values().filter(|&&d| d == l).count() as u64)
        .collect()
}

fn first_constant_level(sizes: &[u64]) -> u32 {
    let last = *sizes.last().expect("nonempty");
    let mut idx = sizes.len();
    while idx > 0 && sizes[idx - 1] == last {
        idx -= 1;
    }
    (idx + 1) as u32
}

/// Sufficient conditions under which the local criteria characterize
/// injective representations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SourceInjectiveReason {
    RightRooted,
    BarrenForest,
    AInfBoth,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum ClassVerdict {
    Yes { reason: SourceInjectiveReason },
    /// No sufficient condition applies. Only sufficiency is known, so the
    /// classifier never answers "No".
    Unknown { annotation: Option<String> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub verdict: ClassVerdict,
    /// Stratification table backing a right-rooted verdict.
    pub stratification: Option<Stratification>,
    /// Per-component barren reports backing a barren-forest verdict.
    pub barren_reports: Option<Vec<BarrenReport>>,
}

/// Note attached to the one-loop quiver: the classical counterexample
/// showing that the local conditions alone are not sufficient there.
pub const LOOP_ANNOTATION: &str = "representations of the one-loop quiver over a field k are \
k[x]-modules; the module k[x,x^-1] (loop acting as multiplication by x) satisfies both local \
conditions yet is not injective, since k[x,x^-1] is x-divisible but not divisible as a \
k[x]-module";

pub fn classify_source_injective(shape: &QuiverShape) -> Result<Classification> {
    match shape {
        QuiverShape::Finite(q) => {
            let strat = stratify_finite(q);
            if strat.is_right_rooted() {
                Ok(Classification {
                    verdict: ClassVerdict::Yes {
                        reason: SourceInjectiveReason::RightRooted,
                    },
                    stratification: Some(strat),
                    barren_reports: None,
                })
            } else {
                let is_single_loop = q.vertex_count() == 1
                    && q.arrows().len() == 1
                    && q.arrows()[0].src == q.arrows()[0].tgt;
                Ok(Classification {
                    verdict: ClassVerdict::Unknown {
                        annotation: is_single_loop.then(|| LOOP_ANNOTATION.to_string()),
                    },
                    stratification: Some(strat),
                    barren_reports: None,
                })
            }
        }
        QuiverShape::Descriptor(d) => {
            d.validate()?;
            match d {
                InfiniteQuiverDescriptor::AInfBoth => Ok(Classification {
                    verdict: ClassVerdict::Yes {
                        reason: SourceInjectiveReason::AInfBoth,
                    },
                    stratification: None,
                    barren_reports: None,
                }),
                InfiniteQuiverDescriptor::AInfPlus => Ok(Classification {
                    verdict: ClassVerdict::Yes {
                        reason: SourceInjectiveReason::BarrenForest,
                    },
                    stratification: None,
                    barren_reports: Some(vec![is_barren(TreeInput::AInfPlus)?]),
                }),
                InfiniteQuiverDescriptor::BarrenForest { core, rays } => {
                    let mut reports = Vec::new();
                    for comp in core.components() {
                        let tree = core.restrict(&comp);
                        let comp_rays: Vec<RayAttachment> = rays
                            .iter()
                            .filter(|r| comp.contains(&r.attach))
                            .copied()
                            .collect();
                        reports.push(is_barren(TreeInput::BarrenTree {
                            core: &tree,
                            rays: &comp_rays,
                        })?);
                    }
                    Ok(Classification {
                        verdict: ClassVerdict::Yes {
                            reason: SourceInjectiveReason::BarrenForest,
                        },
                        stratification: None,
                        barren_reports: Some(reports),
                    })
                }
            }
        }
    }
}

/// Root, per-vertex unique path from the root, and one vertex at infinity
/// per ray.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeStructure {
    pub root: VertexId,
    pub paths_from_root: BTreeMap<VertexId, Path>,
    /// Distinct rays get distinct vertices at infinity, named by ray id.
    pub vertices_at_infinity: Vec<u32>,
}

pub fn tree_structure(shape: &QuiverShape) -> Result<TreeStructure> {
    match shape {
        QuiverShape::Finite(q) => {
            let root = q.tree_root()?;
            let mut paths_from_root = BTreeMap::new();
            for v in q.vertices() {
                let mut ps = q.paths(root, v, None)?;
                if ps.len() != 1 {
                    return Err(Error::NotATree(format!(
                        "vertex {v} has {} paths from the root",
                        ps.len()
                    )));
                }
                paths_from_root.insert(v, ps.pop().expect("one path"));
            }
            Ok(TreeStructure {
                root,
                paths_from_root,
                vertices_at_infinity: Vec::new(),
            })
        }
        QuiverShape::Descriptor(InfiniteQuiverDescriptor::AInfPlus) => Ok(TreeStructure {
            root: VertexId(0),
            paths_from_root: BTreeMap::new(),
            vertices_at_infinity: vec![0],
        }),
        QuiverShape::Descriptor(InfiniteQuiverDescriptor::BarrenForest { core, rays }) => {
            let root = core.tree_root()?;
            let mut paths_from_root = BTreeMap::new();
            for v in core.vertices() {
                let mut ps = core.paths(root, v, None)?;
                if ps.len() != 1 {
                    return Err(Error::NotATree(format!(
                        "vertex {v} has {} paths from the root",
                        ps.len()
                    )));
                }
                paths_from_root.insert(v, ps.pop().expect("one path"));
            }
            Ok(TreeStructure {
                root,
                paths_from_root,
                vertices_at_infinity: rays.iter().map(|r| r.ray_id).collect(),
            })
        }
        QuiverShape::Descriptor(InfiniteQuiverDescriptor::AInfBoth) => {
            Err(Error::NotATree("the two-sided chain has no root".into()))
        }
    }
}

// ---- JSON schema ----

/// Wire form of a quiver document:
/// {"vertices":[...], "arrows":[{"id","src","tgt"}], "descriptor": {...}?}.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QuiverDoc {
    pub vertices: Vec<u32>,
    pub arrows: Vec<ArrowDoc>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub descriptor: Option<DescriptorDoc>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrowDoc {
    pub id: u32,
    pub src: u32,
    pub tgt: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DescriptorDoc {
    AInfPlus,
    AInfBoth,
    BarrenForest { rays: Vec<RayDoc> },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RayDoc {
    pub attach: u32,
    pub ray_id: u32,
}

impl QuiverShape {
    pub fn to_doc(&self) -> QuiverDoc {
        match self {
            QuiverShape::Finite(q) => QuiverDoc {
                vertices: q.vertices().map(|v| v.0).collect(),
                arrows: q
                    .arrows()
                    .iter()
                    .map(|a| ArrowDoc {
                        id: a.id.0,
                        src: a.src.0,
                        tgt: a.tgt.0,
                    })
                    .collect(),
                descriptor: None,
            },
            QuiverShape::Descriptor(d) => {
                let (vertices, arrows, doc) = match d {
                    InfiniteQuiverDescriptor::AInfPlus => {
                        (Vec::new(), Vec::new(), DescriptorDoc::AInfPlus)
                    }
                    InfiniteQuiverDescriptor::AInfBoth => {
                        (Vec::new(), Vec::new(), DescriptorDoc::AInfBoth)
                    }
                    InfiniteQuiverDescriptor::BarrenForest { core, rays } => (
                        core.vertices().map(|v| v.0).collect(),
                        core.arrows()
                            .iter()
                            .map(|a| ArrowDoc {
                                id: a.id.0,
                                src: a.src.0,
                                tgt: a.tgt.0,
                            })
                            .collect(),
                        DescriptorDoc::BarrenForest {
                            rays: rays
                                .iter()
                                .map(|r| RayDoc {
                                    attach: r.attach.0,
                                    ray_id: r.ray_id,
                                })
                                .collect(),
                        },
                    ),
                };
                QuiverDoc {
                    vertices,
                    arrows,
                    descriptor: Some(doc),
                }
            }
        }
    }

    pub fn from_doc(doc: &QuiverDoc) -> Result<QuiverShape> {
        let quiver = Quiver::new(
            doc.vertices.iter().copied(),
            doc.arrows.iter().map(|a| (a.id, a.src, a.tgt)).collect(),
        )?;
        match &doc.descriptor {
            None => Ok(QuiverShape::Finite(quiver)),
            Some(DescriptorDoc::AInfPlus) => {
                Ok(QuiverShape::Descriptor(InfiniteQuiverDescriptor::AInfPlus))
            }
            Some(DescriptorDoc::AInfBoth) => {
                Ok(QuiverShape::Descriptor(InfiniteQuiverDescriptor::AInfBoth))
            }
            Some(DescriptorDoc::BarrenForest { rays }) => {
                let d = InfiniteQuiverDescriptor::BarrenForest {
                    core: quiver,
                    rays: rays
                        .iter()
                        .map(|r| RayAttachment {
                            attach: VertexId(r.attach),
                            ray_id: r.ray_id,
                        })
                        .collect(),
                };
                d.validate()?;
                Ok(QuiverShape::Descriptor(d))
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_doc()).expect("quiver serializes")
    }

    pub fn from_json(text: &str) -> Result<QuiverShape> {
        let doc: QuiverDoc = serde_json::from_str(text)?;
        QuiverShape::from_doc(&doc)
    }
}

/// The tree that branches to 2, then to 4, then continues in four infinite
/// chains; its level sizes are 1, 2, 4, 4, 4, …
pub fn two_then_four_ray_tree() -> InfiniteQuiverDescriptor {
    let core = Quiver::new(
        1..=7,
        vec![
            (1, 1, 2),
            (2, 1, 3),
            (3, 2, 4),
            (4, 2, 5),
            (5, 3, 6),
            (6, 3, 7),
        ],
    )
    .expect("valid");
    InfiniteQuiverDescriptor::BarrenForest {
        core,
        rays: (0..4)
            .map(|i| RayAttachment {
                attach: VertexId(4 + i),
                ray_id: i,
            })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn paths_reference_cases() {
        let a2 = Quiver::a2();
        let ps = a2.paths(VertexId(1), VertexId(2), None).unwrap();
        assert_eq!(ps, vec![vec![ArrowId(1)]]);
        assert!(a2.paths(VertexId(2), VertexId(1), None).unwrap().is_empty());

        let lq = Quiver::single_loop();
        let ps = lq.paths(VertexId(1), VertexId(1), Some(3)).unwrap();
        assert_eq!(ps.len(), 4); // trivial, a, a^2, a^3
        assert_eq!(ps[0], Vec::<ArrowId>::new());
        assert!(matches!(
            lq.paths(VertexId(1), VertexId(1), None),
            Err(Error::UnboundedPathSet)
        ));
    }

    #[test]
    fn stratify_reference_cases() {
        let s = stratify_finite(&Quiver::a2());
        assert_eq!(s.stages.len(), 2);
        assert!(s.stages[0].contains(&VertexId(2)));
        assert!(s.stages[1].contains(&VertexId(1)));
        assert!(s.is_right_rooted());

        let s = stratify_finite(&Quiver::single_loop());
        assert!(s.stages.is_empty());
        assert_eq!(s.residual.len(), 1);
        assert!(!s.is_right_rooted());

        let s = stratify(&QuiverShape::Descriptor(InfiniteQuiverDescriptor::AInfPlus));
        assert!(!s.is_right_rooted());
        assert!(s.residual_rays);
    }

    #[test]
    fn stratify_recursion_shifts_stages() {
        // removing stage 0 and re-stratifying reproduces the later stages
        let q = Quiver::new(
            1..=5,
            vec![(1, 1, 2), (2, 2, 3), (3, 1, 4), (4, 4, 3), (5, 5, 1)],
        )
        .unwrap();
        let s = stratify_finite(&q);
        assert!(s.is_right_rooted());
        let keep: BTreeSet<VertexId> = q.vertices().filter(|v| !s.stages[0].contains(v)).collect();
        let s2 = stratify_finite(&q.restrict(&keep));
        assert_eq!(&s.stages[1..], &s2.stages[..]);
    }

    #[test]
    fn acyclicity_matches_right_rootedness_on_finite_quivers() {
        let pool = [(1u32, 1u32), (1, 2), (2, 3), (3, 1), (2, 2)];
        for mask in 0u32..32 {
            let arrows: Vec<(u32, u32, u32)> = pool
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(i, &(s, t))| (i as u32 + 1, s, t))
                .collect();
            let q = Quiver::new(1..=3, arrows).unwrap();
            assert_eq!(q.is_acyclic(), stratify_finite(&q).is_right_rooted());
        }
    }

    #[test]
    fn barren_reference_cases() {
        let r = is_barren(TreeInput::AInfPlus).unwrap();
        assert!(r.barren);
        assert_eq!(r.stabilization_index, Some(1));
        assert!(r.state_sizes.iter().all(|&n| n == 1));

        let fig = two_then_four_ray_tree();
        let InfiniteQuiverDescriptor::BarrenForest { core, rays } = &fig else {
            unreachable!()
        };
        let r = is_barren(TreeInput::BarrenTree { core, rays }).unwrap();
        assert!(r.barren);
        assert_eq!(&r.state_sizes[..3], &[1, 2, 4]);
        assert!(r.state_sizes[3..].iter().all(|&n| n == 4));

        let r = is_barren(TreeInput::SelfSimilar { branching: 2 }).unwrap();
        assert!(!r.barren);
        assert_eq!(r.state_sizes, vec![1, 2, 4, 8, 16, 32]);

        assert!(is_barren(TreeInput::Finite(&Quiver::single_loop())).is_err());
    }

    #[test]
    fn classifier_reference_cases() {
        let c = classify_source_injective(&QuiverShape::Finite(Quiver::a2())).unwrap();
        assert_eq!(
            c.verdict,
            ClassVerdict::Yes {
                reason: SourceInjectiveReason::RightRooted
            }
        );

        let c = classify_source_injective(&QuiverShape::Descriptor(
            InfiniteQuiverDescriptor::AInfBoth,
        ))
        .unwrap();
        assert_eq!(
            c.verdict,
            ClassVerdict::Yes {
                reason: SourceInjectiveReason::AInfBoth
            }
        );

        let c = classify_source_injective(&QuiverShape::Finite(Quiver::single_loop())).unwrap();
        match c.verdict {
            ClassVerdict::Unknown { annotation } => {
                assert!(annotation.unwrap().contains("not divisible"));
            }
            _ => panic!("loop must classify Unknown"),
        }
        if let Some(s) = c.stratification {
            assert!(!s.is_right_rooted());
        }
    }

    #[test]
    fn opposite_involution_and_reversal() {
        let q = Quiver::new(
            1..=6,
            vec![(1, 1, 2), (2, 2, 3), (3, 4, 3), (4, 5, 6), (5, 2, 5)],
        )
        .unwrap();
        assert_eq!(q.opposite().opposite(), q);
        assert_eq!(Quiver::a2().opposite().arrows()[0].src, VertexId(2));
        let lq = Quiver::single_loop();
        assert_eq!(lq.opposite(), lq);
    }

    #[test]
    fn tree_structure_reference_cases() {
        let t = tree_structure(&QuiverShape::Finite(Quiver::a2())).unwrap();
        assert_eq!(t.root, VertexId(1));
        assert_eq!(t.paths_from_root[&VertexId(2)], vec![ArrowId(1)]);
        assert!(t.vertices_at_infinity.is_empty());

        let t =
            tree_structure(&QuiverShape::Descriptor(InfiniteQuiverDescriptor::AInfPlus)).unwrap();
        assert_eq!(t.vertices_at_infinity.len(), 1);

        let t = tree_structure(&QuiverShape::Descriptor(two_then_four_ray_tree())).unwrap();
        assert_eq!(t.vertices_at_infinity.len(), 4);
    }

    #[test]
    fn json_round_trip_is_bit_exact() {
        let shapes = [
            QuiverShape::Finite(Quiver::a3()),
            QuiverShape::Descriptor(InfiniteQuiverDescriptor::AInfPlus),
            QuiverShape::Descriptor(two_then_four_ray_tree()),
        ];
        for shape in shapes {
            let text = shape.to_json();
            let back = QuiverShape::from_json(&text).unwrap();
            assert_eq!(back, shape);
            assert_eq!(back.to_json(), text);
        }
        // dangling arrow target is rejected with the offending vertex
        let bad = r#"{"vertices":[1],"arrows":[{"id":1,"src":1,"tgt":9}]}"#;
        assert!(matches!(
            QuiverShape::from_json(bad),
            Err(Error::UnknownVertex(9))
        ));
    }
}
