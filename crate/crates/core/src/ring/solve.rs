//! Exact linear systems in unknown module maps.
//!
//! Everything the toolkit ever solves (sections of split epimorphisms,
//! retractions, morphism extensions, naturality systems, Hom counting)
//! is an instance of one problem: finitely many unknown maps Uₖ subject
//! to equations Σ ± L∘Uₖ∘R = B. Over ℤ/pᵏ the scalar form is a system of
//! integer congruences solved through Smith normal form; over 𝔽_q it is
//! Gaussian elimination.

use super::map::ModuleMap;
use super::module::FinModule;
use super::snf::{self, IntMat};
use super::BaseRing;
use crate::error::{Error, Result};
use rand::Rng;

// ---- field linear algebra on raw row-major data ----

/// Reduced row echelon form; returns the reduced data and the pivot columns.
pub(crate) fn field_rref(
    ring: BaseRing,
    rows: usize,
    cols: usize,
    data: &[u64],
) -> (Vec<u64>, Vec<usize>) {
    let mut m = data.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for j in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).find(|&i| m[i * cols + j] != 0) else {
            continue;
        };
        for c in 0..cols {
            m.swap(r * cols + c, pr * cols + c);
        }
        let inv = ring.inv(m[r * cols + j]).expect("pivot is a unit");
        for c in 0..cols {
            m[r * cols + c] = ring.mul(inv, m[r * cols + c]);
        }
        for i in 0..rows {
            if i != r && m[i * cols + j] != 0 {
                let factor = m[i * cols + j];
                for c in 0..cols {
                    let sub = ring.mul(factor, m[r * cols + c]);
                    m[i * cols + c] = ring.sub(m[i * cols + c], sub);
                }
            }
        }
        pivots.push(j);
        r += 1;
    }
    (m, pivots)
}

/// Basis of {x : M x = 0} over the field.
pub(crate) fn field_nullspace(
    ring: BaseRing,
    rows: usize,
    cols: usize,
    data: &[u64],
) -> Vec<Vec<u64>> {
    let (rref, pivots) = field_rref(ring, rows, cols, data);
    let mut basis = Vec::new();
    for j in 0..cols {
        if pivots.contains(&j) {
            continue;
        }
        let mut v = vec![0u64; cols];
        v[j] = 1;
        for (r, &pj) in pivots.iter().enumerate() {
            v[pj] = ring.neg(rref[r * cols + j]);
        }
        basis.push(v);
    }
    basis
}

/// One solution of M x = b over the field (free variables set to zero).
pub(crate) fn field_solve(
    ring: BaseRing,
    rows: usize,
    cols: usize,
    data: &[u64],
    rhs: &[u64],
) -> Option<Vec<u64>> {
    let mut aug = vec![0u64; rows * (cols + 1)];
    for i in 0..rows {
        aug[i * (cols + 1)..i * (cols + 1) + cols].copy_from_slice(&data[i * cols..(i + 1) * cols]);
        aug[i * (cols + 1) + cols] = rhs[i];
    }
    let (rref, pivots) = field_rref(ring, rows, cols + 1, &aug);
    if pivots.contains(&cols) {
        return None; // pivot in the constants column: inconsistent
    }
    let mut x = vec![0u64; cols];
    for (r, &pj) in pivots.iter().enumerate() {
        x[pj] = rref[r * (cols + 1) + cols];
    }
    Some(x)
}

/// Solves f(x) = target for a single element, if possible. The choice is the
/// canonical one of the underlying normal form; see `linear_solve` for the
/// lexicographically least representative.
pub fn solve_element(f: &ModuleMap, target: &[u64]) -> Option<Vec<u64>> {
    let dom = f.domain();
    let cod = f.codomain();
    assert_eq!(target.len(), cod.rank());
    match dom.ring() {
        BaseRing::FiniteField { .. } => field_solve(
            dom.ring(),
            cod.rank(),
            dom.rank(),
            f.entries(),
            target,
        ),
        BaseRing::ZmodPk { .. } => {
            let n = cod.rank();
            let m = dom.rank();
            let mut a = IntMat::zero(n, m + n);
            for i in 0..n {
                for j in 0..m {
                    a[(i, j)] = f.entry(i, j) as i128;
                }
                a[(i, m + i)] = cod.generator_order(i) as i128;
            }
            let b: Vec<i128> = target.iter().map(|&t| t as i128).collect();
            let sol = snf::solve_integer(&a, &b)?;
            Some(dom.reduce_element(&sol[..m]))
        }
    }
}

// ---- systems in unknown maps ----

/// A formal sum of terms ± L ∘ Uₖ ∘ R.
#[derive(Debug, Clone)]
pub struct MapExpr {
    terms: Vec<Term>,
}

#[derive(Debug, Clone)]
struct Term {
    negative: bool,
    left: Option<ModuleMap>,
    unknown: usize,
    right: Option<ModuleMap>,
}

impl MapExpr {
    pub fn unknown(k: usize) -> Self {
        MapExpr {
            terms: vec![Term {
                negative: false,
                left: None,
                unknown: k,
                right: None,
            }],
        }
    }

    pub fn composed(left: Option<&ModuleMap>, k: usize, right: Option<&ModuleMap>) -> Self {
        MapExpr {
            terms: vec![Term {
                negative: false,
                left: left.cloned(),
                unknown: k,
                right: right.cloned(),
            }],
        }
    }

    pub fn minus(mut self, other: MapExpr) -> Self {
        self.terms.extend(other.terms.into_iter().map(|mut t| {
            t.negative = !t.negative;
            t
        }));
        self
    }

    pub fn plus(mut self, other: MapExpr) -> Self {
        self.terms.extend(other.terms);
        self
    }
}

/// A finite system of linear equations in unknown module maps.
pub struct MapSystem {
    ring: BaseRing,
    unknowns: Vec<(FinModule, FinModule)>,
    equations: Vec<(MapExpr, ModuleMap)>,
}

/// Internal scalar view: each unknown map contributes one scalar unknown per
/// matrix slot, pre-shifted so that the annihilator condition is built in.
struct ScalarLayout {
    offsets: Vec<usize>,
    /// (box exponent r, shift) per scalar unknown over ℤ/pᵏ: the matrix
    /// entry is p^shift · u with u ranging over ℤ/p^r. Over a field the
    /// shift is 0 and r is unused.
    slots: Vec<(u32, u32)>,
}

impl MapSystem {
    pub fn new(ring: BaseRing) -> Self {
        MapSystem {
            ring,
            unknowns: Vec::new(),
            equations: Vec::new(),
        }
    }

    pub fn add_unknown(&mut self, domain: &FinModule, codomain: &FinModule) -> usize {
        assert_eq!(domain.ring(), self.ring);
        assert_eq!(codomain.ring(), self.ring);
        self.unknowns.push((domain.clone(), codomain.clone()));
        self.unknowns.len() - 1
    }

    pub fn add_equation(&mut self, expr: MapExpr, rhs: ModuleMap) -> Result<()> {
        for term in &expr.terms {
            let (udom, ucod) = &self.unknowns[term.unknown];
            let term_dom = term.right.as_ref().map_or(udom, |r| r.domain());
            let term_cod = term.left.as_ref().map_or(ucod, |l| l.codomain());
            if let Some(r) = &term.right {
                if r.codomain() != udom {
                    return Err(Error::ShapeMismatch("right factor into unknown".into()));
                }
            }
            if let Some(l) = &term.left {
                if l.domain() != ucod {
                    return Err(Error::ShapeMismatch("unknown into left factor".into()));
                }
            }
            if term_dom != rhs.domain() || term_cod != rhs.codomain() {
                return Err(Error::ShapeMismatch("equation term ends differ from rhs".into()));
            }
        }
        self.equations.push((expr, rhs));
        Ok(())
    }

    fn layout(&self) -> ScalarLayout {
        let mut offsets = Vec::with_capacity(self.unknowns.len());
        let mut slots = Vec::new();
        for (dom, cod) in &self.unknowns {
            offsets.push(slots.len());
            for i in 0..cod.rank() {
                for j in 0..dom.rank() {
                    let (a, b) = (dom.generator_exponent(j), cod.generator_exponent(i));
                    let shift = b.saturating_sub(a);
                    let r = a.min(b);
                    slots.push((r, shift));
                }
            }
        }
        ScalarLayout { offsets, slots }
    }

    fn slot(&self, layout: &ScalarLayout, unknown: usize, i: usize, j: usize) -> usize {
        let dom_rank = self.unknowns[unknown].0.rank();
        layout.offsets[unknown] + i * dom_rank + j
    }

    /// Expands every map equation into scalar rows.
    /// Returns (coefficient rows, per-row modulus exponent (ℤ/pᵏ) , rhs).
    fn scalar_rows(&self, layout: &ScalarLayout) -> (Vec<Vec<i128>>, Vec<u32>, Vec<i128>) {
        let p = self.ring.prime();
        let total = layout.slots.len();
        let mut rows = Vec::new();
        let mut mods = Vec::new();
        let mut rhs = Vec::new();
        for (expr, b) in &self.equations {
            let eq_dom = b.domain();
            let eq_cod = b.codomain();
            for i in 0..eq_cod.rank() {
                for j in 0..eq_dom.rank() {
                    let mut row = vec![0i128; total];
                    for term in &expr.terms {
                        let (udom, ucod) = &self.unknowns[term.unknown];
                        // coefficient of U[l, l'] in entry (i, j) of L∘U∘R
                        for l in 0..ucod.rank() {
                            let lcoef = match &term.left {
                                Some(lm) => lm.entry(i, l),
                                None => u64::from(l == i),
                            };
                            if lcoef == 0 {
                                continue;
                            }
                            for lp in 0..udom.rank() {
                                let rcoef = match &term.right {
                                    Some(rm) => rm.entry(lp, j),
                                    None => u64::from(lp == j),
                                };
                                if rcoef == 0 {
                                    continue;
                                }
                                let slot = self.slot(layout, term.unknown, l, lp);
                                let shift = layout.slots[slot].1;
                                let coeff: i128 = match self.ring {
                                    BaseRing::ZmodPk { .. } => {
                                        lcoef as i128
                                            * rcoef as i128
                                            * (p as i128).pow(shift)
                                    }
                                    BaseRing::FiniteField { .. } => {
                                        self.ring.mul(lcoef, rcoef) as i128
                                    }
                                };
                                if term.negative {
                                    row[slot] -= coeff;
                                } else {
                                    row[slot] += coeff;
                                }
                            }
                        }
                    }
                    rows.push(row);
                    mods.push(eq_cod.generator_exponent(i));
                    rhs.push(b.entry(i, j) as i128);
                }
            }
        }
        (rows, mods, rhs)
    }

    fn materialize(&self, layout: &ScalarLayout, u: &[i128]) -> Vec<ModuleMap> {
        let p = self.ring.prime();
        self.unknowns
            .iter()
            .enumerate()
            .map(|(k, (dom, cod))| {
                let mut entries = vec![0i128; dom.rank() * cod.rank()];
                for i in 0..cod.rank() {
                    for j in 0..dom.rank() {
                        let slot = self.slot(layout, k, i, j);
                        let (r, shift) = layout.slots[slot];
                        let val = match self.ring {
                            BaseRing::ZmodPk { .. } => {
                                let boxed = u[slot].rem_euclid((p as i128).pow(r));
                                boxed * (p as i128).pow(shift)
                            }
                            BaseRing::FiniteField { .. } => {
                                u[slot].rem_euclid(self.ring.size() as i128)
                            }
                        };
                        entries[i * dom.rank() + j] = val;
                    }
                }
                ModuleMap::new(dom.clone(), cod.clone(), entries)
                    .expect("substituted entries respect annihilators")
            })
            .collect()
    }

    /// A particular solution plus a generating set of the homogeneous
    /// solutions (as scalar vectors). `None` when inconsistent.
    fn solve_scalar(&self) -> Option<(Vec<i128>, Vec<Vec<i128>>)> {
        let layout = self.layout();
        let total = layout.slots.len();
        let (rows, mods, rhs) = self.scalar_rows(&layout);
        match self.ring {
            BaseRing::ZmodPk { p, .. } => {
                let e = rows.len();
                let mut a = IntMat::zero(e, total + e);
                for (r, row) in rows.iter().enumerate() {
                    for (c, &v) in row.iter().enumerate() {
                        a[(r, c)] = v;
                    }
                    a[(r, total + r)] = (p as i128).pow(mods[r]);
                }
                let sol = snf::solve_integer(&a, &rhs)?;
                let part = sol[..total].to_vec();
                let mut hom: Vec<Vec<i128>> = snf::kernel_basis(&a)
                    .into_iter()
                    .map(|v| v[..total].to_vec())
                    .collect();
                // box vectors are always homogeneous solutions
                for (slot, &(r, _)) in layout.slots.iter().enumerate() {
                    let mut v = vec![0i128; total];
                    v[slot] = (p as i128).pow(r);
                    hom.push(v);
                }
                Some((part, hom))
            }
            BaseRing::FiniteField { .. } => {
                let e = rows.len();
                let q = self.ring.size();
                let data: Vec<u64> = rows
                    .iter()
                    .flat_map(|row| {
                        row.iter()
                            .map(|&v| v.rem_euclid(q as i128) as u64)
                            .collect::<Vec<_>>()
                    })
                    .collect();
                let rhs_f: Vec<u64> = rhs.iter().map(|&v| v.rem_euclid(q as i128) as u64).collect();
                let part = field_solve(self.ring, e, total, &data, &rhs_f)?;
                let hom = field_nullspace(self.ring, e, total, &data);
                Some((
                    part.into_iter().map(|v| v as i128).collect(),
                    hom.into_iter()
                        .map(|v| v.into_iter().map(|x| x as i128).collect())
                        .collect(),
                ))
            }
        }
    }

    /// One solution, if the system is consistent.
    pub fn solve(&self) -> Option<Vec<ModuleMap>> {
        let layout = self.layout();
        let (part, _) = self.solve_scalar()?;
        Some(self.materialize(&layout, &part))
    }

    /// Exact number of solutions (0 when inconsistent).
    pub fn count_solutions(&self) -> u128 {
        let layout = self.layout();
        let Some((_, hom)) = self.solve_scalar() else {
            return 0;
        };
        let total = layout.slots.len();
        if total == 0 {
            return 1;
        }
        match self.ring {
            BaseRing::ZmodPk { p, .. } => {
                // |solutions| = |box| / [Z^t : L], L the homogeneous lattice
                // (which contains the box lattice).
                let mut g = IntMat::zero(total, hom.len());
                for (j, v) in hom.iter().enumerate() {
                    for i in 0..total {
                        g[(i, j)] = v[i];
                    }
                }
                let basis = snf::lattice_basis(&g);
                assert_eq!(basis.cols, total, "homogeneous lattice has full rank");
                let index = basis.det().unsigned_abs();
                let box_size: u128 = layout
                    .slots
                    .iter()
                    .map(|&(r, _)| (p as u128).pow(r))
                    .product();
                box_size / index
            }
            BaseRing::FiniteField { .. } => {
                (self.ring.size() as u128).pow(hom.len() as u32)
            }
        }
    }

    /// All solutions in a deterministic order, within budget.
    pub fn enumerate_solutions(&self, budget: crate::Budget) -> Result<Vec<Vec<ModuleMap>>> {
        let count = self.count_solutions();
        if count == 0 {
            return Ok(Vec::new());
        }
        budget.check(count)?;
        let layout = self.layout();
        let total = layout.slots.len();
        let (part, hom) = self.solve_scalar().expect("count > 0");
        // Enumerate the homogeneous solution subgroup inside the box group
        // by closing over the generators, then shift by the particular one.
        let boxed = |v: &[i128]| -> Vec<u64> {
            v.iter()
                .enumerate()
                .map(|(t, &x)| {
                    let m = match self.ring {
                        BaseRing::ZmodPk { p, .. } => (p as i128).pow(layout.slots[t].0),
                        BaseRing::FiniteField { .. } => self.ring.size() as i128,
                    };
                    x.rem_euclid(m) as u64
                })
                .collect()
        };
        let add = |a: &[u64], b: &[u64]| -> Vec<u64> {
            (0..total)
                .map(|t| match self.ring {
                    BaseRing::ZmodPk { p, .. } => {
                        (a[t] + b[t]) % p.pow(layout.slots[t].0)
                    }
                    BaseRing::FiniteField { .. } => self.ring.add(a[t], b[t]),
                })
                .collect()
        };
        let mut subgroup: std::collections::BTreeSet<Vec<u64>> = std::collections::BTreeSet::new();
        subgroup.insert(vec![0; total]);
        for g in &hom {
            let g = boxed(g);
            loop {
                let mut added = Vec::new();
                for s in subgroup.iter() {
                    let t = add(s, &g);
                    if !subgroup.contains(&t) {
                        added.push(t);
                    }
                }
                if added.is_empty() {
                    break;
                }
                subgroup.extend(added);
            }
        }
        let part = boxed(&part);
        let mut sols: Vec<Vec<u64>> = subgroup.iter().map(|s| add(s, &part)).collect();
        sols.sort();
        Ok(sols
            .into_iter()
            .map(|s| {
                let ints: Vec<i128> = s.iter().map(|&x| x as i128).collect();
                self.materialize(&layout, &ints)
            })
            .collect())
    }

    /// A seeded pseudo-random solution (particular plus random homogeneous
    /// combination). `None` when inconsistent.
    pub fn sample_solution(&self, rng: &mut impl Rng) -> Option<Vec<ModuleMap>> {
        let layout = self.layout();
        let (part, hom) = self.solve_scalar()?;
        let total = layout.slots.len();
        let mut u = part;
        let span = self.ring.size() as i128;
        for h in &hom {
            let c = rng.gen_range(0..span);
            for t in 0..total {
                u[t] += c * h[t];
            }
        }
        Some(self.materialize(&layout, &u))
    }
}

/// Retraction r with r ∘ f = id on the domain of f, when one exists.
pub fn solve_retraction(f: &ModuleMap) -> Option<ModuleMap> {
    let mut sys = MapSystem::new(f.domain().ring());
    let r = sys.add_unknown(f.codomain(), f.domain());
    sys.add_equation(
        MapExpr::composed(None, r, Some(f)),
        ModuleMap::identity(f.domain()),
    )
    .expect("shapes fit");
    sys.solve().map(|mut v| v.swap_remove(r))
}

/// Section g with f ∘ g = id on the codomain of f, when one exists.
pub fn solve_section(f: &ModuleMap) -> Option<ModuleMap> {
    let mut sys = MapSystem::new(f.domain().ring());
    let g = sys.add_unknown(f.codomain(), f.domain());
    sys.add_equation(
        MapExpr::composed(Some(f), g, None),
        ModuleMap::identity(f.codomain()),
    )
    .expect("shapes fit");
    sys.solve().map(|mut v| v.swap_remove(g))
}

/// Extension through a monomorphism: t with t ∘ g = h.
pub fn solve_extension(g: &ModuleMap, h: &ModuleMap) -> Option<ModuleMap> {
    assert_eq!(g.domain(), h.domain());
    let mut sys = MapSystem::new(g.domain().ring());
    let t = sys.add_unknown(g.codomain(), h.codomain());
    sys.add_equation(MapExpr::composed(None, t, Some(g)), h.clone())
        .expect("shapes fit");
    sys.solve().map(|mut v| v.swap_remove(t))
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
    fn section_of_projection() {
        // projection Z/4 ⊕ Z/4 -> Z/4 has the first-summand inclusion as a section
        let dom = z4_mod(&[2, 2]);
        let cod = z4_mod(&[2]);
        let f = ModuleMap::new(dom.clone(), cod.clone(), vec![1, 0]).unwrap();
        let g = solve_section(&f).expect("projection splits");
        assert_eq!(f.compose(&g).unwrap(), ModuleMap::identity(&cod));
    }

    #[test]
    fn no_section_for_mod2_quotient() {
        // Z/4 -> Z/2 is surjective but does not split
        let f = ModuleMap::new(z4_mod(&[2]), z4_mod(&[1]), vec![1]).unwrap();
        assert!(solve_section(&f).is_none());
    }

    #[test]
    fn hom_counting_matches_enumeration() {
        // Hom(Z/2, Z/4) has exactly two elements (1 ↦ 0 and 1 ↦ 2)
        let mut sys = MapSystem::new(z4());
        let _u = sys.add_unknown(&z4_mod(&[1]), &z4_mod(&[2]));
        assert_eq!(sys.count_solutions(), 2);
        let sols = sys.enumerate_solutions(crate::Budget::default()).unwrap();
        assert_eq!(sols.len(), 2);
        let entries: Vec<u64> = sols.iter().map(|s| s[0].entry(0, 0)).collect();
        assert_eq!(entries, vec![0, 2]);
    }

    #[test]
    fn field_system() {
        let f2 = BaseRing::FiniteField { p: 2, e: 1 };
        let v2 = FinModule::free(f2, 2);
        let v1 = FinModule::free(f2, 1);
        let f = ModuleMap::new(v2.clone(), v1.clone(), vec![1, 1]).unwrap();
        // sections of [1 1]: g = (1,0) or (0,1)
        let mut sys = MapSystem::new(f2);
        let g = sys.add_unknown(&v1, &v2);
        sys.add_equation(MapExpr::composed(Some(&f), g, None), ModuleMap::identity(&v1))
            .unwrap();
        assert_eq!(sys.count_solutions(), 2);
    }

    #[test]
    fn extension_by_injectivity() {
        // extend Z/2 -> Z/4 (1↦2) along the inclusion Z/2 ⊂ Z/4
        let incl = ModuleMap::new(z4_mod(&[1]), z4_mod(&[2]), vec![2]).unwrap();
        let h = incl.clone();
        let t = solve_extension(&incl, &h).expect("Z/4 is self-injective");
        assert_eq!(t.compose(&incl).unwrap(), h);
    }
}
