//! Module maps as matrices between normal forms.

use super::module::{DirectSum, FinModule};
use super::snf::{self, IntMat};
use super::solve;
use super::BaseRing;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A homomorphism between finite modules, stored as the matrix of images of
/// the canonical generators: column j is the image of the j-th domain
/// generator, expressed on the codomain generators.
///
/// Entries are kept reduced: over ℤ/pᵏ the (i, j) entry lives mod p^{bᵢ}
/// (the order of the i-th codomain generator) and must be divisible by
/// p^{bᵢ−aⱼ} when bᵢ > aⱼ, otherwise column j would not kill the
/// annihilator of its generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModuleMap {
    domain: FinModule,
    codomain: FinModule,
    entries: Vec<u64>, // row-major, codomain.rank() x domain.rank()
}

impl ModuleMap {
    pub fn new(domain: FinModule, codomain: FinModule, entries: Vec<i128>) -> Result<Self> {
        if entries.len() != domain.rank() * codomain.rank() {
            return Err(Error::ShapeMismatch(format!(
                "matrix has {} entries, expected {}x{}",
                entries.len(),
                codomain.rank(),
                domain.rank()
            )));
        }
        if domain.ring() != codomain.ring() {
            return Err(Error::ShapeMismatch("mixed coefficient rings".into()));
        }
        let ring = domain.ring();
        let cols = domain.rank();
        let mut reduced = vec![0u64; entries.len()];
        for i in 0..codomain.rank() {
            let order = codomain.generator_order(i);
            for j in 0..cols {
                let raw = entries[i * cols + j].rem_euclid(order as i128) as u64;
                reduced[i * cols + j] = raw;
                if let BaseRing::ZmodPk { p, .. } = ring {
                    let (a, b) = (domain.generator_exponent(j), codomain.generator_exponent(i));
                    if b > a {
                        let need = p.pow(b - a);
                        if raw % need != 0 {
                            return Err(Error::ShapeMismatch(format!(
                                "entry ({i},{j}) = {raw} does not kill the generator \
                                 annihilator (needs divisibility by {need})"
                            )));
                        }
                    }
                }
            }
        }
        Ok(ModuleMap {
            domain,
            codomain,
            entries: reduced,
        })
    }

    pub fn identity(m: &FinModule) -> Self {
        let n = m.rank();
        let mut entries = vec![0i128; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        ModuleMap::new(m.clone(), m.clone(), entries).expect("identity is always valid")
    }

    pub fn zero(domain: &FinModule, codomain: &FinModule) -> Self {
        ModuleMap::new(
            domain.clone(),
            codomain.clone(),
            vec![0; domain.rank() * codomain.rank()],
        )
        .expect("zero map is always valid")
    }

    pub fn domain(&self) -> &FinModule {
        &self.domain
    }

    pub fn codomain(&self) -> &FinModule {
        &self.codomain
    }

    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.entries[i * self.domain.rank() + j]
    }

    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero_map(&self) -> bool {
        self.entries.iter().all(|&e| e == 0)
    }

    pub fn as_int_matrix(&self) -> IntMat {
        IntMat {
            rows: self.codomain.rank(),
            cols: self.domain.rank(),
            data: self.entries.iter().map(|&e| e as i128).collect(),
        }
    }

    /// self ∘ inner.
    pub fn compose(&self, inner: &ModuleMap) -> Result<ModuleMap> {
        if inner.codomain != self.domain {
            return Err(Error::ShapeMismatch(
                "composition: codomain of inner != domain of outer".into(),
            ));
        }
        let ring = self.domain.ring();
        let rows = self.codomain.rank();
        let mid = self.domain.rank();
        let cols = inner.domain.rank();
        let mut out = vec![0i128; rows * cols];
        match ring {
            BaseRing::ZmodPk { .. } => {
                for i in 0..rows {
                    for j in 0..cols {
                        let mut acc: i128 = 0;
                        for l in 0..mid {
                            acc += self.entry(i, l) as i128 * inner.entry(l, j) as i128;
                        }
                        out[i * cols + j] = acc;
                    }
                }
            }
            BaseRing::FiniteField { .. } => {
                for i in 0..rows {
                    for j in 0..cols {
                        let mut acc = 0u64;
                        for l in 0..mid {
                            acc = ring.add(acc, ring.mul(self.entry(i, l), inner.entry(l, j)));
                        }
                        out[i * cols + j] = acc as i128;
                    }
                }
            }
        }
        ModuleMap::new(inner.domain.clone(), self.codomain.clone(), out)
    }

    pub fn add(&self, other: &ModuleMap) -> Result<ModuleMap> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::ShapeMismatch("sum of maps with different ends".into()));
        }
        let ring = self.domain.ring();
        let out = match ring {
            BaseRing::ZmodPk { .. } => self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| a as i128 + b as i128)
                .collect(),
            BaseRing::FiniteField { .. } => self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| ring.add(a, b) as i128)
                .collect(),
        };
        ModuleMap::new(self.domain.clone(), self.codomain.clone(), out)
    }

    pub fn sub(&self, other: &ModuleMap) -> Result<ModuleMap> {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> ModuleMap {
        let ring = self.domain.ring();
        let out = match ring {
            BaseRing::ZmodPk { .. } => self.entries.iter().map(|&a| -(a as i128)).collect(),
            BaseRing::FiniteField { .. } => {
                self.entries.iter().map(|&a| ring.neg(a) as i128).collect()
            }
        };
        ModuleMap::new(self.domain.clone(), self.codomain.clone(), out)
            .expect("negation preserves validity")
    }

    /// Applies the map to an element given in domain coordinates.
    pub fn apply(&self, x: &[u64]) -> Vec<u64> {
        assert_eq!(x.len(), self.domain.rank());
        let ring = self.domain.ring();
        match ring {
            BaseRing::ZmodPk { .. } => (0..self.codomain.rank())
                .map(|i| {
                    let acc: u128 = (0..self.domain.rank())
                        .map(|j| self.entry(i, j) as u128 * x[j] as u128)
                        .sum();
                    (acc % self.codomain.generator_order(i) as u128) as u64
                })
                .collect(),
            BaseRing::FiniteField { .. } => (0..self.codomain.rank())
                .map(|i| {
                    (0..self.domain.rank()).fold(0u64, |acc, j| {
                        ring.add(acc, ring.mul(self.entry(i, j), x[j]))
                    })
                })
                .collect(),
        }
    }

    /// Kernel as a module in normal form with its inclusion.
    pub fn kernel(&self) -> (FinModule, ModuleMap) {
        match self.domain.ring() {
            BaseRing::ZmodPk { p, .. } => self.kernel_zmod(p),
            BaseRing::FiniteField { .. } => self.kernel_field(),
        }
    }

    /// Image as a submodule of the codomain: (module, inclusion, corestriction).
    pub fn image(&self) -> (FinModule, ModuleMap, ModuleMap) {
        match self.domain.ring() {
            BaseRing::ZmodPk { p, .. } => self.image_zmod(p),
            BaseRing::FiniteField { .. } => self.image_field(),
        }
    }

    /// Cokernel with its projection.
    pub fn cokernel(&self) -> (FinModule, ModuleMap) {
        match self.domain.ring() {
            BaseRing::ZmodPk { p, .. } => self.cokernel_zmod(p),
            BaseRing::FiniteField { .. } => self.cokernel_field(),
        }
    }

    pub fn is_injective_map(&self) -> bool {
        self.kernel().0.is_zero()
    }

    pub fn is_surjective_map(&self) -> bool {
        self.image().0.cardinality() == self.codomain.cardinality()
    }

    // ---- ℤ/p^k structural computations via integer lattices ----

    /// Relations matrix diag(p^{a_j}) of a module.
    fn relations(m: &FinModule) -> IntMat {
        let n = m.rank();
        let mut r = IntMat::zero(n, n);
        for i in 0..n {
            r[(i, i)] = m.generator_order(i) as i128;
        }
        r
    }

    /// Presents the quotient `lattice / relations` (both full rank in ℤ^n)
    /// as invariant factors plus generators expressed in ambient coordinates.
    pub(crate) fn quotient_structure(
        p: u64,
        ambient: &FinModule,
        lattice_gens: Vec<Vec<i128>>,
    ) -> (FinModule, ModuleMap) {
        let n = ambient.rank();
        if n == 0 {
            let z = FinModule::zero(ambient.ring());
            return (z.clone(), ModuleMap::zero(&z, ambient));
        }
        let rels = Self::relations(ambient);
        // Generating set: supplied vectors plus the relations (so the span
        // always contains the relation lattice and has full rank).
        let mut cols: Vec<Vec<i128>> = lattice_gens;
        for j in 0..n {
            cols.push(rels.col(j));
        }
        let mut gmat = IntMat::zero(n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                gmat[(i, j)] = col[i];
            }
        }
        let basis = snf::lattice_basis(&gmat);
        assert_eq!(basis.cols, n, "lattice containing relations has full rank");
        // C = basis^{-1} * rels, integral because rels-lattice ⊆ basis-lattice.
        let mut c = IntMat::zero(n, n);
        for j in 0..n {
            let sol = snf::solve_integer(&basis, &rels.col(j))
                .expect("relations lie in the lattice");
            for i in 0..n {
                c[(i, j)] = sol[i];
            }
        }
        let s = snf::smith_normal_form(&c);
        // New basis columns: basis * U^{-1}; generator t has order d_t.
        let new_basis = basis.mul(&s.u_inv);
        let diag = s.diagonal();
        let mut exps = Vec::new();
        let mut gen_cols = Vec::new();
        for (t, &d) in diag.iter().enumerate() {
            let d = d.abs();
            assert!(d > 0, "quotient of full-rank lattices is finite");
            if d == 1 {
                continue;
            }
            let mut e = 0u32;
            let mut dd = d;
            while dd % p as i128 == 0 {
                dd /= p as i128;
                e += 1;
            }
            assert_eq!(dd, 1, "invariant factor must be a p-power");
            exps.push(e);
            gen_cols.push(new_basis.col(t));
        }
        let module = FinModule::new(ambient.ring(), exps.clone()).expect("valid exponents");
        // The constructor sorted ascending; diag is ascending already, and
        // equal exponents are interchangeable, so column order matches.
        let mut entries = vec![0i128; n * gen_cols.len()];
        for (t, col) in gen_cols.iter().enumerate() {
            for i in 0..n {
                entries[i * gen_cols.len() + t] = col[i];
            }
        }
        let incl = ModuleMap::new(module.clone(), ambient.clone(), entries)
            .expect("quotient generators respect annihilators");
        (module, incl)
    }

    fn kernel_zmod(&self, p: u64) -> (FinModule, ModuleMap) {
        let m = self.domain.rank();
        let n = self.codomain.rank();
        if m == 0 {
            let z = FinModule::zero(self.domain.ring());
            return (z.clone(), ModuleMap::zero(&z, &self.domain));
        }
        // x is in the kernel iff F x ≡ 0 modulo the codomain relations.
        let mut a = IntMat::zero(n, m + n);
        for i in 0..n {
            for j in 0..m {
                a[(i, j)] = self.entry(i, j) as i128;
            }
            a[(i, m + i)] = self.codomain.generator_order(i) as i128;
        }
        let gens: Vec<Vec<i128>> = snf::kernel_basis(&a)
            .into_iter()
            .map(|v| v[..m].to_vec())
            .collect();
        Self::quotient_structure(p, &self.domain, gens)
    }

    fn image_zmod(&self, p: u64) -> (FinModule, ModuleMap, ModuleMap) {
        let m = self.domain.rank();
        let gens: Vec<Vec<i128>> = (0..m)
            .map(|j| {
                (0..self.codomain.rank())
                    .map(|i| self.entry(i, j) as i128)
                    .collect()
            })
            .collect();
        let (img, incl) = Self::quotient_structure(p, &self.codomain, gens);
        // Corestriction: express each f(g_j) on the image generators.
        let mut entries = vec![0i128; img.rank() * m];
        for j in 0..m {
            let target: Vec<u64> = (0..self.codomain.rank()).map(|i| self.entry(i, j)).collect();
            let x = solve::solve_element(&incl, &target)
                .expect("column of f lies in the image");
            for t in 0..img.rank() {
                entries[t * m + j] = x[t] as i128;
            }
        }
        let core = ModuleMap::new(self.domain.clone(), img.clone(), entries)
            .expect("corestriction is a valid map");
        (img, incl, core)
    }

    fn cokernel_zmod(&self, p: u64) -> (FinModule, ModuleMap) {
        let m = self.domain.rank();
        let n = self.codomain.rank();
        if n == 0 {
            let z = FinModule::zero(self.codomain.ring());
            return (z.clone(), ModuleMap::zero(&self.codomain, &z));
        }
        let mut a = IntMat::zero(n, m + n);
        for i in 0..n {
            for j in 0..m {
                a[(i, j)] = self.entry(i, j) as i128;
            }
            a[(i, m + i)] = self.codomain.generator_order(i) as i128;
        }
        let s = snf::smith_normal_form(&a);
        let diag = s.diagonal();
        let mut exps = Vec::new();
        let mut rows = Vec::new();
        for (t, &d) in diag.iter().enumerate() {
            let d = d.abs();
            assert!(d > 0, "cokernel of a map of finite modules is finite");
            if d == 1 {
                continue;
            }
            let mut e = 0u32;
            let mut dd = d;
            while dd % p as i128 == 0 {
                dd /= p as i128;
                e += 1;
            }
            assert_eq!(dd, 1, "invariant factor must be a p-power");
            exps.push(e);
            rows.push((0..n).map(|l| s.u[(t, l)]).collect::<Vec<i128>>());
        }
        let module = FinModule::new(self.codomain.ring(), exps).expect("valid exponents");
        let mut entries = vec![0i128; module.rank() * n];
        for (t, row) in rows.iter().enumerate() {
            for l in 0..n {
                entries[t * n + l] = row[l];
            }
        }
        let proj = ModuleMap::new(self.codomain.clone(), module.clone(), entries)
            .expect("projection respects annihilators");
        (module, proj)
    }

    // ---- field structural computations via Gaussian elimination ----

    fn kernel_field(&self) -> (FinModule, ModuleMap) {
        let ring = self.domain.ring();
        let basis = solve::field_nullspace(
            ring,
            self.codomain.rank(),
            self.domain.rank(),
            &self.entries,
        );
        let ker = FinModule::free(ring, basis.len());
        let m = self.domain.rank();
        let mut entries = vec![0i128; m * basis.len()];
        for (t, vec) in basis.iter().enumerate() {
            for i in 0..m {
                entries[i * basis.len() + t] = vec[i] as i128;
            }
        }
        let incl = ModuleMap::new(ker.clone(), self.domain.clone(), entries)
            .expect("kernel basis is a valid inclusion");
        (ker, incl)
    }

    fn image_field(&self) -> (FinModule, ModuleMap, ModuleMap) {
        let ring = self.domain.ring();
        let n = self.codomain.rank();
        let m = self.domain.rank();
        // Column space basis: pivot columns of F.
        let (_, pivots) = solve::field_rref(ring, n, m, &self.entries);
        let img = FinModule::free(ring, pivots.len());
        let mut incl_entries = vec![0i128; n * pivots.len()];
        for (t, &j) in pivots.iter().enumerate() {
            for i in 0..n {
                incl_entries[i * pivots.len() + t] = self.entry(i, j) as i128;
            }
        }
        let incl = ModuleMap::new(img.clone(), self.codomain.clone(), incl_entries)
            .expect("image basis is a valid inclusion");
        let mut core_entries = vec![0i128; img.rank() * m];
        for j in 0..m {
            let target: Vec<u64> = (0..n).map(|i| self.entry(i, j)).collect();
            let x = solve::solve_element(&incl, &target).expect("column lies in image");
            for t in 0..img.rank() {
                core_entries[t * m + j] = x[t] as i128;
            }
        }
        let core = ModuleMap::new(self.domain.clone(), img.clone(), core_entries)
            .expect("corestriction valid");
        (img, incl, core)
    }

    fn cokernel_field(&self) -> (FinModule, ModuleMap) {
        let ring = self.domain.ring();
        let n = self.codomain.rank();
        // Rows of the projection: a basis of the left null space of F.
        let mut transpose = vec![0u64; n * self.domain.rank()];
        for i in 0..n {
            for j in 0..self.domain.rank() {
                transpose[j * n + i] = self.entry(i, j);
            }
        }
        let basis = solve::field_nullspace(ring, self.domain.rank(), n, &transpose);
        let coker = FinModule::free(ring, basis.len());
        let mut entries = vec![0i128; basis.len() * n];
        for (t, row) in basis.iter().enumerate() {
            for i in 0..n {
                entries[t * n + i] = row[i] as i128;
            }
        }
        let proj = ModuleMap::new(self.codomain.clone(), coker.clone(), entries)
            .expect("cokernel projection valid");
        (coker, proj)
    }
}

/// Inclusion of one summand of a two-term direct sum.
pub fn sum_inclusion(ds: &DirectSum, part: &FinModule, left: bool) -> ModuleMap {
    let positions = if left {
        &ds.left_positions
    } else {
        &ds.right_positions
    };
    let rows = ds.module.rank();
    let cols = part.rank();
    let mut entries = vec![0i128; rows * cols];
    for (j, &pos) in positions.iter().enumerate() {
        entries[pos * cols + j] = 1;
    }
    ModuleMap::new(part.clone(), ds.module.clone(), entries).expect("inclusion valid")
}

/// Projection onto one summand of a two-term direct sum.
pub fn sum_projection(ds: &DirectSum, part: &FinModule, left: bool) -> ModuleMap {
    let positions = if left {
        &ds.left_positions
    } else {
        &ds.right_positions
    };
    let rows = part.rank();
    let cols = ds.module.rank();
    let mut entries = vec![0i128; rows * cols];
    for (i, &pos) in positions.iter().enumerate() {
        entries[i * cols + pos] = 1;
    }
    ModuleMap::new(ds.module.clone(), part.clone(), entries).expect("projection valid")
}

/// n-ary direct sum in normal form with all inclusions and projections.
pub fn big_direct_sum(ring: BaseRing, parts: &[FinModule]) -> (FinModule, Vec<ModuleMap>, Vec<ModuleMap>) {
    let mut acc = FinModule::zero(ring);
    let mut incls: Vec<ModuleMap> = Vec::new();
    let mut projs: Vec<ModuleMap> = Vec::new();
    for part in parts {
        let ds = acc.direct_sum(part);
        let inc_left = sum_inclusion(&ds, &acc, true);
        let proj_left = sum_projection(&ds, &acc, true);
        for inc in incls.iter_mut() {
            *inc = inc_left.compose(inc).expect("inclusion composes");
        }
        for proj in projs.iter_mut() {
            *proj = proj.compose(&proj_left).expect("projection composes");
        }
        incls.push(sum_inclusion(&ds, part, false));
        projs.push(sum_projection(&ds, part, false));
        acc = ds.module;
    }
    (acc, incls, projs)
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
    fn annihilator_check_fires() {
        // Z/4 -> Z/2 sending the generator to 1 is fine (4·1 = 0 in Z/2)...
        let ok = ModuleMap::new(z4_mod(&[2]), z4_mod(&[1]), vec![1]);
        assert!(ok.is_ok());
        // ...but Z/2 -> Z/4 sending the generator to 1 is not (2·1 ≠ 0 in Z/4).
        let bad = ModuleMap::new(z4_mod(&[1]), z4_mod(&[2]), vec![1]);
        assert!(bad.is_err());
        // The inclusion Z/2 -> Z/4 is 1 ↦ 2.
        let incl = ModuleMap::new(z4_mod(&[1]), z4_mod(&[2]), vec![2]).unwrap();
        assert_eq!(incl.apply(&[1]), vec![2]);
    }

    #[test]
    fn composition_and_identity() {
        let m = z4_mod(&[2, 2]);
        let id = ModuleMap::identity(&m);
        let f = ModuleMap::new(m.clone(), m.clone(), vec![2, 1, 0, 3]).unwrap();
        assert_eq!(f.compose(&id).unwrap(), f);
        assert_eq!(id.compose(&f).unwrap(), f);
        // associativity on a random triple
        let g = ModuleMap::new(m.clone(), m.clone(), vec![1, 1, 2, 0]).unwrap();
        let h = ModuleMap::new(m.clone(), m.clone(), vec![0, 3, 1, 2]).unwrap();
        let left = f.compose(&g).unwrap().compose(&h).unwrap();
        let right = f.compose(&g.compose(&h).unwrap()).unwrap();
        assert_eq!(left, right);
    }

    #[test]
    fn kernel_image_cokernel_zmod() {
        // multiplication by 2 on Z/4
        let m = z4_mod(&[2]);
        let f = ModuleMap::new(m.clone(), m.clone(), vec![2]).unwrap();
        let (ker, incl) = f.kernel();
        assert_eq!(ker.invariants(), &[1]);
        assert_eq!(f.compose(&incl).unwrap().entries(), &[0]);
        let (img, img_incl, core) = f.image();
        assert_eq!(img.invariants(), &[1]);
        assert_eq!(img_incl.compose(&core).unwrap(), f);
        let (cok, proj) = f.cokernel();
        assert_eq!(cok.invariants(), &[1]);
        assert!(proj.compose(&f).unwrap().is_zero_map());
        assert!(proj.is_surjective_map());
        // exactness bookkeeping: |ker| * |im| = |domain|
        assert_eq!(ker.cardinality() * img.cardinality(), m.cardinality());
    }

    #[test]
    fn kernel_image_cokernel_field() {
        let f2 = BaseRing::FiniteField { p: 2, e: 1 };
        let dom = FinModule::free(f2, 2);
        let cod = FinModule::free(f2, 1);
        // [1 0]: projection onto first coordinate
        let f = ModuleMap::new(dom.clone(), cod.clone(), vec![1, 0]).unwrap();
        let (ker, incl) = f.kernel();
        assert_eq!(ker.rank(), 1);
        assert!(f.compose(&incl).unwrap().is_zero_map());
        let (img, _, _) = f.image();
        assert_eq!(img.rank(), 1);
        let (cok, _) = f.cokernel();
        assert_eq!(cok.rank(), 0);
    }

    #[test]
    fn big_sum_structure_maps() {
        let parts = [z4_mod(&[2]), z4_mod(&[1]), z4_mod(&[2])];
        let (sum, incls, projs) = big_direct_sum(z4(), &parts);
        assert_eq!(sum.invariants(), &[1, 2, 2]);
        for (i, (inc, proj)) in incls.iter().zip(&projs).enumerate() {
            assert_eq!(proj.compose(inc).unwrap(), ModuleMap::identity(&parts[i]));
            for (j, other) in incls.iter().enumerate() {
                if i != j {
                    assert!(projs[i].compose(other).unwrap().is_zero_map());
                }
            }
        }
        // sum of inc∘proj is the identity
        let mut acc = ModuleMap::zero(&sum, &sum);
        for (inc, proj) in incls.iter().zip(&projs) {
            acc = acc.add(&inc.compose(proj).unwrap()).unwrap();
        }
        assert_eq!(acc, ModuleMap::identity(&sum));
    }
}
