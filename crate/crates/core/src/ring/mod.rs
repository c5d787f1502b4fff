//! Exact linear algebra and decidable module theory over the shipped rings.
//!
//! Two families of coefficient rings are supported: ℤ/pᵏ (p prime, k ≥ 1)
//! and the finite fields 𝔽_q (q a prime power). Both are quasi-Frobenius,
//! so injective = projective for modules and the whole module theory is
//! decidable: a finite module is a direct sum of cyclic pieces whose sorted
//! invariant factors are a complete isomorphism invariant.

mod certificate;
mod map;
mod module;
mod ops;
pub mod snf;
mod solve;

pub use certificate::Certificate;
pub use map::{big_direct_sum, sum_inclusion, sum_projection, ModuleMap};
pub use module::{DirectSum, ElementIter, FinModule};
pub use ops::{
    baer_criterion_module, dual_map, hom_module, injective_hull, linear_solve, module_classify,
    pontryagin_dual, split_epi_witness, submodule_element_sets, submodules, Dim, HomModule,
    ModuleClass, SplitFailure,
};
pub(crate) use ops::submodule_from_elements;
pub use solve::{
    solve_element, solve_extension, solve_retraction, solve_section, MapExpr, MapSystem,
};

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Descriptor of a shipped coefficient ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BaseRing {
    /// ℤ/pᵏ with p prime and k ≥ 1.
    ZmodPk { p: u64, k: u32 },
    /// 𝔽_q with q = pᵉ a prime power. Elements are residues 0..q encoding
    /// polynomials over 𝔽_p in base-p digits; arithmetic is modulo a fixed
    /// irreducible polynomial (the lexicographically least monic one).
    FiniteField { p: u64, e: u32 },
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl BaseRing {
    pub fn zmod_pk(p: u64, k: u32) -> Result<BaseRing> {
        if !is_prime(p) {
            return Err(Error::Validation(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::Validation("exponent k must be >= 1".into()));
        }
        if (p as u128).pow(k) > u32::MAX as u128 {
            return Err(Error::Validation(format!("p^k = {p}^{k} too large")));
        }
        Ok(BaseRing::ZmodPk { p, k })
    }

    pub fn finite_field(q: u64) -> Result<BaseRing> {
        let (p, e) = split_prime_power(q)
            .ok_or_else(|| Error::Validation(format!("{q} is not a prime power")))?;
        if q > u32::MAX as u64 {
            return Err(Error::Validation(format!("q = {q} too large")));
        }
        Ok(BaseRing::FiniteField { p, e })
    }

    /// Parses the CLI ring syntax: `zmod:p^k` or `gf:q`.
    pub fn parse(text: &str) -> Result<BaseRing> {
        let err = || Error::Validation(format!("cannot parse ring descriptor {text:?}"));
        if let Some(rest) = text.strip_prefix("zmod:") {
            let (p, k) = match rest.split_once('^') {
                Some((p, k)) => (
                    p.parse::<u64>().map_err(|_| err())?,
                    k.parse::<u32>().map_err(|_| err())?,
                ),
                None => (rest.parse::<u64>().map_err(|_| err())?, 1),
            };
            BaseRing::zmod_pk(p, k)
        } else if let Some(rest) = text.strip_prefix("gf:") {
            BaseRing::finite_field(rest.parse::<u64>().map_err(|_| err())?)
        } else {
            Err(err())
        }
    }

    pub fn is_field(&self) -> bool {
        match self {
            BaseRing::ZmodPk { k, .. } => *k == 1,
            BaseRing::FiniteField { .. } => true,
        }
    }

    /// Every shipped ring is quasi-Frobenius (hence 0-Gorenstein).
    pub fn is_quasi_frobenius(&self) -> bool {
        true
    }

    /// Every shipped ring is noetherian (it is finite).
    pub fn is_noetherian(&self) -> bool {
        true
    }

    pub fn prime(&self) -> u64 {
        match self {
            BaseRing::ZmodPk { p, .. } | BaseRing::FiniteField { p, .. } => *p,
        }
    }

    /// Number of elements of the ring.
    pub fn size(&self) -> u64 {
        match self {
            BaseRing::ZmodPk { p, k } => p.pow(*k),
            BaseRing::FiniteField { p, e } => p.pow(*e),
        }
    }

    /// Chain length of the ring as a module over itself: k for ℤ/pᵏ, 1 for a field.
    pub fn top_exponent(&self) -> u32 {
        match self {
            BaseRing::ZmodPk { k, .. } => *k,
            BaseRing::FiniteField { .. } => 1,
        }
    }

    pub fn zero(&self) -> u64 {
        0
    }

    pub fn one(&self) -> u64 {
        1
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        match self {
            BaseRing::ZmodPk { .. } => (a + b) % self.size(),
            BaseRing::FiniteField { p, e } => {
                if *e == 1 {
                    (a + b) % p
                } else {
                    digit_zip(*p, *e, a, b, |x, y| (x + y) % p)
                }
            }
        }
    }

    pub fn neg(&self, a: u64) -> u64 {
        match self {
            BaseRing::ZmodPk { .. } => (self.size() - a % self.size()) % self.size(),
            BaseRing::FiniteField { p, e } => {
                if *e == 1 {
                    (p - a % p) % p
                } else {
                    digit_zip(*p, *e, a, 0, |x, _| (p - x) % p)
                }
            }
        }
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        match self {
            BaseRing::ZmodPk { .. } => ((a as u128 * b as u128) % self.size() as u128) as u64,
            BaseRing::FiniteField { p, e } => {
                if *e == 1 {
                    ((a as u128 * b as u128) % *p as u128) as u64
                } else {
                    gf_mul(*p, *e, a, b)
                }
            }
        }
    }

    /// Multiplicative inverse, when `a` is a unit.
    pub fn inv(&self, a: u64) -> Option<u64> {
        if a == 0 {
            return None;
        }
        match self {
            BaseRing::ZmodPk { p, .. } => {
                if a % p == 0 {
                    return None;
                }
                // walk the powers of a until they wrap to 1; the previous
                // power is the inverse (the unit group is finite)
                let m = self.size();
                let mut prev = 1u64;
                let mut acc = a % m;
                for _ in 0..m {
                    if acc == 1 {
                        return Some(prev);
                    }
                    prev = acc;
                    acc = ((acc as u128 * a as u128) % m as u128) as u64;
                }
                None
            }
            BaseRing::FiniteField { .. } => {
                let q = self.size();
                (1..q).find(|&b| self.mul(a, b) == 1)
            }
        }
    }

    /// All ring elements in numeric order.
    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.size()
    }
}

fn split_prime_power(q: u64) -> Option<(u64, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= q {
        if q % p == 0 {
            let mut n = q;
            let mut e = 0;
            while n % p == 0 {
                n /= p;
                e += 1;
            }
            return if n == 1 { Some((p, e)) } else { None };
        }
        p += 1;
    }
    Some((q, 1))
}

/// Digit-wise operation on base-p encodings of 𝔽_{p^e} elements.
fn digit_zip(p: u64, e: u32, a: u64, b: u64, f: impl Fn(u64, u64) -> u64) -> u64 {
    let mut a = a;
    let mut b = b;
    let mut out = 0u64;
    let mut scale = 1u64;
    for _ in 0..e {
        out += f(a % p, b % p) * scale;
        a /= p;
        b /= p;
        scale *= p;
    }
    out
}

fn to_digits(p: u64, e: u32, mut a: u64) -> Vec<u64> {
    let mut v = Vec::with_capacity(e as usize);
    for _ in 0..e {
        v.push(a % p);
        a /= p;
    }
    v
}

fn from_digits(p: u64, digits: &[u64]) -> u64 {
    digits.iter().rev().fold(0, |acc, &d| acc * p + d)
}

/// Cache of irreducible polynomials for the non-prime fields.
static IRREDUCIBLE: OnceLock<Mutex<HashMap<(u64, u32), Vec<u64>>>> = OnceLock::new();

/// Coefficients (ascending degree, length e+1, monic) of the least monic
/// irreducible polynomial of degree e over 𝔽_p.
fn irreducible_poly(p: u64, e: u32) -> Vec<u64> {
    let cache = IRREDUCIBLE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    if let Some(f) = guard.get(&(p, e)) {
        return f.clone();
    }
    let deg = e as usize;
    let count = p.pow(e);
    let mut found = None;
    'search: for low in 0..count {
        let mut coeffs = to_digits(p, e, low);
        coeffs.push(1); // monic
        if poly_is_irreducible(p, &coeffs) {
            found = Some(coeffs);
            break 'search;
        }
    }
    let f = found.unwrap_or_else(|| panic!("no irreducible polynomial of degree {deg} over F_{p}"));
    guard.insert((p, e), f.clone());
    f
}

/// Irreducibility by trial division by all monic polynomials of degree <= deg/2.
fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut g = to_digits(p, d as u32, low);
            g.push(1);
            if poly_rem(p, f, &g).iter().all(|&c| c == 0) {
                return false;
            }
        }
    }
    true
}

/// Remainder of a by b over 𝔽_p (b monic), ascending coefficients.
fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    let db = b.len() - 1;
    while r.len() > db {
        let lead = *r.last().unwrap() % p;
        let shift = r.len() - 1 - db;
        if lead != 0 {
            for i in 0..=db {
                let idx = shift + i;
                let sub = (lead as u128 * b[i] as u128 % p as u128) as u64;
                r[idx] = (r[idx] + p - sub % p) % p;
            }
        }
        r.pop();
    }
    r.iter_mut().for_each(|c| *c %= p);
    r
}

fn gf_mul(p: u64, e: u32, a: u64, b: u64) -> u64 {
    let da = to_digits(p, e, a);
    let db = to_digits(p, e, b);
    let mut prod = vec![0u64; 2 * e as usize];
    for (i, &x) in da.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in db.iter().enumerate() {
            prod[i + j] = (prod[i + j] + (x as u128 * y as u128 % p as u128) as u64) % p;
        }
    }
    let f = irreducible_poly(p, e);
    let mut rem = poly_rem(p, &prod, &f);
    rem.resize(e as usize, 0);
    from_digits(p, &rem)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_parse_and_flags() {
        let r = BaseRing::parse("zmod:2^2").unwrap();
        assert_eq!(r, BaseRing::ZmodPk { p: 2, k: 2 });
        assert!(!r.is_field());
        assert!(r.is_quasi_frobenius());
        assert!(r.is_noetherian());

        let f = BaseRing::parse("gf:4").unwrap();
        assert_eq!(f, BaseRing::FiniteField { p: 2, e: 2 });
        assert!(f.is_field());

        assert!(BaseRing::parse("zmod:4^1").is_err()); // 4 not prime
        assert!(BaseRing::parse("gf:6").is_err()); // 6 not a prime power
    }

    #[test]
    fn zmod_arithmetic() {
        let r = BaseRing::ZmodPk { p: 2, k: 2 };
        assert_eq!(r.add(3, 3), 2);
        assert_eq!(r.mul(2, 2), 0);
        assert_eq!(r.neg(1), 3);
        assert_eq!(r.inv(3), Some(3));
        assert_eq!(r.inv(2), None);
    }

    #[test]
    fn gf4_is_a_field() {
        let f = BaseRing::finite_field(4).unwrap();
        // every nonzero element invertible, and x * x != 0 for x != 0
        for a in 1..4 {
            let inv = f.inv(a).unwrap();
            assert_eq!(f.mul(a, inv), 1);
        }
        // characteristic 2: a + a = 0
        for a in 0..4 {
            assert_eq!(f.add(a, a), 0);
        }
        // multiplicative group cyclic of order 3
        let g = 2u64;
        assert_eq!(f.mul(g, f.mul(g, g)), 1);
    }

    #[test]
    fn gf9_field_axioms() {
        let f = BaseRing::finite_field(9).unwrap();
        for a in 0..9 {
            for b in 0..9 {
                assert_eq!(f.mul(a, b), f.mul(b, a));
                for c in 0..9 {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                }
            }
        }
        for a in 1..9 {
            assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
        }
    }
}
