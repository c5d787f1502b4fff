//! Finite modules in invariant-factor normal form.

use super::BaseRing;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A finite module over a shipped ring, kept in normal form at all times.
///
/// Over ℤ/pᵏ the module is ⊕ᵢ ℤ/p^{aᵢ} and `invariants` is the ascending
/// list of exponents aᵢ (1 ≤ aᵢ ≤ k). Over 𝔽_q every invariant is 1 and the
/// length of the list is the dimension. The zero module has an empty list;
/// normal forms are unique, so equality of values is isomorphism.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FinModule {
    ring: BaseRing,
    invariants: Vec<u32>,
}

impl FinModule {
    pub fn new(ring: BaseRing, mut invariants: Vec<u32>) -> Result<Self> {
        let top = ring.top_exponent();
        for &a in &invariants {
            if a == 0 || a > top {
                return Err(Error::Validation(format!(
                    "invariant exponent {a} out of range 1..={top}"
                )));
            }
        }
        invariants.sort_unstable();
        Ok(FinModule { ring, invariants })
    }

    pub fn zero(ring: BaseRing) -> Self {
        FinModule {
            ring,
            invariants: Vec::new(),
        }
    }

    /// Free module of the given rank (vector space over a field).
    pub fn free(ring: BaseRing, rank: usize) -> Self {
        FinModule {
            ring,
            invariants: vec![ring.top_exponent(); rank],
        }
    }

    pub fn ring(&self) -> BaseRing {
        self.ring
    }

    pub fn invariants(&self) -> &[u32] {
        &self.invariants
    }

    /// Number of cyclic generators in the normal form.
    pub fn rank(&self) -> usize {
        self.invariants.len()
    }

    pub fn is_zero(&self) -> bool {
        self.invariants.is_empty()
    }

    /// Additive order of the i-th canonical generator.
    pub fn generator_order(&self, i: usize) -> u64 {
        match self.ring {
            BaseRing::ZmodPk { p, .. } => p.pow(self.invariants[i]),
            BaseRing::FiniteField { .. } => self.ring.size(),
        }
    }

    /// Exponent of the i-th invariant factor (field generators count as 1).
    pub fn generator_exponent(&self, i: usize) -> u32 {
        self.invariants[i]
    }

    pub fn cardinality(&self) -> u128 {
        (0..self.rank()).fold(1u128, |acc, i| acc * self.generator_order(i) as u128)
    }

    /// Direct sum in normal form, together with the four structure maps
    /// (inclusions of and projections onto the two summands).
    pub fn direct_sum(&self, other: &FinModule) -> DirectSum {
        assert_eq!(self.ring, other.ring);
        // Merge the two sorted invariant lists, remembering where each
        // original generator lands.
        let mut tagged: Vec<(u32, usize, usize)> = Vec::new(); // (exp, side, index)
        for (i, &a) in self.invariants.iter().enumerate() {
            tagged.push((a, 0, i));
        }
        for (i, &a) in other.invariants.iter().enumerate() {
            tagged.push((a, 1, i));
        }
        tagged.sort_by_key(|&(a, side, i)| (a, side, i));
        let sum = FinModule {
            ring: self.ring,
            invariants: tagged.iter().map(|&(a, _, _)| a).collect(),
        };
        let mut pos_left = vec![0usize; self.rank()];
        let mut pos_right = vec![0usize; other.rank()];
        for (slot, &(_, side, i)) in tagged.iter().enumerate() {
            if side == 0 {
                pos_left[i] = slot;
            } else {
                pos_right[i] = slot;
            }
        }
        DirectSum {
            module: sum,
            left_positions: pos_left,
            right_positions: pos_right,
        }
    }

    /// All elements, coordinates in generator order (mixed-radix counter).
    pub fn elements(&self) -> ElementIter {
        ElementIter {
            orders: (0..self.rank()).map(|i| self.generator_order(i)).collect(),
            next: Some(vec![0; self.rank()]),
        }
    }

    /// Reduces integer coordinates into canonical range.
    pub fn reduce_element(&self, coords: &[i128]) -> Vec<u64> {
        assert_eq!(coords.len(), self.rank());
        coords
            .iter()
            .enumerate()
            .map(|(i, &c)| c.rem_euclid(self.generator_order(i) as i128) as u64)
            .collect()
    }

    pub fn zero_element(&self) -> Vec<u64> {
        vec![0; self.rank()]
    }

    pub fn add_elements(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        (0..self.rank())
            .map(|i| match self.ring {
                BaseRing::ZmodPk { .. } => (a[i] + b[i]) % self.generator_order(i),
                BaseRing::FiniteField { .. } => self.ring.add(a[i], b[i]),
            })
            .collect()
    }

    pub fn scale_element(&self, c: u64, a: &[u64]) -> Vec<u64> {
        (0..self.rank())
            .map(|i| match self.ring {
                BaseRing::ZmodPk { .. } => {
                    ((c as u128 * a[i] as u128) % self.generator_order(i) as u128) as u64
                }
                BaseRing::FiniteField { .. } => self.ring.mul(c, a[i]),
            })
            .collect()
    }
}

/// Direct sum of two modules plus coordinate bookkeeping. The sum is
/// re-sorted into normal form, so each original generator is tracked to its
/// slot in the merged invariant list.
#[derive(Debug, Clone)]
pub struct DirectSum {
    pub module: FinModule,
    pub left_positions: Vec<usize>,
    pub right_positions: Vec<usize>,
}

pub struct ElementIter {
    orders: Vec<u64>,
    next: Option<Vec<u64>>,
}

impl Iterator for ElementIter {
    type Item = Vec<u64>;
    fn next(&mut self) -> Option<Vec<u64>> {
        let current = self.next.take()?;
        let mut bump = current.clone();
        let mut i = 0;
        loop {
            if i == self.orders.len() {
                // overflowed: `current` was the last element
                self.next = None;
                break;
            }
            bump[i] += 1;
            if bump[i] < self.orders[i] {
                self.next = Some(bump);
                break;
            }
            bump[i] = 0;
            i += 1;
        }
        Some(current)
    }
}
