//! Exact computations with representations of quivers over finite base rings.
//!
//! The toolkit decides injectivity (and the Gorenstein variants) of quiver
//! representations through local criteria (vertexwise injective modules plus
//! split-epi source maps) and backs every verdict with a machine-checkable
//! certificate or an independent brute-force oracle. Coefficients are the
//! finite rings ℤ/pᵏ and 𝔽_q, where module theory is fully decidable: every
//! module is carried in invariant-factor normal form and all linear algebra
//! is exact (Smith normal form over ℤ, Gaussian elimination over 𝔽_q).
//!
//! Module map:
//! - [`ring`]: base rings, finite modules, module maps, exact solvers.
//! - [`quiver`]: quivers, infinite-quiver descriptors, stratification,
//!   barren trees, the source-injective classifier.
//! - [`rep`]: representations, morphisms, (co)kernels, Hom enumeration.
//! - [`adjoint`]: the right adjoint of evaluation and its ray extension.
//! - [`inject`]: injectivity verdicts, the Baer oracle, constructive
//!   extension, tree decomposition, torsion and envelopes on the ray quiver.
//! - [`homdim`]: duality, flatness, injective dimension, Gorenstein tests.
//! - [`selftest`]: the seeded acceptance suite run by tests and the CLI.

pub mod adjoint;
pub mod error;
pub mod homdim;
pub mod inject;
pub mod quiver;
pub mod rep;
pub mod ring;
pub mod selftest;

pub use error::{Error, Result};

/// Enumeration budget shared by every exhaustive search in the toolkit.
///
/// The default of 2¹⁶ candidate tuples keeps all shipped computations at
/// desk scale; callers may raise it explicitly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_candidates: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_candidates: 1 << 16,
        }
    }
}

impl Budget {
    pub fn new(max_candidates: u64) -> Self {
        Budget { max_candidates }
    }

    /// Errors out when `needed` exceeds the budget.
    pub fn check(&self, needed: u128) -> Result<()> {
        if needed > self.max_candidates as u128 {
            Err(Error::BudgetExceeded {
                needed,
                budget: self.max_candidates,
            })
        } else {
            Ok(())
        }
    }
}
