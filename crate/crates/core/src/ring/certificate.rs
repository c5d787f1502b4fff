//! Machine-checkable witnesses at the module level.

use super::map::ModuleMap;
use serde::{Deserialize, Serialize};

/// A certificate is re-checkable by pure composition and equality of maps;
/// `verify` performs exactly that check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Certificate {
    /// A section of a split epimorphism: epi ∘ section = id.
    Section { epi: ModuleMap, section: ModuleMap },
    /// An exact chain: consecutive composites vanish and image = kernel
    /// (checked by cardinality once the composite is zero).
    Resolution { maps: Vec<ModuleMap> },
    /// A mutually inverse pair.
    Isomorphism {
        forward: ModuleMap,
        backward: ModuleMap,
    },
}

impl Certificate {
    pub fn verify(&self) -> bool {
        match self {
            Certificate::Section { epi, section } => match epi.compose(section) {
                Ok(c) => c == ModuleMap::identity(epi.codomain()),
                Err(_) => false,
            },
            Certificate::Resolution { maps } => {
                for w in maps.windows(2) {
                    let (first, second) = (&w[0], &w[1]);
                    match second.compose(first) {
                        Ok(c) if c.is_zero_map() => {}
                        _ => return false,
                    }
                    let (img, _, _) = first.image();
                    let (ker, _) = second.kernel();
                    if img.cardinality() != ker.cardinality() {
                        return false;
                    }
                }
                true
            }
            Certificate::Isomorphism { forward, backward } => {
                let fb = forward.compose(backward);
                let bf = backward.compose(forward);
                match (fb, bf) {
                    (Ok(fb), Ok(bf)) => {
                        fb == ModuleMap::identity(forward.codomain())
                            && bf == ModuleMap::identity(forward.domain())
                    }
                    _ => false,
                }
            }
        }
    }
}
