//! Shared inputs for the benchmarks.

use apsieve_core::classifier::reference;
use apsieve_core::{PrimeContext, SpaceType};

pub fn p3() -> PrimeContext {
    PrimeContext::new(3).expect("3 is prime")
}

pub fn space(halves: &[u32]) -> SpaceType {
    SpaceType::new(p3(), halves.to_vec()).expect("valid type")
}

/// The rank-3 candidates that reach the final classification.
pub fn candidates() -> Vec<SpaceType> {
    (1..=4).flat_map(reference::case_list).map(|h| space(h)).collect()
}

/// Types eliminated by the scripted Steenrod arguments.
pub fn steenrod_targets() -> Vec<SpaceType> {
    reference::STEENROD_ELIMINATED.iter().map(|h| space(h)).collect()
}
