// SPDX-License-Identifier: Apache-2.0

//! Shared inputs for the criterion benches.

use chronokg_core::generate::{plain_ontology, random_log, LogParams};
use chronokg_core::ChangeLog;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const RELATIONS: usize = 5;

/// A seeded log of `events` attempted events over 200 entities.
pub fn generated_log(events: usize) -> ChangeLog {
    let p = LogParams {
        events,
        entities: 200,
        relations: RELATIONS,
        ..LogParams::default()
    };
    random_log(
        &mut ChaCha8Rng::seed_from_u64(42),
        plain_ontology(RELATIONS),
        &p,
    )
}
