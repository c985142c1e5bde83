//! Fixed inputs shared by the benchmarks.

use std::sync::Arc;

use hopfkit_core::ribbon::random_graph_of_genus;
use hopfkit_core::{CrossedModule, FiniteGroup, Group, RibbonGraph};
use rand::rngs::StdRng;
use rand::SeedableRng;

pub fn s3() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::symmetric(3))
}

/// `A3 ↪ S3` with the conjugation action.
pub fn s3_a3() -> CrossedModule {
    let b = s3();
    let rotation = (0..b.order()).find(|&x| b.element_order(x) == 3).expect("S3 has a 3-cycle");
    CrossedModule::normal_subgroup(b, &[rotation]).expect("A3 is normal")
}

/// Conjugation crossed module of `S3` with identity boundary.
pub fn s3_identity() -> CrossedModule {
    CrossedModule::identity_boundary(s3()).expect("valid crossed module")
}

/// Seeded random ribbon graph of the given genus.
pub fn random_graph(genus: usize, seed: u64) -> RibbonGraph {
    let mut rng = StdRng::seed_from_u64(seed);
    random_graph_of_genus(&mut rng, genus, 4, 2 * genus + 4)
}
