//! Flip distances between alpha-orientations of plane and sphere graphs.
//!
//! Two alpha-orientations of the same embedded graph differ on an Eulerian
//! set of edges. Its face potential gives the flip distance directly, and a
//! peeled cycle system of it drives the construction of a minimum flip
//! sequence. The [`oracle`] module recomputes everything by brute force.

pub mod cli;
pub mod cycles;
pub mod dot;
pub mod embed;
pub mod error;
pub mod fixture;
pub mod flips;
pub mod oracle;
pub mod orient;
pub mod potential;

pub use cycles::{
    classify_and_nest, standard_cycle_system, standard_cycle_system_seeded, Cycle, CycleSystem,
    Sense,
};
pub use embed::{parse_embedding, Embedding, Face, FaceId, HalfEdge, Mode};
pub use error::{Error, ErrorKind, Result};
pub use fixture::Instance;
pub use flips::{
    apply_flip, certificate, comparable, cycle_count_distance, flip_sequence, flippable_faces,
    greedy_sequence, plane_distance, reverse_ccw_cycle, reverse_nested, sphere_distance, Distance,
    DistanceCertificate, FlipSequence,
};
pub use orient::{
    difference, find_alpha_orientation, is_alpha_orientation, AlphaSpec, EulerianDifference,
    Orientation,
};
pub use potential::{
    plane_potential, potential_from_cycles, sphere_potential, z_min, PotentialMap,
};

#[cfg(test)]
pub(crate) mod test_fixtures {
    use std::path::PathBuf;

    use crate::fixture::Instance;

    pub fn fixture_path(name: &str) -> PathBuf {
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("../../fixtures")
            .join(format!("{name}.json"))
    }

    pub fn fixture_text(name: &str) -> String {
        std::fs::read_to_string(fixture_path(name)).expect("fixture readable")
    }

    pub fn fixture(name: &str) -> Instance {
        Instance::from_json(&fixture_text(name)).expect("fixture parses")
    }

    /// The kite with the rotation at vertex 2 reversed, which no longer embeds in the plane.
    pub fn kite_scrambled() -> String {
        let text = fixture_text("kite");
        assert!(text.contains("[1, 2, 4]"));
        text.replacen("[1, 2, 4]", "[1, 4, 2]", 1)
    }
}
