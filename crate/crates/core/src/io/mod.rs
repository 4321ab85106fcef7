//! Files, generation, rendering and measurement.

pub mod bench;
pub mod format;
pub mod generate;
pub mod profile;
pub mod render;

pub use bench::{bench, BenchRow};
pub use format::{trace_digest, CertificateFlags, InstanceFile, Loaded, Metadata, SolutionFile, WitnessRecord};
pub use generate::{generate, generate_instance, Profile};
pub use profile::{profile_altitudes, ProfileRow};
pub use render::{render_svg, RenderOptions};
