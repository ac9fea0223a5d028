//! One-shot linear coding schemes.

pub mod achievability;
pub mod linear;
pub mod techniques;

pub use achievability::{count_full_z_paths, zs_achievability, zz_achievability};
pub use linear::{decodable, decode_report, verify_rate, DecodeReport, LinearScheme, SchemeDocument, SchemeMeta, Trace};
pub use techniques::{
    build_alignment, build_neutralization, build_separation, build_suppression, identity_relay_baseline, Technique,
};
