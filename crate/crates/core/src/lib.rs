//! Deterministic two-stage relay-interference networks.
//!
//! * [`gf2`]: bit-packed matrices and vectors over GF(2).
//! * [`network`]: gain profiles, layer transfers and cut values.
//! * [`region`]: closed-form ZS and ZZ capacity regions.
//! * [`scheme`]: one-shot linear schemes, decodability and constructions.
//! * [`oracle`]: exhaustive and randomized search for schemes.

pub mod error;
pub mod gf2;
pub mod network;
pub mod oracle;
pub mod region;
pub mod scheme;

pub use error::{Error, Result};
pub use gf2::{Gf2Matrix, Gf2Vector};
pub use network::{cut_value, gain_to_exponent, CutSpec, GainProfile, Node, Topology};
pub use region::{RatePair, RateRegion};
pub use scheme::{decodable, verify_rate, LinearScheme, SchemeDocument, Technique};

#[cfg(doctest)]
#[doc = include_str!("../../../README.md")]
struct ReadmeDoctests;
