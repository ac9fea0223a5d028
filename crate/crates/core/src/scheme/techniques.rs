//! The four interference-management techniques as explicit schemes on small
//! canonical networks (`q = 3`).
//!
//! Each builder writes down fixed encoders and relay maps and then checks them
//! end to end; a profile on which they do not achieve the technique's rate
//! pair is rejected with [`Error::RegimeMismatch`].

use super::linear::{verify_rate, LinearScheme, SchemeMeta};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::network::{GainProfile, Topology};
use crate::region::RatePair;

const Q: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Technique {
    Separation,
    Alignment,
    Suppression,
    Neutralization,
}

impl Technique {
    pub const ALL: [Technique; 4] = [
        Technique::Separation,
        Technique::Alignment,
        Technique::Suppression,
        Technique::Neutralization,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Technique::Separation => "separation",
            Technique::Alignment => "alignment",
            Technique::Suppression => "suppression",
            Technique::Neutralization => "neutralization",
        }
    }

    pub fn target(self) -> RatePair {
        match self {
            Technique::Separation | Technique::Alignment => RatePair::new(1, 2),
            Technique::Suppression => RatePair::new(3, 2),
            Technique::Neutralization => RatePair::new(2, 3),
        }
    }

    /// Network the technique is shown on.
    pub fn profile(self) -> GainProfile {
        match self {
            Technique::Separation => separation_profile(),
            Technique::Alignment => alignment_profile(),
            Technique::Suppression => suppression_profile(),
            Technique::Neutralization => neutralization_profile(),
        }
    }

    pub fn build(self, profile: &GainProfile) -> Result<LinearScheme> {
        match self {
            Technique::Separation => build_separation(profile),
            Technique::Alignment => build_alignment(profile),
            Technique::Suppression => build_suppression(profile),
            Technique::Neutralization => build_neutralization(profile),
        }
    }
}

impl std::fmt::Display for Technique {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Technique {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Technique::ALL
            .into_iter()
            .find(|t| t.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown technique {s:?}"))
    }
}

/// ZS network where D1 hears a single bit from R1 and the cut around the
/// destinations caps the sum rate at 3.
/// `(m11, m12, m22) = (2, 3, 3)`, `(n11, n21, n22) = (1, 3, 1)`.
pub fn separation_profile() -> GainProfile {
    GainProfile::zs(Q, 2, 3, 3, 1, 3, 1).expect("valid constant")
}

/// XX network with a single R2 -> D2 level, so R1 has to carry part of W2.
/// `m = [[3, 2], [1, 3]]`, `n = [[2, 1], [3, 1]]` (rows are receivers).
pub fn alignment_profile() -> GainProfile {
    GainProfile::new(Q, Topology::Xx, [[3, 2], [1, 3]], [[2, 1], [3, 1]]).expect("valid constant")
}

/// `(m11, m12, m22) = (3, 2, 2)`, `(n11, n12, n22) = (3, 2, 2)`.
pub fn suppression_profile() -> GainProfile {
    GainProfile::zz(Q, 3, 2, 2, 3, 2, 2).expect("valid constant")
}

/// `(m11, m12, m22) = (2, 2, 3)`, `(n11, n12, n22) = (2, 2, 3)`.
pub fn neutralization_profile() -> GainProfile {
    GainProfile::zz(Q, 2, 2, 3, 2, 2, 3).expect("valid constant")
}

/// `q x cols` matrix with ones at the listed `(row, col)` entries.
fn ones(rows: usize, cols: usize, at: &[(usize, usize)]) -> Gf2Matrix {
    Gf2Matrix::from_fn(rows, cols, |i, j| at.contains(&(i, j)))
}

fn checked(
    profile: &GainProfile,
    technique: Technique,
    topology: Option<Topology>,
    parts: [Gf2Matrix; 4],
) -> Result<LinearScheme> {
    let name = technique.name();
    let mismatch = |reason: String| Error::RegimeMismatch {
        technique: name,
        reason,
    };
    if profile.q() != Q {
        return Err(mismatch(format!("needs q = {Q}, got {}", profile.q())));
    }
    if let Some(t) = topology.filter(|&t| t != profile.topology()) {
        return Err(mismatch(format!("needs a {t} profile, got {}", profile.topology())));
    }
    let [a1, a2, g1, g2] = parts;
    let scheme = LinearScheme::new(a1, a2, g1, g2)?.with_meta(SchemeMeta::new(name));
    let target = technique.target();
    if !verify_rate(profile, &scheme, target) {
        return Err(mismatch(format!("the construction does not reach {target} on {profile}")));
    }
    Ok(scheme)
}

/// `X1 = (x1(1), 0, 0)`, `X2 = (x2(1), 0, x2(2))`: R1 sees
/// `(x2(1), x1(1), x2(2))` with no bit summed, and forwards
/// `(x1(1), x2(1), 0)`; R2 forwards `(x2(2), 0, 0)`.
pub fn build_separation(profile: &GainProfile) -> Result<LinearScheme> {
    checked(
        profile,
        Technique::Separation,
        None,
        [
            ones(Q, 1, &[(0, 0)]),
            ones(Q, 2, &[(0, 0), (2, 1)]),
            ones(Q, Q, &[(0, 1), (1, 0)]),
            ones(Q, Q, &[(0, 2)]),
        ],
    )
}

/// `X1 = (x1(1), 0, 0)`, `X2 = (x2(1), x2(2), 0)`. R1 forwards
/// `(x1(1), x2(1), 0)` and R2 forwards `(x2(2), 0, 0)`, so both W2 bits
/// land on the bottom level of D1: `Y1 = (0, x1(1), x2(1) + x2(2))`.
pub fn build_alignment(profile: &GainProfile) -> Result<LinearScheme> {
    checked(
        profile,
        Technique::Alignment,
        None,
        [
            ones(Q, 1, &[(0, 0)]),
            ones(Q, 2, &[(0, 0), (1, 1)]),
            ones(Q, Q, &[(0, 0), (1, 1)]),
            ones(Q, Q, &[(0, 1)]),
        ],
    )
}

/// `X1 = (a1, a2, a3)`, `X2 = (c1, c2, 0)`. R1 can only forward
/// `(a1, a2 + c1, a3 + c2)`; R2 lifts its clean copy `(0, c1, c2)` to
/// `(c1, c2, 0)` so it meets the interfered levels at D1 and removes them.
pub fn build_suppression(profile: &GainProfile) -> Result<LinearScheme> {
    checked(
        profile,
        Technique::Suppression,
        Some(Topology::Zz),
        [
            Gf2Matrix::identity(Q),
            ones(Q, 2, &[(0, 0), (1, 1)]),
            Gf2Matrix::identity(Q),
            ones(Q, Q, &[(0, 1), (1, 2)]),
        ],
    )
}

/// `X1 = (a1, a2, 0)`, `X2 = (c1, c2, c3)`. R1 receives
/// `(0, a1 + c1, a2 + c2)` and shifts it up one level; R2 forwards its input.
/// At D1 the copies of `c1, c2` from the two relays cancel.
pub fn build_neutralization(profile: &GainProfile) -> Result<LinearScheme> {
    checked(
        profile,
        Technique::Neutralization,
        Some(Topology::Zz),
        [
            ones(Q, 2, &[(0, 0), (1, 1)]),
            Gf2Matrix::identity(Q),
            ones(Q, Q, &[(0, 1), (1, 2)]),
            Gf2Matrix::identity(Q),
        ],
    )
}

/// Same encoders with both relays forwarding their input unchanged.
pub fn identity_relay_baseline(scheme: &LinearScheme) -> LinearScheme {
    let q = scheme.q();
    LinearScheme::new(
        scheme.encoder(0).clone(),
        scheme.encoder(1).clone(),
        Gf2Matrix::identity(q),
        Gf2Matrix::identity(q),
    )
    .expect("shapes")
    .with_meta(SchemeMeta::new("identity-relays"))
}
