use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{Gf2Matrix, Gf2Vector};
use crate::network::GainProfile;
use crate::region::RatePair;

/// How a scheme was obtained.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeMeta {
    /// Name of the builder or search that produced the scheme.
    pub origin: String,
    /// Set when part of the scheme came from search instead of an explicit recipe.
    #[serde(default)]
    pub fallback: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl SchemeMeta {
    pub fn new(origin: impl Into<String>) -> Self {
        SchemeMeta {
            origin: origin.into(),
            fallback: false,
            notes: Vec::new(),
        }
    }
}

/// One-shot linear scheme: `X_i = A_i W_i` at the sources and `X'_i = G_i Y'_i` at the relays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearScheme {
    q: usize,
    a1: Gf2Matrix,
    a2: Gf2Matrix,
    g1: Gf2Matrix,
    g2: Gf2Matrix,
    pub meta: SchemeMeta,
}

impl LinearScheme {
    pub fn new(a1: Gf2Matrix, a2: Gf2Matrix, g1: Gf2Matrix, g2: Gf2Matrix) -> Result<Self> {
        let q = g1.rows();
        for (name, m, cols) in [
            ("A1", &a1, None),
            ("A2", &a2, None),
            ("G1", &g1, Some(q)),
            ("G2", &g2, Some(q)),
        ] {
            if m.rows() != q || cols.is_some_and(|c| m.cols() != c) {
                return Err(Error::DimensionMismatch {
                    op: name,
                    left: (q, cols.unwrap_or(m.cols())),
                    right: m.shape(),
                });
            }
        }
        Ok(LinearScheme {
            q,
            a1,
            a2,
            g1,
            g2,
            meta: SchemeMeta::default(),
        })
    }

    pub fn with_meta(mut self, meta: SchemeMeta) -> Self {
        self.meta = meta;
        self
    }

    /// Scheme that sends nothing.
    pub fn silent(q: usize) -> Self {
        LinearScheme::new(
            Gf2Matrix::zeros(q, 0),
            Gf2Matrix::zeros(q, 0),
            Gf2Matrix::zeros(q, q),
            Gf2Matrix::zeros(q, q),
        )
        .expect("consistent shapes")
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn rates(&self) -> RatePair {
        RatePair::new(self.a1.cols(), self.a2.cols())
    }

    pub fn encoder(&self, source: usize) -> &Gf2Matrix {
        match source {
            0 => &self.a1,
            1 => &self.a2,
            _ => panic!("source index {source} out of range"),
        }
    }

    pub fn relay_map(&self, relay: usize) -> &Gf2Matrix {
        match relay {
            0 => &self.g1,
            1 => &self.g2,
            _ => panic!("relay index {relay} out of range"),
        }
    }

    /// Keeps only the listed message columns of each encoder. Dropping columns
    /// never breaks decodability, so this turns a scheme for a rate pair into
    /// one for any dominated pair.
    pub fn restrict(&self, keep1: &[usize], keep2: &[usize]) -> LinearScheme {
        LinearScheme {
            q: self.q,
            a1: self.a1.select_columns(keep1),
            a2: self.a2.select_columns(keep2),
            g1: self.g1.clone(),
            g2: self.g2.clone(),
            meta: self.meta.clone(),
        }
    }

    /// Restriction to the first `target.r1` / `target.r2` message bits.
    pub fn truncate(&self, target: RatePair) -> Result<LinearScheme> {
        let have = self.rates();
        if !target.dominated_by(&have) {
            return Err(Error::InfeasibleRate {
                r1: target.r1,
                r2: target.r2,
            });
        }
        let k1: Vec<usize> = (0..target.r1).collect();
        let k2: Vec<usize> = (0..target.r2).collect();
        Ok(self.restrict(&k1, &k2))
    }

    fn check_profile(&self, profile: &GainProfile) -> Result<()> {
        if profile.q() != self.q {
            return Err(Error::DimensionMismatch {
                op: "scheme vs profile",
                left: (self.q, self.q),
                right: (profile.q(), profile.q()),
            });
        }
        Ok(())
    }

    /// End-to-end maps `P[i][j]` from message `j` to destination `i`:
    /// `(N_i1 G1 M_1j + N_i2 G2 M_2j) A_j`.
    pub fn transfers(&self, profile: &GainProfile) -> Result<[[Gf2Matrix; 2]; 2]> {
        self.check_profile(profile)?;
        let relay_out = |relay: usize, source: usize| -> Result<Gf2Matrix> {
            self.relay_map(relay)
                .mul(&profile.first_hop(relay, source))?
                .mul(self.encoder(source))
        };
        let out = [[relay_out(0, 0)?, relay_out(0, 1)?], [relay_out(1, 0)?, relay_out(1, 1)?]];
        let dest = |i: usize, j: usize| -> Result<Gf2Matrix> {
            profile
                .second_hop(i, 0)
                .mul(&out[0][j])?
                .add(&profile.second_hop(i, 1).mul(&out[1][j])?)
        };
        Ok([[dest(0, 0)?, dest(0, 1)?], [dest(1, 0)?, dest(1, 1)?]])
    }

    /// Every node's signal for the given messages.
    pub fn trace(&self, profile: &GainProfile, w1: &Gf2Vector, w2: &Gf2Vector) -> Result<Trace> {
        self.check_profile(profile)?;
        let x1 = self.a1.apply(w1)?;
        let x2 = self.a2.apply(w2)?;
        let (y1p, y2p) = profile.first_layer(&x1, &x2)?;
        let x1p = self.g1.apply(&y1p)?;
        let x2p = self.g2.apply(&y2p)?;
        let (y1, y2) = profile.second_layer(&x1p, &x2p)?;
        Ok(Trace {
            x1,
            x2,
            y1p,
            y2p,
            x1p,
            x2p,
            y1,
            y2,
        })
    }
}

/// Signals at every node for one channel use.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub x1: Gf2Vector,
    pub x2: Gf2Vector,
    pub y1p: Gf2Vector,
    pub y2p: Gf2Vector,
    pub x1p: Gf2Vector,
    pub x2p: Gf2Vector,
    pub y1: Gf2Vector,
    pub y2: Gf2Vector,
}

/// Rank bookkeeping for one destination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DecodeReport {
    pub dest: usize,
    pub rate: usize,
    /// Dimension of the desired signal left after projecting out interference.
    pub resolvable: usize,
}

impl DecodeReport {
    pub fn deficit(&self) -> usize {
        self.rate - self.resolvable
    }

    pub fn ok(&self) -> bool {
        self.resolvable == self.rate
    }
}

/// `rank([signal | interference]) - rank(interference)`: how many message
/// dimensions survive once the interference span is quotiented out. The
/// message is uniquely decodable for every interfering value iff this equals
/// the number of signal columns.
pub(crate) fn resolvable_dimension(signal: &Gf2Matrix, interference: &Gf2Matrix) -> Result<usize> {
    let joint = signal.hstack(interference)?.rank();
    Ok(joint - interference.rank())
}

/// Decodability report for destination `dest` (1 or 2).
pub fn decode_report(profile: &GainProfile, scheme: &LinearScheme, dest: usize) -> Result<DecodeReport> {
    if !(1..=2).contains(&dest) {
        return Err(Error::MalformedMatrix(format!("destination {dest} is not 1 or 2")));
    }
    let p = scheme.transfers(profile)?;
    let (i, other) = (dest - 1, 2 - dest);
    Ok(DecodeReport {
        dest,
        rate: p[i][i].cols(),
        resolvable: resolvable_dimension(&p[i][i], &p[i][other])?,
    })
}

/// True iff `D_dest` recovers `W_dest` for every value of the other message.
pub fn decodable(profile: &GainProfile, scheme: &LinearScheme, dest: usize) -> Result<bool> {
    Ok(decode_report(profile, scheme, dest)?.ok())
}

/// True iff the scheme carries exactly `target` and both destinations decode.
pub fn verify_rate(profile: &GainProfile, scheme: &LinearScheme, target: RatePair) -> bool {
    if scheme.rates() != target || scheme.q() != profile.q() {
        return false;
    }
    matches!(decodable(profile, scheme, 1), Ok(true)) && matches!(decodable(profile, scheme, 2), Ok(true))
}

/// Scheme file: encoders and relay maps as row-major bit arrays.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SchemeDocument {
    pub profile: GainProfile,
    pub target: [usize; 2],
    pub a1: Vec<Vec<u8>>,
    pub a2: Vec<Vec<u8>>,
    pub g1: Vec<Vec<u8>>,
    pub g2: Vec<Vec<u8>>,
    #[serde(default)]
    pub meta: SchemeMeta,
}

impl SchemeDocument {
    pub fn new(profile: &GainProfile, scheme: &LinearScheme) -> Self {
        let r = scheme.rates();
        SchemeDocument {
            profile: *profile,
            target: [r.r1, r.r2],
            a1: scheme.a1.to_rows(),
            a2: scheme.a2.to_rows(),
            g1: scheme.g1.to_rows(),
            g2: scheme.g2.to_rows(),
            meta: scheme.meta.clone(),
        }
    }

    /// Rebuilds the scheme, checking shapes against the profile and the target.
    pub fn to_scheme(&self) -> Result<LinearScheme> {
        let q = self.profile.q();
        let encoder = |rows: &[Vec<u8>], rate: usize, name: &'static str| -> Result<Gf2Matrix> {
            // An empty list stands for a q x 0 encoder.
            let m = if rows.is_empty() {
                Gf2Matrix::zeros(q, 0)
            } else {
                Gf2Matrix::from_rows(rows)?
            };
            if m.shape() != (q, rate) {
                return Err(Error::DimensionMismatch {
                    op: name,
                    left: (q, rate),
                    right: m.shape(),
                });
            }
            Ok(m)
        };
        let relay = |rows: &[Vec<u8>], name: &'static str| -> Result<Gf2Matrix> {
            // An empty list stands for a relay that stays silent.
            let m = if rows.is_empty() {
                Gf2Matrix::zeros(q, q)
            } else {
                Gf2Matrix::from_rows(rows)?
            };
            if m.shape() != (q, q) {
                return Err(Error::DimensionMismatch {
                    op: name,
                    left: (q, q),
                    right: m.shape(),
                });
            }
            Ok(m)
        };
        let scheme = LinearScheme::new(
            encoder(&self.a1, self.target[0], "A1")?,
            encoder(&self.a2, self.target[1], "A2")?,
            relay(&self.g1, "G1")?,
            relay(&self.g2, "G2")?,
        )?;
        Ok(scheme.with_meta(self.meta.clone()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scheme serializes")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}
