use std::fs;
use std::path::{Path, PathBuf};

use clap::Args;
use serde_json::{json, Value};

use relaynet::{GainProfile, Topology};

use crate::Failure;

/// Network given by a JSON file, inline flags, or both (flags win).
#[derive(Args, Debug, Clone, Default)]
pub struct ProfileArgs {
    /// Profile JSON file: {"q": .., "topology": .., "m": [[..],[..]], "n": [[..],[..]]}
    #[arg(long, value_name = "FILE")]
    pub profile: Option<PathBuf>,
    #[arg(long)]
    pub topology: Option<Topology>,
    #[arg(long)]
    pub q: Option<usize>,
    /// First-layer exponents m11,m12,m21,m22 (m_ij is S_j -> R_i)
    #[arg(long, value_name = "M11,M12,M21,M22", allow_hyphen_values = true)]
    pub m: Option<String>,
    /// Second-layer exponents n11,n12,n21,n22 (n_ij is R_j -> D_i)
    #[arg(long, value_name = "N11,N12,N21,N22", allow_hyphen_values = true)]
    pub n: Option<String>,
}

impl ProfileArgs {
    pub fn is_empty(&self) -> bool {
        self.profile.is_none() && self.topology.is_none() && self.q.is_none() && self.m.is_none() && self.n.is_none()
    }

    /// Builds the profile, starting from `base` (a profile embedded elsewhere)
    /// when no file is given.
    pub fn resolve_over(&self, base: Option<&GainProfile>) -> Result<GainProfile, Failure> {
        let mut doc = match (&self.profile, base) {
            (Some(path), _) => read_json(path)?,
            (None, Some(p)) => serde_json::to_value(p).expect("profile serializes"),
            (None, None) => json!({}),
        };
        let obj = doc
            .as_object_mut()
            .ok_or_else(|| Failure::Input("profile JSON must be an object".into()))?;
        if let Some(t) = self.topology {
            obj.insert("topology".into(), json!(t));
        }
        if let Some(q) = self.q {
            obj.insert("q".into(), json!(q));
        }
        if let Some(m) = &self.m {
            obj.insert("m".into(), quadruple("--m", m)?);
        }
        if let Some(n) = &self.n {
            obj.insert("n".into(), quadruple("--n", n)?);
        }
        for key in ["topology", "q", "m", "n"] {
            if !obj.contains_key(key) {
                return Err(Failure::Input(format!("profile is missing `{key}` (use --{key} or --profile)")));
            }
        }
        serde_json::from_value(doc).map_err(|e| Failure::Input(format!("invalid profile: {e}")))
    }

    pub fn resolve(&self) -> Result<GainProfile, Failure> {
        self.resolve_over(None)
    }
}

/// `"a,b,c,d"` to `[[a, b], [c, d]]`.
fn quadruple(flag: &str, text: &str) -> Result<Value, Failure> {
    let parts: Vec<i64> = text
        .split(',')
        .map(|s| s.trim().parse::<i64>())
        .collect::<Result<_, _>>()
        .map_err(|e| Failure::Input(format!("{flag} {text:?}: {e}")))?;
    if parts.len() != 4 {
        return Err(Failure::Input(format!("{flag} needs four comma-separated exponents, got {text:?}")));
    }
    Ok(json!([[parts[0], parts[1]], [parts[2], parts[3]]]))
}

pub fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Bit string such as `"101"`.
pub fn parse_bits(text: &str) -> Result<Vec<u8>, Failure> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Failure::Input(format!("message bits must be 0/1, got {text:?}"))),
        })
        .collect()
}

/// One axis of a sweep grid: `name=lo..hi`, inclusive.
#[derive(Clone, Debug)]
pub struct Axis {
    pub layer: usize,
    pub i: usize,
    pub j: usize,
    pub name: String,
    pub values: Vec<usize>,
}

pub fn parse_axis(text: &str) -> Result<Axis, Failure> {
    let bad = || Failure::Input(format!("--vary expects NAME=LO..HI with NAME like m12 or n21, got {text:?}"));
    let (name, range) = text.split_once('=').ok_or_else(bad)?;
    let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
    let lo: usize = lo.trim().parse().map_err(|_| bad())?;
    let hi: usize = hi.trim().parse().map_err(|_| bad())?;
    let name = name.trim();
    let b = name.as_bytes();
    if b.len() != 3 || !matches!(b[0], b'm' | b'n') || !matches!(b[1], b'1' | b'2') || !matches!(b[2], b'1' | b'2') {
        return Err(bad());
    }
    Ok(Axis {
        layer: usize::from(b[0] == b'n'),
        i: (b[1] - b'1') as usize,
        j: (b[2] - b'1') as usize,
        name: name.to_string(),
        values: (lo..=hi).collect(),
    })
}

/// Every profile of the grid, in lexicographic order of the axes as given.
pub fn grid(base: &GainProfile, axes: &[Axis]) -> Result<Vec<GainProfile>, Failure> {
    let mut out = vec![*base];
    for axis in axes {
        let mut next = Vec::new();
        for p in &out {
            for &v in &axis.values {
                let (mut m, mut n) = (p.m(), p.n());
                if axis.layer == 0 {
                    m[axis.i][axis.j] = v;
                } else {
                    n[axis.i][axis.j] = v;
                }
                next.push(p.with_gains(m, n).map_err(|e| Failure::Input(format!("{} = {v}: {e}", axis.name)))?);
            }
        }
        out = next;
    }
    Ok(out)
}
