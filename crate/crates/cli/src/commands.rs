use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde_json::{json, Value};

use relaynet::oracle::{oracle_region, search_scheme, SearchBudget};
use relaynet::region::capacity_region;
use relaynet::scheme::linear::decode_report;
use relaynet::scheme::{identity_relay_baseline, Technique};
use relaynet::{verify_rate, GainProfile, Gf2Matrix, Gf2Vector, LinearScheme, RatePair, SchemeDocument, Topology};

use crate::input::{self, ProfileArgs};
use crate::{emit, BudgetArgs, Failure, Format, OutputArgs};

const DEFAULT_CANDIDATES: u64 = 1_000_000;

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("json serializes")
}

fn gains(p: &GainProfile) -> [usize; 8] {
    [p.m11(), p.m12(), p.m21(), p.m22(), p.n11(), p.n12(), p.n21(), p.n22()]
}

fn csv_prefix(p: &GainProfile) -> String {
    let g = gains(p).map(|e| e.to_string()).join(",");
    format!("{},{},{g}", p.topology().as_str(), p.q())
}

const PROFILE_CSV_HEADER: &str = "topology,q,m11,m12,m21,m22,n11,n12,n21,n22";

fn target_in_range(q: usize, r1: usize, r2: usize) -> Result<RatePair, Failure> {
    let t = RatePair::new(r1, r2);
    t.check_range(q)?;
    Ok(t)
}

impl BudgetArgs {
    fn budget(&self, randomized_by_default: bool) -> SearchBudget {
        let budget = match (self.exhaustive, self.candidates) {
            (true, _) => SearchBudget::exhaustive(),
            (false, Some(n)) => SearchBudget::randomized(n, self.seed),
            (false, None) if randomized_by_default => SearchBudget::randomized(DEFAULT_CANDIDATES, self.seed),
            (false, None) => SearchBudget::exhaustive(),
        };
        match self.ceiling {
            Some(c) => budget.with_ceiling(c),
            None => budget,
        }
    }
}

pub fn region(profile: &GainProfile, out: &OutputArgs) -> Result<(), Failure> {
    let region = capacity_region(profile)?;
    let text = match out.format.unwrap_or(Format::Json) {
        Format::Json => region.to_json(),
        Format::Csv => region.to_csv(),
    };
    emit(out.output.as_ref(), &text)
}

pub fn verify(
    scheme_file: &Path,
    profile: &ProfileArgs,
    r1: Option<usize>,
    r2: Option<usize>,
    out: &OutputArgs,
) -> Result<(), Failure> {
    let text = fs::read_to_string(scheme_file).map_err(|e| Failure::Input(format!("{}: {e}", scheme_file.display())))?;
    let mut doc = SchemeDocument::from_json(&text).map_err(|e| Failure::Input(format!("{}: {e}", scheme_file.display())))?;
    if !profile.is_empty() {
        doc.profile = profile.resolve_over(Some(&doc.profile))?;
    }
    let scheme = doc.to_scheme()?;
    let have = scheme.rates();
    let target = target_in_range(doc.profile.q(), r1.unwrap_or(have.r1), r2.unwrap_or(have.r2))?;

    // Extra demanded bits count as unresolved dimensions.
    let carried = RatePair::new(target.r1.min(have.r1), target.r2.min(have.r2));
    let used = scheme.truncate(carried)?;
    let mut reports = Vec::new();
    for (dest, rate) in [(1, target.r1), (2, target.r2)] {
        let r = decode_report(&doc.profile, &used, dest)?;
        reports.push((dest, rate, r.resolvable));
    }
    let pass = reports.iter().all(|&(_, rate, res)| rate == res);

    let rendered = match out.format.unwrap_or(Format::Json) {
        Format::Json => pretty(&json!({
            "profile": doc.profile,
            "target": [target.r1, target.r2],
            "scheme_rates": [have.r1, have.r2],
            "pass": pass,
            "destinations": reports.iter().map(|&(dest, rate, res)| json!({
                "dest": dest,
                "rate": rate,
                "resolvable": res,
                "deficit": rate - res,
            })).collect::<Vec<_>>(),
        })),
        Format::Csv => {
            let mut s = String::from("dest,rate,resolvable,deficit\n");
            for &(dest, rate, res) in &reports {
                let _ = writeln!(s, "{dest},{rate},{res},{}", rate - res);
            }
            s
        }
    };
    emit(out.output.as_ref(), &rendered)?;
    if pass {
        return Ok(());
    }
    let failing: Vec<String> = reports
        .iter()
        .filter(|&&(_, rate, res)| rate != res)
        .map(|&(dest, rate, res)| format!("D{dest} resolves {res} of {rate} bits (rank deficit {})", rate - res))
        .collect();
    Err(Failure::Verification(format!("fails at {target}: {}", failing.join("; "))))
}

pub fn search(profile: &GainProfile, r1: usize, r2: usize, budget: &BudgetArgs, out: &OutputArgs) -> Result<(), Failure> {
    let target = target_in_range(profile.q(), r1, r2)?;
    let budget = budget.budget(true);
    match search_scheme(profile, target, &budget)? {
        Some(scheme) => emit(out.output.as_ref(), &SchemeDocument::new(profile, &scheme).to_json()),
        None => Err(Failure::Verification(format!("not found: no one-shot linear scheme at {target}"))),
    }
}

/// Maps from the stacked message `[w1; w2]` to the signal at every node.
struct Symbolic {
    r1: usize,
    rows: Vec<(&'static str, Gf2Matrix)>,
}

impl Symbolic {
    fn new(profile: &GainProfile, s: &LinearScheme) -> Result<Self, Failure> {
        let q = profile.q();
        let RatePair { r1, r2 } = s.rates();
        let x1 = s.encoder(0).hstack(&Gf2Matrix::zeros(q, r2))?;
        let x2 = Gf2Matrix::zeros(q, r1).hstack(s.encoder(1))?;
        let rx = |hop: &dyn Fn(usize, usize) -> Gf2Matrix, i: usize, a: &Gf2Matrix, b: &Gf2Matrix| {
            hop(i, 0).mul(a)?.add(&hop(i, 1).mul(b)?)
        };
        let first = |i, j| profile.first_hop(i, j);
        let second = |i, j| profile.second_hop(i, j);
        let y1p = rx(&first, 0, &x1, &x2)?;
        let y2p = rx(&first, 1, &x1, &x2)?;
        let x1p = s.relay_map(0).mul(&y1p)?;
        let x2p = s.relay_map(1).mul(&y2p)?;
        let y1 = rx(&second, 0, &x1p, &x2p)?;
        let y2 = rx(&second, 1, &x1p, &x2p)?;
        Ok(Symbolic {
            r1,
            rows: vec![
                ("X1", x1),
                ("X2", x2),
                ("Y'1", y1p),
                ("Y'2", y2p),
                ("X'1", x1p),
                ("X'2", x2p),
                ("Y1", y1),
                ("Y2", y2),
            ],
        })
    }

    fn term(&self, col: usize) -> String {
        if col < self.r1 {
            format!("x1({})", col + 1)
        } else {
            format!("x2({})", col - self.r1 + 1)
        }
    }

    fn entry(&self, m: &Gf2Matrix, level: usize) -> String {
        let terms: Vec<String> = (0..m.cols()).filter(|&c| m.get(level, c)).map(|c| self.term(c)).collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

fn default_bits(len: usize) -> Vec<u8> {
    (0..len).map(|k| u8::from(k % 2 == 0)).collect()
}

fn message(arg: Option<&str>, rate: usize, name: &str) -> Result<Gf2Vector, Failure> {
    let bits = match arg {
        Some(text) => input::parse_bits(text)?,
        None => default_bits(rate),
    };
    if bits.len() != rate {
        return Err(Failure::Input(format!("{name} needs {rate} bits, got {}", bits.len())));
    }
    Ok(Gf2Vector::from_bits(&bits)?)
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "pass"
    } else {
        "fail"
    }
}

pub fn demo(technique: Technique, w1: Option<&str>, w2: Option<&str>, output: Option<&PathBuf>) -> Result<(), Failure> {
    let profile = technique.profile();
    let target = technique.target();
    let scheme = technique.build(&profile)?;
    let w1 = message(w1, target.r1, "--w1")?;
    let w2 = message(w2, target.r2, "--w2")?;
    let trace = scheme.trace(&profile, &w1, &w2)?;
    let symbolic = Symbolic::new(&profile, &scheme)?;

    let mut t = String::new();
    let _ = writeln!(t, "technique: {}", technique.name());
    let _ = writeln!(t, "profile:   {profile}");
    let _ = writeln!(t, "target:    {target}");
    for (name, m) in [
        ("A1", scheme.encoder(0)),
        ("A2", scheme.encoder(1)),
        ("G1", scheme.relay_map(0)),
        ("G2", scheme.relay_map(1)),
    ] {
        let _ = writeln!(t, "\n{name} ({}x{}):", m.rows(), m.cols());
        if m.cols() == 0 {
            let _ = writeln!(t, "  (no columns)");
        }
        for row in m.to_rows().iter().filter(|r| !r.is_empty()) {
            let bits: Vec<String> = row.iter().map(u8::to_string).collect();
            let _ = writeln!(t, "  {}", bits.join(" "));
        }
    }
    let _ = writeln!(t, "\nsample messages: w1 = {w1}, w2 = {w2}");
    let samples = [
        &trace.x1, &trace.x2, &trace.y1p, &trace.y2p, &trace.x1p, &trace.x2p, &trace.y1, &trace.y2,
    ];
    let width = (0..profile.q())
        .flat_map(|level| symbolic.rows.iter().map(move |(_, m)| (m, level)))
        .map(|(m, level)| symbolic.entry(m, level).len())
        .max()
        .unwrap_or(1);
    for ((name, m), sample) in symbolic.rows.iter().zip(samples) {
        let _ = writeln!(t, "\n{name}:");
        for level in 0..profile.q() {
            let _ = writeln!(
                t,
                "  level {}  {:<width$}  = {}",
                level + 1,
                symbolic.entry(m, level),
                u8::from(sample.get(level))
            );
        }
    }
    let ok = verify_rate(&profile, &scheme, target);
    let baseline = verify_rate(&profile, &identity_relay_baseline(&scheme), target);
    let _ = writeln!(t, "\nverify at {target}: {}", verdict(ok));
    let _ = writeln!(t, "identity relays at {target}: {}", verdict(baseline));

    let doc = SchemeDocument::new(&profile, &scheme).to_json();
    match output {
        Some(path) => {
            emit(None, &t)?;
            emit(Some(path), &doc)?;
        }
        None => {
            let _ = writeln!(t, "\nscheme:");
            t.push_str(&doc);
            emit(None, &t)?;
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification(format!("{} scheme fails at {target}", technique.name())))
    }
}

struct CheckRow {
    profile: GainProfile,
    oracle: Vec<RatePair>,
    theorem: Option<Vec<RatePair>>,
}

impl CheckRow {
    fn matches(&self) -> bool {
        self.theorem.as_ref().is_none_or(|t| *t == self.oracle)
    }
}

fn pairs(points: &[RatePair]) -> Vec<[usize; 2]> {
    points.iter().map(|p| [p.r1, p.r2]).collect()
}

pub fn check(topology: Topology, q: usize, budget: &BudgetArgs, out: &OutputArgs) -> Result<(), Failure> {
    let budget = budget.budget(false);
    let mut profiles = GainProfile::enumerate(topology, q);
    profiles.sort();
    let rows = profiles
        .par_iter()
        .map(|p| -> Result<CheckRow, Failure> {
            let oracle = oracle_region(p, &budget)?.region.pareto_points();
            let theorem = match topology {
                Topology::Xx => None,
                _ => Some(capacity_region(p)?.pareto_points()),
            };
            Ok(CheckRow {
                profile: *p,
                oracle,
                theorem,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let exact = budget.mode == relaynet::oracle::SearchMode::Exhaustive;
    let mode = if exact { "exhaustive" } else { "randomized" };
    let bad: Vec<&CheckRow> = rows.iter().filter(|r| !r.matches()).collect();
    let summary = if topology == Topology::Xx {
        format!("oracle inner bound only for {} xx profiles (no closed form to compare)", rows.len())
    } else if bad.is_empty() {
        format!("all profiles match ({} of {})", rows.len(), rows.len())
    } else {
        format!("{} of {} profiles differ", bad.len(), rows.len())
    };

    let rendered = match out.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut doc = json!({
                "topology": topology,
                "q": q,
                "mode": mode,
                "profiles": rows.len(),
                "summary": summary,
            });
            if topology == Topology::Xx {
                doc["label"] = json!("oracle inner bound");
                doc["regions"] = rows
                    .iter()
                    .map(|r| json!({"profile": r.profile, "oracle_pareto": pairs(&r.oracle)}))
                    .collect();
            } else {
                doc["matches"] = json!(rows.len() - bad.len());
                doc["discrepancies"] = bad
                    .iter()
                    .map(|r| {
                        json!({
                            "profile": r.profile,
                            "theorem_pareto": pairs(r.theorem.as_deref().unwrap_or_default()),
                            "oracle_pareto": pairs(&r.oracle),
                        })
                    })
                    .collect();
            }
            pretty(&doc)
        }
        Format::Csv => {
            let mut s = format!("{PROFILE_CSV_HEADER},status,oracle_pareto,theorem_pareto\n");
            let fmt = |pts: &[RatePair]| pts.iter().map(|p| format!("{}:{}", p.r1, p.r2)).collect::<Vec<_>>().join(";");
            for r in &rows {
                let status = match &r.theorem {
                    None => "inner-bound",
                    Some(_) if r.matches() => "match",
                    Some(_) => "differ",
                };
                let theorem = r.theorem.as_deref().map(fmt).unwrap_or_default();
                let _ = writeln!(s, "{},{status},{},{theorem}", csv_prefix(&r.profile), fmt(&r.oracle));
            }
            s
        }
    };
    emit(out.output.as_ref(), &rendered)?;
    eprintln!("{summary}");
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Failure::Verification(summary))
    }
}

pub fn sweep(base: &GainProfile, vary: &[String], out: &OutputArgs) -> Result<(), Failure> {
    let axes = vary.iter().map(|v| input::parse_axis(v)).collect::<Result<Vec<_>, _>>()?;
    let grid = input::grid(base, &axes)?;
    let rows = grid
        .par_iter()
        .map(|p| Ok((*p, capacity_region(p)?.pareto_points())))
        .collect::<Result<Vec<_>, relaynet::Error>>()?;
    let rendered = match out.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = format!("{PROFILE_CSV_HEADER},r1,r2\n");
            for (p, points) in &rows {
                for pt in points {
                    let _ = writeln!(s, "{},{},{}", csv_prefix(p), pt.r1, pt.r2);
                }
            }
            s
        }
        Format::Json => pretty(&Value::Array(
            rows.iter()
                .map(|(p, points)| json!({"profile": p, "pareto": pairs(points)}))
                .collect(),
        )),
    };
    emit(out.output.as_ref(), &rendered)
}
