//! Rate-pair constructions for the ZS and ZZ networks by splitting the
//! subnodes into isolated components.
//!
//! Levels are indexed from the top: a link of gain `g` carries the sender's
//! levels `0..g` onto the receiver's positions `q - g..q`.

use super::linear::{verify_rate, LinearScheme, SchemeMeta};
use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::network::{GainProfile, Topology};
use crate::oracle::{complete_scheme, search_scheme, SearchBudget, Slot};
use crate::region::{zs_region, zz_region, RatePair};

const RESIDUAL_CANDIDATES: u64 = 200_000;
const FULL_SEARCH_CANDIDATES: u64 = 2_000_000;

/// Source level of every message bit plus `(input position, output level)`
/// forwarding pairs at each relay.
#[derive(Clone, Debug, Default)]
struct Routing {
    levels: [Vec<usize>; 2],
    hops: [Vec<(usize, usize)>; 2],
}

impl Routing {
    /// Encoders get `rates` columns; columns past the routed bits stay zero.
    fn scheme(&self, q: usize, rates: RatePair) -> LinearScheme {
        let enc = |levels: &[usize], width: usize| Gf2Matrix::from_fn(q, width, |i, k| levels.get(k) == Some(&i));
        let relay = |hops: &[(usize, usize)]| Gf2Matrix::from_fn(q, q, |tx, rx| hops.contains(&(rx, tx)));
        LinearScheme::new(
            enc(&self.levels[0], rates.r1),
            enc(&self.levels[1], rates.r2),
            relay(&self.hops[0]),
            relay(&self.hops[1]),
        )
        .expect("routing shapes")
    }
}

fn expect_topology(profile: &GainProfile, expected: Topology) -> Result<()> {
    if profile.topology() != expected {
        return Err(Error::WrongTopology {
            expected,
            actual: profile.topology(),
        });
    }
    Ok(())
}

fn infeasible(target: RatePair) -> Error {
    Error::InfeasibleRate {
        r1: target.r1,
        r2: target.r2,
    }
}

/// The top `top` levels together with the lowest `r - top` of `0..width`,
/// merged in order and cut to `r` from the bottom.
fn top_and_lowest(width: usize, top: usize, r: usize) -> Vec<usize> {
    let low = r.saturating_sub(top).min(width);
    let mut out: Vec<usize> = (0..top.min(width)).chain(width - low..width).collect();
    out.sort_unstable();
    out.dedup();
    out.truncate(r);
    out
}

fn without(range: std::ops::Range<usize>, taken: &[usize]) -> Vec<usize> {
    range.filter(|x| !taken.contains(x)).collect()
}

fn finish(scheme: LinearScheme, origin: &str, fallback: bool, notes: Vec<String>) -> LinearScheme {
    scheme.with_meta(SchemeMeta {
        origin: origin.to_string(),
        fallback,
        notes,
    })
}

fn full_search(profile: &GainProfile, target: RatePair, origin: &str, mut notes: Vec<String>) -> Result<LinearScheme> {
    let budget = SearchBudget::randomized(FULL_SEARCH_CANDIDATES, 0);
    match search_scheme(profile, target, &budget)? {
        Some(s) => {
            notes.push("decomposition failed; whole-network search".to_string());
            Ok(finish(s, origin, true, notes))
        }
        None => Err(Error::SearchFailed {
            r1: target.r1,
            r2: target.r2,
        }),
    }
}

/// R1 output levels carrying W1 in the ZS decomposition, in order of
/// preference: the `(n11 - n21)^+` levels that reach D1 but miss D2, then the
/// top `(n21 - n22)^+`, which land on D2 above everything R2 reaches, then the
/// lowest remaining levels. Returned sorted.
fn zs_relay_levels(n11: usize, n21: usize, n22: usize, r1: usize) -> Vec<usize> {
    let order = (n21.min(n11)..n11)
        .rev()
        .chain(0..n21.saturating_sub(n22).min(n11))
        .chain((0..n11).rev());
    let mut out: Vec<usize> = Vec::new();
    for level in order {
        if out.len() == r1 {
            break;
        }
        if !out.contains(&level) {
            out.push(level);
        }
    }
    out.sort_unstable();
    out
}

/// Scheme for `target` on a ZS network.
///
/// Component N1 takes the top `(m11 - m12)^+` and the lowest remaining S1
/// levels reaching R1, forwarded onto the R1 levels picked by
/// [`zs_relay_levels`]. Every S2 level landing on those R1
/// positions and every R2 level landing on the D2 positions they reach is
/// silenced. W2 uses the rest: first by routing distinct S2 levels onto
/// distinct D2 positions (a bipartite matching), otherwise by a restricted
/// search flagged as fallback.
pub fn zs_achievability(profile: &GainProfile, target: RatePair) -> Result<LinearScheme> {
    expect_topology(profile, Topology::Zs)?;
    if !zs_region(profile)?.contains(target) {
        return Err(infeasible(target));
    }
    let q = profile.q();
    let (a, b, c) = (profile.m11(), profile.m12(), profile.m22());
    let (d, e, f) = (profile.n11(), profile.n21(), profile.n22());
    let (r1, r2) = (target.r1, target.r2);

    let s1 = top_and_lowest(a, a.saturating_sub(b), r1);
    let r1_out = zs_relay_levels(d, e, f, r1);
    let r1_in: Vec<usize> = s1.iter().map(|t| q - a + t).collect();
    let s2_blocked: Vec<usize> = r1_in.iter().filter(|&&p| p + b >= q).map(|p| p + b - q).collect();
    let r2_blocked: Vec<usize> = r1_out.iter().filter(|&&u| u < e && u + f >= e).map(|u| u + f - e).collect();

    let mut routing = Routing::default();
    routing.levels[0] = s1;
    routing.hops[0] = r1_in.iter().copied().zip(r1_out.iter().copied()).collect();

    let s2_free = without(0..b.max(c), &s2_blocked);
    let r1_free = without(0..e, &r1_out);
    let r2_free = without(0..f, &r2_blocked);
    let notes = vec![format!("N1 carries {r1} bits")];

    // Edges from an S2 level to a D2 position: (position, relay, relay input, relay output).
    let edges: Vec<Vec<(usize, usize, usize, usize)>> = s2_free
        .iter()
        .map(|&t| {
            let mut out = Vec::new();
            if t < b {
                out.extend(r1_free.iter().map(|&u| (q - e + u, 0, q - b + t, u)));
            }
            if t < c {
                out.extend(r2_free.iter().map(|&u| (q - f + u, 1, q - c + t, u)));
            }
            out
        })
        .collect();
    let matched = max_matching(&edges, q);
    if matched.len() >= r2 {
        let mut routed = routing.clone();
        for &(left, edge) in matched.iter().take(r2) {
            let (_, relay, rx, tx) = edges[left][edge];
            routed.levels[1].push(s2_free[left]);
            routed.hops[relay].push((rx, tx));
        }
        let scheme = routed.scheme(q, target);
        if verify_rate(profile, &scheme, target) {
            return Ok(finish(scheme, "zs-decomposition", false, notes));
        }
    }

    let mut free = Vec::new();
    free.extend(s2_free.iter().flat_map(|&t| (0..r2).map(move |k| (Slot::Encoder(1), t, k))));
    let r1_rx = without(q - b..q, &r1_in);
    free.extend(r1_free.iter().flat_map(|&u| r1_rx.iter().map(move |&p| (Slot::Relay(0), u, p))));
    free.extend(r2_free.iter().flat_map(|&u| (q - c..q).map(move |p| (Slot::Relay(1), u, p))));
    let base = routing.scheme(q, target);
    if let Some(s) = complete_scheme(profile, &base, &free, RESIDUAL_CANDIDATES, 0) {
        if verify_rate(profile, &s, target) {
            let mut notes = notes;
            notes.push("N2 solved by restricted search".to_string());
            return Ok(finish(s, "zs-decomposition", true, notes));
        }
    }
    full_search(profile, target, "zs-decomposition", notes)
}

/// Kuhn's augmenting paths. `edges[left]` lists `(right, ..)` tuples with
/// `right < n_right`; returns `(left, edge index)` sorted by `left`.
fn max_matching(edges: &[Vec<(usize, usize, usize, usize)>], n_right: usize) -> Vec<(usize, usize)> {
    fn augment(
        left: usize,
        edges: &[Vec<(usize, usize, usize, usize)>],
        owner: &mut [Option<(usize, usize)>],
        seen: &mut [bool],
    ) -> bool {
        for (k, edge) in edges[left].iter().enumerate() {
            let right = edge.0;
            if seen[right] {
                continue;
            }
            seen[right] = true;
            if owner[right].is_none_or(|(other, _)| augment(other, edges, owner, seen)) {
                owner[right] = Some((left, k));
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; n_right];
    for left in 0..edges.len() {
        let mut seen = vec![false; n_right];
        augment(left, edges, &mut owner, &mut seen);
    }
    let mut out: Vec<(usize, usize)> = owner.into_iter().flatten().collect();
    out.sort_unstable();
    out
}

/// `(δ_SR, δ_RD, δ)`: full Z paths in each layer of a ZZ network and the
/// resulting number of full ZZ pairs.
pub fn count_full_z_paths(profile: &GainProfile) -> Result<(usize, usize, usize)> {
    expect_topology(profile, Topology::Zz)?;
    let z = |direct: usize, cross: usize, broadcast: usize| {
        direct.min(cross).min(broadcast).min((direct + broadcast).saturating_sub(cross))
    };
    let sr = z(profile.m11(), profile.m12(), profile.m22());
    let rd = z(profile.n11(), profile.n12(), profile.n22());
    Ok((sr, rd, sr.min(rd)))
}

/// Levels of the broadcasting transmitter (S2 in the first layer, R2 in the
/// second) that start a full Z path: they reach both receivers, and the
/// position they hit at the MAC receiver is also reached by the direct link.
fn z_levels(direct: usize, cross: usize, broadcast: usize) -> Vec<usize> {
    (cross.saturating_sub(direct)..cross.min(broadcast)).collect()
}

/// Residual shape left next to the full ZZ pairs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Residual {
    Empty,
    SingleFlow,
    ZChain,
    Zz,
}

impl Residual {
    fn describe(self) -> &'static str {
        match self {
            Residual::Empty => "residual: empty",
            Residual::SingleFlow => "residual: single transmitter/receiver",
            Residual::ZChain => "residual: Z channel cascaded with parallel links",
            Residual::Zz => "residual: ZZ network without full pairs",
        }
    }
}

/// One decomposition of a ZZ network: a set of full ZZ pairs plus the
/// subnodes left over for the residual rates.
struct ZzPlan {
    q: usize,
    gains: [usize; 6],
    target: RatePair,
    pairs: usize,
    routing: Routing,
    residual: RatePair,
    s1: Vec<usize>,
    s2: Vec<usize>,
    r1_in: Vec<usize>,
    r1_out: Vec<usize>,
    r2_in: Vec<usize>,
    r2_out: Vec<usize>,
}

impl ZzPlan {
    /// `first` are the S2 levels and `second` the R2 output levels of the chosen pairs.
    fn new(profile: &GainProfile, target: RatePair, first: &[usize], second: &[usize]) -> Self {
        let q = profile.q();
        let (a, b, c) = (profile.m11(), profile.m12(), profile.m22());
        let (d, e, f) = (profile.n11(), profile.n12(), profile.n22());
        let mut routing = Routing::default();
        let (mut used_s1, mut used_r1_in, mut used_r1_out, mut used_r2_in) = (vec![], vec![], vec![], vec![]);
        for (j, (&cj, &uj)) in first.iter().zip(second).enumerate() {
            let aj = cj + a - b;
            let beta = q - b + cj;
            let out1 = uj + d - e;
            if j < target.r1 {
                routing.levels[0].push(aj);
            }
            if j < target.r2 {
                routing.levels[1].push(cj);
            }
            routing.hops[0].push((beta, out1));
            routing.hops[1].push((q - c + cj, uj));
            used_s1.push(aj);
            used_r1_in.push(beta);
            used_r1_out.push(out1);
            used_r2_in.push(q - c + cj);
        }
        let pairs = first.len();
        ZzPlan {
            q,
            gains: [a, b, c, d, e, f],
            target,
            pairs,
            residual: RatePair::new(target.r1 - pairs.min(target.r1), target.r2 - pairs.min(target.r2)),
            s1: without(0..a, &used_s1),
            s2: without(0..b.max(c), first),
            r1_in: without(q - a.max(b)..q, &used_r1_in),
            r1_out: without(0..d, &used_r1_out),
            r2_in: without(q - c..q, &used_r2_in),
            r2_out: without(0..e.max(f), second),
            routing,
        }
    }

    fn classify(&self) -> Residual {
        let [a, b, _, d, e, _] = self.gains;
        if self.residual == RatePair::new(0, 0) {
            return Residual::Empty;
        }
        if self.residual.r1 == 0 || self.residual.r2 == 0 {
            return Residual::SingleFlow;
        }
        let first = self.s2.iter().any(|&t| t < b && t + a >= b && self.s1.contains(&(t + a - b)));
        let second = self.r2_out.iter().any(|&u| u < e && u + d >= e && self.r1_out.contains(&(u + d - e)));
        if first && second {
            Residual::Zz
        } else {
            Residual::ZChain
        }
    }

    fn notes(&self) -> Vec<String> {
        vec![format!("full ZZ pairs: {}", self.pairs), self.classify().describe().to_string()]
    }

    /// Interference-free routing of the residual rates. W2 bits go on the S2
    /// and R2 levels that spoil the fewest usable W1 subnodes; W1 then takes
    /// what is left clean.
    fn route(&self) -> Option<LinearScheme> {
        let [a, b, c, d, e, f] = self.gains;
        let q = self.q;
        let RatePair { r1: rho1, r2: rho2 } = self.residual;
        let pick = |cands: Vec<(bool, usize)>, n: usize| -> Option<Vec<usize>> {
            let mut cands = cands;
            cands.sort_unstable();
            (cands.len() >= n).then(|| cands.into_iter().take(n).map(|(_, x)| x).collect())
        };
        let spoils_s1 = |t: usize| t < b && t + a >= b && self.s1.contains(&(t + a - b));
        let spoils_r1 = |u: usize| u < e && u + d >= e && self.r1_out.contains(&(u + d - e));
        let s2 = pick(self.s2.iter().filter(|&&t| t < c).map(|&t| (spoils_s1(t), t)).collect(), rho2)?;
        let r2 = pick(self.r2_out.iter().filter(|&&u| u < f).map(|&u| (spoils_r1(u), u)).collect(), rho2)?;
        let s1: Vec<usize> = self
            .s1
            .iter()
            .copied()
            .filter(|&s| !(s + b >= a && s2.contains(&(s + b - a))))
            .take(rho1)
            .collect();
        let r1: Vec<usize> = self
            .r1_out
            .iter()
            .copied()
            .filter(|&v| !(v + e >= d && r2.contains(&(v + e - d))))
            .take(rho1)
            .collect();
        if s1.len() < rho1 || r1.len() < rho1 {
            return None;
        }
        let mut routing = self.routing.clone();
        for (&s, &v) in s1.iter().zip(&r1) {
            routing.levels[0].push(s);
            routing.hops[0].push((q - a + s, v));
        }
        for (&t, &u) in s2.iter().zip(&r2) {
            routing.levels[1].push(t);
            routing.hops[1].push((q - c + t, u));
        }
        Some(routing.scheme(q, self.target))
    }

    /// Restricted search over the residual subnodes only.
    fn search(&self, profile: &GainProfile) -> Option<LinearScheme> {
        let t = self.target;
        let (k1, k2) = (t.r1 - self.residual.r1, t.r2 - self.residual.r2);
        let mut free = Vec::new();
        free.extend(self.s1.iter().flat_map(|&r| (k1..t.r1).map(move |k| (Slot::Encoder(0), r, k))));
        free.extend(self.s2.iter().flat_map(|&r| (k2..t.r2).map(move |k| (Slot::Encoder(1), r, k))));
        free.extend(self.r1_out.iter().flat_map(|&u| self.r1_in.iter().map(move |&p| (Slot::Relay(0), u, p))));
        free.extend(self.r2_out.iter().flat_map(|&u| self.r2_in.iter().map(move |&p| (Slot::Relay(1), u, p))));
        let base = self.routing.scheme(self.q, t);
        complete_scheme(profile, &base, &free, RESIDUAL_CANDIDATES, 0)
    }
}

/// Scheme for `target` on a ZZ network.
///
/// Up to `δ` full ZZ pairs carry one bit of each message and cancel their own
/// interference at D1. The residual rates then go over the remaining
/// subnodes by interference-free routing; when that is not enough the residual
/// is searched (flagged as fallback). Pairs are taken from the top or the
/// bottom of each layer's Z-path range, whichever first leaves a routable
/// residual.
pub fn zz_achievability(profile: &GainProfile, target: RatePair) -> Result<LinearScheme> {
    expect_topology(profile, Topology::Zz)?;
    if !zz_region(profile)?.contains(target) {
        return Err(infeasible(target));
    }
    let (_, _, delta) = count_full_z_paths(profile)?;
    let k = delta.min(target.r1.max(target.r2));
    let first = z_levels(profile.m11(), profile.m12(), profile.m22());
    let second = z_levels(profile.n11(), profile.n12(), profile.n22());
    let side = |v: &[usize], top: bool| -> Vec<usize> {
        if top {
            v[..k].to_vec()
        } else {
            v[v.len() - k..].to_vec()
        }
    };
    let mut plans = Vec::new();
    for (top1, top2) in [(true, true), (true, false), (false, true), (false, false)] {
        let (p1, p2) = (side(&first, top1), side(&second, top2));
        if plans.iter().any(|(x, y, _): &(Vec<usize>, Vec<usize>, ZzPlan)| *x == p1 && *y == p2) {
            continue;
        }
        let plan = ZzPlan::new(profile, target, &p1, &p2);
        if let Some(s) = plan.route().filter(|s| verify_rate(profile, s, target)) {
            return Ok(finish(s, "zz-decomposition", false, plan.notes()));
        }
        plans.push((p1, p2, plan));
    }
    for (_, _, plan) in &plans {
        if let Some(s) = plan.search(profile).filter(|s| verify_rate(profile, s, target)) {
            let mut notes = plan.notes();
            notes.push("residual solved by restricted search".to_string());
            return Ok(finish(s, "zz-decomposition", true, notes));
        }
    }
    full_search(profile, target, "zz-decomposition", plans[0].2.notes())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::region::capacity_region;

    #[test]
    fn selection_helper() {
        assert_eq!(top_and_lowest(3, 1, 2), vec![0, 2]);
        assert_eq!(top_and_lowest(3, 2, 1), vec![0]);
        assert_eq!(top_and_lowest(3, 0, 3), vec![0, 1, 2]);
        assert_eq!(top_and_lowest(2, 2, 2), vec![0, 1]);
        assert_eq!(top_and_lowest(4, 0, 0), Vec::<usize>::new());
    }

    #[test]
    fn relay_level_preference() {
        // n11 = 3, n21 = 1: levels 1 and 2 miss D2.
        assert_eq!(zs_relay_levels(3, 1, 1, 2), vec![1, 2]);
        // n21 = n11 = 3, n22 = 1: the top two levels clear R2 at D2.
        assert_eq!(zs_relay_levels(3, 3, 1, 1), vec![0]);
        assert_eq!(zs_relay_levels(3, 3, 1, 3), vec![0, 1, 2]);
        assert_eq!(zs_relay_levels(3, 3, 3, 1), vec![2]);
        assert_eq!(zs_relay_levels(2, 0, 0, 0), Vec::<usize>::new());
    }

    #[test]
    fn delta_examples() {
        let p = GainProfile::zz(3, 2, 2, 3, 0, 0, 0).unwrap();
        assert_eq!(count_full_z_paths(&p).unwrap().0, 2);
        let p = GainProfile::zz(3, 3, 0, 3, 3, 3, 3).unwrap();
        assert_eq!(count_full_z_paths(&p).unwrap().0, 0);
        let p = GainProfile::zz(3, 3, 2, 2, 3, 2, 2).unwrap();
        assert_eq!(count_full_z_paths(&p).unwrap(), (2, 2, 2));
        let zs = GainProfile::zs(3, 3, 2, 2, 3, 2, 2).unwrap();
        assert!(matches!(count_full_z_paths(&zs), Err(Error::WrongTopology { .. })));
    }

    #[test]
    fn z_levels_match_delta() {
        for a in 0..=4usize {
            for b in 0..=4 {
                for c in 0..=4 {
                    let want = a.min(b).min(c).min((a + c).saturating_sub(b));
                    assert_eq!(z_levels(a, b, c).len(), want, "{a} {b} {c}");
                }
            }
        }
    }

    #[test]
    fn decoupled_zs_is_two_lines() {
        let p = GainProfile::zs(3, 2, 0, 3, 3, 0, 1).unwrap();
        let t = RatePair::new(2, 1);
        let s = zs_achievability(&p, t).unwrap();
        assert!(verify_rate(&p, &s, t));
        assert!(!s.meta.fallback);
    }

    #[test]
    fn zs_spec_profile() {
        let p = GainProfile::zs(3, 3, 2, 3, 3, 2, 3).unwrap();
        let t = RatePair::new(2, 2);
        assert!(verify_rate(&p, &zs_achievability(&p, t).unwrap(), t));
        assert!(matches!(zs_achievability(&p, RatePair::new(3, 2)), Err(Error::InfeasibleRate { .. })));
    }

    #[test]
    fn zz_pairs_alone_carry_delta() {
        for p in GainProfile::enumerate(Topology::Zz, 3) {
            let (_, _, delta) = count_full_z_paths(&p).unwrap();
            let t = RatePair::new(delta, delta);
            let s = zz_achievability(&p, t).unwrap();
            assert!(verify_rate(&p, &s, t), "{p}");
            assert!(!s.meta.fallback, "{p}");
        }
    }

    #[test]
    fn zz_single_flow() {
        for p in GainProfile::enumerate(Topology::Zz, 3) {
            let t = RatePair::new(0, p.m22().min(p.n22()));
            let s = zz_achievability(&p, t).unwrap();
            assert!(verify_rate(&p, &s, t), "{p}");
        }
    }

    #[test]
    fn wrong_topology_and_infeasible() {
        let zz = GainProfile::zz(2, 2, 1, 2, 2, 1, 2).unwrap();
        assert!(matches!(zs_achievability(&zz, RatePair::new(0, 0)), Err(Error::WrongTopology { .. })));
        assert!(matches!(zz_achievability(&zz, RatePair::new(2, 3)), Err(Error::InfeasibleRate { .. })));
    }

    #[test]
    fn every_point_at_q2() {
        for topo in [Topology::Zs, Topology::Zz] {
            for p in GainProfile::enumerate(topo, 2) {
                for &t in &capacity_region(&p).unwrap().points {
                    let s = match topo {
                        Topology::Zs => zs_achievability(&p, t),
                        _ => zz_achievability(&p, t),
                    }
                    .unwrap();
                    assert!(verify_rate(&p, &s, t), "{p} {t}");
                }
            }
        }
    }
}
