//! Ground truth by search over one-shot linear schemes, independent of the
//! closed-form regions.
//!
//! Exhaustive mode enumerates canonical representatives only:
//!
//! * an encoder matters through its column space, and only through the
//!   source levels that reach some relay, so `A_j` ranges over the
//!   `r_j`-dimensional subspaces of those live levels (reduced echelon bases);
//! * entries of a relay map outside (rows that reach a destination) x
//!   (columns that receive a signal) never influence any output, so they are
//!   pinned to zero.
//!
//! Randomized mode runs seeded hill-climbing on the total decodability
//! deficit. Both modes split the work into fixed chunks and keep the result
//! of the lowest chunk that succeeds, so the outcome depends on the seed only,
//! never on thread scheduling.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::Gf2Matrix;
use crate::network::GainProfile;
use crate::region::{RatePair, RateRegion};
use crate::scheme::linear::{resolvable_dimension, verify_rate, LinearScheme, SchemeMeta};

/// Default ceiling on the canonical search-space size of one exhaustive search.
/// Every target at `q <= 2` fits; most non-trivial targets at `q = 3` do not.
pub const DEFAULT_EXHAUSTIVE_CEILING: u128 = 1 << 20;

const STEPS_PER_RESTART: u64 = 4_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    Exhaustive,
    Randomized,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub mode: SearchMode,
    /// Total candidate evaluations allowed in randomized mode.
    pub max_candidates: u64,
    pub seed: u64,
    /// Largest canonical space an exhaustive search may enumerate.
    pub ceiling: u128,
}

impl SearchBudget {
    pub fn exhaustive() -> Self {
        SearchBudget {
            mode: SearchMode::Exhaustive,
            max_candidates: u64::MAX,
            seed: 0,
            ceiling: DEFAULT_EXHAUSTIVE_CEILING,
        }
    }

    pub fn randomized(max_candidates: u64, seed: u64) -> Self {
        SearchBudget {
            mode: SearchMode::Randomized,
            max_candidates,
            seed,
            ceiling: DEFAULT_EXHAUSTIVE_CEILING,
        }
    }

    pub fn with_ceiling(mut self, ceiling: u128) -> Self {
        self.ceiling = ceiling;
        self
    }
}

/// Rows of `G_relay` that reach some destination and columns that receive some source.
#[derive(Clone, Debug)]
pub(crate) struct RelaySupport {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
}

impl RelaySupport {
    pub fn of(profile: &GainProfile, relay: usize) -> Self {
        let q = profile.q();
        let n = profile.n();
        let m = profile.m();
        let out = n[0][relay].max(n[1][relay]);
        let inp = m[relay][0].max(m[relay][1]);
        RelaySupport {
            rows: (0..out).collect(),
            cols: (q - inp..q).collect(),
        }
    }

    pub fn bits(&self) -> usize {
        self.rows.len() * self.cols.len()
    }

    pub fn matrix(&self, q: usize, code: u64) -> Gf2Matrix {
        let width = self.cols.len();
        let mut g = Gf2Matrix::zeros(q, q);
        for (ri, &r) in self.rows.iter().enumerate() {
            for (ci, &c) in self.cols.iter().enumerate() {
                if code >> (ri * width + ci) & 1 == 1 {
                    g = g.with_flipped(r, c);
                }
            }
        }
        g
    }
}

/// Number of source levels of `S_{source+1}` that reach some relay.
pub(crate) fn live_source_levels(profile: &GainProfile, source: usize) -> usize {
    let m = profile.m();
    m[0][source].max(m[1][source])
}

/// All `dim`-dimensional subspaces of GF(2)^`n`, each as an `n x dim` basis
/// matrix embedded in the top `n` rows of a `q x dim` encoder.
pub(crate) fn subspace_bases(q: usize, n: usize, dim: usize) -> Vec<Gf2Matrix> {
    let mut out = Vec::new();
    if dim > n {
        return out;
    }
    for pivots in combinations(n, dim) {
        // Free positions: (basis row k, coordinate c) with c after pivot k and c not a pivot.
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(k, &p)| {
                let pivots = &pivots;
                (p + 1..n)
                    .filter(move |c| !pivots.contains(c))
                    .map(move |c| (k, c))
            })
            .collect();
        for code in 0u64..1 << free.len() {
            let mut a = Gf2Matrix::zeros(q, dim);
            for (k, &p) in pivots.iter().enumerate() {
                a = a.with_flipped(p, k);
            }
            for (bit, &(k, c)) in free.iter().enumerate() {
                if code >> bit & 1 == 1 {
                    a = a.with_flipped(c, k);
                }
            }
            out.push(a);
        }
    }
    out
}

pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Gaussian binomial coefficient `[n choose k]_2`.
fn subspace_count(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for i in 0..k {
        num *= (1u128 << (n - i)) - 1;
        den *= (1u128 << (i + 1)) - 1;
    }
    num / den
}

/// Canonical exhaustive space size for one target.
pub fn exhaustive_space_size(profile: &GainProfile, target: RatePair) -> u128 {
    let s1 = RelaySupport::of(profile, 0);
    let s2 = RelaySupport::of(profile, 1);
    let a1 = subspace_count(live_source_levels(profile, 0), target.r1);
    let a2 = subspace_count(live_source_levels(profile, 1), target.r2);
    let g_bits = (s1.bits() + s2.bits()) as u32;
    a1.saturating_mul(a2).saturating_mul(1u128.checked_shl(g_bits).unwrap_or(u128::MAX))
}

/// Precomputed channel matrices for repeated scoring.
struct Evaluator {
    m: [[Gf2Matrix; 2]; 2],
    n: [[Gf2Matrix; 2]; 2],
}

impl Evaluator {
    fn new(profile: &GainProfile) -> Self {
        let m = [
            [profile.first_hop(0, 0), profile.first_hop(0, 1)],
            [profile.first_hop(1, 0), profile.first_hop(1, 1)],
        ];
        let n = [
            [profile.second_hop(0, 0), profile.second_hop(0, 1)],
            [profile.second_hop(1, 0), profile.second_hop(1, 1)],
        ];
        Evaluator { m, n }
    }

    /// `M_ij A_j` for both relays and sources.
    fn relay_inputs(&self, a: [&Gf2Matrix; 2]) -> [[Gf2Matrix; 2]; 2] {
        let f = |i: usize, j: usize| self.m[i][j].mul(a[j]).expect("shapes");
        [[f(0, 0), f(0, 1)], [f(1, 0), f(1, 1)]]
    }

    /// Sum of decodability deficits over both destinations; zero means success.
    /// With `prune`, returns a positive value as soon as a destination cannot
    /// reach full signal rank, skipping the interference test.
    fn deficit(&self, inputs: &[[Gf2Matrix; 2]; 2], g: [&Gf2Matrix; 2], rates: [usize; 2], prune: bool) -> usize {
        let out = |i: usize, j: usize| g[i].mul(&inputs[i][j]).expect("shapes");
        let relay_out = [[out(0, 0), out(0, 1)], [out(1, 0), out(1, 1)]];
        let dest = |k: usize, j: usize| {
            self.n[k][0]
                .mul(&relay_out[0][j])
                .expect("shapes")
                .add(&self.n[k][1].mul(&relay_out[1][j]).expect("shapes"))
                .expect("shapes")
        };
        let own = [dest(0, 0), dest(1, 1)];
        if prune && (0..2).any(|k| own[k].rank() < rates[k]) {
            return 1;
        }
        let mut total = 0;
        for k in 0..2 {
            if rates[k] == 0 {
                continue;
            }
            let other = dest(k, 1 - k);
            let got = resolvable_dimension(&own[k], &other).expect("shapes");
            total += rates[k] - got;
        }
        total
    }
}

/// Search for a scheme achieving `target`. Exhaustive `None` proves that no
/// one-shot linear scheme exists; randomized `None` proves nothing.
pub fn search_scheme(profile: &GainProfile, target: RatePair, budget: &SearchBudget) -> Result<Option<LinearScheme>> {
    let q = profile.q();
    if target.r1 > q || target.r2 > q {
        return Ok(None);
    }
    if target == RatePair::new(0, 0) {
        return Ok(Some(LinearScheme::silent(q).with_meta(SchemeMeta::new("oracle"))));
    }
    let found = match budget.mode {
        SearchMode::Exhaustive => exhaustive(profile, target, budget.ceiling)?,
        SearchMode::Randomized => randomized(profile, target, budget.max_candidates, budget.seed),
    };
    if let Some(s) = &found {
        debug_assert!(verify_rate(profile, s, target));
    }
    Ok(found)
}

fn exhaustive(profile: &GainProfile, target: RatePair, ceiling: u128) -> Result<Option<LinearScheme>> {
    let size = exhaustive_space_size(profile, target);
    if size > ceiling {
        return Err(Error::BudgetExceeded { size, ceiling });
    }
    let q = profile.q();
    let a1s = subspace_bases(q, live_source_levels(profile, 0), target.r1);
    let a2s = subspace_bases(q, live_source_levels(profile, 1), target.r2);
    let s1 = RelaySupport::of(profile, 0);
    let s2 = RelaySupport::of(profile, 1);
    let g1s: Vec<Gf2Matrix> = (0..1u64 << s1.bits()).map(|c| s1.matrix(q, c)).collect();
    let g2s: Vec<Gf2Matrix> = (0..1u64 << s2.bits()).map(|c| s2.matrix(q, c)).collect();
    let eval = Evaluator::new(profile);
    let rates = [target.r1, target.r2];

    // Chunk = (encoder pair, G1). Ordered, so find_map_first is deterministic.
    let chunks = a1s.len() * a2s.len() * g1s.len();
    let hit = (0..chunks).into_par_iter().find_map_first(|c| {
        let g1 = &g1s[c % g1s.len()];
        let pair = c / g1s.len();
        let (a1, a2) = (&a1s[pair / a2s.len()], &a2s[pair % a2s.len()]);
        let inputs = eval.relay_inputs([a1, a2]);
        g2s.iter()
            .find(|g2| eval.deficit(&inputs, [g1, g2], rates, true) == 0)
            .map(|g2| (a1.clone(), a2.clone(), g1.clone(), g2.clone()))
    });
    Ok(hit.map(|(a1, a2, g1, g2)| {
        LinearScheme::new(a1, a2, g1, g2)
            .expect("canonical shapes")
            .with_meta(SchemeMeta::new("oracle-exhaustive"))
    }))
}

struct Candidate {
    a: [Gf2Matrix; 2],
    g: [Gf2Matrix; 2],
}

fn randomized(profile: &GainProfile, target: RatePair, max_candidates: u64, seed: u64) -> Option<LinearScheme> {
    let q = profile.q();
    let live = [live_source_levels(profile, 0), live_source_levels(profile, 1)];
    let rates = [target.r1, target.r2];
    if rates[0] > live[0] || rates[1] > live[1] {
        return None;
    }
    let supports = [RelaySupport::of(profile, 0), RelaySupport::of(profile, 1)];
    // Flip positions: (kind, index, row, col); kind 0 = encoder, 1 = relay.
    let mut moves: Vec<(usize, usize, usize, usize)> = Vec::new();
    for j in 0..2 {
        for r in 0..live[j] {
            for c in 0..rates[j] {
                moves.push((0, j, r, c));
            }
        }
    }
    for (i, s) in supports.iter().enumerate() {
        for &r in &s.rows {
            for &c in &s.cols {
                moves.push((1, i, r, c));
            }
        }
    }
    if moves.is_empty() {
        return None;
    }
    let eval = Evaluator::new(profile);
    let restarts = max_candidates.div_ceil(STEPS_PER_RESTART).max(1);

    let hit = (0..restarts).into_par_iter().find_map_first(|chunk| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        let random_matrix = |rng: &mut ChaCha8Rng, rows: &[usize], cols: &[usize]| {
            let mut m = Gf2Matrix::zeros(q, q);
            for &r in rows {
                for &c in cols {
                    if rng.gen::<bool>() {
                        m = m.with_flipped(r, c);
                    }
                }
            }
            m
        };
        let mut cand = Candidate {
            a: [0, 1].map(|j| {
                let mut a = Gf2Matrix::zeros(q, rates[j]);
                for r in 0..live[j] {
                    for c in 0..rates[j] {
                        if rng.gen::<bool>() {
                            a = a.with_flipped(r, c);
                        }
                    }
                }
                a
            }),
            g: [0, 1].map(|i| random_matrix(&mut rng, &supports[i].rows, &supports[i].cols)),
        };
        let score = |c: &Candidate| {
            let inputs = eval.relay_inputs([&c.a[0], &c.a[1]]);
            eval.deficit(&inputs, [&c.g[0], &c.g[1]], rates, false)
        };
        let mut current = score(&cand);
        for _ in 0..STEPS_PER_RESTART {
            if current == 0 {
                break;
            }
            let (kind, idx, r, c) = moves[rng.gen_range(0..moves.len())];
            let slot = if kind == 0 { &mut cand.a[idx] } else { &mut cand.g[idx] };
            *slot = slot.with_flipped(r, c);
            let next = score(&cand);
            if next <= current {
                current = next;
            } else {
                let slot = if kind == 0 { &mut cand.a[idx] } else { &mut cand.g[idx] };
                *slot = slot.with_flipped(r, c);
            }
        }
        (current == 0).then_some(cand)
    });
    hit.map(|c| {
        let [a1, a2] = c.a;
        let [g1, g2] = c.g;
        LinearScheme::new(a1, a2, g1, g2)
            .expect("shapes")
            .with_meta(SchemeMeta::new("oracle-randomized"))
    })
}

/// Matrix holding a free entry of a restricted search.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub(crate) enum Slot {
    Encoder(usize),
    Relay(usize),
}

/// Largest number of free bits a restricted search enumerates exhaustively.
const RESTRICTED_EXHAUSTIVE_BITS: usize = 16;

/// Fills in the `free` entries of `base` (which must be zero there) so that
/// the scheme achieves its own rates. Small spaces are enumerated in full,
/// larger ones get seeded hill-climbing within `max_candidates` evaluations.
pub(crate) fn complete_scheme(
    profile: &GainProfile,
    base: &LinearScheme,
    free: &[(Slot, usize, usize)],
    max_candidates: u64,
    seed: u64,
) -> Option<LinearScheme> {
    let rates = [base.rates().r1, base.rates().r2];
    let eval = Evaluator::new(profile);
    let start = [base.encoder(0).clone(), base.encoder(1).clone(), base.relay_map(0).clone(), base.relay_map(1).clone()];
    let index = |slot: Slot| match slot {
        Slot::Encoder(j) => j,
        Slot::Relay(i) => 2 + i,
    };
    let score = |m: &[Gf2Matrix; 4], prune: bool| {
        let inputs = eval.relay_inputs([&m[0], &m[1]]);
        eval.deficit(&inputs, [&m[2], &m[3]], rates, prune)
    };
    let build = |m: [Gf2Matrix; 4]| {
        let [a1, a2, g1, g2] = m;
        LinearScheme::new(a1, a2, g1, g2).expect("shapes").with_meta(base.meta.clone())
    };
    if score(&start, false) == 0 {
        return Some(build(start));
    }
    if free.is_empty() {
        return None;
    }

    if free.len() <= RESTRICTED_EXHAUSTIVE_BITS {
        let hit = (0..1u64 << free.len()).into_par_iter().find_map_first(|code| {
            let mut m = start.clone();
            for (bit, &(slot, r, c)) in free.iter().enumerate() {
                if code >> bit & 1 == 1 {
                    let k = index(slot);
                    m[k] = m[k].with_flipped(r, c);
                }
            }
            (score(&m, true) == 0).then_some(m)
        });
        return hit.map(build);
    }

    let restarts = max_candidates.div_ceil(STEPS_PER_RESTART).max(1);
    let hit = (0..restarts).into_par_iter().find_map_first(|chunk| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(chunk);
        let mut m = start.clone();
        for &(slot, r, c) in free {
            if rng.gen::<bool>() {
                let k = index(slot);
                m[k] = m[k].with_flipped(r, c);
            }
        }
        let mut current = score(&m, false);
        for _ in 0..STEPS_PER_RESTART {
            if current == 0 {
                break;
            }
            let (slot, r, c) = free[rng.gen_range(0..free.len())];
            let k = index(slot);
            m[k] = m[k].with_flipped(r, c);
            let next = score(&m, false);
            if next <= current {
                current = next;
            } else {
                m[k] = m[k].with_flipped(r, c);
            }
        }
        (current == 0).then_some(m)
    });
    hit.map(build)
}

/// Searched region with a witness scheme for every Pareto-maximal point.
#[derive(Clone, Debug)]
pub struct OracleRegion {
    pub region: RateRegion,
    pub witnesses: BTreeMap<RatePair, LinearScheme>,
    /// True when every miss was proven by exhaustive search, so the region is
    /// exactly the one-shot linear achievable set. Otherwise it is an inner bound.
    pub exact: bool,
}

/// Set of integer rate pairs achievable by one-shot linear schemes.
///
/// Walks the staircase boundary: for each `r1` it looks for the largest
/// `r2` not exceeding the previous column's maximum, and every dominated
/// pair inherits its witness by dropping message columns.
pub fn oracle_region(profile: &GainProfile, budget: &SearchBudget) -> Result<OracleRegion> {
    let q = profile.q();
    let mut points = Vec::new();
    let mut witnesses = BTreeMap::new();
    let mut ceiling_r2 = q;
    for r1 in 0..=q {
        let mut best = None;
        for r2 in (0..=ceiling_r2).rev() {
            let target = RatePair::new(r1, r2);
            if let Some(s) = search_scheme(profile, target, budget)? {
                best = Some((r2, s));
                break;
            }
        }
        let Some((r2max, scheme)) = best else { break };
        points.extend((0..=r2max).map(|r2| RatePair::new(r1, r2)));
        witnesses.insert(RatePair::new(r1, r2max), scheme);
        ceiling_r2 = r2max;
    }
    // Keep only witnesses that are Pareto-maximal.
    let region = RateRegion::from_points(q, points);
    let pareto = region.pareto_points();
    witnesses.retain(|p, _| pareto.contains(p));
    Ok(OracleRegion {
        region,
        witnesses,
        exact: budget.mode == SearchMode::Exhaustive,
    })
}

/// Random scheme with the given rates, restricted to live levels; for tests and sweeps.
pub fn random_scheme(profile: &GainProfile, rates: RatePair, rng: &mut impl Rng) -> LinearScheme {
    let q = profile.q();
    let supports = [RelaySupport::of(profile, 0), RelaySupport::of(profile, 1)];
    let a = |r: usize, rng: &mut dyn FnMut() -> bool| Gf2Matrix::from_fn(q, r, |_, _| rng());
    let mut coin = || rng.gen::<bool>();
    let a1 = a(rates.r1, &mut coin);
    let a2 = a(rates.r2, &mut coin);
    let g: Vec<Gf2Matrix> = supports
        .iter()
        .map(|s| Gf2Matrix::from_fn(q, q, |i, j| s.rows.contains(&i) && s.cols.contains(&j) && coin()))
        .collect();
    LinearScheme::new(a1, a2, g[0].clone(), g[1].clone()).expect("shapes")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Topology;

    #[test]
    fn gaussian_binomials() {
        assert_eq!(subspace_count(3, 1), 7);
        assert_eq!(subspace_count(4, 2), 35);
        assert_eq!(subspace_count(2, 0), 1);
        for (n, k) in [(3, 1), (3, 2), (4, 2), (2, 2), (4, 0)] {
            assert_eq!(subspace_bases(n, n, k).len() as u128, subspace_count(n, k));
        }
    }

    #[test]
    fn subspace_bases_are_distinct_and_full_rank() {
        let bases = subspace_bases(4, 4, 2);
        for b in &bases {
            assert_eq!(b.rank(), 2);
        }
        // Distinct column spaces: the union of two distinct 2-dim spaces has rank > 2.
        for (i, x) in bases.iter().enumerate() {
            for y in &bases[i + 1..] {
                assert!(x.hstack(y).unwrap().rank() > 2);
            }
        }
    }

    #[test]
    fn line_network_found() {
        let p = GainProfile::new(1, Topology::Xx, [[1, 0], [0, 0]], [[1, 0], [0, 0]]).unwrap();
        let s = search_scheme(&p, RatePair::new(1, 0), &SearchBudget::exhaustive()).unwrap().unwrap();
        assert!(verify_rate(&p, &s, RatePair::new(1, 0)));
        assert!(search_scheme(&p, RatePair::new(0, 1), &SearchBudget::exhaustive()).unwrap().is_none());
    }

    #[test]
    fn zz_all_ones_carries_two_bits() {
        // Over-the-air neutralization: D1 sees (x1 + x2) + x2.
        let p = GainProfile::zz(1, 1, 1, 1, 1, 1, 1).unwrap();
        let s = search_scheme(&p, RatePair::new(1, 1), &SearchBudget::exhaustive()).unwrap();
        assert!(s.is_some());
    }

    #[test]
    fn out_of_range_target_is_none() {
        let p = GainProfile::zz(2, 2, 2, 2, 2, 2, 2).unwrap();
        assert!(search_scheme(&p, RatePair::new(3, 0), &SearchBudget::exhaustive()).unwrap().is_none());
        assert!(search_scheme(&p, RatePair::new(0, 3), &SearchBudget::randomized(1000, 1)).unwrap().is_none());
    }

    #[test]
    fn ceiling_is_enforced() {
        let p = GainProfile::zz(3, 3, 3, 3, 3, 3, 3).unwrap();
        let err = search_scheme(&p, RatePair::new(2, 2), &SearchBudget::exhaustive()).unwrap_err();
        assert!(matches!(err, Error::BudgetExceeded { .. }));
        assert!(matches!(
            oracle_region(&p, &SearchBudget::exhaustive()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn decoupled_rectangle() {
        let p = GainProfile::zs(2, 2, 0, 1, 1, 0, 2).unwrap();
        let o = oracle_region(&p, &SearchBudget::exhaustive()).unwrap();
        let expected = RateRegion::from_points(2, (0..=1).flat_map(|a| (0..=1).map(move |b| RatePair::new(a, b))));
        assert!(o.region.same_points(&expected));
        assert!(o.exact);
    }

    #[test]
    fn randomized_is_deterministic() {
        let p = GainProfile::zz(3, 3, 2, 2, 3, 2, 2).unwrap();
        let t = RatePair::new(3, 2);
        let a = search_scheme(&p, t, &SearchBudget::randomized(200_000, 7)).unwrap();
        let b = search_scheme(&p, t, &SearchBudget::randomized(200_000, 7)).unwrap();
        assert_eq!(a, b);
        assert!(verify_rate(&p, &a.expect("found"), t));
    }

    #[test]
    fn oracle_region_is_down_closed_with_sound_witnesses() {
        for p in GainProfile::enumerate(Topology::Xx, 1).into_iter().step_by(7) {
            let o = oracle_region(&p, &SearchBudget::exhaustive()).unwrap();
            assert!(o.region.is_down_closed());
            for (pt, s) in &o.witnesses {
                assert!(verify_rate(&p, s, *pt));
            }
        }
    }
}
