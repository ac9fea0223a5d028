//! Capacity regions of the ZS and ZZ networks as labeled inequality lists
//! together with their integer points.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{GainProfile, Topology};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RatePair {
    pub r1: usize,
    pub r2: usize,
}

impl RatePair {
    pub const fn new(r1: usize, r2: usize) -> Self {
        RatePair { r1, r2 }
    }

    pub fn sum(&self) -> usize {
        self.r1 + self.r2
    }

    /// Componentwise `<=`.
    pub fn dominated_by(&self, other: &RatePair) -> bool {
        self.r1 <= other.r1 && self.r2 <= other.r2
    }

    pub fn check_range(&self, q: usize) -> Result<()> {
        if self.r1 > q || self.r2 > q {
            return Err(Error::RateOutOfRange {
                r1: self.r1,
                r2: self.r2,
                q,
            });
        }
        Ok(())
    }
}

impl std::fmt::Display for RatePair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.r1, self.r2)
    }
}

/// `coef1 * r1 + coef2 * r2 <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inequality {
    pub label: String,
    pub coef1: u8,
    pub coef2: u8,
    pub bound: usize,
}

impl Inequality {
    fn new(label: &str, coef1: u8, coef2: u8, bound: usize) -> Self {
        Inequality {
            label: label.to_string(),
            coef1,
            coef2,
            bound,
        }
    }

    pub fn holds(&self, p: RatePair) -> bool {
        self.coef1 as usize * p.r1 + self.coef2 as usize * p.r2 <= self.bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RateRegion {
    pub q: usize,
    pub inequalities: Vec<Inequality>,
    pub points: BTreeSet<RatePair>,
}

impl RateRegion {
    pub fn from_inequalities(q: usize, inequalities: Vec<Inequality>) -> Self {
        let points = (0..=q)
            .flat_map(|r1| (0..=q).map(move |r2| RatePair::new(r1, r2)))
            .filter(|&p| inequalities.iter().all(|ineq| ineq.holds(p)))
            .collect();
        RateRegion {
            q,
            inequalities,
            points,
        }
    }

    /// Region given only by its points, e.g. from search.
    pub fn from_points(q: usize, points: impl IntoIterator<Item = RatePair>) -> Self {
        RateRegion {
            q,
            inequalities: Vec::new(),
            points: points.into_iter().collect(),
        }
    }

    pub fn contains(&self, p: RatePair) -> bool {
        self.points.contains(&p)
    }

    pub fn is_subset_of(&self, other: &RateRegion) -> bool {
        self.q == other.q && self.points.is_subset(&other.points)
    }

    /// Same bit-width and the same point set; inequality lists are not compared.
    pub fn same_points(&self, other: &RateRegion) -> bool {
        self.q == other.q && self.points == other.points
    }

    pub fn is_down_closed(&self) -> bool {
        self.points.iter().all(|p| {
            (p.r1 == 0 || self.contains(RatePair::new(p.r1 - 1, p.r2)))
                && (p.r2 == 0 || self.contains(RatePair::new(p.r1, p.r2 - 1)))
        })
    }

    /// Points not dominated by any other point of the region.
    pub fn pareto_points(&self) -> Vec<RatePair> {
        self.points
            .iter()
            .copied()
            .filter(|p| {
                !self
                    .points
                    .iter()
                    .any(|o| o != p && p.dominated_by(o))
            })
            .collect()
    }

    pub fn max_sum_rate(&self) -> usize {
        self.points.iter().map(RatePair::sum).max().unwrap_or(0)
    }

    pub fn to_json(&self) -> String {
        let points: Vec<[usize; 2]> = self.points.iter().map(|p| [p.r1, p.r2]).collect();
        let doc = serde_json::json!({
            "q": self.q,
            "inequalities": self.inequalities,
            "points": points,
        });
        serde_json::to_string_pretty(&doc).expect("region serializes")
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("r1,r2\n");
        for p in &self.points {
            let _ = writeln!(out, "{},{}", p.r1, p.r2);
        }
        out
    }
}

pub fn region_contains(region: &RateRegion, p: RatePair) -> bool {
    region.contains(p)
}

pub fn region_equal(a: &RateRegion, b: &RateRegion) -> bool {
    a.same_points(b)
}

pub fn region_subset(a: &RateRegion, b: &RateRegion) -> bool {
    a.is_subset_of(b)
}

#[inline]
fn pos(x: isize) -> usize {
    x.max(0) as usize
}

fn require(profile: &GainProfile, expected: Topology) -> Result<()> {
    if profile.topology() != expected {
        return Err(Error::WrongTopology {
            expected,
            actual: profile.topology(),
        });
    }
    Ok(())
}

/// The ten ZS inequalities, unpruned.
pub fn zs_inequalities(profile: &GainProfile) -> Result<Vec<Inequality>> {
    require(profile, Topology::Zs)?;
    let (m11, m12, m22) = (profile.m11(), profile.m12(), profile.m22());
    let (n11, n21, n22) = (profile.n11(), profile.n21(), profile.n22());
    let d = |a: usize, b: usize| pos(a as isize - b as isize);
    Ok(vec![
        Inequality::new("ZS-1", 1, 0, m11),
        Inequality::new("ZS-2", 1, 0, n11),
        Inequality::new("ZS-3", 0, 1, m12.max(m22)),
        Inequality::new("ZS-4", 0, 1, n21.max(n22)),
        Inequality::new("ZS-5", 0, 1, m12 + n22),
        Inequality::new("ZS-6", 0, 1, m22 + n21),
        Inequality::new("ZS-7", 1, 1, m11.max(m12) + n22),
        Inequality::new("ZS-8", 1, 1, m22 + n11.max(n21)),
        Inequality::new("ZS-9", 1, 1, m11.max(m12) + d(m22, m12)),
        Inequality::new("ZS-10", 1, 1, n21.max(n22) + d(n11, n21)),
    ])
}

/// The six ZZ inequalities.
pub fn zz_inequalities(profile: &GainProfile) -> Result<Vec<Inequality>> {
    require(profile, Topology::Zz)?;
    let (m11, m12, m22) = (profile.m11(), profile.m12(), profile.m22());
    let (n11, n12, n22) = (profile.n11(), profile.n12(), profile.n22());
    let d = |a: usize, b: usize| pos(a as isize - b as isize);
    Ok(vec![
        Inequality::new("ZZ-1", 1, 0, m11),
        Inequality::new("ZZ-2", 0, 1, m22),
        Inequality::new("ZZ-3", 1, 0, n11),
        Inequality::new("ZZ-4", 0, 1, n22),
        Inequality::new("ZZ-5", 1, 1, m11.max(m12) + d(m22, m12) + n12),
        Inequality::new("ZZ-6", 1, 1, n11.max(n12) + d(n22, n12) + m12),
    ])
}

pub fn zs_region(profile: &GainProfile) -> Result<RateRegion> {
    Ok(RateRegion::from_inequalities(profile.q(), zs_inequalities(profile)?))
}

pub fn zz_region(profile: &GainProfile) -> Result<RateRegion> {
    Ok(RateRegion::from_inequalities(profile.q(), zz_inequalities(profile)?))
}

/// Capacity region for whichever characterized topology the profile carries.
pub fn capacity_region(profile: &GainProfile) -> Result<RateRegion> {
    match profile.topology() {
        Topology::Zs => zs_region(profile),
        Topology::Zz => zz_region(profile),
        Topology::Xx => Err(Error::UnsupportedTopology(Topology::Xx)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::{cut_value, CutSpec, Node};
    use proptest::prelude::*;

    fn pts(region: &RateRegion) -> Vec<(usize, usize)> {
        region.points.iter().map(|p| (p.r1, p.r2)).collect()
    }

    #[test]
    fn zs_symmetric_profile() {
        let p = GainProfile::zs(3, 3, 2, 3, 3, 2, 3).unwrap();
        let region = zs_region(&p).unwrap();
        let bounds: Vec<usize> = region.inequalities.iter().map(|i| i.bound).collect();
        assert_eq!(bounds, vec![3, 3, 3, 3, 5, 5, 6, 6, 4, 4]);
        for p in [(3, 1), (2, 2), (1, 3)] {
            assert!(region.contains(RatePair::new(p.0, p.1)));
        }
        assert!(!region.contains(RatePair::new(3, 2)));
        assert_eq!(region.max_sum_rate(), 4);
    }

    #[test]
    fn zero_profiles_collapse_to_origin() {
        let zs = GainProfile::zs(3, 0, 0, 0, 0, 0, 0).unwrap();
        let zz = GainProfile::zz(3, 0, 0, 0, 0, 0, 0).unwrap();
        assert_eq!(pts(&zs_region(&zs).unwrap()), vec![(0, 0)]);
        assert_eq!(pts(&zz_region(&zz).unwrap()), vec![(0, 0)]);
    }

    #[test]
    fn decoupled_zs_is_a_rectangle() {
        let p = GainProfile::zs(4, 3, 0, 4, 2, 0, 1).unwrap();
        let region = zs_region(&p).unwrap();
        let expected = RateRegion::from_points(
            4,
            (0..=2).flat_map(|a| (0..=1).map(move |b| RatePair::new(a, b))),
        );
        assert!(region_equal(&region, &expected));
    }

    #[test]
    fn zz_technique_profiles() {
        let supp = zz_region(&GainProfile::zz(3, 3, 2, 2, 3, 2, 2).unwrap()).unwrap();
        let bounds: Vec<usize> = supp.inequalities.iter().map(|i| i.bound).collect();
        assert_eq!(bounds, vec![3, 2, 3, 2, 5, 5]);
        assert!(supp.contains(RatePair::new(3, 2)));
        assert!(supp.pareto_points().contains(&RatePair::new(3, 2)));

        let neut = zz_region(&GainProfile::zz(3, 2, 2, 3, 2, 2, 3).unwrap()).unwrap();
        let bounds: Vec<usize> = neut.inequalities.iter().map(|i| i.bound).collect();
        assert_eq!(bounds, vec![2, 3, 2, 3, 5, 5]);
        assert_eq!(neut.pareto_points(), vec![RatePair::new(2, 3)]);
    }

    #[test]
    fn full_direct_gains_give_square() {
        let p = GainProfile::zz(3, 3, 0, 3, 3, 0, 3).unwrap();
        assert_eq!(zz_region(&p).unwrap().points.len(), 16);
    }

    #[test]
    fn wrong_topology_is_rejected() {
        let zz = GainProfile::zz(2, 1, 1, 1, 1, 1, 1).unwrap();
        assert!(matches!(zs_region(&zz), Err(Error::WrongTopology { .. })));
        let xx = GainProfile::new(2, Topology::Xx, [[1; 2]; 2], [[1; 2]; 2]).unwrap();
        assert_eq!(capacity_region(&xx), Err(Error::UnsupportedTopology(Topology::Xx)));
    }

    #[test]
    fn set_operations() {
        let a = RateRegion::from_points(2, [RatePair::new(0, 0), RatePair::new(1, 0)]);
        let b = RateRegion::from_points(2, [RatePair::new(0, 0), RatePair::new(1, 0), RatePair::new(0, 1)]);
        assert!(region_subset(&a, &b));
        assert!(!region_subset(&b, &a));
        assert!(region_equal(&a, &a));
        assert!(region_contains(&a, RatePair::new(0, 0)));
        assert!(!b.is_subset_of(&RateRegion::from_points(3, b.points.clone())));
    }

    #[test]
    fn csv_and_json_export() {
        let region = zz_region(&GainProfile::zz(1, 1, 0, 1, 1, 0, 0).unwrap()).unwrap();
        assert_eq!(region.to_csv(), "r1,r2\n0,0\n1,0\n");
        let doc: serde_json::Value = serde_json::from_str(&region.to_json()).unwrap();
        assert_eq!(doc["inequalities"].as_array().unwrap().len(), 6);
        assert_eq!(doc["inequalities"][4]["label"], "ZZ-5");
        assert_eq!(doc["points"], serde_json::json!([[0, 0], [1, 0]]));
    }

    fn zs_profile() -> impl Strategy<Value = GainProfile> {
        (0usize..=6).prop_flat_map(|q| {
            proptest::collection::vec(0..=q, 6)
                .prop_map(move |g| GainProfile::zs(q, g[0], g[1], g[2], g[3], g[4], g[5]).unwrap())
        })
    }

    fn zz_profile() -> impl Strategy<Value = GainProfile> {
        (0usize..=6).prop_flat_map(|q| {
            proptest::collection::vec(0..=q, 6)
                .prop_map(move |g| GainProfile::zz(q, g[0], g[1], g[2], g[3], g[4], g[5]).unwrap())
        })
    }

    proptest! {
        #[test]
        fn zs_every_point_respects_named_cuts(p in zs_profile()) {
            use Node::*;
            let region = zs_region(&p).unwrap();
            prop_assert!(region.is_down_closed());
            let cuts = [
                CutSpec::from_source_side(&[S2, R2]).unwrap(),
                CutSpec::from_source_side(&[S1, S2, R1, D1]).unwrap(),
                CutSpec::from_source_side(&[S1, S2, R2]).unwrap(),
                CutSpec::from_source_side(&[S1, S2, R1]).unwrap(),
            ];
            for pt in &region.points {
                for cut in &cuts {
                    let crossing: usize = cut.separated_sessions().iter()
                        .map(|&k| if k == 1 { pt.r1 } else { pt.r2 }).sum();
                    prop_assert!(crossing <= cut_value(&p, cut));
                }
            }
        }

        #[test]
        fn zz_single_rates_bounded_by_both_hops(p in zz_profile()) {
            let region = zz_region(&p).unwrap();
            prop_assert!(region.is_down_closed());
            for pt in &region.points {
                prop_assert!(pt.r1 <= p.m11().min(p.n11()));
                prop_assert!(pt.r2 <= p.m22().min(p.n22()));
                prop_assert!(pt.r1 <= p.q() && pt.r2 <= p.q());
            }
        }
    }
}
