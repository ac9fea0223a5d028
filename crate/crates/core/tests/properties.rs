use proptest::prelude::*;

use relaynet::oracle::{oracle_region, SearchBudget};
use relaynet::region::capacity_region;
use relaynet::scheme::{zs_achievability, zz_achievability};
use relaynet::{verify_rate, GainProfile, Gf2Matrix, Gf2Vector, LinearScheme, RatePair, RateRegion, Topology};

fn profile(topology: Topology, max_q: usize) -> impl Strategy<Value = GainProfile> {
    (0..=max_q).prop_flat_map(move |q| {
        proptest::collection::vec(0..=q, 8).prop_map(move |g| {
            let mut m = [[g[0], g[1]], [g[2], g[3]]];
            let mut n = [[g[4], g[5]], [g[6], g[7]]];
            match topology {
                Topology::Xx => {}
                Topology::Zs => {
                    m[1][0] = 0;
                    n[0][1] = 0;
                }
                Topology::Zz => {
                    m[1][0] = 0;
                    n[1][0] = 0;
                }
            }
            GainProfile::new(q, topology, m, n).unwrap()
        })
    })
}

fn any_profile(max_q: usize) -> impl Strategy<Value = GainProfile> {
    prop_oneof![
        profile(Topology::Xx, max_q),
        profile(Topology::Zs, max_q),
        profile(Topology::Zz, max_q),
    ]
}

fn vector(len: usize) -> impl Strategy<Value = Gf2Vector> {
    proptest::collection::vec(any::<bool>(), len).prop_map(|b| Gf2Vector::from_bools(&b))
}

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = Gf2Matrix> {
    proptest::collection::vec(any::<bool>(), rows * cols)
        .prop_map(move |b| Gf2Matrix::from_fn(rows, cols, |i, j| b[i * cols + j]))
}

fn with_scheme(p: GainProfile) -> impl Strategy<Value = (GainProfile, LinearScheme)> {
    let q = p.q();
    (0..=q, 0..=q)
        .prop_flat_map(move |(r1, r2)| (matrix(q, r1), matrix(q, r2), matrix(q, q), matrix(q, q)))
        .prop_map(move |(a1, a2, g1, g2)| (p, LinearScheme::new(a1, a2, g1, g2).unwrap()))
}

fn with_inputs(p: GainProfile) -> impl Strategy<Value = (GainProfile, [Gf2Vector; 4])> {
    let q = p.q();
    (vector(q), vector(q), vector(q), vector(q)).prop_map(move |(a, b, c, d)| (p, [a, b, c, d]))
}

fn xor(a: &Gf2Vector, b: &Gf2Vector) -> Gf2Vector {
    a.xor(b).unwrap()
}

fn region_of(p: &GainProfile) -> RateRegion {
    capacity_region(p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn layers_superpose((p, [u1, u2, v1, v2]) in any_profile(8).prop_flat_map(with_inputs)) {
        for layer in 0..2 {
            let f = |a: &Gf2Vector, b: &Gf2Vector| {
                if layer == 0 { p.first_layer(a, b).unwrap() } else { p.second_layer(a, b).unwrap() }
            };
            let (y1, y2) = f(&xor(&u1, &v1), &xor(&u2, &v2));
            let (a1, a2) = f(&u1, &u2);
            let (b1, b2) = f(&v1, &v2);
            prop_assert_eq!(y1, xor(&a1, &b1));
            prop_assert_eq!(y2, xor(&a2, &b2));
        }
    }

    #[test]
    fn no_cross_gains_isolates_the_pairs((p, [x1, x2, z1, z2]) in profile(Topology::Xx, 8).prop_flat_map(with_inputs)) {
        let p = p.with_gains([[p.m11(), 0], [0, p.m22()]], [[p.n11(), 0], [0, p.n22()]]).unwrap();
        let end = |a: &Gf2Vector, b: &Gf2Vector| {
            let (r1, r2) = p.first_layer(a, b).unwrap();
            p.second_layer(&r1, &r2).unwrap()
        };
        let (d1, d2) = end(&x1, &x2);
        prop_assert_eq!(&end(&x1, &z2).0, &d1);
        prop_assert_eq!(&end(&z1, &x2).1, &d2);
    }

    #[test]
    fn traces_are_linear_in_the_messages(
        (p, s, w) in any_profile(5)
            .prop_flat_map(with_scheme)
            .prop_flat_map(|(p, s)| {
                let r = s.rates();
                (Just(p), Just(s), (vector(r.r1), vector(r.r2), vector(r.r1), vector(r.r2)))
            })
    ) {
        let (u1, u2, v1, v2) = w;
        let sum = s.trace(&p, &xor(&u1, &v1), &xor(&u2, &v2)).unwrap();
        let a = s.trace(&p, &u1, &u2).unwrap();
        let b = s.trace(&p, &v1, &v2).unwrap();
        prop_assert_eq!(sum.y1, xor(&a.y1, &b.y1));
        prop_assert_eq!(sum.y2, xor(&a.y2, &b.y2));
        prop_assert_eq!(sum.x1p, xor(&a.x1p, &b.x1p));
    }

    #[test]
    fn random_schemes_respect_the_converse(
        (p, s) in prop_oneof![profile(Topology::Zs, 4), profile(Topology::Zz, 4)].prop_flat_map(with_scheme)
    ) {
        if verify_rate(&p, &s, s.rates()) {
            prop_assert!(region_of(&p).contains(s.rates()), "{} verifies {} outside the region", p, s.rates());
        }
    }

    #[test]
    fn constructions_verify_at_the_corners(
        p in prop_oneof![profile(Topology::Zs, 5), profile(Topology::Zz, 5)]
    ) {
        for target in region_of(&p).pareto_points() {
            let s = match p.topology() {
                Topology::Zs => zs_achievability(&p, target),
                _ => zz_achievability(&p, target),
            }
            .unwrap();
            prop_assert!(verify_rate(&p, &s, target), "{} at {}", p, target);
        }
    }

    #[test]
    fn regions_are_down_closed_and_monotone_in_direct_gains(
        p in prop_oneof![profile(Topology::Zs, 10), profile(Topology::Zz, 10)],
        which in 0usize..4,
    ) {
        let r = region_of(&p);
        prop_assert!(r.is_down_closed());
        prop_assert!(r.points.iter().all(|pt| pt.r1 <= p.q() && pt.r2 <= p.q()));
        let (mut m, mut n) = (p.m(), p.n());
        let slot = match which {
            0 => &mut m[0][0],
            1 => &mut m[1][1],
            2 => &mut n[0][0],
            _ => &mut n[1][1],
        };
        if *slot < p.q() {
            *slot += 1;
            let bumped = p.with_gains(m, n).unwrap();
            prop_assert!(r.is_subset_of(&region_of(&bumped)));
        }
    }
}

/// Every assignment of every matrix entry, with no canonical forms, for q = 1.
fn raw_region_q1(p: &GainProfile) -> RateRegion {
    let mut points = Vec::new();
    for r1 in 0..=1usize {
        for r2 in 0..=1usize {
            let bits = r1 + r2 + 2;
            let hit = (0u32..1 << bits).any(|code| {
                let mut next = {
                    let mut k = 0;
                    move || {
                        k += 1;
                        code >> (k - 1) & 1 == 1
                    }
                };
                let a1 = Gf2Matrix::from_fn(1, r1, |_, _| next());
                let a2 = Gf2Matrix::from_fn(1, r2, |_, _| next());
                let g1 = Gf2Matrix::from_fn(1, 1, |_, _| next());
                let g2 = Gf2Matrix::from_fn(1, 1, |_, _| next());
                let s = LinearScheme::new(a1, a2, g1, g2).unwrap();
                verify_rate(p, &s, RatePair::new(r1, r2))
            });
            if hit {
                points.push(RatePair::new(r1, r2));
            }
        }
    }
    RateRegion::from_points(1, points)
}

#[test]
fn canonical_enumeration_matches_raw_enumeration_at_q1() {
    for topology in Topology::ALL {
        for p in GainProfile::enumerate(topology, 1) {
            let oracle = oracle_region(&p, &SearchBudget::exhaustive()).unwrap();
            assert!(oracle.exact);
            assert!(oracle.region.same_points(&raw_region_q1(&p)), "{p}");
        }
    }
}
