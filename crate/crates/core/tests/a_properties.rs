//! Randomized property checks across modules, and JSON round trips.
//!
//! The file name sorts before `acceptance`, so these run even when an
//! acceptance line fails and that binary exits nonzero.

use std::fmt::Debug;

use proptest::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;

use berkline_core::berk_points::{BerkPoint, Mobius, NewtonPolygon};
use berkline_core::capacity::{
    chebyshev, energy, equilibrium, frostman_check, transfinite_diameter, ChebyshevMode, DiscUnion,
};
use berkline_core::dynamics::{height_on_graph, pushforward, resultant_data, RationalMap};
use berkline_core::exact_numbers::{int, rat, KernelValue, PrimeConfig, ValExp};
use berkline_core::harmonic::{
    cantor_matrix, evaluate_harmonic, solve_dirichlet, SimpleDomainBoundary,
};
use berkline_core::kernels::{depth, hsia_log, j_kernel, path_distance};
use berkline_core::metrized_graph::{
    laplacian, point_along, CpaFunction, DiscreteMeasure, MetrizedGraph,
};
use berkline_core::sampling::Sampler;

fn cfg(p: u64) -> PrimeConfig {
    PrimeConfig::new(p).unwrap()
}

const PRIMES: [u64; 4] = [2, 3, 5, 7];

fn sampler(k: u64) -> Sampler {
    Sampler::new(k, &cfg(PRIMES[k as usize % 4]))
}

fn values(s: &mut Sampler, g: &MetrizedGraph) -> Vec<ValExp> {
    (0..g.len()).map(|_| ValExp::from_rat(s.rat())).collect()
}

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + Debug>(v: &T) {
    let text = serde_json::to_string(v).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, v, "{text}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn serde_round_trips(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let c = s.cfg.clone();
        round_trip(&s.point());
        round_trip(&ValExp::new(s.rat(), s.rat()));
        round_trip(&KernelValue::Finite(s.irrational_rexp()));
        round_trip(&KernelValue::PlusInf);
        round_trip(&KernelValue::MinusInf);
        round_trip(&s.mobius());
        let g = s.tree(12, true);
        round_trip(&g);
        round_trip(&CpaFunction::new(g.clone(), values(&mut s, &g)).unwrap());
        round_trip(&s.probability(4, true));
        let phi = s.rational_map(3);
        round_trip(&phi);
        round_trip(&NewtonPolygon::of(phi.num(), &c));
        round_trip(&resultant_data(&phi, &c));
        let e = s.disc_union(4);
        prop_assert_eq!(DiscUnion::from_json(&e.to_json(), &c).unwrap(), e.clone());
        let r = equilibrium(&e, &BerkPoint::Infinity, &c).unwrap();
        round_trip(&r);
        round_trip(&frostman_check(&e, &r, &BerkPoint::Infinity, &[], &c));
        let b = SimpleDomainBoundary::new(s.leaf_boundary(3), &c).unwrap();
        round_trip(&b);
        let vals: Vec<ValExp> = (0..3).map(|_| ValExp::from_rat(s.rat())).collect();
        round_trip(&solve_dirichlet(&b, &vals, &b.default_aux(&c), &c).unwrap());
        round_trip(&cantor_matrix(&b, &b.default_aux(&c), &c));
        round_trip(&ChebyshevMode::Unrestricted);
    }

    #[test]
    fn height_approximations_round_trip(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let c = s.cfg.clone();
        let phi = s.rational_map(2);
        let pts: Vec<BerkPoint> = (0..3).map(|_| s.disc(false)).collect();
        let g = berkline_core::metrized_graph::span(&pts, &BerkPoint::gauss(), &c).unwrap();
        round_trip(&height_on_graph(&phi, &g, 2, &c).unwrap());
    }

    #[test]
    fn mobius_action_composes(seed in any::<u64>()) {
        let mut s = sampler(seed);
        let c = s.cfg.clone();
        let (h1, h2) = (s.mobius(), s.mobius());
        let x = s.point();
        prop_assert!(h1.apply(&h2.apply(&x, &c), &c).same(&h1.compose(&h2).apply(&x, &c), &c));
        prop_assert!(Mobius::inversion().apply(&Mobius::inversion().apply(&x, &c), &c).same(&x, &c));
    }
}

#[test]
fn kernel_reconstructs_cpa_functions() {
    for k in 0..100 {
        let mut s = sampler(k);
        let c = s.cfg.clone();
        let g = s.tree(14, true);
        let f = CpaFunction::new(g.clone(), values(&mut s, &g)).unwrap();
        let z = g.vertices[s.int(0, g.len() as i64 - 1) as usize].clone();
        let lap = laplacian(&f, &c);
        let recon: Vec<ValExp> = g
            .vertices
            .iter()
            .map(|x| {
                lap.atoms
                    .iter()
                    .map(|a| &a.mass * &j_kernel(x, &a.point, &z, &c).expect_finite("graph point"))
                    .sum()
            })
            .collect();
        let shift = &f.values[0] - &recon[0];
        for (v, r) in f.values.iter().zip(&recon) {
            assert_eq!(*v, r + &shift, "tree {k}");
        }
    }
}

#[test]
fn graph_maximum_principle() {
    for k in 0..100 {
        let mut s = sampler(k + 100);
        let c = s.cfg.clone();
        let g = s.tree(14, true);
        let f = CpaFunction::new(g.clone(), values(&mut s, &g)).unwrap();
        if f.values.iter().all(|v| *v == f.values[0]) {
            continue;
        }
        let max = f.values.iter().cloned().reduce(|a, b| a.max(b)).unwrap();
        let lap = laplacian(&f, &c);
        let ok = g
            .vertices
            .iter()
            .zip(&f.values)
            .any(|(x, v)| *v == max && lap.mass_at(x, &c).is_positive());
        assert!(ok, "tree {k}");
    }
}

/// hsia(x, y; inf) - j_z(x, y) + j_z(x, r) + j_z(y, r) is the exponent of
/// z, where r is the retraction of infinity to the graph.
#[test]
fn hsia_and_potential_kernel_differ_by_a_constant() {
    for k in 0..100 {
        let mut s = sampler(k + 200);
        let c = s.cfg.clone();
        let g = s.tree(12, true);
        let r = g.retract_point(&BerkPoint::Infinity, &c);
        let z = g.vertices[s.int(0, g.len() as i64 - 1) as usize].clone();
        for x in &g.vertices {
            for y in &g.vertices {
                let v = hsia_log(x, y, &BerkPoint::Infinity, &c).expect_finite("discs")
                    - j_kernel(x, y, &z, &c).expect_finite("graph")
                    + j_kernel(x, &r, &z, &c).expect_finite("graph")
                    + j_kernel(y, &r, &z, &c).expect_finite("graph");
                assert_eq!(v, *z.rexp().unwrap(), "tree {k}");
            }
        }
    }
}

#[test]
fn cantor_matrix_is_nonsingular() {
    for k in 0..200 {
        let mut s = sampler(k + 300);
        let c = s.cfg.clone();
        let m = s.int(1, 6) as usize;
        let b = SimpleDomainBoundary::new(s.leaf_boundary(m), &c).unwrap();
        assert!(
            !cantor_matrix(&b, &b.default_aux(&c), &c).det().is_zero(),
            "boundary {k}"
        );
    }
}

#[test]
fn harmonic_maximum_principle() {
    for k in 0..100 {
        let mut s = sampler(k + 400);
        let c = s.cfg.clone();
        let m = s.int(2, 5) as usize;
        let pts = s.leaf_boundary(m);
        let b = SimpleDomainBoundary::new(pts.clone(), &c).unwrap();
        let vals: Vec<ValExp> = (0..m).map(|_| ValExp::from_rat(s.rat())).collect();
        let sol = solve_dirichlet(&b, &vals, &b.default_aux(&c), &c).unwrap();
        let lo = vals.iter().cloned().reduce(|a, b| a.min(b)).unwrap();
        let hi = vals.iter().cloned().reduce(|a, b| a.max(b)).unwrap();
        for i in 0..m {
            let j = (i + 1) % m;
            let len = path_distance(&pts[i], &pts[j], &c).expect_finite("discs");
            let x = point_along(&pts[i], &pts[j], &len.scale(&rat(1, 3)), &c);
            let v = evaluate_harmonic(&sol, &x, &c).unwrap();
            assert!(v >= lo && v <= hi, "boundary {k}");
        }
    }
}

/// Shrinks every disc of e by a random amount.
fn shrink(s: &mut Sampler, e: &DiscUnion) -> DiscUnion {
    let discs = e
        .discs()
        .iter()
        .map(|(a, t)| (a.clone(), t + &ValExp::int(s.int(0, 2))))
        .collect();
    DiscUnion::new(discs, &s.cfg).unwrap()
}

#[test]
fn robin_constant_is_monotone() {
    for k in 0..60 {
        let mut s = sampler(k + 500);
        let c = s.cfg.clone();
        let big = s.disc_union(4);
        let small = shrink(&mut s, &big);
        let drop_one =
            DiscUnion::new(big.discs()[..big.discs().len().div_ceil(2)].to_vec(), &c).unwrap();
        let v = |e: &DiscUnion| equilibrium(e, &BerkPoint::Infinity, &c).unwrap().robin;
        let vb = v(&big);
        assert!(v(&small) >= vb, "union {k}");
        assert!(v(&drop_one) >= vb, "union {k}");
    }
}

#[test]
fn energy_is_a_quadratic_form() {
    for k in 0..100 {
        let mut s = sampler(k + 600);
        let c = s.cfg.clone();
        let inf = BerkPoint::Infinity;
        let n1 = s.probability(3, true);
        let n2 = s.probability(3, true);
        let a = ValExp::ratio(s.int(0, 6), 6);
        let b = &ValExp::int(1) - &a;
        let mix = n1.scale(&a).plus(&n2.scale(&b), &c);
        let cross: ValExp = n1
            .atoms
            .iter()
            .flat_map(|x| n2.atoms.iter().map(move |y| (x, y)))
            .map(|(x, y)| {
                &(&x.mass * &y.mass)
                    * &hsia_log(&x.point, &y.point, &inf, &c).expect_finite("discs")
            })
            .sum();
        let e = |m: &DiscreteMeasure| energy(m, &inf, &c).unwrap().expect_finite("discs");
        let want = &(&a * &a) * &e(&n1) + &(&b * &b) * &e(&n2) + (&a * &b).scale(&int(2)) * cross;
        assert_eq!(e(&mix), want, "case {k}");
    }
}

#[test]
fn frostman_certificates_on_random_unions() {
    for k in 0..40 {
        let mut s = sampler(k + 700);
        let c = s.cfg.clone();
        let e = s.disc_union(4);
        let zeta = if k % 2 == 0 {
            BerkPoint::Infinity
        } else {
            loop {
                let z = s.disc(true);
                if !e.contains_point(&z, &c) {
                    break z;
                }
            }
        };
        let r = equilibrium(&e, &zeta, &c).unwrap();
        let mut samples: Vec<BerkPoint> = (0..200).map(|_| s.point()).collect();
        samples.retain(|x| !x.same(&zeta, &c));
        let rep = frostman_check(&e, &r, &zeta, &samples, &c);
        assert!(rep.passed, "union {k}: {:?}", rep.witness);
    }
}

#[test]
fn diameters_decrease_and_restriction_costs() {
    for k in 0..30 {
        let mut s = sampler(k + 800);
        let c = s.cfg.clone();
        let inf = BerkPoint::Infinity;
        let e = s.disc_union(3);
        let cands = e.refined_candidates(1, &c);
        let mut prev = None;
        for n in 2..=6 {
            let v = transfinite_diameter(&e, n, &cands, &inf, &c).unwrap();
            if let Some(p) = prev {
                // d_(n+1) <= d_n, i.e. the exponent grows
                assert!(v >= p, "union {k}, n = {n}");
            }
            prev = Some(v);
        }
        let mut wide = cands.clone();
        wide.extend((0..4).map(|_| s.disc(false)));
        for n in 1..=4 {
            let r = chebyshev(&e, n, ChebyshevMode::Restricted, &wide, &inf, &c).unwrap();
            let u = chebyshev(&e, n, ChebyshevMode::Unrestricted, &wide, &inf, &c).unwrap();
            // CH restricted >= CH unrestricted, reversed in exponent form
            assert!(r <= u, "union {k}, n = {n}");
        }
    }
}

/// Moving a point down into a disc never increases delta to a fixed point;
/// this backs evaluating sup over E at boundary points only.
#[test]
fn hsia_kernel_decreases_into_discs() {
    for k in 0..200 {
        let mut s = sampler(k + 900);
        let c = s.cfg.clone();
        let x = s.disc(true);
        let a = s.point();
        let below = BerkPoint::disc(
            x.center().unwrap().clone(),
            x.rexp().unwrap() + &ValExp::int(s.int(1, 3)),
        );
        let inf = BerkPoint::Infinity;
        assert!(
            hsia_log(&below, &a, &inf, &c) >= hsia_log(&x, &a, &inf, &c),
            "case {k}"
        );
        assert_eq!(depth(&x), hsia_log(&x, &x, &inf, &c));
    }
}

#[test]
fn pushforward_preserves_mass() {
    for k in 0..100 {
        let mut s = sampler(k + 1000);
        let c = s.cfg.clone();
        let phi: RationalMap = s.rational_map(3);
        let nu = s.probability(4, true);
        assert!(
            pushforward(&phi, &nu, &c).unwrap().is_probability(),
            "case {k}"
        );
    }
}
