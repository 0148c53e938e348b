//! Rational maps acting on the Berkovich line: images of points,
//! multiplicities, measure transport, local heights and approximations of the
//! canonical measure on finite graphs.

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::berk_points::{min_affine, poly_seminorm_log, shifted_ords, BerkPoint, NewtonPolygon};
use crate::error::{Error, Result};
use crate::exact_numbers::{int, PrimeConfig, Rat, ValExp};
use crate::ffield::{factor, FpPoly};
use crate::kernels::{join, path_distance};
use crate::linalg::solve;
use crate::metrized_graph::{laplacian, CpaFunction, DiscreteMeasure, MetrizedGraph};
use crate::poly::{resultant_formal, Poly};

/// Default bound on the iteration depth n, overridable through
/// BERKLINE_MAX_DEPTH.
pub const DEFAULT_MAX_DEPTH: u32 = 8;

/// Iterated lifts beyond this degree are refused.
pub const MAX_LIFT_DEGREE: usize = 4096;

pub fn max_depth() -> u32 {
    std::env::var("BERKLINE_MAX_DEPTH")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_MAX_DEPTH)
}

fn check_depth(n: u32) -> Result<()> {
    let m = max_depth();
    if n > m {
        return Err(Error::DepthGuard(n, m));
    }
    Ok(())
}

/// T -> P(T)/Q(T) with gcd(P, Q) = 1 and degree d = max(deg P, deg Q) >= 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "MapRepr", into = "MapRepr")]
pub struct RationalMap {
    p: Poly,
    q: Poly,
    d: usize,
}

#[derive(Serialize, Deserialize)]
struct MapRepr {
    #[serde(rename = "P")]
    p: Poly,
    #[serde(rename = "Q")]
    q: Poly,
}

impl TryFrom<MapRepr> for RationalMap {
    type Error = Error;
    fn try_from(m: MapRepr) -> Result<Self> {
        RationalMap::new(m.p, m.q)
    }
}

impl From<RationalMap> for MapRepr {
    fn from(m: RationalMap) -> Self {
        MapRepr { p: m.p, q: m.q }
    }
}

impl RationalMap {
    pub fn new(p: Poly, q: Poly) -> Result<Self> {
        if p.is_zero() || q.is_zero() {
            return Err(Error::Invalid(
                "map with a zero numerator or denominator".into(),
            ));
        }
        let d = p.degree().unwrap().max(q.degree().unwrap());
        if d == 0 {
            return Err(Error::Invalid("constant map".into()));
        }
        if crate::poly::resultant(&p, &q).is_zero() {
            return Err(Error::Invalid(
                "numerator and denominator are not coprime".into(),
            ));
        }
        Ok(RationalMap { p, q, d })
    }

    /// T^d.
    pub fn power(d: usize) -> Self {
        RationalMap::new(Poly::monomial(Rat::one(), d), Poly::one()).unwrap()
    }

    pub fn num(&self) -> &Poly {
        &self.p
    }

    pub fn den(&self) -> &Poly {
        &self.q
    }

    pub fn degree(&self) -> usize {
        self.d
    }

    /// F_1(1, T) = Q and F_2(1, T) = P.
    pub fn lift(&self) -> (Poly, Poly) {
        (self.q.clone(), self.p.clone())
    }

    /// The T^d coefficients (F_1(0, 1), F_2(0, 1)).
    fn top_coeffs(&self) -> (Rat, Rat) {
        (self.q.coeff(self.d), self.p.coeff(self.d))
    }

    /// (F_1^(n)(1, T), F_2^(n)(1, T)) for the n-th iterate of the lift.
    pub fn iterated_lift(&self, n: u32) -> Result<(Poly, Poly)> {
        check_depth(n)?;
        let deg = (self.d as u128).checked_pow(n).unwrap_or(u128::MAX);
        if deg > MAX_LIFT_DEGREE as u128 {
            return Err(Error::DepthGuard(n, max_depth()));
        }
        let (f1, f2) = self.lift();
        let mut a = Poly::one();
        let mut b = Poly::monomial(Rat::one(), 1);
        for _ in 0..n {
            let pa: Vec<Poly> = (0..=self.d)
                .scan(Poly::one(), |acc, i| {
                    let cur = acc.clone();
                    if i < self.d {
                        *acc = &*acc * &a;
                    }
                    Some(cur)
                })
                .collect();
            let pb: Vec<Poly> = (0..=self.d)
                .scan(Poly::one(), |acc, i| {
                    let cur = acc.clone();
                    if i < self.d {
                        *acc = &*acc * &b;
                    }
                    Some(cur)
                })
                .collect();
            let form = |f: &Poly| {
                let mut s = Poly::zero();
                for k in 0..=self.d {
                    let c = f.coeff(k);
                    if !c.is_zero() {
                        s = &s + &(&pa[self.d - k] * &pb[k]).scale(&c);
                    }
                }
                s
            };
            let (na, nb) = (form(&f1), form(&f2));
            a = na;
            b = nb;
        }
        Ok((a, b))
    }

    /// Image of a type I point (or infinity).
    pub fn eval_point(&self, x: &BerkPoint) -> BerkPoint {
        match x {
            BerkPoint::TypeI(t) => {
                let den = self.q.eval(t);
                if den.is_zero() {
                    BerkPoint::Infinity
                } else {
                    BerkPoint::TypeI(self.p.eval(t) / den)
                }
            }
            BerkPoint::Infinity => {
                let (q_top, p_top) = self.top_coeffs();
                if q_top.is_zero() {
                    BerkPoint::Infinity
                } else {
                    BerkPoint::TypeI(p_top / q_top)
                }
            }
            _ => panic!("eval_point takes type I points"),
        }
    }
}

/// The image of x under phi. Disc points go through the candidate centers
/// p_k/q_k of the shifted coefficients and are checked against probe
/// seminorms.
pub fn apply(phi: &RationalMap, x: &BerkPoint, cfg: &PrimeConfig) -> Result<BerkPoint> {
    let (center, s) = match x {
        BerkPoint::Disc { center, rexp } => (center, rexp),
        _ => return Ok(phi.eval_point(x)),
    };
    let pt = phi.p.taylor_shift(center);
    let qt = phi.q.taylor_shift(center);
    let sigma_q = min_affine(&ords(&qt, cfg), s);
    let f = |beta: &Rat| min_affine(&ords(&(&pt - &qt.scale(beta)), cfg), s);
    let mut best: Option<(Rat, ValExp)> = None;
    for k in 0..qt.coeffs().len() {
        let qk = qt.coeff(k);
        if qk.is_zero() {
            continue;
        }
        let beta = pt.coeff(k) / qk;
        let v = f(&beta);
        if best.as_ref().is_none_or(|(_, bv)| v > *bv) {
            best = Some((beta, v));
        }
    }
    let (b, fb) = best.expect("nonzero denominator");
    let rho = fb - &sigma_q;
    let y = BerkPoint::disc(b.clone(), rho.clone());
    // probes T - beta: -log [T - beta]_y = min(rho, ord(beta - b))
    let step = |e: i64| &b + cfg.pow(e);
    let probes = [
        b.clone(),
        step(rho.floor() - 1),
        step(rho.floor()),
        step(rho.ceil() + 1),
        Rat::zero(),
        Rat::one(),
    ];
    for beta in &probes {
        let lhs = f(beta) - &sigma_q;
        let rhs = match cfg.ord(&(beta - &b)) {
            Some(o) => rho.clone().min(ValExp::int(o)),
            None => rho.clone(),
        };
        if lhs != rhs {
            return Err(Error::VerificationFailed(format!(
                "image of {x}: probe T - {beta} gives {lhs}, expected {rhs}"
            )));
        }
    }
    Ok(y)
}

fn ords(g: &Poly, cfg: &PrimeConfig) -> Vec<Option<i64>> {
    g.coeffs().iter().map(|c| cfg.ord(c)).collect()
}

/// rho(phi x, phi y) <= d rho(x, y).
pub fn lipschitz_check(
    phi: &RationalMap,
    x: &BerkPoint,
    y: &BerkPoint,
    cfg: &PrimeConfig,
) -> Result<bool> {
    if x.is_type_i() || y.is_type_i() {
        return Err(Error::Invalid(
            "Lipschitz check needs non-type-I points".into(),
        ));
    }
    let lhs = path_distance(&apply(phi, x, cfg)?, &apply(phi, y, cfg)?, cfg)
        .expect_finite("image distance");
    let rhs = path_distance(x, y, cfg).expect_finite("distance");
    Ok(lhs <= rhs.scale(&int(phi.d as i64)))
}

/// Zero counts of a degree-d form per residue direction at the Gauss point:
/// irreducible factors of the reduction with multiplicities, plus the count
/// in the direction of infinity.
struct DirectionCounts {
    finite: BTreeMap<FpPoly, usize>,
    infinite: usize,
}

fn direction_counts(f: &Poly, d: usize, cfg: &PrimeConfig) -> DirectionCounts {
    let m = f
        .coeffs()
        .iter()
        .filter_map(|c| cfg.ord(c))
        .min()
        .expect("nonzero form");
    let prim = f.scale(&cfg.pow(-m));
    let red = FpPoly::reduce(&prim, cfg).expect("primitive polynomial");
    let rd = red.degree().expect("primitive reduction is nonzero");
    let infinite = d - rd;
    // zeros outside the closed unit disc, read off the Newton polygon
    let outer: usize = NewtonPolygon::of(&prim, cfg)
        .root_valuations()
        .into_iter()
        .filter(|(v, _)| *v < Rat::zero())
        .map(|(_, k)| k)
        .sum();
    debug_assert_eq!(outer + d - prim.degree().unwrap(), infinite);
    let finite = if rd == 0 {
        BTreeMap::new()
    } else {
        factor(&red, cfg.p()).into_iter().collect()
    };
    DirectionCounts { finite, infinite }
}

fn integral_disc(q: &BerkPoint) -> Result<(&Rat, i64)> {
    match q {
        BerkPoint::Disc { center, rexp } => match rexp.as_rat() {
            Some(r) if r.is_integer() => Ok((center, i64::try_from(r.to_integer()).unwrap())),
            _ => Err(Error::UnsupportedPoint(format!(
                "{q}: exponent is not an integer"
            ))),
        },
        _ => Err(Error::UnsupportedPoint(format!("{q}: not a type II point"))),
    }
}

/// m_{phi, phi(q)}(q) at an integral type II point, from the preimage counts
/// of b0 = center of phi(q) and of a point zeta in another component of the
/// complement of phi(q), per residue direction at q.
pub fn multiplicity(phi: &RationalMap, q: &BerkPoint, cfg: &PrimeConfig) -> Result<usize> {
    let (c, r) = integral_disc(q)?;
    let b = apply(phi, q, cfg)?;
    let (cb, rb) = integral_disc(&b)?;
    // conjugate so that q and b both become the Gauss point
    let scale = cfg.pow(r);
    let ph = phi.p.taylor_shift(c).dilate(&scale);
    let qh = phi.q.taylor_shift(c).dilate(&scale);
    let f_a = &ph - &qh.scale(cb);
    let f_z = &f_a - &qh.scale(&cfg.pow(rb - 1));
    let na = direction_counts(&f_a, phi.d, cfg);
    let nz = direction_counts(&f_z, phi.d, cfg);
    let mut m = nz.infinite.saturating_sub(na.infinite);
    for (g, ez) in &nz.finite {
        let ea = na.finite.get(g).copied().unwrap_or(0);
        m += g.degree().unwrap() * ez.saturating_sub(ea);
    }
    if m == 0 || m > phi.d {
        return Err(Error::VerificationFailed(format!(
            "multiplicity {m} at {q}"
        )));
    }
    Ok(m)
}

pub fn ramification(phi: &RationalMap, q: &BerkPoint, cfg: &PrimeConfig) -> Result<usize> {
    Ok(multiplicity(phi, q, cfg)? - 1)
}

pub fn pushforward(
    phi: &RationalMap,
    nu: &DiscreteMeasure,
    cfg: &PrimeConfig,
) -> Result<DiscreteMeasure> {
    let atoms = nu
        .atoms
        .iter()
        .map(|a| Ok((apply(phi, &a.point, cfg)?, a.mass.clone())))
        .collect::<Result<Vec<_>>>()?;
    Ok(DiscreteMeasure::from_atoms(atoms, cfg))
}

/// phi^* nu, given for each atom of nu (in order) its fiber with
/// multiplicities; each fiber must map onto the atom and have total
/// multiplicity d.
pub fn pullback(
    phi: &RationalMap,
    nu: &DiscreteMeasure,
    fibers: &[Vec<(BerkPoint, usize)>],
    cfg: &PrimeConfig,
) -> Result<DiscreteMeasure> {
    if fibers.len() != nu.atoms.len() {
        return Err(Error::FiberMultiplicityMismatch);
    }
    let mut atoms = Vec::new();
    for (a, fiber) in nu.atoms.iter().zip(fibers) {
        if fiber.iter().map(|(_, m)| m).sum::<usize>() != phi.d {
            return Err(Error::FiberMultiplicityMismatch);
        }
        for (q, m) in fiber {
            if !apply(phi, q, cfg)?.same(&a.point, cfg) {
                return Err(Error::FiberMultiplicityMismatch);
            }
            atoms.push((q.clone(), a.mass.scale(&int(*m as i64))));
        }
    }
    Ok(DiscreteMeasure::from_atoms(atoms, cfg))
}

/// Coefficients scaled so the smallest ord is 0, then ord Res = 0.
pub fn good_reduction(phi: &RationalMap, cfg: &PrimeConfig) -> bool {
    let (f1, f2) = phi.lift();
    let m = f1
        .coeffs()
        .iter()
        .chain(f2.coeffs())
        .filter_map(|c| cfg.ord(c))
        .min()
        .unwrap();
    let s = cfg.pow(-m);
    let res = resultant_formal(&f1.scale(&s), phi.d, &f2.scale(&s), phi.d);
    cfg.ord(&res) == Some(0)
}

/// Exponent data of the lift: b1, b2 and the bounds in
/// B1 ||P||^d <= ||F(P)|| <= B2 ||P||^d, all in log_p form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResultantData {
    #[serde(with = "crate::exact_numbers::rat_str")]
    pub b1: Rat,
    #[serde(with = "crate::exact_numbers::rat_str")]
    pub b2: Rat,
    /// -log_p B1
    pub neg_log_b1: i64,
    /// log_p B2
    pub log_b2: i64,
    /// C1 = max(-log_p B1, log_p B2)
    pub c1: i64,
}

#[allow(clippy::needless_range_loop)]
pub fn resultant_data(phi: &RationalMap, cfg: &PrimeConfig) -> ResultantData {
    let d = phi.d;
    let (f1, f2) = phi.lift();
    let b1 = resultant_formal(&f1, d, &f2, d);
    let b2 = resultant_formal(&f1.reversed(d), d, &f2.reversed(d), d);
    // g1 F1 + g2 F2 = b1 and h1 F1 + h2 F2 = b1 T^(2d-1), deg g, h < d
    let n = 2 * d;
    let mut mat = vec![vec![ValExp::zero(); n]; n];
    for e in 0..n {
        for i in 0..d {
            if e >= i {
                mat[e][i] = ValExp::from_rat(f1.coeff(e - i));
                mat[e][d + i] = ValExp::from_rat(f2.coeff(e - i));
            }
        }
    }
    let mut min_gh: Option<i64> = None;
    for target in [0, n - 1] {
        let mut rhs = vec![ValExp::zero(); n];
        rhs[target] = ValExp::from_rat(b1.clone());
        let sol = solve(&mat, &rhs).expect("nonzero resultant");
        for v in sol {
            if let Some(o) = cfg.ord(v.as_rat().unwrap()) {
                min_gh = Some(min_gh.map_or(o, |m| m.min(o)));
            }
        }
    }
    let ord_b = cfg.ord(&b1).unwrap().max(cfg.ord(&b2).unwrap());
    let neg_log_b1 = ord_b - min_gh.unwrap();
    let log_b2 = -f1
        .coeffs()
        .iter()
        .chain(f2.coeffs())
        .filter_map(|c| cfg.ord(c))
        .min()
        .unwrap();
    ResultantData {
        b1,
        b2,
        neg_log_b1,
        log_b2,
        c1: neg_log_b1.max(log_b2),
    }
}

/// log_p max(1, [T]_x) for x other than infinity.
pub fn log_max_one(x: &BerkPoint, cfg: &PrimeConfig) -> Result<ValExp> {
    let neg_log_t = match x {
        BerkPoint::Infinity => return Err(Error::UnsupportedPoint("infinity".into())),
        BerkPoint::TypeI(t) => match cfg.ord(t) {
            Some(o) => ValExp::int(o),
            None => return Ok(ValExp::zero()),
        },
        BerkPoint::Disc { center, rexp } => match cfg.ord(center) {
            Some(o) => rexp.clone().min(ValExp::int(o)),
            None => rexp.clone(),
        },
    };
    Ok(ValExp::zero().max(-neg_log_t))
}

/// g(y) = log_p ||F(1, T)||_y - d log_p ||(1, T)||_y, a function of the
/// projective point y.
pub fn height_increment(phi: &RationalMap, y: &BerkPoint, cfg: &PrimeConfig) -> ValExp {
    let (f1, f2) = phi.lift();
    match y {
        BerkPoint::Infinity => {
            let (a, b) = phi.top_coeffs();
            let o = [a, b].iter().filter_map(|c| cfg.ord(c)).min().unwrap();
            ValExp::int(-o)
        }
        _ => {
            let s1 = poly_seminorm_log(&f1, y, cfg);
            let s2 = poly_seminorm_log(&f2, y, cfg);
            let m = s1.min(s2).expect_finite("F has no common zero");
            -m - log_max_one(y, cfg).unwrap().scale(&int(phi.d as i64))
        }
    }
}

/// The truncated local height
///   h^(n)(x) = d^-n log_p max([F_1^(n)(1,T)]_x, [F_2^(n)(1,T)]_x),
/// evaluated along the forward orbit as
///   h^(n)(x) = log_p max(1, [T]_x) + sum_{k<n} d^-(k+1) g(phi^k x).
pub fn call_silverman(
    phi: &RationalMap,
    x: &BerkPoint,
    n: u32,
    cfg: &PrimeConfig,
) -> Result<ValExp> {
    check_depth(n)?;
    let mut h = log_max_one(x, cfg)?;
    let mut y = x.clone();
    let d = Rat::from_integer(phi.d.into());
    let mut w = Rat::one();
    for _ in 0..n {
        w /= &d;
        h += &height_increment(phi, &y, cfg).scale(&w);
        y = apply(phi, &y, cfg)?;
    }
    Ok(h)
}

/// Same value as `call_silverman`, from the iterated lift polynomials.
pub fn call_silverman_direct(
    phi: &RationalMap,
    x: &BerkPoint,
    n: u32,
    cfg: &PrimeConfig,
) -> Result<ValExp> {
    if x.is_infinity() {
        return Err(Error::UnsupportedPoint("infinity".into()));
    }
    let (a, b) = phi.iterated_lift(n)?;
    let m = poly_seminorm_log(&a, x, cfg)
        .min(poly_seminorm_log(&b, x, cfg))
        .expect_finite("iterated lift has no common zero");
    let dn = Rat::from_integer(num_traits::pow(num_bigint::BigInt::from(phi.d), n as usize));
    Ok((-m).scale(&dn.recip()))
}

/// h^(n) restricted to a graph refined at all breakpoints.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeightApprox {
    pub map: RationalMap,
    pub n: u32,
    pub graph: MetrizedGraph,
    pub values: CpaFunction,
}

pub fn height_on_graph(
    phi: &RationalMap,
    graph: &MetrizedGraph,
    n: u32,
    cfg: &PrimeConfig,
) -> Result<HeightApprox> {
    if graph.vertices.iter().any(|v| v.is_type_i()) {
        return Err(Error::Invalid(
            "graph vertices must not be of type I".into(),
        ));
    }
    let (a, b) = phi.iterated_lift(n)?;
    // make every edge vertical: add the top of each edge path and the
    // retraction of infinity
    let mut tops = vec![graph.retract_point(&BerkPoint::Infinity, cfg)];
    for e in &graph.edges {
        tops.push(join(&graph.vertices[e.i], &graph.vertices[e.j], cfg));
    }
    tops.retain(|x| graph.vertex_of(x, cfg).is_none());
    let graph = graph.refine(&tops, cfg)?;
    let mut extra = Vec::new();
    for e in &graph.edges {
        let (u, w) = (&graph.vertices[e.i], &graph.vertices[e.j]);
        let (c, lo, hi) = match (u, w) {
            (
                BerkPoint::Disc {
                    center: cu,
                    rexp: su,
                },
                BerkPoint::Disc {
                    center: cw,
                    rexp: sw,
                },
            ) => {
                if su > sw {
                    (cu, sw, su)
                } else {
                    (cw, su, sw)
                }
            }
            _ => unreachable!("disc vertices"),
        };
        // -log of the lift norm along the edge is min_k (o_k + k t)
        let oa = shifted_ords(&a, c, cfg);
        let ob = shifted_ords(&b, c, cfg);
        let len = oa.len().max(ob.len());
        let o: Vec<Option<i64>> = (0..len)
            .map(
                |k| match (oa.get(k).copied().flatten(), ob.get(k).copied().flatten()) {
                    (Some(x), Some(y)) => Some(x.min(y)),
                    (x, y) => x.or(y),
                },
            )
            .collect();
        let synthetic = Poly::new(
            o.iter()
                .map(|x| x.map_or_else(Rat::zero, |x| cfg.pow(x)))
                .collect(),
        );
        for (t, _) in NewtonPolygon::of(&synthetic, cfg).root_valuations() {
            let t = ValExp::from_rat(t);
            if t > *lo && t < *hi {
                extra.push(BerkPoint::disc(c.clone(), t));
            }
        }
    }
    let refined = graph.refine(&extra, cfg)?;
    let dn =
        Rat::from_integer(num_traits::pow(num_bigint::BigInt::from(phi.d), n as usize)).recip();
    let values = CpaFunction::from_fn(&refined, |v| {
        let m = poly_seminorm_log(&a, v, cfg)
            .min(poly_seminorm_log(&b, v, cfg))
            .expect_finite("disc vertex");
        (-m).scale(&dn)
    });
    Ok(HeightApprox {
        map: phi.clone(),
        n,
        graph: refined,
        values,
    })
}

/// mu_n = delta at the retraction of infinity minus the Laplacian of h^(n) on
/// the refined graph.
pub fn lyubich_on_graph(
    phi: &RationalMap,
    graph: &MetrizedGraph,
    n: u32,
    cfg: &PrimeConfig,
) -> Result<DiscreteMeasure> {
    let h = height_on_graph(phi, graph, n, cfg)?;
    let top = h.graph.retract_point(&BerkPoint::Infinity, cfg);
    let lap = laplacian(&h.values, cfg);
    Ok(DiscreteMeasure::dirac(top).minus(&lap, cfg))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numbers::rat;

    fn cfg(p: u64) -> PrimeConfig {
        PrimeConfig::new(p).unwrap()
    }

    fn map(p: &[i64], q: &[i64]) -> RationalMap {
        RationalMap::new(Poly::from_ints(p), Poly::from_ints(q)).unwrap()
    }

    #[test]
    fn apply_examples() {
        for p in [2u64, 3, 5] {
            let c = cfg(p);
            for d in 1..=4usize {
                let phi = RationalMap::power(d);
                for s in -2..=3 {
                    let y = apply(&phi, &BerkPoint::disc_i(int(0), s), &c).unwrap();
                    assert!(y.same(&BerkPoint::disc_i(int(0), d as i64 * s), &c));
                }
            }
            let inv = map(&[1], &[0, 1]);
            let pp = p as i64;
            let y = apply(&inv, &BerkPoint::disc_i(int(pp), 3), &c).unwrap();
            assert!(y.same(&BerkPoint::disc_i(rat(1, pp), 1), &c));
            let good = map(&[1, 0, 1], &[0, 1]);
            assert!(apply(&good, &BerkPoint::gauss(), &c)
                .unwrap()
                .same(&BerkPoint::gauss(), &c));
        }
    }

    #[test]
    fn apply_agrees_with_mobius() {
        let c = cfg(3);
        let h = crate::berk_points::Mobius::new(int(2), int(1), int(3), int(-1)).unwrap();
        let phi = map(&[1, 2], &[-1, 3]);
        for x in [
            BerkPoint::disc_i(int(4), 2),
            BerkPoint::disc(rat(1, 3), ValExp::ratio(1, 2)),
        ] {
            assert!(apply(&phi, &x, &c).unwrap().same(&h.apply(&x, &c), &c));
        }
    }

    #[test]
    fn t_squared_multiplicities() {
        let sq = RationalMap::power(2);
        for p in [2u64, 3, 5, 7] {
            let c = cfg(p);
            assert_eq!(multiplicity(&sq, &BerkPoint::gauss(), &c).unwrap(), 2);
            assert_eq!(ramification(&sq, &BerkPoint::gauss(), &c).unwrap(), 1);
            let m = multiplicity(&sq, &BerkPoint::disc_i(int(1), 1), &c).unwrap();
            assert_eq!(m, if p == 2 { 2 } else { 1 });
        }
        let c = cfg(3);
        let err = multiplicity(&sq, &BerkPoint::disc(int(0), ValExp::ratio(1, 2)), &c).unwrap_err();
        assert!(matches!(err, Error::UnsupportedPoint(_)));
        let lin = map(&[1, 2], &[1]);
        assert_eq!(
            ramification(&lin, &BerkPoint::disc_i(int(5), 2), &c).unwrap(),
            0
        );
    }

    #[test]
    fn fiber_sums() {
        // T^2 over Disc(1,1), p odd: preimages Disc(1,1) and Disc(-1,1)
        let c = cfg(5);
        let sq = RationalMap::power(2);
        let b = BerkPoint::disc_i(int(1), 1);
        let total: usize = [int(1), int(-1)]
            .into_iter()
            .map(|a| {
                let q = BerkPoint::disc_i(a, 1);
                assert!(apply(&sq, &q, &c).unwrap().same(&b, &c));
                multiplicity(&sq, &q, &c).unwrap()
            })
            .sum();
        assert_eq!(total, 2);
    }

    #[test]
    fn pull_then_push() {
        let c = cfg(3);
        let sq = RationalMap::power(2);
        let nu = DiscreteMeasure::dirac(BerkPoint::gauss());
        let back = pullback(&sq, &nu, &[vec![(BerkPoint::gauss(), 2)]], &c).unwrap();
        assert!(back.same(&nu.scale(&ValExp::int(2)), &c));
        let there = pushforward(&sq, &back, &c).unwrap();
        assert!(there.same(&nu.scale(&ValExp::int(2)), &c));
        let bad = pullback(&sq, &nu, &[vec![(BerkPoint::gauss(), 1)]], &c).unwrap_err();
        assert_eq!(bad, Error::FiberMultiplicityMismatch);
        let pushed = pushforward(
            &sq,
            &DiscreteMeasure::dirac(BerkPoint::disc_i(int(0), 1)),
            &c,
        )
        .unwrap();
        assert!(pushed.same(&DiscreteMeasure::dirac(BerkPoint::disc_i(int(0), 2)), &c));
    }

    #[test]
    fn good_reduction_examples() {
        let c = cfg(3);
        assert!(good_reduction(&RationalMap::power(2), &c));
        assert!(!good_reduction(&map(&[0, 0, 1], &[3]), &c));
        assert!(good_reduction(&map(&[1, 2], &[1, 1]), &c));
    }

    #[test]
    fn heights_of_t_squared() {
        let c = cfg(3);
        let sq = RationalMap::power(2);
        for t in 1..4 {
            for n in 1..5 {
                let x = BerkPoint::disc_i(int(0), -t);
                assert_eq!(call_silverman(&sq, &x, n, &c).unwrap(), ValExp::int(t));
                assert_eq!(
                    call_silverman_direct(&sq, &x, n, &c).unwrap(),
                    ValExp::int(t)
                );
            }
        }
    }

    #[test]
    fn orbit_and_lift_heights_agree() {
        let c = cfg(2);
        let phi = map(&[1, 0, 3], &[2, 1]);
        let pts = [
            BerkPoint::gauss(),
            BerkPoint::disc_i(rat(1, 2), 1),
            BerkPoint::disc_i(int(3), -2),
            BerkPoint::TypeI(rat(5, 4)),
            BerkPoint::TypeI(int(-2)),
        ];
        for x in &pts {
            for n in 0..4 {
                assert_eq!(
                    call_silverman(&phi, x, n, &c).unwrap(),
                    call_silverman_direct(&phi, x, n, &c).unwrap(),
                    "{x} n={n}"
                );
            }
        }
    }

    #[test]
    fn c1_bounds_height_increments() {
        let c = cfg(3);
        let phi = map(&[1, 0, 3], &[9, 1]);
        let data = resultant_data(&phi, &c);
        for a in -5..5 {
            for t in -2..3 {
                let g = height_increment(&phi, &BerkPoint::disc_i(int(a), t), &c);
                assert!(g.abs() <= ValExp::int(data.c1));
            }
        }
    }

    #[test]
    fn depth_guard() {
        let c = cfg(3);
        let err = call_silverman(&RationalMap::power(2), &BerkPoint::gauss(), 50, &c).unwrap_err();
        assert!(matches!(err, Error::DepthGuard(50, _)));
    }

    #[test]
    fn lyubich_good_reduction_is_gauss_dirac() {
        let c = cfg(3);
        let pts = [
            BerkPoint::disc_i(int(0), 2),
            BerkPoint::disc_i(int(1), 1),
            BerkPoint::disc_i(int(0), -2),
        ];
        let g = crate::metrized_graph::span(&pts, &BerkPoint::gauss(), &c).unwrap();
        for phi in [RationalMap::power(2), map(&[1, 0, 1], &[0, 1])] {
            for n in 1..4 {
                let mu = lyubich_on_graph(&phi, &g, n, &c).unwrap();
                assert!(
                    mu.same(&DiscreteMeasure::dirac(BerkPoint::gauss()), &c),
                    "{mu:?}"
                );
            }
        }
    }

    #[test]
    fn lyubich_bad_reduction_is_a_probability() {
        let c = cfg(3);
        let phi = map(&[0, 0, 1], &[3]);
        let pts = [
            BerkPoint::disc_i(int(0), 3),
            BerkPoint::disc_i(int(1), 2),
            BerkPoint::disc_i(int(0), -2),
        ];
        let g = crate::metrized_graph::span(&pts, &BerkPoint::gauss(), &c).unwrap();
        for n in 1..4 {
            let mu = lyubich_on_graph(&phi, &g, n, &c).unwrap();
            assert!(mu.is_probability());
            assert!(mu.atoms.iter().all(|a| !a.mass.is_negative()));
        }
    }

    #[test]
    fn lyubich_on_edges_through_a_turning_point() {
        // the edge between D(0, -5/4) and D(3/25, -1) turns at D(0, -2)
        let c = cfg(5);
        let phi = map(&[2, 3], &[-6, 6, 6]);
        assert!(good_reduction(&phi, &c));
        let pts = [
            BerkPoint::disc(int(0), ValExp::ratio(-5, 4)),
            BerkPoint::disc_i(rat(3, 25), -1),
            BerkPoint::disc_i(int(303), 4),
        ];
        let g = crate::metrized_graph::span(&pts, &BerkPoint::gauss(), &c).unwrap();
        for n in 1..3 {
            let mu = lyubich_on_graph(&phi, &g, n, &c).unwrap();
            assert!(
                mu.same(&DiscreteMeasure::dirac(BerkPoint::gauss()), &c),
                "{mu:?}"
            );
        }
    }
}
