//! Points of the Berkovich projective line as rationals or discs.
//!
//! `Disc { center: a, rexp: t }` is the point of the closed disc
//! B(a, p^-t). Several centers describe the same disc, so structural
//! equality (`==`) compares representations; use [`BerkPoint::same`] or
//! [`BerkPoint::canonical`] for point equality.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::exact_numbers::{int, parse_rat, KernelValue, PrimeConfig, Rat, ValExp};
use crate::poly::{resultant, Poly};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PointType {
    #[serde(rename = "TYPE_I")]
    TypeI,
    #[serde(rename = "TYPE_II")]
    TypeII,
    #[serde(rename = "TYPE_III")]
    TypeIii,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum BerkPoint {
    TypeI(Rat),
    Infinity,
    Disc { center: Rat, rexp: ValExp },
}

impl BerkPoint {
    pub fn disc(center: Rat, rexp: ValExp) -> Self {
        BerkPoint::Disc { center, rexp }
    }

    /// Disc(center, t) with an integer exponent.
    pub fn disc_i(center: Rat, t: i64) -> Self {
        BerkPoint::Disc {
            center,
            rexp: ValExp::int(t),
        }
    }

    pub fn gauss() -> Self {
        BerkPoint::disc_i(Rat::zero(), 0)
    }

    pub fn is_type_i(&self) -> bool {
        !matches!(self, BerkPoint::Disc { .. })
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, BerkPoint::Infinity)
    }

    pub fn classify(&self) -> PointType {
        match self {
            BerkPoint::TypeI(_) | BerkPoint::Infinity => PointType::TypeI,
            BerkPoint::Disc { rexp, .. } if rexp.is_rational() => PointType::TypeII,
            BerkPoint::Disc { .. } => PointType::TypeIii,
        }
    }

    pub fn rexp(&self) -> Option<&ValExp> {
        match self {
            BerkPoint::Disc { rexp, .. } => Some(rexp),
            _ => None,
        }
    }

    pub fn center(&self) -> Option<&Rat> {
        match self {
            BerkPoint::Disc { center, .. } => Some(center),
            BerkPoint::TypeI(a) => Some(a),
            BerkPoint::Infinity => None,
        }
    }

    /// Representative with the center reduced modulo the disc, so that equal
    /// points have equal representations.
    pub fn canonical(&self, cfg: &PrimeConfig) -> BerkPoint {
        match self {
            BerkPoint::Disc { center, rexp } => BerkPoint::Disc {
                center: truncate(center, rexp.ceil(), cfg),
                rexp: rexp.clone(),
            },
            other => other.clone(),
        }
    }

    pub fn same(&self, other: &BerkPoint, cfg: &PrimeConfig) -> bool {
        match (self, other) {
            (BerkPoint::Disc { center: a, rexp: s }, BerkPoint::Disc { center: b, rexp: t }) => {
                s == t && ord_diff_ge(a, b, s, cfg)
            }
            _ => self == other,
        }
    }
}

/// ord_p(a - b) >= t (true when a = b).
pub fn ord_diff_ge(a: &Rat, b: &Rat, t: &ValExp, cfg: &PrimeConfig) -> bool {
    match cfg.ord(&(a - b)) {
        None => true,
        Some(v) => ValExp::int(v) >= *t,
    }
}

/// The rational sum of the p-adic digits of `a` below p^k.
pub fn truncate(a: &Rat, k: i64, cfg: &PrimeConfig) -> Rat {
    // a * p^-k = n / (p^e d'), with d' prime to p
    let y = a * cfg.pow(-k);
    let den = y.denom().clone();
    let e = cfg.ord_int(&den);
    if e == 0 {
        return Rat::zero();
    }
    let pe = num_traits::pow(cfg.p_big().clone(), e as usize);
    let d1 = &den / &pe;
    let inv = mod_inverse(&d1.mod_floor(&pe), &pe);
    let frac_num = (y.numer() * inv).mod_floor(&pe);
    Rat::new(frac_num, pe) * cfg.pow(k)
}

/// Inverse of a modulo m (gcd(a, m) = 1).
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "not invertible");
    e.x.mod_floor(m)
}

impl fmt::Display for BerkPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BerkPoint::TypeI(a) => write!(f, "{a}"),
            BerkPoint::Infinity => write!(f, "inf"),
            BerkPoint::Disc { center, rexp } => write!(f, "D({center}, {rexp})"),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "type")]
enum PointRepr {
    #[serde(rename = "I")]
    I { value: String },
    #[serde(rename = "disc")]
    Disc {
        #[serde(with = "crate::exact_numbers::rat_str")]
        center: Rat,
        rexp: ValExp,
    },
}

impl Serialize for BerkPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let r = match self {
            BerkPoint::TypeI(a) => PointRepr::I {
                value: a.to_string(),
            },
            BerkPoint::Infinity => PointRepr::I {
                value: "inf".into(),
            },
            BerkPoint::Disc { center, rexp } => PointRepr::Disc {
                center: center.clone(),
                rexp: rexp.clone(),
            },
        };
        r.serialize(s)
    }
}

impl<'de> Deserialize<'de> for BerkPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match PointRepr::deserialize(d)? {
            PointRepr::I { value } if value == "inf" => Ok(BerkPoint::Infinity),
            PointRepr::I { value } => parse_rat(&value)
                .map(BerkPoint::TypeI)
                .map_err(serde::de::Error::custom),
            PointRepr::Disc { center, rexp } => Ok(BerkPoint::Disc { center, rexp }),
        }
    }
}

pub fn classify(x: &BerkPoint) -> PointType {
    x.classify()
}

/// Whether `inner` lies in the closed disc of `outer`.
pub fn contains(outer: &BerkPoint, inner: &BerkPoint, cfg: &PrimeConfig) -> Result<bool> {
    let BerkPoint::Disc { center: a, rexp: t } = outer else {
        return Err(Error::Invalid(
            "contains: outer point must be a disc".into(),
        ));
    };
    Ok(match inner {
        BerkPoint::Infinity => false,
        BerkPoint::TypeI(v) => ord_diff_ge(v, a, t, cfg),
        BerkPoint::Disc { center: b, rexp: s } => s >= t && ord_diff_ge(a, b, t, cfg),
    })
}

/// z -> (a z + b) / (c z + d).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MobiusRepr", into = "MobiusRepr")]
pub struct Mobius {
    pub a: Rat,
    pub b: Rat,
    pub c: Rat,
    pub d: Rat,
}

#[derive(Clone, Serialize, Deserialize)]
struct MobiusRepr {
    #[serde(with = "crate::exact_numbers::rat_str")]
    a: Rat,
    #[serde(with = "crate::exact_numbers::rat_str")]
    b: Rat,
    #[serde(with = "crate::exact_numbers::rat_str")]
    c: Rat,
    #[serde(with = "crate::exact_numbers::rat_str")]
    d: Rat,
}

impl TryFrom<MobiusRepr> for Mobius {
    type Error = Error;
    fn try_from(r: MobiusRepr) -> Result<Self> {
        Mobius::new(r.a, r.b, r.c, r.d)
    }
}

impl From<Mobius> for MobiusRepr {
    fn from(h: Mobius) -> Self {
        MobiusRepr {
            a: h.a,
            b: h.b,
            c: h.c,
            d: h.d,
        }
    }
}

impl Mobius {
    pub fn new(a: Rat, b: Rat, c: Rat, d: Rat) -> Result<Self> {
        if (&a * &d - &b * &c).is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(Mobius { a, b, c, d })
    }

    pub fn inversion() -> Self {
        Mobius {
            a: Rat::zero(),
            b: Rat::one(),
            c: Rat::one(),
            d: Rat::zero(),
        }
    }

    pub fn affine(a: Rat, b: Rat) -> Result<Self> {
        Mobius::new(a, b, Rat::zero(), Rat::one())
    }

    pub fn det(&self) -> Rat {
        &self.a * &self.d - &self.b * &self.c
    }

    /// Matrix product: (self * o)(z) = self(o(z)).
    pub fn compose(&self, o: &Mobius) -> Mobius {
        Mobius {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn apply(&self, x: &BerkPoint, cfg: &PrimeConfig) -> BerkPoint {
        if self.c.is_zero() {
            let al = &self.a / &self.d;
            let be = &self.b / &self.d;
            return affine_apply(&al, &be, x, cfg);
        }
        // z -> c z + d -> 1/w -> a/c + ((b c - a d)/c) u
        let w = affine_apply(&self.c, &self.d, x, cfg);
        let u = invert(&w, cfg);
        affine_apply(
            &(&self.det() * int(-1) / &self.c),
            &(&self.a / &self.c),
            &u,
            cfg,
        )
    }
}

fn affine_apply(a: &Rat, b: &Rat, x: &BerkPoint, cfg: &PrimeConfig) -> BerkPoint {
    match x {
        BerkPoint::Infinity => BerkPoint::Infinity,
        BerkPoint::TypeI(v) => BerkPoint::TypeI(a * v + b),
        BerkPoint::Disc { center, rexp } => {
            let oa = cfg.ord(a).expect("affine map with a = 0");
            BerkPoint::Disc {
                center: a * center + b,
                rexp: rexp + &ValExp::int(oa),
            }
        }
    }
}

fn invert(x: &BerkPoint, cfg: &PrimeConfig) -> BerkPoint {
    match x {
        BerkPoint::Infinity => BerkPoint::TypeI(Rat::zero()),
        BerkPoint::TypeI(v) if v.is_zero() => BerkPoint::Infinity,
        BerkPoint::TypeI(v) => BerkPoint::TypeI(v.recip()),
        BerkPoint::Disc { center, rexp } => match cfg.ord(center) {
            Some(oc) if ValExp::int(oc) < *rexp => BerkPoint::Disc {
                center: center.recip(),
                rexp: rexp - &ValExp::int(2 * oc),
            },
            _ => BerkPoint::Disc {
                center: Rat::zero(),
                rexp: -rexp,
            },
        },
    }
}

pub fn mobius_apply(h: &Mobius, x: &BerkPoint, cfg: &PrimeConfig) -> Result<BerkPoint> {
    if h.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(h.apply(x, cfg))
}

/// A quotient of coprime polynomials over Q.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RationalFunction {
    pub num: Poly,
    pub den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<Self> {
        if num.is_zero() || den.is_zero() {
            return Err(Error::Invalid("rational function with a zero part".into()));
        }
        if resultant(&num, &den).is_zero() {
            return Err(Error::Invalid(
                "numerator and denominator are not coprime".into(),
            ));
        }
        Ok(RationalFunction { num, den })
    }

    pub fn poly(g: Poly) -> Result<Self> {
        RationalFunction::new(g, Poly::one())
    }

    pub fn degree(&self) -> usize {
        self.num.degree().unwrap().max(self.den.degree().unwrap())
    }
}

/// ords of the coefficients of g(T + a); None for zero coefficients.
pub fn shifted_ords(g: &Poly, a: &Rat, cfg: &PrimeConfig) -> Vec<Option<i64>> {
    g.taylor_shift(a)
        .coeffs()
        .iter()
        .map(|c| cfg.ord(c))
        .collect()
}

/// min_k (o_k + k t) over the finite entries.
pub fn min_affine(ords: &[Option<i64>], t: &ValExp) -> ValExp {
    ords.iter()
        .enumerate()
        .filter_map(|(k, o)| o.map(|o| ValExp::int(o) + t.scale(&int(k as i64))))
        .min()
        .expect("zero polynomial")
}

/// -log_p [g]_x for a nonzero polynomial g.
pub fn poly_seminorm_log(g: &Poly, x: &BerkPoint, cfg: &PrimeConfig) -> KernelValue {
    assert!(!g.is_zero(), "seminorm of the zero polynomial");
    match x {
        BerkPoint::TypeI(v) => match cfg.ord(&g.eval(v)) {
            Some(o) => KernelValue::Finite(ValExp::int(o)),
            None => KernelValue::PlusInf,
        },
        BerkPoint::Infinity => {
            if g.degree() == Some(0) {
                KernelValue::Finite(ValExp::int(cfg.ord(&g.coeff(0)).unwrap()))
            } else {
                KernelValue::MinusInf
            }
        }
        BerkPoint::Disc { center, rexp } => {
            KernelValue::Finite(min_affine(&shifted_ords(g, center, cfg), rexp))
        }
    }
}

/// -log_p [f]_x. Zeros of f at type I points give +inf, poles give -inf.
pub fn seminorm_log(f: &RationalFunction, x: &BerkPoint, cfg: &PrimeConfig) -> KernelValue {
    match x {
        BerkPoint::Infinity => {
            let (m, n) = (f.num.degree().unwrap(), f.den.degree().unwrap());
            if m > n {
                KernelValue::MinusInf
            } else if m < n {
                KernelValue::PlusInf
            } else {
                KernelValue::Finite(ValExp::int(
                    cfg.ord(&(f.num.lead() / f.den.lead())).unwrap(),
                ))
            }
        }
        _ => {
            let a = poly_seminorm_log(&f.num, x, cfg);
            let b = poly_seminorm_log(&f.den, x, cfg);
            match (a, b) {
                (_, KernelValue::PlusInf) => KernelValue::MinusInf,
                (KernelValue::PlusInf, _) => KernelValue::PlusInf,
                (KernelValue::Finite(a), KernelValue::Finite(b)) => KernelValue::Finite(a - b),
                _ => unreachable!("finite point gives finite or +inf seminorm logs"),
            }
        }
    }
}

/// Lower convex hull of {(k, ord c_k)}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NewtonPolygon {
    #[serde(with = "vertex_list")]
    pub vertices: Vec<(usize, Rat)>,
}

mod vertex_list {
    use super::*;
    pub fn serialize<S: Serializer>(
        v: &[(usize, Rat)],
        s: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let r: Vec<(usize, String)> = v.iter().map(|(k, o)| (*k, o.to_string())).collect();
        r.serialize(s)
    }
    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<Vec<(usize, Rat)>, D::Error> {
        let r = Vec::<(usize, String)>::deserialize(d)?;
        r.into_iter()
            .map(|(k, s)| {
                parse_rat(&s)
                    .map(|o| (k, o))
                    .map_err(serde::de::Error::custom)
            })
            .collect()
    }
}

impl NewtonPolygon {
    pub fn of(g: &Poly, cfg: &PrimeConfig) -> Self {
        let pts: Vec<(usize, Rat)> = g
            .coeffs()
            .iter()
            .enumerate()
            .filter_map(|(k, c)| cfg.ord(c).map(|o| (k, int(o))))
            .collect();
        NewtonPolygon {
            vertices: lower_hull(&pts),
        }
    }

    /// (root valuation, count) per segment, from the leftmost segment on.
    /// Root valuations decrease along the polygon.
    pub fn root_valuations(&self) -> Vec<(Rat, usize)> {
        self.vertices
            .windows(2)
            .map(|w| {
                let (i, vi) = &w[0];
                let (j, vj) = &w[1];
                let slope = (vj - vi) / int((j - i) as i64);
                (-slope, j - i)
            })
            .collect()
    }
}

fn lower_hull(pts: &[(usize, Rat)]) -> Vec<(usize, Rat)> {
    let mut hull: Vec<(usize, Rat)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (x1, y1) = &hull[hull.len() - 2];
            let (x2, y2) = &hull[hull.len() - 1];
            // drop the middle point unless it lies strictly below the chord
            let lhs = (y2 - y1) * int((p.0 - x2) as i64);
            let rhs = (&p.1 - y2) * int((x2 - x1) as i64);
            if lhs >= rhs {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p.clone());
    }
    hull
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiscMode {
    Closed,
    Open,
}

/// Zeros of g in C_p (with multiplicity) with ord(z - center) >= t (closed)
/// or > t (open).
pub fn count_zeros(g: &Poly, center: &Rat, t: &ValExp, mode: DiscMode, cfg: &PrimeConfig) -> usize {
    assert!(!g.is_zero(), "count_zeros of the zero polynomial");
    let shifted = g.taylor_shift(center);
    // roots exactly at the center
    let at_center = shifted.coeffs().iter().take_while(|c| c.is_zero()).count();
    let np = NewtonPolygon::of(&shifted, cfg);
    let mut n = at_center;
    for (v, k) in np.root_valuations() {
        let v = ValExp::from_rat(v);
        let hit = match mode {
            DiscMode::Closed => v >= *t,
            DiscMode::Open => v > *t,
        };
        if hit {
            n += k;
        }
    }
    n
}

/// Bring a nonzero rational to the unit group, i.e. strip its p-power.
pub fn unit_part(x: &Rat, cfg: &PrimeConfig) -> Rat {
    cfg.split(x).1
}

pub fn is_p_integral(x: &Rat, cfg: &PrimeConfig) -> bool {
    x.is_zero() || cfg.ord(x).unwrap() >= 0
}

pub fn abs_rat(x: &Rat) -> Rat {
    x.abs()
}
