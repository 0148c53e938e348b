//! Path distance, potential kernel j_z, spherical and Hsia kernels.
//!
//! All values are in -log_p form. The tree is handled through joins with
//! respect to infinity: type I points are treated as leaves of infinite depth,
//! infinity as the root.

use crate::berk_points::{ord_diff_ge, BerkPoint};
use crate::exact_numbers::{KernelValue, PrimeConfig, ValExp};

/// Depth below infinity: the exponent of a disc, +inf for finite type I
/// points, -inf for infinity.
pub fn depth(x: &BerkPoint) -> KernelValue {
    match x {
        BerkPoint::Disc { rexp, .. } => KernelValue::Finite(rexp.clone()),
        BerkPoint::TypeI(_) => KernelValue::PlusInf,
        BerkPoint::Infinity => KernelValue::MinusInf,
    }
}

/// The smallest disc (or point) containing both, i.e. the meet toward infinity.
pub fn join(x: &BerkPoint, y: &BerkPoint, cfg: &PrimeConfig) -> BerkPoint {
    use BerkPoint::*;
    match (x, y) {
        (Infinity, _) | (_, Infinity) => Infinity,
        (TypeI(a), TypeI(b)) => match cfg.ord(&(a - b)) {
            None => TypeI(a.clone()),
            Some(o) => BerkPoint::disc_i(a.clone(), o),
        },
        (TypeI(a), Disc { center: b, rexp: t }) | (Disc { center: b, rexp: t }, TypeI(a)) => {
            match cfg.ord(&(a - b)) {
                Some(o) if ValExp::int(o) < *t => BerkPoint::disc_i(b.clone(), o),
                _ => BerkPoint::disc(b.clone(), t.clone()),
            }
        }
        (Disc { center: a, rexp: s }, Disc { center: b, rexp: t }) => {
            let mut m = s.clone().min(t.clone());
            if let Some(o) = cfg.ord(&(a - b)) {
                m = m.min(ValExp::int(o));
            }
            BerkPoint::disc(a.clone(), m)
        }
    }
}

/// The unique point lying on all three paths between x, y, z.
pub fn median(x: &BerkPoint, y: &BerkPoint, z: &BerkPoint, cfg: &PrimeConfig) -> BerkPoint {
    let cands = [join(x, y, cfg), join(x, z, cfg), join(y, z, cfg)];
    cands
        .into_iter()
        .max_by(|a, b| depth(a).cmp(&depth(b)))
        .unwrap()
}

/// First common point of the paths [x, zeta] and [y, zeta].
pub fn meet_wrt(x: &BerkPoint, y: &BerkPoint, zeta: &BerkPoint, cfg: &PrimeConfig) -> BerkPoint {
    median(x, y, zeta, cfg)
}

/// Whether `x` lies in the closed disc of `d` (x below or equal to d).
pub fn below(x: &BerkPoint, d: &BerkPoint, cfg: &PrimeConfig) -> bool {
    match d {
        BerkPoint::Infinity => true,
        BerkPoint::TypeI(_) => x.same(d, cfg),
        BerkPoint::Disc { center, rexp } => match x {
            BerkPoint::Infinity => false,
            BerkPoint::TypeI(v) => ord_diff_ge(v, center, rexp, cfg),
            BerkPoint::Disc { center: c, rexp: s } => {
                s >= rexp && ord_diff_ge(c, center, rexp, cfg)
            }
        },
    }
}

/// Big-model path distance; +inf when a type I point is involved (unless the
/// points coincide).
pub fn path_distance(x: &BerkPoint, y: &BerkPoint, cfg: &PrimeConfig) -> KernelValue {
    if x.same(y, cfg) {
        return KernelValue::Finite(ValExp::zero());
    }
    match (x, y) {
        (BerkPoint::Disc { rexp: s, .. }, BerkPoint::Disc { rexp: t, .. }) => {
            let m = depth(&join(x, y, cfg)).expect_finite("join of discs");
            KernelValue::Finite(s + t - m.scale(&crate::exact_numbers::int(2)))
        }
        _ => KernelValue::PlusInf,
    }
}

/// j_z(x, y) = rho(z, meet of x and y toward z).
pub fn j_kernel(x: &BerkPoint, y: &BerkPoint, z: &BerkPoint, cfg: &PrimeConfig) -> KernelValue {
    let w = median(x, y, z, cfg);
    path_distance(z, &w, cfg)
}

/// -log_p ||x, y||, the spherical kernel; equals j at the Gauss point.
pub fn spherical_log(x: &BerkPoint, y: &BerkPoint, cfg: &PrimeConfig) -> KernelValue {
    j_kernel(x, y, &BerkPoint::gauss(), cfg)
}

/// -log_p delta(x, y)_zeta.
pub fn hsia_log(x: &BerkPoint, y: &BerkPoint, zeta: &BerkPoint, cfg: &PrimeConfig) -> KernelValue {
    if zeta.is_infinity() {
        return hsia_log_inf(x, y, cfg);
    }
    if zeta.is_type_i() && (x.same(zeta, cfg) || y.same(zeta, cfg)) {
        return KernelValue::MinusInf;
    }
    let jxy = spherical_log(x, y, cfg);
    let jxz = spherical_log(x, zeta, cfg);
    let jyz = spherical_log(y, zeta, cfg);
    jxy.sub(&jxz)
        .and_then(|v| v.sub(&jyz))
        .expect("finite cross terms off the pole")
}

/// The pole-at-infinity fast path: min(s, t, ord(a - b)) for discs.
pub fn hsia_log_inf(x: &BerkPoint, y: &BerkPoint, cfg: &PrimeConfig) -> KernelValue {
    depth(&join(x, y, cfg))
}

/// -log_p diam_zeta(x) = hsia_log(x, x; zeta).
pub fn diam_log(x: &BerkPoint, zeta: &BerkPoint, cfg: &PrimeConfig) -> KernelValue {
    hsia_log(x, x, zeta, cfg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numbers::{int, Rat};
    use num_traits::Zero;

    fn cfg(p: u64) -> PrimeConfig {
        PrimeConfig::new(p).unwrap()
    }

    fn fin(n: i64) -> KernelValue {
        KernelValue::Finite(ValExp::int(n))
    }

    #[test]
    fn meet_examples() {
        for p in [2u64, 3, 5] {
            let c = cfg(p);
            let inf = BerkPoint::Infinity;
            let m = meet_wrt(
                &BerkPoint::disc_i(int(0), 1),
                &BerkPoint::disc_i(int(1), 1),
                &inf,
                &c,
            );
            assert!(m.same(&BerkPoint::gauss(), &c));
            let x = BerkPoint::disc_i(int(3), 4);
            assert!(meet_wrt(&x, &x, &BerkPoint::gauss(), &c).same(&x, &c));
            let m = meet_wrt(
                &BerkPoint::TypeI(int(0)),
                &BerkPoint::TypeI(int(p as i64)),
                &inf,
                &c,
            );
            assert!(m.same(&BerkPoint::disc_i(int(0), 1), &c));
        }
    }

    #[test]
    fn hsia_examples() {
        let c = cfg(3);
        let inf = BerkPoint::Infinity;
        assert_eq!(
            hsia_log(
                &BerkPoint::disc_i(int(0), 1),
                &BerkPoint::disc_i(int(0), 2),
                &inf,
                &c
            ),
            fin(1)
        );
        assert_eq!(
            hsia_log(
                &BerkPoint::TypeI(int(2)),
                &BerkPoint::TypeI(int(20)),
                &inf,
                &c
            ),
            fin(2)
        );
        let x = BerkPoint::disc_i(int(7), 5);
        assert_eq!(hsia_log(&x, &x, &inf, &c), fin(5));
    }

    #[test]
    fn spherical_examples() {
        for p in [3u64, 5, 7] {
            let c = cfg(p);
            let z = BerkPoint::TypeI(Rat::zero());
            assert_eq!(spherical_log(&z, &BerkPoint::Infinity, &c), fin(0));
            assert_eq!(
                spherical_log(&BerkPoint::gauss(), &BerkPoint::disc_i(int(1), 4), &c),
                fin(0)
            );
            let pp = p as i64;
            assert_eq!(
                spherical_log(
                    &BerkPoint::TypeI(int(pp)),
                    &BerkPoint::TypeI(int(2 * pp)),
                    &c
                ),
                fin(1)
            );
        }
    }

    #[test]
    fn rho_examples() {
        let c = cfg(5);
        assert_eq!(
            path_distance(&BerkPoint::gauss(), &BerkPoint::disc_i(int(0), 2), &c),
            fin(2)
        );
        let x = BerkPoint::disc_i(int(5), 3);
        assert_eq!(path_distance(&x, &x, &c), fin(0));
        assert_eq!(path_distance(&x, &BerkPoint::gauss(), &c), fin(3));
        let y = BerkPoint::disc_i(crate::exact_numbers::rat(1, 5), 1);
        assert_eq!(path_distance(&y, &BerkPoint::gauss(), &c), fin(3));
        assert_eq!(
            path_distance(&BerkPoint::TypeI(int(1)), &x, &c),
            KernelValue::PlusInf
        );
    }

    #[test]
    fn j_examples() {
        let c = cfg(3);
        let g = BerkPoint::gauss();
        let x = BerkPoint::disc_i(int(4), 2);
        assert_eq!(j_kernel(&x, &g, &g, &c), fin(0));
        assert_eq!(
            j_kernel(&BerkPoint::TypeI(int(0)), &BerkPoint::TypeI(int(9)), &g, &c),
            fin(2)
        );
    }

    #[test]
    fn pole_at_type_i() {
        let c = cfg(3);
        let z = BerkPoint::TypeI(int(1));
        assert_eq!(
            hsia_log(&z, &BerkPoint::gauss(), &z, &c),
            KernelValue::MinusInf
        );
        let a = BerkPoint::TypeI(int(0));
        assert_eq!(hsia_log(&a, &a, &z, &c), KernelValue::PlusInf);
    }
}
