//! Seeded random instances: points, Mobius maps, trees, boundaries, disc
//! unions, rational maps and measures.

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::berk_points::{BerkPoint, Mobius};
use crate::capacity::DiscUnion;
use crate::dynamics::RationalMap;
use crate::exact_numbers::{int, rat, PrimeConfig, Rat, ValExp};
use crate::metrized_graph::{on_segment, span, DiscreteMeasure, MetrizedGraph};
use crate::poly::Poly;

pub struct Sampler {
    pub rng: ChaCha8Rng,
    pub cfg: PrimeConfig,
}

impl Sampler {
    pub fn new(seed: u64, cfg: &PrimeConfig) -> Self {
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            cfg: cfg.clone(),
        }
    }

    pub fn int(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    /// Small rational with denominator 1, p, p^2 or a small unit.
    pub fn rat(&mut self) -> Rat {
        let p = self.cfg.p() as i64;
        let dens = [1, 1, 1, p, p * p, 2, 3, 7];
        let den = *dens.choose(&mut self.rng).unwrap();
        let num = self.int(-40, 40);
        rat(num, den)
    }

    pub fn nonzero_rat(&mut self) -> Rat {
        loop {
            let r = self.rat();
            if !r.is_zero() {
                return r;
            }
        }
    }

    /// Rational exponent in [-3, 4] with denominator up to 4.
    pub fn rational_rexp(&mut self) -> ValExp {
        let den = self.int(1, 4);
        let num = self.int(-3 * den, 4 * den);
        ValExp::ratio(num, den)
    }

    /// Exponent a + b sqrt 2 with b != 0.
    pub fn irrational_rexp(&mut self) -> ValExp {
        let a = self.rational_rexp();
        let b = loop {
            let b = self.int(-2, 2);
            if b != 0 {
                break b;
            }
        };
        let den = self.int(1, 3);
        ValExp::new(a.rat, rat(b, den))
    }

    /// Type II point, or type III with probability 1/4 when allowed.
    pub fn disc(&mut self, type_iii: bool) -> BerkPoint {
        let center = self.rat();
        let rexp = if type_iii && self.rng.gen_bool(0.25) {
            self.irrational_rexp()
        } else {
            self.rational_rexp()
        };
        BerkPoint::disc(center, rexp)
    }

    /// Type II point with integral exponent.
    pub fn integral_disc(&mut self) -> BerkPoint {
        let center = self.rat();
        BerkPoint::disc_i(center, self.int(-2, 3))
    }

    pub fn type_i(&mut self) -> BerkPoint {
        if self.rng.gen_bool(0.1) {
            BerkPoint::Infinity
        } else {
            BerkPoint::TypeI(self.rat())
        }
    }

    pub fn point(&mut self) -> BerkPoint {
        if self.rng.gen_bool(0.2) {
            self.type_i()
        } else {
            self.disc(true)
        }
    }

    pub fn mobius(&mut self) -> Mobius {
        loop {
            let (a, b, c, d) = (self.rat(), self.rat(), self.rat(), self.rat());
            if let Ok(h) = Mobius::new(a, b, c, d) {
                return h;
            }
        }
    }

    /// The span of a few random discs; at most `max_vertices` vertices.
    pub fn tree(&mut self, max_vertices: usize, type_iii: bool) -> MetrizedGraph {
        let cfg = self.cfg.clone();
        loop {
            let k = self.int(1, (max_vertices as i64 / 2).max(1)) as usize;
            let pts: Vec<BerkPoint> = (0..k).map(|_| self.disc(type_iii)).collect();
            let anchor = pts[0].clone();
            if let Ok(g) = span(&pts, &anchor, &cfg) {
                if g.len() <= max_vertices {
                    return g;
                }
            }
        }
    }

    /// m distinct disc points, none lying on the segment between two others.
    pub fn leaf_boundary(&mut self, m: usize) -> Vec<BerkPoint> {
        let cfg = self.cfg.clone();
        'outer: loop {
            let pts: Vec<BerkPoint> = (0..m).map(|_| self.disc(false)).collect();
            for (i, x) in pts.iter().enumerate() {
                for (j, y) in pts.iter().enumerate() {
                    if i != j && x.same(y, &cfg) {
                        continue 'outer;
                    }
                    for (k, z) in pts.iter().enumerate() {
                        if k != i && k != j && i != j && on_segment(z, x, y, &cfg) {
                            continue 'outer;
                        }
                    }
                }
            }
            return pts;
        }
    }

    /// Union of up to k discs with integral centers and exponents in [0, 3].
    pub fn disc_union(&mut self, k: usize) -> DiscUnion {
        let n = self.int(1, k as i64) as usize;
        let discs = (0..n)
            .map(|_| (int(self.int(-20, 20)), ValExp::int(self.int(0, 3))))
            .collect();
        DiscUnion::new(discs, &self.cfg).expect("nonempty")
    }

    fn poly(&mut self, deg: usize) -> Poly {
        let mut c: Vec<Rat> = (0..deg).map(|_| int(self.int(-6, 6))).collect();
        c.push(int(self.int(1, 6)));
        Poly::new(c)
    }

    /// Random coprime P/Q of degree d with small integer coefficients.
    pub fn rational_map(&mut self, d: usize) -> RationalMap {
        loop {
            let dp = self.int(0, d as i64) as usize;
            let dq = if dp == d {
                self.int(0, d as i64) as usize
            } else {
                d
            };
            if let Ok(phi) = RationalMap::new(self.poly(dp), self.poly(dq)) {
                return phi;
            }
        }
    }

    /// A map of good reduction: integer coefficients whose reductions are
    /// coprime of full degree.
    pub fn good_map(&mut self, d: usize) -> RationalMap {
        loop {
            let phi = self.rational_map(d);
            if crate::dynamics::good_reduction(&phi, &self.cfg) {
                return phi;
            }
        }
    }

    /// Probability measure on k random disc points with rational masses.
    pub fn probability(&mut self, k: usize, type_iii: bool) -> DiscreteMeasure {
        let pts: Vec<BerkPoint> = (0..k).map(|_| self.disc(type_iii)).collect();
        let w: Vec<i64> = (0..k).map(|_| self.int(1, 9)).collect();
        let total: i64 = w.iter().sum();
        DiscreteMeasure::from_atoms(
            pts.into_iter()
                .zip(w)
                .map(|(x, m)| (x, ValExp::ratio(m, total))),
            &self.cfg,
        )
    }
}
