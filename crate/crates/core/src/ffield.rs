//! Polynomials over F_p: reduction from Q, squarefree, distinct-degree and
//! equal-degree (Cantor-Zassenhaus) factorization.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact_numbers::PrimeConfig;
use crate::poly::Poly;

/// Coefficients in [0, p), constant term first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FpPoly {
    c: Vec<u64>,
}

fn mulmod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // p is prime, a != 0
    let mut r = 1u64;
    let mut b = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, b, p);
        }
        b = mulmod(b, b, p);
        e >>= 1;
    }
    r
}

impl FpPoly {
    pub fn new(mut c: Vec<u64>, p: u64) -> Self {
        for x in c.iter_mut() {
            *x %= p;
        }
        while c.last() == Some(&0) {
            c.pop();
        }
        FpPoly { c }
    }

    pub fn zero() -> Self {
        FpPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        FpPoly { c: vec![1] }
    }

    pub fn x() -> Self {
        FpPoly { c: vec![0, 1] }
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().expect("zero polynomial")
    }

    /// Reduction mod p of a polynomial with p-integral coefficients.
    pub fn reduce(f: &Poly, cfg: &PrimeConfig) -> Option<FpPoly> {
        let p = cfg.p();
        let pb = cfg.p_big();
        let mut out = Vec::with_capacity(f.coeffs().len());
        for a in f.coeffs() {
            let den = a.denom().mod_floor(pb);
            if den.is_zero() {
                return None;
            }
            let n = u64::try_from(a.numer().mod_floor(pb)).unwrap();
            let d = u64::try_from(den).unwrap();
            out.push(mulmod(n, inv_mod(d, p), p));
        }
        Some(FpPoly::new(out, p))
    }

    pub fn add(&self, o: &FpPoly, p: u64) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| (self.c.get(i).copied().unwrap_or(0) + o.c.get(i).copied().unwrap_or(0)) % p)
            .collect();
        FpPoly::new(c, p)
    }

    pub fn sub(&self, o: &FpPoly, p: u64) -> FpPoly {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| {
                (self.c.get(i).copied().unwrap_or(0) + p - o.c.get(i).copied().unwrap_or(0)) % p
            })
            .collect();
        FpPoly::new(c, p)
    }

    pub fn mul(&self, o: &FpPoly, p: u64) -> FpPoly {
        if self.is_zero() || o.is_zero() {
            return FpPoly::zero();
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + mulmod(*a, *b, p)) % p;
            }
        }
        FpPoly::new(c, p)
    }

    pub fn monic(&self, p: u64) -> FpPoly {
        match self.c.last() {
            None => FpPoly::zero(),
            Some(&l) => {
                let inv = inv_mod(l, p);
                FpPoly::new(self.c.iter().map(|&a| mulmod(a, inv, p)).collect(), p)
            }
        }
    }

    pub fn div_rem(&self, d: &FpPoly, p: u64) -> (FpPoly, FpPoly) {
        let dd = d.deg();
        let inv = inv_mod(*d.c.last().unwrap(), p);
        let mut r = self.c.clone();
        if r.len() <= dd {
            return (FpPoly::zero(), self.clone());
        }
        let mut q = vec![0u64; r.len() - dd];
        for k in (0..q.len()).rev() {
            let coef = mulmod(r[k + dd], inv, p);
            q[k] = coef;
            if coef != 0 {
                for (j, b) in d.c.iter().enumerate() {
                    r[k + j] = (r[k + j] + p - mulmod(coef, *b, p)) % p;
                }
            }
        }
        (FpPoly::new(q, p), FpPoly::new(r, p))
    }

    pub fn rem(&self, d: &FpPoly, p: u64) -> FpPoly {
        self.div_rem(d, p).1
    }

    /// Monic gcd.
    pub fn gcd(&self, o: &FpPoly, p: u64) -> FpPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b, p);
            a = b;
            b = r;
        }
        a.monic(p)
    }

    pub fn derivative(&self, p: u64) -> FpPoly {
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, a)| mulmod(*a, k as u64 % p, p))
            .collect();
        FpPoly::new(c, p)
    }

    /// self^e mod m.
    pub fn pow_mod(&self, e: &BigUint, m: &FpPoly, p: u64) -> FpPoly {
        let mut result = FpPoly::one().rem(m, p);
        let base = self.rem(m, p);
        for i in (0..e.bits()).rev() {
            result = result.mul(&result, p).rem(m, p);
            if e.bit(i) {
                result = result.mul(&base, p).rem(m, p);
            }
        }
        result
    }

    /// g with g(x)^p = self, for self with only p-th power exponents.
    fn pth_root(&self, p: u64) -> FpPoly {
        let c = self.c.iter().step_by(p as usize).copied().collect();
        FpPoly::new(c, p)
    }

    pub fn eval(&self, x: u64, p: u64) -> u64 {
        self.c
            .iter()
            .rev()
            .fold(0, |acc, a| (mulmod(acc, x, p) + a) % p)
    }
}

/// Squarefree decomposition of a monic polynomial: pairs (g, e) with g
/// squarefree, pairwise coprime and f = prod g^e.
pub fn squarefree(f: &FpPoly, p: u64) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    if f.deg() == 0 {
        return out;
    }
    let mut c = f.gcd(&f.derivative(p), p);
    let mut w = f.div_rem(&c, p).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c, p);
        let fac = w.div_rem(&y, p).0;
        if fac.deg() > 0 {
            out.push((fac.monic(p), i));
        }
        w = y;
        c = c.div_rem(&w, p).0;
        i += 1;
    }
    if !c.is_one() {
        for (g, e) in squarefree(&c.pth_root(p), p) {
            out.push((g, e * p as usize));
        }
    }
    out
}

/// Distinct-degree split of a squarefree monic polynomial: (product of all
/// irreducible factors of degree k, k).
pub fn distinct_degree(f: &FpPoly, p: u64) -> Vec<(FpPoly, usize)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let pe = BigUint::from(p);
    let mut h = FpPoly::x().rem(&f, p);
    let mut k = 1;
    while f.deg() >= 2 * k {
        h = h.pow_mod(&pe, &f, p);
        let g = h.sub(&FpPoly::x(), p).gcd(&f, p);
        if !g.is_one() {
            f = f.div_rem(&g, p).0;
            h = h.rem(&f, p);
            out.push((g, k));
        }
        k += 1;
    }
    if f.deg() > 0 {
        let d = f.deg();
        out.push((f, d));
    }
    out
}

/// Splits a product of distinct monic irreducibles of degree k.
pub fn equal_degree(f: &FpPoly, k: usize, p: u64, rng: &mut ChaCha8Rng) -> Vec<FpPoly> {
    let n = f.deg();
    if n == k {
        return vec![f.clone()];
    }
    loop {
        let a = FpPoly::new((0..n).map(|_| rng.gen_range(0..p)).collect(), p);
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if p == 2 {
            // trace of a over F_{2^k}
            let mut t = a.clone();
            let mut s = a.clone();
            for _ in 1..k {
                t = t.mul(&t, p).rem(f, p);
                s = s.add(&t, p);
            }
            s
        } else {
            let e = (BigUint::from(p).pow(k as u32) - BigUint::one()) / BigUint::from(2u32);
            a.pow_mod(&e, f, p).sub(&FpPoly::one(), p)
        };
        let g = b.gcd(f, p);
        let dg = g.deg();
        if dg > 0 && dg < n {
            let h = f.div_rem(&g, p).0.monic(p);
            let mut out = equal_degree(&g, k, p, rng);
            out.extend(equal_degree(&h, k, p, rng));
            return out;
        }
    }
}

/// Factorization of a nonzero polynomial into monic irreducibles with
/// multiplicities, sorted. The leading coefficient is dropped.
pub fn factor(f: &FpPoly, p: u64) -> Vec<(FpPoly, usize)> {
    let mut rng = ChaCha8Rng::seed_from_u64(p);
    let mut out = Vec::new();
    for (g, e) in squarefree(&f.monic(p), p) {
        for (h, k) in distinct_degree(&g, p) {
            for irr in equal_degree(&h, k, p, &mut rng) {
                out.push((irr, e));
            }
        }
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fp(c: &[u64], p: u64) -> FpPoly {
        FpPoly::new(c.to_vec(), p)
    }

    fn expand(fs: &[(FpPoly, usize)], p: u64) -> FpPoly {
        let mut acc = FpPoly::one();
        for (g, e) in fs {
            for _ in 0..*e {
                acc = acc.mul(g, p);
            }
        }
        acc
    }

    fn is_irreducible(g: &FpPoly, p: u64) -> bool {
        // brute force over monic divisors of degree <= deg/2
        let n = g.deg();
        for d in 1..=n / 2 {
            let count = p.pow(d as u32);
            for code in 0..count {
                let mut c = Vec::with_capacity(d + 1);
                let mut x = code;
                for _ in 0..d {
                    c.push(x % p);
                    x /= p;
                }
                c.push(1);
                if g.rem(&FpPoly::new(c, p), p).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    #[test]
    fn factors_multiply_back_and_are_irreducible() {
        for p in [2u64, 3, 5, 7] {
            let mut rng = ChaCha8Rng::seed_from_u64(11);
            for _ in 0..60 {
                let deg = rng.gen_range(1..=8);
                let mut c: Vec<u64> = (0..deg).map(|_| rng.gen_range(0..p)).collect();
                c.push(1);
                let f = fp(&c, p);
                let fs = factor(&f, p);
                assert_eq!(expand(&fs, p), f, "p={p} f={f:?}");
                for (g, _) in &fs {
                    assert!(is_irreducible(g, p));
                }
            }
        }
    }

    #[test]
    fn known_factorizations() {
        // x^2 + 1 over F_3 is irreducible, over F_5 it splits
        assert_eq!(factor(&fp(&[1, 0, 1], 3), 3).len(), 1);
        assert_eq!(factor(&fp(&[1, 0, 1], 5), 5).len(), 2);
        // (x + 1)^2 over F_2
        assert_eq!(factor(&fp(&[1, 0, 1], 2), 2), vec![(fp(&[1, 1], 2), 2)]);
        // x^4 + x = x (x + 1)(x^2 + x + 1) over F_2
        let fs = factor(&fp(&[0, 1, 0, 0, 1], 2), 2);
        assert_eq!(fs.len(), 3);
        // p-th powers: x^3 + 1 = (x + 1)^3 over F_3
        assert_eq!(factor(&fp(&[1, 0, 0, 1], 3), 3), vec![(fp(&[1, 1], 3), 3)]);
    }

    #[test]
    fn reduction_needs_integral_coefficients() {
        let c = PrimeConfig::new(3).unwrap();
        let f = Poly::new(vec![
            crate::exact_numbers::rat(1, 2),
            crate::exact_numbers::int(4),
        ]);
        assert_eq!(FpPoly::reduce(&f, &c), Some(fp(&[2, 1], 3)));
        let g = Poly::new(vec![crate::exact_numbers::rat(1, 3)]);
        assert_eq!(FpPoly::reduce(&g, &c), None);
    }
}
