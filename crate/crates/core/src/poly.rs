//! Dense univariate polynomials over Q, constant term first.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::exact_numbers::{int, rat_vec, Rat};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    c: Vec<Rat>,
}

impl Poly {
    pub fn new(mut c: Vec<Rat>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Poly { c }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    pub fn zero() -> Self {
        Poly { c: Vec::new() }
    }

    pub fn constant(a: Rat) -> Self {
        Poly::new(vec![a])
    }

    pub fn one() -> Self {
        Poly::constant(Rat::one())
    }

    /// The monomial a*T^k.
    pub fn monomial(a: Rat, k: usize) -> Self {
        let mut c = vec![Rat::zero(); k + 1];
        c[k] = a;
        Poly::new(c)
    }

    /// T - a.
    pub fn linear_root(a: &Rat) -> Self {
        Poly::new(vec![-a.clone(), Rat::one()])
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.c
    }

    pub fn coeff(&self, k: usize) -> Rat {
        self.c.get(k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn lead(&self) -> Rat {
        self.c.last().cloned().unwrap_or_else(Rat::zero)
    }

    pub fn eval(&self, x: &Rat) -> Rat {
        let mut acc = Rat::zero();
        for a in self.c.iter().rev() {
            acc = acc * x + a;
        }
        acc
    }

    pub fn scale(&self, a: &Rat) -> Poly {
        Poly::new(self.c.iter().map(|x| x * a).collect())
    }

    /// g(T + a), by repeated synthetic division.
    pub fn taylor_shift(&self, a: &Rat) -> Poly {
        let mut c = self.c.clone();
        if a.is_zero() {
            return Poly { c };
        }
        let n = c.len();
        for i in 0..n {
            for j in (i..n.saturating_sub(1)).rev() {
                let t = &c[j + 1] * a;
                c[j] += t;
            }
        }
        Poly::new(c)
    }

    /// g(a*T).
    pub fn dilate(&self, a: &Rat) -> Poly {
        let mut pw = Rat::one();
        let mut out = Vec::with_capacity(self.c.len());
        for x in &self.c {
            out.push(x * &pw);
            pw *= a;
        }
        Poly::new(out)
    }

    /// T^n g(1/T) for n >= deg g.
    pub fn reversed(&self, n: usize) -> Poly {
        let mut c = vec![Rat::zero(); n + 1];
        for (k, a) in self.c.iter().enumerate() {
            c[n - k] = a.clone();
        }
        Poly::new(c)
    }

    pub fn pow(&self, e: usize) -> Poly {
        let mut r = Poly::one();
        for _ in 0..e {
            r = &r * self;
        }
        r
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * int(k as i64))
                .collect(),
        )
    }

    /// Euclidean division; panics if `d` is zero.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by zero polynomial");
        let mut r = self.c.clone();
        let lead = d.lead();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Rat::zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let f = &r[k + dd] / &lead;
            if !f.is_zero() {
                for (j, dj) in d.c.iter().enumerate() {
                    let t = &f * dj;
                    r[k + j] -= t;
                }
            }
            q[k] = f;
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            return a;
        }
        let l = a.lead();
        a.scale(&(Rat::one() / l))
    }
}

fn add_vec(a: &[Rat], b: &[Rat], sign: i64) -> Vec<Rat> {
    let n = a.len().max(b.len());
    (0..n)
        .map(|k| {
            let x = a.get(k).cloned().unwrap_or_else(Rat::zero);
            match b.get(k) {
                Some(y) if sign > 0 => x + y,
                Some(y) => x - y,
                None => x,
            }
        })
        .collect()
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, o: &Poly) -> Poly {
        Poly::new(add_vec(&self.c, &o.c, 1))
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, o: &Poly) -> Poly {
        Poly::new(add_vec(&self.c, &o.c, -1))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.c.iter().map(|x| -x).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero();
        }
        let mut c = vec![Rat::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.c.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        Poly::new(c)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.c.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .c
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(k, a)| match k {
                0 => format!("{a}"),
                1 => format!("({a})*T"),
                _ => format!("({a})*T^{k}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        rat_vec::serialize(&self.c, s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        rat_vec::deserialize(d).map(Poly::new)
    }
}

/// Determinant of a square matrix over Q by Gaussian elimination.
#[allow(clippy::needless_range_loop)]
pub fn det_rat(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !m[r][col].is_zero()) else {
            return Rat::zero();
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let pv = m[col][col].clone();
        det *= &pv;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pv;
            for k in col..n {
                let t = &f * &m[col][k];
                m[r][k] -= t;
            }
        }
    }
    det
}

/// Sylvester matrix of f, g taken with formal degrees m, n (rows: n shifts
/// of f, then m shifts of g; columns indexed by descending powers).
pub fn sylvester(f: &Poly, m: usize, g: &Poly, n: usize) -> Vec<Vec<Rat>> {
    let size = m + n;
    let mut rows = Vec::with_capacity(size);
    for i in 0..n {
        let mut row = vec![Rat::zero(); size];
        for k in 0..=m {
            row[i + (m - k)] = f.coeff(k);
        }
        rows.push(row);
    }
    for i in 0..m {
        let mut row = vec![Rat::zero(); size];
        for k in 0..=n {
            row[i + (n - k)] = g.coeff(k);
        }
        rows.push(row);
    }
    rows
}

/// Resultant with respect to the formal degrees m >= deg f, n >= deg g.
pub fn resultant_formal(f: &Poly, m: usize, g: &Poly, n: usize) -> Rat {
    if m + n == 0 {
        return Rat::one();
    }
    det_rat(sylvester(f, m, g, n))
}

pub fn resultant(f: &Poly, g: &Poly) -> Rat {
    match (f.degree(), g.degree()) {
        (Some(m), Some(n)) => resultant_formal(f, m, g, n),
        _ => Rat::zero(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numbers::rat;

    #[test]
    fn shift_matches_evaluation() {
        let g = Poly::from_ints(&[3, -1, 4, 1, -5]);
        let a = rat(2, 3);
        let s = g.taylor_shift(&a);
        for x in [-2i64, 0, 1, 7] {
            let x = int(x);
            assert_eq!(s.eval(&x), g.eval(&(&x + &a)));
        }
    }

    #[test]
    fn div_rem_and_gcd() {
        let a = Poly::from_ints(&[-1, 0, 1]); // T^2 - 1
        let b = Poly::from_ints(&[1, 1]);
        let (q, r) = a.div_rem(&b);
        assert_eq!(q, Poly::from_ints(&[-1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&Poly::from_ints(&[-1, 1])), Poly::from_ints(&[-1, 1]));
    }

    #[test]
    fn resultant_of_linear_factors() {
        // Res(T - 2, T^2 - 1) = (2^2 - 1) = 3
        let f = Poly::from_ints(&[-2, 1]);
        let g = Poly::from_ints(&[-1, 0, 1]);
        assert_eq!(resultant(&f, &g), int(3));
        assert_eq!(
            resultant(&Poly::from_ints(&[0, 1]), &Poly::from_ints(&[0, 0, 1])),
            int(0)
        );
    }

    #[test]
    fn reversed_and_dilate() {
        let g = Poly::from_ints(&[1, 2, 3]);
        assert_eq!(g.reversed(3), Poly::from_ints(&[0, 3, 2, 1]));
        assert_eq!(g.dilate(&int(2)), Poly::from_ints(&[1, 4, 12]));
    }
}
