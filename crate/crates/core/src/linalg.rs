//! Fraction-free (Bareiss) elimination over Q(sqrt 2).

use crate::error::{Error, Result};
use crate::exact_numbers::ValExp;

pub type Matrix = Vec<Vec<ValExp>>;

/// Bareiss elimination in place on an n x c matrix (c >= n), with row swaps.
/// Returns the sign of the row permutation, or None if the leading n x n
/// block is singular.
fn bareiss(m: &mut Matrix, n: usize) -> Option<i32> {
    let cols = m.first().map_or(0, |r| r.len());
    let mut sign = 1;
    let mut prev = ValExp::int(1);
    for k in 0..n {
        let piv = (k..n).find(|&r| !m[r][k].is_zero())?;
        if piv != k {
            m.swap(piv, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..cols {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / prev.clone();
                m[i][j] = v;
            }
            m[i][k] = ValExp::zero();
        }
        prev = m[k][k].clone();
    }
    Some(sign)
}

pub fn det(a: &Matrix) -> ValExp {
    let n = a.len();
    if n == 0 {
        return ValExp::int(1);
    }
    let mut m = a.clone();
    match bareiss(&mut m, n) {
        None => ValExp::zero(),
        Some(s) => {
            let d = m[n - 1][n - 1].clone();
            if s < 0 {
                -d
            } else {
                d
            }
        }
    }
}

/// Solves a x = b exactly.
pub fn solve(a: &Matrix, b: &[ValExp]) -> Result<Vec<ValExp>> {
    let n = a.len();
    let mut m: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    bareiss(&mut m, n).ok_or(Error::SingularSystem)?;
    let mut x = vec![ValExp::zero(); n];
    for i in (0..n).rev() {
        let mut s = m[i][n].clone();
        for j in i + 1..n {
            s -= &(&m[i][j] * &x[j]);
        }
        x[i] = s / m[i][i].clone();
    }
    Ok(x)
}

/// The matrix with column `col` replaced by `v` (Cramer's rule helper).
pub fn replace_column(a: &Matrix, col: usize, v: &[ValExp]) -> Matrix {
    a.iter()
        .zip(v)
        .map(|(row, x)| {
            let mut r = row.clone();
            r[col] = x.clone();
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numbers::{int, rat};

    fn v(a: i64) -> ValExp {
        ValExp::int(a)
    }

    #[test]
    fn det_and_solve_small() {
        let a = vec![
            vec![v(2), v(1), v(0)],
            vec![v(1), v(3), v(1)],
            vec![v(0), v(1), v(4)],
        ];
        assert_eq!(det(&a), v(18));
        let x = solve(&a, &[v(3), v(5), v(5)]).unwrap();
        assert_eq!(x, vec![v(1), v(1), v(1)]);
        let sing = vec![vec![v(1), v(2)], vec![v(2), v(4)]];
        assert_eq!(det(&sing), v(0));
        assert!(solve(&sing, &[v(1), v(1)]).is_err());
    }

    #[test]
    fn needs_pivoting_and_sqrt2() {
        let s = ValExp::new(int(0), int(1));
        let a = vec![
            vec![v(0), s.clone()],
            vec![v(1), ValExp::new(rat(1, 2), int(0))],
        ];
        assert_eq!(det(&a), -s.clone());
        let x = solve(&a, &[s.clone(), v(1)]).unwrap();
        assert_eq!(x, vec![ValExp::new(rat(1, 2), int(0)), v(1)]);
    }
}
