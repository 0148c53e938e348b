//! Dirichlet problems on simple domains through the Cantor matrix, harmonic
//! measures and Green's functions of disc unions.

use serde::{Deserialize, Serialize};

use crate::berk_points::BerkPoint;
use crate::capacity::{equilibrium, potential, DiscUnion};
use crate::error::{Error, Result};
use crate::exact_numbers::{KernelValue, PrimeConfig, ValExp};
use crate::kernels::hsia_log;
use crate::linalg::{det, replace_column, solve, Matrix};

/// Boundary points x_1..x_m of a simple domain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleDomainBoundary {
    pub boundary: Vec<BerkPoint>,
}

impl SimpleDomainBoundary {
    pub fn new(boundary: Vec<BerkPoint>, cfg: &PrimeConfig) -> Result<Self> {
        if boundary.is_empty() {
            return Err(Error::Invalid(
                "a simple domain needs at least one boundary point".into(),
            ));
        }
        if boundary.iter().any(|x| x.is_type_i()) {
            return Err(Error::Invalid(
                "boundary points must not be of type I".into(),
            ));
        }
        for (i, x) in boundary.iter().enumerate() {
            if boundary[..i].iter().any(|y| y.same(x, cfg)) {
                return Err(Error::Invalid("boundary points must be distinct".into()));
            }
        }
        Ok(SimpleDomainBoundary { boundary })
    }

    pub fn len(&self) -> usize {
        self.boundary.len()
    }

    pub fn is_empty(&self) -> bool {
        self.boundary.is_empty()
    }

    /// The Gauss point, or infinity when the Gauss point is on the boundary.
    pub fn default_aux(&self, cfg: &PrimeConfig) -> BerkPoint {
        let g = BerkPoint::gauss();
        if self.check_aux(&g, cfg).is_ok() {
            g
        } else {
            BerkPoint::Infinity
        }
    }

    fn check_aux(&self, z: &BerkPoint, cfg: &PrimeConfig) -> Result<()> {
        if self.boundary.iter().any(|x| x.same(z, cfg)) {
            return Err(Error::Invalid(
                "auxiliary point lies on the boundary".into(),
            ));
        }
        Ok(())
    }
}

/// The bordered matrix of pairwise -log delta(x_i, x_j)_z.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CantorMatrix {
    pub entries: Matrix,
    pub z: BerkPoint,
}

#[allow(clippy::needless_range_loop)]
pub fn cantor_matrix(b: &SimpleDomainBoundary, z: &BerkPoint, cfg: &PrimeConfig) -> CantorMatrix {
    let m = b.len();
    let mut e = vec![vec![ValExp::zero(); m + 1]; m + 1];
    for i in 1..=m {
        e[0][i] = ValExp::int(1);
        e[i][0] = ValExp::int(1);
        for j in i..=m {
            let v = hsia_log(&b.boundary[i - 1], &b.boundary[j - 1], z, cfg)
                .expect_finite("Cantor matrix entry");
            e[i][j] = v.clone();
            e[j][i] = v;
        }
    }
    CantorMatrix {
        entries: e,
        z: z.clone(),
    }
}

impl CantorMatrix {
    pub fn det(&self) -> ValExp {
        det(&self.entries)
    }
}

/// f(x) = c_0 + sum c_i (-log delta(x, x_i)_z).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HarmonicSolution {
    pub coefficients: Vec<ValExp>,
    pub z: BerkPoint,
    pub boundary: SimpleDomainBoundary,
}

pub fn solve_dirichlet(
    b: &SimpleDomainBoundary,
    values: &[ValExp],
    z: &BerkPoint,
    cfg: &PrimeConfig,
) -> Result<HarmonicSolution> {
    if values.len() != b.len() {
        return Err(Error::Invalid(
            "one boundary value per boundary point expected".into(),
        ));
    }
    b.check_aux(z, cfg)?;
    let m = b.len();
    let coefficients = if m == 1 {
        vec![values[0].clone(), ValExp::zero()]
    } else {
        let mat = cantor_matrix(b, z, cfg);
        let mut rhs = vec![ValExp::zero()];
        rhs.extend(values.iter().cloned());
        solve(&mat.entries, &rhs)?
    };
    let sol = HarmonicSolution {
        coefficients,
        z: z.clone(),
        boundary: b.clone(),
    };
    #[cfg(debug_assertions)]
    if m > 1 {
        check_aux_independence(&sol, values, cfg)?;
    }
    Ok(sol)
}

/// Re-solves with a second, pseudo-random auxiliary point and compares the two
/// solutions on the medians of boundary triples.
#[cfg(debug_assertions)]
fn check_aux_independence(
    sol: &HarmonicSolution,
    values: &[ValExp],
    cfg: &PrimeConfig,
) -> Result<()> {
    use rand::{Rng, SeedableRng};
    let b = &sol.boundary;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed ^ b.len() as u64);
    let z2 = loop {
        let c = crate::exact_numbers::int(rng.gen_range(-20..=20));
        let cand = BerkPoint::disc_i(c, rng.gen_range(-3..=4));
        if b.check_aux(&cand, cfg).is_ok() && !cand.same(&sol.z, cfg) {
            break cand;
        }
    };
    let mat = cantor_matrix(b, &z2, cfg);
    let mut rhs = vec![ValExp::zero()];
    rhs.extend(values.iter().cloned());
    let other = HarmonicSolution {
        coefficients: solve(&mat.entries, &rhs)?,
        z: z2,
        boundary: b.clone(),
    };
    let pts = &b.boundary;
    for i in 0..pts.len() {
        for j in i..pts.len() {
            for k in j..pts.len() {
                let w = crate::kernels::median(&pts[i], &pts[j], &pts[k], cfg);
                if w.same(&sol.z, cfg) || w.same(&other.z, cfg) {
                    continue;
                }
                if evaluate_harmonic(sol, &w, cfg)? != evaluate_harmonic(&other, &w, cfg)? {
                    return Err(Error::VerificationFailed(format!(
                        "harmonic solution depends on the auxiliary point at {w}"
                    )));
                }
            }
        }
    }
    Ok(())
}

pub fn evaluate_harmonic(
    sol: &HarmonicSolution,
    x: &BerkPoint,
    cfg: &PrimeConfig,
) -> Result<ValExp> {
    let c = &sol.coefficients;
    if x.same(&sol.z, cfg) {
        // f is constant (= c_0) on the branch containing z
        return Ok(c[0].clone());
    }
    let mut f = c[0].clone();
    for (i, xi) in sol.boundary.boundary.iter().enumerate() {
        if c[i + 1].is_zero() {
            continue;
        }
        match hsia_log(x, xi, &sol.z, cfg) {
            KernelValue::Finite(v) => f += &(&c[i + 1] * &v),
            _ => {
                return Err(Error::Invalid(format!(
                    "harmonic function undefined at {x}"
                )))
            }
        }
    }
    Ok(f)
}

/// h_i(z) = det M_0(z, e_i) / det M(z).
pub fn harmonic_measures(
    b: &SimpleDomainBoundary,
    z: &BerkPoint,
    cfg: &PrimeConfig,
) -> Result<Vec<ValExp>> {
    b.check_aux(z, cfg)?;
    let m = b.len();
    if m == 1 {
        return Ok(vec![ValExp::int(1)]);
    }
    let mat = cantor_matrix(b, z, cfg);
    let d = mat.det();
    if d.is_zero() {
        return Err(Error::SingularSystem);
    }
    Ok((1..=m)
        .map(|i| {
            let mut col = vec![ValExp::zero(); m + 1];
            col[i] = ValExp::int(1);
            det(&replace_column(&mat.entries, 0, &col)) / d.clone()
        })
        .collect())
}

/// G(z, zeta; E) = V_zeta(E) - u_E(z, zeta).
pub fn green_function(
    e: &DiscUnion,
    zeta: &BerkPoint,
    z: &BerkPoint,
    cfg: &PrimeConfig,
) -> Result<KernelValue> {
    let eq = equilibrium(e, zeta, cfg)?;
    let u = potential(&eq.measure, z, zeta, cfg);
    Ok(KernelValue::Finite(eq.robin.clone())
        .sub(&u)
        .expect("potential is never -inf off the pole"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_numbers::{int, rat};

    fn cfg(p: u64) -> PrimeConfig {
        PrimeConfig::new(p).unwrap()
    }

    fn annulus(c: &PrimeConfig) -> SimpleDomainBoundary {
        SimpleDomainBoundary::new(vec![BerkPoint::gauss(), BerkPoint::disc_i(int(0), 2)], c)
            .unwrap()
    }

    #[test]
    fn single_boundary_point_is_constant() {
        let c = cfg(3);
        let b = SimpleDomainBoundary::new(vec![BerkPoint::disc_i(int(1), 1)], &c).unwrap();
        let s = solve_dirichlet(&b, &[ValExp::int(5)], &BerkPoint::gauss(), &c).unwrap();
        assert_eq!(
            evaluate_harmonic(&s, &BerkPoint::disc_i(int(7), 3), &c).unwrap(),
            ValExp::int(5)
        );
        assert_eq!(
            harmonic_measures(&b, &BerkPoint::gauss(), &c).unwrap(),
            vec![ValExp::int(1)]
        );
    }

    #[test]
    fn annulus_is_affine_in_the_exponent() {
        let c = cfg(5);
        let b = annulus(&c);
        let s = solve_dirichlet(
            &b,
            &[ValExp::zero(), ValExp::int(1)],
            &BerkPoint::Infinity,
            &c,
        )
        .unwrap();
        let at = |t: ValExp| evaluate_harmonic(&s, &BerkPoint::disc(int(0), t), &c).unwrap();
        assert_eq!(at(ValExp::int(1)), ValExp::ratio(1, 2));
        assert_eq!(at(ValExp::ratio(3, 2)), ValExp::ratio(3, 4));
        assert_eq!(at(ValExp::zero()), ValExp::zero());
        assert_eq!(at(ValExp::int(2)), ValExp::int(1));
    }

    #[test]
    fn annulus_harmonic_measures() {
        let c = cfg(3);
        let b = annulus(&c);
        let mid = BerkPoint::disc_i(int(0), 1);
        let h = harmonic_measures(&b, &mid, &c).unwrap();
        assert_eq!(h, vec![ValExp::ratio(1, 2), ValExp::ratio(1, 2)]);
        // 1/4 and 1/8 of the edge length away from the inner boundary point
        let h = harmonic_measures(&b, &BerkPoint::disc(int(0), ValExp::ratio(3, 2)), &c).unwrap();
        assert_eq!(h[1], ValExp::ratio(3, 4));
        let h = harmonic_measures(
            &b,
            &BerkPoint::disc(int(0), ValExp::new(rat(7, 4), int(0))),
            &c,
        )
        .unwrap();
        assert_eq!(h[1], ValExp::ratio(7, 8));
        let h = harmonic_measures(&b, &BerkPoint::disc(int(0), ValExp::ratio(15, 8)), &c).unwrap();
        assert_eq!(h[1], ValExp::ratio(15, 16));
    }

    #[test]
    fn equal_values_give_constants() {
        let c = cfg(2);
        let b = SimpleDomainBoundary::new(
            vec![
                BerkPoint::disc_i(int(0), 1),
                BerkPoint::disc_i(int(1), 1),
                BerkPoint::disc_i(int(0), -1),
            ],
            &c,
        )
        .unwrap();
        let a = ValExp::new(rat(2, 3), rat(1, 2));
        let s = solve_dirichlet(
            &b,
            &[a.clone(), a.clone(), a.clone()],
            &BerkPoint::gauss(),
            &c,
        )
        .unwrap();
        assert_eq!(
            evaluate_harmonic(&s, &BerkPoint::disc_i(int(3), 2), &c).unwrap(),
            a
        );
    }

    #[test]
    fn green_of_the_unit_disc() {
        let c = cfg(3);
        let e = DiscUnion::new(vec![(int(0), ValExp::zero())], &c).unwrap();
        for t in 0..4 {
            let g = green_function(&e, &BerkPoint::Infinity, &BerkPoint::disc_i(int(0), -t), &c)
                .unwrap();
            assert_eq!(g, KernelValue::Finite(ValExp::int(t)));
        }
        let g =
            green_function(&e, &BerkPoint::Infinity, &BerkPoint::disc_i(int(1), 2), &c).unwrap();
        assert_eq!(g, KernelValue::Finite(ValExp::zero()));
    }

    #[test]
    fn rejects_empty_boundary() {
        assert!(SimpleDomainBoundary::new(vec![], &cfg(3)).is_err());
    }
}
