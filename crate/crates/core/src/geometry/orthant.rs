//! Size fractions of general T_ρ domains as Gaussian orthant probabilities.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::special::{normal_cdf, normal_quantile};

const SHIFTS: usize = 10;
const POINTS_PER_SHIFT: usize = 100_000;
const SEED: u64 = 0x5_eed0_f0a7;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OrthantEstimate {
    pub value: f64,
    /// Zero for the closed-form cases.
    pub std_error: f64,
}

/// |T_ρ| / |S^{n−1}| for a correlation matrix ρ (unit diagonal, positive
/// definite): P(X_i > 0 for all i) with X ~ N(0, ρ).
///
/// Closed forms for n <= 3; randomized quasi-Monte Carlo over the Genz
/// separation of variables otherwise.
pub fn general_t_size_fraction(rho: &DMatrix<f64>) -> Result<OrthantEstimate> {
    let n = rho.nrows();
    if n == 0 || rho.ncols() != n {
        return Err(Error::InvalidParameter {
            name: "rho",
            value: n as f64,
            reason: "must be a non-empty square matrix",
        });
    }
    for i in 0..n {
        if (rho[(i, i)] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidParameter {
                name: "rho diagonal",
                value: rho[(i, i)],
                reason: "must be 1",
            });
        }
        for j in 0..i {
            if (rho[(i, j)] - rho[(j, i)]).abs() > 1e-12 {
                return Err(Error::InvalidParameter {
                    name: "rho",
                    value: rho[(i, j)],
                    reason: "must be symmetric",
                });
            }
        }
    }
    let chol = rho.clone().cholesky().ok_or(Error::NotPositiveDefinite)?;
    let exact = |value| Ok(OrthantEstimate { value, std_error: 0.0 });
    match n {
        1 => exact(0.5),
        2 => exact(0.25 + rho[(0, 1)].asin() / (2.0 * PI)),
        3 => exact(0.125 + (rho[(0, 1)].asin() + rho[(0, 2)].asin() + rho[(1, 2)].asin()) / (4.0 * PI)),
        _ => Ok(genz_qmc(&chol.l())),
    }
}

/// Additive-recurrence (R_d) lattice generator for dimension d.
fn kronecker_alphas(d: usize) -> Vec<f64> {
    // φ_d solves x^{d+1} = x + 1
    let mut phi = 2.0_f64;
    for _ in 0..64 {
        phi = (1.0 + phi).powf(1.0 / (d as f64 + 1.0));
    }
    (1..=d).map(|j| phi.powi(-(j as i32)).fract()).collect()
}

fn genz_qmc(l: &DMatrix<f64>) -> OrthantEstimate {
    let n = l.nrows();
    let d = n - 1;
    let alphas = kronecker_alphas(d);
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut y = vec![0.0; n];
    let means: Vec<f64> = (0..SHIFTS)
        .map(|_| {
            let shift: Vec<f64> = (0..d).map(|_| rng.random::<f64>()).collect();
            let mut sum = 0.0;
            for k in 1..=POINTS_PER_SHIFT {
                // P(L w <= 0) equals the positive orthant by symmetry
                let mut weight = 1.0;
                for i in 0..n {
                    let partial: f64 = (0..i).map(|j| l[(i, j)] * y[j]).sum();
                    let e = normal_cdf(-partial / l[(i, i)]);
                    weight *= e;
                    if i < d {
                        let u = (shift[i] + k as f64 * alphas[i]).fract();
                        // keep the quantile finite
                        let p = (u * e).clamp(1e-300, 1.0 - 1e-16);
                        y[i] = normal_quantile(p);
                    }
                }
                sum += weight;
            }
            sum / POINTS_PER_SHIFT as f64
        })
        .collect();
    let mean = means.iter().sum::<f64>() / SHIFTS as f64;
    let var = means.iter().map(|m| (m - mean).powi(2)).sum::<f64>() / (SHIFTS - 1) as f64;
    OrthantEstimate {
        value: mean,
        std_error: (var / SHIFTS as f64).sqrt(),
    }
}

/// Correlation matrix with constant off-diagonal ρ.
pub fn regular_correlation(n: usize, rho: f64) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { rho })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::regular::regular_t_fraction;

    #[test]
    fn identity_gives_orthant() {
        for n in 1..=5 {
            let est = general_t_size_fraction(&DMatrix::identity(n, n)).unwrap();
            let exact = 0.5f64.powi(n as i32);
            assert!((est.value - exact).abs() < 1e-3, "n = {n}");
            assert!((est.value - exact).abs() <= 5.0 * est.std_error + 1e-12);
        }
    }

    #[test]
    fn closed_forms() {
        let est = general_t_size_fraction(&regular_correlation(3, 0.5)).unwrap();
        assert!((est.value - 0.25).abs() < 1e-15);
        for rho in [-0.5, 0.0, 0.3, 0.9] {
            let est = general_t_size_fraction(&regular_correlation(2, rho)).unwrap();
            assert!((est.value - (-rho).acos() / (2.0 * PI)).abs() < 1e-15);
        }
    }

    #[test]
    fn qmc_matches_erfc_integral() {
        // regular 4 and 5 dimensional cases have the 1-D integral as oracle
        for (n, rho) in [(4usize, 0.5), (4, 0.2), (5, 0.5)] {
            let est = general_t_size_fraction(&regular_correlation(n, rho)).unwrap();
            let exact = regular_t_fraction(n as u32, rho).unwrap() * 0.5f64.powi(n as i32);
            assert!(est.std_error <= 1e-3);
            assert!((est.value - exact).abs() < 1e-3, "n = {n}, rho = {rho}: {} vs {exact}", est.value);
        }
    }

    #[test]
    fn rejects_indefinite() {
        let m = regular_correlation(3, -0.6);
        assert!(matches!(general_t_size_fraction(&m), Err(Error::NotPositiveDefinite)));
    }

    #[test]
    fn golden_ratio_for_one_dimension() {
        let a = kronecker_alphas(1);
        assert!((a[0] - (1.0 / 1.618_033_988_749_895)).abs() < 1e-12);
    }
}
