//! Sizes of the regular distortions T_ρ^{n−1} of T^{n−1} through the
//! one-dimensional erfc integral.

use std::f64::consts::PI;

use super::sphere_size;
use crate::error::{Error, Result};
use crate::special::quadrature::{integrate, Interval};
use crate::special::{erfc, gauss_hermite, Tolerance};

const START_NODES: usize = 64;
const MAX_NODES: usize = 1024;
const AGREEMENT: f64 = 1e-9;
const MAX_HERMITE_KAPPA: f64 = 3.0;
/// Central-difference step for the recursion check.
pub const FD_STEP: f64 = 1e-4;

fn check_rho(rho: f64) -> Result<()> {
    if rho.is_finite() && (0.0..1.0).contains(&rho) {
        Ok(())
    } else {
        Err(Error::InvalidParameter {
            name: "rho",
            value: rho,
            reason: "must lie in [0, 1)",
        })
    }
}

/// f_n(ρ) = |T_ρ^{n−1}| / |T^{n−1}| = π^{−1/2} ∫ e^{−u²} erfc(κu)^n du with
/// κ = √(ρ/(1−ρ)).
///
/// Gauss–Hermite with doubling node counts until two successive rules agree.
/// Past κ = 3 the erfc step is narrower than the central node spacing, where
/// successive rules can agree on a wrong value, so the folded half-line
/// integral is done adaptively instead.
pub fn regular_t_fraction(n: u32, rho: f64) -> Result<f64> {
    check_rho(rho)?;
    if n <= 1 || rho == 0.0 {
        return Ok(1.0);
    }
    let kappa = (rho / (1.0 - rho)).sqrt();
    if kappa > MAX_HERMITE_KAPPA {
        return adaptive_fraction(n, kappa, f64::NAN);
    }
    let integrand = |u: f64| erfc(kappa * u).powi(n as i32);
    let mut nodes = START_NODES;
    let mut prev = gauss_hermite(nodes)?.integrate(integrand) / PI.sqrt();
    while nodes < MAX_NODES {
        nodes *= 2;
        let next = gauss_hermite(nodes)?.integrate(integrand) / PI.sqrt();
        if (next - prev).abs() <= AGREEMENT * next.abs() {
            return Ok(next);
        }
        prev = next;
    }
    adaptive_fraction(n, kappa, prev)
}

fn adaptive_fraction(n: u32, kappa: f64, last_hermite: f64) -> Result<f64> {
    let folded = |u: f64| {
        let w = (-u * u).exp();
        if w == 0.0 {
            return 0.0;
        }
        w * (erfc(kappa * u).powi(n as i32) + erfc(-kappa * u).powi(n as i32))
    };
    let tol = Tolerance::new(1e-13, 1e-12);
    let split = 4.0 / kappa;
    let head = integrate(&folded, Interval::Finite(0.0, split), tol);
    let tail = integrate(&folded, Interval::Above(split), tol);
    match (head, tail) {
        (Ok(h), Ok(t)) => Ok((h + t) / PI.sqrt()),
        _ => Err(Error::QuadratureFailure {
            what: "regular T size",
            previous: last_hermite,
            estimate: f64::NAN,
        }),
    }
}

/// |T^{n−1}| = 2^{−n} |S^{n−1}|.
pub fn t_size(n: u32) -> f64 {
    sphere_size(n) * 0.5f64.powi(n as i32)
}

/// |T_ρ^{n−1}|.
pub fn regular_t_size(n: u32, rho: f64) -> Result<f64> {
    Ok(t_size(n) * regular_t_fraction(n, rho)?)
}

/// |∂T_ρ^{n−1}|: n facets, each a T_{ρ/(1+ρ)}^{n−2}.
pub fn regular_t_boundary_size(n: u32, rho: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Dimension {
            domain: "RegularT boundary",
            n: n as i64,
            min: 2,
        });
    }
    check_rho(rho)?;
    Ok(n as f64 * regular_t_size(n - 1, rho / (1.0 + rho))?)
}

/// (n−3)-measure of one of the C(n,2) corner loci of T_ρ^{n−1}: each is a
/// T_{ρ/(1+2ρ)}^{n−3}.
pub fn regular_t_corner_measure(n: u32, rho: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::Dimension {
            domain: "RegularT corner",
            n: n as i64,
            min: 3,
        });
    }
    regular_t_size(n - 2, rho / (1.0 + 2.0 * rho))
}

/// |∂f_n/∂ρ − n(n−1)/(π√(1−ρ²)) f_{n−2}(ρ/(1+2ρ))| with a central
/// difference for the derivative.
pub fn regular_t_recursion_residual(n: u32, rho: f64) -> Result<f64> {
    if n < 3 {
        return Err(Error::Dimension {
            domain: "RegularT recursion",
            n: n as i64,
            min: 3,
        });
    }
    if !(rho > FD_STEP && rho + FD_STEP < 1.0) {
        return Err(Error::InvalidParameter {
            name: "rho",
            value: rho,
            reason: "must leave room for the difference step inside (0, 1)",
        });
    }
    let derivative = (regular_t_fraction(n, rho + FD_STEP)? - regular_t_fraction(n, rho - FD_STEP)?)
        / (2.0 * FD_STEP);
    let nf = n as f64;
    let rhs = nf * (nf - 1.0) / (PI * (1.0 - rho * rho).sqrt())
        * regular_t_fraction(n - 2, rho / (1.0 + 2.0 * rho))?;
    Ok((derivative - rhs).abs())
}

/// f_n(ρ) minus its second-order small-ρ expansion; O(ρ³).
pub fn small_rho_residual(n: u32, rho: f64) -> Result<f64> {
    let nf = n as f64;
    let expansion = 1.0
        + nf * (nf - 1.0) * rho / PI
        + nf * (nf - 1.0) * (nf - 2.0) * (nf - 3.0) * rho * rho / (2.0 * PI * PI);
    Ok(regular_t_fraction(n, rho)? - expansion)
}
