//! Explicit cone heat kernels and numerical checks of the identities that
//! tie them to the spectral function.

use std::f64::consts::PI;

use crate::domain::{BoundaryCondition, DomainExpr};
use crate::error::{Error, Result};
use crate::geometry::sphere_size;
use crate::special::quadrature::{integrate, integrate_adaptive, integrate_nested, Interval};
use crate::special::{bessel_i_scaled, Tolerance};
use crate::spectral::{domain_m, expand_series, SpectralSeries};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncationControl {
    pub max_terms: usize,
    pub target_tol: f64,
}

impl TruncationControl {
    pub fn new(max_terms: usize, target_tol: f64) -> Result<Self> {
        if max_terms == 0 {
            return Err(Error::InvalidParameter {
                name: "max_terms",
                value: 0.0,
                reason: "must be at least 1",
            });
        }
        if !(target_tol > 0.0) {
            return Err(Error::InvalidParameter {
                name: "target_tol",
                value: target_tol,
                reason: "must be positive",
            });
        }
        Ok(Self { max_terms, target_tol })
    }
}

/// Heat kernels of ∂_τ f = ½∇²f on cones with image-form closed solutions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExplicitKernel {
    FreeLine,
    HalfLine(BoundaryCondition),
    FreeSpace(u32),
    /// Product of n Dirichlet half-lines.
    Orthant(u32),
}

impl ExplicitKernel {
    pub fn dim(&self) -> usize {
        match *self {
            Self::FreeLine | Self::HalfLine(_) => 1,
            Self::FreeSpace(n) | Self::Orthant(n) => n as usize,
        }
    }
}

fn free_line(x: f64, xp: f64, tau: f64) -> f64 {
    (-(x - xp).powi(2) / (2.0 * tau)).exp() / (2.0 * PI * tau).sqrt()
}

fn half_line(bc: BoundaryCondition, x: f64, xp: f64, tau: f64) -> f64 {
    // image sum in factored form: e^{−(x−x′)²/2τ}(1 ∓ e^{−2xx′/τ})
    let direct = free_line(x, xp, tau);
    let image = (-2.0 * x * xp / tau).exp();
    match bc {
        BoundaryCondition::Dirichlet => direct * -(-2.0 * x * xp / tau).exp_m1(),
        BoundaryCondition::Neumann => direct * (1.0 + image),
    }
}

/// f(x, x′, τ).
pub fn kernel_eval(k: ExplicitKernel, x: &[f64], xp: &[f64], tau: f64) -> Result<f64> {
    if !(tau > 0.0) {
        return Err(Error::Domain {
            function: "kernel_eval",
            x: tau,
        });
    }
    if x.len() != k.dim() || xp.len() != k.dim() {
        return Err(Error::InvalidParameter {
            name: "coordinates",
            value: x.len().max(xp.len()) as f64,
            reason: "length must match the kernel dimension",
        });
    }
    let half = matches!(k, ExplicitKernel::HalfLine(_) | ExplicitKernel::Orthant(_));
    if half {
        if let Some(&bad) = x.iter().chain(xp).find(|&&c| c < 0.0) {
            return Err(Error::Domain {
                function: "kernel_eval",
                x: bad,
            });
        }
    }
    let pairs = x.iter().zip(xp);
    Ok(match k {
        ExplicitKernel::FreeLine | ExplicitKernel::FreeSpace(_) => pairs.map(|(&a, &b)| free_line(a, b, tau)).product(),
        ExplicitKernel::HalfLine(bc) => half_line(bc, x[0], xp[0], tau),
        ExplicitKernel::Orthant(_) => pairs
            .map(|(&a, &b)| half_line(BoundaryCondition::Dirichlet, a, b, tau))
            .product(),
    })
}

/// |e^{−x}Σ_{k=1..K} I_{2k}(x) − [¼ − ½I₀(x)e^{−x} + ¼e^{−2x}]| with x = r²:
/// the quadrant-arc integral of the diagonal kernel from the mode series
/// against its closed form.
pub fn arc_trace_identity_residual(r: f64, tc: TruncationControl) -> Result<f64> {
    if !(r > 0.0 && r <= 10.0) {
        return Err(Error::InvalidParameter {
            name: "r",
            value: r,
            reason: "must lie in (0, 10]",
        });
    }
    let x = r * r;
    let series = (1..=tc.max_terms)
        .map(|k| bessel_i_scaled(2.0 * k as f64, x))
        .sum::<Result<f64>>()?;
    let closed = 0.25 - 0.5 * bessel_i_scaled(0.0, x)? + 0.25 * (-2.0 * x).exp();
    let residual = (series - closed).abs();
    if residual > tc.target_tol {
        return Err(Error::ToleranceNotMet {
            what: "arc trace identity",
            achieved: residual,
            requested: tc.target_tol,
        });
    }
    Ok(residual)
}

/// Cone for the spectral-integral check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MzfDomain {
    FreeSpace(u32),
    Orthant(u32),
}

/// Closed-form M(z) of the cone's spherical domain: full sphere or
/// Dirichlet orthant.
pub fn mzf_closed_form(domain: MzfDomain, z: f64) -> f64 {
    match domain {
        MzfDomain::FreeSpace(n) => (1.0 - z * z) * (1.0 - z).powi(-(n as i32)),
        MzfDomain::Orthant(n) => z.powi(n as i32) * (1.0 - z * z).powi(1 - n as i32),
    }
}

/// (1 − z²) z^{−n/2} ∫ d^n x e^{−(1−z)²r²/2z} f(x, x, 1) by adaptive
/// quadrature. The full space integrates radially; the orthant is done as an
/// n-fold iterated integral without using its product structure.
pub fn mzf_numeric(domain: MzfDomain, z: f64) -> Result<f64> {
    if !(0.1..=0.9).contains(&z) {
        return Err(Error::InvalidParameter {
            name: "z",
            value: z,
            reason: "must lie in [0.1, 0.9]",
        });
    }
    let c = (1.0 - z).powi(2) / (2.0 * z);
    let tol = Tolerance::new(1e-12, 1e-10);
    let (n, integral) = match domain {
        MzfDomain::FreeSpace(n) => {
            let diag = (2.0 * PI).powf(-0.5 * n as f64);
            let radial = |r: f64| r.powi(n as i32 - 1) * (-c * r * r).exp() * diag;
            (n, sphere_size(n) * integrate(&radial, Interval::Above(0.0), tol)?)
        }
        MzfDomain::Orthant(n) => {
            let k = ExplicitKernel::Orthant(n);
            let f = |x: &[f64]| {
                let r2: f64 = x.iter().map(|v| v * v).sum();
                (-c * r2).exp() * kernel_eval(k, x, x, 1.0).expect("orthant coordinates are nonnegative")
            };
            let intervals = vec![Interval::Above(0.0); n as usize];
            (n, integrate_nested(&f, &intervals, tol)?)
        }
    };
    Ok((1.0 - z * z) * z.powf(-0.5 * n as f64) * integral)
}

pub fn mzf_numeric_residual(domain: MzfDomain, z: f64) -> Result<f64> {
    Ok((mzf_numeric(domain, z)? - mzf_closed_form(domain, z)).abs())
}

fn series_tail_weight(series: &SpectralSeries, from: f64, ell: f64, s: f64, u: f64) -> f64 {
    series
        .terms
        .iter()
        .filter(|t| t.nu > from)
        .map(|t| t.multiplicity as f64 * (-(s * (t.nu + ell) / (2.0 * u)).powi(2)).exp())
        .sum()
}

fn trace_integrand(series: &SpectralSeries, ell: f64, s: f64, u: f64) -> f64 {
    // e^{−u² − ℓ²s²/4u²} Σ m e^{−(s²/4u²)ν(ν+2ℓ)} = Σ m e^{−u² − s²(ν+ℓ)²/4u²}
    if u == 0.0 {
        return 0.0;
    }
    series
        .terms
        .iter()
        .map(|t| t.multiplicity as f64 * (-u * u - (s * (t.nu + ell) / (2.0 * u)).powi(2)).exp())
        .sum()
}

const MAX_TRACE_NU: f64 = 1e4;

/// |(e^{ℓs}/√π)∫ dt/√t e^{−t−ℓ²s²/4t} Tr e^{(s²/4t)∇²} − M(e^{−s})| with the
/// trace summed from the exact spectrum, ℓ = (n−2)/2.
///
/// With t = u² the integral runs over u ∈ (0, U]. U starts at √ln(10³/tol)
/// and grows until the neglected e^{−U²}-weighted trace is below tol/100; the
/// series cutoff is doubled until its top half contributes below tol/100 at U.
pub fn mhk_identity_residual(d: &DomainExpr, bc: BoundaryCondition, s: f64, tc: TruncationControl) -> Result<f64> {
    if !(0.05..=2.0).contains(&s) {
        return Err(Error::InvalidParameter {
            name: "s",
            value: s,
            reason: "must lie in [0.05, 2]",
        });
    }
    let m = domain_m(d, bc)?;
    let n = d.ambient_dim();
    let ell = 0.5 * (n as f64 - 2.0);
    let tol = tc.target_tol;
    let mut upper = (1e3 / tol).ln().sqrt();
    let mut nu_max = 16.0f64.max(m.first_exponent() + 8.0);
    let series = loop {
        let series = expand_series(&m, nu_max)?;
        let tail = series_tail_weight(&series, nu_max / 2.0, ell, s, upper);
        let beyond = (-upper * upper).exp() * trace_integrand(&series, ell, s, upper) * upper;
        if tail < 1e-2 * tol && beyond < 1e-2 * tol {
            break series;
        }
        if tail >= 1e-2 * tol {
            nu_max *= 2.0;
        } else {
            upper += 0.5;
        }
        if nu_max > MAX_TRACE_NU || series.terms.len() > tc.max_terms.max(1) * 1000 {
            return Err(Error::ToleranceNotMet {
                what: "heat trace truncation",
                achieved: tail,
                requested: 1e-2 * tol,
            });
        }
    };
    let integral = integrate_adaptive(
        &|u| trace_integrand(&series, ell, s, u),
        0.0,
        upper,
        Tolerance::new(1e-3 * tol, 1e-13),
    )?;
    let rhs = 2.0 * (ell * s).exp() / PI.sqrt() * integral;
    let residual = (rhs - m.evaluate_at_s(s)).abs();
    if residual > tol {
        return Err(Error::ToleranceNotMet {
            what: "heat trace identity",
            achieved: residual,
            requested: tol,
        });
    }
    Ok(residual)
}

/// (1/|S^{n−1}|)(1 − z²)/(1 − 2z cos θ + z²)^{n/2}.
pub fn poisson_kernel(n: u32, theta: f64, z: f64) -> Result<f64> {
    if n < 2 {
        return Err(Error::Dimension {
            domain: "poisson_kernel",
            n: n as i64,
            min: 2,
        });
    }
    if !(0.0..1.0).contains(&z) {
        return Err(Error::InvalidParameter {
            name: "z",
            value: z,
            reason: "must lie in [0, 1)",
        });
    }
    let denom = (1.0 - 2.0 * z * theta.cos() + z * z).powf(0.5 * n as f64);
    Ok((1.0 - z * z) / denom / sphere_size(n))
}

/// ∫_{S^{n−1}} of the kernel about a fixed pole, as |S^{n−2}|∫ sin^{n−2}θ P dθ.
pub fn poisson_normalization(n: u32, z: f64) -> Result<f64> {
    poisson_kernel(n, 0.0, z)?;
    let rim = if n == 2 { 2.0 } else { sphere_size(n - 1) };
    let f = |t: f64| t.sin().powi(n as i32 - 2) * poisson_kernel(n, t, z).unwrap_or(f64::NAN);
    Ok(rim * integrate_adaptive(&f, 0.0, PI, Tolerance::new(1e-13, 1e-12))?)
}

/// Central-difference ∂P/∂z at z = 0 minus the ν = 1 zonal term
/// n cos θ/|S^{n−1}|. P is evaluated at ±h through its closed form, which is
/// smooth across z = 0.
pub fn poisson_first_coefficient_residual(n: u32, theta: f64) -> Result<f64> {
    poisson_kernel(n, theta, 0.0)?;
    let h = 1e-5;
    let p = |z: f64| (1.0 - z * z) / (1.0 - 2.0 * z * theta.cos() + z * z).powf(0.5 * n as f64) / sphere_size(n);
    let derivative = (p(h) - p(-h)) / (2.0 * h);
    Ok((derivative - n as f64 * theta.cos() / sphere_size(n)).abs())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::parse_domain;
    use BoundaryCondition::*;

    fn tc(k: usize, tol: f64) -> TruncationControl {
        TruncationControl::new(k, tol).unwrap()
    }

    #[test]
    fn diagonal_values() {
        let v = kernel_eval(ExplicitKernel::FreeLine, &[0.3], &[0.3], 1.0).unwrap();
        assert!((v - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        assert_eq!(kernel_eval(ExplicitKernel::HalfLine(Dirichlet), &[0.0], &[0.0], 1.0).unwrap(), 0.0);
        let x = [0.4, 1.1, 0.7];
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let expect = (2.0 / PI).powf(1.5) * (-r2).exp() * x.iter().map(|v| (v * v).sinh()).product::<f64>();
        let got = kernel_eval(ExplicitKernel::Orthant(3), &x, &x, 1.0).unwrap();
        assert!((got - expect).abs() < 1e-15 * expect.max(1.0));
    }

    #[test]
    fn orthant_is_a_product() {
        let (x, xp, tau) = ([0.5, 1.5], [0.9, 0.2], 0.7);
        let prod: f64 = (0..2)
            .map(|i| kernel_eval(ExplicitKernel::HalfLine(Dirichlet), &[x[i]], &[xp[i]], tau).unwrap())
            .product();
        let joint = kernel_eval(ExplicitKernel::Orthant(2), &x, &xp, tau).unwrap();
        assert!((prod - joint).abs() < 1e-16);
    }

    #[test]
    fn rejects_outside_cone() {
        assert!(matches!(
            kernel_eval(ExplicitKernel::HalfLine(Neumann), &[-0.1], &[0.2], 1.0),
            Err(Error::Domain { .. })
        ));
        assert!(kernel_eval(ExplicitKernel::FreeLine, &[0.0], &[0.0], 0.0).is_err());
    }

    #[test]
    fn free_line_normalized() {
        for (x, tau) in [(0.0, 1.0), (2.5, 0.1), (-1.0, 3.0)] {
            let f = |y: f64| kernel_eval(ExplicitKernel::FreeLine, &[x], &[y], tau).unwrap();
            let total = integrate(&f, Interval::Real, Tolerance::new(1e-13, 1e-13)).unwrap();
            assert!((total - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn semigroup() {
        let (x, xp, t1, t2) = (0.6, 1.3, 0.4, 0.9);
        let tol = Tolerance::new(1e-13, 1e-12);
        let f = |y: f64| free_line(x, y, t1) * free_line(y, xp, t2);
        let lhs = integrate(&f, Interval::Real, tol).unwrap();
        assert!((lhs - free_line(x, xp, t1 + t2)).abs() < 1e-8);
        let g = |y: f64| half_line(Dirichlet, x, y, t1) * half_line(Dirichlet, y, xp, t2);
        let lhs = integrate(&g, Interval::Above(0.0), tol).unwrap();
        assert!((lhs - half_line(Dirichlet, x, xp, t1 + t2)).abs() < 1e-8);
    }

    #[test]
    fn arc_trace() {
        assert!(arc_trace_identity_residual(1.0, tc(40, 1e-12)).unwrap() < 1e-12);
        assert!(arc_trace_identity_residual(0.01, tc(40, 1e-12)).unwrap() < 1e-12);
        assert!(arc_trace_identity_residual(3.0, tc(60, 1e-10)).unwrap() < 1e-10);
        assert!(matches!(
            arc_trace_identity_residual(3.0, tc(2, 1e-10)),
            Err(Error::ToleranceNotMet { .. })
        ));
    }

    #[test]
    fn spectral_integral() {
        assert!(mzf_numeric_residual(MzfDomain::FreeSpace(2), 0.5).unwrap() < 1e-8);
        assert!(mzf_numeric_residual(MzfDomain::FreeSpace(3), 0.3).unwrap() < 1e-8);
        for z in [0.2, 0.5, 0.8] {
            let r = mzf_numeric_residual(MzfDomain::Orthant(2), z).unwrap();
            assert!(r < 1e-6, "z = {z}: {r}");
        }
        assert!((mzf_closed_form(MzfDomain::Orthant(2), 0.5) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    #[ignore = "three-dimensional quadrature, slow"]
    fn spectral_integral_orthant3() {
        assert!(mzf_numeric_residual(MzfDomain::Orthant(3), 0.5).unwrap() < 1e-6);
    }

    #[test]
    fn heat_trace_identity() {
        let cases = [("T(3)", 0.5, 1e-6), ("Sphere(2)", 1.0, 1e-8), ("HalfSphere(3)", 0.3, 1e-5)];
        for (text, s, tol) in cases {
            let d = parse_domain(text).unwrap();
            let r = mhk_identity_residual(&d, Dirichlet, s, tc(50, tol)).unwrap();
            assert!(r < tol, "{text}: {r}");
        }
        let d = parse_domain("T(3)").unwrap();
        assert!(mhk_identity_residual(&d, Neumann, 0.7, tc(50, 1e-6)).unwrap() < 1e-6);
    }

    #[test]
    fn poisson() {
        for n in 2..=5 {
            assert!((poisson_kernel(n, 1.0, 0.0).unwrap() - 1.0 / sphere_size(n)).abs() < 1e-16);
            assert!((poisson_normalization(n, 0.5).unwrap() - 1.0).abs() < 1e-8, "n = {n}");
            for theta in [0.0, 0.7, 2.0] {
                assert!(poisson_first_coefficient_residual(n, theta).unwrap() < 1e-8);
            }
        }
        assert!((poisson_normalization(3, 0.9).unwrap() - 1.0).abs() < 1e-8);
    }
}
