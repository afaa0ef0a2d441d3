//! Verification suites: each check is a residual compared with a fixed
//! tolerance.

use std::fmt;
use std::str::FromStr;

use crate::domain::{parse_domain, BoundaryCondition, DomainExpr};
use crate::error::Result;
use crate::geometry::{
    catalog_geometry, general_t_size_fraction, regular_correlation, regular_t_fraction, regular_t_recursion_residual,
    regular_t_size, small_rho_residual, sphere_size,
};
use crate::heat_kernel::{
    arc_trace_identity_residual, mhk_identity_residual, mzf_numeric_residual, poisson_first_coefficient_residual,
    poisson_normalization, MzfDomain, TruncationControl,
};
use crate::special::bessel_i;
use crate::spectral::{
    asymptotics_from_form, counting_function, domain_m, expand_series, functional_equation_check, pairing_check,
    weyl_counting,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Suite {
    #[default]
    All,
    Bessel,
    Mzf,
    Mhk,
    Functional,
    Sizes,
    Weyl,
}

impl Suite {
    pub const ALL: [Suite; 6] = [Suite::Bessel, Suite::Mzf, Suite::Mhk, Suite::Functional, Suite::Sizes, Suite::Weyl];
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::All => "all",
            Self::Bessel => "bessel",
            Self::Mzf => "mzf",
            Self::Mhk => "mhk",
            Self::Functional => "functional",
            Self::Sizes => "sizes",
            Self::Weyl => "weyl",
        })
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        [Suite::All]
            .into_iter()
            .chain(Suite::ALL)
            .find(|suite| suite.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown suite {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    /// The residual, or NaN when the computation itself failed.
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: impl Into<String>, value: Result<f64>, tolerance: f64) -> Self {
        let value = value.unwrap_or(f64::NAN);
        Self {
            name: name.into(),
            value,
            tolerance,
            passed: value.is_finite() && value.abs() < tolerance,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VerifyOptions {
    /// Adds the three-dimensional orthant spectral integral (seconds of work).
    pub include_orthant3: bool,
}

pub fn run_suite(suite: Suite, options: VerifyOptions) -> Vec<Check> {
    match suite {
        Suite::All => Suite::ALL.iter().flat_map(|&s| run_suite(s, options)).collect(),
        Suite::Bessel => bessel_checks(),
        Suite::Mzf => mzf_checks(options),
        Suite::Mhk => mhk_checks(),
        Suite::Functional => functional_checks(),
        Suite::Sizes => size_checks(),
        Suite::Weyl => weyl_checks(),
    }
}

fn expr(text: &str) -> DomainExpr {
    parse_domain(text).expect("built-in expression parses")
}

fn bessel_checks() -> Vec<Check> {
    let mut worst = 0.0f64;
    let mut failed = None;
    for nu in 1..=10 {
        for i in 0..=39 {
            let x = 0.5 + 0.5 * i as f64;
            let nu = nu as f64;
            let r = (|| -> Result<f64> {
                let below = bessel_i(nu - 1.0, x)?;
                Ok((below - bessel_i(nu + 1.0, x)? - 2.0 * nu / x * bessel_i(nu, x)?).abs() / below)
            })();
            match r {
                Ok(v) => worst = worst.max(v),
                Err(e) => failed = Some(e),
            }
        }
    }
    let mut checks = vec![Check::new(
        "Bessel recurrence, relative, nu 1..10, x 0.5..20",
        failed.map_or(Ok(worst), Err),
        1e-10,
    )];
    for (r, k, tol) in [(0.01, 40, 1e-12), (1.0, 40, 1e-12), (3.0, 60, 1e-10)] {
        let tc = TruncationControl { max_terms: k, target_tol: tol };
        checks.push(Check::new(
            format!("quadrant-arc trace identity, r = {r}"),
            arc_trace_identity_residual(r, tc),
            tol,
        ));
    }
    checks
}

fn mzf_checks(options: VerifyOptions) -> Vec<Check> {
    let mut checks = vec![Check::new(
        "spectral integral, free space n = 2, z = 0.5",
        mzf_numeric_residual(MzfDomain::FreeSpace(2), 0.5),
        1e-8,
    )];
    for z in [0.2, 0.5, 0.8] {
        checks.push(Check::new(
            format!("spectral integral, orthant n = 2, z = {z}"),
            mzf_numeric_residual(MzfDomain::Orthant(2), z),
            1e-6,
        ));
    }
    if options.include_orthant3 {
        checks.push(Check::new(
            "spectral integral, orthant n = 3, z = 0.5",
            mzf_numeric_residual(MzfDomain::Orthant(3), 0.5),
            1e-6,
        ));
    }
    checks.push(Check::new(
        "Poisson kernel normalization, n = 3, z = 0.5",
        poisson_normalization(3, 0.5).map(|v| v - 1.0),
        1e-8,
    ));
    checks.push(Check::new(
        "Poisson kernel z^1 coefficient, n = 3, theta = 0.7",
        poisson_first_coefficient_residual(3, 0.7),
        1e-8,
    ));
    checks
}

fn mhk_checks() -> Vec<Check> {
    let tc = TruncationControl { max_terms: 50, target_tol: 1e-5 };
    let mut checks = Vec::new();
    for text in ["T(3)", "Sphere(2)", "HalfSphere(3)"] {
        for s in [0.3, 0.5, 1.0] {
            checks.push(Check::new(
                format!("heat trace identity, {text}, s = {s}"),
                mhk_identity_residual(&expr(text), BoundaryCondition::Dirichlet, s, tc),
                1e-5,
            ));
        }
    }
    checks
}

fn functional_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    for family in ["T", "Sphere", "HalfSphere"] {
        for n in 1..=5u32 {
            let d = expr(&format!("{family}({n})"));
            let r = (|| -> Result<f64> {
                let m = domain_m(&d, BoundaryCondition::Dirichlet)?;
                // γ from geometry, not from the factor form
                let gamma = catalog_geometry(&d, BoundaryCondition::Dirichlet)?.scaling_inputs().gamma;
                Ok([0.3, 0.5, 0.7]
                    .iter()
                    .map(|&z| functional_equation_check(&m, n, gamma, z))
                    .fold(0.0, f64::max))
            })();
            checks.push(Check::new(format!("M(1/z) relation, {family}({n})"), r, 1e-12));
        }
    }
    for n in 1..=5u32 {
        let d = expr(&format!("T({n})"));
        let r = (|| -> Result<f64> {
            let md = domain_m(&d, BoundaryCondition::Dirichlet)?;
            let mn = domain_m(&d, BoundaryCondition::Neumann)?;
            Ok([0.3, 0.5, 0.7]
                .iter()
                .map(|&z| pairing_check(&md, &mn, n, z))
                .fold(0.0, f64::max))
        })();
        checks.push(Check::new(format!("Dirichlet/Neumann pairing, T({n})"), r, 1e-12));
    }
    checks
}

fn size_checks() -> Vec<Check> {
    let mut checks = Vec::new();
    for n in 2..=6u32 {
        let r = regular_t_size(n, 0.5).map(|v| {
            let exact = sphere_size(n) / (n as f64 + 1.0);
            (v - exact) / exact
        });
        checks.push(Check::new(format!("|T_(1/2)^{}| = |S^{}|/{}", n - 1, n - 1, n + 1), r, 1e-8));
    }
    let worst = (1..=9)
        .map(|i| {
            let rho = 0.1 * i as f64;
            regular_t_size(3, rho).map(|v| (v - (3.0 * (-rho).acos() - std::f64::consts::PI)).abs())
        })
        .try_fold(0.0f64, |acc, r| r.map(|v| acc.max(v)));
    checks.push(Check::new("|T_rho^2| = 3 arccos(-rho) - pi, rho 0.1..0.9", worst, 1e-9));
    for n in 3..=5 {
        for rho in [0.2, 0.4] {
            checks.push(Check::new(
                format!("recursion residual, n = {n}, rho = {rho}"),
                regular_t_recursion_residual(n, rho),
                1e-5,
            ));
        }
    }
    for n in 2..=5 {
        // third order: the residual ratio over a decade is about 1000
        let ratio = small_rho_residual(n, 1e-2).and_then(|a| small_rho_residual(n, 1e-3).map(|b| a / b));
        checks.push(Check::new(
            format!("small-rho expansion ratio test, n = {n}"),
            ratio.map(|r| (r / 1000.0).ln().abs()),
            0.25f64.ln_1p(),
        ));
    }
    for (n, rho) in [(4usize, 0.5), (5, 0.3)] {
        let r = general_t_size_fraction(&regular_correlation(n, rho))
            .and_then(|est| regular_t_fraction(n as u32, rho).map(|f| (est.value - f * 0.5f64.powi(n as i32)).abs()));
        checks.push(Check::new(format!("orthant QMC vs erfc integral, n = {n}, rho = {rho}"), r, 1e-3));
    }
    checks
}

fn weyl_checks() -> Vec<Check> {
    let d = expr("T(3)");
    let result = (|| -> Result<(f64, f64)> {
        let m = domain_m(&d, BoundaryCondition::Dirichlet)?;
        let coeffs = asymptotics_from_form(&m);
        let series = expand_series(&m, 31.0)?;
        let mut worst = 0.0f64;
        // eigen-degrees are odd, so even ν are midpoints
        for nu in (12..=30).step_by(2) {
            let w = counting_function(&series, nu as f64)? as f64;
            worst = worst.max((w - weyl_counting(&coeffs, nu as f64)).abs() / w);
        }
        let spot = (counting_function(&series, 12.0)? as f64 - 15.0).abs()
            + (weyl_counting(&coeffs, 12.0) - (15.0 + 1.0 / 24.0)).abs();
        Ok((worst, spot))
    })();
    let (worst, spot) = match result {
        Ok((w, s)) => (Ok(w), Ok(s)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    vec![
        Check::new("Weyl count, T(3) midpoints 12..30, relative", worst, 1e-2),
        Check::new("Weyl spot value W(12) = 15 vs 15 + 1/24", spot, 1e-9),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suites_parse() {
        assert_eq!("MHK".parse::<Suite>().unwrap(), Suite::Mhk);
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn every_suite_passes() {
        for suite in Suite::ALL {
            for check in run_suite(suite, VerifyOptions::default()) {
                assert!(check.passed, "{suite}: {} = {} (tol {})", check.name, check.value, check.tolerance);
            }
        }
    }

    #[test]
    fn failed_computation_fails_check() {
        let c = Check::new("x", Err(crate::error::Error::NotPositiveDefinite), 1.0);
        assert!(!c.passed && c.value.is_nan());
    }
}
