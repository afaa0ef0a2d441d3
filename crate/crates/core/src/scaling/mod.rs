//! Eigenvalue estimates for a target domain by scaling the exactly known
//! spectrum of a reference domain.

pub mod flat;

use std::fmt;

use crate::domain::{BoundaryCondition, DomainExpr};
use crate::error::{Error, Result};
use crate::geometry::{catalog_geometry, DomainGeometry, ScalingInputs};
use crate::spectral::{domain_m, expand_series, SpectralSeries};

pub use flat::{
    cap_linear_closed_form, flat_linear, flat_quadratic, flat_reference_estimate, lame_eigenvalues,
    sector_linear_closed_form, FlatDomain, BESSEL_ZEROS,
};

/// λ = ν(ν + n − 2).
pub fn lambda_of_nu(nu: f64, n: u32) -> f64 {
    nu * (nu + n as f64 - 2.0)
}

/// Geometry together with the coefficients derived from it.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingDomain {
    pub geometry: DomainGeometry,
    pub inputs: ScalingInputs,
}

impl ScalingDomain {
    pub fn new(geometry: DomainGeometry) -> Self {
        let inputs = geometry.scaling_inputs();
        Self { geometry, inputs }
    }

    pub fn from_expr(d: &DomainExpr, bc: BoundaryCondition) -> Result<Self> {
        Ok(Self::new(catalog_geometry(d, bc)?))
    }
}

/// ν = α + β ν₀.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearScaling {
    pub alpha: f64,
    pub beta: f64,
    pub n: u32,
}

/// (ν + p_t)² + q_t = β² [(ν₀ + p_r)² + q_r].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadraticScaling {
    pub beta: f64,
    pub p_t: f64,
    pub q_t: f64,
    pub p_r: f64,
    pub q_r: f64,
    pub n: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Linear,
    Quadratic,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Linear => "linear",
            Self::Quadratic => "quadratic",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "linear" => Ok(Self::Linear),
            "quadratic" => Ok(Self::Quadratic),
            other => Err(format!("unknown method {other:?}")),
        }
    }
}

/// Neumann variants, both keeping ν = 0 fixed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NeumannMethod {
    /// ν(ν + 2p) scaled by β².
    Linear,
    /// (ν + p)³ + (3/2)qν − p³ scaled by β³.
    Cubic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EstimateMethod {
    Linear,
    Quadratic,
    NeumannLinear,
    NeumannCubic,
    FlatReference,
}

impl fmt::Display for EstimateMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Linear => "linear",
            Self::Quadratic => "quadratic",
            Self::NeumannLinear => "neumann-linear",
            Self::NeumannCubic => "neumann-cubic",
            Self::FlatReference => "flat-reference",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateRow {
    /// Mode index from 1.
    pub k: usize,
    pub nu_ref: f64,
    pub nu: f64,
    /// Multiplicity of the reference degree this mode belongs to.
    pub multiplicity: u64,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateReport {
    pub rows: Vec<EstimateRow>,
    pub method: EstimateMethod,
    pub target: String,
    pub reference: String,
    pub n: u32,
}

impl EstimateReport {
    pub fn nus(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.nu).collect()
    }

    pub fn lambdas(&self) -> Vec<f64> {
        self.rows.iter().map(|r| r.lambda).collect()
    }

    pub fn with_labels(mut self, target: impl Into<String>, reference: impl Into<String>) -> Self {
        self.target = target.into();
        self.reference = reference.into();
        self
    }
}

fn check_pair(target: &ScalingDomain, reference: &ScalingDomain) -> Result<()> {
    let (t, r) = (&target.geometry, &reference.geometry);
    if t.n != r.n {
        return Err(Error::DimensionMismatch {
            target_n_minus_1: t.n.saturating_sub(1),
            reference_n_minus_1: r.n.saturating_sub(1),
        });
    }
    if t.bc != r.bc {
        return Err(Error::BoundaryConditionMismatch);
    }
    Ok(())
}

fn beta(target: &ScalingDomain, reference: &ScalingDomain) -> f64 {
    let n = target.geometry.n;
    (reference.geometry.area / target.geometry.area).powf(1.0 / (n as f64 - 1.0))
}

/// β = (A_r/A_t)^{1/(n−1)}, α = ½[γ_t − βγ_r + (β − 1)(n − 2)].
pub fn linear_params(target: &ScalingDomain, reference: &ScalingDomain) -> Result<LinearScaling> {
    check_pair(target, reference)?;
    let n = target.geometry.n;
    let b = beta(target, reference);
    let alpha = 0.5 * (target.inputs.gamma - b * reference.inputs.gamma + (b - 1.0) * (n as f64 - 2.0));
    Ok(LinearScaling { alpha, beta: b, n })
}

pub fn quadratic_params(target: &ScalingDomain, reference: &ScalingDomain) -> Result<QuadraticScaling> {
    check_pair(target, reference)?;
    Ok(QuadraticScaling {
        beta: beta(target, reference),
        p_t: target.inputs.p,
        q_t: target.inputs.q,
        p_r: reference.inputs.p,
        q_r: reference.inputs.q,
        n: target.geometry.n,
    })
}

/// First `modes` reference degrees, one per mode, with the multiplicity of
/// each degree.
fn reference_modes(series: &SpectralSeries, modes: usize) -> Result<Vec<(f64, u64)>> {
    let available = series.mode_count();
    if (available as u128) < modes as u128 {
        return Err(Error::InsufficientModes {
            requested: modes,
            available: available as usize,
        });
    }
    Ok(series
        .terms
        .iter()
        .flat_map(|t| std::iter::repeat_n((t.nu, t.multiplicity), t.multiplicity as usize))
        .take(modes)
        .collect())
}

fn build_report(
    series: &SpectralSeries,
    modes: usize,
    n: u32,
    method: EstimateMethod,
    mut map: impl FnMut(usize, f64) -> Result<f64>,
) -> Result<EstimateReport> {
    let rows = reference_modes(series, modes)?
        .into_iter()
        .enumerate()
        .map(|(i, (nu_ref, multiplicity))| {
            let nu = map(i + 1, nu_ref)?;
            Ok(EstimateRow {
                k: i + 1,
                nu_ref,
                nu,
                multiplicity,
                lambda: lambda_of_nu(nu, n),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EstimateReport {
        rows,
        method,
        target: String::new(),
        reference: String::new(),
        n,
    })
}

pub fn estimate_linear(sc: &LinearScaling, ref_series: &SpectralSeries, modes: usize) -> Result<EstimateReport> {
    build_report(ref_series, modes, sc.n, EstimateMethod::Linear, |_, nu0| {
        Ok(sc.alpha + sc.beta * nu0)
    })
}

/// ν = −p_t + √(β²[(ν₀ + p_r)² + q_r] − q_t).
pub fn estimate_quadratic(
    sc: &QuadraticScaling,
    ref_series: &SpectralSeries,
    modes: usize,
) -> Result<EstimateReport> {
    build_report(ref_series, modes, sc.n, EstimateMethod::Quadratic, |k, nu0| {
        let disc = sc.beta * sc.beta * ((nu0 + sc.p_r).powi(2) + sc.q_r) - sc.q_t;
        if disc < 0.0 {
            return Err(Error::NegativeDiscriminant { mode: k, value: disc });
        }
        Ok(-sc.p_t + disc.sqrt())
    })
}

fn cubic(nu: f64, p: f64, q: f64) -> f64 {
    (nu + p).powi(3) + 1.5 * q * nu - p.powi(3)
}

const MAX_GROWTH: usize = 200;

fn solve_cubic(k: usize, rhs: f64, p: f64, q: f64) -> Result<f64> {
    if rhs == 0.0 {
        return Ok(0.0);
    }
    if rhs < 0.0 {
        return Err(Error::RootNotBracketed { mode: k });
    }
    let mut hi = 1.0;
    let mut grown = 0;
    while cubic(hi, p, q) < rhs {
        hi *= 2.0;
        grown += 1;
        if grown > MAX_GROWTH {
            return Err(Error::RootNotBracketed { mode: k });
        }
    }
    let mut lo = 0.0;
    // run to adjacent floats; far tighter than needed but cheap
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if cubic(mid, p, q) < rhs {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn estimate_neumann(
    sc: &QuadraticScaling,
    method: NeumannMethod,
    ref_series: &SpectralSeries,
    modes: usize,
) -> Result<EstimateReport> {
    let b = sc.beta;
    match method {
        NeumannMethod::Linear => build_report(ref_series, modes, sc.n, EstimateMethod::NeumannLinear, |k, nu0| {
            let disc = sc.p_t * sc.p_t + b * b * nu0 * (nu0 + 2.0 * sc.p_r);
            if disc < 0.0 {
                return Err(Error::NegativeDiscriminant { mode: k, value: disc });
            }
            Ok((-sc.p_t + disc.sqrt()).max(0.0))
        }),
        NeumannMethod::Cubic => build_report(ref_series, modes, sc.n, EstimateMethod::NeumannCubic, |k, nu0| {
            let rhs = b.powi(3) * cubic(nu0, sc.p_r, sc.q_r);
            solve_cubic(k, rhs, sc.p_t, sc.q_t)
        }),
    }
}

const MAX_REFERENCE_NU: f64 = 1e4;

/// Reference series long enough to hold `modes` modes.
pub fn reference_series(reference: &DomainExpr, bc: BoundaryCondition, modes: usize) -> Result<SpectralSeries> {
    let m = domain_m(reference, bc)?;
    let mut nu_max = m.first_exponent().max(0.0) + 8.0;
    loop {
        let s = expand_series(&m, nu_max)?;
        if s.mode_count() as u128 >= modes as u128 {
            return Ok(s);
        }
        if nu_max > MAX_REFERENCE_NU {
            return Err(Error::InsufficientModes {
                requested: modes,
                available: s.mode_count() as usize,
            });
        }
        nu_max *= 2.0;
    }
}

/// Full pipeline: geometry of both domains, exact reference spectrum and
/// the chosen estimator (Neumann variants under Neumann conditions).
pub fn estimate(
    target: &DomainExpr,
    reference: &DomainExpr,
    bc: BoundaryCondition,
    method: Method,
    modes: usize,
) -> Result<EstimateReport> {
    let t = ScalingDomain::from_expr(target, bc)?;
    let r = ScalingDomain::from_expr(reference, bc)?;
    let series = reference_series(reference, bc, modes)?;
    let report = match (bc, method) {
        (BoundaryCondition::Dirichlet, Method::Linear) => estimate_linear(&linear_params(&t, &r)?, &series, modes)?,
        (BoundaryCondition::Dirichlet, Method::Quadratic) => {
            estimate_quadratic(&quadratic_params(&t, &r)?, &series, modes)?
        }
        (BoundaryCondition::Neumann, Method::Linear) => {
            estimate_neumann(&quadratic_params(&t, &r)?, NeumannMethod::Linear, &series, modes)?
        }
        (BoundaryCondition::Neumann, Method::Quadratic) => {
            estimate_neumann(&quadratic_params(&t, &r)?, NeumannMethod::Cubic, &series, modes)?
        }
    };
    Ok(report.with_labels(target.to_string(), reference.to_string()))
}
