//! Flat limits of the scaling estimates and the closed forms for caps and
//! sectors on S².
//!
//! Flat-limit functions return δ-scaled coefficients ν·δ for a target of
//! linear size δ → 0, with the leading order taken analytically.

use std::f64::consts::PI;

use super::{lambda_of_nu, EstimateMethod, EstimateReport, EstimateRow, ScalingDomain};
use crate::error::{Error, Result};
use crate::geometry::{corner_weight, Corner};

/// j₀,₁, j₁,₁, j₂,₁: the first three Dirichlet levels of the unit disk.
pub const BESSEL_ZEROS: [f64; 3] = [2.404_825_557_695_773, 3.831_705_970_207_512, 5.135_622_301_840_683];

/// A planar domain at unit scale.
#[derive(Debug, Clone, PartialEq)]
pub struct FlatDomain {
    pub area: f64,
    pub perimeter: f64,
    /// ∫ K along the boundary.
    pub curvature_integral: f64,
    pub corners: Vec<Corner>,
}

impl FlatDomain {
    pub fn unit_disk() -> Self {
        Self {
            area: PI,
            perimeter: 2.0 * PI,
            curvature_integral: 2.0 * PI,
            corners: Vec::new(),
        }
    }

    /// Side length 1.
    pub fn equilateral_triangle() -> Self {
        Self {
            area: 3f64.sqrt() / 4.0,
            perimeter: 3.0,
            curvature_integral: 0.0,
            corners: vec![Corner {
                angle: PI / 3.0,
                measure: 3.0,
            }],
        }
    }

    /// a2 without the bulk term, which vanishes relative to the others.
    pub fn a2(&self) -> f64 {
        self.curvature_integral / 3.0 + self.corners.iter().map(|c| c.measure * corner_weight(c.angle)).sum::<f64>()
    }
}

fn require_s2(reference: &ScalingDomain) -> Result<()> {
    if reference.geometry.n != 3 {
        return Err(Error::Dimension {
            domain: "flat-limit reference",
            n: reference.geometry.n as i64,
            min: 3,
        });
    }
    Ok(())
}

/// δν = ½[L/A − √(A₀/A)(γ₀ − 1)] + √(A₀/A) ν₀.
pub fn flat_linear(flat: &FlatDomain, reference: &ScalingDomain, nu0: &[f64]) -> Result<Vec<f64>> {
    require_s2(reference)?;
    let b = (reference.geometry.area / flat.area).sqrt();
    let shift = 0.5 * (flat.perimeter / flat.area - b * (reference.inputs.gamma - 1.0));
    Ok(nu0.iter().map(|&nu| shift + b * nu).collect())
}

/// δν = L/(2A) + √((A₀/A)[(ν₀ + p₀)² + q₀] + L²/(4A²) − a2/A).
pub fn flat_quadratic(flat: &FlatDomain, reference: &ScalingDomain, nu0: &[f64]) -> Result<Vec<f64>> {
    require_s2(reference)?;
    let (a, l) = (flat.area, flat.perimeter);
    let ratio = reference.geometry.area / a;
    let (p0, q0) = (reference.inputs.p, reference.inputs.q);
    nu0.iter()
        .enumerate()
        .map(|(i, &nu)| {
            let disc = ratio * ((nu + p0).powi(2) + q0) + l * l / (4.0 * a * a) - flat.a2() / a;
            if disc < 0.0 {
                return Err(Error::NegativeDiscriminant { mode: i + 1, value: disc });
            }
            Ok(l / (2.0 * a) + disc.sqrt())
        })
        .collect()
}

/// Estimate on S² from a flat reference domain with known eigenvalues:
/// ν_k = ½(L/A − L₀/√(A·A₀) − 1) + √(A₀λ₀ₖ/A).
pub fn flat_reference_estimate(area: f64, boundary: f64, flat: &FlatDomain, lambda0: &[f64]) -> EstimateReport {
    let shift = 0.5 * (boundary / area - flat.perimeter / (area * flat.area).sqrt() - 1.0);
    let multiplicity = |l: f64| lambda0.iter().filter(|&&x| (x - l).abs() <= 1e-12 * l.abs()).count() as u64;
    let rows = lambda0
        .iter()
        .enumerate()
        .map(|(i, &l0)| {
            let nu = shift + (flat.area * l0 / area).sqrt();
            EstimateRow {
                k: i + 1,
                nu_ref: l0.sqrt(),
                nu,
                multiplicity: multiplicity(l0),
                lambda: lambda_of_nu(nu, 3),
            }
        })
        .collect();
    EstimateReport {
        rows,
        method: EstimateMethod::FlatReference,
        target: String::new(),
        reference: String::new(),
        n: 3,
    }
}

/// Dirichlet eigenvalues (16π²/9)(m² + mn + n²), m, n ≥ 1, of the unit
/// equilateral triangle, one entry per mode.
pub fn lame_eigenvalues(count: usize) -> Vec<f64> {
    let mut levels: Vec<u64> = Vec::new();
    let mut m_max = 1u64;
    // every pair with m² + mn + n² ≤ 3m_max² is present once m, n ≤ m_max
    while levels.len() < count || levels.len() < count + 2 * m_max as usize {
        m_max *= 2;
        levels = (1..=m_max)
            .flat_map(|m| (1..=m_max).map(move |n| m * m + m * n + n * n))
            .filter(|&v| v <= 3 * m_max * m_max)
            .collect();
        levels.sort_unstable();
        if levels.len() >= count {
            break;
        }
    }
    levels
        .into_iter()
        .take(count)
        .map(|v| 16.0 * PI * PI / 9.0 * v as f64)
        .collect()
}

/// Linear estimate for Cap(θ) from the half-sphere:
/// ν = ½(cot(θ/2) − 1) + ν₀/(√2 sin(θ/2)).
pub fn cap_linear_closed_form(theta: f64, nu0: f64) -> f64 {
    let h = 0.5 * theta;
    0.5 * (h.cos() / h.sin() - 1.0) + nu0 / (2f64.sqrt() * h.sin())
}

/// Linear estimate for Sector(θ, φ) from the sector of the half-sphere
/// with the same opening angle.
pub fn sector_linear_closed_form(theta: f64, phi: f64, nu0: f64) -> f64 {
    let beta = 1.0 / (2f64.sqrt() * (0.5 * theta).sin());
    let gamma = (phi * theta.sin() + 2.0 * theta) / (phi * (1.0 - theta.cos()));
    0.5 * (gamma - beta * PI / phi - 1.0) + beta * nu0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::{parse_domain, BoundaryCondition};
    use crate::scaling::{estimate, Method};

    fn sd(text: &str) -> ScalingDomain {
        ScalingDomain::from_expr(&parse_domain(text).unwrap(), BoundaryCondition::Dirichlet).unwrap()
    }

    #[test]
    fn disk_from_half_sphere() {
        let v = flat_linear(&FlatDomain::unit_disk(), &sd("HalfSphere(3)"), &[1.0, 2.0, 3.0]).unwrap();
        for (got, k) in v.iter().zip(1..) {
            assert!((got - (1.0 + 2f64.sqrt() * k as f64)).abs() < 1e-14);
        }
    }

    #[test]
    fn small_caps_approach_flat_limit() {
        // independent route: the full estimator at a small radius
        let flat = flat_linear(&FlatDomain::unit_disk(), &sd("HalfSphere(3)"), &[1.0]).unwrap()[0];
        let delta = 1e-4;
        let t = parse_domain(&format!("Cap(theta={delta})")).unwrap();
        let r = estimate(&t, &parse_domain("HalfSphere(3)").unwrap(), BoundaryCondition::Dirichlet, Method::Linear, 1)
            .unwrap();
        assert!((r.rows[0].nu * delta - flat).abs() < 1e-3);
    }

    #[test]
    fn equilateral_from_octant() {
        let tri = FlatDomain::equilateral_triangle();
        let lin = flat_linear(&tri, &sd("T(3)"), &[3.0, 5.0, 7.0]).unwrap();
        assert!((lin[0] - 7.273).abs() < 1e-3);
        assert!((lin[1] - 11.083).abs() < 1e-3);
        assert!((lin[2] - 14.892).abs() < 1e-3);
        let quad = flat_quadratic(&tri, &sd("T(3)"), &[3.0]).unwrap();
        assert!((quad[0] - 7.2613).abs() < 1e-4);
        assert!((tri.a2() - 4.0 * PI / 3.0).abs() < 1e-14);
    }

    #[test]
    fn lame_levels() {
        let l = lame_eigenvalues(6);
        let roots: Vec<f64> = l.iter().map(|x| x.sqrt()).collect();
        assert!((roots[0] - 7.255).abs() < 1e-3);
        assert!((roots[1] - 11.082).abs() < 1e-3);
        assert_eq!(l[1], l[2]);
        assert!((roots[3] - 14.510).abs() < 1e-3);
        assert_eq!(lame_eigenvalues(50).len(), 50);
        assert!(lame_eigenvalues(50).windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn flat_reference_degenerate_identity() {
        // L/A − L₀/√(AA₀) = 1 removes the shift
        let flat = FlatDomain::equilateral_triangle();
        let area = 0.7;
        let boundary = area * (1.0 + flat.perimeter / (area * flat.area).sqrt());
        let lambda0 = lame_eigenvalues(3);
        let r = flat_reference_estimate(area, boundary, &flat, &lambda0);
        for (row, l0) in r.rows.iter().zip(&lambda0) {
            assert!((row.nu - (flat.area * l0 / area).sqrt()).abs() < 1e-12);
        }
        assert_eq!(r.rows[1].multiplicity, 2);
    }

    #[test]
    fn octant_from_lame() {
        // frozen from an independent evaluation of the same expression
        let r = flat_reference_estimate(PI / 2.0, 1.5 * PI, &FlatDomain::equilateral_triangle(), &lame_eigenvalues(1));
        let expect = 0.5 * (3.0 - 3.0 / (PI / 2.0 * 3f64.sqrt() / 4.0).sqrt() - 1.0)
            + (3f64.sqrt() / 4.0 * 16.0 * PI * PI / 3.0 / (PI / 2.0)).sqrt();
        assert!((r.rows[0].nu - expect).abs() < 1e-12);
    }

    #[test]
    fn cap_closed_form() {
        let nu = cap_linear_closed_form(PI / 3.0, 1.0);
        assert!((nu - 1.780_239_0).abs() < 1e-7);
        assert!((lambda_of_nu(nu, 3) - 4.949_490).abs() < 1e-6);
    }

    #[test]
    fn sector_reduces_to_half_sphere_sector() {
        let phi = 1.3;
        let nu0 = 1.0 + PI / phi;
        assert!((sector_linear_closed_form(PI / 2.0, phi, nu0) - nu0).abs() < 1e-14);
    }
}
