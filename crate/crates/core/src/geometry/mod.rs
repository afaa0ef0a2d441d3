//! Sizes, curvature data and the asymptotic coefficients derived from them.

mod join;
pub mod orthant;
pub mod regular;

use std::f64::consts::PI;

use crate::domain::{BoundaryCondition, DomainExpr, NamedDomain};
use crate::error::{Error, Result};
use crate::special::quadrature::{integrate_adaptive, Tolerance};

pub use orthant::{general_t_size_fraction, regular_correlation, OrthantEstimate};
pub use regular::{
    regular_t_boundary_size, regular_t_corner_measure, regular_t_fraction,
    regular_t_recursion_residual, regular_t_size, small_rho_residual, t_size,
};

/// |S^{n−1}| = 2π^{n/2}/Γ(n/2), so |S⁰| = 2.
pub fn sphere_size(n: u32) -> f64 {
    assert!(n >= 1, "sphere_size needs n >= 1");
    // |S^{k+1}| = 2π/k · |S^{k−1}|
    let (mut size, mut k) = if n % 2 == 1 { (2.0, 1) } else { (2.0 * PI, 2) };
    while k < n {
        size *= 2.0 * PI / k as f64;
        k += 2;
    }
    size
}

/// sphere_size with |S^{−1}| taken as 1, so that the boundary of a
/// one-dimensional domain counts its end points.
pub(crate) fn sphere_size_ext(n: u32) -> f64 {
    if n == 0 {
        1.0
    } else {
        sphere_size(n)
    }
}

/// A corner locus of constant dihedral angle. The measure is 1 per vertex
/// on S² and the (n−3)-volume of the locus above that.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Corner {
    pub angle: f64,
    pub measure: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DomainGeometry {
    pub n: u32,
    pub area: f64,
    pub boundary: f64,
    /// ∫_Ω R with R = (n−1)(n−2).
    pub bulk_r_integral: f64,
    /// ∫_∂Ω K, geodesic curvature of the boundary.
    pub boundary_k_integral: f64,
    pub corners: Vec<Corner>,
    pub bc: BoundaryCondition,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatCoeffs {
    pub a0: f64,
    pub a1: f64,
    pub a2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalingInputs {
    pub gamma: f64,
    pub p: f64,
    pub q: f64,
    pub c0: f64,
    pub c1: f64,
}

/// Coefficients of M at z = 1 predicted from geometry. b2 needs n ≥ 3.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeometricCoeffs {
    pub c0: f64,
    pub c1: f64,
    pub gamma: f64,
    pub b0: f64,
    pub b1: f64,
    pub b2: Option<f64>,
}

fn curvature(n: u32) -> f64 {
    (n as f64 - 1.0) * (n as f64 - 2.0)
}

fn cap_geometry(n: u32, theta: f64, bc: BoundaryCondition) -> Result<DomainGeometry> {
    let rim = sphere_size(n - 1);
    let area = if n == 3 {
        2.0 * PI * (1.0 - theta.cos())
    } else {
        let k = n as i32 - 2;
        rim * integrate_adaptive(&|t: f64| t.sin().powi(k), 0.0, theta, Tolerance::new(1e-15, 1e-13))?
    };
    let boundary = rim * theta.sin().powi(n as i32 - 2);
    Ok(DomainGeometry {
        n,
        area,
        boundary,
        bulk_r_integral: curvature(n) * area,
        boundary_k_integral: (n as f64 - 2.0) * theta.cos() / theta.sin() * boundary,
        corners: Vec::new(),
        bc,
    })
}

fn sector_geometry(theta: f64, phi: f64, bc: BoundaryCondition) -> DomainGeometry {
    let area = phi * (1.0 - theta.cos());
    DomainGeometry {
        n: 3,
        area,
        boundary: phi * theta.sin() + 2.0 * theta,
        bulk_r_integral: 2.0 * area,
        boundary_k_integral: phi * theta.cos(),
        corners: vec![
            Corner { angle: phi, measure: 1.0 },
            Corner { angle: PI / 2.0, measure: 2.0 },
        ],
        bc,
    }
}

/// Geometry of a catalog domain or a join of atoms and regular domains.
pub fn catalog_geometry(d: &DomainExpr, bc: BoundaryCondition) -> Result<DomainGeometry> {
    let leaves = d.leaves();
    if let [DomainExpr::Named(named)] = leaves.as_slice() {
        match *named {
            NamedDomain::Cap { n, theta } => return cap_geometry(n, theta, bc),
            NamedDomain::Sector { theta, phi } => return Ok(sector_geometry(theta, phi, bc)),
            _ => {}
        }
    }
    if !d.capabilities().geometry_known {
        return Err(Error::UnsupportedDomain {
            domain: d.to_string(),
            operation: "geometry",
        });
    }
    let f = join::fractions(d)?;
    let area = f.area * sphere_size(f.n);
    let boundary = f.boundary * sphere_size_ext(f.n - 1);
    Ok(DomainGeometry {
        n: f.n,
        area,
        boundary,
        bulk_r_integral: curvature(f.n) * area,
        boundary_k_integral: 0.0,
        corners: f.corner_list(),
        bc,
    })
}

/// |Ω| of a catalog domain.
pub fn domain_size(d: &DomainExpr) -> Result<f64> {
    Ok(catalog_geometry(d, BoundaryCondition::Dirichlet)?.area)
}

/// (1/6)(π²/φ − φ) per unit corner measure.
pub fn corner_weight(angle: f64) -> f64 {
    (PI * PI / angle - angle) / 6.0
}

impl DomainGeometry {
    pub fn corner_a2(&self) -> f64 {
        self.corners.iter().map(|c| c.measure * corner_weight(c.angle)).sum()
    }

    pub fn heat_coeffs(&self) -> HeatCoeffs {
        HeatCoeffs {
            a0: self.area,
            a1: -self.bc.sign() * PI.sqrt() / 2.0 * self.boundary,
            a2: self.bulk_r_integral / 6.0 + self.boundary_k_integral / 3.0 + self.corner_a2(),
        }
    }

    pub fn scaling_inputs(&self) -> ScalingInputs {
        let n = self.n as f64;
        let gamma = self.bc.sign() * 0.5 * sphere_size(self.n) / sphere_size_ext(self.n - 1)
            * self.boundary
            / self.area;
        let c0 = 2.0 * self.area / sphere_size(self.n);
        let l = (n - 2.0) / 2.0;
        ScalingInputs {
            gamma,
            p: l - gamma / 2.0,
            q: -l * l - (n - 2.0) * gamma * gamma / 4.0 + self.heat_coeffs().a2 / self.area,
            c0,
            c1: -(1.0 + gamma) * c0 / 2.0,
        }
    }

    /// b0 = c0, b1/b0 = ℓ − γ/2 and
    /// 2b2/b0 = (b1/b0)² − ℓ²/(n−2) − γ²/4 + a2/((n−2)|Ω|), ℓ = (n−2)/2.
    pub fn b_coefficients(&self) -> GeometricCoeffs {
        let s = self.scaling_inputs();
        let n = self.n as f64;
        let l = (n - 2.0) / 2.0;
        let ratio = l - s.gamma / 2.0;
        let b2 = (self.n >= 3).then(|| {
            let a2 = self.heat_coeffs().a2;
            s.c0 / 2.0
                * (ratio * ratio - l * l / (n - 2.0) - s.gamma * s.gamma / 4.0
                    + a2 / ((n - 2.0) * self.area))
        });
        GeometricCoeffs {
            c0: s.c0,
            c1: s.c1,
            gamma: s.gamma,
            b0: s.c0,
            b1: s.c0 * ratio,
            b2,
        }
    }
}

pub fn heat_coeffs(g: &DomainGeometry) -> HeatCoeffs {
    g.heat_coeffs()
}

pub fn scaling_inputs(g: &DomainGeometry) -> ScalingInputs {
    g.scaling_inputs()
}
