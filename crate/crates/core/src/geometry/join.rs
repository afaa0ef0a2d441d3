//! Size fractions of join products.
//!
//! Every quantity is kept relative to the unit sphere of matching dimension:
//! area over |S^{n−1}|, boundary over |S^{n−2}|, corner measure over
//! |S^{n−3}|. In those units the join is bilinear.

use std::f64::consts::PI;

use super::regular::{regular_t_boundary_size, regular_t_corner_measure, regular_t_size};
use super::{sphere_size_ext, Corner};
use crate::domain::{DomainExpr, NamedDomain};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Fractions {
    pub n: u32,
    pub area: f64,
    pub boundary: f64,
    /// Dihedral angle and corner-measure fraction.
    pub corners: Vec<(f64, f64)>,
}

impl Fractions {
    fn join(&self, other: &Fractions) -> Fractions {
        let mut corners: Vec<(f64, f64)> = self
            .corners
            .iter()
            .map(|&(phi, c)| (phi, c * other.area))
            .chain(other.corners.iter().map(|&(phi, c)| (phi, c * self.area)))
            .collect();
        // boundary × boundary meets at a right angle
        let crossing = self.boundary * other.boundary;
        if crossing > 0.0 {
            corners.push((PI / 2.0, crossing));
        }
        Fractions {
            n: self.n + other.n,
            area: self.area * other.area,
            boundary: self.boundary * other.area + self.area * other.boundary,
            corners,
        }
    }

    pub fn corner_list(&self) -> Vec<Corner> {
        if self.n < 3 {
            return Vec::new();
        }
        let unit = sphere_size_ext(self.n - 2);
        let mut out: Vec<Corner> = Vec::new();
        for &(angle, c) in &self.corners {
            match out.iter_mut().find(|k| (k.angle - angle).abs() <= 1e-12 * angle.max(1.0)) {
                Some(k) => k.measure += c * unit,
                None => out.push(Corner {
                    angle,
                    measure: c * unit,
                }),
            }
        }
        out
    }
}

fn leaf(d: &DomainExpr) -> Result<Fractions> {
    match *d {
        DomainExpr::S0 => Ok(Fractions {
            n: 1,
            area: 1.0,
            boundary: 0.0,
            corners: Vec::new(),
        }),
        DomainExpr::T0 => Ok(Fractions {
            n: 1,
            area: 0.5,
            boundary: 1.0,
            corners: Vec::new(),
        }),
        DomainExpr::Named(NamedDomain::Arc { angle }) => Ok(Fractions {
            n: 2,
            area: angle / (2.0 * PI),
            boundary: 1.0,
            corners: vec![(angle, 1.0)],
        }),
        DomainExpr::Named(NamedDomain::RegularT { n, rho }) if n >= 3 => {
            let (area, boundary) = if n == 3 {
                (3.0 * (-rho).acos() - PI, 3.0 * (-rho / (1.0 + rho)).acos())
            } else {
                (regular_t_size(n, rho)?, regular_t_boundary_size(n, rho)?)
            };
            let pairs = (n * (n - 1) / 2) as f64;
            let corner = if n == 3 { 1.0 } else { regular_t_corner_measure(n, rho)? };
            Ok(Fractions {
                n,
                area: area / sphere_size_ext(n),
                boundary: boundary / sphere_size_ext(n - 1),
                corners: vec![((-rho).acos(), pairs * corner / sphere_size_ext(n - 2))],
            })
        }
        ref other => Err(Error::UnsupportedDomain {
            domain: other.to_string(),
            operation: "join geometry",
        }),
    }
}

/// Fractions of a join of atoms and regular domains.
pub(crate) fn fractions(d: &DomainExpr) -> Result<Fractions> {
    let leaves = d.leaves();
    let mut iter = leaves.iter();
    let first = leaf(iter.next().expect("a domain has at least one leaf"))?;
    iter.try_fold(first, |acc, l| Ok(acc.join(&leaf(l)?)))
}
